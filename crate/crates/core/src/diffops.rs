//! Differential operators as exact maps on polynomials.
//!
//! The split Dirac operator is `D_{x_p} = Σ_{i=0}^{p} e_i ∂_i` with `e_0 = 1`
//! and its conjugate is `∂_0 - Σ_{i=1}^{p} e_i ∂_i`; the ambient operator
//! runs over all coordinates and the underline variant omits `x0`. On
//! polynomials these act termwise, multiplying coefficients by `e_i` on the
//! requested side. Laplacians, the radial derivative `∂_r`, the Euler
//! operator `Σ_{i>p} x_i ∂_i` and shifted Laplacians `Δ ± λ^2` complete the
//! toolbox. Operator powers iterate the single application.

use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, Signature};
use crate::mvpoly::{ambient_vars, coordinate_index, radial_square_poly, MVPolynomial, Monomial};
use crate::rational::Rational;
use crate::slice::{xq_vector, SliceFunction, UnitVector};
use crate::{Error, Result};

/// Which side coefficients are multiplied on; left matches the left
/// function theory used throughout.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Sign of the `λ^2` shift in `Δ ± λ^2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftSign {
    Plus,
    Minus,
}

impl ShiftSign {
    pub fn factor(&self) -> i64 {
        match self {
            ShiftSign::Plus => 1,
            ShiftSign::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind {
    DiracP,
    DiracPConj,
    DiracAmbient,
    DiracAmbientConj,
    DiracUnderline,
    LaplacianStem,
    LaplacianAmbient,
    DR,
    EulerRadial,
    ShiftedLaplacian { lambda: Rational, sign: ShiftSign },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub side: Side,
    pub power: u32,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind) -> Self {
        OperatorSpec {
            kind,
            side: Side::Left,
            power: 1,
        }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn with_power(mut self, power: u32) -> Self {
        assert!(power >= 1, "operator power must be positive");
        self.power = power;
        self
    }
}

/// Applies an operator (with its power) to a polynomial whose variable set
/// matches the operator's domain.
pub fn apply(spec: &OperatorSpec, sig: &Signature, poly: &MVPolynomial) -> Result<MVPolynomial> {
    let mut out = poly.clone();
    for _ in 0..spec.power {
        out = apply_once(spec, sig, &out)?;
    }
    Ok(out)
}

fn apply_once(spec: &OperatorSpec, sig: &Signature, poly: &MVPolynomial) -> Result<MVPolynomial> {
    match &spec.kind {
        OperatorKind::DiracP => dirac_head(sig, poly, false, spec.side),
        OperatorKind::DiracPConj => dirac_head(sig, poly, true, spec.side),
        OperatorKind::DiracAmbient => dirac_ambient(sig, poly, false, spec.side),
        OperatorKind::DiracAmbientConj => dirac_ambient(sig, poly, true, spec.side),
        OperatorKind::DiracUnderline => dirac_underline(sig, poly, spec.side),
        OperatorKind::LaplacianStem => laplacian_stem(sig, poly),
        OperatorKind::LaplacianAmbient => laplacian_ambient(sig, poly),
        OperatorKind::DR => poly.partial_derivative("r"),
        OperatorKind::EulerRadial => euler_radial(sig, poly),
        OperatorKind::ShiftedLaplacian { lambda, sign } => {
            shifted_laplacian(sig, lambda, *sign, poly)
        }
    }
}

/// `Σ c_i ∂_{v_i} P` with each multivector coefficient applied on `side`.
fn dirac_over(
    poly: &MVPolynomial,
    terms: &[(String, Multivector)],
    side: Side,
) -> Result<MVPolynomial> {
    let mut out = MVPolynomial::zero(poly.vars().to_vec());
    for (var, coeff) in terms {
        let d = poly.partial_derivative(var)?;
        let piece = match side {
            Side::Left => d.mul_mv_left(coeff),
            Side::Right => d.mul_mv_right(coeff),
        };
        out = out.add(&piece);
    }
    Ok(out)
}

/// Coefficient for coordinate `i`: the scalar unit for `x0`, else `e_i`,
/// negated for the conjugate operators.
fn coordinate_coeff(coord: u32, conj: bool) -> Multivector {
    if coord == 0 {
        Multivector::one()
    } else if conj {
        -Multivector::generator(coord)
    } else {
        Multivector::generator(coord)
    }
}

fn require_coords(
    poly: &MVPolynomial,
    range: impl Iterator<Item = u32>,
    conj: bool,
) -> Result<Vec<(String, Multivector)>> {
    let mut terms = Vec::new();
    for coord in range {
        let name = format!("x{coord}");
        poly.var_index(&name)?;
        terms.push((name, coordinate_coeff(coord, conj)));
    }
    Ok(terms)
}

/// Split Dirac operator over the head coordinates present in the
/// polynomial: `Σ_{i=0..p} e_i ∂_i`, starting at `x1` when the polynomial
/// omits `x0`. The conjugate negates the generator terms.
pub fn dirac_head(
    sig: &Signature,
    poly: &MVPolynomial,
    conj: bool,
    side: Side,
) -> Result<MVPolynomial> {
    let start = if poly.vars().iter().any(|v| v == "x0") {
        0
    } else {
        1
    };
    let terms = require_coords(poly, start..=sig.p(), conj)?;
    dirac_over(poly, &terms, side)
}

/// Ambient Dirac operator `Σ_{i=0..p+q} e_i ∂_i` (conjugate:
/// `∂_0 - Σ e_i ∂_i`).
pub fn dirac_ambient(
    sig: &Signature,
    poly: &MVPolynomial,
    conj: bool,
    side: Side,
) -> Result<MVPolynomial> {
    expect_vars(poly, ambient_vars(sig, false))?;
    let terms = require_coords(poly, 0..=sig.n(), conj)?;
    dirac_over(poly, &terms, side)
}

/// Dirac operator without `x0`: `Σ_{i=1..p+q} e_i ∂_i`.
pub fn dirac_underline(sig: &Signature, poly: &MVPolynomial, side: Side) -> Result<MVPolynomial> {
    let terms = require_coords(poly, 1..=sig.n(), false)?;
    dirac_over(poly, &terms, side)
}

fn expect_vars(poly: &MVPolynomial, expected: Vec<String>) -> Result<()> {
    if poly.vars() != expected {
        return Err(Error::VariableMismatch {
            expected,
            got: poly.vars().to_vec(),
        });
    }
    Ok(())
}

/// Laplacian over every variable of the polynomial.
pub fn laplacian_all(poly: &MVPolynomial) -> MVPolynomial {
    let mut out = MVPolynomial::zero(poly.vars().to_vec());
    for (mono, coeff) in poly.terms() {
        for (i, &e) in mono.exps().iter().enumerate() {
            if e < 2 {
                continue;
            }
            let mut exps = mono.exps().to_vec();
            exps[i] -= 2;
            out.add_term(Monomial::new(exps), coeff.scale_i64((e * (e - 1)) as i64));
        }
    }
    out
}

/// Laplacian in the stem variables `(x0..xp, r)`.
pub fn laplacian_stem(sig: &Signature, poly: &MVPolynomial) -> Result<MVPolynomial> {
    let with_x0 = crate::mvpoly::stem_vars(sig, false);
    let without_x0 = crate::mvpoly::stem_vars(sig, true);
    if poly.vars() != with_x0 && poly.vars() != without_x0 {
        return Err(Error::VariableMismatch {
            expected: with_x0,
            got: poly.vars().to_vec(),
        });
    }
    Ok(laplacian_all(poly))
}

/// Laplacian in the ambient variables.
pub fn laplacian_ambient(sig: &Signature, poly: &MVPolynomial) -> Result<MVPolynomial> {
    let with_x0 = ambient_vars(sig, false);
    let without_x0 = ambient_vars(sig, true);
    if poly.vars() != with_x0 && poly.vars() != without_x0 {
        return Err(Error::VariableMismatch {
            expected: with_x0,
            got: poly.vars().to_vec(),
        });
    }
    Ok(laplacian_all(poly))
}

/// Euler operator `Σ_{i>p} x_i ∂_i`; scales each term by its degree in the
/// tail coordinates.
pub fn euler_radial(sig: &Signature, poly: &MVPolynomial) -> Result<MVPolynomial> {
    let tail_slots: Vec<usize> = poly
        .vars()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            coordinate_index(v).and_then(|c| if c > sig.p() { Some(i) } else { None })
        })
        .collect();
    if tail_slots.is_empty() {
        return Err(Error::VariableMismatch {
            expected: ambient_vars(sig, false),
            got: poly.vars().to_vec(),
        });
    }
    let mut out = MVPolynomial::zero(poly.vars().to_vec());
    for (mono, coeff) in poly.terms() {
        let tail_degree: u32 = tail_slots.iter().map(|&i| mono.exp(i)).sum();
        if tail_degree == 0 {
            continue;
        }
        out.add_term(mono.clone(), coeff.scale_i64(tail_degree as i64));
    }
    Ok(out)
}

/// `(Δ ± λ^2) P` over the ambient variables.
pub fn shifted_laplacian(
    sig: &Signature,
    lambda: &Rational,
    sign: ShiftSign,
    poly: &MVPolynomial,
) -> Result<MVPolynomial> {
    let shift = (lambda * lambda) * crate::rational::rat_int(sign.factor());
    Ok(laplacian_ambient(sig, poly)?.add(&poly.scale(&shift)))
}

/// Hyperbolic residuals of a slice function: with `E` the Euler operator
/// and `ρ = |x_q|^2`,
///
/// * `ρ Δ f_s° - (q-1) E f_s°` must vanish, and
/// * `ρ Δ w - (q-1) E w + (q-1) w` must vanish for `w = x_q f_s'`,
///
/// both as ambient polynomials.
pub fn hyperbolic_residuals(f: &SliceFunction) -> Result<(MVPolynomial, MVPolynomial)> {
    let sig = f.sig();
    let qm1 = sig.q() as i64 - 1;
    let rho = radial_square_poly(&sig, f.ambient().vars());
    let value = f.spherical_value();
    let first = rho
        .mul(&laplacian_ambient(&sig, &value)?)
        .sub(&euler_radial(&sig, &value)?.scale_i64(qm1));
    let w = f.ambient().sub(&value);
    let second = rho
        .mul(&laplacian_ambient(&sig, &w)?)
        .sub(&euler_radial(&sig, &w)?.scale_i64(qm1))
        .add(&w.scale_i64(qm1));
    Ok((first, second))
}

/// Both hyperbolic identities as booleans.
pub fn hyperbolic_check(f: &SliceFunction) -> Result<(bool, bool)> {
    let (a, b) = hyperbolic_residuals(f)?;
    Ok((a.is_zero(), b.is_zero()))
}

/// Residual of the slice Dirac operator `(D_{x_p} + ω ∂_r)` applied to
/// `F1 + ω F2` for a fixed unit vector `ω`, as a polynomial in the stem
/// variables.
///
/// This accepts raw components (no parity requirement): the restriction
/// equation makes sense for any pair, and deliberately broken pairs are
/// useful as negative fixtures.
pub fn gsm_restriction_residual(
    sig: &Signature,
    f1: &MVPolynomial,
    f2: &MVPolynomial,
    omega: &UnitVector,
) -> Result<MVPolynomial> {
    if f2.vars() != f1.vars() {
        return Err(Error::VariableMismatch {
            expected: f1.vars().to_vec(),
            got: f2.vars().to_vec(),
        });
    }
    f1.valid_for(sig)?;
    f2.valid_for(sig)?;
    let omega_mv = omega.to_multivector(sig)?;
    let restricted = f1.add(&f2.mul_mv_left(&omega_mv));
    let d_head = dirac_head(sig, &restricted, false, Side::Left)?;
    let d_r = restricted.partial_derivative("r")?;
    Ok(d_head.add(&d_r.mul_mv_left(&omega_mv)))
}

/// Residual of the Laplacian splitting identity: for any stem pair,
/// `Δ f = Δ_{x'} F1 + ω Δ_{x'} F2 + (q-1)((1/r) ∂_r F1 + ω ∂_r(F2/r))`
/// rewritten through the radial profiles so that every piece is a
/// polynomial:
///
/// `Δ f = [Δ_{x_p} G1 + 2q ∂G1 + 4t ∂²G1]_ρ + x_q [Δ_{x_p} G2 + (2q+4) ∂G2 + 4t ∂²G2]_ρ`
pub fn laplacian_split_residual(f: &SliceFunction) -> Result<MVPolynomial> {
    let sig = f.sig();
    let q = sig.q() as i64;
    let gvars = f.g1().vars().to_vec();
    let t_idx = gvars.len() - 1;
    let t_poly = MVPolynomial::var(gvars.clone(), t_idx);

    let head_lap = |g: &MVPolynomial| -> Result<MVPolynomial> {
        let mut out = MVPolynomial::zero(gvars.clone());
        for var in &gvars[..t_idx] {
            out = out.add(&g.partial_derivative(var)?.partial_derivative(var)?);
        }
        Ok(out)
    };

    // Δ_{x'} F1 = [Δ_{x_p} G1 + 2 ∂G1 + 4t ∂²G1]_ρ and (1/r) ∂_r F1 = [2 ∂G1]_ρ
    let g1_t = f.g1().partial_derivative("t")?;
    let g1_tt = g1_t.partial_derivative("t")?;
    let profile1 = head_lap(f.g1())?
        .add(&g1_t.scale_i64(2 + 2 * (q - 1)))
        .add(&t_poly.mul(&g1_tt).scale_i64(4));

    // Δ_{x'} F2 = r [Δ_{x_p} G2 + 6 ∂G2 + 4t ∂²G2]_ρ and ∂_r(F2/r) = 2r [∂G2]_ρ
    let g2_t = f.g2().partial_derivative("t")?;
    let g2_tt = g2_t.partial_derivative("t")?;
    let profile2 = head_lap(f.g2())?
        .add(&g2_t.scale_i64(6 + 2 * (q - 1)))
        .add(&t_poly.mul(&g2_tt).scale_i64(4));

    let xq = xq_vector(&sig, f.ambient().vars());
    let rhs = profile1
        .substitute_radial(&sig)?
        .add(&xq.mul(&profile2.substitute_radial(&sig)?));
    Ok(laplacian_ambient(&sig, f.ambient())?.sub(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeMask;
    use crate::mvpoly::stem_vars;
    use crate::rational::rat_int;
    use crate::slice::{paravector_power_stem, sphere_fixtures, SliceFunction, StemPair};
    use proptest::prelude::*;

    fn sig(p: u32, q: u32) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn sc(n: i64) -> Multivector {
        Multivector::scalar_i64(n)
    }

    #[test]
    fn ambient_laplacian_of_paravector_square() {
        // Δ(x^2) = 2 - 2q = -4 at (0,3)
        let s = sig(0, 3);
        let f = SliceFunction::induce(paravector_power_stem(&s, 2).unwrap()).unwrap();
        let lap = laplacian_ambient(&s, f.ambient()).unwrap();
        assert_eq!(
            lap,
            MVPolynomial::constant(ambient_vars(&s, false), sc(-4))
        );
    }

    #[test]
    fn ambient_dirac_kills_constants() {
        let s = sig(1, 2);
        let one = MVPolynomial::constant(ambient_vars(&s, false), Multivector::one());
        assert!(dirac_ambient(&s, &one, false, Side::Left).unwrap().is_zero());
    }

    #[test]
    fn conjugate_head_dirac_example() {
        // D̄_{x_p}(x0 + x1 e1) = 1 - e1 e1 = 2 at p = 1
        let s = sig(1, 2);
        let vars = ambient_vars(&s, false);
        let poly = MVPolynomial::var(vars.clone(), 0).add(&MVPolynomial::term(
            vars.clone(),
            vec![0, 1, 0, 0],
            Multivector::generator(1),
        ));
        let out = dirac_head(&s, &poly, true, Side::Left).unwrap();
        assert_eq!(out, MVPolynomial::constant(vars, sc(2)));
    }

    #[test]
    fn right_side_application_differs() {
        let s = sig(2, 1);
        let vars = ambient_vars(&s, false);
        // P = x1 e2
        let poly = MVPolynomial::term(vars.clone(), vec![0, 1, 0, 0], Multivector::generator(2));
        let left = dirac_head(&s, &poly, false, Side::Left).unwrap();
        let right = dirac_head(&s, &poly, false, Side::Right).unwrap();
        let e12 = Multivector::generator(1) * Multivector::generator(2);
        assert_eq!(left, MVPolynomial::constant(vars.clone(), e12.clone()));
        assert_eq!(right, MVPolynomial::constant(vars, -e12));
    }

    #[test]
    fn operator_powers_iterate() {
        let s = sig(0, 3);
        let f = SliceFunction::induce(paravector_power_stem(&s, 4).unwrap()).unwrap();
        let spec1 = OperatorSpec::new(OperatorKind::LaplacianAmbient);
        let spec2 = OperatorSpec::new(OperatorKind::LaplacianAmbient).with_power(2);
        let once = apply(&spec1, &s, f.ambient()).unwrap();
        let twice_by_hand = apply(&spec1, &s, &once).unwrap();
        assert_eq!(apply(&spec2, &s, f.ambient()).unwrap(), twice_by_hand);
    }

    #[test]
    fn euler_radial_scales_tail_degree() {
        let s = sig(0, 3);
        let vars = ambient_vars(&s, false);
        let xq = xq_vector(&s, &vars);
        // E(x_q) = x_q, E(x0) = 0
        assert_eq!(euler_radial(&s, &xq).unwrap(), xq);
        let head = MVPolynomial::var(vars, 0);
        assert!(euler_radial(&s, &head).unwrap().is_zero());
    }

    #[test]
    fn hyperbolic_examples() {
        let s = sig(0, 3);
        // f = x and f = x^2 and constants all satisfy both identities
        for k in [1u32, 2] {
            let f = SliceFunction::induce(paravector_power_stem(&s, k).unwrap()).unwrap();
            assert_eq!(hyperbolic_check(&f).unwrap(), (true, true));
        }
        let c = SliceFunction::induce(
            StemPair::new(
                s,
                MVPolynomial::constant(stem_vars(&s, false), Multivector::generator(3)),
                MVPolynomial::zero(stem_vars(&s, false)),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(hyperbolic_check(&c).unwrap(), (true, true));
    }

    #[test]
    fn gsm_restriction_examples() {
        let s = sig(0, 3);
        let vars = stem_vars(&s, false);
        // identity stem: zero residual for every fixture ω
        let f1 = MVPolynomial::var(vars.clone(), 0);
        let f2 = MVPolynomial::var(vars.clone(), 1);
        for omega in sphere_fixtures(s.q()) {
            assert!(gsm_restriction_residual(&s, &f1, &f2, &omega)
                .unwrap()
                .is_zero());
        }
        // broken pair (F1, F2) = (r, 0): residual is ω itself
        let r = MVPolynomial::var(vars.clone(), 1);
        let zero = MVPolynomial::zero(vars.clone());
        let e1_dir = &sphere_fixtures(s.q())[0];
        let res = gsm_restriction_residual(&s, &r, &zero, e1_dir).unwrap();
        assert_eq!(
            res,
            MVPolynomial::constant(vars.clone(), Multivector::generator(1))
        );
        // constant pair: zero residual
        let c = MVPolynomial::constant(vars.clone(), Multivector::generator(2));
        assert!(
            gsm_restriction_residual(&s, &c, &MVPolynomial::zero(vars), e1_dir)
                .unwrap()
                .is_zero()
        );
    }

    fn arb_ambient_poly(s: Signature) -> impl Strategy<Value = MVPolynomial> {
        let vars = ambient_vars(&s, false);
        let nvars = vars.len();
        prop::collection::vec(
            (prop::collection::vec(0u32..3, nvars), 0u16..8, -3i64..=3),
            0..5,
        )
        .prop_map(move |terms| {
            let mut out = MVPolynomial::zero(vars.clone());
            for (exps, mask, num) in terms {
                out.add_term(
                    Monomial::new(exps),
                    Multivector::blade(
                        BladeMask::from_bits(mask & ((1 << s.n()) - 1)),
                        rat_int(num),
                    ),
                );
            }
            out
        })
    }

    proptest! {
        #[test]
        fn laplacian_factors_through_dirac(p in arb_ambient_poly(Signature::new(1, 2).unwrap())) {
            let s = Signature::new(1, 2).unwrap();
            let lap = laplacian_ambient(&s, &p).unwrap();
            let d = dirac_ambient(&s, &p, false, Side::Left).unwrap();
            let dbar_d = dirac_ambient(&s, &d, true, Side::Left).unwrap();
            let dbar = dirac_ambient(&s, &p, true, Side::Left).unwrap();
            let d_dbar = dirac_ambient(&s, &dbar, false, Side::Left).unwrap();
            prop_assert_eq!(&lap, &dbar_d);
            prop_assert_eq!(&lap, &d_dbar);
        }

        #[test]
        fn conjugate_head_dirac_commutes_with_laplacian(
            p in arb_ambient_poly(Signature::new(1, 2).unwrap())
        ) {
            let s = Signature::new(1, 2).unwrap();
            let a = dirac_head(&s, &laplacian_ambient(&s, &p).unwrap(), true, Side::Left).unwrap();
            let b = laplacian_ambient(&s, &dirac_head(&s, &p, true, Side::Left).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn laplacian_splits_through_profiles(
            stem in crate::slice::tests::arb_stem(Signature::new(1, 2).unwrap())
        ) {
            let f = SliceFunction::induce(stem).unwrap();
            prop_assert!(laplacian_split_residual(&f).unwrap().is_zero());
        }

        #[test]
        fn slice_residuals_vanish_iff_gcr_does(
            stem in crate::slice::tests::arb_stem(Signature::new(1, 2).unwrap())
        ) {
            // (D_{x_p} + ω ∂_r)(F1 + ω F2) = R1 + ω R2, so vanishing on two
            // antipodal directions is equivalent to the system residual.
            let s = stem.sig();
            let r1 = dirac_head(&s, stem.f1(), false, Side::Left).unwrap()
                .sub(&stem.f2().partial_derivative("r").unwrap());
            let r2 = dirac_head(&s, stem.f2(), true, Side::Left).unwrap()
                .add(&stem.f1().partial_derivative("r").unwrap());
            let gcr_zero = r1.is_zero() && r2.is_zero();
            let mut all_zero = true;
            for omega in sphere_fixtures(s.q()) {
                let res = gsm_restriction_residual(&s, stem.f1(), stem.f2(), &omega).unwrap();
                let omega_mv = omega.to_multivector(&s).unwrap();
                let expect = r1.add(&r2.mul_mv_left(&omega_mv));
                prop_assert_eq!(&res, &expect);
                all_zero &= res.is_zero();
            }
            prop_assert_eq!(gcr_zero, all_zero);
        }
    }
}
