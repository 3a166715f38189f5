//! Stem pairs and the slice functions they induce.
//!
//! A stem pair is a pair `(F1, F2)` of polynomials in `(x0..xp, r)` with `F1`
//! even and `F2` odd in `r`. Writing a point of `R^{p+q+1}` as
//! `x = x_p + r ω` with `ω` a unit 1-vector in the last `q` coordinates, the
//! pair induces the slice function `f(x) = F1(x_p, r) + ω F2(x_p, r)`.
//! Because of the parity constraint there are polynomials `G1, G2` in
//! `(x0..xp, t)` with `F1 = G1(x_p, r^2)` and `F2 = r G2(x_p, r^2)`, and the
//! induced function is the honest ambient polynomial
//! `f = G1(x_p, ρ) + x_q G2(x_p, ρ)` where `ρ = |x_q|^2`. The spherical value
//! and spherical derivative of `f` are those two radial pieces.
//!
//! Everything here is exact: unit vectors are rational points on the sphere
//! (Pythagorean tuples), and all identity checks compare polynomials or
//! multivectors for literal equality.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::{Multivector, Signature};
use crate::mvpoly::{
    ambient_vars, coordinate_index, gform_vars, stem_vars, MVPolynomial, Monomial,
};
use crate::rational::{format_rational, rat, Rational};
use crate::{Error, Result};

/// Exact rational point on the unit sphere of `R^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitVector {
    components: Vec<Rational>,
}

impl UnitVector {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NotUnit("empty component list".into()));
        }
        let norm: Rational = components.iter().map(|c| c * c).sum();
        if !norm.is_one() {
            return Err(Error::NotUnit(format_rational(&norm)));
        }
        Ok(UnitVector { components })
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector {
            components: self.components.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// The 1-vector `Σ c_i e_{p+i}` sitting in the last `q` generators.
    pub fn to_multivector(&self, sig: &Signature) -> Result<Multivector> {
        if self.components.len() != sig.q() as usize {
            return Err(Error::ArityMismatch {
                expected: sig.q() as usize,
                got: self.components.len(),
            });
        }
        let mut out = Multivector::zero();
        for (i, c) in self.components.iter().enumerate() {
            out = out + Multivector::generator(sig.p() + 1 + i as u32).scale(c);
        }
        Ok(out)
    }
}

/// Deterministic library of rational unit vectors in `R^q`, built from
/// coordinate axes and Pythagorean tuples so that sphere points evaluate
/// exactly.
pub fn sphere_fixtures(q: u32) -> Vec<UnitVector> {
    let q = q as usize;
    let mut out = Vec::new();
    let mut push = |components: Vec<Rational>| {
        out.push(UnitVector::new(components).expect("fixture must be a unit vector"));
    };
    for i in 0..q {
        let mut v = vec![Rational::zero(); q];
        v[i] = Rational::one();
        push(v);
    }
    {
        let mut v = vec![Rational::zero(); q];
        v[0] = -Rational::one();
        push(v);
    }
    if q >= 2 {
        let mut v = vec![Rational::zero(); q];
        v[0] = rat(3, 5);
        v[1] = rat(4, 5);
        push(v.clone());
        v[0] = rat(4, 5);
        v[1] = rat(-3, 5);
        push(v.clone());
        v[0] = rat(5, 13);
        v[1] = rat(12, 13);
        push(v);
    }
    if q >= 3 {
        let mut v = vec![Rational::zero(); q];
        v[0] = rat(2, 3);
        v[1] = rat(2, 3);
        v[2] = rat(1, 3);
        push(v.clone());
        v[0] = rat(3, 5);
        v[1] = Rational::zero();
        v[2] = rat(4, 5);
        push(v);
    }
    if q >= 4 {
        let mut v = vec![Rational::zero(); q];
        for slot in v.iter_mut().take(4) {
            *slot = rat(1, 2);
        }
        push(v);
    }
    out
}

/// Fixture pairs `(ω, η)` used by the representation formula checks.
pub fn sphere_fixture_pairs(q: u32, count: usize) -> Vec<(UnitVector, UnitVector)> {
    let fixtures = sphere_fixtures(q);
    let n = fixtures.len();
    let mut pairs = Vec::new();
    for step in 1..n {
        for i in 0..n {
            if pairs.len() == count {
                return pairs;
            }
            pairs.push((fixtures[i].clone(), fixtures[(i + step) % n].clone()));
        }
    }
    // Small spheres (q = 1) have few rational points; pad with ω = η pairs.
    for i in 0..n {
        if pairs.len() == count {
            return pairs;
        }
        pairs.push((fixtures[i].clone(), fixtures[i].clone()));
    }
    pairs
}

/// Even/odd pair of stem polynomials in `(x0..xp, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemPair {
    sig: Signature,
    omit_x0: bool,
    f1: MVPolynomial,
    f2: MVPolynomial,
}

impl StemPair {
    /// Validates variables, coefficient masks and the `r`-parity of both
    /// components. Parity violations are hard errors that name the
    /// offending term.
    pub fn new(sig: Signature, f1: MVPolynomial, f2: MVPolynomial) -> Result<Self> {
        let omit_x0 = if f1.vars() == stem_vars(&sig, false) {
            false
        } else if f1.vars() == stem_vars(&sig, true) {
            true
        } else {
            return Err(Error::VariableMismatch {
                expected: stem_vars(&sig, false),
                got: f1.vars().to_vec(),
            });
        };
        if f2.vars() != f1.vars() {
            return Err(Error::VariableMismatch {
                expected: f1.vars().to_vec(),
                got: f2.vars().to_vec(),
            });
        }
        f1.valid_for(&sig)?;
        f2.valid_for(&sig)?;
        let r_idx = f1.vars().len() - 1;
        for (mono, _) in f1.terms() {
            if mono.exp(r_idx) % 2 != 0 {
                return Err(Error::ParityViolation {
                    slot: "F1",
                    term: f1.term_string(mono),
                });
            }
        }
        for (mono, _) in f2.terms() {
            if mono.exp(r_idx) % 2 != 1 {
                return Err(Error::ParityViolation {
                    slot: "F2",
                    term: f2.term_string(mono),
                });
            }
        }
        Ok(StemPair {
            sig,
            omit_x0,
            f1,
            f2,
        })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn omits_x0(&self) -> bool {
        self.omit_x0
    }

    pub fn f1(&self) -> &MVPolynomial {
        &self.f1
    }

    pub fn f2(&self) -> &MVPolynomial {
        &self.f2
    }

    /// `G1` with `F1(x_p, r) = G1(x_p, r^2)`, by halving the `r` exponents.
    pub fn g1(&self) -> MVPolynomial {
        let vars = gform_vars(&self.sig, self.omit_x0);
        let r_idx = self.f1.vars().len() - 1;
        let mut out = MVPolynomial::zero(vars);
        for (mono, coeff) in self.f1.terms() {
            let mut exps = mono.exps().to_vec();
            exps[r_idx] /= 2;
            out.add_term(Monomial::new(exps), coeff.clone());
        }
        out
    }

    /// `G2` with `F2(x_p, r) = r G2(x_p, r^2)`.
    pub fn g2(&self) -> MVPolynomial {
        let vars = gform_vars(&self.sig, self.omit_x0);
        let r_idx = self.f2.vars().len() - 1;
        let mut out = MVPolynomial::zero(vars);
        for (mono, coeff) in self.f2.terms() {
            let mut exps = mono.exps().to_vec();
            exps[r_idx] = (exps[r_idx] - 1) / 2;
            out.add_term(Monomial::new(exps), coeff.clone());
        }
        out
    }

    /// Right multiplication of both components by a constant multivector.
    pub fn mul_mv_right(&self, m: &Multivector) -> Result<StemPair> {
        StemPair::new(self.sig, self.f1.mul_mv_right(m), self.f2.mul_mv_right(m))
    }
}

/// Radial profile `G(x_p, t)` back to stem form `G(x_p, r^2)`.
pub fn profile_to_stem(g: &MVPolynomial, sig: &Signature) -> Result<MVPolynomial> {
    let omit_x0 = g.vars().first().map(|v| v != "x0").unwrap_or(true);
    let expected = gform_vars(sig, omit_x0);
    if g.vars() != expected {
        return Err(Error::VariableMismatch {
            expected,
            got: g.vars().to_vec(),
        });
    }
    let t_idx = g.vars().len() - 1;
    let mut out = MVPolynomial::zero(stem_vars(sig, omit_x0));
    for (mono, coeff) in g.terms() {
        let mut exps = mono.exps().to_vec();
        exps[t_idx] *= 2;
        out.add_term(Monomial::new(exps), coeff.clone());
    }
    Ok(out)
}

/// A stem pair together with its induced ambient polynomial and the cached
/// radial profiles `(G1, G2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFunction {
    stem: StemPair,
    ambient: MVPolynomial,
    g1: MVPolynomial,
    g2: MVPolynomial,
}

impl SliceFunction {
    /// Builds the ambient polynomial `G1(x_p, ρ) + x_q G2(x_p, ρ)` from a
    /// stem pair.
    pub fn induce(stem: StemPair) -> Result<SliceFunction> {
        let sig = stem.sig();
        let g1 = stem.g1();
        let g2 = stem.g2();
        let value = g1.substitute_radial(&sig)?;
        let derivative = g2.substitute_radial(&sig)?;
        let xq = xq_vector(&sig, value.vars());
        let ambient = value.add(&xq.mul(&derivative));
        Ok(SliceFunction {
            stem,
            ambient,
            g1,
            g2,
        })
    }

    pub fn sig(&self) -> Signature {
        self.stem.sig()
    }

    pub fn omits_x0(&self) -> bool {
        self.stem.omits_x0()
    }

    pub fn stem(&self) -> &StemPair {
        &self.stem
    }

    pub fn ambient(&self) -> &MVPolynomial {
        &self.ambient
    }

    pub fn g1(&self) -> &MVPolynomial {
        &self.g1
    }

    pub fn g2(&self) -> &MVPolynomial {
        &self.g2
    }

    /// Spherical value `f_s° = G1(x_p, ρ)` as an ambient polynomial.
    pub fn spherical_value(&self) -> MVPolynomial {
        self.g1
            .substitute_radial(&self.sig())
            .expect("cached profile is well formed")
    }

    /// Spherical derivative `f_s' = G2(x_p, ρ)` as an ambient polynomial.
    pub fn spherical_derivative(&self) -> MVPolynomial {
        self.g2
            .substitute_radial(&self.sig())
            .expect("cached profile is well formed")
    }

    /// Right multiplication by a constant multivector.
    pub fn mul_mv_right(&self, m: &Multivector) -> Result<SliceFunction> {
        SliceFunction::induce(self.stem.mul_mv_right(m)?)
    }
}

// ---------------------------------------------------------------------------
// Coordinate polynomials.
// ---------------------------------------------------------------------------

fn var_with_coeff(vars: &[String], idx: usize, coeff: Multivector) -> MVPolynomial {
    let mut exps = vec![0u32; vars.len()];
    exps[idx] = 1;
    MVPolynomial::term(vars.to_vec(), exps, coeff)
}

/// The paravector `x = x0 + Σ_{i>=1} x_i e_i` over the full ambient
/// variables.
pub fn paravector_poly(sig: &Signature) -> MVPolynomial {
    let vars = ambient_vars(sig, false);
    let mut out = MVPolynomial::zero(vars.clone());
    for (i, name) in vars.iter().enumerate() {
        let coord = coordinate_index(name).expect("ambient variable");
        let coeff = if coord == 0 {
            Multivector::one()
        } else {
            Multivector::generator(coord)
        };
        out = out.add(&var_with_coeff(&vars, i, coeff));
    }
    out
}

/// The conjugate paravector `x̄ = x0 - Σ_{i>=1} x_i e_i`.
pub fn conj_paravector_poly(sig: &Signature) -> MVPolynomial {
    let vars = ambient_vars(sig, false);
    let mut out = MVPolynomial::zero(vars.clone());
    for (i, name) in vars.iter().enumerate() {
        let coord = coordinate_index(name).expect("ambient variable");
        let coeff = if coord == 0 {
            Multivector::one()
        } else {
            -Multivector::generator(coord)
        };
        out = out.add(&var_with_coeff(&vars, i, coeff));
    }
    out
}

/// `x̄_p = x0 - Σ_{1<=i<=p} x_i e_i` over any variable list containing the
/// head coordinates.
pub fn head_conj_paravector(sig: &Signature, vars: &[String]) -> MVPolynomial {
    let mut out = MVPolynomial::zero(vars.to_vec());
    for (i, name) in vars.iter().enumerate() {
        let Some(coord) = coordinate_index(name) else {
            continue;
        };
        if coord > sig.p() {
            continue;
        }
        let coeff = if coord == 0 {
            Multivector::one()
        } else {
            -Multivector::generator(coord)
        };
        out = out.add(&var_with_coeff(vars, i, coeff));
    }
    out
}

/// `x_q = Σ_{i>p} x_i e_i` over the given variable list.
pub fn xq_vector(sig: &Signature, vars: &[String]) -> MVPolynomial {
    let mut out = MVPolynomial::zero(vars.to_vec());
    for (i, name) in vars.iter().enumerate() {
        let Some(coord) = coordinate_index(name) else {
            continue;
        };
        if coord <= sig.p() {
            continue;
        }
        out = out.add(&var_with_coeff(vars, i, Multivector::generator(coord)));
    }
    out
}

/// The 1-vector `Σ x_i e_i` over coordinate variables (no `x0` allowed).
pub fn x_underline_vector(vars: &[String]) -> Result<MVPolynomial> {
    let mut out = MVPolynomial::zero(vars.to_vec());
    for (i, name) in vars.iter().enumerate() {
        let coord = coordinate_index(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
        if coord == 0 {
            return Err(Error::UnknownVariable(
                "x0 has no generator; expected x1..xn".into(),
            ));
        }
        out = out.add(&var_with_coeff(vars, i, Multivector::generator(coord)));
    }
    Ok(out)
}

/// `|x|^2 = Σ v^2` over every variable in the list.
pub fn norm_squared_poly(vars: &[String]) -> MVPolynomial {
    let mut out = MVPolynomial::zero(vars.to_vec());
    for i in 0..vars.len() {
        let mut exps = vec![0u32; vars.len()];
        exps[i] = 2;
        out.add_term(Monomial::new(exps), Multivector::one());
    }
    out
}

// ---------------------------------------------------------------------------
// Symmetry (zonal) test.
// ---------------------------------------------------------------------------

/// Tests whether `P` depends only on `(x_p, |x_q|^2)`, returning the radial
/// profile `G` with `G(x_p, ρ) = P` when it does.
///
/// The candidate profile is read off the coefficients of pure
/// `x_{p+1}^{2k}` powers (the triangular part of the radial expansion) and
/// then verified by exact re-substitution, so the answer is never a guess.
pub fn is_symmetric(p: &MVPolynomial, sig: &Signature) -> Result<Option<MVPolynomial>> {
    let omit_x0 = p.vars().first().map(|v| v != "x0").unwrap_or(true);
    let expected = ambient_vars(sig, omit_x0);
    if p.vars() != expected {
        return Err(Error::VariableMismatch {
            expected,
            got: p.vars().to_vec(),
        });
    }
    let head_len = expected
        .iter()
        .filter(|v| coordinate_index(v).expect("coordinate") <= sig.p())
        .count();
    let gvars = gform_vars(sig, omit_x0);
    let mut g = MVPolynomial::zero(gvars);
    for (mono, coeff) in p.terms() {
        let tail = &mono.exps()[head_len..];
        if tail[0] % 2 != 0 || tail[1..].iter().any(|&e| e != 0) {
            continue;
        }
        let mut exps = mono.exps()[..head_len].to_vec();
        exps.push(tail[0] / 2);
        g.add_term(Monomial::new(exps), coeff.clone());
    }
    if g.substitute_radial(sig)? == *p {
        Ok(Some(g))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Representation formula.
// ---------------------------------------------------------------------------

/// Evaluates both sides of the representation formula
/// `f(x_p + r ω) = (f(x_p + r η) + f(x_p - r η))/2
///               + ω η (f(x_p - r η) - f(x_p + r η))/2`
/// at an exact point and reports whether they agree.
pub fn representation_formula_check(
    f: &SliceFunction,
    x_head: &[Rational],
    r: &Rational,
    omega: &UnitVector,
    eta: &UnitVector,
) -> Result<bool> {
    let sig = f.sig();
    let head_len = f.ambient().vars().len() - sig.q() as usize;
    if x_head.len() != head_len {
        return Err(Error::ArityMismatch {
            expected: head_len,
            got: x_head.len(),
        });
    }
    let point = |dir: &UnitVector, sign: i64| -> Result<Vec<Rational>> {
        if dir.len() != sig.q() as usize {
            return Err(Error::ArityMismatch {
                expected: sig.q() as usize,
                got: dir.len(),
            });
        }
        let mut coords = x_head.to_vec();
        for c in dir.components() {
            coords.push(r * c * crate::rational::rat_int(sign));
        }
        Ok(coords)
    };
    let lhs = f.ambient().evaluate(&point(omega, 1)?)?;
    let f_plus = f.ambient().evaluate(&point(eta, 1)?)?;
    let f_minus = f.ambient().evaluate(&point(eta, -1)?)?;
    let omega_mv = omega.to_multivector(&sig)?;
    let eta_mv = eta.to_multivector(&sig)?;
    let half = rat(1, 2);
    let rhs = (&f_plus + &f_minus).scale(&half)
        + (omega_mv * eta_mv * (&f_minus - &f_plus)).scale(&half);
    Ok(lhs == rhs)
}

/// Stem of the paravector power `x^k = (x0 + x_q)^k` for `p = 0`, from the
/// binomial expansion with `(r ω)^2 = -r^2`.
pub fn paravector_power_stem(sig: &Signature, k: u32) -> Result<StemPair> {
    if sig.p() != 0 {
        return Err(Error::BadQ {
            q: sig.q(),
            reason: "paravector powers induce slice functions only for p = 0".into(),
        });
    }
    let vars = stem_vars(sig, false);
    let mut f1 = MVPolynomial::zero(vars.clone());
    let mut f2 = MVPolynomial::zero(vars.clone());
    let mut binom = Rational::one();
    for j in 0..=k {
        if j > 0 {
            binom = binom * rat((k - j + 1) as i64, j as i64);
        }
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        let coeff = Multivector::scalar(binom.clone() * crate::rational::rat_int(sign));
        let term = MVPolynomial::term(vars.clone(), vec![k - j, j], coeff);
        if j % 2 == 0 {
            f1 = f1.add(&term);
        } else {
            f2 = f2.add(&term);
        }
    }
    StemPair::new(*sig, f1, f2)
}

// ---------------------------------------------------------------------------
// Serialization: a slice function is its stem pair.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StemRepr {
    p: u32,
    q: u32,
    #[serde(rename = "F1")]
    f1: MVPolynomial,
    #[serde(rename = "F2")]
    f2: MVPolynomial,
}

impl Serialize for StemPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StemRepr {
            p: self.sig.p(),
            q: self.sig.q(),
            f1: self.f1.clone(),
            f2: self.f2.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StemPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StemRepr::deserialize(deserializer)?;
        let sig = Signature::new(repr.p, repr.q).map_err(serde::de::Error::custom)?;
        StemPair::new(sig, repr.f1, repr.f2).map_err(serde::de::Error::custom)
    }
}

impl Serialize for SliceFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.stem.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SliceFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let stem = StemPair::deserialize(deserializer)?;
        SliceFunction::induce(stem).map_err(serde::de::Error::custom)
    }
}

impl MVPolynomial {
    /// Renders one term for diagnostics.
    pub(crate) fn term_string(&self, mono: &Monomial) -> String {
        let coeff = self.coeff(mono);
        let vars = self.vars();
        let mut parts = Vec::new();
        for (i, &e) in mono.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        let mono_s = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        format!("({coeff}) {mono_s}")
    }
}
