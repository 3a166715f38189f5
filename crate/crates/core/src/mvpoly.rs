//! Multivariate polynomials with multivector coefficients.
//!
//! Coefficients live in `R_{p+q}` and do not commute, but the variables are
//! real scalars, so a polynomial is a map from exponent vectors to
//! multivectors. Terms are kept in graded lexicographic order (total degree
//! first, then exponents with `x0` most significant), which fixes the
//! serialized form byte for byte.
//!
//! Variable naming convention: ambient polynomials use `x0..x{p+q}`, stem
//! polynomials `(x0..xp, r)`, and radial profiles `(x0..xp, t)` where `t`
//! stands for `r^2`. Solvers for systems that omit the first coordinate drop
//! `x0` from these lists.
//!
//! The module also houses the exact rational Gaussian elimination used by
//! every solver in the crate: reduced row echelon form, nullspace bases with
//! deterministic free-variable ordering, and linear solves with multivector
//! right-hand sides.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::{Multivector, Signature};
use crate::rational::Rational;
use crate::{Error, Result};

/// Exponent vector; one slot per variable of the owning polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&rhs.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Graded lexicographic order with `x0 < x1 < ...`: total degree first, then
/// lexicographic with the last variable most significant, so `x0^2` sorts
/// before `x0 x1` before `x1^2`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Index of a canonical coordinate name: `"x7"` is coordinate 7.
pub fn coordinate_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

/// Ambient variable list `x0..x{p+q}` (or `x1..` when `omit_x0`).
pub fn ambient_vars(sig: &Signature, omit_x0: bool) -> Vec<String> {
    let start = if omit_x0 { 1 } else { 0 };
    (start..=sig.n()).map(|i| format!("x{i}")).collect()
}

/// Stem variable list `(x0..xp, r)` (or `(x1..xp, r)` when `omit_x0`).
pub fn stem_vars(sig: &Signature, omit_x0: bool) -> Vec<String> {
    let start = if omit_x0 { 1 } else { 0 };
    let mut vars: Vec<String> = (start..=sig.p()).map(|i| format!("x{i}")).collect();
    vars.push("r".into());
    vars
}

/// Radial profile variable list `(x0..xp, t)` with `t` standing for `r^2`.
pub fn gform_vars(sig: &Signature, omit_x0: bool) -> Vec<String> {
    let start = if omit_x0 { 1 } else { 0 };
    let mut vars: Vec<String> = (start..=sig.p()).map(|i| format!("x{i}")).collect();
    vars.push("t".into());
    vars
}

/// Polynomial in named real variables with multivector coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MVPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Multivector>,
}

impl MVPolynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        MVPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, value: Multivector) -> Self {
        let nvars = vars.len();
        let mut out = MVPolynomial::zero(vars);
        out.add_term(Monomial::constant(nvars), value);
        out
    }

    /// Single term `coeff · x^exps`.
    pub fn term(vars: Vec<String>, exps: Vec<u32>, coeff: Multivector) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent arity mismatch");
        let mut out = MVPolynomial::zero(vars);
        out.add_term(Monomial::new(exps), coeff);
        out
    }

    /// The variable `vars[idx]` as a degree one polynomial.
    pub fn var(vars: Vec<String>, idx: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        MVPolynomial::term(vars, exps, Multivector::one())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> Multivector {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Multivector) {
        assert_eq!(mono.len(), self.vars.len(), "monomial arity mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_vars(&self, rhs: &MVPolynomial) {
        assert_eq!(self.vars, rhs.vars, "polynomial variable lists differ");
    }

    pub fn add(&self, rhs: &MVPolynomial) -> MVPolynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MVPolynomial) -> MVPolynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MVPolynomial {
        MVPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> MVPolynomial {
        if factor.is_zero() {
            return MVPolynomial::zero(self.vars.clone());
        }
        MVPolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(factor)))
                .collect(),
        }
    }

    pub fn scale_i64(&self, factor: i64) -> MVPolynomial {
        self.scale(&crate::rational::rat_int(factor))
    }

    /// Multiplies every coefficient by `m` on the left.
    pub fn mul_mv_left(&self, m: &Multivector) -> MVPolynomial {
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (mono, c) in self.terms() {
            out.add_term(mono.clone(), m * c);
        }
        out
    }

    /// Multiplies every coefficient by `m` on the right.
    pub fn mul_mv_right(&self, m: &Multivector) -> MVPolynomial {
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (mono, c) in self.terms() {
            out.add_term(mono.clone(), c * m);
        }
        out
    }

    /// Polynomial product; coefficients multiply in the order given
    /// (left factor's coefficients on the left).
    pub fn mul(&self, rhs: &MVPolynomial) -> MVPolynomial {
        self.assert_same_vars(rhs);
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MVPolynomial {
        let mut out = MVPolynomial::constant(self.vars.clone(), Multivector::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Termwise formal derivative with respect to a named variable.
    pub fn partial_derivative(&self, var: &str) -> Result<MVPolynomial> {
        let idx = self.var_index(var)?;
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (mono, coeff) in self.terms() {
            let e = mono.exp(idx);
            if e == 0 {
                continue;
            }
            let mut exps = mono.exps().to_vec();
            exps[idx] -= 1;
            out.add_term(Monomial::new(exps), coeff.scale_i64(e as i64));
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Multivector> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut out = Multivector::zero();
        for (mono, coeff) in self.terms() {
            let mut factor = Rational::one();
            for (i, &e) in mono.exps().iter().enumerate() {
                for _ in 0..e {
                    factor *= &point[i];
                }
            }
            out = out + coeff.scale(&factor);
        }
        Ok(out)
    }

    /// Replaces `t^k` by `(x_{p+1}^2 + ... + x_{p+q}^2)^k`, mapping a radial
    /// profile in `(x0..xp, t)` to the ambient polynomial it abbreviates.
    pub fn substitute_radial(&self, sig: &Signature) -> Result<MVPolynomial> {
        let omit_x0 = self.vars.first().map(|v| v != "x0").unwrap_or(true);
        let expected = gform_vars(sig, omit_x0);
        if self.vars != expected {
            return Err(Error::VariableMismatch {
                expected,
                got: self.vars.clone(),
            });
        }
        let out_vars = ambient_vars(sig, omit_x0);
        let t_idx = self.vars.len() - 1;
        let head_len = t_idx;

        let rho = radial_square_poly(sig, &out_vars);
        let max_k = self.terms.keys().map(|m| m.exp(t_idx)).max().unwrap_or(0);
        let mut rho_powers = Vec::with_capacity(max_k as usize + 1);
        rho_powers.push(MVPolynomial::constant(out_vars.clone(), Multivector::one()));
        for k in 1..=max_k {
            rho_powers.push(rho_powers[(k - 1) as usize].mul(&rho));
        }

        let mut out = MVPolynomial::zero(out_vars.clone());
        for (mono, coeff) in self.terms() {
            let k = mono.exp(t_idx);
            let mut head_exps = vec![0u32; out_vars.len()];
            head_exps[..head_len].copy_from_slice(&mono.exps()[..head_len]);
            let head = MVPolynomial::term(out_vars.clone(), head_exps, coeff.clone());
            out = out.add(&head.mul(&rho_powers[k as usize]));
        }
        Ok(out)
    }

    /// Splits into nonzero homogeneous parts, ascending by total degree.
    pub fn homogeneous_parts(&self) -> Vec<MVPolynomial> {
        let mut by_degree: BTreeMap<u32, MVPolynomial> = BTreeMap::new();
        for (mono, coeff) in self.terms() {
            by_degree
                .entry(mono.degree())
                .or_insert_with(|| MVPolynomial::zero(self.vars.clone()))
                .add_term(mono.clone(), coeff.clone());
        }
        by_degree.into_values().collect()
    }

    /// The degree `k` homogeneous part (possibly zero).
    pub fn homogeneous_part(&self, k: u32) -> MVPolynomial {
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (mono, coeff) in self.terms() {
            if mono.degree() == k {
                out.add_term(mono.clone(), coeff.clone());
            }
        }
        out
    }

    /// Drops all terms of total degree greater than `k`.
    pub fn truncate_above(&self, k: u32) -> MVPolynomial {
        let mut out = MVPolynomial::zero(self.vars.clone());
        for (mono, coeff) in self.terms() {
            if mono.degree() <= k {
                out.add_term(mono.clone(), coeff.clone());
            }
        }
        out
    }

    /// First term in canonical order, rendered for diagnostics.
    pub fn first_term_string(&self) -> Option<String> {
        self.terms
            .iter()
            .next()
            .map(|(m, c)| format!("({}) {}", c, monomial_string(m, &self.vars)))
    }

    pub fn valid_for(&self, sig: &Signature) -> Result<()> {
        for (_, coeff) in self.terms() {
            coeff.valid_for(sig)?;
        }
        Ok(())
    }
}

/// `x_{p+1}^2 + ... + x_{p+q}^2` over the given ambient variable list.
pub fn radial_square_poly(sig: &Signature, vars: &[String]) -> MVPolynomial {
    let mut out = MVPolynomial::zero(vars.to_vec());
    for (i, name) in vars.iter().enumerate() {
        let coord = coordinate_index(name).expect("ambient variables are coordinates");
        if coord > sig.p() {
            let mut exps = vec![0u32; vars.len()];
            exps[i] = 2;
            out.add_term(Monomial::new(exps), Multivector::one());
        }
    }
    out
}

fn monomial_string(m: &Monomial, vars: &[String]) -> String {
    if m.degree() == 0 {
        return "1".into();
    }
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) {}", c, monomial_string(m, &self.vars))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coeff: Multivector,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

/// JSON form: `{"vars": [...], "terms": [{"exp": [...], "coeff": {...}}]}`
/// with terms in graded lexicographic order.
impl Serialize for MVPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            vars: self.vars.clone(),
            terms: self
                .terms()
                .map(|(m, c)| TermRepr {
                    exp: m.exps().to_vec(),
                    coeff: c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MVPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut out = MVPolynomial::zero(repr.vars);
        for term in repr.terms {
            if term.exp.len() != out.vars.len() {
                return Err(D::Error::custom("exponent arity mismatch"));
            }
            out.add_term(Monomial::new(term.exp), term.coeff);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Exact rational linear algebra.
// ---------------------------------------------------------------------------

/// Homogeneous linear system over named real unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    unknowns: Vec<String>,
    rows: Vec<Vec<Rational>>,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<String>) -> Self {
        LinearSystem {
            unknowns,
            rows: Vec::new(),
        }
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.unknowns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Deterministic basis of the solution space: reduced row echelon
    /// pivots, free unknowns set to one in declaration order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let ncols = self.unknowns.len();
        let mut mat = self.rows.clone();
        let pivots = rref(&mut mat);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; ncols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..ncols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rational::zero(); ncols];
            vec[free] = Rational::one();
            for (row, &col) in pivots.iter().enumerate() {
                vec[col] = -mat[row][free].clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        let mut mat = self.rows.clone();
        rref(&mut mat).len()
    }
}

/// In-place reduced row echelon form; returns the pivot columns in order.
///
/// Pivot selection is the first row with a nonzero entry, so the result is
/// deterministic. Inner loops skip zero entries, which matters because the
/// solver matrices are block sparse.
pub fn rref(mat: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = mat.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = mat[0].len();
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(next_row, pivot_row);
        let inv = Rational::one() / mat[next_row][col].clone();
        if !inv.is_one() {
            for c in col..ncols {
                if !mat[next_row][c].is_zero() {
                    let v = &mat[next_row][c] * &inv;
                    mat[next_row][c] = v;
                }
            }
        }
        for r in 0..nrows {
            if r == next_row || mat[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut mat[r][col], Rational::zero());
            for c in (col + 1)..ncols {
                if mat[next_row][c].is_zero() {
                    continue;
                }
                let delta = &mat[next_row][c] * &factor;
                let v = &mat[r][c] - &delta;
                mat[r][c] = v;
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    pivots
}

/// Outcome of an exact linear solve with multivector right-hand side.
#[derive(Debug)]
pub enum MvSolve {
    /// Full column rank and consistent: the unique solution.
    Unique {
        solution: Vec<Multivector>,
        rank: usize,
    },
    /// Consistent but with free unknowns.
    Underdetermined { rank: usize },
    /// A zero row faces a nonzero right-hand side.
    Inconsistent { residual: Multivector },
}

/// Solves `A x = b` where `A` is rational and the unknowns and right-hand
/// side are multivectors; the same row operations act on both sides.
pub fn solve_with_mv_rhs(mut mat: Vec<Vec<Rational>>, mut rhs: Vec<Multivector>) -> MvSolve {
    assert_eq!(mat.len(), rhs.len(), "matrix and rhs row counts differ");
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(next_row, pivot_row);
        rhs.swap(next_row, pivot_row);
        let inv = Rational::one() / mat[next_row][col].clone();
        if !inv.is_one() {
            for c in col..ncols {
                if !mat[next_row][c].is_zero() {
                    let v = &mat[next_row][c] * &inv;
                    mat[next_row][c] = v;
                }
            }
            rhs[next_row] = rhs[next_row].scale(&inv);
        }
        for r in 0..nrows {
            if r == next_row || mat[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut mat[r][col], Rational::zero());
            for c in (col + 1)..ncols {
                if mat[next_row][c].is_zero() {
                    continue;
                }
                let delta = &mat[next_row][c] * &factor;
                let v = &mat[r][c] - &delta;
                mat[r][c] = v;
            }
            let delta = rhs[next_row].scale(&factor);
            rhs[r] = &rhs[r] - &delta;
        }
        pivots.push(col);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    let rank = pivots.len();
    for r in rank..nrows {
        if !rhs[r].is_zero() {
            return MvSolve::Inconsistent {
                residual: rhs[r].clone(),
            };
        }
    }
    if rank < ncols {
        return MvSolve::Underdetermined { rank };
    }
    let mut solution = vec![Multivector::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        solution[col] = rhs[row].clone();
    }
    MvSolve::Unique { solution, rank }
}
