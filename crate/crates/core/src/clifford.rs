//! Exact arithmetic in the real Clifford algebra `R_{p+q}`.
//!
//! The algebra is generated by `e_1, ..., e_{p+q}` subject to
//! `e_i e_j + e_j e_i = -2 δ_ij`; every generator squares to `-1`. A basis
//! blade `e_A = e_{j_1} ... e_{j_r}` (indices strictly increasing) is encoded
//! as a bitmask with bit `i-1` set iff `e_i` occurs, the empty mask being the
//! scalar unit `e_0 = 1`. Index 0 always denotes the scalar unit, never a
//! generator, so paravectors `x_0 + Σ x_i e_i` use the scalar slot for `x_0`.
//!
//! Coefficients are arbitrary precision rationals kept in lowest terms, so
//! equality of multivectors is literal equality of reduced fractions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Hard cap so blade masks fit one machine word.
pub const MAX_GENERATORS: u32 = 16;

/// The split `n = p + q` of the generator count.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    p: u32,
    q: u32,
}

impl Signature {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: "q must be at least 1".into(),
            });
        }
        if p + q > MAX_GENERATORS {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: format!("p + q must not exceed {MAX_GENERATORS}"),
            });
        }
        Ok(Signature { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of generators `n = p + q`.
    pub fn n(&self) -> u32 {
        self.p + self.q
    }

    /// Real dimension `2^n` of the algebra.
    pub fn blade_count(&self) -> usize {
        1usize << self.n()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Basis blade as a generator bitmask; bit `i-1` set iff `e_i` occurs.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeMask(u16);

impl BladeMask {
    /// The scalar unit `e_0 = 1`.
    pub const SCALAR: BladeMask = BladeMask(0);

    pub fn from_bits(bits: u16) -> Self {
        BladeMask(bits)
    }

    pub fn bits(&self) -> u16 {
        self.0
    }

    /// The generator `e_i`, `i` 1-based.
    pub fn generator(i: u32) -> Self {
        assert!(
            (1..=MAX_GENERATORS).contains(&i),
            "generator index {i} out of range"
        );
        BladeMask(1 << (i - 1))
    }

    /// Number of generators in the blade.
    pub fn grade(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_scalar(&self) -> bool {
        self.0 == 0
    }

    /// Generator indices (1-based, increasing).
    pub fn generators(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=MAX_GENERATORS).filter(move |i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn valid_for(&self, sig: &Signature) -> bool {
        sig.n() >= 16 || self.0 < (1u16 << sig.n())
    }
}

impl fmt::Display for BladeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_scalar() {
            return write!(f, "1");
        }
        write!(f, "e")?;
        let wide = self.generators().any(|i| i > 9);
        let mut first = true;
        for i in self.generators() {
            if !first && wide {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// Geometric product of two basis blades.
///
/// Returns the sign and the resulting blade `e_a · e_b = sign · e_{a XOR b}`.
/// The sign counts the transpositions needed to interleave the two sorted
/// generator lists plus one `-1` per shared generator (`e_i^2 = -1`).
pub fn blade_product(a: BladeMask, b: BladeMask) -> (i32, BladeMask) {
    let mut swaps = 0u32;
    let mut x = a.0 >> 1;
    while x != 0 {
        swaps += (x & b.0).count_ones();
        x >>= 1;
    }
    let squares = (a.0 & b.0).count_ones();
    let sign = if (swaps + squares) % 2 == 0 { 1 } else { -1 };
    (sign, BladeMask(a.0 ^ b.0))
}

/// Sign of the Clifford conjugation on a blade of grade `r`: `(-1)^{r(r+1)/2}`.
///
/// Conjugation reverses the factors and negates each generator, so
/// `conj(e_A) = conj(e_{j_r}) ... conj(e_{j_1})`.
pub fn conjugation_sign(grade: u32) -> i32 {
    if (grade * (grade + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Element of `R_{p+q}` as blade-indexed rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is semantic
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multivector {
    coeffs: BTreeMap<BladeMask, Rational>,
}

impl Multivector {
    pub fn zero() -> Self {
        Multivector::default()
    }

    pub fn one() -> Self {
        Multivector::scalar(Rational::from_integer(1.into()))
    }

    pub fn scalar(value: Rational) -> Self {
        Multivector::blade(BladeMask::SCALAR, value)
    }

    pub fn scalar_i64(value: i64) -> Self {
        Multivector::scalar(crate::rational::rat_int(value))
    }

    /// The generator `e_i` (1-based).
    pub fn generator(i: u32) -> Self {
        Multivector::blade(BladeMask::generator(i), Rational::from_integer(1.into()))
    }

    /// A single blade term `c · e_mask`.
    pub fn blade(mask: BladeMask, coeff: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(mask, coeff);
        }
        Multivector { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of a blade (zero when absent).
    pub fn coeff(&self, mask: BladeMask) -> Rational {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    /// Blade terms in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, &Rational)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    fn insert_add(&mut self, mask: BladeMask, value: Rational) {
        if value.is_zero() {
            return;
        }
        match self.coeffs.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Multivector::zero();
        }
        Multivector {
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    pub fn scale_i64(&self, factor: i64) -> Self {
        self.scale(&crate::rational::rat_int(factor))
    }

    /// Clifford conjugation; an anti-automorphism with `conj(e_j) = -e_j`.
    pub fn conjugate(&self) -> Self {
        Multivector {
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| {
                    let s = conjugation_sign(m.grade());
                    (*m, if s < 0 { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Sum of squared coefficients; zero iff the element is zero.
    pub fn norm_squared(&self) -> Rational {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// Largest generator index used (0 for scalars).
    pub fn max_generator(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|m| 16 - m.bits().leading_zeros())
            .max()
            .unwrap_or(0)
    }

    pub fn valid_for(&self, sig: &Signature) -> Result<()> {
        for (mask, _) in self.terms() {
            if !mask.valid_for(sig) {
                return Err(Error::MaskOutOfRange {
                    mask: mask.bits(),
                    n: sig.n(),
                });
            }
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;

    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in rhs.terms() {
            out.insert_add(mask, c.clone());
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in rhs.terms() {
            out.insert_add(mask, -c.clone());
        }
        out
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        Multivector {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &Multivector {
    type Output = Multivector;

    fn mul(self, rhs: &Multivector) -> Multivector {
        let mut out = Multivector::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                let (sign, mask) = blade_product(ma, mb);
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.insert_add(mask, c);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                (&self).$method(rhs)
            }
        }
        impl $trait<Multivector> for &Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        -&self
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, c) in self.terms() {
            let neg = crate::rational::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let one = abs == Rational::from_integer(1.into());
            if mask.is_scalar() {
                write!(f, "{}", format_rational(&abs))?;
            } else if one {
                write!(f, "{mask}")?;
            } else {
                write!(f, "{}{}", format_rational(&abs), mask)?;
            }
        }
        Ok(())
    }
}

/// JSON form: object mapping hex blade-mask strings to rational strings,
/// e.g. `{"0x0": "1", "0x3": "-2/3"}`. Bit `i-1` of the mask means `e_i`.
impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (mask, c) in self.terms() {
            map.serialize_entry(&format!("{:#x}", mask.bits()), &format_rational(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MvVisitor;

        impl<'de> Visitor<'de> for MvVisitor {
            type Value = Multivector;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from hex blade masks to rational strings")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Multivector, A::Error> {
                let mut out = Multivector::zero();
                while let Some((key, value)) = access.next_entry::<String, String>()? {
                    let bits = key
                        .strip_prefix("0x")
                        .or_else(|| key.strip_prefix("0X"))
                        .ok_or_else(|| {
                            serde::de::Error::custom(format!("blade mask `{key}` must be hex"))
                        })?;
                    let mask = u16::from_str_radix(bits, 16).map_err(|_| {
                        serde::de::Error::custom(format!("invalid blade mask `{key}`"))
                    })?;
                    let coeff = parse_rational(&value)
                        .map_err(|e| serde::de::Error::custom(e.to_string()))?;
                    out.insert_add(BladeMask::from_bits(mask), coeff);
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(MvVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn e(i: u32) -> Multivector {
        Multivector::generator(i)
    }

    /// Brute force product of blades given as generator index lists: bubble
    /// adjacent factors into increasing order, one sign flip per swap, and
    /// cancel equal neighbours with `e_i e_i = -1`.
    fn reorder_oracle(a: BladeMask, b: BladeMask) -> (i32, BladeMask) {
        let mut factors: Vec<u32> = a.generators().chain(b.generators()).collect();
        let mut sign = 1i32;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < factors.len() {
                if factors[i] == factors[i + 1] {
                    factors.drain(i..=i + 1);
                    sign = -sign;
                    changed = true;
                } else if factors[i] > factors[i + 1] {
                    factors.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                break;
            }
        }
        let mut mask = 0u16;
        for i in factors {
            mask |= 1 << (i - 1);
        }
        (sign, BladeMask::from_bits(mask))
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let m = BladeMask::generator(1);
        assert_eq!(blade_product(m, m), (-1, BladeMask::SCALAR));
    }

    #[test]
    fn generators_anticommute() {
        let e1 = BladeMask::generator(1);
        let e2 = BladeMask::generator(2);
        assert_eq!(blade_product(e1, e2), (1, BladeMask::from_bits(0b11)));
        assert_eq!(blade_product(e2, e1), (-1, BladeMask::from_bits(0b11)));
    }

    #[test]
    fn e12_e23_matches_oracle() {
        let e12 = BladeMask::from_bits(0b011);
        let e23 = BladeMask::from_bits(0b110);
        assert_eq!(blade_product(e12, e23), reorder_oracle(e12, e23));
        // e12 e23 = e1 (e2 e2) e3 = -e13
        assert_eq!(blade_product(e12, e23), (-1, BladeMask::from_bits(0b101)));
    }

    #[test]
    fn blade_product_matches_oracle_up_to_n6() {
        for a in 0u16..64 {
            for b in 0u16..64 {
                let (am, bm) = (BladeMask::from_bits(a), BladeMask::from_bits(b));
                assert_eq!(blade_product(am, bm), reorder_oracle(am, bm), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn paravector_product_example() {
        // (1 + e1)(1 - e1) = 1 - e1^2 = 2
        let a = Multivector::one() + e(1);
        let b = Multivector::one() - e(1);
        assert_eq!(a * b, Multivector::scalar_i64(2));
    }

    #[test]
    fn unit_is_neutral() {
        let a = Multivector::one() + e(1).scale(&rat(2, 3)) + e(2) * e(3);
        assert_eq!(&a * &Multivector::one(), a);
        assert_eq!(&Multivector::one() * &a, a);
    }

    #[test]
    fn triple_generator_product() {
        let prod = e(1) * e(2) * e(3);
        assert_eq!(prod, Multivector::blade(BladeMask::from_bits(0b111), rat_int(1)));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(e(1).conjugate(), -e(1));
        assert_eq!(Multivector::one().conjugate(), Multivector::one());
        let e12 = e(1) * e(2);
        assert_eq!(e12.conjugate(), -&e12);
        let e123 = e(1) * e(2) * e(3);
        assert_eq!(e123.conjugate(), e123);
    }

    #[test]
    fn norm_squared_examples() {
        assert_eq!((Multivector::one() + e(1)).norm_squared(), rat_int(2));
        assert_eq!(Multivector::zero().norm_squared(), rat_int(0));
        let v = e(2).scale(&rat(3, 5)) + e(3).scale(&rat(4, 5));
        assert_eq!(v.norm_squared(), rat_int(1));
    }

    #[test]
    fn json_round_trip_and_shape() {
        let a = Multivector::one() + e(1).scale(&rat(-2, 3)) + (e(1) * e(2)).scale(&rat(1, 2));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"0x0":"1","0x1":"-2/3","0x3":"1/2"}"#);
        let back: Multivector = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }

    prop_compose! {
        fn arb_mv(n: u32)(terms in prop::collection::vec(
            (0u16..(1 << n), -4i64..=4, 1i64..=3), 0..5
        )) -> Multivector {
            let mut out = Multivector::zero();
            for (mask, num, den) in terms {
                out = out + Multivector::blade(BladeMask::from_bits(mask), rat(num, den));
            }
            out
        }
    }

    proptest! {
        #[test]
        fn product_associative_and_distributive(
            a in arb_mv(4), b in arb_mv(4), c in arb_mv(4)
        ) {
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn conjugation_is_anti_automorphism(a in arb_mv(4), b in arb_mv(4)) {
            prop_assert_eq!((&a * &b).conjugate(), b.conjugate() * a.conjugate());
            prop_assert_eq!(a.conjugate().conjugate(), a);
        }

        #[test]
        fn one_vectors_square_to_minus_norm(
            comps in prop::collection::vec((-5i64..=5, 1i64..=4), 1..5)
        ) {
            let mut v = Multivector::zero();
            for (i, (n, d)) in comps.iter().enumerate() {
                v = v + Multivector::generator(i as u32 + 1).scale(&rat(*n, *d));
            }
            let expected = Multivector::scalar(-v.norm_squared());
            prop_assert_eq!(&v * &v, expected);
        }
    }
}
