//! Exact scalars: arbitrary-precision rationals and prime fields.
//!
//! Every scalar is kept in canonical form — rationals fully reduced with a
//! positive denominator, prime-field residues in `[0, p)` — so equality of
//! values is plain structural equality.

use alloc::string::String;
use alloc::{format, vec::Vec};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The coefficient field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The rational numbers.
    Rationals,
    /// The prime field with the given characteristic.
    PrimeField(u64),
}

/// Errors from constructing or combining scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The claimed characteristic is not prime (or is 0/1).
    NotPrime(u64),
    /// A value was parsed that does not denote a scalar of the field.
    BadScalar(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not a prime characteristic"),
            FieldError::BadScalar(s) => write!(f, "cannot parse scalar from {s:?}"),
        }
    }
}

impl core::error::Error for FieldError {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|sq| sq <= p).unwrap_or(false) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Checks that a prime field really has prime characteristic.
    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(FieldError::NotPrime(*p))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Fp { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Fp { value: 1 % *p, modulus: *p },
        }
    }

    /// Embeds a machine integer.
    pub fn integer(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let r = (v as i128).rem_euclid(*p as i128) as u64;
                Scalar::Fp { value: r, modulus: *p }
            }
        }
    }

    /// Builds `num/den` in the field (den inverted for prime fields).
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::BadScalar(format!("{num}/{den}")));
        }
        let d = self.integer(den);
        let inv = d
            .inverse()
            .ok_or_else(|| FieldError::BadScalar(format!("{num}/{den}")))?;
        Ok(&self.integer(num) * &inv)
    }

    /// Parses the serialized form: an optional sign, digits, and an optional
    /// `/denominator` part, e.g. `"5"`, `"-3/4"`.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let bad = || FieldError::BadScalar(String::from(s));
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let num: BigInt = num_s.parse().map_err(|_| bad())?;
        let den: BigInt = match den_s {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            FieldSpec::PrimeField(p) => {
                let pb = BigInt::from(*p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    // r is in [0, p) and p fits u64
                    let (_, digits) = r.to_u64_digits();
                    *digits.first().unwrap_or(&0)
                };
                let n = Scalar::Fp { value: reduce(&num), modulus: *p };
                let d = Scalar::Fp { value: reduce(&den), modulus: *p };
                let inv = d.inverse().ok_or_else(bad)?;
                Ok(&n * &inv)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element. All arithmetic stays in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Fp { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { value, modulus } => *value == 1 % *modulus,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Fp { value, modulus } => {
                if *value == 0 {
                    None
                } else {
                    Some(Scalar::Fp { value: mod_inverse(*value, *modulus), modulus: *modulus })
                }
            }
        }
    }

    /// The serialized form accepted back by [`FieldSpec::parse`].
    pub fn to_repr(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => format!("{value}"),
        }
    }

    /// The value as an `i64` when it is an integer that fits; used by the
    /// serializers to emit plain JSON numbers where possible.
    pub fn as_small_integer(&self) -> Option<i64> {
        match self {
            Scalar::Rat(r) => {
                if !r.denom().is_one() {
                    return None;
                }
                let n = r.numer();
                if n.bits() > 62 {
                    return None;
                }
                let (sign, digits) = n.to_u64_digits();
                let mag = *digits.first().unwrap_or(&0) as i64;
                Some(if sign == num_bigint::Sign::Minus { -mag } else { mag })
            }
            Scalar::Fp { value, .. } => {
                if *value <= i64::MAX as u64 {
                    Some(*value as i64)
                } else {
                    None
                }
            }
        }
    }
}

/// Inverse of `a` modulo the prime `p`, by the extended Euclidean algorithm.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse of a nonzero residue modulo a prime");
    t0.rem_euclid(p as i128) as u64
}

fn check_same_field(a: &Scalar, b: &Scalar) {
    debug_assert_eq!(
        a.field(),
        b.field(),
        "scalars from different fields must never meet in one computation"
    );
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                let v = ((*a as u128 + *b as u128) % *p as u128) as u64;
                Scalar::Fp { value: v, modulus: *p }
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                let v = ((*a as u128 + (*p - *b) as u128) % *p as u128) as u64;
                Scalar::Fp { value: v, modulus: *p }
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        check_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                let v = ((*a as u128 * *b as u128) % *p as u128) as u64;
                Scalar::Fp { value: v, modulus: *p }
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { value, modulus } => {
                Scalar::Fp { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_repr())
    }
}

/// Renders a coordinate vector like `[1, -3/4, 0]` for witnesses.
pub fn render_vector(v: &[Scalar]) -> String {
    let mut out = String::from("[");
    for (k, s) in v.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push_str(&s.to_repr());
    }
    out.push(']');
    out
}

/// Convenience used throughout the tests and builders.
pub fn scalars_from_i64(field: FieldSpec, vals: &[i64]) -> Vec<Scalar> {
    vals.iter().map(|v| field.integer(*v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let q = FieldSpec::Rationals;
        let half = q.fraction(2, 4).unwrap();
        assert_eq!(half.to_repr(), "1/2");
        let neg = q.fraction(3, -6).unwrap();
        assert_eq!(neg.to_repr(), "-1/2");
        assert_eq!(&half + &neg, q.zero());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FieldSpec::PrimeField(5);
        f5.validate().unwrap();
        let a = f5.integer(7); // 2 mod 5
        let b = f5.integer(-1); // 4 mod 5
        assert_eq!((&a * &b).to_repr(), "3");
        assert_eq!(&a.inverse().unwrap() * &a, f5.one());
        assert!(FieldSpec::PrimeField(6).validate().is_err());
        assert!(FieldSpec::PrimeField(1).validate().is_err());
    }

    #[test]
    fn parse_round_trip() {
        let q = FieldSpec::Rationals;
        for s in ["0", "17", "-17", "1/3", "-22/7"] {
            let v = q.parse(s).unwrap();
            assert_eq!(v.to_repr(), s);
        }
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
        let f7 = FieldSpec::PrimeField(7);
        assert_eq!(f7.parse("10").unwrap().to_repr(), "3");
        assert_eq!(f7.parse("1/3").unwrap().to_repr(), "5"); // 3*5 = 15 = 1 mod 7
    }

    #[test]
    fn small_integer_extraction() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.integer(-42).as_small_integer(), Some(-42));
        assert_eq!(q.fraction(1, 2).unwrap().as_small_integer(), None);
    }
}
