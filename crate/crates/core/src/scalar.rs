//! Exact field scalars: arbitrary-precision rationals and odd prime fields.
//!
//! A [`FieldScalar`] is a value together with the field it lives in, so that
//! mixed-field arithmetic can be rejected instead of silently coerced.
//! Rationals are kept in lowest terms with positive denominator (the
//! representation `num_rational` maintains); prime-field elements are reduced
//! residues `0 <= v < p`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Identifies the coefficient field of a scalar, an operator or a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    /// The rational numbers.
    Q,
    /// The prime field with the given (odd, machine-word) prime modulus.
    Fp(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "q"),
            FieldTag::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Errors surfaced by scalar arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed field tags: {0} vs {1}")]
    FieldMismatch(FieldTag, FieldTag),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires characteristic zero")]
    CharPUnsupported,
}

/// An exact element of `Q` or of a prime field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rat(BigRational),
    /// Reduced residue and its modulus.
    Mod(u64, u64),
}

impl FieldScalar {
    pub fn field(&self) -> FieldTag {
        match self {
            FieldScalar::Rat(_) => FieldTag::Q,
            FieldScalar::Mod(_, p) => FieldTag::Fp(*p),
        }
    }

    pub fn zero(field: FieldTag) -> Self {
        match field {
            FieldTag::Q => FieldScalar::Rat(BigRational::zero()),
            FieldTag::Fp(p) => FieldScalar::Mod(0, p),
        }
    }

    pub fn one(field: FieldTag) -> Self {
        match field {
            FieldTag::Q => FieldScalar::Rat(BigRational::one()),
            FieldTag::Fp(p) => FieldScalar::Mod(1 % p, p),
        }
    }

    /// Embeds a signed machine integer.
    pub fn from_i64(n: i64, field: FieldTag) -> Self {
        match field {
            FieldTag::Q => FieldScalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldTag::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                FieldScalar::Mod(r, p)
            }
        }
    }

    /// Embeds an arbitrary-precision integer.
    pub fn from_bigint(n: &BigInt, field: FieldTag) -> Self {
        match field {
            FieldTag::Q => FieldScalar::Rat(BigRational::from_integer(n.clone())),
            FieldTag::Fp(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                FieldScalar::Mod(r.to_u64().expect("reduced residue fits u64"), p)
            }
        }
    }

    /// Builds `num/den` in the given field. Fails on zero denominator.
    pub fn from_ratio(num: &BigInt, den: &BigInt, field: FieldTag) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match field {
            FieldTag::Q => Ok(FieldScalar::Rat(BigRational::new(num.clone(), den.clone()))),
            FieldTag::Fp(_) => {
                let d = FieldScalar::from_bigint(den, field);
                FieldScalar::from_bigint(num, field).try_mul(&d.inv()?)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rat(r) => r.is_zero(),
            FieldScalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rat(r) => r.is_one(),
            FieldScalar::Mod(v, p) => *v == 1 % p,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rat(r) => Some(r),
            FieldScalar::Mod(..) => None,
        }
    }

    fn check_same(&self, rhs: &Self) -> Result<(), ScalarError> {
        let (a, b) = (self.field(), rhs.field());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(a, b))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_same(rhs)?;
        Ok(match (self, rhs) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a + b),
            (FieldScalar::Mod(a, p), FieldScalar::Mod(b, _)) => {
                FieldScalar::Mod(((*a as u128 + *b as u128) % *p as u128) as u64, *p)
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.try_add(&rhs.neg())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.check_same(rhs)?;
        Ok(match (self, rhs) {
            (FieldScalar::Rat(a), FieldScalar::Rat(b)) => FieldScalar::Rat(a * b),
            (FieldScalar::Mod(a, p), FieldScalar::Mod(b, _)) => {
                FieldScalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Rat(a) => FieldScalar::Rat(-a),
            FieldScalar::Mod(a, p) => FieldScalar::Mod(if *a == 0 { 0 } else { p - a }, *p),
        }
    }

    /// Multiplicative inverse; `DivisionByZero` on zero.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rat(a) => FieldScalar::Rat(a.recip()),
            FieldScalar::Mod(a, p) => FieldScalar::Mod(mod_inverse(*a, *p), *p),
        })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&rhs.inv()?)
    }

    /// Panicking convenience wrappers for code paths where the fields are
    /// already known to agree (internal arithmetic on one operator).
    pub fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("scalar field mismatch")
    }
    pub fn sub(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("scalar field mismatch")
    }

    /// A crude size measure (bit length) used by pivoting heuristics.
    pub fn weight(&self) -> u64 {
        match self {
            FieldScalar::Rat(r) => (r.numer().bits() + r.denom().bits()) as u64,
            FieldScalar::Mod(..) => 1,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rat(r) => write!(f, "{r}"),
            FieldScalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

/// Parses the CLI field tag syntax: `q` or `fp:<prime>`.
pub fn parse_field_tag(s: &str) -> Result<FieldTag, ScalarError> {
    if s == "q" {
        return Ok(FieldTag::Q);
    }
    if let Some(p) = s.strip_prefix("fp:") {
        if let Ok(p) = p.parse::<u64>() {
            if is_prime_u64(p) {
                return Ok(FieldTag::Fp(p));
            }
            return Err(ScalarError::NotPrime(p));
        }
    }
    Err(ScalarError::NotPrime(0))
}

/// Extended-Euclid modular inverse for a reduced residue `a != 0`.
fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of non-unit");
    old_s.rem_euclid(p as i128) as u64
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the listed witness set is complete
/// for this range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact binomial coefficient as an unsigned big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Falling factorial `n·(n-1)···(n-k+1)`.
pub fn falling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
    }
    acc
}

/// Converts an unsigned big integer into the field.
pub fn scalar_from_biguint(n: &BigUint, field: FieldTag) -> FieldScalar {
    FieldScalar::from_bigint(&BigInt::from_biguint(Sign::Plus, n.clone()), field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldScalar {
        FieldScalar::from_ratio(&BigInt::from(n), &BigInt::from(d), FieldTag::Q).unwrap()
    }

    #[test]
    fn rational_add_reduces() {
        // 1/2 + 1/3 = 5/6, in lowest terms.
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(1, -2), q(-1, 2));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            FieldScalar::zero(FieldTag::Q).inv(),
            Err(ScalarError::DivisionByZero)
        );
        assert_eq!(
            FieldScalar::zero(FieldTag::Fp(5)).inv(),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldTag::Fp(5);
        let three = FieldScalar::from_i64(3, f);
        let four = FieldScalar::from_i64(4, f);
        // 3 * 4 = 12 = 2 mod 5.
        assert_eq!(three.try_mul(&four).unwrap(), FieldScalar::from_i64(2, f));
        let inv = three.inv().unwrap();
        assert!(three.try_mul(&inv).unwrap().is_one());
        assert_eq!(FieldScalar::from_i64(-1, f), FieldScalar::Mod(4, 5));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FieldScalar::one(FieldTag::Q);
        let b = FieldScalar::one(FieldTag::Fp(7));
        assert_eq!(
            a.try_add(&b),
            Err(ScalarError::FieldMismatch(FieldTag::Q, FieldTag::Fp(7)))
        );
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64((1 << 62) - 1));
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 7), BigUint::zero());
        assert_eq!(falling(5, 3), BigUint::from(60u32));
        assert_eq!(falling(2, 3), BigUint::zero());
    }

    #[test]
    fn field_tag_parsing() {
        assert_eq!(parse_field_tag("q").unwrap(), FieldTag::Q);
        assert_eq!(parse_field_tag("fp:7").unwrap(), FieldTag::Fp(7));
        assert!(parse_field_tag("fp:6").is_err());
        assert!(parse_field_tag("r").is_err());
    }
}
