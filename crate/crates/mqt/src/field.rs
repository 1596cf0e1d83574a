//! Exact arithmetic in the prime field Z_p.
//!
//! Every value downstream (matrix entries, state coordinates) is a [`Scalar`]:
//! a canonical residue together with the [`FieldSpec`] it lives in. Arithmetic
//! between scalars of different moduli is rejected.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range (p <= 2^31)")]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("no inverse of zero")]
    ZeroInverse,
}

/// A prime modulus, verified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    p: u64,
}

impl TryFrom<u64> for FieldSpec {
    type Error = FieldError;
    fn try_from(p: u64) -> Result<Self, FieldError> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > 1 << 31 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary signed integer.
    pub fn scalar(&self, value: i64) -> Scalar {
        let p = self.p as i64;
        let v = value.rem_euclid(p) as u64;
        Scalar { value: v, field: *self }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { value: 0, field: *self }
    }

    pub fn one(&self) -> Scalar {
        Scalar { value: 1 % self.p, field: *self }
    }

    /// All field elements, in residue order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let f = *self;
        (0..self.p).map(move |v| Scalar { value: v, field: f })
    }

    pub fn same_as(&self, other: &FieldSpec) -> Result<(), FieldError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(self.p, other.p))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.p)
    }
}

/// An element of Z_p, stored as the canonical residue in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u64,
    field: FieldSpec,
}

impl Scalar {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn checked_add(self, rhs: Scalar) -> Result<Scalar, FieldError> {
        self.field.same_as(&rhs.field)?;
        let p = self.field.p;
        Ok(Scalar { value: (self.value + rhs.value) % p, field: self.field })
    }

    pub fn checked_sub(self, rhs: Scalar) -> Result<Scalar, FieldError> {
        self.field.same_as(&rhs.field)?;
        let p = self.field.p;
        Ok(Scalar { value: (self.value + p - rhs.value) % p, field: self.field })
    }

    pub fn checked_mul(self, rhs: Scalar) -> Result<Scalar, FieldError> {
        self.field.same_as(&rhs.field)?;
        let p = self.field.p;
        Ok(Scalar { value: (self.value * rhs.value) % p, field: self.field })
    }

    pub fn neg(self) -> Scalar {
        let p = self.field.p;
        Scalar { value: (p - self.value) % p, field: self.field }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Scalar, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let p = self.field.p as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.field.scalar(t0))
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar addition across fields")
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar subtraction across fields")
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar multiplication across fields")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
