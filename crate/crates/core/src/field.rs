//! Prime field GF(p) arithmetic on canonical representatives in `[0, p)`.

use serde::{Deserialize, Serialize};

use crate::error::{MswError, Result};

/// A prime field GF(p) with `2 <= p <= 2^16`.
///
/// Scalars are plain `u32` values in `[0, p)`; products are formed in `u64`
/// so no intermediate overflows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub const MAX_MODULUS: u32 = 1 << 16;

    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > Self::MAX_MODULUS as u64 || !is_prime(p) {
            return Err(MswError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduce any signed integer to its canonical representative.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce(t0))
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Whether `a` is a square in GF(p) (zero counts as a square).
    pub fn is_square(self, a: u32) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        self.pow(a, (self.p as u64 - 1) / 2) == 1
    }

    pub fn elements(self) -> std::ops::Range<u32> {
        0..self.p
    }

    /// `p^k` as a `u128`, saturating.
    pub fn power_count(self, k: usize) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc = acc.saturating_mul(self.p as u128);
        }
        acc
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = MswError;

    fn try_from(p: u64) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
