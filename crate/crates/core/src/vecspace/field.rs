use serde::{Deserialize, Serialize};

use super::VecError;

/// A prime field F_p, `p` prime. Scalars are residues in `0..p` stored as
/// `u64`; the modulus is capped below 2^31 so products never overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, VecError> {
        if p >= 1 << 31 {
            return Err(VecError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(VecError::NotPrime(p));
        }
        Ok(FieldSpec { p })
    }

    pub const fn p(self) -> u64 {
        self.p
    }

    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn pow(self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. `a` must be nonzero mod p.
    pub fn inv(self, a: u64) -> u64 {
        let a = a % self.p;
        assert!(a != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// All residues, `0..p`.
    pub fn elements(self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    pub fn nonzero_elements(self) -> impl Iterator<Item = u64> {
        1..self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
