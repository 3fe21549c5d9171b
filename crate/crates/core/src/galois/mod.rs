//! Finite-field and matrix-ring arithmetic, and the code ensembles built on it.

mod code;
mod linalg;
mod matring;

pub use code::{enumerate_codes, gaussian_binomial, sample_code, LinearCode};
pub use linalg::{mat_mul_mod, nullspace, rank, rref, FpMat};
pub use matring::{encode_vector, enumerate_free_modules, FreeMatCode, MatRing2};
pub(crate) use matring::{all_vectors, has_unit_coordinate};

use crate::arith;
use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is prime. The modulus must fit in 32 bits so that
    /// products fit a `u64`.
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !arith::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not a supported prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        arith::inv_mod(a, self.p)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        arith::reduce(x, self.p)
    }
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    PrimeField::new(p).map(|_| ())
}
