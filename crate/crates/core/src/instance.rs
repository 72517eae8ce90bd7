use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// `(p, n, a)`: characteristic (0 for characteristic zero), Fermat curve degree
/// and the exponent of the ideal `(X^a, Y^a, Z^a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FermatInstance {
    pub p: u64,
    pub n: u64,
    pub a: u64,
}

impl FermatInstance {
    pub fn new(p: u64, n: u64, a: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("curve degree n must be >= 1".into()));
        }
        if a == 0 {
            return Err(Error::InvalidParameter("exponent a must be >= 1".into()));
        }
        if p != 0 {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p.gcd(&n) != 1 {
                return Err(Error::NotCoprime { p, n });
            }
        }
        Ok(FermatInstance { p, n, a })
    }

    /// The characteristic, rejecting characteristic zero.
    pub fn prime(&self) -> Result<u64> {
        if self.p == 0 {
            Err(Error::ZeroCharacteristic)
        } else {
            Ok(self.p)
        }
    }
}

impl fmt::Display for FermatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, n={}, a={})", self.p, self.n, self.a)
    }
}
