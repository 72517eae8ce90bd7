//! The prime field `F_p` for `p < 2^16`, elements stored as reduced `u32`.

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub const MAX_CHARACTERISTIC: u64 = 1 << 16;

    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= Self::MAX_CHARACTERISTIC {
            return Err(Error::InvalidParameter(format!(
                "oracle characteristic {p} must be below 2^16"
            )));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
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

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.p as u64 - 2))
    }

    /// Row `q` of Pascal's triangle reduced mod `p`.
    pub fn binomial_row(&self, q: usize) -> Vec<u32> {
        let mut row = vec![1 % self.p];
        for _ in 0..q {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(1 % self.p);
            for w in row.windows(2) {
                next.push(self.add(w[0], w[1]));
            }
            next.push(1 % self.p);
            row = next;
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverses_exhaustive_small_primes() {
        for p in (2..=101u64).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.inv(0), None);
            for a in 1..p as u32 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn rejects_composites_and_large() {
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(65537).is_err());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn binomials() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.binomial_row(2), vec![1, 2, 1]);
        assert_eq!(f.binomial_row(3), vec![1, 0, 0, 1]);
    }

    fn field_and_triple() -> impl Strategy<Value = (PrimeField, u32, u32, u32)> {
        prop::sample::select(vec![2u64, 3, 5, 7, 101, 32003, 65521]).prop_flat_map(|p| {
            let f = PrimeField::new(p).unwrap();
            let p = p as u32;
            (Just(f), 0..p, 0..p, 0..p)
        })
    }

    proptest! {
        #[test]
        fn field_axioms((f, a, b, c) in field_and_triple()) {
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        }
    }
}
