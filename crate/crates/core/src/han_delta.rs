//! The syzygy-gap function δ on nonnegative rational triples.
//!
//! For `t` violating the strict triangle inequality δ is the excess of the
//! dominant entry. Otherwise δ is read off from the smallest `s` for which
//! `p^s t` lies within taxicab distance `< 1` of the odd lattice
//! `L_odd = { u in N^3 : u1 + u2 + u3 odd }`, and is zero if no such `s` exists.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::ensure_prime;
use crate::error::{Error, Result};
use crate::rational::pow_rational;

/// A triple of nonnegative rationals over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalTriple {
    numerators: [BigInt; 3],
    denominator: BigInt,
}

impl RationalTriple {
    pub fn new(entries: [BigRational; 3]) -> Result<Self> {
        if entries.iter().any(|q| q.is_negative()) {
            return Err(Error::NegativeEntry);
        }
        let denominator = entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let numerators = entries
            .map(|q| q.numer() * (&denominator / q.denom()));
        Ok(RationalTriple {
            numerators,
            denominator,
        })
    }

    pub fn from_integers(a: u64, b: u64, c: u64) -> Self {
        RationalTriple {
            numerators: [a.into(), b.into(), c.into()],
            denominator: BigInt::one(),
        }
    }

    /// `(a/n, a/n, a/n)`.
    pub fn diagonal(a: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("denominator must be positive".into()));
        }
        let q = BigRational::new(a.into(), n.into());
        Self::new([q.clone(), q.clone(), q])
    }

    pub fn entries(&self) -> [BigRational; 3] {
        self.numerators
            .clone()
            .map(|num| BigRational::new(num, self.denominator.clone()))
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// `p^s · t`.
    pub fn scaled(&self, p: u64, s: i64) -> [BigRational; 3] {
        let f = pow_rational(p, s);
        self.entries().map(|q| q * &f)
    }
}

impl fmt::Display for RationalTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.entries();
        write!(f, "({a}, {b}, {c})")
    }
}

/// A lattice point with nonnegative coordinates and odd coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OddLatticePoint(pub [BigInt; 3]);

impl OddLatticePoint {
    pub fn new(u: [BigInt; 3]) -> Option<Self> {
        let sum: BigInt = u.iter().sum();
        if u.iter().any(|x| x.is_negative()) || sum.is_even() {
            None
        } else {
            Some(OddLatticePoint(u))
        }
    }

    pub fn from_u64(u: [u64; 3]) -> Option<Self> {
        Self::new(u.map(BigInt::from))
    }
}

impl fmt::Display for OddLatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "({a},{b},{c})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaWitness {
    /// `t[dominant] >= ` the sum of the other two entries.
    NonTriangle { dominant: usize },
    /// Minimal `s` and the unique `u` in `L_odd` with `|p^s t - u|_1 < 1`.
    Witness { s: i64, u: OddLatticePoint },
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaResult {
    pub value: BigRational,
    pub witness: DeltaWitness,
}

impl DeltaResult {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn witness_exponent(&self) -> Option<i64> {
        match self.witness {
            DeltaWitness::Witness { s, .. } => Some(s),
            _ => None,
        }
    }
}

fn taxicab(x: &[BigRational; 3], u: &[BigInt; 3]) -> BigRational {
    x.iter()
        .zip(u)
        .map(|(xi, ui)| (xi - BigRational::from_integer(ui.clone())).abs())
        .sum()
}

/// Nearest point of `L_odd` to `x` in the taxicab metric, ties broken
/// lexicographically.
pub fn nearest_odd_point(x: &[BigRational; 3]) -> (OddLatticePoint, BigRational) {
    let candidates: Vec<Vec<BigInt>> = x
        .iter()
        .map(|xi| {
            let f = xi.floor().to_integer();
            if xi.is_integer() {
                let mut c = Vec::with_capacity(3);
                if f.is_positive() {
                    c.push(&f - 1);
                }
                c.push(f.clone());
                c.push(f + 1);
                c
            } else {
                vec![f.clone(), f + 1]
            }
        })
        .collect();

    let mut best: Option<(BigRational, [BigInt; 3])> = None;
    for u0 in &candidates[0] {
        for u1 in &candidates[1] {
            for u2 in &candidates[2] {
                if (u0 + u1 + u2).is_even() {
                    continue;
                }
                let u = [u0.clone(), u1.clone(), u2.clone()];
                let d = taxicab(x, &u);
                let better = match &best {
                    None => true,
                    Some((bd, bu)) => d < *bd || (d == *bd && u < *bu),
                };
                if better {
                    best = Some((d, u));
                }
            }
        }
    }
    // (floor + 1) in every coordinate always leaves at least one odd-sum candidate.
    let (d, u) = best.expect("candidate set contains an odd-sum point");
    (OddLatticePoint(u), d)
}

/// Nearest odd lattice point to `t` and its taxicab distance.
pub fn taxicab_nearest_odd(t: &RationalTriple) -> (OddLatticePoint, BigRational) {
    nearest_odd_point(&t.entries())
}

/// Largest `s` with `max_i p^s t_i < 1`. Requires some entry to be positive.
pub fn search_start(t: &RationalTriple, p: u64) -> i64 {
    let max = t.entries().into_iter().max().expect("three entries");
    debug_assert!(max.is_positive());
    let one = BigRational::one();
    let pq = BigRational::from_integer(p.into());
    let mut s = 0i64;
    let mut scaled = max.clone();
    while scaled >= one {
        scaled /= &pq;
        s -= 1;
    }
    loop {
        let next = &scaled * &pq;
        if next >= one {
            return s;
        }
        scaled = next;
        s += 1;
    }
}

fn non_triangle(entries: &[BigRational; 3]) -> Option<(usize, BigRational)> {
    (0..3).find_map(|i| {
        let others = &entries[(i + 1) % 3] + &entries[(i + 2) % 3];
        (entries[i] >= others).then(|| (i, &entries[i] - others))
    })
}

fn residue_mod_two(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    x - (x / &two).floor() * two
}

/// δ(t) in characteristic `p`.
pub fn han_delta(t: &RationalTriple, p: u64) -> Result<DeltaResult> {
    ensure_prime(p)?;
    let entries = t.entries();
    if let Some((dominant, value)) = non_triangle(&entries) {
        return Ok(DeltaResult {
            value,
            witness: DeltaWitness::NonTriangle { dominant },
        });
    }

    // Strict triangle inequality: every entry is positive. Below `search_start`
    // all p^s t_i < 1/p and no odd point is within distance 1. The map
    // x -> p x on (Q/2Z)^3 is deterministic, so the first repeated residue
    // state closes the search.
    let mut s = search_start(t, p);
    let mut seen = HashSet::new();
    loop {
        let x = t.scaled(p, s);
        let state: Vec<BigRational> = x.iter().map(residue_mod_two).collect();
        if !seen.insert(state) {
            return Ok(DeltaResult {
                value: BigRational::zero(),
                witness: DeltaWitness::Zero,
            });
        }
        let (u, d) = nearest_odd_point(&x);
        if d < BigRational::one() {
            let value = (BigRational::one() - d) * pow_rational(p, -s);
            return Ok(DeltaResult {
                value,
                witness: DeltaWitness::Witness { s, u },
            });
        }
        s += 1;
    }
}

/// Whether some `u` in `L_odd` lies within distance `< 1` of `p^s t`.
pub fn odd_point_within_one(t: &RationalTriple, p: u64, s: i64) -> bool {
    nearest_odd_point(&t.scaled(p, s)).1 < BigRational::one()
}
