//! Sparse integer polynomials in `X, Y, Z` and 4×4 matrices over them.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

/// Integer polynomial in `X, Y, Z`, keyed by exponent triple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly(BTreeMap<[u32; 3], i64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn term(coeff: i64, exps: [u32; 3]) -> Self {
        let mut p = Poly::zero();
        p.add_term(exps, coeff);
        p
    }

    pub fn x(k: u32) -> Self {
        Poly::term(1, [k, 0, 0])
    }

    pub fn y(k: u32) -> Self {
        Poly::term(1, [0, k, 0])
    }

    pub fn z(k: u32) -> Self {
        Poly::term(1, [0, 0, k])
    }

    /// `X^n + Y^n + Z^n`.
    pub fn fermat(n: u32) -> Self {
        Poly::x(n) + Poly::y(n) + Poly::z(n)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &i64)> {
        self.0.iter()
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Poly::zero();
        for (e, v) in &self.0 {
            out.add_term(*e, v * c);
        }
        out
    }

    /// The scalar `c` with `self = c * other`, if one exists and `other != 0`.
    pub fn ratio_to(&self, other: &Poly) -> Option<i64> {
        let (e, v) = other.0.iter().next()?;
        let w = *self.0.get(e)?;
        if w % v != 0 {
            return None;
        }
        let c = w / v;
        (other.scale(c) == *self).then_some(c)
    }

    fn add_term(&mut self, exps: [u32; 3], coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.0.entry(exps).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.0.remove(&exps);
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, v) in rhs.0 {
            self.add_term(e, v);
        }
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, u) in &self.0 {
            for (b, v) in &rhs.0 {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], u * v);
            }
        }
        out
    }
}

pub type Matrix4 = [[Poly; 4]; 4];

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4).fold(Poly::zero(), |acc, k| acc + &a[i][k] * &b[k][j])
        })
    })
}

/// The scalar `c` with `m = c * f * Id`, if `m` has that shape.
pub fn scalar_identity_multiple(m: &Matrix4, f: &Poly) -> Option<i64> {
    let c = m[0][0].ratio_to(f)?;
    let target = f.scale(c);
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let ok = if i == j { *entry == target } else { entry.is_zero() };
            if !ok {
                return None;
            }
        }
    }
    Some(c)
}
