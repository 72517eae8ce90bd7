//! Truncated Hilbert series of graded modules.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::oracle::{syzygy_dims_for, PrimeField};

pub const DEFAULT_TRUNCATION: usize = 60;

/// Prime used for oracle series checks when none is given; it is coprime to
/// every curve degree the oracle can handle.
pub const DEFAULT_SERIES_PRIME: u64 = 32003;

/// `numerator(t) / (1 - t^base)^exponent`, together with its power series
/// expansion up to `truncation` (inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    pub numerator: Vec<i64>,
    pub denominator_base: usize,
    pub denominator_exponent: u32,
    pub coefficients: Vec<i64>,
}

impl GradedSeries {
    pub fn new(numerator: Vec<i64>, base: usize, exponent: u32, truncation: usize) -> Self {
        assert!(base >= 1);
        let mut coefficients = vec![0i64; truncation + 1];
        for (i, &c) in numerator.iter().enumerate().take(truncation + 1) {
            coefficients[i] = c;
        }
        // Dividing by (1 - t^base) is a running sum with stride `base`.
        for _ in 0..exponent {
            for i in base..=truncation {
                coefficients[i] += coefficients[i - base];
            }
        }
        GradedSeries {
            numerator,
            denominator_base: base,
            denominator_exponent: exponent,
            coefficients,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, m: usize) -> i64 {
        self.coefficients.get(m).copied().unwrap_or(0)
    }

    /// Multiply by `t^k`.
    pub fn shifted(&self, k: usize) -> Self {
        let mut num = vec![0; k];
        num.extend_from_slice(&self.numerator);
        GradedSeries::new(num, self.denominator_base, self.denominator_exponent, self.truncation())
    }
}

/// Hilbert series of `Syz_R(X^r, Y^r, Z^r)` on the degree-`n` Fermat ring:
/// `(t^n + 3t^{2r} - 3t^{n+r} - t^{3r}) / (1-t)^3`.
pub fn series_mr(n: usize, r: usize, truncation: usize) -> Result<GradedSeries> {
    if r == 0 || r >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n-1, got r={r}, n={n}")));
    }
    let mut num = vec![0i64; (n + r).max(3 * r) + 1];
    num[n] += 1;
    num[2 * r] += 3;
    num[n + r] -= 3;
    num[3 * r] -= 1;
    while num.last() == Some(&0) {
        num.pop();
    }
    Ok(GradedSeries::new(num, 1, 3, truncation))
}

/// Whether `a = c * t^k * b` on the common truncation range for some rational
/// `c != 0` and integer `k`.
pub fn proportional_after_twist(a: &GradedSeries, b: &GradedSeries) -> bool {
    let top = a.truncation().min(b.truncation()) as i64;
    let trailing = |s: &GradedSeries| s.coefficients.iter().position(|&c| c != 0);
    let (Some(ia), Some(ib)) = (trailing(a), trailing(b)) else {
        return false;
    };
    let k = ia as i64 - ib as i64;
    let c = BigRational::new(a.coefficient(ia).into(), b.coefficient(ib).into());
    (0..=top).all(|m| {
        let bm = m - k;
        let rhs = if (0..=top).contains(&bm) {
            &c * BigRational::from_integer(b.coefficient(bm as usize).into())
        } else {
            BigRational::zero()
        };
        // Past the truncation of b the comparison is undetermined.
        bm > top || BigRational::from_integer(a.coefficient(m as usize).into()) == rhs
    })
}

/// Checks `(1 - t^n) H_c = (t^r - t^n) H_{c-r} + (1 - t^r) H_{c+n-r}` up to
/// degree `trunc`, where `H_l` is the Hilbert series of `Syz(X^a, Y^b, Z^l)`
/// over the Fermat ring and `c = nq + r`. The series come from the oracle
/// over `F_p`.
pub fn verify_series_recursion_over(p: u64, n: u64, a: u64, b: u64, c: u64, trunc: u64) -> Result<bool> {
    if a == 0 || b == 0 || c == 0 || n < 2 {
        return Err(Error::InvalidParameter("need a, b, c >= 1 and n >= 2".into()));
    }
    let field = PrimeField::new(p)?;
    if n.is_multiple_of(p) {
        return Err(Error::NotCoprime { p, n });
    }
    let r = c % n;
    let dims = |l: u64| syzygy_dims_for(&field, n, &[[a, 0, 0], [0, b, 0], [0, 0, l]], trunc);
    let h_c = dims(c);
    let h_low = dims(c - r);
    let h_high = dims(c + n - r);
    let at = |h: &[u64], m: i64| if m < 0 { 0 } else { h[m as usize] as i64 };
    let (n, r) = (n as i64, r as i64);
    Ok((0..=trunc as i64).all(|m| {
        let lhs = at(&h_c, m) - at(&h_c, m - n);
        let rhs = at(&h_low, m - r) - at(&h_low, m - n) + at(&h_high, m) - at(&h_high, m - r);
        lhs == rhs
    }))
}

pub fn verify_series_recursion(n: u64, a: u64, b: u64, c: u64, trunc: u64) -> Result<bool> {
    verify_series_recursion_over(DEFAULT_SERIES_PRIME, n, a, b, c, trunc)
}
