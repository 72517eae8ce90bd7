//! Small integer helpers shared by the closed-form modules and the oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Order of `p` in `(Z/m)^x`. `None` if `gcd(p, m) != 1`.
pub fn multiplicative_order(p: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if p.gcd(&m) != 1 {
        return None;
    }
    let base = p % m;
    let mut x = base;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * base as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

pub fn big_pow(p: u64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

/// Smallest `k >= 0` with `p^k >= x` (for `x >= 0`, `p >= 2`).
pub fn ceil_log(p: u64, x: &BigInt) -> u32 {
    let mut k = 0;
    let mut pk = BigInt::one();
    while &pk < x {
        pk *= p;
        k += 1;
    }
    k
}

/// `C(x, k)` for an integer (possibly negative) `x`, taken as zero when `x < k`.
/// This is the convention used in dimension counts like `C(m - n + 2, 2)`.
pub fn binom_clamped(x: &BigInt, k: u32) -> BigInt {
    if x < &BigInt::from(k) {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `dim_k R_m` for the coordinate ring of a plane curve of degree `n`:
/// `C(m+2, 2) - C(m-n+2, 2)`, zero for `m < 0`.
pub fn plane_curve_dim(n: u64, m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let m = m as u64;
    let full = (m + 2) * (m + 1) / 2;
    let cut = if m >= n {
        let k = m - n;
        (k + 2) * (k + 1) / 2
    } else {
        0
    };
    full - cut
}

/// `h^0(C, O_C(d))` on a smooth plane curve of degree `n`.
pub fn h0_plane_curve(n: u64, d: &BigInt) -> BigInt {
    if d.is_negative() {
        return BigInt::zero();
    }
    binom_clamped(&(d + 2), 2) - binom_clamped(&(d - BigInt::from(n) + 2), 2)
}

/// `sum_{m <= top} h^0(O_C(m - shift))`, by the hockey-stick identity.
pub fn h0_partial_sum(n: u64, top: &BigInt, shift: &BigInt) -> BigInt {
    let k = top - shift;
    binom_clamped(&(&k + 3), 3) - binom_clamped(&(&k - BigInt::from(n) + 3), 3)
}
