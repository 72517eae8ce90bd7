//! Frobenius reduction of syzygy modules, twisted Frobenius periodicity,
//! strong Harder-Narasimhan filtrations (characteristic `p` and 0), and the
//! matrix factorization behind the periodic resolutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::big_pow;
use crate::classification::{checked_prime, delta_at_instance, has_finite_proj_dim, min_e0_finite_pd};
use crate::error::{Error, Result};
use crate::instance::FermatInstance;
use crate::poly::{mat_mul, scalar_identity_multiple, Matrix4, Poly};
use crate::rational::int;
use crate::series::GradedSeries;

/// `Syz_R(I^[p^e]) ≅ Syz_R(X^b, Y^b, Z^b)(−twist_m)` with `a p^e = nθ + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReduction {
    pub e: u32,
    pub theta: BigInt,
    pub r: u64,
    pub target_b: u64,
    pub twist_m: BigInt,
}

fn reduce(n: u64, big_a: &BigInt) -> (BigInt, u64, u64, BigInt) {
    let (theta, r) = big_a.div_mod_floor(&BigInt::from(n));
    let r = r.to_u64().expect("r < n");
    let target_b = if theta.is_even() { r } else { n - r };
    // a p^e and b have the same parity, so the twist is integral.
    let twist = (big_a - target_b) * 3 / 2;
    (theta, r, target_b, twist)
}

pub fn frobenius_reduction(inst: &FermatInstance, e: u32) -> Result<FrobeniusReduction> {
    let p = checked_prime(inst)?;
    let big_a = big_pow(p, e) * inst.a;
    if has_finite_proj_dim(p, inst.n, &big_a)? {
        return Err(Error::FinitePdCase { p, n: inst.n, b: big_a.to_string() });
    }
    let (theta, r, target_b, twist_m) = reduce(inst.n, &big_a);
    Ok(FrobeniusReduction { e, theta, r, target_b, twist_m })
}

/// `Syz(I^[p^t]) ≅ Syz(I^[p^s])(twist_per_period)`, with the pull-backs
/// `0..t` pairwise non-isomorphic up to twist. `targets[e]` is the reduced
/// exponent `b` at level `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPeriodicity {
    pub s: u32,
    pub t: u32,
    pub twist_per_period: BigInt,
    pub targets: Vec<u64>,
}

pub fn periodicity(inst: &FermatInstance) -> Result<Option<TwistedPeriodicity>> {
    let p = checked_prime(inst)?;
    if !delta_at_instance(inst)?.is_zero() || min_e0_finite_pd(inst)?.is_some() {
        return Ok(None);
    }
    let mut targets: Vec<u64> = Vec::new();
    // a p^e mod 2n determines b, so a repeat shows up within 2n + 1 steps.
    for e in 0..=(2 * inst.n as u32 + 1) {
        let b = frobenius_reduction(inst, e)?.target_b;
        if let Some(s) = targets.iter().position(|&x| x == b) {
            let s = s as u32;
            let twist = -(big_pow(p, e) - big_pow(p, s)) * inst.a * 3 / 2;
            return Ok(Some(TwistedPeriodicity { s, t: e, twist_per_period: twist, targets }));
        }
        targets.push(b);
    }
    Err(Error::NotDetermined(format!("no repeat in the Frobenius reductions of {inst}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Minimality {
    Minimal,
    Unknown,
}

/// `0 → O(sub_degree) → F^{s*}(Syz(X^a,Y^a,Z^a)) → O(quot_degree) → 0`,
/// degrees as twists of `O_C(1)`. The sequence splits on the `(s+t)`-th
/// pull-back for every `t >= split_threshold` (an upper bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNFiltrationData {
    pub p: u64,
    pub s: u32,
    pub m: BigInt,
    pub sub_degree: BigInt,
    pub quot_degree: BigInt,
    pub ell: BigInt,
    pub split_threshold: u32,
    pub minimal: Minimality,
}

impl HNFiltrationData {
    /// The twists `(−m p^{e−s}, (m − 3a p^s) p^{e−s})` of the filtration pulled
    /// back to level `e >= s`.
    pub fn twists_at(&self, e: u32) -> Option<(BigInt, BigInt)> {
        let k = e.checked_sub(self.s)?;
        let f = big_pow(self.p, k);
        Some((&self.sub_degree * &f, &self.quot_degree * f))
    }
}

/// `m` for `A = n l + r`: `n(l + 1 + l/2)` if `l` is even, else
/// `n(l + ⌊l/2⌋) + 3r`.
pub fn hn_twist(n: u64, big_a: &BigInt) -> BigInt {
    let (l, r) = big_a.div_mod_floor(&BigInt::from(n));
    if l.is_even() {
        (&l + 1 + &l / 2) * n
    } else {
        (&l + &l / 2) * n + r * 3
    }
}

pub fn hn_filtration(inst: &FermatInstance) -> Result<HNFiltrationData> {
    let p = checked_prime(inst)?;
    let (n, a) = (inst.n, inst.a);
    let delta = delta_at_instance(inst)?;
    if delta.is_zero() {
        return Err(Error::StronglySemistable);
    }
    if 2 * n * p <= 3 * a {
        return Err(Error::PreconditionViolation(format!("p = {p} <= 3a/(2n) = {}/{}", 3 * a, 2 * n)));
    }
    let s = delta
        .witness_exponent()
        .filter(|&s| s >= 0)
        .ok_or_else(|| Error::NotDetermined(format!("unexpected δ witness for {inst}")))?
        as u32;
    let big_a = big_pow(p, s) * a;
    let m = hn_twist(n, &big_a);
    debug_assert_eq!(
        int(2) * int(m.clone()),
        int(&big_a * 3) - int(n) * int(big_pow(p, s)) * &delta.value
    );
    let gap: BigInt = &big_a * 3 - &m * 2;
    let mut split_threshold = 0;
    // H¹(O_C(d)) = 0 exactly when d > n − 3.
    let mut d = gap.clone();
    while d <= BigInt::from(n as i64 - 3) {
        d *= p;
        split_threshold += 1;
    }
    let minimal = if s == 0 || p + 3 >= n { Minimality::Minimal } else { Minimality::Unknown };
    Ok(HNFiltrationData {
        p,
        s,
        sub_degree: -m.clone(),
        quot_degree: &m - &big_a * 3,
        ell: gap.abs() * n,
        m,
        split_threshold,
        minimal,
    })
}

/// Decides minimality of the HN level by brute force: the filtration first
/// appears at pull-back `s` iff pull-back `s − 1` has no section below the
/// slope. Needs `3 a p^{s−1}` within the oracle budget.
pub fn minimality_by_oracle(inst: &FermatInstance, hn: &HNFiltrationData, budget: u64) -> Result<bool> {
    if hn.s == 0 {
        return Ok(true);
    }
    let b = big_pow(hn.p, hn.s - 1) * inst.a;
    match b.to_u64().filter(|&b| b.checked_mul(3).is_some_and(|x| x <= budget)) {
        Some(b) => Ok(!crate::oracle::has_section_below_slope(hn.p, inst.n, b)?),
        None => Err(Error::BudgetExceeded { needed: format!("3*{b}"), budget }),
    }
}

/// With `a = nl + r`: semistable iff `r <= 2n/3` (l even) or `r >= n/3` (l odd).
pub fn char0_is_semistable(n: u64, a: u64) -> bool {
    let (l, r) = (a / n, a % n);
    if l % 2 == 0 {
        3 * r <= 2 * n
    } else {
        3 * r >= n
    }
}

/// The same criterion through `r̃ = a mod 2n`.
pub fn char0_is_semistable_mod2n(n: u64, a: u64) -> bool {
    let rt = a % (2 * n);
    if rt < n {
        3 * rt <= 2 * n
    } else {
        3 * rt >= 4 * n
    }
}

/// `(−m, m − 3a)` for a bundle that is not semistable in characteristic 0.
pub fn char0_hn_filtration(n: u64, a: u64) -> Result<(BigInt, BigInt)> {
    if n == 0 || a == 0 {
        return Err(Error::InvalidParameter("n and a must be >= 1".into()));
    }
    if char0_is_semistable(n, a) {
        return Err(Error::SemistableInCharZero { n, a });
    }
    let m = hn_twist(n, &BigInt::from(a));
    Ok((-m.clone(), m - 3 * a))
}

/// For every supplied prime `p ≡ ±1 mod 2n`, compares semistability in
/// characteristic 0 with strong semistability in characteristic `p`.
pub fn reduction_agreement(n: u64, a: u64, primes: &[u64]) -> Result<bool> {
    let generic = char0_is_semistable(n, a);
    for &p in primes {
        let rp = p % (2 * n);
        if rp != 1 % (2 * n) && rp != 2 * n - 1 {
            continue;
        }
        let inst = FermatInstance::new(p, n, a)?;
        if crate::classification::is_strongly_semistable(&inst)? != generic {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Twists of `F1` and `F2` in the periodic resolution
/// `… → F2 → F1 → R(−b)³ → R` of `R/(X^b, Y^b, Z^b)`, for `n ∤ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTwists {
    pub f1: [BigInt; 4],
    pub f2: [BigInt; 4],
}

pub fn resolution_twists(n: u64, b: &BigInt) -> Result<ResolutionTwists> {
    if n < 2 || !b.is_positive() {
        return Err(Error::InvalidParameter("need n >= 2 and b >= 1".into()));
    }
    let (theta, r) = b.div_mod_floor(&BigInt::from(n));
    if r.is_zero() {
        return Err(Error::InvalidParameter(format!("n = {n} divides b = {b}")));
    }
    let (n, r) = (BigInt::from(n), r);
    let rep = |x: BigInt, y: BigInt| [x.clone(), x.clone(), x, y];
    Ok(if theta.is_even() {
        let half: BigInt = &theta / 2;
        let base: BigInt = -half * 3 * &n;
        ResolutionTwists {
            f1: rep(&base - &r * 2, &base - &n),
            f2: rep(&base - &n - &r, &base - &r * 3),
        }
    } else {
        let half: BigInt = (&theta + 1) / 2;
        let base: BigInt = -half * 3 * &n;
        ResolutionTwists {
            f1: rep(&base + &n - &r, &base + &n * 2 - &r * 3),
            f2: rep(&base + &n - &r * 2, base),
        }
    })
}

/// Hilbert series `(Σ_{F1} t^{−d} − Σ_{F2} t^{−d}) / (1−t)³` of
/// `Syz_R(X^b, Y^b, Z^b)` read off the periodic resolution.
pub fn resolution_series(n: u64, b: &BigInt, truncation: usize) -> Result<GradedSeries> {
    let tw = resolution_twists(n, b)?;
    let degree = |d: &BigInt| (-d).to_usize().expect("positive generator degree");
    let top = tw.f1.iter().chain(&tw.f2).map(degree).max().unwrap_or(0);
    let mut num = vec![0i64; top + 1];
    for d in &tw.f1 {
        num[degree(d)] += 1;
    }
    for d in &tw.f2 {
        num[degree(d)] -= 1;
    }
    Ok(GradedSeries::new(num, 1, 3, truncation))
}

/// `φ_{r,s}`: rows `(0, Z^r, −Y^r, X^s)`, `(−Z^r, 0, X^r, Y^s)`,
/// `(Y^r, −X^r, 0, Z^s)`, `(−X^s, −Y^s, −Z^s, 0)`.
pub fn phi(r: u32, s: u32) -> Matrix4 {
    let (x, y, z) = (Poly::x, Poly::y, Poly::z);
    let o = Poly::zero;
    [
        [o(), z(r), -y(r), x(s)],
        [-z(r), o(), x(r), y(s)],
        [y(r), -x(r), o(), z(s)],
        [-x(s), -y(s), -z(s), o()],
    ]
}

pub fn build_phi(n: u32, r: u32) -> Result<Matrix4> {
    if r == 0 || r >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n-1, got r={r}, n={n}")));
    }
    Ok(phi(r, n - r))
}

/// The scalar `c` with `φ_{r,n−r} φ_{n−r,r} = c (X^n + Y^n + Z^n) Id`, if the
/// product has that shape.
pub fn matrix_factorization_scalar(n: u32, r: u32) -> Result<Option<i64>> {
    let prod = mat_mul(&build_phi(n, r)?, &build_phi(n, n - r)?);
    Ok(scalar_identity_multiple(&prod, &Poly::fermat(n)))
}
