//! Hilbert-Kunz multiplicity and function of `(X^a, Y^a, Z^a)` on the Fermat
//! curve, and the strongly-semistable / finite-pd / HN verdict.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{big_pow, ceil_log, ensure_prime, h0_partial_sum, multiplicative_order};
use crate::error::{Error, Result};
use crate::geometry::{hn_filtration, periodicity, HNFiltrationData, TwistedPeriodicity};
use crate::han_delta::{han_delta, DeltaResult, RationalTriple};
use crate::instance::FermatInstance;
use crate::rational::{int, rat};

/// Re-validates an instance and returns its (positive) characteristic.
pub(crate) fn checked_prime(inst: &FermatInstance) -> Result<u64> {
    FermatInstance::new(inst.p, inst.n, inst.a)?.prime()
}

pub fn delta_at_instance(inst: &FermatInstance) -> Result<DeltaResult> {
    let p = checked_prime(inst)?;
    han_delta(&RationalTriple::diagonal(inst.a, inst.n)?, p)
}

fn hkm_from_delta(n: u64, a: u64, delta: &BigRational) -> BigRational {
    let n = int(n);
    let a = int(a);
    int(3) * &a * &a * &n / int(4) + &n * &n * &n * delta * delta / int(4)
}

/// `3a²n/4 + n³δ²/4` with `δ = δ(a/n, a/n, a/n)`.
pub fn hkm(inst: &FermatInstance) -> Result<BigRational> {
    let d = delta_at_instance(inst)?;
    Ok(hkm_from_delta(inst.n, inst.a, &d.value))
}

/// A Hilbert-Kunz multiplicity together with the integer `ℓ` of the
/// non-semistable case: `HKM(I^[p^level]) = 3n(a p^level)²/4 + ℓ²/(4n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HKNumber {
    pub value: BigRational,
    pub ell: Option<BigInt>,
    pub level: u32,
}

fn witness_level(delta: &DeltaResult) -> u32 {
    delta.witness_exponent().map_or(0, |s| s.max(0) as u32)
}

pub fn hk_number(inst: &FermatInstance) -> Result<HKNumber> {
    let p = checked_prime(inst)?;
    let d = delta_at_instance(inst)?;
    let value = hkm_from_delta(inst.n, inst.a, &d.value);
    if d.is_zero() {
        return Ok(HKNumber { value, ell: None, level: 0 });
    }
    let level = witness_level(&d);
    let ell = int(inst.n * inst.n) * BigRational::from_integer(big_pow(p, level)) * &d.value;
    Ok(HKNumber {
        value,
        ell: ell.is_integer().then(|| ell.to_integer()),
        level,
    })
}

pub fn is_strongly_semistable(inst: &FermatInstance) -> Result<bool> {
    Ok(delta_at_instance(inst)?.is_zero())
}

fn fpd_bound(p: u64, pe: &BigInt) -> BigInt {
    if p == 3 {
        pe / 3
    } else if (pe % 3u32).is_one() {
        (pe - 1) / 3
    } else {
        (pe + 1) / 3
    }
}

/// Whether `R/(X^b, Y^b, Z^b)` has finite projective dimension over the
/// degree-`n` Fermat ring in characteristic `p`.
pub fn has_finite_proj_dim(p: u64, n: u64, b: &BigInt) -> Result<bool> {
    ensure_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("curve degree n must be >= 1".into()));
    }
    if n.is_multiple_of(p) {
        return Err(Error::NotCoprime { p, n });
    }
    if !b.is_positive() {
        return Err(Error::InvalidParameter("b must be >= 1".into()));
    }
    let nb = BigInt::from(n);
    if (b % &nb).is_zero() {
        return Ok(true);
    }
    if p == 2 {
        return Ok(&nb <= b);
    }
    // With J >= 1 the distance |J p^e - b/n| is at least p^e - b/n, which
    // exceeds every bound once 2 n p^e >= 3b + n.
    let limit = b * 3 + &nb;
    let mut pe = BigInt::from(p);
    while &nb * &pe * 2 < limit {
        let npe = &nb * &pe;
        let allowed = &nb * fpd_bound(p, &pe);
        let centre = b / &npe;
        let mut j: BigInt = &centre - 1;
        while j <= &centre + 2 {
            if j.is_odd() && j.is_positive() && (&j * &npe - b).abs() < allowed {
                return Ok(true);
            }
            j += 1;
        }
        pe *= p;
    }
    Ok(false)
}

/// Minimal `e0 >= 0` such that `R/I^[p^e0]` has finite projective dimension.
pub fn min_e0_finite_pd(inst: &FermatInstance) -> Result<Option<u32>> {
    let p = checked_prime(inst)?;
    let (n, a) = (inst.n, inst.a);
    let last = if p == 2 {
        // In characteristic 2 the condition n <= b is reached by e = ceil(log2 n).
        ceil_log(2, &BigInt::from(n))
    } else {
        let ord = multiplicative_order(p, 2 * n).expect("p is coprime to 2n") as u32;
        let growth = ceil_log(p, &BigInt::from(n)) + ceil_log(p, &BigInt::from((2 * a).div_ceil(n) + 1));
        ord + 2 * growth + 2
    };
    for e in 0..=last {
        if has_finite_proj_dim(p, n, &(big_pow(p, e) * a))? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HkfBranch {
    /// The pull-back has split along its HN filtration.
    HnSplit,
    /// `R/I^[q]` has finite projective dimension, so the syzygy module is free.
    FinitePd,
    /// Reduction `Syz(I^[q]) ≅ Syz(X^b, Y^b, Z^b)(-m)` with `b < n`.
    Reduction,
}

impl HkfBranch {
    pub fn label(self) -> &'static str {
        match self {
            HkfBranch::HnSplit => "hn-split",
            HkfBranch::FinitePd => "finite-pd",
            HkfBranch::Reduction => "reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkfValue {
    pub value: BigInt,
    pub branch: HkfBranch,
}

/// Length of `R/(X^A, Y^A, Z^A)` when the syzygy module is `R(-d1) ⊕ R(-d2)`.
pub fn split_length(n: u64, big_a: &BigInt, d1: &BigInt, d2: &BigInt) -> BigInt {
    let top = big_a * 3 + n;
    h0_partial_sum(n, &top, &BigInt::zero()) - h0_partial_sum(n, &top, big_a) * 3
        + h0_partial_sum(n, &top, d1)
        + h0_partial_sum(n, &top, d2)
}

/// Generator degrees `(d1, d2)` of `Syz_R(I^[p^e])` when it is free.
pub fn free_generator_degrees(inst: &FermatInstance, e: u32) -> Result<(BigInt, BigInt)> {
    let p = checked_prime(inst)?;
    let q = big_pow(p, e);
    let big_a = &q * inst.a;
    if !has_finite_proj_dim(p, inst.n, &big_a)? {
        return Err(Error::PreconditionViolation(format!(
            "Syz(I^[{p}^{e}]) is not free for {inst}"
        )));
    }
    let spread = int(inst.n) * BigRational::from_integer(q) * delta_at_instance(inst)?.value;
    let three_a = BigRational::from_integer(&big_a * 3);
    let d1 = (&three_a - &spread) / int(2);
    let d2 = (&three_a + &spread) / int(2);
    if !d1.is_integer() || !d2.is_integer() {
        return Err(Error::NotDetermined(format!("non-integral split degrees for {inst}, e={e}")));
    }
    Ok((d1.to_integer(), d2.to_integer()))
}

/// `3a²n/4·q² − 3n/4·b² + b³` for `a q = nθ + r`, `b = r` (θ even) or `n − r` (θ odd).
fn reduction_length(n: u64, a: u64, q: &BigInt) -> BigInt {
    let big_a = q * a;
    let nb = BigInt::from(n);
    let (theta, r) = big_a.div_mod_floor(&nb);
    let b = if theta.is_even() { r } else { &nb - r };
    let four: BigInt = &big_a * &big_a * 3 * n - &b * &b * 3 * n + &b * &b * &b * 4;
    debug_assert!((&four % BigInt::from(4)).is_zero());
    four / 4
}

pub fn hkf_detailed(inst: &FermatInstance, e: u32) -> Result<HkfValue> {
    let p = checked_prime(inst)?;
    let (n, a) = (inst.n, inst.a);
    let q = big_pow(p, e);
    let big_a = &q * a;
    let delta = delta_at_instance(inst)?;
    if !delta.is_zero() && 2 * n * p > 3 * a {
        let hn = hn_filtration(inst)?;
        if let Some((sub, quot)) = hn.twists_at(e).filter(|_| e >= hn.s + hn.split_threshold) {
            return Ok(HkfValue {
                value: split_length(n, &big_a, &-sub, &-quot),
                branch: HkfBranch::HnSplit,
            });
        }
    }
    if has_finite_proj_dim(p, n, &big_a)? {
        let (d1, d2) = free_generator_degrees(inst, e)?;
        return Ok(HkfValue {
            value: split_length(n, &big_a, &d1, &d2),
            branch: HkfBranch::FinitePd,
        });
    }
    Ok(HkfValue {
        value: reduction_length(n, a, &q),
        branch: HkfBranch::Reduction,
    })
}

/// `length R/(X^{ap^e}, Y^{ap^e}, Z^{ap^e})`.
pub fn hkf(inst: &FermatInstance, e: u32) -> Result<BigInt> {
    Ok(hkf_detailed(inst, e)?.value)
}

/// `hkf(inst, e) − hkm(inst)·p^{2e}`.
pub fn phi_defect(inst: &FermatInstance, e: u32) -> Result<BigRational> {
    let p = checked_prime(inst)?;
    let q2 = BigRational::from_integer(big_pow(p, 2 * e));
    Ok(BigRational::from_integer(hkf(inst, e)?) - hkm(inst)? * q2)
}

fn hn_interval(n: u64, a: u64, p: u64, e: u32) -> Result<(BigRational, BigRational, BigRational)> {
    if n == 0 || a == 0 {
        return Err(Error::InvalidParameter("n and a must be >= 1".into()));
    }
    if p < 2 {
        return Err(Error::InvalidParameter("p must be >= 2".into()));
    }
    let nq = BigRational::from_integer(big_pow(p, e) * n);
    let lo = -int(3 * a) * &nq / int(2);
    let hi = -int(a) * &nq;
    Ok((lo, hi, nq))
}

/// `n((deg L/(n p^e) + 3a/2)² + 3a²/4)` for a destabilizing sub-line bundle
/// `L` of the `e`-th pull-back, `−3anp^e/2 < deg L <= −anp^e`.
pub fn hkm_from_hn(n: u64, a: u64, p: u64, e: u32, deg_l: &BigInt) -> Result<BigRational> {
    let (lo, hi, nq) = hn_interval(n, a, p, e)?;
    let d = BigRational::from_integer(deg_l.clone());
    if d <= lo || d > hi {
        return Err(Error::PreconditionViolation(format!(
            "deg L = {deg_l} outside ({lo}, {hi}]"
        )));
    }
    let x = d / nq + rat(3 * a as i64, 2);
    Ok(int(n) * (&x * &x + int(3 * a * a) / int(4)))
}

/// Inverse of [`hkm_from_hn`]: the sub-bundle degree giving `hkm`.
pub fn deg_l_from_hkm(n: u64, a: u64, p: u64, e: u32, hkm: &BigRational) -> Result<BigInt> {
    let (lo, hi, nq) = hn_interval(n, a, p, e)?;
    let sq = hkm / int(n) - int(3 * a * a) / int(4);
    let bad = || Error::PreconditionViolation(format!("{hkm} is not of the form HKM from a sub-bundle"));
    let y = crate::rational::sqrt_exact(&sq).ok_or_else(bad)?;
    let d = (y - rat(3 * a as i64, 2)) * nq;
    if !d.is_integer() || d <= lo || d > hi {
        return Err(bad());
    }
    Ok(d.to_integer())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    StronglySemistablePeriodic {
        periodicity: TwistedPeriodicity,
    },
    /// Strongly semistable, and `Syz_R(I^[p^e0]) ≅ R(d1) ⊕ R(d2)` with `d1 = d2`.
    FinitePd {
        e0: u32,
        split_degrees: (BigInt, BigInt),
    },
    /// `hn` is absent when `p <= 3a/(2n)`, where the filtration formula does
    /// not apply. `destabilizing_degree` is `deg L` of the maximal
    /// destabilizing sub-line bundle of the `level`-th pull-back.
    NotStronglySemistable {
        hn: Option<Box<HNFiltrationData>>,
        level: u32,
        destabilizing_degree: BigRational,
        e0: u32,
        split_degrees: (BigInt, BigInt),
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub instance: FermatInstance,
    pub delta: DeltaResult,
    pub hkm: HKNumber,
    pub verdict: Verdict,
}

impl Classification {
    pub fn is_strongly_semistable(&self) -> bool {
        !matches!(self.verdict, Verdict::NotStronglySemistable { .. })
    }
}

pub fn classify(inst: &FermatInstance) -> Result<Classification> {
    let p = checked_prime(inst)?;
    let delta = delta_at_instance(inst)?;
    let hk = hk_number(inst)?;
    let e0 = min_e0_finite_pd(inst)?;
    let free_twists = |e0: u32| -> Result<(BigInt, BigInt)> {
        let (d1, d2) = free_generator_degrees(inst, e0)?;
        Ok((-d1, -d2))
    };
    let verdict = if delta.is_zero() {
        match e0 {
            Some(e0) => Verdict::FinitePd { e0, split_degrees: free_twists(e0)? },
            None => Verdict::StronglySemistablePeriodic {
                periodicity: periodicity(inst)?.ok_or_else(|| {
                    Error::NotDetermined(format!("no periodicity found for {inst}"))
                })?,
            },
        }
    } else {
        let e0 = e0.ok_or_else(|| {
            Error::NotDetermined(format!("no finite-pd level found for {inst}"))
        })?;
        let hn = if 2 * inst.n * p > 3 * inst.a { Some(Box::new(hn_filtration(inst)?)) } else { None };
        let level = witness_level(&delta);
        let q = BigRational::from_integer(big_pow(p, level));
        let n = int(inst.n);
        let m = (int(3 * inst.a) * &q - &n * &q * &delta.value) / int(2);
        Verdict::NotStronglySemistable {
            hn,
            level,
            destabilizing_degree: -(n * m),
            e0,
            split_degrees: free_twists(e0)?,
        }
    };
    Ok(Classification { instance: *inst, delta, hkm: hk, verdict })
}
