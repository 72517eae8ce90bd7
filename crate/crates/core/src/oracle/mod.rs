//! Brute-force ground truth over `F_p`.
//!
//! Everything here is plain linear algebra on monomial bases of the Fermat
//! ring `R = F_p[X,Y,Z]/(X^n + Y^n + Z^n)`, whose degree-`m` part has the
//! basis `X^i Y^j Z^k` with `i + j + k = m`, `k < n` (reduce with
//! `Z^n = -X^n - Y^n`). None of the closed-form modules are consulted.

pub mod field;
pub mod linalg;

use rayon::prelude::*;

pub use field::PrimeField;
use linalg::{block_rank, rank, SparseRow};

use crate::arith::plane_curve_dim;
use crate::error::{Error, Result};
use crate::instance::FermatInstance;

/// Exponent triple `(i, j, k)` of `X^i Y^j Z^k`.
pub type Monomial = [u64; 3];

/// Default bound on `3 a p^e` for oracle Hilbert-Kunz computations.
pub const DEFAULT_BUDGET: u64 = 200;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "FERMAT_SYZ_ORACLE_BUDGET";

pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    pub n: u64,
    pub m: u64,
    pub basis: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(n: u64, m: u64) -> Self {
        let mut basis = Vec::new();
        for k in 0..n.min(m + 1) {
            for i in 0..=(m - k) {
                basis.push([i, m - k - i, k]);
            }
        }
        MonomialBasis { n, m, basis }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Position of a normal monomial of degree `m` in `basis`.
    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        let [i, j, k] = *mono;
        if k >= self.n || i + j + k != self.m {
            return None;
        }
        // Block k holds the m - k + 1 monomials with that Z-exponent.
        let offset: u64 = (0..k).map(|kk| self.m - kk + 1).sum();
        Some((offset + i) as usize)
    }
}

/// Normal form of `X^i Y^j Z^k`: with `k = q n + r`,
/// `Z^k = (-1)^q sum_l C(q,l) X^{nl} Y^{n(q-l)} Z^r`. Zero coefficients are dropped.
pub fn normal_form(field: &PrimeField, n: u64, mono: Monomial) -> Vec<(Monomial, u32)> {
    let q = (mono[2] / n) as usize;
    normal_form_with_row(field, n, mono, &field.binomial_row(q))
}

fn normal_form_with_row(
    field: &PrimeField,
    n: u64,
    [i, j, k]: Monomial,
    row: &[u32],
) -> Vec<(Monomial, u32)> {
    let q = k / n;
    let r = k % n;
    let negate = q % 2 == 1;
    row.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(l, &c)| {
            let l = l as u64;
            let coeff = if negate { field.neg(c) } else { c };
            ([i + n * l, j + n * (q - l), r], coeff)
        })
        .collect()
}

fn pascal(field: &PrimeField, rows: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(rows + 1);
    out.push(vec![1 % field.characteristic()]);
    for q in 1..=rows {
        let prev: &Vec<u32> = &out[q - 1];
        let mut next = Vec::with_capacity(q + 1);
        next.push(1 % field.characteristic());
        for w in prev.windows(2) {
            next.push(field.add(w[0], w[1]));
        }
        next.push(1 % field.characteristic());
        out.push(next);
    }
    out
}

fn degree(mono: &Monomial) -> u64 {
    mono.iter().sum()
}

/// Rows spanning `I_m` for the monomial ideal `I = (gens)`, each tagged with
/// its block: every normal form of a monomial multiple lives on monomials
/// sharing the Z-exponent and the residue of the X-exponent mod `n`.
fn ideal_rows(
    field: &PrimeField,
    n: u64,
    gens: &[Monomial],
    m: u64,
    target: &MonomialBasis,
) -> Vec<((u64, u64), SparseRow)> {
    let max_q = (m / n) as usize;
    let table = pascal(field, max_q);
    let mut rows = Vec::new();
    for g in gens {
        let dg = degree(g);
        if dg > m {
            continue;
        }
        for mult in MonomialBasis::new(n, m - dg).basis {
            let prod = [g[0] + mult[0], g[1] + mult[1], g[2] + mult[2]];
            let nf = normal_form_with_row(field, n, prod, &table[(prod[2] / n) as usize]);
            let key = (prod[2] % n, prod[0] % n);
            let row = nf
                .into_iter()
                .map(|(mono, c)| (target.index_of(&mono).expect("normal monomial"), c))
                .collect();
            rows.push((key, row));
        }
    }
    rows
}

/// `dim (R/(gens))_m` using the block structure of the relation matrix.
pub fn graded_quotient_dim(field: &PrimeField, n: u64, gens: &[Monomial], m: u64) -> u64 {
    let target = MonomialBasis::new(n, m);
    let rows = ideal_rows(field, n, gens, m, &target);
    (target.len() - block_rank(field, rows)) as u64
}

/// Same quantity by elimination on the full dense matrix, optionally with the
/// columns permuted. Used to cross-check the block decomposition.
pub fn graded_quotient_dim_dense(
    field: &PrimeField,
    n: u64,
    gens: &[Monomial],
    m: u64,
    column_order: Option<&[usize]>,
) -> u64 {
    let target = MonomialBasis::new(n, m);
    let width = target.len();
    let dense = ideal_rows(field, n, gens, m, &target)
        .into_iter()
        .map(|(_, row)| {
            let mut d = vec![0u32; width];
            for (c, v) in row {
                let c = column_order.map_or(c, |perm| perm[c]);
                d[c] = field.add(d[c], v);
            }
            d
        })
        .collect();
    (width - rank(field, dense)) as u64
}

fn check_budget(a: u64, p: u64, e: u32, budget: u64) -> Result<u64> {
    let too_big = || Error::BudgetExceeded {
        needed: format!("3*{a}*{p}^{e}"),
        budget,
    };
    let pe = p.checked_pow(e).ok_or_else(too_big)?;
    let big_a = a.checked_mul(pe).ok_or_else(too_big)?;
    match big_a.checked_mul(3) {
        Some(top) if top <= budget => Ok(big_a),
        _ => Err(too_big()),
    }
}

/// `length R/(X^{ap^e}, Y^{ap^e}, Z^{ap^e})` by summing graded quotient
/// dimensions, requiring `3 a p^e <= budget`.
pub fn hkf_oracle(inst: &FermatInstance, e: u32, budget: u64) -> Result<u64> {
    let p = inst.prime()?;
    let field = PrimeField::new(p)?;
    let big_a = check_budget(inst.a, p, e, budget)?;
    let gens = [[big_a, 0, 0], [0, big_a, 0], [0, 0, big_a]];
    // The quotient is a quotient of F_p[X,Y,Z]/(X^A,Y^A,Z^A), which vanishes
    // from degree 3A - 2 on. Once a graded piece is zero all later ones are.
    let top = 3 * big_a - 2;
    let mut total = 0;
    for m in 0..=top {
        let d = graded_quotient_dim(&field, inst.n, &gens, m);
        total += d;
        if d == 0 {
            return Ok(total);
        }
    }
    Err(Error::NotDetermined(format!(
        "degree {top} of R/I^[q] is nonzero for {inst}"
    )))
}

/// `dim Syz(gens)_m` for `m = 0..=up_to`, where the syzygy module sits in
/// `⊕ R(-deg g)`: `sum_g dim R_{m - deg g} - dim R_m + dim (R/I)_m`.
pub fn syzygy_dims_for(field: &PrimeField, n: u64, gens: &[Monomial], up_to: u64) -> Vec<u64> {
    (0..=up_to)
        .into_par_iter()
        .map(|m| {
            let free: u64 = gens
                .iter()
                .map(|g| plane_curve_dim(n, m as i64 - degree(g) as i64))
                .sum();
            free + graded_quotient_dim(field, n, gens, m) - plane_curve_dim(n, m as i64)
        })
        .collect()
}

/// Graded dimensions of `Syz_R(X^b, Y^b, Z^b)` up to degree `up_to`.
pub fn syzygy_graded_dims(p: u64, n: u64, b: u64, up_to: u64) -> Result<Vec<u64>> {
    let field = PrimeField::new(p)?;
    Ok(syzygy_dims_for(&field, n, &[[b, 0, 0], [0, b, 0], [0, 0, b]], up_to))
}

/// Whether `Syz_R(X^b, Y^b, Z^b)` has a nonzero element in some degree
/// `m < 3b/2`, i.e. a sub-line bundle `O(-m)` of slope above that of the
/// syzygy bundle on the curve.
pub fn has_section_below_slope(p: u64, n: u64, b: u64) -> Result<bool> {
    if b == 0 {
        return Err(Error::InvalidParameter("b must be >= 1".into()));
    }
    let top = (3 * b - 1) / 2;
    Ok(syzygy_graded_dims(p, n, b, top)?.iter().any(|&d| d > 0))
}

/// Kernel dimensions `K(m)` of `(u, v, w) -> u X^a + v Y^b + w (X+Y)^c` on
/// `F_p[X, Y]`, for `m = 0..=up_to`.
pub fn two_variable_kernel_dims(field: &PrimeField, a: u64, b: u64, c: u64, up_to: u64) -> Vec<u64> {
    let row_c = field.binomial_row(c as usize);
    (0..=up_to)
        .map(|m| {
            let width = m as usize + 1;
            let mut rows = Vec::new();
            // Column index = exponent of X in a degree-m form.
            for i in 0..=m.saturating_sub(a) {
                if m < a {
                    break;
                }
                let mut r = vec![0u32; width];
                r[(a + i) as usize] = 1;
                rows.push(r);
            }
            for i in 0..=m.saturating_sub(b) {
                if m < b {
                    break;
                }
                let mut r = vec![0u32; width];
                r[i as usize] = 1;
                rows.push(r);
            }
            for i in 0..=m.saturating_sub(c) {
                if m < c {
                    break;
                }
                let mut r = vec![0u32; width];
                for (l, &coef) in row_c.iter().enumerate() {
                    r[i as usize + l] = field.add(r[i as usize + l], coef);
                }
                rows.push(r);
            }
            let vars = rows.len();
            (vars - rank(field, rows)) as u64
        })
        .collect()
}

/// Generator degrees `(d1, d2)` of the free rank-2 module
/// `Syz(X^a, Y^b, (X+Y)^c)` over `F_p[X, Y]`, read off kernel dimensions.
pub fn syzygy_generator_degrees(p: u64, a: u64, b: u64, c: u64) -> Result<(u64, u64)> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidParameter("exponents must be >= 1".into()));
    }
    let field = PrimeField::new(p)?;
    // d1 + d2 = a + b + c, so the second generator appears by that degree.
    let k = two_variable_kernel_dims(&field, a, b, c, a + b + c);
    let d1 = k.iter().position(|&x| x > 0).expect("kernel is nonzero in degree a+b+c") as u64;
    let d2 = (d1..=a + b + c)
        .find(|&m| k[m as usize] > m - d1 + 1)
        .expect("second generator by degree a+b+c");
    Ok((d1, d2))
}

/// The syzygy gap `d2 - d1` of `X^a, Y^b, (X+Y)^c` over `F_p`.
pub fn syzygy_gap_oracle(p: u64, a: u64, b: u64, c: u64) -> Result<u64> {
    let (d1, d2) = syzygy_generator_degrees(p, a, b, c)?;
    Ok(d2 - d1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn basis_sizes() {
        for n in 1..=10 {
            for m in 0..=100 {
                let b = MonomialBasis::new(n, m);
                assert_eq!(b.len() as u64, plane_curve_dim(n, m as i64));
                for (idx, mono) in b.basis.iter().enumerate() {
                    assert_eq!(b.index_of(mono), Some(idx));
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(
            normal_form(&f(5), 3, [0, 0, 3]),
            vec![([0, 3, 0], 4), ([3, 0, 0], 4)]
        );
        assert_eq!(
            normal_form(&f(3), 2, [0, 0, 4]),
            vec![([0, 4, 0], 1), ([2, 2, 0], 2), ([4, 0, 0], 1)]
        );
        assert_eq!(normal_form(&f(7), 4, [2, 1, 3]), vec![([2, 1, 3], 1)]);
        // C(3,1) = C(3,2) = 0 mod 3.
        assert_eq!(
            normal_form(&f(3), 2, [0, 0, 7]),
            vec![([0, 6, 1], 2), ([6, 0, 1], 2)]
        );
    }

    #[test]
    fn maximal_ideal_quotient() {
        let gens = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(graded_quotient_dim(&f(5), 3, &gens, 0), 1);
        for m in 1..10 {
            assert_eq!(graded_quotient_dim(&f(5), 3, &gens, m), 0);
        }
    }

    #[test]
    fn quotient_lengths() {
        let inst = FermatInstance::new(5, 3, 1).unwrap();
        assert_eq!(hkf_oracle(&inst, 1, DEFAULT_BUDGET).unwrap(), 55);
        let inst = FermatInstance::new(3, 7, 1).unwrap();
        assert_eq!(hkf_oracle(&inst, 0, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(hkf_oracle(&inst, 1, DEFAULT_BUDGET).unwrap(), 27);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = FermatInstance::new(3, 7, 1).unwrap();
        assert!(matches!(
            hkf_oracle(&inst, 5, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        let inst0 = FermatInstance::new(0, 7, 1).unwrap();
        assert_eq!(hkf_oracle(&inst0, 1, DEFAULT_BUDGET), Err(Error::ZeroCharacteristic));
    }

    #[test]
    fn block_and_dense_elimination_agree() {
        for (p, n) in [(2u64, 3u64), (3, 5), (5, 4), (7, 6)] {
            for gens in [
                vec![[2, 0, 0], [0, 3, 0], [0, 0, 4]],
                vec![[3, 0, 0], [0, 3, 0], [0, 0, 3]],
                vec![[1, 1, 0], [0, 0, 5]],
            ] {
                for m in 0..16 {
                    assert_eq!(
                        graded_quotient_dim(&f(p), n, &gens, m),
                        graded_quotient_dim_dense(&f(p), n, &gens, m, None),
                        "p={p} n={n} m={m} gens={gens:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn column_shuffle_leaves_dimension_unchanged() {
        let field = f(3);
        let gens = [[3, 0, 0], [0, 3, 0], [0, 0, 3]];
        for m in 0..12 {
            let w = MonomialBasis::new(7, m).len();
            // A fixed derangement-like permutation: reverse, then rotate.
            let perm: Vec<usize> = (0..w).map(|c| (w - 1 - c + 3) % w).collect();
            assert_eq!(
                graded_quotient_dim_dense(&field, 7, &gens, m, Some(&perm)),
                graded_quotient_dim_dense(&field, 7, &gens, m, None)
            );
        }
    }

    #[test]
    fn syzygy_dims_of_maximal_ideal_on_cubic() {
        let d = syzygy_graded_dims(5, 3, 1, 4).unwrap();
        assert_eq!(&d[2..=4], &[3, 9, 15]);
    }

    #[test]
    fn sections_below_slope() {
        // F^{2*} of Syz(X,Y,Z) on the septic in characteristic 3 is unstable,
        // the first pull-back is not.
        assert!(has_section_below_slope(3, 7, 9).unwrap());
        assert!(!has_section_below_slope(3, 7, 3).unwrap());
        assert!(!has_section_below_slope(3, 7, 1).unwrap());
    }

    #[test]
    fn syzygy_gaps() {
        for p in [2, 3, 5, 7] {
            assert_eq!(syzygy_generator_degrees(p, 1, 1, 1).unwrap(), (1, 2));
            assert_eq!(syzygy_gap_oracle(p, 3, 1, 1).unwrap(), 1);
        }
        assert!(syzygy_gap_oracle(2, 0, 1, 1).is_err());
    }

    #[test]
    fn kernel_dims_are_those_of_a_free_module() {
        for p in [2u64, 3, 5] {
            for (a, b, c) in [(1, 1, 1), (2, 2, 2), (3, 5, 4), (6, 2, 7)] {
                let (d1, d2) = syzygy_generator_degrees(p, a, b, c).unwrap();
                let field = f(p);
                let k = two_variable_kernel_dims(&field, a, b, c, d2 + 10);
                for (m, &km) in k.iter().enumerate() {
                    let m = m as i64;
                    let expect = (m - d1 as i64 + 1).max(0) + (m - d2 as i64 + 1).max(0);
                    assert_eq!(km as i64, expect, "p={p} ({a},{b},{c}) m={m}");
                }
            }
        }
    }
}
