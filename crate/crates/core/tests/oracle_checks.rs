//! Closed forms against the brute-force oracle on small instances.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use fermat_syz::arith::{big_pow, plane_curve_dim};
use fermat_syz::classification::{free_generator_degrees, has_finite_proj_dim, hkf, Verdict};
use fermat_syz::geometry::{
    frobenius_reduction, hn_filtration, minimality_by_oracle, resolution_series, Minimality,
};
use fermat_syz::oracle::{hkf_oracle, syzygy_graded_dims, DEFAULT_BUDGET};
use fermat_syz::{classification::classify, FermatInstance};

fn inst(p: u64, n: u64, a: u64) -> FermatInstance {
    FermatInstance::new(p, n, a).unwrap()
}

#[test]
fn septic_values() {
    let i = inst(3, 7, 1);
    for (e, v) in [(1, 27u64), (2, 419), (3, 3843)] {
        assert_eq!(hkf_oracle(&i, e, DEFAULT_BUDGET).unwrap(), v);
        assert_eq!(hkf(&i, e).unwrap(), BigInt::from(v));
    }
}

#[test]
fn characteristic_two_cubic_fixture() {
    // On the cubic over F_2 the curve equation lies in (X^2, Y^2, Z^2), so the
    // quotient is k[X,Y,Z]/(X^2, Y^2, Z^2) of length 8.
    let i = inst(2, 3, 1);
    let v = hkf_oracle(&i, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(v, 8);
    assert_eq!(hkf(&i, 1).unwrap(), BigInt::from(v));
}

#[test]
fn trivial_level_has_length_one() {
    for p in [2u64, 3, 5, 7, 11] {
        for n in 1..9 {
            if n % p != 0 {
                assert_eq!(hkf_oracle(&inst(p, n, 1), 0, DEFAULT_BUDGET).unwrap(), 1);
            }
        }
    }
}

#[test]
fn reduction_shifts_the_syzygy_series() {
    // Syz(X^9, Y^9, Z^9) ≅ Syz(X^5, Y^5, Z^5)(-6) on the septic in characteristic 3.
    let big = syzygy_graded_dims(3, 7, 9, 40).unwrap();
    let small = syzygy_graded_dims(3, 7, 5, 40).unwrap();
    for m in 0..=40usize {
        let shifted = if m >= 6 { small[m - 6] } else { 0 };
        assert_eq!(big[m], shifted, "m={m}");
    }
    for (p, n, a, e) in [(5u64, 3u64, 1u64, 1u32), (3, 5, 1, 2), (7, 4, 1, 1), (5, 6, 2, 1), (2, 5, 1, 1)] {
        let i = inst(p, n, a);
        let Ok(red) = frobenius_reduction(&i, e) else { continue };
        let b = (big_pow(p, e) * a).to_u64().unwrap();
        let shift = red.twist_m.to_usize().unwrap();
        let top = 3 * b as usize + 10;
        let full = syzygy_graded_dims(p, n, b, top as u64).unwrap();
        let target = syzygy_graded_dims(p, n, red.target_b, top as u64).unwrap();
        for m in 0..=top {
            let expect = if m >= shift { target[m - shift] } else { 0 };
            assert_eq!(full[m], expect, "({p},{n},{a}) e={e} m={m}");
        }
    }
}

#[test]
fn free_syzygies_split_into_two_line_bundles() {
    for (p, n, b) in [(5u64, 3u64, 3u64), (2, 3, 4), (3, 7, 27), (2, 5, 6), (3, 4, 8), (7, 3, 6), (5, 7, 14)] {
        assert!(has_finite_proj_dim(p, n, &BigInt::from(b)).unwrap());
        let (d1, d2) = free_generator_degrees(&inst(p, n, b), 0).unwrap();
        let (d1, d2) = (d1.to_i64().unwrap(), d2.to_i64().unwrap());
        let top = 3 * b + 10;
        let dims = syzygy_graded_dims(p, n, b, top).unwrap();
        for m in 0..=top as i64 {
            let expect = plane_curve_dim(n, m - d1) + plane_curve_dim(n, m - d2);
            assert_eq!(dims[m as usize], expect, "({p},{n},{b}) m={m}");
        }
    }
}

#[test]
fn periodic_resolution_matches_the_oracle() {
    for (p, n, b) in [(3u64, 7u64, 9u64), (5, 3, 7), (7, 5, 12), (11, 4, 9), (3, 5, 13)] {
        if has_finite_proj_dim(p, n, &BigInt::from(b)).unwrap() {
            continue;
        }
        let series = resolution_series(n, &BigInt::from(b), 40).unwrap();
        let dims = syzygy_graded_dims(p, n, b, 40).unwrap();
        for (m, &d) in dims.iter().enumerate() {
            assert_eq!(series.coefficient(m), d as i64, "({p},{n},{b}) m={m}");
        }
    }
}

#[test]
fn minimal_filtrations_start_at_the_first_unstable_pull_back() {
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        for n in 2..10 {
            for a in 1..4 {
                if n % p == 0 || 2 * n * p <= 3 * a {
                    continue;
                }
                let i = inst(p, n, a);
                let Ok(hn) = hn_filtration(&i) else { continue };
                if hn.s == 0 || 3 * a * p.pow(hn.s - 1) > DEFAULT_BUDGET {
                    continue;
                }
                let oracle = minimality_by_oracle(&i, &hn, DEFAULT_BUDGET).unwrap();
                if hn.minimal == Minimality::Minimal {
                    assert!(oracle, "({p},{n},{a})");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn classification_split_degrees_match_the_oracle() {
    let c = classify(&inst(3, 7, 1)).unwrap();
    let Verdict::NotStronglySemistable { e0, split_degrees, .. } = c.verdict else { panic!() };
    let b = 27u64;
    assert_eq!(e0, 3);
    let dims = syzygy_graded_dims(3, 7, b, 60).unwrap();
    let (d1, d2) = (-split_degrees.0.to_i64().unwrap(), -split_degrees.1.to_i64().unwrap());
    for m in 0..=60i64 {
        assert_eq!(dims[m as usize], plane_curve_dim(7, m - d1) + plane_curve_dim(7, m - d2));
    }
}
