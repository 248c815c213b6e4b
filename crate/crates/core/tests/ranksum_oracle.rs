use cgo_core::stats::{wilcoxon_ranksum, wilcoxon_ranksum_exact};
use cgo_core::RngStream;
use proptest::prelude::*;

/// Two-sided exact p-value by listing every size-`n` subset of the pooled
/// ranks `1..=n+m`. Tie-free samples only.
fn enumerate_p(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let total = n + b.len();
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let observed: usize = a
        .iter()
        .map(|v| pooled.iter().position(|p| p == v).unwrap() + 1)
        .sum();
    let (mut below, mut above, mut count) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let s: usize = (0..total).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).sum();
        count += 1;
        if s <= observed {
            below += 1;
        }
        if s >= observed {
            above += 1;
        }
    }
    (2.0 * below.min(above) as f64 / count as f64).min(1.0)
}

fn distinct_sample(rng: &mut RngStream, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.uniform_in(-100.0, 100.0)).collect()
}

#[test]
fn separated_samples_match_enumeration() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let b = [10.0, 11.0, 12.0, 13.0, 14.0];
    let oracle = enumerate_p(&a, &b);
    assert!((oracle - 2.0 / 252.0).abs() < 1e-15);
    assert!((wilcoxon_ranksum_exact(&a, &b).unwrap() - oracle).abs() < 1e-12);
    assert!((wilcoxon_ranksum(&a, &b).unwrap() - oracle).abs() < 0.01);
}

#[test]
fn exact_distribution_matches_enumeration() {
    let mut rng = RngStream::new(11);
    for n in 3..=8 {
        for m in 3..=8 {
            for _ in 0..5 {
                let a = distinct_sample(&mut rng, n);
                let b = distinct_sample(&mut rng, m);
                let got = wilcoxon_ranksum_exact(&a, &b).unwrap();
                let want = enumerate_p(&a, &b);
                assert!((got - want).abs() < 1e-12, "n={n} m={m}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn large_samples_normal_close_to_exact() {
    let mut rng = RngStream::new(5);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let a = distinct_sample(&mut rng, 30);
        let b: Vec<f64> = distinct_sample(&mut rng, 30).iter().map(|v| v + 30.0).collect();
        let d = (wilcoxon_ranksum(&a, &b).unwrap() - wilcoxon_ranksum_exact(&a, &b).unwrap()).abs();
        worst = worst.max(d);
    }
    assert!(worst < 0.01, "worst deviation {worst}");
}

#[test]
fn ties_lower_variance_not_p_range() {
    let a = [1.0, 1.0, 2.0, 2.0, 3.0];
    let b = [2.0, 3.0, 3.0, 4.0, 4.0];
    let p = wilcoxon_ranksum(&a, &b).unwrap();
    assert!(p > 0.0 && p <= 1.0);
    assert_eq!(p, wilcoxon_ranksum(&b, &a).unwrap());
}

fn samples() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..=8, 3usize..=8).prop_flat_map(|(n, m)| {
        proptest::collection::hash_set(-1000i32..1000, n + m).prop_map(move |set| {
            let v: Vec<f64> = set.into_iter().map(f64::from).collect();
            (v[..n].to_vec(), v[n..].to_vec())
        })
    })
}

proptest! {
    #[test]
    fn symmetric_and_shift_invariant((a, b) in samples(), shift in -500i32..500) {
        let p = wilcoxon_ranksum(&a, &b).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert_eq!(p, wilcoxon_ranksum(&b, &a).unwrap());
        let s = f64::from(shift);
        let a2: Vec<f64> = a.iter().map(|v| v + s).collect();
        let b2: Vec<f64> = b.iter().map(|v| v + s).collect();
        prop_assert_eq!(p, wilcoxon_ranksum(&a2, &b2).unwrap());
        prop_assert_eq!(
            wilcoxon_ranksum_exact(&a, &b).unwrap(),
            wilcoxon_ranksum_exact(&a2, &b2).unwrap()
        );
    }

    #[test]
    fn moving_apart_never_raises_p((a, b) in samples(), step in 1i32..400) {
        // Orient so that b already ranks above a, then push it further up.
        let above = |a: &[f64], b: &[f64]| {
            b.iter().map(|y| a.iter().filter(|x| *x < y).count()).sum::<usize>()
        };
        let (a, b) = if 2 * above(&a, &b) >= a.len() * b.len() {
            (a, b)
        } else {
            (b, a)
        };
        let farther: Vec<f64> = b.iter().map(|v| v + f64::from(step) + 0.5).collect();
        prop_assert!(enumerate_p(&a, &farther) <= enumerate_p(&a, &b) + 1e-15);
        prop_assert!(
            wilcoxon_ranksum_exact(&a, &farther).unwrap()
                <= wilcoxon_ranksum_exact(&a, &b).unwrap() + 1e-15
        );
        prop_assert!(wilcoxon_ranksum(&a, &farther).unwrap() <= wilcoxon_ranksum(&a, &b).unwrap());
    }
}
