mod common;

use std::sync::Mutex;
use std::time::{Duration, Instant};

use dstnet::exec::{apply, apply_in_place, apply_inverse, apply_real_in_place};
use dstnet::planner::{compose_dense, plan_dst1, PlanKind};
use num_complex::Complex64;
use proptest::prelude::*;

use common::{max_abs_diff, norm, random_complex_vec, random_real_vec, rng};

// large-plan tests share one slot so their memory peaks do not overlap
static HEAVY: Mutex<()> = Mutex::new(());

#[test]
fn unit_vectors_reproduce_dense_columns() {
    for kind in PlanKind::ALL {
        for k in 1..=8 {
            let plan = kind.plan(k).unwrap();
            let n = plan.n();
            if n > 255 {
                continue;
            }
            let dense = compose_dense(&plan).unwrap();
            for b in 0..n {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[b] = Complex64::new(1.0, 0.0);
                let col = apply(&plan, &e).unwrap();
                assert!(max_abs_diff(&col, &dense.column(b)) < 1e-10, "{kind} n={n} b={b}");
            }
        }
    }
}

#[test]
fn round_trip_at_1023() {
    let plan = plan_dst1(10).unwrap();
    let v = random_complex_vec(1023, &mut rng(3));
    let back = apply_inverse(&plan, &apply(&plan, &v).unwrap()).unwrap();
    assert!(max_abs_diff(&back, &v) < 1e-10);
}

#[test]
fn dst1_is_an_involution() {
    for k in [1, 2, 5, 9, 12] {
        let plan = plan_dst1(k).unwrap();
        let v = random_complex_vec(plan.n(), &mut rng(k as u64));
        let twice = apply(&plan, &apply(&plan, &v).unwrap()).unwrap();
        assert!(max_abs_diff(&twice, &v) < 1e-10, "k={k}");
    }
}

#[test]
fn real_path_matches_complex_path() {
    for kind in [PlanKind::Dst1, PlanKind::Dst3] {
        for k in [1, 3, 8, 11] {
            let plan = kind.plan(k).unwrap();
            let x = random_real_vec(plan.n(), &mut rng(40 + k as u64));
            let mut real = x.clone();
            apply_real_in_place(&plan, &mut real).unwrap();
            let mut cplx: Vec<Complex64> = x.iter().map(|&r| Complex64::new(r, 0.0)).collect();
            apply_in_place(&plan, &mut cplx).unwrap();
            for (r, z) in real.iter().zip(&cplx) {
                assert!((r - z.re).abs() < 1e-12 && z.im.abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(kind_idx in 0usize..3, k in 1u32..=10, seed in any::<u64>()) {
        let plan = PlanKind::ALL[kind_idx].plan(k).unwrap();
        let v = random_complex_vec(plan.n(), &mut rng(seed));
        let out = apply(&plan, &v).unwrap();
        prop_assert!((norm(&out) - norm(&v)).abs() < 1e-10 * norm(&v).max(1.0));
        let back = apply_inverse(&plan, &out).unwrap();
        prop_assert!(max_abs_diff(&back, &v) < 1e-10);
    }
}

fn best_time(plan: &dstnet::Plan, v: &[f64], reps: usize) -> Duration {
    (0..reps)
        .map(|_| {
            let mut w = v.to_vec();
            let t = Instant::now();
            apply_real_in_place(plan, &mut w).unwrap();
            t.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn runtime_scales_like_n_log_n() {
    let _guard = HEAVY.lock().unwrap_or_else(|e| e.into_inner());
    let small = plan_dst1(17).unwrap();
    let large = plan_dst1(20).unwrap();
    let t_small = best_time(&small, &random_real_vec(small.n(), &mut rng(1)), 5);
    let t_large = best_time(&large, &random_real_vec(large.n(), &mut rng(2)), 3);
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64();
    println!("n=2^17-1: {t_small:?}  n=2^20-1: {t_large:?}  ratio {ratio:.2}");
    // n log n predicts about 9.4; a quadratic cost would give about 64.
    // The slack covers the working set leaving cache at the larger size.
    assert!(ratio <= 20.0, "ratio {ratio}");
}
