mod common;

use dstnet::fock::{apply_plan_fock, circuit_operator, lower_permutations, swap_network, FockState};
use dstnet::gate::{Mat2, Permutation};
use dstnet::planner::{compose_dense, gate_census, plan_dst1, PlanKind};
use dstnet::reference::second_quantize_dense;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{max_abs_diff, normalized, random_complex_vec, random_orthogonal, rng};

fn random_state(n: usize, seed: u64) -> FockState {
    FockState::from_amplitudes(n, normalized(random_complex_vec(1 << n, &mut rng(seed)))).unwrap()
}

fn random_unitary2(rng: &mut impl Rng) -> Mat2 {
    let o = random_orthogonal(2, rng);
    let (a, b) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
    let p = |t: f64| Complex64::from_polar(1.0, t);
    Mat2([[o[(0, 0)] * p(a), o[(0, 1)] * p(b)], [o[(1, 0)] * p(a), o[(1, 1)] * p(b)]])
}

#[test]
fn operators_match_slater_oracle() {
    for kind in PlanKind::ALL {
        for k in 1..=3 {
            let plan = kind.plan(k).unwrap();
            let oracle = second_quantize_dense(&kind.dense(plan.n()).unwrap()).unwrap();
            let dev = circuit_operator(&plan).unwrap().max_abs_diff(&oracle);
            assert!(dev < 1e-10, "{kind} n={}: {dev}", plan.n());
        }
    }
}

#[test]
fn operator_is_second_quantized_composition() {
    for kind in PlanKind::ALL {
        let plan = kind.plan(3).unwrap();
        let via_dense = second_quantize_dense(&compose_dense(&plan).unwrap()).unwrap();
        let op = circuit_operator(&plan).unwrap();
        assert!(op.max_abs_diff(&via_dense) < 1e-10);
        assert!(op.is_unitary(1e-10));
    }
}

#[test]
fn single_excitations_reproduce_first_quantization() {
    for kind in PlanKind::ALL {
        let plan = kind.plan(3).unwrap();
        let n = plan.n();
        let op = circuit_operator(&plan).unwrap();
        let dense = compose_dense(&plan).unwrap();
        for a in 0..n {
            for b in 0..n {
                let (l, k) = (1 << (n - 1 - a), 1 << (n - 1 - b));
                assert!((op[(l, k)] - dense[(a, b)]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn particle_number_and_norm_are_preserved() {
    for kind in PlanKind::ALL {
        let plan = kind.plan(4).unwrap();
        let n = plan.n();
        let mut rng = rng(5);
        for p in [0, 1, 3, n / 2, n] {
            let amps: Vec<Complex64> = (0..1usize << n)
                .map(|idx| {
                    if idx.count_ones() as usize == p {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let st = FockState::from_amplitudes(n, normalized(amps)).unwrap();
            let out = apply_plan_fock(&st, &plan).unwrap();
            assert!(out.weight_outside_sector(p) < 1e-12, "{kind} p={p}");
            assert!((out.norm() - 1.0).abs() < 1e-10);
        }
    }
}

/// Applies `u` on (i, j) by swapping j down next to i, acting on the
/// adjacent pair and swapping back.
fn via_adjacent_swaps(state: &FockState, i: usize, j: usize, u: &Mat2) -> FockState {
    let mut st = state.clone();
    let s = Mat2::swap();
    for p in (i + 1..j).rev() {
        st.apply_two_mode(p, p + 1, &s).unwrap();
    }
    st.apply_two_mode(i, i + 1, u).unwrap();
    for p in i + 1..j {
        st.apply_two_mode(p, p + 1, &s).unwrap();
    }
    st
}

#[test]
fn string_sign_equals_adjacent_swap_conjugation() {
    let mut rng = rng(21);
    for n in 2..=6 {
        for i in 0..n {
            for j in i + 1..n {
                let u = random_unitary2(&mut rng);
                let st = random_state(n, rng.gen());
                let mut direct = st.clone();
                direct.apply_two_mode(i, j, &u).unwrap();
                let swapped = via_adjacent_swaps(&st, i, j, &u);
                let dev = max_abs_diff(direct.amplitudes(), swapped.amplitudes());
                assert!(dev < 1e-12, "n={n} ({i},{j}): {dev}");
            }
        }
    }
}

#[test]
fn two_mode_gate_matches_slater_oracle() {
    let mut rng = rng(22);
    let n = 4;
    for (i, j) in [(0, 1), (0, 3), (1, 3), (2, 3)] {
        let u = random_unitary2(&mut rng);
        let mut full = dstnet::reference::DenseMatrix::identity(n);
        full[(i, i)] = u.get(0, 0);
        full[(i, j)] = u.get(0, 1);
        full[(j, i)] = u.get(1, 0);
        full[(j, j)] = u.get(1, 1);
        let oracle = second_quantize_dense(&full).unwrap();
        for k in 0..1 << n {
            let mut st = FockState::basis(n, k).unwrap();
            st.apply_two_mode(i, j, &u).unwrap();
            assert!(max_abs_diff(st.amplitudes(), &oracle.column(k)) < 1e-12);
        }
    }
}

#[test]
fn permutation_matches_slater_oracle() {
    let mut rng = rng(23);
    for n in 1..=6 {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(&mut rng);
        let p = Permutation::new(map).unwrap();
        let plan = dstnet::Plan::new(PlanKind::Dft, n, vec![dstnet::Gate::Perm(p)]).unwrap();
        let oracle = second_quantize_dense(&compose_dense(&plan).unwrap()).unwrap();
        assert_eq!(circuit_operator(&plan).unwrap(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn swap_network_equals_direct_permutation(
        map in (1usize..=8).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle()),
        seed in any::<u64>(),
    ) {
        let n = map.len();
        let perm = Permutation::new(map).unwrap();
        let swaps = swap_network(&perm, n).unwrap();
        prop_assert!(swaps.len() <= n * (n - 1) / 2);
        prop_assert_eq!(swaps.len() as u64, perm.inversion_count());
        prop_assert!(swaps.iter().all(|&(a, b)| b == a + 1));

        // as relabelling: content of a ends at image(a)
        let mut labels: Vec<usize> = (0..n).collect();
        for &(a, b) in &swaps {
            labels.swap(a, b);
        }
        for a in 0..n {
            prop_assert_eq!(labels[perm.image(a)], a);
        }

        let st = random_state(n, seed);
        let mut direct = st.clone();
        direct.apply_perm(&perm).unwrap();
        let mut lowered = st;
        for &(a, b) in &swaps {
            lowered.apply_two_mode(a, b, &Mat2::swap()).unwrap();
        }
        // the swap matrix is exact in floating point, so signs must agree exactly
        prop_assert_eq!(direct, lowered);
    }
}

#[test]
fn lowering_counts_match_census() {
    for k in 1..=6 {
        let plan = plan_dst1(k).unwrap();
        let lowered = lower_permutations(&plan).unwrap();
        let c = gate_census(&plan);
        let lc = gate_census(&lowered);
        assert_eq!(lc.custom, c.adjacent_swaps);
        assert_eq!(lc.perm, 0);
        if plan.n() <= 8 {
            let dev = circuit_operator(&plan).unwrap().max_abs_diff(&circuit_operator(&lowered).unwrap());
            assert!(dev < 1e-12);
        }
    }
}
