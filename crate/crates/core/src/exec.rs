//! Fast single-particle execution of plans, O(gates) = O(n log n).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::planner::Plan;

fn check_len(plan: &Plan, len: usize) -> Result<()> {
    if plan.n() != len {
        return Err(Error::Shape {
            expected: format!("vector of length {}", plan.n()),
            actual: format!("vector of length {len}"),
        });
    }
    Ok(())
}

/// Scalar type a plan can be executed over.
trait Amplitude: Copy + Default {
    fn two_mode(x: Self, y: Self, u: &crate::gate::Mat2) -> (Self, Self);
    fn scale(self, value: Complex64) -> Self;
}

impl Amplitude for Complex64 {
    #[inline(always)]
    fn two_mode(x: Self, y: Self, u: &crate::gate::Mat2) -> (Self, Self) {
        let m = &u.0;
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    #[inline(always)]
    fn scale(self, value: Complex64) -> Self {
        self * value
    }
}

impl Amplitude for f64 {
    #[inline(always)]
    fn two_mode(x: Self, y: Self, u: &crate::gate::Mat2) -> (Self, Self) {
        let m = &u.0;
        (m[0][0].re * x + m[0][1].re * y, m[1][0].re * x + m[1][1].re * y)
    }

    #[inline(always)]
    fn scale(self, value: Complex64) -> Self {
        self * value.re
    }
}

fn run<'a, T: Amplitude>(gates: impl Iterator<Item = (&'a Gate, bool)>, v: &mut [T]) {
    let mut scratch: Vec<T> = Vec::new();
    for (gate, inverse) in gates {
        match gate {
            Gate::TwoMode { i, j, op } => {
                let u = if inverse { op.matrix.adjoint() } else { op.matrix };
                let (x, y) = T::two_mode(v[*i], v[*j], &u);
                v[*i] = x;
                v[*j] = y;
            }
            Gate::Scalar { i, value } => {
                let value = if inverse { value.inv() } else { *value };
                v[*i] = v[*i].scale(value);
            }
            Gate::Perm(p) => {
                scratch.resize(v.len(), T::default());
                if inverse {
                    // dst[a] = src[map[a]]
                    for (d, &b) in scratch.iter_mut().zip(p.map()) {
                        *d = v[b];
                    }
                } else {
                    p.scatter(v, &mut scratch);
                }
                v.copy_from_slice(&scratch);
            }
        }
    }
}

/// Applies `plan` to `v` in place.
pub fn apply_in_place(plan: &Plan, v: &mut [Complex64]) -> Result<()> {
    check_len(plan, v.len())?;
    run(plan.gates().iter().map(|g| (g, false)), v);
    Ok(())
}

/// Applies the inverse of `plan` to `v` in place.
pub fn apply_inverse_in_place(plan: &Plan, v: &mut [Complex64]) -> Result<()> {
    check_len(plan, v.len())?;
    run(plan.gates().iter().rev().map(|g| (g, true)), v);
    Ok(())
}

/// Returns `compose_dense(plan) · v`.
pub fn apply(plan: &Plan, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = v.to_vec();
    apply_in_place(plan, &mut out)?;
    Ok(out)
}

/// Returns `compose_dense(plan)† · v`.
pub fn apply_inverse(plan: &Plan, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = v.to_vec();
    apply_inverse_in_place(plan, &mut out)?;
    Ok(out)
}

fn check_real(plan: &Plan) -> Result<()> {
    if !plan.is_real() {
        return Err(Error::Shape {
            expected: "a real plan".into(),
            actual: format!("{} plan with complex gates", plan.kind()),
        });
    }
    Ok(())
}

/// Real-arithmetic path for plans whose gates are all real (the DST
/// families).
pub fn apply_real_in_place(plan: &Plan, v: &mut [f64]) -> Result<()> {
    check_len(plan, v.len())?;
    check_real(plan)?;
    run(plan.gates().iter().map(|g| (g, false)), v);
    Ok(())
}

pub fn apply_real_inverse_in_place(plan: &Plan, v: &mut [f64]) -> Result<()> {
    check_len(plan, v.len())?;
    check_real(plan)?;
    run(plan.gates().iter().rev().map(|g| (g, true)), v);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{GateKind, Permutation};
    use crate::planner::{plan_dft, plan_dst1, PlanKind};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn dst1_of_first_unit_vector() {
        let plan = plan_dst1(2).unwrap();
        let out = apply(&plan, &[c(1.0), c(0.0), c(0.0)]).unwrap();
        for (z, want) in out.iter().zip([0.5, FRAC_1_SQRT_2, 0.5]) {
            assert!((z - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn dft_of_first_unit_vector() {
        let plan = plan_dft(3).unwrap();
        let mut v = vec![c(0.0); 8];
        v[0] = c(1.0);
        for z in apply(&plan, &v).unwrap() {
            assert!((z - c(1.0 / 8f64.sqrt())).norm() < 1e-15);
        }
    }

    #[test]
    fn empty_plan_is_identity() {
        let plan = Plan::new(PlanKind::Dst1, 3, vec![]).unwrap();
        let v = vec![c(1.0), Complex64::new(2.0, -1.0), c(3.0)];
        assert_eq!(apply(&plan, &v).unwrap(), v);
    }

    #[test]
    fn length_mismatch() {
        let plan = plan_dst1(2).unwrap();
        assert!(matches!(apply(&plan, &[c(1.0)]), Err(Error::Shape { .. })));
        assert!(apply_inverse(&plan, &[c(1.0); 4]).is_err());
        assert!(apply_real_in_place(&plan, &mut [0.0; 2]).is_err());
    }

    #[test]
    fn complex_plan_rejected_on_real_path() {
        let plan = plan_dft(2).unwrap();
        assert!(apply_real_in_place(&plan, &mut [0.0; 4]).is_err());
    }

    #[test]
    fn single_fhat_is_its_own_inverse() {
        let g = Gate::two_mode(0, 1, GateKind::Fhat).unwrap();
        let plan = Plan::new(PlanKind::Dst3, 2, vec![g]).unwrap();
        let v = [c(0.3), c(-1.2)];
        let fwd = apply(&plan, &v).unwrap();
        let inv = apply_inverse(&plan, &v).unwrap();
        for (a, b) in fwd.iter().zip(&inv) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn permutation_round_trip() {
        let p = Permutation::new(vec![3, 0, 2, 1]).unwrap();
        let plan = Plan::new(PlanKind::Dft, 4, vec![Gate::Perm(p)]).unwrap();
        let v: Vec<_> = (0..4).map(|x| c(x as f64)).collect();
        let out = apply(&plan, &v).unwrap();
        assert_eq!(out, vec![c(1.0), c(3.0), c(2.0), c(0.0)]);
        assert_eq!(apply_inverse(&plan, &out).unwrap(), v);
    }
}
