//! Exact fermionic statevector simulation of second-quantized plans.
//!
//! Amplitudes are indexed by [`OccupationIndex`](crate::reference::OccupationIndex)
//! (mode 0 is the most significant bit) and basis states are ordered as
//! `c†_0^{k_0} ⋯ c†_{n−1}^{k_{n−1}} |Ω⟩`. A single-particle matrix `u` acting on
//! modes `i < j` lifts to the many-body space as
//!
//! * `|…0_i…0_j…⟩` unchanged,
//! * `|…1_i…1_j…⟩` multiplied by `det u`,
//! * the one-particle pair mixed by `u`, with the off-diagonal terms carrying
//!   the string sign `(−1)^t`, `t` being the number of occupied modes strictly
//!   between `i` and `j`.
//!
//! Non-adjacent gates are applied directly with the string sign;
//! [`swap_network`] and [`lower_permutations`] provide the equivalent
//! adjacent-swap formulation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, Mat2, Permutation, TwoModeOp};
use crate::planner::Plan;
use crate::reference::{mode_bit, DenseMatrix};

/// Largest mode count of a [`FockState`].
pub const MAX_FOCK_MODES: usize = 24;

/// Largest mode count accepted by [`circuit_operator`].
pub const MAX_OPERATOR_MODES: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// 2ⁿ amplitudes over fermionic occupation bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl FockState {
    fn check_modes(n: usize) -> Result<()> {
        if n > MAX_FOCK_MODES {
            return Err(Error::SizeGuard {
                what: "Fock state",
                size: n,
                limit: MAX_FOCK_MODES,
            });
        }
        Ok(())
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// The occupation basis state with the given index.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        Self::check_modes(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidSize {
                size: index,
                reason: "occupation index out of range for the mode count",
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_modes(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::Shape {
                expected: format!("{} amplitudes", 1usize << n),
                actual: format!("{} amplitudes", amplitudes.len()),
            });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Total weight outside the sector with exactly `particles` fermions.
    pub fn weight_outside_sector(&self, particles: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx.count_ones() as usize != particles)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n {
            return Err(Error::ModeIndex { index: mode, n: self.n });
        }
        Ok(())
    }

    /// Applies Γ_u for a 2×2 matrix `u` on modes `i < j`.
    pub fn apply_two_mode(&mut self, i: usize, j: usize, u: &Mat2) -> Result<()> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i >= j {
            return Err(Error::InvalidPair { i, j });
        }
        let bi = mode_bit(self.n, i);
        let bj = mode_bit(self.n, j);
        // modes strictly between i and j
        let between = (bi - 1) & !((bj << 1) - 1);
        let det = u.det();
        let m = &u.0;
        for idx in 0..self.amplitudes.len() {
            if idx & (bi | bj) != 0 {
                continue;
            }
            let (s10, s01, s11) = (idx | bi, idx | bj, idx | bi | bj);
            let sign = if (idx & between).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            let a = self.amplitudes[s10];
            let b = self.amplitudes[s01];
            self.amplitudes[s10] = m[0][0] * a + m[0][1] * b * sign;
            self.amplitudes[s01] = m[1][0] * a * sign + m[1][1] * b;
            self.amplitudes[s11] *= det;
        }
        Ok(())
    }

    /// Applies Γ_α = diag(1, α) on mode `i`.
    pub fn apply_scalar(&mut self, i: usize, alpha: Complex64) -> Result<()> {
        self.check_mode(i)?;
        let bi = mode_bit(self.n, i);
        for (idx, z) in self.amplitudes.iter_mut().enumerate() {
            if idx & bi != 0 {
                *z *= alpha;
            }
        }
        Ok(())
    }

    /// Applies the second quantization of a mode permutation: each occupied
    /// mode `a` moves to `perm.image(a)`, with the sign of the induced
    /// reordering of creation operators.
    pub fn apply_perm(&mut self, perm: &Permutation) -> Result<()> {
        if perm.len() != self.n {
            return Err(Error::InvalidPerm(format!(
                "permutation of size {} applied to {} modes",
                perm.len(),
                self.n
            )));
        }
        let n = self.n;
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (idx, &z) in self.amplitudes.iter().enumerate() {
            if z == ZERO {
                continue;
            }
            let mut target = 0usize;
            // images placed so far, bit b set for image mode b
            let mut placed = 0u64;
            let mut inversions = 0u32;
            for a in 0..n {
                if idx & mode_bit(n, a) == 0 {
                    continue;
                }
                let b = perm.image(a);
                inversions += (placed >> (b + 1)).count_ones();
                placed |= 1 << b;
                target |= mode_bit(n, b);
            }
            out[target] = if inversions % 2 == 1 { -z } else { z };
        }
        self.amplitudes = out;
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::TwoMode { i, j, op } => self.apply_two_mode(*i, *j, &op.matrix),
            Gate::Scalar { i, value } => self.apply_scalar(*i, *value),
            Gate::Perm(p) => self.apply_perm(p),
        }
    }

    /// Applies every gate of `plan`'s second quantization, in plan order.
    pub fn apply_plan(&mut self, plan: &Plan) -> Result<()> {
        if plan.n() != self.n {
            return Err(Error::Shape {
                expected: format!("{}-mode state", plan.n()),
                actual: format!("{}-mode state", self.n),
            });
        }
        plan.gates().iter().try_for_each(|g| self.apply_gate(g))
    }
}

/// Returns `Γ_plan · state`.
pub fn apply_plan_fock(state: &FockState, plan: &Plan) -> Result<FockState> {
    let mut out = state.clone();
    out.apply_plan(plan)?;
    Ok(out)
}

/// The dense 2ⁿ×2ⁿ many-body operator of a plan, column by column.
pub fn circuit_operator(plan: &Plan) -> Result<DenseMatrix> {
    let n = plan.n();
    if n > MAX_OPERATOR_MODES {
        return Err(Error::SizeGuard {
            what: "circuit operator",
            size: n,
            limit: MAX_OPERATOR_MODES,
        });
    }
    let dim = 1usize << n;
    let mut out = DenseMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut state = FockState::basis(n, k)?;
        state.apply_plan(plan)?;
        for (l, &z) in state.amplitudes().iter().enumerate() {
            out[(l, k)] = z;
        }
    }
    Ok(out)
}

/// Decomposes `perm` into adjacent transpositions `(a, a+1)` by bubble sort.
///
/// Applying the returned swaps in order moves the content of mode `a` to
/// `perm.image(a)`. The length equals the inversion count, at most
/// `n(n−1)/2`.
pub fn swap_network(perm: &Permutation, n: usize) -> Result<Vec<(usize, usize)>> {
    if perm.len() != n {
        return Err(Error::InvalidPerm(format!(
            "permutation of size {} for {n} modes",
            perm.len()
        )));
    }
    // targets[p]: final position of whatever currently sits at p
    let mut targets = perm.map().to_vec();
    let mut swaps = Vec::new();
    for end in (1..n).rev() {
        let mut sorted = true;
        for p in 0..end {
            if targets[p] > targets[p + 1] {
                targets.swap(p, p + 1);
                swaps.push((p, p + 1));
                sorted = false;
            }
        }
        if sorted {
            break;
        }
    }
    Ok(swaps)
}

/// Replaces every `Perm` gate of `plan` by its adjacent fermionic swap
/// network. Swap gates carry the `Custom` label with matrix S.
pub fn lower_permutations(plan: &Plan) -> Result<Plan> {
    let swap = std::sync::Arc::new(TwoModeOp {
        kind: GateKind::Custom,
        matrix: Mat2::swap(),
    });
    let mut gates = Vec::with_capacity(plan.gates().len());
    for g in plan.gates() {
        match g {
            Gate::Perm(p) => {
                for (i, j) in swap_network(p, plan.n())? {
                    gates.push(Gate::TwoMode { i, j, op: swap.clone() });
                }
            }
            other => gates.push(other.clone()),
        }
    }
    Plan::new(plan.kind(), plan.n(), gates)
}
