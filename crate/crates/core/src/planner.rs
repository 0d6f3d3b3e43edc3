//! Recursive construction of orthogonal gate networks.
//!
//! Three families are supported, all built from 2×2 gates on mode pairs plus
//! relabelling permutations:
//!
//! * `DST̂-I` of size `2^k − 1`:
//!   `DST̂-I(2m−1) = L̄(2m−1) · (DST̂-III(m) ⊕ DST̂-I(m−1)) · M̂(2m−1)`
//! * `DST̂-III` of size `2^k`:
//!   `DST̂-III(2m) = K(2m) · (DST̂-III(m) ⊕ DST̂-III(m)) · (Q̂⁻(m) ⊕ Q̂⁺(m)) · (F̂ ⊗ I(m)) · N̂(2m)`
//! * `DFT̂` of size `2^k` (radix-2, decimation in frequency):
//!   `DFT̂(2m) = L(2m) · (DFT̂(m) ⊕ DFT̂(m)) · (I(m) ⊕ diag(ω₂ₘ^ℓ)) · (F̂ ⊗ I(m))`
//!
//! closed by `DST̂-I(1) = 1` and `DST̂-III(2) = DFT̂(2) = F̂`.
//!
//! The final permutation of each sub-network commutes with everything acting
//! on the other block, so it is folded into the parent's output permutation.
//! A `DST̂-III` or `DFT̂` plan therefore holds a single trailing `Perm`; a
//! `DST̂-I` plan additionally holds one block reversal per recursion level.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, Permutation, TwoModeOp};
use crate::reference::DenseMatrix;

/// Largest recursion level accepted by the builders.
pub const MAX_LEVEL: u32 = 30;

/// Largest plan size accepted by [`compose_dense`].
pub const MAX_DENSE_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    Dst1,
    Dst3,
    Dft,
}

impl PlanKind {
    pub const ALL: [PlanKind; 3] = [PlanKind::Dst1, PlanKind::Dst3, PlanKind::Dft];

    /// Transform size at recursion level `k`.
    pub fn size_at(self, level: u32) -> Result<usize> {
        check_level(level)?;
        Ok(match self {
            PlanKind::Dst1 => (1usize << level) - 1,
            PlanKind::Dst3 | PlanKind::Dft => 1usize << level,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            PlanKind::Dst1 => "dst1",
            PlanKind::Dst3 => "dst3",
            PlanKind::Dft => "dft",
        }
    }

    /// Builds the plan of this family at recursion level `k`.
    pub fn plan(self, level: u32) -> Result<Plan> {
        match self {
            PlanKind::Dst1 => plan_dst1(level),
            PlanKind::Dst3 => plan_dst3(level),
            PlanKind::Dft => plan_dft(level),
        }
    }

    /// The dense orthonormal matrix this family's plans realize.
    pub fn dense(self, n: usize) -> Result<DenseMatrix> {
        match self {
            PlanKind::Dst1 => crate::reference::orthonormal_dst1(n),
            PlanKind::Dst3 => crate::reference::orthonormal_dst3(n),
            PlanKind::Dft => crate::reference::orthonormal_dft(n),
        }
    }
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PlanKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dst1" => Ok(PlanKind::Dst1),
            "dst3" => Ok(PlanKind::Dst3),
            "dft" => Ok(PlanKind::Dft),
            _ => Err(format!("unknown transform kind {s:?} (expected dst1, dst3 or dft)")),
        }
    }
}

/// An ordered gate sequence; the first gate is applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    n: usize,
    kind: PlanKind,
    gates: Vec<Gate>,
}

impl Plan {
    /// Assembles a plan from explicit gates, checking that every gate fits in
    /// `n` modes and every permutation has size exactly `n`.
    pub fn new(kind: PlanKind, n: usize, gates: Vec<Gate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize {
                size: 0,
                reason: "plan must act on at least one mode",
            });
        }
        for g in &gates {
            match g {
                Gate::Perm(p) if p.len() != n => {
                    return Err(Error::InvalidPerm(format!(
                        "permutation of size {} in a plan of size {n}",
                        p.len()
                    )));
                }
                _ if g.span() > n => {
                    return Err(Error::ModeIndex {
                        index: g.span() - 1,
                        n,
                    });
                }
                Gate::TwoMode { i, j, .. } if i >= j => {
                    return Err(Error::InvalidPair { i: *i, j: *j });
                }
                _ => {}
            }
        }
        Ok(Self { n, kind, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> PlanKind {
        self.kind
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// True when every gate is real, so the plan can run on real data.
    pub fn is_real(&self) -> bool {
        self.gates.iter().all(Gate::is_real)
    }

    /// The plan of the inverse transform: inverted gates in reverse order.
    pub fn inverse(&self) -> Plan {
        Plan {
            n: self.n,
            kind: self.kind,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }
}

fn check_level(level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidLevel {
            level,
            reason: "recursion level must be at least 1",
        });
    }
    if level > MAX_LEVEL {
        return Err(Error::InvalidLevel {
            level,
            reason: "recursion level exceeds the supported maximum",
        });
    }
    Ok(())
}

/// Sign selecting `Q̂⁺` or `Q̂⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn apply(self, x: i32) -> i32 {
        match self {
            Sign::Minus => -x,
            Sign::Plus => x,
        }
    }
}

/// Appends gates for a network of `n` modes, sharing one matrix allocation
/// per distinct gate kind.
struct Emitter {
    n: usize,
    gates: Vec<Gate>,
    ops: HashMap<GateKind, Arc<TwoModeOp>>,
}

impl Emitter {
    fn new(n: usize, capacity: usize) -> Self {
        Self {
            n,
            gates: Vec::with_capacity(capacity),
            ops: HashMap::new(),
        }
    }

    fn two(&mut self, i: usize, j: usize, kind: GateKind) {
        debug_assert!(i < j && j < self.n);
        let op = self
            .ops
            .entry(kind)
            .or_insert_with(|| {
                Arc::new(TwoModeOp {
                    kind,
                    matrix: kind.canonical_matrix().expect("labelled kind"),
                })
            })
            .clone();
        self.gates.push(Gate::TwoMode { i, j, op });
    }

    fn scalar(&mut self, i: usize, value: Complex64) {
        self.gates.push(Gate::Scalar { i, value });
    }

    /// Pushes `local` acting on `[offset, offset + local.len())`; identities
    /// are dropped.
    fn perm(&mut self, local: &Permutation, offset: usize) {
        if !local.is_identity() {
            self.gates.push(Gate::Perm(local.embed(offset, self.n)));
        }
    }

    /// `M̂(2m−1)`: reverse the upper block, then F̂ on `(ℓ, m+ℓ)`.
    fn mhat(&mut self, offset: usize, m: usize) {
        let reversal = Permutation::from_map_unchecked((0..m - 1).rev().collect());
        self.perm(&reversal, offset + m);
        for ell in 0..m - 1 {
            self.two(offset + ell, offset + m + ell, GateKind::Fhat);
        }
    }

    /// `N̂(2m)`: `R̂(−m, 2m)` on `(m/2−1, 3m/2−1)` and Ĝ on
    /// `(m/2−1+ℓ, 3m/2−1−ℓ)`, `ℓ = 1, …, m/2−1`.
    fn nhat(&mut self, offset: usize, m: usize) {
        let h = m / 2;
        self.two(
            offset + h - 1,
            offset + 3 * h - 1,
            GateKind::Rot {
                ell: -(m as i32),
                m: 2 * m as u32,
            },
        );
        for ell in 1..h {
            self.two(offset + h - 1 + ell, offset + 3 * h - 1 - ell, GateKind::Ghat);
        }
    }

    /// `Q̂±(m)`: `R̂(±ℓ, m)` on `(ℓ−1, m−1−ℓ)`, `ℓ = 1, …, m/2−1`.
    fn qhat(&mut self, offset: usize, m: usize, sign: Sign) {
        for ell in 1..m / 2 {
            self.two(
                offset + ell - 1,
                offset + m - 1 - ell,
                GateKind::Rot {
                    ell: sign.apply(ell as i32),
                    m: m as u32,
                },
            );
        }
    }

    /// F̂ on `(ℓ, m+ℓ)`, `ℓ = 0, …, m−1`.
    fn butterflies(&mut self, offset: usize, m: usize) {
        for ell in 0..m {
            self.two(offset + ell, offset + m + ell, GateKind::Fhat);
        }
    }

    /// Emits `DST̂-III(n)` on `[offset, offset+n)` and returns the output
    /// permutation still to be applied, in local indices.
    fn dst3(&mut self, offset: usize, n: usize) -> Permutation {
        if n == 2 {
            self.two(offset, offset + 1, GateKind::Fhat);
            return Permutation::identity(2);
        }
        let m = n / 2;
        self.nhat(offset, m);
        self.butterflies(offset, m);
        self.qhat(offset, m, Sign::Minus);
        self.qhat(offset + m, m, Sign::Plus);
        let low = self.dst3(offset, m);
        let high = self.dst3(offset + m, m);
        low.direct_sum(&high).then(&k_map(n))
    }

    /// Emits `DST̂-I(n)` on `[offset, offset+n)`; see [`Emitter::dst3`].
    fn dst1(&mut self, offset: usize, n: usize) -> Permutation {
        if n == 1 {
            return Permutation::identity(1);
        }
        let m = (n + 1) / 2;
        self.mhat(offset, m);
        let low = self.dst3(offset, m);
        let high = self.dst1(offset + m, m - 1);
        low.direct_sum(&high).then(&lbar_map(n))
    }

    /// Emits `DFT̂(n)` on `[offset, offset+n)`; see [`Emitter::dst3`].
    fn dft(&mut self, offset: usize, n: usize) -> Permutation {
        if n == 1 {
            return Permutation::identity(1);
        }
        let m = n / 2;
        self.butterflies(offset, m);
        for ell in 1..m {
            // ω₂ₘ^ℓ = exp(−2πiℓ/2m)
            let phase = -std::f64::consts::PI * ell as f64 / m as f64;
            self.scalar(offset + m + ell, Complex64::from_polar(1.0, phase));
        }
        let low = self.dft(offset, m);
        let high = self.dft(offset + m, m);
        low.direct_sum(&high).then(&l_map(n))
    }

    fn finish(mut self, kind: PlanKind, tail: Permutation) -> Plan {
        self.perm(&tail, 0);
        Plan {
            n: self.n,
            kind,
            gates: self.gates,
        }
    }
}

fn lbar_map(n: usize) -> Permutation {
    // row a holds its 1 in column (a·m mod n), so column b is sent to row a
    let m = (n + 1) / 2;
    let mut map = vec![0; n];
    for a in 0..n {
        map[(a * m) % n] = a;
    }
    Permutation::from_map_unchecked(map)
}

fn l_map(n: usize) -> Permutation {
    lbar_map(n - 1).direct_sum(&Permutation::identity(1))
}

fn k_map(n: usize) -> Permutation {
    // (I₂ ⊕ J₂ ⊕ I₂ ⊕ J₂ ⊕ …) after L
    let flip = |b: usize| if b % 4 >= 2 { b ^ 1 } else { b };
    let l = l_map(n);
    Permutation::from_map_unchecked(l.map().iter().map(|&b| flip(b)).collect())
}

/// The stride permutation `L̄(n)` for odd `n`.
pub fn perm_lbar(n: usize) -> Result<Permutation> {
    if n % 2 == 0 {
        return Err(Error::InvalidSize {
            size: n,
            reason: "L̄ is defined for odd sizes",
        });
    }
    Ok(lbar_map(n))
}

/// `L(n) = L̄(n−1) ⊕ 1` for even `n`.
pub fn perm_l(n: usize) -> Result<Permutation> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidSize {
            size: n,
            reason: "L is defined for even positive sizes",
        });
    }
    Ok(l_map(n))
}

/// `K(n) = (I₂ ⊕ J₂ ⊕ I₂ ⊕ …) · L(n)` for even `n`.
pub fn perm_k(n: usize) -> Result<Permutation> {
    perm_l(n)?;
    Ok(k_map(n))
}

fn require_even_half(m: usize, what: &'static str) -> Result<()> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidSize { size: m, reason: what });
    }
    Ok(())
}

/// Gates of `M̂(2m−1)` on modes `[0, 2m−1)`.
pub fn build_mhat(m: usize) -> Result<Vec<Gate>> {
    if m < 2 {
        return Err(Error::InvalidSize {
            size: m,
            reason: "M̂ needs a half-size of at least 2",
        });
    }
    let mut e = Emitter::new(2 * m - 1, m);
    e.mhat(0, m);
    Ok(e.gates)
}

/// Gates of `N̂(2m)` on modes `[0, 2m)`.
pub fn build_nhat(m: usize) -> Result<Vec<Gate>> {
    require_even_half(m, "N̂ needs an even half-size of at least 2")?;
    let mut e = Emitter::new(2 * m, m / 2);
    e.nhat(0, m);
    Ok(e.gates)
}

/// Gates of `Q̂±(m)` on modes `[0, m)`.
pub fn build_qhat(m: usize, sign: Sign) -> Result<Vec<Gate>> {
    require_even_half(m, "Q̂ needs an even size of at least 2")?;
    let mut e = Emitter::new(m, m / 2);
    e.qhat(0, m, sign);
    Ok(e.gates)
}

/// Radix-2 plan of `DFT̂(2^k)`.
pub fn plan_dft(level: u32) -> Result<Plan> {
    let n = PlanKind::Dft.size_at(level)?;
    let k = level as usize;
    let mut e = Emitter::new(n, n * k + 1);
    let tail = e.dft(0, n);
    Ok(e.finish(PlanKind::Dft, tail))
}

/// Orthogonal plan of `DST̂-III(2^k)`.
pub fn plan_dst3(level: u32) -> Result<Plan> {
    let n = PlanKind::Dst3.size_at(level)?;
    let capacity = closed_form_c3(n)? as usize + 1;
    let mut e = Emitter::new(n, capacity);
    let tail = e.dst3(0, n);
    Ok(e.finish(PlanKind::Dst3, tail))
}

/// Orthogonal plan of `DST̂-I(2^k − 1)`.
pub fn plan_dst1(level: u32) -> Result<Plan> {
    let n = PlanKind::Dst1.size_at(level)?;
    let capacity = closed_form_c1(n)? as usize + level as usize + 1;
    let mut e = Emitter::new(n, capacity);
    let tail = e.dst1(0, n);
    Ok(e.finish(PlanKind::Dst1, tail))
}

/// Multiplies `gates` (first applied first) into a dense `n×n` matrix.
pub fn compose_gates(n: usize, gates: &[Gate]) -> Result<DenseMatrix> {
    if n > MAX_DENSE_SIZE {
        return Err(Error::SizeGuard {
            what: "dense composition",
            size: n,
            limit: MAX_DENSE_SIZE,
        });
    }
    let mut acc = DenseMatrix::identity(n);
    let mut scratch = DenseMatrix::zeros(n, n);
    for g in gates {
        if g.span() > n {
            return Err(Error::ModeIndex {
                index: g.span() - 1,
                n,
            });
        }
        // left-multiply the accumulated product, row by row
        match g {
            Gate::TwoMode { i, j, op } => {
                let u = &op.matrix;
                for c in 0..n {
                    let (x, y) = (acc[(*i, c)], acc[(*j, c)]);
                    acc[(*i, c)] = u.get(0, 0) * x + u.get(0, 1) * y;
                    acc[(*j, c)] = u.get(1, 0) * x + u.get(1, 1) * y;
                }
            }
            Gate::Scalar { i, value } => {
                for z in acc.row_mut(*i) {
                    *z *= value;
                }
            }
            Gate::Perm(p) => {
                if p.len() != n {
                    return Err(Error::InvalidPerm(format!(
                        "permutation of size {} applied to {n} modes",
                        p.len()
                    )));
                }
                for a in 0..n {
                    scratch.row_mut(p.image(a)).copy_from_slice(acc.row(a));
                }
                std::mem::swap(&mut acc, &mut scratch);
            }
        }
    }
    Ok(acc)
}

/// Dense matrix realized by a plan.
pub fn compose_dense(plan: &Plan) -> Result<DenseMatrix> {
    compose_gates(plan.n(), plan.gates())
}

/// Per-kind gate counts of a plan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCensus {
    pub fhat: u64,
    pub ghat: u64,
    pub rot: u64,
    pub custom: u64,
    pub scalar: u64,
    pub perm: u64,
    /// Adjacent transpositions needed to lower every `Perm` gate.
    pub adjacent_swaps: u64,
}

impl GateCensus {
    /// Two-mode gates and scalars; permutations are not counted.
    pub fn elementary(&self) -> u64 {
        self.fhat + self.ghat + self.rot + self.custom + self.scalar
    }
}

pub fn gate_census(plan: &Plan) -> GateCensus {
    let mut c = GateCensus::default();
    for g in plan.gates() {
        match g {
            Gate::TwoMode { op, .. } => match op.kind {
                GateKind::Fhat => c.fhat += 1,
                GateKind::Ghat => c.ghat += 1,
                GateKind::Rot { .. } => c.rot += 1,
                GateKind::Custom => c.custom += 1,
            },
            Gate::Scalar { .. } => c.scalar += 1,
            Gate::Perm(p) => {
                c.perm += 1;
                c.adjacent_swaps += p.inversion_count();
            }
        }
    }
    c
}

fn exact_log2(n: usize) -> Option<u64> {
    n.is_power_of_two().then(|| n.trailing_zeros() as u64)
}

/// Elementary operations of `DST̂-I(n)`, `n = 2^k − 1`:
/// `5/4·n·log₂(n+1) − 13/4·n + 9/4·log₂(n+1) − 1/4`.
pub fn closed_form_c1(n: usize) -> Result<u64> {
    let l = exact_log2(n + 1).filter(|_| n >= 1).ok_or(Error::InvalidSize {
        size: n,
        reason: "DST-I sizes are 2^k - 1",
    })?;
    let n = n as i128;
    let l = l as i128;
    let four_c = 5 * n * l - 13 * n + 9 * l - 1;
    debug_assert_eq!(four_c % 4, 0);
    Ok((four_c / 4) as u64)
}

/// Elementary operations of `DST̂-III(n)`, `n = 2^k ≥ 2`:
/// `5/4·n·log₂n − 7/4·n + 2`.
pub fn closed_form_c3(n: usize) -> Result<u64> {
    let l = exact_log2(n).filter(|_| n >= 2).ok_or(Error::InvalidSize {
        size: n,
        reason: "DST-III sizes are 2^k with k >= 1",
    })?;
    let n = n as i128;
    let l = l as i128;
    let four_c = 5 * n * l - 7 * n + 8;
    debug_assert_eq!(four_c % 4, 0);
    Ok((four_c / 4) as u64)
}

/// F̂ butterflies of the radix-2 `DFT̂(n)`: `n/2·log₂n`.
pub fn closed_form_dft_butterflies(n: usize) -> Result<u64> {
    let l = exact_log2(n).filter(|_| n >= 2).ok_or(Error::InvalidSize {
        size: n,
        reason: "DFT sizes are 2^k with k >= 1",
    })?;
    Ok(n as u64 / 2 * l)
}

/// Non-trivial twiddle factors of the radix-2 `DFT̂(n)`: `n/2·log₂n − n + 1`.
pub fn closed_form_dft_twiddles(n: usize) -> Result<u64> {
    Ok(closed_form_dft_butterflies(n)? + 1 - n as u64)
}
