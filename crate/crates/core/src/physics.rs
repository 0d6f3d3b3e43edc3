//! Free fermions on an open chain, diagonalized by the DST-I network.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{apply_real_in_place, apply_real_inverse_in_place};
use crate::fock::circuit_operator;
use crate::planner::plan_dst1;
use crate::reference::{mode_bit, DenseMatrix};

/// Largest chain length accepted by [`spectrum_via_dst`].
pub const MAX_SPECTRUM_SITES: usize = 4095;

/// Largest chain length accepted by [`verify_many_body_diagonalization`].
pub const MAX_MANY_BODY_SITES: usize = 10;

/// Nearest-neighbour hopping `t` on `n` sites with open boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoppingHamiltonian {
    pub n: usize,
    pub t: f64,
}

impl HoppingHamiltonian {
    pub fn new(n: usize) -> Self {
        Self { n, t: 1.0 }
    }

    pub fn with_hopping(n: usize, t: f64) -> Self {
        Self { n, t }
    }

    /// Tridiagonal single-particle matrix.
    pub fn matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.n, |a, b| {
            if a.abs_diff(b) == 1 {
                Complex64::new(self.t, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `H·v` without forming the matrix.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|a| {
                let left = if a > 0 { v[a - 1] } else { 0.0 };
                let right = if a + 1 < n { v[a + 1] } else { 0.0 };
                self.t * (left + right)
            })
            .collect()
    }

    /// `2t·cos((b+1)π/(n+1))`, the energy of sine mode `b`.
    pub fn mode_energy(&self, b: usize) -> f64 {
        2.0 * self.t * ((b + 1) as f64 * PI / (self.n + 1) as f64).cos()
    }

    /// Many-body operator `Σ_a t (c†_a c_{a+1} + h.c.)` on 2ⁿ amplitudes.
    pub fn many_body_matrix(&self) -> Result<DenseMatrix> {
        let n = self.n;
        if n > crate::fock::MAX_OPERATOR_MODES {
            return Err(Error::SizeGuard {
                what: "many-body Hamiltonian",
                size: n,
                limit: crate::fock::MAX_OPERATOR_MODES,
            });
        }
        let dim = 1usize << n;
        let mut h = DenseMatrix::zeros(dim, dim);
        for k in 0..dim {
            for a in 0..n.saturating_sub(1) {
                for (to, from) in [(a, a + 1), (a + 1, a)] {
                    if let Some((l, sign)) = hop(n, k, to, from) {
                        h[(l, k)] += Complex64::new(sign * self.t, 0.0);
                    }
                }
            }
        }
        Ok(h)
    }
}

/// `c†_to c_from |k⟩ = sign·|l⟩`, or `None` if it vanishes.
fn hop(n: usize, k: usize, to: usize, from: usize) -> Option<(usize, f64)> {
    let (bt, bf) = (mode_bit(n, to), mode_bit(n, from));
    if k & bf == 0 || (to != from && k & bt != 0) {
        return None;
    }
    // c_from passes the occupied modes before `from`, c†_to those before `to`
    let before = |bit: usize, occ: usize| (occ & !((bit << 1) - 1)).count_ones();
    let removed = k & !bf;
    let parity = before(bf, k) + before(bt, removed);
    let sign = if parity % 2 == 1 { -1.0 } else { 1.0 };
    Some((removed | bt, sign))
}

fn dst1_level(n: usize) -> Result<u32> {
    if n == 0 || !(n + 1).is_power_of_two() {
        return Err(Error::InvalidSize {
            size: n,
            reason: "chain length must be 2^k - 1",
        });
    }
    Ok((n + 1).trailing_zeros())
}

/// Single-particle spectrum obtained from the DST-I network.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Diagonal of `VᵀHV` in transform column order (descending energy).
    pub eigenvalues: Vec<f64>,
    /// Largest off-diagonal modulus of `VᵀHV`.
    pub off_diagonal_residual: f64,
}

/// Conjugates `H` by the DST-I plan, column by column on the fast path.
pub fn spectrum_via_dst(h: &HoppingHamiltonian) -> Result<Spectrum> {
    let level = dst1_level(h.n)?;
    if h.n > MAX_SPECTRUM_SITES {
        return Err(Error::SizeGuard {
            what: "spectrum",
            size: h.n,
            limit: MAX_SPECTRUM_SITES,
        });
    }
    let plan = plan_dst1(level)?;
    let n = h.n;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for b in 0..n {
        let mut col = vec![0.0; n];
        col[b] = 1.0;
        apply_real_in_place(&plan, &mut col)?;
        let mut d = h.apply(&col);
        apply_real_inverse_in_place(&plan, &mut d)?;
        for (a, x) in d.iter().enumerate() {
            if a == b {
                eigenvalues.push(*x);
            } else {
                residual = residual.max(x.abs());
            }
        }
    }
    Ok(Spectrum {
        eigenvalues,
        off_diagonal_residual: residual,
    })
}

/// Outcome of conjugating the many-body hopping operator by the
/// second-quantized DST-I circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyReport {
    pub n: usize,
    /// Largest off-diagonal modulus of `Γ†ĤΓ`.
    pub off_diagonal_residual: f64,
    /// Largest deviation of the diagonal from `Σ_b k_b·ε_b`.
    pub diagonal_deviation: f64,
    /// Diagonal of `Γ†ĤΓ`, indexed by occupation index.
    pub diagonal: Vec<f64>,
    /// Smallest diagonal entry.
    pub ground_energy: f64,
}

impl ManyBodyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.off_diagonal_residual < tol && self.diagonal_deviation < tol
    }
}

pub fn verify_many_body_diagonalization(h: &HoppingHamiltonian) -> Result<ManyBodyReport> {
    let level = dst1_level(h.n)?;
    if h.n > MAX_MANY_BODY_SITES {
        return Err(Error::SizeGuard {
            what: "many-body diagonalization",
            size: h.n,
            limit: MAX_MANY_BODY_SITES,
        });
    }
    let n = h.n;
    let w = circuit_operator(&plan_dst1(level)?)?;
    let conj = &(&w.adjoint() * &h.many_body_matrix()?) * &w;
    let energies: Vec<f64> = (0..n).map(|b| h.mode_energy(b)).collect();
    let dim = 1usize << n;
    let mut residual = 0.0f64;
    let mut deviation = 0.0f64;
    let mut diagonal = Vec::with_capacity(dim);
    for l in 0..dim {
        for k in 0..dim {
            if l != k {
                residual = residual.max(conj[(l, k)].norm());
            }
        }
        let expected: f64 = (0..n)
            .filter(|&b| l & mode_bit(n, b) != 0)
            .map(|b| energies[b])
            .sum();
        let d = conj[(l, l)];
        deviation = deviation.max((d - Complex64::new(expected, 0.0)).norm());
        diagonal.push(d.re);
    }
    let ground_energy = diagonal.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ManyBodyReport {
        n,
        off_diagonal_residual: residual,
        diagonal_deviation: deviation,
        diagonal,
        ground_energy,
    })
}
