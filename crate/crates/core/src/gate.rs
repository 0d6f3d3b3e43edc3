//! Elementary operations that plans are made of.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Mat2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    /// F̂ = (1/√2)[[1, 1], [1, −1]].
    pub fn fhat() -> Self {
        let s = FRAC_1_SQRT_2;
        Self::from_real([[s, s], [s, -s]])
    }

    /// Ĝ = F̂·J₂ = (1/√2)[[1, 1], [−1, 1]].
    pub fn ghat() -> Self {
        let s = FRAC_1_SQRT_2;
        Self::from_real([[s, s], [-s, s]])
    }

    /// Rotation by θ = ℓπ/(4m).
    pub fn rotation(ell: i32, m: u32) -> Self {
        let theta = ell as f64 * PI / (4.0 * m as f64);
        let (s, c) = theta.sin_cos();
        Self::from_real([[c, -s], [s, c]])
    }

    /// The single-particle swap S = [[0, 1], [1, 0]].
    pub fn swap() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let e = |r: usize, c: usize| a[r][0] * b[0][c] + a[r][1] * b[1][c];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().flatten().all(|z| z.im == 0.0)
    }

    /// Largest entrywise deviation of `self · self†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.mul(&self.adjoint());
        let id = Self::identity();
        p.0.iter()
            .flatten()
            .zip(id.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Label of a two-mode gate. The matrix is always stored alongside; the
/// label is metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Fhat,
    Ghat,
    /// Rotation by ℓπ/(4m).
    Rot { ell: i32, m: u32 },
    Custom,
}

impl GateKind {
    /// Canonical matrix for labelled kinds; `None` for `Custom`.
    pub fn canonical_matrix(&self) -> Option<Mat2> {
        match *self {
            GateKind::Fhat => Some(Mat2::fhat()),
            GateKind::Ghat => Some(Mat2::ghat()),
            GateKind::Rot { ell, m } => Some(Mat2::rotation(ell, m)),
            GateKind::Custom => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Fhat => f.write_str("fhat"),
            GateKind::Ghat => f.write_str("ghat"),
            GateKind::Rot { ell, m } => write!(f, "rot({ell},{m})"),
            GateKind::Custom => f.write_str("custom"),
        }
    }
}

impl std::str::FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fhat" => Ok(GateKind::Fhat),
            "ghat" => Ok(GateKind::Ghat),
            "custom" => Ok(GateKind::Custom),
            _ => {
                let inner = s
                    .strip_prefix("rot(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown gate name {s:?}"))?;
                let (ell, m) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("malformed rotation name {s:?}"))?;
                let ell = ell.trim().parse().map_err(|_| format!("bad rotation index in {s:?}"))?;
                let m: u32 = m.trim().parse().map_err(|_| format!("bad rotation scale in {s:?}"))?;
                if m == 0 {
                    return Err(format!("rotation scale must be positive in {s:?}"));
                }
                Ok(GateKind::Rot { ell, m })
            }
        }
    }
}

/// Labelled 2×2 matrix shared between gates of the same kind.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOp {
    pub kind: GateKind,
    pub matrix: Mat2,
}

/// A bijection on `[0, n)` stored as its image array: mode `a` is sent to
/// `map[a]`, i.e. the permutation matrix has a 1 at `(map[a], a)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Arc<[usize]>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &b in &map {
            if b >= n {
                return Err(Error::InvalidPerm(format!("image {b} out of range for size {n}")));
            }
            if std::mem::replace(&mut seen[b], true) {
                return Err(Error::InvalidPerm(format!("image {b} appears twice")));
            }
        }
        Ok(Self { map: map.into() })
    }

    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(Self::new(map.clone()).is_ok());
        Self { map: map.into() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_map_unchecked((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn image(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(a, &b)| a == b)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Self::from_map_unchecked(inv)
    }

    /// `self` applied first, then `after`.
    pub fn then(&self, after: &Self) -> Self {
        assert_eq!(self.len(), after.len(), "permutation sizes differ");
        Self::from_map_unchecked(self.map.iter().map(|&b| after.map[b]).collect())
    }

    /// Extends to `[0, total)` acting on the window `[offset, offset + len)`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        assert!(offset + self.len() <= total);
        let mut map: Vec<usize> = (0..total).collect();
        for (a, &b) in self.map.iter().enumerate() {
            map[offset + a] = offset + b;
        }
        Self::from_map_unchecked(map)
    }

    /// Direct sum: `self` on the low block, `other` on the high block.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let k = self.len();
        let map = self.map.iter().copied().chain(other.map.iter().map(|&b| b + k)).collect();
        Self::from_map_unchecked(map)
    }

    /// Number of inversions, i.e. the minimal number of adjacent
    /// transpositions realizing the permutation.
    pub fn inversion_count(&self) -> u64 {
        // Fenwick tree over images seen so far
        let n = self.len();
        let mut tree = vec![0u32; n + 1];
        let mut inversions = 0u64;
        for (seen, &b) in self.map.iter().enumerate() {
            let mut i = b + 1;
            let mut not_greater = 0u64;
            while i > 0 {
                not_greater += tree[i] as u64;
                i &= i - 1;
            }
            inversions += seen as u64 - not_greater;
            let mut i = b + 1;
            while i <= n {
                tree[i] += 1;
                i += i & i.wrapping_neg();
            }
        }
        inversions
    }

    /// Permutes `src` into `dst`: `dst[map[a]] = src[a]`.
    pub fn scatter<T: Copy>(&self, src: &[T], dst: &mut [T]) {
        for (&b, &x) in self.map.iter().zip(src) {
            dst[b] = x;
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", &self.map[..])
    }
}

/// One step of a plan.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// A 2×2 unitary on modes `i < j`: the new `(x_i, x_j)` is
    /// `matrix · (x_i, x_j)`.
    TwoMode { i: usize, j: usize, op: Arc<TwoModeOp> },
    /// Multiplies mode `i` by `value`.
    Scalar { i: usize, value: Complex64 },
    Perm(Permutation),
}

impl Gate {
    /// Two-mode gate with a canonical kind (not `Custom`).
    pub fn two_mode(i: usize, j: usize, kind: GateKind) -> Result<Self> {
        let matrix = kind.canonical_matrix().ok_or(Error::InvalidPair { i, j })?;
        Self::two_mode_with(i, j, kind, matrix)
    }

    /// Two-mode gate with an explicit matrix.
    pub fn two_mode_with(i: usize, j: usize, kind: GateKind, matrix: Mat2) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidPair { i, j });
        }
        Ok(Gate::TwoMode {
            i,
            j,
            op: Arc::new(TwoModeOp { kind, matrix }),
        })
    }

    /// Largest mode index touched plus one (the permutation size for `Perm`).
    pub fn span(&self) -> usize {
        match self {
            Gate::TwoMode { j, .. } => j + 1,
            Gate::Scalar { i, .. } => i + 1,
            Gate::Perm(p) => p.len(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Gate::TwoMode { op, .. } => op.matrix.is_real(),
            Gate::Scalar { value, .. } => value.im == 0.0,
            Gate::Perm(_) => true,
        }
    }

    /// The inverse operation.
    pub fn inverse(&self) -> Self {
        match self {
            Gate::TwoMode { i, j, op } => Gate::TwoMode {
                i: *i,
                j: *j,
                op: Arc::new(TwoModeOp {
                    kind: GateKind::Custom,
                    matrix: op.matrix.adjoint(),
                }),
            },
            Gate::Scalar { i, value } => Gate::Scalar {
                i: *i,
                value: value.inv(),
            },
            Gate::Perm(p) => Gate::Perm(p.inverse()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_matrices_are_unitary() {
        assert!(Mat2::fhat().unitarity_defect() < 1e-15);
        assert!(Mat2::ghat().unitarity_defect() < 1e-15);
        for ell in -16..=16 {
            assert!(Mat2::rotation(ell, 8).unitarity_defect() < 1e-15);
        }
        // Ĝ = F̂·J₂
        let g = Mat2::fhat().mul(&Mat2::swap());
        assert_eq!(g, Mat2::ghat());
    }

    #[test]
    fn rotation_angle() {
        for m in [2u32, 4, 8, 1024] {
            let r = Mat2::rotation(-(m as i32), 2 * m);
            let want = (-PI / 8.0).sin();
            assert!((r.get(1, 0).re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in [
            GateKind::Fhat,
            GateKind::Ghat,
            GateKind::Custom,
            GateKind::Rot { ell: -4, m: 8 },
            GateKind::Rot { ell: 3, m: 16 },
        ] {
            assert_eq!(kind.to_string().parse::<GateKind>().unwrap(), kind);
        }
        assert!("rot(1,0)".parse::<GateKind>().is_err());
        assert!("hadamard".parse::<GateKind>().is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(matches!(Permutation::new(vec![0, 0]), Err(Error::InvalidPerm(_))));
        assert!(matches!(Permutation::new(vec![0, 2]), Err(Error::InvalidPerm(_))));
    }

    #[test]
    fn inversion_count_matches_pair_count() {
        let maps = [vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![2, 0, 3, 1], vec![1, 0]];
        for m in maps {
            let brute = (0..m.len())
                .flat_map(|a| (a + 1..m.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| m[a] > m[b])
                .count() as u64;
            assert_eq!(Permutation::new(m).unwrap().inversion_count(), brute);
        }
    }

    #[test]
    fn compose_and_invert() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        let q = Permutation::new(vec![1, 0]).unwrap().embed(1, 4);
        assert_eq!(q.map(), &[0, 2, 1, 3]);
        assert_eq!(p.direct_sum(&Permutation::identity(1)).map(), &[2, 0, 1, 3]);
    }

    #[test]
    fn two_mode_requires_ordered_pair() {
        assert!(Gate::two_mode(2, 1, GateKind::Fhat).is_err());
        assert!(Gate::two_mode(1, 1, GateKind::Fhat).is_err());
        assert!(Gate::two_mode(0, 1, GateKind::Fhat).is_ok());
    }
}
