//! Dense reference implementations.
//!
//! Everything in here is deliberately simple: O(n²) transform matrices and an
//! O(4ⁿ) second quantization built from Slater determinants. The fast paths in
//! [`crate::planner`], [`crate::exec`] and [`crate::fock`] are all checked
//! against these.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest mode count accepted by [`second_quantize_dense`].
pub const MAX_DENSE_FOCK_MODES: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for a in 0..n {
            m[(a, a)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: format!("{} rows", self.cols),
                actual: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let src = other.row(k);
                for (dst, b) in out.row_mut(r).iter_mut().zip(src) {
                    *dst += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.cols),
                actual: format!("vector of length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Block-diagonal matrix `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out[(self.rows + r, self.cols + c)] = other[(r, c)];
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`; the left factor indexes the most
    /// significant block.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `self · self†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: Complex64 = self
                    .row(a)
                    .iter()
                    .zip(self.row(b))
                    .map(|(x, y)| x * y.conj())
                    .sum();
                let target = if a == b { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A fermionic occupation-number basis label.
///
/// Mode `a` is stored in bit `n - 1 - a`, so mode 0 is the most significant
/// bit and for two modes the basis reads |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationIndex {
    n: usize,
    index: usize,
}

impl OccupationIndex {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        if n >= usize::BITS as usize || index >> n != 0 {
            return Err(Error::InvalidSize {
                size: index,
                reason: "occupation index out of range for the mode count",
            });
        }
        Ok(Self { n, index })
    }

    pub fn from_modes(n: usize, modes: &[usize]) -> Result<Self> {
        let mut index = 0;
        for &a in modes {
            if a >= n {
                return Err(Error::ModeIndex { index: a, n });
            }
            index |= mode_bit(n, a);
        }
        Ok(Self { n, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        mode < self.n && self.index & mode_bit(self.n, mode) != 0
    }

    pub fn particle_count(&self) -> usize {
        self.index.count_ones() as usize
    }

    /// Occupied modes in ascending order.
    pub fn occupied_modes(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_occupied(a)).collect()
    }
}

/// Bit mask of `mode` in an `n`-mode occupation index.
#[inline]
pub fn mode_bit(n: usize, mode: usize) -> usize {
    1 << (n - 1 - mode)
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize {
            size: n,
            reason: "transform size must be at least 1",
        });
    }
    Ok(())
}

/// `DFT_n` with entries `exp(-2πi·a·b/n)`.
pub fn dft_matrix(n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    Ok(DenseMatrix::from_fn(n, n, |a, b| {
        // reduce the exponent first so large products keep full precision
        let e = (a * b) % n;
        Complex64::from_polar(1.0, -2.0 * PI * e as f64 / n as f64)
    }))
}

/// `DST-I_n` with entries `sin((a+1)(b+1)π/(n+1))`.
pub fn dst1_matrix(n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    let period = 2 * (n + 1);
    Ok(DenseMatrix::from_fn(n, n, |a, b| {
        let e = ((a + 1) * (b + 1)) % period;
        Complex64::new((e as f64 * PI / (n + 1) as f64).sin(), 0.0)
    }))
}

/// `DST-III_n` with entries `sin((a+½)(b+1)π/n)`.
pub fn dst3_matrix(n: usize) -> Result<DenseMatrix> {
    check_size(n)?;
    // (a+½)(b+1)π/n = (2a+1)(b+1)π/(2n), periodic in 4n
    let period = 4 * n;
    Ok(DenseMatrix::from_fn(n, n, |a, b| {
        let e = ((2 * a + 1) * (b + 1)) % period;
        Complex64::new((e as f64 * PI / (2 * n) as f64).sin(), 0.0)
    }))
}

/// `DFT_n / √n`.
pub fn orthonormal_dft(n: usize) -> Result<DenseMatrix> {
    Ok(dft_matrix(n)?.scale(1.0 / (n as f64).sqrt()))
}

/// `DST-I_n · √(2/(n+1))`: symmetric, orthogonal and involutive.
pub fn orthonormal_dst1(n: usize) -> Result<DenseMatrix> {
    Ok(dst1_matrix(n)?.scale((2.0 / (n + 1) as f64).sqrt()))
}

/// `DST-III_n · √(2/n) · diag(1, …, 1, 1/√2)`.
pub fn orthonormal_dst3(n: usize) -> Result<DenseMatrix> {
    let mut m = dst3_matrix(n)?.scale((2.0 / n as f64).sqrt());
    for a in 0..n {
        m[(a, n - 1)] *= std::f64::consts::FRAC_1_SQRT_2;
    }
    Ok(m)
}

/// Determinant of a square matrix.
///
/// Sizes up to 3 use the explicit expansion, larger ones LU factorization with
/// partial pivoting. The empty matrix has determinant 1.
pub fn determinant(m: &DenseMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let e = |r, c| m[(r, c)];
    Ok(match m.rows() {
        0 => ONE,
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        3 => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => lu_determinant(m.clone()),
    })
}

fn lu_determinant(mut a: DenseMatrix) -> Complex64 {
    let n = a.rows();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .expect("non-empty pivot range");
        let p = a[(pivot, col)];
        if p == ZERO {
            return ZERO;
        }
        if pivot != col {
            for c in 0..n {
                a.data.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let factor = a[(r, col)] / p;
            if factor == ZERO {
                continue;
            }
            for c in col + 1..n {
                let v = a[(col, c)];
                a[(r, c)] -= factor * v;
            }
        }
    }
    det
}

/// The many-body lift Γ_U of a single-particle matrix `u`, as a dense
/// 2ⁿ×2ⁿ matrix in the occupation basis.
///
/// Entry (l, k) vanishes unless both labels hold the same number of
/// particles; otherwise it is the Slater determinant of `u` restricted to the
/// occupied modes of `l` (rows) and `k` (columns), both in ascending order.
pub fn second_quantize_dense(u: &DenseMatrix) -> Result<DenseMatrix> {
    if !u.is_square() {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            actual: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let n = u.rows();
    if n > MAX_DENSE_FOCK_MODES {
        return Err(Error::SizeGuard {
            what: "dense second quantization",
            size: n,
            limit: MAX_DENSE_FOCK_MODES,
        });
    }
    let dim = 1usize << n;
    let occupied: Vec<Vec<usize>> = (0..dim)
        .map(|idx| OccupationIndex { n, index: idx }.occupied_modes())
        .collect();
    let mut out = DenseMatrix::zeros(dim, dim);
    for l in 0..dim {
        for k in 0..dim {
            if occupied[l].len() != occupied[k].len() {
                continue;
            }
            out[(l, k)] = determinant(&u.submatrix(&occupied[l], &occupied[k]))?;
        }
    }
    Ok(out)
}
