//! Small dense real and complex matrices.
//!
//! Everything in this crate lives in dimension four or in the charge space
//! `W` of a handful of components, so the kernels here favour clarity over
//! blocking or vectorisation.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

/// Real 4x4 matrix stored row-major as `m[row][col]`.
pub type Mat4 = [[f64; 4]; 4];

/// Minkowski metric of signature (-,+,+,+).
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Imaginary unit.
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Shorthand constructor for a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

/// Returns the 4x4 identity.
pub fn mat4_identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Returns `diag(-1, 1, 1, 1)`.
pub fn mat4_eta() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ETA[i];
    }
    m
}

/// Matrix product `a * b`.
pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Matrix sum `a + b`.
pub fn mat4_add(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// Matrix difference `a - b`.
pub fn mat4_sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

/// Scalar multiple `s * a`.
pub fn mat4_scale(a: &Mat4, s: f64) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    out
}

/// Transpose.
pub fn mat4_transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[j][i] = a[i][j];
        }
    }
    out
}

/// Trace.
pub fn mat4_trace(a: &Mat4) -> f64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

/// Largest absolute entry.
pub fn mat4_max_abs(a: &Mat4) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest absolute entry of `a - b`.
pub fn mat4_max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    mat4_max_abs(&mat4_sub(a, b))
}

/// Determinant by partial-pivot elimination.
pub fn mat4_det(a: &Mat4) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            for k in col..4 {
                m[r][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination, `None` when a pivot vanishes.
pub fn mat4_inverse(a: &Mat4) -> Option<Mat4> {
    let mut m = *a;
    let mut inv = mat4_identity();
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(piv, col);
        inv.swap(piv, col);
        let d = m[col][col];
        for k in 0..4 {
            m[col][k] /= d;
            inv[col][k] /= d;
        }
        for r in 0..4 {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for k in 0..4 {
                        m[r][k] -= f * m[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Solves the dense square system `a x = b` in place (`a` is `n*n`
/// row-major, `b` holds the right-hand side and receives `x`).
///
/// Returns `None` if the matrix is numerically singular.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for k in col..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Some(())
}

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity of order `n`.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    ///
    /// # Panics
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[C64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row slice has the wrong length");
        Self {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    /// Promotes a real 4x4 matrix.
    pub fn from_mat4(m: &Mat4) -> Self {
        Self::from_fn(4, 4, |i, j| c64(m[i][j], 0.0))
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Multiplies every entry by `s`.
    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Multiplies every entry by the real `s`.
    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    /// `self += s * other`.
    ///
    /// # Panics
    ///
    /// Panics on a shape mismatch.
    pub fn axpy(&mut self, s: C64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "axpy shape mismatch");
        for (x, y) in self.data.iter_mut().zip(other.data.iter()) {
            *x += s * y;
        }
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    /// Largest of `|re|` and `|im|` over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.re.abs()).max(z.im.abs()))
    }

    /// Largest of `|re|` and `|im|` of the entrywise difference.
    ///
    /// # Panics
    ///
    /// Panics on a shape mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        (self - other).max_abs()
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Hermitian Frobenius product `Tr(self^* other)`.
    pub fn frobenius_dot(&self, other: &CMatrix) -> C64 {
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Copies the rows `start..start + n` into a new matrix.
    pub fn row_block(&self, start: usize, n: usize) -> CMatrix {
        CMatrix::from_fn(n, self.cols, |i, j| self[(start + i, j)])
    }

    /// Matrix exponential by scaling and squaring of a truncated Taylor
    /// series, converged to a relative tolerance of `1e-13` on the scaled
    /// argument.
    ///
    /// # Panics
    ///
    /// Panics if the matrix is not square.
    pub fn exp(&self) -> CMatrix {
        assert_eq!(self.rows, self.cols, "exponential of a non-square matrix");
        let n = self.rows;
        let norm = self.norm_fro();
        let mut squarings = 0u32;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let a = self.scale_re(scale);
        let mut sum = CMatrix::identity(n);
        let mut term = CMatrix::identity(n);
        for k in 1..64 {
            term = (&term * &a).scale_re(1.0 / k as f64);
            sum = &sum + &term;
            if term.norm_fro() <= 1e-13 * sum.norm_fro() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(rhs.data.iter()).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(rhs.data.iter()).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}
