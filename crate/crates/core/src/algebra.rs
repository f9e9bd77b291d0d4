//! The 4x4 representation of Cl(4,C) in the chirality-adapted basis.
//!
//! Rows 1-2 of every state tensor carry the right-handed block `psi_R`,
//! rows 3-4 the left-handed block `psi_L`. In that basis
//!
//! * `gamma_j = [[0, s_j], [s_j, 0]]` for `j = 1, 2, 3`,
//! * `gamma_0 = i [[0, 1], [-1, 0]]`,
//! * `gamma_5 = diag(1, -1) = -gamma_0 gamma_1 gamma_2 gamma_3`,
//!
//! with the Pauli matrices `s_j`. The sign of `gamma_5` is fixed so that its
//! `+1` eigenspace is spanned by the first two basis vectors. Vectors of the Minkowski space map into
//! the algebra through `e_0 -> i gamma_0` and `e_j -> gamma_j`, so that
//! `e_i e_j + e_j e_i = 2 eta_ij`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{P, Q};
use crate::linalg::{c64, CMatrix, Mat4, C64, I};

/// Tolerance used to validate spin elements built from raw matrices.
pub const SPIN_TOLERANCE: f64 = 1e-9;

/// Pauli matrix `s_k`, with `s_0` the 2x2 identity.
///
/// # Panics
///
/// Panics if `k > 3`.
pub fn pauli(k: usize) -> CMatrix {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let entries = match k {
        0 => [one, z, z, one],
        1 => [z, one, one, z],
        2 => [z, -I, I, z],
        3 => [one, z, z, -one],
        _ => panic!("Pauli index {k} out of range"),
    };
    CMatrix::from_row_slice(2, 2, &entries)
}

/// Assembles `[[a, b], [c, d]]` from four 2x2 blocks.
pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| {
        let blk = match (i < 2, j < 2) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => c,
            (false, false) => d,
        };
        blk[(i % 2, j % 2)]
    })
}

/// The fixed gamma matrices and their derived projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaBasis {
    /// `gamma_k`, `k = 0..4`, each hermitian with square one.
    pub gamma: [CMatrix; 4],
    /// `gamma_5 = -gamma_0 gamma_1 gamma_2 gamma_3 = diag(1, 1, -1, -1)`.
    pub gamma5: CMatrix,
    /// Right-handed projector `(1 + gamma_5) / 2`.
    pub gamma_plus: CMatrix,
    /// Left-handed projector `(1 - gamma_5) / 2`.
    pub gamma_minus: CMatrix,
    /// Raised matrices: `gamma^0 = -i gamma_0`, `gamma^r = gamma_r`.
    pub gamma_up: [CMatrix; 4],
}

impl GammaBasis {
    /// Image `E_i` of the Minkowski basis vector `e_i` in the algebra.
    pub fn vector_image(&self, i: usize) -> CMatrix {
        if i == 0 {
            self.gamma[0].scale(I)
        } else {
            self.gamma[i].clone()
        }
    }

    /// Raised image `E^i = eta^ii E_i`, equal to `gamma^i`.
    pub fn vector_image_up(&self, i: usize) -> CMatrix {
        self.gamma_up[i].clone()
    }
}

/// Builds the chirality-adapted gamma matrices.
pub fn build_gamma_basis() -> GammaBasis {
    let zero = CMatrix::zeros(2, 2);
    let id = pauli(0);
    let mut gamma: [CMatrix; 4] = core::array::from_fn(|_| CMatrix::zeros(4, 4));
    gamma[0] = block2(&zero, &id, &-&id, &zero).scale(I);
    for (j, g) in gamma.iter_mut().enumerate().skip(1) {
        let s = pauli(j);
        *g = block2(&zero, &s, &s, &zero);
    }
    let gamma5 = (&(&(&gamma[0] * &gamma[1]) * &gamma[2]) * &gamma[3]).scale_re(-1.0);
    let id4 = CMatrix::identity(4);
    let gamma_plus = (&id4 + &gamma5).scale_re(0.5);
    let gamma_minus = (&id4 - &gamma5).scale_re(0.5);
    let gamma_up = core::array::from_fn(|r| if r == 0 { gamma[0].scale(-I) } else { gamma[r].clone() });
    GammaBasis {
        gamma,
        gamma5,
        gamma_plus,
        gamma_minus,
        gamma_up,
    }
}

/// Metric signature convention of the representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    /// `(-, +, +, +)`, the only convention implemented.
    MostlyPlus,
}

/// Generators `k_a` of the spin representation of o(3,1).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinGenerators {
    /// `k_a` for `a = 0..6`.
    pub kappa: [CMatrix; 6],
    /// Signature convention.
    pub signature: Signature,
}

/// Builds `k_1 = g3 g2 / 2`, `k_2 = g1 g3 / 2`, `k_3 = g2 g1 / 2` and
/// `k_{3+j} = -i g0 gj / 2 = diag(s_j, -s_j) / 2`.
///
/// Every generator equals `E^{p_a} E_{q_a} / 2` in terms of the vector images
/// (see [`GammaBasis::vector_image`]), so that `[k_a, E^i] = sum_j [k~_a]^j_i E^j`.
pub fn build_spin_generators(g: &GammaBasis) -> SpinGenerators {
    let kappa = core::array::from_fn(|a| {
        let (p, q) = (P[a], Q[a]);
        let prod = &g.gamma[p] * &g.gamma[q];
        if p == 0 {
            prod.scale(c64(0.0, -0.5))
        } else {
            prod.scale_re(0.5)
        }
    });
    SpinGenerators {
        kappa,
        signature: Signature::MostlyPlus,
    }
}

impl SpinGenerators {
    /// `sum_a x^a k_a` with real coefficients.
    pub fn combine(&self, x: &[f64; 6]) -> CMatrix {
        let mut out = CMatrix::zeros(4, 4);
        for (xa, k) in x.iter().zip(self.kappa.iter()) {
            out.axpy(c64(*xa, 0.0), k);
        }
        out
    }
}

/// An element of the spin group, represented on `F = C^4`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinElement {
    matrix: CMatrix,
    tau: Option<[f64; 6]>,
}

impl SpinElement {
    /// Validates a raw 4x4 matrix: it must preserve the form `s^* g0 s = g0`
    /// and commute with `gamma_5`.
    pub fn from_matrix(matrix: CMatrix, g: &GammaBasis) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch {
                context: "SpinElement::from_matrix",
                expected: 4,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        let form = (&(&matrix.adjoint() * &g.gamma[0]) * &matrix).max_abs_diff(&g.gamma[0]);
        let chiral = matrix.commutator(&g.gamma5).max_abs();
        let residual = form.max(chiral);
        if residual > SPIN_TOLERANCE {
            return Err(Error::NotSpinElement { residual });
        }
        Ok(Self { matrix, tau: None })
    }

    /// The identity element.
    pub fn identity() -> Self {
        Self {
            matrix: CMatrix::identity(4),
            tau: Some([0.0; 6]),
        }
    }

    /// Matrix of the element.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Generator coefficients when the element came from [`spin_exp`].
    pub fn tau(&self) -> Option<&[f64; 6]> {
        self.tau.as_ref()
    }

    /// The other preimage `-s` of the same Lorentz transformation.
    pub fn negated(&self) -> Self {
        Self {
            matrix: self.matrix.scale_re(-1.0),
            tau: None,
        }
    }

    /// Group product `self * other`.
    pub fn compose(&self, other: &SpinElement) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
            tau: None,
        }
    }

    /// Inverse, `s^-1 = g0 s^* g0`.
    pub fn inverse(&self, g: &GammaBasis) -> Self {
        Self {
            matrix: &(&g.gamma[0] * &self.matrix.adjoint()) * &g.gamma[0],
            tau: self.tau.map(|t| t.map(|x| -x)),
        }
    }
}

/// `exp(sum_a tau^a k_a)`.
pub fn spin_exp(tau: &[f64; 6], gens: &SpinGenerators) -> SpinElement {
    SpinElement {
        matrix: gens.combine(tau).exp(),
        tau: Some(*tau),
    }
}

/// Lorentz matrix `L` of a spin element, defined on the raised images by
/// `s E^i s^-1 = sum_j L[j][i] E^j`.
///
/// `L` acts on column vectors of components: the derivative of
/// `spin_to_so31(spin_exp(t x))` at `t = 0` is `sum_a x^a k~_a`.
pub fn spin_to_so31(s: &SpinElement, g: &GammaBasis) -> Result<Mat4> {
    let inv = s.inverse(g);
    let images: Vec<CMatrix> = (0..4).map(|j| g.vector_image_up(j)).collect();
    let mut l = [[0.0; 4]; 4];
    let mut residual: f64 = 0.0;
    for i in 0..4 {
        let x = &(&s.matrix * &images[i]) * &inv.matrix;
        let mut rebuilt = CMatrix::zeros(4, 4);
        for (j, e) in images.iter().enumerate() {
            let coeff = e.frobenius_dot(&x) / 4.0;
            l[j][i] = coeff.re;
            rebuilt.axpy(c64(coeff.re, 0.0), e);
        }
        residual = residual.max(rebuilt.max_abs_diff(&x));
    }
    if residual > SPIN_TOLERANCE {
        return Err(Error::ConjugationNotVectorial { residual });
    }
    Ok(l)
}

/// A state tensor `psi` in `F (x) W`, stored as a 4 x m complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct StateTensor {
    psi: CMatrix,
}

impl StateTensor {
    /// Wraps a 4 x m matrix.
    pub fn new(psi: CMatrix) -> Result<Self> {
        if psi.rows() != 4 || psi.cols() == 0 {
            return Err(Error::DimensionMismatch {
                context: "StateTensor::new",
                expected: 4,
                found: psi.rows(),
            });
        }
        Ok(Self { psi })
    }

    /// The zero state with `m` charge components.
    pub fn zeros(m: usize) -> Self {
        Self {
            psi: CMatrix::zeros(4, m.max(1)),
        }
    }

    /// Stacks a right-handed and a left-handed 2 x m block.
    pub fn from_chiral(psi_r: &CMatrix, psi_l: &CMatrix) -> Result<Self> {
        if psi_r.rows() != 2 || psi_l.rows() != 2 || psi_r.cols() != psi_l.cols() {
            return Err(Error::DimensionMismatch {
                context: "StateTensor::from_chiral",
                expected: psi_r.cols(),
                found: psi_l.cols(),
            });
        }
        let m = psi_r.cols();
        Self::new(CMatrix::from_fn(4, m, |i, j| {
            if i < 2 {
                psi_r[(i, j)]
            } else {
                psi_l[(i - 2, j)]
            }
        }))
    }

    /// Dimension of the charge space.
    pub fn m(&self) -> usize {
        self.psi.cols()
    }

    /// The underlying 4 x m matrix.
    pub fn psi(&self) -> &CMatrix {
        &self.psi
    }

    /// Right-handed block (rows 1-2).
    pub fn psi_r(&self) -> CMatrix {
        self.psi.row_block(0, 2)
    }

    /// Left-handed block (rows 3-4).
    pub fn psi_l(&self) -> CMatrix {
        self.psi.row_block(2, 2)
    }
}

/// `<psi1, psi2> = Tr(psi1^* g0 psi2)`.
///
/// Evaluated blockwise: `g0 psi = i [psi_L; -psi_R]`.
pub fn hermitian_product(psi1: &StateTensor, psi2: &StateTensor) -> Result<C64> {
    if psi1.m() != psi2.m() {
        return Err(Error::DimensionMismatch {
            context: "hermitian_product",
            expected: psi1.m(),
            found: psi2.m(),
        });
    }
    Ok(product_4xm(psi1.psi(), psi2.psi()))
}

/// Blockwise `Tr(a^* g0 b)` for 4 x m matrices of equal shape.
pub(crate) fn product_4xm(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut s = c64(0.0, 0.0);
    for j in 0..a.cols() {
        for i in 0..2 {
            s += a[(i, j)].conj() * b[(i + 2, j)] - a[(i + 2, j)].conj() * b[(i, j)];
        }
    }
    s * I
}

/// Splits `psi` into its right-handed and left-handed 2 x m blocks.
pub fn chirality_split(psi: &StateTensor) -> (CMatrix, CMatrix) {
    (psi.psi_r(), psi.psi_l())
}
