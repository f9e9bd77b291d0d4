//! The standard representation of o(3,1) and configurable internal groups.
//!
//! The six generators of o(3,1) are indexed `a = 0..6` in code, standing for
//! the labels `1..=6` of the index table below. Each generator is attached
//! to an ordered pair of spacetime indices `(p_a, q_a)`:
//!
//! | label | 1 | 2 | 3 | 4 | 5 | 6 |
//! |-------|---|---|---|---|---|---|
//! | `p_a` | 3 | 1 | 2 | 0 | 0 | 0 |
//! | `q_a` | 2 | 3 | 1 | 1 | 2 | 3 |
//!
//! Labels 1 to 3 are spatial rotations and labels 4 to 6 are boosts.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c64, solve_dense, CMatrix, Mat4, C64, ETA};

/// First index `p_a` of each generator.
pub const P: [usize; 6] = [3, 1, 2, 0, 0, 0];
/// Second index `q_a` of each generator.
pub const Q: [usize; 6] = [2, 3, 1, 1, 2, 3];

/// Bracket-closure tolerance applied to user supplied internal groups.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Returns the generator index whose pair is `{p, q}` together with the
/// orientation sign, or `None` when `p == q`.
pub fn pair_index(p: usize, q: usize) -> Option<(usize, f64)> {
    (0..6).find_map(|a| {
        if P[a] == p && Q[a] == q {
            Some((a, 1.0))
        } else if P[a] == q && Q[a] == p {
            Some((a, -1.0))
        } else {
            None
        }
    })
}

/// Real generator `[k~_a]^i_j = d^{i p_a} d_{j q_a} - d^{i q_a} eta_{j p_a}`.
pub fn kappa_tilde(a: usize) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    m[P[a]][Q[a]] += 1.0;
    m[Q[a]][P[a]] -= ETA[P[a]];
    m
}

/// Structure constants `C_ab^c` of a matrix basis, with the residual of the
/// decomposition that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    n: usize,
    data: Vec<f64>,
    residual: f64,
}

impl StructureConstants {
    /// Wraps an explicit `n x n x n` table laid out as `data[(a * n + b) * n + c]`.
    ///
    /// # Panics
    ///
    /// Panics if `data.len() != n^3`.
    pub fn from_table(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n * n, "structure constant table has the wrong length");
        Self { n, data, residual: 0.0 }
    }

    /// Number of basis elements.
    pub fn len(&self) -> usize {
        self.n
    }

    /// `true` for the empty basis.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `C_ab^c`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    /// Largest entrywise residual of the bracket decomposition.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Flat table in `(a, b, c)` order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Decomposes every commutator of `basis` on the real span of `basis`.
///
/// The real Gram system `Re Tr(B_a^* B_b)` is solved directly; for an
/// orthogonal basis this is the exact projection, otherwise it is the least
/// squares fit. Fails with [`Error::NotClosed`] when a commutator leaves the
/// span by more than `1e-8`, or when the basis is linearly dependent.
pub fn structure_constants_from_brackets(basis: &[CMatrix]) -> Result<StructureConstants> {
    let n = basis.len();
    if let Some(first) = basis.first() {
        for b in basis {
            if b.rows() != first.rows() || b.cols() != first.cols() {
                return Err(Error::DimensionMismatch {
                    context: "structure_constants_from_brackets",
                    expected: first.rows() * first.cols(),
                    found: b.rows() * b.cols(),
                });
            }
        }
    }
    let mut gram = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            gram[a * n + b] = basis[a].frobenius_dot(&basis[b]).re;
        }
    }
    let mut data = vec![0.0; n * n * n];
    let mut residual: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let bracket = basis[a].commutator(&basis[b]);
            let mut rhs: Vec<f64> = basis.iter().map(|e| e.frobenius_dot(&bracket).re).collect();
            let mut g = gram.clone();
            if solve_dense(&mut g, &mut rhs, n).is_none() {
                return Err(Error::NotClosed {
                    residual: f64::INFINITY,
                });
            }
            let mut rebuilt = CMatrix::zeros(bracket.rows(), bracket.cols());
            for (c, coeff) in rhs.iter().enumerate() {
                rebuilt.axpy(c64(*coeff, 0.0), &basis[c]);
                data[(a * n + b) * n + c] = *coeff;
            }
            residual = residual.max(rebuilt.max_abs_diff(&bracket));
        }
    }
    if residual > 1e-8 {
        return Err(Error::NotClosed { residual });
    }
    Ok(StructureConstants { n, data, residual })
}

/// The o(3,1) basis with its index table and structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct So31Basis {
    /// Generators `k~_a`, `a = 0..6`.
    pub kappa_tilde: [Mat4; 6],
    /// Index pairs `(p_a, q_a)`.
    pub pq: [(usize, usize); 6],
    /// Structure constants `g[a][b][c] = G_ab^c`.
    pub g: [[[f64; 6]; 6]; 6],
    /// Diagonal of the Minkowski metric.
    pub eta: [f64; 4],
}

/// Builds the o(3,1) basis and extracts its structure constants from the
/// commutators of the explicit matrices.
///
/// The extracted constants are integers; they are rounded after the
/// decomposition so that identities between them hold exactly.
pub fn build_so31() -> So31Basis {
    let kappa_tilde: [Mat4; 6] = core::array::from_fn(kappa_tilde);
    let complex: Vec<CMatrix> = kappa_tilde.iter().map(CMatrix::from_mat4).collect();
    let sc = structure_constants_from_brackets(&complex).expect("o(3,1) generators close under commutation");
    let mut g = [[[0.0; 6]; 6]; 6];
    for (a, ga) in g.iter_mut().enumerate() {
        for (b, gab) in ga.iter_mut().enumerate() {
            for (c, x) in gab.iter_mut().enumerate() {
                *x = libm::round(sc.get(a, b, c));
            }
        }
    }
    So31Basis {
        kappa_tilde,
        pq: core::array::from_fn(|a| (P[a], Q[a])),
        g,
        eta: ETA,
    }
}

impl So31Basis {
    /// `sum_a x^a k~_a`.
    pub fn combine(&self, x: &[f64; 6]) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        for (a, xa) in x.iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += xa * self.kappa_tilde[a][i][j];
                }
            }
        }
        m
    }

    /// Coordinates of an element of o(3,1): `x^a = X[p_a][q_a]`.
    ///
    /// The result is meaningful only when `X^t eta + eta X = 0`.
    pub fn coordinates(&self, x: &Mat4) -> [f64; 6] {
        core::array::from_fn(|a| x[P[a]][Q[a]])
    }

    /// Row vector times generator: `(v k~_a)_r = sum_k v_k [k~_a]^k_r`.
    pub fn row_times(&self, v: &[f64; 4], a: usize) -> [f64; 4] {
        core::array::from_fn(|r| (0..4).map(|k| v[k] * self.kappa_tilde[a][k][r]).sum())
    }
}

/// A compact internal group given by antihermitian generators acting on `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct InternalGroup {
    m: usize,
    theta: Vec<CMatrix>,
    constants: StructureConstants,
}

impl InternalGroup {
    /// Validates the generators and computes their structure constants.
    pub fn new(theta: Vec<CMatrix>) -> Result<Self> {
        let m = Self::validate(&theta)?;
        let constants = structure_constants_from_brackets(&theta)?;
        if constants.residual() > CLOSURE_TOLERANCE {
            return Err(Error::NotClosed {
                residual: constants.residual(),
            });
        }
        Ok(Self { m, theta, constants })
    }

    /// Validates generators against explicitly supplied structure constants
    /// laid out as `c[(a * n + b) * n + c]`.
    pub fn with_constants(theta: Vec<CMatrix>, constants: Vec<f64>) -> Result<Self> {
        let m = Self::validate(&theta)?;
        let n = theta.len();
        if constants.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                context: "InternalGroup::with_constants",
                expected: n * n * n,
                found: constants.len(),
            });
        }
        let table = StructureConstants::from_table(n, constants);
        let mut residual: f64 = 0.0;
        for b in 0..n {
            for c in 0..n {
                let mut rebuilt = CMatrix::zeros(m, m);
                for a in 0..n {
                    rebuilt.axpy(c64(table.get(b, c, a), 0.0), &theta[a]);
                }
                residual = residual.max(rebuilt.max_abs_diff(&theta[b].commutator(&theta[c])));
            }
        }
        if residual > CLOSURE_TOLERANCE {
            return Err(Error::NotClosed { residual });
        }
        let constants = StructureConstants { residual, ..table };
        Ok(Self { m, theta, constants })
    }

    fn validate(theta: &[CMatrix]) -> Result<usize> {
        let m = theta.first().map_or(0, CMatrix::rows);
        if m == 0 {
            return Err(Error::DimensionMismatch {
                context: "InternalGroup generators",
                expected: 1,
                found: 0,
            });
        }
        for (index, t) in theta.iter().enumerate() {
            if t.rows() != m || t.cols() != m {
                return Err(Error::DimensionMismatch {
                    context: "InternalGroup generator shape",
                    expected: m,
                    found: t.rows().max(t.cols()),
                });
            }
            let residual = (t + &t.adjoint()).max_abs();
            if residual > CLOSURE_TOLERANCE {
                return Err(Error::NonAntihermitianGenerator { index, residual });
            }
        }
        Ok(m)
    }

    /// Dimension of `W`.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Number of generators.
    pub fn generator_count(&self) -> usize {
        self.theta.len()
    }

    /// Generator `theta_a`.
    pub fn theta(&self, a: usize) -> &CMatrix {
        &self.theta[a]
    }

    /// All generators.
    pub fn generators(&self) -> &[CMatrix] {
        &self.theta
    }

    /// Structure constants `C_ab^c`.
    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// `true` for the one-dimensional abelian group generated by `i`.
    pub fn is_u1(&self) -> bool {
        self.m == 1 && self.theta.len() == 1 && (self.theta[0][(0, 0)] - c64(0.0, 1.0)).norm() <= CLOSURE_TOLERANCE
    }

    /// `sum_a x^a theta_a` with complex coefficients.
    pub fn combine(&self, x: &[C64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.m, self.m);
        for (xa, t) in x.iter().zip(self.theta.iter()) {
            out.axpy(*xa, t);
        }
        out
    }

    /// Lie bracket of coefficient vectors, `[x, y]^a = sum_bc C_bc^a x^b y^c`.
    pub fn bracket(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.theta.len();
        (0..n)
            .map(|a| {
                let mut s = c64(0.0, 0.0);
                for b in 0..n {
                    for c in 0..n {
                        let k = self.constants.get(b, c, a);
                        if k != 0.0 {
                            s += x[b] * y[c] * k;
                        }
                    }
                }
                s
            })
            .collect()
    }
}

/// The electromagnetic group: `W = C`, one generator `theta = i`.
pub fn u1_group() -> InternalGroup {
    InternalGroup::new(vec![CMatrix::from_row_slice(1, 1, &[c64(0.0, 1.0)])]).expect("u(1) generator is antihermitian")
}

/// su(2) acting on `W = C^2` with generators `-(i/2) sigma_k`, whose
/// structure constants are `e_abc`.
pub fn su2_group() -> InternalGroup {
    let theta = (1..4).map(|k| crate::algebra::pauli(k).scale(c64(0.0, -0.5))).collect();
    InternalGroup::new(theta).expect("su(2) generators close")
}
