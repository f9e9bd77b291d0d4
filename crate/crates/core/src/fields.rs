//! Gauge potentials, curvature forms and the objects derived from them.
//!
//! The gravitational potential `G_alpha^a` is a real 4x6 table acting on
//! vectors through `k~_a` (see [`crate::lie`]) and on spinors through `k_a`
//! (see [`crate::algebra`]). The internal potential `A_alpha^a` is complex
//! and acts on the charge space through the generators `theta_a`.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{GammaBasis, SpinGenerators, StateTensor};
use crate::error::{Error, Result};
use crate::geometry::{metric_from_tetrad, StructureCoefficients, Tetrad, TetradJet, TwoForm};
use crate::lie::{InternalGroup, So31Basis, P, Q};
use crate::linalg::{c64, mat4_add, mat4_mul, mat4_sub, CMatrix, Mat4, C64, ETA};

/// Gauge potentials at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePotentials {
    /// `g[alpha][a] = G_alpha^a`.
    pub g: [[f64; 6]; 4],
    /// `a[alpha][a] = A_alpha^a`, one entry per internal generator.
    pub a: [Vec<C64>; 4],
}

impl GaugePotentials {
    /// Vanishing potentials for an internal group with `n` generators.
    pub fn zero(n: usize) -> Self {
        Self {
            g: [[0.0; 6]; 4],
            a: core::array::from_fn(|_| vec![c64(0.0, 0.0); n]),
        }
    }

    /// Number of internal generators.
    pub fn internal_len(&self) -> usize {
        self.a[0].len()
    }

    fn check_internal(&self, grp: &InternalGroup, context: &'static str) -> Result<()> {
        for row in &self.a {
            if row.len() != grp.generator_count() {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: grp.generator_count(),
                    found: row.len(),
                });
            }
        }
        Ok(())
    }
}

/// Potentials with their first partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialJet {
    /// Values at the point.
    pub potentials: GaugePotentials,
    /// `dg[beta][alpha][a] = d_beta G_alpha^a`.
    pub dg: [[[f64; 6]; 4]; 4],
    /// `da[beta][alpha][a] = d_beta A_alpha^a`.
    pub da: [[Vec<C64>; 4]; 4],
}

impl PotentialJet {
    /// A jet with vanishing derivatives.
    pub fn constant(potentials: GaugePotentials) -> Self {
        let n = potentials.internal_len();
        Self {
            potentials,
            dg: [[[0.0; 6]; 4]; 4],
            da: core::array::from_fn(|_| core::array::from_fn(|_| vec![c64(0.0, 0.0); n])),
        }
    }
}

/// Curvature two-forms of both potentials.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureForms {
    /// `fg[a]` is the two-form `F_G^a`.
    pub fg: [TwoForm<f64>; 6],
    /// `fa[a]` is the two-form `F_A^a`.
    pub fa: Vec<TwoForm<C64>>,
}

/// A state tensor with its first partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct StateJet {
    /// Value at the point.
    pub psi: StateTensor,
    /// `dpsi[alpha] = d_alpha psi`, each 4 x m.
    pub dpsi: [CMatrix; 4],
}

impl StateJet {
    /// A jet with vanishing derivatives.
    pub fn constant(psi: StateTensor) -> Self {
        let m = psi.m();
        Self {
            psi,
            dpsi: core::array::from_fn(|_| CMatrix::zeros(4, m)),
        }
    }
}

/// `F_G ab^a = d_a G_b^a - d_b G_a^a + sum_bc G_bc^a G_a^b G_b^c` on every
/// pair of the canonical storage.
pub fn curvature_g(j: &PotentialJet, so31: &So31Basis) -> [TwoForm<f64>; 6] {
    let g = &j.potentials.g;
    core::array::from_fn(|a| {
        TwoForm::from_fn(|al, be| {
            let mut s = j.dg[al][be][a] - j.dg[be][al][a];
            for b in 0..6 {
                for c in 0..6 {
                    let k = so31.g[b][c][a];
                    if k != 0.0 {
                        s += k * g[al][b] * g[be][c];
                    }
                }
            }
            s
        })
    })
}

/// `F_A ab^a = d_a A_b^a - d_b A_a^a + sum_bc C_bc^a A_a^b A_b^c`.
pub fn curvature_a(j: &PotentialJet, grp: &InternalGroup) -> Result<Vec<TwoForm<C64>>> {
    j.potentials.check_internal(grp, "curvature_a")?;
    for row in j.da.iter().flatten() {
        if row.len() != grp.generator_count() {
            return Err(Error::DimensionMismatch {
                context: "curvature_a derivatives",
                expected: grp.generator_count(),
                found: row.len(),
            });
        }
    }
    let pot = &j.potentials.a;
    let n = grp.generator_count();
    Ok((0..n)
        .map(|a| {
            TwoForm::from_fn(|al, be| {
                let mut s = j.da[al][be][a] - j.da[be][al][a];
                let br = grp.bracket(&pot[al], &pot[be]);
                s += br[a];
                s
            })
        })
        .collect())
}

/// Both curvature forms.
pub fn curvature_forms(j: &PotentialJet, so31: &So31Basis, grp: &InternalGroup) -> Result<CurvatureForms> {
    Ok(CurvatureForms {
        fg: curvature_g(j, so31),
        fa: curvature_a(j, grp)?,
    })
}

/// Real matrices `G~_alpha = sum_a G_alpha^a k~_a`.
pub fn g_tilde(g: &[[f64; 6]; 4], so31: &So31Basis) -> [Mat4; 4] {
    core::array::from_fn(|al| so31.combine(&g[al]))
}

/// Tetrad components `G_r^a = sum_alpha O_r^alpha G_alpha^a`.
pub fn to_tetrad_indices(t: &Tetrad, g: &[[f64; 6]; 4]) -> [[f64; 6]; 4] {
    let o = t.o();
    core::array::from_fn(|r| core::array::from_fn(|a| (0..4).map(|al| o[al][r] * g[al][a]).sum()))
}

/// Chart components `G_alpha^a = sum_r O'_alpha^r G_r^a`.
pub fn to_chart_indices(t: &Tetrad, g: &[[f64; 6]; 4]) -> [[f64; 6]; 4] {
    let op = t.oprime();
    core::array::from_fn(|al| core::array::from_fn(|a| (0..4).map(|r| op[r][al] * g[r][a]).sum()))
}

/// Affine connection `[Gamma_alpha] = (O G~_alpha - d_alpha O) O'`, with
/// `gamma[alpha][c][b] = Gamma_{alpha b}^c`.
pub fn affine_connection(tj: &TetradJet, pot: &GaugePotentials, so31: &So31Basis) -> [Mat4; 4] {
    let t = &tj.tetrad;
    let gt = g_tilde(&pot.g, so31);
    core::array::from_fn(|al| {
        let inner = mat4_sub(&mat4_mul(t.o(), &gt[al]), &tj.d_o[al]);
        mat4_mul(&inner, t.oprime())
    })
}

/// Inverse of [`affine_connection`]: `G~_alpha = O' (Gamma_alpha O + d_alpha O)`.
pub fn connection_from_affine(tj: &TetradJet, gamma: &[Mat4; 4]) -> [Mat4; 4] {
    let t = &tj.tetrad;
    core::array::from_fn(|al| mat4_mul(t.oprime(), &mat4_add(&mat4_mul(&gamma[al], t.o()), &tj.d_o[al])))
}

/// `d_alpha g = (d O')^t eta O' + O'^t eta d O'`.
pub fn metric_derivative(tj: &TetradJet) -> [Mat4; 4] {
    let op = tj.tetrad.oprime();
    core::array::from_fn(|al| {
        let d = &tj.d_oprime[al];
        let mut m = [[0.0; 4]; 4];
        for x in 0..4 {
            for y in 0..4 {
                for k in 0..4 {
                    m[x][y] += ETA[k] * (d[k][x] * op[k][y] + op[k][x] * d[k][y]);
                }
            }
        }
        m
    })
}

/// Residual of `(g Gamma_alpha)^t + g Gamma_alpha = d_alpha g`.
pub fn metricity_residual(tj: &TetradJet, gamma: &[Mat4; 4]) -> Result<[Mat4; 4]> {
    let (g, _) = metric_from_tetrad(&tj.tetrad)?;
    let dg = metric_derivative(tj);
    Ok(core::array::from_fn(|al| {
        let gg = mat4_mul(&g, &gamma[al]);
        core::array::from_fn(|x| core::array::from_fn(|y| gg[y][x] + gg[x][y] - dg[al][x][y]))
    }))
}

/// Largest entry of a stack of four matrices.
pub fn max_abs4(m: &[Mat4; 4]) -> f64 {
    m.iter().map(crate::linalg::mat4_max_abs).fold(0.0, f64::max)
}

/// Contraction `T^ar = [G~_{p_a}]^r_{q_a} - [G~_{q_a}]^r_{p_a}` of the
/// potential in tetrad indices `g_tetrad[j][a] = G_j^a`.
pub fn torsion_contraction(g_tetrad: &[[f64; 6]; 4], so31: &So31Basis) -> [[f64; 4]; 6] {
    let gt = g_tilde(g_tetrad, so31);
    core::array::from_fn(|a| {
        let (p, q) = (P[a], Q[a]);
        core::array::from_fn(|r| gt[p][r][q] - gt[q][r][p])
    })
}

/// Frame components of the torsion,
/// `Theta_{p_a q_a}^r = T^ar - c_a^r`, i.e.
/// `nabla_p d_q - nabla_q d_p - [d_p, d_q]` on the frame.
///
/// It vanishes exactly when the affine connection is symmetric.
pub fn torsion(tj: &TetradJet, pot: &GaugePotentials, so31: &So31Basis) -> [[f64; 4]; 6] {
    let c = crate::geometry::structure_coefficients(tj);
    torsion_with(&c, &to_tetrad_indices(&tj.tetrad, &pot.g), so31)
}

/// [`torsion`] from precomputed structure coefficients and the potential in
/// tetrad indices.
pub fn torsion_with(c: &StructureCoefficients, g_tetrad: &[[f64; 6]; 4], so31: &So31Basis) -> [[f64; 4]; 6] {
    let t = torsion_contraction(g_tetrad, so31);
    core::array::from_fn(|a| core::array::from_fn(|r| t[a][r] - c.c[a][r]))
}

/// Torsion table in the `2 c_a^r + T^ar` normalisation, which differs from
/// [`torsion`] by `3 c_a^r`.
pub fn torsion_shifted(c: &StructureCoefficients, g_tetrad: &[[f64; 6]; 4], so31: &So31Basis) -> [[f64; 4]; 6] {
    let t = torsion_contraction(g_tetrad, so31);
    core::array::from_fn(|a| core::array::from_fn(|r| t[a][r] + 2.0 * c.c[a][r]))
}

/// Residual of the symmetry criterion
/// `S_ab^k = sum_j ([G~_a]^k_j O'_b^j - [G~_b]^k_j O'_a^j) + d_a O'_b^k - d_b O'_a^k`,
/// the chart components of the torsion carrying a frame index.
///
/// Returned as `s[alpha][beta][k]`.
pub fn symmetry_residual(tj: &TetradJet, pot: &GaugePotentials, so31: &So31Basis) -> [[[f64; 4]; 4]; 4] {
    let gt = g_tilde(&pot.g, so31);
    let op = tj.tetrad.oprime();
    core::array::from_fn(|al| {
        core::array::from_fn(|be| {
            core::array::from_fn(|k| {
                let mut s = tj.d_oprime[al][k][be] - tj.d_oprime[be][k][al];
                for jj in 0..4 {
                    s += gt[al][k][jj] * op[jj][be] - gt[be][k][jj] * op[jj][al];
                }
                s
            })
        })
    })
}

/// Riemann, Ricci and scalar curvature of the gravitational connection.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    /// `riemann[g][h]` is the matrix `[R_gh] = O F~_G gh O'`, with entry
    /// `[x][b] = R_{g h b}^x`.
    pub riemann: [[Mat4; 4]; 4],
    /// `Ric_ab = sum_g [R_ag]^g_b`.
    pub ricci: Mat4,
    /// Scalar curvature by the direct contraction
    /// `R = sum F_G ab^a (O_{p_a}^b O_{q_a}^a - O_{q_a}^b O_{p_a}^a)`.
    pub scalar: f64,
    /// `sum g^ab Ric_ab`, equal to `scalar`.
    pub scalar_from_ricci: f64,
}

/// Scalar curvature by the direct contraction of `F_G` with the tetrad.
pub fn scalar_curvature(fg: &[TwoForm<f64>; 6], t: &Tetrad) -> f64 {
    let o = t.o();
    let mut s = 0.0;
    for (a, f) in fg.iter().enumerate() {
        let (p, q) = (P[a], Q[a]);
        for al in 0..4 {
            for be in 0..4 {
                if al != be {
                    s += f.get(al, be) * (o[be][p] * o[al][q] - o[be][q] * o[al][p]);
                }
            }
        }
    }
    s
}

/// Riemann tensor, Ricci tensor and both routes to the scalar curvature.
pub fn riemann_ricci_scalar(fg: &[TwoForm<f64>; 6], t: &Tetrad, so31: &So31Basis) -> Result<Curvature> {
    let (_, g_inv) = metric_from_tetrad(t)?;
    let riemann: [[Mat4; 4]; 4] = core::array::from_fn(|g| {
        core::array::from_fn(|h| {
            let x: [f64; 6] = core::array::from_fn(|a| fg[a].get(g, h));
            mat4_mul(&mat4_mul(t.o(), &so31.combine(&x)), t.oprime())
        })
    });
    let ricci: Mat4 = core::array::from_fn(|a| core::array::from_fn(|b| (0..4).map(|g| riemann[a][g][g][b]).sum()));
    let mut scalar_from_ricci = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            scalar_from_ricci += g_inv[a][b] * ricci[a][b];
        }
    }
    Ok(Curvature {
        riemann,
        ricci,
        scalar: scalar_curvature(fg, t),
        scalar_from_ricci,
    })
}

/// `[nabla_alpha psi] = [d_alpha psi] + [G_alpha][psi] + [psi][A_alpha]^t`
/// with `[G_alpha] = sum_a G_alpha^a k_a` and `[A_alpha] = sum_a A_alpha^a theta_a`.
pub fn covariant_derivative_state(
    sj: &StateJet,
    pot: &GaugePotentials,
    gens: &SpinGenerators,
    grp: &InternalGroup,
) -> Result<[CMatrix; 4]> {
    pot.check_internal(grp, "covariant_derivative_state")?;
    let m = sj.psi.m();
    if grp.dim() != m {
        return Err(Error::DimensionMismatch {
            context: "covariant_derivative_state",
            expected: grp.dim(),
            found: m,
        });
    }
    for d in &sj.dpsi {
        if d.rows() != 4 || d.cols() != m {
            return Err(Error::DimensionMismatch {
                context: "covariant_derivative_state derivative",
                expected: m,
                found: d.cols(),
            });
        }
    }
    let psi = sj.psi.psi();
    Ok(core::array::from_fn(|al| {
        let gmat = gens.combine(&pot.g[al]);
        let amat = grp.combine(&pot.a[al]).transpose();
        let mut out = sj.dpsi[al].clone();
        out = &out + &(&gmat * psi);
        out = &out + &(psi * &amat);
        out
    }))
}

/// Frame components `nabla_r psi = sum_alpha O_r^alpha nabla_alpha psi`.
pub fn frame_derivatives(t: &Tetrad, nabla: &[CMatrix; 4]) -> [CMatrix; 4] {
    let o = t.o();
    core::array::from_fn(|r| {
        let mut out = CMatrix::zeros(nabla[0].rows(), nabla[0].cols());
        for (al, n) in nabla.iter().enumerate() {
            out.axpy(c64(o[al][r], 0.0), n);
        }
        out
    })
}

/// `D psi = sum_r gamma^r nabla_r psi` from precomputed covariant derivatives.
pub fn dirac_from_nabla(t: &Tetrad, nabla: &[CMatrix; 4], gamma: &GammaBasis) -> CMatrix {
    let frame = frame_derivatives(t, nabla);
    let mut out = CMatrix::zeros(nabla[0].rows(), nabla[0].cols());
    for (r, f) in frame.iter().enumerate() {
        out = &out + &(&gamma.gamma_up[r] * f);
    }
    out
}

/// Dirac operator `D psi = sum_r gamma^r sum_alpha O_r^alpha nabla_alpha psi`.
pub fn dirac_operator(
    sj: &StateJet,
    t: &Tetrad,
    pot: &GaugePotentials,
    gens: &SpinGenerators,
    grp: &InternalGroup,
    gamma: &GammaBasis,
) -> Result<CMatrix> {
    let nabla = covariant_derivative_state(sj, pot, gens, grp)?;
    Ok(dirac_from_nabla(t, &nabla, gamma))
}

/// Entrywise `a - b` for stacks of four 4x4 matrices.
pub fn sub4(a: &[Mat4; 4], b: &[Mat4; 4]) -> [Mat4; 4] {
    core::array::from_fn(|k| mat4_sub(&a[k], &b[k]))
}
