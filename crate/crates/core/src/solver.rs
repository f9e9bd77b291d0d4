//! The closed-form gravitational solve and residual evaluators for the
//! field equations.
//!
//! Residual evaluators never differentiate numerically. Derivatives of
//! fields arrive in jets; derivatives of composite densities (fluxes) are
//! supplied by the caller, and a missing one is reported as
//! [`Error::MissingJet`]. The flux functions in this module return exactly
//! the densities whose derivatives are expected.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{product_4xm, GammaBasis, SpinGenerators, StateTensor};
use crate::error::{Error, Result};
use crate::fields::{to_tetrad_indices, GaugePotentials, PotentialJet};
use crate::geometry::{
    det_derivative, metric_from_tetrad, raise_two_form, StructureCoefficients, Tetrad, TetradJet, TwoForm,
};
use crate::lie::{InternalGroup, So31Basis, P, Q};
use crate::linalg::{c64, solve_dense, CMatrix, Mat4, C64, ETA, I};
use crate::moments::{matter_lagrangian, matter_source, t_g_contraction, ModelConstants, Moments};

/// Absolute tolerance (scaled by the data magnitude) on the 24 defining
/// equations of the gravitational solve.
pub const GRAVITY_TOLERANCE: f64 = 1e-10;

/// Momentum table `K_a^r = (N / 2 aG)(aI ([J] k~_a)_r + aD V^r P_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KTable {
    /// `k[a][r] = K_a^r`.
    pub k: [[f64; 4]; 6],
}

impl KTable {
    /// The zero table.
    pub fn zero() -> Self {
        Self { k: [[0.0; 4]; 6] }
    }
}

/// `K_a^r` from the moments; fails with [`Error::ZeroCoupling`] when `aG = 0`.
pub fn k_from_moments(mom: &Moments, c: &ModelConstants, t: &Tetrad, so31: &So31Basis) -> Result<KTable> {
    if c.a_g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let m = matter_source(mom, c, t, so31);
    let s = 0.5 / c.a_g;
    Ok(KTable {
        k: m.map(|row| row.map(|x| x * s)),
    })
}

/// Gravitational potential solving the 24 defining equations.
#[derive(Clone, Debug, PartialEq)]
pub struct GravitySolution {
    /// `g[r][a] = G_r^a` in tetrad indices.
    pub g: [[f64; 6]; 4],
    /// Largest residual of the defining equations.
    pub residual24: f64,
    /// `true` when the closed-form table failed its residual check and the
    /// dense linear solve was used instead.
    pub used_dense_fallback: bool,
}

impl GravitySolution {
    /// Chart components `G_alpha^a = sum_r O'_alpha^r G_r^a`.
    pub fn to_chart(&self, t: &Tetrad) -> [[f64; 6]; 4] {
        crate::fields::to_chart_indices(t, &self.g)
    }
}

/// Right-hand side `-c_a^r + d_{p_a}^r D_{q_a} - d_{q_a}^r D_{p_a} - K_a^r`.
pub fn gravity_rhs(k: &KTable, c: &StructureCoefficients) -> [[f64; 4]; 6] {
    core::array::from_fn(|a| {
        core::array::from_fn(|r| {
            let mut s = -c.c[a][r] - k.k[a][r];
            if P[a] == r {
                s += c.d[Q[a]];
            }
            if Q[a] == r {
                s -= c.d[P[a]];
            }
            s
        })
    })
}

/// `[T_G(G)]^ar - rhs^ar` for the potential in tetrad indices.
pub fn gravity_equation_residual(
    g: &[[f64; 6]; 4],
    k: &KTable,
    c: &StructureCoefficients,
    so31: &So31Basis,
) -> [[f64; 4]; 6] {
    let tg = t_g_contraction(g, so31);
    let rhs = gravity_rhs(k, c);
    core::array::from_fn(|a| core::array::from_fn(|r| tg[a][r] - rhs[a][r]))
}

fn max_abs_table(t: &[[f64; 4]; 6]) -> f64 {
    t.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// The closed-form solution table, `G_r^a` as a function of `K` and `c`.
pub fn closed_form_solution(k: &KTable, c: &StructureCoefficients) -> [[f64; 6]; 4] {
    let k = |a: usize, r: usize| k.k[a - 1][r];
    let c = |a: usize, r: usize| c.c[a - 1][r];
    let two_g: [[f64; 6]; 4] = [
        [
            -k(1, 0) + k(5, 3) - k(6, 2) - c(1, 0) + c(5, 3) - c(6, 2),
            k(6, 1) + c(6, 1) - k(2, 0) - k(4, 3) - c(2, 0) - c(4, 3),
            -k(5, 1) - c(5, 1) + k(4, 2) - k(3, 0) + c(4, 2) - c(3, 0),
            k(2, 3) - k(3, 2) + k(4, 0) + 2.0 * c(4, 0),
            k(3, 1) - k(1, 3) + k(5, 0) + 2.0 * c(5, 0),
            -k(2, 1) + k(1, 2) + k(6, 0) + 2.0 * c(6, 0),
        ],
        [
            k(1, 1) + c(1, 1) - k(2, 2) - k(3, 3) - c(2, 2) - c(3, 3),
            k(2, 1) + 2.0 * c(2, 1) + k(1, 2) - k(6, 0),
            k(3, 1) + 2.0 * c(3, 1) + k(1, 3) + k(5, 0),
            -k(4, 1) - 2.0 * c(4, 1) + k(5, 2) + k(6, 3),
            -k(5, 1) - c(5, 1) - k(4, 2) - k(3, 0) - c(4, 2) - c(3, 0),
            -k(6, 1) - c(6, 1) + k(2, 0) - k(4, 3) + c(2, 0) - c(4, 3),
        ],
        [
            k(2, 1) + k(1, 2) + k(6, 0) + 2.0 * c(1, 2),
            -k(1, 1) - c(1, 1) + k(2, 2) - k(3, 3) + c(2, 2) - c(3, 3),
            k(2, 3) + k(3, 2) - k(4, 0) + 2.0 * c(3, 2),
            -k(5, 1) - c(5, 1) - k(4, 2) + k(3, 0) - c(4, 2) + c(3, 0),
            k(4, 1) - k(5, 2) + k(6, 3) - 2.0 * c(5, 2),
            -k(1, 0) - k(5, 3) - k(6, 2) - c(1, 0) - c(5, 3) - c(6, 2),
        ],
        [
            k(3, 1) + k(1, 3) - k(5, 0) + 2.0 * c(1, 3),
            k(2, 3) + k(3, 2) + k(4, 0) + 2.0 * c(2, 3),
            -k(1, 1) - c(1, 1) - k(2, 2) + k(3, 3) - c(2, 2) + c(3, 3),
            -k(6, 1) - c(6, 1) - k(2, 0) - k(4, 3) - c(2, 0) - c(4, 3),
            k(1, 0) - k(5, 3) - k(6, 2) + c(1, 0) - c(5, 3) - c(6, 2),
            k(4, 1) + k(5, 2) - k(6, 3) - 2.0 * c(6, 3),
        ],
    ];
    two_g.map(|row| row.map(|x| 0.5 * x))
}

/// Solves the 24 defining equations as a dense linear system.
pub fn solve_gravity_dense(k: &KTable, c: &StructureCoefficients, so31: &So31Basis) -> Option<[[f64; 6]; 4]> {
    let mut mat = vec![0.0; 24 * 24];
    for col in 0..24 {
        let mut unit = [[0.0; 6]; 4];
        unit[col / 6][col % 6] = 1.0;
        let tg = t_g_contraction(&unit, so31);
        for a in 0..6 {
            for r in 0..4 {
                mat[(a * 4 + r) * 24 + col] = tg[a][r];
            }
        }
    }
    let rhs_t = gravity_rhs(k, c);
    let mut rhs: Vec<f64> = rhs_t.iter().flatten().copied().collect();
    solve_dense(&mut mat, &mut rhs, 24)?;
    Some(core::array::from_fn(|r| core::array::from_fn(|a| rhs[r * 6 + a])))
}

/// Solves for `G_r^a` with the closed-form table, verified against the
/// defining equations. A table result failing the check is replaced by the
/// dense solve; [`Error::SolutionInconsistent`] is returned only when both
/// fail.
pub fn solve_gravity(k: &KTable, c: &StructureCoefficients, so31: &So31Basis) -> Result<GravitySolution> {
    let scale =
        k.k.iter()
            .chain(c.c.iter())
            .flatten()
            .fold(1.0_f64, |m, x| m.max(x.abs()));
    let tol = GRAVITY_TOLERANCE * scale;
    let g = closed_form_solution(k, c);
    let residual24 = max_abs_table(&gravity_equation_residual(&g, k, c, so31));
    if residual24 <= tol {
        return Ok(GravitySolution {
            g,
            residual24,
            used_dense_fallback: false,
        });
    }
    let dense = solve_gravity_dense(k, c, so31).ok_or(Error::SolutionInconsistent { residual: residual24 })?;
    let residual = max_abs_table(&gravity_equation_residual(&dense, k, c, so31));
    if residual <= tol {
        Ok(GravitySolution {
            g: dense,
            residual24: residual,
            used_dense_fallback: true,
        })
    } else {
        Err(Error::SolutionInconsistent { residual })
    }
}

/// Residuals of the six constraints on `K_a^0` that make the time row of the
/// solution vanish (`G_0^a = 0` for all `a`):
///
/// * `K_1^0 = K_5^3 - K_6^2 - c_1^0 + c_5^3 - c_6^2`
/// * `K_2^0 = -K_4^3 + K_6^1 - c_2^0 - c_4^3 + c_6^1`
/// * `K_3^0 = K_4^2 - K_5^1 - c_3^0 + c_4^2 - c_5^1`
/// * `K_4^0 = -K_2^3 + K_3^2 - 2 c_4^0`
/// * `K_5^0 = K_1^3 - K_3^1 - 2 c_5^0`
/// * `K_6^0 = -K_1^2 + K_2^1 - 2 c_6^0`
pub fn temporal_gauge_constraints(k: &KTable, c: &StructureCoefficients) -> [f64; 6] {
    let k = |a: usize, r: usize| k.k[a - 1][r];
    let c = |a: usize, r: usize| c.c[a - 1][r];
    [
        k(1, 0) - (k(5, 3) - k(6, 2) - c(1, 0) + c(5, 3) - c(6, 2)),
        k(2, 0) - (-k(4, 3) + k(6, 1) - c(2, 0) - c(4, 3) + c(6, 1)),
        k(3, 0) - (k(4, 2) - k(5, 1) - c(3, 0) + c(4, 2) - c(5, 1)),
        k(4, 0) - (-k(2, 3) + k(3, 2) - 2.0 * c(4, 0)),
        k(5, 0) - (k(1, 3) - k(3, 1) - 2.0 * c(5, 0)),
        k(6, 0) - (-k(1, 2) + k(2, 1) - 2.0 * c(6, 0)),
    ]
}

/// The combinations `Theta_0 = -(K_4^1 + K_5^2 + K_6^3)` and
/// `Theta_k = K_{p_k}^{q_k} - K_{q_k}^{p_k} + K_{k+3}^0`.
pub fn theta_combinations(k: &KTable) -> [f64; 4] {
    let kk = |a: usize, r: usize| k.k[a - 1][r];
    [
        -(kk(4, 1) + kk(5, 2) + kk(6, 3)),
        -kk(2, 3) + kk(3, 2) + kk(4, 0),
        -kk(3, 1) + kk(1, 3) + kk(5, 0),
        -kk(1, 2) + kk(2, 1) + kk(6, 0),
    ]
}

/// Frame torsion of the solved connection in closed form,
/// `K_a^r + 1/2 Theta-table`, in the normalisation of
/// [`crate::fields::torsion`].
pub fn torsion_from_solution(k: &KTable) -> [[f64; 4]; 6] {
    let [t0, t1, t2, t3] = theta_combinations(k);
    let table = [
        [0.0, 0.0, t3, -t2],
        [0.0, -t3, 0.0, t1],
        [0.0, t2, -t1, 0.0],
        [-t1, t0, 0.0, 0.0],
        [-t2, 0.0, t0, 0.0],
        [-t3, 0.0, 0.0, t0],
    ];
    core::array::from_fn(|a| core::array::from_fn(|r| k.k[a][r] + 0.5 * table[a][r]))
}

/// [`torsion_from_solution`] in the `2 c + T` normalisation of
/// [`crate::fields::torsion_shifted`]: `3 c_a^r + K_a^r + 1/2 Theta-table`.
pub fn torsion_from_solution_shifted(k: &KTable, c: &StructureCoefficients) -> [[f64; 4]; 6] {
    let t = torsion_from_solution(k);
    core::array::from_fn(|a| core::array::from_fn(|r| t[a][r] + 3.0 * c.c[a][r]))
}

/// Internal curvature with its first partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureJet {
    /// `fa[a]` is `F_A^a` at the point.
    pub fa: Vec<TwoForm<C64>>,
    /// `dfa[beta][a] = d_beta F_A^a`.
    pub dfa: [Vec<TwoForm<C64>>; 4],
}

impl CurvatureJet {
    /// A jet with vanishing derivatives.
    pub fn constant(fa: Vec<TwoForm<C64>>) -> Self {
        let n = fa.len();
        Self {
            fa,
            dfa: core::array::from_fn(|_| vec![TwoForm::zero(); n]),
        }
    }
}

/// `d_beta g^{xy} = sum_j eta^jj (d O_j^x O_j^y + O_j^x d O_j^y)`.
fn inverse_metric_derivative(tj: &TetradJet) -> [Mat4; 4] {
    let o = tj.tetrad.o();
    core::array::from_fn(|b| {
        let d = &tj.d_o[b];
        core::array::from_fn(|x| {
            core::array::from_fn(|y| (0..4).map(|j| ETA[j] * (d[x][j] * o[y][j] + o[x][j] * d[y][j])).sum())
        })
    })
}

fn raise_full(f: &[[C64; 4]; 4], g_inv: &Mat4) -> [[C64; 4]; 4] {
    core::array::from_fn(|x| {
        core::array::from_fn(|y| {
            let mut s = c64(0.0, 0.0);
            for l in 0..4 {
                for m in 0..4 {
                    s += f[l][m] * (g_inv[x][l] * g_inv[y][m]);
                }
            }
            s
        })
    })
}

/// Densities `F_A^{a, alpha beta} det O'` with both indices raised.
pub fn field_flux_density(t: &Tetrad, fa: &[TwoForm<C64>]) -> Result<Vec<[[C64; 4]; 4]>> {
    let (_, g_inv) = metric_from_tetrad(t)?;
    let det = t.det_oprime();
    Ok(fa
        .iter()
        .map(|f| raise_two_form(f, &g_inv).to_full().map(|row| row.map(|x| x * det)))
        .collect())
}

/// `d_beta (F_A^{a, alpha gamma} det O')` by the product rule,
/// returned as `out[a][beta][alpha][gamma]`.
fn field_flux_derivative(tj: &TetradJet, fj: &CurvatureJet) -> Result<Vec<[[[C64; 4]; 4]; 4]>> {
    let t = &tj.tetrad;
    let (_, g_inv) = metric_from_tetrad(t)?;
    let dginv = inverse_metric_derivative(tj);
    let ddet = det_derivative(tj);
    let det = t.det_oprime();
    let mut out = Vec::with_capacity(fj.fa.len());
    for (a, f) in fj.fa.iter().enumerate() {
        let low = f.to_full();
        let up = raise_full(&low, &g_inv);
        let per_beta: [[[C64; 4]; 4]; 4] = core::array::from_fn(|b| {
            let dlow = fj.dfa[b][a].to_full();
            let draised = raise_full(&dlow, &g_inv);
            core::array::from_fn(|x| {
                core::array::from_fn(|y| {
                    let mut s = draised[x][y] * det + up[x][y] * ddet[b];
                    for l in 0..4 {
                        for m in 0..4 {
                            let w = dginv[b][x][l] * g_inv[y][m] + g_inv[x][l] * dginv[b][y][m];
                            s += low[l][m] * (w * det);
                        }
                    }
                    s
                })
            })
        });
        out.push(per_beta);
    }
    Ok(out)
}

/// Source terms `N (aD V^alpha rho_a - i aI sum_r O_r^alpha mu_a^r) det O'`.
pub fn internal_source(mom: &Moments, c: &ModelConstants, t: &Tetrad) -> Vec<[C64; 4]> {
    let o = t.o();
    let det = t.det_oprime();
    (0..mom.rho.len())
        .map(|a| {
            core::array::from_fn(|al| {
                let mu: f64 = (0..4).map(|r| o[al][r] * mom.mu[a][r]).sum();
                c64(c.n * c.a_d * c.v[al] * mom.rho[a], -c.n * c.a_i * mu) * det
            })
        })
        .collect()
}

/// Residual of the internal field equation, per generator and chart index:
///
/// `N (aD V^alpha rho_a - i aI sum_r O_r^alpha mu_a^r) det O'
///   + 2 aF sum_b ([A_b, F_A^{alpha b} det O']^a + d_b (F_A^{a alpha b} det O'))`.
pub fn field_equation_residual_a(
    mom: &Moments,
    c: &ModelConstants,
    tj: &TetradJet,
    pot: &GaugePotentials,
    fj: &CurvatureJet,
    grp: &InternalGroup,
) -> Result<Vec<[C64; 4]>> {
    let n = grp.generator_count();
    if fj.fa.len() != n || mom.rho.len() != n || pot.internal_len() != n || fj.dfa.iter().any(|d| d.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "field_equation_residual_a",
            expected: n,
            found: fj.fa.len(),
        });
    }
    let t = &tj.tetrad;
    let flux = field_flux_density(t, &fj.fa)?;
    let dflux = field_flux_derivative(tj, fj)?;
    let mut out = internal_source(mom, c, t);
    for al in 0..4 {
        for be in 0..4 {
            let col: Vec<C64> = (0..n).map(|b| flux[b][al][be]).collect();
            let br = grp.bracket(&pot.a[be], &col);
            for a in 0..n {
                out[a][al] += (br[a] + dflux[a][be][al][be]) * (2.0 * c.a_f);
            }
        }
    }
    Ok(out)
}

/// Cyclic sums `d_l F_mn + d_m F_nl + d_n F_lm` for every generator and
/// every triple `l < m < n`; the largest magnitude is returned.
pub fn bianchi_residual(fj: &CurvatureJet) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..fj.fa.len() {
        for l in 0..4 {
            for m in l + 1..4 {
                for n in m + 1..4 {
                    let s = fj.dfa[l][a].get(m, n) + fj.dfa[m][a].get(n, l) + fj.dfa[n][a].get(l, m);
                    worst = worst.max(s.norm());
                }
            }
        }
    }
    worst
}

/// Scalar curvature predicted by the model,
/// `R = -(N/aG)(2 aM <psi,psi> + 3/2 aI Im<psi, D psi> + 2 aD sum V^alpha Im<psi, nabla_alpha psi>)`.
pub fn scalar_curvature_model(
    psi: &StateTensor,
    dirac: &CMatrix,
    nabla: &[CMatrix; 4],
    c: &ModelConstants,
) -> Result<f64> {
    if c.a_g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let x = psi.psi();
    let mut s = 2.0 * c.a_m * product_4xm(x, x).re + 1.5 * c.a_i * product_4xm(x, dirac).im;
    for al in 0..4 {
        s += 2.0 * c.a_d * c.v[al] * product_4xm(x, &nabla[al]).im;
    }
    Ok(-c.n / c.a_g * s)
}

/// Density of the superconservation law,
/// `out[alpha][beta][gamma] = (aF Re(A_beta, F_A^{alpha gamma})
///   + aG sum_a (O_{p_a}^gamma O_{q_a}^alpha - O_{q_a}^gamma O_{p_a}^alpha) G_beta^a) det O'`.
pub fn superconservation_density(
    t: &Tetrad,
    pot: &GaugePotentials,
    fa: &[TwoForm<C64>],
    c: &ModelConstants,
) -> Result<[[[f64; 4]; 4]; 4]> {
    let flux = field_flux_density(t, fa)?;
    let o = t.o();
    let det = t.det_oprime();
    Ok(core::array::from_fn(|al| {
        core::array::from_fn(|be| {
            core::array::from_fn(|ga| {
                let mut s = 0.0;
                for (a, f) in flux.iter().enumerate() {
                    s += c.a_f * (pot.a[be][a].conj() * f[al][ga]).re;
                }
                for a in 0..6 {
                    let (p, q) = (P[a], Q[a]);
                    s += c.a_g * (o[ga][p] * o[al][q] - o[ga][q] * o[al][p]) * pot.g[be][a] * det;
                }
                s
            })
        })
    }))
}

/// Residual `sum_gamma d_gamma density[alpha][beta][gamma]` of the
/// superconservation law, with the derivatives taken analytically from the
/// tetrad, potential and curvature jets.
pub fn superconservation_residual(
    tj: &TetradJet,
    pj: &PotentialJet,
    fj: &CurvatureJet,
    c: &ModelConstants,
) -> Result<Mat4> {
    let t = &tj.tetrad;
    let pot = &pj.potentials;
    let n = fj.fa.len();
    if pot.internal_len() != n {
        return Err(Error::DimensionMismatch {
            context: "superconservation_residual",
            expected: n,
            found: pot.internal_len(),
        });
    }
    let flux = field_flux_density(t, &fj.fa)?;
    let dflux = field_flux_derivative(tj, fj)?;
    let ddet = det_derivative(tj);
    let o = t.o();
    let det = t.det_oprime();
    let mut out = [[0.0; 4]; 4];
    for al in 0..4 {
        for be in 0..4 {
            let mut s = 0.0;
            for ga in 0..4 {
                for a in 0..n {
                    let term = pj.da[ga][be][a].conj() * flux[a][al][ga] + pot.a[be][a].conj() * dflux[a][ga][al][ga];
                    s += c.a_f * term.re;
                }
                for a in 0..6 {
                    let (p, q) = (P[a], Q[a]);
                    let d = &tj.d_o[ga];
                    let w = o[ga][p] * o[al][q] - o[ga][q] * o[al][p];
                    let dw = d[ga][p] * o[al][q] + o[ga][p] * d[al][q] - d[ga][q] * o[al][p] - o[ga][q] * d[al][p];
                    s += c.a_g * (dw * pot.g[be][a] * det + w * pj.dg[ga][be][a] * det + w * pot.g[be][a] * ddet[ga]);
                }
            }
            out[al][be] = s;
        }
    }
    Ok(out)
}

/// `D_M^alpha = aI sum_r O_r^alpha g^r + aD V^alpha` and its partner
/// `D_M'^alpha = -aI sum_r O_r^alpha g^r + aD V^alpha`.
pub fn dirac_mass_operators(t: &Tetrad, c: &ModelConstants, gamma: &GammaBasis) -> ([CMatrix; 4], [CMatrix; 4]) {
    let o = t.o();
    let build = |sign: f64| -> [CMatrix; 4] {
        core::array::from_fn(|al| {
            let mut m = CMatrix::identity(4).scale_re(c.a_d * c.v[al]);
            for r in 0..4 {
                m.axpy(c64(sign * c.a_i * o[al][r], 0.0), &gamma.gamma_up[r]);
            }
            m
        })
    };
    (build(1.0), build(-1.0))
}

/// Flux of the state equation, `N det O' D_M'^alpha psi`.
pub fn state_flux(psi: &StateTensor, t: &Tetrad, c: &ModelConstants, gamma: &GammaBasis) -> [CMatrix; 4] {
    let (_, dp) = dirac_mass_operators(t, c, gamma);
    let s = c.n * t.det_oprime();
    core::array::from_fn(|al| (&dp[al] * psi.psi()).scale_re(s))
}

/// Residual of the state equation
///
/// `sum_a d_a (N det O' D_M'^a psi) + N det O' (2 aM i psi
///   + sum_a (D_M^a nabla_a psi + [G_a] D_M'^a psi + sum_b conj(A_a^b) D_M'^a psi theta_b^t))`,
///
/// where `div_flux` is the divergence of [`state_flux`].
#[allow(clippy::too_many_arguments)]
pub fn state_equation_residual(
    psi: &StateTensor,
    nabla: &[CMatrix; 4],
    t: &Tetrad,
    pot: &GaugePotentials,
    c: &ModelConstants,
    gens: &SpinGenerators,
    grp: &InternalGroup,
    gamma: &GammaBasis,
    div_flux: Option<&CMatrix>,
) -> Result<CMatrix> {
    let div = div_flux.ok_or(Error::MissingJet {
        name: "divergence of the state flux",
    })?;
    let x = psi.psi();
    if div.rows() != 4 || div.cols() != x.cols() || grp.dim() != x.cols() || pot.internal_len() != grp.generator_count()
    {
        return Err(Error::DimensionMismatch {
            context: "state_equation_residual",
            expected: x.cols(),
            found: div.cols(),
        });
    }
    let (dm, dp) = dirac_mass_operators(t, c, gamma);
    let mut inner = x.scale(I * (2.0 * c.a_m));
    for al in 0..4 {
        inner = &inner + &(&dm[al] * &nabla[al]);
        let dpx = &dp[al] * x;
        inner = &inner + &(&gens.combine(&pot.g[al]) * &dpx);
        for b in 0..grp.generator_count() {
            let term = (&dpx * &grp.theta(b).transpose()).scale(pot.a[al][b].conj());
            inner = &inner + &term;
        }
    }
    let s = c.n * t.det_oprime();
    Ok(div + &inner.scale_re(s))
}

/// Flux of the particle conservation law, `N det O' V^alpha <psi, psi>`.
pub fn particle_flux(psi: &StateTensor, t: &Tetrad, c: &ModelConstants) -> [f64; 4] {
    let x = psi.psi();
    let norm = product_4xm(x, x).re;
    let s = c.n * t.det_oprime() * norm;
    c.v.map(|v| v * s)
}

/// Divergence `sum_alpha d_alpha flux^alpha` from `d_flux[beta][alpha] = d_beta flux^alpha`.
pub fn divergence(d_flux: Option<&[[f64; 4]; 4]>, name: &'static str) -> Result<f64> {
    let d = d_flux.ok_or(Error::MissingJet { name })?;
    Ok((0..4).map(|a| d[a][a]).sum())
}

/// Residual of the particle conservation law: the divergence of [`particle_flux`].
pub fn particle_conservation_residual(d_flux: Option<&[[f64; 4]; 4]>) -> Result<f64> {
    divergence(d_flux, "derivative of the particle flux")
}

/// Flux of the energy law, `N det O' sum_r O_r^alpha J_r`.
pub fn energy_flux(j: &[f64; 4], t: &Tetrad, c: &ModelConstants) -> [f64; 4] {
    let v = t.to_chart(j);
    let s = c.n * t.det_oprime();
    v.map(|x| x * s)
}

/// Residual of the energy law `N det O' L_M + aI sum_alpha d_alpha (N det O' O_r^alpha J_r)`,
/// with `l_m` the matter Lagrangian without `N`.
pub fn energy_conservation_residual(
    l_m: f64,
    t: &Tetrad,
    c: &ModelConstants,
    d_flux: Option<&[[f64; 4]; 4]>,
) -> Result<f64> {
    let div = divergence(d_flux, "derivative of the energy flux")?;
    Ok(c.n * t.det_oprime() * l_m + c.a_i * div)
}

/// Densities `h_alpha = Im<psi, nabla_alpha psi> det O'` of the trajectory equation.
pub fn trajectory_density(psi: &StateTensor, nabla: &[CMatrix; 4], t: &Tetrad) -> [f64; 4] {
    let x = psi.psi();
    core::array::from_fn(|al| product_4xm(x, &nabla[al]).im * t.det_oprime())
}

/// Inputs of the trajectory equation at a point.
#[derive(Clone, Debug)]
pub struct TrajectoryInputs<'a> {
    /// Tetrad with derivatives.
    pub tetrad: &'a TetradJet,
    /// Potentials with derivatives.
    pub potentials: &'a PotentialJet,
    /// Moments at the point.
    pub moments: &'a Moments,
    /// Matter Lagrangian without `N`.
    pub l_m: f64,
    /// `d_h[beta][alpha] = d_beta h_alpha` for [`trajectory_density`].
    pub d_h: Option<&'a [[f64; 4]; 4]>,
    /// `d_j[beta][r] = d_beta J_r`.
    pub d_j: Option<&'a [[f64; 4]; 4]>,
}

/// Residual of the trajectory equation, per chart index `alpha`:
///
/// `aD sum_b V^b d_b h_alpha - L_M d_alpha det O'
///   - det O' aD sum_{a b} V^b (d_alpha G_b^a P_a + rho_a d_alpha Re A_b^a)
///   - det O' aI sum_{b r} (-d_b J_r d_alpha O_r^b + sum_a d_alpha G_r^a ([J] k~_a)_r - mu_a^r Im d_alpha A_r^a)`,
///
/// where `G_r^a = sum_b O_r^b G_b^a` and `A_r^a = sum_b O_r^b A_b^a`.
pub fn trajectory_residual(inp: &TrajectoryInputs<'_>, c: &ModelConstants, so31: &So31Basis) -> Result<[f64; 4]> {
    let d_h = inp.d_h.ok_or(Error::MissingJet {
        name: "derivative of the trajectory density",
    })?;
    let d_j = inp.d_j.ok_or(Error::MissingJet {
        name: "derivative of the current J",
    })?;
    let tj = inp.tetrad;
    let pj = inp.potentials;
    let mom = inp.moments;
    let t = &tj.tetrad;
    let o = t.o();
    let det = t.det_oprime();
    let ddet = det_derivative(tj);
    let n = mom.rho.len();
    if pj.potentials.internal_len() != n {
        return Err(Error::DimensionMismatch {
            context: "trajectory_residual",
            expected: n,
            found: pj.potentials.internal_len(),
        });
    }
    let jk: [[f64; 4]; 6] = core::array::from_fn(|a| so31.row_times(&mom.j, a));
    let mut out = [0.0; 4];
    for al in 0..4 {
        let mut lhs = 0.0;
        for be in 0..4 {
            lhs += c.a_d * c.v[be] * d_h[be][al];
        }
        let mut rhs = inp.l_m * ddet[al];
        let mut sd = 0.0;
        for be in 0..4 {
            for a in 0..6 {
                sd += c.v[be] * pj.dg[al][be][a] * mom.p[a];
            }
            for a in 0..n {
                sd += c.v[be] * mom.rho[a] * pj.da[al][be][a].re;
            }
        }
        rhs += det * c.a_d * sd;
        let mut si = 0.0;
        for r in 0..4 {
            for be in 0..4 {
                si -= d_j[be][r] * tj.d_o[al][be][r];
            }
            for a in 0..6 {
                let dg: f64 = (0..4)
                    .map(|be| tj.d_o[al][be][r] * pj.potentials.g[be][a] + o[be][r] * pj.dg[al][be][a])
                    .sum();
                si += dg * jk[a][r];
            }
            for a in 0..n {
                let da: f64 = (0..4)
                    .map(|be| tj.d_o[al][be][r] * pj.potentials.a[be][a].im + o[be][r] * pj.da[al][be][a].im)
                    .sum();
                si -= mom.mu[a][r] * da;
            }
        }
        rhs += det * c.a_i * si;
        out[al] = lhs - rhs;
    }
    Ok(out)
}

/// Electromagnetic reading of the internal field equations for U(1).
#[derive(Clone, Debug, PartialEq)]
pub struct EmReport {
    /// Charge `rho`.
    pub rho: f64,
    /// Magnetic moment `mu^r`.
    pub mu: [f64; 4],
    /// `<psi, psi>`.
    pub norm: f64,
    /// Current density `N (aD V^alpha rho - i aI sum_r O_r^alpha mu^r) det O'`.
    pub current: [C64; 4],
    /// Residual of the field equation per chart index.
    pub source_residual: [C64; 4],
    /// Largest cyclic sum of `dF`.
    pub closure_residual: f64,
    /// `Re F_0k`, `k = 1..3`.
    pub electric: [f64; 3],
    /// `Re (F_32, F_13, F_21)`.
    pub magnetic: [f64; 3],
    /// Coupling `mu_0 = aD / 2 aF`.
    pub mu0: f64,
}

/// Packages the U(1) moments, current, field-equation residual and the
/// closure of `F` into an [`EmReport`].
pub fn em_specialize(
    mom: &Moments,
    c: &ModelConstants,
    tj: &TetradJet,
    pot: &GaugePotentials,
    fj: &CurvatureJet,
    grp: &InternalGroup,
) -> Result<EmReport> {
    if !grp.is_u1() {
        return Err(Error::NotU1);
    }
    let residual = field_equation_residual_a(mom, c, tj, pot, fj, grp)?;
    let current = internal_source(mom, c, &tj.tetrad)[0];
    let f = &fj.fa[0];
    Ok(EmReport {
        rho: mom.rho[0],
        mu: mom.mu[0],
        norm: mom.norm,
        current,
        source_residual: residual[0],
        closure_residual: bianchi_residual(fj),
        electric: [f.comp[0].re, f.comp[1].re, f.comp[2].re],
        magnetic: [f.comp[3].re, f.comp[4].re, f.comp[5].re],
        mu0: if c.a_f == 0.0 {
            f64::INFINITY
        } else {
            c.a_d / (2.0 * c.a_f)
        },
    })
}

/// Matter Lagrangian without `N`, re-exported for residual callers.
pub fn matter_lagrangian_density(psi: &StateTensor, dirac: &CMatrix, nabla: &[CMatrix; 4], c: &ModelConstants) -> f64 {
    matter_lagrangian(psi, dirac, nabla, c)
}

/// Tetrad components of the potential, re-exported for solver callers.
pub fn potential_in_tetrad(t: &Tetrad, pot: &GaugePotentials) -> [[f64; 6]; 4] {
    to_tetrad_indices(t, &pot.g)
}
