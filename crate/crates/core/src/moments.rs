//! Gauge-invariant moments of a state tensor and the conserved quantities
//! built from them.
//!
//! All scalar products are `<psi1, psi2> = Tr(psi1^* g0 psi2)` (see
//! [`crate::algebra::hermitian_product`]). Moments that are real by
//! construction are checked: a spurious imaginary part larger than
//! [`REAL_TOLERANCE`] times `max(1, |psi|^2)` is reported as
//! [`Error::NonRealMoment`].

use alloc::vec::Vec;

use crate::algebra::{pauli, product_4xm, GammaBasis, SpinGenerators, StateTensor};
use crate::error::{Error, Result};
use crate::fields::{scalar_curvature, to_tetrad_indices, GaugePotentials};
use crate::geometry::{
    form_inner_product, hodge_dual_2form, metric_from_tetrad, raise_two_form, varpi4_bivector, Tetrad, TwoForm,
};
use crate::lie::{InternalGroup, So31Basis, P, Q};
use crate::linalg::{c64, CMatrix, Mat4, C64, ETA, I};

/// Relative tolerance on the imaginary residue of real moments.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Coupling constants of the Lagrangian together with the particle density
/// `N` and the velocity `V^alpha` at the point.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConstants {
    /// Mass-like coupling `aM`.
    pub a_m: f64,
    /// Dirac-operator coupling `aI`.
    pub a_i: f64,
    /// Velocity coupling `aD`.
    pub a_d: f64,
    /// Gravitational coupling `aG`.
    pub a_g: f64,
    /// Internal field coupling `aF`.
    pub a_f: f64,
    /// Particle density scalar `N`.
    pub n: f64,
    /// Velocity in chart components `V^alpha`.
    pub v: [f64; 4],
}

impl ModelConstants {
    /// Velocity in tetrad components `V^r = sum_alpha O'_alpha^r V^alpha`.
    pub fn v_tetrad(&self, t: &Tetrad) -> [f64; 4] {
        t.to_frame(&self.v)
    }
}

/// Moments of a state tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    /// `J_k = -1/2 Tr(eta^kk psiR^* s_k psiR - psiL^* s_k psiL)`.
    pub j: [f64; 4],
    /// `P_a` with `<psi, k_a psi> = i P_a`.
    pub p: [f64; 6],
    /// `rho_a` with `<psi, psi theta_a^t> = i rho_a`.
    pub rho: Vec<f64>,
    /// `mu[a][r] = -<psi, g^r psi theta_a^t>`.
    pub mu: Vec<[f64; 4]>,
    /// `<psi, psi>`.
    pub norm: f64,
}

fn scale_of(psi: &StateTensor) -> f64 {
    let n = psi.psi().norm_fro();
    (n * n).max(1.0)
}

fn check_real(name: &'static str, residue: f64, scale: f64) -> Result<()> {
    if residue > REAL_TOLERANCE * scale {
        Err(Error::NonRealMoment { name, residue })
    } else {
        Ok(())
    }
}

/// The currents `J_k` from the chiral blocks.
pub fn current_j(psi: &StateTensor) -> [f64; 4] {
    current_j_checked(psi).0
}

fn current_j_checked(psi: &StateTensor) -> ([f64; 4], f64) {
    let (r, l) = (psi.psi_r(), psi.psi_l());
    let mut out = [0.0; 4];
    let mut residue: f64 = 0.0;
    for k in 0..4 {
        let s = pauli(k);
        let tr = (&(&r.adjoint() * &s) * &r).trace() * ETA[k] - (&(&l.adjoint() * &s) * &l).trace();
        let v = tr * -0.5;
        out[k] = v.re;
        residue = residue.max(v.im.abs());
    }
    (out, residue)
}

/// Chiral cross traces `p_k = Tr(psiR^* s_k psiL)`, `k = 1..3`.
pub fn chiral_cross(psi: &StateTensor) -> [C64; 3] {
    let (r, l) = (psi.psi_r(), psi.psi_l());
    core::array::from_fn(|k| (&(&r.adjoint() * &pauli(k + 1)) * &l).trace())
}

/// `sum_a P_a^2` evaluated as `sum_k |Tr(psiR^* s_k psiL)|^2`.
pub fn p_squared_from_cross(psi: &StateTensor) -> f64 {
    chiral_cross(psi).iter().map(|z| z.norm_sqr()).sum()
}

/// Moments `J`, `P`, `rho`, `mu` and the norm of a state tensor.
pub fn compute_moments(
    psi: &StateTensor,
    grp: &InternalGroup,
    g: &GammaBasis,
    gens: &SpinGenerators,
) -> Result<Moments> {
    if psi.m() != grp.dim() {
        return Err(Error::DimensionMismatch {
            context: "compute_moments",
            expected: grp.dim(),
            found: psi.m(),
        });
    }
    let scale = scale_of(psi);
    let x = psi.psi();

    let (j, res_j) = current_j_checked(psi);
    check_real("J", res_j, scale)?;

    let mut p = [0.0; 6];
    let mut res_p: f64 = 0.0;
    for (a, k) in gens.kappa.iter().enumerate() {
        let z = product_4xm(x, &(k * x));
        p[a] = z.im;
        res_p = res_p.max(z.re.abs());
    }
    check_real("P", res_p, scale)?;

    let n = grp.generator_count();
    let mut rho = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    let mut res_rho: f64 = 0.0;
    let mut res_mu: f64 = 0.0;
    for a in 0..n {
        let xt = x * &grp.theta(a).transpose();
        let z = product_4xm(x, &xt);
        rho.push(z.im);
        res_rho = res_rho.max(z.re.abs());
        let mut row = [0.0; 4];
        for (r, gr) in g.gamma_up.iter().enumerate() {
            let w = -product_4xm(x, &(gr * &xt));
            row[r] = w.re;
            res_mu = res_mu.max(w.im.abs());
        }
        mu.push(row);
    }
    check_real("rho", res_rho, scale)?;
    check_real("mu", res_mu, scale)?;

    let z = product_4xm(x, x);
    check_real("norm", z.im.abs(), scale)?;
    Ok(Moments {
        j,
        p,
        rho,
        mu,
        norm: z.re,
    })
}

/// Both sides of `Im <psi, g^r k_a psi> = ([J] k~_a)_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentIdentity {
    /// `lhs[a][r] = Im <psi, g^r k_a psi>`.
    pub lhs: [[f64; 4]; 6],
    /// `rhs[a][r] = ([J] k~_a)_r`.
    pub rhs: [[f64; 4]; 6],
    /// Largest difference.
    pub residual: f64,
}

/// Evaluates both sides of the `J`-identity independently.
pub fn moment_identity_check(
    psi: &StateTensor,
    so31: &So31Basis,
    g: &GammaBasis,
    gens: &SpinGenerators,
) -> MomentIdentity {
    let x = psi.psi();
    let j = current_j(psi);
    let mut lhs = [[0.0; 4]; 6];
    let mut rhs = [[0.0; 4]; 6];
    let mut residual: f64 = 0.0;
    for a in 0..6 {
        let kx = &gens.kappa[a] * x;
        let row = so31.row_times(&j, a);
        for r in 0..4 {
            lhs[a][r] = product_4xm(x, &(&g.gamma_up[r] * &kx)).im;
            rhs[a][r] = row[r];
            residual = residual.max((lhs[a][r] - rhs[a][r]).abs());
        }
    }
    MomentIdentity { lhs, rhs, residual }
}

/// `[T_G]^ar = sum_bc G_ac^b (d_{q_b}^r G_{p_b}^c - d_{p_b}^r G_{q_b}^c)`
/// for the potential in tetrad indices `g_tetrad[j][c] = G_j^c`.
pub fn t_g_contraction(g_tetrad: &[[f64; 6]; 4], so31: &So31Basis) -> [[f64; 4]; 6] {
    core::array::from_fn(|a| {
        core::array::from_fn(|r| {
            let mut s = 0.0;
            for b in 0..6 {
                for c in 0..6 {
                    let k = so31.g[a][c][b];
                    if k == 0.0 {
                        continue;
                    }
                    if Q[b] == r {
                        s += k * g_tetrad[P[b]][c];
                    }
                    if P[b] == r {
                        s -= k * g_tetrad[Q[b]][c];
                    }
                }
            }
            s
        })
    })
}

/// Matter part `N (aI ([J] k~_a)_r + aD V^r P_a)` shared by the
/// gravitational current and the momentum table `K`.
pub fn matter_source(mom: &Moments, c: &ModelConstants, t: &Tetrad, so31: &So31Basis) -> [[f64; 4]; 6] {
    let v = c.v_tetrad(t);
    core::array::from_fn(|a| {
        let row = so31.row_times(&mom.j, a);
        core::array::from_fn(|r| c.n * (c.a_i * row[r] + c.a_d * v[r] * mom.p[a]))
    })
}

/// Gravitational Noether current
/// `Y_G^ar = N (aI ([J] k~_a)_r + aD V^r P_a) + 2 aG [T_G]^ar`.
pub fn noether_current_g(
    mom: &Moments,
    c: &ModelConstants,
    t: &Tetrad,
    pot: &GaugePotentials,
    so31: &So31Basis,
) -> [[f64; 4]; 6] {
    let m = matter_source(mom, c, t, so31);
    let tg = t_g_contraction(&to_tetrad_indices(t, &pot.g), so31);
    core::array::from_fn(|a| core::array::from_fn(|r| m[a][r] + 2.0 * c.a_g * tg[a][r]))
}

/// Internal Noether currents in chart components,
/// `Y_A^a alpha = N (aD V^alpha rho_a - i aI sum_r O_r^alpha mu_a^r) + 2 aF sum_b [A_b, F_A^{alpha b}]^a`.
pub fn noether_current_a(
    mom: &Moments,
    c: &ModelConstants,
    t: &Tetrad,
    pot: &GaugePotentials,
    fa: &[TwoForm<C64>],
    grp: &InternalGroup,
) -> Result<Vec<[C64; 4]>> {
    let n = grp.generator_count();
    if fa.len() != n || mom.rho.len() != n || pot.internal_len() != n {
        return Err(Error::DimensionMismatch {
            context: "noether_current_a",
            expected: n,
            found: fa.len(),
        });
    }
    let (_, g_inv) = metric_from_tetrad(t)?;
    let up: Vec<[[C64; 4]; 4]> = fa.iter().map(|f| raise_two_form(f, &g_inv).to_full()).collect();
    let o = t.o();
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let mut y = [c64(0.0, 0.0); 4];
        for al in 0..4 {
            let mu_chart: f64 = (0..4).map(|r| o[al][r] * mom.mu[a][r]).sum();
            y[al] = c64(c.n * c.a_d * c.v[al] * mom.rho[a], -c.n * c.a_i * mu_chart);
        }
        out.push(y);
    }
    for al in 0..4 {
        for be in 0..4 {
            let f_ab: Vec<C64> = (0..n).map(|b| up[b][al][be]).collect();
            let br = grp.bracket(&pot.a[be], &f_ab);
            for a in 0..n {
                out[a][al] += br[a] * (2.0 * c.a_f);
            }
        }
    }
    Ok(out)
}

/// Superpotentials of the gravitational and internal fields.
#[derive(Clone, Debug, PartialEq)]
pub struct Superpotentials {
    /// `pi_g[a] = w_4(Z^a)`, without the factor `aG`.
    pub pi_g: [TwoForm<f64>; 6],
    /// `pi_a[a] = 4 aF * conj(F_A^a)`.
    pub pi_a: Vec<TwoForm<C64>>,
}

/// Bivectors `Z^a ab = 4 (O_{p_a}^b O_{q_a}^a - O_{q_a}^b O_{p_a}^a)`.
pub fn gravity_bivectors(t: &Tetrad) -> [TwoForm<f64>; 6] {
    let o = t.o();
    core::array::from_fn(|a| {
        let (p, q) = (P[a], Q[a]);
        TwoForm::from_fn(|al, be| 4.0 * (o[be][p] * o[al][q] - o[be][q] * o[al][p]))
    })
}

/// `Pi_G^a = w_4(Z^a)` and `Pi_A^a = 4 aF * conj(F_A^a)`.
pub fn superpotentials(t: &Tetrad, fa: &[TwoForm<C64>], c: &ModelConstants) -> Result<Superpotentials> {
    let z = gravity_bivectors(t);
    let pi_g = core::array::from_fn(|a| varpi4_bivector(&z[a], t.det_oprime()));
    let pi_a = fa
        .iter()
        .map(|f| hodge_dual_2form(&f.conj(), t).map(|h| h.map(|x| x * (4.0 * c.a_f))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Superpotentials { pi_g, pi_a })
}

/// All fields at one point, as consumed by the energy-momentum evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFields {
    /// Tetrad.
    pub tetrad: Tetrad,
    /// State tensor.
    pub psi: StateTensor,
    /// Covariant derivatives `nabla_alpha psi`.
    pub nabla: [CMatrix; 4],
    /// Gravitational curvature `F_G^a`.
    pub fg: [TwoForm<f64>; 6],
    /// Internal curvature `F_A^a`.
    pub fa: Vec<TwoForm<C64>>,
}

/// `sum_a conj(X^a) Y^a`.
fn pair_product(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(c64(0.0, 0.0), |s, (a, b)| s + a.conj() * b)
}

/// Full antisymmetric component matrices of a list of two-forms.
type FullForms = Vec<[[C64; 4]; 4]>;

fn full_forms(fa: &[TwoForm<C64>], g_inv: &Mat4) -> (FullForms, FullForms) {
    let low = fa.iter().map(TwoForm::to_full).collect();
    let up = fa.iter().map(|f| raise_two_form(f, g_inv).to_full()).collect();
    (low, up)
}

fn component(f: &[[[C64; 4]; 4]], x: usize, y: usize) -> Vec<C64> {
    f.iter().map(|m| m[x][y]).collect()
}

/// Chart gamma matrices `g^alpha = sum_r O_r^alpha g^r`.
pub fn chart_gammas(t: &Tetrad, g: &GammaBasis) -> [CMatrix; 4] {
    let o = t.o();
    core::array::from_fn(|al| {
        let mut m = CMatrix::zeros(4, 4);
        for r in 0..4 {
            m.axpy(c64(o[al][r], 0.0), &g.gamma_up[r]);
        }
        m
    })
}

/// The energy-momentum values `em[alpha][beta] = d_beta^alpha L`:
///
/// `aI N Im<psi, g^alpha nabla_beta psi> + 2 aF sum_g Re(F_A^{alpha g}, F_A beta g)
///  + 2 aG sum_{a l} F_G beta l^a (O_{p_a}^l O_{q_a}^alpha - O_{q_a}^l O_{p_a}^alpha)`.
pub fn energy_momentum(f: &PointFields, c: &ModelConstants, g: &GammaBasis) -> Result<Mat4> {
    let t = &f.tetrad;
    let (_, g_inv) = metric_from_tetrad(t)?;
    let (low, up) = full_forms(&f.fa, &g_inv);
    let gam = chart_gammas(t, g);
    let o = t.o();
    let x = f.psi.psi();
    let mut em = [[0.0; 4]; 4];
    for al in 0..4 {
        for be in 0..4 {
            let mut s = c.a_i * c.n * product_4xm(x, &(&gam[al] * &f.nabla[be])).im;
            for ga in 0..4 {
                s += 2.0 * c.a_f * pair_product(&component(&up, al, ga), &component(&low, be, ga)).re;
            }
            for (a, fga) in f.fg.iter().enumerate() {
                let (p, q) = (P[a], Q[a]);
                for la in 0..4 {
                    s += 2.0 * c.a_g * fga.get(be, la) * (o[la][p] * o[al][q] - o[la][q] * o[al][p]);
                }
            }
            em[al][be] = s;
        }
    }
    Ok(em)
}

/// Terms of the Lagrangian density at a point (without the volume factor).
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianTerms {
    /// `N (aM <psi,psi> + aI Im<psi, D psi> + aD sum V^alpha Im<psi, nabla_alpha psi>)`.
    pub matter: f64,
    /// `aF <F_A, F_A>`.
    pub field_a: f64,
    /// `aG R`.
    pub field_g: f64,
    /// Sum of the three terms.
    pub total: f64,
}

/// `sum_a G_2(F^a, F^a)`.
pub fn field_norm(fa: &[TwoForm<C64>], g_inv: &Mat4) -> f64 {
    fa.iter().map(|f| form_inner_product(f, f, g_inv).re).sum()
}

/// Matter Lagrangian without `N`:
/// `aM <psi,psi> + aI Im<psi, D psi> + aD sum V^alpha Im<psi, nabla_alpha psi>`.
pub fn matter_lagrangian(psi: &StateTensor, dirac: &CMatrix, nabla: &[CMatrix; 4], c: &ModelConstants) -> f64 {
    let x = psi.psi();
    let mut s = c.a_m * product_4xm(x, x).re + c.a_i * product_4xm(x, dirac).im;
    for al in 0..4 {
        s += c.a_d * c.v[al] * product_4xm(x, &nabla[al]).im;
    }
    s
}

/// Assembles the Lagrangian from its definition.
pub fn lagrangian(f: &PointFields, dirac: &CMatrix, c: &ModelConstants) -> Result<LagrangianTerms> {
    let (_, g_inv) = metric_from_tetrad(&f.tetrad)?;
    let matter = c.n * matter_lagrangian(&f.psi, dirac, &f.nabla, c);
    let field_a = c.a_f * field_norm(&f.fa, &g_inv);
    let field_g = c.a_g * scalar_curvature(&f.fg, &f.tetrad);
    Ok(LagrangianTerms {
        matter,
        field_a,
        field_g,
        total: matter + field_a + field_g,
    })
}

/// Symmetric stress-energy tensor of the metric formulation,
///
/// `T_ab = -1/2 g_ab L / aG
///   + (aF/aG) sum_lm Re(g_al (F_A bm, F_A^lm) + g_bl (F_A am, F_A^lm) - g^lm (F_A al, F_A bm))
///   + sum_alm (g_am F_G bl^a + g_bm F_G al^a + 1/2 g_ab F_G lm^a)(O_{q_a}^m O_{p_a}^l - O_{p_a}^m O_{q_a}^l)`.
pub fn stress_energy_gr(f: &PointFields, c: &ModelConstants, l: f64) -> Result<Mat4> {
    if c.a_g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let t = &f.tetrad;
    let (g, g_inv) = metric_from_tetrad(t)?;
    let (low, up) = full_forms(&f.fa, &g_inv);
    let o = t.o();
    let mut kernel = [[[0.0; 4]; 4]; 6];
    for (a, k) in kernel.iter_mut().enumerate() {
        let (p, q) = (P[a], Q[a]);
        for la in 0..4 {
            for m in 0..4 {
                k[la][m] = o[m][q] * o[la][p] - o[m][p] * o[la][q];
            }
        }
    }
    let mut out = [[0.0; 4]; 4];
    for al in 0..4 {
        for be in 0..4 {
            let mut s = -0.5 * g[al][be] * l / c.a_g;
            let mut sf = 0.0;
            for la in 0..4 {
                for m in 0..4 {
                    let up_lm = component(&up, la, m);
                    sf += g[al][la] * pair_product(&component(&low, be, m), &up_lm).re;
                    sf += g[be][la] * pair_product(&component(&low, al, m), &up_lm).re;
                    sf -= g_inv[la][m] * pair_product(&component(&low, al, la), &component(&low, be, m)).re;
                }
            }
            s += c.a_f / c.a_g * sf;
            for (a, fga) in f.fg.iter().enumerate() {
                for la in 0..4 {
                    for m in 0..4 {
                        let w =
                            g[al][m] * fga.get(be, la) + g[be][m] * fga.get(al, la) + 0.5 * g[al][be] * fga.get(la, m);
                        s += w * kernel[a][la][m];
                    }
                }
            }
            out[al][be] = s;
        }
    }
    Ok(out)
}

/// One eigenvalue of a block-diagonal generator with its eigenvectors in
/// `F+` and `F-`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBlock {
    /// Eigenvalue.
    pub value: C64,
    /// Unit eigenvector supported on rows 1-2.
    pub f_plus: [C64; 4],
    /// Unit eigenvector supported on rows 3-4.
    pub f_minus: [C64; 4],
}

/// Eigen decomposition of a generator along a direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryEigen {
    /// The two eigenspaces, the one with positive imaginary (or real) part first.
    pub blocks: [EigenBlock; 2],
    /// Largest `|K v - lambda v|` over the four vectors.
    pub residual: f64,
}

fn check_unit(r: &[f64; 3]) -> Result<()> {
    let norm = libm::sqrt(r.iter().map(|x| x * x).sum::<f64>());
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// Unit null vector of a singular 2x2 matrix, chosen from the better
/// conditioned row. The phase is fixed so that the component of larger
/// modulus is real and positive.
fn null_vector_2x2(m: [[C64; 2]; 2]) -> [C64; 2] {
    let v1 = [-m[0][1], m[0][0]];
    let v2 = [-m[1][1], m[1][0]];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    let lead = if v[0].norm_sqr() >= v[1].norm_sqr() { v[0] } else { v[1] };
    let s = lead.conj() / (libm::sqrt(n) * lead.norm());
    [clean_zero(v[0] * s), clean_zero(v[1] * s)]
}

/// Maps a signed zero to `+0` so exact comparisons are sign-agnostic in
/// printed output.
fn clean_zero(z: C64) -> C64 {
    c64(z.re + 0.0, z.im + 0.0)
}

fn block_eigen(k: &CMatrix, values: [C64; 2]) -> SymmetryEigen {
    let z = c64(0.0, 0.0);
    let blocks = values.map(|lam| {
        let vec_for = |off: usize| {
            let m = [
                [k[(off, off)] - lam, k[(off, off + 1)]],
                [k[(off + 1, off)], k[(off + 1, off + 1)] - lam],
            ];
            let v = null_vector_2x2(m);
            let mut out = [z; 4];
            out[off] = v[0];
            out[off + 1] = v[1];
            out
        };
        EigenBlock {
            value: lam,
            f_plus: vec_for(0),
            f_minus: vec_for(2),
        }
    });
    let mut residual: f64 = 0.0;
    for b in &blocks {
        for v in [&b.f_plus, &b.f_minus] {
            for i in 0..4 {
                let kv: C64 = (0..4).fold(z, |s, j| s + k[(i, j)] * v[j]);
                residual = residual.max((kv - b.value * v[i]).norm());
            }
        }
    }
    SymmetryEigen { blocks, residual }
}

/// `sum_{a=1..3} r^a k_a` for a spatial direction `r`.
pub fn rotation_generator(r: &[f64; 3], gens: &SpinGenerators) -> CMatrix {
    gens.combine(&[r[0], r[1], r[2], 0.0, 0.0, 0.0])
}

/// `sum_{a=1..3} r^a k_{a+3}` for a spatial direction `r`.
pub fn boost_generator(r: &[f64; 3], gens: &SpinGenerators) -> CMatrix {
    gens.combine(&[0.0, 0.0, 0.0, r[0], r[1], r[2]])
}

/// Eigen decomposition of the rotation generator about the unit vector `r`:
/// eigenvalues `+i/2` and `-i/2`, each with one eigenvector in `F+` and one
/// in `F-`.
pub fn spatial_symmetry_eigen(r: &[f64; 3], gens: &SpinGenerators) -> Result<SymmetryEigen> {
    check_unit(r)?;
    Ok(block_eigen(&rotation_generator(r, gens), [I * 0.5, -I * 0.5]))
}

/// Eigen decomposition of the boost generator along the unit vector `r`:
/// eigenvalues `+1/2` and `-1/2`.
pub fn boost_symmetry_eigen(r: &[f64; 3], gens: &SpinGenerators) -> Result<SymmetryEigen> {
    check_unit(r)?;
    Ok(block_eigen(&boost_generator(r, gens), [c64(0.5, 0.0), c64(-0.5, 0.0)]))
}
