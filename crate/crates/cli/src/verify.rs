//! The built-in verification suite.
//!
//! Each suite draws its random inputs from its own ChaCha stream seeded by
//! the run seed and the suite position, so suites can run in parallel and a
//! given seed always prints the same bytes. Suites report one metric that is
//! compared against a threshold: residual suites pass when the worst
//! residual is at most the tolerance, convergence suites when the worst
//! error ratio under step halving is at least the required ratio.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gaugeframe::algebra::{spin_exp, spin_to_so31, StateTensor};
use gaugeframe::fields::{
    affine_connection, connection_from_affine, max_abs4, metricity_residual, scalar_curvature, sub4, GaugePotentials,
    PotentialJet,
};
use gaugeframe::geometry::{
    det_derivative, form_inner_product, hodge_dual_2form, metric_from_tetrad, pair_slot, structure_coefficients,
    volume_density, wedge_2_2, StructureCoefficients, Tetrad, TetradJet, TwoForm,
};
use gaugeframe::lie::{su2_group, u1_group, InternalGroup};
use gaugeframe::linalg::{c64, mat4_det, mat4_inverse, mat4_mul, CMatrix, Mat4, I};
use gaugeframe::moments::{
    boost_symmetry_eigen, compute_moments, moment_identity_check, p_squared_from_cross, spatial_symmetry_eigen,
    ModelConstants,
};
use gaugeframe::solver::{
    field_equation_residual_a, gravity_equation_residual, solve_gravity, superconservation_residual,
    temporal_gauge_constraints, CurvatureJet, KTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::pipeline::Algebra;

/// How a suite metric is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// Pass when `metric <= threshold`.
    AtMost,
    /// Pass when `metric >= threshold`.
    AtLeast,
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    /// Suite name.
    pub name: &'static str,
    /// Number of individual checks performed.
    pub checks: usize,
    /// Worst residual, or worst convergence ratio.
    pub metric: f64,
    /// Threshold the metric is compared against.
    pub threshold: f64,
    /// Direction of the comparison.
    pub bound: Bound,
}

impl SuiteResult {
    /// Whether the suite passed; a non-finite metric always fails.
    pub fn passed(&self) -> bool {
        self.metric.is_finite()
            && match self.bound {
                Bound::AtMost => self.metric <= self.threshold,
                Bound::AtLeast => self.metric >= self.threshold,
            }
    }
}

/// Options of a verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Base seed of every random stream.
    pub seed: u64,
    /// Replaces the tolerance of every residual suite.
    pub tolerance: Option<f64>,
    /// Per-suite tolerance overrides.
    pub overrides: BTreeMap<String, f64>,
    /// Internal group for the moment suite in addition to the built-in ones.
    pub group: Option<InternalGroup>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            tolerance: None,
            overrides: BTreeMap::new(),
            group: None,
        }
    }
}

struct Ctx<'a> {
    alg: &'a Algebra,
    extra_group: Option<&'a InternalGroup>,
}

type SuiteFn = fn(&Ctx<'_>, &mut ChaCha8Rng) -> (usize, f64);

/// Suite table: name, comparison, default threshold, body.
const SUITES: [(&str, Bound, f64, SuiteFn); 12] = [
    ("clifford", Bound::AtMost, 1e-12, suite_clifford),
    ("spin", Bound::AtMost, 1e-9, suite_spin),
    ("geometry", Bound::AtMost, 1e-9, suite_geometry),
    ("geometry-convergence", Bound::AtLeast, 3.5, suite_geometry_convergence),
    ("connection", Bound::AtMost, 1e-9, suite_connection),
    ("curvature", Bound::AtMost, 1e-8, suite_curvature),
    ("moments", Bound::AtMost, 1e-10, suite_moments),
    ("gravity", Bound::AtMost, 1e-10, suite_gravity),
    ("symmetry", Bound::AtMost, 1e-10, suite_symmetry),
    ("electromagnetism", Bound::AtMost, 1e-12, suite_electromagnetism),
    ("vacuum", Bound::AtMost, 0.0, suite_vacuum),
    ("stencil-convergence", Bound::AtLeast, 3.5, suite_stencil_convergence),
];

/// Runs every suite and returns the results in table order.
pub fn run(opts: &VerifyOptions) -> Vec<SuiteResult> {
    let alg = Algebra::new();
    let ctx = Ctx {
        alg: &alg,
        extra_group: opts.group.as_ref(),
    };
    SUITES
        .par_iter()
        .enumerate()
        .map(|(i, &(name, bound, default, body))| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64));
            let (checks, metric) = body(&ctx, &mut rng);
            let threshold = match bound {
                Bound::AtMost => opts.overrides.get(name).copied().or(opts.tolerance).unwrap_or(default),
                Bound::AtLeast => opts.overrides.get(name).copied().unwrap_or(default),
            };
            SuiteResult {
                name,
                checks,
                metric,
                threshold,
                bound,
            }
        })
        .collect()
}

/// The printed table, one line per suite and a closing summary line.
pub fn render(results: &[SuiteResult], seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verification suite, seed {seed}");
    let _ = writeln!(
        out,
        "{:<22} {:>7} {:>12} {:>4} {:>10}  result",
        "suite", "checks", "metric", "", "threshold"
    );
    for r in results {
        let op = match r.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let _ = writeln!(
            out,
            "{:<22} {:>7} {:>12.3e} {:>4} {:>10.1e}  {}",
            r.name,
            r.checks,
            r.metric,
            op,
            r.threshold,
            if r.passed() { "PASS" } else { "FAIL" }
        );
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} of {} suites passed", results.len() - failed, results.len());
    out
}

fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(-1.0..1.0)
}

fn random_state(r: &mut ChaCha8Rng, m: usize) -> StateTensor {
    StateTensor::new(CMatrix::from_fn(4, m, |_, _| c64(uniform(r), uniform(r)))).expect("four rows")
}

fn random_tetrad(r: &mut ChaCha8Rng) -> Tetrad {
    loop {
        let m: Mat4 =
            core::array::from_fn(|i| core::array::from_fn(|j| 0.3 * uniform(r) + if i == j { 1.0 } else { 0.0 }));
        if let Ok(t) = Tetrad::from_oprime(m) {
            return t;
        }
    }
}

fn random_tetrad_jet(r: &mut ChaCha8Rng) -> TetradJet {
    let t = random_tetrad(r);
    let d: [Mat4; 4] = core::array::from_fn(|_| core::array::from_fn(|_| core::array::from_fn(|_| 0.5 * uniform(r))));
    TetradJet::from_oprime_jet(*t.oprime(), d).expect("non-singular")
}

fn table6x4(r: &mut ChaCha8Rng) -> [[f64; 4]; 6] {
    core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))
}

fn table4x6(r: &mut ChaCha8Rng) -> [[f64; 6]; 4] {
    core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))
}

fn real_form(r: &mut ChaCha8Rng) -> TwoForm<f64> {
    TwoForm {
        comp: core::array::from_fn(|_| uniform(r)),
    }
}

fn groups(extra: Option<&InternalGroup>) -> Vec<InternalGroup> {
    let u1_on_c3 = InternalGroup::new(vec![CMatrix::identity(3).scale(I)]).expect("u(1) on C^3");
    let mut g = vec![u1_group(), su2_group(), u1_on_c3];
    g.extend(extra.cloned());
    g
}

fn suite_clifford(ctx: &Ctx<'_>, _: &mut ChaCha8Rng) -> (usize, f64) {
    let g = &ctx.alg.gamma;
    let id = CMatrix::identity(4);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for i in 0..4 {
        for j in 0..4 {
            let anti = &(&g.gamma[i] * &g.gamma[j]) + &(&g.gamma[j] * &g.gamma[i]);
            let expect = id.scale_re(if i == j { 2.0 } else { 0.0 });
            worst = worst.max(anti.max_abs_diff(&expect));
            checks += 1;
        }
        worst = worst.max(g.gamma[i].max_abs_diff(&g.gamma[i].adjoint()));
        worst = worst.max((&g.gamma[i] * &g.gamma[i].adjoint()).max_abs_diff(&id));
        let anti5 = &(&g.gamma5 * &g.gamma[i]) + &(&g.gamma[i] * &g.gamma5);
        worst = worst.max(anti5.max_abs());
        checks += 3;
    }
    worst = worst.max((&g.gamma5 * &g.gamma5).max_abs_diff(&id));
    worst = worst.max((&g.gamma_plus + &g.gamma_minus).max_abs_diff(&id));
    worst = worst.max((&g.gamma_plus * &g.gamma_minus).max_abs());
    checks += 3;
    let k = &ctx.alg.gens.kappa;
    for a in 0..6 {
        let conj = &(&g.gamma[0] * &k[a]) * &g.gamma[0];
        worst = worst.max((&k[a].adjoint() + &conj).max_abs());
        checks += 1;
        for b in 0..6 {
            let mut expect = CMatrix::zeros(4, 4);
            for c in 0..6 {
                expect.axpy(c64(ctx.alg.so31.g[a][b][c], 0.0), &k[c]);
            }
            worst = worst.max(k[a].commutator(&k[b]).max_abs_diff(&expect));
            checks += 1;
        }
    }
    (checks, worst)
}

fn suite_spin(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let g = &ctx.alg.gamma;
    let gens = &ctx.alg.gens;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let tau: [f64; 6] = core::array::from_fn(|_| 4.0 * uniform(r));
        let s = spin_exp(&tau, gens);
        let form = &(&s.matrix().adjoint() * &g.gamma[0]) * s.matrix();
        worst = worst.max(form.max_abs_diff(&g.gamma[0]));
    }
    let turn = spin_exp(&[0.0, 0.0, 2.0 * std::f64::consts::PI, 0.0, 0.0, 0.0], gens);
    worst = worst.max(turn.matrix().max_abs_diff(&CMatrix::identity(4).scale_re(-1.0)));
    for _ in 0..100 {
        let tau: [f64; 6] = core::array::from_fn(|_| uniform(r));
        let s = spin_exp(&tau, gens);
        let (Ok(l1), Ok(l2)) = (spin_to_so31(&s, g), spin_to_so31(&s.negated(), g)) else {
            return (1101, f64::INFINITY);
        };
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((l1[i][j] - l2[i][j]).abs());
            }
        }
    }
    (1101, worst)
}

fn suite_geometry(_: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let t = random_tetrad(r);
        let Ok((g, g_inv)) = metric_from_tetrad(&t) else {
            return (0, f64::INFINITY);
        };
        let v = volume_density(&t);
        worst = worst.max((v * v - mat4_det(&g).abs()).abs() / v.powi(2).max(1.0));
        let lam = real_form(r);
        let mu = real_form(r);
        let (Ok(star), Ok(star2)) = (
            hodge_dual_2form(&lam, &t),
            hodge_dual_2form(&lam, &t).and_then(|s| hodge_dual_2form(&s, &t)),
        ) else {
            return (0, f64::INFINITY);
        };
        for k in 0..6 {
            worst = worst.max((star2.comp[k] + lam.comp[k]).abs());
        }
        let lhs = wedge_2_2(&mu, &star);
        let rhs = form_inner_product(&mu, &lam, &g_inv) * v;
        worst = worst.max((lhs - rhs).abs());
    }
    (1500, worst)
}

/// Smooth tetrad field `O'_ij(x) = d_ij + 0.3 sin(k_ij . x + phi_ij)`.
struct WaveTetrad {
    k: [[[f64; 4]; 4]; 4],
    phase: Mat4,
}

impl WaveTetrad {
    fn new(r: &mut ChaCha8Rng) -> Self {
        Self {
            k: core::array::from_fn(|_| core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))),
            phase: core::array::from_fn(|_| core::array::from_fn(|_| 3.0 * uniform(r))),
        }
    }

    fn arg(&self, i: usize, j: usize, x: &[f64; 4]) -> f64 {
        (0..4).map(|b| self.k[i][j][b] * x[b]).sum::<f64>() + self.phase[i][j]
    }

    fn oprime(&self, x: &[f64; 4]) -> Mat4 {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } + 0.3 * self.arg(i, j, x).sin())
        })
    }

    fn jet(&self, x: &[f64; 4]) -> Option<TetradJet> {
        let d: [Mat4; 4] = core::array::from_fn(|b| {
            core::array::from_fn(|i| core::array::from_fn(|j| 0.3 * self.arg(i, j, x).cos() * self.k[i][j][b]))
        });
        TetradJet::from_oprime_jet(self.oprime(x), d).ok()
    }
}

fn suite_geometry_convergence(_: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let mut worst = f64::INFINITY;
    let mut checks = 0;
    while checks < 20 {
        let field = WaveTetrad::new(r);
        let x: [f64; 4] = core::array::from_fn(|_| uniform(r));
        let Some(jet) = field.jet(&x) else { continue };
        let exact = det_derivative(&jet);
        let error = |h: f64| {
            (0..4)
                .map(|b| {
                    let mut xp = x;
                    let mut xm = x;
                    xp[b] += h;
                    xm[b] -= h;
                    let fd = (mat4_det(&field.oprime(&xp)) - mat4_det(&field.oprime(&xm))) / (2.0 * h);
                    (fd - exact[b]).abs()
                })
                .fold(0.0, f64::max)
        };
        worst = worst.min(error(0.1) / error(0.05));
        checks += 1;
    }
    (checks, worst)
}

fn suite_connection(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let so31 = &ctx.alg.so31;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let tj = random_tetrad_jet(r);
        let pot = GaugePotentials {
            g: table4x6(r),
            a: core::array::from_fn(|_| Vec::new()),
        };
        let gamma = affine_connection(&tj, &pot, so31);
        let Ok(res) = metricity_residual(&tj, &gamma) else {
            return (0, f64::INFINITY);
        };
        worst = worst.max(max_abs4(&res));
        let g_tilde = gaugeframe::fields::g_tilde(&pot.g, so31);
        let back = connection_from_affine(&tj, &gamma);
        worst = worst.max(max_abs4(&sub4(&back, &g_tilde)));
    }
    (2000, worst)
}

fn suite_curvature(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let so31 = &ctx.alg.so31;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let t = random_tetrad(r);
        let fg: [TwoForm<f64>; 6] = core::array::from_fn(|_| real_form(r));
        let Ok(c) = gaugeframe::fields::riemann_ricci_scalar(&fg, &t, so31) else {
            return (0, f64::INFINITY);
        };
        worst = worst.max((c.scalar - c.scalar_from_ricci).abs());

        let tau: [f64; 6] = core::array::from_fn(|_| uniform(r));
        let Ok(l) = spin_to_so31(&spin_exp(&tau, &ctx.alg.gens), &ctx.alg.gamma) else {
            return (0, f64::INFINITY);
        };
        let l_inv = mat4_inverse(&l).expect("Lorentz matrices are invertible");
        let Ok(moved) = Tetrad::from_o(mat4_mul(t.o(), &l)) else {
            return (0, f64::INFINITY);
        };
        let mut fg2: [TwoForm<f64>; 6] = Default::default();
        for al in 0..4 {
            for be in al + 1..4 {
                let x: [f64; 6] = core::array::from_fn(|a| fg[a].get(al, be));
                let y = so31.coordinates(&mat4_mul(&mat4_mul(&l_inv, &so31.combine(&x)), &l));
                let (slot, sign) = pair_slot(al, be).expect("distinct indices");
                for a in 0..6 {
                    fg2[a].comp[slot] = sign * y[a];
                }
            }
        }
        worst = worst.max((scalar_curvature(&fg, &t) - scalar_curvature(&fg2, &moved)).abs());
    }
    (400, worst)
}

fn suite_moments(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let alg = ctx.alg;
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for grp in groups(ctx.extra_group) {
        for _ in 0..300 {
            let psi = random_state(r, grp.dim());
            worst = worst.max(moment_identity_check(&psi, &alg.so31, &alg.gamma, &alg.gens).residual);
            let Ok(mom) = compute_moments(&psi, &grp, &alg.gamma, &alg.gens) else {
                return (checks, f64::INFINITY);
            };
            let direct: f64 = mom.p.iter().map(|p| p * p).sum();
            worst = worst.max((direct - p_squared_from_cross(&psi)).abs() / direct.max(1.0));
            checks += 3;
        }
    }
    (checks, worst)
}

fn suite_gravity(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let so31 = &ctx.alg.so31;
    let solve =
        |k: [[f64; 4]; 6], c: [[f64; 4]; 6]| solve_gravity(&KTable { k }, &StructureCoefficients::from_table(c), so31);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = table6x4(r);
        let c = table6x4(r);
        let Ok(sol) = solve(k, c) else {
            return (0, f64::INFINITY);
        };
        let res = gravity_equation_residual(&sol.g, &KTable { k }, &StructureCoefficients::from_table(c), so31);
        worst = worst.max(res.iter().flatten().fold(0.0, |m, x| m.max(x.abs())));
    }
    let mut c = [[0.0; 4]; 6];
    c[0][1] = 1.0;
    let Ok(example) = solve([[0.0; 4]; 6], c) else {
        return (0, f64::INFINITY);
    };
    let mut expect = [[0.0; 6]; 4];
    expect[1][0] = 0.5;
    expect[2][1] = -0.5;
    expect[3][2] = -0.5;
    if example.g != expect {
        return (1001, f64::INFINITY);
    }
    for _ in 0..100 {
        let (k1, k2, c1, c2) = (table6x4(r), table6x4(r), table6x4(r), table6x4(r));
        let add = |x: &[[f64; 4]; 6], y: &[[f64; 4]; 6]| -> [[f64; 4]; 6] {
            core::array::from_fn(|a| core::array::from_fn(|j| x[a][j] + y[a][j]))
        };
        let (Ok(whole), Ok(g1), Ok(g2)) = (solve(add(&k1, &k2), add(&c1, &c2)), solve(k1, c1), solve(k2, c2)) else {
            return (0, f64::INFINITY);
        };
        for i in 0..4 {
            for a in 0..6 {
                worst = worst.max((whole.g[i][a] - g1.g[i][a] - g2.g[i][a]).abs());
            }
        }
        let mut kt = KTable { k: k1 };
        let sc = StructureCoefficients::from_table(c1);
        let cons = temporal_gauge_constraints(&kt, &sc);
        for a in 0..6 {
            kt.k[a][0] -= cons[a];
        }
        let Ok(gauged) = solve_gravity(&kt, &sc, so31) else {
            return (0, f64::INFINITY);
        };
        worst = worst.max(gauged.g[0].iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    (1201, worst)
}

fn suite_symmetry(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v: [f64; 3] = core::array::from_fn(|_| uniform(r));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n < 1e-3 {
            continue;
        }
        let u = v.map(|x| x / n);
        let (Ok(rot), Ok(boost)) = (
            spatial_symmetry_eigen(&u, &ctx.alg.gens),
            boost_symmetry_eigen(&u, &ctx.alg.gens),
        ) else {
            return (0, f64::INFINITY);
        };
        worst = worst.max(rot.residual).max(boost.residual);
        worst = worst.max((rot.blocks[0].value - c64(0.0, 0.5)).norm());
        worst = worst.max((rot.blocks[1].value - c64(0.0, -0.5)).norm());
        worst = worst.max((boost.blocks[0].value - c64(0.5, 0.0)).norm());
        worst = worst.max((boost.blocks[1].value - c64(-0.5, 0.0)).norm());
    }
    (200, worst)
}

fn suite_electromagnetism(ctx: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    let grp = u1_group();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let psi = random_state(r, 1);
        let Ok(m) = compute_moments(&psi, &grp, &ctx.alg.gamma, &ctx.alg.gens) else {
            return (0, f64::INFINITY);
        };
        worst = worst.max((m.rho[0] - m.norm).abs());
        for k in 0..4 {
            worst = worst.max((m.mu[0][k] + 2.0 * m.j[k]).abs());
        }
    }
    (2500, worst)
}

fn suite_vacuum(ctx: &Ctx<'_>, _: &mut ChaCha8Rng) -> (usize, f64) {
    let grp = u1_group();
    let c = ModelConstants {
        a_m: 1.0,
        a_i: 1.0,
        a_d: 1.0,
        a_g: 1.0,
        a_f: 1.0,
        n: 1.0,
        v: [1.0, 0.0, 0.0, 0.0],
    };
    let tj = TetradJet::constant(Tetrad::flat());
    let pot = GaugePotentials::zero(1);
    let pj = PotentialJet::constant(pot.clone());
    let fj = CurvatureJet::constant(vec![TwoForm::zero()]);
    let psi = StateTensor::zeros(1);
    let Ok(mom) = compute_moments(&psi, &grp, &ctx.alg.gamma, &ctx.alg.gens) else {
        return (0, f64::INFINITY);
    };
    let mut worst: f64 = 0.0;
    match field_equation_residual_a(&mom, &c, &tj, &pot, &fj, &grp) {
        Ok(res) => worst = worst.max(res[0].iter().fold(0.0, |m, z| m.max(z.norm()))),
        Err(_) => return (0, f64::INFINITY),
    }
    match superconservation_residual(&tj, &pj, &fj, &c) {
        Ok(res) => worst = worst.max(res.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))),
        Err(_) => return (0, f64::INFINITY),
    }
    let sc = structure_coefficients(&tj);
    match solve_gravity(&KTable::zero(), &sc, &ctx.alg.so31) {
        Ok(sol) => worst = worst.max(sol.g.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))),
        Err(_) => return (0, f64::INFINITY),
    }
    (3, worst)
}

/// Convergence of the grid gradient on a smooth field, interior and boundary.
fn suite_stencil_convergence(_: &Ctx<'_>, r: &mut ChaCha8Rng) -> (usize, f64) {
    use crate::grid::{Grid, Sampled};
    let w: [f64; 4] = core::array::from_fn(|_| 0.5 + 0.5 * uniform(r).abs());
    let phase = uniform(r);
    let f = |x: &[f64; 4]| (w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3] + phase).sin();
    let df = |x: &[f64; 4], b: usize| w[b] * (w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3] + phase).cos();
    let error = |n: usize| {
        let h = 0.4 / (n - 1) as f64;
        let Ok(grid) = Grid::new([n; 4], [h; 4], [0.0; 4]) else {
            return f64::INFINITY;
        };
        let s = Sampled::from_fn(grid.len(), 1, |p| vec![f(&grid.coords(p))]);
        let g = s.gradient(&grid);
        (0..grid.len())
            .flat_map(|p| (0..4).map(move |b| (p, b)))
            .map(|(p, b)| (g.at(p, b)[0] - df(&grid.coords(p), b)).abs())
            .fold(0.0, f64::max)
    };
    (2, error(5) / error(9))
}
