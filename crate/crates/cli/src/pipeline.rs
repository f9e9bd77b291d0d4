//! Grid pipelines behind the field subcommands.
//!
//! Each pipeline builds first-order jets of the configured fields by finite
//! differences, evaluates library kernels at every point in parallel and
//! collects one [`Record`] per point in point order. Composite densities
//! whose divergence enters a residual (fluxes, curvature) are sampled on the
//! grid first and differentiated in a second pass.

use gaugeframe::algebra::{build_gamma_basis, build_spin_generators, GammaBasis, SpinGenerators, StateTensor};
use gaugeframe::fields::{
    affine_connection, covariant_derivative_state, curvature_a, curvature_g, dirac_from_nabla, max_abs4,
    metricity_residual, riemann_ricci_scalar, torsion, GaugePotentials, PotentialJet, StateJet,
};
use gaugeframe::geometry::{jacobi_residual, structure_coefficients, TetradJet, TwoForm};
use gaugeframe::lie::{build_so31, InternalGroup, So31Basis};
use gaugeframe::linalg::{c64, CMatrix, Mat4, C64};
use gaugeframe::moments::{compute_moments, matter_lagrangian, ModelConstants, Moments};
use gaugeframe::solver::{
    bianchi_residual, em_specialize, energy_conservation_residual, energy_flux, field_equation_residual_a,
    k_from_moments, particle_conservation_residual, particle_flux, scalar_curvature_model, solve_gravity,
    state_equation_residual, state_flux, superconservation_residual, temporal_gauge_constraints, torsion_from_solution,
    torsion_from_solution_shifted, trajectory_density, trajectory_residual, CurvatureJet, TrajectoryInputs,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::grid::{Gradient, Grid, Sampled, AXES};
use crate::report::{complex_form, complex_list, complex_matrix, real_form, Record, Report};

/// Fixed algebraic data shared by every point.
pub struct Algebra {
    /// Gamma matrices.
    pub gamma: GammaBasis,
    /// Spin generators.
    pub gens: SpinGenerators,
    /// o(3,1) basis.
    pub so31: So31Basis,
}

impl Algebra {
    /// Builds the fixed representation.
    pub fn new() -> Self {
        let gamma = build_gamma_basis();
        let gens = build_spin_generators(&gamma);
        Self {
            gamma,
            gens,
            so31: build_so31(),
        }
    }
}

impl Default for Algebra {
    fn default() -> Self {
        Self::new()
    }
}

fn mat4(s: &[f64]) -> Mat4 {
    core::array::from_fn(|i| core::array::from_fn(|j| s[4 * i + j]))
}

fn table4x6(s: &[f64]) -> [[f64; 6]; 4] {
    core::array::from_fn(|i| core::array::from_fn(|a| s[6 * i + a]))
}

fn complex_rows(s: &[f64], n: usize) -> [Vec<C64>; 4] {
    core::array::from_fn(|i| {
        (0..n)
            .map(|a| c64(s[2 * (n * i + a)], s[2 * (n * i + a) + 1]))
            .collect()
    })
}

fn complex_matrix_from(s: &[f64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| c64(s[2 * (cols * i + j)], s[2 * (cols * i + j) + 1]))
}

fn push_matrix(m: &CMatrix, out: &mut Vec<f64>) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
}

fn push_forms(forms: &[TwoForm<C64>], out: &mut Vec<f64>) {
    for f in forms {
        for z in &f.comp {
            out.push(z.re);
            out.push(z.im);
        }
    }
}

fn forms_from(s: &[f64], n: usize) -> Vec<TwoForm<C64>> {
    (0..n)
        .map(|a| TwoForm {
            comp: core::array::from_fn(|k| c64(s[12 * a + 2 * k], s[12 * a + 2 * k + 1])),
        })
        .collect()
}

fn at_point(p: usize, e: CliError) -> CliError {
    match e {
        CliError::Core(inner) => CliError::InvalidField {
            field: "fields".into(),
            reason: format!("at point {p}: {inner}"),
        },
        other => other,
    }
}

/// Evaluates `f` at every point in parallel, keeping point order.
fn sweep<T: Send>(grid: &Grid, f: impl Fn(usize) -> Result<T, CliError> + Sync) -> Result<Vec<T>, CliError> {
    (0..grid.len())
        .into_par_iter()
        .map(|p| f(p).map_err(|e| at_point(p, e)))
        .collect()
}

/// Sampled field plus its gradient.
struct Differentiated {
    values: Sampled,
    grad: Gradient,
}

impl Differentiated {
    fn new(values: Sampled, grid: &Grid) -> Self {
        let grad = values.gradient(grid);
        Self { values, grad }
    }
}

fn sample(grid: &Grid, ncomp: usize, rows: &[Vec<f64>]) -> Differentiated {
    let mut data = Vec::with_capacity(grid.len() * ncomp);
    for r in rows {
        data.extend_from_slice(r);
    }
    Differentiated::new(Sampled { ncomp, data }, grid)
}

fn tetrad_jets(cfg: &Config, grid: &Grid) -> Result<Vec<TetradJet>, CliError> {
    let d = Differentiated::new(cfg.require_field("tetrad")?.clone(), grid);
    sweep(grid, |p| {
        let op = mat4(d.values.at(p));
        let dop: [Mat4; AXES] = core::array::from_fn(|b| mat4(d.grad.at(p, b)));
        Ok(TetradJet::from_oprime_jet(op, dop)?)
    })
}

fn potential_jets(
    cfg: &Config,
    grid: &Grid,
    n: usize,
    require_g: bool,
    require_a: bool,
) -> Result<Vec<PotentialJet>, CliError> {
    let g = if require_g {
        Some(Differentiated::new(cfg.require_field("G")?.clone(), grid))
    } else {
        cfg.g.clone().map(|s| Differentiated::new(s, grid))
    };
    let a = if require_a {
        Some(Differentiated::new(cfg.require_field("A")?.clone(), grid))
    } else {
        cfg.a.clone().map(|s| Differentiated::new(s, grid))
    };
    sweep(grid, |p| {
        let mut jet = PotentialJet::constant(GaugePotentials::zero(n));
        if let Some(g) = &g {
            jet.potentials.g = table4x6(g.values.at(p));
            jet.dg = core::array::from_fn(|b| table4x6(g.grad.at(p, b)));
        }
        if let Some(a) = &a {
            jet.potentials.a = complex_rows(a.values.at(p), n);
            jet.da = core::array::from_fn(|b| complex_rows(a.grad.at(p, b), n));
        }
        Ok(jet)
    })
}

fn state_jets(cfg: &Config, grid: &Grid, m: usize) -> Result<Vec<StateJet>, CliError> {
    let d = Differentiated::new(cfg.require_field("psi")?.clone(), grid);
    sweep(grid, |p| {
        Ok(StateJet {
            psi: StateTensor::new(complex_matrix_from(d.values.at(p), 4, m))?,
            dpsi: core::array::from_fn(|b| complex_matrix_from(d.grad.at(p, b), 4, m)),
        })
    })
}

fn point_constants(cfg: &Config, p: usize) -> Result<ModelConstants, CliError> {
    let c = cfg.require_constants()?;
    let n = cfg.require_field("N")?.at(p)[0];
    let v = cfg.require_field("V")?.at(p);
    Ok(c.at(n, [v[0], v[1], v[2], v[3]]))
}

/// Internal curvature jets: `F_A` from the potential jets, differentiated on the grid.
fn curvature_jets(grid: &Grid, pjs: &[PotentialJet], grp: &InternalGroup) -> Result<Vec<CurvatureJet>, CliError> {
    let n = grp.generator_count();
    let rows = sweep(grid, |p| {
        let mut out = Vec::with_capacity(12 * n);
        push_forms(&curvature_a(&pjs[p], grp)?, &mut out);
        Ok(out)
    })?;
    let d = sample(grid, 12 * n, &rows);
    Ok((0..grid.len())
        .map(|p| CurvatureJet {
            fa: forms_from(d.values.at(p), n),
            dfa: core::array::from_fn(|b| forms_from(d.grad.at(p, b), n)),
        })
        .collect())
}

fn moments_at(psi: &StateTensor, grp: &InternalGroup, alg: &Algebra) -> Result<Moments, CliError> {
    Ok(compute_moments(psi, grp, &alg.gamma, &alg.gens)?)
}

fn moment_values(rec: &mut Record, mom: &Moments) {
    rec.put("J", json!(mom.j));
    rec.put("P", json!(mom.p));
    rec.put("rho", json!(mom.rho));
    rec.put("mu", json!(mom.mu));
    rec.put("norm", json!(mom.norm));
}

/// `moments`: `J`, `P`, `rho`, `mu` and the norm at every point.
pub fn run_moments(cfg: &Config, alg: &Algebra) -> Result<Report, CliError> {
    let grid = cfg.require_grid()?;
    let grp = cfg.require_group()?;
    let psi = cfg.require_field("psi")?;
    let m = grp.dim();
    let records = sweep(grid, |p| {
        let state = StateTensor::new(complex_matrix_from(psi.at(p), 4, m))?;
        let mom = moments_at(&state, grp, alg)?;
        let mut rec = Record::new(grid, p);
        moment_values(&mut rec, &mom);
        Ok(rec)
    })?;
    Ok(Report::new("moments", grid, records, &["norm"]))
}

/// `solve-gravity`: structure coefficients, momentum table and the solved
/// gravitational potential at every point.
pub fn run_solve_gravity(cfg: &Config, alg: &Algebra) -> Result<Report, CliError> {
    let grid = cfg.require_grid()?;
    let grp = cfg.require_group()?;
    cfg.require_constants()?;
    let tjs = tetrad_jets(cfg, grid)?;
    let psi = cfg.require_field("psi")?;
    let m = grp.dim();
    let records = sweep(grid, |p| {
        let tj = &tjs[p];
        let c = structure_coefficients(tj);
        let state = StateTensor::new(complex_matrix_from(psi.at(p), 4, m))?;
        let mom = moments_at(&state, grp, alg)?;
        let mc = point_constants(cfg, p)?;
        let k = k_from_moments(&mom, &mc, &tj.tetrad, &alg.so31)?;
        let sol = solve_gravity(&k, &c, &alg.so31)?;
        let mut rec = Record::new(grid, p);
        rec.put("structure_coefficients", json!(c.c));
        rec.put("jacobi_residual", json!(jacobi_residual(&c)));
        rec.put("K", json!(k.k));
        rec.put("G_tetrad", json!(sol.g));
        rec.put("G_chart", json!(sol.to_chart(&tj.tetrad)));
        rec.put("residual24", json!(sol.residual24));
        rec.put("dense_fallback", json!(sol.used_dense_fallback));
        rec.put("torsion", json!(torsion_from_solution(&k)));
        rec.put("torsion_shifted", json!(torsion_from_solution_shifted(&k, &c)));
        rec.put("temporal_gauge_constraints", json!(temporal_gauge_constraints(&k, &c)));
        Ok(rec)
    })?;
    Ok(Report::new(
        "solve-gravity",
        grid,
        records,
        &["residual24", "jacobi_residual"],
    ))
}

/// `curvature`: curvature forms, Riemann/Ricci/scalar curvature, torsion
/// and metricity at every point.
pub fn run_curvature(cfg: &Config, alg: &Algebra) -> Result<Report, CliError> {
    let grid = cfg.require_grid()?;
    let has_a = cfg.a.is_some();
    let n = if has_a {
        cfg.require_group()?.generator_count()
    } else {
        0
    };
    let tjs = tetrad_jets(cfg, grid)?;
    let pjs = potential_jets(cfg, grid, n, true, false)?;
    let records = sweep(grid, |p| {
        let tj = &tjs[p];
        let pj = &pjs[p];
        let fg = curvature_g(pj, &alg.so31);
        let curv = riemann_ricci_scalar(&fg, &tj.tetrad, &alg.so31)?;
        let c = structure_coefficients(tj);
        let gamma = affine_connection(tj, &pj.potentials, &alg.so31);
        let mut rec = Record::new(grid, p);
        rec.put("F_G", serde_json::Value::Array(fg.iter().map(real_form).collect()));
        if has_a {
            let fa = curvature_a(pj, cfg.require_group()?)?;
            rec.put("F_A", serde_json::Value::Array(fa.iter().map(complex_form).collect()));
        }
        rec.put("ricci", json!(curv.ricci));
        rec.put("scalar_curvature", json!(curv.scalar));
        rec.put("scalar_from_ricci", json!(curv.scalar_from_ricci));
        rec.put("scalar_route_difference", json!(curv.scalar - curv.scalar_from_ricci));
        rec.put("structure_coefficients", json!(c.c));
        rec.put("torsion", json!(torsion(tj, &pj.potentials, &alg.so31)));
        rec.put("metricity_residual", json!(max_abs4(&metricity_residual(tj, &gamma)?)));
        Ok(rec)
    })?;
    Ok(Report::new(
        "curvature",
        grid,
        records,
        &["metricity_residual", "scalar_route_difference"],
    ))
}

/// `em`: the U(1) reading of the internal field equation at every point.
pub fn run_em(cfg: &Config, alg: &Algebra) -> Result<Report, CliError> {
    let grid = cfg.require_grid()?;
    let grp = cfg.require_group()?;
    if !grp.is_u1() {
        return Err(gaugeframe::Error::NotU1.into());
    }
    cfg.require_constants()?;
    let tjs = tetrad_jets(cfg, grid)?;
    let pjs = potential_jets(cfg, grid, 1, false, true)?;
    let sjs = state_jets(cfg, grid, 1)?;
    let fjs = curvature_jets(grid, &pjs, grp)?;
    let records = sweep(grid, |p| {
        let mom = moments_at(&sjs[p].psi, grp, alg)?;
        let mc = point_constants(cfg, p)?;
        let r = em_specialize(&mom, &mc, &tjs[p], &pjs[p].potentials, &fjs[p], grp)?;
        let mut rec = Record::new(grid, p);
        rec.put("rho", json!(r.rho));
        rec.put("mu", json!(r.mu));
        rec.put("norm", json!(r.norm));
        rec.put("current", complex_list(&r.current));
        rec.put("source_residual", complex_list(&r.source_residual));
        rec.put("closure_residual", json!(r.closure_residual));
        rec.put("electric", json!(r.electric));
        rec.put("magnetic", json!(r.magnetic));
        rec.put("mu0", json!(r.mu0));
        Ok(rec)
    })?;
    Ok(Report::new(
        "em",
        grid,
        records,
        &["source_residual", "closure_residual"],
    ))
}

/// Pointwise quantities of the first pass of [`run_residuals`].
struct FirstPass {
    moments: Moments,
    constants: ModelConstants,
    nabla: [CMatrix; 4],
    dirac: CMatrix,
    l_m: f64,
}

/// `residuals`: every field-equation and conservation residual at every point.
pub fn run_residuals(cfg: &Config, alg: &Algebra) -> Result<Report, CliError> {
    let grid = cfg.require_grid()?;
    let grp = cfg.require_group()?;
    cfg.require_constants()?;
    let n = grp.generator_count();
    let m = grp.dim();
    let tjs = tetrad_jets(cfg, grid)?;
    let pjs = potential_jets(cfg, grid, n, true, true)?;
    let sjs = state_jets(cfg, grid, m)?;
    let fjs = curvature_jets(grid, &pjs, grp)?;

    let first = sweep(grid, |p| {
        let t = &tjs[p].tetrad;
        let nabla = covariant_derivative_state(&sjs[p], &pjs[p].potentials, &alg.gens, grp)?;
        let dirac = dirac_from_nabla(t, &nabla, &alg.gamma);
        let constants = point_constants(cfg, p)?;
        let l_m = matter_lagrangian(&sjs[p].psi, &dirac, &nabla, &constants);
        Ok(FirstPass {
            moments: moments_at(&sjs[p].psi, grp, alg)?,
            constants,
            nabla,
            dirac,
            l_m,
        })
    })?;

    // Densities whose coordinate derivatives enter the residuals.
    let flux_rows: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let f = &first[p];
            let t = &tjs[p].tetrad;
            let mut row = Vec::new();
            row.extend(particle_flux(&sjs[p].psi, t, &f.constants));
            row.extend(energy_flux(&f.moments.j, t, &f.constants));
            row.extend(trajectory_density(&sjs[p].psi, &f.nabla, t));
            row.extend(f.moments.j);
            for s in state_flux(&sjs[p].psi, t, &f.constants, &alg.gamma) {
                push_matrix(&s, &mut row);
            }
            row
        })
        .collect();
    let ncomp = 16 + 4 * 8 * m;
    let dens = sample(grid, ncomp, &flux_rows);
    let block = |p: usize, off: usize| -> [[f64; 4]; 4] {
        core::array::from_fn(|b| core::array::from_fn(|k| dens.grad.at(p, b)[off + k]))
    };

    let records = sweep(grid, |p| {
        let f = &first[p];
        let tj = &tjs[p];
        let pj = &pjs[p];
        let fj = &fjs[p];
        let t = &tj.tetrad;
        let d_particle = block(p, 0);
        let d_energy = block(p, 4);
        let d_h = block(p, 8);
        let d_j = block(p, 12);
        let mut div_state = CMatrix::zeros(4, m);
        for al in 0..AXES {
            let g = dens.grad.at(p, al);
            let off = 16 + al * 8 * m;
            div_state = &div_state + &complex_matrix_from(&g[off..off + 8 * m], 4, m);
        }

        let field = field_equation_residual_a(&f.moments, &f.constants, tj, &pj.potentials, fj, grp)?;
        let superc = superconservation_residual(tj, pj, fj, &f.constants)?;
        let state = state_equation_residual(
            &sjs[p].psi,
            &f.nabla,
            t,
            &pj.potentials,
            &f.constants,
            &alg.gens,
            grp,
            &alg.gamma,
            Some(&div_state),
        )?;
        let particle = particle_conservation_residual(Some(&d_particle))?;
        let energy = energy_conservation_residual(f.l_m, t, &f.constants, Some(&d_energy))?;
        let traj = trajectory_residual(
            &TrajectoryInputs {
                tetrad: tj,
                potentials: pj,
                moments: &f.moments,
                l_m: f.l_m,
                d_h: Some(&d_h),
                d_j: Some(&d_j),
            },
            &f.constants,
            &alg.so31,
        )?;

        let mut rec = Record::new(grid, p);
        rec.put(
            "field_equation",
            serde_json::Value::Array(field.iter().map(|row| complex_list(row)).collect()),
        );
        rec.put("superconservation", json!(superc));
        rec.put("state_equation", complex_matrix(&state));
        rec.put("particle_conservation", json!(particle));
        rec.put("energy_conservation", json!(energy));
        rec.put("trajectory", json!(traj));
        rec.put("bianchi", json!(bianchi_residual(fj)));
        rec.put("lagrangian_matter", json!(f.l_m));
        rec.put("dirac", complex_matrix(&f.dirac));
        let model_r = if f.constants.a_g == 0.0 {
            serde_json::Value::Null
        } else {
            json!(scalar_curvature_model(&sjs[p].psi, &f.dirac, &f.nabla, &f.constants)?)
        };
        rec.put("scalar_curvature_model", model_r);
        Ok(rec)
    })?;
    Ok(Report::new(
        "residuals",
        grid,
        records,
        &[
            "bianchi",
            "energy_conservation",
            "field_equation",
            "particle_conservation",
            "state_equation",
            "superconservation",
            "trajectory",
        ],
    ))
}
