//! Builders for synthetic configurations sampled from analytic fields.
#![allow(dead_code)]

use serde_json::{json, Value};

/// Grid description: shape, spacing, origin.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub shape: [usize; 4],
    pub spacing: [f64; 4],
    pub origin: [f64; 4],
}

impl GridSpec {
    pub fn cube(n: usize, h: f64, origin: [f64; 4]) -> Self {
        Self {
            shape: [n; 4],
            spacing: [h; 4],
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    /// Coordinates of every point in row-major order, `x^3` fastest.
    pub fn points(&self) -> Vec<[f64; 4]> {
        let mut out = Vec::with_capacity(self.len());
        for i0 in 0..self.shape[0] {
            for i1 in 0..self.shape[1] {
                for i2 in 0..self.shape[2] {
                    for i3 in 0..self.shape[3] {
                        let idx = [i0, i1, i2, i3];
                        out.push(core::array::from_fn(|b| {
                            self.origin[b] + idx[b] as f64 * self.spacing[b]
                        }));
                    }
                }
            }
        }
        out
    }

    pub fn grid_json(&self) -> Value {
        json!({"shape": self.shape, "spacing": self.spacing, "origin": self.origin})
    }

    /// Samples `f` at every point into a per-point list.
    pub fn sample(&self, f: impl Fn(&[f64; 4]) -> Value) -> Value {
        Value::Array(self.points().iter().map(f).collect())
    }
}

pub fn couplings(a_m: f64, a_i: f64, a_d: f64, a_g: f64, a_f: f64) -> Value {
    json!({"aM": a_m, "aI": a_i, "aD": a_d, "aG": a_g, "aF": a_f})
}

pub fn config(grid: &GridSpec, group: Value, constants: Value, fields: Value) -> Value {
    json!({
        "schema": 1,
        "internal_group": group,
        "constants": constants,
        "grid": grid.grid_json(),
        "fields": fields,
    })
}

/// Smooth inverse tetrad `O'_ij(x) = delta_ij + 0.3 sin(k_ij . x + phi_ij)`
/// with exact partial derivatives.
pub struct WaveTetrad {
    pub k: [[[f64; 4]; 4]; 4],
    pub phase: [[f64; 4]; 4],
}

impl WaveTetrad {
    pub fn fixed() -> Self {
        Self {
            k: core::array::from_fn(|i| {
                core::array::from_fn(|j| core::array::from_fn(|b| 0.4 + 0.15 * ((i + 2 * j + 3 * b) % 5) as f64))
            }),
            phase: core::array::from_fn(|i| core::array::from_fn(|j| 0.7 * i as f64 - 0.4 * j as f64)),
        }
    }

    fn arg(&self, i: usize, j: usize, x: &[f64; 4]) -> f64 {
        (0..4).map(|b| self.k[i][j][b] * x[b]).sum::<f64>() + self.phase[i][j]
    }

    pub fn oprime(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } + 0.3 * self.arg(i, j, x).sin())
        })
    }

    pub fn d_oprime(&self, x: &[f64; 4]) -> [[[f64; 4]; 4]; 4] {
        core::array::from_fn(|b| {
            core::array::from_fn(|i| core::array::from_fn(|j| 0.3 * self.arg(i, j, x).cos() * self.k[i][j][b]))
        })
    }
}

/// Largest entry of every numeric leaf below `v`.
pub fn max_abs(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap().abs(),
        Value::Array(items) => items.iter().map(max_abs).fold(0.0, f64::max),
        _ => 0.0,
    }
}

/// Flattens every numeric leaf below `v`.
pub fn leaves(v: &Value) -> Vec<f64> {
    match v {
        Value::Number(n) => vec![n.as_f64().unwrap()],
        Value::Array(items) => items.iter().flat_map(leaves).collect(),
        _ => Vec::new(),
    }
}

pub fn write_temp(name: &str, value: &Value) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("gaugeframe-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

/// Uniform-density U(1) Gauss-law configuration on a flat frame.
///
/// The state is `psi0 sqrt(1 + eps sin x1)` and the potential
/// `A_0 = -q (x1^2 / 2 - eps sin x1)`, so that `F_01 = q (x1 - eps cos x1)`
/// balances the charge density. `eps = 0` makes every field polynomial.
pub fn gauss_config(grid: &GridSpec, eps: f64) -> Value {
    let (a_m, a_i, a_d, a_g, a_f) = (0.7, 0.0, 1.3, 0.9, 0.8);
    let n = 1.1;
    let psi0 = [[0.3, -0.2], [0.5, 0.1], [-0.4, 0.6], [0.2, 0.25]];
    // <psi0, psi0> = -2 sum_i Im(conj(psi0_i) psi0_{i+2}).
    let n0: f64 = (0..2)
        .map(|i| {
            let (a, b) = (psi0[i], psi0[i + 2]);
            -2.0 * (a[0] * b[1] - a[1] * b[0])
        })
        .sum();
    let q = a_d * n * n0 / (2.0 * a_f);
    let flat = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    config(
        grid,
        json!("u1"),
        couplings(a_m, a_i, a_d, a_g, a_f),
        json!({
            "tetrad": flat,
            "N": n,
            "V": [1.0, 0.0, 0.0, 0.0],
            "A": grid.sample(|x| {
                let a0 = -q * (0.5 * x[1] * x[1] - eps * x[1].sin());
                json!([[[a0, 0.0]], [[0.0, 0.0]], [[0.0, 0.0]], [[0.0, 0.0]]])
            }),
            "psi": grid.sample(|x| {
                let s = (1.0 + eps * x[1].sin()).sqrt();
                Value::Array(psi0.iter().map(|z| json!([[z[0] * s, z[1] * s]])).collect())
            }),
        }),
    )
}
