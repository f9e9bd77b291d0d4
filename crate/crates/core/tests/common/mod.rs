//! Shared random generators for the integration tests.

#![allow(dead_code)]

use gaugeframe::algebra::StateTensor;
use gaugeframe::geometry::{StructureCoefficients, Tetrad, TetradJet};
use gaugeframe::linalg::{c64, CMatrix, Mat4};
use gaugeframe::solver::KTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(-1.0..1.0)
}

pub fn table6x4(r: &mut ChaCha8Rng) -> [[f64; 4]; 6] {
    core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))
}

pub fn table4x6(r: &mut ChaCha8Rng) -> [[f64; 6]; 4] {
    core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))
}

pub fn k_table(r: &mut ChaCha8Rng) -> KTable {
    KTable { k: table6x4(r) }
}

pub fn coefficients(r: &mut ChaCha8Rng) -> StructureCoefficients {
    StructureCoefficients::from_table(table6x4(r))
}

pub fn mat4(r: &mut ChaCha8Rng, scale: f64) -> Mat4 {
    core::array::from_fn(|_| core::array::from_fn(|_| scale * uniform(r)))
}

/// A tetrad `O' = I + 0.3 X` with positive determinant.
pub fn tetrad(r: &mut ChaCha8Rng) -> Tetrad {
    loop {
        let mut m = mat4(r, 0.3);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        if let Ok(t) = Tetrad::from_oprime(m) {
            return t;
        }
    }
}

/// A tetrad jet with random first derivatives of `O'`.
pub fn tetrad_jet(r: &mut ChaCha8Rng) -> TetradJet {
    let t = tetrad(r);
    let d: [Mat4; 4] = core::array::from_fn(|_| mat4(r, 0.5));
    TetradJet::from_oprime_jet(*t.oprime(), d).expect("non-singular")
}

pub fn cmatrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c64(uniform(r), uniform(r)))
}

pub fn state(r: &mut ChaCha8Rng, m: usize) -> StateTensor {
    StateTensor::new(cmatrix(r, 4, m)).expect("four rows")
}

pub fn max_abs_6x4(t: &[[f64; 4]; 6]) -> f64 {
    t.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_abs_4x6(t: &[[f64; 6]; 4]) -> f64 {
    t.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Smooth tetrad field `O'_ij(x) = d_ij + 0.3 sin(k_ij . x + phi_ij)` with
/// exact first derivatives.
pub struct SyntheticTetrad {
    k: [[[f64; 4]; 4]; 4],
    phase: [[f64; 4]; 4],
}

impl SyntheticTetrad {
    pub fn new(r: &mut ChaCha8Rng) -> Self {
        Self {
            k: core::array::from_fn(|_| core::array::from_fn(|_| core::array::from_fn(|_| uniform(r)))),
            phase: core::array::from_fn(|_| core::array::from_fn(|_| 3.0 * uniform(r))),
        }
    }

    fn arg(&self, i: usize, j: usize, x: &[f64; 4]) -> f64 {
        (0..4).map(|b| self.k[i][j][b] * x[b]).sum::<f64>() + self.phase[i][j]
    }

    pub fn oprime(&self, x: &[f64; 4]) -> Mat4 {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } + 0.3 * self.arg(i, j, x).sin())
        })
    }

    pub fn d_oprime(&self, x: &[f64; 4]) -> [Mat4; 4] {
        core::array::from_fn(|b| {
            core::array::from_fn(|i| core::array::from_fn(|j| 0.3 * self.arg(i, j, x).cos() * self.k[i][j][b]))
        })
    }

    pub fn jet(&self, x: &[f64; 4]) -> TetradJet {
        TetradJet::from_oprime_jet(self.oprime(x), self.d_oprime(x)).expect("near-identity tetrad")
    }
}

/// Builds a jet from the frame matrix `o[alpha][i] = O_i^alpha` and its
/// partials `d_o[beta]`.
pub fn jet_from_o(o: Mat4, d_o: [Mat4; 4]) -> TetradJet {
    let t = Tetrad::from_o(o).expect("invertible frame");
    let op = *t.oprime();
    let d_oprime: [Mat4; 4] = core::array::from_fn(|b| {
        let m = gaugeframe::linalg::mat4_mul(&gaugeframe::linalg::mat4_mul(&op, &d_o[b]), &op);
        m.map(|row| row.map(|v| -v))
    });
    TetradJet::from_oprime_jet(op, d_oprime).expect("invertible frame")
}

/// Frame `e0 = d0`, `e1 = d1`, `e2 = E (cos(w x1) d2 + sin(w x1) d3)`,
/// `e3 = E (-sin(w x1) d2 + cos(w x1) d3)` with `E = exp(p x0)`.
///
/// Its brackets are constant: `[e0, e2] = p e2`, `[e0, e3] = p e3`,
/// `[e1, e2] = w e3`, `[e1, e3] = -w e2`.
pub fn rotating_frame_jet(p: f64, w: f64, x: &[f64; 4]) -> TetradJet {
    let e = (p * x[0]).exp();
    let (s, c) = (w * x[1]).sin_cos();
    let mut o = [[0.0; 4]; 4];
    o[0][0] = 1.0;
    o[1][1] = 1.0;
    o[2][2] = e * c;
    o[3][2] = e * s;
    o[2][3] = -e * s;
    o[3][3] = e * c;
    let mut d0 = [[0.0; 4]; 4];
    let mut d1 = [[0.0; 4]; 4];
    for a in 2..4 {
        for i in 2..4 {
            d0[a][i] = p * o[a][i];
        }
    }
    d1[2][2] = -e * w * s;
    d1[3][2] = e * w * c;
    d1[2][3] = -e * w * c;
    d1[3][3] = -e * w * s;
    jet_from_o(o, [d0, d1, [[0.0; 4]; 4], [[0.0; 4]; 4]])
}
