//! Pointwise tetrad geometry.
//!
//! A tetrad is stored as the pair `O`, `O'` of mutually inverse real 4x4
//! matrices with
//!
//! * `o[alpha][i] = O_i^alpha`: column `i` is the frame vector `d_i` in
//!   chart components,
//! * `oprime[i][alpha] = O'_alpha^i`: row `i` is the dual covector `d^i`.
//!
//! Greek indices label chart coordinates, Latin indices label frame
//! directions, both running over `0..4`.
//!
//! Exterior forms use the convention without `1/r!` factors:
//! `dx^a ^ dx^b = dx^a (x) dx^b - dx^b (x) dx^a`. Two-forms are stored on
//! the six pairs `(01, 02, 03, 32, 13, 21)`, the ordering induced by the
//! generator table of [`crate::lie`].

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::lie::{pair_index, P, Q};
use crate::linalg::{mat4_det, mat4_inverse, mat4_mul, mat4_trace, mat4_transpose, Mat4, C64, ETA};

/// Determinant threshold below which a tetrad is rejected.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Scalars admitted as form components.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + From<f64>
{
    /// Complex conjugate (identity for reals).
    fn conj(self) -> Self;
    /// Largest of the absolute real and imaginary parts.
    fn max_abs(self) -> f64;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }

    fn max_abs(self) -> f64 {
        self.abs()
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        C64::conj(&self)
    }

    fn max_abs(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

/// A tetrad at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Tetrad {
    o: Mat4,
    oprime: Mat4,
    det_oprime: f64,
}

impl Tetrad {
    /// Builds the tetrad from `O'`, rejecting degenerate or reversed frames.
    pub fn from_oprime(oprime: Mat4) -> Result<Self> {
        let det = mat4_det(&oprime);
        if det.abs() < SINGULAR_THRESHOLD || !det.is_finite() {
            return Err(Error::SingularTetrad { det });
        }
        if det < 0.0 {
            return Err(Error::NegativeOrientation { det });
        }
        let o = mat4_inverse(&oprime).ok_or(Error::SingularTetrad { det })?;
        Ok(Self {
            o,
            oprime,
            det_oprime: det,
        })
    }

    /// Builds the tetrad from `O`.
    pub fn from_o(o: Mat4) -> Result<Self> {
        let det_o = mat4_det(&o);
        if det_o.abs() < SINGULAR_THRESHOLD || !det_o.is_finite() {
            return Err(Error::SingularTetrad { det: det_o });
        }
        let oprime = mat4_inverse(&o).ok_or(Error::SingularTetrad { det: det_o })?;
        Self::from_oprime(oprime)
    }

    /// The canonical flat frame `O = O' = I`.
    pub fn flat() -> Self {
        let id = crate::linalg::mat4_identity();
        Self {
            o: id,
            oprime: id,
            det_oprime: 1.0,
        }
    }

    /// `o[alpha][i] = O_i^alpha`.
    pub fn o(&self) -> &Mat4 {
        &self.o
    }

    /// `oprime[i][alpha] = O'_alpha^i`.
    pub fn oprime(&self) -> &Mat4 {
        &self.oprime
    }

    /// `det O'`.
    pub fn det_oprime(&self) -> f64 {
        self.det_oprime
    }

    /// Chart components of a frame vector: `sum_i v^i O_i^alpha`.
    pub fn to_chart(&self, v: &[f64; 4]) -> [f64; 4] {
        core::array::from_fn(|alpha| (0..4).map(|i| self.o[alpha][i] * v[i]).sum())
    }

    /// Frame components of a chart vector: `sum_alpha O'_alpha^i V^alpha`.
    pub fn to_frame(&self, v: &[f64; 4]) -> [f64; 4] {
        core::array::from_fn(|i| (0..4).map(|alpha| self.oprime[i][alpha] * v[alpha]).sum())
    }
}

/// A tetrad together with its first partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct TetradJet {
    /// Value at the point.
    pub tetrad: Tetrad,
    /// `d_oprime[beta] = d_beta O'`.
    pub d_oprime: [Mat4; 4],
    /// `d_o[beta] = d_beta O`.
    pub d_o: [Mat4; 4],
}

impl TetradJet {
    /// Builds the jet from `O'` and its partials; `d O = -O (d O') O`.
    pub fn from_oprime_jet(oprime: Mat4, d_oprime: [Mat4; 4]) -> Result<Self> {
        let tetrad = Tetrad::from_oprime(oprime)?;
        let d_o = core::array::from_fn(|beta| {
            let m = mat4_mul(&mat4_mul(&tetrad.o, &d_oprime[beta]), &tetrad.o);
            m.map(|row| row.map(|x| -x))
        });
        Ok(Self { tetrad, d_oprime, d_o })
    }

    /// A jet with vanishing derivatives.
    pub fn constant(tetrad: Tetrad) -> Self {
        Self {
            tetrad,
            d_oprime: [[[0.0; 4]; 4]; 4],
            d_o: [[[0.0; 4]; 4]; 4],
        }
    }

    /// Largest entry of `d(O O') = dO O' + O dO'` over the four directions.
    pub fn consistency_residual(&self) -> f64 {
        let t = &self.tetrad;
        (0..4)
            .map(|b| {
                let m = crate::linalg::mat4_add(&mat4_mul(&self.d_o[b], &t.oprime), &mat4_mul(&t.o, &self.d_oprime[b]));
                crate::linalg::mat4_max_abs(&m)
            })
            .fold(0.0, f64::max)
    }

    /// `d_beta O_i^alpha`.
    pub fn d_o_entry(&self, beta: usize, i: usize, alpha: usize) -> f64 {
        self.d_o[beta][alpha][i]
    }
}

/// Metric `g_ab = sum eta_jk O'_a^j O'_b^k` and its inverse
/// `g^ab = sum eta^jk O_j^a O_k^b`.
pub fn metric_from_tetrad(t: &Tetrad) -> Result<(Mat4, Mat4)> {
    if mat4_det(&t.o).abs() < SINGULAR_THRESHOLD {
        return Err(Error::SingularTetrad { det: t.det_oprime });
    }
    let mut g = [[0.0; 4]; 4];
    let mut g_inv = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for j in 0..4 {
                g[a][b] += ETA[j] * t.oprime[j][a] * t.oprime[j][b];
                g_inv[a][b] += ETA[j] * t.o[a][j] * t.o[b][j];
            }
        }
    }
    Ok((g, g_inv))
}

/// Volume density `det O' = sqrt(|det g|)`.
pub fn volume_density(t: &Tetrad) -> f64 {
    t.det_oprime
}

/// `d_alpha det O' = det O' Tr(O d_alpha O')`.
pub fn det_derivative(j: &TetradJet) -> [f64; 4] {
    core::array::from_fn(|alpha| j.tetrad.det_oprime * mat4_trace(&mat4_mul(&j.tetrad.o, &j.d_oprime[alpha])))
}

/// Structure coefficients of the frame, `[d_p, d_q] = sum_r c_pq^r d_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureCoefficients {
    /// `c[a][r] = c_{p_a q_a}^r`.
    pub c: [[f64; 4]; 6],
    /// Divergences `D_i = sum_j c_ji^j`.
    pub d: [f64; 4],
}

impl StructureCoefficients {
    /// Wraps a coefficient table and computes its divergences.
    pub fn from_table(c: [[f64; 4]; 6]) -> Self {
        let mut s = Self { c, d: [0.0; 4] };
        s.d = core::array::from_fn(|i| (0..4).map(|j| s.cpq(j, i, j)).sum());
        s
    }

    /// Antisymmetric access `c_pq^r`.
    pub fn cpq(&self, p: usize, q: usize, r: usize) -> f64 {
        pair_index(p, q).map_or(0.0, |(a, sign)| sign * self.c[a][r])
    }

    /// Divergences expanded on the coefficient table:
    ///
    /// * `D_0 = -c_4^1 - c_5^2 - c_6^3`
    /// * `D_1 = c_4^0 + c_3^2 - c_2^3`
    /// * `D_2 = c_5^0 - c_3^1 + c_1^3`
    /// * `D_3 = c_6^0 + c_2^1 - c_1^2`
    pub fn divergence_expanded(&self) -> [f64; 4] {
        let c = |a: usize, r: usize| self.c[a - 1][r];
        [
            -c(4, 1) - c(5, 2) - c(6, 3),
            c(4, 0) + c(3, 2) - c(2, 3),
            c(5, 0) - c(3, 1) + c(1, 3),
            c(6, 0) + c(2, 1) - c(1, 2),
        ]
    }
}

/// `c_lk^i = sum O'_b^i (O_l^a d_a O_k^b - O_k^a d_a O_l^b)`.
pub fn structure_coefficients(j: &TetradJet) -> StructureCoefficients {
    let t = &j.tetrad;
    let bracket = |l: usize, k: usize, i: usize| -> f64 {
        let mut s = 0.0;
        for b in 0..4 {
            let mut v = 0.0;
            for a in 0..4 {
                v += t.o[a][l] * j.d_o_entry(a, k, b) - t.o[a][k] * j.d_o_entry(a, l, b);
            }
            s += t.oprime[i][b] * v;
        }
        s
    };
    let c = core::array::from_fn(|a| core::array::from_fn(|r| bracket(P[a], Q[a], r)));
    StructureCoefficients::from_table(c)
}

/// Jacobi identities in matrix form, `M(c) C = 0`, for frames with
/// constant coefficients and `c_a^0 = 0`.
///
/// `C` is the 6x3 table `c_a^k`, `k = 1..3`, and the rows of `M` are
///
/// ```text
/// [ D_1            D_2             D_3            0      0      0     ]
/// [ c5^2 + c6^3   -c5^1           -c6^1          -c1^1  -c1^2  -c1^3  ]
/// [ c4^2          -(c4^1 + c6^3)   c6^2           c2^1   c2^2   c2^3  ]
/// [ -c4^3         -c5^3            c4^1 + c5^2   -c3^1  -c3^2  -c3^3  ]
/// ```
///
/// with `D_1 = c3^2 - c2^3`, `D_2 = c1^3 - c3^1`, `D_3 = c2^1 - c1^2`.
/// Each row reproduces one cyclic identity over a triple of frame vectors.
pub fn jacobi_residual(s: &StructureCoefficients) -> [[f64; 3]; 4] {
    let c = |a: usize, r: usize| s.c[a - 1][r];
    let m: [[f64; 6]; 4] = [
        [c(3, 2) - c(2, 3), c(1, 3) - c(3, 1), c(2, 1) - c(1, 2), 0.0, 0.0, 0.0],
        [c(6, 3) + c(5, 2), -c(5, 1), -c(6, 1), -c(1, 1), -c(1, 2), -c(1, 3)],
        [c(4, 2), -(c(4, 1) + c(6, 3)), c(6, 2), c(2, 1), c(2, 2), c(2, 3)],
        [-c(4, 3), -c(5, 3), c(4, 1) + c(5, 2), -c(3, 1), -c(3, 2), -c(3, 3)],
    ];
    core::array::from_fn(|row| core::array::from_fn(|k| (0..6).map(|a| m[row][a] * c(a + 1, k + 1)).sum()))
}

/// Largest violation of the quadratic Jacobi identities
/// `sum_i (c_bc^i c_ai^d + c_ca^i c_bi^d + c_ab^i c_ci^d) = 0`
/// over all frame triples and components.
///
/// For a frame whose coefficients vary, the identities also carry
/// derivatives of `c`; this check is exact only for constant coefficients.
pub fn jacobi_identity_defect(s: &StructureCoefficients) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v: f64 = (0..4)
                        .map(|i| {
                            s.cpq(b, c, i) * s.cpq(a, i, d)
                                + s.cpq(c, a, i) * s.cpq(b, i, d)
                                + s.cpq(a, b, i) * s.cpq(c, i, d)
                        })
                        .sum();
                    worst = worst.max(v.abs());
                }
            }
        }
    }
    worst
}

/// Index pairs of the canonical two-form storage order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (3, 2), (1, 3), (2, 1)];

/// Position of the pair `{a, b}` in [`PAIRS`] with its orientation sign.
pub fn pair_slot(a: usize, b: usize) -> Option<(usize, f64)> {
    PAIRS.iter().enumerate().find_map(|(k, &(x, y))| {
        if (x, y) == (a, b) {
            Some((k, 1.0))
        } else if (y, x) == (a, b) {
            Some((k, -1.0))
        } else {
            None
        }
    })
}

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)`, zero on repeats.
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut v = idx;
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if v[i] == v[j] {
                return 0.0;
            }
        }
    }
    for i in 0..4 {
        while v[i] != i {
            let k = v[i];
            if k > 3 {
                return 0.0;
            }
            v.swap(i, k);
            sign = -sign;
        }
    }
    sign
}

/// A two-form on the canonical pairs `(01, 02, 03, 32, 13, 21)`.
///
/// The same container holds bivectors when the components are read with
/// upper indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoForm<T> {
    /// Components in [`PAIRS`] order.
    pub comp: [T; 6],
}

impl<T: Scalar> Default for TwoForm<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> TwoForm<T> {
    /// The zero form.
    pub fn zero() -> Self {
        Self {
            comp: [T::default(); 6],
        }
    }

    /// Samples an antisymmetric function of two indices on the canonical pairs.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self {
            comp: core::array::from_fn(|k| f(PAIRS[k].0, PAIRS[k].1)),
        }
    }

    /// Antisymmetric component `lambda_ab`.
    pub fn get(&self, a: usize, b: usize) -> T {
        match pair_slot(a, b) {
            Some((k, s)) => self.comp[k] * T::from(s),
            None => T::default(),
        }
    }

    /// Full antisymmetric 4x4 array.
    pub fn to_full(&self) -> [[T; 4]; 4] {
        core::array::from_fn(|a| core::array::from_fn(|b| self.get(a, b)))
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.comp.iter().fold(0.0, |m, x| m.max(x.max_abs()))
    }

    /// Entrywise map.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> TwoForm<U> {
        TwoForm { comp: self.comp.map(f) }
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        self.map(T::conj)
    }
}

/// Raises both indices, `lambda^ab = sum g^ac g^bd lambda_cd`.
pub fn raise_two_form<T: Scalar>(lam: &TwoForm<T>, g_inv: &Mat4) -> TwoForm<T> {
    let full = lam.to_full();
    TwoForm::from_fn(|a, b| {
        let mut s = T::default();
        for c in 0..4 {
            for d in 0..4 {
                s = s + T::from(g_inv[a][c] * g_inv[b][d]) * full[c][d];
            }
        }
        s
    })
}

/// Lowers both indices of a bivector with `g`.
pub fn lower_two_form<T: Scalar>(z: &TwoForm<T>, g: &Mat4) -> TwoForm<T> {
    raise_two_form(z, g)
}

/// Hodge dual of a two-form in the chart,
///
/// `*lambda = -{l^32 dx01 + l^13 dx02 + l^21 dx03 + l^01 dx32 + l^02 dx13 + l^03 dx21} det O'`,
///
/// which in the canonical storage is `out[k] = -det O' raised[(k + 3) % 6]`.
pub fn hodge_dual_2form<T: Scalar>(lam: &TwoForm<T>, t: &Tetrad) -> Result<TwoForm<T>> {
    let (_, g_inv) = metric_from_tetrad(t)?;
    let up = raise_two_form(lam, &g_inv);
    let det = T::from(-t.det_oprime);
    Ok(TwoForm {
        comp: core::array::from_fn(|k| det * up.comp[(k + 3) % 6]),
    })
}

/// `G_2(lambda, mu) = sum_{a<b} conj(lambda_ab) mu^ab`.
pub fn form_inner_product<T: Scalar>(lam: &TwoForm<T>, mu: &TwoForm<T>, g_inv: &Mat4) -> T {
    let up = raise_two_form(mu, g_inv);
    (0..6).fold(T::default(), |s, k| s + lam.comp[k].conj() * up.comp[k])
}

/// `G_1(lambda, mu) = sum conj(lambda_a) g^ab mu_b`.
pub fn form_inner_product_1<T: Scalar>(lam: &[T; 4], mu: &[T; 4], g_inv: &Mat4) -> T {
    let mut s = T::default();
    for a in 0..4 {
        for b in 0..4 {
            s = s + lam[a].conj() * T::from(g_inv[a][b]) * mu[b];
        }
    }
    s
}

/// A three-form stored by omitted index: `comp[j]` is the coefficient of
/// `dx^0 ^ .. (no dx^j) .. ^ dx^3` with the remaining indices increasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeForm<T> {
    /// Components by omitted index.
    pub comp: [T; 4],
}

fn complement(j: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for i in 0..4 {
        if i != j {
            out[k] = i;
            k += 1;
        }
    }
    out
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Hodge dual of a one-form as displayed in the chart,
/// `*(sum l_a dx^a) = sum_a (-1)^(a+1) g^ab l_b det O' dx^0 ^ .. (no dx^a) .. ^ dx^3`.
///
/// With this sign convention `mu ^ *lambda = -G_1(mu, lambda) w_4`.
pub fn hodge_dual_1form<T: Scalar>(lam: &[T; 4], t: &Tetrad) -> Result<ThreeForm<T>> {
    let (_, g_inv) = metric_from_tetrad(t)?;
    Ok(ThreeForm {
        comp: core::array::from_fn(|a| {
            let sign = if a % 2 == 0 { -1.0 } else { 1.0 };
            let up = (0..4).fold(T::default(), |s, b| s + T::from(g_inv[a][b]) * lam[b]);
            T::from(sign * t.det_oprime) * up
        }),
    })
}

/// Hodge dual of a three-form, the chart version of the frame display
/// `*(sum_j l_(no j) d^0 .. d^3) = sum_j (-1)^(j+1) l^(no j) d^j`,
/// with the indices raised by the minors of `g^-1` and a factor `det O'`.
pub fn hodge_dual_3form<T: Scalar>(lam: &ThreeForm<T>, t: &Tetrad) -> Result<[T; 4]> {
    let (_, g_inv) = metric_from_tetrad(t)?;
    Ok(core::array::from_fn(|j| {
        let rows = complement(j);
        let up = (0..4).fold(T::default(), |s, k| {
            let cols = complement(k);
            let minor = det3(core::array::from_fn(|x| {
                core::array::from_fn(|y| g_inv[rows[x]][cols[y]])
            }));
            s + T::from(minor) * lam.comp[k]
        });
        let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
        T::from(sign * t.det_oprime) * up
    }))
}

/// Coefficient of `dx^0 ^ dx^1 ^ dx^2 ^ dx^3` in `mu ^ nu` for two-forms.
pub fn wedge_2_2<T: Scalar>(mu: &TwoForm<T>, nu: &TwoForm<T>) -> T {
    let mut s = T::default();
    for a in 0..4 {
        for b in a + 1..4 {
            for c in 0..4 {
                for d in c + 1..4 {
                    let e = levi_civita([a, b, c, d]);
                    if e != 0.0 {
                        s = s + T::from(e) * mu.get(a, b) * nu.get(c, d);
                    }
                }
            }
        }
    }
    s
}

/// Coefficient of `dx^0 ^ dx^1 ^ dx^2 ^ dx^3` in `mu ^ nu` for a one-form
/// and a three-form.
pub fn wedge_1_3<T: Scalar>(mu: &[T; 4], nu: &ThreeForm<T>) -> T {
    (0..4).fold(T::default(), |s, a| {
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        s + T::from(sign) * mu[a] * nu.comp[a]
    })
}

/// Contraction `w_4(Z)` of the volume form `det O' dx^0 ^ .. ^ dx^3` with a
/// bivector `Z = sum_{a<b} Z^ab d_a ^ d_b`:
///
/// `w_4(Z)_{a0 a1} = 2 det O' sum_{a<b} e(a0, a1, a, b) Z^ab`.
pub fn varpi4_bivector<T: Scalar>(z: &TwoForm<T>, det_oprime: f64) -> TwoForm<T> {
    TwoForm::from_fn(|a0, a1| {
        let mut s = T::default();
        for a in 0..4 {
            for b in a + 1..4 {
                let e = levi_civita([a0, a1, a, b]);
                if e != 0.0 {
                    s = s + T::from(2.0 * det_oprime * e) * z.get(a, b);
                }
            }
        }
        s
    })
}

/// Product `g_ab` of the transposed inverse tetrad with the Minkowski
/// metric, exposed for callers needing `O'^t eta O'` directly.
pub fn metric_lower(t: &Tetrad) -> Mat4 {
    let eta = crate::linalg::mat4_eta();
    mat4_mul(&mat4_mul(&mat4_transpose(&t.oprime), &eta), &t.oprime)
}
