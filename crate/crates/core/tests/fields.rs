mod common;

use common::SyntheticTetrad;
use gaugeframe::algebra::{build_gamma_basis, build_spin_generators, spin_exp, spin_to_so31, StateTensor};
use gaugeframe::fields::{
    affine_connection, connection_from_affine, covariant_derivative_state, curvature_a, curvature_g, dirac_operator,
    g_tilde, max_abs4, metricity_residual, riemann_ricci_scalar, scalar_curvature, symmetry_residual, to_chart_indices,
    torsion, torsion_contraction, GaugePotentials, PotentialJet, StateJet,
};
use gaugeframe::geometry::{structure_coefficients, Tetrad, TetradJet, TwoForm};
use gaugeframe::lie::{build_so31, su2_group, u1_group, InternalGroup};
use gaugeframe::linalg::{c64, mat4_inverse, mat4_max_abs_diff, mat4_mul, solve_dense, CMatrix, Mat4, C64, ETA};
use gaugeframe::Error;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

const PQ: [(usize, usize); 6] = [(3, 2), (1, 3), (2, 1), (0, 1), (0, 2), (0, 3)];

/// `[k~_a]^i_j = d^{i p_a} d_{j q_a} - d^{i q_a} eta_{j p_a}`, built from the
/// delta formula rather than the library.
fn kappa_oracle(a: usize) -> Mat4 {
    let (p, q) = PQ[a];
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let mut v = 0.0;
            if i == p && j == q {
                v += 1.0;
            }
            if i == q && j == p {
                v -= ETA[p];
            }
            v
        })
    })
}

fn random_potentials(r: &mut ChaCha8Rng, n: usize) -> GaugePotentials {
    GaugePotentials {
        g: common::table4x6(r),
        a: core::array::from_fn(|_| (0..n).map(|_| c64(common::uniform(r), common::uniform(r))).collect()),
    }
}

fn commutator4(a: &Mat4, b: &Mat4) -> Mat4 {
    let ab = mat4_mul(a, b);
    let ba = mat4_mul(b, a);
    core::array::from_fn(|i| core::array::from_fn(|j| ab[i][j] - ba[i][j]))
}

fn max_abs_3(t: &[[[f64; 4]; 4]; 4]) -> f64 {
    t.iter().flatten().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn gravitational_curvature_examples() {
    let so31 = build_so31();
    let zero = PotentialJet::constant(GaugePotentials::zero(1));
    for f in curvature_g(&zero, &so31) {
        assert_eq!(f.max_abs(), 0.0);
    }

    let mut pot = GaugePotentials::zero(1);
    pot.g[1][0] = 1.0;
    pot.g[2][1] = 1.0;
    let fg = curvature_g(&PotentialJet::constant(pot), &so31);
    let bracket = commutator4(&kappa_oracle(0), &kappa_oracle(1));
    for (a, f) in fg.iter().enumerate() {
        let expected = bracket[PQ[a].0][PQ[a].1];
        assert_eq!(f.get(1, 2), expected, "component {a}");
        assert_eq!(f.get(2, 1), -expected);
    }
    assert_eq!(fg[2].get(1, 2), 1.0);

    let mut j = PotentialJet::constant(GaugePotentials::zero(1));
    j.dg[1][2][0] = 1.0;
    let fg = curvature_g(&j, &so31);
    assert_eq!(fg[0].get(1, 2), 1.0);
    assert_eq!(fg[0].get(2, 1), -1.0);
    assert_eq!(fg[1].max_abs(), 0.0);
}

#[test]
fn gravitational_curvature_matches_matrix_commutators() {
    let so31 = build_so31();
    let mut r = common::rng(100);
    for _ in 0..100 {
        let mut j = PotentialJet::constant(random_potentials(&mut r, 1));
        j.dg = core::array::from_fn(|_| common::table4x6(&mut r));
        let fg = curvature_g(&j, &so31);
        let gm: [Mat4; 4] = core::array::from_fn(|al| {
            let mut m = [[0.0; 4]; 4];
            for a in 0..6 {
                let k = kappa_oracle(a);
                for x in 0..4 {
                    for y in 0..4 {
                        m[x][y] += j.potentials.g[al][a] * k[x][y];
                    }
                }
            }
            m
        });
        for al in 0..4 {
            for be in 0..4 {
                let br = commutator4(&gm[al], &gm[be]);
                for a in 0..6 {
                    let (p, q) = PQ[a];
                    let expected = j.dg[al][be][a] - j.dg[be][al][a] + br[p][q];
                    assert!((fg[a].get(al, be) - expected).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn internal_curvature_examples() {
    let u1 = u1_group();
    let mut j = PotentialJet::constant(GaugePotentials::zero(1));
    j.da[0][1][0] = c64(1.0, 0.0);
    let fa = curvature_a(&j, &u1).unwrap();
    assert_eq!(fa[0].get(0, 1), c64(1.0, 0.0));
    assert_eq!(fa[0].get(1, 0), c64(-1.0, 0.0));
    assert_eq!(fa[0].get(2, 3), c64(0.0, 0.0));

    let mut r = common::rng(101);
    let constant = PotentialJet::constant(random_potentials(&mut r, 1));
    for f in curvature_a(&constant, &u1).unwrap() {
        assert!(f.max_abs() <= 1e-15);
    }

    let su2 = su2_group();
    let jet = PotentialJet::constant(random_potentials(&mut r, 3));
    let fa = curvature_a(&jet, &su2).unwrap();
    for al in 0..4 {
        for be in 0..4 {
            let x = su2.combine(&jet.potentials.a[al]);
            let y = su2.combine(&jet.potentials.a[be]);
            let bracket = x.commutator(&y);
            let mut rebuilt = CMatrix::zeros(2, 2);
            for (a, f) in fa.iter().enumerate() {
                rebuilt.axpy(f.get(al, be), su2.theta(a));
            }
            assert!(rebuilt.max_abs_diff(&bracket) <= 1e-12);
        }
    }
}

#[test]
fn internal_curvature_rejects_wrong_dimensions() {
    let jet = PotentialJet::constant(GaugePotentials::zero(2));
    assert!(matches!(
        curvature_a(&jet, &u1_group()),
        Err(Error::DimensionMismatch { .. })
    ));
    let mut jet = PotentialJet::constant(GaugePotentials::zero(1));
    jet.da[0][0] = vec![c64(0.0, 0.0); 3];
    assert!(matches!(
        curvature_a(&jet, &u1_group()),
        Err(Error::DimensionMismatch { .. })
    ));
}

/// Smooth U(1) potential `A_b(x) = sum_k u_bk sin(w_bk . x + f_bk)` with
/// exact derivatives.
struct SyntheticU1 {
    u: [[C64; 2]; 4],
    w: [[[f64; 4]; 2]; 4],
    f: [[f64; 2]; 4],
}

impl SyntheticU1 {
    fn new(r: &mut ChaCha8Rng) -> Self {
        Self {
            u: core::array::from_fn(|_| core::array::from_fn(|_| c64(common::uniform(r), common::uniform(r)))),
            w: core::array::from_fn(|_| core::array::from_fn(|_| core::array::from_fn(|_| common::uniform(r)))),
            f: core::array::from_fn(|_| core::array::from_fn(|_| 3.0 * common::uniform(r))),
        }
    }

    fn jet(&self, x: &[f64; 4]) -> PotentialJet {
        let mut j = PotentialJet::constant(GaugePotentials::zero(1));
        for b in 0..4 {
            for k in 0..2 {
                let arg: f64 = (0..4).map(|c| self.w[b][k][c] * x[c]).sum::<f64>() + self.f[b][k];
                j.potentials.a[b][0] += self.u[b][k] * arg.sin();
                for c in 0..4 {
                    j.da[c][b][0] += self.u[b][k] * (arg.cos() * self.w[b][k][c]);
                }
            }
        }
        j
    }
}

#[test]
fn abelian_curvature_is_closed() {
    let u1 = u1_group();
    let mut r = common::rng(102);
    let field = SyntheticU1::new(&mut r);
    let x0: [f64; 4] = core::array::from_fn(|_| common::uniform(&mut r));
    let f_at = |x: &[f64; 4]| curvature_a(&field.jet(x), &u1).unwrap().remove(0);
    let cyclic = |h: f64| {
        let d = |g: usize, a: usize, b: usize| {
            let mut xp = x0;
            let mut xm = x0;
            xp[g] += h;
            xm[g] -= h;
            (f_at(&xp).get(a, b) - f_at(&xm).get(a, b)) / (2.0 * h)
        };
        let mut worst: f64 = 0.0;
        for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            let s = d(a, b, c) + d(b, c, a) + d(c, a, b);
            worst = worst.max(s.norm());
        }
        worst
    };
    // The exact cyclic sum vanishes; central differences leave an O(h^2)
    // residue.
    let coarse = cyclic(1e-2);
    let fine = cyclic(5e-3);
    assert!(coarse <= 1e-4, "coarse residue {coarse}");
    assert!(fine <= coarse / 3.0 || fine <= 1e-10, "{coarse} -> {fine}");
}

#[test]
fn affine_connection_examples() {
    let so31 = build_so31();
    let flat = TetradJet::constant(Tetrad::flat());
    let zero = affine_connection(&flat, &GaugePotentials::zero(1), &so31);
    assert_eq!(max_abs4(&zero), 0.0);

    let mut r = common::rng(103);
    let pot = random_potentials(&mut r, 1);
    let gamma = affine_connection(&flat, &pot, &so31);
    let gt = g_tilde(&pot.g, &so31);
    for al in 0..4 {
        assert!(mat4_max_abs_diff(&gamma[al], &gt[al]) <= 1e-15);
    }
}

#[test]
fn affine_connection_round_trip() {
    let so31 = build_so31();
    let mut r = common::rng(104);
    for _ in 0..200 {
        let tj = common::tetrad_jet(&mut r);
        let pot = random_potentials(&mut r, 1);
        let gamma = affine_connection(&tj, &pot, &so31);
        let back = connection_from_affine(&tj, &gamma);
        let gt = g_tilde(&pot.g, &so31);
        for al in 0..4 {
            assert!(mat4_max_abs_diff(&back[al], &gt[al]) <= 1e-10);
        }
    }
}

#[test]
fn affine_connection_is_metric() {
    let so31 = build_so31();
    let mut r = common::rng(105);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let tj = common::tetrad_jet(&mut r);
        let pot = random_potentials(&mut r, 1);
        let gamma = affine_connection(&tj, &pot, &so31);
        worst = worst.max(max_abs4(&metricity_residual(&tj, &gamma).unwrap()));
    }
    assert!(worst <= 1e-9, "metricity residual {worst}");

    let flat = TetradJet::constant(Tetrad::flat());
    let zero = [[[0.0; 4]; 4]; 4];
    assert_eq!(max_abs4(&metricity_residual(&flat, &zero).unwrap()), 0.0);
}

#[test]
fn metricity_detects_symmetric_perturbations() {
    let so31 = build_so31();
    let mut r = common::rng(106);
    for _ in 0..50 {
        let tj = common::tetrad_jet(&mut r);
        let pot = random_potentials(&mut r, 1);
        let mut gamma = affine_connection(&tj, &pot, &so31);
        let noise = common::mat4(&mut r, 0.1);
        for x in 0..4 {
            for y in 0..4 {
                gamma[0][x][y] += noise[x][y] + noise[y][x];
            }
        }
        assert!(max_abs4(&metricity_residual(&tj, &gamma).unwrap()) > 1e-4);
    }
}

/// Printed torsion table: each entry is a list of `(sign, j, b)` meaning
/// `sign * G_j^b` with the generator label `b` counted from 1.
type Entry = &'static [(f64, usize, usize)];

const PRINTED_TABLE: [[Entry; 4]; 6] = [
    [
        &[(-1.0, 2, 6), (1.0, 3, 5)],
        &[(-1.0, 2, 2), (-1.0, 3, 3)],
        &[(1.0, 2, 1)],
        &[(1.0, 3, 1)],
    ],
    [
        &[(1.0, 1, 6), (-1.0, 3, 4)],
        &[(1.0, 1, 2)],
        &[(-1.0, 1, 1), (-1.0, 3, 3)],
        &[(1.0, 3, 2)],
    ],
    [
        &[(-1.0, 1, 5), (1.0, 2, 4)],
        &[(1.0, 1, 3)],
        &[(1.0, 2, 3)],
        &[(-1.0, 1, 1), (-1.0, 2, 2)],
    ],
    [
        &[(1.0, 0, 4)],
        &[(-1.0, 1, 4)],
        &[(-1.0, 1, 5), (1.0, 0, 3)],
        &[(-1.0, 0, 2), (-1.0, 1, 6)],
    ],
    // The last cell is printed "G_0 - G_2^6" with the label of G_0 missing.
    [
        &[(1.0, 0, 5)],
        &[(-1.0, 2, 4), (-1.0, 0, 3)],
        &[(-1.0, 2, 5)],
        &[(-1.0, 2, 6)],
    ],
    [
        &[(1.0, 0, 6)],
        &[(1.0, 0, 2), (-1.0, 3, 4)],
        &[(-1.0, 0, 1), (-1.0, 3, 5)],
        &[(-1.0, 3, 6)],
    ],
];

/// Coefficients of `T^ar` on the 24 unknowns `G_j^b` from the explicit
/// contraction `[G~_{p_a}]^r_{q_a} - [G~_{q_a}]^r_{p_a}`.
fn contraction_oracle(a: usize, r: usize) -> [[f64; 6]; 4] {
    let (p, q) = PQ[a];
    core::array::from_fn(|j| {
        core::array::from_fn(|b| {
            let k = kappa_oracle(b);
            let mut v = 0.0;
            if j == p {
                v += k[r][q];
            }
            if j == q {
                v -= k[r][p];
            }
            v
        })
    })
}

#[test]
fn torsion_table_from_first_principles() {
    let so31 = build_so31();
    // Coefficient-wise comparison of the library contraction with the oracle
    // by probing every unit potential.
    for j in 0..4 {
        for b in 0..6 {
            let mut g = [[0.0; 6]; 4];
            g[j][b] = 1.0;
            let t = torsion_contraction(&g, &so31);
            for a in 0..6 {
                for r in 0..4 {
                    assert_eq!(t[a][r], contraction_oracle(a, r)[j][b], "T^({a},{r}) on G_{j}^{b}");
                }
            }
        }
    }

    let mut mismatches = Vec::new();
    for a in 0..6 {
        for r in 0..4 {
            let mut printed = [[0.0; 6]; 4];
            for &(s, j, b) in PRINTED_TABLE[a][r] {
                printed[j][b - 1] += s;
            }
            if printed != contraction_oracle(a, r) {
                mismatches.push((a + 1, r));
            }
        }
    }
    for (a, r) in &mismatches {
        eprintln!("printed torsion table differs from the contraction at a = {a}, r = {r}");
    }
    // The missing label in row 5 cannot be repaired from the printed text; the
    // contraction gives G_0^1 there. All other printed cells agree.
    assert_eq!(mismatches, vec![(5, 3)]);
    let mut g = [[0.0; 6]; 4];
    g[0][0] = 1.0;
    assert_eq!(torsion_contraction(&g, &so31)[4][3], 1.0);
}

#[test]
fn torsion_examples() {
    let so31 = build_so31();
    let flat = TetradJet::constant(Tetrad::flat());
    let t = torsion(&flat, &GaugePotentials::zero(1), &so31);
    assert!(t.iter().flatten().all(|&v| v == 0.0));

    let mut pot = GaugePotentials::zero(1);
    pot.g[2][5] = 1.0;
    let t = torsion(&flat, &pot, &so31);
    assert_eq!(t[0][0], -1.0);
}

/// Potential in tetrad indices making the torsion vanish for a jet: solves
/// the 24 x 24 system `T^ar(G) = c_a^r`.
fn torsion_free_potential(tj: &TetradJet) -> [[f64; 6]; 4] {
    let c = structure_coefficients(tj);
    let mut m = vec![0.0; 24 * 24];
    for j in 0..4 {
        for b in 0..6 {
            for a in 0..6 {
                for r in 0..4 {
                    m[(a * 4 + r) * 24 + j * 6 + b] = contraction_oracle(a, r)[j][b];
                }
            }
        }
    }
    let mut rhs: Vec<f64> = (0..24).map(|k| c.c[k / 4][k % 4]).collect();
    solve_dense(&mut m, &mut rhs, 24).expect("torsion map is invertible");
    core::array::from_fn(|j| core::array::from_fn(|b| rhs[j * 6 + b]))
}

#[test]
fn symmetry_criterion_matches_vanishing_torsion() {
    let so31 = build_so31();
    let mut r = common::rng(107);
    for _ in 0..50 {
        let field = SyntheticTetrad::new(&mut r);
        let x: [f64; 4] = core::array::from_fn(|_| common::uniform(&mut r));
        let tj = field.jet(&x);

        let g_frame = torsion_free_potential(&tj);
        let pot = GaugePotentials {
            g: to_chart_indices(&tj.tetrad, &g_frame),
            a: GaugePotentials::zero(1).a,
        };
        assert!(common::max_abs_6x4(&torsion(&tj, &pot, &so31)) <= 1e-10);
        assert!(max_abs_3(&symmetry_residual(&tj, &pot, &so31)) <= 1e-10);

        let random = random_potentials(&mut r, 1);
        assert!(common::max_abs_6x4(&torsion(&tj, &random, &so31)) > 1e-3);
        assert!(max_abs_3(&symmetry_residual(&tj, &random, &so31)) > 1e-3);

        // Nonzero torsion in a single slot is seen by the criterion.
        let mut bumped = pot.clone();
        bumped.g[0][0] += 0.1;
        assert!(common::max_abs_6x4(&torsion(&tj, &bumped, &so31)) > 1e-3);
        assert!(max_abs_3(&symmetry_residual(&tj, &bumped, &so31)) > 1e-3);
    }
}

#[test]
fn symmetry_criterion_is_torsion_in_chart_indices() {
    let so31 = build_so31();
    let mut r = common::rng(108);
    for _ in 0..50 {
        let tj = common::tetrad_jet(&mut r);
        let pot = random_potentials(&mut r, 1);
        let th = torsion(&tj, &pot, &so31);
        let s = symmetry_residual(&tj, &pot, &so31);
        let op = tj.tetrad.oprime();
        for al in 0..4 {
            for be in 0..4 {
                for k in 0..4 {
                    let mut expected = 0.0;
                    for (a, &(p, q)) in PQ.iter().enumerate() {
                        expected += (op[p][al] * op[q][be] - op[q][al] * op[p][be]) * th[a][k];
                    }
                    assert!(
                        (s[al][be][k] - expected).abs() <= 1e-10,
                        "{} vs {expected}",
                        s[al][be][k]
                    );
                }
            }
        }
    }
}

#[test]
fn curvature_examples() {
    let so31 = build_so31();
    let flat = Tetrad::flat();
    let zero: [TwoForm<f64>; 6] = Default::default();
    let c = riemann_ricci_scalar(&zero, &flat, &so31).unwrap();
    assert_eq!(c.scalar, 0.0);
    assert_eq!(c.scalar_from_ricci, 0.0);
    assert!(c.ricci.iter().flatten().all(|&v| v == 0.0));

    // Only F_G 01 along the boost k~_4: the contraction picks up
    // (O_0^1 O_1^0 - O_1^1 O_0^0) = -1 from each ordering of the pair.
    let mut fg: [TwoForm<f64>; 6] = Default::default();
    fg[3] = TwoForm::from_fn(|a, b| if (a, b) == (0, 1) { 1.0 } else { 0.0 });
    let c = riemann_ricci_scalar(&fg, &flat, &so31).unwrap();
    assert_eq!(c.scalar, -2.0);
    assert_eq!(c.scalar_from_ricci, -2.0);
    assert_eq!(c.ricci[0][0], 1.0);
    assert_eq!(c.ricci[1][1], -1.0);
}

fn random_curvature(r: &mut ChaCha8Rng) -> [TwoForm<f64>; 6] {
    core::array::from_fn(|_| TwoForm {
        comp: core::array::from_fn(|_| common::uniform(r)),
    })
}

#[test]
fn scalar_curvature_two_routes_agree() {
    let so31 = build_so31();
    let mut r = common::rng(109);
    for _ in 0..500 {
        let t = common::tetrad(&mut r);
        let fg = random_curvature(&mut r);
        let c = riemann_ricci_scalar(&fg, &t, &so31).unwrap();
        assert!((c.scalar - c.scalar_from_ricci).abs() <= 1e-9);
    }
}

#[test]
fn scalar_curvature_is_gauge_invariant() {
    let so31 = build_so31();
    let g = build_gamma_basis();
    let k = build_spin_generators(&g);
    let mut r = common::rng(110);
    for _ in 0..200 {
        let t = common::tetrad(&mut r);
        let fg = random_curvature(&mut r);
        let tau: [f64; 6] = core::array::from_fn(|_| common::uniform(&mut r));
        let l = spin_to_so31(&spin_exp(&tau, &k), &g).unwrap();
        let l_inv = mat4_inverse(&l).unwrap();
        let moved = Tetrad::from_o(mat4_mul(t.o(), &l)).unwrap();
        let mut fg2: [TwoForm<f64>; 6] = Default::default();
        for al in 0..4 {
            for be in (al + 1)..4 {
                let x: [f64; 6] = core::array::from_fn(|a| fg[a].get(al, be));
                let y = so31.coordinates(&mat4_mul(&mat4_mul(&l_inv, &so31.combine(&x)), &l));
                let (slot, sign) = gaugeframe::geometry::pair_slot(al, be).unwrap();
                for a in 0..6 {
                    fg2[a].comp[slot] = sign * y[a];
                }
            }
        }
        let before = scalar_curvature(&fg, &t);
        let after = scalar_curvature(&fg2, &moved);
        assert!((before - after).abs() <= 1e-8, "{before} vs {after}");
    }
}

#[test]
fn covariant_derivative_examples() {
    let g = build_gamma_basis();
    let gens = build_spin_generators(&g);
    let u1 = u1_group();
    let mut r = common::rng(111);
    let psi = common::state(&mut r, 1);

    let mut sj = StateJet::constant(psi.clone());
    sj.dpsi = core::array::from_fn(|_| common::cmatrix(&mut r, 4, 1));
    let nabla = covariant_derivative_state(&sj, &GaugePotentials::zero(1), &gens, &u1).unwrap();
    for al in 0..4 {
        assert_eq!(nabla[al], sj.dpsi[al]);
    }

    let sj = StateJet::constant(psi.clone());
    let mut pot = GaugePotentials::zero(1);
    pot.g[0][2] = 1.0;
    let nabla = covariant_derivative_state(&sj, &pot, &gens, &u1).unwrap();
    assert!(nabla[0].max_abs_diff(&(&gens.kappa[2] * psi.psi())) <= 1e-15);
    assert_eq!(nabla[1].max_abs(), 0.0);

    let cst = c64(0.7, -0.2);
    let mut pot = GaugePotentials::zero(1);
    pot.a[0][0] = cst;
    let nabla = covariant_derivative_state(&sj, &pot, &gens, &u1).unwrap();
    assert!(nabla[0].max_abs_diff(&psi.psi().scale(cst * c64(0.0, 1.0))) <= 1e-15);
}

#[test]
fn covariant_derivative_uses_transposed_internal_action() {
    let g = build_gamma_basis();
    let gens = build_spin_generators(&g);
    let su2 = su2_group();
    let mut r = common::rng(112);
    let psi = common::state(&mut r, 2);
    let sj = StateJet::constant(psi.clone());
    let pot = random_potentials(&mut r, 3);
    let nabla = covariant_derivative_state(&sj, &pot, &gens, &su2).unwrap();
    for al in 0..4 {
        let gm = gens.combine(&pot.g[al]);
        let am = su2.combine(&pot.a[al]).transpose();
        let expected = &(&gm * psi.psi()) + &(psi.psi() * &am);
        assert!(nabla[al].max_abs_diff(&expected) <= 1e-14);
    }
}

#[test]
fn covariant_derivative_rejects_mismatched_dimensions() {
    let g = build_gamma_basis();
    let gens = build_spin_generators(&g);
    let sj = StateJet::constant(StateTensor::zeros(2));
    assert!(matches!(
        covariant_derivative_state(&sj, &GaugePotentials::zero(1), &gens, &u1_group()),
        Err(Error::DimensionMismatch { .. })
    ));
    let sj = StateJet::constant(StateTensor::zeros(1));
    assert!(matches!(
        covariant_derivative_state(&sj, &GaugePotentials::zero(3), &gens, &u1_group()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn dirac_operator_examples() {
    let g = build_gamma_basis();
    let gens = build_spin_generators(&g);
    let u1 = u1_group();
    let flat = Tetrad::flat();
    let mut r = common::rng(113);
    let psi0 = common::state(&mut r, 1);

    let sj = StateJet::constant(psi0.clone());
    let d = dirac_operator(&sj, &flat, &GaugePotentials::zero(1), &gens, &u1, &g).unwrap();
    assert_eq!(d.max_abs(), 0.0);

    // psi = x^1 psi0 evaluated at the origin.
    let mut sj = StateJet::constant(StateTensor::zeros(1));
    sj.dpsi[1] = psi0.psi().clone();
    let d = dirac_operator(&sj, &flat, &GaugePotentials::zero(1), &gens, &u1, &g).unwrap();
    assert!(d.max_abs_diff(&(&g.gamma_up[1] * psi0.psi())) <= 1e-15);
}

fn chart_change(j: &Mat4, t: &Tetrad, sj: &StateJet, pot: &GaugePotentials) -> (Tetrad, StateJet, GaugePotentials) {
    let k = mat4_inverse(j).unwrap();
    let t2 = Tetrad::from_o(mat4_mul(j, t.o())).unwrap();
    let mut sj2 = StateJet::constant(sj.psi.clone());
    for b in 0..4 {
        let mut d = CMatrix::zeros(4, sj.psi.m());
        for al in 0..4 {
            d.axpy(c64(k[al][b], 0.0), &sj.dpsi[al]);
        }
        sj2.dpsi[b] = d;
    }
    let g: [[f64; 6]; 4] =
        core::array::from_fn(|b| core::array::from_fn(|a| (0..4).map(|al| k[al][b] * pot.g[al][a]).sum()));
    let a: [Vec<C64>; 4] = core::array::from_fn(|b| {
        (0..pot.internal_len())
            .map(|n| (0..4).fold(c64(0.0, 0.0), |s, al| s + pot.a[al][n] * k[al][b]))
            .collect()
    });
    (t2, sj2, GaugePotentials { g, a })
}

#[test]
fn dirac_operator_is_chart_invariant() {
    let g = build_gamma_basis();
    let gens = build_spin_generators(&g);
    let su2 = su2_group();
    let mut r = common::rng(114);
    for _ in 0..100 {
        let t = common::tetrad(&mut r);
        let mut sj = StateJet::constant(common::state(&mut r, 2));
        sj.dpsi = core::array::from_fn(|_| common::cmatrix(&mut r, 4, 2));
        let pot = random_potentials(&mut r, 3);
        let mut j = common::mat4(&mut r, 0.4);
        for (i, row) in j.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        let before = dirac_operator(&sj, &t, &pot, &gens, &su2, &g).unwrap();
        let (t2, sj2, pot2) = chart_change(&j, &t, &sj, &pot);
        let after = dirac_operator(&sj2, &t2, &pot2, &gens, &su2, &g).unwrap();
        assert!(before.max_abs_diff(&after) <= 1e-9);
    }
}

fn grp_for(n: usize) -> InternalGroup {
    if n == 1 {
        u1_group()
    } else {
        su2_group()
    }
}

proptest! {
    #[test]
    fn curvature_forms_are_antisymmetric(seed in any::<u64>(), su2 in any::<bool>()) {
        let so31 = build_so31();
        let n = if su2 { 3 } else { 1 };
        let grp = grp_for(n);
        let mut r = common::rng(seed);
        let mut j = PotentialJet::constant(random_potentials(&mut r, n));
        j.dg = core::array::from_fn(|_| common::table4x6(&mut r));
        for b in 0..4 {
            for al in 0..4 {
                j.da[b][al] = (0..n).map(|_| c64(common::uniform(&mut r), common::uniform(&mut r))).collect();
            }
        }
        let fg = curvature_g(&j, &so31);
        let fa = curvature_a(&j, &grp).unwrap();
        for al in 0..4 {
            for be in 0..4 {
                for f in &fg {
                    prop_assert_eq!(f.get(al, be), -f.get(be, al));
                }
                for f in &fa {
                    prop_assert_eq!(f.get(al, be), -f.get(be, al));
                }
            }
        }
    }

    #[test]
    fn torsion_is_linear_in_the_potential(seed in any::<u64>()) {
        let so31 = build_so31();
        let mut r = common::rng(seed);
        let a = common::table4x6(&mut r);
        let b = common::table4x6(&mut r);
        let s = common::uniform(&mut r);
        let sum: [[f64; 6]; 4] = core::array::from_fn(|j| core::array::from_fn(|k| a[j][k] + s * b[j][k]));
        let ta = torsion_contraction(&a, &so31);
        let tb = torsion_contraction(&b, &so31);
        let ts = torsion_contraction(&sum, &so31);
        for x in 0..6 {
            for y in 0..4 {
                prop_assert!((ts[x][y] - ta[x][y] - s * tb[x][y]).abs() <= 1e-12);
            }
        }
    }
}
