//! Regular four-dimensional grids, sampled fields and second-order
//! finite-difference gradients.
//!
//! Interior points use the central difference `(f[i+1] - f[i-1]) / 2h`.
//! Boundary points of an axis with at least four samples use the one-sided
//! stencil `(-2 f0 + 7/2 f1 - 2 f2 + 1/2 f3) / h`, whose leading error
//! `h^2 f''' / 6` equals that of the central difference. The error of a
//! differentiated field is then smooth across the boundary, so quantities
//! built from a gradient can be differentiated again without losing an order
//! at the edge. Axes with exactly three samples fall back to the three-point
//! one-sided stencil, which is second order but does not match the interior
//! error constant. Axes with a single sample are not differentiated.

use rayon::prelude::*;

use crate::error::CliError;

/// Number of coordinate axes.
pub const AXES: usize = 4;

/// A regular grid `x^a = origin^a + i_a spacing^a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    /// Points per axis.
    pub shape: [usize; AXES],
    /// Step per axis.
    pub spacing: [f64; AXES],
    /// Coordinates of the first point.
    pub origin: [f64; AXES],
}

impl Grid {
    /// Validates the shape and spacing.
    pub fn new(shape: [usize; AXES], spacing: [f64; AXES], origin: [f64; AXES]) -> Result<Self, CliError> {
        for axis in 0..AXES {
            if shape[axis] == 0 || shape[axis] == 2 {
                return Err(CliError::GridTooSmall {
                    axis,
                    points: shape[axis],
                });
            }
            if !(spacing[axis] > 0.0 && spacing[axis].is_finite()) {
                return Err(CliError::InvalidField {
                    field: "grid.spacing".into(),
                    reason: format!("axis {axis} has non-positive spacing {}", spacing[axis]),
                });
            }
        }
        Ok(Self { shape, spacing, origin })
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    /// `true` for a grid without points (never produced by [`Grid::new`]).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same grid with every spacing multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            spacing: self.spacing.map(|h| h * s),
            ..self.clone()
        }
    }

    /// Row-major multi-index of a linear point index (`x^3` fastest).
    pub fn multi_index(&self, mut lin: usize) -> [usize; AXES] {
        let mut idx = [0; AXES];
        for axis in (0..AXES).rev() {
            idx[axis] = lin % self.shape[axis];
            lin /= self.shape[axis];
        }
        idx
    }

    /// Linear index of a multi-index.
    pub fn linear(&self, idx: &[usize; AXES]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Coordinates of a point.
    pub fn coords(&self, lin: usize) -> [f64; AXES] {
        let idx = self.multi_index(lin);
        core::array::from_fn(|a| self.origin[a] + idx[a] as f64 * self.spacing[a])
    }

    /// Distance of a point from the nearest boundary along differentiated
    /// axes; `usize::MAX` when no axis is differentiated.
    pub fn boundary_distance(&self, lin: usize) -> usize {
        let idx = self.multi_index(lin);
        (0..AXES)
            .filter(|&a| self.shape[a] > 1)
            .map(|a| idx[a].min(self.shape[a] - 1 - idx[a]))
            .min()
            .unwrap_or(usize::MAX)
    }
}

/// A field sampled on a grid: `ncomp` reals per point, point-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    /// Components per point.
    pub ncomp: usize,
    /// `data[p * ncomp + k]`.
    pub data: Vec<f64>,
}

impl Sampled {
    /// Builds a field by evaluating `f` at every point.
    pub fn from_fn(points: usize, ncomp: usize, f: impl Fn(usize) -> Vec<f64> + Sync) -> Self {
        let chunks: Vec<Vec<f64>> = (0..points).into_par_iter().map(&f).collect();
        let mut data = Vec::with_capacity(points * ncomp);
        for c in chunks {
            debug_assert_eq!(c.len(), ncomp);
            data.extend_from_slice(&c);
        }
        Self { ncomp, data }
    }

    /// Components at one point.
    pub fn at(&self, p: usize) -> &[f64] {
        &self.data[p * self.ncomp..(p + 1) * self.ncomp]
    }

    /// Gradient of every component, laid out as `[point][axis][component]`.
    pub fn gradient(&self, grid: &Grid) -> Gradient {
        let n = self.ncomp;
        let chunks: Vec<Vec<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|p| {
                let mut out = vec![0.0; AXES * n];
                for axis in 0..AXES {
                    derivative_into(self, grid, p, axis, &mut out[axis * n..(axis + 1) * n]);
                }
                out
            })
            .collect();
        Gradient {
            ncomp: n,
            data: chunks.concat(),
        }
    }
}

/// First partial derivatives of a [`Sampled`] field.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    /// Components per point and axis.
    pub ncomp: usize,
    /// `data[(p * 4 + axis) * ncomp + k]`.
    pub data: Vec<f64>,
}

impl Gradient {
    /// `d_axis` of every component at one point.
    pub fn at(&self, p: usize, axis: usize) -> &[f64] {
        let start = (p * AXES + axis) * self.ncomp;
        &self.data[start..start + self.ncomp]
    }
}

fn derivative_into(f: &Sampled, grid: &Grid, p: usize, axis: usize, out: &mut [f64]) {
    let n = grid.shape[axis];
    if n == 1 {
        out.fill(0.0);
        return;
    }
    let idx = grid.multi_index(p);
    let h = grid.spacing[axis];
    let i = idx[axis];
    let neighbour = |j: usize| {
        let mut k = idx;
        k[axis] = j;
        f.at(grid.linear(&k))
    };
    // Stencils are applied to differences from their first point, so that
    // constant data differentiates to exactly zero.
    let (base, others, weights, scale): (usize, Vec<usize>, &[f64], f64) = if i > 0 && i + 1 < n {
        (i - 1, vec![i + 1], &[0.5], 1.0 / h)
    } else if n >= 4 {
        let w: &[f64] = &[3.5, -2.0, 0.5];
        if i == 0 {
            (0, vec![1, 2, 3], w, 1.0 / h)
        } else {
            (n - 1, vec![n - 2, n - 3, n - 4], w, -1.0 / h)
        }
    } else {
        let w: &[f64] = &[2.0, -0.5];
        if i == 0 {
            (0, vec![1, 2], w, 1.0 / h)
        } else {
            (n - 1, vec![n - 2, n - 3], w, -1.0 / h)
        }
    };
    out.fill(0.0);
    let f0 = neighbour(base);
    for (&j, &w) in others.iter().zip(weights) {
        for ((o, v), v0) in out.iter_mut().zip(neighbour(j)).zip(f0) {
            *o += w * (v - v0);
        }
    }
    for o in out.iter_mut() {
        *o *= scale;
    }
}
