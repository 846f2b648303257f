//! The harmonic center and related constructions.
//!
//! At an interior point the vector `F` has components
//! `F_j = sum_i A_ij / S_i`, which is `sum_i 1/d_ij` over the axis-`j`
//! intercepts. The harmonic center is the interior point where `F = 0`.
//! Because `1/d_i = (a_i . u) / S_i` along any direction `u`, the harmonic
//! sum along `u` is `u . F`; at the center it vanishes for every line, and at
//! any other point it vanishes exactly for the directions orthogonal to `F`.
//!
//! `F` is also the gradient of the log barrier `-sum_i ln S_i`. Each axis stage
//! of coordinate search minimizes that barrier exactly along one coordinate.

use crate::error::{Error, Result};
use crate::line::{section, Direction, DEFAULT_PARALLEL_EPS};
use crate::polytope::{dot, norm, Point, Polytope};
use crate::solver::{harmonic_point_on_axis, DEFAULT_INNER_TOL};

pub const DEFAULT_STOP_TOL: f64 = 0.01;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_DEGENERATE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FVector {
    components: Vec<f64>,
    norm: f64,
}

impl FVector {
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

pub fn f_vector(polytope: &Polytope, p: &Point) -> Result<FVector> {
    let s = polytope.interior_residuals(p)?;
    let mut components = vec![0.0; polytope.n()];
    for (row, &si) in polytope.rows().iter().zip(s.values()) {
        for (f, a) in components.iter_mut().zip(row) {
            *f += a / si;
        }
    }
    let norm = norm(&components);
    Ok(FVector { components, norm })
}

/// Harmonic sum `sum_i 1/d_i` along direction `u` through `p`, evaluated
/// constraint by constraint as `sum_i (a_i . u) / S_i`.
pub fn directional_sum(polytope: &Polytope, p: &Point, u: &Direction) -> Result<f64> {
    polytope.check_dim(u.dim())?;
    let s = polytope.interior_residuals(p)?;
    Ok(polytope
        .rows()
        .iter()
        .zip(s.values())
        .map(|(row, si)| dot(row, u.components()) / si)
        .sum())
}

/// `normal . x = offset`, passing through the point it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    /// Signed value `normal . x - offset`.
    pub fn evaluate(&self, x: &Point) -> f64 {
        dot(&self.normal, x.coords()) - self.offset
    }
}

/// The hyperplane through `p` with normal `F(p)`. Every line through `p` that
/// lies in it has `p` as its harmonic point.
pub fn harmonic_hyperplane(
    polytope: &Polytope,
    p: &Point,
    degenerate_eps: f64,
) -> Result<Hyperplane> {
    let f = f_vector(polytope, p)?;
    if f.norm <= degenerate_eps {
        return Err(Error::DegenerateAtCenter { fnorm: f.norm });
    }
    let offset = dot(&f.components, p.coords());
    Ok(Hyperplane {
        normal: f.components,
        offset,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterOptions {
    /// Outer loop stops once `|F| <= stop_tol` (for the BI loop, once the
    /// largest axis-midpoint offset is at most `stop_tol`).
    pub stop_tol: f64,
    /// Tolerance for each one-dimensional harmonic solve.
    pub inner_tol: f64,
    pub max_iter: usize,
}

impl Default for CenterOptions {
    fn default() -> Self {
        CenterOptions {
            stop_tol: DEFAULT_STOP_TOL,
            inner_tol: DEFAULT_INNER_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub point: Point,
    pub fnorm: f64,
}

/// Iterates of an outer loop, starting with the initial point at iteration 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterTrace {
    pub records: Vec<TraceRecord>,
    /// False when the loop stopped at `max_iter`.
    pub converged: bool,
}

impl CenterTrace {
    /// Number of completed outer iterations.
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn last(&self) -> &TraceRecord {
        self.records
            .last()
            .expect("trace always holds the start point")
    }
}

/// The intermediate points of one coordinate-search sweep: entry `k` is the
/// point after coordinate `k` has moved to the harmonic point of its axis line.
pub fn cs_stages(polytope: &Polytope, p: &Point, tol: f64) -> Result<Vec<Point>> {
    let mut q = p.clone();
    let mut stages = Vec::with_capacity(polytope.n());
    for k in 0..polytope.n() {
        q = harmonic_point_on_axis(polytope, &q, k, tol)?;
        stages.push(q.clone());
    }
    Ok(stages)
}

/// One sweep over the axes in order `0..n`.
pub fn cs_step(polytope: &Polytope, p: &Point, tol: f64) -> Result<Point> {
    polytope.check_dim(p.dim())?;
    let stages = cs_stages(polytope, p, tol)?;
    Ok(stages.into_iter().last().unwrap_or_else(|| p.clone()))
}

/// Coordinate search from `p0` until `|F| <= stop_tol`.
///
/// Hitting `max_iter` is not an error; the trace comes back with
/// `converged == false`.
pub fn harmonic_center(
    polytope: &Polytope,
    p0: &Point,
    options: &CenterOptions,
) -> Result<(Point, CenterTrace)> {
    let mut p = p0.clone();
    let mut fnorm = f_vector(polytope, &p)?.norm;
    let mut records = vec![TraceRecord {
        iter: 0,
        point: p.clone(),
        fnorm,
    }];
    let mut converged = true;
    while fnorm > options.stop_tol {
        let iter = records.len();
        if iter > options.max_iter {
            converged = false;
            break;
        }
        p = cs_step(polytope, &p, options.inner_tol)?;
        fnorm = f_vector(polytope, &p)?.norm;
        records.push(TraceRecord {
            iter,
            point: p.clone(),
            fnorm,
        });
    }
    Ok((p, CenterTrace { records, converged }))
}

/// Moves coordinate `k` to the midpoint of the nearest contacts on its axis line.
pub fn bi_point_on_axis(polytope: &Polytope, p: &Point, k: usize) -> Result<Point> {
    let e = Direction::axis(k, polytope.n())?;
    let sec = section(polytope, p, &e, DEFAULT_PARALLEL_EPS)?;
    let mut q = p.clone();
    q.set(k, p[k] + 0.5 * (sec.d_plus() + sec.d_minus()));
    Ok(q)
}

/// Largest `|d_plus + d_minus| / 2` over the axis lines through `p`; zero
/// exactly when `p` bisects every axis chord.
pub fn max_bisection_offset(polytope: &Polytope, p: &Point) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..polytope.n() {
        let e = Direction::axis(k, polytope.n())?;
        let sec = section(polytope, p, &e, DEFAULT_PARALLEL_EPS)?;
        worst = worst.max(0.5 * (sec.d_plus() + sec.d_minus()).abs());
    }
    Ok(worst)
}

/// Coordinate search with axis bisection in place of the harmonic point.
///
/// Stops once [`max_bisection_offset`] is at most `stop_tol`. Trace records
/// still carry `|F|` at each iterate, which this loop does not drive to zero.
pub fn bi_center(
    polytope: &Polytope,
    p0: &Point,
    options: &CenterOptions,
) -> Result<(Point, CenterTrace)> {
    let mut p = p0.clone();
    let mut records = vec![TraceRecord {
        iter: 0,
        point: p.clone(),
        fnorm: f_vector(polytope, &p)?.norm,
    }];
    let mut converged = true;
    while max_bisection_offset(polytope, &p)? > options.stop_tol {
        let iter = records.len();
        if iter > options.max_iter {
            converged = false;
            break;
        }
        for k in 0..polytope.n() {
            p = bi_point_on_axis(polytope, &p, k)?;
        }
        records.push(TraceRecord {
            iter,
            point: p.clone(),
            fnorm: f_vector(polytope, &p)?.norm,
        });
    }
    Ok((p, CenterTrace { records, converged }))
}
