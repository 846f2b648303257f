//! The harmonic point of a line.
//!
//! Along a section with intercepts `d_i`, the offset `h` of the harmonic point
//! solves
//!
//! ```text
//! F(h) = sum_i 1 / (d_i - h) = 0,    d_minus < h < d_plus
//! ```
//!
//! `F' (h) = sum_i 1 / (d_i - h)^2 > 0`, so `F` rises monotonically from
//! `-inf` at `d_minus` to `+inf` at `d_plus` and the root is unique. Parallel
//! constraints contribute nothing.

use crate::error::{Error, Result};
use crate::line::{section, Direction, LineSection, DEFAULT_PARALLEL_EPS};
use crate::polytope::{Point, Polytope};

/// Tolerance on `|F(h)|` for inner solves.
pub const DEFAULT_INNER_TOL: f64 = 1e-10;
pub const DEFAULT_INNER_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Newton,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSolveResult {
    /// Signed offset along the line from the section's base point.
    pub h: f64,
    pub iterations: usize,
    /// `F(h)`.
    pub residual: f64,
    pub method: SolveMethod,
}

/// `F(h)` over the finite intercepts.
pub fn harmonic_sum(sec: &LineSection, h: f64) -> f64 {
    sec.finite_distances().map(|d| 1.0 / (d - h)).sum()
}

fn sum_and_slope(sec: &LineSection, h: f64) -> (f64, f64) {
    sec.finite_distances().fold((0.0, 0.0), |(f, df), d| {
        let r = 1.0 / (d - h);
        (f + r, df + r * r)
    })
}

fn check_bracket(sec: &LineSection) -> Result<()> {
    let (d_minus, d_plus) = (sec.d_minus(), sec.d_plus());
    if d_minus < 0.0 && d_plus > 0.0 && d_minus.is_finite() && d_plus.is_finite() {
        Ok(())
    } else {
        Err(Error::BracketInvalid { d_minus, d_plus })
    }
}

/// Safeguarded Newton from `h = 0`.
///
/// The root is kept inside a shrinking sub-bracket `(lo, hi)` updated from the
/// sign of `F`. A Newton step that would leave the sub-bracket is replaced by
/// its midpoint. Stops when `|F(h)| <= tol` or the sub-bracket is narrower
/// than `tol * (d_plus - d_minus)`. On the `|F|` exit one final Newton step is
/// kept if it lowers `|F|`.
pub fn solve_harmonic_offset(
    sec: &LineSection,
    tol: f64,
    max_iter: usize,
) -> Result<HarmonicSolveResult> {
    check_bracket(sec)?;
    let width_tol = tol * sec.width();
    let (mut lo, mut hi) = (sec.d_minus(), sec.d_plus());
    let mut h = 0.0;
    let done = |h: f64, iterations: usize, residual: f64| HarmonicSolveResult {
        h,
        iterations,
        residual,
        method: SolveMethod::Newton,
    };
    for steps in 0..=max_iter {
        let (f, df) = sum_and_slope(sec, h);
        if f.abs() <= tol {
            // one more Newton step costs a single evaluation and squares the error
            let polished = h - f / df;
            if polished > lo && polished < hi {
                let fp = harmonic_sum(sec, polished);
                if fp.abs() <= f.abs() {
                    return Ok(done(polished, steps, fp));
                }
            }
            return Ok(done(h, steps, f));
        }
        if f < 0.0 {
            lo = h;
        } else {
            hi = h;
        }
        if hi - lo <= width_tol {
            return Ok(done(h, steps, f));
        }
        if steps == max_iter {
            break;
        }
        let newton = h - f / df;
        h = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::MaxIterExceeded {
        iterations: max_iter,
        best_h: h,
    })
}

/// Plain bisection on the sign of `F`, kept as an independent check on
/// [`solve_harmonic_offset`].
///
/// Works on `(d_minus + eps, d_plus - eps)` with `eps = 1e-12 * width` and
/// stops once the interval is no wider than `tol` or cannot be split further.
pub fn bisection_oracle(sec: &LineSection, tol: f64) -> Result<HarmonicSolveResult> {
    check_bracket(sec)?;
    let eps = 1e-12 * sec.width();
    let (mut lo, mut hi) = (sec.d_minus() + eps, sec.d_plus() - eps);
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f = harmonic_sum(sec, mid);
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    Ok(HarmonicSolveResult {
        h,
        iterations,
        residual: harmonic_sum(sec, h),
        method: SolveMethod::Bisection,
    })
}

/// The harmonic point of the line through `p` along `u`.
pub fn harmonic_point_on_line(
    polytope: &Polytope,
    p: &Point,
    u: &Direction,
    tol: f64,
) -> Result<Point> {
    let sec = section(polytope, p, u, DEFAULT_PARALLEL_EPS)?;
    let root = solve_harmonic_offset(&sec, tol, DEFAULT_INNER_MAX_ITER)?;
    Ok(p.offset(u.components(), root.h))
}

/// The harmonic point of the line through `p` parallel to zero-based axis `k`.
pub fn harmonic_point_on_axis(polytope: &Polytope, p: &Point, k: usize, tol: f64) -> Result<Point> {
    let e = Direction::axis(k, polytope.n())?;
    harmonic_point_on_line(polytope, p, &e, tol)
}
