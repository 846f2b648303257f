//! Intersections of a line `p + t u` with every bounding hyperplane.

use crate::error::{Error, Result};
use crate::polytope::{dot, norm, Point, Polytope};

/// Denominators `|a_i . u|` at or below this are treated as parallel.
pub const DEFAULT_PARALLEL_EPS: f64 = 1e-12;

/// A unit vector in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `components` to unit length.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let len = norm(&components);
        if len <= 0.0 || !len.is_finite() {
            return Err(Error::InvalidDirection);
        }
        Ok(Direction(components.into_iter().map(|c| c / len).collect()))
    }

    /// The unit vector along zero-based axis `k` of `R^n`.
    pub fn axis(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::AxisOutOfRange { axis: k, n });
        }
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        Ok(Direction(e))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn reversed(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }
}

/// Signed parameter at which the line meets one constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intercept {
    Finite(f64),
    Parallel,
}

impl Intercept {
    pub fn finite(self) -> Option<f64> {
        match self {
            Intercept::Finite(d) => Some(d),
            Intercept::Parallel => None,
        }
    }
}

/// All intercepts of one line plus the feasible bracket `(d_minus, d_plus)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSection {
    distances: Vec<Intercept>,
    d_plus: f64,
    d_minus: f64,
    plus_index: usize,
    minus_index: usize,
}

impl LineSection {
    /// Builds a section from raw intercepts, locating the nearest contact on
    /// each side. Ties keep the lowest constraint index.
    pub fn from_distances(distances: Vec<Intercept>) -> Result<Self> {
        let mut plus: Option<(usize, f64)> = None;
        let mut minus: Option<(usize, f64)> = None;
        for (i, d) in distances.iter().enumerate() {
            let Intercept::Finite(d) = *d else { continue };
            if !d.is_finite() || d == 0.0 {
                return Err(Error::BracketInvalid {
                    d_minus: d,
                    d_plus: d,
                });
            }
            if d > 0.0 {
                if plus.is_none_or(|(_, best)| d < best) {
                    plus = Some((i, d));
                }
            } else if minus.is_none_or(|(_, best)| d > best) {
                minus = Some((i, d));
            }
        }
        let (plus_index, d_plus) = plus.ok_or(Error::UnboundedDirection { forward: true })?;
        let (minus_index, d_minus) = minus.ok_or(Error::UnboundedDirection { forward: false })?;
        Ok(LineSection {
            distances,
            d_plus,
            d_minus,
            plus_index,
            minus_index,
        })
    }

    pub fn distances(&self) -> &[Intercept] {
        &self.distances
    }

    pub fn finite_distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.distances.iter().filter_map(|d| d.finite())
    }

    /// Nearest contact in the forward direction, always positive.
    pub fn d_plus(&self) -> f64 {
        self.d_plus
    }

    /// Nearest contact in the backward direction, always negative.
    pub fn d_minus(&self) -> f64 {
        self.d_minus
    }

    pub fn plus_index(&self) -> usize {
        self.plus_index
    }

    pub fn minus_index(&self) -> usize {
        self.minus_index
    }

    pub fn width(&self) -> f64 {
        self.d_plus - self.d_minus
    }

    /// The section seen from the opposite orientation.
    pub fn reversed(&self) -> LineSection {
        LineSection {
            distances: self
                .distances
                .iter()
                .map(|d| match *d {
                    Intercept::Finite(v) => Intercept::Finite(-v),
                    Intercept::Parallel => Intercept::Parallel,
                })
                .collect(),
            d_plus: -self.d_minus,
            d_minus: -self.d_plus,
            plus_index: self.minus_index,
            minus_index: self.plus_index,
        }
    }
}

/// Intersects the line through `p` along `u` with every constraint.
///
/// Constraint i is met at `d_i = S_i / (a_i . u)`; when the denominator is
/// within `parallel_eps` of zero the constraint is never met.
pub fn section(
    polytope: &Polytope,
    p: &Point,
    u: &Direction,
    parallel_eps: f64,
) -> Result<LineSection> {
    polytope.check_dim(u.dim())?;
    let s = polytope.interior_residuals(p)?;
    let distances = polytope
        .rows()
        .iter()
        .zip(s.values())
        .map(|(row, &si)| {
            let g = dot(row, u.components());
            if g.abs() <= parallel_eps {
                Intercept::Parallel
            } else {
                Intercept::Finite(si / g)
            }
        })
        .collect();
    LineSection::from_distances(distances)
}

pub fn point_at(p: &Point, u: &Direction, t: f64) -> Point {
    p.offset(u.components(), t)
}
