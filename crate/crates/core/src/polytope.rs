//! Halfspace representation `{x : A x <= b}` with unit-norm rows.
//!
//! Rows are normalized once, when the polytope is built, and the right-hand
//! side is scaled with its row so the feasible set does not change. With unit
//! rows a residual `b_i - a_i . x` is the Euclidean distance from `x` to the
//! i-th bounding hyperplane, and the line intercepts computed downstream are
//! true distances.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Classification tolerance on normalized residuals.
pub const DEFAULT_BOUNDARY_EPS: f64 = 1e-9;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A point in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0.0; n])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// `self + t * dir`, component-wise.
    pub fn offset(&self, dir: &[f64], t: f64) -> Point {
        Point(self.0.iter().zip(dir).map(|(x, u)| x + t * u).collect())
    }

    /// Euclidean distance to another point of the same dimension.
    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn set(&mut self, k: usize, value: f64) {
        self.0[k] = value;
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point(coords)
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl fmt::Display for Point {
    /// Honors the formatter precision, so `{:.2}` gives the two-decimal table form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            match f.precision() {
                Some(p) => write!(f, "{x:.p$}")?,
                None => write!(f, "{x}")?,
            }
        }
        write!(f, ")")
    }
}

/// Slacks `S_i = b_i - a_i . x`, one per constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualVector(Vec<f64>);

impl ResidualVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Smallest residual and its constraint index (lowest index on ties).
    pub fn min(&self) -> (usize, f64) {
        self.0
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, s)| if s < best.1 { (i, s) } else { best },
            )
    }

    /// First constraint whose residual is not strictly positive, if any.
    pub fn first_non_positive(&self) -> Option<(usize, f64)> {
        self.0
            .iter()
            .copied()
            .enumerate()
            .find(|&(_, s)| s.is_nan() || s <= 0.0)
    }

    pub fn ensure_interior(&self) -> Result<()> {
        match self.first_non_positive() {
            Some((constraint, residual)) => Err(Error::NotInterior {
                constraint,
                residual,
            }),
            None => Ok(()),
        }
    }
}

impl Index<usize> for ResidualVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Where a point sits relative to the polytope, at a given boundary tolerance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointClass {
    StrictlyInterior,
    /// Constraints with `|S_i| <= eps`.
    OnBoundary(Vec<usize>),
    /// Constraints with `S_i < -eps`.
    Exterior(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    n: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    labels: Vec<Option<String>>,
}

impl Polytope {
    /// Builds `{x : rows . x <= rhs}`, normalizing every row to unit length.
    pub fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let labels = vec![None; rows.len()];
        Self::with_labels(rows, rhs, labels)
    }

    pub fn with_labels(
        rows: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rhs.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: rhs.len(),
            });
        }
        if labels.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: labels.len(),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if n == 0 || m <= n {
            return Err(Error::TooFewConstraints { m, n });
        }
        let raw = Polytope {
            n,
            rows,
            rhs,
            labels,
        };
        raw.normalize_rows()
    }

    /// Divides each row and its right-hand side by the row's Euclidean norm.
    pub fn normalize_rows(&self) -> Result<Polytope> {
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut rhs = Vec::with_capacity(self.rhs.len());
        for (i, (row, &b)) in self.rows.iter().zip(&self.rhs).enumerate() {
            let len = norm(row);
            if len <= 0.0 || !len.is_finite() {
                return Err(Error::ZeroRow { row: i });
            }
            rows.push(row.iter().map(|a| a / len).collect());
            rhs.push(b / len);
        }
        Ok(Polytope {
            n: self.n,
            rows,
            rhs,
            labels: self.labels.clone(),
        })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    /// Label if present, otherwise the one-based constraint number.
    pub fn constraint_name(&self, i: usize) -> String {
        self.label(i)
            .map_or_else(|| format!("#{}", i + 1), str::to_owned)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found,
            })
        }
    }

    pub fn residuals(&self, p: &Point) -> Result<ResidualVector> {
        self.check_dim(p.dim())?;
        Ok(ResidualVector(
            self.rows
                .iter()
                .zip(&self.rhs)
                .map(|(row, b)| b - dot(row, p.coords()))
                .collect(),
        ))
    }

    /// Residuals at a point that must be strictly inside.
    pub fn interior_residuals(&self, p: &Point) -> Result<ResidualVector> {
        let s = self.residuals(p)?;
        s.ensure_interior()?;
        Ok(s)
    }

    pub fn classify(&self, p: &Point, boundary_eps: f64) -> Result<PointClass> {
        let s = self.residuals(p)?;
        let violated: Vec<usize> = (0..self.m()).filter(|&i| s[i] < -boundary_eps).collect();
        if !violated.is_empty() {
            return Ok(PointClass::Exterior(violated));
        }
        let touching: Vec<usize> = (0..self.m()).filter(|&i| s[i] <= boundary_eps).collect();
        if touching.is_empty() {
            Ok(PointClass::StrictlyInterior)
        } else {
            Ok(PointClass::OnBoundary(touching))
        }
    }

    /// Finds a strictly interior point by a relaxation-projection sweep.
    ///
    /// Starting from the origin, each step takes the constraint with the
    /// smallest residual and moves along its unit normal until that residual
    /// equals a positive target: half of the current violation, and never less
    /// than a floor of `1e-6 * (1 + max |b_i|)`. The sweep stops once every
    /// residual clears `1e-8 * (1 + max |b_i|)`. For an empty or flat interior
    /// the sweep never settles and the call fails after `max_iter` steps.
    pub fn find_interior_point(&self, max_iter: usize) -> Result<Point> {
        let scale = 1.0 + self.rhs.iter().fold(0.0_f64, |acc, b| acc.max(b.abs()));
        let accept = 1e-8 * scale;
        let floor = 1e-6 * scale;
        let mut x = Point::origin(self.n);
        for _ in 0..max_iter {
            let s = self.residuals(&x)?;
            let (i, smin) = s.min();
            if !smin.is_finite() {
                break;
            }
            if smin >= accept {
                return Ok(x);
            }
            let target = (0.5 * smin.abs()).max(floor);
            // moving by -t * a_i raises S_i by t
            x = x.offset(&self.rows[i], -(target - smin));
        }
        Err(Error::NoInteriorPoint {
            iterations: max_iter,
        })
    }

    /// The polytope shifted by `t`: `b -> b + A t`.
    pub fn translated(&self, t: &[f64]) -> Result<Polytope> {
        self.check_dim(t.len())?;
        let rhs = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| b + dot(row, t))
            .collect();
        Ok(Polytope {
            n: self.n,
            rows: self.rows.clone(),
            rhs,
            labels: self.labels.clone(),
        })
    }
}

/// Parses the `.poly` text format.
///
/// ```text
/// # comment
/// dims <m> <n>
/// <a_1> ... <a_n> <b> [label]     (m lines)
/// ```
pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| Error::Syntax {
        line: text.lines().count().max(1),
        message: "missing `dims <m> <n>` header".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (m, n) = match tokens.as_slice() {
        ["dims", m, n] => (
            parse_count(m, header_line, "m")?,
            parse_count(n, header_line, "n")?,
        ),
        _ => {
            return Err(Error::Syntax {
                line: header_line,
                message: format!("expected `dims <m> <n>`, found `{header}`"),
            })
        }
    };
    if n == 0 || m <= n {
        return Err(Error::TooFewConstraints { m, n });
    }

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, content) in lines.by_ref().take(m) {
        last_line = line;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() < n + 1 || tokens.len() > n + 2 {
            return Err(Error::Syntax {
                line,
                message: format!(
                    "expected {} numbers and an optional label, found {} tokens",
                    n + 1,
                    tokens.len()
                ),
            });
        }
        let mut values = Vec::with_capacity(n + 1);
        for tok in &tokens[..n + 1] {
            values.push(parse_number(tok, line)?);
        }
        let label = tokens.get(n + 1).map(|t| t.to_string());
        if let Some(extra) = &label {
            if extra.parse::<f64>().is_ok() {
                return Err(Error::Syntax {
                    line,
                    message: format!("row has {} coefficients, but dims declares n = {n}", n + 1),
                });
            }
        }
        let b = values.pop().expect("n + 1 values");
        if values.iter().all(|&a| a == 0.0) {
            return Err(Error::ZeroRow { row: rows.len() });
        }
        rows.push(values);
        rhs.push(b);
        labels.push(label);
    }
    if rows.len() < m {
        return Err(Error::Syntax {
            line: last_line,
            message: format!("dims declares {m} constraints, found {}", rows.len()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Syntax {
            line,
            message: format!("unexpected data after the {m} declared constraints"),
        });
    }
    Polytope::with_labels(rows, rhs, labels)
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Syntax {
        line,
        message: format!("`{tok}` is not a valid count for {what}"),
    })
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Syntax {
            line,
            message: format!("`{tok}` is not a finite number"),
        }),
    }
}

impl FromStr for Polytope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_polytope(s)
    }
}
