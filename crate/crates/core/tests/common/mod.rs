#![allow(dead_code)]

use std::path::PathBuf;

use hcenter::{parse_polytope, Direction, Point, Polytope};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Polytope {
    parse_polytope(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec())
}

/// Raw (unnormalized) rows and right-hand sides of a bounded polytope with a
/// known interior point `c`, plus `c` itself.
pub struct RawPolytope {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub inner: Vec<f64>,
}

impl RawPolytope {
    pub fn build(&self) -> Polytope {
        Polytope::new(self.rows.clone(), self.rhs.clone()).unwrap()
    }
}

/// Random facets around a random point, closed off by an axis box so the
/// result is always bounded. Rows get random scales to exercise normalization.
pub fn random_raw(rng: &mut ChaCha8Rng, n: usize) -> RawPolytope {
    let inner: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let extra = rng.random_range(n + 1..=3 * n);
    for _ in 0..extra {
        let a: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let len = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = rng.random_range(0.2..5.0) / len;
        let a: Vec<f64> = a.iter().map(|x| x * scale).collect();
        let slack = rng.random_range(0.3..2.0) * scale * len;
        rhs.push(dot(&a, &inner) + slack);
        rows.push(a);
    }
    for k in 0..n {
        for sign in [1.0, -1.0] {
            let mut a = vec![0.0; n];
            a[k] = sign;
            rhs.push(sign * inner[k] + rng.random_range(1.0..3.0));
            rows.push(a);
        }
    }
    RawPolytope { rows, rhs, inner }
}

pub fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> Polytope {
    random_raw(rng, n).build()
}

/// A random point with every residual at least 0.02.
pub fn random_interior_point(rng: &mut ChaCha8Rng, poly: &Polytope, near: &[f64]) -> Point {
    for _ in 0..10_000 {
        let x: Vec<f64> = near
            .iter()
            .map(|c| c + rng.random_range(-3.0..3.0))
            .collect();
        let p = Point::new(x);
        if poly
            .residuals(&p)
            .unwrap()
            .values()
            .iter()
            .all(|&s| s > 0.02)
        {
            return p;
        }
    }
    Point::new(near.to_vec())
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Direction {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    Direction::new(v).unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizer of `-sum ln(b_i - a_i . x)` by damped Newton with the full
/// Hessian. Shares no code with coordinate search.
pub fn newton_log_barrier_center(poly: &Polytope, start: &Point) -> Point {
    let n = poly.n();
    let mut x = DVector::from_column_slice(start.coords());
    for _ in 0..200 {
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for (row, b) in poly.rows().iter().zip(poly.rhs()) {
            let a = DVector::from_column_slice(row);
            let s = b - a.dot(&x);
            assert!(s > 0.0, "Newton iterate left the polytope");
            g += &a / s;
            h += &a * a.transpose() / (s * s);
        }
        let step = h
            .clone()
            .lu()
            .solve(&(-&g))
            .expect("barrier Hessian is positive definite");
        let decrement = (-g.dot(&step)).max(0.0).sqrt();
        if decrement < 1e-14 {
            break;
        }
        let t = if decrement > 0.25 {
            1.0 / (1.0 + decrement)
        } else {
            1.0
        };
        x += step * t;
    }
    Point::new(x.iter().copied().collect())
}
