//! Harmonic centers of closed convex polytopes `{x : A x <= b}`.
//!
//! A line through an interior point meets each bounding hyperplane at a
//! signed distance `d_i`. Its *harmonic point* is the unique interior point on
//! the line where `sum_i 1/d_i = 0`. The *harmonic center* is the point that
//! is the harmonic point of every axis-parallel line through it, and hence of
//! every line through it. It is found by coordinate search: sweep the axes,
//! moving one coordinate at a time to the harmonic point of its axis line,
//! until `|F|` falls below a tolerance.
//!
//! ```
//! use hcenter::{harmonic_center, parse_polytope, CenterOptions, Point};
//!
//! let square = parse_polytope("dims 4 2\n-1 0 0\n0 -1 0\n1 0 1\n0 1 1\n").unwrap();
//! let (c, trace) = harmonic_center(&square, &Point::new(vec![0.2, 0.7]), &CenterOptions::default()).unwrap();
//! assert!(trace.converged);
//! assert!((c[0] - 0.5).abs() < 1e-2 && (c[1] - 0.5).abs() < 1e-2);
//! ```

pub mod center;
pub mod cli;
pub mod error;
pub mod line;
pub mod polytope;
pub mod solver;
pub mod svg;
pub mod trace;

pub use center::{
    bi_center, bi_point_on_axis, cs_stages, cs_step, directional_sum, f_vector, harmonic_center,
    harmonic_hyperplane, max_bisection_offset, CenterOptions, CenterTrace, FVector, Hyperplane,
    TraceRecord,
};
pub use error::{Error, Result};
pub use line::{point_at, section, Direction, Intercept, LineSection};
pub use polytope::{parse_polytope, Point, PointClass, Polytope, ResidualVector};
pub use solver::{
    bisection_oracle, harmonic_point_on_axis, harmonic_point_on_line, harmonic_sum,
    solve_harmonic_offset, HarmonicSolveResult, SolveMethod,
};
pub use svg::emit_svg;
pub use trace::{trace_from_csv, trace_to_csv};
