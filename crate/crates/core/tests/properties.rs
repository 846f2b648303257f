mod common;

use common::*;
use hcenter::line::DEFAULT_PARALLEL_EPS;
use hcenter::solver::DEFAULT_INNER_MAX_ITER;
use hcenter::{
    bi_center, bisection_oracle, cs_stages, directional_sum, f_vector, harmonic_center,
    harmonic_point_on_line, harmonic_sum, max_bisection_offset, section, solve_harmonic_offset,
    trace_from_csv, trace_to_csv, CenterOptions, CenterTrace, Intercept, LineSection, Point,
    Polytope, TraceRecord,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random bounded polytope in 2..=5 dimensions and an interior point.
fn sample(seed: u64) -> (RawPolytope, Polytope, Point, ChaCha8Rng) {
    let mut r = rng(seed);
    let n = r.random_range(2..=5);
    let raw = random_raw(&mut r, n);
    let poly = raw.build();
    let p = random_interior_point(&mut r, &poly, &raw.inner);
    (raw, poly, p, r)
}

fn barrier(poly: &Polytope, p: &Point) -> f64 {
    -poly
        .residuals(p)
        .unwrap()
        .values()
        .iter()
        .map(|s| s.ln())
        .sum::<f64>()
}

fn sections() -> impl Strategy<Value = LineSection> {
    (
        prop::collection::vec(0.001..50.0_f64, 1..8),
        prop::collection::vec(0.001..50.0_f64, 1..8),
        0..3usize,
    )
        .prop_map(|(neg, pos, par)| {
            let mut d: Vec<Intercept> = neg.iter().map(|x| Intercept::Finite(-x)).collect();
            d.extend(pos.iter().map(|&x| Intercept::Finite(x)));
            d.extend(std::iter::repeat_n(Intercept::Parallel, par));
            LineSection::from_distances(d).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let (_, poly, _, _) = sample(seed);
        let again = poly.normalize_rows().unwrap();
        for (a, b) in poly.rows().iter().flatten().zip(again.rows().iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        for (a, b) in poly.rhs().iter().zip(again.rhs()) {
            prop_assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn normalization_preserves_feasibility(seed in any::<u64>()) {
        let (raw, poly, _, mut r) = sample(seed);
        let sign = |v: f64| if v.abs() <= 1e-9 { 0 } else if v > 0.0 { 1 } else { -1 };
        for _ in 0..1000 {
            let x: Vec<f64> = raw.inner.iter().map(|c| c + r.random_range(-4.0..4.0)).collect();
            let s = poly.residuals(&Point::new(x.clone())).unwrap();
            for (i, (row, b)) in raw.rows.iter().zip(&raw.rhs).enumerate() {
                let raw_s = b - dot(row, &x);
                if raw_s.abs() > 1e-9 && s[i].abs() > 1e-9 {
                    prop_assert_eq!(sign(raw_s), sign(s[i]));
                }
            }
        }
    }

    #[test]
    fn residuals_are_affine(seed in any::<u64>(), t in -3.0..3.0_f64) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let s0 = poly.residuals(&p).unwrap();
        let s1 = poly.residuals(&p.offset(u.components(), t)).unwrap();
        for i in 0..poly.m() {
            let want = s0[i] - t * dot(poly.row(i), u.components());
            prop_assert!((s1[i] - want).abs() <= 1e-12, "{} vs {}", s1[i], want);
        }
    }

    #[test]
    fn section_contacts_lie_on_constraints(seed in any::<u64>()) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let sec = section(&poly, &p, &u, DEFAULT_PARALLEL_EPS).unwrap();
        for (i, d) in sec.distances().iter().enumerate() {
            if let Intercept::Finite(d) = *d {
                let s = poly.residuals(&p.offset(u.components(), d)).unwrap();
                prop_assert!(s[i].abs() <= 1e-9, "constraint {} residual {}", i, s[i]);
                prop_assert!(d >= sec.d_plus() || d <= sec.d_minus());
            }
        }
        prop_assert!(sec.d_minus() < 0.0 && sec.d_plus() > 0.0);
    }

    #[test]
    fn bracket_interior_is_feasible(seed in any::<u64>()) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let sec = section(&poly, &p, &u, DEFAULT_PARALLEL_EPS).unwrap();
        for j in 1..=100 {
            let t = sec.d_minus() + sec.width() * j as f64 / 101.0;
            let s = poly.residuals(&p.offset(u.components(), t)).unwrap();
            prop_assert!(s.values().iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn reversing_direction_negates_distances(seed in any::<u64>()) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let fwd = section(&poly, &p, &u, DEFAULT_PARALLEL_EPS).unwrap();
        let back = section(&poly, &p, &u.reversed(), DEFAULT_PARALLEL_EPS).unwrap();
        prop_assert_eq!(&fwd.reversed(), &back);
        prop_assert_eq!(fwd.d_plus(), -back.d_minus());
    }

    #[test]
    fn row_scaling_leaves_distances_unchanged(seed in any::<u64>(), c in 0.01..100.0_f64) {
        let (raw, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let i = r.random_range(0..raw.rows.len());
        let mut rows = raw.rows.clone();
        let mut rhs = raw.rhs.clone();
        rows[i].iter_mut().for_each(|a| *a *= c);
        rhs[i] *= c;
        let scaled = Polytope::new(rows, rhs).unwrap();
        let a = section(&poly, &p, &u, DEFAULT_PARALLEL_EPS).unwrap();
        let b = section(&scaled, &p, &u, DEFAULT_PARALLEL_EPS).unwrap();
        for (x, y) in a.distances().iter().zip(b.distances()) {
            match (x, y) {
                (Intercept::Finite(x), Intercept::Finite(y)) => {
                    prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
                }
                (Intercept::Parallel, Intercept::Parallel) => {}
                _ => prop_assert!(false, "parallel flag changed"),
            }
        }
        let fa = f_vector(&poly, &p).unwrap();
        let fb = f_vector(&scaled, &p).unwrap();
        for (x, y) in fa.components().iter().zip(fb.components()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn harmonic_sum_is_increasing(sec in sections(), a in 0.0..1.0_f64, b in 0.0..1.0_f64) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let at = |s: f64| sec.d_minus() + sec.width() * (1e-6 + s * (1.0 - 2e-6));
        prop_assert!(harmonic_sum(&sec, at(lo)) < harmonic_sum(&sec, at(hi)));
    }

    #[test]
    fn harmonic_sum_diverges_at_poles(sec in sections()) {
        let w = sec.width();
        prop_assert!(harmonic_sum(&sec, sec.d_minus() + 1e-6 * w) < 0.0);
        prop_assert!(harmonic_sum(&sec, sec.d_plus() - 1e-6 * w) > 0.0);
    }

    #[test]
    fn newton_matches_bisection(sec in sections()) {
        let newton = solve_harmonic_offset(&sec, 1e-10, DEFAULT_INNER_MAX_ITER).unwrap();
        let bisect = bisection_oracle(&sec, 1e-13).unwrap();
        prop_assert!(newton.h > sec.d_minus() && newton.h < sec.d_plus());
        prop_assert!((newton.h - bisect.h).abs() <= 1e-10 * (1.0 + sec.width()),
            "newton {} bisection {}", newton.h, bisect.h);
    }

    #[test]
    fn harmonic_point_is_idempotent_and_orientation_free(seed in any::<u64>()) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let tol = 1e-10;
        let q = harmonic_point_on_line(&poly, &p, &u, tol).unwrap();
        prop_assert!(poly.residuals(&q).unwrap().values().iter().all(|&s| s > 0.0));
        let q2 = harmonic_point_on_line(&poly, &q, &u, tol).unwrap();
        prop_assert!(q.distance(&q2) < tol);
        let qr = harmonic_point_on_line(&poly, &p, &u.reversed(), tol).unwrap();
        prop_assert!(q.distance(&qr) < 1e-9);
    }

    #[test]
    fn directional_sum_is_projection_of_f(seed in any::<u64>()) {
        let (_, poly, p, mut r) = sample(seed);
        let u = random_direction(&mut r, poly.n());
        let f = f_vector(&poly, &p).unwrap();
        let lhs = directional_sum(&poly, &p, &u).unwrap();
        prop_assert!((lhs - dot(u.components(), f.components())).abs() <= 1e-12);
    }

    #[test]
    fn axis_stages_decrease_the_barrier(seed in any::<u64>()) {
        let (_, poly, p, _) = sample(seed);
        let mut prev = barrier(&poly, &p);
        for q in cs_stages(&poly, &p, 1e-10).unwrap() {
            let now = barrier(&poly, &q);
            prop_assert!(now <= prev + 1e-12 * (1.0 + prev.abs()));
            prev = now;
        }
    }

    #[test]
    fn trace_csv_round_trips(
        rows in prop::collection::vec((prop::collection::vec(-1e6..1e6_f64, 3), 0.0..1e3_f64), 1..6)
    ) {
        let trace = CenterTrace {
            records: rows
                .into_iter()
                .enumerate()
                .map(|(iter, (x, fnorm))| TraceRecord { iter, point: Point::new(x), fnorm })
                .collect(),
            converged: true,
        };
        prop_assert_eq!(trace_from_csv(&trace_to_csv(&trace)).unwrap(), trace.records);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn center_is_the_log_barrier_minimizer(seed in any::<u64>()) {
        let (_, poly, p, _) = sample(seed);
        let opts = CenterOptions { stop_tol: 1e-10, inner_tol: 1e-13, max_iter: 10_000 };
        let (h, trace) = harmonic_center(&poly, &p, &opts).unwrap();
        prop_assert!(trace.converged);
        let oracle = newton_log_barrier_center(&poly, &p);
        prop_assert!(h.distance(&oracle) <= 1e-7, "{} vs {}", h, oracle);
    }

    #[test]
    fn bi_center_bisects_axis_chords(seed in any::<u64>()) {
        let (_, poly, p, _) = sample(seed);
        let opts = CenterOptions { stop_tol: 1e-9, max_iter: 10_000, ..CenterOptions::default() };
        let (c, trace) = bi_center(&poly, &p, &opts).unwrap();
        if trace.converged {
            prop_assert!(max_bisection_offset(&poly, &c).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn example_one_starts_share_a_limit() {
    let poly = fixture("example1.poly");
    let starts = [
        [9.0, 6.0],
        [3.0, 0.25],
        [2.0, 7.5],
        [5.0, 1.0],
        [7.0, 3.0],
        [5.0, 7.0],
    ];
    let centers: Vec<Point> = starts
        .iter()
        .map(|s| {
            harmonic_center(&poly, &pt(s), &CenterOptions::default())
                .unwrap()
                .0
        })
        .collect();
    for c in &centers {
        assert!(c.distance(&centers[0]) <= 0.02, "{c} vs {}", centers[0]);
    }
}

#[test]
fn fnorm_decreases_every_outer_iteration_on_examples() {
    let cases: [(&str, &[&[f64]]); 2] = [
        (
            "example1.poly",
            &[
                &[9.0, 6.0],
                &[3.0, 0.25],
                &[2.0, 7.5],
                &[5.0, 1.0],
                &[7.0, 3.0],
                &[5.0, 7.0],
            ],
        ),
        ("example2.poly", &[&[1.0, 2.0, 2.5, 1.3]]),
    ];
    let opts = CenterOptions {
        stop_tol: 1e-6,
        ..CenterOptions::default()
    };
    for (file, starts) in cases {
        let poly = fixture(file);
        for s in starts {
            let (_, trace) = harmonic_center(&poly, &pt(s), &opts).unwrap();
            for w in trace.records.windows(2) {
                assert!(
                    w[1].fnorm < w[0].fnorm,
                    "{file} from {s:?}: {} -> {}",
                    w[0].fnorm,
                    w[1].fnorm
                );
            }
        }
    }
}

/// Per-stage |F| on the worked examples. Stages that raise |F| are reported
/// rather than failed: the first x-stage from (3, 0.25) and from (2, 7.5) on
/// Example 1 does so. The barrier still falls at every stage.
#[test]
fn stage_fnorm_on_examples() {
    let cases: [(&str, &[f64]); 7] = [
        ("example1.poly", &[9.0, 6.0]),
        ("example1.poly", &[3.0, 0.25]),
        ("example1.poly", &[2.0, 7.5]),
        ("example1.poly", &[5.0, 1.0]),
        ("example1.poly", &[7.0, 3.0]),
        ("example1.poly", &[5.0, 7.0]),
        ("example2.poly", &[1.0, 2.0, 2.5, 1.3]),
    ];
    let mut increases = Vec::new();
    for (file, start) in cases {
        let poly = fixture(file);
        let (_, trace) = harmonic_center(&poly, &pt(start), &CenterOptions::default()).unwrap();
        for rec in &trace.records[..trace.records.len() - 1] {
            let mut prev = (
                f_vector(&poly, &rec.point).unwrap().norm(),
                barrier(&poly, &rec.point),
            );
            for (k, q) in cs_stages(&poly, &rec.point, 1e-10)
                .unwrap()
                .iter()
                .enumerate()
            {
                let now = (f_vector(&poly, q).unwrap().norm(), barrier(&poly, q));
                assert!(
                    now.1 <= prev.1 + 1e-12,
                    "barrier rose at {file} {start:?} stage {k}"
                );
                if now.0 > prev.0 {
                    increases.push(format!(
                        "{file} {start:?} iter {} axis {}: {:.4} -> {:.4}",
                        rec.iter + 1,
                        k + 1,
                        prev.0,
                        now.0
                    ));
                }
                prev = now;
            }
        }
    }
    for line in &increases {
        eprintln!("|F| rose within a sweep: {line}");
    }
    assert_eq!(increases.len(), 2, "{increases:#?}");
}

#[test]
fn bi_center_differs_from_harmonic_center_on_example_one() {
    let poly = fixture("example1.poly");
    let opts = CenterOptions {
        stop_tol: 1e-10,
        max_iter: 10_000,
        ..CenterOptions::default()
    };
    let (b, trace) = bi_center(&poly, &pt(&[3.0, 0.25]), &opts).unwrap();
    assert!(trace.converged);
    assert!(max_bisection_offset(&poly, &b).unwrap() <= 1e-10);
    let (h, _) = harmonic_center(&poly, &pt(&[3.0, 0.25]), &opts).unwrap();
    assert!(h.distance(&b) > 0.05, "harmonic {h} BI {b}");
}

#[test]
fn simplex_bi_and_harmonic_centers_coincide() {
    let poly = fixture("simplex.poly");
    let opts = CenterOptions {
        stop_tol: 1e-12,
        max_iter: 10_000,
        ..CenterOptions::default()
    };
    let (b, _) = bi_center(&poly, &pt(&[0.25, 0.25]), &opts).unwrap();
    let (h, _) = harmonic_center(&poly, &pt(&[0.25, 0.25]), &opts).unwrap();
    assert!(b.distance(&pt(&[1.0 / 3.0, 1.0 / 3.0])) < 1e-10);
    assert!(h.distance(&b) < 1e-10);
}

#[test]
fn example_two_start_is_interior() {
    let poly = fixture("example2.poly");
    let s = poly.residuals(&pt(&[1.0, 2.0, 2.5, 1.3])).unwrap();
    assert!(s.values().iter().all(|&v| v > 0.0));
}
