use std::cell::RefCell;

use num_complex::Complex64;
use proptest::prelude::*;
use trapfn::contour::{crossing_point_lower, sample, BranchSelector};
use trapfn::engine::{sum_trapezoid, Refinable};
use trapfn::tables::{run_table, TABLES};
use trapfn::{Error, MeshSpec};

#[test]
fn sum_examples() {
    let s = sum_trapezoid(|x: f64| Complex64::new((-x * x).exp(), 0.0), &MeshSpec::new(0.5)).unwrap();
    assert!((s.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert!(s.truncated_left && s.truncated_right);
    let s = sum_trapezoid(|x: f64| Complex64::new(1.0 / x.cosh(), 0.0), &MeshSpec::new(0.25)).unwrap();
    assert!((s.value.re - std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn errors_are_reported() {
    let r = sum_trapezoid(|_| Complex64::new(1.0, 0.0), &MeshSpec { max_terms_per_side: 10, ..MeshSpec::new(1.0) });
    assert!(matches!(r, Err(Error::TermCapExceeded { cap: 10, .. })));
    let r = sum_trapezoid(|x: f64| Complex64::new(if x > 2.0 { f64::NAN } else { 1.0 }, 0.0), &MeshSpec::new(1.0));
    assert!(matches!(r, Err(Error::NonFiniteTerm { arg }) if arg == 3.0));
}

#[test]
fn node_sets_nest_under_halving() {
    let record = |h: f64| {
        let seen = RefCell::new(Vec::new());
        sum_trapezoid(
            |x: f64| {
                seen.borrow_mut().push(x);
                Complex64::new((-x * x).exp(), 0.0)
            },
            &MeshSpec::new(h),
        )
        .unwrap();
        seen.into_inner()
    };
    let coarse = record(0.25);
    let fine = record(0.125);
    // tails may stop at slightly different places; inside the fine range
    // every coarse node is an (exactly equal) fine node
    let lo = fine.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fine.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for x in coarse.iter().filter(|x| (lo..=hi).contains(*x)) {
        assert!(fine.contains(x), "{x} missing at h/2");
    }
    // coarse value from the even fine nodes
    let even: f64 = fine.iter().filter(|x| (**x / 0.25).fract() == 0.0).map(|x| (-x * x).exp()).sum::<f64>() * 0.25;
    let direct = sum_trapezoid(|x: f64| Complex64::new((-x * x).exp(), 0.0), &MeshSpec::new(0.25)).unwrap();
    assert!((even - direct.value.re).abs() < 1e-15 * direct.value.re);
}

#[test]
fn sweep_order_is_outward_alternating() {
    let seen = RefCell::new(Vec::new());
    sum_trapezoid(
        |x: f64| {
            seen.borrow_mut().push(x);
            Complex64::new((-x * x).exp(), 0.0)
        },
        &MeshSpec::new(1.0),
    )
    .unwrap();
    assert_eq!(&seen.borrow()[..5], &[0.0, 1.0, -1.0, 2.0, -2.0]);
}

/// Extending every tail by 50 more sub-threshold terms must not move any
/// table value by more than `10 · trunc_tol` relative.
#[test]
fn truncation_is_sound_for_table_integrands() {
    let base = MeshSpec::default();
    let longer = MeshSpec {
        consecutive_small: base.consecutive_small + 50,
        ..base
    };
    for t in &TABLES {
        for c in t.columns {
            let h = 1.0 / f64::from(c.rows[c.depth() - 1].0);
            let (a, na) = c.function.evaluate_at(c.params, &base.with_h(h)).unwrap();
            let (b, nb) = c.function.evaluate_at(c.params, &longer.with_h(h)).unwrap();
            assert!(nb >= na + 100, "table {} {}", t.id, c.label);
            assert!(a.rel_diff(&b) <= 10.0 * base.trunc_tol, "table {} {}", t.id, c.label);
        }
    }
}

/// Successive differences shrink once in the geometric regime, until they
/// reach rounding level.
#[test]
fn refinement_is_monotone_for_table_integrands() {
    for t in &TABLES {
        let runs = run_table(t, 1.0, None, &MeshSpec::default()).unwrap();
        for r in runs {
            let d = r.report.successive_changes();
            for w in d.windows(2) {
                if w[0] < 1e-2 && w[0] > 1e-14 {
                    assert!(w[1] <= w[0], "table {} {}: {:?}", t.id, r.column.label, d);
                }
            }
        }
    }
}

#[test]
fn deterministic_table_values() {
    let a = run_table(&TABLES[1], 1.0, None, &MeshSpec::default()).unwrap();
    let b = run_table(&TABLES[1], 1.0, None, &MeshSpec::default()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        for (l, m) in x.report.levels.iter().zip(&y.report.levels) {
            assert_eq!(l.value.significand.to_bits(), m.value.significand.to_bits());
            assert_eq!(l.terms_used, m.terms_used);
        }
    }
}

#[test]
fn lower_contour_geometry() {
    for (s, x) in [(0.1, 1.0), (1.0, 0.1), (1000.0, 1000.0), (0.5, 50.0)] {
        let c = crossing_point_lower(s, x).unwrap();
        let mut prev_re = f64::INFINITY;
        for i in 0..=200 {
            let p = sample(c, i as f64 / 20.0);
            assert!(p.y.re < prev_re || i == 0);
            prev_re = p.y.re;
            assert!(p.y.norm() > 0.0 && (p.y + x).norm() > 0.0);
        }
    }
}

proptest! {
    #[test]
    fn crossing_bounds(s in 1e-3f64..1000.0, x in 1e-3f64..1000.0) {
        let c = crossing_point_lower(s, x).unwrap();
        prop_assert!(c >= (s + 1.0 - x).max(0.0) * (1.0 - 1e-15));
        let b = BranchSelector::upper(s, x).unwrap();
        prop_assert!(b.check(x).is_ok());
    }

    #[test]
    fn conjugate_symmetry(c in -10.0f64..10.0, u in -20.0f64..20.0) {
        let p = sample(c, u);
        let m = sample(c, -u);
        prop_assert_eq!(m.y, p.y.conj());
        prop_assert_eq!(m.dy_du, -p.dy_du.conj());
        prop_assert_eq!(sample(c, 0.0).y, Complex64::new(c, 0.0));
    }
}
