//! Property tests for the ordering, arc-membership, decomposition, and
//! norm-estimate invariants.

use proptest::prelude::*;
use std::f64::consts::TAU;

use sie_core::contour::{in_arc, make_circle, precedes};
use sie_core::piecewise::{decompose, ph_norm_estimate, JumpSet, PiecewiseFn};
use sie_core::Cx;

type C64 = Cx<f64>;

fn angle() -> impl Strategy<Value = f64> {
    (0.0..TAU).prop_map(|x| x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// precedes is a strict total order for any fixed reference angle:
    /// irreflexive, and exactly one direction holds for distinct angles.
    #[test]
    fn precedes_strict_total_order(a in angle(), b in angle(), r in angle()) {
        let contour = make_circle(1.0).unwrap();
        let pa = contour.point(a);
        let pb = contour.point(b);
        prop_assert!(!precedes(&pa, &pa, r));
        if pa.theta != pb.theta {
            prop_assert!(precedes(&pa, &pb, r) ^ precedes(&pb, &pa, r));
        }
    }

    /// Transitivity of precedes on sampled triples.
    #[test]
    fn precedes_transitive(a in angle(), b in angle(), cta in angle(), r in angle()) {
        let contour = make_circle(1.0).unwrap();
        let pa = contour.point(a);
        let pb = contour.point(b);
        let pc = contour.point(cta);
        if precedes(&pa, &pb, r) && precedes(&pb, &pc, r) {
            prop_assert!(precedes(&pa, &pc, r));
        }
    }

    /// The half-open arcs [s, e) and [e, s) partition the contour.
    #[test]
    fn in_arc_partitions_circle(t in angle(), s in angle(), e in angle()) {
        prop_assume!(s != e);
        let contour = make_circle(1.0).unwrap();
        let p = contour.point(t);
        prop_assert!(in_arc(&p, s, e) ^ in_arc(&p, e, s));
    }

    /// Decomposition recovers analytic jump sizes exactly and reassembles
    /// the function at non-jump angles.
    #[test]
    fn decompose_roundtrip(
        theta_d in 0.3f64..5.9,
        beta_re in -3.0f64..3.0,
        beta_im in -3.0f64..3.0,
        amp in -2.0f64..2.0,
    ) {
        let beta = C64::new(beta_re, beta_im);
        let js = JumpSet::new(vec![(theta_d, beta)]).unwrap();
        let base = move |th: f64| C64::new(amp * th.cos(), amp * th.sin());
        let eval = move |th: f64| {
            let mut v = base(th);
            if th >= theta_d {
                v += beta;
            }
            v
        };
        let f = PiecewiseFn::with_jumps(
            eval,
            js,
            vec![(base(theta_d), base(theta_d) + beta)],
        ).unwrap();
        let d = decompose(&f).unwrap();
        prop_assert!((d.steps.jumps()[0] - beta).norm() < 1e-12);
        for i in 0..8 {
            let th = TAU * (i as f64 + 0.37) / 8.0;
            if (th - theta_d).abs() < 1e-9 {
                continue;
            }
            let back = d.continuous.value(th) + d.steps.step_sum(th);
            prop_assert!((back - f.value(th)).norm() < 1e-12);
        }
    }

    /// Adding samples never decreases the estimated sup or seminorm.
    #[test]
    fn ph_norm_monotone_in_samples(seed in 0u64..1000) {
        let contour = make_circle(1.0).unwrap();
        let n = 64usize;
        let f = |th: f64| C64::new((3.0 * th).sin(), th.cos());
        let base: Vec<(f64, C64)> = (0..n)
            .map(|i| {
                let th = TAU * (i as f64 + 0.5) / n as f64;
                (th, f(th))
            })
            .collect();
        let extra_th = TAU * ((seed as f64) + 0.31) / 1000.0;
        let mut extended = base.clone();
        extended.push((extra_th, f(extra_th)));
        let js = JumpSet::empty();
        let small = ph_norm_estimate(&contour, &base, &js, 0.5).unwrap();
        let big = ph_norm_estimate(&contour, &extended, &js, 0.5).unwrap();
        prop_assert!(big.arc_sups[0] + 1e-15 >= small.arc_sups[0]);
        prop_assert!(big.arc_seminorms[0] + 1e-15 >= small.arc_seminorms[0]);
    }
}
