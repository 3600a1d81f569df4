use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use z2pell::locus::{hausdorff, DEFAULT_ANGLE_TOL};
use z2pell::{
    construct_from_growth, green_function, trace_zero_locus, validate_structure, BranchConfiguration, CurveSet,
    EndpointTag, GrowthSpec, HarmonicFunction, TraceDomain,
};

const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn green(roots: Vec<Complex64>) -> HarmonicFunction {
    green_function(&BranchConfiguration::new(roots).unwrap(), TOL).unwrap()
}

fn unit_roots(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

fn z4_minus_z() -> Vec<Complex64> {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    vec![c(0.0, 0.0), c(1.0, 0.0), w, w * w]
}

fn trace(hf: &HarmonicFunction, grid: usize) -> CurveSet {
    let start = Instant::now();
    let cs = trace_zero_locus(hf, &TraceDomain::square(2.0, grid).unwrap(), TOL).unwrap();
    assert!(
        start.elapsed().as_secs_f64() < 60.0,
        "tracing took {:?}",
        start.elapsed()
    );
    cs
}

fn assert_valid(cs: &CurveSet, hf: &HarmonicFunction) {
    let report = validate_structure(cs, hf, DEFAULT_ANGLE_TOL);
    assert!(report.passed(), "{:#?}", report.violations());
}

#[test]
fn quadratic_locus_is_the_segment() {
    let hf = green(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    let cs = trace(&hf, 400);
    assert_eq!(
        cs.curves.len(),
        1,
        "{:?}",
        cs.curves.iter().map(|c| (c.start, c.end)).collect::<Vec<_>>()
    );
    let curve = &cs.curves[0];
    let mut ends = [curve.start, curve.end];
    ends.sort_by_key(|t| format!("{t:?}"));
    assert_eq!(ends, [EndpointTag::Root(0), EndpointTag::Root(1)]);
    let d = hausdorff(&cs.polylines(), &[vec![c(-1.0, 0.0), c(1.0, 0.0)]]);
    assert!(d < 2.0 * cs.domain.cell_width(), "Hausdorff distance {d}");
    assert!(cs.junctions.is_empty());
    assert_valid(&cs, &hf);
}

#[test]
fn quartic_locus_is_two_diameters() {
    let hf = green(unit_roots(4));
    let cs = trace(&hf, 400);
    assert_eq!(cs.curves.len(), 4);
    assert_eq!(cs.junctions.len(), 1);
    let j = &cs.junctions[0];
    assert!(j.point.norm() < 1e-6 && j.root.is_none());
    assert_eq!(j.directions.len(), 4);
    for d in &j.directions {
        let got = d.to_degrees();
        let off = (got / 90.0 - (got / 90.0).round()).abs() * 90.0;
        assert!(off < 2.0, "direction {got}° is {off}° off an axis");
    }
    let diameters = vec![vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, -1.0), c(0.0, 1.0)]];
    assert!(hausdorff(&cs.polylines(), &diameters) < 2.0 * cs.domain.cell_width());
    assert_valid(&cs, &hf);
}

#[test]
fn three_curves_meet_at_the_centre_root() {
    let hf = green(z4_minus_z());
    let cs = trace(&hf, 400);
    assert_eq!(cs.curves.len(), 3);
    for curve in &cs.curves {
        let tags = [curve.start, curve.end];
        assert!(tags.contains(&EndpointTag::Root(0)), "{tags:?}");
    }
    let j = cs.junctions.iter().find(|j| j.root == Some(0)).expect("junction at 0");
    let dirs: Vec<f64> = j.directions.iter().map(|d| d.to_degrees()).collect();
    for k in 0..3 {
        let gap = if k < 2 {
            dirs[k + 1] - dirs[k]
        } else {
            dirs[0] + 360.0 - dirs[2]
        };
        assert!((gap - 120.0).abs() < 2.0, "gaps {dirs:?}");
    }
    assert_valid(&cs, &hf);
}

#[test]
fn ends_lie_on_roots_or_the_boundary() {
    // linear growth: the locus is unbounded and must leave the box
    let cfg = BranchConfiguration::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let hf = construct_from_growth(&cfg, &GrowthSpec::new(0.0, vec![c(0.0, 1.0)]).unwrap(), TOL).unwrap();
    let cs = trace(&hf, 200);
    assert!(!cs.curves.is_empty());
    for curve in &cs.curves {
        for (tag, p) in [
            (curve.start, curve.points[0]),
            (curve.end, *curve.points.last().unwrap()),
        ] {
            match tag {
                EndpointTag::Root(i) => assert!((p - cfg.roots()[i]).norm() < 1e-12),
                EndpointTag::DomainBoundary => assert!(cs.domain.on_boundary(p)),
                other => panic!("unexpected end {other:?}"),
            }
        }
    }
    assert_valid(&cs, &hf);
}

#[test]
fn no_loops_on_random_sextics() {
    let roots = vec![
        c(0.9, 0.1),
        c(-0.3, 0.8),
        c(-0.7, -0.5),
        c(0.2, -0.9),
        c(0.5, 0.6),
        c(-0.95, 0.2),
    ];
    let hf = green(roots);
    let cs = trace(&hf, 200);
    let report = validate_structure(&cs, &hf, DEFAULT_ANGLE_TOL);
    assert!(report.cycles.is_empty(), "{:?}", report.cycles);
    assert!(report.endpoints.is_empty(), "{:?}", report.endpoints);
    assert!(report.root_counts.is_empty(), "{:?}", report.root_counts);
}

#[test]
fn resolution_convergence() {
    for roots in [vec![c(-1.0, 0.0), c(1.0, 0.0)], unit_roots(4), z4_minus_z()] {
        let hf = green(roots);
        let coarse = trace(&hf, 100);
        let fine = trace(&hf, 200);
        let d = coarse.hausdorff_to(&fine);
        assert!(d < 2.0 * coarse.domain.cell_width(), "Hausdorff distance {d}");
    }
}

#[test]
fn flipped_sheet_traces_the_same_locus() {
    let hf = green(z4_minus_z());
    let a = trace(&hf, 100);
    let b = trace(&hf.flipped(), 100);
    assert!(a.hausdorff_to(&b) < 1e-9);
}

#[test]
fn rejects_roots_near_the_edge() {
    let hf = green(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    let dom = TraceDomain::new((-1.005, 2.0), (-2.0, 2.0), 400).unwrap();
    assert!(trace_zero_locus(&hf, &dom, TOL).unwrap_err().is_input_error());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn separated_roots(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((0.0..1.0f64, 0.0..2.0 * PI), m)
            .prop_map(|raw| {
                raw.iter()
                    .map(|&(r, t)| Complex64::from_polar(r.sqrt(), t))
                    .collect::<Vec<_>>()
            })
            .prop_filter("roots too close", |roots| {
                roots
                    .iter()
                    .enumerate()
                    .all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 0.3))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn green_loci_have_no_loops(roots in prop_oneof![separated_roots(4), separated_roots(6)]) {
            let hf = green(roots);
            let cs = trace(&hf, 160);
            let report = validate_structure(&cs, &hf, DEFAULT_ANGLE_TOL);
            prop_assert!(report.cycles.is_empty(), "{:?}", report.cycles);
            prop_assert!(report.endpoints.is_empty(), "{:?}", report.endpoints);
            prop_assert!(report.root_counts.is_empty(), "{:?}", report.root_counts);
        }
    }
}
