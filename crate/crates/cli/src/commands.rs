use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use z2pell::pell::{analytic_pell_test_with_certificate, coincidence_obstruction, AnalyticOptions, Solution};
use z2pell::pell::{Bound, PellStatus};
use z2pell::upoly::u_with_multiplicity_exact;
use z2pell::{
    analytic_pell_test, cf_pell_solve, construct_from_growth, green_function, solve_u, trace_zero_locus,
    u_with_multiplicity, validate_structure, BranchConfiguration, ComplexPoly, EndpointTag, Evaluation, ExactPoly,
    GaussRat, GrowthSpec, HarmonicFunction, PellVerdict, TraceDomain,
};

use crate::output;
use crate::problem::{self, Problem};
use crate::report::{
    complex_pair, pairs, CertificateReport, CurveSummary, EvalSummary, GrowthReport, HarmonicReport, JunctionSummary,
    LocusReport, PeriodReport, RunReport, UReport, VerdictReport, Verdicts,
};
use crate::{Common, Failure, Function, Outcome, Sampling};

struct Clock {
    on: bool,
    start: Instant,
    stages: BTreeMap<String, f64>,
}

impl Clock {
    fn new(on: bool) -> Self {
        Clock {
            on,
            start: Instant::now(),
            stages: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.stages.insert(stage.to_string(), (now - self.start).as_secs_f64());
        self.start = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.on.then_some(self.stages)
    }
}

fn load(common: &Common) -> Result<Problem, Failure> {
    problem::load(&common.problem, common.tol)
}

fn new_report(argv: Vec<String>, p: &Problem) -> RunReport {
    RunReport::new(argv, p.digest.clone(), p.summary.clone(), p.tol)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// Writes the report to `--out`, or to stdout unless stdout already
/// carries CSV.
fn emit(common: &Common, report: RunReport, clock: Clock, stdout_taken: bool) -> Result<(), Failure> {
    let text = report.finish(clock.finish());
    match &common.out {
        Some(path) => write_file(path, &text),
        None if !stdout_taken => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("cannot write report: {e}")))
        }
        None => Ok(()),
    }
}

fn needs_config(p: &Problem) -> Result<&BranchConfiguration, Failure> {
    p.config
        .as_ref()
        .ok_or_else(|| Failure::Input("D has repeated roots; this command needs distinct roots".into()))
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let t = s.trim();
    Complex64::from_str(t).map_err(|_| Failure::Input(format!("bad complex number {t:?}")))
}

fn parse_growth(s: &str) -> Result<GrowthSpec, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let c0 = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| Failure::Input(format!("c0 must be real, got {:?}", parts[0])))?;
    let mut c = parts[1..]
        .iter()
        .map(|t| parse_complex(t))
        .collect::<Result<Vec<_>, _>>()?;
    // trailing zeros do not change the growth
    while c.last() == Some(&Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    GrowthSpec::new(c0, c).map_err(Failure::from)
}

fn parse_bbox(s: &str, grid: usize) -> Result<TraceDomain, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("bad bbox {s:?}")))?;
    if v.len() != 4 {
        return Err(Failure::Input(format!("bbox needs 4 numbers, got {}", v.len())));
    }
    TraceDomain::new((v[0], v[1]), (v[2], v[3]), grid).map_err(Failure::from)
}

fn domain(bbox: Option<&str>, grid: usize, p: &Problem) -> Result<TraceDomain, Failure> {
    match bbox {
        Some(s) => parse_bbox(s, grid),
        None => {
            let roots: Vec<Complex64> = p.summary.roots.iter().map(|r| Complex64::new(r[0], r[1])).collect();
            TraceDomain::around(&roots, grid).map_err(Failure::from)
        }
    }
}

fn harmonic_report(
    source: &'static str,
    hf: &HarmonicFunction,
    scale: f64,
    growth: Option<&GrowthSpec>,
) -> HarmonicReport {
    HarmonicReport {
        source,
        u: pairs(hf.u()),
        scale,
        tolerance: hf.tol(),
        admissibility_residual: hf.admissibility_residual(),
        growth: growth.map(|g| GrowthReport {
            c0: g.c0,
            c: g.c.iter().map(|&c| complex_pair(c)).collect(),
        }),
    }
}

fn build_function(p: &Problem, f: &Function) -> Result<(HarmonicFunction, HarmonicReport), Failure> {
    let cfg = needs_config(p)?;
    if let Some(g) = &f.growth {
        let spec = parse_growth(g)?;
        let hf = construct_from_growth(cfg, &spec, p.tol)?;
        let rep = harmonic_report("growth", &hf, 1.0, Some(&spec));
        return Ok((hf, rep));
    }
    if let Some(u) = &f.u {
        let coeffs = u.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
        let hf = HarmonicFunction::new(ComplexPoly::new(coeffs), cfg.clone(), p.tol)?;
        let rep = harmonic_report("u", &hf, 1.0, None);
        return Ok((hf, rep));
    }
    let hf = green_function(cfg, p.tol)?;
    let rep = harmonic_report("green", &hf, 1.0, None);
    Ok((hf, rep))
}

fn sample_points(s: &Sampling, p: &Problem) -> Result<Option<Vec<Complex64>>, Failure> {
    if let Some(path) = &s.points {
        return output::read_points(path).map(Some);
    }
    let Some(n) = s.grid else {
        return Ok(None);
    };
    let dom = domain(s.bbox.as_deref(), n.max(8), p)?;
    let (hx, hy) = (
        (dom.re_max - dom.re_min) / n as f64,
        (dom.im_max - dom.im_min) / n as f64,
    );
    let mut pts = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            pts.push(Complex64::new(dom.re_min + i as f64 * hx, dom.im_min + j as f64 * hy));
        }
    }
    Ok(Some(pts))
}

/// Evaluates at the sampled points and writes the CSV; true when the CSV
/// went to stdout.
fn evaluate(hf: &HarmonicFunction, pts: &[Complex64], s: &Sampling, report: &mut RunReport) -> Result<bool, Failure> {
    let tol = hf.tol();
    let values: Vec<Evaluation> = pts
        .par_iter()
        .map(|&z| hf.eval_f(z, tol))
        .collect::<z2pell::Result<_>>()?;
    report.evaluation = Some(EvalSummary {
        points: values.len(),
        max_error: values.iter().map(|e| e.error).fold(0.0, f64::max),
    });
    match &s.csv {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            output::write_values(BufWriter::new(file), &values)?;
            report.outputs.push(path.display().to_string());
            Ok(false)
        }
        None => {
            output::write_values(io::stdout().lock(), &values)?;
            Ok(true)
        }
    }
}

pub fn upoly(common: &Common, argv: Vec<String>) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    clock.lap("load");
    match (&p.config, &p.exact) {
        (Some(cfg), _) => {
            let r = solve_u(cfg, p.tol)?;
            report.u = Some(UReport {
                coefficients: pairs(&r.u),
                tolerance: p.tol,
                admissibility_residual: Some(r.residual),
                nullspace_gap: Some(r.nullspace_gap),
                condition: Some(r.condition),
                singular_values: Some(r.singular_values.clone()),
                method: "solve_u",
            });
            report.period_matrix = Some(PeriodReport {
                entries: r
                    .periods
                    .entries
                    .iter()
                    .map(|row| row.iter().map(|&v| complex_pair(v)).collect())
                    .collect(),
                tolerance: r.periods.tol,
                max_error: r.periods.max_error,
            });
        }
        (None, Some(exact)) => {
            let u = u_with_multiplicity_exact(exact, p.tol)?;
            report.u = Some(UReport {
                coefficients: pairs(&u),
                tolerance: p.tol,
                admissibility_residual: None,
                nullspace_gap: None,
                condition: None,
                singular_values: None,
                method: "with_multiplicity",
            });
        }
        (None, None) => {
            let u = u_with_multiplicity(&p.d, p.tol)?;
            report.u = Some(UReport {
                coefficients: pairs(&u),
                tolerance: p.tol,
                admissibility_residual: None,
                nullspace_gap: None,
                condition: None,
                singular_values: None,
                method: "with_multiplicity",
            });
        }
    }
    clock.lap("solve_u");
    emit(common, report, clock, false)?;
    Ok(Outcome { inconclusive: false })
}

/// `2pU − 2q'D − qD'` with `U = p'/q`, largest coefficient; `None` when
/// `q` does not divide `p'`.
fn theorem_identity(p: &ExactPoly, q: &ExactPoly, d: &ExactPoly) -> Option<f64> {
    let (u, r) = p.derivative().div_rem(q).ok()?;
    if !r.is_zero() {
        return None;
    }
    let two = GaussRat::from_ints(2, 0);
    let lhs = &(&(p * &u).scale(&two) - &(&q.derivative() * d).scale(&two)) - &(q * &d.derivative());
    Some(lhs.coeffs().iter().map(|c| c.to_complex().norm()).fold(0.0, f64::max))
}

fn analytic_verdict(p: &Problem, qmax: u64) -> Result<PellVerdict, Failure> {
    let opts = AnalyticOptions { qmax, tol: p.tol };
    match &p.config {
        Some(cfg) => {
            if let Some(reason) = coincidence_obstruction(cfg) {
                return Ok(PellVerdict::bare(PellStatus::Inconclusive(reason)));
            }
            let u = solve_u(cfg, p.tol)?.u;
            Ok(analytic_pell_test_with_certificate(cfg, &u, opts)?)
        }
        None => {
            // repeated roots: only the distinct-root screen applies
            let n = p.summary.degree / 2;
            let distinct = p.summary.roots.len();
            let status = if distinct <= n {
                PellStatus::NotPellianUpTo(Bound::FewDistinctRoots { distinct, n })
            } else {
                PellStatus::Inconclusive("the period criterion needs distinct roots".into())
            };
            Ok(PellVerdict {
                status,
                multipliers: None,
                lambda: None,
            })
        }
    }
}

pub fn pell_check(
    common: &Common,
    argv: Vec<String>,
    qmax: u64,
    max_steps: usize,
    strict: bool,
) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    clock.lap("load");

    let analytic = analytic_verdict(&p, qmax)?;
    clock.lap("analytic");
    let exact = match &p.exact {
        Some(d) => Some(cf_pell_solve(d, max_steps)?),
        None => None,
    };
    clock.lap("exact");

    let mut verdicts = Verdicts {
        analytic: Some(VerdictReport::new(&analytic, Some(p.tol))),
        ..Verdicts::default()
    };
    if let Some(c) = analytic.certificate() {
        report.certificates.push(CertificateReport::new(c));
        report.residuals.insert("pell_identity_analytic".into(), c.residual);
    }
    if let Some(e) = &exact {
        verdicts.exact = Some(VerdictReport::new(e, None));
        verdicts.agreement = Some(if analytic.is_inconclusive() || e.is_inconclusive() {
            "undecided"
        } else if analytic.is_pellian() == e.is_pellian() {
            "agree"
        } else {
            "contradict"
        });
        if let Some(c) = e.certificate() {
            report.certificates.push(CertificateReport::new(c));
            report.residuals.insert("pell_identity_exact".into(), c.residual);
            if let (Solution::Exact { p: pp, q, .. }, Some(d)) = (&c.solution, &p.exact) {
                if let Some(r) = theorem_identity(pp, q, d) {
                    report.residuals.insert("u_identity_exact".into(), r);
                }
            }
        }
    }
    let inconclusive = analytic.is_inconclusive() || exact.as_ref().is_some_and(|e| e.is_inconclusive());
    report.verdicts = Some(verdicts);
    emit(common, report, clock, false)?;
    Ok(Outcome {
        inconclusive: strict && inconclusive,
    })
}

pub fn eval(common: &Common, argv: Vec<String>, f: &Function, s: &Sampling) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    let pts = sample_points(s, &p)?.ok_or_else(|| Failure::Input("give --points or --grid".into()))?;
    clock.lap("load");
    let (hf, rep) = build_function(&p, f)?;
    report.harmonic = Some(rep);
    clock.lap("build");
    let taken = evaluate(&hf, &pts, s, &mut report)?;
    clock.lap("evaluate");
    emit(common, report, clock, taken)?;
    Ok(Outcome { inconclusive: false })
}

pub fn green(common: &Common, argv: Vec<String>, s: &Sampling, scale: &str, qmax: u64) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    let pts = sample_points(s, &p)?;
    let cfg = needs_config(&p)?;
    clock.lap("load");
    let g = green_function(cfg, p.tol)?;
    clock.lap("build");
    let factor = match scale {
        "monic" => 1.0,
        "auto" => {
            let v = analytic_pell_test(cfg, g.u(), AnalyticOptions { qmax, tol: p.tol })?;
            let lambda = v.lambda.filter(|_| v.is_pellian()).unwrap_or(1.0);
            report.verdicts = Some(Verdicts {
                analytic: Some(VerdictReport::new(&v, Some(p.tol))),
                ..Verdicts::default()
            });
            lambda
        }
        other => other
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x != 0.0)
            .ok_or_else(|| {
                Failure::Input(format!(
                    "--scale must be auto, monic or a nonzero number, got {other:?}"
                ))
            })?,
    };
    let hf = if factor == 1.0 { g } else { g.scaled(factor) };
    report.harmonic = Some(harmonic_report("green", &hf, factor, None));
    clock.lap("scale");
    let taken = match pts {
        Some(pts) => evaluate(&hf, &pts, s, &mut report)?,
        None => false,
    };
    clock.lap("evaluate");
    emit(common, report, clock, taken)?;
    Ok(Outcome { inconclusive: false })
}

pub fn construct(common: &Common, argv: Vec<String>, growth: &str, s: &Sampling) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    let pts = sample_points(s, &p)?;
    clock.lap("load");
    let f = Function {
        growth: Some(growth.to_string()),
        u: None,
    };
    let (hf, rep) = build_function(&p, &f)?;
    report.harmonic = Some(rep);
    clock.lap("build");
    let taken = match pts {
        Some(pts) => evaluate(&hf, &pts, s, &mut report)?,
        None => false,
    };
    clock.lap("evaluate");
    emit(common, report, clock, taken)?;
    Ok(Outcome { inconclusive: false })
}

pub struct ZerosArgs<'a> {
    pub bbox: Option<&'a str>,
    pub grid: usize,
    pub csv: Option<&'a Path>,
    pub svg: Option<&'a Path>,
    pub angle_tol: f64,
}

fn tag_text(t: &EndpointTag) -> String {
    match t {
        EndpointTag::Root(i) => format!("root {}", i + 1),
        EndpointTag::DomainBoundary => "boundary".into(),
        EndpointTag::Junction(p) => format!("junction {} {}", p.re, p.im),
        EndpointTag::Unresolved(p) => format!("unresolved {} {}", p.re, p.im),
    }
}

pub fn zeros(common: &Common, argv: Vec<String>, f: &Function, z: ZerosArgs) -> Result<Outcome, Failure> {
    let mut clock = Clock::new(common.timings);
    let p = load(common)?;
    let mut report = new_report(argv, &p);
    let dom = domain(z.bbox, z.grid, &p)?;
    if !(z.angle_tol > 0.0) {
        return Err(Failure::Input("angle tolerance must be positive".into()));
    }
    clock.lap("load");
    let (hf, rep) = build_function(&p, f)?;
    report.harmonic = Some(rep);
    clock.lap("build");
    let cs = trace_zero_locus(&hf, &dom, p.tol)?;
    clock.lap("trace");
    let check = validate_structure(&cs, &hf, z.angle_tol);
    report.locus = Some(LocusReport {
        bbox: [dom.re_min, dom.re_max, dom.im_min, dom.im_max],
        grid: dom.resolution,
        cell_width: dom.cell_width(),
        curves: cs
            .curves
            .iter()
            .map(|c| CurveSummary {
                points: c.points.len(),
                start: tag_text(&c.start),
                end: tag_text(&c.end),
            })
            .collect(),
        junctions: cs
            .junctions
            .iter()
            .map(|j| JunctionSummary {
                point: complex_pair(j.point),
                root: j.root,
                directions: j.directions.iter().map(|d| d.to_degrees()).collect(),
            })
            .collect(),
        structure_passed: check.passed(),
        violations: check.violations(),
    });
    let taken = match z.csv {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            output::write_curves(BufWriter::new(file), &cs)?;
            report.outputs.push(path.display().to_string());
            false
        }
        None => {
            output::write_curves(io::stdout().lock(), &cs)?;
            true
        }
    };
    if let Some(path) = z.svg {
        write_file(path, &output::svg(&cs, hf.config().roots()))?;
        report.outputs.push(path.display().to_string());
    }
    clock.lap("write");
    emit(common, report, clock, taken)?;
    Ok(Outcome { inconclusive: false })
}
