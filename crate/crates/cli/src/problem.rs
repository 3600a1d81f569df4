//! Problem files: `D` as roots or as exact Gaussian-rational coefficients.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use z2pell::polynomials::{parse_rational, root_clusters, DEFAULT_CLUSTER_THRESHOLD};
use z2pell::{BranchConfiguration, ComplexPoly, ExactPoly, GaussRat, PathSpec};

use crate::{sha256_hex, Failure};

pub const PROBLEM_SCHEMA: &str = "z2pell.problem/1";
pub const DEFAULT_TOL: f64 = 1e-10;

/// A rational written as a string (`"3/4"`, `"-2"`, `"0.5"`) or an integer.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Rational {
    Text(String),
    Int(i64),
}

impl Rational {
    fn text(&self) -> String {
        match self {
            Rational::Text(s) => s.clone(),
            Rational::Int(k) => k.to_string(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Complex([Rational; 2]),
    Real(Rational),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tolerances {
    quadrature: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default)]
    schema_version: Option<String>,
    /// `[re, im]` per root
    #[serde(default)]
    roots: Option<Vec<[f64; 2]>>,
    /// ascending powers of `z`
    #[serde(default)]
    coefficients: Option<Vec<Coefficient>>,
    /// waypoints of the path `z_1 → z_j`, for `j = 2..2n`
    #[serde(default)]
    paths: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    seed: Option<u64>,
}

/// What the report echoes about the input.
#[derive(Clone, Debug, Serialize)]
pub struct ProblemSummary {
    pub form: &'static str,
    pub degree: usize,
    /// Distinct roots of the monic `D`.
    pub roots: Vec<[f64; 2]>,
    pub multiplicities: Vec<usize>,
    /// Smallest distance between distinct roots; absent with a single root.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_separation: Option<f64>,
    /// Smallest distance from a path to a root it does not end at; absent
    /// when no path passes another root.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_clearance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub struct Problem {
    pub digest: String,
    /// Monic exact `D`, when given by coefficients.
    pub exact: Option<ExactPoly>,
    /// Monic `D`.
    pub d: ComplexPoly,
    /// Present when the roots are distinct.
    pub config: Option<BranchConfiguration>,
    pub tol: f64,
    pub summary: ProblemSummary,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

pub fn load(path: &Path, tol_override: Option<f64>) -> Result<Problem, Failure> {
    let bytes = std::fs::read(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let file: ProblemFile = serde_json::from_slice(&bytes).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    if let Some(v) = &file.schema_version {
        if v != PROBLEM_SCHEMA {
            return Err(invalid(format!(
                "unsupported problem schema {v:?}, expected {PROBLEM_SCHEMA:?}"
            )));
        }
    }
    let tol = tol_override.or(file.tolerances.quadrature).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let paths = file.paths.as_ref().map(|ps| {
        ps.iter()
            .map(|wps| wps.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });

    let (form, exact, d, config) = match (&file.roots, &file.coefficients) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(invalid("give exactly one of \"roots\" and \"coefficients\""));
        }
        (Some(roots), None) => {
            let roots: Vec<Complex64> = roots.iter().map(|r| Complex64::new(r[0], r[1])).collect();
            let cfg = configure(roots, paths.as_deref())?;
            ("roots", None, ComplexPoly::from_roots(cfg.roots()), Some(cfg))
        }
        (None, Some(coeffs)) => {
            let exact = exact_poly(coeffs)?;
            let d = exact.to_complex();
            let deg = exact.degree().unwrap_or(0);
            let config = if exact.distinct_root_count() == deg {
                let cfg = BranchConfiguration::from_poly(&d).map_err(Failure::from)?;
                match paths.as_deref() {
                    Some(p) => Some(configure(cfg.roots().to_vec(), Some(p))?),
                    None => Some(cfg),
                }
            } else {
                if paths.is_some() {
                    return Err(invalid("paths need distinct roots"));
                }
                None
            };
            ("coefficients", Some(exact), d, config)
        }
    };

    let (roots, multiplicities) = match &config {
        Some(cfg) => (cfg.roots().to_vec(), vec![1; cfg.roots().len()]),
        None => {
            let clusters = root_clusters(&d, DEFAULT_CLUSTER_THRESHOLD).map_err(Failure::from)?;
            (
                clusters.iter().map(|c| c.center).collect(),
                clusters.iter().map(|c| c.multiplicity).collect(),
            )
        }
    };
    let mut min_separation = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[..i] {
            min_separation = min_separation.min((a - b).norm());
        }
    }
    let summary = ProblemSummary {
        form,
        degree: d.degree().unwrap_or(0),
        roots: roots.iter().map(|&r| pair(r)).collect(),
        multiplicities,
        min_separation: Some(min_separation).filter(|s| s.is_finite()),
        path_clearance: config.as_ref().map(|c| c.clearance()).filter(|c| c.is_finite()),
        seed: file.seed,
    };
    Ok(Problem {
        digest: sha256_hex(&bytes),
        exact,
        d,
        config,
        tol,
        summary,
    })
}

fn configure(roots: Vec<Complex64>, paths: Option<&[Vec<Complex64>]>) -> Result<BranchConfiguration, Failure> {
    match paths {
        None => BranchConfiguration::new(roots).map_err(Failure::from),
        Some(ps) => {
            let specs = ps
                .iter()
                .enumerate()
                .map(|(j, wps)| PathSpec::new(wps.clone(), Some(0), Some(j + 1)))
                .collect::<z2pell::Result<Vec<_>>>()
                .map_err(Failure::from)?;
            BranchConfiguration::with_paths(roots, specs).map_err(Failure::from)
        }
    }
}

fn exact_poly(coeffs: &[Coefficient]) -> Result<ExactPoly, Failure> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let (re, im) = match c {
            Coefficient::Complex([re, im]) => (re.text(), im.text()),
            Coefficient::Real(re) => (re.text(), "0".to_string()),
        };
        let re = parse_rational(&re).map_err(Failure::from)?;
        let im = parse_rational(&im).map_err(Failure::from)?;
        out.push(GaussRat::new(re, im));
    }
    let p = ExactPoly::new(out);
    match p.degree() {
        None | Some(0) => Err(invalid("D must have positive degree")),
        Some(k) if k % 2 == 1 => Err(invalid(format!("D must have even degree, got {k}"))),
        Some(_) => Ok(p.monic()),
    }
}
