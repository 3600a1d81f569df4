//! The JSON run report.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use z2pell::pell::{PellStatus, Solution};
use z2pell::{ComplexPoly, ExactPoly, GaussRat, PellCertificate, PellVerdict};

use crate::problem::ProblemSummary;
use crate::sha256_hex;

pub const REPORT_SCHEMA: &str = "z2pell.report/1";

pub fn pairs(p: &ComplexPoly) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|c| [c.re, c.im]).collect()
}

fn gauss(c: &GaussRat) -> [String; 2] {
    [c.re.to_string(), c.im.to_string()]
}

fn exact_pairs(p: &ExactPoly) -> Vec<[String; 2]> {
    p.coeffs().iter().map(gauss).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct UReport {
    /// ascending, `[re, im]`
    pub coefficients: Vec<[f64; 2]>,
    /// tolerance requested from the period quadrature
    pub tolerance: f64,
    /// `max_j |Re v_j(U)|`, when the roots are distinct
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nullspace_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
    /// `"solve_u"` or `"with_multiplicity"` (`U_D = D_1·U_{D_0}`)
    pub method: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    /// `entries[j−2][k] = ∫_{z_1}^{z_j} z^k/√D`, `[re, im]`
    pub entries: Vec<Vec<[f64; 2]>>,
    pub tolerance: f64,
    /// largest quadrature error estimate
    pub max_error: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Polys {
    Complex {
        p: Vec<[f64; 2]>,
        q: Vec<[f64; 2]>,
    },
    Exact {
        p: Vec<[String; 2]>,
        q: Vec<[String; 2]>,
        c: [String; 2],
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub method: String,
    #[serde(flatten)]
    pub polys: Polys,
    pub lambda: f64,
    /// largest coefficient of `p² − q²D − 1`
    pub residual: f64,
}

impl CertificateReport {
    pub fn new(c: &PellCertificate) -> Self {
        let polys = match &c.solution {
            Solution::Complex { p, q } => Polys::Complex {
                p: pairs(p),
                q: pairs(q),
            },
            Solution::Exact { p, q, c } => Polys::Exact {
                p: exact_pairs(p),
                q: exact_pairs(q),
                c: gauss(c),
            },
        };
        CertificateReport {
            method: c.method.to_string(),
            polys,
            lambda: c.lambda,
            residual: c.residual,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub status: &'static str,
    /// the search bound or theorem behind a negative answer
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unconditional: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    /// tolerance the verdict was reached at; absent for exact verdicts
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl VerdictReport {
    pub fn new(v: &PellVerdict, tolerance: Option<f64>) -> Self {
        let (bound, unconditional, reason) = match &v.status {
            PellStatus::NotPellianUpTo(b) => (Some(b.to_string()), Some(b.is_unconditional()), None),
            PellStatus::Inconclusive(r) => (None, None, Some(r.clone())),
            PellStatus::Pellian(_) => (None, None, None),
        };
        VerdictReport {
            status: v.label(),
            bound,
            unconditional,
            reason,
            lambda: v.lambda,
            multipliers: v.multipliers.clone(),
            certificate: v.certificate().map(CertificateReport::new),
            tolerance,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Verdicts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<VerdictReport>,
    /// `agree`, `contradict` or `undecided`; present when both ran
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonicReport {
    /// `"green"`, `"growth"` or `"u"`
    pub source: &'static str,
    pub u: Vec<[f64; 2]>,
    /// factor applied to the function
    pub scale: f64,
    pub tolerance: f64,
    pub admissibility_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub c0: f64,
    pub c: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalSummary {
    pub points: usize,
    /// largest quadrature error estimate over the points
    pub max_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveSummary {
    pub points: usize,
    pub start: String,
    pub end: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct JunctionSummary {
    pub point: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    /// degrees
    pub directions: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusReport {
    /// `[re_min, re_max, im_min, im_max]`
    pub bbox: [f64; 4],
    pub grid: usize,
    pub cell_width: f64,
    pub curves: Vec<CurveSummary>,
    pub junctions: Vec<JunctionSummary>,
    pub structure_passed: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    /// command line after the program name
    pub command: Vec<String>,
    /// SHA-256 of the problem file
    pub input_digest: String,
    pub problem: ProblemSummary,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<UReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_matrix: Option<PeriodReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Verdicts>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateReport>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harmonic: Option<HarmonicReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus: Option<LocusReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    /// seconds per stage; only with `--timings`, never part of the digest
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    /// SHA-256 of this report serialized without `timings` and `digest`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>, input_digest: String, problem: ProblemSummary, tolerance: f64) -> Self {
        RunReport {
            schema_version: REPORT_SCHEMA,
            command,
            input_digest,
            problem,
            tolerance,
            u: None,
            period_matrix: None,
            verdicts: None,
            certificates: Vec::new(),
            residuals: BTreeMap::new(),
            harmonic: None,
            evaluation: None,
            locus: None,
            outputs: Vec::new(),
            timings: None,
            digest: None,
        }
    }

    /// Fills in `digest`, then serializes with `timings` if given.
    pub fn finish(mut self, timings: Option<BTreeMap<String, f64>>) -> String {
        self.timings = None;
        self.digest = None;
        let body = serde_json::to_vec(&self).expect("report serializes");
        self.digest = Some(sha256_hex(&body));
        self.timings = timings;
        let mut text = serde_json::to_string_pretty(&self).expect("report serializes");
        text.push('\n');
        text
    }
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}
