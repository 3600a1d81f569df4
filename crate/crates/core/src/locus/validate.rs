use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{CurveSet, EndpointTag};
use crate::harmonic::HarmonicFunction;
use crate::polynomials::{root_clusters, DEFAULT_CLUSTER_THRESHOLD};
use crate::upoly::vanishing_order_at_root;

/// Default tolerance on angular gaps, in degrees.
pub const DEFAULT_ANGLE_TOL: f64 = 2.0;

const U_ZERO_TOL: f64 = 1e-6;

/// Curve ends meeting at one root or junction.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexReport {
    pub point: Complex64,
    pub root: Option<usize>,
    /// Incident directions in degrees, sorted in `[0, 360)`.
    pub directions: Vec<f64>,
    /// Consecutive gaps between the directions, in degrees.
    pub gaps: Vec<f64>,
    /// Number of incident curves predicted by the order of vanishing of `u`.
    pub expected: Option<usize>,
}

/// Outcome of [`validate_structure`]; each list holds the violations of one
/// check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureReport {
    /// (a) closed curves and cycles through roots and junctions
    pub cycles: Vec<String>,
    /// (b) gaps at roots and junctions differing from `360°/m`
    pub angles: Vec<String>,
    /// (c) roots where the curve count is not `2k + 1`
    pub root_counts: Vec<String>,
    /// (d) interior junctions away from zeros of `u` or with the wrong count
    pub junctions: Vec<String>,
    /// curve ends that are neither roots, junctions nor on the boundary
    pub endpoints: Vec<String>,
    pub vertices: Vec<VertexReport>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.cycles.is_empty()
            && self.angles.is_empty()
            && self.root_counts.is_empty()
            && self.junctions.is_empty()
            && self.endpoints.is_empty()
    }

    pub fn violations(&self) -> Vec<String> {
        [
            &self.cycles,
            &self.angles,
            &self.root_counts,
            &self.junctions,
            &self.endpoints,
        ]
        .into_iter()
        .flatten()
        .cloned()
        .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Root(usize),
    Junction(u64, u64),
    Free(usize),
}

fn node(tag: &EndpointTag, fresh: &mut usize) -> Node {
    match tag {
        EndpointTag::Root(i) => Node::Root(*i),
        EndpointTag::Junction(p) => Node::Junction(p.re.to_bits(), p.im.to_bits()),
        _ => {
            *fresh += 1;
            Node::Free(*fresh)
        }
    }
}

/// Checks a traced locus against the structure theorem:
/// (a) no cycles among curves, roots and junctions; (b) `m` curves at a
/// point leave at gaps of `360°/m` within `tol_angle` degrees; (c) a root
/// where `u` vanishes to order `k` has `2k + 1` curves; (d) a junction away
/// from the roots sits within a cell of a zero of `u` of multiplicity `m`
/// and has `2(m + 1)` curves. Curve ends must be roots, junctions or on the
/// domain boundary.
///
/// With four curves at a zero of `u`, the directions show whether the two
/// arcs cross orthogonally; no prediction is made.
pub fn validate_structure(cs: &CurveSet, hf: &HarmonicFunction, tol_angle: f64) -> StructureReport {
    let mut report = StructureReport::default();
    let h = cs.domain.cell_width();

    // (a)
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut fresh = 0;
    for (k, c) in cs.curves.iter().enumerate() {
        if c.is_closed() {
            report
                .cycles
                .push(format!("curve {k} is closed ({} points)", c.points.len()));
            continue;
        }
        let mut id = |n: Node, parent: &mut Vec<usize>| {
            *ids.entry(n).or_insert_with(|| {
                parent.push(parent.len());
                parent.len() - 1
            })
        };
        let a = id(node(&c.start, &mut fresh), &mut parent);
        let b = id(node(&c.end, &mut fresh), &mut parent);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            report.cycles.push(format!(
                "curve {k} closes a cycle through {} and {}",
                c.points[0],
                c.points[c.points.len() - 1]
            ));
        } else {
            parent[ra] = rb;
        }
    }

    // endpoint law
    for (k, c) in cs.curves.iter().enumerate() {
        for (tag, p) in [(c.start, c.points[0]), (c.end, *c.points.last().unwrap())] {
            match tag {
                EndpointTag::Unresolved(_) if !c.is_closed() => report
                    .endpoints
                    .push(format!("curve {k} ends at {p}, away from roots and the boundary")),
                EndpointTag::DomainBoundary if !cs.domain.on_boundary(p) => report
                    .endpoints
                    .push(format!("curve {k} is tagged as leaving the domain at {p}")),
                EndpointTag::Root(i) if (hf.config().roots()[i] - p).norm() > 0.5 * h => report
                    .endpoints
                    .push(format!("curve {k} is tagged with root {} but ends at {p}", i + 1)),
                _ => {}
            }
        }
    }

    // incident directions, from each end to the next vertex along its curve
    let mut incident: HashMap<Node, (Complex64, Vec<f64>)> = HashMap::new();
    for (i, &r) in hf.config().roots().iter().enumerate() {
        incident.insert(Node::Root(i), (r, Vec::new()));
    }
    for c in cs.curves.iter().filter(|c| !c.is_closed() && c.points.len() >= 2) {
        let m = c.points.len();
        for (tag, p, q) in [
            (c.start, c.points[0], c.points[1]),
            (c.end, c.points[m - 1], c.points[m - 2]),
        ] {
            let key = match tag {
                EndpointTag::Root(i) => Node::Root(i),
                EndpointTag::Junction(j) => Node::Junction(j.re.to_bits(), j.im.to_bits()),
                _ => continue,
            };
            let entry = incident.entry(key).or_insert((p, Vec::new()));
            entry.1.push((q - p).arg().rem_euclid(TAU).to_degrees());
        }
    }

    let u = hf.u();
    let zeros = if u.degree().unwrap_or(0) > 0 {
        root_clusters(u, DEFAULT_CLUSTER_THRESHOLD).unwrap_or_default()
    } else {
        Vec::new()
    };
    let mut keys: Vec<Node> = incident.keys().copied().collect();
    keys.sort_by_key(|k| match k {
        Node::Root(i) => (0, *i as u64, 0),
        Node::Junction(a, b) => (1, *a, *b),
        Node::Free(i) => (2, *i as u64, 0),
    });
    for key in keys {
        let (point, mut dirs) = incident[&key].clone();
        dirs.sort_by(f64::total_cmp);
        let m = dirs.len();
        let gaps: Vec<f64> = (0..m)
            .map(|k| {
                if k + 1 < m {
                    dirs[k + 1] - dirs[k]
                } else {
                    dirs[0] + 360.0 - dirs[k]
                }
            })
            .collect();
        let label = match key {
            Node::Root(i) => format!("root {} at {point}", i + 1),
            _ => format!("junction at {point}"),
        };

        // (b)
        if m >= 2 {
            let ideal = 360.0 / m as f64;
            if let Some(bad) = gaps.iter().find(|g| (*g - ideal).abs() > tol_angle) {
                report
                    .angles
                    .push(format!("{label}: gap {bad:.2}° among {m} curves, expected {ideal:.2}°"));
            }
        }

        let expected = match key {
            // (c)
            Node::Root(i) => {
                let r = hf.config().roots()[i];
                let k = vanishing_order_at_root(u, r, U_ZERO_TOL).unwrap_or(0);
                let want = 2 * k + 1;
                if cs.domain.contains(r) && m != want {
                    report
                        .root_counts
                        .push(format!("{label}: {m} curves, expected 2k + 1 = {want} for k = {k}"));
                }
                Some(want)
            }
            // (d)
            _ => {
                let near = zeros
                    .iter()
                    .filter(|z| (z.center - point).norm() <= std::f64::consts::SQRT_2 * h)
                    .min_by(|a, b| (a.center - point).norm().total_cmp(&(b.center - point).norm()));
                match near {
                    None => {
                        report.junctions.push(format!("{label}: no zero of u within one cell"));
                        None
                    }
                    Some(z) => {
                        let want = 2 * (z.multiplicity + 1);
                        if m != want {
                            report.junctions.push(format!(
                                "{label}: {m} curves, expected 2(m + 1) = {want} for a zero of u of multiplicity {}",
                                z.multiplicity
                            ));
                        }
                        Some(want)
                    }
                }
            }
        };
        report.vertices.push(VertexReport {
            point,
            root: match key {
                Node::Root(i) => Some(i),
                _ => None,
            },
            directions: dirs,
            gaps,
            expected,
        });
    }
    report
}
