use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Curve, CurveSet, EndpointTag, Junction, TraceDomain};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicFunction;
use crate::polynomials::{root_clusters, DEFAULT_CLUSTER_THRESHOLD};

/// Interior lattice nodes are displaced by up to this fraction of a cell so
/// that symmetric loci do not run along lattice lines.
const JITTER: f64 = 0.05;
const REFINE_STEPS: usize = 12;
/// A zero of `u` is a junction of the locus when `|f|` there is below this
/// fraction of the mean `|f|` on its block boundary.
const ZERO_RATIO: f64 = 0.05;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edge {
    /// `(i, j) → (i + 1, j)`
    H(usize, usize),
    /// `(i, j) → (i, j + 1)`
    V(usize, usize),
}

#[derive(Clone, Copy, Debug)]
enum Special {
    Root(usize),
    Zero,
}

/// A special point, what it is, and the cell it sits in.
type Located = (Complex64, Special, (usize, usize));

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Crossing { boundary: bool },
    Root(usize),
    Zero,
    Merged,
}

struct Lattice<'a> {
    hf: &'a HarmonicFunction,
    n: usize,
    pos: Vec<Complex64>,
    sheet: Vec<Complex64>,
    prim: Vec<Complex64>,
    /// sheet agreement along each edge, indexed by `edge_index`
    sign: Vec<Option<f64>>,
}

impl<'a> Lattice<'a> {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.n + 1) + i
    }

    fn f(&self, k: usize) -> f64 {
        self.prim[k].re
    }

    fn ends(&self, e: Edge) -> (usize, usize) {
        match e {
            Edge::H(i, j) => (self.idx(i, j), self.idx(i + 1, j)),
            Edge::V(i, j) => (self.idx(i, j), self.idx(i, j + 1)),
        }
    }

    fn edge_index(&self, e: Edge) -> usize {
        let n = self.n;
        match e {
            Edge::H(i, j) => j * n + i,
            Edge::V(i, j) => n * (n + 1) + i * n + j,
        }
    }

    fn edge_count(&self) -> usize {
        2 * self.n * (self.n + 1)
    }

    fn edge_at(&self, k: usize) -> Edge {
        let n = self.n;
        if k < n * (n + 1) {
            Edge::H(k % n, k / n)
        } else {
            let k = k - n * (n + 1);
            Edge::V(k / n, k % n)
        }
    }

    /// Cells on either side of an edge.
    fn sides(&self, e: Edge) -> [Option<(usize, usize)>; 2] {
        let n = self.n;
        match e {
            Edge::H(i, j) => [j.checked_sub(1).map(|jj| (i, jj)), (j < n).then_some((i, j))],
            Edge::V(i, j) => [i.checked_sub(1).map(|ii| (ii, j)), (i < n).then_some((i, j))],
        }
    }

    fn on_bbox(&self, e: Edge) -> bool {
        self.sides(e).iter().any(|s| s.is_none())
    }

    fn sign(&self, e: Edge) -> Result<f64> {
        self.sign[self.edge_index(e)].ok_or_else(|| Error::Continuation {
            near: format!("{}", self.pos[self.ends(e).0]),
            reason: "√D could not be continued along a lattice edge".into(),
        })
    }

    /// `f` at both ends of `e` in the trivialization of its first end.
    fn edge_values(&self, e: Edge) -> Result<(f64, f64)> {
        let (a, b) = self.ends(e);
        Ok((self.f(a), self.sign(e)? * self.f(b)))
    }

    /// The 12 edges bounding the 3×3 block of cells centred on `(ci, cj)`.
    fn block_boundary(&self, ci: usize, cj: usize) -> Vec<Edge> {
        let (i0, i1, j0, j1) = (ci - 1, ci + 2, cj - 1, cj + 2);
        let mut out = Vec::with_capacity(12);
        for i in i0..i1 {
            out.push(Edge::H(i, j0));
            out.push(Edge::H(i, j1));
        }
        for j in j0..j1 {
            out.push(Edge::V(i0, j));
            out.push(Edge::V(i1, j));
        }
        out
    }
}

/// Deterministic value in `[−1, 1]` per node and component.
fn jitter(i: usize, j: usize, component: u64) -> f64 {
    let mut x = (i as u64) << 32 ^ (j as u64) << 1 ^ component;
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    (x >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

fn node_positions(dom: &TraceDomain) -> Vec<Complex64> {
    let n = dom.resolution;
    let (hx, hy) = dom.cell_size();
    let mut pos = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            // boundary nodes only slide along their side
            let dx = if i == 0 || i == n {
                0.0
            } else {
                JITTER * hx * jitter(i, j, 0)
            };
            let dy = if j == 0 || j == n {
                0.0
            } else {
                JITTER * hy * jitter(i, j, 1)
            };
            pos.push(Complex64::new(
                dom.re_min + i as f64 * hx + dx,
                dom.im_min + j as f64 * hy + dy,
            ));
        }
    }
    pos
}

/// Cell `(i, j)` whose nominal square contains `z`.
fn cell_of(dom: &TraceDomain, z: Complex64) -> (usize, usize) {
    let (hx, hy) = dom.cell_size();
    let n = dom.resolution as f64;
    let ci = ((z.re - dom.re_min) / hx).floor().clamp(0.0, n - 1.0) as usize;
    let cj = ((z.im - dom.im_min) / hy).floor().clamp(0.0, n - 1.0) as usize;
    (ci, cj)
}

/// Sheets and primitives at every node, continued from the corner
/// `(0, 0)` up the first column and then along each row.
fn evaluate_nodes(hf: &HarmonicFunction, pos: &[Complex64], n: usize, tol: f64) -> Result<Vec<(Complex64, Complex64)>> {
    let step = tol / (2 * (n + 1)) as f64;
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let first = hf.eval_f(pos[0], step)?;
    let mut column = vec![(first.sheet, first.primitive)];
    for j in 1..=n {
        let (w, p) = column[j - 1];
        column.push(hf.continue_value(pos[idx(0, j - 1)], w, p, pos[idx(0, j)], step)?);
    }
    let rows: Vec<Vec<(Complex64, Complex64)>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let mut row = Vec::with_capacity(n + 1);
            row.push(column[j]);
            for i in 1..=n {
                let (w, p) = row[i - 1];
                row.push(hf.continue_value(pos[idx(i - 1, j)], w, p, pos[idx(i, j)], step)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `+1` when continuing `w_a` along the segment `a → b` arrives at `w_b`.
fn sheet_sign(hf: &HarmonicFunction, a: Complex64, b: Complex64, w_a: Complex64, w_b: Complex64) -> Result<f64> {
    if w_a == zero() || w_b == zero() {
        // one end is a root, where f vanishes
        return Ok(1.0);
    }
    let w = hf.config().system().continue_segment(a, b, w_a)?;
    Ok(if (w * w_b.conj()).re >= 0.0 { 1.0 } else { -1.0 })
}

/// The zero of `f` on the edge `a → b`, by regula falsi with the Illinois
/// modification, starting from the linear interpolant.
fn refine(lat: &Lattice, e: Edge, tol: f64) -> Result<Complex64> {
    let (a, b) = lat.ends(e);
    let (za, zb) = (lat.pos[a], lat.pos[b]);
    let (va, vb) = lat.edge_values(e)?;
    let linear = za + (zb - za) * (va / (va - vb));
    let (w_a, p_a) = (lat.sheet[a], lat.prim[a]);
    if w_a == zero() {
        return Ok(linear);
    }
    let value = |t: f64| -> Result<f64> {
        let z = za + (zb - za) * t;
        let (w, p) = lat.hf.continue_value(za, w_a, p_a, z, tol)?;
        Ok(sheet_sign(lat.hf, za, z, w_a, w)? * p.re)
    };
    let (mut t0, mut g0, mut t1, mut g1) = (0.0, va, 1.0, vb);
    let mut last = 0;
    for _ in 0..REFINE_STEPS {
        let t = t0 - g0 * (t1 - t0) / (g1 - g0);
        let g = value(t)?;
        if g.abs() <= tol {
            return Ok(za + (zb - za) * t);
        }
        if (g >= 0.0) == (g0 >= 0.0) {
            t0 = t;
            g0 = g;
            if last == -1 {
                g1 *= 0.5;
            }
            last = -1;
        } else {
            t1 = t;
            g1 = g;
            if last == 1 {
                g0 *= 0.5;
            }
            last = 1;
        }
        if t1 - t0 < 1e-10 {
            break;
        }
    }
    let t = t0 - g0 * (t1 - t0) / (g1 - g0);
    Ok(za + (zb - za) * t)
}

struct Graph {
    points: Vec<Complex64>,
    kind: Vec<Kind>,
    adj: Vec<Vec<(usize, usize)>>,
    edges: usize,
}

impl Graph {
    fn add_vertex(&mut self, p: Complex64, k: Kind) -> usize {
        self.points.push(p);
        self.kind.push(k);
        self.adj.push(Vec::new());
        self.points.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        let e = self.edges;
        self.edges += 1;
        self.adj[a].push((b, e));
        self.adj[b].push((a, e));
    }

    fn terminal(&self, v: usize) -> bool {
        match self.kind[v] {
            Kind::Root(_) | Kind::Zero => true,
            _ => self.adj[v].len() != 2,
        }
    }
}

/// Traces `{f = 0}` on `domain`.
///
/// `√D` is continued from the lattice corner up the first column and along
/// every row. Each edge then records whether straight continuation agrees
/// with the sheets at its ends, so every cell gets corner values in one
/// trivialization; a cell whose four edge signs multiply to `−1` encloses
/// a branch point nobody accounted for and is reported as an error.
/// Crossings are refined on the edges, joined by marching squares, and
/// inside the 3×3 block of cells around each root (and each zero of `u`
/// where `f` vanishes) joined radially to the centre, following the local
/// model of `2k + 1` (resp. `2m + 2`) rays. Loose ends within half a cell
/// of each other are merged.
pub fn trace_zero_locus(hf: &HarmonicFunction, domain: &TraceDomain, tol: f64) -> Result<CurveSet> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if hf.u().is_zero() {
        return Err(Error::invalid("f vanishes identically; there is no locus to trace"));
    }
    let roots = hf.config().roots();
    domain.check_roots(roots)?;
    let n = domain.resolution;
    let pos = node_positions(domain);
    let nodes = evaluate_nodes(hf, &pos, n, tol)?;
    let (sheet, prim): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
    let mut lat = Lattice {
        hf,
        n,
        pos,
        sheet,
        prim,
        sign: Vec::new(),
    };
    let sign: Vec<Option<f64>> = (0..lat.edge_count())
        .into_par_iter()
        .map(|k| {
            let (a, b) = lat.ends(lat.edge_at(k));
            sheet_sign(hf, lat.pos[a], lat.pos[b], lat.sheet[a], lat.sheet[b]).ok()
        })
        .collect();
    lat.sign = sign;

    // centres of the blocks handled by the local model
    let mut specials: Vec<Located> = roots
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, Special::Root(i), cell_of(domain, r)))
        .collect();
    specials.extend(junction_zeros(&lat, domain, tol)?);

    let mut blocked: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (s, &(_, _, (ci, cj))) in specials.iter().enumerate() {
        for i in ci - 1..=ci + 1 {
            for j in cj - 1..=cj + 1 {
                blocked[j * n + i].push(s);
            }
        }
    }
    let is_blocked = |c: Option<(usize, usize)>| c.is_some_and(|(i, j)| !blocked[j * n + i].is_empty());

    // crossings on every edge not inside a block
    let candidates: Vec<Edge> = (0..lat.edge_count())
        .map(|k| lat.edge_at(k))
        .filter(|&e| !lat.sides(e).iter().all(|s| is_blocked(*s)))
        .collect();
    let mut crossing_edges = Vec::new();
    for e in candidates {
        let (va, vb) = lat.edge_values(e)?;
        if (va >= 0.0) != (vb >= 0.0) {
            crossing_edges.push(e);
        }
    }
    let refine_tol = tol / (2 * (n + 1)) as f64;
    let crossing_points: Vec<Complex64> = crossing_edges
        .par_iter()
        .map(|&e| refine(&lat, e, refine_tol))
        .collect::<Result<_>>()?;

    let mut g = Graph {
        points: Vec::new(),
        kind: Vec::new(),
        adj: Vec::new(),
        edges: 0,
    };
    let special_vertex: Vec<usize> = specials
        .iter()
        .map(|&(p, s, _)| {
            let k = match s {
                Special::Root(i) => Kind::Root(i),
                Special::Zero => Kind::Zero,
            };
            g.add_vertex(p, k)
        })
        .collect();
    let mut vertex_of: HashMap<usize, usize> = HashMap::new();
    for (&e, &p) in crossing_edges.iter().zip(&crossing_points) {
        let v = g.add_vertex(
            p,
            Kind::Crossing {
                boundary: lat.on_bbox(e),
            },
        );
        vertex_of.insert(lat.edge_index(e), v);
    }

    // marching squares
    for cj in 0..n {
        for ci in 0..n {
            if !blocked[cj * n + ci].is_empty() {
                continue;
            }
            march(&lat, &mut g, &vertex_of, ci, cj)?;
        }
    }

    // radial links from block boundaries to the block centres
    for (&e, &p) in crossing_edges.iter().zip(&crossing_points) {
        let inside = lat
            .sides(e)
            .into_iter()
            .flatten()
            .find(|&(i, j)| !blocked[j * n + i].is_empty());
        if let Some((i, j)) = inside {
            let s = *blocked[j * n + i]
                .iter()
                .min_by(|&&a, &&b| (specials[a].0 - p).norm().total_cmp(&(specials[b].0 - p).norm()))
                .unwrap();
            g.link(vertex_of[&lat.edge_index(e)], special_vertex[s]);
        }
    }

    merge_loose_ends(&mut g, 0.5 * domain.cell_width());
    Ok(assemble(&g, *domain))
}

/// Zeros of `u` inside the domain, away from the roots, at which `f`
/// vanishes and at least four crossings surround the block.
fn junction_zeros(lat: &Lattice, dom: &TraceDomain, tol: f64) -> Result<Vec<Located>> {
    let hf = lat.hf;
    if hf.u().degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let roots = hf.config().roots();
    let h = dom.cell_width();
    let mut out = Vec::new();
    for cluster in root_clusters(hf.u(), DEFAULT_CLUSTER_THRESHOLD)? {
        let z0 = cluster.center;
        if dom.margin_cells(z0) < 2.0 || roots.iter().any(|r| (r - z0).norm() < 4.0 * h) {
            continue;
        }
        let (ci, cj) = cell_of(dom, z0);
        let boundary = lat.block_boundary(ci, cj);
        let mut changes = 0;
        let mut total = 0.0;
        for &e in &boundary {
            let (va, vb) = lat.edge_values(e)?;
            changes += ((va >= 0.0) != (vb >= 0.0)) as usize;
            total += va.abs();
        }
        let mean = total / boundary.len() as f64;
        let at = hf.eval_f(z0, tol)?.abs_value;
        if changes >= 4 && at <= ZERO_RATIO * mean {
            out.push((z0, Special::Zero, (ci, cj)));
        }
    }
    Ok(out)
}

/// Joins the crossings on the edges of cell `(ci, cj)`.
fn march(lat: &Lattice, g: &mut Graph, vertex_of: &HashMap<usize, usize>, ci: usize, cj: usize) -> Result<()> {
    // counterclockwise: bottom, right, top, left
    let sides = [
        Edge::H(ci, cj),
        Edge::V(ci + 1, cj),
        Edge::H(ci, cj + 1),
        Edge::V(ci, cj),
    ];
    let s = [
        lat.sign(sides[0])?,
        lat.sign(sides[1])?,
        lat.sign(sides[2])?,
        lat.sign(sides[3])?,
    ];
    if s[0] * s[1] != s[3] * s[2] {
        return Err(Error::Plaquette(ci, cj));
    }
    let hit: Vec<usize> = (0..4)
        .filter_map(|k| vertex_of.get(&lat.edge_index(sides[k])).copied())
        .collect();
    match hit.len() {
        0 => {}
        2 => g.link(hit[0], hit[1]),
        4 => {
            // saddle: the centre value decides which corners are joined
            let c = [
                lat.idx(ci, cj),
                lat.idx(ci + 1, cj),
                lat.idx(ci + 1, cj + 1),
                lat.idx(ci, cj + 1),
            ];
            let v = [
                lat.f(c[0]),
                s[0] * lat.f(c[1]),
                s[0] * s[1] * lat.f(c[2]),
                s[3] * lat.f(c[3]),
            ];
            let centre = v.iter().sum::<f64>() / 4.0;
            if (centre >= 0.0) == (v[0] >= 0.0) {
                // corners 1 and 3 are cut off
                g.link(hit[0], hit[1]);
                g.link(hit[2], hit[3]);
            } else {
                g.link(hit[3], hit[0]);
                g.link(hit[1], hit[2]);
            }
        }
        k => {
            return Err(Error::Postcondition(format!(
                "cell ({ci}, {cj}) has {k} sign changes on its boundary"
            )))
        }
    }
    Ok(())
}

/// Clusters the loose interior ends (crossings of degree 1 away from the
/// domain boundary) by single linkage at `radius` and joins each cluster
/// of two or more to a new vertex at its centroid.
fn merge_loose_ends(g: &mut Graph, radius: f64) {
    let loose: Vec<usize> = (0..g.points.len())
        .filter(|&v| g.kind[v] == Kind::Crossing { boundary: false } && g.adj[v].len() == 1)
        .collect();
    let mut cluster: Vec<usize> = (0..loose.len()).collect();
    fn find(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for a in 0..loose.len() {
        for b in a + 1..loose.len() {
            if (g.points[loose[a]] - g.points[loose[b]]).norm() <= radius {
                let (ra, rb) = (find(&mut cluster, a), find(&mut cluster, b));
                cluster[ra] = rb;
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (a, &v) in loose.iter().enumerate() {
        let r = find(&mut cluster, a);
        groups.entry(r).or_default().push(v);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().filter(|m| m.len() >= 2).collect();
    groups.sort();
    for members in groups {
        let centroid = members.iter().map(|&v| g.points[v]).sum::<Complex64>() / members.len() as f64;
        let hub = g.add_vertex(centroid, Kind::Merged);
        for v in members {
            g.link(v, hub);
        }
    }
}

fn tag(g: &Graph, dom: &TraceDomain, v: usize) -> EndpointTag {
    match g.kind[v] {
        Kind::Root(i) => EndpointTag::Root(i),
        Kind::Zero => EndpointTag::Junction(g.points[v]),
        Kind::Merged if g.adj[v].len() >= 3 => EndpointTag::Junction(g.points[v]),
        Kind::Crossing { boundary: true } if dom.on_boundary(g.points[v]) => EndpointTag::DomainBoundary,
        _ => EndpointTag::Unresolved(g.points[v]),
    }
}

/// Splits the graph into polylines between terminal vertices; what is left
/// over are closed loops.
fn assemble(g: &Graph, domain: TraceDomain) -> CurveSet {
    let mut used = vec![false; g.edges];
    let mut curves = Vec::new();
    let walk = |start: usize, first: (usize, usize), used: &mut Vec<bool>| -> Vec<usize> {
        let mut path = vec![start];
        let (mut cur, e) = first;
        used[e] = true;
        loop {
            path.push(cur);
            if cur == start || g.terminal(cur) {
                break;
            }
            match g.adj[cur].iter().find(|(_, e)| !used[*e]) {
                Some(&(next, e)) => {
                    used[e] = true;
                    cur = next;
                }
                None => break,
            }
        }
        path
    };
    for v in 0..g.points.len() {
        if !g.terminal(v) {
            continue;
        }
        for &(w, e) in &g.adj[v] {
            if used[e] {
                continue;
            }
            let path = walk(v, (w, e), &mut used);
            let last = *path.last().unwrap();
            curves.push(Curve {
                points: path.iter().map(|&k| g.points[k]).collect(),
                start: tag(g, &domain, v),
                end: tag(g, &domain, last),
            });
        }
    }
    for v in 0..g.points.len() {
        for &(w, e) in &g.adj[v] {
            if used[e] {
                continue;
            }
            let path = walk(v, (w, e), &mut used);
            let p = g.points[v];
            curves.push(Curve {
                points: path.iter().map(|&k| g.points[k]).collect(),
                start: EndpointTag::Unresolved(p),
                end: EndpointTag::Unresolved(p),
            });
        }
    }

    let mut junctions = Vec::new();
    for v in 0..g.points.len() {
        if !g.terminal(v) || g.adj[v].len() < 3 || matches!(g.kind[v], Kind::Crossing { .. }) {
            continue;
        }
        let p = g.points[v];
        let mut directions: Vec<f64> = g.adj[v]
            .iter()
            .map(|&(w, _)| (g.points[w] - p).arg().rem_euclid(std::f64::consts::TAU))
            .collect();
        directions.sort_by(f64::total_cmp);
        junctions.push(Junction {
            point: p,
            root: match g.kind[v] {
                Kind::Root(i) => Some(i),
                _ => None,
            },
            directions,
        });
    }
    CurveSet {
        curves,
        junctions,
        domain,
    }
}
