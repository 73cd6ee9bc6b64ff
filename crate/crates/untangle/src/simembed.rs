//! Simultaneous grid drawings of two maximal planar graphs on one vertex
//! set: every cross pair of edges meets at least once and at most 25 times,
//! every edge has at most 5 bends, and each drawing comes out directly or
//! mirror equivalent to its reference embedding, as prescribed.
//!
//! The drawing places vertex i of the first Hamiltonian order at the grid
//! point (i, position in the second order) and draws every edge as one or
//! two bispiked curves: x-monotone three-segment polylines spiking above the
//! grid square and diving below it (y-monotone and sideways for the second
//! graph). Chord coordinates are not fixed constants; each curve is fitted
//! just above the current envelope with exact rational arithmetic, so
//! non-crossing within a system holds by construction and is re-checked.

use crate::geom::{pseudo_angle_cmp, rat, Point, Polyline, Rat};
use crate::plane::{PlaneComplex, VertexId};
use crate::triangulate::{check_direct_equivalence, Equivalence};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type Rotations = BTreeMap<VertexId, Vec<VertexId>>;

#[derive(Debug, Error)]
pub enum SimEmbedError {
    #[error("graph is not a simple maximal planar triangulation: {0}")]
    NotTriangulation(String),
    #[error("no Hamiltonian cycle found; 4-connectification failed")]
    NoHamiltonianCycle,
    #[error("chord ({0}, {1}) is inconsistent between its endpoints")]
    ChordSideMismatch(VertexId, VertexId),
    #[error("routing broke the envelope invariant near position {0}")]
    EnvelopeViolation(usize),
    #[error("separating triangle uses a non-original edge; construction bug")]
    SubdividedTwice,
    #[error("drawing equivalence check failed: {0}")]
    Equivalence(String),
}

/// A labeled rotation system, the abstract form both graphs take here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    pub rot: Rotations,
}

impl EmbeddedGraph {
    pub fn from_complex(c: &PlaneComplex) -> Self {
        EmbeddedGraph {
            rot: c.rotation_system(),
        }
    }

    pub fn nvertices(&self) -> usize {
        self.rot.len()
    }

    pub fn edges(&self) -> BTreeSet<(VertexId, VertexId)> {
        let mut out = BTreeSet::new();
        for (&u, neigh) in &self.rot {
            for &v in neigh {
                out.insert((u.min(v), u.max(v)));
            }
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rot[&v].len()
    }

    fn index_of(&self, v: VertexId, w: VertexId) -> Option<usize> {
        self.rot[&v].iter().position(|&x| x == w)
    }

    /// Third vertex of the face on the left of the dart u -> v.
    pub fn apex_left(&self, u: VertexId, v: VertexId) -> VertexId {
        let rot_v = &self.rot[&v];
        let i = self.index_of(v, u).expect("edge exists");
        rot_v[(i + rot_v.len() - 1) % rot_v.len()]
    }

    /// Checks simplicity, 3V-6 edges, and that every face closes in three
    /// steps, which pins the sphere embedding.
    pub fn check_triangulation(&self) -> Result<(), SimEmbedError> {
        let v = self.nvertices();
        if v < 3 {
            return Err(SimEmbedError::NotTriangulation(format!("{v} vertices")));
        }
        let mut edge_count = 0usize;
        for (&u, neigh) in &self.rot {
            let set: BTreeSet<VertexId> = neigh.iter().copied().collect();
            if set.len() != neigh.len() || set.contains(&u) {
                return Err(SimEmbedError::NotTriangulation(format!(
                    "loops or repeats at {u}"
                )));
            }
            edge_count += neigh.len();
            for &w in neigh {
                if !self.rot[&w].contains(&u) {
                    return Err(SimEmbedError::NotTriangulation(format!(
                        "edge ({u}, {w}) one-sided"
                    )));
                }
            }
        }
        edge_count /= 2;
        if v == 3 {
            if edge_count != 3 {
                return Err(SimEmbedError::NotTriangulation("triangle expected".into()));
            }
            return Ok(());
        }
        if edge_count != 3 * v - 6 {
            return Err(SimEmbedError::NotTriangulation(format!(
                "E = {edge_count}, 3V-6 = {}",
                3 * v - 6
            )));
        }
        for (&u, neigh) in &self.rot {
            for &w in neigh {
                // Face left of u->w must close in three darts.
                let x = self.apex_left(u, w);
                let y = self.apex_left(w, x);
                if y != u {
                    return Err(SimEmbedError::NotTriangulation(format!(
                        "face at ({u}, {w}) does not close"
                    )));
                }
            }
        }
        Ok(())
    }

    /// All separating triangles: triangles that are not faces.
    pub fn separating_triangles(&self) -> Vec<(VertexId, VertexId, VertexId)> {
        let mut out = Vec::new();
        for &(u, v) in &self.edges() {
            let a1 = self.apex_left(u, v);
            let a2 = self.apex_left(v, u);
            let nu: BTreeSet<VertexId> = self.rot[&u].iter().copied().collect();
            for &w in &self.rot[&v] {
                if w > v && w > u && nu.contains(&w) && w != a1 && w != a2 {
                    // sorted triple with u < v enforced below
                    let mut t = [u, v, w];
                    t.sort();
                    out.push((t[0], t[1], t[2]));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn replace_neighbor(&mut self, v: VertexId, old: VertexId, new: VertexId) {
        let i = self.index_of(v, old).expect("neighbor exists");
        self.rot.get_mut(&v).unwrap()[i] = new;
    }

    fn insert_after(&mut self, v: VertexId, anchor: VertexId, new: VertexId) {
        let i = self.index_of(v, anchor).expect("anchor exists");
        self.rot.get_mut(&v).unwrap().insert(i + 1, new);
    }
}

/// One subdivision made while 4-connectifying.
#[derive(Debug, Clone)]
pub struct Dummy {
    pub vertex: VertexId,
    pub split_edge: (VertexId, VertexId),
    pub extra: [(VertexId, VertexId); 2],
}

#[derive(Debug, Clone)]
pub struct HamiltonianPlan {
    pub graph: EmbeddedGraph,
    pub dummies: Vec<Dummy>,
    /// Balancing vertices attached to Hamiltonian cycle edges, with their
    /// two edges.
    pub balance: Vec<(VertexId, VertexId, VertexId)>,
}

/// Subdivide one edge of every separating triangle until none remain. Each
/// dummy takes the middle of its edge and two extra edges to the face
/// apexes, so the result stays a triangulation and every original edge is
/// subdivided at most once.
pub fn hamiltonianize(
    g: &EmbeddedGraph,
    mut fresh: u32,
) -> Result<(EmbeddedGraph, Vec<Dummy>, u32), SimEmbedError> {
    g.check_triangulation()?;
    let original_edges = g.edges();
    let mut g = g.clone();
    let mut dummies = Vec::new();
    loop {
        let tris = g.separating_triangles();
        let Some(&(a, b, _c)) = tris.first() else {
            break;
        };
        let (u, v) = (a, b);
        if !original_edges.contains(&(u.min(v), u.max(v))) {
            return Err(SimEmbedError::SubdividedTwice);
        }
        let x = g.apex_left(u, v);
        let y = g.apex_left(v, u);
        let d = VertexId(fresh);
        fresh += 1;
        // Rotations: d sees (v, x, u, y) counterclockwise; x gains d between
        // u and v; y gains d between v and u.
        g.replace_neighbor(u, v, d);
        g.replace_neighbor(v, u, d);
        g.insert_after(x, u, d);
        g.insert_after(y, v, d);
        g.rot.insert(d, vec![v, x, u, y]);
        dummies.push(Dummy {
            vertex: d,
            split_edge: (u, v),
            extra: [(d, x), (d, y)],
        });
    }
    g.check_triangulation()?;
    Ok((g, dummies, fresh))
}

/// Backtracking Hamiltonian cycle search with fewest-choices-first ordering.
pub fn find_hamiltonian_cycle(g: &EmbeddedGraph) -> Result<Vec<VertexId>, SimEmbedError> {
    let n = g.nvertices();
    if n < 3 {
        return Err(SimEmbedError::NoHamiltonianCycle);
    }
    let verts: Vec<VertexId> = g.rot.keys().copied().collect();
    let start = verts[0];
    let mut visited: BTreeSet<VertexId> = BTreeSet::new();
    let mut path = vec![start];
    visited.insert(start);
    let mut budget: u64 = 50_000_000;

    fn extend(
        g: &EmbeddedGraph,
        start: VertexId,
        path: &mut Vec<VertexId>,
        visited: &mut BTreeSet<VertexId>,
        n: usize,
        budget: &mut u64,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let cur = *path.last().unwrap();
        if path.len() == n {
            return g.rot[&cur].contains(&start);
        }
        // Fewest remaining options first.
        let mut cands: Vec<(usize, VertexId)> = g.rot[&cur]
            .iter()
            .filter(|v| !visited.contains(v))
            .map(|&v| {
                let free = g.rot[&v].iter().filter(|w| !visited.contains(w)).count();
                (free, v)
            })
            .collect();
        cands.sort();
        // Prune: every unvisited vertex still needs a way in and a way out;
        // the current end and the start both count as open connections.
        for &v in g.rot.keys() {
            if visited.contains(&v) || v == cur {
                continue;
            }
            let mut free = 0;
            for w in &g.rot[&v] {
                if !visited.contains(w) || *w == start || *w == cur {
                    free += 1;
                }
            }
            if free < 2 {
                return false;
            }
        }
        for (_, v) in cands {
            path.push(v);
            visited.insert(v);
            if extend(g, start, path, visited, n, budget) {
                return true;
            }
            path.pop();
            visited.remove(&v);
        }
        false
    }

    if extend(g, start, &mut path, &mut visited, n, &mut budget) {
        Ok(path)
    } else {
        Err(SimEmbedError::NoHamiltonianCycle)
    }
}

/// Attach `count` balancing triangles to the front edge of the cycle,
/// keeping the cycle Hamiltonian.
fn balance_with_triangles(
    g: &mut EmbeddedGraph,
    cycle: &mut Vec<VertexId>,
    count: usize,
    mut fresh: u32,
) -> (Vec<(VertexId, VertexId, VertexId)>, u32) {
    let mut added = Vec::new();
    for _ in 0..count {
        let u = cycle[0];
        let v = cycle[1];
        let z = VertexId(fresh);
        fresh += 1;
        // z sits in the face left of u -> v.
        g.insert_after(u, v, z);
        let iv = g.index_of(v, u).unwrap();
        g.rot.get_mut(&v).unwrap().insert(iv, z);
        g.rot.insert(z, vec![u, v]);
        cycle.insert(1, z);
        added.push((z, u, v));
    }
    (added, fresh)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

#[derive(Debug, Clone, Default)]
pub struct GridDrawing {
    pub points: BTreeMap<VertexId, (i64, i64)>,
    /// Drawn polylines keyed by (min, max) endpoints, oriented min -> max.
    pub polylines: BTreeMap<(VertexId, VertexId), Polyline>,
}

impl GridDrawing {
    pub fn max_bends(&self) -> usize {
        self.polylines
            .values()
            .map(|p| p.points.len().saturating_sub(2))
            .max()
            .unwrap_or(0)
    }

    /// Rotation system read off the drawn geometry by exact angle sorting
    /// of the first segments at each endpoint.
    pub fn rotation_system(&self) -> Rotations {
        let mut out: Rotations = BTreeMap::new();
        let mut incident: BTreeMap<VertexId, Vec<(VertexId, (Rat, Rat))>> = BTreeMap::new();
        for (&(u, v), pl) in &self.polylines {
            let du = (
                &pl.points[1].x - &pl.points[0].x,
                &pl.points[1].y - &pl.points[0].y,
            );
            let m = pl.points.len();
            let dv = (
                &pl.points[m - 2].x - &pl.points[m - 1].x,
                &pl.points[m - 2].y - &pl.points[m - 1].y,
            );
            incident.entry(u).or_default().push((v, du));
            incident.entry(v).or_default().push((u, dv));
        }
        for (v, mut list) in incident {
            list.sort_by(|a, b| pseudo_angle_cmp(&a.1, &b.1));
            out.insert(v, list.into_iter().map(|(w, _)| w).collect());
        }
        out
    }
}

/// Per-chord routing input: endpoint positions and which side of the
/// Hamiltonian path it belongs to.
#[derive(Debug, Clone)]
struct Chord {
    i: usize,
    j: usize,
    u: VertexId,
    v: VertexId,
    side: Side,
}

/// Envelope: strictly x-increasing breakpoints spanning [1, n].
type Envelope = Vec<(Rat, Rat)>;

fn env_segment_containing(env: &Envelope, x: &Rat) -> usize {
    for k in 0..env.len() - 1 {
        if &env[k].0 <= x && x < &env[k + 1].0 {
            return k;
        }
    }
    env.len() - 2
}

fn env_value(env: &Envelope, x: &Rat) -> Rat {
    let k = env_segment_containing(env, x);
    let (x0, y0) = &env[k];
    let (x1, y1) = &env[k + 1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Draw one side of one system: the Hamiltonian path as a chain of bispiked
/// curves and each chord just above the running upper envelope. Everything
/// is mirrored by the caller for the below side.
fn route_half(
    coords: &[Rat],
    init_env: &Envelope,
    chords: &[(usize, usize)],
    polylines: &mut Vec<(usize, usize, Polyline)>,
) -> Result<(), SimEmbedError> {
    let bottom = coords.iter().min().cloned().expect("vertices exist");
    let top = init_env
        .iter()
        .map(|(_, y)| y.clone())
        .max()
        .expect("envelope nonempty");
    let mut env: Envelope = init_env.clone();

    // Chords shortest span first; ties by left endpoint.
    let mut order: Vec<(usize, usize)> = chords.to_vec();
    order.sort_by_key(|&(i, j)| (j - i, i));
    for (i, j) in order {
        let xi = rat(i as i64);
        let xj = rat(j as i64);
        // Sub-envelope indices.
        let from = env
            .iter()
            .position(|(x, _)| *x == xi)
            .ok_or(SimEmbedError::EnvelopeViolation(i))?;
        let to = env
            .iter()
            .position(|(x, _)| *x == xj)
            .ok_or(SimEmbedError::EnvelopeViolation(j))?;
        if to <= from {
            return Err(SimEmbedError::EnvelopeViolation(i));
        }
        let ci = env[from].1.clone();
        let cj = env[to].1.clone();
        // Second bend between the last envelope breakpoint and p_j: just
        // above the envelope tail, and below the vertex band when the tail
        // leaves room.
        let (x_last, y_last) = env[to - 1].clone();
        let x_cross = if cj > bottom && y_last < bottom {
            &x_last + (&bottom - &y_last) * (&xj - &x_last) / (&cj - &y_last)
        } else {
            xj.clone()
        };
        let x2 = (&x_last + &x_cross.min(xj.clone())) / rat(2);
        let y_env_x2 = env_value(&env, &x2);
        let y2 = if y_env_x2 < bottom {
            (&y_env_x2 + &bottom) / rat(2)
        } else {
            &y_env_x2 + crate::geom::ratio(1, 2)
        };
        if y2 <= y_env_x2 {
            return Err(SimEmbedError::EnvelopeViolation(j));
        }
        // First bend x: before the first breakpoint after p_i.
        let x_first = env[from + 1].0.clone();
        let x1 = (&xi + &x_first) / rat(2);
        // Height: above everything the middle segment must clear, above the
        // departure slope, above the square.
        let mut y1 = &top + rat(1);
        {
            let (fx, fy) = env[from + 1].clone();
            // steeper than the envelope's own departure from p_i
            let dep = &ci + (&fy - &ci) * (&x1 - &xi) / (&fx - &xi) + rat(1);
            if dep > y1 {
                y1 = dep;
            }
        }
        for k in from + 1..=to {
            let (bx, by) = env[k].clone();
            if bx <= x1 || bx >= x2 {
                continue;
            }
            // Middle segment from (x1, y1) to (x2, y2) must clear (bx, by).
            let needed = &y2 + (&by + rat(1) - &y2) * (&x2 - &x1) / (&x2 - &bx);
            if needed > y1 {
                y1 = needed;
            }
        }
        let curve = vec![
            Point::new(xi.clone(), ci.clone()),
            Point::new(x1.clone(), y1.clone()),
            Point::new(x2.clone(), y2.clone()),
            Point::new(xj.clone(), cj.clone()),
        ];
        // The new curve must dominate the old envelope strictly between its
        // endpoints.
        let mut check_xs: Vec<Rat> = env[from + 1..to].iter().map(|(x, _)| x.clone()).collect();
        check_xs.push(x1.clone());
        check_xs.push(x2.clone());
        for x in &check_xs {
            if x <= &xi || x >= &xj {
                continue;
            }
            let old = env_value(&env, x);
            let new = poly_value(&curve, x);
            if new <= old {
                return Err(SimEmbedError::EnvelopeViolation(j));
            }
        }
        // Replace the envelope span.
        let mut new_env = env[..=from].to_vec();
        new_env.push((x1, y1));
        new_env.push((x2, y2));
        new_env.extend_from_slice(&env[to..]);
        env = new_env;
        polylines.push((i, j, Polyline::open(curve)));
    }
    Ok(())
}

fn poly_value(points: &[Point], x: &Rat) -> Rat {
    for k in 0..points.len() - 1 {
        if &points[k].x <= x && x <= &points[k + 1].x {
            let (x0, y0) = (&points[k].x, &points[k].y);
            let (x1, y1) = (&points[k + 1].x, &points[k + 1].y);
            if x0 == x1 {
                return y0.clone();
            }
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    points.last().unwrap().y.clone()
}

/// Draw one whole system in its own frame: the Hamiltonian chain plus the
/// above and below chord families, with `flip` exchanging the roles of top
/// and bottom.
pub fn route_system(
    order: &[VertexId],
    coord_of: &BTreeMap<VertexId, i64>,
    chords: &[Chord],
    flip: bool,
) -> Result<BTreeMap<(VertexId, VertexId), Polyline>, SimEmbedError> {
    let n = order.len();
    let sign = if flip { -1i64 } else { 1 };
    let coords: Vec<Rat> = order.iter().map(|v| rat(sign * coord_of[v])).collect();
    // Routing in the negated frame and negating back mirrors the whole
    // drawing, which is exactly the top-for-bottom interchange; the chord
    // families keep their labels.
    let mut above: Vec<(usize, usize)> = Vec::new();
    let mut below: Vec<(usize, usize)> = Vec::new();
    for c in chords {
        match c.side {
            Side::Above => above.push((c.i, c.j)),
            Side::Below => below.push((c.i, c.j)),
        }
    }
    // The closing Hamiltonian edge goes above.
    if n > 2 {
        above.push((1, n));
    }

    // The Hamiltonian chain, drawn once: spike above the points, dip below.
    let top = coords.iter().max().cloned().expect("vertices exist");
    let bottom = coords.iter().min().cloned().unwrap();
    let mut chain_env: Envelope = Vec::new();
    let mut chain: Vec<(usize, usize, Polyline)> = Vec::new();
    for i in 0..n {
        let x = rat(i as i64 + 1);
        chain_env.push((x.clone(), coords[i].clone()));
        if i + 1 < n {
            let b1 = (&x + crate::geom::ratio(1, 3), &top + rat(1));
            let b2 = (&x + crate::geom::ratio(2, 3), &bottom - rat(1));
            let pl = Polyline::open(vec![
                Point::new(x.clone(), coords[i].clone()),
                Point::new(b1.0.clone(), b1.1.clone()),
                Point::new(b2.0.clone(), b2.1.clone()),
                Point::new(rat(i as i64 + 2), coords[i + 1].clone()),
            ]);
            chain.push((i + 1, i + 2, pl));
            chain_env.push(b1);
            chain_env.push(b2);
        }
    }
    let mirrored_env: Envelope = chain_env
        .iter()
        .map(|(x, y)| (x.clone(), -y.clone()))
        .collect();
    let neg: Vec<Rat> = coords.iter().map(|c| -c.clone()).collect();

    let mut upper: Vec<(usize, usize, Polyline)> = Vec::new();
    route_half(&coords, &chain_env, &above, &mut upper)?;
    let mut lower: Vec<(usize, usize, Polyline)> = Vec::new();
    route_half(&neg, &mirrored_env, &below, &mut lower)?;

    let mut out: BTreeMap<(VertexId, VertexId), Polyline> = BTreeMap::new();
    let mut push = |i: usize, j: usize, pl: Polyline| {
        let (u, v) = (order[i - 1], order[j - 1]);
        let key = (u.min(v), u.max(v));
        let keyed = if u < v { pl } else { pl.reversed() };
        out.insert(key, keyed);
    };
    for (i, j, pl) in chain {
        push(i, j, mirror_y(pl, flip, false));
    }
    for (i, j, pl) in upper {
        push(i, j, mirror_y(pl, flip, false));
    }
    for (i, j, pl) in lower {
        push(i, j, mirror_y(pl, flip, true));
    }
    Ok(out)
}

fn mirror_y(pl: Polyline, flip: bool, lower_half: bool) -> Polyline {
    // route_half works on possibly negated coordinates; undo the negations.
    let neg = flip ^ lower_half;
    if !neg {
        return pl;
    }
    Polyline {
        points: pl
            .points
            .into_iter()
            .map(|p| Point::new(p.x, -p.y))
            .collect(),
        closed: pl.closed,
    }
}

#[derive(Debug, Clone)]
pub struct SimEmbedding {
    pub drawing1: GridDrawing,
    pub drawing2: GridDrawing,
    /// Kept edges of the two inputs (post dummy removal).
    pub edges1: BTreeSet<(VertexId, VertexId)>,
    pub edges2: BTreeSet<(VertexId, VertexId)>,
}

/// The full engine: make both graphs Hamiltonian, balance the vertex
/// counts, draw rows and columns, remove scaffolding and enforce parities.
pub fn simultaneous_embed(
    g1: &EmbeddedGraph,
    g2: &EmbeddedGraph,
    ref1: &Rotations,
    ref2: &Rotations,
    parity1: Equivalence,
    parity2: Equivalence,
) -> Result<SimEmbedding, SimEmbedError> {
    assert!(matches!(parity1, Equivalence::Direct | Equivalence::Mirror));
    assert!(matches!(parity2, Equivalence::Direct | Equivalence::Mirror));
    let mut fresh = 0u32;
    for v in g1.rot.keys().chain(g2.rot.keys()) {
        fresh = fresh.max(v.0 + 1);
    }
    let (mut h1, dummies1, fresh1) = hamiltonianize(g1, fresh)?;
    let (mut h2, dummies2, fresh2) = hamiltonianize(g2, fresh1)?;
    let mut cycle1 = find_hamiltonian_cycle(&h1)?;
    let mut cycle2 = find_hamiltonian_cycle(&h2)?;

    // Balance vertex counts with extra triangles on the smaller side.
    let d1 = dummies1.len();
    let d2 = dummies2.len();
    let mut balance1 = Vec::new();
    let mut balance2 = Vec::new();
    let mut fresh3 = fresh2;
    if d1 > d2 {
        let (b, f) = balance_with_triangles(&mut h2, &mut cycle2, d1 - d2, fresh2);
        balance2 = b;
        fresh3 = f;
    } else if d2 > d1 {
        let (b, f) = balance_with_triangles(&mut h1, &mut cycle1, d2 - d1, fresh2);
        balance1 = b;
        fresh3 = f;
    }
    let _ = fresh3;

    // Identify the two vertex sets: originals map to themselves, the extras
    // of side 1 pair with the extras of side 2 in sorted order.
    let shared: BTreeSet<VertexId> = g1.rot.keys().copied().collect();
    let extras1: Vec<VertexId> = h1
        .rot
        .keys()
        .copied()
        .filter(|v| !shared.contains(v))
        .collect();
    let extras2: Vec<VertexId> = h2
        .rot
        .keys()
        .copied()
        .filter(|v| !shared.contains(v))
        .collect();
    assert_eq!(extras1.len(), extras2.len());
    // Universe speaks side-1 ids; map side 2 into it.
    let mut to_univ: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in &shared {
        to_univ.insert(*v, *v);
    }
    for (a, b) in extras1.iter().zip(extras2.iter()) {
        to_univ.insert(*b, *a);
    }
    let cycle2_univ: Vec<VertexId> = cycle2.iter().map(|v| to_univ[v]).collect();

    // Canonical cycle orientation: lowest vertex first, smaller neighbor
    // second.
    let canon = |cycle: &[VertexId]| -> Vec<VertexId> {
        let n = cycle.len();
        let pos = cycle
            .iter()
            .position(|v| *v == *cycle.iter().min().unwrap())
            .unwrap();
        let fwd: Vec<VertexId> = (0..n).map(|k| cycle[(pos + k) % n]).collect();
        if fwd[1] <= fwd[n - 1] {
            fwd
        } else {
            let mut rev = fwd.clone();
            rev[1..].reverse();
            rev
        }
    };
    let order1 = canon(&cycle1);
    let order2 = canon(&cycle2_univ);
    let pos1: BTreeMap<VertexId, i64> = order1
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k as i64 + 1))
        .collect();
    let pos2: BTreeMap<VertexId, i64> = order2
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k as i64 + 1))
        .collect();

    // Chord classification against each graph's own embedding.
    let chords_for = |g: &EmbeddedGraph,
                      order: &[VertexId],
                      pos: &BTreeMap<VertexId, i64>,
                      map: &dyn Fn(VertexId) -> VertexId|
     -> Result<Vec<Chord>, SimEmbedError> {
        let n = order.len();
        let mut out = Vec::new();
        for &(a, b) in &g.edges() {
            let (ua, ub) = (map(a), map(b));
            let (i, j) = (pos[&ua], pos[&ub]);
            let (i, j, lo, hi) = if i < j {
                (i as usize, j as usize, a, b)
            } else {
                (j as usize, i as usize, b, a)
            };
            if j == i + 1 || (i == 1 && j == n) {
                continue; // Hamiltonian cycle edge
            }
            // Side at each endpoint: between the cycle neighbors in the
            // rotation. Left of the traversal lo -> hi at lo means the
            // chord lies counterclockwise after lo's cycle-successor.
            let side_at = |v: VertexId, other: VertexId| -> Result<Side, SimEmbedError> {
                let vp = pos[&map(v)];
                let succ_univ = order[(vp as usize) % n];
                let pred_univ = order[(vp as usize + n - 2) % n];
                // Back to local ids: the inverse of map on neighbors.
                let rot = &g.rot[&v];
                let find_local = |uv: VertexId| -> VertexId {
                    *rot.iter().find(|&&w| map(w) == uv).expect("cycle neighbor")
                };
                let succ = find_local(succ_univ);
                let pred = find_local(pred_univ);
                let is = rot.iter().position(|&w| w == succ).unwrap();
                let ip = rot.iter().position(|&w| w == pred).unwrap();
                let io = rot.iter().position(|&w| w == other).unwrap();
                let len = rot.len();
                // Walk counterclockwise from succ to pred; anything passed
                // on the way lies left of the traversal.
                let mut k = is;
                loop {
                    k = (k + 1) % len;
                    if k == ip {
                        break;
                    }
                    if k == io {
                        return Ok(Side::Above);
                    }
                }
                Ok(Side::Below)
            };
            let s1 = side_at(lo, hi)?;
            let s2 = side_at(hi, lo)?;
            if s1 != s2 {
                return Err(SimEmbedError::ChordSideMismatch(a, b));
            }
            out.push(Chord {
                i,
                j,
                u: lo,
                v: hi,
                side: s1,
            });
        }
        Ok(out)
    };

    let id_map = |v: VertexId| v;
    let univ_map = |v: VertexId| to_univ[&v];
    let chords1 = chords_for(&h1, &order1, &pos1, &id_map)?;
    let chords2 = chords_for(&h2, &order2, &pos2, &univ_map)?;
    if std::env::var("SIMEMBED_DEBUG").is_ok() {
        eprintln!("order1={order1:?} order2={order2:?}");
        for c in &chords1 {
            eprintln!("chord1 ({},{}) pos ({},{}) {:?}", c.u, c.v, c.i, c.j, c.side);
        }
        for c in &chords2 {
            eprintln!("chord2 ({},{}) pos ({},{}) {:?}", c.u, c.v, c.i, c.j, c.side);
        }
    }

    // Draw, check the parity against the reference, and flip if needed.
    let draw_side = |which: Axis,
                     h: &EmbeddedGraph,
                     order: &[VertexId],
                     other_pos: &BTreeMap<VertexId, i64>,
                     chords: &[Chord],
                     map: &dyn Fn(VertexId) -> VertexId,
                     flip: bool|
     -> Result<GridDrawing, SimEmbedError> {
        let coord_univ: BTreeMap<VertexId, i64> = order
            .iter()
            .map(|&v| (v, other_pos[&v]))
            .collect();
        let lines = route_system(order, &coord_univ, chords, flip)?;
        let mut gd = GridDrawing::default();
        for (&v, &c) in &coord_univ {
            let p = pos_of(order, v);
            let (x, y) = match which {
                Axis::Rows => (p, c),
                Axis::Columns => (c, p),
            };
            gd.points.insert(v, (x, y));
        }
        for ((u, v), pl) in lines {
            let pl = match which {
                Axis::Rows => pl,
                Axis::Columns => Polyline {
                    points: pl
                        .points
                        .into_iter()
                        .map(|p| Point::new(p.y, p.x))
                        .collect(),
                    closed: pl.closed,
                },
            };
            gd.polylines.insert((u, v), pl);
        }
        let _ = (h, map);
        Ok(gd)
    };

    // Side 1 in rows, side 2 in columns.
    let mut flip1 = false;
    let mut gd1 = draw_side(Axis::Rows, &h1, &order1, &pos2, &chords1, &id_map, flip1)?;
    let mut kept1 = remove_scaffolding(&gd1, g1, &dummies1, &balance1, &id_map)?;
    let got1 = check_direct_equivalence(ref1, &kept1.rotation_system())
        .map_err(|e| SimEmbedError::Equivalence(e.to_string()))?;
    if std::env::var("SIMEMBED_DEBUG").is_ok() {
        eprintln!("side1 flip=false got {got1:?}");
    }
    let want1 = parity1;
    if got1 != want1 {
        flip1 = true;
        gd1 = draw_side(Axis::Rows, &h1, &order1, &pos2, &chords1, &id_map, flip1)?;
        kept1 = remove_scaffolding(&gd1, g1, &dummies1, &balance1, &id_map)?;
        let again = check_direct_equivalence(ref1, &kept1.rotation_system())
            .map_err(|e| SimEmbedError::Equivalence(e.to_string()))?;
        if again != want1 {
            return Err(SimEmbedError::Equivalence(format!(
                "side 1 parity {again:?} after flip, wanted {want1:?}"
            )));
        }
    }

    let mut flip2 = false;
    let mut gd2 = draw_side(Axis::Columns, &h2, &order2, &pos1, &chords2, &univ_map, flip2)?;
    let mut kept2 = remove_scaffolding(&gd2, g2, &dummies2, &balance2, &univ_map)?;
    let ref2_univ: Rotations = ref2
        .iter()
        .map(|(v, rot)| (to_univ[v], rot.iter().map(|w| to_univ[w]).collect()))
        .collect();
    let got2 = check_direct_equivalence(&ref2_univ, &kept2.rotation_system())
        .map_err(|e| SimEmbedError::Equivalence(e.to_string()))?;
    if std::env::var("SIMEMBED_DEBUG").is_ok() {
        eprintln!("side2 flip=false got {got2:?} rot={:?} ref={ref2_univ:?}", kept2.rotation_system());
    }
    if got2 != parity2 {
        flip2 = true;
        gd2 = draw_side(Axis::Columns, &h2, &order2, &pos1, &chords2, &univ_map, flip2)?;
        kept2 = remove_scaffolding(&gd2, g2, &dummies2, &balance2, &univ_map)?;
        let again = check_direct_equivalence(&ref2_univ, &kept2.rotation_system())
            .map_err(|e| SimEmbedError::Equivalence(e.to_string()))?;
        if std::env::var("SIMEMBED_DEBUG").is_ok() {
            eprintln!("side2 flip=true got {again:?} rot={:?}", kept2.rotation_system());
            for (k, pl) in &kept2.polylines {
                eprintln!("  edge {k:?}: {:?}", pl.points.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>());
            }
        }
        if again != parity2 {
            return Err(SimEmbedError::Equivalence(format!(
                "side 2 parity {again:?} after flip, wanted {:?}",
                parity2
            )));
        }
    }

    let edges1 = kept1.polylines.keys().copied().collect();
    let edges2 = kept2.polylines.keys().copied().collect();
    Ok(SimEmbedding {
        drawing1: kept1,
        drawing2: kept2,
        edges1,
        edges2,
    })
}

fn pos_of(order: &[VertexId], v: VertexId) -> i64 {
    order.iter().position(|&x| x == v).unwrap() as i64 + 1
}

/// Drop extra edges and balance triangles; merge the two halves of every
/// subdivided edge back into one polyline with at most 5 bends. Keys come
/// out in universe ids.
fn remove_scaffolding(
    gd: &GridDrawing,
    original: &EmbeddedGraph,
    dummies: &[Dummy],
    balance: &[(VertexId, VertexId, VertexId)],
    map: &dyn Fn(VertexId) -> VertexId,
) -> Result<GridDrawing, SimEmbedError> {
    let mut out = GridDrawing::default();
    let drop_edges: BTreeSet<(VertexId, VertexId)> = dummies
        .iter()
        .flat_map(|d| d.extra.iter().copied())
        .chain(balance.iter().flat_map(|&(z, u, v)| [(z, u), (z, v)]))
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let dummy_of: BTreeMap<VertexId, (VertexId, VertexId)> = dummies
        .iter()
        .map(|d| (d.vertex, d.split_edge))
        .collect();
    for (&v, _) in &original.rot {
        let uv = map(v);
        let p = gd
            .points
            .get(&uv)
            .ok_or_else(|| SimEmbedError::Equivalence(format!("missing point for {uv}")))?;
        out.points.insert(uv, *p);
    }
    let mut merged: BTreeSet<VertexId> = BTreeSet::new();
    for (&(a, b), pl) in &gd.polylines {
        if drop_edges.contains(&(a, b)) {
            continue;
        }
        // A polyline touching a dummy merges with its sibling half.
        let (da, db) = (dummy_of.contains_key(&a), dummy_of.contains_key(&b));
        if da || db {
            let d = if da { a } else { b };
            if merged.contains(&d) {
                continue;
            }
            merged.insert(d);
            let (u, v) = dummy_of[&d];
            let (ku, kv) = (u.min(d), u.max(d));
            let (k2u, k2v) = (v.min(d), v.max(d));
            let half1 = &gd.polylines[&(ku, kv)];
            let half2 = &gd.polylines[&(k2u, k2v)];
            // Orient u -> d -> v.
            let h1 = if ku == u { half1.clone() } else { half1.reversed() };
            let h2 = if k2u == d { half2.clone() } else { half2.reversed() };
            let mut pts = h1.points.clone();
            pts.extend_from_slice(&h2.points[1..]);
            let (umap, vmap) = (map_orig(u, map), map_orig(v, map));
            let key = (umap.min(vmap), umap.max(vmap));
            let keyed = if umap < vmap {
                Polyline::open(pts)
            } else {
                Polyline::open(pts).reversed()
            };
            out.polylines.insert(key, keyed);
            continue;
        }
        let (ua, ub) = (map_orig(a, map), map_orig(b, map));
        let key = (ua.min(ub), ua.max(ub));
        let keyed = if (ua < ub) == (a < b) {
            pl.clone()
        } else {
            pl.reversed()
        };
        out.polylines.insert(key, keyed);
    }
    // Sanity: exactly the original edges survive.
    let want: BTreeSet<(VertexId, VertexId)> = original
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (map(a), map(b));
            (x.min(y), x.max(y))
        })
        .collect();
    let have: BTreeSet<(VertexId, VertexId)> = out.polylines.keys().copied().collect();
    if want != have {
        return Err(SimEmbedError::Equivalence(format!(
            "scaffolding removal kept {} edges, wanted {}",
            have.len(),
            want.len()
        )));
    }
    Ok(out)
}

fn map_orig(v: VertexId, map: &dyn Fn(VertexId) -> VertexId) -> VertexId {
    map(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{polyline_crossings, EndpointPolicy};

    pub(super) fn k4_pub() -> EmbeddedGraph {
        k4()
    }

    fn k4() -> EmbeddedGraph {
        // Tetrahedron rotations: a valid sphere embedding.
        let mut rot = BTreeMap::new();
        rot.insert(VertexId(0), vec![VertexId(1), VertexId(2), VertexId(3)]);
        rot.insert(VertexId(1), vec![VertexId(0), VertexId(3), VertexId(2)]);
        rot.insert(VertexId(2), vec![VertexId(0), VertexId(1), VertexId(3)]);
        rot.insert(VertexId(3), vec![VertexId(0), VertexId(2), VertexId(1)]);
        EmbeddedGraph { rot }
    }

    fn octahedron() -> EmbeddedGraph {
        // Vertices 0..5, antipodal pairs (0,5), (1,4), (2,3).
        let mut rot = BTreeMap::new();
        rot.insert(
            VertexId(0),
            vec![VertexId(1), VertexId(2), VertexId(4), VertexId(3)],
        );
        rot.insert(
            VertexId(1),
            vec![VertexId(0), VertexId(3), VertexId(5), VertexId(2)],
        );
        rot.insert(
            VertexId(2),
            vec![VertexId(0), VertexId(1), VertexId(5), VertexId(4)],
        );
        rot.insert(
            VertexId(3),
            vec![VertexId(0), VertexId(4), VertexId(5), VertexId(1)],
        );
        rot.insert(
            VertexId(4),
            vec![VertexId(0), VertexId(2), VertexId(5), VertexId(3)],
        );
        rot.insert(
            VertexId(5),
            vec![VertexId(1), VertexId(3), VertexId(4), VertexId(2)],
        );
        EmbeddedGraph { rot }
    }

    /// Two tetrahedra glued on a triangle: the glued triangle separates.
    fn glued_tetrahedra() -> EmbeddedGraph {
        let mut rot = BTreeMap::new();
        // Triangle 0,1,2; apexes 3 (left face) and 4 (right face).
        rot.insert(
            VertexId(0),
            vec![VertexId(1), VertexId(3), VertexId(2), VertexId(4)],
        );
        rot.insert(
            VertexId(1),
            vec![VertexId(0), VertexId(4), VertexId(2), VertexId(3)],
        );
        rot.insert(
            VertexId(2),
            vec![VertexId(0), VertexId(3), VertexId(1), VertexId(4)],
        );
        rot.insert(VertexId(3), vec![VertexId(0), VertexId(1), VertexId(2)]);
        rot.insert(VertexId(4), vec![VertexId(0), VertexId(2), VertexId(1)]);
        EmbeddedGraph { rot }
    }

    #[test]
    fn k4_has_no_separating_triangles() {
        let g = k4();
        g.check_triangulation().unwrap();
        assert!(g.separating_triangles().is_empty());
        let (g2, dummies, _) = hamiltonianize(&g, 10).unwrap();
        assert!(dummies.is_empty());
        assert_eq!(g2.nvertices(), 4);
    }

    #[test]
    fn octahedron_hamiltonian() {
        let g = octahedron();
        g.check_triangulation().unwrap();
        assert!(g.separating_triangles().is_empty());
        let cycle = find_hamiltonian_cycle(&g).unwrap();
        assert_eq!(cycle.len(), 6);
        for k in 0..6 {
            let u = cycle[k];
            let v = cycle[(k + 1) % 6];
            assert!(g.rot[&u].contains(&v), "cycle edge ({u},{v}) missing");
        }
    }

    #[test]
    fn glued_tetrahedra_gets_a_dummy() {
        let g = glued_tetrahedra();
        g.check_triangulation().unwrap();
        assert_eq!(g.separating_triangles(), vec![(VertexId(0), VertexId(1), VertexId(2))]);
        let (g2, dummies, _) = hamiltonianize(&g, 5).unwrap();
        assert_eq!(dummies.len(), 1);
        assert!(g2.separating_triangles().is_empty());
        let cycle = find_hamiltonian_cycle(&g2).unwrap();
        assert_eq!(cycle.len(), g2.nvertices());
    }

    fn count_cross(a: &Polyline, b: &Polyline) -> usize {
        polyline_crossings(a, b, EndpointPolicy::ExcludeTerminal).unwrap()
    }

    fn verify_embedding(g1: &EmbeddedGraph, g2: &EmbeddedGraph, emb: &SimEmbedding) {
        // Zero same-system crossings.
        for (drawing, _g) in [(&emb.drawing1, g1), (&emb.drawing2, g2)] {
            let keys: Vec<_> = drawing.polylines.keys().copied().collect();
            for x in 0..keys.len() {
                for y in x + 1..keys.len() {
                    let (e1, e2) = (keys[x], keys[y]);
                    let shares = e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1;
                    let c = count_cross(&drawing.polylines[&e1], &drawing.polylines[&e2]);
                    assert_eq!(c, 0, "same-system crossing {e1:?} x {e2:?} = {c}");
                    let _ = shares;
                }
            }
        }
        // Cross pairs within [1, 25]; bends at most 5.
        assert!(emb.drawing1.max_bends() <= 5);
        assert!(emb.drawing2.max_bends() <= 5);
        for (e1, p1) in &emb.drawing1.polylines {
            for (e2, p2) in &emb.drawing2.polylines {
                let c = count_cross(p1, p2);
                assert!(
                    (1..=25).contains(&c),
                    "cross pair {e1:?} x {e2:?} = {c} out of [1,25]\n p1={:?}\n p2={:?}",
                    p1.points.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>(),
                    p2.points.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn k4_with_itself_all_parities() {
        let g = k4();
        for p1 in [Equivalence::Direct, Equivalence::Mirror] {
            for p2 in [Equivalence::Direct, Equivalence::Mirror] {
                let emb = simultaneous_embed(&g, &g, &g.rot, &g.rot, p1, p2).unwrap();
                verify_embedding(&g, &g, &emb);
                let r1 = emb.drawing1.rotation_system();
                let r2 = emb.drawing2.rotation_system();
                assert_eq!(check_direct_equivalence(&g.rot, &r1).unwrap(), p1);
                assert_eq!(check_direct_equivalence(&g.rot, &r2).unwrap(), p2);
            }
        }
    }

    #[test]
    fn octahedron_with_glued_tetrahedra() {
        // Same vertex count (6 after one dummy? no: glued tetrahedra has 5
        // vertices, octahedron 6). Use two copies of the octahedron with
        // different labelings instead; then a 5-vertex pair.
        let g1 = octahedron();
        let g2 = octahedron();
        let emb = simultaneous_embed(
            &g1,
            &g2,
            &g1.rot,
            &g2.rot,
            Equivalence::Direct,
            Equivalence::Direct,
        )
        .unwrap();
        verify_embedding(&g1, &g2, &emb);
    }

    #[test]
    fn five_vertex_pair_with_dummies() {
        let g1 = glued_tetrahedra();
        // A second 5-vertex triangulation: stacked K4 (insert 4 into a face
        // of K4 on vertices 0..3).
        let mut rot = BTreeMap::new();
        rot.insert(
            VertexId(0),
            vec![VertexId(1), VertexId(2), VertexId(3), VertexId(4)],
        );
        rot.insert(
            VertexId(1),
            vec![VertexId(0), VertexId(4), VertexId(3), VertexId(2)],
        );
        rot.insert(VertexId(2), vec![VertexId(0), VertexId(1), VertexId(3)]);
        rot.insert(
            VertexId(3),
            vec![VertexId(0), VertexId(2), VertexId(1), VertexId(4)],
        );
        rot.insert(VertexId(4), vec![VertexId(0), VertexId(3), VertexId(1)]);
        let g2 = EmbeddedGraph { rot };
        g2.check_triangulation().unwrap();
        let emb = simultaneous_embed(
            &g1,
            &g2,
            &g1.rot,
            &g2.rot,
            Equivalence::Direct,
            Equivalence::Mirror,
        )
        .unwrap();
        verify_embedding(&g1, &g2, &emb);
        let r1 = emb.drawing1.rotation_system();
        assert_eq!(
            check_direct_equivalence(&g1.rot, &r1).unwrap(),
            Equivalence::Direct
        );
        let r2 = emb.drawing2.rotation_system();
        assert_eq!(
            check_direct_equivalence(&g2.rot, &r2).unwrap(),
            Equivalence::Mirror
        );
    }
}


#[cfg(test)]
mod probe {
    use super::*;
    use crate::geom::{polyline_crossings, EndpointPolicy};

    #[test]
    fn probe_k4_side2() {
        let g = tests::k4_pub();
        let r = simultaneous_embed(
            &g, &g, &g.rot, &g.rot,
            Equivalence::Direct, Equivalence::Direct,
        );
        let emb = match r {
            Ok(e) => e,
            Err(e) => {
                eprintln!("embed error: {e}");
                return;
            }
        };
        let _ = emb;
    }

    #[test]
    fn probe_k4_drawing_crossings() {
        let g = tests::k4_pub();
        // Run the internals with parity checks suppressed by accepting the
        // natural outcome.
        let mut fresh = 4u32;
        let (h1, _d1, f1) = hamiltonianize(&g, fresh).unwrap();
        fresh = f1;
        let _ = fresh;
        let cycle = find_hamiltonian_cycle(&h1).unwrap();
        let order = cycle.clone();
        let pos: BTreeMap<VertexId, i64> = order.iter().enumerate().map(|(k, &v)| (v, k as i64 + 1)).collect();
        eprintln!("order {order:?}");
        // classify chords
        let n = order.len();
        let mut chords = Vec::new();
        for &(a, b) in &h1.edges() {
            let (i, j) = (pos[&a], pos[&b]);
            let (i, j, lo, hi) = if i < j { (i as usize, j as usize, a, b) } else { (j as usize, i as usize, b, a) };
            if j == i + 1 || (i == 1 && j == n) { continue; }
            // compute side at lo
            let rot = &h1.rot[&lo];
            let vp = pos[&lo];
            let succ = order[(vp as usize) % n];
            let pred = order[(vp as usize + n - 2) % n];
            let is = rot.iter().position(|&w| w == succ).unwrap();
            let ip = rot.iter().position(|&w| w == pred).unwrap();
            let io = rot.iter().position(|&w| w == hi).unwrap();
            let len = rot.len();
            let mut side = Side::Below;
            let mut k = is;
            loop {
                k = (k + 1) % len;
                if k == ip { break; }
                if k == io { side = Side::Above; break; }
            }
            eprintln!("chord ({lo},{hi}) pos ({i},{j}) side {side:?}");
            chords.push(Chord { i, j, u: lo, v: hi, side });
        }
        for flip in [false, true] {
            let coord: BTreeMap<VertexId, i64> = order.iter().map(|&v| (v, pos[&v])).collect();
            let lines = route_system(&order, &coord, &chords, flip).unwrap();
            let keys: Vec<_> = lines.keys().copied().collect();
            let mut bad = 0;
            for x in 0..keys.len() {
                for y in x + 1..keys.len() {
                    let c = polyline_crossings(&lines[&keys[x]], &lines[&keys[y]], EndpointPolicy::ExcludeTerminal);
                    match c {
                        Ok(0) => {}
                        Ok(c) => { eprintln!("flip={flip} CROSS {:?} x {:?} = {c}", keys[x], keys[y]); bad += 1; }
                        Err(e) => { eprintln!("flip={flip} ERR {:?} x {:?}: {e}", keys[x], keys[y]); bad += 1; }
                    }
                }
            }
            eprintln!("flip={flip}: {bad} bad pairs");
            let mut gd = GridDrawing::default();
            for (&v, &c) in &coord {
                gd.points.insert(v, (pos_of(&order, v), c));
            }
            for (k, pl) in &lines {
                gd.polylines.insert(*k, pl.clone());
            }
            eprintln!("flip={flip} rows-rot: {:?}", gd.rotation_system());
            let mut gd2 = GridDrawing::default();
            for (&v, &c) in &coord {
                gd2.points.insert(v, (c, pos_of(&order, v)));
            }
            for (k, pl) in &lines {
                gd2.polylines.insert(*k, Polyline { points: pl.points.iter().map(|p| Point::new(p.y.clone(), p.x.clone())).collect(), closed: pl.closed });
            }
            eprintln!("flip={flip} cols-rot: {:?}", gd2.rotation_system());
        }
    }
}
