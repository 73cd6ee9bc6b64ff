//! Builds the two labeled maximal planar graphs of an instance: vertices on
//! the curves and hole rims, fragment and hole edges from the arrangement,
//! augmentation to simple triangulations with common hole edges, inner-hole
//! classification, and contraction of the hole clusters.

use crate::arrangement::{ArrangementInstance, CurveKind, System, VertexClass};
use crate::map::Dart;
use crate::plane::{EdgeId, EdgeTag, FaceId, PlaneComplex, PlaneError, VertexId, VertexTag};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriangulateError {
    #[error("instance is invalid: {0}")]
    InvalidInstance(String),
    #[error("plane error: {0}")]
    Plane(#[from] PlaneError),
    #[error("hole edges differ between the two graphs")]
    HoleEdgesDiffer,
    #[error("the two triangulations have different labels: {0}")]
    LabelMismatch(String),
    #[error("a fragment edge would be removed as a {0}; construction bug")]
    FragmentRemoved(&'static str),
    #[error("inner hole {0} landed in a hole face; construction bug")]
    InnerHoleInHoleFace(String),
    #[error("construction bug: {0}")]
    Bug(String),
}

/// Where the subdivision vertices of the curves go and how rims get padded.
#[derive(Debug, Clone)]
pub struct VertexAssignment {
    /// Curve id -> walk edge indices carrying interior marks, ascending.
    pub marks: BTreeMap<String, Vec<usize>>,
    /// Hole id -> number of padding vertices its rim still needs.
    pub rim_padding: BTreeMap<String, usize>,
    /// Holes with at least one curve endpoint: these get subdivided.
    pub touched: BTreeSet<String>,
    /// Shared vertices after subdivision (endpoints, rim points, marks).
    pub shared_vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleClass {
    Inner,
    Subdivided,
}

#[derive(Debug, Clone)]
pub struct HoleRecord {
    pub hole: String,
    pub class: HoleClass,
    /// Containing faces in the A graph and the B graph, for inner holes.
    pub signature: Option<(FaceId, FaceId)>,
}

#[derive(Debug, Clone)]
pub struct LabeledTriangulation {
    pub system: System,
    pub complex: PlaneComplex,
    /// Ordered fragment chain per curve of this system.
    pub fragments: BTreeMap<String, Vec<EdgeId>>,
    /// Fan center and counterclockwise rim cycle per subdivided hole.
    pub hole_fans: BTreeMap<String, (VertexId, Vec<VertexId>)>,
    /// Vertices added by this side's augmentation only.
    pub private_vertices: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct RemovedEdge {
    pub tag: EdgeTag,
    pub endpoints: (VertexId, VertexId),
    /// The surviving parallel edge it must be drawn next to, if any.
    pub kept: Option<EdgeId>,
    /// True if the removed edge sat counterclockwise of the kept one at
    /// their lower-id shared endpoint.
    pub ccw_of_kept: bool,
}

#[derive(Debug, Clone)]
pub struct ContractedPair {
    pub g1: PlaneComplex,
    pub g2: PlaneComplex,
    pub hole_vertex: BTreeMap<String, VertexId>,
    pub removed1: Vec<RemovedEdge>,
    pub removed2: Vec<RemovedEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Direct,
    Mirror,
    Neither,
}

/// Decide the subdivision vertices: one interior mark per arc (two if both
/// endpoints stand on one hole), two per single-endpoint loop, three per
/// closed curve; rims of touched holes are padded to three vertices.
pub fn build_vertex_set(inst: &ArrangementInstance) -> Result<VertexAssignment, TriangulateError> {
    let violations = inst.validate();
    if let Some(v) = violations.first() {
        return Err(TriangulateError::InvalidInstance(v.to_string()));
    }
    let (classes, _) = inst.classify_vertices();

    let mut touched: BTreeSet<String> = BTreeSet::new();
    let mut rim_count: BTreeMap<String, usize> = BTreeMap::new();
    for class in classes.values() {
        if let VertexClass::RimPoint { hole, endpoints } = class {
            *rim_count.entry(hole.clone()).or_insert(0) += 1;
            if !endpoints.is_empty() {
                touched.insert(hole.clone());
            }
        }
    }

    let mut marks = BTreeMap::new();
    for (id, curve) in &inst.curves {
        let hole_of = |d: Dart| -> Option<String> {
            let v = inst.map.vertex_rep(d);
            match classes.get(&v) {
                Some(VertexClass::RimPoint { hole, .. }) => Some(hole.clone()),
                _ => None,
            }
        };
        let count = match curve.kind {
            CurveKind::Closed => 3,
            CurveKind::Loop => 2,
            CurveKind::Arc => {
                let h1 = hole_of(curve.walk[0]);
                let h2 = hole_of(inst.map.theta(*curve.walk.last().unwrap()));
                // Two marks when both feet stand on one hole, so no two
                // fragment edges share both endpoints after contraction.
                if h1 == h2 {
                    2
                } else {
                    1
                }
            }
        };
        let k = curve.walk.len();
        let positions: Vec<usize> = (0..count).map(|j| j * k / count).collect();
        marks.insert(id.clone(), positions);
    }

    let mut rim_padding = BTreeMap::new();
    let mut shared = 0usize;
    for class in classes.values() {
        match class {
            VertexClass::RimPoint { hole, .. } => {
                if touched.contains(hole) {
                    shared += 1;
                }
            }
            _ => {}
        }
    }
    for h in &touched {
        let have = rim_count.get(h).copied().unwrap_or(0);
        let need = 3usize.saturating_sub(have);
        if need > 0 {
            rim_padding.insert(h.clone(), need);
            shared += need;
        }
    }
    shared += marks.values().map(|v| v.len()).sum::<usize>();

    Ok(VertexAssignment {
        marks,
        rim_padding,
        touched,
        shared_vertices: shared,
    })
}

/// Everything both graph builds share, constructed in one deterministic
/// order so vertex ids agree across the two sides.
struct BaseComplex {
    complex: PlaneComplex,
    vertex_of_rep: BTreeMap<Dart, VertexId>,
    hole_face: BTreeMap<String, FaceId>,
    mark_vertices: BTreeMap<String, Vec<VertexId>>,
    walk_edges: BTreeMap<String, Vec<EdgeId>>,
}

fn build_base(
    inst: &ArrangementInstance,
    assignment: &VertexAssignment,
) -> Result<BaseComplex, TriangulateError> {
    let (classes, _) = inst.classify_vertices();
    let mut complex = PlaneComplex::new();

    let mut vertex_of_rep: BTreeMap<Dart, VertexId> = BTreeMap::new();
    for rep in inst.map.vertex_reps() {
        let tag = match classes.get(&rep) {
            Some(VertexClass::RimPoint { endpoints, .. }) => {
                if endpoints.is_empty() {
                    VertexTag::HoleSubdivision
                } else {
                    VertexTag::Endpoint
                }
            }
            _ => VertexTag::InteriorSubdivision,
        };
        let v = complex.alloc_vertex(tag);
        vertex_of_rep.insert(rep, v);
    }

    let owners = inst.edge_owners();
    let mut edge_of_rep: BTreeMap<Dart, EdgeId> = BTreeMap::new();
    for d in inst.map.darts() {
        let t = inst.map.theta(d);
        if d < t {
            let owner = owners
                .get(&d)
                .ok_or_else(|| TriangulateError::Bug(format!("edge of dart {d} unowned")))?;
            let tag = if let Some(h) = owner.strip_prefix("hole:") {
                EdgeTag::Hole { hole: h.into() }
            } else {
                EdgeTag::Fragment {
                    curve: owner.clone(),
                    index: 0,
                }
            };
            let e = complex.alloc_edge((d, t), tag);
            edge_of_rep.insert(d, e);
        }
    }

    let (rep_class, classes_list) = inst.union_face_classes();
    let mut face_ids: Vec<FaceId> = Vec::new();
    for _ in 0..classes_list.len() {
        face_ids.push(complex.alloc_face());
    }

    for d in inst.map.darts() {
        let t = inst.map.theta(d);
        let e = edge_of_rep[&d.min(t)];
        let v = vertex_of_rep[&inst.map.vertex_rep(d)];
        let f = face_ids[rep_class[&inst.map.face_rep(d)]];
        complex.insert_dart_raw(d, inst.map.sigma(d), inst.map.sigma_inv(d), t, v, e, f);
    }
    let max_dart = inst.map.darts().map(|d| d.0).max().unwrap_or(0);
    complex.reserve_ids(max_dart + 1, 0, 0, 0);

    let mut hole_face = BTreeMap::new();
    for (h, &hd) in &inst.holes {
        let f = face_ids[rep_class[&inst.map.face_rep(hd)]];
        complex.mark_hole(f, h.clone());
        hole_face.insert(h.clone(), f);
    }
    complex.validate()?;

    // Interior marks for both systems, curves in sorted order. Walk
    // positions descend so earlier indices stay valid; equal positions
    // chain through the fresh tail halves, keeping walk order.
    let mut mark_vertices: BTreeMap<String, Vec<VertexId>> = BTreeMap::new();
    let mut walk_edges: BTreeMap<String, Vec<EdgeId>> = BTreeMap::new();
    for (id, curve) in &inst.curves {
        let mut edges: Vec<EdgeId> = curve.walk.iter().map(|&d| complex.edge_of(d)).collect();
        let mut inserted = Vec::new();
        let positions = &assignment.marks[id];
        for (nth, &pos) in positions.iter().enumerate().rev() {
            let e = edges[pos];
            let (w, e2) = complex.subdivide_edge(e, VertexTag::InteriorSubdivision);
            complex.pin_vertex(w);
            edges.insert(pos + 1, e2);
            inserted.push((nth, w));
        }
        inserted.sort_by_key(|&(nth, _)| nth);
        mark_vertices.insert(id.clone(), inserted.into_iter().map(|(_, w)| w).collect());
        walk_edges.insert(id.clone(), edges);
    }

    // Rim padding: chain subdivisions of the lowest rim edge.
    for (h, &need) in &assignment.rim_padding {
        let mut e = complex
            .edge_ids()
            .find(|&e| complex.edge(e).tag == EdgeTag::Hole { hole: h.clone() })
            .ok_or_else(|| TriangulateError::Bug(format!("hole {h} has no rim edges")))?;
        for _ in 0..need {
            let (_, e2) = complex.subdivide_edge(e, VertexTag::HoleSubdivision);
            e = e2;
        }
    }

    Ok(BaseComplex {
        complex,
        vertex_of_rep,
        hole_face,
        mark_vertices,
        walk_edges,
    })
}

pub fn build_graph(
    inst: &ArrangementInstance,
    system: System,
    assignment: &VertexAssignment,
) -> Result<LabeledTriangulation, TriangulateError> {
    build_graph_reserving(inst, system, assignment, 0)
}

/// Build one side's triangulation. `reserve_vertices` keeps this side's
/// private augmentation ids clear of the other side's.
pub fn build_graph_reserving(
    inst: &ArrangementInstance,
    system: System,
    assignment: &VertexAssignment,
    reserve_vertices: u32,
) -> Result<LabeledTriangulation, TriangulateError> {
    let base = build_base(inst, assignment)?;
    let mut complex = base.complex;

    // Delete the other system's curves edge by edge; marks float.
    for (id, curve) in &inst.curves {
        if curve.system == system {
            continue;
        }
        for &e in &base.walk_edges[id] {
            complex.delete_edge(e)?;
        }
    }

    // Delete inner-hole rims, leaving annotations in the surrounding face.
    for (h, &f) in &base.hole_face {
        if assignment.touched.contains(h) {
            continue;
        }
        complex.unmark_hole(f);
        let rim_edges: Vec<EdgeId> = complex
            .edge_ids()
            .filter(|&e| complex.edge(e).tag == EdgeTag::Hole { hole: h.clone() })
            .collect();
        let mut landed = None;
        for e in rim_edges {
            let (d, _) = complex.edge(e).darts;
            let t = complex.theta(d);
            landed = Some(complex.face_of(d).min(complex.face_of(t)));
            complex.delete_edge(e)?;
        }
        let target = landed.ok_or_else(|| TriangulateError::Bug(format!("hole {h} rimless")))?;
        // The rim's own face ids died with it; the merge kept the smaller
        // id, which  belonged to the surrounding region.
        complex.annotate(target, h.clone());
    }

    // Smooth leftover degree-2 curve points (crossings, bends).
    let all_marks: BTreeSet<VertexId> = base
        .mark_vertices
        .values()
        .flat_map(|v| v.iter().copied())
        .collect();
    loop {
        let mut smoothed = false;
        for v in complex.vertex_ids().collect::<Vec<_>>() {
            if complex.floating().contains_key(&v)
                || complex.vertex_tag(v) != VertexTag::InteriorSubdivision
                || all_marks.contains(&v)
            {
                continue;
            }
            let rot = complex.rotation(v);
            if rot.len() != 2 {
                continue;
            }
            let e1 = complex.edge_of(rot[0]);
            let e2 = complex.edge_of(rot[1]);
            if e1 == e2 {
                continue;
            }
            let same_curve = match (&complex.edge(e1).tag, &complex.edge(e2).tag) {
                (EdgeTag::Fragment { curve: c1, .. }, EdgeTag::Fragment { curve: c2, .. }) => {
                    c1 == c2
                }
                _ => false,
            };
            if same_curve {
                complex.smooth_vertex(v)?;
                smoothed = true;
            }
        }
        if !smoothed {
            break;
        }
    }

    // Re-tag fragments in order along each curve of this system.
    let mut fragments: BTreeMap<String, Vec<EdgeId>> = BTreeMap::new();
    for (id, curve) in &inst.curves {
        if curve.system != system {
            continue;
        }
        let start_vertex = match curve.kind {
            CurveKind::Closed => base.mark_vertices[id][0],
            _ => base.vertex_of_rep[&inst.map.vertex_rep(curve.walk[0])],
        };
        let mut chain: Vec<EdgeId> = Vec::new();
        let mut at = start_vertex;
        loop {
            let next_edge = complex
                .rotation(at)
                .iter()
                .map(|&d| complex.edge_of(d))
                .find(|&e| {
                    !chain.contains(&e)
                        && matches!(&complex.edge(e).tag,
                            EdgeTag::Fragment { curve, .. } if curve == id)
                });
            let Some(e) = next_edge else { break };
            complex.set_edge_tag(
                e,
                EdgeTag::Fragment {
                    curve: id.clone(),
                    index: chain.len() as u32,
                },
            );
            let (a, b) = complex.edge_endpoints(e);
            at = if a == at { b } else { a };
            chain.push(e);
            if at == start_vertex {
                break;
            }
        }
        let expected = assignment.marks[id].len()
            + match curve.kind {
                CurveKind::Closed => 0,
                _ => 1,
            };
        if chain.len() != expected {
            return Err(TriangulateError::Bug(format!(
                "curve {id} has {} fragments, expected {expected}",
                chain.len()
            )));
        }
        fragments.insert(id.clone(), chain);
    }

    // Fan the interior of every subdivided hole.
    let mut hole_fans = BTreeMap::new();
    for h in &assignment.touched {
        let f = complex
            .hole_faces()
            .iter()
            .find(|(_, hh)| *hh == h)
            .map(|(&f, _)| f)
            .ok_or_else(|| TriangulateError::Bug(format!("hole {h} lost its face")))?;
        complex.unmark_hole(f);
        let (center, _) = complex.fan_face(
            f,
            VertexTag::HoleSubdivision,
            EdgeTag::Hole { hole: h.clone() },
        )?;
        let rim: Vec<VertexId> = complex
            .rotation(center)
            .iter()
            .map(|&d| complex.vertex_of(complex.theta(d)))
            .collect();
        hole_fans.insert(h.clone(), (center, rim));
    }

    if reserve_vertices > 0 {
        complex.reserve_ids(0, reserve_vertices, 0, 0);
    }

    // Augment: wheel every face that is not a safe triangle. Triangles that
    // sit entirely on one hole cluster vanish under contraction and may not
    // host inner holes.
    loop {
        let mut acted = false;
        for f in complex.face_ids() {
            if complex.is_hole_face(f) {
                continue;
            }
            let needs = if !complex.is_triangle(f) {
                true
            } else {
                let has_ann = complex.annotations().get(&f).map_or(false, |a| !a.is_empty());
                has_ann && face_collapses(&complex, f)
            };
            if !needs {
                continue;
            }
            let stash_ann = complex.take_annotations(f);
            let stash_float = complex.take_floats_in(f);
            let (_center, _guards, sectors) =
                complex.wheel_face(f, VertexTag::Filler, EdgeTag::Filler)?;
            place_annotations(&mut complex, &sectors, stash_ann);
            let float_home = pick_float_sector(&complex, &sectors);
            for v in stash_float {
                complex.set_float(v, float_home);
            }
            acted = true;
            break;
        }
        if !acted {
            break;
        }
    }

    // Attach floating marks of the other system as triangle splits in their
    // tracked faces, one at a time; marks sharing a face move into a fresh
    // sector and wait their turn.
    loop {
        let next = complex.floating().iter().next().map(|(&v, &f)| (v, f));
        let Some((v, f)) = next else { break };
        if !complex.is_triangle(f) || complex.is_hole_face(f) {
            return Err(TriangulateError::Bug(format!(
                "float target {f} for {v} is not an interior triangle"
            )));
        }
        if max_same_cluster_corners(&complex, f) >= 2 {
            return Err(TriangulateError::Bug(format!(
                "float target {f} for {v} would wrap a hole cluster"
            )));
        }
        let stash = complex.take_annotations(f);
        let mut others = complex.take_floats_in(f);
        others.retain(|&x| x != v);
        let (_, sectors) =
            complex.fan_face_with(f, Some(v), VertexTag::InteriorSubdivision, EdgeTag::Filler)?;
        place_annotations(&mut complex, &sectors, stash);
        let float_home = pick_float_sector(&complex, &sectors);
        for o in others {
            complex.set_float(o, float_home);
        }
    }

    let private_vertices: Vec<VertexId> = complex
        .vertex_ids()
        .filter(|&v| complex.vertex_tag(v) == VertexTag::Filler)
        .collect();

    Ok(LabeledTriangulation {
        system,
        complex,
        fragments,
        hole_fans,
        private_vertices,
    })
}


/// Largest number of this face's corners lying on one hole's rim. Inserting
/// a vertex into a face where this is 2 or more would wrap structure inside
/// a parallel pair at contraction time.
fn max_same_cluster_corners(complex: &PlaneComplex, f: FaceId) -> usize {
    let mut counts: BTreeMap<String, BTreeSet<VertexId>> = BTreeMap::new();
    for w in complex.face_walks(f) {
        for &d in &w {
            let v = complex.vertex_of(d);
            if let Some(h) = rim_hole_of(complex, v) {
                counts.entry(h).or_default().insert(v);
            }
        }
    }
    counts.values().map(|s| s.len()).max().unwrap_or(0)
}

/// Sector safe to host an inserted vertex: fewest same-cluster corners wins.
fn pick_float_sector(complex: &PlaneComplex, sectors: &[FaceId]) -> FaceId {
    sectors
        .iter()
        .copied()
        .min_by_key(|&f| (max_same_cluster_corners(complex, f), f))
        .expect("sectors nonempty")
}

fn rim_hole_of(complex: &PlaneComplex, v: VertexId) -> Option<String> {
    if complex.floating().contains_key(&v) {
        return None;
    }
    for &d in &complex.rotation(v) {
        if let EdgeTag::Hole { hole } = &complex.edge(complex.edge_of(d)).tag {
            return Some(hole.clone());
        }
    }
    None
}

/// Every vertex of the face lies on a single hole cluster.
fn face_collapses(complex: &PlaneComplex, f: FaceId) -> bool {
    let walks = complex.face_walks(f);
    let mut holes: BTreeSet<Option<String>> = BTreeSet::new();
    for w in &walks {
        for &d in w {
            holes.insert(rim_hole_of(complex, complex.vertex_of(d)));
        }
    }
    holes.len() == 1 && !holes.contains(&None)
}

/// Prefer a sector with a fragment edge on its boundary; never use one that
/// collapses into a hole vertex under contraction if avoidable.
fn place_annotations(complex: &mut PlaneComplex, sectors: &[FaceId], holes: Vec<String>) {
    if holes.is_empty() {
        return;
    }
    let score = |complex: &PlaneComplex, f: FaceId| -> u32 {
        let walks = complex.face_walks(f);
        let has_fragment = walks.iter().any(|w| {
            w.iter()
                .any(|&d| complex.edge(complex.edge_of(d)).tag.is_fragment())
        });
        if has_fragment {
            0
        } else if !face_collapses(complex, f) {
            1
        } else {
            2
        }
    };
    let best = sectors
        .iter()
        .copied()
        .min_by_key(|&f| (score(complex, f), f))
        .expect("triangulating a face yields sectors");
    for h in holes {
        complex.annotate(best, h);
    }
}

/// The full two-sided build with the common vertex set reconciled.
pub fn build_pair(
    inst: &ArrangementInstance,
) -> Result<(LabeledTriangulation, LabeledTriangulation, VertexAssignment), TriangulateError> {
    let assignment = build_vertex_set(inst)?;
    let mut t1 = build_graph_reserving(inst, System::A, &assignment, 0)?;
    let reserve = t1.complex.vertex_ids().map(|v| v.0 + 1).max().unwrap_or(0);
    let mut t2 = build_graph_reserving(inst, System::B, &assignment, reserve)?;

    if t1.hole_fans != t2.hole_fans || hole_edge_pairs(&t1) != hole_edge_pairs(&t2) {
        return Err(TriangulateError::HoleEdgesDiffer);
    }

    // Mutual insertion keeps the vertex sets identical.
    let p2 = t2.private_vertices.clone();
    for v in p2 {
        let f = pick_host_triangle(&t1.complex)?;
        let stash = t1.complex.take_annotations(f);
        let (_, sectors) =
            t1.complex
                .fan_face_with(f, Some(v), VertexTag::Filler, EdgeTag::Filler)?;
        place_annotations(&mut t1.complex, &sectors, stash);
    }
    let p1 = t1.private_vertices.clone();
    for v in p1 {
        let f = pick_host_triangle(&t2.complex)?;
        let stash = t2.complex.take_annotations(f);
        let (_, sectors) =
            t2.complex
                .fan_face_with(f, Some(v), VertexTag::Filler, EdgeTag::Filler)?;
        place_annotations(&mut t2.complex, &sectors, stash);
    }

    let v1: BTreeSet<VertexId> = t1.complex.vertex_ids().collect();
    let v2: BTreeSet<VertexId> = t2.complex.vertex_ids().collect();
    if v1 != v2 {
        return Err(TriangulateError::LabelMismatch(format!(
            "vertex sets differ: {} vs {}",
            v1.len(),
            v2.len()
        )));
    }
    t1.complex.check_maximal_simple()?;
    t2.complex.check_maximal_simple()?;
    Ok((t1, t2, assignment))
}

fn hole_edge_pairs(t: &LabeledTriangulation) -> BTreeSet<(VertexId, VertexId, String)> {
    let mut out = BTreeSet::new();
    for e in t.complex.edge_ids() {
        if let EdgeTag::Hole { hole } = &t.complex.edge(e).tag {
            let (a, b) = t.complex.edge_endpoints(e);
            out.insert((a.min(b), a.max(b), hole.clone()));
        }
    }
    out
}

fn pick_host_triangle(complex: &PlaneComplex) -> Result<FaceId, TriangulateError> {
    let mut fallback = None;
    for f in complex.face_ids() {
        if !complex.is_triangle(f) || complex.is_hole_face(f) {
            continue;
        }
        let walks = complex.face_walks(f);
        let any_hole_edge = walks[0]
            .iter()
            .any(|&d| complex.edge(complex.edge_of(d)).tag.is_hole());
        if any_hole_edge || max_same_cluster_corners(complex, f) >= 2 {
            continue;
        }
        if complex.annotations().get(&f).map_or(true, |a| a.is_empty()) {
            return Ok(f);
        }
        if fallback.is_none() {
            fallback = Some(f);
        }
    }
    fallback.ok_or_else(|| TriangulateError::Bug("no host triangle for insertion".into()))
}

/// Classify all holes; inner holes carry the pair of faces containing them.
pub fn classify_holes(
    inst: &ArrangementInstance,
    t1: &LabeledTriangulation,
    t2: &LabeledTriangulation,
) -> Result<Vec<HoleRecord>, TriangulateError> {
    let mut out = Vec::new();
    for h in inst.holes.keys() {
        if t1.hole_fans.contains_key(h) {
            out.push(HoleRecord {
                hole: h.clone(),
                class: HoleClass::Subdivided,
                signature: None,
            });
            continue;
        }
        let f1 = t1
            .complex
            .annotation_face(h)
            .ok_or_else(|| TriangulateError::Bug(format!("inner hole {h} lost in the A graph")))?;
        let f2 = t2
            .complex
            .annotation_face(h)
            .ok_or_else(|| TriangulateError::Bug(format!("inner hole {h} lost in the B graph")))?;
        if t1.complex.is_hole_face(f1) || t2.complex.is_hole_face(f2) {
            return Err(TriangulateError::InnerHoleInHoleFace(h.clone()));
        }
        out.push(HoleRecord {
            hole: h.clone(),
            class: HoleClass::Inner,
            signature: Some((f1, f2)),
        });
    }
    Ok(out)
}

/// Contract hole edges in both graphs, removing and logging the loops and
/// parallel edges, and renaming each cluster to a fresh shared vertex.
pub fn contract_holes(
    t1: &LabeledTriangulation,
    t2: &LabeledTriangulation,
) -> Result<ContractedPair, TriangulateError> {
    let mut next = 0u32;
    for t in [t1, t2] {
        for v in t.complex.vertex_ids() {
            next = next.max(v.0 + 1);
        }
    }
    let mut hole_vertex = BTreeMap::new();
    for (i, h) in t1.hole_fans.keys().enumerate() {
        hole_vertex.insert(h.clone(), VertexId(next + i as u32));
    }
    let (g1, removed1) = contract_one(t1, &hole_vertex)?;
    let (g2, removed2) = contract_one(t2, &hole_vertex)?;
    if g1.nvertices() >= 3 {
        g1.check_maximal_simple()?;
        g2.check_maximal_simple()?;
    }
    Ok(ContractedPair {
        g1,
        g2,
        hole_vertex,
        removed1,
        removed2,
    })
}

fn contract_one(
    t: &LabeledTriangulation,
    hole_vertex: &BTreeMap<String, VertexId>,
) -> Result<(PlaneComplex, Vec<RemovedEdge>), TriangulateError> {
    let mut c = t.complex.clone();
    let mut removed = Vec::new();
    for (h, &vh) in hole_vertex {
        loop {
            let candidate = c
                .edge_ids()
                .find(|&e| c.edge(e).tag == EdgeTag::Hole { hole: h.clone() });
            let Some(e) = candidate else { break };
            let (a, b) = c.edge_endpoints(e);
            if a == b {
                let tag = c.edge(e).tag.clone();
                removed.push(RemovedEdge {
                    tag,
                    endpoints: (a, b),
                    kept: None,
                    ccw_of_kept: false,
                });
                c.delete_edge(e)?;
            } else {
                c.contract_edge(e)?;
            }
        }
        let (center, rim) = &t.hole_fans[h];
        let mut cluster: BTreeSet<VertexId> = rim.iter().copied().collect();
        cluster.insert(*center);
        let survivor = cluster
            .iter()
            .copied()
            .find(|&v| c.vertex_ids().any(|x| x == v))
            .ok_or_else(|| TriangulateError::Bug(format!("cluster of {h} vanished")))?;
        c.rename_vertex(survivor, vh);
    }

    // Drop loops and one edge of each parallel pair; fragments must survive.
    loop {
        let mut acted = false;
        let mut groups: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for e in c.edge_ids().collect::<Vec<_>>() {
            let (a, b) = c.edge_endpoints(e);
            if a == b {
                let tag = c.edge(e).tag.clone();
                if tag.is_fragment() {
                    return Err(TriangulateError::FragmentRemoved("loop"));
                }
                removed.push(RemovedEdge {
                    tag,
                    endpoints: (a, b),
                    kept: None,
                    ccw_of_kept: false,
                });
                c.delete_edge(e)?;
                acted = true;
                break;
            }
            groups.entry((a.min(b), a.max(b))).or_default().push(e);
        }
        if acted {
            continue;
        }
        for (_, group) in groups {
            if group.len() < 2 {
                continue;
            }
            let kept = group
                .iter()
                .copied()
                .find(|&e| c.edge(e).tag.is_fragment())
                .unwrap_or(group[0]);
            let victim = *group.iter().find(|&&e| e != kept).unwrap();
            let tag = c.edge(victim).tag.clone();
            if tag.is_fragment() {
                return Err(TriangulateError::FragmentRemoved("parallel edge"));
            }
            let (a, b) = c.edge_endpoints(victim);
            let z = a.min(b);
            let rot = c.rotation(z);
            let kd = rot
                .iter()
                .copied()
                .find(|&d| c.edge_of(d) == kept)
                .ok_or_else(|| TriangulateError::Bug("kept edge missing at shared vertex".into()))?;
            let rd = rot
                .iter()
                .copied()
                .find(|&d| c.edge_of(d) == victim)
                .unwrap();
            let ccw_of_kept = c.sigma(kd) == rd;
            removed.push(RemovedEdge {
                tag,
                endpoints: (a, b),
                kept: Some(kept),
                ccw_of_kept,
            });
            c.delete_edge(victim)?;
            acted = true;
            break;
        }
        if !acted {
            break;
        }
    }
    Ok((c, removed))
}

/// Compare two labeled rotation systems: equal rotations everywhere means
/// directly equivalent, globally reversed means mirror.
pub fn check_direct_equivalence(
    r1: &BTreeMap<VertexId, Vec<VertexId>>,
    r2: &BTreeMap<VertexId, Vec<VertexId>>,
) -> Result<Equivalence, TriangulateError> {
    if r1.keys().collect::<Vec<_>>() != r2.keys().collect::<Vec<_>>() {
        return Err(TriangulateError::LabelMismatch(
            "different vertex sets".into(),
        ));
    }
    fn cyclic_equal(a: &[VertexId], b: &[VertexId]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|s| (0..n).all(|i| a[i] == b[(i + s) % n]))
    }
    let mut direct = true;
    let mut mirror = true;
    for (v, rot1) in r1 {
        let rot2 = &r2[v];
        let set1: BTreeSet<_> = rot1.iter().collect();
        let set2: BTreeSet<_> = rot2.iter().collect();
        if set1 != set2 {
            return Err(TriangulateError::LabelMismatch(format!(
                "neighborhoods of {v} differ"
            )));
        }
        if !cyclic_equal(rot1, rot2) {
            direct = false;
        }
        let rev: Vec<VertexId> = rot2.iter().rev().copied().collect();
        if !cyclic_equal(rot1, &rev) {
            mirror = false;
        }
        if !direct && !mirror {
            return Ok(Equivalence::Neither);
        }
    }
    Ok(if direct {
        Equivalence::Direct
    } else if mirror {
        Equivalence::Mirror
    } else {
        Equivalence::Neither
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch;

    #[test]
    fn pair_builds_for_lower_bound() {
        let inst = sketch::lower_bound_instance(2, 2).unwrap();
        let (t1, t2, asg) = build_pair(&inst).unwrap();
        assert_eq!(asg.touched.len(), 1); // only h1 carries endpoints
        // E = 3V - 6 on both sides.
        assert_eq!(t1.complex.nedges(), 3 * t1.complex.nvertices() - 6);
        assert_eq!(t2.complex.nedges(), 3 * t2.complex.nvertices() - 6);
        // Hairpin arcs with both feet on one hole get 2 marks, 3 fragments.
        for (id, frags) in &t1.fragments {
            assert_eq!(frags.len(), 3, "curve {id}");
        }
        // Closed rings get 3 fragments.
        for (id, frags) in &t2.fragments {
            assert_eq!(frags.len(), 3, "curve {id}");
        }
    }

    #[test]
    fn pair_builds_for_fig1() {
        let inst = sketch::fig1_instance().unwrap();
        let (t1, t2, asg) = build_pair(&inst).unwrap();
        assert_eq!(asg.touched.len(), 3);
        let records = classify_holes(&inst, &t1, &t2).unwrap();
        assert!(records.iter().all(|r| r.class == HoleClass::Subdivided));
        // Fragment walks concatenate back to the curve walks: a2 is a
        // plain two-hole arc, so exactly 2 fragments.
        assert_eq!(t1.fragments["a2"].len(), 2);
    }

    #[test]
    fn inner_holes_get_signatures() {
        let inst = sketch::lower_bound_instance(1, 1).unwrap();
        let (t1, t2, _) = build_pair(&inst).unwrap();
        let records = classify_holes(&inst, &t1, &t2).unwrap();
        let inner: Vec<_> = records
            .iter()
            .filter(|r| r.class == HoleClass::Inner)
            .collect();
        assert_eq!(inner.len(), 2); // h2 and h3 are untouched
        for r in inner {
            let (f1, f2) = r.signature.unwrap();
            assert!(!t1.complex.is_hole_face(f1));
            assert!(!t2.complex.is_hole_face(f2));
        }
    }

    #[test]
    fn contraction_keeps_maximal_and_logs_no_fragments() {
        let inst = sketch::lower_bound_instance(2, 1).unwrap();
        let (t1, t2, _) = build_pair(&inst).unwrap();
        let pair = contract_holes(&t1, &t2).unwrap();
        assert_eq!(pair.hole_vertex.len(), 1);
        assert!(pair
            .removed1
            .iter()
            .chain(pair.removed2.iter())
            .all(|r| !r.tag.is_fragment()));
        // Contraction preserved maximality (checked inside), and the two
        // graphs still share their vertex set.
        let v1: BTreeSet<VertexId> = pair.g1.vertex_ids().collect();
        let v2: BTreeSet<VertexId> = pair.g2.vertex_ids().collect();
        assert_eq!(v1, v2);
        // The hole vertex has the cyclic order of the old rim attachments.
        let vh = pair.hole_vertex["h1"];
        assert!(pair.g1.degree(vh) >= 3);
    }

    #[test]
    fn equivalence_direct_and_mirror() {
        let inst = sketch::lower_bound_instance(1, 1).unwrap();
        let (t1, _, _) = build_pair(&inst).unwrap();
        let r = t1.complex.rotation_system();
        assert_eq!(
            check_direct_equivalence(&r, &r).unwrap(),
            Equivalence::Direct
        );
        let mirrored: BTreeMap<VertexId, Vec<VertexId>> = r
            .iter()
            .map(|(&v, rot)| (v, rot.iter().rev().copied().collect()))
            .collect();
        assert_eq!(
            check_direct_equivalence(&r, &mirrored).unwrap(),
            Equivalence::Mirror
        );
    }

    #[test]
    fn fragment_chains_match_marks() {
        let inst = sketch::fig1_instance().unwrap();
        let asg = build_vertex_set(&inst).unwrap();
        // b2 is an arc between two different holes: 1 mark, b3 closed: 3.
        assert_eq!(asg.marks["b2"].len(), 1);
        assert_eq!(asg.marks["b3"].len(), 3);
        assert_eq!(asg.marks["a1"].len(), 2); // same-hole arc
    }
}

