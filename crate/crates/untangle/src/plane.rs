//! Mutable sphere complex used by the triangulation pipeline.
//!
//! A `PlaneComplex` is a dart structure on the sphere whose components are
//! tied together by shared face ids: a face id names a region of the sphere,
//! and several boundary walks (one per component bordering the region) may
//! carry the same id. Holes are marked face ids; inner holes that have been
//! stripped of their rim circles float as per-face annotations.
//!
//! Conventions match `map`: sigma is counterclockwise, the face on the left
//! of dart `d` is `face_of(d)`, the sector counterclockwise from `d` to
//! `sigma(d)` lies in `face_of(d)`, and head-to-tail face walks step through
//! `sigma_inv(theta(d))`.

use crate::map::{CombinatorialMap, Dart, MapError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}
impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}", self.0)
    }
}
impl std::fmt::Display for FaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeTag {
    /// Portion of a curve between consecutive subdivision vertices.
    Fragment { curve: String, index: u32 },
    /// On or inside a hole; common to both graphs.
    Hole { hole: String },
    Filler,
}

impl EdgeTag {
    pub fn is_fragment(&self) -> bool {
        matches!(self, EdgeTag::Fragment { .. })
    }
    pub fn is_hole(&self) -> bool {
        matches!(self, EdgeTag::Hole { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexTag {
    Endpoint,
    InteriorSubdivision,
    HoleSubdivision,
    Filler,
}

#[derive(Debug, Clone)]
pub struct EdgeInfo {
    pub darts: (Dart, Dart),
    pub tag: EdgeTag,
}

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("darts {0} and {1} are not corners of a common face")]
    CornersInDifferentFaces(Dart, Dart),
    #[error("face {0} is marked as a hole")]
    FaceIsHole(FaceId),
    #[error("vertex {0} does not have exactly two distinct edges")]
    NotSmoothable(VertexId),
    #[error("edge {0} is a loop; refusing")]
    LoopEdge(EdgeId),
    #[error("face {0} walk is too short or degenerate")]
    DegenerateFace(FaceId),
    #[error("face {0} has repeated vertices; fan needs a simple walk")]
    FanNeedsSimpleWalk(FaceId),
    #[error("complex is not a simple maximal triangulation: {0}")]
    NotTriangulation(String),
    #[error("map error: {0}")]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Default)]
pub struct PlaneComplex {
    next_dart: u32,
    next_vertex: u32,
    next_edge: u32,
    next_face: u32,
    sigma: BTreeMap<Dart, Dart>,
    sigma_inv: BTreeMap<Dart, Dart>,
    theta: BTreeMap<Dart, Dart>,
    vertex_of: BTreeMap<Dart, VertexId>,
    face_of: BTreeMap<Dart, FaceId>,
    edge_of: BTreeMap<Dart, EdgeId>,
    edges: BTreeMap<EdgeId, EdgeInfo>,
    vertex_tags: BTreeMap<VertexId, VertexTag>,
    vertex_dart: BTreeMap<VertexId, Dart>,
    /// Faces that are holes of the surface, by hole id.
    hole_faces: BTreeMap<FaceId, String>,
    /// Inner holes floating inside a face, in deterministic order.
    annotations: BTreeMap<FaceId, Vec<String>>,
    /// Vertices that must survive even when they lose their last dart.
    pinned: BTreeSet<VertexId>,
    /// Pinned vertices currently without darts, and the face they float in.
    floating: BTreeMap<VertexId, FaceId>,
}

impl PlaneComplex {
    pub fn new() -> Self {
        PlaneComplex::default()
    }

    // -- id allocation -------------------------------------------------------

    pub fn alloc_dart(&mut self) -> Dart {
        let d = Dart(self.next_dart);
        self.next_dart += 1;
        d
    }

    pub fn alloc_vertex(&mut self, tag: VertexTag) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertex_tags.insert(v, tag);
        v
    }

    pub fn alloc_edge(&mut self, darts: (Dart, Dart), tag: EdgeTag) -> EdgeId {
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(e, EdgeInfo { darts, tag });
        e
    }

    pub fn alloc_face(&mut self) -> FaceId {
        let f = FaceId(self.next_face);
        self.next_face += 1;
        f
    }

    pub fn reserve_ids(&mut self, dart: u32, vertex: u32, edge: u32, face: u32) {
        self.next_dart = self.next_dart.max(dart);
        self.next_vertex = self.next_vertex.max(vertex);
        self.next_edge = self.next_edge.max(edge);
        self.next_face = self.next_face.max(face);
    }

    /// Raw insertion used by builders; consistency is the caller's duty
    /// until `validate` passes.
    #[allow(clippy::too_many_arguments)]
    pub fn insert_dart_raw(
        &mut self,
        d: Dart,
        sigma: Dart,
        sigma_inv: Dart,
        theta: Dart,
        vertex: VertexId,
        edge: EdgeId,
        face: FaceId,
    ) {
        self.sigma.insert(d, sigma);
        self.sigma_inv.insert(d, sigma_inv);
        self.theta.insert(d, theta);
        self.vertex_of.insert(d, vertex);
        self.edge_of.insert(d, edge);
        self.face_of.insert(d, face);
        self.vertex_dart.insert(vertex, d);
    }

    // -- navigation ----------------------------------------------------------

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.sigma.keys().copied()
    }

    pub fn ndarts(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[&d]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[&d]
    }

    pub fn theta(&self, d: Dart) -> Dart {
        self.theta[&d]
    }

    pub fn vertex_of(&self, d: Dart) -> VertexId {
        self.vertex_of[&d]
    }

    pub fn face_of(&self, d: Dart) -> FaceId {
        self.face_of[&d]
    }

    pub fn edge_of(&self, d: Dart) -> EdgeId {
        self.edge_of[&d]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeInfo {
        &self.edges[&e]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_tags.keys().copied()
    }

    pub fn nvertices(&self) -> usize {
        self.vertex_tags.len()
    }

    pub fn nedges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_tag(&self, v: VertexId) -> VertexTag {
        self.vertex_tags[&v]
    }

    pub fn set_vertex_tag(&mut self, v: VertexId, tag: VertexTag) {
        self.vertex_tags.insert(v, tag);
    }

    pub fn set_edge_tag(&mut self, e: EdgeId, tag: EdgeTag) {
        self.edges.get_mut(&e).unwrap().tag = tag;
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let (d, t) = self.edges[&e].darts;
        (self.vertex_of[&d], self.vertex_of[&t])
    }

    pub fn any_dart_of_vertex(&self, v: VertexId) -> Dart {
        self.vertex_dart[&v]
    }

    /// Counterclockwise rotation at the vertex of `d`, starting at `d`.
    pub fn rotation_from(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut x = self.sigma[&d];
        while x != d {
            out.push(x);
            x = self.sigma[&x];
        }
        out
    }

    pub fn rotation(&self, v: VertexId) -> Vec<Dart> {
        self.rotation_from(self.vertex_dart[&v])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    /// Head-to-tail face walk successor (interior on the left).
    pub fn walk_next(&self, d: Dart) -> Dart {
        self.sigma_inv[&self.theta[&d]]
    }

    /// The boundary walk of the face of `d` containing `d`, head-to-tail.
    pub fn walk_from(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut x = self.walk_next(d);
        while x != d {
            out.push(x);
            x = self.walk_next(x);
        }
        out
    }

    /// All darts carrying face id `f`.
    pub fn face_darts(&self, f: FaceId) -> Vec<Dart> {
        self.face_of
            .iter()
            .filter(|(_, &ff)| ff == f)
            .map(|(&d, _)| d)
            .collect()
    }

    /// Member boundary walks of face `f`, one per component bordering it.
    pub fn face_walks(&self, f: FaceId) -> Vec<Vec<Dart>> {
        let darts = self.face_darts(f);
        let mut seen: BTreeSet<Dart> = BTreeSet::new();
        let mut walks = Vec::new();
        for d in darts {
            if seen.contains(&d) {
                continue;
            }
            let w = self.walk_from(d);
            seen.extend(w.iter().copied());
            walks.push(w);
        }
        walks
    }

    pub fn face_ids(&self) -> BTreeSet<FaceId> {
        self.face_of.values().copied().collect()
    }

    pub fn is_hole_face(&self, f: FaceId) -> bool {
        self.hole_faces.contains_key(&f)
    }

    pub fn hole_faces(&self) -> &BTreeMap<FaceId, String> {
        &self.hole_faces
    }

    pub fn mark_hole(&mut self, f: FaceId, hole: String) {
        self.hole_faces.insert(f, hole);
    }

    pub fn unmark_hole(&mut self, f: FaceId) -> Option<String> {
        self.hole_faces.remove(&f)
    }

    pub fn annotations(&self) -> &BTreeMap<FaceId, Vec<String>> {
        &self.annotations
    }

    pub fn annotate(&mut self, f: FaceId, hole: String) {
        self.annotations.entry(f).or_default().push(hole);
    }

    pub fn take_annotations(&mut self, f: FaceId) -> Vec<String> {
        self.annotations.remove(&f).unwrap_or_default()
    }

    pub fn annotation_face(&self, hole: &str) -> Option<FaceId> {
        for (&f, list) in &self.annotations {
            if list.iter().any(|h| h == hole) {
                return Some(f);
            }
        }
        None
    }

    /// Keep this vertex alive as a floating point if it loses all darts.
    pub fn pin_vertex(&mut self, v: VertexId) {
        self.pinned.insert(v);
    }

    pub fn floating(&self) -> &BTreeMap<VertexId, FaceId> {
        &self.floating
    }

    pub fn take_floats_in(&mut self, f: FaceId) -> Vec<VertexId> {
        let vs: Vec<VertexId> = self
            .floating
            .iter()
            .filter(|(_, &ff)| ff == f)
            .map(|(&v, _)| v)
            .collect();
        for v in &vs {
            self.floating.remove(v);
        }
        vs
    }

    pub fn set_float(&mut self, v: VertexId, f: FaceId) {
        self.floating.insert(v, f);
    }

    /// Give a vertex a new id everywhere. The target id must be fresh or a
    /// floating (dartless) vertex, which is absorbed.
    pub fn rename_vertex(&mut self, old: VertexId, new: VertexId) {
        if old == new {
            return;
        }
        if !self.vertex_dart.contains_key(&new) {
            self.floating.remove(&new);
            self.vertex_tags.remove(&new);
            self.pinned.remove(&new);
        }
        assert!(
            !self.vertex_tags.contains_key(&new),
            "renaming onto an existing vertex id"
        );
        let darts: Vec<Dart> = self
            .vertex_of
            .iter()
            .filter(|(_, &v)| v == old)
            .map(|(&d, _)| d)
            .collect();
        for d in darts {
            self.vertex_of.insert(d, new);
        }
        if let Some(t) = self.vertex_tags.remove(&old) {
            self.vertex_tags.insert(new, t);
        }
        if let Some(d) = self.vertex_dart.remove(&old) {
            self.vertex_dart.insert(new, d);
        }
        if self.pinned.remove(&old) {
            self.pinned.insert(new);
        }
        if let Some(f) = self.floating.remove(&old) {
            self.floating.insert(new, f);
        }
        self.next_vertex = self.next_vertex.max(new.0 + 1);
    }

    pub fn is_triangle(&self, f: FaceId) -> bool {
        let walks = self.face_walks(f);
        if walks.len() != 1 || walks[0].len() != 3 {
            return false;
        }
        let vs: BTreeSet<VertexId> = walks[0].iter().map(|&d| self.vertex_of[&d]).collect();
        vs.len() == 3
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (&e, info) in &self.edges {
            let (a, b) = (self.vertex_of[&info.darts.0], self.vertex_of[&info.darts.1]);
            if (a, b) == (u, v) || (a, b) == (v, u) {
                out.push(e);
            }
        }
        out
    }

    // -- surgery -------------------------------------------------------------

    /// Remove a dart from its rotation. If the vertex loses its last dart
    /// it either floats (pinned) into `float_face` or disappears.
    fn unlink_from_rotation(&mut self, d: Dart, float_face: FaceId) {
        let prev = self.sigma_inv[&d];
        let next = self.sigma[&d];
        let v = self.vertex_of[&d];
        if prev == d {
            self.vertex_dart.remove(&v);
            if self.pinned.contains(&v) {
                self.floating.insert(v, float_face);
            } else {
                self.vertex_tags.remove(&v);
            }
        } else {
            self.sigma.insert(prev, next);
            self.sigma_inv.insert(next, prev);
            self.vertex_dart.insert(v, next);
        }
        self.sigma.remove(&d);
        self.sigma_inv.remove(&d);
    }

    fn drop_dart_records(&mut self, d: Dart) {
        self.theta.remove(&d);
        self.vertex_of.remove(&d);
        self.face_of.remove(&d);
        self.edge_of.remove(&d);
    }

    /// Insert dart `x` (already allocated) right after `d` in the rotation.
    fn insert_after(&mut self, d: Dart, x: Dart) {
        let next = self.sigma[&d];
        self.sigma.insert(d, x);
        self.sigma.insert(x, next);
        self.sigma_inv.insert(next, x);
        self.sigma_inv.insert(x, d);
        self.vertex_of.insert(x, self.vertex_of[&d]);
    }

    fn relabel_face(&mut self, from: FaceId, to: FaceId) {
        if from == to {
            return;
        }
        let darts: Vec<Dart> = self.face_darts(from);
        for d in darts {
            self.face_of.insert(d, to);
        }
        if let Some(mut list) = self.annotations.remove(&from) {
            self.annotations.entry(to).or_default().append(&mut list);
        }
        if let Some(h) = self.hole_faces.remove(&from) {
            self.hole_faces.insert(to, h);
        }
        let floats: Vec<VertexId> = self
            .floating
            .iter()
            .filter(|(_, &ff)| ff == from)
            .map(|(&v, _)| v)
            .collect();
        for v in floats {
            self.floating.insert(v, to);
        }
    }

    /// Delete an edge. If its two sides are different faces they merge
    /// (keeping the smaller id); a bridge deletion leaves the face region
    /// intact with the walk split in two.
    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), PlaneError> {
        let info = self.edges.remove(&e).expect("edge exists");
        let (d, t) = info.darts;
        let f1 = self.face_of[&d];
        let f2 = self.face_of[&t];
        let keep = if f1 != f2 {
            if self.is_hole_face(f1) || self.is_hole_face(f2) {
                return Err(PlaneError::FaceIsHole(if self.is_hole_face(f1) {
                    f1
                } else {
                    f2
                }));
            }
            let keep = f1.min(f2);
            let drop = f1.max(f2);
            self.relabel_face(drop, keep);
            keep
        } else {
            f1
        };
        self.unlink_from_rotation(d, keep);
        self.unlink_from_rotation(t, keep);
        self.drop_dart_records(d);
        self.drop_dart_records(t);
        Ok(())
    }

    /// Remove a whole component; every face region it borders merges into
    /// one surviving face id, which is returned (annotations follow).
    pub fn delete_component(&mut self, seed: Dart) -> FaceId {
        let mut comp: BTreeSet<Dart> = BTreeSet::new();
        let mut stack = vec![seed];
        while let Some(x) = stack.pop() {
            if !comp.insert(x) {
                continue;
            }
            stack.push(self.sigma[&x]);
            stack.push(self.theta[&x]);
        }
        let touched: BTreeSet<FaceId> = comp.iter().map(|d| self.face_of[&d]).collect();
        for &d in &comp {
            let v = self.vertex_of[&d];
            let e = self.edge_of[&d];
            self.edges.remove(&e);
            self.vertex_dart.remove(&v);
            self.vertex_tags.remove(&v);
            self.sigma.remove(&d);
            self.sigma_inv.remove(&d);
            self.drop_dart_records(d);
        }
        // Survivor: minimal touched id that still has darts, else a fresh id.
        let survivor = touched
            .iter()
            .copied()
            .find(|f| self.face_of.values().any(|ff| ff == f));
        let target = survivor.unwrap_or_else(|| self.alloc_face());
        for f in touched {
            if f != target {
                let mut list = self.annotations.remove(&f).unwrap_or_default();
                self.annotations
                    .entry(target)
                    .or_default()
                    .append(&mut list);
                self.hole_faces.remove(&f);
                self.relabel_face(f, target);
            }
        }
        target
    }

    /// Remove a degree-2 vertex, merging its two edges. The surviving edge
    /// keeps the id and tag of the first edge counterclockwise.
    pub fn smooth_vertex(&mut self, v: VertexId) -> Result<EdgeId, PlaneError> {
        let rot = self.rotation(v);
        if rot.len() != 2 {
            return Err(PlaneError::NotSmoothable(v));
        }
        let (a, b) = (rot[0], rot[1]);
        let ea = self.edge_of[&a];
        let eb = self.edge_of[&b];
        if ea == eb {
            return Err(PlaneError::NotSmoothable(v));
        }
        let ta = self.theta[&a];
        let tb = self.theta[&b];
        self.theta.insert(ta, tb);
        self.theta.insert(tb, ta);
        self.sigma.remove(&a);
        self.sigma.remove(&b);
        self.sigma_inv.remove(&a);
        self.sigma_inv.remove(&b);
        self.vertex_dart.remove(&v);
        self.vertex_tags.remove(&v);
        self.drop_dart_records(a);
        self.drop_dart_records(b);
        self.edges.remove(&eb);
        self.edges.get_mut(&ea).unwrap().darts = (ta, tb);
        self.edge_of.insert(ta, ea);
        self.edge_of.insert(tb, ea);
        Ok(ea)
    }

    /// Split an edge with a new degree-2 vertex. The tail half keeps the
    /// edge id; the head half gets a fresh id with the same tag.
    pub fn subdivide_edge(&mut self, e: EdgeId, vtag: VertexTag) -> (VertexId, EdgeId) {
        let info = self.edges[&e].clone();
        let (d, t) = info.darts;
        let w = self.alloc_vertex(vtag);
        let x = self.alloc_dart(); // at w, paired with d
        let y = self.alloc_dart(); // at w, paired with t
        self.sigma.insert(x, y);
        self.sigma.insert(y, x);
        self.sigma_inv.insert(x, y);
        self.sigma_inv.insert(y, x);
        self.vertex_of.insert(x, w);
        self.vertex_of.insert(y, w);
        self.vertex_dart.insert(w, x);
        self.theta.insert(d, x);
        self.theta.insert(x, d);
        self.theta.insert(t, y);
        self.theta.insert(y, t);
        // Face membership: y continues d's left face, x continues t's.
        self.face_of.insert(y, self.face_of[&d]);
        self.face_of.insert(x, self.face_of[&t]);
        let e2 = self.alloc_edge((y, t), info.tag.clone());
        self.edges.get_mut(&e).unwrap().darts = (d, x);
        self.edge_of.insert(x, e);
        self.edge_of.insert(y, e2);
        self.edge_of.insert(t, e2);
        (w, e2)
    }

    /// Hang a new vertex inside the face left of `corner`, joined by one
    /// edge attached in the sector just counterclockwise of `corner`.
    pub fn add_spoke(
        &mut self,
        corner: Dart,
        vtag: VertexTag,
        etag: EdgeTag,
    ) -> (VertexId, EdgeId) {
        let f = self.face_of[&corner];
        let w = self.alloc_vertex(vtag);
        let a = self.alloc_dart(); // at the corner vertex
        let b = self.alloc_dart(); // at w
        self.insert_after(corner, a);
        self.sigma.insert(b, b);
        self.sigma_inv.insert(b, b);
        self.vertex_of.insert(b, w);
        self.vertex_dart.insert(w, b);
        self.theta.insert(a, b);
        self.theta.insert(b, a);
        self.face_of.insert(a, f);
        self.face_of.insert(b, f);
        let e = self.alloc_edge((a, b), etag);
        self.edge_of.insert(a, e);
        self.edge_of.insert(b, e);
        (w, e)
    }

    /// Add an edge between the corners after `c1` and after `c2`, both of
    /// which must lie in the same face. If the face splits, the orbit on the
    /// side of the new dart at `c1` gets a fresh id, which is returned.
    pub fn add_edge(
        &mut self,
        c1: Dart,
        c2: Dart,
        etag: EdgeTag,
    ) -> Result<(EdgeId, Option<FaceId>), PlaneError> {
        let f = self.face_of[&c1];
        if self.face_of[&c2] != f {
            return Err(PlaneError::CornersInDifferentFaces(c1, c2));
        }
        let a = self.alloc_dart();
        let b = self.alloc_dart();
        self.insert_after(c1, a);
        self.insert_after(c2, b);
        self.theta.insert(a, b);
        self.theta.insert(b, a);
        self.face_of.insert(a, f);
        self.face_of.insert(b, f);
        let e = self.alloc_edge((a, b), etag);
        self.edge_of.insert(a, e);
        self.edge_of.insert(b, e);
        // Did the face split? Trace the walk containing a.
        let wa = self.walk_from(a);
        if wa.contains(&b) {
            return Ok((e, None));
        }
        let nf = self.alloc_face();
        for &d in &wa {
            self.face_of.insert(d, nf);
        }
        Ok((e, Some(nf)))
    }

    /// Bridge the member walks of face `f` with degree-2 filler vertices so
    /// the face boundary becomes a single walk.
    pub fn connect_members(&mut self, f: FaceId, etag: EdgeTag) -> Result<(), PlaneError> {
        loop {
            let walks = self.face_walks(f);
            if walks.len() <= 1 {
                return Ok(());
            }
            let c1 = *walks[0].iter().min().unwrap();
            let c2 = *walks[1].iter().min().unwrap();
            let (_, spoke_edge) = self.add_spoke(c1, VertexTag::Filler, etag.clone());
            let (_, b) = self.edges[&spoke_edge].darts;
            // Second edge from the new vertex to the other walk.
            let (e2, split) = self.add_edge(b, c2, etag.clone())?;
            debug_assert!(split.is_none(), "bridging distinct walks cannot split");
            let _ = e2;
        }
    }

    /// Fan a new center vertex into a face whose boundary is a single simple
    /// cycle, fully triangulating it. Returns the center and the sector faces.
    pub fn fan_face(
        &mut self,
        f: FaceId,
        vtag: VertexTag,
        etag: EdgeTag,
    ) -> Result<(VertexId, Vec<FaceId>), PlaneError> {
        self.fan_face_with(f, None, vtag, etag)
    }

    /// Like `fan_face` but the center may carry a caller-chosen fresh id.
    pub fn fan_face_with(
        &mut self,
        f: FaceId,
        center_id: Option<VertexId>,
        vtag: VertexTag,
        etag: EdgeTag,
    ) -> Result<(VertexId, Vec<FaceId>), PlaneError> {
        let walks = self.face_walks(f);
        if walks.len() != 1 || walks[0].len() < 3 {
            return Err(PlaneError::DegenerateFace(f));
        }
        let walk = walks[0].clone();
        let vs: BTreeSet<VertexId> = walk.iter().map(|&d| self.vertex_of[&d]).collect();
        if vs.len() != walk.len() {
            return Err(PlaneError::FanNeedsSimpleWalk(f));
        }
        let (w, first_spoke) = self.add_spoke(walk[0], vtag, etag.clone());
        if let Some(id) = center_id {
            self.rename_vertex(w, id);
        }
        let w = center_id.unwrap_or(w);
        let s0 = self.edges[&first_spoke].darts.1; // dart at w
        for &d in walk.iter().skip(1) {
            // New w-dart goes between the previous spoke and s0.
            let at_w = self.sigma_inv[&s0];
            let (_, _split) = self.add_edge(d, at_w, etag.clone())?;
        }
        // Retrace and relabel all sectors.
        let mut involved: BTreeSet<Dart> = walk.iter().copied().collect();
        for x in self.rotation(w) {
            involved.insert(x);
            involved.insert(self.theta[&x]);
        }
        let sectors = self.relabel_region(&involved);
        Ok((w, sectors))
    }

    /// Reassign fresh face ids to every orbit among `involved` darts.
    /// Returns the new ids in deterministic order.
    fn relabel_region(&mut self, involved: &BTreeSet<Dart>) -> Vec<FaceId> {
        let mut seen: BTreeSet<Dart> = BTreeSet::new();
        let mut out = Vec::new();
        for &d in involved {
            if seen.contains(&d) {
                continue;
            }
            let walk = self.walk_from(d);
            seen.extend(walk.iter().copied());
            let nf = self.alloc_face();
            for &x in &walk {
                self.face_of.insert(x, nf);
            }
            out.push(nf);
        }
        out
    }

    /// Triangulate a face whose boundary may have several members, repeated
    /// vertices or repeated edges: bridge the members, then build a guard
    /// ring (one guard per walk step) around a center. No new vertex becomes
    /// adjacent to more than two boundary vertices, and those two are
    /// consecutive on the walk. Returns (center, guards, sector faces).
    pub fn wheel_face(
        &mut self,
        f: FaceId,
        vtag: VertexTag,
        etag: EdgeTag,
    ) -> Result<(VertexId, Vec<VertexId>, Vec<FaceId>), PlaneError> {
        self.connect_members(f, etag.clone())?;
        let walks = self.face_walks(f);
        debug_assert_eq!(walks.len(), 1);
        let walk = walks[0].clone();
        let len = walk.len();
        if len < 3 {
            return Err(PlaneError::DegenerateFace(f));
        }

        // Guards: g_i sits above walk edge walk[i]. First guard edge hangs
        // from the corner after walk[i] at its tail vertex.
        let mut guards = Vec::with_capacity(len);
        let mut g_dart: Vec<Dart> = Vec::with_capacity(len); // to-tail dart at each guard
        for &d in &walk {
            let (g, e) = self.add_spoke(d, VertexTag::Filler, etag.clone());
            guards.push(g);
            g_dart.push(self.edges[&e].darts.1);
        }
        // Second guard edge: g_i to the head of walk[i]. The boundary corner
        // is after sigma(walk[i+1]) (the spoke to g_{i+1} already sits just
        // counterclockwise of the departing walk dart); the guard corner is
        // after its to-tail dart.
        for i in 0..len {
            let d_next = walk[(i + 1) % len];
            let corner_boundary = self.sigma[&d_next];
            let corner_guard = g_dart[i];
            let (_, _split) = self.add_edge(corner_boundary, corner_guard, etag.clone())?;
        }
        // Ring edges g_i - g_{i+1}: at g_i after its to-head dart; at
        // g_{i+1} before its to-tail dart.
        for i in 0..len {
            let gi_to_head = self.sigma[&g_dart[i]];
            let gnext_dart = g_dart[(i + 1) % len];
            let corner_next = self.sigma_inv[&gnext_dart];
            let (_, _split) = self.add_edge(gi_to_head, corner_next, etag.clone())?;
        }
        // Center: spoke from g_0, then edges to every other guard, keeping
        // the center rotation in walk order. At each guard the center edge
        // sits between ring-next and ring-prev, i.e. right after ring-next,
        // which is the second dart counterclockwise of its to-tail dart.
        let g0_ring_next = self.sigma[&self.sigma[&g_dart[0]]];
        let (center, ce) = self.add_spoke(g0_ring_next, vtag, etag.clone());
        let c0 = self.edges[&ce].darts.1;
        for g in g_dart.iter().skip(1) {
            let corner_guard = self.sigma[&self.sigma[g]];
            let at_center = self.sigma_inv[&c0];
            let (_, _split) = self.add_edge(corner_guard, at_center, etag.clone())?;
        }
        // Relabel all affected orbits.
        let mut involved: BTreeSet<Dart> = walk.iter().copied().collect();
        for &g in &guards {
            for x in self.rotation(g) {
                involved.insert(x);
                involved.insert(self.theta[&x]);
            }
        }
        for x in self.rotation(center) {
            involved.insert(x);
            involved.insert(self.theta[&x]);
        }
        let sectors = self.relabel_region(&involved);
        Ok((center, guards, sectors))
    }

    /// Contract an edge, merging its head vertex into its tail vertex with
    /// the interleaved rotation. Loops or parallel edges this creates are
    /// left in place for the caller to audit.
    pub fn contract_edge(&mut self, e: EdgeId) -> Result<VertexId, PlaneError> {
        let info = self.edges[&e].clone();
        let (d, t) = info.darts;
        let u = self.vertex_of[&d];
        let w = self.vertex_of[&t];
        if u == w {
            return Err(PlaneError::LoopEdge(e));
        }
        let urot = self.rotation_from(d);
        let wrot = self.rotation_from(t);
        let mut merged: Vec<Dart> = Vec::new();
        merged.extend(urot.iter().skip(1));
        merged.extend(wrot.iter().skip(1));
        for &x in urot.iter().chain(wrot.iter()) {
            self.sigma.remove(&x);
            self.sigma_inv.remove(&x);
        }
        for i in 0..merged.len() {
            let nxt = merged[(i + 1) % merged.len()];
            self.sigma.insert(merged[i], nxt);
            self.sigma_inv.insert(nxt, merged[i]);
        }
        for &x in &merged {
            self.vertex_of.insert(x, u);
        }
        self.vertex_dart.insert(u, merged[0]);
        self.vertex_dart.remove(&w);
        self.vertex_tags.remove(&w);
        self.edges.remove(&e);
        self.drop_dart_records(d);
        self.drop_dart_records(t);
        Ok(u)
    }

    // -- validation and export -------------------------------------------------

    /// Check the permutation structure is coherent.
    pub fn validate(&self) -> Result<(), PlaneError> {
        let m = self.to_map()?;
        for d in self.darts() {
            let w = self.walk_from(d);
            let f = self.face_of[&d];
            for x in w {
                if self.face_of[&x] != f {
                    return Err(PlaneError::NotTriangulation(format!(
                        "face id not constant along walk at dart {x}"
                    )));
                }
            }
        }
        let _ = m;
        Ok(())
    }

    /// Check that the complex is a simple maximal triangulation.
    pub fn check_maximal_simple(&self) -> Result<(), PlaneError> {
        let v = self.nvertices();
        let e = self.nedges();
        if v < 3 {
            return Err(PlaneError::NotTriangulation(format!("only {v} vertices")));
        }
        let mut pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for info in self.edges.values() {
            let a = self.vertex_of[&info.darts.0];
            let b = self.vertex_of[&info.darts.1];
            if a == b {
                return Err(PlaneError::NotTriangulation(format!("loop at {a}")));
            }
            if !pairs.insert((a.min(b), a.max(b))) {
                return Err(PlaneError::NotTriangulation(format!(
                    "parallel edges between {a} and {b}"
                )));
            }
        }
        if e != 3 * v - 6 {
            return Err(PlaneError::NotTriangulation(format!(
                "E = {e} but 3V-6 = {}",
                3 * v - 6
            )));
        }
        for f in self.face_ids() {
            if !self.is_triangle(f) {
                return Err(PlaneError::NotTriangulation(format!(
                    "face {f} not a triangle"
                )));
            }
        }
        Ok(())
    }

    /// Export the permutation structure as an immutable map; hole faces
    /// become boundary marks and edge tags become labels.
    pub fn to_map(&self) -> Result<CombinatorialMap, PlaneError> {
        let mut boundary = BTreeSet::new();
        for (&f, _) in &self.hole_faces {
            if let Some(d) = self.face_darts(f).first() {
                boundary.insert(*d);
            }
        }
        let mut labels = BTreeMap::new();
        for (&d, &e) in &self.edge_of {
            let tag = &self.edges[&e].tag;
            let label = match tag {
                EdgeTag::Fragment { curve, index } => format!("frag:{curve}:{index}"),
                EdgeTag::Hole { hole } => format!("hole:{hole}"),
                EdgeTag::Filler => String::new(),
            };
            if !label.is_empty() {
                labels.insert(d, label);
            }
        }
        Ok(CombinatorialMap::new(
            self.sigma.clone(),
            self.theta.clone(),
            labels,
            boundary,
        )?)
    }

    /// Abstract labeled rotation system: vertex -> counterclockwise list of
    /// neighbor vertex ids. Only meaningful for simple graphs.
    pub fn rotation_system(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut out = BTreeMap::new();
        for v in self.vertex_ids().collect::<Vec<_>>() {
            let neigh: Vec<VertexId> = self
                .rotation(v)
                .iter()
                .map(|&d| self.vertex_of[&self.theta[&d]])
                .collect();
            out.insert(v, neigh);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add_triangle(c: &mut PlaneComplex, outer: Option<FaceId>) -> (Vec<VertexId>, FaceId, FaceId) {
        let vs: Vec<VertexId> = (0..3).map(|_| c.alloc_vertex(VertexTag::Filler)).collect();
        let inner = c.alloc_face();
        let outer = outer.unwrap_or_else(|| c.alloc_face());
        let ds: Vec<Dart> = (0..6).map(|_| c.alloc_dart()).collect();
        let es = [
            c.alloc_edge((ds[0], ds[1]), EdgeTag::Filler),
            c.alloc_edge((ds[2], ds[3]), EdgeTag::Filler),
            c.alloc_edge((ds[4], ds[5]), EdgeTag::Filler),
        ];
        // rotations (ccw): v0: (d0 to v1, d5 to v2); v1: (d2 to v2, d1 to v0);
        // v2: (d4 to v0, d3 to v1).
        let rot = [
            (ds[0], ds[5], vs[0]),
            (ds[5], ds[0], vs[0]),
            (ds[2], ds[1], vs[1]),
            (ds[1], ds[2], vs[1]),
            (ds[4], ds[3], vs[2]),
            (ds[3], ds[4], vs[2]),
        ];
        for &(d, s, v) in &rot {
            c.sigma.insert(d, s);
            c.sigma_inv.insert(s, d);
            c.vertex_of.insert(d, v);
            c.vertex_dart.insert(v, d);
        }
        for (a, b) in [(ds[0], ds[1]), (ds[2], ds[3]), (ds[4], ds[5])] {
            c.theta.insert(a, b);
            c.theta.insert(b, a);
        }
        for (i, &e) in es.iter().enumerate() {
            c.edge_of.insert(ds[2 * i], e);
            c.edge_of.insert(ds[2 * i + 1], e);
        }
        // interior-left walk: d0 (v0->v1), d2 (v1->v2), d4 (v2->v0).
        for d in [ds[0], ds[2], ds[4]] {
            c.face_of.insert(d, inner);
        }
        for d in [ds[1], ds[3], ds[5]] {
            c.face_of.insert(d, outer);
        }
        (vs, inner, outer)
    }

    fn triangle() -> (PlaneComplex, FaceId, FaceId) {
        let mut c = PlaneComplex::new();
        let (_, inner, outer) = add_triangle(&mut c, None);
        c.validate().unwrap();
        (c, inner, outer)
    }

    #[test]
    fn triangle_walks() {
        let (c, inner, _) = triangle();
        let walks = c.face_walks(inner);
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].len(), 3);
        assert!(c.is_triangle(inner));
    }

    #[test]
    fn fan_square_face() {
        let (mut c, inner, outer) = triangle();
        let (w, _e2) = c.subdivide_edge(EdgeId(0), VertexTag::Filler);
        assert_eq!(c.degree(w), 2);
        let walks = c.face_walks(inner);
        assert_eq!(walks[0].len(), 4);
        let (center, sectors) = c.fan_face(inner, VertexTag::Filler, EdgeTag::Filler).unwrap();
        assert_eq!(sectors.len(), 4);
        assert_eq!(c.degree(center), 4);
        for f in sectors {
            assert!(c.is_triangle(f));
        }
        assert_eq!(c.face_walks(outer).len(), 1);
        c.validate().unwrap();
    }

    #[test]
    fn double_fan_is_maximal() {
        let (mut c, inner, outer) = triangle();
        c.fan_face(inner, VertexTag::Filler, EdgeTag::Filler).unwrap();
        c.fan_face(outer, VertexTag::Filler, EdgeTag::Filler).unwrap();
        c.check_maximal_simple().unwrap();
        c.validate().unwrap();
    }

    #[test]
    fn wheel_two_member_face() {
        let mut c = PlaneComplex::new();
        let (_, in1, outer) = add_triangle(&mut c, None);
        let (_, in2, _) = add_triangle(&mut c, Some(outer));
        c.validate().unwrap();
        assert_eq!(c.face_walks(outer).len(), 2);
        let (_, _, sectors) = c
            .wheel_face(outer, VertexTag::Filler, EdgeTag::Filler)
            .unwrap();
        for f in &sectors {
            assert!(c.is_triangle(*f), "sector {f} is not a triangle");
        }
        assert!(c.is_triangle(in1));
        assert!(c.is_triangle(in2));
        c.check_maximal_simple().unwrap();
        c.validate().unwrap();
    }

    #[test]
    fn contract_then_cleanup_keeps_triangulation() {
        let (mut c, inner, outer) = triangle();
        let (fan1, _) = c.fan_face(inner, VertexTag::Filler, EdgeTag::Filler).unwrap();
        c.fan_face(outer, VertexTag::Filler, EdgeTag::Filler).unwrap();
        c.check_maximal_simple().unwrap();
        let v_before = c.nvertices();
        // A fan edge lies on no separating triangle, so contracting it and
        // dropping the two parallel pairs keeps a triangulation.
        let e = c.edges_between(fan1, VertexId(0))[0];
        let _u = c.contract_edge(e).unwrap();
        // Remove one edge of each parallel pair.
        let mut seen: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
        let mut to_delete = Vec::new();
        for eid in c.edge_ids().collect::<Vec<_>>() {
            let (a, b) = c.edge_endpoints(eid);
            let key = (a.min(b), a.max(b));
            if seen.contains_key(&key) {
                to_delete.push(eid);
            } else {
                seen.insert(key, eid);
            }
        }
        for eid in to_delete {
            c.delete_edge(eid).unwrap();
        }
        assert_eq!(c.nvertices(), v_before - 1);
        c.check_maximal_simple().unwrap();
        c.validate().unwrap();
    }

    #[test]
    fn delete_edge_merges_annotations() {
        let (mut c, _, outer) = triangle();
        c.annotate(outer, "h9".into());
        c.delete_edge(EdgeId(0)).unwrap();
        let f = c.face_of(Dart(2));
        assert_eq!(c.annotations()[&f], vec!["h9".to_string()]);
        c.validate().unwrap();
    }

    #[test]
    fn delete_component_rehosts_annotations() {
        let mut c = PlaneComplex::new();
        let (_, in1, outer) = add_triangle(&mut c, None);
        let (_, in2, _) = add_triangle(&mut c, Some(outer));
        c.annotate(in2, "hx".into());
        let target = c.delete_component(Dart(6));
        assert_eq!(c.annotations()[&target], vec!["hx".to_string()]);
        assert!(c.is_triangle(in1));
        c.validate().unwrap();
    }

    #[test]
    fn smooth_inverts_subdivide() {
        let (mut c, inner, _) = triangle();
        let before_edges = c.nedges();
        let (w, _) = c.subdivide_edge(EdgeId(1), VertexTag::InteriorSubdivision);
        assert_eq!(c.nedges(), before_edges + 1);
        c.smooth_vertex(w).unwrap();
        assert_eq!(c.nedges(), before_edges);
        assert!(c.is_triangle(inner));
        c.validate().unwrap();
    }
}
