//! The input model: two almost-disjoint curve systems on a sphere with
//! holes, encoded as one combinatorial arrangement map plus curve and hole
//! tables. Validation and combinatorial crossing counting live here.
//!
//! The map may be disconnected. `embed` records pin down the sphere
//! embedding: each record `(child, host)` says that the face of the child
//! component containing dart `child` opens toward the rest of the sphere,
//! inside the region named by dart `host` in another component. Merging the
//! two named faces across all records yields the faces of the union.

use crate::map::{CombinatorialMap, Dart, MapError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum System {
    A,
    B,
}

impl System {
    pub fn other(self) -> System {
        match self {
            System::A => System::B,
            System::B => System::A,
        }
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            System::A => write!(f, "A"),
            System::B => write!(f, "B"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Two distinct endpoints on hole boundaries.
    Arc,
    /// Simple closed curve avoiding all holes.
    Closed,
    /// Arc whose two endpoints coincide in a single boundary point.
    Loop,
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::Arc => write!(f, "arc"),
            CurveKind::Closed => write!(f, "closed"),
            CurveKind::Loop => write!(f, "loop"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub system: System,
    pub kind: CurveKind,
    pub walk: Vec<Dart>,
}

#[derive(Debug, Clone)]
pub struct ArrangementInstance {
    pub map: CombinatorialMap,
    /// (dart in the child's opening face, dart in the host face).
    pub embeddings: Vec<(Dart, Dart)>,
    pub curves: BTreeMap<String, Curve>,
    /// Hole id to a dart of its boundary face.
    pub holes: BTreeMap<String, Dart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CrossingReport {
    pub per_pair: BTreeMap<(String, String), usize>,
    pub total: usize,
}

#[derive(Debug, Error)]
pub enum ArrangementError {
    #[error("instance is invalid: {0}")]
    Invalid(String),
    #[error("map error: {0}")]
    Map(#[from] MapError),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("generator parameters infeasible: {0}")]
    Infeasible(String),
}

/// What a vertex of a valid arrangement turned out to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexClass {
    /// On a hole rim; lists ids of curves ending here.
    RimPoint { hole: String, endpoints: Vec<String> },
    /// Interior degree-2 point subdividing one curve.
    Subdivision { curve: String },
    /// Transversal crossing of one A-curve with one B-curve.
    Crossing { a: String, b: String },
}

impl ArrangementInstance {
    /// Which curve or hole rim owns each edge, by the minimum dart.
    pub fn edge_owners(&self) -> BTreeMap<Dart, String> {
        let mut owners: BTreeMap<Dart, String> = BTreeMap::new();
        for (id, curve) in &self.curves {
            for &d in &curve.walk {
                let e = d.min(self.map.theta(d));
                owners.insert(e, id.clone());
            }
        }
        for (id, &hd) in &self.holes {
            for d in self.map.face_orbit(hd) {
                let e = d.min(self.map.theta(d));
                owners.insert(e, format!("hole:{id}"));
            }
        }
        owners
    }

    /// Classify every vertex, or report what is wrong with it.
    pub fn classify_vertices(&self) -> (BTreeMap<Dart, VertexClass>, Vec<Violation>) {
        let mut out = BTreeMap::new();
        let mut violations = Vec::new();
        let mut walk_dart: BTreeMap<Dart, String> = BTreeMap::new();
        let mut end_darts: BTreeMap<Dart, String> = BTreeMap::new();
        for (id, curve) in &self.curves {
            for &d in &curve.walk {
                if !self.map.darts().any(|x| x == d) {
                    continue;
                }
                walk_dart.insert(d, id.clone());
                walk_dart.insert(self.map.theta(d), id.clone());
            }
            if curve.kind != CurveKind::Closed && !curve.walk.is_empty() {
                if self.map.darts().any(|x| x == curve.walk[0]) {
                    end_darts.insert(curve.walk[0], id.clone());
                    end_darts.insert(self.map.theta(*curve.walk.last().unwrap()), id.clone());
                }
            }
        }
        let mut rim_dart: BTreeMap<Dart, String> = BTreeMap::new();
        for (id, &hd) in &self.holes {
            if !self.map.darts().any(|x| x == hd) {
                continue;
            }
            for d in self.map.face_orbit(hd) {
                rim_dart.insert(d, id.clone());
                rim_dart.insert(self.map.theta(d), id.clone());
            }
        }

        for vrep in self.map.vertex_reps() {
            let rot = self.map.vertex_orbit(vrep);
            let rims: Vec<&String> = rot.iter().filter_map(|d| rim_dart.get(d)).collect();
            if !rims.is_empty() {
                let hole = rims[0].clone();
                if rims.len() != 2 || rims.iter().any(|h| **h != hole) {
                    violations.push(Violation {
                        code: "pinched-boundary",
                        detail: format!("vertex of dart {vrep} lies on {} rim darts", rims.len()),
                    });
                    continue;
                }
                let mut endpoints = Vec::new();
                for &d in &rot {
                    if rim_dart.contains_key(&d) {
                        continue;
                    }
                    match end_darts.get(&d) {
                        Some(c) => endpoints.push(c.clone()),
                        None => violations.push(Violation {
                            code: "curve-through-boundary",
                            detail: format!(
                                "dart {d} of curve {} passes through the rim of hole {hole}",
                                walk_dart.get(&d).cloned().unwrap_or_default()
                            ),
                        }),
                    }
                }
                out.insert(vrep, VertexClass::RimPoint { hole, endpoints });
                continue;
            }
            // Interior vertex.
            let mut curve_seq: Vec<(&String, System)> = Vec::new();
            let mut bad = false;
            for &d in &rot {
                match walk_dart.get(&d) {
                    Some(c) => curve_seq.push((c, self.curves[c].system)),
                    None => {
                        violations.push(Violation {
                            code: "unowned-dart",
                            detail: format!("dart {d} belongs to no curve or rim"),
                        });
                        bad = true;
                    }
                }
                if end_darts.contains_key(&d) {
                    violations.push(Violation {
                        code: "endpoint-off-boundary",
                        detail: format!(
                            "curve {} ends at interior dart {d}",
                            walk_dart.get(&d).cloned().unwrap_or_default()
                        ),
                    });
                    bad = true;
                }
            }
            if bad {
                continue;
            }
            let distinct: BTreeSet<&String> = curve_seq.iter().map(|(c, _)| *c).collect();
            if rot.len() == 2 && distinct.len() == 1 {
                out.insert(
                    vrep,
                    VertexClass::Subdivision {
                        curve: (*distinct.iter().next().unwrap()).clone(),
                    },
                );
            } else if rot.len() == 4
                && distinct.len() == 2
                && curve_seq[0].1 != curve_seq[1].1
                && curve_seq[0].1 == curve_seq[2].1
                && curve_seq[1].1 == curve_seq[3].1
                && curve_seq[0].0 == curve_seq[2].0
                && curve_seq[1].0 == curve_seq[3].0
            {
                let (a, b) = if curve_seq[0].1 == System::A {
                    (curve_seq[0].0.clone(), curve_seq[1].0.clone())
                } else {
                    (curve_seq[1].0.clone(), curve_seq[0].0.clone())
                };
                out.insert(vrep, VertexClass::Crossing { a, b });
            } else {
                let systems: BTreeSet<System> = curve_seq.iter().map(|(_, s)| *s).collect();
                let code = if systems.len() == 1 {
                    match systems.iter().next() {
                        Some(System::A) => "A-system not almost-disjoint",
                        _ => "B-system not almost-disjoint",
                    }
                } else {
                    "bad-crossing"
                };
                violations.push(Violation {
                    code,
                    detail: format!(
                        "interior vertex of dart {vrep} has degree {} with curves {:?}",
                        rot.len(),
                        distinct
                    ),
                });
            }
        }
        (out, violations)
    }

    /// Empty iff all instance invariants hold; each violation names the
    /// offending dart or curve.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();

        let sigs = match self.map.component_signatures() {
            Ok(s) => s,
            Err(e) => {
                return vec![Violation {
                    code: "bad-map",
                    detail: e.to_string(),
                }]
            }
        };
        for (i, sig) in sigs.iter().enumerate() {
            if sig.genus != 0 {
                violations.push(Violation {
                    code: "not-planar",
                    detail: format!("component {i} has genus {}", sig.genus),
                });
            }
        }
        if self.holes.is_empty() {
            violations.push(Violation {
                code: "no-holes",
                detail: "an instance needs at least one hole".into(),
            });
        }

        // Hole table vs boundary marks.
        let mut claimed: BTreeSet<Dart> = BTreeSet::new();
        for (id, &hd) in &self.holes {
            if !self.map.darts().any(|d| d == hd) {
                violations.push(Violation {
                    code: "bad-hole",
                    detail: format!("hole {id} names unknown dart {hd}"),
                });
                continue;
            }
            let rep = self.map.face_rep(hd);
            if !self.map.boundary_faces().contains(&rep) {
                violations.push(Violation {
                    code: "bad-hole",
                    detail: format!("hole {id} face (dart {hd}) is not marked boundary"),
                });
            }
            if !claimed.insert(rep) {
                violations.push(Violation {
                    code: "bad-hole",
                    detail: format!("hole {id} face claimed twice"),
                });
            }
        }
        for &b in self.map.boundary_faces() {
            if !claimed.contains(&b) {
                violations.push(Violation {
                    code: "bad-hole",
                    detail: format!("boundary face of dart {b} has no hole entry"),
                });
            }
        }

        // Embedding records: a tree over components.
        let comps = self.map.component_dart_sets();
        let comp_of = |d: Dart| comps.iter().position(|c| c.contains(&d));
        if self.embeddings.len() + 1 != comps.len() {
            violations.push(Violation {
                code: "bad-embedding",
                detail: format!(
                    "{} components need {} embed records, found {}",
                    comps.len(),
                    comps.len().saturating_sub(1),
                    self.embeddings.len()
                ),
            });
        }
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        for &(child, host) in &self.embeddings {
            match (comp_of(child), comp_of(host)) {
                (Some(c), Some(p)) if c != p => {
                    if parent.insert(c, p).is_some() {
                        violations.push(Violation {
                            code: "bad-embedding",
                            detail: format!("component of dart {child} embedded twice"),
                        });
                    }
                    if self.map.is_boundary_face(child) || self.map.is_boundary_face(host) {
                        violations.push(Violation {
                            code: "bad-embedding",
                            detail: format!("embed record ({child}, {host}) names a hole face"),
                        });
                    }
                }
                _ => violations.push(Violation {
                    code: "bad-embedding",
                    detail: format!(
                        "embed record ({child}, {host}) is not between two components"
                    ),
                }),
            }
        }
        for (&start, _) in &parent {
            let mut seen = BTreeSet::new();
            let mut cur = start;
            while let Some(&p) = parent.get(&cur) {
                if !seen.insert(cur) {
                    violations.push(Violation {
                        code: "bad-embedding",
                        detail: "embedding records form a cycle".into(),
                    });
                    break;
                }
                cur = p;
            }
        }

        // Curve walks.
        let owners = self.edge_owners();
        let mut used: BTreeMap<Dart, String> = BTreeMap::new();
        for (id, curve) in &self.curves {
            if curve.walk.is_empty() {
                violations.push(Violation {
                    code: "bad-walk",
                    detail: format!("curve {id} has an empty walk"),
                });
                continue;
            }
            let mut ok = true;
            for &d in &curve.walk {
                if !self.map.darts().any(|x| x == d) {
                    violations.push(Violation {
                        code: "bad-walk",
                        detail: format!("curve {id} uses unknown dart {d}"),
                    });
                    ok = false;
                    break;
                }
                let e = d.min(self.map.theta(d));
                if let Some(prev) = used.insert(e, id.clone()) {
                    violations.push(Violation {
                        code: "bad-walk",
                        detail: format!("edge of dart {e} used by both {prev} and {id}"),
                    });
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            for w in curve.walk.windows(2) {
                if self.map.vertex_rep(self.map.theta(w[0])) != self.map.vertex_rep(w[1]) {
                    violations.push(Violation {
                        code: "bad-walk",
                        detail: format!("curve {id} breaks after dart {}", w[0]),
                    });
                }
            }
            let start = self.map.vertex_rep(curve.walk[0]);
            let end = self
                .map
                .vertex_rep(self.map.theta(*curve.walk.last().unwrap()));
            match curve.kind {
                CurveKind::Closed => {
                    if start != end {
                        violations.push(Violation {
                            code: "bad-walk",
                            detail: format!("closed curve {id} does not close up"),
                        });
                    }
                    if curve.walk.iter().any(|&d| self.map.vertex_on_boundary(d)) {
                        violations.push(Violation {
                            code: "closed-touches-boundary",
                            detail: format!("closed curve {id} touches a hole boundary"),
                        });
                    }
                }
                CurveKind::Arc => {
                    if start == end {
                        violations.push(Violation {
                            code: "bad-walk",
                            detail: format!("arc {id} has coinciding endpoints; use kind=loop"),
                        });
                    }
                }
                CurveKind::Loop => {
                    if start != end {
                        violations.push(Violation {
                            code: "bad-walk",
                            detail: format!("loop {id} endpoints differ; use kind=arc"),
                        });
                    }
                }
            }
            if curve.kind != CurveKind::Closed {
                for (which, d) in [
                    ("start", curve.walk[0]),
                    ("end", self.map.theta(*curve.walk.last().unwrap())),
                ] {
                    if !self.map.vertex_on_boundary(d) {
                        violations.push(Violation {
                            code: "endpoint-off-boundary",
                            detail: format!("{which} of {id} (dart {d}) not on a hole"),
                        });
                    }
                }
            }
        }

        // Every edge owned exactly once.
        for d in self.map.darts() {
            let e = d.min(self.map.theta(d));
            if e == d && !owners.contains_key(&e) {
                violations.push(Violation {
                    code: "unowned-edge",
                    detail: format!("edge of dart {e} belongs to no curve or rim"),
                });
            }
        }

        // Label consistency with ownership.
        for d in self.map.darts() {
            let e = d.min(self.map.theta(d));
            if let Some(owner) = owners.get(&e) {
                let label = self.map.label(d);
                if !label.is_empty() && label != owner {
                    violations.push(Violation {
                        code: "bad-label",
                        detail: format!("dart {d} labeled `{label}` but owned by `{owner}`"),
                    });
                }
            }
        }

        let (_, mut vertex_violations) = self.classify_vertices();
        violations.append(&mut vertex_violations);
        violations
    }

    /// Count transversal crossings per curve pair. Refuses invalid instances.
    pub fn count_crossings(&self) -> Result<CrossingReport, ArrangementError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(ArrangementError::Invalid(violations[0].to_string()));
        }
        let (classes, _) = self.classify_vertices();
        let mut per_pair: BTreeMap<(String, String), usize> = BTreeMap::new();
        for (id_a, c) in &self.curves {
            if c.system == System::A {
                for (id_b, cb) in &self.curves {
                    if cb.system == System::B {
                        per_pair.insert((id_a.clone(), id_b.clone()), 0);
                    }
                }
            }
        }
        let mut total = 0;
        for class in classes.values() {
            if let VertexClass::Crossing { a, b } = class {
                *per_pair.get_mut(&(a.clone(), b.clone())).unwrap() += 1;
                total += 1;
            }
        }
        Ok(CrossingReport { per_pair, total })
    }

    /// Faces of the union across components: face representatives grouped by
    /// the embed records. Returns rep -> class index plus the classes.
    pub fn union_face_classes(&self) -> (BTreeMap<Dart, usize>, Vec<Vec<Dart>>) {
        let reps = self.map.face_reps();
        let mut idx: BTreeMap<Dart, usize> = BTreeMap::new();
        let mut parent: Vec<usize> = (0..reps.len()).collect();
        for (i, &r) in reps.iter().enumerate() {
            idx.insert(r, i);
        }
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
                r
            } else {
                x
            }
        }
        for &(child, host) in &self.embeddings {
            let a = idx[&self.map.face_rep(child)];
            let b = idx[&self.map.face_rep(host)];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
        let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<Dart>> = Vec::new();
        let mut rep_class: BTreeMap<Dart, usize> = BTreeMap::new();
        for (i, &r) in reps.iter().enumerate() {
            let root = find(&mut parent, i);
            let c = *class_of.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(r);
            rep_class.insert(r, c);
        }
        (rep_class, classes)
    }

    // -- text format ---------------------------------------------------------

    /// Serialize with ownership labels in canonical order.
    pub fn to_text(&self) -> String {
        let owners = self.edge_owners();
        let mut sigma = BTreeMap::new();
        let mut theta = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for d in self.map.darts() {
            sigma.insert(d, self.map.sigma(d));
            theta.insert(d, self.map.theta(d));
            let e = d.min(self.map.theta(d));
            if let Some(o) = owners.get(&e) {
                labels.insert(d, o.clone());
            }
        }
        let labeled =
            CombinatorialMap::new(sigma, theta, labels, self.map.boundary_faces().clone())
                .expect("relabeling keeps the map valid");
        let mut out = labeled.to_text();
        for (id, curve) in &self.curves {
            let walk: Vec<String> = curve.walk.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(
                out,
                "curve {id} system={} kind={} walk={}",
                curve.system,
                curve.kind,
                walk.join(",")
            );
        }
        for (id, &hd) in &self.holes {
            let _ = writeln!(out, "hole {id} face={hd}");
        }
        for &(child, host) in &self.embeddings {
            let _ = writeln!(out, "embed {child} into {host}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<ArrangementInstance, ArrangementError> {
        let (map, rest) = CombinatorialMap::parse_lines(text).map_err(|e| match e {
            MapError::Parse { line, msg } => ArrangementError::Parse { line, msg },
            other => ArrangementError::Map(other),
        })?;
        let mut curves = BTreeMap::new();
        let mut holes = BTreeMap::new();
        let mut embeddings = Vec::new();
        let parse_dart = |tok: &str, line: usize| -> Result<Dart, ArrangementError> {
            tok.parse::<u32>()
                .map(Dart)
                .map_err(|_| ArrangementError::Parse {
                    line,
                    msg: format!("bad dart id `{tok}`"),
                })
        };
        for (line, text) in rest {
            let mut it = text.split_whitespace();
            match it.next().unwrap() {
                "curve" => {
                    let id = it
                        .next()
                        .ok_or(ArrangementError::Parse {
                            line,
                            msg: "curve line needs an id".into(),
                        })?
                        .to_string();
                    let mut system = None;
                    let mut kind = None;
                    let mut walk = None;
                    for field in it {
                        if let Some(v) = field.strip_prefix("system=") {
                            system = Some(match v {
                                "A" => System::A,
                                "B" => System::B,
                                _ => {
                                    return Err(ArrangementError::Parse {
                                        line,
                                        msg: format!("bad system `{v}`"),
                                    })
                                }
                            });
                        } else if let Some(v) = field.strip_prefix("kind=") {
                            kind = Some(match v {
                                "arc" => CurveKind::Arc,
                                "closed" => CurveKind::Closed,
                                "loop" => CurveKind::Loop,
                                _ => {
                                    return Err(ArrangementError::Parse {
                                        line,
                                        msg: format!("bad kind `{v}`"),
                                    })
                                }
                            });
                        } else if let Some(v) = field.strip_prefix("walk=") {
                            let mut darts = Vec::new();
                            for tok in v.split(',') {
                                darts.push(parse_dart(tok, line)?);
                            }
                            walk = Some(darts);
                        } else {
                            return Err(ArrangementError::Parse {
                                line,
                                msg: format!("unknown curve field `{field}`"),
                            });
                        }
                    }
                    let (system, kind, walk) = match (system, kind, walk) {
                        (Some(s), Some(k), Some(w)) => (s, k, w),
                        _ => {
                            return Err(ArrangementError::Parse {
                                line,
                                msg: format!("curve {id} missing system/kind/walk"),
                            })
                        }
                    };
                    curves.insert(id, Curve { system, kind, walk });
                }
                "hole" => {
                    let id = it
                        .next()
                        .ok_or(ArrangementError::Parse {
                            line,
                            msg: "hole line needs an id".into(),
                        })?
                        .to_string();
                    let face = it
                        .next()
                        .and_then(|f| f.strip_prefix("face="))
                        .ok_or(ArrangementError::Parse {
                            line,
                            msg: format!("hole {id} missing face="),
                        })?;
                    holes.insert(id, parse_dart(face, line)?);
                }
                "embed" => {
                    let child = parse_dart(
                        it.next().ok_or(ArrangementError::Parse {
                            line,
                            msg: "embed line needs a child dart".into(),
                        })?,
                        line,
                    )?;
                    match it.next() {
                        Some("into") => {}
                        _ => {
                            return Err(ArrangementError::Parse {
                                line,
                                msg: "embed line needs `into`".into(),
                            })
                        }
                    }
                    let host = parse_dart(
                        it.next().ok_or(ArrangementError::Parse {
                            line,
                            msg: "embed line needs a host dart".into(),
                        })?,
                        line,
                    )?;
                    embeddings.push((child, host));
                }
                other => {
                    return Err(ArrangementError::Parse {
                        line,
                        msg: format!("unknown line `{other}`"),
                    })
                }
            }
        }
        Ok(ArrangementInstance {
            map,
            embeddings,
            curves,
            holes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch;

    #[test]
    fn lower_bound_counts_exactly_2mn() {
        for (m, n) in [(1, 1), (2, 3), (3, 4)] {
            let inst = sketch::lower_bound_instance(m, n).unwrap();
            assert!(
                inst.validate().is_empty(),
                "L({m},{n}): {:?}",
                inst.validate()
            );
            let report = inst.count_crossings().unwrap();
            assert_eq!(report.total, 2 * m * n, "L({m},{n})");
            for (_, &c) in &report.per_pair {
                assert_eq!(c, 2);
            }
        }
    }

    #[test]
    fn lower_bound_rejects_zero() {
        assert!(sketch::lower_bound_instance(1, 0).is_err());
        assert!(sketch::lower_bound_instance(0, 1).is_err());
    }

    #[test]
    fn lower_bound_exhaustive_small() {
        for m in 1..=10 {
            for n in 1..=10 {
                let inst = sketch::lower_bound_instance(m, n).unwrap();
                let report = inst.count_crossings().unwrap();
                assert_eq!(report.total, 2 * m * n);
            }
        }
    }

    #[test]
    fn roundtrip_is_stable() {
        let inst = sketch::lower_bound_instance(2, 2).unwrap();
        let text = inst.to_text();
        let back = ArrangementInstance::from_text(&text).unwrap();
        assert!(back.validate().is_empty());
        assert_eq!(back.to_text(), text);
        assert_eq!(
            back.count_crossings().unwrap().total,
            inst.count_crossings().unwrap().total
        );
    }

    #[test]
    fn fig1_fixture_has_seven_crossings() {
        let inst = sketch::fig1_instance().unwrap();
        assert!(inst.validate().is_empty(), "{:?}", inst.validate());
        let report = inst.count_crossings().unwrap();
        assert_eq!(report.total, 7);
        assert_eq!(report.per_pair[&("a2".into(), "b2".into())], 4);
        assert_eq!(report.per_pair[&("a3".into(), "b3".into())], 2);
        assert_eq!(report.per_pair[&("a2".into(), "b1".into())], 1);
    }

    #[test]
    fn same_system_crossing_is_flagged() {
        // Relabel the B ring of L(1,1) as system A: its crossings with the
        // A hairpin become A-A meetings.
        let inst = sketch::lower_bound_instance(1, 1).unwrap();
        let text = inst.to_text().replace("system=B", "system=A");
        let bad = ArrangementInstance::from_text(&text).unwrap();
        let violations = bad.validate();
        assert!(
            violations
                .iter()
                .any(|v| v.code == "A-system not almost-disjoint"),
            "{violations:?}"
        );
        assert!(bad.count_crossings().is_err());
    }

    #[test]
    fn random_generator_is_deterministic_and_valid() {
        let a = sketch::random_instance(1, 2, 2, 2, 50).unwrap();
        let b = sketch::random_instance(1, 2, 2, 2, 50).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.validate().is_empty(), "{:?}", a.validate());
        let t = a.count_crossings().unwrap().total;
        assert!((25..=100).contains(&t), "got {t} crossings");
    }

    #[test]
    fn random_generator_empty_a() {
        let a = sketch::random_instance(3, 0, 2, 1, 40).unwrap();
        assert!(a.validate().is_empty(), "{:?}", a.validate());
        assert_eq!(a.count_crossings().unwrap().total, 0);
    }
}
