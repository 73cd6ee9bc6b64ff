//! Exact rational 2D kernel: orientation predicates, segment intersection,
//! polyline crossing counts, point-in-face tests and SVG emission.
//!
//! Everything here is exact. Coordinates are arbitrary-precision rationals
//! and no predicate ever touches floating point; the crossing-count claims
//! checked elsewhere are integer claims and stay falsifiable only if the
//! arithmetic is exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// n/d as a rational. Panics on d == 0.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn of(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn add(&self, dx: &Rat, dy: &Rat) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(
            (&self.x + &other.x) / rat(2),
            (&self.y + &other.y) / rat(2),
        )
    }

    /// Squared Euclidean distance, exact.
    pub fn dist2(&self, other: &Point) -> Rat {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("degenerate zero-length segment at {0}")]
    DegenerateSegment(Point),
    #[error("polylines overlap along a segment (not in general position)")]
    Overlap,
    #[error("polyline has fewer than 2 points")]
    ShortPolyline,
}

/// Sign of the cross product (q - p) x (r - p):
/// positive if p,q,r make a left (counterclockwise) turn.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Ordering {
    let det = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    det.cmp(&Rat::zero())
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegCross {
    None,
    /// Transversal crossing at an interior point of both segments.
    Proper(Point),
    /// They touch at a single point that is an endpoint of at least one.
    EndpointTouch(Point),
    /// Collinear with a shared subsegment of positive length.
    Overlap,
}

fn between(a: &Rat, x: &Rat, b: &Rat) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= x && x <= hi
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == Ordering::Equal && between(&a.x, &p.x, &b.x) && between(&a.y, &p.y, &b.y)
}

/// Exact classification of the intersection of segments a0-a1 and b0-b1.
pub fn segments_cross(
    a0: &Point,
    a1: &Point,
    b0: &Point,
    b1: &Point,
) -> Result<SegCross, GeomError> {
    if a0 == a1 {
        return Err(GeomError::DegenerateSegment(a0.clone()));
    }
    if b0 == b1 {
        return Err(GeomError::DegenerateSegment(b0.clone()));
    }
    let o1 = orient(a0, a1, b0);
    let o2 = orient(a0, a1, b1);
    let o3 = orient(b0, b1, a0);
    let o4 = orient(b0, b1, a1);

    if o1 == Ordering::Equal && o2 == Ordering::Equal {
        // Collinear. Check 1D overlap extent.
        let mut touches: Vec<&Point> = Vec::new();
        for p in [b0, b1] {
            if on_segment(p, a0, a1) {
                touches.push(p);
            }
        }
        for p in [a0, a1] {
            if on_segment(p, b0, b1) && !touches.iter().any(|q| *q == p) {
                touches.push(p);
            }
        }
        return match touches.len() {
            0 => Ok(SegCross::None),
            1 => Ok(SegCross::EndpointTouch(touches[0].clone())),
            _ => Ok(SegCross::Overlap),
        };
    }

    let straddle_a = (o1 == Ordering::Less && o2 == Ordering::Greater)
        || (o1 == Ordering::Greater && o2 == Ordering::Less);
    let straddle_b = (o3 == Ordering::Less && o4 == Ordering::Greater)
        || (o3 == Ordering::Greater && o4 == Ordering::Less);

    if straddle_a && straddle_b {
        // Proper crossing; solve for the point exactly.
        let d1x = &a1.x - &a0.x;
        let d1y = &a1.y - &a0.y;
        let d2x = &b1.x - &b0.x;
        let d2y = &b1.y - &b0.y;
        let denom = &d1x * &d2y - &d1y * &d2x;
        let t = ((&b0.x - &a0.x) * &d2y - (&b0.y - &a0.y) * &d2x) / denom;
        let px = &a0.x + &d1x * &t;
        let py = &a0.y + &d1y * &t;
        return Ok(SegCross::Proper(Point::new(px, py)));
    }

    // Possible single-point touch with an endpoint involved.
    for p in [b0, b1] {
        if on_segment(p, a0, a1) {
            return Ok(SegCross::EndpointTouch(p.clone()));
        }
    }
    for p in [a0, a1] {
        if on_segment(p, b0, b1) {
            return Ok(SegCross::EndpointTouch(p.clone()));
        }
    }
    Ok(SegCross::None)
}

/// An open or closed polyline with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: false,
        }
    }

    pub fn closed(points: Vec<Point>) -> Self {
        Polyline {
            points,
            closed: true,
        }
    }

    pub fn segments(&self) -> Vec<(&Point, &Point)> {
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            if w[0] != w[1] {
                out.push((&w[0], &w[1]));
            }
        }
        if self.closed && self.points.len() > 1 {
            let last = self.points.last().unwrap();
            let first = &self.points[0];
            if last != first {
                out.push((last, first));
            }
        }
        out
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        self.points.last().unwrap()
    }

    /// Bounding box (min, max) corners.
    pub fn bbox(&self) -> (Point, Point) {
        let mut min = self.points[0].clone();
        let mut max = self.points[0].clone();
        for p in &self.points {
            if p.x < min.x {
                min.x = p.x.clone();
            }
            if p.y < min.y {
                min.y = p.y.clone();
            }
            if p.x > max.x {
                max.x = p.x.clone();
            }
            if p.y > max.y {
                max.y = p.y.clone();
            }
        }
        (min, max)
    }

    pub fn translate(&self, dx: &Rat, dy: &Rat) -> Polyline {
        Polyline {
            points: self.points.iter().map(|p| p.add(dx, dy)).collect(),
            closed: self.closed,
        }
    }

    pub fn reversed(&self) -> Polyline {
        let mut pts = self.points.clone();
        pts.reverse();
        Polyline {
            points: pts,
            closed: self.closed,
        }
    }
}

/// Policy for endpoint incidences while counting crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointPolicy {
    /// Touches at a terminal point of either polyline are ignored; any other
    /// touch is an error (the pipeline guarantees general position).
    ExcludeTerminal,
}

fn is_terminal(pl: &Polyline, p: &Point) -> bool {
    !pl.closed && (pl.first() == p || pl.last() == p)
}

/// Count proper crossings between two polylines.
///
/// Shared terminal endpoints do not count. An overlap or a touch interior to
/// both polylines signals a drawing outside general position and is an error.
pub fn polyline_crossings(
    a: &Polyline,
    b: &Polyline,
    _policy: EndpointPolicy,
) -> Result<usize, GeomError> {
    if a.points.len() < 2 || b.points.len() < 2 {
        return Err(GeomError::ShortPolyline);
    }
    let mut count = 0usize;
    for (a0, a1) in a.segments() {
        for (b0, b1) in b.segments() {
            match segments_cross(a0, a1, b0, b1)? {
                SegCross::None => {}
                SegCross::Proper(_) => count += 1,
                SegCross::EndpointTouch(p) => {
                    if !(is_terminal(a, &p) || is_terminal(b, &p)) {
                        // A junction between consecutive segments of the same
                        // polyline is fine; a genuine touch between the two
                        // polylines away from their terminals is not.
                        let on_a_vertex = a.points.iter().any(|q| *q == p);
                        let on_b_vertex = b.points.iter().any(|q| *q == p);
                        if on_a_vertex && on_b_vertex {
                            return Err(GeomError::Overlap);
                        }
                        if !on_a_vertex && !on_b_vertex {
                            // Can't happen: a touch names an endpoint.
                            return Err(GeomError::Overlap);
                        }
                        // Vertex of one polyline lying in the interior of a
                        // segment of the other: tangency or crossing through a
                        // bend. Not in general position.
                        return Err(GeomError::Overlap);
                    }
                }
                SegCross::Overlap => return Err(GeomError::Overlap),
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceLocation {
    Inside,
    Outside,
    OnBoundary,
}

/// Exact even-odd test of `point` against a closed boundary walk.
///
/// The boundary is given as a list of segments (from one or more polylines
/// forming the face walk). Segments traversed twice cancel in the parity and
/// in the winding alike, so walks with bridges are fine for winding.
pub fn point_in_face(point: &Point, boundary: &[(&Point, &Point)]) -> FaceLocation {
    match winding_number(point, boundary) {
        None => FaceLocation::OnBoundary,
        Some(w) => {
            if w != 0 {
                FaceLocation::Inside
            } else {
                FaceLocation::Outside
            }
        }
    }
}

/// Winding number of a boundary walk around `point`; None if the point lies
/// on the walk. Exact signed crossings of the rightward horizontal ray with
/// a half-open rule on y so each crossing counts once.
pub fn winding_number(point: &Point, boundary: &[(&Point, &Point)]) -> Option<i64> {
    let mut w = 0i64;
    for (a, b) in boundary {
        if on_segment(point, a, b) {
            return None;
        }
        if a.y <= point.y {
            if b.y > point.y && orient(a, b, point) == Ordering::Greater {
                w += 1;
            }
        } else if b.y <= point.y && orient(a, b, point) == Ordering::Less {
            w -= 1;
        }
    }
    Some(w)
}

/// Twice the signed area of a closed walk given by segments.
pub fn walk_signed_area2(boundary: &[(&Point, &Point)]) -> Rat {
    let mut acc = Rat::zero();
    for (a, b) in boundary {
        acc += &a.x * &b.y - &b.x * &a.y;
    }
    acc
}

/// Squared distance from a point to a closed segment.
pub fn point_segment_dist2(p: &Point, a: &Point, b: &Point) -> Rat {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let apx = &p.x - &a.x;
    let apy = &p.y - &a.y;
    let denom = &abx * &abx + &aby * &aby;
    if denom.is_zero() {
        return p.dist2(a);
    }
    let t = (&apx * &abx + &apy * &aby) / &denom;
    let t = if t < Rat::zero() {
        Rat::zero()
    } else if t > Rat::one() {
        Rat::one()
    } else {
        t
    };
    let qx = &a.x + &abx * &t;
    let qy = &a.y + &aby * &t;
    let dx = &p.x - &qx;
    let dy = &p.y - &qy;
    &dx * &dx + &dy * &dy
}

/// Largest power-of-two rational 1/2^k with square <= d2, for d2 > 0.
pub fn pow2_at_most_sqrt(d2: &Rat) -> Rat {
    assert!(d2 > &Rat::zero(), "need positive squared distance");
    let mut r = Rat::one();
    // Grow first in case d2 >= 1.
    while &(&r * &r) * rat(4) <= *d2 {
        r *= rat(2);
    }
    while &r * &r > *d2 {
        r /= rat(2);
    }
    r
}

/// Compare direction vectors counterclockwise starting from the positive
/// x-axis. Vectors must be nonzero. Exact: quadrant index then cross product.
pub fn pseudo_angle_cmp(u: &(Rat, Rat), v: &(Rat, Rat)) -> Ordering {
    fn quadrant(w: &(Rat, Rat)) -> u8 {
        let zx = w.0.cmp(&Rat::zero());
        let zy = w.1.cmp(&Rat::zero());
        match (zx, zy) {
            (Ordering::Greater, Ordering::Equal) => 0,
            (Ordering::Greater, Ordering::Greater) => 1,
            (Ordering::Equal, Ordering::Greater) => 2,
            (Ordering::Less, Ordering::Greater) => 3,
            (Ordering::Less, Ordering::Equal) => 4,
            (Ordering::Less, Ordering::Less) => 5,
            (Ordering::Equal, Ordering::Less) => 6,
            (Ordering::Greater, Ordering::Less) => 7,
            (Ordering::Equal, Ordering::Equal) => panic!("zero direction vector"),
        }
    }
    let qu = quadrant(u);
    let qv = quadrant(v);
    if qu != qv {
        return qu.cmp(&qv);
    }
    // Same quadrant: cross > 0 means u is counterclockwise-before v.
    let cross = &u.0 * &v.1 - &u.1 * &v.0;
    cross.cmp(&Rat::zero()).reverse()
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

/// A drawing scene decoupled from pipeline types.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub curves: Vec<ScenePath>,
    pub disks: Vec<SceneDisk>,
    pub markers: Vec<Point>,
}

#[derive(Debug, Clone)]
pub struct ScenePath {
    pub class: &'static str,
    pub label: String,
    pub polyline: Polyline,
}

#[derive(Debug, Clone)]
pub struct SceneDisk {
    pub label: String,
    pub center: Point,
    pub radius: Rat,
}

#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub width: u32,
    pub markers: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800,
            markers: false,
        }
    }
}

fn fmt6(r: &Rat) -> String {
    // Round to 6 decimals at emission only.
    let scaled = r * rat(1_000_000);
    let rounded = scaled.round().to_integer();
    let neg = rounded.sign() == num::bigint::Sign::Minus;
    let abs = rounded.magnitude().to_string();
    let abs = if abs.len() < 7 {
        format!("{}{}", "0".repeat(7 - abs.len()), abs)
    } else {
        abs
    };
    let (int, frac) = abs.split_at(abs.len() - 6);
    let frac = frac.trim_end_matches('0');
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(int);
    if !frac.is_empty() {
        s.push('.');
        s.push_str(frac);
    }
    s
}

/// Deterministic SVG for a scene: one stroke class per curve system,
/// filled disks for holes, optional crossing markers.
pub fn emit_svg(scene: &Scene, options: &SvgOptions) -> String {
    use std::fmt::Write as _;
    let mut min = Point::of(0, 0);
    let mut max = Point::of(1, 1);
    let mut first = true;
    let mut see = |p: &Point| {
        if first {
            min = p.clone();
            max = p.clone();
            first = false;
            return;
        }
        if p.x < min.x {
            min.x = p.x.clone();
        }
        if p.y < min.y {
            min.y = p.y.clone();
        }
        if p.x > max.x {
            max.x = p.x.clone();
        }
        if p.y > max.y {
            max.y = p.y.clone();
        }
    };
    for c in &scene.curves {
        for p in &c.polyline.points {
            see(p);
        }
    }
    for d in &scene.disks {
        see(&Point::new(&d.center.x - &d.radius, &d.center.y - &d.radius));
        see(&Point::new(&d.center.x + &d.radius, &d.center.y + &d.radius));
    }
    for m in &scene.markers {
        see(m);
    }
    let pad = (&max.x - &min.x + (&max.y - &min.y)) / rat(40) + rat(1);
    let x0 = &min.x - &pad;
    let y0 = &min.y - &pad;
    let w = &max.x - &min.x + &pad * rat(2);
    let h = &max.y - &min.y + &pad * rat(2);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" viewBox="{} {} {} {}">"#,
        options.width,
        fmt6(&x0),
        fmt6(&y0),
        fmt6(&w),
        fmt6(&h)
    )
    .unwrap();
    writeln!(
        out,
        r#"<style>.a{{stroke:#1f6fb2;fill:none;stroke-width:{sw}}}.b{{stroke:#c03a2b;fill:none;stroke-width:{sw}}}.hole{{fill:#444;stroke:none}}.x{{fill:#111}}</style>"#,
        sw = fmt6(&(&w / rat(400)))
    )
    .unwrap();
    // y grows upward in drawing space; flip for SVG.
    writeln!(
        out,
        r#"<g transform="translate(0 {}) scale(1 -1)">"#,
        fmt6(&(&y0 + &(&y0 + &h)))
    )
    .unwrap();
    for d in &scene.disks {
        writeln!(
            out,
            r#"<circle class="hole" cx="{}" cy="{}" r="{}"><title>{}</title></circle>"#,
            fmt6(&d.center.x),
            fmt6(&d.center.y),
            fmt6(&d.radius),
            d.label
        )
        .unwrap();
    }
    for c in &scene.curves {
        let mut pts = String::new();
        for p in &c.polyline.points {
            write!(pts, "{},{} ", fmt6(&p.x), fmt6(&p.y)).unwrap();
        }
        if c.polyline.closed {
            if let Some(p) = c.polyline.points.first() {
                write!(pts, "{},{}", fmt6(&p.x), fmt6(&p.y)).unwrap();
            }
        }
        writeln!(
            out,
            r#"<polyline class="{}" points="{}"><title>{}</title></polyline>"#,
            c.class,
            pts.trim_end(),
            c.label
        )
        .unwrap();
    }
    if options.markers {
        let r = &w / rat(300);
        for m in &scene.markers {
            writeln!(
                out,
                r#"<circle class="x" cx="{}" cy="{}" r="{}"/>"#,
                fmt6(&m.x),
                fmt6(&m.y),
                fmt6(&r)
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}

/// Format a rational as "num/den" (den always present, positive).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse "num/den" or a plain integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn proper_crossing() {
        let r = segments_cross(
            &Point::of(0, 0),
            &Point::of(2, 2),
            &Point::of(0, 2),
            &Point::of(2, 0),
        )
        .unwrap();
        assert_eq!(r, SegCross::Proper(Point::of(1, 1)));
    }

    #[test]
    fn collinear_overlap() {
        let r = segments_cross(
            &Point::of(0, 0),
            &Point::of(4, 0),
            &Point::of(1, 0),
            &Point::of(2, 0),
        )
        .unwrap();
        assert_eq!(r, SegCross::Overlap);
    }

    #[test]
    fn shared_endpoint_only() {
        let r = segments_cross(
            &Point::of(0, 0),
            &Point::of(1, 1),
            &Point::of(1, 1),
            &Point::of(2, 0),
        )
        .unwrap();
        assert_eq!(r, SegCross::EndpointTouch(Point::of(1, 1)));
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(segments_cross(
            &Point::of(0, 0),
            &Point::of(0, 0),
            &Point::of(1, 0),
            &Point::of(2, 0)
        )
        .is_err());
    }

    #[test]
    fn crossing_two_segments() {
        let a = Polyline::open(vec![Point::of(0, 0), Point::of(2, 2)]);
        let b = Polyline::open(vec![Point::of(0, 2), Point::of(2, 0)]);
        assert_eq!(
            polyline_crossings(&a, &b, EndpointPolicy::ExcludeTerminal).unwrap(),
            1
        );
        // symmetric
        assert_eq!(
            polyline_crossings(&b, &a, EndpointPolicy::ExcludeTerminal).unwrap(),
            1
        );
    }

    #[test]
    fn identical_polylines_error() {
        let a = Polyline::open(vec![Point::of(0, 0), Point::of(2, 2)]);
        assert!(polyline_crossings(&a, &a, EndpointPolicy::ExcludeTerminal).is_err());
    }

    #[test]
    fn shared_terminal_not_counted() {
        let a = Polyline::open(vec![Point::of(0, 0), Point::of(1, 1)]);
        let b = Polyline::open(vec![Point::of(1, 1), Point::of(2, 0)]);
        assert_eq!(
            polyline_crossings(&a, &b, EndpointPolicy::ExcludeTerminal).unwrap(),
            0
        );
    }

    #[test]
    fn point_in_triangle() {
        let a = Point::of(0, 0);
        let b = Point::of(3, 0);
        let c = Point::of(0, 3);
        let boundary = vec![(&a, &b), (&b, &c), (&c, &a)];
        assert_eq!(point_in_face(&Point::of(1, 1), &boundary), FaceLocation::Inside);
        assert_eq!(
            point_in_face(&Point::of(5, 5), &boundary),
            FaceLocation::Outside
        );
        assert_eq!(
            point_in_face(&Point::of(0, 0), &boundary),
            FaceLocation::OnBoundary
        );
    }

    #[test]
    fn winding_direction() {
        let a = Point::of(0, 0);
        let b = Point::of(3, 0);
        let c = Point::of(0, 3);
        let ccw = vec![(&a, &b), (&b, &c), (&c, &a)];
        assert_eq!(winding_number(&Point::of(1, 1), &ccw), Some(1));
        let cw = vec![(&a, &c), (&c, &b), (&b, &a)];
        assert_eq!(winding_number(&Point::of(1, 1), &cw), Some(-1));
    }

    #[test]
    fn pow2_bound() {
        let d2 = ratio(9, 16); // distance 3/4
        let r = pow2_at_most_sqrt(&d2);
        assert!(&r * &r <= d2);
        assert!(&r * &r * rat(4) > d2);
        assert_eq!(r, ratio(1, 2));
    }

    #[test]
    fn pseudo_angle_order() {
        let dirs = [
            (rat(1), rat(0)),
            (rat(2), rat(1)),
            (rat(0), rat(1)),
            (rat(-1), rat(1)),
            (rat(-1), rat(0)),
            (rat(-1), rat(-2)),
            (rat(0), rat(-1)),
            (rat(1), rat(-1)),
        ];
        for w in dirs.windows(2) {
            assert_eq!(pseudo_angle_cmp(&w[0], &w[1]), Ordering::Less);
        }
    }

    // Predicates agree with a naive arbitrary-precision determinant oracle.
    #[test]
    fn orientation_vs_naive_oracle_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let v: Vec<i64> = (0..6).map(|_| rng.gen_range(-20..=20)).collect();
            let p = Point::of(v[0], v[1]);
            let q = Point::of(v[2], v[3]);
            let r = Point::of(v[4], v[5]);
            // Naive oracle: full 3x3 determinant with BigInt.
            let det = BigInt::from(v[2] - v[0]) * BigInt::from(v[5] - v[1])
                - BigInt::from(v[3] - v[1]) * BigInt::from(v[4] - v[0]);
            let expect = det.cmp(&BigInt::from(0));
            assert_eq!(orient(&p, &q, &r), expect);
        }
    }

    #[test]
    fn polyline_crossings_symmetric_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut made = 0;
        while made < 200 {
            let pa: Vec<Point> = (0..3)
                .map(|_| Point::of(rng.gen_range(-8..=8), rng.gen_range(-8..=8)))
                .collect();
            let pb: Vec<Point> = (0..3)
                .map(|_| Point::of(rng.gen_range(-8..=8), rng.gen_range(-8..=8)))
                .collect();
            if pa.windows(2).any(|w| w[0] == w[1]) || pb.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let a = Polyline::open(pa);
            let b = Polyline::open(pb);
            let ab = polyline_crossings(&a, &b, EndpointPolicy::ExcludeTerminal);
            let ba = polyline_crossings(&b, &a, EndpointPolicy::ExcludeTerminal);
            match (ab, ba) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => panic!("asymmetric error behaviour"),
            }
            made += 1;
        }
    }

    #[test]
    fn svg_smoke() {
        let scene = Scene {
            curves: vec![ScenePath {
                class: "a",
                label: "a1".into(),
                polyline: Polyline::open(vec![Point::of(0, 0), Point::of(4, 4)]),
            }],
            disks: vec![SceneDisk {
                label: "h1".into(),
                center: Point::of(2, 1),
                radius: ratio(1, 2),
            }],
            markers: vec![Point::of(2, 2)],
        };
        let svg = emit_svg(&scene, &SvgOptions::default());
        assert!(svg.contains("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("circle"));
        // determinism
        assert_eq!(svg, emit_svg(&scene, &SvgOptions::default()));
    }
}
