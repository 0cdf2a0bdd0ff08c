//! Parameterized polygonal domain families with boundary markers and
//! symmetry metadata.
//!
//! All families are normalized the way the eigenvalue bounds expect them:
//! the isosceles trapezoid has base length 2 centered at the origin, the kite
//! has its tip at the origin and its reflex-capable vertex at (1,0), and the
//! parallelogram starts at the origin with its long edge on the x-axis.
//! Other sizes are obtained by [`Polygon::scaled`]; eigenvalues scale as
//! length⁻².

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance for geometric predicates (reflection closure,
/// point-on-segment matching), measured against the polygon diameter.
pub const GEOM_REL_TOL: f64 = 1e-12;

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product `self × o`.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm()
    }

    /// Midpoint of `self` and `o`.
    pub fn mid(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }
}

/// Boundary condition label carried by a polygon edge.
///
/// Family constructors emit only `Neumann` edges. [`half_domain`] marks the
/// edge produced by the symmetry cut as `Axis`: the caller decides at solve
/// time whether it acts as a Neumann edge (symmetric eigenvalue) or a
/// Dirichlet edge (antisymmetric eigenvalue).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMarker {
    Neumann,
    Dirichlet,
    Axis,
}

/// Oriented mirror line through two points.
///
/// The "positive" half-plane used by [`half_domain`] is the left side of the
/// direction `p → q`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct AxisLine {
    pub p: Point,
    pub q: Point,
}

impl AxisLine {
    pub fn new(p: Point, q: Point) -> Self {
        AxisLine { p, q }
    }

    fn dir(&self) -> Point {
        self.q.sub(self.p)
    }

    /// Signed distance of `x` from the line; positive on the left of `p → q`.
    pub fn signed_side(&self, x: Point) -> f64 {
        let d = self.dir();
        d.cross(x.sub(self.p)) / d.norm()
    }

    /// Mirror image of `x` across the line. Axis-aligned lines reflect
    /// exactly in floating point.
    pub fn reflect(&self, x: Point) -> Point {
        if self.p.x == self.q.x {
            return Point::new(2.0 * self.p.x - x.x, x.y);
        }
        if self.p.y == self.q.y {
            return Point::new(x.x, 2.0 * self.p.y - x.y);
        }
        let d = self.dir();
        let len2 = d.dot(d);
        let v = x.sub(self.p);
        let t = v.dot(d) / len2;
        let foot = self.p.add(d.scale(t));
        foot.add(foot.sub(x))
    }
}

/// Symmetry metadata attached to a polygon.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// Mirror symmetry about a line.
    Axis(AxisLine),
    /// Central symmetry (rotation by π) about a point.
    Center(Point),
}

/// Domain family tag kept for serialization and reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    IsoscelesTrapezoid { alpha: f64, h: f64 },
    Kite { a: f64, h: f64 },
    Parallelogram { base: f64, side: f64, angle: f64 },
    RightTrapezoid,
    Triangle { a: f64, h: f64 },
    HalfDomain,
    Custom,
}

/// Isosceles trapezoid parameters: base angle `alpha` and height `h`.
///
/// The base is fixed at length 2 on the x-axis, symmetric about the y-axis.
/// Validity requires `0 < alpha < π/2` and `0 < h < tan(alpha)` so the top
/// edge is nonempty.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrapezoidParams {
    pub alpha: f64,
    pub h: f64,
}

impl TrapezoidParams {
    /// Half-width of the top edge, `1 − h·cot(alpha)`.
    pub fn top_half_width(&self) -> f64 {
        1.0 - self.h / self.alpha.tan()
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParams(format!(
                "trapezoid base angle {} outside (0, pi/2)",
                self.alpha
            )));
        }
        if !(self.h > 0.0) {
            return Err(Error::InvalidParams(format!(
                "trapezoid height {} must be positive",
                self.h
            )));
        }
        if self.top_half_width() <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "trapezoid degenerate: h = {} >= tan(alpha) = {}",
                self.h,
                self.alpha.tan()
            )));
        }
        Ok(())
    }
}

/// Kite parameters: apex abscissa `a > 0` and half-height `h > 0`.
///
/// Vertices are (0,0), (a,−h), (1,0), (a,h); the kite is convex for `a < 1`
/// and a nonconvex dart (reflex at (1,0)) for `a > 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct KiteParams {
    pub a: f64,
    pub h: f64,
}

/// Triangle parameters: base (0,0)–(1,0) and apex `(a, h)` in the first
/// quadrant.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TriangleParams {
    pub a: f64,
    pub h: f64,
}

/// A simple, counterclockwise polygon with per-edge boundary markers.
///
/// Edge `i` runs from vertex `i` to vertex `(i+1) % n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
    #[serde(rename = "markers")]
    pub edge_markers: Vec<EdgeMarker>,
    pub symmetry: Option<Symmetry>,
    #[serde(flatten)]
    pub family: Option<Family>,
}

impl Polygon {
    /// Build and validate a polygon.
    pub fn new(
        vertices: Vec<Point>,
        edge_markers: Vec<EdgeMarker>,
        symmetry: Option<Symmetry>,
    ) -> Result<Polygon> {
        let poly = Polygon {
            vertices,
            edge_markers,
            symmetry,
            family: None,
        };
        poly.validate()?;
        Ok(poly)
    }

    fn with_family(mut self, family: Family) -> Polygon {
        self.family = Some(family);
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Edge `i` as an ordered vertex pair.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Signed area by the shoelace formula (positive for counterclockwise).
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut s = 0.0;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            s += a.cross(b);
        }
        0.5 * s
    }

    pub fn area(&self) -> f64 {
        self.signed_area()
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// True if every interior angle is strictly convex (within tolerance).
    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let tol = GEOM_REL_TOL * self.diameter() * self.diameter();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            b.sub(a).cross(c.sub(b)) > -tol
        })
    }

    /// Point-in-polygon test by ray casting; boundary points count as inside
    /// (within `tol` of an edge).
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_segment_distance(p, a, b) <= tol {
                return true;
            }
        }
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if (a.y > p.y) != (b.y > p.y) {
                let t = (p.y - a.y) / (b.y - a.y);
                let xi = a.x + t * (b.x - a.x);
                if p.x < xi {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        (0..self.vertices.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                point_segment_distance(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Uniformly scale the polygon (vertices and symmetry metadata) by `s`.
    pub fn scaled(&self, s: f64) -> Polygon {
        let symmetry = self.symmetry.map(|sym| match sym {
            Symmetry::Axis(l) => Symmetry::Axis(AxisLine::new(l.p.scale(s), l.q.scale(s))),
            Symmetry::Center(c) => Symmetry::Center(c.scale(s)),
        });
        Polygon {
            vertices: self.vertices.iter().map(|v| v.scale(s)).collect(),
            edge_markers: self.edge_markers.clone(),
            symmetry,
            family: None,
        }
    }

    /// Declare a mirror axis through `p` and `q`, checking that reflection
    /// maps the vertex set onto itself.
    pub fn with_axis(mut self, p: Point, q: Point) -> Result<Polygon> {
        let axis = AxisLine::new(p, q);
        let tol = GEOM_REL_TOL * self.diameter();
        for v in &self.vertices {
            let r = axis.reflect(*v);
            if !self.vertices.iter().any(|w| w.dist(r) <= tol) {
                return Err(Error::InvalidParams(format!(
                    "axis ({},{})-({},{}) is not a mirror symmetry of the vertex set",
                    p.x, p.y, q.x, q.y
                )));
            }
        }
        self.symmetry = Some(Symmetry::Axis(axis));
        Ok(self)
    }

    /// Replace every `Axis` edge marker by `marker`.
    pub fn resolve_axis_edges(&self, marker: EdgeMarker) -> Polygon {
        let mut p = self.clone();
        for m in &mut p.edge_markers {
            if *m == EdgeMarker::Axis {
                *m = marker;
            }
        }
        p
    }

    /// Indices of edges currently marked `Axis`.
    pub fn axis_edges(&self) -> Vec<usize> {
        self.edge_markers
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == EdgeMarker::Axis)
            .map(|(i, _)| i)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "{n} vertices, need at least 3"
            )));
        }
        if self.edge_markers.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: self.edge_markers.len(),
            });
        }
        let diam = self.diameter();
        if !(diam > 0.0) || !diam.is_finite() {
            return Err(Error::DegeneratePolygon("zero or non-finite extent".into()));
        }
        let tol = GEOM_REL_TOL * diam;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if a.dist(b) <= tol {
                return Err(Error::DegeneratePolygon(format!(
                    "consecutive vertices {i} coincide"
                )));
            }
        }
        if self.signed_area() <= 0.0 {
            return Err(Error::DegeneratePolygon(
                "vertex loop is not counterclockwise".into(),
            ));
        }
        // Simplicity: no two non-adjacent edges may intersect.
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in i + 1..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (c, d) = self.edge(j);
                if segments_intersect(a, b, c, d, tol) {
                    return Err(Error::DegeneratePolygon(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        if let Some(Symmetry::Axis(axis)) = &self.symmetry {
            for v in &self.vertices {
                let r = axis.reflect(*v);
                if !self.vertices.iter().any(|w| w.dist(r) <= tol) {
                    return Err(Error::DegeneratePolygon(
                        "declared axis is not a mirror symmetry of the vertex set".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Serialize as the JSON object `{family, params, vertices, markers, symmetry}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Polygon> {
        let poly: Polygon = serde_json::from_str(s)?;
        poly.validate()?;
        Ok(poly)
    }
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b.sub(a);
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a.add(d.scale(t)))
}

/// Proper or improper intersection of two segments, with endpoint contact
/// ignored up to `tol` only for shared endpoints of adjacent edges (callers
/// pass non-adjacent edges).
fn segments_intersect(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    let d1 = b.sub(a).cross(c.sub(a));
    let d2 = b.sub(a).cross(d.sub(a));
    let d3 = d.sub(c).cross(a.sub(c));
    let d4 = d.sub(c).cross(b.sub(c));
    if ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol))
        && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
    {
        return true;
    }
    // Collinear/touching contacts within tol.
    for (p, u, v) in [(c, a, b), (d, a, b), (a, c, d), (b, c, d)] {
        if point_segment_distance(p, u, v) <= tol {
            return true;
        }
    }
    false
}

/// Isosceles trapezoid with base length 2 on the x-axis, symmetric about the
/// y-axis: vertices (−1,0), (1,0), (1−h·cotα, h), (−1+h·cotα, h), all edges
/// Neumann.
///
/// ```
/// use hotspots::geometry::{make_isosceles_trapezoid, TrapezoidParams, Point};
/// let q = make_isosceles_trapezoid(TrapezoidParams { alpha: std::f64::consts::FRAC_PI_4, h: 0.5 })?;
/// assert!(q.vertices[2].dist(Point::new(0.5, 0.5)) < 1e-15);
/// # Ok::<(), hotspots::Error>(())
/// ```
pub fn make_isosceles_trapezoid(p: TrapezoidParams) -> Result<Polygon> {
    p.validate()?;
    let t = p.top_half_width();
    let vertices = vec![
        Point::new(-1.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(t, p.h),
        Point::new(-t, p.h),
    ];
    // Axis oriented downward so the positive (left) half-plane is x > 0.
    let axis = AxisLine::new(Point::new(0.0, p.h), Point::new(0.0, 0.0));
    Ok(Polygon::new(
        vertices,
        vec![EdgeMarker::Neumann; 4],
        Some(Symmetry::Axis(axis)),
    )?
    .with_family(Family::IsoscelesTrapezoid {
        alpha: p.alpha,
        h: p.h,
    }))
}

/// Kite (0,0), (a,−h), (1,0), (a,h), symmetric about the x-axis. Nonconvex
/// ("dart") for `a > 1`; convexity is metadata, not a precondition.
pub fn make_kite(p: KiteParams) -> Result<Polygon> {
    if !(p.a > 0.0) || !(p.h > 0.0) {
        return Err(Error::InvalidParams(format!(
            "kite needs a > 0 and h > 0, got a = {}, h = {}",
            p.a, p.h
        )));
    }
    let vertices = vec![
        Point::new(0.0, 0.0),
        Point::new(p.a, -p.h),
        Point::new(1.0, 0.0),
        Point::new(p.a, p.h),
    ];
    // Axis oriented along +x so the positive half-plane is y > 0.
    let axis = AxisLine::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
    Ok(Polygon::new(
        vertices,
        vec![EdgeMarker::Neumann; 4],
        Some(Symmetry::Axis(axis)),
    )?
    .with_family(Family::Kite { a: p.a, h: p.h }))
}

/// Parallelogram (0,0), (base,0), (base,0)+side·(cosθ,sinθ), side·(cosθ,sinθ)
/// with the center stored as central-symmetry metadata. Requires
/// `base ≥ side` and `0 < angle < π`.
pub fn make_parallelogram(base: f64, side: f64, angle: f64) -> Result<Polygon> {
    if !(base > 0.0 && side > 0.0) {
        return Err(Error::InvalidParams("nonpositive edge length".into()));
    }
    if base < side {
        return Err(Error::InvalidParams(format!(
            "parallelogram requires base >= side, got base = {base}, side = {side}"
        )));
    }
    if !(angle > 0.0 && angle < std::f64::consts::PI) {
        return Err(Error::InvalidParams(format!(
            "parallelogram angle {angle} outside (0, pi)"
        )));
    }
    let p2 = Point::new(base, 0.0);
    let p4 = Point::new(side * angle.cos(), side * angle.sin());
    let p3 = p2.add(p4);
    let center = Point::new(0.5 * p3.x, 0.5 * p3.y);
    Ok(Polygon::new(
        vec![Point::new(0.0, 0.0), p2, p3, p4],
        vec![EdgeMarker::Neumann; 4],
        Some(Symmetry::Center(center)),
    )?
    .with_family(Family::Parallelogram { base, side, angle }))
}

/// Right trapezoid P1 P2 P3 P4 with P1 at the origin, P2 on the positive
/// x-axis, P4 on the positive y-axis, P3 in the open first quadrant, and
/// `|P1P2| > |P3P4|`. All edges Neumann.
pub fn make_right_trapezoid(vertices: [Point; 4]) -> Result<Polygon> {
    let [p1, p2, p3, p4] = vertices;
    let scale = vertices
        .iter()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    let tol = GEOM_REL_TOL * scale;
    if p1.norm() > tol {
        return Err(Error::InvalidParams("P1 must be the origin".into()));
    }
    if p2.y.abs() > tol || p2.x <= tol {
        return Err(Error::InvalidParams("P2 must lie on the positive x-axis".into()));
    }
    if p4.x.abs() > tol || p4.y <= tol {
        return Err(Error::InvalidParams("P4 must lie on the positive y-axis".into()));
    }
    if p3.x <= tol || p3.y <= tol {
        return Err(Error::InvalidParams("P3 must lie in the open first quadrant".into()));
    }
    if p1.dist(p2) <= p3.dist(p4) {
        return Err(Error::InvalidParams(
            "right trapezoid requires |P1P2| > |P3P4|".into(),
        ));
    }
    Ok(
        Polygon::new(vec![p1, p2, p3, p4], vec![EdgeMarker::Neumann; 4], None)?
            .with_family(Family::RightTrapezoid),
    )
}

/// Triangle with base (0,0)–(1,0) and apex (a,h) in the first quadrant.
pub fn make_triangle(p: TriangleParams) -> Result<Polygon> {
    if !(p.a > 0.0) || !(p.h > 0.0) {
        return Err(Error::InvalidParams(format!(
            "triangle needs a > 0 and h > 0, got a = {}, h = {}",
            p.a, p.h
        )));
    }
    Ok(Polygon::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(p.a, p.h),
        ],
        vec![EdgeMarker::Neumann; 3],
        None,
    )?
    .with_family(Family::Triangle { a: p.a, h: p.h }))
}

/// The closed half of `poly` on the positive side of its declared axis.
///
/// The edge lying on the axis is marked [`EdgeMarker::Axis`]; every other
/// edge inherits the marker of the polygon edge containing it. For the
/// isosceles trapezoid this is the right trapezoid O P2 P3 C, for the kite
/// the upper triangle P1 P3 P4.
pub fn half_domain(poly: &Polygon) -> Result<Polygon> {
    let axis = match &poly.symmetry {
        Some(Symmetry::Axis(a)) => *a,
        _ => return Err(Error::NoSymmetryAxis),
    };
    let diam = poly.diameter();
    let tol = GEOM_REL_TOL.sqrt() * diam; // clip welding tolerance
    let n = poly.n_vertices();

    // Sutherland–Hodgman clip against the closed half-plane side >= 0.
    let mut out: Vec<Point> = Vec::new();
    for i in 0..n {
        let (a, b) = poly.edge(i);
        let sa = axis.signed_side(a);
        let sb = axis.signed_side(b);
        let a_in = sa >= -tol;
        let b_in = sb >= -tol;
        if a_in != b_in {
            let t = sa / (sa - sb);
            out.push(a.add(b.sub(a).scale(t)));
        }
        if b_in {
            out.push(b);
        }
    }
    // Weld consecutive duplicates (including the wraparound pair).
    let mut verts: Vec<Point> = Vec::new();
    for p in out {
        if verts.last().map_or(true, |l| l.dist(p) > tol) {
            verts.push(p);
        }
    }
    while verts.len() > 1 && verts[0].dist(*verts.last().unwrap()) <= tol {
        verts.pop();
    }
    if verts.len() < 3 {
        return Err(Error::DegeneratePolygon(
            "half-domain clip left fewer than 3 vertices".into(),
        ));
    }

    let m = verts.len();
    let mut markers = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = (verts[i], verts[(i + 1) % m]);
        let on_axis =
            axis.signed_side(a).abs() <= tol && axis.signed_side(b).abs() <= tol;
        if on_axis {
            markers.push(EdgeMarker::Axis);
            continue;
        }
        let mid = a.mid(b);
        let parent = (0..n).find(|&j| {
            let (u, v) = poly.edge(j);
            point_segment_distance(mid, u, v) <= tol
        });
        match parent {
            Some(j) => markers.push(poly.edge_markers[j]),
            None => {
                return Err(Error::DegeneratePolygon(
                    "half-domain edge not contained in any parent edge".into(),
                ))
            }
        }
    }

    Ok(Polygon::new(verts, markers, None)?.with_family(Family::HalfDomain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn assert_close(a: Point, b: Point, tol: f64) {
        assert!(a.dist(b) <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn trapezoid_pi4_vertices() {
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_4,
            h: 0.5,
        })
        .unwrap();
        assert_close(q.vertices[2], Point::new(0.5, 0.5), 1e-15);
        assert_close(q.vertices[3], Point::new(-0.5, 0.5), 1e-15);
        assert!(q.edge_markers.iter().all(|m| *m == EdgeMarker::Neumann));
    }

    #[test]
    fn trapezoid_example_domain() {
        // alpha = arctan 16, h = 2 recovers top vertices (±7/8, 2).
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: 16.0_f64.atan(),
            h: 2.0,
        })
        .unwrap();
        assert_close(q.vertices[2], Point::new(7.0 / 8.0, 2.0), 1e-14);
        assert_close(q.vertices[3], Point::new(-7.0 / 8.0, 2.0), 1e-14);
    }

    #[test]
    fn trapezoid_degenerate_top_rejected() {
        let r = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: FRAC_PI_3.tan(),
        });
        assert!(matches!(r, Err(Error::InvalidParams(_))));
        let r = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: 2.0,
        });
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn kite_families() {
        let convex = make_kite(KiteParams { a: 0.75, h: 0.5 }).unwrap();
        assert!(convex.is_convex());
        let dart = make_kite(KiteParams { a: 2.10, h: 0.65 }).unwrap();
        assert!(!dart.is_convex());
        assert!(dart.signed_area() > 0.0);
        // Reflection across the x-axis maps the vertex set to itself.
        let sym = make_kite(KiteParams { a: 1.0, h: 1.0 }).unwrap();
        let axis = match sym.symmetry.unwrap() {
            Symmetry::Axis(a) => a,
            _ => unreachable!(),
        };
        for v in &sym.vertices {
            let r = axis.reflect(*v);
            assert!(sym.vertices.iter().any(|w| w.dist(r) < 1e-12));
        }
        assert!(make_kite(KiteParams { a: 0.0, h: 1.0 }).is_err());
        assert!(make_kite(KiteParams { a: 1.0, h: -1.0 }).is_err());
    }

    #[test]
    fn kite_reflex_exactly_when_a_above_one() {
        for (a, expect_convex) in [(0.5, true), (0.99, true), (1.01, false), (2.1, false)] {
            let k = make_kite(KiteParams { a, h: 0.6 }).unwrap();
            assert_eq!(k.is_convex(), expect_convex, "a = {a}");
        }
    }

    #[test]
    fn parallelogram_examples() {
        // Rhombus of unit side with Q3 = (8/5, 4/5).
        let r = make_parallelogram(1.0, 1.0, (4.0f64 / 3.0).atan()).unwrap();
        assert_close(r.vertices[2], Point::new(1.6, 0.8), 1e-12);
        assert_close(r.vertices[3], Point::new(0.6, 0.8), 1e-12);

        let rect = make_parallelogram(2.0, 1.0, PI / 2.0).unwrap();
        assert_close(rect.vertices[2], Point::new(2.0, 1.0), 1e-12);

        // The base must carry the longer edge.
        assert!(make_parallelogram(1.0, 2.0, 1.0).is_err());
        assert!(make_parallelogram(1.0, (1.25f64).sqrt(), (2.0f64).atan()).is_err());

        // The slanted unit-base parallelogram with P3 = (3/2, 1) has its longer
        // edge off the x-axis, so it is built directly from vertices.
        let p = Polygon::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.5, 1.0),
                Point::new(0.5, 1.0),
            ],
            vec![EdgeMarker::Neumann; 4],
            Some(Symmetry::Center(Point::new(0.75, 0.5))),
        )
        .unwrap();
        match p.symmetry.unwrap() {
            Symmetry::Center(c) => assert_close(c, Point::new(0.75, 0.5), 1e-12),
            _ => panic!("expected center"),
        }
    }

    #[test]
    fn right_trapezoid_validation() {
        let q = make_right_trapezoid([
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0 / 3.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(q.signed_area() > 0.0);

        let eps = 0.05;
        let thin = make_right_trapezoid([
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0 - eps, eps),
            Point::new(0.0, eps),
        ])
        .unwrap();
        assert!(thin.area() > 0.0);

        // Square violates the strict |P1P2| > |P3P4| precondition.
        let square = make_right_trapezoid([
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(matches!(square, Err(Error::InvalidParams(_))));

        let bad = make_right_trapezoid([
            Point::new(0.1, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(bad.is_err());
    }

    #[test]
    fn half_trapezoid_is_right_trapezoid() {
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: 0.5,
        })
        .unwrap();
        let half = half_domain(&q).unwrap();
        let t = 1.0 - 0.5 / FRAC_PI_3.tan();
        assert_eq!(half.n_vertices(), 4);
        assert_close(half.vertices[0], Point::new(0.0, 0.0), 1e-12);
        assert_close(half.vertices[1], Point::new(1.0, 0.0), 1e-12);
        assert_close(half.vertices[2], Point::new(t, 0.5), 1e-12);
        assert_close(half.vertices[3], Point::new(0.0, 0.5), 1e-12);
        assert_eq!(half.edge_markers[3], EdgeMarker::Axis);
        assert_eq!(half.edge_markers[0], EdgeMarker::Neumann);
        // Area is exactly half the parent area.
        assert!((half.area() - 0.5 * q.area()).abs() <= 1e-12 * q.area());
    }

    #[test]
    fn half_kite_is_upper_triangle() {
        let k = make_kite(KiteParams { a: 1.9, h: 0.65 }).unwrap();
        let half = half_domain(&k).unwrap();
        assert_eq!(half.n_vertices(), 3);
        assert_close(half.vertices[0], Point::new(0.0, 0.0), 1e-12);
        assert_close(half.vertices[1], Point::new(1.0, 0.0), 1e-12);
        assert_close(half.vertices[2], Point::new(1.9, 0.65), 1e-12);
        assert_eq!(half.edge_markers[0], EdgeMarker::Axis);
        assert!((half.area() - 0.5 * k.area()).abs() <= 1e-12 * k.area());
    }

    #[test]
    fn half_domain_requires_axis() {
        let p = make_parallelogram(2.0, 1.0, 1.0).unwrap();
        assert!(matches!(half_domain(&p), Err(Error::NoSymmetryAxis)));
        let t = make_triangle(TriangleParams { a: 0.5, h: 1.0 }).unwrap();
        assert!(matches!(half_domain(&t), Err(Error::NoSymmetryAxis)));
    }

    #[test]
    fn half_area_across_families() {
        let cases: Vec<Polygon> = vec![
            make_isosceles_trapezoid(TrapezoidParams {
                alpha: 1.2,
                h: 0.8,
            })
            .unwrap(),
            make_kite(KiteParams { a: 0.5, h: 0.3 }).unwrap(),
            make_kite(KiteParams { a: 2.4, h: 1.1 }).unwrap(),
        ];
        for poly in cases {
            let half = half_domain(&poly).unwrap();
            assert!(
                (half.area() - 0.5 * poly.area()).abs() <= 1e-12 * poly.area(),
                "family {:?}",
                poly.family
            );
        }
    }

    #[test]
    fn reflection_closure_for_constructors() {
        // Sampled parameter grid; reflection maps vertices onto vertices.
        for &alpha in &[0.5, FRAC_PI_4, 1.0, FRAC_PI_3, 1.3, 1.5] {
            for &frac in &[0.1, 0.5, 0.9] {
                let h = frac * alpha.tan().min(3.0);
                let q = make_isosceles_trapezoid(TrapezoidParams { alpha, h }).unwrap();
                let axis = match q.symmetry.unwrap() {
                    Symmetry::Axis(a) => a,
                    _ => unreachable!(),
                };
                let tol = 1e-12 * q.diameter();
                for v in &q.vertices {
                    let r = axis.reflect(*v);
                    assert!(q.vertices.iter().any(|w| w.dist(r) <= tol));
                }
            }
        }
        for &a in &[0.3, 0.75, 1.0, 1.9, 2.1, 3.0] {
            for &h in &[0.05, 0.5, 1.0, 2.0] {
                let k = make_kite(KiteParams { a, h }).unwrap();
                let c = Point::new(0.0, 0.0);
                let axis = AxisLine::new(c, Point::new(1.0, 0.0));
                let tol = 1e-12 * k.diameter();
                for v in &k.vertices {
                    let r = axis.reflect(*v);
                    assert!(k.vertices.iter().any(|w| w.dist(r) <= tol));
                }
            }
        }
        // Parallelogram: rotation by pi about the center maps vertices onto vertices.
        for &(b, s, ang) in &[(1.0, 0.5, 0.8), (2.0, 1.0, 1.2), (1.5, 1.5, 0.9)] {
            let p = make_parallelogram(b, s, ang).unwrap();
            let c = match p.symmetry.unwrap() {
                Symmetry::Center(c) => c,
                _ => unreachable!(),
            };
            let tol = 1e-12 * p.diameter();
            for v in &p.vertices {
                let r = Point::new(2.0 * c.x - v.x, 2.0 * c.y - v.y);
                assert!(p.vertices.iter().any(|w| w.dist(r) <= tol));
            }
        }
    }

    #[test]
    fn rhombus_axis_declaration() {
        let r = make_parallelogram(1.0, 1.0, (4.0f64 / 3.0).atan()).unwrap();
        let long = r
            .clone()
            .with_axis(Point::new(0.0, 0.0), Point::new(1.6, 0.8))
            .unwrap();
        assert!(matches!(long.symmetry, Some(Symmetry::Axis(_))));
        let short = r
            .clone()
            .with_axis(Point::new(1.0, 0.0), Point::new(0.6, 0.8))
            .unwrap();
        let half = half_domain(&short).unwrap();
        assert!((half.area() - 0.5 * r.area()).abs() <= 1e-12 * r.area());
        // A non-symmetry line is rejected.
        assert!(r
            .clone()
            .with_axis(Point::new(0.0, 0.0), Point::new(1.0, 0.0))
            .is_err());
    }

    #[test]
    fn json_round_trip() {
        let q = make_kite(KiteParams { a: 2.1, h: 0.65 }).unwrap();
        let s = q.to_json().unwrap();
        assert!(s.contains("\"family\""));
        assert!(s.contains("kite"));
        let back = Polygon::from_json(&s).unwrap();
        let tol = 1e-15 * q.diameter();
        for (a, b) in q.vertices.iter().zip(&back.vertices) {
            assert!(a.dist(*b) <= tol);
        }
        assert_eq!(q.edge_markers, back.edge_markers);
    }

    #[test]
    fn self_intersecting_rejected() {
        let bow = Polygon::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
            ],
            vec![EdgeMarker::Neumann; 4],
            None,
        );
        assert!(bow.is_err());
    }
}
