//! Conforming P1 triangulations of marked polygons with uniform red
//! refinement.
//!
//! The base triangulation is structural: symmetric polygons are meshed on
//! one half and mirrored so the full mesh is exactly symmetric, centrally
//! symmetric quadrilaterals are split along a diagonal through the center,
//! and convex polygons are fanned. Red refinement splits every triangle into
//! four via edge midpoints, so element shape (and the minimum angle) is
//! preserved across levels.

use crate::geometry::{half_domain, EdgeMarker, Point, Polygon, Symmetry};
use crate::{Error, Result};
use std::collections::HashMap;

/// Hard cap on mesh nodes; refining past this is a configuration error.
pub const MAX_NODES: usize = 3_000_000;

/// Per-node classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexFlag {
    Interior,
    Boundary,
    /// A node coinciding with a vertex of the source polygon.
    PolygonVertex,
}

/// Boundary edge with its inherited polygon marker.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub marker: EdgeMarker,
}

/// Conforming triangle mesh. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    /// Counterclockwise node-index triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub vertex_flags: Vec<VertexFlag>,
    /// Longest edge length.
    pub h_max: f64,
    /// Node permutation realizing the polygon's mirror symmetry, when the
    /// mesh was built by mirroring a half mesh. An exact involution.
    pub reflection: Option<Vec<usize>>,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * b.sub(a).cross(c.sub(a))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_area(t))
            .sum()
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for i in 0..3 {
                let u = p[(i + 1) % 3].sub(p[i]);
                let v = p[(i + 2) % 3].sub(p[i]);
                let ang = (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos();
                min = min.min(ang);
            }
        }
        min
    }

    /// Sorted, deduplicated node indices lying on boundary edges with the
    /// given marker.
    pub fn nodes_with_marker(&self, marker: EdgeMarker) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|e| e.marker == marker)
            .flat_map(|e| e.nodes)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Plain-text node/element export: a header line with counts, node
    /// coordinates, triangle index triples, then marked boundary edges.
    pub fn export_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        writeln!(
            s,
            "{} {} {}",
            self.nodes.len(),
            self.triangles.len(),
            self.boundary_edges.len()
        )
        .unwrap();
        for p in &self.nodes {
            writeln!(s, "{:.17e} {:.17e}", p.x, p.y).unwrap();
        }
        for t in &self.triangles {
            writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        for e in &self.boundary_edges {
            let m = match e.marker {
                EdgeMarker::Neumann => "neumann",
                EdgeMarker::Dirichlet => "dirichlet",
                EdgeMarker::Axis => "axis",
            };
            writeln!(s, "{} {} {}", e.nodes[0], e.nodes[1], m).unwrap();
        }
        s
    }

    fn recompute_h_max(&mut self) {
        let mut h: f64 = 0.0;
        for t in &self.triangles {
            for i in 0..3 {
                h = h.max(self.nodes[t[i]].dist(self.nodes[t[(i + 1) % 3]]));
            }
        }
        self.h_max = h;
    }
}

/// Split a convex polygon into triangles. Quadrilaterals are split along the
/// diagonal that maximizes the minimum interior angle; anything larger is
/// fanned from vertex 0 (families here never exceed 4 vertices).
fn fan_triangles(poly: &Polygon) -> Result<Vec<[usize; 3]>> {
    let n = poly.n_vertices();
    if !poly.is_convex() {
        return Err(Error::DegeneratePolygon(
            "direct triangulation requires a convex polygon".into(),
        ));
    }
    if n == 3 {
        return Ok(vec![[0, 1, 2]]);
    }
    if n == 4 {
        let v = &poly.vertices;
        let quality = |tris: &[[usize; 3]; 2]| {
            tris.iter()
                .map(|t| {
                    (0..3)
                        .map(|i| {
                            let u = v[t[(i + 1) % 3]].sub(v[t[i]]);
                            let w = v[t[(i + 2) % 3]].sub(v[t[i]]);
                            (u.dot(w) / (u.norm() * w.norm())).clamp(-1.0, 1.0).acos()
                        })
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(f64::INFINITY, f64::min)
        };
        let opt1 = [[0, 1, 2], [0, 2, 3]];
        let opt2 = [[1, 2, 3], [1, 3, 0]];
        return Ok(if quality(&opt1) >= quality(&opt2) {
            opt1.to_vec()
        } else {
            opt2.to_vec()
        });
    }
    Ok((1..n - 1).map(|i| [0, i, i + 1]).collect())
}

/// Base mesh before refinement.
fn base_mesh(poly: &Polygon) -> Result<(Vec<Point>, Vec<[usize; 3]>, Option<Vec<usize>>)> {
    match &poly.symmetry {
        Some(Symmetry::Axis(axis)) => {
            let half = half_domain(poly)?;
            let tris_half = fan_triangles(&half)?;
            let tol = 1e-9 * poly.diameter();
            let mut nodes = half.vertices.clone();
            let mut mirror = vec![usize::MAX; nodes.len()];
            for i in 0..half.vertices.len() {
                if axis.signed_side(nodes[i]).abs() <= tol {
                    mirror[i] = i;
                } else {
                    nodes.push(axis.reflect(nodes[i]));
                    mirror[i] = nodes.len() - 1;
                    mirror.push(i);
                }
            }
            let mut tris = tris_half.clone();
            for t in &tris_half {
                // Reflection reverses orientation; swap two nodes to restore it.
                tris.push([mirror[t[0]], mirror[t[2]], mirror[t[1]]]);
            }
            Ok((nodes, tris, Some(mirror)))
        }
        _ => {
            let tris = fan_triangles(poly)?;
            Ok((poly.vertices.clone(), tris, None))
        }
    }
}

/// Triangulate `poly` into a conforming mesh with `h_max <= target_h`.
///
/// Polygons with a declared mirror axis are meshed on the positive half and
/// mirrored, so the node set is exactly symmetric.
///
/// ```
/// use hotspots::geometry::{make_kite, KiteParams};
/// use hotspots::meshing::triangulate;
/// let kite = make_kite(KiteParams { a: 2.1, h: 0.65 })?;
/// let mesh = triangulate(&kite, 0.05)?;
/// assert!(mesh.h_max <= 0.05);
/// assert!((mesh.total_area() - 0.65).abs() < 1e-10);
/// # Ok::<(), hotspots::Error>(())
/// ```
pub fn triangulate(poly: &Polygon, target_h: f64) -> Result<Mesh> {
    if !(target_h > 0.0) {
        return Err(Error::InvalidParams(format!(
            "target_h must be positive, got {target_h}"
        )));
    }
    let (nodes, triangles, reflection) = base_mesh(poly)?;
    let mut mesh = finish_mesh(poly, nodes, triangles, reflection)?;
    while mesh.h_max > target_h {
        if mesh.nodes.len() * 4 > MAX_NODES {
            return Err(Error::RefinementCap {
                levels: 0,
                nodes: mesh.nodes.len(),
            });
        }
        mesh = refine(&mesh)?;
    }
    Ok(mesh)
}

fn finish_mesh(
    poly: &Polygon,
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    reflection: Option<Vec<usize>>,
) -> Result<Mesh> {
    // Orientation check.
    for (i, t) in triangles.iter().enumerate() {
        let area = 0.5
            * nodes[t[1]]
                .sub(nodes[t[0]])
                .cross(nodes[t[2]].sub(nodes[t[0]]));
        if !(area > 0.0) {
            return Err(Error::DegenerateTriangle { index: i, area });
        }
    }
    // Boundary edges: triangle edges owned by exactly one triangle.
    let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
    for t in &triangles {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            let key = (a.min(b), a.max(b));
            count.entry(key).or_insert((0, [a, b])).0 += 1;
        }
    }
    let tol = 1e-9 * poly.diameter();
    let mut boundary_raw: Vec<[usize; 2]> = count
        .values()
        .filter(|(c, _)| *c == 1)
        .map(|(_, e)| *e)
        .collect();
    boundary_raw.sort_unstable();
    let mut boundary_edges = Vec::with_capacity(boundary_raw.len());
    for e in boundary_raw {
        let mid = nodes[e[0]].mid(nodes[e[1]]);
        let marker = (0..poly.n_vertices())
            .find(|&j| {
                let (u, v) = poly.edge(j);
                point_segment_distance(mid, u, v) <= tol
            })
            .map(|j| poly.edge_markers[j])
            .ok_or_else(|| {
                Error::DegeneratePolygon("boundary edge not on any polygon edge".into())
            })?;
        boundary_edges.push(BoundaryEdge { nodes: e, marker });
    }
    let mut vertex_flags = vec![VertexFlag::Interior; nodes.len()];
    for e in &boundary_edges {
        for &n in &e.nodes {
            vertex_flags[n] = VertexFlag::Boundary;
        }
    }
    for (i, p) in nodes.iter().enumerate() {
        if poly.vertices.iter().any(|v| v.dist(*p) <= tol) {
            vertex_flags[i] = VertexFlag::PolygonVertex;
        }
    }
    let mut mesh = Mesh {
        nodes,
        triangles,
        boundary_edges,
        vertex_flags,
        h_max: 0.0,
        reflection,
    };
    mesh.recompute_h_max();
    Ok(mesh)
}

/// Uniform red refinement: each triangle splits into four via edge
/// midpoints; `h_max` halves and boundary markers are inherited.
pub fn refine(mesh: &Mesh) -> Result<Mesh> {
    let mut nodes = mesh.nodes.clone();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(mesh.triangles.len() * 4);
    for t in &mesh.triangles {
        let [a, b, c] = *t;
        let ab = mid_of(&mut nodes, &mut midpoint, a, b);
        let bc = mid_of(&mut nodes, &mut midpoint, b, c);
        let ca = mid_of(&mut nodes, &mut midpoint, c, a);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    let mut boundary_edges = Vec::with_capacity(mesh.boundary_edges.len() * 2);
    for e in &mesh.boundary_edges {
        let [a, b] = e.nodes;
        let m = *midpoint
            .get(&(a.min(b), a.max(b)))
            .expect("boundary edge must have been split");
        boundary_edges.push(BoundaryEdge {
            nodes: [a, m],
            marker: e.marker,
        });
        boundary_edges.push(BoundaryEdge {
            nodes: [m, b],
            marker: e.marker,
        });
    }
    let mut vertex_flags = mesh.vertex_flags.clone();
    vertex_flags.resize(nodes.len(), VertexFlag::Interior);
    for e in &boundary_edges {
        for &n in &e.nodes {
            if vertex_flags[n] == VertexFlag::Interior {
                vertex_flags[n] = VertexFlag::Boundary;
            }
        }
    }
    let reflection = match &mesh.reflection {
        Some(perm) => {
            let mut new_perm = perm.clone();
            new_perm.resize(nodes.len(), usize::MAX);
            for (&(a, b), &m) in &midpoint {
                let (pa, pb) = (perm[a], perm[b]);
                let key = (pa.min(pb), pa.max(pb));
                let pm = *midpoint
                    .get(&key)
                    .expect("mirror image of a refined edge must exist");
                new_perm[m] = pm;
            }
            Some(new_perm)
        }
        None => None,
    };
    let mut out = Mesh {
        nodes,
        triangles,
        boundary_edges,
        vertex_flags,
        h_max: 0.0,
        reflection,
    };
    out.recompute_h_max();
    Ok(out)
}

fn mid_of(
    nodes: &mut Vec<Point>,
    midpoint: &mut HashMap<(usize, usize), usize>,
    a: usize,
    b: usize,
) -> usize {
    let key = (a.min(b), a.max(b));
    *midpoint.entry(key).or_insert_with(|| {
        let m = nodes[a].mid(nodes[b]);
        nodes.push(m);
        nodes.len() - 1
    })
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        make_isosceles_trapezoid, make_kite, make_parallelogram, KiteParams, TrapezoidParams,
    };
    use std::collections::HashMap;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn check_conforming(mesh: &Mesh) {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &mesh.triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        let boundary: Vec<_> = count.iter().filter(|(_, c)| **c == 1).collect();
        assert!(count.values().all(|c| *c == 1 || *c == 2));
        assert_eq!(boundary.len(), mesh.boundary_edges.len());
    }

    #[test]
    fn unit_square_coarse() {
        let sq = make_parallelogram(1.0, 1.0, FRAC_PI_2).unwrap();
        let mesh = triangulate(&sq, 0.5).unwrap();
        assert!(mesh.n_triangles() >= 8);
        assert!((mesh.total_area() - 1.0).abs() <= 1e-12);
        assert!(mesh.h_max <= 0.5);
        check_conforming(&mesh);
    }

    #[test]
    fn dart_kite_area() {
        let kite = make_kite(KiteParams { a: 2.1, h: 0.65 }).unwrap();
        let mesh = triangulate(&kite, 0.05).unwrap();
        assert!((mesh.total_area() - 0.65).abs() <= 1e-10 * 0.65);
        check_conforming(&mesh);
    }

    #[test]
    fn mirrored_trapezoid_mesh_is_symmetric() {
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: 0.5,
        })
        .unwrap();
        let mesh = triangulate(&q, 0.1).unwrap();
        let perm = mesh.reflection.as_ref().expect("mirrored mesh");
        // Exact involution.
        for (i, &j) in perm.iter().enumerate() {
            assert_eq!(perm[j], i);
        }
        // Node set invariant under x -> -x, exactly.
        for (i, p) in mesh.nodes.iter().enumerate() {
            let q = mesh.nodes[perm[i]];
            assert_eq!(q.x, -p.x, "node {i}");
            assert_eq!(q.y, p.y, "node {i}");
        }
        check_conforming(&mesh);
    }

    #[test]
    fn refinement_counts_and_h() {
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: 0.8,
        })
        .unwrap();
        let mesh = triangulate(&q, 1.0).unwrap();
        let t0 = mesh.n_triangles();
        let b0 = mesh.boundary_edges.len();
        let h0 = mesh.h_max;
        let area0 = mesh.total_area();
        let r1 = refine(&mesh).unwrap();
        assert_eq!(r1.n_triangles(), 4 * t0);
        assert_eq!(r1.boundary_edges.len(), 2 * b0);
        assert!((r1.h_max - 0.5 * h0).abs() <= 1e-12 * h0);
        let r2 = refine(&r1).unwrap();
        assert!((r2.h_max - 0.25 * h0).abs() <= 1e-12 * h0);
        assert!((r2.total_area() - area0).abs() <= 1e-12 * area0);
        check_conforming(&r2);
    }

    #[test]
    fn min_angle_preserved_by_refinement() {
        let kite = make_kite(KiteParams { a: 1.9, h: 0.3 }).unwrap();
        let m0 = triangulate(&kite, 2.0).unwrap();
        let a0 = m0.min_angle();
        let mut m = m0;
        for _ in 0..3 {
            m = refine(&m).unwrap();
            assert!((m.min_angle() - a0).abs() <= 1e-9);
        }
    }

    #[test]
    fn boundary_markers_inherited() {
        let q = make_isosceles_trapezoid(TrapezoidParams {
            alpha: FRAC_PI_3,
            h: 0.5,
        })
        .unwrap();
        let half = crate::geometry::half_domain(&q).unwrap();
        let mesh = triangulate(&half, 0.1).unwrap();
        let axis_nodes = mesh.nodes_with_marker(EdgeMarker::Axis);
        assert!(!axis_nodes.is_empty());
        // All axis nodes sit on x = 0.
        for &n in &axis_nodes {
            assert!(mesh.nodes[n].x.abs() <= 1e-12);
        }
        // Neumann edges cover the rest of the boundary.
        let neumann = mesh.nodes_with_marker(EdgeMarker::Neumann);
        assert!(neumann.len() > axis_nodes.len());
    }

    #[test]
    fn export_round_figures() {
        let kite = make_kite(KiteParams { a: 0.75, h: 0.5 }).unwrap();
        let mesh = triangulate(&kite, 0.5).unwrap();
        let text = mesh.export_text();
        let header: Vec<usize> = text
            .lines()
            .next()
            .unwrap()
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(
            header,
            vec![mesh.n_nodes(), mesh.n_triangles(), mesh.boundary_edges.len()]
        );
        assert_eq!(
            text.lines().count(),
            1 + mesh.n_nodes() + mesh.n_triangles() + mesh.boundary_edges.len()
        );
    }

    #[test]
    fn rejects_bad_target() {
        let kite = make_kite(KiteParams { a: 0.75, h: 0.5 }).unwrap();
        assert!(triangulate(&kite, 0.0).is_err());
        assert!(triangulate(&kite, -1.0).is_err());
    }
}
