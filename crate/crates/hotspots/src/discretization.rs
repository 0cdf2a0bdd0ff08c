//! P1 finite-element assembly of the Laplace eigenproblem.
//!
//! Linear shape functions with exact integration: no quadrature error, so the
//! eigenvalue error is O(h²) on shape-regular families and Richardson
//! extrapolation downstream sees a clean rate. Neumann conditions are
//! natural; Dirichlet conditions are applied by eliminating rows and columns,
//! which keeps the pencil symmetric definite.

use crate::geometry::Point;
use crate::meshing::Mesh;
use crate::{Error, Result};

/// Symmetric sparse matrix in CSR layout storing the full pattern.
#[derive(Clone, Debug)]
pub struct SparseSym {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSym {
    /// Build from a sorted adjacency structure; values start at zero.
    fn from_pattern(n: usize, neighbors: &[Vec<usize>]) -> SparseSym {
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for row in neighbors {
            col_idx.extend_from_slice(row);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        SparseSym {
            n,
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
        }
    }

    /// Add `v` at (i, j); the entry must exist in the pattern.
    fn add(&mut self, i: usize, j: usize, v: f64) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        let k = self.col_idx[lo..hi]
            .binary_search(&j)
            .expect("entry must be in the assembly pattern");
        self.values[lo + k] += v;
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = s;
        }
    }

    /// xᵀ A y.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row += self.values[k] * y[self.col_idx[k]];
            }
            s += x[i] * row;
        }
        s
    }

    /// Extract the principal submatrix on `keep` (sorted node indices).
    fn submatrix(&self, keep: &[usize]) -> SparseSym {
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut row_ptr = Vec::with_capacity(keep.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &old_i in keep {
            for k in self.row_ptr[old_i]..self.row_ptr[old_i + 1] {
                let new_j = new_of_old[self.col_idx[k]];
                if new_j != usize::MAX {
                    col_idx.push(new_j);
                    values.push(self.values[k]);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseSym {
            n: keep.len(),
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Coordinate-format text dump `row col value`, one entry per line.
    pub fn dump_coo(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                writeln!(s, "{} {} {:.17e}", i, self.col_idx[k], self.values[k]).unwrap();
            }
        }
        s
    }
}

/// Mesh-node ↔ degree-of-freedom correspondence. Dirichlet nodes have no dof.
#[derive(Clone, Debug)]
pub struct DofMap {
    /// For each dof, the mesh node it represents.
    pub node_of_dof: Vec<usize>,
    /// For each mesh node, its dof index if present.
    pub dof_of_node: Vec<Option<usize>>,
}

impl DofMap {
    fn identity(n: usize) -> DofMap {
        DofMap {
            node_of_dof: (0..n).collect(),
            dof_of_node: (0..n).map(Some).collect(),
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.node_of_dof.len()
    }

    /// Scatter a dof vector to mesh nodes, zero on eliminated nodes.
    pub fn scatter(&self, dofs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dof_of_node.len()];
        for (d, &n) in self.node_of_dof.iter().enumerate() {
            out[n] = dofs[d];
        }
        out
    }
}

/// Stiffness/mass pair for the generalized eigenproblem K x = μ M x.
#[derive(Clone, Debug)]
pub struct SparsePencil {
    pub k: SparseSym,
    pub m: SparseSym,
    pub dof_map: DofMap,
}

/// Element stiffness and mass for a triangle with vertices `p`.
///
/// Stiffness entries are (bᵢbⱼ + cᵢcⱼ)/(4A) with b, c the usual shape
/// gradients; mass is (A/12)·[[2,1,1],[1,2,1],[1,1,2]]. Both exact.
pub fn element_matrices(p: [Point; 3]) -> Result<([[f64; 3]; 3], [[f64; 3]; 3])> {
    let area = 0.5 * p[1].sub(p[0]).cross(p[2].sub(p[0]));
    if !(area > 0.0) {
        return Err(Error::DegenerateTriangle { index: 0, area });
    }
    let b = [p[1].y - p[2].y, p[2].y - p[0].y, p[0].y - p[1].y];
    let c = [p[2].x - p[1].x, p[0].x - p[2].x, p[1].x - p[0].x];
    let mut ke = [[0.0; 3]; 3];
    let mut me = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ke[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
            me[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    Ok((ke, me))
}

/// Assemble the P1 pencil over all mesh nodes (no boundary conditions; the
/// Neumann condition is natural). Element contributions accumulate in
/// deterministic element order, so the result is bit-stable run to run.
pub fn assemble(mesh: &Mesh) -> Result<SparsePencil> {
    let n = mesh.n_nodes();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in &mesh.triangles {
        for &i in t {
            for &j in t {
                neighbors[i].push(j);
            }
        }
    }
    for row in &mut neighbors {
        row.sort_unstable();
        row.dedup();
    }
    let mut k = SparseSym::from_pattern(n, &neighbors);
    let mut m = SparseSym::from_pattern(n, &neighbors);
    for (idx, t) in mesh.triangles.iter().enumerate() {
        let pts = mesh.triangle_points(idx);
        let (ke, me) = element_matrices(pts).map_err(|e| match e {
            Error::DegenerateTriangle { area, .. } => Error::DegenerateTriangle { index: idx, area },
            other => other,
        })?;
        for a in 0..3 {
            for b in 0..3 {
                k.add(t[a], t[b], ke[a][b]);
                m.add(t[a], t[b], me[a][b]);
            }
        }
    }
    Ok(SparsePencil {
        k,
        m,
        dof_map: DofMap::identity(n),
    })
}

/// Remove the rows and columns of `nodes` (mesh node indices) from the
/// pencil. The resulting stiffness is positive definite.
pub fn apply_dirichlet(pencil: &SparsePencil, nodes: &[usize]) -> Result<SparsePencil> {
    let n_nodes = pencil.dof_map.dof_of_node.len();
    let mut eliminate = vec![false; n_nodes];
    for &node in nodes {
        if node >= n_nodes {
            return Err(Error::SizeMismatch {
                expected: n_nodes,
                got: node,
            });
        }
        eliminate[node] = true;
    }
    // Keep list in dof order.
    let mut keep_dofs = Vec::new();
    let mut node_of_dof = Vec::new();
    for (d, &node) in pencil.dof_map.node_of_dof.iter().enumerate() {
        if !eliminate[node] {
            keep_dofs.push(d);
            node_of_dof.push(node);
        }
    }
    if keep_dofs.is_empty() {
        return Err(Error::EmptySystem);
    }
    let mut dof_of_node = vec![None; n_nodes];
    for (new_d, &node) in node_of_dof.iter().enumerate() {
        dof_of_node[node] = Some(new_d);
    }
    Ok(SparsePencil {
        k: pencil.k.submatrix(&keep_dofs),
        m: pencil.m.submatrix(&keep_dofs),
        dof_map: DofMap {
            node_of_dof,
            dof_of_node,
        },
    })
}

/// Piecewise-constant gradient of the P1 interpolant of nodal values
/// `coeffs`, one 2-vector per triangle.
pub fn gradient_field(mesh: &Mesh, coeffs: &[f64]) -> Result<Vec<[f64; 2]>> {
    if coeffs.len() != mesh.n_nodes() {
        return Err(Error::SizeMismatch {
            expected: mesh.n_nodes(),
            got: coeffs.len(),
        });
    }
    let mut grads = Vec::with_capacity(mesh.n_triangles());
    for (idx, t) in mesh.triangles.iter().enumerate() {
        let p = mesh.triangle_points(idx);
        let area2 = p[1].sub(p[0]).cross(p[2].sub(p[0]));
        let b = [p[1].y - p[2].y, p[2].y - p[0].y, p[0].y - p[1].y];
        let c = [p[2].x - p[1].x, p[0].x - p[2].x, p[1].x - p[0].x];
        let mut gx = 0.0;
        let mut gy = 0.0;
        for i in 0..3 {
            gx += coeffs[t[i]] * b[i] / area2;
            gy += coeffs[t[i]] * c[i] / area2;
        }
        grads.push([gx, gy]);
    }
    Ok(grads)
}
