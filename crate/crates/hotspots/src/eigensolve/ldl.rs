//! Sparse LDLᵀ factorization (up-looking, elimination-tree based) for the
//! shifted pencil K + σM. No pivoting: callers guarantee positive
//! definiteness and retry with a larger shift on a nonpositive pivot.

use crate::discretization::SparseSym;
use crate::{Error, Result};

pub struct LdlFactor {
    n: usize,
    /// perm[new] = old
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<u32>,
    lx: Vec<f64>,
    d: Vec<f64>,
    scratch: std::cell::RefCell<Vec<f64>>,
}

/// Rows of the permuted upper triangle: for each new index j, the entries
/// (i, aij) with i <= j in the new ordering.
fn permuted_upper(a: &SparseSym, perm: &[usize], iperm: &[usize]) -> (Vec<usize>, Vec<u32>, Vec<f64>) {
    let n = a.n;
    let mut counts = vec![0usize; n];
    for jnew in 0..n {
        let jold = perm[jnew];
        for k in a.row_ptr[jold]..a.row_ptr[jold + 1] {
            let inew = iperm[a.col_idx[k]];
            if inew <= jnew {
                counts[jnew] += 1;
            }
        }
    }
    let mut ptr = vec![0usize; n + 1];
    for j in 0..n {
        ptr[j + 1] = ptr[j] + counts[j];
    }
    let mut idx = vec![0u32; ptr[n]];
    let mut val = vec![0f64; ptr[n]];
    let mut next = ptr.clone();
    for jnew in 0..n {
        let jold = perm[jnew];
        for k in a.row_ptr[jold]..a.row_ptr[jold + 1] {
            let inew = iperm[a.col_idx[k]];
            if inew <= jnew {
                idx[next[jnew]] = inew as u32;
                val[next[jnew]] = a.values[k];
                next[jnew] += 1;
            }
        }
    }
    (ptr, idx, val)
}

/// Factorize `a` with the given fill-reducing permutation.
pub fn factorize(a: &SparseSym, perm: Vec<usize>) -> Result<LdlFactor> {
    let n = a.n;
    let mut iperm = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        iperm[old] = new;
    }
    let (up, ui, ux) = permuted_upper(a, &perm, &iperm);

    // Symbolic: elimination tree and column counts of L.
    let none = usize::MAX;
    let mut parent = vec![none; n];
    let mut flag = vec![none; n];
    let mut lnz = vec![0usize; n];
    for j in 0..n {
        flag[j] = j;
        for p in up[j]..up[j + 1] {
            let mut k = ui[p] as usize;
            if k >= j {
                continue;
            }
            while flag[k] != j {
                if parent[k] == none {
                    parent[k] = j;
                }
                lnz[k] += 1;
                flag[k] = j;
                k = parent[k];
            }
        }
    }
    let mut lp = vec![0usize; n + 1];
    for j in 0..n {
        lp[j + 1] = lp[j] + lnz[j];
    }
    let nnz = lp[n];
    let mut li = vec![0u32; nnz];
    let mut lx = vec![0f64; nnz];
    let mut d = vec![0f64; n];

    // Numeric: up-looking rows with a sparse triangular solve per row.
    let mut y = vec![0f64; n];
    let mut pattern = vec![0usize; n];
    let mut lnext = lp.clone();
    let mut flag = vec![none; n];
    for j in 0..n {
        let mut top = n;
        flag[j] = j;
        y[j] = 0.0;
        for p in up[j]..up[j + 1] {
            let i = ui[p] as usize;
            if i > j {
                continue;
            }
            y[i] += ux[p];
            // Walk to the subtree root collecting the new part of the path.
            let mut len = 0usize;
            let mut k = i;
            while flag[k] != j {
                pattern[len] = k;
                len += 1;
                flag[k] = j;
                k = parent[k];
            }
            // Prepend (reversed) so pattern[top..n] is topological.
            while len > 0 {
                len -= 1;
                top -= 1;
                pattern[top] = pattern[len];
            }
        }
        let mut dj = y[j];
        y[j] = 0.0;
        for t in top..n {
            let k = pattern[t];
            let yk = y[k];
            y[k] = 0.0;
            let ljk = yk / d[k];
            for q in lp[k]..lnext[k] {
                y[li[q] as usize] -= lx[q] * yk;
            }
            dj -= ljk * yk;
            li[lnext[k]] = j as u32;
            lx[lnext[k]] = ljk;
            lnext[k] += 1;
        }
        if !(dj > 0.0) || !dj.is_finite() {
            return Err(Error::NonConvergence(format!(
                "nonpositive pivot {dj:e} at column {j}; shifted matrix not positive definite"
            )));
        }
        d[j] = dj;
    }

    Ok(LdlFactor {
        n,
        perm,
        lp,
        li,
        lx,
        d,
        scratch: std::cell::RefCell::new(vec![0.0; n]),
    })
}

impl LdlFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fill(&self) -> usize {
        self.lx.len()
    }

    /// Solve A x = b in place (b in original index order).
    pub fn solve_in_place(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.n);
        let mut x = self.scratch.borrow_mut();
        for jnew in 0..self.n {
            x[jnew] = b[self.perm[jnew]];
        }
        // L z = b
        for j in 0..self.n {
            let xj = x[j];
            if xj != 0.0 {
                for p in self.lp[j]..self.lp[j + 1] {
                    x[self.li[p] as usize] -= self.lx[p] * xj;
                }
            }
        }
        for j in 0..self.n {
            x[j] /= self.d[j];
        }
        // Lᵀ x = z
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for p in self.lp[j]..self.lp[j + 1] {
                s -= self.lx[p] * x[self.li[p] as usize];
            }
            x[j] = s;
        }
        for jnew in 0..self.n {
            b[self.perm[jnew]] = x[jnew];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::assemble;
    use crate::eigensolve::ordering::dissection_order;
    use crate::geometry::{make_kite, KiteParams};
    use crate::meshing::triangulate;

    /// Shifted FEM matrix solves reproduce the identity A·(A⁻¹b) = b.
    #[test]
    fn solve_matches_matvec() {
        let kite = make_kite(KiteParams { a: 0.75, h: 0.5 }).unwrap();
        let mesh = triangulate(&kite, 0.08).unwrap();
        let pencil = assemble(&mesh).unwrap();
        let n = pencil.k.n;
        let mut a = pencil.k.clone();
        for (v, m) in a.values.iter_mut().zip(&pencil.m.values) {
            *v += 2.5 * m;
        }
        let perm = dissection_order(&a);
        let f = factorize(&a, perm).unwrap();
        // Deterministic pseudo-random RHS.
        let mut state = 0x9e3779b97f4a7c15u64;
        let b: Vec<f64> = (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let mut x = b.clone();
        f.solve_in_place(&mut x);
        let mut ax = vec![0.0; n];
        a.mul_vec(&x, &mut ax);
        let err: f64 = ax
            .iter()
            .zip(&b)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
        let bnorm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err <= 1e-11 * bnorm, "relative residual {}", err / bnorm);
    }

    /// A singular matrix (pure Neumann stiffness) is rejected.
    #[test]
    fn singular_matrix_rejected() {
        let kite = make_kite(KiteParams { a: 0.75, h: 0.5 }).unwrap();
        let mesh = triangulate(&kite, 0.2).unwrap();
        let pencil = assemble(&mesh).unwrap();
        let perm = dissection_order(&pencil.k);
        assert!(factorize(&pencil.k, perm).is_err());
    }
}
