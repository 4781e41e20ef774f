//! Hermitian eigensolver that splits the matrix into its connected blocks.
//!
//! Partial transposes of Bell-diagonal states couple each basis state to at
//! most one partner, so the nonzero pattern falls apart into tiny blocks.
//! Each block is handed to nalgebra's self-adjoint decomposition; blocks with
//! no imaginary part go through the real solver.

use nalgebra::{linalg::SymmetricEigen, DMatrix};
use num_complex::Complex64;

use super::DenseHermitian;
use crate::error::{Error, Result};

/// One connected block: its basis indices, eigenvalues and eigenvectors
/// (column `k` of `vectors` belongs to `values[k]`, indexed like `indices`).
#[derive(Debug, Clone)]
pub struct EigenBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the nonzero pattern, each sorted ascending.
pub(crate) fn components(m: &DenseHermitian) -> Vec<Vec<usize>> {
    let d = m.dim();
    let mut parent: Vec<usize> = (0..d).collect();
    for r in 0..d {
        let row = m.row(r);
        for (c, z) in row.iter().enumerate().skip(r + 1) {
            if z.re != 0.0 || z.im != 0.0 {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); d];
    for i in 0..d {
        let root = find(&mut parent, i);
        groups[root].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn solve_block(m: &DenseHermitian, indices: Vec<usize>) -> Result<EigenBlock> {
    let k = indices.len();
    if k == 1 {
        let i = indices[0];
        return Ok(EigenBlock {
            values: vec![m.get(i, i).re],
            vectors: DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
            indices,
        });
    }
    let real = indices
        .iter()
        .all(|&r| indices.iter().all(|&c| m.get(r, c).im == 0.0));
    let max_iter = 1000 * k;
    if real {
        let sub = DMatrix::from_fn(k, k, |a, b| m.get(indices[a], indices[b]).re);
        let eig = SymmetricEigen::try_new(sub, f64::EPSILON, max_iter).ok_or(
            Error::EigenNoConvergence {
                dim: m.dim(),
                block_dim: k,
            },
        )?;
        Ok(EigenBlock {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
            indices,
        })
    } else {
        let sub = DMatrix::from_fn(k, k, |a, b| m.get(indices[a], indices[b]));
        let eig = SymmetricEigen::try_new(sub, f64::EPSILON, max_iter).ok_or(
            Error::EigenNoConvergence {
                dim: m.dim(),
                block_dim: k,
            },
        )?;
        Ok(EigenBlock {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
            indices,
        })
    }
}

/// Full block eigendecomposition.
pub fn eigen_blocks(m: &DenseHermitian) -> Result<Vec<EigenBlock>> {
    components(m)
        .into_iter()
        .map(|idx| solve_block(m, idx))
        .collect()
}

/// All eigenvalues, ascending.
pub fn eigenvalues(m: &DenseHermitian) -> Result<Vec<f64>> {
    let mut vals: Vec<f64> = eigen_blocks(m)?
        .into_iter()
        .flat_map(|b| b.values)
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Minimum eigenvalue with a unit eigenvector embedded in the full space.
pub fn min_eigenpair(m: &DenseHermitian) -> Result<(f64, Vec<Complex64>)> {
    let blocks = eigen_blocks(m)?;
    let mut best: Option<(f64, usize, usize)> = None;
    for (bi, b) in blocks.iter().enumerate() {
        for (k, &v) in b.values.iter().enumerate() {
            if best.is_none_or(|(bv, _, _)| v < bv) {
                best = Some((v, bi, k));
            }
        }
    }
    let (value, bi, k) = best.ok_or_else(|| Error::InvalidState("empty matrix".into()))?;
    let block = &blocks[bi];
    let mut vec = vec![Complex64::new(0.0, 0.0); m.dim()];
    for (a, &i) in block.indices.iter().enumerate() {
        vec[i] = block.vectors[(a, k)];
    }
    Ok((value, vec))
}

/// Squared norm of the projection of `v` onto the eigenspace whose
/// eigenvalues lie within `tol` of `target`.
pub fn eigenspace_overlap(
    m: &DenseHermitian,
    target: f64,
    tol: f64,
    v: &[Complex64],
) -> Result<f64> {
    let mut total = 0.0;
    for b in eigen_blocks(m)? {
        for (k, &val) in b.values.iter().enumerate() {
            if (val - target).abs() <= tol {
                let mut amp = Complex64::new(0.0, 0.0);
                for (a, &i) in b.indices.iter().enumerate() {
                    amp += b.vectors[(a, k)].conj() * v[i];
                }
                total += amp.norm_sqr();
            }
        }
    }
    Ok(total)
}
