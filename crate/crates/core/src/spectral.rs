//! Adjacency spectra, quotient matrices and equitable partitions.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("matrix must have order at least 1")]
    EmptyMatrix,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("eigenvalue index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NotConverged(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("expected a 2x2 quotient matrix, got order {0}")]
    NotTwoByTwo(usize),
    #[error("quotient matrix has complex eigenvalues")]
    ComplexEigenvalues,
}

/// Dense symmetric matrix. Construction mirrors the upper triangle, so
/// `m[(i, j)] == m[(j, i)]` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from `f(i, j)` evaluated on `i <= j`.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; order * order];
        for i in 0..order {
            for j in i..order {
                let x = f(i, j);
                data[i * order + j] = x;
                data[j * order + i] = x;
            }
        }
        Self { order, data }
    }

    /// Builds from rows, using only the upper triangle.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }
}

pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    SymMatrix::from_fn(g.order(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

/// Eigenvalues in nonincreasing order, with the tolerance they were computed at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `k`-th largest eigenvalue, 1-based.
    pub fn lambda(&self, k: usize) -> Result<f64, SpectralError> {
        if k == 0 || k > self.values.len() {
            return Err(SpectralError::IndexOutOfRange { k, n: self.values.len() });
        }
        Ok(self.values[k - 1])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }
}

fn off_diagonal_norm(a: &[f64], s: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..s {
        for j in i + 1..s {
            acc += 2.0 * a[i * s + j] * a[i * s + j];
        }
    }
    acc.sqrt()
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Each sweep visits the strict upper triangle row by row and annihilates
/// every entry with a plane rotation. Iteration stops once the off-diagonal
/// Frobenius norm is below `tol * (1 + ||diag||)`.
pub fn eigenvalues_sym(m: &SymMatrix, tol: f64) -> Result<Spectrum, SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::BadTolerance(tol));
    }
    let s = m.order;
    if s == 0 {
        return Err(SpectralError::EmptyMatrix);
    }
    if let Some(idx) = m.data.iter().position(|x| !x.is_finite()) {
        return Err(SpectralError::NonFinite(idx / s, idx % s));
    }

    let mut a = m.data.clone();
    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let diag_norm = (0..s).map(|i| a[i * s + i] * a[i * s + i]).sum::<f64>().sqrt();
        if off_diagonal_norm(&a, s) < tol * (1.0 + diag_norm) {
            converged = true;
            break;
        }
        for p in 0..s {
            for q in p + 1..s {
                let apq = a[p * s + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * s + p];
                let aqq = a[q * s + q];
                // t = tan(phi), smaller root of t^2 + 2 theta t - 1 = 0
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..s {
                    let akp = a[k * s + p];
                    let akq = a[k * s + q];
                    a[k * s + p] = c * akp - sn * akq;
                    a[k * s + q] = sn * akp + c * akq;
                }
                for k in 0..s {
                    let apk = a[p * s + k];
                    let aqk = a[q * s + k];
                    a[p * s + k] = c * apk - sn * aqk;
                    a[q * s + k] = sn * apk + c * aqk;
                }
                a[p * s + q] = 0.0;
                a[q * s + p] = 0.0;
            }
        }
    }
    if !converged {
        return Err(SpectralError::NotConverged(MAX_SWEEPS));
    }
    let mut values: Vec<f64> = (0..s).map(|i| a[i * s + i]).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { values, tol })
}

/// Adjacency spectrum at the default tolerance. The empty graph on zero
/// vertices has an empty spectrum.
pub fn spectrum(g: &Graph) -> Result<Spectrum, SpectralError> {
    if g.order() == 0 {
        return Ok(Spectrum { values: Vec::new(), tol: DEFAULT_TOL });
    }
    eigenvalues_sym(&adjacency_matrix(g), DEFAULT_TOL)
}

/// `lambda_k(G)`, the `k`-th largest adjacency eigenvalue (1-based).
pub fn lambda_k(g: &Graph, k: usize) -> Result<f64, SpectralError> {
    if k == 0 || k > g.order() {
        return Err(SpectralError::IndexOutOfRange { k, n: g.order() });
    }
    spectrum(g)?.lambda(k)
}

/// Partition of `0..n` into nonempty disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    blocks: Vec<VertexSet>,
    block_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<VertexSet>) -> Result<Self, SpectralError> {
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(SpectralError::InvalidPartition(format!("block {b} is empty")));
            }
            for v in block.iter() {
                if v >= n {
                    return Err(SpectralError::InvalidPartition(format!("vertex {v} out of range")));
                }
                if block_of[v] != usize::MAX {
                    return Err(SpectralError::InvalidPartition(format!("vertex {v} in two blocks")));
                }
                block_of[v] = b;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(SpectralError::InvalidPartition(format!("vertex {v} not covered")));
        }
        Ok(Self { n, blocks, block_of })
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    /// Number of neighbors of `v` in each block.
    fn neighbor_profile(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut counts = vec![0; self.blocks.len()];
        for &w in g.neighbors(v) {
            counts[self.block_of[w]] += 1;
        }
        counts
    }

    fn check_graph(&self, g: &Graph) -> Result<(), SpectralError> {
        if g.order() != self.n {
            return Err(SpectralError::InvalidPartition(format!(
                "partition covers {} vertices, graph has {}",
                self.n,
                g.order()
            )));
        }
        Ok(())
    }
}

/// Square matrix of block-average neighbor counts. Not symmetric in general.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl QuotientMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let order = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().copied().take(order)).collect();
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        (0..self.order).map(|j| self.get(i, j)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.order.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// `det(xI - Q)` for a 2x2 matrix.
    pub fn char_poly_2x2_at(&self, x: f64) -> Result<f64, SpectralError> {
        if self.order != 2 {
            return Err(SpectralError::NotTwoByTwo(self.order));
        }
        Ok((x - self.get(0, 0)) * (x - self.get(1, 1)) - self.get(0, 1) * self.get(1, 0))
    }
}

pub fn quotient_matrix(g: &Graph, p: &VertexPartition) -> Result<QuotientMatrix, SpectralError> {
    p.check_graph(g)?;
    let s = p.len();
    let mut entries = vec![0.0; s * s];
    for (i, block) in p.blocks().iter().enumerate() {
        let mut totals = vec![0usize; s];
        for v in block.iter() {
            for (j, c) in p.neighbor_profile(g, v).into_iter().enumerate() {
                totals[j] += c;
            }
        }
        for (j, t) in totals.into_iter().enumerate() {
            entries[i * s + j] = t as f64 / block.len() as f64;
        }
    }
    Ok(QuotientMatrix { order: s, entries })
}

/// True iff each vertex of block `i` has the same number of neighbors in
/// block `j`, for every pair of blocks. Exact integer comparison.
pub fn is_equitable(g: &Graph, p: &VertexPartition) -> bool {
    if p.check_graph(g).is_err() {
        return false;
    }
    p.blocks().iter().all(|block| {
        let mut verts = block.iter();
        let first = verts.next().map(|v| p.neighbor_profile(g, v));
        verts.all(|v| Some(p.neighbor_profile(g, v)) == first)
    })
}

/// Both eigenvalues of a 2x2 quotient matrix from the quadratic formula,
/// larger first.
pub fn quotient_eigs_2x2(q: &QuotientMatrix) -> Result<(f64, f64), SpectralError> {
    if q.order != 2 {
        return Err(SpectralError::NotTwoByTwo(q.order));
    }
    let (a, b, c, d) = (q.get(0, 0), q.get(0, 1), q.get(1, 0), q.get(1, 1));
    // (a - d)^2 + 4bc equals tr^2 - 4 det without the cancellation
    let disc = (a - d) * (a - d) + 4.0 * b * c;
    if disc < 0.0 {
        return Err(SpectralError::ComplexEigenvalues);
    }
    let root = disc.sqrt();
    let half_trace = (a + d) / 2.0;
    Ok((half_trace + root / 2.0, half_trace - root / 2.0))
}
