//! Perron eigendata and topological entropy of an irreducible edge shift.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

const TOLERANCE: f64 = 1e-14;
const MAX_ITERATIONS: usize = 100_000;

/// Spectral radius and positive eigenvectors of an irreducible adjacency
/// matrix.
///
/// `right` sums to one and `left` is scaled so that `left . right = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

impl PerronData {
    /// Computes the eigendata of `g` by power iteration.
    ///
    /// For a graph of period `I` the iteration runs on `A^I` restricted to
    /// the first cyclic class (a primitive block) and the vectors are then
    /// carried to the remaining classes through `A`.
    pub fn compute(g: &Graph) -> Result<PerronData> {
        let decomp = g.structure_analysis();
        if !decomp.irreducible {
            return Err(Error::Reducible);
        }
        let period = decomp.period().expect("irreducible");
        let n = g.vertex_count();
        let adjacency = g.adjacency().to_f64_rows();
        let block_members = decomp.class(0);
        let block_full = g.adjacency_power(period as u64).to_f64_rows();
        let block: Vec<Vec<f64>> = block_members
            .iter()
            .map(|&i| block_members.iter().map(|&j| block_full[i][j]).collect())
            .collect();

        let (block_lambda, block_right) = power_iterate(&block)?;
        let (_, block_left) = power_iterate(&transpose(&block))?;
        let lambda = block_lambda.powf(1.0 / period as f64);

        let classes = decomp.classes().expect("irreducible");
        let mut right = vec![0.0; n];
        let mut left = vec![0.0; n];
        for (k, &v) in block_members.iter().enumerate() {
            right[v] = block_right[k];
            left[v] = block_left[k];
        }
        // A r = lambda r, read backwards around the cycle of classes.
        for t in (1..period).rev() {
            let next = &classes[(t + 1) % period];
            for &v in &classes[t] {
                right[v] = next
                    .iter()
                    .map(|&w| adjacency[v][w] * right[w])
                    .sum::<f64>()
                    / lambda;
            }
        }
        // l A = lambda l, read forwards.
        for t in 1..period {
            let prev = &classes[t - 1];
            for &w in &classes[t] {
                left[w] = prev.iter().map(|&v| left[v] * adjacency[v][w]).sum::<f64>() / lambda;
            }
        }

        let total: f64 = right.iter().sum();
        right.iter_mut().for_each(|x| *x /= total);
        let dot: f64 = left.iter().zip(&right).map(|(l, r)| l * r).sum();
        left.iter_mut().for_each(|x| *x /= dot);
        Ok(PerronData {
            lambda,
            right,
            left,
        })
    }

    /// `log lambda`, the topological entropy.
    pub fn entropy(&self) -> f64 {
        self.lambda.ln()
    }

    /// `lambda^(-p)`.
    pub fn lambda_inv_pow(&self, p: i64) -> f64 {
        self.lambda.powi(-(p as i32))
    }

    /// The limit matrix `u_r u_l` of `lambda^-n A^n` (primitive case).
    pub fn projection(&self) -> Vec<Vec<f64>> {
        self.right
            .iter()
            .map(|r| self.left.iter().map(|l| r * l).collect())
            .collect()
    }

    /// Scales `right` by `c` and `left` by `1/c`.
    pub fn rescaled(&self, c: f64) -> PerronData {
        PerronData {
            lambda: self.lambda,
            right: self.right.iter().map(|x| x * c).collect(),
            left: self.left.iter().map(|x| x / c).collect(),
        }
    }

    pub fn right_at(&self, v: VertexId) -> f64 {
        self.right[v]
    }

    pub fn left_at(&self, v: VertexId) -> f64 {
        self.left[v]
    }
}

/// Natural-log entropy of an irreducible graph.
pub fn entropy(g: &Graph) -> Result<f64> {
    Ok(PerronData::compute(g)?.entropy())
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

/// Power iteration with sum normalization. Returns the eigenvalue and the
/// sum-normalized eigenvector.
fn power_iterate(m: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..MAX_ITERATIONS {
        let mut w: Vec<f64> = m
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, x)| a * x).sum())
            .collect();
        let s: f64 = w.iter().sum();
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::NoConvergence(MAX_ITERATIONS));
        }
        w.iter_mut().for_each(|x| *x /= s);
        let diff = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = w;
        if diff < TOLERANCE {
            let mv: f64 = m
                .iter()
                .map(|row| row.iter().zip(&v).map(|(a, x)| a * x).sum::<f64>())
                .sum();
            return Ok((mv / v.iter().sum::<f64>(), v));
        }
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}
