use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// How self-interaction entries of a singular kernel are treated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagonalPolicy {
    /// Kernel is bounded; entries used as evaluated.
    Regular,
    /// Radial reduction integrates the kernel exactly over each shell, so
    /// the diagonal carries the integrable singularity analytically.
    ExactShell,
    /// Diagonal entries replaced by the mean of the singular model over a
    /// cap of the node's area.
    CapAverage { description: String },
}

/// Dense discretization of `Tf(x_i) = sum_j K(x_i, y_j) f(y_j) w_j`.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    rows: usize,
    cols: usize,
    matrix: Vec<Complex64>,
    in_weights: Vec<f64>,
    out_weights: Vec<f64>,
    pub label: String,
    pub diagonal: DiagonalPolicy,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorDescriptor {
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub diagonal: DiagonalPolicy,
}

impl DiscretizedOperator {
    /// Builds the matrix in parallel over rows.
    pub fn from_kernel<F>(in_weights: Vec<f64>, out_weights: Vec<f64>, kernel: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Complex64 + Sync,
    {
        let (rows, cols) = (out_weights.len(), in_weights.len());
        if rows == 0 || cols == 0 {
            return Err(Error::Degenerate("operator with empty grid".into()));
        }
        if in_weights.iter().chain(&out_weights).any(|&w| !(w > 0.0)) {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        let matrix: Vec<Complex64> =
            (0..rows).into_par_iter().flat_map_iter(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| kernel(i, j)).collect();
        Ok(Self { rows, cols, matrix, in_weights, out_weights, label: String::new(), diagonal: DiagonalPolicy::Regular })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_diagonal(mut self, policy: DiagonalPolicy) -> Self {
        self.diagonal = policy;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn in_weights(&self) -> &[f64] {
        &self.in_weights
    }

    pub fn out_weights(&self) -> &[f64] {
        &self.out_weights
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.cols + j]
    }

    pub fn descriptor(&self) -> OperatorDescriptor {
        OperatorDescriptor { label: self.label.clone(), rows: self.rows, cols: self.cols, diagonal: self.diagonal.clone() }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.cols);
        let wf: Vec<Complex64> = f.iter().zip(&self.in_weights).map(|(v, w)| v * w).collect();
        self.matrix
            .par_chunks(self.cols)
            .map(|row| row.iter().zip(&wf).map(|(k, v)| k * v).sum())
            .collect()
    }

    /// Adjoint for the weighted pairings on both sides.
    pub fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(g.len(), self.rows);
        let wg: Vec<Complex64> = g.iter().zip(&self.out_weights).map(|(v, w)| v * w).collect();
        (0..self.cols)
            .into_par_iter()
            .map(|j| (0..self.rows).map(|i| self.matrix[i * self.cols + j].conj() * wg[i]).sum())
            .collect()
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(mut self, c: f64) -> Self {
        self.matrix.iter_mut().for_each(|v| *v *= c);
        self
    }
}
