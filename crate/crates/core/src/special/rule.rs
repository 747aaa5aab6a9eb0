use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::Real;

/// What the node coordinates of a rule mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    /// Scalars in `[-1, 1]`.
    Interval,
    /// Unit vectors in `R^{n+1}`.
    Sphere,
    /// `(radius, unit direction in R^n)` on a geodesic ball.
    Ball,
}

/// Points with positive weights approximating integration against a
/// volume element.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    kind: RuleKind,
    dim: usize,
    coords: Vec<T>,
    weights: Vec<T>,
    measure: T,
}

impl<T: Real> QuadratureRule<T> {
    pub(crate) fn from_parts(kind: RuleKind, dim: usize, coords: Vec<T>, weights: Vec<T>, measure: T) -> Self {
        debug_assert_eq!(coords.len(), dim * weights.len());
        Self { kind, dim, coords, weights, measure }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Number of coordinates stored per node.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks(self.dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Closed-form measure of the domain the rule discretizes.
    pub fn measure(&self) -> T {
        self.measure
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    pub fn integrate<F: Fn(&[T]) -> T>(&self, f: F) -> T {
        self.nodes()
            .zip(self.weights.iter())
            .fold(T::zero(), |acc, (x, &w)| acc + w * f(x))
    }

    /// One node per row: coordinates followed by the weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        let _ = writeln!(out, "{},weight", header.join(","));
        for (x, w) in self.nodes().zip(self.weights.iter()) {
            let row: Vec<String> = x.iter().map(|v| format!("{:.17e}", v.to_f64_lossy())).collect();
            let _ = writeln!(out, "{},{:.17e}", row.join(","), w.to_f64_lossy());
        }
        out
    }
}
