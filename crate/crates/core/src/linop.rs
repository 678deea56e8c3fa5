//! Sparse linear operators between indexed bases.
//!
//! `LinOp<BigRational>` is the exact mode, `LinOp<f64>` the double mode.
//! Entries are kept in a `BTreeMap` so iteration order (and anything
//! serialized from it) is deterministic.

use crate::error::{Error, Result};
use crate::gt::{IrrepLabel, Weight};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};
use std::collections::BTreeMap;
use std::fmt;

/// Identifies the basis an operator acts on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisId(pub String);

impl BasisId {
    pub fn irrep(label: &IrrepLabel) -> Self {
        BasisId(format!("V{label}"))
    }

    pub fn weight_space(label: &IrrepLabel, w: &Weight) -> Self {
        BasisId(format!("V{label}_{w}"))
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinOp<S> {
    pub domain: BasisId,
    pub codomain: BasisId,
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), S>,
}

impl<S: Clone + Num> LinOp<S> {
    pub fn zeros(domain: BasisId, codomain: BasisId, rows: usize, cols: usize) -> Self {
        LinOp { domain, codomain, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(basis: BasisId, n: usize) -> Self {
        let mut op = LinOp::zeros(basis.clone(), basis, n, n);
        for i in 0..n {
            op.set(i, i, S::one());
        }
        op
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(S::zero)
    }

    /// Sets an entry; zeros are not stored.
    pub fn set(&mut self, row: usize, col: usize, v: S) {
        assert!(row < self.rows && col < self.cols, "entry ({row},{col}) out of range");
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: S) {
        let cur = self.get(row, col);
        self.set(row, col, cur + v);
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::BasisMismatch {
                left: format!("{} -> {}", self.domain, self.codomain),
                right: format!("{} -> {}", other.domain, other.codomain),
            });
        }
        Ok(())
    }

    /// `self ∘ rhs`; requires `rhs.codomain == self.domain`.
    pub fn compose(&self, rhs: &LinOp<S>) -> Result<LinOp<S>> {
        if rhs.codomain != self.domain || rhs.rows != self.cols {
            return Err(Error::BasisMismatch {
                left: self.domain.to_string(),
                right: rhs.codomain.to_string(),
            });
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &S)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = LinOp::zeros(rhs.domain.clone(), self.codomain.clone(), self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinOp<S>) -> Result<LinOp<S>> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LinOp<S>) -> Result<LinOp<S>> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, S::zero() - v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> LinOp<S> {
        let mut out = LinOp::zeros(self.domain.clone(), self.codomain.clone(), self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.clone() * s.clone());
        }
        out
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn commutator(&self, other: &LinOp<S>) -> Result<LinOp<S>> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn transpose(&self) -> LinOp<S> {
        let mut out = LinOp::zeros(self.codomain.clone(), self.domain.clone(), self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            out.set(c, r, v.clone());
        }
        out
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![S::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            y[r] = y[r].clone() + v.clone() * x[c].clone();
        }
        y
    }
}

impl LinOp<BigRational> {
    pub fn to_f64(&self) -> LinOp<f64> {
        let mut out = LinOp::zeros(self.domain.clone(), self.codomain.clone(), self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.to_f64().expect("rational out of f64 range"));
        }
        out
    }
}

impl LinOp<f64> {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m[(r, c)] = *v;
        }
        m
    }

    /// Entries with `|v| <= drop` are omitted.
    pub fn from_dense(domain: BasisId, codomain: BasisId, m: &DMatrix<f64>, drop: f64) -> Self {
        let mut op = LinOp::zeros(domain, codomain, m.nrows(), m.ncols());
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)].abs() > drop {
                    op.set(r, c, m[(r, c)]);
                }
            }
        }
        op
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |a, v| a.max(v.abs()))
    }
}
