//! Isotypic decomposition of tensor products with explicit isometric
//! embeddings, in double precision.

use crate::error::{Error, Result};
use crate::gt::{Generator, Irrep, IrrepCache, IrrepLabel, Weight, ALPHA1, ALPHA2};
use crate::rep::{WeightBlocks, WeightedRep};
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Singular values of the joint raising map below this count as kernel.
pub const RANK_CUTOFF: f64 = 1e-6;
/// Singular values within this many decades of the cutoff are ambiguous.
pub const GUARD_DECADES: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct Component {
    pub label: IrrepLabel,
    /// Index among the copies of `label`, in highest-weight-vector order.
    pub copy: usize,
    pub irrep: Arc<Irrep>,
    /// Isometry from the component's orthonormal GT basis into the tensor space.
    pub embedding: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct TensorDecomposition {
    pub factors: (String, String),
    pub dim: usize,
    pub components: Vec<Component>,
    /// Smallest nonzero singular value met in a highest-weight search.
    pub min_nonzero_singular: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddingCheck {
    /// `max |E^T E - 1|` over all components jointly.
    pub gram: f64,
    /// `max |E pi_c(g) - T(g) E|` over `g` in X1, X2, Y1, Y2.
    pub intertwining: f64,
}

pub fn dual_label(a: &IrrepLabel) -> IrrepLabel {
    a.dual()
}

pub fn tensor_decompose(a: &WeightedRep, b: &WeightedRep, cache: &IrrepCache) -> Result<TensorDecomposition> {
    let t = WeightedRep::tensor(a, b);
    let mut d = decompose(&t, cache)?;
    d.factors = (a.name.clone(), b.name.clone());
    Ok(d)
}

/// `pi (x) g^dagger` for an irrep `pi`, returning the tensor model as well.
pub fn decompose_with_coadjoint(pi: &Irrep, cache: &IrrepCache) -> Result<(WeightedRep, TensorDecomposition)> {
    let a = WeightedRep::from_irrep(pi);
    let g = WeightedRep::coadjoint();
    let t = WeightedRep::tensor(&a, &g);
    let mut d = decompose(&t, cache)?;
    d.factors = (a.name, g.name);
    Ok((t, d))
}

/// Decomposes any unitary weighted module into irreducibles.
pub fn decompose(t: &WeightedRep, cache: &IrrepCache) -> Result<TensorDecomposition> {
    let mut found: Vec<(IrrepLabel, Vec<f64>)> = Vec::new();
    let mut min_nonzero = f64::INFINITY;
    for (w, space) in t.weight_spaces() {
        let [w1, w2, w3] = w.0;
        if !(w1 >= w2 && w2 >= w3) {
            continue;
        }
        let k1 = t.block(1, true, w);
        let k2 = t.block(2, true, w);
        // zero rows pad K so the SVD returns a full right basis
        let rows = (k1.nrows() + k2.nrows()).max(space.len());
        let mut k = DMatrix::zeros(rows, space.len());
        k.rows_mut(0, k1.nrows()).copy_from(&k1);
        k.rows_mut(k1.nrows(), k2.nrows()).copy_from(&k2);
        let svd = k.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let label = IrrepLabel::new(w1, w2, w3)?;
        let mut order: Vec<usize> = (0..space.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        for idx in order {
            let sigma = svd.singular_values[idx];
            let guard = 10f64.powf(GUARD_DECADES);
            if sigma >= RANK_CUTOFF / guard && sigma < RANK_CUTOFF * guard {
                return Err(Error::DegenerateDecomposition {
                    label: t.name.clone(),
                    weight: *w,
                    value: sigma,
                    cutoff: RANK_CUTOFF,
                });
            }
            if sigma >= RANK_CUTOFF {
                min_nonzero = min_nonzero.min(sigma);
                continue;
            }
            let mut v = vec![0.0; t.dim()];
            let col = v_t.row(idx).transpose();
            // fix the sign: largest entry positive, earliest index on ties
            let mut pivot = 0;
            for r in 0..col.len() {
                if col[r].abs() > col[pivot].abs() + 1e-12 {
                    pivot = r;
                }
            }
            let s = col[pivot].signum();
            for (r, &pos) in space.iter().enumerate() {
                v[pos] = s * col[r];
            }
            found.push((label, v));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let mut components = Vec::with_capacity(found.len());
    let mut copies: BTreeMap<IrrepLabel, usize> = BTreeMap::new();
    let mut total = 0;
    for (label, v) in found {
        let irrep = cache.get(&label)?;
        let embedding = embed(t, &irrep, &v)?;
        total += irrep.dim();
        let copy = copies.entry(label).or_insert(0);
        components.push(Component { label, copy: *copy, irrep, embedding });
        *copy += 1;
    }
    if total != t.dim() {
        return Err(Error::Consistency(format!(
            "{}: components span {total} of {} dimensions",
            t.name,
            t.dim()
        )));
    }
    Ok(TensorDecomposition {
        factors: (t.name.clone(), String::new()),
        dim: t.dim(),
        components,
        min_nonzero_singular: min_nonzero,
    })
}

/// Extends a highest-weight vector `hw` to an intertwiner `V^c -> T`, weight
/// space by weight space in order of depth below the highest weight.
fn embed(t: &WeightedRep, c: &Irrep, hw: &[f64]) -> Result<DMatrix<f64>> {
    let top = c.label.as_weight();
    let depth = |w: &Weight| {
        let d = top - *w;
        d.0[0] + (d.0[0] + d.0[1])
    };
    let mut weights: Vec<Weight> = c.weights.clone();
    weights.sort_by_key(|w| (depth(w), *w));
    weights.dedup();
    let cy = [c.dense(Generator::X1Star), c.dense(Generator::X2Star)];
    let mut local: BTreeMap<Weight, DMatrix<f64>> = BTreeMap::new();
    {
        let rows = t.weight_space(&top);
        local.insert(top, DMatrix::from_fn(rows.len(), 1, |r, _| hw[rows[r]]));
    }
    for nu in weights.iter().skip(1) {
        let c_space = c.weight_space(nu);
        let mut a_cols: Vec<DMatrix<f64>> = Vec::new();
        let mut b_cols: Vec<DMatrix<f64>> = Vec::new();
        for (i, alpha) in [(1usize, ALPHA1), (2, ALPHA2)] {
            let up = *nu + alpha;
            let Some(e_up) = local.get(&up) else { continue };
            let up_space = c.weight_space(&up);
            a_cols.push(crate::rep::submatrix(cy[i - 1], &c_space, &up_space));
            b_cols.push(t.block(i, false, &up) * e_up);
        }
        let a = hcat(&a_cols, c_space.len());
        let b = hcat(&b_cols, t.weight_space(nu).len());
        let gram = &a * a.transpose();
        let x = gram
            .cholesky()
            .ok_or_else(|| Error::Consistency(format!("{}: lowering not surjective onto {nu}", c.label)))?
            .solve(&(&a * b.transpose()));
        local.insert(*nu, x.transpose());
    }
    let mut e = DMatrix::zeros(t.dim(), c.dim());
    for (nu, block) in &local {
        let rows = t.weight_space(nu);
        for (k, &col) in c.weight_space(nu).iter().enumerate() {
            for (r, &row) in rows.iter().enumerate() {
                e[(row, col)] = block[(r, k)];
            }
        }
    }
    Ok(e)
}

fn hcat(parts: &[DMatrix<f64>], rows: usize) -> DMatrix<f64> {
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.columns_mut(at, p.ncols()).copy_from(p);
        at += p.ncols();
    }
    out
}

impl TensorDecomposition {
    pub fn multiplicities(&self) -> BTreeMap<IrrepLabel, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.label).or_insert(0) += 1;
        }
        out
    }

    /// All embeddings side by side, in component order.
    pub fn stacked(&self) -> DMatrix<f64> {
        hcat(&self.components.iter().map(|c| c.embedding.clone()).collect::<Vec<_>>(), self.dim)
    }

    pub fn check(&self, t: &WeightedRep) -> EmbeddingCheck {
        let s = self.stacked();
        let mut g = s.transpose() * &s;
        for i in 0..g.nrows() {
            g[(i, i)] -= 1.0;
        }
        let mut inter: f64 = 0.0;
        for c in &self.components {
            for (i, raise) in [(1, true), (2, true), (1, false), (2, false)] {
                let (gen, tm) = if raise {
                    (Generator::raising(i), t.raising(i))
                } else {
                    (Generator::lowering(i), t.lowering(i))
                };
                let d = &c.embedding * c.irrep.dense(gen) - tm * &c.embedding;
                inter = inter.max(d.amax());
            }
        }
        EmbeddingCheck { gram: g.amax(), intertwining: inter }
    }
}
