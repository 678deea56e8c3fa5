use super::action::{act_on_pattern, Generator};
use super::label::{IrrepLabel, Weight};
use super::norm::norm_sq;
use super::pattern::{enumerate_patterns, GTPattern};
use crate::error::{Error, Result};
use crate::linop::{BasisId, LinOp};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

/// An irreducible gl(3)-module in its Gelfand-Tsetlin basis. Immutable after
/// construction; the normalized double-precision matrices are derived lazily.
#[derive(Debug)]
pub struct Irrep {
    pub label: IrrepLabel,
    pub basis: Vec<GTPattern>,
    pub normsq: Vec<BigRational>,
    pub weights: Vec<Weight>,
    index: HashMap<GTPattern, usize>,
    generators: BTreeMap<Generator, LinOp<BigRational>>,
    dense: OnceLock<BTreeMap<Generator, DMatrix<f64>>>,
}

impl Irrep {
    pub fn build(label: &IrrepLabel) -> Result<Irrep> {
        let basis = enumerate_patterns(label)?;
        let normsq = basis.iter().map(norm_sq).collect();
        let index: HashMap<GTPattern, usize> = basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let id = BasisId::irrep(label);
        let n = basis.len();
        let mut generators = BTreeMap::new();
        for g in Generator::ALL {
            let mut op = LinOp::zeros(id.clone(), id.clone(), n, n);
            for (col, p) in basis.iter().enumerate() {
                for (target, c) in act_on_pattern(g, p) {
                    op.set(index[&target], col, c);
                }
            }
            generators.insert(g, op);
        }
        Ok(Irrep::assemble(*label, basis, normsq, generators, index))
    }

    /// Reassembles an irrep from stored data, checking it against the label.
    pub fn from_parts(
        label: IrrepLabel,
        basis: Vec<GTPattern>,
        normsq: Vec<BigRational>,
        generators: BTreeMap<Generator, LinOp<BigRational>>,
    ) -> Result<Irrep> {
        if basis.len() != label.dim() || normsq.len() != basis.len() {
            return Err(Error::Format(format!(
                "{label}: {} patterns and {} norms, expected {}",
                basis.len(),
                normsq.len(),
                label.dim()
            )));
        }
        if let Some(p) = basis.iter().find(|p| !p.is_valid() || p.label() != label) {
            return Err(Error::Format(format!("{label}: pattern {p} does not belong")));
        }
        for g in Generator::ALL {
            match generators.get(&g) {
                Some(op) if op.rows == basis.len() && op.cols == basis.len() => {}
                _ => return Err(Error::Format(format!("{label}: generator {g} missing or misshapen"))),
            }
        }
        let index = basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        Ok(Irrep::assemble(label, basis, normsq, generators, index))
    }

    fn assemble(
        label: IrrepLabel,
        basis: Vec<GTPattern>,
        normsq: Vec<BigRational>,
        generators: BTreeMap<Generator, LinOp<BigRational>>,
        index: HashMap<GTPattern, usize>,
    ) -> Irrep {
        let weights = basis.iter().map(|p| p.weight()).collect();
        Irrep { label, basis, normsq, weights, index, generators, dense: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_id(&self) -> BasisId {
        BasisId::irrep(&self.label)
    }

    pub fn index_of(&self, p: &GTPattern) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Exact matrix of a generator in the unnormalized basis.
    pub fn generator(&self, g: Generator) -> &LinOp<BigRational> {
        &self.generators[&g]
    }

    pub fn generators(&self) -> &BTreeMap<Generator, LinOp<BigRational>> {
        &self.generators
    }

    /// Positions of the basis vectors of weight `w`, in basis order.
    pub fn weight_space(&self, w: &Weight) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == *w).collect()
    }

    pub fn has_weight(&self, w: &Weight) -> bool {
        self.weights.contains(w)
    }

    /// Generator in the orthonormal basis `xi / |xi|`, double precision.
    pub fn dense(&self, g: Generator) -> &DMatrix<f64> {
        let all = self.dense.get_or_init(|| {
            Generator::ALL
                .iter()
                .map(|&g| (g, normalize_dense(&self.generators[&g], &self.normsq, &self.normsq)))
                .collect()
        });
        &all[&g]
    }

    pub fn normsq_f64(&self, i: usize) -> f64 {
        ratio_to_f64(&self.normsq[i])
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Adjoint of `op` for the inner products in which the domain (codomain)
/// basis vectors have squared norms `dom_norms` (`cod_norms`).
pub fn adjoint(op: &LinOp<BigRational>, dom_norms: &[BigRational], cod_norms: &[BigRational]) -> Result<LinOp<BigRational>> {
    if dom_norms.len() != op.cols || cod_norms.len() != op.rows {
        return Err(Error::BasisMismatch {
            left: format!("{} -> {} ({}x{})", op.domain, op.codomain, op.rows, op.cols),
            right: format!("norms {} / {}", dom_norms.len(), cod_norms.len()),
        });
    }
    let mut out = LinOp::zeros(op.codomain.clone(), op.domain.clone(), op.cols, op.rows);
    for (r, c, v) in op.iter() {
        out.set(c, r, v * &cod_norms[r] / &dom_norms[c]);
    }
    Ok(out)
}

/// Matrix of `op` with respect to the normalized bases. Each entry is scaled
/// by the square root of an exactly computed norm ratio.
pub fn normalize(op: &LinOp<BigRational>, dom_norms: &[BigRational], cod_norms: &[BigRational]) -> LinOp<f64> {
    let mut out = LinOp::zeros(op.domain.clone(), op.codomain.clone(), op.rows, op.cols);
    for (r, c, v) in op.iter() {
        out.set(r, c, scaled_entry(v, &cod_norms[r], &dom_norms[c]));
    }
    out
}

pub fn normalize_dense(op: &LinOp<BigRational>, dom_norms: &[BigRational], cod_norms: &[BigRational]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(op.rows, op.cols);
    for (r, c, v) in op.iter() {
        out[(r, c)] = scaled_entry(v, &cod_norms[r], &dom_norms[c]);
    }
    out
}

fn scaled_entry(v: &BigRational, cod: &BigRational, dom: &BigRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    // v * sqrt(cod/dom) = sign(v) * sqrt(v^2 cod / dom)
    let sq = ratio_to_f64(&(v * v * cod / dom)).sqrt();
    if v < &BigRational::zero() {
        -sq
    } else {
        sq
    }
}
