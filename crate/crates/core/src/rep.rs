//! Dense orthonormal-basis models of K-representations.
//!
//! [`WeightedRep`] stores the four root-vector matrices `X1, X2, Y1, Y2` in an
//! orthonormal weight basis. It models irreps, the coadjoint module and tensor
//! products uniformly. [`LocalIrrep`] serves single weight-space blocks of an
//! irrep without building the whole module, which is what the large-`m`
//! computations need.

use crate::error::{Error, Result};
use crate::gt::{
    normalize_dense, norm_sq, weight_space_patterns, act_on_pattern, Generator, GTPattern, Irrep, IrrepLabel, Weight,
    ALPHA1, ALPHA2, RHO,
};
use crate::linop::{BasisId, LinOp};
use nalgebra::{DMatrix, Matrix3};
use num_rational::BigRational;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Access to root-vector blocks between weight spaces.
pub trait WeightBlocks {
    fn multiplicity(&self, w: &Weight) -> usize;

    /// `X_i` (if `raise`) or `Y_i` restricted to `V_w`, as a matrix
    /// `V_w -> V_{w +- alpha_i}` in orthonormal coordinates.
    fn block(&self, i: usize, raise: bool, w: &Weight) -> DMatrix<f64>;
}

#[derive(Clone, Debug)]
pub struct WeightedRep {
    pub name: String,
    pub weights: Vec<Weight>,
    x: [DMatrix<f64>; 2],
    y: [DMatrix<f64>; 2],
    spaces: BTreeMap<Weight, Vec<usize>>,
}

impl WeightedRep {
    pub fn new(name: impl Into<String>, weights: Vec<Weight>, x: [DMatrix<f64>; 2], y: [DMatrix<f64>; 2]) -> Self {
        let n = weights.len();
        for m in x.iter().chain(y.iter()) {
            assert_eq!(m.shape(), (n, n), "generator shape");
        }
        let mut spaces: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            spaces.entry(*w).or_default().push(i);
        }
        WeightedRep { name: name.into(), weights, x, y, spaces }
    }

    pub fn from_irrep(r: &Irrep) -> Self {
        WeightedRep::new(
            r.label.to_string(),
            r.weights.clone(),
            [r.dense(Generator::X1).clone(), r.dense(Generator::X2).clone()],
            [r.dense(Generator::X1Star).clone(), r.dense(Generator::X2Star).clone()],
        )
    }

    /// The coadjoint module `g^dagger` in the orthonormal basis dual to
    /// `{X1, X2, Xrho, Y1, Y2, Yrho, H1/sqrt2, H1'/sqrt6}`.
    pub fn coadjoint() -> Self {
        let basis = coadjoint_basis();
        let weights = COADJOINT_WEIGHTS.to_vec();
        let act = |z: &Matrix3<f64>| {
            // Z . e_k = - sum_l <B_k, [Z, B_l]> e_l
            DMatrix::from_fn(8, 8, |l, k| {
                let br = z * basis[l] - basis[l] * z;
                -(basis[k].component_mul(&br)).sum()
            })
        };
        WeightedRep::new(
            "g*",
            weights,
            [act(&unit(0, 1)), act(&unit(1, 2))],
            [act(&unit(1, 0)), act(&unit(2, 1))],
        )
    }

    /// `a (x) b`, basis ordered with the index of `b` running fastest.
    pub fn tensor(a: &WeightedRep, b: &WeightedRep) -> Self {
        let ia = DMatrix::<f64>::identity(a.dim(), a.dim());
        let ib = DMatrix::<f64>::identity(b.dim(), b.dim());
        let k = |ma: &DMatrix<f64>, mb: &DMatrix<f64>| ma.kronecker(&ib) + ia.kronecker(mb);
        let weights = a.weights.iter().flat_map(|wa| b.weights.iter().map(move |wb| *wa + *wb)).collect();
        WeightedRep::new(
            format!("{}x{}", a.name, b.name),
            weights,
            [k(&a.x[0], &b.x[0]), k(&a.x[1], &b.x[1])],
            [k(&a.y[0], &b.y[0]), k(&a.y[1], &b.y[1])],
        )
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn raising(&self, i: usize) -> &DMatrix<f64> {
        &self.x[i - 1]
    }

    pub fn lowering(&self, i: usize) -> &DMatrix<f64> {
        &self.y[i - 1]
    }

    /// `X_rho = [X1, X2]`.
    pub fn x_rho(&self) -> DMatrix<f64> {
        &self.x[0] * &self.x[1] - &self.x[1] * &self.x[0]
    }

    /// `Y_rho = [Y2, Y1]`.
    pub fn y_rho(&self) -> DMatrix<f64> {
        &self.y[1] * &self.y[0] - &self.y[0] * &self.y[1]
    }

    /// Diagonal of `H_i`.
    pub fn h(&self, i: usize) -> Vec<f64> {
        self.weights.iter().map(|w| w.h(i) as f64).collect()
    }

    pub fn weight_space(&self, w: &Weight) -> &[usize] {
        self.spaces.get(w).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn weight_spaces(&self) -> &BTreeMap<Weight, Vec<usize>> {
        &self.spaces
    }

    /// Largest entry of `[X_i, Y_i] - H_i` and of `Y_i - X_i^T`.
    pub fn structure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..=2 {
            let (x, y) = (self.raising(i), self.lowering(i));
            let mut c = x * y - y * x;
            for (k, h) in self.h(i).into_iter().enumerate() {
                c[(k, k)] -= h;
            }
            worst = worst.max(c.amax()).max((y - x.transpose()).amax());
        }
        worst
    }
}

pub(crate) fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
}

impl WeightBlocks for WeightedRep {
    fn multiplicity(&self, w: &Weight) -> usize {
        self.weight_space(w).len()
    }

    fn block(&self, i: usize, raise: bool, w: &Weight) -> DMatrix<f64> {
        let a = Weight::simple_root(i);
        let (m, target) = if raise { (self.raising(i), *w + a) } else { (self.lowering(i), *w - a) };
        submatrix(m, self.weight_space(&target), self.weight_space(w))
    }
}

const COADJOINT_WEIGHTS: [Weight; 8] = [
    Weight::new(-1, 1, 0),
    Weight::new(0, -1, 1),
    Weight::new(-1, 0, 1),
    ALPHA1,
    ALPHA2,
    RHO,
    Weight::new(0, 0, 0),
    Weight::new(0, 0, 0),
];

/// Positions of the coadjoint basis vectors.
pub mod coadjoint_index {
    pub const X: [usize; 3] = [0, 1, 2];
    pub const Y: [usize; 3] = [3, 4, 5];
    pub const H: usize = 6;
    pub const H_PRIME: usize = 7;
}

fn unit(r: usize, c: usize) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m[(r, c)] = 1.0;
    m
}

fn coadjoint_basis() -> [Matrix3<f64>; 8] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    [
        unit(0, 1),
        unit(1, 2),
        unit(0, 2),
        unit(1, 0),
        unit(2, 1),
        unit(2, 0),
        Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0 / s2, -1.0 / s2, 0.0)),
        Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0 / s6, 1.0 / s6, -2.0 / s6)),
    ]
}

/// Weight-space blocks of a (possibly huge) irrep, built on demand from the
/// exact Gelfand-Tsetlin formulas.
pub struct LocalIrrep {
    pub label: IrrepLabel,
    spaces: Mutex<HashMap<Weight, Arc<(Vec<GTPattern>, Vec<BigRational>)>>>,
}

impl LocalIrrep {
    pub fn new(label: IrrepLabel) -> Self {
        LocalIrrep { label, spaces: Mutex::default() }
    }

    /// Patterns and squared norms of `V_w`, in basis order.
    pub fn space(&self, w: &Weight) -> Arc<(Vec<GTPattern>, Vec<BigRational>)> {
        if let Some(s) = self.spaces.lock().expect("weight-space memo poisoned").get(w) {
            return s.clone();
        }
        let patterns = weight_space_patterns(&self.label, w).expect("label validated at construction");
        let norms = patterns.iter().map(norm_sq).collect();
        let s = Arc::new((patterns, norms));
        self.spaces.lock().expect("weight-space memo poisoned").insert(*w, s.clone());
        s
    }

    /// Exact generator block `V_w -> V_{w + shift(g)}` in the unnormalized basis.
    pub fn exact_block(&self, g: Generator, w: &Weight) -> Result<LinOp<BigRational>> {
        let shift = match g {
            Generator::X1 => ALPHA1,
            Generator::X2 => ALPHA2,
            Generator::X1Star => -ALPHA1,
            Generator::X2Star => -ALPHA2,
            _ => Weight::zero(),
        };
        let target = *w + shift;
        let src = self.space(w);
        let dst = self.space(&target);
        let index: HashMap<&GTPattern, usize> = dst.0.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut op = LinOp::zeros(
            BasisId::weight_space(&self.label, w),
            BasisId::weight_space(&self.label, &target),
            dst.0.len(),
            src.0.len(),
        );
        for (col, p) in src.0.iter().enumerate() {
            for (t, c) in act_on_pattern(g, p) {
                let row = index.get(&t).ok_or_else(|| {
                    Error::Consistency(format!("{g} maps {p} outside weight space {target}"))
                })?;
                op.set(*row, col, c);
            }
        }
        Ok(op)
    }
}

impl WeightBlocks for LocalIrrep {
    fn multiplicity(&self, w: &Weight) -> usize {
        self.space(w).0.len()
    }

    fn block(&self, i: usize, raise: bool, w: &Weight) -> DMatrix<f64> {
        let g = if raise { Generator::raising(i) } else { Generator::lowering(i) };
        let op = self.exact_block(g, w).expect("generator stays within weight spaces");
        let shift = if raise { Weight::simple_root(i) } else { -Weight::simple_root(i) };
        let src = self.space(w);
        let dst = self.space(&(*w + shift));
        normalize_dense(&op, &src.1, &dst.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coadjoint_is_a_unitary_sl3_module() {
        let g = WeightedRep::coadjoint();
        assert!(g.structure_defect() < 1e-14);
        // highest weight vector Y_rho^dagger
        let top = coadjoint_index::Y[2];
        assert_eq!(g.weights[top], RHO);
        for i in 1..=2 {
            assert!(g.raising(i).column(top).amax() < 1e-15);
        }
    }

    #[test]
    fn irrep_and_tensor_structure() {
        let r = Irrep::build(&IrrepLabel::new(2, 1, 0).unwrap()).unwrap();
        let a = WeightedRep::from_irrep(&r);
        assert!(a.structure_defect() < 1e-12);
        let t = WeightedRep::tensor(&a, &WeightedRep::coadjoint());
        assert_eq!(t.dim(), 64);
        assert!(t.structure_defect() < 1e-12);
    }

    #[test]
    fn local_blocks_match_full_irrep() {
        let label = IrrepLabel::new(3, 0, -3).unwrap();
        let full = WeightedRep::from_irrep(&Irrep::build(&label).unwrap());
        let local = LocalIrrep::new(label);
        for w in [Weight::zero(), Weight::new(0, -1, 1), Weight::new(1, -1, 0)] {
            for i in 1..=2 {
                for raise in [true, false] {
                    let d = full.block(i, raise, &w) - local.block(i, raise, &w);
                    assert!(d.amax() < 1e-13, "{w} {i} {raise}");
                }
            }
        }
    }
}
