//! Infinitesimal split-Cartan action `U_mu(A)` of the principal series on
//! the Peter-Weyl blocks `V^(pi dagger) (x) p_(-mu) V^pi`.
//!
//! `U_mu(A)` sends `eta^dagger (x) xi` to `(eta^dagger (x) A) (x) Xi(xi)`, a matrix
//! unit of `pi (x) g^dagger`, which splits over the irreducible components
//! `c` of that tensor product. With isometric embeddings `E_c` and the
//! Peter-Weyl normalization the block from `pi` to a component label `t` is
//! `sum_(c of type t) sqrt(dim pi / dim t) L_c (x) M_c`, where
//! `L_c = E_c^T (1 (x) A)` acts on the left leg and `M_c = E_c^T Xi` on the
//! right leg.

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::gt::{Irrep, IrrepCache, IrrepLabel, Weight, RHO};
use crate::harmonic::{phase, phase_of_root, spin_components};
use crate::rep::{coadjoint_index as ci, submatrix, WeightedRep};
use crate::tensor::{decompose_with_coadjoint, TensorDecomposition};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Scale applied to the `rho` term of `Xi`. The value 2 makes `U_mu(A)`
/// skew-adjoint and the reflection phases intertwining; see the tests.
pub const RHO_SCALE: f64 = 2.0;

/// `A = c H1 + c' H1'` in the split Cartan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitCartan {
    pub c: f64,
    pub c_prime: f64,
}

impl SplitCartan {
    pub fn h1() -> Self {
        SplitCartan { c: 1.0, c_prime: 0.0 }
    }

    /// From a traceless real diagonal `diag(a1, a2, a3)`.
    pub fn from_diag(a: [f64; 3]) -> Result<Self> {
        if (a[0] + a[1] + a[2]).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("diag{a:?} is not traceless")));
        }
        Ok(SplitCartan { c: a[0] + a[2] / 2.0, c_prime: -a[2] / 2.0 })
    }

    /// Coordinates in the orthonormal basis of `g` dual to the coadjoint basis.
    pub fn coords(&self) -> [f64; 8] {
        let mut v = [0.0; 8];
        v[ci::H] = 2f64.sqrt() * self.c;
        v[ci::H_PRIME] = 6f64.sqrt() * self.c_prime;
        v
    }

    /// Operator norm of `diag(a)` on `C^3`.
    pub fn norm(&self) -> f64 {
        let d = [self.c + self.c_prime, -self.c + self.c_prime, -2.0 * self.c_prime];
        d.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Per-K-type data: the irrep, its dense model and the decomposition of
/// `pi (x) g^dagger`.
pub struct KType {
    pub irrep: Arc<Irrep>,
    pub rep: WeightedRep,
    pub tensor: WeightedRep,
    pub decomp: TensorDecomposition,
    x_rho: DMatrix<f64>,
    y_rho: DMatrix<f64>,
    component_reps: BTreeMap<IrrepLabel, WeightedRep>,
}

impl KType {
    pub fn new(label: &IrrepLabel, cache: &IrrepCache) -> Result<KType> {
        let irrep = cache.get(label)?;
        let (tensor, decomp) = decompose_with_coadjoint(&irrep, cache)?;
        let rep = WeightedRep::from_irrep(&irrep);
        let component_reps = decomp
            .components
            .iter()
            .map(|c| (c.label, WeightedRep::from_irrep(&c.irrep)))
            .collect();
        Ok(KType { x_rho: rep.x_rho(), y_rho: rep.y_rho(), irrep, rep, tensor, decomp, component_reps })
    }

    pub fn label(&self) -> IrrepLabel {
        self.irrep.label
    }

    pub fn dim(&self) -> usize {
        self.irrep.dim()
    }

    /// Lift of `-mu` to a gl(3) weight of this K-type, if it occurs.
    pub fn source_weight(&self, mu: &Weight) -> Option<Weight> {
        (-*mu).lift_to_total(self.label().total()).filter(|w| self.irrep.has_weight(w))
    }

    pub fn component_rep(&self, label: &IrrepLabel) -> &WeightedRep {
        &self.component_reps[label]
    }

    /// Largest canonical span among the components of `pi (x) g^dagger`.
    pub fn max_component_span(&self) -> i64 {
        self.decomp.components.iter().map(|c| c.label.span()).max().unwrap_or(0)
    }
}

/// `Xi(xi)` as eight coordinate vectors in `V^pi`, one per coadjoint basis vector.
#[derive(Clone, Debug)]
pub struct XiVector {
    pub label: IrrepLabel,
    pub coords: Vec<DVector<f64>>,
}

impl XiVector {
    /// Flattened into the tensor basis (coadjoint index fastest).
    pub fn flatten(&self) -> DVector<f64> {
        let n = self.coords[0].len();
        DVector::from_fn(n * 8, |r, _| self.coords[r % 8][r / 8])
    }
}

/// `Xi(xi) = xi (x) rho~ + sum_(alpha > 0) (pi(X_alpha) xi (x) X_alpha^dagger
/// - pi(Y_alpha) xi (x) Y_alpha^dagger)`, with `rho~ = rho_scale * rho` written
/// in the orthonormal Cartan part of `g^dagger`.
pub fn xi_map(k: &KType, xi: &DVector<f64>, rho_scale: f64) -> Result<XiVector> {
    let support: Vec<Weight> = (0..xi.len()).filter(|&i| xi[i].abs() > 1e-14).map(|i| k.irrep.weights[i]).collect();
    if support.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::InvalidInput(format!("vector in {} is not a weight vector", k.label())));
    }
    let rep = &k.rep;
    let mut coords = vec![DVector::zeros(xi.len()); 8];
    let xs = [rep.raising(1), rep.raising(2), &k.x_rho];
    let ys = [rep.lowering(1), rep.lowering(2), &k.y_rho];
    for a in 0..3 {
        coords[ci::X[a]] = xs[a] * xi;
        coords[ci::Y[a]] = -(ys[a] * xi);
    }
    let (rh, rhp) = rho_cartan(rho_scale);
    coords[ci::H] = xi * rh;
    coords[ci::H_PRIME] = xi * rhp;
    Ok(XiVector { label: k.label(), coords })
}

/// `rho~` on the orthonormal Cartan coordinates `sqrt2 H1^dagger`, `sqrt6 H1'^dagger`.
fn rho_cartan(rho_scale: f64) -> (f64, f64) {
    let rho_h1 = RHO.h(1) as f64;
    let rho_h1p = RHO.h1_prime() as f64;
    (rho_scale * rho_h1 / 2f64.sqrt(), rho_scale * rho_h1p / 6f64.sqrt())
}

/// Columns `Xi(e_p)` for the basis vectors `p` in `cols`.
pub fn xi_matrix(k: &KType, cols: &[usize], rho_scale: f64) -> DMatrix<f64> {
    let n = k.dim();
    let mut out = DMatrix::zeros(n * 8, cols.len());
    for (j, &p) in cols.iter().enumerate() {
        let mut e = DVector::zeros(n);
        e[p] = 1.0;
        let v = xi_map(k, &e, rho_scale).expect("basis vectors are weight vectors").flatten();
        out.set_column(j, &v);
    }
    out
}

#[derive(Clone, Debug)]
pub struct ComponentMap {
    pub label: IrrepLabel,
    pub copy: usize,
    /// `L_c = E_c^T (1 (x) A)`, `dim c x dim pi`.
    pub left: DMatrix<f64>,
    /// `M_c` restricted to `p_(-mu)` on both sides.
    pub right: DMatrix<f64>,
    /// Basis positions (in the component) of the target weight space.
    pub target: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PrincipalBlock {
    pub source: IrrepLabel,
    pub mu: Weight,
    /// Basis positions of `p_(-mu) V^pi`.
    pub source_positions: Vec<usize>,
    pub maps: Vec<ComponentMap>,
    /// Largest entry of any `E_c^T Xi` outside the `(-mu)`-weight space.
    pub weight_leak: f64,
}

pub fn umu_a_matrix(k: &KType, a: SplitCartan, mu: &Weight, rho_scale: f64) -> Result<PrincipalBlock> {
    umu_a_matrix_masked(k, a, mu, rho_scale, &[true; 8])
}

/// As [`umu_a_matrix`] with the coadjoint coordinates of `Xi` outside `keep` zeroed.
pub fn umu_a_matrix_masked(k: &KType, a: SplitCartan, mu: &Weight, rho_scale: f64, keep: &[bool; 8]) -> Result<PrincipalBlock> {
    let Some(w) = k.source_weight(mu) else {
        return Ok(PrincipalBlock { source: k.label(), mu: *mu, source_positions: Vec::new(), maps: Vec::new(), weight_leak: 0.0 });
    };
    let cols = k.irrep.weight_space(&w);
    let mut xi = xi_matrix(k, &cols, rho_scale);
    for r in 0..xi.nrows() {
        if !keep[r % 8] {
            xi.row_mut(r).fill(0.0);
        }
    }
    let coords = a.coords();
    let n = k.dim();
    let mut leak: f64 = 0.0;
    let maps = k
        .decomp
        .components
        .iter()
        .map(|c| {
            let et = c.embedding.transpose();
            let full = &et * &xi;
            let target = c.irrep.weight_space(&w);
            for r in 0..full.nrows() {
                if c.irrep.weights[r] != w {
                    leak = leak.max(full.row(r).amax());
                }
            }
            let right = DMatrix::from_fn(target.len(), cols.len(), |r, j| full[(target[r], j)]);
            let mut left = DMatrix::zeros(c.irrep.dim(), n);
            for (kk, &ak) in coords.iter().enumerate() {
                if ak != 0.0 {
                    for p in 0..n {
                        left.column_mut(p).axpy(ak, &et.column(p * 8 + kk), 1.0);
                    }
                }
            }
            ComponentMap { label: c.label, copy: c.copy, left, right, target }
        })
        .collect();
    Ok(PrincipalBlock { source: k.label(), mu: *mu, source_positions: cols, maps, weight_leak: leak })
}

impl PrincipalBlock {
    /// Full matrix of the block into the K-type `target` (left leg slow index).
    pub fn operator_into(&self, target: &IrrepLabel, dim_source: usize) -> Option<DMatrix<f64>> {
        let mut acc: Option<DMatrix<f64>> = None;
        for m in self.maps.iter().filter(|m| m.label == *target) {
            let w = (dim_source as f64 / m.left.nrows() as f64).sqrt();
            let term = m.left.kronecker(&m.right) * w;
            acc = Some(match acc {
                Some(x) => x + term,
                None => term,
            });
        }
        acc
    }
}

/// `|| sum over t of sum_(c in t) sqrt(d/d_t) L_c (x) N_c ||` via the Gram
/// matrix `sum_t sum_(c,c' in t) (d/d_t) (L_c^T L_c') (x) (N_c^T N_c')`.
pub fn gram_norm(dim_source: usize, terms: &[(IrrepLabel, &DMatrix<f64>, DMatrix<f64>)]) -> f64 {
    if terms.iter().all(|(_, _, n)| n.amax() == 0.0) {
        return 0.0;
    }
    let s = terms[0].2.ncols();
    let size = dim_source * s;
    let mut g = DMatrix::zeros(size, size);
    for (a, (ta, la, na)) in terms.iter().enumerate() {
        for (tb, lb, nb) in terms.iter().skip(a) {
            if ta != tb {
                continue;
            }
            let w = dim_source as f64 / la.nrows() as f64;
            let kron = (la.transpose() * *lb).kronecker(&(na.transpose() * nb)) * w;
            if std::ptr::eq(*la, *lb) {
                g += kron;
            } else {
                g += &kron + kron.transpose();
            }
        }
    }
    let g = (&g + g.transpose()) * 0.5;
    g.symmetric_eigenvalues().iter().fold(0.0f64, |m, &x| m.max(x)).max(0.0).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct BandRow {
    pub irrep: IrrepLabel,
    pub mu: Weight,
    pub l: i64,
    pub m: i64,
    pub band_norm: f64,
}

/// `||p_m U_mu(A) p_l||` for all source/target s_i-types of one K-type.
/// Bands with `|m - l| > 2` are certified by the largest `|N_c|`, which
/// bounds nothing from below but is zero exactly when the band is.
pub fn band_norms(k: &KType, block: &PrincipalBlock, i: usize) -> Result<Vec<BandRow>> {
    let Some(&first) = block.source_positions.first() else { return Ok(Vec::new()) };
    let w = k.irrep.weights[first];
    let src = spin_components(&k.rep, i, &w)?;
    let mut targets: BTreeMap<IrrepLabel, Vec<(i64, DMatrix<f64>)>> = BTreeMap::new();
    for m in &block.maps {
        if !targets.contains_key(&m.label) {
            targets.insert(m.label, spin_components(k.component_rep(&m.label), i, &w)?);
        }
    }
    let mut tdeltas: Vec<i64> = targets.values().flat_map(|v| v.iter().map(|(d, _)| *d)).collect();
    tdeltas.sort();
    tdeltas.dedup();
    let mut rows = Vec::new();
    for (l, qs) in &src {
        for &mt in &tdeltas {
            let terms: Vec<(IrrepLabel, &DMatrix<f64>, DMatrix<f64>)> = block
                .maps
                .iter()
                .filter_map(|cm| {
                    let (_, qt) = targets[&cm.label].iter().find(|(d, _)| *d == mt)?;
                    Some((cm.label, &cm.left, qt.transpose() * &cm.right * qs))
                })
                .collect();
            if terms.is_empty() {
                continue;
            }
            let norm = if (mt - l).abs() > 2 {
                let biggest = terms.iter().map(|t| t.2.amax()).fold(0.0, f64::max);
                if biggest < 1e-12 {
                    biggest
                } else {
                    gram_norm(k.dim(), &terms)
                }
            } else {
                gram_norm(k.dim(), &terms)
            };
            rows.push(BandRow { irrep: k.label(), mu: block.mu, l: *l, m: mt, band_norm: norm });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct TridiagReport {
    pub i: usize,
    pub span: i64,
    pub rows: Vec<BandRow>,
    /// Largest norm over bands with `|m-l| > 2`.
    pub far_band_max: f64,
    /// Largest norm over bands with `|m-l| = 1`.
    pub odd_band_max: f64,
    /// `max ||band_2(l)|| / (l+1)`.
    pub c_hat: f64,
    pub diagonal_max: f64,
}

/// All weights `mu` (as gl(3) triples with total 0 up to the lift) with
/// `|mu(H1)|, |mu(H2)| <= bound`.
pub fn weight_box(bound: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            // mu(H1) = a, mu(H2) = b: mu = (a + b, b, 0) up to (1,1,1)
            out.push(Weight::new(a + b, b, 0));
        }
    }
    out
}

pub fn ktypes_up_to_span(span: i64, cache: &IrrepCache, mode: Mode) -> Result<Vec<Arc<KType>>> {
    let labels = IrrepLabel::all_up_to_span(span);
    exec::try_map(mode, &labels, |l| KType::new(l, cache).map(Arc::new))
}

pub fn tridiag_scan(ktypes: &[Arc<KType>], mus: &[Weight], a: SplitCartan, i: usize, rho_scale: f64, mode: Mode) -> Result<TridiagReport> {
    tridiag_scan_masked(ktypes, mus, a, i, rho_scale, &[true; 8], mode)
}

/// The s1-triple `(X1, Y1, H1)` coordinates of `Xi`; dropping them leaves
/// only the parts that commute with `s1` up to doublets.
pub const S1_TRIPLE_MASK: [bool; 8] = {
    let mut keep = [true; 8];
    keep[ci::X[0]] = false;
    keep[ci::Y[0]] = false;
    keep[ci::H] = false;
    keep
};

pub fn tridiag_scan_masked(
    ktypes: &[Arc<KType>],
    mus: &[Weight],
    a: SplitCartan,
    i: usize,
    rho_scale: f64,
    keep: &[bool; 8],
    mode: Mode,
) -> Result<TridiagReport> {
    let jobs: Vec<(usize, Weight)> = (0..ktypes.len()).flat_map(|p| mus.iter().map(move |m| (p, *m))).collect();
    let parts = exec::try_map(mode, &jobs, |(p, mu)| {
        let k = &ktypes[*p];
        let block = umu_a_matrix_masked(k, a, mu, rho_scale, keep)?;
        band_norms(k, &block, i)
    })?;
    let rows: Vec<BandRow> = parts.into_iter().flatten().collect();
    let mut rep = TridiagReport {
        i,
        span: ktypes.iter().map(|k| k.label().span()).max().unwrap_or(0),
        far_band_max: 0.0,
        odd_band_max: 0.0,
        c_hat: 0.0,
        diagonal_max: 0.0,
        rows: Vec::new(),
    };
    for r in &rows {
        match (r.m - r.l).abs() {
            0 => rep.diagonal_max = rep.diagonal_max.max(r.band_norm),
            1 => rep.odd_band_max = rep.odd_band_max.max(r.band_norm),
            2 => rep.c_hat = rep.c_hat.max(r.band_norm / (r.l + 1) as f64),
            _ => rep.far_band_max = rep.far_band_max.max(r.band_norm),
        }
    }
    rep.rows = rows;
    Ok(rep)
}

/// How far `U_mu(A)` is from skew-adjoint between two K-types.
pub fn skew_adjointness_defect(a: &KType, b: &KType, mu: &Weight, split: SplitCartan, rho_scale: f64) -> Result<f64> {
    let ab = umu_a_matrix(a, split, mu, rho_scale)?.operator_into(&b.label(), a.dim());
    let ba = umu_a_matrix(b, split, mu, rho_scale)?.operator_into(&a.label(), b.dim());
    Ok(match (ab, ba) {
        (Some(x), Some(y)) => (x + y.transpose()).amax(),
        (Some(x), None) | (None, Some(x)) => x.amax(),
        (None, None) => 0.0,
    })
}

/// `(Ph X_i)^n` (or `(Ph Y_i)^|n|`) on a weighted module, as a full matrix.
pub fn phase_power(r: &WeightedRep, i: usize, n: i64) -> DMatrix<f64> {
    let p = phase_of_root(r, i, n >= 0).op;
    let mut out = DMatrix::identity(r.dim(), r.dim());
    for _ in 0..n.abs() {
        out = &p * out;
    }
    out
}

/// A random weight-preserving partial isometry with the same block shapes
/// as `(Ph X_i)^n`; the negative control for the intertwiner check.
pub fn random_phase_power(r: &WeightedRep, i: usize, n: i64, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((r.dim() as u64) << 16) ^ ((i as u64) << 8) ^ n.unsigned_abs());
    let shift = Weight::simple_root(i).scale(n);
    let mut out = DMatrix::zeros(r.dim(), r.dim());
    for (w, cols) in r.weight_spaces() {
        let rows = r.weight_space(&(*w + shift));
        if rows.is_empty() {
            continue;
        }
        let g = DMatrix::from_fn(rows.len(), cols.len(), |_, _| rng.random::<f64>() - 0.5);
        let p = phase(&g, &vec![*w; cols.len()]).op;
        for (a, &row) in rows.iter().enumerate() {
            for (b, &col) in cols.iter().enumerate() {
                out[(row, col)] = p[(a, b)];
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerRow {
    pub mu: Weight,
    pub i: usize,
    pub n: i64,
    pub irrep: IrrepLabel,
    pub residual: f64,
}

/// `max over interior K-types of ||(Ph X_i)^n U_mu(A) - U_mu'(A) (Ph X_i)^n||`
/// with `mu' = s_i mu`, `n = mu(H_i)`. A K-type is interior when every
/// component of `pi (x) g^dagger` lies within `span`.
pub fn intertwiner_residual(
    ktypes: &[Arc<KType>],
    mu: &Weight,
    i: usize,
    span: i64,
    a: SplitCartan,
    rho_scale: f64,
    mode: Mode,
) -> Result<Vec<IntertwinerRow>> {
    intertwiner_residual_with(ktypes, mu, i, span, a, rho_scale, mode, |r, i, n| phase_power(r, i, n))
}

/// As [`intertwiner_residual`], with the phase power supplied by the caller
/// (used for negative controls).
#[allow(clippy::too_many_arguments)]
pub fn intertwiner_residual_with<F>(
    ktypes: &[Arc<KType>],
    mu: &Weight,
    i: usize,
    span: i64,
    a: SplitCartan,
    rho_scale: f64,
    mode: Mode,
    power: F,
) -> Result<Vec<IntertwinerRow>>
where
    F: Fn(&WeightedRep, usize, i64) -> DMatrix<f64> + Sync + Send,
{
    let n = mu.h(i);
    let interior: Vec<&Arc<KType>> = ktypes.iter().filter(|k| k.max_component_span() <= span).collect();
    if interior.is_empty() {
        return Err(Error::Capacity(format!("no interior K-types within span {span}")));
    }
    let mu2 = mu.reflect(i);
    exec::try_map(mode, &interior, |k| {
        let b1 = umu_a_matrix(k, a, mu, rho_scale)?;
        let b2 = umu_a_matrix(k, a, &mu2, rho_scale)?;
        if b1.source_positions.is_empty() {
            return Ok(IntertwinerRow { mu: *mu, i, n, irrep: k.label(), residual: 0.0 });
        }
        let src_pow = power(&k.rep, i, n);
        let sp = submatrix(&src_pow, &b2.source_positions, &b1.source_positions);
        let mut comp_pow: BTreeMap<IrrepLabel, DMatrix<f64>> = BTreeMap::new();
        let mut terms = Vec::new();
        for (m1, m2) in b1.maps.iter().zip(&b2.maps) {
            let cp = comp_pow.entry(m1.label).or_insert_with(|| power(k.component_rep(&m1.label), i, n));
            let tp = submatrix(cp, &m2.target, &m1.target);
            let r = &tp * &m1.right - &m2.right * &sp;
            terms.push((m1.label, &m1.left, r));
        }
        Ok(IntertwinerRow { mu: *mu, i, n, irrep: k.label(), residual: gram_norm(k.dim(), &terms) })
    })
}
