//! s_i-strings, the long Weyl element, the eta-basis and phase operators.

use crate::error::{Error, Result};
use crate::gt::{Irrep, IrrepLabel, Weight};
use crate::rep::{submatrix, WeightBlocks, WeightedRep};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct SString {
    /// Highest s-weight.
    pub delta: i64,
    /// Basis positions from lowest to highest s-weight.
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StringDecomposition {
    pub label: IrrepLabel,
    pub strings: Vec<SString>,
}

/// s1-strings of the GT basis: all entries but `l11` fixed, `delta = l21 - l22`.
pub fn s1_strings(r: &Irrep) -> StringDecomposition {
    let mut order: Vec<([i64; 2], Vec<usize>)> = Vec::new();
    let mut seen: BTreeMap<[i64; 2], usize> = BTreeMap::new();
    for (i, p) in r.basis.iter().enumerate() {
        let slot = *seen.entry(p.mid).or_insert_with(|| {
            order.push((p.mid, Vec::new()));
            order.len() - 1
        });
        order[slot].1.push(i);
    }
    let strings = order
        .into_iter()
        .map(|(mid, mut positions)| {
            positions.sort_by_key(|&i| r.basis[i].bot);
            SString { delta: mid[0] - mid[1], positions }
        })
        .collect();
    StringDecomposition { label: r.label, strings }
}

impl StringDecomposition {
    /// String highest weight of every basis vector.
    pub fn delta_of(&self, dim: usize) -> Vec<i64> {
        let mut out = vec![0; dim];
        for s in &self.strings {
            for &p in &s.positions {
                out[p] = s.delta;
            }
        }
        out
    }
}

/// Decomposition of `V_w` into s_i-types: `(delta, orthonormal columns)`,
/// ascending in `delta`. Read off from the spectrum of `X_i Y_i` on `V_w`,
/// which is `(delta + h)(delta - h + 2) / 4` with `h = w(H_i)`.
pub fn spin_components<B: WeightBlocks + ?Sized>(b: &B, i: usize, w: &Weight) -> Result<Vec<(i64, DMatrix<f64>)>> {
    let n = b.multiplicity(w);
    if n == 0 {
        return Ok(Vec::new());
    }
    let h = w.h(i);
    let down = *w - Weight::simple_root(i);
    let xy = if b.multiplicity(&down) == 0 {
        DMatrix::zeros(n, n)
    } else {
        b.block(i, true, &down) * b.block(i, false, w)
    };
    let sym = (&xy + xy.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in 0..n {
        let e = eig.eigenvalues[k].max(0.0);
        let d = (4.0 * e + ((h - 1) * (h - 1)) as f64).sqrt() - 1.0;
        let delta = d.round() as i64;
        if (d - delta as f64).abs() > 1e-6 || delta < h.abs() || (delta - h).rem_euclid(2) != 0 {
            return Err(Error::Consistency(format!(
                "s{i} spectrum on weight {w}: eigenvalue {e} is not an sl2 Casimir value"
            )));
        }
        groups.entry(delta).or_default().push(k);
    }
    Ok(groups
        .into_iter()
        .map(|(delta, ks)| {
            let cols = DMatrix::from_fn(n, ks.len(), |r, c| eig.eigenvectors[(r, ks[c])]);
            (delta, cols)
        })
        .collect())
}

/// `pi(w_i) = exp(pi/2 (X_i - Y_i))` restricted to `V_w`, as a matrix
/// `V_w -> V_{s_i w}`. On an s_i-type `delta` vector `v` of `H_i`-weight
/// `h > 0` it is `(-1)^((delta+h)/2) Y^h v / c`, `c = |Y^h v| / |v|`;
/// symmetric with `X` for `h < 0`.
pub fn reflection<B: WeightBlocks + ?Sized>(b: &B, i: usize, w: &Weight) -> Result<DMatrix<f64>> {
    let h = w.h(i);
    let comps = spin_components(b, i, w)?;
    let n = b.multiplicity(w);
    let mut t = DMatrix::<f64>::identity(n, n);
    let mut at = *w;
    let alpha = Weight::simple_root(i);
    for _ in 0..h.abs() {
        let raise = h < 0;
        t = b.block(i, raise, &at) * t;
        at = if raise { at + alpha } else { at - alpha };
    }
    let mut combo = DMatrix::<f64>::zeros(n, n);
    for (delta, cols) in comps {
        let mut c2 = 1.0;
        for step in 0..h.abs() {
            let ht = if h > 0 { h - 2 * step } else { h + 2 * step };
            let f = if h > 0 { (delta + ht) * (delta - ht + 2) } else { (delta - ht) * (delta + ht + 2) };
            c2 *= f as f64 / 4.0;
        }
        let sign = if ((delta + h) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        combo += &cols * cols.transpose() * (sign / c2.sqrt());
    }
    Ok(t * combo)
}

/// Scalar by which `D = diag(-1, 1, -1)` acts on weight `w`.
pub fn d_sign(w: &Weight) -> f64 {
    if (w.0[0] + w.0[2]).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `pi(w_rho) = pi(w1) pi(w2) pi(w1) pi(D)` applied to `v in V_w`.
/// Returns the image, which lies in `V_{reversed(w)}`.
pub fn weyl_apply<B: WeightBlocks + ?Sized>(b: &B, w: &Weight, v: &DMatrix<f64>) -> Result<(Weight, DMatrix<f64>)> {
    let mut cur = v * d_sign(w);
    let mut at = *w;
    for i in [1, 2, 1] {
        cur = reflection(b, i, &at)? * cur;
        at = at.reflect(i);
    }
    Ok((at, cur))
}

/// The full matrix of `pi(w_rho)` in the orthonormal basis.
pub fn weyl_element(r: &WeightedRep) -> Result<DMatrix<f64>> {
    check_weyl_decomposition()?;
    weyl_matrix(r)
}

fn weyl_matrix(r: &WeightedRep) -> Result<DMatrix<f64>> {
    let n = r.dim();
    let mut out = DMatrix::zeros(n, n);
    for (w, cols) in r.weight_spaces() {
        let k = cols.len();
        let (target, img) = weyl_apply(r, w, &DMatrix::identity(k, k))?;
        let rows = r.weight_space(&target);
        for (a, &row) in rows.iter().enumerate() {
            for (b, &col) in cols.iter().enumerate() {
                out[(row, col)] = img[(a, b)];
            }
        }
    }
    Ok(out)
}

/// The decomposition must reproduce `antidiag(-1,-1,-1)` on the defining
/// representation.
pub fn check_weyl_decomposition() -> Result<()> {
    let r = Irrep::build(&IrrepLabel::new(1, 0, 0)?)?;
    let w = weyl_matrix(&WeightedRep::from_irrep(&r))?;
    let want = DMatrix::from_fn(3, 3, |i, j| if i + j == 2 { -1.0 } else { 0.0 });
    let err = (&w - want).amax();
    if err > 1e-12 {
        return Err(Error::Consistency(format!("w1 w2 w1 D is not antidiag(-1) on C^3 (error {err:e}): {w}")));
    }
    Ok(())
}

/// Columns `eta_L = pi(w_rho) xi_L` in the orthonormal basis, where `xi_L`
/// carries its GT norm.
pub fn eta_basis(r: &Irrep) -> Result<DMatrix<f64>> {
    let w = weyl_element(&WeightedRep::from_irrep(r))?;
    let scale = DMatrix::from_diagonal(&DVector::from_iterator(r.dim(), (0..r.dim()).map(|i| r.normsq_f64(i).sqrt())));
    Ok(w * scale)
}

/// Orthogonal projection on `V_w` onto the span of the eta-vectors whose GT
/// second row has `l21 - l22 = delta` (the s2-types of `V_w`).
pub fn k2_isotypic_projection(r: &Irrep, w: &Weight, delta: i64) -> Result<DMatrix<f64>> {
    let wm = weyl_element(&WeightedRep::from_irrep(r))?;
    let rows = r.weight_space(w);
    let cols: Vec<usize> = r
        .weight_space(&w.reversed())
        .into_iter()
        .filter(|&c| r.basis[c].s1_delta() == delta)
        .collect();
    let e = submatrix(&wm, &rows, &cols);
    Ok(&e * e.transpose())
}

#[derive(Clone, Debug)]
pub struct PhaseOp {
    pub op: DMatrix<f64>,
    /// Dimension of the kernel of the original operator.
    pub kernel_rank: usize,
    /// Kernel dimension per domain weight block (empty for a full SVD).
    pub block_kernels: Vec<(Weight, usize)>,
    pub cutoff: f64,
    pub warnings: Vec<String>,
}

pub const PHASE_RELATIVE_CUTOFF: f64 = 1e-9;
pub const PHASE_ABSOLUTE_CUTOFF: f64 = 1e-12;

/// Phase `T (T*T)^(-1/2)` of a weight-graded operator, by SVD per domain
/// weight block when the blocks have disjoint images, otherwise globally.
pub fn phase(t: &DMatrix<f64>, dom_weights: &[Weight]) -> PhaseOp {
    assert_eq!(t.ncols(), dom_weights.len());
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (c, w) in dom_weights.iter().enumerate() {
        groups.entry(*w).or_default().push(c);
    }
    let mut owner = vec![None; t.nrows()];
    let mut blocks: Vec<(Weight, Vec<usize>, Vec<usize>)> = Vec::new();
    let mut homogeneous = true;
    for (w, cols) in &groups {
        let rows: Vec<usize> = (0..t.nrows()).filter(|&r| cols.iter().any(|&c| t[(r, c)] != 0.0)).collect();
        for &r in &rows {
            if owner[r].is_some() {
                homogeneous = false;
            }
            owner[r] = Some(*w);
        }
        blocks.push((*w, rows, cols.clone()));
    }
    if !homogeneous {
        let all_rows: Vec<usize> = (0..t.nrows()).collect();
        let all_cols: Vec<usize> = (0..t.ncols()).collect();
        blocks = vec![(Weight::zero(), all_rows, all_cols)];
    }
    let svds: Vec<_> = blocks
        .iter()
        .map(|(_, rows, cols)| {
            let m = submatrix(t, rows, cols);
            let pad = m.nrows().max(m.ncols());
            let mut padded = DMatrix::zeros(pad, m.ncols());
            padded.rows_mut(0, m.nrows()).copy_from(&m);
            padded.svd(true, true)
        })
        .collect();
    let smax = svds.iter().flat_map(|s| s.singular_values.iter().copied()).fold(0.0, f64::max);
    let cutoff = (PHASE_RELATIVE_CUTOFF * smax).max(PHASE_ABSOLUTE_CUTOFF);
    let mut op = DMatrix::zeros(t.nrows(), t.ncols());
    let mut kernel_rank = 0;
    let mut block_kernels = Vec::new();
    let mut warnings = Vec::new();
    for ((w, rows, cols), svd) in blocks.iter().zip(&svds) {
        let u = svd.u.as_ref().expect("left vectors requested");
        let v_t = svd.v_t.as_ref().expect("right vectors requested");
        let mut rank = 0;
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff / 100.0 && s < cutoff * 100.0 {
                warnings.push(format!("weight {w}: singular value {s:e} near cutoff {cutoff:e}"));
            }
            if s <= cutoff {
                continue;
            }
            rank += 1;
            for (a, &r) in rows.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    op[(r, c)] += u[(a, k)] * v_t[(k, b)];
                }
            }
        }
        let kernel = cols.len() - rank;
        kernel_rank += kernel;
        if homogeneous {
            block_kernels.push((*w, kernel));
        }
    }
    PhaseOp { op, kernel_rank, block_kernels, cutoff, warnings }
}

impl PhaseOp {
    /// `max |P*P - (P*P)^2|`.
    pub fn partial_isometry_defect(&self) -> f64 {
        let q = self.op.transpose() * &self.op;
        (&q - &q * &q).amax()
    }
}

/// Phase of the root vector `X_i` (or `Y_i`) of a weighted module.
pub fn phase_of_root(r: &WeightedRep, i: usize, raise: bool) -> PhaseOp {
    let m = if raise { r.raising(i) } else { r.lowering(i) };
    phase(m, &r.weights)
}

/// `(Ph X_i)^n` (or `(Ph Y_i)^|n|` for `n < 0`) restricted to `V_w`, built
/// from weight blocks only: the phase of a weight-graded operator is the
/// blockwise phase.
pub fn local_phase_power<B: WeightBlocks + ?Sized>(b: &B, i: usize, n: i64, w: &Weight) -> DMatrix<f64> {
    let step = if n >= 0 { Weight::simple_root(i) } else { -Weight::simple_root(i) };
    let mut acc = DMatrix::identity(b.multiplicity(w), b.multiplicity(w));
    let mut u = *w;
    for _ in 0..n.abs() {
        let blk = b.block(i, n >= 0, &u);
        let p = if blk.nrows() == 0 || blk.ncols() == 0 { blk } else { phase(&blk, &vec![u; blk.ncols()]).op };
        acc = p * acc;
        u = u + step;
    }
    acc
}
