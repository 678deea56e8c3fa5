//! Weyl graph, shifted action, normalized BGG operators on K-type blocks and
//! the diagnostics built on them.

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::gt::{weight_multiplicity, Irrep, IrrepLabel, Weight, RHO};
use crate::harmonic::{local_phase_power, phase_of_root, spin_components};
use crate::principal::{gram_norm, umu_a_matrix, KType, SplitCartan};
use crate::rep::{submatrix, WeightBlocks, WeightedRep};
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WeylElement {
    #[serde(rename = "1")]
    E,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "s2")]
    S2,
    #[serde(rename = "s1s2")]
    S1S2,
    #[serde(rename = "s2s1")]
    S2S1,
    #[serde(rename = "w_rho")]
    WRho,
}

impl WeylElement {
    pub const ALL: [WeylElement; 6] =
        [WeylElement::E, WeylElement::S1, WeylElement::S2, WeylElement::S1S2, WeylElement::S2S1, WeylElement::WRho];

    /// Reduced word; the rightmost reflection acts first.
    pub fn word(&self) -> &'static [usize] {
        match self {
            WeylElement::E => &[],
            WeylElement::S1 => &[1],
            WeylElement::S2 => &[2],
            WeylElement::S1S2 => &[1, 2],
            WeylElement::S2S1 => &[2, 1],
            WeylElement::WRho => &[1, 2, 1],
        }
    }

    pub fn length(&self) -> usize {
        self.word().len()
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        self.word().iter().rev().fold(*w, |acc, &i| acc.reflect(i))
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeylElement::E => "1",
            WeylElement::S1 => "s1",
            WeylElement::S2 => "s2",
            WeylElement::S1S2 => "s1s2",
            WeylElement::S2S1 => "s2s1",
            WeylElement::WRho => "w_rho",
        }
    }

    fn index(&self) -> usize {
        WeylElement::ALL.iter().position(|w| w == self).unwrap()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeylElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WeylElement::ALL
            .into_iter()
            .find(|w| w.name() == s || (s == "w0" && *w == WeylElement::WRho))
            .ok_or_else(|| Error::InvalidInput(format!("unknown Weyl element {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum EdgeLabel {
    Alpha1,
    Alpha2,
    Rho,
}

impl EdgeLabel {
    pub fn simple_index(&self) -> Option<usize> {
        match self {
            EdgeLabel::Alpha1 => Some(1),
            EdgeLabel::Alpha2 => Some(2),
            EdgeLabel::Rho => None,
        }
    }
}

/// Undirected edge, stored from the shorter to the longer element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub low: WeylElement,
    pub high: WeylElement,
    pub label: EdgeLabel,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.low, self.high)
    }
}

pub struct WeylGraph {
    pub edges: Vec<Edge>,
}

impl WeylGraph {
    pub fn standard() -> WeylGraph {
        use EdgeLabel::*;
        use WeylElement::*;
        let e = |low, high, label| Edge { low, high, label };
        WeylGraph {
            edges: vec![
                e(E, S1, Alpha1),
                e(E, S2, Alpha2),
                e(S1, S1S2, Rho),
                e(S1, S2S1, Alpha2),
                e(S2, S2S1, Rho),
                e(S2, S1S2, Alpha1),
                e(S1S2, WRho, Alpha2),
                e(S2S1, WRho, Alpha1),
            ],
        }
    }

    pub fn edge(&self, a: WeylElement, b: WeylElement) -> Option<Edge> {
        self.edges.iter().copied().find(|e| (e.low == a && e.high == b) || (e.low == b && e.high == a))
    }

    pub fn simple_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.label != EdgeLabel::Rho)
    }
}

/// `w * lambda = w(lambda + rho) - rho`.
pub fn shifted_action(w: WeylElement, lambda: &Weight) -> Weight {
    w.apply(&(*lambda + RHO)) - RHO
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgePower {
    pub i: usize,
    pub n: i64,
    pub direction: Direction,
}

/// Which weight blocks the vertices of the diagram carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Diagram {
    /// `p_(-w*lambda)`: the BGG diagram.
    Bgg,
    /// `p_(-w(lambda+rho))`: the intertwiner diagram with unshifted weights.
    Intertwiner,
}

impl Diagram {
    pub fn weight(&self, w: WeylElement, lambda: &Weight) -> Weight {
        match self {
            Diagram::Bgg => shifted_action(w, lambda),
            Diagram::Intertwiner => w.apply(&(*lambda + RHO)),
        }
    }
}

/// `(i, n)` with `w*lambda - w'*lambda = n alpha_i` on a simple edge.
pub fn bgg_edge_power(lambda: &Weight, from: WeylElement, to: WeylElement) -> Result<EdgePower> {
    let edge = WeylGraph::standard()
        .edge(from, to)
        .ok_or_else(|| Error::InvalidInput(format!("{from} and {to} are not adjacent")))?;
    let i = edge
        .label
        .simple_index()
        .ok_or_else(|| Error::InvalidInput(format!("edge {edge} is not simple and must be composed")))?;
    let d = shifted_action(from, lambda) - shifted_action(to, lambda);
    let n = d.h(i) / 2;
    if d.sl3_equivalent(&Weight::simple_root(i).scale(n)) {
        Ok(EdgePower { i, n, direction: if n >= 0 { Direction::X } else { Direction::Y } })
    } else {
        Err(Error::Consistency(format!("{d} is not a multiple of alpha{i}")))
    }
}

/// A K-type together with the phases of its simple root vectors.
pub struct BggModule {
    pub irrep: Arc<Irrep>,
    pub rep: WeightedRep,
    /// `[i-1][raise]`
    phases: [[DMatrix<f64>; 2]; 2],
}

impl BggModule {
    pub fn new(irrep: Arc<Irrep>) -> BggModule {
        let rep = WeightedRep::from_irrep(&irrep);
        let ph = |i, raise| phase_of_root(&rep, i, raise).op;
        let phases = [[ph(1, false), ph(1, true)], [ph(2, false), ph(2, true)]];
        BggModule { irrep, rep, phases }
    }

    pub fn label(&self) -> IrrepLabel {
        self.irrep.label
    }

    /// Positions of the block `p_w V^pi` for an sl(3) weight class.
    pub fn block_positions(&self, w: &Weight) -> Vec<usize> {
        w.lift_to_total(self.label().total()).map(|w| self.irrep.weight_space(&w)).unwrap_or_default()
    }

    pub fn phase(&self, i: usize, raise: bool) -> &DMatrix<f64> {
        &self.phases[i - 1][raise as usize]
    }

    pub fn phase_power(&self, i: usize, n: i64) -> DMatrix<f64> {
        let p = self.phase(i, n >= 0);
        let mut out = DMatrix::identity(self.rep.dim(), self.rep.dim());
        for _ in 0..n.abs() {
            out = p * out;
        }
        out
    }

    /// Orthonormal basis of the s_i-types `>= threshold` in the block of `w`.
    pub fn high_types(&self, i: usize, w: &Weight, threshold: i64) -> Result<DMatrix<f64>> {
        high_types(&self.rep, &self.block_positions(w), &self.irrep, i, threshold)
    }
}

fn high_types(rep: &WeightedRep, positions: &[usize], irrep: &Irrep, i: usize, threshold: i64) -> Result<DMatrix<f64>> {
    match positions.first() {
        Some(&p) => type_basis(rep, i, &irrep.weights[p], threshold),
        None => Ok(DMatrix::zeros(0, 0)),
    }
}

#[derive(Clone, Debug)]
pub struct BggBlock {
    pub from: WeylElement,
    pub to: WeylElement,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

/// The normalized operator for a directed edge from `from` to `to`.
/// Non-simple edges are composed through the middle column; their reverse
/// is the adjoint of the forward composite.
pub fn bgg_block(module: &BggModule, diagram: Diagram, lambda: &Weight, from: WeylElement, to: WeylElement) -> Result<BggBlock> {
    use WeylElement::*;
    let graph = WeylGraph::standard();
    let edge = graph.edge(from, to).ok_or_else(|| Error::InvalidInput(format!("{from} and {to} are not adjacent")))?;
    let source = module.block_positions(&-diagram.weight(from, lambda));
    let target = module.block_positions(&-diagram.weight(to, lambda));
    let matrix = match edge.label {
        EdgeLabel::Alpha1 | EdgeLabel::Alpha2 => {
            let p = bgg_edge_power(lambda, from, to)?;
            submatrix(&module.phase_power(p.i, p.n), &target, &source)
        }
        EdgeLabel::Rho => {
            let (a, b) = if from.length() < to.length() { (from, to) } else { (to, from) };
            let path: [WeylElement; 4] = match (a, b) {
                (S1, S1S2) => [S1, E, S2, S1S2],
                (S2, S2S1) => [S2, E, S1, S2S1],
                _ => unreachable!("only two non-simple edges"),
            };
            let mut m = DMatrix::identity(source.len().max(target.len()), 0);
            let mut first = true;
            for s in path.windows(2) {
                let step = bgg_block(module, diagram, lambda, s[0], s[1])?.matrix;
                m = if first { step } else { step * m };
                first = false;
            }
            if from == a {
                m
            } else {
                m.transpose()
            }
        }
    };
    Ok(BggBlock { from, to, source, target, matrix })
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub lambda: Weight,
    pub from: WeylElement,
    pub to: WeylElement,
    pub pi: IrrepLabel,
    pub i: usize,
    pub n: i64,
    pub block_dim: usize,
    /// Largest entry of `B_(w'->w) B_(w->w') - 1`.
    pub defect_norm: f64,
    /// `s_i`-types (string highest weights) on which the defect is nonzero.
    pub support: Vec<i64>,
    pub max_string: Option<i64>,
}

pub const DEFECT_TOL: f64 = 1e-9;

pub fn bgg_defect(module: &BggModule, lambda: &Weight, from: WeylElement, to: WeylElement) -> Result<DefectReport> {
    let p = bgg_edge_power(lambda, from, to)?;
    let fwd = bgg_block(module, Diagram::Bgg, lambda, from, to)?;
    let back = bgg_block(module, Diagram::Bgg, lambda, to, from)?;
    let k = fwd.source.len();
    let d = &back.matrix * &fwd.matrix - DMatrix::<f64>::identity(k, k);
    let mut support = Vec::new();
    if k > 0 {
        let w = module.irrep.weights[fwd.source[0]];
        for (delta, q) in spin_components(&module.rep, p.i, &w)? {
            if (&d * q).amax() > DEFECT_TOL {
                support.push(delta);
            }
        }
    }
    Ok(DefectReport {
        lambda: *lambda,
        from,
        to,
        pi: module.label(),
        i: p.i,
        n: p.n,
        block_dim: k,
        defect_norm: if k > 0 { d.amax() } else { 0.0 },
        max_string: support.iter().copied().max(),
        support,
    })
}

/// `max ||B* B - P||, ||B B* - P'||` (projection defects) and `||B_rev - B^T||`
/// over every directed edge.
pub fn edge_adjointness(module: &BggModule, lambda: &Weight) -> Result<(f64, f64)> {
    let mut proj: f64 = 0.0;
    let mut adj: f64 = 0.0;
    for e in &WeylGraph::standard().edges {
        let f = bgg_block(module, Diagram::Bgg, lambda, e.low, e.high)?;
        let b = bgg_block(module, Diagram::Bgg, lambda, e.high, e.low)?;
        if f.matrix.is_empty() {
            continue;
        }
        adj = adj.max((&b.matrix - f.matrix.transpose()).amax());
        if e.label != EdgeLabel::Rho {
            for m in [f.matrix.transpose() * &f.matrix, &f.matrix * f.matrix.transpose()] {
                proj = proj.max((&m * &m - &m).amax());
            }
        }
    }
    Ok((proj, adj))
}

#[derive(Clone, Debug, Serialize)]
pub struct HexagonReport {
    pub lambda: Weight,
    pub pi: IrrepLabel,
    pub diagram: Diagram,
    pub threshold: i64,
    pub source_dim: usize,
    pub high_dims: (usize, usize),
    /// `||Q_t^T (P_1 - P_2) Q_s||` on the jointly-high subspaces.
    pub compressed: f64,
    /// Uncompressed difference.
    pub full: f64,
}

/// Path `1 -> s1 -> s2s1 -> w_rho` against `1 -> s2 -> s1s2 -> w_rho`, built
/// from weight blocks so that large K-types stay cheap.
pub fn hexagon<B: WeightBlocks + ?Sized>(
    b: &B,
    pi: &IrrepLabel,
    diagram: Diagram,
    lambda: &Weight,
    threshold: i64,
) -> Result<HexagonReport> {
    use WeylElement::*;
    let lift = |w: WeylElement| (-diagram.weight(w, lambda)).lift_to_total(pi.total());
    let (Some(src), Some(tgt)) = (lift(E), lift(WRho)) else {
        return Ok(HexagonReport {
            lambda: *lambda,
            pi: *pi,
            diagram,
            threshold,
            source_dim: 0,
            high_dims: (0, 0),
            compressed: 0.0,
            full: 0.0,
        });
    };
    let compose = |path: [WeylElement; 4]| -> Result<DMatrix<f64>> {
        let mut w = src;
        let mut m = DMatrix::identity(b.multiplicity(&src), b.multiplicity(&src));
        for s in path.windows(2) {
            let p = bgg_edge_power(lambda, s[0], s[1])?;
            m = local_phase_power(b, p.i, p.n, &w) * m;
            w = w + Weight::simple_root(p.i).scale(p.n);
        }
        Ok(m)
    };
    let diff = compose([E, S1, S2S1, WRho])? - compose([E, S2, S1S2, WRho])?;
    let qs = jointly_high(b, &src, threshold)?;
    let qt = jointly_high(b, &tgt, threshold)?;
    let compressed = if qs.ncols() == 0 || qt.ncols() == 0 { 0.0 } else { (qt.transpose() * &diff * &qs).norm() };
    Ok(HexagonReport {
        lambda: *lambda,
        pi: *pi,
        diagram,
        threshold,
        source_dim: diff.ncols(),
        high_dims: (qs.ncols(), qt.ncols()),
        compressed,
        full: if diff.is_empty() { 0.0 } else { diff.norm() },
    })
}

fn type_basis<B: WeightBlocks + ?Sized>(b: &B, i: usize, w: &Weight, threshold: i64) -> Result<DMatrix<f64>> {
    let parts: Vec<DMatrix<f64>> =
        spin_components(b, i, w)?.into_iter().filter(|(d, _)| *d >= threshold).map(|(_, q)| q).collect();
    let cols: usize = parts.iter().map(|q| q.ncols()).sum();
    let mut out = DMatrix::zeros(b.multiplicity(w), cols);
    let mut c = 0;
    for q in parts {
        out.columns_mut(c, q.ncols()).copy_from(&q);
        c += q.ncols();
    }
    Ok(out)
}

/// Orthonormal basis of the intersection of the s1- and s2-high subspaces.
fn jointly_high<B: WeightBlocks + ?Sized>(b: &B, w: &Weight, threshold: i64) -> Result<DMatrix<f64>> {
    let k = b.multiplicity(w);
    if k == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let q1 = type_basis(b, 1, w, threshold)?;
    let q2 = type_basis(b, 2, w, threshold)?;
    let p = (&q1 * q1.transpose() + &q2 * q2.transpose()) * 0.5;
    let eig = p.symmetric_eigen();
    let keep: Vec<usize> = (0..k).filter(|&c| eig.eigenvalues[c] > 1.0 - 1e-9).collect();
    Ok(DMatrix::from_fn(k, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]))
}

/// Sum of all directed edge blocks on `sum_w p_(-w*lambda) V^pi`, with the
/// grading by the parity of `l(w)`. Returns `(||eps F eps + F||, ||F||)`.
pub fn graded_f_oddness(module: &BggModule, lambda: &Weight) -> Result<(f64, f64)> {
    let blocks: Vec<Vec<usize>> =
        WeylElement::ALL.iter().map(|w| module.block_positions(&-shifted_action(*w, lambda))).collect();
    let mut offset = vec![0];
    for b in &blocks {
        offset.push(offset.last().unwrap() + b.len());
    }
    let total = *offset.last().unwrap();
    let mut f = DMatrix::zeros(total, total);
    for e in &WeylGraph::standard().edges {
        for (a, b) in [(e.low, e.high), (e.high, e.low)] {
            let blk = bgg_block(module, Diagram::Bgg, lambda, a, b)?;
            let (r0, c0) = (offset[b.index()], offset[a.index()]);
            let mut view = f.view_mut((r0, c0), (blk.target.len(), blk.source.len()));
            view += &blk.matrix;
        }
    }
    let eps: Vec<f64> = WeylElement::ALL
        .iter()
        .enumerate()
        .flat_map(|(k, w)| std::iter::repeat_n(if w.length() % 2 == 0 { 1.0 } else { -1.0 }, blocks[k].len()))
        .collect();
    let odd = DMatrix::from_fn(total, total, |r, c| eps[r] * f[(r, c)] * eps[c] + f[(r, c)]);
    Ok((if total == 0 { 0.0 } else { odd.amax() }, if total == 0 { 0.0 } else { f.amax() }))
}

/// `sum_w (-1)^l(w) m_pi(w*lambda)` by exact pattern counting.
pub fn alternating_multiplicity(lambda: &Weight, pi: &IrrepLabel) -> i64 {
    WeylElement::ALL
        .iter()
        .map(|w| {
            let sign = if w.length() % 2 == 0 { 1 } else { -1 };
            let m = shifted_action(*w, lambda)
                .lift_to_total(pi.total())
                .map(|x| weight_multiplicity(pi, &x) as i64)
                .unwrap_or(0);
            sign * m
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexRow {
    pub lambda: (i64, i64),
    pub pi: IrrepLabel,
    pub alt_mult: i64,
    pub expected: i64,
}

pub fn index_table(lambda_max: i64, pi_span: i64, mode: Mode) -> Vec<IndexRow> {
    let pis = IrrepLabel::all_up_to_span(pi_span);
    let mut jobs = Vec::new();
    for a in 0..=lambda_max {
        for b in 0..=lambda_max {
            jobs.extend(pis.iter().map(|p| (a, b, *p)));
        }
    }
    exec::map(mode, &jobs, |(a, b, pi)| {
        let lambda = IrrepLabel::from_dynkin(*a, *b).expect("dominant").as_weight();
        IndexRow { lambda: (*a, *b), pi: *pi, alt_mult: alternating_multiplicity(&lambda, pi), expected: (pi.dynkin() == (*a, *b)) as i64 }
    })
}

/// Peter-Weyl section space truncated to a set of K-types, at weight `mu`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedSectionSpace {
    pub mu: Weight,
    /// `(pi, m_pi(-mu), dim pi)`; the left leg is a spectator of dimension `dim pi`.
    pub blocks: Vec<(IrrepLabel, usize, usize)>,
}

impl TruncatedSectionSpace {
    pub fn new(mu: &Weight, labels: &[IrrepLabel]) -> Self {
        let blocks = labels
            .iter()
            .map(|l| {
                let m = (-*mu).lift_to_total(l.total()).map(|w| weight_multiplicity(l, &w)).unwrap_or(0);
                (*l, m, l.dim())
            })
            .collect();
        TruncatedSectionSpace { mu: *mu, blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, m, d)| m * d).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    pub lambda: Weight,
    pub from: WeylElement,
    pub to: WeylElement,
    pub threshold: i64,
    pub interior: usize,
    /// Number of interior K-types whose compressed blocks are nonempty.
    pub nonempty: usize,
    pub residual: f64,
}

/// `U_(w'*lambda)(A) B - B U_(w*lambda)(A)` on interior K-types, compressed
/// to `s_i`-types `>= threshold` on both sides.
pub fn f_g_covariance_residual(
    ktypes: &[Arc<KType>],
    lambda: &Weight,
    from: WeylElement,
    to: WeylElement,
    a: SplitCartan,
    truncation: i64,
    threshold: i64,
    rho_scale: f64,
    mode: Mode,
) -> Result<CovarianceReport> {
    let p = bgg_edge_power(lambda, from, to)?;
    let mu1 = shifted_action(from, lambda);
    let mu2 = shifted_action(to, lambda);
    let interior: Vec<&Arc<KType>> = ktypes.iter().filter(|k| k.max_component_span() <= truncation).collect();
    if interior.is_empty() {
        return Err(Error::Capacity(format!("no interior K-types within span {truncation}")));
    }
    let parts = exec::try_map(mode, &interior, |k| -> Result<Option<f64>> {
        let b1 = umu_a_matrix(k, a, &mu1, rho_scale)?;
        let b2 = umu_a_matrix(k, a, &mu2, rho_scale)?;
        if b1.source_positions.is_empty() || b2.source_positions.is_empty() {
            return Ok(None);
        }
        let bm = BggModule::new(k.irrep.clone());
        let qs = high_types(&k.rep, &b1.source_positions, &k.irrep, p.i, threshold)?;
        if qs.ncols() == 0 {
            return Ok(None);
        }
        let sp = submatrix(&bm.phase_power(p.i, p.n), &b2.source_positions, &b1.source_positions);
        let mut powers: BTreeMap<IrrepLabel, (DMatrix<f64>, Arc<Irrep>)> = BTreeMap::new();
        let mut terms = Vec::new();
        for ((m1, m2), comp) in b1.maps.iter().zip(&b2.maps).zip(&k.decomp.components) {
            let (cp, irr) = powers.entry(m1.label).or_insert_with(|| {
                let cm = BggModule::new(comp.irrep.clone());
                (cm.phase_power(p.i, p.n), comp.irrep.clone())
            });
            let qt = high_types(k.component_rep(&m1.label), &m2.target, irr, p.i, threshold)?;
            if qt.ncols() == 0 {
                continue;
            }
            let tp = submatrix(cp, &m2.target, &m1.target);
            let r = &tp * &m1.right - &m2.right * &sp;
            terms.push((m1.label, &m1.left, qt.transpose() * r * &qs));
        }
        if terms.is_empty() {
            return Ok(None);
        }
        Ok(Some(gram_norm(k.dim(), &terms)))
    })?;
    let present: Vec<f64> = parts.into_iter().flatten().collect();
    Ok(CovarianceReport {
        lambda: *lambda,
        from,
        to,
        threshold,
        interior: interior.len(),
        nonempty: present.len(),
        residual: present.iter().copied().fold(0.0, f64::max),
    })
}
