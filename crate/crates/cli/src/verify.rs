//! Check batteries behind `bgg-lab verify`. The summary is deterministic:
//! no timings, fixed check order, values from order-independent reductions.

use crate::commands::{cache, INTERTWINER_TOL, ORACLE_TOL};
use crate::config::{RunConfig, TOL_DOUBLE};
use crate::error::CliError;
use bgg_core::bgg::{
    bgg_defect, bgg_edge_power, edge_adjointness, f_g_covariance_residual, graded_f_oddness, hexagon, index_table,
    shifted_action, BggModule, Diagram, WeylElement, WeylGraph, DEFECT_TOL,
};
use bgg_core::exec;
use bgg_core::gt::{
    enumerate_patterns, factorial, load_irrep, norm_sq, save_irrep, weight_multiplicities, GTPattern, Generator,
    IrrepLabel, Weight,
};
use bgg_core::harmonic::{check_weyl_decomposition, eta_basis, phase_of_root, s1_strings, spin_components, weyl_apply};
use bgg_core::overlaps::{
    direct_pairings, legendre_b, overlaps_oracle, overlaps_recurrence, overlaps_recurrence_exact,
    overlaps_recurrence_table, pairing_from_table, pairing_limit, tail_mass, telescoping_identity,
};
use bgg_core::principal::{
    intertwiner_residual, intertwiner_residual_with, ktypes_up_to_span, random_phase_power, skew_adjointness_defect,
    tridiag_scan, tridiag_scan_masked, umu_a_matrix, weight_box, KType, SplitCartan, RHO_SCALE, S1_TRIPLE_MASK,
};
use bgg_core::rep::{LocalIrrep, WeightedRep};
use bgg_core::report::ARTIFACT_VERSION;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Gt,
    Overlaps,
    Principal,
    Bgg,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    /// Pass when `value <= limit` (exact checks use limit 0), or
    /// `value > limit` for negative controls.
    pub limit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub suite: Suite,
    pub span: i64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Default)]
struct Battery {
    checks: Vec<Check>,
    diagnostics: Vec<Diagnostic>,
}

impl Battery {
    fn at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check { name: name.into(), passed: value <= limit, value, limit });
    }

    fn below(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check { name: name.into(), passed: value < limit, value, limit });
    }

    fn above(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check { name: name.into(), passed: value > limit, value, limit });
    }

    fn count(&mut self, name: &str, failures: usize) {
        self.at_most(name, failures as f64, 0.0);
    }

    fn note(&mut self, name: &str, value: f64, note: String) {
        self.diagnostics.push(Diagnostic { name: name.into(), value, note });
    }
}

fn maxf(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

pub fn run(cfg: &RunConfig, out: &mut Vec<u8>, suite: Suite) -> Result<(), CliError> {
    let summary = summary(cfg, suite)?;
    serde_json::to_writer_pretty(&mut *out, &summary).map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(b'\n');
    if !summary.passed {
        let failed = summary.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        return Err(CliError::Verification { message: format!("verify {suite:?} failed"), failed });
    }
    Ok(())
}

pub fn summary(cfg: &RunConfig, suite: Suite) -> Result<Summary, CliError> {
    let mut b = Battery::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Gt {
        gt_suite(cfg, &mut b)?;
    }
    if all || suite == Suite::Overlaps {
        overlaps_suite(cfg, &mut b)?;
    }
    if all || suite == Suite::Principal {
        principal_suite(cfg, &mut b)?;
    }
    if all || suite == Suite::Bgg {
        bgg_suite(cfg, &mut b)?;
    }
    Ok(Summary {
        tool: "bgg-lab",
        version: ARTIFACT_VERSION,
        config_hash: cfg.hash(&("verify", suite)),
        suite,
        span: cfg.max_irrep_span,
        passed: b.checks.iter().all(|c| c.passed),
        checks: b.checks,
        diagnostics: b.diagnostics,
    })
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Cartan matrix entry `alpha_j(H_i)`.
fn cartan(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else {
        -1
    }
}

fn gt_suite(cfg: &RunConfig, b: &mut Battery) -> Result<(), CliError> {
    let cache = cache(cfg);
    let labels = IrrepLabel::all_up_to_span(cfg.max_irrep_span);
    let irreps = exec::try_map(cfg.mode(), &labels, |l| cache.get(l))?;

    // commutation relations, exactly
    let algebra = exec::try_map(cfg.mode(), &irreps, |r| -> bgg_core::Result<usize> {
        let g = |x| r.generator(x);
        let mut bad = 0;
        for i in 1..=2 {
            let (x, y, h) = (Generator::raising(i), Generator::lowering(i), Generator::cartan(i));
            bad += (g(x).commutator(g(y))? != *g(h)) as usize;
            for j in 1..=2 {
                let c = int(cartan(i, j));
                bad += (g(h).commutator(g(Generator::raising(j)))? != g(Generator::raising(j)).scale(&c)) as usize;
                bad += (g(h).commutator(g(Generator::lowering(j)))? != g(Generator::lowering(j)).scale(&-c)) as usize;
            }
        }
        bad += !g(Generator::X1).commutator(g(Generator::X2Star))?.is_zero() as usize;
        bad += !g(Generator::X2).commutator(g(Generator::X1Star))?.is_zero() as usize;
        // adjointness in the GT inner product
        for i in 1..=2 {
            let adj = bgg_core::gt::adjoint(g(Generator::raising(i)), &r.normsq, &r.normsq)?;
            bad += (&adj != g(Generator::lowering(i))) as usize;
        }
        Ok(bad)
    })?;
    b.count("gt.algebra_exact", algebra.iter().sum());

    // pattern count against the Weyl dimension formula, written out here
    let dims = IrrepLabel::all_up_to_span(10.max(cfg.max_irrep_span));
    let mut bad = 0;
    for l in &dims {
        let (p, q) = l.dynkin();
        let weyl = ((p + 1) * (q + 1) * (p + q + 2) / 2) as usize;
        let mults: usize = weight_multiplicities(l)?.values().sum();
        bad += (enumerate_patterns(l)?.len() != weyl || mults != weyl) as usize;
    }
    b.count("gt.weyl_dimension", bad);

    // X_i moves weights by alpha_i, H_i is diagonal with eigenvalue w(H_i)
    let mut bad = 0;
    for r in &irreps {
        for i in 1..=2 {
            let a = Weight::simple_root(i);
            for (row, col, _) in r.generator(Generator::raising(i)).iter() {
                bad += (r.weights[row] != r.weights[col] + a) as usize;
            }
            for (row, col, _) in r.generator(Generator::lowering(i)).iter() {
                bad += (r.weights[row] + a != r.weights[col]) as usize;
            }
            for (row, col, v) in r.generator(Generator::cartan(i)).iter() {
                bad += (row != col || *v != int(r.weights[col].h(i))) as usize;
            }
        }
    }
    b.count("gt.weight_shifts", bad);

    // closed forms on the zero weight space of (m, 0, -m)
    let mut bad = 0;
    for m in 0..=12 {
        let base = int(1) * BigRational::from_integer(factorial(m) * factorial(m) * factorial(2 * m + 1));
        for j in 0..=m {
            let xi = GTPattern::new([m, 0, -m], [j, -j], 0);
            bad += (norm_sq(&xi) != &base / int(2 * j + 1)) as usize;
            if j >= 1 {
                let xp = GTPattern::new([m, 0, -m], [j - 1, -j], 0);
                bad += (norm_sq(&xp) != &base * int((m + 1) * (m + 1) - j * j) / int(2 * j)) as usize;
            }
        }
    }
    b.count("gt.norm_closed_forms", bad);

    // cache round trip
    let dir = tempfile::tempdir()?;
    let mut bad = 0;
    for r in irreps.iter().filter(|r| r.label.span() <= 4) {
        save_irrep(dir.path(), r)?;
        match load_irrep(dir.path(), &r.label)? {
            Some(back) => {
                bad += (back.basis != r.basis || back.normsq != r.normsq || back.generators() != r.generators()) as usize
            }
            None => bad += 1,
        }
    }
    b.count("gt.cache_round_trip", bad);

    // Ph X1 is a partial isometry moving each s1-string up by one
    let mut worst: f64 = 0.0;
    for r in &irreps {
        let wr = WeightedRep::from_irrep(r);
        let p = phase_of_root(&wr, 1, true).op;
        let mut want = DMatrix::<f64>::identity(r.dim(), r.dim());
        let strings = s1_strings(r);
        for s in &strings.strings {
            let top = *s.positions.last().expect("nonempty string");
            want[(top, top)] = 0.0;
            for k in 0..s.positions.len() {
                let img = p.column(s.positions[k]);
                let err = match s.positions.get(k + 1) {
                    Some(&next) => (img[next].abs() - 1.0).abs() + (img.norm_squared() - img[next] * img[next]).abs(),
                    None => img.amax(),
                };
                worst = worst.max(err);
            }
        }
        worst = worst.max((p.transpose() * &p - want).amax());
    }
    b.below("gt.phase_moves_strings", worst, cfg.tol(TOL_DOUBLE));

    // eta basis: orthogonal with the GT norms, and w_rho acts as antidiag(-1) on C^3
    let mut worst: f64 = 0.0;
    for r in irreps.iter().filter(|r| r.label.span() <= 4) {
        let eta = eta_basis(r)?;
        let g = eta.transpose() * &eta;
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let want = if i == j { r.normsq_f64(i) } else { 0.0 };
                worst = worst.max((g[(i, j)] - want).abs() / r.normsq_f64(i).max(1.0));
            }
        }
    }
    b.below("gt.eta_gram", worst, cfg.tol(TOL_DOUBLE));
    b.count("gt.weyl_lift", check_weyl_decomposition().is_err() as usize);
    Ok(())
}

fn overlaps_suite(cfg: &RunConfig, b: &mut Battery) -> Result<(), CliError> {
    let tol = cfg.tol(TOL_DOUBLE);
    // eta_0 from the Weyl action in doubles against its closed form
    let ms: Vec<i64> = (0..=30).collect();
    let eta = exec::try_map(cfg.mode(), &ms, |&m| -> bgg_core::Result<f64> {
        let local = LocalIrrep::new(IrrepLabel::new(m, 0, -m)?);
        let z = Weight::zero();
        let space = local.space(&z);
        let n = space.0.len();
        let pos: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, pat) in space.0.iter().enumerate() {
                p[pat.mid[0] as usize] = i;
            }
            p
        };
        let mut e0 = DMatrix::zeros(n, 1);
        e0[(pos[0], 0)] = 1.0;
        let (_, y) = weyl_apply(&local, &z, &e0)?;
        let omega = y[(pos[0], 0)].signum();
        Ok(maxf((0..n).map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let want = omega * sign * ((2 * j + 1) as f64).sqrt() / (m + 1) as f64;
            (y[(pos[j], 0)] - want).abs()
        })))
    })?;
    b.below("overlaps.eta0_closed_form", maxf(eta), tol);

    // exact recurrence against the exact oracle
    let ms: Vec<i64> = (1..=40).collect();
    let diffs = exec::try_map(cfg.mode(), &ms, |&m| -> bgg_core::Result<f64> {
        let o = overlaps_oracle(m)?;
        let r = overlaps_recurrence_table(m, m, true)?;
        Ok(maxf((0..=m).flat_map(|j| (0..=m).map(move |k| (j, k))).map(|(j, k)| (o.get(j, k) - r.get(j, k)).abs())))
    })?;
    b.below("overlaps.recurrence_vs_oracle", maxf(diffs), ORACLE_TOL);

    // the overlap matrix is orthogonal once rows carry sqrt(2j+1) and columns sqrt(2k+1)
    let ms: Vec<i64> = (1..=30).collect();
    let gram = exec::try_map(cfg.mode(), &ms, |&m| -> bgg_core::Result<f64> {
        let ex = overlaps_recurrence_exact(m, m)?;
        let n = (m + 1) as usize;
        let u = DMatrix::from_fn(n, n, |j, k| {
            ex[j][k].to_f64().unwrap_or(f64::NAN) * (((2 * j + 1) * (2 * k + 1)) as f64).sqrt()
        });
        Ok((u.transpose() * &u - DMatrix::<f64>::identity(n, n)).amax())
    })?;
    b.below("overlaps.unitarity", maxf(gram), tol);

    // (m+1)^2 |a - b| stays bounded: the constant fitted up to m = 200
    // against the one fitted up to m = 100
    let fit = |lo: i64, hi: i64| -> bgg_core::Result<Vec<f64>> {
        let ms: Vec<i64> = (lo..=hi).collect();
        let rows = exec::try_map(cfg.mode(), &ms, |&m| -> bgg_core::Result<Vec<f64>> {
            let t = overlaps_recurrence(m, 5)?;
            Ok((0..=5)
                .map(|k| maxf((0..=m).map(|j| ((m + 1) * (m + 1)) as f64 * (t.get(j, k) - legendre_b(m, j, k)).abs())))
                .collect())
        })?;
        Ok((0..=5).map(|k| maxf(rows.iter().map(|r| r[k]))).collect())
    };
    let c100 = fit(5, 100)?;
    let c200 = fit(5, 200)?;
    for k in 1..=5 {
        b.below(&format!("overlaps.approximation_rate_k{k}"), (c200[k] - c100[k]) / c100[k], 0.05);
    }

    let lim = maxf((1..=5).map(|k| -> f64 {
        let t = overlaps_recurrence(2000, k).expect("valid range");
        (pairing_from_table(&t, k).expect("valid k") - pairing_limit(k)).abs()
    }));
    b.below("overlaps.limit_m2000", lim, 1e-2);

    let ms: Vec<i64> = (1..=40).collect();
    let dvs = exec::try_map(cfg.mode(), &ms, |&m| -> bgg_core::Result<f64> {
        let d = direct_pairings(m)?;
        let t = overlaps_recurrence_table(m, m, true)?;
        let mut worst: f64 = 0.0;
        for k in 1..=m {
            worst = worst.max((d[(k - 1) as usize] - pairing_from_table(&t, k)?).abs());
        }
        Ok(worst)
    })?;
    b.below("overlaps.direct_vs_sum", maxf(dvs), tol);

    // tail mass after l pairings at m = 500, one-sided against 1/(2l+1)^2
    let tail = maxf((1..=10).map(|l| tail_mass(500, l).expect("valid l") - 1.0 / ((2 * l + 1) * (2 * l + 1)) as f64));
    b.at_most("overlaps.tail_mass_m500", tail, 1e-2);
    b.count("overlaps.telescoping", (1..=50).filter(|&l| !telescoping_identity(l)).count());
    Ok(())
}

/// Tensor multiplicities of `pi (x) g` by Brauer-Klimyk: reflect
/// `lambda + nu` into the dominant chamber with the shifted action.
fn brauer_klimyk(pi: &IrrepLabel) -> BTreeMap<IrrepLabel, i64> {
    let adj = IrrepLabel::adjoint();
    let lam = pi.as_weight();
    let mut out: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
    for (nu, m) in weight_multiplicities(&adj).expect("adjoint") {
        let v = lam + nu;
        for w in WeylElement::ALL {
            let d = shifted_action(w, &v);
            if d.is_dominant() {
                if let Ok(l) = IrrepLabel::new(d.0[0], d.0[1], d.0[2]) {
                    let sign = if w.length() % 2 == 0 { 1 } else { -1 };
                    *out.entry(l.canonical()).or_default() += sign * m as i64;
                }
                break;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn principal_suite(cfg: &RunConfig, b: &mut Battery) -> Result<(), CliError> {
    let tol = cfg.tol(TOL_DOUBLE);
    let cache = cache(cfg);
    let span = cfg.max_irrep_span;
    let ks = ktypes_up_to_span(span, &cache, cfg.mode())?;

    let small: Vec<&Arc<KType>> = ks.iter().filter(|k| k.label().span() <= 4).collect();
    let mut bad = 0;
    let mut embed: f64 = 0.0;
    for k in &small {
        let got: BTreeMap<IrrepLabel, i64> =
            k.decomp.multiplicities().into_iter().map(|(l, m)| (l.canonical(), m as i64)).collect();
        bad += (got != brauer_klimyk(&k.label())) as usize;
        let c = k.decomp.check(&k.tensor);
        embed = embed.max(c.gram).max(c.intertwining);
    }
    b.count("principal.tensor_reciprocity", bad);
    b.below("principal.tensor_embedding", embed, tol);

    let mus = weight_box(2);
    let leak = exec::try_map(cfg.mode(), &ks, |k| -> bgg_core::Result<f64> {
        let mut w: f64 = 0.0;
        for mu in &mus {
            w = w.max(umu_a_matrix(k, SplitCartan::h1(), mu, RHO_SCALE)?.weight_leak);
        }
        Ok(w)
    })?;
    b.below("principal.weight_leak", maxf(leak), tol);

    let generic = SplitCartan { c: 0.3, c_prime: -0.7 };
    let pairs: Vec<(usize, usize)> =
        (0..ks.len()).flat_map(|a| (a..ks.len()).map(move |c| (a, c))).collect();
    let skew_mus = [Weight::zero(), Weight::new(1, 0, 0), Weight::new(2, 1, 0), Weight::new(-1, 1, 0)];
    let skew = exec::try_map(cfg.mode(), &pairs, |&(a, c)| -> bgg_core::Result<f64> {
        let mut w: f64 = 0.0;
        for mu in &skew_mus {
            w = w.max(skew_adjointness_defect(&ks[a], &ks[c], mu, generic, RHO_SCALE)?);
        }
        Ok(w)
    })?;
    b.below("principal.skew_adjoint", maxf(skew), tol);

    let box3 = weight_box(3);
    for (i, a, tag) in [(1, SplitCartan::h1(), "i1_h1"), (1, generic, "i1_generic"), (2, SplitCartan::h1(), "i2_h1")] {
        let rep = tridiag_scan(&ks, &box3, a, i, RHO_SCALE, cfg.mode())?;
        b.below(&format!("principal.far_bands_{tag}"), rep.far_band_max, tol);
        b.below(&format!("principal.c_hat_{tag}"), rep.c_hat, 64.0);
    }
    let masked = tridiag_scan_masked(&ks, &weight_box(1), SplitCartan::h1(), 1, RHO_SCALE, &S1_TRIPLE_MASK, cfg.mode())?;
    b.below("principal.band2_collapse", masked.c_hat.max(masked.far_band_max), 1e-12);

    let mut worst: f64 = 0.0;
    let mut ctrl: f64 = 0.0;
    for i in 1..=2 {
        for mu in box3.iter().filter(|m| (1..=2).contains(&m.h(i)) && m.h(3 - i).abs() <= 1) {
            let r = intertwiner_residual(&ks, mu, i, span, SplitCartan::h1(), RHO_SCALE, cfg.mode())?;
            worst = worst.max(maxf(r.iter().map(|x| x.residual)));
            let c = intertwiner_residual_with(&ks, mu, i, span, SplitCartan::h1(), RHO_SCALE, cfg.mode(), |r, i, n| {
                random_phase_power(r, i, n, 7)
            })?;
            ctrl = ctrl.max(maxf(c.iter().map(|x| x.residual)));
        }
    }
    b.below("principal.intertwiner", worst, INTERTWINER_TOL);
    b.above("principal.intertwiner_negative_control", ctrl, 1e-3);
    Ok(())
}

fn bgg_suite(cfg: &RunConfig, b: &mut Battery) -> Result<(), CliError> {
    let span = cfg.max_irrep_span;
    let table = index_table(4, 8, cfg.mode());
    b.count("bgg.index_identity", table.iter().filter(|r| r.alt_mult != r.expected).count());

    let cache = cache(cfg);
    let labels = IrrepLabel::all_up_to_span(span);
    let modules = exec::try_map(cfg.mode(), &labels, |l| cache.get(l).map(BggModule::new))?;
    let lambdas: Vec<Weight> = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]
        .iter()
        .map(|&(p, q)| IrrepLabel::from_dynkin(p, q).expect("dominant").as_weight())
        .collect();

    let adj = exec::try_map(cfg.mode(), &modules, |m| -> bgg_core::Result<f64> {
        let mut w: f64 = 0.0;
        for lam in &lambdas {
            let (p, a) = edge_adjointness(m, lam)?;
            w = w.max(p).max(a);
        }
        Ok(w)
    })?;
    b.below("bgg.edge_adjointness", maxf(adj), DEFECT_TOL);

    // B' B - 1 lives exactly on the s_i-strings with delta = n - 1, the
    // shortest ones through the source block; the reverse composite is exact
    let graph = WeylGraph::standard();
    let edges: Vec<_> = graph.simple_edges().copied().collect();
    let defects = exec::try_map(cfg.mode(), &modules, |m| -> bgg_core::Result<usize> {
        let mut bad = 0;
        for lam in &lambdas {
            for e in &edges {
                let r = bgg_defect(m, lam, e.low, e.high)?;
                let src = -shifted_action(e.low, lam);
                let present = match src.lift_to_total(m.label().total()) {
                    Some(w) if m.irrep.has_weight(&w) => {
                        spin_components(&m.rep, r.i, &w)?.iter().any(|(d, _)| *d == r.n - 1)
                    }
                    _ => false,
                };
                let want: Vec<i64> = if present { vec![r.n - 1] } else { vec![] };
                bad += (r.support != want) as usize;
                bad += !bgg_defect(m, lam, e.high, e.low)?.support.is_empty() as usize;
            }
        }
        Ok(bad)
    })?;
    b.count("bgg.defect_support", defects.iter().sum());

    let odd = exec::try_map(cfg.mode(), &modules, |m| -> bgg_core::Result<f64> {
        let mut w: f64 = 0.0;
        for lam in &lambdas {
            w = w.max(graded_f_oddness(m, lam)?.0);
        }
        Ok(w)
    })?;
    b.count("bgg.graded_f_odd", odd.iter().filter(|&&x| x != 0.0).count());

    let hex = exec::try_map(cfg.mode(), &modules, |m| -> bgg_core::Result<f64> {
        let mut w: f64 = 0.0;
        for lam in &lambdas {
            w = w.max(hexagon(&m.rep, &m.label(), Diagram::Intertwiner, lam, 0)?.full);
        }
        Ok(w)
    })?;
    b.below("bgg.intertwiner_hexagon", maxf(hex), 1e-10);

    // diagnostics: the BGG hexagon compressed to jointly-high types, and F-G
    // covariance on s_i-types above a threshold
    let lam0 = Weight::zero();
    let nmax = WeylElement::ALL
        .iter()
        .flat_map(|&w| WeylElement::ALL.iter().map(move |&v| (w, v)))
        .filter_map(|(w, v)| bgg_edge_power(&lam0, w, v).ok())
        .map(|p| p.n.abs())
        .max()
        .unwrap_or(0);
    let threshold = nmax + 1;
    let mut comp: f64 = 0.0;
    let mut nonvacuous = 0;
    for m in &modules {
        let h = hexagon(&m.rep, &m.label(), Diagram::Bgg, &lam0, threshold)?;
        comp = comp.max(h.compressed);
        nonvacuous += (h.high_dims.0 > 0 && h.high_dims.1 > 0) as usize;
    }
    b.note(
        "bgg.hexagon_compressed",
        comp,
        format!("lambda = 0, threshold {threshold}, {nonvacuous} K-types with nonempty jointly-high blocks"),
    );
    let ks = ktypes_up_to_span(span, &cache, cfg.mode())?;
    for t in [10, 0] {
        let c = f_g_covariance_residual(
            &ks,
            &lam0,
            WeylElement::E,
            WeylElement::S1,
            SplitCartan::h1(),
            span,
            t,
            RHO_SCALE,
            cfg.mode(),
        )?;
        b.note(
            &format!("bgg.covariance_threshold_{t}"),
            c.residual,
            format!("edge 1->s1, {} of {} interior K-types nonempty", c.nonempty, c.interior),
        );
    }
    Ok(())
}
