//! Report-producing commands.

use crate::config::{RunConfig, TOL_DOUBLE};
use crate::error::CliError;
use bgg_core::bgg::{bgg_defect, bgg_edge_power, index_table, BggModule, WeylGraph};
use bgg_core::gt::{weight_multiplicities, IrrepCache, IrrepLabel, Weight};
use bgg_core::harmonic::s1_strings;
use bgg_core::overlaps::{
    direct_pairings, legendre_b, overlaps_oracle, overlaps_recurrence, overlaps_recurrence_table, pairing_from_table,
    pairing_limit, ORACLE_MAX_M,
};
use bgg_core::principal::{
    intertwiner_residual, ktypes_up_to_span, tridiag_scan, weight_box, SplitCartan, RHO_SCALE,
};
use bgg_core::report::{
    write_report, BandNormRow, ConvergenceRow, DefectCsvRow, IndexCsvRow, IntertwinerCsvRow, OverlapRow, ReportHeader,
};
use serde::Serialize;
use std::collections::BTreeMap;

/// Tolerance of the oracle agreement check.
pub const ORACLE_TOL: f64 = 1e-10;
/// Tolerance of the intertwiner residual.
pub const INTERTWINER_TOL: f64 = 1e-7;

pub fn parse_ints(s: &str, n: usize, what: &str) -> Result<Vec<i64>, CliError> {
    let v: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(CliError::Usage(format!("{what} must be {n} comma-separated integers, got {s:?}"))),
    }
}

/// `"a,b"` read as `mu(H1) = a`, `mu(H2) = b`.
pub fn parse_mu(s: &str) -> Result<Weight, CliError> {
    let v = parse_ints(s, 2, "--mu")?;
    Ok(Weight::new(v[0] + v[1], v[1], 0))
}

pub fn fmt_mu(w: &Weight) -> String {
    format!("{},{}", w.h(1), w.h(2))
}

fn fmt_label(l: &IrrepLabel) -> String {
    format!("{},{},{}", l.m1, l.m2, l.m3)
}

fn check_span(cfg: &RunConfig, label: &IrrepLabel) -> Result<(), CliError> {
    if label.span() > cfg.max_irrep_span {
        return Err(CliError::Capacity(format!(
            "{label} has span {} > --span {}",
            label.span(),
            cfg.max_irrep_span
        )));
    }
    Ok(())
}

pub fn cache(cfg: &RunConfig) -> IrrepCache {
    match &cfg.cache_dir {
        Some(d) => IrrepCache::with_dir(d),
        None => IrrepCache::new(),
    }
}

fn emit<R: Serialize, C: Serialize>(out: &mut Vec<u8>, cfg: &RunConfig, name: &str, command: &C, rows: &[R]) -> Result<(), CliError> {
    let header = ReportHeader::new(name, cfg.hash(command));
    write_report(out, cfg.output_format, &header, rows)?;
    Ok(())
}

#[derive(Serialize)]
struct RepRow {
    kind: &'static str,
    key: String,
    value: usize,
}

pub fn rep(cfg: &RunConfig, out: &mut Vec<u8>, label: &str, weights: bool) -> Result<(), CliError> {
    let label: IrrepLabel = label.parse()?;
    check_span(cfg, &label)?;
    let r = cache(cfg).get(&label)?;
    let mut rows = vec![RepRow { kind: "dim", key: fmt_label(&label), value: r.dim() }];
    if weights {
        for (w, m) in weight_multiplicities(&label)? {
            rows.push(RepRow { kind: "weight", key: format!("{},{},{}", w.0[0], w.0[1], w.0[2]), value: m });
        }
    }
    let mut strings: BTreeMap<i64, usize> = BTreeMap::new();
    for s in s1_strings(&r).strings {
        *strings.entry(s.delta).or_default() += 1;
    }
    for (d, n) in strings {
        rows.push(RepRow { kind: "s1_strings", key: format!("delta={d}"), value: n });
    }
    emit(out, cfg, "rep", &("rep", label, weights), &rows)
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    Double,
}

pub fn overlap(cfg: &RunConfig, out: &mut Vec<u8>, m: i64, kmax: i64, check_oracle: bool, precision: Precision) -> Result<(), CliError> {
    if m < 0 || kmax < 0 || kmax > m {
        return Err(CliError::Usage(format!("need 0 <= kmax <= m, got m = {m}, kmax = {kmax}")));
    }
    let t = overlaps_recurrence_table(m, kmax, matches!(precision, Precision::Exact))?;
    let mut rows = Vec::new();
    for k in 0..=kmax {
        for j in 0..=m {
            let a = t.get(j, k);
            let b = legendre_b(m, j, k);
            rows.push(OverlapRow { m, j, k, a, b, abs_err: (a - b).abs() });
        }
    }
    emit(out, cfg, "overlap", &("overlap", m, kmax, check_oracle, precision), &rows)?;
    if check_oracle {
        if m > ORACLE_MAX_M {
            return Err(CliError::Capacity(format!("oracle limited to m <= {ORACLE_MAX_M}")));
        }
        let o = overlaps_oracle(m)?;
        let diff = (0..=kmax).flat_map(|k| (0..=m).map(move |j| (j, k))).map(|(j, k)| (t.get(j, k) - o.get(j, k)).abs()).fold(0.0, f64::max);
        eprintln!("{}", serde_json::json!({"check": "oracle", "m": m, "max_abs_diff": diff, "tolerance": ORACLE_TOL}));
        if diff >= ORACLE_TOL {
            return Err(CliError::Verification {
                message: format!("recurrence differs from oracle by {diff:e}"),
                failed: vec!["overlap.oracle".into()],
            });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sum,
    Direct,
}

pub fn limit(cfg: &RunConfig, out: &mut Vec<u8>, ks: &[i64], ms: &[i64], method: Method) -> Result<(), CliError> {
    let kmax = ks.iter().copied().max().unwrap_or(1);
    if ks.iter().any(|&k| k < 1) || ms.iter().any(|&m| m < kmax) {
        return Err(CliError::Usage(format!("need 1 <= k <= m, got k = {ks:?}, m = {ms:?}")));
    }
    let mut rows = Vec::new();
    for &m in ms {
        let pairings: Vec<f64> = match method {
            Method::Sum => {
                let t = overlaps_recurrence(m, kmax)?;
                ks.iter().map(|&k| pairing_from_table(&t, k)).collect::<Result<_, _>>()?
            }
            Method::Direct => {
                let d = direct_pairings(m)?;
                ks.iter().map(|&k| d[(k - 1) as usize]).collect()
            }
        };
        for (&k, p) in ks.iter().zip(pairings) {
            let l = pairing_limit(k);
            rows.push(ConvergenceRow { m, k, pairing: p, limit: l, abs_err: (p - l).abs() });
        }
    }
    emit(out, cfg, "limit", &("limit", ks, ms, method), &rows)
}

pub struct TridiagArgs {
    pub mu: Option<Weight>,
    pub i: usize,
    pub a: SplitCartan,
    pub intertwiner: bool,
}

pub fn tridiag(cfg: &RunConfig, out: &mut Vec<u8>, args: &TridiagArgs) -> Result<(), CliError> {
    if args.i != 1 && args.i != 2 {
        return Err(CliError::Usage(format!("--i must be 1 or 2, got {}", args.i)));
    }
    let cache = cache(cfg);
    let ks = ktypes_up_to_span(cfg.max_irrep_span, &cache, cfg.mode())?;
    let command = ("tridiag", args.mu.map(|m| fmt_mu(&m)), args.i, args.a, args.intertwiner);
    if args.intertwiner {
        let mus: Vec<Weight> = match args.mu {
            Some(m) => vec![m],
            None => weight_box(3).into_iter().filter(|m| (1..=3).contains(&m.h(args.i))).collect(),
        };
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for mu in &mus {
            let r = intertwiner_residual(&ks, mu, args.i, cfg.max_irrep_span, args.a, RHO_SCALE, cfg.mode())?;
            let res = r.iter().map(|x| x.residual).fold(0.0, f64::max);
            worst = worst.max(res);
            rows.push(IntertwinerCsvRow { mu: fmt_mu(mu), i: args.i, n: mu.h(args.i), residual: res });
        }
        emit(out, cfg, "intertwiner", &command, &rows)?;
        if worst >= INTERTWINER_TOL {
            return Err(CliError::Verification {
                message: format!("intertwiner residual {worst:e}"),
                failed: vec!["tridiag.intertwiner".into()],
            });
        }
        return Ok(());
    }
    let mus = match args.mu {
        Some(m) => vec![m],
        None => weight_box(3),
    };
    let rep = tridiag_scan(&ks, &mus, args.a, args.i, RHO_SCALE, cfg.mode())?;
    let rows: Vec<BandNormRow> = rep
        .rows
        .iter()
        .map(|r| BandNormRow { irrep: fmt_label(&r.irrep), mu: fmt_mu(&r.mu), l: r.l, m: r.m, band_norm: r.band_norm })
        .collect();
    emit(out, cfg, "tridiag", &command, &rows)?;
    if rep.far_band_max >= cfg.tol(TOL_DOUBLE) {
        return Err(CliError::Verification {
            message: format!("band |m-l| > 2 has norm {:e}", rep.far_band_max),
            failed: vec!["tridiag.far_bands".into()],
        });
    }
    Ok(())
}

pub fn index(cfg: &RunConfig, out: &mut Vec<u8>, lambda_max: i64, pi_span: i64) -> Result<(), CliError> {
    if lambda_max < 0 || pi_span < 0 {
        return Err(CliError::Usage("ranges must be non-negative".into()));
    }
    let table = index_table(lambda_max, pi_span, cfg.mode());
    let bad: Vec<String> =
        table.iter().filter(|r| r.alt_mult != r.expected).map(|r| format!("{:?} {}", r.lambda, r.pi)).collect();
    let rows: Vec<IndexCsvRow> = table
        .iter()
        .map(|r| IndexCsvRow { lambda: format!("{},{}", r.lambda.0, r.lambda.1), pi: fmt_label(&r.pi), alt_mult: r.alt_mult })
        .collect();
    emit(out, cfg, "index", &("index", lambda_max, pi_span), &rows)?;
    if !bad.is_empty() {
        return Err(CliError::Verification { message: format!("index identity fails at {}", bad.join("; ")), failed: bad });
    }
    Ok(())
}

pub fn defect(cfg: &RunConfig, out: &mut Vec<u8>, lambda: (i64, i64)) -> Result<(), CliError> {
    let lam = IrrepLabel::from_dynkin(lambda.0, lambda.1)
        .map_err(|_| CliError::Usage(format!("lambda must be dominant, got {lambda:?}")))?
        .as_weight();
    let cache = cache(cfg);
    let labels = IrrepLabel::all_up_to_span(cfg.max_irrep_span);
    let modules = bgg_core::exec::try_map(cfg.mode(), &labels, |l| cache.get(l).map(BggModule::new))?;
    let graph = WeylGraph::standard();
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for e in graph.simple_edges() {
        let n = bgg_edge_power(&lam, e.low, e.high)?.n;
        let reports =
            bgg_core::exec::try_map(cfg.mode(), &modules, |m| bgg_defect(m, &lam, e.low, e.high))?;
        for r in reports {
            if r.max_string.is_some_and(|d| d > n - 1) {
                bad.push(format!("{e} {}", r.pi));
            }
            rows.push(DefectCsvRow {
                lambda: format!("{},{}", lambda.0, lambda.1),
                edge: format!("{}->{}", e.low, e.high),
                pi: fmt_label(&r.pi),
                defect_max_string: r.max_string,
            });
        }
    }
    emit(out, cfg, "defect", &("defect", lambda), &rows)?;
    if !bad.is_empty() {
        return Err(CliError::Verification { message: "defect outside the short strings".into(), failed: bad });
    }
    Ok(())
}
