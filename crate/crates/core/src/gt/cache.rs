//! On-disk JSON cache of exact irreps, one file per label.

use super::action::Generator;
use super::irrep::Irrep;
use super::label::IrrepLabel;
use super::pattern::GTPattern;
use crate::error::{Error, Result};
use crate::linop::LinOp;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    label: [i64; 3],
    patterns: Vec<[i64; 6]>,
    normsq: Vec<String>,
    generators: BTreeMap<String, Vec<(usize, usize, String)>>,
}

fn rat_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rat_from_str(s: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn cache_path(dir: &Path, label: &IrrepLabel) -> PathBuf {
    dir.join(format!("irrep_{}_{}_{}.json", label.m1, label.m2, label.m3))
}

pub fn save_irrep(dir: &Path, r: &Irrep) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let file = CacheFile {
        version: CACHE_VERSION,
        label: [r.label.m1, r.label.m2, r.label.m3],
        patterns: r.basis.iter().map(|p| p.entries()).collect(),
        normsq: r.normsq.iter().map(rat_to_string).collect(),
        generators: r
            .generators()
            .iter()
            .map(|(g, op)| (g.name().to_string(), op.iter().map(|(i, j, v)| (i, j, rat_to_string(v))).collect()))
            .collect(),
    };
    let path = cache_path(dir, &r.label);
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_vec(&file)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads a cached irrep; `Ok(None)` when no file exists.
pub fn load_irrep(dir: &Path, label: &IrrepLabel) -> Result<Option<Irrep>> {
    let path = cache_path(dir, label);
    if !path.exists() {
        return Ok(None);
    }
    let file: CacheFile = serde_json::from_slice(&std::fs::read(&path)?)?;
    if file.version != CACHE_VERSION {
        return Err(Error::Format(format!("{}: cache version {} (expected {CACHE_VERSION})", path.display(), file.version)));
    }
    let stored = IrrepLabel::new(file.label[0], file.label[1], file.label[2])?;
    if stored != *label {
        return Err(Error::Format(format!("{}: holds {stored}, expected {label}", path.display())));
    }
    let basis: Vec<GTPattern> = file.patterns.iter().map(|e| GTPattern::from_entries(*e)).collect();
    let normsq = file.normsq.iter().map(|s| rat_from_str(s)).collect::<Result<Vec<_>>>()?;
    let n = basis.len();
    let id = crate::linop::BasisId::irrep(label);
    let mut generators = BTreeMap::new();
    for (name, entries) in &file.generators {
        let g = Generator::from_name(name).ok_or_else(|| Error::Format(format!("unknown generator {name:?}")))?;
        let mut op = LinOp::zeros(id.clone(), id.clone(), n, n);
        for (i, j, v) in entries {
            if *i >= n || *j >= n {
                return Err(Error::Format(format!("{name}: entry ({i},{j}) outside {n}x{n}")));
            }
            op.set(*i, *j, rat_from_str(v)?);
        }
        generators.insert(g, op);
    }
    Irrep::from_parts(*label, basis, normsq, generators).map(Some)
}

/// Shared irreps, built once per label and optionally persisted to disk.
#[derive(Default)]
pub struct IrrepCache {
    dir: Option<PathBuf>,
    memo: Mutex<HashMap<IrrepLabel, Arc<Irrep>>>,
}

impl IrrepCache {
    pub fn new() -> Self {
        IrrepCache::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        IrrepCache { dir: Some(dir.into()), memo: Mutex::default() }
    }

    pub fn get(&self, label: &IrrepLabel) -> Result<Arc<Irrep>> {
        if let Some(r) = self.memo.lock().expect("irrep cache poisoned").get(label) {
            return Ok(r.clone());
        }
        // built outside the lock; a concurrent duplicate build is harmless
        let r = match &self.dir {
            Some(dir) => match load_irrep(dir, label)? {
                Some(r) => r,
                None => {
                    let r = Irrep::build(label)?;
                    save_irrep(dir, &r)?;
                    r
                }
            },
            None => Irrep::build(label)?,
        };
        let r = Arc::new(r);
        let mut memo = self.memo.lock().expect("irrep cache poisoned");
        Ok(memo.entry(*label).or_insert(r).clone())
    }
}
