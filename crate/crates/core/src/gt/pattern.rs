use super::label::{IrrepLabel, Weight};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A Gelfand-Tsetlin pattern
///
/// ```text
/// l31   l32   l33
///    l21   l22
///       l11
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GTPattern {
    pub top: [i64; 3],
    pub mid: [i64; 2],
    pub bot: i64,
}

impl GTPattern {
    pub fn new(top: [i64; 3], mid: [i64; 2], bot: i64) -> Self {
        GTPattern { top, mid, bot }
    }

    /// Flattened entries `[l31, l32, l33, l21, l22, l11]`.
    pub fn entries(&self) -> [i64; 6] {
        [self.top[0], self.top[1], self.top[2], self.mid[0], self.mid[1], self.bot]
    }

    pub fn from_entries(e: [i64; 6]) -> Self {
        GTPattern { top: [e[0], e[1], e[2]], mid: [e[3], e[4]], bot: e[5] }
    }

    pub fn label(&self) -> IrrepLabel {
        IrrepLabel { m1: self.top[0], m2: self.top[1], m3: self.top[2] }
    }

    /// Entry `lambda_{k,j}` (1-based row `k`, column `j`).
    pub fn entry(&self, k: usize, j: usize) -> i64 {
        match (k, j) {
            (3, 1..=3) => self.top[j - 1],
            (2, 1..=2) => self.mid[j - 1],
            (1, 1) => self.bot,
            _ => panic!("no GT entry ({k},{j})"),
        }
    }

    /// `l_{k,j} = lambda_{k,j} - j + 1`.
    pub fn l(&self, k: usize, j: usize) -> i64 {
        self.entry(k, j) - j as i64 + 1
    }

    /// Row sum `s_k`, with `s_0 = 0`.
    pub fn row_sum(&self, k: usize) -> i64 {
        match k {
            0 => 0,
            1 => self.bot,
            2 => self.mid[0] + self.mid[1],
            3 => self.top.iter().sum(),
            _ => panic!("no GT row {k}"),
        }
    }

    pub fn is_valid(&self) -> bool {
        let t = self.top;
        let m = self.mid;
        t[0] >= m[0] && m[0] >= t[1] && t[1] >= m[1] && m[1] >= t[2] && m[0] >= self.bot && self.bot >= m[1]
    }

    /// Weight `(s1 - s0, s2 - s1, s3 - s2)`.
    pub fn weight(&self) -> Weight {
        Weight([
            self.row_sum(1) - self.row_sum(0),
            self.row_sum(2) - self.row_sum(1),
            self.row_sum(3) - self.row_sum(2),
        ])
    }

    /// Highest `s_1`-weight of the string through this vector: `l21 - l22`
    /// on the second row.
    pub fn s1_delta(&self) -> i64 {
        self.mid[0] - self.mid[1]
    }

    /// `Lambda + d * delta_{k,j}`; not checked for validity.
    pub fn shifted(&self, k: usize, j: usize, d: i64) -> GTPattern {
        let mut p = *self;
        match (k, j) {
            (2, 1..=2) => p.mid[j - 1] += d,
            (1, 1) => p.bot += d,
            _ => panic!("cannot shift GT entry ({k},{j})"),
        }
        p
    }

    /// Adds `t` to every entry (the constant-pattern redundancy).
    pub fn translated(&self, t: i64) -> GTPattern {
        GTPattern {
            top: [self.top[0] + t, self.top[1] + t, self.top[2] + t],
            mid: [self.mid[0] + t, self.mid[1] + t],
            bot: self.bot + t,
        }
    }
}

impl fmt::Display for GTPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{};{},{};{}]",
            self.top[0], self.top[1], self.top[2], self.mid[0], self.mid[1], self.bot
        )
    }
}

/// All patterns with top row `label`, ordered by `(l21, l22, l11)` descending.
pub fn enumerate_patterns(label: &IrrepLabel) -> Result<Vec<GTPattern>> {
    let label = IrrepLabel::new(label.m1, label.m2, label.m3)?;
    let top = [label.m1, label.m2, label.m3];
    let mut out = Vec::with_capacity(label.dim());
    for l21 in (label.m2..=label.m1).rev() {
        for l22 in (label.m3..=label.m2).rev() {
            for l11 in (l22..=l21).rev() {
                out.push(GTPattern::new(top, [l21, l22], l11));
            }
        }
    }
    Ok(out)
}

/// Patterns of a fixed weight, in the same relative order as [`enumerate_patterns`].
pub fn weight_space_patterns(label: &IrrepLabel, weight: &Weight) -> Result<Vec<GTPattern>> {
    let label = IrrepLabel::new(label.m1, label.m2, label.m3)?;
    if weight.total() != label.total() {
        return Ok(Vec::new());
    }
    let top = [label.m1, label.m2, label.m3];
    let l11 = weight.0[0];
    let s2 = weight.0[0] + weight.0[1];
    let mut out = Vec::new();
    for l21 in (label.m2..=label.m1).rev() {
        let l22 = s2 - l21;
        if l22 < label.m3 || l22 > label.m2 {
            continue;
        }
        if l21 >= l11 && l11 >= l22 {
            out.push(GTPattern::new(top, [l21, l22], l11));
        }
    }
    Ok(out)
}

/// Multiplicity of a gl(3) weight in the module with the given label.
pub fn weight_multiplicity(label: &IrrepLabel, weight: &Weight) -> usize {
    weight_space_patterns(label, weight).map(|v| v.len()).unwrap_or(0)
}

/// Weight multiplicities by pattern counting.
pub fn weight_multiplicities(label: &IrrepLabel) -> Result<BTreeMap<Weight, usize>> {
    let mut out = BTreeMap::new();
    for p in enumerate_patterns(label)? {
        *out.entry(p.weight()).or_insert(0) += 1;
    }
    Ok(out)
}
