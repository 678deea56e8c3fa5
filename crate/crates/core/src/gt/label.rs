use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Highest weight of an irreducible gl(3)-module, `m1 >= m2 >= m3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
}

impl IrrepLabel {
    pub fn new(m1: i64, m2: i64, m3: i64) -> Result<Self> {
        if m1 < m2 || m2 < m3 {
            return Err(Error::InvalidLabel(m1, m2, m3));
        }
        Ok(IrrepLabel { m1, m2, m3 })
    }

    /// Label with sl(3) Dynkin labels `(a, b)`, normalized so that `m3 = 0`.
    pub fn from_dynkin(a: i64, b: i64) -> Result<Self> {
        IrrepLabel::new(a + b, b, 0)
    }

    pub fn trivial() -> Self {
        IrrepLabel { m1: 0, m2: 0, m3: 0 }
    }

    pub fn adjoint() -> Self {
        IrrepLabel { m1: 1, m2: 0, m3: -1 }
    }

    pub fn dynkin(&self) -> (i64, i64) {
        (self.m1 - self.m2, self.m2 - self.m3)
    }

    /// `m1 - m3`, the size parameter bounded by the scan settings.
    pub fn span(&self) -> i64 {
        self.m1 - self.m3
    }

    /// Weyl dimension formula.
    pub fn dim(&self) -> usize {
        let (a, b) = self.dynkin();
        ((a + 1) * (b + 1) * (a + b + 2) / 2) as usize
    }

    pub fn as_weight(&self) -> Weight {
        Weight::new(self.m1, self.m2, self.m3)
    }

    /// Sum of the entries; fixes the gl(3)-coset of every weight of the module.
    pub fn total(&self) -> i64 {
        self.m1 + self.m2 + self.m3
    }

    pub fn sl3_equivalent(&self, other: &IrrepLabel) -> bool {
        self.dynkin() == other.dynkin()
    }

    /// Contragredient: `(m1, m2, m3) -> (-m3, -m2, -m1)`.
    pub fn dual(&self) -> IrrepLabel {
        IrrepLabel { m1: -self.m3, m2: -self.m2, m3: -self.m1 }
    }

    /// Representative with `m3 = 0`.
    pub fn canonical(&self) -> IrrepLabel {
        IrrepLabel { m1: self.m1 - self.m3, m2: self.m2 - self.m3, m3: 0 }
    }

    /// All canonical labels with `m1 - m3 <= span`, ordered by span then label.
    pub fn all_up_to_span(span: i64) -> Vec<IrrepLabel> {
        let mut out = Vec::new();
        for s in 0..=span {
            for m2 in (0..=s).rev() {
                out.push(IrrepLabel { m1: s, m2, m3: 0 });
            }
        }
        out
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m1, self.m2, self.m3)
    }
}

impl std::str::FromStr for IrrepLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!("expected m1,m2,m3 but got {s:?}")));
        }
        let mut v = [0i64; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("not an integer: {p:?}")))?;
        }
        IrrepLabel::new(v[0], v[1], v[2])
    }
}

/// A gl(3) weight `(w1, w2, w3)`. sl(3) weights are these modulo `(1,1,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub [i64; 3]);

pub const ALPHA1: Weight = Weight([1, -1, 0]);
pub const ALPHA2: Weight = Weight([0, 1, -1]);
pub const RHO: Weight = Weight([1, 0, -1]);

impl Weight {
    pub const fn new(w1: i64, w2: i64, w3: i64) -> Self {
        Weight([w1, w2, w3])
    }

    pub fn zero() -> Self {
        Weight([0, 0, 0])
    }

    /// Simple root `alpha_i`, `i` in {1, 2}.
    pub fn simple_root(i: usize) -> Weight {
        match i {
            1 => ALPHA1,
            2 => ALPHA2,
            _ => panic!("simple root index must be 1 or 2, got {i}"),
        }
    }

    /// Pairing with the coroot `H_i`: `w1 - w2` or `w2 - w3`.
    pub fn h(&self, i: usize) -> i64 {
        match i {
            1 => self.0[0] - self.0[1],
            2 => self.0[1] - self.0[2],
            _ => panic!("coroot index must be 1 or 2, got {i}"),
        }
    }

    /// Eigenvalue of `H_1' = diag(1,1,-2)`.
    pub fn h1_prime(&self) -> i64 {
        self.0[0] + self.0[1] - 2 * self.0[2]
    }

    /// Eigenvalue of `H_2' = diag(-2,1,1)`.
    pub fn h2_prime(&self) -> i64 {
        -2 * self.0[0] + self.0[1] + self.0[2]
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> Weight {
        Weight([self.0[2], self.0[1], self.0[0]])
    }

    /// Simple reflection `s_i`: swaps coordinates `i` and `i+1`.
    pub fn reflect(&self, i: usize) -> Weight {
        let mut w = self.0;
        w.swap(i - 1, i);
        Weight(w)
    }

    pub fn sl3_equivalent(&self, other: &Weight) -> bool {
        self.h(1) == other.h(1) && self.h(2) == other.h(2)
    }

    /// Representative of the sl(3) class with coordinate sum `total`, if the
    /// class meets that coset.
    pub fn lift_to_total(&self, total: i64) -> Option<Weight> {
        let d = total - self.total();
        if d.rem_euclid(3) != 0 {
            return None;
        }
        let t = d / 3;
        Some(Weight([self.0[0] + t, self.0[1] + t, self.0[2] + t]))
    }

    /// Scaled by an integer.
    pub fn scale(&self, k: i64) -> Weight {
        Weight([k * self.0[0], k * self.0[1], k * self.0[2]])
    }

    pub fn is_dominant(&self) -> bool {
        self.0[0] >= self.0[1] && self.0[1] >= self.0[2]
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}
