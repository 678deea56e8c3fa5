//! Overlap coefficients between the GT basis and the eta-basis on the zero
//! weight space of `V^(m,0,-m)`, their recurrence and Legendre asymptotics,
//! and the pairings `|<Ph(X1) y_(m,0), y'_(m,k)>|`.

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::gt::{Generator, IrrepLabel, Weight};
use crate::harmonic::{phase, weyl_apply};
use crate::rep::{LocalIrrep, WeightBlocks};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Largest `m` handled by the exact oracle and the direct pairing.
pub const ORACLE_MAX_M: i64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Oracle,
    Recurrence,
}

#[derive(Clone, Debug)]
pub struct OverlapTable {
    pub m: i64,
    pub kmax: i64,
    /// `a[j][k]` for `0 <= j <= m`, `0 <= k <= kmax`.
    a: Vec<Vec<f64>>,
    pub source: Source,
    pub omega: Option<f64>,
}

impl OverlapTable {
    /// `a_(m,j,k)`, zero outside the table.
    pub fn get(&self, j: i64, k: i64) -> f64 {
        if j < 0 || k < 0 || j > self.m || k > self.kmax {
            return 0.0;
        }
        self.a[j as usize][k as usize]
    }
}

/// Exact oracle data for one `m`.
#[derive(Clone, Debug)]
pub struct ExactOverlaps {
    pub m: i64,
    /// `a[j][k]`, exact.
    pub a: Vec<Vec<BigRational>>,
    /// `omega_m`, necessarily +-1 here since everything is rational.
    pub omega: BigRational,
    /// Coordinates of `eta_(m,0)` in the unnormalized `xi_(m,j)` basis.
    pub eta0: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn key_label(m: i64) -> Result<IrrepLabel> {
    IrrepLabel::new(m, 0, -m)
}

/// Position of `xi_(m,j)` (second row `(j, -j)`) inside the local zero weight space.
fn zero_weight_order(local: &LocalIrrep) -> Vec<usize> {
    let space = local.space(&Weight::zero());
    let mut pos = vec![0; space.0.len()];
    for (i, p) in space.0.iter().enumerate() {
        pos[p.mid[0] as usize] = i;
    }
    pos
}

/// Exact overlaps by conjugating with `w1 w2 w1` on the zero weight space.
/// `pi(w1)` is `(-1)^j` on `xi_(m,j)`; `pi(w2)` is `sum_k (-1)^k` times the
/// projection onto the eigenvalue `k(k+1)` eigenvector of `X2 X2*`, found by
/// the three-term recurrence of that tridiagonal matrix.
pub fn overlaps_exact(m: i64) -> Result<ExactOverlaps> {
    if m < 0 {
        return Err(Error::InvalidInput(format!("m = {m} must be nonnegative")));
    }
    if m > ORACLE_MAX_M {
        return Err(Error::Capacity(format!(
            "exact overlaps limited to m <= {ORACLE_MAX_M} (got {m}); use the recurrence"
        )));
    }
    let local = LocalIrrep::new(key_label(m)?);
    let n = (m + 1) as usize;
    let pos = zero_weight_order(&local);
    let down = local.exact_block(Generator::X2Star, &Weight::zero())?;
    let up = local.exact_block(Generator::X2, &(-crate::gt::ALPHA2))?;
    let c_local = up.compose(&down)?;
    // C in the j-ordering
    let c = |i: usize, j: usize| c_local.get(pos[i], pos[j]);
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 && !c(i, j).is_zero() {
                return Err(Error::Consistency(format!("X2 X2* not tridiagonal at ({i},{j}), m = {m}")));
            }
        }
    }
    // r_j = |xi_j|^2 / (m!^2 (2m+1)!) = 1 / (2j+1)
    let r: Vec<BigRational> = (0..n).map(|j| BigRational::new(BigInt::one(), BigInt::from(2 * j + 1))).collect();
    let mut vecs: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for kk in 0..n {
        let lambda = q((kk * (kk + 1)) as i64);
        let mut v = vec![BigRational::zero(); n];
        v[0] = BigRational::one();
        for j in 0..n - 1 {
            let sup = c(j, j + 1);
            if sup.is_zero() {
                return Err(Error::Consistency(format!("X2 X2* superdiagonal vanishes at j = {j}, m = {m}")));
            }
            let mut acc = (c(j, j) - &lambda) * &v[j];
            if j > 0 {
                acc += c(j, j - 1) * &v[j - 1];
            }
            v[j + 1] = -acc / sup;
        }
        let last = n - 1;
        let mut resid = (c(last, last) - &lambda) * &v[last];
        if last > 0 {
            resid += c(last, last - 1) * &v[last - 1];
        }
        if !resid.is_zero() {
            return Err(Error::Consistency(format!("{} is not an eigenvalue of X2 X2* at m = {m}", lambda)));
        }
        vecs.push(v);
    }
    // W2[j][k] = sum_q (-1)^q v_j v_k r_k / (sum_i r_i v_i^2)
    let weights: Vec<BigRational> = vecs
        .iter()
        .map(|v| v.iter().zip(&r).fold(BigRational::zero(), |acc, (x, ri)| acc + x * x * ri))
        .collect();
    let w2 = |j: usize, k: usize| {
        let mut s = BigRational::zero();
        for (qq, v) in vecs.iter().enumerate() {
            let term = &v[j] * &v[k] * &r[k] / &weights[qq];
            if qq % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        s
    };
    let sign = |p: usize| if p % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    // eta_k = W1 W2 W1 xi_k has coordinates u_j = (-1)^(j+k) W2[j][k]
    let u: Vec<Vec<BigRational>> = (0..n).map(|j| (0..n).map(|k| sign(j + k) * w2(j, k)).collect()).collect();
    let omega = &u[0][0] * q(m + 1);
    if omega.abs() != BigRational::one() {
        return Err(Error::Consistency(format!("omega_{m} = {omega} is not a sign")));
    }
    let eta0: Vec<BigRational> = (0..n).map(|j| u[j][0].clone()).collect();
    let a = (0..n)
        .map(|j| (0..n).map(|k| sign(j) * &omega * &u[j][k] / BigInt::from(2 * j + 1)).collect())
        .collect();
    Ok(ExactOverlaps { m, a, omega, eta0 })
}

pub fn overlaps_oracle(m: i64) -> Result<OverlapTable> {
    let ex = overlaps_exact(m)?;
    let a = ex.a.iter().map(|row| row.iter().map(to_f64).collect()).collect();
    Ok(OverlapTable { m, kmax: m, a, source: Source::Oracle, omega: Some(to_f64(&ex.omega)) })
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("overlap out of f64 range")
}

/// Marches the three-term recurrence upward in `k` from `a_(m,j,0) = 1/(m+1)`.
pub fn overlaps_recurrence(m: i64, kmax: i64) -> Result<OverlapTable> {
    if m < 0 || kmax < 0 || kmax > m {
        return Err(Error::InvalidInput(format!("need 0 <= kmax <= m, got m = {m}, kmax = {kmax}")));
    }
    let mm = ((m + 1) * (m + 1)) as f64;
    let a = (0..=m)
        .map(|j| {
            let jj = (2 * j * (j + 1)) as f64;
            let mut row = vec![0.0; (kmax + 1) as usize];
            row[0] = 1.0 / (m + 1) as f64;
            for k in 0..kmax {
                let kf = k as f64;
                let prev = if k > 0 { kf * (mm - kf * kf) * row[(k - 1) as usize] } else { 0.0 };
                let mid = (2.0 * kf + 1.0) * (mm - (kf * kf + kf + 1.0) - jj) * row[k as usize];
                let den = (kf + 1.0) * (mm - (kf + 1.0) * (kf + 1.0));
                row[(k + 1) as usize] = -(prev + mid) / den;
            }
            row
        })
        .collect();
    Ok(OverlapTable { m, kmax, a, source: Source::Recurrence, omega: None })
}

/// The same recurrence in exact rational arithmetic. Forward marching in
/// doubles loses accuracy once `k` approaches `m` (roughly `k > 20`), so
/// full tables use this.
pub fn overlaps_recurrence_exact(m: i64, kmax: i64) -> Result<Vec<Vec<BigRational>>> {
    if m < 0 || kmax < 0 || kmax > m {
        return Err(Error::InvalidInput(format!("need 0 <= kmax <= m, got m = {m}, kmax = {kmax}")));
    }
    let mm = (m + 1) * (m + 1);
    Ok((0..=m)
        .map(|j| {
            let mut row = vec![BigRational::zero(); (kmax + 1) as usize];
            row[0] = BigRational::new(BigInt::one(), BigInt::from(m + 1));
            for k in 0..kmax {
                let ku = k as usize;
                let mut acc = q((2 * k + 1) * (mm - (k * k + k + 1) - 2 * j * (j + 1))) * &row[ku];
                if k > 0 {
                    acc += q(k * (mm - k * k)) * &row[ku - 1];
                }
                row[ku + 1] = -acc / q((k + 1) * (mm - (k + 1) * (k + 1)));
            }
            row
        })
        .collect())
}

pub fn overlaps_recurrence_table(m: i64, kmax: i64, exact: bool) -> Result<OverlapTable> {
    if !exact {
        return overlaps_recurrence(m, kmax);
    }
    let a = overlaps_recurrence_exact(m, kmax)?.iter().map(|row| row.iter().map(to_f64).collect()).collect();
    Ok(OverlapTable { m, kmax, a, source: Source::Recurrence, omega: None })
}

/// Legendre polynomial `P_k(x)` by the three-term recurrence.
pub fn legendre(k: i64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for n in 1..k {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `b_(m,j,k) = P_k(2 (j/(m+1))^2 - 1) / (m+1)`.
pub fn legendre_b(m: i64, j: i64, k: i64) -> f64 {
    let t = j as f64 / (m + 1) as f64;
    legendre(k, 2.0 * t * t - 1.0) / (m + 1) as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxRow {
    pub k: i64,
    /// `max over m <= mmax, j of (m+1)^2 |a - b|`.
    pub c_hat: f64,
    /// The `m` attaining the maximum.
    pub argmax_m: i64,
}

/// Fitted constants of the `(m+1)^-2` Legendre approximation, over
/// `kmax <= m <= mmax`.
pub fn approx_error_scan(mmax: i64, kmax: i64, mode: Mode) -> Result<Vec<ApproxRow>> {
    let ms: Vec<i64> = (kmax..=mmax).collect();
    let per_m = exec::try_map(mode, &ms, |&m| -> Result<Vec<f64>> {
        let t = overlaps_recurrence(m, kmax)?;
        Ok((0..=kmax)
            .map(|k| {
                (0..=m)
                    .map(|j| ((m + 1) * (m + 1)) as f64 * (t.get(j, k) - legendre_b(m, j, k)).abs())
                    .fold(0.0, f64::max)
            })
            .collect())
    })?;
    Ok((0..=kmax)
        .map(|k| {
            let mut best = ApproxRow { k, c_hat: 0.0, argmax_m: kmax };
            for (m, row) in ms.iter().zip(&per_m) {
                if row[k as usize] > best.c_hat {
                    best.c_hat = row[k as usize];
                    best.argmax_m = *m;
                }
            }
            best
        })
        .collect())
}

/// `sqrt(2k) (1/(2k-1) - 1/(2k+1))`.
pub fn pairing_limit(k: i64) -> f64 {
    let kf = k as f64;
    (2.0 * kf).sqrt() * (1.0 / (2.0 * kf - 1.0) - 1.0 / (2.0 * kf + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingMethod {
    Direct,
    Sum,
}

/// `|<Ph(X1) y_(m,0), y'_(m,k)>|` from an overlap table via the closed sum.
/// The `j = 0` term is zero since `Ph(X1)` kills `xi_(m,0)`.
pub fn pairing_from_table(t: &OverlapTable, k: i64) -> Result<f64> {
    let m = t.m;
    if k < 1 || k > m || k > t.kmax {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..={} for m = {m}", m.min(t.kmax))));
    }
    let mut s = 0.0;
    for j in 1..=m {
        let jf = j as f64;
        s += (jf + 0.5) / (jf * (jf + 1.0)).sqrt() * (t.get(j, k - 1) + t.get(j, k));
    }
    let kf = k as f64;
    let m1 = (m + 1) as f64;
    Ok((2.0 * kf * (1.0 - kf * kf / (m1 * m1))).sqrt() * s.abs())
}

/// All direct pairings `k = 1..=m` at once, from the weight-space blocks of
/// `V^(m,0,-m)`: `y` vectors are images of GT basis vectors under
/// `pi(w_rho)`, `Ph(X1)` is the SVD phase of `X1: V_0 -> V_alpha1`.
pub fn direct_pairings(m: i64) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(Error::InvalidInput(format!("direct pairing needs m >= 1, got {m}")));
    }
    if m > ORACLE_MAX_M {
        return Err(Error::Capacity(format!("direct pairing limited to m <= {ORACLE_MAX_M} (got {m})")));
    }
    let local = LocalIrrep::new(key_label(m)?);
    let zero = Weight::zero();
    let n0 = local.multiplicity(&zero);
    let pos = zero_weight_order(&local);
    let mut e0 = DMatrix::zeros(n0, 1);
    e0[(pos[0], 0)] = 1.0;
    let (w_y, y0) = weyl_apply(&local, &zero, &e0)?;
    debug_assert_eq!(w_y, zero);
    let x1 = local.block(1, true, &zero);
    let ph = phase(&x1, &vec![zero; n0]).op;
    let img = ph * y0;
    let prime_w = Weight::new(0, -1, 1);
    let prime = local.space(&prime_w);
    let n1 = prime.0.len();
    let (w_t, ys) = weyl_apply(&local, &prime_w, &DMatrix::identity(n1, n1))?;
    if w_t != crate::gt::ALPHA1 {
        return Err(Error::Consistency(format!("eta' landed in weight {w_t}")));
    }
    // xi'_(m,k) has second row (k-1, -k)
    let mut out = vec![0.0; m as usize];
    for (col, p) in prime.0.iter().enumerate() {
        let k = p.mid[0] + 1;
        out[(k - 1) as usize] = img.column(0).dot(&ys.column(col)).abs();
    }
    Ok(out)
}

pub fn phase_pairing(m: i64, k: i64, method: PairingMethod) -> Result<f64> {
    if k < 1 || k > m {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..={m}")));
    }
    match method {
        PairingMethod::Direct => Ok(direct_pairings(m)?[(k - 1) as usize]),
        PairingMethod::Sum => pairing_from_table(&overlaps_recurrence(m, k)?, k),
    }
}

/// `1 - sum_(k=1..l) pairing(m,k)^2`, pairings by the recurrence sum.
pub fn tail_mass(m: i64, l: i64) -> Result<f64> {
    if l < 0 || l > m {
        return Err(Error::InvalidInput(format!("l = {l} outside 0..={m}")));
    }
    if l == 0 {
        return Ok(1.0);
    }
    let t = overlaps_recurrence(m, l)?;
    let mut s = 0.0;
    for k in 1..=l {
        s += pairing_from_table(&t, k)?.powi(2);
    }
    Ok(1.0 - s)
}

/// Exact check of `sum_(k=1..l) 2k (1/(2k-1) - 1/(2k+1))^2 = 1 - 1/(2l+1)^2`.
pub fn telescoping_identity(l: i64) -> bool {
    let mut s = BigRational::zero();
    for k in 1..=l {
        let d = BigRational::new(BigInt::one(), BigInt::from(2 * k - 1)) - BigRational::new(BigInt::one(), BigInt::from(2 * k + 1));
        s += q(2 * k) * &d * &d;
    }
    s == BigRational::one() - BigRational::new(BigInt::one(), BigInt::from((2 * l + 1) * (2 * l + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hand_values_m1() {
        let ex = overlaps_exact(1).unwrap();
        assert_eq!(ex.a[0][0], rat(1, 2));
        assert_eq!(ex.a[1][0], rat(1, 2));
        assert_eq!(ex.a[0][1], rat(-1, 2));
        assert_eq!(ex.a[1][1], rat(1, 6));
    }

    #[test]
    fn first_column_and_eta0() {
        for m in 0..=8 {
            let ex = overlaps_exact(m).unwrap();
            for j in 0..=m as usize {
                assert_eq!(ex.a[j][0], rat(1, m + 1));
                let sign = if j % 2 == 0 { 1 } else { -1 };
                assert_eq!(ex.eta0[j], &ex.omega * rat(sign * (2 * j as i64 + 1), m + 1));
            }
        }
    }

    #[test]
    fn eta_gram_is_diagonal() {
        let m = 6;
        let ex = overlaps_exact(m).unwrap();
        for k in 0..=m as usize {
            for k2 in 0..=m as usize {
                let s = (0..=m as usize).fold(BigRational::zero(), |acc, j| acc + q(2 * j as i64 + 1) * &ex.a[j][k] * &ex.a[j][k2]);
                let want = if k == k2 { rat(1, 2 * k as i64 + 1) } else { BigRational::zero() };
                assert_eq!(s, want, "k={k} k'={k2}");
            }
        }
    }

    #[test]
    fn capacity_error_beyond_oracle_range() {
        assert!(matches!(overlaps_exact(ORACLE_MAX_M + 1), Err(Error::Capacity(_))));
        assert!(matches!(direct_pairings(ORACLE_MAX_M + 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn recurrence_matches_oracle_small() {
        for m in 1..=10 {
            let o = overlaps_oracle(m).unwrap();
            let r = overlaps_recurrence(m, m).unwrap();
            for j in 0..=m {
                for k in 0..=m {
                    assert!((o.get(j, k) - r.get(j, k)).abs() < 1e-12, "m={m} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_b(7, 3, 0), 1.0 / 8.0);
        assert_eq!(legendre_b(7, 0, 1), -1.0 / 8.0);
        assert!((legendre(2, 0.5) - (-0.125)).abs() < 1e-15);
    }

    #[test]
    fn limit_for_k1() {
        assert!((pairing_limit(1) - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn direct_and_sum_agree_small() {
        for m in 1..=8 {
            let d = direct_pairings(m).unwrap();
            let t = overlaps_oracle(m).unwrap();
            for k in 1..=m {
                let s = pairing_from_table(&t, k).unwrap();
                assert!((d[(k - 1) as usize] - s).abs() < 1e-10, "m={m} k={k}: {} vs {s}", d[(k - 1) as usize]);
            }
        }
    }

    #[test]
    fn full_tail_is_the_killed_component() {
        // Ph(X1) annihilates the xi_(m,0) component of y_(m,0), of weight 1/(m+1)^2
        for m in [3, 10, 20] {
            let want = 1.0 / ((m + 1) * (m + 1)) as f64;
            assert!((tail_mass(m, m).unwrap() - want).abs() < 1e-8, "m={m}");
        }
    }

    #[test]
    fn exact_recurrence_equals_oracle() {
        for m in [1, 7, 16] {
            let ex = overlaps_exact(m).unwrap();
            assert_eq!(overlaps_recurrence_exact(m, m).unwrap(), ex.a, "m={m}");
        }
    }

    #[test]
    fn telescoping() {
        for l in 0..=50 {
            assert!(telescoping_identity(l));
        }
    }

    proptest! {
        #[test]
        fn legendre_b_bounded(m in 1i64..300, jr in 0.0f64..1.0, k in 0i64..9) {
            let j = (jr * m as f64) as i64;
            prop_assert!(legendre_b(m, j, k).abs() <= 1.0 / (m + 1) as f64 + 1e-15);
        }

        #[test]
        fn tail_non_increasing(m in 10i64..200, l in 1i64..9) {
            prop_assert!(tail_mass(m, l).unwrap() <= tail_mass(m, l - 1).unwrap() + 1e-15);
        }
    }
}
