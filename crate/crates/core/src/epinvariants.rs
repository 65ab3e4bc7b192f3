//! Lattice invariants of a finite-order automorphism θ: the reciprocal
//! characteristic polynomial `P(z) = det(1 − zθ | X*(S))`, the orientation
//! sign `ε(θ)` and the Lefschetz numbers of the trivial and Steinberg
//! representations.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order searched when validating that θ has finite order.
pub const MAX_FINITE_ORDER: u32 = 60;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismData {
    pub s_rank: usize,
    pub theta_on_s: IntMatrix,
    pub q: usize,
    pub theta_on_sprime_mod_s: IntMatrix,
}

impl AutomorphismData {
    pub fn new(theta_on_s: IntMatrix, q: usize, theta_on_sprime_mod_s: IntMatrix) -> Result<Self> {
        let data = AutomorphismData {
            s_rank: theta_on_s.len(),
            theta_on_s,
            q,
            theta_on_sprime_mod_s,
        };
        data.validate()?;
        Ok(data)
    }

    /// `GL(2n)` with `θ(g) = J ᵗg⁻¹ J`: `S = G_m` with θ = −1, and θ permutes
    /// the simple roots of the diagonal torus mod center by `i ↦ 2n − i`.
    pub fn gl2n(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let q = 2 * n - 1;
        let mut rev = vec![vec![0; q]; q];
        for (j, row) in (0..q).rev().enumerate() {
            rev[row][j] = 1;
        }
        AutomorphismData::new(vec![vec![-1]], q, rev)
    }

    pub fn validate(&self) -> Result<()> {
        check_square(&self.theta_on_s, self.s_rank, "theta_on_S")?;
        check_square(&self.theta_on_sprime_mod_s, self.q, "theta_on_Sprime_mod_S")?;
        check_automorphism(&self.theta_on_s, "theta_on_S")?;
        check_automorphism(&self.theta_on_sprime_mod_s, "theta_on_Sprime_mod_S")?;
        Ok(())
    }
}

fn check_square(m: &IntMatrix, size: usize, what: &str) -> Result<()> {
    if m.len() != size || m.iter().any(|r| r.len() != size) {
        return Err(Error::InvalidParameter(format!("{what} must be {size}x{size}")));
    }
    Ok(())
}

fn check_automorphism(m: &IntMatrix, what: &str) -> Result<()> {
    let d = determinant(m)?;
    if d.abs() != 1 {
        return Err(Error::InvalidParameter(format!("{what} has determinant {d}, not ±1")));
    }
    if finite_order(m)?.is_none() {
        return Err(Error::InvalidParameter(format!(
            "{what} has no finite order up to {MAX_FINITE_ORDER}"
        )));
    }
    Ok(())
}

fn overflow() -> Error {
    Error::NumericalGuard("integer overflow in lattice computation".into())
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i64;
            for (k, bk) in b.iter().enumerate() {
                s = a[i][k]
                    .checked_mul(bk[j])
                    .and_then(|x| s.checked_add(x))
                    .ok_or_else(overflow)?;
            }
            out[i][j] = s;
        }
    }
    Ok(out)
}

fn is_identity(m: &IntMatrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
}

/// Smallest `k ≤ MAX_FINITE_ORDER` with `m^k = 1`.
pub fn finite_order(m: &IntMatrix) -> Result<Option<u32>> {
    let mut p = m.clone();
    for k in 1..=MAX_FINITE_ORDER {
        if is_identity(&p) {
            return Ok(Some(k));
        }
        p = match mat_mul(&p, m) {
            Ok(p) => p,
            Err(_) => return Ok(None),
        };
    }
    Ok(None)
}

/// Fraction-free Gaussian elimination.
pub fn determinant(m: &IntMatrix) -> Result<i64> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or_else(overflow)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| overflow())
}

/// Coefficients of `P(z) = det(1 − zθ)`, constant term first.
///
/// Uses the Faddeev–LeVerrier recursion for `det(z − θ)` and reverses it.
pub fn char_poly_p(data: &AutomorphismData) -> Result<Vec<i64>> {
    reciprocal_char_poly(&data.theta_on_s)
}

pub fn reciprocal_char_poly(theta: &IntMatrix) -> Result<Vec<i64>> {
    let n = theta.len();
    // c[k] is the coefficient of z^k in det(z − θ)
    let mut c = vec![0i64; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i64; n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = row[i].checked_add(c[n - k + 1]).ok_or_else(overflow)?;
        }
        let am = mat_mul(theta, &m)?;
        let tr = (0..n).try_fold(0i64, |s, i| s.checked_add(am[i][i]).ok_or_else(overflow))?;
        c[n - k] = -tr / k as i64;
        m = am;
    }
    // z^n det(1/z − θ) = det(1 − zθ)
    c.reverse();
    Ok(c)
}

pub fn eval_poly(p: &[i64], z: i64) -> i64 {
    p.iter().rev().fold(0, |acc, &c| acc * z + c)
}

/// Roots of `P`, i.e. inverse eigenvalues of θ.
pub fn p_roots(data: &AutomorphismData) -> Result<Vec<Complex64>> {
    let n = data.s_rank;
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(data.theta_on_s[i][j] as f64, 0.0));
    let eig = Schur::try_new(m, f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::NumericalGuard("eigenvalues of θ did not converge".into()))?;
    Ok(eig.iter().map(|z| z.inv()).collect())
}

/// `ε(θ) = det(θ | X*(S'/S))`.
pub fn epsilon_theta(data: &AutomorphismData) -> Result<i64> {
    determinant(&data.theta_on_sprime_mod_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LefschetzNumbers {
    pub trivial: i64,
    pub steinberg: i64,
    /// `S^θ ≠ 1`: both numbers vanish.
    pub vanishing: bool,
}

pub fn lefschetz_numbers(data: &AutomorphismData) -> Result<LefschetzNumbers> {
    let p1 = eval_poly(&char_poly_p(data)?, 1);
    if p1 == 0 {
        return Ok(LefschetzNumbers {
            trivial: 0,
            steinberg: 0,
            vanishing: true,
        });
    }
    let sign = if data.q.is_multiple_of(2) { 1 } else { -1 };
    Ok(LefschetzNumbers {
        trivial: p1,
        steinberg: p1 * sign * epsilon_theta(data)?,
        vanishing: false,
    })
}

/// How a representation's Lefschetz number is determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LefschetzClass {
    Trivial,
    Steinberg,
    Zero,
}

/// Tags `1`/`trivial` and `st`/`steinberg` are recognized; every other
/// representation has vanishing Lefschetz number.
pub fn classify_representation(tag: &str) -> LefschetzClass {
    match tag.trim().to_ascii_lowercase().as_str() {
        "1" | "trivial" | "triv" => LefschetzClass::Trivial,
        "st" | "steinberg" => LefschetzClass::Steinberg,
        _ => LefschetzClass::Zero,
    }
}

pub fn lefschetz_for(data: &AutomorphismData, tag: &str) -> Result<i64> {
    let lef = lefschetz_numbers(data)?;
    Ok(match classify_representation(tag) {
        LefschetzClass::Trivial => lef.trivial,
        LefschetzClass::Steinberg => lef.steinberg,
        LefschetzClass::Zero => 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyCheck {
    pub dims: Vec<u64>,
    pub traces: Vec<i64>,
    pub alternating_sum: i64,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Traces of θ on `Λ^i X*(S)` as sums of principal minors, checked against
/// `P(1)`.
pub fn torus_cohomology_check(data: &AutomorphismData) -> Result<CohomologyCheck> {
    let n = data.s_rank;
    let mut dims = Vec::with_capacity(n + 1);
    let mut traces = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let idx = subsets(n, k);
        dims.push(idx.len() as u64);
        let mut tr = 0i64;
        for s in &idx {
            let minor: IntMatrix = s
                .iter()
                .map(|&i| s.iter().map(|&j| data.theta_on_s[i][j]).collect())
                .collect();
            tr = tr.checked_add(determinant(&minor)?).ok_or_else(overflow)?;
        }
        traces.push(tr);
    }
    let alternating_sum = traces
        .iter()
        .enumerate()
        .map(|(i, t)| if i % 2 == 0 { *t } else { -t })
        .sum();
    let p1 = eval_poly(&char_poly_p(data)?, 1);
    if alternating_sum != p1 {
        return Err(Error::NumericalGuard(format!(
            "alternating trace sum {alternating_sum} differs from P(1) = {p1}"
        )));
    }
    Ok(CohomologyCheck {
        dims,
        traces,
        alternating_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyJson {
    pub dims: Vec<u64>,
    pub traces: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpReport {
    #[serde(rename = "P")]
    pub p: Vec<i64>,
    #[serde(rename = "P1")]
    pub p1: i64,
    pub q: usize,
    pub epsilon: i64,
    pub lef_trivial: i64,
    pub lef_steinberg: i64,
    pub vanishing: bool,
    pub cohomology: CohomologyJson,
}

pub fn ep_report(data: &AutomorphismData) -> Result<EpReport> {
    let p = char_poly_p(data)?;
    let lef = lefschetz_numbers(data)?;
    let coh = torus_cohomology_check(data)?;
    Ok(EpReport {
        p1: eval_poly(&p, 1),
        p,
        q: data.q,
        epsilon: epsilon_theta(data)?,
        lef_trivial: lef.trivial,
        lef_steinberg: lef.steinberg,
        vanishing: lef.vanishing,
        cohomology: CohomologyJson {
            dims: coh.dims,
            traces: coh.traces,
        },
    })
}
