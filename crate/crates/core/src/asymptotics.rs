//! Synthetic elliptic sides: linear combinations `Σ c_i θ_λ(γ_i)` of character
//! values at torus elements, the principal-term dominance envelope as `λ` moves
//! away from the walls, and a finite-height positivity certificate.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{
    char_singular_with_levi, decay_ratio_with_levi, singular_prefactor, weyl_polynomial,
};
use crate::error::{Error, Result};
use crate::parallel::{try_map_collect, Execution};
use crate::rational::{big_to_f64, serde_complex, ComplexJson, Q};
use crate::rootdata::{build_root_datum, Family, LatticeKind, RootDatum, TorusElement, Weight};
use crate::weylgroup::{levi_of, LeviDatum};

/// Largest number of candidate weights a positivity search may enumerate.
pub const POSITIVITY_BUDGET: u128 = 200_000;
/// Relative slack for the hypothesis `Re S ≥ 0, Im S = 0`.
pub const HYPOTHESIS_TOL: f64 = 1e-8;
/// Relative threshold for a strict witness `Re S > 0`.
pub const WITNESS_TOL: f64 = 1e-6;
/// Largest `k` searched by [`certified_k`].
pub const K_SEARCH_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone)]
pub struct SideClass {
    pub gamma: TorusElement,
    pub coeff: Complex64,
}

/// An elliptic side with its centralizer data precomputed.
#[derive(Debug, Clone)]
pub struct GeometricSide {
    datum: RootDatum,
    classes: Vec<SideClass>,
    principal_index: usize,
    levis: Vec<LeviDatum>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SideClassJson {
    pub angles: TorusElement,
    pub coeff: ComplexJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometricSideJson {
    pub family: Family,
    pub rank: usize,
    #[serde(default = "default_lattice")]
    pub lattice: LatticeKind,
    pub classes: Vec<SideClassJson>,
    pub principal_index: usize,
}

fn default_lattice() -> LatticeKind {
    LatticeKind::Integral
}

impl GeometricSide {
    pub fn new(datum: RootDatum, classes: Vec<SideClass>, principal_index: usize) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidParameter("a side needs at least one class".into()));
        }
        if principal_index >= classes.len() {
            return Err(Error::InvalidParameter(format!(
                "principal_index {principal_index} out of range for {} classes",
                classes.len()
            )));
        }
        for (i, c) in classes.iter().enumerate() {
            datum.check_len(c.gamma.len())?;
            if !c.coeff.re.is_finite() || !c.coeff.im.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient {i} is not finite")));
            }
            let central = datum.is_central(&c.gamma);
            if central != (i == principal_index) {
                return Err(Error::InvalidParameter(if central {
                    format!("class {i} is central but is not the principal class")
                } else {
                    format!("principal class {i} is not central")
                }));
            }
        }
        let levis = classes
            .iter()
            .map(|c| levi_of(&datum, &c.gamma))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeometricSide {
            datum,
            classes,
            principal_index,
            levis,
        })
    }

    pub fn from_json(json: &GeometricSideJson) -> Result<Self> {
        let datum = build_root_datum(json.family, json.rank, json.lattice)?;
        let classes = json
            .classes
            .iter()
            .map(|c| SideClass {
                gamma: c.angles.clone(),
                coeff: c.coeff.into(),
            })
            .collect();
        GeometricSide::new(datum, classes, json.principal_index)
    }

    pub fn to_json(&self) -> GeometricSideJson {
        GeometricSideJson {
            family: self.datum.family(),
            rank: self.datum.rank(),
            lattice: self.datum.lattice_kind(),
            classes: self
                .classes
                .iter()
                .map(|c| SideClassJson {
                    angles: c.gamma.clone(),
                    coeff: c.coeff.into(),
                })
                .collect(),
            principal_index: self.principal_index,
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn classes(&self) -> &[SideClass] {
        &self.classes
    }

    pub fn principal_index(&self) -> usize {
        self.principal_index
    }

    pub fn principal(&self) -> &SideClass {
        &self.classes[self.principal_index]
    }

    /// Same classes with new coefficients.
    pub fn with_coeffs(&self, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != self.classes.len() {
            return Err(Error::LengthMismatch {
                expected: self.classes.len(),
                got: coeffs.len(),
            });
        }
        let mut out = self.clone();
        for (c, z) in out.classes.iter_mut().zip(coeffs) {
            c.coeff = *z;
        }
        Ok(out)
    }
}

/// `Σ_i c_i θ_λ(γ_i)`; the principal class contributes `c_0 γ_0^λ P(λ)`.
pub fn evaluate_side(side: &GeometricSide, lambda: &Weight) -> Result<Complex64> {
    side.datum.check_dominant(lambda)?;
    let mut sum = Complex64::zero();
    for (c, levi) in side.classes.iter().zip(&side.levis) {
        sum += c.coeff * char_singular_with_levi(levi, lambda)?.value;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceRow {
    pub k: u64,
    #[serde(with = "serde_complex")]
    pub ratio: Complex64,
    /// `c_0 γ_0^{kλ}`.
    #[serde(with = "serde_complex")]
    pub principal: Complex64,
    pub deviation: f64,
    pub bound: f64,
    /// Sign of `Re ratio` once the envelope certifies it.
    pub sign: Option<i8>,
}

fn check_direction(side: &GeometricSide, direction: &Weight) -> Result<()> {
    side.datum.check_weight(direction)?;
    if !side.datum.is_strictly_dominant(direction) {
        return Err(Error::NotDominant(format!("{direction} is not strictly dominant")));
    }
    Ok(())
}

/// `Σ_{noncentral} |c_i| |prefactor_i| |W^{M_i}| · decay_ratio(λ, γ_i)`.
pub fn envelope(side: &GeometricSide, lambda: &Weight) -> Result<f64> {
    let mut bound = 0.0;
    for (i, (c, levi)) in side.classes.iter().zip(&side.levis).enumerate() {
        if i == side.principal_index {
            continue;
        }
        let decay = big_to_f64(&decay_ratio_with_levi(levi, lambda)?);
        bound += c.coeff.norm() * singular_prefactor(levi)?.norm() * levi.min_reps.len() as f64 * decay;
    }
    Ok(bound)
}

fn dominance_row(side: &GeometricSide, direction: &Weight, k: u64) -> Result<DominanceRow> {
    let lambda = direction.scale(Q::from_integer(k as i64));
    let datum = &side.datum;
    let p = big_to_f64(&weyl_polynomial(datum.positive_roots(), datum.rho(), &lambda));
    let ratio = evaluate_side(side, &lambda)? / p;
    let c0 = side.principal();
    let principal = c0.coeff * c0.gamma.monomial(&lambda);
    let bound = envelope(side, &lambda)?;
    let sign = (bound < principal.re.abs()).then_some(if principal.re > 0.0 { 1 } else { -1 });
    Ok(DominanceRow {
        k,
        ratio,
        principal,
        deviation: (ratio - principal).norm(),
        bound,
        sign,
    })
}

/// Rows for `k = 1..=k_max`.
pub fn dominance_report(side: &GeometricSide, direction: &Weight, k_max: u64) -> Result<Vec<DominanceRow>> {
    dominance_report_with(side, direction, k_max, Execution::default())
}

pub fn dominance_report_with(
    side: &GeometricSide,
    direction: &Weight,
    k_max: u64,
    exec: Execution,
) -> Result<Vec<DominanceRow>> {
    if k_max < 2 {
        return Err(Error::InvalidParameter("k_max must be at least 2".into()));
    }
    let ks: Vec<u64> = (1..=k_max).collect();
    dominance_rows(side, direction, &ks, exec)
}

/// Rows at an arbitrary list of multipliers.
pub fn dominance_rows(
    side: &GeometricSide,
    direction: &Weight,
    ks: &[u64],
    exec: Execution,
) -> Result<Vec<DominanceRow>> {
    check_direction(side, direction)?;
    if ks.contains(&0) {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    try_map_collect(exec, ks, |&k| dominance_row(side, direction, k))
}

/// Smallest `k` with `bound(k) ≤ eps`. The envelope is nonincreasing along a
/// strictly dominant ray, so the search is a doubling followed by bisection.
pub fn certified_k(side: &GeometricSide, direction: &Weight, eps: f64) -> Result<u64> {
    check_direction(side, direction)?;
    let bound_at = |k: u64| envelope(side, &direction.scale(Q::from_integer(k as i64)));
    if bound_at(1)? <= eps {
        return Ok(1);
    }
    let mut hi = 2u64;
    while bound_at(hi)? > eps {
        if hi >= K_SEARCH_LIMIT {
            return Err(Error::CapExceeded {
                what: "dominance multiplier",
                size: hi as u128,
                cap: K_SEARCH_LIMIT as u128,
            });
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound_at(mid)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Dominant weights `σ` with `⟨σ+ρ, α∨⟩ ≤ height_cap` for every positive root.
///
/// For type A the central coordinate `σ_{n+1}` is restricted to
/// `[−height_cap, height_cap]`.
pub fn dominant_weights_below(datum: &RootDatum, height_cap: u64) -> Result<Vec<Weight>> {
    if height_cap == 0 {
        return Err(Error::InvalidParameter("height_cap must be at least 1".into()));
    }
    let rank = datum.rank();
    let per = height_cap as u128;
    let central = if datum.family() == Family::A { 2 * per + 1 } else { 1 };
    let size = per
        .checked_pow(rank as u32)
        .and_then(|x| x.checked_mul(central))
        .unwrap_or(u128::MAX);
    if size > POSITIVITY_BUDGET {
        return Err(Error::CapExceeded {
            what: "positivity enumeration",
            size,
            cap: POSITIVITY_BUDGET,
        });
    }
    let cap = height_cap as i64;
    let mut out = Vec::new();
    let mut a = vec![0i64; rank];
    loop {
        let shifts: Vec<i64> = if datum.family() == Family::A {
            (-cap..=cap).collect()
        } else {
            vec![0]
        };
        for c in shifts {
            let sigma = weight_from_fundamental(datum.family(), &a, c);
            let shifted = &sigma + datum.rho();
            let within = datum
                .positive_roots()
                .iter()
                .all(|r| datum.coroot_pairing(&shifted, r) <= Q::from_integer(cap));
            if within && datum.is_admissible(&sigma) && datum.is_dominant(&sigma) {
                out.push(sigma);
            }
        }
        // odometer over a_i ∈ [0, cap−1]
        let mut i = 0;
        loop {
            if i == rank {
                return Ok(out);
            }
            a[i] += 1;
            if a[i] < cap {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

/// The weight with `⟨σ, α_i∨⟩ = a_i` on the simple roots (and last
/// coordinate `c` in type A).
pub fn weight_from_fundamental(family: Family, a: &[i64], c: i64) -> Weight {
    let n = a.len();
    let q = Q::from_integer;
    let mut v = match family {
        Family::A => {
            let mut v = vec![Q::zero(); n + 1];
            v[n] = q(c);
            for i in (0..n).rev() {
                v[i] = v[i + 1] + q(a[i]);
            }
            return Weight(v);
        }
        Family::B => {
            let mut v = vec![Q::zero(); n];
            v[n - 1] = Q::new(a[n - 1], 2);
            v
        }
        Family::C => {
            let mut v = vec![Q::zero(); n];
            v[n - 1] = q(a[n - 1]);
            v
        }
        Family::D => {
            let mut v = vec![Q::zero(); n];
            v[n - 1] = Q::new(a[n - 1] - a[n - 2], 2);
            v[n - 2] = Q::new(a[n - 1] + a[n - 2], 2);
            v
        }
    };
    let start = if family == Family::D { n - 2 } else { n - 1 };
    for i in (0..start).rev() {
        v[i] = v[i + 1] + q(a[i]);
    }
    Weight(v)
}

/// Character values `θ_σ(γ_j)` for a fixed weight list and class list, so that
/// many coefficient vectors can be certified cheaply.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub weights: Vec<Weight>,
    pub dims: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
    pub height_cap: u64,
}

impl CharacterTable {
    pub fn new(datum: &RootDatum, classes: &[TorusElement], height_cap: u64) -> Result<Self> {
        CharacterTable::with_execution(datum, classes, height_cap, Execution::default())
    }

    pub fn with_execution(
        datum: &RootDatum,
        classes: &[TorusElement],
        height_cap: u64,
        exec: Execution,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidParameter("no classes".into()));
        }
        if !datum.is_central(&classes[0]) {
            return Err(Error::InvalidParameter("class 0 must be central".into()));
        }
        let weights = dominant_weights_below(datum, height_cap)?;
        let levis = try_map_collect(exec, classes, |g| levi_of(datum, g))?;
        let values = try_map_collect(exec, &weights, |w| {
            levis
                .iter()
                .map(|l| char_singular_with_levi(l, w).map(|r| r.value))
                .collect::<Result<Vec<_>>>()
        })?;
        let dims = weights
            .iter()
            .map(|w| {
                weyl_polynomial(datum.positive_roots(), datum.rho(), w)
                    .to_f64()
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        Ok(CharacterTable {
            weights,
            dims,
            values,
            height_cap,
        })
    }

    pub fn class_count(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Inconclusive,
    HypothesisViolated,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityCertificate {
    pub hypothesis_ok: bool,
    pub strict_witness: Option<Weight>,
    #[serde(with = "serde_complex")]
    pub lambda0: Complex64,
    /// `S(σ)/dim σ` at the tested weight of largest dimension.
    #[serde(with = "serde_complex")]
    pub lambda0_estimate: Complex64,
    pub verdict: Verdict,
    pub violation: Option<Weight>,
    pub height_cap: u64,
    pub tested: usize,
}

/// Checks `S(σ) = Σ_i c_i θ_σ(γ_i) ≥ 0` for every tabulated `σ`.
pub fn certify(table: &CharacterTable, coeffs: &[Complex64]) -> Result<PositivityCertificate> {
    certify_with_tolerance(table, coeffs, HYPOTHESIS_TOL)
}

/// [`certify`] with a custom relative hypothesis tolerance.
pub fn certify_with_tolerance(
    table: &CharacterTable,
    coeffs: &[Complex64],
    tol: f64,
) -> Result<PositivityCertificate> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter("tolerance must be finite and nonnegative".into()));
    }
    if coeffs.len() != table.class_count() {
        return Err(Error::LengthMismatch {
            expected: table.class_count(),
            got: coeffs.len(),
        });
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidParameter("coefficients must be finite".into()));
    }
    let mass: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let mut violation = None;
    let mut witness = None;
    let mut estimate = (0.0, Complex64::zero());
    for ((w, dim), row) in table.weights.iter().zip(&table.dims).zip(&table.values) {
        let s: Complex64 = row.iter().zip(coeffs).map(|(v, c)| v * c).sum();
        let scale = mass * dim;
        if violation.is_none() && (s.re < -tol * scale || s.im.abs() > tol * scale) {
            violation = Some(w.clone());
        }
        if witness.is_none() && s.re > WITNESS_TOL * scale {
            witness = Some(w.clone());
        }
        if *dim > estimate.0 {
            estimate = (*dim, s / dim);
        }
    }
    let c0 = coeffs[0];
    let hypothesis_ok = violation.is_none();
    let verdict = if !hypothesis_ok {
        Verdict::HypothesisViolated
    } else if witness.is_some() && c0.re > 0.0 && c0.im.abs() <= tol {
        Verdict::Positive
    } else {
        Verdict::Inconclusive
    };
    assert!(
        verdict != Verdict::Positive || c0.re > 0.0,
        "positive verdict with non-positive principal coefficient"
    );
    Ok(PositivityCertificate {
        hypothesis_ok,
        strict_witness: witness,
        lambda0: c0,
        lambda0_estimate: estimate.1,
        verdict,
        violation,
        height_cap: table.height_cap,
        tested: table.weights.len(),
    })
}

/// Builds the character table and certifies `coeffs`.
pub fn positivity_certificate(
    datum: &RootDatum,
    classes: &[TorusElement],
    coeffs: &[Complex64],
    height_cap: u64,
) -> Result<PositivityCertificate> {
    if classes.len() != coeffs.len() {
        return Err(Error::LengthMismatch {
            expected: classes.len(),
            got: coeffs.len(),
        });
    }
    certify(&CharacterTable::new(datum, classes, height_cap)?, coeffs)
}

/// A measure `λ_0 δ_1 + Σ_ρ c_ρ conj(θ_ρ) |D|² dt/|W|` discretized on a
/// uniform grid. Class 0 is the identity; grid points where the Weyl
/// denominator vanishes are dropped.
pub fn quadrature_measure(
    datum: &RootDatum,
    spectral: &[(Weight, f64)],
    lambda0: f64,
    grid_n: usize,
) -> Result<(Vec<TorusElement>, Vec<Complex64>)> {
    use crate::characters::{torus_grid, weyl_denominator};
    for (w, c) in spectral {
        datum.check_dominant(w)?;
        if *c < 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter("spectral weights must be finite and nonnegative".into()));
        }
    }
    let grid = torus_grid(datum, grid_n);
    let order = datum.weyl_order() as f64;
    let mass = grid.len() as f64;
    let mut classes = vec![TorusElement::identity(datum.dim())];
    let mut coeffs = vec![Complex64::new(lambda0, 0.0)];
    for t in grid {
        let d = weyl_denominator(datum, &t)?.norm_sqr();
        if d < 1e-18 {
            continue;
        }
        let levi = levi_of(datum, &t)?;
        let mut f = Complex64::zero();
        for (w, c) in spectral {
            f += char_singular_with_levi(&levi, w)?.value.conj() * *c;
        }
        classes.push(t);
        coeffs.push(f * d / (order * mass));
    }
    Ok((classes, coeffs))
}

/// `max_k |ratio(k) − principal(k)| / bound(k)` over rows with a positive
/// bound; values ≤ 1 mean the envelope held.
pub fn envelope_usage(rows: &[DominanceRow]) -> f64 {
    rows.iter()
        .filter(|r| r.bound > 0.0)
        .map(|r| r.deviation / r.bound)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn b2() -> RootDatum {
        build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap()
    }

    fn t(xs: &[(i64, i64)]) -> TorusElement {
        TorusElement::new(xs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn side(classes: &[(TorusElement, f64)]) -> GeometricSide {
        GeometricSide::new(
            b2(),
            classes
                .iter()
                .map(|(g, z)| SideClass {
                    gamma: g.clone(),
                    coeff: c(*z),
                })
                .collect(),
            0,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 3.0)]);
        assert!((evaluate_side(&s, &Weight::from_ints(&[1, 0])).unwrap() - 15.0).norm() < 1e-12);
        assert!((evaluate_side(&s, &Weight::zero(2)).unwrap() - 3.0).norm() < 1e-12);
        let s = side(&[(t(&[(0, 1), (0, 1)]), 1.0), (t(&[(0, 1), (1, 2)]), 10.0)]);
        assert!((evaluate_side(&s, &Weight::from_ints(&[1, 0])).unwrap() - 15.0).norm() < 1e-10);
    }

    #[test]
    fn side_validation() {
        let d = b2();
        let mk = |gs: &[TorusElement], p| {
            GeometricSide::new(
                d.clone(),
                gs.iter().map(|g| SideClass { gamma: g.clone(), coeff: c(1.0) }).collect(),
                p,
            )
        };
        assert!(mk(&[], 0).is_err());
        assert!(mk(&[t(&[(1, 3), (0, 1)])], 0).is_err());
        assert!(mk(&[t(&[(0, 1), (0, 1)]), t(&[(1, 1), (0, 1)])], 0).is_err());
        assert!(mk(&[t(&[(1, 3), (0, 1)]), t(&[(0, 1), (0, 1)])], 1).is_ok());
    }

    #[test]
    fn central_only_ratio_is_constant() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 2.5)]);
        let rows = dominance_report(&s, &Weight::from_ints(&[2, 1]), 6).unwrap();
        for r in rows {
            assert!((r.ratio - 2.5).norm() < 1e-12);
            assert_eq!(r.bound, 0.0);
        }
    }

    #[test]
    fn dominance_example() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 2.0), (t(&[(0, 1), (1, 2)]), 100.0)]);
        let rows = dominance_report(&s, &Weight::from_ints(&[2, 1]), 20).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].bound <= w[0].bound);
        }
        for r in &rows {
            assert!(r.deviation <= r.bound * (1.0 + 1e-8) + 1e-12);
        }
        assert!(rows.last().unwrap().bound < 0.05);
        assert!(dominance_report(&s, &Weight::from_ints(&[1, 1]), 5).is_err());
        assert!(dominance_report(&s, &Weight::from_ints(&[2, 1]), 1).is_err());
    }

    #[test]
    fn sign_detection() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), -1.0), (t(&[(1, 3), (1, 5)]), 500.0)]);
        let dir = Weight::from_ints(&[3, 1]);
        let k = certified_k(&s, &dir, 0.5).unwrap();
        let rows = dominance_rows(&s, &dir, &[k, k + 1, 2 * k], Execution::Sequential).unwrap();
        for r in rows {
            assert_eq!(r.sign, Some(-1));
            assert!(r.ratio.re < 0.0);
        }
    }

    #[test]
    fn certified_k_is_minimal() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 1.0), (t(&[(1, 4), (0, 1)]), 50.0)]);
        let dir = Weight::from_ints(&[2, 1]);
        let k = certified_k(&s, &dir, 0.01).unwrap();
        assert!(envelope(&s, &dir.scale(Q::from_integer(k as i64))).unwrap() <= 0.01);
        assert!(envelope(&s, &dir.scale(Q::from_integer(k as i64 - 1))).unwrap() > 0.01);
    }

    #[test]
    fn enumeration() {
        let d = b2();
        let ws = dominant_weights_below(&d, 3).unwrap();
        for w in &ws {
            assert!(d.is_dominant(w) && d.is_admissible(w));
        }
        // the coroot of e_1 is 2e_1, so ρ alone already reaches 3
        assert_eq!(ws, vec![Weight::zero(2)]);
        let ws = dominant_weights_below(&d, 5).unwrap();
        assert!(ws.contains(&Weight::from_ints(&[1, 0])));
        assert!(ws.contains(&Weight::from_ints(&[1, 1])));
        assert!(!ws.contains(&Weight::from_ints(&[2, 0])));
        let spin = build_root_datum(Family::B, 2, LatticeKind::SpinAllowed).unwrap();
        assert!(dominant_weights_below(&spin, 4)
            .unwrap()
            .contains(&Weight(vec![q(1, 2), q(1, 2)])));
        let a2 = build_root_datum(Family::A, 2, LatticeKind::Integral).unwrap();
        assert!(dominant_weights_below(&a2, 3).unwrap().contains(&Weight::from_ints(&[1, 0, 0])));
        assert!(dominant_weights_below(&a2, 3).unwrap().contains(&Weight::from_ints(&[-2, -3, -3])));
        assert!(dominant_weights_below(&d, 1_000_000).is_err());
    }

    #[test]
    fn fundamental_coordinates() {
        for (fam, rank) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let d = build_root_datum(fam, rank, LatticeKind::Integral).unwrap();
            let a: Vec<i64> = (1..=rank as i64).collect();
            let w = weight_from_fundamental(fam, &a, 0);
            for (s, ai) in d.simple_roots().iter().zip(&a) {
                assert_eq!(d.coroot_pairing(&w, s), Q::from_integer(*ai));
            }
        }
    }

    #[test]
    fn single_central_class_is_positive() {
        let cert = positivity_certificate(&b2(), &[TorusElement::identity(2)], &[c(1.0)], 4).unwrap();
        assert!(cert.hypothesis_ok);
        assert_eq!(cert.verdict, Verdict::Positive);
        assert!((cert.lambda0_estimate - 1.0).norm() < 1e-12);
    }

    #[test]
    fn negative_spike_violates() {
        let classes = [TorusElement::identity(2), t(&[(1, 3), (1, 7)])];
        let cert = positivity_certificate(&b2(), &classes, &[c(1.0), c(-50.0)], 4).unwrap();
        assert_eq!(cert.verdict, Verdict::HypothesisViolated);
        assert!(cert.violation.is_some());
    }

    #[test]
    fn quadrature_measure_is_positive() {
        let d = b2();
        let spectral = vec![(Weight::from_ints(&[1, 0]), 2.0), (Weight::from_ints(&[1, 1]), 0.5)];
        let (classes, coeffs) = quadrature_measure(&d, &spectral, 0.75, 14).unwrap();
        let table = CharacterTable::new(&d, &classes, 7).unwrap();
        assert!(table.weights.len() > 4);
        let cert = certify(&table, &coeffs).unwrap();
        assert!(cert.hypothesis_ok, "{cert:?}");
        assert_eq!(cert.verdict, Verdict::Positive);
        assert!((cert.lambda0_estimate - 0.75).norm() < 1e-4);
        for (w, row) in table.weights.iter().zip(&table.values) {
            let s: Complex64 = row.iter().zip(&coeffs).map(|(v, c)| v * c).sum();
            let dim = big_to_f64(&weyl_polynomial(d.positive_roots(), d.rho(), w));
            let expected = 0.75 * dim + spectral.iter().find(|(x, _)| x == w).map_or(0.0, |p| p.1);
            assert!((s - expected).norm() < 1e-9, "{w}: {s} vs {expected}");
        }
        let flipped: Vec<Complex64> = std::iter::once(c(-0.75)).chain(coeffs[1..].iter().copied()).collect();
        assert_ne!(certify(&table, &flipped).unwrap().verdict, Verdict::Positive);
    }

    #[test]
    fn side_json_roundtrip() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 1.0), (t(&[(0, 1), (1, 2)]), 10.0)]);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: GeometricSideJson = serde_json::from_str(&text).unwrap();
        let s2 = GeometricSide::from_json(&back).unwrap();
        assert_eq!(s2.classes().len(), 2);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["classes"][1]["angles"][1], "1/2");
    }

    #[test]
    fn strategies_agree() {
        let s = side(&[(t(&[(0, 1), (0, 1)]), 1.0), (t(&[(1, 5), (2, 7)]), 30.0)]);
        let dir = Weight::from_ints(&[2, 1]);
        let a = dominance_report_with(&s, &dir, 12, Execution::Sequential).unwrap();
        let b = dominance_report_with(&s, &dir, 12, Execution::Parallel).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.ratio, y.ratio);
            assert_eq!(x.bound, y.bound);
        }
    }
}
