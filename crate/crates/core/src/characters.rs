//! Dimensions and characters of irreducible representations.
//!
//! Two independent routes are provided. [`weight_multiplicities`] runs
//! Freudenthal's recursion and [`char_oracle`] sums the resulting monomials.
//! [`char_regular`] evaluates the Weyl quotient `N/D`, and [`char_singular`]
//! evaluates the centralizer decomposition
//!
//! ```text
//! θ_λ(γ) = γ^{ρ_M−ρ} / Π_{α∈S(M)} (1 − γ^{−α}) · Σ_{w_u∈W^M} ε(w_u) γ^{w_u(λ+ρ)−ρ_M} P_M(λ_u)
//! ```
//!
//! which is valid at every torus element, central and singular ones included.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{try_map_collect, Execution};
use crate::rational::{big_to_f64, lcm_denominators, serde_big, serde_complex, to_big, turn_fraction, Q};
use crate::rootdata::{Family, LatticeKind, RootDatum, TorusElement, Weight};
use crate::weylgroup::{enumerate_weyl, levi_of, LeviDatum, WeylElement};

/// Cap on `dim V_λ` for the Freudenthal oracle.
pub const DEFAULT_MULTIPLICITY_CAP: u64 = 100_000;
/// `|D(γ)|` below this is treated as singular by [`char_regular`].
pub const REGULAR_THRESHOLD: f64 = 1e-9;
/// Guard on the factors `1 − γ^{−α}`, `α ∈ S(M)`.
pub const FACTOR_GUARD: f64 = 1e-9;

/// `Π ⟨α, λ+ρ⟩ / ⟨α, ρ⟩` over the given positive system.
pub fn weyl_polynomial(positive_roots: &[Weight], rho: &Weight, lambda: &Weight) -> BigRational {
    let shifted = lambda + rho;
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for a in positive_roots {
        num *= to_big(&shifted.dot(a));
        den *= to_big(&rho.dot(a));
    }
    num / den
}

/// Weyl dimension `P(λ)` of the irreducible representation of highest weight `λ`.
pub fn weyl_dim(datum: &RootDatum, lambda: &Weight) -> Result<BigRational> {
    datum.check_dominant(lambda)?;
    let p = weyl_polynomial(datum.positive_roots(), datum.rho(), lambda);
    if !p.is_integer() || !p.is_positive() {
        return Err(Error::NumericalGuard(format!("P({lambda}) = {p} is not a positive integer")));
    }
    Ok(p)
}

fn weyl_dim_u64(datum: &RootDatum, lambda: &Weight) -> Result<(u64, BigRational)> {
    let p = weyl_dim(datum, lambda)?;
    let d = p.to_integer().to_u64().unwrap_or(u64::MAX);
    Ok((d, p))
}

// Freudenthal runs on doubled integer coordinates: every admissible weight,
// ρ and every root lives in (1/2)Z^n.
type Doubled = Vec<i64>;

fn doubled(w: &Weight) -> Doubled {
    w.0.iter().map(|x| (x * 2).to_integer()).collect()
}

fn undoubled(v: &[i64]) -> Weight {
    Weight(v.iter().map(|&x| Q::new(x, 2)).collect())
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dominant Weyl conjugate of `v`, written into `out`.
fn dominant_doubled_into(family: Family, v: &[i64], out: &mut Vec<i64>) {
    out.clear();
    out.extend_from_slice(v);
    match family {
        Family::A => out.sort_unstable_by(|a, b| b.cmp(a)),
        Family::B | Family::C => {
            out.iter_mut().for_each(|x| *x = x.abs());
            out.sort_unstable_by(|a, b| b.cmp(a));
        }
        Family::D => {
            let negatives = v.iter().filter(|&&x| x < 0).count();
            let has_zero = v.contains(&0);
            out.iter_mut().for_each(|x| *x = x.abs());
            out.sort_unstable_by(|a, b| b.cmp(a));
            if negatives % 2 == 1 && !has_zero {
                let last = out.len() - 1;
                out[last] = -out[last];
            }
        }
    }
}

// Largest dense table used by the Freudenthal recursion before falling back
// to a hash map.
const DENSE_TABLE_LIMIT: usize = 1 << 22;

/// Multiplicity store for dominant weights. Every weight of `V_λ` has
/// coordinates in `[lo, hi]`; for type A the last coordinate is fixed by the
/// others and is left out of the index.
enum MultTable {
    Dense { lo: i64, width: usize, len: usize, data: Vec<u64> },
    Sparse(HashMap<Doubled, u64>),
}

impl MultTable {
    const ABSENT: u64 = u64::MAX;

    fn new(family: Family, lam: &[i64]) -> Self {
        let max_abs = lam.iter().map(|x| x.abs()).max().unwrap_or(0);
        let (lo, hi, len) = match family {
            Family::A => (
                *lam.iter().min().unwrap_or(&0),
                *lam.iter().max().unwrap_or(&0),
                lam.len().saturating_sub(1),
            ),
            _ => (-max_abs, max_abs, lam.len()),
        };
        let width = (hi - lo + 1) as usize;
        let size = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(width).filter(|&s| s <= DENSE_TABLE_LIMIT));
        match size {
            Some(size) => MultTable::Dense { lo, width, len, data: vec![Self::ABSENT; size] },
            None => MultTable::Sparse(HashMap::new()),
        }
    }

    fn index(lo: i64, width: usize, len: usize, v: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for &x in &v[..len] {
            let off = x - lo;
            if off < 0 || off as usize >= width {
                return None;
            }
            idx = idx * width + off as usize;
        }
        Some(idx)
    }

    fn get(&self, v: &[i64]) -> Option<u64> {
        match self {
            MultTable::Dense { lo, width, len, data } => {
                Self::index(*lo, *width, *len, v).map(|i| data[i]).filter(|&m| m != Self::ABSENT)
            }
            MultTable::Sparse(map) => map.get(v).copied(),
        }
    }

    fn insert(&mut self, v: &[i64], m: u64) {
        match self {
            MultTable::Dense { lo, width, len, data } => {
                let i = Self::index(*lo, *width, *len, v).expect("dominant weight outside its bounding box");
                data[i] = m;
            }
            MultTable::Sparse(map) => {
                map.insert(v.to_vec(), m);
            }
        }
    }
}

/// Multiplicities of the dominant weights of `V_λ`, keyed by doubled coordinates.
fn freudenthal_dominant(datum: &RootDatum, lambda: &Weight) -> Result<Vec<(Doubled, u64)>> {
    let family = datum.family();
    let lam = doubled(lambda);
    let rho = doubled(datum.rho());
    let roots: Vec<Doubled> = datum.positive_roots().iter().map(doubled).collect();
    let simple: Vec<Doubled> = datum.simple_roots().iter().map(doubled).collect();
    let is_dom = |v: &[i64]| simple.iter().all(|a| dot(v, a) >= 0);

    // Dominant weights below λ: closed under subtracting positive roots while
    // staying dominant (the dominance order on dominant weights is generated by
    // such steps).
    let mut dominant: BTreeSet<Doubled> = BTreeSet::from([lam.clone()]);
    let mut stack = vec![lam.clone()];
    while let Some(mu) = stack.pop() {
        for a in &roots {
            let nu: Doubled = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            if is_dom(&nu) && !dominant.contains(&nu) {
                dominant.insert(nu.clone());
                stack.push(nu);
            }
        }
    }
    let mut order: Vec<Doubled> = dominant.into_iter().collect();
    // Increasing depth ⟨λ − μ, ρ⟩.
    order.sort_by_key(|mu| dot(&lam, &rho) - dot(mu, &rho));

    let lam_rho: Doubled = lam.iter().zip(&rho).map(|(x, y)| x + y).collect();
    let top = dot(&lam_rho, &lam_rho);
    let mut mult = MultTable::new(family, &lam);
    let mut values = Vec::with_capacity(order.len());
    let (mut nu, mut rep) = (Vec::with_capacity(lam.len()), Vec::with_capacity(lam.len()));
    for mu in &order {
        if *mu == lam {
            mult.insert(mu, 1);
            values.push(1);
            continue;
        }
        let mu_rho: Doubled = mu.iter().zip(&rho).map(|(x, y)| x + y).collect();
        let den = top - dot(&mu_rho, &mu_rho);
        let mut num: i128 = 0;
        for a in &roots {
            nu.clone_from(mu);
            loop {
                nu.iter_mut().zip(a).for_each(|(x, y)| *x += y);
                dominant_doubled_into(family, &nu, &mut rep);
                let Some(m) = mult.get(&rep) else { break };
                num += 2 * m as i128 * dot(&nu, a) as i128;
            }
        }
        if den <= 0 || num % den as i128 != 0 {
            return Err(Error::NumericalGuard(format!(
                "Freudenthal recursion produced a non-integral multiplicity at {}",
                undoubled(mu)
            )));
        }
        let m = (num / den as i128) as u64;
        mult.insert(mu, m);
        values.push(m);
    }
    Ok(order.into_iter().zip(values).filter(|(_, m)| *m > 0).collect())
}

/// Weight multiplicities of `V_λ` with an explicit cap on `dim V_λ`.
pub fn weight_multiplicities_capped(
    datum: &RootDatum,
    lambda: &Weight,
    cap: u64,
) -> Result<BTreeMap<Weight, u64>> {
    let (dim, _) = weyl_dim_u64(datum, lambda)?;
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "representation dimension",
            size: dim as u128,
            cap: cap as u128,
        });
    }
    let weyl = enumerate_weyl(datum)?;
    let mut out = BTreeMap::new();
    for (mu, m) in freudenthal_dominant(datum, lambda)? {
        let mu = undoubled(&mu);
        let orbit: BTreeSet<Weight> = weyl.iter().map(|w| w.apply(&mu)).collect();
        for nu in orbit {
            out.insert(nu, m);
        }
    }
    let total: u64 = out.values().sum();
    if total != dim {
        return Err(Error::NumericalGuard(format!(
            "multiplicities sum to {total}, Weyl dimension is {dim}"
        )));
    }
    Ok(out)
}

/// All weights of `V_λ` with their multiplicities (Freudenthal's formula).
pub fn weight_multiplicities(datum: &RootDatum, lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
    weight_multiplicities_capped(datum, lambda, DEFAULT_MULTIPLICITY_CAP)
}

/// Monomial-sum evaluator `θ_λ(γ) = Σ_μ m_λ(μ) γ^μ`, reusable across elements.
#[derive(Debug, Clone)]
pub struct CharacterOracle {
    dim: usize,
    weights: Vec<(Doubled, u64)>,
}

impl CharacterOracle {
    pub fn new(datum: &RootDatum, lambda: &Weight) -> Result<Self> {
        Ok(CharacterOracle {
            dim: datum.dim(),
            weights: weight_multiplicities(datum, lambda)?
                .iter()
                .map(|(mu, m)| (doubled(mu), *m))
                .collect(),
        })
    }

    pub fn eval(&self, gamma: &TorusElement) -> Result<Complex64> {
        if gamma.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: gamma.len(),
            });
        }
        // With t_j = k_j / den, the phase of γ^μ is Σ (2μ_j) k_j / (2 den).
        let den = lcm_denominators(&gamma.angles);
        let k: Vec<i128> = gamma.angles.iter().map(|t| (*t.numer() * (den / *t.denom())) as i128).collect();
        let period = 2 * den as i128;
        Ok(self
            .weights
            .iter()
            .map(|(mu, m)| {
                let p: i128 = mu.iter().zip(&k).map(|(x, y)| *x as i128 * y).sum();
                turn_fraction(p.rem_euclid(period), period) * *m as f64
            })
            .sum())
    }
}

pub fn char_oracle(datum: &RootDatum, lambda: &Weight, gamma: &TorusElement) -> Result<Complex64> {
    CharacterOracle::new(datum, lambda)?.eval(gamma)
}

/// Weyl denominator `Σ_w ε(w) γ^{wρ}`.
pub fn weyl_denominator(datum: &RootDatum, gamma: &TorusElement) -> Result<Complex64> {
    datum.check_len(gamma.len())?;
    let weyl = enumerate_weyl(datum)?;
    Ok(alternating_sum(&weyl, datum.rho(), gamma))
}

fn alternating_sum(weyl: &[WeylElement], mu: &Weight, gamma: &TorusElement) -> Complex64 {
    weyl.iter()
        .map(|w| gamma.monomial(&w.apply(mu)) * w.sign() as f64)
        .sum()
}

/// Weyl quotient `N/D` at a regular element.
pub fn char_regular(datum: &RootDatum, lambda: &Weight, gamma: &TorusElement) -> Result<Complex64> {
    datum.check_dominant(lambda)?;
    datum.check_len(gamma.len())?;
    let weyl = enumerate_weyl(datum)?;
    let den = alternating_sum(&weyl, datum.rho(), gamma);
    if den.norm() < REGULAR_THRESHOLD {
        return Err(Error::SingularElement(den.norm()));
    }
    let num = alternating_sum(&weyl, &(lambda + datum.rho()), gamma);
    Ok(num / den)
}

/// One `w_u ∈ W^M` contribution to the singular formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularTerm {
    pub w_u_index: usize,
    pub w_u: WeylElement,
    pub lambda_u: Weight,
    pub sign: i8,
    #[serde(with = "serde_complex")]
    pub monomial: Complex64,
    #[serde(with = "serde_big")]
    pub levi_dim: BigRational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularCharacterReport {
    #[serde(with = "serde_complex")]
    pub value: Complex64,
    #[serde(with = "serde_complex")]
    pub prefactor: Complex64,
    pub terms: Vec<SingularTerm>,
    #[serde(with = "serde_big_vec")]
    pub ratio_bounds: Vec<BigRational>,
}

mod serde_big_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::fmt_big;

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(fmt_big).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| {
                crate::rational::serde_big::deserialize(serde::de::value::StrDeserializer::<
                    serde::de::value::Error,
                >::new(s))
                .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl SingularCharacterReport {
    /// `prefactor · Σ sign · monomial · levi_dim`, recomputed from the terms.
    pub fn reassemble(&self) -> Complex64 {
        self.prefactor
            * self
                .terms
                .iter()
                .map(|t| t.monomial * (t.sign as f64 * big_to_f64(&t.levi_dim)))
                .sum::<Complex64>()
    }
}

/// `γ^{ρ_M−ρ} / Π_{α∈S(M)} (1 − γ^{−α})`.
pub fn singular_prefactor(levi: &LeviDatum) -> Result<Complex64> {
    let datum = levi.parent();
    let gamma = &levi.element;
    let mut den = Complex64::one();
    for a in &levi.complement {
        let factor = Complex64::one() - gamma.monomial(&-a);
        if factor.norm() <= FACTOR_GUARD {
            return Err(Error::NumericalGuard(format!(
                "|1 − γ^(−α)| = {:e} for α = {a} outside the Levi",
                factor.norm()
            )));
        }
        den *= factor;
    }
    Ok(gamma.monomial(&(&levi.rho_m() - datum.rho())) / den)
}

/// Singular-element character evaluation against a precomputed Levi.
pub fn char_singular_with_levi(levi: &LeviDatum, lambda: &Weight) -> Result<SingularCharacterReport> {
    let datum = levi.parent();
    datum.check_dominant(lambda)?;
    let gamma = &levi.element;
    let prefactor = singular_prefactor(levi)?;
    let p = weyl_polynomial(datum.positive_roots(), datum.rho(), lambda);
    let rho_m = levi.rho_m();
    let shifted = lambda + datum.rho();
    let mut terms = Vec::with_capacity(levi.min_reps.len());
    let mut ratio_bounds = Vec::with_capacity(levi.min_reps.len());
    let mut sum = Complex64::zero();
    for (i, wu) in levi.min_reps.iter().enumerate() {
        let image = wu.apply(&shifted);
        let lambda_u = &image - &rho_m;
        let levi_dim = weyl_polynomial(&levi.positive_levi_roots, &rho_m, &lambda_u);
        let monomial = gamma.monomial(&lambda_u);
        let sign = wu.sign();
        sum += monomial * (sign as f64 * big_to_f64(&levi_dim));
        ratio_bounds.push(&levi_dim / &p);
        terms.push(SingularTerm {
            w_u_index: i,
            w_u: wu.clone(),
            lambda_u,
            sign,
            monomial,
            levi_dim,
        });
    }
    Ok(SingularCharacterReport {
        value: prefactor * sum,
        prefactor,
        terms,
        ratio_bounds,
    })
}

/// Character value at any torus element via its centralizer decomposition.
pub fn char_singular(
    datum: &RootDatum,
    lambda: &Weight,
    gamma: &TorusElement,
) -> Result<SingularCharacterReport> {
    datum.check_dominant(lambda)?;
    let levi = levi_of(datum, gamma)?;
    char_singular_with_levi(&levi, lambda)
}

/// Per-representative ratios `P_M(λ_u)/P(λ)` from the closed product
/// `Π_{R+}⟨ρ,α⟩ / Π_{R+(M)}⟨ρ_M,β⟩ · (Π_{α ∈ R+ \ w_u^{-1}R+(M)} ⟨λ+ρ,α⟩)^{-1}`.
pub fn decay_ratios_with_levi(levi: &LeviDatum, lambda: &Weight) -> Result<Vec<BigRational>> {
    let datum = levi.parent();
    datum.check_dominant(lambda)?;
    let rho = datum.rho();
    let rho_m = levi.rho_m();
    let mut constant = BigRational::one();
    for a in datum.positive_roots() {
        constant *= to_big(&rho.dot(a));
    }
    for b in &levi.positive_levi_roots {
        constant /= to_big(&rho_m.dot(b));
    }
    let shifted = lambda + rho;
    let mut out = Vec::with_capacity(levi.min_reps.len());
    for wu in &levi.min_reps {
        let inv = wu.inverse();
        let pulled: BTreeSet<Weight> = levi.positive_levi_roots.iter().map(|b| inv.apply(b)).collect();
        let mut den = BigRational::one();
        for a in datum.positive_roots() {
            if !pulled.contains(a) {
                den *= to_big(&shifted.dot(a));
            }
        }
        out.push(&constant / den);
    }
    Ok(out)
}

pub fn decay_ratio_with_levi(levi: &LeviDatum, lambda: &Weight) -> Result<BigRational> {
    Ok(decay_ratios_with_levi(levi, lambda)?
        .into_iter()
        .max()
        .unwrap_or_else(BigRational::zero))
}

/// `max_{w_u ∈ W^M} P_M(λ_u)/P(λ)`; tends to zero away from the walls when
/// `γ` is not central.
pub fn decay_ratio(datum: &RootDatum, lambda: &Weight, gamma: &TorusElement) -> Result<BigRational> {
    datum.check_dominant(lambda)?;
    let levi = levi_of(datum, gamma)?;
    decay_ratio_with_levi(&levi, lambda)
}

/// Uniform grid of step `1/grid_n` on a fundamental domain of the torus.
pub fn torus_grid(datum: &RootDatum, grid_n: usize) -> Vec<TorusElement> {
    let dim = datum.dim();
    // The spin torus is R^n modulo {t ∈ Z^n : Σ t even}; [0,2) × [0,1)^{n-1}
    // is a fundamental domain.
    let first = if datum.lattice_kind() == LatticeKind::SpinAllowed {
        2 * grid_n
    } else {
        grid_n
    };
    let extents: Vec<usize> = (0..dim).map(|i| if i == 0 { first } else { grid_n }).collect();
    let total: usize = extents.iter().product();
    (0..total)
        .map(|mut idx| {
            let angles = extents
                .iter()
                .map(|&e| {
                    let k = idx % e;
                    idx /= e;
                    Q::new(k as i64, grid_n as i64)
                })
                .collect();
            TorusElement::new(angles)
        })
        .collect()
}

/// Minimum grid accepted by [`orthogonality_integral`].
pub fn min_grid(datum: &RootDatum, lambdas: &[&Weight]) -> usize {
    let mut max = Q::zero();
    for l in lambdas {
        for x in (*l + datum.rho()).0 {
            max = max.max(x.abs());
        }
    }
    (Q::from_integer(4) * (Q::one() + max)).ceil().to_integer() as usize
}

/// Weyl-integration quadrature
/// `(1/|W|) · avg_t |D(t)|² χ_{λ1}(t) conj(χ_{λ2}(t))` over a uniform torus grid.
pub fn orthogonality_integral(
    datum: &RootDatum,
    lambda1: &Weight,
    lambda2: &Weight,
    grid_n: usize,
) -> Result<Complex64> {
    orthogonality_integral_with(datum, lambda1, lambda2, grid_n, Execution::default())
}

pub fn orthogonality_integral_with(
    datum: &RootDatum,
    lambda1: &Weight,
    lambda2: &Weight,
    grid_n: usize,
    exec: Execution,
) -> Result<Complex64> {
    datum.check_dominant(lambda1)?;
    datum.check_dominant(lambda2)?;
    let needed = min_grid(datum, &[lambda1, lambda2]);
    if grid_n < needed {
        return Err(Error::GridTooSmall {
            grid: grid_n,
            needed,
        });
    }
    let points = torus_grid(datum, grid_n);
    let weyl = enumerate_weyl(datum)?;
    let samples = try_map_collect(exec, &points, |t| -> Result<Complex64> {
        let d = alternating_sum(&weyl, datum.rho(), t);
        let weight = d.norm_sqr();
        if weight == 0.0 {
            return Ok(Complex64::zero());
        }
        let levi = levi_of(datum, t)?;
        let c1 = char_singular_with_levi(&levi, lambda1)?.value;
        let c2 = char_singular_with_levi(&levi, lambda2)?.value;
        Ok(c1 * c2.conj() * weight)
    })?;
    let sum: Complex64 = samples.into_iter().sum();
    Ok(sum / (points.len() as f64 * weyl.len() as f64))
}
