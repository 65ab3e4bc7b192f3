//! Classical root data in standard `e_i` coordinates.
//!
//! Type `A` of rank `n` is modeled on the full linear group `GL(n+1)`: weights
//! are vectors of length `n + 1` and the torus is the full diagonal torus.
//! Types `B`, `C`, `D` of rank `n` use coordinates of length `n`. Pairings are
//! the standard dot product, which is Weyl-invariant for every family here.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, serde_q_vec, turn, Q};
use crate::weylgroup::WeylElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::UnsupportedDatum(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    #[default]
    Integral,
    /// Admits `(Z + 1/2)^n` for family `B` (weights of the spin cover).
    #[serde(alias = "spin")]
    SpinAllowed,
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "integral" => Ok(LatticeKind::Integral),
            "spin" | "spin-allowed" => Ok(LatticeKind::SpinAllowed),
            other => Err(Error::UnsupportedDatum(format!("unknown lattice kind {other:?}"))),
        }
    }
}

/// A rational vector in `X*(T) ⊗ Q`. Roots are stored as weights too.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(#[serde(with = "serde_q_vec")] pub Vec<Q>);

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Weight(coords)
    }

    pub fn zero(len: usize) -> Self {
        Weight(vec![Q::zero(); len])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Weight(xs.iter().map(|&x| qi(x)).collect())
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &Weight) -> Q {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: Q) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;

    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;

    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// A point of the maximal torus, `γ_j = exp(2πi t_j)`, kept as a chosen lift
/// `t ∈ Q^n`. The lift matters only for half-integral exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusElement {
    #[serde(with = "serde_q_vec")]
    pub angles: Vec<Q>,
}

impl TorusElement {
    pub fn new(angles: Vec<Q>) -> Self {
        TorusElement { angles }
    }

    pub fn identity(len: usize) -> Self {
        TorusElement {
            angles: vec![Q::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Exact phase `Σ μ_j t_j` of `γ^μ`, in turns.
    pub fn phase(&self, mu: &Weight) -> Q {
        debug_assert_eq!(self.len(), mu.len());
        self.angles.iter().zip(&mu.0).map(|(t, m)| t * m).sum()
    }

    /// `γ^μ = exp(2πi Σ μ_j t_j)`.
    pub fn monomial(&self, mu: &Weight) -> Complex64 {
        turn(&self.phase(mu))
    }

    /// True when `γ^α = 1`, decided exactly.
    pub fn kills(&self, root: &Weight) -> bool {
        self.phase(root).is_integer()
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.angles.iter().map(fmt_q).collect();
        write!(f, "t=({})", parts.join(","))
    }
}

/// Classical root datum with its positive system, `ρ` and Weyl group order.
#[derive(Debug, Clone)]
pub struct RootDatum {
    family: Family,
    rank: usize,
    lattice_kind: LatticeKind,
    positive_roots: Vec<Weight>,
    simple_roots: Vec<Weight>,
    rho: Weight,
    weyl_order: u64,
    pub(crate) weyl_cache: OnceLock<Arc<Vec<WeylElement>>>,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.rank == other.rank
            && self.lattice_kind == other.lattice_kind
    }
}

impl Eq for RootDatum {}

/// JSON view of a root datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootDatumJson {
    pub family: Family,
    pub rank: usize,
    #[serde(default)]
    pub lattice_kind: LatticeKind,
    #[serde(default)]
    pub positive_roots: Vec<Weight>,
    #[serde(default)]
    pub simple_roots: Vec<Weight>,
    #[serde(default = "Weight::default_empty")]
    pub rho: Weight,
    #[serde(default)]
    pub weyl_order: u64,
}

impl Weight {
    fn default_empty() -> Weight {
        Weight(Vec::new())
    }
}

fn unit(dim: usize, i: usize, c: i64) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = qi(c);
    v
}

fn combo(dim: usize, terms: &[(usize, i64)]) -> Weight {
    let mut v = vec![Q::zero(); dim];
    for &(i, c) in terms {
        v[i] += qi(c);
    }
    Weight(v)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Builds the classical root datum of the given family and rank.
pub fn build_root_datum(family: Family, rank: usize, lattice_kind: LatticeKind) -> Result<RootDatum> {
    if rank == 0 {
        return Err(Error::UnsupportedDatum("rank must be at least 1".into()));
    }
    if family == Family::D && rank < 2 {
        return Err(Error::UnsupportedDatum("type D needs rank at least 2".into()));
    }
    if rank > 12 {
        return Err(Error::UnsupportedDatum(format!("rank {rank} is outside the supported envelope")));
    }
    if lattice_kind == LatticeKind::SpinAllowed && family != Family::B {
        return Err(Error::UnsupportedDatum(format!(
            "spin-allowed lattice is only available for type B, not {family}"
        )));
    }
    let n = rank;
    let dim = if family == Family::A { n + 1 } else { n };
    let mut positive_roots = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            positive_roots.push(combo(dim, &[(i, 1), (j, -1)]));
            if family != Family::A {
                positive_roots.push(combo(dim, &[(i, 1), (j, 1)]));
            }
        }
        match family {
            Family::B => positive_roots.push(Weight(unit(dim, i, 1))),
            Family::C => positive_roots.push(Weight(unit(dim, i, 2))),
            _ => {}
        }
    }
    positive_roots.sort();

    let mut simple_roots: Vec<Weight> = (0..dim - 1).map(|i| combo(dim, &[(i, 1), (i + 1, -1)])).collect();
    match family {
        Family::A => {}
        Family::B => simple_roots.push(Weight(unit(dim, n - 1, 1))),
        Family::C => simple_roots.push(Weight(unit(dim, n - 1, 2))),
        Family::D => simple_roots.push(combo(dim, &[(n - 2, 1), (n - 1, 1)])),
    }

    let mut sum = Weight::zero(dim);
    for r in &positive_roots {
        sum = &sum + r;
    }
    let rho = sum.scale(Q::new(1, 2));

    let weyl_order = match family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => (1u64 << n) * factorial(n),
        Family::D => (1u64 << (n - 1)) * factorial(n),
    };

    Ok(RootDatum {
        family,
        rank,
        lattice_kind,
        positive_roots,
        simple_roots,
        rho,
        weyl_order,
        weyl_cache: OnceLock::new(),
    })
}

impl RootDatum {
    pub fn new(family: Family, rank: usize, lattice_kind: LatticeKind) -> Result<Self> {
        build_root_datum(family, rank, lattice_kind)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lattice_kind(&self) -> LatticeKind {
        self.lattice_kind
    }

    /// Length of weight and angle vectors (`rank + 1` for type `A`).
    pub fn dim(&self) -> usize {
        self.rho.len()
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl_order
    }

    /// Positive roots followed by their negatives.
    pub fn all_roots(&self) -> Vec<Weight> {
        let mut roots = self.positive_roots.clone();
        roots.extend(self.positive_roots.iter().map(|r| -r));
        roots
    }

    pub fn to_json(&self) -> RootDatumJson {
        RootDatumJson {
            family: self.family,
            rank: self.rank,
            lattice_kind: self.lattice_kind,
            positive_roots: self.positive_roots.clone(),
            simple_roots: self.simple_roots.clone(),
            rho: self.rho.clone(),
            weyl_order: self.weyl_order,
        }
    }

    pub fn from_json(json: &RootDatumJson) -> Result<Self> {
        build_root_datum(json.family, json.rank, json.lattice_kind)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    pub fn is_admissible(&self, weight: &Weight) -> bool {
        if weight.len() != self.dim() {
            return false;
        }
        if weight.is_integral() {
            return true;
        }
        self.lattice_kind == LatticeKind::SpinAllowed
            && weight.0.iter().all(|x| (x - Q::new(1, 2)).is_integer())
    }

    pub fn check_weight(&self, weight: &Weight) -> Result<()> {
        self.check_len(weight.len())?;
        if !self.is_admissible(weight) {
            return Err(Error::Inadmissible(weight.to_string()));
        }
        Ok(())
    }

    pub fn check_dominant(&self, weight: &Weight) -> Result<()> {
        self.check_weight(weight)?;
        if !self.is_dominant(weight) {
            return Err(Error::NotDominant(weight.to_string()));
        }
        Ok(())
    }

    pub fn pairing(&self, weight: &Weight, root: &Weight) -> Result<Q> {
        self.check_len(weight.len())?;
        self.check_len(root.len())?;
        Ok(weight.dot(root))
    }

    /// `⟨μ, α∨⟩ = 2⟨μ,α⟩ / ⟨α,α⟩`.
    pub fn coroot_pairing(&self, weight: &Weight, root: &Weight) -> Q {
        weight.dot(root) * 2 / root.dot(root)
    }

    pub fn is_dominant(&self, weight: &Weight) -> bool {
        weight.len() == self.dim()
            && self
                .simple_roots
                .iter()
                .all(|a| !weight.dot(a).is_negative())
    }

    /// Strictly dominant: positive pairing with every simple root.
    pub fn is_strictly_dominant(&self, weight: &Weight) -> bool {
        weight.len() == self.dim()
            && self.simple_roots.iter().all(|a| weight.dot(a).is_positive())
    }

    pub fn torus_exponent(&self, gamma: &TorusElement, weight: &Weight) -> Result<Complex64> {
        self.check_len(gamma.len())?;
        self.check_len(weight.len())?;
        Ok(gamma.monomial(weight))
    }

    /// The dominant element of the Weyl orbit of `weight`.
    pub fn dominant_conjugate(&self, weight: &Weight) -> Weight {
        let mut v = weight.0.clone();
        match self.family {
            Family::A => v.sort_by(|a, b| b.cmp(a)),
            Family::B | Family::C => {
                for x in v.iter_mut() {
                    *x = x.abs();
                }
                v.sort_by(|a, b| b.cmp(a));
            }
            Family::D => {
                let negatives = v.iter().filter(|x| x.is_negative()).count();
                let has_zero = v.iter().any(Zero::is_zero);
                for x in v.iter_mut() {
                    *x = x.abs();
                }
                v.sort_by(|a, b| b.cmp(a));
                if negatives % 2 == 1 && !has_zero {
                    let last = v.len() - 1;
                    v[last] = -v[last];
                }
            }
        }
        Weight(v)
    }

    /// True when `γ` pairs integrally with every root, i.e. `γ` is central.
    pub fn is_central(&self, gamma: &TorusElement) -> bool {
        self.positive_roots.iter().all(|a| gamma.kills(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn w(xs: &[(i64, i64)]) -> Weight {
        Weight(xs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn b2_roots_and_rho() {
        let d = build_root_datum(Family::B, 2, LatticeKind::SpinAllowed).unwrap();
        let roots: Vec<Weight> = d.positive_roots().to_vec();
        assert_eq!(roots.len(), 4);
        for r in [[1, -1], [0, 1], [1, 0], [1, 1]] {
            assert!(roots.contains(&Weight::from_ints(&r)));
        }
        assert_eq!(d.rho(), &w(&[(3, 2), (1, 2)]));
        assert_eq!(d.weyl_order(), 8);
    }

    #[test]
    fn a1_is_gl2() {
        let d = build_root_datum(Family::A, 1, LatticeKind::Integral).unwrap();
        assert_eq!(d.positive_roots().len(), 1);
        assert_eq!(d.weyl_order(), 2);
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn b_rho_formula() {
        for n in 1..=6 {
            let d = build_root_datum(Family::B, n, LatticeKind::Integral).unwrap();
            let expected: Vec<Q> = (0..n).map(|i| Q::new(2 * (n - i) as i64 - 1, 2)).collect();
            assert_eq!(d.rho().coords(), expected.as_slice());
        }
    }

    #[test]
    fn invariants_for_all_supported() {
        for family in [Family::A, Family::B, Family::C, Family::D] {
            for n in 1..=6 {
                let Ok(d) = build_root_datum(family, n, LatticeKind::Integral) else {
                    assert!(family == Family::D && n == 1);
                    continue;
                };
                let mut sum = Weight::zero(d.dim());
                for r in d.positive_roots() {
                    sum = &sum + r;
                    assert!(r.dot(d.rho()).is_positive());
                }
                assert_eq!(&sum.scale(Q::new(1, 2)), d.rho());
                let mut sorted = d.positive_roots().to_vec();
                sorted.sort();
                assert_eq!(sorted, d.positive_roots());
                for s in d.simple_roots() {
                    assert!(d.positive_roots().contains(s));
                }
            }
        }
    }

    #[test]
    fn unsupported_combinations() {
        assert!(build_root_datum(Family::D, 1, LatticeKind::Integral).is_err());
        assert!(build_root_datum(Family::A, 0, LatticeKind::Integral).is_err());
        assert!(build_root_datum(Family::C, 2, LatticeKind::SpinAllowed).is_err());
    }

    #[test]
    fn pairing_and_dominance() {
        let d = build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap();
        let e1 = Weight::from_ints(&[1, 0]);
        assert_eq!(d.pairing(&e1, &Weight::from_ints(&[1, 1])).unwrap(), qi(1));
        assert_eq!(d.pairing(d.rho(), &Weight::from_ints(&[1, -1])).unwrap(), qi(1));
        assert_eq!(d.pairing(&Weight::zero(2), &e1).unwrap(), qi(0));
        assert!(d.pairing(&Weight::zero(3), &e1).is_err());
        assert!(d.is_dominant(&e1));
        assert!(!d.is_dominant(&Weight::from_ints(&[0, 1])));
        assert!(d.is_dominant(&Weight::zero(2)));
    }

    #[test]
    fn admissibility() {
        let spin = build_root_datum(Family::B, 2, LatticeKind::SpinAllowed).unwrap();
        let int = build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap();
        let half = w(&[(1, 2), (1, 2)]);
        assert!(spin.is_admissible(&half));
        assert!(!int.is_admissible(&half));
        assert!(!spin.is_admissible(&w(&[(1, 2), (1, 1)])));
    }

    #[test]
    fn torus_exponent_examples() {
        let d = build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap();
        let t = TorusElement::new(vec![q(1, 2), q(0, 1)]);
        assert_eq!(d.torus_exponent(&t, &Weight::from_ints(&[1, 0])).unwrap(), Complex64::new(-1.0, 0.0));
        let t = TorusElement::new(vec![q(1, 4), q(1, 4)]);
        assert_eq!(d.torus_exponent(&t, &Weight::from_ints(&[1, 1])).unwrap(), Complex64::new(-1.0, 0.0));
        let t = TorusElement::new(vec![q(3, 7), q(-2, 5)]);
        assert_eq!(d.torus_exponent(&t, &Weight::zero(2)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dominant_conjugate_d() {
        let d = build_root_datum(Family::D, 3, LatticeKind::Integral).unwrap();
        assert_eq!(d.dominant_conjugate(&Weight::from_ints(&[-1, 2, 3])), Weight::from_ints(&[3, 2, -1]));
        assert_eq!(d.dominant_conjugate(&Weight::from_ints(&[-1, 0, 3])), Weight::from_ints(&[3, 1, 0]));
        assert_eq!(d.dominant_conjugate(&Weight::from_ints(&[-1, -2, 3])), Weight::from_ints(&[3, 2, 1]));
    }

    #[test]
    fn json_shape() {
        let d = build_root_datum(Family::B, 2, LatticeKind::Integral).unwrap();
        let v = serde_json::to_value(d.to_json()).unwrap();
        assert_eq!(v["family"], "B");
        assert_eq!(v["rho"][0], "3/2");
        assert_eq!(v["weyl_order"], 8);
        let back: RootDatumJson = serde_json::from_value(v).unwrap();
        assert_eq!(RootDatum::from_json(&back).unwrap(), d);
    }
}
