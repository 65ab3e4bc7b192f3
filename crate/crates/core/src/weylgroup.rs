//! Weyl groups of classical type as signed permutations, Levi subsystems of
//! torus elements, and the factorization `W = W_M · W^M`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_q_vec, Q};
use crate::rootdata::{Family, RootDatum, TorusElement, Weight};

pub const DEFAULT_WEYL_CAP: u64 = 100_000;

/// `w(e_i) = signs[i] · e_{perm[i]}`. Type `A` elements have all signs `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        WeylElement {
            perm: (0..dim).collect(),
            signs: vec![1; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// Determinant of the action on `X*(T) ⊗ Q`.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.dim()];
        let mut parity = 0usize;
        for start in 0..self.dim() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            parity += len - 1;
        }
        let flips = self.signs.iter().filter(|&&s| s < 0).count();
        if (parity + flips).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn apply_vec(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = if self.signs[i] < 0 { -x } else { *x };
        }
        out
    }

    pub fn apply(&self, weight: &Weight) -> Weight {
        Weight(self.apply_vec(&weight.0))
    }

    /// Acts on the lift of a torus element by the same linear map, so that
    /// `(wγ)^{wμ} = γ^μ`.
    pub fn apply_torus(&self, gamma: &TorusElement) -> TorusElement {
        TorusElement::new(self.apply_vec(&gamma.angles))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }

    /// The reflection `s_α` for a root of a classical system.
    pub fn reflection(root: &Weight) -> WeylElement {
        let n = root.len();
        let norm = root.dot(root);
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            // s_α(e_i) = e_i − 2⟨e_i,α⟩/⟨α,α⟩ · α
            let c = root.0[i] * 2 / norm;
            let mut image: Vec<Q> = root.0.iter().map(|a| -(c * a)).collect();
            image[i] += Q::from_integer(1);
            let j = image
                .iter()
                .position(|x| !x.is_zero())
                .expect("reflection image is a signed basis vector");
            perm[i] = j;
            signs[i] = if image[j].is_negative() { -1 } else { 1 };
        }
        WeylElement { perm, signs }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Enumerates `W` with an explicit cap on its order.
pub fn enumerate_weyl_capped(datum: &RootDatum, cap: u64) -> Result<Vec<WeylElement>> {
    if datum.weyl_order() > cap {
        return Err(Error::CapExceeded {
            what: "Weyl group order",
            size: datum.weyl_order() as u128,
            cap: cap as u128,
        });
    }
    let dim = datum.dim();
    let sign_patterns: Vec<Vec<i8>> = match datum.family() {
        Family::A => vec![vec![1; dim]],
        family => (0u32..(1 << dim))
            .filter(|mask| family != Family::D || mask.count_ones() % 2 == 0)
            .map(|mask| {
                (0..dim)
                    .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                    .collect()
            })
            .collect(),
    };
    let mut out = Vec::with_capacity(datum.weyl_order() as usize);
    let mut perm: Vec<usize> = (0..dim).collect();
    loop {
        for signs in &sign_patterns {
            out.push(WeylElement {
                perm: perm.clone(),
                signs: signs.clone(),
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    debug_assert_eq!(out.len() as u64, datum.weyl_order());
    Ok(out)
}

/// All Weyl group elements in a deterministic order (permutations in
/// lexicographic order, then sign masks ascending). Cached per datum.
pub fn enumerate_weyl(datum: &RootDatum) -> Result<Arc<Vec<WeylElement>>> {
    if let Some(cached) = datum.weyl_cache.get() {
        return Ok(cached.clone());
    }
    let elements = Arc::new(enumerate_weyl_capped(datum, DEFAULT_WEYL_CAP)?);
    Ok(datum.weyl_cache.get_or_init(|| elements).clone())
}

fn is_positive(datum: &RootDatum, root: &Weight) -> bool {
    root.dot(datum.rho()).is_positive()
}

/// The centralizer data of a torus element: `R(M,T)`, `Δ_M`, `ρ_M`, `S(M)`,
/// `W_M` and the minimal coset representatives `W^M`.
#[derive(Debug, Clone, Serialize)]
pub struct LeviDatum {
    #[serde(skip)]
    parent: RootDatum,
    pub element: TorusElement,
    pub levi_roots: Vec<Weight>,
    pub positive_levi_roots: Vec<Weight>,
    pub simple_levi_roots: Vec<Weight>,
    #[serde(with = "serde_q_vec")]
    pub rho_m: Vec<Q>,
    pub complement: Vec<Weight>,
    pub levi_weyl: Vec<WeylElement>,
    pub min_reps: Vec<WeylElement>,
}

impl LeviDatum {
    pub fn parent(&self) -> &RootDatum {
        &self.parent
    }

    pub fn rho_m(&self) -> Weight {
        Weight(self.rho_m.clone())
    }

    pub fn is_central(&self) -> bool {
        self.complement.is_empty()
    }

    /// Dominance relative to the Levi: `⟨μ, α⟩ ≥ 0` for `α ∈ Δ_M`.
    pub fn is_dominant(&self, weight: &Weight) -> bool {
        self.simple_levi_roots
            .iter()
            .all(|a| !weight.dot(a).is_negative())
    }

    /// Defining condition of `W^M`: `w^{-1}α ∈ R_+` for all `α ∈ Δ_M`.
    pub fn is_min_rep(&self, w: &WeylElement) -> bool {
        let inv = w.inverse();
        self.simple_levi_roots
            .iter()
            .all(|a| is_positive(&self.parent, &inv.apply(a)))
    }
}

/// Indecomposable elements of a positive system.
fn indecomposables(positive: &[Weight]) -> Vec<Weight> {
    let set: HashSet<&Weight> = positive.iter().collect();
    positive
        .iter()
        .filter(|a| !positive.iter().any(|b| set.contains(&(*a - b))))
        .cloned()
        .collect()
}

/// Builds the Levi subsystem `R(M,T) = {α : ⟨α,t⟩ ∈ Z}` of `γ`.
pub fn levi_of(datum: &RootDatum, gamma: &TorusElement) -> Result<LeviDatum> {
    datum.check_len(gamma.len())?;
    let weyl = enumerate_weyl(datum)?;
    let positive_levi_roots: Vec<Weight> = datum
        .positive_roots()
        .iter()
        .filter(|a| gamma.kills(a))
        .cloned()
        .collect();
    let complement: Vec<Weight> = datum
        .positive_roots()
        .iter()
        .filter(|a| !gamma.kills(a))
        .cloned()
        .collect();
    let mut levi_roots = positive_levi_roots.clone();
    levi_roots.extend(positive_levi_roots.iter().map(|a| -a));
    let simple_levi_roots = indecomposables(&positive_levi_roots);

    let mut rho_m = Weight::zero(datum.dim());
    for a in &positive_levi_roots {
        rho_m = &rho_m + a;
    }
    let rho_m = rho_m.scale(Q::new(1, 2));

    // W_M is generated by the simple reflections of the Levi.
    let index: HashMap<&WeylElement, usize> = weyl.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let generators: Vec<WeylElement> = simple_levi_roots.iter().map(WeylElement::reflection).collect();
    let id = WeylElement::identity(datum.dim());
    let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for s in &generators {
            let next = w.compose(s);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut levi_weyl: Vec<WeylElement> = seen.into_iter().collect();
    levi_weyl.sort_by_key(|w| index[w]);

    let mut levi = LeviDatum {
        parent: datum.clone(),
        element: gamma.clone(),
        levi_roots,
        positive_levi_roots,
        simple_levi_roots,
        rho_m: rho_m.0,
        complement,
        levi_weyl,
        min_reps: Vec::new(),
    };
    levi.min_reps = weyl.iter().filter(|w| levi.is_min_rep(w)).cloned().collect();
    if levi.levi_weyl.len() * levi.min_reps.len() != weyl.len() {
        return Err(Error::NumericalGuard(format!(
            "|W_M|·|W^M| = {}·{} differs from |W| = {}",
            levi.levi_weyl.len(),
            levi.min_reps.len(),
            weyl.len()
        )));
    }
    Ok(levi)
}

/// Writes `w = w_s ∘ w_u` with `w_s ∈ W_M` and `w_u ∈ W^M`.
pub fn coset_decompose(levi: &LeviDatum, w: &WeylElement) -> Result<(WeylElement, WeylElement)> {
    levi.parent.check_len(w.dim())?;
    for ws in &levi.levi_weyl {
        let wu = ws.inverse().compose(w);
        if levi.is_min_rep(&wu) {
            return Ok((ws.clone(), wu));
        }
    }
    Err(Error::NumericalGuard(
        "no coset representative found; element is not in W".into(),
    ))
}

/// Computes `λ_u` with `w_u(λ+ρ) = λ_u + ρ_M`; the result is dominant for `M`.
pub fn shifted_dominant(levi: &LeviDatum, lambda: &Weight, w_u: &WeylElement) -> Result<Weight> {
    let datum = &levi.parent;
    datum.check_len(lambda.len())?;
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    if w_u.dim() != datum.dim() || !levi.is_min_rep(w_u) {
        return Err(Error::InvalidParameter(
            "w_u is not a minimal coset representative".into(),
        ));
    }
    let shifted = &w_u.apply(&(lambda + datum.rho())) - &levi.rho_m();
    if !levi.is_dominant(&shifted) {
        return Err(Error::NumericalGuard(format!(
            "λ_u = {shifted} is not dominant for the Levi"
        )));
    }
    Ok(shifted)
}
