//! The θ-twisted `GL(2n)` layer and its norm correspondence with `SO(2n+1)`.
//!
//! `θ(g) = J ᵗg⁻¹ J` with `J` the antidiagonal matrix of ones. A θ-semisimple
//! element `γ` is recorded through the spectrum `Λ` of `θ(γ)γ`; its norm is the
//! `SO(2n+1)` class with spectrum `−Λ ∪ {1}`.
//!
//! Angle sources `J·R_α` use angles in units of π: the vector `a` stands for
//! `α = π a`, so the norm `(−e^{2iα_j})` is the torus element with exact
//! rational angles `t_j = a_j + 1/2` (in turns).

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{serde_q_vec, turn, ComplexJson, Q};
use crate::rootdata::{build_root_datum, Family, LatticeKind, RootDatum, TorusElement, Weight};
use crate::weylgroup::enumerate_weyl;

pub type CMatrix = DMatrix<Complex64>;

/// Largest accepted condition number for [`theta_apply`].
pub const CONDITION_GUARD: f64 = 1e12;
/// Tolerance for multiset comparisons of spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// `|B_n denominator at the norm|` below this is singular.
pub const NORM_REGULAR_THRESHOLD: f64 = 1e-9;
/// Global sign of the twisted character (intertwiner normalization).
pub const TWISTED_SIGN: i8 = 1;

// Eigenvalue clusters for the semisimplicity test; wider than SPECTRUM_TOL
// because a defective eigenvalue splits at the square root of roundoff.
const CLUSTER_TOL: f64 = 1e-5;
const RANK_TOL: f64 = 1e-7;
// Iteration cap for the Schur and SVD solvers; unbounded iteration can stall
// on nearly scalar input.
const MAX_ITERATIONS: usize = 10_000;

pub fn antidiagonal_j(n: usize) -> CMatrix {
    let m = 2 * n;
    CMatrix::from_fn(m, m, |i, j| if i + j == m - 1 { Complex64::one() } else { Complex64::zero() })
}

/// `D = diag(1, −1, 1, …, −1)`.
pub fn whittaker_d(n: usize) -> CMatrix {
    let m = 2 * n;
    CMatrix::from_fn(m, m, |i, j| match (i == j, i % 2) {
        (true, 0) => Complex64::one(),
        (true, _) => -Complex64::one(),
        _ => Complex64::zero(),
    })
}

/// `J_0 = D J`, with `J_0² = −1`.
pub fn whittaker_j0(n: usize) -> CMatrix {
    whittaker_d(n) * antidiagonal_j(n)
}

/// `γ_0 = diag(1_n, −1_n)`.
pub fn gamma0(n: usize) -> CMatrix {
    let m = 2 * n;
    CMatrix::from_fn(m, m, |i, j| match (i == j, i < n) {
        (true, true) => Complex64::one(),
        (true, false) => -Complex64::one(),
        _ => Complex64::zero(),
    })
}

pub fn real_matrix(rows: &[Vec<f64>]) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
}

fn check_shape(n: usize, g: &CMatrix) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if g.nrows() != 2 * n || g.ncols() != 2 * n {
        return Err(Error::LengthMismatch {
            expected: 2 * n,
            got: g.nrows().max(g.ncols()),
        });
    }
    Ok(())
}

fn guarded_inverse(g: &CMatrix) -> Result<CMatrix> {
    let sv = SVD::try_new(g.clone(), false, false, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| Error::NumericalGuard("SVD did not converge".into()))?
        .singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if min == 0.0 { f64::INFINITY } else { max / min };
    if !cond.is_finite() || cond > CONDITION_GUARD {
        return Err(Error::IllConditioned(cond));
    }
    g.clone().try_inverse().ok_or(Error::IllConditioned(cond))
}

/// `θ(g) = J ᵗg⁻¹ J`.
pub fn theta_apply(n: usize, g: &CMatrix) -> Result<CMatrix> {
    check_shape(n, g)?;
    let j = antidiagonal_j(n);
    Ok(&j * guarded_inverse(g)?.transpose() * &j)
}

/// `θ_0(g) = J_0 ᵗg⁻¹ J_0⁻¹`.
pub fn theta0_apply(n: usize, g: &CMatrix) -> Result<CMatrix> {
    check_shape(n, g)?;
    let j0 = whittaker_j0(n);
    Ok(&j0 * guarded_inverse(g)?.transpose() * -&j0)
}

/// θ-conjugation `g⁻¹ γ θ(g)`.
pub fn theta_conjugate(n: usize, gamma: &CMatrix, g: &CMatrix) -> Result<CMatrix> {
    check_shape(n, gamma)?;
    Ok(guarded_inverse(g)? * gamma * theta_apply(n, g)?)
}

/// Moves a `θ_0`-side element to the `θ` side: the `θ_0`-norm of `δ` is the
/// θ-norm of `δ D`.
pub fn from_whittaker(n: usize, delta: &CMatrix) -> Result<CMatrix> {
    check_shape(n, delta)?;
    Ok(delta * whittaker_d(n))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwistedSource {
    /// `J·R_α` with `α = π·a`.
    Angles(Vec<Q>),
    Matrix(CMatrix),
}

impl Serialize for TwistedSource {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct AnglesJson<'a> {
            #[serde(with = "serde_q_vec")]
            angles: &'a [Q],
        }
        #[derive(Serialize)]
        struct MatrixJson {
            matrix: Vec<Vec<ComplexJson>>,
        }
        match self {
            TwistedSource::Angles(a) => AnglesJson { angles: a }.serialize(s),
            TwistedSource::Matrix(m) => MatrixJson {
                matrix: (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
                    .collect(),
            }
            .serialize(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TwistedClass {
    pub n: usize,
    pub source: TwistedSource,
    pub delta_spectrum: Vec<Complex64>,
    pub norm_spectrum: Vec<Complex64>,
}

impl Serialize for TwistedClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let to_json = |v: &[Complex64]| v.iter().copied().map(ComplexJson::from).collect::<Vec<_>>();
        let mut st = s.serialize_struct("TwistedClass", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("delta_spectrum", &to_json(&self.delta_spectrum))?;
        st.serialize_field("norm_spectrum", &to_json(&self.norm_spectrum))?;
        st.serialize_field("elliptic", &is_elliptic(self))?;
        st.end()
    }
}

fn clean(z: Complex64) -> Complex64 {
    let scale = z.norm().max(1.0);
    let fix = |x: f64| if x.abs() < 1e-13 * scale { 0.0 } else { x };
    Complex64::new(fix(z.re), fix(z.im))
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.arg()
            .partial_cmp(&b.arg())
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
}

/// Greedy multiset comparison with a relative tolerance.
pub fn multiset_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm() / x.norm().max(y.norm()).max(1.0);
            if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, _)) => {
                used[j] = true;
                continue 'outer;
            }
            None => return false,
        }
    }
    true
}

fn spectrum(m: &CMatrix) -> Result<Vec<Complex64>> {
    // Removing the mean eigenvalue first keeps the QR iteration from stalling
    // when the matrix is close to scalar.
    let size = m.nrows();
    let mean = m.trace() / size as f64;
    for shift in [mean, Complex64::zero()] {
        let shifted = m - CMatrix::identity(size, size) * shift;
        if let Some(eig) = Schur::try_new(shifted, f64::EPSILON, MAX_ITERATIONS).and_then(|s| s.eigenvalues()) {
            return Ok(eig.iter().map(|z| clean(z + shift)).collect());
        }
    }
    Err(Error::NumericalGuard("Schur decomposition did not converge".into()))
}

fn check_semisimple(delta: &CMatrix, eig: &[Complex64]) -> Result<()> {
    let size = delta.nrows();
    let scale = delta.norm().max(1.0);
    let mut assigned = vec![false; eig.len()];
    for i in 0..eig.len() {
        if assigned[i] {
            continue;
        }
        let cluster: Vec<usize> = (0..eig.len())
            .filter(|&j| !assigned[j] && (eig[j] - eig[i]).norm() <= CLUSTER_TOL * scale)
            .collect();
        let center = cluster.iter().map(|&j| eig[j]).sum::<Complex64>() / cluster.len() as f64;
        for &j in &cluster {
            assigned[j] = true;
        }
        // A semisimple cluster perturbed by roundoff leaves singular values of
        // the order of its spread; a Jordan block keeps one of order one.
        let spread = cluster.iter().map(|&j| (eig[j] - center).norm()).fold(0.0, f64::max);
        let threshold = (RANK_TOL * scale).max(10.0 * spread);
        let shifted = delta - CMatrix::identity(size, size) * center;
        let sv = SVD::try_new(shifted, false, false, f64::EPSILON, MAX_ITERATIONS)
            .ok_or_else(|| Error::NumericalGuard("SVD did not converge".into()))?
            .singular_values;
        let rank = sv.iter().filter(|&&s| s > threshold).count();
        if rank + cluster.len() != size {
            return Err(Error::NotSemisimple(format!(
                "eigenvalue {center} has multiplicity {} but geometric multiplicity {}",
                cluster.len(),
                size - rank
            )));
        }
    }
    Ok(())
}

/// Computes the twisted class of `source` and its norm in `SO(2n+1)`.
pub fn norm_class(n: usize, source: TwistedSource) -> Result<TwistedClass> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (delta_spectrum, norm_spectrum) = match &source {
        TwistedSource::Angles(a) => {
            if a.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: a.len(),
                });
            }
            let mut delta = Vec::with_capacity(2 * n);
            let mut norm = Vec::with_capacity(2 * n + 1);
            for x in a {
                let (up, down) = (turn(x), turn(&-x));
                delta.push(up);
                delta.push(down);
                norm.push(-up);
                norm.push(-down);
            }
            norm.push(Complex64::one());
            (delta, norm)
        }
        TwistedSource::Matrix(g) => {
            let delta_m = theta_apply(n, g)? * g;
            let mut delta = spectrum(&delta_m)?;
            check_semisimple(&delta_m, &delta)?;
            sort_spectrum(&mut delta);
            let mut norm: Vec<Complex64> = delta.iter().map(|z| clean(-z)).collect();
            norm.push(Complex64::one());
            sort_spectrum(&mut norm);
            (delta, norm)
        }
    };
    let inverted: Vec<Complex64> = delta_spectrum.iter().map(|z| z.inv()).collect();
    if !multiset_close(&delta_spectrum, &inverted, SPECTRUM_TOL) {
        return Err(Error::NumericalGuard(
            "spectrum of θ(γ)γ is not closed under inversion".into(),
        ));
    }
    let det: Complex64 = norm_spectrum.iter().product();
    if (det - 1.0).norm() > SPECTRUM_TOL * 1e2 {
        return Err(Error::NumericalGuard(format!("norm has determinant {det}, not 1")));
    }
    Ok(TwistedClass {
        n,
        source,
        delta_spectrum,
        norm_spectrum,
    })
}

/// θ-elliptic: the norm lies in the compact form (unit-modulus spectrum
/// closed under complex conjugation).
pub fn is_elliptic(class: &TwistedClass) -> bool {
    let on_circle = class
        .norm_spectrum
        .iter()
        .all(|z| (z.norm() - 1.0).abs() <= SPECTRUM_TOL);
    let conj: Vec<Complex64> = class.norm_spectrum.iter().map(|z| z.conj()).collect();
    on_circle && multiset_close(&class.norm_spectrum, &conj, SPECTRUM_TOL)
}

/// `D(x) = Π(1+x_i²) Π_{i<j}(1−x_i²/x_j²) Π_{i<j}(1−x_i²x_j²)`.
pub fn twisted_denominator(x: &[Complex64]) -> Result<Complex64> {
    if x.is_empty() {
        return Err(Error::InvalidParameter("empty vector".into()));
    }
    if let Some(i) = x.iter().position(|z| z.is_zero()) {
        return Err(Error::InvalidParameter(format!("entry {i} is zero")));
    }
    let sq: Vec<Complex64> = x.iter().map(|z| z * z).collect();
    let mut d = Complex64::one();
    for i in 0..sq.len() {
        d *= Complex64::one() + sq[i];
        for j in (i + 1)..sq.len() {
            d *= (Complex64::one() - sq[i] / sq[j]) * (Complex64::one() - sq[i] * sq[j]);
        }
    }
    Ok(d)
}

/// `Π_{α>0} (1 − h^α)` over the positive roots of `B_n`, for arbitrary
/// nonzero complex `h`.
pub fn bn_weyl_product(h: &[Complex64]) -> Result<Complex64> {
    let datum = build_root_datum(Family::B, h.len(), LatticeKind::Integral)?;
    Ok(weyl_product(&datum, h))
}

fn weyl_product(datum: &RootDatum, h: &[Complex64]) -> Complex64 {
    datum
        .positive_roots()
        .iter()
        .map(|a| {
            let mono: Complex64 = a
                .0
                .iter()
                .zip(h)
                .map(|(e, z)| z.powi(e.to_integer() as i32))
                .product();
            Complex64::one() - mono
        })
        .product()
}

/// Discrete-series parameter `p_1 > … > p_n > 0` with `p_i ∈ 1/2 + Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParamJson", into = "ParamJson")]
pub struct DiscreteParameter {
    p: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct ParamJson(#[serde(with = "serde_q_vec")] Vec<Q>);

impl TryFrom<ParamJson> for DiscreteParameter {
    type Error = Error;

    fn try_from(v: ParamJson) -> Result<Self> {
        DiscreteParameter::new(v.0)
    }
}

impl From<DiscreteParameter> for ParamJson {
    fn from(p: DiscreteParameter) -> Self {
        ParamJson(p.p)
    }
}

fn rho_b(n: usize) -> Vec<Q> {
    (0..n).map(|i| Q::new(2 * (n - i) as i64 - 1, 2)).collect()
}

impl DiscreteParameter {
    pub fn new(p: Vec<Q>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("parameter must be nonempty".into()));
        }
        let half = Q::new(1, 2);
        for (i, x) in p.iter().enumerate() {
            if !(x - half).is_integer() {
                return Err(Error::InvalidParameter(format!("p_{} = {x} is not in 1/2 + Z", i + 1)));
            }
            if *x <= Q::zero() {
                return Err(Error::InvalidParameter(format!("p_{} = {x} is not positive", i + 1)));
            }
            if i > 0 && p[i - 1] <= *x {
                return Err(Error::InvalidParameter("parameter must be strictly decreasing".into()));
            }
        }
        Ok(DiscreteParameter { p })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn values(&self) -> &[Q] {
        &self.p
    }

    /// `p = m_H + ρ_H`.
    pub fn from_highest_weight(m_h: &Weight) -> Result<Self> {
        let rho = rho_b(m_h.len());
        DiscreteParameter::new(m_h.0.iter().zip(&rho).map(|(m, r)| m + r).collect())
    }

    /// Inverts `m(π)`; the weight must have the self-dual shape `(m, −m reversed)`.
    pub fn from_gl_weight(m_pi: &[Q]) -> Result<Self> {
        if m_pi.is_empty() || !m_pi.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter("GL weight must have even length".into()));
        }
        let n = m_pi.len() / 2;
        let param = DiscreteParameter::new(
            (0..n)
                .map(|i| m_pi[i] + Q::new(2 * (n - i) as i64 - 1, 2))
                .collect(),
        )?;
        if parameter_maps(n, &param)?.m_pi != m_pi {
            return Err(Error::InvalidParameter("GL weight is not θ-stable".into()));
        }
        Ok(param)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterMaps {
    pub m_h: Weight,
    #[serde(with = "serde_q_vec")]
    pub m_pi: Vec<Q>,
    #[serde(with = "serde_q_vec")]
    pub p_pi: Vec<Q>,
}

/// `m_H = p − ρ_H`, `p(π) = (p, −p reversed)` and `m(π) = p(π) − ρ_{GL(2n)}`.
pub fn parameter_maps(n: usize, p: &DiscreteParameter) -> Result<ParameterMaps> {
    if p.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: p.n(),
        });
    }
    let rho_h = rho_b(n);
    let m_h = Weight(p.p.iter().zip(&rho_h).map(|(x, r)| x - r).collect());
    let mut p_pi = p.p.clone();
    p_pi.extend(p.p.iter().rev().map(|x| -x));
    let rho_gl: Vec<Q> = (0..2 * n).map(|i| Q::new(2 * n as i64 - 1 - 2 * i as i64, 2)).collect();
    let m_pi = p_pi.iter().zip(&rho_gl).map(|(x, r)| x - r).collect();
    Ok(ParameterMaps { m_h, m_pi, p_pi })
}

/// The norm `(−e^{2iα_j})` of `J R_α` as an exact torus element of `SO(2n+1)`.
pub fn norm_torus_element(alpha: &[Q]) -> TorusElement {
    TorusElement::new(alpha.iter().map(|a| a + Q::new(1, 2)).collect())
}

/// `x_j = e^{iα_j}` for `α = π a`.
pub fn twisted_torus_point(alpha: &[Q]) -> Vec<Complex64> {
    alpha.iter().map(|a| turn(&(a / 2))).collect()
}

/// Twisted character `Θ_{π,θ}(J R_α)` from the closed formula
/// `ε Σ_w ε(w) 𝒩^{w p} / D(𝒩)` with `ε` = [`TWISTED_SIGN`].
pub fn twisted_character(n: usize, p: &DiscreteParameter, alpha: &[Q]) -> Result<Complex64> {
    twisted_character_with_sign(n, p, alpha, TWISTED_SIGN)
}

pub fn twisted_character_with_sign(
    n: usize,
    p: &DiscreteParameter,
    alpha: &[Q],
    sign: i8,
) -> Result<Complex64> {
    if p.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: p.n(),
        });
    }
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    let datum = build_root_datum(Family::B, n, LatticeKind::Integral)?;
    let t = norm_torus_element(alpha);
    let h: Vec<Complex64> = t.angles.iter().map(turn).collect();
    let regularity = weyl_product(&datum, &h).norm();
    if regularity < NORM_REGULAR_THRESHOLD {
        return Err(Error::SingularElement(regularity));
    }
    let weyl = enumerate_weyl(&datum)?;
    let pw = Weight(p.p.clone());
    let num: Complex64 = weyl
        .iter()
        .map(|w| t.monomial(&w.apply(&pw)) * w.sign() as f64)
        .sum();
    // Σ_w ε(w) h^{wρ} = (−1)^{|R+|} h^{−ρ} Π_{α>0}(1 − h^α), and the product is D(x).
    let parity = if (n * n).is_multiple_of(2) { 1.0 } else { -1.0 };
    let den = t.monomial(&-datum.rho()) * twisted_denominator(&twisted_torus_point(alpha))? * parity;
    Ok(num / den * sign as f64)
}
