//! Exponent arithmetic for the inhomogeneous NLS
//! `i u_t + Δu = ±|x|^{-b} |u|^α u`.
//!
//! Everything here is closed-form: criticality indices, Morawetz growth
//! exponents, Strichartz admissibility, and the Hölder feasibility witnesses
//! used by the nonlinear estimates in two dimensions and in `N ≥ 3`.

use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign of the nonlinearity. Focusing is the minus sign on the right-hand
/// side of `i u_t + Δu = ±|x|^{-b}|u|^α u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Focusing,
    Defocusing,
}

impl Sign {
    /// `+1` for defocusing, `-1` for focusing.
    pub fn kappa(self) -> f64 {
        match self {
            Sign::Focusing => -1.0,
            Sign::Defocusing => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Focusing => "focusing",
            Sign::Defocusing => "defocusing",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "focusing" => Ok(Sign::Focusing),
            "defocusing" => Ok(Sign::Defocusing),
            other => Err(Error::InvalidArgument(format!(
                "unknown sign '{other}' (expected focusing or defocusing)"
            ))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The equation instance `(N, b, α, sign)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub n: u32,
    pub b: f64,
    pub alpha: f64,
    pub sign: Sign,
}

impl PhysParams {
    /// Validated constructor: `N ≥ 2`, `0 < b < min{2, N}`, `α > 0`.
    pub fn new(n: u32, b: f64, alpha: f64, sign: Sign) -> Result<Self> {
        let p = PhysParams { n, b, alpha, sign };
        p.validate()?;
        Ok(p)
    }

    /// The homogeneous equation (`b = 0`). Only used as a degenerate
    /// validation point, e.g. the Townes soliton at `N = 2, α = 2`.
    pub fn homogeneous(n: u32, alpha: f64, sign: Sign) -> Result<Self> {
        let p = PhysParams {
            n,
            b: 0.0,
            alpha,
            sign,
        };
        p.validate_common()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_common()?;
        if !(self.b > 0.0) {
            return Err(Error::InvalidParams(format!(
                "b out of range: need b > 0, got {}",
                self.b
            )));
        }
        Ok(())
    }

    fn validate_common(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "dimension N must be at least 2, got {}",
                self.n
            )));
        }
        if !self.b.is_finite() || self.b < 0.0 || self.b >= self.b_upper() {
            return Err(Error::InvalidParams(format!(
                "b out of range: need 0 < b < {}, got {}",
                self.b_upper(),
                self.b
            )));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    fn b_upper(&self) -> f64 {
        2.0_f64.min(self.n as f64)
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    pub fn kappa(&self) -> f64 {
        self.sign.kappa()
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    /// Exponent of the Morawetz norm `L^{α+2+b/(N-1)}`.
    pub fn scatter_exponent(&self) -> f64 {
        self.alpha + 2.0 + self.b / (self.dim() - 1.0)
    }

    /// `4 - 2b - (N-2)α`, the numerator shared by the Pohozaev ratios.
    pub fn pohozaev_numerator(&self) -> f64 {
        4.0 - 2.0 * self.b - (self.dim() - 2.0) * self.alpha
    }
}

/// An exponent that may be infinite (e.g. `2*` for `N = 2`, or `r = ∞` in an
/// admissible pair).
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinite => None,
        }
    }

    /// `x < self`, with every finite value below infinity.
    pub fn exceeds(self, x: f64) -> bool {
        match self {
            Exponent::Finite(v) => x < v,
            Exponent::Infinite => true,
        }
    }

    /// Reciprocal as an exact rational (`1/∞ = 0`). `None` for non-finite
    /// or zero floats.
    fn reciprocal_rational(self) -> Option<BigRational> {
        match self {
            Exponent::Infinite => Some(BigRational::zero()),
            Exponent::Finite(v) => {
                let r = BigRational::from_float(v)?;
                if r.is_zero() {
                    None
                } else {
                    Some(r.recip())
                }
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(v) => s.serialize_f64(*v),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            t => t
                .parse::<f64>()
                .map(Exponent::Finite)
                .map_err(|_| Error::InvalidArgument(format!("not an exponent: '{t}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentBundle {
    pub gamma_c: f64,
    /// `None` in the mass-critical case `γ_c = 0`, where `σ_c` is undefined.
    pub sigma_c: Option<f64>,
    pub two_star: Exponent,
    pub two_lower_star: f64,
    pub gamma_b: f64,
    pub beta1: f64,
    pub beta2: f64,
}

pub fn critical_exponents(params: &PhysParams) -> Result<ExponentBundle> {
    params.validate()?;
    Ok(exponents_unchecked(params))
}

/// Same formulas without the `b > 0` requirement; used for the homogeneous
/// validation point.
pub(crate) fn exponents_unchecked(params: &PhysParams) -> ExponentBundle {
    let n = params.dim();
    let b = params.b;
    let a = params.alpha;

    let gamma_c = n / 2.0 - (2.0 - b) / a;
    let sigma_c = if mass_critical_exact(params) {
        None
    } else {
        Some(params.pohozaev_numerator() / (n * a - 4.0 + 2.0 * b))
    };
    let two_star = if params.n >= 3 {
        Exponent::Finite((4.0 - 2.0 * b) / (n - 2.0))
    } else {
        Exponent::Infinite
    };
    let morawetz_denominator = (n - 1.0) * a + 2.0 + 2.0 * b;
    ExponentBundle {
        gamma_c,
        sigma_c,
        two_star,
        two_lower_star: (4.0 - 2.0 * b) / n,
        gamma_b: (a - 2.0 + b) / (a + 2.0 + b),
        beta1: (1.0_f64 / 3.0).max(2.0 / morawetz_denominator),
        beta2: ((2.0 + b) / 6.0).max((2.0 + b) / morawetz_denominator),
    }
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `γ_c = N/2 - (2-b)/α` in exact rational arithmetic on the binary values
/// of the inputs.
pub fn gamma_c_exact(params: &PhysParams) -> BigRational {
    let n = int(params.n as i64);
    n / int(2) - (int(2) - rational(params.b)) / rational(params.alpha)
}

/// `σ_c` from its second printed form `(4-2b-(N-2)α)/(Nα-4+2b)`, exactly.
/// `None` when the denominator vanishes.
pub fn sigma_c_exact(params: &PhysParams) -> Option<BigRational> {
    let n = int(params.n as i64);
    let b = rational(params.b);
    let a = rational(params.alpha);
    let num = int(4) - int(2) * &b - (&n - int(2)) * &a;
    let den = &n * &a - int(4) + int(2) * &b;
    if den.is_zero() {
        None
    } else {
        Some(num / den)
    }
}

/// Checks `σ_c · γ_c = 1 - γ_c` exactly. Returns `None` in the mass-critical
/// case where `σ_c` is undefined.
pub fn sigma_gamma_identity(params: &PhysParams) -> Option<bool> {
    let sigma = sigma_c_exact(params)?;
    let gamma = gamma_c_exact(params);
    Some(&sigma * &gamma == BigRational::one() - gamma)
}

fn mass_critical_exact(params: &PhysParams) -> bool {
    gamma_c_exact(params).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `N = 2, 0 < b < 1, α > 2 - b`.
    ScatteringScope2d,
    /// `N ≥ 4, 2_* < α < 2*`, or `N = 3, 0 < b < 5/4, 2_* < α < 3 - 2b`.
    ScatteringScopeAppendix,
    /// Intercritical, and `b` is in range of the `N = 3` result, but
    /// `α ≥ 3 - 2b`.
    IntercriticalOnly,
    MassCritical,
    MassSubcritical,
    OutOfScope,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ScatteringScope2d => "scattering_scope_2d",
            Regime::ScatteringScopeAppendix => "scattering_scope_appendix",
            Regime::IntercriticalOnly => "intercritical_only",
            Regime::MassCritical => "mass_critical",
            Regime::MassSubcritical => "mass_subcritical",
            Regime::OutOfScope => "out_of_scope",
        }
    }
}

pub fn classify_regime(params: &PhysParams) -> Result<Regime> {
    params.validate()?;
    let gamma = gamma_c_exact(params);
    if gamma.is_zero() {
        return Ok(Regime::MassCritical);
    }
    if gamma < BigRational::zero() {
        return Ok(Regime::MassSubcritical);
    }
    let ex = exponents_unchecked(params);
    if !ex.two_star.exceeds(params.alpha) {
        return Ok(Regime::OutOfScope);
    }
    let (b, a) = (params.b, params.alpha);
    let regime = match params.n {
        2 if b < 1.0 => Regime::ScatteringScope2d,
        2 => Regime::OutOfScope,
        3 if b < 1.25 && a < 3.0 - 2.0 * b => Regime::ScatteringScopeAppendix,
        3 if b < 1.25 => Regime::IntercriticalOnly,
        3 => Regime::OutOfScope,
        _ => Regime::ScatteringScopeAppendix,
    };
    Ok(regime)
}

/// Schrödinger admissibility: `2/q + N/r = N/2`, `q, r ∈ [2, ∞]`, excluding
/// the endpoint `(2, ∞, 2)`. Decided in exact rational arithmetic.
pub fn is_admissible_pair(q: Exponent, r: Exponent, n: u32) -> Result<bool> {
    for (name, e) in [("q", q), ("r", r)] {
        if let Exponent::Finite(v) = e {
            if !v.is_finite() || v < 2.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [2, inf], got {v}"
                )));
            }
        }
    }
    if n == 2 && q == Exponent::Finite(2.0) && r.is_infinite() {
        return Ok(false);
    }
    let inv_q = q.reciprocal_rational().expect("validated above");
    let inv_r = r.reciprocal_rational().expect("validated above");
    let n = int(n as i64);
    Ok(int(2) * inv_q + &n * inv_r == n / int(2))
}

const ETA_SCHEDULE_DECADES: std::ops::RangeInclusive<i32> = 1..=9;
const FEASIBILITY_MARGIN: f64 = 1e-6;
const EPS_START: f64 = 1e-3;
const EPS_HALVINGS: usize = 60;

/// Limit (`ε → 0`) and finite-`ε` values of the four exponents of the
/// `N ≥ 3` nonlinear estimate, on one region (unit ball or its complement).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionExponents {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub a1_eps: f64,
    pub b1_eps: f64,
    pub a2_eps: f64,
    pub b2_eps: f64,
}

impl RegionExponents {
    fn limits_min(&self) -> f64 {
        self.a1.min(self.b1).min(self.a2).min(self.b2)
    }

    fn finite_min(&self) -> f64 {
        self.a1_eps
            .min(self.b1_eps)
            .min(self.a2_eps)
            .min(self.b2_eps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub eta: Option<f64>,
    pub epsilon: Option<f64>,
    /// `θ(ε)` at the returned witnesses (two-dimensional variant).
    pub theta: Option<f64>,
    /// `θ_0 = lim_{ε→0} θ(ε)`.
    pub theta_limit: Option<f64>,
    /// `αθ/(α+2+b)`, reported without any asserted bound.
    pub ratio: Option<f64>,
    pub tau: Option<f64>,
    pub ball: Option<RegionExponents>,
    pub complement: Option<RegionExponents>,
}

impl FeasibilityReport {
    fn infeasible() -> Self {
        FeasibilityReport {
            feasible: false,
            eta: None,
            epsilon: None,
            theta: None,
            theta_limit: None,
            ratio: None,
            tau: None,
            ball: None,
            complement: None,
        }
    }
}

fn eta_schedule() -> impl Iterator<Item = f64> {
    ETA_SCHEDULE_DECADES.map(|k| 10f64.powi(-k))
}

fn eps_schedule() -> impl Iterator<Item = f64> {
    (0..EPS_HALVINGS).map(|k| EPS_START * 0.5f64.powi(k as i32))
}

/// `θ(ε) = (2-b-η-2αε) / (4α/(α+2+b) - 2αε)`.
pub fn lemma31_theta(b: f64, alpha: f64, eta: f64, eps: f64) -> f64 {
    (2.0 - b - eta - 2.0 * alpha * eps) / (4.0 * alpha / (alpha + 2.0 + b) - 2.0 * alpha * eps)
}

/// `θ_0 = (α+2+b)(2-b-η)/(4α)`.
pub fn lemma31_theta_limit(b: f64, alpha: f64, eta: f64) -> f64 {
    (alpha + 2.0 + b) * (2.0 - b - eta) / (4.0 * alpha)
}

fn theta_ok(theta: f64, alpha: f64) -> bool {
    theta >= FEASIBILITY_MARGIN
        && theta <= 1.0 - FEASIBILITY_MARGIN
        && alpha * theta - 1.0 >= FEASIBILITY_MARGIN
}

/// Searches witnesses `(η, ε)` with `θ(ε) ∈ (0,1)` and `αθ(ε) > 1` for the
/// two-dimensional nonlinear estimate. Parameters outside `0 < b < 1,
/// α > 2 - b` (but otherwise valid for `N = 2`) give an infeasible report.
pub fn lemma31_feasible(b: f64, alpha: f64) -> Result<FeasibilityReport> {
    PhysParams::new(2, b, alpha, Sign::Focusing)?;
    if b >= 1.0 || alpha <= 2.0 - b {
        return Ok(FeasibilityReport::infeasible());
    }
    for eta in eta_schedule() {
        let theta0 = lemma31_theta_limit(b, alpha, eta);
        if !theta_ok(theta0, alpha) {
            continue;
        }
        for eps in eps_schedule() {
            let theta = lemma31_theta(b, alpha, eta, eps);
            if theta_ok(theta, alpha) {
                return Ok(FeasibilityReport {
                    feasible: true,
                    eta: Some(eta),
                    epsilon: Some(eps),
                    theta: Some(theta),
                    theta_limit: Some(theta0),
                    ratio: Some(alpha * theta / (alpha + 2.0 + b)),
                    ..FeasibilityReport::infeasible()
                });
            }
        }
    }
    Ok(FeasibilityReport::infeasible())
}

/// Which side of the unit ball a Hölder split is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Ball,
    Complement,
}

impl Region {
    fn shift(self, eta: f64) -> f64 {
        match self {
            Region::Ball => eta,
            Region::Complement => -eta,
        }
    }
}

/// `a_1(ε), b_1(ε)` with `N/γ = b ± η`.
fn first_pair(n: f64, alpha: f64, n_over_gamma: f64, eps: f64) -> (f64, f64) {
    let a1 = (n + 2.0) / 2.0
        - n_over_gamma
        - (2.0 * (n - 2.0) * (alpha + 1.0) + eps * (n + 1.0 + (n - 2.0) * alpha))
            / (2.0 * (2.0 + eps));
    let b1 = n_over_gamma - (n + 2.0) / 2.0
        + (2.0 * (n * alpha + n - 2.0) + n * alpha * eps) / (2.0 * (2.0 + eps));
    (a1, b1)
}

/// `a_2(ε), b_2(ε)` for `N ≥ 4` with `N/γ = b + 1 ± η`.
fn second_pair_high(n: f64, alpha: f64, n_over_gamma: f64, eps: f64) -> (f64, f64) {
    let a2 = (n + 2.0) / 2.0 - n_over_gamma + 1.0
        - (2.0 * (n - 2.0) * (alpha + 1.0) + eps * (n + 1.0 + (n - 2.0) * alpha))
            / (2.0 * (2.0 + eps));
    let b2 = n_over_gamma - (n + 2.0) / 2.0 - 1.0
        + (2.0 * (n * alpha + n - 2.0) + n * alpha * eps) / (2.0 * (2.0 + eps));
    (a2, b2)
}

/// `a_2(ε), b_2(ε)` for `N = 3` with `3/γ = 1 + b ± η` and auxiliary `τ`.
fn second_pair_three(alpha: f64, tau: f64, three_over_gamma: f64, eps: f64) -> (f64, f64) {
    let a2 = 2.5
        - three_over_gamma
        - (2.0 * (alpha + tau) + eps * (3.0 * tau + 3.0 - (2.0 - alpha))) / (2.0 * (2.0 + eps));
    let b2 = three_over_gamma - 2.5
        + (2.0 * (3.0 * alpha + tau) + eps * (3.0 * tau + 3.0 - 3.0 * (2.0 - alpha)))
            / (2.0 * (2.0 + eps));
    (a2, b2)
}

/// The four exponents of the `N ≥ 3` estimate on `region`, at `ε = 0`
/// (limits) and at the given `ε`. `tau` is only read for `N = 3`.
pub fn appendix_exponents(
    params: &PhysParams,
    region: Region,
    eta: f64,
    tau: f64,
    eps: f64,
) -> RegionExponents {
    let n = params.dim();
    let (b, a) = (params.b, params.alpha);
    let shift = region.shift(eta);
    let eval = |e: f64| {
        let (a1, b1) = first_pair(n, a, b + shift, e);
        let (a2, b2) = if params.n == 3 {
            second_pair_three(a, tau, 1.0 + b + shift, e)
        } else {
            second_pair_high(n, a, b + 1.0 + shift, e)
        };
        (a1, b1, a2, b2)
    };
    let (a1, b1, a2, b2) = eval(0.0);
    let (a1_eps, b1_eps, a2_eps, b2_eps) = eval(eps);
    RegionExponents {
        a1,
        b1,
        a2,
        b2,
        a1_eps,
        b1_eps,
        a2_eps,
        b2_eps,
    }
}

/// `τ = min{(3-2b-α)/2, 0.1}` for `N = 3`.
pub fn appendix_tau(params: &PhysParams) -> Option<f64> {
    (params.n == 3).then(|| (0.5 * (3.0 - 2.0 * params.b - params.alpha)).min(0.1))
}

/// Witnesses `(η, τ, ε)` making `a_1, b_1, a_2, b_2` positive on the ball and
/// its complement, for parameters in the `N ≥ 3` scattering region.
pub fn appendix_feasible(params: &PhysParams) -> Result<FeasibilityReport> {
    let regime = classify_regime(params)?;
    if regime != Regime::ScatteringScopeAppendix {
        return Err(Error::OutOfScope(format!(
            "(N={}, b={}, alpha={}) is {}, not in the N>=3 scattering region",
            params.n,
            params.b,
            params.alpha,
            regime.as_str()
        )));
    }
    let tau = appendix_tau(params);
    let tau_value = tau.unwrap_or(0.0);
    for eta in eta_schedule() {
        let limits_ok = [Region::Ball, Region::Complement].iter().all(|&region| {
            appendix_exponents(params, region, eta, tau_value, 0.0).limits_min()
                >= FEASIBILITY_MARGIN
        });
        if !limits_ok {
            continue;
        }
        for eps in eps_schedule() {
            let ball = appendix_exponents(params, Region::Ball, eta, tau_value, eps);
            let complement = appendix_exponents(params, Region::Complement, eta, tau_value, eps);
            if ball.finite_min() >= FEASIBILITY_MARGIN
                && complement.finite_min() >= FEASIBILITY_MARGIN
            {
                return Ok(FeasibilityReport {
                    feasible: true,
                    eta: Some(eta),
                    epsilon: Some(eps),
                    tau,
                    ball: Some(ball),
                    complement: Some(complement),
                    ..FeasibilityReport::infeasible()
                });
            }
        }
    }
    Ok(FeasibilityReport {
        tau,
        ..FeasibilityReport::infeasible()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(n: u32, b: f64, a: f64) -> PhysParams {
        PhysParams::new(n, b, a, Sign::Focusing).unwrap()
    }

    #[test]
    fn bundle_for_cubic_2d() {
        let e = critical_exponents(&p(2, 0.5, 2.0)).unwrap();
        assert_relative_eq!(e.gamma_c, 0.25, epsilon = 1e-15);
        assert_relative_eq!(e.sigma_c.unwrap(), 3.0, epsilon = 1e-15);
        assert_relative_eq!(e.two_lower_star, 1.5, epsilon = 1e-15);
        assert!(e.two_star.is_infinite());
        assert_relative_eq!(e.gamma_b, 1.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(e.beta1, 0.4, epsilon = 1e-15);
        assert_relative_eq!(e.beta2, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn bundle_for_3d() {
        let e = critical_exponents(&p(3, 1.0, 1.5)).unwrap();
        assert_relative_eq!(e.gamma_c, 5.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(e.sigma_c.unwrap(), 0.2, epsilon = 1e-15);
        assert_relative_eq!(e.beta1, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(e.beta2, 0.5, epsilon = 1e-15);
        assert_eq!(e.two_star, Exponent::Finite(2.0));
    }

    #[test]
    fn mass_critical_has_no_sigma() {
        let e = critical_exponents(&p(2, 0.5, 1.5)).unwrap();
        assert_eq!(e.gamma_c, 0.0);
        assert!(e.sigma_c.is_none());
        assert_eq!(sigma_gamma_identity(&p(2, 0.5, 1.5)), None);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(PhysParams::new(2, 0.0, 2.0, Sign::Focusing).is_err());
        assert!(PhysParams::new(2, 2.0, 2.0, Sign::Focusing).is_err());
        assert!(PhysParams::new(1, 0.5, 2.0, Sign::Focusing).is_err());
        assert!(PhysParams::new(3, 0.5, -1.0, Sign::Focusing).is_err());
        assert!(PhysParams::new(3, f64::NAN, 1.0, Sign::Focusing).is_err());
        assert!(PhysParams::homogeneous(2, 2.0, Sign::Focusing).is_ok());
    }

    #[test]
    fn regime_examples() {
        assert_eq!(
            classify_regime(&p(2, 0.5, 2.0)).unwrap(),
            Regime::ScatteringScope2d
        );
        assert_eq!(
            classify_regime(&p(3, 1.3, 0.5)).unwrap(),
            Regime::OutOfScope
        );
        assert_eq!(
            classify_regime(&p(4, 1.0, 0.8)).unwrap(),
            Regime::ScatteringScopeAppendix
        );
        assert_eq!(
            classify_regime(&p(2, 0.5, 1.5)).unwrap(),
            Regime::MassCritical
        );
        assert_eq!(
            classify_regime(&p(2, 0.5, 1.0)).unwrap(),
            Regime::MassSubcritical
        );
        assert_eq!(
            classify_regime(&p(2, 1.5, 2.0)).unwrap(),
            Regime::OutOfScope
        );
        assert_eq!(
            classify_regime(&p(3, 0.5, 1.8)).unwrap(),
            Regime::ScatteringScopeAppendix
        );
        assert_eq!(
            classify_regime(&p(3, 0.5, 2.5)).unwrap(),
            Regime::IntercriticalOnly
        );
        assert_eq!(
            classify_regime(&p(3, 0.5, 3.5)).unwrap(),
            Regime::OutOfScope
        );
        assert_eq!(
            classify_regime(&p(4, 1.0, 1.0)).unwrap(),
            Regime::OutOfScope
        );
    }

    #[test]
    fn admissible_pairs() {
        use Exponent::*;
        assert!(is_admissible_pair(Infinite, Finite(2.0), 2).unwrap());
        assert!(!is_admissible_pair(Finite(2.0), Infinite, 2).unwrap());
        assert!(is_admissible_pair(Finite(4.0), Finite(4.0), 2).unwrap());
        assert!(is_admissible_pair(Finite(2.0), Finite(6.0), 3).unwrap());
        assert!(!is_admissible_pair(Finite(3.0), Finite(3.0), 2).unwrap());
        assert!(is_admissible_pair(Finite(1.5), Finite(4.0), 2).is_err());
        assert!(is_admissible_pair(Finite(4.0), Finite(1.0), 2).is_err());
    }

    #[test]
    fn theta_limit_hand_values() {
        let t = lemma31_theta_limit(0.5, 2.0, 0.05);
        assert_relative_eq!(t, 0.815625, epsilon = 1e-15);
        assert_relative_eq!(2.0 * t, 1.63125, epsilon = 1e-14);
        let t = lemma31_theta_limit(0.9, 1.2, 0.01);
        assert_relative_eq!(1.2 * t, 1.11725, epsilon = 1e-14);
        assert_relative_eq!(t, 1.11725 / 1.2, epsilon = 1e-14);
        assert!((t - 0.93104).abs() < 1e-5);
        // the finite-eps expression tends to the limit
        assert_relative_eq!(
            lemma31_theta(0.5, 2.0, 0.05, 1e-12),
            0.815625,
            epsilon = 1e-10
        );
    }

    #[test]
    fn lemma31_report() {
        let r = lemma31_feasible(0.5, 2.0).unwrap();
        assert!(r.feasible);
        let theta = r.theta.unwrap();
        assert!(theta > 0.0 && theta < 1.0 && 2.0 * theta > 1.0);
        assert_eq!(r.eta, Some(0.1));
        // ratio is (2-b-η)/4 < 1/2 in the limit; it is only reported
        assert!(r.ratio.unwrap() < 0.5);
        assert!(!lemma31_feasible(0.5, 1.5).unwrap().feasible);
        assert!(!lemma31_feasible(1.2, 2.0).unwrap().feasible);
        assert!(lemma31_feasible(-0.5, 2.0).is_err());
    }

    #[test]
    fn appendix_limits_hand_values() {
        let params = p(3, 1.0, 0.9);
        let ball = appendix_exponents(&params, Region::Ball, 0.0, 0.0, 0.0);
        assert_relative_eq!(ball.a2, 0.05, epsilon = 1e-14);
        assert_relative_eq!(ball.b2, 0.85, epsilon = 1e-14);
        // printed limit forms for the first pair
        assert_relative_eq!(ball.a1, (4.0 - 2.0 - 0.9) / 2.0, epsilon = 1e-14);
        assert_relative_eq!(ball.b1, (2.7 - 4.0 + 2.0) / 2.0, epsilon = 1e-14);
        assert!(appendix_feasible(&params).unwrap().feasible);

        let params = p(4, 1.0, 0.8);
        let ball = appendix_exponents(&params, Region::Ball, 0.1, 0.0, 0.0);
        assert_relative_eq!(ball.a1, 0.1, epsilon = 1e-14);
        let r = appendix_feasible(&params).unwrap();
        assert!(r.feasible);
        assert!(r.tau.is_none());

        assert!(matches!(
            appendix_feasible(&p(3, 1.3, 0.5)),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn appendix_exponents_decrease_in_eps() {
        let params = p(3, 0.6, 1.2);
        let tau = appendix_tau(&params).unwrap();
        for region in [Region::Ball, Region::Complement] {
            let mut prev = appendix_exponents(&params, region, 0.01, tau, 0.0);
            for k in 1..20 {
                let e = 1e-3 * k as f64;
                let cur = appendix_exponents(&params, region, 0.01, tau, e);
                assert!(cur.a1_eps <= prev.a1_eps + 1e-15);
                assert!(cur.b1_eps <= prev.b1_eps + 1e-15);
                assert!(cur.a2_eps <= prev.a2_eps + 1e-15);
                assert!(cur.b2_eps <= prev.b2_eps + 1e-15);
                prev = cur;
            }
        }
    }
}
