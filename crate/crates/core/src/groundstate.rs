//! Ground state `Q` of `ΔQ - Q + |x|^{-b}|Q|^α Q = 0` by shooting on the
//! amplitude `Q(0)`, plus the quantities derived from it: Pohozaev residuals,
//! the sharp Gagliardo–Nirenberg constant, and the scattering thresholds.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{exponents_unchecked, PhysParams, Sign};
use crate::field::{fmt_num, Functionals, RadialField, RadialGrid};

/// Fixed-step shooting settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootingConfig {
    /// RK4 step in `r`.
    pub step: f64,
    /// Series start radius as a fraction of the shooting radius.
    pub start_fraction: f64,
    /// Outer radius of the shooting interval (capped by the grid radius).
    pub max_radius: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            step: 1e-4,
            start_fraction: 1e-4,
            max_radius: 30.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotOutcome {
    CrossesZero,
    Grows,
    Decays,
}

/// Two-term expansion of `Q` near the origin:
/// `Q(r) = a + a r²/(2N) - a^{α+1} r^{2-b}/((2-b)(N-b))`.
pub fn local_series(a: f64, r: f64, params: &PhysParams) -> Result<(f64, f64)> {
    if !(r > 0.0) || !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "local_series needs r > 0 and a > 0, got r = {r}, a = {a}"
        )));
    }
    Ok(series_unchecked(a, r, params))
}

fn series_unchecked(a: f64, r: f64, params: &PhysParams) -> (f64, f64) {
    let n = params.dim();
    let b = params.b;
    let forcing = a.powf(params.alpha + 1.0);
    let q = a + a * r * r / (2.0 * n) - forcing * r.powf(2.0 - b) / ((2.0 - b) * (n - b));
    let dq = a * r / n - forcing * r.powf(1.0 - b) / (n - b);
    (q, dq)
}

/// Frobenius-type expansion `Q = Σ c_{k,m} x^k y^m` with `x = r^{2-b}`,
/// `y = r²`, truncated at total degree `k + m ≤ DEGREE`. Substituting into
/// the radial equation gives, for `p = k(2-b) + 2m`,
/// `p(p+N-2) c_{k,m} = [Q]_{k,m-1} - [Q^{α+1}]_{k-1,m}`.
/// Used for the shooting start; the two-term truncation leaves an `O(r^{3-2b})`
/// error in `Q'` that excites the singular homogeneous solution.
#[derive(Clone, Debug)]
struct StartSeries {
    coeffs: Vec<Vec<f64>>,
    b: f64,
}

const DEGREE: usize = 6;

/// Truncated product of bivariate coefficient tables.
fn bivariate_mul(p: &[Vec<f64>], q: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; DEGREE + 1]; DEGREE + 1];
    for k1 in 0..=DEGREE {
        for m1 in 0..=DEGREE - k1 {
            if p[k1][m1] == 0.0 {
                continue;
            }
            for k2 in 0..=DEGREE - k1 - m1 {
                for m2 in 0..=DEGREE - k1 - m1 - k2 {
                    out[k1 + k2][m1 + m2] += p[k1][m1] * q[k2][m2];
                }
            }
        }
    }
    out
}

impl StartSeries {
    fn new(a: f64, params: &PhysParams) -> Self {
        let n = params.dim();
        let b = params.b;
        let alpha = params.alpha;
        let mut c = vec![vec![0.0; DEGREE + 1]; DEGREE + 1];
        c[0][0] = a;
        for degree in 1..=DEGREE {
            // Q^{α+1} = a^{α+1} Σ_j binom(α+1, j) z^j with z = (Q - a)/a,
            // exact through total degree `degree - 1`
            let mut z = c.clone();
            z[0][0] = 0.0;
            for row in z.iter_mut() {
                for v in row.iter_mut() {
                    *v /= a;
                }
            }
            let mut power = vec![vec![0.0; DEGREE + 1]; DEGREE + 1];
            power[0][0] = 1.0;
            let mut total = power.clone();
            let mut binom = 1.0;
            for j in 1..degree {
                power = bivariate_mul(&power, &z);
                binom *= (alpha + 2.0 - j as f64) / j as f64;
                for (trow, prow) in total.iter_mut().zip(&power) {
                    for (t, p) in trow.iter_mut().zip(prow) {
                        *t += binom * p;
                    }
                }
            }
            let scale = a.powf(alpha + 1.0);
            for k in 0..=degree {
                let m = degree - k;
                let p = k as f64 * (2.0 - b) + 2.0 * m as f64;
                let from_q = if m > 0 { c[k][m - 1] } else { 0.0 };
                let from_nl = if k > 0 { scale * total[k - 1][m] } else { 0.0 };
                c[k][m] = (from_q - from_nl) / (p * (p + n - 2.0));
            }
        }
        StartSeries { coeffs: c, b }
    }

    fn eval(&self, r: f64) -> (f64, f64) {
        let (mut q, mut dq) = (0.0, 0.0);
        for (k, row) in self.coeffs.iter().enumerate() {
            for (m, c) in row.iter().enumerate() {
                if *c == 0.0 {
                    continue;
                }
                let p = k as f64 * (2.0 - self.b) + 2.0 * m as f64;
                let term = c * r.powf(p);
                q += term;
                dq += if p == 0.0 { 0.0 } else { p * term / r };
            }
        }
        (q, dq)
    }
}

struct Rhs {
    n_minus_1: f64,
    b: f64,
    alpha: f64,
}

impl Rhs {
    fn new(params: &PhysParams) -> Self {
        Rhs {
            n_minus_1: params.dim() - 1.0,
            b: params.b,
            alpha: params.alpha,
        }
    }

    #[inline]
    fn eval(&self, r: f64, q: f64, p: f64) -> (f64, f64) {
        let weight = if self.b == 0.0 { 1.0 } else { r.powf(-self.b) };
        let nonlinear = weight * q.abs().powf(self.alpha) * q;
        (p, q - nonlinear - self.n_minus_1 * p / r)
    }

    #[inline]
    fn rk4(&self, r: f64, q: f64, p: f64, h: f64) -> (f64, f64) {
        let (k1q, k1p) = self.eval(r, q, p);
        let (k2q, k2p) = self.eval(r + 0.5 * h, q + 0.5 * h * k1q, p + 0.5 * h * k1p);
        let (k3q, k3p) = self.eval(r + 0.5 * h, q + 0.5 * h * k2q, p + 0.5 * h * k2p);
        let (k4q, k4p) = self.eval(r + h, q + h * k3q, p + h * k3p);
        (
            q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
            p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        )
    }
}

/// A recorded shot: `Q` and `Q'` at `r_0 + i·step`.
struct Shot {
    outcome: ShotOutcome,
    r0: f64,
    step: f64,
    q: Vec<f64>,
    p: Vec<f64>,
}

fn integrate(a: f64, params: &PhysParams, r_max: f64, step: f64, record: bool) -> Shot {
    let rhs = Rhs::new(params);
    let r0 = ShootingConfig::default().start_fraction * r_max;
    let (mut q, mut p) = StartSeries::new(a, params).eval(r0);
    let steps = ((r_max - r0) / step).ceil() as usize;
    let mut shot = Shot {
        outcome: ShotOutcome::Decays,
        r0,
        step,
        q: Vec::new(),
        p: Vec::new(),
    };
    if record {
        shot.q.reserve(steps + 1);
        shot.p.reserve(steps + 1);
        shot.q.push(q);
        shot.p.push(p);
    }
    for i in 0..steps {
        let r = r0 + i as f64 * step;
        let (nq, np) = rhs.rk4(r, q, p, step);
        q = nq;
        p = np;
        if !q.is_finite() || !p.is_finite() {
            shot.outcome = ShotOutcome::Grows;
            return shot;
        }
        if record {
            shot.q.push(q);
            shot.p.push(p);
        }
        if q <= 0.0 {
            shot.outcome = ShotOutcome::CrossesZero;
            return shot;
        }
        // a turning point before the first zero means the shot lies below the
        // ground state; for b > 0 such shots oscillate about r^{b/α} rather
        // than blowing up, so waiting for Q > 1.5a would misclassify them
        if p > 0.0 {
            shot.outcome = ShotOutcome::Grows;
            return shot;
        }
    }
    shot.outcome = if q.abs() < 1e-8 && (p + q).abs() < 1e-6 {
        ShotOutcome::Decays
    } else if p > 0.0 {
        ShotOutcome::Grows
    } else {
        ShotOutcome::Decays
    };
    shot
}

/// Integrates `Q'' + (N-1)Q'/r = Q - r^{-b}|Q|^α Q` outward from the series
/// start `r_0 = 10⁻⁴ r_max` and classifies the shot.
pub fn shoot(a: f64, params: &PhysParams, r_max: f64, step: f64) -> Result<ShotOutcome> {
    if !(a > 0.0) || !(r_max > 0.0) || !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "shoot needs positive amplitude, radius and step (a={a}, r_max={r_max}, step={step})"
        )));
    }
    Ok(integrate(a, params, r_max, step, false).outcome)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateProfile {
    pub params: PhysParams,
    pub amplitude: f64,
    pub grid: RadialGrid,
    pub tol: f64,
    pub samples: Vec<f64>,
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    /// `C_opt` evaluated directly from the three norms.
    pub c_opt: f64,
    pub threshold_energy: Option<f64>,
    pub threshold_gradient: Option<f64>,
    /// Radius past which the shot is replaced by the far-field decay.
    pub tail_radius: f64,
    /// Relative mismatch between the shot's log-derivative at `tail_radius`
    /// and that of `r^{-(N-1)/2} e^{-r}`.
    pub tail_mismatch: f64,
    /// Every classified amplitude was consistent with
    /// `grows < threshold < crosses_zero`.
    pub monotone: bool,
}

impl GroundStateProfile {
    pub fn field(&self) -> RadialField {
        RadialField {
            grid: self.grid,
            values: self
                .samples
                .iter()
                .map(|&q| Complex64::new(q, 0.0))
                .collect(),
        }
    }

    /// `c·Q` as a complex field.
    pub fn scaled_field(&self, c: f64) -> RadialField {
        self.field().scaled(Complex64::new(c, 0.0))
    }

    fn focusing_params(&self) -> PhysParams {
        self.params.with_sign(Sign::Focusing)
    }

    pub fn sigma_c(&self) -> Option<f64> {
        exponents_unchecked(&self.params).sigma_c
    }
}

pub fn solve_ground_state(
    params: &PhysParams,
    grid: &RadialGrid,
    tol: f64,
) -> Result<GroundStateProfile> {
    solve_ground_state_with(params, grid, tol, &ShootingConfig::default())
}

pub fn solve_ground_state_with(
    params: &PhysParams,
    grid: &RadialGrid,
    tol: f64,
    cfg: &ShootingConfig,
) -> Result<GroundStateProfile> {
    if params.n != grid.n {
        return Err(Error::GridMismatch(format!(
            "params have N = {}, grid has N = {}",
            params.n, grid.n
        )));
    }
    let two_star = exponents_unchecked(params).two_star;
    if !two_star.exceeds(params.alpha) {
        return Err(Error::OutOfScope(format!(
            "no ground state for alpha = {} >= 2* = {two_star}",
            params.alpha
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let r_max = cfg.max_radius.min(grid.r_max());
    let classify = |a: f64| integrate(a, params, r_max, cfg.step, false).outcome;

    let mut evaluated: Vec<(f64, ShotOutcome)> = Vec::new();
    let mut bracket = None;
    let mut prev: Option<(f64, ShotOutcome)> = None;
    for k in -10..=10 {
        let a = 2f64.powi(k);
        let o = classify(a);
        evaluated.push((a, o));
        if let Some((pa, po)) = prev {
            if po == ShotOutcome::Grows && o == ShotOutcome::CrossesZero {
                bracket = Some((pa, a));
                break;
            }
        }
        prev = Some((a, o));
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::GroundState(format!(
            "no grows/crosses_zero bracket for amplitudes in [2^-10, 2^10] at {params:?}"
        ))
    })?;

    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let o = classify(mid);
        evaluated.push((mid, o));
        match o {
            ShotOutcome::Grows => lo = mid,
            ShotOutcome::CrossesZero => hi = mid,
            ShotOutcome::Decays => {
                lo = mid;
                hi = mid;
            }
        }
    }
    let max_grows = evaluated
        .iter()
        .filter(|(_, o)| *o == ShotOutcome::Grows)
        .map(|(a, _)| *a)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_crosses = evaluated
        .iter()
        .filter(|(_, o)| *o == ShotOutcome::CrossesZero)
        .map(|(a, _)| *a)
        .fold(f64::INFINITY, f64::min);
    let monotone = max_grows < min_crosses;

    let lower = integrate(lo, params, r_max, cfg.step, true);
    let upper = integrate(hi, params, r_max, cfg.step, true);
    let amplitude = 0.5 * (lo + hi);
    let profile_shot = splice_shots(&lower, &upper);
    let (tail_index, tail_mismatch) = find_tail(&profile_shot, params);
    let tail_radius = profile_shot.r0 + tail_index as f64 * profile_shot.step;

    let n = params.dim();
    let q_tail = profile_shot.q[tail_index];
    let start = StartSeries::new(amplitude, params);
    let samples: Vec<f64> = grid
        .nodes()
        .map(|r| {
            if r < profile_shot.r0 {
                start.eval(r).0
            } else if r <= tail_radius {
                hermite_sample(&profile_shot, r)
            } else {
                q_tail * (r / tail_radius).powf(-(n - 1.0) / 2.0) * (-(r - tail_radius)).exp()
            }
        })
        .collect();

    let mut profile = GroundStateProfile {
        params: *params,
        amplitude,
        grid: *grid,
        tol,
        samples,
        mass: 0.0,
        kinetic: 0.0,
        potential: 0.0,
        c_opt: 0.0,
        threshold_energy: None,
        threshold_gradient: None,
        tail_radius,
        tail_mismatch,
        monotone,
    };
    let f = profile.field().functionals(&profile.focusing_params());
    fill_norms(&mut profile, &f);
    Ok(profile)
}

fn fill_norms(profile: &mut GroundStateProfile, f: &Functionals) {
    profile.mass = f.mass;
    profile.kinetic = f.kinetic;
    profile.potential = f.potential;
    profile.c_opt = gn_direct(&profile.params, f.mass, f.kinetic, f.potential);
    if let Some(sigma) = profile.sigma_c() {
        let e = f.kinetic / 2.0 - f.potential / (profile.params.alpha + 2.0);
        profile.threshold_energy = Some(e * f.mass.powf(sigma));
        profile.threshold_gradient = Some(f.kinetic.sqrt() * f.mass.sqrt().powf(sigma));
    }
}

/// Averages the two bracketing shots over their common range.
fn splice_shots(lower: &Shot, upper: &Shot) -> Shot {
    let len = lower.q.len().min(upper.q.len());
    Shot {
        outcome: ShotOutcome::Decays,
        r0: lower.r0,
        step: lower.step,
        q: (0..len).map(|i| 0.5 * (lower.q[i] + upper.q[i])).collect(),
        p: (0..len).map(|i| 0.5 * (lower.p[i] + upper.p[i])).collect(),
    }
    .with_separation(lower, upper)
}

impl Shot {
    /// Truncates the averaged shot where the bracketing shots separate by
    /// more than 10⁻⁶ relative, or where monotone decay is lost.
    fn with_separation(mut self, lower: &Shot, upper: &Shot) -> Shot {
        let mut end = self.q.len();
        for i in 1..self.q.len() {
            let q = self.q[i];
            let sep = (lower.q[i] - upper.q[i]).abs();
            if q <= 0.0 || self.p[i] >= 0.0 || sep > 1e-6 * q {
                end = i;
                break;
            }
        }
        let end = end.max(2);
        self.q.truncate(end);
        self.p.truncate(end);
        self
    }
}

/// Index at which the tail is attached and the log-derivative mismatch there.
fn find_tail(shot: &Shot, params: &PhysParams) -> (usize, f64) {
    let i = shot.q.len() - 1;
    let r = shot.r0 + i as f64 * shot.step;
    let observed = shot.p[i] / shot.q[i];
    let ansatz = -1.0 - (params.dim() - 1.0) / (2.0 * r);
    (i, ((observed - ansatz) / ansatz).abs())
}

/// Cubic Hermite interpolation of the recorded shot (values and slopes).
fn hermite_sample(shot: &Shot, r: f64) -> f64 {
    let x = (r - shot.r0) / shot.step;
    let last = shot.q.len() - 1;
    let i = (x.floor() as usize).min(last.saturating_sub(1));
    let t = x - i as f64;
    let h = shot.step;
    let (q0, q1) = (shot.q[i], shot.q[i + 1]);
    let (m0, m1) = (shot.p[i] * h, shot.p[i + 1] * h);
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * q0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * q1
        + (t3 - t2) * m1
}

fn gn_direct(params: &PhysParams, mass: f64, kinetic: f64, potential: f64) -> f64 {
    let n = params.dim();
    let mass_exp = params.pohozaev_numerator() / 4.0;
    let kin_exp = (n * params.alpha + 2.0 * params.b) / 4.0;
    potential / (mass.powf(mass_exp) * kinetic.powf(kin_exp))
}

/// Relative Pohozaev residuals `(res₁, res₂)`.
pub fn pohozaev_report(profile: &GroundStateProfile) -> (f64, f64) {
    let (c1, c2) = pohozaev_ratios(&profile.params);
    let m = profile.mass;
    (
        (m - c1 * profile.kinetic).abs() / m,
        (m - c2 * profile.potential).abs() / m,
    )
}

/// `c₁ = (4-2b-(N-2)α)/(Nα+2b)` and `c₂ = (4-2b-(N-2)α)/(2(α+2))`.
pub fn pohozaev_ratios(params: &PhysParams) -> (f64, f64) {
    let num = params.pohozaev_numerator();
    (
        num / (params.dim() * params.alpha + 2.0 * params.b),
        num / (2.0 * (params.alpha + 2.0)),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GnConstant {
    pub c_direct: f64,
    pub c_closed: f64,
    pub rel_diff: f64,
}

/// `C_opt` from the norms of `Q` and from the closed form
/// `2(α+2)/(Nα+2b) (‖∇Q‖ ‖Q‖^{σ_c})^{-(Nα-4+2b)/2}`.
pub fn gn_constant(profile: &GroundStateProfile) -> GnConstant {
    let p = &profile.params;
    let n = p.dim();
    let prefactor = 2.0 * (p.alpha + 2.0) / (n * p.alpha + 2.0 * p.b);
    let exponent = (n * p.alpha - 4.0 + 2.0 * p.b) / 2.0;
    let c_closed = match profile.sigma_c() {
        Some(sigma) => {
            let product = profile.kinetic.sqrt() * profile.mass.sqrt().powf(sigma);
            prefactor * product.powf(-exponent)
        }
        None => prefactor,
    };
    let c_direct = gn_direct(p, profile.mass, profile.kinetic, profile.potential);
    GnConstant {
        c_direct,
        c_closed,
        rel_diff: (c_direct - c_closed).abs() / c_closed,
    }
}

/// `(E(Q) M(Q)^{σ_c}, ‖∇Q‖ ‖Q‖^{σ_c})`; only meaningful for focusing
/// parameters outside the mass-critical case.
pub fn threshold_quantities(profile: &GroundStateProfile) -> Result<(f64, f64)> {
    if profile.params.sign != Sign::Focusing {
        return Err(Error::InvalidArgument(
            "threshold quantities are defined for the focusing equation only".into(),
        ));
    }
    match (profile.threshold_energy, profile.threshold_gradient) {
        (Some(e), Some(g)) => Ok((e, g)),
        _ => Err(Error::InvalidArgument(
            "threshold quantities are undefined in the mass-critical case".into(),
        )),
    }
}

/// Scalar fields of a profile, as stored in the JSON sidecar and the cache
/// header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    #[serde(rename = "N")]
    pub n: u32,
    pub b: f64,
    pub alpha: f64,
    pub points: usize,
    pub r_max: f64,
    pub tol: f64,
    pub amplitude: f64,
    #[serde(rename = "massQ")]
    pub mass: f64,
    #[serde(rename = "kineticQ")]
    pub kinetic: f64,
    #[serde(rename = "potentialQ")]
    pub potential: f64,
    pub c_opt: f64,
    pub c_closed: f64,
    pub gn_rel_diff: f64,
    pub pohozaev_res1: f64,
    pub pohozaev_res2: f64,
    pub threshold_energy: Option<f64>,
    pub threshold_gradient: Option<f64>,
    pub tail_radius: f64,
    pub tail_mismatch: f64,
    pub monotone: bool,
}

impl GroundStateProfile {
    pub fn summary(&self) -> GroundStateSummary {
        let gn = gn_constant(self);
        let (res1, res2) = pohozaev_report(self);
        GroundStateSummary {
            n: self.params.n,
            b: self.params.b,
            alpha: self.params.alpha,
            points: self.grid.points,
            r_max: self.grid.r_max(),
            tol: self.tol,
            amplitude: self.amplitude,
            mass: self.mass,
            kinetic: self.kinetic,
            potential: self.potential,
            c_opt: self.c_opt,
            c_closed: gn.c_closed,
            gn_rel_diff: gn.rel_diff,
            pohozaev_res1: res1,
            pohozaev_res2: res2,
            threshold_energy: self.threshold_energy,
            threshold_gradient: self.threshold_gradient,
            tail_radius: self.tail_radius,
            tail_mismatch: self.tail_mismatch,
            monotone: self.monotone,
        }
    }

    /// CSV with a `#` header line carrying the JSON summary, then `r,Q`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut out = String::with_capacity(self.samples.len() * 48);
        out.push_str("# ");
        out.push_str(&serde_json::to_string(&self.summary())?);
        out.push('\n');
        out.push_str("r,Q\n");
        for (r, q) in self.grid.nodes().zip(&self.samples) {
            out.push_str(&fmt_num(r));
            out.push(',');
            out.push_str(&fmt_num(*q));
            out.push('\n');
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R, params: &PhysParams) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let bad = |m: &str| Error::InvalidArgument(format!("ground state file: {m}"));
        let header = lines.next().ok_or_else(|| bad("empty file"))??;
        let json = header
            .strip_prefix('#')
            .ok_or_else(|| bad("missing '#' header"))?;
        let summary: GroundStateSummary = serde_json::from_str(json.trim())?;
        let grid = RadialGrid::new(summary.n, summary.points, summary.r_max)?;
        let mut samples = Vec::with_capacity(summary.points);
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with("r,") {
                continue;
            }
            let (_, q) = line
                .split_once(',')
                .ok_or_else(|| bad("expected 2 columns"))?;
            samples.push(q.trim().parse::<f64>().map_err(|_| bad("bad value"))?);
        }
        if samples.len() != grid.points {
            return Err(bad("sample count does not match header"));
        }
        Ok(GroundStateProfile {
            params: PhysParams {
                n: summary.n,
                b: summary.b,
                alpha: summary.alpha,
                sign: params.sign,
            },
            amplitude: summary.amplitude,
            grid,
            tol: summary.tol,
            samples,
            mass: summary.mass,
            kinetic: summary.kinetic,
            potential: summary.potential,
            c_opt: summary.c_opt,
            threshold_energy: summary.threshold_energy,
            threshold_gradient: summary.threshold_gradient,
            tail_radius: summary.tail_radius,
            tail_mismatch: summary.tail_mismatch,
            monotone: summary.monotone,
        })
    }
}

/// Directory of solved profiles, one file per `(N, b, α)`. A stored file is
/// reused only when its grid and tolerance match the request.
#[derive(Clone, Debug)]
pub struct GroundStateCache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicUsize = AtomicUsize::new(0);

impl GroundStateCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GroundStateCache { dir: dir.into() }
    }

    /// `INLS_CACHE_DIR`, or `./inls-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("INLS_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("inls-cache"));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(params: &PhysParams) -> String {
        format!("gs_N{}_b{}_alpha{}.csv", params.n, params.b, params.alpha)
    }

    pub fn path(&self, params: &PhysParams) -> PathBuf {
        self.dir.join(Self::file_name(params))
    }

    pub fn load(
        &self,
        params: &PhysParams,
        grid: &RadialGrid,
        tol: f64,
    ) -> Option<GroundStateProfile> {
        let file = fs::File::open(self.path(params)).ok()?;
        let profile = GroundStateProfile::read_csv(file, params).ok()?;
        let same = profile.grid == *grid
            && profile.tol == tol
            && profile.params.b == params.b
            && profile.params.alpha == params.alpha;
        same.then_some(profile)
    }

    pub fn store(&self, profile: &GroundStateProfile) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(&profile.params);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            Self::file_name(&profile.params),
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
            profile.write_csv(&mut f)?;
            f.flush()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(target)
    }

    pub fn load_or_solve(
        &self,
        params: &PhysParams,
        grid: &RadialGrid,
        tol: f64,
    ) -> Result<GroundStateProfile> {
        if let Some(p) = self.load(params, grid, tol) {
            return Ok(p);
        }
        let profile = solve_ground_state(params, grid, tol)?;
        self.store(&profile)?;
        Ok(profile)
    }
}
