//! On-trajectory checks: virial identity, threshold persistence and
//! coercivity, Morawetz growth, the scattering Cauchy criterion, the
//! pigeonhole decomposition times and the three-dimensional interaction
//! Morawetz quantity.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{free_propagate, Observer, Outcome, Record, Trajectory};
use crate::exponents::{exponents_unchecked, PhysParams, Sign};
use crate::field::RadialField;
use crate::groundstate::GroundStateProfile;
use crate::weight::{make_cutoff_chi, make_weight_phi, Cutoff, VirialWeight};

/// `M_φ = 2 ∫ ∇φ · Im(ū ∇u)` with centered differences for `∂_r u`.
pub fn virial_moment(u: &RadialField, w: &VirialWeight) -> Result<f64> {
    u.grid.check_same(&w.grid)?;
    let du = u.radial_derivative();
    Ok(2.0
        * u.grid
            .volume_weights()
            .iter()
            .zip(&w.d1)
            .zip(u.values.iter().zip(&du))
            .map(|((m, d1), (z, dz))| m * d1 * (z.conj() * dz).im)
            .sum::<f64>())
}

/// Right side of the virial identity,
/// `-∫Δ²φ|u|² + 4∫φ''|∂_r u|² + κ 2α/(α+2) ∫|x|^{-b}Δφ|u|^{α+2}
///  + κ 4b/(α+2) ∫|x|^{-b-2}(x·∇φ)|u|^{α+2}`.
pub fn virial_rhs(u: &RadialField, w: &VirialWeight, params: &PhysParams) -> Result<f64> {
    virial_rhs_with_kappa(u, w, params, params.kappa())
}

pub(crate) fn virial_rhs_with_kappa(
    u: &RadialField,
    w: &VirialWeight,
    params: &PhysParams,
    kappa: f64,
) -> Result<f64> {
    u.grid.check_same(&w.grid)?;
    let grid = &u.grid;
    let alpha = params.alpha;
    let mass_w = grid.volume_weights();
    let bilap: f64 = mass_w
        .iter()
        .zip(&w.bilaplacian)
        .zip(&u.values)
        .map(|((m, d), z)| m * d * z.norm_sqr())
        .sum();
    let grad: f64 = grid
        .face_weights()
        .iter()
        .zip(&w.d2_faces)
        .zip(u.face_differences())
        .map(|((f, d2), d)| f * d2 * d.norm_sqr())
        .sum();
    let mut nonlinear = 0.0;
    if kappa != 0.0 {
        let pw = grid.power_weights(grid.n as f64 - 1.0 - params.b);
        let c_lap = 2.0 * alpha / (alpha + 2.0);
        let c_rad = 4.0 * params.b / (alpha + 2.0);
        for j in 0..grid.points {
            let r = grid.node(j);
            let density = u.values[j].norm().powf(alpha + 2.0);
            nonlinear += pw[j] * density * (c_lap * w.laplacian[j] + c_rad * w.d1[j] / r);
        }
    }
    Ok(-bilap + 4.0 * grad + kappa * nonlinear)
}

/// Norms of `χ_R u` recorded at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Truncated {
    pub scale: f64,
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub t: f64,
    /// `(M_φ, RHS)` for each virial scale.
    pub virial: Vec<(f64, f64)>,
    pub truncated: Vec<Truncated>,
}

/// Observer collecting virial and cutoff data at every record.
pub struct Probe {
    params: PhysParams,
    kappa: f64,
    pub weights: Vec<VirialWeight>,
    pub cutoffs: Vec<Cutoff>,
    pub rows: Vec<ProbeRow>,
}

impl Probe {
    /// Scales below `4h` are skipped.
    pub fn new(
        params: &PhysParams,
        grid: &crate::field::RadialGrid,
        virial_scales: &[f64],
        cutoff_scales: &[f64],
        kappa: f64,
    ) -> Result<Self> {
        let weights = virial_scales
            .iter()
            .filter(|&&r| r >= 4.0 * grid.h)
            .map(|&r| make_weight_phi(r, grid))
            .collect::<Result<Vec<_>>>()?;
        let cutoffs = cutoff_scales
            .iter()
            .filter(|&&r| r >= 4.0 * grid.h)
            .map(|&r| make_cutoff_chi(r, grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Probe {
            params: *params,
            kappa,
            weights,
            cutoffs,
            rows: Vec::new(),
        })
    }

    pub fn virial_scales(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.scale).collect()
    }
}

impl Observer for Probe {
    fn observe(&mut self, record: &Record, u: &RadialField) {
        let virial = self
            .weights
            .iter()
            .map(|w| {
                let m = virial_moment(u, w).unwrap_or(f64::NAN);
                let rhs = virial_rhs_with_kappa(u, w, &self.params, self.kappa).unwrap_or(f64::NAN);
                (m, rhs)
            })
            .collect();
        let truncated = self
            .cutoffs
            .iter()
            .map(|c| {
                let v = u.multiplied(&c.chi);
                Truncated {
                    scale: c.scale,
                    mass: v.mass(),
                    kinetic: v.kinetic(),
                    potential: v.potential(self.params.b, self.params.alpha),
                }
            })
            .collect();
        self.rows.push(ProbeRow {
            t: record.t,
            virial,
            truncated,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VirialReport {
    pub scale: f64,
    /// `max |ΔM/Δt - RHS|` over interior records with equal spacing.
    pub max_residual: f64,
    pub rms_residual: f64,
    /// `max |RHS|`, for scale.
    pub max_rhs: f64,
    pub samples: usize,
}

/// Centered-difference consistency of the recorded `M_φ` series against the
/// recorded right side, for virial scale index `k`.
pub fn virial_consistency(probe: &Probe, k: usize) -> Result<VirialReport> {
    let scale = probe
        .weights
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("no virial scale with index {k}")))?
        .scale;
    let rows = &probe.rows;
    let mut max_residual: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut samples = 0;
    let mut max_rhs: f64 = 0.0;
    for i in 1..rows.len().saturating_sub(1) {
        let (t0, t1, t2) = (rows[i - 1].t, rows[i].t, rows[i + 1].t);
        let (l, r) = (t1 - t0, t2 - t1);
        if (l - r).abs() > 1e-9 * l {
            continue;
        }
        let derivative = (rows[i + 1].virial[k].0 - rows[i - 1].virial[k].0) / (t2 - t0);
        let rhs = rows[i].virial[k].1;
        let res = (derivative - rhs).abs();
        max_residual = max_residual.max(res);
        max_rhs = max_rhs.max(rhs.abs());
        sum_sq += res * res;
        samples += 1;
    }
    if samples == 0 {
        return Err(Error::InsufficientData(
            "virial consistency needs three equally spaced records".into(),
        ));
    }
    Ok(VirialReport {
        scale,
        max_residual,
        rms_residual: (sum_sq / samples as f64).sqrt(),
        max_rhs,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedReport {
    pub scale: f64,
    /// `min_t (1 - ‖∇(χ_R u)‖‖χ_R u‖^{σ_c} / (‖∇Q‖‖Q‖^{σ_c}))`.
    pub truncated_margin: f64,
    /// `min_t (‖∇(χ_R u)‖² - (Nα+2b)/(2(α+2)) P(χ_R u)) / P(χ_R u)`.
    pub delta_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub below_energy: bool,
    pub below_gradient: bool,
    /// `E(u0)M(u0)^{σ_c} / (E(Q)M(Q)^{σ_c})`.
    pub energy_ratio: f64,
    /// `‖∇u0‖‖u0‖^{σ_c} / (‖∇Q‖‖Q‖^{σ_c})`.
    pub gradient_ratio: f64,
    /// Largest gradient ratio over all records.
    pub max_gradient_ratio: f64,
    /// The gradient ratio stayed strictly below 1 at every record.
    pub persists: bool,
    /// Largest `ρ` with every ratio `≤ 1 - 2ρ`, clamped to `[0, 1/2]`.
    pub min_margin: f64,
    pub truncated: Vec<TruncatedReport>,
    /// Per-record gradient ratios, aligned with the trajectory records.
    #[serde(skip)]
    pub gradient_series: Vec<f64>,
}

/// Relative slack used by the strict threshold comparisons, so that data
/// equal to `Q` up to rounding counts as at-threshold.
pub const THRESHOLD_TOL: f64 = 1e-9;

pub fn gradient_product(mass: f64, kinetic: f64, sigma_c: f64) -> f64 {
    kinetic.sqrt() * mass.sqrt().powf(sigma_c)
}

pub fn threshold_monitor(
    traj: &Trajectory,
    probe: Option<&Probe>,
    profile: &GroundStateProfile,
) -> Result<ThresholdReport> {
    if traj.params.sign != Sign::Focusing {
        return Err(Error::InvalidArgument(
            "threshold monitor applies to focusing trajectories only".into(),
        ));
    }
    let p = &traj.params;
    if profile.params.n != p.n || profile.params.b != p.b || profile.params.alpha != p.alpha {
        return Err(Error::InvalidArgument(
            "ground state parameters do not match the trajectory".into(),
        ));
    }
    let sigma = exponents_unchecked(p).sigma_c.ok_or_else(|| {
        Error::InvalidArgument("threshold is undefined in the mass-critical case".into())
    })?;
    let thr_e = profile.threshold_energy.unwrap_or(f64::NAN);
    let thr_g = profile.threshold_gradient.unwrap_or(f64::NAN);
    let first = traj
        .records
        .first()
        .ok_or_else(|| Error::InsufficientData("trajectory has no records".into()))?;
    let f0 = first.functionals;
    let energy_ratio = f0.energy * f0.mass.powf(sigma) / thr_e;
    let gradient_series: Vec<f64> = traj
        .records
        .iter()
        .map(|r| gradient_product(r.functionals.mass, r.functionals.kinetic, sigma) / thr_g)
        .collect();
    let gradient_ratio = gradient_series[0];
    let max_gradient_ratio = gradient_series
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let strict = 1.0 - THRESHOLD_TOL;
    let c = (p.dim() * p.alpha + 2.0 * p.b) / (2.0 * (p.alpha + 2.0));
    let truncated = match probe {
        None => Vec::new(),
        Some(probe) => (0..probe.cutoffs.len())
            .map(|k| {
                let mut margin = f64::INFINITY;
                let mut delta = f64::INFINITY;
                for row in &probe.rows {
                    let tr = row.truncated[k];
                    margin = margin.min(1.0 - gradient_product(tr.mass, tr.kinetic, sigma) / thr_g);
                    if tr.potential > 0.0 {
                        delta = delta.min((tr.kinetic - c * tr.potential) / tr.potential);
                    }
                }
                TruncatedReport {
                    scale: probe.cutoffs[k].scale,
                    truncated_margin: margin,
                    delta_hat: delta,
                }
            })
            .collect(),
    };
    Ok(ThresholdReport {
        below_energy: energy_ratio < strict,
        below_gradient: gradient_ratio < strict,
        energy_ratio,
        gradient_ratio,
        max_gradient_ratio,
        persists: gradient_series.iter().all(|&g| g < strict),
        min_margin: ((1.0 - max_gradient_ratio) / 2.0).clamp(0.0, 0.5),
        truncated,
        gradient_series,
    })
}

/// Running trapezoid integrals `(A, B)` of the potential and of
/// `‖u‖^{α+2+b/(N-1)}_{L^{α+2+b/(N-1)}}` at each record time.
pub fn morawetz_accumulators(records: &[Record]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(records.len());
    let (mut a, mut b) = (0.0, 0.0);
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            let prev = &records[i - 1];
            let dt = r.t - prev.t;
            a += 0.5 * dt * (r.functionals.potential + prev.functionals.potential);
            b += 0.5 * dt * (r.functionals.l_scatter_power + prev.functionals.l_scatter_power);
        }
        out.push((a, b));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorawetzReport {
    pub horizon: f64,
    pub a_final: f64,
    pub b_final: f64,
    pub fitted_exponent_a: f64,
    pub fitted_exponent_b: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// `fitted_exponent_a ≤ β₁ + 0.1`.
    pub a_within: bool,
    /// `fitted_exponent_b ≤ β₂ + 0.1`.
    pub b_within: bool,
    pub fit_points: usize,
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fits `log A`, `log B` against `log T` over the upper half of the log-time
/// range up to `horizon` (the trajectory end when `None`).
pub fn morawetz_report(traj: &Trajectory, horizon: Option<f64>) -> Result<MorawetzReport> {
    let horizon = horizon.unwrap_or_else(|| traj.final_time());
    let acc = morawetz_accumulators(&traj.records);
    let points: Vec<(f64, f64, f64)> = traj
        .records
        .iter()
        .zip(&acc)
        .filter(|(r, _)| r.t > 0.0 && r.t <= horizon * (1.0 + 1e-12))
        .map(|(r, &(a, b))| (r.t, a, b))
        .collect();
    let first = points
        .first()
        .ok_or_else(|| Error::InsufficientData("no records inside the horizon".into()))?;
    let last = points.last().unwrap();
    let cut = 0.5 * (first.0.ln() + last.0.ln());
    let upper: Vec<&(f64, f64, f64)> = points
        .iter()
        .filter(|(t, a, b)| t.ln() >= cut && *a > 0.0 && *b > 0.0)
        .collect();
    if upper.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "Morawetz fit needs at least 10 records in the upper half of the log-time range, got {}",
            upper.len()
        )));
    }
    let xs: Vec<f64> = upper.iter().map(|p| p.0.ln()).collect();
    let ya: Vec<f64> = upper.iter().map(|p| p.1.ln()).collect();
    let yb: Vec<f64> = upper.iter().map(|p| p.2.ln()).collect();
    let ex = exponents_unchecked(&traj.params);
    let fa = ls_slope(&xs, &ya);
    let fb = ls_slope(&xs, &yb);
    Ok(MorawetzReport {
        horizon: last.0,
        a_final: last.1,
        b_final: last.2,
        fitted_exponent_a: fa,
        fitted_exponent_b: fb,
        beta1: ex.beta1,
        beta2: ex.beta2,
        a_within: fa <= ex.beta1 + 0.1,
        b_within: fb <= ex.beta2 + 0.1,
        fit_points: upper.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Scattered,
    BlewUp,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Scattered => "scattered",
            Verdict::BlewUp => "blew_up",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatteringReport {
    pub ladder_times: Vec<f64>,
    /// `‖e^{-it_{k+1}Δ}u(t_{k+1}) - e^{-it_kΔ}u(t_k)‖_{H¹}`.
    pub cauchy_deltas: Vec<f64>,
    pub final_delta: Option<f64>,
    pub h1_initial: f64,
    /// `‖u(t_k)‖_{L^{α+2+b}}` on the ladder.
    pub scatter_norm_decay: Vec<f64>,
    pub tail_non_increasing: bool,
    pub verdict: Verdict,
    pub tol: f64,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
}

/// Deltas within this multiple of `‖u0‖_{H¹}` count as equal, so rounding
/// noise in an exactly free run does not break monotonicity.
const DELTA_FLOOR: f64 = 1e-12;

/// Cauchy test for `e^{-itΔ}u(t)` on the ladder of non-initial snapshots.
/// A blown-up trajectory yields `blew_up` without further checks.
pub fn scattering_report(traj: &Trajectory, tol: f64) -> Result<ScatteringReport> {
    let u0 = traj
        .initial_field()
        .ok_or_else(|| Error::InsufficientData("trajectory has no t = 0 snapshot".into()))?;
    let h1_initial = u0.h1_norm();
    let ladder: Vec<_> = traj.snapshots.iter().filter(|s| s.step > 0).collect();
    let mut report = ScatteringReport {
        ladder_times: ladder.iter().map(|s| s.t).collect(),
        cauchy_deltas: Vec::new(),
        final_delta: None,
        h1_initial,
        scatter_norm_decay: Vec::new(),
        tail_non_increasing: false,
        verdict: Verdict::Undecided,
        tol,
        t0: None,
        t1: None,
    };
    match traj.outcome {
        Outcome::BlowupDetected => {
            report.verdict = Verdict::BlewUp;
            return Ok(report);
        }
        Outcome::NanAbort => return Ok(report),
        Outcome::Completed => {}
    }
    if ladder.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "scattering test needs at least 3 ladder snapshots, got {}",
            ladder.len()
        )));
    }
    let dt = traj.schedule.dt;
    let p = traj.params.alpha + 2.0 + traj.params.b;
    let mut pulled = Vec::with_capacity(ladder.len());
    for s in &ladder {
        report.scatter_norm_decay.push(s.field.lp(p));
        pulled.push(free_propagate(&s.field, -(s.step as f64) * dt, dt)?);
    }
    for k in 1..pulled.len() {
        report
            .cauchy_deltas
            .push(pulled[k].sub(&pulled[k - 1])?.h1_norm());
    }
    let d = &report.cauchy_deltas;
    let last = *d.last().unwrap();
    report.final_delta = Some(last);
    let floor = DELTA_FLOOR * h1_initial;
    report.tail_non_increasing =
        d.len() < 3 || d[d.len() - 3..].windows(2).all(|w| w[1] <= w[0] + floor);
    if d.len() >= 3 && report.tail_non_increasing && last < tol * h1_initial {
        report.verdict = Verdict::Scattered;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub t0: f64,
    pub t1: f64,
    pub window_length: f64,
    pub windows: usize,
    /// `∫_{t0}^{t1} ‖u‖^{α+2+b/(N-1)}` at the chosen window.
    pub window_integral: f64,
    pub mean_window_integral: f64,
}

/// Exact integral of the piecewise-linear interpolant of `(ts, ys)` over
/// `[a, b]`.
fn integrate_linear(ts: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    for i in 1..ts.len() {
        let (t0, t1) = (ts[i - 1], ts[i]);
        let lo = t0.max(a);
        let hi = t1.min(b);
        if hi <= lo {
            continue;
        }
        let slope = (ys[i] - ys[i - 1]) / (t1 - t0);
        let at = |t: f64| ys[i - 1] + slope * (t - t0);
        total += 0.5 * (hi - lo) * (at(lo) + at(hi));
    }
    total
}

/// Windows of length `εT^{1-β₂}` tiling `[T/4, T/2]` from the left; the one
/// with the smallest integral of `‖u‖^{α+2+b/(N-1)}` gives `t0`, and
/// `t1 = t0 + εT^{1-β₂}`. Ties go to the earliest window.
pub fn decomposition_times(
    traj: &Trajectory,
    eps: f64,
    t_horizon: f64,
) -> Result<DecompositionReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    if traj.final_time() < 0.5 * t_horizon * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(format!(
            "trajectory ends at {} before T/2 = {}",
            traj.final_time(),
            0.5 * t_horizon
        )));
    }
    let beta2 = exponents_unchecked(&traj.params).beta2;
    let length = eps * t_horizon.powf(1.0 - beta2);
    let windows = ((0.25 * t_horizon) / length * (1.0 + 1e-12)).floor() as usize;
    if windows < 4 {
        return Err(Error::InsufficientData(format!(
            "T = {t_horizon} leaves only {windows} windows of length {length} in [T/4, T/2]"
        )));
    }
    let ts: Vec<f64> = traj.records.iter().map(|r| r.t).collect();
    let ys: Vec<f64> = traj
        .records
        .iter()
        .map(|r| r.functionals.l_scatter_power)
        .collect();
    let start = 0.25 * t_horizon;
    let integrals: Vec<f64> = (0..windows)
        .map(|k| {
            let a = start + k as f64 * length;
            integrate_linear(&ts, &ys, a, a + length)
        })
        .collect();
    let mut best = 0;
    for (k, &v) in integrals.iter().enumerate() {
        if v < integrals[best] * (1.0 - 1e-12) {
            best = k;
        }
    }
    let t0 = start + best as f64 * length;
    Ok(DecompositionReport {
        t0,
        t1: t0 + length,
        window_length: length,
        windows,
        window_integral: integrals[best],
        mean_window_integral: integrals.iter().sum::<f64>() / windows as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InteractionReport {
    pub horizon: f64,
    /// `(∫₀^T ∫|u|⁴)^{1/4}`.
    pub lhs: f64,
    /// `(sup_t M)^{3/8} (sup_t K)^{1/8}`.
    pub rhs: f64,
    pub ratio: f64,
}

fn interaction_from_records(records: &[Record], horizon: f64) -> InteractionReport {
    let inside: Vec<&Record> = records
        .iter()
        .filter(|r| r.t <= horizon * (1.0 + 1e-12))
        .collect();
    let mut integral = 0.0;
    for w in inside.windows(2) {
        integral +=
            0.5 * (w[1].t - w[0].t) * (w[0].functionals.l4_power + w[1].functionals.l4_power);
    }
    let sup_m = inside
        .iter()
        .map(|r| r.functionals.mass)
        .fold(0.0, f64::max);
    let sup_k = inside
        .iter()
        .map(|r| r.functionals.kinetic)
        .fold(0.0, f64::max);
    let lhs = integral.powf(0.25);
    let rhs = sup_m.powf(3.0 / 8.0) * sup_k.powf(1.0 / 8.0);
    InteractionReport {
        horizon: inside.last().map(|r| r.t).unwrap_or(0.0),
        lhs,
        rhs,
        ratio: if lhs == 0.0 { 0.0 } else { lhs / rhs },
    }
}

/// The interaction Morawetz quantity over the whole trajectory (`N = 3`).
pub fn interaction_l4_check(traj: &Trajectory) -> Result<InteractionReport> {
    interaction_l4_at(traj, &[traj.final_time()]).map(|v| v[0])
}

/// The same quantity restricted to `[0, T]` for each `T` in `horizons`.
pub fn interaction_l4_at(traj: &Trajectory, horizons: &[f64]) -> Result<Vec<InteractionReport>> {
    if traj.params.n != 3 {
        return Err(Error::InvalidArgument(format!(
            "interaction Morawetz check is specialised to N = 3, got N = {}",
            traj.params.n
        )));
    }
    Ok(horizons
        .iter()
        .map(|&t| interaction_from_records(&traj.records, t))
        .collect())
}

/// `ρ ↦ u e^{icr²/2}`, used by the virial affinity check.
pub fn chirp(u: &RadialField, c: f64) -> RadialField {
    let values = u
        .grid
        .nodes()
        .zip(&u.values)
        .map(|(r, z)| z * Complex64::from_polar(1.0, 0.5 * c * r * r))
        .collect();
    RadialField {
        grid: u.grid,
        values,
    }
}
