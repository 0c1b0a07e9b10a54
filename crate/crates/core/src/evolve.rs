//! Strang splitting for `i u_t + Δu = κ|x|^{-b}|u|^α u` on the radial grid:
//! exact nonlinear phase rotation, Crank–Nicolson kinetic step, exact phase
//! rotation again.
//!
//! The nonlinear coefficient at node `j` is the cell average of `r^{-b}`
//! against `r^{N-1}`, i.e. the ratio of the potential and mass quadrature
//! weights. With that choice the semi-discrete flow is the Hamiltonian flow
//! of the discrete energy of module `field`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::PhysParams;
use crate::field::{Functionals, RadialField, RadialGrid};

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    /// Stop once `kinetic(u) > factor · kinetic(u0)`.
    pub blowup_gradient_factor: f64,
    /// Times at which full fields are kept, each at the first step at or
    /// after it.
    pub snapshot_times: Vec<f64>,
}

impl Schedule {
    pub fn new(dt: f64, t_final: f64, record_every: usize) -> Result<Self> {
        let s = Schedule {
            dt,
            t_final,
            record_every,
            blowup_gradient_factor: 100.0,
            snapshot_times: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument(
                "record_every must be at least 1".into(),
            ));
        }
        if !(self.blowup_gradient_factor > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "blowup_gradient_factor must exceed 1, got {}",
                self.blowup_gradient_factor
            )));
        }
        Ok(())
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    /// Total number of steps: `t_final / dt` rounded up, so the last
    /// recorded time is exactly `steps · dt ≥ t_final`.
    pub fn steps(&self) -> usize {
        self.step_at(self.t_final)
    }

    /// First step whose time is at least `t`, up to roundoff.
    fn step_at(&self, t: f64) -> usize {
        let ratio = t / self.dt;
        let rounded = ratio.round();
        if (ratio - rounded).abs() < 1e-9 * ratio.max(1.0) {
            rounded as usize
        } else {
            ratio.ceil() as usize
        }
    }

    fn snapshot_steps(&self) -> Vec<usize> {
        let last = self.steps();
        let mut steps: Vec<usize> = self
            .snapshot_times
            .iter()
            .filter(|t| **t >= 0.0)
            .map(|&t| self.step_at(t).min(last))
            .collect();
        steps.sort_unstable();
        steps.dedup();
        steps
    }
}

/// `0, 1, 2, 4, …` below `t_final`, then `t_final`.
pub fn dyadic_ladder(t_final: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    let mut t = 1.0;
    while t < t_final {
        times.push(t);
        t *= 2.0;
    }
    times.push(t_final);
    times
}

/// Which parts of the equation a run integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// The equation as written.
    #[default]
    Physical,
    /// Nonlinearity switched off (`κ = 0`): the free Schrödinger flow.
    Free,
    /// Kinetic step switched off: pure pointwise phase rotation.
    NonlinearOnly,
}

impl std::str::FromStr for Coupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "physical" => Ok(Coupling::Physical),
            "free" => Ok(Coupling::Free),
            "nonlinear_only" => Ok(Coupling::NonlinearOnly),
            other => Err(Error::InvalidArgument(format!(
                "unknown coupling '{other}'"
            ))),
        }
    }
}

impl Coupling {
    pub fn as_str(self) -> &'static str {
        match self {
            Coupling::Physical => "physical",
            Coupling::Free => "free",
            Coupling::NonlinearOnly => "nonlinear_only",
        }
    }
}

/// Crank–Nicolson solver for `(I - iτL_h) u' = (I + iτL_h) u` with the
/// elimination precomputed (the matrix does not change between steps).
#[derive(Clone, Debug)]
struct KineticSolver {
    /// `L_h u_j = lo_j u_{j-1} + di_j u_j + up_j u_{j+1}`.
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
    tau: f64,
    /// Modified super-diagonal and reciprocal pivots of the Thomas sweep.
    c_prime: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl KineticSolver {
    fn new(grid: &RadialGrid, dt: f64) -> Self {
        let j_max = grid.points;
        let h = grid.h;
        let k = grid.n as i32 - 1;
        // flux coefficients r_{j+1/2}^{N-1}; the one through r = 0 vanishes
        let flux: Vec<f64> = (0..j_max).map(|j| grid.face(j).powi(k)).collect();
        let mut lo = vec![0.0; j_max];
        let mut di = vec![0.0; j_max];
        let mut up = vec![0.0; j_max];
        for j in 0..j_max {
            let m = grid.node(j).powi(k) * h * h;
            let left = if j == 0 { 0.0 } else { flux[j - 1] };
            let right = flux[j];
            lo[j] = left / m;
            up[j] = if j + 1 < j_max { right / m } else { 0.0 };
            di[j] = -(left + right) / m;
        }
        let tau = 0.5 * dt;
        let i_tau = Complex64::new(0.0, tau);
        let mut c_prime = vec![Complex64::new(0.0, 0.0); j_max];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); j_max];
        for j in 0..j_max {
            let a = -i_tau * lo[j];
            let b = Complex64::new(1.0, 0.0) - i_tau * di[j];
            let c = -i_tau * up[j];
            let pivot = if j == 0 { b } else { b - a * c_prime[j - 1] };
            inv_pivot[j] = pivot.inv();
            c_prime[j] = c * inv_pivot[j];
        }
        KineticSolver {
            lo,
            di,
            up,
            tau,
            c_prime,
            inv_pivot,
            scratch: vec![Complex64::new(0.0, 0.0); j_max],
        }
    }

    fn apply(&mut self, u: &mut [Complex64]) {
        let j_max = u.len();
        let i_tau = Complex64::new(0.0, self.tau);
        let d = &mut self.scratch;
        for j in 0..j_max {
            let mut lu = self.di[j] * u[j];
            if j > 0 {
                lu += self.lo[j] * u[j - 1];
            }
            if j + 1 < j_max {
                lu += self.up[j] * u[j + 1];
            }
            d[j] = u[j] + i_tau * lu;
        }
        // forward sweep
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..j_max {
            let a = -i_tau * self.lo[j];
            let v = (d[j] - a * prev) * self.inv_pivot[j];
            d[j] = v;
            prev = v;
        }
        // back substitution
        u[j_max - 1] = d[j_max - 1];
        for j in (0..j_max - 1).rev() {
            u[j] = d[j] - self.c_prime[j] * u[j + 1];
        }
    }
}

/// One Strang step `N(dt/2) K(dt) N(dt/2)` with fixed `dt`.
#[derive(Clone, Debug)]
pub struct Stepper {
    pub params: PhysParams,
    pub grid: RadialGrid,
    pub coupling: Coupling,
    pub dt: f64,
    kinetic: KineticSolver,
    /// `κ V_j dt/2` with `V_j` the cell average of `r^{-b}`.
    phase_rate: Vec<f64>,
}

impl Stepper {
    pub fn new(
        params: &PhysParams,
        grid: &RadialGrid,
        coupling: Coupling,
        dt: f64,
    ) -> Result<Self> {
        if params.n != grid.n {
            return Err(Error::GridMismatch(format!(
                "params have N = {}, grid has N = {}",
                params.n, grid.n
            )));
        }
        if !dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dt must be finite, got {dt}"
            )));
        }
        let kappa = match coupling {
            Coupling::Free => 0.0,
            _ => params.kappa(),
        };
        let phase_rate = nonlinear_weights(grid, params.b)
            .into_iter()
            .map(|v| kappa * v * 0.5 * dt)
            .collect();
        Ok(Stepper {
            params: *params,
            grid: *grid,
            coupling,
            dt,
            kinetic: KineticSolver::new(grid, dt),
            phase_rate,
        })
    }

    fn half_nonlinear(&self, u: &mut [Complex64]) {
        if self.coupling == Coupling::Free {
            return;
        }
        let alpha = self.params.alpha;
        for (z, rate) in u.iter_mut().zip(&self.phase_rate) {
            let theta = -rate * z.norm().powf(alpha);
            *z *= Complex64::from_polar(1.0, theta);
        }
    }

    pub fn step(&mut self, u: &mut RadialField) {
        if self.dt == 0.0 {
            return;
        }
        self.half_nonlinear(&mut u.values);
        if self.coupling != Coupling::NonlinearOnly {
            self.kinetic.apply(&mut u.values);
        }
        self.half_nonlinear(&mut u.values);
    }
}

/// `V_j = ∫_{cell} r^{N-1-b} / (r_j^{N-1} h)`.
pub fn nonlinear_weights(grid: &RadialGrid, b: f64) -> Vec<f64> {
    if b == 0.0 {
        return vec![1.0; grid.points];
    }
    let s = grid.n as f64 - 1.0 - b;
    grid.power_weights(s)
        .into_iter()
        .zip(grid.volume_weights())
        .map(|(p, m)| p / m)
        .collect()
}

/// Single Strang step on a copy of `u`.
pub fn strang_step(u: &RadialField, dt: f64, params: &PhysParams) -> Result<RadialField> {
    strang_step_with(u, dt, params, Coupling::Physical)
}

pub fn strang_step_with(
    u: &RadialField,
    dt: f64,
    params: &PhysParams,
    coupling: Coupling,
) -> Result<RadialField> {
    let mut stepper = Stepper::new(params, &u.grid, coupling, dt)?;
    let mut v = u.clone();
    stepper.step(&mut v);
    if !v.is_finite() {
        return Err(Error::InvalidArgument("non-finite field after step".into()));
    }
    Ok(v)
}

/// Kinetic-only propagation `e^{itΔ}u` by `n` Crank–Nicolson steps of size
/// `t/n`, `n = ⌈|t|/dt⌉` (exactly `|t|/dt` when that is an integer).
pub fn free_propagate(u: &RadialField, t: f64, dt: f64) -> Result<RadialField> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if t == 0.0 {
        return Ok(u.clone());
    }
    let ratio = t.abs() / dt;
    let rounded = ratio.round();
    let n = if (ratio - rounded).abs() < 1e-9 * ratio.max(1.0) {
        rounded.max(1.0) as usize
    } else {
        ratio.ceil() as usize
    };
    let mut solver = KineticSolver::new(&u.grid, t / n as f64);
    let mut v = u.clone();
    for _ in 0..n {
        solver.apply(&mut v.values);
    }
    if !v.is_finite() {
        return Err(Error::InvalidArgument(
            "non-finite field in free propagation".into(),
        ));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Record {
    pub step: usize,
    pub t: f64,
    #[serde(flatten)]
    pub functionals: Functionals,
    /// Fraction of the mass in the outer tenth of the grid.
    pub boundary_mass_fraction: f64,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: RadialField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    BlowupDetected,
    NanAbort,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Completed => "completed",
            Outcome::BlowupDetected => "blowup_detected",
            Outcome::NanAbort => "nan_abort",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: PhysParams,
    pub schedule: Schedule,
    pub coupling: Coupling,
    pub grid: RadialGrid,
    pub records: Vec<Record>,
    pub snapshots: Vec<Snapshot>,
    pub outcome: Outcome,
    pub steps_taken: usize,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        self.steps_taken as f64 * self.schedule.dt
    }

    pub fn initial_field(&self) -> Option<&RadialField> {
        self.snapshots
            .first()
            .filter(|s| s.step == 0)
            .map(|s| &s.field)
    }
}

/// Receives every record together with the field it was computed from.
pub trait Observer {
    fn observe(&mut self, record: &Record, u: &RadialField);
}

/// Observer that ignores everything.
pub struct NoObserver;

impl Observer for NoObserver {
    fn observe(&mut self, _: &Record, _: &RadialField) {}
}

fn boundary_fraction(u: &RadialField, weights: &[f64], mass: f64) -> f64 {
    if mass == 0.0 {
        return 0.0;
    }
    let start = u.grid.points - u.grid.points / 10;
    let outer: f64 = weights[start..]
        .iter()
        .zip(&u.values[start..])
        .map(|(w, z)| w * z.norm_sqr())
        .sum();
    outer / mass
}

fn make_record(
    step: usize,
    t: f64,
    u: &RadialField,
    params: &PhysParams,
    weights: &[f64],
) -> Record {
    let functionals = u.functionals(params);
    Record {
        step,
        t,
        functionals,
        boundary_mass_fraction: boundary_fraction(u, weights, functionals.mass),
    }
}

/// Evolves `u0` to `t_final`, stopping early on blow-up (kinetic growth) or
/// non-finite values. Always records step 0 and the last step taken;
/// snapshots are kept at the schedule's times plus `t = 0` and the end.
pub fn evolve(
    u0: &RadialField,
    schedule: &Schedule,
    params: &PhysParams,
    coupling: Coupling,
    observer: &mut dyn Observer,
) -> Result<Trajectory> {
    schedule.validate()?;
    if !u0.is_finite() {
        return Err(Error::InvalidArgument(
            "initial field has non-finite values".into(),
        ));
    }
    let grid = u0.grid;
    let mut stepper = Stepper::new(params, &grid, coupling, schedule.dt)?;
    let weights = grid.volume_weights();
    let face_weights = grid.face_weights();
    let total = schedule.steps();
    let snapshot_steps = schedule.snapshot_steps();
    let mut next_snapshot = 0;

    let mut traj = Trajectory {
        params: *params,
        schedule: schedule.clone(),
        coupling,
        grid,
        records: Vec::with_capacity(total / schedule.record_every + 2),
        snapshots: Vec::new(),
        outcome: Outcome::Completed,
        steps_taken: 0,
    };
    let mut u = u0.clone();
    let first = make_record(0, 0.0, &u, params, &weights);
    let kinetic0 = first.functionals.kinetic;
    observer.observe(&first, &u);
    traj.records.push(first);
    traj.snapshots.push(Snapshot {
        step: 0,
        t: 0.0,
        field: u.clone(),
    });
    while next_snapshot < snapshot_steps.len() && snapshot_steps[next_snapshot] == 0 {
        next_snapshot += 1;
    }

    let blowup_level = schedule.blowup_gradient_factor * kinetic0;
    for step in 1..=total {
        stepper.step(&mut u);
        let t = step as f64 * schedule.dt;
        traj.steps_taken = step;
        if !u.is_finite() {
            traj.outcome = Outcome::NanAbort;
            break;
        }
        let kinetic: f64 = face_weights
            .iter()
            .zip(u.face_differences())
            .map(|(w, d)| w * d.norm_sqr())
            .sum();
        let blew_up = kinetic0 > 0.0 && kinetic > blowup_level;
        if !kinetic.is_finite() {
            traj.outcome = Outcome::NanAbort;
            break;
        }
        let is_last = step == total || blew_up;
        if step % schedule.record_every == 0 || is_last {
            let rec = make_record(step, t, &u, params, &weights);
            observer.observe(&rec, &u);
            traj.records.push(rec);
        }
        let mut snap = false;
        while next_snapshot < snapshot_steps.len() && snapshot_steps[next_snapshot] <= step {
            snap |= snapshot_steps[next_snapshot] == step;
            next_snapshot += 1;
        }
        if snap || is_last {
            traj.snapshots.push(Snapshot {
                step,
                t,
                field: u.clone(),
            });
        }
        if blew_up {
            traj.outcome = Outcome::BlowupDetected;
            break;
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Sign;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: RadialGrid, seed: u64) -> RadialField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = grid
            .nodes()
            .map(|r| {
                let env = (-r * r / 8.0).exp();
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * env
            })
            .collect();
        RadialField::new(grid, values).unwrap()
    }

    fn params() -> PhysParams {
        PhysParams::new(2, 0.5, 2.0, Sign::Focusing).unwrap()
    }

    #[test]
    fn zero_step_is_identity() {
        let g = RadialGrid::new(2, 128, 10.0).unwrap();
        let u = random_field(g, 1);
        assert_eq!(strang_step(&u, 0.0, &params()).unwrap(), u);
        assert_eq!(free_propagate(&u, 0.0, 0.01).unwrap(), u);
    }

    #[test]
    fn nonlinear_only_preserves_modulus() {
        let g = RadialGrid::new(2, 128, 10.0).unwrap();
        let u = random_field(g, 2);
        let v = strang_step_with(&u, 0.1, &params(), Coupling::NonlinearOnly).unwrap();
        for (a, b) in u.values.iter().zip(&v.values) {
            assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-14);
        }
        assert_ne!(u, v);
    }

    #[test]
    fn mass_is_conserved_by_one_step() {
        for n in [2, 3] {
            let g = RadialGrid::new(n, 300, 10.0).unwrap();
            let u = random_field(g, 3);
            let p = PhysParams::new(n, 0.5, 1.5, Sign::Defocusing).unwrap();
            let v = strang_step(&u, 0.05, &p).unwrap();
            assert_relative_eq!(v.mass(), u.mass(), max_relative = 1e-12);
        }
    }

    #[test]
    fn kinetic_operator_is_minus_discrete_dirichlet_form() {
        // <u, L u>_M = -K(u) for the mass inner product
        let g = RadialGrid::new(3, 64, 5.0).unwrap();
        let u = random_field(g, 4);
        let solver = KineticSolver::new(&g, 0.1);
        let w = g.volume_weights();
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 0..g.points {
            let mut lu = solver.di[j] * u.values[j];
            if j > 0 {
                lu += solver.lo[j] * u.values[j - 1];
            }
            if j + 1 < g.points {
                lu += solver.up[j] * u.values[j + 1];
            }
            inner += w[j] * u.values[j].conj() * lu;
        }
        assert_relative_eq!(inner.re, -u.kinetic(), max_relative = 1e-12);
        assert!(inner.im.abs() < 1e-12 * u.kinetic());
    }

    #[test]
    fn thomas_solve_matches_dense_solve() {
        // oracle: Gaussian elimination with partial pivoting on the full matrix
        let g = RadialGrid::new(2, 12, 3.0).unwrap();
        let u = random_field(g, 5);
        let dt = 0.3;
        let mut solver = KineticSolver::new(&g, dt);
        let mut fast = u.values.clone();
        solver.apply(&mut fast);
        let n = g.points;
        let it = Complex64::new(0.0, dt / 2.0);
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n];
        for j in 0..n {
            let mut rhs = u.values[j] * (1.0 + it * solver.di[j]);
            a[j][j] = 1.0 - it * solver.di[j];
            if j > 0 {
                a[j][j - 1] = -it * solver.lo[j];
                rhs += it * solver.lo[j] * u.values[j - 1];
            }
            if j + 1 < n {
                a[j][j + 1] = -it * solver.up[j];
                rhs += it * solver.up[j] * u.values[j + 1];
            }
            a[j][n] = rhs;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap();
            a.swap(col, piv);
            for row in 0..n {
                if row != col {
                    let f = a[row][col] / a[col][col];
                    for k in col..=n {
                        let v = a[col][k];
                        a[row][k] -= f * v;
                    }
                }
            }
        }
        for j in 0..n {
            let x = a[j][n] / a[j][j];
            assert!((x - fast[j]).norm() < 1e-12, "{j}");
        }
    }

    #[test]
    fn free_propagation_is_reversible_and_unitary() {
        let g = RadialGrid::new(2, 256, 15.0).unwrap();
        let u = random_field(g, 6);
        let v = free_propagate(&u, 1.5, 0.01).unwrap();
        assert_relative_eq!(v.mass(), u.mass(), max_relative = 1e-12);
        let w = free_propagate(&v, -1.5, 0.01).unwrap();
        let err = w.sub(&u).unwrap().mass().sqrt() / u.mass().sqrt();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn free_gaussian_central_amplitude() {
        // |e^{itΔ} e^{-r²/2}|(0) = (1 + 4t²)^{-1/2} in two dimensions
        let g = RadialGrid::new(2, 4000, 40.0).unwrap();
        let u = RadialField::from_real(g, |r| (-r * r / 2.0).exp());
        let v = free_propagate(&u, 1.0, 1e-3).unwrap();
        let centre = v.values[0].norm();
        assert!((centre - 5f64.powf(-0.5)).abs() < 1e-3, "{centre}");
    }

    #[test]
    fn evolution_is_deterministic_and_records_endpoints() {
        let g = RadialGrid::new(2, 200, 10.0).unwrap();
        let u = random_field(g, 7);
        let sched = Schedule::new(0.01, 0.5, 7)
            .unwrap()
            .with_snapshots(vec![0.25]);
        let a = evolve(&u, &sched, &params(), Coupling::Physical, &mut NoObserver).unwrap();
        let b = evolve(&u, &sched, &params(), Coupling::Physical, &mut NoObserver).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(
            a.snapshots.last().unwrap().field,
            b.snapshots.last().unwrap().field
        );
        assert_eq!(a.outcome, Outcome::Completed);
        assert_eq!(a.records.first().unwrap().step, 0);
        assert_eq!(a.records.last().unwrap().step, 50);
        assert!(a.records.windows(2).all(|w| w[1].t > w[0].t));
        let snap_steps: Vec<usize> = a.snapshots.iter().map(|s| s.step).collect();
        assert_eq!(snap_steps, vec![0, 25, 50]);
        let m0 = a.records[0].functionals.mass;
        for r in &a.records {
            assert_relative_eq!(r.functionals.mass, m0, max_relative = 1e-12);
        }
    }

    #[test]
    fn non_finite_data_rejected_and_schedule_validated() {
        assert!(Schedule::new(0.0, 1.0, 1).is_err());
        assert!(Schedule::new(0.1, -1.0, 1).is_err());
        assert!(Schedule::new(0.1, 1.0, 0).is_err());
        assert_eq!(Schedule::new(0.1, 1.0, 1).unwrap().steps(), 10);
        assert_eq!(dyadic_ladder(10.0), vec![0.0, 1.0, 2.0, 4.0, 8.0, 10.0]);
        assert_eq!(dyadic_ladder(8.0), vec![0.0, 1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn nonlinear_weights_approximate_inverse_power() {
        let g = RadialGrid::new(2, 1000, 10.0).unwrap();
        let v = nonlinear_weights(&g, 0.5);
        for j in [10, 100, 999] {
            let r = g.node(j);
            assert_relative_eq!(v[j], r.powf(-0.5), max_relative = 1e-3);
        }
    }
}
