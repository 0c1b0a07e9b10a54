//! Radial grids, complex fields on them, and the static functionals.
//!
//! Nodes sit at `r_j = (j + 1/2) h`, so `|x|^{-b}` is never evaluated at the
//! origin. The discrete gradient lives on the faces `r_{j+1/2} = (j+1) h`
//! with a homogeneous Dirichlet ghost value past the last node; this is the
//! same stencil the kinetic step uses, so the discrete kinetic energy is
//! exactly `-<u, L_h u>`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{PhysParams, Sign};

/// Surface measure of the unit sphere `S^{N-1}`.
pub fn sphere_measure(n: u32) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        k => 2.0 * PI / (k as f64 - 2.0) * sphere_measure(k - 2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub n: u32,
    pub points: usize,
    pub h: f64,
}

impl RadialGrid {
    pub fn new(n: u32, points: usize, r_max: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid dimension must be at least 2, got {n}"
            )));
        }
        if points < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 4 points, got {points}"
            )));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        Ok(RadialGrid {
            n,
            points,
            h: r_max / points as f64,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.h * self.points as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.h
    }

    /// Face between node `j` and `j + 1`.
    #[inline]
    pub fn face(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.node(j))
    }

    pub fn sphere_measure(&self) -> f64 {
        sphere_measure(self.n)
    }

    fn metric_power(&self) -> i32 {
        self.n as i32 - 1
    }

    /// `ω r_j^{N-1} h`, the weight of the mass inner product.
    pub fn volume_weights(&self) -> Vec<f64> {
        let w = self.sphere_measure() * self.h;
        let k = self.metric_power();
        self.nodes().map(|r| w * r.powi(k)).collect()
    }

    /// `ω ∫_{cell j} r^{s} dr` over `[j h, (j+1) h]`: exact cell integrals of a
    /// possibly non-integer power, used for the `|x|^{-b}` weighted terms.
    pub fn power_weights(&self, s: f64) -> Vec<f64> {
        let w = self.sphere_measure() * self.h.powf(s + 1.0) / (s + 1.0);
        (0..self.points)
            .map(|j| w * ((j as f64 + 1.0).powf(s + 1.0) - (j as f64).powf(s + 1.0)))
            .collect()
    }

    /// `ω r_{j+1/2}^{N-1} / h` on the faces `j = 0..J-1` (the last face sits
    /// at `r_max` against the Dirichlet ghost).
    pub fn face_weights(&self) -> Vec<f64> {
        let w = self.sphere_measure() / self.h;
        let k = self.metric_power();
        (0..self.points).map(|j| w * self.face(j).powi(k)).collect()
    }

    pub fn check_same(&self, other: &RadialGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }

    /// Short identifier used in cache keys.
    pub fn signature(&self) -> String {
        format!("N{}_J{}_rmax{}", self.n, self.points, self.r_max())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialField {
    pub grid: RadialGrid,
    pub values: Vec<Complex64>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.points
            )));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidArgument("field has non-finite values".into()));
        }
        Ok(RadialField { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().map(f).collect();
        RadialField { grid, values }
    }

    pub fn from_real(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        RadialField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.points],
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        RadialField {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &RadialField) -> Result<RadialField> {
        self.grid.check_same(&other.grid)?;
        Ok(RadialField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Pointwise product with a real profile sampled at the nodes.
    pub fn multiplied(&self, profile: &[f64]) -> RadialField {
        RadialField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(profile)
                .map(|(z, &w)| z * w)
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Face differences `(u_{j+1} - u_j)` with `u_J = 0`.
    pub fn face_differences(&self) -> impl Iterator<Item = Complex64> + '_ {
        let j_max = self.values.len();
        (0..j_max).map(move |j| {
            let next = if j + 1 < j_max {
                self.values[j + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            next - self.values[j]
        })
    }

    /// `∂_r u` at the nodes: centered differences inside, one-sided at the
    /// two ends.
    pub fn radial_derivative(&self) -> Vec<Complex64> {
        let v = &self.values;
        let j_max = v.len();
        let h = self.grid.h;
        (0..j_max)
            .map(|j| {
                if j == 0 {
                    (v[1] - v[0]) / h
                } else if j + 1 == j_max {
                    (v[j] - v[j - 1]) / h
                } else {
                    (v[j + 1] - v[j - 1]) / (2.0 * h)
                }
            })
            .collect()
    }

    pub fn mass(&self) -> f64 {
        self.grid
            .volume_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, z)| w * z.norm_sqr())
            .sum()
    }

    /// `‖∇u‖²` from face differences, including the Dirichlet face.
    pub fn kinetic(&self) -> f64 {
        self.grid
            .face_weights()
            .iter()
            .zip(self.face_differences())
            .map(|(w, d)| w * d.norm_sqr())
            .sum()
    }

    /// `∫ |x|^{-b} |u|^{α+2} dx`.
    pub fn potential(&self, b: f64, alpha: f64) -> f64 {
        let s = self.grid.n as f64 - 1.0 - b;
        self.grid
            .power_weights(s)
            .iter()
            .zip(&self.values)
            .map(|(w, z)| w * z.norm().powf(alpha + 2.0))
            .sum()
    }

    /// `∫ |u|^p dx` (the `p`-th power of the discrete `L^p` norm).
    pub fn lp_power(&self, p: f64) -> f64 {
        self.grid
            .volume_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, z)| w * z.norm().powf(p))
            .sum()
    }

    pub fn lp(&self, p: f64) -> f64 {
        self.lp_power(p).powf(1.0 / p)
    }

    /// Discrete `H¹` norm `sqrt(mass + kinetic)`.
    pub fn h1_norm(&self) -> f64 {
        (self.mass() + self.kinetic()).sqrt()
    }

    pub fn functionals(&self, params: &PhysParams) -> Functionals {
        let mass = self.mass();
        let kinetic = self.kinetic();
        let potential = self.potential(params.b, params.alpha);
        let scatter_exponent = params.scatter_exponent();
        let l_scatter_power = self.lp_power(scatter_exponent);
        Functionals {
            mass,
            kinetic,
            potential,
            energy: energy(kinetic, potential, params),
            l_scatter: l_scatter_power.powf(1.0 / scatter_exponent),
            l_scatter_power,
            l4_power: self.lp_power(4.0),
        }
    }
}

/// `E = K/2 + κ P/(α+2)`, `κ = +1` defocusing and `-1` focusing.
pub fn energy(kinetic: f64, potential: f64, params: &PhysParams) -> f64 {
    0.5 * kinetic + params.kappa() * potential / (params.alpha + 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Functionals {
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
    /// `‖u‖_{L^p}` with `p = α + 2 + b/(N-1)`.
    pub l_scatter: f64,
    /// `‖u‖^p_{L^p}` for the same `p`, the integrand of the Morawetz bound.
    pub l_scatter_power: f64,
    /// `∫ |u|^4 dx`.
    pub l4_power: f64,
}

pub fn functionals(u: &RadialField, params: &PhysParams) -> Functionals {
    u.functionals(params)
}

/// `max_j r_j^{(N-1)/2} |u_j| / ‖u‖_{H¹}`.
pub fn radial_sup_ratio(u: &RadialField) -> Result<f64> {
    let norm = u.h1_norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "radial_sup_ratio of a zero field".into(),
        ));
    }
    let power = (u.grid.n as f64 - 1.0) / 2.0;
    let sup = u
        .grid
        .nodes()
        .zip(&u.values)
        .map(|(r, z)| r.powf(power) * z.norm())
        .fold(0.0, f64::max);
    Ok(sup / norm)
}

/// Header carried by field snapshot files.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotHeader {
    pub params: PhysParams,
    pub t: f64,
}

/// Format used for every number written to CSV: 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_snapshot<W: Write>(mut w: W, u: &RadialField, header: &SnapshotHeader) -> Result<()> {
    let p = &header.params;
    let mut out = String::new();
    let _ = writeln!(out, "# N={}", p.n);
    let _ = writeln!(out, "# b={}", fmt_num(p.b));
    let _ = writeln!(out, "# alpha={}", fmt_num(p.alpha));
    let _ = writeln!(out, "# sign={}", p.sign);
    let _ = writeln!(out, "# t={}", fmt_num(header.t));
    let _ = writeln!(out, "# J={}", u.grid.points);
    let _ = writeln!(out, "# h={}", fmt_num(u.grid.h));
    out.push_str("r,re,im\n");
    for (r, z) in u.grid.nodes().zip(&u.values) {
        let _ = writeln!(out, "{},{},{}", fmt_num(r), fmt_num(z.re), fmt_num(z.im));
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

pub fn read_snapshot<R: Read>(r: R) -> Result<(RadialField, SnapshotHeader)> {
    let mut n = None;
    let mut b = None;
    let mut alpha = None;
    let mut sign = None;
    let mut t = None;
    let mut points = None;
    let mut h = None;
    let mut values = Vec::new();
    let bad = |msg: String| Error::InvalidArgument(format!("snapshot: {msg}"));
    for line in BufReader::new(r).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed header '{line}'")))?;
            let v = v.trim();
            let num = || {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("bad number '{v}'")))
            };
            match k.trim() {
                "N" => n = Some(v.parse::<u32>().map_err(|_| bad(format!("bad N '{v}'")))?),
                "b" => b = Some(num()?),
                "alpha" => alpha = Some(num()?),
                "sign" => sign = Some(v.parse::<Sign>()?),
                "t" => t = Some(num()?),
                "J" => {
                    points = Some(
                        v.parse::<usize>()
                            .map_err(|_| bad(format!("bad J '{v}'")))?,
                    )
                }
                "h" => h = Some(num()?),
                other => return Err(bad(format!("unknown header key '{other}'"))),
            }
            continue;
        }
        if line.starts_with("r,") {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(bad(format!("expected 3 columns, got '{line}'")));
        }
        let re = cols[1]
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("bad value '{line}'")))?;
        let im = cols[2]
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("bad value '{line}'")))?;
        values.push(Complex64::new(re, im));
    }
    let missing = |k: &str| bad(format!("missing header '{k}'"));
    let n = n.ok_or_else(|| missing("N"))?;
    let points = points.ok_or_else(|| missing("J"))?;
    let h = h.ok_or_else(|| missing("h"))?;
    let params = PhysParams {
        n,
        b: b.ok_or_else(|| missing("b"))?,
        alpha: alpha.ok_or_else(|| missing("alpha"))?,
        sign: sign.ok_or_else(|| missing("sign"))?,
    };
    let grid = RadialGrid::new(n, points, h * points as f64)?;
    let field = RadialField::new(grid, values)?;
    Ok((
        field,
        SnapshotHeader {
            params,
            t: t.ok_or_else(|| missing("t"))?,
        },
    ))
}
