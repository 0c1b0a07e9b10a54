//! The truncated virial weight `φ_R(r) = R² φ(r/R)` and the cutoff
//! `χ_R(r) = χ(r/R)`, both built from fixed degree-7 polynomial blends.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::RadialGrid;

/// A polynomial `p(s) = Σ c_k s^k` on `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlendPolynomial {
    pub coeffs: [f64; 8],
}

impl BlendPolynomial {
    /// Hermite blend of `φ` on `1 < ρ < 2` (with `s = ρ - 1`): matches `ρ²`
    /// at `ρ = 1` and the constant `2` at `ρ = 2` up to the third derivative.
    pub const PHI: BlendPolynomial = BlendPolynomial {
        coeffs: [1.0, 2.0, 1.0, 0.0, -15.0, 26.0, -17.0, 4.0],
    };

    /// `1 - S(s)` with the C³ smoothstep `S(s) = 35s⁴ - 84s⁵ + 70s⁶ - 20s⁷`.
    pub const CHI: BlendPolynomial = BlendPolynomial {
        coeffs: [1.0, 0.0, 0.0, 0.0, -35.0, 84.0, -70.0, 20.0],
    };

    /// `d^k p / ds^k` at `s`.
    pub fn derivative(&self, k: usize, s: f64) -> f64 {
        let mut acc = 0.0;
        for m in (k..8).rev() {
            let mut c = self.coeffs[m];
            for q in 0..k {
                c *= (m - q) as f64;
            }
            acc = acc * s + c;
        }
        acc
    }
}

/// Values of `φ` (unit scale) and its first four derivatives at `ρ`.
fn phi_unit(blend: &BlendPolynomial, rho: f64) -> [f64; 5] {
    if rho <= 1.0 {
        [rho * rho, 2.0 * rho, 2.0, 0.0, 0.0]
    } else if rho >= 2.0 {
        [2.0, 0.0, 0.0, 0.0, 0.0]
    } else {
        let s = rho - 1.0;
        [0, 1, 2, 3, 4].map(|k| blend.derivative(k, s))
    }
}

/// Values of `χ` (unit scale) and its first two derivatives at `ρ`.
fn chi_unit(rho: f64) -> [f64; 3] {
    if rho <= 0.5 {
        [1.0, 0.0, 0.0]
    } else if rho >= 1.0 {
        [0.0, 0.0, 0.0]
    } else {
        // s = 2ρ - 1
        let s = 2.0 * rho - 1.0;
        let b = &BlendPolynomial::CHI;
        [
            b.derivative(0, s),
            2.0 * b.derivative(1, s),
            4.0 * b.derivative(2, s),
        ]
    }
}

/// Radial Laplacian and bi-Laplacian from radial derivatives `f', f'', f''',
/// f''''` at radius `r` in dimension `n`.
pub fn radial_laplacian(n: f64, r: f64, d1: f64, d2: f64) -> f64 {
    d2 + (n - 1.0) * d1 / r
}

pub fn radial_bilaplacian(n: f64, r: f64, d: [f64; 4]) -> f64 {
    let [d1, d2, d3, d4] = d;
    let c = (n - 1.0) * (n - 3.0);
    d4 + 2.0 * (n - 1.0) * d3 / r + c * (d2 - d1 / r) / (r * r)
}

#[derive(Clone, Debug)]
pub struct VirialWeight {
    pub scale: f64,
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub laplacian: Vec<f64>,
    pub bilaplacian: Vec<f64>,
    /// `φ''` on the faces `r_{j+1/2}`, paired with face differences.
    pub d2_faces: Vec<f64>,
    /// `sup_r |φ_R^{(k)}|` over the grid for `k = 0..=4`.
    pub derivative_sups: [f64; 5],
}

/// Result of checking the blend against the weight constraints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlendCheck {
    pub max_d2: f64,
    pub min_d1: f64,
    pub max_d1_over_r: f64,
    pub min_2n_minus_laplacian: f64,
}

impl BlendCheck {
    pub fn satisfied(&self) -> bool {
        const SLACK: f64 = 1e-12;
        self.max_d2 <= 2.0 + SLACK
            && self.min_d1 >= -SLACK
            && self.max_d1_over_r <= 2.0 + SLACK
            && self.min_2n_minus_laplacian >= -SLACK
    }
}

/// Samples the blend region `[1, 2]` at 10³ points and reports the extreme
/// values of the constrained quantities (unit scale; the constraints are
/// scale invariant).
pub fn check_phi_blend(blend: &BlendPolynomial, n: u32) -> BlendCheck {
    let n = n as f64;
    let mut check = BlendCheck {
        max_d2: f64::NEG_INFINITY,
        min_d1: f64::INFINITY,
        max_d1_over_r: f64::NEG_INFINITY,
        min_2n_minus_laplacian: f64::INFINITY,
    };
    for k in 0..=1000 {
        let rho = 1.0 + k as f64 / 1000.0;
        let s = rho - 1.0;
        let d1 = blend.derivative(1, s);
        let d2 = blend.derivative(2, s);
        check.max_d2 = check.max_d2.max(d2);
        check.min_d1 = check.min_d1.min(d1);
        check.max_d1_over_r = check.max_d1_over_r.max(d1 / rho);
        check.min_2n_minus_laplacian = check
            .min_2n_minus_laplacian
            .min(2.0 * n - radial_laplacian(n, rho, d1, d2));
    }
    check
}

impl VirialWeight {
    pub fn new(scale: f64, grid: &RadialGrid) -> Result<Self> {
        Self::with_blend(scale, grid, &BlendPolynomial::PHI)
    }

    /// Builds the weight from an arbitrary blend; fails if the blend breaks
    /// `φ'' ≤ 2`, `φ' ≥ 0`, `φ'/r ≤ 2` or `Δφ ≤ 2N`.
    pub fn with_blend(scale: f64, grid: &RadialGrid, blend: &BlendPolynomial) -> Result<Self> {
        if !(scale >= 4.0 * grid.h) {
            return Err(Error::InvalidArgument(format!(
                "virial scale R = {scale} is below 4h = {}",
                4.0 * grid.h
            )));
        }
        let check = check_phi_blend(blend, grid.n);
        if !check.satisfied() {
            return Err(Error::Contract(format!(
                "virial weight blend violates its constraints: {check:?}"
            )));
        }
        let n = grid.n as f64;
        let eval = |r: f64| {
            let [p, q1, q2, q3, q4] = phi_unit(blend, r / scale);
            [
                scale * scale * p,
                scale * q1,
                q2,
                q3 / scale,
                q4 / (scale * scale),
            ]
        };
        let mut w = VirialWeight {
            scale,
            grid: *grid,
            phi: Vec::with_capacity(grid.points),
            d1: Vec::with_capacity(grid.points),
            d2: Vec::with_capacity(grid.points),
            laplacian: Vec::with_capacity(grid.points),
            bilaplacian: Vec::with_capacity(grid.points),
            d2_faces: Vec::with_capacity(grid.points),
            derivative_sups: [0.0; 5],
        };
        for j in 0..grid.points {
            let r = grid.node(j);
            let d = eval(r);
            w.phi.push(d[0]);
            w.d1.push(d[1]);
            w.d2.push(d[2]);
            w.laplacian.push(radial_laplacian(n, r, d[1], d[2]));
            w.bilaplacian
                .push(radial_bilaplacian(n, r, [d[1], d[2], d[3], d[4]]));
            for (k, v) in d.iter().enumerate() {
                w.derivative_sups[k] = w.derivative_sups[k].max(v.abs());
            }
            w.d2_faces.push(eval(grid.face(j))[2]);
        }
        Ok(w)
    }
}

pub fn make_weight_phi(scale: f64, grid: &RadialGrid) -> Result<VirialWeight> {
    VirialWeight::new(scale, grid)
}

#[derive(Clone, Debug)]
pub struct Cutoff {
    pub scale: f64,
    pub grid: RadialGrid,
    pub chi: Vec<f64>,
    pub laplacian: Vec<f64>,
    /// `sup |Δχ_R| · R²` over the grid.
    pub laplacian_bound: f64,
}

pub fn make_cutoff_chi(scale: f64, grid: &RadialGrid) -> Result<Cutoff> {
    if !(scale >= 4.0 * grid.h) {
        return Err(Error::InvalidArgument(format!(
            "cutoff scale R = {scale} is below 4h = {}",
            4.0 * grid.h
        )));
    }
    let n = grid.n as f64;
    let mut chi = Vec::with_capacity(grid.points);
    let mut laplacian = Vec::with_capacity(grid.points);
    let mut sup: f64 = 0.0;
    for r in grid.nodes() {
        let [c, c1, c2] = chi_unit(r / scale);
        let lap = radial_laplacian(n, r, c1 / scale, c2 / (scale * scale));
        sup = sup.max(lap.abs());
        chi.push(c);
        laplacian.push(lap);
    }
    Ok(Cutoff {
        scale,
        grid: *grid,
        chi,
        laplacian,
        laplacian_bound: sup * scale * scale,
    })
}
