//! The exactly solvable unit-square model in the Dirichlet sine basis.
//!
//! On Ω = [0,1]² the eigenfunctions of P are sin(πk₁x₁)sin(πk₂x₂) with
//! eigenvalues k₂²/|k|², and the forced mode amplitudes are
//!
//! ```text
//! û(t,k) = f̂(k)/D(k) · [cos(λ₀t) − cos(k₂/|k|·t)],
//! D(k)   = λ₀²k₁² − (1−λ₀²)k₂²,
//! ```
//!
//! with the L'Hôpital limit û = −f̂·t·sin(λ₀t)/(2λ₀|k|²) at resonance
//! (D = 0). Energy is tracked through the H¹-seminorm Σ π²|k|² û²/4 and
//! spectral mass through the H⁻¹ weight 4f̂²/(π²|k|²).

use crate::quad::{gauss_legendre, panel_rule};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SquareError {
    #[error("quadrature did not converge to 1e-12 after panel doubling (last delta {0:.3e})")]
    QuadratureNotConverged(f64),
    #[error("forcing support must lie strictly inside the open square: {0}")]
    SupportTouchesBoundary(String),
    #[error("invalid forcing: {0}")]
    InvalidForcing(String),
    #[error("forcing json: {0}")]
    BadForcingJson(String),
}

/// Eigenvalue of P on the mode sin(πk₁x₁)sin(πk₂x₂): k₂²/(k₁²+k₂²).
pub fn eigenvalue(k: (u32, u32)) -> f64 {
    assert!(k.0 >= 1 && k.1 >= 1);
    let (a, b) = (k.0 as f64, k.1 as f64);
    b * b / (a * a + b * b)
}

/// Relative resonance guard: |D| < η·|k|² switches to the analytic limit.
pub const RESONANCE_GUARD: f64 = 1e-9;

/// Forcing profile on the square.
///
/// ```json
/// {"type":"bump","center":[0.1667,0.125],"radius":0.1,"amplitude":1.0}
/// {"type":"mode","k":[3,4]}
/// {"type":"grid","values":[[...],...]}
/// ```
///
/// Grid values sample f on the uniform interior lattice x_i = i/(n+1).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ForcingSpec {
    Bump {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    Mode {
        k: [u32; 2],
    },
    Grid {
        values: Vec<Vec<f64>>,
    },
}

fn default_amplitude() -> f64 {
    1.0
}

/// The fixed smooth bump used by the standard experiments: centered at the
/// (3,4)-mode antinode (1/6, 1/8), radius 0.1.
pub fn default_bump() -> ForcingSpec {
    ForcingSpec::Bump {
        center: [1.0 / 6.0, 1.0 / 8.0],
        radius: 0.1,
        amplitude: 1.0,
    }
}

/// C∞ bump exp(−1/(1−s)) with s = |x−c|²/ρ², zero outside |x−c| < ρ.
pub fn bump_value(center: [f64; 2], radius: f64, amplitude: f64, x: f64, y: f64) -> f64 {
    let s = ((x - center[0]).powi(2) + (y - center[1]).powi(2)) / (radius * radius);
    if s >= 1.0 {
        0.0
    } else {
        amplitude * (-1.0 / (1.0 - s)).exp()
    }
}

impl ForcingSpec {
    pub fn from_json(s: &str) -> Result<Self, SquareError> {
        let value: serde_json::Value =
            serde_json::from_str(s).map_err(|e| SquareError::BadForcingJson(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| SquareError::BadForcingJson("forcing spec must be an object".into()))?;
        let ty = obj
            .get("type")
            .and_then(|t| t.as_str())
            .ok_or_else(|| SquareError::BadForcingJson("/type: missing or not a string".into()))?;
        let allowed: &[&str] = match ty {
            "bump" => &["center", "radius", "amplitude"],
            "mode" => &["k"],
            "grid" => &["values"],
            other => {
                return Err(SquareError::BadForcingJson(format!(
                    "/type: unknown forcing type {other:?}"
                )))
            }
        };
        for key in obj.keys() {
            if key != "type" && !allowed.contains(&key.as_str()) {
                return Err(SquareError::BadForcingJson(format!(
                    "/{key}: unknown key for forcing type {ty:?}"
                )));
            }
        }
        serde_path_to_error::deserialize(value)
            .map_err(|e| SquareError::BadForcingJson(format!("{}: {}", e.path(), e.inner())))
    }

    /// Structural checks: finite values, support strictly inside the open
    /// square, bounded sizes.
    pub fn validate(&self) -> Result<(), SquareError> {
        match self {
            ForcingSpec::Bump {
                center,
                radius,
                amplitude,
            } => {
                if !(center[0].is_finite() && center[1].is_finite() && radius.is_finite())
                    || !amplitude.is_finite()
                {
                    return Err(SquareError::InvalidForcing("non-finite bump".into()));
                }
                if *radius <= 0.0 {
                    return Err(SquareError::InvalidForcing("radius must be positive".into()));
                }
                let inside = center[0] - radius > 0.0
                    && center[0] + radius < 1.0
                    && center[1] - radius > 0.0
                    && center[1] + radius < 1.0;
                if !inside {
                    return Err(SquareError::SupportTouchesBoundary(format!(
                        "bump at ({}, {}) radius {}",
                        center[0], center[1], radius
                    )));
                }
                Ok(())
            }
            ForcingSpec::Mode { k } => {
                if k[0] < 1 || k[1] < 1 || k[0] > 4096 || k[1] > 4096 {
                    return Err(SquareError::InvalidForcing(format!(
                        "mode indices must lie in 1..=4096, got {k:?}"
                    )));
                }
                Ok(())
            }
            ForcingSpec::Grid { values } => {
                let n = values.len();
                if n < 2 || n > 4096 {
                    return Err(SquareError::InvalidForcing(format!(
                        "grid must be 2..=4096 rows, got {n}"
                    )));
                }
                if values.iter().any(|row| row.len() != n) {
                    return Err(SquareError::InvalidForcing("grid must be square".into()));
                }
                if values
                    .iter()
                    .any(|row| row.iter().any(|v| !v.is_finite()))
                {
                    return Err(SquareError::InvalidForcing("non-finite grid value".into()));
                }
                Ok(())
            }
        }
    }
}

/// Sine-basis data of a forcing profile: f̂(k) = ∫ f sin(πk₁x₁)sin(πk₂x₂).
#[derive(Debug, Clone)]
pub struct SquareSpectralData {
    k_max: usize,
    /// row-major, index (k₁−1)·K + (k₂−1)
    coeffs: Vec<f64>,
    lambda0: f64,
}

impl SquareSpectralData {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn coeff(&self, k: (u32, u32)) -> f64 {
        assert!(k.0 >= 1 && k.1 >= 1 && k.0 as usize <= self.k_max && k.1 as usize <= self.k_max);
        self.coeffs[(k.0 as usize - 1) * self.k_max + (k.1 as usize - 1)]
    }

    pub fn modes(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        (0..self.coeffs.len()).map(move |i| {
            let k1 = (i / self.k_max) as u32 + 1;
            let k2 = (i % self.k_max) as u32 + 1;
            ((k1, k2), self.coeffs[i])
        })
    }

    /// Fit |f̂(k)| ≤ C·|k|^{−n} and return C for each n = 1..=6.
    pub fn decay_constants(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        for ((k1, k2), f) in self.modes() {
            let kn = ((k1 * k1 + k2 * k2) as f64).sqrt();
            for (n, slot) in out.iter_mut().enumerate() {
                *slot = f64::max(*slot, f.abs() * kn.powi(n as i32 + 1));
            }
        }
        out
    }

    /// û(t,k), with the resonance guard and analytic limit.
    pub fn mode_solution(&self, k: (u32, u32), t: f64) -> ModeAmplitude {
        mode_amplitude(self.coeff(k), k, self.lambda0, t)
    }

    /// E(t) = Σ_k (π²|k|²/4)·û(t,k)² over the retained modes.
    pub fn energy_at(&self, t: f64) -> f64 {
        let lam = self.lambda0;
        let cos_l = (lam * t).cos();
        let mut acc = 0.0;
        for ((k1, k2), f) in self.modes() {
            let kk = (k1 * k1 + k2 * k2) as f64;
            let d = lam * lam * (k1 * k1) as f64 - (1.0 - lam * lam) * (k2 * k2) as f64;
            let u = if d.abs() < RESONANCE_GUARD * kk {
                -f * t * (lam * t).sin() / (2.0 * lam * kk)
            } else {
                f / d * (cos_l - ((k2 as f64 / kk.sqrt()) * t).cos())
            };
            acc += std::f64::consts::PI.powi(2) * kk / 4.0 * u * u;
        }
        acc
    }
}

/// Mode amplitude at time t.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeAmplitude {
    pub k: (u32, u32),
    pub t: f64,
    pub value: f64,
    pub resonant: bool,
}

/// û(t,k) for a single mode with coefficient `fhat`.
pub fn mode_amplitude(fhat: f64, k: (u32, u32), lambda0: f64, t: f64) -> ModeAmplitude {
    let kk = (k.0 * k.0 + k.1 * k.1) as f64;
    let d = lambda0 * lambda0 * (k.0 * k.0) as f64 - (1.0 - lambda0 * lambda0) * (k.1 * k.1) as f64;
    if d.abs() < RESONANCE_GUARD * kk {
        ModeAmplitude {
            k,
            t,
            value: -fhat * t * (lambda0 * t).sin() / (2.0 * lambda0 * kk),
            resonant: true,
        }
    } else {
        let nu = (k.1 * k.1) as f64 / kk;
        ModeAmplitude {
            k,
            t,
            value: fhat / d * ((lambda0 * t).cos() - (nu.sqrt() * t).cos()),
            resonant: false,
        }
    }
}

/// Sine coefficients of a forcing spec, truncated at `k_max` modes per axis.
///
/// Bumps are integrated by tensor Gauss–Legendre over the support box with
/// panel counts doubled until the full coefficient array moves by less than
/// 1e−12; pure modes are exact; grids use the trapezoid lattice sum (exact
/// for band-limited data).
pub fn sine_coeffs(
    f: &ForcingSpec,
    k_max: usize,
    lambda0: f64,
) -> Result<SquareSpectralData, SquareError> {
    f.validate()?;
    assert!(k_max >= 1 && k_max <= 4096);
    let coeffs = match f {
        ForcingSpec::Bump {
            center,
            radius,
            amplitude,
        } => {
            let (c, r, a) = (*center, *radius, *amplitude);
            let fun = move |x: f64, y: f64| bump_value(c, r, a, x, y);
            let support = [c[0] - r, c[0] + r, c[1] - r, c[1] + r];
            let mut prev: Option<Vec<f64>> = None;
            let mut panels = 8;
            let mut delta = f64::INFINITY;
            // resolve both the bump and the sin(πKx) oscillation
            let min_panels = (k_max as f64 * r / 4.0).ceil() as usize;
            while panels < min_panels {
                panels *= 2;
            }
            loop {
                let cur = tensor_sine_quadrature(&fun, support, k_max, panels, 16);
                if let Some(p) = &prev {
                    delta = p
                        .iter()
                        .zip(&cur)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0_f64, f64::max);
                    if delta < 1e-12 {
                        prev = Some(cur);
                        break;
                    }
                }
                prev = Some(cur);
                panels *= 2;
                if panels > 512 {
                    return Err(SquareError::QuadratureNotConverged(delta));
                }
            }
            prev.unwrap()
        }
        ForcingSpec::Mode { k } => {
            let mut coeffs = vec![0.0; k_max * k_max];
            if (k[0] as usize) <= k_max && (k[1] as usize) <= k_max {
                // ∫ sin² ⊗ sin² over the square
                coeffs[(k[0] as usize - 1) * k_max + (k[1] as usize - 1)] = 0.25;
            }
            coeffs
        }
        ForcingSpec::Grid { values } => {
            let n = values.len();
            let h = 1.0 / (n as f64 + 1.0);
            let mut sx = vec![0.0; n * k_max];
            for (i, row) in sx.chunks_mut(k_max).enumerate() {
                let x = (i as f64 + 1.0) * h;
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = (std::f64::consts::PI * (k as f64 + 1.0) * x).sin();
                }
            }
            let mut coeffs = vec![0.0; k_max * k_max];
            // f̂ = h² Sᵀ V S with S the sine sample matrix
            let mut tmp = vec![0.0; n * k_max]; // V S
            for i in 0..n {
                for (k2, slot) in tmp[i * k_max..(i + 1) * k_max].iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += values[i][j] * sx[j * k_max + k2];
                    }
                    *slot = acc;
                }
            }
            for k1 in 0..k_max {
                for k2 in 0..k_max {
                    let mut acc = 0.0;
                    for i in 0..n {
                        acc += sx[i * k_max + k1] * tmp[i * k_max + k2];
                    }
                    coeffs[k1 * k_max + k2] = acc * h * h;
                }
            }
            coeffs
        }
    };
    Ok(SquareSpectralData {
        k_max,
        coeffs,
        lambda0,
    })
}

/// Sine coefficients of an arbitrary callable over a support box (test and
/// cross-check entry point; no convergence control).
pub fn sine_coeffs_of<F: Fn(f64, f64) -> f64 + Sync>(
    fun: F,
    support: [f64; 4],
    k_max: usize,
    lambda0: f64,
    panels: usize,
) -> SquareSpectralData {
    let coeffs = tensor_sine_quadrature(&fun, support, k_max, panels, 16);
    SquareSpectralData {
        k_max,
        coeffs,
        lambda0,
    }
}

fn tensor_sine_quadrature<F: Fn(f64, f64) -> f64 + Sync>(
    fun: &F,
    support: [f64; 4],
    k_max: usize,
    panels: usize,
    ng: usize,
) -> Vec<f64> {
    use rayon::prelude::*;
    let _ = gauss_legendre(ng); // nodes cached below via panel_rule
    let (xs, wx) = panel_rule(support[0], support[1], panels, ng);
    let (ys, wy) = panel_rule(support[2], support[3], panels, ng);
    let nx = xs.len();
    let ny = ys.len();
    // F[i][j] = w_i w_j f(x_i, y_j)
    let fv: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / ny, ij % ny);
            wx[i] * wy[j] * fun(xs[i], ys[j])
        })
        .collect();
    // sine sample matrices
    let sine = |pts: &[f64]| -> Vec<f64> {
        let mut m = vec![0.0; pts.len() * k_max];
        for (i, &p) in pts.iter().enumerate() {
            for k in 0..k_max {
                m[i * k_max + k] = (std::f64::consts::PI * (k as f64 + 1.0) * p).sin();
            }
        }
        m
    };
    let sxm = sine(&xs);
    let sym = sine(&ys);
    // tmp[i][k2] = Σ_j F[i][j] sym[j][k2]
    let tmp: Vec<f64> = (0..nx)
        .into_par_iter()
        .flat_map_iter(|i| {
            let row = &fv[i * ny..(i + 1) * ny];
            (0..k_max)
                .map(|k2| {
                    row.iter()
                        .zip(sym.chunks(k_max))
                        .map(|(f, s)| f * s[k2])
                        .sum::<f64>()
                })
                .collect::<Vec<f64>>()
        })
        .collect();
    // out[k1][k2] = Σ_i sxm[i][k1] tmp[i][k2]
    (0..k_max * k_max)
        .into_par_iter()
        .map(|kk| {
            let (k1, k2) = (kk / k_max, kk % k_max);
            (0..nx).map(|i| sxm[i * k_max + k1] * tmp[i * k_max + k2]).sum()
        })
        .collect()
}

/// E(t) sampled over a time grid, with a heuristic truncation indicator:
/// the largest single-mode energy bound on the outermost retained shell.
#[derive(Debug, Clone)]
pub struct EnergySeries {
    pub t: Vec<f64>,
    pub energy: Vec<f64>,
    pub tail_indicator: f64,
}

pub fn evolve_energy(data: &SquareSpectralData, t_grid: &[f64]) -> EnergySeries {
    use rayon::prelude::*;
    let energy: Vec<f64> = t_grid.par_iter().map(|&t| data.energy_at(t)).collect();
    let k = data.k_max() as u32;
    let mut tail = 0.0_f64;
    for ((k1, k2), f) in data.modes() {
        if k1 == k || k2 == k {
            let kk = (k1 * k1 + k2 * k2) as f64;
            let d = data.lambda0 * data.lambda0 * (k1 * k1) as f64
                - (1.0 - data.lambda0 * data.lambda0) * (k2 * k2) as f64;
            if d.abs() > RESONANCE_GUARD * kk {
                let amp = 2.0 * f.abs() / d.abs();
                tail = tail.max(std::f64::consts::PI.powi(2) * kk / 4.0 * amp * amp);
            }
        }
    }
    EnergySeries {
        t: t_grid.to_vec(),
        energy,
        tail_indicator: tail,
    }
}

/// Windowed-max log-log fit of the growth exponent of E(t) over
/// [t_lo, t_hi]: log-spaced windows, the max of E in each window, least
/// squares on (log t, log max E).
pub fn fit_energy_exponent(series: &EnergySeries, t_lo: f64, t_hi: f64, windows: usize) -> f64 {
    let l0 = t_lo.ln();
    let l1 = t_hi.ln();
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(windows);
    for w in 0..windows {
        let a = l0 + (l1 - l0) * w as f64 / windows as f64;
        let b = l0 + (l1 - l0) * (w + 1) as f64 / windows as f64;
        let mut best: Option<(f64, f64)> = None;
        for (t, e) in series.t.iter().zip(&series.energy) {
            let lt = t.ln();
            if lt >= a && lt <= b && *e > 0.0 {
                if best.map(|(_, be)| *e > be).unwrap_or(true) {
                    best = Some((lt, *e));
                }
            }
        }
        if let Some((lt, e)) = best {
            pts.push((lt, e.ln()));
        }
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Eigenvalue cluster near z₀: count, H⁻¹ spectral mass Σ 4f̂²/(π²|k|²), and
/// the smallest |k| among members.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClusterEstimate {
    pub count: usize,
    pub mass: f64,
    pub min_k: Option<f64>,
}

pub fn spectral_cluster(data: &SquareSpectralData, z0: f64, eps: f64) -> ClusterEstimate {
    assert!(eps > 0.0 && z0 > 0.0 && z0 < 1.0);
    let mut count = 0;
    let mut mass = 0.0;
    let mut min_k: Option<f64> = None;
    for ((k1, k2), f) in data.modes() {
        let kk = (k1 * k1 + k2 * k2) as f64;
        let z = (k2 * k2) as f64 / kk;
        if (z - z0).abs() < eps {
            count += 1;
            mass += 4.0 * f * f / (std::f64::consts::PI.powi(2) * kk);
            let kn = kk.sqrt();
            min_k = Some(min_k.map(|m: f64| m.min(kn)).unwrap_or(kn));
        }
    }
    ClusterEstimate { count, mass, min_k }
}
