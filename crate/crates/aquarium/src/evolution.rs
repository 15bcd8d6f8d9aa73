//! Functional-calculus evolution: the Duhamel multiplier
//!
//! ```text
//! W_{t,λ₀}(z) = ∫₀ᵗ sin(s√z)/√z · e^{−iλ₀s} ds
//!            = Σ± (1 − e^{−it(λ₀ ± √z)}) / (2√z(√z ± λ₀))
//! ```
//!
//! and the dyadic splitting of the spectrum into shells
//! δ^{k+1} ≤ |λ₀² − z| < δ^k, which is how bounded energy is read off from
//! smallness of the spectral measure near λ₀².

use crate::square::{SquareSpectralData, RESONANCE_GUARD};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("spectral argument must be positive, got {0}")]
    DomainError(f64),
    #[error("delta must lie in (0, 1/2], got {0}")]
    BadDelta(f64),
}

/// Crossover: below this relative distance of √z to λ₀ the `−` term uses the
/// cancellation-free product form instead of the naive quotient.
pub const MULTIPLIER_CROSSOVER: f64 = 1e-6;

/// (1 − e^{−iφ})/φ evaluated without cancellation:
/// i·e^{−iφ/2}·sinc(φ/2).
fn one_minus_exp_over(phi: f64) -> Complex64 {
    let half = 0.5 * phi;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::new(0.0, 1.0) * Complex64::new((-half).cos(), (-half).sin()) * sinc
}

/// W_{t,λ₀}(z) by the naive two-term formula; catastrophically cancelling
/// for √z near λ₀ (kept for the crossover-band agreement check).
pub fn w_multiplier_direct(z: f64, lambda0: f64, t: f64) -> Result<Complex64, EvolutionError> {
    if z <= 0.0 {
        return Err(EvolutionError::DomainError(z));
    }
    let rz = z.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for pm in [1.0, -1.0] {
        let w = t * (lambda0 + pm * rz);
        let e = Complex64::new(1.0, 0.0) - Complex64::new((-w).cos(), (-w).sin());
        acc += e / (2.0 * rz * (rz + pm * lambda0));
    }
    Ok(acc)
}

/// W_{t,λ₀}(z), stable for all z ∈ (0,1] and t ≥ 0.
///
/// The `−` term is −t/(2√z)·ζ(t(λ₀−√z)) with ζ(φ) = (1−e^{−iφ})/φ in the
/// cancellation-free product form once |√z−λ₀| < 1e−6·λ₀; at z = λ₀²
/// exactly this reduces to −it/(2λ₀) + (1−e^{−2itλ₀})/(4λ₀²).
pub fn w_multiplier(z: f64, lambda0: f64, t: f64) -> Result<Complex64, EvolutionError> {
    if z <= 0.0 {
        return Err(EvolutionError::DomainError(z));
    }
    let rz = z.sqrt();
    if (rz - lambda0).abs() >= MULTIPLIER_CROSSOVER * lambda0 {
        return w_multiplier_direct(z, lambda0, t);
    }
    // + term is harmless; − term through ζ
    let wp = t * (lambda0 + rz);
    let plus = (Complex64::new(1.0, 0.0) - Complex64::new((-wp).cos(), (-wp).sin()))
        / (2.0 * rz * (rz + lambda0));
    let minus = -(t / (2.0 * rz)) * one_minus_exp_over(t * (lambda0 - rz));
    Ok(plus + minus)
}

/// Re(e^{iλ₀t} W_{t,λ₀}(z)) = (cos(t√z) − cos(tλ₀))/(λ₀² − z): the real
/// multiplier that synthesizes the solution.
pub fn real_multiplier(z: f64, lambda0: f64, t: f64) -> Result<f64, EvolutionError> {
    let w = w_multiplier(z, lambda0, t)?;
    let e = Complex64::new((lambda0 * t).cos(), (lambda0 * t).sin());
    Ok((e * w).re)
}

/// Elementary rigorous bound: |W| ≤ (1 + λ₀/√z)/|λ₀² − z| + 1/(√z(√z+λ₀)).
/// Near λ₀² the first constant approaches 2, the scale used by the shell
/// estimates.
pub fn w_multiplier_bound(z: f64, lambda0: f64) -> f64 {
    let rz = z.sqrt();
    (1.0 + lambda0 / rz) / (lambda0 * lambda0 - z).abs() + 1.0 / (rz * (rz + lambda0))
}

/// Squared H⁻¹ mass of one dyadic shell at time t.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ShellMass {
    pub shell: usize,
    /// number of retained eigenvalues in the shell
    pub count: usize,
    /// ‖w_k(t)‖²_{H⁻¹} = Σ |W(z)|²·4f̂²/(π²|k|²) over the shell
    pub mass: f64,
    /// a resonant (guarded) eigenvalue fell in this shell
    pub resonant: bool,
}

/// Dyadic decomposition of the square spectrum around λ₀².
#[derive(Debug, Clone)]
pub struct DyadicSplit {
    pub delta: f64,
    pub t: f64,
    pub shells: Vec<ShellMass>,
    /// modes closer to λ₀² than the last shell (empty when k_max was chosen
    /// from the eigenvalue gap)
    pub core_count: usize,
    pub core_mass: f64,
}

impl DyadicSplit {
    pub fn total_mass(&self) -> f64 {
        self.shells.iter().map(|s| s.mass).sum::<f64>() + self.core_mass
    }
}

/// Bin the square eigenvalues into shells δ^{k+1} ≤ |λ₀²−z| < δ^k and sum
/// the per-shell masses |W(z)|²·(H⁻¹ weight). `k_shells = None` picks the
/// smallest depth that puts every eigenvalue inside a shell.
pub fn dyadic_split_energy(
    data: &SquareSpectralData,
    lambda0: f64,
    delta: f64,
    t: f64,
    k_shells: Option<usize>,
) -> Result<DyadicSplit, EvolutionError> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(EvolutionError::BadDelta(delta));
    }
    let z0 = lambda0 * lambda0;
    let gap = data
        .modes()
        .map(|((k1, k2), _)| {
            let kk = (k1 * k1 + k2 * k2) as f64;
            ((k2 * k2) as f64 / kk - z0).abs()
        })
        .fold(f64::INFINITY, f64::min);
    let k_max = k_shells.unwrap_or_else(|| {
        if gap <= 0.0 {
            40
        } else {
            // δ^{k_max+1} below the smallest gap
            (gap.ln() / delta.ln()).ceil() as usize + 1
        }
    });
    let mut shells: Vec<ShellMass> = (0..=k_max)
        .map(|k| ShellMass {
            shell: k,
            count: 0,
            mass: 0.0,
            resonant: false,
        })
        .collect();
    let mut core_count = 0usize;
    let mut core_mass = 0.0;
    for ((k1, k2), f) in data.modes() {
        let kk = (k1 * k1 + k2 * k2) as f64;
        let z = (k2 * k2) as f64 / kk;
        let dist = (z - z0).abs();
        let weight = 4.0 * f * f / (std::f64::consts::PI.powi(2) * kk);
        let wv = w_multiplier(z, lambda0, t)?.norm_sqr() * weight;
        let resonant = {
            let d = z0 * (k1 * k1) as f64 - (1.0 - z0) * (k2 * k2) as f64;
            d.abs() < RESONANCE_GUARD * kk
        };
        // shell index: δ^{k+1} ≤ dist < δ^k  ⇔  k = floor(log dist / log δ)
        let idx = if dist >= 1.0 {
            0
        } else if dist <= 0.0 {
            usize::MAX
        } else {
            (dist.ln() / delta.ln()).floor() as usize
        };
        if idx <= k_max {
            shells[idx].count += 1;
            shells[idx].mass += wv;
            shells[idx].resonant |= resonant;
        } else {
            core_count += 1;
            core_mass += wv;
        }
    }
    Ok(DyadicSplit {
        delta,
        t,
        shells,
        core_count,
        core_mass,
    })
}
