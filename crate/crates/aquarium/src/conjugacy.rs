//! Cohomological equations over Diophantine rotations and numerical
//! conjugacy of circle maps to rigid rotations.
//!
//! The cohomological solve divides Fourier modes by the small divisors
//! 1 − e^{2πikα}. The conjugacy pipeline first builds a seed conjugacy by
//! weighted Birkhoff averaging of the orbit displacement and then refines it
//! by a KAM-style iteration: measure the defect β, absorb its mean into α,
//! solve a cohomological equation for the correction, compose, repeat.

use crate::arithmetic::DiophantineProfile;
use crate::billiard::{BilliardError, CircleMap};
use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConjugacyError {
    #[error("resonant divisor at mode k={k}: |1 - e^(2πikα)| = {divisor:.3e}")]
    ResonantDivisor { k: i64, divisor: f64 },
    #[error("right-hand side has nonzero mean {0:.3e}; cohomological data must have mean zero")]
    NonzeroMean(f64),
    #[error("averaged conjugacy is not strictly monotone (needs larger n or Diophantine α)")]
    NonmonotoneResult,
    #[error("KAM residual increased on two consecutive iterations ({0:.3e} then {1:.3e})")]
    DivergenceDetected(f64, f64),
    #[error(transparent)]
    Map(#[from] BilliardError),
}

/// Trigonometric polynomial Σ_{|k|≤K} ĝ(k) e^{2πikx}.
#[derive(Debug, Clone)]
pub struct FourierFunction {
    /// coefficient of mode k at index k + k_max
    coeffs: Vec<Complex64>,
    k_max: usize,
    real: bool,
}

impl FourierFunction {
    pub fn zero(k_max: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * k_max + 1],
            k_max,
            real: true,
        }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.k_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.k_max as i64) as usize]
        }
    }

    /// Set ĝ(k); for real functions the mirror mode is kept conjugate.
    pub fn set_coeff(&mut self, k: i64, v: Complex64) {
        assert!(k.unsigned_abs() as usize <= self.k_max);
        self.coeffs[(k + self.k_max as i64) as usize] = v;
        if self.real && k != 0 {
            self.coeffs[(-k + self.k_max as i64) as usize] = v.conj();
        }
        if self.real && k == 0 {
            self.coeffs[self.k_max] = Complex64::new(v.re, 0.0);
        }
    }

    /// Sample a real function on a uniform grid and truncate its Fourier
    /// series at `k_max`. The grid must oversample: len > 2·k_max.
    pub fn from_grid(values: &[f64], k_max: usize) -> Self {
        let n = values.len();
        assert!(n > 2 * k_max, "grid of {n} cannot resolve {k_max} modes");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let mut out = Self::zero(k_max);
        out.coeffs[k_max] = buf[0] / n as f64;
        for k in 1..=k_max {
            out.coeffs[k_max + k] = buf[k] / n as f64;
            out.coeffs[k_max - k] = buf[n - k] / n as f64;
        }
        out
    }

    /// Evaluate at x (real part for real functions; the imaginary part is
    /// roundoff by Hermitian symmetry).
    pub fn eval(&self, x: f64) -> f64 {
        let ang = 2.0 * std::f64::consts::PI * x;
        let e = Complex64::new(ang.cos(), ang.sin());
        let mut acc = self.coeffs[self.k_max];
        let mut ek = Complex64::new(1.0, 0.0);
        if self.real {
            for k in 1..=self.k_max {
                ek *= e;
                acc += 2.0 * (self.coeffs[self.k_max + k] * ek).re;
            }
            acc.re
        } else {
            let mut emk = Complex64::new(1.0, 0.0);
            let einv = e.conj();
            for k in 1..=self.k_max {
                ek *= e;
                emk *= einv;
                acc += self.coeffs[self.k_max + k] * ek + self.coeffs[self.k_max - k] * emk;
            }
            acc.re
        }
    }

    /// d/dx of the series at x.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let ang = 2.0 * std::f64::consts::PI * x;
        let e = Complex64::new(ang.cos(), ang.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut ek = Complex64::new(1.0, 0.0);
        for k in 1..=self.k_max {
            ek *= e;
            let fac = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64);
            if self.real {
                acc += 2.0 * (fac * self.coeffs[self.k_max + k] * ek).re;
            } else {
                acc += fac * self.coeffs[self.k_max + k] * ek
                    - fac * self.coeffs[self.k_max - k] * ek.conj();
            }
        }
        acc.re
    }

    /// Σ|ĝ(k)|, an upper bound for the sup norm.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Sobolev norm ‖g‖_{H^s} = (Σ (1+k²)^s |ĝ(k)|²)^{1/2}.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for k in -(self.k_max as i64)..=(self.k_max as i64) {
            let w = (1.0 + (k * k) as f64).powf(s);
            acc += w * self.coeff(k).norm_sqr();
        }
        acc.sqrt()
    }

    /// Raised-cosine tail damping: modes |k| ≤ K/2 untouched, smooth ramp to
    /// zero at K. Suppresses aliasing from compositions.
    pub fn damp_tail(&mut self) {
        let k0 = self.k_max / 2;
        if self.k_max == k0 {
            return;
        }
        for k in (k0 + 1)..=self.k_max {
            let t = (k - k0) as f64 / (self.k_max - k0) as f64;
            let w = 0.5 * (1.0 + (std::f64::consts::PI * t).cos());
            self.coeffs[self.k_max + k] *= w;
            self.coeffs[self.k_max - k] *= w;
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[self.k_max].re
    }
}

/// Solve v − v∘ρ_α = g mode-by-mode: v̂(k) = ĝ(k)/(1 − e^{2πikα}), v̂(0)=0.
///
/// `g` must have mean zero. A divisor below 1e−13 at a mode carrying data is
/// a resonance and is reported as an error; when a profile is supplied its
/// resonance flag triggers the same error without scanning.
pub fn solve_cohomological(
    g: &FourierFunction,
    alpha: f64,
    profile: Option<&DiophantineProfile>,
) -> Result<FourierFunction, ConjugacyError> {
    let gmax = g
        .coeffs
        .iter()
        .map(|c| c.norm())
        .fold(0.0_f64, f64::max);
    let carries = |c: Complex64| c.norm() > 1e-13 * (1.0 + gmax);
    if g.coeff(0).norm() > 1e-10 * (1.0 + gmax) {
        return Err(ConjugacyError::NonzeroMean(g.coeff(0).norm()));
    }
    if let Some(p) = profile {
        if let Some((_, q)) = p.resonant {
            if q as usize <= g.k_max && carries(g.coeff(q as i64)) {
                return Err(ConjugacyError::ResonantDivisor {
                    k: q as i64,
                    divisor: 0.0,
                });
            }
        }
    }
    let mut v = FourierFunction {
        coeffs: vec![Complex64::new(0.0, 0.0); 2 * g.k_max + 1],
        k_max: g.k_max,
        real: g.real,
    };
    for k in 1..=(g.k_max as i64) {
        for kk in [k, -k] {
            let c = g.coeff(kk);
            if c.norm() == 0.0 {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * kk as f64 * alpha;
            let divisor = Complex64::new(1.0 - ang.cos(), -ang.sin());
            if divisor.norm() < 1e-13 {
                if carries(c) {
                    return Err(ConjugacyError::ResonantDivisor {
                        k: kk,
                        divisor: divisor.norm(),
                    });
                }
                continue;
            }
            v.coeffs[(kk + g.k_max as i64) as usize] = c / divisor;
        }
    }
    Ok(v)
}

/// A circle diffeomorphism φ(x) = x + p(x) with periodic p, plus the data of
/// how well φ⁻¹∘b∘φ matches the rotation ρ_α.
#[derive(Debug, Clone)]
pub struct ConjugacyResult {
    /// mean-zero periodic part of φ
    pub periodic: FourierFunction,
    /// refined rotation number
    pub alpha: f64,
    /// sup-norm conjugacy defect after each accepted stage
    pub residual_history: Vec<f64>,
}

impl ConjugacyResult {
    pub fn phi(&self, x: f64) -> f64 {
        x + self.periodic.eval(x)
    }

    /// Inverse by bisection on the lift (tolerance 1e−13).
    pub fn phi_inv(&self, y: f64) -> f64 {
        let bound = self.periodic.coeff_l1() + 1e-9;
        let (mut lo, mut hi) = (y - bound, y + bound);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.phi(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// φ is a valid circle diffeomorphism: 1 + p' > 0 on a fine grid.
    pub fn is_monotone(&self) -> bool {
        let n = 4 * self.periodic.k_max().max(64);
        (0..n).all(|i| 1.0 + self.periodic.eval_derivative(i as f64 / n as f64) > 0.0)
    }

    /// The conjugacy defect β(x) = lift(φ⁻¹∘b∘φ)(x) − x − α on `grid`
    /// points, with the integer branch removed.
    pub fn defect<M: CircleMap>(&self, map: &M, grid: usize) -> Result<Vec<f64>, ConjugacyError> {
        let mut beta = Vec::with_capacity(grid);
        for i in 0..grid {
            let x = i as f64 / grid as f64;
            let y = self.phi(x);
            let yc = y.rem_euclid(1.0);
            let img = map.apply(yc)?;
            let z = y + (img - yc).rem_euclid(1.0);
            beta.push(self.phi_inv(z) - x - self.alpha);
        }
        let mean = beta.iter().sum::<f64>() / grid as f64;
        let shift = mean.round();
        if shift != 0.0 {
            for b in &mut beta {
                *b -= shift;
            }
        }
        Ok(beta)
    }

    /// max over 1024 grid points of |lift(φ⁻¹∘b∘φ)(θ) − θ − α|.
    pub fn residual<M: CircleMap>(&self, map: &M) -> Result<f64, ConjugacyError> {
        Ok(self
            .defect(map, 1024)?
            .iter()
            .fold(0.0_f64, |m, b| m.max(b.abs())))
    }
}

/// Default grid and truncation for the conjugacy pipeline.
pub const CONJUGACY_GRID: usize = 2048;
pub const CONJUGACY_K_MAX: usize = 512;

/// The mode whose solved amplitude |p̂(k)| ≥ 1/(4πk) would break
/// monotonicity of id+p, if its divisor is genuinely small.
fn dominant_small_divisor(
    g: &FourierFunction,
    p: &FourierFunction,
    alpha: f64,
) -> Option<(i64, f64)> {
    let deriv_budget: f64 = (1..=p.k_max as i64)
        .map(|k| 4.0 * std::f64::consts::PI * k as f64 * p.coeff(k).norm())
        .sum();
    if deriv_budget < 1.0 {
        return None;
    }
    (1..=g.k_max as i64)
        .filter(|&k| p.coeff(k).norm() > 0.0)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 * alpha;
            (k, Complex64::new(1.0 - ang.cos(), -ang.sin()).norm())
        })
        .filter(|&(_, d)| d < 1e-2)
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Weight w(t) = exp(−1/(t(1−t))) on (0,1): super-polynomial convergence of
/// the weighted Birkhoff average for Diophantine rotations.
fn birkhoff_weight(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

/// Seed conjugacy by the weighted Birkhoff average
/// h_N(θ) = Σ_n w(n/N)(Bⁿ(θ) − nα) / Σ_n w(n/N),
/// which converges to the conjugacy h with h∘b = h + α. Returns φ = h⁻¹
/// (by monotone interpolation), normalized to a mean-zero periodic part.
pub fn birkhoff_conjugacy<M: CircleMap + Sync>(
    map: &M,
    alpha: f64,
    n: usize,
    grid_size: usize,
) -> Result<ConjugacyResult, ConjugacyError> {
    use rayon::prelude::*;
    assert!(n >= 2 && grid_size >= 16);
    let weights: Vec<f64> = (1..n).map(|k| birkhoff_weight(k as f64 / n as f64)).collect();
    let wsum: f64 = weights.iter().sum();
    let h: Vec<f64> = (0..grid_size)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 / grid_size as f64;
            let orbit = crate::billiard::lift_orbit(map, theta, n - 1)?;
            let acc: f64 = weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * (orbit[k + 1] - (k + 1) as f64 * alpha))
                .sum();
            Ok(acc / wsum)
        })
        .collect::<Result<Vec<f64>, crate::billiard::BilliardError>>()?;
    // strict monotonicity of h as a circle lift
    let monotone = h.windows(2).all(|w| w[1] > w[0]) && h[0] + 1.0 > h[grid_size - 1];
    if !monotone {
        return Err(ConjugacyError::NonmonotoneResult);
    }
    // φ = h⁻¹ by piecewise-linear inversion on the periodic extension
    let phi_grid: Vec<f64> = (0..grid_size)
        .map(|j| invert_monotone_grid(&h, j as f64 / grid_size as f64))
        .collect();
    let k_max = CONJUGACY_K_MAX.min((grid_size - 1) / 2);
    let p_raw: Vec<f64> = phi_grid
        .iter()
        .enumerate()
        .map(|(j, &v)| v - j as f64 / grid_size as f64)
        .collect();
    let mut periodic = FourierFunction::from_grid(&p_raw, k_max);
    periodic.damp_tail();
    let result = ConjugacyResult {
        periodic,
        alpha,
        residual_history: Vec::new(),
    };
    let mut result = normalize_mean(result, grid_size);
    if !result.is_monotone() {
        return Err(ConjugacyError::NonmonotoneResult);
    }
    let r = result.residual(map)?;
    result.residual_history.push(r);
    Ok(result)
}

/// φ(y) for the piecewise-linear interpolant of h⁻¹, given h on a uniform
/// grid (h increasing, h(x+1) = h(x)+1).
fn invert_monotone_grid(h: &[f64], y: f64) -> f64 {
    let g = h.len();
    // shift y by integers so it lands in [h[0], h[0]+1)
    let shift = (y - h[0]).floor();
    let yy = y - shift;
    // find segment [h[i], h[i+1]) containing yy (h periodic: h[g] = h[0]+1)
    let mut lo = 0usize;
    let mut hi = g;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if h[mid] <= yy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h0 = h[lo];
    let h1 = if lo + 1 == g { h[0] + 1.0 } else { h[lo + 1] };
    let x0 = lo as f64 / g as f64;
    let t = (yy - h0) / (h1 - h0);
    x0 + t / g as f64 + shift
}

/// Precompose with a rotation so the periodic part has mean zero.
fn normalize_mean(result: ConjugacyResult, grid: usize) -> ConjugacyResult {
    let c = -result.periodic.mean();
    if c.abs() < 1e-15 {
        return result;
    }
    let vals: Vec<f64> = (0..grid)
        .map(|i| {
            let x = i as f64 / grid as f64;
            c + result.periodic.eval(x + c)
        })
        .collect();
    let mut periodic = FourierFunction::from_grid(&vals, result.periodic.k_max());
    periodic.damp_tail();
    ConjugacyResult { periodic, ..result }
}

/// KAM-style refinement: repeatedly measure the defect β, absorb mean(β)
/// into α, solve the cohomological equation for the correction p, and
/// compose φ ← φ∘(id + p). Residuals typically drop superlinearly for
/// Diophantine α.
pub fn kam_refine<M: CircleMap>(
    map: &M,
    initial: &ConjugacyResult,
    iterations: usize,
) -> Result<ConjugacyResult, ConjugacyError> {
    let grid = CONJUGACY_GRID;
    let mut cur = initial.clone();
    if cur.residual_history.is_empty() {
        let r = cur.residual(map)?;
        cur.residual_history.push(r);
    }
    let mut cur_beta = cur.defect(map, grid)?;
    let mut increased_last_step = false;
    for _ in 0..iterations {
        let cur_sup = cur_beta.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
        if cur_sup < 1e-13 {
            break; // already a rotation to machine precision
        }
        let candidate = kam_step(&cur, &cur_beta, grid)?;
        let cand_beta = candidate.defect(map, grid)?;
        let cand_sup = cand_beta.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
        if cand_sup >= cur_sup {
            if cand_sup > 2.0 * cur_sup {
                // clearly growing; accept once so a transient can recover,
                // two in a row is divergence
                if increased_last_step {
                    return Err(ConjugacyError::DivergenceDetected(cur_sup, cand_sup));
                }
                increased_last_step = true;
            } else {
                break; // stalled at the accuracy floor; keep current φ
            }
        } else {
            increased_last_step = false;
        }
        let mut next = candidate;
        let r = next.residual(map)?;
        next.residual_history.push(r);
        cur = next;
        cur_beta = cand_beta;
    }
    Ok(cur)
}

/// One KAM composition: absorb mean(β) into α, solve the cohomological
/// equation for the correction p, and return φ∘(id+p) (not yet accepted).
fn kam_step(
    cur: &ConjugacyResult,
    beta: &[f64],
    grid: usize,
) -> Result<ConjugacyResult, ConjugacyError> {
    let mean = beta.iter().sum::<f64>() / grid as f64;
    let alpha = cur.alpha + mean;
    let g_vals: Vec<f64> = beta.iter().map(|b| -(b - mean)).collect();
    let mut g = FourierFunction::from_grid(&g_vals, cur.periodic.k_max());
    g.damp_tail();
    g.set_coeff(0, Complex64::new(0.0, 0.0));
    let p = solve_cohomological(&g, alpha, None)?;
    // A small divisor that escaped the hard threshold still wrecks the step
    // when the amplified correction can no longer be a diffeomorphism;
    // diagnose it as the resonance it is.
    if let Some((k, divisor)) = dominant_small_divisor(&g, &p, alpha) {
        return Err(ConjugacyError::ResonantDivisor { k, divisor });
    }
    // φ ← φ∘(id+p): new periodic part  q(x) = p(x) + p_old(x + p(x))
    let q_vals: Vec<f64> = (0..grid)
        .map(|i| {
            let x = i as f64 / grid as f64;
            let px = p.eval(x);
            px + cur.periodic.eval(x + px)
        })
        .collect();
    let mut periodic = FourierFunction::from_grid(&q_vals, cur.periodic.k_max());
    periodic.damp_tail();
    let next = ConjugacyResult {
        periodic,
        alpha,
        residual_history: cur.residual_history.clone(),
    };
    let next = normalize_mean(next, grid);
    if !next.is_monotone() {
        return Err(ConjugacyError::NonmonotoneResult);
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{diophantine_profile, golden_mean};
    use crate::billiard::{PerturbedRotation, RigidRotation};

    fn cos_mode(k_max: usize) -> FourierFunction {
        // g(x) = cos 2πx
        let mut g = FourierFunction::zero(k_max);
        g.set_coeff(1, Complex64::new(0.5, 0.0));
        g
    }

    #[test]
    fn zero_input_gives_zero_solution() {
        let g = FourierFunction::zero(16);
        let v = solve_cohomological(&g, golden_mean(), None).unwrap();
        assert!(v.coeff_l1() == 0.0);
    }

    #[test]
    fn cosine_divisor_formula() {
        let alpha = golden_mean();
        let g = cos_mode(8);
        let v = solve_cohomological(&g, alpha, None).unwrap();
        let ang = 2.0 * std::f64::consts::PI * alpha;
        let expect = Complex64::new(0.5, 0.0)
            / Complex64::new(1.0 - ang.cos(), -ang.sin());
        assert!((v.coeff(1) - expect).norm() < 1e-15);
        assert!((v.coeff(-1) - expect.conj()).norm() < 1e-15);
    }

    #[test]
    fn round_trip_reconstructs_rhs() {
        // (I − ρ_α^*) v = g resynthesized on a grid
        let mut rng = 12345u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let alpha = golden_mean();
        let k_max = 64;
        let mut g = FourierFunction::zero(k_max);
        for k in 1..=k_max as i64 {
            let decay = 1.0 / (1.0 + (k * k) as f64);
            g.set_coeff(k, Complex64::new(next() * decay, next() * decay));
        }
        let v = solve_cohomological(&g, alpha, None).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..1024 {
            let x = i as f64 / 1024.0;
            let lhs = v.eval(x) - v.eval(x + alpha);
            worst = worst.max((lhs - g.eval(x)).abs());
        }
        assert!(worst < 1e-10, "sup error {worst}");
    }

    #[test]
    fn resonant_alpha_rejected() {
        let mut g = FourierFunction::zero(8);
        g.set_coeff(2, Complex64::new(0.3, 0.0));
        let err = solve_cohomological(&g, 0.5, None);
        assert!(matches!(err, Err(ConjugacyError::ResonantDivisor { k: 2, .. })));
    }

    #[test]
    fn resonance_with_zero_mode_passes() {
        // α = 1/2 but only mode 1 carries data: divisor is 2, no resonance
        let g = cos_mode(8);
        let v = solve_cohomological(&g, 0.5, None).unwrap();
        assert!((v.coeff(1).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn profile_resonance_short_circuits() {
        let prof = diophantine_profile(0.5, 100, 1e-12);
        let mut g = FourierFunction::zero(8);
        g.set_coeff(2, Complex64::new(1.0, 0.0));
        let err = solve_cohomological(&g, 0.5, Some(&prof));
        assert!(matches!(err, Err(ConjugacyError::ResonantDivisor { .. })));
    }

    #[test]
    fn sobolev_bound_witness() {
        // ‖v‖_{H^s} ≤ (1/ĉ)·‖g‖_{H^{s+β+1}} for golden α
        let alpha = golden_mean();
        let prof = diophantine_profile(alpha, 10_000, 1e-12);
        let c_inv = 1.0 / prof.c;
        let mut rng = 777u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..20 {
            let mut g = FourierFunction::zero(64);
            for k in 1..=64i64 {
                let decay = 1.0 / (1.0 + (k * k * k * k) as f64);
                g.set_coeff(k, Complex64::new(next() * decay, next() * decay));
            }
            let v = solve_cohomological(&g, alpha, None).unwrap();
            for s in [0.0, 1.0, 2.0] {
                let lhs = v.sobolev_norm(s);
                let rhs = c_inv * g.sobolev_norm(s + prof.beta + 1.0);
                assert!(lhs <= rhs * (1.0 + 1e-12), "s={s}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn birkhoff_on_rigid_rotation_is_identity() {
        let alpha = golden_mean();
        let map = RigidRotation(alpha);
        let res = birkhoff_conjugacy(&map, alpha, 2000, 256).unwrap();
        assert!(res.periodic.coeff_l1() < 1e-10);
        assert!(res.residual_history[0] < 1e-12);
    }

    /// ψ⁻¹∘ρ_α∘ψ with ψ(x) = x + a sin(2πx): rotation number exactly α.
    struct ConjugatedRotation {
        alpha: f64,
        a: f64,
    }

    impl ConjugatedRotation {
        fn psi(&self, x: f64) -> f64 {
            x + self.a * (2.0 * std::f64::consts::PI * x).sin()
        }
        fn psi_inv(&self, y: f64) -> f64 {
            let (mut lo, mut hi) = (y - self.a, y + self.a);
            for _ in 0..70 {
                let mid = 0.5 * (lo + hi);
                if self.psi(mid) < y {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }

    impl CircleMap for ConjugatedRotation {
        fn apply(&self, theta: f64) -> Result<f64, BilliardError> {
            Ok(self.psi_inv(self.psi(theta) + self.alpha).rem_euclid(1.0))
        }
    }

    #[test]
    fn birkhoff_residual_decreases_with_n() {
        let alpha = golden_mean();
        let map = ConjugatedRotation { alpha, a: 0.03 };
        // small n so the averaging error dominates the ~1/grid² inversion
        // floor; doubling n must cut the residual
        let r1 = birkhoff_conjugacy(&map, alpha, 10, 256)
            .unwrap()
            .residual_history[0];
        let r2 = birkhoff_conjugacy(&map, alpha, 20, 256)
            .unwrap()
            .residual_history[0];
        let r3 = birkhoff_conjugacy(&map, alpha, 60, 256)
            .unwrap()
            .residual_history[0];
        assert!(r2 < 0.7 * r1, "r1={r1:.3e} r2={r2:.3e}");
        assert!(r3 < 0.7 * r2, "r2={r2:.3e} r3={r3:.3e}");
    }

    #[test]
    fn kam_converges_on_perturbed_rotation() {
        let map = PerturbedRotation {
            alpha: golden_mean(),
            eps: 0.05,
        };
        let seed = ConjugacyResult {
            periodic: FourierFunction::zero(CONJUGACY_K_MAX),
            alpha: golden_mean(),
            residual_history: Vec::new(),
        };
        let out = kam_refine(&map, &seed, 6).unwrap();
        let hist = &out.residual_history;
        assert!(
            hist.last().unwrap() < &1e-9,
            "history {:?}",
            hist
        );
        // superlinear early decay: ≥10× per iteration once started
        for w in hist.windows(2).skip(1).take(2) {
            assert!(w[1] <= w[0] / 10.0, "history {:?}", hist);
        }
        // residuals nonincreasing across accepted iterations
        for w in hist.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9));
        }
        assert!(out.is_monotone());
    }

    #[test]
    fn kam_fixed_point_unchanged() {
        let alpha = golden_mean();
        let map = RigidRotation(alpha);
        let seed = ConjugacyResult {
            periodic: FourierFunction::zero(64),
            alpha,
            residual_history: Vec::new(),
        };
        let out = kam_refine(&map, &seed, 4).unwrap();
        assert!(out.periodic.coeff_l1() < 1e-12);
        assert!((out.alpha - alpha).abs() < 1e-12);
    }

    #[test]
    fn kam_resonant_alpha_surfaces_divisor() {
        let map = PerturbedRotation {
            alpha: 0.5,
            eps: 0.05,
        };
        let seed = ConjugacyResult {
            periodic: FourierFunction::zero(CONJUGACY_K_MAX),
            alpha: 0.5,
            residual_history: Vec::new(),
        };
        let err = kam_refine(&map, &seed, 6);
        assert!(
            matches!(err, Err(ConjugacyError::ResonantDivisor { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn fourier_from_grid_round_trip() {
        let vals: Vec<f64> = (0..128)
            .map(|i| {
                let x = i as f64 / 128.0;
                0.3 + 0.2 * (2.0 * std::f64::consts::PI * x).sin()
                    - 0.1 * (2.0 * std::f64::consts::PI * 3.0 * x).cos()
            })
            .collect();
        let f = FourierFunction::from_grid(&vals, 8);
        for (i, v) in vals.iter().enumerate() {
            assert!((f.eval(i as f64 / 128.0) - v).abs() < 1e-12);
        }
        // periodicity
        assert!((f.eval(0.3) - f.eval(1.3)).abs() < 1e-12);
    }
}
