//! Continued fractions and finite-scale Diophantine profiling.
//!
//! True Diophantinity is undecidable from a float; everything here is
//! explicitly "at scale q_max" and says so in the output types. The profile
//! reports the tightest pair (ĉ, β̂) with |x − p/q| ≥ ĉ/q^{2+β̂} verified for
//! every q ≤ q_max.

use serde::Serialize;

/// Simple continued fraction x = a₀ + 1/(a₁ + 1/(a₂ + …)).
#[derive(Debug, Clone, Serialize)]
pub struct ContinuedFraction {
    pub quotients: Vec<i64>,
    /// Expansion stopped because the remainder fell below the rational
    /// detection threshold.
    pub terminated: bool,
}

impl ContinuedFraction {
    /// Convergents p_k/q_k; stops early if the recurrence overflows.
    pub fn convergents(&self) -> Vec<(i64, u64)> {
        let mut out = Vec::with_capacity(self.quotients.len());
        let (mut p0, mut q0) = (1i64, 0u64);
        let (mut p1, mut q1) = (self.quotients[0], 1u64);
        out.push((p1, q1));
        for &a in &self.quotients[1..] {
            let p2 = a.checked_mul(p1).and_then(|v| v.checked_add(p0));
            let q2 = (a as u64).checked_mul(q1).and_then(|v| v.checked_add(q0));
            let (Some(p2), Some(q2)) = (p2, q2) else {
                break;
            };
            (p0, q0) = (p1, q1);
            (p1, q1) = (p2, q2);
            out.push((p1, q1));
        }
        out
    }

    pub fn value(&self) -> f64 {
        let mut v = f64::INFINITY;
        for &a in self.quotients.iter().rev() {
            v = a as f64 + 1.0 / v;
        }
        v
    }
}

/// Maximum expansion depth: beyond ~40 quotients a double carries no
/// information.
pub const MAX_CF_DEPTH: usize = 40;

/// Euclidean continued-fraction expansion of `x`, truncated at `depth`
/// quotients or when the remainder drops below 1e−14 (rational detection).
pub fn continued_fraction(x: f64, depth: usize) -> ContinuedFraction {
    let depth = depth.min(MAX_CF_DEPTH);
    let mut quotients = Vec::with_capacity(depth);
    let mut y = x;
    let mut terminated = false;
    for _ in 0..depth {
        let mut a = y.floor();
        let mut frac = y - a;
        // a remainder this close to 1 is roundoff from a rational input;
        // snap up rather than emit a spurious huge quotient
        if frac > 1.0 - 1e-11 {
            a += 1.0;
            frac = 0.0;
        }
        quotients.push(a as i64);
        if frac < 1e-14 {
            terminated = true;
            break;
        }
        y = 1.0 / frac;
    }
    // canonical form: a terminating expansion never ends in quotient 1
    if terminated && quotients.len() > 1 && *quotients.last().unwrap() == 1 {
        quotients.pop();
        *quotients.last_mut().unwrap() += 1;
    }
    ContinuedFraction {
        quotients,
        terminated,
    }
}

/// Per-convergent approximation quality.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergentQuality {
    pub p: i64,
    pub q: u64,
    /// q·‖q x‖ = q²·|x − p/q|, the scale-invariant quality measure.
    pub quality: f64,
}

/// Diophantine classification of a number at scale `q_max`.
#[derive(Debug, Clone, Serialize)]
pub struct DiophantineProfile {
    pub x: f64,
    pub q_max: u64,
    pub convergents: Vec<ConvergentQuality>,
    /// Fitted exponent: least-squares slope of −log(quality) against log q
    /// over the convergents, clamped at 0. Bounded-type numbers give ≈ 0.
    pub beta: f64,
    /// ĉ = min over q ≤ q_max of q^{1+β̂}·‖qx‖; the bound
    /// |x − p/q| ≥ ĉ/q^{2+β̂} then holds for every q ≤ q_max by construction
    /// (re-verified before returning).
    pub c: f64,
    /// Some(p/q) when |x − p/q| < tol for some q ≤ q_max.
    pub resonant: Option<(i64, u64)>,
}

/// Distance from q·x to the nearest integer.
fn dist_to_int(y: f64) -> f64 {
    (y - y.round()).abs()
}

/// Brute-force Diophantine profile of `x` over denominators q ≤ q_max.
pub fn diophantine_profile(x: f64, q_max: u64, tol: f64) -> DiophantineProfile {
    assert!(q_max >= 2, "q_max must be at least 2");
    let cf = continued_fraction(x, MAX_CF_DEPTH);
    let convergents: Vec<ConvergentQuality> = cf
        .convergents()
        .into_iter()
        .filter(|&(_, q)| q >= 1 && q <= q_max)
        .map(|(p, q)| ConvergentQuality {
            p,
            q,
            quality: q as f64 * dist_to_int(q as f64 * x),
        })
        .collect();

    // β̂: LS slope of −log(quality) vs log q over convergents with q ≥ 2;
    // fewer than 3 points give no slope evidence, so bounded type (0).
    let pts: Vec<(f64, f64)> = convergents
        .iter()
        .filter(|c| c.q >= 2 && c.quality > 0.0)
        .map(|c| ((c.q as f64).ln(), -(c.quality.ln())))
        .collect();
    let beta = if pts.len() >= 3 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        ((n * sxy - sx * sy) / (n * sxx - sx * sx)).max(0.0)
    } else {
        0.0
    };

    // resonance flag and ĉ by brute force over all q
    let mut resonant = None;
    let mut c = f64::INFINITY;
    for q in 1..=q_max {
        let qf = q as f64;
        let d = dist_to_int(qf * x); // = q·|x − p/q|
        if d / qf < tol && resonant.is_none() {
            let p = (qf * x).round() as i64;
            let g = gcd(p.unsigned_abs(), q);
            resonant = Some((p / g as i64, q / g));
        }
        let bound = qf.powf(1.0 + beta) * d;
        if bound < c {
            c = bound;
        }
    }
    let profile = DiophantineProfile {
        x,
        q_max,
        convergents,
        beta,
        c,
        resonant,
    };
    debug_assert!(profile.self_verify());
    profile
}

impl DiophantineProfile {
    /// Re-check |x − p/q| ≥ ĉ/q^{2+β̂} for every q ≤ q_max.
    pub fn self_verify(&self) -> bool {
        (1..=self.q_max).all(|q| {
            let qf = q as f64;
            qf * dist_to_int(qf * self.x) >= self.c / qf.powf(1.0 + self.beta) - 1e-18
        })
    }

    /// Smallest admissible |k| so that an eigenvalue within ε of the target
    /// is arithmetically possible: (ĉ/ε)^{1/(3+β̂)}.
    pub fn cluster_lower_bound(&self, eps: f64) -> f64 {
        (self.c / eps).powf(1.0 / (3.0 + self.beta))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// (√5 − 1)/2, the golden-mean conjugate — the canonical bounded-type number.
pub fn golden_mean() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}
