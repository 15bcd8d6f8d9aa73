//! The chess billiard map on a domain boundary.
//!
//! For a λ-simple domain, each level line of ℓ± meets ∂Ω exactly twice. The
//! involutions γ± swap the two intersection points while fixing the critical
//! points, and the billiard map is the orientation-preserving composition
//! b = γ⁺ ∘ γ⁻. Orbits are followed through their monotone lift, which is
//! what the rotation number is read off from.

use crate::geometry::{
    check_lambda_simple, ell_real, BoundaryCurve, CriticalKind, GeometryError, Sign,
    SimplicityReport,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BilliardError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("domain is not lambda-simple at lambda={lambda}: {reason}")]
    NotSimple { lambda: f64, reason: String },
    #[error("level line through theta={0} meets a polygon vertex")]
    CornerHit(f64),
    #[error("orbit keeps returning to polygon corners after {0} perturbed retries")]
    PeriodicCornerOrbit(usize),
    #[error("level line crosses the boundary {0} times; expected 2 (non-convex polygon?)")]
    NonSimpleLevelLine(usize),
}

/// An orientation-preserving circle map θ ↦ θ' on [0,1).
///
/// Implemented by [`ChessBilliard`] and by analytic test maps; the rotation
/// and conjugacy machinery is generic over this trait.
pub trait CircleMap {
    fn apply(&self, theta: f64) -> Result<f64, BilliardError>;
}

/// Rigid rotation x ↦ x + α, the reference integrable case.
#[derive(Debug, Clone, Copy)]
pub struct RigidRotation(pub f64);

impl CircleMap for RigidRotation {
    fn apply(&self, theta: f64) -> Result<f64, BilliardError> {
        Ok((theta + self.0).rem_euclid(1.0))
    }
}

/// x ↦ x + α + ε sin(2πx), the standard perturbed rotation.
#[derive(Debug, Clone, Copy)]
pub struct PerturbedRotation {
    pub alpha: f64,
    pub eps: f64,
}

impl CircleMap for PerturbedRotation {
    fn apply(&self, theta: f64) -> Result<f64, BilliardError> {
        Ok((theta + self.alpha + self.eps * (2.0 * std::f64::consts::PI * theta).sin())
            .rem_euclid(1.0))
    }
}

/// Fixed-point snap: if ℓ± at θ is this close to a critical value, γ±
/// returns θ itself.
const FIXED_POINT_TOL: f64 = 1e-12;
/// Corner-hit perturbation magnitude and retry budget for orbits.
const CORNER_EPS: f64 = 1e-12;
const CORNER_RETRIES: usize = 100;

#[derive(Debug, Clone)]
struct SmoothData {
    report: SimplicityReport,
}

/// A (domain, λ) pair with everything needed to evaluate γ± and b.
#[derive(Debug, Clone)]
pub struct ChessBilliard {
    curve: BoundaryCurve,
    lambda: f64,
    smooth: Option<SmoothData>,
}

impl ChessBilliard {
    pub fn new(curve: BoundaryCurve, lambda: f64) -> Result<Self, BilliardError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(GeometryError::LambdaOutOfRange(lambda).into());
        }
        let smooth = match &curve {
            BoundaryCurve::Fourier(_) => {
                let report = check_lambda_simple(&curve, lambda, 1e-8)?;
                if !report.is_simple {
                    return Err(BilliardError::NotSimple {
                        lambda,
                        reason: report.reason.unwrap_or_default(),
                    });
                }
                Some(SmoothData { report })
            }
            BoundaryCurve::Polygon(_) => None,
        };
        Ok(Self {
            curve,
            lambda,
            smooth,
        })
    }

    pub fn curve(&self) -> &BoundaryCurve {
        &self.curve
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn simplicity(&self) -> Option<&SimplicityReport> {
        self.smooth.as_ref().map(|s| &s.report)
    }

    fn ell(&self, theta: f64, sign: Sign) -> f64 {
        ell_real(self.curve.point(theta), self.lambda, sign)
    }

    /// The involution γ±: the other boundary point on the same ℓ± level line.
    pub fn gamma(&self, sign: Sign, theta: f64) -> Result<f64, BilliardError> {
        let theta = theta.rem_euclid(1.0);
        match &self.curve {
            BoundaryCurve::Fourier(_) => self.gamma_smooth(sign, theta),
            BoundaryCurve::Polygon(p) => self.gamma_polygon(p, sign, theta),
        }
    }

    fn gamma_smooth(&self, sign: Sign, theta: f64) -> Result<f64, BilliardError> {
        let data = self.smooth.as_ref().expect("smooth data for fourier curve");
        let pts = data.report.points(sign);
        let (min_pt, max_pt) = match (pts[0].kind, pts[1].kind) {
            (CriticalKind::Minimum, CriticalKind::Maximum) => (&pts[0], &pts[1]),
            _ => (&pts[1], &pts[0]),
        };
        let c = self.ell(theta, sign);
        let scale = 1.0 + c.abs();
        if (c - min_pt.value).abs() < FIXED_POINT_TOL * scale
            || (c - max_pt.value).abs() < FIXED_POINT_TOL * scale
        {
            return Ok(theta);
        }
        // The two critical points split the circle into two arcs on which
        // ℓ± ∘ x is strictly monotone. Find which arc θ is on, then bracket
        // the unique solution on the opposite arc.
        let (a, b) = (min_pt.theta, max_pt.theta);
        // arc from a to b going upward through increasing θ (lift b above a)
        let b_up = if b > a { b } else { b + 1.0 };
        let th_lift = if theta >= a { theta } else { theta + 1.0 };
        let on_up_arc = th_lift > a && th_lift < b_up;
        // opposite arc endpoints in lift coordinates (from max to min+1)
        let (lo, hi) = if on_up_arc {
            (b_up, a + 1.0)
        } else {
            (a, b_up)
        };
        // ℓ values at (lo,hi) are (min,max) or (max,min); bisect for c
        let f = |t: f64| self.ell(t, sign) - c;
        let (mut lo, mut hi) = (lo, hi);
        let increasing = f(hi) > f(lo);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if (increasing && fm > 0.0) || (!increasing && fm < 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Newton polish on the level equation
        if let BoundaryCurve::Fourier(fc) = &self.curve {
            let sq = (1.0 - self.lambda * self.lambda).sqrt();
            for _ in 0..3 {
                let d = fc.derivative(x);
                let df = sign.factor() * d[0] / self.lambda + d[1] / sq;
                if df.abs() < 1e-14 {
                    break;
                }
                let step = f(x) / df;
                if !(x - step > lo - 1e-12 && x - step < hi + 1e-12) {
                    break;
                }
                x -= step;
            }
        }
        Ok(x.rem_euclid(1.0))
    }

    fn gamma_polygon(
        &self,
        poly: &crate::geometry::Polygon,
        sign: Sign,
        theta: f64,
    ) -> Result<f64, BilliardError> {
        if poly.vertex_distance(theta) < CORNER_EPS {
            return Err(BilliardError::CornerHit(theta));
        }
        let n = poly.edge_count();
        let c = self.ell(theta, sign);
        let verts = poly.vertices();
        let lv: Vec<f64> = verts
            .iter()
            .map(|&v| ell_real(v, self.lambda, sign))
            .collect();
        let scale: f64 = lv.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-30);
        let mut hits: Vec<f64> = Vec::with_capacity(2);
        for e in 0..n {
            let la = lv[e] - c;
            let lb = lv[(e + 1) % n] - c;
            if la.abs() < 1e-14 * scale || lb.abs() < 1e-14 * scale {
                return Err(BilliardError::CornerHit(theta));
            }
            if la * lb < 0.0 {
                let t = la / (la - lb);
                let (s0, s1) = poly.edge_span(e);
                hits.push(s0 + t * (s1 - s0));
            }
        }
        if hits.len() != 2 {
            return Err(BilliardError::NonSimpleLevelLine(hits.len()));
        }
        // return the intersection that is not θ itself
        let d0 = circ_dist(hits[0], theta);
        let d1 = circ_dist(hits[1], theta);
        Ok(if d0 > d1 { hits[0] } else { hits[1] })
    }

    /// One step of the billiard: b(θ) = γ⁺(γ⁻(θ)).
    pub fn chess_billiard(&self, theta: f64) -> Result<f64, BilliardError> {
        self.gamma(Sign::Plus, self.gamma(Sign::Minus, theta)?)
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl CircleMap for ChessBilliard {
    fn apply(&self, theta: f64) -> Result<f64, BilliardError> {
        self.chess_billiard(theta)
    }
}

/// Monotone lift values B⁰(θ₀), …, Bⁿ(θ₀): each circle-map increment is
/// unwrapped into [0,1), so B(θ+1) = B(θ)+1 holds by construction.
///
/// Corner hits (polygons) are retried with a ±1e−12 perturbation of the
/// current point; a budget of 100 retries per orbit guards against periodic
/// corner orbits.
pub fn lift_orbit<M: CircleMap>(
    map: &M,
    theta0: f64,
    n: usize,
) -> Result<Vec<f64>, BilliardError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(theta0);
    let mut lift = theta0;
    let mut circ = theta0.rem_euclid(1.0);
    let mut retries = 0usize;
    let mut k = 0usize;
    while k < n {
        match map.apply(circ) {
            Ok(next) => {
                let inc = (next - circ).rem_euclid(1.0);
                lift += inc;
                circ = next;
                out.push(lift);
                k += 1;
            }
            Err(BilliardError::CornerHit(_)) => {
                retries += 1;
                if retries > CORNER_RETRIES {
                    return Err(BilliardError::PeriodicCornerOrbit(retries));
                }
                // alternate the perturbation side
                let eps = if retries % 2 == 1 {
                    CORNER_EPS
                } else {
                    -2.0 * CORNER_EPS
                };
                circ = (circ + eps).rem_euclid(1.0);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
