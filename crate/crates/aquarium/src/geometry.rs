//! Domain boundaries and the characteristic linear functionals ℓ±.
//!
//! A boundary is a positively oriented closed curve parametrized by
//! θ ∈ [0,1) = ℝ/ℤ, either a smooth curve given by Fourier coefficients or a
//! polygon with exact vertices. The functionals
//!
//! ```text
//! ℓ±(x, ω) = ±x₁/ω + x₂/√(1−ω²)
//! ```
//!
//! drive everything downstream: their level lines are the characteristics of
//! the hyperbolic operator at real ω, and their critical points on the
//! boundary decide whether the billiard involutions are well defined
//! (λ-simplicity).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Disk radius used throughout: the circle `|x| ≤ 1/(2π)`, so that the
/// boundary has unit length and arclength coincides with θ.
pub const DISK_RADIUS: f64 = 1.0 / (2.0 * std::f64::consts::PI);

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("lambda must lie in (0,1), got {0}")]
    LambdaOutOfRange(f64),
    #[error("absorption h must be >= 0 and finite, got {0}")]
    InvalidAbsorption(f64),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("critical-point grid too coarse: sign changes closer than 2 cells near theta={0}")]
    GridTooCoarse(f64),
    #[error("domain json: {0}")]
    BadDomainJson(String),
}

/// Characteristic branch: the sign in ℓ±.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// Spectral parameter ω = λ ± ih with 0 < λ < 1, h ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub lambda: f64,
    pub h: f64,
    /// Half-plane: +1 for ω = λ + ih, −1 for λ − ih.
    pub half_plane: i8,
}

impl SpectralParameter {
    pub fn new(lambda: f64, h: f64, half_plane: i8) -> Result<Self, GeometryError> {
        if !(lambda > 0.0 && lambda < 1.0) || !lambda.is_finite() {
            return Err(GeometryError::LambdaOutOfRange(lambda));
        }
        if !(h >= 0.0 && h.is_finite()) {
            return Err(GeometryError::InvalidAbsorption(h));
        }
        Ok(Self {
            lambda,
            h,
            half_plane: if half_plane >= 0 { 1 } else { -1 },
        })
    }

    /// Real λ on the spectral interval (h = 0).
    pub fn real(lambda: f64) -> Result<Self, GeometryError> {
        Self::new(lambda, 0.0, 1)
    }

    pub fn omega(&self) -> Complex64 {
        Complex64::new(self.lambda, self.h * self.half_plane as f64)
    }
}

/// ℓ±(x, ω) with the square root on the principal branch ℂ∖(−∞,0].
pub fn ell(x: [f64; 2], omega: Complex64, sign: Sign) -> Complex64 {
    let root = (Complex64::new(1.0, 0.0) - omega * omega).sqrt();
    sign.factor() * x[0] / omega + x[1] / root
}

/// ℓ±(x, λ) for real λ ∈ (0,1); avoids complex arithmetic on hot paths.
pub fn ell_real(x: [f64; 2], lambda: f64, sign: Sign) -> f64 {
    sign.factor() * x[0] / lambda + x[1] / (1.0 - lambda * lambda).sqrt()
}

/// Smooth closed curve x(θ) = Σ_{|n|≤M} c_n e^{2πinθ}, c_{−n} = conj(c_n).
#[derive(Debug, Clone)]
pub struct FourierCurve {
    /// (n, coefficient of x₁, coefficient of x₂) with n ≥ 0; the negative
    /// modes are implied by reality.
    coeffs: Vec<(u32, Complex64, Complex64)>,
}

impl FourierCurve {
    /// Point on the curve.
    pub fn point(&self, theta: f64) -> [f64; 2] {
        self.sum(theta, 0)
    }

    /// dx/dθ.
    pub fn derivative(&self, theta: f64) -> [f64; 2] {
        self.sum(theta, 1)
    }

    /// d²x/dθ².
    pub fn second_derivative(&self, theta: f64) -> [f64; 2] {
        self.sum(theta, 2)
    }

    fn sum(&self, theta: f64, order: u32) -> [f64; 2] {
        let mut x = [0.0; 2];
        for &(n, cx, cy) in &self.coeffs {
            let ang = TWO_PI * n as f64 * theta;
            let e = Complex64::new(ang.cos(), ang.sin());
            // (2πin)^order e^{2πinθ}; reality gives twice the real part for n>0
            let fac = Complex64::new(0.0, TWO_PI * n as f64).powu(order);
            let vx = fac * cx * e;
            let vy = fac * cy * e;
            if n == 0 {
                if order == 0 {
                    x[0] += vx.re;
                    x[1] += vy.re;
                }
            } else {
                x[0] += 2.0 * vx.re;
                x[1] += 2.0 * vy.re;
            }
        }
        x
    }
}

/// Convex or general simple polygon, counterclockwise vertices, with edge
/// breakpoints in θ proportional to arclength.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    /// breaks[i] = θ at which edge i starts; breaks[len] = 1.
    breaks: Vec<f64>,
}

impl Polygon {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// θ-interval of edge i.
    pub fn edge_span(&self, i: usize) -> (f64, f64) {
        (self.breaks[i], self.breaks[i + 1])
    }

    /// Edge index and local parameter t ∈ [0,1) for a boundary parameter θ.
    pub fn locate(&self, theta: f64) -> (usize, f64) {
        let th = theta.rem_euclid(1.0);
        // breaks is short (polygon), linear scan is fine
        let mut i = self.vertices.len() - 1;
        for e in 0..self.vertices.len() {
            if th < self.breaks[e + 1] {
                i = e;
                break;
            }
        }
        let (a, b) = (self.breaks[i], self.breaks[i + 1]);
        (i, (th - a) / (b - a))
    }

    pub fn point(&self, theta: f64) -> [f64; 2] {
        let (i, t) = self.locate(theta);
        let p = self.vertices[i];
        let q = self.vertices[(i + 1) % self.vertices.len()];
        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    }

    /// Distance (mod 1) from θ to the nearest vertex parameter.
    pub fn vertex_distance(&self, theta: f64) -> f64 {
        let th = theta.rem_euclid(1.0);
        self.breaks
            .iter()
            .map(|b| {
                let d = (th - b).rem_euclid(1.0);
                d.min(1.0 - d)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// A parametrized closed boundary ∂Ω.
#[derive(Debug, Clone)]
pub enum BoundaryCurve {
    Fourier(FourierCurve),
    Polygon(Polygon),
}

impl BoundaryCurve {
    /// The disk |x| ≤ 1/(2π), parametrized by arclength.
    pub fn disk() -> Self {
        let c = DISK_RADIUS / 2.0;
        BoundaryCurve::Fourier(FourierCurve {
            coeffs: vec![(1, Complex64::new(c, 0.0), Complex64::new(0.0, -c))],
        })
    }

    /// Build a Fourier curve from raw coefficients (n may be negative;
    /// conjugate symmetry is verified).
    pub fn fourier(raw: &[(i32, Complex64, Complex64)]) -> Result<Self, GeometryError> {
        if raw.is_empty() || raw.len() > 4096 {
            return Err(GeometryError::InvalidDomain(
                "fourier coefficient list empty or too long".into(),
            ));
        }
        let mut pos: std::collections::BTreeMap<u32, (Complex64, Complex64)> =
            std::collections::BTreeMap::new();
        let mut neg: std::collections::BTreeMap<u32, (Complex64, Complex64)> =
            std::collections::BTreeMap::new();
        for &(n, cx, cy) in raw {
            if !(cx.re.is_finite() && cx.im.is_finite() && cy.re.is_finite() && cy.im.is_finite())
            {
                return Err(GeometryError::InvalidDomain(
                    "non-finite fourier coefficient".into(),
                ));
            }
            if n.unsigned_abs() > 2048 {
                return Err(GeometryError::InvalidDomain("mode index too large".into()));
            }
            let entry = if n >= 0 {
                pos.entry(n as u32)
            } else {
                neg.entry(n.unsigned_abs())
            }
            .or_insert((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
            entry.0 += cx;
            entry.1 += cy;
        }
        // reality: c_{-n} must equal conj(c_n); a missing side is implied by
        // the present one, both present are checked.
        for (n, &(cx, cy)) in &neg {
            match pos.get(n) {
                Some(&(px, py)) => {
                    if (px.conj() - cx).norm() > 1e-12 || (py.conj() - cy).norm() > 1e-12 {
                        return Err(GeometryError::InvalidDomain(format!(
                            "coefficients for modes ±{n} are not conjugate-symmetric"
                        )));
                    }
                }
                None => {
                    pos.insert(*n, (cx.conj(), cy.conj()));
                }
            }
        }
        if pos.get(&0).map(|c| c.0.im.abs().max(c.1.im.abs())) > Some(1e-12) {
            return Err(GeometryError::InvalidDomain(
                "mode 0 must be real".into(),
            ));
        }
        let curve = FourierCurve {
            coeffs: pos.into_iter().map(|(n, (cx, cy))| (n, cx, cy)).collect(),
        };
        let bc = BoundaryCurve::Fourier(curve);
        bc.validate()?;
        Ok(bc)
    }

    /// Build a polygon from counterclockwise vertices.
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 || n > 100_000 {
            return Err(GeometryError::InvalidDomain(format!(
                "polygon needs 3..=100000 vertices, got {n}"
            )));
        }
        if vertices
            .iter()
            .any(|v| !(v[0].is_finite() && v[1].is_finite()))
        {
            return Err(GeometryError::InvalidDomain(
                "non-finite polygon vertex".into(),
            ));
        }
        // signed area: positive for counterclockwise
        let mut area2 = 0.0;
        for i in 0..n {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            area2 += p[0] * q[1] - q[0] * p[1];
        }
        if area2 <= 0.0 {
            return Err(GeometryError::InvalidDomain(
                "polygon vertices must be in counterclockwise order".into(),
            ));
        }
        let mut lens = Vec::with_capacity(n);
        for i in 0..n {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            let l = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
            if l <= 0.0 {
                return Err(GeometryError::InvalidDomain("degenerate edge".into()));
            }
            lens.push(l);
        }
        // no three consecutive collinear vertices
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross.abs() <= 1e-14 * lens[i] * lens[(i + 1) % n] {
                return Err(GeometryError::InvalidDomain(format!(
                    "vertices {i}..{} are collinear",
                    (i + 2) % n
                )));
            }
        }
        let total: f64 = lens.iter().sum();
        let mut breaks = Vec::with_capacity(n + 1);
        breaks.push(0.0);
        let mut acc = 0.0;
        for l in &lens {
            acc += l / total;
            breaks.push(acc);
        }
        breaks[n] = 1.0;
        Ok(BoundaryCurve::Polygon(Polygon { vertices, breaks }))
    }

    /// Unit square [0,1]².
    pub fn unit_square() -> Self {
        Self::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).expect("valid square")
    }

    /// Unit square tilted by η: vertices
    /// (0,0), (cos η, sin η), √2(cos(η+π/4), sin(η+π/4)), (−sin η, cos η).
    pub fn tilted_square(eta: f64) -> Result<Self, GeometryError> {
        if !eta.is_finite() {
            return Err(GeometryError::InvalidDomain("non-finite tilt".into()));
        }
        let (s, c) = eta.sin_cos();
        let d = std::f64::consts::SQRT_2;
        let q = eta + std::f64::consts::FRAC_PI_4;
        Self::polygon(vec![
            [0.0, 0.0],
            [c, s],
            [d * q.cos(), d * q.sin()],
            [-s, c],
        ])
    }

    pub fn point(&self, theta: f64) -> [f64; 2] {
        match self {
            BoundaryCurve::Fourier(f) => f.point(theta.rem_euclid(1.0)),
            BoundaryCurve::Polygon(p) => p.point(theta),
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, BoundaryCurve::Polygon(_))
    }

    /// Immersion + simplicity check on a fine grid (Fourier curves);
    /// polygons are validated at construction.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let BoundaryCurve::Fourier(f) = self else {
            return Ok(());
        };
        let g = 512;
        let pts: Vec<[f64; 2]> = (0..g).map(|i| f.point(i as f64 / g as f64)).collect();
        for i in 0..g {
            let d = f.derivative(i as f64 / g as f64);
            if (d[0] * d[0] + d[1] * d[1]).sqrt() < 1e-10 {
                return Err(GeometryError::InvalidDomain(format!(
                    "|x'(θ)| vanishes near θ={}",
                    i as f64 / g as f64
                )));
            }
        }
        // coarse self-intersection scan over non-adjacent chords
        for i in 0..g {
            let a = pts[i];
            let b = pts[(i + 1) % g];
            for j in i + 2..g {
                if i == 0 && j == g - 1 {
                    continue;
                }
                let c = pts[j];
                let d = pts[(j + 1) % g];
                if segments_cross(a, b, c, d) {
                    return Err(GeometryError::InvalidDomain(format!(
                        "curve self-intersects near θ={} and θ={}",
                        i as f64 / g as f64,
                        j as f64 / g as f64
                    )));
                }
            }
        }
        Ok(())
    }
}

fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let cr = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let d1 = cr(a, b, c);
    let d2 = cr(a, b, d);
    let d3 = cr(c, d, a);
    let d4 = cr(c, d, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// ℓ±(x(θ), ω).
pub fn boundary_ell(
    curve: &BoundaryCurve,
    theta: f64,
    omega: Complex64,
    sign: Sign,
) -> Complex64 {
    ell(curve.point(theta), omega, sign)
}

/// Real-λ version of [`boundary_ell`].
pub fn boundary_ell_real(curve: &BoundaryCurve, theta: f64, lambda: f64, sign: Sign) -> f64 {
    ell_real(curve.point(theta), lambda, sign)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalKind {
    Minimum,
    Maximum,
}

/// One critical point of θ ↦ ℓ±(x(θ), λ).
#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub theta: f64,
    pub value: f64,
    pub second_derivative: f64,
    pub kind: CriticalKind,
}

/// Outcome of the λ-simplicity check: per sign, the located critical points.
#[derive(Debug, Clone, Serialize)]
pub struct SimplicityReport {
    pub is_simple: bool,
    pub lambda: f64,
    /// critical points of ℓ⁺ then ℓ⁻
    pub critical_points: [Vec<CriticalPoint>; 2],
    pub reason: Option<String>,
}

impl SimplicityReport {
    pub fn points(&self, sign: Sign) -> &[CriticalPoint] {
        match sign {
            Sign::Plus => &self.critical_points[0],
            Sign::Minus => &self.critical_points[1],
        }
    }
}

/// Default grid resolution for the critical-point search.
pub const SIMPLICITY_GRID: usize = 4096;

/// Locates the critical points of ℓ± ∘ x by sign changes of the θ-derivative
/// on a uniform grid, polishes them by Newton iteration, and classifies
/// nondegeneracy by the second derivative.
///
/// Polygons are never λ-simple; the report says so without error.
pub fn check_lambda_simple(
    curve: &BoundaryCurve,
    lambda: f64,
    tol: f64,
) -> Result<SimplicityReport, GeometryError> {
    check_lambda_simple_on_grid(curve, lambda, tol, SIMPLICITY_GRID)
}

pub fn check_lambda_simple_on_grid(
    curve: &BoundaryCurve,
    lambda: f64,
    tol: f64,
    grid: usize,
) -> Result<SimplicityReport, GeometryError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(GeometryError::LambdaOutOfRange(lambda));
    }
    let fc = match curve {
        BoundaryCurve::Fourier(f) => f,
        BoundaryCurve::Polygon(_) => {
            return Ok(SimplicityReport {
                is_simple: false,
                lambda,
                critical_points: [vec![], vec![]],
                reason: Some("polygon boundaries have corners and are never λ-simple".into()),
            });
        }
    };
    let sq = (1.0 - lambda * lambda).sqrt();
    let mut all = [vec![], vec![]];
    let mut simple = true;
    let mut reason = None;
    for (si, sign) in Sign::BOTH.iter().enumerate() {
        let s = sign.factor();
        let deriv = |theta: f64| {
            let d = fc.derivative(theta);
            s * d[0] / lambda + d[1] / sq
        };
        let deriv2 = |theta: f64| {
            let d = fc.second_derivative(theta);
            s * d[0] / lambda + d[1] / sq
        };
        let vals: Vec<f64> = (0..grid).map(|i| deriv(i as f64 / grid as f64)).collect();
        let mut roots = Vec::new();
        let mut last_cell: Option<usize> = None;
        for i in 0..grid {
            let a = vals[i];
            let b = vals[(i + 1) % grid];
            if a == 0.0 || a * b < 0.0 {
                if let Some(lc) = last_cell {
                    if i - lc < 2 {
                        return Err(GeometryError::GridTooCoarse(i as f64 / grid as f64));
                    }
                }
                last_cell = Some(i);
                // Newton polish from the cell midpoint, bisection fallback
                let (mut lo, mut hi) = (i as f64 / grid as f64, (i + 1) as f64 / grid as f64);
                let mut x = 0.5 * (lo + hi);
                for _ in 0..60 {
                    let fx = deriv(x);
                    let dfx = deriv2(x);
                    let mut step_ok = false;
                    if dfx != 0.0 {
                        let xn = x - fx / dfx;
                        if xn > lo && xn < hi {
                            x = xn;
                            step_ok = true;
                        }
                    }
                    if !step_ok {
                        if deriv(lo) * fx <= 0.0 {
                            hi = x;
                        } else {
                            lo = x;
                        }
                        x = 0.5 * (lo + hi);
                    }
                    if deriv(x).abs() < 1e-13 {
                        break;
                    }
                }
                let d2 = deriv2(x);
                let x0 = fc.point(x);
                roots.push(CriticalPoint {
                    theta: x.rem_euclid(1.0),
                    value: s * x0[0] / lambda + x0[1] / sq,
                    second_derivative: d2,
                    kind: if d2 > 0.0 {
                        CriticalKind::Minimum
                    } else {
                        CriticalKind::Maximum
                    },
                });
            }
        }
        if roots.len() != 2 {
            simple = false;
            reason = Some(format!(
                "ℓ{} has {} critical points, need exactly 2",
                if s > 0.0 { "+" } else { "-" },
                roots.len()
            ));
        } else {
            let degenerate = roots.iter().any(|r| r.second_derivative.abs() < tol);
            let one_min = roots
                .iter()
                .filter(|r| r.kind == CriticalKind::Minimum)
                .count()
                == 1;
            if degenerate {
                simple = false;
                reason = Some("degenerate critical point (|∂²ℓ| below tolerance)".into());
            } else if !one_min {
                simple = false;
                reason = Some("critical points are not one min + one max".into());
            }
        }
        all[si] = roots;
    }
    Ok(SimplicityReport {
        is_simple: simple,
        lambda,
        critical_points: all,
        reason: if simple { None } else { reason },
    })
}

/// JSON shape of a domain specification.
///
/// ```json
/// {"type":"disk"}
/// {"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}
/// {"type":"fourier","coeffs":[[1, 0.5,0.0, 0.0,-0.25], ...]}
/// {"type":"tilted_square","eta":0.157}
/// {"type":"square"}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    Disk,
    Square,
    Polygon { vertices: Vec<[f64; 2]> },
    Fourier { coeffs: Vec<(i32, f64, f64, f64, f64)> },
    TiltedSquare { eta: f64 },
}

impl DomainSpec {
    /// Parse a domain spec from JSON, reporting the JSON pointer path on
    /// schema violations. Unknown keys are rejected (serde cannot enforce
    /// this for internally tagged enums, so the key set is checked here).
    pub fn from_json(s: &str) -> Result<Self, GeometryError> {
        let value: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| GeometryError::BadDomainJson(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| GeometryError::BadDomainJson("domain spec must be an object".into()))?;
        let ty = obj
            .get("type")
            .and_then(|t| t.as_str())
            .ok_or_else(|| GeometryError::BadDomainJson("/type: missing or not a string".into()))?;
        let allowed: &[&str] = match ty {
            "disk" | "square" => &[],
            "polygon" => &["vertices"],
            "fourier" => &["coeffs"],
            "tilted_square" => &["eta"],
            other => {
                return Err(GeometryError::BadDomainJson(format!(
                    "/type: unknown domain type {other:?}"
                )))
            }
        };
        for key in obj.keys() {
            if key != "type" && !allowed.contains(&key.as_str()) {
                return Err(GeometryError::BadDomainJson(format!(
                    "/{key}: unknown key for domain type {ty:?}"
                )));
            }
        }
        serde_path_to_error::deserialize(value)
            .map_err(|e| GeometryError::BadDomainJson(format!("{}: {}", e.path(), e.inner())))
    }

    pub fn build(&self) -> Result<BoundaryCurve, GeometryError> {
        match self {
            DomainSpec::Disk => Ok(BoundaryCurve::disk()),
            DomainSpec::Square => Ok(BoundaryCurve::unit_square()),
            DomainSpec::Polygon { vertices } => BoundaryCurve::polygon(vertices.clone()),
            DomainSpec::Fourier { coeffs } => {
                let raw: Vec<(i32, Complex64, Complex64)> = coeffs
                    .iter()
                    .map(|&(n, rx, ix, ry, iy)| {
                        (n, Complex64::new(rx, ix), Complex64::new(ry, iy))
                    })
                    .collect();
                BoundaryCurve::fourier(&raw)
            }
            DomainSpec::TiltedSquare { eta } => BoundaryCurve::tilted_square(*eta),
        }
    }
}
