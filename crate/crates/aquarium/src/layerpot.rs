//! Single-layer boundary-integral machinery at complex spectral parameter.
//!
//! The operator P(ω) = (1−ω²)∂²₂ − ω²∂²₁ has the explicit fundamental
//! solution E_ω(x) = c_ω log A(x,ω) with A(x,ω) = −x₁²/ω² + x₂²/(1−ω²) and
//! c_ω = i·sgn(Im ω)/(4πω√(1−ω²)). For Im ω > 0 the quadratic form A maps
//! into the closed upper half-plane, so the principal log is smooth away
//! from the diagonal and the classical log-kernel splitting applies:
//!
//! ```text
//! E_ω(x(θ)−x(θ')) = c_ω·[ log(4sin²π(θ−θ')) + log(A/(4sin²π(θ−θ'))) ]
//! ```
//!
//! with the second factor smooth. The first factor is integrated by the
//! spectrally accurate periodic log-quadrature, the second by the
//! trapezoid rule; the result is a dense Nyström system for the boundary
//! density v solving C_ω v = (R_ω f)|_∂Ω.

use crate::geometry::{BoundaryCurve, FourierCurve, GeometryError, Sign};
use crate::quad::{halton, kress_log_weight_at, kress_log_weights, panel_rule};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LayerError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("fundamental solution is singular at the origin")]
    OriginSingularity,
    #[error("layer systems need a smooth (fourier) boundary")]
    PolygonUnsupported,
    #[error("node count must be an even power of two >= 16, got {0}")]
    BadNodeCount(usize),
    #[error("spectral parameter must have Im ω ≠ 0 for the elliptic solver")]
    RealOmega,
    #[error("forcing support touches or leaves the domain: {0}")]
    SupportTouchesBoundary(String),
    #[error("evaluation point ({0}, {1}) is too close to the boundary")]
    TooCloseToBoundary(f64, f64),
    #[error("system is numerically singular (cond est {0:.3e})")]
    SingularSystem(f64),
}

/// A(x, ω) = ℓ⁺ℓ⁻ = −x₁²/ω² + x₂²/(1−ω²).
pub fn a_quadratic(x: [f64; 2], omega: Complex64) -> Complex64 {
    let om2 = omega * omega;
    -x[0] * x[0] / om2 + x[1] * x[1] / (Complex64::new(1.0, 0.0) - om2)
}

/// c_ω = i·sgn(Im ω)/(4πω√(1−ω²)).
pub fn c_omega(omega: Complex64) -> Complex64 {
    let sgn = if omega.im >= 0.0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, sgn)
        / (4.0 * std::f64::consts::PI
            * omega
            * (Complex64::new(1.0, 0.0) - omega * omega).sqrt())
}

/// E_ω(x) for Im ω ≠ 0.
pub fn fundamental_solution(x: [f64; 2], omega: Complex64) -> Result<Complex64, LayerError> {
    if x[0] == 0.0 && x[1] == 0.0 {
        return Err(LayerError::OriginSingularity);
    }
    if omega.im == 0.0 {
        return Err(LayerError::RealOmega);
    }
    Ok(c_omega(omega) * a_quadratic(x, omega).ln())
}

/// Distributional limit E_{λ±i0}(x) = ±c_λ log(A(x,λ) ± i0).
pub fn fundamental_solution_limit(
    x: [f64; 2],
    lambda: f64,
    sign: Sign,
) -> Result<Complex64, LayerError> {
    if x[0] == 0.0 && x[1] == 0.0 {
        return Err(LayerError::OriginSingularity);
    }
    let a = -x[0] * x[0] / (lambda * lambda) + x[1] * x[1] / (1.0 - lambda * lambda);
    let c = Complex64::new(0.0, 1.0)
        / (4.0 * std::f64::consts::PI * lambda * (1.0 - lambda * lambda).sqrt());
    let log_a = Complex64::new(
        a.abs().ln(),
        if a < 0.0 {
            sign.factor() * std::f64::consts::PI
        } else {
            0.0
        },
    );
    Ok(sign.factor() * c * log_a)
}

/// Compactly supported smooth bump in the plane, the standard interior
/// forcing for layer-potential runs.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct PlaneBump {
    pub center: [f64; 2],
    pub radius: f64,
    pub amplitude: f64,
}

impl PlaneBump {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let s = ((x - self.center[0]).powi(2) + (y - self.center[1]).powi(2))
            / (self.radius * self.radius);
        if s >= 1.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / (1.0 - s)).exp()
        }
    }
}

/// Tabulated boundary data for a smooth curve at N uniform nodes.
struct CurveTable {
    theta: Vec<f64>,
    point: Vec<[f64; 2]>,
    tangent: Vec<[f64; 2]>,
}

fn tabulate(curve: &FourierCurve, n: usize) -> CurveTable {
    let theta: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
    CurveTable {
        point: theta.iter().map(|&t| curve.point(t)).collect(),
        tangent: theta.iter().map(|&t| curve.derivative(t)).collect(),
        theta,
    }
}

/// Dense Nyström discretization of the restricted single-layer operator
/// C_ω acting on densities v dθ, together with its forcing and solution.
pub struct LayerSystem {
    curve: FourierCurve,
    omega: Complex64,
    n: usize,
    table: CurveTable,
    matrix: DMatrix<Complex64>,
    forcing: Option<PlaneBump>,
    rhs: Option<Vec<Complex64>>,
    density: Option<Vec<Complex64>>,
    cond_est: Option<f64>,
}

/// Threshold beyond which a solve is reported as singular.
pub const SINGULAR_COND: f64 = 1e13;

impl LayerSystem {
    /// Assemble the N×N collocation matrix at ω (Im ω ≠ 0); N must be a
    /// power of two.
    pub fn assemble(
        curve: &BoundaryCurve,
        omega: Complex64,
        n: usize,
    ) -> Result<Self, LayerError> {
        let BoundaryCurve::Fourier(fc) = curve else {
            return Err(LayerError::PolygonUnsupported);
        };
        if n < 16 || !n.is_power_of_two() {
            return Err(LayerError::BadNodeCount(n));
        }
        if omega.im == 0.0 {
            return Err(LayerError::RealOmega);
        }
        let table = tabulate(fc, n);
        let co = c_omega(omega);
        let logw = kress_log_weights(n);
        let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            let xi = table.point[i];
            for j in 0..n {
                let smooth = if i == j {
                    let q = a_quadratic(table.tangent[i], omega);
                    (q / (4.0 * std::f64::consts::PI * std::f64::consts::PI)).ln()
                } else {
                    let d = [xi[0] - table.point[j][0], xi[1] - table.point[j][1]];
                    let s = (std::f64::consts::PI * (table.theta[i] - table.theta[j])).sin();
                    a_quadratic(d, omega).ln() - (4.0 * s * s).ln()
                };
                matrix[(i, j)] = co * (logw[(i + n - j) % n] + smooth / n as f64);
            }
        }
        Ok(Self {
            curve: fc.clone(),
            omega,
            n,
            table,
            matrix,
            forcing: None,
            rhs: None,
            density: None,
            cond_est: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn node_points(&self) -> &[[f64; 2]] {
        &self.table.point
    }

    pub fn density(&self) -> Option<&[Complex64]> {
        self.density.as_deref()
    }

    pub fn rhs(&self) -> Option<&[Complex64]> {
        self.rhs.as_deref()
    }

    pub fn cond_est(&self) -> Option<f64> {
        self.cond_est
    }

    /// L² norm (against dθ) of the solved density.
    pub fn density_l2(&self) -> Option<f64> {
        self.density
            .as_ref()
            .map(|v| (v.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.n as f64).sqrt())
    }

    /// Solve C_ω v = rhs; the condition estimate gates on
    /// [`SINGULAR_COND`].
    pub fn solve(&mut self, rhs: Vec<Complex64>) -> Result<(), LayerError> {
        assert_eq!(rhs.len(), self.n);
        let lu = self.matrix.clone().lu();
        let b = nalgebra::DVector::from_column_slice(&rhs);
        let sol = lu
            .solve(&b)
            .ok_or(LayerError::SingularSystem(f64::INFINITY))?;
        let cond = estimate_condition(&self.matrix, &lu);
        self.cond_est = Some(cond);
        self.rhs = Some(rhs);
        self.density = Some(sol.as_slice().to_vec());
        if cond > SINGULAR_COND {
            return Err(LayerError::SingularSystem(cond));
        }
        Ok(())
    }

    /// (C_ω w)(θ) for an arbitrary target θ against grid density values `w`
    /// on `m` uniform nodes of `curve` — the same quadrature at off-grid
    /// collocation, used for boundary traces and reference forcing data.
    pub fn apply_offgrid(
        curve: &FourierCurve,
        omega: Complex64,
        w: &[Complex64],
        theta: f64,
    ) -> Complex64 {
        let m = w.len();
        let co = c_omega(omega);
        let x = curve.point(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, wj) in w.iter().enumerate() {
            let tj = j as f64 / m as f64;
            let dth = theta - tj;
            let s = (std::f64::consts::PI * dth).sin();
            let smooth = if s.abs() < 1e-13 {
                let q = a_quadratic(curve.derivative(theta), omega);
                (q / (4.0 * std::f64::consts::PI * std::f64::consts::PI)).ln()
            } else {
                let y = curve.point(tj);
                a_quadratic([x[0] - y[0], x[1] - y[1]], omega).ln() - (4.0 * s * s).ln()
            };
            acc += (kress_log_weight_at(m, dth) + smooth / m as f64) * wj;
        }
        co * acc
    }

    /// S_ω v at an interior point by the trapezoid rule (smooth integrand
    /// once the point keeps away from the boundary).
    pub fn single_layer_at(&self, p: [f64; 2]) -> Result<Complex64, LayerError> {
        let v = self.density.as_ref().expect("density solved");
        self.check_distance(p)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, vj) in v.iter().enumerate() {
            let d = [p[0] - self.table.point[j][0], p[1] - self.table.point[j][1]];
            acc += a_quadratic(d, self.omega).ln() * vj;
        }
        Ok(c_omega(self.omega) * acc / self.n as f64)
    }

    fn check_distance(&self, p: [f64; 2]) -> Result<(), LayerError> {
        let min_d2 = self
            .table
            .point
            .iter()
            .map(|q| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
            .fold(f64::INFINITY, f64::min);
        let speed = self
            .table
            .tangent
            .iter()
            .map(|t| (t[0] * t[0] + t[1] * t[1]).sqrt())
            .fold(0.0f64, f64::max);
        if min_d2.sqrt() < 2.0 * speed / self.n as f64 {
            return Err(LayerError::TooCloseToBoundary(p[0], p[1]));
        }
        Ok(())
    }

    /// u(p) = (R_ω f)(p) − (S_ω v)(p) at interior points.
    pub fn evaluate_interior(&self, points: &[[f64; 2]]) -> Result<Vec<Complex64>, LayerError> {
        let f = self
            .forcing
            .expect("interior evaluation needs the volume forcing");
        points
            .iter()
            .map(|&p| {
                let rf = newton_potential(&f, p, self.omega, 32);
                Ok(rf - self.single_layer_at(p)?)
            })
            .collect()
    }
}

/// 2-norm condition estimate by power iteration on A and on A⁻¹ (via the
/// LU factors).
fn estimate_condition(
    a: &DMatrix<Complex64>,
    lu: &nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
) -> f64 {
    let n = a.nrows();
    let mut x = nalgebra::DVector::from_fn(n, |i, _| {
        Complex64::new(((i * 2654435761 + 17) % 1000) as f64 / 1000.0 - 0.5, 0.1)
    });
    let mut norm_a = 0.0;
    for _ in 0..20 {
        let y = a.ad_mul(&(a * &x));
        let ny = y.norm();
        if ny == 0.0 {
            break;
        }
        norm_a = ny.sqrt();
        x = y / Complex64::new(ny, 0.0);
    }
    let mut x = nalgebra::DVector::from_fn(n, |i, _| {
        Complex64::new(((i * 1103515245 + 12345) % 1000) as f64 / 1000.0 - 0.5, -0.2)
    });
    let mut norm_inv = 0.0;
    for _ in 0..20 {
        // y = A⁻ᴴ A⁻¹ x via two solves
        let z = lu.solve(&x).unwrap_or_else(|| x.clone());
        let y = lu
            .u()
            .ad_solve_upper_triangular(&z)
            .and_then(|t| lu.l().ad_solve_lower_triangular(&t))
            .map(|t| {
                let mut t = t;
                lu.p().inv_permute_rows(&mut t);
                t
            })
            .unwrap_or(z);
        let ny = y.norm();
        if ny == 0.0 {
            break;
        }
        norm_inv = ny.sqrt();
        x = y / Complex64::new(ny, 0.0);
    }
    norm_a * norm_inv
}

/// Winding-number test of `p` against a sampled closed curve.
fn point_inside(curve: &FourierCurve, p: [f64; 2]) -> bool {
    let g = 512;
    let mut angle = 0.0;
    let mut prev = {
        let q = curve.point(0.0);
        (q[1] - p[1]).atan2(q[0] - p[0])
    };
    for i in 1..=g {
        let q = curve.point(i as f64 / g as f64);
        let a = (q[1] - p[1]).atan2(q[0] - p[0]);
        let mut d = a - prev;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        angle += d;
        prev = a;
    }
    angle.abs() > std::f64::consts::PI
}

/// (R_ω f)(p) = ∬ E_ω(p−y) f(y) dy by tensor Gauss over the bump box;
/// smooth when p is outside the support.
pub fn newton_potential(f: &PlaneBump, p: [f64; 2], omega: Complex64, panels: usize) -> Complex64 {
    let (xs, wx) = panel_rule(
        f.center[0] - f.radius,
        f.center[0] + f.radius,
        panels,
        12,
    );
    let (ys, wy) = panel_rule(
        f.center[1] - f.radius,
        f.center[1] + f.radius,
        panels,
        12,
    );
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w1) in xs.iter().zip(&wx) {
        for (y, w2) in ys.iter().zip(&wy) {
            let val = f.value(*x, *y);
            if val != 0.0 {
                acc += w1 * w2 * val * a_quadratic([p[0] - x, p[1] - y], omega).ln();
            }
        }
    }
    c_omega(omega) * acc
}

/// F(θ_j) = (R_ω f)(x(θ_j)) at the N boundary nodes.
pub fn newton_potential_on_boundary(
    f: &PlaneBump,
    curve: &BoundaryCurve,
    omega: Complex64,
    n: usize,
) -> Result<Vec<Complex64>, LayerError> {
    use rayon::prelude::*;
    let BoundaryCurve::Fourier(fc) = curve else {
        return Err(LayerError::PolygonUnsupported);
    };
    if omega.im == 0.0 {
        return Err(LayerError::RealOmega);
    }
    if !point_inside(fc, f.center) {
        return Err(LayerError::SupportTouchesBoundary(
            "bump center lies outside the domain".into(),
        ));
    }
    let table = tabulate(fc, 512.max(n));
    let clearance = table
        .point
        .iter()
        .map(|q| {
            ((q[0] - f.center[0]).powi(2) + (q[1] - f.center[1]).powi(2)).sqrt() - f.radius
        })
        .fold(f64::INFINITY, f64::min);
    if clearance <= 1e-3 {
        return Err(LayerError::SupportTouchesBoundary(format!(
            "clearance to the boundary is {clearance:.3e}"
        )));
    }
    Ok((0..n)
        .into_par_iter()
        .map(|j| {
            let p = fc.point(j as f64 / n as f64);
            newton_potential(f, p, omega, 32)
        })
        .collect())
}

/// Assemble the system at ω, build the Newton-potential forcing, and solve
/// for the boundary density.
pub fn assemble_and_solve(
    curve: &BoundaryCurve,
    omega: Complex64,
    f: PlaneBump,
    n: usize,
) -> Result<LayerSystem, LayerError> {
    let mut sys = LayerSystem::assemble(curve, omega, n)?;
    let rhs = newton_potential_on_boundary(&f, curve, omega, n)?;
    sys.forcing = Some(f);
    sys.solve(rhs)?;
    Ok(sys)
}

/// One sweep entry (one linear solve at ω = λ₀ + ε + ih).
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub eps: f64,
    pub v_l2: Option<f64>,
    pub u_max: Option<f64>,
    pub bdry_resid: Option<f64>,
    pub cond_est: Option<f64>,
    pub error: Option<String>,
}

/// Limiting-absorption sweep along the polynomial region Λ⁺_{λ₀,d}.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepResult {
    pub lambda0: f64,
    pub degree: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// LS slope of log‖v‖ against log h over the ε = 0 rows (the vertical
    /// approach, inside Λ± for every degree).
    pub fn vertical_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.eps == 0.0)
            .filter_map(|r| r.v_l2.map(|v| (r.h.ln(), v.ln())))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    }
}

/// For each h in `h_list` solve on the boundary of Λ⁺ (ε = h^{1/d}) and on
/// the vertical line (ε = 0). Singular systems are recorded per row; the
/// sweep itself never aborts.
pub fn lap_sweep(
    curve: &BoundaryCurve,
    lambda0: f64,
    d: f64,
    h_list: &[f64],
    f: PlaneBump,
    probes: &[[f64; 2]],
    n: usize,
) -> Result<SweepResult, LayerError> {
    assert!(
        h_list.windows(2).all(|w| w[1] < w[0]) && h_list.iter().all(|&h| h > 0.0),
        "h must be strictly decreasing and positive"
    );
    let mut rows = Vec::with_capacity(2 * h_list.len());
    for &h in h_list {
        for eps in [h.powf(1.0 / d), 0.0] {
            let omega = Complex64::new(lambda0 + eps, h);
            rows.push(sweep_row(curve, omega, h, eps, f, probes, n));
        }
    }
    Ok(SweepResult {
        lambda0,
        degree: d,
        rows,
    })
}

fn sweep_row(
    curve: &BoundaryCurve,
    omega: Complex64,
    h: f64,
    eps: f64,
    f: PlaneBump,
    probes: &[[f64; 2]],
    n: usize,
) -> SweepRow {
    let mut row = SweepRow {
        h,
        eps,
        v_l2: None,
        u_max: None,
        bdry_resid: None,
        cond_est: None,
        error: None,
    };
    let sys = match assemble_and_solve(curve, omega, f, n) {
        Ok(sys) => sys,
        Err(LayerError::SingularSystem(c)) => {
            row.cond_est = Some(c);
            row.error = Some(LayerError::SingularSystem(c).to_string());
            return row;
        }
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.v_l2 = sys.density_l2();
    row.cond_est = sys.cond_est();
    match sys.evaluate_interior(probes) {
        Ok(u) => {
            row.u_max = Some(u.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.bdry_resid = Some(boundary_residual(&sys));
    row
}

/// Boundary trace defect sampled between collocation nodes:
/// max |F(θ) − (C_ω v)(θ)| at θ = (j+1/2)/N, both sides evaluated by the
/// off-grid quadrature of the same order.
fn boundary_residual(sys: &LayerSystem) -> f64 {
    let v = sys.density.as_ref().expect("solved");
    let f = sys.forcing.expect("forcing");
    let mut worst = 0.0f64;
    for j in 0..sys.n {
        let theta = (j as f64 + 0.5) / sys.n as f64;
        let cv = LayerSystem::apply_offgrid(&sys.curve, sys.omega, v, theta);
        let rf = newton_potential(&f, sys.curve.point(theta), sys.omega, 32);
        worst = worst.max((cv - rf).norm());
    }
    worst
}

/// Halton probe points inside the inscribed disk of radius
/// `scale × inradius` around the curve centroid.
pub fn halton_probes(curve: &BoundaryCurve, count: usize, scale: f64) -> Vec<[f64; 2]> {
    let g = 256;
    let samples: Vec<[f64; 2]> = (0..g).map(|i| curve.point(i as f64 / g as f64)).collect();
    let cx = samples.iter().map(|p| p[0]).sum::<f64>() / g as f64;
    let cy = samples.iter().map(|p| p[1]).sum::<f64>() / g as f64;
    let inradius = samples
        .iter()
        .map(|p| ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min);
    let r = scale * inradius;
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let x = 2.0 * halton(i, 2) - 1.0;
        let y = 2.0 * halton(i, 3) - 1.0;
        i += 1;
        if x * x + y * y <= 1.0 {
            out.push([cx + r * x, cy + r * y]);
        }
    }
    out
}

/// Manufactured-solution reference for the disk:
/// u*(x) = (1 − (2π|x|)²)·exp(−|x|²/σ²), which vanishes on |x| = 1/(2π).
pub mod manufactured {
    use super::*;
    use crate::geometry::DISK_RADIUS;

    pub const SIGMA: f64 = 0.1;

    pub fn u_star(p: [f64; 2]) -> f64 {
        let s = p[0] * p[0] + p[1] * p[1];
        (1.0 - 4.0 * std::f64::consts::PI.powi(2) * s) * (-s / (SIGMA * SIGMA)).exp()
    }

    fn g_parts(s: f64) -> (f64, f64, f64) {
        // g(s) = (1−4π²s)e^{−s/σ²} and its first two derivatives in s
        let pi2 = 4.0 * std::f64::consts::PI.powi(2);
        let e = (-s / (SIGMA * SIGMA)).exp();
        let g = (1.0 - pi2 * s) * e;
        let gp = -e * (pi2 + (1.0 - pi2 * s) / (SIGMA * SIGMA));
        let gpp = (e / (SIGMA * SIGMA)) * (2.0 * pi2 + (1.0 - pi2 * s) / (SIGMA * SIGMA));
        (g, gp, gpp)
    }

    pub fn grad_u_star(p: [f64; 2]) -> [f64; 2] {
        let (_, gp, _) = g_parts(p[0] * p[0] + p[1] * p[1]);
        [2.0 * p[0] * gp, 2.0 * p[1] * gp]
    }

    /// f = P(ω)u* = (1−ω²)∂²₂u* − ω²∂²₁u*, analytic.
    pub fn forcing(p: [f64; 2], omega: Complex64) -> Complex64 {
        let s = p[0] * p[0] + p[1] * p[1];
        let (_, gp, gpp) = g_parts(s);
        let om2 = omega * omega;
        let one = Complex64::new(1.0, 0.0);
        2.0 * gp * (one - 2.0 * om2)
            + 4.0 * gpp * ((one - om2) * p[1] * p[1] - om2 * p[0] * p[0])
    }

    /// Neumann data v* = −2ω√(1−ω²)·(L⁺u*)(x(θ))·∂_θℓ⁺(x(θ)): the exact
    /// boundary density for u*.
    pub fn neumann_density(theta: f64, omega: Complex64) -> Complex64 {
        let x = [
            DISK_RADIUS * (2.0 * std::f64::consts::PI * theta).cos(),
            DISK_RADIUS * (2.0 * std::f64::consts::PI * theta).sin(),
        ];
        let dx = [
            -(2.0 * std::f64::consts::PI * theta).sin(),
            (2.0 * std::f64::consts::PI * theta).cos(),
        ];
        let grad = grad_u_star(x);
        let root = (Complex64::new(1.0, 0.0) - omega * omega).sqrt();
        let l_plus = 0.5 * (omega * grad[0] + root * grad[1]);
        let dl_plus = dx[0] / omega + dx[1] / root;
        -2.0 * omega * root * l_plus * dl_plus
    }

    /// Reference boundary data F = (R_ω f)|_∂Ω = C_ω v*, evaluated by the
    /// off-grid log-quadrature on a fine m-node grid (independent of the
    /// system size under test).
    pub fn reference_boundary_data(
        curve: &FourierCurve,
        omega: Complex64,
        targets: &[f64],
        m: usize,
    ) -> Vec<Complex64> {
        use rayon::prelude::*;
        let vstar: Vec<Complex64> = (0..m)
            .map(|j| neumann_density(j as f64 / m as f64, omega))
            .collect();
        targets
            .par_iter()
            .map(|&t| LayerSystem::apply_offgrid(curve, omega, &vstar, t))
            .collect()
    }

    /// Reference S_ω v* at an interior point (fine trapezoid).
    pub fn reference_single_layer(
        curve: &FourierCurve,
        omega: Complex64,
        p: [f64; 2],
        m: usize,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let t = j as f64 / m as f64;
            let q = curve.point(t);
            acc += a_quadratic([p[0] - q[0], p[1] - q[1]], omega).ln()
                * neumann_density(t, omega);
        }
        c_omega(omega) * acc / m as f64
    }
}


#[cfg(test)]
mod timing {
    use super::*;
    use crate::geometry::BoundaryCurve;

    #[test]
    #[ignore = "timing probe"]
    fn solve_512_timing() {
        let t0 = std::time::Instant::now();
        let f = PlaneBump { center: [0.03, 0.02], radius: 0.07, amplitude: 1.0 };
        let sys = assemble_and_solve(
            &BoundaryCurve::disk(),
            Complex64::new(0.8253408053890466, 1e-3),
            f,
            512,
        )
        .unwrap();
        println!("512 assemble+solve: {:?}, |v|={:?}", t0.elapsed(), sys.density_l2());
    }
}
