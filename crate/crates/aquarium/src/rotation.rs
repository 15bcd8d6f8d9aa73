//! Rotation numbers with rigorous enclosing intervals, λ-scans, and plateau
//! detection.
//!
//! For any lift B of an orientation-preserving circle homeomorphism the
//! classical inequality |Bⁿ(θ₀) − θ₀ − n·r| < 1 holds, so a single orbit of
//! length n encloses r in an interval of width 2/n. No extrapolation is done
//! here; continued-fraction post-processing lives in [`crate::arithmetic`].

use crate::billiard::{lift_orbit, BilliardError, ChessBilliard, CircleMap};
use crate::geometry::BoundaryCurve;
use serde::Serialize;

/// Rotation-number estimate from one orbit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RotationEstimate {
    /// (Bⁿ(θ₀) − θ₀)/n reduced mod 1.
    pub value: f64,
    /// Enclosing interval for the true rotation number (same branch as
    /// `value`, not reduced).
    pub lo: f64,
    pub hi: f64,
    pub orbit_length: usize,
    pub seed: f64,
}

impl RotationEstimate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.lo && r <= self.hi
    }

    pub fn overlaps(&self, other: &RotationEstimate) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Estimate the rotation number of `map` from the orbit of `theta0`.
///
/// The enclosing interval is [(Δ−1)/n, (Δ+1)/n] with Δ = Bⁿ(θ₀) − θ₀, valid
/// for every circle homeomorphism.
pub fn rotation_number<M: CircleMap>(
    map: &M,
    theta0: f64,
    n: usize,
) -> Result<RotationEstimate, BilliardError> {
    assert!(n >= 10, "orbit length must be at least 10");
    let orbit = lift_orbit(map, theta0, n)?;
    let delta = orbit[n] - theta0;
    let value = (delta / n as f64).rem_euclid(1.0);
    Ok(RotationEstimate {
        value,
        lo: (delta - 1.0) / n as f64,
        hi: (delta + 1.0) / n as f64,
        orbit_length: n,
        seed: theta0,
    })
}

/// 𝐫(λ) = λ/(√(1−λ²)+λ) on the unit square.
pub fn square_rotation_closed_form(lambda: f64) -> f64 {
    lambda / ((1.0 - lambda * lambda).sqrt() + lambda)
}

/// 𝐫(λ) = 1 − (2/π) arctan(√(1−λ²)/λ) on the disk.
pub fn disk_rotation_closed_form(lambda: f64) -> f64 {
    1.0 - (2.0 / std::f64::consts::PI) * ((1.0 - lambda * lambda).sqrt() / lambda).atan()
}

/// λ for which the square rotation number equals `r` (inverse closed form).
pub fn square_lambda_for_rotation(r: f64) -> f64 {
    r / (r * r + (1.0 - r) * (1.0 - r)).sqrt()
}

/// λ for which the disk rotation number equals `r` (inverse closed form).
pub fn disk_lambda_for_rotation(r: f64) -> f64 {
    ((1.0 - r) * std::f64::consts::FRAC_PI_2).cos()
}

/// One row of a λ-scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub estimate: Option<RotationEstimate>,
    /// Set when the row was skipped (not λ-simple, corner-locked orbit, …).
    pub error: Option<String>,
    /// Filled in by plateau detection.
    pub plateau: Option<(i64, u64)>,
}

/// Rotation numbers over a λ-grid. Rows are independent; failures are
/// annotated per row and never abort the scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub orbit_length: usize,
    pub seed: f64,
}

/// Scan a strictly increasing λ-grid with orbits of length `n` from `seed`.
pub fn scan(curve: &BoundaryCurve, lambda_grid: &[f64], n: usize, seed: f64) -> ScanTable {
    use rayon::prelude::*;
    assert!(
        lambda_grid.windows(2).all(|w| w[0] < w[1]),
        "lambda grid must be strictly increasing"
    );
    let rows: Vec<ScanRow> = lambda_grid
        .par_iter()
        .map(|&lambda| match ChessBilliard::new(curve.clone(), lambda) {
            Ok(cb) => match rotation_number(&cb, seed, n) {
                Ok(est) => ScanRow {
                    lambda,
                    estimate: Some(est),
                    error: None,
                    plateau: None,
                },
                Err(e) => ScanRow {
                    lambda,
                    estimate: None,
                    error: Some(e.to_string()),
                    plateau: None,
                },
            },
            Err(e) => ScanRow {
                lambda,
                estimate: None,
                error: Some(e.to_string()),
                plateau: None,
            },
        })
        .collect();
    ScanTable {
        rows,
        orbit_length: n,
        seed,
    }
}

/// A detected rational plateau: consecutive scan rows locked onto p/q.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Plateau {
    pub p: i64,
    pub q: u64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub rows: usize,
}

/// Find maximal runs of consecutive rows whose estimate is within `tol` of a
/// rational p/q, q ≤ q_max, that the enclosing interval permits. Runs of a
/// single row have zero width and are dropped.
pub fn detect_plateaus(table: &mut ScanTable, q_max: u64, tol: f64) -> Vec<Plateau> {
    for row in &mut table.rows {
        row.plateau = None;
        if let Some(est) = &row.estimate {
            if let Some((p, q)) = nearest_rational(est.value, q_max) {
                let r = p as f64 / q as f64;
                // `value` is the reduced interval midpoint, so the interval
                // around it has half-width width/2
                let permits = (est.value - r).abs() <= 0.5 * est.width() + 1e-15;
                if (est.value - r).abs() <= tol && permits {
                    row.plateau = Some((p, q));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < table.rows.len() {
        match table.rows[i].plateau {
            Some(pq) => {
                let mut j = i;
                while j + 1 < table.rows.len() && table.rows[j + 1].plateau == Some(pq) {
                    j += 1;
                }
                if j > i {
                    out.push(Plateau {
                        p: pq.0,
                        q: pq.1,
                        lambda_lo: table.rows[i].lambda,
                        lambda_hi: table.rows[j].lambda,
                        rows: j - i + 1,
                    });
                }
                i = j + 1;
            }
            None => i += 1,
        }
    }
    out
}

/// Nearest p/q with 1 ≤ q ≤ q_max in lowest terms.
fn nearest_rational(x: f64, q_max: u64) -> Option<(i64, u64)> {
    let mut best: Option<(i64, u64, f64)> = None;
    for q in 1..=q_max {
        let p = (x * q as f64).round() as i64;
        let d = (x - p as f64 / q as f64).abs();
        if best.map(|b| d < b.2 - 1e-18).unwrap_or(true) {
            best = Some((p, q, d));
        }
    }
    best.map(|(p, q, _)| {
        let g = gcd(p.unsigned_abs(), q);
        (p / g as i64, q / g)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::RigidRotation;

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn closed_forms_at_symmetric_point() {
        assert!((square_rotation_closed_form(INV_SQRT2) - 0.5).abs() < 1e-15);
        assert!((disk_rotation_closed_form(INV_SQRT2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_at_lambda_06() {
        assert!((square_rotation_closed_form(0.6) - 3.0 / 7.0).abs() < 1e-15);
        let expect = 1.0 - (2.0 / std::f64::consts::PI) * (4.0f64 / 3.0).atan();
        assert!((disk_rotation_closed_form(0.6) - expect).abs() < 1e-15);
        assert!((disk_rotation_closed_form(0.6) - 0.409666).abs() < 1e-6);
    }

    #[test]
    fn closed_form_limits() {
        assert!(square_rotation_closed_form(1e-9) < 1e-8);
        assert!(disk_rotation_closed_form(1.0 - 1e-12) > 1.0 - 1e-5);
    }

    #[test]
    fn closed_form_inverses() {
        for r in [0.21, 0.5, 0.618, 0.83] {
            assert!(
                (square_rotation_closed_form(square_lambda_for_rotation(r)) - r).abs() < 1e-14
            );
            assert!((disk_rotation_closed_form(disk_lambda_for_rotation(r)) - r).abs() < 1e-14);
        }
    }

    #[test]
    fn disk_estimate_exact_half() {
        let cb = ChessBilliard::new(BoundaryCurve::disk(), INV_SQRT2).unwrap();
        let est = rotation_number(&cb, 0.0, 1000).unwrap();
        assert!((est.value - 0.5).abs() < 1e-10);
        assert!(est.width() <= 0.002 + 1e-12);
        assert!(est.contains(0.5));
    }

    #[test]
    fn square_estimate_encloses_three_sevenths() {
        let cb = ChessBilliard::new(BoundaryCurve::unit_square(), 0.6).unwrap();
        let est = rotation_number(&cb, 0.1234, 10_000).unwrap();
        assert!(est.contains(3.0 / 7.0), "interval [{},{}]", est.lo, est.hi);
        assert!((est.value - 3.0 / 7.0).abs() < 2e-4);
    }

    #[test]
    fn doubling_orbit_overlaps() {
        let cb = ChessBilliard::new(BoundaryCurve::disk(), 0.37).unwrap();
        let a = rotation_number(&cb, 0.11, 500).unwrap();
        let b = rotation_number(&cb, 0.11, 1000).unwrap();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn seed_independence() {
        let cb = ChessBilliard::new(BoundaryCurve::unit_square(), 0.543).unwrap();
        let ests: Vec<_> = (0..8)
            .map(|i| rotation_number(&cb, 0.05 + 0.11 * i as f64, 2000).unwrap())
            .collect();
        for a in &ests {
            for b in &ests {
                assert!(a.overlaps(b));
            }
        }
    }

    #[test]
    fn disk_scan_strictly_increasing_and_matches_closed_form() {
        let grid: Vec<f64> = (0..50).map(|i| 0.1 + 0.8 * i as f64 / 49.0).collect();
        let table = scan(&BoundaryCurve::disk(), &grid, 2000, 0.123);
        let mut last = -1.0;
        for row in &table.rows {
            let est = row.estimate.as_ref().expect("disk rows all succeed");
            assert!(est.value > last);
            last = est.value;
            assert!(est.contains(disk_rotation_closed_form(row.lambda)));
        }
    }

    #[test]
    fn square_scan_matches_closed_form_pointwise() {
        let grid: Vec<f64> = (0..20).map(|i| 0.15 + 0.7 * i as f64 / 19.0).collect();
        let table = scan(&BoundaryCurve::unit_square(), &grid, 5000, 0.2137);
        for row in &table.rows {
            let est = row.estimate.as_ref().unwrap();
            assert!(
                est.contains(square_rotation_closed_form(row.lambda)),
                "lambda={}",
                row.lambda
            );
        }
    }

    #[test]
    fn disk_scan_has_no_plateaus() {
        let grid: Vec<f64> = (0..50).map(|i| 0.1 + 0.8 * i as f64 / 49.0).collect();
        let mut table = scan(&BoundaryCurve::disk(), &grid, 20_000, 0.123);
        let plateaus = detect_plateaus(&mut table, 16, 2e-5);
        assert!(plateaus.is_empty(), "{plateaus:?}");
    }

    #[test]
    fn single_row_table_no_plateau() {
        let mut table = scan(&BoundaryCurve::disk(), &[0.5], 1000, 0.1);
        assert!(detect_plateaus(&mut table, 8, 1e-3).is_empty());
    }

    #[test]
    fn rigid_rotation_estimator_is_exact() {
        let map = RigidRotation(0.318);
        let est = rotation_number(&map, 0.9, 100).unwrap();
        assert!((est.value - 0.318).abs() < 1e-13);
    }

    #[test]
    fn nearest_rational_basics() {
        assert_eq!(nearest_rational(0.5, 8), Some((1, 2)));
        assert_eq!(nearest_rational(0.428571, 8), Some((3, 7)));
        assert_eq!(nearest_rational(0.332, 3), Some((1, 3)));
    }
}
