//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (run with `--nocapture` to see them).

use aquarium::arithmetic::{diophantine_profile, golden_mean};
use aquarium::billiard::{ChessBilliard, PerturbedRotation};
use aquarium::conjugacy::{
    kam_refine, solve_cohomological, ConjugacyError, ConjugacyResult, FourierFunction,
    CONJUGACY_K_MAX,
};
use aquarium::evolution::real_multiplier;
use aquarium::geometry::{BoundaryCurve, Sign};
use aquarium::layerpot::{self, halton_probes, manufactured, LayerSystem, PlaneBump};
use aquarium::rotation::{
    detect_plateaus, disk_rotation_closed_form, rotation_number, scan,
    square_lambda_for_rotation, square_rotation_closed_form,
};
use aquarium::square::{
    default_bump, evolve_energy, fit_energy_exponent, sine_coeffs, spectral_cluster,
};
use num_complex::Complex64;
use std::time::Instant;

/// λ₀ with square rotation number (√5−1)/2, the Diophantine reference point.
fn lambda0_square_golden() -> f64 {
    square_lambda_for_rotation(golden_mean())
}

#[test]
fn criterion_01_square_closed_form_agreement() {
    let t0 = Instant::now();
    let curve = BoundaryCurve::unit_square();
    let lambdas: Vec<f64> = (0..50).map(|i| 0.1 + 0.8 * i as f64 / 49.0).collect();
    let table = scan(&curve, &lambdas, 100_000, 0.2137);
    for row in &table.rows {
        let est = row
            .estimate
            .as_ref()
            .unwrap_or_else(|| panic!("row at lambda={} failed: {:?}", row.lambda, row.error));
        let exact = square_rotation_closed_form(row.lambda);
        assert!(
            est.contains(exact),
            "lambda={}: interval [{}, {}] misses {}",
            row.lambda,
            est.lo,
            est.hi,
            exact
        );
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 30.0, "runtime {dt:?} exceeds 30 s");
    println!(
        "[criterion 1] PASS square closed form: 50/50 intervals contain λ/(√(1−λ²)+λ), {dt:?}"
    );
}

#[test]
fn criterion_02_disk_closed_form_and_fig2() {
    let curve = BoundaryCurve::disk();
    let lambdas: Vec<f64> = (0..50).map(|i| 0.1 + 0.8 * i as f64 / 49.0).collect();
    let table = scan(&curve, &lambdas, 100_000, 0.2137);
    let mut prev = f64::NEG_INFINITY;
    for row in &table.rows {
        let est = row.estimate.as_ref().expect("disk rows all succeed");
        assert!(est.contains(disk_rotation_closed_form(row.lambda)));
        assert!(est.value > prev, "scan not strictly increasing");
        prev = est.value;
    }
    // figure reproduction through the CLI path: CSV with monotone rot column
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let code = aquarium_cli::dispatch([
        "aquarium",
        "reproduce-fig2",
        "--grid",
        "60",
        "--orbit",
        "20000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = aquarium_cli::scan_csv::parse_scan_csv(&text).unwrap();
    assert_eq!(rows.len(), 60);
    assert!(rows.windows(2).all(|w| w[1].rot > w[0].rot));
    println!(
        "[criterion 2] PASS disk closed form: 50/50 intervals, strictly increasing; fig-2 CSV reproduced ({} rows)",
        rows.len()
    );
}

#[test]
fn criterion_03_tilted_square_plateau() {
    let t0 = Instant::now();
    let curve = BoundaryCurve::tilted_square(std::f64::consts::PI / 20.0).unwrap();
    let lambdas: Vec<f64> = (0..200).map(|i| 0.1 + 0.8 * i as f64 / 199.0).collect();
    let mut table = scan(&curve, &lambdas, 100_000, 0.2137);
    let plateaus = detect_plateaus(&mut table, 64, 1e-4);
    let half = plateaus
        .iter()
        .find(|p| p.p == 1 && p.q == 2)
        .unwrap_or_else(|| panic!("no 1/2 plateau found; got {plateaus:?}"));
    assert!(half.lambda_hi > half.lambda_lo, "plateau has zero width");
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "runtime {dt:?} exceeds 2 min");
    println!(
        "[criterion 3] PASS tilted-square plateau at 1/2: λ ∈ [{:.4}, {:.4}] ({} rows), {dt:?}",
        half.lambda_lo, half.lambda_hi, half.rows
    );
}

#[test]
fn criterion_04_cohomological_round_trip_and_sobolev() {
    use rand::{Rng, SeedableRng};
    let alpha = golden_mean();
    let profile = diophantine_profile(alpha, 10_000, 1e-12);
    let c_inv = 1.0 / profile.c;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(404);
    let mut worst_sup = 0.0f64;
    for _ in 0..100 {
        let mut g = FourierFunction::zero(64);
        for k in 1..=64i64 {
            let decay = 1.0 / (1.0 + (k * k) as f64);
            g.set_coeff(
                k,
                Complex64::new(
                    decay * (rng.gen::<f64>() - 0.5),
                    decay * (rng.gen::<f64>() - 0.5),
                ),
            );
        }
        let v = solve_cohomological(&g, alpha, Some(&profile)).unwrap();
        // ‖(I − ρ_α^*)v − g‖_∞ on a fine grid
        let mut sup = 0.0f64;
        for i in 0..2048 {
            let x = i as f64 / 2048.0;
            sup = sup.max((v.eval(x) - v.eval(x + alpha) - g.eval(x)).abs());
        }
        worst_sup = worst_sup.max(sup);
        assert!(sup <= 1e-10, "round-trip sup error {sup}");
        for s in [0.0, 1.0, 2.0] {
            let lhs = v.sobolev_norm(s);
            let rhs = c_inv * g.sobolev_norm(s + profile.beta + 1.0);
            assert!(lhs <= rhs * (1.0 + 1e-12), "H^{s} bound: {lhs} > {rhs}");
        }
    }
    println!(
        "[criterion 4] PASS cohomological: 100 random g, worst round-trip sup {worst_sup:.3e} ≤ 1e-10; Sobolev bound holds for s ∈ {{0,1,2}} with C = 1/ĉ = {c_inv:.3}"
    );
}

#[test]
fn criterion_05_kam_residual_and_resonance() {
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
    let hit = hist.iter().position(|&r| r < 1e-9);
    assert!(
        matches!(hit, Some(i) if i <= 6),
        "residual history {hist:?} never dropped below 1e-9 within 6 iterations"
    );
    let resonant = PerturbedRotation {
        alpha: 0.5,
        eps: 0.05,
    };
    let seed = ConjugacyResult {
        periodic: FourierFunction::zero(CONJUGACY_K_MAX),
        alpha: 0.5,
        residual_history: Vec::new(),
    };
    let err = kam_refine(&resonant, &seed, 6);
    assert!(
        matches!(err, Err(ConjugacyError::ResonantDivisor { .. })),
        "expected ResonantDivisor, got {err:?}"
    );
    println!(
        "[criterion 5] PASS KAM: residual history {:?} (≤1e-9 at iteration {}); α=1/2 raises ResonantDivisor",
        hist.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>(),
        hit.unwrap()
    );
}

#[test]
fn criterion_06_square_evolution_dichotomy() {
    let bump = default_bump();
    // (a) resonant: λ₀² = 16/25
    let data = sine_coeffs(&bump, 128, 0.8).unwrap();
    let grid: Vec<f64> = (1..=40_000).map(|i| 0.25 * i as f64).collect();
    let series = evolve_energy(&data, &grid);
    let exponent = fit_energy_exponent(&series, 1e2, 1e4, 40);
    assert!(
        (exponent - 2.0).abs() <= 0.1,
        "resonant growth exponent {exponent}"
    );
    // (b) Diophantine-type λ₀
    let lam0 = lambda0_square_golden();
    let data = sine_coeffs(&bump, 128, lam0).unwrap();
    let series = evolve_energy(&data, &grid);
    let first: f64 = series
        .t
        .iter()
        .zip(&series.energy)
        .filter(|(t, _)| **t <= 5e3)
        .map(|(_, e)| *e)
        .fold(0.0, f64::max);
    let second: f64 = series
        .t
        .iter()
        .zip(&series.energy)
        .filter(|(t, _)| **t > 5e3)
        .map(|(_, e)| *e)
        .fold(0.0, f64::max);
    assert!(
        second <= 1.05 * first,
        "second-half max {second} vs first-half max {first}"
    );
    println!(
        "[criterion 6] PASS square dichotomy: resonant exponent {exponent:.3} (2.0±0.1); Diophantine max ratio {:.4} ≤ 1.05",
        second / first
    );
}

#[test]
fn criterion_07_spectral_cluster_scaling() {
    let lam0 = lambda0_square_golden();
    let z0 = lam0 * lam0;
    // arithmetic profile of the rotation number itself
    let profile = diophantine_profile(golden_mean(), 10_000, 1e-12);
    let data = sine_coeffs(&default_bump(), 512, lam0).unwrap();
    let mut masses = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let cluster = spectral_cluster(&data, z0, eps);
        assert!(cluster.count > 0, "empty cluster at eps={eps}");
        let bound = profile.cluster_lower_bound(eps);
        let min_k = cluster.min_k.unwrap();
        assert!(
            min_k >= bound,
            "eps={eps}: min|k| = {min_k} violates bound {bound}"
        );
        masses.push((eps, cluster.mass, min_k, bound));
    }
    // mass decay exponent over the three epsilons
    let pts: Vec<(f64, f64)> = masses.iter().map(|m| (m.0.ln(), m.1.ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(slope >= 3.0, "mass decay exponent {slope} < 3");
    for (eps, mass, min_k, bound) in &masses {
        println!(
            "[criterion 7]   eps={eps:.0e}: min|k| {min_k:.2} ≥ {bound:.2}, mass {mass:.3e}"
        );
    }
    println!("[criterion 7] PASS cluster scaling: counting bound holds, mass exponent {slope:.2} ≥ 3");
}

#[test]
fn criterion_08_manufactured_solution() {
    let t0 = Instant::now();
    let om = Complex64::new(0.6, 0.1);
    let disk = BoundaryCurve::disk();
    let BoundaryCurve::Fourier(fc) = &disk else {
        unreachable!()
    };
    let n = 256;
    let targets: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
    let rhs = manufactured::reference_boundary_data(fc, om, &targets, 2048);
    let mut sys = LayerSystem::assemble(&disk, om, n).unwrap();
    sys.solve(rhs.clone()).unwrap();
    let v = sys.density().unwrap().to_vec();

    // interior error against u* at 20 probes
    let probes = halton_probes(&disk, 20, 0.6);
    let u_at = |p: [f64; 2]| -> Complex64 {
        let s_ref = manufactured::reference_single_layer(fc, om, p, 2048);
        let mut s_num = Complex64::new(0.0, 0.0);
        for (j, vj) in v.iter().enumerate() {
            let q = fc.point(j as f64 / n as f64);
            s_num += layerpot::a_quadratic([p[0] - q[0], p[1] - q[1]], om).ln() * vj;
        }
        s_num *= layerpot::c_omega(om) / n as f64;
        Complex64::new(manufactured::u_star(p), 0.0) + s_ref - s_num
    };
    let mut interior_err = 0.0f64;
    for &p in &probes {
        interior_err = interior_err.max((u_at(p) - manufactured::u_star(p)).norm());
    }
    assert!(interior_err <= 1e-6, "interior error {interior_err}");

    // PDE residual: Richardson-extrapolated 5-point stencils, absolute and
    // relative to the forcing scale
    let f_scale = probes
        .iter()
        .map(|&p| manufactured::forcing(p, om).norm())
        .fold(1.0f64, f64::max);
    let stencil = |p: [f64; 2], d: f64| -> Complex64 {
        let lx = (u_at([p[0] + d, p[1]]) - 2.0 * u_at(p) + u_at([p[0] - d, p[1]])) / (d * d);
        let ly = (u_at([p[0], p[1] + d]) - 2.0 * u_at(p) + u_at([p[0], p[1] - d])) / (d * d);
        (Complex64::new(1.0, 0.0) - om * om) * ly - om * om * lx - manufactured::forcing(p, om)
    };
    let mut resid_abs = 0.0f64;
    let mut resid_rel = 0.0f64;
    for &p in probes.iter().take(8) {
        let r1 = stencil(p, 2e-4);
        let r2 = stencil(p, 1e-4);
        let extrap = (4.0 * r2 - r1) / 3.0;
        resid_abs = resid_abs.max(extrap.norm());
        resid_rel = resid_rel.max(r2.norm() / f_scale);
    }
    assert!(resid_abs <= 1e-5, "stencil residual {resid_abs}");
    assert!(resid_rel <= 1e-5, "relative stencil residual {resid_rel}");

    // boundary trace of the reconstructed u, evaluated directly on ∂Ω at
    // off-collocation points: u|∂Ω = C_ref v* − C v (u* vanishes there)
    let offsets: Vec<f64> = (0..64).map(|j| (j as f64 + 0.5) / 64.0).collect();
    let f_ref = manufactured::reference_boundary_data(fc, om, &offsets, 2048);
    let mut trace = 0.0f64;
    for (th, fr) in offsets.iter().zip(&f_ref) {
        let cv = LayerSystem::apply_offgrid(fc, om, &v, *th);
        trace = trace.max((fr - cv).norm());
    }
    assert!(trace <= 1e-6, "boundary trace {trace}");

    // extrapolation oracle: u along the inward normal tends to 0, and the
    // closer window extrapolates closer
    let th = 40.0 / 256.0;
    let q = fc.point(th);
    let nrm = {
        let d = fc.derivative(th);
        let l = (d[0] * d[0] + d[1] * d[1]).sqrt();
        [d[1] / l, -d[0] / l] // inward for the positively oriented disk
    };
    let extrap = |dists: [f64; 3]| -> f64 {
        let us: Vec<Complex64> = dists
            .iter()
            .map(|&s| u_at([q[0] + s * nrm[0], q[1] + s * nrm[1]]))
            .collect();
        let (s0, s1, s2) = (dists[0], dists[1], dists[2]);
        let l0 = s1 * s2 / ((s0 - s1) * (s0 - s2));
        let l1 = s0 * s2 / ((s1 - s0) * (s1 - s2));
        let l2 = s0 * s1 / ((s2 - s0) * (s2 - s1));
        (l0 * us[0] + l1 * us[1] + l2 * us[2]).norm()
    };
    let far = extrap([0.05, 0.04, 0.03]);
    let near = extrap([0.03, 0.025, 0.02]);
    assert!(near < far, "extrapolated trace must improve: {near} vs {far}");

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 10.0, "runtime {dt:?} exceeds 10 s");
    println!(
        "[criterion 8] PASS manufactured solution: interior {interior_err:.3e} ≤ 1e-6, stencil {resid_abs:.3e} (rel {resid_rel:.3e}) ≤ 1e-5, trace {trace:.3e} ≤ 1e-6, {dt:?}"
    );
}

#[test]
fn criterion_09_limiting_absorption_contrast() {
    let disk = BoundaryCurve::disk();
    let bump = PlaneBump {
        center: [0.03, 0.02],
        radius: 0.07,
        amplitude: 1.0,
    };
    let probes = halton_probes(&disk, 8, 0.36);
    let hs: Vec<f64> = (0..13).map(|i| 0.1 * 10f64.powf(-0.25 * i as f64)).collect();
    let lam_dio = aquarium::rotation::disk_lambda_for_rotation(golden_mean());
    let sweep_dio =
        layerpot::lap_sweep(&disk, lam_dio, 2.0, &hs, bump, &probes, 512).unwrap();
    let slope_dio = sweep_dio.vertical_slope().unwrap();
    assert!(
        (-0.1..=0.1).contains(&slope_dio),
        "Diophantine slope {slope_dio} outside [-0.1, 0.1]"
    );
    let lam_rat = std::f64::consts::FRAC_1_SQRT_2;
    let sweep_rat =
        layerpot::lap_sweep(&disk, lam_rat, 2.0, &hs, bump, &probes, 512).unwrap();
    let slope_rat = sweep_rat.vertical_slope().unwrap();
    assert!(slope_rat <= -0.5, "resonant slope {slope_rat} > -0.5");
    println!(
        "[criterion 9] PASS limiting absorption: slope(λ₀ Diophantine) = {slope_dio:.4} ∈ [-0.1,0.1]; slope(λ₀=1/√2) = {slope_rat:.4} ≤ -0.5"
    );
}

#[test]
fn criterion_10_dual_route_identity() {
    use rand::{Rng, SeedableRng};
    let lam0 = lambda0_square_golden();
    let data = sine_coeffs(&default_bump(), 128, lam0).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = rng.gen::<f64>() * 100.0;
        let x = [rng.gen::<f64>(), rng.gen::<f64>()];
        let mut direct = 0.0;
        let mut via_w = 0.0;
        for ((k1, k2), f) in data.modes() {
            let basis = (std::f64::consts::PI * k1 as f64 * x[0]).sin()
                * (std::f64::consts::PI * k2 as f64 * x[1]).sin();
            if basis == 0.0 {
                continue;
            }
            let kk = (k1 * k1 + k2 * k2) as f64;
            let z = (k2 * k2) as f64 / kk;
            direct += data.mode_solution((k1, k2), t).value * basis;
            via_w += -real_multiplier(z, lam0, t).unwrap() * f / kk * basis;
        }
        worst = worst.max((direct - via_w).abs());
        assert!(
            (direct - via_w).abs() <= 1e-9,
            "t={t} x={x:?}: {direct} vs {via_w}"
        );
    }
    println!(
        "[criterion 10] PASS dual-route identity: worst |direct − multiplier| = {worst:.3e} ≤ 1e-9 over 100 samples"
    );
}

#[test]
fn criterion_11_invariant_suite() {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestRunner};
    let t0 = Instant::now();

    // involution + level preservation on the disk over random (λ, θ)
    let mut runner = TestRunner::new(Config {
        cases: 64,
        ..Config::default()
    });
    runner
        .run(&(0.05f64..0.95, 0.0f64..1.0), |(lambda, theta)| {
            let cb = ChessBilliard::new(BoundaryCurve::disk(), lambda).unwrap();
            for sign in Sign::BOTH {
                let g = cb.gamma(sign, theta).unwrap();
                let gg = cb.gamma(sign, g).unwrap();
                let d = (gg - theta).rem_euclid(1.0);
                prop_assert!(d.min(1.0 - d) <= 1e-10);
                let l0 = aquarium::geometry::boundary_ell_real(cb.curve(), theta, lambda, sign);
                let l1 = aquarium::geometry::boundary_ell_real(cb.curve(), g, lambda, sign);
                prop_assert!((l0 - l1).abs() <= 1e-10 * (1.0 + l0.abs()));
            }
            Ok(())
        })
        .unwrap();

    // lift monotonicity on the square over random (λ, θ pairs)
    let mut runner = TestRunner::new(Config {
        cases: 64,
        ..Config::default()
    });
    runner
        .run(
            &(0.15f64..0.85, 0.0f64..1.0, 0.0f64..1.0),
            |(lambda, a, b)| {
                let cb = ChessBilliard::new(BoundaryCurve::unit_square(), lambda).unwrap();
                let lift = |t: f64| -> Result<f64, proptest::test_runner::TestCaseError> {
                    let img = cb
                        .chess_billiard(t)
                        .map_err(|_| TestCaseError::reject("corner"))?;
                    Ok(t + (img - t).rem_euclid(1.0))
                };
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                prop_assume!(hi - lo > 1e-9);
                prop_assert!(lift(lo)? < lift(hi)?);
                Ok(())
            },
        )
        .unwrap();

    // kernel symmetry of the assembled matrix at random ω
    let mut runner = TestRunner::new(Config {
        cases: 8,
        ..Config::default()
    });
    runner
        .run(&(0.2f64..0.9, 0.01f64..0.5), |(re, im)| {
            let sys =
                LayerSystem::assemble(&BoundaryCurve::disk(), Complex64::new(re, im), 32)
                    .unwrap();
            let m = sys.matrix();
            for i in 0..32 {
                for j in 0..32 {
                    prop_assert!((m[(i, j)] - m[(j, i)]).norm() <= 1e-12);
                }
            }
            Ok(())
        })
        .unwrap();

    // Parseval consistency over random admissible bumps
    let mut runner = TestRunner::new(Config {
        cases: 12,
        ..Config::default()
    });
    runner
        .run(
            &(0.3f64..0.7, 0.3f64..0.7, 0.1f64..0.22),
            |(cx, cy, r)| {
                prop_assume!(cx - r > 0.01 && cx + r < 0.99 && cy - r > 0.01 && cy + r < 0.99);
                let spec = aquarium::square::ForcingSpec::Bump {
                    center: [cx, cy],
                    radius: r,
                    amplitude: 1.0,
                };
                let p = |k: usize| -> f64 {
                    sine_coeffs(&spec, k, 0.5)
                        .unwrap()
                        .modes()
                        .map(|(_, f)| f * f)
                        .sum()
                };
                let (p48, p96) = (p(48), p(96));
                // partial sums increase and stabilize
                prop_assert!(p96 >= p48 - 1e-15);
                prop_assert!(p96 - p48 <= 2e-3 * p96.max(1e-30));
                Ok(())
            },
        )
        .unwrap();

    // CLI determinism: identical bytes for identical config + seed
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let code = aquarium_cli::dispatch([
            "aquarium",
            "scan",
            "--domain",
            r#"{"type":"disk"}"#,
            "--grid",
            "9",
            "--orbit",
            "3000",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        std::fs::read(&path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b, "scan output not byte-identical");

    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 300.0, "invariant suite took {dt:?}");
    println!("[criterion 11] PASS invariant suite (involution, lift monotonicity, kernel symmetry, Parseval, determinism) in {dt:?}");
}
