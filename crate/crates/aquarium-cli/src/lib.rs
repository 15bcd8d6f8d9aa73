//! Command-line front end: argument parsing, experiment orchestration, and
//! reproducible CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

pub mod config;
pub mod emit;
pub mod scan_csv;

use aquarium::arithmetic::diophantine_profile;
use aquarium::billiard::{lift_orbit, ChessBilliard};
use aquarium::conjugacy::{birkhoff_conjugacy, kam_refine, CONJUGACY_GRID};
use aquarium::evolution::dyadic_split_energy;
use aquarium::geometry::DomainSpec;
use aquarium::layerpot::{self, halton_probes, PlaneBump};
use aquarium::rotation::{detect_plateaus, rotation_number, scan};
use aquarium::square::{evolve_energy, sine_coeffs, spectral_cluster, ForcingSpec};
use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use emit::{fmt_f64, fmt_opt, write_csv, Out};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use std::io::Write;

#[derive(Debug, Parser)]
#[command(
    name = "aquarium",
    about = "Chess billiard dynamics, rotation numbers, and boundary-integral experiments for internal waves",
    version
)]
struct Cli {
    /// Output path ('-' for stdout)
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads (default: AQUARIUM_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// RNG seed for anything randomized (orbit seeds, probe jitter)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DomainArg {
    /// Domain spec: inline JSON or @file
    #[arg(long)]
    domain: String,
}

impl DomainArg {
    fn parse(&self) -> Result<DomainSpec, CliError> {
        let text = if let Some(path) = self.domain.strip_prefix('@') {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("reading {path}: {e}")))?
        } else {
            self.domain.clone()
        };
        // convenience names accepted alongside full JSON
        match text.trim() {
            "disk" => return Ok(DomainSpec::Disk),
            "square" => return Ok(DomainSpec::Square),
            _ => {}
        }
        DomainSpec::from_json(&text).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn parse_forcing(text: &str) -> Result<ForcingSpec, CliError> {
    let body = if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {path}: {e}")))?
    } else {
        text.to_string()
    };
    if body.trim() == "default" {
        return Ok(aquarium::square::default_bump());
    }
    ForcingSpec::from_json(&body).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_plane_bump(text: &str) -> Result<PlaneBump, CliError> {
    if text.trim() == "default" {
        return Ok(PlaneBump {
            center: [0.03, 0.02],
            radius: 0.07,
            amplitude: 1.0,
        });
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Config(format!("bump at {}: {}", e.path(), e.inner())))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rotation-number scan over a lambda grid
    Scan {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, default_value_t = 0.1)]
        lambda_min: f64,
        #[arg(long, default_value_t = 0.9)]
        lambda_max: f64,
        /// grid points
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// orbit length per grid point
        #[arg(long, default_value_t = 100_000)]
        orbit: usize,
        /// plateau detection: max denominator
        #[arg(long, default_value_t = 64)]
        qmax: u64,
        /// plateau detection: rational lock tolerance
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Rotation number at a single lambda
    Rotnum {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 100_000)]
        orbit: usize,
        #[arg(long)]
        theta0: Option<f64>,
    },
    /// Billiard orbit in lift coordinates
    Orbit {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        theta0: Option<f64>,
    },
    /// Finite-scale Diophantine profile of a number or of scan results
    Diophantine {
        #[arg(long, conflicts_with = "from_scan")]
        value: Option<f64>,
        #[arg(long)]
        from_scan: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Numerical conjugacy of the billiard to a rigid rotation
    Conjugate {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda: f64,
        /// target rotation number (default: estimated from an orbit)
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        birkhoff_n: usize,
        #[arg(long, default_value_t = CONJUGACY_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        kam_iters: usize,
        /// also write phi samples as CSV here
        #[arg(long)]
        csv_out: Option<String>,
    },
    /// Energy of the forced square solution over time
    SquareEvolve {
        #[arg(long)]
        lambda0: f64,
        /// forcing: JSON, @file, or "default"
        #[arg(long, default_value = "default")]
        f: String,
        #[arg(long, default_value_t = 1000.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.25)]
        dt: f64,
        #[arg(long, default_value_t = 128)]
        modes: usize,
    },
    /// Spectral-measure cluster estimates near a point
    SpectralMeasure {
        #[arg(long)]
        center: f64,
        /// comma-separated epsilon values
        #[arg(long, value_delimiter = ',')]
        eps_list: Vec<f64>,
        #[arg(long, default_value = "default")]
        f: String,
        #[arg(long, default_value_t = 512)]
        modes: usize,
        /// forcing frequency recorded with the data
        #[arg(long, default_value_t = 0.5)]
        lambda0: f64,
    },
    /// Dyadic spectral shells of the square evolution
    Dyadic {
        #[arg(long)]
        lambda0: f64,
        #[arg(long, default_value = "default")]
        f: String,
        #[arg(long, default_value_t = 128)]
        modes: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long)]
        t: f64,
    },
    /// Solve the single-layer boundary system at complex omega
    LayerSolve {
        #[command(flatten)]
        domain: DomainArg,
        /// omega as "re,im"
        #[arg(long)]
        omega: String,
        /// interior bump: JSON or "default"
        #[arg(long, default_value = "default")]
        f: String,
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
    /// Limiting-absorption sweep towards the real axis
    LapSweep {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda0: f64,
        /// polynomial region degree
        #[arg(long, default_value_t = 2.0)]
        d: f64,
        #[arg(long, default_value_t = 0.1)]
        h_start: f64,
        #[arg(long, default_value_t = 13)]
        h_steps: usize,
        /// geometric ratio between consecutive h
        #[arg(long, default_value_t = 0.5623413251903491)]
        h_ratio: f64,
        #[arg(long, default_value = "default")]
        f: String,
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long, default_value_t = 512)]
        nodes: usize,
    },
    /// Canonical rotation-number curve over a dense lambda grid (disk by
    /// default), the figure-2 companion of `scan`
    ReproduceFig2 {
        #[arg(long, default_value = r#"{"type":"disk"}"#)]
        domain: String,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 100_000)]
        orbit: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

fn numerical<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parse argv and run one command; returns the process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own usage/help; help and version are success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var("AQUARIUM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // a failure here only means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok(()) => 0,
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            2
        }
        Err(e) => {
            eprintln!("{e}");
            3
        }
    }
}

/// Deterministic orbit seed derived from the CLI seed.
fn orbit_seed(seed: u64) -> f64 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // keep away from polygon vertices at rational multiples
    0.05 + 0.9 * rng.gen::<f64>()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = Out::create(cli.out.as_deref())?;
    let seed = cli.seed;
    match cli.command {
        Command::Scan {
            domain,
            lambda_min,
            lambda_max,
            grid,
            orbit,
            qmax,
            tol,
        } => {
            let spec = domain.parse()?;
            if !(lambda_min < lambda_max && grid >= 1) {
                return Err(CliError::Config("need lambda_min < lambda_max".into()));
            }
            let cfg = RunConfig {
                command: "scan".into(),
                domain: Some(spec.clone()),
                lambda_min: Some(lambda_min),
                lambda_max: Some(lambda_max),
                grid: Some(grid),
                orbit: Some(orbit),
                q_max: Some(qmax),
                tol: Some(tol),
                seed,
                ..Default::default()
            };
            run_scan(&mut out, &cfg)
        }
        Command::Rotnum {
            domain,
            lambda,
            orbit,
            theta0,
        } => {
            let spec = domain.parse()?;
            let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
            let cfg = RunConfig {
                command: "rotnum".into(),
                domain: Some(spec),
                lambda: Some(lambda),
                orbit: Some(orbit),
                theta0,
                seed,
                ..Default::default()
            };
            let th0 = theta0.unwrap_or_else(|| orbit_seed(seed));
            let cb = ChessBilliard::new(curve, lambda).map_err(numerical)?;
            let est = rotation_number(&cb, th0, orbit).map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "lambda,rot,lo,hi",
                std::iter::once(format!(
                    "{},{},{},{}",
                    fmt_f64(lambda),
                    fmt_f64(est.value),
                    fmt_f64(est.lo),
                    fmt_f64(est.hi)
                )),
            )?;
            Ok(())
        }
        Command::Orbit {
            domain,
            lambda,
            steps,
            theta0,
        } => {
            let spec = domain.parse()?;
            let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
            let cfg = RunConfig {
                command: "orbit".into(),
                domain: Some(spec),
                lambda: Some(lambda),
                steps: Some(steps),
                theta0,
                seed,
                ..Default::default()
            };
            let th0 = theta0.unwrap_or_else(|| orbit_seed(seed));
            let cb = ChessBilliard::new(curve, lambda).map_err(numerical)?;
            let orbit = lift_orbit(&cb, th0, steps).map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "step,theta_lift,theta_mod1",
                orbit.iter().enumerate().map(|(k, &x)| {
                    format!("{k},{},{}", fmt_f64(x), fmt_f64(x.rem_euclid(1.0)))
                }),
            )?;
            Ok(())
        }
        Command::Diophantine {
            value,
            from_scan,
            qmax,
            tol,
        } => {
            let cfg = RunConfig {
                command: "diophantine".into(),
                value,
                q_max: Some(qmax),
                tol: Some(tol),
                seed,
                ..Default::default()
            };
            let values: Vec<f64> = match (value, &from_scan) {
                (Some(v), None) => vec![v],
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Config(format!("reading {path}: {e}")))?;
                    scan_csv::parse_scan_csv(&text)
                        .map_err(CliError::Config)?
                        .iter()
                        .map(|r| r.rot)
                        .collect()
                }
                _ => {
                    return Err(CliError::Config(
                        "give exactly one of --value or --from-scan".into(),
                    ))
                }
            };
            let profiles: Vec<_> = values
                .iter()
                .map(|&v| diophantine_profile(v, qmax, tol))
                .collect();
            let doc = serde_json::json!({
                "config": serde_json::to_value(&cfg).unwrap(),
                "note": format!("finite-scale classification at q_max = {qmax}; true Diophantinity is not decidable from floats"),
                "profiles": profiles,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(())
        }
        Command::Conjugate {
            domain,
            lambda,
            alpha,
            birkhoff_n,
            grid,
            kam_iters,
            csv_out,
        } => {
            let spec = domain.parse()?;
            let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
            let cfg = RunConfig {
                command: "conjugate".into(),
                domain: Some(spec),
                lambda: Some(lambda),
                alpha,
                birkhoff_n: Some(birkhoff_n),
                grid: Some(grid),
                kam_iters: Some(kam_iters),
                seed,
                ..Default::default()
            };
            let cb = ChessBilliard::new(curve, lambda).map_err(numerical)?;
            let alpha = match alpha {
                Some(a) => a,
                None => {
                    rotation_number(&cb, orbit_seed(seed), birkhoff_n)
                        .map_err(numerical)?
                        .value
                }
            };
            let seed_conj = birkhoff_conjugacy(&cb, alpha, birkhoff_n, grid).map_err(numerical)?;
            let refined = kam_refine(&cb, &seed_conj, kam_iters).map_err(numerical)?;
            let k_max = refined.periodic.k_max() as i64;
            let phi_fourier: Vec<(i64, f64, f64)> = (-k_max..=k_max)
                .map(|k| {
                    let c = refined.periodic.coeff(k);
                    (k, c.re, c.im)
                })
                .filter(|(_, re, im)| re.abs() + im.abs() > 1e-300)
                .collect();
            let doc = serde_json::json!({
                "config": serde_json::to_value(&cfg).unwrap(),
                "alpha": refined.alpha,
                "residual_history": refined.residual_history,
                "phi_fourier": phi_fourier,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
            if let Some(path) = csv_out {
                let mut csv = Out::create(Some(&path))?;
                write_csv(
                    &mut csv,
                    &cfg,
                    "theta,phi",
                    (0..1024).map(|i| {
                        let x = i as f64 / 1024.0;
                        format!("{},{}", fmt_f64(x), fmt_f64(refined.phi(x)))
                    }),
                )?;
            }
            Ok(())
        }
        Command::SquareEvolve {
            lambda0,
            f,
            tmax,
            dt,
            modes,
        } => {
            let forcing = parse_forcing(&f)?;
            let cfg = RunConfig {
                command: "square-evolve".into(),
                forcing: Some(forcing.clone()),
                lambda0: Some(lambda0),
                t_max: Some(tmax),
                dt: Some(dt),
                modes: Some(modes),
                seed,
                ..Default::default()
            };
            if !(lambda0 > 0.0 && lambda0 < 1.0 && dt > 0.0 && tmax > 0.0) {
                return Err(CliError::Config("need 0<lambda0<1, dt>0, tmax>0".into()));
            }
            let data = sine_coeffs(&forcing, modes, lambda0).map_err(numerical)?;
            let steps = (tmax / dt).floor() as usize;
            let grid: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
            let series = evolve_energy(&data, &grid);
            write_csv(
                &mut out,
                &cfg,
                "t,energy",
                grid.iter()
                    .zip(&series.energy)
                    .map(|(t, e)| format!("{},{}", fmt_f64(*t), fmt_f64(*e))),
            )?;
            Ok(())
        }
        Command::SpectralMeasure {
            center,
            eps_list,
            f,
            modes,
            lambda0,
        } => {
            let forcing = parse_forcing(&f)?;
            if eps_list.is_empty() || eps_list.iter().any(|&e| e <= 0.0) {
                return Err(CliError::Config("eps list must be positive".into()));
            }
            let cfg = RunConfig {
                command: "spectral-measure".into(),
                forcing: Some(forcing.clone()),
                center: Some(center),
                eps_list: Some(eps_list.clone()),
                modes: Some(modes),
                lambda0: Some(lambda0),
                seed,
                ..Default::default()
            };
            let data = sine_coeffs(&forcing, modes, lambda0).map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "eps,count,mass,min_k",
                eps_list.iter().map(|&eps| {
                    let c = spectral_cluster(&data, center, eps);
                    format!(
                        "{},{},{},{}",
                        fmt_f64(eps),
                        c.count,
                        fmt_f64(c.mass),
                        fmt_opt(c.min_k)
                    )
                }),
            )?;
            Ok(())
        }
        Command::Dyadic {
            lambda0,
            f,
            modes,
            delta,
            t,
        } => {
            let forcing = parse_forcing(&f)?;
            let cfg = RunConfig {
                command: "dyadic".into(),
                forcing: Some(forcing.clone()),
                lambda0: Some(lambda0),
                modes: Some(modes),
                delta: Some(delta),
                t: Some(t),
                seed,
                ..Default::default()
            };
            let data = sine_coeffs(&forcing, modes, lambda0).map_err(numerical)?;
            let split = dyadic_split_energy(&data, lambda0, delta, t, None).map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "shell,mass,t",
                split
                    .shells
                    .iter()
                    .map(|s| format!("{},{},{}", s.shell, fmt_f64(s.mass), fmt_f64(t))),
            )?;
            Ok(())
        }
        Command::LayerSolve {
            domain,
            omega,
            f,
            probes,
            nodes,
        } => {
            let spec = domain.parse()?;
            let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
            let (re, im) = parse_omega(&omega)?;
            let bump = parse_plane_bump(&f)?;
            let cfg = RunConfig {
                command: "layer-solve".into(),
                domain: Some(spec),
                bump: Some(bump),
                omega: Some((re, im)),
                probes: Some(probes),
                nodes: Some(nodes),
                seed,
                ..Default::default()
            };
            let sys = layerpot::assemble_and_solve(&curve, Complex64::new(re, im), bump, nodes)
                .map_err(numerical)?;
            let pts = halton_probes(&curve, probes, 0.6);
            let u = sys.evaluate_interior(&pts).map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "x,y,u_re,u_im",
                pts.iter().zip(&u).map(|(p, v)| {
                    format!(
                        "{},{},{},{}",
                        fmt_f64(p[0]),
                        fmt_f64(p[1]),
                        fmt_f64(v.re),
                        fmt_f64(v.im)
                    )
                }),
            )?;
            Ok(())
        }
        Command::LapSweep {
            domain,
            lambda0,
            d,
            h_start,
            h_steps,
            h_ratio,
            f,
            probes,
            nodes,
        } => {
            let spec = domain.parse()?;
            let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
            if !(h_ratio > 0.0 && h_ratio < 1.0 && h_start > 0.0) {
                return Err(CliError::Config("need 0 < h_ratio < 1, h_start > 0".into()));
            }
            let bump = parse_plane_bump(&f)?;
            let cfg = RunConfig {
                command: "lap-sweep".into(),
                domain: Some(spec),
                bump: Some(bump),
                lambda0: Some(lambda0),
                degree: Some(d),
                h_start: Some(h_start),
                h_steps: Some(h_steps),
                h_ratio: Some(h_ratio),
                probes: Some(probes),
                nodes: Some(nodes),
                seed,
                ..Default::default()
            };
            let hs: Vec<f64> = (0..h_steps).map(|i| h_start * h_ratio.powi(i as i32)).collect();
            let pts = halton_probes(&curve, probes, 0.36);
            let sweep = layerpot::lap_sweep(&curve, lambda0, d, &hs, bump, &pts, nodes)
                .map_err(numerical)?;
            write_csv(
                &mut out,
                &cfg,
                "h,eps,v_l2,u_max,bdry_resid,cond_est",
                sweep.rows.iter().map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        fmt_f64(r.h),
                        fmt_f64(r.eps),
                        fmt_opt(r.v_l2),
                        fmt_opt(r.u_max),
                        fmt_opt(r.bdry_resid),
                        fmt_opt(r.cond_est)
                    )
                }),
            )?;
            Ok(())
        }
        Command::ReproduceFig2 {
            domain,
            grid,
            orbit,
        } => {
            let arg = DomainArg { domain };
            let spec = arg.parse()?;
            let cfg = RunConfig {
                command: "reproduce-fig2".into(),
                domain: Some(spec.clone()),
                lambda_min: Some(0.05),
                lambda_max: Some(0.95),
                grid: Some(grid),
                orbit: Some(orbit),
                q_max: Some(64),
                tol: Some(1e-4),
                seed,
                ..Default::default()
            };
            run_scan(&mut out, &cfg)
        }
    }
}

/// Shared scan runner for `scan` and `reproduce-fig2`.
fn run_scan(out: &mut Out, cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.domain.clone().expect("scan config has a domain");
    let curve = spec.build().map_err(|e| CliError::Config(e.to_string()))?;
    let (lo, hi) = (cfg.lambda_min.unwrap(), cfg.lambda_max.unwrap());
    let grid_n = cfg.grid.unwrap();
    let lambdas: Vec<f64> = (0..grid_n)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_n.max(2) - 1) as f64)
        .collect();
    let mut table = scan(&curve, &lambdas, cfg.orbit.unwrap(), orbit_seed(cfg.seed));
    detect_plateaus(&mut table, cfg.q_max.unwrap(), cfg.tol.unwrap());
    write_csv(
        out,
        cfg,
        "lambda,rot,lo,hi,plateau_flag",
        table.rows.iter().map(|row| match &row.estimate {
            Some(est) => format!(
                "{},{},{},{},{}",
                fmt_f64(row.lambda),
                fmt_f64(est.value),
                fmt_f64(est.lo),
                fmt_f64(est.hi),
                u8::from(row.plateau.is_some())
            ),
            None => format!("{},nan,nan,nan,0", fmt_f64(row.lambda)),
        }),
    )?;
    Ok(())
}

fn parse_omega(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "omega must be \"re,im\", got {text:?}"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("omega re: {e}")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::Config(format!("omega im: {e}")))?;
    if !(re > 0.0 && re < 1.0 && im.is_finite() && im != 0.0) {
        return Err(CliError::Config(
            "omega needs 0 < re < 1 and im != 0".into(),
        ));
    }
    Ok((re, im))
}
