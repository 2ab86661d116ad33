use clap::{Args, Parser, Subcommand};
use spreadfront::config::{parse_config, parse_sweep};
use spreadfront::dichotomy::thresholds;
use spreadfront::error::{Error, Result};
use spreadfront::runner::{run_single, run_sweep, RunOutcome};
use spreadfront::waves::{
    asymptotic_speed, minimal_wave_speed, semi_wave_slope, solve_wavefront,
};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "spreadfront", about = "Free-boundary predator-prey simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output directory for run artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Number of evenly spaced profile snapshots (overrides the config).
    #[arg(long, global = true)]
    snapshots: Option<usize>,
    /// Suppress per-run console output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single configuration and classify the trajectory.
    Simulate { config: PathBuf },
    /// Print the threshold set for a configuration without running it.
    Thresholds { config: PathBuf },
    /// Print the asymptotic speed and a table of semi-wave origin slopes.
    Semiwave { config: PathBuf },
    /// Solve the decoupled wavefront profiles at a given speed.
    Waveprofile {
        config: PathBuf,
        #[arg(long)]
        speed: f64,
    },
    /// Run a parameter sweep and write a summary table.
    Sweep { config: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let quiet = cli.common.quiet;
    match &cli.command {
        Command::Simulate { config } => {
            let mut cfg = parse_config(&fs::read_to_string(config)?)?;
            if let Some(k) = cli.common.snapshots {
                cfg.solver.snapshots = k;
            }
            let record = run_single(&cfg, &cli.common.out)?;
            match &record.outcome {
                RunOutcome::Completed { report, speed } => {
                    if !quiet {
                        println!("run {}", record.run_id);
                        println!("verdict: {:?} ({:?} at t = {})",
                            report.verdict, report.evidence.rule, report.evidence.t);
                        println!("final h: {:.6}", report.final_h);
                        if let Some((eu, ev)) = report.equilibrium_error {
                            println!("equilibrium errors: |u-u*| = {eu:.3e}, |v-v*| = {ev:.3e}");
                        }
                        if let Some(s) = speed {
                            println!(
                                "front speed: {:.6} in [{:.6}, {:.6}] (within bracket: {})",
                                s.slope, s.bracket.0, s.bracket.1, s.within_bracket
                            );
                        }
                        println!("trajectory: {}", record.trajectory_file);
                    }
                    Ok(())
                }
                RunOutcome::Failed { error } => Err(Error::IntegrationFault {
                    t: f64::NAN,
                    message: error.clone(),
                }),
            }
        }
        Command::Thresholds { config } => {
            let cfg = parse_config(&fs::read_to_string(config)?)?;
            let ip = cfg.initial_profile()?;
            let th = thresholds(&cfg.params, &ip, cfg.theta)?;
            let mut out = String::new();
            writeln!(out, "h_star = {:.12}", th.h_star).unwrap();
            writeln!(out, "D_star = {:.12}", th.d_star).unwrap();
            writeln!(out, "mu1 = {:.12}", th.mu1).unwrap();
            match th.mu2 {
                Some(m2) => writeln!(out, "mu2 = {m2:.12}").unwrap(),
                None => writeln!(out, "mu2 = unavailable").unwrap(),
            }
            writeln!(out, "mu_bar = {:.12}", th.mu_bar).unwrap();
            match th.vanishing {
                Some(c) => {
                    writeln!(out, "eps = {:.12}", c.eps).unwrap();
                    writeln!(out, "beta = {:.12}", c.beta).unwrap();
                    writeln!(out, "M_tilde = {:.12}", c.m_tilde).unwrap();
                    writeln!(out, "mu_lower = {:.12}", c.mu_lower).unwrap();
                }
                None => writeln!(out, "vanishing constants = unavailable (h0 >= h_star)").unwrap(),
            }
            print!("{out}");
            Ok(())
        }
        Command::Semiwave { config } => {
            let cfg = parse_config(&fs::read_to_string(config)?)?;
            let p = &cfg.params;
            let s_star = asymptotic_speed(p)?;
            println!("s_star = {s_star:.10}");
            println!("s_min = {:.10}", minimal_wave_speed(p));
            println!("s,slope_at_origin");
            let s_max = 2.0 * (p.d_ratio * p.kappa).sqrt();
            for k in 0..10 {
                let s = s_max * k as f64 / 10.0;
                let slope = semi_wave_slope(p.d_ratio, p.kappa, p.alpha, s)?;
                println!("{s:.6},{slope:.10}");
            }
            Ok(())
        }
        Command::Waveprofile { config, speed } => {
            let cfg = parse_config(&fs::read_to_string(config)?)?;
            let p = &cfg.params;
            let ip = cfg.initial_profile()?;
            let m1 = 1.0_f64.max(ip.u0_sup);
            let wf = solve_wavefront(p.d_ratio, p.kappa, m1, p.alpha, *speed)?;
            fs::create_dir_all(&cli.common.out)?;
            let residuals = [
                wf.u.residual(1.0, 1.0, *speed),
                wf.v.residual(p.d_ratio, p.kappa, *speed),
            ];
            for ((name, front), res) in [("u", &wf.u), ("v", &wf.v)].into_iter().zip(residuals) {
                let mut out = String::from("xi,value,deriv\n");
                for j in 0..front.xi.len() {
                    writeln!(out, "{:.16e},{:.16e},{:.16e}", front.xi[j], front.values[j],
                        front.deriv[j]).unwrap();
                }
                let path = cli.common.out.join(format!("wavefront-{name}.csv"));
                fs::write(&path, out)?;
                if !quiet {
                    println!(
                        "{name}: left limit {:.6}, residual {res:.3e} -> {}",
                        front.left_limit,
                        path.display()
                    );
                }
            }
            Ok(())
        }
        Command::Sweep { config } => {
            let spec = parse_sweep(&fs::read_to_string(config)?)?;
            let summary = run_sweep(&spec, &cli.common.out)?;
            if !quiet {
                for row in &summary.rows {
                    let coords: Vec<String> =
                        row.coordinates.iter().map(|c| format!("{c}")).collect();
                    println!("[{}] {}", coords.join(", "), row.verdict);
                }
                println!("summary: {}", summary.summary_file.display());
            }
            Ok(())
        }
    }
}
