use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clausius_core::audit::{cyclic_integral, variation_report};
use clausius_core::densmat::{build_truncated, dimensionless_quantities, first_moment_checks, DimensionlessSet};
use clausius_core::drude::{moments, GaussianMoments, ModelParams, Variation};
use clausius_core::effective::{effective_star, grabert_comparison, zero_t_comparison, EffectiveOscillator, GrabertComparison, ZeroTComparison};
use clausius_core::figures::{figure_data, Format, RunConfig, Units};
use clausius_core::oracles::{fdt_quadrature_moments, matsubara_moments, star_bath_moments, FdtSpec};
use clausius_core::selftest;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "clausius", version, about = "Thermodynamics of a harmonic oscillator in a Drude bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct UnitArgs {
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    kb: f64,
    #[arg(long, default_value_t = 1.0)]
    w0: f64,
    /// Drude cutoff
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
}

impl UnitArgs {
    fn units(&self) -> Units {
        Units { hbar: self.hbar, kb: self.kb, w0: self.w0, omega: self.omega, mass: self.mass }
    }
}

#[derive(Args, Clone, Copy)]
struct PointArgs {
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    temp: f64,
    #[command(flatten)]
    units: UnitArgs,
}

impl PointArgs {
    fn params(&self) -> clausius_core::Result<ModelParams> {
        let cfg = RunConfig { units: self.units.units(), ..RunConfig::default() };
        let p = cfg.params(self.gamma, self.temp);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VaryArg {
    Damping,
    Mass,
    Spring,
}

impl From<VaryArg> for Variation {
    fn from(v: VaryArg) -> Self {
        match v {
            VaryArg::Damping => Variation::Damping,
            VaryArg::Mass => Variation::Mass,
            VaryArg::Spring => Variation::Spring,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Matsubara,
    Fdt,
    StarBath,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium <q²>, <p²> and v
    Moments {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
    },
    /// Reduced density matrix in the number basis
    Densmat {
        #[command(flatten)]
        point: PointArgs,
        /// bound on the discarded trace
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Effective uncoupled oscillator
    Effective {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Heat, work and entropy bookkeeping under a parameter variation
    Audit {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "damping")]
        vary: VaryArg,
        /// integrate the effective heat over damping from 0 to --gamma instead
        #[arg(long)]
        cyclic: bool,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Figure data table, one column per damping value
    Figure {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=7))]
        id: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1.5,4,10")]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 0.02)]
        t_min: f64,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
        #[arg(long, default_value_t = 150)]
        points: usize,
        #[command(flatten)]
        units: UnitArgs,
    },
    /// Brute-force moments next to the closed form
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        #[command(flatten)]
        point: PointArgs,
        /// Matsubara terms or bath modes
        #[arg(long)]
        n: Option<usize>,
    },
    /// Oracle-equivalence checks
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Numeric(clausius_core::Error),
    Io(io::Error),
    Selftest,
}

impl From<clausius_core::Error> for Failure {
    fn from(e: clausius_core::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn emit_record<T: Serialize>(value: &T, format: OutFormat, w: &mut dyn Write) -> Result<(), Failure> {
    match format {
        OutFormat::Json => emit_json(value, w),
        OutFormat::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.serialize(value)?;
            c.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DensmatJson {
    n_cut: usize,
    trace_deficit: f64,
    spectral_tail: f64,
    dimensionless: DimensionlessSet,
    q2_rel_error: f64,
    p2_rel_error: f64,
    entries: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct EffectiveJson {
    #[serde(flatten)]
    star: EffectiveOscillator,
    grabert: GrabertComparison,
    zero_t: ZeroTComparison,
}

#[derive(Serialize)]
struct OracleJson {
    oracle: &'static str,
    oracle_moments: GaussianMoments,
    closed_form: GaussianMoments,
    q2_rel_error: f64,
    p2_rel_error: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Moments { point, format } => {
            let m = moments(&point.params()?)?;
            emit_record(&m, format, &mut io::stdout().lock())
        }
        Command::Densmat { point, tolerance, format, out } => {
            let p = point.params()?;
            let m = moments(&p)?;
            let d = dimensionless_quantities(&m, p.mass, p.omega0(), p.hbar)?;
            let rho = build_truncated(&d, &m, tolerance)?;
            let mut w = sink(&out)?;
            match format {
                OutFormat::Csv => {
                    let mut c = csv::Writer::from_writer(&mut w);
                    c.write_record(["n", "m", "value"])?;
                    for (n, k, v) in rho.triples() {
                        c.serialize((n, k, v))?;
                    }
                    c.flush()?;
                    Ok(())
                }
                OutFormat::Json => {
                    let check = first_moment_checks(&rho, &m, p.mass, p.omega0(), p.hbar)?;
                    let entries = (0..rho.dim()).map(|n| (0..rho.dim()).map(|k| rho.get(n, k)).collect()).collect();
                    let j = DensmatJson {
                        n_cut: rho.n_cut,
                        trace_deficit: rho.trace_deficit,
                        spectral_tail: rho.spectral_tail,
                        dimensionless: d,
                        q2_rel_error: check.q2_rel_error,
                        p2_rel_error: check.p2_rel_error,
                        entries,
                    };
                    emit_json(&j, &mut w)
                }
            }
        }
        Command::Effective { point } => {
            let p = point.params()?;
            let m = moments(&p)?;
            let j = EffectiveJson {
                star: effective_star(&m, p.mass, p.k0(), p.hbar, p.kb)?,
                grabert: grabert_comparison(&m, p.beta, p.hbar),
                zero_t: zero_t_comparison(&m, p.mass, p.hbar, p.kb),
            };
            emit_json(&j, &mut io::stdout().lock())
        }
        Command::Audit { point, vary, cyclic, steps } => {
            let p = point.params()?;
            if cyclic {
                let r = cyclic_integral(&p, p.gamma, steps)?;
                emit_json(&r, &mut io::stdout().lock())
            } else {
                let r = variation_report(&p, vary.into())?;
                emit_json(&r, &mut io::stdout().lock())
            }
        }
        Command::Figure { id, out, format, gammas, t_min, t_max, points, units } => {
            let cfg = RunConfig {
                units: units.units(),
                gamma_list: gammas,
                t_min,
                t_max,
                n_points: points,
                format: match format {
                    OutFormat::Csv => Format::Csv,
                    OutFormat::Json => Format::Json,
                },
            };
            let table = figure_data(id, &cfg)?;
            let mut w = sink(&out)?;
            match cfg.format {
                Format::Csv => {
                    w.write_all(table.to_csv().as_bytes())?;
                    Ok(())
                }
                Format::Json => emit_json(&table, &mut w),
            }
        }
        Command::Oracle { kind, point, n } => {
            let p = point.params()?;
            let closed = moments(&p)?;
            let (name, m) = match kind {
                OracleKind::Matsubara => ("matsubara", matsubara_moments(&p, n.unwrap_or(2000), 10)?),
                OracleKind::Fdt => ("fdt", fdt_quadrature_moments(&p, None, &FdtSpec::default())?),
                OracleKind::StarBath => ("star-bath", star_bath_moments(&p, n.unwrap_or(1000), None)?),
            };
            let j = OracleJson {
                oracle: name,
                oracle_moments: m,
                closed_form: closed,
                q2_rel_error: ((m.q2 - closed.q2) / closed.q2).abs(),
                p2_rel_error: ((m.p2 - closed.p2) / closed.p2).abs(),
            };
            emit_json(&j, &mut io::stdout().lock())
        }
        Command::Selftest { json } => {
            let checks = selftest::run();
            let mut w = io::stdout().lock();
            if json {
                emit_json(&checks, &mut w)?;
            } else {
                writeln!(w, "{:<36} {:>10} {:>10}  result", "check", "error", "tolerance")?;
                for c in &checks {
                    writeln!(w, "{:<36} {:>10.2e} {:>10.0e}  {}", c.name, c.error, c.tolerance, if c.passed { "pass" } else { "FAIL" })?;
                }
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Selftest)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Selftest) => {
            eprintln!("selftest failed");
            ExitCode::from(4)
        }
    }
}
