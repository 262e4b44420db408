//! `young`: coherence, fringe, visibility, and optimization workflows over
//! state documents, emitting JSON (CSV for fringe curves).

mod phase_expr;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;

use young_core::coherence::decompose;
use young_core::fock::{basis_size, parse_state, PhaseConfig, PhotonState};
use young_core::interference::{
    fringe_curve, intensity, two_path_phase_matched, two_path_visibility_analytic, visibility,
};
use young_core::optimize::{
    lagrange_residual, maximize_visibility_coefficients, unit_sphere_constraint, CoeffOptConfig,
    TorusSearchConfig,
};
use young_core::Complex64;

use phase_expr::parse_phase_list;

#[derive(Parser)]
#[command(
    name = "young",
    version,
    about = "Multi-photon multi-path interference: coherence, fringes, visibility, optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total l1 coherence of a state and its local/collective pair decomposition
    Coherence {
        state_file: PathBuf,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every pair of populated terms as local or collective
    Classify {
        state_file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the fringe along one mode's phase and emit CSV
    Fringe {
        state_file: PathBuf,
        /// Mode whose phase is swept over [0, 2pi)
        #[arg(long, default_value_t = 0)]
        mode: usize,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fringe visibility via a torus search over relative phases
    Visibility {
        state_file: PathBuf,
        /// Grid points per torus dimension
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Refinement iteration cap
        #[arg(long, default_value_t = 200)]
        refine: usize,
        /// Also report the intensity at these fixed phases (radians;
        /// pi-literals such as 2pi/3 are accepted)
        #[arg(long)]
        phases: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search input coefficients for maximal visibility
    Optimize {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        photons: u32,
        /// Random starts beyond the deterministic balanced start
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive the published reference values and report pass/fail rows
    VerifyPaper {
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Core(#[from] young_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                young_core::Error::BasisTooLarge { .. } | young_core::Error::GridTooLarge { .. },
            ) => 3,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            let rendered = err.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or("invalid arguments");
            if first.starts_with("error:") {
                eprintln!("{first}");
            } else {
                eprintln!("error: {first}");
            }
            for line in lines {
                eprintln!("{line}");
            }
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Coherence { state_file, out } => {
            let state = load_state(&state_file)?;
            let report = decompose(&state);
            emit(&out, &pretty(serde_json::to_value(&report).expect("report serializes")))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { state_file, out } => {
            let state = load_state(&state_file)?;
            let report = decompose(&state);
            let pairs: Vec<serde_json::Value> = report
                .entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "index_a": e.index_a,
                        "index_b": e.index_b,
                        "occ_a": state.terms()[e.index_a].occupation().counts(),
                        "occ_b": state.terms()[e.index_b].occupation().counts(),
                        "kind": e.kind,
                    })
                })
                .collect();
            let value = serde_json::json!({
                "modes": state.modes(),
                "photons": state.photons(),
                "state_class": report.state_class,
                "local_count": report.local_count(),
                "collective_count": report.collective_count(),
                "pairs": pairs,
            });
            emit(&out, &pretty(value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fringe {
            state_file,
            mode,
            samples,
            out,
        } => {
            let state = load_state(&state_file)?;
            let curve = fringe_curve(&state, mode, samples)?;
            emit(&out, &curve.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Visibility {
            state_file,
            grid,
            refine,
            phases,
            seed,
            out,
        } => {
            let state = load_state(&state_file)?;
            let cfg = TorusSearchConfig {
                grid_points_per_dim: grid,
                refine_iterations: refine,
                seed: resolve_seed(seed)?,
                ..TorusSearchConfig::default()
            };
            let result = visibility(&state, &cfg);
            let mut value = result.to_json();
            let object = value.as_object_mut().expect("visibility report is an object");
            if state.modes() == 2 && two_path_phase_matched(&state)? {
                let moduli: Vec<f64> = state.terms().iter().map(|t| t.modulus()).collect();
                if let Ok(analytic) = two_path_visibility_analytic(&moduli) {
                    object.insert("analytic_visibility".into(), analytic.into());
                }
            }
            if let Some(raw) = phases {
                let parsed = parse_phase_list(&raw).map_err(CliError::Input)?;
                let config = PhaseConfig::new(parsed);
                let at_phases = intensity(&state, &config)?;
                object.insert(
                    "intensity_at_phases".into(),
                    serde_json::json!({
                        "phases": config.phases(),
                        "intensity": at_phases,
                    }),
                );
            }
            emit(&out, &pretty(value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize {
            modes,
            photons,
            starts,
            seed,
            grid,
            out,
        } => {
            let dim = if modes >= 2 && photons >= 1 {
                basis_size(modes, photons)
            } else {
                0
            };
            if dim > young_core::oracle::DEFAULT_BASIS_CAP {
                return Err(young_core::Error::BasisTooLarge {
                    dim,
                    cap: young_core::oracle::DEFAULT_BASIS_CAP,
                }
                .into());
            }
            let seed = resolve_seed(seed)?;
            let cfg = CoeffOptConfig {
                starts,
                seed,
                ..CoeffOptConfig::default()
            };
            let outcome = maximize_visibility_coefficients(modes, photons, &cfg)?;
            let report_cfg = TorusSearchConfig {
                grid_points_per_dim: grid,
                seed,
                ..TorusSearchConfig::default()
            };
            let vis = visibility(&outcome.state, &report_cfg);
            let value = serde_json::json!({
                "modes": modes,
                "photons": photons,
                "seed": seed,
                "starts": starts,
                "iterations": outcome.iterations,
                "evaluations": outcome.evaluations,
                "best_state": outcome.state.to_document_json(),
                "visibility": vis.to_json(),
                "residuals": {
                    "lagrange": best_state_residual(&outcome.state)?,
                    "normalization": (outcome.state.norm_sq() - 1.0).abs(),
                },
            });
            emit(&out, &pretty(value))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper {
            tolerance,
            seed,
            out,
        } => {
            let rows = verify::run_table(tolerance, resolve_seed(seed)?);
            emit(&out, &verify::render(&rows))?;
            if rows.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

/// Stationarity residual of the numeric visibility at the returned state,
/// over moduli with the amplitude arguments frozen.
fn best_state_residual(state: &PhotonState) -> Result<f64, CliError> {
    let occupations: Vec<_> = state.terms().iter().map(|t| t.occupation().clone()).collect();
    let arguments: Vec<f64> = state.terms().iter().map(|t| t.argument()).collect();
    let cfg = TorusSearchConfig {
        grid_points_per_dim: 16,
        refine_iterations: 400,
        refine_tolerance: 1e-13,
        seed: 0,
    };
    let objective = |raw: &[f64]| -> f64 {
        let norm: f64 = raw.iter().map(|m| m * m).sum::<f64>().sqrt();
        let terms = occupations
            .iter()
            .zip(raw)
            .zip(&arguments)
            .map(|((occ, &m), &arg)| {
                (occ.clone(), Complex64::from_polar(m.abs() / norm, arg))
            })
            .collect();
        let state = PhotonState::new(terms).expect("projected moduli are normalized");
        visibility(&state, &cfg).visibility
    };
    let moduli: Vec<f64> = state.terms().iter().map(|t| t.modulus()).collect();
    Ok(lagrange_residual(objective, unit_sphere_constraint, &moduli)?)
}

fn load_state(path: &PathBuf) -> Result<PhotonState, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(parse_state(&text)?)
}

fn pretty(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON renders");
    text.push('\n');
    text
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("YOUNG_SEED") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("YOUNG_SEED is not an unsigned integer: `{raw}`"))),
        Err(_) => Ok(0),
    }
}
