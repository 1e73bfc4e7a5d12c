//! File-driven command line for the oddsym library.
//!
//! Exit codes: 0 = pass, 1 = assertion failed, 2 = unresolved or numerical
//! trouble, 3 = usage or malformed input.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use oddsym::error::OddsymError;
use oddsym::insulator::{
    build_kane_mele, fermi_projection, ind2_tp, spin_chern, theorem11_check, ImplicationVerdict,
    DEFAULT_TP_REL_TOL,
};
use oddsym::io;
use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::symmetry::{
    is_even_symmetric, is_odd_symmetric, is_quaternionic, standard_odd, FormKind,
};
use oddsym::toeplitz::{
    eigenphase_tracks, make_fn_loop, toeplitz_truncate, verify_gk, wind2, winding_number,
};
use oddsym::z2::{completion_isometry, ind2, Boundary, TruncatedOperator};

#[derive(Parser)]
#[command(name = "oddsym", version, about = "odd symmetric operators and Z2 indices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Relative numerical-rank tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for any randomized construction.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports: json or csv where applicable.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the symmetry predicates of a matrix against a form.
    CheckSymmetry {
        #[command(flatten)]
        common: CommonOpts,
        /// Matrix JSON file ({rows, cols, re, im}).
        #[arg(long)]
        matrix: PathBuf,
        /// Symmetry form JSON file.
        #[arg(long)]
        form: PathBuf,
        /// Which predicate gates the exit code: odd, even or quaternionic.
        #[arg(long)]
        predicate: Option<String>,
    },
    /// Factor T = I*A^t I A (odd form) or T = J A^t J A (even form).
    Factorize {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        form: PathBuf,
        /// Optional path for the factor A (matrix JSON).
        #[arg(long)]
        factor_out: Option<PathBuf>,
    },
    /// Z2-index of a truncated operator or a built-in Toeplitz example.
    Ind2 {
        #[command(flatten)]
        common: CommonOpts,
        /// Matrix JSON file (alternative to --loop-n).
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Fiberwise symmetry form JSON (with --matrix).
        #[arg(long)]
        form: Option<PathBuf>,
        /// Build T_{f_n} for this n instead of reading a matrix.
        #[arg(long)]
        loop_n: Option<i64>,
        /// Number of truncation sites.
        #[arg(long, default_value_t = 64)]
        sites: usize,
        /// Boundary interpretation: half-left or finite.
        #[arg(long, default_value = "half-left")]
        boundary: String,
    },
    /// Stabilizing partial-isometry completion of an odd symmetric matrix.
    Completion {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        form: PathBuf,
        /// Optional path for the completion V (matrix JSON).
        #[arg(long)]
        isometry_out: Option<PathBuf>,
    },
    /// Verify Wind2(f) = Ind2(T_f) for a loop.
    Gk {
        #[command(flatten)]
        common: CommonOpts,
        /// Built-in family member f_n.
        #[arg(long)]
        loop_n: Option<i64>,
        /// Symbol loop JSON file (alternative to --loop-n).
        #[arg(long)]
        loop_file: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        sites: usize,
        /// Loop sampling density for --loop-n.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Emit the eigenphase tracks as CSV here.
        #[arg(long)]
        crossings_out: Option<PathBuf>,
    },
    /// Winding number and Wind2 of a loop by spectral flow.
    Winding {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        loop_n: Option<i64>,
        #[arg(long)]
        loop_file: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        crossings_out: Option<PathBuf>,
    },
    /// Sweep a Kane-Mele parameter and tabulate gap, spin Chern and Ind2.
    InsulatorSweep {
        #[command(flatten)]
        common: CommonOpts,
        /// Model configuration JSON.
        #[arg(long)]
        config: PathBuf,
        /// Swept parameter: lambda_v, lambda_so, lambda_r or w.
        #[arg(long, default_value = "lambda_v")]
        axis: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Brillouin grid size for the plaquette oracle.
        #[arg(long, default_value_t = 24)]
        kgrid: usize,
    },
    /// Evaluate Ind2(T_P), the spin Chern numbers, and their implication.
    Theorem11 {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 24)]
        kgrid: usize,
    },
}

fn emit(common: &CommonOpts, text: String) -> Result<(), OddsymError> {
    match &common.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text + "\n")?;
            Ok(())
        }
    }
}

fn json_of<T: serde::Serialize>(v: &T) -> Result<String, OddsymError> {
    serde_json::to_string_pretty(v).map_err(|e| OddsymError::Format(e.to_string()))
}

/// true = pass (exit 0), false = assertion failed (exit 1)
fn run(cli: Cli) -> Result<bool, OddsymError> {
    match cli.command {
        Command::CheckSymmetry {
            common,
            matrix,
            form,
            predicate,
        } => {
            let t = io::read_matrix_json(&matrix)?;
            let f = io::read_form_json(&form)?;
            let tol = common.tol.unwrap_or(1e-9);
            let mut report = serde_json::Map::new();
            let gate;
            let natural = match f.kind() {
                FormKind::Odd => "odd",
                FormKind::Even => "even",
            };
            let requested = predicate.as_deref().unwrap_or(natural);
            if f.kind() == FormKind::Odd {
                let odd = is_odd_symmetric(&t, &f, tol)?;
                let quat = is_quaternionic(&t, &f, tol)?;
                report.insert("odd".into(), serde_json::to_value(odd).unwrap());
                report.insert("quaternionic".into(), serde_json::to_value(quat).unwrap());
                gate = match requested {
                    "odd" => odd.holds,
                    "quaternionic" => quat.holds,
                    other => {
                        return Err(OddsymError::contract(format!(
                            "predicate {other:?} not available for an odd form"
                        )))
                    }
                };
            } else {
                let even = is_even_symmetric(&t, &f, tol)?;
                report.insert("even".into(), serde_json::to_value(even).unwrap());
                gate = match requested {
                    "even" => even.holds,
                    other => {
                        return Err(OddsymError::contract(format!(
                            "predicate {other:?} not available for an even form"
                        )))
                    }
                };
            }
            emit(&common, json_of(&report)?)?;
            Ok(gate)
        }
        Command::Factorize {
            common,
            matrix,
            form,
            factor_out,
        } => {
            let t = io::read_matrix_json(&matrix)?;
            let f = io::read_form_json(&form)?;
            let tol = common.tol.unwrap_or(DEFAULT_REL_TOL);
            let a = match f.kind() {
                FormKind::Odd => oddsym::factorization::odd_factorize(&t, &f, tol)?,
                FormKind::Even => oddsym::factorization::even_factorize(&t, &f, tol)?,
            };
            let report = oddsym::factorization::factorization_report(&t, &a, &f, tol)?;
            if let Some(path) = factor_out {
                io::write_matrix_json(&path, &a)?;
            }
            emit(&common, json_of(&report)?)?;
            Ok(report.residual <= 1e-8)
        }
        Command::Ind2 {
            common,
            matrix,
            form,
            loop_n,
            sites,
            boundary,
        } => {
            let tol = common.tol.unwrap_or(DEFAULT_REL_TOL);
            let op = match (matrix, loop_n) {
                (Some(path), None) => {
                    let m = io::read_matrix_json(&path)?;
                    let f = match form {
                        Some(fp) => io::read_form_json(&fp)?,
                        None => standard_odd(2)?,
                    };
                    let bnd = match boundary.as_str() {
                        "half-left" => Boundary::HalfInfiniteLeft,
                        "finite" => Boundary::Finite,
                        other => {
                            return Err(OddsymError::contract(format!(
                                "unknown boundary {other:?} (half-left or finite)"
                            )))
                        }
                    };
                    let site_dim = f.dim();
                    let n_sites = m.nrows() / site_dim;
                    TruncatedOperator::new(m, site_dim, n_sites, bnd, f)?
                }
                (None, Some(n)) => {
                    let samples = (4 * n.unsigned_abs() as usize).max(64);
                    let l = make_fn_loop(n, samples)?;
                    toeplitz_truncate(&l, sites)?
                }
                _ => {
                    return Err(OddsymError::contract(
                        "ind2 needs exactly one of --matrix or --loop-n",
                    ))
                }
            };
            let report = ind2(&op, tol)?;
            let unresolved = report.unresolved;
            emit(&common, json_of(&report)?)?;
            if unresolved {
                return Err(OddsymError::unresolved(
                    "ind2 report is UNRESOLVED; see diagnostics",
                ));
            }
            Ok(true)
        }
        Command::Completion {
            common,
            matrix,
            form,
            isometry_out,
        } => {
            let t = io::read_matrix_json(&matrix)?;
            let f = io::read_form_json(&form)?;
            let tol = common.tol.unwrap_or(DEFAULT_REL_TOL);
            let (v, cert) = completion_isometry(&t, &f, tol)?;
            if let Some(path) = isometry_out {
                io::write_matrix_json(&path, &v)?;
            }
            emit(&common, json_of(&cert)?)?;
            Ok(cert.sigma_min_completed > 0.0)
        }
        Command::Gk {
            common,
            loop_n,
            loop_file,
            sites,
            samples,
            crossings_out,
        } => {
            let l = match (loop_n, loop_file) {
                (Some(n), None) => make_fn_loop(n, samples)?,
                (None, Some(path)) => io::read_loop_json(&path)?,
                _ => {
                    return Err(OddsymError::contract(
                        "gk needs exactly one of --loop-n or --loop-file",
                    ))
                }
            };
            let tol = common.tol.unwrap_or(DEFAULT_REL_TOL);
            let report = verify_gk(&l, sites, tol)?;
            if let Some(path) = crossings_out {
                let tracks = eigenphase_tracks(&l)?;
                let mut buf = Vec::new();
                io::write_crossings_csv(&mut buf, &l.ts, &tracks)?;
                std::fs::write(path, buf)?;
            }
            let pass = report.equal;
            let unresolved = report.index.unresolved;
            emit(&common, json_of(&report)?)?;
            if unresolved {
                return Err(OddsymError::unresolved("ind2 side is UNRESOLVED"));
            }
            Ok(pass)
        }
        Command::Winding {
            common,
            loop_n,
            loop_file,
            samples,
            crossings_out,
        } => {
            let l = match (loop_n, loop_file) {
                (Some(n), None) => make_fn_loop(n, samples)?,
                (None, Some(path)) => io::read_loop_json(&path)?,
                _ => {
                    return Err(OddsymError::contract(
                        "winding needs exactly one of --loop-n or --loop-file",
                    ))
                }
            };
            let report = if l.fiber_form.is_some() {
                wind2(&l)?
            } else {
                winding_number(&l)?
            };
            if let Some(path) = crossings_out {
                let tracks = eigenphase_tracks(&l)?;
                let mut buf = Vec::new();
                io::write_crossings_csv(&mut buf, &l.ts, &tracks)?;
                std::fs::write(path, buf)?;
            }
            emit(&common, json_of(&report)?)?;
            Ok(true)
        }
        Command::InsulatorSweep {
            common,
            config,
            axis,
            from,
            to,
            step,
            kgrid,
        } => {
            let cfg = io::read_model_config(&config)?;
            let tol = common.tol.unwrap_or(DEFAULT_TP_REL_TOL);
            if step <= 0.0 {
                return Err(OddsymError::contract("sweep step must be positive"));
            }
            let mut rows = Vec::new();
            let n_steps = if to >= from {
                ((to - from) / step).round() as usize
            } else {
                0
            };
            for i in 0..=n_steps {
                let value = from + step * i as f64;
                if value > to + 1e-12 {
                    break;
                }
                let mut p = cfg.params();
                match axis.as_str() {
                    "lambda_v" => p.lambda_v = value,
                    "lambda_so" => p.lambda_so = value,
                    "lambda_r" => p.lambda_r = value,
                    "w" => p.disorder_w = value,
                    other => {
                        return Err(OddsymError::contract(format!(
                            "unknown sweep axis {other:?}"
                        )))
                    }
                }
                // index on the open twin, oracle per spin_chern policy
                let open = oddsym::insulator::KaneMeleParams {
                    boundary: oddsym::insulator::BoundaryCondition::Open,
                    ..p
                };
                let model = build_kane_mele(open)?;
                let fd = fermi_projection(&model, cfg.e_f)?;
                let index = ind2_tp(&fd, tol)?;
                let (psp_gap, c_plus, c_minus, mut flags) =
                    match spin_chern(&p, cfg.e_f, kgrid, tol) {
                        Ok(est) => (
                            est.psp_gap,
                            est.c_plus,
                            est.c_minus,
                            est.flagged.unwrap_or_default(),
                        ),
                        Err(OddsymError::NoSpinSplit(msg)) => (0.0, 0, 0, format!("NO_SPIN_SPLIT: {msg}")),
                        Err(e) => return Err(e),
                    };
                if index.unresolved {
                    if !flags.is_empty() {
                        flags.push(';');
                    }
                    flags.push_str("IND2_UNRESOLVED");
                }
                rows.push(io::SweepRow {
                    lx: p.lx,
                    ly: p.ly,
                    t: p.t_hop,
                    lambda_so: p.lambda_so,
                    lambda_r: p.lambda_r,
                    lambda_v: p.lambda_v,
                    w: p.disorder_w,
                    seed: p.seed,
                    e_f: cfg.e_f,
                    gap: fd.gap,
                    psp_gap,
                    ind2: if index.unresolved {
                        "unresolved".into()
                    } else {
                        index.ind2.to_string()
                    },
                    c_plus,
                    c_minus,
                    flags: flags.replace(',', ";"),
                });
            }
            let mut buf = Vec::new();
            io::write_sweep_csv(&mut buf, &rows)?;
            let text = String::from_utf8(buf).map_err(|e| OddsymError::Format(e.to_string()))?;
            match &common.out {
                None => print!("{text}"),
                Some(path) => std::fs::write(path, text)?,
            }
            Ok(true)
        }
        Command::Theorem11 {
            common,
            config,
            kgrid,
        } => {
            let cfg = io::read_model_config(&config)?;
            let tol = common.tol.unwrap_or(DEFAULT_TP_REL_TOL);
            let report = theorem11_check(&cfg.params(), cfg.e_f, kgrid, tol)?;
            let verdict = report.verdict;
            let unresolved = report.index.unresolved;
            emit(&common, json_of(&report)?)?;
            if unresolved {
                return Err(OddsymError::unresolved("Ind2(T_P) is UNRESOLVED"));
            }
            Ok(verdict != ImplicationVerdict::Violated)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's help/version on stdout with success, usage errors -> 3
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("FAIL: assertion did not hold");
            ExitCode::from(1)
        }
        Err(e) => {
            let code = match &e {
                OddsymError::Contract(_) | OddsymError::Format(_) | OddsymError::Io(_) => 3,
                OddsymError::Unresolved(_) | OddsymError::NoSpinSplit(_) | OddsymError::Linalg(_) => 2,
            };
            eprintln!("error[{code}]: {e}");
            ExitCode::from(code)
        }
    }
}
