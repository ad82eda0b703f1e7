//! The `ree` command line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 not a state, 4 support error.

mod report;
mod statefile;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boundopt::{closest_ppt_oracle_with, sweep, upper_bound_ree, BoundOptions, OracleOptions, SweepFamily};
use crate::error::{Error, Result};
use crate::extremal::{category_classify, condition_report, weak_constraint_residual, CANONICAL_TOL};
use crate::matkit::{ComplexMatrix, Party};
use crate::measures::relative_entropy;
use crate::states::{canonical_form, make_family, qubit_state, random::random_state, to_hilbert_schmidt, DensityMatrix, FamilySpec};

pub use report::{
    BoundResults, CheckResults, MatrixJson, OracleResults, Report, Rotations, StateDigest, TOOL, VERSION,
};
pub use statefile::{parse_state_file, parse_state_str, write_state, StateFile};

#[derive(Debug, Parser)]
#[command(name = "ree", version, about = "Relative entropy of entanglement: bounds, closest PPT states, extremal conditions")]
struct Cli {
    /// Worker threads for multi-start searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a state from a named family.
    Gen(GenArgs),
    /// Three-parameter upper bound for a two-qubit state.
    Bound {
        #[arg(long = "in")]
        input: PathBuf,
        /// Print the value in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Recorded in the report; the bound itself uses no randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Multi-start search for the closest PPT state.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate the extremal conditions of a candidate closest state.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Residual at or below which a condition counts as satisfied.
        #[arg(long, default_value_t = crate::extremal::CONDITION_TOL)]
        tol: f64,
    },
    /// Rotate a two-qubit state to diagonal-T form.
    Canonical {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'o', long = "out")]
        output: PathBuf,
    },
    /// Bound (and optionally oracle) values along a one-parameter family, as CSV.
    Sweep {
        /// pure, bell-diagonal or werner
        #[arg(long)]
        family: String,
        /// p, lambda1 or f respectively
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(short = 'o', long = "out")]
        output: PathBuf,
        #[arg(long)]
        with_oracle: bool,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    /// pure, pure-closest, bell-diagonal, werner, isotropic,
    /// maximally-correlated, product, maximally-mixed or random
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    amplitudes: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    ra: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    rb: Option<Vec<f64>>,
    /// Subsystem dimensions for maximally-mixed and random, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    label: Option<String>,
    #[arg(short = 'o', long = "out")]
    output: PathBuf,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Errors go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Bound {
            input,
            bits,
            report,
            seed,
        } => {
            let (rho, label) = parse_state_file(&input)?;
            let b = upper_bound_ree(&rho, &BoundOptions::default())?;
            if bits {
                println!("bound {} bits", b.value.bits);
            } else {
                println!("bound {} nats", b.value.nats);
            }
            if let Some(path) = report {
                let r = Report::new("bound", seed, StateDigest::new(&rho, label)?, BoundResults::new(&b)?);
                std::fs::write(path, r.to_json())?;
            }
            Ok(())
        }
        Command::Oracle {
            input,
            starts,
            seed,
            report,
        } => {
            let (rho, label) = parse_state_file(&input)?;
            let o = closest_ppt_oracle_with(&rho, &OracleOptions::new(starts, seed))?;
            println!("oracle {} nats", o.value.nats);
            if let Some(path) = report {
                let r = Report::new("oracle", seed, StateDigest::new(&rho, label)?, OracleResults::new(&o)?);
                std::fs::write(path, r.to_json())?;
            }
            Ok(())
        }
        Command::Check {
            input,
            sigma,
            report,
            tol,
        } => check(&input, &sigma, report.as_deref(), tol),
        Command::Canonical { input, output } => {
            let (rho, label) = parse_state_file(&input)?;
            let c = canonical_form(&rho)?;
            let t = c.form.t_diagonal();
            println!("t = [{}, {}, {}]", t[0], t[1], t[2]);
            let label = label.map(|l| format!("canonical({l})"));
            write_state(&output, &c.state, label)
        }
        Command::Sweep {
            family,
            param,
            from,
            to,
            steps,
            output,
            with_oracle,
            starts,
            seed,
        } => {
            let fam = SweepFamily::parse(&family, &param)?;
            let oracle = with_oracle.then(|| OracleOptions::new(starts, seed));
            let rows = sweep(fam, from, to, steps, &BoundOptions::default(), oracle.as_ref())?;
            write_csv(&output, &rows, with_oracle)
        }
    }
}

fn check(input: &Path, sigma_path: &Path, report: Option<&Path>, tol: f64) -> Result<()> {
    let (rho, label) = parse_state_file(input)?;
    let (sigma, sigma_label) = parse_state_file(sigma_path)?;
    let a = condition_report(&rho, &sigma, Party::A, tol)?;
    let b = condition_report(&rho, &sigma, Party::B, tol)?;
    let category = category_classify(&rho, &sigma)?;
    let weak = if rho.is_two_qubit() && to_hilbert_schmidt(&rho)?.max_off_diagonal() <= CANONICAL_TOL {
        Some(weak_constraint_residual(&rho, &sigma)?)
    } else {
        None
    };
    for c in [&a, &b] {
        println!(
            "party {:?}: filter residual {:e}, unitary residual {:e}",
            c.party, c.filter_residual, c.unitary_residual
        );
    }
    println!("category {}", category.as_str());
    if let Some(path) = report {
        let results = CheckResults {
            sigma: StateDigest::new(&sigma, sigma_label)?,
            relative_entropy_nats: relative_entropy(&rho, &sigma)?.nats,
            conditions: [a, b],
            category: category.as_str(),
            weak_constraints: weak,
        };
        let r = Report::new("check", 0, StateDigest::new(&rho, label)?, results);
        std::fs::write(path, r.to_json())?;
    }
    Ok(())
}

fn need<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::input(format!("family {family} needs --{flag}")))
}

fn bloch(v: Option<Vec<f64>>, flag: &str) -> Result<ComplexMatrix> {
    let v = v.ok_or_else(|| Error::input(format!("family product needs --{flag}")))?;
    let r: [f64; 3] = v
        .try_into()
        .map_err(|_| Error::input(format!("--{flag} needs three components")))?;
    qubit_state(r)
}

fn dims_arg(dims: Option<Vec<usize>>, family: &str) -> Result<(usize, usize)> {
    match dims.as_deref() {
        None => Ok((2, 2)),
        Some(&[a, b]) if a > 0 && b > 0 => Ok((a, b)),
        Some(_) => Err(Error::input(format!("family {family}: --dims needs two positive integers"))),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let fam = args.family.as_str();
    let (rho, default_label): (DensityMatrix, String) = match fam {
        "pure" => {
            let p = need(args.p, "p", fam)?;
            (make_family(&FamilySpec::Pure { p })?, format!("pure(p={p})"))
        }
        "pure-closest" => {
            let p = need(args.p, "p", fam)?;
            (make_family(&FamilySpec::PureClosest { p })?, format!("pure-closest(p={p})"))
        }
        "bell-diagonal" => {
            let w = args
                .weights
                .ok_or_else(|| Error::input("family bell-diagonal needs --weights"))?;
            let weights: [f64; 4] = w
                .try_into()
                .map_err(|_| Error::input("--weights needs four values"))?;
            let label = format!("bell-diagonal({},{},{},{})", weights[0], weights[1], weights[2], weights[3]);
            (make_family(&FamilySpec::BellDiagonal { weights })?, label)
        }
        "werner" => {
            let f = need(args.f, "f", fam)?;
            (make_family(&FamilySpec::Werner { f })?, format!("werner(f={f})"))
        }
        "isotropic" => {
            let d = need(args.d, "d", fam)?;
            let f = need(args.f, "f", fam)?;
            (make_family(&FamilySpec::Isotropic { d, f })?, format!("isotropic(d={d},f={f})"))
        }
        "maximally-correlated" => {
            let amplitudes = args
                .amplitudes
                .ok_or_else(|| Error::input("family maximally-correlated needs --amplitudes"))?;
            let label = format!("maximally-correlated({amplitudes:?})");
            (make_family(&FamilySpec::MaximallyCorrelated { amplitudes })?, label)
        }
        "product" => {
            let a = bloch(args.ra, "ra")?;
            let b = bloch(args.rb, "rb")?;
            (make_family(&FamilySpec::Product { a, b })?, "product".to_string())
        }
        "maximally-mixed" => {
            let dims = dims_arg(args.dims, fam)?;
            (DensityMatrix::maximally_mixed(dims), format!("maximally-mixed({}x{})", dims.0, dims.1))
        }
        "random" => {
            let dims = dims_arg(args.dims, fam)?;
            let seed = need(args.seed, "seed", fam)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_state(&mut rng, dims), format!("random(seed={seed})"))
        }
        other => return Err(Error::input(format!("unknown family {other:?}"))),
    };
    write_state(&args.output, &rho, Some(args.label.unwrap_or(default_label)))
}

/// 17 significant digits.
fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, rows: &[crate::boundopt::SweepRow], with_oracle: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["param", "bound_nats", "bound_bits"];
    if with_oracle {
        header.push("oracle_nats");
    }
    header.extend([
        "filter_residual_A",
        "filter_residual_B",
        "unitary_residual_A",
        "unitary_residual_B",
    ]);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![sci(r.param), sci(r.bound_nats), sci(r.bound_bits)];
        if with_oracle {
            rec.push(sci(r.oracle_nats.unwrap_or(f64::NAN)));
        }
        rec.extend([r.filter_residual_a, r.filter_residual_b, r.unitary_residual_a, r.unitary_residual_b].map(sci));
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}
