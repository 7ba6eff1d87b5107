// SPDX-License-Identifier: Apache-2.0

//! The `choi-dynamics` command line.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors, 2 when an
//! analytic verdict disagrees with its numerical check, 3 when a
//! construction fails its own verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::choi::{
    choi_matrix, choi_rank_analytic, classify, classify_state, schmidt_number_structured,
    ChoiMatrix,
};
use crate::error::{Error, Result};
use crate::foliated::MapSpec;
use crate::format::{g15, parse_real};
use crate::matrix::{numerical_rank, CMat, DEFAULT_RANK_TOL};
use crate::semigroup::{
    evolve, trajectory, trajectory_csv, trajectory_point, transition_time, trichotomy_scan,
    GeneratorSpec, Property, TrajectoryPoint,
};
use crate::sweep::{sweep, sweep_csv, ParamRange, SweepGrid};
use crate::uet::{construct_ppt, QStructure, TupleMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "choi-dynamics",
    version,
    about = "Classify generalized Choi maps on M3 and follow their semigroups"
)]
pub struct Cli {
    /// Numerical tolerance for PSD and agreement checks.
    #[arg(long, global = true, env = "CHOI_DYNAMICS_TOL", value_parser = real, default_value = "1e-9")]
    pub tol: f64,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Write the command's matrix (Choi or constructed) as JSON to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub dump: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Rho,
    Tau,
    Theta,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Rho => "rho",
            Family::Tau => "tau",
            Family::Theta => "theta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Rho,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Ppt,
    Cp,
    Separable,
    SchmidtLe,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one map: positivity, CP, co-CP, PPT, decomposability, rank.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// Also read the Choi matrix as a state (rho and tau with a+b+c = 1/3).
        #[arg(long)]
        state: bool,
    },
    /// Evaluate the semigroup e^{t·gen} at one time or along a trajectory.
    Evolve {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_parser = real, allow_negative_numbers = true)]
        t: Option<f64>,
        /// T_MAX STEPS
        #[arg(long, num_args = 2, value_names = ["T_MAX", "STEPS"], conflicts_with = "t")]
        trajectory: Option<Vec<String>>,
        #[arg(long)]
        allow_negative: bool,
    },
    /// Time at which e^{t·rho[a,b,c,d]} becomes PPT.
    Transition {
        #[arg(value_parser = real, allow_negative_numbers = true, num_args = 4, required = true)]
        params: Vec<f64>,
    },
    /// Classify a property along a trajectory as never/always/eventually true.
    Scan {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_enum, default_value = "ppt")]
        property: PropertyArg,
        /// Bound for --property schmidt-le.
        #[arg(long, default_value_t = 2)]
        rank: u8,
        #[arg(long, value_parser = real, default_value = "10")]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Classify every point of a parameter grid.
    Sweep {
        #[arg(value_enum)]
        family: Family,
        /// Four ranges `start:stop:step` (or single values), one per parameter.
        #[arg(num_args = 4, required = true, allow_hyphen_values = true)]
        ranges: Vec<String>,
    },
    /// Build a PPT matrix from a CUET tuple.
    ConstructPpt {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// JSON file with the block structure of Q (default: the reversal permutation).
        #[arg(long)]
        q: Option<PathBuf>,
        /// Use the all-zero tuple.
        #[arg(long)]
        zero: bool,
    },
    /// Analytic and numerical Choi rank, or the numerical rank of a matrix
    /// read with --load.
    Rank {
        #[arg(value_enum, required_unless_present = "load")]
        family: Option<Family>,
        #[arg(value_parser = real, allow_negative_numbers = true, num_args = 4, required_unless_present = "load")]
        params: Vec<f64>,
        #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "params"])]
        load: Option<PathBuf>,
    },
    /// Schmidt number of the normalized Choi matrix from the structured rule.
    Schmidt {
        #[command(flatten)]
        map: MapArgs,
    },
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(value_parser = real, allow_negative_numbers = true, num_args = 4, required = true)]
    pub params: Vec<f64>,
}

impl MapArgs {
    fn spec(&self) -> Result<MapSpec> {
        MapSpec::from_family(self.family.name(), four(&self.params))
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: GenFamily,
    #[arg(value_parser = real, allow_negative_numbers = true, num_args = 4, required = true)]
    pub params: Vec<f64>,
}

impl GenArgs {
    fn spec(&self) -> GeneratorSpec {
        let [a, b, c, d] = four(&self.params);
        match self.family {
            GenFamily::Rho => GeneratorSpec::rho(a, b, c, d),
            GenFamily::Tau => GeneratorSpec::tau(a, b, c, d),
        }
    }
}

fn four(p: &[f64]) -> [f64; 4] {
    [p[0], p[1], p[2], p[3]]
}

fn real(s: &str) -> std::result::Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Construction(_) => EXIT_CONSTRUCTION,
        _ => EXIT_USAGE,
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<CMat> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Parse(format!("bad matrix in {}: {e}", path.display())))
}

fn dump_matrix(path: Option<&PathBuf>, m: &CMat) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    std::fs::write(path, to_json(m))
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command, writing the
/// result to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let pool = match cli.jobs {
        Some(0) => {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let tol = cli.tol;
    if !(tol > 0.0) {
        return Err(Error::domain("--tol must be positive"));
    }
    let agree_code = |ok: bool| if ok { EXIT_OK } else { EXIT_DISAGREE };
    let dump = cli.dump.as_ref();
    let dumps = matches!(
        &cli.command,
        Command::Classify { .. }
            | Command::Rank { load: None, .. }
            | Command::Schmidt { .. }
            | Command::ConstructPpt { .. }
            | Command::Evolve {
                trajectory: None,
                ..
            }
    );
    if dump.is_some() && !dumps {
        return Err(Error::domain(
            "--dump needs a command that produces a single matrix",
        ));
    }
    match &cli.command {
        Command::Classify { map, state } => {
            let spec = map.spec()?;
            let report = if *state {
                classify_state(&spec, tol)?
            } else {
                classify(&spec, tol)?
            };
            dump_matrix(dump, &ChoiMatrix::of_spec(&spec).mat)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "{}\n{}\n",
                    crate::choi::ClassificationReport::csv_header(&spec),
                    report.csv_row()
                ),
            };
            Ok((text, agree_code(report.all_agree())))
        }
        Command::Evolve {
            gen,
            t,
            trajectory: traj,
            allow_negative,
        } => {
            let gen = gen.spec();
            if let Some(v) = traj {
                let t_max = parse_real(&v[0])?;
                let steps: usize = v[1]
                    .parse()
                    .map_err(|_| Error::Parse(format!("steps must be a count, got {:?}", v[1])))?;
                if t_max < 0.0 && !allow_negative {
                    return Err(Error::domain("t must be >= 0 (pass --allow-negative)"));
                }
                let pts = trajectory(&gen, t_max, steps, tol)?;
                let text = match cli.format.unwrap_or(Format::Csv) {
                    Format::Csv => trajectory_csv(&pts),
                    Format::Json => to_json(&pts),
                };
                return Ok((text, EXIT_OK));
            }
            let t = t.unwrap_or(0.0);
            if t < 0.0 && !allow_negative {
                return Err(Error::domain("t must be >= 0 (pass --allow-negative)"));
            }
            let p: TrajectoryPoint = trajectory_point(&gen, t, tol)?;
            dump_matrix(dump, &choi_matrix(&evolve(&gen, t)).mat)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&p),
                Format::Csv => trajectory_csv(&[p]),
            };
            Ok((text, EXIT_OK))
        }
        Command::Transition { params } => {
            let [a, b, c, d] = four(params);
            let t0 = transition_time(&GeneratorSpec::rho(a, b, c, d), tol)?;
            let text = match cli.format {
                Some(Format::Json) => to_json(&json!({ "t0": g15(t0) })),
                _ => format!("{}\n", g15(t0)),
            };
            Ok((text, EXIT_OK))
        }
        Command::Scan {
            gen,
            property,
            rank,
            t_max,
            steps,
        } => {
            let property = match property {
                PropertyArg::Ppt => Property::Ppt,
                PropertyArg::Cp => Property::Cp,
                PropertyArg::Separable => Property::SeparableProxy,
                PropertyArg::SchmidtLe => Property::SchmidtLe(*rank),
            };
            let result = trichotomy_scan(&gen.spec(), property, *t_max, *steps, tol)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&result),
                Format::Csv => {
                    let mut s = String::from("t,holds\n");
                    for (t, h) in &result.scan_grid {
                        s.push_str(&format!("{},{h}\n", g15(*t)));
                    }
                    s
                }
            };
            Ok((text, EXIT_OK))
        }
        Command::Sweep { family, ranges } => {
            let parsed = ranges
                .iter()
                .map(|r| r.parse::<ParamRange>())
                .collect::<Result<Vec<_>>>()?;
            let grid = SweepGrid::new(family.name(), [parsed[0], parsed[1], parsed[2], parsed[3]])?;
            let reports = sweep(&grid, tol)?;
            let ok = reports.iter().all(|r| r.all_agree());
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => sweep_csv(&grid, &reports),
                Format::Json => to_json(&reports),
            };
            Ok((text, agree_code(ok)))
        }
        Command::ConstructPpt { n, q, zero } => {
            let structure = match q {
                Some(path) => {
                    serde_json::from_str::<QStructure>(&read_file(path)?).map_err(|e| {
                        Error::Parse(format!("bad Q structure in {}: {e}", path.display()))
                    })?
                }
                None => QStructure::reversal(*n),
            };
            let mode = if *zero {
                TupleMode::Zero
            } else {
                TupleMode::Random
            };
            let built = construct_ppt(*n, &structure, cli.seed, mode)?;
            dump_matrix(dump, &built.matrix)?;
            Ok((to_json(&built), EXIT_OK))
        }
        Command::Rank {
            load: Some(path), ..
        } => {
            let m = load_matrix(path)?;
            let numerical = numerical_rank(&m, DEFAULT_RANK_TOL);
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "rank_numerical": numerical,
                })),
                Format::Csv => format!("rank_n\n{numerical}\n"),
            };
            Ok((text, EXIT_OK))
        }
        Command::Rank { family, params, .. } => {
            let family =
                family.ok_or_else(|| Error::domain("rank needs FAMILY and four parameters"))?;
            let spec = MapSpec::from_family(family.name(), four(params))?;
            let mat = ChoiMatrix::of_spec(&spec).mat;
            dump_matrix(dump, &mat)?;
            let analytic = choi_rank_analytic(&spec);
            let numerical = numerical_rank(&mat, DEFAULT_RANK_TOL);
            let ok = analytic.map_or(true, |r| r == numerical);
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({
                    "spec": spec,
                    "rank_analytic": analytic,
                    "rank_numerical": numerical,
                    "agree": ok,
                })),
                Format::Csv => format!(
                    "rank_a,rank_n\n{},{numerical}\n",
                    analytic.map(|r| r.to_string()).unwrap_or_default()
                ),
            };
            Ok((text, agree_code(ok)))
        }
        Command::Schmidt { map } => {
            let spec = map.spec()?;
            let k = schmidt_number_structured(&spec)?;
            dump_matrix(dump, &ChoiMatrix::of_spec(&spec).mat)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&json!({ "spec": spec, "schmidt_number": k })),
                Format::Csv => format!("schmidt\n{k}\n"),
            };
            Ok((text, EXIT_OK))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("choi-dynamics").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_witness_case() {
        let (code, out, _) = call(&["classify", "rho", "1", "0.5", "2", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ppt"]["analytic"], true);
        assert_eq!(v["separable"], "decided_no");
    }

    #[test]
    fn negative_parameters_parse() {
        let (code, out, err) = call(&["classify", "rho", "2", "1", "1", "-1", "--format", "csv"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["classify", "rho", "1", "2"]).0, 1);
        assert_eq!(call(&["classify", "sigma", "1", "2", "3", "4"]).0, 1);
        assert_eq!(call(&["classify", "theta", "-1", "1", "1", "1"]).0, 1);
        assert_eq!(
            call(&["--tol", "nan", "classify", "rho", "1", "1", "1", "1"]).0,
            1
        );
        let (code, _, err) = call(&["transition", "0", "1", "1", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains(">="), "{err}");
    }

    #[test]
    fn construction_failures_exit_three() {
        assert_eq!(
            exit_code(&Error::Construction("check failed".into())),
            EXIT_CONSTRUCTION
        );
        assert_eq!(exit_code(&Error::domain("bad")), EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("construct-ppt"));
    }
}
