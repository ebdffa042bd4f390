use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use permuton_lab_core::bwx::{pipeline, InnerStrategy, PairingCache};
use permuton_lab_core::perm::{all_permutations, enumerate_avoiders_bounded, DEFAULT_EXHAUSTIVE_BOUND};
use permuton_lab_core::shape::shape_wilf_classes;
use permuton_lab_core::{ClassSpec, PatternSet, Permutation};

use crate::config::{expand_config_args, ExperimentConfig};
use crate::error::{LabError, LabResult, EXIT_OK, EXIT_USAGE};
use crate::experiments::{self, GoodnessSweep, MeasureInput};
use crate::output::{trace_json, write_json_line};
use crate::verify::{run_suite, Scale};

/// Default size limit for the shape tables behind the samplers.
pub const DEFAULT_SAMPLER_N_BOUND: usize = 2000;

/// Comma-separated list given as a single flag value, so a later flag
/// replaces an earlier one instead of appending to it.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<T>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "permuton-lab",
    version,
    about = "Pattern-avoiding permutations, BWX bijections and permuton diagnostics"
)]
pub struct Cli {
    /// Directory for shape tables and strategy-B pairings [env: PERMUTON_LAB_CACHE]
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or count Av_n(patterns)
    #[command(args_override_self = true)]
    Enumerate(EnumerateArgs),
    /// Run one permutation through the bijection pipeline
    #[command(args_override_self = true)]
    Biject(BijectArgs),
    /// Draw uniform samples from Av_n(J_k1 + I_k2 + J_k3) as JSONL
    #[command(args_override_self = true)]
    Sample(SampleArgs),
    /// W-region masses and rectangle-sup distance as CSV
    #[command(args_override_self = true)]
    Measure(MeasureArgs),
    /// Convergence sweep over several n
    #[command(args_override_self = true)]
    Converge(ConvergeArgs),
    /// Goodness conditions on uniform samples of Av_n(I_{d+1})
    #[command(args_override_self = true)]
    Goodness(GoodnessArgs),
    /// Shape-Wilf classes of a set of patterns
    #[command(name = "shape-wilf", args_override_self = true)]
    ShapeWilf(ShapeWilfArgs),
    /// Run a named property suite
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

pub const SUBCOMMANDS: &[&str] =
    &["enumerate", "biject", "sample", "measure", "converge", "goodness", "shape-wilf", "verify"];

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    /// Pattern to avoid; repeat for several
    #[arg(long = "avoid", required = true)]
    pub avoid: Vec<Permutation>,
    #[arg(long)]
    pub count_only: bool,
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BOUND)]
    pub max_n: usize,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    /// Class as k1,k2,k3
    #[arg(long, conflicts_with_all = ["k1", "k2", "k3"])]
    pub class: Option<ClassSpec>,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub k3: Option<usize>,
}

impl ClassArgs {
    fn spec(&self) -> LabResult<ClassSpec> {
        if let Some(spec) = self.class {
            return Ok(spec);
        }
        match (self.k1, self.k2, self.k3) {
            (Some(a), Some(b), Some(c)) => Ok(ClassSpec::new(a, b, c)?),
            _ => Err(LabError::Usage("give --class k1,k2,k3 or all of --k1 --k2 --k3".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct BijectArgs {
    #[arg(long)]
    pub perm: Permutation,
    #[command(flatten)]
    pub class: ClassArgs,
    /// growth, enumeration or auto
    #[arg(long, default_value = "auto")]
    pub strategy: InnerStrategy,
    /// Print every stage, not just the result
    #[arg(long)]
    pub stages: bool,
    /// Write the full pipeline trace as JSONL
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub class: ClassArgs,
    /// Sample Av_n(I_{d+1}) directly (the class 1,d-1,1)
    #[arg(long, conflicts_with_all = ["class", "k1", "k2", "k3"])]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    pub strategy: InnerStrategy,
    #[arg(long, default_value_t = DEFAULT_SAMPLER_N_BOUND)]
    pub n_bound: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, conflicts_with = "input")]
    pub perm: Option<Permutation>,
    /// JSONL written by `sample`
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "0.1,0.2")]
    pub eps: List<f64>,
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub class: ClassSpec,
    #[arg(long)]
    pub ns: List<usize>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "0.1,0.2")]
    pub eps: List<f64>,
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Epsilon for the goodness flag
    #[arg(long, default_value_t = 0.05)]
    pub good_eps: f64,
    #[arg(long, default_value = "auto")]
    pub strategy: InnerStrategy,
    #[arg(long, default_value_t = DEFAULT_SAMPLER_N_BOUND)]
    pub n_bound: usize,
    /// Per-sample CSV (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-n summary CSV (stderr when absent)
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoodnessArgs {
    #[arg(long)]
    pub ns: List<usize>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLER_N_BOUND)]
    pub n_bound: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the layer paths of every sample as JSONL
    #[arg(long)]
    pub paths: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShapeWilfArgs {
    #[arg(long, default_value_t = 9)]
    pub max_boxes: usize,
    /// Compare all patterns of this length
    #[arg(long, default_value_t = 3, conflicts_with = "pattern")]
    pub length: usize,
    /// Explicit pattern; repeat for several
    #[arg(long)]
    pub pattern: Vec<Permutation>,
    /// Largest shape the traversal enumeration accepts
    #[arg(long, default_value_t = 16)]
    pub bound: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// perm, shape, greene, bijection, sampler, oneside, layers or all
    #[arg(long)]
    pub suite: String,
    /// Override the exhaustive size of each check
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Override the number of random cases or samples
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run(argv: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = match expand_config_args(argv, SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => return report(e, stderr),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => report(e, stderr),
    }
}

fn report(e: LabError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    e.exit_code()
}

fn with_output<T>(
    path: Option<&Path>,
    fallback: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> LabResult<T>,
) -> LabResult<T> {
    match path {
        Some(p) if p != Path::new("-") => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(p)?);
            let r = f(&mut file)?;
            file.flush()?;
            Ok(r)
        }
        _ => f(fallback),
    }
}

fn open_optional(path: Option<&Path>) -> LabResult<Option<std::io::BufWriter<std::fs::File>>> {
    Ok(match path {
        Some(p) => Some(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => None,
    })
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> LabResult<i32> {
    let cache_dir = cli.cache_dir.or_else(|| std::env::var_os(permuton_lab_core::bwx::CACHE_ENV).map(PathBuf::from));
    match cli.command {
        Command::Enumerate(a) => {
            let patterns = PatternSet::new(a.avoid)?;
            let it = enumerate_avoiders_bounded(a.n, &patterns, a.max_n)?;
            if a.count_only {
                writeln!(stdout, "{}", it.count())?;
            } else {
                for p in it {
                    writeln!(stdout, "{p}")?;
                }
            }
        }
        Command::Biject(a) => {
            let spec = a.class.spec()?;
            let cache = PairingCache::resolve(cache_dir);
            let trace = pipeline(&a.perm, spec, a.strategy, &cache)?;
            if a.stages {
                for stage in permuton_lab_core::Stage::ALL {
                    writeln!(stdout, "{}={}", stage.name(), trace.stage(stage))?;
                }
            } else {
                writeln!(stdout, "{}", trace.pi)?;
            }
            if let Some(path) = a.trace {
                let mut file = std::fs::File::create(path)?;
                write_json_line(&mut file, &trace_json(&trace))?;
            }
        }
        Command::Sample(a) => {
            let spec = match a.d {
                Some(d) if d >= 1 => ClassSpec::new(1, d - 1, 1)?,
                Some(_) => return Err(LabError::Usage("--d must be positive".into())),
                None => a.class.spec()?,
            };
            let mut trace = open_optional(a.trace.as_deref())?;
            with_output(a.out.as_deref(), stdout, |out| {
                experiments::sample_batch(
                    a.n,
                    spec,
                    a.samples,
                    a.seed,
                    a.strategy,
                    a.n_bound,
                    cache_dir.as_deref(),
                    out,
                    trace.as_mut().map(|t| t as &mut dyn Write),
                )
            })?;
            if let Some(t) = trace.as_mut() {
                t.flush()?;
            }
        }
        Command::Measure(a) => {
            let inputs = match (a.perm, a.input) {
                (Some(perm), _) => vec![MeasureInput { perm, seed: None, stream: None }],
                (None, Some(path)) => experiments::read_sample_lines(&std::fs::read_to_string(path)?)?,
                (None, None) => return Err(LabError::Usage("give --perm or --input".into())),
            };
            if inputs.iter().any(|i| i.perm.is_empty()) {
                return Err(LabError::Usage("cannot measure the empty permutation".into()));
            }
            if let Some(e) = a.eps.0.iter().find(|e| e.is_nan() || **e < 0.0) {
                return Err(LabError::Usage(format!("epsilon {e} must be nonnegative")));
            }
            if a.grid == 0 {
                return Err(LabError::Usage("grid must be positive".into()));
            }
            with_output(a.out.as_deref(), stdout, |out| experiments::measure_rows(&inputs, &a.eps.0, a.grid, out))?;
        }
        Command::Converge(a) => {
            let cfg = ExperimentConfig {
                spec: a.class,
                ns: a.ns.0,
                samples: a.samples,
                seed: a.seed,
                epsilons: a.eps.0,
                grid: a.grid,
                good_epsilon: a.good_eps,
                n_bound: a.n_bound,
                cache_dir,
            };
            let mut summary = open_optional(a.summary.as_deref())?;
            with_output(a.out.as_deref(), stdout, |out| {
                let sink: &mut dyn Write = match summary.as_mut() {
                    Some(s) => s,
                    None => &mut *stderr,
                };
                experiments::converge(&cfg, a.strategy, Some(out), Some(sink))
            })?;
            if let Some(s) = summary.as_mut() {
                s.flush()?;
            }
        }
        Command::Goodness(a) => {
            if a.ns.0.is_empty() || a.ns.0.windows(2).any(|w| w[0] >= w[1]) {
                return Err(LabError::Usage("--ns must be a strictly ascending list".into()));
            }
            if a.samples == 0 {
                return Err(LabError::Usage("--samples must be at least 1".into()));
            }
            let mut paths_out = open_optional(a.paths.as_deref())?;
            let sweep = GoodnessSweep {
                ns: &a.ns.0,
                d: a.d,
                samples: a.samples,
                seed: a.seed,
                epsilon: a.eps,
                n_bound: a.n_bound,
                cache_dir: cache_dir.as_deref(),
            };
            let fractions = with_output(a.out.as_deref(), stdout, |out| {
                experiments::goodness_sweep(sweep, Some(out), paths_out.as_mut().map(|p| p as &mut dyn Write))
            })?;
            if let Some(p) = paths_out.as_mut() {
                p.flush()?;
            }
            for (n, f) in fractions {
                writeln!(stderr, "n={n} good_fraction={f}")?;
            }
        }
        Command::ShapeWilf(a) => {
            let patterns: Vec<Permutation> =
                if a.pattern.is_empty() { all_permutations(a.length)?.collect() } else { a.pattern };
            for class in shape_wilf_classes(&patterns, a.max_boxes, a.bound)? {
                let names: Vec<String> = class
                    .iter()
                    .map(|p| {
                        p.values().iter().map(u32::to_string).collect::<Vec<_>>().join(if p.len() > 9 {
                            ","
                        } else {
                            ""
                        })
                    })
                    .collect();
                writeln!(stdout, "{}", names.join(" "))?;
            }
        }
        Command::Verify(a) => {
            let scale = Scale { max_n: a.max_n, samples: a.samples };
            let passed = with_output(a.out.as_deref(), stdout, |out| run_suite(&a.suite, &scale, out))?;
            if !passed {
                return Err(LabError::Violation(format!("suite {} has failing checks", a.suite)));
            }
        }
    }
    Ok(EXIT_OK)
}
