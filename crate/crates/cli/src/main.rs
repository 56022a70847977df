use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cohconc_core::channels::{apply_channel, selective_outcomes};
use cohconc_core::convexroof::{convex_roof_minimize, RoofConfig, RoofObjective};
use cohconc_core::entanglement::{pure_concurrence, wootters_concurrence};
use cohconc_core::gellmann::{antisymmetric_ggm, diagonal_ggm, symmetric_ggm};
use cohconc_core::io::{density_to_json, matrix_to_json, parse_channel, parse_state, StateData};
use cohconc_core::measures::{measure_report, MeasureKind};
use cohconc_core::statespace::{
    maximally_coherent_state, mcs_with_phases, random_density, random_incoherent, random_pure,
    DEFAULT_TOL,
};
use cohconc_core::theorems::{records_to_csv, run_suite, table1_report, Suite};
use cohconc_core::{BipartiteSplit, Error};

/// Coherence concurrence toolkit: measures, convex roofs, incoherent
/// channels and verification suites. Data goes to stdout (or `--out`) as CSV
/// or JSON; diagnostics go to stderr.
#[derive(Parser, Debug)]
#[command(name = "cohconc", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance: input validation, and the stopping threshold of
    /// roof searches.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form coherence measure of a state.
    Measure {
        #[arg(long)]
        state: PathBuf,
        /// l1, relent, cc-pure, ri-pure, qubit-cc or qubit-ri.
        #[arg(long)]
        measure: String,
    },
    /// Convex-roof upper bound.
    Roof {
        #[arg(long)]
        state: PathBuf,
        /// cc, ri or ce.
        #[arg(long)]
        objective: String,
        /// Subsystem dimensions `dS,dA` (required for ce).
        #[arg(long)]
        split: Option<String>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long)]
        ensemble_size: Option<usize>,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
    },
    /// Entanglement concurrence across a bipartition.
    Entangle {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        split: String,
        /// Use the closed two-qubit formula.
        #[arg(long)]
        wootters: bool,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Apply a Kraus channel to a state.
    Channel {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Keep the outcomes apart: write each outcome state to
        /// `<outcome-prefix>-<n>.json` and emit a `p,state_file` CSV.
        #[arg(long)]
        selective: bool,
        #[arg(long, default_value = "outcome")]
        outcome_prefix: String,
    },
    /// Print a generalized Gell-Mann matrix.
    Ggm {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        kind: GgmArg,
        /// First label of a symmetric/antisymmetric pair (1-based).
        #[arg(long)]
        j: Option<usize>,
        /// Second label of the pair.
        #[arg(long)]
        k: Option<usize>,
        /// Index of a diagonal generator, 1..d-1.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Generate a random state file.
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        #[arg(long)]
        dim: usize,
        /// Rank of a `density` state (default: full).
        #[arg(long)]
        rank: Option<usize>,
        /// Comma-separated phases of an `mcs` state; random when omitted.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Run a verification suite and emit its check records.
    Verify {
        /// proposition, thm2, thm3, cor1, cor2, requirements or table1.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Sweep limit per roof search stage.
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
    },
    /// The four coherence measures of a state and the identities between them.
    Table1 {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Sweep limit per roof search stage.
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GgmArg {
    Sym,
    Anti,
    Diag,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RandomKind {
    Pure,
    Density,
    Incoherent,
    Mcs,
}

/// Input errors end with exit code 2; a failed check with 1.
enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Output {
    text: String,
    passed: bool,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, passed: true }
    }
}

type Outcome = Result<Output, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_split(text: &str) -> Result<BipartiteSplit, Failure> {
    let bad = || Failure::Input(format!("split must look like 'dS,dA', got '{text}'"));
    let (s, a) = text.split_once(',').ok_or_else(bad)?;
    let s = s.trim().parse().map_err(|_| bad())?;
    let a = a.trim().parse().map_err(|_| bad())?;
    Ok(BipartiteSplit::new(s, a)?)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Ctx {
    seed: u64,
    tol: Option<f64>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn validation_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    fn state(&self, path: &Path) -> Result<StateData, Failure> {
        Ok(parse_state(&read(path)?, self.validation_tol())?)
    }

    fn roof_config(&self, restarts: usize) -> RoofConfig {
        let mut config = RoofConfig::default()
            .with_restarts(restarts)
            .with_seed(self.seed);
        if let Some(tol) = self.tol {
            config = config.with_tolerance(tol);
        }
        config
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        seed: cli.seed,
        tol: cli.tol,
        out: cli.out,
    };
    if let Some(tol) = ctx.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
        }
    }
    let output = dispatch(&ctx, cli.command)?;
    // failed checks still write their records before reporting
    emit(&ctx, &output.text)?;
    if output.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn emit(ctx: &Ctx, text: &str) -> Result<(), Failure> {
    match &ctx.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Measure { state, measure } => {
            let kind: MeasureKind = measure.parse()?;
            let rho = ctx.state(&state)?.to_density();
            let report = measure_report(&rho, kind, ctx.validation_tol())?;
            Ok(format!(
                "measure,value,certification\n{},{},{}\n",
                kind.tag(),
                num(report.value),
                report.certification
            )
            .into())
        }
        Command::Roof {
            state,
            objective,
            split,
            restarts,
            ensemble_size,
            max_iterations,
        } => {
            let split = split.as_deref().map(parse_split).transpose()?;
            let objective = RoofObjective::from_tag(&objective, split)?;
            let rho = ctx.state(&state)?.to_density();
            let mut config = ctx.roof_config(restarts);
            config.max_iterations = max_iterations;
            if let Some(m) = ensemble_size {
                config = config.with_ensemble_size(m);
            }
            let result = convex_roof_minimize(&rho, objective, &config)?;
            Ok(format!(
                "objective,value,certification,restarts,best_restart_index\n{},{},{},{},{}\n",
                objective,
                num(result.value),
                result.certification,
                restarts,
                result.best_restart
            )
            .into())
        }
        Command::Entangle {
            state,
            split,
            wootters,
            restarts,
        } => {
            let split = parse_split(&split)?;
            let data = ctx.state(&state)?;
            split.check(data.dim())?;
            let (form, value) = if wootters {
                if split.dim_s != 2 || split.dim_a != 2 {
                    return Err(Failure::Input("--wootters needs a 2,2 split".into()));
                }
                ("wootters", wootters_concurrence(&data.to_density())?)
            } else {
                let rho = data.to_density();
                match rho.as_pure(ctx.validation_tol()) {
                    Some(psi) => ("pure", pure_concurrence(&psi, split)?),
                    None => {
                        let config = ctx.roof_config(restarts);
                        let result = convex_roof_minimize(
                            &rho,
                            RoofObjective::EntanglementConcurrence(split),
                            &config,
                        )?;
                        ("roof-upper-bound", result.value)
                    }
                }
            };
            Ok(format!("form,value\n{form},{}\n", num(value)).into())
        }
        Command::Channel {
            channel,
            state,
            selective,
            outcome_prefix,
        } => {
            let ch = parse_channel(&read(&channel)?, ctx.tol.unwrap_or(1e-10))?;
            let rho = ctx.state(&state)?.to_density();
            if !selective {
                return Ok(density_to_json(&apply_channel(&ch, &rho)?).into());
            }
            let outcomes = selective_outcomes(&ch, &rho)?;
            let mut csv = String::from("p,state_file\n");
            for (n, o) in outcomes.outcomes.iter().enumerate() {
                let file = format!("{outcome_prefix}-{}.json", n + 1);
                fs::write(&file, density_to_json(&o.state))
                    .map_err(|e| Failure::Input(format!("{file}: {e}")))?;
                csv.push_str(&format!("{},{file}\n", num(o.probability)));
            }
            Ok(csv.into())
        }
        Command::Ggm { dim, kind, j, k, l } => {
            let need = |x: Option<usize>, name: &str| {
                x.ok_or_else(|| Failure::Input(format!("--{name} is required for this kind")))
            };
            let op = match kind {
                GgmArg::Sym => symmetric_ggm::<f64>(dim, need(j, "j")?, need(k, "k")?)?,
                GgmArg::Anti => antisymmetric_ggm::<f64>(dim, need(j, "j")?, need(k, "k")?)?,
                GgmArg::Diag => diagonal_ggm::<f64>(dim, need(l, "l")?)?,
            };
            Ok(format!(
                "{{\"dim\":{dim},\"data\":{}}}\n",
                matrix_to_json(&op.matrix)
            )
            .into())
        }
        Command::Random {
            kind,
            dim,
            rank,
            theta,
        } => {
            if dim == 0 {
                return Err(Error::InvalidDimension(0).into());
            }
            if rank.is_some() && !matches!(kind, RandomKind::Density) {
                return Err(
                    Error::BadParams("--rank only applies to density states".into()).into(),
                );
            }
            if theta.is_some() && !matches!(kind, RandomKind::Mcs) {
                return Err(Error::BadParams("--theta only applies to mcs states".into()).into());
            }
            let seed = ctx.seed;
            let data = match kind {
                RandomKind::Pure => StateData::Pure(random_pure(dim, seed)),
                RandomKind::Density => {
                    StateData::Density(random_density(dim, rank.unwrap_or(dim), seed)?)
                }
                RandomKind::Incoherent => StateData::Density(random_incoherent(dim, seed)),
                RandomKind::Mcs => StateData::Pure(match theta {
                    Some(text) => {
                        let phases = text
                            .split(',')
                            .map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                            .collect::<Option<Vec<f64>>>()
                            .ok_or_else(|| Error::BadParams(format!("bad phase list '{text}'")))?;
                        if phases.len() != dim {
                            return Err(Error::BadParams(format!(
                                "need {dim} phases, got {}",
                                phases.len()
                            ))
                            .into());
                        }
                        mcs_with_phases(dim, &phases)?
                    }
                    None if seed == 0 => maximally_coherent_state(dim)?,
                    None => {
                        use rand::Rng;
                        let mut rng = cohconc_core::statespace::seeded_rng(seed, 0);
                        let phases: Vec<f64> = (0..dim)
                            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                            .collect();
                        mcs_with_phases(dim, &phases)?
                    }
                }),
            };
            Ok(data.to_json().into())
        }
        Command::Verify {
            suite,
            dim,
            samples,
            restarts,
            max_iterations,
        } => {
            let suite: Suite = suite.parse()?;
            let dim = dim.unwrap_or_else(|| suite.default_dim());
            let mut config = ctx.roof_config(restarts);
            config.max_iterations = max_iterations;
            let records = run_suite(suite, dim, samples, ctx.seed, &config)?;
            let passed = records.iter().all(|r| !r.failed());
            for r in records.iter().filter(|r| r.failed()) {
                eprintln!(
                    "check failed: {} seed={} {} {} {} (slack {:e})",
                    r.check_name, r.seed, r.lhs, r.relation, r.rhs, r.slack
                );
            }
            Ok(Output {
                text: records_to_csv(&records),
                passed,
            })
        }
        Command::Table1 {
            state,
            restarts,
            max_iterations,
        } => {
            let rho = ctx.state(&state)?.to_density();
            let mut config = ctx.roof_config(restarts);
            config.max_iterations = max_iterations;
            let report = table1_report(&rho, &config)?;
            for r in report.checks.iter().filter(|r| r.failed()) {
                eprintln!(
                    "identity failed: {} {} {} {}",
                    r.check_name, r.lhs, r.relation, r.rhs
                );
            }
            Ok(Output {
                text: report.to_csv(),
                passed: report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
