use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use treetau::asymptotics::{
    beta_approx, expected_tau_asymptotic, expected_tau_for_tree_degrees, expected_tau_near_two, f_of_x, g_of_x,
    lambda0, lambda_x, mu_bar, AsymptoticEstimate, Mode, DEFAULT_BAND_MULTIPLIER,
};
use treetau::concentration::{l_phi, tree_concentration_experiment, PhiSpec, Xi};
use treetau::experiments::{compare, mc_expected_tau, verify, CompareConfig, McConfig, TauMethod, TruthSource};
use treetau::graphs::{sample_simple_graph_with_limit, DEFAULT_RETRY_LIMIT};
use treetau::io::{parse_degrees, parse_graph, read_text};
use treetau::numeric::{ln_biguint, to_f64};
use treetau::trees::{count_trees_with_degrees, prufer_encode, sample_tree};
use treetau::{DegreeSequence, Error, TreeDegreeSequence};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "treetau", version, about = "Spanning trees of random graphs with given degrees")]
struct Cli {
    /// Add wall-clock time to the report (makes output bytes run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct DegreesInput {
    /// Degree file: one integer per line, or one comma-separated line.
    #[arg(long)]
    degrees: Option<PathBuf>,

    /// Degrees given directly, e.g. "3,3,3,3".
    #[arg(long)]
    degrees_inline: Option<String>,
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    /// Random seed; a fresh one is drawn and reported when absent.
    #[arg(long, env = "TREETAU_SEED")]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Permissive => Mode::Permissive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Log,
}

impl From<MethodArg> for TauMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => TauMethod::Auto,
            MethodArg::Exact => TauMethod::Exact,
            MethodArg::Log => TauMethod::Log,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Brute,
    Mc,
}

#[derive(Args, Clone, Copy)]
struct McArgs {
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a degree sequence is well formed and graphical.
    Validate {
        #[command(flatten)]
        input: DegreesInput,
    },
    /// Summary statistics and error-term branches.
    Stats {
        #[command(flatten)]
        input: DegreesInput,
    },
    /// Number of labelled trees with the given degrees.
    CountTrees {
        #[arg(long)]
        tree_degrees: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Uniform random labelled trees with the given degrees, as edge lists.
    SampleTree {
        #[arg(long)]
        tree_degrees: String,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Uniform random simple graph with the given degrees, as an edge list.
    SampleGraph {
        #[command(flatten)]
        input: DegreesInput,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = DEFAULT_RETRY_LIMIT)]
        retry_limit: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact number of spanning trees of a graph given as an edge list.
    TauExact {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Asymptotic estimate of the expected number of spanning trees.
    Estimate {
        #[command(flatten)]
        input: DegreesInput,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Asymptotic estimate of the expected number of spanning trees with degrees x.
    EstimateX {
        #[command(flatten)]
        input: DegreesInput,
        #[arg(long)]
        tree_degrees: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
    },
    /// Estimate for mean degree just above 2, parametrised by x = m − n.
    NearTwo {
        #[command(flatten)]
        input: DegreesInput,
        /// Defaults to m − n.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
    },
    /// Monte Carlo estimate of the expected number of spanning trees.
    Mc {
        #[command(flatten)]
        input: DegreesInput,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Ground truth (exhaustive or Monte Carlo) against the asymptotic formula.
    Compare {
        #[command(flatten)]
        input: DegreesInput,
        #[arg(long, value_enum, default_value_t = SourceArg::Mc)]
        mode: SourceArg,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = DEFAULT_BAND_MULTIPLIER)]
        band_multiplier: f64,
        /// Refuse sequences outside the formula's hypotheses.
        #[arg(long)]
        strict: bool,
    },
    /// Run the exact oracle suite.
    Verify {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Exponential moment and tail table for an edge functional of a random tree.
    Concentration {
        #[arg(long)]
        tree_degrees: String,
        /// Vertex weights, comma-separated.
        #[arg(long, conflicts_with = "degrees_inline")]
        phi: Option<String>,
        /// Use the weights (d_j − x_j)/√((d̄−2)n + 2) for these degrees instead of --phi.
        #[arg(long)]
        degrees_inline: Option<String>,
        /// Lower end of the weight range; defaults to the smallest weight.
        #[arg(long)]
        a: Option<f64>,
        /// Upper end of the weight range; defaults to the largest weight.
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        xi: i64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// Report plus the bytes of input it was computed from.
struct Outcome {
    command: &'static str,
    input: String,
    seed: Option<u64>,
    body: Body,
    exit: u8,
}

enum Body {
    Json(Value),
    Raw(String),
    /// Edge-list text, preceded by a `#` provenance line the format ignores.
    EdgeList(String),
}

fn ok_json(command: &'static str, input: String, seed: Option<u64>, result: impl Serialize) -> Result<Outcome, Error> {
    let value = serde_json::to_value(result).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Outcome { command, input, seed, body: Body::Json(value), exit: 0 })
}

fn raw(command: &'static str, input: String, seed: Option<u64>, text: String) -> Result<Outcome, Error> {
    Ok(Outcome { command, input, seed, body: Body::Raw(text), exit: 0 })
}

fn read_degrees(input: &DegreesInput) -> Result<Vec<u32>, Error> {
    match (&input.degrees, &input.degrees_inline) {
        (Some(path), _) => parse_degrees(&read_text(path)?),
        (None, Some(inline)) => parse_degrees(inline),
        (None, None) => Err(Error::Parse("no degree sequence given".into())),
    }
}

fn load_degrees(input: &DegreesInput) -> Result<DegreeSequence, Error> {
    DegreeSequence::new(read_degrees(input)?)
}

fn tree_degrees(text: &str) -> Result<TreeDegreeSequence, Error> {
    TreeDegreeSequence::new(parse_degrees(text)?)
}

fn resolve_seed(seed: SeedArg) -> u64 {
    seed.seed.unwrap_or_else(rand::random)
}

fn estimate_json(e: &AsymptoticEstimate) -> Value {
    json!({
        "log_value": e.log_value,
        "error_exponent": e.error_exponent,
        "condition_ok": e.condition_ok,
        "value": e.value(),
    })
}

fn stats_json(d: &DegreeSequence) -> Value {
    json!({
        "stats": d.stats().report(),
        "eta": d.eta().ok().map(|eta| json!({
            "quartic": eta.quartic,
            "logarithmic": eta.logarithmic,
            "linear": eta.linear,
            "value": eta.value(),
        })),
        "graphical": d.is_graphical(),
        "excess_condition": d.excess_condition_holds(),
    })
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate { input } => {
            let raw_degrees = read_degrees(&input)?;
            let canonical = raw_degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            let report = match DegreeSequence::new(raw_degrees) {
                Ok(d) => json!({
                    "valid": true,
                    "graphical": d.is_graphical(),
                    "n": d.n(),
                    "m": d.edge_count(),
                    "excess_condition": d.excess_condition_holds(),
                }),
                Err(e) => json!({ "valid": false, "graphical": false, "error": e.to_string() }),
            };
            let fine = report["valid"] == json!(true) && report["graphical"] == json!(true);
            let mut out = ok_json("validate", canonical, None, report)?;
            out.exit = if fine { 0 } else { 1 };
            Ok(out)
        }
        Command::Stats { input } => {
            let d = load_degrees(&input)?;
            ok_json("stats", d.to_string(), None, stats_json(&d))
        }
        Command::CountTrees { tree_degrees: text, format } => {
            let x = tree_degrees(&text)?;
            let count = count_trees_with_degrees(&x);
            match format {
                Format::Json => ok_json("count-trees", x.to_string(), None, json!({ "count": count.to_string() })),
                _ => raw("count-trees", x.to_string(), None, format!("{count}\n")),
            }
        }
        Command::SampleTree { tree_degrees: text, count, seed, format } => {
            let x = tree_degrees(&text)?;
            let seed = resolve_seed(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let trees: Vec<_> = (0..count).map(|_| sample_tree(&x, &mut rng)).collect();
            match format {
                Format::Json => {
                    let list: Vec<Value> = trees
                        .iter()
                        .map(|t| json!({ "edges": t.one_based_edges(), "prufer": prufer_encode(t).to_one_based() }))
                        .collect();
                    ok_json("sample-tree", x.to_string(), Some(seed), json!({ "trees": list }))
                }
                _ => {
                    let text = trees.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n");
                    Ok(Outcome {
                        command: "sample-tree",
                        input: x.to_string(),
                        seed: Some(seed),
                        body: Body::EdgeList(text),
                        exit: 0,
                    })
                }
            }
        }
        Command::SampleGraph { input, seed, retry_limit, format } => {
            let d = load_degrees(&input)?;
            let seed = resolve_seed(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = sample_simple_graph_with_limit(&d, &mut rng, retry_limit)?;
            match format {
                Format::Json => {
                    let edges: Vec<(u32, u32)> = g.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
                    ok_json("sample-graph", d.to_string(), Some(seed), json!({ "n": g.n(), "edges": edges }))
                }
                _ => Ok(Outcome {
                    command: "sample-graph",
                    input: d.to_string(),
                    seed: Some(seed),
                    body: Body::EdgeList(g.to_string()),
                    exit: 0,
                }),
            }
        }
        Command::TauExact { graph } => {
            let text = read_text(&graph)?;
            let g = parse_graph(&text)?;
            let tau = g.spanning_tree_count();
            let result = json!({
                "n": g.n(),
                "m": g.edges().len(),
                "tau": tau.value.to_string(),
                "ln_tau": ln_biguint(&tau.value),
            });
            ok_json("tau-exact", g.to_string(), None, result)
        }
        Command::Estimate { input, mode, format } => {
            let d = load_degrees(&input)?;
            let est = expected_tau_asymptotic(&d, mode.into())?;
            match format {
                Format::Csv | Format::Text => raw(
                    "estimate",
                    d.to_string(),
                    None,
                    format!(
                        "log_value,error_exponent,condition_ok\n{},{},{}\n",
                        est.log_value, est.error_exponent, est.condition_ok
                    ),
                ),
                Format::Json => {
                    let mut result = estimate_json(&est);
                    result["stats"] = stats_json(&d);
                    ok_json("estimate", d.to_string(), None, result)
                }
            }
        }
        Command::EstimateX { input, tree_degrees: text, mode } => {
            let d = load_degrees(&input)?;
            let x = tree_degrees(&text)?;
            let est = expected_tau_for_tree_degrees(&d, &x, mode.into())?;
            let mut result = estimate_json(&est);
            result["x"] = json!(x.as_slice());
            result["lambda0"] = json!(to_f64(&lambda0(&d)));
            result["lambda_x"] = json!(to_f64(&lambda_x(&d, &x)?));
            result["mu_bar"] = json!(mu_bar(&d, &x).ok().map(|v| to_f64(&v)));
            result["f"] = json!(f_of_x(&d, &x)?);
            result["g"] = json!(g_of_x(&d, &x).ok());
            result["beta_approx"] = json!(beta_approx(&d, &x).ok().map(|b| estimate_json(&b)));
            ok_json("estimate-x", format!("{d};{x}"), None, result)
        }
        Command::NearTwo { input, x, mode } => {
            let d = load_degrees(&input)?;
            let x = x.unwrap_or(d.edge_count() as f64 - d.n() as f64);
            let est = expected_tau_near_two(&d, x, mode.into())?;
            let mut result = estimate_json(&est);
            result["x"] = json!(x);
            ok_json("near-two", d.to_string(), None, result)
        }
        Command::Mc { input, mc } => {
            let d = load_degrees(&input)?;
            let config = mc_config(mc);
            let est = mc_expected_tau(&d, &config)?;
            ok_json("mc", d.to_string(), Some(config.seed), est)
        }
        Command::Compare { input, mode, mc, band_multiplier, strict } => {
            let d = load_degrees(&input)?;
            let source = match mode {
                SourceArg::Brute => TruthSource::Brute,
                SourceArg::Mc => TruthSource::Mc,
            };
            let config = CompareConfig {
                mc: mc_config(mc),
                band_multiplier,
                mode: if strict { Mode::Strict } else { Mode::Permissive },
            };
            let seed = (source == TruthSource::Mc).then_some(config.mc.seed);
            let report = compare(&d, source, &config)?;
            ok_json("compare", d.to_string(), seed, report)
        }
        Command::Verify { max_n } => {
            let report = verify(max_n);
            let passed = report.passed;
            let mut out = ok_json("verify", format!("max_n={max_n}"), None, report)?;
            out.exit = if passed { 0 } else { 1 };
            Ok(out)
        }
        Command::Concentration {
            tree_degrees: text,
            phi,
            degrees_inline,
            a,
            b,
            xi,
            samples,
            workers,
            seed,
            format,
        } => {
            let x = tree_degrees(&text)?;
            let xi = Xi::try_from(xi)?;
            let spec = match (phi, degrees_inline) {
                (Some(values), None) => {
                    let values: Vec<f64> = values
                        .split(',')
                        .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad phi value {v:?}"))))
                        .collect::<Result<_, _>>()?;
                    let lo = a.unwrap_or_else(|| values.iter().copied().fold(f64::INFINITY, f64::min));
                    let hi = b.unwrap_or_else(|| values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
                    PhiSpec::new(values, lo, hi)?
                }
                (None, Some(d)) => PhiSpec::tree_correction(&DegreeSequence::new(parse_degrees(&d)?)?, &x)?,
                _ => return Err(Error::Parse("give exactly one of --phi and --degrees-inline".into())),
            };
            let seed = resolve_seed(seed);
            build_pool(workers);
            let report = tree_concentration_experiment(&x, &spec, xi, samples, seed, workers)?;
            let input = format!("{x};{:?}", spec.values());
            match format {
                Format::Json => {
                    let mut value = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
                    value["phi"] = json!({ "a": spec.a(), "b": spec.b(), "seminorm": spec.seminorm() });
                    debug_assert_eq!(report.l_phi, l_phi(&spec, x.n()));
                    ok_json("concentration", input, Some(seed), value)
                }
                _ => raw("concentration", input, Some(seed), report.tail_csv()),
            }
        }
    }
}

fn mc_config(mc: McArgs) -> McConfig {
    build_pool(mc.workers);
    McConfig {
        samples: mc.samples,
        seed: resolve_seed(mc.seed),
        workers: mc.workers.max(1),
        method: mc.method.into(),
        retry_limit: DEFAULT_RETRY_LIMIT,
    }
}

/// One thread per worker; results do not depend on the thread count.
fn build_pool(workers: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build_global();
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let input_hash = hex::encode(Sha256::digest(outcome.input.as_bytes()));
    let text = match outcome.body {
        Body::Raw(text) => text,
        Body::EdgeList(text) => {
            let seed = outcome.seed.map(|s| s.to_string()).unwrap_or_default();
            format!(
                "# treetau {} {} input_hash={input_hash} seed={seed}\n{text}",
                env!("CARGO_PKG_VERSION"),
                outcome.command
            )
        }
        Body::Json(result) => {
            let mut report = json!({
                "schema_version": SCHEMA_VERSION,
                "tool": "treetau",
                "version": env!("CARGO_PKG_VERSION"),
                "command": outcome.command,
                "input_hash": input_hash,
                "seed": outcome.seed,
                "result": result,
            });
            if cli.timing {
                report["wall_time_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
            }
            serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
        }
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.exit)
}
