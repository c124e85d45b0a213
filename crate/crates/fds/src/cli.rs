//! The `fds` command line.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fds_core::corpus::{generate_synthetic_corpus, Role, VocabPolicy, DEFAULT_MIN_COUNT};
use fds_core::inference::{conditional_truth_mf, exact_conditional_truth};
use fds_core::init::{fit, FitParams, FunctionParams};
use fds_core::quantifier::{evaluate, DEFAULT_FEW_THETA, DEFAULT_MANY_THETA, DEFAULT_TAU};
use fds_core::space::DEFAULT_ENUMERATION_CAP;
use fds_core::{MeanFieldOptions, Observation, SpaceConfig};

use crate::eval::{eval_relpron, eval_sim, eval_svo, with_threads, Ensemble, Report};
use crate::io;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "fds",
    version,
    about = "Functional distributional semantics: initialise, infer, quantify, evaluate"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Initialise a model from a triples corpus.
    Init(InitArgs),
    /// Lexical similarity (Spearman against gold).
    EvalSim {
        #[command(flatten)]
        eval: EvalArgs,
        /// Look words up only in this namespace.
        #[arg(long, value_enum)]
        role: Option<RoleArg>,
    },
    /// Contextual verb similarity on SVO pairs (Spearman against gold).
    EvalSvo(EvalArgs),
    /// Relative-clause retrieval (mean average precision).
    EvalRelpron(EvalArgs),
    /// Probability that a predicate is true of a node, given a situation.
    Infer(InferArgs),
    /// Truth of a fully scoped quantified sentence.
    Quant(QuantArgs),
    /// Sample a corpus from a micro-world description.
    Synth(SynthArgs),
    /// Number of pixies in a space.
    Space {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        card: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RoleArg {
    Noun,
    Verb,
}

#[derive(Debug, Args)]
pub struct MeanFieldArgs {
    /// Mean-field convergence threshold on the largest component change.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    /// Maximum mean-field sweeps.
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
}

impl MeanFieldArgs {
    fn options(&self) -> Result<MeanFieldOptions> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 || self.max_iters == 0 {
            return Err(fds_core::Error::InvalidParameter("tolerance and max-iters must be positive".into()).into());
        }
        Ok(MeanFieldOptions {
            tolerance: self.tolerance,
            max_iters: self.max_iters,
        })
    }
}

#[derive(Debug, Args)]
pub struct InitArgs {
    /// Triples TSV: subject, verb, object; `_` for an absent argument.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub dim: usize,
    #[arg(long, default_value_t = 40)]
    pub card: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop forms seen fewer times than this.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    pub min_count: u64,
    /// Multiplier from PPMI to weights.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Truth probability of each function on the uniform mean field.
    #[arg(long, default_value_t = 0.5)]
    pub target_truth: f64,
    #[command(flatten)]
    pub mean_field: MeanFieldArgs,
    /// Reuse the vocabulary of an existing model instead of building one.
    #[arg(long)]
    pub vocab_from: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset TSV.
    #[arg(long)]
    pub data: PathBuf,
    /// Word vectors to mix into the scores.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Weight of the model's scores in the ensemble.
    #[arg(long, default_value_t = 0.5, requires = "embeddings")]
    pub alpha: f64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub mean_field: MeanFieldArgs,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Situation graph JSON; node predicates are observed true.
    #[arg(long)]
    pub graph: PathBuf,
    /// Query as `pred@node`.
    #[arg(long)]
    pub query: String,
    /// Also compute the answer by exact enumeration.
    #[arg(long)]
    pub exact: bool,
    /// Largest joint space enumerated.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub mean_field: MeanFieldArgs,
}

#[derive(Debug, Args)]
pub struct QuantArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Scope-tree JSON.
    #[arg(long)]
    pub tree: PathBuf,
    /// Print every quantifier's q values.
    #[arg(long)]
    pub q_trace: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Threshold of `many` where a node sets none.
    #[arg(long, default_value_t = DEFAULT_MANY_THETA)]
    pub many_theta: f64,
    /// Threshold of `few` where a node sets none.
    #[arg(long, default_value_t = DEFAULT_FEW_THETA)]
    pub few_theta: f64,
    /// Softness of `few` and `many` where a node sets none.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Micro-world JSON.
    #[arg(long)]
    pub world: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of triples.
    #[arg(long)]
    pub n: usize,
    /// Output TSV; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses the process arguments and runs; usage errors exit with 2, data
/// errors with 1.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Init(a) => init(a),
        Command::EvalSim { eval, role } => {
            let role = role.map(|r| match r {
                RoleArg::Noun => Role::Noun,
                RoleArg::Verb => Role::Verb,
            });
            let items = io::load_sim(&eval.data)?;
            run_eval(eval, |m, e, o| eval_sim(m, &eval.data, &items, role, e, o))
        }
        Command::EvalSvo(eval) => {
            let items = io::load_svo(&eval.data)?;
            run_eval(eval, |m, e, o| eval_svo(m, &eval.data, &items, e, o))
        }
        Command::EvalRelpron(eval) => {
            let items = io::load_relpron(&eval.data)?;
            run_eval(eval, |m, e, o| eval_relpron(m, &eval.data, &items, e, o))
        }
        Command::Infer(a) => infer(a),
        Command::Quant(a) => quant(a),
        Command::Synth(a) => synth(a),
        Command::Space { dim, card } => {
            let c = SpaceConfig::new(*dim, *card)?;
            let mut s = format!("log10_pixies {:.6}\n", c.count_pixies());
            if let Some(n) = c.pixie_count() {
                let _ = writeln!(s, "pixies {n}");
            }
            Ok(s)
        }
    }
}

fn init(a: &InitArgs) -> Result<String> {
    let config = SpaceConfig::new(a.dim, a.card)?;
    let policy = match &a.vocab_from {
        Some(p) => VocabPolicy::Reuse(io::load_model(p)?.vocab().clone()),
        None => VocabPolicy::Build { min_count: a.min_count },
    };
    let (triples, vocab) = io::load_triples(&a.corpus, policy)?;
    eprintln!("{}: {} usable triples", a.corpus.display(), triples.len());
    let params = FitParams {
        seed: a.seed,
        functions: FunctionParams {
            scale: a.scale,
            target_truth: a.target_truth,
        },
        mean_field: a.mean_field.options()?,
    };
    let fitted = fit(&triples, vocab, config, params).map_err(|e| Error::data(&a.corpus, e))?;
    for label in &fitted.missing_links {
        eprintln!("warning: no {label} links in the corpus; that matrix stays zero");
    }
    io::save_model(&a.out, &fitted.model)?;
    Ok(format!(
        "vocab {}\ndim {}\ncard {}\nseed {}\n",
        fitted.model.vocab().len(),
        a.dim,
        a.card,
        a.seed
    ))
}

fn run_eval<F>(a: &EvalArgs, f: F) -> Result<String>
where
    F: FnOnce(&fds_core::FdsModel, Option<Ensemble<'_>>, MeanFieldOptions) -> Result<Report> + Send,
{
    let model = io::load_model(&a.model)?;
    let embeddings = a.embeddings.as_deref().map(io::load_embeddings).transpose()?;
    let ensemble = embeddings.as_ref().map(|embeddings| Ensemble {
        embeddings,
        alpha: a.alpha,
    });
    let opts = a.mean_field.options()?;
    let report = with_threads(a.threads, || f(&model, ensemble, opts))??;
    if report.skipped > 0 {
        eprintln!(
            "{}: skipped {} items with unknown words",
            a.data.display(),
            report.skipped
        );
    }
    if report.nonconverged > 0 {
        eprintln!("warning: mean field did not converge for {} items", report.nonconverged);
    }
    Ok(if a.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    })
}

fn parse_query(
    path: &Path,
    model: &fds_core::FdsModel,
    graph: &fds_core::SituationGraph,
    q: &str,
) -> Result<Observation> {
    let (pred, node) = q
        .rsplit_once('@')
        .ok_or_else(|| fds_core::Error::InvalidParameter(format!("query `{q}` is not of the form pred@node")))?;
    let idx = graph.index_of(node).map_err(|e| Error::data(path, e))?;
    let hint = if graph.is_head(idx) { Role::Verb } else { Role::Noun };
    let pred = model.vocab().resolve(pred, Some(hint))?;
    Ok(Observation { node: idx, pred })
}

fn infer(a: &InferArgs) -> Result<String> {
    let model = io::load_model(&a.model)?;
    let graph = io::load_graph(&a.graph, model.vocab())?;
    let query = parse_query(&a.graph, &model, &graph, &a.query)?;
    let obs = Observation::from_graph(&graph);
    let (mf, result) = conditional_truth_mf(&model, &graph, &obs, query, a.mean_field.options()?)?;
    if !result.converged {
        eprintln!(
            "warning: mean field stopped after {} sweeps (last change {:.3e})",
            result.iterations, result.max_delta
        );
    }
    let mut s = format!("mean_field {mf}\n");
    if a.exact {
        let exact = exact_conditional_truth(&model, &graph, &obs, query, a.cap)?;
        let _ = writeln!(s, "exact {exact}");
        let _ = writeln!(s, "abs_diff {}", (mf - exact).abs());
    }
    Ok(s)
}

fn quant(a: &QuantArgs) -> Result<String> {
    let model = io::load_model(&a.model)?;
    let fuzzy = io::FuzzyDefaults {
        many_theta: a.many_theta,
        few_theta: a.few_theta,
        tau: a.tau,
    };
    let situation = io::load_scope(&a.tree, model.vocab(), fuzzy)?;
    let ev = evaluate(&model, &situation, a.cap).map_err(|e| Error::data(&a.tree, e))?;
    let mut s = format!("probability {}\n", ev.probability);
    if a.q_trace {
        for t in &ev.trace {
            let outer: Vec<&str> = t.outer.iter().map(|v| v.as_str()).collect();
            let qs: Vec<String> = t.q_values.iter().map(f64::to_string).collect();
            let _ = writeln!(
                s,
                "q {} {} outer=[{}] {}",
                t.kind.name(),
                t.var.as_str(),
                outer.join(","),
                qs.join(" ")
            );
        }
    }
    Ok(s)
}

fn synth(a: &SynthArgs) -> Result<String> {
    let world = io::load_world(&a.world)?;
    let triples = generate_synthetic_corpus(&world, a.seed, a.n).map_err(|e| Error::data(&a.world, e))?;
    match &a.out {
        Some(p) => {
            io::write_triples(p, &triples)?;
            Ok(String::new())
        }
        None => Ok(io::triples_tsv(&triples)),
    }
}
