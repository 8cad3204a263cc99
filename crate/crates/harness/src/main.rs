use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elhlab_core::framework::FragmentId;
use elhlab_core::hardness::MqLearner;
use elhlab_core::learners::AlgorithmId;
use elhlab_core::teacher::EqStrategy;
use elhlab_harness::hardness::write_hardness_csv;
use elhlab_harness::{run_experiment, ExperimentConfig, GenSpec, TargetSource};

#[derive(Parser)]
#[command(name = "elhlab", version, about = "Learn ELH ontologies from queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one learner against a machine-held target.
    Learn {
        #[arg(long)]
        framework: FragmentId,
        #[arg(long)]
        learner: AlgorithmId,
        /// Target TBox file.
        #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
        target: Option<PathBuf>,
        /// Generator spec, e.g. `fragment=dllite,sig=3,roles=1,axioms=4`;
        /// without `seed=` it takes `--seed`.
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, requires = "delta")]
        epsilon: Option<f64>,
        #[arg(long, requires = "epsilon")]
        delta: Option<f64>,
        #[arg(long, default_value_t = EqStrategy::FirstSmallest)]
        eq_strategy: EqStrategy,
        #[arg(long)]
        max_queries: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        depth_cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run MQ-only learners against the adversary; prints CSV.
    Hardness {
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<usize>,
        /// `toy-mq`, `exhaustive-mq`, `sigma-probe` or `all`.
        #[arg(long, default_value = "all")]
        learner: String,
    },
    /// Serve the session API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Learn {
            framework,
            learner,
            target,
            gen,
            seed,
            epsilon,
            delta,
            eq_strategy,
            max_queries,
            max_size,
            depth_cap,
            out,
        } => {
            let source = match (target, gen) {
                (Some(p), _) => TargetSource::File(p),
                (None, Some(text)) => {
                    let mut g: GenSpec = text.parse()?;
                    if !text.contains("seed=") {
                        g.seed = seed;
                    }
                    TargetSource::Gen(g)
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let mut cfg = ExperimentConfig::new(framework, learner, source).with_seed(seed).with_out_dir(&out);
            cfg.epsilon = epsilon;
            cfg.delta = delta;
            cfg.eq_strategy = eq_strategy;
            cfg.max_queries = max_queries;
            cfg.max_size = max_size;
            cfg.depth_cap = depth_cap;
            let outcome = run_experiment(&cfg)?;
            let m = outcome.metrics();
            log::info!(
                "success={} mq={} eq={} sq={} reports in {}",
                outcome.success(),
                m.mq_count,
                m.eq_count,
                m.sq_count,
                out.display()
            );
            Ok(())
        }
        Command::Hardness { n, learner } => {
            let learners: Vec<MqLearner> =
                if learner == "all" { MqLearner::ALL.to_vec() } else { vec![learner.parse::<MqLearner>()?] };
            write_hardness_csv(std::io::stdout().lock(), &n, &learners)?;
            Ok(())
        }
        Command::Serve { bind } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(elhlab_harness::session::serve(&bind))?;
            Ok(())
        }
    }
}
