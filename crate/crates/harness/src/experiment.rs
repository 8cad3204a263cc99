//! One machine-taught learning run: target, teacher, learner, reports.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use elhlab_core::framework::FragmentId;
use elhlab_core::learners::{learn, AlgorithmId, Caps, LearnError, LearnerConfig, PacParams};
use elhlab_core::teacher::{DistributionSpec, EqStrategy, TeacherConfig, TeacherError, TruthfulTeacher};
use elhlab_core::{equivalent, parse_tbox, signature_of, ConceptName, RoleName, Signature, TBox};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{generate_target, GenError, GenSpec};
use crate::transcript::{Metrics, Recorder, Transcript, TranscriptLog};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TargetSource {
    File(PathBuf),
    Gen(GenSpec),
    /// TBox in the text grammar.
    Inline(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureSpec {
    #[serde(default)]
    pub concepts: Vec<String>,
    #[serde(default)]
    pub roles: Vec<String>,
}

impl SignatureSpec {
    pub fn to_signature(&self) -> Result<Signature, HarnessError> {
        let bad = |e: elhlab_core::syntax::NameError| HarnessError::Config(e.to_string());
        Ok(Signature::new(
            self.concepts.iter().map(|c| ConceptName::new(c)).collect::<Result<Vec<_>, _>>().map_err(bad)?,
            self.roles.iter().map(|r| RoleName::new(r)).collect::<Result<Vec<_>, _>>().map_err(bad)?,
        ))
    }
}

impl From<&Signature> for SignatureSpec {
    fn from(s: &Signature) -> Self {
        SignatureSpec {
            concepts: s.concept_names.iter().map(|c| c.to_string()).collect(),
            roles: s.role_names.iter().map(|r| r.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    #[serde(with = "crate::text")]
    pub framework: FragmentId,
    #[serde(with = "crate::text")]
    pub learner: AlgorithmId,
    pub target: TargetSource,
    pub seed: u64,
    #[serde(with = "crate::text")]
    pub eq_strategy: EqStrategy,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub max_queries: Option<usize>,
    pub max_size: usize,
    pub depth_cap: usize,
    /// Size cap of the uniform sampling distribution.
    pub sample_size_cap: usize,
    /// Learner and sampling signature; defaults to the generator's or the
    /// target's.
    pub signature: Option<SignatureSpec>,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(framework: FragmentId, learner: AlgorithmId, target: TargetSource) -> Self {
        let caps = Caps::default();
        ExperimentConfig {
            framework,
            learner,
            target,
            seed: 0,
            eq_strategy: EqStrategy::default(),
            epsilon: None,
            delta: None,
            max_queries: None,
            max_size: caps.max_size,
            depth_cap: caps.depth_cap,
            sample_size_cap: 7,
            signature: None,
            out_dir: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pac(mut self, epsilon: f64, delta: f64) -> Self {
        self.epsilon = Some(epsilon);
        self.delta = Some(delta);
        self
    }

    pub fn with_signature(mut self, sig: &Signature) -> Self {
        self.signature = Some(sig.into());
        self
    }

    pub fn with_out_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.out_dir = Some(dir.into());
        self
    }

    pub fn load_target(&self) -> Result<(TBox, Option<Signature>), HarnessError> {
        match &self.target {
            TargetSource::File(p) => {
                let text = fs::read_to_string(p).map_err(|e| HarnessError::Io(p.clone(), e))?;
                Ok((parse_tbox(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))?, None))
            }
            TargetSource::Inline(text) => {
                Ok((parse_tbox(text).map_err(|e| HarnessError::Config(e.to_string()))?, None))
            }
            TargetSource::Gen(g) => Ok((generate_target(g)?, Some(g.signature()))),
        }
    }

    fn pac_params(&self) -> Result<Option<PacParams>, HarnessError> {
        match (self.epsilon, self.delta) {
            (None, None) => Ok(None),
            (Some(e), Some(d)) => PacParams::new(e, d).map(Some).map_err(|e| HarnessError::Config(e.to_string())),
            _ => Err(HarnessError::Config("epsilon and delta go together".into())),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, #[source] io::Error),
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub target: TBox,
    pub hypothesis: Option<TBox>,
    pub transcript: Transcript,
    pub wall_time: Duration,
}

impl ExperimentOutcome {
    pub fn metrics(&self) -> &Metrics {
        &self.transcript.metrics
    }

    pub fn success(&self) -> bool {
        self.transcript.metrics.success == Some(true)
    }
}

#[derive(Debug, Serialize)]
struct MetricsRow<'a> {
    framework: &'a str,
    learner: String,
    seed: u64,
    mq_count: usize,
    eq_count: usize,
    sq_count: usize,
    max_counterexample: usize,
    success: bool,
    hypothesis_size: Option<usize>,
    wall_time_ms: f64,
}

/// Outcome name and hypothesis of a finished learner.
fn classify(result: &Result<TBox, LearnError>) -> Result<&'static str, HarnessError> {
    match result {
        Ok(_) => Ok("halted"),
        Err(LearnError::Teacher(TeacherError::Budget { .. })) => Ok("query cap reached"),
        Err(LearnError::Exhausted { .. }) => Ok("size cap reached"),
        Err(LearnError::UnexpectedCounterexample(_)) => Ok("unexpected counterexample"),
        Err(e) => Err(HarnessError::Config(e.to_string())),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    let (target, gen_sig) = cfg.load_target()?;
    let sig = match &cfg.signature {
        Some(s) => s.to_signature()?,
        None => gen_sig.unwrap_or_else(|| signature_of(&target)),
    };
    let pac = cfg.pac_params()?;
    if matches!(cfg.learner, AlgorithmId::Pac(_)) && pac.is_none() {
        return Err(HarnessError::Config(format!("{} needs --epsilon and --delta", cfg.learner)));
    }
    if !cfg.learner.supports(cfg.framework) {
        return Err(HarnessError::Config(format!("{} does not run on {}", cfg.learner, cfg.framework)));
    }
    let teacher_cfg = TeacherConfig::new(target.clone(), cfg.framework)
        .with_strategy(cfg.eq_strategy)
        .with_seed(cfg.seed)
        .with_universe(sig.clone())
        .with_distribution(DistributionSpec::Uniform { depth_cap: cfg.depth_cap, size_cap: cfg.sample_size_cap });
    let teacher = TruthfulTeacher::new(teacher_cfg).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut learner_cfg = LearnerConfig::new(cfg.learner.clone(), sig).with_caps(Caps {
        max_queries: cfg.max_queries,
        max_size: cfg.max_size,
        depth_cap: cfg.depth_cap,
    });
    learner_cfg.seed = cfg.seed;
    learner_cfg.pac = pac;

    let log = TranscriptLog::shared(Some(target.size()));
    let mut recorder = Recorder::new(teacher, log.clone());
    let start = Instant::now();
    let result = learn(&learner_cfg, &mut recorder);
    let wall_time = start.elapsed();
    let outcome = classify(&result)?;
    let hypothesis = result.ok();
    let success = hypothesis.as_ref().map(|h| equivalent(h, &target)).unwrap_or(false);
    let mut log = log.lock().expect("log lock");
    log.halt(outcome, hypothesis.as_ref(), Some(success));
    let config = serde_json::to_value(cfg).expect("configs serialize");
    let transcript = log.transcript(config);
    drop(log);
    let out = ExperimentOutcome { target, hypothesis, transcript, wall_time };
    if let Some(dir) = &cfg.out_dir {
        write_reports(dir, cfg, &out)?;
    }
    Ok(out)
}

/// `transcript.json`, `metrics.csv` and `hypothesis.txt` under `dir`.
pub fn write_reports(dir: &Path, cfg: &ExperimentConfig, out: &ExperimentOutcome) -> Result<(), HarnessError> {
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |e| HarnessError::Io(p, e)
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join("transcript.json");
    fs::write(&path, out.transcript.to_json()).map_err(io(&path))?;
    let path = dir.join("hypothesis.txt");
    fs::write(&path, out.hypothesis.as_ref().map(TBox::to_string).unwrap_or_default()).map_err(io(&path))?;
    let m = out.metrics();
    let row = MetricsRow {
        framework: cfg.framework.as_str(),
        learner: cfg.learner.to_string(),
        seed: cfg.seed,
        mq_count: m.mq_count,
        eq_count: m.eq_count,
        sq_count: m.sq_count,
        max_counterexample: m.max_counterexample_so_far.last().copied().unwrap_or(0),
        success: out.success(),
        hypothesis_size: m.hypothesis_size,
        wall_time_ms: out.wall_time.as_secs_f64() * 1000.0,
    };
    let path = dir.join("metrics.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| HarnessError::Io(path.clone(), e.into()))?;
    w.serialize(row)
        .and_then(|_| w.flush().map_err(Into::into))
        .map_err(|e| HarnessError::Io(path.clone(), e.into()))?;
    Ok(())
}
