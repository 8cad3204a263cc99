//! Event log of one learning run and the counters derived from it.

use std::sync::{Arc, Mutex};

use elhlab_core::framework::{Example, LabeledExample, LearningFramework};
use elhlab_core::teacher::{EqAnswer, QueryKind, Teacher, TeacherError};
use elhlab_core::TBox;
use serde::{Deserialize, Serialize};

/// Queries may reach `ADVISORY_FACTOR * (s + 1)^2` before a warning, with
/// `s` the target size (or the hypothesis size when the target is unknown)
/// plus the largest counterexample so far.
pub const ADVISORY_FACTOR: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "snake_case")]
pub enum EventBody {
    QueryPosed {
        kind: String,
        text: String,
    },
    AnswerGiven {
        answer: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        example: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<bool>,
    },
    HypothesisSnapshot {
        tbox: String,
    },
    Halted {
        outcome: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hypothesis: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub step: usize,
    #[serde(flatten)]
    pub body: EventBody,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub mq_count: usize,
    pub eq_count: usize,
    pub sq_count: usize,
    /// Running maximum of counterexample sizes, one entry per answer.
    pub max_counterexample_so_far: Vec<usize>,
    /// Whether the hypothesis is equivalent to the target; `None` when no
    /// target is known or the run did not halt with a hypothesis.
    pub success: Option<bool>,
    pub hypothesis_size: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: serde_json::Value,
    pub events: Vec<Event>,
    pub metrics: Metrics,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcripts serialize");
        s.push('\n');
        s
    }

    /// The hypothesis of the `halted` event, if any.
    pub fn final_hypothesis(&self) -> Option<&str> {
        self.events.iter().rev().find_map(|e| match &e.body {
            EventBody::Halted { hypothesis, .. } => hypothesis.as_deref(),
            _ => None,
        })
    }

    pub fn is_halted(&self) -> bool {
        self.events.iter().any(|e| matches!(e.body, EventBody::Halted { .. }))
    }
}

/// Mutable log a run appends to.
#[derive(Debug, Default)]
pub struct TranscriptLog {
    events: Vec<Event>,
    metrics: Metrics,
    max_cex: usize,
    target_size: Option<usize>,
    last_hypothesis_size: usize,
    warned: bool,
}

pub type SharedLog = Arc<Mutex<TranscriptLog>>;

impl TranscriptLog {
    pub fn new(target_size: Option<usize>) -> Self {
        TranscriptLog { target_size, ..Default::default() }
    }

    pub fn shared(target_size: Option<usize>) -> SharedLog {
        Arc::new(Mutex::new(Self::new(target_size)))
    }

    fn push(&mut self, body: EventBody) -> usize {
        let step = self.events.len() + 1;
        self.events.push(Event { step, body });
        step
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    /// Step of the latest `query_posed` event.
    pub fn last_query_step(&self) -> Option<usize> {
        self.events.iter().rev().find(|e| matches!(e.body, EventBody::QueryPosed { .. })).map(|e| e.step)
    }

    pub fn pose(&mut self, kind: QueryKind, text: String) -> usize {
        match kind {
            QueryKind::Mq => self.metrics.mq_count += 1,
            QueryKind::Eq => self.metrics.eq_count += 1,
            QueryKind::Sq => self.metrics.sq_count += 1,
        }
        let step = self.push(EventBody::QueryPosed { kind: kind.as_str().into(), text });
        self.monitor();
        step
    }

    fn monitor(&mut self) {
        let total = self.metrics.mq_count + self.metrics.eq_count + self.metrics.sq_count;
        let s = self.target_size.unwrap_or(self.last_hypothesis_size) + self.max_cex;
        let bound = ADVISORY_FACTOR * (s + 1) * (s + 1);
        if !self.warned && total > bound {
            self.warned = true;
            self.metrics.warnings.push(format!("query {total} exceeds the advisory budget {bound}"));
        }
    }

    fn answered(&mut self, answer: &str, example: Option<&Example>, label: Option<bool>, counterexample: bool) {
        if counterexample {
            if let Some(e) = example {
                self.max_cex = self.max_cex.max(e.size());
            }
        }
        self.metrics.max_counterexample_so_far.push(self.max_cex);
        self.push(EventBody::AnswerGiven { answer: answer.into(), example: example.map(|e| e.to_string()), label });
    }

    pub fn answer_bool(&mut self, yes: bool) {
        self.answered(if yes { "yes" } else { "no" }, None, None, false);
    }

    pub fn answer_eq(&mut self, a: &EqAnswer) {
        match a {
            EqAnswer::Yes => self.answered("yes", None, None, false),
            EqAnswer::Counterexample(e) => self.answered("counterexample", Some(e), None, true),
        }
    }

    pub fn answer_sample(&mut self, s: &LabeledExample) {
        self.answered("sample", Some(&s.example), Some(s.label), false);
    }

    pub fn snapshot(&mut self, h: &TBox) {
        self.last_hypothesis_size = h.size();
        self.push(EventBody::HypothesisSnapshot { tbox: h.to_string() });
    }

    /// Records the end of the run. `success` is the verified outcome, if any.
    pub fn halt(&mut self, outcome: &str, hypothesis: Option<&TBox>, success: Option<bool>) {
        if let Some(h) = hypothesis {
            self.snapshot(h);
        }
        self.metrics.hypothesis_size = hypothesis.map(TBox::size);
        self.metrics.success = success;
        self.push(EventBody::Halted { outcome: outcome.into(), hypothesis: hypothesis.map(|h| h.to_string()) });
    }

    pub fn is_halted(&self) -> bool {
        self.events.iter().any(|e| matches!(e.body, EventBody::Halted { .. }))
    }

    pub fn transcript(&self, config: serde_json::Value) -> Transcript {
        Transcript { config, events: self.events.clone(), metrics: self.metrics.clone() }
    }
}

/// Teacher wrapper that logs every query and answer.
pub struct Recorder<T> {
    inner: T,
    log: SharedLog,
}

impl<T: Teacher> Recorder<T> {
    pub fn new(inner: T, log: SharedLog) -> Self {
        Recorder { inner, log }
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    fn log(&self) -> std::sync::MutexGuard<'_, TranscriptLog> {
        self.log.lock().expect("log lock")
    }
}

impl<T: Teacher> Teacher for Recorder<T> {
    fn framework(&self) -> LearningFramework {
        self.inner.framework()
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        self.log().pose(QueryKind::Mq, e.to_string());
        let yes = self.inner.membership(e)?;
        self.log().answer_bool(yes);
        Ok(yes)
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        {
            let mut log = self.log();
            log.snapshot(h);
            log.pose(QueryKind::Eq, h.to_string());
        }
        let a = self.inner.equivalence(h)?;
        self.log().answer_eq(&a);
        Ok(a)
    }

    fn sample(&mut self) -> Result<LabeledExample, TeacherError> {
        self.log().pose(QueryKind::Sq, String::new());
        let s = self.inner.sample()?;
        self.log().answer_sample(&s);
        Ok(s)
    }
}
