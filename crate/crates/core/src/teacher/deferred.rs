//! A teacher whose answers come from outside the process, typically a
//! person behind the session API. Answers are trusted as given.

use std::sync::{Arc, Condvar, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{EqAnswer, QueryKind, Teacher, TeacherError};
use crate::framework::{Example, FrameworkError, LearningFramework};
use crate::parse::ParseError;
use crate::syntax::TBox;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingQuery {
    pub kind: QueryKind,
    /// The example (MQ) or hypothesis (EQ) in the text format.
    pub payload: String,
    /// 1-based index of the query within the session.
    pub step: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HumanAnswer {
    Yes,
    No,
    /// Example text, parsed and checked against the framework on arrival.
    Counterexample(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnswerError {
    #[error("no query is pending")]
    NoPending,
    #[error("a {kind} query cannot be answered with {given}")]
    Mismatch { kind: QueryKind, given: &'static str },
    #[error("counterexample does not parse: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("session closed")]
    Closed,
}

#[derive(Default)]
struct State {
    pending: Option<PendingQuery>,
    reply: Option<Reply>,
    closed: bool,
    steps: u64,
}

enum Reply {
    Member(bool),
    Equivalence(EqAnswer),
}

/// Shared handle between a [`DeferredTeacher`] and whoever answers for it.
#[derive(Clone)]
pub struct DeferredLink {
    shared: Arc<(Mutex<State>, Condvar)>,
    framework: LearningFramework,
}

impl DeferredLink {
    pub fn new(framework: LearningFramework) -> Self {
        DeferredLink { shared: Arc::new((Mutex::new(State::default()), Condvar::new())), framework }
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.shared.0.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn pending(&self) -> Option<PendingQuery> {
        self.lock().pending.clone()
    }

    /// Delivers an answer to the pending query. On error nothing changes and
    /// the query stays pending.
    pub fn answer(&self, a: HumanAnswer) -> Result<(), AnswerError> {
        let mut st = self.lock();
        if st.closed {
            return Err(AnswerError::Closed);
        }
        let kind = st.pending.as_ref().ok_or(AnswerError::NoPending)?.kind;
        let reply = match (kind, a) {
            (QueryKind::Mq, HumanAnswer::Yes) => Reply::Member(true),
            (QueryKind::Mq, HumanAnswer::No) => Reply::Member(false),
            (QueryKind::Eq, HumanAnswer::Yes) => Reply::Equivalence(EqAnswer::Yes),
            (QueryKind::Eq, HumanAnswer::Counterexample(text)) => {
                let e = Example::parse(&text)?;
                self.framework.validate_example(&e)?;
                Reply::Equivalence(EqAnswer::Counterexample(e))
            }
            (kind, HumanAnswer::No) => return Err(AnswerError::Mismatch { kind, given: "no" }),
            (kind, HumanAnswer::Counterexample(_)) => {
                return Err(AnswerError::Mismatch { kind, given: "a counterexample" })
            }
            (kind, HumanAnswer::Yes) => return Err(AnswerError::Mismatch { kind, given: "yes" }),
        };
        st.pending = None;
        st.reply = Some(reply);
        self.shared.1.notify_all();
        Ok(())
    }

    /// Wakes a waiting learner with [`TeacherError::SessionClosed`].
    pub fn close(&self) {
        let mut st = self.lock();
        st.closed = true;
        st.pending = None;
        self.shared.1.notify_all();
    }

    pub fn is_closed(&self) -> bool {
        self.lock().closed
    }

    fn ask(&self, kind: QueryKind, payload: String, timeout: Option<Duration>) -> Result<Reply, TeacherError> {
        let mut st = self.lock();
        if st.closed {
            return Err(TeacherError::SessionClosed);
        }
        st.steps += 1;
        st.pending = Some(PendingQuery { kind, payload, step: st.steps });
        st.reply = None;
        let deadline = timeout.map(|t| Instant::now() + t);
        loop {
            if st.closed {
                return Err(TeacherError::SessionClosed);
            }
            if let Some(r) = st.reply.take() {
                return Ok(r);
            }
            st = match deadline {
                None => self.shared.1.wait(st).unwrap_or_else(|e| e.into_inner()),
                Some(d) => {
                    let now = Instant::now();
                    if now >= d {
                        st.pending = None;
                        return Err(TeacherError::Timeout(timeout.unwrap()));
                    }
                    self.shared.1.wait_timeout(st, d - now).unwrap_or_else(|e| e.into_inner()).0
                }
            };
        }
    }
}

/// Blocks on every query until the linked party answers.
pub struct DeferredTeacher {
    link: DeferredLink,
    timeout: Option<Duration>,
}

impl DeferredTeacher {
    pub fn new(link: DeferredLink, timeout: Option<Duration>) -> Self {
        DeferredTeacher { link, timeout }
    }

    pub fn link(&self) -> &DeferredLink {
        &self.link
    }
}

impl Teacher for DeferredTeacher {
    fn framework(&self) -> LearningFramework {
        self.link.framework
    }

    fn membership(&mut self, e: &Example) -> Result<bool, TeacherError> {
        self.link.framework.validate_example(e)?;
        match self.link.ask(QueryKind::Mq, e.to_string(), self.timeout)? {
            Reply::Member(b) => Ok(b),
            Reply::Equivalence(_) => unreachable!("answer() checks the query kind"),
        }
    }

    fn equivalence(&mut self, h: &TBox) -> Result<EqAnswer, TeacherError> {
        self.link.framework.validate_hypothesis(h)?;
        match self.link.ask(QueryKind::Eq, h.to_string(), self.timeout)? {
            Reply::Equivalence(a) => Ok(a),
            Reply::Member(_) => unreachable!("answer() checks the query kind"),
        }
    }
}
