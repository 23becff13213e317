//! Where new domain elements come from.
//!
//! A source answers one request at a time with a fresh element or with
//! `Exhausted`, which closes the I-Set. The engine keeps every answer so that
//! after search backtracks past an acquisition the same answers are replayed
//! instead of asking the source again.

use std::collections::{BTreeSet, VecDeque};
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use crate::element::ElementValue;
use crate::engine::Engine;
use crate::error::{Failure, UsageError};
use crate::fd::VarId;
use crate::iset::IsetId;
use crate::trace::TraceEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcquisitionResult {
    Element(ElementValue),
    Exhausted,
}

/// Advisory information handed to a source with each request.
#[derive(Debug, Clone)]
pub struct AcquisitionContext {
    pub iset_name: String,
    pub requesting_var: Option<VarId>,
    pub requesting_var_name: Option<String>,
    pub requesting_constraint: Option<String>,
    pub known_snapshot: BTreeSet<ElementValue>,
}

/// Supplies elements for one I-Set.
///
/// A source must never return the same element twice for its set, and once it
/// has answered `Exhausted` it must keep doing so. Sources are called on the
/// engine's thread and must not call back into the engine.
pub trait AcquisitionSource: Send {
    fn next(&mut self, iset: IsetId, ctx: &AcquisitionContext) -> AcquisitionResult;
}

/// Hands out a fixed list of elements, then reports exhaustion.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    remaining: VecDeque<ElementValue>,
}

impl ScriptedSource {
    pub fn new<I: IntoIterator<Item = ElementValue>>(elements: I) -> Self {
        ScriptedSource {
            remaining: elements.into_iter().collect(),
        }
    }
}

impl AcquisitionSource for ScriptedSource {
    fn next(&mut self, _iset: IsetId, _ctx: &AcquisitionContext) -> AcquisitionResult {
        match self.remaining.pop_front() {
            Some(e) => AcquisitionResult::Element(e),
            None => AcquisitionResult::Exhausted,
        }
    }
}

/// Yields `lo, lo+1, ..., hi` in order.
#[derive(Debug, Clone)]
pub struct RangeSource {
    range: RangeInclusive<i64>,
}

impl RangeSource {
    pub fn new(lo: i64, hi: i64) -> Self {
        RangeSource { range: lo..=hi }
    }
}

impl AcquisitionSource for RangeSource {
    fn next(&mut self, _iset: IsetId, _ctx: &AcquisitionContext) -> AcquisitionResult {
        match self.range.next() {
            Some(v) => AcquisitionResult::Element(ElementValue::Int(v)),
            None => AcquisitionResult::Exhausted,
        }
    }
}

/// Input and output streams shared by every interactive source of an engine.
#[derive(Clone)]
pub struct PromptIo {
    input: Arc<Mutex<Box<dyn BufRead + Send>>>,
    output: Arc<Mutex<Box<dyn Write + Send>>>,
}

impl PromptIo {
    pub fn new(input: impl BufRead + Send + 'static, output: impl Write + Send + 'static) -> Self {
        PromptIo {
            input: Arc::new(Mutex::new(Box::new(input))),
            output: Arc::new(Mutex::new(Box::new(output))),
        }
    }
}

/// Asks a person for each element.
///
/// The prompt is `acquire <iset> for <var>? `. An integer or bare atom is an
/// element, the line `none` (or end of input) means the set is exhausted, and
/// anything else is asked again.
pub struct InteractiveSource {
    io: PromptIo,
    exhausted: bool,
}

impl InteractiveSource {
    pub fn new(io: PromptIo) -> Self {
        InteractiveSource {
            io,
            exhausted: false,
        }
    }
}

impl AcquisitionSource for InteractiveSource {
    fn next(&mut self, _iset: IsetId, ctx: &AcquisitionContext) -> AcquisitionResult {
        if self.exhausted {
            return AcquisitionResult::Exhausted;
        }
        let mut output = self.io.output.lock().unwrap_or_else(|e| e.into_inner());
        let mut input = self.io.input.lock().unwrap_or_else(|e| e.into_inner());
        let var = ctx.requesting_var_name.as_deref().unwrap_or("-");
        loop {
            // A broken prompt stream does not stop us from reading the answer.
            let _ = write!(output, "acquire {} for {var}? ", ctx.iset_name);
            let _ = output.flush();
            let mut line = String::new();
            match input.read_line(&mut line) {
                Ok(0) | Err(_) => break,
                Ok(_) => {}
            }
            let answer = line.trim();
            if answer == "none" {
                break;
            }
            match answer.parse::<ElementValue>() {
                Ok(e) if !ctx.known_snapshot.contains(&e) => return AcquisitionResult::Element(e),
                Ok(e) => {
                    let _ = writeln!(output, "{e} is already known");
                }
                Err(err) => {
                    let _ = writeln!(output, "{err}");
                }
            }
        }
        self.exhausted = true;
        AcquisitionResult::Exhausted
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcquireOutcome {
    Inserted(ElementValue),
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoggedOutcome {
    Inserted(ElementValue),
    Closed,
    Failed,
}

/// One acquisition request, as seen by the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcquireRecord {
    pub iset: IsetId,
    pub requesting_var: Option<VarId>,
    pub outcome: LoggedOutcome,
    /// Answered from the delivery history rather than by the source.
    pub replayed: bool,
}

#[derive(Default)]
struct Slot {
    source: Option<Box<dyn AcquisitionSource>>,
    /// Every answer the source gave, `None` standing for exhaustion.
    delivered: Vec<Option<ElementValue>>,
}

#[derive(Default)]
pub(crate) struct SourceRegistry {
    slots: Vec<Slot>,
    log: Vec<AcquireRecord>,
}

impl SourceRegistry {
    pub(crate) fn grow(&mut self, n: usize) {
        while self.slots.len() < n {
            self.slots.push(Slot::default());
        }
    }

    pub(crate) fn log(&self) -> &[AcquireRecord] {
        &self.log
    }
}

impl Engine {
    /// Binds `source` to `iset`. A set without a source behaves as if its
    /// source were already exhausted.
    pub fn register_source(
        &mut self,
        iset: IsetId,
        source: impl AcquisitionSource + 'static,
    ) -> Result<(), UsageError> {
        let slot = &mut self.sources.slots[iset.0];
        if slot.source.is_some() {
            return Err(UsageError::SourceAlreadyBound(iset));
        }
        slot.source = Some(Box::new(source));
        Ok(())
    }

    pub fn has_source(&self, iset: IsetId) -> bool {
        self.sources.slots[iset.0].source.is_some()
    }

    /// Requests one element for `iset` and propagates it, or closes the set
    /// when the source is exhausted.
    pub fn acquire(
        &mut self,
        iset: IsetId,
        requesting_var: Option<VarId>,
        requesting_constraint: Option<&str>,
    ) -> Result<AcquireOutcome, Failure> {
        self.check_alive()?;
        if self.is_closed(iset) {
            return Ok(AcquireOutcome::Closed);
        }
        let (answer, replayed) = self.next_answer(iset, requesting_var, requesting_constraint);
        self.log(TraceEvent::Acquire(iset, answer.clone()));
        let record = |outcome| AcquireRecord {
            iset,
            requesting_var,
            outcome,
            replayed,
        };
        match answer {
            Some(e) => {
                if self.state.isets.contains(iset, &e) {
                    self.sources.log.push(record(LoggedOutcome::Failed));
                    let failure = Failure::DuplicateAcquisition { iset, element: e };
                    return self.guard(Err(failure));
                }
                let inserted = self.ensure_member(iset, e.clone());
                let outcome = match inserted {
                    Ok(_) => LoggedOutcome::Inserted(e.clone()),
                    Err(_) => LoggedOutcome::Failed,
                };
                self.sources.log.push(record(outcome));
                inserted.map(|_| AcquireOutcome::Inserted(e))
            }
            None => {
                let closed = self.close(iset);
                let outcome = match closed {
                    Ok(_) => LoggedOutcome::Closed,
                    Err(_) => LoggedOutcome::Failed,
                };
                self.sources.log.push(record(outcome));
                closed.map(|_| AcquireOutcome::Closed)
            }
        }
    }

    /// Next answer for `iset`: replayed from history when search has rolled
    /// back past it, otherwise fresh from the source.
    fn next_answer(
        &mut self,
        iset: IsetId,
        requesting_var: Option<VarId>,
        requesting_constraint: Option<&str>,
    ) -> (Option<ElementValue>, bool) {
        loop {
            let cursor = self.state.acquired[iset.0];
            let slot = &self.sources.slots[iset.0];
            if cursor < slot.delivered.len() {
                self.state.acquired[iset.0] += 1;
                match &slot.delivered[cursor] {
                    // Propagation in this branch may already have produced it.
                    Some(e) if self.state.isets.contains(iset, e) => continue,
                    answer => return (answer.clone(), true),
                }
            }
            let ctx = AcquisitionContext {
                iset_name: self.iset_name(iset).to_string(),
                requesting_var,
                requesting_var_name: requesting_var.map(|v| self.var_name(v).to_string()),
                requesting_constraint: requesting_constraint.map(str::to_string),
                known_snapshot: self.known(iset),
            };
            let slot = &mut self.sources.slots[iset.0];
            let answer = match slot.source.as_mut() {
                Some(source) => match source.next(iset, &ctx) {
                    AcquisitionResult::Element(e) => Some(e),
                    AcquisitionResult::Exhausted => None,
                },
                None => None,
            };
            slot.delivered.push(answer.clone());
            self.state.acquired[iset.0] += 1;
            return (answer, false);
        }
    }
}
