use std::collections::BTreeSet;

use crate::acquisition::{AcquireRecord, SourceRegistry};
use crate::element::ElementValue;
use crate::error::Failure;
use crate::fd::{ConstraintId, FdConstraint, FdVariable, Pair, PairState, SupportGraph, Transition, VarId};
use crate::iset::{CloseOutcome, EnsureOutcome, Event, IsetConstraint, IsetConstraintId, IsetId, IsetStore};
use crate::trace::{TraceEvent, TraceLine};

/// Everything search may roll back.
#[derive(Debug, Clone, Default)]
pub(crate) struct State {
    pub(crate) isets: IsetStore,
    pub(crate) iset_history_seen: usize,
    pub(crate) vars: Vec<FdVariable>,
    pub(crate) constraints: Vec<FdConstraint>,
    /// Variables linked to each I-Set, in creation order.
    pub(crate) linked: Vec<Vec<VarId>>,
    pub(crate) graph: SupportGraph,
    pub(crate) transitions: Vec<Transition>,
    /// Per I-Set position in the source's delivery history.
    pub(crate) acquired: Vec<usize>,
    pub(crate) failed: Option<Failure>,
}

/// Saved engine state, see [`Engine::snapshot`].
#[derive(Debug, Clone)]
pub struct Snapshot(State);

/// An I-Set solver and an FD solver joined by definition domains.
///
/// The engine is single-threaded: it may be moved between threads but every
/// call must be serialized by the owner.
pub struct Engine {
    pub(crate) state: State,
    pub(crate) sources: SourceRegistry,
    trace: Vec<TraceEvent>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            state: State::default(),
            sources: SourceRegistry::default(),
            trace: Vec::new(),
        }
    }

    // --- I-Sets ---------------------------------------------------------

    pub fn new_iset<I>(&mut self, name: impl Into<String>, initial: I, open: bool) -> IsetId
    where
        I: IntoIterator<Item = ElementValue>,
    {
        let id = self.state.isets.new_iset(name, initial, open);
        self.state.linked.push(Vec::new());
        self.state.acquired.push(0);
        self.sources.grow(self.state.isets.len());
        // Nothing watches a fresh set yet, so this only drains its events.
        self.settle().expect("a fresh I-Set has no constraints");
        id
    }

    /// Inserts `element` into the known part and propagates.
    pub fn ensure_member(&mut self, iset: IsetId, element: ElementValue) -> Result<EnsureOutcome, Failure> {
        self.check_alive()?;
        let outcome = self.state.isets.ensure_member(iset, element);
        let outcome = self.guard(outcome)?;
        self.settle()?;
        Ok(outcome)
    }

    pub fn close(&mut self, iset: IsetId) -> Result<CloseOutcome, Failure> {
        self.check_alive()?;
        let outcome = self.state.isets.close(iset);
        self.settle()?;
        Ok(outcome)
    }

    pub fn post_iset_constraint(&mut self, constraint: IsetConstraint) -> Result<IsetConstraintId, Failure> {
        self.check_alive()?;
        let posted = self.state.isets.post(constraint);
        let id = self.guard(posted)?;
        self.settle()?;
        Ok(id)
    }

    pub fn isets(&self) -> &IsetStore {
        &self.state.isets
    }

    pub fn known(&self, iset: IsetId) -> BTreeSet<ElementValue> {
        self.state.isets.known(iset)
    }

    pub fn is_closed(&self, iset: IsetId) -> bool {
        self.state.isets.is_closed(iset)
    }

    pub fn iset_name(&self, iset: IsetId) -> &str {
        self.state.isets.name(iset)
    }

    // --- FD side accessors -----------------------------------------------

    pub fn variable(&self, var: VarId) -> &FdVariable {
        &self.state.vars[var.0]
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> {
        (0..self.state.vars.len()).map(VarId)
    }

    pub fn var_name(&self, var: VarId) -> &str {
        &self.state.vars[var.0].name
    }

    pub fn present(&self, var: VarId) -> &[ElementValue] {
        &self.state.vars[var.0].present
    }

    pub fn removed(&self, var: VarId) -> &[ElementValue] {
        &self.state.vars[var.0].removed
    }

    pub fn candidates(&self, var: VarId) -> Vec<ElementValue> {
        self.state.vars[var.0].candidates.iter().cloned().collect()
    }

    pub fn pair_state(&self, var: VarId, element: &ElementValue) -> PairState {
        self.state.vars[var.0].state(element)
    }

    pub fn constraint(&self, id: ConstraintId) -> &FdConstraint {
        &self.state.constraints[id.0]
    }

    pub fn constraints(&self) -> impl Iterator<Item = (ConstraintId, &FdConstraint)> {
        self.state
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| (ConstraintId(i), c))
    }

    pub fn graph(&self) -> &SupportGraph {
        &self.state.graph
    }

    /// State changes of (variable, element) pairs in the current branch.
    pub fn transitions(&self) -> &[Transition] {
        &self.state.transitions
    }

    /// The failure that made the store inconsistent, if any.
    pub fn failure(&self) -> Option<&Failure> {
        self.state.failed.as_ref()
    }

    // --- logs -------------------------------------------------------------

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn trace_lines(&self) -> Vec<TraceLine> {
        self.trace.iter().map(|ev| self.render(ev)).collect()
    }

    pub fn acquisitions(&self) -> &[AcquireRecord] {
        self.sources.log()
    }

    /// Source calls made for `iset`, replays after backtracking excluded.
    pub fn acquisition_count(&self, iset: IsetId) -> usize {
        self.sources
            .log()
            .iter()
            .filter(|r| r.iset == iset && !r.replayed)
            .count()
    }

    pub fn render(&self, event: &TraceEvent) -> TraceLine {
        let var = |p: &Pair| self.var_name(p.var).to_string();
        match event {
            TraceEvent::Insert(s, e) => TraceLine::Insert {
                iset: self.iset_name(*s).to_string(),
                element: e.clone(),
            },
            TraceEvent::Close(s) => TraceLine::Close {
                iset: self.iset_name(*s).to_string(),
            },
            TraceEvent::Candidate(p) => TraceLine::Candidate {
                var: var(p),
                element: p.element.clone(),
            },
            TraceEvent::Observe(p) => TraceLine::Observe {
                var: var(p),
                element: p.element.clone(),
            },
            TraceEvent::Present(p) => TraceLine::Present {
                var: var(p),
                element: p.element.clone(),
            },
            TraceEvent::Remove(p) => TraceLine::Remove {
                var: var(p),
                element: p.element.clone(),
            },
            TraceEvent::Rely(arc) => TraceLine::Rely {
                supported: (var(&arc.supported), arc.supported.element.clone()),
                supporter: (var(&arc.supporter), arc.supporter.element.clone()),
                constraint: self.constraint(arc.constraint).name.clone(),
            },
            TraceEvent::Acquire(s, e) => TraceLine::Acquire {
                iset: self.iset_name(*s).to_string(),
                element: e.clone(),
            },
        }
    }

    // --- snapshots --------------------------------------------------------

    /// Saves the solver state. Sources and logs are not part of it: elements
    /// acquired after the snapshot are replayed on demand after a restore.
    pub fn snapshot(&self) -> Snapshot {
        Snapshot(self.state.clone())
    }

    pub fn restore(&mut self, snapshot: Snapshot) {
        self.state = snapshot.0;
    }

    // --- internals --------------------------------------------------------

    pub(crate) fn log(&mut self, event: TraceEvent) {
        self.trace.push(event);
    }

    pub(crate) fn check_alive(&self) -> Result<(), Failure> {
        match &self.state.failed {
            Some(f) => Err(f.clone()),
            None => Ok(()),
        }
    }

    /// Records a failure so that the store stays inconsistent.
    pub(crate) fn guard<T>(&mut self, result: Result<T, Failure>) -> Result<T, Failure> {
        if let Err(f) = &result {
            self.sync_iset_trace();
            if self.state.failed.is_none() {
                self.state.failed = Some(f.clone());
            }
        }
        result
    }

    /// Copies newly emitted I-Set events into the trace.
    pub(crate) fn sync_iset_trace(&mut self) {
        let history = self.state.isets.history();
        let fresh: Vec<TraceEvent> = history[self.state.iset_history_seen..]
            .iter()
            .map(|ev| match ev {
                Event::Inserted(s, e) => TraceEvent::Insert(*s, e.clone()),
                Event::Closed(s) => TraceEvent::Close(*s),
            })
            .collect();
        self.state.iset_history_seen = history.len();
        self.trace.extend(fresh);
    }
}
