//! Partially known sets and the constraints among them.
//!
//! An I-Set has a known part, which only grows, and an open/closed flag, which
//! only goes from open to closed. Inserting an element or closing a set queues
//! an [`Event`]; [`IsetStore::fixpoint`] drains the queue FIFO and fires the
//! propagation rules of every constraint watching the affected set until no
//! event is left.
//!
//! Rules never infer a membership that the set-algebraic reading of a
//! constraint does not entail. When an open argument makes entailment
//! undecidable the rule waits; the decision is re-examined when the argument
//! closes, so the fixpoint does not depend on the order of insertions or of
//! constraint posting.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use indexmap::IndexSet;

use crate::element::ElementValue;
use crate::error::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsetId(pub(crate) usize);

impl IsetId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for IsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iset#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsetConstraintId(pub(crate) usize);

impl fmt::Display for IsetConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "isetc#{}", self.0)
    }
}

/// A constraint among I-Sets. `Difference(a, b, c)` reads `c = a \ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsetConstraint {
    Member(ElementValue, IsetId),
    Union(IsetId, IsetId, IsetId),
    Intersection(IsetId, IsetId, IsetId),
    Difference(IsetId, IsetId, IsetId),
    Inclusion(IsetId, IsetId),
}

impl IsetConstraint {
    /// The distinct sets this constraint mentions, in argument order.
    pub fn sets(&self) -> Vec<IsetId> {
        let all = match *self {
            IsetConstraint::Member(_, s) => vec![s],
            IsetConstraint::Union(a, b, c)
            | IsetConstraint::Intersection(a, b, c)
            | IsetConstraint::Difference(a, b, c) => vec![a, b, c],
            IsetConstraint::Inclusion(a, b) => vec![a, b],
        };
        let mut distinct = Vec::with_capacity(all.len());
        for s in all {
            if !distinct.contains(&s) {
                distinct.push(s);
            }
        }
        distinct
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    Inserted(IsetId, ElementValue),
    Closed(IsetId),
}

impl Event {
    pub fn iset(&self) -> IsetId {
        match self {
            Event::Inserted(s, _) | Event::Closed(s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsureOutcome {
    AlreadyPresent,
    Inserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloseOutcome {
    Closed,
    AlreadyClosed,
}

#[derive(Debug, Clone)]
struct IsetData {
    name: String,
    known: IndexSet<ElementValue>,
    open: bool,
    watchers: Vec<IsetConstraintId>,
}

/// Every I-Set of an engine together with the constraints posted on them.
///
/// Ids handed out by one store are only meaningful for that store; passing an
/// id from elsewhere panics.
#[derive(Debug, Clone, Default)]
pub struct IsetStore {
    sets: Vec<IsetData>,
    constraints: Vec<IsetConstraint>,
    queue: VecDeque<Event>,
    history: Vec<Event>,
}

impl IsetStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Creates a set whose known part is `initial` (duplicates dropped).
    ///
    /// One `Inserted` event is queued per distinct element and, for a set
    /// created closed, a final `Closed` event.
    pub fn new_iset<I>(&mut self, name: impl Into<String>, initial: I, open: bool) -> IsetId
    where
        I: IntoIterator<Item = ElementValue>,
    {
        let id = IsetId(self.sets.len());
        self.sets.push(IsetData {
            name: name.into(),
            known: IndexSet::new(),
            open: true,
            watchers: Vec::new(),
        });
        for e in initial {
            if self.sets[id.0].known.insert(e.clone()) {
                self.emit(Event::Inserted(id, e));
            }
        }
        if !open {
            self.close(id);
        }
        id
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = IsetId> {
        (0..self.sets.len()).map(IsetId)
    }

    pub fn name(&self, id: IsetId) -> &str {
        &self.sets[id.0].name
    }

    /// Snapshot of the known part.
    pub fn known(&self, id: IsetId) -> BTreeSet<ElementValue> {
        self.sets[id.0].known.iter().cloned().collect()
    }

    /// Known part in insertion order.
    pub fn known_ordered(&self, id: IsetId) -> impl Iterator<Item = &ElementValue> {
        self.sets[id.0].known.iter()
    }

    pub fn known_len(&self, id: IsetId) -> usize {
        self.sets[id.0].known.len()
    }

    pub fn contains(&self, id: IsetId, element: &ElementValue) -> bool {
        self.sets[id.0].known.contains(element)
    }

    pub fn is_closed(&self, id: IsetId) -> bool {
        !self.sets[id.0].open
    }

    pub fn constraints(&self) -> &[IsetConstraint] {
        &self.constraints
    }

    /// Every event emitted so far, in emission order.
    pub fn history(&self) -> &[Event] {
        &self.history
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    pub fn ensure_member(
        &mut self,
        id: IsetId,
        element: ElementValue,
    ) -> Result<EnsureOutcome, Failure> {
        let set = &mut self.sets[id.0];
        if set.known.contains(&element) {
            return Ok(EnsureOutcome::AlreadyPresent);
        }
        if !set.open {
            return Err(Failure::ClosedSet { iset: id, element });
        }
        set.known.insert(element.clone());
        self.emit(Event::Inserted(id, element));
        Ok(EnsureOutcome::Inserted)
    }

    pub fn close(&mut self, id: IsetId) -> CloseOutcome {
        let set = &mut self.sets[id.0];
        if !set.open {
            return CloseOutcome::AlreadyClosed;
        }
        set.open = false;
        self.emit(Event::Closed(id));
        CloseOutcome::Closed
    }

    /// Records `constraint` and replays the current state of its arguments
    /// through its rules, as if their past events had just fired.
    ///
    /// Consequences are queued; run [`fixpoint`](Self::fixpoint) to draw them.
    pub fn post(&mut self, constraint: IsetConstraint) -> Result<IsetConstraintId, Failure> {
        let id = IsetConstraintId(self.constraints.len());
        let sets = constraint.sets();
        for &s in &sets {
            assert!(s.0 < self.sets.len(), "unknown I-Set {s}");
        }
        self.constraints.push(constraint.clone());
        for &s in &sets {
            self.sets[s.0].watchers.push(id);
        }

        let result = self.replay(id, &constraint, &sets);
        if result.is_err() {
            self.queue.clear();
        }
        result.map(|()| id)
    }

    fn replay(
        &mut self,
        id: IsetConstraintId,
        constraint: &IsetConstraint,
        sets: &[IsetId],
    ) -> Result<(), Failure> {
        if let IsetConstraint::Member(e, s) = constraint {
            self.ensure_member(*s, e.clone())?;
            return Ok(());
        }
        for &s in sets {
            let known: Vec<ElementValue> = self.sets[s.0].known.iter().cloned().collect();
            for e in known {
                self.fire(id, &Event::Inserted(s, e))?;
            }
        }
        for &s in sets {
            if self.is_closed(s) {
                self.fire(id, &Event::Closed(s))?;
            }
        }
        Ok(())
    }

    /// Fires every rule triggered by `event` and returns the events this
    /// queued.
    pub fn propagate(&mut self, event: &Event) -> Result<Vec<Event>, Failure> {
        let before = self.queue.len();
        let watchers = self.sets[event.iset().0].watchers.clone();
        for cid in watchers {
            self.fire(cid, event)?;
        }
        Ok(self.queue.iter().skip(before).cloned().collect())
    }

    /// Drains the event queue to quiescence and returns the `Inserted` events
    /// it consumed, in queue order.
    pub fn fixpoint(&mut self) -> Result<Vec<Event>, Failure> {
        let mut drained = Vec::new();
        while let Some(event) = self.queue.pop_front() {
            if matches!(event, Event::Inserted(..)) {
                drained.push(event.clone());
            }
            if let Err(failure) = self.propagate(&event) {
                self.queue.clear();
                return Err(failure);
            }
        }
        Ok(drained)
    }

    fn emit(&mut self, event: Event) {
        self.history.push(event.clone());
        self.queue.push_back(event);
    }

    fn ensure(&mut self, id: IsetId, element: &ElementValue) -> Result<(), Failure> {
        self.ensure_member(id, element.clone()).map(|_| ())
    }

    /// Elements of `from` that are not known in `without`.
    fn known_minus(&self, from: IsetId, without: IsetId) -> Vec<ElementValue> {
        self.sets[from.0]
            .known
            .iter()
            .filter(|e| !self.contains(without, e))
            .cloned()
            .collect()
    }

    fn fire(&mut self, cid: IsetConstraintId, event: &Event) -> Result<(), Failure> {
        let constraint = self.constraints[cid.0].clone();
        match (constraint, event) {
            (IsetConstraint::Member(..), _) => Ok(()),
            (IsetConstraint::Inclusion(a, b), Event::Inserted(s, e)) => {
                if a == *s {
                    self.ensure(b, e)?;
                    self.inclusion_closure(a, b);
                }
                Ok(())
            }
            (IsetConstraint::Inclusion(a, b), Event::Closed(s)) => {
                if b == *s {
                    for e in self.known_minus(a, b) {
                        self.ensure(b, &e)?;
                    }
                    self.inclusion_closure(a, b);
                }
                Ok(())
            }
            (IsetConstraint::Intersection(a, b, c), Event::Inserted(s, e)) => {
                if c == *s {
                    self.ensure(a, e)?;
                    self.ensure(b, e)?;
                }
                if a == *s && self.contains(b, e) {
                    self.ensure(c, e)?;
                }
                if b == *s && self.contains(a, e) {
                    self.ensure(c, e)?;
                }
                Ok(())
            }
            (IsetConstraint::Intersection(a, b, c), Event::Closed(s)) => {
                if (a == *s || b == *s) && self.is_closed(a) && self.is_closed(b) {
                    let result: Vec<ElementValue> = self.sets[c.0].known.iter().cloned().collect();
                    for e in &result {
                        self.ensure(a, e)?;
                        self.ensure(b, e)?;
                    }
                    let meet: Vec<ElementValue> = self.sets[a.0]
                        .known
                        .iter()
                        .filter(|e| self.contains(b, e))
                        .cloned()
                        .collect();
                    for e in &meet {
                        self.ensure(c, e)?;
                    }
                    self.close(c);
                }
                Ok(())
            }
            (IsetConstraint::Union(a, b, c), Event::Inserted(s, e)) => {
                if a == *s || b == *s {
                    self.ensure(c, e)?;
                }
                if c == *s {
                    if self.is_closed(a) && !self.contains(a, e) {
                        self.ensure(b, e)?;
                    }
                    if self.is_closed(b) && !self.contains(b, e) {
                        self.ensure(a, e)?;
                    }
                }
                Ok(())
            }
            (IsetConstraint::Union(a, b, c), Event::Closed(s)) => {
                // Elements of c waiting for a side to close are settled here.
                if a == *s {
                    for e in self.known_minus(c, a) {
                        self.ensure(b, &e)?;
                    }
                }
                if b == *s {
                    for e in self.known_minus(c, b) {
                        self.ensure(a, &e)?;
                    }
                }
                if (a == *s || b == *s) && self.is_closed(a) && self.is_closed(b) {
                    let mut join: Vec<ElementValue> =
                        self.sets[a.0].known.iter().cloned().collect();
                    join.extend(self.known_minus(b, a));
                    for e in &join {
                        self.ensure(c, e)?;
                    }
                    self.close(c);
                }
                Ok(())
            }
            (IsetConstraint::Difference(a, b, c), Event::Inserted(s, e)) => {
                if c == *s {
                    self.ensure(a, e)?;
                    if self.contains(b, e) {
                        return Err(Failure::DifferenceConflict {
                            constraint: cid,
                            element: e.clone(),
                        });
                    }
                }
                if b == *s && self.contains(c, e) {
                    return Err(Failure::DifferenceConflict {
                        constraint: cid,
                        element: e.clone(),
                    });
                }
                if a == *s && self.is_closed(b) && !self.contains(b, e) {
                    self.ensure(c, e)?;
                }
                Ok(())
            }
            (IsetConstraint::Difference(a, b, c), Event::Closed(s)) => {
                if b == *s {
                    for e in self.known_minus(a, b) {
                        self.ensure(c, &e)?;
                    }
                }
                if (a == *s || b == *s) && self.is_closed(a) && self.is_closed(b) {
                    for e in self.known_minus(a, b) {
                        self.ensure(c, &e)?;
                    }
                    self.close(c);
                }
                Ok(())
            }
        }
    }

    /// `a ⊆ b` with `b` closed and the same known elements: `a` cannot grow.
    fn inclusion_closure(&mut self, a: IsetId, b: IsetId) {
        if !self.is_closed(b) || self.is_closed(a) {
            return;
        }
        let same = self.known_len(a) == self.known_len(b)
            && self.sets[a.0].known.iter().all(|e| self.contains(b, e));
        if same {
            self.close(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ints;

    fn set(v: &[i64]) -> BTreeSet<ElementValue> {
        ints(v.iter().copied()).into_iter().collect()
    }

    fn e(v: i64) -> ElementValue {
        ElementValue::Int(v)
    }

    /// DX = {2,4|_}, DY = {3,4|_}, DZ = {4|_} with intersection(DX, DY, DZ).
    fn intersection_example() -> (IsetStore, IsetId, IsetId, IsetId) {
        let mut store = IsetStore::new();
        let dx = store.new_iset("dx", ints([2, 4]), true);
        let dy = store.new_iset("dy", ints([3, 4]), true);
        let dz = store.new_iset("dz", ints([4]), true);
        store.post(IsetConstraint::Intersection(dx, dy, dz)).unwrap();
        store.fixpoint().unwrap();
        (store, dx, dy, dz)
    }

    #[test]
    fn new_iset_dedups_and_queues_events() {
        let mut store = IsetStore::new();
        let empty = store.new_iset("e", [], true);
        assert!(store.known(empty).is_empty());
        assert!(!store.is_closed(empty));

        let open = store.new_iset("o", ints([1, 2, 3, 4]), true);
        assert_eq!(store.known(open), set(&[1, 2, 3, 4]));
        assert!(!store.is_closed(open));

        let closed = store.new_iset("c", ints([1, 2, 2, 3, 4]), false);
        assert_eq!(store.known(closed), set(&[1, 2, 3, 4]));
        assert!(store.is_closed(closed));

        let closed_events = store
            .history()
            .iter()
            .filter(|ev| ev.iset() == closed)
            .count();
        assert_eq!(closed_events, 5, "four insertions plus one closure");
        assert_eq!(store.history().last(), Some(&Event::Closed(closed)));
    }

    #[test]
    fn ensure_member_outcomes() {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", ints([4]), true);
        assert_eq!(store.ensure_member(s, e(5)), Ok(EnsureOutcome::Inserted));
        assert_eq!(store.known(s), set(&[4, 5]));
        assert_eq!(store.ensure_member(s, e(4)), Ok(EnsureOutcome::AlreadyPresent));

        let c = store.new_iset("c", ints([2]), false);
        assert_eq!(
            store.ensure_member(c, e(7)),
            Err(Failure::ClosedSet { iset: c, element: e(7) })
        );
        assert_eq!(store.ensure_member(c, e(2)), Ok(EnsureOutcome::AlreadyPresent));
    }

    #[test]
    fn close_is_idempotent() {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", ints([1, 2]), true);
        let before = store.history().len();
        assert_eq!(store.close(s), CloseOutcome::Closed);
        assert_eq!(store.close(s), CloseOutcome::AlreadyClosed);
        assert_eq!(store.history().len(), before + 1);
        assert!(store.is_closed(s));
        assert_eq!(store.known(s), set(&[1, 2]));
        assert!(store.ensure_member(s, e(3)).is_err());
    }

    #[test]
    fn known_is_a_snapshot() {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", ints([2, 4]), true);
        let mut snap = store.known(s);
        snap.insert(e(99));
        assert_eq!(store.known(s), set(&[2, 4]));
        store.ensure_member(s, e(3)).unwrap();
        assert_eq!(store.known(s), set(&[2, 3, 4]));
    }

    #[test]
    fn posting_intersection_on_consistent_state_adds_nothing() {
        let (store, dx, dy, dz) = intersection_example();
        assert_eq!(store.known(dx), set(&[2, 4]));
        assert_eq!(store.known(dy), set(&[3, 4]));
        assert_eq!(store.known(dz), set(&[4]));
    }

    #[test]
    fn inclusion_into_closed_set_fails_on_post() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1]), true);
        let b = store.new_iset("b", [], false);
        assert!(store.post(IsetConstraint::Inclusion(a, b)).is_err());
    }

    #[test]
    fn member_inserts_on_post() {
        let mut store = IsetStore::new();
        let s = store.new_iset("s", [], true);
        store.post(IsetConstraint::Member(e(5), s)).unwrap();
        assert_eq!(store.known(s), set(&[5]));
    }

    #[test]
    fn intersection_right_to_left_adds_to_both_operands() {
        let (mut store, dx, dy, dz) = intersection_example();
        store.ensure_member(dz, e(5)).unwrap();
        let drained = store.fixpoint().unwrap();
        assert_eq!(
            drained,
            vec![
                Event::Inserted(dz, e(5)),
                Event::Inserted(dx, e(5)),
                Event::Inserted(dy, e(5)),
            ]
        );
        assert_eq!(store.known(dx), set(&[2, 4, 5]));
        assert_eq!(store.known(dy), set(&[3, 4, 5]));
    }

    #[test]
    fn intersection_insert_already_in_one_operand() {
        let (mut store, dx, dy, dz) = intersection_example();
        store.ensure_member(dz, e(3)).unwrap();
        let drained = store.fixpoint().unwrap();
        assert_eq!(drained, vec![Event::Inserted(dz, e(3)), Event::Inserted(dx, e(3))]);
        assert_eq!(store.known(dy), set(&[3, 4]));
    }

    #[test]
    fn intersection_left_to_right_needs_both_operands() {
        let (mut store, dx, _dy, dz) = intersection_example();
        store.ensure_member(dx, e(3)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(dz), set(&[3, 4]));

        store.ensure_member(dx, e(1)).unwrap();
        let drained = store.fixpoint().unwrap();
        assert_eq!(drained, vec![Event::Inserted(dx, e(1))]);
        assert_eq!(store.known(dz), set(&[3, 4]));
    }

    #[test]
    fn propagate_returns_queued_events() {
        let (mut store, dx, dy, dz) = intersection_example();
        store.ensure_member(dz, e(5)).unwrap();
        let queued = store.propagate(&Event::Inserted(dz, e(5))).unwrap();
        assert_eq!(
            queued,
            vec![Event::Inserted(dx, e(5)), Event::Inserted(dy, e(5))]
        );
    }

    #[test]
    fn fixpoint_on_empty_queue() {
        let mut store = IsetStore::new();
        assert_eq!(store.fixpoint(), Ok(vec![]));
    }

    #[test]
    fn fixpoint_fails_through_inclusion_into_closed_set() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", [], true);
        let b = store.new_iset("b", ints([2]), false);
        store.post(IsetConstraint::Inclusion(a, b)).unwrap();
        store.fixpoint().unwrap();
        store.ensure_member(a, e(1)).unwrap();
        assert_eq!(
            store.fixpoint(),
            Err(Failure::ClosedSet { iset: b, element: e(1) })
        );
        assert_eq!(store.pending(), 0);
    }

    #[test]
    fn inclusion_closure_rule() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1]), true);
        let b = store.new_iset("b", ints([1, 2]), true);
        store.post(IsetConstraint::Inclusion(a, b)).unwrap();
        store.close(b);
        store.fixpoint().unwrap();
        assert!(!store.is_closed(a));
        store.ensure_member(a, e(2)).unwrap();
        store.fixpoint().unwrap();
        assert!(store.is_closed(a), "known(a) = known(b) with b closed");
    }

    #[test]
    fn inclusion_closure_on_close_event() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1, 2]), true);
        let b = store.new_iset("b", [], true);
        store.post(IsetConstraint::Inclusion(a, b)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(b), set(&[1, 2]));
        store.close(b);
        store.fixpoint().unwrap();
        assert!(store.is_closed(a));
    }

    #[test]
    fn union_defers_until_a_side_closes() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1]), true);
        let b = store.new_iset("b", ints([2]), true);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Union(a, b, c)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(c), set(&[1, 2]));

        store.ensure_member(c, e(3)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(a), set(&[1]));
        assert_eq!(store.known(b), set(&[2]));

        store.close(a);
        store.fixpoint().unwrap();
        assert_eq!(store.known(b), set(&[2, 3]), "3 must come from b");
        assert!(!store.is_closed(c));

        store.close(b);
        store.fixpoint().unwrap();
        assert!(store.is_closed(c));
        assert_eq!(store.known(c), set(&[1, 2, 3]));
    }

    #[test]
    fn union_fails_when_both_sides_closed_without_element() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1]), false);
        let b = store.new_iset("b", ints([2]), false);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Union(a, b, c)).unwrap();
        store.fixpoint().unwrap();
        assert!(store.is_closed(c));
        assert!(store.ensure_member(c, e(3)).is_err());
    }

    #[test]
    fn difference_rules() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1, 2]), true);
        let b = store.new_iset("b", ints([2]), true);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Difference(a, b, c)).unwrap();
        store.fixpoint().unwrap();
        // b is open: 1 might still enter b.
        assert!(store.known(c).is_empty());

        store.ensure_member(c, e(5)).unwrap();
        store.fixpoint().unwrap();
        assert!(store.contains(a, &e(5)));

        store.ensure_member(b, e(5)).unwrap();
        assert!(matches!(
            store.fixpoint(),
            Err(Failure::DifferenceConflict { .. })
        ));
    }

    #[test]
    fn difference_settles_when_subtrahend_closes() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1, 2]), true);
        let b = store.new_iset("b", ints([2]), true);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Difference(a, b, c)).unwrap();
        store.close(b);
        store.fixpoint().unwrap();
        assert_eq!(store.known(c), set(&[1]));
        assert!(!store.is_closed(c));
        store.ensure_member(a, e(7)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(c), set(&[1, 7]));
        store.close(a);
        store.fixpoint().unwrap();
        assert!(store.is_closed(c));
        assert!(store.ensure_member(c, e(2)).is_err());
    }

    #[test]
    fn difference_element_in_result_rejects_later_subtrahend() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", [], true);
        let b = store.new_iset("b", [], true);
        let c = store.new_iset("c", ints([4]), true);
        store.post(IsetConstraint::Difference(a, b, c)).unwrap();
        store.fixpoint().unwrap();
        assert!(store.contains(a, &e(4)));
        store.ensure_member(b, e(4)).unwrap();
        assert!(store.fixpoint().is_err());
    }

    #[test]
    fn intersection_closes_result_when_operands_close() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1, 2, 3]), false);
        let b = store.new_iset("b", ints([2, 3, 4]), true);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Intersection(a, b, c)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(c), set(&[2, 3]));
        assert!(!store.is_closed(c));
        store.close(b);
        store.fixpoint().unwrap();
        assert!(store.is_closed(c));
    }

    #[test]
    fn repeated_arguments() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", ints([1]), true);
        let c = store.new_iset("c", [], true);
        store.post(IsetConstraint::Intersection(a, a, c)).unwrap();
        store.fixpoint().unwrap();
        assert_eq!(store.known(c), set(&[1]));

        let mut store = IsetStore::new();
        let a = store.new_iset("a", [], true);
        let c = store.new_iset("c", ints([3]), true);
        store.post(IsetConstraint::Difference(a, a, c)).unwrap_err();
    }

    #[test]
    fn events_are_unique() {
        let mut store = IsetStore::new();
        let a = store.new_iset("a", [], true);
        let b = store.new_iset("b", [], true);
        store.post(IsetConstraint::Inclusion(a, b)).unwrap();
        store.post(IsetConstraint::Inclusion(b, a)).unwrap();
        for v in [1, 2, 1, 2, 3] {
            store.ensure_member(a, e(v)).unwrap();
            store.ensure_member(b, e(v)).unwrap();
            store.fixpoint().unwrap();
        }
        let mut seen = std::collections::HashSet::new();
        for ev in store.history() {
            assert!(seen.insert(ev.clone()), "duplicate event {ev:?}");
        }
        assert_eq!(store.history().len(), 6);
    }
}
