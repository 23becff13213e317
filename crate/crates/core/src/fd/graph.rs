use indexmap::IndexSet;

use super::{ConstraintId, Pair, VarId};
use crate::element::ElementValue;

/// `supported` relies on `supporter` to satisfy `constraint`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relies {
    pub supported: Pair,
    pub supporter: Pair,
    pub constraint: ConstraintId,
}

/// Observed pairs and the support dependencies among them.
///
/// Present supporters are never recorded: a present element is already known
/// to be supported.
#[derive(Debug, Clone, Default)]
pub struct SupportGraph {
    observed: IndexSet<Pair>,
    arcs: IndexSet<Relies>,
}

impl SupportGraph {
    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }

    pub fn observed(&self) -> impl Iterator<Item = &Pair> {
        self.observed.iter()
    }

    pub fn contains(&self, pair: &Pair) -> bool {
        self.observed.contains(pair)
    }

    /// Observed elements of `var`, in the order they entered the graph.
    pub fn observed_of(&self, var: VarId) -> impl Iterator<Item = &ElementValue> {
        self.observed
            .iter()
            .filter(move |p| p.var == var)
            .map(|p| &p.element)
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Relies> {
        self.arcs.iter()
    }

    pub(crate) fn insert_node(&mut self, pair: Pair) {
        self.observed.insert(pair);
    }

    /// Returns false when the arc was already there.
    pub(crate) fn insert_arc(&mut self, arc: Relies) -> bool {
        self.arcs.insert(arc)
    }

    /// Drops `pair` and every arc touching it; returns the (supported,
    /// constraint) dependencies it was backing, deduplicated.
    pub(crate) fn remove_node(&mut self, pair: &Pair) -> Vec<(Pair, ConstraintId)> {
        self.observed.shift_remove(pair);
        let mut dependents: Vec<(Pair, ConstraintId)> = Vec::new();
        for arc in self.arcs.iter().filter(|a| &a.supporter == pair) {
            let dep = (arc.supported.clone(), arc.constraint);
            if !dependents.contains(&dep) {
                dependents.push(dep);
            }
        }
        self.arcs
            .retain(|a| &a.supporter != pair && &a.supported != pair);
        dependents
    }

    /// Forgets the support recorded for `supported` on `constraint`.
    pub(crate) fn clear_support(&mut self, supported: &Pair, constraint: ConstraintId) {
        self.arcs
            .retain(|a| !(&a.supported == supported && a.constraint == constraint));
    }

    /// Empties the graph, returning its nodes in insertion order.
    pub(crate) fn drain(&mut self) -> Vec<Pair> {
        self.arcs.clear();
        self.observed.drain(..).collect()
    }
}
