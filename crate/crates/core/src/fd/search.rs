//! Depth-first labeling over present elements.
//!
//! Binding a variable prunes its other present elements, then support is
//! re-established for every present element in the store. A present element
//! that lost its support first asks for more elements of an open neighbour
//! domain and is pruned only when none can be acquired.

use super::kac::Reach;
use super::{Pair, PairState, VarId};
use crate::element::ElementValue;
use crate::engine::Engine;
use crate::error::Failure;
use crate::trace::TraceEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Solution(Vec<(VarId, ElementValue)>),
    Exhausted,
}

impl Engine {
    /// Searches for an assignment of `vars` satisfying every constraint.
    ///
    /// Propagation runs first if it has not yet reached quiescence. The
    /// engine is returned to its pre-search state afterwards; elements
    /// acquired during search stay with their sources and are replayed when
    /// requested again.
    pub fn label(&mut self, vars: &[VarId]) -> SearchOutcome {
        if self.kac_fixpoint().is_err() {
            return SearchOutcome::Exhausted;
        }
        let mut order: Vec<VarId> = Vec::with_capacity(vars.len());
        for &v in vars {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let root = self.snapshot();
        let found = self.descend(&order);
        self.restore(root);
        match found {
            Some(assignment) => SearchOutcome::Solution(assignment),
            None => SearchOutcome::Exhausted,
        }
    }

    fn descend(&mut self, vars: &[VarId]) -> Option<Vec<(VarId, ElementValue)>> {
        let Some((&var, rest)) = vars.split_first() else {
            return Some(Vec::new());
        };
        let mut tried = 0;
        loop {
            if let Some(value) = self.state.vars[var.0].present.get(tried).cloned() {
                tried += 1;
                let saved = self.snapshot();
                if self.bind(var, value.clone()).is_ok() {
                    if let Some(mut tail) = self.descend(rest) {
                        tail.insert(0, (var, value));
                        return Some(tail);
                    }
                }
                self.restore(saved);
                continue;
            }
            let iset = self.state.vars[var.0].def_domain?;
            if self.is_closed(iset) {
                return None;
            }
            self.acquire(iset, Some(var), None).ok()?;
            self.kac_fixpoint().ok()?;
        }
    }

    fn bind(&mut self, var: VarId, value: ElementValue) -> Result<(), Failure> {
        self.state.vars[var.0].bound = Some(value.clone());
        let others: Vec<ElementValue> = self.state.vars[var.0]
            .present
            .iter()
            .filter(|e| **e != value)
            .cloned()
            .collect();
        for e in others {
            self.prune(&Pair { var, element: e });
        }
        self.revise()
    }

    /// Restores support among present elements after a binding.
    fn revise(&mut self) -> Result<(), Failure> {
        loop {
            self.kac_fixpoint()?;
            let Some((pair, c)) = self.first_unsupported_present() else {
                return Ok(());
            };
            let constraint = &self.state.constraints[c.0];
            let open = constraint.distinct_vars().into_iter().find_map(|v| {
                let var = &self.state.vars[v.0];
                let iset = var.def_domain?;
                (v != pair.var && var.bound.is_none() && !self.is_closed(iset)).then_some((v, iset))
            });
            if let Some((v, iset)) = open {
                let name = constraint.name.clone();
                self.acquire(iset, Some(v), Some(&name))?;
                continue;
            }
            self.prune(&pair);
            if self.state.vars[pair.var.0].bound.is_some() {
                return self.guard(Err(Failure::Wipeout(pair.var)));
            }
        }
    }

    fn first_unsupported_present(&self) -> Option<(Pair, super::ConstraintId)> {
        for (i, var) in self.state.vars.iter().enumerate() {
            let v = VarId(i);
            for element in &var.present {
                let pair = Pair {
                    var: v,
                    element: element.clone(),
                };
                for &c in &var.constraints {
                    let constraint = &self.state.constraints[c.0];
                    let others: Vec<VarId> = constraint
                        .distinct_vars()
                        .into_iter()
                        .filter(|&o| o != v)
                        .collect();
                    if self.find_tuple(&pair, constraint, &others, Reach::Present).is_none() {
                        return Some((pair, c));
                    }
                }
            }
        }
        None
    }

    /// Search-time removal of a present element.
    fn prune(&mut self, pair: &Pair) {
        self.set_state(pair, PairState::Removed, true);
        let var = &mut self.state.vars[pair.var.0];
        var.present.retain(|e| *e != pair.element);
        var.removed.push(pair.element.clone());
        self.log(TraceEvent::Remove(pair.clone()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acquisition::ScriptedSource;
    use crate::element::ints;
    use crate::fd::Builtin;
    use crate::iset::IsetConstraint;

    #[test]
    fn numeric_example_solution() {
        let mut eng = Engine::new();
        let dx = eng.new_iset("dx", [], true);
        let dy = eng.new_iset("dy", [], true);
        let dz = eng.new_iset("dz", [], true);
        let x = eng.new_fd_variable("x", dx);
        let y = eng.new_fd_variable("y", dy);
        let z = eng.new_fd_variable("z", dz);
        eng.post_iset_constraint(IsetConstraint::Intersection(dx, dy, dz)).unwrap();
        eng.post_fd_constraint("gt", vec![z, x], Builtin::Gt).unwrap();
        eng.register_source(dx, ScriptedSource::new(ints([1]))).unwrap();
        eng.register_source(dz, ScriptedSource::new(ints([2]))).unwrap();
        eng.kac_fixpoint().unwrap();
        assert_eq!(
            eng.label(&[x, y, z]),
            SearchOutcome::Solution(vec![(x, 1.into()), (y, 2.into()), (z, 2.into())])
        );
        assert_eq!(eng.present(x), ints([1]));
    }

    #[test]
    fn closed_empty_domain_is_exhausted() {
        let mut eng = Engine::new();
        let d = eng.new_iset("d", [], false);
        let x = eng.new_fd_variable("x", d);
        assert_eq!(eng.label(&[x]), SearchOutcome::Exhausted);
    }

    #[test]
    fn equality_picks_the_shared_value() {
        let mut eng = Engine::new();
        let dx = eng.new_iset("dx", ints([1, 2]), false);
        let dx2 = eng.new_iset("dx2", ints([2]), false);
        let x = eng.new_fd_variable("x", dx);
        let x2 = eng.new_fd_variable("x2", dx2);
        eng.post_fd_constraint("eq", vec![x, x2], Builtin::Eq).unwrap();
        assert_eq!(
            eng.label(&[x, x2]),
            SearchOutcome::Solution(vec![(x, 2.into()), (x2, 2.into())])
        );
    }

    #[test]
    fn backtracks_over_arc_consistent_dead_ends() {
        // Pairwise distinct over two values: arc-consistent but unsatisfiable.
        let mut eng = Engine::new();
        let d = eng.new_iset("d", ints([1, 2]), false);
        let vars: Vec<VarId> = ["a", "b", "c"].iter().map(|n| eng.new_fd_variable(*n, d)).collect();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            eng.post_fd_constraint("ne", vec![vars[i], vars[j]], Builtin::Ne).unwrap();
        }
        eng.kac_fixpoint().unwrap();
        assert_eq!(eng.label(&vars), SearchOutcome::Exhausted);
    }

    #[test]
    fn search_acquires_when_presents_run_out() {
        let mut eng = Engine::new();
        let d = eng.new_iset("d", [], true);
        let vars: Vec<VarId> = ["a", "b", "c"].iter().map(|n| eng.new_fd_variable(*n, d)).collect();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            eng.post_fd_constraint("ne", vec![vars[i], vars[j]], Builtin::Ne).unwrap();
        }
        eng.register_source(d, ScriptedSource::new(ints([1, 2, 3, 4]))).unwrap();
        let SearchOutcome::Solution(assignment) = eng.label(&vars) else {
            panic!("expected a solution");
        };
        let values: Vec<i64> = assignment.iter().map(|(_, e)| e.as_int().unwrap()).collect();
        assert_eq!(values.len(), 3);
        assert!(values[0] != values[1] && values[1] != values[2] && values[0] != values[2]);
    }

    #[test]
    fn failed_store_is_exhausted() {
        let mut eng = Engine::new();
        let dx = eng.new_iset("dx", ints([2]), false);
        let dz = eng.new_iset("dz", ints([2]), false);
        let x = eng.new_fd_variable("x", dx);
        let z = eng.new_fd_variable("z", dz);
        eng.post_fd_constraint("gt", vec![z, x], Builtin::Gt).unwrap();
        assert_eq!(eng.label(&[x, z]), SearchOutcome::Exhausted);
    }
}
