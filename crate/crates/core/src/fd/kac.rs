//! The known arc-consistency procedure.
//!
//! One support graph is built per seed: the seed is checked against every
//! constraint on its variable, supporters that were only candidates become
//! observed and are checked in turn (depth first), and once the seed's check
//! returns every node still in the graph becomes present.

use std::sync::Arc;

use super::{ConstraintId, FdConstraint, FdVariable, Pair, PairState, Relies, Transition, VarId, Verifier};
use crate::element::ElementValue;
use crate::engine::Engine;
use crate::error::{Failure, UsageError};
use crate::trace::TraceEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Supported,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeekOutcome {
    /// Satisfied by present elements alone; the graph is unchanged.
    ByPresent,
    /// Satisfied with observed or candidate supporters. `new_nodes` are the
    /// candidates that just became observed and still need their own check.
    ByGraph { arcs: Vec<Relies>, new_nodes: Vec<Pair> },
    NoSupport,
}

/// Which pair states a support pool may draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Reach {
    Present,
    Observed,
    Candidate,
}

impl Engine {
    /// Creates a variable without a definition domain. Until it is linked
    /// with [`Engine::def_domain`] it behaves as ranging over a closed empty
    /// set.
    pub fn new_variable(&mut self, name: impl Into<String>) -> VarId {
        self.state.vars.push(FdVariable::new(name.into()));
        VarId(self.state.vars.len() - 1)
    }

    /// Creates a variable and links it to `iset`.
    pub fn new_fd_variable(&mut self, name: impl Into<String>, iset: crate::iset::IsetId) -> VarId {
        let var = self.new_variable(name);
        self.def_domain(var, iset)
            .expect("a fresh variable has no link and its domain holds only known elements");
        var
    }

    /// Registers an n-ary constraint. Constraints should be posted before the
    /// first call to [`Engine::kac_fixpoint`]: elements that are already
    /// present are not rechecked against them.
    pub fn post_fd_constraint(
        &mut self,
        name: impl Into<String>,
        args: Vec<VarId>,
        verifier: impl Verifier + 'static,
    ) -> Result<ConstraintId, UsageError> {
        self.post_shared_constraint(name, args, Arc::new(verifier))
    }

    pub fn post_shared_constraint(
        &mut self,
        name: impl Into<String>,
        args: Vec<VarId>,
        verifier: Arc<dyn Verifier>,
    ) -> Result<ConstraintId, UsageError> {
        if args.is_empty() {
            return Err(UsageError::NoArguments);
        }
        let id = ConstraintId(self.state.constraints.len());
        let constraint = FdConstraint {
            name: name.into(),
            args,
            verifier,
        };
        for var in constraint.distinct_vars() {
            self.state.vars[var.0].constraints.push(id);
        }
        self.state.constraints.push(constraint);
        Ok(id)
    }

    pub fn verify(&self, constraint: ConstraintId, tuple: &[ElementValue]) -> bool {
        self.state.constraints[constraint.0].verify(tuple)
    }

    /// Makes `element` a candidate for `var` unless the pair has been seen
    /// before.
    pub fn enqueue_candidate(&mut self, var: VarId, element: ElementValue) -> Result<(), UsageError> {
        let Some(iset) = self.state.vars[var.0].def_domain else {
            return Err(UsageError::Unlinked { var });
        };
        if !self.state.isets.contains(iset, &element) {
            return Err(UsageError::NotInDefinitionDomain { var, element });
        }
        let pair = Pair { var, element };
        if self.pair_state(var, &pair.element) == PairState::Unknown {
            self.set_state(&pair, PairState::Candidate, false);
            self.state.vars[var.0].candidates.push_back(pair.element.clone());
            self.log(TraceEvent::Candidate(pair));
        }
        Ok(())
    }

    /// Runs the procedure until no candidate is left and every variable with
    /// an empty known domain has either acquired an element or been found
    /// wiped out.
    pub fn kac_fixpoint(&mut self) -> Result<(), Failure> {
        self.check_alive()?;
        let result = self.kac_loop();
        self.guard(result)
    }

    fn kac_loop(&mut self) -> Result<(), Failure> {
        loop {
            if let Some(seed) = self.observe_next_seed() {
                self.check_candidate(&seed)?;
                self.flush_graph();
                continue;
            }
            let starving = self.variables().find(|&v| {
                let var = &self.state.vars[v.0];
                var.present.is_empty()
                    && var.bound.is_none()
                    && var.def_domain.is_some_and(|s| !self.is_closed(s))
            });
            if let Some(var) = starving {
                let iset = self.state.vars[var.0].def_domain.expect("starving variables are linked");
                self.acquire(iset, Some(var), None)?;
                continue;
            }
            if let Some(var) = self.variables().find(|v| self.state.vars[v.0].present.is_empty()) {
                return Err(Failure::Wipeout(var));
            }
            return Ok(());
        }
    }

    /// Takes the first candidate of the first variable that has one and makes
    /// it the seed of a new support graph.
    pub fn observe_next_seed(&mut self) -> Option<Pair> {
        let var = self.variables().find(|v| !self.state.vars[v.0].candidates.is_empty())?;
        let element = self.state.vars[var.0].candidates.front()?.clone();
        let pair = Pair { var, element };
        self.observe(&pair);
        Some(pair)
    }

    /// Seeks support for an observed pair on every constraint of its
    /// variable and checks the supporters this brings into the graph. An
    /// unsupported pair is removed, together with whatever relied on it and
    /// can find no other support.
    ///
    /// # Panics
    /// If `pair` is not observed.
    pub fn check_candidate(&mut self, pair: &Pair) -> Result<CheckOutcome, Failure> {
        assert_eq!(
            self.pair_state(pair.var, &pair.element),
            PairState::Observed,
            "only observed pairs are checked"
        );
        let excluded = self.state.vars[pair.var.0]
            .bound
            .as_ref()
            .is_some_and(|b| *b != pair.element);
        if excluded {
            self.remove_node(pair)?;
            return Ok(CheckOutcome::Unsupported);
        }
        for c in self.state.vars[pair.var.0].constraints.clone() {
            if self.pair_state(pair.var, &pair.element) != PairState::Observed {
                return Ok(CheckOutcome::Unsupported);
            }
            self.settle_support(pair, c)?;
        }
        Ok(match self.pair_state(pair.var, &pair.element) {
            PairState::Observed => CheckOutcome::Supported,
            _ => CheckOutcome::Unsupported,
        })
    }

    /// Seeks support for `pair` on `c`, checks any new nodes, and removes the
    /// pair when there is none.
    fn settle_support(&mut self, pair: &Pair, c: ConstraintId) -> Result<(), Failure> {
        match self.seek_support(pair, c)? {
            SeekOutcome::ByPresent => {}
            SeekOutcome::ByGraph { new_nodes, .. } => {
                for node in new_nodes {
                    if self.pair_state(node.var, &node.element) == PairState::Observed {
                        self.check_candidate(&node)?;
                    }
                }
            }
            SeekOutcome::NoSupport => self.remove_node(pair)?,
        }
        Ok(())
    }

    /// Looks for a tuple satisfying `c` with `pair` fixed, preferring present
    /// supporters, then observed, then candidates. When nothing fits, one
    /// element is acquired for the first other variable of `c` whose domain
    /// is open and the candidate search is repeated.
    ///
    /// Candidates used as supporters become observed; their own checks are
    /// left to the caller.
    ///
    /// # Panics
    /// If `c` does not mention the pair's variable.
    pub fn seek_support(&mut self, pair: &Pair, c: ConstraintId) -> Result<SeekOutcome, Failure> {
        let constraint = self.state.constraints[c.0].clone();
        assert!(
            constraint.args.contains(&pair.var),
            "constraint `{}` does not mention {}",
            constraint.name,
            pair.var
        );
        let others: Vec<VarId> = constraint
            .distinct_vars()
            .into_iter()
            .filter(|&v| v != pair.var)
            .collect();
        let mut reaches = vec![Reach::Present, Reach::Observed, Reach::Candidate];
        loop {
            for &reach in &reaches {
                let Some(tuple) = self.find_tuple(pair, &constraint, &others, reach) else {
                    continue;
                };
                if reach == Reach::Present {
                    return Ok(SeekOutcome::ByPresent);
                }
                return Ok(self.record_support(pair, c, tuple));
            }
            let open = others.iter().copied().find_map(|v| {
                let var = &self.state.vars[v.0];
                let iset = var.def_domain?;
                (var.bound.is_none() && !self.is_closed(iset)).then_some((v, iset))
            });
            let Some((var, iset)) = open else {
                return Ok(SeekOutcome::NoSupport);
            };
            self.acquire(iset, Some(var), Some(&constraint.name))?;
            // Acquisition only adds candidates, so present and observed
            // supporters need not be searched again.
            reaches = vec![Reach::Candidate];
        }
    }

    fn record_support(&mut self, pair: &Pair, c: ConstraintId, tuple: Vec<Pair>) -> SeekOutcome {
        let mut arcs = Vec::new();
        let mut new_nodes = Vec::new();
        for supporter in tuple {
            match self.pair_state(supporter.var, &supporter.element) {
                PairState::Present => continue,
                PairState::Candidate => {
                    self.observe(&supporter);
                    new_nodes.push(supporter.clone());
                }
                _ => {}
            }
            let arc = Relies {
                supported: pair.clone(),
                supporter,
                constraint: c,
            };
            if self.state.graph.insert_arc(arc.clone()) {
                self.log(TraceEvent::Rely(arc.clone()));
            }
            arcs.push(arc);
        }
        SeekOutcome::ByGraph { arcs, new_nodes }
    }

    /// Elements of `var` a supporter may be drawn from, in priority order.
    pub(crate) fn pool(&self, var: VarId, reach: Reach) -> Vec<ElementValue> {
        let v = &self.state.vars[var.0];
        if let Some(b) = &v.bound {
            return match v.state(b) {
                PairState::Present => vec![b.clone()],
                _ => Vec::new(),
            };
        }
        let mut pool = v.present.clone();
        if reach >= Reach::Observed {
            pool.extend(self.state.graph.observed_of(var).cloned());
        }
        if reach >= Reach::Candidate {
            pool.extend(v.candidates.iter().cloned());
        }
        pool
    }

    /// First satisfying assignment of `others`, enumerated lexicographically
    /// over their pools, with `pair` fixed. Returns one pair per other
    /// variable.
    pub(crate) fn find_tuple(
        &self,
        pair: &Pair,
        constraint: &FdConstraint,
        others: &[VarId],
        reach: Reach,
    ) -> Option<Vec<Pair>> {
        let pools: Vec<Vec<ElementValue>> = others.iter().map(|&v| self.pool(v, reach)).collect();
        if pools.iter().any(Vec::is_empty) {
            return None;
        }
        let slot_of: Vec<Option<usize>> = constraint
            .args
            .iter()
            .map(|a| others.iter().position(|o| o == a))
            .collect();
        let mut index = vec![0usize; others.len()];
        loop {
            let tuple: Vec<ElementValue> = slot_of
                .iter()
                .map(|slot| match slot {
                    Some(k) => pools[*k][index[*k]].clone(),
                    None => pair.element.clone(),
                })
                .collect();
            if constraint.verify(&tuple) {
                return Some(
                    others
                        .iter()
                        .zip(&index)
                        .zip(&pools)
                        .map(|((&var, &i), pool)| Pair {
                            var,
                            element: pool[i].clone(),
                        })
                        .collect(),
                );
            }
            // Odometer step, last position fastest.
            let mut k = others.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                index[k] += 1;
                if index[k] < pools[k].len() {
                    break;
                }
                index[k] = 0;
            }
        }
    }

    /// Removes an unsupported observed pair and seeks new support for every
    /// pair that relied on it, cascading where none is found.
    pub fn remove_node(&mut self, pair: &Pair) -> Result<(), Failure> {
        self.set_state(pair, PairState::Removed, false);
        self.state.vars[pair.var.0].removed.push(pair.element.clone());
        self.log(TraceEvent::Remove(pair.clone()));
        for (dependent, c) in self.state.graph.remove_node(pair) {
            if self.pair_state(dependent.var, &dependent.element) != PairState::Observed {
                continue;
            }
            self.state.graph.clear_support(&dependent, c);
            self.settle_support(&dependent, c)?;
        }
        Ok(())
    }

    /// Makes every node left in the graph present and empties it.
    pub fn flush_graph(&mut self) {
        for pair in self.state.graph.drain() {
            self.set_state(&pair, PairState::Present, false);
            self.state.vars[pair.var.0].present.push(pair.element.clone());
            self.log(TraceEvent::Present(pair));
        }
    }

    /// Candidate to observed: leaves the queue, enters the graph.
    pub(crate) fn observe(&mut self, pair: &Pair) {
        let queue = &mut self.state.vars[pair.var.0].candidates;
        if let Some(at) = queue.iter().position(|e| *e == pair.element) {
            queue.remove(at);
        }
        self.set_state(pair, PairState::Observed, false);
        self.state.graph.insert_node(pair.clone());
        self.log(TraceEvent::Observe(pair.clone()));
    }

    pub(crate) fn set_state(&mut self, pair: &Pair, to: PairState, forced: bool) {
        let var = &mut self.state.vars[pair.var.0];
        let from = var.state(&pair.element);
        debug_assert!(forced || from.permits(to), "{from:?} -> {to:?} for {pair:?}");
        var.states.insert(pair.element.clone(), to);
        self.state.transitions.push(Transition {
            pair: pair.clone(),
            from,
            to,
            forced,
        });
    }
}
