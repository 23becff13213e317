//! The `X :: S` link between an FD variable and its definition domain.
//!
//! Insertions reach FD variables in two phases: the I-Set fixpoint runs to
//! quiescence first, then every insertion it drained becomes a candidate for
//! each variable linked to the set. No support seek ever sees a half
//! propagated I-Set state.

use crate::engine::Engine;
use crate::error::{Failure, UsageError};
use crate::fd::VarId;
use crate::iset::{Event, IsetId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainLink {
    pub var: VarId,
    pub iset: IsetId,
}

impl Engine {
    /// Links `var` to `iset`; every element already known in `iset` becomes
    /// a candidate for `var`.
    pub fn def_domain(&mut self, var: VarId, iset: IsetId) -> Result<(), UsageError> {
        if self.state.vars[var.0].def_domain.is_some() {
            return Err(UsageError::AlreadyLinked(var));
        }
        self.state.vars[var.0].def_domain = Some(iset);
        let linked = &mut self.state.linked[iset.0];
        let at = linked.partition_point(|v| *v < var);
        linked.insert(at, var);
        let known: Vec<_> = self.state.isets.known_ordered(iset).cloned().collect();
        for e in known {
            self.enqueue_candidate(var, e)?;
        }
        Ok(())
    }

    pub fn links(&self) -> Vec<DomainLink> {
        self.state
            .vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                v.def_domain.map(|iset| DomainLink {
                    var: VarId(i),
                    iset,
                })
            })
            .collect()
    }

    /// Variables whose definition domain is `iset`, in creation order.
    pub fn linked_vars(&self, iset: IsetId) -> &[VarId] {
        &self.state.linked[iset.0]
    }

    /// Runs the I-Set fixpoint, then turns every drained insertion into
    /// candidates for the linked variables.
    pub(crate) fn settle(&mut self) -> Result<(), Failure> {
        let drained = self.state.isets.fixpoint();
        self.sync_iset_trace();
        let drained = self.guard(drained)?;
        for event in drained {
            if let Event::Inserted(iset, e) = event {
                for var in self.state.linked[iset.0].clone() {
                    self.enqueue_candidate(var, e.clone())
                        .expect("drained insertions belong to the linked definition domain");
                }
            }
        }
        Ok(())
    }
}
