//! Finite-domain variables over I-Sets and known arc-consistency.
//!
//! Every (variable, element) pair moves through a small state machine:
//!
//! ```text
//! Unknown -> Candidate -> Observed -> Present
//!                                  \-> Removed
//! ```
//!
//! A candidate becomes observed when it is picked as the seed of a support
//! graph or as the supporter of an observed pair. Observed pairs are present
//! once the graph is complete, or removed as soon as one of their constraints
//! has no support left.

mod graph;
mod kac;
mod search;
mod verifier;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::element::ElementValue;
use crate::iset::IsetId;

pub use graph::{Relies, SupportGraph};
pub use kac::{CheckOutcome, SeekOutcome};
pub use search::SearchOutcome;
pub use verifier::{Builtin, UnknownBuiltin, Verifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "var#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintId(pub(crate) usize);

impl ConstraintId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A (variable, element) pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub var: VarId,
    pub element: ElementValue,
}

impl Pair {
    pub fn new(var: VarId, element: impl Into<ElementValue>) -> Self {
        Pair {
            var,
            element: element.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairState {
    Unknown,
    Candidate,
    Observed,
    Present,
    Removed,
}

impl PairState {
    /// The transitions propagation may perform.
    pub fn permits(self, to: PairState) -> bool {
        use PairState::*;
        matches!(
            (self, to),
            (Unknown, Candidate) | (Candidate, Observed) | (Observed, Present) | (Observed, Removed)
        )
    }
}

/// One logged state change. `forced` marks removals decided by search rather
/// than by propagation; they sit outside the propagation state machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub pair: Pair,
    pub from: PairState,
    pub to: PairState,
    pub forced: bool,
}

#[derive(Debug, Clone)]
pub struct FdVariable {
    pub(crate) name: String,
    pub(crate) def_domain: Option<IsetId>,
    pub(crate) present: Vec<ElementValue>,
    pub(crate) removed: Vec<ElementValue>,
    pub(crate) candidates: VecDeque<ElementValue>,
    pub(crate) states: HashMap<ElementValue, PairState>,
    pub(crate) constraints: Vec<ConstraintId>,
    pub(crate) bound: Option<ElementValue>,
}

impl FdVariable {
    pub(crate) fn new(name: String) -> Self {
        FdVariable {
            name,
            def_domain: None,
            present: Vec::new(),
            removed: Vec::new(),
            candidates: VecDeque::new(),
            states: HashMap::new(),
            constraints: Vec::new(),
            bound: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn def_domain(&self) -> Option<IsetId> {
        self.def_domain
    }

    /// Known part of the current domain, in the order elements became present.
    pub fn present(&self) -> &[ElementValue] {
        &self.present
    }

    pub fn removed(&self) -> &[ElementValue] {
        &self.removed
    }

    pub fn candidates(&self) -> impl Iterator<Item = &ElementValue> {
        self.candidates.iter()
    }

    pub fn state(&self, element: &ElementValue) -> PairState {
        self.states
            .get(element)
            .copied()
            .unwrap_or(PairState::Unknown)
    }

    /// Constraints mentioning this variable, in posting order.
    pub fn constraints(&self) -> &[ConstraintId] {
        &self.constraints
    }

    /// The value search has fixed this variable to, if any.
    pub fn bound(&self) -> Option<&ElementValue> {
        self.bound.as_ref()
    }
}

/// An n-ary constraint defined by a ground-tuple check.
#[derive(Clone)]
pub struct FdConstraint {
    pub(crate) name: String,
    pub(crate) args: Vec<VarId>,
    pub(crate) verifier: Arc<dyn Verifier>,
}

impl FdConstraint {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[VarId] {
        &self.args
    }

    pub fn verifier(&self) -> &Arc<dyn Verifier> {
        &self.verifier
    }

    /// Distinct argument variables in order of first occurrence.
    pub fn distinct_vars(&self) -> Vec<VarId> {
        let mut out = Vec::with_capacity(self.args.len());
        for &v in &self.args {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn verify(&self, tuple: &[ElementValue]) -> bool {
        assert_eq!(
            tuple.len(),
            self.args.len(),
            "tuple arity does not match constraint `{}`",
            self.name
        );
        self.verifier.verify(tuple)
    }
}

impl fmt::Debug for FdConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdConstraint")
            .field("name", &self.name)
            .field("args", &self.args)
            .finish_non_exhaustive()
    }
}
