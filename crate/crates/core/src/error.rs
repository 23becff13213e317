use crate::element::ElementValue;
use crate::fd::VarId;
use crate::iset::{IsetConstraintId, IsetId};

/// Unsatisfiability of the constraint store.
///
/// Once an engine has reported a failure it stays failed; search recovers by
/// restoring a snapshot taken before the failing step.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Failure {
    #[error("{element} cannot enter closed I-Set {iset}")]
    ClosedSet { iset: IsetId, element: ElementValue },
    #[error("{element} belongs to the subtrahend of difference constraint {constraint}")]
    DifferenceConflict {
        constraint: IsetConstraintId,
        element: ElementValue,
    },
    #[error("domain wipe-out on {0}")]
    Wipeout(VarId),
    #[error("acquisition source for {iset} returned {element}, which is already known")]
    DuplicateAcquisition { iset: IsetId, element: ElementValue },
}

/// Misuse of the engine API, as opposed to an inconsistent problem.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UsageError {
    #[error("{0} already has a definition domain")]
    AlreadyLinked(VarId),
    #[error("{0} already has an acquisition source")]
    SourceAlreadyBound(IsetId),
    #[error("{element} is not in the definition domain of {var}")]
    NotInDefinitionDomain { var: VarId, element: ElementValue },
    #[error("{var} has no definition domain")]
    Unlinked { var: VarId },
    #[error("an FD constraint needs at least one argument")]
    NoArguments,
}
