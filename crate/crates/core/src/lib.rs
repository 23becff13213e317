//! Constraint solving over partially known, incrementally acquired domains.
//!
//! Finite-domain variables range over I-Sets: sets whose known part grows as
//! elements are acquired and which may eventually be closed. Propagation keeps
//! the known values of every variable arc-consistent and asks an
//! [`AcquisitionSource`] for new elements only when a value has no known
//! support.

pub mod acquisition;
pub mod cli;
pub mod element;
pub mod engine;
pub mod error;
pub mod fd;
pub mod iset;
pub mod link;
pub mod oracle;
pub mod trace;

pub use acquisition::{
    AcquireOutcome, AcquireRecord, AcquisitionContext, AcquisitionResult, AcquisitionSource,
    InteractiveSource, LoggedOutcome, PromptIo, RangeSource, ScriptedSource,
};
pub use element::ElementValue;
pub use engine::{Engine, Snapshot};
pub use error::{Failure, UsageError};
pub use fd::{
    Builtin, CheckOutcome, ConstraintId, FdConstraint, FdVariable, Pair, PairState, Relies,
    SearchOutcome, SeekOutcome, SupportGraph, Transition, VarId, Verifier,
};
pub use iset::{CloseOutcome, EnsureOutcome, Event, IsetConstraint, IsetConstraintId, IsetId, IsetStore};
pub use link::DomainLink;
pub use trace::{TraceEvent, TraceLine};
