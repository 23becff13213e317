use std::io::{self, Write};

use super::parse::{Directive, ProblemFile, SetRelation, SourceSpec};
use crate::acquisition::{InteractiveSource, PromptIo, RangeSource, ScriptedSource};
use crate::engine::Engine;
use crate::fd::{SearchOutcome, VarId};
use crate::iset::{IsetConstraint, IsetId};
use crate::trace::TraceLine;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Emit one line per engine event before the result.
    pub trace: bool,
    /// Search for a solution even if the file does not ask for it.
    pub label: bool,
    /// Reserved for randomized sources; the bundled ones ignore it.
    pub seed: Option<u64>,
}

/// A problem file turned into an engine.
pub struct Built {
    pub engine: Engine,
    pub isets: Vec<IsetId>,
    pub vars: Vec<VarId>,
}

/// Creates the engine, applying directives in file order. Posting stops
/// having an effect once the store is inconsistent, but every set and
/// variable is still created so that it can be reported.
pub fn build(problem: &ProblemFile, prompt: &PromptIo) -> Built {
    let mut engine = Engine::new();
    let mut isets = Vec::new();
    let mut vars = Vec::new();
    for (_, directive) in &problem.directives {
        match directive {
            Directive::Iset { name, open, elements } => {
                isets.push(engine.new_iset(name.clone(), elements.iter().cloned(), *open));
            }
            Directive::Var { name, iset } => {
                vars.push(engine.new_fd_variable(name.clone(), isets[*iset]));
            }
            Directive::Fdc { builtin, args } => {
                let args = args.iter().map(|&a| vars[a]).collect();
                engine
                    .post_fd_constraint(builtin.to_string(), args, *builtin)
                    .expect("the parser rejects empty argument lists");
            }
            Directive::Isetc(relation) => {
                let s = |i: &usize| isets[*i];
                let constraint = match relation {
                    SetRelation::Member(e, a) => IsetConstraint::Member(e.clone(), s(a)),
                    SetRelation::Union(a, b, c) => IsetConstraint::Union(s(a), s(b), s(c)),
                    SetRelation::Intersection(a, b, c) => IsetConstraint::Intersection(s(a), s(b), s(c)),
                    SetRelation::Difference(a, b, c) => IsetConstraint::Difference(s(a), s(b), s(c)),
                    SetRelation::Inclusion(a, b) => IsetConstraint::Inclusion(s(a), s(b)),
                };
                // A failure is remembered by the engine and reported later.
                let _ = engine.post_iset_constraint(constraint);
            }
            Directive::Source { iset, spec } => {
                let iset = isets[*iset];
                let bound = match spec {
                    SourceSpec::Script(elements) => engine.register_source(iset, ScriptedSource::new(elements.clone())),
                    SourceSpec::Range(lo, hi) => engine.register_source(iset, RangeSource::new(*lo, *hi)),
                    SourceSpec::Interactive => engine.register_source(iset, InteractiveSource::new(prompt.clone())),
                };
                bound.expect("the parser rejects a second source for one I-Set");
            }
        }
    }
    Built { engine, isets, vars }
}

/// Result of [`run`], before rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub trace: Vec<TraceLine>,
    pub consistent: bool,
    pub domains: Vec<TraceLine>,
    /// Present when labeling was requested.
    pub solution: Option<TraceLine>,
}

impl Report {
    /// 0 when consistent (and solved, if labeling was requested), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let solved = !matches!(self.solution, Some(TraceLine::Solution(None)));
        if self.consistent && solved {
            0
        } else {
            1
        }
    }

    pub fn lines(&self, with_trace: bool) -> Vec<TraceLine> {
        let mut lines = if with_trace { self.trace.clone() } else { Vec::new() };
        lines.push(TraceLine::Result {
            consistent: self.consistent,
        });
        lines.extend(self.domains.iter().cloned());
        lines.extend(self.solution.clone());
        lines
    }
}

pub fn solve(problem: &ProblemFile, options: &RunOptions, prompt: &PromptIo) -> Report {
    let Built { mut engine, vars, .. } = build(problem, prompt);
    let consistent = engine.kac_fixpoint().is_ok();
    let labeling = options.label || problem.labeling == Some(true);
    let solution = labeling.then(|| {
        let found = if consistent { engine.label(&vars) } else { SearchOutcome::Exhausted };
        match found {
            SearchOutcome::Solution(assignment) => TraceLine::Solution(Some(
                assignment
                    .into_iter()
                    .map(|(v, e)| (engine.var_name(v).to_string(), e))
                    .collect(),
            )),
            SearchOutcome::Exhausted => TraceLine::Solution(None),
        }
    });
    let domains = vars
        .iter()
        .map(|&v| {
            let mut present = engine.present(v).to_vec();
            let mut removed = engine.removed(v).to_vec();
            present.sort();
            removed.sort();
            TraceLine::Domain {
                var: engine.var_name(v).to_string(),
                present,
                removed,
            }
        })
        .collect();
    Report {
        trace: engine.trace_lines(),
        consistent,
        domains,
        solution,
    }
}

/// Solves `problem` and writes its report to `out`; returns the exit code.
pub fn run(problem: &ProblemFile, options: &RunOptions, prompt: &PromptIo, out: &mut impl Write) -> io::Result<i32> {
    let report = solve(problem, options, prompt);
    for line in report.lines(options.trace) {
        writeln!(out, "{line}")?;
    }
    Ok(report.exit_code())
}
