//! Brute-force reference implementations for differential testing.
//!
//! Nothing here shares propagation code with the engine; only verifiers are
//! common to both sides.

pub mod gen;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::element::ElementValue;
use crate::engine::Engine;
use crate::fd::{ConstraintId, VarId, Verifier};
use crate::iset::{IsetConstraint, IsetId};

/// A constraint of a [`ClosedCsp`], over variable indices.
#[derive(Clone)]
pub struct CspConstraint {
    pub name: String,
    pub args: Vec<usize>,
    pub verifier: Arc<dyn Verifier>,
}

impl fmt::Debug for CspConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.args)
    }
}

/// A classical CSP: every domain fully known.
#[derive(Debug, Clone, Default)]
pub struct ClosedCsp {
    pub domains: Vec<Vec<ElementValue>>,
    pub constraints: Vec<CspConstraint>,
}

impl ClosedCsp {
    pub fn add_var(&mut self, domain: Vec<ElementValue>) -> usize {
        self.domains.push(domain);
        self.domains.len() - 1
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, args: Vec<usize>, verifier: impl Verifier + 'static) {
        self.constraints.push(CspConstraint {
            name: name.into(),
            args,
            verifier: Arc::new(verifier),
        });
    }

    /// The same problem as an engine: one closed I-Set per variable, no
    /// sources.
    pub fn to_engine(&self) -> (Engine, Vec<VarId>) {
        let mut eng = Engine::new();
        let vars: Vec<VarId> = self
            .domains
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let iset = eng.new_iset(format!("d{i}"), d.iter().cloned(), false);
                eng.new_fd_variable(format!("v{i}"), iset)
            })
            .collect();
        for c in &self.constraints {
            let args = c.args.iter().map(|&a| vars[a]).collect();
            eng.post_shared_constraint(c.name.clone(), args, c.verifier.clone())
                .expect("generated constraints have arguments");
        }
        (eng, vars)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ac3Outcome {
    /// The maximal arc-consistent sub-domains.
    Consistent(Vec<Vec<ElementValue>>),
    Wipeout(usize),
}

/// Does some tuple over `domains` with `value` at every position of `var`
/// satisfy `c`?
fn supported(c: &CspConstraint, domains: &[Vec<ElementValue>], var: usize, value: &ElementValue) -> bool {
    let mut others: Vec<usize> = Vec::new();
    for &a in &c.args {
        if a != var && !others.contains(&a) {
            others.push(a);
        }
    }
    let mut chosen: Vec<Option<ElementValue>> = vec![None; domains.len()];
    chosen[var] = Some(value.clone());
    extend(c, domains, &others, &mut chosen)
}

fn extend(
    c: &CspConstraint,
    domains: &[Vec<ElementValue>],
    others: &[usize],
    chosen: &mut [Option<ElementValue>],
) -> bool {
    let Some((&o, rest)) = others.split_first() else {
        let tuple: Vec<ElementValue> = c
            .args
            .iter()
            .map(|&a| chosen[a].clone().expect("every argument is assigned"))
            .collect();
        return c.verifier.verify(&tuple);
    };
    for e in &domains[o] {
        chosen[o] = Some(e.clone());
        if extend(c, domains, rest, chosen) {
            return true;
        }
    }
    chosen[o] = None;
    false
}

/// Generalized arc consistency by constraint revision to a fixpoint.
pub fn ac3(csp: &ClosedCsp) -> Ac3Outcome {
    let mut domains = csp.domains.clone();
    if let Some(v) = domains.iter().position(Vec::is_empty) {
        return Ac3Outcome::Wipeout(v);
    }
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for (ci, c) in csp.constraints.iter().enumerate() {
        for &a in &c.args {
            if !queue.contains(&(ci, a)) {
                queue.push((ci, a));
            }
        }
    }
    while let Some((ci, var)) = queue.pop() {
        let c = &csp.constraints[ci];
        let before = domains[var].len();
        let kept: Vec<ElementValue> = domains[var]
            .iter()
            .filter(|v| supported(c, &domains, var, v))
            .cloned()
            .collect();
        if kept.len() == before {
            continue;
        }
        if kept.is_empty() {
            return Ac3Outcome::Wipeout(var);
        }
        domains[var] = kept;
        for (cj, other) in csp.constraints.iter().enumerate() {
            if !other.args.contains(&var) {
                continue;
            }
            for &a in &other.args {
                if a != var && !queue.contains(&(cj, a)) {
                    queue.push((cj, a));
                }
            }
        }
    }
    Ac3Outcome::Consistent(domains)
}

/// A present element without a supporting tuple of present elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub var: VarId,
    pub element: ElementValue,
    pub constraint: ConstraintId,
}

/// Checks known arc-consistency of the engine's present elements by brute
/// force.
pub fn kac_violations(eng: &Engine) -> Vec<Violation> {
    let vars: Vec<VarId> = eng.variables().collect();
    let index = |v: VarId| vars.iter().position(|&w| w == v).expect("engine variable");
    let domains: Vec<Vec<ElementValue>> = vars.iter().map(|&v| eng.present(v).to_vec()).collect();
    let mut out = Vec::new();
    for (cid, c) in eng.constraints() {
        let local = CspConstraint {
            name: c.name().to_string(),
            args: c.args().iter().map(|&a| index(a)).collect(),
            verifier: c.verifier().clone(),
        };
        for var in c.distinct_vars() {
            for element in eng.present(var) {
                if !supported(&local, &domains, index(var), element) {
                    out.push(Violation {
                        var,
                        element: element.clone(),
                        constraint: cid,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Disagree(String),
}

/// Runs the engine and AC-3 on the same instance. They agree when both or
/// neither detect inconsistency and, when consistent, the engine's present
/// elements are arc-consistent, non-empty and drawn from the input domains.
pub fn compare_kac_ac(csp: &ClosedCsp) -> Verdict {
    let (mut eng, vars) = csp.to_engine();
    let kac = eng.kac_fixpoint();
    let ac = ac3(csp);
    let mut problems = Vec::new();
    match (&kac, &ac) {
        (Err(_), Ac3Outcome::Wipeout(_)) => {}
        (Ok(()), Ac3Outcome::Consistent(_)) => {
            for (i, &v) in vars.iter().enumerate() {
                if eng.present(v).is_empty() {
                    problems.push(format!("v{i} has no present element"));
                }
                if let Some(e) = eng.present(v).iter().find(|e| !csp.domains[i].contains(e)) {
                    problems.push(format!("v{i} has foreign element {e}"));
                }
            }
            for viol in kac_violations(&eng) {
                problems.push(format!(
                    "{}={} unsupported on {}",
                    eng.var_name(viol.var),
                    viol.element,
                    eng.constraint(viol.constraint).name()
                ));
            }
        }
        (kac, ac) => problems.push(format!("engine {kac:?}, ac3 {ac:?}")),
    }
    if let Some(t) = eng.transitions().iter().find(|t| !t.from.permits(t.to)) {
        problems.push(format!("transition {:?} -> {:?} on {:?}", t.from, t.to, t.pair));
    }
    if problems.is_empty() {
        Verdict::Agree
    } else {
        Verdict::Disagree(format!("{csp:?}: {}", problems.join("; ")))
    }
}

/// [`compare_kac_ac`] on the instance generated from `seed`; a disagreement
/// names the seed so that it can be replayed.
pub fn compare_seeded(seed: u64) -> Verdict {
    match compare_kac_ac(&gen::closed_csp(seed, &gen::CspShape::default())) {
        Verdict::Agree => Verdict::Agree,
        Verdict::Disagree(report) => Verdict::Disagree(format!("seed {seed}: {report}")),
    }
}

/// Whether the set relation of `c` holds between the given contents.
pub fn relation_holds(c: &IsetConstraint, contents: impl Fn(IsetId) -> BTreeSet<ElementValue>) -> bool {
    match *c {
        IsetConstraint::Member(ref e, s) => contents(s).contains(e),
        IsetConstraint::Union(a, b, s) => {
            contents(a).union(&contents(b)).cloned().collect::<BTreeSet<_>>() == contents(s)
        }
        IsetConstraint::Intersection(a, b, s) => {
            contents(a).intersection(&contents(b)).cloned().collect::<BTreeSet<_>>() == contents(s)
        }
        IsetConstraint::Difference(a, b, s) => {
            contents(a).difference(&contents(b)).cloned().collect::<BTreeSet<_>>() == contents(s)
        }
        IsetConstraint::Inclusion(a, b) => contents(a).is_subset(&contents(b)),
    }
}

/// The contents the third argument of a union, intersection or difference
/// must have, given the first two.
pub fn algebra_result(c: &IsetConstraint, contents: impl Fn(IsetId) -> BTreeSet<ElementValue>) -> Option<BTreeSet<ElementValue>> {
    match *c {
        IsetConstraint::Union(a, b, _) => Some(contents(a).union(&contents(b)).cloned().collect()),
        IsetConstraint::Intersection(a, b, _) => Some(contents(a).intersection(&contents(b)).cloned().collect()),
        IsetConstraint::Difference(a, b, _) => Some(contents(a).difference(&contents(b)).cloned().collect()),
        _ => None,
    }
}
