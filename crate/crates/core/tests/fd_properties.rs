use proptest::prelude::*;

use icsp::oracle::gen::{closed_csp, open_instance, CspShape};
use icsp::oracle::{compare_seeded, kac_violations, ClosedCsp, Verdict};
use icsp::{ElementValue, Engine, PairState, SearchOutcome, TraceEvent};

/// Every complete assignment of `csp` that satisfies all its constraints.
fn brute_force(csp: &ClosedCsp) -> Vec<Vec<ElementValue>> {
    let mut found = Vec::new();
    let mut tuple = Vec::new();
    fn go(csp: &ClosedCsp, tuple: &mut Vec<ElementValue>, found: &mut Vec<Vec<ElementValue>>) {
        if tuple.len() == csp.domains.len() {
            if satisfies(csp, tuple) {
                found.push(tuple.clone());
            }
            return;
        }
        for e in &csp.domains[tuple.len()] {
            tuple.push(e.clone());
            go(csp, tuple, found);
            tuple.pop();
        }
    }
    go(csp, &mut tuple, &mut found);
    found
}

fn satisfies(csp: &ClosedCsp, tuple: &[ElementValue]) -> bool {
    csp.constraints.iter().all(|c| {
        let args: Vec<ElementValue> = c.args.iter().map(|&i| tuple[i].clone()).collect();
        c.verifier.verify(&args)
    })
}

fn check_domain_invariants(eng: &Engine) -> Result<(), TestCaseError> {
    for v in eng.variables() {
        let var = eng.variable(v);
        for e in var.present() {
            prop_assert!(!var.removed().contains(e), "{} both present and removed", e);
            prop_assert_eq!(var.state(e), PairState::Present);
        }
        for e in var.removed() {
            prop_assert_eq!(var.state(e), PairState::Removed);
        }
        if let Some(d) = var.def_domain() {
            let known = eng.known(d);
            prop_assert!(var.present().iter().chain(var.removed()).all(|e| known.contains(e)));
        }
    }
    for t in eng.transitions() {
        prop_assert!(t.from.permits(t.to) || (t.forced && t.from == PairState::Present), "{:?}", t);
        prop_assert!(t.from != PairState::Removed, "removed pair left its state: {:?}", t);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_instances_agree_with_arc_consistency(seed in any::<u64>()) {
        prop_assert_eq!(compare_seeded(seed), Verdict::Agree);
    }

    #[test]
    fn open_instances_reach_known_arc_consistency(seed in any::<u64>()) {
        let mut inst = open_instance(seed);
        let result = inst.engine.kac_fixpoint();
        if result.is_ok() {
            prop_assert!(kac_violations(&inst.engine).is_empty());
            for &v in &inst.vars {
                prop_assert!(!inst.engine.present(v).is_empty());
            }
        }
        for &(iset, supply) in &inst.supply {
            prop_assert!(inst.engine.acquisition_count(iset) <= supply + 1);
        }
        check_domain_invariants(&inst.engine)?;
    }

    #[test]
    fn acquisitions_are_followed_by_candidates(seed in any::<u64>()) {
        let mut inst = open_instance(seed);
        let _ = inst.engine.kac_fixpoint();
        let trace = inst.engine.trace();
        for (i, event) in trace.iter().enumerate() {
            if let TraceEvent::Acquire(_, Some(_)) = event {
                for later in &trace[i + 1..] {
                    match later {
                        TraceEvent::Candidate(_) => break,
                        TraceEvent::Observe(_) | TraceEvent::Rely(_) => {
                            prop_assert!(false, "{:?} before the candidate of {:?}", later, event);
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn labeling_finds_a_solution_exactly_when_one_exists(seed in any::<u64>()) {
        let csp = closed_csp(seed, &CspShape::default());
        let solutions = brute_force(&csp);
        let (mut eng, vars) = csp.to_engine();
        let _ = eng.kac_fixpoint();
        let before: Vec<_> = vars.iter().map(|&v| eng.present(v).to_vec()).collect();
        match eng.label(&vars) {
            SearchOutcome::Solution(assignment) => {
                let tuple: Vec<ElementValue> = vars
                    .iter()
                    .map(|v| assignment.iter().find(|(w, _)| w == v).expect("every var bound").1.clone())
                    .collect();
                prop_assert!(solutions.contains(&tuple), "{:?}", tuple);
            }
            SearchOutcome::Exhausted => prop_assert!(solutions.is_empty()),
        }
        // Search leaves the domains as the fixpoint left them.
        let after: Vec<_> = vars.iter().map(|&v| eng.present(v).to_vec()).collect();
        prop_assert_eq!(before, after);
        check_domain_invariants(&eng)?;
    }

    #[test]
    fn labeling_open_instances_respects_constraints(seed in any::<u64>()) {
        let mut inst = open_instance(seed);
        let vars = inst.vars.clone();
        if let SearchOutcome::Solution(assignment) = inst.engine.label(&vars) {
            let value = |v| assignment.iter().find(|(w, _)| *w == v).unwrap().1.clone();
            for (_, c) in inst.engine.constraints() {
                let tuple: Vec<ElementValue> = c.args().iter().map(|&v| value(v)).collect();
                prop_assert!(c.verify(&tuple));
            }
            for &v in &vars {
                let d = inst.engine.variable(v).def_domain().unwrap();
                prop_assert!(inst.engine.known(d).contains(&value(v)));
            }
        }
    }
}

#[test]
fn laziness_on_a_long_supply() {
    use icsp::{Builtin, ScriptedSource};
    let mut eng = Engine::new();
    let dx = eng.new_iset("dx", std::iter::empty(), true);
    let dy = eng.new_iset("dy", std::iter::empty(), true);
    eng.register_source(dx, ScriptedSource::new((1..=50).map(ElementValue::Int))).unwrap();
    eng.register_source(dy, ScriptedSource::new((1..=50).map(ElementValue::Int))).unwrap();
    let x = eng.new_fd_variable("x", dx);
    let y = eng.new_fd_variable("y", dy);
    eng.post_fd_constraint("eq", vec![x, y], Builtin::Eq).unwrap();
    eng.kac_fixpoint().unwrap();
    assert_eq!(eng.acquisition_count(dx), 1);
    assert_eq!(eng.acquisition_count(dy), 1);
    assert_eq!(eng.present(x), &[ElementValue::Int(1)]);
}
