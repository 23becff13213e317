//! Seeded random instance generators.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ClosedCsp;
use crate::acquisition::ScriptedSource;
use crate::element::ElementValue;
use crate::engine::Engine;
use crate::error::Failure;
use crate::fd::{Builtin, VarId};
use crate::iset::{IsetConstraint, IsetId, IsetStore};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sample of distinct integers from `0..universe`, in random order.
fn subset(rng: &mut impl Rng, universe: i64, min: usize, max: usize) -> Vec<ElementValue> {
    let mut all: Vec<i64> = (0..universe).collect();
    all.shuffle(rng);
    let max = max.min(all.len());
    let n = rng.gen_range(min.min(max)..=max);
    all.into_iter().take(n).map(ElementValue::Int).collect()
}

fn comparison(rng: &mut impl Rng) -> Builtin {
    *Builtin::COMPARISONS.choose(rng).expect("non-empty")
}

#[derive(Debug, Clone)]
pub struct CspShape {
    pub max_vars: usize,
    pub max_domain: usize,
    pub universe: i64,
    pub max_constraints: usize,
}

impl Default for CspShape {
    fn default() -> Self {
        CspShape {
            max_vars: 5,
            max_domain: 5,
            universe: 5,
            max_constraints: 6,
        }
    }
}

/// A closed instance with non-empty domains and binary comparison
/// constraints between distinct variables.
pub fn closed_csp(seed: u64, shape: &CspShape) -> ClosedCsp {
    let mut rng = rng(seed);
    let mut csp = ClosedCsp::default();
    let n = rng.gen_range(1..=shape.max_vars);
    for _ in 0..n {
        csp.add_var(subset(&mut rng, shape.universe, 1, shape.max_domain));
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=shape.max_constraints) {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let builtin = comparison(&mut rng);
            csp.add_constraint(builtin.to_string(), vec![a, b], builtin);
        }
    }
    csp
}

/// An open-domain instance: every variable has its own open I-Set with a few
/// known elements and a scripted source for more.
pub struct OpenInstance {
    pub engine: Engine,
    pub vars: Vec<VarId>,
    /// Scripted elements available to each I-Set.
    pub supply: Vec<(IsetId, usize)>,
}

pub fn open_instance(seed: u64) -> OpenInstance {
    let mut rng = rng(seed);
    let mut engine = Engine::new();
    let n = rng.gen_range(1..=4);
    let mut vars = Vec::new();
    let mut supply = Vec::new();
    for i in 0..n {
        let pool = subset(&mut rng, 8, 0, 6);
        let split = rng.gen_range(0..=pool.len().min(2));
        let iset = engine.new_iset(format!("d{i}"), pool[..split].iter().cloned(), true);
        let script = pool[split..].to_vec();
        supply.push((iset, script.len()));
        engine
            .register_source(iset, ScriptedSource::new(script))
            .expect("fresh I-Set");
        vars.push(engine.new_fd_variable(format!("v{i}"), iset));
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=5) {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let builtin = comparison(&mut rng);
            engine
                .post_fd_constraint(builtin.to_string(), vec![vars[a], vars[b]], builtin)
                .expect("binary");
        }
    }
    if n >= 3 && rng.gen_bool(0.3) {
        let k = rng.gen_range(0..12);
        let builtin = Builtin::SumEqConst(k);
        engine
            .post_fd_constraint(builtin.to_string(), vec![vars[0], vars[1], vars[2]], builtin)
            .expect("ternary");
    }
    OpenInstance {
        engine,
        vars,
        supply,
    }
}

/// The five kinds of I-Set constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Member,
    Union,
    Intersection,
    Difference,
    Inclusion,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Member, Kind::Union, Kind::Intersection, Kind::Difference, Kind::Inclusion];

    fn build(self, sets: &[IsetId], element: ElementValue) -> IsetConstraint {
        match self {
            Kind::Member => IsetConstraint::Member(element, sets[0]),
            Kind::Union => IsetConstraint::Union(sets[0], sets[1], sets[2]),
            Kind::Intersection => IsetConstraint::Intersection(sets[0], sets[1], sets[2]),
            Kind::Difference => IsetConstraint::Difference(sets[0], sets[1], sets[2]),
            Kind::Inclusion => IsetConstraint::Inclusion(sets[0], sets[1]),
        }
    }
}

/// Three sets over a small universe and one constraint relating them.
#[derive(Debug, Clone)]
pub struct AlgebraCase {
    pub contents: Vec<BTreeSet<ElementValue>>,
    pub constraint: IsetConstraint,
}

/// A set-algebra case for `kind`. Half of the time the last argument is made
/// to satisfy the relation so both verdicts are well represented.
pub fn algebra_case(seed: u64, kind: Kind) -> AlgebraCase {
    let mut rng = rng(seed);
    let universe = rng.gen_range(1..=6);
    let mut contents: Vec<BTreeSet<ElementValue>> = (0..3)
        .map(|_| subset(&mut rng, universe, 0, 6).into_iter().collect())
        .collect();
    let element = ElementValue::Int(rng.gen_range(0..universe));
    let ids = [IsetId(0), IsetId(1), IsetId(2)];
    let constraint = kind.build(&ids, element.clone());
    if rng.gen_bool(0.5) {
        let lookup = |s: IsetId| contents[s.0].clone();
        match super::algebra_result(&constraint, lookup) {
            Some(result) => contents[2] = result,
            None if kind == Kind::Member => {
                contents[0].insert(element);
            }
            None => {
                let extra = contents[0].clone();
                contents[1].extend(extra);
            }
        }
    }
    AlgebraCase {
        contents,
        constraint,
    }
}

/// An I-Set-only instance for order-independence checks.
#[derive(Debug, Clone)]
pub struct IsetInstance {
    /// Initial contents and openness of each set.
    pub initial: Vec<(Vec<ElementValue>, bool)>,
    pub constraints: Vec<IsetConstraint>,
    pub insertions: Vec<(IsetId, ElementValue)>,
}

/// Final state of an [`IsetInstance`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsetRun {
    Failed,
    Quiescent {
        known: Vec<BTreeSet<ElementValue>>,
        closed: Vec<bool>,
    },
}

pub fn iset_instance(seed: u64) -> IsetInstance {
    let mut rng = rng(seed);
    let n = rng.gen_range(2..=5);
    let universe = 6;
    let initial: Vec<(Vec<ElementValue>, bool)> = (0..n)
        .map(|_| (subset(&mut rng, universe, 0, 3), !rng.gen_bool(0.15)))
        .collect();
    // Insertions target sets open at creation; closed ones would just fail.
    let open: Vec<usize> = (0..n).filter(|&i| initial[i].1).collect();
    let constraints = (0..rng.gen_range(1..=4))
        .map(|_| {
            let kind = *Kind::ALL.choose(&mut rng).expect("non-empty");
            let sets: Vec<IsetId> = (0..3).map(|_| IsetId(rng.gen_range(0..n))).collect();
            kind.build(&sets, ElementValue::Int(rng.gen_range(0..universe)))
        })
        .collect();
    let count = if open.is_empty() { 0 } else { rng.gen_range(0..=6) };
    let insertions = (0..count)
        .map(|_| {
            let s = open[rng.gen_range(0..open.len())];
            (IsetId(s), ElementValue::Int(rng.gen_range(0..universe)))
        })
        .collect();
    IsetInstance {
        initial,
        constraints,
        insertions,
    }
}

impl IsetInstance {
    /// Creates the sets, then posts the constraints in `constraint_order`,
    /// then performs the insertions in `insertion_order`. With
    /// `insert_first` the insertions come before the constraints.
    pub fn run(&self, constraint_order: &[usize], insertion_order: &[usize], insert_first: bool) -> IsetRun {
        let mut store = IsetStore::new();
        for (i, (known, open)) in self.initial.iter().enumerate() {
            store.new_iset(format!("s{i}"), known.iter().cloned(), *open);
        }
        let result = (|| -> Result<(), Failure> {
            store.fixpoint()?;
            let post = |store: &mut IsetStore| -> Result<(), Failure> {
                for &i in constraint_order {
                    store.post(self.constraints[i].clone())?;
                    store.fixpoint()?;
                }
                Ok(())
            };
            let insert = |store: &mut IsetStore| -> Result<(), Failure> {
                for &i in insertion_order {
                    let (s, e) = &self.insertions[i];
                    store.ensure_member(*s, e.clone())?;
                    store.fixpoint()?;
                }
                Ok(())
            };
            if insert_first {
                insert(&mut store)?;
                post(&mut store)
            } else {
                post(&mut store)?;
                insert(&mut store)
            }
        })();
        match result {
            Err(_) => IsetRun::Failed,
            Ok(()) => IsetRun::Quiescent {
                known: store.ids().map(|s| store.known(s)).collect(),
                closed: store.ids().map(|s| store.is_closed(s)).collect(),
            },
        }
    }

    /// Runs the instance in its natural order and under `permutations`
    /// random reorderings, returning every outcome.
    pub fn permuted_runs(&self, seed: u64, permutations: usize) -> Vec<IsetRun> {
        let mut rng = rng(seed ^ 0x5eed);
        let mut cs: Vec<usize> = (0..self.constraints.len()).collect();
        let mut ins: Vec<usize> = (0..self.insertions.len()).collect();
        let mut runs = vec![self.run(&cs, &ins, false)];
        for _ in 0..permutations {
            cs.shuffle(&mut rng);
            ins.shuffle(&mut rng);
            runs.push(self.run(&cs, &ins, rng.gen_bool(0.5)));
        }
        runs
    }
}
