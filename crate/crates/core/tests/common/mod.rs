//! Fixtures, seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use contextdl::chase::{chase, is_weakly_acyclic};
use contextdl::text::{parse_context_file, parse_query_file, parse_source_file};
use contextdl::validator::EgdMode;
use contextdl::{
    Atom, Comparison, ConjunctiveQuery, Constraint, Context, Degree, EgdConstraint, Fact,
    FederatedStore, NegativeConstraint, PositiveConstraint, SourceDatabase, Symbol, Term,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/univ")
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn univ_store() -> FederatedStore {
    let sources = ["s1.facts", "s2.facts", "s3.facts"]
        .iter()
        .map(|f| parse_source_file(&read(f)).unwrap())
        .collect();
    FederatedStore::new(sources).unwrap()
}

pub fn context(name: &str) -> Context {
    parse_context_file(&read(name)).unwrap()
}

pub fn foreign_professors() -> ConjunctiveQuery {
    parse_query_file(&read("foreign_professors.q"))
        .unwrap()
        .remove(0)
}

pub fn deg(s: &str) -> Degree {
    s.parse().unwrap()
}

pub fn tuples(answers: impl IntoIterator<Item = (Vec<Symbol>, Degree)>) -> Vec<(String, String)> {
    answers
        .into_iter()
        .map(|(t, d)| {
            let names: Vec<&str> = t.iter().map(Symbol::as_str).collect();
            (format!("({})", names.join(",")), d.to_string())
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DEGREES: [&str; 6] = ["0.5", "0.6", "0.7", "0.8", "0.9", "1.0"];

/// Predicates with fixed arities and a constant pool.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    pub predicates: Vec<(String, usize)>,
    pub constants: Vec<String>,
}

impl Vocabulary {
    pub fn random(
        rng: &mut ChaCha8Rng,
        predicates: usize,
        max_arity: usize,
        constants: usize,
    ) -> Self {
        Vocabulary {
            predicates: (0..predicates)
                .map(|i| (format!("p{i}"), rng.gen_range(1..=max_arity)))
                .collect(),
            constants: (0..constants).map(|i| format!("c{i}")).collect(),
        }
    }

    fn predicate(&self, rng: &mut ChaCha8Rng) -> (String, usize) {
        self.predicates.choose(rng).unwrap().clone()
    }

    fn constant(&self, rng: &mut ChaCha8Rng) -> Term {
        Term::constant(self.constants.choose(rng).unwrap())
    }

    pub fn fact(&self, rng: &mut ChaCha8Rng) -> Fact {
        let (p, n) = self.predicate(rng);
        Fact::new(Atom::new(
            p.as_str(),
            (0..n).map(|_| self.constant(rng)).collect(),
        ))
        .unwrap()
    }

    /// An atom over `vars`, with a constant at each position with probability `pc`.
    fn atom_of(&self, rng: &mut ChaCha8Rng, vars: &[&str], pc: f64) -> Atom {
        let pred = self.predicate(rng);
        self.atom(rng, pred, vars, pc)
    }

    fn atom(&self, rng: &mut ChaCha8Rng, pred: (String, usize), vars: &[&str], pc: f64) -> Atom {
        let terms = (0..pred.1)
            .map(|_| {
                if rng.gen_bool(pc) {
                    self.constant(rng)
                } else {
                    Term::var(vars.choose(rng).unwrap())
                }
            })
            .collect();
        Atom::new(pred.0.as_str(), terms)
    }
}

pub fn random_positive(rng: &mut ChaCha8Rng, v: &Vocabulary, id: &str) -> PositiveConstraint {
    let body = v.atom_of(rng, &["X0", "X1", "X2"], 0.15);
    let frontier: Vec<String> = body.variables().iter().map(|s| s.to_string()).collect();
    let mut head_vars: Vec<&str> = frontier.iter().map(String::as_str).collect();
    head_vars.extend(["Y0", "Y1"].iter().take(rng.gen_range(0..=2)));
    if head_vars.is_empty() {
        head_vars.push("Y0");
    }
    let head = v.atom_of(rng, &head_vars, 0.1);
    PositiveConstraint::new(id, body, head).unwrap()
}

/// Up to `max` positive constraints, keeping only those that leave the set weakly acyclic.
pub fn random_weakly_acyclic(
    rng: &mut ChaCha8Rng,
    v: &Vocabulary,
    max: usize,
) -> Vec<PositiveConstraint> {
    let mut out: Vec<PositiveConstraint> = Vec::new();
    let n = rng.gen_range(0..=max);
    for i in 0..n * 3 {
        if out.len() == n {
            break;
        }
        let c = random_positive(rng, v, &format!("r{i}"));
        out.push(c);
        if !is_weakly_acyclic(&out).holds() {
            out.pop();
        }
    }
    out
}

fn random_pair(rng: &mut ChaCha8Rng, v: &Vocabulary) -> (Atom, Atom) {
    let vars = ["X0", "X1", "X2", "X3"];
    loop {
        let a1 = v.atom_of(rng, &vars[..2], 0.1);
        let a2 = v.atom_of(rng, &vars[1..], 0.1);
        if !a1.variable_set().is_disjoint(&a2.variable_set()) {
            return (a1, a2);
        }
    }
}

pub fn random_negative(rng: &mut ChaCha8Rng, v: &Vocabulary, id: &str) -> NegativeConstraint {
    loop {
        let atoms = if rng.gen_bool(0.4) {
            vec![v.atom_of(rng, &["X0", "X1"], 0.2)]
        } else {
            let (a1, a2) = random_pair(rng, v);
            vec![a1, a2]
        };
        let vars: Vec<Symbol> = atoms.iter().flat_map(|a| a.variables()).collect();
        let mut comparisons = Vec::new();
        if !vars.is_empty() && rng.gen_bool(0.3) {
            let left = vars.choose(rng).unwrap().clone();
            let right = if rng.gen_bool(0.5) {
                v.constant(rng)
            } else {
                Term::Variable(vars.choose(rng).unwrap().clone())
            };
            comparisons.push(Comparison::new(left, right).unwrap());
        }
        if let Ok(c) = NegativeConstraint::new(id, atoms, comparisons) {
            return c;
        }
    }
}

pub fn random_egd(rng: &mut ChaCha8Rng, v: &Vocabulary, id: &str) -> EgdConstraint {
    loop {
        let (a1, a2) = random_pair(rng, v);
        let (v1, v2) = (a1.variables(), a2.variables());
        let pair = (
            v1.choose(rng).unwrap().clone(),
            v2.choose(rng).unwrap().clone(),
        );
        if let Ok(c) = EgdConstraint::new(id, a1, a2, vec![pair]) {
            return c;
        }
    }
}

pub fn random_context(rng: &mut ChaCha8Rng, v: &Vocabulary, max: usize) -> Context {
    let n = rng.gen_range(0..=max);
    let mut constraints: Vec<Constraint> = Vec::new();
    for i in 0..n {
        let id = format!("c{i}");
        let c = match rng.gen_range(0..4) {
            0 | 1 => Constraint::Positive(random_positive(rng, v, &id)),
            2 => Constraint::Negative(random_negative(rng, v, &id)),
            _ => Constraint::Egd(random_egd(rng, v, &id)),
        };
        constraints.push(c);
        if Context::new(constraints.clone()).is_err() {
            constraints.pop();
        }
    }
    Context::new(constraints).unwrap()
}

pub fn random_store(
    rng: &mut ChaCha8Rng,
    v: &Vocabulary,
    max_facts: usize,
    max_sources: usize,
) -> FederatedStore {
    let n_sources = rng.gen_range(1..=max_sources);
    let n_facts = rng.gen_range(1..=max_facts);
    let mut buckets: Vec<Vec<Fact>> = vec![Vec::new(); n_sources];
    for _ in 0..n_facts {
        let f = v.fact(rng);
        buckets[rng.gen_range(0..n_sources)].push(f);
    }
    let sources = buckets
        .into_iter()
        .enumerate()
        .map(|(i, facts)| {
            SourceDatabase::new(
                format!("S{}", i + 1),
                deg(DEGREES.choose(rng).unwrap()),
                facts,
            )
            .unwrap()
        })
        .collect();
    FederatedStore::new(sources).unwrap()
}

/// A query over predicates that occur in `store`.
pub fn random_query(
    rng: &mut ChaCha8Rng,
    v: &Vocabulary,
    store: &FederatedStore,
) -> ConjunctiveQuery {
    let preds: Vec<(String, usize)> = store
        .schema()
        .iter()
        .map(|(p, n)| (p.to_string(), n))
        .collect();
    let vars = ["X0", "X1", "X2", "X3"];
    loop {
        let body: Vec<Atom> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let p = preds.choose(rng).unwrap().clone();
                v.atom(rng, p, &vars, 0.1)
            })
            .collect();
        let bound: Vec<Symbol> = body
            .iter()
            .flat_map(|a| a.variables())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let head: Vec<Term> = bound
            .iter()
            .filter(|_| rng.gen_bool(0.6))
            .map(|s| Term::Variable(s.clone()))
            .collect();
        let mut comparisons = Vec::new();
        if !bound.is_empty() && rng.gen_bool(0.25) {
            let left = bound.choose(rng).unwrap().clone();
            let right = if rng.gen_bool(0.5) {
                v.constant(rng)
            } else {
                Term::Variable(bound.choose(rng).unwrap().clone())
            };
            comparisons.push(Comparison::new(left, right).unwrap());
        }
        let tau = rng.gen_bool(0.5).then(|| deg(DEGREES.choose(rng).unwrap()));
        if let Ok(q) = ConjunctiveQuery::new(Atom::new("q", head), body, comparisons, tau) {
            return q;
        }
    }
}

/// A randomized validation problem: store, context, query and threshold.
#[derive(Clone, Debug)]
pub struct Problem {
    pub store: FederatedStore,
    pub context: Context,
    pub query: ConjunctiveQuery,
    pub tau_in: Degree,
}

pub fn random_problem(seed: u64) -> Problem {
    let mut rng = rng(seed);
    let v = Vocabulary::random(&mut rng, 4, 3, 4);
    let store = random_store(&mut rng, &v, 20, 3);
    let context = random_context(&mut rng, &v, 6);
    let query = random_query(&mut rng, &v, &store);
    let tau_in = deg(["0.0", "0.5", "0.6", "0.7", "0.8"]
        .choose(&mut rng)
        .unwrap());
    Problem {
        store,
        context,
        query,
        tau_in,
    }
}

/// A weakly acyclic rule set (up to 8 rules over predicates of arity up to 4)
/// and an instance of up to 30 facts.
pub fn random_rule_set_and_instance(seed: u64) -> (Vec<PositiveConstraint>, Vec<Atom>) {
    let mut r = rng(seed);
    let v = Vocabulary::random(&mut r, 5, 4, 6);
    let rules = random_weakly_acyclic(&mut r, &v, 8);
    let n = r.gen_range(0..=30);
    let instance = (0..n).map(|_| v.fact(&mut r).atom().clone()).collect();
    (rules, instance)
}

const ODD: [&str; 8] = [
    "Bob",
    "x y",
    "_tmp",
    "42",
    "3.5",
    "say \"hi\"",
    "naïve",
    "a\\b",
];

/// Sources, context and query over constants that need quoting or escaping.
pub fn odd_program(seed: u64) -> (Vec<SourceDatabase>, Context, ConjunctiveQuery) {
    let mut r = rng(seed);
    let mut v = Vocabulary::random(&mut r, 4, 3, 0);
    v.constants = ODD
        .iter()
        .map(|s| s.to_string())
        .chain(["c0".into(), "Zed".into()])
        .collect();
    let store = random_store(&mut r, &v, 12, 3);
    let context = random_context(&mut r, &v, 6);
    let query = random_query(&mut r, &v, &store);
    (store.sources().to_vec(), context, query)
}

/// Trusted facts with the best degree among the sources admitted at `tau_in`.
pub fn trusted(store: &FederatedStore, tau_in: Degree) -> BTreeMap<Fact, Degree> {
    let mut out: BTreeMap<Fact, Degree> = BTreeMap::new();
    for s in store.sources().iter().filter(|s| s.tau() >= tau_in) {
        for f in s.facts() {
            let d = out.entry(f.clone()).or_insert(s.tau());
            *d = (*d).max(s.tau());
        }
    }
    out
}

fn term_slots(atoms: &[Atom]) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    atoms
        .iter()
        .flat_map(|a| a.terms.iter())
        .filter(|t| !t.is_constant() && seen.insert((*t).clone()))
        .cloned()
        .collect()
}

fn ground(t: &Term, h: &BTreeMap<Term, Symbol>) -> Option<Symbol> {
    match t {
        Term::Constant(c) => Some(c.clone()),
        other => h.get(other).cloned(),
    }
}

/// Every assignment of the pattern's variables and nulls to the active domain
/// under which every atom is a fact and every comparison holds.
pub fn brute_force_matches(
    atoms: &[Atom],
    comparisons: &[(Term, Term)],
    facts: &BTreeSet<Fact>,
) -> BTreeSet<BTreeMap<Term, Symbol>> {
    let mut adom: BTreeSet<Symbol> = facts.iter().flat_map(|f| f.args().cloned()).collect();
    for a in atoms {
        adom.extend(a.terms.iter().filter_map(Term::as_constant).cloned());
    }
    for (x, y) in comparisons {
        adom.extend([x, y].into_iter().filter_map(Term::as_constant).cloned());
    }
    let adom: Vec<Symbol> = adom.into_iter().collect();
    let mut slots = term_slots(atoms);
    for (x, y) in comparisons {
        for t in [x, y] {
            if !t.is_constant() && !slots.contains(t) {
                slots.push(t.clone());
            }
        }
    }
    let mut out = BTreeSet::new();
    let total = adom
        .len()
        .checked_pow(slots.len() as u32)
        .expect("small search space");
    for mut code in 0..total {
        let mut h = BTreeMap::new();
        for s in &slots {
            h.insert(s.clone(), adom[code % adom.len()].clone());
            code /= adom.len();
        }
        let atoms_hold = atoms.iter().all(|a| {
            let args: Vec<Symbol> = a.terms.iter().map(|t| ground(t, &h).unwrap()).collect();
            facts.contains(&Fact::from_constants(a.predicate.as_str(), &args))
        });
        let comparisons_hold = comparisons
            .iter()
            .all(|(x, y)| ground(x, &h) == ground(y, &h));
        if atoms_hold && comparisons_hold {
            out.insert(h);
        }
    }
    out
}

/// All extensions of `h` mapping every atom of `atoms` onto some key of `facts`,
/// by plain recursion over the atoms.
fn extend_all(
    atoms: &[Atom],
    facts: &BTreeMap<Fact, Degree>,
    h: BTreeMap<Term, Symbol>,
    out: &mut Vec<BTreeMap<Term, Symbol>>,
) {
    let Some((first, rest)) = atoms.split_first() else {
        out.push(h);
        return;
    };
    for f in facts.keys() {
        if f.predicate() != &first.predicate || f.arity() != first.arity() {
            continue;
        }
        let mut g = h.clone();
        let ok = first.terms.iter().zip(f.args()).all(|(t, c)| match t {
            Term::Constant(k) => k == c,
            other => g.entry(other.clone()).or_insert_with(|| c.clone()) == c,
        });
        if ok {
            extend_all(rest, facts, g, out);
        }
    }
}

fn binds(pattern: &Atom, fact: &Fact) -> Option<BTreeMap<Term, Symbol>> {
    if pattern.predicate != *fact.predicate() || pattern.arity() != fact.arity() {
        return None;
    }
    let mut h = BTreeMap::new();
    for (t, c) in pattern.terms.iter().zip(fact.args()) {
        match t {
            Term::Constant(k) if k != c => return None,
            Term::Constant(_) => {}
            other => {
                if h.entry(other.clone()).or_insert_with(|| c.clone()) != c {
                    return None;
                }
            }
        }
    }
    Some(h)
}

fn comparisons_hold(cs: &[Comparison], h: &BTreeMap<Term, Symbol>) -> bool {
    cs.iter()
        .all(|c| ground(&Term::Variable(c.left().clone()), h) == ground(c.right(), h))
}

fn violates(
    g: &BTreeSet<Fact>,
    ctx: &Context,
    facts: &BTreeMap<Fact, Degree>,
    mode: EgdMode,
) -> bool {
    for l in g {
        for c in ctx.negatives1() {
            if binds(&c.atoms()[0], l).is_some_and(|nu| comparisons_hold(c.comparisons(), &nu)) {
                return true;
            }
        }
        for c in ctx.negatives2() {
            for i in 0..2 {
                let Some(nu) = binds(&c.atoms()[i], l) else {
                    continue;
                };
                let mut ext = Vec::new();
                extend_all(&c.atoms()[1 - i..2 - i], facts, nu, &mut ext);
                if ext.iter().any(|h| comparisons_hold(c.comparisons(), h)) {
                    return true;
                }
            }
        }
        for c in ctx.egds() {
            for i in 0..2 {
                let Some(nu) = binds(c.side(i), l) else {
                    continue;
                };
                let mut ext = Vec::new();
                extend_all(
                    std::slice::from_ref(c.side(1 - i)),
                    facts,
                    nu.clone(),
                    &mut ext,
                );
                for (mine, theirs) in c.oriented_equalities(i) {
                    let expected = nu[&Term::Variable(mine)].clone();
                    let values: BTreeSet<Symbol> = ext
                        .iter()
                        .map(|h| h[&Term::Variable(theirs.clone())].clone())
                        .collect();
                    let bad = values.iter().any(|x| *x != expected)
                        || (mode == EgdMode::Strict && values.is_empty());
                    if bad {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Reference valid answers: brute-force body matches, library chase, recursive
/// grounding search and direct constraint checks. Returns tuple -> tau_out.
pub fn reference_valid(p: &Problem, mode: EgdMode) -> BTreeMap<Vec<Symbol>, Degree> {
    let facts = trusted(&p.store, p.tau_in);
    let fact_set: BTreeSet<Fact> = facts.keys().cloned().collect();
    let pairs: Vec<(Term, Term)> = p
        .query
        .comparisons()
        .iter()
        .map(|c| (Term::Variable(c.left().clone()), c.right().clone()))
        .collect();
    let mut best: BTreeMap<Vec<Symbol>, Degree> = BTreeMap::new();
    for h in brute_force_matches(p.query.body(), &pairs, &fact_set) {
        let tuple: Vec<Symbol> = p
            .query
            .head()
            .terms
            .iter()
            .map(|t| ground(t, &h).unwrap())
            .collect();
        let j: Vec<Atom> = p
            .query
            .body()
            .iter()
            .map(|a| a.map_terms(|t| Term::Constant(ground(t, &h).unwrap())))
            .collect();
        let ch: Vec<Atom> = chase(p.context.positives(), j)
            .unwrap()
            .atoms()
            .iter()
            .cloned()
            .collect();
        let mut groundings = Vec::new();
        extend_all(&ch, &facts, BTreeMap::new(), &mut groundings);
        for mu in groundings {
            let g: BTreeSet<Fact> = ch
                .iter()
                .map(|a| {
                    let args: Vec<Symbol> =
                        a.terms.iter().map(|t| ground(t, &mu).unwrap()).collect();
                    Fact::from_constants(a.predicate.as_str(), &args)
                })
                .collect();
            if violates(&g, &p.context, &facts, mode) {
                continue;
            }
            let tau = g.iter().map(|f| facts[f]).min().unwrap();
            if tau < p.tau_in {
                continue;
            }
            let e = best.entry(tuple.clone()).or_insert(tau);
            *e = (*e).max(tau);
        }
    }
    best
}

/// Reference plain evaluation: tuple set of the query over trusted facts.
pub fn reference_evaluate(
    q: &ConjunctiveQuery,
    store: &FederatedStore,
    tau_in: Degree,
) -> BTreeSet<Vec<Symbol>> {
    let facts: BTreeSet<Fact> = trusted(store, tau_in).into_keys().collect();
    let pairs: Vec<(Term, Term)> = q
        .comparisons()
        .iter()
        .map(|c| (Term::Variable(c.left().clone()), c.right().clone()))
        .collect();
    brute_force_matches(q.body(), &pairs, &facts)
        .into_iter()
        .map(|h| {
            q.head()
                .terms
                .iter()
                .map(|t| ground(t, &h).unwrap())
                .collect()
        })
        .collect()
}
