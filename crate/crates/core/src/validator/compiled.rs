use std::collections::{BTreeSet, HashMap};

use super::checks::{check_fact, FactCheck};
use super::naive::{firings, producers};
use super::{trusted_index, Image, Options, Run, Validation, ValidationError};
use crate::chase::chase_with;
use crate::engine::{head_tuple, homomorphisms, MatchResult};
use crate::model::{
    Atom, ConjunctiveQuery, Context, Degree, Fact, FederatedStore, NullGen, Symbol, Term,
};

/// How a body variable's value relates to the rest of the body match.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Slot {
    /// A constant that some positive constraint or the query mentions.
    Known(Symbol),
    /// Same value as the `k`-th body variable (possibly itself).
    SameAs(usize),
}

/// The chase of a body image with one variable per class of equal values.
/// Because the positive constraints compare terms only for equality and
/// against their own constants, chasing the template and then substituting
/// the match gives the chase of the match image up to null names.
struct Template {
    atoms: Vec<Atom>,
    producers: Vec<Option<Symbol>>,
    firings: Vec<usize>,
}

struct Compiler<'q> {
    q: &'q ConjunctiveQuery,
    context: &'q Context,
    variables: Vec<Symbol>,
    known: BTreeSet<Symbol>,
    templates: HashMap<Vec<Slot>, Template>,
}

impl<'q> Compiler<'q> {
    fn new(q: &'q ConjunctiveQuery, context: &'q Context) -> Self {
        let mut known = BTreeSet::new();
        let positive_atoms = context
            .positives()
            .iter()
            .flat_map(|c| [c.body(), c.head()]);
        for a in positive_atoms.chain(q.body()) {
            known.extend(a.terms.iter().filter_map(Term::as_constant).cloned());
        }
        known.extend(
            q.comparisons()
                .iter()
                .filter_map(|c| c.right().as_constant())
                .cloned(),
        );
        Compiler {
            q,
            context,
            variables: q.body_variables(),
            known,
            templates: HashMap::new(),
        }
    }

    fn signature(&self, m: &MatchResult) -> Vec<Slot> {
        let values: Vec<Term> = self
            .variables
            .iter()
            .map(|v| m.homomorphism.apply(&Term::Variable(v.clone())))
            .collect();
        values
            .iter()
            .enumerate()
            .map(|(i, value)| match value {
                Term::Constant(c) if self.known.contains(c) => Slot::Known(c.clone()),
                _ => Slot::SameAs(values[..i].iter().position(|u| u == value).unwrap_or(i)),
            })
            .collect()
    }

    fn template(&mut self, signature: Vec<Slot>) -> &Template {
        let (q, context, variables) = (self.q, self.context, &self.variables);
        self.templates
            .entry(signature)
            .or_insert_with_key(|signature| {
                let symbolic = |t: &Term| match t {
                    Term::Variable(v) => {
                        let i = variables
                            .iter()
                            .position(|u| u == v)
                            .expect("body variable");
                        match &signature[i] {
                            Slot::Known(c) => Term::Constant(c.clone()),
                            Slot::SameAs(k) => Term::Variable(variables[*k].clone()),
                        }
                    }
                    other => other.clone(),
                };
                let body: Vec<Atom> = q.body().iter().map(|a| a.map_terms(symbolic)).collect();
                let ch = chase_with(context.positives(), body, &mut NullGen::new());
                Template {
                    atoms: ch.in_order().to_vec(),
                    producers: producers(&ch),
                    firings: firings(&ch, context),
                }
            })
    }
}

/// Same contract as [`super::valid_answers`], computed from one chase
/// template per equality pattern of the body match and memoized fact checks.
pub fn compiled_valid_answers(
    q: &ConjunctiveQuery,
    tau_in: Degree,
    context: &Context,
    store: &FederatedStore,
    options: &Options,
) -> Result<Validation, ValidationError> {
    let index = trusted_index(store, tau_in, context, options)?;
    let mut run = Run::new(&index, context, options);
    let mut compiler = Compiler::new(q, context);
    let mut memo: HashMap<Fact, FactCheck> = HashMap::new();
    let mut check = |l: &Fact| {
        memo.entry(l.clone())
            .or_insert_with(|| check_fact(l, context, &index, options.egd_mode))
            .clone()
    };
    for m in homomorphisms(q.body(), q.comparisons(), &index)? {
        let tuple = head_tuple(q, &m);
        run.candidate(&tuple, &m)?;
        let template = compiler.template(compiler.signature(&m));
        let atoms: Vec<Atom> = template
            .atoms
            .iter()
            .map(|a| m.homomorphism.apply_atom(a))
            .collect();
        let image = Image {
            atoms: &atoms,
            producers: &template.producers,
            firings: &template.firings,
        };
        run.image(&tuple, &m.homomorphism, image, &mut check)?;
    }
    Ok(run.finish(tau_in))
}
