use super::checks::check_fact;
use super::{
    aggregate, distinct_facts, trusted_index, Image, Options, Run, Validation, ValidationError,
};
use crate::chase::{chase_with, ChaseResult};
use crate::engine::{evaluate_on, head_tuple, homomorphisms};
use crate::model::{
    ConjunctiveQuery, Context, Degree, FederatedStore, NullGen, ScoredAnswer, Symbol, Witness,
};

/// Answers over the trusted facts, each with its best provisional degree:
/// the aggregate of its body facts' degrees, maximized over body matches.
pub fn candidate_answers(
    q: &ConjunctiveQuery,
    tau_in: Degree,
    store: &FederatedStore,
    options: &Options,
) -> Result<Vec<ScoredAnswer>, ValidationError> {
    let index = trusted_index(store, tau_in, &Context::empty(), options)?;
    let mut out = Vec::new();
    for (tuple, matches) in evaluate_on(q, &index)? {
        let mut best: Option<ScoredAnswer> = None;
        for m in matches {
            let facts = distinct_facts(&m.facts);
            let tau_out = aggregate(options, &facts)?;
            if best.as_ref().is_none_or(|b| tau_out > b.tau_out) {
                best = Some(ScoredAnswer {
                    tuple: tuple.clone(),
                    tau_out,
                    witness: Witness {
                        body_match: m.homomorphism,
                        facts,
                        ..Witness::default()
                    },
                });
            }
        }
        out.extend(best.filter(|b| tau_in <= b.tau_out));
    }
    Ok(out)
}

pub(crate) fn producers(ch: &ChaseResult) -> Vec<Option<Symbol>> {
    std::iter::repeat_n(None, ch.input_len())
        .chain(ch.trace().iter().map(|f| Some(f.constraint.clone())))
        .collect()
}

pub(crate) fn firings(ch: &ChaseResult, context: &Context) -> Vec<usize> {
    context
        .positives()
        .iter()
        .map(|c| {
            ch.trace()
                .iter()
                .filter(|f| &f.constraint == c.id())
                .count()
        })
        .collect()
}

/// Valid answers by chasing each body match image from scratch and checking
/// every constraint against every witness fact.
pub fn valid_answers(
    q: &ConjunctiveQuery,
    tau_in: Degree,
    context: &Context,
    store: &FederatedStore,
    options: &Options,
) -> Result<Validation, ValidationError> {
    let index = trusted_index(store, tau_in, context, options)?;
    let mut run = Run::new(&index, context, options);
    for m in homomorphisms(q.body(), q.comparisons(), &index)? {
        let tuple = head_tuple(q, &m);
        run.candidate(&tuple, &m)?;
        let j = m.facts.iter().map(|f| f.fact.atom().clone()).collect();
        let ch = chase_with(context.positives(), j, &mut NullGen::new());
        let image = Image {
            atoms: ch.in_order(),
            producers: &producers(&ch),
            firings: &firings(&ch, context),
        };
        run.image(&tuple, &m.homomorphism, image, &mut |l| {
            check_fact(l, context, &index, options.egd_mode)
        })?;
    }
    Ok(run.finish(tau_in))
}
