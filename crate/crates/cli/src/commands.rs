use std::io::Write;
use std::path::Path;

use contextdl::chase::{chase, is_weakly_acyclic};
use contextdl::text::{parse_instance, parse_query_file, render_instance, render_query};
use contextdl::validator::{
    CompiledValidator, EgdMode, NaiveValidator, Options, Validation, Validator,
};
use contextdl::{validate_program, Degree};

use crate::manifest::{load_context, read, LoadError, Loaded, Manifest, ValidatorChoice};
use crate::output::{write_answers, write_explanation, Diagnostics};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LOAD: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Per-run settings from the command line; `None` defers to the query and
/// then the manifest.
#[derive(Clone, Debug, Default)]
pub struct QuerySettings {
    pub tau: Option<Degree>,
    pub explain: bool,
    pub validator: Option<ValidatorChoice>,
    pub egd_mode: Option<EgdMode>,
}

pub fn validators_for(choice: ValidatorChoice) -> Vec<Box<dyn Validator>> {
    match choice {
        ValidatorChoice::Naive => vec![Box::new(NaiveValidator)],
        ValidatorChoice::Compiled => vec![Box::new(CompiledValidator)],
        ValidatorChoice::Both => vec![Box::new(NaiveValidator), Box::new(CompiledValidator)],
    }
}

pub fn cmd_query(
    manifest: &Path,
    settings: &QuerySettings,
    out: &mut dyn Write,
    diag: &mut Diagnostics,
) -> i32 {
    let loaded = match Manifest::load(manifest).and_then(Manifest::load_all) {
        Ok(l) => l,
        Err(e) => {
            diag.error(e);
            return EXIT_LOAD;
        }
    };
    let choice = settings.validator.unwrap_or(loaded.manifest.validator);
    run_queries(&loaded, settings, &validators_for(choice), out, diag)
}

/// Runs every query of `loaded` through each validator. With more than one
/// validator the results must agree, otherwise the exit code is 3.
pub fn run_queries(
    loaded: &Loaded,
    settings: &QuerySettings,
    validators: &[Box<dyn Validator>],
    out: &mut dyn Write,
    diag: &mut Diagnostics,
) -> i32 {
    let program = &loaded.program;
    let options =
        Options::default().with_egd_mode(settings.egd_mode.unwrap_or(loaded.manifest.egd_mode));
    let several = program.queries.len() > 1;
    let mut status = EXIT_OK;
    for q in &program.queries {
        let tau = settings
            .tau
            .or(q.tau_in())
            .or(loaded.manifest.tau)
            .unwrap_or(Degree::ZERO);
        let mut results: Vec<(&str, Validation)> = Vec::new();
        for v in validators {
            match v.validate(q, tau, &program.context, &program.store, &options) {
                Ok(r) => results.push((v.name(), r)),
                Err(e) => {
                    diag.error(format_args!("{}: {e}", render_query(q)));
                    return EXIT_LOAD;
                }
            }
        }
        let Some((first_name, first)) = results.first() else {
            continue;
        };
        if let Some((name, other)) = results[1..].iter().find(|(_, r)| !first.agrees_with(r)) {
            diag.error(format_args!(
                "validators disagree on {}: {first_name} {:?}, {name} {:?}",
                render_query(q),
                first.scores(),
                other.scores()
            ));
            status = EXIT_MISMATCH;
            continue;
        }
        let written = (|| {
            if several {
                writeln!(out, "% {}", render_query(q))?;
            }
            write_answers(out, &first.answers)?;
            if settings.explain {
                write_explanation(out, first)?;
            }
            Ok::<_, std::io::Error>(())
        })();
        if let Err(e) = written {
            diag.error(e);
            return EXIT_LOAD;
        }
    }
    status
}

/// Loads every file of the manifest, reporting each one, then cross-checks.
pub fn cmd_check(manifest: &Path, out: &mut dyn Write, diag: &mut Diagnostics) -> i32 {
    let m = match Manifest::load(manifest) {
        Ok(m) => m,
        Err(e) => {
            diag.error(e);
            return EXIT_LOAD;
        }
    };
    let mut failed = false;
    let mut sources = Vec::new();
    for a in m.adapters() {
        match a.fetch() {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "ok {}: source {}, {} facts, confidence {}",
                    a.location(),
                    s.id(),
                    s.facts().len(),
                    s.tau()
                );
                sources.push(s);
            }
            Err(e) => {
                failed = true;
                diag.error(e);
            }
        }
    }
    let context = match m.load_context() {
        Ok(c) => {
            let name = m
                .context
                .as_ref()
                .map_or("(no context)".into(), |p| p.display().to_string());
            let _ = writeln!(
                out,
                "ok {name}: {} positive, {} negative, {} key constraints, weakly acyclic",
                c.positives().len(),
                c.negatives1().len() + c.negatives2().len(),
                c.egds().len()
            );
            Some(c)
        }
        Err(e) => {
            failed = true;
            diag.error(e);
            None
        }
    };
    let queries = match read(&m.queries).and_then(|t| {
        parse_query_file(&t).map_err(|error| LoadError::Parse {
            path: m.queries.clone(),
            error,
        })
    }) {
        Ok(qs) => {
            let noun = if qs.len() == 1 { "query" } else { "queries" };
            let _ = writeln!(out, "ok {}: {} {noun}", m.queries.display(), qs.len());
            Some(qs)
        }
        Err(e) => {
            failed = true;
            diag.error(e);
            None
        }
    };
    if let (false, Some(context), Some(queries)) = (failed, context, queries) {
        if let Err(e) = validate_program(sources, context, queries) {
            failed = true;
            diag.error(e);
        }
    }
    if failed {
        EXIT_LOAD
    } else {
        EXIT_OK
    }
}

/// Reports whether the positive constraints of a context file are weakly acyclic.
pub fn cmd_check_acyclicity(context: &Path, out: &mut dyn Write, diag: &mut Diagnostics) -> i32 {
    match load_context(context) {
        Ok(c) => {
            let w = is_weakly_acyclic(c.positives());
            let _ = writeln!(
                out,
                "weakly acyclic: {} positive constraints, {} dependency edges",
                c.positives().len(),
                w.graph.edges().len()
            );
            EXIT_OK
        }
        Err(e) => {
            diag.error(e);
            EXIT_LOAD
        }
    }
}

/// Prints the chase of an instance: atoms in canonical order, then the trace.
pub fn cmd_chase(
    context: &Path,
    instance: &Path,
    out: &mut dyn Write,
    diag: &mut Diagnostics,
) -> i32 {
    let loaded = load_context(context).and_then(|c| {
        let atoms = parse_instance(&read(instance)?).map_err(|error| LoadError::Parse {
            path: instance.to_path_buf(),
            error,
        })?;
        Ok((c, atoms))
    });
    let (c, atoms) = match loaded {
        Ok(x) => x,
        Err(e) => {
            diag.error(e);
            return EXIT_LOAD;
        }
    };
    let result = match chase(c.positives(), atoms) {
        Ok(r) => r,
        Err(e) => {
            diag.error(e);
            return EXIT_LOAD;
        }
    };
    let _ = write!(out, "{}", render_instance(result.atoms()));
    if !result.trace().is_empty() {
        let _ = writeln!(out, "% trace");
        for f in result.trace() {
            let _ = writeln!(out, "% {}: {} => {}", f.constraint, f.trigger, f.added);
        }
    }
    EXIT_OK
}
