//! Workloads for comparing the naive and compiled validators.

use contextdl::text::{parse_context_file, parse_query};
use contextdl::{ConjunctiveQuery, Context, Degree, Fact, FederatedStore, SourceDatabase};

pub const UNIV_CONTEXT: &str = include_str!("../../../data/univ/univ.ctx");

pub fn univ_context() -> Context {
    parse_context_file(UNIV_CONTEXT).expect("fixture context parses")
}

pub fn foreign_professors() -> ConjunctiveQuery {
    parse_query("q(X) :- professor(X), bornIn(X, Y), foreignCountry(Y)").expect("query parses")
}

fn fact(p: &str, args: &[String]) -> Fact {
    Fact::from_constants(p, args)
}

/// A university with `n` professors spread over three sources of decreasing
/// confidence. Most professors pass every constraint; some teach a course
/// they also take, some lack a government-employee fact, and some courses
/// are offered nowhere.
pub fn synthetic_university(n: usize) -> FederatedStore {
    let (mut s1, mut s2, mut s3) = (Vec::new(), Vec::new(), Vec::new());
    let countries = 6;
    for c in 0..countries {
        if c != 0 {
            s1.push(fact("foreignCountry", &[format!("Country{c}")]));
        }
    }
    let courses = n / 3 + 1;
    for c in 0..courses {
        if c % 7 != 0 {
            s2.push(fact(
                "offeredCourseAt",
                &[format!("Course{c}"), format!("Dep{}", c % 5)],
            ));
        }
    }
    for i in 0..n {
        let p = format!("Prof{i}");
        let course = format!("Course{}", i % courses);
        let target = if i % 4 == 3 { &mut s3 } else { &mut s1 };
        target.push(fact("professor", std::slice::from_ref(&p)));
        target.push(fact(
            "bornIn",
            &[p.clone(), format!("Country{}", i % countries)],
        ));
        s2.push(fact("teacherOf", &[p.clone(), course.clone()]));
        if i % 5 != 4 {
            s3.push(fact("employeeGov", std::slice::from_ref(&p)));
        }
        if i % 11 == 5 {
            s2.push(fact("takesCourse", &[p.clone(), course]));
        }
        if i % 3 == 0 {
            let dep = format!("Dep{}", i % 5);
            s2.push(fact(
                "worksFor",
                &[p.clone(), dep.clone(), "Org".to_string()],
            ));
            let head = if i % 9 == 0 {
                "Elsewhere".to_string()
            } else {
                dep
            };
            s3.push(fact("headOf", &[p, head]));
        }
    }
    let degree = |s: &str| s.parse::<Degree>().expect("valid degree");
    FederatedStore::new(vec![
        SourceDatabase::new("S1", degree("0.95"), s1).expect("source"),
        SourceDatabase::new("S2", degree("0.8"), s2).expect("source"),
        SourceDatabase::new("S3", degree("0.7"), s3).expect("source"),
    ])
    .expect("distinct source ids")
}
