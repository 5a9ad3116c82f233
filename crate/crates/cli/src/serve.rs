use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use contextdl::text::{parse_query, ParseError};
use contextdl::validator::{CandidateStatus, Options, Validation, Violation};
use contextdl::{Degree, ScoredAnswer, Symbol, WitnessFact};
use serde::{Deserialize, Serialize};

use crate::commands::validators_for;
use crate::manifest::Loaded;

/// A degree sent either as a JSON number or a decimal string.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DegreeInput {
    Number(f64),
    Text(String),
}

impl DegreeInput {
    fn degree(&self) -> Result<Degree, String> {
        match self {
            DegreeInput::Number(x) => Degree::from_f64(*x).map_err(|e| e.to_string()),
            DegreeInput::Text(s) => s.parse().map_err(|e: contextdl::DegreeError| e.to_string()),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    pub query: String,
    pub tau_in: Option<DegreeInput>,
    #[serde(default)]
    pub explain: bool,
}

#[derive(Debug, Serialize)]
pub struct AnswerJson {
    pub tuple: Vec<String>,
    pub tau: String,
}

#[derive(Debug, Serialize)]
pub struct FactJson {
    pub fact: String,
    pub sources: Vec<String>,
    pub degree: String,
}

#[derive(Debug, Serialize)]
pub struct ViolationJson {
    pub condition: String,
    pub constraint: String,
    pub atom: String,
    pub evidence: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CandidateJson {
    pub tuple: Vec<String>,
    pub provisional: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<FactJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationJson>,
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub tau_in: String,
    pub candidates: Vec<CandidateJson>,
}

#[derive(Debug, Serialize)]
pub struct QueryResponse {
    pub answers: Vec<AnswerJson>,
    pub report: Option<ReportJson>,
}

#[derive(Debug, Serialize)]
pub struct ErrorJson {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SourceJson {
    pub id: String,
    pub tau: String,
    pub facts: usize,
}

#[derive(Debug, Serialize)]
pub struct ContextJson {
    pub positive: usize,
    pub negative: usize,
    pub key: usize,
}

#[derive(Debug, Serialize)]
pub struct HealthJson {
    pub status: &'static str,
    pub sources: Vec<SourceJson>,
    pub context: ContextJson,
}

fn strings(tuple: &[Symbol]) -> Vec<String> {
    tuple.iter().map(Symbol::to_string).collect()
}

fn fact_json(w: &WitnessFact) -> FactJson {
    FactJson {
        fact: w.fact.to_string(),
        sources: strings(&w.sources.iter().cloned().collect::<Vec<_>>()),
        degree: w.degree.to_string(),
    }
}

fn violation_json(v: &Violation) -> ViolationJson {
    ViolationJson {
        condition: v.condition.letter().to_string(),
        constraint: v.constraint.to_string(),
        atom: v.atom.to_string(),
        evidence: v.evidence.iter().map(ToString::to_string).collect(),
    }
}

fn answers_json(answers: &[ScoredAnswer]) -> Vec<AnswerJson> {
    let mut sorted: Vec<&ScoredAnswer> = answers.iter().collect();
    sorted.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    sorted
        .into_iter()
        .map(|a| AnswerJson {
            tuple: strings(&a.tuple),
            tau: a.tau_out.to_string(),
        })
        .collect()
}

fn report_json(v: &Validation, tau_in: Degree) -> ReportJson {
    let mut candidates: Vec<_> = v.report.candidates.iter().collect();
    candidates.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    let candidates = candidates
        .into_iter()
        .map(|c| {
            let mut j = CandidateJson {
                tuple: strings(&c.tuple),
                provisional: c.provisional.to_string(),
                status: "valid",
                tau: None,
                witness: Vec::new(),
                violations: Vec::new(),
            };
            match &c.status {
                CandidateStatus::Valid { tau_out, witnesses } => {
                    j.tau = Some(tau_out.to_string());
                    j.witness = witnesses[0].facts.iter().map(fact_json).collect();
                }
                CandidateStatus::BelowThreshold(tau) => {
                    j.status = "below_threshold";
                    j.tau = Some(tau.to_string());
                }
                CandidateStatus::Rejected(vs) => {
                    j.status = "rejected";
                    j.violations = vs.iter().map(violation_json).collect();
                }
            }
            j
        })
        .collect();
    ReportJson {
        tau_in: tau_in.to_string(),
        candidates,
    }
}

fn bad_request(error: String) -> Response {
    let body = ErrorJson {
        error,
        line: None,
        col: None,
    };
    (StatusCode::BAD_REQUEST, Json(body)).into_response()
}

fn parse_failure(e: ParseError) -> Response {
    let body = ErrorJson {
        error: e.kind.to_string(),
        line: Some(e.line),
        col: Some(e.col),
    };
    (StatusCode::BAD_REQUEST, Json(body)).into_response()
}

async fn query(
    State(loaded): State<Arc<Loaded>>,
    req: Result<Json<QueryRequest>, JsonRejection>,
) -> Response {
    let Json(req) = match req {
        Ok(r) => r,
        Err(e) => return bad_request(e.body_text()),
    };
    let q = match parse_query(&req.query) {
        Ok(q) => q,
        Err(e) => return parse_failure(e),
    };
    let tau = match req.tau_in.as_ref().map(DegreeInput::degree).transpose() {
        Ok(t) => t
            .or(q.tau_in())
            .or(loaded.manifest.tau)
            .unwrap_or(Degree::ZERO),
        Err(e) => return bad_request(format!("tau_in: {e}")),
    };
    let program = &loaded.program;
    let options = Options::default().with_egd_mode(loaded.manifest.egd_mode);
    let mut results = Vec::new();
    for v in validators_for(loaded.manifest.validator) {
        match v.validate(&q, tau, &program.context, &program.store, &options) {
            Ok(r) => results.push(r),
            Err(e) => return bad_request(e.to_string()),
        }
    }
    if results.windows(2).any(|w| !w[0].agrees_with(&w[1])) {
        let body = ErrorJson {
            error: "validators disagree".into(),
            line: None,
            col: None,
        };
        return (StatusCode::INTERNAL_SERVER_ERROR, Json(body)).into_response();
    }
    let v = &results[0];
    let body = QueryResponse {
        answers: answers_json(&v.answers),
        report: req.explain.then(|| report_json(v, tau)),
    };
    Json(body).into_response()
}

async fn health(State(loaded): State<Arc<Loaded>>) -> Json<HealthJson> {
    let p = &loaded.program;
    Json(HealthJson {
        status: "ok",
        sources: p
            .store
            .sources()
            .iter()
            .map(|s| SourceJson {
                id: s.id().to_string(),
                tau: s.tau().to_string(),
                facts: s.facts().len(),
            })
            .collect(),
        context: ContextJson {
            positive: p.context.positives().len(),
            negative: p.context.negatives1().len() + p.context.negatives2().len(),
            key: p.context.egds().len(),
        },
    })
}

pub fn router(loaded: Arc<Loaded>) -> Router {
    Router::new()
        .route("/query", post(query))
        .route("/health", get(health))
        .with_state(loaded)
}

pub async fn serve(loaded: Loaded, bind: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(loaded))).await
}
