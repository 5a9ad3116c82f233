use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use contextdl::text::{parse_context_file, parse_query_file, ParseError};
use contextdl::validator::EgdMode;
use contextdl::{validate_program, Context, Degree, LoadReport, ModelError, Program};
use serde::Deserialize;

use crate::sources::{FileSource, SourceAdapter};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
    #[error("{}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub(crate) fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ValidatorChoice {
    Naive,
    #[default]
    Compiled,
    Both,
}

impl fmt::Display for ValidatorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValidatorChoice::Naive => "naive",
            ValidatorChoice::Compiled => "compiled",
            ValidatorChoice::Both => "both",
        })
    }
}

/// A degree written either as a TOML string or a number.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawDegree {
    Text(String),
    Number(f64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    sources: Vec<PathBuf>,
    context: Option<PathBuf>,
    queries: PathBuf,
    tau: Option<RawDegree>,
    egd_mode: Option<String>,
    validator: Option<ValidatorChoice>,
}

/// What to load and how to validate. Paths are resolved against the
/// manifest's directory.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub path: PathBuf,
    pub sources: Vec<PathBuf>,
    pub context: Option<PathBuf>,
    pub queries: PathBuf,
    pub tau: Option<Degree>,
    pub egd_mode: EgdMode,
    pub validator: ValidatorChoice,
}

/// Everything a manifest points at, parsed and cross-checked.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub manifest: Manifest,
    pub program: Program,
    pub report: LoadReport,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, LoadError> {
        let text = read(path)?;
        let bad = |reason: String| LoadError::Manifest {
            path: path.to_path_buf(),
            reason,
        };
        let raw: RawManifest = toml::from_str(&text).map_err(|e| bad(e.message().to_string()))?;
        if raw.sources.is_empty() {
            return Err(bad("at least one source is required".into()));
        }
        let tau = match raw.tau {
            None => None,
            Some(RawDegree::Text(s)) => {
                Some(Degree::from_str(&s).map_err(|e| bad(format!("tau: {e}")))?)
            }
            Some(RawDegree::Number(x)) => {
                Some(Degree::from_f64(x).map_err(|e| bad(format!("tau: {e}")))?)
            }
        };
        let egd_mode = match raw.egd_mode {
            None => EgdMode::default(),
            Some(s) => s.parse().map_err(|e| bad(format!("egd_mode: {e}")))?,
        };
        let dir = path.parent().unwrap_or(Path::new("."));
        let manifest = Manifest {
            path: path.to_path_buf(),
            sources: raw.sources.iter().map(|p| dir.join(p)).collect(),
            context: raw.context.map(|p| dir.join(p)),
            queries: dir.join(raw.queries),
            tau,
            egd_mode,
            validator: raw.validator.unwrap_or_default(),
        };
        for p in manifest.files() {
            if !p.is_file() {
                return Err(LoadError::Io {
                    path: p.to_path_buf(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                });
            }
        }
        Ok(manifest)
    }

    pub fn files(&self) -> impl Iterator<Item = &Path> + '_ {
        self.sources
            .iter()
            .chain(&self.context)
            .chain(std::iter::once(&self.queries))
            .map(PathBuf::as_path)
    }

    pub fn adapters(&self) -> Vec<Box<dyn SourceAdapter>> {
        self.sources
            .iter()
            .map(|p| Box::new(FileSource::new(p)) as Box<dyn SourceAdapter>)
            .collect()
    }

    pub fn load_context(&self) -> Result<Context, LoadError> {
        match &self.context {
            None => Ok(Context::empty()),
            Some(path) => load_context(path),
        }
    }

    pub fn load_all(self) -> Result<Loaded, LoadError> {
        let sources = self
            .adapters()
            .iter()
            .map(|a| a.fetch())
            .collect::<Result<Vec<_>, _>>()?;
        let context = self.load_context()?;
        let queries =
            parse_query_file(&read(&self.queries)?).map_err(|error| LoadError::Parse {
                path: self.queries.clone(),
                error,
            })?;
        if queries.is_empty() {
            return Err(LoadError::Manifest {
                path: self.queries.clone(),
                reason: "no queries".into(),
            });
        }
        let (program, report) = validate_program(sources, context, queries)?;
        Ok(Loaded {
            manifest: self,
            program,
            report,
        })
    }
}

pub fn load_context(path: &Path) -> Result<Context, LoadError> {
    parse_context_file(&read(path)?).map_err(|error| LoadError::Parse {
        path: path.to_path_buf(),
        error,
    })
}
