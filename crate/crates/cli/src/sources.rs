use std::path::{Path, PathBuf};

use contextdl::text::parse_source_file;
use contextdl::SourceDatabase;

use crate::manifest::LoadError;

/// Somewhere a source database can be fetched from.
pub trait SourceAdapter: Send + Sync {
    /// Human-readable location for diagnostics.
    fn location(&self) -> String;
    fn fetch(&self) -> Result<SourceDatabase, LoadError>;
}

/// A source file in the `@source` format.
#[derive(Clone, Debug)]
pub struct FileSource {
    path: PathBuf,
}

impl FileSource {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FileSource { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl SourceAdapter for FileSource {
    fn location(&self) -> String {
        self.path.display().to_string()
    }

    fn fetch(&self) -> Result<SourceDatabase, LoadError> {
        let text = crate::manifest::read(&self.path)?;
        parse_source_file(&text).map_err(|error| LoadError::Parse {
            path: self.path.clone(),
            error,
        })
    }
}

/// An already-built source, handy for tests and embedding.
#[derive(Clone, Debug)]
pub struct MemorySource(pub SourceDatabase);

impl SourceAdapter for MemorySource {
    fn location(&self) -> String {
        format!("memory:{}", self.0.id())
    }

    fn fetch(&self) -> Result<SourceDatabase, LoadError> {
        Ok(self.0.clone())
    }
}
