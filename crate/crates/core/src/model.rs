//! Content data model: articles, glossaries, and their parts.

use std::fmt;
use std::path::{Component, Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calendar::HistoricalDate;

/// Which of the two timeline bands a glossary belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Era {
    Classical,
    Modern,
}

impl Era {
    pub fn as_str(&self) -> &'static str {
        match self {
            Era::Classical => "classical",
            Era::Modern => "modern",
        }
    }
}

impl fmt::Display for Era {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Era {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(Era::Classical),
            "modern" => Ok(Era::Modern),
            other => Err(format!(
                "unknown era `{other}` (expected classical or modern)"
            )),
        }
    }
}

/// A named group of articles sharing a theme and period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Glossary {
    pub id: String,
    pub title: String,
    pub description: String,
    pub era: Era,
}

/// A point on the sphere, longitude normalized into [-180, 180).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    /// Checks ranges and normalizes `lon = 180` to `-180`.
    pub fn new(lat: f64, lon: f64) -> Result<Self, String> {
        if !lat.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(format!("latitude {lat} out of range [-90, 90]"));
        }
        if !lon.is_finite() || !(-180.0..=180.0).contains(&lon) {
            return Err(format!("longitude {lon} out of range [-180, 180]"));
        }
        let lon = if lon == 180.0 { -180.0 } else { lon };
        Ok(GeoPoint { lat, lon })
    }

    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat) && (-180.0..180.0).contains(&self.lon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRef {
    /// Path relative to the corpus root.
    pub path: String,
    pub caption: String,
    pub credit: Option<String>,
}

impl ImageRef {
    /// Non-empty, relative, and free of `..` segments.
    pub fn path_is_safe(path: &str) -> bool {
        if path.is_empty() || path.contains('\\') {
            return false;
        }
        Path::new(path)
            .components()
            .all(|c| matches!(c, Component::Normal(_) | Component::CurDir))
    }
}

/// Inclusive span of historical dates; a single date has `end == start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeSpan {
    pub start: HistoricalDate,
    pub end: HistoricalDate,
}

impl TimeSpan {
    pub fn new(start: HistoricalDate, end: HistoricalDate) -> Result<Self, String> {
        if start.first_day() > end.last_day() {
            return Err(format!("end date {end} precedes start date {start}"));
        }
        Ok(TimeSpan { start, end })
    }

    pub fn at(date: HistoricalDate) -> Self {
        TimeSpan {
            start: date,
            end: date,
        }
    }
}

/// One historical event.
#[derive(Debug, Clone, PartialEq)]
pub struct Article {
    pub id: String,
    pub title: String,
    pub body: String,
    pub glossary_id: String,
    pub span: TimeSpan,
    pub location: GeoPoint,
    pub place_name: String,
    pub images: Vec<ImageRef>,
    pub tags: Vec<String>,
}

/// Lowercase ASCII letters, digits, `-` and `_`; non-empty.
pub fn is_slug(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn label(&self) -> &'static str {
        match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        }
    }
}

/// A problem found while loading or validating a corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Diagnostic {
    /// Corpus-relative path of the offending file.
    pub file: PathBuf,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    pub fn error(file: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Diagnostic {
            file: file.into(),
            message: message.into(),
            severity: Severity::Error,
        }
    }

    pub fn warning(file: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Diagnostic {
            file: file.into(),
            message: message.into(),
            severity: Severity::Warning,
        }
    }
}

/// `LEVEL<TAB>file<TAB>message`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}",
            self.severity.label(),
            self.file.display(),
            self.message
        )
    }
}
