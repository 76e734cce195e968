//! Corpus file format, parsing, loading, and validation.
//!
//! A corpus directory holds `glossaries.json`, one JSON document per article
//! under `articles/`, and image files referenced from the articles. Loading
//! separates structural problems, which abort the load, from content problems,
//! which are reported as diagnostics while the rest of the corpus loads.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::calendar::{HistoricalDate, YEAR_DOMAIN};
use crate::model::{is_slug, Article, Diagnostic, Era, GeoPoint, Glossary, ImageRef, TimeSpan};
use crate::temporal::{span_to_ordinal_range, OrdinalRange};

pub const MANIFEST_FILE: &str = "glossaries.json";
pub const ARTICLES_DIR: &str = "articles";

/// Structural corpus failure; the corpus cannot be used at all.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus directory {}: {source}", path.display())]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("missing glossary manifest {MANIFEST_FILE}")]
    MissingManifest,
    #[error("malformed glossary manifest: {0}")]
    Manifest(String),
    #[error("duplicate glossary id `{0}`")]
    DuplicateGlossary(String),
    #[error(
        "duplicate article id `{id}` declared in {} and {}",
        first.display(),
        second.display()
    )]
    DuplicateArticle {
        id: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("invalid article `{id}`: {message}")]
    InvalidArticle { id: String, message: String },
}

impl CorpusError {
    /// True when the failure comes from the environment (missing or
    /// unreadable directory) rather than from corpus content.
    pub fn is_environmental(&self) -> bool {
        matches!(self, CorpusError::Unreadable { .. })
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        let file = match self {
            CorpusError::Unreadable { path, .. } => path.clone(),
            CorpusError::DuplicateArticle { second, .. } => second.clone(),
            CorpusError::InvalidArticle { id, .. } => in_memory_source(id),
            _ => PathBuf::from(MANIFEST_FILE),
        };
        Diagnostic::error(file, self.to_string())
    }
}

/// One problem with one field of an article document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub file: PathBuf,
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}: {}",
            self.file.display(),
            self.field,
            self.message
        )
    }
}

impl FieldError {
    fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(&self.file, format!("{}: {}", self.field, self.message))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArticleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    body: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    glossary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    date: Option<DateRangeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    location: Option<LocationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    images: Option<Vec<ImageDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<String>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DateRangeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<DateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<DateDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DateDoc {
    year: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    month: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    day: Option<i64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    place: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageDoc {
    path: String,
    caption: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    credit: Option<String>,
}

impl From<&HistoricalDate> for DateDoc {
    fn from(d: &HistoricalDate) -> Self {
        DateDoc {
            year: i64::from(d.year()),
            month: d.month().map(i64::from),
            day: d.day().map(i64::from),
        }
    }
}

impl From<&Article> for ArticleDoc {
    fn from(a: &Article) -> Self {
        ArticleDoc {
            id: Some(a.id.clone()),
            title: Some(a.title.clone()),
            body: Some(a.body.clone()),
            glossary: Some(a.glossary_id.clone()),
            date: Some(DateRangeDoc {
                start: Some((&a.span.start).into()),
                end: (a.span.end != a.span.start).then(|| (&a.span.end).into()),
            }),
            location: Some(LocationDoc {
                lat: Some(a.location.lat),
                lon: Some(a.location.lon),
                place: Some(a.place_name.clone()),
            }),
            images: Some(
                a.images
                    .iter()
                    .map(|i| ImageDoc {
                        path: i.path.clone(),
                        caption: i.caption.clone(),
                        credit: i.credit.clone(),
                    })
                    .collect(),
            ),
            tags: Some(a.tags.clone()),
        }
    }
}

/// Articles serialize in the corpus article format.
impl Serialize for Article {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ArticleDoc::from(self).serialize(serializer)
    }
}

/// Renders an article as a corpus article document.
pub fn serialize_article(article: &Article) -> String {
    serde_json::to_string_pretty(article).expect("article serialization is infallible")
}

/// Parses one article document, reporting every problem found.
pub fn parse_article(document: &str, source_path: &Path) -> Result<Article, Vec<FieldError>> {
    let mut errors = Vec::new();
    let mut err = |field: &str, message: String| {
        errors.push(FieldError {
            file: source_path.to_path_buf(),
            field: field.to_string(),
            message,
        })
    };

    let doc: ArticleDoc = match serde_json::from_str(document) {
        Ok(doc) => doc,
        Err(e) => {
            err("document", format!("malformed article document: {e}"));
            return Err(errors);
        }
    };

    let mut required = |value: Option<String>, field: &str| {
        if value.is_none() {
            err(field, "missing required field".to_string());
        }
        value
    };
    let id = required(doc.id, "id");
    let title = required(doc.title, "title");
    let body = required(doc.body, "body");
    let glossary = required(doc.glossary, "glossary");

    let mut date = |doc: Option<DateDoc>, field: &str| -> Option<HistoricalDate> {
        let d = doc?;
        match HistoricalDate::new(d.year, d.month, d.day) {
            Ok(date) if date.in_year_domain() => Some(date),
            Ok(_) => {
                err(field, year_bound_message(d.year));
                None
            }
            Err(e) => {
                err(field, e.to_string());
                None
            }
        }
    };
    let date_doc = doc.date.unwrap_or_default();
    let start_present = date_doc.start.is_some();
    let end_present = date_doc.end.is_some();
    let start = date(date_doc.start, "date.start");
    let end = date(date_doc.end, "date.end");
    if !start_present {
        err("date.start", "missing required field".to_string());
    }

    let location = match doc.location {
        None => {
            err("location", "missing required field".to_string());
            None
        }
        Some(loc) => {
            if loc.place.is_none() {
                err("location.place", "missing required field".to_string());
            }
            match (loc.lat, loc.lon) {
                (Some(lat), Some(lon)) => match GeoPoint::new(lat, lon) {
                    Ok(p) => loc.place.map(|place| (p, place)),
                    Err(e) => {
                        err("location", e);
                        None
                    }
                },
                (lat, lon) => {
                    if lat.is_none() {
                        err("location.lat", "missing required field".to_string());
                    }
                    if lon.is_none() {
                        err("location.lon", "missing required field".to_string());
                    }
                    None
                }
            }
        }
    };

    let end_ok = end.is_some() || !end_present;
    let (
        Some(id),
        Some(title),
        Some(body),
        Some(glossary),
        Some(start),
        true,
        Some((location, place)),
    ) = (id, title, body, glossary, start, end_ok, location)
    else {
        return Err(errors);
    };

    let article = Article {
        id,
        title,
        body,
        glossary_id: glossary,
        span: TimeSpan {
            start,
            end: end.unwrap_or(start),
        },
        location,
        place_name: place,
        images: doc
            .images
            .unwrap_or_default()
            .into_iter()
            .map(|i| ImageRef {
                path: i.path,
                caption: i.caption,
                credit: i.credit,
            })
            .collect(),
        tags: doc
            .tags
            .unwrap_or_default()
            .into_iter()
            .map(|t| t.trim().to_lowercase())
            .collect(),
    };

    for (field, message) in check_article(&article) {
        err(field, message);
    }
    if errors.is_empty() {
        Ok(article)
    } else {
        Err(errors)
    }
}

fn year_bound_message(year: i64) -> String {
    format!(
        "year out of domain bound ({year} not in {}..={})",
        YEAR_DOMAIN.start(),
        YEAR_DOMAIN.end()
    )
}

/// Content checks on a constructed article, as `(field, message)` pairs.
pub fn check_article(a: &Article) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    if !is_slug(&a.id) {
        out.push(("id", format!("`{}` is not a slug ([a-z0-9_-]+)", a.id)));
    }
    if a.title.trim().is_empty() {
        out.push(("title", "must not be empty".to_string()));
    }
    if a.body.trim().is_empty() {
        out.push(("body", "must not be empty".to_string()));
    }
    if !is_slug(&a.glossary_id) {
        out.push((
            "glossary",
            format!("`{}` is not a slug ([a-z0-9_-]+)", a.glossary_id),
        ));
    }
    for (field, date) in [("date.start", a.span.start), ("date.end", a.span.end)] {
        if !date.in_year_domain() {
            out.push((field, year_bound_message(i64::from(date.year()))));
        }
    }
    if a.span.start.first_day() > a.span.end.last_day() {
        out.push((
            "date.end",
            format!(
                "end date {} precedes start date {}",
                a.span.end, a.span.start
            ),
        ));
    }
    if !a.location.is_valid() {
        out.push((
            "location",
            format!(
                "coordinate ({}, {}) out of range",
                a.location.lat, a.location.lon
            ),
        ));
    }
    for image in &a.images {
        if !ImageRef::path_is_safe(&image.path) {
            out.push((
                "images.path",
                format!("`{}` must be a relative path without `..`", image.path),
            ));
        }
    }
    for tag in &a.tags {
        if tag.is_empty() || tag.chars().any(char::is_whitespace) || *tag != tag.to_lowercase() {
            out.push(("tags", format!("`{tag}` is not a lowercase token")));
        }
    }
    out
}

/// An immutable, validated collection of glossaries and articles.
///
/// Articles are held in `(start ordinal, id)` order; index-based accessors
/// refer to that order.
#[derive(Debug, Clone)]
pub struct Corpus {
    root: Option<PathBuf>,
    glossaries: Vec<Glossary>,
    glossary_index: HashMap<String, usize>,
    articles: Vec<Article>,
    ranges: Vec<OrdinalRange>,
    eras: Vec<Era>,
    sources: Vec<PathBuf>,
    by_id: HashMap<String, usize>,
    diagnostics: Vec<Diagnostic>,
}

fn in_memory_source(id: &str) -> PathBuf {
    Path::new(ARTICLES_DIR).join(format!("{id}.json"))
}

fn check_glossaries(glossaries: &[Glossary]) -> Result<HashMap<String, usize>, CorpusError> {
    let mut index = HashMap::new();
    for (i, g) in glossaries.iter().enumerate() {
        if !is_slug(&g.id) {
            return Err(CorpusError::Manifest(format!(
                "glossary id `{}` is not a slug",
                g.id
            )));
        }
        if index.insert(g.id.clone(), i).is_some() {
            return Err(CorpusError::DuplicateGlossary(g.id.clone()));
        }
    }
    Ok(index)
}

impl Corpus {
    pub fn empty() -> Self {
        Corpus::from_parts(Vec::new(), Vec::new()).expect("empty corpus is valid")
    }

    /// Builds a corpus from in-memory parts. Any invalid article, duplicate id,
    /// or unresolved glossary is a hard error here.
    pub fn from_parts(
        glossaries: Vec<Glossary>,
        articles: Vec<Article>,
    ) -> Result<Self, CorpusError> {
        let glossary_index = check_glossaries(&glossaries)?;
        let mut seen = HashMap::new();
        for a in &articles {
            if let Some(message) = check_article(a)
                .into_iter()
                .map(|(f, m)| format!("{f}: {m}"))
                .next()
            {
                return Err(CorpusError::InvalidArticle {
                    id: a.id.clone(),
                    message,
                });
            }
            if !glossary_index.contains_key(&a.glossary_id) {
                return Err(CorpusError::InvalidArticle {
                    id: a.id.clone(),
                    message: format!("unknown glossary `{}`", a.glossary_id),
                });
            }
            if seen.insert(a.id.clone(), ()).is_some() {
                return Err(CorpusError::DuplicateArticle {
                    id: a.id.clone(),
                    first: in_memory_source(&a.id),
                    second: in_memory_source(&a.id),
                });
            }
        }
        let sources = articles.iter().map(|a| in_memory_source(&a.id)).collect();
        Ok(Self::assemble(
            None,
            glossaries,
            glossary_index,
            articles,
            sources,
            Vec::new(),
        ))
    }

    fn assemble(
        root: Option<PathBuf>,
        glossaries: Vec<Glossary>,
        glossary_index: HashMap<String, usize>,
        articles: Vec<Article>,
        sources: Vec<PathBuf>,
        mut diagnostics: Vec<Diagnostic>,
    ) -> Self {
        let mut rows: Vec<(OrdinalRange, Article, PathBuf)> = articles
            .into_iter()
            .zip(sources)
            .map(|(a, s)| (span_to_ordinal_range(&a.span), a, s))
            .collect();
        rows.sort_by(|x, y| (x.0.lo, &x.1.id).cmp(&(y.0.lo, &y.1.id)));

        let mut ranges = Vec::with_capacity(rows.len());
        let mut eras = Vec::with_capacity(rows.len());
        let mut out_articles = Vec::with_capacity(rows.len());
        let mut sources = Vec::with_capacity(rows.len());
        let mut by_id = HashMap::with_capacity(rows.len());
        for (i, (range, article, source)) in rows.into_iter().enumerate() {
            ranges.push(range);
            eras.push(glossaries[glossary_index[&article.glossary_id]].era);
            by_id.insert(article.id.clone(), i);
            out_articles.push(article);
            sources.push(source);
        }
        diagnostics.sort();
        diagnostics.dedup();
        Corpus {
            root,
            glossaries,
            glossary_index,
            articles: out_articles,
            ranges,
            eras,
            sources,
            by_id,
            diagnostics,
        }
    }

    /// Directory the corpus was loaded from, if any.
    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    /// Glossaries in manifest order.
    pub fn glossaries(&self) -> &[Glossary] {
        &self.glossaries
    }

    pub fn glossary(&self, id: &str) -> Option<&Glossary> {
        self.glossary_index.get(id).map(|&i| &self.glossaries[i])
    }

    /// Articles in `(start ordinal, id)` order.
    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn article(&self, id: &str) -> Option<&Article> {
        self.index_of(id).map(|i| &self.articles[i])
    }

    /// Ordinal range of the article at `index`.
    pub fn range_at(&self, index: usize) -> OrdinalRange {
        self.ranges[index]
    }

    /// Ordinal ranges of all articles, parallel to [`Corpus::articles`].
    pub fn ranges(&self) -> &[OrdinalRange] {
        &self.ranges
    }

    /// Era of the glossary the article at `index` belongs to.
    pub fn era_at(&self, index: usize) -> Era {
        self.eras[index]
    }

    /// Corpus-relative source file of the article at `index`.
    pub fn source_at(&self, index: usize) -> &Path {
        &self.sources[index]
    }

    pub fn ingest_diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }
}

fn unreadable(path: &Path, source: io::Error) -> CorpusError {
    CorpusError::Unreadable {
        path: path.to_path_buf(),
        source,
    }
}

fn missing_image_warnings(root: &Path, article: &Article, source: &Path) -> Vec<Diagnostic> {
    article
        .images
        .iter()
        .filter(|img| ImageRef::path_is_safe(&img.path) && !root.join(&img.path).is_file())
        .map(|img| Diagnostic::warning(source, format!("image not found: {}", img.path)))
        .collect()
}

/// Loads a corpus directory.
///
/// Article files are read in file-name order. Articles with content errors
/// are left out and reported in [`Corpus::ingest_diagnostics`].
pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    let meta = fs::metadata(dir).map_err(|e| unreadable(dir, e))?;
    if !meta.is_dir() {
        return Err(unreadable(
            dir,
            io::Error::new(io::ErrorKind::NotADirectory, "not a directory"),
        ));
    }
    fs::read_dir(dir).map_err(|e| unreadable(dir, e))?;

    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = match fs::read_to_string(&manifest_path) {
        Ok(text) => text,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(CorpusError::MissingManifest),
        Err(e) => return Err(unreadable(&manifest_path, e)),
    };
    let glossaries: Vec<Glossary> =
        serde_json::from_str(&manifest).map_err(|e| CorpusError::Manifest(e.to_string()))?;
    let glossary_index = check_glossaries(&glossaries)?;

    let mut files = Vec::new();
    let articles_dir = dir.join(ARTICLES_DIR);
    if articles_dir.is_dir() {
        for entry in fs::read_dir(&articles_dir).map_err(|e| unreadable(&articles_dir, e))? {
            let entry = entry.map_err(|e| unreadable(&articles_dir, e))?;
            let name = entry.file_name();
            let is_json = Path::new(&name)
                .extension()
                .is_some_and(|ext| ext == "json");
            if is_json && entry.path().is_file() {
                files.push(name);
            }
        }
    }
    files.sort();

    let mut diagnostics = Vec::new();
    let mut articles = Vec::new();
    let mut sources = Vec::new();
    let mut first_source: HashMap<String, PathBuf> = HashMap::new();
    for name in files {
        let rel = Path::new(ARTICLES_DIR).join(&name);
        let text = match fs::read_to_string(dir.join(&rel)) {
            Ok(text) => text,
            Err(e) => {
                diagnostics.push(Diagnostic::error(&rel, format!("cannot read file: {e}")));
                continue;
            }
        };
        let article = match parse_article(&text, &rel) {
            Ok(a) => a,
            Err(errors) => {
                diagnostics.extend(errors.iter().map(FieldError::to_diagnostic));
                continue;
            }
        };
        if let Some(first) = first_source.get(&article.id) {
            return Err(CorpusError::DuplicateArticle {
                id: article.id,
                first: first.clone(),
                second: rel,
            });
        }
        first_source.insert(article.id.clone(), rel.clone());
        if !glossary_index.contains_key(&article.glossary_id) {
            diagnostics.push(Diagnostic::error(
                &rel,
                format!("glossary: unknown glossary `{}`", article.glossary_id),
            ));
            continue;
        }
        diagnostics.extend(missing_image_warnings(dir, &article, &rel));
        articles.push(article);
        sources.push(rel);
    }

    Ok(Corpus::assemble(
        Some(dir.to_path_buf()),
        glossaries,
        glossary_index,
        articles,
        sources,
        diagnostics,
    ))
}

/// All diagnostics for a loaded corpus, ordered by `(file, message)`.
///
/// Combines what ingestion reported with a fresh pass of the per-article
/// checks, glossary resolution, and (for disk-backed corpora) image presence.
pub fn validate_corpus(corpus: &Corpus) -> Vec<Diagnostic> {
    let mut all: BTreeSet<Diagnostic> = corpus.ingest_diagnostics().iter().cloned().collect();
    for (i, article) in corpus.articles().iter().enumerate() {
        let source = corpus.source_at(i);
        for (field, message) in check_article(article) {
            all.insert(Diagnostic::error(source, format!("{field}: {message}")));
        }
        if corpus.glossary(&article.glossary_id).is_none() {
            all.insert(Diagnostic::error(
                source,
                format!("glossary: unknown glossary `{}`", article.glossary_id),
            ));
        }
        if let Some(root) = corpus.root() {
            all.extend(missing_image_warnings(root, article, source));
        }
    }
    all.into_iter().collect()
}
