use std::fs;
use std::path::Path;

use histmap_core::corpus::check_article;
use histmap_core::{
    load_corpus, parse_article, serialize_article, validate_corpus, Article, CorpusError, Era,
    GeoPoint, HistoricalDate, ImageRef, Severity, TimeSpan,
};
use histmap_testkit::{fixture_dir, span_range_oracle};
use tempfile::TempDir;

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn fixture_copy() -> TempDir {
    let dir = TempDir::new().unwrap();
    copy_tree(&fixture_dir(), dir.path());
    dir
}

fn edit_article(dir: &Path, id: &str, from: &str, to: &str) {
    let path = dir.join("articles").join(format!("{id}.json"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains(from), "{from} not in {id}");
    fs::write(path, text.replacen(from, to, 1)).unwrap();
}

#[test]
fn fixture_loads_clean() {
    let corpus = load_corpus(&fixture_dir()).unwrap();
    assert_eq!(corpus.len(), 24);
    assert_eq!(corpus.glossaries().len(), 4);
    assert!(corpus.ingest_diagnostics().is_empty());
    assert!(validate_corpus(&corpus).is_empty());
}

#[test]
fn fixture_article_matches_authored_fields() {
    let path = fixture_dir().join("articles/muhammadiyah.json");
    let text = fs::read_to_string(&path).unwrap();
    let parsed = parse_article(&text, Path::new("articles/muhammadiyah.json")).unwrap();
    let expected = Article {
        id: "muhammadiyah".into(),
        title: "Founding of Muhammadiyah".into(),
        body: "Ahmad Dahlan founds Muhammadiyah in Kauman, Yogyakarta, to reform religious \
               practice and open modern schools and clinics."
            .into(),
        glossary_id: "islamic-movements".into(),
        span: TimeSpan::at(HistoricalDate::ymd(1912, 11, 18).unwrap()),
        location: GeoPoint::new(-7.8014, 110.3647).unwrap(),
        place_name: "Kauman, Yogyakarta".into(),
        images: vec![ImageRef {
            path: "images/kauman-mosque.png".into(),
            caption: "Great Mosque of Kauman".into(),
            credit: Some("Fixture drawing".into()),
        }],
        tags: vec!["organization".into(), "education".into(), "java".into()],
    };
    assert_eq!(parsed, expected);
    let corpus = load_corpus(&fixture_dir()).unwrap();
    assert_eq!(corpus.article("muhammadiyah"), Some(&expected));
}

#[test]
fn every_loaded_article_satisfies_invariants() {
    let corpus = load_corpus(&fixture_dir()).unwrap();
    let mut previous: Option<(i64, String)> = None;
    for (i, a) in corpus.articles().iter().enumerate() {
        assert!(check_article(a).is_empty(), "{}", a.id);
        assert!(corpus.glossary(&a.glossary_id).is_some());
        assert!(a.location.is_valid());
        assert!(a.span.start.in_year_domain() && a.span.end.in_year_domain());
        let r = corpus.range_at(i);
        assert_eq!((r.lo, r.hi), span_range_oracle(a));
        assert!(r.lo <= r.hi);
        let key = (r.lo, a.id.clone());
        if let Some(prev) = previous {
            assert!(prev < key, "corpus order violated at {}", a.id);
        }
        previous = Some(key);
        assert_eq!(corpus.index_of(&a.id), Some(i));
        assert_eq!(
            corpus.era_at(i),
            corpus.glossary(&a.glossary_id).unwrap().era
        );
    }
}

#[test]
fn fixture_round_trips_through_serializer() {
    let corpus = load_corpus(&fixture_dir()).unwrap();
    for a in corpus.articles() {
        let again = parse_article(&serialize_article(a), Path::new("x.json")).unwrap();
        assert_eq!(&again, a);
    }
}

#[test]
fn loading_is_deterministic() {
    let a = load_corpus(&fixture_dir()).unwrap();
    let b = load_corpus(&fixture_dir()).unwrap();
    assert_eq!(a.articles(), b.articles());
    assert_eq!(a.glossaries(), b.glossaries());
    assert_eq!(a.ingest_diagnostics(), b.ingest_diagnostics());

    let broken = fixture_copy();
    edit_article(broken.path(), "demak", "\"year\": 1478", "\"year\": 2478");
    edit_article(broken.path(), "cirebon", "islamic-kingdoms", "nowhere");
    let x = load_corpus(broken.path()).unwrap();
    let y = load_corpus(broken.path()).unwrap();
    assert_eq!(x.ingest_diagnostics(), y.ingest_diagnostics());
    assert_eq!(validate_corpus(&x), validate_corpus(&y));
}

#[test]
fn duplicate_article_id_is_fatal_and_names_both_files() {
    let dir = fixture_copy();
    let text = fs::read_to_string(dir.path().join("articles/demak.json")).unwrap();
    fs::write(dir.path().join("articles/zz-demak-copy.json"), text).unwrap();
    match load_corpus(dir.path()) {
        Err(CorpusError::DuplicateArticle { id, first, second }) => {
            assert_eq!(id, "demak");
            assert_eq!(first, Path::new("articles/demak.json"));
            assert_eq!(second, Path::new("articles/zz-demak-copy.json"));
        }
        other => panic!("expected duplicate error, got {other:?}"),
    }
    let message = load_corpus(dir.path()).unwrap_err().to_string();
    assert!(message.contains("articles/demak.json"));
    assert!(message.contains("articles/zz-demak-copy.json"));
}

#[test]
fn empty_corpus_with_manifest() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("glossaries.json"), "[]").unwrap();
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.len(), 0);
    assert!(corpus.ingest_diagnostics().is_empty());
    assert!(validate_corpus(&corpus).is_empty());
}

#[test]
fn missing_manifest_is_fatal() {
    let dir = TempDir::new().unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(CorpusError::MissingManifest)
    ));
}

#[test]
fn bad_manifests_are_fatal() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("glossaries.json"), "{").unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(CorpusError::Manifest(_))
    ));
    let g = r#"{"id":"a","title":"A","description":"","era":"modern"}"#;
    fs::write(dir.path().join("glossaries.json"), format!("[{g},{g}]")).unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(CorpusError::DuplicateGlossary(_))
    ));
    let bad_era = r#"[{"id":"a","title":"A","description":"","era":"medieval"}]"#;
    fs::write(dir.path().join("glossaries.json"), bad_era).unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(CorpusError::Manifest(_))
    ));
}

#[test]
fn nonexistent_directory_is_environmental() {
    let err = load_corpus(Path::new("/definitely/not/a/corpus")).unwrap_err();
    assert!(err.is_environmental());
}

#[test]
fn missing_image_is_one_warning() {
    let dir = fixture_copy();
    fs::remove_file(dir.path().join("images/gresik-tomb.png")).unwrap();
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.len(), 24);
    let diags = validate_corpus(&corpus);
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].severity, Severity::Warning);
    assert_eq!(diags[0].file, Path::new("articles/malik-ibrahim.json"));
    assert!(diags[0].message.contains("images/gresik-tomb.png"));
}

#[test]
fn year_out_of_bound_is_one_error() {
    let dir = fixture_copy();
    edit_article(
        dir.path(),
        "proclamation",
        "\"year\": 1945",
        "\"year\": 2500",
    );
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.len(), 23);
    let diags = validate_corpus(&corpus);
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].severity, Severity::Error);
    assert!(diags[0].message.contains("year out of domain bound"));
}

#[test]
fn unresolvable_glossary_is_error_diagnostic() {
    let dir = fixture_copy();
    edit_article(dir.path(), "ternate", "islamic-kingdoms", "spice-kingdoms");
    let corpus = load_corpus(dir.path()).unwrap();
    assert!(corpus.article("ternate").is_none());
    let diags = validate_corpus(&corpus);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].severity, Severity::Error);
    assert!(diags[0].message.contains("spice-kingdoms"));
}

#[test]
fn diagnostics_are_sorted_by_file_then_message() {
    let dir = fixture_copy();
    edit_article(dir.path(), "ternate", "islamic-kingdoms", "spice-kingdoms");
    edit_article(dir.path(), "demak", "\"lat\": -6.89", "\"lat\": -96.89");
    fs::remove_file(dir.path().join("images/demak-mosque.png")).unwrap();
    fs::remove_file(dir.path().join("images/demak-pillar.png")).unwrap();
    let diags = validate_corpus(&load_corpus(dir.path()).unwrap());
    assert_eq!(diags.len(), 4);
    let keys: Vec<_> = diags
        .iter()
        .map(|d| (d.file.clone(), d.message.clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn non_json_files_are_ignored() {
    let dir = fixture_copy();
    fs::write(dir.path().join("articles/README.txt"), "notes").unwrap();
    assert_eq!(load_corpus(dir.path()).unwrap().len(), 24);
}

#[test]
fn glossaries_keep_manifest_order_and_eras() {
    let corpus = load_corpus(&fixture_dir()).unwrap();
    let ids: Vec<_> = corpus.glossaries().iter().map(|g| g.id.as_str()).collect();
    assert_eq!(
        ids,
        [
            "early-islam",
            "islamic-kingdoms",
            "islamic-movements",
            "independence"
        ]
    );
    let modern = corpus
        .glossaries()
        .iter()
        .filter(|g| g.era == Era::Modern)
        .count();
    assert_eq!(modern, 2);
}
