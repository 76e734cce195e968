//! The `histmap` binary: exit codes, diagnostics and endpoint equivalence.

mod common;

use std::time::Duration;

use common::{broken_corpora, fixture, get, histmap, start_binary as start};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = histmap().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn validate_fixture_is_clean() {
    let (code, out, _) = run(&["validate", "--corpus", fixture().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(!out.contains("ERROR"));
}

#[test]
fn validate_broken_corpora_exit_one() {
    for (name, dir) in broken_corpora() {
        let (code, out, _) = run(&["validate", "--corpus", dir.path().to_str().unwrap()]);
        assert_eq!(code, 1, "{name}: {out}");
        let errors: Vec<_> = out.lines().filter(|l| l.starts_with("ERROR\t")).collect();
        assert_eq!(errors.len(), 1, "{name}: {out}");
        assert_eq!(errors[0].split('\t').count(), 3, "{name}");
    }
}

#[test]
fn duplicate_id_line_names_both_files() {
    let (_, dir) = broken_corpora().swap_remove(0);
    let (code, out, _) = run(&["validate", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("articles/demak.json"), "{out}");
    assert!(out.contains("articles/demak-copy.json"), "{out}");
}

#[test]
fn missing_manifest_is_a_domain_error() {
    let dir = common::fixture_copy();
    std::fs::remove_file(dir.path().join("glossaries.json")).unwrap();
    let (code, out, _) = run(&["validate", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("ERROR\t"));
}

#[test]
fn warnings_alone_do_not_fail_validation() {
    let dir = common::fixture_copy();
    std::fs::remove_file(dir.path().join("images/gresik-tomb.png")).unwrap();
    let (code, out, _) = run(&["validate", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "WARNING\tarticles/malik-ibrahim.json\timage not found: images/gresik-tomb.png\n"
    );
}

#[test]
fn nonexistent_path_is_environmental() {
    assert_eq!(run(&["validate", "--corpus", "/no/such/corpus"]).0, 2);
    assert_eq!(
        run(&["query", "--corpus", "/no/such/corpus", "glossaries"]).0,
        2
    );
    assert_eq!(
        run(&["serve", "--corpus", "/no/such/corpus", "--port", "0"]).0,
        2
    );
}

#[test]
fn serve_refuses_broken_corpus_before_binding() {
    let (_, dir) = broken_corpora().swap_remove(0);
    let (code, out, _) = run(&[
        "serve",
        "--corpus",
        dir.path().to_str().unwrap(),
        "--port",
        "0",
    ]);
    assert_eq!(code, 1);
    assert!(!out.contains("listening"));
}

#[test]
fn unknown_article_exits_one_with_stderr_message() {
    let (code, out, err) = run(&[
        "query",
        "--corpus",
        fixture().to_str().unwrap(),
        "related",
        "nope",
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("nope"));
}

#[test]
fn bad_arguments_exit_one() {
    let corpus = fixture();
    let c = corpus.to_str().unwrap();
    assert_eq!(
        run(&["query", "--corpus", c, "related", "demak", "--mode", "nearby"]).0,
        1
    );
    assert_eq!(
        run(&["query", "--corpus", c, "timeline", "--from", "9", "--to", "3"]).0,
        1
    );
    assert_eq!(
        run(&[
            "query",
            "--corpus",
            c,
            "--spatial-weight",
            "0.9",
            "glossaries"
        ])
        .0,
        1
    );
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn query_output_equals_endpoint_body() {
    let server = start(&[]);
    let corpus = fixture();
    let c = corpus.to_str().unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec!["related", "demak", "--mode", "combined", "-k", "5"],
            "/api/articles/demak/related?mode=combined&k=5",
        ),
        (
            vec!["related", "muhammadiyah", "--mode", "time", "-k", "9"],
            "/api/articles/muhammadiyah/related?mode=time&k=9",
        ),
        (
            vec!["today", "--date", "2024-11-18"],
            "/api/today?date=2024-11-18",
        ),
        (
            vec!["search", "--q", "wali demak"],
            "/api/search?q=wali%20demak",
        ),
        (
            vec![
                "timeline",
                "--from",
                "600000",
                "--to",
                "720000",
                "--buckets",
                "6",
                "--era",
                "modern",
            ],
            "/api/timeline?from=600000&to=720000&buckets=6&era=modern",
        ),
        (vec!["timeline"], "/api/timeline"),
        (
            vec![
                "events", "--south", "-11", "--west", "94", "--north", "6", "--east", "141",
                "--zoom", "5",
            ],
            "/api/events?south=-11&west=94&north=6&east=141&zoom=5",
        ),
        (vec!["glossaries"], "/api/glossaries"),
        (vec!["article", "cirebon"], "/api/articles/cirebon"),
        (vec!["gallery"], "/api/gallery"),
    ];
    for (args, target) in cases {
        let mut full = vec!["query", "--corpus", c];
        full.extend(&args);
        let out = histmap().args(&full).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let reply = get(server.addr, target);
        assert_eq!(reply.status, 200, "{target}");
        assert_eq!(out.stdout, reply.body, "{args:?} vs {target}");
    }
}

#[test]
fn serve_with_fixed_today() {
    let server = start(&["--today", "2024-11-18"]);
    let body = get(server.addr, "/api/today").json();
    assert_eq!(body["date"], "2024-11-18");
    assert_eq!(body["events"][0]["id"], "muhammadiyah");
    assert_eq!(body["events"][0]["years_ago"], 112);

    let corpus = fixture();
    let out = histmap()
        .args([
            "query",
            "--corpus",
            corpus.to_str().unwrap(),
            "--today",
            "2024-11-18",
            "today",
        ])
        .output()
        .unwrap();
    assert_eq!(out.stdout, get(server.addr, "/api/today").body);
}

#[test]
fn serve_can_be_stopped() {
    let mut server = start(&[]);
    assert_eq!(get(server.addr, "/api/glossaries").status, 200);
    server.child.kill().unwrap();
    server.child.wait().unwrap();
    std::thread::sleep(Duration::from_millis(50));
    assert!(std::net::TcpStream::connect(server.addr).is_err());
}
