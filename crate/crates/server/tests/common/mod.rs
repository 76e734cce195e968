//! Helpers shared by the server test targets: an in-process server, a raw
//! HTTP/1.1 client and corpus copies with deliberate defects.

#![allow(dead_code)]

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::{mpsc, Arc};
use std::time::Duration;

use histmap::api::{Api, ApiOptions};
use histmap::http;
use histmap_core::load_corpus;
use histmap_testkit::fixture_dir;
use tempfile::TempDir;

/// Starts the HTTP service for `corpus` on an ephemeral port. The server
/// thread lives until the test process exits.
pub fn spawn_server(corpus: &Path, options: ApiOptions) -> SocketAddr {
    let api = Arc::new(Api::new(load_corpus(corpus).unwrap(), options));
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(http::serve(
            api,
            ([127, 0, 0, 1], 0).into(),
            None,
            move |addr| {
                tx.send(addr).unwrap();
            },
        ))
        .unwrap();
    });
    rx.recv_timeout(Duration::from_secs(10))
        .expect("server bound")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).unwrap()
    }
}

/// Minimal GET over a fresh connection.
pub fn get(addr: SocketAddr, target: &str) -> Reply {
    let mut stream = TcpStream::connect(addr).unwrap();
    stream
        .set_read_timeout(Some(Duration::from_secs(10)))
        .unwrap();
    write!(
        stream,
        "GET {target} HTTP/1.1\r\nHost: {addr}\r\nOrigin: http://example.test\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).unwrap();

    let split = raw
        .windows(4)
        .position(|w| w == b"\r\n\r\n")
        .expect("header end");
    let head = String::from_utf8(raw[..split].to_vec()).unwrap();
    let mut lines = head.split("\r\n");
    let status = lines
        .next()
        .unwrap()
        .split(' ')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let headers: Vec<(String, String)> = lines
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let mut body = raw[split + 4..].to_vec();
    let chunked = headers
        .iter()
        .any(|(k, v)| k.eq_ignore_ascii_case("transfer-encoding") && v.contains("chunked"));
    if chunked {
        body = dechunk(&body);
    }
    Reply {
        status,
        headers,
        body,
    }
}

fn dechunk(mut data: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    loop {
        let line_end = data.windows(2).position(|w| w == b"\r\n").unwrap();
        let size_text = std::str::from_utf8(&data[..line_end]).unwrap();
        let size = usize::from_str_radix(size_text.split(';').next().unwrap().trim(), 16).unwrap();
        data = &data[line_end + 2..];
        if size == 0 {
            return out;
        }
        out.extend_from_slice(&data[..size]);
        data = &data[size + 2..];
    }
}

pub fn histmap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_histmap"))
}

pub fn fixture() -> PathBuf {
    fixture_dir()
}

pub fn copy_tree(from: &Path, to: &Path) {
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

pub fn fixture_copy() -> TempDir {
    let dir = TempDir::new().unwrap();
    copy_tree(&fixture_dir(), dir.path());
    dir
}

pub fn edit_article(dir: &Path, id: &str, from: &str, to: &str) {
    let path = dir.join("articles").join(format!("{id}.json"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains(from), "{from} not in {id}");
    fs::write(path, text.replacen(from, to, 1)).unwrap();
}

/// Five fixture copies, each with one content defect that validation must
/// report as an error.
pub fn broken_corpora() -> Vec<(&'static str, TempDir)> {
    let duplicate = fixture_copy();
    let text = fs::read_to_string(duplicate.path().join("articles/demak.json")).unwrap();
    fs::write(duplicate.path().join("articles/demak-copy.json"), text).unwrap();

    let unknown_glossary = fixture_copy();
    edit_article(
        unknown_glossary.path(),
        "ternate",
        "islamic-kingdoms",
        "spice-kingdoms",
    );

    let impossible_date = fixture_copy();
    edit_article(
        impossible_date.path(),
        "nahdlatul-ulama",
        "\"month\": 1",
        "\"month\": 2",
    );

    let out_of_domain = fixture_copy();
    edit_article(
        out_of_domain.path(),
        "proclamation",
        "\"year\": 1945",
        "\"year\": 2500",
    );

    let missing_field = fixture_copy();
    edit_article(missing_field.path(), "persis", "\"title\":", "\"heading\":");

    vec![
        ("duplicate id", duplicate),
        ("unknown glossary", unknown_glossary),
        ("february 31", impossible_date),
        ("year 2500", out_of_domain),
        ("missing title", missing_field),
    ]
}

/// A `histmap serve` child process on an ephemeral port, killed on drop.
pub struct Server {
    pub child: Child,
    pub addr: SocketAddr,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

pub fn start_binary(extra: &[&str]) -> Server {
    let corpus = fixture();
    let mut child = histmap()
        .args(["serve", "--corpus", corpus.to_str().unwrap(), "--port", "0"])
        .args(extra)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    let addr = line
        .trim()
        .strip_prefix("listening on http://")
        .unwrap_or_else(|| panic!("unexpected banner {line:?}"))
        .parse()
        .unwrap();
    Server { child, addr }
}
