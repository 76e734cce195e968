//! Command-line entry points: `validate`, `serve` and `query`.
//!
//! Exit status is 0 on success, 1 for content or argument problems and 2
//! when the environment gets in the way (unreadable paths, bind failures).

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use histmap_core::{
    load_corpus, validate_corpus, Corpus, Era, HistoricalDate, Mode, RelatednessParams, Severity,
};

use crate::api::{Api, ApiOptions, EventsQuery, Request, TimelineQuery, DEFAULT_K};
use crate::http;

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_ENVIRONMENT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "histmap",
    version,
    about = "Historical events on a map and a timeline"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus and list its diagnostics.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of static UI files served at `/`.
        #[arg(long)]
        ui: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Answer one API request and print its JSON body.
    Query {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(subcommand)]
        request: QueryCommand,
    },
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    /// Fixed date for the today feed (YYYY-MM-DD).
    #[arg(long, global = true)]
    pub today: Option<HistoricalDate>,
    /// Offset from UTC, in minutes, used to read today's date off the clock.
    #[arg(long, global = true, default_value_t = 0, allow_hyphen_values = true)]
    pub utc_offset_minutes: i32,
    #[arg(long, global = true, default_value_t = 250.0)]
    pub spatial_scale_km: f64,
    #[arg(long, global = true, default_value_t = 3650.0)]
    pub temporal_scale_days: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub spatial_weight: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub temporal_weight: f64,
    /// Default number of related articles.
    #[arg(long, global = true, default_value_t = DEFAULT_K)]
    pub default_k: usize,
}

impl EngineArgs {
    pub fn options(&self) -> Result<ApiOptions, String> {
        let params = RelatednessParams::new(
            self.spatial_scale_km,
            self.temporal_scale_days,
            self.spatial_weight,
            self.temporal_weight,
        )
        .map_err(|e| e.to_string())?;
        if self.default_k == 0 {
            return Err("--default-k must be at least 1".into());
        }
        if self.utc_offset_minutes.abs() > 18 * 60 {
            return Err("--utc-offset-minutes must be within ±1080".into());
        }
        Ok(ApiOptions {
            params,
            default_k: self.default_k,
            fixed_today: self.today,
            utc_offset_minutes: self.utc_offset_minutes,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum QueryCommand {
    Glossaries,
    Article {
        id: String,
        #[arg(short)]
        k: Option<usize>,
    },
    Related {
        id: String,
        #[arg(long, default_value = "combined")]
        mode: Mode,
        #[arg(short)]
        k: Option<usize>,
    },
    Events {
        #[arg(long, allow_hyphen_values = true)]
        south: f64,
        #[arg(long, allow_hyphen_values = true)]
        west: f64,
        #[arg(long, allow_hyphen_values = true)]
        north: f64,
        #[arg(long, allow_hyphen_values = true)]
        east: f64,
        #[arg(long)]
        zoom: u8,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<i64>,
    },
    Timeline {
        #[arg(long, allow_hyphen_values = true)]
        from: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<i64>,
        #[arg(long)]
        buckets: Option<usize>,
        #[arg(long)]
        era: Option<Era>,
    },
    Today {
        /// Date to look up; defaults to `--today` or the clock.
        #[arg(long)]
        date: Option<String>,
    },
    Search {
        #[arg(long)]
        q: String,
    },
    Gallery,
}

impl QueryCommand {
    pub fn to_request(&self) -> Request {
        match self {
            QueryCommand::Glossaries => Request::Glossaries,
            QueryCommand::Article { id, k } => Request::Article {
                id: id.clone(),
                k: *k,
            },
            QueryCommand::Related { id, mode, k } => Request::Related {
                id: id.clone(),
                mode: *mode,
                k: *k,
            },
            QueryCommand::Events {
                south,
                west,
                north,
                east,
                zoom,
                from,
                to,
            } => Request::Events(EventsQuery {
                south: *south,
                west: *west,
                north: *north,
                east: *east,
                zoom: *zoom,
                from: *from,
                to: *to,
            }),
            QueryCommand::Timeline {
                from,
                to,
                buckets,
                era,
            } => Request::Timeline(TimelineQuery {
                from: *from,
                to: *to,
                buckets: *buckets,
                era: *era,
            }),
            QueryCommand::Today { date } => Request::Today { date: date.clone() },
            QueryCommand::Search { q } => Request::Search { q: q.clone() },
            QueryCommand::Gallery => Request::Gallery,
        }
    }
}

/// Loads a corpus, mapping fatal errors to an exit status.
fn open(corpus: &Path) -> Result<Corpus, ExitCode> {
    load_corpus(corpus).map_err(|e| {
        eprintln!("{}", e.to_diagnostic());
        ExitCode::from(if e.is_environmental() {
            EXIT_ENVIRONMENT
        } else {
            EXIT_DOMAIN
        })
    })
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Validate { corpus } => validate(&corpus),
        Command::Serve {
            corpus,
            host,
            port,
            ui,
            engine,
        } => serve(&corpus, SocketAddr::new(host, port), ui, &engine),
        Command::Query {
            corpus,
            engine,
            request,
        } => query(&corpus, &engine, &request),
    }
}

fn validate(dir: &Path) -> ExitCode {
    // Fatal problems are diagnostics too, so they go to stdout like the rest.
    let corpus = match load_corpus(dir) {
        Ok(c) => c,
        Err(e) if e.is_environmental() => {
            eprintln!("{}", e.to_diagnostic());
            return ExitCode::from(EXIT_ENVIRONMENT);
        }
        Err(e) => {
            println!("{}", e.to_diagnostic());
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    let diagnostics = validate_corpus(&corpus);
    let mut out = std::io::stdout().lock();
    for d in &diagnostics {
        let _ = writeln!(out, "{d}");
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        ExitCode::from(EXIT_DOMAIN)
    } else {
        ExitCode::from(EXIT_OK)
    }
}

fn serve(dir: &Path, addr: SocketAddr, ui: Option<PathBuf>, engine: &EngineArgs) -> ExitCode {
    let options = match engine.options() {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    if let Some(ui) = &ui {
        if !ui.is_dir() {
            eprintln!("error: UI directory {} not found", ui.display());
            return ExitCode::from(EXIT_ENVIRONMENT);
        }
    }
    let corpus = match open(dir) {
        Ok(c) => c,
        Err(code) => return code,
    };
    for d in corpus.ingest_diagnostics() {
        eprintln!("{d}");
    }
    let api = Arc::new(Api::new(corpus, options));
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            return ExitCode::from(EXIT_ENVIRONMENT);
        }
    };
    let result = runtime.block_on(http::serve(api, addr, ui, |bound| {
        println!("listening on http://{bound}");
        let _ = std::io::stdout().flush();
    }));
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: cannot serve on {addr}: {e}");
            ExitCode::from(EXIT_ENVIRONMENT)
        }
    }
}

fn query(dir: &Path, engine: &EngineArgs, request: &QueryCommand) -> ExitCode {
    let options = match engine.options() {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    let corpus = match open(dir) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let api = Api::new(corpus, options);
    match api.respond(&request.to_request()) {
        Ok(body) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&body).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_ENVIRONMENT);
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("{}", String::from_utf8_lossy(&e.body()));
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
