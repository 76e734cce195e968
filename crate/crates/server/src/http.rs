//! Axum routing for the JSON API and static image files.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use crate::api::{param, parse_mode, Api, ApiError, EventsQuery, Request, TimelineQuery};

type Params = Query<HashMap<String, String>>;

fn json(status: StatusCode, body: Vec<u8>) -> Response {
    (
        status,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response()
}

fn error(e: ApiError) -> Response {
    let status = StatusCode::from_u16(e.status).unwrap_or(StatusCode::BAD_REQUEST);
    json(status, e.body())
}

fn answer(api: &Api, request: Result<Request, ApiError>) -> Response {
    match request.and_then(|r| api.respond(&r)) {
        Ok(body) => json(StatusCode::OK, body),
        Err(e) => error(e),
    }
}

async fn glossaries(State(api): State<Arc<Api>>) -> Response {
    answer(&api, Ok(Request::Glossaries))
}

async fn article(
    State(api): State<Arc<Api>>,
    Path(id): Path<String>,
    Query(q): Params,
) -> Response {
    let request = param(&q, "k").map(|k| Request::Article { id, k });
    answer(&api, request)
}

async fn related(
    State(api): State<Arc<Api>>,
    Path(id): Path<String>,
    Query(q): Params,
) -> Response {
    let request = parse_mode(q.get("mode").map(String::as_str)).and_then(|mode| {
        Ok(Request::Related {
            id,
            mode,
            k: param(&q, "k")?,
        })
    });
    answer(&api, request)
}

async fn events(State(api): State<Arc<Api>>, Query(q): Params) -> Response {
    answer(&api, EventsQuery::from_params(&q).map(Request::Events))
}

async fn timeline(State(api): State<Arc<Api>>, Query(q): Params) -> Response {
    answer(&api, TimelineQuery::from_params(&q).map(Request::Timeline))
}

async fn today(State(api): State<Arc<Api>>, Query(q): Params) -> Response {
    let date = q.get("date").filter(|d| !d.trim().is_empty()).cloned();
    answer(&api, Ok(Request::Today { date }))
}

async fn search(State(api): State<Arc<Api>>, Query(q): Params) -> Response {
    let q = q.get("q").cloned().unwrap_or_default();
    answer(&api, Ok(Request::Search { q }))
}

async fn gallery(State(api): State<Arc<Api>>) -> Response {
    answer(&api, Ok(Request::Gallery))
}

async fn api_not_found() -> Response {
    error(ApiError::not_found("no such endpoint"))
}

/// Builds the application router. `ui_dir`, when given, is served at `/`.
pub fn router(api: Arc<Api>, ui_dir: Option<PathBuf>) -> Router {
    let images = api
        .corpus()
        .root()
        .map(|root| ServeDir::new(root.join("images")));
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET]);

    let routes = Router::new()
        .route("/api/glossaries", get(glossaries))
        .route("/api/articles/{id}", get(article))
        .route("/api/articles/{id}/related", get(related))
        .route("/api/events", get(events))
        .route("/api/timeline", get(timeline))
        .route("/api/today", get(today))
        .route("/api/search", get(search))
        .route("/api/gallery", get(gallery))
        .route("/api/{*rest}", get(api_not_found))
        .with_state(api);
    let routes = match images {
        Some(images) => routes.nest_service("/images", images),
        None => routes,
    };

    let routes = match ui_dir {
        Some(dir) => routes.fallback_service(ServeDir::new(dir)),
        None => routes.fallback(api_not_found),
    };
    routes.layer(cors)
}

/// Serves until ctrl-c. `on_bound` receives the bound address, which matters
/// when port 0 asked for an ephemeral one.
pub async fn serve(
    api: Arc<Api>,
    addr: SocketAddr,
    ui_dir: Option<PathBuf>,
    on_bound: impl FnOnce(SocketAddr),
) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    on_bound(listener.local_addr()?);
    axum::serve(listener, router(api, ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
