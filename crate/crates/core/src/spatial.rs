//! Great-circle distance, bounding-box lookup, and fixed-grid map clustering.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::QueryError;
use crate::model::GeoPoint;
use crate::temporal::OrdinalRange;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Grid cell edge at zoom 0, in degrees. Halves with every zoom level.
pub const BASE_CELL_DEGREES: f64 = 45.0;

pub const MAX_ZOOM: u8 = 18;

pub fn haversine_km(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let d_lat = (b.lat - a.lat).to_radians();
    let d_lon = (b.lon - a.lon).to_radians();
    let h = (d_lat / 2.0).sin().powi(2)
        + a.lat.to_radians().cos() * b.lat.to_radians().cos() * (d_lon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.clamp(0.0, 1.0).sqrt().asin()
}

/// Latitude/longitude box. `west > east` wraps across the antimeridian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    south: f64,
    west: f64,
    north: f64,
    east: f64,
}

impl BoundingBox {
    /// `east` may be 180 so that a `[-180, 180)` box covers every longitude.
    pub fn new(south: f64, west: f64, north: f64, east: f64) -> Result<Self, QueryError> {
        let bad = |what: &str| Err(QueryError::InvalidArgument(format!("bounding box: {what}")));
        if ![south, west, north, east].iter().all(|v| v.is_finite()) {
            return bad("coordinates must be finite");
        }
        if !(-90.0..=90.0).contains(&south) || !(-90.0..=90.0).contains(&north) {
            return bad("latitudes must lie in [-90, 90]");
        }
        if south > north {
            return bad("south must not exceed north");
        }
        if !(-180.0..180.0).contains(&west) || !(-180.0..=180.0).contains(&east) {
            return bad("west must lie in [-180, 180) and east in [-180, 180]");
        }
        Ok(BoundingBox {
            south,
            west,
            north,
            east,
        })
    }

    pub fn world() -> Self {
        BoundingBox {
            south: -90.0,
            west: -180.0,
            north: 90.0,
            east: 180.0,
        }
    }

    pub fn wraps(&self) -> bool {
        self.west > self.east
    }

    /// Latitude inclusive on both sides, longitude inclusive west and
    /// exclusive east.
    pub fn contains(&self, p: &GeoPoint) -> bool {
        let lat_ok = self.south <= p.lat && p.lat <= self.north;
        let lon_ok = if self.wraps() {
            p.lon >= self.west || p.lon < self.east
        } else {
            self.west <= p.lon && p.lon < self.east
        };
        lat_ok && lon_ok
    }
}

/// Optional time filter for map queries; either end may be open.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TimeWindow {
    pub from: Option<i64>,
    pub to: Option<i64>,
}

impl TimeWindow {
    pub fn new(from: Option<i64>, to: Option<i64>) -> Result<Self, QueryError> {
        if let (Some(f), Some(t)) = (from, to) {
            if f > t {
                return Err(QueryError::InvalidRange { from: f, to: t });
            }
        }
        Ok(TimeWindow { from, to })
    }

    pub fn admits(&self, r: &OrdinalRange) -> bool {
        self.from.is_none_or(|f| r.hi >= f) && self.to.is_none_or(|t| r.lo <= t)
    }
}

fn indices_in_box<'a>(
    corpus: &'a Corpus,
    bbox: &'a BoundingBox,
    window: &'a TimeWindow,
) -> impl Iterator<Item = usize> + 'a {
    corpus
        .articles()
        .iter()
        .enumerate()
        .filter(move |(i, a)| bbox.contains(&a.location) && window.admits(&corpus.range_at(*i)))
        .map(|(i, _)| i)
}

/// Articles located in `bbox` whose span meets `window`, in `(span.lo, id)` order.
pub fn query_bbox<'a>(corpus: &'a Corpus, bbox: &BoundingBox, window: &TimeWindow) -> Vec<&'a str> {
    indices_in_box(corpus, bbox, window)
        .map(|i| corpus.articles()[i].id.as_str())
        .collect()
}

pub fn cell_size_degrees(zoom: u8) -> f64 {
    BASE_CELL_DEGREES / f64::from(1u32 << zoom)
}

/// `(row, column)` of the grid cell holding `p`; the origin is (-90, -180).
pub fn grid_cell(p: &GeoPoint, zoom: u8) -> (i64, i64) {
    let c = cell_size_degrees(zoom);
    let rows = (180.0 / c) as i64;
    let row = (((p.lat + 90.0) / c).floor() as i64).min(rows - 1);
    let col = ((p.lon + 180.0) / c).floor() as i64;
    (row, col)
}

/// Events sharing one grid cell, drawn as a single map marker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    #[serde(skip)]
    pub cell: (i64, i64),
    #[serde(rename = "lat")]
    pub centroid_lat: f64,
    #[serde(rename = "lon")]
    pub centroid_lon: f64,
    pub count: usize,
    #[serde(rename = "ids")]
    pub article_ids: Vec<String>,
    /// Earliest member, ties broken by id.
    #[serde(rename = "representative")]
    pub representative_id: String,
}

/// Groups the articles `query_bbox` returns by grid cell at `zoom`.
///
/// Clusters come out in `(row, column)` order with members in corpus order.
pub fn grid_cluster(
    corpus: &Corpus,
    bbox: &BoundingBox,
    zoom: u8,
    window: &TimeWindow,
) -> Result<Vec<Cluster>, QueryError> {
    if zoom > MAX_ZOOM {
        return Err(QueryError::InvalidArgument(format!(
            "zoom {zoom} out of range 0-{MAX_ZOOM}"
        )));
    }
    let mut cells: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for i in indices_in_box(corpus, bbox, window) {
        cells
            .entry(grid_cell(&corpus.articles()[i].location, zoom))
            .or_default()
            .push(i);
    }
    Ok(cells
        .into_iter()
        .map(|(cell, members)| {
            let n = members.len() as f64;
            let (lat_sum, lon_sum) = members.iter().fold((0.0, 0.0), |(la, lo), &i| {
                let p = corpus.articles()[i].location;
                (la + p.lat, lo + p.lon)
            });
            let article_ids: Vec<String> = members
                .iter()
                .map(|&i| corpus.articles()[i].id.clone())
                .collect();
            Cluster {
                cell,
                centroid_lat: lat_sum / n,
                centroid_lon: lon_sum / n,
                count: article_ids.len(),
                representative_id: article_ids[0].clone(),
                article_ids,
            }
        })
        .collect())
}
