//! Typed accident records and per-row parsing/validation.

use chrono::{Datelike, NaiveDateTime, Timelike};

use super::schema::{
    RawRecord, COL_ID, COL_PRESSURE, COL_SEVERITY, COL_START_LAT, COL_START_LNG, COL_START_TIME,
    COL_STATE, COL_TEMPERATURE, COL_WEATHER, POI_COLUMNS,
};

/// 50 US states plus DC.
pub const STATE_CODES: [&str; 51] = [
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "ID", "IL", "IN",
    "IA", "KS", "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH",
    "NJ", "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT",
    "VT", "VA", "WA", "WV", "WI", "WY",
];

/// One cleaned accident row. Every field is present; imputable fields have
/// been filled by the cleaner.
#[derive(Debug, Clone, PartialEq)]
pub struct CrashRecord {
    pub id: String,
    /// Traffic-impact severity, 1..=4.
    pub severity: u8,
    /// Local wall-clock time, second resolution.
    pub start_time: NaiveDateTime,
    pub year: u16,
    pub hour: u8,
    pub state: String,
    pub start_lat: f64,
    pub start_lng: f64,
    pub temperature_f: f64,
    pub pressure_in: f64,
    /// Trimmed, title-cased; "Unknown" when imputed.
    pub weather: String,
    /// amenity, bump, crossing, junction, stop, traffic_signal.
    pub poi_flags: [bool; 6],
}

/// Parsed row before imputation: identity fields validated, imputable
/// fields still optional.
#[derive(Debug, Clone)]
pub struct ParsedRecord {
    pub id: String,
    pub severity: u8,
    pub start_time: NaiveDateTime,
    pub year: u16,
    pub hour: u8,
    pub state: String,
    pub start_lat: f64,
    pub start_lng: f64,
    pub temperature_f: Option<f64>,
    pub pressure_in: Option<f64>,
    pub weather: Option<String>,
    pub poi_flags: [bool; 6],
}

impl ParsedRecord {
    pub fn into_record(self, temperature_f: f64, pressure_in: f64, weather: String) -> CrashRecord {
        CrashRecord {
            id: self.id,
            severity: self.severity,
            start_time: self.start_time,
            year: self.year,
            hour: self.hour,
            state: self.state,
            start_lat: self.start_lat,
            start_lng: self.start_lng,
            temperature_f,
            pressure_in,
            weather,
            poi_flags: self.poi_flags,
        }
    }
}

/// Why a row was rejected. These are data outcomes, not process errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    Id,
    Severity,
    StartTime,
    State,
    Coordinates,
    DuplicateId,
}

impl DropReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            DropReason::Id => "id",
            DropReason::Severity => "severity",
            DropReason::StartTime => "start_time",
            DropReason::State => "state",
            DropReason::Coordinates => "coordinates",
            DropReason::DuplicateId => "duplicate_id",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropDecision {
    pub line: u64,
    pub reason: DropReason,
}

#[derive(Debug)]
pub enum Parsed {
    Record(Box<ParsedRecord>),
    Dropped(DropDecision),
}

/// Title-case a weather description: first letter of each whitespace-split
/// word upper, rest lower. "light RAIN" and "Light Rain" normalize alike.
pub fn normalize_category(s: &str) -> String {
    s.trim()
        .split_whitespace()
        .map(|word| {
            let mut chars = word.chars();
            match chars.next() {
                Some(c) => c.to_uppercase().chain(chars.flat_map(|c| c.to_lowercase())).collect(),
                None => String::new(),
            }
        })
        .collect::<Vec<String>>()
        .join(" ")
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    // "YYYY-MM-DD HH:MM:SS" with optional fractional seconds; fractions are
    // discarded (records are second resolution).
    NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f")
        .ok()
        .map(|t| t.with_nanosecond(0).unwrap())
}

fn parse_finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_bool_flag(s: Option<&str>) -> bool {
    match s {
        Some(v) => v.eq_ignore_ascii_case("true") || v == "1",
        None => false,
    }
}

/// Validate and type one raw row. Identity fields (id, severity,
/// start_time, state, coordinates) are fatal when missing or invalid and
/// yield a `DropDecision`; temperature, pressure and weather stay optional
/// for the cleaner to impute.
pub fn parse_record(raw: &RawRecord) -> Parsed {
    let drop = |reason| Parsed::Dropped(DropDecision {
        line: raw.line,
        reason,
    });

    let id = match raw.get_required(COL_ID) {
        Some(v) => v.to_string(),
        None => return drop(DropReason::Id),
    };
    let severity = match raw.get_required(COL_SEVERITY).and_then(|v| v.parse::<u8>().ok()) {
        Some(s) if (1..=4).contains(&s) => s,
        _ => return drop(DropReason::Severity),
    };
    let start_time = match raw.get_required(COL_START_TIME).and_then(parse_timestamp) {
        Some(t) => t,
        None => return drop(DropReason::StartTime),
    };
    let state = match raw.get_required(COL_STATE) {
        Some(v) => {
            let up = v.to_uppercase();
            if STATE_CODES.contains(&up.as_str()) {
                up
            } else {
                return drop(DropReason::State);
            }
        }
        None => return drop(DropReason::State),
    };
    let start_lat = match raw.get_required(COL_START_LAT).and_then(parse_finite) {
        Some(v) if (-90.0..=90.0).contains(&v) => v,
        _ => return drop(DropReason::Coordinates),
    };
    let start_lng = match raw.get_required(COL_START_LNG).and_then(parse_finite) {
        Some(v) if (-180.0..=180.0).contains(&v) => v,
        _ => return drop(DropReason::Coordinates),
    };

    // Unparseable numerics count as missing, same as blank cells.
    let temperature_f = raw.get_required(COL_TEMPERATURE).and_then(parse_finite);
    let pressure_in = raw.get_required(COL_PRESSURE).and_then(parse_finite);
    let weather = raw
        .get_required(COL_WEATHER)
        .map(normalize_category)
        .filter(|w| !w.is_empty());

    let mut poi_flags = [false; 6];
    for (i, col) in POI_COLUMNS.iter().enumerate() {
        poi_flags[i] = parse_bool_flag(raw.get(col));
    }

    let year = start_time.year().clamp(0, u16::MAX as i32) as u16;
    let hour = start_time.hour() as u8;

    Parsed::Record(Box::new(ParsedRecord {
        id,
        severity,
        start_time,
        year,
        hour,
        state,
        start_lat,
        start_lng,
        temperature_f,
        pressure_in,
        weather,
        poi_flags,
    }))
}
