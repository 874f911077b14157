//! Dataset cleaning: drop rows with unusable identity fields, impute the
//! rest, account for every input row.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::record::{parse_record, CrashRecord, DropReason, Parsed};
use super::schema::{RawRecord, Schema};
use crate::error::{Error, Result};

/// Bookkeeping for one cleaning run. `rows_read = rows_dropped + rows_kept`
/// always holds.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CleaningReport {
    pub rows_read: u64,
    pub rows_dropped: u64,
    pub rows_kept: u64,
    /// Imputed cell count per column.
    pub imputations: BTreeMap<String, u64>,
    /// Fill value used per column (median for numerics, sentinel category
    /// for text).
    pub fill_values: BTreeMap<String, serde_json::Value>,
    pub drop_reasons: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
}

fn median(values: &mut Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        Some(values[n / 2])
    } else {
        Some((values[n / 2 - 1] + values[n / 2]) / 2.0)
    }
}

#[derive(Debug)]
struct Pass1 {
    rows_read: u64,
    drop_reasons: BTreeMap<String, u64>,
    temp_values: Vec<f64>,
    pressure_values: Vec<f64>,
    temp_missing: u64,
    pressure_missing: u64,
    weather_missing: u64,
    rows_kept: u64,
}

fn record_drop(reasons: &mut BTreeMap<String, u64>, reason: DropReason) {
    *reasons.entry(reason.as_str().to_string()).or_insert(0) += 1;
}

/// Clean a re-iterable stream of raw rows. Two passes: the first computes
/// column medians over kept rows, the second imputes and emits. The stream
/// factory is called once per pass so inputs larger than memory can be
/// re-read from disk.
pub fn clean_to_sink<F, I>(mut make_stream: F, sink: &mut dyn FnMut(CrashRecord) -> Result<()>) -> Result<CleaningReport>
where
    F: FnMut() -> Result<I>,
    I: Iterator<Item = Result<RawRecord>>,
{
    // Pass 1: parse, tally drops, gather imputation statistics.
    let mut p1 = Pass1 {
        rows_read: 0,
        drop_reasons: BTreeMap::new(),
        temp_values: Vec::new(),
        pressure_values: Vec::new(),
        temp_missing: 0,
        pressure_missing: 0,
        weather_missing: 0,
        rows_kept: 0,
    };
    let mut seen_ids: HashSet<String> = HashSet::new();
    for raw in make_stream()? {
        let raw = raw?;
        p1.rows_read += 1;
        match parse_record(&raw) {
            Parsed::Dropped(d) => record_drop(&mut p1.drop_reasons, d.reason),
            Parsed::Record(r) => {
                if !seen_ids.insert(r.id.clone()) {
                    record_drop(&mut p1.drop_reasons, DropReason::DuplicateId);
                    continue;
                }
                p1.rows_kept += 1;
                match r.temperature_f {
                    Some(v) => p1.temp_values.push(v),
                    None => p1.temp_missing += 1,
                }
                match r.pressure_in {
                    Some(v) => p1.pressure_values.push(v),
                    None => p1.pressure_missing += 1,
                }
                if r.weather.is_none() {
                    p1.weather_missing += 1;
                }
            }
        }
    }
    if p1.rows_read == 0 {
        return Err(Error::EmptyDataset);
    }

    let mut warnings = Vec::new();
    let temp_fill = median(&mut p1.temp_values).unwrap_or_else(|| {
        if p1.temp_missing > 0 {
            warnings.push("no observed values for temperature_f; imputing 0".to_string());
        }
        0.0
    });
    let pressure_fill = median(&mut p1.pressure_values).unwrap_or_else(|| {
        if p1.pressure_missing > 0 {
            warnings.push("no observed values for pressure_in; imputing 0".to_string());
        }
        0.0
    });
    let weather_fill = "Unknown".to_string();
    let rows_dropped = p1.rows_read - p1.rows_kept;
    if rows_dropped * 2 > p1.rows_read {
        warnings.push(format!(
            "{rows_dropped} of {} rows dropped (>50%)",
            p1.rows_read
        ));
    }

    // Pass 2: re-parse and emit with imputations. Drop decisions are a pure
    // function of each row, so both passes agree.
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut emitted = 0u64;
    for raw in make_stream()? {
        let raw = raw?;
        if let Parsed::Record(r) = parse_record(&raw) {
            if !seen_ids.insert(r.id.clone()) {
                continue;
            }
            let temperature = r.temperature_f.unwrap_or(temp_fill);
            let pressure = r.pressure_in.unwrap_or(pressure_fill);
            let weather = r.weather.clone().unwrap_or_else(|| weather_fill.clone());
            sink(r.into_record(temperature, pressure, weather))?;
            emitted += 1;
        }
    }
    if emitted != p1.rows_kept {
        return Err(Error::Data(format!(
            "input changed between cleaning passes: {} kept in pass 1, {} in pass 2",
            p1.rows_kept, emitted
        )));
    }

    let mut imputations = BTreeMap::new();
    imputations.insert("temperature_f".to_string(), p1.temp_missing);
    imputations.insert("pressure_in".to_string(), p1.pressure_missing);
    imputations.insert("weather".to_string(), p1.weather_missing);
    let mut fill_values = BTreeMap::new();
    fill_values.insert("temperature_f".to_string(), serde_json::json!(temp_fill));
    fill_values.insert("pressure_in".to_string(), serde_json::json!(pressure_fill));
    fill_values.insert("weather".to_string(), serde_json::json!(weather_fill));

    Ok(CleaningReport {
        rows_read: p1.rows_read,
        rows_dropped,
        rows_kept: p1.rows_kept,
        imputations,
        fill_values,
        drop_reasons: p1.drop_reasons,
        warnings,
    })
}

/// Convenience form of [`clean_to_sink`] that collects the cleaned records.
pub fn clean_dataset<F, I>(make_stream: F) -> Result<(Vec<CrashRecord>, CleaningReport)>
where
    F: FnMut() -> Result<I>,
    I: Iterator<Item = Result<RawRecord>>,
{
    let mut records = Vec::new();
    let report = clean_to_sink(make_stream, &mut |r| {
        records.push(r);
        Ok(())
    })?;
    Ok((records, report))
}

/// Open a CSV file and yield its rows as [`RawRecord`]s. The returned
/// iterator surfaces structural CSV errors (bad quoting, wrong column
/// count) with their line number.
pub fn csv_records(path: &Path) -> Result<(Arc<Schema>, impl Iterator<Item = Result<RawRecord>>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, &e))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let schema = Schema::from_headers(&headers)?;
    let schema_for_iter = Arc::clone(&schema);
    let iter = reader.into_records().map(move |rec| match rec {
        Ok(row) => {
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let fields: Vec<&str> = row.iter().collect();
            RawRecord::new(Arc::clone(&schema_for_iter), line, &fields)
        }
        Err(e) => Err(Error::Csv {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        }),
    });
    Ok((schema, iter))
}

fn csv_error(path: &Path, e: &csv::Error) -> Error {
    Error::Csv {
        line: e.position().map(|p| p.line()).unwrap_or(0),
        msg: format!("{}: {e}", path.display()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "ID,Severity,Start_Time,State,Start_Lat,Start_Lng,Temperature(F),Pressure(in),Weather_Condition,Amenity,Bump,Crossing,Junction,Stop,Traffic_Signal";

    fn stream_of(csv_text: &str) -> impl FnMut() -> Result<std::vec::IntoIter<Result<RawRecord>>> + '_ {
        move || {
            let mut lines = csv_text.lines();
            let header: Vec<&str> = lines.next().unwrap().split(',').collect();
            let schema = Schema::from_headers(&header)?;
            let rows: Vec<Result<RawRecord>> = lines
                .enumerate()
                .map(|(i, l)| {
                    let fields: Vec<&str> = l.split(',').collect();
                    RawRecord::new(Arc::clone(&schema), i as u64 + 2, &fields)
                })
                .collect();
            Ok(rows.into_iter())
        }
    }

    fn fixture_row(id: &str, severity: &str, temp: &str, weather: &str) -> String {
        format!(
            "{id},{severity},2016-02-08 05:46:00,OH,39.9,-84.0,{temp},29.6,{weather},False,False,False,False,False,False"
        )
    }

    #[test]
    fn imputes_numeric_missing_with_median() {
        // 10 rows, 2 empty temperatures; kept medians over 30..=100.
        let mut text = String::from(HEADER);
        let temps = ["30", "40", "50", "60", "70", "80", "90", "100", "", ""];
        for (i, t) in temps.iter().enumerate() {
            text.push('\n');
            text.push_str(&fixture_row(&format!("A-{i}"), "2", t, "Clear"));
        }
        let (records, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(report.rows_read, 10);
        assert_eq!(report.rows_kept, 10);
        assert_eq!(report.imputations["temperature_f"], 2);
        assert_eq!(report.fill_values["temperature_f"], serde_json::json!(65.0));
        let imputed: Vec<&CrashRecord> = records.iter().filter(|r| r.id >= "A-8".to_string()).collect();
        assert_eq!(imputed.len(), 2);
        assert!(imputed.iter().all(|r| r.temperature_f == 65.0));
    }

    #[test]
    fn empty_weather_count_matches_imputations() {
        let mut text = String::from(HEADER);
        for i in 0..10 {
            let weather = if i % 5 == 0 { "" } else { "Clear" };
            text.push('\n');
            text.push_str(&fixture_row(&format!("A-{i}"), "2", "50", weather));
        }
        let (records, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(report.imputations["weather"], 2);
        assert_eq!(records.iter().filter(|r| r.weather == "Unknown").count(), 2);
    }

    #[test]
    fn missing_severity_drops_the_row() {
        let mut text = String::from(HEADER);
        text.push('\n');
        text.push_str(&fixture_row("A-0", "2", "50", "Clear"));
        text.push('\n');
        text.push_str(&fixture_row("A-1", "", "50", "Clear"));
        let (records, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(report.rows_dropped, 1);
        assert_eq!(report.drop_reasons["severity"], 1);
        assert_eq!(records.len(), 1);
        assert_eq!(report.rows_read, report.rows_dropped + report.rows_kept);
    }

    #[test]
    fn clean_input_reports_zero_imputations() {
        let mut text = String::from(HEADER);
        for i in 0..5 {
            text.push('\n');
            text.push_str(&fixture_row(&format!("A-{i}"), "3", "50", "Clear"));
        }
        let (records, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(report.rows_kept, report.rows_read);
        assert!(report.imputations.values().all(|&v| v == 0));
        assert_eq!(records.len(), 5);
    }

    #[test]
    fn cleaning_is_idempotent_on_clean_records() {
        let mut text = String::from(HEADER);
        for i in 0..6 {
            let t = if i < 3 { "" } else { "50" };
            text.push('\n');
            text.push_str(&fixture_row(&format!("A-{i}"), "2", t, "Clear"));
        }
        let (first, _) = clean_dataset(stream_of(&text)).unwrap();

        // Re-render the cleaned records as CSV and clean again.
        let mut round = String::from(HEADER);
        for r in &first {
            round.push('\n');
            round.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},False,False,False,False,False,False",
                r.id,
                r.severity,
                r.start_time.format("%Y-%m-%d %H:%M:%S"),
                r.state,
                r.start_lat,
                r.start_lng,
                r.temperature_f,
                r.pressure_in,
                r.weather
            ));
        }
        let (second, report) = clean_dataset(stream_of(&round)).unwrap();
        assert_eq!(first, second);
        assert!(report.imputations.values().all(|&v| v == 0));
        assert_eq!(report.rows_dropped, 0);
    }

    #[test]
    fn empty_input_is_an_error() {
        let text = String::from(HEADER);
        match clean_dataset(stream_of(&text)) {
            Err(Error::EmptyDataset) => {}
            other => panic!("expected EmptyDataset, got {other:?}"),
        }
    }

    #[test]
    fn majority_dropped_records_a_warning() {
        let mut text = String::from(HEADER);
        text.push('\n');
        text.push_str(&fixture_row("A-0", "2", "50", "Clear"));
        for i in 1..4 {
            text.push('\n');
            text.push_str(&fixture_row(&format!("A-{i}"), "9", "50", "Clear"));
        }
        let (_, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(report.rows_dropped, 3);
        assert!(report.warnings.iter().any(|w| w.contains(">50%")));
    }

    #[test]
    fn duplicate_ids_keep_first_occurrence() {
        let mut text = String::from(HEADER);
        text.push('\n');
        text.push_str(&fixture_row("A-0", "2", "10", "Clear"));
        text.push('\n');
        text.push_str(&fixture_row("A-0", "3", "20", "Rain"));
        let (records, report) = clean_dataset(stream_of(&text)).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].severity, 2);
        assert_eq!(report.drop_reasons["duplicate_id"], 1);
    }
}
