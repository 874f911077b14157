//! Input CSV schema: required columns, null sentinels, header resolution.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cell values treated as missing, compared case-insensitively after
/// trimming. The empty string is always missing.
pub const NULL_SENTINELS: [&str; 4] = ["na", "n/a", "null", "none"];

pub const COL_ID: &str = "ID";
pub const COL_SEVERITY: &str = "Severity";
pub const COL_START_TIME: &str = "Start_Time";
pub const COL_STATE: &str = "State";
pub const COL_START_LAT: &str = "Start_Lat";
pub const COL_START_LNG: &str = "Start_Lng";
pub const COL_TEMPERATURE: &str = "Temperature(F)";
pub const COL_PRESSURE: &str = "Pressure(in)";
pub const COL_WEATHER: &str = "Weather_Condition";

/// Point-of-interest flag columns, in the fixed order used by
/// `CrashRecord::poi_flags`.
pub const POI_COLUMNS: [&str; 6] = [
    "Amenity",
    "Bump",
    "Crossing",
    "Junction",
    "Stop",
    "Traffic_Signal",
];

/// Short names of the POI flags in `poi_flags` order.
pub const POI_NAMES: [&str; 6] = ["amenity", "bump", "crossing", "junction", "stop", "traffic_signal"];

fn required_columns() -> Vec<&'static str> {
    let mut cols = vec![
        COL_ID,
        COL_SEVERITY,
        COL_START_TIME,
        COL_STATE,
        COL_START_LAT,
        COL_START_LNG,
        COL_TEMPERATURE,
        COL_PRESSURE,
        COL_WEATHER,
    ];
    cols.extend(POI_COLUMNS);
    cols
}

/// Resolved header of one input file. Column names are matched
/// case-insensitively after trimming; columns outside the declared set are
/// kept in the row data and listed in `unknown`.
#[derive(Debug)]
pub struct Schema {
    headers: Vec<String>,
    by_name: HashMap<String, usize>,
    required_idx: HashMap<&'static str, usize>,
    /// Header names that are not part of the declared column set.
    pub unknown: Vec<String>,
}

impl Schema {
    pub fn from_headers<S: AsRef<str>>(raw: &[S]) -> Result<Arc<Schema>> {
        let headers: Vec<String> = raw.iter().map(|h| h.as_ref().trim().to_string()).collect();
        let mut by_name = HashMap::new();
        for (i, h) in headers.iter().enumerate() {
            by_name.entry(h.to_lowercase()).or_insert(i);
        }
        let mut required_idx = HashMap::new();
        for col in required_columns() {
            match by_name.get(&col.to_lowercase()) {
                Some(&i) => {
                    required_idx.insert(col, i);
                }
                None => return Err(Error::MissingColumn(col.to_string())),
            }
        }
        let known: Vec<String> = required_columns()
            .iter()
            .map(|c| c.to_lowercase())
            .collect();
        let unknown = headers
            .iter()
            .filter(|h| !known.contains(&h.to_lowercase()))
            .cloned()
            .collect();
        Ok(Arc::new(Schema {
            headers,
            by_name,
            required_idx,
            unknown,
        }))
    }

    pub fn len(&self) -> usize {
        self.headers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.headers.is_empty()
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    /// Position of a declared column. Panics on undeclared names; header
    /// validation happens in `from_headers`.
    pub fn required(&self, name: &'static str) -> usize {
        self.required_idx[name]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.by_name.get(&name.to_lowercase()).copied()
    }
}

/// One CSV row exactly as read: every cell optional, missing iff empty or a
/// null sentinel. `line` is the 1-based line number in the source file.
#[derive(Debug, Clone)]
pub struct RawRecord {
    pub line: u64,
    schema: Arc<Schema>,
    cells: Vec<Option<String>>,
}

impl RawRecord {
    pub fn new<S: AsRef<str>>(schema: Arc<Schema>, line: u64, fields: &[S]) -> Result<RawRecord> {
        if fields.len() != schema.len() {
            return Err(Error::Csv {
                line,
                msg: format!(
                    "expected {} columns, found {}",
                    schema.len(),
                    fields.len()
                ),
            });
        }
        let cells = fields
            .iter()
            .map(|f| {
                let t = f.as_ref().trim();
                if t.is_empty() || NULL_SENTINELS.iter().any(|s| t.eq_ignore_ascii_case(s)) {
                    None
                } else {
                    Some(t.to_string())
                }
            })
            .collect();
        Ok(RawRecord {
            line,
            schema,
            cells,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Cell by column name; `None` if the column is absent or the cell is
    /// missing.
    pub fn get(&self, name: &str) -> Option<&str> {
        self.schema
            .position(name)
            .and_then(|i| self.cells[i].as_deref())
    }

    pub(crate) fn get_required(&self, name: &'static str) -> Option<&str> {
        self.cells[self.schema.required(name)].as_deref()
    }
}
