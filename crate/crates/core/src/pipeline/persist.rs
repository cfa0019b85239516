use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{GapRecord, PipelineError};

fn io_err(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Io { path: path.display().to_string(), message: e.to_string() }
}

/// `g6,n,edges,alpha,theta,delta,ratio` with a header row and LF endings.
pub fn to_csv_string(records: &[GapRecord]) -> Result<String, PipelineError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| PipelineError::Csv(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record(["g6", "n", "edges", "alpha", "theta", "delta", "ratio"])
            .map_err(|e| PipelineError::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| PipelineError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| PipelineError::Csv(e.to_string()))
}

pub fn write_csv(path: &Path, records: &[GapRecord]) -> Result<(), PipelineError> {
    fs::write(path, to_csv_string(records)?).map_err(|e| io_err(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<GapRecord>, PipelineError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    r.deserialize().collect::<Result<_, _>>().map_err(|e| PipelineError::Csv(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| PipelineError::Json(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}
