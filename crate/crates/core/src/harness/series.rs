//! Per-round CSV to long format: one `(round, metric, value, run_id)` row per
//! logged metric, ready for external plotting tools.

use std::io::{Read, Write};

use crate::error::{Error, Result};

const REQUIRED: [&str; 5] = ["round", "acc", "asr", "aggregator", "seed"];

/// Reads a per-round CSV (`round,acc,asr,aggregator,seed`) and writes
/// `round,metric,value,run_id` rows, `run_id = "<aggregator>-<seed>"`.
/// Empty `asr` cells are skipped. Returns the number of rows written.
pub fn emit_series<R: Read, W: Write>(input: R, output: W) -> Result<usize> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut writer = csv::Writer::from_writer(output);
    writer.write_record(["round", "metric", "value", "run_id"])?;

    let mut records = reader.records();
    let header = match records.next() {
        None => {
            writer.flush().map_err(|e| Error::io("<output>", e))?;
            return Ok(0);
        }
        Some(h) => h?,
    };
    let mut columns = [0usize; 5];
    for (slot, name) in columns.iter_mut().zip(REQUIRED) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MalformedRow {
                line: 1,
                message: format!("missing column {name:?}"),
            })?;
    }
    let [round_col, acc_col, asr_col, agg_col, seed_col] = columns;

    let mut written = 0;
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(Error::MalformedRow {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let field = |col: usize| record.get(col).unwrap_or("").trim();
        let round: usize = field(round_col).parse().map_err(|_| Error::MalformedRow {
            line,
            message: format!("round {:?} is not a non-negative integer", field(round_col)),
        })?;
        let run_id = format!("{}-{}", field(agg_col), field(seed_col));
        for (metric, col) in [("acc", acc_col), ("asr", asr_col)] {
            let raw = field(col);
            if raw.is_empty() && metric == "asr" {
                continue;
            }
            let value: f64 = raw.parse().map_err(|_| Error::MalformedRow {
                line,
                message: format!("{metric} {raw:?} is not a number"),
            })?;
            writer.write_record([
                round.to_string(),
                metric.to_string(),
                value.to_string(),
                run_id.clone(),
            ])?;
            written += 1;
        }
    }
    writer.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(written)
}
