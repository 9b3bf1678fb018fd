//! Two-arm dataset CSV: header `arm,time,event` with `arm` 0 (control) or
//! 1 (treatment), `time` in decimal days, `event` 0 (censored) or 1.
//! Shared by the inference layer and the CLI.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::weibull::{Dataset, SubjectRecord};

pub const DATASET_HEADER: [&str; 3] = ["arm", "time", "event"];

/// Both arms of a trial dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TwoArmData {
    pub control: Dataset,
    pub treatment: Dataset,
}

impl TwoArmData {
    pub fn arm(&self, arm: u8) -> Option<&Dataset> {
        match arm {
            0 => Some(&self.control),
            1 => Some(&self.treatment),
            _ => None,
        }
    }
}

/// Write both arms, control rows first, in record order.
pub fn write_two_arm_csv<W: Write>(
    control: &Dataset,
    treatment: &Dataset,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(DATASET_HEADER).map_err(csv_io)?;
    for (arm, ds) in [(0u8, control), (1u8, treatment)] {
        for rec in ds.records() {
            w.write_record([
                arm.to_string(),
                rec.time().to_string(),
                u8::from(rec.event()).to_string(),
            ])
            .map_err(csv_io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Parse a two-arm dataset, validating the header and every field. Errors
/// carry the 1-based line number of the offending row.
pub fn read_two_arm_csv<R: Read>(reader: R) -> Result<TwoArmData> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = r.headers().map_err(csv_io)?.clone();
    if headers.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(Error::Csv {
            line: 1,
            msg: format!(
                "expected header arm,time,event, got {:?}",
                headers.iter().collect::<Vec<_>>()
            ),
        });
    }

    let mut data = TwoArmData::default();
    for record in r.records() {
        let record = record.map_err(csv_io)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            return Err(Error::Csv {
                line,
                msg: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let arm: u8 = parse_field(&record[0], "arm", line)?;
        let time: f64 = parse_field(&record[1], "time", line)?;
        let event: u8 = parse_field(&record[2], "event", line)?;
        if event > 1 {
            return Err(Error::Csv {
                line,
                msg: format!("event must be 0 or 1, got {event}"),
            });
        }
        let subject = SubjectRecord::new(time, event == 1).map_err(|e| Error::Csv {
            line,
            msg: e.to_string(),
        })?;
        match arm {
            0 => data.control.push(subject),
            1 => data.treatment.push(subject),
            other => {
                return Err(Error::Csv {
                    line,
                    msg: format!("arm must be 0 or 1, got {other}"),
                })
            }
        }
    }
    Ok(data)
}

fn parse_field<T: std::str::FromStr>(raw: &str, name: &str, line: u64) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Csv {
        line,
        msg: format!("cannot parse {name} from {raw:?}"),
    })
}

fn csv_io(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Csv {
            line: p.line(),
            msg: e.to_string(),
        },
        None => Error::Io(std::io::Error::other(e)),
    }
}
