//! Labeled dataset CSV.

use std::io::{Read, Write};

use shootcalc_core::datagen::DatasetRecord;
use shootcalc_core::Vec2;

use crate::{fmt_f64, FormatError};

pub const HEADER: [&str; 9] = [
    "scenario_id",
    "ball_x",
    "ball_y",
    "opp_x",
    "opp_y",
    "poscount",
    "target_x",
    "target_y",
    "margin",
];

pub fn write_dataset<W: Write>(out: W, records: &[DatasetRecord]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.scenario_id.to_string(),
            fmt_f64(r.ball.x),
            fmt_f64(r.ball.y),
            fmt_f64(r.opponent.x),
            fmt_f64(r.opponent.y),
            r.poscount.to_string(),
            fmt_f64(r.target.x),
            fmt_f64(r.target.y),
            fmt_f64(r.margin),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub fn read_dataset<R: Read>(input: R) -> Result<Vec<DatasetRecord>, ReadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = Vec::new();
    let mut saw_header = false;
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if !saw_header {
            if row.iter().ne(HEADER) {
                return Err(FormatError::new(line, format!("expected header {}", HEADER.join(","))).into());
            }
            saw_header = true;
            continue;
        }
        if row.len() != HEADER.len() {
            return Err(FormatError::new(
                line,
                format!("expected {} fields, got {}", HEADER.len(), row.len()),
            )
            .into());
        }
        let float = |i: usize| -> Result<f64, FormatError> {
            row[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| FormatError::new(line, format!("{}: not a finite number: {:?}", HEADER[i], &row[i])))
        };
        let scenario_id = row[0]
            .parse::<u64>()
            .map_err(|_| FormatError::new(line, format!("scenario_id: not an integer: {:?}", &row[0])))?;
        let poscount = row[5]
            .parse::<u32>()
            .map_err(|_| FormatError::new(line, format!("poscount: not an integer: {:?}", &row[5])))?;
        records.push(DatasetRecord {
            scenario_id,
            ball: Vec2::new(float(1)?, float(2)?),
            opponent: Vec2::new(float(3)?, float(4)?),
            poscount,
            target: Vec2::new(float(6)?, float(7)?),
            margin: float(8)?,
        });
    }
    if !saw_header {
        return Err(FormatError::new(1, "missing header").into());
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(i: u64) -> DatasetRecord {
        DatasetRecord {
            scenario_id: i,
            ball: Vec2::new(40.0 + i as f64 / 7.0, -3.25),
            opponent: Vec2::new(50.1, 1.0 / 3.0),
            poscount: (i % 31) as u32,
            target: Vec2::new(52.5, -6.51),
            margin: -0.1 * i as f64,
        }
    }

    #[test]
    fn empty_dataset_is_header_only() {
        let mut buf = Vec::new();
        write_dataset(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "scenario_id,ball_x,ball_y,opp_x,opp_y,poscount,target_x,target_y,margin\n"
        );
        assert!(read_dataset(&buf[..]).unwrap().is_empty());
    }

    #[test]
    fn small_round_trip() {
        let recs: Vec<DatasetRecord> = (0..20).map(record).collect();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &recs).unwrap();
        assert_eq!(read_dataset(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn missing_column_cites_line() {
        let text = "scenario_id,ball_x,ball_y,opp_x,opp_y,poscount,target_x,target_y,margin\n\
                    0,1,2,3,4,5,6,7,8\n\
                    1,1,2,3,4,5,6,7\n";
        match read_dataset(text.as_bytes()) {
            Err(ReadError::Format(e)) => {
                assert_eq!(e.line, 3);
                assert!(e.message.contains("expected 9 fields"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_number_and_header() {
        let text = "scenario_id,ball_x,ball_y,opp_x,opp_y,poscount,target_x,target_y,margin\n0,1,x,3,4,5,6,7,8\n";
        match read_dataset(text.as_bytes()) {
            Err(ReadError::Format(e)) => assert_eq!(e.line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_dataset("a,b\n".as_bytes()).is_err());
        assert!(read_dataset("".as_bytes()).is_err());
    }
}
