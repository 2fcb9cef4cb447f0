//! Per-tick simulation records and their CSV form.
//!
//! The header is `tick,covered,pos_0,...,pos_{m-1}` followed by one row per
//! tick, ASCII decimal, newline-terminated.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub tick: u64,
    pub covered: usize,
    pub positions: Vec<NodeId>,
}

pub fn write_trace<W: Write>(records: &[TraceRecord], out: W) -> Result<()> {
    let agents = records.first().map_or(0, |r| r.positions.len());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let header = ["tick".to_string(), "covered".to_string()]
        .into_iter()
        .chain((0..agents).map(|i| format!("pos_{i}")));
    w.write_record(header)?;
    for rec in records {
        if rec.positions.len() != agents {
            return Err(Error::input("trace records disagree on the agent count"));
        }
        let row = [rec.tick.to_string(), rec.covered.to_string()]
            .into_iter()
            .chain(rec.positions.iter().map(|p| p.to_string()));
        w.write_record(row)?;
    }
    w.flush().map_err(|e| Error::io("<trace>", e))?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "tick" || &headers[1] != "covered" {
        return Err(Error::Parse {
            line: 1,
            message: "trace header must start with `tick,covered`".into(),
        });
    }
    let mut out = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row = row?;
        let line = idx + 2;
        let field = |k: usize| -> Result<u64> {
            row[k].parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad integer `{}`", &row[k]),
            })
        };
        out.push(TraceRecord {
            tick: field(0)?,
            covered: field(1)? as usize,
            positions: (2..row.len())
                .map(|k| field(k).map(|v| v as NodeId))
                .collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

pub fn save_trace(records: &[TraceRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace(records, std::io::BufWriter::new(file))
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_trace(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_layout() {
        let recs = vec![
            TraceRecord {
                tick: 0,
                covered: 3,
                positions: vec![2, 2],
            },
            TraceRecord {
                tick: 1,
                covered: 5,
                positions: vec![1, 3],
            },
        ];
        let mut buf = Vec::new();
        write_trace(&recs, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tick,covered,pos_0,pos_1\n0,3,2,2\n1,5,1,3\n"
        );
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_trace("t,c\n1,2\n".as_bytes()).is_err());
        assert!(read_trace("tick,covered,pos_0\n1,2,x\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(rows in proptest::collection::vec((0usize..100, proptest::collection::vec(0usize..1000, 3)), 0..30)) {
            let recs: Vec<TraceRecord> = rows
                .into_iter()
                .enumerate()
                .map(|(t, (c, p))| TraceRecord { tick: t as u64, covered: c, positions: p })
                .collect();
            let mut buf = Vec::new();
            write_trace(&recs, &mut buf).unwrap();
            prop_assert_eq!(read_trace(buf.as_slice()).unwrap(), recs);
        }
    }
}
