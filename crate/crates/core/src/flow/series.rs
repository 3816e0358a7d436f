use std::io::{Read, Write};

use crate::curve::{Curve, Diagnostics};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "t",
    "L",
    "A",
    "Q",
    "E",
    "I",
    "h1_norm",
    "centered_h1",
    "centroid_x",
    "centroid_y",
    "grad_norm",
    "step",
];

/// One recorded time: diagnostics plus the accepted-step count.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub diagnostics: Diagnostics,
    pub step: usize,
}

/// Diagnostics at strictly increasing times, optionally with the curve at
/// each record (series read back from CSV carry no curves).
#[derive(Debug, Clone, Default)]
pub struct TimeSeries {
    records: Vec<Record>,
    curves: Vec<Curve>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record and its curve. Rejects non-increasing times.
    pub fn push(&mut self, diagnostics: Diagnostics, step: usize, curve: Curve) -> Result<()> {
        self.push_record(Record { diagnostics, step })?;
        self.curves.push(curve);
        Ok(())
    }

    fn push_record(&mut self, record: Record) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(record.diagnostics.t > last.diagnostics.t) {
                return Err(Error::NonMonotoneSeries {
                    index: self.records.len(),
                });
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostics> {
        self.records.iter().map(|r| &r.diagnostics)
    }

    /// Curves aligned with the records; empty for series loaded from CSV.
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.records {
            let d = &r.diagnostics;
            let row = [
                d.t,
                d.length,
                d.area,
                d.dirichlet,
                d.energy,
                d.iso_ratio,
                d.h1_norm,
                d.centered_h1_norm,
                d.centroid[0],
                d.centroid[1],
                d.grad_norm,
            ];
            let mut fields: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            fields.push(r.step.to_string());
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Lines starting with `#` are skipped.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let headers = r.headers().map_err(csv_err)?.clone();
        if headers.iter().ne(CSV_HEADER) {
            return Err(Error::Parse(format!("unexpected time series header {headers:?}")));
        }
        let mut out = Self::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let row = rec.position().map_or(line as u64 + 2, |p| p.line());
            let num = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("line {row}: missing field {}", CSV_HEADER[i])))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {row}, field {}: {e}", CSV_HEADER[i])))
            };
            let step = rec
                .get(11)
                .ok_or_else(|| Error::Parse(format!("line {row}: missing field step")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {row}, field step: {e}")))?;
            let diagnostics = Diagnostics {
                t: num(0)?,
                length: num(1)?,
                area: num(2)?,
                dirichlet: num(3)?,
                energy: num(4)?,
                iso_ratio: num(5)?,
                h1_norm: num(6)?,
                centered_h1_norm: num(7)?,
                centroid: [num(8)?, num(9)?],
                grad_norm: num(10)?,
            };
            out.push_record(Record { diagnostics, step })?;
        }
        Ok(out)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
