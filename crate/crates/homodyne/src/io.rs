//! CSV and JSON formats.
//!
//! Datasets: a first line holding the JSON metadata object
//! `{"state", "eta", "f", "N", "seed"}`, then CSV rows `phase_index,phi,x`
//! under a header.

use std::io::{BufRead, Write};

use homodyne_core::reconstruction::{DatasetMeta, HomodyneDataset, HomodyneRecord};
use homodyne_core::{DensityMatrixEstimate, ErrorMatrix, RealMatrix};
use serde::Serialize;

use crate::error::{CliError, Result};

pub fn write_dataset<W: Write>(mut w: W, ds: &HomodyneDataset) -> Result<()> {
    serde_json::to_writer(&mut w, &ds.meta)?;
    writeln!(w)?;
    let mut csv = csv::Writer::from_writer(w);
    for r in &ds.records {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_dataset<R: BufRead>(mut r: R) -> Result<HomodyneDataset> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let meta: DatasetMeta = serde_json::from_str(first.trim())?;
    let mut csv = csv::Reader::from_reader(r);
    let records = csv.deserialize::<HomodyneRecord>().collect::<std::result::Result<Vec<_>, _>>()?;
    if records.len() != meta.n_records {
        return Err(CliError::Config(format!(
            "dataset header announces {} records, found {}",
            meta.n_records,
            records.len()
        )));
    }
    Ok(HomodyneDataset { meta, records })
}

#[derive(Debug, Serialize)]
struct EstimateRow {
    n: usize,
    m: usize,
    re: f64,
    im: f64,
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
}

/// `n,m,re,im,epsilon[,std_error]`
pub fn write_estimate_csv<W: Write>(w: W, est: &DensityMatrixEstimate, std_errors: Option<&RealMatrix>) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for (n, m, v) in est.elements.iter() {
        csv.serialize(EstimateRow {
            n,
            m,
            re: v.re,
            im: v.im,
            epsilon: est.deviation.get(n, m),
            std_error: std_errors.map(|s| s.get(n, m)),
        })?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SigmaRow {
    n: usize,
    m: usize,
    re_sigma: f64,
    im_sigma: f64,
    sigma: f64,
}

/// `n,m,re_sigma,im_sigma,sigma`
pub fn write_errors_csv<W: Write>(w: W, e: &ErrorMatrix) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for (n, m, s) in e.sigma.iter() {
        csv.serialize(SigmaRow { n, m, re_sigma: e.re_sigma.get(n, m), im_sigma: e.im_sigma.get(n, m), sigma: s })?;
    }
    csv.flush()?;
    Ok(())
}

/// Rows of plain serialisable records.
pub fn write_rows<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

/// A header followed by numeric rows.
pub fn write_table<W: Write>(w: W, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row.iter().map(|v| v.to_string()))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}
