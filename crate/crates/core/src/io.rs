//! Text formats for forms: CSV columns and line-delimited JSON records.
//!
//! Elements are written in the ring's canonical text encoding, so both
//! formats parse back to identical series.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{LabeledForm, Weight};
use crate::hecke::EigenData;
use crate::ring::{format_rational, CoeffRing};
use crate::series::QExpansion;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Records,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "records" => Ok(Format::Records),
            _ => Err(Error::Parse(format!("unknown format {s:?}, expected csv or records"))),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Header `n,f1,...,fk`, then one row per coefficient index up to the
/// smallest precision among the forms.
pub fn write_csv<W: Write>(out: W, forms: &[&QExpansion]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string()];
    header.extend((1..=forms.len()).map(|i| format!("f{i}")));
    w.write_record(&header).map_err(csv_err)?;
    let prec = forms.iter().map(|f| f.prec()).min().unwrap_or(0);
    let mut row = Vec::with_capacity(forms.len() + 1);
    for n in 0..prec {
        row.clear();
        row.push(n.to_string());
        row.extend(forms.iter().map(|f| f.coeff(n).to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_csv`]; the ring is not stored in the file.
pub fn read_csv<R: std::io::Read>(input: R, ring: CoeffRing) -> Result<Vec<QExpansion>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let k = header.len().saturating_sub(1);
    let well_formed = header.get(0) == Some("n")
        && header.iter().skip(1).enumerate().all(|(i, h)| h == format!("f{}", i + 1));
    if !well_formed {
        return Err(Error::Parse("expected header n,f1,f2,...".into()));
    }
    let mut cols = vec![Vec::new(); k];
    for (expect, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let n: usize = rec[0].parse().map_err(|_| Error::Parse(format!("bad index {:?}", &rec[0])))?;
        if n != expect {
            return Err(Error::Parse(format!("row {expect} has index {n}")));
        }
        for (col, field) in cols.iter_mut().zip(rec.iter().skip(1)) {
            col.push(ring.parse_elem(field)?);
        }
    }
    cols.iter().map(|c| QExpansion::from_elems(ring, c)).collect()
}

#[derive(Serialize, Deserialize)]
struct FormRecord {
    label: String,
    weight: String,
    ring: String,
    coeffs: Vec<String>,
}

/// One JSON object per line with label, weight, ring and coefficients.
pub fn write_records<W: Write>(mut out: W, forms: &[LabeledForm]) -> Result<()> {
    for f in forms {
        let rec = FormRecord {
            label: f.label.clone(),
            weight: f.weight.to_string(),
            ring: f.series.ring().to_string(),
            coeffs: f.series.coeffs().iter().map(ToString::to_string).collect(),
        };
        serde_json::to_writer(&mut out, &rec).map_err(|e| Error::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<LabeledForm>> {
    let mut forms = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: FormRecord = serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
        let ring: CoeffRing = rec.ring.parse()?;
        let coeffs = rec.coeffs.iter().map(|c| ring.parse_elem(c)).collect::<Result<Vec<_>>>()?;
        forms.push(LabeledForm {
            series: QExpansion::from_elems(ring, &coeffs)?,
            weight: rec.weight.parse::<Weight>()?,
            label: rec.label,
        });
    }
    Ok(forms)
}

pub fn write_forms<W: Write>(out: W, forms: &[LabeledForm], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, &forms.iter().map(|f| &f.series).collect::<Vec<_>>()),
        Format::Records => write_records(out, forms),
    }
}

#[derive(Serialize)]
struct EigenspaceReport {
    eigenvalue: String,
    multiplicity: usize,
    vectors: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct FactorReport {
    coeffs: Vec<String>,
    multiplicity: usize,
}

#[derive(Serialize)]
struct EigenReport {
    weight: String,
    construction: String,
    flavor: String,
    p: u64,
    labels: Vec<String>,
    matrix: Vec<Vec<String>>,
    charpoly: Vec<String>,
    eigenspaces: Vec<EigenspaceReport>,
    unsplit: Vec<FactorReport>,
}

/// JSON summary of a Hecke decomposition: matrix, characteristic
/// polynomial (constant term first), eigenvalues with combination vectors
/// in the basis order, and factors without rational roots.
pub fn write_eigen_report<W: Write>(mut out: W, data: &EigenData) -> Result<()> {
    let rats = |v: &[num_rational::BigRational]| v.iter().map(format_rational).collect::<Vec<_>>();
    let report = EigenReport {
        weight: data.space.weight.to_string(),
        construction: data.space.construction.to_string(),
        flavor: data.space.flavor.to_string(),
        p: data.p,
        labels: data.space.forms.iter().map(|f| f.label.clone()).collect(),
        matrix: data.matrix.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        charpoly: rats(&data.split.charpoly),
        eigenspaces: data
            .split
            .eigenspaces
            .iter()
            .map(|s| EigenspaceReport {
                eigenvalue: format_rational(&s.value),
                multiplicity: s.multiplicity,
                vectors: s.vectors.iter().map(|v| rats(v)).collect(),
            })
            .collect(),
        unsplit: data
            .split
            .unsplit
            .iter()
            .map(|u| FactorReport { coeffs: rats(&u.coeffs), multiplicity: u.multiplicity })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}
