//! File formats: potential samples, continuum and discrete scattering data,
//! coefficient dumps and least-squares residuals.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::direct::{DiscreteDatum, HalfPlane, ScatteringSample};
use crate::error::{Error, Result};
use crate::inverse::CoefficientVectors;

pub const POTENTIAL_HEADER: [&str; 5] = ["x", "re_q", "im_q", "re_r", "im_r"];
pub const SCATTERING_HEADER: [&str; 9] = [
    "rho", "re_a", "im_a", "re_atil", "im_atil", "re_b", "im_b", "re_btil", "im_btil",
];
pub const COEFFICIENT_HEADER: [&str; 5] = ["n", "re_c1", "im_c1", "re_c2", "im_c2"];
pub const RESIDUAL_HEADER: [&str; 3] = ["x", "res1", "res2"];

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => parse_err(path, format!("{other:?}")),
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV with the exact `header`, returning the numeric rows.
fn read_rows<R: Read>(input: R, path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let got = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(parse_err(
            path,
            format!("expected header `{}`, found `{}`", header.join(","), got.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| parse_err(path, format!("row {}: {e}", line + 2)))?;
        if row.len() != header.len() {
            return Err(parse_err(path, format!("row {} has {} fields", line + 2, row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(path, format!("row {} holds a non-finite value", line + 2)));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn write_potential<W: Write>(out: W, x: &[f64], q: &[Complex64], r: &[Complex64]) -> csv::Result<()> {
    write_rows(
        out,
        &POTENTIAL_HEADER,
        (0..x.len()).map(|i| {
            vec![
                fmt_float(x[i]),
                fmt_float(q[i].re),
                fmt_float(q[i].im),
                fmt_float(r[i].re),
                fmt_float(r[i].im),
            ]
        }),
    )
}

pub fn write_potential_csv(path: &Path, x: &[f64], q: &[Complex64], r: &[Complex64]) -> Result<()> {
    write_potential(create(path)?, x, q, r).map_err(|e| csv_error(path, e))
}

pub type PotentialColumns = (Vec<f64>, Vec<Complex64>, Vec<Complex64>);

pub fn read_potential<R: Read>(input: R, path: &Path) -> Result<PotentialColumns> {
    let rows = read_rows(input, path, &POTENTIAL_HEADER)?;
    if rows.len() < 4 {
        return Err(parse_err(path, "at least 4 samples are required"));
    }
    if rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
        return Err(parse_err(path, "x must increase strictly"));
    }
    Ok((
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| c(r[1], r[2])).collect(),
        rows.iter().map(|r| c(r[3], r[4])).collect(),
    ))
}

pub fn read_potential_csv(path: &Path) -> Result<PotentialColumns> {
    read_potential(open(path)?, path)
}

pub fn write_scattering<W: Write>(out: W, samples: &[ScatteringSample]) -> csv::Result<()> {
    write_rows(
        out,
        &SCATTERING_HEADER,
        samples.iter().map(|s| {
            let mut row = vec![fmt_float(s.rho)];
            for v in [s.a, s.atil, s.b, s.btil] {
                row.push(fmt_float(v.re));
                row.push(fmt_float(v.im));
            }
            row
        }),
    )
}

pub fn write_scattering_csv(path: &Path, samples: &[ScatteringSample]) -> Result<()> {
    write_scattering(create(path)?, samples).map_err(|e| csv_error(path, e))
}

pub fn read_scattering<R: Read>(input: R, path: &Path) -> Result<Vec<ScatteringSample>> {
    read_rows(input, path, &SCATTERING_HEADER)?
        .into_iter()
        .map(|r| ScatteringSample::new(r[0], c(r[1], r[2]), c(r[3], r[4]), c(r[5], r[6]), c(r[7], r[8])))
        .collect()
}

pub fn read_scattering_csv(path: &Path) -> Result<Vec<ScatteringSample>> {
    read_scattering(open(path)?, path)
}

#[derive(Serialize, Deserialize)]
struct JsonDatum {
    rho: [f64; 2],
    c: [f64; 2],
}

#[derive(Serialize, Deserialize, Default)]
struct JsonDiscrete {
    upper: Vec<JsonDatum>,
    lower: Vec<JsonDatum>,
}

fn to_json(d: &[DiscreteDatum]) -> Vec<JsonDatum> {
    d.iter()
        .map(|d| JsonDatum {
            rho: [d.rho.re, d.rho.im],
            c: [d.c.re, d.c.im],
        })
        .collect()
}

fn from_json(d: Vec<JsonDatum>, half_plane: HalfPlane) -> Vec<DiscreteDatum> {
    d.into_iter()
        .map(|d| DiscreteDatum {
            rho: c(d.rho[0], d.rho[1]),
            c: c(d.c[0], d.c[1]),
            half_plane,
        })
        .collect()
}

pub fn discrete_to_json(upper: &[DiscreteDatum], lower: &[DiscreteDatum]) -> String {
    let doc = JsonDiscrete {
        upper: to_json(upper),
        lower: to_json(lower),
    };
    serde_json::to_string_pretty(&doc).expect("plain numbers serialize")
}

pub fn write_discrete_json(path: &Path, upper: &[DiscreteDatum], lower: &[DiscreteDatum]) -> Result<()> {
    let mut out = create(path)?;
    out.write_all(discrete_to_json(upper, lower).as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .and_then(|_| out.flush())
        .map_err(io_err(path))
}

pub fn discrete_from_json(text: &str, path: &Path) -> Result<(Vec<DiscreteDatum>, Vec<DiscreteDatum>)> {
    let doc: JsonDiscrete = serde_json::from_str(text).map_err(|e| parse_err(path, e.to_string()))?;
    Ok((from_json(doc.upper, HalfPlane::Upper), from_json(doc.lower, HalfPlane::Lower)))
}

pub fn read_discrete_json(path: &Path) -> Result<(Vec<DiscreteDatum>, Vec<DiscreteDatum>)> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    discrete_from_json(&text, path)
}

/// Coefficient rows `(c1_n, c2_n)` at one node, `n = 0..`.
pub fn write_coefficients_csv(path: &Path, rows: &[[Complex64; 2]]) -> Result<()> {
    write_rows(
        create(path)?,
        &COEFFICIENT_HEADER,
        rows.iter().enumerate().map(|(n, r)| {
            vec![
                n.to_string(),
                fmt_float(r[0].re),
                fmt_float(r[0].im),
                fmt_float(r[1].re),
                fmt_float(r[1].im),
            ]
        }),
    )
    .map_err(|e| csv_error(path, e))
}

pub fn write_residual_csv(path: &Path, vectors: &[CoefficientVectors]) -> Result<()> {
    write_rows(
        create(path)?,
        &RESIDUAL_HEADER,
        vectors.iter().map(|v| {
            let [r1, r2] = v.residuals.unwrap_or([f64::NAN; 2]);
            vec![fmt_float(v.x), fmt_float(r1), fmt_float(r2)]
        }),
    )
    .map_err(|e| csv_error(path, e))
}
