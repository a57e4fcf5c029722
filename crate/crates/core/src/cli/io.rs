use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::Serialize;

use super::CliError;
use crate::numtheory::Rational;
use crate::spectra::SpectrumCandidate;

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// CSV text from a header and rows of already formatted fields.
pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn rational_fields(x: &Rational) -> [String; 2] {
    [x.numer().to_string(), x.denom().to_string()]
}

pub const SPECTRUM_HEADER: [&str; 2] = ["num", "den"];

pub fn spectrum_csv(points: &[Rational]) -> Vec<u8> {
    csv_text(&SPECTRUM_HEADER, points.iter().map(|x| rational_fields(x).to_vec()))
}

/// Reads a `num,den` spectrum file.
pub fn read_spectrum(path: &Path) -> Result<SpectrumCandidate, CliError> {
    let text = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spectrum(&text).map_err(|m| CliError::Input(format!("{}: {m}", path.display())))
}

pub fn parse_spectrum(bytes: &[u8]) -> Result<SpectrumCandidate, String> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().collect::<Vec<_>>() != SPECTRUM_HEADER {
        return Err(format!("expected header num,den, found {}", header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut pts = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let field = |i: usize| -> Result<BigInt, String> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| format!("row {}: bad integer in column {}", line + 2, i + 1))
        };
        let (n, d) = (field(0)?, field(1)?);
        pts.push(Rational::checked_new(n, d).ok_or_else(|| format!("row {}: zero denominator", line + 2))?);
    }
    SpectrumCandidate::from_points(pts).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ManifestLevel {
    scale_num: String,
    scale_den: String,
    digits: Vec<String>,
}

#[derive(Serialize)]
struct Manifest {
    count: usize,
    levels: Vec<ManifestLevel>,
}

/// TOML description of the level structure.
pub fn manifest(s: &SpectrumCandidate) -> String {
    let m = Manifest {
        count: s.len(),
        levels: s
            .levels()
            .iter()
            .map(|(scale, set)| {
                let [scale_num, scale_den] = rational_fields(scale);
                ManifestLevel {
                    scale_num,
                    scale_den,
                    digits: set.iter().map(ToString::to_string).collect(),
                }
            })
            .collect(),
    };
    toml::to_string(&m).expect("manifest is plain data")
}

/// `out.csv` → `out.manifest.toml`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.toml")
}
