//! Persistence formats for sequence and series data.
//!
//! CSV: `#`-prefixed metadata lines, a `k,a,b,u` header, then rows with
//! 17 significant digits (lossless f64 round trip). JSON: the SeriesFile
//! struct verbatim. Raw: 16-byte header (magic `TTOP`, format version
//! u32 LE, length u64 LE) followed by little-endian IEEE-754 doubles,
//! with a JSON metadata sidecar at `<path>.meta.json`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::inverse::InverseMethod;
use crate::seq::GeneratorSpec;

pub const RAW_MAGIC: &[u8; 4] = b"TTOP";
pub const RAW_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Csv,
    Json,
    Raw,
}

impl std::str::FromStr for FileFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FileFormat::Csv),
            "json" => Ok(FileFormat::Json),
            "raw" => Ok(FileFormat::Raw),
            other => Err(Error::validation(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    All,
    /// Log-spaced rows; always includes k = 0 and k = n-1.
    Log(usize),
}

impl std::str::FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SampleMode::All);
        }
        if let Some(count) = s.strip_prefix("log:") {
            let count: usize = count
                .parse()
                .map_err(|_| Error::validation(format!("bad sample count in {s:?}")))?;
            if count < 16 {
                return Err(Error::validation("log sample count must be >= 16"));
            }
            return Ok(SampleMode::Log(count));
        }
        Err(Error::validation(format!(
            "sample mode must be 'all' or 'log:<count>', got {s:?}"
        )))
    }
}

/// Row indices for a given sample mode; log sampling pins k = 0 and k = n-1.
pub fn sample_indices(n: usize, mode: SampleMode) -> Vec<usize> {
    match mode {
        SampleMode::All => (0..n).collect(),
        SampleMode::Log(count) => {
            if n <= count {
                return (0..n).collect();
            }
            let mut ks = vec![0usize];
            ks.extend(crate::inverse::log_samples(1, n - 1, count - 1));
            ks.dedup();
            ks
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub tool_version: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<InverseMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub au_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ab_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl SeriesMeta {
    pub fn new(n: usize) -> Self {
        SeriesMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            n,
            generator: None,
            method: None,
            au_residual: None,
            ab_residual: None,
            timestamp: None,
        }
    }

    pub fn with_timestamp(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub meta: SeriesMeta,
    pub rows: Vec<SeriesRow>,
}

impl SeriesFile {
    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::validation("series file must have rows"));
        }
        if self.rows[0].k != 0 {
            return Err(Error::validation("first row must have k = 0"));
        }
        if !self.rows.windows(2).all(|w| w[0].k < w[1].k) {
            return Err(Error::validation("row indices must be strictly increasing"));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let meta = serde_json::to_value(&self.meta)?;
        if let Value::Object(map) = &meta {
            for (key, val) in map {
                writeln!(w, "# {key} = {val}")?;
            }
        }
        writeln!(w, "k,a,b,u")?;
        for r in &self.rows {
            writeln!(w, "{},{:.16e},{:.16e},{:.16e}", r.k, r.a, r.b, r.u)?;
        }
        Ok(())
    }

    pub fn read_csv(text: &str) -> Result<SeriesFile> {
        let mut rows = Vec::new();
        let mut meta_n = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('k') {
                if let Some(rest) = line.strip_prefix("# n = ") {
                    meta_n = rest.parse().unwrap_or(0);
                }
                continue;
            }
            let mut parts = line.split(',');
            let mut field = |name: &str| -> Result<&str> {
                parts
                    .next()
                    .ok_or_else(|| Error::validation(format!("missing field {name}")))
            };
            let k = field("k")?
                .parse()
                .map_err(|e| Error::validation(format!("bad k: {e}")))?;
            let a = field("a")?
                .parse()
                .map_err(|e| Error::validation(format!("bad a: {e}")))?;
            let b = field("b")?
                .parse()
                .map_err(|e| Error::validation(format!("bad b: {e}")))?;
            let u = field("u")?
                .parse()
                .map_err(|e| Error::validation(format!("bad u: {e}")))?;
            rows.push(SeriesRow { k, a, b, u });
        }
        let meta = SeriesMeta::new(if meta_n > 0 { meta_n } else { rows.len() });
        let out = SeriesFile { meta, rows };
        out.validate()?;
        Ok(out)
    }

    pub fn write(&self, path: &Path, format: FileFormat) -> Result<()> {
        self.validate()?;
        match format {
            FileFormat::Csv => {
                let mut w = BufWriter::new(fs::File::create(path)?);
                self.write_csv(&mut w)?;
                w.flush()?;
            }
            FileFormat::Json => {
                let mut w = BufWriter::new(fs::File::create(path)?);
                serde_json::to_writer_pretty(&mut w, self)?;
                w.flush()?;
            }
            FileFormat::Raw => {
                // raw holds the b column; a and u go to the sidecar only
                // when small, so raw stays the compact exact carrier
                let values: Vec<f64> = self.rows.iter().map(|r| r.b).collect();
                write_raw(path, &values, &serde_json::to_value(&self.meta)?)?;
            }
        }
        Ok(())
    }
}

/// Write a raw little-endian f64 block with header and JSON sidecar.
pub fn write_raw(path: &Path, values: &[f64], meta: &Value) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(RAW_MAGIC)?;
    w.write_all(&RAW_VERSION.to_le_bytes())?;
    w.write_all(&(values.len() as u64).to_le_bytes())?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    let sidecar = sidecar_path(path);
    fs::write(&sidecar, serde_json::to_string_pretty(meta)?)?;
    Ok(())
}

/// Read a raw block back; returns the values and sidecar metadata if present.
pub fn read_raw(path: &Path) -> Result<(Vec<f64>, Option<Value>)> {
    let data = fs::read(path)?;
    if data.len() < 16 || &data[..4] != RAW_MAGIC {
        return Err(Error::validation("not a TTOP raw file"));
    }
    let version = u32::from_le_bytes(data[4..8].try_into().unwrap());
    if version != RAW_VERSION {
        return Err(Error::validation(format!("unsupported raw version {version}")));
    }
    let len = u64::from_le_bytes(data[8..16].try_into().unwrap()) as usize;
    if data.len() != 16 + 8 * len {
        return Err(Error::validation("raw file length mismatch"));
    }
    let mut values = Vec::with_capacity(len);
    for chunk in data[16..].chunks_exact(8) {
        values.push(f64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let sidecar = sidecar_path(path);
    let meta = if sidecar.exists() {
        Some(serde_json::from_str(&fs::read_to_string(&sidecar)?)?)
    } else {
        None
    };
    Ok((values, meta))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_file(n: usize) -> SeriesFile {
        let rows = (0..n)
            .map(|k| SeriesRow {
                k,
                a: 1.0 / (1.0 + k as f64),
                b: -(k as f64) * 0.1 + 1.0 / 3.0,
                u: (k as f64).sqrt(),
            })
            .collect();
        SeriesFile {
            meta: SeriesMeta::new(n),
            rows,
        }
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let f = sample_file(50);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = SeriesFile::read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(f.rows.len(), back.rows.len());
        for (x, y) in f.rows.iter().zip(&back.rows) {
            assert_eq!(x.k, y.k);
            assert_eq!(x.a.to_bits(), y.a.to_bits());
            assert_eq!(x.b.to_bits(), y.b.to_bits());
            assert_eq!(x.u.to_bits(), y.u.to_bits());
        }
    }

    #[test]
    fn csv_uses_lf_and_header() {
        let f = sample_file(3);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let s = std::str::from_utf8(&buf).unwrap();
        assert!(s.contains("k,a,b,u\n"));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn raw_round_trip_bit_exact() {
        let dir = std::env::temp_dir().join("tritop-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("seq.raw");
        let values: Vec<f64> = (0..1000).map(|k| (1.0 + k as f64).powf(-0.37)).collect();
        write_raw(&path, &values, &serde_json::json!({"n": 1000})).unwrap();
        let (back, meta) = read_raw(&path).unwrap();
        assert_eq!(values, back);
        assert_eq!(meta.unwrap()["n"], 1000);
    }

    #[test]
    fn raw_rejects_corrupt_header() {
        let dir = std::env::temp_dir().join("tritop-io-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.raw");
        fs::write(&path, b"NOPE").unwrap();
        assert!(read_raw(&path).is_err());
    }

    #[test]
    fn log_sampling_pins_endpoints() {
        let idx = sample_indices(1_000_000, SampleMode::Log(512));
        assert_eq!(idx[0], 0);
        assert_eq!(*idx.last().unwrap(), 999_999);
        assert!(idx.len() <= 512);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sample_mode_parsing() {
        assert_eq!("all".parse::<SampleMode>().unwrap(), SampleMode::All);
        assert_eq!("log:512".parse::<SampleMode>().unwrap(), SampleMode::Log(512));
        assert!("log:8".parse::<SampleMode>().is_err());
        assert!("bogus".parse::<SampleMode>().is_err());
    }

    #[test]
    fn series_validation() {
        let mut f = sample_file(5);
        f.rows[0].k = 1;
        assert!(f.validate().is_err());
    }
}
