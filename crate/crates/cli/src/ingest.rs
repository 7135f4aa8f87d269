//! CSV trajectories: `t,<channel>[,<channel>…][,tag]`.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use asymptote_core::{PointTag, SampledFunction};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot open {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{message} at line {line}")]
    Line { line: u64, message: String },
    #[error("header: {0}")]
    Header(String),
    #[error("{0}")]
    Invalid(#[from] asymptote_core::Error),
}

/// A parsed trajectory file: one grid, one or more named channels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFile {
    pub path: Option<PathBuf>,
    pub channels: Vec<(String, SampledFunction)>,
}

impl TrajectoryFile {
    pub fn channel_names(&self) -> Vec<&str> {
        self.channels.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn channel(&self, name: &str) -> Option<&SampledFunction> {
        self.channels.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// The named channel, or `f`, or the first one.
    pub fn primary(&self, name: Option<&str>) -> Result<(&str, &SampledFunction), IngestError> {
        let pick = match name {
            Some(n) => self.channels.iter().find(|(c, _)| c == n),
            None => self
                .channels
                .iter()
                .find(|(c, _)| c == "f")
                .or_else(|| self.channels.first()),
        };
        pick.map(|(n, c)| (n.as_str(), c))
            .ok_or_else(|| IngestError::Header(format!("no channel `{}`", name.unwrap_or("f"))))
    }
}

pub fn ingest(path: &Path) -> Result<TrajectoryFile, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut t = ingest_reader(file)?;
    t.path = Some(path.to_path_buf());
    Ok(t)
}

pub fn ingest_reader(reader: impl Read) -> Result<TrajectoryFile, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| IngestError::Header(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(IngestError::Header("first column must be `t`".into()));
    }
    let tag_col = header.iter().position(|h| h == "tag");
    if tag_col.is_some_and(|i| i + 1 != header.len()) {
        return Err(IngestError::Header("`tag` must be the last column".into()));
    }
    let names: Vec<String> = header[1..header.len() - usize::from(tag_col.is_some())].to_vec();
    if names.is_empty() {
        return Err(IngestError::Header("no value columns".into()));
    }
    if let Some(dup) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n) || n.is_empty()) {
        return Err(IngestError::Header(format!("bad or duplicate column name `{}`", dup.1)));
    }

    let mut times = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut tags = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| IngestError::Line {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let err = |message: String| IngestError::Line { line, message };
        if record.len() != header.len() {
            return Err(err(format!("expected {} fields, got {}", header.len(), record.len())));
        }
        let t = parse_number(&record[0]).map_err(|m| err(format!("t: {m}")))?;
        if let Some(&prev) = times.last() {
            if !(t > prev) {
                return Err(err("non-monotone".into()));
            }
        }
        times.push(t);
        for (k, col) in columns.iter_mut().enumerate() {
            let v = parse_number(&record[k + 1]).map_err(|m| err(format!("{}: {m}", names[k])))?;
            col.push(v);
        }
        tags.push(match tag_col {
            Some(i) => PointTag::parse(&record[i]).ok_or_else(|| err(format!("unknown tag `{}`", &record[i])))?,
            None => None,
        });
    }
    let channels = names
        .into_iter()
        .zip(columns)
        .map(|(n, values)| Ok((n, SampledFunction::with_tags(times.clone(), values, tags.clone())?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    Ok(TrajectoryFile { path: None, channels })
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value `{s}`"))
    }
}

/// Writes channels sharing one grid. Floats use the shortest representation
/// that parses back to the same value. The tag column is written when
/// `with_tags` is set.
pub fn write_csv(out: impl Write, channels: &[(String, SampledFunction)], with_tags: bool) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let (_, first) = channels.first().expect("at least one channel");
    let mut header = vec!["t".to_string()];
    header.extend(channels.iter().map(|(n, _)| n.clone()));
    if with_tags {
        header.push("tag".into());
    }
    w.write_record(&header)?;
    for i in 0..first.len() {
        let mut row = vec![first.times()[i].to_string()];
        row.extend(channels.iter().map(|(_, c)| c.values()[i].to_string()));
        if with_tags {
            row.push(first.tags()[i].map_or("", PointTag::as_str).to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()
}
