//! The JSON report every command emits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use asymptote_core::SampledFunction;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "asymptote";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Holds,
    Refuted,
    Inconclusive,
    Ok,
    Error,
}

impl ReportStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            ReportStatus::Holds | ReportStatus::Ok => 0,
            ReportStatus::Refuted | ReportStatus::Error => 1,
            ReportStatus::Inconclusive => 2,
        }
    }
}

impl From<asymptote_core::Status> for ReportStatus {
    fn from(s: asymptote_core::Status) -> Self {
        match s {
            asymptote_core::Status::Holds => ReportStatus::Holds,
            asymptote_core::Status::Refuted => ReportStatus::Refuted,
            asymptote_core::Status::Inconclusive => ReportStatus::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub points: usize,
    pub start: f64,
    pub end: f64,
    pub max_step: f64,
    pub tagged: bool,
}

impl GridMeta {
    pub fn of(f: &SampledFunction) -> Self {
        Self {
            points: f.len(),
            start: f.first_time(),
            end: f.last_time(),
            max_step: f.max_step(),
            tagged: f.has_tags(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: CommandEcho,
    pub grid: Option<GridMeta>,
    pub status: ReportStatus,
    pub result: Value,
}

impl Report {
    pub fn new(command: CommandEcho, grid: Option<GridMeta>, status: ReportStatus, result: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            grid,
            status,
            result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with every float printed to 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report values serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// `{:.16e}` for floats, pretty layout for everything else.
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
