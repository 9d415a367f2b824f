//! Line-delimited JSON traces.

use std::io::{self, Write};

use serde::Serialize;

use super::{Configuration, Event, MachineSpec, Tape, TapeSymbol};

/// Cells shown on each side of a head.
pub const WINDOW_RADIUS: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TapeView {
    pub name: String,
    pub head: i64,
    pub window: String,
}

impl TapeView {
    pub fn of<S: TapeSymbol>(name: &str, t: &Tape<S>) -> Self {
        TapeView {
            name: name.to_string(),
            head: t.head(),
            window: t.window(WINDOW_RADIUS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub state: String,
    pub input_pos: i64,
    pub tapes: Vec<TapeView>,
    pub event: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Event>,
}

impl TraceRecord {
    pub fn of_config(spec: &MachineSpec, c: &Configuration, event: Option<&Event>) -> Self {
        TraceRecord {
            step: c.steps,
            state: spec.state_name(c.state).to_string(),
            input_pos: c.input_pos(),
            tapes: c
                .work
                .iter()
                .enumerate()
                .map(|(i, t)| TapeView::of(&format!("work{i}"), t))
                .collect(),
            event: event.map(|e| e.tag().to_string()),
            detail: event.cloned(),
        }
    }
}

/// Writes records one JSON object per line.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out }
    }

    pub fn write(&mut self, rec: &TraceRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, rec)?;
        self.out.write_all(b"\n")
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
