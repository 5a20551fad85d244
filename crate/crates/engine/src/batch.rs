//! Scripted sessions read from fixture files.
//!
//! A fixture has up to three sections, each opened by a header line:
//!
//! ```text
//! # Lines starting with `#` outside program and expect sections are ignored.
//! == program
//! (def x 1)
//! (def main x)
//! == script
//! {"cmd":"select","id":"def:0/bound"}
//! !NotActive {"cmd":"apply","tool":"rename","index":0}
//! == expect
//! (def x 1)
//! (def main x)
//! ```
//!
//! The program, if present, is loaded before the script runs. Each script
//! line is one protocol request and must succeed, unless it starts with
//! `!Code`, in which case it must fail with that error code. The expect
//! section, if present, must equal the final text byte for byte. Section
//! text is the lines between headers joined with `\n`, so a text that ends
//! in a newline needs a blank line before the next header (or before the
//! end of the file, whose own final newline is not part of any section).

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::protocol::Response;
use crate::session::Session;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// Line of the fixture file, for reports.
    pub line: usize,
    pub expect_error: Option<String>,
    pub request: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fixture {
    pub program: Option<String>,
    pub steps: Vec<Step>,
    pub expect: Option<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Program,
    Script,
    Expect,
}

impl Fixture {
    pub fn parse(src: &str) -> Result<Self, FixtureError> {
        let mut f = Fixture::default();
        let mut section = Section::None;
        let mut body: Vec<&str> = Vec::new();
        let flush = |f: &mut Fixture, section: Section, body: &mut Vec<&str>| {
            let text = body.join("\n");
            match section {
                Section::Program => f.program = Some(text),
                Section::Expect => f.expect = Some(text),
                _ => {}
            }
            body.clear();
        };
        let src = src.strip_suffix('\n').unwrap_or(src);
        for (i, line) in src.split('\n').enumerate() {
            let n = i + 1;
            if let Some(name) = line.strip_prefix("== ") {
                flush(&mut f, section, &mut body);
                section = match name.trim() {
                    "program" => Section::Program,
                    "script" => Section::Script,
                    "expect" => Section::Expect,
                    other => {
                        return Err(FixtureError::Syntax {
                            line: n,
                            message: format!("unknown section `{other}`"),
                        })
                    }
                };
                continue;
            }
            match section {
                Section::Program | Section::Expect => body.push(line),
                Section::Script => {
                    let t = line.trim();
                    if t.is_empty() || t.starts_with('#') {
                        continue;
                    }
                    let (expect_error, request) = match t.strip_prefix('!') {
                        Some(rest) => {
                            let (code, req) = rest.split_once(' ').ok_or_else(|| FixtureError::Syntax {
                                line: n,
                                message: "expected `!Code {request}`".into(),
                            })?;
                            (Some(code.to_string()), req.trim().to_string())
                        }
                        None => (None, t.to_string()),
                    };
                    f.steps.push(Step {
                        line: n,
                        expect_error,
                        request,
                    });
                }
                Section::None => {
                    if !line.trim().is_empty() && !line.starts_with('#') {
                        return Err(FixtureError::Syntax {
                            line: n,
                            message: "text outside a section".into(),
                        });
                    }
                }
            }
        }
        flush(&mut f, section, &mut body);
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self, FixtureError> {
        let src = std::fs::read_to_string(path).map_err(|source| FixtureError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Fixture::parse(&src)
    }
}

/// Outcome of running one fixture.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub failures: usize,
    pub final_text: String,
    /// Every response, one JSON object per line.
    pub transcript: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn code_of(r: &Response) -> Option<String> {
    let e = r.error.as_ref()?;
    serde_json::to_value(e.code).ok()?.as_str().map(str::to_string)
}

pub fn run(f: &Fixture) -> Report {
    let mut session = Session::new();
    let mut report = Report::default();
    let record = |report: &mut Report, label: String, ok: bool, detail: String| {
        let mark = if ok { "ok" } else { "FAIL" };
        let mut line = format!("{label}: {mark}");
        if !detail.is_empty() {
            let _ = write!(line, " ({detail})");
        }
        report.failures += usize::from(!ok);
        report.lines.push(line);
    };
    if let Some(text) = &f.program {
        let req = serde_json::json!({ "cmd": "load", "text": text }).to_string();
        let resp = session.handle_line(&req);
        report.transcript.push_str(&resp);
        report.transcript.push('\n');
        let parsed: Response = serde_json::from_str(&resp).expect("own responses parse");
        let detail = parsed.error.map(|e| e.message).unwrap_or_default();
        record(&mut report, "load".into(), parsed.ok, detail);
    }
    for step in &f.steps {
        let resp = session.handle_line(&step.request);
        report.transcript.push_str(&resp);
        report.transcript.push('\n');
        let parsed: Response = serde_json::from_str(&resp).expect("own responses parse");
        let cmd = serde_json::from_str::<serde_json::Value>(&step.request)
            .ok()
            .and_then(|v| v.get("cmd").and_then(|c| c.as_str()).map(str::to_string))
            .unwrap_or_else(|| "?".into());
        let label = format!("line {} {cmd}", step.line);
        match &step.expect_error {
            None => {
                let detail = parsed.error.as_ref().map(|e| e.message.clone()).unwrap_or_default();
                record(&mut report, label, parsed.ok, detail);
            }
            Some(code) => {
                let got = code_of(&parsed);
                let ok = got.as_deref() == Some(code.as_str());
                let detail = if ok {
                    String::new()
                } else {
                    format!("expected {code}, got {}", got.unwrap_or_else(|| "success".into()))
                };
                record(&mut report, label, ok, detail);
            }
        }
    }
    report.final_text = session.text().to_string();
    if let Some(want) = &f.expect {
        let ok = *want == report.final_text;
        let detail = if ok {
            String::new()
        } else {
            first_difference(want, &report.final_text)
        };
        record(&mut report, "expect".into(), ok, detail);
    }
    report
}

fn first_difference(want: &str, got: &str) -> String {
    let (w, g): (Vec<&str>, Vec<&str>) = (want.split('\n').collect(), got.split('\n').collect());
    for i in 0..w.len().max(g.len()) {
        let (a, b) = (w.get(i), g.get(i));
        if a != b {
            return format!(
                "line {}: expected {:?}, got {:?}",
                i + 1,
                a.copied().unwrap_or("<end>"),
                b.copied().unwrap_or("<end>")
            );
        }
    }
    String::new()
}
