//! JSON-lines records on stdout (or a file) and human-readable notes on stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use crate::config::ExperimentConfig;

pub struct Sink {
    out: Box<dyn Write>,
    failures: usize,
}

impl Sink {
    pub fn new(cfg: &ExperimentConfig) -> io::Result<Self> {
        let out: Box<dyn Write> = match &cfg.records {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self { out, failures: 0 })
    }

    pub fn record(&mut self, v: Value) -> io::Result<()> {
        writeln!(self.out, "{v}")
    }

    /// A record for a failed check; counted towards the exit code.
    pub fn failure(&mut self, check: &str, detail: impl Into<String>) -> io::Result<()> {
        let detail = detail.into();
        eprintln!("FAIL {check}: {detail}");
        self.failures += 1;
        self.record(json!({"record": "failure", "check": check, "detail": detail}))
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

pub fn note(msg: impl AsRef<str>) {
    eprintln!("{}", msg.as_ref());
}

/// Run provenance: everything needed to reproduce the run, and nothing that
/// varies between identical runs.
pub fn provenance(command: &str, cfg: &ExperimentConfig) -> Value {
    json!({
        "record": "provenance",
        "tool": "subeq",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": cfg.seed(),
        "tol": cfg.tol,
        "config": cfg,
    })
}

/// The same provenance as `# key=value` header lines for text outputs.
pub fn header_lines(command: &str, cfg: &ExperimentConfig) -> Vec<String> {
    vec![
        format!("subeq {} {command}", env!("CARGO_PKG_VERSION")),
        format!(
            "seed={} tol={}",
            cfg.seed(),
            cfg.tol
                .map(|t| t.to_string())
                .unwrap_or_else(|| "default".into())
        ),
        format!("config={}", serde_json::to_string(cfg).unwrap_or_default()),
    ]
}
