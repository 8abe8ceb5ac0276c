//! Deterministic key/value text reports.
//!
//! A report is a header (format version, tool stamp, command echo, input
//! digest) followed by command-specific lines in a fixed order. Identical
//! inputs produce byte-identical output; nothing time- or
//! environment-dependent is ever written.

use sha2::{Digest, Sha256};

pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, digest: &str) -> Self {
        let lines = vec![
            "derivlab-report v1".to_string(),
            format!("tool: derivlab {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            format!("input-digest: {digest}"),
        ];
        Report { lines }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn raw(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Appends a multi-line block verbatim (used to embed rendered
    /// sub-reports and spec-file documents).
    pub fn block(&mut self, text: &str) {
        for line in text.lines() {
            self.lines.push(line.to_string());
        }
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Digest of everything that determines a run: the raw argument vector and
/// the contents of every input file, in read order.
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn new(args: &[String]) -> Self {
        let mut hasher = Sha256::new();
        for a in args {
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        InputDigest { hasher }
    }

    pub fn add_file(&mut self, contents: &str) {
        self.hasher.update(b"file\0");
        self.hasher.update(contents.as_bytes());
        self.hasher.update([0]);
    }

    pub fn finish(self) -> String {
        let out = self.hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}
