//! The derivation spec file: a line-based text format describing a ring,
//! one image per variable, an optional extension block, and optional flags.
//!
//! ```text
//! ring: x1 x2 x3
//! x1 -> 1 + x1^2*x2
//! x2 -> x1^3
//! extend:
//! x3 <- x2
//! flags:
//! cap = inf
//! cond-i = cited:2.9
//! simple = asserted
//! ```
//!
//! Base variables take `->` lines in ring order; variables introduced by
//! the extension take `<-` lines. Lines starting with `#` and blank lines
//! are ignored. `print` emits the canonical form, which parses back to the
//! same value.

use std::fmt::Write as _;

use derivlab_core::{
    Assertion, BaseFlags, ChainError, DegreeCap, DerivError, Derivation, ExtensionChain,
    Polynomial,
};
use thiserror::Error;

use crate::parser::{parse_polynomial, ParseError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}, col {col}: {message}")]
    Poly { line: usize, col: usize, message: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Deriv(#[from] DerivError),
}

fn line_err(line: usize, message: impl Into<String>) -> SpecError {
    SpecError::Line { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    /// Ordered ring variable names; arity is `names.len()`.
    pub names: Vec<String>,
    /// Images of the base variables (`->` lines), at full ring arity.
    pub base_images: Vec<Polynomial>,
    /// Extension links (`<-` lines), at full ring arity.
    pub links: Vec<Polynomial>,
    pub cap: DegreeCap,
    pub flags: BaseFlags,
    /// Admit constant links (the relaxed chain constructor).
    pub relaxed: bool,
}

#[derive(PartialEq)]
enum Section {
    Images,
    Extend,
    Flags,
}

impl SpecFile {
    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn base_arity(&self) -> usize {
        self.base_images.len()
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut names: Option<Vec<String>> = None;
        let mut base_images: Vec<(String, Polynomial)> = Vec::new();
        let mut links: Vec<(String, Polynomial)> = Vec::new();
        let mut cap = DegreeCap::Infinite;
        let mut flags = BaseFlags::default();
        let mut relaxed = false;
        let mut section = Section::Images;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("ring:") {
                if names.is_some() {
                    return Err(line_err(lineno, "duplicate `ring:` line"));
                }
                let vars: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if vars.is_empty() {
                    return Err(line_err(lineno, "`ring:` needs at least one variable"));
                }
                for (i, v) in vars.iter().enumerate() {
                    if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        return Err(line_err(lineno, format!("bad variable name `{v}`")));
                    }
                    if vars[..i].contains(v) {
                        return Err(line_err(lineno, format!("duplicate variable `{v}`")));
                    }
                }
                names = Some(vars);
                continue;
            }
            let Some(names) = names.as_ref() else {
                return Err(line_err(lineno, "expected a `ring:` line first"));
            };
            match line {
                "extend:" => {
                    if section != Section::Images {
                        return Err(line_err(lineno, "`extend:` must come before `flags:`"));
                    }
                    section = Section::Extend;
                    continue;
                }
                "flags:" => {
                    section = Section::Flags;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Images | Section::Extend => {
                    let (arrow, is_link) = if line.contains("->") {
                        ("->", false)
                    } else if line.contains("<-") {
                        ("<-", true)
                    } else {
                        return Err(line_err(lineno, "expected `var -> poly` or `var <- poly`"));
                    };
                    if is_link && section == Section::Images {
                        return Err(line_err(
                            lineno,
                            "`var <- poly` lines belong in the `extend:` block",
                        ));
                    }
                    if !is_link && section == Section::Extend {
                        return Err(line_err(
                            lineno,
                            "`var -> poly` lines must come before `extend:`",
                        ));
                    }
                    let (lhs, rhs) = line.split_once(arrow).expect("checked above");
                    let var = lhs.trim();
                    if !names.iter().any(|n| n == var) {
                        return Err(line_err(lineno, format!("`{var}` is not a ring variable")));
                    }
                    let poly = parse_polynomial(rhs, names).map_err(|e| SpecError::Poly {
                        line: lineno,
                        col: e.col,
                        message: e.message,
                    })?;
                    if is_link {
                        links.push((var.to_string(), poly));
                    } else {
                        base_images.push((var.to_string(), poly));
                    }
                }
                Section::Flags => {
                    let Some((key, value)) = line.split_once('=') else {
                        return Err(line_err(lineno, "expected `key = value` in the flags block"));
                    };
                    let key = key.trim();
                    let value = value.trim();
                    let assertion = |v: &str| -> Result<Assertion, SpecError> {
                        if v == "asserted" {
                            Ok(Assertion::UserAsserted)
                        } else if let Some(c) = v.strip_prefix("cited:") {
                            Ok(Assertion::Cited(c.trim().to_string()))
                        } else {
                            Err(line_err(
                                lineno,
                                format!("`{key}` must be `asserted` or `cited:<ref>`"),
                            ))
                        }
                    };
                    match key {
                        "cap" => {
                            cap = if value == "inf" {
                                DegreeCap::Infinite
                            } else {
                                let v: u64 = value.parse().map_err(|_| {
                                    line_err(lineno, "`cap` must be a nonnegative integer or `inf`")
                                })?;
                                DegreeCap::Finite(v)
                            };
                        }
                        "simple" => flags.simple = Some(assertion(value)?),
                        "trivial-isotropy" => flags.trivial_isotropy = Some(assertion(value)?),
                        "cond-i" => flags.cond_i = Some(assertion(value)?),
                        "relaxed" => {
                            relaxed = match value {
                                "true" => true,
                                "false" => false,
                                _ => return Err(line_err(lineno, "`relaxed` must be true or false")),
                            };
                        }
                        other => {
                            return Err(line_err(lineno, format!("unknown flag `{other}`")));
                        }
                    }
                }
            }
        }

        let names = names.ok_or_else(|| line_err(1, "missing `ring:` line"))?;

        // every ring variable needs exactly one image line, base variables
        // first and extension variables as a suffix, both in ring order
        let mut seen: Vec<&str> = Vec::new();
        for (v, _) in base_images.iter().chain(links.iter()) {
            seen.push(v);
        }
        if seen.len() != names.len() {
            return Err(line_err(
                1,
                format!(
                    "ring has {} variable(s) but {} image line(s); every variable needs exactly one",
                    names.len(),
                    seen.len()
                ),
            ));
        }
        for (expect, got) in names.iter().zip(&seen) {
            if expect != got {
                return Err(line_err(
                    1,
                    format!("image lines must follow ring order: expected `{expect}`, found `{got}`"),
                ));
            }
        }
        let i = base_images.len();
        for (idx, (_, img)) in base_images.iter().enumerate() {
            if !img.involves_only_first(i) {
                return Err(line_err(
                    1,
                    format!(
                        "base image of `{}` uses an extension variable; base images must live in \
                         the first {i} variable(s)",
                        names[idx]
                    ),
                ));
            }
        }

        Ok(SpecFile {
            names,
            base_images: base_images.into_iter().map(|(_, p)| p).collect(),
            links: links.into_iter().map(|(_, p)| p).collect(),
            cap,
            flags,
            relaxed,
        })
    }

    /// Canonical rendering; parsing it back yields an equal value.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ring: {}", self.names.join(" "));
        for (j, img) in self.base_images.iter().enumerate() {
            let _ = writeln!(out, "{} -> {}", self.names[j], img.display_with(&self.names));
        }
        if !self.links.is_empty() {
            let _ = writeln!(out, "extend:");
            for (t, link) in self.links.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{} <- {}",
                    self.names[self.base_arity() + t],
                    link.display_with(&self.names)
                );
            }
        }
        let mut flag_lines: Vec<String> = Vec::new();
        if let DegreeCap::Finite(c) = self.cap {
            flag_lines.push(format!("cap = {c}"));
        }
        let assertion = |a: &Assertion| match a {
            Assertion::UserAsserted => "asserted".to_string(),
            Assertion::Cited(c) => format!("cited:{c}"),
        };
        if let Some(a) = &self.flags.cond_i {
            flag_lines.push(format!("cond-i = {}", assertion(a)));
        }
        if let Some(a) = &self.flags.simple {
            flag_lines.push(format!("simple = {}", assertion(a)));
        }
        if let Some(a) = &self.flags.trivial_isotropy {
            flag_lines.push(format!("trivial-isotropy = {}", assertion(a)));
        }
        if self.relaxed {
            flag_lines.push("relaxed = true".into());
        }
        if !flag_lines.is_empty() {
            let _ = writeln!(out, "flags:");
            for l in flag_lines {
                let _ = writeln!(out, "{l}");
            }
        }
        out
    }

    /// The base derivation on `Q[x_1, ..., x_i]`.
    pub fn base_derivation(&self) -> Result<Derivation, SpecError> {
        let i = self.base_arity();
        let images = self
            .base_images
            .iter()
            .map(|p| p.resize_arity(i))
            .collect::<Result<Vec<_>, _>>()
            .map_err(DerivError::from)?;
        Ok(Derivation::new(images)?)
    }

    /// The extension chain, if the file has an `extend:` block.
    pub fn chain(&self) -> Result<Option<ExtensionChain>, SpecError> {
        if self.links.is_empty() {
            return Ok(None);
        }
        let base = self.base_derivation()?;
        let chain = if self.relaxed {
            ExtensionChain::new_relaxed(base, self.links.clone(), self.cap)?
        } else {
            ExtensionChain::new(base, self.links.clone(), self.cap)?
        };
        Ok(Some(chain))
    }

    /// The full derivation the file describes: the extended one if links
    /// are present, otherwise the base.
    pub fn derivation(&self) -> Result<Derivation, SpecError> {
        match self.chain()? {
            Some(chain) => Ok(chain.extend()),
            None => self.base_derivation(),
        }
    }
}
