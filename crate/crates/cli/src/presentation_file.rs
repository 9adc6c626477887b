//! Presentation files.
//!
//! ```text
//! # Z/2 + Z/6
//! generators: 2
//! relations:
//!   2 0
//!   0, 6
//!   [0, 12]
//! ```
//!
//! `generators:` comes first and gives the number of generators. Each line
//! after `relations:` is one relation: that many integers separated by
//! spaces or commas, optionally in brackets. `#` starts a comment. An empty
//! `relations:` section gives a free group; `generators: 0` gives the
//! trivial group.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub generators: usize,
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileError {
    /// 1-based; `None` for problems with the file as a whole.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FileError {}

fn at(line: usize, message: impl Into<String>) -> FileError {
    FileError {
        line: Some(line),
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<PresentationFile, FileError> {
    let mut generators: Option<usize> = None;
    let mut relations: Option<Vec<Vec<i64>>> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("generators:") {
            if generators.is_some() {
                return Err(at(ln, "`generators:` given twice"));
            }
            let rest = rest.trim();
            let n = rest
                .parse::<usize>()
                .map_err(|_| at(ln, format!("expected a generator count, got `{rest}`")))?;
            generators = Some(n);
        } else if let Some(rest) = line.strip_prefix("relations:") {
            if relations.is_some() {
                return Err(at(ln, "`relations:` given twice"));
            }
            if generators.is_none() {
                return Err(at(ln, "`relations:` before `generators:`"));
            }
            if !rest.trim().is_empty() {
                return Err(at(ln, "relation rows go on the lines after `relations:`"));
            }
            relations = Some(Vec::new());
        } else if let (Some(rows), Some(n)) = (relations.as_mut(), generators) {
            rows.push(parse_row(line, n).map_err(|m| at(ln, m))?);
        } else {
            let key = line.split(':').next().unwrap_or(line);
            return Err(if line.contains(':') {
                at(ln, format!("unknown field `{key}`"))
            } else {
                at(ln, "expected `generators:` or `relations:`")
            });
        }
    }
    let generators = generators.ok_or_else(|| FileError {
        line: None,
        message: "missing `generators:` field".into(),
    })?;
    let relations = relations.ok_or_else(|| FileError {
        line: None,
        message: "missing `relations:` section".into(),
    })?;
    Ok(PresentationFile {
        generators,
        relations,
    })
}

fn parse_row(line: &str, n: usize) -> Result<Vec<i64>, String> {
    let inner = match (line.strip_prefix('['), line.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => line,
        _ => return Err("unbalanced brackets".into()),
    };
    let row = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| format!("`{t}` is not an integer"))
        })
        .collect::<Result<Vec<i64>, String>>()?;
    if row.len() != n {
        return Err(format!("relation has {} entries, expected {n}", row.len()));
    }
    Ok(row)
}
