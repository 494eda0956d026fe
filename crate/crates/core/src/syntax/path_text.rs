use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::schema_text::is_ident_char;
use super::{Span, SyntaxError};
use crate::model::{alphabet, Letter, Path, Schema};
use crate::symbol::Symbol;

/// Resolves path tokens against the alphabet of a linear schema.
///
/// Tokens are `f` for the assignment through function `f`, `p:T` / `p:F` for
/// predicate letters and `@L` for labels.
pub fn parse_path(text: &str, schema: &Schema) -> Result<Path, SyntaxError> {
    let letters = alphabet(schema).map_err(|e| SyntaxError::at(Span::START, e.to_string()))?;
    let mut by_token: BTreeMap<String, Letter> = BTreeMap::new();
    for l in letters {
        by_token.insert(l.to_string(), l);
    }
    let mut path = Path::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 1;
        for chunk in line.split(' ') {
            let span = Span {
                line: line_no + 1,
                col,
            };
            col += chunk.chars().count() + 1;
            for token in chunk.split_whitespace() {
                let letter = by_token.get(token).cloned().ok_or_else(|| {
                    if well_formed(token) {
                        SyntaxError::at(span, format!("`{token}` is not in the schema's alphabet"))
                    } else {
                        SyntaxError::at(span, format!("malformed path token `{token}`"))
                    }
                })?;
                path.push(letter);
            }
        }
    }
    Ok(path)
}

fn well_formed(token: &str) -> bool {
    let name = if let Some(label) = token.strip_prefix('@') {
        label
    } else if let Some(p) = token
        .strip_suffix(":T")
        .or_else(|| token.strip_suffix(":F"))
    {
        p
    } else {
        token
    };
    !name.is_empty() && name.chars().all(is_ident_char)
}

pub fn print_path(path: &Path) -> String {
    path.to_string()
}

/// Contents of a `.criterion` sidecar: `label=<name>` and `vars=<v1,v2,...>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CriterionSpec {
    pub label: Option<Symbol>,
    pub vars: BTreeSet<Symbol>,
}

impl CriterionSpec {
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let mut spec = CriterionSpec::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let span = Span {
                line: i + 1,
                col: 1,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| SyntaxError::at(span, "expected `key=value`"))?;
            match key.trim() {
                "label" => spec.label = Some(Symbol::new(value.trim())),
                "vars" => {
                    spec.vars = value
                        .split(',')
                        .map(str::trim)
                        .filter(|v| !v.is_empty())
                        .map(Symbol::new)
                        .collect()
                }
                other => return Err(SyntaxError::at(span, format!("unknown key `{other}`"))),
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for CriterionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "label={label}")?;
        }
        let vars: Vec<&str> = self.vars.iter().map(Symbol::as_str).collect();
        writeln!(f, "vars={}", vars.join(","))
    }
}
