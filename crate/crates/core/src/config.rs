//! Family configs: flat `key = value` lines.
//!
//! ```text
//! # pseudo-quon with an explicit similarity
//! kind = pseudo
//! L = 2
//! q = 0.5
//! regime = quon_rule
//! R = [[1, 0.5i, 0],
//!      [0, 1, 0],
//!      [0, 0, 2]]
//! ```
//!
//! Lists are bracketed and comma separated and may nest; a value whose
//! brackets are still open continues on the next line. Matrix entries use the
//! same complex tokens as matrix files (`1.5`, `-2i`, `3-0.5i`). `#` starts a
//! comment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::matrix_io::parse_complex;
use crate::quon::Regime;

/// Largest `L` (or matrix dimension) a config may request.
pub const MAX_LEVEL: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    TruncatedBoson {
        l: usize,
    },
    TruncatedQuon {
        l: usize,
        q: f64,
    },
    BosonlikeQuon {
        l: usize,
        q: f64,
    },
    CirculantQuon {
        l: usize,
        q: f64,
    },
    Pseudo {
        l: usize,
        q: f64,
        regime: Regime,
        r: Option<ComplexMatrix>,
    },
    Chain {
        gammas: Vec<f64>,
    },
    ExampleFixture {
        q: f64,
    },
    GeneralMatrix {
        matrix: ComplexMatrix,
    },
}

impl Family {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::TruncatedBoson { .. } => "truncated_boson",
            Family::TruncatedQuon { .. } => "truncated_quon",
            Family::BosonlikeQuon { .. } => "bosonlike_quon",
            Family::CirculantQuon { .. } => "circulant_quon",
            Family::Pseudo { .. } => "pseudo",
            Family::Chain { .. } => "chain",
            Family::ExampleFixture { .. } => "example_fixture",
            Family::GeneralMatrix { .. } => "general_matrix",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConfig {
    pub family: Family,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Scalar(String),
    List(Vec<Value>),
}

struct Entry {
    line: usize,
    value: Value,
}

fn config_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

pub fn parse_config(text: &str) -> Result<FamilyConfig> {
    let entries = collect_entries(text)?;
    let mut fields = Fields {
        entries,
        last_line: text.lines().count().max(1),
    };
    let kind_line = fields.line_of("kind");
    let kind = fields
        .take_scalar("kind")?
        .ok_or_else(|| config_err(1, "kind", "missing"))?;
    let seed = match fields.take_scalar("seed")? {
        Some((line, s)) => Some(s.parse::<u64>().map_err(|_| {
            config_err(line, "seed", format!("`{s}` is not a non-negative integer"))
        })?),
        None => None,
    };

    let family = match kind.1.as_str() {
        "truncated_boson" => Family::TruncatedBoson { l: fields.level()? },
        "truncated_quon" => Family::TruncatedQuon {
            l: fields.level()?,
            q: fields.q()?,
        },
        "bosonlike_quon" => Family::BosonlikeQuon {
            l: fields.level()?,
            q: fields.q()?,
        },
        "circulant_quon" => {
            let l = fields.level()?;
            let line = fields.line_of("q");
            let q = fields.q()?;
            if q >= 1.0 {
                return Err(config_err(
                    line,
                    "q",
                    "singular normalization: the circulant needs q in [-1, 1)",
                ));
            }
            Family::CirculantQuon { l, q }
        }
        "pseudo" => {
            let l = fields.level()?;
            let q = fields.q()?;
            let regime = match fields.take_scalar("regime")? {
                None => Regime::QuonRule,
                Some((_, s)) if s == "quon_rule" => Regime::QuonRule,
                Some((_, s)) if s == "boson_like_rule" => Regime::BosonLikeRule,
                Some((line, s)) => {
                    return Err(config_err(
                        line,
                        "regime",
                        format!("`{s}` is not quon_rule or boson_like_rule"),
                    ))
                }
            };
            let r = fields.take_matrix("R")?;
            if let Some((line, m)) = &r {
                if m.dim() != l + 1 {
                    return Err(config_err(
                        *line,
                        "R",
                        format!("expected {}x{}, got {}x{}", l + 1, l + 1, m.dim(), m.dim()),
                    ));
                }
            }
            Family::Pseudo {
                l,
                q,
                regime,
                r: r.map(|(_, m)| m),
            }
        }
        "chain" => {
            let (line, gammas) = fields
                .take_reals("gammas")?
                .ok_or_else(|| config_err(fields.last_line, "gammas", "missing"))?;
            if gammas.len() < 2 {
                return Err(config_err(
                    line,
                    "gammas",
                    "a chain needs at least 2 weights",
                ));
            }
            if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
                return Err(config_err(
                    line,
                    "gammas",
                    format!("weights must be positive, got {g}"),
                ));
            }
            if let Some((mline, m)) = fields.take_scalar("M")? {
                if m.parse::<usize>().ok() != Some(gammas.len()) {
                    return Err(config_err(
                        mline,
                        "M",
                        format!("`{m}` does not match the {} weights given", gammas.len()),
                    ));
                }
            }
            Family::Chain { gammas }
        }
        "example_fixture" => Family::ExampleFixture {
            q: if fields.entries.contains_key("q") {
                fields.q()?
            } else {
                crate::pseudo::EXAMPLE_DEFAULT_Q
            },
        },
        "general_matrix" => {
            let (_, matrix) = fields
                .take_matrix("matrix")?
                .ok_or_else(|| config_err(fields.last_line, "matrix", "missing"))?;
            Family::GeneralMatrix { matrix }
        }
        other => {
            return Err(config_err(
                kind_line,
                "kind",
                format!("unknown kind `{other}`"),
            ))
        }
    };

    if let Some((name, entry)) = fields.entries.iter().next() {
        return Err(config_err(
            entry.line,
            name,
            format!("not a parameter of kind {}", family.kind()),
        ));
    }
    Ok(FamilyConfig { family, seed })
}

struct Fields {
    entries: BTreeMap<String, Entry>,
    last_line: usize,
}

impl Fields {
    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(self.last_line, |e| e.line)
    }

    fn take_scalar(&mut self, key: &str) -> Result<Option<(usize, String)>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(Entry {
                line,
                value: Value::Scalar(s),
            }) => Ok(Some((line, s))),
            Some(Entry { line, .. }) => Err(config_err(
                line,
                key,
                "expected a single value, found a list",
            )),
        }
    }

    fn level(&mut self) -> Result<usize> {
        let (line, s) = self
            .take_scalar("L")?
            .ok_or_else(|| config_err(self.last_line, "L", "missing"))?;
        match s.parse::<usize>() {
            Ok(l) if (1..=MAX_LEVEL).contains(&l) => Ok(l),
            _ => Err(config_err(
                line,
                "L",
                format!("`{s}` is not an integer in 1..={MAX_LEVEL}"),
            )),
        }
    }

    fn q(&mut self) -> Result<f64> {
        let (line, s) = self
            .take_scalar("q")?
            .ok_or_else(|| config_err(self.last_line, "q", "missing"))?;
        match s.parse::<f64>() {
            Ok(q) if (-1.0..=1.0).contains(&q) => Ok(q),
            Ok(q) => Err(config_err(line, "q", format!("{q} is outside [-1, 1]"))),
            Err(_) => Err(config_err(line, "q", format!("`{s}` is not a number"))),
        }
    }

    fn take_reals(&mut self, key: &str) -> Result<Option<(usize, Vec<f64>)>> {
        let Some(Entry { line, value }) = self.entries.remove(key) else {
            return Ok(None);
        };
        let Value::List(items) = value else {
            return Err(config_err(line, key, "expected a bracketed list"));
        };
        let xs = items
            .iter()
            .map(|v| match v {
                Value::Scalar(s) => s
                    .parse::<f64>()
                    .map_err(|_| config_err(line, key, format!("`{s}` is not a number"))),
                Value::List(_) => Err(config_err(
                    line,
                    key,
                    "expected numbers, found a nested list",
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some((line, xs)))
    }

    fn take_matrix(&mut self, key: &str) -> Result<Option<(usize, ComplexMatrix)>> {
        let Some(Entry { line, value }) = self.entries.remove(key) else {
            return Ok(None);
        };
        let bad = |msg: String| config_err(line, key, msg);
        let Value::List(rows) = value else {
            return Err(bad("expected a list of rows".into()));
        };
        let n = rows.len();
        if n == 0 || n > MAX_LEVEL + 1 {
            return Err(bad(format!("matrix dimension {n} out of range")));
        }
        let mut out = Vec::with_capacity(n);
        for (r, row) in rows.iter().enumerate() {
            let Value::List(items) = row else {
                return Err(bad(format!("row {r} is not a list")));
            };
            if items.len() != n {
                return Err(bad(format!(
                    "row {r} has {} entries, expected {n}",
                    items.len()
                )));
            }
            let parsed = items
                .iter()
                .map(|v| match v {
                    Value::Scalar(s) => parse_complex(s)
                        .ok_or_else(|| bad(format!("`{s}` is not a complex number"))),
                    Value::List(_) => Err(bad(format!("row {r} contains a nested list"))),
                })
                .collect::<Result<Vec<C64>>>()?;
            out.push(parsed);
        }
        let m = ComplexMatrix::from_rows(&out)?;
        if !m.is_finite() {
            return Err(bad("entries must be finite".into()));
        }
        Ok(Some((line, m)))
    }
}

fn collect_entries(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut entries = BTreeMap::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)));
    while let Some((line, raw)) = lines.next() {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let Some((key, rest)) = raw.split_once('=') else {
            return Err(config_err(line, raw, "expected `key = value`"));
        };
        let key = key.trim().to_string();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(config_err(line, &key, "malformed key"));
        }
        let mut value_text = rest.trim().to_string();
        while depth(&value_text) > 0 {
            match lines.next() {
                Some((_, more)) => {
                    value_text.push(' ');
                    value_text.push_str(more.trim());
                }
                None => return Err(config_err(line, &key, "unclosed `[`")),
            }
        }
        let value = parse_value(&value_text).map_err(|m| config_err(line, &key, m))?;
        if entries.contains_key(&key) {
            return Err(config_err(line, &key, "given more than once"));
        }
        entries.insert(key, Entry { line, value });
    }
    Ok(entries)
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn depth(s: &str) -> i64 {
    s.chars().fold(0, |d, c| match c {
        '[' => d + 1,
        ']' => d - 1,
        _ => d,
    })
}

fn parse_value(s: &str) -> std::result::Result<Value, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let mut chars = s.char_indices().peekable();
    let v = parse_item(s, &mut chars)?;
    skip_ws(&mut chars);
    match chars.next() {
        None => Ok(v),
        Some((_, c)) => Err(format!("unexpected `{c}` after value")),
    }
}

type Cursor<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

fn skip_ws(chars: &mut Cursor<'_>) {
    while chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
}

fn parse_item(src: &str, chars: &mut Cursor<'_>) -> std::result::Result<Value, String> {
    skip_ws(chars);
    match chars.peek() {
        Some((_, '[')) => {
            chars.next();
            let mut items = Vec::new();
            skip_ws(chars);
            if chars.next_if(|(_, c)| *c == ']').is_some() {
                return Ok(Value::List(items));
            }
            loop {
                items.push(parse_item(src, chars)?);
                skip_ws(chars);
                match chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, ']')) => return Ok(Value::List(items)),
                    Some((_, c)) => return Err(format!("expected `,` or `]`, found `{c}`")),
                    None => return Err("unclosed `[`".into()),
                }
            }
        }
        Some(&(start, _)) => {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if matches!(c, ',' | ']' | '[') || c.is_whitespace() {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            if end == start {
                return Err("missing value".into());
            }
            Ok(Value::Scalar(src[start..end].to_string()))
        }
        None => Err("missing value".into()),
    }
}
