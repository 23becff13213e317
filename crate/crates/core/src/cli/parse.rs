//! The problem-file format.
//!
//! ```text
//! # comment
//! iset <name> open|closed {e1,e2,...}
//! var <name> :: <iset>
//! fdc <builtin> <var>...
//! isetc member <e> <iset>
//! isetc union|intersection|difference <a> <b> <c>
//! isetc inclusion <a> <b>
//! source <iset> script [e1,e2,...]
//! source <iset> range <lo>..<hi>
//! source <iset> interactive
//! option labeling on|off
//! ```

use std::collections::HashMap;

use crate::element::{ElementValue, InvalidElement};
use crate::fd::{Builtin, UnknownBuiltin};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetRelation {
    Member(ElementValue, usize),
    Union(usize, usize, usize),
    Intersection(usize, usize, usize),
    Difference(usize, usize, usize),
    Inclusion(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceSpec {
    Script(Vec<ElementValue>),
    Range(i64, i64),
    Interactive,
}

/// One directive, with names resolved to declaration indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Iset {
        name: String,
        open: bool,
        elements: Vec<ElementValue>,
    },
    Var {
        name: String,
        iset: usize,
    },
    Fdc {
        builtin: Builtin,
        args: Vec<usize>,
    },
    Isetc(SetRelation),
    Source {
        iset: usize,
        spec: SourceSpec,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemFile {
    /// Directives in file order, with their line numbers.
    pub directives: Vec<(usize, Directive)>,
    pub iset_names: Vec<String>,
    pub var_names: Vec<String>,
    pub labeling: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("`{0}` is not a valid name")]
    BadName(String),
    #[error(transparent)]
    BadElement(#[from] InvalidElement),
    #[error(transparent)]
    UnknownBuiltin(#[from] UnknownBuiltin),
    #[error("undefined {kind} `{name}`")]
    Undefined { kind: &'static str, name: String },
    #[error("{kind} `{name}` is already declared")]
    Duplicate { kind: &'static str, name: String },
    #[error("`{builtin}` takes {expected} arguments, got {got}")]
    Arity {
        builtin: Builtin,
        expected: usize,
        got: usize,
    },
    #[error("I-Set `{0}` already has a source")]
    SourceRebound(String),
    #[error("empty range {0}..{1}")]
    EmptyRange(i64, i64),
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "none"
}

/// Elements between `open` and `close`, comma separated.
fn element_list(text: &str, open: char, close: char) -> Result<Vec<ElementValue>, ParseErrorKind> {
    let inner = text
        .strip_prefix(open)
        .and_then(|t| t.strip_suffix(close))
        .ok_or(ParseErrorKind::Expected(if open == '{' {
            "an element set `{e1,e2,...}`"
        } else {
            "an element list `[e1,e2,...]`"
        }))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|e| e.trim().parse::<ElementValue>().map_err(ParseErrorKind::from))
        .collect()
}

/// First whitespace-delimited word and the trimmed remainder.
fn split_word(text: &str) -> (&str, &str) {
    let text = text.trim();
    match text.split_once(char::is_whitespace) {
        Some((word, rest)) => (word, rest.trim()),
        None => (text, ""),
    }
}

struct Names {
    isets: HashMap<String, usize>,
    vars: HashMap<String, usize>,
    sourced: Vec<bool>,
}

impl Names {
    fn iset(&self, name: &str) -> Result<usize, ParseErrorKind> {
        self.isets.get(name).copied().ok_or_else(|| ParseErrorKind::Undefined {
            kind: "I-Set",
            name: name.to_string(),
        })
    }

    fn var(&self, name: &str) -> Result<usize, ParseErrorKind> {
        self.vars.get(name).copied().ok_or_else(|| ParseErrorKind::Undefined {
            kind: "variable",
            name: name.to_string(),
        })
    }
}

fn fresh(table: &HashMap<String, usize>, kind: &'static str, name: &str) -> Result<(), ParseErrorKind> {
    if !is_name(name) {
        return Err(ParseErrorKind::BadName(name.to_string()));
    }
    if table.contains_key(name) {
        return Err(ParseErrorKind::Duplicate {
            kind,
            name: name.to_string(),
        });
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ParseError> {
        let mut file = ProblemFile::default();
        let mut names = Names {
            isets: HashMap::new(),
            vars: HashMap::new(),
            sourced: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let directive = file
                .parse_line(content, &mut names)
                .map_err(|kind| ParseError { line, kind })?;
            if let Some(d) = directive {
                file.directives.push((line, d));
            }
        }
        Ok(file)
    }

    fn parse_line(&mut self, content: &str, names: &mut Names) -> Result<Option<Directive>, ParseErrorKind> {
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "iset" => {
                let (name, after) = split_word(rest);
                let (mode, elements) = split_word(after);
                if elements.is_empty() {
                    return Err(ParseErrorKind::Expected("`iset <name> open|closed {...}`"));
                }
                fresh(&names.isets, "I-Set", name)?;
                let open = match mode {
                    "open" => true,
                    "closed" => false,
                    _ => return Err(ParseErrorKind::Expected("`open` or `closed`")),
                };
                let elements = element_list(elements, '{', '}')?;
                names.isets.insert(name.to_string(), self.iset_names.len());
                names.sourced.push(false);
                self.iset_names.push(name.to_string());
                Ok(Some(Directive::Iset {
                    name: name.to_string(),
                    open,
                    elements,
                }))
            }
            "var" => {
                let [name, "::", iset] = words.as_slice() else {
                    return Err(ParseErrorKind::Expected("`var <name> :: <iset>`"));
                };
                fresh(&names.vars, "variable", name)?;
                let iset = names.iset(iset)?;
                names.vars.insert(name.to_string(), self.var_names.len());
                self.var_names.push(name.to_string());
                Ok(Some(Directive::Var {
                    name: name.to_string(),
                    iset,
                }))
            }
            "fdc" => {
                let Some((cname, args)) = words.split_first() else {
                    return Err(ParseErrorKind::Expected("`fdc <constraint> <var>...`"));
                };
                let builtin: Builtin = cname.parse()?;
                let args = args.iter().map(|a| names.var(a)).collect::<Result<Vec<_>, _>>()?;
                match builtin.arity() {
                    Some(expected) if expected != args.len() => {
                        return Err(ParseErrorKind::Arity {
                            builtin,
                            expected,
                            got: args.len(),
                        })
                    }
                    _ if args.is_empty() => return Err(ParseErrorKind::Expected("at least one variable")),
                    _ => {}
                }
                Ok(Some(Directive::Fdc { builtin, args }))
            }
            "isetc" => {
                let relation = match words.as_slice() {
                    ["member", e, s] => SetRelation::Member(e.parse()?, names.iset(s)?),
                    [kind @ ("union" | "intersection" | "difference"), a, b, c] => {
                        let (a, b, c) = (names.iset(a)?, names.iset(b)?, names.iset(c)?);
                        match *kind {
                            "union" => SetRelation::Union(a, b, c),
                            "intersection" => SetRelation::Intersection(a, b, c),
                            _ => SetRelation::Difference(a, b, c),
                        }
                    }
                    ["inclusion", a, b] => SetRelation::Inclusion(names.iset(a)?, names.iset(b)?),
                    _ => return Err(ParseErrorKind::Expected("an I-Set constraint")),
                };
                Ok(Some(Directive::Isetc(relation)))
            }
            "source" => {
                let (name, after) = split_word(rest);
                let (kind, arg) = split_word(after);
                let iset = names.iset(name)?;
                let spec = match kind {
                    "script" => SourceSpec::Script(element_list(arg, '[', ']')?),
                    "range" => {
                        let bounds = arg
                            .split_once("..")
                            .and_then(|(lo, hi)| Some((lo.parse::<i64>().ok()?, hi.parse::<i64>().ok()?)));
                        let Some((lo, hi)) = bounds else {
                            return Err(ParseErrorKind::Expected("`<lo>..<hi>`"));
                        };
                        if lo > hi {
                            return Err(ParseErrorKind::EmptyRange(lo, hi));
                        }
                        SourceSpec::Range(lo, hi)
                    }
                    "interactive" if arg.is_empty() => SourceSpec::Interactive,
                    _ => return Err(ParseErrorKind::Expected("`script [...]`, `range <lo>..<hi>` or `interactive`")),
                };
                if std::mem::replace(&mut names.sourced[iset], true) {
                    return Err(ParseErrorKind::SourceRebound(name.to_string()));
                }
                Ok(Some(Directive::Source { iset, spec }))
            }
            "option" => {
                self.labeling = Some(match words.as_slice() {
                    ["labeling", "on"] => true,
                    ["labeling", "off"] => false,
                    _ => return Err(ParseErrorKind::Expected("`option labeling on|off`")),
                });
                Ok(None)
            }
            other => Err(ParseErrorKind::UnknownDirective(other.to_string())),
        }
    }
}
