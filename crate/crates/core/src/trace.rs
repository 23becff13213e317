//! The line-oriented trace format.
//!
//! ```text
//! INSERT <iset> <e>
//! CLOSE <iset>
//! CANDIDATE <var> <e>
//! OBSERVE <var> <e>
//! RELY (<var>,<e>) (<var>,<e>) <cname>
//! PRESENT <var> <e>
//! REMOVE <var> <e>
//! ACQUIRE <iset> -> <e>|none
//! RESULT consistent|inconsistent
//! DOMAIN <var> present=[e,...] removed=[e,...]
//! SOLUTION <var>=<e> ...|none
//! ```

use std::fmt;
use std::str::FromStr;

use crate::element::ElementValue;
use crate::fd::{Pair, Relies};
use crate::iset::IsetId;

/// Something the engine did, in terms of ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Insert(IsetId, ElementValue),
    Close(IsetId),
    Candidate(Pair),
    Observe(Pair),
    Rely(Relies),
    Present(Pair),
    Remove(Pair),
    Acquire(IsetId, Option<ElementValue>),
}

/// One rendered output line, in terms of names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceLine {
    Insert { iset: String, element: ElementValue },
    Close { iset: String },
    Candidate { var: String, element: ElementValue },
    Observe { var: String, element: ElementValue },
    Rely {
        supported: (String, ElementValue),
        supporter: (String, ElementValue),
        constraint: String,
    },
    Present { var: String, element: ElementValue },
    Remove { var: String, element: ElementValue },
    Acquire { iset: String, element: Option<ElementValue> },
    Result { consistent: bool },
    Domain {
        var: String,
        present: Vec<ElementValue>,
        removed: Vec<ElementValue>,
    },
    Solution(Option<Vec<(String, ElementValue)>>),
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[ElementValue]) -> fmt::Result {
    f.write_str("[")?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str("]")
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceLine::Insert { iset, element } => write!(f, "INSERT {iset} {element}"),
            TraceLine::Close { iset } => write!(f, "CLOSE {iset}"),
            TraceLine::Candidate { var, element } => write!(f, "CANDIDATE {var} {element}"),
            TraceLine::Observe { var, element } => write!(f, "OBSERVE {var} {element}"),
            TraceLine::Rely {
                supported,
                supporter,
                constraint,
            } => write!(
                f,
                "RELY ({},{}) ({},{}) {constraint}",
                supported.0, supported.1, supporter.0, supporter.1
            ),
            TraceLine::Present { var, element } => write!(f, "PRESENT {var} {element}"),
            TraceLine::Remove { var, element } => write!(f, "REMOVE {var} {element}"),
            TraceLine::Acquire { iset, element } => match element {
                Some(e) => write!(f, "ACQUIRE {iset} -> {e}"),
                None => write!(f, "ACQUIRE {iset} -> none"),
            },
            TraceLine::Result { consistent } => {
                let word = if *consistent { "consistent" } else { "inconsistent" };
                write!(f, "RESULT {word}")
            }
            TraceLine::Domain {
                var,
                present,
                removed,
            } => {
                write!(f, "DOMAIN {var} present=")?;
                write_list(f, present)?;
                f.write_str(" removed=")?;
                write_list(f, removed)
            }
            TraceLine::Solution(None) => f.write_str("SOLUTION none"),
            TraceLine::Solution(Some(assignment)) => {
                f.write_str("SOLUTION")?;
                for (var, e) in assignment {
                    write!(f, " {var}={e}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed trace line `{0}`")]
pub struct MalformedLine(pub String);

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == ':' || c == '-')
        && s != "none"
}

fn name(s: &str) -> Option<String> {
    is_name(s).then(|| s.to_string())
}

fn element(s: &str) -> Option<ElementValue> {
    s.parse().ok()
}

fn pair(s: &str) -> Option<(String, ElementValue)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (v, e) = inner.split_once(',')?;
    let v = name(v)?;
    if v.contains(':') {
        return None;
    }
    Some((v, element(e)?))
}

fn list(s: &str, key: &str) -> Option<Vec<ElementValue>> {
    let inner = s.strip_prefix(key)?.strip_prefix("=[")?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(element).collect()
}

impl FromStr for TraceLine {
    type Err = MalformedLine;

    /// Parses exactly the rendered form: single spaces, no trailing blanks.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MalformedLine(s.to_string());
        let tokens: Vec<&str> = s.split(' ').collect();
        let parsed = match tokens.as_slice() {
            ["INSERT", iset, e] => name(iset).zip(element(e)).map(|(iset, element)| {
                TraceLine::Insert { iset, element }
            }),
            ["CLOSE", iset] => name(iset).map(|iset| TraceLine::Close { iset }),
            [tag @ ("CANDIDATE" | "OBSERVE" | "PRESENT" | "REMOVE"), var, e] => {
                name(var).zip(element(e)).map(|(var, element)| match *tag {
                    "CANDIDATE" => TraceLine::Candidate { var, element },
                    "OBSERVE" => TraceLine::Observe { var, element },
                    "PRESENT" => TraceLine::Present { var, element },
                    _ => TraceLine::Remove { var, element },
                })
            }
            ["RELY", a, b, c] => match (pair(a), pair(b), name(c)) {
                (Some(supported), Some(supporter), Some(constraint)) => Some(TraceLine::Rely {
                    supported,
                    supporter,
                    constraint,
                }),
                _ => None,
            },
            ["ACQUIRE", iset, "->", "none"] => name(iset).map(|iset| TraceLine::Acquire {
                iset,
                element: None,
            }),
            ["ACQUIRE", iset, "->", e] => name(iset).zip(element(e)).map(|(iset, e)| {
                TraceLine::Acquire {
                    iset,
                    element: Some(e),
                }
            }),
            ["RESULT", "consistent"] => Some(TraceLine::Result { consistent: true }),
            ["RESULT", "inconsistent"] => Some(TraceLine::Result { consistent: false }),
            ["DOMAIN", var, present, removed] => {
                match (name(var), list(present, "present"), list(removed, "removed")) {
                    (Some(var), Some(present), Some(removed)) => Some(TraceLine::Domain {
                        var,
                        present,
                        removed,
                    }),
                    _ => None,
                }
            }
            ["SOLUTION", "none"] => Some(TraceLine::Solution(None)),
            ["SOLUTION", rest @ ..] => rest
                .iter()
                .map(|b| {
                    let (v, e) = b.split_once('=')?;
                    Some((name(v)?, element(e)?))
                })
                .collect::<Option<Vec<_>>>()
                .map(|a| TraceLine::Solution(Some(a))),
            _ => None,
        };
        parsed.ok_or_else(bad)
    }
}
