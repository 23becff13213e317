//! Ground domain elements.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A ground scalar that can live in an I-Set: an integer or a symbolic atom.
///
/// The derived ordering puts every integer before every atom; integers compare
/// numerically and atoms lexicographically. That ordering is only used for
/// display, internal lists keep insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementValue {
    Int(i64),
    Atom(Arc<str>),
}

impl ElementValue {
    pub fn atom(name: &str) -> Self {
        ElementValue::Atom(Arc::from(name))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            ElementValue::Int(v) => Some(*v),
            ElementValue::Atom(_) => None,
        }
    }
}

impl From<i64> for ElementValue {
    fn from(v: i64) -> Self {
        ElementValue::Int(v)
    }
}

impl From<i32> for ElementValue {
    fn from(v: i32) -> Self {
        ElementValue::Int(v as i64)
    }
}

impl From<&str> for ElementValue {
    fn from(v: &str) -> Self {
        ElementValue::atom(v)
    }
}

impl fmt::Display for ElementValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementValue::Int(v) => write!(f, "{v}"),
            ElementValue::Atom(a) => f.write_str(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is neither a signed integer nor a bare lowercase atom")]
pub struct InvalidElement(pub String);

/// Returns true for `[a-z][A-Za-z0-9_]*`.
pub fn is_atom(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for ElementValue {
    type Err = InvalidElement;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = text.parse::<i64>() {
            return Ok(ElementValue::Int(v));
        }
        if is_atom(text) {
            return Ok(ElementValue::atom(text));
        }
        Err(InvalidElement(text.to_string()))
    }
}

/// Shorthand for building integer element lists in tests and examples.
pub fn ints<I: IntoIterator<Item = i64>>(values: I) -> Vec<ElementValue> {
    values.into_iter().map(ElementValue::Int).collect()
}
