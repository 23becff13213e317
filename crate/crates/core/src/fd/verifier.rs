use std::fmt;
use std::str::FromStr;

use crate::element::ElementValue;

/// Satisfaction check for a ground argument tuple.
///
/// Must be total and deterministic over tuples of the constraint's arity.
pub trait Verifier: Send + Sync {
    fn verify(&self, args: &[ElementValue]) -> bool;
}

impl<F> Verifier for F
where
    F: Fn(&[ElementValue]) -> bool + Send + Sync,
{
    fn verify(&self, args: &[ElementValue]) -> bool {
        self(args)
    }
}

/// The constraint library available to problem files.
///
/// Ordering comparisons are false unless both arguments are integers;
/// `eq`/`ne` compare any two elements structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    SumEqConst(i64),
}

impl Builtin {
    pub const COMPARISONS: [Builtin; 6] = [
        Builtin::Lt,
        Builtin::Le,
        Builtin::Gt,
        Builtin::Ge,
        Builtin::Eq,
        Builtin::Ne,
    ];

    /// Required number of arguments, `None` for any positive arity.
    pub fn arity(self) -> Option<usize> {
        match self {
            Builtin::SumEqConst(_) => None,
            _ => Some(2),
        }
    }
}

impl Verifier for Builtin {
    fn verify(&self, args: &[ElementValue]) -> bool {
        let ordered = |cmp: fn(i64, i64) -> bool| match args {
            [a, b] => match (a.as_int(), b.as_int()) {
                (Some(a), Some(b)) => cmp(a, b),
                _ => false,
            },
            _ => false,
        };
        match self {
            Builtin::Lt => ordered(|a, b| a < b),
            Builtin::Le => ordered(|a, b| a <= b),
            Builtin::Gt => ordered(|a, b| a > b),
            Builtin::Ge => ordered(|a, b| a >= b),
            Builtin::Eq => matches!(args, [a, b] if a == b),
            Builtin::Ne => matches!(args, [a, b] if a != b),
            Builtin::SumEqConst(k) => {
                let mut sum: i64 = 0;
                for a in args {
                    match a.as_int().and_then(|v| sum.checked_add(v)) {
                        Some(s) => sum = s,
                        None => return false,
                    }
                }
                !args.is_empty() && sum == *k
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Lt => f.write_str("lt"),
            Builtin::Le => f.write_str("le"),
            Builtin::Gt => f.write_str("gt"),
            Builtin::Ge => f.write_str("ge"),
            Builtin::Eq => f.write_str("eq"),
            Builtin::Ne => f.write_str("ne"),
            Builtin::SumEqConst(k) => write!(f, "sum_eq_const:{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown constraint `{0}` (expected lt, le, gt, ge, eq, ne or sum_eq_const:<k>)")]
pub struct UnknownBuiltin(pub String);

impl FromStr for Builtin {
    type Err = UnknownBuiltin;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lt" => Builtin::Lt,
            "le" => Builtin::Le,
            "gt" => Builtin::Gt,
            "ge" => Builtin::Ge,
            "eq" => Builtin::Eq,
            "ne" => Builtin::Ne,
            _ => {
                let k = s
                    .strip_prefix("sum_eq_const:")
                    .and_then(|k| k.parse::<i64>().ok())
                    .ok_or_else(|| UnknownBuiltin(s.to_string()))?;
                Builtin::SumEqConst(k)
            }
        })
    }
}
