use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::JGuardError;
use crate::hsg::{Delta, IndexValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "<" => CmpOp::Lt,
            "<=" | "≤" => CmpOp::Le,
            "=" | "==" => CmpOp::Eq,
            "!=" | "≠" => CmpOp::Ne,
            ">=" | "≥" => CmpOp::Ge,
            ">" => CmpOp::Gt,
            _ => return None,
        })
    }

    pub fn is_order(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        })
    }
}

/// `expr := atom | (and expr+) | (or expr+) | (not expr)`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GuardExpr {
    True,
    False,
    DeltaIs(Delta),
    CoordCmp { axis: String, op: CmpOp, value: IndexValue },
    ReachableWithin(i64),
    And(Vec<GuardExpr>),
    Or(Vec<GuardExpr>),
    Not(Box<GuardExpr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn lex(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, JGuardError> {
    let tok = tokens.get(*pos).ok_or_else(|| JGuardError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    None => return Err(JGuardError::Parse("unclosed '('".into())),
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                }
            }
        }
        ")" => Err(JGuardError::Parse("unexpected ')'".into())),
        a => Ok(Sexp::Atom(a.to_string())),
    }
}

fn value(s: &str) -> IndexValue {
    s.parse::<i64>().map(IndexValue::Int).unwrap_or_else(|_| IndexValue::Sym(s.to_string()))
}

fn convert(s: &Sexp) -> Result<GuardExpr, JGuardError> {
    let items = match s {
        Sexp::Atom(a) if a == "true" => return Ok(GuardExpr::True),
        Sexp::Atom(a) if a == "false" => return Ok(GuardExpr::False),
        Sexp::Atom(a) => return Err(JGuardError::Parse(format!("unknown atom {a:?}"))),
        Sexp::List(items) => items,
    };
    let head = match items.first() {
        Some(Sexp::Atom(h)) => h.as_str(),
        _ => return Err(JGuardError::Parse("expected an operator".into())),
    };
    let args = &items[1..];
    let atom = |i: usize| match args.get(i) {
        Some(Sexp::Atom(a)) => Ok(a.as_str()),
        _ => Err(JGuardError::Parse(format!("{head}: argument {} must be an atom", i + 1))),
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(JGuardError::Parse(format!("{head} takes {n} argument(s), got {}", args.len())))
        }
    };
    match head {
        "and" | "or" => {
            if args.is_empty() {
                return Err(JGuardError::Parse(format!("{head} needs at least one operand")));
            }
            let sub = args.iter().map(convert).collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "and" { GuardExpr::And(sub) } else { GuardExpr::Or(sub) })
        }
        "not" => {
            arity(1)?;
            Ok(GuardExpr::Not(Box::new(convert(&args[0])?)))
        }
        "delta_is" => {
            arity(1)?;
            let d = match atom(0)? {
                "⊤" | "top" => Delta::Top,
                "⊥" | "bot" => Delta::Bot,
                other => return Err(JGuardError::Parse(format!("delta_is: {other:?} is not ⊤ or ⊥"))),
            };
            Ok(GuardExpr::DeltaIs(d))
        }
        "coord_cmp" => {
            arity(3)?;
            let op = CmpOp::parse(atom(1)?).ok_or_else(|| JGuardError::Parse(format!("coord_cmp: unknown operator {:?}", atom(1).unwrap())))?;
            Ok(GuardExpr::CoordCmp {
                axis: atom(0)?.to_string(),
                op,
                value: value(atom(2)?),
            })
        }
        "reachable_within" => {
            arity(1)?;
            let t = atom(0)?
                .parse()
                .map_err(|_| JGuardError::Parse("reachable_within: expected an integer".into()))?;
            Ok(GuardExpr::ReachableWithin(t))
        }
        other => Err(JGuardError::Parse(format!("unknown operator {other:?}"))),
    }
}

impl FromStr for GuardExpr {
    type Err = JGuardError;

    fn from_str(s: &str) -> Result<Self, JGuardError> {
        let tokens = lex(s);
        let mut pos = 0;
        let sexp = read(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(JGuardError::Parse("trailing input".into()));
        }
        convert(&sexp)
    }
}

impl TryFrom<String> for GuardExpr {
    type Error = JGuardError;

    fn try_from(s: String) -> Result<Self, JGuardError> {
        s.parse()
    }
}

impl From<GuardExpr> for String {
    fn from(e: GuardExpr) -> String {
        e.to_string()
    }
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[GuardExpr]| {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            f.write_str(")")
        };
        match self {
            GuardExpr::True => f.write_str("true"),
            GuardExpr::False => f.write_str("false"),
            GuardExpr::DeltaIs(d) => write!(f, "(delta_is {d})"),
            GuardExpr::CoordCmp { axis, op, value } => write!(f, "(coord_cmp {axis} {op} {value})"),
            GuardExpr::ReachableWithin(t) => write!(f, "(reachable_within {t})"),
            GuardExpr::And(xs) => list(f, "and", xs),
            GuardExpr::Or(xs) => list(f, "or", xs),
            GuardExpr::Not(x) => write!(f, "(not {x})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for src in [
            "true",
            "(delta_is ⊤)",
            "(and (coord_cmp time <= 3) (not (delta_is ⊥)))",
            "(or (reachable_within 2) (coord_cmp layer = Ring))",
        ] {
            let e: GuardExpr = src.parse().unwrap();
            assert_eq!(e.to_string(), src);
        }
        assert_eq!("(coord_cmp time ≤ 3)".parse::<GuardExpr>().unwrap().to_string(), "(coord_cmp time <= 3)");
    }

    #[test]
    fn malformed_inputs() {
        for src in ["", "(and)", "(not true true)", "(delta_is maybe)", "(coord_cmp time ~ 3)", "(true", "true)", "(frob 1)"] {
            assert!(src.parse::<GuardExpr>().is_err(), "{src}");
        }
    }
}
