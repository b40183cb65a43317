//! The JSON document format, typed bodies, check suites and table rendering.

mod body;
mod render;
mod suite;

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::canonical::to_canonical_string;
use crate::registry::Registry;

pub use body::{
    AdjunctionBody, CategoryBody, CriterionBody, DiagramBody, FunctorBody, GridBody, MapBody, MorphismBody, RingBody, SetFunctorBody,
    TypedBody,
};
pub use render::render_grid_table;
pub use suite::{check_document, run_suite, Finding, Report, Severity, Suite, SuiteReport, Verdict, EXIT_CONFLICT, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown kind {kind:?}")]
    UnknownKind { kind: String },
    #[error("schema violation at {line}:{column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("symbol {symbol:?} is not declared by any package in the referenced registry")]
    UndeclaredSymbol { symbol: String },
}

impl DocError {
    pub fn code(&self) -> &'static str {
        match self {
            DocError::Syntax { .. } => "parse.syntax",
            DocError::UnknownKind { .. } => "parse.kind",
            DocError::Schema { .. } => "parse.schema",
            DocError::UndeclaredSymbol { .. } => "symbol.undeclared",
        }
    }

    pub fn location(&self) -> Option<String> {
        match self {
            DocError::Syntax { line, column, .. } | DocError::Schema { line, column, .. } => Some(format!("{line}:{column}")),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Category,
    Functor,
    Adjunction,
    Diagram,
    Grid,
    Criterion,
    Registry,
    Package,
    Ring,
    World,
}

pub const KINDS: [Kind; 10] = [
    Kind::Category,
    Kind::Functor,
    Kind::Adjunction,
    Kind::Diagram,
    Kind::Grid,
    Kind::Criterion,
    Kind::Registry,
    Kind::Package,
    Kind::Ring,
    Kind::World,
];

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Category => "category",
            Kind::Functor => "functor",
            Kind::Adjunction => "adjunction",
            Kind::Diagram => "diagram",
            Kind::Grid => "grid",
            Kind::Criterion => "criterion",
            Kind::Registry => "registry",
            Kind::Package => "package",
            Kind::Ring => "ring",
            Kind::World => "world",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = DocError;

    fn from_str(s: &str) -> Result<Self, DocError> {
        KINDS.into_iter().find(|k| k.as_str() == s).ok_or_else(|| DocError::UnknownKind { kind: s.to_string() })
    }
}

/// A parsed document. The body is kept as raw JSON so that re-serialising
/// reproduces the canonical form of the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: u32,
    pub kind: Kind,
    pub id: String,
    pub body: Value,
    /// Path of a registry, relative to the document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registry: Option<String>,
    /// Non-structural symbols the document relies on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct BodyOnly<B> {
    body: B,
}

fn schema(e: serde_json::Error) -> DocError {
    DocError::Schema {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

fn typed<B: DeserializeOwned>(text: &str) -> Result<B, DocError> {
    serde_json::from_str::<BodyOnly<B>>(text).map(|b| b.body).map_err(schema)
}

/// Parse and schema-check a document.
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    })?;
    if let Some(k) = value.get("kind").and_then(Value::as_str) {
        k.parse::<Kind>()?;
    }
    let doc: Document = serde_json::from_str(text).map_err(schema)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(DocError::Schema {
            line: 1,
            column: 1,
            message: format!("unsupported format_version {}; expected {FORMAT_VERSION}", doc.format_version),
        });
    }
    doc.typed_from(text)?;
    Ok(doc)
}

impl Document {
    fn typed_from(&self, text: &str) -> Result<TypedBody, DocError> {
        Ok(match self.kind {
            Kind::Category => TypedBody::Category(typed(text)?),
            Kind::Functor => TypedBody::Functor(typed(text)?),
            Kind::Adjunction => TypedBody::Adjunction(typed(text)?),
            Kind::Diagram => TypedBody::Diagram(typed(text)?),
            Kind::Grid => TypedBody::Grid(typed(text)?),
            Kind::Criterion => TypedBody::Criterion(typed(text)?),
            Kind::Registry => TypedBody::Registry(typed(text)?),
            Kind::Package => TypedBody::Package(typed(text)?),
            Kind::Ring => TypedBody::Ring(typed(text)?),
            Kind::World => TypedBody::World(typed(text)?),
        })
    }

    /// The body as its kind's schema type.
    pub fn typed(&self) -> Result<TypedBody, DocError> {
        let text = serde_json::to_string(&serde_json::json!({ "body": self.body })).expect("values serialize");
        self.typed_from(&text)
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(self).expect("documents serialize")
    }
}

/// Symbol discipline: with a referenced registry every listed symbol must be
/// declared; without one, each symbol is only flagged.
pub fn check_symbols(doc: &Document, registry: Option<&Registry>) -> Result<Vec<Finding>, DocError> {
    let symbols = doc.symbols.as_deref().unwrap_or_default();
    match (doc.registry.is_some(), registry) {
        (true, Some(r)) => {
            let declared = r.symbols();
            match symbols.iter().find(|s| !declared.contains_key(s.as_str())) {
                Some(s) => Err(DocError::UndeclaredSymbol { symbol: s.clone() }),
                None => Ok(vec![]),
            }
        }
        _ => Ok(symbols
            .iter()
            .map(|s| Finding::new("symbol.unchecked", Severity::Warn, format!("symbol {s:?} is used without a registry"), None))
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonicalize;

    const GRID: &str = r#"{"format_version": 1, "kind": "grid", "id": "g",
        "body": {"axes": [{"name": "time", "indices": [0, 1]}], "tokens": [{"id": "a", "coords": {"time": 0}}]}}"#;

    #[test]
    fn round_trip_is_canonical() {
        let doc = parse_document(GRID).unwrap();
        assert_eq!(doc.kind, Kind::Grid);
        assert_eq!(doc.to_canonical(), canonicalize(GRID).unwrap());
        assert!(matches!(doc.typed().unwrap(), TypedBody::Grid(_)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_document("{\n  \"kind\": }") {
            Err(DocError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 11)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_document(&GRID.replace("\"grid\"", "\"sheaf\"")),
            Err(DocError::UnknownKind { kind }) if kind == "sheaf"
        ));
        match parse_document(&GRID.replace("\"indices\"", "\"index\"")) {
            Err(DocError::Schema { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_document(&GRID.replace("\"id\": \"g\"", "\"id\": \"g\", \"extra\": 1")), Err(DocError::Schema { .. })));
    }

    #[test]
    fn guard_strings_parse_in_criteria() {
        let text = r#"{"format_version": 1, "kind": "criterion", "id": "c", "body": {
            "grid": {"axes": [{"name": "time", "indices": [0, 1, 2, 3, 4]}], "tokens": [{"id": "a", "coords": {"time": 2}}]},
            "criterion": {"guard": {"expr": "(and (delta_is ⊤) (coord_cmp time ≤ 3))"}, "carrier": {"a": ["•"]}}}}"#;
        assert!(matches!(parse_document(text).unwrap().typed().unwrap(), TypedBody::Criterion(_)));
    }

    #[test]
    fn symbol_discipline() {
        let mut doc = parse_document(GRID).unwrap();
        doc.symbols = Some(vec!["⊗".into(), "E".into()]);
        doc.registry = Some("registry.json".into());
        let r = crate::registry::init_registry();
        assert_eq!(check_symbols(&doc, Some(&r)), Err(DocError::UndeclaredSymbol { symbol: "⊗".into() }));
        doc.symbols = Some(vec!["E".into()]);
        assert_eq!(check_symbols(&doc, Some(&r)), Ok(vec![]));
        doc.registry = None;
        assert_eq!(check_symbols(&doc, None).unwrap().len(), 1);
    }
}
