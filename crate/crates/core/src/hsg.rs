//! State grids: axes with finite index sets, tokens placed on them, and the
//! definability flag δ.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("malformed grid: {0}")]
    Malformed(String),
    #[error("not found: {0}")]
    NotFound(String),
}

/// An index value: integers for numeric axes, symbols otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexValue {
    Int(i64),
    Sym(String),
}

impl IndexValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            IndexValue::Int(i) => Some(*i),
            IndexValue::Sym(_) => None,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Int(i) => write!(f, "{i}"),
            IndexValue::Sym(s) => f.write_str(s),
        }
    }
}

impl From<i64> for IndexValue {
    fn from(v: i64) -> Self {
        IndexValue::Int(v)
    }
}

impl From<&str> for IndexValue {
    fn from(v: &str) -> Self {
        IndexValue::Sym(v.to_string())
    }
}

/// Definability value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Delta {
    #[serde(rename = "⊥", alias = "bot")]
    Bot,
    #[default]
    #[serde(rename = "⊤", alias = "top")]
    Top,
}

impl Delta {
    pub fn is_top(self) -> bool {
        self == Delta::Top
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Delta::Bot => "⊥",
            Delta::Top => "⊤",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub indices: Vec<IndexValue>,
    /// Display name used in table corners; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    /// Display labels, one per index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Axis {
    pub fn new<I, V>(name: impl Into<String>, indices: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<IndexValue>,
    {
        Axis {
            name: name.into(),
            indices: indices.into_iter().map(Into::into).collect(),
            title: None,
            labels: None,
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn with_labels<I, S>(mut self, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn display_title(&self) -> &str {
        self.title.as_deref().unwrap_or(&self.name)
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => self.indices[i].to_string(),
        }
    }

    pub fn position(&self, v: &IndexValue) -> Option<usize> {
        self.indices.iter().position(|x| x == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub id: String,
    pub coords: BTreeMap<String, IndexValue>,
    #[serde(default)]
    pub delta: Delta,
}

impl Token {
    pub fn new<I, K, V>(id: impl Into<String>, coords: I, delta: Delta) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<IndexValue>,
    {
        Token {
            id: id.into(),
            coords: coords.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
            delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GridSpec {
    axes: Vec<Axis>,
    tokens: Vec<Token>,
}

/// A validated grid. Token order is the input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    axes: Vec<Axis>,
    tokens: Vec<Token>,
    /// `positions[t][a]` is the index position of token `t` on axis `a`.
    positions: Vec<Vec<usize>>,
    token_index: HashMap<String, usize>,
}

impl TryFrom<GridSpec> for Grid {
    type Error = GridError;

    fn try_from(spec: GridSpec) -> Result<Self, GridError> {
        build_grid(spec.axes, spec.tokens)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec {
            axes: g.axes,
            tokens: g.tokens,
        }
    }
}

pub fn build_grid(axes: Vec<Axis>, tokens: Vec<Token>) -> Result<Grid, GridError> {
    let mut names = HashMap::new();
    for (i, a) in axes.iter().enumerate() {
        if names.insert(a.name.clone(), i).is_some() {
            return Err(GridError::Malformed(format!("duplicate axis {:?}", a.name)));
        }
        if a.indices.is_empty() {
            return Err(GridError::Malformed(format!("axis {:?} has no indices", a.name)));
        }
        let mut sorted = a.indices.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != a.indices.len() {
            return Err(GridError::Malformed(format!("axis {:?} repeats an index", a.name)));
        }
        if let Some(l) = &a.labels {
            if l.len() != a.indices.len() {
                return Err(GridError::Malformed(format!("axis {:?} has {} labels for {} indices", a.name, l.len(), a.indices.len())));
            }
        }
    }
    let mut token_index = HashMap::new();
    let mut positions = Vec::with_capacity(tokens.len());
    for (ti, t) in tokens.iter().enumerate() {
        if token_index.insert(t.id.clone(), ti).is_some() {
            return Err(GridError::Malformed(format!("duplicate token id {:?}", t.id)));
        }
        if let Some(k) = t.coords.keys().find(|k| !names.contains_key(*k)) {
            return Err(GridError::Malformed(format!("token {:?} uses unknown axis {k:?}", t.id)));
        }
        let mut row = Vec::with_capacity(axes.len());
        for a in &axes {
            let v = t
                .coords
                .get(&a.name)
                .ok_or_else(|| GridError::Malformed(format!("token {:?} has no coordinate on axis {:?}", t.id, a.name)))?;
            let p = a.position(v).ok_or_else(|| {
                GridError::Malformed(format!("token {:?}: {v} is outside the index set of axis {:?}", t.id, a.name))
            })?;
            row.push(p);
        }
        positions.push(row);
    }
    Ok(Grid {
        axes,
        tokens,
        positions,
        token_index,
    })
}

impl Grid {
    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_index(&self, id: &str) -> Option<usize> {
        self.token_index.get(id).copied()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.name == name)
    }

    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    pub fn token(&self, id: &str) -> Option<&Token> {
        self.token_index(id).map(|i| &self.tokens[i])
    }

    pub fn delta(&self, t: usize) -> Delta {
        self.tokens[t].delta
    }

    /// Position of token `t` on axis `a` (both by index).
    pub fn position(&self, t: usize, a: usize) -> usize {
        self.positions[t][a]
    }

    pub fn value(&self, t: usize, a: usize) -> &IndexValue {
        &self.axes[a].indices[self.positions[t][a]]
    }

    /// A copy with one token's δ replaced.
    pub fn with_delta(&self, t: usize, d: Delta) -> Grid {
        let mut g = self.clone();
        g.tokens[t].delta = d;
        g
    }

    /// A copy with every δ replaced.
    pub fn with_deltas(&self, ds: &[Delta]) -> Grid {
        let mut g = self.clone();
        for (t, &d) in g.tokens.iter_mut().zip(ds) {
            t.delta = d;
        }
        g
    }

    pub fn deltas(&self) -> Vec<Delta> {
        self.tokens.iter().map(|t| t.delta).collect()
    }
}

/// `π_a(t)`.
pub fn project<'g>(g: &'g Grid, token: &str, axis: &str) -> Result<&'g IndexValue, GridError> {
    let t = g
        .token_index(token)
        .ok_or_else(|| GridError::NotFound(format!("token {token:?}")))?;
    let a = g.axis_index(axis).ok_or_else(|| GridError::NotFound(format!("axis {axis:?}")))?;
    Ok(g.value(t, a))
}

/// Tokens with δ = ⊤, in grid order.
pub fn def_subuniverse(g: &Grid) -> Vec<&str> {
    g.tokens.iter().filter(|t| t.delta.is_top()).map(|t| t.id.as_str()).collect()
}

/// Defined tokens sharing one coordinate tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DuplicateClass {
    pub coords: Vec<IndexValue>,
    pub tokens: Vec<String>,
}

/// Report every coordinate tuple carried by two or more defined tokens.
pub fn check_state_identity(g: &Grid) -> Vec<DuplicateClass> {
    let mut classes: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
    for (t, tok) in g.tokens.iter().enumerate() {
        if tok.delta.is_top() {
            classes.entry(&g.positions[t]).or_default().push(t);
        }
    }
    let mut out: Vec<DuplicateClass> = classes
        .into_values()
        .filter(|ts| ts.len() > 1)
        .map(|ts| DuplicateClass {
            coords: (0..g.axes.len()).map(|a| g.value(ts[0], a).clone()).collect(),
            tokens: ts.iter().map(|&t| g.tokens[t].id.clone()).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.tokens.cmp(&b.tokens));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Grid {
        let axes = vec![Axis::new("depth", [0i64, 1]), Axis::new("time", [0i64, 1, 2])];
        let tokens = vec![
            Token::new("x", [("depth", 1i64), ("time", 2)], Delta::Top),
            Token::new("y", [("depth", 0i64), ("time", 0)], Delta::Bot),
            Token::new("z", [("depth", 0i64), ("time", 1)], Delta::Top),
        ];
        build_grid(axes, tokens).unwrap()
    }

    #[test]
    fn projections() {
        let g = small();
        assert_eq!(project(&g, "x", "time").unwrap(), &IndexValue::Int(2));
        assert_eq!(project(&g, "x", "depth").unwrap(), &IndexValue::Int(1));
        assert!(matches!(project(&g, "x", "mass"), Err(GridError::NotFound(_))));
    }

    #[test]
    fn out_of_range_coordinate_is_rejected() {
        let axes = vec![Axis::new("time", [0i64, 1, 2])];
        let err = build_grid(axes, vec![Token::new("x", [("time", 5i64)], Delta::Top)]).unwrap_err();
        assert!(matches!(err, GridError::Malformed(_)));
    }

    #[test]
    fn duplicate_token_is_rejected() {
        let axes = vec![Axis::new("time", [0i64])];
        let t = Token::new("x", [("time", 0i64)], Delta::Top);
        assert!(build_grid(axes, vec![t.clone(), t]).is_err());
    }

    #[test]
    fn def_subuniverse_cases() {
        let g = small();
        assert_eq!(def_subuniverse(&g), vec!["x", "z"]);
        let all_bot = g.with_deltas(&[Delta::Bot; 3]);
        assert!(def_subuniverse(&all_bot).is_empty());
        let all_top = g.with_deltas(&[Delta::Top; 3]);
        assert_eq!(def_subuniverse(&all_top).len(), 3);
    }

    #[test]
    fn state_identity() {
        let axes = vec![Axis::new("time", [0i64, 1])];
        let mk = |d2| {
            build_grid(
                axes.clone(),
                vec![
                    Token::new("a", [("time", 0i64)], Delta::Top),
                    Token::new("b", [("time", 0i64)], d2),
                    Token::new("c", [("time", 1i64)], Delta::Top),
                ],
            )
            .unwrap()
        };
        let dup = check_state_identity(&mk(Delta::Top));
        assert_eq!(dup.len(), 1);
        assert_eq!(dup[0].tokens, vec!["a", "b"]);
        assert!(check_state_identity(&mk(Delta::Bot)).is_empty());
    }

    #[test]
    fn delta_defaults_to_top_and_round_trips() {
        let text = r#"{"axes":[{"name":"t","indices":[0,1]}],"tokens":[{"id":"x","coords":{"t":1}}]}"#;
        let g: Grid = serde_json::from_str(text).unwrap();
        assert_eq!(g.delta(0), Delta::Top);
        let back: Grid = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
