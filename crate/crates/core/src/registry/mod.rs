//! Axiom-package registry rooted at the CES package.

mod attest;
mod institution;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::to_canonical_string;

pub use attest::{attest_internal, registry_digest, verify, Attestation};
pub use institution::{check_institution_morphism, Counterexample, Institution, InstitutionMorphism};

pub const ROOT: &str = "ces";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("package {0:?} is already attached")]
    DuplicateId(String),
    #[error("package {package:?} depends on {dependency:?}, which is not attached")]
    UnresolvedDependency { package: String, dependency: String },
    #[error("symbol {symbol:?} of {package:?} collides with the declaration in {existing:?}")]
    SymbolCollision { symbol: String, package: String, existing: String },
    #[error("the root package cannot be detached")]
    RootDetach,
    #[error("package {id:?} is required by {dependents:?}")]
    HasDependents { id: String, dependents: Vec<String> },
    #[error("no package {0:?}")]
    NotFound(String),
    #[error("dependency cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("malformed: {0}")]
    Malformed(String),
}

impl RegistryError {
    /// Conflicts with the current registry state, as opposed to invalid input.
    pub fn is_conflict(&self) -> bool {
        matches!(
            self,
            RegistryError::DuplicateId(_) | RegistryError::SymbolCollision { .. } | RegistryError::RootDetach | RegistryError::HasDependents { .. }
        )
    }
}

type Result<T> = std::result::Result<T, RegistryError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotationalAxiom {
    pub symbol: String,
    pub arity: u32,
    pub meaning: String,
    pub rendering: String,
}

impl NotationalAxiom {
    pub fn new(symbol: &str, arity: u32, meaning: &str, rendering: &str) -> Self {
        NotationalAxiom {
            symbol: symbol.into(),
            arity,
            meaning: meaning.into(),
            rendering: rendering.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub name: String,
    pub statement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hook: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomPackage {
    pub id: String,
    pub version: String,
    #[serde(default)]
    pub dependencies: Vec<String>,
    #[serde(default)]
    pub symbols: Vec<NotationalAxiom>,
    #[serde(default)]
    pub axioms: Vec<Axiom>,
}

impl AxiomPackage {
    pub fn new(id: &str, version: &str, dependencies: &[&str]) -> Self {
        AxiomPackage {
            id: id.into(),
            version: version.into(),
            dependencies: dependencies.iter().map(|d| d.to_string()).collect(),
            symbols: vec![],
            axioms: vec![],
        }
    }

    pub fn with_symbol(mut self, s: NotationalAxiom) -> Self {
        self.symbols.push(s);
        self
    }

    pub fn with_axiom(mut self, name: &str, statement: &str) -> Self {
        self.axioms.push(Axiom {
            name: name.into(),
            statement: statement.into(),
            hook: None,
        });
        self
    }

    fn check(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(RegistryError::Malformed("empty package id".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &self.symbols {
            if s.symbol.is_empty() {
                return Err(RegistryError::Malformed(format!("{}: empty symbol", self.id)));
            }
            if !seen.insert(&s.symbol) {
                return Err(RegistryError::Malformed(format!("{}: symbol {:?} declared twice", self.id, s.symbol)));
            }
        }
        Ok(())
    }
}

pub const CES_AXIOM: &str = "E(t) := (S(t) = t)";

pub fn ces_package() -> AxiomPackage {
    AxiomPackage::new(ROOT, "1", &[])
        .with_symbol(NotationalAxiom::new("E", 1, "t is established", "E(t)"))
        .with_symbol(NotationalAxiom::new("S", 1, "t applied to itself", "S(t)"))
        .with_symbol(NotationalAxiom::new("=", 2, "identity of terms", "a = b"))
        .with_symbol(NotationalAxiom::new(":=", 2, "definition", "a := b"))
        .with_axiom("CES", CES_AXIOM)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RegistrySpec {
    packages: Vec<AxiomPackage>,
}

/// Packages in attachment order; the first is always the CES package.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RegistrySpec", into = "RegistrySpec")]
pub struct Registry {
    packages: Vec<AxiomPackage>,
}

impl TryFrom<RegistrySpec> for Registry {
    type Error = RegistryError;

    fn try_from(spec: RegistrySpec) -> Result<Self> {
        Registry::from_packages(spec.packages)
    }
}

impl From<Registry> for RegistrySpec {
    fn from(r: Registry) -> Self {
        RegistrySpec { packages: r.packages }
    }
}

/// Outcome of a successful attach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attached {
    pub registry: Registry,
    pub warnings: Vec<String>,
}

impl Registry {
    /// Checks the root, id uniqueness and dependency resolution. Cycles are
    /// left for [`resolve_order`] to report.
    pub fn from_packages(packages: Vec<AxiomPackage>) -> Result<Self> {
        match packages.first() {
            Some(p) if *p == ces_package() => {}
            _ => return Err(RegistryError::Malformed("the first package must be the CES package".into())),
        }
        let mut ids = BTreeSet::new();
        for p in &packages {
            p.check()?;
            if !ids.insert(p.id.as_str()) {
                return Err(RegistryError::DuplicateId(p.id.clone()));
            }
        }
        for p in &packages {
            if let Some(d) = p.dependencies.iter().find(|d| !ids.contains(d.as_str())) {
                return Err(RegistryError::UnresolvedDependency {
                    package: p.id.clone(),
                    dependency: d.clone(),
                });
            }
        }
        Ok(Registry { packages })
    }

    pub fn packages(&self) -> &[AxiomPackage] {
        &self.packages
    }

    pub fn get(&self, id: &str) -> Option<&AxiomPackage> {
        self.packages.iter().find(|p| p.id == id)
    }

    pub fn len(&self) -> usize {
        self.packages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packages.is_empty()
    }

    /// Every declared symbol with its declaring package (first declaration wins).
    pub fn symbols(&self) -> BTreeMap<&str, (&str, &NotationalAxiom)> {
        let mut out = BTreeMap::new();
        for p in &self.packages {
            for s in &p.symbols {
                out.entry(s.symbol.as_str()).or_insert((p.id.as_str(), s));
            }
        }
        out
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(self).expect("registry serializes")
    }
}

pub fn init_registry() -> Registry {
    Registry {
        packages: vec![ces_package()],
    }
}

pub fn attach_package(r: &Registry, p: AxiomPackage) -> Result<Attached> {
    p.check()?;
    if r.get(&p.id).is_some() {
        return Err(RegistryError::DuplicateId(p.id));
    }
    if let Some(d) = p.dependencies.iter().find(|d| r.get(d).is_none()) {
        return Err(RegistryError::UnresolvedDependency {
            package: p.id.clone(),
            dependency: d.clone(),
        });
    }
    let known = r.symbols();
    let mut warnings = Vec::new();
    for s in &p.symbols {
        if let Some((owner, existing)) = known.get(s.symbol.as_str()) {
            if existing.arity != s.arity || existing.meaning != s.meaning {
                return Err(RegistryError::SymbolCollision {
                    symbol: s.symbol.clone(),
                    package: p.id.clone(),
                    existing: owner.to_string(),
                });
            }
            warnings.push(format!("{}: symbol {:?} is already declared by {owner:?}", p.id, s.symbol));
        }
    }
    let mut packages = r.packages.clone();
    packages.push(p);
    Ok(Attached {
        registry: Registry { packages },
        warnings,
    })
}

pub fn detach_package(r: &Registry, id: &str) -> Result<Registry> {
    if id == ROOT {
        return Err(RegistryError::RootDetach);
    }
    if r.get(id).is_none() {
        return Err(RegistryError::NotFound(id.into()));
    }
    let mut dependents: Vec<String> = r
        .packages
        .iter()
        .filter(|p| p.dependencies.iter().any(|d| d == id))
        .map(|p| p.id.clone())
        .collect();
    if !dependents.is_empty() {
        dependents.sort();
        return Err(RegistryError::HasDependents { id: id.into(), dependents });
    }
    Ok(Registry {
        packages: r.packages.iter().filter(|p| p.id != id).cloned().collect(),
    })
}

/// Dependencies first; among ready packages the smallest id goes next.
pub fn resolve_order(r: &Registry) -> Result<Vec<String>> {
    let deps: BTreeMap<&str, BTreeSet<&str>> = r
        .packages
        .iter()
        .map(|p| (p.id.as_str(), p.dependencies.iter().map(String::as_str).collect()))
        .collect();
    let mut remaining: BTreeMap<&str, usize> = deps.iter().map(|(&id, ds)| (id, ds.len())).collect();
    let mut ready: BTreeSet<&str> = remaining.iter().filter(|(_, &n)| n == 0).map(|(&id, _)| id).collect();
    let mut order = Vec::with_capacity(deps.len());
    while let Some(id) = ready.pop_first() {
        remaining.remove(id);
        order.push(id.to_string());
        for (&other, ds) in &deps {
            if ds.contains(id) {
                if let Some(n) = remaining.get_mut(other) {
                    *n -= 1;
                    if *n == 0 {
                        ready.insert(other);
                    }
                }
            }
        }
    }
    if remaining.is_empty() {
        return Ok(order);
    }
    // walk unresolved dependencies from the smallest stuck id until one repeats
    let mut path: Vec<&str> = vec![*remaining.keys().next().unwrap()];
    loop {
        let cur = *path.last().unwrap();
        let next = *deps[cur].iter().find(|d| remaining.contains_key(*d)).expect("a stuck package has a stuck dependency");
        if let Some(start) = path.iter().position(|&p| p == next) {
            let mut cycle: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
            cycle.push(next.to_string());
            return Err(RegistryError::Cycle(cycle));
        }
        path.push(next);
    }
}

/// `E(t)`: the table sends `t` to itself, byte for byte.
pub fn ces_holds(term: &str, s_table: &BTreeMap<String, String>) -> bool {
    s_table.get(term).is_some_and(|s| s.as_bytes() == term.as_bytes())
}

/// The serialized statement `E(t)`, usable as a term in turn.
pub fn e_statement(term: &str) -> String {
    format!("E({term})")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pkg(id: &str, deps: &[&str]) -> AxiomPackage {
        AxiomPackage::new(id, "1", deps)
    }

    #[test]
    fn init_is_ces_only() {
        let r = init_registry();
        assert_eq!(r.len(), 1);
        assert_eq!(r.packages()[0].symbols.len(), 4);
        assert_eq!(r.to_canonical(), init_registry().to_canonical());
        assert_eq!(resolve_order(&r).unwrap(), vec!["ces"]);
        let back: Registry = serde_json::from_str(&r.to_canonical()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn attach_and_detach() {
        let r = init_registry();
        let r2 = attach_package(&r, pkg("hsg0", &["ces"])).unwrap().registry;
        assert_eq!(r2.len(), 2);
        assert_eq!(detach_package(&r2, "hsg0").unwrap().to_canonical(), r.to_canonical());
        assert_eq!(
            attach_package(&r, pkg("x", &["zfc"])),
            Err(RegistryError::UnresolvedDependency { package: "x".into(), dependency: "zfc".into() })
        );
        let clash = pkg("bad", &["ces"]).with_symbol(NotationalAxiom::new("E", 2, "t is established", "E(a,b)"));
        assert!(matches!(attach_package(&r, clash), Err(RegistryError::SymbolCollision { .. })));
        let same = pkg("echo", &["ces"]).with_symbol(NotationalAxiom::new("E", 1, "t is established", "E(t)"));
        assert_eq!(attach_package(&r, same).unwrap().warnings.len(), 1);
        assert_eq!(attach_package(&r2, pkg("hsg0", &[])), Err(RegistryError::DuplicateId("hsg0".into())));
        assert_eq!(detach_package(&r2, "ces"), Err(RegistryError::RootDetach));
        assert!(detach_package(&r2, "ces").unwrap_err().is_conflict());
        let r3 = attach_package(&r2, pkg("neural", &["hsg0"])).unwrap().registry;
        assert_eq!(
            detach_package(&r3, "hsg0"),
            Err(RegistryError::HasDependents { id: "hsg0".into(), dependents: vec!["neural".into()] })
        );
    }

    #[test]
    fn order_and_cycles() {
        let mut r = init_registry();
        for (id, deps) in [("zeta", vec!["ces"]), ("alpha", vec!["ces"]), ("mid", vec!["zeta", "alpha"])] {
            r = attach_package(&r, pkg(id, &deps)).unwrap().registry;
        }
        assert_eq!(resolve_order(&r).unwrap(), vec!["ces", "alpha", "zeta", "mid"]);
        let cyclic = Registry::from_packages(vec![ces_package(), pkg("a", &["b"]), pkg("b", &["a"])]).unwrap();
        assert_eq!(resolve_order(&cyclic), Err(RegistryError::Cycle(vec!["a".into(), "b".into(), "a".into()])));
    }

    #[test]
    fn ces_is_byte_equality() {
        let table = |pairs: &[(&str, &str)]| pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<BTreeMap<_, _>>();
        assert!(ces_holds("x", &table(&[("x", "x")])));
        assert!(!ces_holds("x", &table(&[("x", "y")])));
        assert!(!ces_holds("x", &table(&[("x", "x ")])));
        assert!(!ces_holds("x", &table(&[])));
        let ex = e_statement("x");
        assert!(ces_holds(&ex, &table(&[(ex.as_str(), ex.as_str())])));
    }
}
