use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::{check_symbols, parse_document, Document, Kind, TypedBody};
use crate::adjunction::{check_idempotent, monad_of, verify_adjunction, Limits};
use crate::cat::{validate_category, validate_functor, LawReport};
use crate::hsg::check_state_identity;
use crate::jguard::{check_quasi_adjunction, QuasiMode};
use crate::kan::{kan_extend, verify_kan_universal, FailureKind};
use crate::neuro::World;
use crate::registry::{attach_package, init_registry, resolve_order, Registry, RegistryError};
use crate::temporal::future_violations;
use crate::tower::{check_free_ring_universal, FinRing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CONFLICT: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warn,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub code: String,
    pub severity: Severity,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl Finding {
    pub fn new(code: &str, severity: Severity, message: impl Into<String>, location: Option<String>) -> Self {
        Finding {
            code: code.into(),
            severity,
            message: message.into(),
            location,
        }
    }

    fn error(code: &str, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Error, message, None)
    }

    fn info(code: &str, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Info, message, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl Verdict {
    fn of(findings: &[Finding]) -> Verdict {
        if findings.iter().any(|f| f.severity == Severity::Error) {
            Verdict::Fail
        } else if findings.iter().any(|f| f.severity == Severity::Warn) {
            Verdict::Warn
        } else {
            Verdict::Pass
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub source: String,
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
}

impl Report {
    fn new(subject: String, source: String, mut findings: Vec<Finding>) -> Self {
        findings.sort();
        Report {
            verdict: Verdict::of(&findings),
            subject,
            source,
            findings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub verdict: Verdict,
    pub reports: Vec<Report>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Category,
    Adjunction,
    Kan,
    Grid,
    Temporal,
    Jguard,
    Tower,
    Registry,
}

const SUITES: [(Suite, &str); 9] = [
    (Suite::All, "all"),
    (Suite::Category, "category"),
    (Suite::Adjunction, "adjunction"),
    (Suite::Kan, "kan"),
    (Suite::Grid, "grid"),
    (Suite::Temporal, "temporal"),
    (Suite::Jguard, "jguard"),
    (Suite::Tower, "tower"),
    (Suite::Registry, "registry"),
];

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SUITES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(x, _)| *x)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(SUITES.iter().find(|(x, _)| x == self).unwrap().1)
    }
}

impl Suite {
    fn covers(self, kind: Kind) -> bool {
        match self {
            Suite::All => true,
            Suite::Category => matches!(kind, Kind::Category | Kind::Functor),
            Suite::Adjunction => kind == Kind::Adjunction,
            Suite::Kan => kind == Kind::Diagram,
            Suite::Grid | Suite::Temporal => kind == Kind::Grid,
            Suite::Jguard => kind == Kind::Criterion,
            Suite::Tower => kind == Kind::Ring,
            Suite::Registry => matches!(kind, Kind::Registry | Kind::Package),
        }
    }
}

fn law_findings(prefix: &str, r: &LawReport) -> Vec<Finding> {
    r.violations
        .iter()
        .map(|v| {
            let law = serde_json::to_value(v.law).unwrap();
            Finding::new(&format!("{prefix}.{}", law.as_str().unwrap()), Severity::Error, v.to_string(), Some(v.ids.join(", ")))
        })
        .collect()
}

/// Findings for one parsed document. `registry` is the referenced registry,
/// if the document names one and it could be loaded.
pub fn check_document(doc: &Document, suite: Suite, registry: Option<&Registry>) -> Vec<Finding> {
    let mut out = match check_symbols(doc, registry) {
        Ok(f) => f,
        Err(e) => vec![Finding::error(e.code(), e.to_string())],
    };
    if !suite.covers(doc.kind) {
        out.push(Finding::info("suite.skipped", format!("{} documents are not part of the {suite} suite", doc.kind)));
        return out;
    }
    let body = match doc.typed() {
        Ok(b) => b,
        Err(e) => {
            out.push(Finding::new(e.code(), Severity::Error, e.to_string(), e.location()));
            return out;
        }
    };
    let limits = Limits::default();
    match body {
        TypedBody::Category(c) => match c.build() {
            Ok(c) => out.extend(law_findings("category", &validate_category(&c))),
            Err(e) => out.push(Finding::error("category.malformed", e.to_string())),
        },
        TypedBody::Functor(f) => match f.build(&doc.id) {
            Ok(f) => {
                let r = validate_category(&f.source).merge(validate_category(&f.target)).merge(validate_functor(&f));
                out.extend(law_findings("functor", &r));
            }
            Err(e) => out.push(Finding::error("functor.malformed", e.to_string())),
        },
        TypedBody::Adjunction(a) => match a.build(&doc.id, limits) {
            Ok(adj) => match verify_adjunction(&adj, limits) {
                Ok(r) if r.is_ok() => match monad_of(&adj) {
                    Ok(m) => {
                        let i = check_idempotent(&m);
                        out.push(Finding::info("adjunction.idempotent", format!("monad idempotent: {}", i.idempotent)));
                    }
                    Err(e) => out.push(Finding::error("adjunction.monad", e.to_string())),
                },
                Ok(r) => out.extend(law_findings("adjunction", &r)),
                Err(e) => out.push(Finding::error("adjunction.capacity", e.to_string())),
            },
            Err(e) => out.push(Finding::error("adjunction.malformed", e.to_string())),
        },
        TypedBody::Diagram(d) => out.extend(check_diagram(&d)),
        TypedBody::Grid(gb) => match gb.build() {
            Ok(g) => {
                if suite != Suite::Temporal {
                    for class in check_state_identity(&g) {
                        out.push(Finding::new(
                            "grid.duplicate_state",
                            Severity::Error,
                            format!("defined tokens share one state: {}", class.tokens.join(", ")),
                            Some(class.tokens.join(", ")),
                        ));
                    }
                }
                if suite != Suite::Grid {
                    if let (Some(dep), Some(tb)) = (&gb.dep, &gb.time) {
                        match future_violations(&g, dep, tb) {
                            Ok(vs) => {
                                for (x, y) in vs {
                                    let t = g.token_index(&x).unwrap();
                                    if g.delta(t).is_top() {
                                        out.push(Finding::new(
                                            "temporal.future_reference",
                                            Severity::Error,
                                            format!("defined token {x} depends on later token {y}"),
                                            Some(format!("{x} -> {y}")),
                                        ));
                                    }
                                }
                            }
                            Err(e) => out.push(Finding::error("temporal.malformed", e.to_string())),
                        }
                    } else if suite == Suite::Temporal {
                        out.push(Finding::info("temporal.unbound", "no dependency graph or time binding"));
                    }
                }
            }
            Err(e) => out.push(Finding::error("grid.malformed", e.to_string())),
        },
        TypedBody::Criterion(c) => match c.grid.build() {
            Ok(g) => match check_quasi_adjunction(&c.criterion, &g) {
                Ok(r) => {
                    let mode = serde_json::to_value(r.mode).unwrap();
                    let mut msg = format!("mode {}", mode.as_str().unwrap());
                    if let Some(w) = &r.witness {
                        msg.push_str(&format!(", witness {w}"));
                    }
                    out.push(match (c.expect, r.mode) {
                        (Some(e), m) if e != m => Finding::new("jguard.mode", Severity::Error, format!("expected {}, got {msg}", serde_json::to_value(e).unwrap().as_str().unwrap()), r.witness.clone()),
                        (None, QuasiMode::Fails) => Finding::new("jguard.mode", Severity::Error, msg, r.witness.clone()),
                        (None, QuasiMode::Implication) => Finding::new("jguard.mode", Severity::Warn, msg, None),
                        _ => Finding::info("jguard.mode", msg),
                    });
                }
                Err(e) => out.push(Finding::error("jguard.malformed", e.to_string())),
            },
            Err(e) => out.push(Finding::error("grid.malformed", e.to_string())),
        },
        TypedBody::Registry(r) => {
            if let Err(e) = resolve_order(&r) {
                out.push(Finding::error("registry.order", e.to_string()));
            }
        }
        TypedBody::Package(p) => {
            let base = registry.cloned().unwrap_or_else(init_registry);
            match attach_package(&base, p) {
                Ok(a) => out.extend(a.warnings.into_iter().map(|w| Finding::new("registry.warning", Severity::Warn, w, None))),
                Err(e @ RegistryError::UnresolvedDependency { .. }) if registry.is_none() => {
                    out.push(Finding::new("registry.unresolved", Severity::Warn, e.to_string(), None))
                }
                Err(e) if e.is_conflict() => out.push(Finding::error("registry.conflict", e.to_string())),
                Err(e) => out.push(Finding::error("registry.invalid", e.to_string())),
            }
        }
        TypedBody::Ring(rb) => {
            let r = rb.ring;
            match FinRing::new(r.name.clone(), r.elements.clone(), r.add.clone(), r.mul.clone(), r.zero, r.one) {
                Ok(r) => {
                    out.extend(r.axiom_failures().into_iter().map(|a| Finding::error("ring.axiom", format!("{}: {a} fails", r.name))));
                    let gens: Vec<&str> = rb.generators.iter().map(String::as_str).collect();
                    match check_free_ring_universal(&gens, &r) {
                        Ok(rep) if rep.passed() => out.push(Finding::info("ring.free", format!("{} maps from Z[{}]", rep.homs, gens.join(",")))),
                        Ok(rep) => out.extend(rep.failures.into_iter().map(|f| Finding::error("ring.free", f))),
                        Err(e) => out.push(Finding::error("ring.free", e.to_string())),
                    }
                    match r.zero_divisors() {
                        Some((a, b)) => out.push(Finding::info("ring.domain", format!("not a domain: {} · {} = 0", r.elements[a], r.elements[b]))),
                        None => out.push(Finding::info("ring.domain", "integral domain")),
                    }
                }
                Err(e) => out.push(Finding::error("ring.malformed", e.to_string())),
            }
        }
        TypedBody::World(w) => {
            if let Err(e) = World::new(w) {
                out.push(Finding::error("world.malformed", e.to_string()));
            }
        }
    }
    out
}

fn check_diagram(d: &super::DiagramBody) -> Vec<Finding> {
    let build = || -> Result<_, crate::cat::CatError> {
        let (c, dd) = (std::sync::Arc::new(d.source.build()?), std::sync::Arc::new(d.target.build()?));
        let k = d.along.build("K", c.clone(), dd.clone())?;
        let f = d.values.build(c)?;
        let cand = d.candidate.as_ref().map(|x| x.build(dd)).transpose()?;
        Ok((k, f, cand))
    };
    let (k, f, cand) = match build() {
        Ok(x) => x,
        Err(e) => return vec![Finding::error("kan.malformed", e.to_string())],
    };
    let mut out = law_findings("kan", &validate_functor(&k).merge(f.validate()));
    if !out.is_empty() {
        return out;
    }
    let ext = match kan_extend(d.side, &f, &k, Limits::default()) {
        Ok(e) => e,
        Err(e) => return vec![Finding::error("kan.capacity", e.to_string())],
    };
    match cand {
        None => out.push(Finding::info("kan.extension", format!("value sizes {:?}", ext.functor.sizes))),
        Some(c) => match verify_kan_universal(&c, &f, &k, d.side, &[ext.functor.clone(), c.clone()]) {
            Ok(r) if r.passed() => out.push(Finding::info("kan.universal", "candidate is universal")),
            Ok(r) => {
                for (kind, code) in [(FailureKind::Existence, "kan.existence"), (FailureKind::Uniqueness, "kan.uniqueness")] {
                    if r.has(kind) {
                        out.push(Finding::error(code, format!("candidate fails {code} against the computed extension")));
                    }
                }
            }
            Err(e) => out.push(Finding::error("kan.malformed", e.to_string())),
        },
    }
    out
}

fn load_registry(doc_path: &Path, reference: &str) -> Result<Registry, String> {
    let path = doc_path.parent().unwrap_or(Path::new(".")).join(reference);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Ok(doc) = parse_document(&text) {
        if let Ok(TypedBody::Registry(r)) = doc.typed() {
            return Ok(r);
        }
    }
    serde_json::from_str(&text).map_err(|e| format!("{}: not a registry: {e}", path.display()))
}

/// Check every file, returning the aggregated report and the exit code.
pub fn run_suite(paths: &[PathBuf], suite: Suite) -> (SuiteReport, i32) {
    let mut io_failed = false;
    let mut reports = Vec::new();
    for path in paths {
        let source = path.display().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                io_failed = true;
                reports.push(Report::new(source.clone(), source, vec![Finding::error("io.read", e.to_string())]));
                continue;
            }
        };
        let doc = match parse_document(&text) {
            Ok(d) => d,
            Err(e) => {
                reports.push(Report::new(source.clone(), source, vec![Finding::new(e.code(), Severity::Error, e.to_string(), e.location())]));
                continue;
            }
        };
        let registry = match doc.registry.as_deref().map(|r| load_registry(path, r)) {
            Some(Err(msg)) => {
                io_failed = true;
                reports.push(Report::new(doc.id.clone(), source, vec![Finding::error("io.registry", msg)]));
                continue;
            }
            Some(Ok(r)) => Some(r),
            None => None,
        };
        let findings = check_document(&doc, suite, registry.as_ref());
        reports.push(Report::new(doc.id.clone(), source, findings));
    }
    reports.sort_by(|a, b| (&a.subject, &a.source).cmp(&(&b.subject, &b.source)));
    let all: Vec<Finding> = reports.iter().flat_map(|r| r.findings.clone()).collect();
    let verdict = Verdict::of(&all);
    let code = if io_failed {
        EXIT_IO
    } else if verdict == Verdict::Fail {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    };
    (SuiteReport { suite, verdict, reports }, code)
}
