use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ring::FinRing;
use super::TowerError;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Integers,
    Finite(FinRing),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionField {
    /// `ℚ` with `n ↦ n/1`.
    Rationals,
    /// A finite domain is already a field; the embedding is the identity.
    Finite(FinRing),
}

impl FractionField {
    pub fn embed_integer(n: &BigInt) -> Rational {
        Rational::from_integer(n.clone())
    }
}

pub fn fraction_field(domain: &Domain) -> Result<FractionField, TowerError> {
    match domain {
        Domain::Integers => Ok(FractionField::Rationals),
        Domain::Finite(r) => {
            if let Some((a, b)) = r.zero_divisors() {
                return Err(TowerError::NotADomain {
                    ring: r.name.clone(),
                    witness: (r.elements[a].clone(), r.elements[b].clone()),
                });
            }
            if r.zero == r.one {
                return Err(TowerError::Precondition(format!("{} is the zero ring", r.name)));
            }
            Ok(FractionField::Finite(r.clone()))
        }
    }
}

/// Target of the ring map out of `ℤ`; the map itself is forced (`n ↦ n·1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldTarget {
    Rationals,
    Finite(FinRing),
}

/// Integers probed for injectivity and fractions probed for the extension.
pub const PROBE_BOUND: i64 = 16;

fn probes() -> Vec<Rational> {
    let mut out = Vec::new();
    for b in 1..=4 {
        for a in -4..=4 {
            let q = rational(a, b);
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FracReport {
    /// Field-hom laws that failed for the constructed extension.
    pub hom_failures: Vec<String>,
    pub agrees_on_integers: bool,
    /// `(alternative index, fraction)` where an alternative that agrees on
    /// the integers takes a different value.
    pub uniqueness_violations: Vec<(usize, String)>,
    /// Alternatives that do not restrict to the given map on the integers.
    pub not_extensions: Vec<usize>,
}

impl FracReport {
    pub fn passed(&self) -> bool {
        self.hom_failures.is_empty() && self.agrees_on_integers && self.uniqueness_violations.is_empty()
    }
}

/// Extends `ℤ → K` along `ℤ → ℚ` by `a/b ↦ h(a)·h(b)⁻¹` and compares the
/// result with the supplied alternatives.
pub fn check_frac_extension(target: &FieldTarget, alternatives: &[&dyn Fn(&Rational) -> Rational]) -> Result<FracReport, TowerError> {
    let r = match target {
        FieldTarget::Rationals => None,
        FieldTarget::Finite(r) => Some(r),
    };
    if let Some(r) = r {
        let zero = r.from_int(&BigInt::zero());
        if let Some(n) = (1..=PROBE_BOUND).find(|&n| r.from_int(&BigInt::from(n)) == zero) {
            return Err(TowerError::Precondition(format!("ℤ → {} is not injective: {n} ↦ 0", r.name)));
        }
        return Err(TowerError::Precondition(format!("{} is finite; no injective map from ℤ", r.name)));
    }
    let h = |n: &BigInt| Rational::from_integer(n.clone());
    let ext = |q: &Rational| h(q.numer()) * h(q.denom()).recip();

    let qs = probes();
    let mut hom_failures = Vec::new();
    if ext(&Rational::one()) != Rational::one() {
        hom_failures.push("unit".to_string());
    }
    'pairs: for p in &qs {
        for q in &qs {
            if ext(&(p + q)) != ext(p) + ext(q) {
                hom_failures.push(format!("additivity at ({p}, {q})"));
                break 'pairs;
            }
            if ext(&(p * q)) != ext(p) * ext(q) {
                hom_failures.push(format!("multiplicativity at ({p}, {q})"));
                break 'pairs;
            }
        }
    }
    let ints: Vec<BigInt> = (-PROBE_BOUND..=PROBE_BOUND).map(BigInt::from).collect();
    let agrees_on_integers = ints.iter().all(|n| ext(&FractionField::embed_integer(n)) == h(n));

    let mut uniqueness_violations = Vec::new();
    let mut not_extensions = Vec::new();
    for (i, alt) in alternatives.iter().enumerate() {
        if !ints.iter().all(|n| alt(&FractionField::embed_integer(n)) == h(n)) {
            not_extensions.push(i);
            continue;
        }
        if let Some(q) = qs.iter().find(|q| alt(q) != ext(q)) {
            uniqueness_violations.push((i, q.to_string()));
        }
    }
    Ok(FracReport {
        hom_failures,
        agrees_on_integers,
        uniqueness_violations,
        not_extensions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        assert_eq!(rational(2, 4), rational(1, 2));
        assert_eq!(rational(2, -4).to_string(), "-1/2");
    }

    #[test]
    fn fraction_fields() {
        assert_eq!(fraction_field(&Domain::Integers).unwrap(), FractionField::Rationals);
        let f3 = FinRing::zmod(3);
        assert_eq!(fraction_field(&Domain::Finite(f3.clone())).unwrap(), FractionField::Finite(f3));
        match fraction_field(&Domain::Finite(FinRing::zmod(6))) {
            Err(TowerError::NotADomain { witness, .. }) => assert_eq!(witness, ("2".to_string(), "3".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extension_to_rationals() {
        let id = |q: &Rational| q.clone();
        let bent = |q: &Rational| if *q == rational(1, 2) { rational(1, 3) } else { q.clone() };
        let r = check_frac_extension(&FieldTarget::Rationals, &[&id, &bent]).unwrap();
        assert!(r.hom_failures.is_empty() && r.agrees_on_integers);
        assert_eq!(r.uniqueness_violations, vec![(1, "1/2".to_string())]);
        assert!(matches!(
            check_frac_extension(&FieldTarget::Finite(FinRing::zmod(5)), &[]),
            Err(TowerError::Precondition(_))
        ));
    }
}
