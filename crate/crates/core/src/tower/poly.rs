use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::FinRing;
use super::TowerError;

/// Generator exponents; zero exponents are never stored.
pub type Monomial = BTreeMap<String, u32>;

/// An integer polynomial in canonical form: monomials sorted, no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeRingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl FreeRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut e = Self::default();
        e.add_term(Monomial::new(), c.into());
        e
    }

    pub fn generator(name: &str) -> Self {
        let mut e = Self::default();
        e.add_term(Monomial::from([(name.to_string(), 1)]), BigInt::one());
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn generators(&self) -> BTreeSet<&str> {
        self.terms.keys().flat_map(|m| m.keys().map(String::as_str)).collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

impl Add for &FreeRingElement {
    type Output = FreeRingElement;

    fn add(self, rhs: Self) -> FreeRingElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &FreeRingElement {
    type Output = FreeRingElement;

    fn neg(self) -> FreeRingElement {
        FreeRingElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &FreeRingElement {
    type Output = FreeRingElement;

    fn sub(self, rhs: Self) -> FreeRingElement {
        self + &(-rhs)
    }
}

impl Mul for &FreeRingElement {
    type Output = FreeRingElement;

    fn mul(self, rhs: Self) -> FreeRingElement {
        let mut out = FreeRingElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                for (g, e) in m2 {
                    *m.entry(g.clone()).or_default() += e;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for FreeRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let deg = |m: &Monomial| m.values().sum::<u32>();
            deg(b).cmp(&deg(a)).then(a.cmp(b))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mono: Vec<String> = m
                .iter()
                .map(|(g, &e)| if e == 1 { g.clone() } else { format!("{g}^{e}") })
                .collect();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Evaluation `ℤ[S] → R` fixed by images of the generators.
#[derive(Debug, Clone)]
pub struct FreeRingHom<'r> {
    pub images: BTreeMap<String, usize>,
    pub target: &'r FinRing,
}

impl FreeRingHom<'_> {
    pub fn eval(&self, e: &FreeRingElement) -> Result<usize, TowerError> {
        let r = self.target;
        let mut acc = r.zero;
        for (m, c) in e.terms() {
            let mut v = r.from_int(c);
            for (g, &k) in m {
                let x = *self
                    .images
                    .get(g)
                    .ok_or_else(|| TowerError::Malformed(format!("generator {g:?} has no image")))?;
                for _ in 0..k {
                    v = r.mul(v, x);
                }
            }
            acc = r.add(acc, v);
        }
        Ok(acc)
    }
}

pub fn free_ring_hom<'r>(images: BTreeMap<String, usize>, target: &'r FinRing) -> Result<FreeRingHom<'r>, TowerError> {
    if let Some((g, _)) = images.iter().find(|(_, &v)| v >= target.len()) {
        return Err(TowerError::Malformed(format!("image of {g:?} is not an element of {}", target.name)));
    }
    Ok(FreeRingHom { images, target })
}
