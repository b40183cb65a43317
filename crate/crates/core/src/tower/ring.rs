use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::TowerError;

/// A finite commutative ring given by operation tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinRing {
    pub name: String,
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl FinRing {
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self, TowerError> {
        let r = FinRing {
            name: name.into(),
            elements,
            add,
            mul,
            zero,
            one,
        };
        r.check_shape()?;
        Ok(r)
    }

    /// `ℤ/n` with elements named `0..n-1`.
    pub fn zmod(n: usize) -> Self {
        assert!(n > 0);
        let table = |f: fn(usize, usize) -> usize| (0..n).map(|a| (0..n).map(|b| f(a, b) % n).collect()).collect();
        FinRing {
            name: format!("Z/{n}"),
            elements: (0..n).map(|i| i.to_string()).collect(),
            add: table(|a, b| a + b),
            mul: table(|a, b| a * b),
            zero: 0,
            one: 1 % n,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.len()).find(|&b| self.add(a, b) == self.zero).expect("additive inverses exist")
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    fn check_shape(&self) -> Result<(), TowerError> {
        let n = self.len();
        let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|row| row.len() == n && row.iter().all(|&v| v < n));
        if n == 0 || !square(&self.add) || !square(&self.mul) || self.zero >= n || self.one >= n {
            return Err(TowerError::Malformed(format!("{}: tables are not total on the carrier", self.name)));
        }
        Ok(())
    }

    /// Every commutative-ring axiom that fails, checked extensionally.
    pub fn axiom_failures(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        let mut law = |name: &str, ok: bool| {
            if !ok && !out.iter().any(|o: &String| o == name) {
                out.push(name.to_string());
            }
        };
        for a in 0..n {
            law("additive identity", self.add(a, self.zero) == a);
            law("multiplicative identity", self.mul(a, self.one) == a);
            law("additive inverse", (0..n).any(|b| self.add(a, b) == self.zero));
            for b in 0..n {
                law("additive commutativity", self.add(a, b) == self.add(b, a));
                law("multiplicative commutativity", self.mul(a, b) == self.mul(b, a));
                for c in 0..n {
                    law("additive associativity", self.add(self.add(a, b), c) == self.add(a, self.add(b, c)));
                    law("multiplicative associativity", self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)));
                    law("distributivity", self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c)));
                }
            }
        }
        out
    }

    /// First pair `(a, b)` of nonzero elements with `a·b = 0`, `a ≤ b`.
    pub fn zero_divisors(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .filter(|&a| a != self.zero)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .find(|&(a, b)| b != self.zero && self.mul(a, b) == self.zero)
    }

    pub fn is_domain(&self) -> bool {
        self.zero != self.one && self.zero_divisors().is_none()
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.len()).find(|&b| self.mul(a, b) == self.one)
    }

    /// Additive order of `1`.
    pub fn characteristic(&self) -> usize {
        let mut x = self.one;
        let mut k = 1;
        while x != self.zero && k <= self.len() {
            x = self.add(x, self.one);
            k += 1;
        }
        k
    }

    /// `n·1`.
    pub fn from_int(&self, n: &BigInt) -> usize {
        let c = BigInt::from(self.characteristic());
        let k = n.mod_floor(&c).to_usize().expect("reduced below the characteristic");
        let mut x = self.zero;
        for _ in 0..k {
            x = self.add(x, self.one);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_is_a_ring() {
        for n in 1..=8 {
            assert!(FinRing::zmod(n).axiom_failures().is_empty(), "Z/{n}");
        }
    }

    #[test]
    fn domains() {
        assert!(FinRing::zmod(3).is_domain());
        assert_eq!(FinRing::zmod(6).zero_divisors(), Some((2, 3)));
        assert!(!FinRing::zmod(4).is_domain());
    }

    #[test]
    fn integers_map_by_reduction() {
        let r = FinRing::zmod(5);
        assert_eq!(r.from_int(&BigInt::from(7)), 2);
        assert_eq!(r.from_int(&BigInt::from(-1)), 4);
        assert_eq!(r.from_int(&BigInt::from(5)), 0);
    }

    #[test]
    fn broken_table_is_reported() {
        let mut r = FinRing::zmod(3);
        r.mul[1][2] = 1;
        assert!(r.axiom_failures().contains(&"multiplicative commutativity".to_string()));
    }
}
