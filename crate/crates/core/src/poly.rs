//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial in `nvars` variables; terms with zero coefficient are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Substitutes `values[i]` for variable `i`; the result lives in the ring of the values.
    pub fn substitute(&self, values: &[Poly]) -> Poly {
        assert_eq!(values.len(), self.nvars, "one value per variable");
        let target = values.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&v.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "one value per variable");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Multiplies by the positive lcm of coefficient denominators.
    pub fn clear_denominators(&self) -> Poly {
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.scale(&BigRational::from_integer(lcm))
    }

    /// Renders the polynomial with monomials in descending lexicographic order.
    ///
    /// Coefficients of ±1 are omitted; the zero polynomial renders as `0`.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let monomial: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if monomial.is_empty() {
                write!(out, "{abs}").unwrap();
            } else if abs.is_one() {
                out.push_str(&monomial.join("*"));
            } else {
                write!(out, "{abs}*{}", monomial.join("*")).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn difference_of_squares() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.pow(2).sub(&y.pow(2));
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
        assert!(lhs.is_homogeneous());
        assert_eq!(lhs.degree(), Some(2));
    }

    #[test]
    fn substitution_and_eval() {
        // (x + 2y) at x = t², y = t  →  t² + 2t
        let p = Poly::var(2, 0).add(&Poly::var(2, 1).scale(&q(2)));
        let t = Poly::var(1, 0);
        let s = p.substitute(&[t.pow(2), t.clone()]);
        assert_eq!(s, t.pow(2).add(&t.scale(&q(2))));
        assert_eq!(s.eval(&[q(3)]), q(15));
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["x2", "x3", "x4"].iter().map(|s| s.to_string()).collect();
        let (x2, x3, x4) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
        let p = x2
            .mul(&x4)
            .scale(&q(2))
            .sub(&x2.mul(&x3))
            .sub(&x3.mul(&x4));
        assert_eq!(p.render(&names), "-x2*x3 + 2*x2*x4 - x3*x4");
        assert_eq!(Poly::zero(3).render(&names), "0");
        assert_eq!(x3.pow(2).scale(&q(-3)).render(&names), "-3*x3^2");
        let half = BigRational::new(1.into(), 2.into());
        let p = x2.scale(&half).add(&x3.scale(&BigRational::new(1.into(), 3.into())));
        assert_eq!(p.clear_denominators().render(&names), "3*x2 + 2*x3");
    }
}
