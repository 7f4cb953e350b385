//! Sparse multivariate polynomials with rational coefficients.
//!
//! Variables are indexed by `usize`. Monomials are ordered by total degree,
//! then lexicographically with lower variable indices first, which is the
//! canonical order used for printing.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::coeff::{self, q, Q};

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn var(i: usize) -> Mono {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Mono(v)
    }

    pub fn from_exps(mut v: Vec<u32>) -> Mono {
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        Mono::from_exps((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// Lowest-index variable present.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Removes one power of variable `i`, if present.
    pub fn div_var(&self, i: usize) -> Option<Mono> {
        if self.exp(i) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Mono::from_exps(v))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match other.exp(i).cmp(&self.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial `Σ c_m x^m`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn constant(c: Q) -> Poly {
        let mut p = Poly::default();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn var(i: usize) -> Poly {
        let mut p = Poly::default();
        p.add_term(Mono::var(i), q(1));
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Q)>) -> Poly {
        let mut p = Poly::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Smallest total degree of a term.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).min()
    }

    /// The homogeneous part of total degree `k`.
    pub fn homogeneous(&self, k: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Drops terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// True when some term involves one of the variables in `vars`.
    pub fn involves(&self, vars: &[usize]) -> bool {
        self.terms.keys().any(|m| vars.iter().any(|&v| m.exp(v) > 0))
    }

    /// Keeps only the terms free of every variable in `vars`.
    pub fn without(&self, vars: &[usize]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.div_var(i).unwrap(), c * q(e as i64));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(q(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication keeping only terms of total degree at most `d`.
    pub fn mul_trunc(&self, other: &Poly, d: u32) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() <= d {
                    out.add_term(m1.mul(m2), c1 * c2);
                }
            }
        }
        out
    }

    /// Substitutes `x_i ← images[i]` (variables without an image stay fixed),
    /// truncating at total degree `d` when given.
    pub fn substitute(&self, images: &BTreeMap<usize, Poly>, d: Option<u32>) -> Poly {
        let cap = d.unwrap_or(u32::MAX);
        let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = images.get(&i).cloned().unwrap_or_else(|| Poly::var(i));
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| {
                        let mut r = Poly::constant(q(1));
                        for _ in 0..e {
                            r = r.mul_trunc(&base, cap);
                        }
                        r
                    })
                    .clone();
                acc = acc.mul_trunc(&pw, cap);
                if acc.is_empty() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Evaluates at a point; missing coordinates are zero.
    pub fn eval(&self, point: &[Q]) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(Q::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Highest variable index used, plus one.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.exps().len()).max().unwrap_or(0)
    }

    /// Renders with the given variable names (fallback `x<i>`).
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            let body = if factors.is_empty() {
                a.to_string()
            } else if a == q(1) {
                factors.join("*")
            } else {
                format!("{}*{}", a, factors.join("*"))
            };
            match (idx, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl coeff::Coeff for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(q(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&q(-1))
    }
    fn from_q(x: &Q) -> Self {
        Poly::constant(x.clone())
    }
    fn scale_q(&self, x: &Q) -> Self {
        self.scale(x)
    }
}

impl Poly {
    pub fn add(&self, other: &Poly) -> Poly {
        coeff::Coeff::add(self, other)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        coeff::Coeff::sub(self, other)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        coeff::Coeff::mul(self, other)
    }

    pub fn neg(&self) -> Poly {
        coeff::Coeff::neg(self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tr_t4_local_form() {
        // a = x0, t = x1, b = x2
        let (a, t, b) = (Poly::var(0), Poly::var(1), Poly::var(2));
        let c = |n: i64| Poly::constant(q(n));
        let lhs = a.pow(4)
            .add(&c(4).mul(&a.pow(3)).mul(&t))
            .add(&c(4).mul(&a.pow(2)).mul(&b))
            .add(&c(2).mul(&a.pow(2)).mul(&t.pow(2)))
            .add(&c(4).mul(&a).mul(&b).mul(&t))
            .add(&c(2).mul(&b.pow(2)));
        let bp = b.add(&a.mul(&t)).add(&a.pow(2));
        let rhs = a.pow(4).neg().add(&c(2).mul(&bp.pow(2)));
        assert_eq!(lhs, rhs);
        let mut sub = BTreeMap::new();
        sub.insert(2, b.sub(&a.mul(&t)).sub(&a.pow(2)));
        assert_eq!(lhs.substitute(&sub, None), a.pow(4).neg().add(&c(2).mul(&b.pow(2))));
    }

    #[test]
    fn ordering_and_render() {
        let p = Poly::var(1).add(&Poly::var(0).pow(2)).add(&Poly::constant(q(-3)));
        assert_eq!(p.render(&["x".into(), "y".into()]), "-3 + y + x^2");
        assert_eq!(p.derivative(0), Poly::var(0).scale(&q(2)));
        assert_eq!(p.eval(&[q(2), q(5)]), q(6));
    }
}
