//! Laurent polynomials in `s` with big-integer coefficients, plus the
//! cyclotomic polynomials `Φ_d(s²)` used as denominators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial `Σ c_k s^k`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(1, 0)
    }

    /// `c · s^k`.
    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(k, c.into());
        l
    }

    /// The constant polynomial `c`.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Laurent::monomial(c, 0)
    }

    /// Builds `Σ coeffs[i] · L^i = Σ coeffs[i] · s^{2i}`.
    pub fn from_l_coeffs(coeffs: &[i64]) -> Self {
        let mut l = Laurent::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            l.add_term(2 * i as i64, BigInt::from(c));
        }
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Iterates over `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Value at `s = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluates at an integer `s`; negative exponents must be absent.
    pub fn eval_poly(&self, s: &BigInt) -> Option<BigInt> {
        if self.min_exp().is_some_and(|m| m < 0) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|(e, c)| c * num_traits::pow(s.clone(), *e as usize))
                .sum(),
        )
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when only even powers of `s` occur, i.e. a Laurent polynomial in `L`.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    /// Exact division by a polynomial with unit leading coefficient, given as
    /// dense coefficients in `s` (constant first). Returns `None` if the
    /// division leaves a remainder.
    pub fn div_exact_poly(&self, divisor: &[BigInt]) -> Option<Laurent> {
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let dd = divisor.len() - 1;
        let lead = &divisor[dd];
        debug_assert!(lead.abs().is_one());
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut rem: Vec<BigInt> = (lo..=hi).map(|k| self.coeff(k)).collect();
        if rem.len() <= dd {
            return None;
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] * lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Laurent::zero();
        for (i, c) in quot.into_iter().enumerate() {
            out.add_term(lo + i as i64, c);
        }
        Some(out)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}s^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        &self + &rhs
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        &self - &rhs
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

/// Dense integer coefficients of the cyclotomic polynomial `Φ_d(x)`.
pub fn cyclotomic(d: u32) -> Vec<BigInt> {
    assert!(d >= 1);
    // x^d - 1 divided by Φ_e for every proper divisor e
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = BigInt::from(-1);
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = dense_div(&num, &cyclotomic(e));
        }
    }
    num
}

fn dense_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = &rem[i + dd] * &den[dd];
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// `Φ_d(L) = Φ_d(s²)` as dense coefficients in `s`.
pub fn cyclotomic_in_l(d: u32) -> Vec<BigInt> {
    let c = cyclotomic(d);
    let mut out = vec![BigInt::zero(); 2 * (c.len() - 1) + 1];
    for (i, x) in c.into_iter().enumerate() {
        out[2 * i] = x;
    }
    out
}

/// `Φ_d(L)` as a [`Laurent`].
pub fn cyclotomic_laurent(d: u32) -> Laurent {
    let mut l = Laurent::zero();
    for (i, c) in cyclotomic_in_l(d).into_iter().enumerate() {
        l.add_term(i as i64, c);
    }
    l
}

/// `Φ_d(1)`: `p` when `d` is a power of the prime `p`, `0` for `d = 1`, else `1`.
pub fn cyclotomic_at_one(d: u32) -> u64 {
    if d == 1 {
        return 0;
    }
    let mut n = d;
    let mut p = 2;
    while !n.is_multiple_of(p) {
        p += 1;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    if n == 1 {
        p as u64
    } else {
        1
    }
}

/// Euler's totient.
pub fn totient(d: u32) -> u32 {
    (1..=d).filter(|k| num_integer::gcd(*k, d) == 1).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic(2)), vec![1, 1]);
        assert_eq!(to_i(cyclotomic(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic(6)), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12).len() - 1, totient(12) as usize);
    }

    #[test]
    fn exact_division() {
        // (L^2 - 1) / (L - 1) = L + 1
        let p = Laurent::from_l_coeffs(&[-1, 0, 1]).shift(-3);
        let q = p.div_exact_poly(&cyclotomic_in_l(1)).unwrap();
        assert_eq!(q, Laurent::from_l_coeffs(&[1, 1]).shift(-3));
        assert!(Laurent::from_l_coeffs(&[1, 1]).div_exact_poly(&cyclotomic_in_l(1)).is_none());
    }

    #[test]
    fn values_at_one() {
        assert_eq!(cyclotomic_at_one(8), 2);
        assert_eq!(cyclotomic_at_one(9), 3);
        assert_eq!(cyclotomic_at_one(6), 1);
        for d in 2..30 {
            let v: BigInt = cyclotomic(d).iter().sum();
            assert_eq!(v, BigInt::from(cyclotomic_at_one(d)));
        }
    }
}
