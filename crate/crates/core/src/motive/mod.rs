//! The coefficient ring: μ̂-equivariant motives realized as character-sector
//! Laurent data in `s = L^{1/2}`, localized at `s` and at the classes `[GL_n]`.
//!
//! A [`Motive`] is a numerator [`SectorPoly`] over a denominator
//! `∏ Φ_d(L)^{e_d}`. Powers of `s` in the denominator are absorbed into the
//! Laurent numerator, and a cyclotomic factor is cancelled whenever it divides
//! every sector, so equal classes have equal representations.

mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{cyclotomic_at_one, cyclotomic_in_l, cyclotomic_laurent, totient, Laurent};

pub use text::{parse_motive, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MotiveError {
    #[error("denominator vanishes at s = 1")]
    PoleAtOne,
    #[error("class has a nontrivial denominator")]
    NonPolynomial,
    #[error("class is not a unit of the localized ring")]
    NotInvertible,
    #[error("grassmannian index out of range: Gr({n}, {i})")]
    BadIndex { n: i64, i: i64 },
}

/// A character of μ̂, stored as the reduced fraction `k/n ∈ [0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Character {
    k: u64,
    n: u64,
}

impl Character {
    pub const TRIVIAL: Character = Character { k: 0, n: 1 };

    /// The character `k/n` reduced modulo 1. Panics if `n = 0`.
    pub fn new(k: i64, n: i64) -> Character {
        assert!(n != 0, "character with zero denominator");
        let (k, n) = if n < 0 { (-(k as i128), -(n as i128)) } else { (k as i128, n as i128) };
        let k = k.rem_euclid(n);
        let g = num_integer::gcd(k, n);
        Character { k: (k / g) as u64, n: (n / g) as u64 }
    }

    pub fn numer(&self) -> u64 {
        self.k
    }

    pub fn denom(&self) -> u64 {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    /// Sum modulo 1, together with the integer part of the unreduced sum.
    fn add_carry(self, other: Character) -> (Character, bool) {
        let n = self.n as i128 * other.n as i128;
        let k = self.k as i128 * other.n as i128 + other.k as i128 * self.n as i128;
        (Character::new(k as i64, n as i64), k >= n)
    }
}

impl Ord for Character {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k as u128 * other.n as u128).cmp(&(other.k as u128 * self.n as u128))
    }
}

impl PartialOrd for Character {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

/// Finite map from characters to nonzero Laurent polynomials in `s`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct SectorPoly {
    sectors: BTreeMap<Character, Laurent>,
}

impl SectorPoly {
    pub fn zero() -> Self {
        SectorPoly::default()
    }

    /// A single sector.
    pub fn sector(c: Character, p: Laurent) -> Self {
        let mut sp = SectorPoly::zero();
        sp.add_to(c, &p);
        sp
    }

    pub fn trivial(p: Laurent) -> Self {
        SectorPoly::sector(Character::TRIVIAL, p)
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn get(&self, c: Character) -> Laurent {
        self.sectors.get(&c).cloned().unwrap_or_default()
    }

    /// Iterates over sectors in increasing character order.
    pub fn iter(&self) -> impl Iterator<Item = (&Character, &Laurent)> {
        self.sectors.iter()
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    /// True when every nonzero sector is the trivial one.
    pub fn is_trivial_only(&self) -> bool {
        self.sectors.keys().all(|c| c.is_trivial())
    }

    pub fn add_to(&mut self, c: Character, p: &Laurent) {
        if p.is_zero() {
            return;
        }
        let e = self.sectors.entry(c).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.sectors.remove(&c);
        }
    }

    fn map(&self, f: impl Fn(&Laurent) -> Laurent) -> SectorPoly {
        let mut out = SectorPoly::zero();
        for (c, p) in &self.sectors {
            out.add_to(*c, &f(p));
        }
        out
    }

    pub fn add(&self, other: &SectorPoly) -> SectorPoly {
        let mut out = self.clone();
        for (c, p) in &other.sectors {
            out.add_to(*c, p);
        }
        out
    }

    pub fn neg(&self) -> SectorPoly {
        self.map(|p| -p)
    }

    /// Multiplies every sector by the same Laurent polynomial.
    pub fn scale(&self, l: &Laurent) -> SectorPoly {
        self.map(|p| p * l)
    }

    /// Sectorwise convolution: characters add modulo 1.
    pub fn mul_naive(&self, other: &SectorPoly) -> SectorPoly {
        let mut out = SectorPoly::zero();
        for (c1, p1) in &self.sectors {
            for (c2, p2) in &other.sectors {
                let (c, _) = c1.add_carry(*c2);
                out.add_to(c, &(p1 * p2));
            }
        }
        out
    }

    /// The exotic sector rule: a trivial factor multiplies plainly; two
    /// nontrivial characters pick up `s²` when they sum to an integer and `s`
    /// otherwise.
    pub fn mul_exotic(&self, other: &SectorPoly) -> SectorPoly {
        let mut out = SectorPoly::zero();
        for (c1, p1) in &self.sectors {
            for (c2, p2) in &other.sectors {
                let prod = p1 * p2;
                if c1.is_trivial() || c2.is_trivial() {
                    let (c, _) = c1.add_carry(*c2);
                    out.add_to(c, &prod);
                } else {
                    let (c, _) = c1.add_carry(*c2);
                    let twist = if c.is_trivial() { 2 } else { 1 };
                    out.add_to(c, &prod.shift(twist));
                }
            }
        }
        out
    }

    /// Sum of all sectors, as a trivial-sector Laurent polynomial.
    pub fn sum_sectors(&self) -> Laurent {
        self.sectors.values().fold(Laurent::zero(), |a, p| &a + p)
    }

    fn div_exact(&self, divisor: &[BigInt]) -> Option<SectorPoly> {
        let mut out = SectorPoly::zero();
        for (c, p) in &self.sectors {
            out.add_to(*c, &p.div_exact_poly(divisor)?);
        }
        Some(out)
    }
}

/// An element of the localized equivariant motive ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Motive {
    num: SectorPoly,
    /// Exponent of `Φ_d(L)` in the denominator, keyed by `d`.
    den: BTreeMap<u32, u32>,
}

impl Default for Motive {
    fn default() -> Self {
        Motive::zero()
    }
}

impl Motive {
    pub fn zero() -> Motive {
        Motive { num: SectorPoly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Motive {
        Motive::from_laurent(Laurent::one())
    }

    pub fn int(n: i64) -> Motive {
        Motive::from_laurent(Laurent::constant(n))
    }

    /// `s = L^{1/2}`.
    pub fn s() -> Motive {
        Motive::from_laurent(Laurent::monomial(1, 1))
    }

    /// The Lefschetz class `L = s²`.
    pub fn lef() -> Motive {
        Motive::from_laurent(Laurent::monomial(1, 2))
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> Motive {
        Motive::from_laurent(Laurent::monomial(1, k))
    }

    /// `L^k`.
    pub fn lef_pow(k: i64) -> Motive {
        Motive::s_pow(2 * k)
    }

    /// The unit class of the sector `c`.
    pub fn chi(c: Character) -> Motive {
        Motive::from_sectors(SectorPoly::sector(c, Laurent::one()))
    }

    /// A trivial-sector class.
    pub fn from_laurent(p: Laurent) -> Motive {
        Motive::from_sectors(SectorPoly::trivial(p))
    }

    /// A class with trivial denominator.
    pub fn from_sectors(num: SectorPoly) -> Motive {
        Motive { num, den: BTreeMap::new() }
    }

    /// `num / ∏ Φ_d(L)^{e_d}`, normalized.
    pub fn from_parts(num: SectorPoly, den: BTreeMap<u32, u32>) -> Motive {
        let mut m = Motive { num, den };
        m.normalize();
        m
    }

    pub fn numerator(&self) -> &SectorPoly {
        &self.num
    }

    /// Cyclotomic exponents of the denominator.
    pub fn denominator(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// True when the numerator lives in the trivial sector.
    pub fn is_trivial_sector(&self) -> bool {
        self.num.is_trivial_only()
    }

    /// Cancels every cyclotomic factor dividing all sectors. Idempotent.
    pub fn normalize(&mut self) {
        self.den.retain(|_, e| *e > 0);
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let ds: Vec<u32> = self.den.keys().copied().collect();
        for d in ds {
            let div = cyclotomic_in_l(d);
            while self.den.get(&d).copied().unwrap_or(0) > 0 {
                match self.num.div_exact(&div) {
                    Some(q) => {
                        self.num = q;
                        let e = self.den.get_mut(&d).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&d);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// Returns the normalized form; a no-op on values built through the API.
    pub fn normalized(&self) -> Motive {
        let mut m = self.clone();
        m.normalize();
        m
    }

    fn lift_to(&self, den: &BTreeMap<u32, u32>) -> SectorPoly {
        let mut factor = Laurent::one();
        for (d, e) in den {
            let have = self.den.get(d).copied().unwrap_or(0);
            for _ in have..*e {
                factor = &factor * &cyclotomic_laurent(*d);
            }
        }
        self.num.scale(&factor)
    }

    fn common_den(&self, other: &Motive) -> BTreeMap<u32, u32> {
        let mut den = self.den.clone();
        for (d, e) in &other.den {
            let x = den.entry(*d).or_insert(0);
            *x = (*x).max(*e);
        }
        den
    }

    pub fn add(&self, other: &Motive) -> Motive {
        let den = self.common_den(other);
        let num = self.lift_to(&den).add(&other.lift_to(&den));
        Motive::from_parts(num, den)
    }

    pub fn neg(&self) -> Motive {
        Motive { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Motive) -> Motive {
        self.add(&other.neg())
    }

    fn mul_with(&self, other: &Motive, f: impl Fn(&SectorPoly, &SectorPoly) -> SectorPoly) -> Motive {
        let mut den = self.den.clone();
        for (d, e) in &other.den {
            *den.entry(*d).or_insert(0) += e;
        }
        Motive::from_parts(f(&self.num, &other.num), den)
    }

    /// Sectorwise convolution product.
    pub fn mul_naive(&self, other: &Motive) -> Motive {
        self.mul_with(other, SectorPoly::mul_naive)
    }

    /// The exotic product realizing Thom–Sebastiani.
    pub fn mul_exotic(&self, other: &Motive) -> Motive {
        self.mul_with(other, SectorPoly::mul_exotic)
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, c: i64) -> Motive {
        let c = BigInt::from(c);
        Motive::from_parts(self.num.map(|p| p.scale(&c)), self.den.clone())
    }

    /// Exotic power with nonnegative exponent.
    pub fn pow(&self, k: u32) -> Motive {
        let mut out = Motive::one();
        for _ in 0..k {
            out = out.mul_exotic(self);
        }
        out
    }

    /// Inverse of a unit `±s^k ∏ Φ_d(L)^{e_d} / ∏ Φ_d(L)^{f_d}` in the trivial sector.
    pub fn inv(&self) -> Result<Motive, MotiveError> {
        if self.is_zero() || !self.is_trivial_sector() {
            return Err(MotiveError::NotInvertible);
        }
        let p = self.num.get(Character::TRIVIAL);
        let k = p.min_exp().unwrap();
        let mut rest = p.shift(-k);
        if !rest.is_even() {
            return Err(MotiveError::NotInvertible);
        }
        let mut factors: BTreeMap<u32, u32> = BTreeMap::new();
        let mut d = 1u32;
        loop {
            let deg = rest.max_exp().unwrap() / 2;
            if deg == 0 {
                break;
            }
            // φ(d) ≥ sqrt(d/2), so no cyclotomic factor of larger index fits
            if (d as i64) > 2 * deg * deg + 2 {
                return Err(MotiveError::NotInvertible);
            }
            if (totient(d) as i64) <= deg {
                if let Some(q) = rest.div_exact_poly(&cyclotomic_in_l(d)) {
                    rest = q;
                    *factors.entry(d).or_insert(0) += 1;
                    continue;
                }
            }
            d += 1;
        }
        let unit = rest.coeff(0);
        if !unit.abs().is_one() {
            return Err(MotiveError::NotInvertible);
        }
        // 1/(unit s^k ∏Φ^e / ∏Φ^f) = unit s^{-k} ∏Φ^f / ∏Φ^e
        let mut num = Laurent::monomial(unit, -k);
        for (d, f) in &self.den {
            for _ in 0..*f {
                num = &num * &cyclotomic_laurent(*d);
            }
        }
        Ok(Motive::from_parts(SectorPoly::trivial(num), factors))
    }

    /// Exotic power with integer exponent; negative powers need a unit.
    pub fn powi(&self, k: i64) -> Result<Motive, MotiveError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inv()?.pow((-k) as u32))
        }
    }

    /// Substitutes `s = 1` and sums all sectors.
    pub fn euler_specialize(&self) -> Result<BigRational, MotiveError> {
        let total = Motive::from_parts(SectorPoly::trivial(self.num.sum_sectors()), self.den.clone());
        if total.den.contains_key(&1) {
            return Err(MotiveError::PoleAtOne);
        }
        let num = total.num.get(Character::TRIVIAL).eval_one();
        let mut den = BigInt::one();
        for (d, e) in &total.den {
            den *= num_traits::pow(BigInt::from(cyclotomic_at_one(*d)), *e as usize);
        }
        Ok(BigRational::new(num, den))
    }

    /// The equivariant Serre polynomial of a polynomial class.
    pub fn chi_eq(&self) -> Result<SectorPoly, MotiveError> {
        if !self.is_polynomial() {
            return Err(MotiveError::NonPolynomial);
        }
        Ok(self.num.clone())
    }
}

impl fmt::Debug for Motive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::print_motive(self))
    }
}

impl fmt::Display for Motive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::print_motive(self))
    }
}

/// `[GL_n] = ∏_{i<n} (Lⁿ − Lⁱ)`, with `[GL_0] = 1`.
pub fn gl_class(n: u32) -> Motive {
    let mut p = Laurent::one();
    for i in 0..n {
        p = &p * &(&Laurent::monomial(1, 2 * n as i64) - &Laurent::monomial(1, 2 * i as i64));
    }
    Motive::from_laurent(p)
}

/// `[GL_n]⁻¹`.
pub fn gl_inv(n: u32) -> Motive {
    let mut den = BTreeMap::new();
    for d in 1..=n {
        den.insert(d, n / d);
    }
    Motive::from_parts(SectorPoly::trivial(Laurent::monomial(1, -((n * n.saturating_sub(1)) as i64))), den)
}

/// The Gaussian binomial `[Gr(n, i)]` in `L`.
pub fn grassmannian_class(n: i64, i: i64) -> Result<Motive, MotiveError> {
    if n < 0 || i < 0 || i > n {
        return Err(MotiveError::BadIndex { n, i });
    }
    // Pascal recursion [n,i] = [n-1,i-1] + L^i [n-1,i]
    let mut row: Vec<Laurent> = vec![Laurent::one()];
    for m in 1..=n as usize {
        let mut next = vec![Laurent::zero(); m + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut v = Laurent::zero();
            if j >= 1 {
                v = &v + &row[j - 1];
            }
            if j < m {
                v = &v + &row[j].shift(2 * j as i64);
            }
            *slot = v;
        }
        row = next;
    }
    Ok(Motive::from_laurent(row[i as usize].clone()))
}

/// `[μ_n] = Σ_k chi(k/n)`.
pub fn mu_n_class(n: u32) -> Motive {
    assert!(n >= 1);
    let mut sp = SectorPoly::zero();
    for k in 0..n {
        sp.add_to(Character::new(k as i64, n as i64), &Laurent::one());
    }
    Motive::from_sectors(sp)
}

/// Sum of the unit classes of the given sectors.
pub fn chi_sum(chars: &[(i64, i64)]) -> Motive {
    let mut sp = SectorPoly::zero();
    for &(k, n) in chars {
        sp.add_to(Character::new(k, n), &Laurent::one());
    }
    Motive::from_sectors(sp)
}

impl std::ops::Add for &Motive {
    type Output = Motive;
    fn add(self, rhs: &Motive) -> Motive {
        Motive::add(self, rhs)
    }
}

impl std::ops::Sub for &Motive {
    type Output = Motive;
    fn sub(self, rhs: &Motive) -> Motive {
        Motive::sub(self, rhs)
    }
}

impl std::ops::Neg for &Motive {
    type Output = Motive;
    fn neg(self) -> Motive {
        Motive::neg(self)
    }
}

/// `*` on motives is the exotic product.
impl std::ops::Mul for &Motive {
    type Output = Motive;
    fn mul(self, rhs: &Motive) -> Motive {
        self.mul_exotic(rhs)
    }
}

impl std::ops::Add for Motive {
    type Output = Motive;
    fn add(self, rhs: Motive) -> Motive {
        Motive::add(&self, &rhs)
    }
}

impl std::ops::Sub for Motive {
    type Output = Motive;
    fn sub(self, rhs: Motive) -> Motive {
        Motive::sub(&self, &rhs)
    }
}

impl std::ops::Mul for Motive {
    type Output = Motive;
    fn mul(self, rhs: Motive) -> Motive {
        self.mul_exotic(&rhs)
    }
}

impl std::ops::Neg for Motive {
    type Output = Motive;
    fn neg(self) -> Motive {
        Motive::neg(&self)
    }
}

impl Zero for Motive {
    fn zero() -> Self {
        Motive::zero()
    }
    fn is_zero(&self) -> bool {
        Motive::is_zero(self)
    }
}

impl One for Motive {
    fn one() -> Self {
        Motive::one()
    }
}
