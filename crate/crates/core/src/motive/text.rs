//! Text grammar for motive expressions and the canonical printer.
//!
//! Atoms are integers, `s`, `L`, `chi(k/n)` and `GLinv(n)`; operators are
//! `+ - * ^` with parentheses. `*` is the exotic product, which agrees with
//! the naive one whenever a factor is trivial-sector, as in every printed form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{gl_inv, Character, Motive, MotiveError, SectorPoly};
use crate::laurent::{cyclotomic_in_l, Laurent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of input")]
    Eof,
    #[error("invalid number at offset {pos}")]
    BadNumber { pos: usize },
    #[error("at offset {pos}: {source}")]
    Motive { pos: usize, source: MotiveError },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses a motive expression.
pub fn parse_motive(input: &str) -> Result<Motive, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let m = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(m)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&c) => ParseError::Unexpected { pos: self.pos, found: c as char },
            None => ParseError::Eof,
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<BigInt>().ok())
            .ok_or(ParseError::BadNumber { pos: start })
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos;
        i64::try_from(self.int()?).map_err(|_| ParseError::BadNumber { pos })
    }

    fn expr(&mut self) -> Result<Motive, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Motive, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul_exotic(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Motive, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Motive, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.pos;
        let k = if self.peek() == Some(b'(') {
            self.pos += 1;
            let k = self.small_int()?;
            self.expect(b')')?;
            k
        } else {
            self.small_int()?
        };
        base.powi(k).map_err(|source| ParseError::Motive { pos, source })
    }

    fn atom(&mut self) -> Result<Motive, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let m = self.expr()?;
                self.expect(b')')?;
                Ok(m)
            }
            Some(c) if c.is_ascii_digit() => Ok(Motive::from_laurent(Laurent::constant(self.int()?))),
            Some(b's') => {
                self.pos += 1;
                Ok(Motive::s())
            }
            Some(b'L') => {
                self.pos += 1;
                Ok(Motive::lef())
            }
            Some(b'c') if self.keyword("chi(") => {
                let k = self.small_int()?;
                self.expect(b'/')?;
                let pos = self.pos;
                let n = self.small_int()?;
                if n == 0 {
                    return Err(ParseError::BadNumber { pos });
                }
                self.expect(b')')?;
                Ok(Motive::chi(Character::new(k, n)))
            }
            Some(b'G') if self.keyword("GLinv(") => {
                let pos = self.pos;
                let n = self.small_int()?;
                if !(1..=64).contains(&n) {
                    return Err(ParseError::BadNumber { pos });
                }
                self.expect(b')')?;
                Ok(gl_inv(n as u32))
            }
            _ => Err(self.unexpected()),
        }
    }
}

fn monomial_str(k: i64) -> String {
    match k {
        0 => "1".into(),
        1 => "s".into(),
        2 => "L".into(),
        _ if k % 2 == 0 => format!("L^{}", k / 2),
        _ => {
            let j = (k - 1).div_euclid(2);
            if j == 1 {
                "s*L".into()
            } else {
                format!("s*L^{j}")
            }
        }
    }
}

/// Signed terms `(negative, body)` of a Laurent polynomial times an optional suffix.
fn laurent_terms(p: &Laurent, suffix: Option<&str>) -> Vec<(bool, String)> {
    p.terms()
        .map(|(k, c)| {
            let neg = c.is_negative();
            let a = c.abs();
            let mono = monomial_str(k);
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || (k == 0 && suffix.is_none()) {
                parts.push(a.to_string());
            }
            if k != 0 {
                parts.push(mono);
            }
            if let Some(sfx) = suffix {
                parts.push(sfx.to_string());
            }
            (neg, parts.join("*"))
        })
        .collect()
}

fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}

fn print_sectors(sp: &SectorPoly) -> String {
    let mut terms = laurent_terms(&sp.get(Character::TRIVIAL), None);
    // group nontrivial sectors sharing a polynomial, ordered by first character
    let mut groups: Vec<(Laurent, Vec<Character>)> = Vec::new();
    for (c, p) in sp.iter() {
        if c.is_trivial() {
            continue;
        }
        match groups.iter_mut().find(|(q, _)| q == p) {
            Some((_, cs)) => cs.push(*c),
            None => groups.push((p.clone(), vec![*c])),
        }
    }
    for (p, cs) in groups {
        let chis: Vec<String> = cs.iter().map(|c| format!("chi({c})")).collect();
        let chis = if chis.len() == 1 { chis[0].clone() } else { format!("({})", chis.join("+")) };
        if p.is_monomial() {
            terms.extend(laurent_terms(&p, Some(&chis)));
        } else {
            terms.push((false, format!("({})*{}", join_terms(&laurent_terms(&p, None)), chis)));
        }
    }
    join_terms(&terms)
}

/// Greedy cover of the denominator by `[GL_n]` factors, largest `n` first.
fn gl_cover(den: &BTreeMap<u32, u32>) -> BTreeMap<u32, u32> {
    let mut cover: BTreeMap<u32, u32> = BTreeMap::new();
    let covered = |cover: &BTreeMap<u32, u32>, d: u32| -> u32 { cover.iter().map(|(n, e)| (n / d) * e).sum() };
    for (&d, &e) in den.iter().rev() {
        while covered(&cover, d) < e {
            *cover.entry(d).or_insert(0) += 1;
        }
    }
    cover
}

/// Canonical text of a motive; re-parses to an equal value.
pub fn print_motive(m: &Motive) -> String {
    if m.is_polynomial() {
        return print_sectors(m.numerator());
    }
    let cover = gl_cover(m.denominator());
    // num / den = num · (∏[GL_n] / den) · ∏[GL_n]^{-1}
    let mut factor = Laurent::one();
    for (&n, &e) in &cover {
        let g = super::gl_class(n).numerator().get(Character::TRIVIAL);
        for _ in 0..e {
            factor = &factor * &g;
        }
    }
    for (&d, &e) in m.denominator() {
        for _ in 0..e {
            factor = factor
                .div_exact_poly(&cyclotomic_in_l(d))
                .expect("cover contains every denominator factor");
        }
    }
    let num = m.numerator().scale(&factor);
    let mut out = format!("({})", print_sectors(&num));
    for (&n, &e) in cover.iter().rev() {
        out.push_str(&format!("*GLinv({n})"));
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
    out
}
