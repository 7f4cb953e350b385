//! Quivers with potential and their text format.
//!
//! ```text
//! vertex <label>
//! arrow <label>: <src> -> <tgt>
//! potential: <coeff> <w1 w2 ... wk> ; <coeff> <...> ; ...
//! ```
//!
//! Potential words list arrows in traversal order: `w1` is followed first.
//! Composition is written right-to-left, so `w1 w2` traversed is `w2 ∘ w1`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::coeff::Q;

pub const ONE_LOOP_A4: &str = include_str!("../../data/quivers/one_loop_a4.qp");
pub const ONE_LOOP_A2: &str = include_str!("../../data/quivers/one_loop_a2.qp");
pub const ONE_LOOP_W0: &str = include_str!("../../data/quivers/one_loop_w0.qp");
pub const CONIFOLD: &str = include_str!("../../data/quivers/conifold.qp");
pub const CONIFOLD_FRAMED: &str = include_str!("../../data/quivers/conifold_framed.qp");
pub const C3: &str = include_str!("../../data/quivers/c3.qp");
pub const C3_FRAMED: &str = include_str!("../../data/quivers/c3_framed.qp");
pub const P1: &str = include_str!("../../data/quivers/p1.qp");

/// Every shipped quiver file as `(name, text)`.
pub const SHIPPED: [(&str, &str); 8] = [
    ("one_loop_a4", ONE_LOOP_A4),
    ("one_loop_a2", ONE_LOOP_A2),
    ("one_loop_w0", ONE_LOOP_W0),
    ("conifold", CONIFOLD),
    ("conifold_framed", CONIFOLD_FRAMED),
    ("c3", C3),
    ("c3_framed", C3_FRAMED),
    ("p1", P1),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("potential term {0} is not a closed path")]
    NotClosed(String),
    #[error("potential term {0} has length below 2")]
    ShortCycle(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// A term `c · w` of the potential; `word` holds arrow indices in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialTerm {
    pub coeff: Q,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub potential: Vec<PotentialTerm>,
}

impl QuiverWithPotential {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>, potential: Vec<PotentialTerm>) -> Result<Self, QuiverError> {
        let q = QuiverWithPotential { vertices, arrows, potential };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), QuiverError> {
        let mut seen = BTreeSet::new();
        for l in self.vertices.iter().chain(self.arrows.iter().map(|a| &a.label)) {
            if !seen.insert(l) {
                return Err(QuiverError::DuplicateLabel(l.clone()));
            }
        }
        for a in &self.arrows {
            if a.src >= self.vertices.len() || a.tgt >= self.vertices.len() {
                return Err(QuiverError::UnknownVertex(a.label.clone()));
            }
        }
        for t in &self.potential {
            let name = self.word_text(&t.word);
            if t.word.len() < 2 {
                return Err(QuiverError::ShortCycle(name));
            }
            if t.word.iter().any(|&i| i >= self.arrows.len()) {
                return Err(QuiverError::UnknownArrow(name));
            }
            let n = t.word.len();
            let closed = (0..n).all(|i| self.arrows[t.word[i]].tgt == self.arrows[t.word[(i + 1) % n]].src);
            if !closed {
                return Err(QuiverError::NotClosed(name));
            }
        }
        Ok(())
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    fn word_text(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&i| self.arrows.get(i).map_or("?", |a| a.label.as_str()))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut pending: Vec<(usize, Q, Vec<String>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let syntax = |msg: &str| QuiverError::Syntax { line, msg: msg.into() };
            if let Some(rest) = body.strip_prefix("potential:") {
                for term in rest.split(';') {
                    let mut toks = term.split_whitespace();
                    let Some(c) = toks.next() else { continue };
                    let coeff: Q = c.parse().map_err(|_| syntax("bad coefficient"))?;
                    let word: Vec<String> = toks.map(str::to_string).collect();
                    pending.push((line, coeff, word));
                }
            } else if let Some(rest) = body.strip_prefix("vertex ") {
                let l = rest.trim();
                if l.is_empty() || l.contains(char::is_whitespace) {
                    return Err(syntax("expected a single vertex label"));
                }
                vertices.push(l.to_string());
            } else if let Some(rest) = body.strip_prefix("arrow ") {
                let (label, ends) = rest.split_once(':').ok_or_else(|| syntax("expected ':'"))?;
                let (s, t) = ends.split_once("->").ok_or_else(|| syntax("expected '->'"))?;
                let find = |v: &str| -> Result<usize, QuiverError> {
                    vertices.iter().position(|x| x == v.trim()).ok_or_else(|| QuiverError::UnknownVertex(v.trim().into()))
                };
                arrows.push(Arrow { label: label.trim().to_string(), src: find(s)?, tgt: find(t)? });
            } else {
                return Err(syntax("unknown directive"));
            }
        }
        let mut potential = Vec::new();
        for (line, coeff, word) in pending {
            if word.is_empty() {
                return Err(QuiverError::Syntax { line, msg: "empty potential word".into() });
            }
            let word = word
                .iter()
                .map(|w| arrows.iter().position(|a| &a.label == w).ok_or_else(|| QuiverError::UnknownArrow(w.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            potential.push(PotentialTerm { coeff, word });
        }
        Self::new(vertices, arrows, potential)
    }

    /// Arrows from `src` to `tgt`.
    pub fn arrows_between(&self, src: usize, tgt: usize) -> usize {
        self.arrows.iter().filter(|a| a.src == src && a.tgt == tgt).count()
    }
}

/// Parses one of the shipped quiver files by name.
pub fn shipped(name: &str) -> Option<QuiverWithPotential> {
    SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| QuiverWithPotential::parse(t).expect("shipped quiver parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_parse() {
        for (name, text) in SHIPPED {
            QuiverWithPotential::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let c = shipped("conifold").unwrap();
        assert_eq!(c.potential.len(), 2);
        assert_eq!(c.arrows_between(0, 1), 2);
    }

    #[test]
    fn rejects_open_words() {
        let t = "vertex 1\nvertex 2\narrow x: 1 -> 2\npotential: 1 x x";
        assert_eq!(QuiverWithPotential::parse(t), Err(QuiverError::NotClosed("x x".into())));
        let t = "vertex 1\narrow a: 1 -> 1\npotential: 1 a";
        assert_eq!(QuiverWithPotential::parse(t), Err(QuiverError::ShortCycle("a".into())));
        let t = "vertex 1\narrow a: 1 -> 3";
        assert_eq!(QuiverWithPotential::parse(t), Err(QuiverError::UnknownVertex("3".into())));
        assert!(matches!(QuiverWithPotential::parse("vertx 1"), Err(QuiverError::Syntax { line: 1, .. })));
    }
}
