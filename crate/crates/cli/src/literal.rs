//! Twisted-object and extension literals.
//!
//! ```text
//! tw(<vertex>[<shift>], ...; <entry>; <entry>; ...)
//! entry := [<rational>*]<basis-label>@<row>,<col>
//! ext := <tw> | <tw> | <entry>; <entry>; ...
//! ```
//!
//! Rows and columns are 0-based slot indices; an entry at `(row, col)` maps
//! slot `col` to slot `row`. In an extension the entries form `α`, with rows
//! in the first object and columns in the second.

use mdt_core::ainfty::{AInftyCategory, MatElem, ShiftedObject};
use mdt_core::coeff::Q;
use mdt_core::twisted::TwistedObject;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("literal must look like tw(<slots>; <entries>)")]
    Shape,
    #[error("bad slot {0:?}")]
    Slot(String),
    #[error("unknown vertex {0}")]
    Vertex(String),
    #[error("bad entry {0:?}")]
    Entry(String),
    #[error("unknown basis element {0}")]
    Basis(String),
    #[error("extension must have three |-separated parts")]
    Extension,
    #[error("twisted object: {0}")]
    Twisted(String),
}

fn parse_slot(cat: &AInftyCategory, s: &str) -> Result<(usize, i32), LiteralError> {
    let s = s.trim();
    let open = s.find('[').ok_or_else(|| LiteralError::Slot(s.into()))?;
    let body = s[open + 1..].strip_suffix(']').ok_or_else(|| LiteralError::Slot(s.into()))?;
    let shift: i32 = body.trim().parse().map_err(|_| LiteralError::Slot(s.into()))?;
    let name = s[..open].trim();
    let obj = cat.objects.iter().position(|o| o == name).ok_or_else(|| LiteralError::Vertex(name.into()))?;
    Ok((obj, shift))
}

/// Parses `;`-separated entries into a matrix element.
pub fn parse_entries(cat: &AInftyCategory, s: &str) -> Result<MatElem<Q>, LiteralError> {
    let mut m = MatElem::zero();
    for raw in s.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let bad = || LiteralError::Entry(raw.into());
        let (lhs, pos) = raw.rsplit_once('@').ok_or_else(bad)?;
        let (r, c) = pos.split_once(',').ok_or_else(bad)?;
        let row: usize = r.trim().parse().map_err(|_| bad())?;
        let col: usize = c.trim().parse().map_err(|_| bad())?;
        let (coeff, label) = match lhs.split_once('*') {
            Some((c, l)) if c.trim().parse::<Q>().is_ok() => (c.trim().parse::<Q>().map_err(|_| bad())?, l.trim()),
            _ => (Q::from_integer(1.into()), lhs.trim()),
        };
        let e = cat.find(label).ok_or_else(|| LiteralError::Basis(label.into()))?;
        m.add(row, col, e, coeff);
    }
    Ok(m)
}

/// Parses and validates a `tw(...)` literal.
pub fn parse_tw(cat: &AInftyCategory, s: &str) -> Result<TwistedObject, LiteralError> {
    let s = s.trim();
    let body = s.strip_prefix("tw").map(str::trim_start).and_then(|b| b.strip_prefix('(')).and_then(|b| b.strip_suffix(')')).ok_or(LiteralError::Shape)?;
    let (slots, entries) = match body.split_once(';') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let tau = slots.split(',').filter(|x| !x.trim().is_empty()).map(|x| parse_slot(cat, x)).collect::<Result<Vec<_>, _>>()?;
    let a = parse_entries(cat, entries)?;
    TwistedObject::new(cat, ShiftedObject(tau), a).map_err(|e| LiteralError::Twisted(e.to_string()))
}

/// Parses `<tw> | <tw> | <entries>` into `(M₁, M₂, α)`.
pub fn parse_ext(cat: &AInftyCategory, s: &str) -> Result<(TwistedObject, TwistedObject, MatElem<Q>), LiteralError> {
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() != 3 {
        return Err(LiteralError::Extension);
    }
    Ok((parse_tw(cat, parts[0])?, parse_tw(cat, parts[1])?, parse_entries(cat, parts[2])?))
}
