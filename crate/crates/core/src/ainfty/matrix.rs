//! Matrices over a category and the functional `W(a) = Σ_n (1/n) ⟨b_{n-1}(a, …, a), a⟩`.
//!
//! A shifted object is a list of `(object, shift)` slots. A matrix entry
//! `(i, j, e)` is a map from slot `j` to slot `i`, so `src(e)` is the object
//! of slot `j` and `tgt(e)` that of slot `i`; its degree is `|e| - s_i + s_j`.
//! Matrix operations carry the sign `(-1)^{s_i}` of the output row slot, and
//! the pairing carries `(-1)^{s_i + s_j}`.

use std::collections::{BTreeMap, HashMap};

use super::{AInftyCategory, AInftyError};
use crate::coeff::{Coeff, Q};

/// Ordered slots `(object index, shift)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftedObject(pub Vec<(usize, i32)>);

impl ShiftedObject {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn obj(&self, i: usize) -> usize {
        self.0[i].0
    }

    pub fn shift(&self, i: usize) -> i32 {
        self.0[i].1
    }

    pub fn concat(&self, other: &ShiftedObject) -> ShiftedObject {
        ShiftedObject(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The same slots with every shift raised by `k`.
    pub fn shifted(&self, k: i32) -> ShiftedObject {
        ShiftedObject(self.0.iter().map(|&(o, s)| (o, s + k)).collect())
    }
}

/// Sparse matrix with entries `(row, col, basis element) → coefficient`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatElem<C> {
    entries: BTreeMap<(usize, usize, usize), C>,
}

impl<C: Coeff> Default for MatElem<C> {
    fn default() -> Self {
        MatElem { entries: BTreeMap::new() }
    }
}

impl<C: Coeff> MatElem<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize, usize), C)>) -> Self {
        let mut m = Self::zero();
        for ((i, j, e), c) in entries {
            m.add(i, j, e, c);
        }
        m
    }

    pub fn add(&mut self, i: usize, j: usize, e: usize, c: C) {
        let slot = self.entries.entry((i, j, e)).or_insert_with(C::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.entries.remove(&(i, j, e));
        }
    }

    pub fn get(&self, i: usize, j: usize, e: usize) -> C {
        self.entries.get(&(i, j, e)).cloned().unwrap_or_else(C::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &C)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (&(i, j, e), c) in &other.entries {
            m.add(i, j, e, c.clone());
        }
        m
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_entries(self.entries.iter().map(|(&k, x)| (k, x.mul(c))))
    }

    pub fn neg(&self) -> Self {
        Self::from_entries(self.entries.iter().map(|(&k, x)| (k, x.neg())))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MatElem<D> {
        MatElem::from_entries(self.entries.iter().map(|(&k, x)| (k, f(x))))
    }

    /// Checks that every entry maps between the objects of its slots.
    pub fn check_shape(&self, cat: &AInftyCategory, tau: &ShiftedObject) -> Result<(), AInftyError> {
        for &(i, j, e) in self.entries.keys() {
            if i >= tau.len() || j >= tau.len() || e >= cat.basis.len() {
                return Err(AInftyError::Shape);
            }
            let b = &cat.basis[e];
            if b.src != tau.obj(j) || b.tgt != tau.obj(i) {
                return Err(AInftyError::Shape);
            }
        }
        Ok(())
    }

    /// Entry degrees `|e| - s_i + s_j` present in the matrix.
    pub fn degrees(&self, cat: &AInftyCategory, tau: &ShiftedObject) -> Vec<i32> {
        let mut d: Vec<i32> =
            self.entries.keys().map(|&(i, j, e)| cat.basis[e].degree - tau.shift(i) + tau.shift(j)).collect();
        d.sort();
        d.dedup();
        d
    }

    /// The part of the matrix in entry degree `d`.
    pub fn degree_part(&self, cat: &AInftyCategory, tau: &ShiftedObject, d: i32) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .filter(|(&(i, j, e), _)| cat.basis[e].degree - tau.shift(i) + tau.shift(j) == d)
                .map(|(&k, c)| (k, c.clone())),
        )
    }
}

fn parity_sign<C: Coeff>(k: i32) -> C {
    if k.rem_euclid(2) == 0 {
        C::one()
    } else {
        C::one().neg()
    }
}

/// Matrix `b_n(x_n, …, x_1)`, with `inputs` in display order.
pub fn mat_b<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, inputs: &[&MatElem<C>]) -> MatElem<C> {
    let n = inputs.len();
    let mut out = MatElem::zero();
    if n == 0 || inputs.iter().any(|m| m.is_zero()) {
        return out;
    }
    // application order, each input indexed by column
    let by_col: Vec<HashMap<usize, Vec<(usize, usize, &C)>>> = inputs
        .iter()
        .rev()
        .map(|m| {
            let mut h: HashMap<usize, Vec<(usize, usize, &C)>> = HashMap::new();
            for (&(i, j, e), c) in m.entries() {
                h.entry(j).or_default().push((i, e, c));
            }
            h
        })
        .collect();
    let mut app = Vec::with_capacity(n);
    for (&j0, list) in &by_col[0] {
        for &(i, e, c) in list {
            app.push(e);
            if cat.has_prefix(&app) {
                extend(cat, tau, &by_col, 1, j0, i, &mut app, c.clone(), &mut out);
            }
            app.pop();
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend<C: Coeff>(
    cat: &AInftyCategory,
    tau: &ShiftedObject,
    by_col: &[HashMap<usize, Vec<(usize, usize, &C)>>],
    level: usize,
    col0: usize,
    row: usize,
    app: &mut Vec<usize>,
    coef: C,
    out: &mut MatElem<C>,
) {
    if level == by_col.len() {
        if let Some(v) = cat.op_applied(app) {
            let c = coef.mul(&parity_sign(tau.shift(row)));
            for (&o, x) in v {
                out.add(row, col0, o, c.scale_q(x));
            }
        }
        return;
    }
    let Some(list) = by_col[level].get(&row) else { return };
    for &(i, e, c) in list {
        app.push(e);
        if cat.has_prefix(app) {
            extend(cat, tau, by_col, level + 1, col0, i, app, coef.mul(c), out);
        }
        app.pop();
    }
}

/// `η(x, y) = Σ (-1)^{s_i + s_j} ⟨x_{ij}, y_{ji}⟩`.
pub fn mat_pair<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, x: &MatElem<C>, y: &MatElem<C>) -> C {
    let mut acc = C::zero();
    let Some(p) = cat.pairing() else { return acc };
    for (&(i, j, e), cx) in x.entries() {
        for (&(a, b), w) in p.range((e, 0)..(e + 1, 0)) {
            debug_assert_eq!(a, e);
            let cy = y.get(j, i, b);
            if !cy.is_zero() {
                let s: C = parity_sign(tau.shift(i) + tau.shift(j));
                acc = acc.add(&cx.mul(&cy).mul(&s).scale_q(w));
            }
        }
    }
    acc
}

/// `W(a) = Σ_{n ≥ 2} (1/n) η(b_{n-1}(a, …, a), a)`; the sum stops at the
/// largest arity of the category.
pub fn potential_value<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, a: &MatElem<C>) -> Result<C, AInftyError> {
    a.check_shape(cat, tau)?;
    let mut acc = C::zero();
    for k in 1..=cat.max_arity() {
        let inputs = vec![a; k];
        let b = mat_b(cat, tau, &inputs);
        let v = mat_pair(cat, tau, &b, a);
        acc = acc.add(&v.scale_q(&Q::new(1.into(), ((k + 1) as i64).into())));
    }
    Ok(acc)
}
