//! Finite A∞-categories in the shifted convention, with cyclic pairings.
//!
//! Every structure map is a `b_n` of degree +1 on shifted hom spaces, where
//! a basis element of degree `d` has shifted degree `d - 1`. An operation is
//! keyed by its inputs in display order `(y_n, …, y_1)`; `y_1` is applied
//! first, so the key is composable when `src(y_{k+1}) = tgt(y_k)`.

mod koszul;
pub mod matrix;
pub mod quiver;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeff::Q;

pub use koszul::{koszul_dual, sphere_algebra};
pub use matrix::{potential_value, MatElem, ShiftedObject};
pub use quiver::{QuiverError, QuiverWithPotential};

/// Homs in degrees `0..=3` with a degree-3 pairing bound the arity of a
/// nonvanishing `b_n` for every category built here.
pub const DEGREE_FORCED_ARITY: usize = 8;

/// Sparse vector over the basis of a category.
pub type Vector = BTreeMap<usize, Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AInftyError {
    #[error("inputs {0:?} are not composable")]
    NotComposable(Vec<usize>),
    #[error("output element {out} does not lie in the hom space of inputs {key:?}")]
    WrongHom { key: Vec<usize>, out: usize },
    #[error("category has no pairing")]
    MissingPairing,
    #[error("pairing is not symmetric on ({0}, {1})")]
    PairingAsymmetric(usize, usize),
    #[error("pairing entry ({0}, {1}) has the wrong degree or hom spaces")]
    PairingDegree(usize, usize),
    #[error("pairing is degenerate between objects {0} and {1}")]
    PairingDegenerate(usize, usize),
    #[error("incomposable matrix shapes")]
    Shape,
}

/// A basis element of some `Hom(src, tgt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElt {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AInftyCategory {
    pub objects: Vec<String>,
    pub basis: Vec<BasisElt>,
    units: Vec<Option<usize>>,
    /// Keyed by inputs in application order `(y_1, …, y_n)`.
    ops: HashMap<Vec<usize>, Vector>,
    /// Every prefix, in application order, of a key with a nonzero operation.
    prefixes: HashSet<Vec<usize>>,
    pairing: Option<BTreeMap<(usize, usize), Q>>,
}

impl AInftyCategory {
    pub fn new(objects: Vec<String>, basis: Vec<BasisElt>) -> AInftyCategory {
        let units = vec![None; objects.len()];
        AInftyCategory { objects, basis, units, ops: HashMap::new(), prefixes: HashSet::new(), pairing: None }
    }

    pub fn shifted_degree(&self, e: usize) -> i32 {
        self.basis[e].degree - 1
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    /// Basis of `Hom(src, tgt)` in degree `d`.
    pub fn hom_basis(&self, src: usize, tgt: usize, d: i32) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&e| self.basis[e].src == src && self.basis[e].tgt == tgt && self.basis[e].degree == d)
            .collect()
    }

    pub fn set_unit(&mut self, obj: usize, e: usize) {
        self.units[obj] = Some(e);
    }

    pub fn unit(&self, obj: usize) -> Option<usize> {
        self.units[obj]
    }

    pub fn is_unit(&self, e: usize) -> bool {
        self.units.contains(&Some(e))
    }

    fn check_key(&self, key: &[usize]) -> Result<(usize, usize), AInftyError> {
        let composable = key.windows(2).all(|w| self.basis[w[0]].src == self.basis[w[1]].tgt);
        match (key.first(), key.last()) {
            (Some(&f), Some(&l)) if composable => Ok((self.basis[l].src, self.basis[f].tgt)),
            _ => Err(AInftyError::NotComposable(key.to_vec())),
        }
    }

    /// Adds `c · out` to `b_n(key)`, with `key` in display order.
    pub fn add_op(&mut self, key: &[usize], out: usize, c: Q) -> Result<(), AInftyError> {
        let (src, tgt) = self.check_key(key)?;
        if self.basis[out].src != src || self.basis[out].tgt != tgt {
            return Err(AInftyError::WrongHom { key: key.to_vec(), out });
        }
        let app: Vec<usize> = key.iter().rev().copied().collect();
        let v = self.ops.entry(app.clone()).or_default();
        let e = v.entry(out).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            v.remove(&out);
        }
        if v.is_empty() {
            self.ops.remove(&app);
        } else {
            for i in 1..=app.len() {
                self.prefixes.insert(app[..i].to_vec());
            }
        }
        Ok(())
    }

    /// Replaces `b_n(key)` outright.
    pub fn set_op(&mut self, key: &[usize], out: Vector) -> Result<(), AInftyError> {
        let app: Vec<usize> = key.iter().rev().copied().collect();
        self.ops.remove(&app);
        for (e, c) in out {
            self.add_op(key, e, c)?;
        }
        self.rebuild_prefixes();
        Ok(())
    }

    fn rebuild_prefixes(&mut self) {
        self.prefixes.clear();
        for k in self.ops.keys() {
            for i in 1..=k.len() {
                self.prefixes.insert(k[..i].to_vec());
            }
        }
    }

    /// `b_n(key)` with `key` in display order.
    pub fn op(&self, key: &[usize]) -> Option<&Vector> {
        let app: Vec<usize> = key.iter().rev().copied().collect();
        self.ops.get(&app)
    }

    /// Lookup by inputs in application order.
    pub fn op_applied(&self, app: &[usize]) -> Option<&Vector> {
        self.ops.get(app)
    }

    /// Whether some nonzero operation has inputs starting (in application order) with `app`.
    pub fn has_prefix(&self, app: &[usize]) -> bool {
        self.prefixes.contains(app)
    }

    /// All nonzero operations as `(display-order key, output)`, sorted by key.
    pub fn ops(&self) -> Vec<(Vec<usize>, &Vector)> {
        let mut v: Vec<_> = self.ops.iter().map(|(k, o)| (k.iter().rev().copied().collect(), o)).collect();
        v.sort_by(|a: &(Vec<usize>, &Vector), b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
        v
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest arity at which a Stasheff identity can have a nonzero term.
    pub fn stasheff_bound(&self) -> usize {
        (2 * self.max_arity()).saturating_sub(1).max(1)
    }

    pub fn set_pairing(&mut self, pairing: BTreeMap<(usize, usize), Q>) {
        self.pairing = Some(pairing.into_iter().filter(|(_, c)| !c.is_zero()).collect());
    }

    pub fn pairing(&self) -> Option<&BTreeMap<(usize, usize), Q>> {
        self.pairing.as_ref()
    }

    /// `⟨x, y⟩` on basis elements; zero without a pairing.
    pub fn pair(&self, x: usize, y: usize) -> Q {
        self.pairing.as_ref().and_then(|p| p.get(&(x, y)).cloned()).unwrap_or_else(Q::zero)
    }

    pub fn pair_vec(&self, v: &Vector, y: usize) -> Q {
        v.iter().fold(Q::zero(), |acc, (&x, c)| acc + c * self.pair(x, y))
    }

    /// Checks symmetry, degree 3 and nondegeneracy of the pairing.
    pub fn validate_pairing(&self) -> Result<(), AInftyError> {
        let p = self.pairing.as_ref().ok_or(AInftyError::MissingPairing)?;
        for (&(x, y), c) in p {
            let (bx, by) = (&self.basis[x], &self.basis[y]);
            if bx.src != by.tgt || bx.tgt != by.src || bx.degree + by.degree != 3 {
                return Err(AInftyError::PairingDegree(x, y));
            }
            if p.get(&(y, x)) != Some(c) {
                return Err(AInftyError::PairingAsymmetric(x, y));
            }
        }
        for i in 0..self.objects.len() {
            for j in 0..self.objects.len() {
                for d in 0..=3 {
                    let rows = self.hom_basis(i, j, d);
                    let cols = self.hom_basis(j, i, 3 - d);
                    if rows.len() != cols.len() {
                        return Err(AInftyError::PairingDegenerate(i, j));
                    }
                    let m = crate::linalg::Matrix::from_rows(
                        rows.iter().map(|&x| cols.iter().map(|&y| self.pair(x, y)).collect()).collect(),
                    );
                    if !rows.is_empty() && m.rank() < rows.len() {
                        return Err(AInftyError::PairingDegenerate(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    /// Operations whose output degree is not one more than the input degree.
    pub fn degree_violations(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .ops()
            .into_iter()
            .filter(|(k, v)| {
                let input: i32 = k.iter().map(|&e| self.shifted_degree(e)).sum();
                v.keys().any(|&o| self.shifted_degree(o) != input + 1)
            })
            .map(|(k, _)| k)
            .collect();
        out.sort();
        out
    }
}

/// Result of a Stasheff check.
#[derive(Clone, Debug, PartialEq)]
pub struct StasheffReport {
    pub n_max: usize,
    /// Keys of operations of the wrong degree.
    pub degree_violations: Vec<Vec<usize>>,
    /// Input tuples (display order) whose identity has a nonzero residual.
    pub violations: Vec<(Vec<usize>, Vector)>,
}

impl StasheffReport {
    pub fn passed(&self) -> bool {
        self.degree_violations.is_empty() && self.violations.is_empty()
    }

    pub fn first_failing_arity(&self) -> Option<usize> {
        self.violations.iter().map(|(k, _)| k.len()).min()
    }
}

fn sign(exp: i32) -> Q {
    if exp.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Verifies `Σ ± b(y_n, …, b(…), …, y_1) = 0` on every input tuple of arity
/// at most `n_max`. The sign is `(-1)` to the total shifted degree of the
/// inputs to the left of the inner operation.
pub fn check_stasheff(cat: &AInftyCategory, n_max: usize) -> StasheffReport {
    let ops = cat.ops();
    let mut by_output: HashMap<usize, Vec<(&Vec<usize>, &Q)>> = HashMap::new();
    for (k, v) in &ops {
        for (o, c) in v.iter() {
            by_output.entry(*o).or_default().push((k, c));
        }
    }
    let mut acc: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
    for (outer, out_v) in &ops {
        for p in 0..outer.len() {
            let Some(inner) = by_output.get(&outer[p]) else { continue };
            let left: i32 = outer[..p].iter().map(|&e| cat.shifted_degree(e)).sum();
            for (ik, ic) in inner {
                if outer.len() + ik.len() - 1 > n_max {
                    continue;
                }
                let mut tuple = outer[..p].to_vec();
                tuple.extend_from_slice(ik);
                tuple.extend_from_slice(&outer[p + 1..]);
                let f = sign(left) * *ic;
                let slot = acc.entry(tuple).or_default();
                for (o, c) in out_v.iter() {
                    *slot.entry(*o).or_insert_with(Q::zero) += &f * c;
                }
            }
        }
    }
    let violations = acc
        .into_iter()
        .filter_map(|(k, v)| {
            let v: Vector = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            (!v.is_empty()).then_some((k, v))
        })
        .collect();
    StasheffReport { n_max, degree_violations: cat.degree_violations(), violations }
}

/// Result of a cyclicity check: tuples `(x_n, …, x_0)` where invariance fails.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicReport {
    pub n_max: usize,
    pub violations: Vec<Vec<usize>>,
}

impl CyclicReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `⟨b_n(x_n, …, x_1), x_0⟩` for `tuple = (x_n, …, x_0)`.
fn cyclic_value(cat: &AInftyCategory, tuple: &[usize]) -> Q {
    let (x0, key) = tuple.split_last().expect("nonempty tuple");
    cat.op(key).map_or_else(Q::zero, |v| cat.pair_vec(v, *x0))
}

/// Verifies `⟨b_n(x_n, …, x_1), x_0⟩ = (-1)^{|x_0|'(|x_1|'+…+|x_n|')} ⟨b_n(x_{n-1}, …, x_0), x_n⟩`
/// for every nonzero value with `n + 1 ≤ n_max`.
pub fn check_cyclic(cat: &AInftyCategory, n_max: usize) -> Result<CyclicReport, AInftyError> {
    let pairing = cat.pairing().ok_or(AInftyError::MissingPairing)?;
    let mut violations = Vec::new();
    for (key, out) in cat.ops() {
        if key.len() + 1 > n_max {
            continue;
        }
        let partners: Vec<usize> = {
            let mut v: Vec<usize> =
                pairing.keys().filter(|(x, _)| out.contains_key(x)).map(|&(_, y)| y).collect();
            v.sort();
            v.dedup();
            v
        };
        for x0 in partners {
            let mut tuple = key.clone();
            tuple.push(x0);
            let val = cyclic_value(cat, &tuple);
            if val.is_zero() {
                continue;
            }
            let rest: i32 = key.iter().map(|&e| cat.shifted_degree(e)).sum();
            let mut rotated: Vec<usize> = tuple[1..].to_vec();
            rotated.push(tuple[0]);
            let rhs = sign(cat.shifted_degree(x0) * rest) * cyclic_value(cat, &rotated);
            if val != rhs {
                violations.push(tuple);
            }
        }
    }
    violations.sort();
    Ok(CyclicReport { n_max, violations })
}

/// Arity to which shipped categories are checked.
pub fn check_arity(cat: &AInftyCategory) -> usize {
    DEGREE_FORCED_ARITY.max(cat.stasheff_bound())
}
