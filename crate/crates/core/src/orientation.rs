//! Parity-level orientation data on twisted objects: superdeterminant
//! parities, `J₂` classes of quadratic spaces, the obstruction class at an
//! extension, the `C^{≥2}` and Lagrangian classes, and cocycle propagation.
//!
//! The parity of a graded space's superdeterminant line is taken to be its
//! total dimension mod 2. That is the quasi-isomorphism invariant one: a
//! complex and its homology differ in dimension by twice the rank.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ainfty::{AInftyCategory, MatElem, QuiverWithPotential, ShiftedObject};
use crate::coeff::Q;
use crate::linalg::{complement_within, Matrix};
use crate::twisted::{extension, mc_residual, EndAlgebra, TwistedError, TwistedObject};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("arrow set is not Lagrangian: a potential term contains {0} of its arrows")]
    InvalidLagrangian(usize),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("inconsistent parity at {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
}

/// Base-field mode: over the rationals square classes are kept, over an
/// algebraically closed field they collapse to 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FieldMode {
    #[default]
    Rational,
    AlgebraicallyClosed,
}

/// Squarefree representative of the square class of a nonzero integer.
pub fn squarefree(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "square class of zero");
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut odd = false;
        while (&m % &p).is_zero() {
            m /= &p;
            odd = !odd;
        }
        if odd {
            out *= &p;
        }
        p += 1;
    }
    out *= m;
    if n.is_negative() {
        -out
    } else {
        out
    }
}

/// A point of `J₂ = k*/(k*)² × Z/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct J2Class {
    pub unit_class: BigInt,
    pub parity: u8,
}

impl J2Class {
    pub fn trivial() -> J2Class {
        J2Class { unit_class: BigInt::one(), parity: 0 }
    }

    /// Reduces `unit_class` to its squarefree part (or 1 in the closed mode).
    pub fn new(unit: BigInt, parity: u8, mode: FieldMode) -> J2Class {
        let unit_class = match mode {
            FieldMode::Rational => squarefree(&unit),
            FieldMode::AlgebraicallyClosed => BigInt::one(),
        };
        J2Class { unit_class, parity: parity % 2 }
    }

    /// Square class of a nonzero rational, with the given parity.
    pub fn of_rational(x: &Q, parity: u8, mode: FieldMode) -> J2Class {
        J2Class::new(x.numer() * x.denom(), parity, mode)
    }

    pub fn mul(&self, other: &J2Class) -> J2Class {
        J2Class { unit_class: squarefree(&(&self.unit_class * &other.unit_class)), parity: (self.parity + other.parity) % 2 }
    }

    pub fn is_trivial(&self) -> bool {
        self.unit_class.is_one() && self.parity == 0
    }

    pub fn parse(s: &str) -> Option<J2Class> {
        let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (d, p) = inner.split_once(',')?;
        let d: BigInt = d.trim().parse().ok()?;
        let p: u8 = p.trim().parse().ok()?;
        (p <= 1 && !d.is_zero() && squarefree(&d) == d).then_some(J2Class { unit_class: d, parity: p })
    }
}

impl fmt::Display for J2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.unit_class, self.parity)
    }
}

/// A symmetric bilinear form on a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadSpace {
    pub labels: Vec<String>,
    pub matrix: Matrix,
}

impl QuadSpace {
    pub fn new(labels: Vec<String>, matrix: Matrix) -> Result<QuadSpace, OrientationError> {
        if matrix.rows != labels.len() || matrix.cols != labels.len() || !matrix.is_symmetric() {
            return Err(OrientationError::NotSymmetric);
        }
        Ok(QuadSpace { labels, matrix })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn direct_sum(&self, other: &QuadSpace) -> QuadSpace {
        let (n, m) = (self.dim(), other.dim());
        let mut mat = Matrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                mat.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        for i in 0..m {
            for j in 0..m {
                mat.set(n + i, n + j, other.matrix.get(i, j).clone());
            }
        }
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        QuadSpace { labels, matrix: mat }
    }
}

/// `(squarefree part of det, dim mod 2)`.
pub fn quad_class(q: &QuadSpace, mode: FieldMode) -> Result<J2Class, OrientationError> {
    if q.dim() == 0 {
        return Ok(J2Class::trivial());
    }
    let det = q.matrix.det();
    if det.is_zero() {
        return Err(OrientationError::Degenerate);
    }
    Ok(J2Class::of_rational(&det, (q.dim() % 2) as u8, mode))
}

/// Parity of the superdeterminant line of a graded space given as
/// `(degree, dimension)` pairs: the total dimension mod 2.
pub fn sdet_parity(dims: &[(i32, usize)]) -> u8 {
    (dims.iter().map(|&(_, d)| d).sum::<usize>() % 2) as u8
}

/// The form `⟨d(•), •⟩` on `End¹(M) / ker d`, realized on a complement of
/// the kernel.
pub fn hom1_form(cat: &AInftyCategory, m: &TwistedObject) -> Result<QuadSpace, OrientationError> {
    let end = EndAlgebra::new(cat, m.clone());
    let idx = end.degree_indices(1);
    let n = end.dim();
    let block = end.d_block(1);
    let ker: Vec<Vec<Q>> = block.kernel().iter().map(|v| embed(n, &idx, v)).collect();
    let units: Vec<Vec<Q>> = idx.iter().map(|&k| end.unit_vector(k)).collect();
    let comp = complement_within(&ker, &units, n);
    let d = end.d_matrix();
    let images: Vec<Vec<Q>> = comp.iter().map(|v| d.apply(v)).collect();
    let mut mat = Matrix::zeros(comp.len(), comp.len());
    for (a, da) in images.iter().enumerate() {
        for (b, vb) in comp.iter().enumerate() {
            mat.set(a, b, end.pair(da, vb));
        }
    }
    let labels = comp
        .iter()
        .map(|v| {
            let k = v.iter().position(|c| !c.is_zero()).expect("nonzero vector");
            let (i, j, e) = end.basis[k];
            format!("{}[{i},{j}]", cat.basis[e].label)
        })
        .collect();
    QuadSpace::new(labels, mat)
}

fn embed(n: usize, idx: &[usize], v: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (&k, c) in idx.iter().zip(v) {
        out[k] = c.clone();
    }
    out
}

/// Class of [`hom1_form`].
pub fn hom1_class(cat: &AInftyCategory, m: &TwistedObject, mode: FieldMode) -> Result<J2Class, OrientationError> {
    quad_class(&hom1_form(cat, m)?, mode)
}

/// The obstruction `l` at the extension `E` of `M₂` by `M₁` along `α`:
/// the class of `E` relative to its two ends,
/// `[Q_E] · [Q_{M₁}] · [Q_{M₂}]` (classes are 2-torsion).
pub fn obstruction_at_extension(
    cat: &AInftyCategory,
    m1: &TwistedObject,
    m2: &TwistedObject,
    alpha: &MatElem<Q>,
    mode: FieldMode,
) -> Result<J2Class, OrientationError> {
    let e = extension(cat, m1, m2, alpha)?;
    Ok(hom1_class(cat, &e, mode)?.mul(&hom1_class(cat, m1, mode)?).mul(&hom1_class(cat, m2, mode)?))
}

/// Counts `(i, j, e)` entries of `End(M)` whose basis element passes `keep`.
fn count_entries(cat: &AInftyCategory, tau: &ShiftedObject, keep: impl Fn(usize) -> bool) -> usize {
    let mut n = 0;
    for i in 0..tau.len() {
        for j in 0..tau.len() {
            n += cat.basis.iter().enumerate().filter(|(e, b)| b.src == tau.obj(j) && b.tgt == tau.obj(i) && keep(*e)).count();
        }
    }
    n
}

/// Parity of `C^{≥2}_tw(M, M)`: entries whose basis element has degree ≥ 2.
pub fn cgeq2_class(cat: &AInftyCategory, m: &TwistedObject) -> u8 {
    (count_entries(cat, &m.tau, |e| cat.basis[e].degree >= 2) % 2) as u8
}

/// Parity of `H^{≥2}(End(M))` in total degree, the correction relating
/// [`cgeq2_class`] to the parity of [`hom1_form`] on untwisted-shift objects.
pub fn homology_geq2_parity(cat: &AInftyCategory, m: &TwistedObject) -> u8 {
    let end = EndAlgebra::new(cat, m.clone());
    let (_, hi) = end.degree_range();
    let mut dim = 0usize;
    for k in 2..=hi {
        let n_k = end.degree_indices(k).len();
        let r_out = end.d_block(k).rank();
        let r_in = end.d_block(k - 1).rank();
        dim += n_k - r_out - r_in;
    }
    (dim % 2) as u8
}

/// Checks that no potential term contains more than one arrow of `t`.
pub fn validate_lagrangian(q: &QuiverWithPotential, t: &[usize]) -> Result<(), OrientationError> {
    for term in &q.potential {
        let hits = term.word.iter().filter(|a| t.contains(a)).count();
        if hits > 1 {
            return Err(OrientationError::InvalidLagrangian(hits));
        }
    }
    Ok(())
}

/// Arrow indices of `q` for the given labels.
pub fn arrow_set(q: &QuiverWithPotential, labels: &[&str]) -> Result<Vec<usize>, OrientationError> {
    labels.iter().map(|l| q.arrow(l).ok_or_else(|| OrientationError::UnknownArrow(l.to_string()))).collect()
}

/// Parity of the `L_T`-twisted complex at `M`, where
/// `L_T = span{a ∉ T} ⊕ span{a* : a ∈ T} ⊕ degree 3`. `cat` must be the
/// Koszul dual of `q`.
pub fn lagrangian_class(q: &QuiverWithPotential, cat: &AInftyCategory, t: &[usize], m: &TwistedObject) -> Result<u8, OrientationError> {
    validate_lagrangian(q, t)?;
    let in_t = |label: &str| t.iter().any(|&a| q.arrows[a].label == label);
    let keep = |e: usize| {
        let b = &cat.basis[e];
        match b.degree {
            1 => in_t(b.label.trim_end_matches('*')),
            2 => !in_t(&b.label),
            3 => true,
            _ => false,
        }
    };
    Ok((count_entries(cat, &m.tau, keep) % 2) as u8)
}

/// Checks `h(M₁) + h(M₂) + h(E) ≡ l` in parity, for `E` the extension along `α`.
pub fn cocycle_check(
    cat: &AInftyCategory,
    m1: &TwistedObject,
    m2: &TwistedObject,
    alpha: &MatElem<Q>,
    mode: FieldMode,
    h: impl Fn(&TwistedObject) -> u8,
) -> Result<bool, OrientationError> {
    let e = extension(cat, m1, m2, alpha)?;
    let l = obstruction_at_extension(cat, m1, m2, alpha, mode)?;
    Ok((h(m1) + h(m2) + h(&e)) % 2 == l.parity)
}

/// Finite enumeration range for twisted objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBound {
    pub max_slots: usize,
    pub min_shift: i32,
    pub max_shift: i32,
    /// Objects with more candidate `A` positions than this are skipped.
    pub max_positions: usize,
}

impl Default for EnumBound {
    fn default() -> Self {
        EnumBound { max_slots: 4, min_shift: -1, max_shift: 1, max_positions: 10 }
    }
}

/// Every twisted object within `bound` whose `A` has entries in `{0, 1}`
/// on the degree-1 basis positions.
pub fn enumerate_objects(cat: &AInftyCategory, bound: &EnumBound) -> Vec<TwistedObject> {
    let mut out = Vec::new();
    let slots: Vec<(usize, i32)> =
        (0..cat.objects.len()).flat_map(|o| (bound.min_shift..=bound.max_shift).map(move |s| (o, s))).collect();
    for n in 1..=bound.max_slots {
        let mut idx = vec![0usize; n];
        loop {
            let tau = ShiftedObject(idx.iter().map(|&k| slots[k]).collect());
            let mut pos = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for (e, b) in cat.basis.iter().enumerate() {
                        if b.src == tau.obj(j) && b.tgt == tau.obj(i) && b.degree - tau.shift(i) + tau.shift(j) == 1 {
                            pos.push((i, j, e));
                        }
                    }
                }
            }
            if pos.len() <= bound.max_positions {
                for mask in 0u64..(1u64 << pos.len()) {
                    let a = MatElem::from_entries(
                        pos.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| (p, Q::one())),
                    );
                    if mc_residual(cat, &tau, &a).map(|r| r.is_zero()).unwrap_or(false) {
                        out.push(TwistedObject { tau: tau.clone(), a });
                    }
                }
            }
            // next tuple
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < slots.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    out
}

/// The sub-object on slots `lo..hi`.
pub fn restrict(m: &TwistedObject, lo: usize, hi: usize) -> TwistedObject {
    let tau = ShiftedObject(m.tau.0[lo..hi].to_vec());
    let a = MatElem::from_entries(
        m.a.entries().filter(|(&(i, j, _), _)| i >= lo && j < hi && i < hi && j >= lo).map(|(&(i, j, e), c)| ((i - lo, j - lo, e), c.clone())),
    );
    TwistedObject { tau, a }
}

/// Whether `End(M)` is acyclic, i.e. `M` is quasi-isomorphic to zero.
pub fn is_contractible(cat: &AInftyCategory, m: &TwistedObject) -> bool {
    let end = EndAlgebra::new(cat, m.clone());
    let d = end.d_matrix();
    2 * d.rank() == end.dim()
}

/// Parities forced by the cocycle condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityAssignment {
    pub values: Vec<(TwistedObject, u8)>,
}

impl ParityAssignment {
    pub fn get(&self, m: &TwistedObject) -> Option<u8> {
        self.values.iter().find(|(o, _)| o == m).map(|(_, p)| *p)
    }
}

/// Propagates generator parities (one per object of `cat`, at shift 0) to
/// every enumerated twisted object. Shifted generators are fixed by
/// `h(cone(id)) = 0`; every split point of every object must then agree,
/// and every contractible object must get parity 0.
pub fn propagate_parities(
    cat: &AInftyCategory,
    generators: &[u8],
    bound: &EnumBound,
    mode: FieldMode,
) -> Result<ParityAssignment, OrientationError> {
    let class = |m: &TwistedObject| hom1_class(cat, m, mode).map(|c| c.parity);
    let one_slot = |obj: usize, s: i32| -> Result<u8, OrientationError> {
        // h(x[s]) = h(x[s-1]) + l(x[s-1] → x[s]) with h of the cone zero
        let mut h = generators[obj] % 2;
        let step = |from: i32| -> Result<u8, OrientationError> {
            let unit = cat.unit(obj).ok_or(OrientationError::Twisted(TwistedError::NotComposable))?;
            let (lo, hi) = (TwistedObject::simple(obj, from), TwistedObject::simple(obj, from + 1));
            let alpha = MatElem::from_entries([((0, 0, unit), Q::one())]);
            Ok(obstruction_at_extension(cat, &lo, &hi, &alpha, mode)?.parity)
        };
        if s > 0 {
            for k in 0..s {
                h = (h + step(k)?) % 2;
            }
        } else {
            for k in (s..0).rev() {
                h = (h + step(k)?) % 2;
            }
        }
        Ok(h)
    };
    let objects = enumerate_objects(cat, bound);
    let mut values: Vec<(TwistedObject, u8)> = Vec::with_capacity(objects.len());
    let mut seen: HashMap<String, u8> = HashMap::new();
    let key = |m: &TwistedObject| format!("{m:?}");
    for m in &objects {
        let h = if m.len() == 1 {
            one_slot(m.tau.obj(0), m.tau.shift(0))?
        } else {
            let mut found: Option<u8> = None;
            let cm = class(m)?;
            for k in 1..m.len() {
                let (m1, m2) = (restrict(m, 0, k), restrict(m, k, m.len()));
                let (Some(&h1), Some(&h2)) = (seen.get(&key(&m1)), seen.get(&key(&m2))) else {
                    return Err(OrientationError::Inconsistent(format!("{:?}: missing sub-object", m.tau)));
                };
                let l = (cm + class(&m1)? + class(&m2)?) % 2;
                let v = (h1 + h2 + l) % 2;
                match found {
                    None => found = Some(v),
                    Some(w) if w != v => return Err(OrientationError::Inconsistent(format!("{:?}: split {k}", m.tau))),
                    _ => {}
                }
            }
            found.expect("at least two slots")
        };
        if h != 0 && is_contractible(cat, m) {
            return Err(OrientationError::Inconsistent(format!("{:?}: contractible with parity 1", m.tau)));
        }
        seen.insert(key(m), h);
        values.push((m.clone(), h));
    }
    Ok(ParityAssignment { values })
}

/// The model for the flop comparison: two objects with `e` degree-1
/// morphisms from the first to the second, zero potential.
pub fn outwater_quiver(e: usize) -> QuiverWithPotential {
    use crate::ainfty::quiver::Arrow;
    let arrows = (0..e).map(|k| Arrow { label: format!("a{}", k + 1), src: 1, tgt: 0 }).collect();
    QuiverWithPotential::new(vec!["0".into(), "1".into()], arrows, vec![]).expect("acyclic")
}

/// The universal extension `E₀ ⊗ Hom¹(E₀, E₁) → E₁` in the Koszul dual of
/// [`outwater_quiver`]: slot 0 is `E₁`, slots `1..=e` are copies of `E₀`.
pub fn universal_extension(cat: &AInftyCategory, e: usize) -> Result<(TwistedObject, TwistedObject, MatElem<Q>), OrientationError> {
    let m1 = TwistedObject::simple(1, 0);
    let mut m2 = TwistedObject { tau: ShiftedObject(vec![]), a: MatElem::zero() };
    for _ in 0..e {
        m2 = m2.direct_sum(&TwistedObject::simple(0, 0));
    }
    let mut alpha = MatElem::zero();
    for k in 0..e {
        let ad = cat.find(&format!("a{}*", k + 1)).ok_or_else(|| OrientationError::UnknownArrow(format!("a{}", k + 1)))?;
        alpha.add(0, k, ad, Q::one());
    }
    Ok((m1, m2, alpha))
}

/// Kronecker-type conifold module with `a` slots over the first vertex and
/// `b` over the second, `x1*` on the main staircase and `x2*` on the
/// neighbouring one (above it when `b > a`, below otherwise).
pub fn conifold_string(cat: &AInftyCategory, a: usize, b: usize) -> Result<TwistedObject, OrientationError> {
    let find = |l: &str| cat.find(l).ok_or_else(|| OrientationError::UnknownArrow(l.to_string()));
    let (x1, x2) = (find("x1*")?, find("x2*")?);
    let tau = ShiftedObject((0..a).map(|_| (0, 0)).chain((0..b).map(|_| (1, 0))).collect());
    let mut m = MatElem::zero();
    for i in 0..a {
        if i < b {
            m.add(i, a + i, x1, Q::one());
        }
        let j = if b > a { i + 1 } else { i.wrapping_sub(1) };
        if j < b {
            m.add(i, a + j, x2, Q::one());
        }
    }
    Ok(TwistedObject::new(cat, tau, m)?)
}
