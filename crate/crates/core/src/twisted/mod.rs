//! Twisted objects over a cyclic A∞-category: Maurer–Cartan elements,
//! twisted compositions, cones, extensions and potentials on
//! endomorphism spaces.
//!
//! A twisted object is a shifted object `τ` with a strictly upper-triangular
//! degree-1 matrix `A` satisfying `Σ_n b_n(A, …, A) = 0`. A morphism between
//! twisted objects is a matrix with rows in the target slots and columns in
//! the source slots.

mod end;
mod split;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ainfty::matrix::{mat_b, mat_pair};
use crate::ainfty::{potential_value, AInftyCategory, AInftyError, MatElem, ShiftedObject};
use crate::coeff::{Coeff, Q};

pub use end::{homotopy_transfer, EndAlgebra, HodgeSplitting, Transfer};
pub use split::{cyclic_split, verify_split, CyclicSplit, VarSplit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error(transparent)]
    AInfty(#[from] AInftyError),
    #[error("entry ({0}, {1}) lies on or below the diagonal")]
    NotTriangular(usize, usize),
    #[error("entry ({i}, {j}) has degree {found}, expected {expected}")]
    WrongDegree { i: usize, j: usize, found: i32, expected: i32 },
    #[error("Maurer-Cartan residual is nonzero")]
    NotMaurerCartan,
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("morphism is not closed")]
    NotClosed,
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("quadratic part is degenerate on the splitting directions")]
    DegenerateQuadratic,
    #[error("potential has a constant or linear part")]
    LowOrder,
    #[error("remainder depends on the contractible directions")]
    ResidualDependence,
}

fn entry_degree(cat: &AInftyCategory, tau: &ShiftedObject, i: usize, j: usize, e: usize) -> i32 {
    cat.basis[e].degree - tau.shift(i) + tau.shift(j)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedObject {
    pub tau: ShiftedObject,
    pub a: MatElem<Q>,
}

impl TwistedObject {
    /// Validates shape, degree, strict triangularity and the MC equation.
    pub fn new(cat: &AInftyCategory, tau: ShiftedObject, a: MatElem<Q>) -> Result<Self, TwistedError> {
        a.check_shape(cat, &tau)?;
        for (&(i, j, e), _) in a.entries() {
            if i >= j {
                return Err(TwistedError::NotTriangular(i, j));
            }
            let d = entry_degree(cat, &tau, i, j, e);
            if d != 1 {
                return Err(TwistedError::WrongDegree { i, j, found: d, expected: 1 });
            }
        }
        if !mc_residual(cat, &tau, &a)?.is_zero() {
            return Err(TwistedError::NotMaurerCartan);
        }
        Ok(TwistedObject { tau, a })
    }

    /// A single slot with zero differential.
    pub fn simple(obj: usize, shift: i32) -> TwistedObject {
        TwistedObject { tau: ShiftedObject(vec![(obj, shift)]), a: MatElem::zero() }
    }

    /// Slots of `self` followed by those of `other`, differentials block-diagonal.
    pub fn direct_sum(&self, other: &TwistedObject) -> TwistedObject {
        let off = self.tau.len();
        let mut a = self.a.clone();
        for (&(i, j, e), c) in other.a.entries() {
            a.add(i + off, j + off, e, c.clone());
        }
        TwistedObject { tau: self.tau.concat(&other.tau), a }
    }

    /// `E[k]`: every shift raised by `k`.
    pub fn shift(&self, k: i32) -> TwistedObject {
        TwistedObject { tau: self.tau.shifted(k), a: self.a.clone() }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

/// `Σ_n b_n(A, …, A)`; the sum stops at the largest arity of the category.
pub fn mc_residual<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, a: &MatElem<C>) -> Result<MatElem<C>, TwistedError> {
    a.check_shape(cat, tau)?;
    let mut acc = MatElem::zero();
    for n in 1..=cat.max_arity() {
        let inputs = vec![a; n];
        acc = acc.plus(&mat_b(cat, tau, &inputs));
    }
    Ok(acc)
}

/// Twisted `b^A_n(x_n, …, x_1) = Σ b_{n+k}(A…A, x_n, A…A, …, x_1, A…A)` over
/// every way of inserting `k` copies of `A`, with inputs in display order.
pub fn tw_b<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, a: &MatElem<C>, inputs: &[&MatElem<C>]) -> MatElem<C> {
    let n = inputs.len();
    let max = cat.max_arity();
    let mut acc = MatElem::zero();
    if n > max {
        return acc;
    }
    let mut word: Vec<&MatElem<C>> = Vec::with_capacity(max);
    insert_powers(cat, tau, a, inputs, 0, max - n, &mut word, &mut acc);
    acc
}

#[allow(clippy::too_many_arguments)]
fn insert_powers<'a, C: Coeff>(
    cat: &AInftyCategory,
    tau: &ShiftedObject,
    a: &'a MatElem<C>,
    inputs: &[&'a MatElem<C>],
    pos: usize,
    budget: usize,
    word: &mut Vec<&'a MatElem<C>>,
    acc: &mut MatElem<C>,
) {
    // gap `pos` precedes inputs[pos]; the last gap follows every input
    let len = word.len();
    for k in 0..=budget {
        word.truncate(len);
        word.extend(std::iter::repeat_n(a, k));
        if pos == inputs.len() {
            if !word.is_empty() {
                *acc = acc.plus(&mat_b(cat, tau, word));
            }
        } else {
            word.push(inputs[pos]);
            insert_powers(cat, tau, a, inputs, pos + 1, budget - k, word, acc);
        }
        if a.is_zero() {
            break;
        }
    }
    word.truncate(len);
}

/// A morphism between twisted objects.
#[derive(Clone, Debug, PartialEq)]
pub struct TwMorphism {
    pub source: TwistedObject,
    pub target: TwistedObject,
    /// Rows index target slots, columns source slots.
    pub m: MatElem<Q>,
}

impl TwMorphism {
    pub fn new(cat: &AInftyCategory, source: TwistedObject, target: TwistedObject, m: MatElem<Q>) -> Result<Self, TwistedError> {
        let mor = TwMorphism { source, target, m };
        let (tau, emb) = mor.total();
        emb.check_shape(cat, &tau)?;
        Ok(mor)
    }

    /// The total object `source ⊕ target` and the morphism as a block of it.
    fn total(&self) -> (ShiftedObject, MatElem<Q>) {
        let off = self.source.len();
        let tau = self.source.tau.concat(&self.target.tau);
        let m = MatElem::from_entries(self.m.entries().map(|(&(i, j, e), c)| ((i + off, j, e), c.clone())));
        (tau, m)
    }

    /// Degrees `|e| - s_target + s_source` of the entries present.
    pub fn degrees(&self, cat: &AInftyCategory) -> Vec<i32> {
        let (tau, m) = self.total();
        m.degrees(cat, &tau)
    }
}

/// Twisted composition `b^tw_n(m_n, …, m_1)` of a chain in display order:
/// `m_1` is applied first.
pub fn tw_compose(cat: &AInftyCategory, chain: &[&TwMorphism]) -> Result<TwMorphism, TwistedError> {
    let Some(first) = chain.last() else { return Err(TwistedError::NotComposable) };
    for w in chain.windows(2) {
        if w[0].source != w[1].target {
            return Err(TwistedError::NotComposable);
        }
    }
    // objects O_0 = source of m_1, O_k = target of m_k
    let mut objs: Vec<&TwistedObject> = vec![&first.source];
    objs.extend(chain.iter().rev().map(|m| &m.target));
    let mut offsets = Vec::with_capacity(objs.len());
    let mut total = TwistedObject { tau: ShiftedObject(vec![]), a: MatElem::zero() };
    for o in &objs {
        offsets.push(total.len());
        total = total.direct_sum(o);
    }
    let n = chain.len();
    let embedded: Vec<MatElem<Q>> = chain
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let k = n - idx; // m is m_k
            let (ro, co) = (offsets[k], offsets[k - 1]);
            MatElem::from_entries(m.m.entries().map(|(&(i, j, e), c)| ((i + ro, j + co, e), c.clone())))
        })
        .collect();
    embedded.iter().try_for_each(|m| m.check_shape(cat, &total.tau))?;
    let refs: Vec<&MatElem<Q>> = embedded.iter().collect();
    let out = tw_b(cat, &total.tau, &total.a, &refs);
    let (ro, co) = (offsets[n], offsets[0]);
    let (rt, cs) = (objs[n].len(), objs[0].len());
    let m = MatElem::from_entries(out.entries().filter(|&(&(i, j, _e), _c)| i >= ro && i < ro + rt && j >= co && j < co + cs).map(|(&(i, j, e), c)| ((i - ro, j - co, e), c.clone())));
    Ok(TwMorphism { source: objs[0].clone(), target: objs[n].clone(), m })
}

/// `b^tw_1(m)`.
pub fn differential(cat: &AInftyCategory, m: &TwMorphism) -> Result<TwMorphism, TwistedError> {
    tw_compose(cat, &[m])
}

/// The cone of a closed degree-0 morphism `m: M_1 → M_2`: slots `τ_2 ⊕ τ_1[1]`
/// with differential `[[A_2, m], [0, A_1]]`.
pub fn cone(cat: &AInftyCategory, m: &TwMorphism) -> Result<TwistedObject, TwistedError> {
    if m.degrees(cat).iter().any(|&d| d != 0) {
        let found = m.degrees(cat).into_iter().find(|&d| d != 0).unwrap_or(0);
        return Err(TwistedError::WrongDegree { i: 0, j: 0, found, expected: 0 });
    }
    if !differential(cat, m)?.m.is_zero() {
        return Err(TwistedError::NotClosed);
    }
    let top = &m.target;
    let bottom = m.source.shift(1);
    let mut obj = top.direct_sum(&bottom);
    let off = top.len();
    for (&(i, j, e), c) in m.m.entries() {
        obj.a.add(i, j + off, e, c.clone());
    }
    TwistedObject::new(cat, obj.tau, obj.a)
}

/// The extension `E` with slots `τ_1 ⊕ τ_2` and differential `[[A_1, α], [0, A_2]]`,
/// for a degree-1 morphism `α: M_2 → M_1` (so `M_1 ⊂ E` with quotient `M_2`).
pub fn extension(cat: &AInftyCategory, m1: &TwistedObject, m2: &TwistedObject, alpha: &MatElem<Q>) -> Result<TwistedObject, TwistedError> {
    let mor = TwMorphism::new(cat, m2.clone(), m1.clone(), alpha.clone())?;
    if let Some(&found) = mor.degrees(cat).iter().find(|&&d| d != 1) {
        return Err(TwistedError::WrongDegree { i: 0, j: 0, found, expected: 1 });
    }
    if !differential(cat, &mor)?.m.is_zero() {
        return Err(TwistedError::NotClosed);
    }
    let mut obj = m1.direct_sum(m2);
    let off = m1.len();
    for (&(i, j, e), c) in alpha.entries() {
        obj.a.add(i, j + off, e, c.clone());
    }
    TwistedObject::new(cat, obj.tau, obj.a)
}

/// `End(E)` for the extension of `M_2` by `M_1` along `α`; its differential
/// is `d_α` on `⊕ Hom(M_i, M_j)`.
pub fn extension_differential<'a>(
    cat: &'a AInftyCategory,
    m1: &TwistedObject,
    m2: &TwistedObject,
    alpha: &MatElem<Q>,
) -> Result<EndAlgebra<'a>, TwistedError> {
    Ok(EndAlgebra::new(cat, extension(cat, m1, m2, alpha)?))
}

/// `W_A(a) = Σ_{n ≥ 1} (1/(n+1)) η(b^A_n(a, …, a), a)`.
pub fn twisted_potential<C: Coeff>(cat: &AInftyCategory, tau: &ShiftedObject, a: &MatElem<C>, x: &MatElem<C>) -> C {
    let mut acc = C::zero();
    for n in 1..=cat.max_arity() {
        let inputs = vec![x; n];
        let b = tw_b(cat, tau, a, &inputs);
        acc = acc.add(&mat_pair(cat, tau, &b, x).scale_q(&Q::new(1.into(), ((n + 1) as i64).into())));
    }
    acc
}

/// Outcome of comparing `W_α(a)` with `W(α + a)` on random samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftCheckReport {
    pub samples: usize,
    pub failures: Vec<MatElem<Q>>,
}

impl ShiftCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random rational degree-1 matrix over every slot pair of `tau`.
pub fn random_degree_one(cat: &AInftyCategory, tau: &ShiftedObject, rng: &mut impl Rng) -> MatElem<Q> {
    let mut x = MatElem::zero();
    for i in 0..tau.len() {
        for j in 0..tau.len() {
            for e in 0..cat.basis.len() {
                let b = &cat.basis[e];
                if b.src == tau.obj(j) && b.tgt == tau.obj(i) && entry_degree(cat, tau, i, j, e) == 1 {
                    x.add(i, j, e, Q::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into()));
                }
            }
        }
    }
    x
}

/// Checks `W_α(a) = W(α + a)` on `samples` random degree-1 matrices `a`.
pub fn shifted_potential_check(cat: &AInftyCategory, obj: &TwistedObject, samples: usize, seed: u64) -> Result<ShiftCheckReport, TwistedError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = random_degree_one(cat, &obj.tau, &mut rng);
        let lhs = twisted_potential(cat, &obj.tau, &obj.a, &a);
        let rhs = potential_value(cat, &obj.tau, &obj.a.plus(&a))?;
        if lhs != rhs {
            failures.push(a);
        }
    }
    Ok(ShiftCheckReport { samples, failures })
}

/// The two-slot module `N_α`: slots `(s, s)` of the one-loop category with
/// `α·a*` from the second slot to the first.
pub fn n_alpha(cat: &AInftyCategory, alpha: Q) -> Result<TwistedObject, TwistedError> {
    let ad = cat.find("a*").ok_or(TwistedError::AInfty(AInftyError::Shape))?;
    let tau = ShiftedObject(vec![(0, 0), (0, 0)]);
    TwistedObject::new(cat, tau, MatElem::from_entries([((0, 1, ad), alpha)]))
}

/// The conifold module `C_{2,3}`: two slots over the first vertex, three
/// over the second, with `x1*, x2*` acting as in the staircase picture.
pub fn c23(cat: &AInftyCategory) -> Result<TwistedObject, TwistedError> {
    let find = |l: &str| cat.find(l).ok_or(TwistedError::AInfty(AInftyError::Shape));
    let (x1, x2) = (find("x1*")?, find("x2*")?);
    let one = Q::from_integer(1.into());
    let tau = ShiftedObject(vec![(0, 0), (0, 0), (1, 0), (1, 0), (1, 0)]);
    let a = MatElem::from_entries([
        ((0, 2, x1), one.clone()),
        ((0, 3, x2), one.clone()),
        ((1, 3, x1), one.clone()),
        ((1, 4, x2), one),
    ]);
    TwistedObject::new(cat, tau, a)
}
