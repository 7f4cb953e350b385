//! The quantum torus over motives, the `W = 0` integration map and the
//! conifold series identities.
//!
//! Monomials multiply as `x^{γ₁} x^{γ₂} = s^{⟨γ₁,γ₂⟩} x^{γ₁+γ₂}` (recall
//! `s² = L`), where `⟨,⟩` is the antisymmetrized Euler form
//! `χ(γ₁,γ₂) − χ(γ₂,γ₁)` with `χ(t₁,t₂) = t₁·t₂ − t₁ M t₂ᵀ`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ainfty::QuiverWithPotential;
use crate::motive::{gl_inv, grassmannian_class, Motive, MotiveError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DtError {
    #[error("series have different truncations or ranks")]
    Incompatible,
    #[error("constant coefficient is not 1")]
    NonUnitConstant,
    #[error("potential is not zero")]
    NonZeroPotential,
    #[error("coefficient at {0:?} keeps a GL denominator")]
    DenominatorNotCleared(Vec<i64>),
    #[error("dimension vector {0:?} has the wrong rank or a negative entry")]
    BadVector(Vec<i64>),
    #[error(transparent)]
    Motive(#[from] MotiveError),
}

/// The Euler form `χ(t₁,t₂) = t₁·t₂ − t₁ M t₂ᵀ` of a quiver with incidence
/// matrix `M` (`M[i][j]` arrows from `i` to `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerForm {
    pub m: Vec<Vec<i64>>,
}

impl EulerForm {
    pub fn new(m: Vec<Vec<i64>>) -> EulerForm {
        assert!(m.iter().all(|r| r.len() == m.len()), "square incidence matrix");
        EulerForm { m }
    }

    pub fn of_quiver(q: &QuiverWithPotential) -> EulerForm {
        let n = q.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for a in &q.arrows {
            m[a.src][a.tgt] += 1;
        }
        EulerForm { m }
    }

    /// Adds a framing vertex in front (index 0) with one arrow to vertex `to`
    /// of the original quiver and none back.
    pub fn framed(&self, to: usize) -> EulerForm {
        let n = self.rank();
        let mut m = vec![vec![0; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                m[i + 1][j + 1] = self.m[i][j];
            }
        }
        m[0][to + 1] = 1;
        EulerForm { m }
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn euler(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut v: i64 = (0..n).map(|i| a[i] * b[i]).sum();
        for i in 0..n {
            for j in 0..n {
                v -= a[i] * self.m[i][j] * b[j];
            }
        }
        v
    }

    pub fn skew(&self, a: &[i64], b: &[i64]) -> i64 {
        self.euler(a, b) - self.euler(b, a)
    }
}

/// A downward-closed set of dimension vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `γ ≤ bound` componentwise.
    Rect(Vec<i64>),
    /// `Σ γ_i ≤ bound`.
    TotalDim(i64),
    /// Framed vectors `(e, γ)` with `e ∈ {0, 1}` and `γ` in the inner set.
    Framed(Box<Truncation>),
}

impl Truncation {
    pub fn contains(&self, g: &[i64]) -> bool {
        if g.iter().any(|&x| x < 0) {
            return false;
        }
        match self {
            Truncation::Rect(b) => g.len() == b.len() && g.iter().zip(b).all(|(x, y)| x <= y),
            Truncation::TotalDim(d) => g.iter().sum::<i64>() <= *d,
            Truncation::Framed(inner) => !g.is_empty() && g[0] <= 1 && inner.contains(&g[1..]),
        }
    }

    /// Every vector of the set with `rank` components, in lexicographic order.
    pub fn points(&self, rank: usize) -> Vec<Vec<i64>> {
        fn cap_of(t: &Truncation) -> i64 {
            match t {
                Truncation::Rect(b) => b.iter().copied().max().unwrap_or(0),
                Truncation::TotalDim(d) => *d,
                Truncation::Framed(inner) => cap_of(inner).max(1),
            }
        }
        let cap = cap_of(self);
        let mut out = Vec::new();
        let mut cur = vec![0i64; rank];
        fn rec(t: &Truncation, cap: i64, k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == cur.len() {
                if t.contains(cur) {
                    out.push(cur.clone());
                }
                return;
            }
            for v in 0..=cap {
                cur[k] = v;
                let partial: Vec<i64> = cur.iter().take(k + 1).copied().chain(std::iter::repeat_n(0, cur.len() - k - 1)).collect();
                if !t.contains(&partial) {
                    break;
                }
                rec(t, cap, k + 1, cur, out);
            }
            cur[k] = 0;
        }
        rec(self, cap, 0, &mut cur, &mut out);
        out
    }
}

/// A truncated element `Σ c_γ x^γ` of the quantum torus.
#[derive(Clone, Debug, PartialEq)]
pub struct QTSeries {
    pub rank: usize,
    pub trunc: Truncation,
    coeffs: BTreeMap<Vec<i64>, Motive>,
}

impl QTSeries {
    pub fn zero(rank: usize, trunc: Truncation) -> QTSeries {
        QTSeries { rank, trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(rank: usize, trunc: Truncation) -> QTSeries {
        QTSeries::monomial(rank, trunc, vec![0; rank], Motive::one())
    }

    /// `c · x^γ`, or zero when `γ` lies outside the truncation.
    pub fn monomial(rank: usize, trunc: Truncation, gamma: Vec<i64>, c: Motive) -> QTSeries {
        let mut s = QTSeries::zero(rank, trunc);
        s.add_term(gamma, c);
        s
    }

    /// Adds `c · x^γ`; terms outside the truncation are dropped.
    pub fn add_term(&mut self, gamma: Vec<i64>, c: Motive) {
        assert_eq!(gamma.len(), self.rank, "dimension vector rank");
        if !self.trunc.contains(&gamma) || c.is_zero() {
            return;
        }
        let v = match self.coeffs.remove(&gamma) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(gamma, v);
        }
    }

    pub fn coeff(&self, gamma: &[i64]) -> Motive {
        self.coeffs.get(gamma).cloned().unwrap_or_else(Motive::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Motive)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &QTSeries) -> Result<QTSeries, DtError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> QTSeries {
        QTSeries { rank: self.rank, trunc: self.trunc.clone(), coeffs: self.coeffs.iter().map(|(g, c)| (g.clone(), c.neg())).collect() }
    }

    /// The same terms under a smaller truncation.
    pub fn truncated(&self, trunc: Truncation) -> QTSeries {
        let mut out = QTSeries::zero(self.rank, trunc);
        for (g, c) in &self.coeffs {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    fn compatible(&self, other: &QTSeries) -> Result<(), DtError> {
        if self.rank != other.rank || self.trunc != other.trunc {
            return Err(DtError::Incompatible);
        }
        Ok(())
    }

    /// First dimension vector whose coefficient has a nontrivial denominator.
    pub fn denominator_witness(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().find(|(_, c)| !c.is_polynomial()).map(|(g, _)| g.clone())
    }
}

/// The twisted product on a lattice with form `form`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumTorus {
    pub form: EulerForm,
}

impl QuantumTorus {
    pub fn new(form: EulerForm) -> QuantumTorus {
        QuantumTorus { form }
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// The twist exponent of `s` in `x^a x^b`.
    pub fn twist(&self, a: &[i64], b: &[i64]) -> i64 {
        self.form.skew(a, b)
    }

    pub fn mul(&self, a: &QTSeries, b: &QTSeries) -> Result<QTSeries, DtError> {
        a.compatible(b)?;
        if a.rank != self.rank() {
            return Err(DtError::Incompatible);
        }
        let mut out = QTSeries::zero(a.rank, a.trunc.clone());
        for (g1, c1) in &a.coeffs {
            for (g2, c2) in &b.coeffs {
                let g: Vec<i64> = g1.iter().zip(g2).map(|(x, y)| x + y).collect();
                if !out.trunc.contains(&g) {
                    continue;
                }
                let c = c1.mul_naive(c2).mul_naive(&Motive::s_pow(self.twist(g1, g2)));
                out.add_term(g, c);
            }
        }
        Ok(out)
    }

    /// Product of a list, left to right.
    pub fn product(&self, factors: &[&QTSeries]) -> Result<QTSeries, DtError> {
        let first = factors.first().ok_or(DtError::Incompatible)?;
        let mut acc = QTSeries::one(first.rank, first.trunc.clone());
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Two-sided inverse of a series with constant term 1, by
    /// `b ← 1 − u·b` where `a = 1 + u`.
    pub fn inverse(&self, a: &QTSeries) -> Result<QTSeries, DtError> {
        let zero = vec![0; a.rank];
        if a.coeff(&zero) != Motive::one() {
            return Err(DtError::NonUnitConstant);
        }
        let one = QTSeries::one(a.rank, a.trunc.clone());
        let u = a.add(&one.neg())?;
        let mut b = one.clone();
        loop {
            let next = one.add(&self.mul(&u, &b)?.neg())?;
            if next == b {
                return Ok(b);
            }
            b = next;
        }
    }

    /// `a · b · a⁻¹`.
    pub fn conjugate(&self, a: &QTSeries, b: &QTSeries) -> Result<QTSeries, DtError> {
        let inv = self.inverse(a)?;
        self.mul(&self.mul(a, b)?, &inv)
    }
}

/// Coefficient of `x^γ` in the `W = 0` integration map:
/// `s^{χ(γ,γ)} · L^{Σ_a γ(src a) γ(tgt a)} · ∏_i [GL_{γ_i}]⁻¹`.
pub fn integrate_w0(q: &QuiverWithPotential, gamma: &[i64]) -> Result<Motive, DtError> {
    if !q.potential.is_empty() {
        return Err(DtError::NonZeroPotential);
    }
    if gamma.len() != q.vertices.len() || gamma.iter().any(|&g| g < 0) {
        return Err(DtError::BadVector(gamma.to_vec()));
    }
    let form = EulerForm::of_quiver(q);
    let rep: i64 = q.arrows.iter().map(|a| gamma[a.src] * gamma[a.tgt]).sum();
    let mut c = Motive::s_pow(form.euler(gamma, gamma)).mul_naive(&Motive::lef_pow(rep));
    for &g in gamma {
        if g > 0 {
            c = c.mul_naive(&gl_inv(g as u32));
        }
    }
    Ok(c)
}

/// `Σ_γ integrate_w0(γ) x^γ` over the truncation.
pub fn w0_series(q: &QuiverWithPotential, trunc: &Truncation) -> Result<QTSeries, DtError> {
    let n = q.vertices.len();
    let mut s = QTSeries::zero(n, trunc.clone());
    for g in trunc.points(n) {
        let c = integrate_w0(q, &g)?;
        s.add_term(g, c);
    }
    Ok(s)
}

/// `P(direction) = Σ_{i ≥ 0} L^{i²/2} [GL_i]⁻¹ x^{i·direction}`, the series of
/// a spherical object and its direct sums.
pub fn spherical_series(direction: &[i64], trunc: &Truncation) -> QTSeries {
    let rank = direction.len();
    let mut s = QTSeries::one(rank, trunc.clone());
    if direction.iter().all(|&d| d == 0) {
        return s;
    }
    for i in 1.. {
        let g: Vec<i64> = direction.iter().map(|d| d * i).collect();
        if !trunc.contains(&g) {
            break;
        }
        s.add_term(g, Motive::s_pow(i * i).mul_naive(&gl_inv(i as u32)));
    }
    s
}

/// Incidence matrix of the conifold quiver: two arrows each way.
pub fn conifold_form() -> EulerForm {
    EulerForm::new(vec![vec![0, 2], vec![2, 0]])
}

/// The conifold lattice framed at the first vertex; coordinates `(∞, 1, 2)`.
pub fn framed_conifold() -> QuantumTorus {
    QuantumTorus::new(conifold_form().framed(0))
}

/// `L^{-i(n-i)/2} [Gr(n, i)]`, the Grassmannian class normalized by its
/// dimension so that it is palindromic in `s`.
pub fn virtual_grassmannian(n: i64, i: i64) -> Result<Motive, DtError> {
    Ok(Motive::s_pow(-i * (n - i)).mul_naive(&grassmannian_class(n, i)?))
}

/// Framed direction `(0, a, b)` of a spherical conifold module.
fn framed_dir(a: i64, b: i64) -> Vec<i64> {
    vec![0, a, b]
}

/// `Σ_{i ≤ n} L^{-i(n-i)/2} [Gr(n,i)] x^{(1, in, i(n+1))}`, written with plain
/// monomials.
pub fn conjugation_rhs(n: i64, trunc: &Truncation) -> Result<QTSeries, DtError> {
    let mut s = QTSeries::zero(3, trunc.clone());
    for i in 0..=n {
        s.add_term(vec![1, i * n, i * (n + 1)], virtual_grassmannian(n, i)?);
    }
    Ok(s)
}

/// The conjugation identity `P(n,n+1) x^{(1,0,0)} P(n,n+1)⁻¹ =`
/// [`conjugation_rhs`]: the framed series of quotients of `n` copies of the
/// framing line is a sum of Grassmannians.
pub fn bridgeland_conjugation_check(n: i64, trunc: &Truncation) -> Result<bool, DtError> {
    let t = framed_conifold();
    let x = QTSeries::monomial(3, trunc.clone(), vec![1, 0, 0], Motive::one());
    let p = spherical_series(&framed_dir(n, n + 1), trunc);
    Ok(t.conjugate(&p, &x)? == conjugation_rhs(n, trunc)?)
}

/// The right factor `Σ_{i ≤ a} L^{i²/2} [Gr(a,i)] x^{i(0,a,b)}` with
/// `x^{(1,0,0)} · factor = P x^{(1,0,0)} P⁻¹` for the spherical series `P`
/// in direction `(0, a, b)`. Only `a`, the pairing of the framing arrow with
/// the direction, enters.
pub fn conjugation_factor(a: i64, b: i64, trunc: &Truncation) -> Result<QTSeries, DtError> {
    let dir = framed_dir(a, b);
    let mut s = QTSeries::zero(3, trunc.clone());
    for i in 0..=a {
        s.add_term(dir.iter().map(|d| d * i).collect(), Motive::s_pow(i * i).mul_naive(&grassmannian_class(a, i)?));
    }
    Ok(s)
}

/// Spherical slopes `(a, b)` in HN order inside the unframed `trunc`:
/// `(0,1), (1,2), (2,3), …` then `…, (3,2), (2,1), (1,0)`. The point
/// stratum at slope `(1,1)` is not spherical and is left out.
pub fn hn_slopes(trunc: &Truncation) -> Vec<(i64, i64)> {
    let fits = |a: i64, b: i64| trunc.contains(&[a, b]);
    let mut left = Vec::new();
    let mut n = 0;
    while fits(n, n + 1) {
        left.push((n, n + 1));
        n += 1;
    }
    let mut right = Vec::new();
    let mut n = 0;
    while fits(n + 1, n) {
        right.push((n + 1, n));
        n += 1;
    }
    right.reverse();
    left.extend(right);
    left
}

/// The two rearrangements of the framed series, as coefficients
/// `c_{a,b}` of the monomials `x^{(1,a,b)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HnReport {
    pub by_conjugation: QTSeries,
    pub by_closed_forms: QTSeries,
}

impl HnReport {
    pub fn agrees(&self) -> bool {
        self.by_conjugation == self.by_closed_forms
    }
}

/// The `x^{(1,·,·)}` part of a framed series, as a series on the unframed
/// lattice.
fn framed_part(s: &QTSeries, trunc: &Truncation) -> QTSeries {
    let mut out = QTSeries::zero(2, trunc.clone());
    for (g, c) in s.terms() {
        if g[0] == 1 {
            out.add_term(g[1..].to_vec(), c.clone());
        }
    }
    out
}

fn check_conifold_trunc(trunc: &Truncation) -> Result<Truncation, DtError> {
    let zero = [0i64, 0];
    if !trunc.contains(&zero) || matches!(trunc, Truncation::Framed(_)) || matches!(trunc, Truncation::Rect(b) if b.len() != 2) {
        return Err(DtError::Incompatible);
    }
    Ok(Truncation::Framed(Box::new(trunc.clone())))
}

/// `M x^{(1,0,0)} M⁻¹` with `M` the ordered product of spherical factors at
/// `slopes`, read off as coefficients of `x^{(1,a,b)}` for `(a,b)` in
/// `trunc`. Fails with `DenominatorNotCleared` if a coefficient keeps a GL
/// denominator.
pub fn hilbert_by_conjugation(trunc: &Truncation, slopes: &[(i64, i64)]) -> Result<QTSeries, DtError> {
    let framed = check_conifold_trunc(trunc)?;
    let t = framed_conifold();
    let mut m = QTSeries::one(3, framed.clone());
    for &(a, b) in slopes {
        m = t.mul(&m, &spherical_series(&framed_dir(a, b), &framed))?;
    }
    let x = QTSeries::monomial(3, framed.clone(), vec![1, 0, 0], Motive::one());
    let h = framed_part(&t.conjugate(&m, &x)?, trunc);
    match h.denominator_witness() {
        Some(g) => Err(DtError::DenominatorNotCleared(g)),
        None => Ok(h),
    }
}

/// `x^{(1,0,0)}` times the ordered product of [`conjugation_factor`]s,
/// read off like [`hilbert_by_conjugation`].
pub fn hilbert_by_closed_forms(trunc: &Truncation, slopes: &[(i64, i64)]) -> Result<QTSeries, DtError> {
    let framed = check_conifold_trunc(trunc)?;
    let t = framed_conifold();
    let mut h = QTSeries::monomial(3, framed.clone(), vec![1, 0, 0], Motive::one());
    for &(a, b) in slopes {
        h = t.mul(&h, &conjugation_factor(a, b, &framed)?)?;
    }
    Ok(framed_part(&h, trunc))
}

/// Both rearrangements; `closed_slopes` feeds the second side so that a
/// mismatch between the two factor lists can be staged.
pub fn hn_rearrangements(trunc: &Truncation, slopes: &[(i64, i64)], closed_slopes: &[(i64, i64)]) -> Result<HnReport, DtError> {
    Ok(HnReport { by_conjugation: hilbert_by_conjugation(trunc, slopes)?, by_closed_forms: hilbert_by_closed_forms(trunc, closed_slopes)? })
}

/// Checks that the two rearrangements of the framed Hilbert series over the
/// ordered spherical factors at `slopes` agree inside `trunc`, with
/// polynomial coefficients.
pub fn hn_factorization_check(trunc: &Truncation, slopes: &[(i64, i64)]) -> Result<bool, DtError> {
    Ok(hn_rearrangements(trunc, slopes, slopes)?.agrees())
}
