//! The endomorphism algebra of a twisted object, its cyclic Hodge splitting
//! and homotopy transfer to a minimal model.

use std::collections::{BTreeMap, HashMap};

use super::{tw_b, TwistedError, TwistedObject};
use crate::ainfty::{AInftyCategory, BasisElt, MatElem};
use crate::coeff::{Coeff, Q};
use crate::linalg::{complement_within, Matrix};
use crate::poly::Poly;

/// `End(E)` with the twisted operations `b^A`, in the basis of all entries
/// `(i, j, e)` of `τ × τ` matrices.
pub struct EndAlgebra<'a> {
    pub cat: &'a AInftyCategory,
    pub obj: TwistedObject,
    pub basis: Vec<(usize, usize, usize)>,
    pub degrees: Vec<i32>,
    index: HashMap<(usize, usize, usize), usize>,
}

fn sign(k: i32) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

impl<'a> EndAlgebra<'a> {
    pub fn new(cat: &'a AInftyCategory, obj: TwistedObject) -> EndAlgebra<'a> {
        let tau = &obj.tau;
        let mut basis = Vec::new();
        for i in 0..tau.len() {
            for j in 0..tau.len() {
                for (e, b) in cat.basis.iter().enumerate() {
                    if b.src == tau.obj(j) && b.tgt == tau.obj(i) {
                        basis.push((i, j, e));
                    }
                }
            }
        }
        let degrees = basis.iter().map(|&(i, j, e)| cat.basis[e].degree - tau.shift(i) + tau.shift(j)).collect();
        let index = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        EndAlgebra { cat, obj, basis, degrees, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis indices in degree `k`.
    pub fn degree_indices(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn degree_range(&self) -> (i32, i32) {
        let lo = self.degrees.iter().copied().min().unwrap_or(0);
        let hi = self.degrees.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    pub fn to_mat<C: Coeff>(&self, v: &[C]) -> MatElem<C> {
        MatElem::from_entries(
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (self.basis[k], c.clone())),
        )
    }

    pub fn from_mat<C: Coeff>(&self, m: &MatElem<C>) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        for (k, c) in m.entries() {
            v[self.index[k]] = c.clone();
        }
        v
    }

    pub fn unit_vector(&self, k: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[k] = Q::one();
        v
    }

    /// `b^A_n` on coordinate vectors, inputs in display order.
    pub fn b<C: Coeff>(&self, inputs: &[&[C]]) -> Vec<C> {
        let a: MatElem<C> = self.obj.a.map(C::from_q);
        let mats: Vec<MatElem<C>> = inputs.iter().map(|v| self.to_mat(v)).collect();
        let refs: Vec<&MatElem<C>> = mats.iter().collect();
        self.from_mat(&tw_b(self.cat, &self.obj.tau, &a, &refs))
    }

    /// `b^A_1` as a matrix on the full basis.
    pub fn d_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Q>> = (0..self.dim()).map(|k| self.b(&[&self.unit_vector(k)])).collect();
        Matrix::from_cols(self.dim(), &cols)
    }

    /// `d` restricted to degree `k`, as a map into degree `k + 1`
    /// (rows and columns in the order of `degree_indices`).
    pub fn d_block(&self, k: i32) -> Matrix {
        let d = self.d_matrix();
        let (src, tgt) = (self.degree_indices(k), self.degree_indices(k + 1));
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (a, &r) in tgt.iter().enumerate() {
            for (b, &c) in src.iter().enumerate() {
                m.set(a, b, d.get(r, c).clone());
            }
        }
        m
    }

    /// The pairing `η` on basis elements.
    pub fn pair_basis(&self, x: usize, y: usize) -> Q {
        let (i, j, e) = self.basis[x];
        let (k, l, f) = self.basis[y];
        if k != j || l != i {
            return Q::zero();
        }
        let tau = &self.obj.tau;
        sign(tau.shift(i) + tau.shift(j)) * self.cat.pair(e, f)
    }

    pub fn pair<C: Coeff>(&self, x: &[C], y: &[C]) -> C {
        let mut acc = C::zero();
        for (a, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let (i, j, e) = self.basis[a];
            for (&(e2, f), w) in self.cat.pairing().into_iter().flat_map(|p| p.range((e, 0)..(e + 1, 0))) {
                debug_assert_eq!(e2, e);
                let Some(&b) = self.index.get(&(j, i, f)) else { continue };
                if y[b].is_zero() {
                    continue;
                }
                let tau = &self.obj.tau;
                let s = sign(tau.shift(i) + tau.shift(j)) * w;
                acc = acc.add(&cx.mul(&y[b]).scale_q(&s));
            }
        }
        acc
    }

    /// Embeds a vector supported on `idx` (local coordinates) into the full space.
    fn embed(&self, idx: &[usize], local: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (&i, c) in idx.iter().zip(local) {
            v[i] = c.clone();
        }
        v
    }

    /// Splitting `H ⊕ V_1 ⊕ V_2` with `V_2 = d(V_1)`, `V_1 ⊥ H`, `V_1`
    /// isotropic, chosen by lowest-index pivots in each degree.
    pub fn hodge_splitting(&self) -> Result<HodgeSplitting, TwistedError> {
        let (lo, hi) = self.degree_range();
        let d = self.d_matrix();
        if !d.mul(&d).is_zero() {
            return Err(TwistedError::InvalidSplitting("differential does not square to zero".into()));
        }
        let mut kernels: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
        let mut images: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
        for k in lo..=hi {
            let idx = self.degree_indices(k);
            let block = self.d_block(k);
            let ker: Vec<Vec<Q>> = block.kernel().iter().map(|v| self.embed(&idx, v)).collect();
            kernels.insert(k, ker);
            let im: Vec<Vec<Q>> = idx.iter().map(|&c| d.col(c)).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            images.insert(k + 1, im);
        }
        let n = self.dim();
        let mut h: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
        for k in lo..=hi {
            let im = images.get(&k).cloned().unwrap_or_default();
            h.insert(k, complement_within(&im, &kernels[&k], n));
        }
        let mut v1: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
        for k in lo..=hi {
            let idx = self.degree_indices(k);
            // degree-k vectors orthogonal to H in degree 3 - k
            let partners = h.get(&(3 - k)).cloned().unwrap_or_default();
            let cons = Matrix::from_rows(
                partners
                    .iter()
                    .map(|p| idx.iter().map(|&c| self.pair(&self.unit_vector(c), p)).collect())
                    .collect(),
            );
            let perp: Vec<Vec<Q>> = if partners.is_empty() {
                idx.iter().map(|&c| self.unit_vector(c)).collect()
            } else {
                cons.kernel().iter().map(|v| self.embed(&idx, v)).collect()
            };
            // H^⊥ meets ker d in im d, so a complement of im d in H^⊥ complements ker d
            let im = images.get(&k).cloned().unwrap_or_default();
            let comp = complement_within(&im, &perp, n);
            if comp.len() + kernels[&k].len() != idx.len() {
                return Err(TwistedError::InvalidSplitting(format!("no orthogonal complement in degree {k}")));
            }
            v1.insert(k, comp);
        }
        // make V_1 isotropic by moving V_1 in degree 3 - k along V_2
        for k in lo..=hi {
            if k >= 3 - k || !v1.contains_key(&(3 - k)) {
                continue;
            }
            let low = v1[&k].clone();
            let u: Vec<Vec<Q>> = v1.get(&(2 - k)).map(|vs| vs.iter().map(|v| d.apply(v)).collect()).unwrap_or_default();
            if low.is_empty() || u.is_empty() {
                continue;
            }
            let p = Matrix::from_rows(low.iter().map(|x| u.iter().map(|y| self.pair(x, y)).collect()).collect());
            let pinv = p
                .inverse()
                .ok_or_else(|| TwistedError::InvalidSplitting(format!("V1/V2 pairing degenerate in degree {k}")))?;
            let high = v1.get_mut(&(3 - k)).unwrap();
            let g = Matrix::from_rows(low.iter().map(|x| high.iter().map(|y| self.pair(x, y)).collect()).collect());
            let c = pinv.mul(&g);
            for (j, v) in high.iter_mut().enumerate() {
                for (m, um) in u.iter().enumerate() {
                    let f = c.get(m, j);
                    if !f.is_zero() {
                        for (x, y) in v.iter_mut().zip(um) {
                            *x -= f * y;
                        }
                    }
                }
            }
        }
        let mut split = HodgeSplitting { h: vec![], v1: vec![], v2: vec![], h_deg: vec![], v1_deg: vec![] };
        for k in lo..=hi {
            for v in &h[&k] {
                split.h.push(v.clone());
                split.h_deg.push(k);
            }
            for v in &v1[&k] {
                split.v2.push(d.apply(v));
                split.v1.push(v.clone());
                split.v1_deg.push(k);
            }
        }
        split.finish(self)?;
        Ok(split)
    }

    /// `W_E(x) = Σ (1/(n+1)) η(b^A_n(x, …, x), x)` for `x` in the span of
    /// `vectors`, with variable `i` the coordinate along `vectors[i]`.
    pub fn potential_on(&self, vectors: &[Vec<Q>]) -> Poly {
        let mut x = vec![Poly::default(); self.dim()];
        for (var, v) in vectors.iter().enumerate() {
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    x[k] = x[k].add(&Poly::var(var).scale(c));
                }
            }
        }
        let mut acc = Poly::default();
        for n in 1..=self.cat.max_arity() {
            let inputs: Vec<&[Poly]> = vec![&x; n];
            let b = self.b(&inputs);
            acc = acc.add(&self.pair(&b, &x).scale(&Q::new(1.into(), ((n + 1) as i64).into())));
        }
        acc
    }
}

/// `End(E) = H ⊕ V_1 ⊕ V_2` with `d: V_1 → V_2` the identity on the listed bases.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeSplitting {
    pub h: Vec<Vec<Q>>,
    pub v1: Vec<Vec<Q>>,
    pub v2: Vec<Vec<Q>>,
    pub h_deg: Vec<i32>,
    pub v1_deg: Vec<i32>,
}

impl HodgeSplitting {
    fn columns(&self) -> Vec<Vec<Q>> {
        self.h.iter().chain(&self.v1).chain(&self.v2).cloned().collect()
    }

    fn finish(&self, end: &EndAlgebra) -> Result<(), TwistedError> {
        let cols = self.columns();
        if cols.len() != end.dim() || Matrix::from_cols(end.dim(), &cols).det().is_zero() {
            return Err(TwistedError::InvalidSplitting("summands do not span".into()));
        }
        Ok(())
    }

    /// Basis of `H` in degree `k`.
    pub fn h_in_degree(&self, k: i32) -> Vec<Vec<Q>> {
        self.h.iter().zip(&self.h_deg).filter(|(_, &d)| d == k).map(|(v, _)| v.clone()).collect()
    }

    pub fn v1_in_degree(&self, k: i32) -> Vec<Vec<Q>> {
        self.v1.iter().zip(&self.v1_deg).filter(|(_, &d)| d == k).map(|(v, _)| v.clone()).collect()
    }

    /// `V_2` vectors in degree `k`.
    pub fn v2_in_degree(&self, k: i32) -> Vec<Vec<Q>> {
        self.v2.iter().zip(&self.v1_deg).filter(|(_, &d)| d + 1 == k).map(|(v, _)| v.clone()).collect()
    }

    /// Checks the splitting against `end`'s differential.
    pub fn validate(&self, end: &EndAlgebra) -> Result<(), TwistedError> {
        self.finish(end)?;
        let d = end.d_matrix();
        for v in &self.h {
            if d.apply(v).iter().any(|x| !x.is_zero()) {
                return Err(TwistedError::InvalidSplitting("H is not closed".into()));
            }
        }
        for (v, w) in self.v1.iter().zip(&self.v2) {
            if &d.apply(v) != w {
                return Err(TwistedError::InvalidSplitting("V2 is not d(V1)".into()));
            }
        }
        Ok(())
    }
}

/// Transfer data `(ι, π, h)` of a Hodge splitting and the tree formula
/// `p_n = Σ b^A_k(λ_{i_1}, …, λ_{i_k})` with `λ_1 = ι`, `λ_i = h p_i`.
pub struct Transfer<'e, 'a> {
    pub end: &'e EndAlgebra<'a>,
    pub split: HodgeSplitting,
    /// Inverse of the change of basis `[H | V_1 | V_2]`.
    coords: Matrix,
}

/// Sets up homotopy transfer along `split`, with `h = -(d|V_1)^{-1}` on `V_2`.
pub fn homotopy_transfer<'e, 'a>(end: &'e EndAlgebra<'a>, split: &HodgeSplitting) -> Result<Transfer<'e, 'a>, TwistedError> {
    split.validate(end)?;
    let s = Matrix::from_cols(end.dim(), &split.columns());
    let coords = s.inverse().ok_or_else(|| TwistedError::InvalidSplitting("singular basis".into()))?;
    Ok(Transfer { end, split: split.clone(), coords })
}

impl Transfer<'_, '_> {
    fn coordinate<C: Coeff>(&self, v: &[C], row: usize) -> C {
        let mut acc = C::zero();
        for (k, c) in v.iter().enumerate() {
            let w = self.coords.get(row, k);
            if !w.is_zero() && !c.is_zero() {
                acc = acc.add(&c.scale_q(w));
            }
        }
        acc
    }

    /// `π`: coordinates along `H`.
    pub fn project<C: Coeff>(&self, v: &[C]) -> Vec<C> {
        (0..self.split.h.len()).map(|r| self.coordinate(v, r)).collect()
    }

    pub fn include<C: Coeff>(&self, h: &[C]) -> Vec<C> {
        let mut v = vec![C::zero(); self.end.dim()];
        for (c, hv) in h.iter().zip(&self.split.h) {
            for (k, x) in hv.iter().enumerate() {
                if !x.is_zero() {
                    v[k] = v[k].add(&c.scale_q(x));
                }
            }
        }
        v
    }

    /// `h(v) = -Σ_m (V_2 coordinate m) · V_1[m]`.
    pub fn homotopy<C: Coeff>(&self, v: &[C]) -> Vec<C> {
        let (nh, n1) = (self.split.h.len(), self.split.v1.len());
        let mut out = vec![C::zero(); self.end.dim()];
        for m in 0..n1 {
            let c = self.coordinate(v, nh + n1 + m);
            if c.is_zero() {
                continue;
            }
            for (k, x) in self.split.v1[m].iter().enumerate() {
                if !x.is_zero() {
                    out[k] = out[k].sub(&c.scale_q(x));
                }
            }
        }
        out
    }

    fn p_tuple(&self, tuple: &[usize], memo: &mut HashMap<Vec<usize>, Vec<Q>>) -> Vec<Q> {
        let n = tuple.len();
        let max = self.end.cat.max_arity();
        let mut acc = vec![Q::zero(); self.end.dim()];
        // compositions of the tuple into k ≥ 2 contiguous blocks
        let mut cuts: Vec<usize> = Vec::new();
        self.blocks(tuple, 0, &mut cuts, max, memo, &mut acc);
        debug_assert!(n >= 2);
        acc
    }

    fn lambda(&self, tuple: &[usize], memo: &mut HashMap<Vec<usize>, Vec<Q>>) -> Vec<Q> {
        if let Some(v) = memo.get(tuple) {
            return v.clone();
        }
        let v = if tuple.len() == 1 {
            self.split.h[tuple[0]].clone()
        } else {
            let p = self.p_tuple(tuple, memo);
            self.homotopy(&p)
        };
        memo.insert(tuple.to_vec(), v.clone());
        v
    }

    fn blocks(
        &self,
        tuple: &[usize],
        start: usize,
        cuts: &mut Vec<usize>,
        max: usize,
        memo: &mut HashMap<Vec<usize>, Vec<Q>>,
        acc: &mut [Q],
    ) {
        let n = tuple.len();
        if start == n {
            let k = cuts.len();
            if k < 2 {
                return;
            }
            let mut bounds = vec![0];
            bounds.extend(cuts.iter().copied());
            let lambdas: Vec<Vec<Q>> = (0..k).map(|b| self.lambda(&tuple[bounds[b]..bounds[b + 1]], memo)).collect();
            let refs: Vec<&[Q]> = lambdas.iter().map(Vec::as_slice).collect();
            for (a, x) in acc.iter_mut().zip(self.end.b(&refs)) {
                *a += x;
            }
            return;
        }
        if cuts.len() >= max {
            return;
        }
        for end in start + 1..=n {
            if start == 0 && end == n {
                continue;
            }
            cuts.push(end);
            self.blocks(tuple, end, cuts, max, memo, acc);
            cuts.pop();
        }
    }

    /// Transferred `b_n` on a tuple of `H` basis indices in display order.
    pub fn op(&self, tuple: &[usize]) -> Vec<Q> {
        if tuple.len() < 2 {
            return vec![Q::zero(); self.split.h.len()];
        }
        let mut memo = HashMap::new();
        self.project(&self.p_tuple(tuple, &mut memo))
    }

    /// The minimal model as a one-object category with basis `H`, its
    /// operations up to arity `n_max`, and the restricted pairing.
    pub fn to_category(&self, n_max: usize) -> AInftyCategory {
        let nh = self.split.h.len();
        let basis: Vec<BasisElt> = (0..nh)
            .map(|i| BasisElt { label: format!("h{i}"), src: 0, tgt: 0, degree: self.split.h_deg[i] })
            .collect();
        let mut cat = AInftyCategory::new(vec!["E".into()], basis);
        let mut memo = HashMap::new();
        let mut tuple = Vec::new();
        for n in 2..=n_max {
            self.fill(&mut cat, n, &mut tuple, &mut memo);
        }
        let mut pairing = BTreeMap::new();
        for i in 0..nh {
            for j in 0..nh {
                let v = self.end.pair(&self.split.h[i], &self.split.h[j]);
                if !v.is_zero() {
                    pairing.insert((i, j), v);
                }
            }
        }
        cat.set_pairing(pairing);
        cat
    }

    fn fill(&self, cat: &mut AInftyCategory, n: usize, tuple: &mut Vec<usize>, memo: &mut HashMap<Vec<usize>, Vec<Q>>) {
        if tuple.len() == n {
            let out = self.project(&self.p_tuple(tuple, memo));
            for (o, c) in out.into_iter().enumerate() {
                if !c.is_zero() {
                    cat.add_op(tuple, o, c).expect("one object");
                }
            }
            return;
        }
        for i in 0..self.split.h.len() {
            tuple.push(i);
            self.fill(cat, n, tuple, memo);
            tuple.pop();
        }
    }

    /// Transferred potential on `H` in degree 1 to total degree `order`;
    /// variable `i` is the coordinate along the `i`-th degree-1 vector of `H`.
    pub fn potential(&self, order: u32) -> Poly {
        let h1: Vec<usize> = (0..self.split.h.len()).filter(|&i| self.split.h_deg[i] == 1).collect();
        let mut x = vec![Poly::default(); self.end.dim()];
        for (var, &i) in h1.iter().enumerate() {
            for (k, c) in self.split.h[i].iter().enumerate() {
                if !c.is_zero() {
                    x[k] = x[k].add(&Poly::var(var).scale(c));
                }
            }
        }
        let max = self.end.cat.max_arity();
        // λ_n and p_n for equal inputs x
        let mut lambdas: Vec<Vec<Poly>> = vec![vec![], x.clone()];
        let mut acc = Poly::default();
        for n in 2..order as usize {
            let mut p = vec![Poly::default(); self.end.dim()];
            let mut parts = Vec::new();
            compositions(n, max, &mut parts, &mut |parts| {
                let refs: Vec<&[Poly]> = parts.iter().map(|&i| lambdas[i].as_slice()).collect();
                for (a, v) in p.iter_mut().zip(self.end.b(&refs)) {
                    *a = a.add(&v);
                }
            });
            let proj = self.include(&self.project(&p));
            acc = acc.add(&self.end.pair(&proj, &x).scale(&Q::new(1.into(), ((n + 1) as i64).into())));
            lambdas.push(self.homotopy(&p));
        }
        acc.truncate(order)
    }
}

/// Calls `f` on every composition of `n` into between 2 and `max` positive parts.
fn compositions(n: usize, max: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let used: usize = parts.iter().sum();
    if used == n {
        if parts.len() >= 2 {
            f(parts);
        }
        return;
    }
    if parts.len() == max {
        return;
    }
    for k in 1..=n - used {
        if parts.is_empty() && k == n {
            continue;
        }
        parts.push(k);
        compositions(n, max, parts, f);
        parts.pop();
    }
}
