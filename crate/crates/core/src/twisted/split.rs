//! Splitting a potential as `W_min(h) + Q(y)` by order-by-order flows.
//!
//! At order `k` the terms containing a `y` variable are written as
//! `Σ_j y_j g_j` (each monomial assigned to its lowest-index `y`), and the
//! substitution `y ← y - B⁻¹ g` removes them, where `Q(y) = ½ yᵀ B y`. New
//! terms only appear in higher orders.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::TwistedError;
use crate::coeff::q;
use crate::linalg::Matrix;
use crate::poly::{Mono, Poly};

/// Variables of a potential grouped as minimal (`h`), quadratic (`y`) and
/// contractible (`z`) directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSplit {
    pub h: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicSplit {
    pub order: u32,
    pub w_min: Poly,
    pub q: Poly,
    /// `Φ`: images of the `y` variables, with `W ∘ Φ = W_min + Q` to the order.
    pub coordinate_change: BTreeMap<usize, Poly>,
    /// `Φ⁻¹` on the `y` variables.
    pub inverse: BTreeMap<usize, Poly>,
}

impl CyclicSplit {
    pub fn split_form(&self) -> Poly {
        self.w_min.add(&self.q)
    }
}

fn compose(outer: &BTreeMap<usize, Poly>, inner: &BTreeMap<usize, Poly>, d: u32) -> BTreeMap<usize, Poly> {
    // (outer ∘ inner)(v) = outer(inner(v))
    let mut out: BTreeMap<usize, Poly> = outer.iter().map(|(&v, p)| (v, p.substitute(inner, Some(d)))).collect();
    for (&v, p) in inner {
        out.entry(v).or_insert_with(|| p.clone());
    }
    out
}

/// Splits `potential` to total degree `order`.
pub fn cyclic_split(potential: &Poly, vars: &VarSplit, order: u32) -> Result<CyclicSplit, TwistedError> {
    let w = potential.truncate(order);
    if w.is_zero() {
        return Ok(CyclicSplit { order, w_min: Poly::default(), q: Poly::default(), coordinate_change: BTreeMap::new(), inverse: BTreeMap::new() });
    }
    if w.low_degree().unwrap_or(2) < 2 {
        return Err(TwistedError::LowOrder);
    }
    let quad = w.homogeneous(2);
    let others: Vec<usize> = vars.h.iter().chain(&vars.z).copied().collect();
    if quad.involves(&others) {
        return Err(TwistedError::DegenerateQuadratic);
    }
    let ny = vars.y.len();
    let mut b = Matrix::zeros(ny, ny);
    for (a, &ya) in vars.y.iter().enumerate() {
        for (c, &yc) in vars.y.iter().enumerate() {
            let m = Mono::var(ya).mul(&Mono::var(yc));
            let coef = quad.coeff(&m);
            let v = if a == c { coef * q(2) } else { coef };
            b.set(a, c, v);
        }
    }
    let binv = if ny == 0 {
        Matrix::zeros(0, 0)
    } else {
        b.inverse().ok_or(TwistedError::DegenerateQuadratic)?
    };
    let mut current = w.clone();
    let mut phi: BTreeMap<usize, Poly> = BTreeMap::new();
    for k in 3..=order {
        let part = current.homogeneous(k);
        let mut g: Vec<Poly> = vec![Poly::default(); ny];
        for (m, c) in part.terms() {
            if let Some(a) = vars.y.iter().position(|&yv| m.exp(yv) > 0) {
                g[a].add_term(m.div_var(vars.y[a]).expect("variable present"), c.clone());
            }
        }
        if g.iter().all(Poly::is_zero) {
            continue;
        }
        let mut step = BTreeMap::new();
        for (a, &ya) in vars.y.iter().enumerate() {
            let mut delta = Poly::default();
            for (c, gc) in g.iter().enumerate() {
                let f = binv.get(a, c);
                if !f.is_zero() {
                    delta = delta.sub(&gc.scale(f));
                }
            }
            step.insert(ya, Poly::var(ya).add(&delta));
        }
        current = current.substitute(&step, Some(order));
        phi = compose(&phi, &step, order);
    }
    let y_part = current.sub(&quad);
    let ys = vars.y.clone();
    if y_part.involves(&ys) {
        return Err(TwistedError::InvalidSplitting("y terms survive the flow".into()));
    }
    if y_part.involves(&vars.z) {
        return Err(TwistedError::ResidualDependence);
    }
    let inverse = invert(&phi, &vars.y, order);
    Ok(CyclicSplit { order, w_min: y_part, q: quad, coordinate_change: phi, inverse })
}

/// Inverse of `y ↦ y + ψ` by fixed-point iteration `y ← u - ψ(u, y)`.
fn invert(phi: &BTreeMap<usize, Poly>, ys: &[usize], order: u32) -> BTreeMap<usize, Poly> {
    let psi: BTreeMap<usize, Poly> = phi.iter().map(|(&v, p)| (v, p.sub(&Poly::var(v)))).collect();
    let mut inv: BTreeMap<usize, Poly> = ys.iter().map(|&v| (v, Poly::var(v))).collect();
    for _ in 0..=order {
        let next: BTreeMap<usize, Poly> = ys
            .iter()
            .map(|&v| {
                let corr = psi.get(&v).map_or_else(Poly::default, |p| p.substitute(&inv, Some(order)));
                (v, Poly::var(v).sub(&corr).truncate(order))
            })
            .collect();
        if next == inv {
            break;
        }
        inv = next;
    }
    inv
}

/// Checks both directions of a split against the original potential.
pub fn verify_split(potential: &Poly, split: &CyclicSplit) -> bool {
    let d = split.order;
    let w = potential.truncate(d);
    let forward = w.substitute(&split.coordinate_change, Some(d)).truncate(d);
    let back = split.split_form().substitute(&split.inverse, Some(d)).truncate(d);
    forward == split.split_form().truncate(d) && back == w
}
