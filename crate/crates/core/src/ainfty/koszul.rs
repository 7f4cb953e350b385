//! The Koszul-dual cyclic A∞-category `D(Q, W)`.
//!
//! Basis per vertex `v`: the unit `1_v` (degree 0) and `w_v` (degree 3).
//! Per arrow `a: u → v`: `a*` in degree 1 from `v` to `u` and `a` in degree 2
//! from `u` to `v`. Nonzero operations:
//!
//! * `b_2(1, y) = y` and `b_2(y, 1) = (-1)^{|y|} y`;
//! * `b_2(a, a*) = w_v` and `b_2(a*, a) = -w_u`;
//! * `b_n(d_n*, …, d_1*) = Σ_c μW(d_n ⋯ d_1 c) · c`, where `μW` averages each
//!   term of `W` over its `m` rotations with weight `1/m` and the word is
//!   read in traversal order.
//!
//! With this normalization the one-loop potential `a⁴` gives
//! `b_3(a*, a*, a*) = a` and `W(x·a*) = x⁴/4`.

use std::collections::BTreeMap;

use num_traits::One;

use super::quiver::QuiverWithPotential;
use super::{AInftyCategory, BasisElt};
use crate::coeff::Q;

/// Builds `D(Q, W)` with its strict units and degree-3 pairing.
pub fn koszul_dual(q: &QuiverWithPotential) -> AInftyCategory {
    let nv = q.vertices.len();
    let na = q.arrows.len();
    let mut basis = Vec::new();
    for v in &q.vertices {
        basis.push(BasisElt { label: format!("1_{v}"), src: 0, tgt: 0, degree: 0 });
    }
    for (i, b) in basis.iter_mut().enumerate() {
        b.src = i;
        b.tgt = i;
    }
    for a in &q.arrows {
        basis.push(BasisElt { label: format!("{}*", a.label), src: a.tgt, tgt: a.src, degree: 1 });
    }
    for a in &q.arrows {
        basis.push(BasisElt { label: a.label.clone(), src: a.src, tgt: a.tgt, degree: 2 });
    }
    for (i, v) in q.vertices.iter().enumerate() {
        basis.push(BasisElt { label: format!("w_{v}"), src: i, tgt: i, degree: 3 });
    }
    let unit = |v: usize| v;
    let dual = |a: usize| nv + a;
    let arrow = |a: usize| nv + na + a;
    let omega = |v: usize| nv + 2 * na + v;

    let mut cat = AInftyCategory::new(q.vertices.clone(), basis);
    for v in 0..nv {
        cat.set_unit(v, unit(v));
    }
    let all: Vec<(usize, i32, usize, usize)> =
        cat.basis.iter().enumerate().map(|(e, b)| (e, b.degree, b.src, b.tgt)).collect();
    for &(e, deg, src, tgt) in &all {
        cat.add_op(&[unit(tgt), e], e, Q::one()).expect("unit key");
        if e != unit(src) {
            let s = if deg % 2 == 0 { Q::one() } else { -Q::one() };
            cat.add_op(&[e, unit(src)], e, s).expect("unit key");
        }
    }
    for (i, a) in q.arrows.iter().enumerate() {
        cat.add_op(&[arrow(i), dual(i)], omega(a.tgt), Q::one()).expect("pair key");
        cat.add_op(&[dual(i), arrow(i)], omega(a.src), -Q::one()).expect("pair key");
    }
    for t in &q.potential {
        let m = t.word.len();
        let w = &t.coeff / Q::from_integer(m.into());
        for r in 0..m {
            // rotation (d_n, …, d_1, c) in traversal order
            let rot: Vec<usize> = (0..m).map(|k| t.word[(r + k) % m]).collect();
            let key: Vec<usize> = rot[..m - 1].iter().map(|&d| dual(d)).collect();
            cat.add_op(&key, arrow(rot[m - 1]), w.clone()).expect("potential word is closed");
        }
    }
    let mut pairing = BTreeMap::new();
    for i in 0..na {
        pairing.insert((arrow(i), dual(i)), Q::one());
        pairing.insert((dual(i), arrow(i)), Q::one());
    }
    for v in 0..nv {
        pairing.insert((unit(v), omega(v)), Q::one());
        pairing.insert((omega(v), unit(v)), Q::one());
    }
    cat.set_pairing(pairing);
    cat
}

/// One object with `k ⊕ k[-3]`, units and pairing only.
pub fn sphere_algebra() -> AInftyCategory {
    let q = QuiverWithPotential::new(vec!["1".into()], vec![], vec![]).expect("no arrows");
    koszul_dual(&q)
}
