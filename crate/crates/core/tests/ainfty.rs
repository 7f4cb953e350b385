use std::collections::BTreeMap;

use mdt_core::ainfty::matrix::mat_b;
use mdt_core::ainfty::quiver::{shipped, SHIPPED};
use mdt_core::ainfty::*;
use mdt_core::coeff::{q, qf, Q};
use mdt_core::linalg::Matrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dual(name: &str) -> AInftyCategory {
    koszul_dual(&shipped(name).unwrap())
}

fn id(cat: &AInftyCategory, l: &str) -> usize {
    cat.find(l).unwrap_or_else(|| panic!("no basis element {l}"))
}

fn single(e: usize, c: Q) -> Vector {
    BTreeMap::from([(e, c)])
}

#[test]
fn shipped_duals_are_cyclic_ainfty() {
    let mut cats: Vec<(String, AInftyCategory)> =
        SHIPPED.iter().map(|(n, _)| (n.to_string(), dual(n))).collect();
    cats.push(("sphere".into(), sphere_algebra()));
    for (name, cat) in &cats {
        assert!(cat.max_arity() <= DEGREE_FORCED_ARITY, "{name}");
        let n = check_arity(cat);
        let s = check_stasheff(cat, n);
        assert!(s.passed(), "{name}: {:?}", s.violations.first());
        // no identity beyond the computed bound has a term
        assert!(check_stasheff(cat, 2 * n).passed(), "{name}");
        assert!(check_cyclic(cat, n).unwrap().passed(), "{name}");
        cat.validate_pairing().unwrap();
    }
}

#[test]
fn hom_dimension_bookkeeping() {
    for (name, _) in SHIPPED {
        let qv = shipped(name).unwrap();
        let cat = koszul_dual(&qv);
        for i in 0..qv.vertices.len() {
            for j in 0..qv.vertices.len() {
                // degree 1 from i to j is dual to the arrows j -> i
                assert_eq!(cat.hom_basis(i, j, 1).len(), qv.arrows_between(j, i), "{name}");
                assert_eq!(cat.hom_basis(i, j, 2).len(), qv.arrows_between(i, j), "{name}");
                let diag = usize::from(i == j);
                assert_eq!(cat.hom_basis(i, j, 0).len(), diag);
                assert_eq!(cat.hom_basis(i, j, 3).len(), diag);
            }
        }
    }
}

#[test]
fn one_loop_quartic() {
    let cat = dual("one_loop_a4");
    let (a, ad) = (id(&cat, "a"), id(&cat, "a*"));
    assert_eq!(cat.op(&[ad, ad, ad]), Some(&single(a, q(1))));
    let tau = ShiftedObject(vec![(0, 0)]);
    let x = MatElem::from_entries([((0, 0, ad), q(3))]);
    assert_eq!(potential_value(&cat, &tau, &x).unwrap(), qf(81, 4));
    assert_eq!(potential_value(&cat, &tau, &MatElem::<Q>::zero()).unwrap(), q(0));
}

#[test]
fn zero_potential_has_no_higher_products_on_degree_one() {
    for name in ["one_loop_w0", "p1"] {
        let cat = dual(name);
        for (k, _) in cat.ops() {
            assert!(!k.iter().all(|&e| cat.basis[e].degree == 1), "{name}: {k:?}");
        }
    }
}

/// Coefficient of `c` in `b_n(d_n*, …, d_1*)` from the cyclic derivative
/// `∂_c W`, read off as the path after each occurrence of `c`.
fn contraction_oracle(qv: &QuiverWithPotential, ds: &[usize], c: usize) -> Q {
    let mut acc = Q::zero();
    for t in &qv.potential {
        let m = t.word.len();
        for p in 0..m {
            if t.word[p] != c {
                continue;
            }
            let after: Vec<usize> = (1..m).map(|k| t.word[(p + k) % m]).collect();
            if after == ds {
                acc += &t.coeff / Q::from_integer(m.into());
            }
        }
    }
    acc
}

#[test]
fn conifold_cubic_products_match_oracle() {
    let qv = shipped("conifold").unwrap();
    let cat = koszul_dual(&qv);
    let na = qv.arrows.len();
    let mut nonzero = 0;
    for d3 in 0..na {
        for d2 in 0..na {
            for d1 in 0..na {
                let key = [id(&cat, &format!("{}*", qv.arrows[d3].label)),
                    id(&cat, &format!("{}*", qv.arrows[d2].label)),
                    id(&cat, &format!("{}*", qv.arrows[d1].label))];
                for c in 0..na {
                    let out = cat.op(&key).and_then(|v| v.get(&id(&cat, &qv.arrows[c].label)).cloned());
                    let want = contraction_oracle(&qv, &[d3, d2, d1], c);
                    assert_eq!(out.unwrap_or_else(Q::zero), want);
                    if !want.is_zero() {
                        nonzero += 1;
                    }
                }
            }
        }
    }
    assert_eq!(nonzero, 8);
    // (y1*, x2*, y2*) gives x1 with weight 1/4 from x1 y1 x2 y2
    let key = [id(&cat, "y1*"), id(&cat, "x2*"), id(&cat, "y2*")];
    assert_eq!(cat.op(&key), Some(&single(id(&cat, "x1"), qf(1, 4))));
}

fn caught(cat: &AInftyCategory) -> bool {
    let n = check_arity(cat);
    !check_stasheff(cat, n).passed() || !check_cyclic(cat, n).unwrap().passed()
}

#[test]
fn corruptions_are_caught() {
    let base = dual("one_loop_a4");
    let (a, ad, w, one) = (id(&base, "a"), id(&base, "a*"), id(&base, "w_1"), id(&base, "1_1"));

    let mut c1 = base.clone();
    c1.set_op(&[ad, ad, ad], single(w, q(1))).unwrap();
    let r = check_stasheff(&c1, check_arity(&c1));
    assert_eq!(r.first_failing_arity(), Some(4));

    let mut c2 = base.clone();
    c2.set_op(&[ad, a], single(w, q(1))).unwrap();
    assert!(caught(&c2));

    let mut c3 = base.clone();
    c3.set_op(&[ad, one], single(ad, q(1))).unwrap();
    assert!(caught(&c3));

    let con = dual("conifold");
    let key = [id(&con, "y1*"), id(&con, "x2*"), id(&con, "y2*")];
    let mut v = con.op(&key).unwrap().clone();
    for c in v.values_mut() {
        *c *= q(2);
    }
    let mut c4 = con.clone();
    c4.set_op(&key, v).unwrap();
    assert!(caught(&c4));

    let mut c5 = base.clone();
    let mut p = base.pairing().unwrap().clone();
    p.insert((a, ad), q(2));
    c5.set_pairing(p);
    assert!(!check_cyclic(&c5, 8).unwrap().passed());
    assert!(check_cyclic(&base, 8).unwrap().passed());
}

#[test]
fn cyclic_needs_pairing() {
    let cat = AInftyCategory::new(vec!["x".into()], vec![]);
    assert_eq!(check_cyclic(&cat, 3), Err(AInftyError::MissingPairing));
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

/// Invertible rational matrix, block diagonal on slots sharing object and shift.
fn rand_gauge(rng: &mut ChaCha8Rng, tau: &ShiftedObject) -> Matrix {
    loop {
        let n = tau.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if tau.0[i] == tau.0[j] {
                    g.set(i, j, rand_q(rng));
                }
            }
        }
        if !g.det().is_zero() {
            return g;
        }
    }
}

fn conjugate(cat: &AInftyCategory, x: &MatElem<Q>, g: &Matrix, tau: &ShiftedObject) -> MatElem<Q> {
    let gi = g.inverse().unwrap();
    let units = |i: usize| cat.unit(tau.obj(i)).unwrap();
    let as_mat = |m: &Matrix| {
        MatElem::from_entries((0..tau.len()).flat_map(|i| (0..tau.len()).map(move |j| (i, j))).filter_map(|(i, j)| {
            let c = m.get(i, j).clone();
            (!c.is_zero()).then(|| ((i, j, units(i)), c))
        }))
    };
    let (gm, gim) = (as_mat(g), as_mat(&gi));
    // b_2(y, 1) = -y on degree one, so the composite is -g x g^{-1}
    let flat = ShiftedObject(tau.0.iter().map(|&(o, _)| (o, 0)).collect());
    let gx = mat_b(cat, &flat, &[&gm, x]);
    mat_b(cat, &flat, &[&gx, &gim]).neg()
}

#[test]
fn potential_is_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        ("one_loop_a4", ShiftedObject(vec![(0, 0), (0, 0), (0, 0)])),
        ("conifold", ShiftedObject(vec![(0, 0), (0, 0), (1, 0), (1, 0)])),
        ("c3", ShiftedObject(vec![(0, 0), (0, 0)])),
    ];
    for (name, tau) in cases {
        let cat = dual(name);
        for _ in 0..20 {
            let mut x = MatElem::zero();
            for i in 0..tau.len() {
                for j in 0..tau.len() {
                    for e in cat.hom_basis(tau.obj(j), tau.obj(i), 1) {
                        x.add(i, j, e, rand_q(&mut rng));
                    }
                }
            }
            let g = rand_gauge(&mut rng, &tau);
            let y = conjugate(&cat, &x, &g, &tau);
            assert_eq!(potential_value(&cat, &tau, &x).unwrap(), potential_value(&cat, &tau, &y).unwrap(), "{name}");
        }
    }
}

#[test]
fn one_loop_trace_quartic() {
    let cat = dual("one_loop_a4");
    let ad = id(&cat, "a*");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        let tau = ShiftedObject(vec![(0, 0); n]);
        let vals: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| rand_q(&mut rng)).collect()).collect();
        let x = MatElem::from_entries(
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ((i, j, ad), vals[i][j].clone())),
        );
        let m = Matrix::from_rows(vals);
        let m2 = m.mul(&m);
        let m4 = m2.mul(&m2);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + m4.get(i, i));
        assert_eq!(potential_value(&cat, &tau, &x).unwrap(), tr * qf(1, 4));
    }
}
