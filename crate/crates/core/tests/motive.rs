use mdt_core::motive::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn m(text: &str) -> Motive {
    parse_motive(text).unwrap()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn ring_examples() {
    let l = Motive::lef();
    assert!((&l + &l.neg()).is_zero());
    let mu2 = mu_n_class(2);
    assert_eq!(&mu2 + &mu2, m("2 + 2*chi(1/2)"));
    let c1 = m("1 + L - 2*s*(chi(1/4)+chi(1/2)+chi(3/4))");
    assert_eq!(&(&c1 - &l.scale_int(4)) + &l.scale_int(4), c1);

    let half = Motive::chi(Character::new(1, 2));
    assert_eq!(half.mul_naive(&half.scale_int(3)), Motive::int(3));
    assert_eq!(mu2.mul_naive(&l), m("L + L*chi(1/2)"));
    let a = chi_sum(&[(1, 4), (2, 4), (3, 4)]);
    assert_eq!(a.mul_naive(&Motive::chi(Character::new(1, 4))), chi_sum(&[(2, 4), (3, 4), (0, 1)]));
}

#[test]
fn exotic_examples() {
    let one = Motive::one();
    let f2 = &one - &mu_n_class(2);
    let f4 = &one - &mu_n_class(4);
    assert_eq!(f2.mul_exotic(&f2), Motive::lef());
    let c1 = m("1 + L - 2*s*(chi(1/4)+chi(1/2)+chi(3/4))");
    let c2 = m("1 + L - s*(chi(1/4)+chi(3/4))");
    let l = Motive::lef();
    assert_eq!(f4.mul_exotic(&f4), &one - &(&c1 - &l.scale_int(4)));
    assert_eq!(f4.mul_exotic(&f2), &one - &(&c2 - &l.scale_int(2)));
}

#[test]
fn standard_classes() {
    let l = Motive::lef();
    let one = Motive::one();
    assert_eq!(gl_class(1), &l - &one);
    assert_eq!(gl_class(2), (&l.pow(2) - &one).mul_naive(&(&l.pow(2) - &l)));
    assert_eq!(gl_class(3), (&l.pow(3) - &one).mul_naive(&(&l.pow(3) - &l)).mul_naive(&(&l.pow(3) - &l.pow(2))));
    for n in 0..5 {
        assert_eq!(grassmannian_class(n, 0).unwrap(), one);
    }
    assert_eq!(grassmannian_class(2, 1).unwrap(), &l + &one);
    assert_eq!(grassmannian_class(4, 2).unwrap(), m("L^4 + L^3 + 2*L^2 + L + 1"));
    assert_eq!(grassmannian_class(2, 3), Err(MotiveError::BadIndex { n: 2, i: 3 }));
    assert_eq!(grassmannian_class(2, -1), Err(MotiveError::BadIndex { n: 2, i: -1 }));
    assert_eq!(mu_n_class(1), one);
    assert_eq!(mu_n_class(2), m("1 + chi(1/2)"));
    assert_eq!(mu_n_class(4), m("1 + chi(1/4) + chi(1/2) + chi(3/4)"));
}

#[test]
fn specializations() {
    let l = Motive::lef();
    assert_eq!(l.euler_specialize().unwrap(), rat(1));
    let c1 = m("1 + L - 2*s*(chi(1/4)+chi(1/2)+chi(3/4))");
    assert_eq!((&c1 - &l.scale_int(4)).euler_specialize().unwrap(), rat(-8));
    assert_eq!(c1.euler_specialize().unwrap(), rat(-4));
    assert_eq!(gl_inv(1).euler_specialize(), Err(MotiveError::PoleAtOne));
    assert!(Motive::zero().chi_eq().unwrap().is_empty());
    assert_eq!(mu_n_class(4).chi_eq().unwrap().len(), 4);
    assert_eq!(gl_inv(2).chi_eq(), Err(MotiveError::NonPolynomial));
}

/// The sector data of `MF(x⁴) − MF(x⁴+y²)` as the realization produces it.
#[test]
fn quartic_difference_sectors() {
    let c2 = m("1 + L - s*(chi(1/4)+chi(3/4))");
    let diff = &mu_n_class(4) - &(&c2 - &Motive::lef().scale_int(2));
    assert_eq!(diff, m("chi(1/4) + chi(1/2) + chi(3/4) + s*(chi(1/4)+chi(3/4)) + L"));
    assert!(diff.chi_eq().is_ok());
}

#[test]
fn units_and_inverses() {
    for n in 1..5 {
        assert_eq!(gl_class(n).mul_naive(&gl_inv(n)), Motive::one());
        assert_eq!(gl_class(n).inv().unwrap(), gl_inv(n));
    }
    assert_eq!(Motive::s().mul_naive(&Motive::s()), Motive::lef());
    assert_eq!(Motive::s().inv().unwrap(), Motive::s_pow(-1));
    assert_eq!(Motive::int(2).inv(), Err(MotiveError::NotInvertible));
    assert_eq!(mu_n_class(2).inv(), Err(MotiveError::NotInvertible));
}

fn character() -> impl Strategy<Value = Character> {
    (1i64..=6).prop_flat_map(|n| (0..n, Just(n))).prop_map(|(k, n)| Character::new(k, n))
}

fn term(with_den: bool) -> impl Strategy<Value = Motive> {
    let g = if with_den { 0u32..=2 } else { 0u32..=0 };
    (-3i64..=3, -2i64..=3, character(), g).prop_map(|(c, k, ch, g)| Motive::int(c).mul_naive(&Motive::s_pow(k)).mul_naive(&Motive::chi(ch)).mul_naive(&gl_inv(g)))
}

fn motive_with(with_den: bool) -> impl Strategy<Value = Motive> {
    proptest::collection::vec(term(with_den), 0..4).prop_map(|ts| ts.iter().fold(Motive::zero(), |a, t| &a + t))
}

fn motive() -> impl Strategy<Value = Motive> {
    motive_with(true)
}

fn polynomial() -> impl Strategy<Value = Motive> {
    motive_with(false)
}

fn trivial_sector() -> impl Strategy<Value = Motive> {
    (-3i64..=3, -2i64..=3, 0u32..=2).prop_map(|(c, k, g)| Motive::int(c).mul_naive(&Motive::s_pow(k)).mul_naive(&gl_inv(g)))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn exotic_ring_axioms(a in motive(), b in motive(), c in motive()) {
        prop_assert_eq!(a.mul_exotic(&b).mul_exotic(&c), a.mul_exotic(&b.mul_exotic(&c)));
        prop_assert_eq!(a.mul_exotic(&b), b.mul_exotic(&a));
        prop_assert_eq!(a.mul_exotic(&Motive::one()), a.clone());
        prop_assert_eq!(a.mul_exotic(&(&b + &c)), &a.mul_exotic(&b) + &a.mul_exotic(&c));
    }

    #[test]
    fn naive_ring_axioms(a in motive(), b in motive(), c in motive()) {
        prop_assert_eq!(a.mul_naive(&b).mul_naive(&c), a.mul_naive(&b.mul_naive(&c)));
        prop_assert_eq!(a.mul_naive(&b), b.mul_naive(&a));
        prop_assert_eq!(a.mul_naive(&Motive::one()), a.clone());
        prop_assert_eq!(a.mul_naive(&(&b + &c)), &a.mul_naive(&b) + &a.mul_naive(&c));
    }

    #[test]
    fn products_agree_off_the_twisted_sectors(a in motive(), t in trivial_sector()) {
        prop_assert_eq!(a.mul_exotic(&t), a.mul_naive(&t));
        prop_assert_eq!(a.mul_naive(&Motive::s()), Motive::s().mul_naive(&a));
    }

    #[test]
    fn euler_is_a_homomorphism(a in polynomial(), b in polynomial()) {
        let e = |x: &Motive| x.euler_specialize().unwrap();
        prop_assert_eq!(e(&a.mul_exotic(&b)), e(&a) * e(&b));
        prop_assert_eq!(e(&a.mul_naive(&b)), e(&a) * e(&b));
        prop_assert_eq!(e(&(&a + &b)), e(&a) + e(&b));
    }

    #[test]
    fn normalization_is_idempotent(a in motive()) {
        prop_assert_eq!(a.normalized(), a.clone());
        prop_assert_eq!(a.normalized().normalized(), a.normalized());
    }

    #[test]
    fn printing_round_trips(a in motive()) {
        prop_assert_eq!(parse_motive(&a.to_string()).unwrap(), a);
    }
}
