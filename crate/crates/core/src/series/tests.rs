use super::*;
use proptest::prelude::*;

fn qr() -> CoeffRing {
    CoeffRing::Rational
}

fn theta_plain(d: usize) -> QExpansion {
    let mut xs = vec![0i64; d];
    xs[0] = 1;
    let mut m = 1;
    while m * m < d {
        xs[m * m] = 2;
        m += 1;
    }
    QExpansion::from_i64s(qr(), &xs)
}

fn ints(f: &QExpansion) -> Vec<i64> {
    f.coeffs()
        .iter()
        .map(|c| {
            let q = c.as_rational().unwrap();
            assert!(q.is_integer());
            i64::try_from(q.numer()).unwrap()
        })
        .collect()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn add_truncates_to_min_precision() {
    let f = QExpansion::from_i64s(qr(), &[1, 2]);
    let g = QExpansion::from_i64s(qr(), &[3, 1, 1]);
    assert_eq!(ints(&ps_add(&f, &g).unwrap()), vec![4, 3]);
    assert!(ps_add(&f, &ps_neg(&f)).unwrap().is_zero());
    let t = theta_plain(10);
    assert_eq!(ints(&ps_add(&t, &t).unwrap()), vec![2, 4, 0, 0, 4, 0, 0, 0, 0, 4]);
}

#[test]
fn mul_examples() {
    let f = QExpansion::from_i64s(qr(), &[1, 1, 0]);
    let g = QExpansion::from_i64s(qr(), &[1, -1, 0]);
    assert_eq!(ints(&ps_mul(&f, &g).unwrap()), vec![1, 0, -1]);
    let t = theta_plain(5);
    assert_eq!(ints(&ps_mul(&t, &t).unwrap()), vec![1, 4, 4, 0, 4]);
    let t4 = ps_pow(&theta_plain(7), 4).unwrap();
    assert_eq!(ints(&t4)[6], 96);
    assert_eq!(ints(&t4)[..5], [1, 8, 24, 32, 24]);
}

#[test]
fn inverse_examples() {
    let f = QExpansion::from_i64s(qr(), &[1, -1, 0, 0]);
    assert_eq!(ints(&ps_inv(&f).unwrap()), vec![1, 1, 1, 1]);
    assert_eq!(ints(&ps_inv(&theta_plain(3)).unwrap()), vec![1, -2, 4]);
    let f2 = QExpansion::from_i64s(qr(), &[0, 1, 0, 4]);
    assert_eq!(ps_inv(&f2), Err(Error::NonInvertibleLeadingCoefficient));
    let f7 = CoeffRing::prime_field(7).unwrap();
    let f = QExpansion::from_i64s(f7, &[3, 1, 4, 1, 5]);
    let prod = ps_mul(&f, &ps_inv(&f).unwrap()).unwrap();
    assert_eq!(prod, QExpansion::one(f7, 5));
}

#[test]
fn derive_and_vshift_examples() {
    assert_eq!(ints(&ps_derive(&theta_plain(5))), vec![0, 2, 0, 0, 8]);
    assert!(ps_derive(&QExpansion::from_i64s(qr(), &[7, 0, 0])).is_zero());
    let x = QExpansion::from_i64s(qr(), &[0, 1, 0]);
    assert_eq!(ps_derive(&ps_derive(&x)), x);

    let f = QExpansion::from_i64s(qr(), &[1, 1]);
    assert_eq!(ints(&ps_vshift(&f, 4)), vec![1, 0, 0, 0, 1, 0, 0, 0]);
    assert_eq!(ps_vshift(&f, 1), f);
    let v = ps_vshift(&theta_plain(5), 4);
    assert_eq!(v.prec(), 20);
    let nz: Vec<usize> = (0..20).filter(|&n| !v.coeff_is_zero(n)).collect();
    assert_eq!(nz, vec![0, 4, 16]);
}

#[test]
fn pow_examples_and_counting() {
    let f = QExpansion::from_i64s(qr(), &[1, 1, 0]);
    assert_eq!(ps_pow(&f, 0).unwrap(), QExpansion::one(qr(), 3));
    assert_eq!(ints(&ps_pow(&f, 2).unwrap()), vec![1, 2, 1]);
    let (_, n) = counted(|| ps_pow(&theta_plain(50), 13).unwrap());
    assert_eq!(n, 5);
    let (_, n) = counted(|| ps_pow(&theta_plain(50), 1).unwrap());
    assert_eq!(n, 0);
    let outer = MultCounter::new();
    let inner = MultCounter::new();
    outer.scope(|| {
        ps_mul(&f, &f).unwrap();
        inner.scope(|| ps_mul(&f, &f).unwrap());
    });
    assert_eq!((outer.count(), inner.count()), (2, 1));
}

#[test]
fn reduce_examples() {
    let f5 = CoeffRing::prime_field(5).unwrap();
    let t = ps_reduce(&theta_plain(6), f5).unwrap();
    assert_eq!(t.residues().unwrap(), &[1, 2, 0, 0, 2, 0]);
    let bad = QExpansion::from_rationals(qr(), &[q(1, 5), q(1, 1)]).unwrap();
    assert_eq!(
        ps_reduce(&bad, f5),
        Err(Error::NonInvertibleDenominator { index: Some(0) })
    );
    let bad = QExpansion::from_rationals(qr(), &[q(1, 1), q(3, 10), q(1, 2)]).unwrap();
    assert_eq!(
        ps_reduce(&bad, f5),
        Err(Error::NonInvertibleDenominator { index: Some(1) })
    );
    let f7 = CoeffRing::prime_field(7).unwrap();
    let h = QExpansion::from_rationals(qr(), &[q(1, 2), q(1, 1)]).unwrap();
    assert_eq!(ps_reduce(&h, f7).unwrap().residues().unwrap(), &[4, 1]);
}

#[test]
fn rational_representation_is_canonical() {
    let a = QExpansion::from_rationals(qr(), &[q(1, 2), q(1, 3)]).unwrap();
    let b = QExpansion::from_integer_parts(qr(), vec![(-3).into(), (-2).into()], (-6).into()).unwrap();
    assert_eq!(a, b);
    let two = ps_scale(&a, &qr().embed(&q(6, 1)).unwrap()).unwrap();
    assert_eq!(two.integer_parts().unwrap().0, &BigInt::one());
    assert_eq!(a.coeff(1).to_string(), "1/3");
}

#[test]
fn ring_mismatch_is_reported() {
    let f7 = CoeffRing::prime_field(7).unwrap();
    let a = QExpansion::one(qr(), 3);
    let b = QExpansion::one(f7, 3);
    assert!(matches!(ps_mul(&a, &b), Err(Error::RingMismatch(..))));
    assert!(matches!(ps_add(&a, &b), Err(Error::RingMismatch(..))));
}

fn schoolbook(f: &QExpansion, g: &QExpansion) -> QExpansion {
    let d = f.prec().min(g.prec());
    let ring = f.ring();
    let mut out: Vec<RingElem> = vec![ring.zero(); d];
    for i in 0..d {
        for j in 0..d - i {
            let t = f.coeff(i).mul(&g.coeff(j)).unwrap();
            out[i + j] = out[i + j].add(&t).unwrap();
        }
    }
    QExpansion::from_elems(ring, &out).unwrap()
}

fn rational_series(max_len: usize) -> impl Strategy<Value = QExpansion> {
    (1..=max_len)
        .prop_flat_map(|len| {
            (
                prop::collection::vec(-1_000_000i64..1_000_000, len),
                1i64..50,
            )
        })
        .prop_map(|(xs, den)| {
            QExpansion::from_integer_parts(
                CoeffRing::Rational,
                xs.into_iter().map(BigInt::from).collect(),
                den.into(),
            )
            .unwrap()
        })
}

fn modular_series(len: usize) -> impl Strategy<Value = QExpansion> {
    let p = 2_147_483_647u64;
    prop::collection::vec(0..p, len)
        .prop_map(move |xs| QExpansion::from_residues(CoeffRing::prime_field(p).unwrap(), xs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms_rational(f in rational_series(64), g in rational_series(64), h in rational_series(64)) {
        let fg = ps_mul(&f, &g).unwrap();
        prop_assert_eq!(&fg, &ps_mul(&g, &f).unwrap());
        prop_assert_eq!(ps_mul(&fg, &h).unwrap(), ps_mul(&f, &ps_mul(&g, &h).unwrap()).unwrap());
        let lhs = ps_mul(&ps_add(&f, &g).unwrap(), &h).unwrap();
        let rhs = ps_add(&ps_mul(&f, &h).unwrap(), &ps_mul(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_axioms_prime_field(f in modular_series(64), g in modular_series(64), h in modular_series(64)) {
        let fg = ps_mul(&f, &g).unwrap();
        prop_assert_eq!(&fg, &ps_mul(&g, &f).unwrap());
        prop_assert_eq!(ps_mul(&fg, &h).unwrap(), ps_mul(&f, &ps_mul(&g, &h).unwrap()).unwrap());
        let lhs = ps_mul(&ps_add(&f, &g).unwrap(), &h).unwrap();
        let rhs = ps_add(&ps_mul(&f, &h).unwrap(), &ps_mul(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mul_matches_schoolbook(f in rational_series(512), g in rational_series(512)) {
        prop_assert_eq!(ps_mul(&f, &g).unwrap(), schoolbook(&f, &g));
    }

    #[test]
    fn mul_matches_schoolbook_mod_p(f in modular_series(300), g in modular_series(300)) {
        prop_assert_eq!(ps_mul(&f, &g).unwrap(), schoolbook(&f, &g));
    }

    #[test]
    fn inverse_is_exact(f in rational_series(80)) {
        prop_assume!(!f.coeff_is_zero(0));
        let prod = ps_mul(&f, &ps_inv(&f).unwrap()).unwrap();
        prop_assert_eq!(prod, QExpansion::one(CoeffRing::Rational, f.prec()));
    }

    #[test]
    fn derive_is_a_derivation(f in rational_series(60), g in rational_series(60)) {
        let lhs = ps_derive(&ps_mul(&f, &g).unwrap());
        let rhs = ps_add(
            &ps_mul(&ps_derive(&f), &g).unwrap(),
            &ps_mul(&f, &ps_derive(&g)).unwrap(),
        ).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vshift_is_multiplicative(f in rational_series(40), g in rational_series(40), m in 1usize..6) {
        let lhs = ps_vshift(&ps_mul(&f, &g).unwrap(), m);
        let rhs = ps_mul(&ps_vshift(&f, m), &ps_vshift(&g, m)).unwrap();
        let d = lhs.prec().min(rhs.prec());
        prop_assert_eq!(lhs.truncate(d), rhs.truncate(d));
    }
}
