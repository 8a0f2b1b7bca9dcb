//! Randomized invariants under fixed seeds.

use k3moon::exactcore::lattice::{hnf_basis, smith_invariants, snf_quotient, IVec};
use k3moon::exactcore::poly::{expand_rational, reconstruct_rational};
use k3moon::exactcore::series::QDEN;
use k3moon::exactcore::{fmt_q, parse_q, q, qi, Cyclotomic, Poly, RationalFunction, Series, Q};
use k3moon::modforms::{phi_product, phi_quotient};
use k3moon::n4char::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn runner(cases: u32, seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(a, b)| q(a, b))
}

const T: i64 = 2 * QDEN;

fn series() -> impl Strategy<Value = Series<Q>> {
    prop::collection::vec(((0..T), -3i32..=3, rational()), 0..6)
        .prop_map(|ts| Series::from_terms(ts.into_iter().map(|(e, y, c)| ((e, 2 * y, 0), c)), T))
}

fn unit() -> impl Strategy<Value = Series<Q>> {
    (series(), 1i64..=5).prop_map(|(s, c)| {
        let higher = s.terms().filter(|(k, _)| k.0 > 0).map(|(k, c)| (*k, c.clone()));
        Series::from_terms(higher.chain([((0, 0, 0), qi(c))]), T)
    })
}

#[test]
fn series_ring_axioms() {
    runner(96, 1)
        .run(&(series(), series(), series()), |(a, b, c)| {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            Ok(())
        })
        .unwrap();
}

#[test]
fn series_inverse_is_two_sided() {
    runner(64, 2)
        .run(&unit(), |u| {
            let v = u.inverse().unwrap();
            prop_assert_eq!(u.mul(&v), Series::one(T));
            prop_assert_eq!(v.mul(&u), Series::one(T));
            Ok(())
        })
        .unwrap();
}

#[test]
fn rationals_format_round_trip() {
    runner(128, 3)
        .run(&(any::<i64>(), 1i64..i64::MAX), |(a, b)| {
            let x = q(a, b);
            prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
            Ok(())
        })
        .unwrap();
}

fn cyclo() -> impl Strategy<Value = Cyclotomic> {
    (prop::sample::select(vec![3u32, 4, 5, 8, 12]), prop::collection::vec(-5i64..=5, 8)).prop_map(|(n, c)| {
        let d = k3moon::exactcore::cyclotomic::euler_phi(n as u64) as usize;
        Cyclotomic::from_coeffs(n, c[..d].iter().map(|&x| qi(x)).collect()).unwrap()
    })
}

#[test]
fn cyclotomic_field_axioms() {
    runner(64, 4)
        .run(&(cyclo(), cyclo(), cyclo()), |(a, b, c)| {
            let ab = a.try_mul(&b).unwrap();
            prop_assert_eq!(ab.clone(), b.try_mul(&a).unwrap());
            prop_assert_eq!(ab.try_mul(&c).unwrap(), a.try_mul(&b.try_mul(&c).unwrap()).unwrap());
            let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, ab.try_add(&a.try_mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.conj().conj(), a.clone());
            Ok(())
        })
        .unwrap();
}

fn vectors(dim: usize) -> impl Strategy<Value = Vec<IVec>> {
    prop::collection::vec(prop::collection::vec(-30i64..=30, dim), 1..7)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
}

#[test]
fn hnf_idempotent_and_order_independent() {
    runner(96, 5)
        .run(&(1usize..=5).prop_flat_map(|d| (Just(d), vectors(d), any::<u64>())), |(d, vs, seed)| {
            let l = hnf_basis(d, &vs).unwrap();
            prop_assert_eq!(hnf_basis(d, &l.basis).unwrap(), l.clone());
            let mut shuffled = vs.clone();
            let k = (seed as usize) % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
            prop_assert_eq!(hnf_basis(d, &shuffled).unwrap(), l.clone());
            for v in &vs {
                prop_assert!(l.contains(v));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn smith_invariants_divide_and_multiply_to_index() {
    runner(64, 6)
        .run(&(2usize..=4).prop_flat_map(|d| (Just(d), vectors(d))), |(d, vs)| {
            let inv = smith_invariants(&vs);
            for w in inv.windows(2) {
                prop_assert!(w[0].is_zero() || (&w[1] % &w[0]).is_zero());
            }
            let l = hnf_basis(d, &vs).unwrap();
            if l.rank() == d {
                let quo = snf_quotient(&l, &k3moon::exactcore::IntegerLattice::full(d)).unwrap();
                prop_assert_eq!(quo.order().unwrap(), l.determinant().unwrap().abs());
                let prod: BigInt = inv.iter().filter(|x| !x.is_zero()).product();
                prop_assert_eq!(prod, l.determinant().unwrap().abs());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn triple_product_identity() {
    runner(5, 7)
        .run(&(1i64..=5), |tq| {
            prop_assert_eq!(phi_quotient(tq * QDEN), phi_product(tq * QDEN));
            Ok(())
        })
        .unwrap();
}

#[test]
fn spectral_flow_round_trip() {
    let t = 3 * QDEN;
    runner(48, 8)
        .run(&prop::collection::vec(((0..t), -4i32..=4, rational()), 0..8), |ts| {
            let s = Series::from_terms(ts.into_iter().map(|(e, y, c)| ((e, y, 0), c)), t);
            let back = inverse_spectral_flow(&spectral_flow(&s), t);
            for (k, c) in back.terms() {
                prop_assert_eq!(&s.coeff(k.0, k.1, k.2), c);
            }
            // every term of s below the guaranteed horizon survives
            let horizon = flow_truncation(t) - QDEN;
            for (k, c) in s.terms().filter(|(k, _)| k.0 + 6 * k.1.abs() as i64 + 6 < horizon) {
                prop_assert_eq!(&back.coeff(k.0, k.1, k.2), c);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn decomposition_has_zero_y_residual() {
    let t = 3 * QDEN;
    runner(32, 9)
        .run(
            &(prop::bool::ANY, -4i64..=4, prop::collection::vec((0i64..3, -4i64..=4), 0..3)),
            |(ramond, a, typ)| {
                let sector = if ramond { Sector::Ramond } else { Sector::NS };
                let mut s = n4_atypical(sector, t).scale(&qi(a));
                let mut want: std::collections::BTreeMap<Q, Q> = Default::default();
                for (c, m) in typ {
                    let h = q(1, 4) + qi(c);
                    s = s.add(&n4_typical(&h, sector, t).unwrap().scale(&qi(m)));
                    *want.entry(h).or_insert_with(Q::zero) += qi(m);
                }
                let d = decompose_into_n4(&s, sector).unwrap();
                prop_assert_eq!(d.atypical.clone(), qi(a));
                for (h, m) in want {
                    prop_assert_eq!(d.at(&h), m);
                }
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn rational_expansion_reconstructs() {
    runner(48, 10)
        .run(&(prop::collection::vec(-6i64..=6, 1..5), prop::sample::select(vec![2u64, 3, 4, 5, 7, 8])), |(num, n)| {
            let den = k3moon::exactcore::poly::cyclotomic_poly(n).mul(&Poly::from_ints(&[-1, 1]));
            let dd = den.degree().unwrap();
            let p = Poly::from_ints(&num[..num.len().min(dd + 1)]);
            let r = RationalFunction::new(p.clone(), den.clone()).unwrap();
            let s = expand_rational(&r, 20).unwrap();
            let fit = reconstruct_rational(&s, &den).unwrap();
            prop_assert_eq!(fit.function, r);
            Ok(())
        })
        .unwrap();
}
