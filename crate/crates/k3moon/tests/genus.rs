use k3moon::exactcore::poly::expand_rational;
use k3moon::exactcore::series::QDEN;
use k3moon::exactcore::{qi, Poly, Q};
use k3moon::genus::*;
use k3moon::modforms::weak_jacobi_phi;

#[test]
fn identity_class_rational_form() {
    let s = chi_symt_series(SymplecticClass::A1, 7).unwrap();
    let want: Vec<Q> = [2, -20, -90, -232, -470, -828, -1330].iter().map(|&x| qi(x)).collect();
    assert_eq!(s, want);
    let r = rational_form(SymplecticClass::A1).unwrap();
    assert_eq!(expand_rational(&r, 7).unwrap(), want);
    assert_eq!(rational_numerator(SymplecticClass::A1).unwrap(), Poly::from_ints(&[2, -28, 2]));
}

#[test]
fn equivariant_numerators() {
    let want: [(SymplecticClass, &[i64]); 7] = [
        (SymplecticClass::A2, &[2]),
        (SymplecticClass::A3, &[2]),
        (SymplecticClass::A4, &[2]),
        (SymplecticClass::A5, &[2, 2, 2]),
        (SymplecticClass::A6, &[2]),
        (SymplecticClass::A7AB, &[2, 3, 4, 3, 2]),
        (SymplecticClass::A8, &[2, 2, 2]),
    ];
    for (g, num) in want {
        assert_eq!(rational_numerator(g).unwrap(), Poly::from_ints(num), "{}", g.label());
    }
}

#[test]
fn genus_is_twice_phi01() {
    let t = 4 * QDEN;
    let e = elliptic_genus(t);
    let p = weak_jacobi_phi(0, t).unwrap().scale(&qi(2));
    assert_eq!(e, p);
    assert_eq!(euler_constant(&e).unwrap(), qi(24));
}

#[test]
fn two_a_genus() {
    let t = 3 * QDEN;
    let s = equivariant_elliptic_genus(SymplecticClass::A2, t).unwrap();
    assert_eq!(s.coeff(0, 2, 0), qi(2));
    assert_eq!(s.coeff(0, 0, 0), qi(4));
    assert_eq!(euler_constant(&s).unwrap(), qi(8));
}

#[test]
fn phi_quotients_match_fixed_points() {
    let t = 2 * QDEN;
    for g in SymplecticClass::NONTRIVIAL {
        let a = equivariant_elliptic_genus(g, t).unwrap();
        let b = phi_quotient_genus(g, t).unwrap();
        assert_eq!(a, b, "{}", g.label());
    }
}

#[test]
fn split_of_equivariant() {
    let t = 3 * QDEN;
    for g in SymplecticClass::NONTRIVIAL {
        let s = equivariant_elliptic_genus(g, t).unwrap();
        let sp = jacobi_split(&s).unwrap();
        assert_eq!(sp.a, qi(euler_number(g) as i64) / qi(12));
    }
}
