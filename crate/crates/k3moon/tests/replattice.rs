use k3moon::exactcore::poly::expand_rational;
use k3moon::exactcore::{q, qi, Q};
use k3moon::replattice::audit::{alpha_audit, integrality_audit, m24_extra_rational_forms};
use k3moon::replattice::lattices::*;
use k3moon::replattice::m23::*;
use k3moon::replattice::DataDir;
use num_bigint::BigInt;
use std::sync::OnceLock;

fn data() -> DataDir {
    DataDir::new(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn report() -> &'static LatticeReport {
    static R: OnceLock<LatticeReport> = OnceLock::new();
    R.get_or_init(|| {
        let d = data();
        lattice_report(&d.m24().unwrap(), &d.m23().unwrap(), &d.co0().unwrap(), &d.mukai().unwrap()).unwrap()
    })
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn prod(v: &[String]) -> BigInt {
    v.iter().map(|s| s.parse::<BigInt>().unwrap()).product()
}

#[test]
fn m_mod_n_invariant_factors() {
    assert_eq!(report().m_mod_n, strs(&["2", "4", "24", "40320"]));
}

#[test]
fn component_quotients() {
    // (orders, index of N in N_i) per group
    let want: [(&[u32], u64); 11] = [
        (&[1, 2, 3, 4, 7], 4 * 12 * 480),
        (&[1, 2, 3, 4, 5], 4 * 4 * 672),
        (&[1, 2, 3, 4, 5, 6], 2 * 4 * 672),
        (&[1, 2, 3, 4, 5], 12 * 168),
        (&[1, 2, 3, 4, 8], 3 * 420),
        (&[1, 2, 3, 4, 6], 2 * 280),
        (&[1, 2, 3, 4, 6], 2 * 840),
        (&[1, 2, 3, 4, 6], 2 * 840),
        (&[1, 2, 3, 4, 6], 2 * 4 * 1120),
        (&[1, 2, 3, 4], 4 * 4 * 3360),
        (&[1, 2, 3, 4, 6, 8], 2 * 1680),
    ];
    let r = report();
    for (row, (orders, idx)) in r.components.iter().zip(want) {
        assert_eq!(row.orders, orders, "{}", row.group);
        assert_eq!(prod(&row.factors), BigInt::from(idx), "{}: {:?}", row.group, row.factors);
    }
}

#[test]
fn component_factor_shapes() {
    let r = report();
    let f: Vec<Vec<String>> = r.components.iter().map(|c| c.factors.clone()).collect();
    assert_eq!(f[0], strs(&["4", "12", "480"]));
    assert_eq!(f[4], strs(&["3", "420"]));
    assert_eq!(f[9], strs(&["4", "4", "3360"]));
}

#[test]
fn m24_and_m23_lattices_equal_n() {
    assert!(report().k_equals_n);
    assert!(report().k1_equals_n);
}

#[test]
fn conway_lattice_index() {
    // the stated index is 2; the shipped restricted table gives K'' = N
    assert_eq!(report().k2_index, "1");
}

#[test]
fn components_agree_with_dual_route() {
    for t in data().mukai().unwrap() {
        let a = mukai_component(&t).unwrap().lattice;
        let b = mukai_component_dual(&t).unwrap();
        assert_eq!(a, b, "{}", t.group);
    }
}

#[test]
fn four_groups_determine_n() {
    let (n, comps) = mukai_lattice_n(&data().mukai().unwrap()).unwrap();
    let s = sufficiency_scan(&n, &comps).unwrap();
    assert!(s.sufficient_fours);
    assert!(s.no_three_suffice);
}

#[test]
fn virtual_m24_character() {
    let m24 = data().m24().unwrap();
    let v: Vec<BigInt> = [24, 8, 6, 4, 4, 2, 3, 2].iter().map(|&x| BigInt::from(x)).collect();
    let x = solve_virtual_m24(&m24, &v).unwrap();
    assert_eq!(evaluate_virtual(&m24, &M24_CLASSES, &x).unwrap(), v);
    let bad: Vec<BigInt> = [1, 0, 0, 0, 0, 0, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
    assert!(matches!(solve_virtual_m24(&m24, &bad), Err(k3moon::Error::Mismatch(_))));
}

#[test]
fn symmetric_power_traces_lie_in_n() {
    use k3moon::exactcore::lattice::IVec;
    use k3moon::genus::{chi_symt_series, SymplecticClass};
    let (n, _) = mukai_lattice_n(&data().mukai().unwrap()).unwrap();
    let series: Vec<_> = SymplecticClass::ALL.iter().map(|&g| chi_symt_series(g, 12).unwrap()).collect();
    for k in 0..12 {
        let v: IVec = series.iter().map(|s| s[k].to_integer()).collect();
        assert!(n.contains(&v), "t^{k}");
    }
}

#[test]
fn m23_rational_classes() {
    let rc = data().m23().unwrap().rational_classes().unwrap();
    let labels: Vec<&str> = rc.iter().map(|c| c.label.as_str()).collect();
    assert_eq!(labels, ["1A", "2A", "3A", "4A", "5A", "6A", "7AB", "8A", "11AB", "14AB", "15AB", "23AB"]);
}

const M23_MULTIPLICITIES: [[i64; 17]; 21] = [
    [-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, -1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, -1],
    [2, -2, -2, -2, 0, 2, 0, 0, 2, 0, 0, 1, 1, 1, 1, 0, -2],
    [2, -1, 0, 0, -1, 1, -1, -1, 2, 0, 0, 1, 1, 0, 0, 1, -1],
    [0, 0, 0, 0, 0, 0, -1, -1, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [-1, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 1],
    [-2, 2, 2, 2, 0, -2, 0, 0, -2, 1, 1, 0, 0, -1, -1, 0, 2],
    [-1, 1, 0, 0, 0, -1, 2, 2, -1, 0, 0, -2, -2, 1, 1, 1, 2],
    [-2, 2, 1, 1, 0, -2, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 2],
    [1, -1, -1, -1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 2],
    [0, 0, 0, 0, 0, 0, -1, -1, 0, 1, 1, 2, 2, 0, 0, 0, 2],
    [2, -1, -1, -1, 0, 2, 1, 1, 0, 0, 0, 0, 0, 2, 2, 2, 2],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2],
    [-1, 0, -1, -1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3],
    [0, 0, 1, 1, 0, 0, 1, 1, 0, 2, 2, 1, 1, 2, 2, 2, 4],
    [-1, 1, 1, 1, 1, 0, 0, 0, 1, 2, 2, 3, 3, 1, 1, 2, 5],
    [0, 0, 0, 0, 0, 2, 0, 0, 2, 2, 2, 4, 4, 3, 3, 2, 4],
    [2, -1, 0, 0, 0, 3, 0, 0, 3, 2, 2, 4, 4, 3, 3, 4, 5],
    [2, -2, 0, 0, 0, 2, 0, 0, 2, 3, 3, 4, 4, 4, 4, 4, 6],
];

fn m23_family_default() -> Vec<(String, k3moon::exactcore::RationalFunction)> {
    let d = data();
    m23_family(&d.m23().unwrap(), &d.forms().unwrap(), None).unwrap()
}

#[test]
fn m23_decomposition_table() {
    let t = data().m23().unwrap();
    let dec = decompose_m23_family(&t, &m23_family_default(), 21).unwrap();
    assert_eq!(dec.first_nonintegral, None);
    for (n, row) in M23_MULTIPLICITIES.iter().enumerate() {
        let want: Vec<Q> = row.iter().map(|&x| qi(x)).collect();
        assert_eq!(dec.rows[n], want, "t^{n}");
    }
}

#[test]
fn m23_pairs_have_equal_multiplicities() {
    let t = data().m23().unwrap();
    let dec = decompose_m23_family(&t, &m23_family_default(), 40).unwrap();
    for (a, b) in [(2, 3), (6, 7), (9, 10), (11, 12), (13, 14)] {
        for row in &dec.rows {
            assert_eq!(row[a], row[b]);
        }
    }
}

#[test]
fn m23_trivial_multiplicity_rational_function() {
    let t = data().m23().unwrap();
    let m = m_chi_rational(&t, &m23_family_default()).unwrap();
    assert_eq!(m[0].pole4, q(-1, 425040));
    assert_eq!(m[0].function.num().degree(), Some(70));
    assert_eq!(m[0].function.den().degree(), Some(72));
    assert!(m.iter().all(|c| c.pole4 < Q::from_integer(0.into())));
    let ord = Q::from_integer(t.order.clone());
    for (mc, chi) in m.iter().zip(&t.characters) {
        let deg = chi.values[0].as_rational().unwrap();
        assert_eq!(mc.pole4, qi(-24) * deg / &ord, "{}", mc.name);
    }
    let s = expand_rational(&m[0].function, 21).unwrap();
    let col: Vec<Q> = M23_MULTIPLICITIES.iter().map(|r| qi(-r[0])).collect();
    assert_eq!(s, col);
}

#[test]
fn alpha_characters_vanish_on_small_orders() {
    let rows = alpha_basis_check(&data().m23().unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.vanishes_on_small_orders));
}

#[test]
fn shipped_forms_shape() {
    for f in data().forms().unwrap() {
        let c = check_form(&f, 60).unwrap();
        assert!(c.palindromic && c.degree_two_less, "{}", f.name);
        assert_eq!(c.integral_expansion, f.name != "r_tilde_11AB", "{}", f.name);
    }
}

#[test]
fn alternative_eleven_form_breaks_integrality() {
    let d = data();
    let t = d.m23().unwrap();
    let fam = m23_family(&t, &d.forms().unwrap(), Some("r_tilde_11AB")).unwrap();
    assert!(decompose_m23_family(&t, &fam, 21).unwrap().first_nonintegral.is_some());
}

#[test]
fn integrality_audit_rows() {
    let rows = integrality_audit(&data().fg().unwrap(), 8).unwrap();
    let get = |c: &str| rows.iter().find(|r| r.class == c).unwrap();
    for c in ["1A", "2A", "3A", "4B", "5A", "6A", "7A", "8A"] {
        assert_eq!(get(c).first_nonintegral, None, "{c}");
        assert_eq!(get(c).matches_geometric, Some(true), "{c}");
    }
    assert_eq!(get("11A").first_nonintegral, Some((4, "-2/3".into())));
    assert_eq!(get("14A").first_nonintegral, Some((4, "-5/3".into())));
    assert_eq!(get("15A").first_nonintegral, Some((3, "-1/2".into())));
    assert_eq!(get("23A").first_nonintegral, Some((4, "-7/3".into())));
}

#[test]
fn fifteen_ab_has_no_integral_alpha() {
    let a = alpha_audit(&data().fg().unwrap(), "15AB", 5).unwrap();
    assert!(!a.integral_alpha_exists);
}

#[test]
fn m24_extra_forms() {
    let fits = m24_extra_rational_forms(&data().fg().unwrap(), 20).unwrap();
    assert_eq!(fits[0].numerator, strs(&["2", "8", "2"]));
    assert_eq!(fits[1].numerator, strs(&["2", "6", "12", "12", "6", "2"]));
    assert!(fits.iter().all(|f| f.palindromic && f.degree_two_less));
}

#[test]
fn plus_five_variant_of_23ab_is_not_integral() {
    let d = data();
    let t = d.m23().unwrap();
    let fam = m23_family(&t, &d.forms().unwrap(), Some("r_23AB_plus5")).unwrap();
    let dec = decompose_m23_family(&t, &fam, 21).unwrap();
    assert_eq!(dec.first_nonintegral.map(|p| p.0), Some(4));
}
