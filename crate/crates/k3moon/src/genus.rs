//! Genera of K3: twisted Todd genera of symmetric powers of the tangent
//! bundle, the complex elliptic genus, and their equivariant versions for
//! symplectic automorphisms via the holomorphic Lefschetz formula.
//!
//! Elliptic genera are returned as chi_{-y}, i.e. with q^0 part
//! 2/y + 20 + 2y. The bundle expansion natively produces chi_y, which differs
//! by y -> -y.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactcore::poly::{cyclotomic_poly, reconstruct_rational, TSeries};
use crate::exactcore::series::{binomial, geometric, Mismatch, Series, EXACT, QDEN};
use crate::exactcore::{fmt_q, q, qi, Coeff, Cyclotomic, Poly, RationalFunction, Q};
use crate::modforms::{euler_specialization, weak_jacobi_phi};
use crate::Error;

/// Conjugacy classes of symplectic automorphisms, labelled as in M23.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SymplecticClass {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7AB,
    A8,
}

impl SymplecticClass {
    pub const ALL: [SymplecticClass; 8] = [
        SymplecticClass::A1,
        SymplecticClass::A2,
        SymplecticClass::A3,
        SymplecticClass::A4,
        SymplecticClass::A5,
        SymplecticClass::A6,
        SymplecticClass::A7AB,
        SymplecticClass::A8,
    ];

    pub const NONTRIVIAL: [SymplecticClass; 7] = [
        SymplecticClass::A2,
        SymplecticClass::A3,
        SymplecticClass::A4,
        SymplecticClass::A5,
        SymplecticClass::A6,
        SymplecticClass::A7AB,
        SymplecticClass::A8,
    ];

    pub fn order(self) -> u32 {
        match self {
            SymplecticClass::A1 => 1,
            SymplecticClass::A2 => 2,
            SymplecticClass::A3 => 3,
            SymplecticClass::A4 => 4,
            SymplecticClass::A5 => 5,
            SymplecticClass::A6 => 6,
            SymplecticClass::A7AB => 7,
            SymplecticClass::A8 => 8,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SymplecticClass::A1 => "1A",
            SymplecticClass::A2 => "2A",
            SymplecticClass::A3 => "3A",
            SymplecticClass::A4 => "4A",
            SymplecticClass::A5 => "5A",
            SymplecticClass::A6 => "6A",
            SymplecticClass::A7AB => "7AB",
            SymplecticClass::A8 => "8A",
        }
    }

    /// The M24 class containing this M23 class.
    pub fn m24_label(self) -> &'static str {
        match self {
            SymplecticClass::A4 => "4B",
            SymplecticClass::A7AB => "7A",
            c => c.label(),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        let u = s.trim().to_ascii_uppercase();
        SymplecticClass::ALL.into_iter().find(|c| {
            c.label() == u || (u == "7A" || u == "7B") && *c == SymplecticClass::A7AB
        })
    }

    pub fn from_order(n: u32) -> Option<Self> {
        SymplecticClass::ALL.into_iter().find(|c| c.order() == n)
    }
}

/// Isolated fixed points of a symplectic automorphism: each entry (a, k)
/// stands for k points with tangent eigenvalues (zeta_n^a, zeta_n^-a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointData {
    pub order: u32,
    pub points: Vec<(i64, u32)>,
}

impl FixedPointData {
    pub fn count(&self) -> u32 {
        self.points.iter().map(|p| p.1).sum()
    }
}

pub fn fixed_points(g: SymplecticClass) -> Option<FixedPointData> {
    let points = match g.order() {
        2 => vec![(1, 8)],
        3 => vec![(1, 6)],
        4 => vec![(1, 4)],
        5 => vec![(1, 2), (2, 2)],
        6 => vec![(1, 2)],
        7 => vec![(1, 1), (2, 1), (3, 1)],
        8 => vec![(1, 1), (3, 1)],
        _ => return None,
    };
    Some(FixedPointData { order: g.order(), points })
}

/// Euler characteristic of the fixed locus; 24 for the identity.
pub fn euler_number(g: SymplecticClass) -> u32 {
    fixed_points(g).map(|f| f.count()).unwrap_or(24)
}

/// chi(X, S^n T) = 2(n+1) - 12 sum_{i=0}^n (n-2i)^2.
pub fn chi_sym_power(n: u32) -> i64 {
    let n = n as i64;
    let s: i64 = (0..=n).map(|i| (n - 2 * i) * (n - 2 * i)).sum();
    2 * (n + 1) - 12 * s
}

fn point_weight(lam: &Cyclotomic) -> Cyclotomic {
    let one = Cyclotomic::one_elem();
    one.sub(lam).mul(&one.sub(&lam.conj())).inv().expect("eigenvalue differs from 1")
}

/// Coefficients of chi(g; X, S_t T) up to t^(terms-1).
pub fn chi_symt_series(g: SymplecticClass, terms: usize) -> Result<TSeries, Error> {
    let Some(fp) = fixed_points(g) else {
        return Ok((0..terms as u32).map(|n| qi(chi_sym_power(n))).collect());
    };
    let n = fp.order;
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms as i64 {
        let mut tot = Cyclotomic::zero_elem();
        for &(a, mult) in &fp.points {
            let lam = Cyclotomic::zeta(n, a);
            let mut h = Cyclotomic::zero_elem();
            for i in 0..=k {
                h = h.add(&Cyclotomic::zeta(n, a * (k - 2 * i)));
            }
            let w = point_weight(&lam).mul(&h).scale(&qi(mult as i64));
            tot = tot.add(&w);
        }
        out.push(tot.as_rational().ok_or_else(|| {
            Error::Structural(format!("t^{k} coefficient for {} is not rational", g.label()))
        })?);
    }
    Ok(out)
}

/// The cyclotomic denominator of the rational form of chi(g; X, S_t T).
pub fn rational_denominator(g: SymplecticClass) -> Poly {
    match g {
        SymplecticClass::A1 => Poly::from_ints(&[-1, 1]).pow(4),
        SymplecticClass::A2 => cyclotomic_poly(2).pow(2),
        c => cyclotomic_poly(c.order() as u64),
    }
}

/// Rational function with the expected denominator, fitted to the series and
/// checked to 2*deg + 4 terms. The numerator must be palindromic of degree two
/// less than the denominator.
pub fn rational_form(g: SymplecticClass) -> Result<RationalFunction, Error> {
    let den = rational_denominator(g);
    let d = den.degree().expect("nonzero");
    let s = chi_symt_series(g, 2 * d + 4)?;
    let fit = reconstruct_rational(&s, &den)?;
    if !fit.palindromic || !fit.degree_two_less {
        return Err(Error::Structural(format!(
            "numerator {} of {} lacks the expected shape",
            fit.numerator,
            g.label()
        )));
    }
    Ok(fit.function)
}

/// Numerator over the unreduced expected denominator.
pub fn rational_numerator(g: SymplecticClass) -> Result<Poly, Error> {
    let den = rational_denominator(g);
    let d = den.degree().expect("nonzero");
    let s = chi_symt_series(g, 2 * d + 4)?;
    Ok(reconstruct_rational(&s, &den)?.numerator)
}

#[derive(Clone, Debug)]
pub struct EquivariantGenusResult {
    pub class: SymplecticClass,
    pub series: Series<Q>,
    pub rational: Option<RationalFunction>,
}

/// Prefactor (-y)^(-1) (1 + y x)(1 + y/x) and the product over n >= 1 of
/// (1 + y q^n x)(1 + q^n/(y x))(1 + y q^n/x)(1 + q^n x/y) / ((1 - q^n x)(1 - q^n/x))^2,
/// where x and 1/x are given as (coefficient, z-exponent).
fn bundle_product<C: Coeff>(x: (C, i32), xi: (C, i32), trunc: i64) -> Series<C> {
    let one = C::one_elem();
    let mone = one.neg();
    let mut s = Series::from_terms(
        [((0, -2, 0), mone.clone()), ((0, 0, x.1), x.0.neg()), ((0, 0, xi.1), xi.0.neg()), ((0, 2, 0), mone.clone())],
        EXACT,
    );
    // (-y)^-1 (1 + y x)(1 + y/x) = -1/y - x - 1/x - y
    let mut n: i64 = 1;
    while n * QDEN < trunc {
        let e = n * QDEN;
        for (c, z) in [&x, &xi] {
            for y2 in [2, -2] {
                s = s.mul(&binomial(c.clone(), e, y2, *z)).with_trunc(trunc);
            }
            let g = geometric(c.clone(), e, 0, *z, trunc);
            s = s.mul(&g).mul(&g).with_trunc(trunc);
        }
        n += 1;
    }
    s.with_trunc(trunc)
}

/// chi_y(q, LX) before taking Euler characteristics: z^k stands for the weight-k
/// part of the tangent representation of SU(2).
pub fn elliptic_genus_su2(trunc: i64) -> Series<Q> {
    bundle_product((Q::one(), 1), (Q::one(), -1), trunc)
}

/// The complex elliptic genus chi_{-y}(q, LX) of K3, known below `trunc`.
///
/// The bundle expansion is carried out in the representation ring of SU(2)
/// with z tracking the weight of the tangent representation, and each z^k is
/// then replaced by chi(X, -) of the corresponding virtual bundle.
pub fn elliptic_genus(trunc: i64) -> Series<Q> {
    let s = elliptic_genus_su2(trunc);
    let k3 = s.contract_z(|k| qi(2 - 12 * (k as i64) * (k as i64)));
    k3.flip_y().expect("integral y-exponents")
}

/// Equivariant elliptic genus chi_{-y}(g; q, LX) from the fixed-point formula.
pub fn equivariant_elliptic_genus(g: SymplecticClass, trunc: i64) -> Result<Series<Q>, Error> {
    let Some(fp) = fixed_points(g) else {
        return Ok(elliptic_genus(trunc));
    };
    let n = fp.order;
    let parts: Vec<Series<Cyclotomic>> = fp
        .points
        .par_iter()
        .map(|&(a, mult)| {
            let lam = Cyclotomic::zeta(n, a);
            let w = point_weight(&lam).scale(&qi(mult as i64));
            bundle_product((lam.clone(), 0), (lam.conj(), 0), trunc).scale(&w)
        })
        .collect();
    let mut tot = Series::zero(trunc);
    for p in &parts {
        tot = tot.add(p);
    }
    let mut out = Series::zero(trunc);
    for (k, c) in tot.terms() {
        let r = c.as_rational().ok_or_else(|| {
            Error::Structural(format!("fixed-point sum for {} has an irrational coefficient", g.label()))
        })?;
        out.add_term(*k, r);
    }
    out.flip_y()
}

/// Bookkeeping multiplicity in the phi-quotient form of the twining genus.
pub fn lemma_multiplicity(order: u32) -> Option<Q> {
    Some(match order {
        2 => qi(8),
        3 => qi(3),
        4 => qi(2),
        5 | 6 => qi(1),
        7 | 8 => q(1, 2),
        _ => return None,
    })
}

/// sum_{nu in Z+1/2} (-1)^(nu-1/2) w^(2 nu) y^nu q^(nu^2/2) with w = zeta_{2N}^k;
/// the factor -i of theta_1 cancels in the quotients below. With `at_one` the
/// y-dependence is dropped.
fn shifted_theta1(cond: u32, k: i64, at_one: bool, trunc: i64) -> Series<Cyclotomic> {
    let a = crate::modforms::theta_rational(crate::modforms::ThetaKind::One, trunc);
    let mut s = Series::zero(trunc);
    for (key, c) in a.terms() {
        let w = Cyclotomic::zeta(cond, k * key.1 as i64).scale(c);
        let y2 = if at_one { 0 } else { key.1 };
        s.add_term((key.0, y2, 0), w);
    }
    s
}

/// m(N) sum_{n in (Z/N)^*} phi(u+n/N) phi(u-n/N) / (phi(n/N) phi(-n/N)).
pub fn phi_quotient_genus(g: SymplecticClass, trunc: i64) -> Result<Series<Q>, Error> {
    let n = g.order();
    let m = lemma_multiplicity(n).ok_or_else(|| Error::Domain("identity class".into()))?;
    let cond = 2 * n;
    let units: Vec<i64> = (1..n as i64).filter(|k| num_integer::gcd(*k, n as i64) == 1).collect();
    let t = trunc + 6;
    let parts: Vec<Result<Series<Cyclotomic>, Error>> = units
        .par_iter()
        .map(|&k| {
            let num = shifted_theta1(cond, k, false, t).mul(&shifted_theta1(cond, -k, false, t));
            let den = shifted_theta1(cond, k, true, t).mul(&shifted_theta1(cond, -k, true, t));
            Ok(num.mul(&den.inverse()?).with_trunc(trunc))
        })
        .collect();
    let mut tot = Series::zero(trunc);
    for p in parts {
        tot = tot.add(&p?);
    }
    let mut out = Series::zero(trunc);
    for (k, c) in tot.terms() {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Structural("phi-quotient sum is not rational".into()))?;
        out.add_term(*k, r * &m);
    }
    Ok(out)
}

/// s = a * phi_{0,1} + h(q) * phi_{-2,1}.
#[derive(Clone, Debug)]
pub struct JacobiSplit {
    pub a: Q,
    pub h: Series<Q>,
}

/// Splits an index-one weak Jacobi form of weight zero into the basis
/// phi_{0,1}, h(q) phi_{-2,1}.
pub fn jacobi_split(s: &Series<Q>) -> Result<JacobiSplit, Error> {
    let trunc = s.trunc();
    if s.terms().any(|(k, _)| k.0 < 0 || (k.0 < QDEN && k.1.abs() > 2)) {
        return Err(Error::Domain("series does not have the shape of an index-one form".into()));
    }
    let e = euler_specialization(s)?;
    let a = e.coeff(0, 0, 0) / qi(12);
    let p0 = weak_jacobi_phi(0, trunc)?;
    let p2 = weak_jacobi_phi(-2, trunc)?;
    let mut r = s.sub(&p0.scale(&a));
    let mut h = Series::zero(trunc);
    let mut lvl = 0;
    while lvl < trunc {
        let c = r.coeff(lvl, 2, 0);
        if !c.is_zero() {
            r = r.sub(&p2.shift(lvl, 0, 0).scale(&c).with_trunc(trunc));
            h.add_term((lvl, 0, 0), c);
        }
        lvl += QDEN;
    }
    if let Some((k, c)) = r.terms().next() {
        return Err(Error::Mismatch(format!(
            "not in the span of phi_0,1 and phi_-2,1: residual {} at {}",
            fmt_q(c),
            crate::exactcore::series::fmt_key(k)
        )));
    }
    Ok(JacobiSplit { a, h })
}

/// e/12 phi_{0,1} + f phi_{-2,1}.
pub fn twining_from_moonshine(e: &Q, f: &Series<Q>, trunc: i64) -> Result<Series<Q>, Error> {
    let p0 = weak_jacobi_phi(0, trunc)?;
    let p2 = weak_jacobi_phi(-2, trunc)?;
    Ok(p0.scale(&(e / qi(12))).add(&f.with_trunc(trunc).mul(&p2)).with_trunc(trunc))
}

#[derive(Clone, Debug, Serialize)]
pub struct MoonshineReport {
    pub class: String,
    pub agrees: bool,
    pub first_mismatch: Option<String>,
}

/// Compares the fixed-point twining genus with e(g)/12 phi_{0,1} + f_g phi_{-2,1}.
pub fn verify_moonshine_class(
    g: SymplecticClass,
    f_g: &Series<Q>,
    trunc: i64,
) -> Result<MoonshineReport, Error> {
    let lhs = equivariant_elliptic_genus(g, trunc)?;
    let e = qi(euler_number(g) as i64);
    let rhs = twining_from_moonshine(&e, f_g, trunc)?;
    let res = lhs.agree(&rhs);
    Ok(MoonshineReport {
        class: g.label().to_string(),
        agrees: res.is_ok(),
        first_mismatch: res.err().map(|m: Mismatch| m.to_string()),
    })
}

/// A pure q-series from coefficients c_0, c_1, ... at integer powers.
pub fn q_series(coeffs: &[Q], trunc: i64) -> Series<Q> {
    Series::from_terms(
        coeffs.iter().enumerate().map(|(i, c)| ((i as i64 * QDEN, 0, 0), c.clone())),
        trunc.min(coeffs.len() as i64 * QDEN),
    )
}

/// Integer-power coefficients of a pure q-series.
pub fn q_coefficients(s: &Series<Q>) -> Vec<Q> {
    let n = (s.trunc() + QDEN - 1) / QDEN;
    (0..n).map(|i| s.coeff(i * QDEN, 0, 0)).collect()
}

/// The constant value of the Euler specialization, if it is constant.
pub fn euler_constant(s: &Series<Q>) -> Result<Q, Error> {
    let e = euler_specialization(s)?;
    let c = e.coeff(0, 0, 0);
    if e.terms().any(|(k, _)| k.0 != 0) {
        return Err(Error::Structural("Euler specialization is not constant".into()));
    }
    Ok(if c.is_zero() { Q::zero() } else { c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_powers() {
        assert_eq!(chi_sym_power(0), 2);
        assert_eq!(chi_sym_power(1), -20);
        assert_eq!(chi_sym_power(3), -232);
    }

    #[test]
    fn table_counts() {
        let counts: Vec<u32> = SymplecticClass::NONTRIVIAL.iter().map(|&g| euler_number(g)).collect();
        assert_eq!(counts, vec![8, 6, 4, 4, 2, 3, 2]);
    }

    #[test]
    fn two_a_series() {
        let s = chi_symt_series(SymplecticClass::A2, 4).unwrap();
        assert_eq!(s, vec![qi(2), qi(-4), qi(6), qi(-8)]);
    }

    #[test]
    fn labels_round_trip() {
        for g in SymplecticClass::ALL {
            assert_eq!(SymplecticClass::from_label(g.label()), Some(g));
        }
        assert_eq!(SymplecticClass::from_label("7b"), Some(SymplecticClass::A7AB));
        assert_eq!(SymplecticClass::A4.m24_label(), "4B");
    }

    #[test]
    fn genus_q0() {
        let e = elliptic_genus(QDEN);
        assert_eq!(e.coeff(0, 2, 0), qi(2));
        assert_eq!(e.coeff(0, 0, 0), qi(20));
        assert_eq!(e.coeff(0, -2, 0), qi(2));
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn split_of_phi_m2() {
        let p = weak_jacobi_phi(-2, 3 * QDEN).unwrap();
        let s = jacobi_split(&p).unwrap();
        assert!(s.a.is_zero());
        assert_eq!(s.h, Series::monomial(qi(1), 0, 0, 0, 3 * QDEN));
    }
}
