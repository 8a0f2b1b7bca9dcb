//! Eta and theta functions, the weak Jacobi forms of index one, and a
//! floating-point evaluator for spot checks of transformation laws.
//!
//! Truncation orders are given on the 1/24 grid of [`Series`]: `trunc = 24`
//! means "known below q^1".

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactcore::series::{Series, EXACT, QDEN};
use crate::exactcore::{Coeff, Cyclotomic, Q};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn index(self) -> u8 {
        match self {
            ThetaKind::One => 1,
            ThetaKind::Two => 2,
            ThetaKind::Three => 3,
            ThetaKind::Four => 4,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(ThetaKind::One),
            2 => Some(ThetaKind::Two),
            3 => Some(ThetaKind::Three),
            4 => Some(ThetaKind::Four),
            _ => None,
        }
    }
}

/// Product over n >= 1 of (1 - q^n), by Euler's pentagonal theorem.
pub fn euler_product(trunc: i64) -> Series<Q> {
    let mut s = Series::zero(trunc);
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        let js: &[i64] = if k == 0 { &[0] } else { &[k, -k] };
        for &j in js {
            let e = j * (3 * j - 1) / 2 * QDEN;
            if e < trunc {
                any = true;
                let c = if j.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
                s.add_term((e, 0, 0), c);
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    s
}

/// q^(1/24) * prod (1 - q^n).
pub fn dedekind_eta(trunc: i64) -> Series<Q> {
    euler_product(trunc - 1).shift(1, 0, 0)
}

/// eta^3 = sum_{n>=0} (-1)^n (2n+1) q^((2n+1)^2/8), Jacobi's identity.
pub fn eta_cubed(trunc: i64) -> Series<Q> {
    let mut s = Series::zero(trunc);
    let mut n: i64 = 0;
    while 3 * (2 * n + 1) * (2 * n + 1) < trunc {
        let c = Q::from_integer(((1 - 2 * (n % 2)) * (2 * n + 1)).into());
        s.add_term((3 * (2 * n + 1) * (2 * n + 1), 0, 0), c);
        n += 1;
    }
    s
}

/// eta^(-k), known below `trunc`.
pub fn eta_inverse_power(k: u32, trunc: i64) -> Series<Q> {
    let lead = k as i64;
    let e = dedekind_eta(trunc + 2 * lead).pow(k);
    e.inverse().expect("eta has a monomial leading term").with_trunc(trunc)
}

/// 1 / eta^3, known below `trunc`.
pub fn eta_cubed_inverse(trunc: i64) -> Series<Q> {
    eta_cubed(trunc + 6).inverse().expect("monomial leading term").with_trunc(trunc)
}

fn theta_terms(kind: ThetaKind, trunc: i64, mut f: impl FnMut(i64, i32, i64)) {
    // half-integral index for kinds 1, 2: nu = (2k+1)/2; integral otherwise
    let half = matches!(kind, ThetaKind::One | ThetaKind::Two);
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for j in if k == 0 && !half { vec![0] } else { vec![k, -k - if half { 1 } else { 0 }] } {
            let (e, y2) = if half {
                let nu2 = 2 * j + 1;
                (3 * nu2 * nu2, nu2 as i32)
            } else {
                (12 * j * j, 2 * j as i32)
            };
            if e < trunc {
                any = true;
                let sign = match kind {
                    ThetaKind::Two | ThetaKind::Three => 1,
                    ThetaKind::Four => 1 - 2 * j.rem_euclid(2),
                    // (-1)^(nu - 1/2) = (-1)^j
                    ThetaKind::One => 1 - 2 * j.rem_euclid(2),
                };
                f(e, y2, sign);
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
}

/// Theta functions as (y, q)-series:
/// theta_3 = sum y^n q^(n^2/2), theta_4 = sum (-1)^n y^n q^(n^2/2),
/// theta_2 = sum_{nu in Z+1/2} y^nu q^(nu^2/2),
/// theta_1 = -i sum_{nu in Z+1/2} (-1)^(nu-1/2) y^nu q^(nu^2/2).
/// With these signs theta_1/eta^3 is the product
/// -i (y^(1/2) - y^(-1/2)) prod (1 - y q^n)(1 - q^n/y)(1 - q^n)^(-2).
pub fn jacobi_theta(kind: ThetaKind, trunc: i64) -> Series<Cyclotomic> {
    let mi = Cyclotomic::zeta(4, 3);
    let mut s = Series::zero(trunc);
    theta_terms(kind, trunc, |e, y2, sign| {
        let c = Cyclotomic::rational(Q::from_integer(sign.into()));
        let c = if kind == ThetaKind::One { c.mul(&mi) } else { c };
        s.add_term((e, y2, 0), c);
    });
    s
}

/// Rational-coefficient theta series. For kinds 2..4 this is the theta
/// function itself; for kind 1 it is i*theta_1, which drops the unit -i.
pub fn theta_rational(kind: ThetaKind, trunc: i64) -> Series<Q> {
    let mut s = Series::zero(trunc);
    theta_terms(kind, trunc, |e, y2, sign| s.add_term((e, y2, 0), Q::from_integer(sign.into())));
    s
}

/// theta_k(y=1) as a pure q-series (kinds 2, 3, 4).
pub fn theta_null(kind: ThetaKind, trunc: i64) -> Result<Series<Q>, Error> {
    if kind == ThetaKind::One {
        return Err(Error::Domain("theta_1 vanishes at y = 1".into()));
    }
    theta_rational(kind, trunc).eval_y(1)
}

/// The quotient phi = theta_1 / eta^3.
pub fn phi_quotient(trunc: i64) -> Series<Cyclotomic> {
    let t1 = jacobi_theta(ThetaKind::One, trunc + 3);
    let ie = eta_cubed_inverse(trunc + 3).map_coeffs(|c| Cyclotomic::rational(c.clone()));
    t1.mul(&ie).with_trunc(trunc)
}

/// The same quotient from the triple-product form.
pub fn phi_product(trunc: i64) -> Series<Cyclotomic> {
    let one = Cyclotomic::rational(Q::one());
    let mone = Cyclotomic::rational(-Q::one());
    let mi = Cyclotomic::zeta(4, 3);
    let mut s = Series::from_terms([((0, 1, 0), mi.clone()), ((0, -1, 0), mi.neg())], EXACT);
    let mut n = 1;
    while n * QDEN < trunc {
        let e = n * QDEN;
        s = s
            .mul(&Series::from_terms([((0, 0, 0), one.clone()), ((e, 2, 0), mone.clone())], EXACT))
            .with_trunc(trunc);
        s = s
            .mul(&Series::from_terms([((0, 0, 0), one.clone()), ((e, -2, 0), mone.clone())], EXACT))
            .with_trunc(trunc);
        let g = crate::exactcore::series::geometric(one.clone(), e, 0, 0, trunc);
        s = s.mul(&g).mul(&g).with_trunc(trunc);
        n += 1;
    }
    s.with_trunc(trunc)
}

fn divide(num: &Series<Q>, den: &Series<Q>, trunc: i64) -> Series<Q> {
    num.mul(&den.inverse().expect("invertible denominator")).with_trunc(trunc)
}

/// Weak Jacobi forms of index one and weight 0 or -2:
/// phi_{-2,1} = -theta_1^2/eta^6 = (y - 2 + 1/y) + O(q),
/// phi_{0,1} = 4 sum_{k=2,3,4} theta_k(y)^2 / theta_k(1)^2 = (y + 10 + 1/y) + O(q).
pub fn weak_jacobi_phi(weight: i32, trunc: i64) -> Result<Series<Q>, Error> {
    let m = trunc + 2 * QDEN;
    match weight {
        -2 => {
            // theta_1 = -i A with A rational, so -theta_1^2 = A^2.
            let a = theta_rational(ThetaKind::One, m);
            Ok(a.mul(&a).mul(&eta_inverse_power(6, m)).with_trunc(trunc))
        }
        0 => {
            let mut acc = Series::zero(trunc);
            for kind in [ThetaKind::Two, ThetaKind::Three, ThetaKind::Four] {
                let t = theta_rational(kind, m);
                let t0 = theta_null(kind, m)?;
                acc = acc.add(&divide(&t.mul(&t), &t0.mul(&t0), trunc));
            }
            Ok(acc.scale(&Q::from_integer(4.into())))
        }
        _ => Err(Error::Domain(format!("no weak Jacobi form of weight {weight} in this basis"))),
    }
}

/// The Euler-characteristic specialization of a series in the variable
/// y of chi_{-y}: that variable is set to 1 (it is y = -1 for chi_y).
pub fn euler_specialization(s: &Series<Q>) -> Result<Series<Q>, Error> {
    s.eval_y(1)
}

/// Double-precision value with an error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn agrees_with(&self, o: &ComplexApprox, slack: f64) -> bool {
        (self.value() - o.value()).norm() <= self.err + o.err + slack
    }
}

/// Coefficients that have a complex value.
pub trait ToComplex {
    fn to_complex(&self) -> Complex64;
}

impl ToComplex for Q {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl ToComplex for Cyclotomic {
    fn to_complex(&self) -> Complex64 {
        let (re, im) = Cyclotomic::to_complex(self);
        Complex64::new(re, im)
    }
}

/// Evaluates s at q = exp(2 pi i tau), y = exp(2 pi i u), z = 1.
///
/// The tail bound assumes the absolute contributions of integer q-blocks
/// decay at least geometrically beyond the last stored block, with the ratio
/// taken as the worst observed over the final blocks.
pub fn numeric_eval<C: Coeff + ToComplex>(
    s: &Series<C>,
    tau: Complex64,
    u: Complex64,
) -> Result<ComplexApprox, Error> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half-plane".into()));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut total = Complex64::zero();
    let mut abs_total = 0.0;
    let mut blocks: Vec<(i64, f64)> = Vec::new();
    for (k, c) in s.terms() {
        let e = k.0 as f64 / QDEN as f64;
        let m = k.1 as f64 / 2.0;
        let t = c.to_complex() * (two_pi_i * (tau * e + u * m)).exp();
        total += t;
        abs_total += t.norm();
        let b = k.0.div_euclid(QDEN);
        match blocks.last_mut() {
            Some((bb, a)) if *bb == b => *a += t.norm(),
            _ => blocks.push((b, t.norm())),
        }
    }
    let rounding = abs_total * 1e-14;
    let tail = if s.is_exact() || blocks.is_empty() {
        0.0
    } else {
        let qabs = (two_pi_i * tau).exp().norm();
        let tail_start = s.trunc().div_euclid(QDEN);
        let last = blocks.last().map(|b| b.1).unwrap_or(0.0);
        let mut rho = qabs;
        for w in blocks.windows(2).rev().take(3) {
            if w[0].1 > 0.0 {
                let gap = (w[1].0 - w[0].0).max(1) as f64;
                rho = rho.max((w[1].1 / w[0].1).powf(1.0 / gap));
            }
        }
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            let lead_gap = (tail_start - blocks.last().map(|b| b.0).unwrap_or(tail_start)).max(1);
            last * rho.powi(lead_gap as i32) / (1.0 - rho)
        }
    };
    Ok(ComplexApprox { re: total.re, im: total.im, err: tail + rounding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{q, qi};

    #[test]
    fn eta_leading_terms() {
        let e = dedekind_eta(6 * QDEN);
        assert_eq!(e.coeff(1, 0, 0), qi(1));
        assert_eq!(e.coeff(25, 0, 0), qi(-1));
        assert_eq!(e.coeff(49, 0, 0), qi(-1));
        assert_eq!(e.coeff(121, 0, 0), qi(1));
    }

    #[test]
    fn jacobi_identity_for_eta_cubed() {
        let t = 8 * QDEN;
        assert_eq!(dedekind_eta(t).pow(3).with_trunc(t), eta_cubed(t));
        assert_eq!(eta_cubed(t).coeff(3 + 24, 0, 0), qi(-3));
    }

    #[test]
    fn theta_low_terms() {
        let t3 = theta_rational(ThetaKind::Three, 2 * QDEN);
        assert_eq!(t3.coeff(0, 0, 0), qi(1));
        assert_eq!(t3.coeff(12, 2, 0), qi(1));
        assert_eq!(t3.coeff(12, -2, 0), qi(1));
        let t2 = theta_rational(ThetaKind::Two, 2 * QDEN);
        assert_eq!(t2.coeff(3, 1, 0), qi(1));
        assert_eq!(t2.coeff(3, -1, 0), qi(1));
    }

    #[test]
    fn phi_values_at_euler_point() {
        let p0 = weak_jacobi_phi(0, 3 * QDEN).unwrap();
        let p2 = weak_jacobi_phi(-2, 3 * QDEN).unwrap();
        let e0 = euler_specialization(&p0).unwrap();
        let e2 = euler_specialization(&p2).unwrap();
        assert_eq!(e0, Series::monomial(qi(12), 0, 0, 0, 3 * QDEN));
        assert!(e2.is_empty());
        assert_eq!(p0.coeff(0, 0, 0), qi(10));
        assert_eq!(p2.coeff(0, 2, 0), qi(1));
        assert_eq!(p2.coeff(0, 0, 0), qi(-2));
        assert_eq!(p0.coeff(24, 4, 0), qi(10));
        assert_eq!(p0.coeff(24, 0, 0), qi(108));
    }

    #[test]
    fn eta_at_i() {
        let e = dedekind_eta(20 * QDEN);
        let v = numeric_eval(&e, Complex64::new(0.0, 1.0), Complex64::zero()).unwrap();
        // Gamma(1/4) / (2 pi^(3/4))
        let exact = 3.625_609_908_221_908_f64 / (2.0 * std::f64::consts::PI.powf(0.75));
        assert!((v.re - exact).abs() <= v.err + 1e-12, "{v:?} vs {exact}");
    }

    #[test]
    fn constant_series_is_exact() {
        let s = Series::monomial(q(1, 1), 0, 0, 0, EXACT);
        let v = numeric_eval(&s, Complex64::new(0.3, 0.7), Complex64::new(0.1, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!(v.err < 1e-13);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let s = Series::<Q>::one(EXACT);
        assert!(numeric_eval(&s, Complex64::new(0.0, -1.0), Complex64::zero()).is_err());
    }
}
