//! Dense univariate polynomials and rational functions in t over Q.

use num_traits::{One, Zero};
use std::fmt;

use super::rational::{fmt_q, qi, Q};
use crate::Error;

/// Power series in t stored as coefficients of t^0, t^1, ...
pub type TSeries = Vec<Q>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn one() -> Self {
        Poly { c: vec![Q::one()] }
    }

    /// t - a
    pub fn linear(a: Q) -> Self {
        Poly::new(vec![-a, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] += a * b;
                }
            }
        }
        Poly::new(r)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut qv = vec![Q::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] / &lc;
            for j in 0..=dd {
                let t = &f * &d.c[j];
                r[k - dd + j] -= t;
            }
            qv[k - dd] = f;
        }
        r.truncate(dd);
        (Poly::new(qv), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*o = g.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qq.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qq.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Coefficient list reads the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let n = self.c.len();
        (0..n / 2).all(|i| self.c[i] == self.c[n - 1 - i])
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.denom().is_one())
    }

    /// Truncated product of a power series with this polynomial.
    pub fn mul_series(&self, s: &[Q]) -> TSeries {
        let mut r = vec![Q::zero(); s.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in s.iter().enumerate() {
                if i + j >= r.len() {
                    break;
                }
                r[i + j] += a * b;
            }
        }
        r
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = *a < Q::zero();
            let m = if neg { -a } else { a.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = m.is_one();
            match i {
                0 => write!(f, "{}", fmt_q(&m))?,
                _ => {
                    if !unit {
                        write!(f, "{}*", fmt_q(&m))?;
                    }
                    if i == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "t^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> Poly {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    let mut num = vec![Q::zero(); n as usize + 1];
    num[0] = qi(-1);
    num[n as usize] = Q::one();
    let mut p = Poly::new(num);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (qq, r) = p.divrem(&cyclotomic_poly(d));
            debug_assert!(r.is_zero());
            p = qq;
        }
    }
    p
}

/// Factorization into cyclotomic polynomials, up to a scalar: (n, multiplicity)
/// in increasing n.
pub fn cyclotomic_factors(p: &Poly) -> Result<Vec<(u64, u32)>, Error> {
    let mut rest = p.clone();
    let mut out = Vec::new();
    let mut n = 1u64;
    while rest.degree().unwrap_or(0) > 0 {
        if n > 1000 {
            return Err(Error::Domain(format!("{p} is not a product of cyclotomic polynomials")));
        }
        let c = cyclotomic_poly(n);
        let mut k = 0;
        loop {
            let (qq, r) = rest.divrem(&c);
            if !r.is_zero() {
                break;
            }
            rest = qq;
            k += 1;
        }
        if k > 0 {
            out.push((n, k));
        }
        n += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Reduced to lowest terms with a monic denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lc = d.lead().recip();
        Ok(RationalFunction { num: n.scale(&lc), den: d.scale(&lc) })
    }

    /// num / prod Phi_n^k, reduced by cancelling cyclotomic factors. Equivalent
    /// to `new` because cyclotomic polynomials are irreducible over Q, but avoids
    /// a gcd of large-degree polynomials.
    pub fn over_cyclotomics(num: Poly, factors: &[(u64, u32)]) -> Self {
        let mut num = num;
        let mut den = Poly::one();
        if num.is_zero() {
            return RationalFunction { num, den };
        }
        for &(n, k) in factors {
            let c = cyclotomic_poly(n);
            let mut left = k;
            while left > 0 {
                let (qq, r) = num.divrem(&c);
                if !r.is_zero() {
                    break;
                }
                num = qq;
                left -= 1;
            }
            den = den.mul(&c.pow(left));
        }
        let lc = den.lead().recip();
        RationalFunction { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RationalFunction::new(n, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalFunction::new(self.num.scale(s), self.den.clone()).expect("nonzero denominator")
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction::new(self.num.mul(&o.num), self.den.mul(&o.den))
            .expect("nonzero denominators")
    }

    /// lim_{t -> 1} (t-1)^k f(t); None if the pole at 1 has order above k.
    pub fn pole_coefficient_at_one(&self, k: u32) -> Option<Q> {
        let one = Q::one();
        let mut den = self.den.clone();
        let mut order = 0u32;
        let lin = Poly::linear(one.clone());
        loop {
            let (qq, r) = den.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            den = qq;
            order += 1;
        }
        if order > k {
            return None;
        }
        if order < k {
            return Some(Q::zero());
        }
        Some(self.num.eval(&one) / den.eval(&one))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Power series expansion of r in t to `terms` coefficients.
pub fn expand_rational(r: &RationalFunction, terms: usize) -> Result<TSeries, Error> {
    let d0 = r.den.coeff(0);
    if d0.is_zero() {
        return Err(Error::Domain("denominator vanishes at t = 0".into()));
    }
    let inv0 = d0.recip();
    let mut out: Vec<Q> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = r.num.coeff(k);
        for j in 1..=k.min(r.den.c.len().saturating_sub(1)) {
            acc -= &r.den.c[j] * &out[k - j];
        }
        out.push(acc * &inv0);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RationalFit {
    pub function: RationalFunction,
    /// Numerator before reduction to lowest terms.
    pub numerator: Poly,
    pub palindromic: bool,
    /// deg numerator == deg denominator - 2
    pub degree_two_less: bool,
}

/// Finds P with s * den = P to the available order.
pub fn reconstruct_rational(s: &[Q], den: &Poly) -> Result<RationalFit, Error> {
    let dd = den.degree().ok_or_else(|| Error::Domain("zero denominator".into()))?;
    if s.len() < dd + 2 {
        return Err(Error::Underdetermined(format!(
            "{} terms cannot pin a numerator over a degree-{dd} denominator",
            s.len()
        )));
    }
    let prod = den.mul_series(s);
    if let Some(k) = (dd + 1..prod.len()).find(|&k| !prod[k].is_zero()) {
        return Err(Error::NoFit { index: k });
    }
    let p = Poly::new(prod[..=dd].to_vec());
    let palindromic = p.is_palindromic();
    let degree_two_less = p.degree().map(|d| d + 2 == dd).unwrap_or(false);
    Ok(RationalFit {
        function: RationalFunction::new(p.clone(), den.clone())?,
        numerator: p,
        palindromic,
        degree_two_less,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), Poly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), Poly::from_ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(6), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), Poly::from_ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(15).degree(), Some(8));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = Poly::from_ints(&[1, 2, 3]);
        let b = Poly::from_ints(&[-1, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn geometric_expansion() {
        let r = RationalFunction::new(Poly::one(), Poly::from_ints(&[1, -1])).unwrap();
        assert_eq!(expand_rational(&r, 4).unwrap(), vec![qi(1); 4]);
    }

    #[test]
    fn pole_at_zero_rejected() {
        let r = RationalFunction::new(Poly::one(), Poly::from_ints(&[0, 1])).unwrap();
        assert!(expand_rational(&r, 3).is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Poly::from_ints(&[2, -28, 2]).to_string(), "2 - 28*t + 2*t^2");
    }
}
