//! Elements of Q(zeta_n) in the power basis modulo the n-th cyclotomic polynomial.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};


use super::poly::{cyclotomic_poly, Poly};
use super::rational::{fmt_q, qi, Q};
use crate::Error;

/// Largest ambient conductor allowed when two fields are combined.
pub const MAX_CONDUCTOR: u32 = 9240;

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u32,
    c: Vec<Q>,
}

fn modulus(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(m) = cache.read().unwrap().get(&n) {
        return m.clone();
    }
    let p = cyclotomic_poly(n as u64);
    let v: Vec<i64> = p
        .coeffs()
        .iter()
        .map(|x| x.to_integer().to_i64().expect("cyclotomic coefficient fits i64"))
        .collect();
    let v = Arc::new(v);
    cache.write().unwrap().insert(n, v.clone());
    v
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut r = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

fn mobius(n: u64) -> i64 {
    let mut m = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Trace of zeta_n^i from Q(zeta_n) to Q (a Ramanujan sum).
fn trace_of_power(n: u64, i: u64) -> i64 {
    let g = n.gcd(&i);
    let m = n / g;
    mobius(m) * (euler_phi(n) / euler_phi(m)) as i64
}

fn reduce(n: u32, mut p: Vec<Q>) -> Vec<Q> {
    let m = modulus(n);
    let d = m.len() - 1;
    for k in (d..p.len()).rev() {
        if p[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[k], Q::zero());
        for (j, mj) in m.iter().enumerate().take(d) {
            if *mj != 0 {
                p[k - d + j] -= &c * qi(*mj);
            }
        }
    }
    p.truncate(d);
    p.resize(d, Q::zero());
    p
}

impl Cyclotomic {
    pub fn rational(x: Q) -> Self {
        Cyclotomic { n: 1, c: vec![x] }
    }

    /// Builds an element from a power-basis residue of length phi(n).
    pub fn from_coeffs(n: u32, c: Vec<Q>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Domain("conductor must be positive".into()));
        }
        let d = euler_phi(n as u64) as usize;
        if c.len() != d {
            return Err(Error::Domain(format!(
                "conductor {n} needs {d} coefficients, got {}",
                c.len()
            )));
        }
        Ok(Cyclotomic { n, c })
    }

    /// zeta_n^k with zeta_n = exp(2 pi i / n).
    pub fn zeta(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![Q::zero(); e + 1];
        p[e] = Q::one();
        Cyclotomic { n, c: reduce(n, p) }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element inside Q(zeta_m), n | m.
    pub fn embed(&self, m: u32) -> Result<Self, Error> {
        if !m.is_multiple_of(self.n) {
            return Err(Error::Domain(format!("{} does not divide {m}", self.n)));
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let s = (m / self.n) as usize;
        let mut p = vec![Q::zero(); s * self.c.len().max(1)];
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                p[i * s] = x.clone();
            }
        }
        Ok(Cyclotomic { n: m, c: reduce(m, p) })
    }

    fn common(&self, o: &Self) -> Result<(Self, Self), Error> {
        if self.n == o.n {
            return Ok((self.clone(), o.clone()));
        }
        let l = self.n.lcm(&o.n);
        if l > MAX_CONDUCTOR {
            return Err(Error::Domain(format!(
                "no common embedding for conductors {} and {}",
                self.n, o.n
            )));
        }
        Ok((self.embed(l)?, o.embed(l)?))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, Error> {
        let (a, b) = self.common(o)?;
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        Ok(Cyclotomic { n: a.n, c })
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, Error> {
        if self.n == 1 {
            return Ok(o.scale(&self.c[0]));
        }
        if o.n == 1 {
            return Ok(self.scale(&o.c[0]));
        }
        let (a, b) = self.common(o)?;
        let mut p = vec![Q::zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Ok(Cyclotomic { n: a.n, c: reduce(a.n, p) })
    }

    pub fn scale(&self, s: &Q) -> Self {
        Cyclotomic { n: self.n, c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Galois automorphism zeta -> zeta^k, k coprime to the conductor.
    pub fn galois(&self, k: i64) -> Result<Self, Error> {
        let n = self.n as i64;
        if k.rem_euclid(n).gcd(&n) != 1 && n > 1 {
            return Err(Error::Domain(format!("{k} is not a unit mod {n}")));
        }
        let mut p = vec![Q::zero(); self.n as usize];
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                p[((i as i64) * k).rem_euclid(n.max(1)) as usize] += x;
            }
        }
        Ok(Cyclotomic { n: self.n, c: reduce(self.n, p) })
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Trace from Q(zeta_n) down to Q.
    pub fn trace(&self) -> Q {
        let n = self.n as u64;
        let mut t = Q::zero();
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                t += x * qi(trace_of_power(n, i as u64));
            }
        }
        t
    }

    pub fn try_inv(&self) -> Result<Self, Error> {
        if self.c.iter().all(|x| x.is_zero()) {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if self.n == 1 {
            return Ok(Cyclotomic::rational(self.c[0].recip()));
        }
        let a = Poly::new(self.c.clone());
        let m = cyclotomic_poly(self.n as u64);
        let (g, s, _) = a.ext_gcd(&m);
        // g is a nonzero constant because Phi_n is irreducible.
        let g0 = g.coeff(0);
        let mut c = s.coeffs().to_vec();
        c.resize(self.c.len().max(c.len()), Q::zero());
        let c = reduce(self.n, c).into_iter().map(|x| x / &g0).collect();
        Ok(Cyclotomic { n: self.n, c })
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let n = self.n as f64;
        for (i, x) in self.c.iter().enumerate() {
            let v = x.to_f64().unwrap_or(f64::NAN);
            let a = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }

    pub fn to_string_exact(&self) -> String {
        if let Some(r) = self.as_rational() {
            return fmt_q(&r);
        }
        let parts: Vec<String> = self.c.iter().map(fmt_q).collect();
        format!("cyc{}[{}]", self.n, parts.join(","))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        match self.common(o) {
            Ok((a, b)) => a.c == b.c,
            Err(_) => false,
        }
    }
}

impl super::coeff::Coeff for Cyclotomic {
    fn zero_elem() -> Self {
        Cyclotomic::rational(<Q as Zero>::zero())
    }
    fn one_elem() -> Self {
        Cyclotomic::rational(<Q as One>::one())
    }
    fn from_q(x: Q) -> Self {
        Cyclotomic::rational(x)
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("compatible conductors")
    }
    fn sub(&self, o: &Self) -> Self {
        self.try_add(&o.neg()).expect("compatible conductors")
    }
    fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("compatible conductors")
    }
    fn neg(&self) -> Self {
        Cyclotomic { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::coeff::Coeff;
    use crate::exactcore::rational::q;

    #[test]
    fn zeta_powers_close_up() {
        let z = Cyclotomic::zeta(7, 1);
        let mut p = Cyclotomic::one_elem();
        for _ in 0..7 {
            p = p.mul(&z);
        }
        assert_eq!(p, Cyclotomic::one_elem());
    }

    #[test]
    fn orbit_sum_is_mobius() {
        // sum of primitive 15th roots of unity is mu(15) = 1
        let mut s = Cyclotomic::zero_elem();
        for k in 1..15 {
            if k.gcd(&15) == 1 {
                s = s.add(&Cyclotomic::zeta(15, k));
            }
        }
        assert_eq!(s.as_rational(), Some(qi(1)));
        assert_eq!(Cyclotomic::zeta(15, 1).trace(), qi(1));
    }

    #[test]
    fn inverse_round_trip() {
        let a = Cyclotomic::from_coeffs(5, vec![q(1, 2), qi(3), qi(0), qi(-1)]).unwrap();
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), Cyclotomic::one_elem());
    }

    #[test]
    fn mixed_conductors_embed() {
        let i = Cyclotomic::zeta(4, 1);
        let w = Cyclotomic::zeta(3, 1);
        let p = i.mul(&w);
        assert_eq!(p.conductor(), 12);
        assert_eq!(p, Cyclotomic::zeta(12, 3 + 4));
    }

    #[test]
    fn conj_of_zeta() {
        let z = Cyclotomic::zeta(8, 3);
        assert_eq!(z.conj(), Cyclotomic::zeta(8, -3));
    }
}
