//! Truncated Laurent series in q, y and z.
//!
//! q-exponents are stored in units of 1/24. y-exponents are stored doubled so
//! that theta functions with half-integral y-powers fit the same integer map.
//! z-exponents are plain integers.

use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::coeff::Coeff;
use super::rational::{fmt_q, q, Q};
use crate::Error;

/// Denominator of the q-exponent grid.
pub const QDEN: i64 = 24;
/// Truncation order of a series that is exact (a Laurent polynomial).
pub const EXACT: i64 = i64::MAX / 8;

/// (q-exponent * 24, y-exponent * 2, z-exponent)
pub type Key = (i64, i32, i32);

/// q^a with a = num/den, as a grid position.
pub fn qexp(num: i64, den: i64) -> i64 {
    assert!((num * QDEN) % den == 0, "q^{num}/{den} is off the 1/24 grid");
    num * QDEN / den
}

pub fn qexp_to_q(e: i64) -> Q {
    q(e, QDEN)
}

fn add_t(t: i64, m: i64) -> i64 {
    if t >= EXACT {
        EXACT
    } else {
        (t + m).min(EXACT)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    trunc: i64,
    terms: BTreeMap<Key, C>,
}

/// First coefficient where two series differ below their common truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub key: Key,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: {} vs {}",
            fmt_key(&self.key),
            self.left,
            self.right
        )
    }
}

pub fn fmt_key(k: &Key) -> String {
    let mut s = format!("q^{}", fmt_q(&qexp_to_q(k.0)));
    if k.1 != 0 {
        s.push_str(&format!(" y^{}", fmt_q(&q(k.1 as i64, 2))));
    }
    if k.2 != 0 {
        s.push_str(&format!(" z^{}", k.2));
    }
    s
}

impl<C: Coeff> Series<C> {
    pub fn zero(trunc: i64) -> Self {
        Series { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(C::one_elem(), 0, 0, 0, trunc)
    }

    pub fn monomial(c: C, qe: i64, y2: i32, z: i32, trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term((qe, y2, z), c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, C)>>(it: I, trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        for (k, c) in it {
            s.add_term(k, c);
        }
        s
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, qe: i64, y2: i32, z: i32) -> C {
        self.terms.get(&(qe, y2, z)).cloned().unwrap_or_else(C::zero_elem)
    }

    /// Adds c at key, dropping terms at or above the truncation.
    pub fn add_term(&mut self, k: Key, c: C) {
        if k.0 >= self.trunc || c.is_zero_elem() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero_elem() {
                    o.remove();
                }
            }
        }
    }

    /// Smallest stored q-exponent, or the truncation for an empty series.
    pub fn min_q(&self) -> i64 {
        self.terms.keys().next().map(|k| k.0).unwrap_or(self.trunc)
    }

    pub fn with_trunc(&self, t: i64) -> Self {
        let t = t.min(self.trunc);
        Series {
            trunc: t,
            terms: self
                .terms
                .range(..(t, i32::MIN, i32::MIN))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let t = self.trunc.min(o.trunc);
        let mut r = self.with_trunc(t);
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero_elem() {
            return Self::zero(self.trunc);
        }
        self.map(|c| c.mul(s))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut r = Self::zero(self.trunc);
        for (k, c) in &self.terms {
            r.add_term(*k, f(c));
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut r = Series::zero(self.trunc);
        for (k, c) in &self.terms {
            r.add_term(*k, f(c));
        }
        r
    }

    /// Multiplies every term by q^dq y^(dy2/2) z^dz.
    pub fn shift(&self, dq: i64, dy2: i32, dz: i32) -> Self {
        Series {
            trunc: add_t(self.trunc, dq),
            terms: self.terms.iter().map(|(k, c)| ((k.0 + dq, k.1 + dy2, k.2 + dz), c.clone())).collect(),
        }
    }

    fn levels(&self) -> Vec<(i64, Vec<(i32, i32, C)>)> {
        let mut out: Vec<(i64, Vec<(i32, i32, C)>)> = Vec::new();
        for (k, c) in &self.terms {
            match out.last_mut() {
                Some((l, v)) if *l == k.0 => v.push((k.1, k.2, c.clone())),
                _ => out.push((k.0, vec![(k.1, k.2, c.clone())])),
            }
        }
        out
    }

    /// Product; the truncation is min(T_a + v(b), T_b + v(a)).
    pub fn mul(&self, o: &Self) -> Self {
        let t = add_t(self.trunc, o.min_q()).min(add_t(o.trunc, self.min_q()));
        let la = self.levels();
        let lb = o.levels();
        let mut targets: Vec<i64> = Vec::new();
        for (a, _) in &la {
            for (b, _) in &lb {
                if a + b < t {
                    targets.push(a + b);
                }
            }
        }
        targets.sort_unstable();
        targets.dedup();
        let b_index: HashMap<i64, usize> = lb.iter().enumerate().map(|(i, (l, _))| (*l, i)).collect();
        let work = |lvl: &i64| -> Vec<(Key, C)> {
            let mut acc: HashMap<(i32, i32), C> = HashMap::new();
            for (a, ta) in &la {
                let Some(&j) = b_index.get(&(lvl - a)) else { continue };
                for (ya, za, ca) in ta {
                    for (yb, zb, cb) in &lb[j].1 {
                        acc.entry((ya + yb, za + zb)).or_insert_with(C::zero_elem).add_mul(ca, cb);
                    }
                }
            }
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero_elem())
                .map(|((y, z), c)| ((*lvl, y, z), c))
                .collect()
        };
        let chunks: Vec<Vec<(Key, C)>> = if self.len() * o.len() > 4096 {
            targets.par_iter().map(work).collect()
        } else {
            targets.iter().map(work).collect()
        };
        let mut r = Self::zero(t);
        for ch in chunks {
            for (k, c) in ch {
                r.terms.insert(k, c);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(EXACT);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiplicative inverse. The lowest q-level must be a single invertible
    /// monomial. The result is valid below T - 2v where v is the valuation.
    pub fn inverse(&self) -> Result<Self, Error> {
        if self.is_exact() {
            return Err(Error::Domain("inverse of an exact series needs a truncation".into()));
        }
        let levels = self.levels();
        let Some((m, lead)) = levels.first() else {
            return Err(Error::Structural("inverse of zero".into()));
        };
        if lead.len() != 1 {
            return Err(Error::Structural(format!(
                "leading coefficient at q^{} is not a monomial",
                fmt_q(&qexp_to_q(*m))
            )));
        }
        let (ly, lz, lc) = &lead[0];
        let inv = lc.inv().ok_or_else(|| Error::Structural("leading coefficient is not a unit".into()))?;
        let p = self.trunc - m;
        // u = a / lead - 1, grouped by relative level.
        let u: Vec<(i64, Vec<(i32, i32, C)>)> = levels[1..]
            .iter()
            .filter(|(l, _)| l - m < p)
            .map(|(l, v)| (l - m, v.iter().map(|(y, z, c)| (y - ly, z - lz, c.mul(&inv))).collect()))
            .collect();
        let g = u.iter().fold(0i64, |g, (l, _)| num_integer::gcd(g, *l));
        let mut b: Vec<HashMap<(i32, i32), C>> = Vec::new();
        let mut h0 = HashMap::new();
        h0.insert((0, 0), C::one_elem());
        b.push(h0);
        if g > 0 {
            let steps = ((p - 1) / g) as usize;
            for s in 1..=steps {
                let lvl = s as i64 * g;
                let mut acc: HashMap<(i32, i32), C> = HashMap::new();
                for (l, ul) in &u {
                    if *l > lvl {
                        break;
                    }
                    let prev = &b[((lvl - l) / g) as usize];
                    for (uy, uz, uc) in ul {
                        for ((by, bz), bc) in prev {
                            acc.entry((uy + by, uz + bz)).or_insert_with(C::zero_elem).add_mul(uc, bc);
                        }
                    }
                }
                acc.retain(|_, c| !c.is_zero_elem());
                for c in acc.values_mut() {
                    *c = c.neg();
                }
                b.push(acc);
            }
        }
        let t = self.trunc - 2 * m;
        let mut r = Self::zero(t);
        for (s, lvl) in b.into_iter().enumerate() {
            let qe = s as i64 * g - m;
            for ((y, z), c) in lvl {
                r.add_term((qe, y - ly, z - lz), c.mul(&inv));
            }
        }
        Ok(r)
    }

    /// Substitutes y -> y q^(s/2), i.e. y^m q^e -> y^m q^(e + m s / 2) with
    /// m = y2 / 2; `s_q24` is s in 1/24 units. The caller supplies the
    /// guaranteed truncation of the result, which depends on how far the
    /// y-range of the omitted terms extends.
    pub fn substitute_y_power(&self, s_q24: i64, trunc: i64) -> Self {
        let mut r = Self::zero(trunc);
        for (k, c) in &self.terms {
            let d = k.1 as i64 * s_q24;
            debug_assert!(d % 2 == 0 || s_q24 % 2 == 0);
            r.add_term((k.0 + d / 2, k.1, k.2), c.clone());
        }
        r
    }

    /// y -> -y. Fails on half-integral y-exponents.
    pub fn flip_y(&self) -> Result<Self, Error> {
        let mut r = Self::zero(self.trunc);
        for (k, c) in &self.terms {
            if k.1 % 2 != 0 {
                return Err(Error::Domain("y -> -y needs integral y-exponents".into()));
            }
            let c = if (k.1 / 2) % 2 != 0 { c.neg() } else { c.clone() };
            r.add_term(*k, c);
        }
        Ok(r)
    }

    /// Sets y = 1 (sign = 1) or y = -1 (sign = -1).
    pub fn eval_y(&self, sign: i32) -> Result<Self, Error> {
        let mut r = Self::zero(self.trunc);
        for (k, c) in &self.terms {
            let c = if sign < 0 {
                if k.1 % 2 != 0 {
                    return Err(Error::Domain("y = -1 needs integral y-exponents".into()));
                }
                if (k.1 / 2) % 2 != 0 {
                    c.neg()
                } else {
                    c.clone()
                }
            } else {
                c.clone()
            };
            r.add_term((k.0, 0, k.2), c);
        }
        Ok(r)
    }

    /// Coefficient of z^k as a (q, y)-series.
    pub fn z_coeff(&self, k: i32) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(key, _)| key.2 == k).map(|(key, c)| ((key.0, key.1, 0), c.clone())),
            self.trunc,
        )
    }

    /// Replaces z^k by the scalar f(k).
    pub fn contract_z(&self, f: impl Fn(i32) -> C) -> Self {
        let mut r = Self::zero(self.trunc);
        for (k, c) in &self.terms {
            r.add_term((k.0, k.1, 0), c.mul(&f(k.2)));
        }
        r
    }

    pub fn is_pure_q(&self) -> bool {
        self.terms.keys().all(|k| k.1 == 0 && k.2 == 0)
    }

    /// Terms at one q-level.
    pub fn level(&self, qe: i64) -> Vec<(i32, i32, C)> {
        self.terms
            .range((qe, i32::MIN, i32::MIN)..(qe + 1, i32::MIN, i32::MIN))
            .map(|(k, c)| (k.1, k.2, c.clone()))
            .collect()
    }

    pub fn q_levels(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    /// Compares coefficients below the smaller of the two truncations.
    pub fn agree(&self, o: &Self) -> Result<(), Mismatch> {
        let t = self.trunc.min(o.trunc);
        let d = self.with_trunc(t).sub(&o.with_trunc(t));
        match d.terms.iter().next() {
            None => Ok(()),
            Some((k, _)) => Err(Mismatch {
                key: *k,
                left: format!("{:?}", self.coeff(k.0, k.1, k.2)),
                right: format!("{:?}", o.coeff(k.0, k.1, k.2)),
            }),
        }
    }

    /// Invariance under y -> 1/y.
    pub fn is_y_symmetric(&self) -> bool {
        self.terms.iter().all(|(k, c)| self.coeff(k.0, -k.1, k.2) == *c)
    }
}

impl Series<Q> {
    /// Coefficient at q^(num/den) y^m z^k for integral m.
    pub fn at(&self, qnum: i64, qden: i64, y: i32, z: i32) -> Q {
        self.coeff(qexp(qnum, qden), 2 * y, z)
    }
}

/// 1 / (1 - c q^e y^(y2/2) z^k) expanded as a geometric series, e > 0.
pub fn geometric<C: Coeff>(c: C, qe: i64, y2: i32, z: i32, trunc: i64) -> Series<C> {
    assert!(qe > 0, "geometric expansion needs a positive q-exponent");
    let mut r = Series::zero(trunc);
    let mut p = C::one_elem();
    let mut k: i64 = 0;
    while k * qe < trunc {
        r.add_term((k * qe, y2 * k as i32, z * k as i32), p.clone());
        p = p.mul(&c);
        k += 1;
    }
    r
}

/// 1 + c q^e y^(y2/2) z^k as an exact series.
pub fn binomial<C: Coeff>(c: C, qe: i64, y2: i32, z: i32) -> Series<C> {
    let mut r = Series::one(EXACT);
    r.add_term((qe, y2, z), c);
    r
}

impl<C: Coeff> fmt::Display for Series<C>
where
    C: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lvl in self.q_levels() {
            write!(f, "q^{}:", fmt_q(&qexp_to_q(lvl)))?;
            for (y, z, c) in self.level(lvl) {
                write!(f, " {:?}", c)?;
                if y != 0 {
                    write!(f, "*y^{}", fmt_q(&q(y as i64, 2)))?;
                }
                if z != 0 {
                    write!(f, "*z^{z}")?;
                }
            }
            writeln!(f)?;
        }
        if !self.is_exact() {
            writeln!(f, "+ O(q^{})", fmt_q(&qexp_to_q(self.trunc)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::qi;

    fn s(terms: &[(i64, i64)], t: i64) -> Series<Q> {
        Series::from_terms(terms.iter().map(|&(e, c)| ((e * QDEN, 0, 0), qi(c))), t * QDEN)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[(0, 1), (1, 1)], 3);
        let b = s(&[(0, 1), (1, -1)], 3);
        assert_eq!(a.mul(&b), s(&[(0, 1), (2, -1)], 3));
    }

    #[test]
    fn pentagonal_prefix() {
        let mut p = Series::<Q>::one(EXACT);
        for n in 1..=3 {
            p = p.mul(&binomial(qi(-1), n * QDEN, 0, 0));
        }
        assert_eq!(p.with_trunc(4 * QDEN), s(&[(0, 1), (1, -1), (2, -1)], 4));
    }

    #[test]
    fn geometric_inverse() {
        let a = s(&[(0, 1), (1, -1)], 4);
        assert_eq!(a.inverse().unwrap(), s(&[(0, 1), (1, 1), (2, 1), (3, 1)], 4));
    }

    #[test]
    fn truncation_follows_valuation() {
        let a = s(&[(1, 1)], 5);
        let b = s(&[(2, 1)], 4);
        assert_eq!(a.mul(&b).trunc(), 5 * QDEN);
    }
}
