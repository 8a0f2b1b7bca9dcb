//! Characters of the N=4 super Virasoro algebra and of the modules V_N of
//! the holonomy-invariant subalgebra, Appell-Lerch sums, spectral flow and
//! decompositions of elliptic genera into N=4 characters.
//!
//! All truncations are on the 1/24 grid of [`Series`]. Characters in the NS
//! sector follow the normalization ch_h = q^(h-3/8) theta_3^2 / eta^3 for the
//! typical representations; Ramond characters are their spectral flows.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::exactcore::series::{geometric, qexp_to_q, Series, EXACT, QDEN};
use crate::exactcore::{fmt_q, q, qi, Q};
use crate::genus::{chi_sym_power, elliptic_genus_su2};
use crate::modforms::{eta_cubed_inverse, theta_rational, ThetaKind};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sector {
    NS,
    Ramond,
}

impl std::str::FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "ns" | "neveu-schwarz" => Ok(Sector::NS),
            "r" | "ramond" => Ok(Sector::Ramond),
            _ => Err(Error::Parse(format!("unknown sector {s:?}"))),
        }
    }
}

/// Character of V_N in one sector.
#[derive(Clone, Debug)]
pub struct VGCharacter {
    pub n: u32,
    pub sector: Sector,
    pub series: Series<Q>,
}

/// Multiplicities of N=4 characters in a decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct N4Multiplicities {
    pub sector: Sector,
    /// Coefficient of the massless character with h = 1/4, l = 0.
    pub atypical: Q,
    /// (h, multiplicity) for the typical characters, sorted by h.
    pub typical: Vec<(Q, Q)>,
    /// Weights h below this value are fully determined.
    pub known_below: Q,
}

impl N4Multiplicities {
    pub fn at(&self, h: &Q) -> Q {
        self.typical.iter().find(|(k, _)| k == h).map(|p| p.1.clone()).unwrap_or_else(Q::zero)
    }
}

/// q^(-1/4) prod_{n>=1} (1 + z y q^(n-1/2))(1 + z q^(n-1/2)/y)(1 + y q^(n-1/2)/z)
/// (1 + q^(n-1/2)/(y z)) / ((1 - z q^n)^2 (1 - q^n/z)^2), keeping z^k for |k| <= z_range.
pub fn ch_v_product(trunc: i64, z_range: i32) -> Result<Series<Q>, Error> {
    if trunc <= -6 || z_range < 0 {
        return Err(Error::Domain("truncation parameters must be positive".into()));
    }
    let t = trunc + 6;
    let mut s = Series::one(EXACT);
    let mut n: i64 = 1;
    while (2 * n - 1) * 12 < t {
        let f = (2 * n - 1) * 12;
        for (y2, z) in [(2, 1), (-2, 1), (2, -1), (-2, -1)] {
            let mut b = Series::one(EXACT);
            b.add_term((f, y2, z), Q::one());
            s = s.mul(&b).with_trunc(t);
        }
        if n * QDEN < t {
            for z in [1, -1] {
                let g = geometric(Q::one(), n * QDEN, 0, z, t);
                s = s.mul(&g).mul(&g).with_trunc(t);
            }
        }
        n += 1;
    }
    let s = s.with_trunc(t).shift(-6, 0, 0);
    Ok(Series::from_terms(
        s.terms().filter(|(k, _)| k.2.abs() <= z_range).map(|(k, c)| (*k, c.clone())),
        s.trunc(),
    ))
}

/// (1 - 1/z) sum_{m in Z} z^m / (1 + y^(y2/2) q^(m-1/2)) for |q| < |z| < 1.
/// The k = 0 part of the m >= 1 tail sums to z/(1 - z), contributing -1.
fn z_sum_factor(y2: i32, trunc: i64, z_range: i32) -> Series<Q> {
    let mut g = Series::zero(trunc);
    let mut k: i64 = 1;
    // m >= 1: sum_k (-y)^k q^(k(m-1/2)) z^m with k >= 1
    while 12 * k < trunc {
        let sign = if k % 2 == 0 { qi(1) } else { qi(-1) };
        let mut m: i64 = 1;
        while k * (24 * m - 12) < trunc && m <= z_range as i64 + 1 {
            g.add_term((k * (24 * m - 12), y2 * k as i32, m as i32), sign.clone());
            m += 1;
        }
        k += 1;
    }
    // m <= 0: sum_{k>=1} (-1)^(k-1) y^-k q^(k(1/2-m)) z^m
    let mut k: i64 = 1;
    while 12 * k < trunc {
        let sign = if k % 2 == 1 { qi(1) } else { qi(-1) };
        let mut m: i64 = 0;
        while k * (12 - 24 * m) < trunc && -m <= z_range as i64 + 1 {
            g.add_term((k * (12 - 24 * m), -y2 * k as i32, m as i32), sign.clone());
            m -= 1;
        }
        k += 1;
    }
    let one_minus = Series::from_terms([((0, 0, 0), qi(1)), ((0, 0, -1), qi(-1))], EXACT);
    g.mul(&one_minus).sub(&Series::one(trunc))
}

/// theta_3(y)^2 / eta^6 (1 - 1/z)^2 sum_{m, m'} z^(m+m') / ((1 + y q^(m-1/2))(1 + q^(m'-1/2)/y)),
/// the denominator-identity form of [`ch_v_product`], keeping |z-power| <= z_range.
pub fn ch_v_denominator_form(trunc: i64, z_range: i32) -> Series<Q> {
    let t = trunc + 6 + QDEN;
    let zr = z_range + (t / 12) as i32 + 2;
    let a = z_sum_factor(2, t, zr);
    let b = z_sum_factor(-2, t, zr);
    let th = theta_rational(ThetaKind::Three, t);
    let e3 = eta_cubed_inverse(t);
    let pre = th.mul(&th).mul(&e3).mul(&e3).with_trunc(trunc);
    let s = pre.mul(&a.mul(&b).with_trunc(t)).with_trunc(trunc);
    Series::from_terms(
        s.terms().filter(|(k, _)| k.2.abs() <= z_range).map(|(k, c)| (*k, c.clone())),
        trunc,
    )
}

/// NS character of V_N: coefficient of z^N minus that of z^(N+2).
pub fn ch_vn_extract(n: u32, trunc: i64) -> Result<VGCharacter, Error> {
    let zr = n as i32 + 2;
    let full = ch_v_product(trunc, zr)?;
    ch_vn_from_product(&full, n, zr)
}

/// Extraction from a precomputed product expansion with the given z-window.
pub fn ch_vn_from_product(full: &Series<Q>, n: u32, z_range: i32) -> Result<VGCharacter, Error> {
    if n as i32 + 2 > z_range {
        return Err(Error::Domain(format!("z-range {z_range} does not reach z^{}", n + 2)));
    }
    let a = full.z_coeff(n as i32);
    let b = full.z_coeff(n as i32 + 2);
    Ok(VGCharacter { n, sector: Sector::NS, series: a.sub(&b) })
}

/// 1 / (1 + y^(y2/2) q^e), expanded in whichever of y q^e, 1/(y q^e) has a positive q-power.
fn inv_one_plus(y2: i32, e: i64, trunc: i64) -> Series<Q> {
    if e > 0 {
        geometric(-Q::one(), e, y2, 0, trunc)
    } else if e < 0 {
        geometric(-Q::one(), -e, -y2, 0, trunc - (-e)).shift(-e, -y2, 0)
    } else {
        panic!("pole on the expansion boundary")
    }
}

/// theta_3 / eta^3, known below `trunc`.
fn theta3_over_eta3(trunc: i64) -> Series<Q> {
    let t3 = theta_rational(ThetaKind::Three, trunc + 3);
    t3.mul(&eta_cubed_inverse(trunc + 3)).with_trunc(trunc)
}

/// sum_m 1/((1 + y q^(m-1/2))(1 + q^(N-m-1/2)/y)).
fn appell_sum(n: i64, trunc: i64) -> Series<Q> {
    let mut tot = Series::zero(trunc);
    // minimum q-degree of the m-th term: max(0, 1/2 - m) + max(0, m - N + 1/2)
    let lo = |m: i64| -> i64 { (12 - 24 * m).max(0) + (24 * (m - n) + 12).max(0) };
    let mut m = n.min(0) - 1;
    while lo(m) < trunc {
        m -= 1;
    }
    let mut terms = Vec::new();
    let mut k = m + 1;
    loop {
        if lo(k) < trunc {
            terms.push(k);
        } else if k > n.max(0) {
            break;
        }
        k += 1;
    }
    let parts: Vec<Series<Q>> = terms
        .par_iter()
        .map(|&m| {
            let a = 24 * m - 12;
            let b = 24 * (n - m) - 12;
            inv_one_plus(2, a, trunc).mul(&inv_one_plus(-2, b, trunc)).with_trunc(trunc)
        })
        .collect();
    for p in &parts {
        tot = tot.add(p);
    }
    tot
}

/// g_N = (theta_3/eta^3) sum_m 1/((1 + y q^(m-1/2))(1 + y^(-1) q^(N-m-1/2))).
pub fn g_series(n: i64, trunc: i64) -> Series<Q> {
    let s = appell_sum(n, trunc + 3);
    theta3_over_eta3(trunc).mul(&s).with_trunc(trunc)
}

fn h_numerator(n: i64, trunc: i64, window: i64) -> Series<Q> {
    // exponents in units of 1/8: with r = ri/2, s = si/2, m = mi/2 (all odd),
    // 8E = 2 ri |mi| + 2 si |2N - mi| + (sgn(m) ri + sgn(m-N) si)^2 - 4N
    let nn = n - 1;
    let w8 = window / 3;
    let sgn = |x: i64| if x > 0 { 1 } else { -1 };
    let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
    // r, s >= 1/2 gives 8E >= 2|mi| + 2|2N - mi| - 4N, which grows with |mi|
    let reach = w8 + 4 * nn.abs() + 4;
    let mut mi = -reach - 1 - (reach % 2);
    while mi <= reach + 2 * nn.abs() + 2 {
        let am = mi.abs();
        let an = (2 * nn - mi).abs();
        let s1 = sgn(mi);
        let s2 = sgn(mi - 2 * nn);
        let mut ri: i64 = 1;
        while 2 * ri * am + 2 * an - 4 * nn < w8 {
            let mut si: i64 = 1;
            while 2 * ri * am + 2 * si * an - 4 * nn < w8 {
                let sq = s1 * ri + s2 * si;
                let e8 = 2 * ri * am + 2 * si * an + sq * sq - 4 * nn;
                if e8 < w8 {
                    let sign = if ((ri + si) / 2 + 1) % 2 == 0 { 1 } else { -1 };
                    *acc.entry(e8 * 3).or_insert(0) += sign;
                }
                si += 2;
            }
            ri += 2;
        }
        mi += 2;
    }
    Series::from_terms(
        acc.into_iter().filter(|(e, c)| *c != 0 && *e < trunc).map(|(e, c)| ((e, 0, 0), qi(c))),
        trunc,
    )
}

/// h_n = eta^(-3) sum_{m, r, s} (-1)^(r+s+1) q^(r|m| + s|N-m| + (sgn(m) r + sgn(m-N) s)^2/2 - N/2)
/// with N = n - 1, m in Z+1/2 and r, s in Z_{>=0}+1/2.
pub fn h_series(n: u32, trunc: i64) -> Series<Q> {
    h_series_window(n, trunc, trunc + 3)
}

/// As [`h_series`], enumerating all terms of the triple sum with exponent
/// below `window` (at least trunc + 3).
pub fn h_series_window(n: u32, trunc: i64, window: i64) -> Series<Q> {
    let w = window.max(trunc + 3);
    let num = h_numerator(n as i64, trunc + 3, w);
    num.mul(&eta_cubed_inverse(trunc + 3)).with_trunc(trunc)
}

/// sum_{a in Z+1/2} y^(a+1/2) q^(a(a+1)/2) / (1 + y q^a).
pub fn polar_part(trunc: i64) -> Series<Q> {
    let mut tot = Series::zero(trunc);
    // a = (2j+1)/2; a(a+1)/2 = (2j+1)(2j+3)/8; the factor adds max(0, -a)
    let lo = |j: i64| -> i64 {
        let a2 = 2 * j + 1;
        3 * a2 * (a2 + 2) + if a2 < 0 { -12 * a2 } else { 0 }
    };
    let mut j = 0;
    while lo(j) < trunc {
        j += 1;
    }
    let hi = j;
    let mut j = -1;
    while lo(j) < trunc {
        j -= 1;
    }
    for j in j + 1..hi {
        let a2 = 2 * j + 1;
        let e = 3 * a2 * (a2 + 2);
        let f = inv_one_plus(2, 12 * a2, trunc - e);
        tot = tot.add(&f.shift(e, 2 * (j as i32 + 1), 0).with_trunc(trunc));
    }
    tot
}

/// Coefficient of the massless l = 0 character in ch_{V_N}.
pub fn atypical_coefficient(n: u32) -> i64 {
    match n {
        0 => -2,
        1 => 1,
        _ => 0,
    }
}

/// (theta_3/eta^3)(g_N - 2 g_{N+1} + 2 g_{N+3} - g_{N+4}).
pub fn ch_vn_closed(n: u32, trunc: i64) -> VGCharacter {
    let n = n as i64;
    let t = trunc + 3;
    let gs: Vec<Series<Q>> = [n, n + 1, n + 3, n + 4].par_iter().map(|&k| g_series(k, t)).collect();
    let comb = gs[0]
        .sub(&gs[1].scale(&qi(2)))
        .add(&gs[2].scale(&qi(2)))
        .sub(&gs[3]);
    let series = theta3_over_eta3(trunc).mul(&comb).with_trunc(trunc);
    VGCharacter { n: n as u32, sector: Sector::NS, series }
}

/// H_N = h_N - 2 h_{N+1} + 2 h_{N+3} - h_{N+4}: the typical part of ch_{V_N}
/// divided by theta_3^2 / eta^3.
pub fn typical_generating(n: u32, trunc: i64) -> Series<Q> {
    let hs: Vec<Series<Q>> =
        [n, n + 1, n + 3, n + 4].par_iter().map(|&k| h_series(k, trunc)).collect();
    hs[0].sub(&hs[1].scale(&qi(2))).add(&hs[2].scale(&qi(2))).sub(&hs[3])
}

/// The same character assembled from its atypical and typical parts.
pub fn ch_vn_split(n: u32, trunc: i64) -> VGCharacter {
    let h = typical_generating(n, trunc + 12);
    let t3 = theta_rational(ThetaKind::Three, trunc + 12);
    let typ = t3.mul(&t3).mul(&h).mul(&eta_cubed_inverse(trunc + 12)).with_trunc(trunc);
    let at = n4_atypical(Sector::NS, trunc).scale(&qi(atypical_coefficient(n)));
    VGCharacter { n, sector: Sector::NS, series: typ.add(&at) }
}

/// Multiplicity table: row N lists the multiplicity of the typical character
/// with h = c + 1/4 for c = 0..cols, preceded by the atypical coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VnMultiplicityRow {
    pub n: u32,
    pub atypical: i64,
    pub typical: Vec<String>,
}

/// mult(N, c) for the typical character of weight c + 1/4.
pub fn multiplicity_row(n: u32, cols: usize) -> Vec<Q> {
    let h = typical_generating(n, cols as i64 * QDEN);
    (0..cols as i64).map(|c| h.coeff(c * QDEN - 3, 0, 0)).collect()
}

pub fn vn_multiplicity_table(rows: u32, cols: usize) -> Vec<VnMultiplicityRow> {
    (0..rows)
        .into_par_iter()
        .map(|n| VnMultiplicityRow {
            n,
            atypical: atypical_coefficient(n),
            typical: multiplicity_row(n, cols).iter().map(fmt_q).collect(),
        })
        .collect()
}

/// Guaranteed truncation after spectral flow of an NS character known below
/// `trunc`. Omitted terms y^m q^e (e >= T) satisfy |m| <= 2 sqrt(e + 1/2), so
/// they land at q^(e + m/2 + 1/4) >= T - sqrt(T + 1/2) + 1/4.
pub fn flow_truncation(trunc: i64) -> i64 {
    let t = trunc as f64 / QDEN as f64;
    let r = t - (t + 0.5).max(0.0).sqrt() + 0.25;
    (r * QDEN as f64).floor() as i64 - 1
}

/// NS -> Ramond: f(y, q) -> q^(1/4) y f(y q^(1/2), q).
pub fn spectral_flow(s: &Series<Q>) -> Series<Q> {
    let t = flow_truncation(s.trunc());
    s.substitute_y_power(12, t - 6).shift(6, 2, 0).with_trunc(t)
}

/// Ramond -> NS, the inverse substitution, keeping the given truncation.
pub fn inverse_spectral_flow(s: &Series<Q>, trunc: i64) -> Series<Q> {
    let mut r = Series::zero(trunc);
    for (k, c) in s.terms() {
        let m1 = (k.1 - 2) as i64; // 2(m-1)
        let e = k.0 - 6 - m1 * 6;
        r.add_term((e, k.1 - 2, k.2), c.clone());
    }
    r
}

/// Typical character of weight h: q^(h-3/8) theta^2 / eta^3 with theta = theta_3
/// (NS) or theta_2 (Ramond).
pub fn n4_typical(h: &Q, sector: Sector, trunc: i64) -> Result<Series<Q>, Error> {
    let e = h * qi(QDEN) - qi(9);
    if !e.is_integer() || h < &Q::zero() {
        return Err(Error::Domain(format!("weight {} is not on the grid", fmt_q(h))));
    }
    let e: i64 = e.to_integer().try_into().map_err(|_| Error::Domain("weight too large".into()))?;
    let kind = match sector {
        Sector::NS => ThetaKind::Three,
        Sector::Ramond => ThetaKind::Two,
    };
    let t = trunc - e + 12;
    let th = theta_rational(kind, t);
    Ok(th.mul(&th).mul(&eta_cubed_inverse(t)).shift(e, 0, 0).with_trunc(trunc))
}

/// Massless character with h = 1/4, l = 0: (theta_3/eta^3) times the polar sum
/// in the NS sector, its spectral flow in the Ramond sector.
pub fn n4_atypical(sector: Sector, trunc: i64) -> Series<Q> {
    match sector {
        Sector::NS => {
            let p = polar_part(trunc + 3);
            theta3_over_eta3(trunc + 3).mul(&p).with_trunc(trunc)
        }
        Sector::Ramond => {
            let mut t = trunc;
            while flow_truncation(t) < trunc {
                t += 6;
            }
            spectral_flow(&n4_atypical(Sector::NS, t)).with_trunc(trunc)
        }
    }
}

/// The massless character with h = 1/4, l = 1/2, defined by
/// ch_{1/4} = 2 ch_{1/4,0} + ch_{1/4,1}.
pub fn n4_massless_half(sector: Sector, trunc: i64) -> Result<Series<Q>, Error> {
    let t = n4_typical(&q(1, 4), sector, trunc)?;
    Ok(t.sub(&n4_atypical(sector, trunc).scale(&qi(2))))
}

/// Ramond character of V_N.
pub fn ch_mn(n: u32, trunc: i64) -> VGCharacter {
    let mut t = trunc;
    while flow_truncation(t) < trunc {
        t += 6;
    }
    let s = spectral_flow(&ch_vn_closed(n, t).series).with_trunc(trunc);
    VGCharacter { n, sector: Sector::Ramond, series: s }
}

fn theta_sq_over_eta3(sector: Sector, trunc: i64) -> Series<Q> {
    let kind = match sector {
        Sector::NS => ThetaKind::Three,
        Sector::Ramond => ThetaKind::Two,
    };
    let th = theta_rational(kind, trunc + 3);
    th.mul(&th).mul(&eta_cubed_inverse(trunc + 3)).with_trunc(trunc)
}

fn next_level(s: &Series<Q>, after: i64) -> Option<i64> {
    s.terms().map(|(k, _)| k.0).find(|&l| l > after)
}

/// Greedy fit x = c(q, z) * theta + r, clearing the y^(m0) coefficient of
/// every level, where y^(m0) is the top y-power of theta's leading level.
fn fit_against(x: &Series<Q>, theta: &Series<Q>) -> (Series<Q>, Series<Q>) {
    let v = theta.min_q();
    let lead_terms = theta.level(v);
    let (m0, _, lead) = lead_terms.iter().max_by_key(|t| t.0).cloned().expect("nonzero theta");
    let trunc = x.trunc();
    let mut r = x.clone();
    let mut c = Series::zero(trunc - v);
    let first = r.terms().next().map(|(k, _)| k.0);
    let Some(mut lvl) = first else {
        return (c, r);
    };
    loop {
        if lvl >= trunc {
            break;
        }
        let zs: Vec<(i32, Q)> =
            r.level(lvl).into_iter().filter(|t| t.0 == m0).map(|t| (t.1, t.2)).collect();
        for (z, coef) in zs {
            let k = &coef / &lead;
            c.add_term((lvl - v, 0, z), k.clone());
            r = r.sub(&theta.shift(lvl - v, 0, z).scale(&k).with_trunc(trunc));
        }
        match next_level(&r, lvl) {
            Some(l) => lvl = l,
            None => break,
        }
    }
    (c, r)
}

/// Atypical and typical parts of a character-shaped series, per z-power.
#[derive(Clone, Debug)]
pub struct RepDecomposition {
    pub sector: Sector,
    /// z-power -> atypical coefficient
    pub atypical: BTreeMap<i32, Q>,
    /// typical coefficient series c(q, z) with s = a A + c theta^2/eta^3
    pub typical: Series<Q>,
}

/// Decomposition with coefficients in the representation ring (z-slot).
pub fn decompose_rep(s: &Series<Q>, sector: Sector) -> Result<RepDecomposition, Error> {
    let trunc = s.trunc();
    let lo = s.min_q().min(0);
    let theta = theta_sq_over_eta3(sector, trunc - lo + QDEN);
    let atyp = n4_atypical(sector, trunc.max(QDEN));
    let (cs, rs) = fit_against(s, &theta);
    let (ca, ra) = fit_against(&atyp.with_trunc(trunc), &theta);
    let Some((k0, a0)) = ra.terms().next().map(|(k, c)| (*k, c.clone())) else {
        return Err(Error::Structural("atypical character lies in the typical span".into()));
    };
    let mut atypical = BTreeMap::new();
    let mut typical = cs.clone();
    let zs: Vec<i32> = {
        let mut v: Vec<i32> = rs.terms().map(|(k, _)| k.2).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut resid = rs.clone();
    for z in zs {
        let a = rs.coeff(k0.0, k0.1, z) / &a0;
        if !a.is_zero() {
            resid = resid.sub(&ra.shift(0, 0, z).scale(&a));
            typical = typical.sub(&ca.shift(0, 0, z).scale(&a));
            atypical.insert(z, a);
        }
    }
    if let Some((k, c)) = resid.terms().next() {
        return Err(Error::Mismatch(format!(
            "not a combination of N=4 characters: residual {} at {}",
            fmt_q(c),
            crate::exactcore::series::fmt_key(k)
        )));
    }
    Ok(RepDecomposition { sector, atypical, typical })
}

/// Decomposition of a character-shaped (q, y)-series.
pub fn decompose_into_n4(s: &Series<Q>, sector: Sector) -> Result<N4Multiplicities, Error> {
    if s.terms().any(|(k, _)| k.2 != 0) {
        return Err(Error::Domain("series depends on z; use decompose_rep".into()));
    }
    let d = decompose_rep(s, sector)?;
    let atypical = d.atypical.get(&0).cloned().unwrap_or_else(Q::zero);
    // c = sum mult_h q^(h - 3/8)
    let typical = d
        .typical
        .terms()
        .map(|(k, c)| (qexp_to_q(k.0 + 9), c.clone()))
        .collect();
    Ok(N4Multiplicities { sector, atypical, typical, known_below: qexp_to_q(d.typical.trunc() + 9) })
}

/// chi_{-y}(q, LX) after y -> -y equals 24 R_a + sum_n A_n R_{1/4+n} in the
/// Ramond sector.
#[derive(Clone, Debug, Serialize)]
pub struct GenusDecomposition {
    pub atypical: String,
    pub a: Vec<String>,
}

/// A_n for n with 1/4 + n below the truncation, from the bundle expansion.
pub fn genus_a_coefficients(trunc: i64) -> Result<(Q, Vec<Q>), Error> {
    let g = crate::genus::elliptic_genus(trunc).flip_y()?;
    split_genus(&g)
}

/// Same decomposition from 2 phi_{0,1}, which is cheaper at high order.
pub fn genus_a_coefficients_phi(trunc: i64) -> Result<(Q, Vec<Q>), Error> {
    let g = crate::modforms::weak_jacobi_phi(0, trunc)?.scale(&qi(2)).flip_y()?;
    split_genus(&g)
}

fn split_genus(g: &Series<Q>) -> Result<(Q, Vec<Q>), Error> {
    let d = decompose_into_n4(g, Sector::Ramond)?;
    let n = ((d.known_below.clone() - q(1, 4)) * qi(1)).ceil().to_integer();
    let n: i64 = n.try_into().unwrap_or(0);
    let a = (0..n.max(0)).map(|k| d.at(&(q(1, 4) + qi(k)))).collect();
    Ok((d.atypical, a))
}

/// One row of the symmetric-power cross-check.
#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckRow {
    pub n: usize,
    /// Multiplicities of S^j T in the virtual bundle whose -chi gives A_n,
    /// obtained by decomposing the bundle-valued elliptic genus.
    pub derived: Vec<i64>,
    /// The same from the closed list of bundle combinations.
    pub listed: Option<Vec<i64>>,
    pub a_from_bundle: i64,
    pub a_from_genus: i64,
    pub agrees: bool,
}

/// Bundle combinations B_n with A_n = -chi(X, B_n): entries (j, k) for k S^j T.
pub fn listed_bundles(n: usize) -> Option<Vec<(u32, i64)>> {
    Some(match n {
        0 => vec![(0, 1)],
        1 => vec![(2, 1)],
        2 => vec![(0, 1), (3, 2)],
        3 => vec![(1, 2), (2, 1), (4, 3)],
        4 => vec![(0, 1), (1, 2), (2, 3), (3, 2), (4, 1), (5, 4)],
        _ => return None,
    })
}

fn su2_multiplicities(zpoly: &BTreeMap<i32, Q>) -> Vec<i64> {
    let top = zpoly.keys().map(|k| k.abs()).max().unwrap_or(0);
    (0..=top)
        .map(|j| {
            let a = zpoly.get(&j).cloned().unwrap_or_else(Q::zero);
            let b = zpoly.get(&(j + 2)).cloned().unwrap_or_else(Q::zero);
            (a - b).to_integer().try_into().unwrap_or(i64::MAX)
        })
        .collect()
}

/// Decomposes the elliptic genus with coefficients in the representation ring
/// of SU(2), built from Lambda_t T = 1 + T t + t^2 and Clebsch-Gordan products,
/// and compares the resulting A_n with the listed bundle combinations and with
/// the numeric decomposition.
pub fn symmetric_power_crosscheck(nmax: usize) -> Result<Vec<CrosscheckRow>, Error> {
    let trunc = (nmax as i64 + 1) * QDEN;
    let rep = elliptic_genus_su2(trunc);
    let d = decompose_rep(&rep, Sector::Ramond)?;
    let (_, a_num) = genus_a_coefficients(trunc)?;
    let mut rows = Vec::new();
    for n in 0..=nmax {
        // typical weight 1/4 + n sits at c-exponent n - 1/8
        let e = n as i64 * QDEN - 3;
        let zpoly: BTreeMap<i32, Q> = d
            .typical
            .terms()
            .filter(|(k, _)| k.0 == e)
            .map(|(k, c)| (k.2, -c.clone()))
            .collect();
        let derived = su2_multiplicities(&zpoly);
        let chi = |v: &[(u32, i64)]| -> i64 { v.iter().map(|&(j, k)| k * chi_sym_power(j)).sum() };
        let derived_pairs: Vec<(u32, i64)> =
            derived.iter().enumerate().map(|(j, &k)| (j as u32, k)).collect();
        let a_from_bundle = -chi(&derived_pairs);
        let listed = listed_bundles(n);
        let a_genus: i64 = a_num.get(n).map(|x| x.to_integer().try_into().unwrap_or(i64::MAX)).unwrap_or(0);
        let listed_ok = listed.as_ref().map(|l| -chi(l) == a_genus).unwrap_or(true);
        let listed_vec = listed.map(|l| {
            let top = l.iter().map(|p| p.0).max().unwrap_or(0) as usize;
            let mut v = vec![0i64; top + 1];
            for (j, k) in l {
                v[j as usize] += k;
            }
            v
        });
        rows.push(CrosscheckRow {
            n,
            derived,
            listed: listed_vec,
            a_from_bundle,
            a_from_genus: a_genus,
            agrees: listed_ok && a_from_bundle == a_genus,
        });
    }
    Ok(rows)
}

/// Multiplicity table mult(n, k) for n <= rows, k < cols.
pub fn multiplicity_table(rows: usize, cols: usize) -> Vec<Vec<Q>> {
    (0..=rows as u32).into_par_iter().map(|n| multiplicity_row(n, cols)).collect()
}

/// Solves -sum_n c_n mult(n, k) = typ[k] for c_2.., given c_0 and c_1.
/// The system is triangular: mult(n, k) = 0 for n > k + 1 and mult(k+1, k) = k.
fn solve_triangular(
    typ: &[Q],
    c0: Q,
    c1: Q,
    tmax: usize,
    mult: &[Vec<Q>],
) -> Result<Vec<Q>, Error> {
    let mut c = vec![c0, c1];
    for k in 1..tmax {
        let piv = mult[k + 1][k].clone();
        if piv.is_zero() {
            return Err(Error::Structural(format!("no pivot for unknown {} at weight index {k}", k + 1)));
        }
        let mut rhs = -typ[k].clone();
        for (n, cn) in c.iter().enumerate().take(k + 1) {
            rhs -= cn * &mult[n][k];
        }
        c.push(rhs / piv);
    }
    c.truncate(tmax + 1);
    Ok(c)
}

/// chi(g; X, S^n T) for n <= tmax from a twining genus chi_{-y}(g; q, LX).
#[derive(Clone, Debug)]
pub struct SymTraces {
    pub atypical: Q,
    pub coeffs: Vec<Q>,
}

/// Ramond decomposition of a flipped twining genus: the atypical coefficient
/// and the typical multiplicities at h = 1/4 + k for k < tmax (at least one).
pub fn twining_decomposition(twining: &Series<Q>, tmax: usize) -> Result<(Q, Vec<Q>), Error> {
    let needed = (tmax as i64) * QDEN + 12;
    if twining.trunc() < needed {
        return Err(Error::Domain(format!(
            "twining series known below q^{} but t^{tmax} needs q^{}",
            fmt_q(&qexp_to_q(twining.trunc())),
            fmt_q(&qexp_to_q(needed))
        )));
    }
    let d = decompose_into_n4(&twining.flip_y()?.with_trunc(needed), Sector::Ramond)?;
    let typ = (0..tmax.max(1)).map(|k| d.at(&(q(1, 4) + qi(k as i64)))).collect();
    Ok((d.atypical, typ))
}

/// Recovers chi(g; X, S^n T) from the Ramond decomposition
/// twining(-y) = -sum_n chi(g; X, S^n T) ch_{M_n}.
pub fn twining_to_symtraces(twining: &Series<Q>, tmax: usize) -> Result<SymTraces, Error> {
    let (atypical, typ) = twining_decomposition(twining, tmax)?;
    let mult = multiplicity_table(tmax, tmax.max(1));
    let c0 = -typ[0].clone() / &mult[0][0];
    let c1 = qi(2) * &c0 - &atypical;
    let coeffs = solve_triangular(&typ, c0, c1, tmax, &mult)?;
    Ok(SymTraces { atypical, coeffs })
}

/// The solve with chi(g; X, T) = alpha left free: coefficients are affine in
/// alpha, returned as (value at alpha = 0, slope).
pub fn symtraces_alpha_family(twining: &Series<Q>, tmax: usize) -> Result<(Vec<Q>, Vec<Q>), Error> {
    let (_, typ) = twining_decomposition(twining, tmax)?;
    let c0v = symtraces_from_typical(&typ, Q::zero(), tmax)?;
    let c1v = symtraces_from_typical(&typ, Q::one(), tmax)?;
    let slope = c1v.iter().zip(&c0v).map(|(a, b)| a - b).collect();
    Ok((c0v, slope))
}

/// Same solve from the typical generating function given directly by its
/// coefficients typ[k] (weight 1/4 + k), with chi(g; X, T) = c1 prescribed.
pub fn symtraces_from_typical(typ: &[Q], c1: Q, tmax: usize) -> Result<Vec<Q>, Error> {
    let mult = multiplicity_table(tmax, tmax.max(1));
    let c0 = -typ[0].clone() / &mult[0][0];
    solve_triangular(typ, c0, c1, tmax, &mult)
}

/// Typical coefficients of a moonshine twining genus e/12 phi_{0,1} + f phi_{-2,1}
/// in the Ramond sector, computed in coefficient space:
/// sum_k T_k q^k = (e/24) sum_n A_n q^n - f(q) prod (1 - q^n)^(-3).
pub fn moonshine_typical(e: &Q, f: &[Q], a: &[Q], terms: usize) -> Vec<Q> {
    let t = terms as i64 * QDEN;
    let p3 = crate::modforms::euler_product(t).pow(3).inverse().expect("unit").with_trunc(t);
    let fs = crate::genus::q_series(f, t);
    let fp = fs.mul(&p3);
    (0..terms)
        .map(|k| {
            let ak = a.get(k).cloned().unwrap_or_else(Q::zero);
            e * &ak / qi(24) - fp.coeff(k as i64 * QDEN, 0, 0)
        })
        .collect()
}

/// Verifies -sum_n c_n ch_{M_n} against the flipped twining genus below `trunc`.
pub fn verify_symtraces(twining: &Series<Q>, c: &[Q], trunc: i64) -> Result<(), Error> {
    let lhs = twining.flip_y()?.with_trunc(trunc);
    let nmax = ((trunc + QDEN - 1) / QDEN + 1) as usize;
    if c.len() <= nmax.min(c.len().saturating_sub(1)) {
        return Err(Error::Domain("too few coefficients for the verification order".into()));
    }
    let parts: Vec<Series<Q>> = (0..=nmax.min(c.len() - 1))
        .into_par_iter()
        .map(|n| ch_mn(n as u32, trunc).series.scale(&c[n]))
        .collect();
    let mut rhs = Series::zero(trunc);
    for p in &parts {
        rhs = rhs.sub(p);
    }
    lhs.agree(&rhs).map_err(|m| Error::Mismatch(format!("twining solve residual {m}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_leading_term() {
        let v = ch_vn_extract(0, QDEN).unwrap();
        assert_eq!(v.series.min_q(), -6);
        assert_eq!(v.series.coeff(-6, 0, 0), qi(1));
    }

    #[test]
    fn fundamental_leading_term() {
        let v = ch_vn_extract(1, QDEN).unwrap();
        assert_eq!(v.series.min_q(), 6);
        assert_eq!(v.series.level(6), vec![(-2, 0, qi(1)), (2, 0, qi(1))]);
    }

    #[test]
    fn atypical_q0_terms() {
        assert_eq!(atypical_coefficient(0), -2);
        let r = n4_atypical(Sector::Ramond, QDEN / 2);
        assert_eq!(r.level(0), vec![(0, 0, qi(1))]);
    }

    #[test]
    fn ramond_typical_leading() {
        let r = n4_typical(&q(1, 4), Sector::Ramond, QDEN).unwrap();
        assert_eq!(r.level(0), vec![(-2, 0, qi(1)), (0, 0, qi(2)), (2, 0, qi(1))]);
    }
}
