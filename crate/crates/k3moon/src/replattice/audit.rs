//! Symmetric-power traces derived from moonshine twining genera: integrality
//! and rational-form fits.

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactcore::poly::{cyclotomic_poly, reconstruct_rational};
use crate::exactcore::series::QDEN;
use crate::exactcore::{fmt_q, Poly, Q};
use crate::fgdata::FgData;
use crate::genus::{chi_symt_series, SymplecticClass};
use crate::n4char::{symtraces_alpha_family, twining_to_symtraces};
use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub class: String,
    pub coefficients: Vec<String>,
    /// (n, value) for the first non-integral t^n coefficient.
    pub first_nonintegral: Option<(usize, String)>,
    /// For classes of a geometric order: agreement with the fixed-point series.
    pub matches_geometric: Option<bool>,
}

/// Traces of the symmetric powers S^n T for n <= tmax, per twining class.
pub fn integrality_audit(data: &FgData, tmax: usize) -> Result<Vec<AuditRow>, Error> {
    data.records
        .par_iter()
        .map(|r| {
            let tw = r.twining((tmax as i64 + 1) * QDEN)?;
            let s = twining_to_symtraces(&tw, tmax)?;
            let first = s.coeffs.iter().position(|c| !c.is_integer()).map(|n| (n, fmt_q(&s.coeffs[n])));
            let geo = SymplecticClass::ALL
                .into_iter()
                .find(|g| g.m24_label() == r.class)
                .map(|g| chi_symt_series(g, tmax + 1).map(|c| c == s.coeffs))
                .transpose()?;
            Ok(AuditRow {
                class: r.class.clone(),
                coefficients: s.coeffs.iter().map(fmt_q).collect(),
                first_nonintegral: first,
                matches_geometric: geo,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaAudit {
    pub class: String,
    pub base: Vec<String>,
    pub slope: Vec<String>,
    /// Some integer alpha makes every coefficient integral.
    pub integral_alpha_exists: bool,
}

/// Traces as affine functions of the free trace alpha on T itself. Integrality
/// for some integer alpha is decided on one period of alpha mod lcm of the
/// slope denominators.
pub fn alpha_audit(data: &FgData, class: &str, tmax: usize) -> Result<AlphaAudit, Error> {
    let r = data.get(class).ok_or_else(|| Error::Data(format!("no twining data for {class}")))?;
    let tw = r.twining((tmax as i64 + 1) * QDEN)?;
    let (base, slope) = symtraces_alpha_family(&tw, tmax)?;
    let period = slope.iter().fold(BigInt::one(), |l, s| l.lcm(s.denom()));
    let mut exists = false;
    let mut a = BigInt::zero();
    while a < period {
        let aq = Q::from_integer(a.clone());
        if base.iter().zip(&slope).all(|(b, s)| (b + s * &aq).is_integer()) {
            exists = true;
            break;
        }
        a += 1;
    }
    Ok(AlphaAudit {
        class: r.class.clone(),
        base: base.iter().map(fmt_q).collect(),
        slope: slope.iter().map(fmt_q).collect(),
        integral_alpha_exists: exists,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FormFit {
    pub class: String,
    pub numerator: Vec<String>,
    pub denominator: Vec<u64>,
    pub palindromic: bool,
    pub degree_two_less: bool,
    pub terms_checked: usize,
}

/// Rational form of the trace series of `class` over a product of cyclotomic
/// polynomials, fitted and checked against t^0..t^tmax.
pub fn fit_rational_form(data: &FgData, class: &str, denominator: &[u64], tmax: usize) -> Result<FormFit, Error> {
    let r = data.get(class).ok_or_else(|| Error::Data(format!("no twining data for {class}")))?;
    let tw = r.twining((tmax as i64 + 1) * QDEN)?;
    let s = twining_to_symtraces(&tw, tmax)?;
    let den = denominator.iter().fold(Poly::one(), |a, &n| a.mul(&cyclotomic_poly(n)));
    let fit = reconstruct_rational(&s.coeffs, &den)?;
    Ok(FormFit {
        class: r.class.clone(),
        numerator: fit.numerator.coeffs().iter().map(fmt_q).collect(),
        denominator: denominator.to_vec(),
        palindromic: fit.palindromic,
        degree_two_less: fit.degree_two_less,
        terms_checked: s.coeffs.len(),
    })
}

/// The M24 classes 2B and 4A, which act on K3 sigma models but not
/// symplectically on any K3 surface.
pub fn m24_extra_rational_forms(data: &FgData, tmax: usize) -> Result<Vec<FormFit>, Error> {
    Ok(vec![
        fit_rational_form(data, "2B", &[2, 2, 4], tmax)?,
        fit_rational_form(data, "4A", &[2, 4, 8], tmax)?,
    ])
}
