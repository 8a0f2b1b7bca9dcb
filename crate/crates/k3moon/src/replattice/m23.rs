//! Decomposition of class-function families (one t-series or rational function
//! per rational class) into irreducible characters.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::table::{CharacterTable, RationalClass};
use crate::exactcore::poly::{cyclotomic_factors, expand_rational, TSeries};
use crate::exactcore::{fmt_q, parse_q, poly::cyclotomic_poly, Cyclotomic, Poly, RationalFunction, Q};
use crate::genus::{rational_form, SymplecticClass};
use crate::Error;

/// w[chi][C] = |C| / |G| * sum over members of conj(chi), so that the
/// multiplicity of chi in a rational class function r is sum_C w[chi][C] r(C).
pub fn decomposition_weights(table: &CharacterTable, rc: &[RationalClass]) -> Result<Vec<Vec<Q>>, Error> {
    let ord = Q::from_integer(table.order.clone());
    table
        .characters
        .iter()
        .map(|chi| {
            rc.iter()
                .map(|c| {
                    let mut s = Cyclotomic::rational(Q::zero());
                    for &m in &c.members {
                        s = s.try_add(&chi.values[m].conj())?;
                    }
                    let s = s.as_rational().ok_or_else(|| {
                        Error::Structural(format!("{} is not rational on {}", chi.name, c.label))
                    })?;
                    let each = Q::from_integer(table.classes[c.members[0]].size.clone());
                    Ok(s * each / &ord)
                })
                .collect()
        })
        .collect()
}

/// Per-irreducible multiplicity series; rows[n][chi].
#[derive(Clone, Debug)]
pub struct SeriesDecomposition {
    pub names: Vec<String>,
    pub rows: Vec<Vec<Q>>,
    /// (n, chi index) of the first non-integral multiplicity.
    pub first_nonintegral: Option<(usize, usize)>,
}

/// Decomposes a family given as (rational class label, t-series) pairs. Every
/// rational class of the table must be covered.
pub fn decompose_series(
    table: &CharacterTable,
    family: &[(String, TSeries)],
    terms: usize,
) -> Result<SeriesDecomposition, Error> {
    let rc = table.rational_classes()?;
    let w = decomposition_weights(table, &rc)?;
    let mut cols: Vec<Option<&TSeries>> = vec![None; rc.len()];
    for (label, s) in family {
        let i = rc
            .iter()
            .position(|c| &c.label == label)
            .ok_or_else(|| Error::Data(format!("{}: no rational class {label}", table.group)))?;
        if s.len() < terms {
            return Err(Error::Domain(format!("series for {label} has only {} terms", s.len())));
        }
        cols[i] = Some(s);
    }
    if let Some(i) = cols.iter().position(Option::is_none) {
        return Err(Error::Data(format!("no series for class {}", rc[i].label)));
    }
    let cols: Vec<&TSeries> = cols.into_iter().map(Option::unwrap).collect();
    let rows: Vec<Vec<Q>> = (0..terms)
        .map(|n| {
            w.iter()
                .map(|wc| wc.iter().zip(&cols).map(|(a, s)| a * &s[n]).fold(Q::zero(), |x, y| x + y))
                .collect()
        })
        .collect();
    let first_nonintegral = rows
        .iter()
        .enumerate()
        .find_map(|(n, r)| r.iter().position(|x| !x.is_integer()).map(|j| (n, j)));
    Ok(SeriesDecomposition {
        names: table.characters.iter().map(|c| c.name.clone()).collect(),
        rows,
        first_nonintegral,
    })
}

/// Multiplicity of each irreducible as an exact rational function, with the
/// coefficient of 1/(t-1)^4 in its partial-fraction expansion.
#[derive(Clone, Debug)]
pub struct RationalMultiplicity {
    pub name: String,
    pub function: RationalFunction,
    pub pole4: Q,
}

pub fn m_chi_rational(
    table: &CharacterTable,
    forms: &[(String, RationalFunction)],
) -> Result<Vec<RationalMultiplicity>, Error> {
    let rc = table.rational_classes()?;
    let w = decomposition_weights(table, &rc)?;
    let mut cols: Vec<&RationalFunction> = Vec::new();
    for c in &rc {
        let f = forms
            .iter()
            .find(|(l, _)| l == &c.label)
            .ok_or_else(|| Error::Data(format!("no rational form for class {}", c.label)))?;
        cols.push(&f.1);
    }
    // common denominator: for each cyclotomic factor, its top multiplicity
    let mut common: Vec<(u64, u32)> = Vec::new();
    for f in &cols {
        for (n, k) in cyclotomic_factors(f.den())? {
            match common.iter_mut().find(|c| c.0 == n) {
                Some(c) => c.1 = c.1.max(k),
                None => common.push((n, k)),
            }
        }
    }
    common.sort();
    let den = common.iter().fold(Poly::one(), |a, &(n, k)| a.mul(&cyclotomic_poly(n).pow(k)));
    let parts: Vec<Poly> = cols.iter().map(|f| f.num().mul(&den.divrem(f.den()).0)).collect();
    table
        .characters
        .par_iter()
        .zip(w.par_iter())
        .map(|(chi, wc)| {
            let num = wc
                .iter()
                .zip(&parts)
                .filter(|(a, _)| !a.is_zero())
                .fold(Poly::zero(), |acc, (a, p)| acc.add(&p.scale(a)));
            let function = RationalFunction::over_cyclotomics(num, &common);
            let pole4 = function.pole_coefficient_at_one(4).unwrap_or_else(Q::zero);
            Ok(RationalMultiplicity { name: chi.name.clone(), function, pole4 })
        })
        .collect()
}

/// The four virtual characters vanishing on elements of order 1..8.
pub const ALPHA: [[i64; 17]; 4] = [
    [2, 0, 2, 2, -2, 0, 0, 0, 0, 0, 0, -1, -1, 0, 0, 2, 0],
    [2, -2, 1, 1, 2, 0, 0, 0, -2, 0, 0, 0, 0, -1, -1, -2, 2],
    [2, -2, 0, 0, 0, 2, -1, -1, 2, 0, 0, 2, 2, 0, 0, 0, -2],
    [2, -2, -2, -2, 0, 2, 2, 2, 0, -1, -1, -2, -2, 2, 2, 0, 0],
];

#[derive(Clone, Debug, Serialize)]
pub struct AlphaRow {
    pub index: usize,
    pub vanishes_on_small_orders: bool,
    /// Values on the remaining rational classes.
    pub values: Vec<(String, String)>,
}

/// Character values of an integer combination of the table's irreducibles.
pub fn combination_values(table: &CharacterTable, coeffs: &[i64]) -> Result<Vec<Cyclotomic>, Error> {
    if coeffs.len() != table.characters.len() {
        return Err(Error::Domain("coefficient count differs from the number of irreducibles".into()));
    }
    (0..table.classes.len())
        .map(|i| {
            let mut s = Cyclotomic::rational(Q::zero());
            for (c, chi) in coeffs.iter().zip(&table.characters) {
                if *c != 0 {
                    s = s.try_add(&chi.values[i].scale(&Q::from_integer((*c).into())))?;
                }
            }
            Ok(s)
        })
        .collect()
}

pub fn alpha_basis_check(table: &CharacterTable) -> Result<Vec<AlphaRow>, Error> {
    let rc = table.rational_classes()?;
    ALPHA
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let v = combination_values(table, a)?;
            let small = table
                .classes
                .iter()
                .zip(&v)
                .filter(|(c, _)| c.order <= 8)
                .all(|(_, x)| x.as_rational().is_some_and(|r| r.is_zero()));
            let values = rc
                .iter()
                .filter(|c| c.order > 8)
                .map(|c| (c.label.clone(), v[c.members[0]].to_string_exact()))
                .collect();
            Ok(AlphaRow { index: k + 1, vanishes_on_small_orders: small, values })
        })
        .collect()
}

pub const FORMS_FORMAT: &str = "k3moon-rational-forms/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawForm {
    name: String,
    class: String,
    numerator: Vec<String>,
    /// Cyclotomic indices whose product is the denominator.
    denominator: Vec<u64>,
    note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawForms {
    format: String,
    forms: Vec<RawForm>,
}

#[derive(Clone, Debug)]
pub struct ShippedForm {
    pub name: String,
    pub class: String,
    pub numerator: Poly,
    pub denominator: Vec<u64>,
    pub note: String,
}

impl ShippedForm {
    pub fn function(&self) -> Result<RationalFunction, Error> {
        let den = self.denominator.iter().fold(Poly::new(vec![Q::one()]), |a, &n| a.mul(&cyclotomic_poly(n)));
        RationalFunction::new(self.numerator.clone(), den)
    }
}

pub fn load_forms(path: &Path) -> Result<Vec<ShippedForm>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let raw: RawForms = serde_json::from_str(&text).map_err(|e| Error::Data(e.to_string()))?;
    if raw.format != FORMS_FORMAT {
        return Err(Error::Data(format!("unsupported format {:?}", raw.format)));
    }
    raw.forms
        .into_iter()
        .map(|f| {
            Ok(ShippedForm {
                numerator: Poly::new(f.numerator.iter().map(|c| parse_q(c)).collect::<Result<_, _>>()?),
                name: f.name,
                class: f.class,
                denominator: f.denominator,
                note: f.note,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FormCheck {
    pub name: String,
    pub palindromic: bool,
    pub degree_two_less: bool,
    pub integral_expansion: bool,
}

/// Structural checks on a shipped numerator: palindromic, of degree two less
/// than the denominator, with integral expansion to `terms`.
pub fn check_form(f: &ShippedForm, terms: usize) -> Result<FormCheck, Error> {
    let r = f.function()?;
    let c = f.numerator.coeffs();
    let pal = f.numerator.is_palindromic();
    let _ = c;
    let dd = f.denominator.iter().map(|&n| crate::exactcore::cyclotomic::euler_phi(n) as usize).sum::<usize>();
    let two_less = f.numerator.degree() == Some(dd - 2);
    let integral = expand_rational(&r, terms)?.iter().all(Q::is_integer);
    Ok(FormCheck { name: f.name.clone(), palindromic: pal, degree_two_less: two_less, integral_expansion: integral })
}

/// The rational class function family r_g on the 12 rational classes of M23:
/// computed forms for orders 1..8, shipped forms for the rest.
pub fn m23_family(table: &CharacterTable, shipped: &[ShippedForm], alternate: Option<&str>) -> Result<Vec<(String, RationalFunction)>, Error> {
    let rc = table.rational_classes()?;
    let mut out = Vec::new();
    for c in &rc {
        let f = if c.order <= 8 {
            let g = SymplecticClass::from_order(c.order)
                .ok_or_else(|| Error::Data(format!("no symplectic class of order {}", c.order)))?;
            rational_form(g)?
        } else {
            let pick = shipped
                .iter()
                .filter(|s| s.class == c.label)
                .find(|s| alternate.map_or(s.name == format!("r_{}", c.label), |a| s.name == a))
                .or_else(|| shipped.iter().find(|s| s.class == c.label && s.name == format!("r_{}", c.label)))
                .ok_or_else(|| Error::Data(format!("no shipped form for class {}", c.label)))?;
            pick.function()?
        };
        out.push((c.label.clone(), f));
    }
    Ok(out)
}

/// Table rows for -chi(X, S_t T): multiplicities of each irreducible in
/// -chi(X, S^n T) for n < terms.
pub fn decompose_m23_family(table: &CharacterTable, family: &[(String, RationalFunction)], terms: usize) -> Result<SeriesDecomposition, Error> {
    let series = family
        .iter()
        .map(|(l, f)| Ok((l.clone(), expand_rational(&f.scale(&-Q::one()), terms)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    decompose_series(table, &series, terms)
}

pub fn fmt_row(r: &[Q]) -> Vec<String> {
    r.iter().map(fmt_q).collect()
}
