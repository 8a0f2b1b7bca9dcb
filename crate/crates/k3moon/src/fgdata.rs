//! Weight-two q-series f_g of the twining genera e(g)/12 phi_{0,1} + f_g phi_{-2,1},
//! stored as versioned JSON with exact rational coefficients.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::exactcore::series::{Series, QDEN};
use crate::exactcore::{fmt_q, parse_q, qi, Q};
use crate::genus::{jacobi_split, q_coefficients, twining_from_moonshine, SymplecticClass};
use crate::Error;

pub const FORMAT: &str = "k3moon-fg/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawRecord {
    class: String,
    e: i64,
    #[serde(default)]
    level: u32,
    source: String,
    coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawFile {
    format: String,
    records: Vec<RawRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FgRecord {
    pub class: String,
    pub e: i64,
    pub level: u32,
    pub source: String,
    pub coeffs: Vec<Q>,
}

impl FgRecord {
    /// f_g as a series known below q^(number of coefficients).
    pub fn series(&self) -> Series<Q> {
        crate::genus::q_series(&self.coeffs, self.coeffs.len() as i64 * QDEN)
    }

    /// The twining genus e/12 phi_{0,1} + f phi_{-2,1} below `trunc`.
    pub fn twining(&self, trunc: i64) -> Result<Series<Q>, Error> {
        if trunc > self.coeffs.len() as i64 * QDEN {
            return Err(Error::Data(format!(
                "f_{} has {} coefficients; q-order {} requested",
                self.class,
                self.coeffs.len(),
                (trunc + QDEN - 1) / QDEN
            )));
        }
        twining_from_moonshine(&qi(self.e), &self.series(), trunc)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FgData {
    pub records: Vec<FgRecord>,
}

/// Strips a trailing Galois-pair suffix: "11AB" and "11B" both look up "11A".
fn canonical(label: &str) -> String {
    let digits: String = label.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = &label[digits.len()..];
    match rest {
        "AB" | "B" if ["7", "11", "14", "15", "23"].contains(&digits.as_str()) => format!("{digits}A"),
        _ => label.to_string(),
    }
}

impl FgData {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        if raw.format != FORMAT {
            return Err(Error::Data(format!("unsupported format {:?}", raw.format)));
        }
        let mut records = Vec::new();
        for r in raw.records {
            let coeffs = r.coeffs.iter().map(|c| parse_q(c)).collect::<Result<Vec<_>, _>>()?;
            records.push(FgRecord { class: r.class, e: r.e, level: r.level, source: r.source, coeffs });
        }
        Ok(FgData { records })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let raw = RawFile {
            format: FORMAT.to_string(),
            records: self
                .records
                .iter()
                .map(|r| RawRecord {
                    class: r.class.clone(),
                    e: r.e,
                    level: r.level,
                    source: r.source.clone(),
                    coeffs: r.coeffs.iter().map(fmt_q).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable") + "\n"
    }

    pub fn get(&self, label: &str) -> Option<&FgRecord> {
        let want = canonical(label);
        self.records.iter().find(|r| r.class == want || r.class == label)
    }
}

/// f_g for the geometric classes, extracted from the fixed-point genus.
pub fn geometric_fg(terms: usize) -> Result<FgData, Error> {
    let trunc = terms as i64 * QDEN;
    let mut records = Vec::new();
    for g in SymplecticClass::ALL {
        let s = crate::genus::equivariant_elliptic_genus(g, trunc)?;
        let split = jacobi_split(&s)?;
        let e = split.a * qi(12);
        if !e.is_integer() {
            return Err(Error::Structural(format!("{}: e(g) = {} is not integral", g.label(), fmt_q(&e))));
        }
        records.push(FgRecord {
            class: g.label().to_string(),
            e: e.to_integer().try_into().unwrap_or(0),
            level: g.order(),
            source: "fixed-point formula, split into phi_0,1 and phi_-2,1".into(),
            coeffs: q_coefficients(&split.h),
        });
    }
    Ok(FgData { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(canonical("11AB"), "11A");
        assert_eq!(canonical("7B"), "7A");
        assert_eq!(canonical("2B"), "2B");
        assert_eq!(canonical("4A"), "4A");
    }

    #[test]
    fn round_trip() {
        let d = FgData {
            records: vec![FgRecord {
                class: "2A".into(),
                e: 8,
                level: 2,
                source: "test".into(),
                coeffs: vec![crate::exactcore::q(4, 3), qi(32)],
            }],
        };
        assert_eq!(FgData::parse(&d.to_json()).unwrap(), d);
    }
}
