//! Character tables stored as versioned JSON, with validation on load and
//! rationalization (Galois-orbit sums).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::path::Path;

use crate::exactcore::{fmt_q, parse_q, Cyclotomic, Q};
use crate::Error;

pub const FORMAT: &str = "k3moon-character-table/1";

#[derive(Clone, Debug, PartialEq)]
pub struct ClassInfo {
    pub label: String,
    pub order: u32,
    pub size: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub name: String,
    pub values: Vec<Cyclotomic>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub group: String,
    pub order: BigInt,
    pub classes: Vec<ClassInfo>,
    pub characters: Vec<Character>,
    pub rationalized: bool,
    /// Only some classes of the group are present; size checks do not apply.
    pub restricted: bool,
    pub schur_indices: Option<String>,
}

/// A union of algebraically conjugate classes.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalClass {
    pub label: String,
    pub order: u32,
    pub members: Vec<usize>,
    pub size: BigInt,
}

fn parse_value(v: &Value) -> Result<Cyclotomic, Error> {
    match v {
        Value::String(s) => Ok(Cyclotomic::rational(parse_q(s)?)),
        Value::Number(n) => Ok(Cyclotomic::rational(parse_q(&n.to_string())?)),
        Value::Object(m) => {
            let n = m
                .get("conductor")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Data("cyclotomic value without conductor".into()))?;
            let cs = m
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Data("cyclotomic value without coeffs".into()))?;
            let c = cs
                .iter()
                .map(|x| x.as_str().ok_or_else(|| Error::Data("coefficient is not a string".into())).and_then(parse_q))
                .collect::<Result<Vec<_>, _>>()?;
            Cyclotomic::from_coeffs(n as u32, c)
        }
        _ => Err(Error::Data(format!("unsupported character value {v}"))),
    }
}

fn value_json(c: &Cyclotomic) -> Value {
    match c.as_rational() {
        Some(r) => Value::String(fmt_q(&r)),
        None => json!({
            "conductor": c.conductor(),
            "coeffs": c.coeffs().iter().map(fmt_q).collect::<Vec<_>>(),
        }),
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, Error> {
    v.get(k).ok_or_else(|| Error::Data(format!("missing field {k:?}")))
}

fn big(v: &Value) -> Result<BigInt, Error> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::Data(format!("not an integer: {v}"))),
    };
    s.parse().map_err(|_| Error::Data(format!("not an integer: {s:?}")))
}

impl CharacterTable {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        let fmt = field(&v, "format")?.as_str().unwrap_or_default();
        if fmt != FORMAT {
            return Err(Error::Data(format!("unsupported format {fmt:?}")));
        }
        let group = field(&v, "group")?.as_str().unwrap_or_default().to_string();
        let order = big(field(&v, "order")?)?;
        let classes = field(&v, "classes")?
            .as_array()
            .ok_or_else(|| Error::Data("classes is not an array".into()))?
            .iter()
            .map(|c| {
                Ok(ClassInfo {
                    label: field(c, "label")?.as_str().unwrap_or_default().to_string(),
                    order: field(c, "element_order")?
                        .as_u64()
                        .ok_or_else(|| Error::Data("element_order is not an integer".into()))?
                        as u32,
                    size: big(field(c, "size")?)?,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let characters = field(&v, "characters")?
            .as_array()
            .ok_or_else(|| Error::Data("characters is not an array".into()))?
            .iter()
            .map(|c| {
                let values = field(c, "values")?
                    .as_array()
                    .ok_or_else(|| Error::Data("values is not an array".into()))?
                    .iter()
                    .map(parse_value)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Character { name: field(c, "name")?.as_str().unwrap_or_default().to_string(), values })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let t = CharacterTable {
            group,
            order,
            classes,
            characters,
            rationalized: v.get("rationalized").and_then(Value::as_bool).unwrap_or(false),
            restricted: v.get("restricted").and_then(Value::as_bool).unwrap_or(false),
            schur_indices: v.get("schur_indices").and_then(Value::as_str).map(str::to_string),
        };
        if let Some(n) = v.get("class_count").and_then(Value::as_u64) {
            if n as usize != t.classes.len() {
                return Err(Error::Data(format!("class_count {n} but {} classes", t.classes.len())));
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let mut v = json!({
            "format": FORMAT,
            "group": self.group,
            "order": self.order.to_string(),
            "class_count": self.classes.len(),
            "rationalized": self.rationalized,
            "restricted": self.restricted,
            "classes": self.classes.iter().map(|c| json!({
                "label": c.label, "element_order": c.order, "size": c.size.to_string()
            })).collect::<Vec<_>>(),
            "characters": self.characters.iter().map(|c| json!({
                "name": c.name, "values": c.values.iter().map(value_json).collect::<Vec<_>>()
            })).collect::<Vec<_>>(),
        });
        if let Some(s) = &self.schur_indices {
            v["schur_indices"] = Value::String(s.clone());
        }
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    }

    /// Shape, class-size and orthogonality checks.
    pub fn validate(&self) -> Result<(), Error> {
        let k = self.classes.len();
        for c in &self.characters {
            if c.values.len() != k {
                return Err(Error::Data(format!("{}: {} values for {k} classes", c.name, c.values.len())));
            }
            if self.rationalized && c.values.iter().any(|v| !v.is_rational()) {
                return Err(Error::Data(format!("{}: irrational value in a rationalized table", c.name)));
            }
        }
        if self.restricted {
            return Ok(());
        }
        let total: BigInt = self.classes.iter().map(|c| &c.size).sum();
        if total != self.order {
            return Err(Error::Data(format!(
                "class sizes sum to {total}, group order is {}",
                self.order
            )));
        }
        if !self.rationalized {
            if self.characters.len() != k {
                return Err(Error::Data(format!("{} characters for {k} classes", self.characters.len())));
            }
            self.check_orthogonality()?;
        }
        Ok(())
    }

    /// First orthogonality relation, evaluated in floating point; every entry
    /// must round to delta_ij within 1e-6.
    fn check_orthogonality(&self) -> Result<(), Error> {
        let ord = self.order.to_string().parse::<f64>().unwrap_or(f64::NAN);
        let sizes: Vec<f64> = self.classes.iter().map(|c| c.size.to_string().parse().unwrap_or(f64::NAN)).collect();
        let vals: Vec<Vec<(f64, f64)>> =
            self.characters.iter().map(|c| c.values.iter().map(Cyclotomic::to_complex).collect()).collect();
        for i in 0..vals.len() {
            for j in i..vals.len() {
                let (mut re, mut im) = (0.0, 0.0);
                for (c, s) in sizes.iter().enumerate() {
                    let (a, b) = vals[i][c];
                    let (x, y) = vals[j][c];
                    re += s * (a * x + b * y);
                    im += s * (b * x - a * y);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                if (re / ord - want).abs() > 1e-6 || (im / ord).abs() > 1e-6 {
                    return Err(Error::Data(format!(
                        "{}: characters {} and {} violate orthogonality",
                        self.group, self.characters[i].name, self.characters[j].name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    pub fn element_orders(&self) -> Vec<u32> {
        let mut o: Vec<u32> = self.classes.iter().map(|c| c.order).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Galois-orbit sums of the irreducible characters, in order of first
    /// appearance; orbit names join the member names with '+'.
    pub fn rationalize(&self) -> Result<CharacterTable, Error> {
        if self.rationalized {
            return Ok(self.clone());
        }
        let mut seen = vec![false; self.characters.len()];
        let mut out = Vec::new();
        for i in 0..self.characters.len() {
            if seen[i] {
                continue;
            }
            let c = &self.characters[i];
            let l = c.values.iter().map(|v| v.conductor()).fold(1u32, |a, b| a.lcm(&b));
            let mut orbit: Vec<Vec<Cyclotomic>> = Vec::new();
            for k in 1..=l.max(1) as i64 {
                if k.gcd(&(l as i64)) != 1 && l > 1 {
                    continue;
                }
                let conj = c
                    .values
                    .iter()
                    .map(|v| if v.conductor() == 1 { Ok(v.clone()) } else { v.galois(k) })
                    .collect::<Result<Vec<_>, _>>()?;
                if !orbit.contains(&conj) {
                    orbit.push(conj);
                }
            }
            let mut names = Vec::new();
            for conj in &orbit {
                let j = self
                    .characters
                    .iter()
                    .position(|d| &d.values == conj)
                    .ok_or_else(|| Error::Data(format!("{}: Galois conjugate of {} missing", self.group, c.name)))?;
                seen[j] = true;
                names.push(self.characters[j].name.clone());
            }
            let mut values = Vec::new();
            for col in 0..self.classes.len() {
                let total = orbit
                    .iter()
                    .map(|conj| conj[col].clone())
                    .try_fold(Cyclotomic::rational(Q::zero()), |a, b| a.try_add(&b))?;
                let r = total.as_rational().ok_or_else(|| {
                    Error::Structural(format!("{}: orbit sum of {} is not rational", self.group, c.name))
                })?;
                values.push(Cyclotomic::rational(r));
            }
            out.push(Character { name: names.join("+"), values });
        }
        Ok(CharacterTable {
            characters: out,
            rationalized: true,
            ..self.clone()
        })
    }

    /// Groups classes into rational classes: same element order and equal
    /// values under every rationalized character. Labels of merged classes
    /// share the order prefix, e.g. 7A and 7B become 7AB.
    pub fn rational_classes(&self) -> Result<Vec<RationalClass>, Error> {
        let r = self.rationalize()?;
        let mut out: Vec<RationalClass> = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            let col: Vec<&Cyclotomic> = r.characters.iter().map(|x| &x.values[i]).collect();
            let hit = out.iter_mut().find(|rc| {
                let j = rc.members[0];
                self.classes[j].order == c.order && r.characters.iter().zip(&col).all(|(x, v)| &x.values[j] == *v)
            });
            match hit {
                Some(rc) => {
                    rc.members.push(i);
                    rc.size += &c.size;
                }
                None => out.push(RationalClass {
                    label: c.label.clone(),
                    order: c.order,
                    members: vec![i],
                    size: c.size.clone(),
                }),
            }
        }
        for rc in out.iter_mut() {
            if rc.members.len() > 1 {
                let prefix = c_prefix(&self.classes[rc.members[0]].label);
                let letters: String =
                    rc.members.iter().map(|&m| self.classes[m].label[prefix.len()..].to_string()).collect();
                rc.label = format!("{prefix}{letters}");
            }
        }
        Ok(out)
    }

    /// Rational integer value vectors of the rationalized characters at the given classes.
    pub fn restricted_rows(&self, labels: &[&str]) -> Result<Vec<Vec<BigInt>>, Error> {
        let idx = labels
            .iter()
            .map(|l| self.class_index(l).ok_or_else(|| Error::Data(format!("{}: no class {l}", self.group))))
            .collect::<Result<Vec<_>, _>>()?;
        let r = self.rationalize()?;
        r.characters
            .iter()
            .map(|c| {
                idx.iter()
                    .map(|&i| {
                        let q = c.values[i].as_rational().expect("rationalized");
                        if q.is_integer() {
                            Ok(q.to_integer())
                        } else {
                            Err(Error::Structural(format!("{}: non-integral character value", c.name)))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn degrees(&self) -> Vec<Q> {
        let id = self.classes.iter().position(|c| c.order == 1).unwrap_or(0);
        self.characters.iter().map(|c| c.values[id].as_rational().unwrap_or_else(Q::one)).collect()
    }
}

fn c_prefix(label: &str) -> String {
    label.chars().take_while(|c| c.is_ascii_digit()).collect()
}
