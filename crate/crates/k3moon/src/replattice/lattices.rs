//! Lattices of Z-valued functions on element orders 1..8.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::table::CharacterTable;
use crate::exactcore::lattice::{
    dual_of_span, hnf_basis, integral_lattice, snf_quotient, solve_in_lattice, IVec,
};
use crate::exactcore::{fmt_q, AbelianQuotient, IntegerLattice, Membership, Q};
use crate::Error;

pub const ORDERS: usize = 8;

/// Classes of symplectic orders 1..8 in each ambient group; for M24 the
/// rational class 7AB is represented by 7A.
pub const M24_CLASSES: [&str; ORDERS] = ["1A", "2A", "3A", "4B", "5A", "6A", "7A", "8A"];
pub const M23_CLASSES: [&str; ORDERS] = ["1A", "2A", "3A", "4A", "5A", "6A", "7A", "8A"];
pub const CO0_CLASSES: [&str; ORDERS] = ["1A+", "2A+", "3B+", "4C+", "5B+", "6E+", "7B+", "8E+"];

/// Lattice spanned by the rationalized characters restricted to `labels`, one
/// class per order 1..8.
pub fn restricted_lattice(table: &CharacterTable, labels: &[&str]) -> Result<IntegerLattice, Error> {
    let rows = table.restricted_rows(labels)?;
    hnf_basis(labels.len(), &rows)
}

/// N_i for one Mukai group.
#[derive(Clone, Debug)]
pub struct MukaiComponent {
    pub group: String,
    pub orders: Vec<u32>,
    pub lattice: IntegerLattice,
}

fn unit(i: usize) -> IVec {
    (0..ORDERS).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// N_i: functions on 1..8 whose pullback along the element-order map is a
/// rational generalized character of H (rational characters with equal
/// values on classes of equal order, read off in order space).
pub fn mukai_component(table: &CharacterTable) -> Result<MukaiComponent, Error> {
    let orders = table.element_orders();
    if orders.iter().any(|&o| o == 0 || o as usize > ORDERS) {
        return Err(Error::Data(format!("{}: element orders outside 1..8", table.group)));
    }
    let k = table.classes.len();
    let all: Vec<String> = table.classes.iter().map(|c| c.label.clone()).collect();
    let labels: Vec<&str> = all.iter().map(String::as_str).collect();
    let l = hnf_basis(k, &table.restricted_rows(&labels)?)?;
    // order-constant integer vectors: spanned by indicators of each order
    let ind: Vec<IVec> = orders
        .iter()
        .map(|&o| table.classes.iter().map(|c| BigInt::from((c.order == o) as i64)).collect())
        .collect();
    let v = hnf_basis(k, &ind)?;
    let l0 = l.intersect(&v);
    let reps: Vec<usize> = orders
        .iter()
        .map(|&o| table.classes.iter().position(|c| c.order == o).expect("order present"))
        .collect();
    let mut gens: Vec<IVec> = l0
        .basis
        .iter()
        .map(|row| {
            let mut f = vec![BigInt::zero(); ORDERS];
            for (j, &o) in orders.iter().enumerate() {
                f[o as usize - 1] = row[reps[j]].clone();
            }
            f
        })
        .collect();
    for d in 1..=ORDERS as u32 {
        if !orders.contains(&d) {
            gens.push(unit(d as usize - 1));
        }
    }
    Ok(MukaiComponent { group: table.group.clone(), orders, lattice: hnf_basis(ORDERS, &gens)? })
}

/// N_i computed by duality: f lies in N_i iff <f o ord, chi> is integral for
/// every irreducible chi. Used as an independent check.
pub fn mukai_component_dual(table: &CharacterTable) -> Result<IntegerLattice, Error> {
    if table.rationalized {
        return Err(Error::Precondition("duality check needs the full table".into()));
    }
    let ord = Q::from_integer(table.order.clone());
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for c in &table.characters {
        let mut row = vec![Q::zero(); ORDERS];
        for (d, slot) in row.iter_mut().enumerate() {
            let mut s = crate::exactcore::Cyclotomic::rational(Q::zero());
            for (i, cl) in table.classes.iter().enumerate() {
                if cl.order as usize == d + 1 {
                    let t = c.values[i].conj().scale(&Q::from_integer(cl.size.clone()));
                    s = s.try_add(&t)?;
                }
            }
            *slot = s
                .as_rational()
                .ok_or_else(|| Error::Structural("order sum of a character is irrational".into()))?
                / &ord;
        }
        rows.push(row);
    }
    for d in 0..ORDERS {
        rows.push((0..ORDERS).map(|j| if j == d { Q::one() } else { Q::zero() }).collect());
    }
    let dual = dual_of_span(ORDERS, &rows)?;
    integral_lattice(ORDERS, &dual)
}

pub fn intersect_all(parts: &[&IntegerLattice]) -> IntegerLattice {
    parts.iter().fold(IntegerLattice::full(ORDERS), |acc, l| acc.intersect(l))
}

/// N and its components.
pub fn mukai_lattice_n(tables: &[CharacterTable]) -> Result<(IntegerLattice, Vec<MukaiComponent>), Error> {
    let comps = tables.iter().map(mukai_component).collect::<Result<Vec<_>, _>>()?;
    let n = intersect_all(&comps.iter().map(|c| &c.lattice).collect::<Vec<_>>());
    Ok((n, comps))
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetResult {
    /// 1-based indices of the groups used.
    pub groups: Vec<usize>,
    pub equals_n: bool,
    pub index: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SufficiencyReport {
    pub checked: Vec<SubsetResult>,
    pub sufficient_fours: bool,
    /// No three groups suffice.
    pub no_three_suffice: bool,
}

fn subset_result(n: &IntegerLattice, comps: &[MukaiComponent], idx: &[usize]) -> Result<SubsetResult, Error> {
    let l = intersect_all(&idx.iter().map(|&i| &comps[i].lattice).collect::<Vec<_>>());
    let q = snf_quotient(n, &l)?;
    Ok(SubsetResult {
        groups: idx.iter().map(|i| i + 1).collect(),
        equals_n: l == *n,
        index: q.order().map(|o| o.to_string()).unwrap_or_else(|| "infinite".into()),
    })
}

/// Checks that H1, H5, H6 with any of H2, H3, H4 determine N, and that no
/// three of the eleven groups do.
pub fn sufficiency_scan(n: &IntegerLattice, comps: &[MukaiComponent]) -> Result<SufficiencyReport, Error> {
    let mut checked = Vec::new();
    let mut fours = true;
    for j in [1usize, 2, 3] {
        let r = subset_result(n, comps, &[0, 4, 5, j])?;
        fours &= r.equals_n;
        checked.push(r);
    }
    let m = comps.len();
    let mut none = true;
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let r = subset_result(n, comps, &[a, b, c])?;
                if r.equals_n {
                    none = false;
                    checked.push(r);
                }
            }
        }
    }
    checked.push(subset_result(n, comps, &[0, 4, 5])?);
    Ok(SufficiencyReport { checked, sufficient_fours: fours, no_three_suffice: none })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientRow {
    pub group: String,
    pub orders: Vec<u32>,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub n_basis: Vec<Vec<String>>,
    pub m_mod_n: Vec<String>,
    pub components: Vec<QuotientRow>,
    pub k_equals_n: bool,
    pub k1_equals_n: bool,
    pub n_mod_k2: Vec<String>,
    pub k2_index: String,
}

fn factors(q: &AbelianQuotient) -> Vec<String> {
    q.factors.iter().map(|f| f.to_string()).collect()
}

pub fn lattice_report(
    m24: &CharacterTable,
    m23: &CharacterTable,
    co0: &CharacterTable,
    mukai: &[CharacterTable],
) -> Result<LatticeReport, Error> {
    let (n, comps) = mukai_lattice_n(mukai)?;
    let k = restricted_lattice(m24, &M24_CLASSES)?;
    let k1 = restricted_lattice(m23, &M23_CLASSES)?;
    let k2 = restricted_lattice(co0, &CO0_CLASSES)?;
    let mn = snf_quotient(&n, &IntegerLattice::full(ORDERS))?;
    let components = comps
        .iter()
        .map(|c| {
            Ok(QuotientRow {
                group: c.group.clone(),
                orders: c.orders.clone(),
                factors: factors(&snf_quotient(&n, &c.lattice)?),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    // K'' may fail to lie in N; quotient N/(K'' cap N) and the index of K'' + N
    let k2n = k2.intersect(&n);
    let q2 = snf_quotient(&k2n, &n)?;
    Ok(LatticeReport {
        n_basis: n.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        m_mod_n: factors(&mn),
        components,
        k_equals_n: k == n,
        k1_equals_n: k1 == n,
        k2_index: q2.order().map(|o| o.to_string()).unwrap_or_else(|| "infinite".into()),
        n_mod_k2: factors(&q2),
    })
}

/// Integer combination of rationalized characters.
#[derive(Clone, Debug, Serialize)]
pub struct VirtualCharacter {
    pub group: String,
    pub names: Vec<String>,
    pub coefficients: Vec<String>,
}

/// A virtual rational character of the table's group whose values at the
/// listed classes are `v`. The representative is the Hermite back-substitution
/// solution, which is deterministic in the table order.
pub fn solve_virtual(table: &CharacterTable, labels: &[&str], v: &[BigInt]) -> Result<VirtualCharacter, Error> {
    let rows = table.restricted_rows(labels)?;
    let r = table.rationalize()?;
    match solve_in_lattice(v, &rows)? {
        Membership::Member(x) => Ok(VirtualCharacter {
            group: table.group.clone(),
            names: r.characters.iter().map(|c| c.name.clone()).collect(),
            coefficients: x.iter().map(|c| c.to_string()).collect(),
        }),
        Membership::NotMember { witness, pairing } => Err(Error::Mismatch(format!(
            "vector is not a restricted character: pairing with ({}) is {}",
            witness.iter().map(fmt_q).collect::<Vec<_>>().join(", "),
            fmt_q(&pairing)
        ))),
    }
}

pub fn solve_virtual_m24(m24: &CharacterTable, v: &[BigInt]) -> Result<VirtualCharacter, Error> {
    solve_virtual(m24, &M24_CLASSES, v)
}

/// Values of a virtual character at the listed classes.
pub fn evaluate_virtual(table: &CharacterTable, labels: &[&str], x: &VirtualCharacter) -> Result<Vec<BigInt>, Error> {
    let rows = table.restricted_rows(labels)?;
    let coeffs: Vec<BigInt> = x
        .coefficients
        .iter()
        .map(|c| c.parse().map_err(|_| Error::Parse(c.clone())))
        .collect::<Result<_, _>>()?;
    Ok((0..labels.len())
        .map(|j| rows.iter().zip(&coeffs).map(|(r, c)| &r[j] * c).sum())
        .collect())
}
