//! Integer lattices in Z^n via Hermite and Smith normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Q;
use crate::Error;

pub type IVec = Vec<BigInt>;

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn is_zero_row(r: &[BigInt]) -> bool {
    r.iter().all(|x| x.is_zero())
}

fn row_combo(a: &[BigInt], b: &[BigInt], s: &BigInt, t: &BigInt) -> IVec {
    a.iter().zip(b).map(|(x, y)| s * x + t * y).collect()
}

/// Row-style Hermite normal form. When `track` is given, the same row
/// operations are applied to it, so that track * input = output.
fn hnf_rows(mut m: Vec<IVec>, mut track: Option<&mut Vec<IVec>>) -> Vec<IVec> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                if let Some(t) = track.as_deref_mut() {
                    t.swap(r, i);
                }
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let e = a.extended_gcd(&b);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let ag = &a / &g;
            let bg = &b / &g;
            let nr = row_combo(&m[r], &m[i], &s, &t);
            let ni = row_combo(&m[r], &m[i], &(-&bg), &ag);
            m[r] = nr;
            m[i] = ni;
            if let Some(tr) = track.as_deref_mut() {
                let nr = row_combo(&tr[r], &tr[i], &s, &t);
                let ni = row_combo(&tr[r], &tr[i], &(-&bg), &ag);
                tr[r] = nr;
                tr[i] = ni;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            m[r] = m[r].iter().map(|x| -x).collect();
            if let Some(t) = track.as_deref_mut() {
                t[r] = t[r].iter().map(|x| -x).collect();
            }
        }
        let p = m[r][c].clone();
        for k in 0..r {
            let f = m[k][c].div_floor(&p);
            if f.is_zero() {
                continue;
            }
            let nf = -&f;
            m[k] = row_combo(&m[k], &m[r], &BigInt::one(), &nf);
            if let Some(t) = track.as_deref_mut() {
                t[k] = row_combo(&t[k], &t[r], &BigInt::one(), &nf);
            }
        }
        r += 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    pub dim: usize,
    /// Rows in Hermite normal form, zero rows removed.
    pub basis: Vec<IVec>,
}

/// Invariant factors of a finite-index (or not) lattice quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianQuotient {
    /// d_1 | d_2 | ... with 1-factors omitted.
    pub factors: Vec<BigInt>,
    /// Number of Z summands when the sublattice has lower rank.
    pub free_rank: usize,
}

impl AbelianQuotient {
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.factors.iter().fold(BigInt::one(), |a, b| a * b))
        }
    }

    pub fn factors_i64(&self) -> Vec<i64> {
        self.factors.iter().map(|x| x.try_into().unwrap_or(i64::MAX)).collect()
    }
}

/// Canonical Hermite basis of the integer span of `vectors`.
pub fn hnf_basis(dim: usize, vectors: &[IVec]) -> Result<IntegerLattice, Error> {
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::Domain("vectors of unequal length".into()));
    }
    let h = hnf_rows(vectors.to_vec(), None);
    Ok(IntegerLattice { dim, basis: h.into_iter().filter(|r| !is_zero_row(r)).collect() })
}

impl IntegerLattice {
    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntegerLattice { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        IntegerLattice { dim, basis: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of v in the Hermite basis, if v lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<IVec> {
        let mut r: IVec = v.to_vec();
        let mut x = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let c = b.iter().position(|e| !e.is_zero()).expect("nonzero basis row");
            let (f, rem) = r[c].div_rem(&b[c]);
            if !rem.is_zero() {
                return None;
            }
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= &f * bi;
            }
            x.push(f);
        }
        if is_zero_row(&r) {
            Some(x)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, o: &IntegerLattice) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &IntegerLattice) -> IntegerLattice {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        hnf_basis(self.dim, &v).expect("equal dimensions")
    }

    pub fn intersect(&self, o: &IntegerLattice) -> IntegerLattice {
        let n = self.dim;
        let mut rows = Vec::new();
        for b in &self.basis {
            let mut r = b.clone();
            r.extend(b.iter().cloned());
            rows.push(r);
        }
        for b in &o.basis {
            let mut r = b.clone();
            r.extend(std::iter::repeat_n(BigInt::zero(), n));
            rows.push(r);
        }
        let h = hnf_rows(rows, None);
        let inter: Vec<IVec> = h
            .into_iter()
            .filter(|r| is_zero_row(&r[..n]) && !is_zero_row(&r[n..]))
            .map(|r| r[n..].to_vec())
            .collect();
        hnf_basis(n, &inter).expect("equal dimensions")
    }

    /// |det| of the basis for a full-rank lattice.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rank() != self.dim {
            return None;
        }
        Some(
            self.basis
                .iter()
                .enumerate()
                .fold(BigInt::one(), |a, (i, r)| a * &r[i])
                .abs(),
        )
    }
}

/// Smith invariant factors (nonzero diagonal entries) of an integer matrix.
pub fn smith_invariants(mat: &[IVec]) -> Vec<BigInt> {
    let mut m: Vec<IVec> = mat.to_vec();
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for r in m.iter_mut() {
            r.swap(t, bj);
        }
        loop {
            let p = m[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let f = m[i][t].div_floor(&p);
                if !f.is_zero() {
                    for j in t..cols {
                        let v = &f * &m[t][j];
                        m[i][j] -= v;
                    }
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j].div_floor(&p);
                if !f.is_zero() {
                    for i in t..rows {
                        let v = &f * &m[i][t];
                        m[i][j] -= v;
                    }
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility: every remaining entry must be a multiple of p
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&m[i][j] % &p).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let ri = m[i].clone();
                        for (a, b) in m[t].iter_mut().zip(&ri) {
                            *a += b;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for r in m.iter_mut() {
                r.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Invariant factors of sup / sub.
pub fn snf_quotient(sub: &IntegerLattice, sup: &IntegerLattice) -> Result<AbelianQuotient, Error> {
    let mut coords = Vec::new();
    for b in &sub.basis {
        match sup.coordinates(b) {
            Some(c) => coords.push(c),
            None => {
                return Err(Error::Precondition(
                    "sublattice is not contained in the superlattice".into(),
                ))
            }
        }
    }
    let d = smith_invariants(&coords);
    let free_rank = sup.rank() - d.len();
    Ok(AbelianQuotient { factors: d.into_iter().filter(|x| !x.is_one()).collect(), free_rank })
}

/// Result of expressing a vector in terms of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Integer coefficients on the generators.
    Member(IVec),
    /// A dual vector w (rational) with <w, v> not integral.
    NotMember { witness: Vec<Q>, pairing: Q },
}

/// Canonical solution of x * generators = v by Hermite back-substitution.
pub fn solve_in_lattice(v: &[BigInt], generators: &[IVec]) -> Result<Membership, Error> {
    let n = v.len();
    if generators.iter().any(|g| g.len() != n) {
        return Err(Error::Domain("generators of unequal length".into()));
    }
    let k = generators.len();
    let mut u: Vec<IVec> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let h = hnf_rows(generators.to_vec(), Some(&mut u));
    let nz: Vec<usize> = (0..h.len()).filter(|&i| !is_zero_row(&h[i])).collect();
    let lat = IntegerLattice { dim: n, basis: nz.iter().map(|&i| h[i].clone()).collect() };
    match lat.coordinates(v) {
        Some(x) => {
            let mut sol = vec![BigInt::zero(); k];
            for (xi, &row) in x.iter().zip(&nz) {
                for (s, uij) in sol.iter_mut().zip(&u[row]) {
                    *s += xi * uij;
                }
            }
            Ok(Membership::Member(sol))
        }
        None => Ok(non_member_witness(&lat, v)),
    }
}

fn non_member_witness(lat: &IntegerLattice, v: &[BigInt]) -> Membership {
    let n = lat.dim;
    let basis_q: Vec<Vec<Q>> =
        lat.basis.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let vq: Vec<Q> = v.iter().map(|x| Q::from_integer(x.clone())).collect();
    // Outside the rational span: any vector orthogonal to the lattice but not to v.
    let sol = solve_rational(&basis_q, &vq);
    match sol {
        None => {
            let w = orthogonal_complement_vector(&basis_q, &vq, n);
            let pairing = dot(&w, &vq);
            Membership::NotMember { witness: w, pairing }
        }
        Some(x) => {
            // Fractional coordinate i: the dual basis vector b_i^* pairs to x_i.
            let i = x.iter().position(|c| !c.is_integer()).expect("a fractional coordinate");
            let dual = dual_basis(&basis_q);
            Membership::NotMember { witness: dual[i].clone(), pairing: x[i].clone() }
        }
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
}

/// Solves x * rows = v over Q; None if v is outside the row space.
pub fn solve_rational(rows: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let k = rows.len();
    let n = v.len();
    // augmented system in columns: A^T x = v
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|j| {
            let mut r: Vec<Q> = (0..k).map(|i| rows[i][j].clone()).collect();
            r.push(v[j].clone());
            r
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(x)
}

fn orthogonal_complement_vector(rows: &[Vec<Q>], v: &[Q], n: usize) -> Vec<Q> {
    // project v off the row space: w = v - P v with P the orthogonal projector
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for r in rows {
        let mut w = r.clone();
        for b in &basis {
            let f = dot(&w, b) / dot(b, b);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= &f * y;
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
        }
    }
    let mut w: Vec<Q> = v.to_vec();
    for b in &basis {
        let f = dot(&w, b) / dot(b, b);
        for (x, y) in w.iter_mut().zip(b) {
            *x -= &f * y;
        }
    }
    debug_assert_eq!(w.len(), n);
    w
}

/// Dual basis of a rational basis of a sublattice of Q^n with n = rank:
/// vectors b_i^* with <b_i^*, b_j> = delta_ij.
pub fn dual_basis(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let k = rows.len();
    let n = rows[0].len();
    assert_eq!(k, n, "dual basis needs a full-rank lattice");
    // D = (B^T)^{-1}: rows of (B^{-1})^T
    let inv = invert(rows).expect("basis is invertible");
    (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect()
}

pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Dual of the lattice spanned by rational generators of full rank:
/// { x : <x, g> in Z for all g }.
pub fn dual_of_span(dim: usize, gens: &[Vec<Q>]) -> Result<Vec<Vec<Q>>, Error> {
    let den = gens
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<IVec> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = hnf_basis(dim, &ints)?;
    if h.rank() != dim {
        return Err(Error::Domain("dual of a lattice that is not of full rank".into()));
    }
    let bq: Vec<Vec<Q>> =
        h.basis.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
    let d = Q::from_integer(den);
    Ok(dual_basis(&bq).into_iter().map(|r| r.into_iter().map(|x| x * &d).collect()).collect())
}

/// Converts rational rows that are known to be integral into a lattice.
pub fn integral_lattice(dim: usize, rows: &[Vec<Q>]) -> Result<IntegerLattice, Error> {
    let mut v = Vec::new();
    for r in rows {
        if r.iter().any(|x| !x.is_integer()) {
            return Err(Error::Domain("non-integral lattice vector".into()));
        }
        v.push(r.iter().map(|x| x.to_integer()).collect());
    }
    hnf_basis(dim, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hnf() {
        let l = hnf_basis(2, &[ivec(&[2, 0]), ivec(&[0, 2]), ivec(&[1, 1])]).unwrap();
        assert_eq!(l.basis, vec![ivec(&[1, 1]), ivec(&[0, 2])]);
    }

    #[test]
    fn empty_is_zero_lattice() {
        assert_eq!(hnf_basis(3, &[]).unwrap(), IntegerLattice::zero(3));
    }

    #[test]
    fn quotient_of_even_lattice() {
        let sub = hnf_basis(2, &[ivec(&[2, 0]), ivec(&[0, 2])]).unwrap();
        let q = snf_quotient(&sub, &IntegerLattice::full(2)).unwrap();
        assert_eq!(q.factors_i64(), vec![2, 2]);
    }

    #[test]
    fn rank_drop_is_reported() {
        let sub = hnf_basis(2, &[ivec(&[3, 0])]).unwrap();
        let q = snf_quotient(&sub, &IntegerLattice::full(2)).unwrap();
        assert_eq!(q.free_rank, 1);
        assert_eq!(q.factors_i64(), vec![3]);
    }

    #[test]
    fn intersection_of_multiples() {
        let a = hnf_basis(1, &[ivec(&[4])]).unwrap();
        let b = hnf_basis(1, &[ivec(&[6])]).unwrap();
        assert_eq!(a.intersect(&b).basis, vec![ivec(&[12])]);
    }

    #[test]
    fn solve_sum_of_generators() {
        let g = vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])];
        let m = solve_in_lattice(&ivec(&[1, 1, 0]), &g).unwrap();
        assert_eq!(m, Membership::Member(ivec(&[1, 1, 0])));
    }

    #[test]
    fn parity_obstruction() {
        let g = vec![ivec(&[2, 0]), ivec(&[0, 2])];
        match solve_in_lattice(&ivec(&[1, 2]), &g).unwrap() {
            Membership::NotMember { pairing, .. } => assert!(!pairing.is_integer()),
            m => panic!("unexpected {m:?}"),
        }
    }

    #[test]
    fn dual_of_half_lattice() {
        let d = dual_of_span(1, &[vec![Q::new(1.into(), 2.into())]]).unwrap();
        assert_eq!(d, vec![vec![Q::from_integer(2.into())]]);
    }
}
