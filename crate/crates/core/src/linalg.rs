//! Exact linear algebra over Q: reduced row echelon forms, nullspaces and
//! canonical subspaces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::scalars::{fmt_rational, Rational};

pub type SparseVec = BTreeMap<usize, Rational>;

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each surviving row.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for the `ncols`-column matrix `A`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let pivots = rref(&mut m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// All linear relations among sparse vectors: a basis of
/// `{c : sum_i c_i v_i = 0}` in `Q^{vectors.len()}`.
pub fn relations(vectors: &[SparseVec]) -> Vec<Vec<Rational>> {
    let m = vectors.len();
    // pivot index -> (vector with unit pivot at its lowest key, combination)
    let mut echelon: BTreeMap<usize, (SparseVec, Vec<Rational>)> = BTreeMap::new();
    let mut rels = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut comb = vec![Rational::zero(); m];
        comb[i] = Rational::one();
        loop {
            let Some((&k, lead)) = v.iter().next() else {
                rels.push(comb);
                break;
            };
            let lead = lead.clone();
            match echelon.get(&k) {
                Some((pv, pc)) => {
                    for (j, x) in pv {
                        let e = v.entry(*j).or_insert_with(Rational::zero);
                        *e -= &lead * x;
                        if e.is_zero() {
                            v.remove(j);
                        }
                    }
                    for (c, x) in comb.iter_mut().zip(pc) {
                        if !x.is_zero() {
                            *c -= &lead * x;
                        }
                    }
                }
                None => {
                    let inv = lead.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    for x in comb.iter_mut() {
                        *x *= &inv;
                    }
                    echelon.insert(k, (v, comb));
                    break;
                }
            }
        }
    }
    rels
}

/// A subspace of `Q^n` held in reduced row echelon form, so equal
/// subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit(ambient, i)).collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let pivots = rref(&mut rows);
        Subspace { ambient, basis: rows, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// The component of `v` left after eliminating the pivot columns.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if v[pc].is_zero() {
                continue;
            }
            let f = v[pc].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        if r.iter().all(Zero::is_zero) {
            return false;
        }
        let mut rows = std::mem::take(&mut self.basis);
        rows.push(r);
        self.pivots = rref(&mut rows);
        self.basis = rows;
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // solve sum a_i u_i = sum b_j w_j
        let n = self.ambient;
        let (k, l) = (self.dim(), other.dim());
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|c| self.basis.iter().map(|u| u[c].clone()).chain(other.basis.iter().map(|w| -w[c].clone())).collect())
            .collect();
        let kernel = nullspace(&rows, k + l);
        let vecs = kernel.into_iter().map(|coef| {
            let mut v = vec![Rational::zero(); n];
            for (a, u) in coef[..k].iter().zip(&self.basis) {
                for (x, y) in v.iter_mut().zip(u) {
                    *x += a * y;
                }
            }
            v
        });
        Subspace::span(n, vecs)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.basis.iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
        rows.serialize(s)
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use proptest::prelude::*;

    fn row(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn mat_vec(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn nullspace_of_ones() {
        let k = nullspace(&[row(&[1, 1])], 2);
        assert_eq!(k, vec![row(&[-1, 1])]);
    }

    #[test]
    fn relations_finds_dependency() {
        let a: SparseVec = [(0, int(1)), (3, int(2))].into_iter().collect();
        let b: SparseVec = [(3, int(1))].into_iter().collect();
        let c: SparseVec = [(0, int(2)), (3, int(6))].into_iter().collect();
        let rels = relations(&[a, b, c]);
        assert_eq!(rels.len(), 1);
        let s = Subspace::span(3, rels);
        assert!(s.contains(&row(&[2, 2, -1])));
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::span(3, vec![row(&[1, 0, 0]), row(&[0, 1, 0])]);
        let w = Subspace::span(3, vec![row(&[0, 1, 0]), row(&[0, 0, 1])]);
        let i = u.intersect(&w);
        assert_eq!(i, Subspace::span(3, vec![row(&[0, 5, 0])]));
        assert!(u.sum(&w).is_full());
        let mut z = Subspace::zero(3);
        assert!(z.insert(&row(&[1, 1, 0])));
        assert!(!z.insert(&row(&[2, 2, 0])));
        assert!(z.is_subspace_of(&u));
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(
            entries in prop::collection::vec(-3i64..=3, 12),
            nrows in 1usize..=3,
        ) {
            let ncols = 4;
            let rows: Vec<Vec<Rational>> = (0..nrows).map(|i| row(&entries[i * 4..i * 4 + 4])).collect();
            let k = nullspace(&rows, ncols);
            prop_assert_eq!(k.len() + rank(&rows), ncols);
            for v in &k {
                prop_assert!(mat_vec(&rows, v).iter().all(Zero::is_zero));
            }
        }
    }
}
