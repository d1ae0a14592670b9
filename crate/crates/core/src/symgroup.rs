//! Partitions, permutations, the rational group algebra of `S_r` and
//! Young symmetrizers.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// All partitions of `r`, in reverse lexicographic order.
    pub fn all(r: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(r, r, &mut Vec::new(), &mut out);
        out
    }

    /// Rows of the canonical tableau, filled with `0..r` left to right, top to bottom.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut next = 0;
        self.parts
            .iter()
            .map(|&p| {
                let row = (next..next + p).collect();
                next += p;
                row
            })
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let rows = self.rows();
        let width = self.parts.first().copied().unwrap_or(0);
        (0..width).map(|j| rows.iter().filter_map(|r| r.get(j).copied()).collect()).collect()
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse { what: "partition", input: s.to_string() })?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A bijection of `{0, …, r-1}`; displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Invalid(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(r: usize) -> Self {
        Permutation { images: (0..r).collect() }
    }

    pub fn transposition(r: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..r).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "permutations of different degree");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn sign(&self) -> i64 {
        if (self.degree() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All of `S_r` in lexicographic order of image sequences.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..r).collect();
        loop {
            out.push(Permutation { images: images.clone() });
            // next permutation
            let Some(i) = (1..r).rev().find(|&i| images[i - 1] < images[i]) else {
                break;
            };
            let j = (i..r).rev().find(|&j| images[j] > images[i - 1]).unwrap();
            images.swap(i - 1, j);
            images[i..].reverse();
        }
        out
    }

    /// The subgroup of `S_r` permuting each block among itself.
    pub fn block_group(r: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
        let mut group = vec![Permutation::identity(r)];
        for block in blocks {
            let local = Permutation::all(block.len());
            let mut next = Vec::with_capacity(group.len() * local.len());
            for g in &group {
                for l in &local {
                    let mut images = g.images.clone();
                    for (k, &b) in block.iter().enumerate() {
                        images[b] = block[l.images[k]];
                    }
                    next.push(Permutation { images });
                }
            }
            group = next;
        }
        group
    }
}

pub fn cycle_type(sigma: &Permutation) -> Partition {
    let mut parts: Vec<usize> = sigma.cycles().iter().map(Vec::len).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition { parts }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// A sparse element of `Q[S_r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgElem {
    degree: usize,
    coeffs: BTreeMap<Permutation, Rational>,
}

impl GroupAlgElem {
    pub fn zero(r: usize) -> Self {
        GroupAlgElem { degree: r, coeffs: BTreeMap::new() }
    }

    pub fn from_perm(sigma: Permutation) -> Self {
        let degree = sigma.degree();
        GroupAlgElem { degree, coeffs: [(sigma, Rational::one())].into() }
    }

    pub fn from_terms(r: usize, terms: impl IntoIterator<Item = (Permutation, Rational)>) -> Self {
        let mut x = GroupAlgElem::zero(r);
        for (p, c) in terms {
            x.add_term(p, c);
        }
        x
    }

    fn add_term(&mut self, p: Permutation, c: Rational) {
        assert_eq!(p.degree(), self.degree, "permutation of wrong degree");
        match self.coeffs.entry(p) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &Permutation) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn identity_coeff(&self) -> Rational {
        self.coeff(&Permutation::identity(self.degree))
    }

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> GroupAlgElem {
        if k.is_zero() {
            return GroupAlgElem::zero(self.degree);
        }
        GroupAlgElem { degree: self.degree, coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero(self.degree);
        for (p, a) in &self.coeffs {
            for (q, b) in &other.coeffs {
                out.add_term(p.compose(q), a * b);
            }
        }
        out
    }

    /// `g x g⁻¹`.
    pub fn conjugate_by(&self, g: &Permutation) -> GroupAlgElem {
        let gi = g.inverse();
        GroupAlgElem::from_terms(self.degree, self.coeffs.iter().map(|(p, c)| (g.compose(p).compose(&gi), c.clone())))
    }
}

impl fmt::Display for GroupAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.coeffs.iter().map(|(p, c)| format!("{}*{p}", fmt_rational(c))).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `c_λ = a_λ · b_λ` for the row-filling canonical tableau.
pub fn young_symmetrizer(lambda: &Partition) -> GroupAlgElem {
    let r = lambda.size();
    let a = GroupAlgElem::from_terms(
        r,
        Permutation::block_group(r, &lambda.rows()).into_iter().map(|p| (p, Rational::one())),
    );
    let b = GroupAlgElem::from_terms(
        r,
        Permutation::block_group(r, &lambda.columns()).into_iter().map(|q| {
            let s = q.sign();
            (q, Rational::from_integer(s.into()))
        }),
    );
    a.mul(&b)
}

/// Number of standard Young tableaux, by the hook length formula.
pub fn hook_dimension(lambda: &Partition) -> BigInt {
    let conj = lambda.conjugate();
    let mut hooks = BigInt::one();
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row {
            hooks *= row - j + conj.parts[j] - i - 1;
        }
    }
    factorial(lambda.size()) / hooks
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}
