//! The evaluation functors `F(p|q)` from walled-Brauer diagrams to super
//! vector spaces.
//!
//! `L` goes to `V = Q^{p|q}` with basis `e_0 … e_{p+q-1}`, the first `p`
//! even and the rest odd, and `L∨` goes to `V*` with the dual basis. The
//! structure maps are
//!
//! * `ev : V* ⊗ V → Q`, `e^i ⊗ e_j ↦ δ_ij`
//! * `ev': V ⊗ V* → Q`, `e_j ⊗ e^i ↦ (-1)^{|i|} δ_ij`
//! * `coev : Q → V ⊗ V*`, `1 ↦ Σ e_i ⊗ e^i`
//! * `coev': Q → V* ⊗ V`, `1 ↦ Σ (-1)^{|i|} e^i ⊗ e_i`
//!
//! and crossings carry the Koszul sign, so a closed loop evaluates to `p - q`.
//! A diagram is evaluated as a source permutation bringing each cap
//! together, the caps, the cups, and a target permutation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec, Subspace};
use crate::scalars::{int, LoopParam, Rational};
use crate::wbcat::{compose, Diagram, HomSpace, Letter, WBMorphism, Word};

pub const EVAL_BUDGET: u128 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperSpace {
    pub p: usize,
    pub q: usize,
}

impl SuperSpace {
    pub fn new(p: usize, q: usize) -> Self {
        SuperSpace { p, q }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn is_odd(&self, i: usize) -> bool {
        i >= self.p
    }

    /// `p - q`, the value of a closed loop.
    pub fn sdim(&self) -> Rational {
        int(self.p as i64 - self.q as i64)
    }

    fn size(&self, len: usize) -> usize {
        self.dim().pow(len as u32)
    }

    fn digits(&self, mut idx: usize, len: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; len];
        for k in (0..len).rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    }

    fn parity(&self, idx: usize, len: usize) -> bool {
        self.digits(idx, len).iter().filter(|&&i| self.is_odd(i)).count() % 2 == 1
    }
}

/// Checks `(p+q)^(|w|+|w2|)` against the dense-evaluation budget.
pub fn check_budget(space: SuperSpace, w: &Word, w2: &Word) -> Result<()> {
    let needed = (space.dim() as u128).checked_pow((w.len() + w2.len()) as u32).unwrap_or(u128::MAX);
    if needed > EVAL_BUDGET {
        return Err(Error::Budget { needed, budget: EVAL_BUDGET });
    }
    Ok(())
}

/// An even linear map `V^{⊗w} → V^{⊗w2}`, stored sparsely with rows indexed
/// by target multi-indices and columns by source multi-indices (first
/// slot most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperTensor {
    space: SuperSpace,
    source: Word,
    target: Word,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SuperTensor {
    pub fn zero(space: SuperSpace, source: &Word, target: &Word) -> Self {
        SuperTensor { space, source: source.clone(), target: target.clone(), entries: BTreeMap::new() }
    }

    pub fn space(&self) -> SuperSpace {
        self.space
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.space.size(self.target.len())
    }

    pub fn cols(&self) -> usize {
        self.space.size(self.source.len())
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn add_entry(&mut self, key: (usize, usize), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn scale(&self, k: &Rational) -> SuperTensor {
        let mut out = SuperTensor::zero(self.space, &self.source, &self.target);
        if !k.is_zero() {
            out.entries = self.entries.iter().map(|(key, v)| (*key, v * k)).collect();
        }
        out
    }

    pub fn add(&self, other: &SuperTensor) -> SuperTensor {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_entry(*k, v.clone());
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperTensor) -> Result<SuperTensor> {
        if self.source != other.target || self.space != other.space {
            return Err(Error::WordMismatch { expected: self.source.to_string(), found: other.target.to_string() });
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = SuperTensor::zero(self.space, &other.source, &self.target);
        for ((r, m), a) in &self.entries {
            if let Some(list) = by_row.get(m) {
                for (c, b) in list {
                    out.add_entry((*r, *c), a * *b);
                }
            }
        }
        Ok(out)
    }

    /// Tensor product of even maps (no Koszul sign arises).
    pub fn tensor(&self, other: &SuperTensor) -> Result<SuperTensor> {
        if self.space != other.space {
            return Err(Error::Invalid("tensor of evaluations at different (p|q)".into()));
        }
        let (or, oc) = (other.rows(), other.cols());
        let mut out =
            SuperTensor::zero(self.space, &self.source.concat(&other.source), &self.target.concat(&other.target));
        for ((r1, c1), a) in &self.entries {
            for ((r2, c2), b) in &other.entries {
                out.add_entry((r1 * or + r2, c1 * oc + c2), a * b);
            }
        }
        Ok(out)
    }

    /// `Σ_I (-1)^{|I|} M[I, I]`.
    pub fn supertrace(&self) -> Result<Rational> {
        if self.source != self.target {
            return Err(Error::NotEndomorphism {
                source_word: self.source.to_string(),
                target_word: self.target.to_string(),
            });
        }
        let len = self.source.len();
        let mut acc = Rational::zero();
        for ((r, c), v) in &self.entries {
            if r == c {
                if self.space.parity(*r, len) {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
        }
        Ok(acc)
    }

    /// Entries flattened to `row * cols + col`.
    pub fn to_sparse_vec(&self) -> SparseVec {
        let cols = self.cols();
        self.entries.iter().map(|((r, c), v)| (r * cols + c, v.clone())).collect()
    }
}

/// Koszul sign of listing `order` (positions) instead of ascending order.
fn koszul(order: &[usize], odd: &[bool]) -> bool {
    let mut flip = false;
    for (a, &x) in order.iter().enumerate() {
        if !odd[x] {
            continue;
        }
        for &y in &order[a + 1..] {
            if y < x && odd[y] {
                flip = !flip;
            }
        }
    }
    flip
}

/// Evaluates one diagram; entries are `±1`.
pub fn eval_diagram(d: &Diagram, space: SuperSpace) -> SuperTensor {
    let (w, w2) = (d.source(), d.target());
    let n0 = w.len();
    let n = n0 + w2.len();
    let edges = d.edges();
    let mut thru: Vec<(usize, usize)> = Vec::new();
    let mut caps = Vec::new();
    let mut cups = Vec::new();
    for &(a, b) in &edges {
        if b < n0 {
            caps.push((a, b));
        } else if a >= n0 {
            cups.push((a - n0, b - n0));
        } else {
            thru.push((a, b - n0));
        }
    }
    thru.sort_by_key(|&(_, b)| b);
    let src_order: Vec<usize> = thru.iter().map(|&(a, _)| a).chain(caps.iter().flat_map(|&(a, b)| [a, b])).collect();
    let tgt_order: Vec<usize> = thru.iter().map(|&(_, b)| b).chain(cups.iter().flat_map(|&(a, b)| [a, b])).collect();
    // caps whose left end is `u` are ev'; cups whose left end is `d` are coev'
    let signed_caps: Vec<usize> = caps
        .iter()
        .enumerate()
        .filter(|(_, &(a, _))| w.letters()[a] == Letter::Up)
        .map(|(k, _)| thru.len() + k)
        .collect();
    let signed_cups: Vec<usize> = cups
        .iter()
        .enumerate()
        .filter(|(_, &(a, _))| w2.letters()[a] == Letter::Down)
        .map(|(k, _)| thru.len() + caps.len() + k)
        .collect();
    // edge numbering: through strands, then caps, then cups
    let mut edge_of = vec![0usize; n];
    for (k, &(a, b)) in thru.iter().enumerate() {
        edge_of[a] = k;
        edge_of[n0 + b] = k;
    }
    for (k, &(a, b)) in caps.iter().enumerate() {
        edge_of[a] = thru.len() + k;
        edge_of[b] = thru.len() + k;
    }
    for (k, &(a, b)) in cups.iter().enumerate() {
        edge_of[n0 + a] = thru.len() + caps.len() + k;
        edge_of[n0 + b] = thru.len() + caps.len() + k;
    }
    let m = edges.len();
    let dim = space.dim();
    let mut out = SuperTensor::zero(space, w, w2);
    if dim == 0 && m > 0 {
        return out;
    }
    let mut idx = vec![0usize; m];
    loop {
        let odd_src: Vec<bool> = (0..n0).map(|pos| space.is_odd(idx[edge_of[pos]])).collect();
        let odd_tgt: Vec<bool> = (0..w2.len()).map(|pos| space.is_odd(idx[edge_of[n0 + pos]])).collect();
        let mut neg = koszul(&src_order, &odd_src) ^ koszul(&tgt_order, &odd_tgt);
        for &e in signed_caps.iter().chain(&signed_cups) {
            neg ^= space.is_odd(idx[e]);
        }
        let col = (0..n0).fold(0, |acc, pos| acc * dim + idx[edge_of[pos]]);
        let row = (0..w2.len()).fold(0, |acc, pos| acc * dim + idx[edge_of[n0 + pos]]);
        out.add_entry((row, col), if neg { -Rational::one() } else { Rational::one() });
        // odometer
        let mut k = 0;
        while k < m {
            idx[k] += 1;
            if idx[k] < dim {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }
    out
}

fn check_param(param: &LoopParam, space: SuperSpace) -> Result<()> {
    if let LoopParam::At(a) = param {
        if *a != space.sdim() {
            return Err(Error::ParamMismatch { param: a.to_string(), expected: space.p as i64 - space.q as i64 });
        }
    }
    Ok(())
}

/// `F(p|q)(f)`; generic coefficients are evaluated at `t = p - q`.
pub fn eval_morphism(f: &WBMorphism, p: usize, q: usize) -> Result<SuperTensor> {
    let space = SuperSpace::new(p, q);
    check_param(f.param(), space)?;
    check_budget(space, f.source(), f.target())?;
    let alpha = space.sdim();
    let mut out = SuperTensor::zero(space, f.source(), f.target());
    for (d, c) in f.terms() {
        out = out.add(&eval_diagram(d, space).scale(&c.specialize(&alpha)));
    }
    Ok(out)
}

/// Images of the diagram basis of `Hom(w, w2)` as sparse vectors, in basis order.
pub fn basis_images(w: &Word, w2: &Word, space: SuperSpace) -> Result<Vec<SparseVec>> {
    check_budget(space, w, w2)?;
    let hom = HomSpace::new(w, w2);
    Ok((0..hom.dim()).into_par_iter().map(|k| eval_diagram(&hom.diagram(k), space).to_sparse_vec()).collect())
}

/// The kernel of `F(p|q)` on `Hom(w, w2)`, in diagram coordinates.
pub fn kernel_basis(w: &Word, w2: &Word, p: usize, q: usize) -> Result<Subspace> {
    let space = SuperSpace::new(p, q);
    let images = basis_images(w, w2, space)?;
    let dim = images.len();
    Ok(Subspace::span(dim, linalg::relations(&images)))
}

/// `(even | odd)` dimensions of the image of an idempotent.
pub fn super_dimension(w: &Word, e: &WBMorphism, p: usize, q: usize) -> Result<(usize, usize)> {
    let space = SuperSpace::new(p, q);
    if e.source() != w || e.target() != w {
        return Err(Error::NotEndomorphism {
            source_word: e.source().to_string(),
            target_word: e.target().to_string(),
        });
    }
    check_param(e.param(), space)?;
    let alpha = space.sdim();
    let spec = specialize(e, &alpha);
    if compose(&spec, &spec)? != spec {
        return Err(Error::NotIdempotent);
    }
    let m = eval_morphism(&spec, p, q)?;
    let len = w.len();
    let n = m.cols();
    let block_rank = |odd: bool| {
        let idx: Vec<usize> = (0..n).filter(|&i| space.parity(i, len) == odd).collect();
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&r| idx.iter().map(|&c| m.get(r, c)).collect()).collect();
        linalg::rank(&rows)
    };
    Ok((block_rank(false), block_rank(true)))
}

/// Substitutes `t = alpha` in every coefficient.
pub fn specialize(f: &WBMorphism, alpha: &Rational) -> WBMorphism {
    let param = LoopParam::At(alpha.clone());
    WBMorphism::from_terms(
        f.source(),
        f.target(),
        &param,
        f.terms().iter().map(|(d, c)| (d.clone(), crate::scalars::Scalar::Specialized(c.specialize(alpha)))),
    )
    .expect("specialisation keeps words")
}
