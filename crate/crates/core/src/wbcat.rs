//! Walled-Brauer diagrams: the free rigid symmetric tensor category on one
//! object `L`, with loop parameter `t`.
//!
//! Objects are words over `u` (`L`) and `d` (`L∨`). A diagram `w → w2` is a
//! perfect matching of the positions of `w` followed by those of `w2`,
//! numbered source first, then target, left to right. Allowed edges are
//! through strands joining equal letters across the two sides, caps joining
//! `u` and `d` within the source, and cups joining `u` and `d` within the
//! target.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::{LoopParam, Poly, Rational, Scalar};
use crate::symgroup::{GroupAlgElem, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Up,
    Down,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::Up => Letter::Down,
            Letter::Down => Letter::Up,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    /// `r` ups followed by `s` downs.
    pub fn mixed(r: usize, s: usize) -> Self {
        let mut letters = vec![Letter::Up; r];
        letters.extend(std::iter::repeat_n(Letter::Down, s));
        Word { letters }
    }

    pub fn ups(r: usize) -> Self {
        Word::mixed(r, 0)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count_up(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::Up).count()
    }

    pub fn count_down(&self) -> usize {
        self.len() - self.count_up()
    }

    pub fn balance(&self) -> isize {
        self.count_up() as isize - self.count_down() as isize
    }

    /// Reversed and with every letter flipped.
    pub fn dual(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.flip()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// All words of length at most `n`, shortest first, then lexicographic with `u < d`.
    pub fn all_up_to(n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for l in [Letter::Up, Letter::Down] {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(Word { letters });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Strings over `u`/`d`; `""` and `"1"` are the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'u' | 'U' => Ok(Letter::Up),
                'd' | 'D' => Ok(Letter::Down),
                _ => Err(Error::Parse { what: "word", input: s.to_string() }),
            })
            .collect::<Result<_>>()?;
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", if *l == Letter::Up { 'u' } else { 'd' })?;
        }
        Ok(())
    }
}

/// A walled-Brauer diagram, stored as the partner of every position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    source: Word,
    target: Word,
    partner: Vec<usize>,
}

impl Diagram {
    /// Builds a diagram from an edge list, validating the edge rules.
    pub fn from_edges(source: Word, target: Word, edges: &[(usize, usize)]) -> Result<Self> {
        let n = source.len() + target.len();
        let mut partner = vec![usize::MAX; n];
        for &(i, j) in edges {
            if i >= n || j >= n || i == j || partner[i] != usize::MAX || partner[j] != usize::MAX {
                return Err(Error::Invalid(format!("edge ({i},{j}) is not part of a perfect matching")));
            }
            partner[i] = j;
            partner[j] = i;
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::Invalid("matching is not perfect".into()));
        }
        let d = Diagram { source, target, partner };
        for i in 0..n {
            if !d.edge_ok(i, d.partner[i]) {
                return Err(Error::Invalid(format!("edge ({i},{}) breaks the orientation rules", d.partner[i])));
            }
        }
        Ok(d)
    }

    fn letter(&self, pos: usize) -> (bool, Letter) {
        let n0 = self.source.len();
        if pos < n0 {
            (true, self.source.letters[pos])
        } else {
            (false, self.target.letters[pos - n0])
        }
    }

    fn edge_ok(&self, i: usize, j: usize) -> bool {
        let (si, li) = self.letter(i);
        let (sj, lj) = self.letter(j);
        if si == sj {
            li != lj
        } else {
            li == lj
        }
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn partner(&self, pos: usize) -> usize {
        self.partner[pos]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len()).filter(|&i| i < self.partner[i]).map(|i| (i, self.partner[i])).collect()
    }

    pub fn identity(w: &Word) -> Diagram {
        let n = w.len();
        let partner = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        Diagram { source: w.clone(), target: w.clone(), partner }
    }

    /// The through-strand diagram `w → w'` sending source `i` to target `sigma(i)`.
    pub fn permutation(w: &Word, sigma: &Permutation) -> Diagram {
        let n = w.len();
        assert_eq!(n, sigma.degree(), "permutation degree must match the word");
        let mut letters = vec![Letter::Up; n];
        let mut partner = vec![0; 2 * n];
        for i in 0..n {
            let j = sigma.apply(i);
            letters[j] = w.letters[i];
            partner[i] = n + j;
            partner[n + j] = i;
        }
        Diagram { source: w.clone(), target: Word::new(letters), partner }
    }

    /// The symmetry `a·b → b·a`.
    pub fn symmetry(a: &Word, b: &Word) -> Diagram {
        let (p, q) = (a.len(), b.len());
        let images = (0..p + q).map(|i| if i < p { q + i } else { i - p }).collect();
        Diagram::permutation(&a.concat(b), &Permutation::new(images).unwrap())
    }

    /// Nested cups `1 → w·dual(w)`.
    pub fn coevaluation(w: &Word) -> Diagram {
        let n = w.len();
        let partner = (0..2 * n).map(|i| 2 * n - 1 - i).collect();
        Diagram { source: Word::empty(), target: w.concat(&w.dual()), partner }
    }

    /// Nested caps `w·dual(w) → 1`.
    pub fn evaluation(w: &Word) -> Diagram {
        let n = w.len();
        let partner = (0..2 * n).map(|i| 2 * n - 1 - i).collect();
        Diagram { source: w.concat(&w.dual()), target: Word::empty(), partner }
    }

    /// Number of closed loops after joining source `i` to target `i`.
    pub fn closure_loops(&self) -> Result<usize> {
        if self.source != self.target {
            return Err(Error::NotEndomorphism {
                source_word: self.source.to_string(),
                target_word: self.target.to_string(),
            });
        }
        let n = self.source.len();
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut cur = start;
            loop {
                seen[cur] = true;
                let p = self.partner[cur];
                seen[p] = true;
                let c = if p < n { p + n } else { p - n };
                if seen[c] {
                    break;
                }
                cur = c;
            }
        }
        Ok(loops)
    }
}

/// `g ∘ f` on diagrams, returning the surviving diagram and the number of
/// closed loops removed. Requires `f.target == g.source`.
pub fn compose_diagrams(g: &Diagram, f: &Diagram) -> (Diagram, usize) {
    debug_assert_eq!(f.target, g.source);
    let n0 = f.source.len();
    let n1 = f.target.len();
    let n2 = g.target.len();
    let mut partner = vec![usize::MAX; n0 + n2];
    let mut mid_seen = vec![false; n1];
    // follow a path; `in_f` says which diagram the next edge belongs to
    let walk = |mut in_f: bool, mut q: usize, mid_seen: &mut Vec<bool>| -> usize {
        loop {
            if in_f {
                if q < n0 {
                    return q;
                }
                let k = q - n0;
                mid_seen[k] = true;
                q = g.partner[k];
                in_f = false;
            } else {
                if q >= n1 {
                    return n0 + q - n1;
                }
                mid_seen[q] = true;
                q = f.partner[n0 + q];
                in_f = true;
            }
        }
    };
    for i in 0..n0 {
        if partner[i] == usize::MAX {
            let e = walk(true, f.partner[i], &mut mid_seen);
            partner[i] = e;
            partner[e] = i;
        }
    }
    for j in 0..n2 {
        if partner[n0 + j] == usize::MAX {
            let e = walk(false, g.partner[n1 + j], &mut mid_seen);
            partner[n0 + j] = e;
            partner[e] = n0 + j;
        }
    }
    let mut loops = 0;
    for k in 0..n1 {
        if mid_seen[k] {
            continue;
        }
        loops += 1;
        let mut cur = k;
        loop {
            mid_seen[cur] = true;
            let a = g.partner[cur];
            mid_seen[a] = true;
            let b = f.partner[n0 + a] - n0;
            if mid_seen[b] {
                break;
            }
            cur = b;
        }
    }
    (Diagram { source: f.source.clone(), target: g.target.clone(), partner }, loops)
}

pub fn tensor_diagrams(f: &Diagram, g: &Diagram) -> Diagram {
    let (fs, ft) = (f.source.len(), f.target.len());
    let (gs, gt) = (g.source.len(), g.target.len());
    let map_f = |p: usize| if p < fs { p } else { fs + gs + p - fs };
    let map_g = |p: usize| if p < gs { fs + p } else { fs + gs + ft + p - gs };
    let mut partner = vec![0; fs + gs + ft + gt];
    for p in 0..fs + ft {
        partner[map_f(p)] = map_f(f.partner[p]);
    }
    for p in 0..gs + gt {
        partner[map_g(p)] = map_g(g.partner[p]);
    }
    Diagram { source: f.source.concat(&g.source), target: f.target.concat(&g.target), partner }
}

/// Closes the trailing strands of `d: X·P → Y·P`, joining target position
/// `|Y| + i` to source position `|X| + i`. Returns the diagram `X → Y` and
/// the number of closed loops.
pub fn partial_trace_diagram(d: &Diagram, x_len: usize, y_len: usize) -> (Diagram, usize) {
    let n0 = d.source.len();
    let p_len = n0 - x_len;
    debug_assert_eq!(d.target.len(), y_len + p_len);
    debug_assert_eq!(d.source.letters[x_len..], d.target.letters[y_len..]);
    let is_internal = |pos: usize| (pos >= x_len && pos < n0) || pos >= n0 + y_len;
    let pair = |pos: usize| if pos < n0 { pos - x_len + n0 + y_len } else { pos - n0 - y_len + x_len };
    let new_pos = |pos: usize| if pos < n0 { pos } else { x_len + pos - n0 };
    let total = n0 + d.target.len();
    let mut seen = vec![false; total];
    let mut partner = vec![usize::MAX; x_len + y_len];
    for e in (0..x_len).chain(n0..n0 + y_len) {
        if seen[e] {
            continue;
        }
        seen[e] = true;
        let mut cur = d.partner[e];
        while is_internal(cur) {
            seen[cur] = true;
            let j = pair(cur);
            seen[j] = true;
            cur = d.partner[j];
        }
        seen[cur] = true;
        partner[new_pos(e)] = new_pos(cur);
        partner[new_pos(cur)] = new_pos(e);
    }
    let mut loops = 0;
    for k in 0..total {
        if seen[k] {
            continue;
        }
        loops += 1;
        let mut cur = k;
        loop {
            seen[cur] = true;
            let j = pair(cur);
            seen[j] = true;
            cur = d.partner[j];
            if seen[cur] {
                break;
            }
        }
    }
    let source = Word::new(d.source.letters[..x_len].to_vec());
    let target = Word::new(d.target.letters[..y_len].to_vec());
    (Diagram { source, target, partner }, loops)
}

/// Bends every source strand of `d: w → w2` up across the left, giving `1 → dual(w)·w2`.
pub fn bend_diagram(d: &Diagram) -> Diagram {
    let n = d.source.len();
    let m = n + d.target.len();
    let map = |p: usize| if p < n { n - 1 - p } else { p };
    let mut partner = vec![0; m];
    for p in 0..m {
        partner[map(p)] = map(d.partner[p]);
    }
    Diagram { source: Word::empty(), target: d.source.dual().concat(&d.target), partner }
}

/// Inverse of [`bend_diagram`] for a name `1 → dual(w)·w2`.
pub fn unbend_diagram(name: &Diagram, w: &Word) -> Result<Diagram> {
    let n = w.len();
    let dw = w.dual();
    if !name.source.is_empty() || name.target.len() < n || name.target.letters[..n] != dw.letters[..] {
        return Err(Error::WordMismatch {
            expected: format!("1 -> {}...", dw),
            found: format!("{} -> {}", name.source, name.target),
        });
    }
    let target = Word::new(name.target.letters[n..].to_vec());
    let map = |p: usize| if p < n { n - 1 - p } else { p };
    let mut partner = vec![0; name.partner.len()];
    for p in 0..partner.len() {
        partner[map(p)] = map(name.partner[p]);
    }
    Ok(Diagram { source: w.clone(), target, partner })
}

/// The diagram basis of `Hom(w, w2)` with a fixed ranking.
///
/// Every diagram is a bijection from the `A` endpoints (source ups and
/// target downs) to the `B` endpoints (source downs and target ups); the
/// rank of a diagram is the lexicographic rank of that bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    source: Word,
    target: Word,
    a: Vec<usize>,
    b: Vec<usize>,
    dim: usize,
}

impl HomSpace {
    pub fn new(source: &Word, target: &Word) -> Self {
        let n0 = source.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, l) in source.letters.iter().enumerate() {
            if *l == Letter::Up {
                a.push(i)
            } else {
                b.push(i)
            }
        }
        for (j, l) in target.letters.iter().enumerate() {
            if *l == Letter::Down {
                a.push(n0 + j)
            } else {
                b.push(n0 + j)
            }
        }
        let dim = if a.len() == b.len() { (1..=a.len()).product() } else { 0 };
        HomSpace { source: source.clone(), target: target.clone(), a, b, dim }
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagram(&self, k: usize) -> Diagram {
        assert!(k < self.dim, "diagram index out of range");
        let n = self.a.len();
        let mut avail: Vec<usize> = (0..n).collect();
        let mut rest = k;
        let mut fact: usize = (1..n.max(1)).product();
        let mut partner = vec![0; self.source.len() + self.target.len()];
        for i in 0..n {
            let idx = if n - i > 1 { rest / fact } else { 0 };
            if n - i > 1 {
                rest %= fact;
                fact /= n - i - 1;
            }
            let bj = self.b[avail.remove(idx)];
            partner[self.a[i]] = bj;
            partner[bj] = self.a[i];
        }
        Diagram { source: self.source.clone(), target: self.target.clone(), partner }
    }

    pub fn index(&self, d: &Diagram) -> usize {
        debug_assert!(d.source == self.source && d.target == self.target);
        let n = self.a.len();
        let pos_in_b = |p: usize| self.b.iter().position(|&x| x == p).expect("not a walled-Brauer diagram");
        let pi: Vec<usize> = self.a.iter().map(|&ai| pos_in_b(d.partner[ai])).collect();
        let mut rank = 0;
        for i in 0..n {
            let smaller = pi[i + 1..].iter().filter(|&&x| x < pi[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn diagrams(&self) -> impl Iterator<Item = Diagram> + '_ {
        (0..self.dim).map(move |k| self.diagram(k))
    }
}

/// All diagrams `w → w2` in canonical order.
pub fn enumerate_diagrams(w: &Word, w2: &Word) -> Vec<Diagram> {
    HomSpace::new(w, w2).diagrams().collect()
}

/// A linear combination of diagrams with a common source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WBMorphism {
    source: Word,
    target: Word,
    param: LoopParam,
    terms: BTreeMap<Diagram, Scalar>,
}

impl WBMorphism {
    pub fn zero(source: &Word, target: &Word, param: &LoopParam) -> Self {
        WBMorphism { source: source.clone(), target: target.clone(), param: param.clone(), terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: Diagram, param: &LoopParam) -> Self {
        let mut m = WBMorphism::zero(&d.source, &d.target, param);
        m.terms.insert(d, param.one());
        m
    }

    pub fn identity(w: &Word, param: &LoopParam) -> Self {
        WBMorphism::from_diagram(Diagram::identity(w), param)
    }

    pub fn from_terms(
        source: &Word,
        target: &Word,
        param: &LoopParam,
        terms: impl IntoIterator<Item = (Diagram, Scalar)>,
    ) -> Result<Self> {
        let mut m = WBMorphism::zero(source, target, param);
        for (d, c) in terms {
            if d.source != *source || d.target != *target {
                return Err(Error::WordMismatch {
                    expected: format!("{source} -> {target}"),
                    found: format!("{} -> {}", d.source, d.target),
                });
            }
            if !param.admits(&c) {
                return Err(Error::MixedScalars(param.to_string(), c.to_string()));
            }
            m.add_term(d, c);
        }
        Ok(m)
    }

    /// Specialised morphism from coordinates in the basis of `space`.
    pub fn from_vector(space: &HomSpace, alpha: &Rational, v: &[Rational]) -> Self {
        let param = LoopParam::At(alpha.clone());
        let mut m = WBMorphism::zero(&space.source, &space.target, &param);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m.terms.insert(space.diagram(k), Scalar::Specialized(c.clone()));
            }
        }
        m
    }

    /// Coordinates in the basis of `space`; generic coefficients are evaluated at `alpha`.
    pub fn to_vector(&self, space: &HomSpace, alpha: &Rational) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); space.dim()];
        for (d, c) in &self.terms {
            v[space.index(d)] = c.specialize(alpha);
        }
        v
    }

    fn add_term(&mut self, d: Diagram, c: Scalar) {
        match self.terms.entry(d) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn param(&self) -> &LoopParam {
        &self.param
    }

    pub fn terms(&self) -> &BTreeMap<Diagram, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &Diagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(|| self.param.zero())
    }

    fn check_param(&self, other: &WBMorphism) -> Result<()> {
        if self.param != other.param {
            return Err(Error::MixedScalars(self.param.to_string(), other.param.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &WBMorphism) -> Result<WBMorphism> {
        self.check_param(other)?;
        if self.source != other.source || self.target != other.target {
            return Err(Error::WordMismatch {
                expected: format!("{} -> {}", self.source, self.target),
                found: format!("{} -> {}", other.source, other.target),
            });
        }
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &WBMorphism) -> Result<WBMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WBMorphism {
        self.scale_rational(&-Rational::one())
    }

    pub fn scale_rational(&self, k: &Rational) -> WBMorphism {
        let mut out = WBMorphism::zero(&self.source, &self.target, &self.param);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(d, c)| (d.clone(), c.scale(k))).collect();
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Result<WBMorphism> {
        if !self.param.admits(k) {
            return Err(Error::MixedScalars(self.param.to_string(), k.to_string()));
        }
        let mut out = WBMorphism::zero(&self.source, &self.target, &self.param);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * k);
        }
        Ok(out)
    }

    pub fn compose(&self, f: &WBMorphism) -> Result<WBMorphism> {
        compose(self, f)
    }

    pub fn tensor(&self, g: &WBMorphism) -> Result<WBMorphism> {
        tensor(self, g)
    }

    pub fn trace(&self) -> Result<Scalar> {
        trace(self)
    }

    /// Applies `op` to every diagram and collects with coefficients.
    fn map_diagrams(&self, source: Word, target: Word, op: impl Fn(&Diagram) -> Diagram) -> WBMorphism {
        let mut out = WBMorphism::zero(&source, &target, &self.param);
        for (d, c) in &self.terms {
            out.add_term(op(d), c.clone());
        }
        out
    }
}

pub fn compose(g: &WBMorphism, f: &WBMorphism) -> Result<WBMorphism> {
    g.check_param(f)?;
    if g.source != f.target {
        return Err(Error::WordMismatch { expected: g.source.to_string(), found: f.target.to_string() });
    }
    let mut out = WBMorphism::zero(&f.source, &g.target, &f.param);
    for (dg, cg) in &g.terms {
        for (df, cf) in &f.terms {
            let (d, loops) = compose_diagrams(dg, df);
            let c = &(cg * cf) * &f.param.loops(loops);
            out.add_term(d, c);
        }
    }
    Ok(out)
}

pub fn tensor(f: &WBMorphism, g: &WBMorphism) -> Result<WBMorphism> {
    f.check_param(g)?;
    let mut out = WBMorphism::zero(&f.source.concat(&g.source), &f.target.concat(&g.target), &f.param);
    for (df, cf) in &f.terms {
        for (dg, cg) in &g.terms {
            out.add_term(tensor_diagrams(df, dg), cf * cg);
        }
    }
    Ok(out)
}

/// Closure trace: each diagram contributes `t^c` for its `c` closed loops.
pub fn trace(f: &WBMorphism) -> Result<Scalar> {
    if f.source != f.target {
        return Err(Error::NotEndomorphism { source_word: f.source.to_string(), target_word: f.target.to_string() });
    }
    let mut acc = f.param.zero();
    for (d, c) in &f.terms {
        acc = &acc + &(c * &f.param.loops(d.closure_loops()?));
    }
    Ok(acc)
}

/// The name `1 → dual(w)·w2` of `f: w → w2`.
pub fn adjoint_name(f: &WBMorphism) -> WBMorphism {
    f.map_diagrams(Word::empty(), f.source.dual().concat(&f.target), bend_diagram)
}

/// Recovers `f: w → w2` from its name.
pub fn unbend(name: &WBMorphism, w: &Word) -> Result<WBMorphism> {
    let n = w.len();
    if !name.source.is_empty() || name.target.len() < n || name.target.letters[..n] != w.dual().letters[..] {
        return Err(Error::WordMismatch {
            expected: format!("1 -> {}...", w.dual()),
            found: format!("{} -> {}", name.source, name.target),
        });
    }
    let target = Word::new(name.target.letters[n..].to_vec());
    let mut out = WBMorphism::zero(w, &target, &name.param);
    for (d, c) in &name.terms {
        out.add_term(unbend_diagram(d, w)?, c.clone());
    }
    Ok(out)
}

/// Partial trace over the trailing factor `p` of `f: x·p → y·p`.
pub fn partial_trace(f: &WBMorphism, x: &Word, y: &Word) -> Result<WBMorphism> {
    let ok = f.source.len() >= x.len()
        && f.target.len() >= y.len()
        && f.source.letters[..x.len()] == x.letters[..]
        && f.target.letters[..y.len()] == y.letters[..]
        && f.source.letters[x.len()..] == f.target.letters[y.len()..];
    if !ok {
        return Err(Error::WordMismatch {
            expected: format!("{x}·p -> {y}·p"),
            found: format!("{} -> {}", f.source, f.target),
        });
    }
    let mut out = WBMorphism::zero(x, y, &f.param);
    for (d, c) in &f.terms {
        let (r, loops) = partial_trace_diagram(d, x.len(), y.len());
        out.add_term(r, c * &f.param.loops(loops));
    }
    Ok(out)
}

/// The action of `sigma ∈ S_r` on `L^⊗r`.
pub fn embed_perm(sigma: &Permutation, r: usize, param: &LoopParam) -> Result<WBMorphism> {
    if sigma.degree() != r {
        return Err(Error::LengthMismatch { needed: r, got: sigma.degree() });
    }
    Ok(WBMorphism::from_diagram(Diagram::permutation(&Word::ups(r), sigma), param))
}

/// Linear extension of `embed_perm` to the group algebra.
pub fn embed_group_elem(x: &GroupAlgElem, param: &LoopParam) -> WBMorphism {
    let w = Word::ups(x.degree());
    let mut out = WBMorphism::zero(&w, &w, param);
    for (p, c) in x.terms() {
        out.add_term(Diagram::permutation(&w, p), param.from_rational(c.clone()));
    }
    out
}

/// `Σ_σ x(σ) Π_{cycles c of σ} power_traces[|c| - 1]`.
pub fn twisted_power_trace(power_traces: &[Rational], x: &GroupAlgElem) -> Result<Rational> {
    let polys: Vec<Poly> = power_traces.iter().map(|r| Poly::constant(r.clone())).collect();
    Ok(twisted_power_trace_poly(&polys, x)?.coeff(0))
}

pub fn twisted_power_trace_poly(power_traces: &[Poly], x: &GroupAlgElem) -> Result<Poly> {
    let r = x.degree();
    if power_traces.len() < r {
        return Err(Error::LengthMismatch { needed: r, got: power_traces.len() });
    }
    let mut acc = Poly::zero();
    for (sigma, c) in x.terms() {
        let mut term = Poly::constant(c.clone());
        for cycle in sigma.cycles() {
            term = &term * &power_traces[cycle.len() - 1];
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.edges().serialize(s)
    }
}

impl Serialize for WBMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<(usize, usize)>, String)> =
            self.terms.iter().map(|(d, c)| (d.edges(), c.to_string())).collect();
        let mut st = s.serialize_struct("WBMorphism", 4)?;
        st.serialize_field("source", &self.source.to_string())?;
        st.serialize_field("target", &self.target.to_string())?;
        st.serialize_field("param", &self.param.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl fmt::Display for WBMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("({c})*{:?}", d.edges())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
