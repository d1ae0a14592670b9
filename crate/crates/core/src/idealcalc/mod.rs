//! Windowed ⊗-ideal calculus for the walled-Brauer category at a fixed
//! loop value, plus the free-module backend over small rings.
//!
//! Every span is stored only on the Hom pairs of a [`ProbeWindow`]; the
//! reports produced here say "verified on window", never more.

mod chain;
pub mod freemod;
mod generate;
mod radical;
pub mod report;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::scalars::{fmt_rational, LoopParam, Rational};
use crate::supereval::{self, SuperSpace, EVAL_BUDGET};
use crate::wbcat::{compose_diagrams, HomSpace, WBMorphism, Word};

pub use chain::{
    chain_spectrum, chain_tag, functor_kernel_ideal, schur_on_unit, schur_vanishes, ChainLevel, ChainSpectrum,
    Strictness,
};
pub use generate::{closure_growth, generate_ideal, generate_ideal_rigid, minimal_generators};
pub use radical::{nilpotent_member, quasi_invertible, radical_report, NilVerdict, QuasiVerdict, RadicalReport};
pub use trace::{
    generic_kernel, gram_matrix, gram_matrix_generic, gram_report, tr_star, tr_star_member, CenterIdeal, GramReport,
};

/// Largest Hom dimension (`N!` diagrams) a single membership test may enumerate.
pub const DIAGRAM_BUDGET: u128 = 40_320;

/// A finite set of words, closed under duals and containing the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeWindow {
    objects: Vec<Word>,
}

impl ProbeWindow {
    pub fn new(objects: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut objects: Vec<Word> = objects.into_iter().collect();
        objects.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        objects.dedup();
        if !objects.iter().any(Word::is_empty) {
            return Err(Error::Invalid("a probe window must contain the unit object".into()));
        }
        for w in &objects {
            if objects.binary_search_by(|x| x.len().cmp(&w.len()).then_with(|| x.cmp(&w.dual()))).is_err() {
                return Err(Error::Invalid(format!("probe window is not closed under duals: {w}")));
            }
        }
        Ok(ProbeWindow { objects })
    }

    /// All words of length at most `n`.
    pub fn words_up_to(n: usize) -> Self {
        ProbeWindow::new(Word::all_up_to(n)).expect("all words of bounded length form a window")
    }

    /// The unit object alone.
    pub fn unit() -> Self {
        ProbeWindow::new([Word::empty()]).expect("unit window")
    }

    pub fn objects(&self) -> &[Word] {
        &self.objects
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.objects.contains(w)
    }

    pub fn max_len(&self) -> usize {
        self.objects.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Every ordered pair of window objects.
    pub fn pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::with_capacity(self.objects.len() * self.objects.len());
        for a in &self.objects {
            for b in &self.objects {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    /// Pairs with a nonzero Hom space.
    pub fn balanced_pairs(&self) -> Vec<(Word, Word)> {
        self.pairs().into_iter().filter(|(a, b)| a.balance() == b.balance()).collect()
    }

    fn check_pair(&self, a: &Word, b: &Word) -> Result<()> {
        for w in [a, b] {
            if !self.contains(w) {
                return Err(Error::OutsideWindow(w.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProbeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all = Word::all_up_to(self.max_len());
        if all.len() == self.objects.len() {
            write!(f, "words of length <= {}", self.max_len())
        } else {
            let names: Vec<String> = self.objects.iter().map(Word::to_string).collect();
            write!(f, "{{{}}}", names.join(", "))
        }
    }
}

impl Serialize for ProbeWindow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ProbeWindow", 3)?;
        st.serialize_field("description", &self.to_string())?;
        st.serialize_field("max_word_len", &self.max_len())?;
        st.serialize_field("objects", &self.objects.len())?;
        st.end()
    }
}

/// Windowed subspaces of the Hom spaces of `ℒ_Q` at `t = alpha`, in
/// diagram coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpan {
    alpha: Rational,
    window: ProbeWindow,
    spans: BTreeMap<(Word, Word), Subspace>,
}

impl IdealSpan {
    pub fn zero(window: &ProbeWindow, alpha: &Rational) -> Self {
        Self::build(window, alpha, |a, b| Ok(Subspace::zero(hom_dim(a, b)))).expect("infallible")
    }

    pub fn full(window: &ProbeWindow, alpha: &Rational) -> Self {
        Self::build(window, alpha, |a, b| Ok(Subspace::full(hom_dim(a, b)))).expect("infallible")
    }

    /// Builds a span pair by pair, in parallel; pair order is fixed by the window.
    pub fn build<F>(window: &ProbeWindow, alpha: &Rational, f: F) -> Result<Self>
    where
        F: Fn(&Word, &Word) -> Result<Subspace> + Sync,
    {
        use rayon::prelude::*;
        let pairs = window.pairs();
        let spaces: Vec<Subspace> = pairs.par_iter().map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(IdealSpan { alpha: alpha.clone(), window: window.clone(), spans: pairs.into_iter().zip(spaces).collect() })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn window(&self) -> &ProbeWindow {
        &self.window
    }

    pub fn spans(&self) -> &BTreeMap<(Word, Word), Subspace> {
        &self.spans
    }

    pub fn span(&self, a: &Word, b: &Word) -> Result<&Subspace> {
        self.window.check_pair(a, b)?;
        Ok(&self.spans[&(a.clone(), b.clone())])
    }

    pub(crate) fn span_mut(&mut self, a: &Word, b: &Word) -> &mut Subspace {
        self.spans.get_mut(&(a.clone(), b.clone())).expect("pair in window")
    }

    pub fn total_dim(&self) -> usize {
        self.spans.values().map(Subspace::dim).sum()
    }

    /// Basis vectors of the span at `(a, b)` as morphisms.
    pub fn basis_morphisms(&self, a: &Word, b: &Word) -> Result<Vec<WBMorphism>> {
        let space = HomSpace::new(a, b);
        Ok(self.span(a, b)?.basis().iter().map(|v| WBMorphism::from_vector(&space, &self.alpha, v)).collect())
    }

    pub fn contains(&self, f: &WBMorphism) -> Result<bool> {
        check_alpha(f, &self.alpha)?;
        let s = self.span(f.source(), f.target())?;
        if s.ambient() == 0 {
            return Ok(true);
        }
        Ok(s.contains(&f.to_vector(&HomSpace::new(f.source(), f.target()), &self.alpha)))
    }

    /// Pairs of the common window where the two spans differ.
    pub fn mismatches(&self, other: &IdealSpan) -> Vec<(Word, Word)> {
        self.spans.iter().filter_map(|(k, s)| other.spans.get(k).filter(|o| *o != s).map(|_| k.clone())).collect()
    }

    /// Inclusion on the common window.
    pub fn is_subideal_of(&self, other: &IdealSpan) -> bool {
        self.spans.iter().all(|(k, s)| other.spans.get(k).is_none_or(|o| s.is_subspace_of(o)))
    }

    /// A basis element of `self` lying outside `other`, smallest pair first.
    pub fn witness_outside(&self, other: &IdealSpan) -> Option<WBMorphism> {
        let mut keys: Vec<&(Word, Word)> = self.spans.keys().collect();
        keys.sort_by_key(|(a, b)| (a.len() + b.len(), a.len().abs_diff(b.len()), (*a).clone(), (*b).clone()));
        for k in keys {
            let (s, Some(o)) = (&self.spans[k], other.spans.get(k)) else { continue };
            let space = HomSpace::new(&k.0, &k.1);
            let mut candidates: Vec<Vec<Rational>> = s.basis().to_vec();
            candidates.sort_by_key(|v| v.iter().filter(|c| !c.is_zero()).count());
            if let Some(v) = candidates.into_iter().find(|v| !o.contains(v)) {
                return Some(WBMorphism::from_vector(&space, &self.alpha, &v));
            }
        }
        None
    }

    pub fn intersect(&self, other: &IdealSpan) -> Result<IdealSpan> {
        if self.window != other.window || self.alpha != other.alpha {
            return Err(Error::Invalid("intersection needs spans on the same window and loop value".into()));
        }
        Ok(IdealSpan {
            alpha: self.alpha.clone(),
            window: self.window.clone(),
            spans: self.spans.iter().map(|(k, s)| (k.clone(), s.intersect(&other.spans[k]))).collect(),
        })
    }

    /// The same ideal seen on a smaller window.
    pub fn restrict(&self, window: &ProbeWindow) -> Result<IdealSpan> {
        let mut spans = BTreeMap::new();
        for k in window.pairs() {
            let s = self.span(&k.0, &k.1)?.clone();
            spans.insert(k, s);
        }
        Ok(IdealSpan { alpha: self.alpha.clone(), window: window.clone(), spans })
    }
}

impl Serialize for IdealSpan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PairEntry<'a> {
            source: String,
            target: String,
            hom_dim: usize,
            dim: usize,
            basis: &'a Subspace,
        }
        let pairs: Vec<PairEntry> = self
            .spans
            .iter()
            .filter(|(_, sp)| sp.ambient() > 0)
            .map(|((a, b), sp)| PairEntry {
                source: a.to_string(),
                target: b.to_string(),
                hom_dim: sp.ambient(),
                dim: sp.dim(),
                basis: sp,
            })
            .collect();
        let mut st = s.serialize_struct("IdealSpan", 4)?;
        st.serialize_field("t", &fmt_rational(&self.alpha))?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("total_dim", &self.total_dim())?;
        st.serialize_field("pairs", &pairs)?;
        st.end()
    }
}

/// A prime ⊗-ideal given by a rule that decides membership on any Hom pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorPrimeTag {
    /// `tr*(0)` of `ℒ_Q` at `t = alpha`.
    TraceRadical { alpha: Rational },
    /// The kernel `ℙ(p|q)` of the functor to super vector spaces.
    FunctorKernel { p: usize, q: usize },
    /// `I(P)` for a prime of a small ring, on free modules.
    RingPrime(freemod::RingPrime),
}

impl TensorPrimeTag {
    /// The loop value at which the tag lives in `ℒ_Q`.
    pub fn alpha(&self) -> Option<Rational> {
        match self {
            TensorPrimeTag::TraceRadical { alpha } => Some(alpha.clone()),
            TensorPrimeTag::FunctorKernel { p, q } => Some(SuperSpace::new(*p, *q).sdim()),
            TensorPrimeTag::RingPrime(_) => None,
        }
    }

    pub fn contains(&self, f: &WBMorphism) -> Result<bool> {
        match self {
            TensorPrimeTag::TraceRadical { alpha } => {
                check_alpha(f, alpha)?;
                tr_star_member(f, alpha)
            }
            TensorPrimeTag::FunctorKernel { p, q } => {
                let alpha = SuperSpace::new(*p, *q).sdim();
                check_alpha(f, &alpha)?;
                Ok(supereval::eval_morphism(&supereval::specialize(f, &alpha), *p, *q)?.is_zero())
            }
            TensorPrimeTag::RingPrime(_) => {
                Err(Error::Invalid("a ring prime lives on free modules, not on walled-Brauer morphisms".into()))
            }
        }
    }

    /// The tag restricted to a window as an explicit span.
    pub fn to_span(&self, window: &ProbeWindow) -> Result<IdealSpan> {
        match self {
            TensorPrimeTag::TraceRadical { alpha } => Ok(tr_star(CenterIdeal::Zero, window, alpha)),
            TensorPrimeTag::FunctorKernel { p, q } => functor_kernel_ideal(*p, *q, window),
            TensorPrimeTag::RingPrime(_) => Err(Error::Invalid("a ring prime has no walled-Brauer span".into())),
        }
    }
}

impl fmt::Display for TensorPrimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorPrimeTag::TraceRadical { alpha } => write!(f, "tr*(0) at t = {}", fmt_rational(alpha)),
            TensorPrimeTag::FunctorKernel { p, q } => write!(f, "P({p}|{q})"),
            TensorPrimeTag::RingPrime(p) => write!(f, "I({p})"),
        }
    }
}

/// An ideal against which membership can be asked.
#[derive(Clone, Copy, Debug)]
pub enum IdealRef<'a> {
    /// The zero ideal of `ℒ_Q`.
    Zero,
    Span(&'a IdealSpan),
    Prime(&'a TensorPrimeTag),
}

impl IdealRef<'_> {
    pub fn contains(&self, f: &WBMorphism) -> Result<bool> {
        match self {
            IdealRef::Zero => Ok(f.is_zero()),
            IdealRef::Span(s) => s.contains(f),
            IdealRef::Prime(t) => t.contains(f),
        }
    }
}

impl fmt::Display for IdealRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealRef::Zero => write!(f, "0"),
            IdealRef::Span(s) => write!(f, "windowed span ({}) at t = {}", s.window, fmt_rational(&s.alpha)),
            IdealRef::Prime(t) => write!(f, "{t}"),
        }
    }
}

/// `ideal_member`: exact membership in a stored span.
pub fn ideal_member(f: &WBMorphism, ideal: &IdealSpan) -> Result<bool> {
    ideal.contains(f)
}

pub(crate) fn hom_dim(a: &Word, b: &Word) -> usize {
    if a.balance() != b.balance() {
        0
    } else {
        HomSpace::new(a, b).dim()
    }
}

/// Number of diagrams between `a` and `b`, without overflow.
pub(crate) fn diagram_count(a: &Word, b: &Word) -> u128 {
    if a.balance() != b.balance() {
        return 0;
    }
    let n = (a.len() + b.len()) / 2;
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

pub fn check_diagram_budget(a: &Word, b: &Word) -> Result<()> {
    let needed = diagram_count(a, b);
    if needed > DIAGRAM_BUDGET {
        return Err(Error::Budget { needed, budget: DIAGRAM_BUDGET });
    }
    Ok(())
}

pub(crate) fn check_eval_budget(p: usize, q: usize, a: &Word, b: &Word) -> Result<()> {
    supereval::check_budget(SuperSpace::new(p, q), a, b).map_err(|e| match e {
        Error::Budget { needed, .. } => Error::Budget { needed, budget: EVAL_BUDGET },
        other => other,
    })
}

/// Rejects morphisms specialised at a different loop value.
pub(crate) fn check_alpha(f: &WBMorphism, alpha: &Rational) -> Result<()> {
    match f.param() {
        LoopParam::At(b) if b != alpha => {
            Err(Error::MixedScalars(format!("t = {}", fmt_rational(b)), format!("t = {}", fmt_rational(alpha))))
        }
        _ => Ok(()),
    }
}

/// `g ∘ f` on diagram coordinates, as a sparse accumulation into `out`.
pub(crate) fn accumulate_composite(
    g: &[(crate::wbcat::Diagram, Rational)],
    f: &[(crate::wbcat::Diagram, Rational)],
    alpha: &Rational,
    out: &mut BTreeMap<crate::wbcat::Diagram, Rational>,
) {
    for (dg, cg) in g {
        for (df, cf) in f {
            let (d, loops) = compose_diagrams(dg, df);
            let c = cg * cf * num_traits::pow(alpha.clone(), loops);
            if c.is_zero() {
                continue;
            }
            let e = out.entry(d).or_insert_with(Rational::zero);
            *e += c;
        }
    }
}

/// Specialised terms of `f` as `(diagram, coefficient)` pairs.
pub(crate) fn specialized_terms(f: &WBMorphism, alpha: &Rational) -> Vec<(crate::wbcat::Diagram, Rational)> {
    f.terms().iter().map(|(d, c)| (d.clone(), c.specialize(alpha))).filter(|(_, c)| !c.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn window_requires_unit_and_duals() {
        assert!(ProbeWindow::new(["u".parse().unwrap()]).is_err());
        assert!(ProbeWindow::new([Word::empty(), "u".parse().unwrap()]).is_err());
        let w = ProbeWindow::new([Word::empty(), "u".parse().unwrap(), "d".parse().unwrap()]).unwrap();
        assert_eq!(w.objects().len(), 3);
        assert_eq!(ProbeWindow::words_up_to(2).objects().len(), 7);
        assert_eq!(ProbeWindow::words_up_to(2).to_string(), "words of length <= 2");
    }

    #[test]
    fn membership_outside_window_is_an_error() {
        let window = ProbeWindow::words_up_to(1);
        let span = IdealSpan::full(&window, &int(1));
        let f = WBMorphism::identity(&"uu".parse().unwrap(), &LoopParam::At(int(1)));
        assert!(matches!(ideal_member(&f, &span), Err(Error::OutsideWindow(_))));
    }

    #[test]
    fn zero_morphism_is_always_a_member() {
        let window = ProbeWindow::words_up_to(2);
        let span = IdealSpan::zero(&window, &int(1));
        let uu: Word = "uu".parse().unwrap();
        assert!(ideal_member(&WBMorphism::zero(&uu, &uu, &LoopParam::At(int(1))), &span).unwrap());
        assert!(!ideal_member(&WBMorphism::identity(&uu, &LoopParam::At(int(1))), &span).unwrap());
    }

    #[test]
    fn wrong_loop_value_is_rejected() {
        let window = ProbeWindow::words_up_to(1);
        let span = IdealSpan::full(&window, &int(1));
        let f = WBMorphism::identity(&"u".parse().unwrap(), &LoopParam::At(int(2)));
        assert!(matches!(span.contains(&f), Err(Error::MixedScalars(..))));
    }
}
