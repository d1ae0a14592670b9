//! Functor kernels, the chain of primes of `ℒ_Q(n)` and Schur vanishing.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::report::{Report, Verdict};
use super::{check_eval_budget, tr_star, CenterIdeal, IdealRef, IdealSpan, ProbeWindow, TensorPrimeTag};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::scalars::{int, LoopParam, Rational};
use crate::spectral::{check_closed_map, check_spectral_map, MapRule, Point, SpectralMap, SpectralSpaceDesc};
use crate::supereval::{kernel_basis, EVAL_BUDGET};
use crate::symgroup::{young_symmetrizer, Partition};
use crate::wbcat::{embed_group_elem, WBMorphism, Word};

/// The windowed kernel of `F(p|q)` at `t = p - q`.
pub fn functor_kernel_ideal(p: usize, q: usize, window: &ProbeWindow) -> Result<IdealSpan> {
    let alpha = int(p as i64 - q as i64);
    for (a, b) in window.balanced_pairs() {
        check_eval_budget(p, q, &a, &b)?;
    }
    IdealSpan::build(window, &alpha, |a, b| {
        if a.balance() != b.balance() {
            Ok(Subspace::zero(0))
        } else {
            kernel_basis(a, b, p, q)
        }
    })
}

/// The prime at position `r` of the chain for `ℒ_Q(n)`.
pub fn chain_tag(n: i64, r: usize) -> TensorPrimeTag {
    let m = n.unsigned_abs() as usize;
    match (n, r) {
        (0, 0) => TensorPrimeTag::TraceRadical { alpha: int(0) },
        (n, r) if n >= 0 => TensorPrimeTag::FunctorKernel { p: m + r, q: r },
        (_, r) => TensorPrimeTag::FunctorKernel { p: r, q: m + r },
    }
}

#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub r: usize,
    pub tag: TensorPrimeTag,
    pub span: IdealSpan,
}

/// Whether `M(r) ⊋ M(r + 1)` was witnessed inside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strictness {
    Witnessed(WBMorphism),
    Unknown,
}

/// A verified prefix of the spectrum of `ℒ_Q(n)`: the points `M(0), …,
/// M(max_r)` of the omega chain, with `π` to `Spec Q` and `σ_tr` back.
#[derive(Clone, Debug)]
pub struct ChainSpectrum {
    pub n: i64,
    pub window: ProbeWindow,
    pub levels: Vec<ChainLevel>,
    pub strictness: Vec<Strictness>,
    pub space: SpectralSpaceDesc,
    pub pi: SpectralMap,
    pub sigma_tr: SpectralMap,
}

/// Computes `M(r)` for `r ≤ max_r` on the window and checks the descending
/// inclusions, `M(0) = tr*(0)` and the maps. Failed checks are errors;
/// strictness without a window witness is reported as unknown.
pub fn chain_spectrum(n: i64, max_r: usize, window: &ProbeWindow) -> Result<ChainSpectrum> {
    let alpha = int(n);
    let n_ideal = tr_star(CenterIdeal::Zero, window, &alpha);
    let mut levels = Vec::with_capacity(max_r + 1);
    for r in 0..=max_r {
        let tag = chain_tag(n, r);
        let span = match &tag {
            TensorPrimeTag::TraceRadical { .. } => n_ideal.clone(),
            t => t.to_span(window)?,
        };
        levels.push(ChainLevel { r, tag, span });
    }
    if levels[0].span != n_ideal {
        return Err(Error::Verification(format!(
            "M(0) = {} differs from tr*(0) on {} pairs",
            levels[0].tag,
            levels[0].span.mismatches(&n_ideal).len()
        )));
    }
    let mut strictness = Vec::with_capacity(max_r);
    for pair in levels.windows(2) {
        let (hi, lo) = (&pair[0], &pair[1]);
        if !lo.span.is_subideal_of(&hi.span) {
            return Err(Error::Verification(format!("{} is not contained in {}", lo.tag, hi.tag)));
        }
        strictness.push(match hi.span.witness_outside(&lo.span) {
            Some(f) => Strictness::Witnessed(f),
            None => Strictness::Unknown,
        });
    }
    let space = SpectralSpaceDesc::omega_chain();
    let spec_q = SpectralSpaceDesc::point();
    let pi = SpectralMap::constant(&space, &spec_q, Point::Poset(0));
    let sigma_tr =
        SpectralMap { domain: spec_q.clone(), codomain: space.clone(), rule: MapRule::Table(vec![Point::Nat(0)]) };
    if !check_spectral_map(&pi)? || !check_spectral_map(&sigma_tr)? || !check_closed_map(&sigma_tr)? {
        return Err(Error::Verification("pi or sigma_tr fails the spectral-map check".into()));
    }
    if pi.apply(&sigma_tr.apply(&Point::Poset(0))?)? != Point::Poset(0) {
        return Err(Error::Verification("pi ∘ sigma_tr is not the identity".into()));
    }
    Ok(ChainSpectrum { n, window: window.clone(), levels, strictness, space, pi, sigma_tr })
}

impl ChainSpectrum {
    pub fn fully_witnessed(&self) -> bool {
        self.strictness.iter().all(|s| matches!(s, Strictness::Witnessed(_)))
    }

    pub fn to_report(&self) -> Report {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|l| {
                let dims: BTreeMap<String, usize> = l
                    .span
                    .spans()
                    .iter()
                    .filter(|(_, s)| s.ambient() > 0)
                    .map(|((a, b), s)| (format!("{a} -> {b}"), s.dim()))
                    .collect();
                json!({ "r": l.r, "ideal": l.tag.to_string(), "total_dim": l.span.total_dim(), "dims": dims })
            })
            .collect();
        let witnesses: Vec<Value> = self
            .strictness
            .iter()
            .enumerate()
            .map(|(r, s)| match s {
                Strictness::Witnessed(f) => json!({ "inclusion": format!("M({}) > M({})", r, r + 1), "witness": f }),
                Strictness::Unknown => json!({ "inclusion": format!("M({}) > M({})", r, r + 1), "witness": null }),
            })
            .collect();
        let pi_sigma = self.sigma_tr.apply(&Point::Poset(0)).and_then(|x| self.pi.apply(&x)).ok();
        Report {
            statement: format!(
                "Spec of L_Q({}) begins with the strict chain M(0) > ... > M({}) with M(0) = tr*(0), inside N u {{inf}} with the right order topology",
                self.n,
                self.levels.len() - 1
            ),
            window: serde_json::to_value(&self.window).expect("window serialises"),
            verdict: if self.fully_witnessed() { Verdict::Verified } else { Verdict::Unknown },
            witnesses,
            budget: json!({ "eval_budget": EVAL_BUDGET.to_string(), "max_r": self.levels.len() - 1 }),
            details: json!({
                "n": self.n,
                "levels": levels,
                "m0_equals_tr_star": true,
                "space": self.space.to_string(),
                "pi": "constant map to the point of Spec Q",
                "sigma_tr": "point of Spec Q -> 0 = M(0)",
                "pi_sigma_tr_identity": pi_sigma == Some(Point::Poset(0)),
            }),
        }
    }
}

/// Whether `S_λ(L)` vanishes modulo the ideal: `embed(c_λ) ∈ I` on `u^r`.
pub fn schur_vanishes(lambda: &Partition, ideal: IdealRef<'_>, alpha: &Rational) -> Result<bool> {
    let r = lambda.size();
    let word = Word::ups(r);
    if let IdealRef::Prime(TensorPrimeTag::FunctorKernel { p, q }) = ideal {
        check_eval_budget(*p, *q, &word, &word)?;
    }
    let f = embed_group_elem(&young_symmetrizer(lambda), &LoopParam::At(alpha.clone()));
    ideal.contains(&f)
}

/// The scalar by which `c_λ` acts on `1^{⊗r} = 1`: every permutation acts
/// trivially, so this is the sum of its coefficients.
pub fn schur_on_unit(lambda: &Partition) -> Rational {
    young_symmetrizer(lambda).terms().values().fold(Rational::zero(), |acc, c| acc + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wbcat::Diagram;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn one_minus_swap() -> WBMorphism {
        let p = LoopParam::At(int(1));
        let swap = WBMorphism::from_diagram(Diagram::symmetry(&w("u"), &w("u")), &p);
        WBMorphism::identity(&w("uu"), &p).sub(&swap).unwrap()
    }

    #[test]
    fn kernel_of_line_on_uu() {
        let span = functor_kernel_ideal(1, 0, &ProbeWindow::words_up_to(2)).unwrap();
        let k = span.span(&w("uu"), &w("uu")).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(span.contains(&one_minus_swap()).unwrap());
    }

    #[test]
    fn kernel_on_unit_window_is_zero() {
        for (p, q) in [(1, 0), (2, 1), (0, 2), (3, 3)] {
            let span = functor_kernel_ideal(p, q, &ProbeWindow::unit()).unwrap();
            assert_eq!(span.total_dim(), 0);
        }
    }

    #[test]
    fn kernel_budget_is_enforced() {
        assert!(matches!(functor_kernel_ideal(5, 4, &ProbeWindow::words_up_to(3)), Err(Error::Budget { .. })));
    }

    #[test]
    fn chain_at_one() {
        let window = ProbeWindow::words_up_to(2);
        let chain = chain_spectrum(1, 1, &window).unwrap();
        assert_eq!(chain.levels[1].tag, TensorPrimeTag::FunctorKernel { p: 2, q: 1 });
        assert_eq!(chain.strictness[0], Strictness::Witnessed(one_minus_swap()));
        assert!(chain.fully_witnessed());
        assert_eq!(chain.to_report().verdict, Verdict::Verified);
    }

    #[test]
    fn chain_at_zero_is_witnessed_by_identity_of_l() {
        let window = ProbeWindow::words_up_to(2);
        let chain = chain_spectrum(0, 1, &window).unwrap();
        let id_l = WBMorphism::identity(&w("u"), &LoopParam::At(int(0)));
        assert!(chain.levels[0].span.contains(&id_l).unwrap());
        assert!(!chain.levels[1].span.contains(&id_l).unwrap());
        assert_eq!(chain.strictness[0], Strictness::Witnessed(id_l));
    }

    #[test]
    fn chain_at_negative_n() {
        let chain = chain_spectrum(-1, 1, &ProbeWindow::words_up_to(2)).unwrap();
        assert_eq!(chain.levels[0].tag, TensorPrimeTag::FunctorKernel { p: 0, q: 1 });
        assert!(chain.fully_witnessed());
    }

    #[test]
    fn exterior_square_vanishing() {
        let lambda: Partition = "1,1".parse().unwrap();
        let line = TensorPrimeTag::FunctorKernel { p: 1, q: 0 };
        let super_space = TensorPrimeTag::FunctorKernel { p: 2, q: 1 };
        assert!(schur_vanishes(&lambda, IdealRef::Prime(&line), &int(1)).unwrap());
        assert!(!schur_vanishes(&lambda, IdealRef::Prime(&super_space), &int(1)).unwrap());
        assert!(schur_on_unit(&lambda).is_zero());
        assert!(!schur_on_unit(&"2".parse().unwrap()).is_zero());
    }

    #[test]
    fn computed_primes_lie_in_the_trace_radical() {
        let window = ProbeWindow::words_up_to(2);
        for (p, q) in [(1, 0), (2, 1), (1, 1), (2, 0), (0, 1)] {
            let alpha = int(p as i64 - q as i64);
            let prime = functor_kernel_ideal(p, q, &window).unwrap();
            assert!(prime.is_subideal_of(&tr_star(CenterIdeal::Zero, &window, &alpha)), "P({p}|{q})");
        }
    }
}
