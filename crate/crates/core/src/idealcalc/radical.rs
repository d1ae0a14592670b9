//! ⊗-nilpotence, quasi-invertibility and the radical report.

use serde::Serialize;
use serde_json::{json, Value};

use super::chain::{chain_tag, functor_kernel_ideal};
use super::report::{Report, Verdict};
use super::{tr_star, CenterIdeal, IdealRef, IdealSpan, ProbeWindow, TensorPrimeTag};
use crate::error::{Error, Result};
use crate::scalars::{int, Scalar};
use crate::wbcat::{Diagram, HomSpace, WBMorphism, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum NilVerdict {
    /// `f^{⊗power}` lies in the ideal.
    Yes { power: usize },
    /// No power up to `max_power` lies in the ideal.
    Unknown { max_power: usize },
}

/// The least `n ≤ max_power` with `f^{⊗n} ∈ I`. Never claims non-membership.
pub fn nilpotent_member(f: &WBMorphism, ideal: IdealRef<'_>, max_power: usize) -> Result<NilVerdict> {
    if max_power == 0 {
        return Err(Error::Invalid("max_power must be at least 1".into()));
    }
    let mut power = f.clone();
    for n in 1..=max_power {
        if n > 1 {
            power = power.tensor(f)?;
        }
        if ideal.contains(&power)? {
            return Ok(NilVerdict::Yes { power: n });
        }
    }
    Ok(NilVerdict::Unknown { max_power })
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiVerdict {
    /// `g ∘ (f ⊗ 1_C) ∘ h = 1_1`.
    Yes {
        object: Word,
        g: WBMorphism,
        h: WBMorphism,
    },
    /// `f = 0`, which never factors the identity of the unit.
    No,
    Unknown,
}

impl Serialize for QuasiVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = match self {
            QuasiVerdict::Yes { object, g, h } => {
                json!({ "verdict": "yes", "object": object.to_string(), "g": g, "h": h })
            }
            QuasiVerdict::No => json!({ "verdict": "no" }),
            QuasiVerdict::Unknown => json!({ "verdict": "unknown" }),
        };
        v.serialize(s)
    }
}

fn invert(s: &Scalar) -> Option<Scalar> {
    match s {
        Scalar::Specialized(r) if !num_traits::Zero::is_zero(r) => {
            Some(Scalar::Specialized(num_traits::Inv::inv(r.clone())))
        }
        Scalar::Generic(p) if p.degree() == Some(0) => {
            Some(Scalar::Generic(crate::scalars::Poly::constant(num_traits::Inv::inv(p.coeff(0)))))
        }
        _ => None,
    }
}

/// Searches window objects `C` and diagrams `h: 1 → A ⊗ C`, `g: B ⊗ C → 1`
/// for a factorisation of `1_1` through `f ⊗ 1_C`.
pub fn quasi_invertible(f: &WBMorphism, window: &ProbeWindow) -> Result<QuasiVerdict> {
    if f.is_zero() {
        return Ok(QuasiVerdict::No);
    }
    let param = f.param().clone();
    let unit = Word::empty();
    let id1 = WBMorphism::identity(&unit, &param);
    let empty = Diagram::identity(&unit);
    for c in window.objects() {
        let (a, b) = (f.source().concat(c), f.target().concat(c));
        if a.balance() != 0 {
            continue;
        }
        super::check_diagram_budget(&unit, &a)?;
        let fc = f.tensor(&WBMorphism::identity(c, &param))?;
        for h in HomSpace::new(&unit, &a).diagrams() {
            let h = WBMorphism::from_diagram(h, &param);
            let v = fc.compose(&h)?;
            if v.is_zero() {
                continue;
            }
            for g in HomSpace::new(&b, &unit).diagrams() {
                let g = WBMorphism::from_diagram(g, &param);
                let value = g.compose(&v)?.coeff(&empty);
                if let Some(inv) = invert(&value) {
                    let g = g.scale(&inv)?;
                    if g.compose(&fc)?.compose(&h)? != id1 {
                        return Err(Error::Verification("quasi-inverse certificate does not compose to 1_1".into()));
                    }
                    return Ok(QuasiVerdict::Yes { object: c.clone(), g, h });
                }
            }
        }
    }
    Ok(QuasiVerdict::Unknown)
}

/// `tr*(0)` next to the intersection of the computed chain primes and the
/// ⊗-nilpotents found, at `t = n`.
#[derive(Clone, Debug)]
pub struct RadicalReport {
    pub n: i64,
    pub window: ProbeWindow,
    pub trace_radical: IdealSpan,
    pub prime_intersection: IdealSpan,
    pub primes: Vec<TensorPrimeTag>,
    pub nilpotent_checks: Vec<(WBMorphism, NilVerdict)>,
    pub max_power: usize,
}

/// Compares `N = tr*(0)`, the intersection of `M(0), …, M(max_r)` and the
/// ⊗-nilpotent elements of `ℒ_Q(n)` among the basis vectors of `N`.
pub fn radical_report(n: i64, max_r: usize, max_power: usize, window: &ProbeWindow) -> Result<RadicalReport> {
    let alpha = int(n);
    let trace_radical = tr_star(CenterIdeal::Zero, window, &alpha);
    let mut primes = Vec::new();
    let mut prime_intersection = trace_radical.clone();
    for r in 0..=max_r {
        let tag = chain_tag(n, r);
        let span = match &tag {
            TensorPrimeTag::FunctorKernel { p, q } => functor_kernel_ideal(*p, *q, window)?,
            _ => trace_radical.clone(),
        };
        prime_intersection = prime_intersection.intersect(&span)?;
        primes.push(tag);
    }
    let mut nilpotent_checks = Vec::new();
    for (a, b) in window.balanced_pairs() {
        for f in trace_radical.basis_morphisms(&a, &b)? {
            let verdict = nilpotent_member(&f, IdealRef::Zero, max_power)?;
            nilpotent_checks.push((f, verdict));
        }
    }
    Ok(RadicalReport {
        n,
        window: window.clone(),
        trace_radical,
        prime_intersection,
        primes,
        nilpotent_checks,
        max_power,
    })
}

impl RadicalReport {
    pub fn nilpotents_found(&self) -> usize {
        self.nilpotent_checks.iter().filter(|(_, v)| matches!(v, NilVerdict::Yes { .. })).count()
    }

    /// The intersection of the known primes agrees with the nilpotents found
    /// only when both are zero on the window; anything else stays unknown.
    pub fn verdict(&self) -> Verdict {
        if self.prime_intersection.total_dim() == 0 && self.nilpotents_found() == 0 {
            Verdict::Verified
        } else {
            Verdict::Unknown
        }
    }

    pub fn to_report(&self) -> Report {
        let witnesses: Vec<Value> = self
            .nilpotent_checks
            .iter()
            .take(8)
            .map(|(f, v)| json!({ "element": f, "in_trace_radical": true, "nilpotence": v }))
            .collect();
        Report {
            statement: format!(
                "in L_Q({}), the intersection of the computed primes equals the tensor-nilpotent elements",
                self.n
            ),
            window: serde_json::to_value(&self.window).expect("window serialises"),
            verdict: self.verdict(),
            witnesses,
            budget: json!({ "max_power": self.max_power, "primes": self.primes.len() }),
            details: json!({
                "n": self.n,
                "trace_radical_dim": self.trace_radical.total_dim(),
                "prime_intersection_dim": self.prime_intersection.total_dim(),
                "primes": self.primes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "nilpotent_candidates": self.nilpotent_checks.len(),
                "nilpotents_found": self.nilpotents_found(),
                "open_questions": [
                    "radical definition: elements with some tensor power in the ideal are used; the largest nil ideal may differ",
                    "whether sqrt(0) = N on a finite window is recorded, not asserted",
                ],
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, LoopParam, Poly};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn at(k: i64) -> LoopParam {
        LoopParam::At(int(k))
    }

    #[test]
    fn members_are_nilpotent_at_power_one() {
        let window = ProbeWindow::words_up_to(2);
        let span = tr_star(CenterIdeal::Zero, &window, &int(1));
        let f = span.basis_morphisms(&w("uu"), &w("uu")).unwrap().remove(0);
        assert_eq!(nilpotent_member(&f, IdealRef::Span(&span), 3).unwrap(), NilVerdict::Yes { power: 1 });
        let zero = WBMorphism::zero(&w("u"), &w("u"), &at(1));
        assert_eq!(nilpotent_member(&zero, IdealRef::Zero, 1).unwrap(), NilVerdict::Yes { power: 1 });
    }

    #[test]
    fn one_minus_swap_is_not_found_nilpotent() {
        let p = at(1);
        let swap = WBMorphism::from_diagram(Diagram::symmetry(&w("u"), &w("u")), &p);
        let f = WBMorphism::identity(&w("uu"), &p).sub(&swap).unwrap();
        assert_eq!(nilpotent_member(&f, IdealRef::Zero, 3).unwrap(), NilVerdict::Unknown { max_power: 3 });
        let radical = TensorPrimeTag::TraceRadical { alpha: int(1) };
        assert!(radical.contains(&f).unwrap());
        // f ⊗ f is nonzero and pairs nontrivially with nothing: it stays in N
        assert!(radical.contains(&f.tensor(&f).unwrap()).unwrap());
    }

    #[test]
    fn span_membership_beyond_the_window_is_an_error() {
        let window = ProbeWindow::words_up_to(2);
        let span = IdealSpan::zero(&window, &int(1));
        let f = WBMorphism::identity(&w("uu"), &at(1));
        assert!(matches!(nilpotent_member(&f, IdealRef::Span(&span), 2), Err(Error::OutsideWindow(_))));
    }

    #[test]
    fn twice_the_unit_is_quasi_invertible() {
        let f = WBMorphism::identity(&Word::empty(), &at(1)).scale_rational(&int(2));
        match quasi_invertible(&f, &ProbeWindow::words_up_to(1)).unwrap() {
            QuasiVerdict::Yes { object, g, h } => {
                assert!(object.is_empty());
                assert_eq!(g, WBMorphism::identity(&Word::empty(), &at(1)).scale_rational(&rat(1, 2)));
                assert_eq!(h, WBMorphism::identity(&Word::empty(), &at(1)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_is_never_quasi_invertible() {
        let f = WBMorphism::zero(&w("u"), &w("u"), &at(1));
        assert_eq!(quasi_invertible(&f, &ProbeWindow::words_up_to(2)).unwrap(), QuasiVerdict::No);
    }

    #[test]
    fn cap_at_two() {
        let cap = WBMorphism::from_diagram(Diagram::evaluation(&w("u")), &at(2));
        match quasi_invertible(&cap, &ProbeWindow::words_up_to(2)).unwrap() {
            QuasiVerdict::Yes { object, g, h } => {
                assert!(object.is_empty());
                assert_eq!(h, WBMorphism::from_diagram(Diagram::coevaluation(&w("u")), &at(2)));
                assert_eq!(g.coeff(&Diagram::identity(&Word::empty())), Scalar::Specialized(rat(1, 2)));
            }
            other => panic!("{other:?}"),
        }
        // at t = 0 the cap closes to zero but 1_L is still not quasi-invertible
        let id_l = WBMorphism::identity(&w("u"), &at(0));
        assert_eq!(quasi_invertible(&id_l, &ProbeWindow::words_up_to(2)).unwrap(), QuasiVerdict::Unknown);
    }

    #[test]
    fn generic_quasi_inverse_needs_a_unit_value() {
        let g = LoopParam::Generic;
        let two = WBMorphism::identity(&Word::empty(), &g).scale(&Scalar::Generic(Poly::constant(int(2)))).unwrap();
        assert!(matches!(quasi_invertible(&two, &ProbeWindow::unit()).unwrap(), QuasiVerdict::Yes { .. }));
        let cap = WBMorphism::from_diagram(Diagram::evaluation(&w("u")), &g);
        assert_eq!(quasi_invertible(&cap, &ProbeWindow::words_up_to(2)).unwrap(), QuasiVerdict::Unknown);
    }

    #[test]
    fn radical_report_at_one() {
        let r = radical_report(1, 2, 2, &ProbeWindow::words_up_to(2)).unwrap();
        assert_eq!(r.nilpotents_found(), 0);
        assert!(r.trace_radical.total_dim() > 0);
        let json = r.to_report().to_json();
        assert!(json["details"]["open_questions"].is_array());
    }
}
