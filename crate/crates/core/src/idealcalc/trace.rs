//! Trace-form ideals `tr*(I)` and Gram matrices.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_diagram_budget, specialized_terms, IdealSpan, ProbeWindow};
use crate::error::Result;
use crate::linalg::{nullspace, Subspace};
use crate::scalars::{fmt_rational, integer_roots, poly_matrix_det, IntegerRoots, Poly, Rational};
use crate::wbcat::{compose_diagrams, enumerate_diagrams, HomSpace, WBMorphism, Word};

/// An ideal of the centre `Q` of `ℒ_Q` at a rational loop value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterIdeal {
    Zero,
    Whole,
}

/// Loop counts of `tr(e ∘ d)`, rows indexed by `d ∈ Hom(a, b)` and columns
/// by `e ∈ Hom(b, a)`, both in canonical basis order.
fn loop_table(a: &Word, b: &Word) -> Vec<Vec<usize>> {
    let ds = enumerate_diagrams(a, b);
    let es = enumerate_diagrams(b, a);
    ds.par_iter()
        .map(|d| {
            es.iter()
                .map(|e| {
                    let (c, l1) = compose_diagrams(e, d);
                    l1 + c.closure_loops().expect("endomorphism of a")
                })
                .collect()
        })
        .collect()
}

/// `G[d][e] = tr(e ∘ d)` at `t = alpha`.
pub fn gram_matrix(a: &Word, b: &Word, alpha: &Rational) -> Vec<Vec<Rational>> {
    if a.balance() != b.balance() {
        return Vec::new();
    }
    loop_table(a, b)
        .into_iter()
        .map(|row| row.into_iter().map(|k| num_traits::pow(alpha.clone(), k)).collect())
        .collect()
}

/// `G[d][e] = tr(e ∘ d)` as polynomials in `t`.
pub fn gram_matrix_generic(a: &Word, b: &Word) -> Vec<Vec<Poly>> {
    if a.balance() != b.balance() {
        return Vec::new();
    }
    loop_table(a, b)
        .into_iter()
        .map(|row| row.into_iter().map(|k| Poly::monomial(Rational::from_integer(1.into()), k)).collect())
        .collect()
}

/// `tr*(I)` on the window: the kernel of the Gram pairing on each pair.
pub fn tr_star(center: CenterIdeal, window: &ProbeWindow, alpha: &Rational) -> IdealSpan {
    match center {
        CenterIdeal::Whole => IdealSpan::full(window, alpha),
        CenterIdeal::Zero => IdealSpan::build(window, alpha, |a, b| {
            let g = gram_matrix(a, b, alpha);
            let n = g.len();
            // c lies in the kernel when sum_d c_d G[d][e] = 0 for every e
            let transposed: Vec<Vec<Rational>> = (0..n).map(|e| g.iter().map(|row| row[e].clone()).collect()).collect();
            Ok(Subspace::span(n, nullspace(&transposed, n)))
        })
        .expect("Gram kernels do not fail"),
    }
}

/// Whether `tr(e ∘ f) = 0` for every diagram `e: B → A`, on any Hom pair
/// within the diagram budget.
pub fn tr_star_member(f: &WBMorphism, alpha: &Rational) -> Result<bool> {
    let (a, b) = (f.source(), f.target());
    if f.is_zero() {
        return Ok(true);
    }
    check_diagram_budget(b, a)?;
    let terms = specialized_terms(f, alpha);
    let es = enumerate_diagrams(b, a);
    Ok(es.par_iter().all(|e| {
        let mut s = Rational::zero();
        for (d, c) in &terms {
            let (comp, l1) = compose_diagrams(e, d);
            let l2 = comp.closure_loops().expect("endomorphism");
            s += c * num_traits::pow(alpha.clone(), l1 + l2);
        }
        s.is_zero()
    }))
}

/// The generic Gram determinant of `Hom(a, b)` and its integer roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramReport {
    pub source: Word,
    pub target: Word,
    pub dim: usize,
    pub determinant: Poly,
    pub roots: Option<IntegerRoots>,
}

impl GramReport {
    /// The kernel over `Q(t)` is zero exactly when the determinant is nonzero.
    pub fn generic_kernel_is_zero(&self) -> bool {
        !self.determinant.is_zero()
    }
}

impl Serialize for GramReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            source: String,
            target: String,
            hom_dim: usize,
            determinant: String,
            determinant_coeffs: Vec<String>,
            integer_roots: Vec<String>,
            all_integer: Option<bool>,
            residual: Option<String>,
        }
        let out = Out {
            source: self.source.to_string(),
            target: self.target.to_string(),
            hom_dim: self.dim,
            determinant: self.determinant.to_string(),
            determinant_coeffs: self.determinant.coeffs().iter().map(fmt_rational).collect(),
            integer_roots: self.roots.iter().flat_map(|r| r.roots.iter().map(BigInt::to_string)).collect(),
            all_integer: self.roots.as_ref().map(|r| r.all_integer),
            residual: self.roots.as_ref().map(|r| r.residual.to_string()),
        };
        out.serialize(s)
    }
}

/// Generic-`t` Gram determinant of `Hom(a, b)`.
pub fn gram_report(a: &Word, b: &Word) -> Result<GramReport> {
    check_diagram_budget(a, b)?;
    let g = gram_matrix_generic(a, b);
    let determinant = poly_matrix_det(&g)?;
    let roots = if determinant.is_zero() { None } else { Some(integer_roots(&determinant)?) };
    Ok(GramReport { source: a.clone(), target: b.clone(), dim: g.len(), determinant, roots })
}

/// The generic kernel of `Hom(a, b)`, which exists only when the Gram
/// determinant is nonzero.
pub fn generic_kernel(a: &Word, b: &Word) -> Result<Subspace> {
    let r = gram_report(a, b)?;
    if !r.generic_kernel_is_zero() {
        return Err(crate::error::Error::SingularGenericGram);
    }
    Ok(Subspace::zero(HomSpace::new(a, b).dim()))
}
