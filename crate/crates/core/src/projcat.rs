//! The category `A(R)` of finitely generated projective modules over a
//! finite product of fields `R = F_1 × … × F_k`: objects are dimension
//! vectors, morphisms are tuples of matrices, and the tensor product is the
//! blockwise Kronecker product.

use std::fmt;
use std::str::FromStr;

use crate::boolean_flat::{BoolElem, ProductRing, RingElem, RingIdeal};
use crate::error::{Error, Result};
use crate::field::{FMat, FieldKind};

pub type SupportSet = BoolElem;

pub const MAX_SERRE_FACTORS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    dims: Vec<usize>,
}

impl DimVector {
    pub fn new(dims: Vec<usize>) -> Self {
        DimVector { dims }
    }

    pub fn zero(k: usize) -> Self {
        DimVector { dims: vec![0; k] }
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut dims = vec![0; k];
        dims[i] = 1;
        DimVector { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn support(&self) -> SupportSet {
        BoolElem::from_bits(
            self.len(),
            self.dims.iter().enumerate().filter(|(_, &d)| d > 0).fold(0, |b, (i, _)| b | 1 << i),
        )
    }

    pub fn tensor(&self, o: &DimVector) -> DimVector {
        DimVector { dims: self.dims.iter().zip(&o.dims).map(|(a, b)| a * b).collect() }
    }

    fn check(&self, ring: &ProductRing) -> Result<()> {
        if self.len() != ring.len() {
            return Err(Error::LengthMismatch { needed: ring.len(), got: self.len() });
        }
        Ok(())
    }
}

impl FromStr for DimVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse { what: "dimension vector", input: s.to_string() })?;
        Ok(DimVector { dims })
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A morphism of `A(R)`: block `i` is a `target[i] × source[i]` matrix over `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMorphism {
    fields: Vec<FieldKind>,
    source: DimVector,
    target: DimVector,
    blocks: Vec<FMat>,
}

impl BlockMorphism {
    pub fn new(ring: &ProductRing, source: DimVector, target: DimVector, blocks: Vec<FMat>) -> Result<Self> {
        source.check(ring)?;
        target.check(ring)?;
        Self::over(ring.factors().to_vec(), source, target, blocks)
    }

    fn over(fields: Vec<FieldKind>, source: DimVector, target: DimVector, blocks: Vec<FMat>) -> Result<Self> {
        if blocks.len() != fields.len() {
            return Err(Error::LengthMismatch { needed: fields.len(), got: blocks.len() });
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.field() != fields[i] || b.rows() != target.dims[i] || b.cols() != source.dims[i] {
                return Err(Error::Shape(format!(
                    "block {} must be {}x{} over {}",
                    i + 1,
                    target.dims[i],
                    source.dims[i],
                    fields[i]
                )));
            }
        }
        Ok(BlockMorphism { fields, source, target, blocks })
    }

    pub fn identity(ring: &ProductRing, a: &DimVector) -> Result<Self> {
        let blocks = ring.factors().iter().zip(&a.dims).map(|(f, &d)| FMat::identity(*f, d)).collect();
        Self::new(ring, a.clone(), a.clone(), blocks)
    }

    pub fn zero(ring: &ProductRing, a: &DimVector, b: &DimVector) -> Result<Self> {
        let blocks =
            ring.factors().iter().zip(a.dims.iter().zip(&b.dims)).map(|(f, (&s, &t))| FMat::zero(*f, t, s)).collect();
        Self::new(ring, a.clone(), b.clone(), blocks)
    }

    /// The endomorphism of the unit object given by a ring element.
    pub fn scalar(ring: &ProductRing, x: &RingElem) -> Result<Self> {
        let one = DimVector::new(vec![1; ring.len()]);
        let blocks = ring
            .factors()
            .iter()
            .zip(x.coords())
            .map(|(f, c)| FMat::from_rows(*f, 1, 1, vec![c.clone()]))
            .collect::<Result<_>>()?;
        Self::new(ring, one.clone(), one, blocks)
    }

    pub fn fields(&self) -> &[FieldKind] {
        &self.fields
    }

    pub fn source(&self) -> &DimVector {
        &self.source
    }

    pub fn target(&self) -> &DimVector {
        &self.target
    }

    pub fn blocks(&self) -> &[FMat] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(FMat::is_zero)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &BlockMorphism) -> Result<BlockMorphism> {
        if self.source != f.target || self.fields != f.fields {
            return Err(Error::Shape(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, f.source, f.target
            )));
        }
        let blocks = self.blocks.iter().zip(&f.blocks).map(|(a, b)| a.mul(b)).collect();
        Ok(BlockMorphism { fields: self.fields.clone(), source: f.source.clone(), target: self.target.clone(), blocks })
    }

    pub fn tensor(&self, g: &BlockMorphism) -> Result<BlockMorphism> {
        if self.fields != g.fields {
            return Err(Error::MixedFactorFields);
        }
        let blocks = self.blocks.iter().zip(&g.blocks).map(|(a, b)| a.kron(b)).collect();
        Ok(BlockMorphism {
            fields: self.fields.clone(),
            source: self.source.tensor(&g.source),
            target: self.target.tensor(&g.target),
            blocks,
        })
    }

    pub fn add(&self, g: &BlockMorphism) -> Result<BlockMorphism> {
        if self.source != g.source || self.target != g.target || self.fields != g.fields {
            return Err(Error::Shape("sum of morphisms with different shapes".into()));
        }
        let blocks = self.blocks.iter().zip(&g.blocks).map(|(a, b)| a.add(b)).collect();
        Ok(BlockMorphism { blocks, ..self.clone() })
    }
}

/// Factor indices where `f` is nonzero.
pub fn support(f: &BlockMorphism) -> SupportSet {
    let bits = f.blocks.iter().enumerate().filter(|(_, b)| !b.is_zero()).fold(0u64, |acc, (i, _)| acc | 1 << i);
    BoolElem::from_bits(f.blocks.len(), bits)
}

/// `e(f)`, the idempotent of the support.
pub fn support_idempotent(ring: &ProductRing, f: &BlockMorphism) -> RingElem {
    ring.idempotent(&support(f))
}

/// A Serre ⊗-ideal of `A(R)`: all objects supported in `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreIdeal {
    pub support: SupportSet,
    pub ideal: RingIdeal,
}

impl SerreIdeal {
    pub fn contains(&self, a: &DimVector) -> bool {
        a.support().is_subset(&self.support)
    }
}

/// The Serre ideal `{A : e(A) ∈ I}`.
pub fn serre_of_ideal(ideal: &RingIdeal) -> SerreIdeal {
    SerreIdeal { support: ideal.canonical(), ideal: ideal.clone() }
}

/// The ring ideal generated by `e(A)` for the generating objects of a Serre ideal.
pub fn ideal_of_serre(ring: &ProductRing, support: &SupportSet) -> Result<RingIdeal> {
    let gens =
        support.indices().into_iter().map(|i| ring.idempotent(&DimVector::unit(ring.len(), i).support())).collect();
    RingIdeal::new(ring, gens)
}

pub fn enumerate_serre_ideals(ring: &ProductRing) -> Result<Vec<SerreIdeal>> {
    let k = ring.len();
    if k > MAX_SERRE_FACTORS {
        return Err(Error::TooManyFactors(k));
    }
    (0..1u64 << k)
        .map(|bits| {
            let s = BoolElem::from_bits(k, bits);
            Ok(SerreIdeal { support: s, ideal: ideal_of_serre(ring, &s)? })
        })
        .collect()
}

/// The image of `f` in `A(R/I)`: the blocks outside the canonical subset of `I`.
pub fn quotient_map(f: &BlockMorphism, ideal: &RingIdeal) -> BlockMorphism {
    let keep: Vec<usize> = (0..f.blocks.len()).filter(|&i| !ideal.canonical().contains(i)).collect();
    BlockMorphism {
        fields: keep.iter().map(|&i| f.fields[i]).collect(),
        source: DimVector::new(keep.iter().map(|&i| f.source.dims[i]).collect()),
        target: DimVector::new(keep.iter().map(|&i| f.target.dims[i]).collect()),
        blocks: keep.iter().map(|&i| f.blocks[i].clone()).collect(),
    }
}

/// Whether `e(f) ∈ P` for a prime `P`.
pub fn sigma_membership(f: &BlockMorphism, prime: &RingIdeal) -> Result<bool> {
    let Some(j) = prime.omitted_factor() else {
        return Err(Error::NotPrime(prime.canonical().to_string()));
    };
    Ok(f.blocks[j].is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    Retraction(BlockMorphism),
    Overlap(SupportSet),
}

/// Builds a retraction of `inclusion: sub → a` when `sub` and the cokernel
/// have disjoint supports; otherwise returns the overlap.
pub fn split_check(sub: &DimVector, a: &DimVector, inclusion: &BlockMorphism) -> Result<SplitOutcome> {
    if inclusion.source != *sub || inclusion.target != *a {
        return Err(Error::Shape("inclusion does not go from the subobject to the object".into()));
    }
    for (i, b) in inclusion.blocks.iter().enumerate() {
        if b.rank() != sub.dims[i] {
            return Err(Error::NotInjective(i + 1));
        }
    }
    let k = a.len();
    let coker = BoolElem::from_bits(k, (0..k).filter(|&i| a.dims[i] > sub.dims[i]).fold(0, |acc, i| acc | 1 << i));
    let overlap = sub.support().and(&coker);
    if !overlap.is_zero() {
        return Ok(SplitOutcome::Overlap(overlap));
    }
    // on each factor either the subobject is zero or the inclusion is invertible
    let blocks = inclusion
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if sub.dims[i] == 0 {
                FMat::zero(inclusion.fields[i], 0, a.dims[i])
            } else {
                b.inverse().expect("square injective block is invertible")
            }
        })
        .collect();
    Ok(SplitOutcome::Retraction(BlockMorphism::over(inclusion.fields.clone(), a.clone(), sub.clone(), blocks)?))
}

/// Blockwise exactness of `0 → A' → A → A'' → 0`.
pub fn is_short_exact(inclusion: &BlockMorphism, projection: &BlockMorphism) -> bool {
    if inclusion.target != projection.source {
        return false;
    }
    inclusion.blocks.iter().zip(&projection.blocks).enumerate().all(|(i, (f, g))| {
        g.mul(f).is_zero()
            && f.rank() == inclusion.source.dims[i]
            && g.rank() == projection.target.dims[i]
            && inclusion.source.dims[i] + projection.target.dims[i] == inclusion.target.dims[i]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(s: &str) -> ProductRing {
        s.parse().unwrap()
    }

    fn dv(s: &str) -> DimVector {
        s.parse().unwrap()
    }

    fn bool_set(k: usize, idx: &[usize]) -> BoolElem {
        BoolElem::from_indices(k, idx.iter().copied()).unwrap()
    }

    /// Every morphism `a → b` over a ring of finite fields.
    fn all_morphisms(r: &ProductRing, a: &DimVector, b: &DimVector) -> Vec<BlockMorphism> {
        let mut out: Vec<Vec<FMat>> = vec![Vec::new()];
        for (i, f) in r.factors().iter().enumerate() {
            let choices = FMat::all(*f, b.dims[i], a.dims[i]);
            out = out
                .into_iter()
                .flat_map(|pre| {
                    choices.iter().map(move |m| {
                        let mut v = pre.clone();
                        v.push(m.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|blocks| BlockMorphism::new(r, a.clone(), b.clone(), blocks).unwrap()).collect()
    }

    fn all_dims(k: usize, max: usize) -> Vec<DimVector> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (0..=max).map(move |d| {
                        let mut v = p.clone();
                        v.push(d);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(DimVector::new).collect()
    }

    #[test]
    fn support_examples() {
        let r = ring("Q^2");
        let x = r.element(vec![FieldElem::Q(crate::scalars::int(1)), FieldElem::Q(crate::scalars::int(0))]).unwrap();
        let f = BlockMorphism::scalar(&r, &x).unwrap();
        assert_eq!(support(&f), bool_set(2, &[0]));
        assert_eq!(support_idempotent(&r, &f), x);
        let z = BlockMorphism::zero(&r, &dv("1,2"), &dv("2,1")).unwrap();
        assert!(support(&z).is_zero());
        let id = BlockMorphism::identity(&r, &dv("0,3")).unwrap();
        assert_eq!(support(&id), dv("0,3").support());
    }

    #[test]
    fn support_of_tensor_is_intersection() {
        let r = ring("F2^3");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = DimVector::new((0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..=2)).collect());
            let b = DimVector::new((0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..=2)).collect());
            let blocks = |s: &DimVector, t: &DimVector, rng: &mut ChaCha8Rng| {
                (0..3).map(|i| FMat::random(FieldKind::prime(2).unwrap(), t.dims[i], s.dims[i], rng)).collect()
            };
            let f = BlockMorphism::new(&r, a.clone(), b.clone(), blocks(&a, &b, &mut rng)).unwrap();
            let g = BlockMorphism::new(&r, b.clone(), a.clone(), blocks(&b, &a, &mut rng)).unwrap();
            let fg = f.tensor(&g).unwrap();
            assert_eq!(support(&fg), support(&f).and(&support(&g)));
            // f ⊗ g = 0 iff the supports are disjoint
            assert_eq!(fg.is_zero(), support(&f).and(&support(&g)).is_zero());
        }
    }

    #[test]
    fn tensor_vanishing_exhaustive() {
        for desc in ["F2", "F2^2", "F2^3"] {
            let r = ring(desc);
            let k = r.len();
            let objs = all_dims(k, 1);
            for a in &objs {
                for b in &objs {
                    let fs = all_morphisms(&r, a, b);
                    for f in &fs {
                        for g in &fs {
                            let zero = f.tensor(g).unwrap().is_zero();
                            assert_eq!(zero, support(f).and(&support(g)).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_subobjects_tensor_to_intersection() {
        for k in 1..=4 {
            for u in 0..1u64 << k {
                for v in 0..1u64 << k {
                    let du = DimVector::new((0..k).map(|i| (u >> i & 1) as usize).collect());
                    let dw = DimVector::new((0..k).map(|i| (v >> i & 1) as usize).collect());
                    let t = du.tensor(&dw);
                    assert_eq!(t.support(), du.support().and(&dw.support()));
                }
            }
        }
    }

    #[test]
    fn serre_ideal_examples() {
        assert_eq!(enumerate_serre_ideals(&ring("Q")).unwrap().len(), 2);
        let q3 = ring("Q^3");
        let ideals = enumerate_serre_ideals(&q3).unwrap();
        assert_eq!(ideals.len(), 8);
        let s2 = ideals.iter().find(|s| s.support == bool_set(3, &[1])).unwrap();
        assert!(s2.contains(&dv("0,3,0")));
        assert!(!s2.contains(&dv("1,3,0")));
        let big = ProductRing::power(FieldKind::Rationals, 21).unwrap();
        assert!(matches!(enumerate_serre_ideals(&big), Err(Error::TooManyFactors(21))));
    }

    #[test]
    fn serre_round_trip() {
        for k in 1..=5 {
            let r = ProductRing::power(FieldKind::Rationals, k).unwrap();
            for s in enumerate_serre_ideals(&r).unwrap() {
                assert_eq!(serre_of_ideal(&s.ideal).support, s.support);
                let i = RingIdeal::supported_in(&r, s.support);
                assert_eq!(ideal_of_serre(&r, &serre_of_ideal(&i).support).unwrap(), i);
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let r = ring("Q^2");
        let m1 = FMat::identity(FieldKind::Rationals, 2);
        let m2 = FMat::identity(FieldKind::Rationals, 1);
        let f = BlockMorphism::new(&r, dv("2,1"), dv("2,1"), vec![m1.clone(), m2]).unwrap();
        let i = RingIdeal::supported_in(&r, bool_set(2, &[1]));
        let qf = quotient_map(&f, &i);
        assert_eq!(qf.blocks(), &[m1]);
        let zero_ideal = RingIdeal::supported_in(&r, BoolElem::zero(2));
        assert_eq!(quotient_map(&f, &zero_ideal), f);
    }

    #[test]
    fn quotient_is_full_with_expected_kernel() {
        let r = ring("F2^2");
        let i = RingIdeal::supported_in(&r, bool_set(2, &[1]));
        for a in all_dims(2, 2) {
            for b in all_dims(2, 1) {
                let homs = all_morphisms(&r, &a, &b);
                let images: std::collections::HashSet<Vec<FMat>> =
                    homs.iter().map(|f| quotient_map(f, &i).blocks().to_vec()).collect();
                // surjective: every matrix on the first factor is hit
                assert_eq!(images.len(), 1 << (a.dims()[0] * b.dims()[0]));
                let kernel = homs.iter().filter(|f| quotient_map(f, &i).is_zero()).count();
                assert_eq!(kernel, 1 << (a.dims()[1] * b.dims()[1]));
            }
        }
    }

    #[test]
    fn sigma_membership_examples() {
        let r = ring("Q^2");
        let p = RingIdeal::supported_in(&r, bool_set(2, &[1]));
        let f = BlockMorphism::new(
            &r,
            dv("0,1"),
            dv("0,1"),
            vec![FMat::zero(FieldKind::Rationals, 0, 0), FMat::identity(FieldKind::Rationals, 1)],
        )
        .unwrap();
        assert!(sigma_membership(&f, &p).unwrap());
        let id = BlockMorphism::identity(&r, &dv("1,1")).unwrap();
        for j in 0..2 {
            let prime = RingIdeal::supported_in(&r, bool_set(2, &[1 - j]));
            assert!(!sigma_membership(&id, &prime).unwrap());
        }
        let not_prime = RingIdeal::supported_in(&r, BoolElem::zero(2));
        assert!(matches!(sigma_membership(&id, &not_prime), Err(Error::NotPrime(_))));
    }

    #[test]
    fn sigma_ideals_are_prime() {
        let r = ring("F2^2");
        let objs = all_dims(2, 1);
        let mut morphisms = Vec::new();
        for a in &objs {
            for b in &objs {
                morphisms.extend(all_morphisms(&r, a, b));
            }
        }
        for j in 0..2 {
            let prime = RingIdeal::supported_in(&r, bool_set(2, &[1 - j]));
            for f in &morphisms {
                for g in &morphisms {
                    let fg = f.tensor(g).unwrap();
                    let lhs = sigma_membership(&fg, &prime).unwrap();
                    let rhs = sigma_membership(f, &prime).unwrap() || sigma_membership(g, &prime).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        let r = ring("Q^2");
        let q = FieldKind::Rationals;
        let inc =
            BlockMorphism::new(&r, dv("1,0"), dv("1,2"), vec![FMat::identity(q, 1), FMat::zero(q, 2, 0)]).unwrap();
        match split_check(&dv("1,0"), &dv("1,2"), &inc).unwrap() {
            SplitOutcome::Retraction(ret) => {
                assert_eq!(ret.compose(&inc).unwrap(), BlockMorphism::identity(&r, &dv("1,0")).unwrap())
            }
            other => panic!("expected a retraction, got {other:?}"),
        }
        let zero_inc = BlockMorphism::zero(&r, &dv("0,0"), &dv("1,2")).unwrap();
        assert!(matches!(split_check(&dv("0,0"), &dv("1,2"), &zero_inc).unwrap(), SplitOutcome::Retraction(_)));
        let one = FieldElem::Q(crate::scalars::int(1));
        let zero = FieldElem::Q(crate::scalars::int(0));
        let inc2 = BlockMorphism::new(
            &r,
            dv("1,0"),
            dv("2,0"),
            vec![FMat::from_rows(q, 2, 1, vec![one, zero]).unwrap(), FMat::zero(q, 0, 0)],
        )
        .unwrap();
        assert_eq!(split_check(&dv("1,0"), &dv("2,0"), &inc2).unwrap(), SplitOutcome::Overlap(bool_set(2, &[0])));
        let bad = BlockMorphism::zero(&r, &dv("1,0"), &dv("1,0")).unwrap();
        assert!(matches!(split_check(&dv("1,0"), &dv("1,0"), &bad), Err(Error::NotInjective(1))));
    }

    #[test]
    fn middle_support_is_union() {
        let r = ring("F3^3");
        let f3 = FieldKind::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let sub = DimVector::new((0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..=2)).collect());
            let quo = DimVector::new((0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..=2)).collect());
            let mid = DimVector::new(sub.dims().iter().zip(quo.dims()).map(|(a, b)| a + b).collect());
            // a random change of basis on the middle term
            let mut inc_blocks = Vec::new();
            let mut proj_blocks = Vec::new();
            for i in 0..3 {
                let n = mid.dims()[i];
                let basis = loop {
                    let m = FMat::random(f3, n, n, &mut rng);
                    if m.rank() == n {
                        break m;
                    }
                };
                let inv = basis.inverse().unwrap();
                let (s, t) = (sub.dims()[i], quo.dims()[i]);
                let mut std_inc = FMat::zero(f3, n, s);
                for j in 0..s {
                    std_inc.set(j, j, f3.one());
                }
                let mut std_proj = FMat::zero(f3, t, n);
                for j in 0..t {
                    std_proj.set(j, s + j, f3.one());
                }
                inc_blocks.push(basis.mul(&std_inc));
                proj_blocks.push(std_proj.mul(&inv));
            }
            let inc = BlockMorphism::new(&r, sub.clone(), mid.clone(), inc_blocks).unwrap();
            let proj = BlockMorphism::new(&r, mid.clone(), quo.clone(), proj_blocks).unwrap();
            assert!(is_short_exact(&inc, &proj));
            let union = BoolElem::from_bits(3, sub.support().bits() | quo.support().bits());
            assert_eq!(mid.support(), union);
        }
    }

    #[test]
    fn product_of_quotients_is_equivalence() {
        for desc in ["F2", "F2^2", "F2xF3", "F2^3"] {
            let r = ring(desc);
            let k = r.len();
            let primes: Vec<RingIdeal> = (0..k)
                .map(|j| RingIdeal::supported_in(&r, BoolElem::from_bits(k, ((1u64 << k) - 1) & !(1 << j))))
                .collect();
            for a in all_dims(k, if k == 3 { 1 } else { 2 }) {
                for b in all_dims(k, 1) {
                    let homs = all_morphisms(&r, &a, &b);
                    let images: std::collections::HashSet<Vec<Vec<FMat>>> = homs
                        .iter()
                        .map(|f| primes.iter().map(|p| quotient_map(f, p).blocks().to_vec()).collect())
                        .collect();
                    assert_eq!(images.len(), homs.len());
                    // jointly faithful
                    for f in &homs {
                        if primes.iter().all(|p| quotient_map(f, p).is_zero()) {
                            assert!(f.is_zero());
                        }
                    }
                }
            }
        }
    }
}
