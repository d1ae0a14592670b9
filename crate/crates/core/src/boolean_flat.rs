//! Finite products of fields as absolutely flat rings, the Boolean algebra
//! of their idempotents, and the correspondences between ring ideals,
//! Boolean ideals and continuous functions on the spectrum.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldKind};

/// A finite product `F_1 x ... x F_k` of fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductRing {
    factors: Vec<FieldKind>,
}

impl ProductRing {
    pub fn new(factors: Vec<FieldKind>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("a product ring needs at least one factor".into()));
        }
        if factors.len() > 64 {
            return Err(Error::Invalid("at most 64 factors are supported".into()));
        }
        Ok(ProductRing { factors })
    }

    pub fn power(field: FieldKind, k: usize) -> Result<Self> {
        Self::new(vec![field; k])
    }

    pub fn factors(&self) -> &[FieldKind] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> RingElem {
        RingElem { coords: self.factors.iter().map(|f| f.zero()).collect() }
    }

    pub fn one(&self) -> RingElem {
        RingElem { coords: self.factors.iter().map(|f| f.one()).collect() }
    }

    pub fn element(&self, coords: Vec<FieldElem>) -> Result<RingElem> {
        if coords.len() != self.len() {
            return Err(Error::LengthMismatch { needed: self.len(), got: coords.len() });
        }
        for (i, (c, f)) in coords.iter().zip(&self.factors).enumerate() {
            if c.field() != *f {
                return Err(Error::Invalid(format!("coordinate {} is not in {f}", i + 1)));
            }
        }
        Ok(RingElem { coords })
    }

    /// The ring element with coordinates 1 on the support of `e`, 0 elsewhere.
    pub fn idempotent(&self, e: &BoolElem) -> RingElem {
        RingElem {
            coords: self
                .factors
                .iter()
                .enumerate()
                .map(|(i, f)| if e.contains(i) { f.one() } else { f.zero() })
                .collect(),
        }
    }

    pub fn bool_algebra(&self) -> BoolAlg {
        BoolAlg { atoms: self.len() }
    }

    /// The ring `R / I`: the factors outside the canonical subset of `I`,
    /// with the list of surviving indices.
    pub fn quotient(&self, ideal: &RingIdeal) -> (Option<ProductRing>, Vec<usize>) {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !ideal.canonical().contains(i)).collect();
        let ring = if keep.is_empty() {
            None
        } else {
            Some(ProductRing { factors: keep.iter().map(|&i| self.factors[i]).collect() })
        };
        (ring, keep)
    }
}

impl FromStr for ProductRing {
    type Err = Error;

    /// Parses `Q^3`, `F2xF3xF5`, `QxF2^2` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { what: "ring descriptor", input: s.to_string() };
        let lower = s.trim().to_ascii_lowercase();
        if lower.is_empty() {
            return Err(err());
        }
        let mut factors = Vec::new();
        for tok in lower.split('x') {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| err())?),
                None => (tok, 1),
            };
            let field = if base == "q" {
                FieldKind::Rationals
            } else if let Some(p) = base.strip_prefix('f') {
                FieldKind::prime(p.parse().map_err(|_| err())?)?
            } else {
                return Err(err());
            };
            factors.extend(std::iter::repeat_n(field, exp));
        }
        ProductRing::new(factors)
    }
}

impl fmt::Display for ProductRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    coords: Vec<FieldElem>,
}

impl RingElem {
    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn add(&self, o: &RingElem) -> RingElem {
        RingElem { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn mul(&self, o: &RingElem) -> RingElem {
        RingElem { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn neg(&self) -> RingElem {
        RingElem { coords: self.coords.iter().map(FieldElem::neg).collect() }
    }

    pub fn support(&self) -> BoolElem {
        let mut e = BoolElem::zero(self.coords.len());
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                e.bits |= 1 << i;
            }
        }
        e
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The Boolean algebra of subsets of `atoms` factor indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoolAlg {
    atoms: usize,
}

impl BoolAlg {
    pub fn new(atoms: usize) -> Self {
        assert!(atoms <= 64);
        BoolAlg { atoms }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn zero(&self) -> BoolElem {
        BoolElem::zero(self.atoms)
    }

    pub fn one(&self) -> BoolElem {
        BoolElem { atoms: self.atoms, bits: full_mask(self.atoms) }
    }

    pub fn elements(&self) -> impl Iterator<Item = BoolElem> + '_ {
        (0..=full_mask(self.atoms)).map(move |bits| BoolElem { atoms: self.atoms, bits })
    }

    /// The principal ideal of all multiples of `e`.
    pub fn principal_ideal(&self, e: &BoolElem) -> BTreeSet<BoolElem> {
        self.elements().filter(|x| x.and(e) == *x).collect()
    }

    pub fn is_ideal(&self, j: &BTreeSet<BoolElem>) -> Result<()> {
        if !j.contains(&self.zero()) {
            return Err(Error::NotBooleanIdeal("does not contain 0".into()));
        }
        for a in j {
            if a.atoms != self.atoms {
                return Err(Error::NotBooleanIdeal(format!("{a} has the wrong atom count")));
            }
            if let Some(b) = self.elements().find(|b| !j.contains(&a.and(b))) {
                return Err(Error::NotBooleanIdeal(format!("{a} ∧ {b} is missing")));
            }
            for b in j {
                if a.and(b).is_zero() && !j.contains(&a.xor(b)) {
                    return Err(Error::NotBooleanIdeal(format!("{a} ⊕ {b} is missing")));
                }
            }
        }
        Ok(())
    }
}

fn full_mask(atoms: usize) -> u64 {
    if atoms == 64 {
        u64::MAX
    } else {
        (1u64 << atoms) - 1
    }
}

/// An idempotent of a product ring, identified with its support.
/// `xor` is the Boolean sum and `and` the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolElem {
    atoms: usize,
    bits: u64,
}

impl BoolElem {
    pub fn zero(atoms: usize) -> Self {
        BoolElem { atoms, bits: 0 }
    }

    pub fn from_bits(atoms: usize, bits: u64) -> Self {
        BoolElem { atoms, bits: bits & full_mask(atoms) }
    }

    /// Builds an element from 0-based factor indices.
    pub fn from_indices(atoms: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for i in indices {
            if i >= atoms {
                return Err(Error::Invalid(format!("atom {} out of range 1..={atoms}", i + 1)));
            }
            bits |= 1 << i;
        }
        Ok(BoolElem { atoms, bits })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.bits >> i & 1 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.atoms).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn xor(&self, o: &BoolElem) -> BoolElem {
        BoolElem { atoms: self.atoms, bits: self.bits ^ o.bits }
    }

    pub fn and(&self, o: &BoolElem) -> BoolElem {
        BoolElem { atoms: self.atoms, bits: self.bits & o.bits }
    }

    /// `1 + e` in the Boolean ring.
    pub fn complement(&self) -> BoolElem {
        BoolElem { atoms: self.atoms, bits: !self.bits & full_mask(self.atoms) }
    }

    pub fn is_subset(&self, o: &BoolElem) -> bool {
        self.bits & !o.bits == 0
    }
}

impl fmt::Display for BoolElem {
    /// 1-based atoms, e.g. `{1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Orthogonalizes a generating family of a Boolean ideal by the recursion
///
/// `f_i = e_i e_n`, `g_i = e_i (1 + e_n)`, `h = (1 + sum e_j) e_n`,
///
/// applied to the already orthogonal family built from `e_1 .. e_{n-1}`.
/// Zero members are dropped. Returns the orthogonal family and the
/// principal generator `e = sum` of it.
pub fn orthogonalize(gens: &[BoolElem]) -> Result<(Vec<BoolElem>, BoolElem)> {
    let Some(first) = gens.first() else {
        return Err(Error::Invalid("orthogonalize needs at least one generator".into()));
    };
    let alg = BoolAlg::new(first.atoms);
    if gens.iter().any(|g| g.atoms != alg.atoms) {
        return Err(Error::Invalid("generators have different atom counts".into()));
    }
    let one = alg.one();
    let mut family: Vec<BoolElem> = if first.is_zero() { vec![] } else { vec![*first] };
    for en in &gens[1..] {
        let total = family.iter().fold(alg.zero(), |acc, e| acc.xor(e));
        let f = family.iter().map(|ei| ei.and(en));
        let g = family.iter().map(|ei| ei.and(&one.xor(en)));
        let h = one.xor(&total).and(en);
        family = f.chain(g).chain(std::iter::once(h)).filter(|x| !x.is_zero()).collect();
    }
    let principal = family.iter().fold(alg.zero(), |acc, e| acc.xor(e));
    Ok((family, principal))
}

/// An ideal of a product ring, given by generators. Its canonical form is
/// the set of factors on which some generator is nonzero.
#[derive(Clone, Debug)]
pub struct RingIdeal {
    ring: ProductRing,
    generators: Vec<RingElem>,
    canonical: BoolElem,
}

impl RingIdeal {
    pub fn new(ring: &ProductRing, generators: Vec<RingElem>) -> Result<Self> {
        let mut canonical = BoolElem::zero(ring.len());
        for g in &generators {
            if g.coords.len() != ring.len() {
                return Err(Error::LengthMismatch { needed: ring.len(), got: g.coords.len() });
            }
            canonical = BoolElem { atoms: ring.len(), bits: canonical.bits | g.support().bits };
        }
        Ok(RingIdeal { ring: ring.clone(), generators, canonical })
    }

    /// The ideal of elements supported in `support`.
    pub fn supported_in(ring: &ProductRing, support: BoolElem) -> Self {
        RingIdeal { ring: ring.clone(), generators: vec![ring.idempotent(&support)], canonical: support }
    }

    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElem] {
        &self.generators
    }

    pub fn canonical(&self) -> BoolElem {
        self.canonical
    }

    pub fn contains(&self, x: &RingElem) -> bool {
        x.support().is_subset(&self.canonical)
    }

    /// Prime ideals of a product of fields omit exactly one factor.
    pub fn omitted_factor(&self) -> Option<usize> {
        let missing = self.canonical.complement();
        (missing.bits.count_ones() == 1).then(|| missing.bits.trailing_zeros() as usize)
    }

    pub fn is_prime(&self) -> bool {
        self.omitted_factor().is_some()
    }
}

impl PartialEq for RingIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.canonical == o.canonical
    }
}

impl Eq for RingIdeal {}

/// `B(I)`: the idempotents lying in `I`.
pub fn idempotents_of_ideal(ideal: &RingIdeal) -> BTreeSet<BoolElem> {
    ideal.ring.bool_algebra().principal_ideal(&ideal.canonical)
}

/// `I(J)`: the ring ideal generated by a Boolean ideal `J`.
pub fn ideal_of_idempotents(ring: &ProductRing, j: &BTreeSet<BoolElem>) -> Result<RingIdeal> {
    ring.bool_algebra().is_ideal(j)?;
    RingIdeal::new(ring, j.iter().map(|e| ring.idempotent(e)).collect())
}

/// The isomorphism `R -> Cont(Spec R, F)` for `R = F^k`: the spectrum is
/// `k` discrete points and an element becomes its coordinate function.
#[derive(Clone, Debug)]
pub struct ContIso {
    ring: ProductRing,
    field: FieldKind,
}

pub fn cont_iso(ring: &ProductRing) -> Result<ContIso> {
    let field = ring.factors[0];
    if ring.factors.iter().any(|f| *f != field) {
        return Err(Error::MixedFactorFields);
    }
    Ok(ContIso { ring: ring.clone(), field })
}

impl ContIso {
    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn points(&self) -> usize {
        self.ring.len()
    }

    /// `theta(a)`: the function sending point `i` to `a mod M_i`.
    pub fn apply(&self, a: &RingElem) -> Vec<FieldElem> {
        // residue at M_i is the i-th coordinate
        (0..self.points()).map(|i| a.coords[i].clone()).collect()
    }

    pub fn inverse(&self, func: &[FieldElem]) -> Result<RingElem> {
        self.ring.element(func.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(atoms: usize, idx: &[usize]) -> BoolElem {
        BoolElem::from_indices(atoms, idx.iter().map(|i| i - 1)).unwrap()
    }

    /// Oracle: ideal generated by a family, as the set of elements below
    /// some finite join of generators (enumerated over all atoms).
    fn generated(alg: &BoolAlg, gens: &[BoolElem]) -> BTreeSet<BoolElem> {
        alg.elements()
            .filter(|x| {
                let join =
                    gens.iter().fold(alg.zero(), |acc, g| BoolElem::from_bits(alg.atoms(), acc.bits() | g.bits()));
                x.is_subset(&join)
            })
            .collect()
    }

    #[test]
    fn orthogonalize_examples() {
        let (orth, e) = orthogonalize(&[el(3, &[1, 2]), el(3, &[2, 3])]).unwrap();
        assert_eq!(orth, vec![el(3, &[2]), el(3, &[1]), el(3, &[3])]);
        assert_eq!(e, el(3, &[1, 2, 3]));

        let x = el(4, &[1, 4]);
        assert_eq!(orthogonalize(&[x]).unwrap(), (vec![x], x));

        let (_, e) = orthogonalize(&[x, x]).unwrap();
        assert_eq!(e, x);
        let alg = BoolAlg::new(4);
        assert_eq!(alg.principal_ideal(&e), generated(&alg, &[x, x]));
        assert!(orthogonalize(&[]).is_err());
    }

    #[test]
    fn orthogonalize_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let atoms = rng.gen_range(1..=6);
            let n = rng.gen_range(1..=5);
            let gens: Vec<BoolElem> = (0..n).map(|_| BoolElem::from_bits(atoms, rng.gen())).collect();
            let (orth, e) = orthogonalize(&gens).unwrap();
            assert!(orth.len() < 1 << n);
            for (i, a) in orth.iter().enumerate() {
                for b in &orth[i + 1..] {
                    assert!(a.and(b).is_zero());
                }
            }
            let alg = BoolAlg::new(atoms);
            assert_eq!(generated(&alg, &orth), generated(&alg, &gens));
            assert_eq!(alg.principal_ideal(&e), generated(&alg, &gens));
            for g in &gens {
                assert_eq!(g.and(&e), *g);
            }
        }
    }

    #[test]
    fn ring_parsing() {
        let r: ProductRing = "F2xF3xF5".parse().unwrap();
        assert_eq!(r.factors(), &[FieldKind::Prime(2), FieldKind::Prime(3), FieldKind::Prime(5)]);
        let r: ProductRing = "q^3".parse().unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.to_string(), "QxQxQ");
        assert!("F4".parse::<ProductRing>().is_err());
        assert!("Z^2".parse::<ProductRing>().is_err());
        assert!("".parse::<ProductRing>().is_err());
    }

    #[test]
    fn idempotents_examples() {
        let r: ProductRing = "Q^2".parse().unwrap();
        let q = FieldKind::Rationals;
        let i = RingIdeal::new(&r, vec![r.element(vec![q.zero(), FieldElem::Q(int(5))]).unwrap()]).unwrap();
        let b = idempotents_of_ideal(&i);
        assert_eq!(b, [el(2, &[]), el(2, &[2])].into_iter().collect());

        let whole = RingIdeal::new(&r, vec![r.one()]).unwrap();
        assert_eq!(idempotents_of_ideal(&whole).len(), 4);

        let r: ProductRing = "F2xF3xF5".parse().unwrap();
        let g =
            r.element(vec![FieldKind::Prime(2).one(), FieldKind::Prime(3).one(), FieldKind::Prime(5).zero()]).unwrap();
        let i = RingIdeal::new(&r, vec![g]).unwrap();
        let b = idempotents_of_ideal(&i);
        for e in r.bool_algebra().elements() {
            // coordinate-wise membership oracle
            let member = r.idempotent(&e).coords().iter().enumerate().all(|(k, c)| c.is_zero() || k < 2);
            assert_eq!(b.contains(&e), member);
        }
    }

    #[test]
    fn ideal_of_idempotents_examples() {
        let r: ProductRing = "Q^3".parse().unwrap();
        let zero: BTreeSet<BoolElem> = [el(3, &[])].into_iter().collect();
        assert_eq!(ideal_of_idempotents(&r, &zero).unwrap().canonical(), el(3, &[]));

        let alg = r.bool_algebra();
        let j = generated(&alg, &[el(3, &[1]), el(3, &[2])]);
        assert_eq!(ideal_of_idempotents(&r, &j).unwrap().canonical(), el(3, &[1, 2]));

        let not_ideal: BTreeSet<BoolElem> = [el(3, &[]), el(3, &[1, 2])].into_iter().collect();
        assert!(matches!(ideal_of_idempotents(&r, &not_ideal), Err(Error::NotBooleanIdeal(_))));
        assert!(ideal_of_idempotents(&r, &BTreeSet::new()).is_err());
    }

    #[test]
    fn correspondence_round_trips_on_q3() {
        let r: ProductRing = "Q^3".parse().unwrap();
        let alg = r.bool_algebra();
        let mut count = 0;
        for e in alg.elements() {
            let j = alg.principal_ideal(&e);
            let i = ideal_of_idempotents(&r, &j).unwrap();
            assert_eq!(idempotents_of_ideal(&i), j);
            let back = ideal_of_idempotents(&r, &idempotents_of_ideal(&i)).unwrap();
            assert_eq!(back, i);
            count += 1;
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn cont_iso_examples() {
        let r: ProductRing = "Q^3".parse().unwrap();
        let q = FieldKind::Rationals;
        let theta = cont_iso(&r).unwrap();
        let a = r.element(vec![q.from_int(1), q.from_int(2), q.from_int(2)]).unwrap();
        assert_eq!(theta.apply(&a), vec![q.from_int(1), q.from_int(2), q.from_int(2)]);
        assert_eq!(theta.apply(&r.one()), vec![q.one(); 3]);
        let ind = theta.inverse(&[q.zero(), q.one(), q.zero()]).unwrap();
        assert_eq!(ind, r.idempotent(&el(3, &[2])));
        assert!(ind.is_idempotent());
        let mixed: ProductRing = "QxF2".parse().unwrap();
        assert!(matches!(cont_iso(&mixed), Err(Error::MixedFactorFields)));
    }

    #[test]
    fn quotient_and_primes() {
        let r: ProductRing = "Q^3".parse().unwrap();
        let p = RingIdeal::supported_in(&r, el(3, &[1, 3]));
        assert_eq!(p.omitted_factor(), Some(1));
        let (qr, keep) = r.quotient(&p);
        assert_eq!(keep, vec![1]);
        assert_eq!(qr.unwrap().len(), 1);
        assert!(!RingIdeal::supported_in(&r, el(3, &[1])).is_prime());
    }
}
