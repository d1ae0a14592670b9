//! The category of finitely generated free modules over a small finite
//! commutative ring, its ⊗-ideals `I(P)` and its spectrum.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{Report, Verdict};
use crate::error::{Error, Result};
use crate::spectral::{check_spectral_map, FinitePoset, MapRule, Point, SpaceKind, SpectralMap, SpectralSpaceDesc};

pub const MAX_MODULUS: u64 = 1000;
/// Largest rank of the probe window of free modules.
pub const MAX_RANK: usize = 3;

/// `Z/m_1 × … × Z/m_k`, restricted to a single `Z/m` or a product of prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallRing {
    moduli: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl FromStr for SmallRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unsupported = || Error::UnsupportedRing(s.to_string());
        let s = s.trim();
        if let Some(m) = s.strip_prefix("Z/") {
            let m: u64 = m.parse().map_err(|_| unsupported())?;
            if !(2..=MAX_MODULUS).contains(&m) {
                return Err(unsupported());
            }
            return Ok(SmallRing { moduli: vec![m] });
        }
        let mut moduli = Vec::new();
        for part in s.split(['x', '*']) {
            let p: u64 = part.trim().strip_prefix('F').ok_or_else(unsupported)?.parse().map_err(|_| unsupported())?;
            if !is_prime(p) || p > MAX_MODULUS {
                return Err(unsupported());
            }
            moduli.push(p);
        }
        if moduli.is_empty() || moduli.len() > 8 {
            return Err(unsupported());
        }
        Ok(SmallRing { moduli })
    }
}

impl fmt::Display for SmallRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [m] = self.moduli[..] {
            if !is_prime(m) {
                return write!(f, "Z/{m}");
            }
        }
        let parts: Vec<String> = self.moduli.iter().map(|p| format!("F{p}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// An element of a [`SmallRing`], one residue per factor.
pub type RingElem = Vec<u64>;

impl SmallRing {
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn zero(&self) -> RingElem {
        vec![0; self.moduli.len()]
    }

    pub fn one(&self) -> RingElem {
        vec![1; self.moduli.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> RingElem {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> RingElem {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x * y) % m).collect()
    }

    /// Every element, in lexicographic order of residues.
    pub fn elements(&self) -> Vec<RingElem> {
        let mut out = vec![Vec::new()];
        for &m in &self.moduli {
            out = out.into_iter().flat_map(|e| (0..m).map(move |x| [e.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn random(&self, rng: &mut impl Rng) -> RingElem {
        self.moduli.iter().map(|&m| rng.gen_range(0..m)).collect()
    }

    /// The prime ideals: `p R_i × ∏_{j≠i} R_j` for each prime `p | m_i`.
    pub fn primes(&self) -> Vec<RingPrime> {
        let mut out = Vec::new();
        for (i, &m) in self.moduli.iter().enumerate() {
            for p in prime_factors(m) {
                out.push(RingPrime { factors: self.moduli.len(), factor: i, p });
            }
        }
        out
    }

    /// The ideal generated by `g`, as a set of elements.
    pub fn principal_ideal(&self, g: &[u64]) -> BTreeSet<RingElem> {
        self.elements().iter().map(|x| self.mul(g, x)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingPrime {
    factors: usize,
    factor: usize,
    p: u64,
}

impl RingPrime {
    pub fn contains(&self, x: &[u64]) -> bool {
        x[self.factor].is_multiple_of(self.p)
    }

    /// An element generating the prime.
    pub fn generator(&self) -> RingElem {
        (0..self.factors).map(|i| if i == self.factor { self.p } else { 1 }).collect()
    }
}

impl fmt::Display for RingPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors == 1 {
            write!(f, "({})", self.p)
        } else {
            let parts: Vec<String> =
                (0..self.factors).map(|i| if i == self.factor { "0".into() } else { "R".into() }).collect();
            write!(f, "({})", parts.join(" x "))
        }
    }
}

/// A matrix over a [`SmallRing`]: a morphism `R^cols → R^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

impl RMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<RingElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(RMat { rows, cols, entries })
    }

    pub fn scalar(x: RingElem) -> Self {
        RMat { rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn random(ring: &SmallRing, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        RMat { rows, cols, entries: (0..rows * cols).map(|_| ring.random(rng)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn compose(&self, ring: &SmallRing, other: &RMat) -> Result<RMat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    acc = ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Ok(RMat { rows: self.rows, cols: other.cols, entries })
    }

    /// The Kronecker product, i.e. the tensor product of morphisms.
    pub fn kron(&self, ring: &SmallRing, other: &RMat) -> RMat {
        let (rows, cols) = (self.rows * other.rows, self.cols * other.cols);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..other.rows {
                for j in 0..self.cols {
                    for l in 0..other.cols {
                        entries.push(ring.mul(self.get(i, j), other.get(k, l)));
                    }
                }
            }
        }
        RMat { rows, cols, entries }
    }

    pub fn trace(&self, ring: &SmallRing) -> Result<RingElem> {
        if self.rows != self.cols {
            return Err(Error::Shape("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).fold(ring.zero(), |acc, i| ring.add(&acc, self.get(i, i))))
    }

    /// Membership in `I(P)`: every entry lies in `P`.
    pub fn in_prime_ideal(&self, prime: &RingPrime) -> bool {
        self.entries.iter().all(|x| prime.contains(x))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.iter().all(|&r| r == 0))
    }
}

/// Membership in `tr*(P)`: `tr(g f) ∈ P` for all `g`. By linearity of the
/// trace it suffices to take matrix units for `g`.
pub fn in_tr_star(ring: &SmallRing, prime: &RingPrime, f: &RMat) -> Result<bool> {
    for i in 0..f.rows {
        for j in 0..f.cols {
            let mut unit = vec![ring.zero(); f.cols * f.rows];
            unit[j * f.rows + i] = ring.one();
            let g = RMat::new(f.cols, f.rows, unit)?;
            if !prime.contains(&g.compose(ring, f)?.trace(ring)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A pair of `1 × 1` morphisms outside the ideal whose tensor product is
/// inside, searched exhaustively.
pub fn integrality_witness(ring: &SmallRing, member: impl Fn(&RMat) -> bool) -> Option<(RingElem, RingElem)> {
    let elems = ring.elements();
    for a in &elems {
        let fa = RMat::scalar(a.clone());
        if member(&fa) {
            continue;
        }
        for b in &elems {
            let fb = RMat::scalar(b.clone());
            if !member(&fb) && member(&fa.kron(ring, &fb)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// The spectrum of free `R`-modules and its identification with `Spec R`.
#[derive(Clone, Debug)]
pub struct FreeModuleSpectrum {
    pub ring: SmallRing,
    pub primes: Vec<RingPrime>,
    pub spec_ring: FinitePoset,
    pub spec_tensor: FinitePoset,
    pub pi: SpectralMap,
    pub sigma: SpectralMap,
    pub samples: usize,
    /// A witness that the zero ideal is not prime, when the ring is not a domain.
    pub zero_ideal_witness: Option<(RingElem, RingElem)>,
}

fn poset_by_inclusion(names: Vec<String>, sets: &[BTreeSet<RingElem>]) -> Result<FinitePoset> {
    // x ≤ y when y lies in the closure of x, i.e. the prime y contains x
    let leq = sets.iter().map(|a| sets.iter().map(|b| a.is_subset(b)).collect()).collect();
    FinitePoset::new(names, leq)
}

/// Enumerates `Spec R`, builds `I(P)` on free modules of rank at most
/// [`MAX_RANK`], checks `π(I(P)) = P`, `I(P) ⊆ tr*(P)` and sampled
/// integrality, and returns both spectra with `π` and `σ`.
pub fn spec_free_modules(ring: &SmallRing, samples: usize, seed: u64) -> Result<FreeModuleSpectrum> {
    let primes = ring.primes();
    let elems = ring.elements();
    let names: Vec<String> = primes.iter().map(ToString::to_string).collect();
    let prime_sets: Vec<BTreeSet<RingElem>> = primes.iter().map(|p| ring.principal_ideal(&p.generator())).collect();
    for (p, set) in primes.iter().zip(&prime_sets) {
        let expected: BTreeSet<RingElem> = elems.iter().filter(|x| p.contains(x)).cloned().collect();
        if *set != expected {
            return Err(Error::Verification(format!("{p} is not generated by {:?}", p.generator())));
        }
    }
    // π(I(P)): the scalars whose 1×1 matrix lies in I(P)
    let restricted: Vec<BTreeSet<RingElem>> = primes
        .iter()
        .map(|p| elems.iter().filter(|x| RMat::scalar((*x).clone()).in_prime_ideal(p)).cloned().collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (p, set) in primes.iter().zip(&prime_sets) {
        if integrality_witness(ring, |m| m.in_prime_ideal(p)).is_some() {
            return Err(Error::Verification(format!("I({p}) is not integral on 1x1 morphisms")));
        }
        for _ in 0..samples {
            let shape = |rng: &mut ChaCha8Rng| (rng.gen_range(1..=MAX_RANK), rng.gen_range(1..=MAX_RANK));
            let ((r1, c1), (r2, c2)) = (shape(&mut rng), shape(&mut rng));
            let (f, g) = (RMat::random(ring, r1, c1, &mut rng), RMat::random(ring, r2, c2, &mut rng));
            if !f.in_prime_ideal(p) && !g.in_prime_ideal(p) && f.kron(ring, &g).in_prime_ideal(p) {
                return Err(Error::Verification(format!("I({p}) is not integral: sampled witness")));
            }
            if f.in_prime_ideal(p) && !in_tr_star(ring, p, &f)? {
                return Err(Error::Verification(format!("I({p}) is not inside tr*({p})")));
            }
            // closure under composition and tensoring
            if f.in_prime_ideal(p) {
                let h = RMat::random(ring, r2, r1, &mut rng);
                if !h.compose(ring, &f)?.in_prime_ideal(p) || !f.kron(ring, &g).in_prime_ideal(p) {
                    return Err(Error::Verification(format!("I({p}) is not a tensor ideal")));
                }
            }
        }
        let scalars_in_tr_star: BTreeSet<RingElem> = elems
            .iter()
            .filter(|x| in_tr_star(ring, p, &RMat::scalar((*x).clone())).unwrap_or(false))
            .cloned()
            .collect();
        if scalars_in_tr_star != *set {
            return Err(Error::Verification(format!("tr*({p}) restricts to a different ideal of R")));
        }
    }
    let spec_ring = poset_by_inclusion(names.clone(), &prime_sets)?;
    let spec_tensor = poset_by_inclusion(names, &restricted)?;
    let ring_space = SpectralSpaceDesc::zariski(SpaceKind::Poset(spec_ring.clone()));
    let tensor_space = SpectralSpaceDesc::zariski(SpaceKind::Poset(spec_tensor.clone()));
    let pi_table = restricted
        .iter()
        .map(|s| prime_sets.iter().position(|t| t == s).map(Point::Poset))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Verification("restriction of I(P) is not a prime of R".into()))?;
    let pi = SpectralMap { domain: tensor_space.clone(), codomain: ring_space.clone(), rule: MapRule::Table(pi_table) };
    let sigma = SpectralMap {
        domain: ring_space,
        codomain: tensor_space,
        rule: MapRule::Table((0..primes.len()).map(Point::Poset).collect()),
    };
    for k in 0..primes.len() {
        if pi.apply(&sigma.apply(&Point::Poset(k))?)? != Point::Poset(k) {
            return Err(Error::Verification("pi ∘ sigma is not the identity".into()));
        }
    }
    for i in 0..primes.len() {
        for j in 0..primes.len() {
            if spec_ring.leq(i, j) != spec_tensor.leq(i, j) {
                return Err(Error::Verification("sigma is not an order isomorphism".into()));
            }
        }
    }
    if !check_spectral_map(&pi)? || !check_spectral_map(&sigma)? {
        return Err(Error::Verification("pi or sigma is not spectral".into()));
    }
    let zero_ideal_witness = integrality_witness(ring, RMat::is_zero);
    Ok(FreeModuleSpectrum {
        ring: ring.clone(),
        primes,
        spec_ring,
        spec_tensor,
        pi,
        sigma,
        samples,
        zero_ideal_witness,
    })
}

impl FreeModuleSpectrum {
    pub fn to_report(&self) -> Report {
        let fmt_elem = |x: &RingElem| x.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let witnesses: Vec<Value> = self
            .zero_ideal_witness
            .iter()
            .map(|(a, b)| json!({ "zero_ideal_not_prime": { "f": fmt_elem(a), "g": fmt_elem(b), "f_tensor_g": "0" } }))
            .collect();
        Report {
            statement: format!("Spec of free {}-modules is homeomorphic to Spec {}", self.ring, self.ring),
            window: json!({ "max_rank": MAX_RANK, "description": format!("free modules of rank <= {MAX_RANK}") }),
            verdict: Verdict::Verified,
            witnesses,
            budget: json!({ "samples_per_prime": self.samples }),
            details: json!({
                "ring": self.ring.to_string(),
                "points": self.primes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "discrete": self.spec_tensor.is_discrete(),
                "order_isomorphic": true,
                "pi_sigma_identity": true,
                "zero_ideal_prime": self.zero_ideal_witness.is_none(),
            }),
        }
    }
}
