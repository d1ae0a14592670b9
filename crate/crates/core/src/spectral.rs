//! Presentations of spectral spaces: finite posets and the chain
//! `N ∪ {∞}`, each with its Zariski-style or constructible topology.
//!
//! Convention: in a poset, `x <= y` means `y` lies in the closure of `x`,
//! so the Zariski-closed sets are exactly the up-sets. On the chain, the
//! Zariski-closed sets are the whole space and the intervals `[0, r]`
//! (plus the empty set); the constructible topology is the one-point
//! compactification of discrete `N`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Zariski,
    Constructible,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds a poset from a full `leq` relation, checking the partial-order axioms.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("order relation must be n x n".into()));
        }
        let uniq: BTreeSet<&String> = names.iter().collect();
        if uniq.len() != n {
            return Err(Error::Invalid("duplicate point names".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Invalid(format!("relation is not reflexive at {}", names[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!(
                        "relation is not antisymmetric: {} and {}",
                        names[i], names[j]
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Invalid("relation is not transitive".into()));
                    }
                }
            }
        }
        Ok(FinitePoset { names, leq })
    }

    /// The order generated by `pairs` (`(x, y)` meaning `x <= y`).
    pub fn generated(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Invalid("relation mentions an unknown point".into()));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Self::new(names, leq)
    }

    pub fn discrete(names: Vec<String>) -> Result<Self> {
        Self::generated(names, &[])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn up_set(&self, i: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    pub fn is_up_set(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|&i| self.up_set(i).is_subset(s))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|i| self.up_set(i).len() == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Poset(FinitePoset),
    OmegaChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralSpaceDesc {
    pub kind: SpaceKind,
    pub topology: Topology,
}

impl SpectralSpaceDesc {
    pub fn zariski(kind: SpaceKind) -> Self {
        SpectralSpaceDesc { kind, topology: Topology::Zariski }
    }

    pub fn omega_chain() -> Self {
        Self::zariski(SpaceKind::OmegaChain)
    }

    pub fn point() -> Self {
        Self::zariski(SpaceKind::Poset(FinitePoset::discrete(vec!["*".into()]).unwrap()))
    }

    pub fn poset(&self) -> Option<&FinitePoset> {
        match &self.kind {
            SpaceKind::Poset(p) => Some(p),
            SpaceKind::OmegaChain => None,
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        let ok = match (&self.kind, x) {
            (SpaceKind::Poset(p), Point::Poset(i)) => *i < p.len(),
            (SpaceKind::OmegaChain, Point::Nat(_) | Point::Infinity) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadDescriptor(format!("point {x} does not belong to the space")))
        }
    }

    /// Points of a finite space.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        self.poset().map(|p| (0..p.len()).map(Point::Poset).collect())
    }

    pub fn contains(&self, s: &PointSet, x: &Point) -> Result<bool> {
        self.check_point(x)?;
        Ok(match self.normalize(s)? {
            Norm::Poset(set) => matches!(x, Point::Poset(i) if set.contains(i)),
            Norm::Chain(c) => c.contains(x),
        })
    }

    fn normalize(&self, s: &PointSet) -> Result<Norm> {
        match &self.kind {
            SpaceKind::Poset(p) => match s {
                PointSet::Whole => Ok(Norm::Poset((0..p.len()).collect())),
                PointSet::Finite(pts) => {
                    let mut out = BTreeSet::new();
                    for x in pts {
                        match x {
                            Point::Poset(i) if *i < p.len() => {
                                out.insert(*i);
                            }
                            _ => return Err(Error::BadDescriptor(format!("{x} is not a point of the poset"))),
                        }
                    }
                    Ok(Norm::Poset(out))
                }
                _ => Err(Error::BadDescriptor("intervals and cofinite sets need the omega chain".into())),
            },
            SpaceKind::OmegaChain => Ok(Norm::Chain(ChainSet::from_descriptor(s)?)),
        }
    }

    pub fn is_closed(&self, s: &PointSet) -> Result<bool> {
        let norm = self.normalize(s)?;
        Ok(match (&self.kind, self.topology, norm) {
            (SpaceKind::Poset(p), Topology::Zariski, Norm::Poset(set)) => p.is_up_set(&set),
            (SpaceKind::Poset(_), Topology::Constructible, _) => true,
            (SpaceKind::OmegaChain, Topology::Zariski, Norm::Chain(c)) => c.is_zariski_closed(),
            (SpaceKind::OmegaChain, Topology::Constructible, Norm::Chain(c)) => {
                c.infinity || matches!(c.nats, NatPart::Finite(_))
            }
            _ => unreachable!(),
        })
    }

    pub fn is_open(&self, s: &PointSet) -> Result<bool> {
        let c = self.complement(s)?;
        self.is_closed(&c)
    }

    pub fn complement(&self, s: &PointSet) -> Result<PointSet> {
        Ok(match self.normalize(s)? {
            Norm::Poset(set) => {
                let n = self.poset().unwrap().len();
                PointSet::Finite((0..n).filter(|i| !set.contains(i)).map(Point::Poset).collect())
            }
            Norm::Chain(c) => c.complement().to_descriptor(),
        })
    }

    pub fn is_quasi_compact(&self, s: &PointSet) -> Result<bool> {
        Ok(match (&self.kind, self.topology) {
            (SpaceKind::Poset(_), _) => {
                self.normalize(s)?;
                true
            }
            // Zariski opens on the chain are nested, so every subset is quasi-compact.
            (SpaceKind::OmegaChain, Topology::Zariski) => {
                self.normalize(s)?;
                true
            }
            // compact Hausdorff: quasi-compact iff closed
            (SpaceKind::OmegaChain, Topology::Constructible) => self.is_closed(s)?,
        })
    }

    /// Closure of a finite set of points.
    pub fn closure(&self, pts: &BTreeSet<Point>) -> Result<PointSet> {
        for x in pts {
            self.check_point(x)?;
        }
        Ok(match (&self.kind, self.topology) {
            (SpaceKind::Poset(p), Topology::Zariski) => {
                let mut up = BTreeSet::new();
                for x in pts {
                    if let Point::Poset(i) = x {
                        up.extend(p.up_set(*i));
                    }
                }
                PointSet::Finite(up.into_iter().map(Point::Poset).collect())
            }
            (_, Topology::Constructible) => PointSet::Finite(pts.clone()),
            (SpaceKind::OmegaChain, Topology::Zariski) => {
                if pts.contains(&Point::Infinity) {
                    PointSet::Whole
                } else {
                    match pts.iter().next_back() {
                        Some(Point::Nat(r)) => PointSet::Interval(*r),
                        _ => PointSet::Finite(BTreeSet::new()),
                    }
                }
            }
        })
    }

    pub fn is_hausdorff(&self) -> bool {
        match (&self.kind, self.topology) {
            (SpaceKind::Poset(p), Topology::Zariski) => p.is_discrete(),
            (SpaceKind::Poset(_), Topology::Constructible) => true,
            (SpaceKind::OmegaChain, Topology::Zariski) => false,
            // {n} is clopen for every n, so points of N are separated from
            // everything; a neighbourhood of ∞ is a cofinite set containing ∞.
            (SpaceKind::OmegaChain, Topology::Constructible) => (0..8u64).all(|n| {
                let single = PointSet::Finite([Point::Nat(n)].into());
                let rest = PointSet::Cofinite { excluded: [n].into(), infinity: true };
                self.is_closed(&single).unwrap() && self.is_open(&single).unwrap() && self.is_open(&rest).unwrap()
            }),
        }
    }
}

impl FromStr for SpectralSpaceDesc {
    type Err = Error;

    /// `omega-chain`, `poset:a<b,a<c`, `poset:a,b` (antichain).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("omega-chain") {
            return Ok(Self::omega_chain());
        }
        let err = || Error::Parse { what: "space descriptor", input: s.to_string() };
        let body = s.strip_prefix("poset:").ok_or_else(err)?;
        let mut names: Vec<String> = Vec::new();
        let mut pairs = Vec::new();
        let intern = |n: &str, names: &mut Vec<String>| -> Result<usize> {
            let n = n.trim();
            if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(err());
            }
            Ok(match names.iter().position(|x| x == n) {
                Some(i) => i,
                None => {
                    names.push(n.to_string());
                    names.len() - 1
                }
            })
        };
        for item in body.split(',').filter(|x| !x.trim().is_empty()) {
            let chain: Vec<&str> = item.split('<').collect();
            let idx = chain.iter().map(|n| intern(n, &mut names)).collect::<Result<Vec<_>>>()?;
            pairs.extend(idx.windows(2).map(|w| (w[0], w[1])));
        }
        if names.is_empty() {
            return Err(err());
        }
        Ok(Self::zariski(SpaceKind::Poset(FinitePoset::generated(names, &pairs)?)))
    }
}

impl fmt::Display for SpectralSpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = match self.topology {
            Topology::Zariski => "zariski",
            Topology::Constructible => "constructible",
        };
        match &self.kind {
            SpaceKind::OmegaChain => write!(f, "omega-chain [{top}]"),
            SpaceKind::Poset(p) => {
                let mut rel = Vec::new();
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        // covering relations only
                        if i != j
                            && p.leq(i, j)
                            && !(0..p.len()).any(|k| k != i && k != j && p.leq(i, k) && p.leq(k, j))
                        {
                            rel.push(format!("{}<{}", p.names[i], p.names[j]));
                        }
                    }
                }
                for i in 0..p.len() {
                    if !(0..p.len()).any(|j| j != i && (p.leq(i, j) || p.leq(j, i))) {
                        rel.push(p.names[i].clone());
                    }
                }
                write!(f, "poset:{} [{top}]", rel.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Point {
    Poset(usize),
    Nat(u64),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Poset(i) => write!(f, "#{i}"),
            Point::Nat(n) => write!(f, "{n}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// A subset descriptor. `Interval` and `Cofinite` only make sense on the
/// omega chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointSet {
    Finite(BTreeSet<Point>),
    /// `[0, r]`
    Interval(u64),
    /// `N \ excluded`, together with `∞` when `infinity` is set.
    Cofinite {
        excluded: BTreeSet<u64>,
        infinity: bool,
    },
    Whole,
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet::Finite(BTreeSet::new())
    }

    pub fn singleton(x: Point) -> Self {
        PointSet::Finite([x].into())
    }

    /// Parses `whole`, `[0,r]`, `{a,b}` / `{0,3,inf}`, `N-{1,2}`, `N-{1,2}+inf`,
    /// resolving names against `space`.
    pub fn parse(space: &SpectralSpaceDesc, s: &str) -> Result<PointSet> {
        let err = || Error::Parse { what: "point set", input: s.to_string() };
        let s = s.trim();
        if s == "whole" {
            return Ok(PointSet::Whole);
        }
        if let Some(r) = s.strip_prefix("[0,").and_then(|x| x.strip_suffix(']')) {
            return Ok(PointSet::Interval(r.trim().parse().map_err(|_| err())?));
        }
        let list = |body: &str| -> Result<Vec<String>> {
            let inner = body.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(err)?;
            Ok(inner.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect())
        };
        if let Some(rest) = s.strip_prefix("N-") {
            let (body, infinity) = match rest.strip_suffix("+inf") {
                Some(b) => (b, true),
                None => (rest, false),
            };
            let excluded = list(body)?.iter().map(|x| x.parse::<u64>().map_err(|_| err())).collect::<Result<_>>()?;
            return Ok(PointSet::Cofinite { excluded, infinity });
        }
        let mut pts = BTreeSet::new();
        for name in list(s)? {
            let p = match &space.kind {
                SpaceKind::Poset(p) => Point::Poset(p.index_of(&name).ok_or_else(err)?),
                SpaceKind::OmegaChain if name == "inf" => Point::Infinity,
                SpaceKind::OmegaChain => Point::Nat(name.parse().map_err(|_| err())?),
            };
            pts.insert(p);
        }
        Ok(PointSet::Finite(pts))
    }
}

enum Norm {
    Poset(BTreeSet<usize>),
    Chain(ChainSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum NatPart {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

/// Subsets of `N ∪ {∞}` whose trace on `N` is finite or cofinite. This
/// family is a Boolean algebra containing every descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ChainSet {
    nats: NatPart,
    infinity: bool,
}

impl ChainSet {
    fn from_descriptor(s: &PointSet) -> Result<Self> {
        Ok(match s {
            PointSet::Whole => ChainSet { nats: NatPart::Cofinite(BTreeSet::new()), infinity: true },
            PointSet::Interval(r) => ChainSet { nats: NatPart::Finite((0..=*r).collect()), infinity: false },
            PointSet::Cofinite { excluded, infinity } => {
                ChainSet { nats: NatPart::Cofinite(excluded.clone()), infinity: *infinity }
            }
            PointSet::Finite(pts) => {
                let mut nats = BTreeSet::new();
                let mut infinity = false;
                for x in pts {
                    match x {
                        Point::Nat(n) => {
                            nats.insert(*n);
                        }
                        Point::Infinity => infinity = true,
                        Point::Poset(_) => return Err(Error::BadDescriptor("poset point on the omega chain".into())),
                    }
                }
                ChainSet { nats: NatPart::Finite(nats), infinity }
            }
        })
    }

    fn contains(&self, x: &Point) -> bool {
        match x {
            Point::Infinity => self.infinity,
            Point::Nat(n) => match &self.nats {
                NatPart::Finite(s) => s.contains(n),
                NatPart::Cofinite(s) => !s.contains(n),
            },
            Point::Poset(_) => false,
        }
    }

    fn complement(&self) -> ChainSet {
        let nats = match &self.nats {
            NatPart::Finite(s) => NatPart::Cofinite(s.clone()),
            NatPart::Cofinite(s) => NatPart::Finite(s.clone()),
        };
        ChainSet { nats, infinity: !self.infinity }
    }

    fn is_zariski_closed(&self) -> bool {
        match (&self.nats, self.infinity) {
            (NatPart::Cofinite(ex), true) => ex.is_empty(),
            (NatPart::Finite(s), false) => s.iter().enumerate().all(|(i, &n)| n == i as u64),
            _ => false,
        }
    }

    fn to_descriptor(&self) -> PointSet {
        match &self.nats {
            NatPart::Finite(s) => {
                let mut pts: BTreeSet<Point> = s.iter().map(|&n| Point::Nat(n)).collect();
                if self.infinity {
                    pts.insert(Point::Infinity);
                }
                PointSet::Finite(pts)
            }
            NatPart::Cofinite(ex) => PointSet::Cofinite { excluded: ex.clone(), infinity: self.infinity },
        }
    }
}

/// Same points, constructible topology. The patch topology of a
/// constructible space is itself.
pub fn patch(space: &SpectralSpaceDesc) -> SpectralSpaceDesc {
    SpectralSpaceDesc { kind: space.kind.clone(), topology: Topology::Constructible }
}

/// A map of spaces given by a finite rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapRule {
    /// One image per point of a finite domain, in index order.
    Table(Vec<Point>),
    /// A map out of the omega chain that is constant on all large `n`.
    Eventually { exceptions: BTreeMap<u64, Point>, tail: Point, at_infinity: Point },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralMap {
    pub domain: SpectralSpaceDesc,
    pub codomain: SpectralSpaceDesc,
    pub rule: MapRule,
}

impl SpectralMap {
    pub fn identity(space: &SpectralSpaceDesc) -> Self {
        let rule = match &space.kind {
            SpaceKind::Poset(p) => MapRule::Table((0..p.len()).map(Point::Poset).collect()),
            SpaceKind::OmegaChain => {
                // the identity is not eventually constant; callers use it on finite spaces
                panic!("identity on the omega chain has no eventually-constant rule")
            }
        };
        SpectralMap { domain: space.clone(), codomain: space.clone(), rule }
    }

    pub fn constant(domain: &SpectralSpaceDesc, codomain: &SpectralSpaceDesc, value: Point) -> Self {
        let rule = match &domain.kind {
            SpaceKind::Poset(p) => MapRule::Table(vec![value; p.len()]),
            SpaceKind::OmegaChain => {
                MapRule::Eventually { exceptions: BTreeMap::new(), tail: value.clone(), at_infinity: value }
            }
        };
        SpectralMap { domain: domain.clone(), codomain: codomain.clone(), rule }
    }

    fn validate(&self) -> Result<()> {
        match (&self.domain.kind, &self.rule) {
            (SpaceKind::Poset(p), MapRule::Table(t)) => {
                if t.len() != p.len() {
                    return Err(Error::NotTotal(format!("{} images for {} points", t.len(), p.len())));
                }
                for x in t {
                    self.codomain.check_point(x)?;
                }
            }
            (SpaceKind::OmegaChain, MapRule::Eventually { exceptions, tail, at_infinity }) => {
                for x in exceptions.values().chain([tail, at_infinity]) {
                    self.codomain.check_point(x)?;
                }
            }
            _ => return Err(Error::NotTotal("rule shape does not match the domain".into())),
        }
        Ok(())
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.validate()?;
        self.domain.check_point(x)?;
        Ok(match (&self.rule, x) {
            (MapRule::Table(t), Point::Poset(i)) => t[*i].clone(),
            (MapRule::Eventually { exceptions, tail, .. }, Point::Nat(n)) => exceptions.get(n).unwrap_or(tail).clone(),
            (MapRule::Eventually { at_infinity, .. }, Point::Infinity) => at_infinity.clone(),
            _ => unreachable!(),
        })
    }

    fn image(&self) -> BTreeSet<Point> {
        match &self.rule {
            MapRule::Table(t) => t.iter().cloned().collect(),
            MapRule::Eventually { exceptions, tail, at_infinity } => {
                exceptions.values().chain([tail, at_infinity]).cloned().collect()
            }
        }
    }

    fn preimage(&self, target: &BTreeSet<Point>) -> PointSet {
        match &self.rule {
            MapRule::Table(t) => PointSet::Finite(
                t.iter().enumerate().filter(|(_, y)| target.contains(y)).map(|(i, _)| Point::Poset(i)).collect(),
            ),
            MapRule::Eventually { exceptions, tail, at_infinity } => {
                let infinity = target.contains(at_infinity);
                if target.contains(tail) {
                    let excluded = exceptions.iter().filter(|(_, y)| !target.contains(y)).map(|(n, _)| *n).collect();
                    PointSet::Cofinite { excluded, infinity }
                } else {
                    let mut pts: BTreeSet<Point> =
                        exceptions.iter().filter(|(_, y)| target.contains(y)).map(|(n, _)| Point::Nat(*n)).collect();
                    if infinity {
                        pts.insert(Point::Infinity);
                    }
                    PointSet::Finite(pts)
                }
            }
        }
    }
}

/// Whether a map out of a finite space sends closed sets to closed sets.
pub fn check_closed_map(m: &SpectralMap) -> Result<bool> {
    m.validate()?;
    let Some(pts) = m.domain.finite_points() else {
        return Err(Error::Invalid("closedness is only checked on finite domains".into()));
    };
    if pts.len() > 16 {
        return Err(Error::Invalid("domain too large for exhaustive enumeration".into()));
    }
    for mask in 0u32..(1 << pts.len()) {
        let s: BTreeSet<Point> =
            pts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect();
        if !m.domain.is_closed(&PointSet::Finite(s.clone()))? {
            continue;
        }
        let image: BTreeSet<Point> = s.iter().map(|x| m.apply(x)).collect::<Result<_>>()?;
        if !m.codomain.is_closed(&PointSet::Finite(image))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether a map is continuous and pulls quasi-compact opens back
/// to quasi-compact sets.
///
/// Only the traces of closed (resp. quasi-compact open) sets on the finite
/// image matter, so every subset `T` of the image is tested: if `T` is the
/// trace of a closed set its preimage must be closed, and if it is the
/// trace of a quasi-compact open its preimage must be quasi-compact.
pub fn check_spectral_map(m: &SpectralMap) -> Result<bool> {
    m.validate()?;
    let image: Vec<Point> = m.image().into_iter().collect();
    if image.len() > 16 {
        return Err(Error::Invalid("image too large for exhaustive trace enumeration".into()));
    }
    let cod = &m.codomain;
    let all_opens_qc = !matches!((&cod.kind, cod.topology), (SpaceKind::OmegaChain, Topology::Constructible));
    let is_closed_trace = |t: &BTreeSet<Point>| -> Result<bool> {
        let cl = cod.closure(t)?;
        for x in &image {
            if cod.contains(&cl, x)? != t.contains(x) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for mask in 0u32..(1 << image.len()) {
        let t: BTreeSet<Point> =
            image.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect();
        let pre = m.preimage(&t);
        if is_closed_trace(&t)? && !m.domain.is_closed(&pre)? {
            return Ok(false);
        }
        let rest: BTreeSet<Point> = image.iter().filter(|x| !t.contains(x)).cloned().collect();
        let qc_open_trace = !all_opens_qc || is_closed_trace(&rest)?;
        if qc_open_trace && !m.domain.is_quasi_compact(&pre)? {
            return Ok(false);
        }
    }
    Ok(true)
}
