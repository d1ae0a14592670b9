//! Exact scalars: arbitrary-precision rationals, dense polynomials in `t`,
//! and the tagged [`Scalar`] used as a morphism coefficient.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse { what: "rational", input: s.to_string() };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Dense univariate polynomial over Q, coefficients indexed by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, alpha: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * alpha + c)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division over Q. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `t^4 - t^2` or `-3/2*t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn check_square<T>(m: &[Vec<T>]) -> Result<()> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare { rows: n, row, len: r.len() });
        }
    }
    Ok(())
}

/// Determinant of a square polynomial matrix, computed modulo enough
/// 62-bit primes to recover every coefficient by Chinese remaindering.
///
/// Each row is first scaled to integer coefficients. The absolute values of
/// the coefficients of the determinant are then bounded by the product of
/// the row sums of coefficient 1-norms.
pub fn poly_matrix_det(m: &[Vec<Poly>]) -> Result<Poly> {
    use rayon::prelude::*;
    check_square(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut scale = BigInt::one();
    let mut bound = BigInt::one();
    let rows: Vec<Vec<Vec<BigInt>>> = m
        .iter()
        .map(|row| {
            let l = row.iter().flat_map(|e| e.coeffs()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            let ints: Vec<Vec<BigInt>> =
                row.iter().map(|e| e.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()).collect();
            bound *= ints.iter().flatten().fold(BigInt::zero(), |acc, c| acc + c.abs());
            ints
        })
        .collect();
    if bound.is_zero() {
        return Ok(Poly::zero());
    }
    let degree: usize = m.iter().map(|row| row.iter().filter_map(Poly::degree).max().unwrap_or(0)).sum();
    let mut primes = Vec::new();
    let mut modulus = BigInt::one();
    let mut candidate = (1u64 << 62) - 1;
    let target = &bound * 2u32;
    while modulus <= target {
        candidate -= 2;
        if modular::is_prime(candidate) {
            primes.push(candidate);
            modulus *= candidate;
        }
    }
    let residues: Vec<Vec<u64>> = primes.par_iter().map(|&p| modular::det_coeffs(&rows, degree, p)).collect();
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    let mut acc_mod = BigInt::one();
    for (&p, res) in primes.iter().zip(&residues) {
        let pb = BigInt::from(p);
        // x ≡ c (mod acc_mod), x ≡ r (mod p)
        let inv = BigInt::from(modular::inverse((&acc_mod % &pb).to_u64_digits().1.first().copied().unwrap_or(0), p));
        for (c, &r) in coeffs.iter_mut().zip(res) {
            let diff = (BigInt::from(r) - (&*c % &pb)).mod_floor(&pb);
            *c += &acc_mod * ((diff * &inv) % &pb);
        }
        acc_mod *= &pb;
    }
    let half = &acc_mod / 2u32;
    let coeffs =
        coeffs.into_iter().map(|c| Rational::new(if c > half { c - &acc_mod } else { c }, scale.clone())).collect();
    Ok(Poly::from_coeffs(coeffs))
}

mod modular {
    use num_bigint::BigInt;
    use num_integer::Integer;

    fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        r
    }

    pub(super) fn inverse(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    /// Deterministic Miller-Rabin for 64-bit integers.
    pub(super) fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        for b in BASES {
            if n.is_multiple_of(b) {
                return n == b;
            }
        }
        let (mut d, mut s) = (n - 1, 0);
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        'outer: for b in BASES {
            let mut x = pow(b, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x, n);
                if x == n - 1 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    fn det(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
        let n = a.len();
        let mut det = 1;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            if piv != k {
                a.swap(k, piv);
                det = p - det;
            }
            det = mul(det, a[k][k], p);
            let inv = inverse(a[k][k], p);
            let (top, rest) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in rest {
                if row[k] == 0 {
                    continue;
                }
                let f = mul(row[k], inv, p);
                for (x, &y) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                    *x = (*x + p - mul(f, y, p)) % p;
                }
            }
        }
        det % p
    }

    /// Coefficients of `det(rows)` modulo `p`, from its values at `0..=degree`.
    pub(super) fn det_coeffs(rows: &[Vec<Vec<BigInt>>], degree: usize, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let reduce = |c: &BigInt| -> u64 { c.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0) };
        let entries: Vec<Vec<Vec<u64>>> =
            rows.iter().map(|row| row.iter().map(|e| e.iter().map(reduce).collect()).collect()).collect();
        let points: Vec<u64> = (0..=degree as u64).collect();
        let mut values: Vec<u64> = points
            .iter()
            .map(|&x| {
                let m = entries
                    .iter()
                    .map(|row| row.iter().map(|e| e.iter().rev().fold(0, |acc, &c| (mul(acc, x, p) + c) % p)).collect())
                    .collect();
                det(m, p)
            })
            .collect();
        // Newton divided differences, then expansion into the monomial basis
        let n = points.len();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = (values[i] + p - values[i - 1]) % p;
                values[i] = mul(num, inverse(points[i] - points[i - level], p), p);
            }
        }
        let mut acc = vec![0u64; n];
        for i in (0..n).rev() {
            // acc = acc * (t - x_i) + values[i]
            let x = points[i];
            for k in (0..n).rev() {
                let lower = if k > 0 { acc[k - 1] } else { 0 };
                acc[k] = (lower + p - mul(acc[k], x, p)) % p;
            }
            acc[0] = (acc[0] + values[i]) % p;
        }
        acc
    }
}

/// Determinant of a square polynomial matrix by Bareiss fraction-free
/// elimination. Every intermediate division is exact.
pub fn poly_matrix_det_bareiss(m: &[Vec<Poly>]) -> Result<Poly> {
    check_square(m)?;
    let n = m.len();
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Integer roots of a rational polynomial, together with whether these
/// account for the whole polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRoots {
    pub roots: BTreeSet<BigInt>,
    /// Every complex root of the polynomial is an integer.
    pub all_integer: bool,
    /// What is left after dividing out `(t - r)` for every root found,
    /// with multiplicity. Constant iff `all_integer`.
    pub residual: Poly,
}

const ROOT_SCAN_LIMIT: u64 = 1 << 22;

pub fn integer_roots(p: &Poly) -> Result<IntegerRoots> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut q: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();

    let mut roots = BTreeSet::new();
    let zeros = q.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.insert(BigInt::zero());
        q.drain(..zeros);
    }

    if q.len() > 1 {
        let bound = root_bound(&q);
        let a0 = q[0].abs();
        for cand in divisor_candidates(&a0, &bound)? {
            for r in [cand.clone(), -cand] {
                if horner_int(&q, &r).is_zero() {
                    roots.insert(r);
                }
            }
        }
        for r in roots.iter().filter(|r| !r.is_zero()) {
            while q.len() > 1 && horner_int(&q, r).is_zero() {
                q = synthetic_div(&q, r);
            }
        }
    }

    let residual = Poly::from_coeffs(q.into_iter().map(|c| Rational::new(c, lcm.clone())).collect());
    let all_integer = residual.degree() == Some(0);
    Ok(IntegerRoots { roots, all_integer, residual })
}

fn horner_int(q: &[BigInt], r: &BigInt) -> BigInt {
    q.iter().rev().fold(BigInt::zero(), |acc, c| acc * r + c)
}

/// Divides by `(t - r)`; the caller guarantees `r` is a root.
fn synthetic_div(q: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = q.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in (1..=n).rev() {
        carry = &q[k] + carry * r;
        out[k - 1] = carry.clone();
    }
    out
}

/// Fujiwara-style bound `2 * max |a_{n-i} / a_n|^(1/i)` on root moduli,
/// rounded up to an integer.
fn root_bound(q: &[BigInt]) -> BigInt {
    let n = q.len() - 1;
    let lead = q[n].abs();
    let mut best = BigInt::zero();
    for i in 1..=n {
        let c = q[n - i].abs();
        if c.is_zero() {
            continue;
        }
        let ratio = c.div_ceil(&lead);
        let root = ratio.nth_root(i as u32) + BigInt::one();
        best = best.max(root);
    }
    best * 2
}

/// Positive divisors of `a0` that can be integer roots (at most `bound`).
fn divisor_candidates(a0: &BigInt, bound: &BigInt) -> Result<Vec<BigInt>> {
    let limit = bound.clone().min(a0.clone());
    let scan = BigInt::from(ROOT_SCAN_LIMIT);
    let mut out = Vec::new();
    let top = limit.clone().min(scan.clone());
    let mut d = BigInt::one();
    while d <= top {
        if (a0 % &d).is_zero() {
            out.push(d.clone());
        }
        d += 1;
    }
    if limit > scan {
        // large divisors a0 / e for small e; complete when a0 <= scan^2
        if *a0 > &scan * &scan {
            return Err(Error::RootSearchBudget { bound: bound.to_string() });
        }
        let mut e = BigInt::one();
        while e <= scan {
            if (a0 % &e).is_zero() {
                let big = a0 / &e;
                if big > scan && big <= limit {
                    out.push(big);
                }
            }
            e += 1;
        }
    }
    Ok(out)
}

/// Which coefficient ring a computation lives over: `Q[t]` with `t`
/// generic, or `Q` after substituting `t = alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopParam {
    Generic,
    At(Rational),
}

impl LoopParam {
    pub fn zero(&self) -> Scalar {
        match self {
            LoopParam::Generic => Scalar::Generic(Poly::zero()),
            LoopParam::At(_) => Scalar::Specialized(Rational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> Scalar {
        match self {
            LoopParam::Generic => Scalar::Generic(Poly::constant(r)),
            LoopParam::At(_) => Scalar::Specialized(r),
        }
    }

    /// The value of `k` closed loops: `t^k` or `alpha^k`.
    pub fn loops(&self, k: usize) -> Scalar {
        match self {
            LoopParam::Generic => Scalar::Generic(Poly::monomial(Rational::one(), k)),
            LoopParam::At(a) => Scalar::Specialized(num_traits::pow(a.clone(), k)),
        }
    }

    pub fn admits(&self, s: &Scalar) -> bool {
        matches!((self, s), (LoopParam::Generic, Scalar::Generic(_)) | (LoopParam::At(_), Scalar::Specialized(_)))
    }
}

impl fmt::Display for LoopParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopParam::Generic => write!(f, "generic"),
            LoopParam::At(a) => write!(f, "{}", fmt_rational(a)),
        }
    }
}

/// A coefficient: a polynomial in the generic parameter, or a rational
/// once the parameter has been specialised.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Generic(Poly),
    Specialized(Rational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Generic(p) => p.is_zero(),
            Scalar::Specialized(r) => r.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Specialized(r) => Some(r),
            Scalar::Generic(_) => None,
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        match self {
            Scalar::Generic(p) => Some(p),
            Scalar::Specialized(_) => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        match self {
            Scalar::Generic(p) => Scalar::Generic(p.scale(c)),
            Scalar::Specialized(r) => Scalar::Specialized(r * c),
        }
    }

    /// Substitutes `t = alpha`; specialised scalars are returned unchanged.
    pub fn specialize(&self, alpha: &Rational) -> Rational {
        match self {
            Scalar::Generic(p) => p.eval(alpha),
            Scalar::Specialized(r) => r.clone(),
        }
    }

    fn variant(&self) -> &'static str {
        match self {
            Scalar::Generic(_) => "generic",
            Scalar::Specialized(_) => "specialized",
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Generic(p) => write!(f, "{p}"),
            Scalar::Specialized(r) => write!(f, "{}", fmt_rational(r)),
        }
    }
}

// Mixed-variant arithmetic is a logic error: morphisms check their
// `LoopParam` before combining coefficients.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Generic(a), Scalar::Generic(b)) => Scalar::Generic(a + b),
            (Scalar::Specialized(a), Scalar::Specialized(b)) => Scalar::Specialized(a + b),
            _ => panic!("mixed scalar variants: {} + {}", self.variant(), rhs.variant()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Generic(a), Scalar::Generic(b)) => Scalar::Generic(a * b),
            (Scalar::Specialized(a), Scalar::Specialized(b)) => Scalar::Specialized(a * b),
            _ => panic!("mixed scalar variants: {} * {}", self.variant(), rhs.variant()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Generic(p) => Scalar::Generic(-p),
            Scalar::Specialized(r) => Scalar::Specialized(-r),
        }
    }
}
