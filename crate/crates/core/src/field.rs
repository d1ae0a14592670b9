//! The two kinds of coefficient field used by the ring models (Q and F_p)
//! and small dense matrices over them.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalars::{fmt_rational, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FieldKind {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(Error::Invalid(format!("{p} is not prime")))
        }
    }

    pub fn zero(self) -> FieldElem {
        self.from_int(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> FieldElem {
        match self {
            FieldKind::Rationals => FieldElem::Q(int(n)),
            FieldKind::Prime(p) => FieldElem::Fp { value: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// All elements, for finite fields only.
    pub fn elements(self) -> Option<Vec<FieldElem>> {
        match self {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some((0..p).map(|v| FieldElem::Fp { value: v, p }).collect()),
        }
    }

    /// A random element; rationals are drawn as small integers over small denominators.
    pub fn random<R: Rng>(self, rng: &mut R) -> FieldElem {
        match self {
            FieldKind::Rationals => {
                let n: i64 = rng.gen_range(-3..=3);
                let d: i64 = rng.gen_range(1..=2);
                FieldElem::Q(Rational::new(n.into(), d.into()))
            }
            FieldKind::Prime(p) => FieldElem::Fp { value: rng.gen_range(0..p), p },
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Q(Rational),
    Fp { value: u64, p: u64 },
}

impl FieldElem {
    pub fn field(&self) -> FieldKind {
        match self {
            FieldElem::Q(_) => FieldKind::Rationals,
            FieldElem::Fp { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { value: a, p }, FieldElem::Fp { value: b, p: q }) if p == q => {
                FieldElem::Fp { value: (a + b) % p, p: *p }
            }
            _ => panic!("field mismatch: {self} + {o}"),
        }
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { value: a, p }, FieldElem::Fp { value: b, p: q }) if p == q => {
                FieldElem::Fp { value: (a * b) % p, p: *p }
            }
            _ => panic!("field mismatch: {self} * {o}"),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { value, p } => FieldElem::Fp { value: (p - value) % p, p: *p },
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            FieldElem::Fp { value, p } => {
                // Fermat: v^(p-2)
                let (mut base, mut e, mut acc) = (*value, p - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                FieldElem::Fp { value: acc, p: *p }
            }
        })
    }

    pub fn parse(field: FieldKind, s: &str) -> Result<FieldElem> {
        match field {
            FieldKind::Rationals => Ok(FieldElem::Q(crate::scalars::parse_rational(s)?)),
            FieldKind::Prime(_) => {
                let n: i64 =
                    s.trim().parse().map_err(|_| Error::Parse { what: "field element", input: s.to_string() })?;
                Ok(field.from_int(n))
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{}", fmt_rational(r)),
            FieldElem::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMat {
    field: FieldKind,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl FMat {
    pub fn zero(field: FieldKind, rows: usize, cols: usize) -> Self {
        FMat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldKind, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldKind, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::Shape(format!("entries outside {field}")));
        }
        Ok(FMat { field, rows, cols, data })
    }

    pub fn random<R: Rng>(field: FieldKind, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        FMat { field, rows, cols, data }
    }

    /// Every matrix of the given shape over a finite field.
    pub fn all(field: FieldKind, rows: usize, cols: usize) -> Vec<FMat> {
        let elems = field.elements().expect("enumeration needs a finite field");
        let mut out = vec![Vec::new()];
        for _ in 0..rows * cols {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<FieldElem>| {
                    elems.iter().map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|data| FMat { field, rows, cols, data }).collect()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn mul(&self, o: &FMat) -> FMat {
        assert_eq!(self.cols, o.rows, "matrix shapes do not compose");
        let mut out = FMat::zero(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(&a.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &FMat) -> FMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        FMat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn kron(&self, o: &FMat) -> FMat {
        let mut out = FMat::zero(self.field, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, a.mul(o.get(k, l)));
                    }
                }
            }
        }
        out
    }

    fn echelon(&self) -> (FMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn inverse(&self) -> Option<FMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = FMat::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (e, pivots) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FMat::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Display for FMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FieldKind::prime(5).unwrap();
        let a = f5.from_int(3);
        assert_eq!(a.mul(&a.inv().unwrap()), f5.one());
        assert_eq!(a.add(&f5.from_int(2)), f5.zero());
        assert_eq!(f5.from_int(-1), f5.from_int(4));
        assert!(FieldKind::prime(6).is_err());
    }

    #[test]
    fn inverse_and_rank() {
        let q = FieldKind::Rationals;
        let m = FMat::from_rows(q, 2, 2, [1, 2, 3, 4].iter().map(|&x| q.from_int(x)).collect()).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FMat::identity(q, 2));
        let s = FMat::from_rows(q, 2, 2, [1, 2, 2, 4].iter().map(|&x| q.from_int(x)).collect()).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_none());
        assert_eq!(FMat::all(FieldKind::Prime(2), 2, 2).len(), 16);
    }
}
