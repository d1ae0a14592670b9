#![allow(dead_code)]

use proptest::prelude::*;
use tensor_spectra::scalars::{int, LoopParam};
use tensor_spectra::wbcat::{HomSpace, WBMorphism, Word};

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn word_of(bits: &[bool]) -> Word {
    let s: String = bits.iter().map(|&b| if b { 'u' } else { 'd' }).collect();
    s.parse().unwrap()
}

pub fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(|b| word_of(&b))
}

/// A word of length at most `max` with the given balance (ups minus downs).
/// `max` must be at least `|balance|`.
pub fn word_with_balance(balance: isize, max: usize) -> impl Strategy<Value = Word> {
    let lengths: Vec<usize> =
        (0..=max).filter(|&l| l as isize >= balance.abs() && (l as isize - balance) % 2 == 0).collect();
    prop::sample::select(lengths).prop_flat_map(move |len| {
        let ups = ((len as isize + balance) / 2) as usize;
        let letters: Vec<bool> = (0..len).map(|i| i < ups).collect();
        Just(letters).prop_shuffle().prop_map(|b| word_of(&b))
    })
}

/// A sparse combination of up to three diagrams with coefficients in -2..=2.
pub fn morphism(a: Word, b: Word, param: LoopParam) -> impl Strategy<Value = WBMorphism> {
    let dim = HomSpace::new(&a, &b).dim();
    let terms =
        if dim == 0 { Just(Vec::new()).boxed() } else { prop::collection::vec((0..dim, -2i64..=2), 0..=3).boxed() };
    terms.prop_map(move |terms| {
        let space = HomSpace::new(&a, &b);
        let mut m = WBMorphism::zero(&a, &b, &param);
        for (k, c) in terms {
            let d = WBMorphism::from_diagram(space.diagram(k), &param).scale(&param.from_rational(int(c))).unwrap();
            m = m.add(&d).unwrap();
        }
        m
    })
}

/// Three words `a, b, c` of equal balance.
pub fn balanced_triple(max: usize) -> impl Strategy<Value = (Word, Word, Word)> {
    (-1isize..=1).prop_flat_map(move |bal| {
        (word_with_balance(bal, max), word_with_balance(bal, max), word_with_balance(bal, max))
    })
}
