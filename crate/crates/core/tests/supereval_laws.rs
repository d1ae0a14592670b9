mod common;

use std::collections::BTreeSet;

use common::{balanced_triple, morphism, word_with_balance};
use proptest::prelude::*;

use tensor_spectra::idealcalc::{tr_star, tr_star_member, CenterIdeal, ProbeWindow};
use tensor_spectra::scalars::{int, LoopParam};
use tensor_spectra::supereval::{eval_morphism, kernel_basis};
use tensor_spectra::wbcat::{HomSpace, WBMorphism, Word};

const SPACES: [(usize, usize); 4] = [(1, 0), (0, 1), (1, 1), (2, 1)];

fn pair(max: usize) -> impl Strategy<Value = (Word, Word)> {
    (-1isize..=1).prop_flat_map(move |bal| (word_with_balance(bal, max), word_with_balance(bal, max)))
}

fn triple(max: usize) -> impl Strategy<Value = (WBMorphism, WBMorphism, WBMorphism)> {
    balanced_triple(max).prop_flat_map(|(a, b, c)| {
        let p = LoopParam::Generic;
        (morphism(a.clone(), b.clone(), p.clone()), morphism(b, c.clone(), p.clone()), morphism(c, a, p))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_preserves_composition(((f, g, _), (p, q)) in (triple(3), prop::sample::select(SPACES.to_vec()))) {
        let gf = eval_morphism(&g.compose(&f).unwrap(), p, q).unwrap();
        let prod = eval_morphism(&g, p, q).unwrap().compose(&eval_morphism(&f, p, q).unwrap()).unwrap();
        prop_assert_eq!(gf, prod);
    }

    #[test]
    fn evaluation_preserves_tensor(((f, _, h), (p, q)) in (triple(2), prop::sample::select(SPACES.to_vec()))) {
        let fh = eval_morphism(&f.tensor(&h).unwrap(), p, q).unwrap();
        let kron = eval_morphism(&f, p, q).unwrap().tensor(&eval_morphism(&h, p, q).unwrap()).unwrap();
        prop_assert_eq!(fh, kron);
    }

    #[test]
    fn kernels_descend_along_the_chain((a, b) in pair(3), (p, q) in prop::sample::select(vec![(1usize, 0usize), (0, 1), (1, 1), (2, 0)])) {
        let small = kernel_basis(&a, &b, p + 1, q + 1).unwrap();
        let big = kernel_basis(&a, &b, p, q).unwrap();
        prop_assert!(small.is_subspace_of(&big));
    }

    #[test]
    fn kernel_of_even_space_is_the_trace_radical((a, b) in pair(3), n in 1usize..=2) {
        let kernel = kernel_basis(&a, &b, n, 0).unwrap();
        let space = HomSpace::new(&a, &b);
        let alpha = int(n as i64);
        for v in kernel.basis() {
            prop_assert!(tr_star_member(&WBMorphism::from_vector(&space, &alpha, v), &alpha).unwrap());
        }
        let objects: BTreeSet<Word> = [Word::empty(), a.clone(), a.dual(), b.clone(), b.dual()].into_iter().collect();
        let window = ProbeWindow::new(objects.into_iter().collect::<Vec<_>>()).unwrap();
        let radical = tr_star(CenterIdeal::Zero, &window, &alpha);
        prop_assert_eq!(radical.span(&a, &b).unwrap(), &kernel);
    }
}
