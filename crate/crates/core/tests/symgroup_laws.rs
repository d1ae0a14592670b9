use num_traits::Zero;
use proptest::prelude::*;
use tensor_spectra::idealcalc::TensorPrimeTag;
use tensor_spectra::scalars::{int, LoopParam, Rational};
use tensor_spectra::symgroup::{factorial, hook_dimension, young_symmetrizer, GroupAlgElem, Partition, Permutation};
use tensor_spectra::wbcat::embed_group_elem;

fn perms(r: usize) -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    let all = Permutation::all(r);
    let pick = prop::sample::select(all);
    (pick.clone(), pick.clone(), pick)
}

fn elem(r: usize) -> impl Strategy<Value = GroupAlgElem> {
    prop::collection::vec((prop::sample::select(Permutation::all(r)), -3i64..=3), 0..=4)
        .prop_map(move |t| GroupAlgElem::from_terms(r, t.into_iter().map(|(p, c)| (p, int(c)))))
}

proptest! {
    #[test]
    fn permutations_multiply_in_the_group_algebra((a, b, _) in perms(4)) {
        let lhs = GroupAlgElem::from_perm(a.clone()).mul(&GroupAlgElem::from_perm(b.clone()));
        prop_assert_eq!(lhs, GroupAlgElem::from_perm(a.compose(&b)));
    }

    #[test]
    fn group_algebra_is_associative_and_distributive(x in elem(3), y in elem(3), z in elem(3)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
    }
}

#[test]
fn symmetrizers_square_to_a_multiple() {
    for r in 1..=5 {
        for lambda in Partition::all(r) {
            let c = young_symmetrizer(&lambda);
            let k = Rational::new(factorial(r), hook_dimension(&lambda));
            assert_eq!(c.mul(&c), c.scale(&k), "{lambda}");
            assert_eq!(c.identity_coeff(), int(1));
        }
    }
}

#[test]
fn squares_of_dimensions_sum_to_the_group_order() {
    for r in 1..=6 {
        let total = Partition::all(r)
            .iter()
            .map(|l| hook_dimension(l).pow(2))
            .fold(Zero::zero(), |a: num_bigint::BigInt, b| a + b);
        assert_eq!(total, factorial(r));
    }
}

/// Other tableaux give conjugate symmetrizers; membership in the chain
/// primes does not depend on the choice.
#[test]
fn membership_is_conjugation_invariant() {
    let p = LoopParam::At(int(1));
    let primes = [TensorPrimeTag::FunctorKernel { p: 1, q: 0 }, TensorPrimeTag::FunctorKernel { p: 2, q: 1 }];
    for r in 1..=4 {
        for lambda in Partition::all(r) {
            let c = young_symmetrizer(&lambda);
            for prime in &primes {
                let base = prime.contains(&embed_group_elem(&c, &p)).unwrap();
                for g in Permutation::all(r) {
                    let conj = embed_group_elem(&c.conjugate_by(&g), &p);
                    assert_eq!(prime.contains(&conj).unwrap(), base, "{lambda} by {g} in {prime}");
                }
            }
        }
    }
}
