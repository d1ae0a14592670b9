use proptest::prelude::*;
use tensor_spectra::boolean_flat::{BoolElem, ProductRing, RingIdeal};
use tensor_spectra::field::{FMat, FieldKind};
use tensor_spectra::projcat::{
    enumerate_serre_ideals, ideal_of_serre, quotient_map, serre_of_ideal, support, BlockMorphism, DimVector,
};

const K: usize = 3;

/// A morphism of `A(Q^3)` with object dimensions ≤ 2 and small integer entries;
/// each block is zeroed with probability about 1/3.
fn morphism_q() -> impl Strategy<Value = BlockMorphism> {
    let dims = prop::collection::vec(0usize..=2, K);
    (dims.clone(), dims).prop_flat_map(|(s, t)| {
        let blocks: Vec<_> = (0..K).map(|i| (0u8..3, prop::collection::vec(-3i64..=3, s[i] * t[i]))).collect();
        (Just(s), Just(t), blocks).prop_map(|(s, t, blocks)| {
            let q = FieldKind::Rationals;
            let ring = ProductRing::power(q, K).unwrap();
            let mats = blocks
                .into_iter()
                .enumerate()
                .map(|(i, (zero, entries))| {
                    let data = entries.into_iter().map(|x| if zero == 0 { q.zero() } else { q.from_int(x) }).collect();
                    FMat::from_rows(q, t[i], s[i], data).unwrap()
                })
                .collect();
            BlockMorphism::new(&ring, DimVector::new(s), DimVector::new(t), mats).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn tensor_vanishes_iff_supports_are_disjoint(f in morphism_q(), g in morphism_q()) {
        let disjoint = support(&f).and(&support(&g)).is_zero();
        prop_assert_eq!(f.tensor(&g).unwrap().is_zero(), disjoint);
    }

    #[test]
    fn maximal_quotients_are_jointly_faithful(f in morphism_q()) {
        let ring = ProductRing::power(FieldKind::Rationals, K).unwrap();
        let killed_by_all = (0..K).all(|j| {
            let m = RingIdeal::supported_in(&ring, BoolElem::from_bits(K, ((1 << K) - 1) & !(1 << j)));
            quotient_map(&f, &m).is_zero()
        });
        prop_assert_eq!(killed_by_all, f.is_zero());
    }
}

#[test]
fn serre_round_trip_for_up_to_five_factors() {
    for k in 1..=5 {
        let ring = ProductRing::power(FieldKind::Rationals, k).unwrap();
        let serre = enumerate_serre_ideals(&ring).unwrap();
        assert_eq!(serre.len(), 1 << k);
        for bits in 0..1u64 << k {
            let ideal = RingIdeal::supported_in(&ring, BoolElem::from_bits(k, bits));
            let s = serre_of_ideal(&ideal);
            assert_eq!(ideal_of_serre(&ring, &s.support).unwrap(), ideal);
        }
    }
}
