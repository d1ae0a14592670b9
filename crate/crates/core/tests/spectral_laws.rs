use std::collections::BTreeSet;

use proptest::prelude::*;
use tensor_spectra::spectral::{patch, FinitePoset, Point, PointSet, SpaceKind, SpectralSpaceDesc};

/// A random partial order on `n ≤ 5` points generated by pairs `i < j`.
fn poset() -> impl Strategy<Value = FinitePoset> {
    (1usize..=5).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let chosen: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
            FinitePoset::generated((0..n).map(|i| format!("p{i}")).collect(), &chosen).unwrap()
        })
    })
}

fn subset(n: usize, mask: u64) -> (BTreeSet<usize>, PointSet) {
    let idx: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let pts = PointSet::Finite(idx.iter().map(|&i| Point::Poset(i)).collect());
    (idx, pts)
}

proptest! {
    #[test]
    fn zariski_closed_sets_are_up_sets(p in poset()) {
        let n = p.len();
        let space = SpectralSpaceDesc::zariski(SpaceKind::Poset(p.clone()));
        let cons = patch(&space);
        for mask in 0u64..1 << n {
            let (idx, pts) = subset(n, mask);
            prop_assert_eq!(space.is_closed(&pts).unwrap(), p.is_up_set(&idx));
            prop_assert!(cons.is_closed(&pts).unwrap());
        }
        prop_assert_eq!(patch(&cons), cons.clone());
        prop_assert!(cons.is_hausdorff());
    }
}

#[test]
fn omega_chain_patch_is_idempotent() {
    let chain = SpectralSpaceDesc::omega_chain();
    let cons = patch(&chain);
    assert_eq!(patch(&cons), cons);
}
