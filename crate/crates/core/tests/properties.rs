//! Property tests over random relabellings, random partial bijections and
//! random members of the enumeration pools.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::{select, subsequence};

use rsg::canon::{are_isomorphic, canonical_form};
use rsg::enumerate::{enumerate_premorphisms, enumerate_semilattices, restriction_semigroups_up_to, EnumConfig};
use rsg::partial_maps::from_inverse;
use rsg::premorphism::{
    left_action_to_premorph, left_to_right_action, premorph_to_left_action, right_to_left_action, Premorph,
};
use rsg::{PBij, RSemigroup, Semilattice};

fn algebras() -> &'static [RSemigroup] {
    static POOL: OnceLock<Vec<RSemigroup>> = OnceLock::new();
    POOL.get_or_init(|| restriction_semigroups_up_to(4, &EnumConfig::default()).unwrap())
}

fn lattices() -> &'static [Semilattice] {
    static POOL: OnceLock<Vec<Semilattice>> = OnceLock::new();
    POOL.get_or_init(|| (1..=5).flat_map(|n| enumerate_semilattices(n, &EnumConfig::default()).unwrap()).collect())
}

fn premorphisms() -> &'static [Premorph] {
    static POOL: OnceLock<Vec<Premorph>> = OnceLock::new();
    POOL.get_or_init(|| {
        let cfg = EnumConfig::default();
        restriction_semigroups_up_to(3, &cfg)
            .unwrap()
            .iter()
            .flat_map(|s| enumerate_premorphisms(s, 2, &[], &cfg).unwrap())
            .collect()
    })
}

fn algebra() -> impl Strategy<Value = RSemigroup> {
    select(algebras().to_vec())
}

fn algebra_with_perm() -> impl Strategy<Value = (RSemigroup, Vec<usize>)> {
    algebra().prop_flat_map(|s| {
        let n = s.order();
        (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn pbij(carrier: usize) -> impl Strategy<Value = PBij> {
    (subsequence((0..carrier).collect::<Vec<_>>(), 0..=carrier), Just((0..carrier).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(move |(dom, images)| {
            let pairs: Vec<(usize, usize)> = dom.iter().zip(&images).map(|(&x, &y)| (x, y)).collect();
            PBij::from_pairs(carrier, &pairs).unwrap()
        })
}

proptest! {
    #[test]
    fn relabelling_preserves_validity_and_canonical_form((s, perm) in algebra_with_perm()) {
        let t = s.relabel(&perm);
        let rebuilt = RSemigroup::new(t.order(), t.mul_table().to_vec(), t.star_table().to_vec(), t.plus_table().to_vec());
        prop_assert!(rebuilt.is_ok());
        prop_assert!(are_isomorphic(&s, &t));
        prop_assert_eq!(canonical_form(&s, &[]).key, canonical_form(&t, &[]).key);
        prop_assert_eq!(s.is_proper().unwrap(), t.is_proper().unwrap());
    }

    #[test]
    fn compatible_elements_are_sigma_related(s in algebra()) {
        let sigma = s.sigma().unwrap().relation(s.order());
        for (a, b) in s.compatibility().pairs() {
            prop_assert!(sigma.contains(a, b));
        }
        prop_assert!(s.natural_order().unwrap().is_partial_order());
    }

    #[test]
    fn sigma_quotient_is_reduced(s in algebra()) {
        let (q, map) = s.sigma_quotient().unwrap();
        prop_assert!(q.is_reduced());
        prop_assert!(map.surjective);
    }

    #[test]
    fn downset_is_monotone_idempotent_and_an_ideal(y in select(lattices().to_vec()), a in 0u32..32, b in 0u32..32) {
        let full = (1u32 << y.size()) - 1;
        let (a, b) = (a & full, b & full);
        let (da, dab) = (y.downset(a), y.downset(a | b));
        prop_assert_eq!(da & a, a);
        prop_assert_eq!(da & dab, da);
        prop_assert_eq!(y.downset(da), da);
        prop_assert!(y.is_order_ideal(da));
    }

    #[test]
    fn partial_bijection_laws(f in pbij(4), g in pbij(4), h in pbij(4)) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.inverse().inverse(), f);
        prop_assert_eq!(f.compose(&f.inverse()).compose(&f), f);
        prop_assert!(f.star().is_partial_identity() && f.plus().is_partial_identity());
        prop_assert_eq!(f.star().domain(), f.domain());
        prop_assert_eq!(f.plus().domain(), f.range());
        prop_assert_eq!(f.restrict(g.domain()).le(&f), true);
        prop_assert_eq!(f.le(&g), f == g.restrict(f.domain()));
    }

    #[test]
    fn actions_round_trip(phi in select(premorphisms().to_vec())) {
        let left = premorph_to_left_action(&phi).unwrap();
        prop_assert_eq!(&left_action_to_premorph(&phi.source, &left).unwrap(), &phi);
        let right = left_to_right_action(&phi.source, &left).unwrap();
        prop_assert_eq!(right_to_left_action(&phi.source, &right).unwrap(), left);
    }

    #[test]
    fn inverse_algebras_have_idempotent_projections(s in algebra()) {
        if let Some(inv) = s.inverses() {
            let t = from_inverse(s.order(), s.mul_table(), &inv).unwrap();
            let idempotents: Vec<usize> = (0..s.order()).filter(|&a| s.mul(a, a) == a).collect();
            prop_assert_eq!(t.projections(), idempotents);
        }
    }
}
