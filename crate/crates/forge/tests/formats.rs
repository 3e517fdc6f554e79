use proptest::prelude::*;

use segal_core::alg::{monotone_chains, AlgMorphism};
use segal_core::finset::{FinMap, FinSet};
use segal_core::hall::{integer, IncidenceElement};
use segal_core::poset::FinPoset;
use segal_core::segal::{check_2segal_dk, check_2segal_gkt};
use segal_forge::corpus::{random_complex, rng};
use segal_forge::json::{parse, AlgMorphismDoc, ChainDoc, FinMapDoc, FunctionDoc, PosetDoc, SSetDoc};

fn poset(max: usize) -> impl Strategy<Value = FinPoset> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).zip(bits).filter_map(|(p, b)| b.then_some(p)).collect();
            FinPoset::generated(FinSet::range(n), &pairs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_survive_json(seed in any::<u64>()) {
        let x = random_complex(&mut rng(seed), 3).unwrap();
        let text = serde_json::to_string(&SSetDoc::from_sset(&x)).unwrap();
        prop_assert_eq!(parse::<SSetDoc>(&text).unwrap().to_sset().unwrap(), x.clone());
        // Both forms of the 2-Segal condition agree on every member.
        let dk = check_2segal_dk(&x, 3, true).unwrap().passed;
        prop_assert_eq!(dk, check_2segal_gkt(&x, 3).unwrap().passed);
    }

    #[test]
    fn posets_survive_json(p in poset(6)) {
        let text = serde_json::to_string(&PosetDoc::from_poset(&p)).unwrap();
        let q = parse::<PosetDoc>(&text).unwrap().to_poset().unwrap();
        prop_assert_eq!(q.relations(), p.relations());
    }

    #[test]
    fn maps_and_morphisms_survive_json(table in prop::collection::vec(0usize..3, 0..6)) {
        let f = FinMap::new(FinSet::range(table.len()), FinSet::range(3), table).unwrap();
        let doc = FinMapDoc::from_map(&f);
        prop_assert_eq!(&doc.to_map().unwrap(), &f);
        // Reversing every fibre gives a different morphism on the same map.
        let fibers = (0..3).map(|y| f.fiber(y).into_iter().rev().collect()).collect();
        let p = AlgMorphism::new(f, fibers).unwrap();
        let text = serde_json::to_string(&AlgMorphismDoc::from_morphism(&p)).unwrap();
        prop_assert_eq!(parse::<AlgMorphismDoc>(&text).unwrap().to_morphism().unwrap(), p);
    }

    #[test]
    fn functions_survive_json(values in prop::collection::vec((-5i64..6, 1i64..4), 6)) {
        let carrier = FinSet::range(6);
        let coeffs = values.iter().map(|&(n, d)| integer(n) / integer(d)).collect();
        let f = IncidenceElement::new(carrier.clone(), coeffs).unwrap();
        let text = serde_json::to_string(&FunctionDoc::from_element(&f)).unwrap();
        prop_assert_eq!(FunctionDoc::parse(&text).unwrap().to_element(&carrier).unwrap(), f);
    }
}

#[test]
fn chains_survive_json() {
    for c in monotone_chains(2, 3, None) {
        let text = serde_json::to_string(&ChainDoc::from_chain(&c)).unwrap();
        assert_eq!(parse::<ChainDoc>(&text).unwrap().to_chain().unwrap(), c);
    }
}

#[test]
fn bare_function_maps_are_accepted() {
    let carrier = FinSet::new(["a", "b"]).unwrap();
    let f = FunctionDoc::parse(r#"{"a": "1/2"}"#).unwrap().to_element(&carrier).unwrap();
    assert_eq!(f.coeffs(), [integer(1) / integer(2), integer(0)]);
    assert!(FunctionDoc::parse(r#"{"a": "x"}"#).unwrap().to_element(&carrier).is_err());
}
