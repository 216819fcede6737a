use fatdelta_core::delta::{pushout_mono_along_epi, MapClass, Ordinal, OrdinalMap};
use fatdelta_core::fat::{
    elementary_arrows, enumerate_hom_fat, enumerate_objects, flat_on_mono, is_morphism, morphism_of_functor, rso,
    rso_on_morphism, FatClass, FatMorphism, FatObject,
};
use fatdelta_core::verify::{check_directness, check_factorization_system};
use proptest::prelude::*;

fn obj(s: &str) -> FatObject {
    s.parse().unwrap()
}

fn all_morphisms(bound: usize) -> Vec<FatMorphism> {
    let objects = enumerate_objects(bound);
    objects
        .iter()
        .flat_map(|x| objects.iter().flat_map(move |y| enumerate_hom_fat(x, y, FatClass::All)))
        .collect()
}

#[test]
fn orthogonal_factorization_system() {
    let v = check_factorization_system(4);
    assert!(v.passed(), "{:?}", v.failures);
    assert!(v.checked > 10_000);
}

#[test]
fn active_means_pushout_square() {
    for f in all_morphisms(4) {
        let top = f.pi_domain();
        let dom_epi = f.dom().epi();
        let is_pushout = top.is_active()
            && pushout_mono_along_epi(&top, &dom_epi).is_ok_and(|po| po.right == f.cod().epi() && po.bottom == f.pi_codomain());
        assert_eq!(f.is_active(), is_pushout, "{f}");
    }
}

#[test]
fn factorization_is_functorial() {
    let objects = enumerate_objects(3);
    for x in &objects {
        for y in &objects {
            for f in enumerate_hom_fat(x, y, FatClass::All) {
                let (af, i_f) = f.active_inert_factor();
                for z in &objects {
                    for g in enumerate_hom_fat(y, z, FatClass::All) {
                        let gf = g.compose(&f).unwrap();
                        let (agf, igf) = gf.active_inert_factor();
                        // chase: factor the middle composite and reassemble
                        let (ag, ig) = g.active_inert_factor();
                        let (a2, i2) = ag.compose(&i_f).unwrap().active_inert_factor();
                        assert_eq!(a2.compose(&af).unwrap(), agf);
                        assert_eq!(ig.compose(&i2).unwrap(), igf);
                        // the connecting map between the middles is unique
                        let gif = g.compose(&i_f).unwrap();
                        let connecting = enumerate_hom_fat(af.cod(), agf.cod(), FatClass::All)
                            .into_iter()
                            .filter(|c| c.compose(&af).unwrap() == agf && igf.compose(c).unwrap() == gif)
                            .count();
                        assert_eq!(connecting, 1, "{f} then {g}");
                    }
                }
            }
        }
    }
}

#[test]
fn bottoms_of_actives_and_inerts() {
    for f in all_morphisms(4) {
        let b = f.pi_codomain();
        if f.is_active() {
            assert!(b.is_active() && b.is_mono(), "{f}");
        }
        if f.is_inert() {
            assert!(b.is_contraction(), "{f}");
        }
    }
}

#[test]
fn flat_lifts_the_inclusion() {
    for n in 0..5 {
        for i in 0..=n + 1 {
            let d = OrdinalMap::face(Ordinal(n), i).unwrap();
            assert_eq!(flat_on_mono(&d).unwrap().pi_codomain(), d);
        }
    }
    for n in 0..=5 {
        for m in 0..=n {
            for d in fatdelta_core::delta::enumerate_hom(Ordinal(m), Ordinal(n), MapClass::Mono) {
                assert_eq!(flat_on_mono(&d).unwrap().pi_codomain(), d);
            }
        }
    }
}

#[test]
fn direct_up_to_five_edges() {
    let v = check_directness(5);
    assert!(v.passed(), "{:?}", v.failures);
}

#[test]
fn rso_is_a_full_embedding_up_to_three_edges() {
    for x in enumerate_objects(5) {
        assert!(rso(&x).validate().is_ok(), "{x}");
    }
    for f in all_morphisms(3) {
        let functor = rso_on_morphism(&f);
        assert!(functor.is_valid(&rso(f.dom()), &rso(f.cod())));
        assert_eq!(morphism_of_functor(f.dom(), f.cod(), &functor).unwrap(), f);
    }
}

#[test]
fn picture_of_small_objects() {
    let arrows = elementary_arrows(2);
    assert_eq!(arrows.len(), 21);
    assert!(arrows.iter().all(|f| f.is_active() || f.is_inert()));
    assert!(!arrows.iter().any(|f| f.dom() == &obj("m") && f.cod() == &obj("u")));
}

fn object(max: usize) -> impl Strategy<Value = FatObject> {
    proptest::collection::vec(any::<bool>(), 0..=max).prop_map(FatObject::new)
}

fn morphism() -> impl Strategy<Value = FatMorphism> {
    (object(3), object(5), proptest::collection::btree_set(0usize..6, 1..=4)).prop_filter_map(
        "not a morphism",
        |(dom, cod, top)| {
            let top: Vec<usize> = top.into_iter().collect();
            is_morphism(&dom, &cod, &top).then(|| FatMorphism::new(dom, cod, top).unwrap())
        },
    )
}

proptest! {
    #[test]
    fn factorization_recomposes(f in morphism()) {
        let (a, i) = f.active_inert_factor();
        prop_assert!(a.is_active());
        prop_assert!(i.is_inert());
        prop_assert_eq!(i.compose(&a).unwrap(), f);
    }

    #[test]
    fn json_round_trips(f in morphism()) {
        let text = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<FatMorphism>(&text).unwrap(), f.clone());
        prop_assert_eq!(text.parse::<FatMorphism>().unwrap(), f.clone());
        let x = f.cod().clone();
        prop_assert_eq!(serde_json::from_str::<FatObject>(&serde_json::to_string(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn epi_round_trips(x in object(6)) {
        prop_assert_eq!(FatObject::from_epi(&x.epi()).unwrap(), x);
    }

    #[test]
    fn bottom_ignores_the_section(f in morphism()) {
        // every section of the domain epi gives the same bottom
        let epi = f.dom().epi();
        let mut sections: Vec<Vec<usize>> = vec![Vec::new()];
        for w in 0..epi.cod().vertex_count() {
            let choices: Vec<usize> = (0..epi.dom().vertex_count()).filter(|&v| epi.apply(v) == w).collect();
            sections = sections
                .into_iter()
                .flat_map(|s| choices.iter().map(move |&c| { let mut s = s.clone(); s.push(c); s }))
                .collect();
        }
        for s in sections {
            prop_assert_eq!(f.bottom_via_section(&s).unwrap(), f.pi_codomain());
        }
    }
}
