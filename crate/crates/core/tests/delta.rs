use fatdelta_core::delta::{enumerate_hom, pushout_mono_along_epi, vee_active, MapClass, Ordinal, OrdinalMap};
use proptest::prelude::*;

fn o(n: usize) -> Ordinal {
    Ordinal(n)
}

fn face(n: usize, i: usize) -> OrdinalMap {
    OrdinalMap::face(o(n), i).unwrap()
}

fn degen(n: usize, i: usize) -> OrdinalMap {
    OrdinalMap::degeneracy(o(n), i).unwrap()
}

fn after(g: &OrdinalMap, f: &OrdinalMap) -> OrdinalMap {
    g.compose(f).unwrap()
}

#[test]
fn simplicial_identities() {
    for n in 0..=5 {
        for j in 0..=n + 2 {
            for i in 0..j {
                assert_eq!(after(&face(n + 1, j), &face(n, i)), after(&face(n + 1, i), &face(n, j - 1)));
            }
        }
    }
    for n in 1..=6 {
        for j in 0..n {
            for i in 0..=j {
                assert_eq!(after(&degen(n, j), &degen(n + 1, i)), after(&degen(n, i), &degen(n + 1, j + 1)));
            }
        }
    }
    for n in 1..=6 {
        for j in 0..n {
            for i in 0..=n + 1 {
                let lhs = after(&degen(n + 1, j), &face(n, i));
                if i < j {
                    assert_eq!(lhs, after(&face(n - 1, i), &degen(n, j - 1)));
                } else if i == j || i == j + 1 {
                    assert_eq!(lhs, OrdinalMap::identity(o(n)));
                } else {
                    assert_eq!(lhs, after(&face(n - 1, i - 1), &degen(n, j)));
                }
            }
        }
    }
}

/// Pairs `(left, right)` with `right ∘ left = f`, over every middle ordinal.
fn factorizations(f: &OrdinalMap, left: MapClass, right: MapClass) -> Vec<(OrdinalMap, OrdinalMap)> {
    let mut out = Vec::new();
    for k in 0..=5 {
        for l in enumerate_hom(f.dom(), o(k), left) {
            for r in enumerate_hom(o(k), f.cod(), right) {
                if after(&r, &l) == *f {
                    out.push((l.clone(), r));
                }
            }
        }
    }
    out
}

#[test]
fn factorizations_are_unique() {
    for m in 0..=4 {
        for n in 0..=4 {
            for f in enumerate_hom(o(m), o(n), MapClass::All) {
                assert_eq!(factorizations(&f, MapClass::Epi, MapClass::Mono), [f.epi_mono_factor()], "{f}");
                assert_eq!(
                    factorizations(&f, MapClass::Active, MapClass::Inert),
                    [f.active_inert_factor()],
                    "{f}"
                );
            }
        }
    }
}

#[test]
fn contraction_iff_factorizations_agree() {
    for m in 0..=5 {
        for n in 0..=5 {
            for f in enumerate_hom(o(m), o(n), MapClass::All) {
                assert_eq!(f.classify().is_contraction, f.epi_mono_factor() == f.active_inert_factor(), "{f}");
            }
        }
    }
}

#[test]
fn pushouts_are_universal() {
    for m in 0..=3 {
        for n in m..=4 {
            let monos: Vec<_> = enumerate_hom(o(m), o(n), MapClass::Mono)
                .into_iter()
                .filter(OrdinalMap::is_active)
                .collect();
            for k in 0..=m {
                for e in enumerate_hom(o(m), o(k), MapClass::Epi) {
                    for a in &monos {
                        let po = pushout_mono_along_epi(a, &e).unwrap();
                        assert_eq!(after(&po.right, a), after(&po.bottom, &e));
                        // least section of e
                        let section: Vec<usize> = (0..=k).map(|w| e.images().iter().position(|&v| v == w).unwrap()).collect();
                        for t in 0..=6 {
                            let mut cocones = Vec::new();
                            for p in enumerate_hom(o(n), o(t), MapClass::All) {
                                let pa = after(&p, a);
                                let images: Vec<usize> = section.iter().map(|&v| pa.images()[v]).collect();
                                let Ok(q) = OrdinalMap::new(o(k), o(t), images) else { continue };
                                if after(&q, &e) == pa {
                                    cocones.push((p, q));
                                }
                            }
                            let mut mediated: Vec<(OrdinalMap, OrdinalMap)> = enumerate_hom(po.corner, o(t), MapClass::All)
                                .iter()
                                .map(|h| (after(h, &po.right), after(h, &po.bottom)))
                                .collect();
                            let key = |x: &(OrdinalMap, OrdinalMap)| (x.0.images().to_vec(), x.1.images().to_vec());
                            mediated.sort_by_key(key);
                            cocones.sort_by_key(key);
                            assert_eq!(mediated, cocones, "{a} along {e} into [{t}]");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn active_inert_squares_have_one_diagonal() {
    let n = 4;
    for (ad, bd) in (0..=n).flat_map(|a| (0..=n).map(move |b| (a, b))) {
        for a in enumerate_hom(o(ad), o(bd), MapClass::Active) {
            for (cd, dd) in (0..=n).flat_map(|c| (0..=n).map(move |d| (c, d))) {
                for i in enumerate_hom(o(cd), o(dd), MapClass::Inert) {
                    for v in enumerate_hom(o(bd), o(dd), MapClass::All) {
                        let va = after(&v, &a);
                        for u in enumerate_hom(o(ad), o(cd), MapClass::All) {
                            if after(&i, &u) != va {
                                continue;
                            }
                            let diagonals = enumerate_hom(o(bd), o(cd), MapClass::All)
                                .into_iter()
                                .filter(|d| after(d, &a) == u && after(&i, d) == v)
                                .count();
                            assert_eq!(diagonals, 1, "{a} / {i} with {u}, {v}");
                        }
                    }
                }
            }
        }
    }
}

fn map(max: usize) -> impl Strategy<Value = OrdinalMap> {
    (0..=max, 0..=max).prop_flat_map(|(m, n)| {
        proptest::collection::vec(0..=n, m + 1).prop_map(move |mut images| {
            images.sort_unstable();
            OrdinalMap::new(Ordinal(m), Ordinal(n), images).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn factorizations_recompose(f in map(6)) {
        let (e, m) = f.epi_mono_factor();
        prop_assert!(e.is_epi() && m.is_mono());
        prop_assert_eq!(m.compose(&e).unwrap(), f.clone());
        let (a, i) = f.active_inert_factor();
        prop_assert!(a.is_active() && i.is_inert());
        prop_assert_eq!(i.compose(&a).unwrap(), f);
    }

    #[test]
    fn composition_associates(f in map(4), seed in any::<u64>()) {
        // build g, h with matching ends from the seed
        let pick = |k: u64, m: usize, n: usize| {
            let all = enumerate_hom(Ordinal(m), Ordinal(n), MapClass::All);
            all[(k % all.len() as u64) as usize].clone()
        };
        let g = pick(seed, f.cod().n(), (seed % 4) as usize);
        let h = pick(seed / 7, g.cod().n(), (seed / 5 % 4) as usize);
        prop_assert_eq!(
            h.compose(&g.compose(&f).unwrap()).unwrap(),
            h.compose(&g).unwrap().compose(&f).unwrap()
        );
    }

    #[test]
    fn vee_of_actives_is_active(f in map(3), g in map(3)) {
        let (f, g) = (f.active_inert_factor().0, g.active_inert_factor().0);
        let v = vee_active(&f, &g).unwrap();
        prop_assert!(v.is_active());
        prop_assert_eq!(v.dom().n(), f.dom().n() + g.dom().n());
        prop_assert_eq!(v.cod().n(), f.cod().n() + g.cod().n());
    }

    #[test]
    fn text_form_round_trips(f in map(6)) {
        prop_assert_eq!(f.to_string().parse::<OrdinalMap>().unwrap(), f);
    }
}
