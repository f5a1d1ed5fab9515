use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nbhd::classes::{frame_class_check, ClassTag};
use nbhd::dsl::{parse, Axiom, AxiomSet};
use nbhd::duality::{atom_frame, complex_algebra, lax_algebra, onestep_top_check};
use nbhd::eval::{is_ax_subset, validates};
use nbhd::functor::{bax_map, enumerate_bax, naturality_check, Strategy};
use nbhd::genframe::*;
use nbhd::search::{count_frames, enumerate_frames, Constraint};
use nbhd::{Algebra, Family, Frame, FrameMorphism, Subset};

const REGISTRY_SETS: &[&str] = &["@M", "@N", "@C", "@Cont", "@Conv", "@CoConv", "@N,@C,@M", "@M,@Cont"];

fn axs(list: &str, n: usize) -> AxiomSet {
    AxiomSet::parse_list(list, n).unwrap()
}

fn random_frame(n: usize, rng: &mut ChaCha8Rng) -> Frame {
    let nbhd = (0..n)
        .map(|_| Family::from_bits(n, rng.random::<u64>() & ((1u64 << (1 << n)) - 1)))
        .collect();
    Frame::new(n, nbhd).unwrap()
}

#[test]
fn strategies_agree_up_to_four_points() {
    for n in 0..=4 {
        for list in ["@M", "@N,@C,@M", "@M,@Conv", "@CInf"] {
            let a = axs(list, n);
            assert_eq!(
                enumerate_bax(n, &a, Strategy::Filter).unwrap(),
                enumerate_bax(n, &a, Strategy::UpsetBacktrack).unwrap(),
                "n={n} {list}"
            );
        }
    }
}

#[test]
fn functor_identity_and_naturality() {
    for n in 0..=3 {
        for list in REGISTRY_SETS {
            let a = axs(list, n);
            let space = enumerate_bax(n, &a, Strategy::default_for(&a)).unwrap();
            let id = FrameMorphism::identity(n);
            for w in space.members() {
                assert_eq!(&bax_map(&id, w, &a).unwrap(), w);
            }
        }
    }
    let c = FrameMorphism::constant(2, 1, 0).unwrap();
    let report = naturality_check(&c, &axs("@M", 2), None, None).unwrap();
    assert!(report.pass());
    assert_eq!(report.checked, 6);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (a, b, c) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let f = FrameMorphism::new(a, b, (0..a).map(|_| rng.random_range(0..b)).collect()).unwrap();
        let g = FrameMorphism::new(b, c, (0..b).map(|_| rng.random_range(0..c)).collect()).unwrap();
        let r = naturality_check(&f, &AxiomSet::empty(), Some(&g), Some((100, 5))).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.composition_checked, 100.min(1 << (1 << a)));
    }
}

#[test]
fn lax_algebras_separate_and_satisfy_their_axioms() {
    for n in 0..=3 {
        for list in REGISTRY_SETS {
            let a = axs(list, n);
            let lax = lax_algebra(n, &a, Strategy::default_for(&a)).unwrap();
            assert!(lax.generators_separate(), "n={n} {list}");
            for ax in a.axioms() {
                if let Axiom::OneStep { axiom, .. } = ax {
                    assert!(onestep_top_check(&lax, axiom).unwrap(), "n={n} {list}");
                }
            }
        }
    }
}

#[test]
fn algebra_validity_is_coalgebra_membership() {
    for list in REGISTRY_SETS {
        let a = axs(list, 2);
        let space = enumerate_bax(2, &a, Strategy::default_for(&a)).unwrap();
        for code in 0..256u32 {
            let alg = Algebra::new(2, (0..4).map(|i| Subset(code >> (2 * i) & 3)).collect()).unwrap();
            let frame = atom_frame(&alg);
            let lands = frame.families().iter().all(|w| space.contains(w));
            let valid = a.axioms().iter().all(|ax| match ax {
                Axiom::OneStep { axiom, .. } => validates(&alg, axiom.formula()).unwrap(),
                Axiom::Semantic { .. } => unreachable!(),
            });
            assert_eq!(valid, lands, "{list} {alg:?}");
        }
    }
}

#[test]
fn one_step_classes_match_validity_on_random_n3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs = [
        (ClassTag::Monotone, "@M"),
        (ClassTag::Contingency, "@Cont"),
        (ClassTag::Convex, "@Conv"),
        (ClassTag::CoConvex, "@CoConv"),
        (ClassTag::Filter, "@N,@C"),
    ];
    for _ in 0..300 {
        let f = random_frame(3, &mut rng);
        let alg = complex_algebra(&f);
        for (tag, list) in pairs {
            let valid = axs(list, 3).axioms().iter().all(|ax| match ax {
                Axiom::OneStep { axiom, .. } => validates(&alg, axiom.formula()).unwrap(),
                Axiom::Semantic { .. } => unreachable!(),
            });
            assert_eq!(frame_class_check(&f, tag).unwrap(), valid, "{tag}");
        }
    }
}

#[test]
fn counts_match_brute_filtering() {
    for n in 0..=2 {
        let all = enumerate_frames(n, &[], false).unwrap();
        assert_eq!(all.len() as u64, (1u64 << (1 << n)).pow(n as u32));
        for c in ["monotone", "filter", "centered", "iv", "top", "@Cont", "convex"] {
            let constraint: Constraint = c.parse().unwrap();
            let fast = enumerate_frames(n, std::slice::from_ref(&constraint), false).unwrap();
            let brute: Vec<Frame> = all
                .iter()
                .filter(|f| match &constraint {
                    Constraint::Class(t) => frame_class_check(f, *t).unwrap(),
                    Constraint::Axioms(names) => {
                        let a = AxiomSet::from_names(names, n).unwrap();
                        f.families().iter().all(|w| is_ax_subset(w, &a).unwrap())
                    }
                })
                .cloned()
                .collect();
            assert_eq!(fast, brute, "n={n} {c}");
            let mut orbits: Vec<Frame> = brute
                .iter()
                .map(|f| nbhd::search::canonical_form(f).unwrap())
                .collect();
            orbits.sort();
            orbits.dedup();
            assert_eq!(count_frames(n, &[constraint], true).unwrap(), orbits.len() as u64);
        }
    }
}

#[test]
fn monotone_sigma_tightness_and_descriptive_round_trip() {
    for n in 0..=2 {
        for a in subalgebras(n).unwrap() {
            for gf in tight_frames(n, &a).unwrap() {
                let sigma = sigma_extend(&gf).unwrap();
                // the σ-extension is σ-descriptive over A, and truncating it back gives gf
                let lifted = GeneralFrame::new(n, sigma.families().to_vec(), a.clone());
                if let Ok(lifted) = lifted {
                    assert!(is_sigma_descriptive(&lifted));
                    assert_eq!(truncate(&sigma, &a).unwrap(), gf);
                    assert_eq!(sigma_extend(&truncate(&sigma, &a).unwrap()).unwrap(), sigma);
                }
            }
        }
        // every σ-descriptive monotone structure is generated by its admissible part
        for a in subalgebras(n).unwrap() {
            for code in 0..(1u64 << (1 << n)).pow(n as u32) {
                let per = 1u64 << (1 << n);
                let nbhd: Vec<Family> = (0..n)
                    .map(|x| Family::from_bits(n, code / per.pow(x as u32) % per))
                    .collect();
                let Ok(gf) = GeneralFrame::new(n, nbhd.clone(), a.clone()) else { continue };
                if !is_sigma_descriptive(&gf) || !nbhd.iter().all(Family::is_up_closed) {
                    continue;
                }
                for w in &nbhd {
                    let mut cones = Family::empty(n);
                    for c in w.intersection(&a).members() {
                        cones = cones.union(&Family::up_cone(n, c));
                    }
                    assert_eq!(&cones, w);
                }
            }
        }
    }
}

#[test]
fn formulas_with_named_axioms_parse() {
    for name in nbhd::dsl::registry::FIXED_NAMES {
        let f = parse(&format!("@{name}")).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
