//! Frames and algebras, point maps and complete homomorphisms, and the
//! atom realization of the free algebra over a set of axioms.

use nbhd::dsl::AxiomSet;
use nbhd::duality::{atom_frame, complex_algebra, dualize_frame_morphism, lax_algebra, onestep_top_check};
use nbhd::dsl::OneStepAxiom;
use nbhd::functor::Strategy;
use nbhd::{Family, Frame, FrameMorphism};

fn main() {
    let frame = Frame::from_masks(2, &[&[1, 3], &[0]]);
    let alg = complex_algebra(&frame);
    println!("complex algebra: {}", serde_json::to_string(&alg).unwrap());
    assert_eq!(atom_frame(&alg), frame);

    let f = FrameMorphism::constant(2, 1, 0).unwrap();
    let dom = Frame::uniform(2, &Family::full(2));
    let cod = Frame::from_masks(1, &[&[0, 1]]);
    let h = dualize_frame_morphism(&f);
    println!(
        "f is a morphism: {}, its dual is a complete hom: {}",
        f.is_nbhd_morphism(&dom, &cod).unwrap(),
        h.is_complete_nbhd_hom(&complex_algebra(&cod), &complex_algebra(&dom)).unwrap()
    );

    let axs = AxiomSet::parse_list("@N,@C,@M", 2).unwrap();
    let lax = lax_algebra(2, &axs, Strategy::default_for(&axs)).unwrap();
    println!("L_Ax atoms: {}", lax.atom_count());
    println!("{}", serde_json::to_string(&lax).unwrap());
    for ax in axs.axioms() {
        if let nbhd::dsl::Axiom::OneStep { label, axiom } = ax {
            let ok = onestep_top_check(&lax, axiom).unwrap();
            println!("  {label} evaluates to top: {ok}");
        }
    }
    let m = OneStepAxiom::new(nbhd::dsl::parse("@M").unwrap()).unwrap();
    let free = lax_algebra(2, &AxiomSet::empty(), Strategy::Filter).unwrap();
    println!("M on the free algebra: {}", onestep_top_check(&free, &m).unwrap());
}
