//! The functor of Ax-subsets on objects and maps.

use nbhd::dsl::AxiomSet;
use nbhd::functor::{bax_map, enumerate_bax, naturality_check, principal_from_subset, Strategy};
use nbhd::{FrameMorphism, Subset};

fn main() {
    for list in ["", "@M", "@N,@C,@M", "@Cont"] {
        let axs = if list.is_empty() {
            AxiomSet::empty()
        } else {
            AxiomSet::parse_list(list, 2).unwrap()
        };
        let space = enumerate_bax(2, &axs, Strategy::default_for(&axs)).unwrap();
        println!("|B X| for n=2 with {{{list}}}: {}", space.len());
    }

    let m = AxiomSet::parse_list("@M", 5).unwrap();
    let big = enumerate_bax(5, &m, Strategy::UpsetBacktrack).unwrap();
    println!("monotone families on 5 points: {}", big.len());

    let f = FrameMorphism::constant(2, 1, 0).unwrap();
    let axs = AxiomSet::parse_list("@M", 2).unwrap();
    let cone = principal_from_subset(2, Subset(1)).unwrap();
    let image = bax_map(&f, &cone, &axs).unwrap();
    println!("B f (up-cone of {{0}}) = {:?}", image.masks());

    let report = naturality_check(&f, &axs, None, None).unwrap();
    println!("naturality: {} members checked, pass = {}", report.checked, report.pass());
}
