//! Parsing, named axioms, and rendering.

use nbhd::dsl::{parse, registry, AxiomSet};

fn main() {
    for src in ["box (u & v) -> box u", "@Conv", "@Ck(3)", "~box ~p | q <-> T"] {
        let f = parse(src).unwrap();
        println!(
            "{src:24} => {f}  (depth {}, one-step: {})",
            f.modal_depth(),
            f.is_one_step()
        );
    }
    match parse("box (u & ") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
    println!("registry: {:?}", registry::FIXED_NAMES);
    let axs = AxiomSet::parse_list("@M, @N, box u & box v -> box (u & v)", 2).unwrap();
    println!("axiom set: {axs}");
}
