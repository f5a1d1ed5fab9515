//! Validity in a complex algebra, falsifying assignments, and Ax-subsets.

use nbhd::dsl::{parse, AxiomSet};
use nbhd::duality::complex_algebra;
use nbhd::eval::{falsifying_assignment, is_ax_subset};
use nbhd::{Family, Frame};

fn main() {
    let frame = Frame::from_masks(2, &[&[1, 3], &[0]]);
    let alg = complex_algebra(&frame);
    for name in ["@M", "@N", "@C", "@Cont", "box v -> v"] {
        let f = parse(name).unwrap();
        match falsifying_assignment(&alg, &f).unwrap() {
            None => println!("{name:12} valid"),
            Some(v) => println!("{name:12} refuted by {}", serde_json::to_string(&v).unwrap()),
        }
    }

    // validity on the algebra is membership of every N(x) in the Ax-subsets
    let m = AxiomSet::parse_list("@M", 2).unwrap();
    for x in 0..2 {
        let w: &Family = frame.nbhd(x);
        println!("N({x}) = {:?} is an M-subset: {}", w.masks(), is_ax_subset(w, &m).unwrap());
    }
}
