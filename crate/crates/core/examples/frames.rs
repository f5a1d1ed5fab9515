//! Neighborhood frames, the box operator, and the Kripke bridge.

use nbhd::{Frame, Relation, Subset};

fn main() {
    let frame = Frame::from_masks(2, &[&[1, 3], &[0]]);
    println!("frame: {}", serde_json::to_string(&frame).unwrap());
    for a in Subset::all(2) {
        println!("  box {a:?} = {:?}", frame.box_n(a).unwrap());
    }
    println!("complement: {}", serde_json::to_string(&frame.complement()).unwrap());

    // R = {(0,0), (0,1)}; N_R(x) is the up-cone of R[x]
    let r = Relation::new(2, vec![Subset(3), Subset(0)]).unwrap();
    let kripke = Frame::from_relation(&r);
    println!("from relation: {}", serde_json::to_string(&kripke).unwrap());
    assert_eq!(kripke.to_relation(), r);
}
