//! Frame classes, algebra classes, and the Cent/T and iv/4 correspondences.

use nbhd::classes::*;
use nbhd::duality::complex_algebra;
use nbhd::search::enumerate_frames;
use nbhd::{Frame, Relation, Subset};

fn main() {
    let r = Relation::new(2, vec![Subset(3), Subset(2)]).unwrap();
    let frame = Frame::from_relation(&r);
    let alg = complex_algebra(&frame);
    for tag in ClassTag::FRAME_TAGS {
        println!("{tag:12} {}", frame_class_check(&frame, tag).unwrap());
    }
    for tag in ClassTag::ALGEBRA_TAGS {
        println!("{tag:12} {}", algebra_class_check(&alg, tag).unwrap());
    }

    let mut disagreements = 0;
    let all = enumerate_frames(2, &[], false).unwrap();
    for f in &all {
        for pair in [Correspondence::CentT, Correspondence::IV4] {
            if !correspondence_check(f, pair).agree {
                disagreements += 1;
            }
        }
    }
    println!("correspondence disagreements over {} frames: {disagreements}", all.len());
}
