//! Searches all small general-frame morphisms for ones that do not lift to
//! the σ-extensions, and splits the failures by whether images of admissible
//! sets are admissible.

use nbhd::genframe::*;
use nbhd::FrameMorphism;

fn main() {
    let (mut checked, mut convex_failures, mut other_failures, mut closed_failures) = (0, 0, 0, 0);
    let mut first = None;
    for n in 1..=2 {
        for m in 1..=2 {
            let doms: Vec<_> = subalgebras(n).unwrap().iter().flat_map(|a| tight_frames(n, a).unwrap()).collect();
            let cods: Vec<_> = subalgebras(m).unwrap().iter().flat_map(|a| tight_frames(m, a).unwrap()).collect();
            for f in FrameMorphism::all(n, m) {
                for g in &doms {
                    for h in &cods {
                        let Ok(r) = sigma_morphism_transfer(&f, g, h) else { continue };
                        checked += 1;
                        if r.pass() {
                            continue;
                        }
                        if !(r.dom_sigma_convex && r.cod_sigma_convex) {
                            other_failures += 1;
                            continue;
                        }
                        convex_failures += 1;
                        if g.admissible().members().all(|c| h.admissible().contains(f.image(c))) {
                            closed_failures += 1;
                        }
                        first.get_or_insert((f.clone(), g.clone(), h.clone(), r));
                    }
                }
            }
        }
    }
    println!("admissible morphisms checked: {checked}");
    println!("failures with both σ-extensions convex: {convex_failures}");
    println!("  ...of which images of admissible sets stay admissible: {closed_failures}");
    println!("failures with a non-convex σ-extension: {other_failures}");
    if let Some((f, g, h, r)) = first {
        println!("smallest convex failure:");
        println!("  f   = {}", serde_json::to_string(&f).unwrap());
        println!("  dom = {}", serde_json::to_string(&g).unwrap());
        println!("  cod = {}", serde_json::to_string(&h).unwrap());
        println!("  {}", serde_json::to_string(&r).unwrap());
    }
}
