//! General frames: σ- and π-extensions, complements within the admissible
//! sets, truncation, and descriptiveness.

use nbhd::genframe::*;
use nbhd::Subset;

fn show(label: &str, f: &nbhd::Frame) {
    println!("{label:12} {}", serde_json::to_string(f).unwrap());
}

fn main() {
    let a = subalgebra_from_partition(2, &[Subset(3)]).unwrap();
    let gf: GeneralFrame =
        serde_json::from_str(r#"{"n":2,"N":[[3],[3]],"A":[0,3]}"#).unwrap();
    println!("A = {:?}, tight: {}, differentiated: {}", a.masks(), gf.is_tight(), gf.is_differentiated());

    let sigma = sigma_extend(&gf).unwrap();
    let pi = pi_extend(&gf).unwrap();
    show("sigma", &sigma);
    show("pi", &pi);

    // the π-extension is the complement of the σ-extension of the complement
    let via = sigma_extend(&complement_within(&gf).unwrap()).unwrap().complement();
    show("(Σ N^c)^c", &via);
    assert_eq!(via, pi);

    assert_eq!(truncate(&sigma, gf.admissible()).unwrap(), gf);
    println!(
        "sigma-descriptive: {}, pi-descriptive: {}",
        is_sigma_descriptive(&gf),
        is_pi_descriptive(&gf)
    );
    println!("subalgebras of P(3): {}", subalgebras(3).unwrap().len());
}
