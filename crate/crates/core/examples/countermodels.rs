//! Smallest countermodels and class counts.

use nbhd::dsl::parse;
use nbhd::search::*;

fn main() {
    let cases: [(&str, &[&str]); 4] = [
        ("@M", &[]),
        ("box v -> v", &["filter"]),
        ("box v -> box box v", &["monotone"]),
        ("@M", &["monotone"]),
    ];
    for (target, classes) in cases {
        let spec = SearchSpec {
            max_n: 3,
            constraints: classes.iter().map(|c| c.parse().unwrap()).collect(),
            target: parse(target).unwrap(),
            mode: Mode::FindRefuting,
        };
        let r = find_countermodel(&spec).unwrap();
        println!("{target} over {classes:?}: {}", serde_json::to_string(&r).unwrap());
    }
    for n in 0..=3 {
        println!(
            "n={n}: {} frames, {} up to isomorphism, {} monotone up to isomorphism",
            count_frames(n, &[], false).unwrap(),
            count_frames(n, &[], true).unwrap(),
            count_frames(n, &["monotone".parse().unwrap()], true).unwrap()
        );
    }
}
