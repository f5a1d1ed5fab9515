mod common;

use common::*;
use nbhd::cli::run_with_stdin;

fn in_process(args: &[String], stdin: &str) -> (i32, String) {
    let argv = std::iter::once("nbhd".to_string()).chain(args.iter().cloned());
    let out = run_with_stdin(argv, &mut stdin.as_bytes());
    (out.code, out.stdout)
}

#[test]
fn goldens_in_process() {
    for &(name, args, code) in CASES {
        let expected = std::fs::read_to_string(golden(name)).unwrap();
        let (got_code, got) = in_process(&argv(args), "");
        assert_eq!(got_code, code, "{name}");
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn goldens_through_binary_with_worker_counts() {
    for &(name, args, code) in CASES {
        let expected = std::fs::read(golden(name)).unwrap();
        for workers in ["1", "4"] {
            let mut a = vec!["--workers".to_string(), workers.to_string()];
            a.extend(argv(args));
            let (got_code, got) = exe(&a, "");
            assert_eq!(got_code, code, "{name} workers={workers}");
            assert_eq!(got, expected, "{name} workers={workers}");
        }
    }
}

#[test]
fn json_outputs_reparse() {
    use nbhd::genframe::GeneralFrame;
    use nbhd::{Algebra, CompleteHom, Frame};
    let read = |n: &str| std::fs::read_to_string(golden(n)).unwrap();
    let alg: Algebra = serde_json::from_str(&read("dualize_frame")).unwrap();
    assert_eq!(serde_json::to_string(&alg).unwrap(), read("dualize_frame").trim());
    let f: Frame = serde_json::from_str(&read("gen_sigma")).unwrap();
    assert_eq!(serde_json::to_string(&f).unwrap(), read("gen_sigma").trim());
    let g: GeneralFrame = serde_json::from_str(&read("gen_complement")).unwrap();
    assert_eq!(serde_json::to_string(&g).unwrap(), read("gen_complement").trim());
    let h: CompleteHom = serde_json::from_str(&read("morphism_dualize")).unwrap();
    assert_eq!(serde_json::to_string(&h).unwrap(), read("morphism_dualize").trim());
    let b: nbhd::functor::BaxSpace = serde_json::from_str(&read("bax_enum")).unwrap();
    assert_eq!(serde_json::to_string(&b).unwrap(), read("bax_enum").trim());
}

#[test]
fn dualize_pipe_is_bit_exact() {
    let frame = std::fs::read_to_string(data("frame.json")).unwrap();
    let (_, alg) = exe(&["dualize".into(), "--frame".into(), "-".into()], &frame);
    let alg = String::from_utf8(alg).unwrap();
    let (code, back) = exe(&["dualize".into(), "--algebra".into(), "-".into()], &alg);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(back).unwrap(), frame);
}

#[test]
fn max_n_env_only_lowers() {
    let run = |env: &str, n: &str| {
        std::process::Command::new(env!("CARGO_BIN_EXE_nbhd"))
            .args(["bax", "enum", "--n", n, "--axioms", "@M", "--count"])
            .env("NBHD_MAX_N", env)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(run("2", "3"), 3);
    assert_eq!(run("3", "3"), 0);
    // raising the variable does not lift the built-in cap
    assert_eq!(run("40", "6"), 3);
}

#[test]
fn usage_errors() {
    let (code, _) = in_process(&["gen".into(), "sigma".into(), "--gen".into(), "-".into()], "{\"n\":2}");
    assert_eq!(code, 2);
    let loose = r#"{"n":2,"N":[[1],[1]],"A":[0,1,2,3]}"#;
    let (code, out) = in_process(&argv(&["gen", "validate", "--gen", "-"]), loose);
    assert_eq!((code, out.contains("\"tight\":true")), (0, true));
    let not_tight = r#"{"n":2,"N":[[1],[1]],"A":[0,3]}"#;
    let (code, out) = in_process(&argv(&["gen", "validate", "--gen", "-"]), not_tight);
    assert_eq!((code, out.contains("\"tight\":false")), (0, true));
    let not_closed = r#"{"n":2,"N":[[3],[]],"A":[0,3]}"#;
    let (code, out) = in_process(&argv(&["gen", "validate", "--gen", "-"]), not_closed);
    assert_eq!((code, out.contains("\"valid\":false")), (1, true));
    let (code, _) = in_process(&argv(&["search", "countermodel", "--formula", "@M", "--max-n", "5"]), "");
    assert_eq!(code, 3);
    let (code, _) = in_process(&argv(&["class", "check", "--frame", "-", "--class", "kappa:0"]), "");
    assert_eq!(code, 2);
}
