use std::path::Path;
use std::process::Command;

use hfl_surfaces::{enumerate_deperturbed, perturb, serialize_cells};
use serde_json::Value;

fn hfl(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hfl")).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("exited normally"),
    )
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let (out, err, code) = hfl(&a);
    assert!(err.is_empty(), "stderr: {err}");
    (serde_json::from_str(&out).expect("valid json"), code)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn trefoil_weak_group_is_one_tower() {
    let (v, code) = json(&["compute", "torus:2,3", "hf_w", "--flavor", "circ"]);
    assert_eq!(code, 0);
    let summands = v["results"]["decomposition"]["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 1);
    assert_eq!(v["results"]["decomposition"]["text"], "F[v](0, -4)");
}

#[test]
fn figure_eight_hf_circ() {
    let (v, code) = json(&["compute", "figure_eight", "hf"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["decomposition"]["text"], "F[v](0, 0) ⊕ F(0, 0)");
}

#[test]
fn unknot_hat_is_one_dimensional() {
    let (v, code) = json(&["compute", "unknot", "hfl", "--flavor", "hat"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["table"], serde_json::json!([{ "w": 0, "z": 0, "dim": 1 }]));
}

#[test]
fn hat_weak_group_is_rejected() {
    let (_, err, code) = hfl(&["compute", "trefoil", "hf_w", "--flavor", "hat"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn tiny_window_is_untrusted() {
    let (_, err, code) = hfl(&["compute", "torus:2,3", "--window", "5", "6", "5", "6"]);
    assert_eq!(code, 3, "{err}");
    let (_, _, code) = hfl(&["compute", "torus:2,3", "--window", "6", "5", "5", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_torus_closed_forms() {
    let (v, code) = json(&["verify", "torus:3,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["matched"], true);
    let (v, code) = json(&["verify", "trefoil"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["against"], "torus:2,3");
    let (v, code) = json(&["verify", "torus:2,3", "--against", "torus:2,5"]);
    assert_eq!(code, 1);
    assert!(!v["results"]["mismatches"].as_array().unwrap().is_empty());
}

#[test]
fn verify_shapes() {
    let (_, code) = json(&["verify", "unknot", "--against", "shape:unknot"]);
    assert_eq!(code, 0);
    let (v, code) = json(&["verify", "figure_eight", "--against", "shape:trefoil"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["matched"], false);
    let (_, _, code) = hfl(&["verify", "unknot"]);
    assert_eq!(code, 0);
    let (_, _, code) = hfl(&["verify", "figure_eight"]);
    assert_eq!(code, 2);
    let (_, _, code) = hfl(&["verify", "figure_eight", "--against", "shape:nope"]);
    assert_eq!(code, 2);
}

#[test]
fn cobordism_words() {
    let cases = [("split;merge", 1), ("", 0), ("elementary a;reverse a", 1), ("elementary;reverse", 1), ("twist 3", 0)];
    for (word, k) in cases {
        let (v, code) = json(&["cobordism", "--word", word]);
        assert_eq!(code, 0, "{word}");
        assert_eq!(v["results"]["power"], k, "{word}");
        assert_eq!(v["results"]["hat_zero"], k > 0, "{word}");
    }
    let (_, err, code) = hfl(&["cobordism", "--word", "elementary a"]);
    assert_eq!(code, 2);
    assert!(err.contains('a'));
    let (_, _, code) = hfl(&["cobordism", "--word", "handle"]);
    assert_eq!(code, 2);
}

#[test]
fn cobordism_script_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "w.txt", "# saddle pair\nelementary e1\nreverse e1\nsplit\n");
    let (out, _, code) = hfl(&["cobordism", &p]);
    assert_eq!(code, 0);
    assert!(out.contains("scalar: v^2"));
    assert!(out.contains("hat: zero"));
}

#[test]
fn rollspin_slice_is_distinct_everywhere() {
    let (v, code) = json(&["slice", "figure_eight", "fig8_rollspin_map"]);
    assert_eq!(code, 0);
    for f in ["minus", "circ", "hat"] {
        assert_eq!(v["results"]["distinct"][f], true, "{f}");
    }
}

#[test]
fn homotopic_map_slice_is_equal() {
    let dir = tempfile::tempdir().unwrap();
    let cx = write(
        dir.path(),
        "a.cx",
        "complex unknot_plus_acyclic\ngen x 0 0\ngen a 0 0\ngen b -1 -1\nd a -> b : 1\n",
    );
    let map = write(dir.path(), "h.map", "map h : x -> x\nmap h : a -> 0\nmap h : b -> 0\n");
    let (v, code) = json(&["slice", &cx, &map]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["verdict"], "equal");
}

#[test]
fn non_chain_map_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(
        dir.path(),
        "bad.map",
        "map bad : x -> x\nmap bad : x0 -> x0\nmap bad : x1 -> 0\nmap bad : y0 -> y0\nmap bad : y1 -> y1\n",
    );
    let (_, _, code) = hfl(&["slice", "figure_eight", &map]);
    assert_eq!(code, 2);
}

#[test]
fn moves_enumerate_and_quad() {
    let (v, code) = json(&["moves", "enumerate", "--genus", "1", "--plus", "2", "--minus", "2"]);
    assert_eq!(code, 0);
    let classes = v["results"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    assert_eq!(classes.iter().filter(|c| c["chiral"] == true).count(), 2);
    let (v, _) = json(&["moves", "quad", "5"]);
    assert_eq!(v["results"]["count"], 55);
    assert_eq!(v["results"]["connected"], true);
    let (_, _, code) = hfl(&["moves", "quad", "9"]);
    assert_eq!(code, 2);
}

#[test]
fn moves_connect_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let classes = enumerate_deperturbed(1, 2, 2).unwrap();
    let a = write(dir.path(), "a.cells", &serialize_cells(&classes[0]));
    let b = write(dir.path(), "b.cells", &serialize_cells(&classes[5]));
    let (v, code) = json(&["moves", "connect", &a, &b, "--switches"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["replay_verified"], true);

    let name = classes[5].cells()[0].name.clone();
    let bigger = perturb(&classes[5], &name, 0, 3).unwrap();
    let c = write(dir.path(), "c.cells", &serialize_cells(&bigger));
    let (v, code) = json(&["moves", "connect", &a, &c]);
    assert_eq!(code, 0);
    let script = v["results"]["script"].as_str().unwrap().to_string();
    let s = write(dir.path(), "s.moves", &script);
    let (v, code) = json(&["moves", "replay", &a, &s, "--target", &c]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["matches_target"], true);
    let (_, _, code) = hfl(&["moves", "replay", &a, &s, "--target", &a]);
    assert_eq!(code, 1);

    let (_, _, code) = hfl(&["moves", "connect", &a, &b, "--switches", "--bound", "1"]);
    assert_eq!(code, 4);
}

#[test]
fn switch_search_rejects_perturbed_input() {
    let dir = tempfile::tempdir().unwrap();
    let classes = enumerate_deperturbed(1, 1, 1).unwrap();
    let name = classes[0].cells()[0].name.clone();
    let p = perturb(&classes[0], &name, 0, 3).unwrap();
    let a = write(dir.path(), "a.cells", &serialize_cells(&classes[0]));
    let b = write(dir.path(), "b.cells", &serialize_cells(&p));
    let (_, _, code) = hfl(&["moves", "connect", &a, &b, "--switches"]);
    assert_eq!(code, 2);
}

#[test]
fn validate_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, code) = json(&["validate", "figure_eight"]);
    assert_eq!(code, 0);
    let cells = write(dir.path(), "t.cells", &serialize_cells(&enumerate_deperturbed(1, 1, 1).unwrap()[0]));
    let (v, code) = json(&["validate", &cells]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["genus"], 1);
    let broken = write(dir.path(), "bad.cells", "vertex p plus\nvertex q plus\nedge e p q\ncell c : +e -e\n");
    let (_, _, code) = hfl(&["validate", &broken]);
    assert_eq!(code, 2);
    let bad_cx = write(dir.path(), "bad.cx", "complex bad\ngen x 0 0\ngen y 0 0\nd x -> y : u\n");
    let (_, err, code) = hfl(&["validate", &bad_cx]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn malformed_inputs_never_panic() {
    let dir = tempfile::tempdir().unwrap();
    let junk = ["", "\u{0}\u{1}", "gen", "complex\ngen x a b", "vertex\nedge", "cell : +", "map : ->", "d -> :"];
    for (i, text) in junk.iter().enumerate() {
        let p = write(dir.path(), &format!("j{i}"), text);
        for args in [
            vec!["validate", p.as_str()],
            vec!["compute", p.as_str()],
            vec!["slice", "figure_eight", p.as_str()],
            vec!["cobordism", p.as_str()],
            vec!["moves", "replay", p.as_str(), p.as_str()],
        ] {
            let (_, err, code) = hfl(&args);
            assert!(code == 0 || code == 2, "{args:?} -> {code}: {err}");
            assert!(!err.contains("panicked"), "{args:?}: {err}");
        }
    }
    let (_, _, code) = hfl(&["compute", "/no/such/file"]);
    assert_eq!(code, 2);
    let (_, _, code) = hfl(&["verify", "torus:4,6"]);
    assert_eq!(code, 2);
    let (_, _, code) = hfl(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    for args in [vec!["compute", "figure_eight", "hf"], vec!["moves", "enumerate", "--genus", "1", "--plus", "1", "--minus", "2"]] {
        let (a, _) = json(&args);
        let (b, _) = json(&args);
        assert!(a["inputs_hash"].as_str().unwrap().starts_with("sha256:"));
        assert_eq!(strip(a), strip(b));
    }
    let (t1, _, _) = hfl(&["verify", "torus:3,4"]);
    let (t2, _, _) = hfl(&["verify", "torus:3,4"]);
    let body = |s: &str| s.lines().filter(|l| !l.starts_with("time:")).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&t1), body(&t2));
}

#[test]
fn help_and_version_exit_zero() {
    let (out, _, code) = hfl(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compute"));
    let (out, _, code) = hfl(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.contains(env!("CARGO_PKG_VERSION")));
}
