use critical_maps::cli::run;
use serde_json::Value;

fn critmap(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("critmap").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = critmap(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn group_of_a_fixture() {
    assert_eq!(
        critmap(&["group", "ex1"]),
        (0, "K = Z/6Z\n".into(), String::new())
    );
    assert_eq!(
        critmap(&["group", "K5T", "--route", "tree-form"]).1,
        "K = (Z/5Z)^2 + Z/10Z\n"
    );
    assert_eq!(
        critmap(&["group", "ex1", "--route", "medial", "--source", "c"]).1,
        "K = Z/6Z\n"
    );
    assert_eq!(
        critmap(&["group", "ex1", "--tree", "a,b,c"]).1,
        "K = Z/6Z\n"
    );
}

#[test]
fn quasitree_listing_and_count() {
    assert_eq!(critmap(&["quasitrees", "ex1", "--count"]).1, "6\n");
    let (_, out, _) = critmap(&["quasitrees", "ex1", "--enumerate"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "{a} genus 0");
    assert_eq!(lines[5], "{b,c,d} genus 1");
    assert_eq!(lines[6], "count 6");
}

#[test]
fn polynomials() {
    assert_eq!(
        critmap(&["genuspoly", "k5t", "--tree", "1,2,6,9"]).1,
        "16t^8 + 116t^6 + 96t^4 + 21t^2 + 1\n"
    );
    assert_eq!(
        critmap(&["genuspoly", "ex1", "--tree", "c"]).1,
        "5t^2 + 1\n"
    );
    let (code, _, err) = critmap(&["genuspoly", "ex1", "--tree", "b"]);
    assert_eq!(code, 1);
    assert!(err.contains("quasi-tree"), "{err}");
    assert_eq!(
        critmap(&["weightedpoly", "ex1"]).1,
        "z_a + z_c + z_d + z_a z_b z_c + z_a z_c z_d + z_b z_c z_d\n"
    );
    assert_eq!(critmap(&["bicycle", "ex1"]).1, "dimension 1, order 2\n");
}

#[test]
fn medial_laplacian() {
    let (code, out, _) = critmap(&["medial", "ex1"]);
    assert_eq!(code, 0);
    assert!(out.contains("SNF 1 1 6 0"));
    assert!(out.ends_with("K = Z/6Z\n"));
    let v = json(&["medial", "ex1"]);
    assert_eq!(
        v["laplacian"],
        serde_json::json!([
            [2, -1, -1, 0],
            [0, 2, -1, -1],
            [0, -1, 2, -1],
            [-2, 0, 0, 2]
        ])
    );
}

#[test]
fn chip_firing_trace() {
    let (code, out, _) = critmap(&[
        "chipfire", "ex1", "--source", "a", "--state", "-1,0,1,0", "--trace",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "fire a -> (-3,1,2,0)\nfire c -> (-3,2,0,1)\nfire b -> (-3,0,1,2)\nfire d -> (-1,0,1,0)\n"
    );
    assert_eq!(
        critmap(&["chipfire", "ex1", "--state", "-1,0,1,0"]).1,
        "(-1,0,1,0)\ncritical true\n"
    );
    let v = json(&["chipfire", "ex1"]);
    assert_eq!(v["critical_states"].as_array().unwrap().len(), 6);
    let (code, _, err) = critmap(&["chipfire", "ex1", "--state", "0,-1,1,0"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn duals() {
    assert_eq!(
        critmap(&["dual", "ex1"]).1,
        "sigma: (a- b- d+)(a+ c- b+ c+ d-)\n"
    );
    assert_eq!(
        critmap(&["dual", "ex1", "--edges", "c"]).1,
        "sigma: (a- b+ c+ d+ a+ c- b- d-)\n"
    );
    assert_eq!(critmap(&["snf", "ex1", "--tree", "c"]).1, "1 1 1 6\n");
}

#[test]
fn json_envelope_has_every_key() {
    for args in [
        &["group", "ex1"][..],
        &["quasitrees", "ex1", "--count"],
        &["snf", "k33t"],
        &["dual", "n3"],
    ] {
        let v = json(args);
        for key in ["map", "group", "quasitrees", "polys", "critical_states"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
    let v = json(&["group", "pett"]);
    assert_eq!(v["map"], "PETT");
    assert_eq!(
        v["group"],
        serde_json::json!({ "torsion": [2, 1270], "free_rank": 0 })
    );
    assert_eq!(
        json(&["quasitrees", "ex1", "--count"])["quasitrees"]["count"],
        6
    );
}

#[test]
fn reads_map_files() {
    let dir = std::env::temp_dir().join(format!("critmap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("triangle.map");
    std::fs::write(
        &good,
        "# a plane triangle\nsigma: (1- 3+)(1+ 2-)\n  (2+ 3-)\n",
    )
    .unwrap();
    assert_eq!(critmap(&["group", good.to_str().unwrap()]).1, "K = Z/3Z\n");
    assert_eq!(json(&["group", good.to_str().unwrap()])["map"], "triangle");
    let bad = dir.join("bad.map");
    std::fs::write(&bad, "sigma: (1- 2+)(1+\n").unwrap();
    let (code, _, err) = critmap(&["group", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(critmap(&["group", "no-such-map"]).0, 1);
    assert_eq!(critmap(&["frobnicate"]).0, 2);
    assert_eq!(critmap(&["group"]).0, 2);
    let (code, out, _) = critmap(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("selfcheck"));
}

#[test]
fn selfcheck_passes_on_fixtures() {
    let (code, out, _) = critmap(&["selfcheck", "ex1", "k5t", "n10", "dm1"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 4);
}
