mod common;

use std::fs;

use common::{fixture, gerbe, int};

#[test]
fn levels_examples_and_exit_codes() {
    let sl3 = gerbe(&["levels", "A", "2", "SL", "SL", "--format", "json"]);
    assert_eq!(sl3.code, 0);
    let r = sl3.json();
    assert_eq!(r["verdict"], "match");
    assert_eq!(r["allowable"][0]["description"], "b0");

    let gl3 = gerbe(&["levels", "A", "2", "GL", "GL", "--format", "json"]).json();
    assert_eq!(gl3["allowable"].as_array().unwrap().len(), 2);

    let so5 = gerbe(&["levels", "B", "2", "SO", "SO"]);
    assert_eq!(so5.code, 3);
    assert!(so5.text().contains("verdict: mismatch"));
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(gerbe(&["levels", "Q", "2", "SL", "SL"]).code, 1);
    assert_eq!(gerbe(&["levels", "A", "2", "Spin", "Spin"]).code, 1);
    assert_eq!(gerbe(&["obstruction", "B", "3", "Spin", "--xi", "1/2,x,0"]).code, 1);
    assert_eq!(gerbe(&["obstruction", "B", "3", "Spin", "--xi", "1/2,0"]).code, 1);
    assert_eq!(gerbe(&["obstruction", "A", "2", "SL", "--xi", "0,0,0", "--level", "1/2*b0"]).code, 1);
    assert_eq!(gerbe(&["cohomology", &fixture("z2_extension.json"), "--degree", "1"]).code, 1);
    assert_eq!(gerbe(&["extension", &fixture("z3_bad_extension.json")]).code, 1);
    assert_eq!(gerbe(&["levels", "--isogeny", &fixture("bad_datum.json")]).code, 1);
    assert_eq!(gerbe(&["frobnicate"]).code, 1);
    let missing = gerbe(&["cohomology", "/nonexistent.json", "--degree", "0"]);
    assert_eq!(missing.code, 1);
    assert!(missing.stderr.contains("cannot read"));
}

#[test]
fn caps_exit_with_two() {
    let r = gerbe(&["levels", "B", "3", "Spin", "Spin", "--max-weyl-order", "10"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    let r = gerbe(&["scan", "A", "4", "SL", "--max-denominator", "40"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn text_and_csv_carry_a_version_header_and_json_does_not() {
    let v = format!("# gerbe {}\n", env!("CARGO_PKG_VERSION"));
    assert!(gerbe(&["levels", "A", "1", "SL", "SL"]).text().starts_with(&v));
    let csv = gerbe(&["levels", "A", "1", "SL", "SL", "--format", "csv"]).text();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(v.trim_end()));
    assert!(lines.next().unwrap().starts_with("series,rank,source,target"));
    assert!(gerbe(&["levels", "A", "1", "SL", "SL", "--format", "json"]).text().starts_with('{'));
}

#[test]
fn out_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("gerbe-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("atlas.csv");
    let r = gerbe(&["atlas", "--range", "C:2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(fs::read(&path).unwrap(), r.stdout);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn atlas_rows_are_ordered_and_type_c_has_no_claim() {
    let empty = gerbe(&["atlas", "--range", "", "--format", "json"]);
    assert_eq!(empty.code, 0);
    assert_eq!(empty.json()["rows"].as_array().unwrap().len(), 0);

    let c = gerbe(&["atlas", "--range", "C:2-3", "--format", "json"]);
    assert_eq!(c.code, 0);
    let rows = c.json()["rows"].as_array().unwrap().clone();
    let keys: Vec<(i64, String, String)> = rows
        .iter()
        .map(|r| (int(&r["rank"]), r["source_form"].as_str().unwrap().into(), r["target_form"].as_str().unwrap().into()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &rows {
        let v = &r["report"]["verdict"];
        if r["source_form"] == "Sp" && r["target_form"] == "Sp" {
            assert_eq!(v, "match");
        } else {
            assert_eq!(v, "no-claim");
        }
    }
}

#[test]
fn atlas_isolates_failing_rows() {
    // type D starts at rank 2, so the D rows error while the A rows still run
    let r = gerbe(&["atlas", "--range", "D:1,A:1", "--format", "json"]);
    let rows = r.json()["rows"].as_array().unwrap().clone();
    assert!(rows.iter().any(|x| x["error"].is_string()));
    assert!(rows.iter().any(|x| x["report"]["verdict"] == "match"));
}

#[test]
fn claim_fixture_overrides_the_builtin_table() {
    let dir = std::env::temp_dir().join(format!("gerbe-claims-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("claims.json");
    let table = r#"{"claims":[{"series":"B","source":"SO","target":"SO","min_rank":2,"generators":[{"b0":"1"}],"label":"corrected"}]}"#;
    fs::write(&path, table).unwrap();
    let r = gerbe(&["levels", "B", "3", "SO", "SO", "--fixture", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["verdict"], "match");
    let other = gerbe(&["levels", "A", "2", "SL", "SL", "--fixture", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(other.json()["verdict"], "no-claim");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn printed_datum_reads_back() {
    let dir = std::env::temp_dir().join(format!("gerbe-datum-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let printed = gerbe(&["datum", "D", "4", "Spin", "--target", "PSO", "--format", "json"]).json();
    assert_eq!(printed["passed"], true);
    let iso = &printed["isogeny"];
    let pair = serde_json::json!({ "source": iso["source"], "target": iso["target"] });
    let path = dir.join("spin8_pso8.json");
    fs::write(&path, serde_json::to_string(&pair).unwrap()).unwrap();
    let from_file = gerbe(&["levels", "--isogeny", path.to_str().unwrap(), "--format", "json"]).json();
    let classical = gerbe(&["levels", "D", "4", "Spin", "PSO", "--format", "json"]).json();
    assert_eq!(from_file["allowable"], classical["allowable"]);
    assert_eq!(from_file["verdict"], "no-claim");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hand_built_g2() {
    let g2 = fixture("g2_datum.json");
    let d = gerbe(&["datum", "--isogeny", &g2, "--format", "json"]);
    assert_eq!(d.code, 0);
    let l = gerbe(&["levels", "--isogeny", &g2, "--format", "json"]).json();
    assert_eq!(int(&l["weyl_order"]), 12);
    assert_eq!(l["allowable"][0]["description"], "b0");
    let bad = gerbe(&["datum", "--isogeny", &fixture("bad_datum.json")]);
    assert_eq!(bad.code, 1);
    assert!(bad.text().contains("INVALID"));
}

#[test]
fn obstruction_certificate_is_self_contained() {
    let r = gerbe(&["obstruction", "B", "3", "Spin", "--xi", "1/2,-1/2,0", "--format", "json"]).json();
    // enough to recheck c_w = B·d_w without rerunning
    let b = &r["level"]["matrix"];
    for e in r["cocycle"].as_array().unwrap() {
        let d: Vec<i64> = e["d"].as_array().unwrap().iter().map(int).collect();
        let c: Vec<i64> = e["c"].as_array().unwrap().iter().map(int).collect();
        let bd: Vec<i64> = b.as_array().unwrap().iter().map(|row| row.as_array().unwrap().iter().zip(&d).map(|(x, y)| int(x) * y).sum()).collect();
        assert_eq!(bd, c);
    }
    // basis coordinates give the same answer
    let den = int(&r["xi"]["den"]);
    let coords: Vec<String> = r["xi"]["num"].as_array().unwrap().iter().map(|x| format!("{}/{den}", int(x))).collect();
    let same = gerbe(&["obstruction", "B", "3", "Spin", "--xi", &coords.join(","), "--basis", "--format", "json"]).json();
    assert_eq!(same["xi_ambient"], r["xi_ambient"]);
    assert_eq!(same["class_order"], r["class_order"]);
}

#[test]
fn cohomology_fixtures() {
    let o = gerbe(&["cohomology", &fixture("octahedron.json"), "--degree", "2"]);
    assert!(o.text().contains("H^2(N; Z) = Z\n"));
    let loop_class = gerbe(&[
        "cohomology",
        &fixture("circle.json"),
        "--degree",
        "1",
        "--cochain",
        &fixture("circle_loop.json"),
        "--format",
        "json",
    ])
    .json();
    assert_eq!(loop_class["cochain"]["class"].as_array().unwrap().len(), 1);
    assert!(loop_class["cochain"]["trivialization"].is_null());
    let triv = gerbe(&["equivariant", &fixture("trivial_group.json"), "--degree", "1", "--format", "json"]).json();
    let plain = gerbe(&["cohomology", &fixture("circle.json"), "--degree", "1", "--format", "json"]).json();
    assert_eq!(triv["group"], plain["group"]);
    let z3 = gerbe(&["equivariant", &fixture("z3_point.json"), "--degree", "2", "--format", "json"]).json();
    assert_eq!(z3["group_text"], "Z/3");
}

#[test]
fn cap_on_nerve_dimension_is_reported() {
    let dir = std::env::temp_dir().join(format!("gerbe-nerve-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("capped.json");
    fs::write(&path, r#"{"cover":[[0,1],[0,2],[0,3]],"max_dim":1}"#).unwrap();
    let r = gerbe(&["cohomology", path.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    fs::remove_dir_all(&dir).unwrap();
}
