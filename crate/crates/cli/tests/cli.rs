use std::process::{Command, Output};

use amoeba_core::factor::{replay_verify, FerObject};
use amoeba_core::families::{build, Family};
use amoeba_core::io::from_graph6;
use amoeba_core::{EdgeReplacement, Permutation};
use serde_json::Value;

fn amoeba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .args(args)
        .env_remove("AMOEBA_GUARD_OVERRIDE")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn edge(v: &Value) -> (u32, u32) {
    (v[0].as_u64().unwrap() as u32, v[1].as_u64().unwrap() as u32)
}

#[test]
fn recognize_t5() {
    let v = json_of(&amoeba(&["recognize", "--family", "T", "--k", "5"]));
    assert_eq!(v["is_local"], true);
    assert_eq!(v["is_global"], true);
    assert_eq!(v["fer_order"], "3628800");
}

#[test]
fn recognize_from_graph6_and_json() {
    let path = amoeba(&["construct", "--family", "T", "--k", "3", "--format", "graph6"]);
    let g6 = String::from_utf8(path.stdout).unwrap();
    let v = json_of(&amoeba(&["recognize", "--graph6", g6.trim()]));
    assert_eq!(v["is_local"], true);
    let k3 = json_of(&amoeba(&["recognize", "--json", r#"{"labels":[0,1,2],"edges":[[0,1],[1,2],[0,2]]}"#]));
    assert_eq!(k3["is_local"], true);
    assert_eq!(k3["is_global"], false);
}

#[test]
fn construct_graph6_round_trips() {
    for (f, k) in [("T", 7), ("A", 5), ("B", 4)] {
        let v = json_of(&amoeba(&["construct", "--family", f, "--k", &k.to_string()]));
        let family: Family = f.parse().unwrap();
        let expected = build(family, k).unwrap().graph;
        let parsed = from_graph6(v["graph6"].as_str().unwrap()).unwrap();
        assert_eq!(parsed, expected);
        let text = amoeba(&["construct", "--family", f, "--k", &k.to_string(), "--format", "graph6"]);
        assert_eq!(from_graph6(String::from_utf8(text.stdout).unwrap().trim()).unwrap(), expected);
    }
    let dot = amoeba(&["construct", "--family", "T", "--k", "4", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("--"));
}

#[test]
fn factor_trace_replays() {
    let v = json_of(&amoeba(&["factor", "--family", "T", "--k", "5", "--perm", "(0 2)", "--verify"]));
    assert_eq!(v["verified"], true);
    let images: Vec<u32> = serde_json::from_value(v["perm"].clone()).unwrap();
    let chain: Vec<EdgeReplacement> = v["chain"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| EdgeReplacement::new(edge(&r["remove"]), edge(&r["add"])).unwrap())
        .collect();
    assert_eq!(chain.len() as u64, v["length"].as_u64().unwrap());
    let f = FerObject {
        perm: Permutation::from_images(&images).unwrap(),
        chain,
    };
    assert_eq!(f.perm, Permutation::parse_cycles("(0 2)", 0..10).unwrap());
    assert_eq!(replay_verify(&f, 5), Ok(()));

    let arr = json_of(&amoeba(&["factor", "--family", "T", "--k", "5", "--perm", "[2,1,0,3,4,5,6,7,8,9]", "--simplify", "--no-memo"]));
    assert_eq!(arr["perm"], v["perm"]);
    assert!(arr["length"].as_u64().unwrap() <= v["length"].as_u64().unwrap());
}

#[test]
fn bounds_text() {
    let v = json_of(&amoeba(&["balance", "bounds", "--family", "B", "--k", "5", "--n", "100"]));
    assert_eq!(v["upper"], "3n-6 → 294");
    let t6 = json_of(&amoeba(&["balance", "bounds", "--family", "T", "--k", "6", "--n", "10"]));
    assert_eq!(t6["lower"], "n-1 → 9");
    assert_eq!(t6["upper"], "2n-2 → 18");
}

#[test]
fn brute_force_commands() {
    let v = json_of(&amoeba(&["balance", "brute", "--family", "T", "--k", "4", "--n", "6"]));
    assert_eq!(v["bal"], 1);
    let t4 = json_of(&amoeba(&["construct", "--family", "T", "--k", "4"]));
    let ex = json_of(&amoeba(&["extremal", "--family-of", t4["graph6"].as_str().unwrap(), "--n", "6"]));
    assert_eq!(ex["ex"], 1);
    let out = amoeba(&["bench", "--k-min", "5", "--k-max", "6", "--reps", "1"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("k,n,seconds\n5,10,"));
}

#[test]
fn exit_codes() {
    assert_eq!(amoeba(&["recognize", "--family", "T", "--k", "6"]).status.code(), Some(2));
    assert_eq!(amoeba(&["balance", "brute", "--family", "T", "--k", "4", "--n", "9"]).status.code(), Some(2));
    assert_eq!(amoeba(&["factor", "--family", "T", "--k", "5", "--perm", "(0 12)"]).status.code(), Some(1));
    assert_eq!(amoeba(&["recognize", "--graph6", "\u{1}"]).status.code(), Some(1));
    assert_eq!(amoeba(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(amoeba(&["balance", "bounds", "--family", "T", "--k", "5", "--n", "10"]).status.code(), Some(1));
    assert_eq!(amoeba(&["recognize", "--family", "T", "--k", "4", "--format", "graph6"]).status.code(), Some(1));
}

#[test]
fn guard_override_env() {
    let forced = Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .args(["bench", "--k-min", "19", "--k-max", "18"])
        .env("AMOEBA_GUARD_OVERRIDE", "1")
        .output()
        .unwrap();
    // Past the guard, the empty range is rejected as bad input.
    assert_eq!(forced.status.code(), Some(1));
    let t6 = Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .args(["recognize", "--family", "T", "--k", "6"])
        .env("AMOEBA_GUARD_OVERRIDE", "1")
        .output()
        .unwrap();
    assert_ne!(t6.status.code(), Some(2));
}

#[test]
fn human_format() {
    let out = amoeba(&["--format", "human", "balance", "bounds", "--family", "T", "--k", "7", "--n", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3n-5 → 295"), "{text}");
}
