use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qudit_magic::magic::{certify_product_lf, PatchBound};
use qudit_magic::stabilizer::{parse_tableau, StabilizerGroup};
use serde_json::{json, Value};
use tempfile::TempDir;

fn qmagic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmagic")).current_dir(dir).args(args).output().unwrap()
}

fn run_ok(dir: &Path, args: &[&str]) -> Value {
    let out = qmagic(dir, args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    qmagic(dir, args).status.code().unwrap()
}

fn write_json(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn state_json(q: u64, n: usize, amps: &[(f64, f64)]) -> Value {
    json!({ "q": q, "n": n, "amplitudes": amps.iter().map(|&(re, im)| json!([re, im])).collect::<Vec<_>>() })
}

fn t_state() -> Value {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    state_json(2, 1, &[(h, 0.0), (0.5, 0.5)])
}

#[test]
fn cover_reports_and_writes_family() {
    let dir = TempDir::new().unwrap();
    let v = run_ok(dir.path(), &["cover", "--q", "6", "--n", "1", "--verify"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["members"], 12);
    assert_eq!(v["result"]["verification"]["passed"], true);
    let text = std::fs::read_to_string(dir.path().join("cover-q6-n1.tab")).unwrap();
    let blocks: Vec<&str> = text.split("# member").skip(1).collect();
    assert_eq!(blocks.len(), 12);
    for block in blocks {
        let body = block.split_once('\n').unwrap().1;
        let (q, n, gens) = parse_tableau(body).unwrap();
        assert_eq!((q, n, gens.len()), (6, 1, 1));
        assert!(StabilizerGroup::validate(q, n, gens).unwrap().is_pure());
    }

    let v = run_ok(dir.path(), &["cover", "--q", "2", "--n", "2", "--verify", "--tableau", "two.tab"]);
    assert_eq!(v["result"]["members"], 5);
    assert_eq!(v["result"]["verification"]["passed"], true);
    assert!(dir.path().join("two.tab").exists());
}

#[test]
fn cover_errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["cover", "--q", "1", "--n", "1"]), 64);
    assert_eq!(code(dir.path(), &["cover", "--q", "3", "--n", "2", "--enumeration-budget", "5"]), 2);
    assert_eq!(code(dir.path(), &["cover", "--q", "3"]), 64);
    assert_eq!(code(dir.path(), &["--base", "7", "cover", "--q", "3", "--n", "1"]), 64);
}

#[test]
fn magic_on_stabilizer_state_is_zero() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = write_json(dir.path(), "plus.json", &state_json(2, 1, &[(h, 0.0), (h, 0.0)]));
    let v = run_ok(dir.path(), &["magic", "--state", plus.to_str().unwrap()]);
    let report = &v["result"]["report"];
    for key in ["lf", "s_rel", "s_max_set", "lgr", "lr"] {
        assert!(report[key]["value"].as_f64().unwrap().abs() < 1e-5, "{key}: {}", report[key]);
    }
    assert_eq!(v["result"]["dictionary_size"], 6);
}

#[test]
fn magic_on_t_state_is_chain_ordered() {
    let dir = TempDir::new().unwrap();
    let t = write_json(dir.path(), "t.json", &t_state());
    let v = run_ok(dir.path(), &["magic", "--state", t.to_str().unwrap()]);
    let r = &v["result"]["report"];
    let val = |k: &str| r[k]["value"].as_f64().unwrap();
    assert!(val("lf") > 1e-3);
    let chain = [val("lf"), val("s_rel"), val("s_max_set"), val("lgr"), val("lr")];
    for w in chain.windows(2) {
        assert!(w[0] <= w[1] + 1e-5, "{chain:?}");
    }
    assert_eq!(r["lf"]["status"], "exact");
}

#[test]
fn magic_respects_measure_subset() {
    let dir = TempDir::new().unwrap();
    let t = write_json(dir.path(), "t.json", &t_state());
    let v = run_ok(dir.path(), &["magic", "--state", t.to_str().unwrap(), "--measures", "lf,lr"]);
    let keys: Vec<&String> = v["result"]["report"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["base", "lf", "lr"]);
    assert_eq!(code(dir.path(), &["magic", "--state", t.to_str().unwrap(), "--measures", "mana"]), 64);
}

#[test]
fn malformed_and_oversized_states_are_rejected() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(code(dir.path(), &["magic", "--state", "bad.json"]), 65);
    assert_eq!(code(dir.path(), &["magic", "--state", "missing.json"]), 65);
    write_json(dir.path(), "short.json", &state_json(2, 2, &[(1.0, 0.0)]));
    assert_eq!(code(dir.path(), &["magic", "--state", "short.json"]), 65);
    write_json(dir.path(), "unnormalized.json", &state_json(2, 1, &[(1.0, 0.0), (1.0, 0.0)]));
    assert_eq!(code(dir.path(), &["magic", "--state", "unnormalized.json"]), 65);
    write_json(dir.path(), "t.json", &t_state());
    assert_eq!(code(dir.path(), &["--dense-budget", "1", "magic", "--state", "t.json"]), 2);
}

#[test]
fn rephase_on_z_gives_x_type_label() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("z.tab"), "2 1 1\n1 0 0\n").unwrap();
    let v = run_ok(dir.path(), &["rephase", "--tableau", "z.tab", "--targets", "1"]);
    let label: qudit_magic::pauli::PauliLabel = v["result"]["label"].as_str().unwrap().parse().unwrap();
    assert_eq!(label.a, vec![0]);
    assert_eq!(label.b, vec![1]);

    std::fs::write(dir.path().join("zz.tab"), "3 2 2\n1 0 0 0 0\n0 1 0 0 0\n").unwrap();
    let v = run_ok(dir.path(), &["rephase", "--tableau", "zz.tab", "--targets", "2,1"]);
    let label: qudit_magic::pauli::PauliLabel = v["result"]["label"].as_str().unwrap().parse().unwrap();
    assert_eq!(label.a, vec![0, 0]);
    assert!(label.b.iter().all(|&b| b != 0));

    std::fs::write(dir.path().join("broken.tab"), "2 1 2\n1 0 0\n").unwrap();
    assert_eq!(code(dir.path(), &["rephase", "--tableau", "broken.tab", "--targets", "1"]), 65);
}

#[test]
fn toric_smatrix_table_is_quantized() {
    let dir = TempDir::new().unwrap();
    let v = run_ok(dir.path(), &["toric", "smatrix", "--q", "3", "--lx", "2", "--ly", "3"]);
    let r = &v["result"];
    assert_eq!(r["entries"].as_array().unwrap().len(), 81);
    assert_eq!(r["all_quantized"], true);
    assert_eq!(r["bilinear"], true);
    for e in r["entries"].as_array().unwrap() {
        let z = num_complex::Complex64::new(e["phase"]["re"].as_f64().unwrap(), e["phase"]["im"].as_f64().unwrap());
        assert!((z.powu(3) - 1.0).norm() < 1e-9);
    }
    let v = run_ok(dir.path(), &["toric", "smatrix", "--q", "2", "--lx", "3", "--ly", "3", "--pairs", "1,0:0,1", "1,1:1,1"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!((entries[0]["phase"]["re"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(code(dir.path(), &["toric", "smatrix", "--q", "2", "--lx", "2", "--ly", "2"]), 64);
    assert_eq!(code(dir.path(), &["toric", "smatrix", "--q", "2", "--lx", "3", "--ly", "3", "--pairs", "1:0"]), 64);
}

#[test]
fn toric_annulus_finds_four_sectors() {
    let dir = TempDir::new().unwrap();
    let v = run_ok(dir.path(), &["toric", "annulus", "--q", "2"]);
    assert_eq!(v["result"]["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["result"]["anyons_match"], true);
}

#[test]
fn witness_mi_verdicts() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    write_json(dir.path(), "bell.json", &state_json(2, 2, &[(h, 0.0), (0.0, 0.0), (0.0, 0.0), (h, 0.0)]));
    let v = run_ok(dir.path(), &["witness", "mi", "--state", "bell.json", "--regionA", "0", "--regionB", "1"]);
    assert_eq!(v["result"]["verdict"], "silent");
    assert!((v["result"]["mutual_information"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    write_json(dir.path(), "tuned.json", &state_json(2, 2, &[(c, 0.0), (0.0, 0.0), (0.0, 0.0), (s, 0.0)]));
    let v = run_ok(dir.path(), &["witness", "mi", "--state", "tuned.json", "--regionA", "0", "--regionB", "1"]);
    assert_eq!(v["result"]["verdict"], "fires");
    assert_eq!(code(dir.path(), &["witness", "mi", "--state", "tuned.json", "--regionA", "0", "--regionB", "0"]), 64);
}

#[test]
fn certify_and_assemble_pipeline() {
    let dir = TempDir::new().unwrap();
    write_json(dir.path(), "patches.json", &json!([t_state(), t_state()]));
    let out = qmagic(dir.path(), &["certify", "--patches", "patches.json", "--output", "cert.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cert.json")).unwrap()).unwrap();
    let patches = cert["result"]["patches"].as_array().unwrap();
    let eps = patches[0]["epsilon"].as_f64().unwrap();
    assert!(eps > 0.0);
    let bounds = vec![PatchBound { epsilon: eps, dimension: 2 }; 2];
    let expected = certify_product_lf(&bounds, qudit_magic::dense::LogBase::Two).unwrap();
    assert!((cert["result"]["lf_lower_bound"].as_f64().unwrap() - expected).abs() < 1e-12);

    std::fs::write(dir.path().join("certs.json"), cert["result"].to_string()).unwrap();
    let profile = json!({ "k": 1e-300, "xi": 1.0, "patches": 2, "patch_size": 1.0, "spacing": 1.0, "n": 100.0 });
    write_json(dir.path(), "profile.json", &profile);
    let v = run_ok(dir.path(), &["witness", "assemble", "--profile", "profile.json", "--certs", "certs.json"]);
    assert!((v["result"]["lf_lower_bound"].as_f64().unwrap() - expected).abs() < 1e-12);

    write_json(dir.path(), "bounds.json", &json!([{ "epsilon": eps, "dimension": 2 }, { "epsilon": eps, "dimension": 2 }]));
    let w = run_ok(dir.path(), &["witness", "assemble", "--profile", "profile.json", "--certs", "bounds.json"]);
    assert_eq!(v["result"], w["result"]);

    let hull = run_ok(dir.path(), &["certify", "--patches", "patches.json", "--target", "S"]);
    assert!(hull["result"]["rel_entropy_lower_bound"].as_f64().unwrap() > 0.0);

    write_json(dir.path(), "badprofile.json", &json!({ "k": -1.0, "xi": 1.0, "patches": 2, "patch_size": 1.0, "spacing": 1.0, "n": 100.0 }));
    assert_eq!(code(dir.path(), &["witness", "assemble", "--profile", "badprofile.json", "--certs", "bounds.json"]), 65);
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let dir = TempDir::new().unwrap();
    let amps: Vec<(f64, f64)> = (0..64).map(|i| (((i * 7 % 11) as f64) - 5.0, (i % 3) as f64)).collect();
    let norm = amps.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    let amps: Vec<(f64, f64)> = amps.iter().map(|&(a, b)| (a / norm, b / norm)).collect();
    write_json(dir.path(), "six.json", &state_json(2, 6, &amps));
    let args = ["--seed", "17", "witness", "stability", "--state", "six.json", "--depth", "1", "--regionA", "0,1", "--regionB", "4,5"];
    let first = qmagic(dir.path(), &args);
    let second = qmagic(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 17);
    assert_eq!(v["result"]["holds"], true);

    let t = write_json(dir.path(), "t.json", &t_state());
    let a = qmagic(dir.path(), &["magic", "--state", t.to_str().unwrap()]);
    let b = qmagic(dir.path(), &["magic", "--state", t.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_cleanly() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(dir.path(), &["--help"]), 0);
    assert_eq!(code(dir.path(), &["frobnicate"]), 64);
}
