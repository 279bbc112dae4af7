use std::process::{Command, Output};

use clausius_core::audit::variation_report;
use clausius_core::drude::{moments, ModelParams, Variation};

fn clausius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clausius")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = clausius(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn moments_match_library() {
    let v = json(&["moments", "--gamma", "0.5", "--temp", "1", "--format", "json"]);
    let m = moments(&ModelParams::reduced(0.5, 1.0)).unwrap();
    assert_eq!(v["q2"].as_f64().unwrap(), m.q2);
    assert_eq!(v["p2"].as_f64().unwrap(), m.p2);
    assert_eq!(v["v"].as_f64().unwrap(), m.v);
}

#[test]
fn audit_mass_report() {
    let v = json(&["audit", "--vary", "mass", "--gamma", "10", "--temp", "1"]);
    assert_eq!(v["naive_violated"], serde_json::Value::Bool(true));
    let r = variation_report(&ModelParams::reduced(10.0, 1.0), Variation::Mass).unwrap();
    assert_eq!(v["Y"].as_f64().unwrap(), r.Y);
    for key in ["params", "which", "dQ_s", "dW_s", "dQ_eff_star", "dW_eff_star", "T_dS", "Teff_dS", "Y", "effective_residual"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn figure_csv_and_json() {
    let dir = std::env::temp_dir().join(format!("clausius-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("fig3a.csv");
    let b = dir.join("fig3b.csv");
    for f in [&a, &b] {
        assert!(clausius(&["figure", "3", "--out", f.to_str().unwrap()]).status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "T,gamma_0.5,gamma_1.5,gamma_4,gamma_10");
    assert_eq!(text.lines().count(), 151);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let j = json(&["figure", "3", "--format", "json"]);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    for (i, rec) in rows.records().enumerate() {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<f64>().unwrap(), j["temperatures"][i].as_f64().unwrap());
        for c in 0..4 {
            assert_eq!(rec[c + 1].parse::<f64>().unwrap(), j["columns"][c][i].as_f64().unwrap());
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn densmat_csv() {
    let o = clausius(&["densmat", "--gamma", "4", "--temp", "0.5", "--tolerance", "1e-6"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,value"));
    assert!(lines.next().unwrap().starts_with("0,0,0."));
}

#[test]
fn exit_codes() {
    assert_eq!(clausius(&["moments", "--gamma", "x", "--temp", "1"]).status.code(), Some(2));
    assert_eq!(clausius(&["figure", "8"]).status.code(), Some(2));
    assert_eq!(clausius(&["nonsense"]).status.code(), Some(2));
    assert_eq!(clausius(&["moments", "--gamma", "2", "--temp", "1"]).status.code(), Some(3));
    assert_eq!(clausius(&["densmat", "--gamma", "1", "--temp", "1", "--tolerance", "0.5"]).status.code(), Some(3));
    assert_eq!(clausius(&["audit", "--vary", "damping", "--gamma", "0", "--temp", "1"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = clausius(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with("pass")));
    let v = json(&["selftest", "--json"]);
    assert_eq!(v.as_array().unwrap().len(), 7);
}
