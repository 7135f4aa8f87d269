use std::path::Path;
use std::process::{Command, Output};

use asymptote_cli::{ingest, ingest_reader, write_csv};
use asymptote_core::detect::detect_au;
use asymptote_core::{GalleryFunction, GalleryKind, SampledFunction, TailWindow, Verdict};
use serde_json::Value;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymptote"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn sampled(kind: GalleryKind, to: f64, step: f64) -> SampledFunction {
    GalleryFunction::of(kind).sample(&TailWindow::new(0.0, to).unwrap(), step).unwrap()
}

#[test]
fn ingest_identity() {
    let t = ingest_reader("t,f\n0,0\n1,1\n".as_bytes()).unwrap();
    let f = t.channel("f").unwrap();
    assert_eq!(f.times(), &[0.0, 1.0]);
    assert_eq!(f.values(), &[0.0, 1.0]);
}

#[test]
fn ingest_duplicate_time_names_the_line() {
    let err = ingest_reader("t,f\n0,0\n1,1\n1,2\n".as_bytes()).unwrap_err();
    assert_eq!(err.to_string(), "non-monotone at line 4");
}

#[test]
fn ingest_rejects_bad_files() {
    for bad in ["x,f\n0,0\n", "t,f\n0,NaN\n", "t,f\n0,inf\n", "t,f\n0\n", "t,f,f\n0,1,2\n", "t,f\n0,1\n1,abc\n"] {
        assert!(ingest_reader(bad.as_bytes()).is_err(), "{bad:?}");
    }
    let crlf = ingest_reader("t,f,tag\r\n0,1,int\r\n0.5,2,\r\n".as_bytes()).unwrap();
    assert_eq!(crlf.channel("f").unwrap().len(), 2);
}

#[test]
fn punctured_exp_round_trips_through_csv() {
    let f = sampled(GalleryKind::PuncturedExp, 20.0, 0.01);
    let mut buf = Vec::new();
    write_csv(&mut buf, &[("f".into(), f.clone())], true).unwrap();
    let back = ingest_reader(buf.as_slice()).unwrap();
    let g = back.channel("f").unwrap();
    assert_eq!(g.times(), f.times());
    assert_eq!(g.values(), f.values());
    assert_eq!(g.tags(), f.tags());
}

#[test]
#[allow(clippy::approx_constant)]
fn export_ingest_analyze_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["gallery", "--name", "sine", "--from", "0", "--to", "6.283", "--step", "0.001", "--out", "s.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let file = ingest(&dir.path().join("s.csv")).unwrap();
    let f = file.channel("f").unwrap();
    let direct = GalleryFunction::of(GalleryKind::Sine)
        .sample(&TailWindow::new(0.0, 6.283).unwrap(), 0.001)
        .unwrap();
    assert_eq!(f.values(), direct.values());

    let run = bin(&["analyze", "--input", "s.csv", "--property", "au", "--eps", "0.1"], dir.path());
    assert_eq!(run.status.code(), Some(0));
    let r = report(&run);
    assert_eq!(r["status"], "holds");
    let from_cli: Verdict = serde_json::from_value(r["result"]["verdict"].clone()).unwrap();
    let in_memory = detect_au(&direct, 0.1, &direct.full_window().unwrap()).unwrap();
    assert_eq!(from_cli, in_memory);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let gal = ["gallery", "--name", "punctured_exp", "--to", "20", "--step", "0.01", "--tag-integers"];
    let a = bin(&gal, dir.path());
    let b = bin(&gal, dir.path());
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(dir.path().join("p.csv"), &a.stdout).unwrap();
    for args in [
        &["analyze", "--input", "p.csv", "--property", "au", "--eps", "0.05"][..],
        &["approx", "--input", "p.csv", "--eps", "0.1"][..],
        &["decompose", "--input", "p.csv", "--eps", "0.5", "--stages", "3"][..],
        &["theorem", "--input", "p.csv", "--case", "integral", "--eps", "0.05"][..],
    ] {
        let x = bin(args, dir.path());
        let y = bin(args, dir.path());
        assert!(!x.stdout.is_empty());
        assert_eq!(x.stdout, y.stdout, "{args:?}");
    }
}

#[test]
fn sine_square_is_refuted_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    bin(
        &["gallery", "--name", "sine_square", "--to", "200", "--step", "0.001", "--out", "chirp.csv"],
        dir.path(),
    );
    let run = bin(&["analyze", "--input", "chirp.csv", "--property", "au", "--eps", "0.5"], dir.path());
    assert_eq!(run.status.code(), Some(1));
    let r = report(&run);
    assert_eq!(r["status"], "refuted");
    let w = &r["result"]["verdict"]["witness"];
    let (s, t, gap) = (w["s"].as_f64().unwrap(), w["t"].as_f64().unwrap(), w["gap"].as_f64().unwrap());
    assert!(gap >= 0.5);
    assert!((t - s).abs() <= 0.01);
    assert!(((t * t).sin() - (s * s).sin()).abs() >= 0.5);
}

#[test]
fn richardson_coefficients_final_value() {
    let dir = tempfile::tempdir().unwrap();
    let run = bin(&["richardson", "--coeffs", "1,1,1,1", "--h", "1"], dir.path());
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(report(&run)["result"]["final_value"].as_f64(), Some(0.328125));
}

#[test]
fn exit_code_matches_status() {
    let dir = tempfile::tempdir().unwrap();
    bin(&["gallery", "--name", "sine", "--to", "1", "--step", "0.1", "--out", "short.csv"], dir.path());
    let cases: [(&[&str], i32); 7] = [
        (&["analyze", "--input", "short.csv", "--property", "au", "--eps", "0.1"], 2),
        (&["analyze", "--input", "missing.csv", "--property", "au", "--eps", "0.1"], 1),
        (&["croft", "--name", "spike_train", "--params", "1"], 0),
        (&["croft", "--name", "sine", "--n-max", "1000"], 1),
        (&["richardson", "--derive", "--n", "2", "--t", "1", "--h", "0.1", "--name", "sine"], 0),
        (&["analyze", "--input", "short.csv", "--property", "au"], 1),
        (&["frobnicate"], 1),
    ];
    for (args, code) in cases {
        let run = bin(args, dir.path());
        assert_eq!(run.status.code(), Some(code), "{args:?}");
        if let Ok(r) = serde_json::from_slice::<Value>(&run.stdout) {
            let status = r["status"].as_str().unwrap();
            let expected = match status {
                "holds" | "ok" => 0,
                "inconclusive" => 2,
                _ => 1,
            };
            assert_eq!(expected, code, "{args:?}");
        }
    }
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let run = bin(&["richardson", "--coeffs", "3,4", "--out", "r.json"], dir.path());
    assert!(run.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["result"]["final_coefficient"].as_f64(), Some(2.0));
}

#[test]
fn tag_integers_controls_tag_column() {
    let dir = tempfile::tempdir().unwrap();
    let plain = bin(&["gallery", "--name", "sine", "--to", "2", "--step", "0.5"], dir.path());
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.starts_with("t,f\n"));
    let tagged = bin(&["gallery", "--name", "sine", "--to", "2", "--step", "0.5", "--tag-integers"], dir.path());
    let text = String::from_utf8(tagged.stdout).unwrap();
    assert!(text.starts_with("t,f,tag\n"));
    assert!(text.contains("1,0.8414709848078965,int"));
    let file = ingest_reader(text.as_bytes()).unwrap();
    assert_eq!(file.channel("f").unwrap().tags().iter().flatten().count(), 3);
}

#[test]
fn gallery_derivative_columns() {
    let dir = tempfile::tempdir().unwrap();
    let run = bin(
        &["gallery", "--name", "damped_sine", "--to", "1", "--step", "0.25", "--derivatives", "2"],
        dir.path(),
    );
    let file = ingest_reader(run.stdout.as_slice()).unwrap();
    assert_eq!(file.channel_names(), vec!["f", "df", "d2f"]);
    assert_eq!(file.channel("df").unwrap().values()[0], 1.0);
}
