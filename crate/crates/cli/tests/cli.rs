use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn timeslice<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_timeslice")).args(args).output().unwrap()
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(out: Output) -> Value {
    serde_json::from_str(&ok(out)).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn rugby(dir: &Path) -> PathBuf {
    let path = dir.join("rugby.csv");
    ok(timeslice([
        "synth".as_ref(),
        "--preset".as_ref(),
        "rugby".as_ref(),
        "--seed".as_ref(),
        "7".as_ref(),
        "--out".as_ref(),
        path.as_os_str(),
    ]));
    path
}

#[test]
fn uniform_slices_of_418_days_are_35_days_wide() {
    let dir = tempfile::tempdir().unwrap();
    let data = rugby(dir.path());
    let doc = json(timeslice([
        "slice".as_ref(),
        data.as_os_str(),
        "--method".as_ref(),
        "uniform".as_ref(),
        "--slices".as_ref(),
        "12".as_ref(),
    ]));
    let b = floats(&doc["boundaries"]);
    assert_eq!(b.len(), 13);
    for w in b.windows(2) {
        let days = (w[1] - w[0]) / 86_400.0;
        assert!((days - 418.0 / 12.0).abs() < 1e-6, "{days}");
        assert!((days - 35.0).abs() < 0.2);
    }
}

#[test]
fn equal_events_on_seventeen_events() {
    let doc = json(timeslice([
        "slice".as_ref(),
        fixture("seventeen.csv").as_os_str(),
        "--method".as_ref(),
        "equal-events".as_ref(),
        "--slices".as_ref(),
        "3".as_ref(),
    ]));
    assert_eq!(doc["method"], "equal-events");
    assert_eq!(doc["counts"], serde_json::json!([6, 5, 6]));
}

#[test]
fn one_hist_eq_slice_spans_everything() {
    let doc = json(timeslice([
        "slice".as_ref(),
        fixture("seventeen.csv").as_os_str(),
        "--method".as_ref(),
        "hist-eq".as_ref(),
        "--slices".as_ref(),
        "1".as_ref(),
    ]));
    assert_eq!(floats(&doc["boundaries"]), vec![0.0, 50.0]);
    assert_eq!(doc["counts"], serde_json::json!([17]));
}

fn metrics(name: &str, k: &str) -> Vec<Value> {
    let v = json(timeslice([
        "metrics".as_ref(),
        fixture(name).as_os_str(),
        "--slices".as_ref(),
        k.as_ref(),
        "--json".as_ref(),
    ]));
    v.as_array().unwrap().clone()
}

#[test]
fn metrics_on_uniform_stream_have_zero_variance() {
    let rows = metrics("uniform.csv", "4");
    let methods: Vec<&str> = rows.iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["uniform", "equal-events", "hist-eq"]);
    for r in &rows {
        assert_eq!(r["variance"], 0.0);
        assert_eq!(r["per_slice_counts"], serde_json::json!([3, 3, 3, 3]));
    }
}

#[test]
fn metrics_on_two_bursts_favour_hist_eq() {
    let rows = metrics("two_burst.csv", "4");
    let variance = |m: &str| {
        rows.iter()
            .find(|r| r["method"] == m)
            .unwrap()["variance"]
            .as_f64()
            .unwrap()
    };
    assert!(variance("hist-eq") < variance("uniform"));
}

#[test]
fn metrics_table_lists_methods() {
    let table = ok(timeslice([
        "metrics".as_ref(),
        fixture("two_burst.csv").as_os_str(),
        "-k".as_ref(),
        "4".as_ref(),
    ]));
    let first: Vec<&str> = table.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(first, ["uniform", "equal-events", "hist-eq"]);
}

#[test]
fn empty_input_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "# nothing here\n\n").unwrap();
    let out = timeslice(["metrics".as_ref(), empty.as_os_str(), "--slices".as_ref(), "3".as_ref()]);
    assert_eq!(out.status.code(), Some(5));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.contains("empty"));
}

#[test]
fn error_paths_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let malformed = write("bad.csv", "a,b,1\na,b\n");
    let single = write("single.csv", "a,b,5\na,c,5\n");
    let few = write("few.csv", "a,b,1\na,b,2\n");
    let coarse = write("coarse.csv", "a,b,0\na,b,0.5\na,b,10\n");
    let bad_cfg = write("bad.toml", "slices = \"many\"\n");
    let missing = dir.path().join("missing.csv");

    let run = |args: &[&std::ffi::OsStr]| timeslice(args).status.code().unwrap();
    let s = |x: &'static str| std::ffi::OsStr::new(x);
    let codes = [
        run(&[s("slice"), missing.as_os_str(), s("-k"), s("2")]),
        run(&[s("slice"), malformed.as_os_str(), s("-k"), s("2")]),
        run(&[s("slice"), few.as_os_str(), s("-k"), s("0"), s("--method"), s("uniform")]),
        run(&[s("slice"), single.as_os_str(), s("-k"), s("2"), s("--method"), s("uniform")]),
        run(&[s("slice"), few.as_os_str(), s("-k"), s("3"), s("--method"), s("equal-events")]),
        run(&[s("slice"), coarse.as_os_str(), s("-k"), s("3"), s("--bin-width"), s("4")]),
        run(&[s("slice"), single.as_os_str(), s("-k"), s("1")]),
        run(&[s("slice"), few.as_os_str(), s("--config"), bad_cfg.as_os_str()]),
        run(&[s("slice"), few.as_os_str(), s("--method"), s("fastest"), s("-k"), s("2")]),
    ];
    assert_eq!(codes, [3, 4, 6, 7, 8, 9, 10, 13, 2]);
}

#[test]
fn render_draws_k_panels_deterministically() {
    let svg = |k: &str| {
        ok(timeslice([
            "render".as_ref(),
            fixture("two_burst.csv").as_os_str(),
            "--slices".as_ref(),
            k.as_ref(),
            "--iterations".as_ref(),
            "100".as_ref(),
        ]))
    };
    for k in ["1", "3", "5"] {
        let a = svg(k);
        assert_eq!(a, svg(k));
        let doc = roxmltree::Document::parse(&a).unwrap();
        let panels = doc.descendants().filter(|n| n.attribute("class") == Some("panel")).count();
        assert_eq!(panels.to_string(), k);
    }
}

#[test]
fn render_matches_golden_file() {
    let svg = ok(timeslice([
        "render".as_ref(),
        fixture("two_burst.csv").as_os_str(),
        "--method".as_ref(),
        "hist-eq".as_ref(),
        "-k".as_ref(),
        "4".as_ref(),
        "--seed".as_ref(),
        "0".as_ref(),
        "--iterations".as_ref(),
        "200".as_ref(),
        "--grid".as_ref(),
        "2x2".as_ref(),
        "--canvas".as_ref(),
        "800x600".as_ref(),
    ]));
    let golden = std::fs::read_to_string(fixture("two_burst_k4.svg")).unwrap();
    assert!(svg == golden, "rendered SVG differs from tests/fixtures/two_burst_k4.svg");
}

#[test]
fn render_accepts_saved_slicing_and_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("two_burst.csv");
    let slicing = dir.path().join("s.json");
    let embedding = dir.path().join("e.json");
    ok(timeslice([
        "slice".as_ref(),
        input.as_os_str(),
        "-k".as_ref(),
        "4".as_ref(),
        "--out".as_ref(),
        slicing.as_os_str(),
    ]));
    ok(timeslice([
        "layout".as_ref(),
        input.as_os_str(),
        "--iterations".as_ref(),
        "200".as_ref(),
        "--out".as_ref(),
        embedding.as_os_str(),
    ]));
    let from_files = ok(timeslice([
        "render".as_ref(),
        input.as_os_str(),
        "--slicing-file".as_ref(),
        slicing.as_os_str(),
        "--embedding".as_ref(),
        embedding.as_os_str(),
        "--grid".as_ref(),
        "2x2".as_ref(),
        "--canvas".as_ref(),
        "800x600".as_ref(),
    ]));
    let golden = std::fs::read_to_string(fixture("two_burst_k4.svg")).unwrap();
    assert!(from_files == golden);

    // a slicing from another stream is refused
    let out = timeslice([
        "render".as_ref(),
        fixture("uniform.csv").as_os_str(),
        "--slicing-file".as_ref(),
        slicing.as_os_str(),
    ]);
    assert_eq!(out.status.code(), Some(12));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "method = \"equal-events\"\nslices = 3\n").unwrap();
    let input = fixture("seventeen.csv");
    let doc = json(timeslice(["--config".as_ref(), cfg.as_os_str(), "slice".as_ref(), input.as_os_str()]));
    assert_eq!(doc["counts"], serde_json::json!([6, 5, 6]));

    let doc = json(timeslice([
        "slice".as_ref(),
        input.as_os_str(),
        "--config".as_ref(),
        cfg.as_os_str(),
        "--method".as_ref(),
        "uniform".as_ref(),
    ]));
    assert_eq!(doc["method"], "uniform");
    assert_eq!(doc["k"], 3);
}

#[test]
fn synth_is_seeded() {
    let run = |seed: &str| ok(timeslice(["synth", "--preset", "rugby", "--seed", seed]));
    let a = run("3");
    assert_eq!(a, run("3"));
    assert_ne!(a, run("4"));

    let mut labels: Vec<&str> = a
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| l.split(',').take(2))
        .collect();
    labels.sort_unstable();
    labels.dedup();
    assert_eq!(labels.len(), 12);
}

#[test]
fn synth_spec_file_sets_event_count() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    std::fs::write(
        &spec,
        "extent = 100.0\nbackground-rate = 0.0\nnodes = 4\nseed = 9\n\n[[bursts]]\nstart = 10.0\nend = 20.0\nevents = 37\n",
    )
    .unwrap();
    let text = ok(timeslice(["synth".as_ref(), "--spec".as_ref(), spec.as_os_str()]));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 37);

    std::fs::write(&spec, "extent = 100.0\nrate = 2.0\n").unwrap();
    let out = timeslice(["synth".as_ref(), "--spec".as_ref(), spec.as_os_str()]);
    assert_eq!(out.status.code(), Some(13));
}
