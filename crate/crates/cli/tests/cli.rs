use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use volasym::synth::{synth_prices, SynthSpec};

fn volasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volasym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn write_series(dir: &Path, name: &str, spec: &SynthSpec) -> PathBuf {
    let path = dir.join(format!("{name}.csv"));
    fs::write(&path, synth_prices(spec).unwrap().to_csv()).unwrap();
    path
}

#[test]
fn synth_regenerates_bundled_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen.csv");
    let status = volasym(&[
        "synth",
        "--kind",
        "coupled_vol",
        "--n",
        "5000",
        "--coupling",
        "1",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", stderr(&status));
    assert_eq!(
        fs::read(out).unwrap(),
        fs::read(data("coupled_vol_5000.csv")).unwrap()
    );
}

#[test]
fn synth_copula_pairs_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pairs.csv");
    let status = volasym(&[
        "synth",
        "--kind",
        "copula_pair",
        "--n",
        "100",
        "--rho",
        "-0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", stderr(&status));
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().next(), Some("x,y"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn empty_file_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.csv");
    fs::write(&input, "").unwrap();
    let out = volasym(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("reason=empty-input"), "{err}");
}

#[test]
fn missing_column_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.csv");
    fs::write(&input, "Date,Open,Last\n2020-01-02,1,2\n").unwrap();
    let out = volasym(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("reason=missing-column"));
}

#[test]
fn flat_prices_exit_with_degeneracy() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.csv");
    let mut text = String::from("Date,Open,Close\n");
    for d in volasym::synth::business_days(60) {
        text.push_str(&format!("{},100,100\n", d.format("%Y-%m-%d")));
    }
    fs::write(&input, text).unwrap();
    let out = volasym(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("reason=degenerate-sample"));
}

#[test]
fn configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("coupled_vol_5000.csv");
    let base = [
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ];
    for extra in [
        &["--method", "mutual_information"][..],
        &["--format", "png"],
        &["--block-len", "5"],
        &["--boot", "100"],
        &["--boot", "300", "--block-len", "4000"],
        &["--max-abs-logreturn", "-1"],
        &["--date-format", "mm/dd/yy"],
    ] {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        let out = volasym(&args);
        assert_eq!(out.status.code(), Some(2), "{extra:?}: {}", stderr(&out));
    }
    let out = volasym(&["analyze", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("reason=usage"));
}

#[test]
fn european_dialect_with_kendall() {
    let dir = tempfile::tempdir().unwrap();
    let prices = synth_prices(&SynthSpec::coupled_vol(200, 1.0, 3)).unwrap();
    let mut text = String::from("Datum;Eroeffnung;Schluss\n");
    for b in &prices.bars {
        let fmt = |v: f64| format!("{v:.4}").replace('.', ",");
        text.push_str(&format!(
            "{};{};{}\n",
            b.date.format("%d.%m.%Y"),
            fmt(b.open),
            fmt(b.close)
        ));
    }
    let input = dir.path().join("eu.csv");
    fs::write(&input, text).unwrap();
    let out_dir = dir.path().join("out");
    let out = volasym(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--date-col",
        "Datum",
        "--open-col",
        "Eroeffnung",
        "--close-col",
        "Schluss",
        "--date-format",
        "dmy",
        "--delimiter",
        ";",
        "--decimal-comma",
        "--method",
        "kendall",
        "--format",
        "json",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("eu.report.json")).unwrap()).unwrap();
    assert_eq!(report["method"], "kendall");
    assert_eq!(report["n_pairs"], 199);
    assert!(report["c_nd"].as_f64().unwrap() > report["c_dn"].as_f64().unwrap());
    assert!(!out_dir.join("eu.timeseries.csv").exists());
}

fn batch_fixture(dir: &Path, broken: bool) -> PathBuf {
    let mut manifest = String::from("# symbol,path,group\n");
    for i in 0..31 {
        let group = if i < 10 { "index" } else { "stock" };
        let spec = if i % 3 == 2 {
            SynthSpec::null_vol(250, i)
        } else {
            SynthSpec::coupled_vol(250, 0.5 + 0.05 * i as f64, i)
        };
        let name = format!("EQ{i:02}");
        write_series(dir, &name, &spec);
        manifest.push_str(&format!("{name},{name}.csv,{group}\n"));
    }
    if broken {
        fs::write(dir.join("broken.csv"), "Date,Open,Close\n2020-01-02,1,1\n").unwrap();
        manifest.push_str("BROKEN,broken.csv\n");
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest).unwrap();
    path
}

#[test]
fn batch_over_31_equities() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = batch_fixture(dir.path(), false);
    let out_dir = dir.path().join("out");
    let out = volasym(&[
        "batch",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.trim().ends_with("of 31 equities satisfy C_nd > C_dn"),
        "{stdout}"
    );

    let scatter = fs::read_to_string(out_dir.join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().count(), 32);
    let svg = fs::read_to_string(out_dir.join("scatter.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 31);
    let ratios = fs::read_to_string(out_dir.join("ratios.csv")).unwrap();
    assert!(ratios.lines().nth(1).unwrap().starts_with("EQ00,index,"));
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 32);

    // same inputs, same bytes
    let again = dir.path().join("again");
    volasym(&[
        "batch",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    for name in [
        "scatter.svg",
        "ratios.json",
        "reports.json",
        "summary.csv",
        "EQ05.timeseries.svg",
    ] {
        assert_eq!(
            fs::read(out_dir.join(name)).unwrap(),
            fs::read(again.join(name)).unwrap(),
            "{name}"
        );
    }

    // re-render from saved records without recomputation
    let rerender = dir.path().join("rerender");
    let out = volasym(&[
        "report",
        "--reports",
        out_dir.join("reports.json").to_str().unwrap(),
        "--out",
        rerender.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for name in [
        "scatter.csv",
        "scatter.json",
        "scatter.svg",
        "ratios.csv",
        "ratios.json",
        "ratios.svg",
    ] {
        assert_eq!(
            fs::read(out_dir.join(name)).unwrap(),
            fs::read(rerender.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn batch_continues_past_failures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = batch_fixture(dir.path(), true);
    let out_dir = dir.path().join("out");
    let out = volasym(&[
        "batch",
        "--manifest",
        manifest.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.contains("broken.csv") && err.contains("reason=too-short"),
        "{err}"
    );
    let scatter = fs::read_to_string(out_dir.join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().count(), 32);
    assert!(fs::read_to_string(out_dir.join("summary.txt"))
        .unwrap()
        .contains("1 input(s) failed"));
}

#[test]
fn report_accepts_single_records() {
    let dir = tempfile::tempdir().unwrap();
    let golden =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/analyze/coupled_vol_5000.report.json");
    let out = volasym(&[
        "report",
        "--reports",
        golden.to_str().unwrap(),
        golden.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(dir.path().join("ratios.csv"))
            .unwrap()
            .lines()
            .count(),
        3
    );
}
