use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lrd::io::to_luma8;
use lrd::GrayImage;

fn lrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrd"))
        .args(args)
        .env("LRD_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lrd(args);
    assert!(
        out.status.success(),
        "lrd {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// Stripes of period `period` at orientation `kind`, plus a per-image offset.
fn texture(kind: usize, period: usize, seed: usize) -> GrayImage {
    GrayImage::from_fn(48 + seed % 5, 40 + seed % 3, |x, y| {
        let t = match kind {
            0 => x,
            1 => y,
            _ => x + y,
        };
        let base = if (t / period).is_multiple_of(2) { 200.0 } else { 30.0 };
        base + ((x * 7 + y * 13 + seed) % 11) as f64
    })
    .unwrap()
}

fn write_png(path: &Path, img: &GrayImage) {
    to_luma8(img).save(path).unwrap();
}

const CODES: [&str; 3] = ["1121-127-700-500", "1121-120-200-700", "1123-211-520-700"];

fn irma_fixture(dir: &Path) -> PathBuf {
    let images = dir.join("images");
    std::fs::create_dir_all(&images).unwrap();
    let mut codes = String::from("image_id;irma_code\n");
    for i in 0..12 {
        let class = i % 3;
        write_png(&images.join(format!("{i:04}.png")), &texture(class, 4 + class, i));
        codes.push_str(&format!("{i:04};{}\n", CODES[class]));
    }
    let code_file = dir.join("codes.csv");
    std::fs::write(&code_file, codes).unwrap();
    let manifest = dir.join("irma.csv");
    ok(&["manifest", "--kind", "irma", "--dir", s(&images), "--codes", s(&code_file), "--out", s(&manifest)]);
    manifest
}

#[test]
fn irma_describe_index_query_evaluate() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let manifest = irma_fixture(dir);
    let db = dir.join("db.lrdf");
    let idx = dir.join("index.lrdf");
    ok(&["describe", "--manifest", s(&manifest), "--dataset", "irma", "--out", s(&db), "--preset", "irma", "--side", "64"]);
    ok(&["index", "--descriptors", s(&db), "--out", s(&idx), "--metric", "l1"]);

    let probe = dir.join("images/0004.png");
    let json = ok(&["query", "--index", s(&idx), "--k", "3", "--json", s(&probe)]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let neighbors = &parsed[0]["result"]["neighbors"];
    assert_eq!(neighbors.as_array().unwrap().len(), 3);
    assert_eq!(neighbors[0]["source_id"], "0004");
    assert_eq!(neighbors[0]["distance"], 0.0);

    let (a, b) = (dir.join("run_a"), dir.join("run_b"));
    let summary = ok(&["evaluate", "--index", s(&idx), "--queries", s(&manifest), "--protocol", "irma", "--out", s(&a)]);
    ok(&["evaluate", "--index", s(&idx), "--queries", s(&db), "--protocol", "irma", "--out", s(&b)]);
    assert!(summary.contains("300"), "{summary}");
    let report_a = std::fs::read(a.join("report.json")).unwrap();
    assert_eq!(report_a, std::fs::read(b.join("report.json")).unwrap());
    assert_eq!(
        std::fs::read(a.join("per_query.csv")).unwrap(),
        std::fs::read(b.join("per_query.csv")).unwrap()
    );
    assert!(a.join("timing.json").exists() && a.join("summary.txt").exists());
    let report = lrd::cli::read_report(a.join("report.json")).unwrap();
    assert_eq!(report.query_count, 12);
    assert_eq!(report.total_error, Some(0.0));
    assert_eq!(report.descriptor_length, 300);
}

#[test]
fn holidays_split_and_rate() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let images = dir.join("holidays");
    std::fs::create_dir_all(&images).unwrap();
    for category in 0..3 {
        for k in 0..3 {
            let number = 100000 + 100 * category + k;
            write_png(&images.join(format!("{number}.png")), &texture(category, 5, k));
        }
    }
    let (db_manifest, q_manifest) = (dir.join("db.csv"), dir.join("q.csv"));
    ok(&["manifest", "--kind", "holidays", "--dir", s(&images), "--out", s(&db_manifest), "--queries-out", s(&q_manifest)]);
    let db = dir.join("db.lrdf");
    ok(&["describe", "--manifest", s(&db_manifest), "--dataset", "holidays", "--out", s(&db), "--preset", "holidays", "--side", "64"]);
    let out = dir.join("eval");
    ok(&["evaluate", "--index", s(&db), "--queries", s(&q_manifest), "--protocol", "holidays", "--out", s(&out)]);
    let report = lrd::cli::read_report(out.join("report.json")).unwrap();
    assert_eq!(report.query_count, 3);
    assert_eq!(report.descriptor_length, 198);
    assert_eq!(report.true_retrieval_rate, Some(1.0));

    // the same queries may not be evaluated against an index containing them
    let all = dir.join("all.lrdf");
    let full = dir.join("full.csv");
    let mut text = std::fs::read_to_string(&db_manifest).unwrap();
    text.push_str(std::fs::read_to_string(&q_manifest).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n").as_str());
    std::fs::write(&full, text).unwrap();
    ok(&["describe", "--manifest", s(&full), "--out", s(&all), "--preset", "holidays", "--side", "64"]);
    assert!(!lrd(&["evaluate", "--index", s(&all), "--queries", s(&q_manifest), "--protocol", "holidays", "--out", s(&out)]).status.success());
}

#[test]
fn config_file_matches_explicit_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let manifest = irma_fixture(dir);
    let config = dir.join("run.conf");
    std::fs::write(&config, "# extraction\ngrid = 4x4\nbins = 16\npairing = orthogonal\nno-normalize = true\nside = 48\n").unwrap();
    let (a, b) = (dir.join("a.lrdf"), dir.join("b.lrdf"));
    ok(&["describe", "--config", s(&config), "--manifest", s(&manifest), "--out", s(&a)]);
    ok(&[
        "describe", "--manifest", s(&manifest), "--out", s(&b), "--grid", "4x4", "--bins", "16", "--pairing",
        "orthogonal", "--no-normalize", "--side", "48",
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // flags on the command line win over the file
    let c = dir.join("c.lrdf");
    ok(&["describe", "--config", s(&config), "--manifest", s(&manifest), "--out", s(&c), "--bins", "8"]);
    assert_eq!(lrd::io::load_descriptors(&c).unwrap().length, 4 * 4 * 8);
}

#[test]
fn mismatched_settings_are_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let manifest = irma_fixture(dir);
    let (a, b) = (dir.join("a.lrdf"), dir.join("b.lrdf"));
    ok(&["describe", "--manifest", s(&manifest), "--out", s(&a), "--preset", "irma", "--side", "64"]);
    ok(&["describe", "--manifest", s(&manifest), "--out", s(&b), "--preset", "irma", "--side", "64", "--bins", "10"]);
    let out = lrd(&["evaluate", "--index", s(&a), "--queries", s(&b), "--protocol", "irma", "--out", s(&dir.join("x"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn gr_baseline_through_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let manifest = irma_fixture(dir);
    let db = dir.join("gr.lrdf");
    ok(&["describe", "--manifest", s(&manifest), "--out", s(&db), "--method", "gr", "--gr-length", "200", "--side", "64"]);
    assert_eq!(lrd::io::load_descriptors(&db).unwrap().length, 200);
    let out = dir.join("eval");
    ok(&["evaluate", "--index", s(&db), "--queries", s(&manifest), "--protocol", "irma", "--out", s(&out)]);
    let report = lrd::cli::read_report(out.join("report.json")).unwrap();
    assert_eq!(report.total_error, Some(0.0));
}

#[test]
fn sinogram_dump() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let img = dir.join("img.png");
    write_png(&img, &texture(2, 3, 0));
    let (csv_path, png) = (dir.join("s.csv"), dir.join("s.png"));
    ok(&["sinogram", "--image", s(&img), "--out", s(&csv_path), "--png", s(&png), "--side", "32"]);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 1 + lrd::radon::detector_length(32));
    assert_eq!(rows[0].split(',').count(), 181);
    let rendered = image::open(&png).unwrap();
    assert_eq!((rendered.width(), rendered.height()), (180, lrd::radon::detector_length(32) as u32));
}

#[test]
fn bad_inputs_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let broken = dir.join("broken.png");
    std::fs::write(&broken, b"definitely not an image").unwrap();
    let manifest = dir.join("m.csv");
    std::fs::write(&manifest, format!("path,id,label\n{},x,a\n", s(&broken))).unwrap();
    let out = lrd(&["describe", "--manifest", s(&manifest), "--out", s(&dir.join("o.lrdf"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.png"));

    assert!(!lrd(&["describe", "--bogus"]).status.success());
    assert!(!lrd(&["query", "--index", s(&dir.join("missing.lrdf")), s(&broken)]).status.success());
    assert!(!lrd(&["describe", "--manifest", s(&manifest), "--out", "x", "--preset", "nope"]).status.success());
    assert!(lrd(&["--help"]).status.success());
}

#[test]
fn sweep_table_covers_every_setting() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let images = dir.join("holidays");
    std::fs::create_dir_all(&images).unwrap();
    for category in 0..3 {
        for k in 0..2 {
            let number = 100000 + 100 * category + k;
            write_png(&images.join(format!("{number}.png")), &texture(category, 5, k));
        }
    }
    let manifest = dir.join("all.csv");
    ok(&["manifest", "--kind", "holidays", "--dir", s(&images), "--out", s(&manifest)]);
    let table = dir.join("sweep.csv");
    ok(&[
        "sweep", "--train", s(&manifest), "--protocol", "holidays", "--grid-range", "2,3", "--bin-range", "8..12:4",
        "--side", "64", "--out", s(&table),
    ]);
    let text = std::fs::read_to_string(&table).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let settings: Vec<(&str, &str, &str)> = rows.iter().map(|r| (r[0], r[1], r[2])).collect();
    assert_eq!(settings, [("2x2", "8", "32"), ("2x2", "12", "48"), ("3x3", "8", "72"), ("3x3", "12", "108")]);
    for r in &rows {
        let score: f64 = r[3].parse().unwrap();
        assert!((0.0..=100.0).contains(&score), "{r:?}");
    }

    // an IRMA sweep needs a separate test split
    assert!(!lrd(&["sweep", "--train", s(&manifest), "--protocol", "irma"]).status.success());
}
