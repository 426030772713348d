//! Writes a small synthetic Holidays-style collection to a temporary folder,
//! splits it into queries and database, and scores first-match retrieval.

use std::path::PathBuf;

use lrd::evaluation::evaluate_holidays;
use lrd::io::{to_luma8, DatasetKind, DatasetManifest, ManifestRecord, Pipeline};
use lrd::{build_index, Extractor, GrayImage, LrdParams, Metric};

fn scene(category: usize, shot: usize) -> lrd::Result<GrayImage> {
    let period = 6 + 5 * category;
    GrayImage::from_fn(200 + 8 * shot, 160, |x, y| {
        let band = if (x + category * y + shot) % period < period / 2 { 190.0 } else { 50.0 };
        band + (shot * 3) as f64
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("lrd-holidays-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let mut records = Vec::new();
    for category in 0..4 {
        for shot in 0..3 {
            let id = format!("{}{:02}", 100 + category, shot);
            let path: PathBuf = dir.join(format!("{id}.png"));
            to_luma8(&scene(category, shot)?).save(&path)?;
            records.push(ManifestRecord { path, id, label: format!("{}", 100 + category) });
        }
    }
    let manifest = DatasetManifest::new(DatasetKind::Holidays, records)?;
    let (queries, database) = manifest.holidays_split();

    let pipeline = Pipeline::new(Extractor::Lrd(LrdParams::holidays()));
    let index = build_index(pipeline.describe_entries(&database)?, Metric::L1)?;
    let query_entries = pipeline.describe_entries(&queries)?;
    let report = evaluate_holidays(&index, &query_entries)?;

    for q in &report.per_query {
        println!("{} -> {} (hit: {:?}, distance {:.4})", q.query_id, q.match_id, q.hit, q.distance);
    }
    println!("{}", report.summary(None));

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
