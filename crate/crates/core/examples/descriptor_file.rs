//! Saves descriptors to the binary descriptor format, loads them back and
//! queries the reloaded index.

use lrd::io::{load_descriptors, save_descriptors};
use lrd::{build_index, lrd_descriptor, GrayImage, IndexEntry, LrdParams, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = LrdParams::irma();
    let mut entries = Vec::new();
    for i in 0..5 {
        let image = GrayImage::from_fn(96, 96, |x, y| ((x * (i + 1) + y * 3) % 17) as f64 * 12.0)?;
        entries.push(IndexEntry::new(format!("img{i}"), format!("class{}", i % 2), lrd_descriptor(&image, &params)?));
    }

    let path = std::env::temp_dir().join(format!("lrd-example-{}.lrdd", std::process::id()));
    save_descriptors(&path, &entries, "l1")?;
    let file = load_descriptors(&path)?;
    println!(
        "{} records of length {} ({} bytes), digest {}",
        file.records.len(),
        file.length,
        std::fs::metadata(&path)?.len(),
        file.params_digest
    );

    let index = build_index(file.entries(), Metric::L1)?;
    let query = entries[3].descriptor.clone().at_stored_precision();
    let top = index.knn_query(&query, 1)?;
    println!("self query: {:?}", top.first());

    std::fs::remove_file(&path)?;
    Ok(())
}
