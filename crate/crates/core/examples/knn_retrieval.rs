//! Builds an index of labelled synthetic textures and runs k-NN queries with
//! every metric.

use lrd::{build_index, lrd_descriptor, GrayImage, IndexEntry, LrdParams, Metric};

fn texture(period: usize, tilt: usize, phase: usize) -> lrd::Result<GrayImage> {
    GrayImage::from_fn(128, 128, |x, y| if (x * tilt + y + phase) % period < period / 2 { 220.0 } else { 30.0 })
}

fn main() -> lrd::Result<()> {
    let params = LrdParams::holidays();
    let mut entries = Vec::new();
    for (label, period, tilt) in [("fine", 6, 0), ("coarse", 20, 0), ("slanted", 10, 1)] {
        for phase in 0..3 {
            let d = lrd_descriptor(&texture(period, tilt, phase * 2)?, &params)?;
            entries.push(IndexEntry::new(format!("{label}-{phase}"), label, d));
        }
    }
    let query = lrd_descriptor(&texture(10, 1, 5)?, &params)?;

    for metric in [Metric::L1, Metric::L2, Metric::ChiSquare, Metric::Cosine] {
        let index = build_index(entries.clone(), metric)?;
        let result = index.knn_query(&query, 3)?;
        let hits: Vec<String> = result
            .neighbors
            .iter()
            .map(|n| format!("{} ({:.4})", n.source_id, n.distance))
            .collect();
        println!("{:<6} {}", metric.name(), hits.join(", "));
    }
    Ok(())
}
