//! Projects a small square window at a few angles and checks mass.

use lrd::{radon_project, AngleSet, GrayImage};

fn main() -> lrd::Result<()> {
    let window = GrayImage::from_fn(8, 8, |x, y| if (2..6).contains(&x) && (3..5).contains(&y) { 1.0 } else { 0.0 })?;
    let angles = AngleSet::custom(vec![0.0, 45.0, 90.0, 135.0])?;
    let proj = radon_project(&window, &angles)?;

    println!("window mass {}, detector length {}", window.mass(), proj.detector_length());
    for (j, deg) in angles.degrees().iter().enumerate() {
        let col = proj.column(j);
        let cells: Vec<String> = col.iter().map(|v| format!("{v:.2}")).collect();
        println!("{deg:>5.1}°  sum {:.6}  [{}]", col.iter().sum::<f64>(), cells.join(" "));
    }
    Ok(())
}
