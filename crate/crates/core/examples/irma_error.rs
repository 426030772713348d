//! Hierarchical error between IRMA codes, with default and custom branching.

use lrd::evaluation::{irma_error, parse_irma_code, IrmaErrorScheme};

fn main() -> lrd::Result<()> {
    let truth = parse_irma_code("1121-127-700-500")?;
    let cases = ["1121-127-700-500", "1121-127-700-400", "1121-127-710-500", "1123-127-700-500", "1*21-127-700-500", "2221-227-800-900"];
    for text in cases {
        let predicted = parse_irma_code(text)?;
        println!("{text}  error {:.4}", irma_error(&truth, &predicted));
    }

    let scheme = IrmaErrorScheme::default().with_branching(0, vec![2.0, 4.0, 6.0, 8.0])?;
    let predicted = parse_irma_code("1123-127-700-500")?;
    println!("custom technical-axis branching: {:.4}", scheme.error(&truth, &predicted));
    Ok(())
}
