//! Rebuild every result table and compare against the golden fixtures.
//!
//! Run with: cargo run -p mineralcap --example golden_diff

use std::path::Path;

use mineralcap::model::Model;
use mineralcap::report;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let bundle = report::run(&model)?;
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden");
    let diff = report::diff_against_golden(&bundle, &golden)?;

    for table in &diff.tables {
        println!(
            "{:>5}: {:>3} cells, max deviation {:>8.4}%  {}",
            table.table,
            table.cells,
            table.max_deviation * 100.0,
            if table.pass { "pass" } else { "FAIL" }
        );
    }
    let skipped = diff.cells.iter().filter(|c| c.skipped).count();
    println!(
        "\n{} tables, {} cells ({} footnoted cells skipped)",
        diff.tables.len(),
        diff.cells.len(),
        skipped
    );
    println!("overall: {}", if diff.pass { "pass" } else { "FAIL" });
    Ok(())
}
