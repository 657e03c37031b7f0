//! Build the low/medium/high EV sales pathways toward the 2032 target.
//!
//! Run with: cargo run -p mineralcap --example sales_scenarios

use mineralcap::model::Model;
use mineralcap::scenarios::ScenarioKind;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    println!("solved target share: {:.4}%\n", model.target_share * 100.0);

    println!(
        "{:>6}  {:>12}  {:>12}  {:>12}",
        "year", "low", "medium", "high"
    );
    for year in 2022..=2032 {
        let row: Vec<u64> = ScenarioKind::ALL
            .iter()
            .map(|&k| model.scenario(k).ev_sales[&year])
            .collect();
        println!("{year:>6}  {:>12}  {:>12}  {:>12}", row[0], row[1], row[2]);
    }

    for kind in ScenarioKind::ALL {
        let cumulative = model.scenario(kind).cumulative_ev_sales(2027, 2032);
        println!(
            "{kind:>6} scenario needs {:.2}M EVs over 2027-2032",
            cumulative as f64 / 1e6
        );
    }
    Ok(())
}
