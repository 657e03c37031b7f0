//! Per-mile and per-vehicle lifecycle emissions by powertrain and year.
//!
//! Run with: cargo run -p mineralcap --example lifecycle_emissions

use mineralcap::emissions::{lifecycle, Powertrain};
use mineralcap::model::Model;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;

    println!("2023 snapshot:");
    println!(
        "{:>12}  {:>10}  {:>10}  {:>10}",
        "", "g/mi", "t/vehicle", "benefit t"
    );
    for p in Powertrain::ALL {
        let r = lifecycle(&model.params, &model.trajectories, p, 2023)?;
        println!(
            "{:>12}  {:>10.1}  {:>10.2}  {:>10.2}",
            p.to_string(),
            r.per_mile,
            r.per_vehicle,
            r.benefit_vs_icev
        );
    }

    println!("\nlifecycle tons per vehicle, 2027-2032:");
    print!("{:>12}", "");
    for year in 2027..=2032 {
        print!("  {year:>6}");
    }
    println!();
    for p in Powertrain::ALL {
        print!("{:>12}", p.to_string());
        for year in 2027..=2032 {
            let r = lifecycle(&model.params, &model.trajectories, p, year)?;
            print!("  {:>6.2}", r.per_vehicle);
        }
        println!();
    }
    println!("\nEVs improve each year as the grid decarbonizes; the HEV economy cap");
    println!("freezes its figure from 2028 on.");
    Ok(())
}
