//! Solve the EV market share implied by the fleet-average tailpipe target.
//!
//! Run with: cargo run -p mineralcap --example penetration_target

use mineralcap::data::Dataset;
use mineralcap::scenarios::solve_penetration;

fn main() -> mineralcap::Result<()> {
    let dataset = Dataset::load_default()?;
    let assumptions = dataset.scenario_config.fuel_assumptions();

    let tailpipe = assumptions.tailpipe_gpm();
    let share = solve_penetration(&assumptions)?;

    println!("non-EV fleet tailpipe rate : {tailpipe:.2} g CO2/mile");
    println!(
        "fleet-average target       : {:.2} g CO2/mile",
        assumptions.target_gpm
    );
    println!("required EV share of sales : {:.2}%", share * 100.0);

    // the share scales with how dirty the remaining fleet is
    for mpg in [50.0, 60.0, 66.4, 80.0] {
        let mut alt = assumptions;
        alt.icev_mpg = mpg;
        let s = solve_penetration(&alt)?;
        println!("  at {mpg:>5.1} mpg non-EV economy -> {:.2}%", s * 100.0);
    }
    Ok(())
}
