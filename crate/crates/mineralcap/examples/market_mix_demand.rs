//! Mineral demand when the fleet follows the evolving chemistry mix.
//!
//! Run with: cargo run -p mineralcap --example market_mix_demand

use mineralcap::capacity::mix_demand;
use mineralcap::minerals::Mineral;
use mineralcap::model::Model;
use mineralcap::scenarios::ScenarioKind;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let demand = mix_demand(
        model.scenario(ScenarioKind::Medium),
        &model.dataset.mix,
        &model.dataset.intensities,
    )?;

    print!("{:>10}", "mineral");
    for year in &demand.years {
        print!("  {year:>8}");
    }
    println!("  {:>9}", "avg");
    for &mineral in &Mineral::ALL {
        print!("{:>10}", mineral.name());
        for year in &demand.years {
            print!("  {:>8.0}", demand.demand[&mineral][year]);
        }
        println!("  {:>9.0}", demand.annual_average[&mineral]);
    }

    println!(
        "\nmedium-scenario graphite demand in 2032: {:.0} t",
        demand.get(Mineral::Graphite, 2032)?
    );
    println!(
        "current graphite production:             {:.0} t",
        model
            .dataset
            .supply
            .production(Mineral::Graphite)
            .as_tons_f64()
    );
    Ok(())
}
