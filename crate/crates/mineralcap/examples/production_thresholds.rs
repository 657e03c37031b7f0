//! Production levels each mineral must reach for the 2032 target, and the
//! announced graphite ramp against them.
//!
//! Run with: cargo run -p mineralcap --example production_thresholds

use mineralcap::minerals::Mineral;
use mineralcap::model::{Assumption, Model, WINDOW};
use mineralcap::pathways::{ramp_sufficiency, required_production};
use mineralcap::scenarios::ScenarioKind;
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let target = model.scenario(ScenarioKind::Low).ev_sales_in(2032)?;
    let supply = model.supply_kg(Basis::Production, Assumption::Baseline);
    let thresholds = required_production(
        target,
        &supply,
        &model.dataset.mix,
        &model.dataset.intensities,
        WINDOW,
    )?;

    println!("requirements for {target} EVs/yr under the market mix:\n");
    println!(
        "{:>10}  {:>12}  {:>12}  {:>12}  {:>6}",
        "", "current t", "min t", "max t", "x"
    );
    for t in &thresholds {
        println!(
            "{:>10}  {:>12.0}  {:>12.0}  {:>12.0}  {:>6.2}{}",
            t.mineral.name(),
            t.current_tons,
            t.required_min_tons,
            t.required_max_tons,
            t.multiplier,
            if t.exceeds_current { "  (short)" } else { "" }
        );
    }

    let graphite = thresholds
        .iter()
        .find(|t| t.mineral == Mineral::Graphite)
        .expect("graphite threshold");
    println!(
        "\nannounced graphite ramp vs the {:.0} t/yr peak requirement:",
        graphite.required_max_tons
    );
    let sufficiency = ramp_sufficiency(&model.dataset.ramp, graphite.required_max_tons);
    for (year, quantity) in &model.dataset.ramp.schedule {
        println!(
            "  {year}: {:>8.0} t/yr {}",
            quantity.as_tons_f64(),
            if sufficiency[year] {
                "(enough)"
            } else {
                "(short)"
            }
        );
    }
    Ok(())
}
