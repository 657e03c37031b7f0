//! Per-chemistry battery ceilings from current mineral production, and the
//! chemistry that maximizes output.
//!
//! Run with: cargo run -p mineralcap --example chemistry_ceilings

use mineralcap::capacity::{chemistry_ceiling, optimal_chemistry};
use mineralcap::chemistry::Chemistry;
use mineralcap::model::{Assumption, Fleet, Model};
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let supply = model.supply_kg(Basis::Production, Assumption::Baseline);

    println!("{:>8}  {:>12}  limiting mineral", "", "packs/yr");
    for &chemistry in &Chemistry::ALL {
        let result = chemistry_ceiling(&supply, model.dataset.intensities.get(chemistry))?;
        println!(
            "{:>8}  {:>12}  {}",
            chemistry.name(),
            result.ceiling,
            result.limiting_mineral
        );
    }

    let (best, result) = optimal_chemistry(&supply, &model.dataset.intensities)?;
    println!(
        "\noptimal chemistry: {best} at {} packs/yr ({} packs over 2027-2032)",
        result.ceiling,
        result.ceiling * 6
    );

    // the per-mineral breakdown behind the optimum
    println!("\nper-mineral ceilings for {best}:");
    for (mineral, packs) in &result.per_mineral_ceiling {
        println!("  {mineral:>10}: {packs}");
    }
    let _ = model.optimal(Basis::Production, Assumption::Baseline, Fleet::Sedan)?;
    Ok(())
}
