//! Allocate geologic reserves across chemistries with the linear program.
//!
//! Run with: cargo run -p mineralcap --example reserve_allocation

use mineralcap::capacity::{chemistry_ceiling, joint_allocation};
use mineralcap::chemistry::Chemistry;
use mineralcap::model::{Assumption, Model};
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;
    let reserves = model.supply_kg(Basis::Reserves, Assumption::Baseline);

    println!("single-chemistry ceilings from reserves:");
    for &chemistry in &Chemistry::ALL {
        let result = chemistry_ceiling(&reserves, model.dataset.intensities.get(chemistry))?;
        println!(
            "  {:>8}: {:>7.2}M vehicles (limited by {})",
            chemistry.name(),
            result.ceiling as f64 / 1e6,
            result.limiting_mineral
        );
    }

    // splitting output across LFP and NCA beats either alone: NCA runs to
    // the nickel wall, LFP soaks up the remaining graphite
    let allocation = joint_allocation(
        &reserves,
        &model.dataset.intensities,
        &[Chemistry::Lfp, Chemistry::Nca],
    )?;
    println!("\njoint LFP + NCA allocation:");
    let mut total = 0u64;
    for (chemistry, packs) in &allocation {
        total += packs;
        println!("  {:>8}: {:>7.2}M", chemistry.name(), *packs as f64 / 1e6);
    }
    println!("  {:>8}: {:>7.2}B vehicles", "total", total as f64 / 1e9);

    let everything = joint_allocation(&reserves, &model.dataset.intensities, &Chemistry::ALL)?;
    let total: u64 = everything.values().sum();
    println!(
        "\nall six chemistries jointly: {:.2}B vehicles",
        total as f64 / 1e9
    );
    Ok(())
}
