//! The added-supply case: each mineral gains a fifth of its top producer's
//! annual output.
//!
//! Run with: cargo run -p mineralcap --example added_supply

use mineralcap::minerals::Mineral;
use mineralcap::model::{Assumption, Fleet, Model, WINDOW};
use mineralcap::supply::Basis;

fn main() -> mineralcap::Result<()> {
    let model = Model::load_default()?;

    println!(
        "{:>10}  {:>12}  {:>12}  {:>12}  top producer",
        "", "base t/yr", "added t/yr", "total t/yr"
    );
    for &mineral in &Mineral::ALL {
        let base = model.dataset.supply.production(mineral).as_tons_f64();
        let added = model
            .dataset
            .added_supply
            .additions
            .get(&mineral)
            .map(|q| q.as_tons_f64())
            .unwrap_or(0.0);
        let producer = model
            .dataset
            .added_supply
            .top_producer
            .get(&mineral)
            .map(String::as_str)
            .unwrap_or("-");
        println!(
            "{:>10}  {base:>12.0}  {added:>12.0}  {:>12.0}  {producer}",
            mineral.name(),
            base + added
        );
    }

    for (label, assumption) in [
        ("current", Assumption::Baseline),
        ("added", Assumption::AddedSupply),
    ] {
        let (chem, result) = model.optimal(Basis::Production, assumption, Fleet::Sedan)?;
        let years = f64::from(WINDOW.1 - WINDOW.0 + 1);
        println!(
            "\n{label} supply: {chem} ceiling {} packs/yr ({:.2}M over {}-{})",
            result.ceiling,
            result.ceiling as f64 * years / 1e6,
            WINDOW.0,
            WINDOW.1
        );
        let mix = model.mix_ceilings(assumption, Fleet::Sedan)?;
        let cumulative: u64 = mix.values().map(|&(v, _)| v).sum();
        println!(
            "{label} supply, market mix: {:.2}M over the window",
            cumulative as f64 / 1e6
        );
    }
    Ok(())
}
