//! Country-level supply records and their aggregation into per-mineral
//! production and reserve totals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minerals::{bauxite_to_aluminum, Mineral, Quantity};

/// Where a supply record comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    UsMining,
    UsRecycling,
    AllyMining,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::UsMining => "us_mining",
            SourceKind::UsRecycling => "us_recycling",
            SourceKind::AllyMining => "ally_mining",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "us_mining" => Ok(SourceKind::UsMining),
            "us_recycling" => Ok(SourceKind::UsRecycling),
            "ally_mining" => Ok(SourceKind::AllyMining),
            other => Err(format!("unknown source kind {other:?}")),
        }
    }
}

/// Whether a record stream describes annual production or total reserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Production,
    Reserves,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Production => "production",
            Basis::Reserves => "reserves",
        })
    }
}

/// One country-level supply line.
///
/// The quantity is metric tons per year for production records and metric
/// tons for reserves. Bauxite-denominated aluminum records carry the word
/// "bauxite" in their basis note and are converted at 4:1 during
/// aggregation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupplyRecord {
    pub mineral: Mineral,
    pub country: String,
    pub source_kind: SourceKind,
    pub quantity: Quantity,
    pub basis_note: String,
}

impl SupplyRecord {
    pub fn is_bauxite(&self) -> bool {
        self.basis_note.to_ascii_lowercase().contains("bauxite")
    }

    /// Quantity after unit conversion (bauxite -> aluminum equivalent).
    pub fn effective_quantity(&self) -> Result<Quantity, String> {
        if self.is_bauxite() {
            if self.mineral != Mineral::Aluminum {
                return Err(format!(
                    "bauxite conversion note on non-aluminum record ({})",
                    self.mineral
                ));
            }
            bauxite_to_aluminum(self.quantity)
        } else {
            Ok(self.quantity)
        }
    }

    fn key(&self) -> (Mineral, String, SourceKind) {
        (self.mineral, self.country.clone(), self.source_kind)
    }

    fn validate(&self) -> Result<(), String> {
        if self.country.trim().is_empty() {
            return Err("country is empty".to_string());
        }
        Ok(())
    }
}

/// An addition applied to annual production under the added-supply case:
/// for each mineral, twenty percent of the top producing country's annual
/// output becomes available.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AddedSupplySpec {
    pub additions: BTreeMap<Mineral, Quantity>,
    pub top_producer: BTreeMap<Mineral, String>,
}

/// Aggregated per-mineral supply totals plus the records they came from.
///
/// Immutable once built; aggregation is exact in integer kilograms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplyTable {
    production: BTreeMap<Mineral, Quantity>,
    reserves: BTreeMap<Mineral, Quantity>,
    provenance: Vec<(Basis, SupplyRecord)>,
    /// Added-supply amounts folded into `production`, if any.
    added: BTreeMap<Mineral, Quantity>,
}

impl SupplyTable {
    /// Aggregate production and reserve record streams into totals.
    ///
    /// Every mineral gets an entry on both axes (zero when no records).
    /// Rejects negative or malformed quantities (at parse time), unknown
    /// minerals, and duplicate (mineral, country, source) lines per axis.
    pub fn load(production: Vec<SupplyRecord>, reserves: Vec<SupplyRecord>) -> Result<SupplyTable> {
        let mut table = SupplyTable {
            production: Mineral::ALL.iter().map(|&m| (m, Quantity::ZERO)).collect(),
            reserves: Mineral::ALL.iter().map(|&m| (m, Quantity::ZERO)).collect(),
            provenance: Vec::new(),
            added: BTreeMap::new(),
        };
        for (basis, records) in [(Basis::Production, production), (Basis::Reserves, reserves)] {
            let mut seen = BTreeSet::new();
            for (idx, record) in records.into_iter().enumerate() {
                let context = format!("{basis} record {}", idx + 1);
                record
                    .validate()
                    .map_err(|m| Error::validation(&context, m))?;
                if !seen.insert(record.key()) {
                    return Err(Error::validation(
                        &context,
                        format!(
                            "duplicate record for ({}, {}, {})",
                            record.mineral, record.country, record.source_kind
                        ),
                    ));
                }
                let effective = record
                    .effective_quantity()
                    .map_err(|m| Error::validation(&context, m))?;
                let totals = match basis {
                    Basis::Production => &mut table.production,
                    Basis::Reserves => &mut table.reserves,
                };
                let entry = totals
                    .get_mut(&record.mineral)
                    .expect("all minerals present");
                *entry = entry
                    .checked_add(effective)
                    .ok_or_else(|| Error::validation(&context, "total overflows"))?;
                table.provenance.push((basis, record));
            }
        }
        table
            .provenance
            .sort_by_key(|(basis, record)| (*basis as u8, record.key()));
        Ok(table)
    }

    pub fn production(&self, mineral: Mineral) -> Quantity {
        self.production[&mineral]
    }

    pub fn reserves(&self, mineral: Mineral) -> Quantity {
        self.reserves[&mineral]
    }

    pub fn totals(&self, basis: Basis) -> &BTreeMap<Mineral, Quantity> {
        match basis {
            Basis::Production => &self.production,
            Basis::Reserves => &self.reserves,
        }
    }

    /// Per-mineral totals in kilograms as floating point, for the capacity
    /// and demand models.
    pub fn totals_kg(&self, basis: Basis) -> BTreeMap<Mineral, f64> {
        self.totals(basis)
            .iter()
            .map(|(&m, &q)| (m, q.as_kg_f64()))
            .collect()
    }

    pub fn provenance(&self) -> &[(Basis, SupplyRecord)] {
        &self.provenance
    }

    pub fn added(&self) -> &BTreeMap<Mineral, Quantity> {
        &self.added
    }

    /// Check that totals equal the sum of provenance records (after unit
    /// conversion) plus any applied additions. Exact integer arithmetic.
    pub fn verify_consistency(&self) -> Result<()> {
        for basis in [Basis::Production, Basis::Reserves] {
            for &mineral in &Mineral::ALL {
                let mut sum = Quantity::ZERO;
                for (b, record) in &self.provenance {
                    if *b == basis && record.mineral == mineral {
                        let eff = record
                            .effective_quantity()
                            .map_err(|m| Error::validation("provenance", m))?;
                        sum = sum
                            .checked_add(eff)
                            .ok_or_else(|| Error::validation("provenance", "overflow"))?;
                    }
                }
                if basis == Basis::Production {
                    if let Some(&added) = self.added.get(&mineral) {
                        sum = sum
                            .checked_add(added)
                            .ok_or_else(|| Error::validation("provenance", "overflow"))?;
                    }
                }
                let total = self.totals(basis)[&mineral];
                if sum != total {
                    return Err(Error::validation(
                        "supply table",
                        format!(
                            "{basis} total for {mineral} ({}) != provenance sum ({})",
                            total.format_tons(),
                            sum.format_tons()
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Fold an added-supply specification into annual production. Reserves and
/// provenance are unchanged; the additions are tracked separately so the
/// table stays self-consistent.
pub fn apply_added_supply(base: &SupplyTable, spec: &AddedSupplySpec) -> Result<SupplyTable> {
    let mut table = base.clone();
    for (&mineral, &addition) in &spec.additions {
        let entry = table
            .production
            .get_mut(&mineral)
            .expect("all minerals present");
        *entry = entry
            .checked_add(addition)
            .ok_or_else(|| Error::validation("added supply", "total overflows"))?;
        let tracked = table.added.entry(mineral).or_default();
        *tracked = tracked
            .checked_add(addition)
            .ok_or_else(|| Error::validation("added supply", "total overflows"))?;
    }
    Ok(table)
}
