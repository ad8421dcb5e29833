//! Consolidated feasible-indicator set: highly prevalent preliminary
//! indicators plus accepted proposals, with code assignment and taxonomy
//! extension for the proposals.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::model::{
    Dimension, DimensionOrigin, Indicator, IndicatorCode, IndicatorStatus,
};
use crate::prevalence::{Prevalence, PrevalenceLabel};

/// A new indicator found in a standout strategy.
///
/// `target_dimension` is either an existing dimension letter or the name of
/// a dimension (existing or new).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposedIndicator {
    pub name: String,
    pub target_dimension: String,
    pub source_countries: Vec<String>,
    pub alias_group: Option<String>,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConsolidateError {
    #[error("alias group {group:?} spans dimensions {first:?} and {second:?}")]
    AliasSpansDimensions {
        group: String,
        first: String,
        second: String,
    },
    #[error("alias group {group:?} mixes accepted and rejected proposals")]
    AliasAcceptanceMismatch { group: String },
    #[error("proposal {name:?} has no source countries")]
    NoSourceCountries { name: String },
    #[error("no dimension letters left after {last} for new dimension {name:?}")]
    DimensionLettersExhausted { last: char, name: String },
    #[error("dimension {dimension} has no free two-digit code for {name:?}")]
    CodesExhausted { dimension: char, name: String },
    #[error("indicator code {0} assigned twice")]
    CodeCollision(IndicatorCode),
}

/// Existing dimensions and indicators that new codes must not collide with.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Taxonomy {
    pub dimensions: Vec<Dimension>,
    pub indicators: Vec<Indicator>,
}

impl Taxonomy {
    /// The taxonomy before any proposal was coded: preliminary dimensions and
    /// every indicator not marked `proposed`.
    pub fn baseline(dimensions: &[Dimension], indicators: &[Indicator]) -> Self {
        Self {
            dimensions: dimensions
                .iter()
                .filter(|d| d.origin == DimensionOrigin::Preliminary)
                .cloned()
                .collect(),
            indicators: indicators
                .iter()
                .filter(|i| i.status != IndicatorStatus::Proposed)
                .cloned()
                .collect(),
        }
    }
}

fn dimension_key(target: &str) -> String {
    let t = target.trim();
    if t.chars().count() == 1 {
        t.to_uppercase()
    } else {
        t.to_lowercase()
    }
}

/// Collapses proposals sharing an alias group into the first member,
/// unioning source countries in order of first appearance.
pub fn merge_aliases(
    proposed: &[ProposedIndicator],
) -> Result<Vec<ProposedIndicator>, ConsolidateError> {
    let mut out: Vec<ProposedIndicator> = Vec::with_capacity(proposed.len());
    let mut group_slot: HashMap<&str, usize> = HashMap::new();
    for p in proposed {
        let Some(group) = p.alias_group.as_deref() else {
            out.push(p.clone());
            continue;
        };
        match group_slot.get(group) {
            None => {
                group_slot.insert(group, out.len());
                out.push(p.clone());
            }
            Some(&slot) => {
                let head = &mut out[slot];
                if dimension_key(&head.target_dimension) != dimension_key(&p.target_dimension) {
                    return Err(ConsolidateError::AliasSpansDimensions {
                        group: group.to_string(),
                        first: head.target_dimension.clone(),
                        second: p.target_dimension.clone(),
                    });
                }
                if head.accepted != p.accepted {
                    return Err(ConsolidateError::AliasAcceptanceMismatch {
                        group: group.to_string(),
                    });
                }
                for c in &p.source_countries {
                    if !head.source_countries.contains(c) {
                        head.source_countries.push(c.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeAssignment {
    pub indicators: Vec<Indicator>,
    pub new_dimensions: Vec<Dimension>,
}

/// Gives each proposal the next code in its dimension, in input order.
///
/// Existing dimensions continue after their highest number. A dimension
/// name not found in the taxonomy opens a new dimension with the next letter
/// after the highest letter in use, numbered from 01.
pub fn assign_codes(
    proposed: &[ProposedIndicator],
    taxonomy: &Taxonomy,
) -> Result<CodeAssignment, ConsolidateError> {
    let mut by_letter: BTreeMap<char, String> = taxonomy
        .dimensions
        .iter()
        .map(|d| (d.code, d.name.clone()))
        .collect();
    let mut by_name: HashMap<String, char> = taxonomy
        .dimensions
        .iter()
        .map(|d| (dimension_key(&d.name), d.code))
        .collect();
    let mut next_number: BTreeMap<char, u8> = BTreeMap::new();
    for ind in &taxonomy.indicators {
        let slot = next_number.entry(ind.code.letter()).or_insert(1);
        *slot = (*slot).max(ind.code.number().saturating_add(1));
    }
    let mut last_letter = by_letter
        .keys()
        .copied()
        .chain(next_number.keys().copied())
        .max();

    let mut out = CodeAssignment::default();
    for p in proposed {
        if p.source_countries.is_empty() {
            return Err(ConsolidateError::NoSourceCountries {
                name: p.name.clone(),
            });
        }
        let key = dimension_key(&p.target_dimension);
        let letter = match key.chars().next() {
            Some(c) if key.len() == 1 && by_letter.contains_key(&c) => c,
            _ => match by_name.get(&key) {
                Some(&c) => c,
                None => {
                    let next = match last_letter {
                        None => 'A',
                        Some('Z') => {
                            return Err(ConsolidateError::DimensionLettersExhausted {
                                last: 'Z',
                                name: p.target_dimension.clone(),
                            })
                        }
                        Some(c) => (c as u8 + 1) as char,
                    };
                    last_letter = Some(next);
                    let name = p.target_dimension.trim().to_string();
                    by_letter.insert(next, name.clone());
                    by_name.insert(key, next);
                    out.new_dimensions.push(Dimension {
                        code: next,
                        name,
                        origin: DimensionOrigin::Extension,
                    });
                    next
                }
            },
        };
        let slot = next_number.entry(letter).or_insert(1);
        let code = IndicatorCode::new(letter, *slot).map_err(|_| ConsolidateError::CodesExhausted {
            dimension: letter,
            name: p.name.clone(),
        })?;
        *slot += 1;
        out.indicators.push(Indicator {
            code,
            dimension: letter,
            area: None,
            name: p.name.clone(),
            status: IndicatorStatus::Proposed,
            feasibility_notes: None,
        });
    }
    Ok(out)
}

/// Highly prevalent preliminary indicators plus the accepted proposals,
/// marked consolidated and sorted by code.
pub fn consolidate_set(
    labels: &[PrevalenceLabel],
    preliminary: &[Indicator],
    accepted: &[Indicator],
) -> Result<Vec<Indicator>, ConsolidateError> {
    let hp: BTreeSet<IndicatorCode> = labels
        .iter()
        .filter(|l| l.label == Prevalence::HighlyPrevalent)
        .map(|l| l.indicator)
        .collect();
    let mut set: BTreeMap<IndicatorCode, Indicator> = BTreeMap::new();
    let chosen = preliminary
        .iter()
        .filter(|i| hp.contains(&i.code))
        .chain(accepted.iter());
    for ind in chosen {
        let mut ind = ind.clone();
        ind.status = IndicatorStatus::Consolidated;
        if set.insert(ind.code, ind.clone()).is_some() {
            return Err(ConsolidateError::CodeCollision(ind.code));
        }
    }
    Ok(set.into_values().collect())
}
