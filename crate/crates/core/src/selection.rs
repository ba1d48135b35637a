//! Reference-point niching: fills the next population from the critical
//! layer by repeatedly serving the active reference point with the fewest
//! already-selected associates.
//!
//! Random tie-breaking draws from the run's single stream in a fixed
//! order: the reference-point tie draw precedes the candidate tie draw
//! within one loop iteration, and a draw happens only when two or more
//! entries actually tie.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dominance::{critical_index, nondominated_sort, LayerPartition};
use crate::error::{Error, Result};
use crate::normalization::{
    normalize, run_normalization, GenerationNormalization, NormalizationState,
};
use crate::objectives::FitnessVector;
use crate::refpoints::{AssociationTable, Associator, Composition};
use crate::rng::RandomStream;

/// One accepted pick of the niching loop, for the optional selection audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionAuditEntry {
    pub reference: Composition,
    pub rho_before: u32,
    pub chosen: usize,
    pub distance: f64,
}

/// Selects the members of the critical layer that complete the next
/// population.
///
/// `y` are the indices already taken (layers below the critical one) and
/// `critical` the critical-layer indices; both index into the joint
/// population that `assoc` is built over. When `full_lattice` is given,
/// the active set iterates the materialized lattice literally; otherwise
/// it is restricted to reference points with at least one associated
/// member, which leaves the selection distribution unchanged.
pub fn select(
    y: &[usize],
    critical: &[usize],
    mu: usize,
    assoc: &AssociationTable,
    rng: &mut RandomStream,
    full_lattice: Option<&[Composition]>,
    mut audit: Option<&mut Vec<SelectionAuditEntry>>,
) -> Result<Vec<usize>> {
    if !(y.len() < mu && mu <= y.len() + critical.len()) {
        return Err(Error::invalid_state(format!(
            "selection needs |Y| < mu <= |Y| + |critical|, got |Y|={}, mu={mu}, |critical|={}",
            y.len(),
            critical.len()
        )));
    }
    for &idx in y.iter().chain(critical) {
        if assoc.get(idx).map_or(true, Option::is_none) {
            return Err(Error::invalid_state(format!(
                "member {idx} has no reference-point association"
            )));
        }
    }

    // rho counters start at the number of already-selected associates.
    let mut rho: BTreeMap<Composition, u32> = BTreeMap::new();
    for &idx in y {
        let (comp, _) = assoc[idx].as_ref().expect("association checked above");
        *rho.entry(comp.clone()).or_insert(0) += 1;
    }

    // Candidate lists per reference point, ordered by (distance, index) so
    // the minimum-distance scan is a prefix walk.
    let mut candidates: BTreeMap<Composition, Vec<(f64, usize)>> = BTreeMap::new();
    for &idx in critical {
        let (comp, dist) = assoc[idx].as_ref().expect("association checked above");
        candidates
            .entry(comp.clone())
            .or_default()
            .push((*dist, idx));
    }
    for list in candidates.values_mut() {
        list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    }

    let mut active: BTreeSet<Composition> = match full_lattice {
        Some(lattice) => lattice.iter().cloned().collect(),
        None => rho.keys().chain(candidates.keys()).cloned().collect(),
    };

    let need = mu - y.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(need);
    let mut taken: BTreeSet<usize> = BTreeSet::new();

    while chosen.len() < need {
        if active.is_empty() {
            return Err(Error::invalid_state(
                "active reference points exhausted before the population was filled",
            ));
        }

        let min_rho = active
            .iter()
            .map(|r| rho.get(r).copied().unwrap_or(0))
            .min()
            .expect("active set is non-empty");
        let tied: Vec<&Composition> = active
            .iter()
            .filter(|r| rho.get(*r).copied().unwrap_or(0) == min_rho)
            .collect();
        let r_min = if tied.len() > 1 {
            tied[rng.index(tied.len())].clone()
        } else {
            tied[0].clone()
        };

        let pick = candidates.get(&r_min).and_then(|list| {
            let mut remaining = list.iter().filter(|(_, idx)| !taken.contains(idx));
            remaining.next().map(|&(best_dist, first_idx)| {
                let mut ties = vec![(best_dist, first_idx)];
                ties.extend(
                    list.iter()
                        .filter(|(d, idx)| !taken.contains(idx) && *idx != first_idx && *d == best_dist)
                        .copied(),
                );
                if ties.len() > 1 {
                    ties[rng.index(ties.len())]
                } else {
                    ties[0]
                }
            })
        });

        match pick {
            Some((distance, idx)) => {
                if let Some(entries) = audit.as_deref_mut() {
                    entries.push(SelectionAuditEntry {
                        reference: r_min.clone(),
                        rho_before: min_rho,
                        chosen: idx,
                        distance,
                    });
                }
                taken.insert(idx);
                chosen.push(idx);
                *rho.entry(r_min).or_insert(0) += 1;
            }
            None => {
                active.remove(&r_min);
            }
        }
    }
    Ok(chosen)
}

/// Everything one survival-selection pass produces besides the survivors
/// themselves; the engine's per-generation checks read from here.
#[derive(Debug, Clone)]
pub struct SurvivalOutcome {
    /// Indices into the joint population that form the next population,
    /// ascending.
    pub survivors: Vec<usize>,
    pub layers: LayerPartition,
    /// 1-based critical layer index.
    pub critical: usize,
    pub normalization: GenerationNormalization,
    /// Associations for every member of rank <= critical; `None` beyond.
    pub assoc: AssociationTable,
    pub audit: Option<Vec<SelectionAuditEntry>>,
}

/// One full survival selection over the joint population: non-dominated
/// sorting, critical index, normalization, association and niching.
pub fn survivors(
    joint_fitness: &[FitnessVector],
    mu: usize,
    norm_state: &mut NormalizationState,
    associator: &Associator,
    rng: &mut RandomStream,
    full_lattice: Option<&[Composition]>,
    record_audit: bool,
) -> Result<SurvivalOutcome> {
    if joint_fitness.len() < mu {
        return Err(Error::invalid_state(format!(
            "joint population holds {} members, fewer than mu = {mu}",
            joint_fitness.len()
        )));
    }

    let layers = nondominated_sort(joint_fitness)?;
    let critical = critical_index(&layers, mu)?;

    let y: Vec<usize> = layers.layers()[..critical - 1]
        .iter()
        .flatten()
        .copied()
        .collect();
    let crit_layer: Vec<usize> = layers.layers()[critical - 1].clone();

    let first_layer: Vec<FitnessVector> = layers.layers()[0]
        .iter()
        .map(|&i| joint_fitness[i].clone())
        .collect();
    let pool: Vec<FitnessVector> = y
        .iter()
        .chain(&crit_layer)
        .map(|&i| joint_fitness[i].clone())
        .collect();

    let normalization = run_normalization(norm_state, joint_fitness, &first_layer, &pool)?;

    let mut assoc: AssociationTable = vec![None; joint_fitness.len()];
    for &idx in y.iter().chain(&crit_layer) {
        let f_n = normalize(
            &joint_fitness[idx],
            &normalization.y_min,
            &normalization.y_nad,
        );
        assoc[idx] = Some(associator.associate(&f_n)?);
    }

    let mut audit = record_audit.then(Vec::new);
    let chosen = select(
        &y,
        &crit_layer,
        mu,
        &assoc,
        rng,
        full_lattice,
        audit.as_mut(),
    )?;

    let mut survivors: Vec<usize> = y.iter().chain(&chosen).copied().collect();
    survivors.sort_unstable();
    debug_assert_eq!(survivors.len(), mu);

    Ok(SurvivalOutcome {
        survivors,
        layers,
        critical,
        normalization,
        assoc,
        audit,
    })
}
