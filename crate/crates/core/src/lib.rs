//! NSGA-III with reference-point niching, the m-LOTZ / m-OMM / m-COCZ
//! benchmark families, and an empirical verification layer for the
//! guarantees the algorithm's parameterization is built on.
//!
//! The crate is organized around the optimizer's moving parts:
//!
//! * [`genotype`], [`rng`], [`variation`] — bitstrings, seeded streams and
//!   the mutation / parent-selection operators.
//! * [`objectives`] — the benchmark families, their Pareto predicates and
//!   front enumeration.
//! * [`dominance`] — dominance relations, non-dominated sorting and the
//!   exhaustive antichain oracle.
//! * [`refpoints`] — the simplex lattice, ray distances and association.
//! * [`normalization`] — ideal/max trackers, extreme points, intercepts
//!   and the Nadir estimate.
//! * [`selection`] — the niching loop and survival selection.
//! * [`engine`] — the generation loop, theorem-mode parameters and run
//!   records.
//! * [`verify`] — stand-alone empirical checks of the survival and
//!   normalization guarantees.

pub mod dominance;
pub mod engine;
pub mod error;
pub mod genotype;
pub mod normalization;
pub mod objectives;
pub mod refpoints;
pub mod rng;
pub mod selection;
pub mod variation;
pub mod verify;

pub use dominance::{
    critical_index, dominates, max_antichain_size, naive_nondominated_sort, nondominated_sort,
    weakly_dominates, LayerPartition,
};
pub use engine::{
    derive_theorem_parameters, run_until_covered, theorem_generation_budget, AssociationChoice,
    CheckKind, CheckSet, Engine, RunConfig, RunOutcome, RunRecord, Violation,
};
pub use error::{Error, Result};
pub use genotype::Bitstring;
pub use normalization::{normalize, NormalizationState, NormalizedFitness};
pub use objectives::{
    evaluate, front_cardinality, is_pareto_optimal, pareto_front_fitness_set, FitnessVector,
    ProblemDescriptor, ProblemKind,
};
pub use refpoints::{
    associate, generate_reference_points, nearest_simplex_lattice_point, ray_distance,
    reference_point_count, AssociationMode, AssociationTable, Associator, Composition,
};
pub use rng::{derive_stream_seed, RandomStream};
pub use selection::{select, survivors, SelectionAuditEntry, SurvivalOutcome};
pub use variation::{random_population, standard_bit_mutation, uniform_parent_selection};
pub use verify::{default_manifest, run_suite, CheckReport, SuiteSelection, VerifyManifest, VerifyReport};
