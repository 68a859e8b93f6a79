//! Exact solver and classifier for the generalized Pillai equation
//! `(−1)^u·r·a^x + (−1)^v·s·b^y = c`.
//!
//! The crate enumerates solutions, reduces solution sets to their unique basic
//! form, matches them against a registry of known exceptional sets, builds the
//! infinite three-solution families, evaluates the transcendental bounds that
//! make the general problem finite, and runs checkpointed box searches.

pub mod arith;
pub mod bounds;
pub mod catalog;
pub mod equation;
pub mod error;
pub mod generators;
pub mod search;
pub mod sets;
pub mod structure;

pub use arith::{padic_valuation, perfect_power, pm1_index, Pm1Index, PowerDecomposition};
pub use bounds::{
    check_lemma13, check_lemma14, check_lemma17, check_lemma18, lemma15_bound, lemma19_threshold, sigma,
    theorem2_fixed_points, BoundReport, CheckOutcome, SigmaBreakdown,
};
pub use catalog::{catalog_entries, match_catalog, verify_catalog, CatalogEntry};
pub use equation::{
    determine_signs, enumerate_solutions, gcd_exponent_cap, pair_relation, Enumeration, Instance, PairRelation,
    Solution, DEFAULT_CAP,
};
pub use error::{Error, Result};
pub use generators::{back_solve, construct, generate, sweep, GeneratedSet, GeneratorParams, ParamRanges};
pub use search::{run_search, Classification, Finding, GcdFilter, SearchBox, SearchOptions};
pub use sets::{
    family_key, is_basic_form, is_subset, reduce_to_basic_form, same_family, BasicForm, FamilyKey, FamilyWitness,
    SolutionSet,
};
pub use structure::{check_structure, StructureReport};
