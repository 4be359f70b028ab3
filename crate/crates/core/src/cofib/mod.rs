//! Cofibrations and the fillers and lifts built from them.

pub mod filler;
pub mod lifting;
pub mod retraction;

pub use filler::{
    borsuk_filler, exhaustive_filler_search, fillers_at, hep_filler, pushout_candidate, pushout_filler,
    FillerFound, FillerKind, FillerProblem, FillerWitness,
};
pub use lifting::{based_path_fibration_lift, endpoints_fibration_lift, path_fibration_lift};
pub use retraction::{
    endpoint_exponent, product_with_cofibration, retraction_both_endpoints, retraction_domain,
    retraction_origin_interval, retraction_target, verify_retraction, RetractionWitness,
};
