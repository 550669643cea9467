//! Majorization-based comparison of photon-number statistics.
//!
//! The crate builds the photon-number distributions of coherent, thermal,
//! number, displaced-squeezed and mixed states, compares them through their
//! ordered partial sums, and derives confidence intervals, Schur-concave
//! entropies and beam-splitter (number-sum versus number-difference) verdicts.
//!
//! ```
//! use photostat::{coherent_distribution, thermal_distribution, order_profile, compare, Relation};
//!
//! let thermal = thermal_distribution(1.5, 1e-12).unwrap();
//! let coherent = coherent_distribution(1.5, 1e-12).unwrap();
//! let verdict = compare(&order_profile(&thermal), &order_profile(&coherent), 1e-10).unwrap();
//! assert_eq!(verdict.relation, Relation::Incomparable);
//! ```

pub mod dist;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod majorize;
pub mod numeric;
pub mod splitter;

pub use dist::{
    attainable_variance, coherent_distribution, gaussian_partial_sum, mixture, moments,
    number_state_distribution, solve_squeezed_params, solve_squeezed_params_on,
    squeeze_turning_point, squeezed_closed_form, squeezed_distribution,
    squeezed_distribution_with_cap, thermal_distribution, thermal_partial_sum_closed_form,
    MixtureSpec, Moments, PhotonDistribution, ProbabilityVector, SqueezeBranch, SqueezedParams,
    DEFAULT_EPS, DEFAULT_MAX_DIM,
};
pub use entropy::{entropy, schur_consistency, EntropyFamily, EntropyQuery, SchurReport, SchurViolation};
pub use error::{Error, Result};
pub use fock::{
    build_squeezed_state, joint_distribution_brute_force, sample_beam_splitter, FockVector,
    JointDistribution, SampleReport,
};
pub use majorize::{
    classify_poissonian, compare, confidence_interval, equivalence_check, order_profile,
    CrossingPoint, EquivalenceReport, Leader, MajorizationVerdict, OrderedProfile, PoissonClass,
    PoissonVerdict, Relation, DEFAULT_TOL,
};
pub use splitter::{
    classify_clustering, detector_covariance, number_difference_distribution,
    number_sum_distribution, prob_single_detector_silent, ClusterClass, ClusterVerdict,
    SignedCountDistribution,
};
