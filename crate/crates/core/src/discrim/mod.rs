//! Finite-dimensional discrimination of unitary transformations.

pub mod group;
pub mod helstrom;
pub mod outputs;
pub mod polygon;
pub mod povm;

pub use group::{pauli_group, weyl_heisenberg, weyl_heisenberg_group, UnitaryGroup};
pub use helstrom::{
    helstrom_error, helstrom_from_overlap, helstrom_measurement, output_overlap,
    DiscriminationProblem, HelstromMeasurement, InputState,
};
pub use outputs::{
    apply_local, average_output, average_output_overlap, gram_matrix, holevo_chi,
    holevo_chi_closed_form, local_gram_matrix, majorization_compare, output_span_dimension,
    output_states, schur_overlap_omega, Majorization,
};
pub use polygon::{
    copies_for_perfect, copies_for_perfect_phases, copies_for_perfect_w, min_overlap_r,
    n_copy_profile, optimal_pair_input, CopiesOutcome, EigenvaluePolygon, NCopyStep,
};
pub use povm::{
    average_likelihood, covariant_povm, normalize_seed, outcome_probabilities, unitary_seed,
    validate_seed,
};
