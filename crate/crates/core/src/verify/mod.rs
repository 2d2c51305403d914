//! Residual checks of the governing equations on constructed domains, and a
//! comparison of computed quantities with published reference values.

mod report;
mod residual;

pub use report::{
    case_features, reference_report, reference_rows, CaseFeatures, Comparison, Criterion, ReferenceCase, REFERENCE_TOL,
};
pub use residual::{
    cauchy_riemann_in_domain, check_orthogonality, domain_laplace_points, free_surface_points, nodal_structure_check,
    residual_bottom, residual_free_surface, residual_laplace, residual_laplace_at, slope_identity, vy_identity,
    FieldSampler, GridSpec, Identity, NodalStructure, Perturbed, ResidualReport,
};
