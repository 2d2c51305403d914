//! Level lines, stagnation points, free-surface critical points and the
//! assembled sloshing domains.

mod domain;
mod stagnation;
mod surface;
mod trace;

pub use domain::{
    axis_saddles, build_domain, check_bulbous, endpoint_slope, mirror_domain, saddle_branches, smooth_level_bound,
    smooth_variant, trace_u_nodal_line, trace_u_nodal_lines, BulbousReport, CaseTag, SideReport, SloshingDomain,
    Verdict, CLOSURE_TOL,
};
pub use stagnation::{find_stagnation_point, seed_scan, stagnation_points_near, StagnationPoint, Window, GRADIENT_TOL};
pub use surface::{
    find_high_spots, find_surface_zero, find_trace_min, first_positive_zero, high_spots_on, surface_zeros,
    trace_u_zeros, HighSpot, SpotKind,
};
pub use trace::{
    trace_from_saddle, trace_level_curve, BudgetPolicy, CurveSource, EndKind, LevelCurve, LevelField, TraceOptions,
    LEVEL_TOL,
};
