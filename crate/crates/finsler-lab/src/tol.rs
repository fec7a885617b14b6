//! Central tolerance and budget constants.
//!
//! Every acceptance-level threshold lives here so the test suite and the
//! CLI agree on a single source of truth. Residuals are compared in sup
//! norm; "relative" means dividing by max(1, |reference|).

/// Euler homogeneity residual ceiling for analytic catalog metrics.
pub const EULER_ANALYTIC: f64 = 1e-9;

/// Covariant derivative of the canonical vertical field must vanish
/// identically for every homogeneous connection.
pub const CANONICAL_PARALLEL: f64 = 1e-10;

/// Ricci scalar invariance under N -> N + A (x) C translations.
pub const RICCI_TRANSLATION: f64 = 1e-9;

/// Reassembling a decomposed connection must reproduce it.
pub const DECOMPOSE_ROUNDTRIP: f64 = 1e-9;

/// The two independent recovery routes (torsion-based vs direct formula)
/// must agree on solution-form pairs.
pub const DECOMPOSE_ROUTES: f64 = 1e-8;

/// Affine residual ceiling for certified solution-form connections over
/// metrics with vanishing mean Landsberg tensor.
pub const AFFINE_SOLUTION: f64 = 1e-8;

/// The metric connection of a generic Randers metric must *fail* the affine
/// equation by at least this fraction of the mean Landsberg norm.
pub const AFFINE_LOWER_FRAC: f64 = 1e-3;

/// Default threshold for classifying a connection from its residuals.
pub const AFFINE_CLASSIFY: f64 = 1e-7;

/// Metric-equation residual must match its quadratic closed form on
/// pseudo-Riemannian metrics.
pub const METRIC_REDUCTION_MATCH: f64 = 1e-8;

/// Metric-equation residual on a Ricci-flat metric.
pub const METRIC_RICCI_FLAT: f64 = 1e-6;

/// Divergence formulas vs the volume-density oracle (finite differences).
pub const DIVERGENCE_GAP: f64 = 1e-5;

/// Vertical-Laplacian shift identity g^{ab}(Lf)_{.a.b} = 2n f + L g^{ab} f_{.a.b}.
pub const VERTICAL_SHIFT_IDENTITY: f64 = 1e-9;

/// Relative gap between the curvature-functional quadrature and the
/// classical volume-integral route on the round sphere.
pub const FUNCTIONAL_RELATIVE: f64 = 1e-3;

/// Sup distance between null geodesics of a deformed spray and of the
/// background metric spray.
pub const LIGHTLIKE_SUP: f64 = 1e-6;

/// Minimum separation the timelike control trajectories must exhibit.
pub const LIGHTLIKE_CONTROL_MIN: f64 = 1e-2;

/// Vertical Laplacian eigenvalues on the Euclidean indicatrix.
pub const SPHERE_SPECTRUM: f64 = 1e-8;

/// |L| drift along geodesics counted as "conserved".
pub const DRIFT_BOUND: f64 = 1e-7;

/// Condition number beyond which the fundamental tensor is reported
/// degenerate instead of silently inverted.
pub const DEGENERACY_COND: f64 = 1e10;

/// Division floor for 1/L; below this a near-cone error is raised.
pub const L_FLOOR: f64 = 1e-30;

/// Width of the numerical closure band around the light cone inside
/// which on-cone trajectories remain evaluable.
pub const CONE_BAND: f64 = 1e-6;

/// Absolute local error target of the adaptive geodesic integrator.
pub const ODE_TOL: f64 = 1e-10;

/// Hard cap on integrator steps per trajectory.
pub const ODE_MAX_STEPS: usize = 1_000_000;

/// Base step for central finite differences in the oracles.
pub const FD_STEP: f64 = 1e-4;

/// Identity-level checks of the jet pipeline itself (g g^{-1} = Id, ...).
pub const PIPELINE_IDENTITY: f64 = 1e-12;

/// Default vertical truncation budget.
pub const V_ORD: u8 = 6;

/// Default base truncation budget.
pub const H_ORD: u8 = 2;

/// Relative gap between the two always-available evaluations of the trace
/// residual that is only *warned* about, not failed.
pub const TRACE_ROUTE_WARN: f64 = 1e-6;

/// Relative tolerance helper: residual |r| measured against max(1, |ref|).
pub fn rel_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}
