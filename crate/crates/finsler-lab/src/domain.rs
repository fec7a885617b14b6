//! Conic domains: where in the slit tangent bundle a metric and its
//! derived fields may be evaluated. Membership is invariant under
//! positive rescaling of y; the boundary indicator flags the L = 0 cone
//! for Lorentzian-type domains.

use serde::{Deserialize, Serialize};

/// Axis-aligned box of admissible chart coordinates.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChartBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ChartBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> ChartBox {
        assert_eq!(lo.len(), hi.len());
        ChartBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    /// Map a unit-cube sample into the box.
    pub fn lerp(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&t, (&lo, &hi))| lo + t * (hi - lo))
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| 0.5 * (lo + hi))
            .collect()
    }
}

/// Shape of the admissible set of fiber directions over each chart point.
/// Every variant is a cone: y is admitted iff lambda y is, for lambda > 0.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum FiberCone {
    /// Whole punctured fiber (definite metrics).
    AllNonzero,
    /// Interior of the future cone: first fiber component positive and
    /// L > 0. Boundary is the light cone L = 0.
    FutureTimelike,
    /// All fiber components strictly positive (metrics whose fundamental
    /// tensor degenerates on the coordinate hyperplanes).
    PositiveOrthant,
}

/// Conic evaluation domain: a chart box times a fiber cone.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConicDomain {
    pub chart: ChartBox,
    pub cone: FiberCone,
    /// Whether each fiber slice is path-connected. Recorded per family;
    /// probed numerically only on sampled two-plane sections.
    pub fiber_connected: bool,
}

impl ConicDomain {
    /// Interior membership. `l` is the metric value at (x, y); the cone
    /// variants that are carved out by the sign of L consult it.
    pub fn admits(&self, x: &[f64], y: &[f64], l: f64) -> bool {
        if !self.chart.contains(x) {
            return false;
        }
        if y.iter().all(|&c| c == 0.0) {
            return false;
        }
        match self.cone {
            FiberCone::AllNonzero => true,
            FiberCone::FutureTimelike => y[0] > 0.0 && l > 0.0,
            FiberCone::PositiveOrthant => y.iter().all(|&c| c > 0.0),
        }
    }

    /// Membership in the numerical closure: the interior plus a band of
    /// width `band` around the light cone. Trajectories of deformations
    /// that preserve the cone live exactly on this boundary.
    pub fn admits_closure(&self, x: &[f64], y: &[f64], l: f64, band: f64) -> bool {
        if self.admits(x, y, l) {
            return true;
        }
        self.has_light_boundary() && self.chart.contains(x) && y[0] > 0.0 && l.abs() <= band
    }

    /// Whether the domain has an L = 0 boundary cone to probe.
    pub fn has_light_boundary(&self) -> bool {
        matches!(self.cone, FiberCone::FutureTimelike)
    }

    /// Boundary indicator: true when (x, y) sits on the light cone within
    /// `tol`, for domains that have one.
    pub fn on_light_boundary(&self, l: f64, tol: f64) -> bool {
        self.has_light_boundary() && l.abs() <= tol
    }
}
