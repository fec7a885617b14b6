//! Built-in metric families, linear-connection coefficient tables, and the
//! parameterized test-field families (spray differences Z, one-forms A,
//! divergence test fields, 0-homogeneous scalars). Everything evaluates
//! generically over [`Num`] so the same formulas feed plain evaluation,
//! finite-difference oracles, and jet differentiation.

use serde::{Deserialize, Serialize};

use crate::domain::{ChartBox, ConicDomain, FiberCone};
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::num::{sum, Num};
use crate::tensor::Tn;

/// A pseudo-Finsler metric: the scalar L together with its domain and
/// declared structure.
#[derive(Clone, Debug)]
pub struct Metric {
    pub name: String,
    pub kind: MetricKind,
    pub n: usize,
    pub domain: ConicDomain,
    /// Declared diagonal signs of the fundamental tensor on the domain.
    pub signature: Vec<i8>,
    /// L is exactly quadratic in y (pseudo-Riemannian): polynomial fiber
    /// dependence, so low vertical jet orders suffice.
    pub quadratic: bool,
}

#[derive(Clone, Debug)]
pub enum MetricKind {
    /// L = sum (y^i)^2.
    Euclidean,
    /// L = (y^1)^2 - sum_{i>1} (y^i)^2 on the future cone.
    Minkowski,
    /// Flat plane, polar chart x = (r, phi): L = (y^1)^2 + r^2 (y^2)^2.
    FlatPolar2,
    /// Flat 3-space, spherical chart x = (r, theta, phi).
    FlatSpherical3,
    /// Unit round 2-sphere, chart x = (theta, phi).
    Sphere2,
    /// Static spherically-symmetric Lorentzian vacuum metric,
    /// chart x = (t, r, theta, phi), horizon scale rs.
    SchwarzschildLike { rs: f64 },
    /// Flat-background Randers form: L = (|y| + b_a y^a)^2 with
    /// b_i(x) = b0_i + b1_i sin(x^1). b1 = 0 gives the Berwald case.
    Randers { b0: Vec<f64>, b1: Vec<f64> },
    /// Fourth-root type: L = sqrt(sum c_i(x) (y^i)^4),
    /// c_i(x) = 1 + eps sin(x^{i}), on the positive orthant.
    QuarticRoot { eps: f64 },
    /// User expression in x1..xn, y1..yn.
    Custom { expr: Expr },
}

impl Metric {
    pub fn euclidean(n: usize) -> Metric {
        Metric {
            name: format!("euclidean-{n}"),
            kind: MetricKind::Euclidean,
            n,
            domain: ConicDomain {
                chart: unit_box(n),
                cone: FiberCone::AllNonzero,
                fiber_connected: true,
            },
            signature: vec![1; n],
            quadratic: true,
        }
    }

    pub fn minkowski(n: usize) -> Metric {
        let mut signature = vec![-1; n];
        signature[0] = 1;
        Metric {
            name: format!("minkowski-{n}"),
            kind: MetricKind::Minkowski,
            n,
            domain: ConicDomain {
                chart: unit_box(n),
                cone: FiberCone::FutureTimelike,
                fiber_connected: true,
            },
            signature,
            quadratic: true,
        }
    }

    pub fn flat_polar2() -> Metric {
        Metric {
            name: "flat-polar".into(),
            kind: MetricKind::FlatPolar2,
            n: 2,
            domain: ConicDomain {
                chart: ChartBox::new(vec![0.5, 0.2], vec![2.0, 1.2]),
                cone: FiberCone::AllNonzero,
                fiber_connected: true,
            },
            signature: vec![1, 1],
            quadratic: true,
        }
    }

    pub fn flat_spherical3() -> Metric {
        Metric {
            name: "flat-spherical".into(),
            kind: MetricKind::FlatSpherical3,
            n: 3,
            domain: ConicDomain {
                chart: ChartBox::new(vec![0.5, 0.6, 0.2], vec![2.0, 2.5, 1.2]),
                cone: FiberCone::AllNonzero,
                fiber_connected: true,
            },
            signature: vec![1, 1, 1],
            quadratic: true,
        }
    }

    pub fn sphere2() -> Metric {
        Metric {
            name: "sphere".into(),
            kind: MetricKind::Sphere2,
            n: 2,
            domain: ConicDomain {
                chart: ChartBox::new(vec![0.6, 0.2], vec![2.5, 1.2]),
                cone: FiberCone::AllNonzero,
                fiber_connected: true,
            },
            signature: vec![1, 1],
            quadratic: true,
        }
    }

    pub fn schwarzschild_like(rs: f64) -> Metric {
        Metric {
            name: "schwarzschild".into(),
            kind: MetricKind::SchwarzschildLike { rs },
            n: 4,
            domain: ConicDomain {
                chart: ChartBox::new(
                    vec![0.0, 2.2 * rs, 0.6, 0.2],
                    vec![1.0, 4.0 * rs, 2.5, 1.2],
                ),
                cone: FiberCone::FutureTimelike,
                fiber_connected: true,
            },
            signature: vec![1, -1, -1, -1],
            quadratic: true,
        }
    }

    pub fn randers(b0: Vec<f64>, b1: Vec<f64>) -> Metric {
        let n = b0.len();
        assert_eq!(b1.len(), n);
        // Validity |b(x)| < 1 over the box: worst case |b0| + |b1|.
        let worst: f64 = b0
            .iter()
            .zip(&b1)
            .map(|(&a, &b)| (a.abs() + b.abs()) * (a.abs() + b.abs()))
            .sum::<f64>()
            .sqrt();
        assert!(worst < 1.0, "drift covector reaches norm {worst} >= 1");
        let generic = b1.iter().any(|&v| v != 0.0);
        Metric {
            name: if generic {
                format!("randers-{n}")
            } else {
                format!("randers-berwald-{n}")
            },
            kind: MetricKind::Randers { b0, b1 },
            n,
            domain: ConicDomain {
                chart: unit_box(n),
                cone: FiberCone::AllNonzero,
                fiber_connected: true,
            },
            signature: vec![1; n],
            quadratic: false,
        }
    }

    pub fn quartic_root(eps: f64) -> Metric {
        Metric {
            name: "quartic".into(),
            kind: MetricKind::QuarticRoot { eps },
            n: 3,
            domain: ConicDomain {
                chart: unit_box(3),
                cone: FiberCone::PositiveOrthant,
                fiber_connected: true,
            },
            signature: vec![1, 1, 1],
            quadratic: false,
        }
    }

    pub fn custom(name: &str, n: usize, expr: Expr, cone: FiberCone) -> Result<Metric> {
        let req = expr.requirements();
        if req.min_dim > n {
            return Err(Error::Config(format!(
                "metric expression uses coordinate index {} beyond dimension {n}",
                req.min_dim
            )));
        }
        if req.uses_metric {
            return Err(Error::Config(
                "metric expression cannot reference L or F".into(),
            ));
        }
        Ok(Metric {
            name: name.to_string(),
            kind: MetricKind::Custom { expr },
            n,
            domain: ConicDomain {
                chart: unit_box(n),
                cone,
                fiber_connected: true,
            },
            signature: vec![1; n],
            quadratic: false,
        })
    }

    /// The metric scalar L at a chart point, over any scalar algebra.
    pub fn l_value<T: Num>(&self, x: &[T], y: &[T]) -> Result<T> {
        let ex = &y[0];
        Ok(match &self.kind {
            MetricKind::Euclidean => sum(ex, y.iter().map(|v| v.clone() * v.clone())),
            MetricKind::Minkowski => {
                let space = sum(ex, y[1..].iter().map(|v| v.clone() * v.clone()));
                y[0].clone() * y[0].clone() - space
            }
            MetricKind::FlatPolar2 => {
                y[0].clone() * y[0].clone()
                    + x[0].clone() * x[0].clone() * y[1].clone() * y[1].clone()
            }
            MetricKind::FlatSpherical3 => {
                let r2 = x[0].clone() * x[0].clone();
                let st = x[1].sin();
                y[0].clone() * y[0].clone()
                    + r2.clone() * y[1].clone() * y[1].clone()
                    + r2 * st.clone() * st * y[2].clone() * y[2].clone()
            }
            MetricKind::Sphere2 => {
                let st = x[0].sin();
                y[0].clone() * y[0].clone() + st.clone() * st * y[1].clone() * y[1].clone()
            }
            MetricKind::SchwarzschildLike { rs } => {
                let r = x[1].clone();
                let f = r.lift(1.0) - r.lift(*rs) / r.clone();
                let st = x[2].sin();
                let angular = y[2].clone() * y[2].clone()
                    + st.clone() * st * y[3].clone() * y[3].clone();
                f.clone() * y[0].clone() * y[0].clone()
                    - y[1].clone() * y[1].clone() / f
                    - r.clone() * r * angular
            }
            MetricKind::Randers { b0, b1 } => {
                let alpha = sum(ex, y.iter().map(|v| v.clone() * v.clone())).sqrt();
                let s = x[0].sin();
                let beta = sum(
                    ex,
                    y.iter().enumerate().map(|(i, v)| {
                        (v.lift(b0[i]) + v.lift(b1[i]) * s.clone()) * v.clone()
                    }),
                );
                let root = alpha + beta;
                root.clone() * root
            }
            MetricKind::QuarticRoot { eps } => sum(
                ex,
                y.iter().enumerate().map(|(i, v)| {
                    let c = v.lift(1.0) + x[i].sin() * v.lift(*eps);
                    let v2 = v.clone() * v.clone();
                    c * v2.clone() * v2
                }),
            )
            .sqrt(),
            MetricKind::Custom { expr } => expr.eval(&Bindings { x, y, l: None })?,
        })
    }

    /// Known interior point for smoke tests and probes.
    pub fn base_point(&self) -> (Vec<f64>, Vec<f64>) {
        let x = self.domain.chart.center();
        let y = match self.domain.cone {
            FiberCone::AllNonzero => {
                let mut y = vec![0.3; self.n];
                y[0] = 1.0;
                y
            }
            FiberCone::FutureTimelike => {
                // Small spatial part: stays timelike even when chart
                // factors (r^2 terms) amplify the spatial components.
                let mut y = vec![0.04; self.n];
                y[0] = 1.0;
                y
            }
            FiberCone::PositiveOrthant => vec![1.0; self.n],
        };
        (x, y)
    }
}

fn unit_box(n: usize) -> ChartBox {
    ChartBox::new(vec![-1.0; n], vec![1.0; n])
}

/// The default catalog spanning quadratic/non-quadratic, definite and
/// Lorentzian signatures, and vanishing/non-vanishing mean Landsberg.
pub fn standard_catalog() -> Vec<Metric> {
    vec![
        Metric::euclidean(3),
        Metric::minkowski(4),
        Metric::flat_polar2(),
        Metric::flat_spherical3(),
        Metric::sphere2(),
        Metric::schwarzschild_like(1.0),
        Metric::randers(vec![0.25, 0.05, 0.0], vec![0.0; 3]),
        Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]),
        Metric::quartic_root(0.3),
    ]
}

/// Catalog lookup by family name with optional parameters.
pub fn metric_by_name(
    name: &str,
    dim: Option<usize>,
    params: &MetricParams,
) -> Result<Metric> {
    let n = dim.unwrap_or(3);
    match name {
        "euclidean" => Ok(Metric::euclidean(n)),
        "minkowski" => Ok(Metric::minkowski(dim.unwrap_or(4))),
        "flat-polar" => Ok(Metric::flat_polar2()),
        "flat-spherical" => Ok(Metric::flat_spherical3()),
        "sphere" => Ok(Metric::sphere2()),
        "schwarzschild" => Ok(Metric::schwarzschild_like(params.rs.unwrap_or(1.0))),
        "randers" => {
            let b0 = params
                .b0
                .clone()
                .unwrap_or_else(|| vec![0.25, 0.05, 0.0]);
            let b1 = params.b1.clone().unwrap_or_else(|| vec![0.0; b0.len()]);
            Ok(Metric::randers(b0, b1))
        }
        "quartic" => Ok(Metric::quartic_root(params.eps.unwrap_or(0.3))),
        other => {
            let known = [
                "euclidean",
                "minkowski",
                "flat-polar",
                "flat-spherical",
                "sphere",
                "schwarzschild",
                "randers",
                "quartic",
            ];
            Err(Error::Config(format!(
                "unknown catalog metric {other:?}; known: {}",
                known.join(", ")
            )))
        }
    }
}

/// Optional per-family parameters accepted by [`metric_by_name`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MetricParams {
    pub rs: Option<f64>,
    pub b0: Option<Vec<f64>>,
    pub b1: Option<Vec<f64>>,
    pub eps: Option<f64>,
}

/// Levi-Civita coefficient tables Gamma^k_{ij}(x) for the quadratic
/// catalog entries, in the same charts. Used to build linear connections
/// and as closed-form references.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearGamma {
    FlatCartesian { n: usize },
    FlatPolar2,
    Sphere2,
    FlatSpherical3,
    SchwarzschildLike { rs: f64 },
}

impl LinearGamma {
    pub fn dim(&self) -> usize {
        match self {
            LinearGamma::FlatCartesian { n } => *n,
            LinearGamma::FlatPolar2 | LinearGamma::Sphere2 => 2,
            LinearGamma::FlatSpherical3 => 3,
            LinearGamma::SchwarzschildLike { .. } => 4,
        }
    }

    /// Coefficients with layout [i, j, k] = Gamma^k_{ij} (upper index last).
    pub fn gamma<T: Num>(&self, x: &[T]) -> Tn<T> {
        let n = self.dim();
        let zero = x[0].lift(0.0);
        match self {
            LinearGamma::FlatCartesian { .. } => {
                Tn::from_fn(&[n, n, n], |_| zero.clone())
            }
            LinearGamma::FlatPolar2 => {
                let r = x[0].clone();
                let inv_r = r.lift(1.0) / r.clone();
                Tn::from_fn(&[2, 2, 2], |ix| match (ix[0], ix[1], ix[2]) {
                    (1, 1, 0) => -r.clone(),
                    (0, 1, 1) | (1, 0, 1) => inv_r.clone(),
                    _ => zero.clone(),
                })
            }
            LinearGamma::Sphere2 => {
                let (st, ct) = (x[0].sin(), x[0].cos());
                let cot = ct.clone() / st.clone();
                Tn::from_fn(&[2, 2, 2], |ix| match (ix[0], ix[1], ix[2]) {
                    (1, 1, 0) => -(st.clone() * ct.clone()),
                    (0, 1, 1) | (1, 0, 1) => cot.clone(),
                    _ => zero.clone(),
                })
            }
            LinearGamma::FlatSpherical3 => {
                let r = x[0].clone();
                let inv_r = r.lift(1.0) / r.clone();
                let (st, ct) = (x[1].sin(), x[1].cos());
                let cot = ct.clone() / st.clone();
                Tn::from_fn(&[3, 3, 3], |ix| match (ix[0], ix[1], ix[2]) {
                    (1, 1, 0) => -r.clone(),
                    (2, 2, 0) => -(r.clone() * st.clone() * st.clone()),
                    (0, 1, 1) | (1, 0, 1) => inv_r.clone(),
                    (2, 2, 1) => -(st.clone() * ct.clone()),
                    (0, 2, 2) | (2, 0, 2) => inv_r.clone(),
                    (1, 2, 2) | (2, 1, 2) => cot.clone(),
                    _ => zero.clone(),
                })
            }
            LinearGamma::SchwarzschildLike { rs } => {
                let r = x[1].clone();
                let inv_r = r.lift(1.0) / r.clone();
                let f = r.lift(1.0) - r.lift(*rs) / r.clone();
                // f' = rs / r^2
                let fp = r.lift(*rs) / (r.clone() * r.clone());
                let half = r.lift(0.5);
                let (st, ct) = (x[2].sin(), x[2].cos());
                let cot = ct.clone() / st.clone();
                Tn::from_fn(&[4, 4, 4], |ix| match (ix[0], ix[1], ix[2]) {
                    (0, 1, 0) | (1, 0, 0) => half.clone() * fp.clone() / f.clone(),
                    (0, 0, 1) => half.clone() * f.clone() * fp.clone(),
                    (1, 1, 1) => -(half.clone() * fp.clone() / f.clone()),
                    (2, 2, 1) => -(r.clone() * f.clone()),
                    (3, 3, 1) => -(r.clone() * f.clone() * st.clone() * st.clone()),
                    (1, 2, 2) | (2, 1, 2) => inv_r.clone(),
                    (3, 3, 2) => -(st.clone() * ct.clone()),
                    (1, 3, 3) | (3, 1, 3) => inv_r.clone(),
                    (2, 3, 3) | (3, 2, 3) => cot.clone(),
                    _ => zero.clone(),
                })
            }
        }
    }

    /// The catalog metric this table is the Levi-Civita connection of.
    pub fn reference_metric(&self) -> Metric {
        match self {
            LinearGamma::FlatCartesian { n } => Metric::euclidean(*n),
            LinearGamma::FlatPolar2 => Metric::flat_polar2(),
            LinearGamma::Sphere2 => Metric::sphere2(),
            LinearGamma::FlatSpherical3 => Metric::flat_spherical3(),
            LinearGamma::SchwarzschildLike { rs } => Metric::schwarzschild_like(*rs),
        }
    }
}

/// Spray-difference families: 2-homogeneous (1,0) fields used to assemble
/// connections and to probe the solution-space structure.
#[derive(Clone, Debug, PartialEq)]
pub enum ZKind {
    Zero,
    /// Z^i = c F y^i (radial: shares pregeodesics with the base spray).
    RadialF { c: f64 },
    /// Z^i = L w^i with constant w: divisible by L, extends to the cone.
    LTimesW { w: Vec<f64> },
    /// Z^i = F w_i y^i (diagonal linear factor times F): not L-divisible.
    FTimesW { w: Vec<f64> },
    /// Z^i = q_i (y^i)^2: generic polynomial spray difference.
    QuadraticDiag { q: Vec<f64> },
    /// Z^i = 2 (c_a y^a) y^i - |y|^2 c_i: on the Euclidean metric this
    /// solves the direction equation of the symmetric system with
    /// sigma = c_a y^a, while the trace equation keeps a (2-n) sigma
    /// remainder, so it is deliberately not a full solution.
    SigmaLinear { c: Vec<f64> },
}

impl ZKind {
    /// Components over any scalar algebra; `l` is the metric value.
    pub fn eval<T: Num>(&self, _x: &[T], y: &[T], l: &T) -> Vec<T> {
        let n = y.len();
        match self {
            ZKind::Zero => vec![l.lift(0.0); n],
            ZKind::RadialF { c } => {
                let f = l.abs().sqrt();
                y.iter().map(|v| f.clone() * v.clone() * v.lift(*c)).collect()
            }
            ZKind::LTimesW { w } => {
                (0..n).map(|i| l.clone() * l.lift(w[i])).collect()
            }
            ZKind::FTimesW { w } => {
                let f = l.abs().sqrt();
                y.iter()
                    .enumerate()
                    .map(|(i, v)| f.clone() * v.clone() * v.lift(w[i]))
                    .collect()
            }
            ZKind::QuadraticDiag { q } => y
                .iter()
                .enumerate()
                .map(|(i, v)| v.clone() * v.clone() * v.lift(q[i]))
                .collect(),
            ZKind::SigmaLinear { c } => {
                let sigma = sum(
                    l,
                    y.iter().enumerate().map(|(i, v)| v.clone() * v.lift(c[i])),
                );
                let norm2 = sum(l, y.iter().map(|v| v.clone() * v.clone()));
                (0..n)
                    .map(|i| {
                        let two_sig = sigma.clone() + sigma.clone();
                        two_sig * y[i].clone() - norm2.clone() * l.lift(c[i])
                    })
                    .collect()
            }
        }
    }

    /// Fiber dependence stays polynomial (no root of L enters).
    pub fn polynomial(&self) -> bool {
        matches!(
            self,
            ZKind::Zero | ZKind::LTimesW { .. } | ZKind::QuadraticDiag { .. } | ZKind::SigmaLinear { .. }
        )
    }
}

/// 0-homogeneous one-form families for connection translations N + A (x) B.
/// The first four evaluate directly; the last three are defined through
/// the pair's own (g, Z) data and are materialized during assembly.
#[derive(Clone, Debug, PartialEq)]
pub enum AKind {
    Zero,
    Constant {
        c: Vec<f64>,
    },
    /// c_i (1 + sin(x^1)/2): classical-style isotropic with x-dependence.
    Waved {
        c: Vec<f64>,
    },
    /// c_i + d_i y^p y^q / L: genuinely anisotropic.
    Anisotropic {
        c: Vec<f64>,
        d: Vec<f64>,
        p: usize,
        q: usize,
    },
    /// A_i = -2 (y_a Z^a) y_i / L^2: enforces the constant-L criterion
    /// A_a y^a = -2 y_a Z^a / L along every geodesic.
    DriftNeutral,
    /// A_i = -y_a Z^a_{.i} / L: makes the pair metric-compatible
    /// (covariantly constant L and y-flat).
    CompatRadial,
    /// A_i = -(n+2) y_a Z^a_{.i} / (2n L): kills the g-trace of the
    /// covariant derivative of g.
    TraceNeutral,
}

impl AKind {
    /// Direct evaluation for the first four variants.
    pub fn eval_direct<T: Num>(&self, x: &[T], y: &[T], l: &T) -> Result<Vec<T>> {
        let n = y.len();
        Ok(match self {
            AKind::Zero => vec![l.lift(0.0); n],
            AKind::Constant { c } => c.iter().map(|&v| l.lift(v)).collect(),
            AKind::Waved { c } => {
                let s = l.lift(1.0) + x[0].sin() * l.lift(0.5);
                c.iter().map(|&v| s.clone() * l.lift(v)).collect()
            }
            AKind::Anisotropic { c, d, p, q } => {
                let ratio = y[*p].clone() * y[*q].clone() / l.clone();
                (0..n)
                    .map(|i| l.lift(c[i]) + l.lift(d[i]) * ratio.clone())
                    .collect()
            }
            other => {
                return Err(Error::Eval(format!(
                    "{other:?} is defined through the pair's jets; assemble a connection instead"
                )))
            }
        })
    }

    pub fn is_constructed(&self) -> bool {
        matches!(
            self,
            AKind::DriftNeutral | AKind::CompatRadial | AKind::TraceNeutral
        )
    }

    pub fn polynomial(&self) -> bool {
        matches!(self, AKind::Zero | AKind::Constant { .. } | AKind::Waved { .. })
    }
}

/// Horizontal divergence test fields: (1,0), 0-homogeneous.
#[derive(Clone, Debug, PartialEq)]
pub enum HField {
    Constant { c: Vec<f64> },
    /// c_i (1 + sin(x^1)/2).
    Waved { c: Vec<f64> },
    /// X^i = y^i y^p / L.
    Ratio { p: usize },
}

impl HField {
    pub fn eval<T: Num>(&self, x: &[T], y: &[T], l: &T) -> Vec<T> {
        let n = y.len();
        match self {
            HField::Constant { c } => c.iter().map(|&v| l.lift(v)).collect(),
            HField::Waved { c } => {
                let s = l.lift(1.0) + x[0].sin() * l.lift(0.5);
                c.iter().map(|&v| s.clone() * l.lift(v)).collect()
            }
            HField::Ratio { p } => (0..n)
                .map(|i| y[i].clone() * y[*p].clone() / l.clone())
                .collect(),
        }
    }
}

/// Vertical divergence test fields: (1,0), 1-homogeneous. The gradient
/// family X^a = L g^{ab} f_{.b} needs jets and is materialized in the
/// campaign layer from a [`ScalarField`].
#[derive(Clone, Debug, PartialEq)]
pub enum VField {
    /// The canonical field, components y^i.
    Canonical,
    /// X^a = m_{a b} y^b with a constant matrix (row-major).
    Linear { m: Vec<f64> },
    /// X^a = L g^{ab} f_{.b}.
    Gradient { f: ScalarField },
}

impl VField {
    /// Direct evaluation for the jet-free variants.
    pub fn eval_direct<T: Num>(&self, y: &[T]) -> Result<Vec<T>> {
        let n = y.len();
        Ok(match self {
            VField::Canonical => y.to_vec(),
            VField::Linear { m } => {
                assert_eq!(m.len(), n * n);
                (0..n)
                    .map(|a| {
                        sum(
                            &y[0],
                            (0..n).map(|b| y[b].clone() * y[b].lift(m[a * n + b])),
                        )
                    })
                    .collect()
            }
            VField::Gradient { .. } => {
                return Err(Error::Eval(
                    "gradient fields are materialized from jets".into(),
                ))
            }
        })
    }
}

/// 0-homogeneous scalar families: shift-identity tests, spectrum checks.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarField {
    /// f = y^p y^q / L.
    Ratio { p: usize, q: usize },
    /// f = H(y) / |y|^nu with H a monomial harmonic of degree nu
    /// (1, y^p, or y^p y^q with p != q). Euclidean-metric fiber only,
    /// where |y|^2 = L.
    Harmonic { factors: Vec<usize>, nu: u32 },
}

impl ScalarField {
    pub fn eval<T: Num>(&self, y: &[T], l: &T) -> T {
        match self {
            ScalarField::Ratio { p, q } => y[*p].clone() * y[*q].clone() / l.clone(),
            ScalarField::Harmonic { factors, nu } => {
                let mut h = l.lift(1.0);
                for &p in factors {
                    h = h * y[p].clone();
                }
                if *nu == 0 {
                    h
                } else if nu % 2 == 0 {
                    h / l.powi((*nu / 2) as i32)
                } else {
                    h / l.abs().sqrt().powi(*nu as i32)
                }
            }
        }
    }

    /// Declared eigendegree of the harmonic numerator (None for ratios).
    pub fn harmonic_degree(&self) -> Option<u32> {
        match self {
            ScalarField::Harmonic { nu, .. } => Some(*nu),
            ScalarField::Ratio { .. } => None,
        }
    }
}
