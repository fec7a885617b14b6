//! Versioned JSON run configuration. Parsing is two-phase: the text is
//! read into a generic JSON tree, then validated field by field with
//! every violation collected before a single error is raised, so a bad
//! file is diagnosed in one pass. Unknown keys are rejected everywhere.

use crate::catalog::{metric_by_name, AKind, LinearGamma, Metric, MetricParams, ZKind};
use crate::connection::ConnectionKind;
use crate::domain::FiberCone;
use crate::error::{Error, Result};
use crate::expr::Expr;
use serde_json::Value;

pub const CONFIG_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct GeodesicConfig {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub t_end: f64,
    pub grid: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol_scale: f64,
    pub metric: Metric,
    pub connection: ConnectionKind,
    pub checks: Vec<String>,
    pub geodesic: Option<GeodesicConfig>,
}

struct Walker {
    errors: Vec<String>,
}

impl Walker {
    fn new() -> Walker {
        Walker { errors: Vec::new() }
    }

    fn err(&mut self, msg: String) {
        self.errors.push(msg);
    }

    fn object<'a>(&mut self, v: &'a Value, at: &str) -> Option<&'a serde_json::Map<String, Value>> {
        match v.as_object() {
            Some(m) => Some(m),
            None => {
                self.err(format!("{at}: expected an object"));
                None
            }
        }
    }

    fn reject_unknown(&mut self, m: &serde_json::Map<String, Value>, at: &str, known: &[&str]) {
        for k in m.keys() {
            if !known.contains(&k.as_str()) {
                self.err(format!("{at}: unknown key {k:?} (known: {})", known.join(", ")));
            }
        }
    }

    fn u64_field(&mut self, m: &serde_json::Map<String, Value>, key: &str, default: u64) -> u64 {
        match m.get(key) {
            None => default,
            Some(v) => match v.as_u64() {
                Some(u) => u,
                None => {
                    self.err(format!("{key}: expected a non-negative integer, got {v}"));
                    default
                }
            },
        }
    }

    fn f64_field(&mut self, m: &serde_json::Map<String, Value>, key: &str, default: f64) -> f64 {
        match m.get(key) {
            None => default,
            Some(v) => match v.as_f64() {
                Some(f) if f.is_finite() => f,
                _ => {
                    self.err(format!("{key}: expected a finite number, got {v}"));
                    default
                }
            },
        }
    }

    fn str_field<'a>(
        &mut self,
        m: &'a serde_json::Map<String, Value>,
        key: &str,
        at: &str,
    ) -> Option<&'a str> {
        match m.get(key) {
            None => {
                self.err(format!("{at}: missing required key {key:?}"));
                None
            }
            Some(v) => match v.as_str() {
                Some(s) => Some(s),
                None => {
                    self.err(format!("{at}.{key}: expected a string, got {v}"));
                    None
                }
            },
        }
    }

    fn vec_f64(&mut self, v: &Value, at: &str) -> Vec<f64> {
        let Some(arr) = v.as_array() else {
            self.err(format!("{at}: expected an array of numbers"));
            return Vec::new();
        };
        let mut out = Vec::with_capacity(arr.len());
        for (i, e) in arr.iter().enumerate() {
            match e.as_f64() {
                Some(f) if f.is_finite() => out.push(f),
                _ => self.err(format!("{at}[{i}]: expected a finite number, got {e}")),
            }
        }
        out
    }

    fn usize_field(
        &mut self,
        m: &serde_json::Map<String, Value>,
        key: &str,
        at: &str,
    ) -> Option<usize> {
        m.get(key).map(|v| match v.as_u64() {
            Some(u) => u as usize,
            None => {
                self.err(format!("{at}.{key}: expected a non-negative integer, got {v}"));
                0
            }
        })
    }
}

/// Inner message of a collected error, without its category prefix; the
/// walker prepends its own path context and the final error re-adds one.
fn bare(e: &Error) -> String {
    match e {
        Error::Config(m) | Error::Eval(m) => m.clone(),
        other => other.to_string(),
    }
}

fn parse_metric(w: &mut Walker, v: &Value) -> Option<Metric> {
    let m = w.object(v, "metric")?;
    let name = w.str_field(m, "name", "metric")?.to_string();
    if name == "custom" {
        w.reject_unknown(m, "metric", &["name", "dim", "expr", "cone"]);
        let dim = match w.usize_field(m, "dim", "metric") {
            Some(d) => d,
            None => {
                w.err("metric: custom metric requires \"dim\"".into());
                return None;
            }
        };
        let text = w.str_field(m, "expr", "metric")?.to_string();
        let cone = match m.get("cone").and_then(Value::as_str) {
            None | Some("all-nonzero") => FiberCone::AllNonzero,
            Some("future-timelike") => FiberCone::FutureTimelike,
            Some("positive-orthant") => FiberCone::PositiveOrthant,
            Some(other) => {
                w.err(format!(
                    "metric.cone: unknown cone {other:?} (known: all-nonzero, future-timelike, positive-orthant)"
                ));
                return None;
            }
        };
        let expr = match Expr::parse(&text) {
            Ok(e) => e,
            Err(e) => {
                w.err(format!("metric.expr: {}", bare(&e)));
                return None;
            }
        };
        return match Metric::custom("custom", dim, expr, cone) {
            Ok(metric) => Some(metric),
            Err(e) => {
                w.err(format!("metric: {}", bare(&e)));
                None
            }
        };
    }
    w.reject_unknown(m, "metric", &["name", "dim", "rs", "b0", "b1", "eps"]);
    let dim = w.usize_field(m, "dim", "metric");
    let params = MetricParams {
        rs: m.get("rs").and_then(Value::as_f64),
        b0: m.get("b0").map(|v| w.vec_f64(v, "metric.b0")),
        b1: m.get("b1").map(|v| w.vec_f64(v, "metric.b1")),
        eps: m.get("eps").and_then(Value::as_f64),
    };
    match metric_by_name(&name, dim, &params) {
        Ok(metric) => Some(metric),
        Err(e) => {
            w.err(format!("metric: {}", bare(&e)));
            None
        }
    }
}

fn parse_z(w: &mut Walker, v: &Value) -> Option<ZKind> {
    let m = w.object(v, "connection.z")?;
    let kind = w.str_field(m, "kind", "connection.z")?;
    let known: &[&str] = match kind {
        "zero" => &["kind"],
        "radial-f" | "sigma-linear" => &["kind", "c"],
        "l-times-w" | "f-times-w" => &["kind", "w"],
        "quadratic-diag" => &["kind", "q"],
        _ => {
            w.err(format!(
                "connection.z.kind: unknown kind {kind:?} (known: zero, radial-f, l-times-w, f-times-w, quadratic-diag, sigma-linear)"
            ));
            return None;
        }
    };
    w.reject_unknown(m, "connection.z", known);
    match kind {
        "zero" => Some(ZKind::Zero),
        "radial-f" => Some(ZKind::RadialF {
            c: w.f64_field(m, "c", 0.0),
        }),
        "l-times-w" => Some(ZKind::LTimesW {
            w: m.get("w").map(|v| w.vec_f64(v, "connection.z.w"))?,
        }),
        "f-times-w" => Some(ZKind::FTimesW {
            w: m.get("w").map(|v| w.vec_f64(v, "connection.z.w"))?,
        }),
        "quadratic-diag" => Some(ZKind::QuadraticDiag {
            q: m.get("q").map(|v| w.vec_f64(v, "connection.z.q"))?,
        }),
        "sigma-linear" => Some(ZKind::SigmaLinear {
            c: m.get("c").map(|v| w.vec_f64(v, "connection.z.c"))?,
        }),
        _ => unreachable!(),
    }
}

fn parse_a(w: &mut Walker, v: &Value) -> Option<AKind> {
    let m = w.object(v, "connection.a")?;
    let kind = w.str_field(m, "kind", "connection.a")?;
    let known: &[&str] = match kind {
        "zero" | "drift-neutral" | "compat-radial" | "trace-neutral" => &["kind"],
        "constant" | "waved" => &["kind", "c"],
        "anisotropic" => &["kind", "c", "d", "p", "q"],
        _ => {
            w.err(format!(
                "connection.a.kind: unknown kind {kind:?} (known: zero, constant, waved, anisotropic, drift-neutral, compat-radial, trace-neutral)"
            ));
            return None;
        }
    };
    w.reject_unknown(m, "connection.a", known);
    match kind {
        "zero" => Some(AKind::Zero),
        "drift-neutral" => Some(AKind::DriftNeutral),
        "compat-radial" => Some(AKind::CompatRadial),
        "trace-neutral" => Some(AKind::TraceNeutral),
        "constant" => Some(AKind::Constant {
            c: m.get("c").map(|v| w.vec_f64(v, "connection.a.c"))?,
        }),
        "waved" => Some(AKind::Waved {
            c: m.get("c").map(|v| w.vec_f64(v, "connection.a.c"))?,
        }),
        "anisotropic" => Some(AKind::Anisotropic {
            c: m.get("c").map(|v| w.vec_f64(v, "connection.a.c"))?,
            d: m.get("d").map(|v| w.vec_f64(v, "connection.a.d"))?,
            p: w.usize_field(m, "p", "connection.a").unwrap_or(0),
            q: w.usize_field(m, "q", "connection.a").unwrap_or(0),
        }),
        _ => unreachable!(),
    }
}

fn parse_linear_gamma(w: &mut Walker, m: &serde_json::Map<String, Value>) -> Option<LinearGamma> {
    let name = w.str_field(m, "gamma", "connection")?;
    match name {
        "flat-cartesian" => Some(LinearGamma::FlatCartesian {
            n: w.usize_field(m, "dim", "connection").unwrap_or(3),
        }),
        "flat-polar" => Some(LinearGamma::FlatPolar2),
        "sphere" => Some(LinearGamma::Sphere2),
        "flat-spherical" => Some(LinearGamma::FlatSpherical3),
        "schwarzschild" => Some(LinearGamma::SchwarzschildLike {
            rs: w.f64_field(m, "rs", 1.0),
        }),
        other => {
            w.err(format!(
                "connection.gamma: unknown table {other:?} (known: flat-cartesian, flat-polar, sphere, flat-spherical, schwarzschild)"
            ));
            None
        }
    }
}

fn parse_connection(w: &mut Walker, v: &Value, n: Option<usize>) -> Option<ConnectionKind> {
    let m = w.object(v, "connection")?;
    let kind = w.str_field(m, "kind", "connection")?;
    match kind {
        "metric" => {
            w.reject_unknown(m, "connection", &["kind"]);
            Some(ConnectionKind::Metric)
        }
        "assembled" => {
            w.reject_unknown(m, "connection", &["kind", "z", "a"]);
            let z = match m.get("z") {
                Some(zv) => parse_z(w, zv)?,
                None => ZKind::Zero,
            };
            let a = match m.get("a") {
                Some(av) => parse_a(w, av)?,
                None => AKind::Zero,
            };
            Some(ConnectionKind::Assembled { z, a })
        }
        "linear" => {
            w.reject_unknown(m, "connection", &["kind", "gamma", "dim", "rs"]);
            let lg = parse_linear_gamma(w, m)?;
            if let Some(n) = n {
                if lg.dim() != n {
                    w.err(format!(
                        "connection.gamma: table is {}-dimensional but the metric has dimension {n}",
                        lg.dim()
                    ));
                    return None;
                }
            }
            Some(ConnectionKind::Linear(lg))
        }
        "custom" => {
            w.reject_unknown(m, "connection", &["kind", "exprs"]);
            let Some(arr) = m.get("exprs").and_then(Value::as_array) else {
                w.err("connection.exprs: expected an array of expression strings".into());
                return None;
            };
            let mut exprs = Vec::with_capacity(arr.len());
            for (i, e) in arr.iter().enumerate() {
                let Some(s) = e.as_str() else {
                    w.err(format!("connection.exprs[{i}]: expected a string"));
                    continue;
                };
                match Expr::parse(s) {
                    Ok(ex) => exprs.push(ex),
                    Err(err) => w.err(format!("connection.exprs[{i}]: {}", bare(&err))),
                }
            }
            if let Some(n) = n {
                if exprs.len() != n * n {
                    w.err(format!(
                        "connection.exprs: expected {} entries for dimension {n}, got {}",
                        n * n,
                        exprs.len()
                    ));
                    return None;
                }
            }
            Some(ConnectionKind::Custom { exprs })
        }
        other => {
            w.err(format!(
                "connection.kind: unknown kind {other:?} (known: metric, assembled, linear, custom)"
            ));
            None
        }
    }
}

fn parse_geodesic(w: &mut Walker, v: &Value, n: Option<usize>) -> Option<GeodesicConfig> {
    let m = w.object(v, "geodesic")?;
    w.reject_unknown(m, "geodesic", &["x0", "y0", "t_end", "grid"]);
    let x0 = match m.get("x0") {
        Some(v) => w.vec_f64(v, "geodesic.x0"),
        None => {
            w.err("geodesic: missing required key \"x0\"".into());
            Vec::new()
        }
    };
    let y0 = match m.get("y0") {
        Some(v) => w.vec_f64(v, "geodesic.y0"),
        None => {
            w.err("geodesic: missing required key \"y0\"".into());
            Vec::new()
        }
    };
    let t_end = w.f64_field(m, "t_end", 1.0);
    if t_end <= 0.0 {
        w.err(format!("geodesic.t_end: must be positive, got {t_end}"));
    }
    let grid = w.usize_field(m, "grid", "geodesic").unwrap_or(101);
    if grid < 2 {
        w.err(format!("geodesic.grid: need at least 2 output points, got {grid}"));
    }
    if let Some(n) = n {
        if !x0.is_empty() && x0.len() != n {
            w.err(format!("geodesic.x0: expected {n} components, got {}", x0.len()));
        }
        if !y0.is_empty() && y0.len() != n {
            w.err(format!("geodesic.y0: expected {n} components, got {}", y0.len()));
        }
    }
    Some(GeodesicConfig { x0, y0, t_end, grid })
}

/// Parse and validate a configuration document, reporting every
/// violation at once.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("not valid JSON: {e}")))?;
    let mut w = Walker::new();
    let Some(m) = w.object(&root, "top level") else {
        return Err(Error::Config(w.errors.join("; ")));
    };
    w.reject_unknown(
        m,
        "top level",
        &[
            "version", "seed", "samples", "tol_scale", "metric", "connection", "checks",
            "geodesic",
        ],
    );
    let version = w.u64_field(m, "version", 0);
    if version != CONFIG_VERSION {
        w.err(format!(
            "version: this build reads version {CONFIG_VERSION}, got {version}"
        ));
    }
    let seed = w.u64_field(m, "seed", 0);
    let samples = w.u64_field(m, "samples", 40) as usize;
    if samples == 0 {
        w.err("samples: must be at least 1".into());
    }
    let tol_scale = w.f64_field(m, "tol_scale", 1.0);
    if tol_scale <= 0.0 {
        w.err(format!("tol_scale: must be positive, got {tol_scale}"));
    }
    let metric = match m.get("metric") {
        Some(v) => parse_metric(&mut w, v),
        None => {
            w.err("top level: missing required key \"metric\"".into());
            None
        }
    };
    let n = metric.as_ref().map(|me| me.n);
    let connection = match m.get("connection") {
        Some(v) => parse_connection(&mut w, v, n),
        None => Some(ConnectionKind::Metric),
    };
    let checks: Vec<String> = match m.get("checks") {
        None => Vec::new(),
        Some(v) => match v.as_array() {
            None => {
                w.err("checks: expected an array of check ids".into());
                Vec::new()
            }
            Some(arr) => arr
                .iter()
                .enumerate()
                .filter_map(|(i, e)| match e.as_str() {
                    Some(s) => Some(s.to_string()),
                    None => {
                        w.err(format!("checks[{i}]: expected a string"));
                        None
                    }
                })
                .collect(),
        },
    };
    let geodesic = m.get("geodesic").and_then(|v| parse_geodesic(&mut w, v, n));
    if !w.errors.is_empty() {
        return Err(Error::Config(w.errors.join("; ")));
    }
    Ok(RunConfig {
        seed,
        samples,
        tol_scale,
        metric: metric.expect("validated"),
        connection: connection.expect("validated"),
        checks,
        geodesic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn custom_metric_expressions_parse_and_miss_dim_loudly() {
        let cfg = parse_config(
            r#"{"version": 1, "metric": {"name": "custom", "dim": 2, "expr": "y1^2 + 2*y2^2"}, "checks": []}"#,
        )
        .unwrap();
        assert_eq!(cfg.metric.n, 2);
        assert_eq!(cfg.metric.l_value(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 3.0);

        let err = parse_config(
            r#"{"version": 1, "metric": {"name": "custom", "expr": "y1^2"}, "checks": []}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("dim"), "{err}");
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(
            r#"{"version": 1, "metric": {"name": "euclidean"}, "checks": ["homogeneity"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.samples, 40);
        assert_eq!(cfg.metric.n, 3);
        assert!(matches!(cfg.connection, ConnectionKind::Metric));
        assert_eq!(cfg.checks, vec!["homogeneity"]);
    }

    #[test]
    fn all_violations_are_collected_in_one_error() {
        let bad = r#"{
            "version": 9,
            "seed": -1,
            "tol_scale": 0.0,
            "metric": {"name": "euclidian"},
            "connection": {"kind": "warp"},
            "bogus": true
        }"#;
        let err = parse_config(bad).unwrap_err().to_string();
        for needle in [
            "version",
            "seed",
            "tol_scale",
            "euclidian",
            "warp",
            "bogus",
        ] {
            assert!(err.contains(needle), "missing {needle} in: {err}");
        }
    }

    #[test]
    fn unknown_metric_names_get_the_catalog_list() {
        let err = parse_config(r#"{"version": 1, "metric": {"name": "sphear"}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("known:"), "{err}");
        assert!(err.contains("sphere"), "{err}");
    }

    #[test]
    fn nested_unknown_keys_are_rejected() {
        let err = parse_config(
            r#"{"version": 1, "metric": {"name": "euclidean", "radius": 2.0},
                "connection": {"kind": "assembled", "z": {"kind": "radial-f", "c": 0.1, "depth": 3}}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("radius"), "{err}");
        assert!(err.contains("depth"), "{err}");
    }

    #[test]
    fn assembled_and_geodesic_blocks_parse() {
        let cfg = parse_config(
            r#"{
                "version": 1,
                "seed": 11,
                "metric": {"name": "randers", "b0": [0.25, 0.05, 0.0], "b1": [0.15, 0.0, 0.1]},
                "connection": {"kind": "assembled",
                               "z": {"kind": "radial-f", "c": 0.2},
                               "a": {"kind": "drift-neutral"}},
                "checks": ["l-drift"],
                "geodesic": {"x0": [0.0, 0.0, 0.0], "y0": [1.0, 0.2, 0.1], "t_end": 2.0, "grid": 50}
            }"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.connection,
            ConnectionKind::Assembled {
                z: ZKind::RadialF { .. },
                a: AKind::DriftNeutral
            }
        ));
        let g = cfg.geodesic.unwrap();
        assert_eq!(g.grid, 50);
        assert_eq!(g.x0.len(), 3);
    }

    #[test]
    fn dimension_mismatches_are_caught() {
        let err = parse_config(
            r#"{"version": 1, "metric": {"name": "euclidean"},
                "connection": {"kind": "linear", "gamma": "sphere"}}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("dimension"), "{err}");
    }
}
