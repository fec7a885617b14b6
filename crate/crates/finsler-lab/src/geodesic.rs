//! Geodesic flow of a connection's underlying spray: adaptive integration,
//! conservation accounting along trajectories, cone-sensitive comparisons,
//! and the algebraic pregeodesic probe.

use crate::catalog::Metric;
use crate::connection::{assembled_parts, ConnectionKind};
use crate::error::{Error, Result};
use crate::expr::Bindings;
use crate::metric::{self, FundJets};
use crate::oracle::fd;
use crate::sampling;
use crate::tol;

/// Spray coefficient values G^i(x, y) for the connection's underlying
/// spray; the geodesic system is dx = y, dy = -2 G.
pub fn spray_values(m: &Metric, kind: &ConnectionKind, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = m.n;
    match kind {
        ConnectionKind::Linear(lg) => {
            let l = m.l_value(x, y)?;
            if !m.domain.admits_closure(x, y, l, tol::CONE_BAND) {
                return Err(Error::Domain {
                    what: format!("left the chart at x={x:?}"),
                });
            }
            let table = lg.gamma(x);
            let mut g = vec![0.0; n];
            for (i, gi) in g.iter_mut().enumerate() {
                for a in 0..n {
                    for b in 0..n {
                        *gi += 0.5 * table.at(&[a, b, i]) * y[a] * y[b];
                    }
                }
            }
            Ok(g)
        }
        ConnectionKind::Custom { exprs } => {
            let l = m.l_value(x, y)?;
            if !m.domain.admits_closure(x, y, l, tol::CONE_BAND) {
                return Err(Error::Domain {
                    what: format!("left the chart at x={x:?}"),
                });
            }
            let b = Bindings { x, y, l: Some(&l) };
            let mut g = vec![0.0; n];
            for i in 0..n {
                for a in 0..n {
                    let nai = exprs[a * n + i].eval(&b)?;
                    g[i] += 0.5 * nai * y[a];
                }
            }
            Ok(g)
        }
        ConnectionKind::Metric => {
            let space = metric::space_for(m, 1, 3);
            let fund = FundJets::new_on_closure(m, x, y, &space, tol::CONE_BAND)?;
            Ok(fund.spray()?.iter().map(|e| e.val()).collect())
        }
        ConnectionKind::Assembled { z, a } => {
            let space = metric::space_for(m, 1, 3);
            let fund = FundJets::new_on_closure(m, x, y, &space, tol::CONE_BAND)?;
            let base = fund.spray()?;
            let (zj, aj) = assembled_parts(z, a, &fund)?;
            let mut ay = 0.0;
            for c in 0..n {
                ay += aj[c].val() * y[c];
            }
            Ok((0..n)
                .map(|i| base[i].val() + zj[i].val() + 0.5 * ay * y[i])
                .collect())
        }
    }
}

/// Instantaneous L-drift rate 2 dL/dt = -8 y_a Z^a - 4 L A_a y^a along
/// the underlying geodesics of an assembled connection; zero everywhere
/// means L is a first integral.
pub fn drift_rate(fund: &FundJets, z: &[crate::jet::Jet], a: &[crate::jet::Jet]) -> Result<f64> {
    let y_low = fund.y_low()?;
    let mut yz = 0.0;
    let mut ay = 0.0;
    for c in 0..fund.n {
        yz += y_low[c].val() * z[c].val();
        ay += a[c].val() * fund.y[c];
    }
    Ok(-4.0 * yz - 2.0 * fund.l.val() * ay)
}

/// Why a trajectory ended before its final time.
#[derive(Clone, Debug, PartialEq)]
pub enum ExitReason {
    ChartExit { t: f64 },
    StepCollapse { t: f64 },
    MaxSteps { t: f64 },
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    /// Chart positions per output time.
    pub x: Vec<Vec<f64>>,
    /// Fiber velocities per output time.
    pub y: Vec<Vec<f64>>,
    pub l: Vec<f64>,
    pub exit: Option<ExitReason>,
    pub steps: usize,
}

impl Trajectory {
    /// Largest |L(t) - L(0)| over the recorded points.
    pub fn l_drift(&self) -> f64 {
        let l0 = self.l[0];
        self.l
            .iter()
            .fold(0.0f64, |acc, &l| acc.max((l - l0).abs()))
    }
}

// Stage abscissae are omitted: the right-hand side has no explicit
// parameter dependence.
const DP_A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate the geodesic system with an embedded 5(4) pair, landing
/// exactly on `grid` uniform output times in [0, t_end]. On chart exit or
/// step collapse the trajectory is returned truncated with a flag.
pub fn integrate(
    m: &Metric,
    kind: &ConnectionKind,
    x0: &[f64],
    y0: &[f64],
    t_end: f64,
    grid: usize,
) -> Result<Trajectory> {
    assert!(grid >= 2 && t_end > 0.0);
    let n = m.n;
    let rhs = |x: &[f64], y: &[f64]| -> Result<Vec<f64>> {
        let g = spray_values(m, kind, x, y)?;
        let mut dot = Vec::with_capacity(2 * n);
        dot.extend_from_slice(y);
        for gi in &g {
            if !gi.is_finite() {
                return Err(Error::Eval("spray became non-finite".into()));
            }
            dot.push(-2.0 * gi);
        }
        Ok(dot)
    };

    let mut state: Vec<f64> = x0.iter().chain(y0.iter()).copied().collect();
    let mut t = 0.0;
    let mut h = t_end / (grid as f64 - 1.0) / 8.0;
    let mut out = Trajectory {
        t: vec![0.0],
        x: vec![x0.to_vec()],
        y: vec![y0.to_vec()],
        l: vec![m.l_value(x0, y0)?],
        exit: None,
        steps: 0,
    };
    let mut next_grid = 1usize;
    let mut k = vec![vec![0.0; 2 * n]; 7];

    while next_grid < grid {
        let t_target = t_end * next_grid as f64 / (grid as f64 - 1.0);
        let mut h_try = h.min(t_target - t);
        if h_try < 1e-14 * t_end {
            out.exit = Some(ExitReason::StepCollapse { t });
            return Ok(out);
        }
        loop {
            out.steps += 1;
            if out.steps > tol::ODE_MAX_STEPS {
                out.exit = Some(ExitReason::MaxSteps { t });
                return Ok(out);
            }
            // Seven stages; domain exits surface as a truncation flag.
            let mut failed = None;
            for s in 0..7 {
                let mut xs = state.clone();
                if s > 0 {
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = if j < DP_A[s - 1].len() {
                            DP_A[s - 1][j]
                        } else {
                            0.0
                        };
                        for (xi, ki) in xs.iter_mut().zip(kj) {
                            *xi += h_try * a * ki;
                        }
                    }
                }
                match rhs(&xs[..n], &xs[n..]) {
                    Ok(dot) => k[s] = dot,
                    Err(Error::Domain { .. }) => {
                        failed = Some(ExitReason::ChartExit { t });
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if let Some(reason) = failed {
                // Retry with a smaller step before giving up: the stage
                // points may have overshot a boundary the solution curve
                // never reaches.
                if h_try > 64.0 * 1e-14 * t_end {
                    h_try *= 0.25;
                    continue;
                }
                out.exit = Some(reason);
                return Ok(out);
            }
            let mut err: f64 = 0.0;
            let mut proposal = state.clone();
            for i in 0..2 * n {
                let mut v5 = 0.0;
                let mut v4 = 0.0;
                for s in 0..7 {
                    v5 += DP_B5[s] * k[s][i];
                    v4 += DP_B4[s] * k[s][i];
                }
                proposal[i] += h_try * v5;
                err = err.max((h_try * (v5 - v4)).abs());
            }
            let scale = if err > 0.0 {
                0.9 * (tol::ODE_TOL / err).powf(0.2)
            } else {
                5.0
            };
            if err <= tol::ODE_TOL {
                t += h_try;
                state = proposal;
                h = (h_try * scale.min(5.0)).max(1e-14 * t_end);
                break;
            }
            h_try *= scale.clamp(0.2, 0.9);
            if h_try < 1e-14 * t_end {
                out.exit = Some(ExitReason::StepCollapse { t });
                return Ok(out);
            }
        }
        if (t - t_target).abs() < 1e-12 * t_end {
            let (xs, ys) = (&state[..n], &state[n..]);
            out.t.push(t);
            out.x.push(xs.to_vec());
            out.y.push(ys.to_vec());
            out.l.push(m.l_value(xs, ys)?);
            next_grid += 1;
        }
    }
    Ok(out)
}

/// Sup over the common output grid of the chart distance between two
/// trajectories (they must share the grid).
pub fn sup_position_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    let mut sup: f64 = 0.0;
    for (xa, xb) in a.x.iter().zip(&b.x) {
        for (u, v) in xa.iter().zip(xb) {
            sup = sup.max((u - v).abs());
        }
    }
    sup
}

/// Initial velocity on the light cone: bisection bracket refined by
/// Newton iterations on s -> L(x, (1, s vhat)).
pub fn null_initial_velocity(m: &Metric, x: &[f64], vhat: &[f64]) -> Result<Vec<f64>> {
    let s0 = sampling::critical_scale(m, x, vhat).ok_or_else(|| {
        Error::Domain {
            what: "no light-cone crossing along this ray".into(),
        }
    })?;
    let lfun = |s: f64| {
        let mut y = vec![1.0];
        y.extend(vhat.iter().map(|&v| v * s));
        m.l_value(x, &y).unwrap_or(f64::NAN)
    };
    let mut s = s0;
    for _ in 0..4 {
        let l = lfun(s);
        let dl = fd::d1(&lfun, s, 1e-6);
        if dl.abs() < 1e-12 {
            break;
        }
        s -= l / dl;
    }
    let mut y = vec![1.0];
    y.extend(vhat.iter().map(|&v| v * s));
    let l = m.l_value(x, &y)?;
    if l.abs() > 1e-11 {
        return Err(Error::Eval(format!("light-cone snap stalled at L = {l:.3e}")));
    }
    Ok(y)
}

/// Algebraic pregeodesic probe: sup over components of the wedge
/// (G_kind - G_metric)^i y^j - (G_kind - G_metric)^j y^i. Zero means the
/// deformation only reparametrizes the metric geodesics.
pub fn spray_wedge_deviation(
    m: &Metric,
    kind: &ConnectionKind,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let g1 = spray_values(m, kind, x, y)?;
    let g0 = spray_values(m, &ConnectionKind::Metric, x, y)?;
    let n = m.n;
    let mut sup: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d_i = g1[i] - g0[i];
            let d_j = g1[j] - g0[j];
            sup = sup.max((d_i * y[j] - d_j * y[i]).abs());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{AKind, ZKind};
    use crate::oracle::sphere_geo;

    #[test]
    fn flat_geodesics_are_straight_lines_with_constant_l() {
        let m = Metric::euclidean(3);
        let x0 = [0.1, -0.2, 0.3];
        let y0 = [0.4, 0.5, -0.1];
        let tr = integrate(&m, &ConnectionKind::Metric, &x0, &y0, 2.0, 21).unwrap();
        assert!(tr.exit.is_none());
        for (k, t) in tr.t.iter().enumerate() {
            for i in 0..3 {
                let want = x0[i] + t * y0[i];
                assert!((tr.x[k][i] - want).abs() < 1e-10, "x[{i}]({t})");
            }
        }
        assert!(tr.l_drift() < 1e-12);
    }

    #[test]
    fn sphere_chart_geodesics_match_the_embedded_great_circles() {
        let m = Metric::sphere2();
        let x0 = [1.1, 0.4];
        let y0 = [0.3, 0.5];
        let tr = integrate(&m, &ConnectionKind::Metric, &x0, &y0, 1.0, 11).unwrap();
        assert!(tr.exit.is_none());
        for (k, t) in tr.t.iter().enumerate() {
            let want = sphere_geo::geodesic_embedded(x0[0], x0[1], y0[0], y0[1], *t);
            let got = sphere_geo::embed(tr.x[k][0], tr.x[k][1]);
            let gap = sphere_geo::embedded_distance(&got, &want);
            assert!(gap < 1e-9, "embed gap {gap} at t={t}");
        }
        assert!(tr.l_drift() < 1e-10);
    }

    #[test]
    fn polar_chart_reproduces_the_cartesian_straight_line() {
        let m = Metric::flat_polar2();
        // Cartesian line starting at (1, 0.3) with velocity (0.2, 0.5).
        let (cx, cy): (f64, f64) = (1.0, 0.3);
        let (vx, vy) = (0.2, 0.5);
        let r0 = (cx * cx + cy * cy).sqrt();
        let phi0 = cy.atan2(cx);
        let rdot0 = (cx * vx + cy * vy) / r0;
        let phidot0 = (cx * vy - cy * vx) / (r0 * r0);
        let tr = integrate(
            &m,
            &ConnectionKind::Metric,
            &[r0, phi0],
            &[rdot0, phidot0],
            1.0,
            11,
        )
        .unwrap();
        assert!(tr.exit.is_none());
        for (k, t) in tr.t.iter().enumerate() {
            let want = (cx + t * vx, cy + t * vy);
            let got = (
                tr.x[k][0] * tr.x[k][1].cos(),
                tr.x[k][0] * tr.x[k][1].sin(),
            );
            assert!((got.0 - want.0).abs() < 1e-9, "x({t})");
            assert!((got.1 - want.1).abs() < 1e-9, "y({t})");
        }
    }

    #[test]
    fn drift_neutral_scale_restores_conservation() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let (x0, y0) = m.base_point();
        let plain = ConnectionKind::Assembled {
            z: ZKind::RadialF { c: 0.2 },
            a: AKind::Zero,
        };
        let tr = integrate(&m, &plain, &x0, &y0, 1.5, 16).unwrap();
        assert!(tr.l_drift() > 1e-3, "drift {}", tr.l_drift());
        let fixed = ConnectionKind::Assembled {
            z: ZKind::RadialF { c: 0.2 },
            a: AKind::DriftNeutral,
        };
        let tr = integrate(&m, &fixed, &x0, &y0, 1.5, 16).unwrap();
        assert!(tr.l_drift() < tol::DRIFT_BOUND, "drift {}", tr.l_drift());
    }

    #[test]
    fn chart_exit_is_flagged_not_fatal() {
        let m = Metric::flat_polar2();
        // Radially outward: r grows past the chart lid well before t = 4.
        let tr = integrate(&m, &ConnectionKind::Metric, &[1.0, 0.7], &[0.5, 0.0], 4.0, 41)
            .unwrap();
        match tr.exit {
            Some(ExitReason::ChartExit { t }) => assert!(t > 1.5 && t < 2.2, "exit at {t}"),
            other => panic!("expected chart exit, got {other:?}"),
        }
        assert!(tr.t.len() < 41);
    }

    #[test]
    fn null_geodesics_ignore_cone_preserving_potentials() {
        let m = Metric::minkowski(4);
        let w = vec![0.3, 0.1, -0.2, 0.05];
        let deformed = ConnectionKind::Assembled {
            z: ZKind::LTimesW { w },
            a: AKind::Zero,
        };
        // Scale the null ray so ten time units span the chart box, and
        // start at the box-centered antipode of the endpoint.
        let vhat = [0.6, 0.5, 0.1];
        let probe = vec![0.0; 4];
        let snapped = null_initial_velocity(&m, &probe, &vhat).unwrap();
        let lam = 0.15;
        let y_null: Vec<f64> = snapped.iter().map(|c| lam * c).collect();
        let x0: Vec<f64> = y_null.iter().map(|c| -5.0 * c).collect();
        let a = integrate(&m, &deformed, &x0, &y_null, 10.0, 101).unwrap();
        let b = integrate(&m, &ConnectionKind::Metric, &x0, &y_null, 10.0, 101).unwrap();
        assert!(a.exit.is_none() && b.exit.is_none(), "{:?} {:?}", a.exit, b.exit);
        let gap = sup_position_gap(&a, &b);
        assert!(gap < tol::LIGHTLIKE_SUP, "null gap {gap}");

        // Timelike control: same deformation, interior velocity.
        let y_time = vec![0.1, 0.01, 0.005, 0.002];
        let x0 = vec![-0.5, 0.0, 0.0, 0.0];
        let a = integrate(&m, &deformed, &x0, &y_time, 10.0, 101).unwrap();
        let b = integrate(&m, &ConnectionKind::Metric, &x0, &y_time, 10.0, 101).unwrap();
        let gap = sup_position_gap(&a, &b);
        assert!(gap > tol::LIGHTLIKE_CONTROL_MIN, "control gap {gap}");
    }

    #[test]
    fn radial_potentials_only_reparametrize_metric_geodesics() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let (x0, y0) = m.base_point();
        let radial = ConnectionKind::Assembled {
            z: ZKind::RadialF { c: 0.4 },
            a: AKind::Zero,
        };
        let w = spray_wedge_deviation(&m, &radial, &x0, &y0).unwrap();
        assert!(w < 1e-12, "radial wedge {w}");
        let skew = ConnectionKind::Assembled {
            z: ZKind::LTimesW {
                w: vec![0.3, -0.1, 0.2],
            },
            a: AKind::Zero,
        };
        let w = spray_wedge_deviation(&m, &skew, &x0, &y0).unwrap();
        assert!(w > 1e-4, "skew wedge {w}");
    }
}
