//! Jet pipeline for metric-derived objects: fundamental tensor and its
//! inverse, metric spray, Berwald nonlinear connection, Cartan and
//! Landsberg tensors with their means, and the properness probe.
//!
//! Index layout convention throughout: lower slots first, the upper slot
//! last. A covariant-derivative slot is appended after the other lower
//! slots. So g[[i,j]], N[[i,k]] = N_i^k, Gamma[[i,j,k]] = Gamma^k_{ij},
//! C[[i,j,k]] = C_{ijk}, Lan[[i,j,k]] = Lan_{ijk} with k the derivative.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::catalog::Metric;
use crate::connection;
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace, Var};
use crate::num::Num;
use crate::sampling::{self, SamplePoint};
use crate::tensor::Tn;
use crate::tol;

/// Jet space sized for a computation that needs `h` base orders and `v`
/// vertical orders on an analytic metric. Quadratic metrics keep full
/// polynomial validity, so a reduced vertical order carries the same
/// information at a fraction of the table size.
pub fn space_for(m: &Metric, h: u8, v: u8) -> Arc<JetSpace> {
    if m.quadratic {
        JetSpace::get(m.n, h, v.min(4))
    } else {
        JetSpace::get(m.n, h, v)
    }
}

/// Coherent snapshot of the metric's zeroth-order objects at one point.
pub struct FundJets {
    pub n: usize,
    pub space: Arc<JetSpace>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub xj: Vec<Jet>,
    pub yj: Vec<Jet>,
    pub l: Jet,
    pub g: Tn<Jet>,
    pub ginv: Tn<Jet>,
    /// Condition number of the value matrix of g.
    pub cond: f64,
}

impl FundJets {
    pub fn new(m: &Metric, x: &[f64], y: &[f64], space: &Arc<JetSpace>) -> Result<FundJets> {
        FundJets::new_on_closure(m, x, y, space, 0.0)
    }

    /// Like `new` but admitting points within `band` of the light cone,
    /// where on-cone geodesics live.
    pub fn new_on_closure(
        m: &Metric,
        x: &[f64],
        y: &[f64],
        space: &Arc<JetSpace>,
        band: f64,
    ) -> Result<FundJets> {
        let n = m.n;
        assert_eq!(space.n(), n);
        let l_plain = m.l_value(x, y)?;
        if !m.domain.admits_closure(x, y, l_plain, band) {
            return Err(Error::Domain {
                what: format!("point x={x:?} y={y:?} outside the domain of {}", m.name),
            });
        }
        let xj: Vec<Jet> = (0..n)
            .map(|i| Jet::variable(space, Var::X(i), x[i]))
            .collect();
        let yj: Vec<Jet> = (0..n)
            .map(|i| Jet::variable(space, Var::Y(i), y[i]))
            .collect();
        let l = m.l_value(&xj, &yj)?;
        l.check_finite()?;
        let g = fundamental_from_l(&l, n)?;
        let (ginv, cond) = invert_jet_matrix(&g, n)?;
        Ok(FundJets {
            n,
            space: space.clone(),
            x: x.to_vec(),
            y: y.to_vec(),
            xj,
            yj,
            l,
            g,
            ginv,
            cond,
        })
    }

    /// F = sqrt|L|.
    pub fn f_root(&self) -> Jet {
        self.l.abs().sqrt()
    }

    /// Lowered fiber coordinate y_i = g_{ia} y^a = L_{.i}/2.
    pub fn y_low(&self) -> Result<Vec<Jet>> {
        (0..self.n)
            .map(|i| Ok(self.l.dy(i)?.scale(0.5)))
            .collect()
    }

    /// Metric spray G^i = g^{ia}(2 d_c g_{ab} - d_a g_{bc}) y^b y^c / 4.
    pub fn spray(&self) -> Result<Vec<Jet>> {
        let n = self.n;
        let mut dg = Vec::with_capacity(n);
        for c in 0..n {
            let m = map_tensor(&self.g, |e| e.dx(c))?;
            dg.push(m);
        }
        let mut w = Vec::with_capacity(n);
        for a in 0..n {
            let mut acc = Jet::constant(&self.space, 0.0);
            for b in 0..n {
                for c in 0..n {
                    let term = dg[c].at(&[a, b]).scale(2.0).sub(dg[a].at(&[b, c]));
                    acc = acc.add(
                        &term
                            .mul_var(Var::Y(b), self.y[b])
                            .mul_var(Var::Y(c), self.y[c]),
                    );
                }
            }
            w.push(acc);
        }
        let mut spray = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Jet::constant(&self.space, 0.0);
            for a in 0..n {
                acc = acc.add(&self.ginv.at(&[i, a]).mul(&w[a]));
            }
            spray.push(acc.scale(0.25));
        }
        Ok(spray)
    }

    /// Berwald nonlinear connection of the metric: N_i^k = d. G^k / d. y^i.
    pub fn metric_nonlinear(&self) -> Result<Tn<Jet>> {
        let spray = self.spray()?;
        let n = self.n;
        let mut vals = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                vals.push(spray[k].dy(i)?);
            }
        }
        Ok(Tn::from_vec(&[n, n], vals))
    }

    /// Cartan tensor C_{ijk} = L_{.i.j.k} / 4 and its metric mean C_i,
    /// plus the raised cross-check C^j = -g^{ja}_{.a} / 2.
    pub fn cartan(&self) -> Result<CartanJets> {
        let n = self.n;
        let mut d1 = Vec::with_capacity(n);
        for i in 0..n {
            d1.push(self.l.dy(i)?);
        }
        let mut vals = Vec::with_capacity(n * n * n);
        for i in 0..n {
            let di = &d1[i];
            for j in 0..n {
                let dij = di.dy(j)?;
                for k in 0..n {
                    vals.push(dij.dy(k)?.scale(0.25));
                }
            }
        }
        let c = Tn::from_vec(&[n, n, n], vals);
        let mut mean = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Jet::constant(&self.space, 0.0);
            for a in 0..n {
                for b in 0..n {
                    acc = acc.add(&self.ginv.at(&[a, b]).mul(c.at(&[a, b, i])));
                }
            }
            mean.push(acc);
        }
        let mut raised_check = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Jet::constant(&self.space, 0.0);
            for a in 0..n {
                acc = acc.add(&self.ginv.at(&[j, a]).dy(a)?);
            }
            raised_check.push(acc.scale(-0.5));
        }
        Ok(CartanJets {
            c,
            mean,
            raised_check,
        })
    }

    /// Landsberg tensor Lan_{ijk} = (cov^L_k g)_{ij} / 2 and mean Lan_i.
    pub fn landsberg(&self, nl: &Tn<Jet>) -> Result<LandsbergJets> {
        let n = self.n;
        let gamma = connection::berwald_coefficients(nl)?;
        let covg = connection::cov_deriv_02(&self.g, nl, &gamma)?;
        let lan = map_tensor(&covg, |e| Ok(e.scale(0.5)))?;
        let mut mean = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Jet::constant(&self.space, 0.0);
            for a in 0..n {
                for b in 0..n {
                    acc = acc.add(&self.ginv.at(&[a, b]).mul(lan.at(&[a, b, i])));
                }
            }
            mean.push(acc);
        }
        Ok(LandsbergJets { lan, mean })
    }

    /// Metric Ricci scalar: curvature of the metric connection.
    pub fn metric_ricci(&self) -> Result<Jet> {
        let nl = self.metric_nonlinear()?;
        let (_r, ric) = connection::curvature_and_ricci(&nl, &self.y)?;
        Ok(ric)
    }
}

pub struct CartanJets {
    pub c: Tn<Jet>,
    pub mean: Vec<Jet>,
    /// Independent route to the raised mean: C^j = -g^{ja}_{.a}/2.
    pub raised_check: Vec<Jet>,
}

pub struct LandsbergJets {
    pub lan: Tn<Jet>,
    pub mean: Vec<Jet>,
}

/// g_{ij} = L_{.i.j} / 2, built once and mirrored for exact symmetry.
fn fundamental_from_l(l: &Jet, n: usize) -> Result<Tn<Jet>> {
    let mut d1 = Vec::with_capacity(n);
    for i in 0..n {
        d1.push(l.dy(i)?);
    }
    let mut entries: Vec<Option<Jet>> = vec![None; n * n];
    for i in 0..n {
        for j in i..n {
            let e = d1[i].dy(j)?.scale(0.5);
            entries[i * n + j] = Some(e.clone());
            entries[j * n + i] = Some(e);
        }
    }
    Ok(Tn::from_vec(
        &[n, n],
        entries.into_iter().map(|e| e.unwrap()).collect(),
    ))
}

/// Invert a symmetric jet matrix by Gauss-Jordan elimination with value
/// pivoting; the condition number of the value part gates degeneracy.
pub fn invert_jet_matrix(g: &Tn<Jet>, n: usize) -> Result<(Tn<Jet>, f64)> {
    let vals = DMatrix::from_fn(n, n, |i, j| g.at(&[i, j]).val());
    let svd = vals.svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !cond.is_finite() || cond > tol::DEGENERACY_COND {
        return Err(Error::Degenerate {
            cond,
            limit: tol::DEGENERACY_COND,
        });
    }
    let space = g.at(&[0, 0]).space().clone();
    let mut a: Vec<Vec<Jet>> = (0..n)
        .map(|i| (0..n).map(|j| g.at(&[i, j]).clone()).collect())
        .collect();
    let mut inv: Vec<Vec<Jet>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Jet::constant(&space, if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r][col]
                    .val()
                    .abs()
                    .partial_cmp(&a[s][col].val().abs())
                    .unwrap()
            })
            .unwrap();
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip_jet();
        for j in 0..n {
            a[col][j] = a[col][j].mul(&p);
            inv[col][j] = inv[col][j].mul(&p);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
            }
        }
    }
    let flat: Vec<Jet> = inv.into_iter().flatten().collect();
    Ok((Tn::from_vec(&[n, n], flat), cond))
}

/// Apply a fallible map over every tensor entry.
pub fn map_tensor(t: &Tn<Jet>, f: impl Fn(&Jet) -> Result<Jet>) -> Result<Tn<Jet>> {
    let mut vals = Vec::with_capacity(t.data().len());
    for e in t.data() {
        vals.push(f(e)?);
    }
    Ok(Tn::from_vec(t.shape(), vals))
}

/// Max over components of the Euler residual |y^a d.T/d.y^a - alpha T|.
pub fn euler_residual(t: &[&Jet], alpha: f64, y: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for e in t {
        let mut acc = 0.0;
        for (a, &ya) in y.iter().enumerate() {
            acc += ya * e.dy(a)?.val();
        }
        worst = worst.max((acc - alpha * e.val()).abs());
    }
    Ok(worst)
}

/// Properness classification of a metric over seeded samples.
#[derive(Clone, Debug, PartialEq)]
pub enum Properness {
    Finsler,
    ProperlyLorentzFinsler,
    Improper { reason: String },
}

#[derive(Clone, Debug)]
pub struct PropernessReport {
    pub class: Properness,
    /// (positive, negative) eigenvalue counts of g on samples.
    pub signature: (usize, usize),
    pub samples: usize,
    pub worst_cond: f64,
    /// Whether boundary rays were probed (light-cone domains only).
    pub boundary_probed: bool,
    /// Sampled two-plane sections of a fiber stayed inside the cone
    /// (partial connectedness evidence, not a proof).
    pub fiber_sections_connected: bool,
}

pub fn properness_probe(m: &Metric, seed: u64, samples: usize) -> Result<PropernessReport> {
    let space = space_for(m, 0, 2);
    let pts = sampling::sample_points(m, seed, samples)?;
    let mut worst_cond: f64 = 0.0;
    let mut signature: Option<(usize, usize)> = None;
    let mut l_sign: Option<f64> = None;
    let mut failure: Option<String> = None;

    let mut inspect = |p: &SamplePoint| -> Result<()> {
        let fund = match FundJets::new(m, &p.x, &p.y, &space) {
            Ok(f) => f,
            Err(Error::Degenerate { cond, .. }) => {
                failure.get_or_insert(format!(
                    "fundamental tensor degenerate (cond {cond:.2e}) at x={:?} y={:?}",
                    p.x, p.y
                ));
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        worst_cond = worst_cond.max(fund.cond);
        let vals = DMatrix::from_fn(m.n, m.n, |i, j| fund.g.at(&[i, j]).val());
        let eig = vals.symmetric_eigen();
        let pos = eig.eigenvalues.iter().filter(|&&e| e > 0.0).count();
        let neg = m.n - pos;
        match signature {
            None => signature = Some((pos, neg)),
            Some(s) if s != (pos, neg) => {
                failure.get_or_insert(format!(
                    "signature changed from {s:?} to {:?} at x={:?} y={:?}",
                    (pos, neg),
                    p.x,
                    p.y
                ));
            }
            _ => {}
        }
        match l_sign {
            None => l_sign = Some(p.l.signum()),
            Some(s) if s != p.l.signum() => {
                failure.get_or_insert(format!("L changes sign on the domain at y={:?}", p.y));
            }
            _ => {}
        }
        Ok(())
    };

    for p in &pts {
        inspect(p)?;
    }

    // Deterministic sweep over admitted fiber axes: random samples never
    // land on the rays where root metrics lose rank.
    let center = m.domain.chart.center();
    for i in 0..m.n {
        for sign in [1.0, -1.0] {
            let mut y = vec![0.0; m.n];
            y[i] = sign;
            if let Ok(l) = m.l_value(&center, &y) {
                if m.domain.admits(&center, &y, l) {
                    inspect(&SamplePoint {
                        x: center.clone(),
                        y,
                        l,
                    })?;
                }
            }
        }
    }

    // Near-boundary behavior for light-cone domains: approach L -> 0
    // geometrically and require nondegeneracy all the way in.
    let boundary_probed = m.domain.has_light_boundary();
    if boundary_probed && failure.is_none() {
        let x = m.domain.chart.center();
        let mut vhat = vec![0.0; m.n - 1];
        vhat[0] = 0.8;
        if m.n > 2 {
            vhat[1] = 0.5;
        }
        let ray = sampling::boundary_ray(m, &x, &vhat, 20, 0.5)?;
        for p in &ray {
            if let Err(Error::Degenerate { cond, .. }) = FundJets::new(m, &p.x, &p.y, &space) {
                failure.get_or_insert(format!(
                    "degenerate near the light cone (cond {cond:.2e}, L = {:.3e})",
                    p.l
                ));
            }
        }
    }

    // Partial fiber-connectedness probe: walk straight segments between
    // sampled fiber directions and check membership along them.
    let mut sections_ok = true;
    'outer: for pair in pts.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        for k in 1..8 {
            let t = k as f64 / 8.0;
            let y: Vec<f64> = a
                .y
                .iter()
                .zip(&b.y)
                .map(|(&u, &v)| (1.0 - t) * u + t * v)
                .collect();
            if y.iter().all(|&c| c == 0.0) {
                continue;
            }
            let l = m.l_value(&a.x, &y)?;
            if !m.domain.admits(&a.x, &y, l) {
                sections_ok = false;
                break 'outer;
            }
        }
    }

    let signature = signature.unwrap_or((0, 0));
    let class = if let Some(reason) = failure {
        Properness::Improper { reason }
    } else if signature == (m.n, 0) && l_sign == Some(1.0) {
        Properness::Finsler
    } else if signature == (1, m.n - 1) && l_sign == Some(1.0) && boundary_probed {
        Properness::ProperlyLorentzFinsler
    } else {
        Properness::Improper {
            reason: format!("signature {signature:?} fits no supported class"),
        }
    };
    Ok(PropernessReport {
        class,
        signature,
        samples: pts.len(),
        worst_cond,
        boundary_probed,
        fiber_sections_connected: sections_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{standard_catalog, LinearGamma, Metric};
    use crate::domain::FiberCone;
    use crate::expr::Expr;
    use crate::oracle::randers;

    fn fund(m: &Metric, h: u8, v: u8) -> FundJets {
        let (x, y) = m.base_point();
        let space = space_for(m, h, v);
        FundJets::new(m, &x, &y, &space).unwrap()
    }

    #[test]
    fn euclidean_and_minkowski_fundamental_tensors_are_exact() {
        let f = fund(&Metric::euclidean(3), 0, 2);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(f.g.at(&[i, j]).val(), want);
                assert_eq!(f.ginv.at(&[i, j]).val(), want);
            }
        }
        let f = fund(&Metric::minkowski(4), 0, 2);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i != j {
                    0.0
                } else if i == 0 {
                    1.0
                } else {
                    -1.0
                };
                assert_eq!(f.g.at(&[i, j]).val(), want);
            }
        }
    }

    #[test]
    fn inverse_is_elementwise_inverse_within_pipeline_tolerance() {
        for m in standard_catalog() {
            let f = fund(&m, 1, 3);
            for i in 0..m.n {
                for k in 0..m.n {
                    let mut acc = 0.0;
                    for a in 0..m.n {
                        acc += f.ginv.at(&[i, a]).val() * f.g.at(&[a, k]).val();
                    }
                    let want = if i == k { 1.0 } else { 0.0 };
                    assert!(
                        (acc - want).abs() < tol::PIPELINE_IDENTITY,
                        "{}: ginv g [{i}{k}] = {acc}",
                        m.name
                    );
                }
            }
        }
    }

    #[test]
    fn l_equals_g_contracted_twice() {
        for m in standard_catalog() {
            let f = fund(&m, 0, 2);
            let mut acc = 0.0;
            for a in 0..m.n {
                for b in 0..m.n {
                    acc += f.g.at(&[a, b]).val() * f.y[a] * f.y[b];
                }
            }
            assert!(
                (acc - f.l.val()).abs() < 1e-10,
                "{}: g(y,y) = {acc}, L = {}",
                m.name,
                f.l.val()
            );
        }
    }

    #[test]
    fn randers_fundamental_matches_closed_form() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let (x, y) = m.base_point();
        let f = fund(&m, 0, 2);
        let s = x[0].sin();
        let b: Vec<f64> = [0.25, 0.05, 0.0]
            .iter()
            .zip([0.15, 0.0, 0.1])
            .map(|(&b0, b1)| b0 + b1 * s)
            .collect();
        let a: Vec<f64> = (0..9)
            .map(|k| if k % 4 == 0 { 1.0 } else { 0.0 })
            .collect();
        let closed = randers::fundamental_tensor(&a, &b, &y);
        for i in 0..3 {
            for j in 0..3 {
                let got = f.g.at(&[i, j]).val();
                assert!(
                    (got - closed[i * 3 + j]).abs() < 1e-12,
                    "[{i}{j}]: jet {got} vs closed {}",
                    closed[i * 3 + j]
                );
            }
        }
    }

    #[test]
    fn metric_connection_of_linear_charts_matches_gamma_tables() {
        let cases = [
            (Metric::flat_polar2(), LinearGamma::FlatPolar2),
            (Metric::sphere2(), LinearGamma::Sphere2),
            (Metric::flat_spherical3(), LinearGamma::FlatSpherical3),
            (
                Metric::schwarzschild_like(1.0),
                LinearGamma::SchwarzschildLike { rs: 1.0 },
            ),
        ];
        for (m, lg) in cases {
            let (x, y) = m.base_point();
            let f = fund(&m, 1, 3);
            let nl = f.metric_nonlinear().unwrap();
            let table = lg.gamma(&x[..]);
            for i in 0..m.n {
                for k in 0..m.n {
                    let mut want = 0.0;
                    for a in 0..m.n {
                        want += table.at(&[i, a, k]) * y[a];
                    }
                    let got = nl.at(&[i, k]).val();
                    assert!(
                        (got - want).abs() < 1e-11,
                        "{}: N[{i}{k}] = {got}, Gamma y = {want}",
                        m.name
                    );
                }
            }
        }
    }

    #[test]
    fn cartan_vanishes_exactly_for_quadratic_metrics() {
        for m in standard_catalog().into_iter().filter(|m| m.quadratic) {
            let f = fund(&m, 0, 3);
            let c = f.cartan().unwrap();
            for e in c.c.data() {
                assert_eq!(e.val(), 0.0, "{}", m.name);
            }
        }
    }

    #[test]
    fn cartan_contraction_with_y_vanishes_and_mean_routes_agree() {
        for m in standard_catalog() {
            let f = fund(&m, 0, 4);
            let cj = f.cartan().unwrap();
            for i in 0..m.n {
                for j in 0..m.n {
                    let mut acc = 0.0;
                    for a in 0..m.n {
                        acc += cj.c.at(&[i, j, a]).val() * f.y[a];
                    }
                    assert!(acc.abs() < 1e-10, "{}: C_{{ {i}{j}a }} y^a = {acc}", m.name);
                }
            }
            // Raised mean vs trace route: C^j = g^{ja} C_a.
            for j in 0..m.n {
                let mut raised = 0.0;
                for a in 0..m.n {
                    raised += f.ginv.at(&[j, a]).val() * cj.mean[a].val();
                }
                let check = cj.raised_check[j].val();
                assert!(
                    (raised - check).abs() < 1e-9,
                    "{}: C^{j} routes {raised} vs {check}",
                    m.name
                );
            }
        }
    }

    #[test]
    fn quartic_cartan_is_nonzero_and_totally_symmetric() {
        let m = Metric::quartic_root(0.0);
        let x = vec![0.0; 3];
        let y = vec![1.0, 1.0, 1.0];
        let space = space_for(&m, 0, 4);
        let f = FundJets::new(&m, &x, &y, &space).unwrap();
        let cj = f.cartan().unwrap();
        let mut max = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = cj.c.at(&[i, j, k]).val();
                    max = max.max(v.abs());
                    for (p, q, r) in [(i, k, j), (j, i, k), (k, j, i)] {
                        let w = cj.c.at(&[p, q, r]).val();
                        assert!((v - w).abs() < 1e-12);
                    }
                }
            }
        }
        assert!(max > 1e-3, "Cartan max {max}");
    }

    #[test]
    fn landsberg_vanishes_for_quadratic_and_berwald_randers() {
        let mut cases: Vec<Metric> = standard_catalog()
            .into_iter()
            .filter(|m| m.quadratic)
            .collect();
        cases.push(Metric::randers(vec![0.25, 0.05, 0.0], vec![0.0; 3]));
        for m in cases {
            let f = fund(&m, 1, 5);
            let nl = f.metric_nonlinear().unwrap();
            let lj = f.landsberg(&nl).unwrap();
            let mut max = 0.0f64;
            for e in lj.lan.data() {
                max = max.max(e.val().abs());
            }
            assert!(max < 1e-9, "{}: |Lan| = {max}", m.name);
        }
    }

    #[test]
    fn landsberg_contraction_with_y_vanishes_on_generic_randers() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let f = fund(&m, 1, 5);
        let nl = f.metric_nonlinear().unwrap();
        let lj = f.landsberg(&nl).unwrap();
        // Generic case: the tensor itself is nonzero...
        let mut max = 0.0f64;
        for e in lj.lan.data() {
            max = max.max(e.val().abs());
        }
        assert!(max > 1e-6, "expected nonzero Landsberg, max {max}");
        // ...but its y-trace vanishes identically.
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for a in 0..3 {
                    acc += lj.lan.at(&[i, j, a]).val() * f.y[a];
                }
                assert!(acc.abs() < 1e-10, "Lan_{{ {i}{j}a }} y^a = {acc}");
            }
        }
        // Mean contracts to zero against y as well.
        let mut acc = 0.0;
        for a in 0..3 {
            acc += lj.mean[a].val() * f.y[a];
        }
        assert!(acc.abs() < 1e-10, "Lan_a y^a = {acc}");
    }

    #[test]
    fn degenerate_fundamental_tensor_is_detected() {
        // Fourth-root metric on the full punctured fiber: g degenerates
        // towards the coordinate axes.
        let expr = Expr::parse("sqrt(y1^4 + y2^4 + y3^4)").unwrap();
        let m = Metric::custom("axes-degenerate", 3, expr, FiberCone::AllNonzero).unwrap();
        let space = space_for(&m, 0, 2);
        let x = vec![0.0; 3];
        let y = vec![1.0, 1e-6, 1e-6];
        match FundJets::new(&m, &x, &y, &space) {
            Err(Error::Degenerate { cond, .. }) => assert!(cond > tol::DEGENERACY_COND),
            Err(e) => panic!("wrong error: {e}"),
            Ok(_) => panic!("expected degeneracy"),
        }
    }

    #[test]
    fn properness_classification_matches_catalog_structure() {
        let fin = properness_probe(&Metric::euclidean(3), 11, 20).unwrap();
        assert_eq!(fin.class, Properness::Finsler);
        assert!(fin.fiber_sections_connected);

        let lor = properness_probe(&Metric::minkowski(4), 11, 20).unwrap();
        assert_eq!(lor.class, Properness::ProperlyLorentzFinsler);
        assert!(lor.boundary_probed);

        let expr = Expr::parse("sqrt(y1^4 + y2^4 + y3^4)").unwrap();
        let bad = Metric::custom("axes-degenerate", 3, expr, FiberCone::AllNonzero).unwrap();
        let rep = properness_probe(&bad, 11, 40).unwrap();
        assert!(matches!(rep.class, Properness::Improper { .. }));
    }

    #[test]
    fn euler_residuals_on_l_and_derived_objects() {
        for m in standard_catalog() {
            let f = fund(&m, 1, 4);
            let r_l = euler_residual(&[&f.l], 2.0, &f.y).unwrap();
            assert!(r_l < 1e-11, "{}: L euler {r_l}", m.name);
            let g_refs: Vec<&Jet> = f.g.data().iter().collect();
            let r_g = euler_residual(&g_refs, 0.0, &f.y).unwrap();
            assert!(r_g < 1e-10, "{}: g euler {r_g}", m.name);
        }
    }

    #[test]
    fn broken_homogeneity_is_visible_to_the_euler_probe() {
        // L + 1 has Euler residual exactly 2 (the constant's defect).
        let m = Metric::euclidean(3);
        let (x, y) = m.base_point();
        let space = space_for(&m, 0, 2);
        let f = FundJets::new(&m, &x, &y, &space).unwrap();
        let shifted = f.l.add(&Jet::constant(&space, 1.0));
        let r = euler_residual(&[&shifted], 2.0, &y).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }
}
