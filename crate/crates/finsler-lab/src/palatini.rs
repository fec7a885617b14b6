//! Residuals of the joint stationarity system, the potential/scale
//! decomposition of a connection, and metric-compatibility bookkeeping.
//!
//! Everything here evaluates at a single chart point through the jet
//! pipeline. Residuals come back as plain numbers in sup norm; the
//! decomposition keeps jets so it can be reassembled and re-differentiated.

use crate::catalog::{Metric, ZKind};
use crate::connection::{
    self, berwald_coefficients, cov_deriv_01, cov_deriv_02, cov_scalar, curvature_and_ricci,
    torsion, ConnectionJets,
};
use crate::error::{Error, Result};
use crate::jet::{Jet, Var};
use crate::metric::FundJets;
use crate::num::Num;
use crate::sampling;
use crate::tensor::Tn;
use crate::tol;

/// Guarded 1/L.
fn inv_l(fund: &FundJets) -> Result<Jet> {
    if fund.l.val().abs() < tol::L_FLOOR {
        return Err(Error::NearCone { l: fund.l.val() });
    }
    Ok(fund.l.recip_jet())
}

/// Trace part B_i of a deformation J: the 0-homogeneous covector that
/// closes the first stationarity row.
fn trace_covector(
    fund: &FundJets,
    j_t: &Tn<Jet>,
    cartan_mean: &[Jet],
    y_low: &[Jet],
    linv: &Jet,
) -> Result<Vec<Jet>> {
    let n = fund.n;
    let half_np2 = (n as f64 + 2.0) / 2.0;
    let mut out = Vec::with_capacity(n);
    let trace = (0..n).fold(Jet::constant(&fund.space, 0.0), |acc, a| {
        acc.add(j_t.at(&[a, a]))
    });
    for i in 0..n {
        let mut lead = Jet::constant(&fund.space, 0.0);
        let mut cart = Jet::constant(&fund.space, 0.0);
        let mut div = Jet::constant(&fund.space, 0.0);
        for a in 0..n {
            lead = lead.add(&y_low[a].mul(j_t.at(&[i, a])));
            cart = cart.add(&cartan_mean[a].mul(j_t.at(&[i, a])));
            div = div.add(&j_t.at(&[i, a]).dy(a)?);
        }
        let e = lead
            .mul(linv)
            .scale(half_np2)
            .sub(&cart)
            .sub(&div.add(&trace.dy(i)?).scale(0.5));
        out.push(e);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AffineResidual {
    /// Sup norm of the first stationarity row.
    pub max: f64,
    /// Component matrix [i, j].
    pub matrix: Tn<f64>,
    /// Same row assembled from the variational form (covariant derivative
    /// of g plus torsion traces) instead of the trace covector.
    pub dual_max: f64,
    /// Sup gap between the two routes.
    pub routes_gap: f64,
}

/// First stationarity row for an arbitrary connection N against the
/// metric background: zero exactly on certified solution families.
pub fn affine_residual(fund: &FundJets, conn: &ConnectionJets) -> Result<AffineResidual> {
    let n = fund.n;
    let base = fund.metric_nonlinear()?;
    let j_t = connection::deformation(&conn.nl, &base);
    let lan = fund.landsberg(&base)?;
    let cartan = fund.cartan()?;
    let y_low = fund.y_low()?;
    let linv = inv_l(fund)?;
    let b = trace_covector(fund, &j_t, &cartan.mean, &y_low, &linv)?;

    // Row one: (2 Lan_a + 2 B_a)(d_i^a y^j - y^a d_i^j) - (J^j_{i.a} - J^j_{a.i}) y^a.
    let mut lead = vec![0.0; n];
    let mut lead_trace = 0.0;
    for a in 0..n {
        lead[a] = 2.0 * (lan.mean[a].val() + b[a].val());
        lead_trace += lead[a] * fund.y[a];
    }
    let mut vals = Vec::with_capacity(n * n);
    let mut max: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut e = lead[i] * fund.y[j];
            if i == j {
                e -= lead_trace;
            }
            for a in 0..n {
                e -= (j_t.at(&[i, j]).dy(a)?.val() - j_t.at(&[a, j]).dy(i)?.val()) * fund.y[a];
            }
            max = max.max(e.abs());
            vals.push(e);
        }
    }
    let matrix = Tn::from_vec(&[n, n], vals);

    // Variational route: the same row from cov g and torsion traces.
    let gamma = berwald_coefficients(&conn.nl)?;
    let covg = cov_deriv_02(&fund.g, &conn.nl, &gamma)?;
    let tor = torsion(&gamma);
    let half_np2 = (n as f64 + 2.0) / 2.0;
    let linv_v = linv.val();
    let mut scal = vec![0.0; n];
    for c in 0..n {
        let mut s = 0.0;
        for a in 0..n {
            for bb in 0..n {
                let w = fund.ginv.at(&[a, bb]).val()
                    - half_np2 * fund.y[a] * fund.y[bb] * linv_v;
                s += w * covg.at(&[a, bb, c]).val();
            }
            s += tor.at(&[c, a, a]).val();
        }
        scal[c] = s;
    }
    let mut scal_trace = 0.0;
    for c in 0..n {
        scal_trace += scal[c] * fund.y[c];
    }
    let mut dual_max: f64 = 0.0;
    let mut routes_gap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut e = scal[i] * fund.y[j];
            if i == j {
                e -= scal_trace;
            }
            for a in 0..n {
                e -= tor.at(&[i, a, j]).val() * fund.y[a];
            }
            dual_max = dual_max.max(e.abs());
            routes_gap = routes_gap.max((e - matrix.at(&[i, j])).abs());
        }
    }
    Ok(AffineResidual {
        max,
        matrix,
        dual_max,
        routes_gap,
    })
}

#[derive(Clone, Debug)]
pub struct MetricResidual {
    pub value: f64,
    pub ric: f64,
}

/// Trace row: (n+2) Ric - L g^{ab} Ric_{.a.b} for the given connection.
pub fn metric_residual(fund: &FundJets, conn: &ConnectionJets) -> Result<MetricResidual> {
    let n = fund.n;
    let (_r, ric) = curvature_and_ricci(&conn.nl, &fund.y)?;
    let mut lap = 0.0;
    for a in 0..n {
        let da = ric.dy(a)?;
        for bb in 0..n {
            lap += fund.ginv.at(&[a, bb]).val() * da.dy(bb)?.val();
        }
    }
    let value = (n as f64 + 2.0) * ric.val() - fund.l.val() * lap;
    Ok(MetricResidual {
        value,
        ric: ric.val(),
    })
}

/// Decomposition of a connection into the metric part, a vertical
/// potential Z, and a scale covector A, recovered along two routes.
///
/// The direct route inverts the stationarity system, so it reproduces
/// the ingredients exactly when the connection is stationary (in
/// particular for pure A-translations over vanishing mean Landsberg).
/// The torsion route only uses that the deformation has potential-plus-
/// scale form, so it inverts every assembled connection.
pub struct Decomposition {
    pub z: Vec<Jet>,
    pub a: Vec<Jet>,
    pub z_torsion: Vec<Jet>,
    pub a_torsion: Vec<Jet>,
    /// Sup gap |N_metric + d.Z + A (x) y - N| for the direct route.
    pub roundtrip_gap: f64,
    /// Same for the torsion route.
    pub torsion_roundtrip_gap: f64,
    /// Sup gap between the two A recoveries.
    pub route_gap: f64,
}

pub fn decompose(fund: &FundJets, conn: &ConnectionJets) -> Result<Decomposition> {
    let n = fund.n;
    assert!(n >= 2);
    let base = fund.metric_nonlinear()?;
    let j_t = connection::deformation(&conn.nl, &base);
    let lan = fund.landsberg(&base)?;
    let cartan = fund.cartan()?;
    let y_low = fund.y_low()?;
    let linv = inv_l(fund)?;
    let b = trace_covector(fund, &j_t, &cartan.mean, &y_low, &linv)?;

    // Direct route: Z^j = J^j_a y^a / 2 - (B_a y^a) y^j,
    // A_i = Lan_i + B_i + (B_a y^a)_{.i}.
    let mut by = Jet::constant(&fund.space, 0.0);
    for a in 0..n {
        by = by.add(&b[a].mul_var(Var::Y(a), fund.y[a]));
    }
    let mut jy = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = Jet::constant(&fund.space, 0.0);
        for a in 0..n {
            e = e.add(&j_t.at(&[a, j]).mul_var(Var::Y(a), fund.y[a]));
        }
        jy.push(e);
    }
    let mut z = Vec::with_capacity(n);
    for j in 0..n {
        let e = jy[j]
            .scale(0.5)
            .sub(&by.mul_var(Var::Y(j), fund.y[j]));
        z.push(e);
    }
    let mut a_cov = Vec::with_capacity(n);
    for i in 0..n {
        a_cov.push(lan.mean[i].add(&b[i]).add(&by.dy(i)?));
    }

    // Torsion route: contract the torsion identity with y_k to isolate A,
    // then peel Z off the contracted deformation.
    let gamma = berwald_coefficients(&conn.nl)?;
    let tor = torsion(&gamma);
    let mut tau = Jet::constant(&fund.space, 0.0);
    for a in 0..n {
        for bb in 0..n {
            tau = tau.add(&tor.at(&[a, bb, a]).mul_var(Var::Y(bb), fund.y[bb]));
        }
    }
    let scale = 1.0 / (2.0 * (n as f64 - 1.0));
    let mut a_torsion = Vec::with_capacity(n);
    for i in 0..n {
        let mut contracted = Jet::constant(&fund.space, 0.0);
        for k in 0..n {
            let mut tk = Jet::constant(&fund.space, 0.0);
            for bb in 0..n {
                tk = tk.add(&tor.at(&[i, bb, k]).mul_var(Var::Y(bb), fund.y[bb]));
            }
            contracted = contracted.add(&tk.mul(&y_low[k]));
        }
        let e = contracted
            .scale(n as f64 - 1.0)
            .sub(&fund.l.mul(&tau.dy(i)?))
            .sub(&tau.mul(&y_low[i]));
        a_torsion.push(e.mul(&linv).scale(scale));
    }
    let mut ay_tor = Jet::constant(&fund.space, 0.0);
    for a in 0..n {
        ay_tor = ay_tor.add(&a_torsion[a].mul_var(Var::Y(a), fund.y[a]));
    }
    let mut z_torsion = Vec::with_capacity(n);
    for k in 0..n {
        let e = jy[k]
            .scale(0.5)
            .sub(&ay_tor.mul_var(Var::Y(k), fund.y[k]).scale(0.5));
        z_torsion.push(e);
    }

    // Reassemble each route and measure against the input.
    let reassembly_gap = |zr: &[Jet], ar: &[Jet]| -> Result<f64> {
        let mut gap: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let e = base.at(&[i, k]).val() + zr[k].dy(i)?.val() + ar[i].val() * fund.y[k];
                gap = gap.max((e - conn.nl.at(&[i, k]).val()).abs());
            }
        }
        Ok(gap)
    };
    let roundtrip_gap = reassembly_gap(&z, &a_cov)?;
    let torsion_roundtrip_gap = reassembly_gap(&z_torsion, &a_torsion)?;
    let mut route_gap: f64 = 0.0;
    for i in 0..n {
        route_gap = route_gap.max((a_cov[i].val() - a_torsion[i].val()).abs());
    }
    Ok(Decomposition {
        z,
        a: a_cov,
        z_torsion,
        a_torsion,
        roundtrip_gap,
        torsion_roundtrip_gap,
        route_gap,
    })
}

/// Scale function sigma = y_a Z^a / L and the Cartan correction covector
/// K_i = -2 (2 C_{a.i} Z^a + C_a Z^a_{.i}) / (n+2).
pub struct SigmaKappa {
    pub sigma: Jet,
    pub kappa: Vec<Jet>,
}

pub fn sigma_kappa(fund: &FundJets, z: &[Jet]) -> Result<SigmaKappa> {
    let n = fund.n;
    let y_low = fund.y_low()?;
    let linv = inv_l(fund)?;
    let cartan = fund.cartan()?;
    let mut yz = Jet::constant(&fund.space, 0.0);
    for a in 0..n {
        yz = yz.add(&y_low[a].mul(&z[a]));
    }
    let sigma = yz.mul(&linv);
    let mut kappa = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = Jet::constant(&fund.space, 0.0);
        for a in 0..n {
            e = e.add(&cartan.mean[a].dy(i)?.mul(&z[a]).scale(2.0));
            e = e.add(&cartan.mean[a].mul(&z[a].dy(i)?));
        }
        kappa.push(e.scale(-2.0 / (n as f64 + 2.0)));
    }
    Ok(SigmaKappa { sigma, kappa })
}

/// Residuals of the torsion-free reduction: the potential row, its trace,
/// and the eliminated form, plus the always-available dual trace route.
#[derive(Clone, Debug)]
pub struct TorsionFreeResiduals {
    pub res4: Vec<f64>,
    pub res4_max: f64,
    pub res5: f64,
    /// Same trace via g^{ab} Z_{a.b}; disagreement beyond the warn level
    /// indicates a conditioning problem, not a model failure.
    pub res5_dual: f64,
    pub res6: f64,
    pub sigma: f64,
}

pub fn torsionfree_residuals(fund: &FundJets, z: &[Jet]) -> Result<TorsionFreeResiduals> {
    let n = fund.n;
    let nf = n as f64;
    let base = fund.metric_nonlinear()?;
    let lan = fund.landsberg(&base)?;
    let cartan = fund.cartan()?;
    let sk = sigma_kappa(fund, z)?;
    let lv = fund.l.val();

    // Potential row: Z^i - 2 sigma y^i + L g^{ia}(sigma_{.a} + K_a)
    //                - 2 L Lan^i / (n+2).
    let mut res4 = Vec::with_capacity(n);
    let mut res4_max: f64 = 0.0;
    for i in 0..n {
        let mut e = z[i].val() - 2.0 * sk.sigma.val() * fund.y[i];
        for a in 0..n {
            e += lv
                * fund.ginv.at(&[i, a]).val()
                * (sk.sigma.dy(a)?.val() + sk.kappa[a].val()
                    - 2.0 / (nf + 2.0) * lan.mean[a].val());
        }
        res4_max = res4_max.max(e.abs());
        res4.push(e);
    }

    // Trace row: (n+2) sigma - 2 C_a Z^a - Z^a_{.a}.
    let mut cz = 0.0;
    let mut div = 0.0;
    for a in 0..n {
        cz += cartan.mean[a].val() * z[a].val();
        div += z[a].dy(a)?.val();
    }
    let res5 = (nf + 2.0) * sk.sigma.val() - 2.0 * cz - div;

    // Dual trace route: (n+2) sigma - g^{ab} Z_{a.b} with Z_a = g_{ab} Z^b.
    let mut z_low = Vec::with_capacity(n);
    for a in 0..n {
        let mut e = Jet::constant(&fund.space, 0.0);
        for c in 0..n {
            e = e.add(&fund.g.at(&[a, c]).mul(&z[c]));
        }
        z_low.push(e);
    }
    let mut lap = 0.0;
    for a in 0..n {
        for bb in 0..n {
            lap += fund.ginv.at(&[a, bb]).val() * z_low[a].dy(bb)?.val();
        }
    }
    let res5_dual = (nf + 2.0) * sk.sigma.val() - lap;

    // Eliminated row: (n-2) sigma - L g^{ab}(sigma_{.a.b} + K_{a.b}
    //                 - 2 Lan_{a.b} / (n+2)).
    let mut lap6 = 0.0;
    for a in 0..n {
        let sa = sk.sigma.dy(a)?;
        for bb in 0..n {
            lap6 += fund.ginv.at(&[a, bb]).val()
                * (sa.dy(bb)?.val() + sk.kappa[a].dy(bb)?.val()
                    - 2.0 / (nf + 2.0) * lan.mean[a].dy(bb)?.val());
        }
    }
    let res6 = (nf - 2.0) * sk.sigma.val() - lv * lap6;

    Ok(TorsionFreeResiduals {
        res4,
        res4_max,
        res5,
        res5_dual,
        res6,
        sigma: sk.sigma.val(),
    })
}

/// Point-wise label for a connection under the stationarity system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionClass {
    /// Solves the first stationarity row at this point.
    AffineStationary,
    /// Not stationary, but exactly of potential-plus-scale form.
    SolutionForm,
    Generic,
}

pub fn classify(affine_max: f64, roundtrip_gap: f64, tol: f64) -> ConnectionClass {
    if affine_max <= tol {
        ConnectionClass::AffineStationary
    } else if roundtrip_gap <= tol {
        ConnectionClass::SolutionForm
    } else {
        ConnectionClass::Generic
    }
}

/// Compatibility bookkeeping: how far the connection is from preserving
/// the metric objects, with each closed-form route checked against the
/// direct covariant derivative.
#[derive(Clone, Debug)]
pub struct CompatibilitySuite {
    /// Sup |cov_k g_{ij}|.
    pub covg_max: f64,
    /// Direct cov g vs the deformation route (valid for any N).
    pub covg_deformation_gap: f64,
    /// Direct cov g vs the potential/scale route (assembled N only).
    pub covg_solution_gap: Option<f64>,
    /// Direct cov y_k vs its closed form (assembled N only).
    pub covy_gap: Option<f64>,
    /// Direct cov L vs its closed form (assembled N only).
    pub covl_gap: Option<f64>,
    /// Fiber derivative of cov L vs twice cov y (any N).
    pub covl_fiber_gap: f64,
    /// Sup |cov_k L|.
    pub covl_max: f64,
    /// A_a y^a + 2 y_a Z^a / L (assembled N only): zero means no L-drift
    /// along the underlying geodesics.
    pub drift_identity: Option<f64>,
    /// Sup over k of g^{ab} cov_k g_{ab}.
    pub trace_covg_max: f64,
    /// Direct trace vs 2 Lan_k - 2 C_a Z^a_{.k} - 2 Z^a_{.a.k} - 2n A_k
    /// (assembled N only; the trace vanishes when Z is stationary and A
    /// takes its trace-neutral value, but the identity holds always).
    pub trace_solution_gap: Option<f64>,
}

pub fn compatibility_suite(fund: &FundJets, conn: &ConnectionJets) -> Result<CompatibilitySuite> {
    let n = fund.n;
    let base = fund.metric_nonlinear()?;
    let j_t = connection::deformation(&conn.nl, &base);
    let lan = fund.landsberg(&base)?;
    let cartan = fund.cartan()?;
    let y_low = fund.y_low()?;
    let gamma = berwald_coefficients(&conn.nl)?;
    let covg = cov_deriv_02(&fund.g, &conn.nl, &gamma)?;

    let mut covg_max: f64 = 0.0;
    for e in covg.data() {
        covg_max = covg_max.max(e.val().abs());
    }

    // Deformation route:
    // cov_k g_{ij} = 2 Lan_{ijk} - 2 C_{ija} J^a_k - J^a_{k.i} g_{aj} - J^a_{k.j} g_{ia}.
    let mut covg_deformation_gap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut want = 2.0 * lan.lan.at(&[i, j, k]).val();
                for a in 0..n {
                    want -= 2.0 * cartan.c.at(&[i, j, a]).val() * j_t.at(&[k, a]).val();
                    want -= j_t.at(&[k, a]).dy(i)?.val() * fund.g.at(&[a, j]).val();
                    want -= j_t.at(&[k, a]).dy(j)?.val() * fund.g.at(&[i, a]).val();
                }
                let got = covg.at(&[i, j, k]).val();
                covg_deformation_gap = covg_deformation_gap.max((got - want).abs());
            }
        }
    }

    // Direct cov of the lowered canonical field and of L.
    let cov_ylow = cov_deriv_01(&y_low, &conn.nl, &gamma)?;
    let covl = cov_scalar(&fund.l, &conn.nl)?;
    let mut covl_max: f64 = 0.0;
    for e in &covl {
        covl_max = covl_max.max(e.val().abs());
    }
    let mut covl_fiber_gap: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let fiber = covl[i].dy(k)?.val();
            let twice = 2.0 * cov_ylow.at(&[k, i]).val();
            covl_fiber_gap = covl_fiber_gap.max((fiber - twice).abs());
        }
    }

    let mut covg_solution_gap = None;
    let mut covy_gap = None;
    let mut covl_gap = None;
    let mut drift_identity = None;
    if let (Some(zj), Some(aj)) = (&conn.z, &conn.a) {
        let lv = fund.l.val();
        // Potential/scale route for cov g.
        let mut gap: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut want = 2.0 * lan.lan.at(&[i, j, k]).val();
                    for a in 0..n {
                        want -= 2.0 * cartan.c.at(&[i, j, a]).val() * zj[a].dy(k)?.val();
                        want -= zj[a].dy(k)?.dy(i)?.val() * fund.g.at(&[a, j]).val();
                        want -= zj[a].dy(k)?.dy(j)?.val() * fund.g.at(&[i, a]).val();
                    }
                    want -= aj[k].dy(i)?.val() * y_low[j].val();
                    want -= aj[k].dy(j)?.val() * y_low[i].val();
                    want -= 2.0 * fund.g.at(&[i, j]).val() * aj[k].val();
                    let got = covg.at(&[i, j, k]).val();
                    gap = gap.max((got - want).abs());
                }
            }
        }
        covg_solution_gap = Some(gap);

        // cov_i y_k = -(Z^a_{.i} g_{ak} + y_a Z^a_{.i.k}) - L A_{i.k} - 2 A_i y_k.
        let mut gap: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let mut want = 0.0;
                for a in 0..n {
                    want -= zj[a].dy(i)?.val() * fund.g.at(&[a, k]).val();
                    want -= y_low[a].val() * zj[a].dy(i)?.dy(k)?.val();
                }
                want -= lv * aj[i].dy(k)?.val();
                want -= 2.0 * aj[i].val() * y_low[k].val();
                let got = cov_ylow.at(&[k, i]).val();
                gap = gap.max((got - want).abs());
            }
        }
        covy_gap = Some(gap);

        // cov_i L = -2 y_a Z^a_{.i} - 2 L A_i.
        let mut gap: f64 = 0.0;
        for i in 0..n {
            let mut want = 0.0;
            for a in 0..n {
                want -= 2.0 * y_low[a].val() * zj[a].dy(i)?.val();
            }
            want -= 2.0 * lv * aj[i].val();
            gap = gap.max((covl[i].val() - want).abs());
        }
        covl_gap = Some(gap);

        let mut ay = 0.0;
        let mut yz = 0.0;
        for a in 0..n {
            ay += aj[a].val() * fund.y[a];
            yz += y_low[a].val() * zj[a].val();
        }
        drift_identity = Some(ay + 2.0 * yz / lv);
    }

    let mut trace_covg_max: f64 = 0.0;
    let mut traces = vec![0.0; n];
    for (k, tr_out) in traces.iter_mut().enumerate() {
        let mut tr = 0.0;
        for a in 0..n {
            for bb in 0..n {
                tr += fund.ginv.at(&[a, bb]).val() * covg.at(&[a, bb, k]).val();
            }
        }
        trace_covg_max = trace_covg_max.max(tr.abs());
        *tr_out = tr;
    }
    let mut trace_solution_gap = None;
    if let (Some(zj), Some(aj)) = (&conn.z, &conn.a) {
        let mut gap: f64 = 0.0;
        for k in 0..n {
            let mut want = 2.0 * lan.mean[k].val() - 2.0 * n as f64 * aj[k].val();
            for a in 0..n {
                want -= 2.0 * cartan.mean[a].val() * zj[a].dy(k)?.val();
                want -= 2.0 * zj[a].dy(a)?.dy(k)?.val();
            }
            gap = gap.max((traces[k] - want).abs());
        }
        trace_solution_gap = Some(gap);
    }

    Ok(CompatibilitySuite {
        covg_max,
        covg_deformation_gap,
        covg_solution_gap,
        covy_gap,
        covl_gap,
        covl_fiber_gap,
        covl_max,
        drift_identity,
        trace_covg_max,
        trace_solution_gap,
    })
}

/// Near-cone divisibility probe: follow a ray where L halves each step
/// and watch sup|Z| / |L|. Potentials arising from the stationarity
/// system stay bounded; generic vertical fields need not.
#[derive(Clone, Debug)]
pub struct DivisibilityProbe {
    pub ratios: Vec<f64>,
    pub bounded: bool,
}

pub fn divisibility_probe(m: &Metric, z: &ZKind, steps: usize) -> Result<DivisibilityProbe> {
    assert!(steps >= 9, "trend needs at least 9 ray points");
    let x = m.domain.chart.center();
    let mut vhat = vec![0.0; m.n - 1];
    vhat[0] = 0.7;
    if m.n > 2 {
        vhat[1] = 0.4;
    }
    let ray = sampling::boundary_ray(m, &x, &vhat, steps, 0.5)?;
    let mut ratios = Vec::with_capacity(ray.len());
    for p in &ray {
        let zv = z.eval(&p.x, &p.y, &p.l);
        let sup = zv.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        ratios.push(sup / p.l.abs());
    }
    // No growth trend over the last 8 points: the tail must not have
    // multiplied up while L fell by 2^8.
    let tail = &ratios[ratios.len() - 8..];
    let bounded = tail[7] <= 4.0 * tail[0] + 1e-12;
    Ok(DivisibilityProbe { ratios, bounded })
}
