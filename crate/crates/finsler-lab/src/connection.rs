//! Nonlinear connections: assembly from the metric one by vertical
//! deformation, the induced coefficients, torsion, curvature and Ricci
//! scalar, horizontal covariant derivatives, and the underlying spray.
//!
//! Layouts (lower slots first, upper last, derivative slot appended after
//! the other lowers): N[[i,k]] = N_i^k, Gamma[[i,j,k]] = Gamma^k_{ij} =
//! d.N_i^k/d.y^j, Tor[[i,j,k]] = Tor_{ij}^k, R[[i,j,k]] = R_{ij}^k,
//! (cov J)[[i,j,k]] = cov_j J_i^k, (cov g)[[i,j,k]] = cov_k g_{ij}.

use crate::catalog::{AKind, LinearGamma, ZKind};
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::jet::{Jet, Var};
use crate::metric::FundJets;
use crate::tensor::Tn;

/// How a nonlinear connection is produced at a point.
#[derive(Clone, Debug)]
pub enum ConnectionKind {
    /// The Berwald connection of the metric itself.
    Metric,
    /// N = N_metric + d.Z + A (x) canonical: the two-potential family.
    Assembled { z: ZKind, a: AKind },
    /// Classical linear connection, N_i^k = Gamma^k_{ia}(x) y^a.
    Linear(LinearGamma),
    /// User-supplied component expressions, row-major N_i^k.
    Custom { exprs: Vec<Expr> },
}

/// Connection data at one point, with the assembly ingredients kept when
/// they exist so residual checks can reuse them.
pub struct ConnectionJets {
    pub nl: Tn<Jet>,
    pub z: Option<Vec<Jet>>,
    pub a: Option<Vec<Jet>>,
}

pub fn connection_jets(kind: &ConnectionKind, fund: &FundJets) -> Result<ConnectionJets> {
    let n = fund.n;
    match kind {
        ConnectionKind::Metric => Ok(ConnectionJets {
            nl: fund.metric_nonlinear()?,
            z: None,
            a: None,
        }),
        ConnectionKind::Assembled { z, a } => {
            let (zj, aj) = assembled_parts(z, a, fund)?;
            let base = fund.metric_nonlinear()?;
            let mut vals = Vec::with_capacity(n * n);
            for i in 0..n {
                for k in 0..n {
                    let mut e = base.at(&[i, k]).add(&zj[k].dy(i)?);
                    e = e.add(&aj[i].mul_var(Var::Y(k), fund.y[k]));
                    vals.push(e);
                }
            }
            Ok(ConnectionJets {
                nl: Tn::from_vec(&[n, n], vals),
                z: Some(zj),
                a: Some(aj),
            })
        }
        ConnectionKind::Linear(lg) => {
            assert_eq!(lg.dim(), n);
            let table = lg.gamma(&fund.xj);
            let mut vals = Vec::with_capacity(n * n);
            for i in 0..n {
                for k in 0..n {
                    let mut acc = Jet::constant(&fund.space, 0.0);
                    for a in 0..n {
                        acc = acc.add(&table.at(&[i, a, k]).mul_var(Var::Y(a), fund.y[a]));
                    }
                    vals.push(acc);
                }
            }
            Ok(ConnectionJets {
                nl: Tn::from_vec(&[n, n], vals),
                z: None,
                a: None,
            })
        }
        ConnectionKind::Custom { exprs } => {
            if exprs.len() != n * n {
                return Err(Error::Config(format!(
                    "custom connection wants {} component expressions, got {}",
                    n * n,
                    exprs.len()
                )));
            }
            let b = Bindings {
                x: &fund.xj,
                y: &fund.yj,
                l: Some(&fund.l),
            };
            let mut vals = Vec::with_capacity(n * n);
            for e in exprs {
                let j = e.eval(&b)?;
                j.check_finite()?;
                vals.push(j);
            }
            Ok(ConnectionJets {
                nl: Tn::from_vec(&[n, n], vals),
                z: None,
                a: None,
            })
        }
    }
}

/// Assembly ingredients as jets: the vertical potential Z and the scale
/// covector A. Constructed A variants are materialized from the Z and
/// metric jets; they exist to hit exact compatibility rows.
pub fn assembled_parts(z: &ZKind, a: &AKind, fund: &FundJets) -> Result<(Vec<Jet>, Vec<Jet>)> {
    let n = fund.n;
    let zj = z.eval(&fund.xj, &fund.yj, &fund.l);
    for e in &zj {
        e.check_finite()?;
    }
    let aj = if a.is_constructed() {
        let y_low = fund.y_low()?;
        let linv = fund.l.recip_jet();
        match a {
            AKind::DriftNeutral => {
                // A_i = -2 (y_a Z^a) y_i / L^2: cancels the L-drift along
                // the underlying geodesics regardless of Z.
                let mut yz = Jet::constant(&fund.space, 0.0);
                for c in 0..n {
                    yz = yz.add(&y_low[c].mul(&zj[c]));
                }
                let front = yz.scale(-2.0).mul(&linv).mul(&linv);
                (0..n).map(|i| Ok(front.mul(&y_low[i]))).collect::<Result<Vec<_>>>()?
            }
            AKind::CompatRadial => {
                // A_i = -y_a Z^a_{.i} / L: the metric-compatibility value.
                build_weighted_trace(&zj, &y_low, &linv, -1.0, n)?
            }
            AKind::TraceNeutral => {
                // A_i = -(n+2) y_a Z^a_{.i} / (2 n L): kills the g-trace
                // of the covariant derivative of g.
                let w = -(n as f64 + 2.0) / (2.0 * n as f64);
                build_weighted_trace(&zj, &y_low, &linv, w, n)?
            }
            _ => unreachable!(),
        }
    } else {
        a.eval_direct(&fund.xj, &fund.yj, &fund.l)?
    };
    for e in &aj {
        e.check_finite()?;
    }
    Ok((zj, aj))
}

fn build_weighted_trace(
    zj: &[Jet],
    y_low: &[Jet],
    linv: &Jet,
    w: f64,
    n: usize,
) -> Result<Vec<Jet>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Jet::constant(linv.space(), 0.0);
        for a in 0..n {
            acc = acc.add(&y_low[a].mul(&zj[a].dy(i)?));
        }
        out.push(acc.mul(linv).scale(w));
    }
    Ok(out)
}

/// Connection coefficients Gamma^k_{ij} = d.N_i^k / d.y^j.
pub fn berwald_coefficients(nl: &Tn<Jet>) -> Result<Tn<Jet>> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                vals.push(nl.at(&[i, k]).dy(j)?);
            }
        }
    }
    Ok(Tn::from_vec(&[n, n, n], vals))
}

/// Torsion Tor_{ij}^k = Gamma^k_{ij} - Gamma^k_{ji}.
pub fn torsion(gamma: &Tn<Jet>) -> Tn<Jet> {
    let n = gamma.shape()[0];
    Tn::from_fn(&[n, n, n], |ix| {
        gamma
            .at(&[ix[0], ix[1], ix[2]])
            .sub(gamma.at(&[ix[1], ix[0], ix[2]]))
    })
}

/// Horizontal lift derivative delta_j f = d_j f - N_j^a d.f/d.y^a.
pub fn delta(f: &Jet, j: usize, nl: &Tn<Jet>) -> Result<Jet> {
    let n = nl.shape()[0];
    let mut out = f.dx(j)?;
    for a in 0..n {
        out = out.sub(&nl.at(&[j, a]).mul(&f.dy(a)?));
    }
    Ok(out)
}

/// Curvature R_{ij}^k = delta_j N_i^k - delta_i N_j^k and the Ricci
/// scalar Ric = y^b R_{ba}^a, kept as a jet for later fiber derivatives.
pub fn curvature_and_ricci(nl: &Tn<Jet>, y: &[f64]) -> Result<(Tn<Jet>, Jet)> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let e = delta(nl.at(&[i, k]), j, nl)?.sub(&delta(nl.at(&[j, k]), i, nl)?);
                vals.push(e);
            }
        }
    }
    let r = Tn::from_vec(&[n, n, n], vals);
    let space = nl.at(&[0, 0]).space().clone();
    let mut ric = Jet::constant(&space, 0.0);
    for b in 0..n {
        for a in 0..n {
            ric = ric.add(&r.at(&[b, a, a]).mul_var(Var::Y(b), y[b]));
        }
    }
    Ok((r, ric))
}

/// cov_k f = delta_k f for a scalar.
pub fn cov_scalar(f: &Jet, nl: &Tn<Jet>) -> Result<Vec<Jet>> {
    let n = nl.shape()[0];
    (0..n).map(|k| delta(f, k, nl)).collect()
}

/// cov_k X^a = delta_k X^a + Gamma^a_{kb} X^b, laid out [[k, a]].
pub fn cov_deriv_10(x: &[Jet], nl: &Tn<Jet>, gamma: &Tn<Jet>) -> Result<Tn<Jet>> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n);
    for k in 0..n {
        for a in 0..n {
            let mut e = delta(&x[a], k, nl)?;
            for b in 0..n {
                e = e.add(&gamma.at(&[k, b, a]).mul(&x[b]));
            }
            vals.push(e);
        }
    }
    Ok(Tn::from_vec(&[n, n], vals))
}

/// cov_k w_i = delta_k w_i - Gamma^a_{ki} w_a, laid out [[i, k]].
pub fn cov_deriv_01(w: &[Jet], nl: &Tn<Jet>, gamma: &Tn<Jet>) -> Result<Tn<Jet>> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let mut e = delta(&w[i], k, nl)?;
            for a in 0..n {
                e = e.sub(&gamma.at(&[k, i, a]).mul(&w[a]));
            }
            vals.push(e);
        }
    }
    Ok(Tn::from_vec(&[n, n], vals))
}

/// cov_j J_i^k = delta_j J_i^k + Gamma^k_{ja} J_i^a - Gamma^a_{ji} J_a^k,
/// laid out [[i, j, k]].
pub fn cov_deriv_11(j_t: &Tn<Jet>, nl: &Tn<Jet>, gamma: &Tn<Jet>) -> Result<Tn<Jet>> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut e = delta(j_t.at(&[i, k]), j, nl)?;
                for a in 0..n {
                    e = e.add(&gamma.at(&[j, a, k]).mul(j_t.at(&[i, a])));
                    e = e.sub(&gamma.at(&[j, i, a]).mul(j_t.at(&[a, k])));
                }
                vals.push(e);
            }
        }
    }
    Ok(Tn::from_vec(&[n, n, n], vals))
}

/// cov_k g_{ij} = delta_k g_{ij} - Gamma^a_{ki} g_{aj} - Gamma^a_{kj} g_{ia},
/// laid out [[i, j, k]].
pub fn cov_deriv_02(g: &Tn<Jet>, nl: &Tn<Jet>, gamma: &Tn<Jet>) -> Result<Tn<Jet>> {
    let n = nl.shape()[0];
    let mut vals = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut e = delta(g.at(&[i, j]), k, nl)?;
                for a in 0..n {
                    e = e.sub(&gamma.at(&[k, i, a]).mul(g.at(&[a, j])));
                    e = e.sub(&gamma.at(&[k, j, a]).mul(g.at(&[i, a])));
                }
                vals.push(e);
            }
        }
    }
    Ok(Tn::from_vec(&[n, n, n], vals))
}

/// Spray underlying a 1-homogeneous connection: G^i = N_a^i y^a / 2.
pub fn underlying_spray(nl: &Tn<Jet>, y: &[f64]) -> Vec<Jet> {
    let n = nl.shape()[0];
    let space = nl.at(&[0, 0]).space().clone();
    (0..n)
        .map(|i| {
            let mut acc = Jet::constant(&space, 0.0);
            for a in 0..n {
                acc = acc.add(&nl.at(&[a, i]).mul_var(Var::Y(a), y[a]));
            }
            acc.scale(0.5)
        })
        .collect()
}

/// Deformation J = N - N_metric as a (1,1) jet tensor, [[i,k]] = J_i^k.
pub fn deformation(nl: &Tn<Jet>, base: &Tn<Jet>) -> Tn<Jet> {
    let n = nl.shape()[0];
    Tn::from_fn(&[n, n], |ix| nl.at(ix).sub(base.at(ix)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{standard_catalog, Metric};
    use crate::jet::JetSpace;
    use crate::metric::{self, FundJets};
    use crate::oracle::classical;

    fn fund(m: &Metric, h: u8, v: u8) -> FundJets {
        let (x, y) = m.base_point();
        let space = metric::space_for(m, h, v);
        FundJets::new(m, &x, &y, &space).unwrap()
    }

    fn five_connections() -> Vec<ConnectionKind> {
        vec![
            ConnectionKind::Metric,
            ConnectionKind::Assembled {
                z: ZKind::RadialF { c: 0.3 },
                a: AKind::Constant {
                    c: vec![0.1, -0.05, 0.2],
                },
            },
            ConnectionKind::Assembled {
                z: ZKind::QuadraticDiag {
                    q: vec![0.2, 0.1, -0.15],
                },
                a: AKind::Anisotropic {
                    c: vec![0.05, 0.0, 0.1],
                    d: vec![0.02, 0.07, -0.03],
                    p: 0,
                    q: 1,
                },
            },
            ConnectionKind::Linear(LinearGamma::FlatCartesian { n: 3 }),
            ConnectionKind::Custom {
                exprs: vec![
                    Expr::parse("0.3 * F").unwrap(),
                    Expr::parse("0").unwrap(),
                    Expr::parse("0.1 * y2").unwrap(),
                    Expr::parse("0").unwrap(),
                    Expr::parse("0.3 * F + 0.05 * y1").unwrap(),
                    Expr::parse("0").unwrap(),
                    Expr::parse("0").unwrap(),
                    Expr::parse("0.2 * y3").unwrap(),
                    Expr::parse("0.3 * F").unwrap(),
                ],
            },
        ]
    }

    #[test]
    fn canonical_section_is_parallel_for_every_homogeneous_connection() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let f = fund(&m, 1, 5);
        for kind in five_connections() {
            let conn = connection_jets(&kind, &f).unwrap();
            let gamma = berwald_coefficients(&conn.nl).unwrap();
            let cov = cov_deriv_10(&f.yj, &conn.nl, &gamma).unwrap();
            for e in cov.data() {
                assert!(e.val().abs() < 1e-12, "{kind:?}: cov y = {}", e.val());
            }
        }
    }

    #[test]
    fn torsion_of_assembled_connection_matches_its_closed_form() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let f = fund(&m, 1, 5);
        let kind = ConnectionKind::Assembled {
            z: ZKind::RadialF { c: 0.4 },
            a: AKind::Waved {
                c: vec![0.2, -0.1, 0.05],
            },
        };
        let conn = connection_jets(&kind, &f).unwrap();
        let gamma = berwald_coefficients(&conn.nl).unwrap();
        let tor = torsion(&gamma);
        let aj = conn.a.as_ref().unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut want = (aj[i].dy(j).unwrap().val() - aj[j].dy(i).unwrap().val())
                        * f.y[k];
                    if k == j {
                        want += aj[i].val();
                    }
                    if k == i {
                        want -= aj[j].val();
                    }
                    let got = tor.at(&[i, j, k]).val();
                    assert!(
                        (got - want).abs() < 1e-12,
                        "Tor[{i}{j}{k}] = {got}, closed form {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn ricci_is_invariant_under_canonical_rescale() {
        // Adding A (x) y to any connection leaves the Ricci scalar alone.
        for m in [
            Metric::sphere2(),
            Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]),
        ] {
            let f = fund(&m, 2, 6);
            let base = connection_jets(&ConnectionKind::Metric, &f).unwrap();
            let (_, ric0) = curvature_and_ricci(&base.nl, &f.y).unwrap();
            let a = if m.n == 2 {
                AKind::Constant { c: vec![0.3, -0.2] }
            } else {
                AKind::Anisotropic {
                    c: vec![0.1, 0.2, -0.05],
                    d: vec![0.03, -0.02, 0.08],
                    p: 1,
                    q: 2,
                }
            };
            let shifted = connection_jets(
                &ConnectionKind::Assembled { z: ZKind::Zero, a },
                &f,
            )
            .unwrap();
            let (_, ric1) = curvature_and_ricci(&shifted.nl, &f.y).unwrap();
            let gap = (ric0.val() - ric1.val()).abs();
            assert!(gap < 1e-10, "{}: Ricci moved by {gap}", m.name);
        }
    }

    #[test]
    fn linear_connection_curvature_reduces_to_the_classical_tensor() {
        let m = Metric::sphere2();
        let (x, y) = m.base_point();
        let space = JetSpace::get(2, 2, 3);
        let f = FundJets::new(&m, &x, &y, &space).unwrap();
        let conn = connection_jets(&ConnectionKind::Linear(LinearGamma::Sphere2), &f).unwrap();
        let (r, ric) = curvature_and_ricci(&conn.nl, &y).unwrap();
        // Independent route: polarize L into g, then finite-difference
        // Christoffels and the classical curvature tensor.
        let g_of = |p: &[f64]| {
            let mut g = vec![0.0; 4];
            for i in 0..2 {
                for j in 0..2 {
                    let mut ei = vec![0.0; 2];
                    let mut ej = vec![0.0; 2];
                    ei[i] = 1.0;
                    ej[j] = 1.0;
                    let sum: Vec<f64> = ei.iter().zip(&ej).map(|(a, b)| a + b).collect();
                    g[i * 2 + j] = (m.l_value(p, &sum).unwrap()
                        - m.l_value(p, &ei).unwrap()
                        - m.l_value(p, &ej).unwrap())
                        / 2.0;
                }
            }
            g
        };
        let gamma_of = |p: &[f64]| classical::christoffel(&g_of, 2, p);
        let classical_r = classical::curvature(&gamma_of, 2, &x);
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut want = 0.0;
                    for a in 0..2 {
                        want += y[a] * classical_r.at(&[a, j, k, l]);
                    }
                    let got = r.at(&[j, k, l]).val();
                    assert!(
                        (got - want).abs() < 1e-6,
                        "R[{j}{k}{l}] = {got}, classical {want}"
                    );
                }
            }
        }
        // Unit sphere: Ric(x, y) = g(y, y) = L.
        let lval = m.l_value(&x[..], &y[..]).unwrap();
        assert!((ric.val() - lval).abs() < 1e-9, "Ric = {}", ric.val());
    }

    #[test]
    fn horizontal_lifts_commute_into_curvature() {
        let m = Metric::sphere2();
        let (x, y) = m.base_point();
        let space = JetSpace::get(2, 2, 4);
        let f = FundJets::new(&m, &x, &y, &space).unwrap();
        let conn = connection_jets(&ConnectionKind::Metric, &f).unwrap();
        let (r, _) = curvature_and_ricci(&conn.nl, &y).unwrap();
        // Jet-closed scalars with x and y structure.
        let scalars = [
            Expr::parse("x1 * y1 + sin(x2) * y2").unwrap(),
            Expr::parse("y1^2 * x2 + 0.3 * y2^2 * x1^2").unwrap(),
            Expr::parse("(1 + x1^2) * y1 * y2").unwrap(),
        ];
        let b = Bindings {
            x: &f.xj,
            y: &f.yj,
            l: None,
        };
        for ex in &scalars {
            let s = ex.eval(&b).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let lhs = delta(&delta(&s, j, &conn.nl).unwrap(), i, &conn.nl)
                        .unwrap()
                        .val()
                        - delta(&delta(&s, i, &conn.nl).unwrap(), j, &conn.nl)
                            .unwrap()
                            .val();
                    let mut rhs = 0.0;
                    for k in 0..2 {
                        rhs += r.at(&[i, j, k]).val() * s.dy(k).unwrap().val();
                    }
                    assert!(
                        (lhs - rhs).abs() < 1e-10,
                        "commutator [{i},{j}] gap {}",
                        lhs - rhs
                    );
                }
            }
        }
    }

    #[test]
    fn curvature_difference_formula_holds_for_deformed_connections() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let f = fund(&m, 2, 6);
        let base = connection_jets(&ConnectionKind::Metric, &f).unwrap();
        let kind = ConnectionKind::Assembled {
            z: ZKind::QuadraticDiag {
                q: vec![0.15, -0.1, 0.2],
            },
            a: AKind::Waved {
                c: vec![0.1, 0.05, -0.08],
            },
        };
        let conn = connection_jets(&kind, &f).unwrap();
        let n = 3;
        let (r, ric) = curvature_and_ricci(&conn.nl, &f.y).unwrap();
        let (r0, ric0) = curvature_and_ricci(&base.nl, &f.y).unwrap();
        let j_t = deformation(&conn.nl, &base.nl);
        let gamma0 = berwald_coefficients(&base.nl).unwrap();
        let covj = cov_deriv_11(&j_t, &base.nl, &gamma0).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut want = r0.at(&[i, j, k]).val() + covj.at(&[i, j, k]).val()
                        - covj.at(&[j, i, k]).val();
                    for a in 0..n {
                        want -= j_t.at(&[i, k]).dy(a).unwrap().val() * j_t.at(&[j, a]).val();
                        want += j_t.at(&[j, k]).dy(a).unwrap().val() * j_t.at(&[i, a]).val();
                    }
                    let got = r.at(&[i, j, k]).val();
                    assert!(
                        (got - want).abs() < 1e-9,
                        "R[{i}{j}{k}] = {got}, difference route {want}"
                    );
                }
            }
        }
        // Ricci difference route: contract the J-terms against y.
        let mut want = ric0.val();
        let trace = (0..n).fold(Jet::constant(&f.space, 0.0), |acc, a| {
            acc.add(j_t.at(&[a, a]))
        });
        for b in 0..n {
            want -= f.y[b] * delta(&trace, b, &base.nl).unwrap().val();
        }
        let jy: Vec<Jet> = (0..n)
            .map(|a| {
                (0..n).fold(Jet::constant(&f.space, 0.0), |acc, b| {
                    acc.add(&j_t.at(&[b, a]).mul_var(Var::Y(b), f.y[b]))
                })
            })
            .collect();
        let cov_jy = cov_deriv_10(&jy, &base.nl, &gamma0).unwrap();
        for a in 0..n {
            want += cov_jy.at(&[a, a]).val();
        }
        for b in 0..n {
            for a in 0..n {
                want += f.y[b] * trace.dy(a).unwrap().val() * j_t.at(&[b, a]).val();
                want -= f.y[b]
                    * (0..n)
                        .map(|c| j_t.at(&[b, c]).dy(a).unwrap().val() * j_t.at(&[c, a]).val())
                        .sum::<f64>();
            }
        }
        let got = ric.val();
        assert!(
            (got - want).abs() < 1e-9,
            "Ric = {got}, difference route {want}"
        );
    }

    #[test]
    fn underlying_spray_halves_the_contracted_connection() {
        for m in standard_catalog() {
            let f = fund(&m, 1, 4);
            let conn = connection_jets(&ConnectionKind::Metric, &f).unwrap();
            let from_nl = underlying_spray(&conn.nl, &f.y);
            let direct = f.spray().unwrap();
            for (a, b) in from_nl.iter().zip(&direct) {
                assert!(
                    (a.val() - b.val()).abs() < 1e-11,
                    "{}: {} vs {}",
                    m.name,
                    a.val(),
                    b.val()
                );
            }
        }
    }

    #[test]
    fn constructed_scale_covectors_hit_their_defining_identities() {
        let m = Metric::randers(vec![0.25, 0.05, 0.0], vec![0.15, 0.0, 0.1]);
        let f = fund(&m, 1, 5);
        let z = ZKind::FTimesW {
            w: vec![0.3, -0.2, 0.1],
        };
        let y_low: Vec<f64> = f.y_low().unwrap().iter().map(|e| e.val()).collect();
        let lv = f.l.val();

        // Compatibility row: A_i = -y_a Z^a_{.i} / L.
        let (zj, aj) = assembled_parts(&z, &AKind::CompatRadial, &f).unwrap();
        for i in 0..3 {
            let mut want = 0.0;
            for a in 0..3 {
                want -= y_low[a] * zj[a].dy(i).unwrap().val();
            }
            want /= lv;
            assert!((aj[i].val() - want).abs() < 1e-12);
        }

        // Drift row contracts to A_a y^a = -2 y_a Z^a / L.
        let (zj, aj) = assembled_parts(&z, &AKind::DriftNeutral, &f).unwrap();
        let mut lhs = 0.0;
        let mut yz = 0.0;
        for a in 0..3 {
            lhs += aj[a].val() * f.y[a];
            yz += y_low[a] * zj[a].val();
        }
        assert!((lhs + 2.0 * yz / lv).abs() < 1e-12);
    }
}
