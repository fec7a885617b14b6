use finsler_lab::campaign::{run_check, CheckContext};
use finsler_lab::catalog::{standard_catalog, AKind, Metric, ZKind};
use finsler_lab::connection::{self, ConnectionKind};
use finsler_lab::metric::{space_for, FundJets};
use finsler_lab::palatini;
use finsler_lab::sampling::sample_points;
use finsler_lab::tol;
use std::time::Instant;

#[test]
fn homogeneity_timing() {
    for m in standard_catalog() {
        let name = m.name.clone();
        let mut cx = CheckContext::new(m);
        cx.seed = 11;
        cx.samples = 100;
        let t0 = Instant::now();
        let out = run_check("homogeneity", &cx).unwrap();
        println!(
            "{name:<22} {:>7.1} ms status {:?}",
            t0.elapsed().as_secs_f64() * 1e3,
            out.status
        );
    }
}

#[test]
fn solving_pairs_decompose() {
    let m = Metric::euclidean(3);
    let n = m.n;
    let space = space_for(&m, tol::H_ORD, tol::V_ORD);
    let pts = sample_points(&m, 41, 4).unwrap();
    for (k, p) in pts.iter().enumerate() {
        let a_kind = AKind::Constant {
            c: vec![0.1, -0.2, 0.15],
        };
        let z_kind = if k % 2 == 0 {
            ZKind::Zero
        } else {
            ZKind::SigmaLinear {
                c: vec![0.2, -0.1, 0.05],
            }
        };
        let fund = FundJets::new(&m, &p.x, &p.y, &space).unwrap();
        let kind = ConnectionKind::Assembled {
            z: z_kind.clone(),
            a: a_kind.clone(),
        };
        let cj = connection::connection_jets(&kind, &fund).unwrap();
        let aff = palatini::affine_residual(&fund, &cj).unwrap().max;
        let dec = palatini::decompose(&fund, &cj).unwrap();
        let z_in = z_kind.eval(&fund.xj, &fund.yj, &fund.l);
        let a_in = a_kind.eval_direct(&fund.xj, &fund.yj, &fund.l).unwrap();
        let mut zt = 0.0f64;
        let mut at = 0.0f64;
        let mut zd = 0.0f64;
        let mut ad = 0.0f64;
        for i in 0..n {
            zt = zt.max((dec.z_torsion[i].val() - z_in[i].val()).abs());
            at = at.max((dec.a_torsion[i].val() - a_in[i].val()).abs());
            zd = zd.max((dec.z[i].val() - z_in[i].val()).abs());
            ad = ad.max((dec.a[i].val() - a_in[i].val()).abs());
        }
        println!(
            "pair {k} ({z_kind:?}): affine {aff:.2e}  torsion z/a {zt:.2e}/{at:.2e}  direct z/a {zd:.2e}/{ad:.2e}  route {:.2e}",
            dec.route_gap
        );
    }
}
