//! Classical quadrature rules: Gauss-Legendre on an interval, tensor-product
//! grids on unit spheres S^1, S^2, S^3, and the closed-form sphere volumes
//! they must reproduce.

/// Vol(S^{d}) for the unit d-sphere, d = dim of the sphere itself.
pub fn sphere_volume(d: usize) -> f64 {
    use std::f64::consts::PI;
    match d {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        3 => 2.0 * PI * PI,
        _ => unimplemented!("fiber spheres only needed up to S^3"),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial; standard accuracy is ~1e-15 for m <= 256.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for k in 0..m.div_ceil(2) {
        // Chebyshev-based initial guess for the k-th root.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[m - 1 - k] = x;
        weights[k] = w;
        weights[m - 1 - k] = w;
    }
    (nodes, weights)
}

/// (P_m(x), P_m'(x)) by the three-term recurrence.
fn legendre_and_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=m {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature node on a unit sphere: Cartesian point and weight.
#[derive(Clone, Debug)]
pub struct SphereNode {
    pub u: Vec<f64>,
    pub w: f64,
}

/// Uniform trapezoid rule on S^1 (periodic, so plain uniform sum is
/// spectrally accurate).
pub fn s1_nodes(m: usize) -> Vec<SphereNode> {
    let w = 2.0 * std::f64::consts::PI / m as f64;
    (0..m)
        .map(|k| {
            let phi = w * k as f64;
            SphereNode {
                u: vec![phi.cos(), phi.sin()],
                w,
            }
        })
        .collect()
}

/// Gauss-Legendre in cos(theta) x uniform phi on S^2.
pub fn s2_nodes(m_theta: usize, m_phi: usize) -> Vec<SphereNode> {
    let (ct, wt) = gauss_legendre(m_theta);
    let wphi = 2.0 * std::f64::consts::PI / m_phi as f64;
    let mut out = Vec::with_capacity(m_theta * m_phi);
    for (c, w) in ct.iter().zip(&wt) {
        let s = (1.0 - c * c).sqrt();
        for k in 0..m_phi {
            let phi = wphi * k as f64;
            out.push(SphereNode {
                u: vec![s * phi.cos(), s * phi.sin(), *c],
                w: w * wphi,
            });
        }
    }
    out
}

/// S^3 as (psi, theta, phi) with measure sin^2(psi) sin(theta): GL in psi
/// (weight folded into w), GL in cos(theta), uniform phi.
pub fn s3_nodes(m_psi: usize, m_theta: usize, m_phi: usize) -> Vec<SphereNode> {
    let (tp, wp) = gauss_legendre(m_psi);
    let (ct, wt) = gauss_legendre(m_theta);
    let wphi = 2.0 * std::f64::consts::PI / m_phi as f64;
    let half_pi = std::f64::consts::PI / 2.0;
    let mut out = Vec::with_capacity(m_psi * m_theta * m_phi);
    for (t, w1) in tp.iter().zip(&wp) {
        // map [-1,1] -> [0, pi]
        let psi = half_pi * (t + 1.0);
        let (sp, cp) = psi.sin_cos();
        for (c, w2) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..m_phi {
                let phi = wphi * k as f64;
                out.push(SphereNode {
                    u: vec![
                        sp * s * phi.cos(),
                        sp * s * phi.sin(),
                        sp * c,
                        cp,
                    ],
                    w: w1 * half_pi * sp * sp * w2 * wphi,
                });
            }
        }
    }
    out
}

/// Node set for the unit sphere S^{n-1} in R^n sized so that the constant
/// function integrates to Vol(S^{n-1}) within ~1e-8.
pub fn sphere_grid(n: usize, resolution: usize) -> Vec<SphereNode> {
    match n {
        2 => s1_nodes(resolution.max(16)),
        3 => s2_nodes(resolution.max(24), resolution.max(24)),
        4 => s3_nodes(
            resolution.max(24),
            resolution.max(24),
            resolution.max(24),
        ),
        _ => unimplemented!("fiber quadrature implemented for base dimensions 2..=4"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // m-point GL is exact through degree 2m-1; frozen: int_{-1}^1 x^6 = 2/7.
        let (x, w) = gauss_legendre(4);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-14, "{s}");
    }

    #[test]
    fn sphere_grids_reproduce_volumes() {
        for (n, vol) in [(2, sphere_volume(1)), (3, sphere_volume(2)), (4, sphere_volume(3))] {
            let grid = sphere_grid(n, 32);
            let s: f64 = grid.iter().map(|nd| nd.w).sum();
            assert!(
                (s - vol).abs() < 1e-8 * vol,
                "n = {n}: {s} vs {vol}"
            );
            for nd in grid.iter().step_by(57) {
                let r2: f64 = nd.u.iter().map(|u| u * u).sum();
                assert!((r2 - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn s2_integrates_harmonic_square() {
        // int_{S^2} z^2 dA = 4 pi / 3.
        let s: f64 = s2_nodes(24, 48)
            .iter()
            .map(|nd| nd.w * nd.u[2] * nd.u[2])
            .sum();
        assert!((s - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-10, "{s}");
    }
}
