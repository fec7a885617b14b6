//! Closed-form fundamental tensor of a Randers-type metric F = alpha + beta,
//! alpha = sqrt(a_{ij} y^i y^j), beta = b_i y^i, L = F^2:
//!
//!   g_{ij} = (F/alpha) (a_{ij} - l_i l_j) + (l_i + b_i)(l_j + b_j),
//!   l_i = a_{ia} y^a / alpha.
//!
//! Used as an independent reference for the jet-computed fundamental tensor.

/// g at one fiber point. `a` is the (constant, symmetric) Riemannian part
/// row-major, `b` the 1-form evaluated at the base point.
pub fn fundamental_tensor(a: &[f64], b: &[f64], y: &[f64]) -> Vec<f64> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    assert_eq!(y.len(), n);
    let mut ay = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            ay[i] += a[i * n + j] * y[j];
        }
    }
    let alpha2: f64 = (0..n).map(|i| ay[i] * y[i]).sum();
    assert!(alpha2 > 0.0, "Randers oracle needs alpha^2 > 0");
    let alpha = alpha2.sqrt();
    let beta: f64 = (0..n).map(|i| b[i] * y[i]).sum();
    let f = alpha + beta;
    let l: Vec<f64> = ay.iter().map(|v| v / alpha).collect();
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] =
                f / alpha * (a[i * n + j] - l[i] * l[j]) + (l[i] + b[i]) * (l[j] + b[j]);
        }
    }
    g
}

/// L = (alpha + beta)^2 at one fiber point.
pub fn l_value(a: &[f64], b: &[f64], y: &[f64]) -> f64 {
    let n = b.len();
    let mut alpha2 = 0.0;
    let mut beta = 0.0;
    for i in 0..n {
        beta += b[i] * y[i];
        for j in 0..n {
            alpha2 += a[i * n + j] * y[i] * y[j];
        }
    }
    let f = alpha2.sqrt() + beta;
    f * f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::fd;

    const A3: [f64; 9] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];

    #[test]
    fn matches_fiber_hessian_of_l() {
        let b = [0.4, 0.0, 0.1];
        let y = [1.0, 0.3, -0.2];
        let g = fundamental_tensor(&A3, &b, &y);
        for i in 0..3 {
            for j in 0..3 {
                let hess = fd::partial2_mixed(|v| l_value(&A3, &b, v), &y, i, j) / 2.0;
                // Relative 1e-6: the limit of an FD Hessian at step 1e-4.
                assert!(
                    (g[i * 3 + j] - hess).abs() < 1e-6,
                    "g[{i}{j}] = {} vs hessian {}",
                    g[i * 3 + j],
                    hess
                );
            }
        }
    }

    #[test]
    fn homogeneity_identities() {
        let b = [0.2, -0.3, 0.05];
        let y = [0.8, -0.5, 1.1];
        let g = fundamental_tensor(&A3, &b, &y);
        let l = l_value(&A3, &b, &y);
        // L = g_{ab} y^a y^b.
        let mut gyy = 0.0;
        let mut gy = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                gyy += g[i * 3 + j] * y[i] * y[j];
                gy[i] += g[i * 3 + j] * y[j];
            }
        }
        assert!((gyy - l).abs() < 1e-12, "{gyy} vs {l}");
        // g_{ia} y^a = (d/dy^i) L / 2, 0-homogeneity of g: g(2y) = g(y).
        for i in 0..3 {
            let dl = fd::partial(|v| l_value(&A3, &b, v), &y, i);
            assert!((gy[i] - dl / 2.0).abs() < 1e-9);
        }
        let y2: Vec<f64> = y.iter().map(|v| 2.0 * v).collect();
        let g2 = fundamental_tensor(&A3, &b, &y2);
        for (u, v) in g.iter().zip(&g2) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn reduces_to_riemannian_when_b_is_zero() {
        let b = [0.0; 3];
        let y = [0.4, 2.0, -1.3];
        let g = fundamental_tensor(&A3, &b, &y);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[i * 3 + j] - A3[i * 3 + j]).abs() < 1e-13);
            }
        }
    }
}
