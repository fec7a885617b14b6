//! Classical (isotropic) differential geometry from a metric `g(x)` given
//! as a plain closure. Derivatives are finite differences, inversion is
//! dense LU; nothing here touches the jet pipeline.
//!
//! Curvature convention: R^l_{ijk} is defined by
//! `(D_k D_j - D_j D_k) e_i = R^l_{ijk} e_l`, so
//! `R^l_{ijk} = d_k G^l_{ji} - d_j G^l_{ki} + G^a_{ji} G^l_{ka} - G^a_{ki} G^l_{ja}`
//! with G the Christoffel symbols. The (symmetrized) Ricci tensor
//! `Ric_{ab} = (R^c_{abc} + R^c_{bac})/2` is then positive on round spheres.

use crate::oracle::fd;
use crate::tensor::Tn;
use nalgebra::DMatrix;

/// Metric closure: returns the n*n matrix entries of g at x, row-major.
pub type MetricFn<'a> = &'a dyn Fn(&[f64]) -> Vec<f64>;

/// Christoffel symbols of the Levi-Civita connection,
/// Gamma^k_{ij} = g^{ka} (d_i g_{aj} + d_j g_{ai} - d_a g_{ij}) / 2,
/// laid out as [i, j, k] with the upper index last.
pub fn christoffel(g: MetricFn, n: usize, x: &[f64]) -> Tn<f64> {
    let gx = DMatrix::from_row_slice(n, n, &g(x));
    let ginv = gx.try_inverse().expect("oracle metric must be invertible");
    // dg[[c, i, j]] = d_c g_{ij}
    let dg = Tn::from_fn(&[n, n, n], |idx| {
        let (c, i, j) = (idx[0], idx[1], idx[2]);
        fd::partial(|p| g(p)[i * n + j], x, c)
    });
    Tn::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        (0..n)
            .map(|a| {
                0.5 * ginv[(k, a)]
                    * (dg.at(&[i, a, j]) + dg.at(&[j, a, i]) - dg.at(&[a, i, j]))
            })
            .sum()
    })
}

/// Christoffel closure: maps x to the [i, j, k] table.
pub type GammaFn<'a> = &'a dyn Fn(&[f64]) -> Tn<f64>;

/// Full curvature tensor R^l_{ijk} (layout [i, j, k, l], upper index last)
/// of an affine connection given by its Christoffel closure.
pub fn curvature(gamma: GammaFn, n: usize, x: &[f64]) -> Tn<f64> {
    let gx = gamma(x);
    // dgamma[[c, i, j, k]] = d_c Gamma^k_{ij}
    let dgamma = Tn::from_fn(&[n, n, n, n], |idx| {
        let (c, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        fd::partial(|p| *gamma(p).at(&[i, j, k]), x, c)
    });
    Tn::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut r = dgamma.at(&[k, j, i, l]) - dgamma.at(&[j, k, i, l]);
        for a in 0..n {
            r += gx.at(&[j, i, a]) * gx.at(&[k, a, l]) - gx.at(&[k, i, a]) * gx.at(&[j, a, l]);
        }
        r
    })
}

/// Symmetrized Ricci tensor Ric_{ab} = (R^c_{abc} + R^c_{bac}) / 2.
pub fn ricci_tensor(gamma: GammaFn, n: usize, x: &[f64]) -> Tn<f64> {
    let r = curvature(gamma, n, x);
    Tn::from_fn(&[n, n], |idx| {
        let (a, b) = (idx[0], idx[1]);
        (0..n)
            .map(|c| 0.5 * (r.at(&[a, b, c, c]) + r.at(&[b, a, c, c])))
            .sum()
    })
}

/// Quadratic curvature scalar y^a y^b Ric_{ab}(x).
pub fn ricci_quadratic(gamma: GammaFn, n: usize, x: &[f64], y: &[f64]) -> f64 {
    let ric = ricci_tensor(gamma, n, x);
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += y[a] * y[b] * ric.at(&[a, b]);
        }
    }
    s
}

/// Scalar curvature g^{ab} Ric_{ab}.
pub fn scalar_curvature(g: MetricFn, gamma: GammaFn, n: usize, x: &[f64]) -> f64 {
    let gx = DMatrix::from_row_slice(n, n, &g(x));
    let ginv = gx.try_inverse().expect("oracle metric must be invertible");
    let ric = ricci_tensor(gamma, n, x);
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += ginv[(a, b)] * ric.at(&[a, b]);
        }
    }
    s
}

/// Metric divergence of an isotropic vector field,
/// div X = |det g|^{-1/2} d_a ( |det g|^{1/2} X^a ).
pub fn divergence(g: MetricFn, xfield: &dyn Fn(&[f64]) -> Vec<f64>, n: usize, x: &[f64]) -> f64 {
    let root_det = |p: &[f64]| {
        DMatrix::from_row_slice(n, n, &g(p))
            .determinant()
            .abs()
            .sqrt()
    };
    let rd = root_det(x);
    (0..n)
        .map(|a| fd::partial(|p| root_det(p) * xfield(p)[a], x, a))
        .sum::<f64>()
        / rd
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Flat plane in polar coordinates (r, phi): g = diag(1, r^2).
    fn polar(p: &[f64]) -> Vec<f64> {
        vec![1.0, 0.0, 0.0, p[0] * p[0]]
    }

    /// Unit round 2-sphere in (theta, phi): g = diag(1, sin^2 theta).
    fn sphere(p: &[f64]) -> Vec<f64> {
        vec![1.0, 0.0, 0.0, p[0].sin().powi(2)]
    }

    #[test]
    fn polar_christoffels_closed_form() {
        // Nonzero symbols: Gamma^r_{phi phi} = -r, Gamma^phi_{r phi} = 1/r.
        let x = [1.7, 0.6];
        let c = christoffel(&polar, 2, &x);
        assert!((c.at(&[1, 1, 0]) + 1.7).abs() < 1e-9, "{}", c.at(&[1, 1, 0]));
        assert!((c.at(&[0, 1, 1]) - 1.0 / 1.7).abs() < 1e-9);
        assert!((c.at(&[1, 0, 1]) - 1.0 / 1.7).abs() < 1e-9);
        assert!(c.at(&[0, 0, 0]).abs() < 1e-9);
        assert!(c.at(&[0, 0, 1]).abs() < 1e-9);
    }

    #[test]
    fn polar_plane_is_flat() {
        let x = [1.3, 2.1];
        let gamma = |p: &[f64]| christoffel(&polar, 2, p);
        let r = curvature(&gamma, 2, &x);
        for v in r.data() {
            assert!(v.abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn unit_sphere_ricci_equals_metric_and_scalar_is_two() {
        let x = [1.1, 0.4];
        // Closed-form symbols keep the outer finite difference clean:
        // Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot.
        let gamma = |p: &[f64]| {
            let (s, c) = p[0].sin_cos();
            let mut t = Tn::from_fn(&[2, 2, 2], |_| 0.0);
            *t.at_mut(&[1, 1, 0]) = -s * c;
            *t.at_mut(&[0, 1, 1]) = c / s;
            *t.at_mut(&[1, 0, 1]) = c / s;
            t
        };
        let ric = ricci_tensor(&gamma, 2, &x);
        let g = sphere(&x);
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (ric.at(&[i, j]) - g[i * 2 + j]).abs() < 1e-9,
                    "Ric[{i}{j}] = {}, g = {}",
                    ric.at(&[i, j]),
                    g[i * 2 + j]
                );
            }
        }
        let scal = scalar_curvature(&sphere, &gamma, 2, &x);
        assert!((scal - 2.0).abs() < 1e-9, "{scal}");

        // Quadratic reduction: y^a y^b Ric_{ab} = g(y, y) on the unit sphere.
        let y = [0.3, -1.2];
        let quad = ricci_quadratic(&gamma, 2, &x, &y);
        let gyy = g[0] * y[0] * y[0] + g[3] * y[1] * y[1];
        assert!((quad - gyy).abs() < 1e-9);
    }

    #[test]
    fn sphere_christoffels_from_fd_match_closed_form() {
        let x = [0.9, -0.3];
        let c = christoffel(&sphere, 2, &x);
        let (s, co) = x[0].sin_cos();
        assert!((c.at(&[1, 1, 0]) + s * co).abs() < 1e-9);
        assert!((c.at(&[0, 1, 1]) - co / s).abs() < 1e-9);
    }

    #[test]
    fn euclidean_divergence_in_polar_chart() {
        // X = d_r (unit radial field): div X = 1/r in the plane.
        let x = [2.4, 1.0];
        let d = divergence(&polar, &|_: &[f64]| vec![1.0, 0.0], 2, &x);
        assert!((d - 1.0 / 2.4).abs() < 1e-9, "{d}");
    }
}
