//! Closed-form geodesics of the unit round 2-sphere via the R^3 embedding:
//! a geodesic from p with velocity v (|v| = omega) is
//! gamma(t) = cos(omega t) p + sin(omega t) v / omega, a great circle of
//! period 2 pi / omega.

/// Chart point (theta, phi) -> embedded point in R^3.
pub fn embed(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Chart tangent (theta, phi, dtheta, dphi) -> embedded velocity in R^3.
pub fn embed_velocity(theta: f64, phi: f64, dtheta: f64, dphi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [
        dtheta * ct * cp - dphi * st * sp,
        dtheta * ct * sp + dphi * st * cp,
        -dtheta * st,
    ]
}

/// Embedded great-circle position at time t.
pub fn geodesic_embedded(theta: f64, phi: f64, dtheta: f64, dphi: f64, t: f64) -> [f64; 3] {
    let p = embed(theta, phi);
    let v = embed_velocity(theta, phi, dtheta, dphi);
    let omega = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if omega == 0.0 {
        return p;
    }
    let (s, c) = (omega * t).sin_cos();
    [
        c * p[0] + s * v[0] / omega,
        c * p[1] + s * v[1] / omega,
        c * p[2] + s * v[2] / omega,
    ]
}

/// Euclidean distance in the embedding; used to compare trajectories
/// without chart-angle wrapping artifacts.
pub fn embedded_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equator_round_trip() {
        // Start on the equator heading along it: period 2 pi at unit speed.
        let th = std::f64::consts::FRAC_PI_2;
        let p0 = embed(th, 0.2);
        let p1 = geodesic_embedded(th, 0.2, 0.0, 1.0, 2.0 * std::f64::consts::PI);
        assert!(embedded_distance(&p0, &p1) < 1e-12);
    }

    #[test]
    fn stays_on_sphere_and_unit_speed() {
        let (th, ph, dth, dph) = (1.1, -0.7, 0.4, 0.9);
        let v = embed_velocity(th, ph, dth, dph);
        // |v|^2 in the chart metric: dth^2 + sin^2(th) dph^2.
        let chart = dth * dth + th.sin().powi(2) * dph * dph;
        let emb = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        assert!((chart - emb).abs() < 1e-12);
        for k in 0..50 {
            let p = geodesic_embedded(th, ph, dth, dph, 0.13 * k as f64);
            let r2: f64 = p.iter().map(|c| c * c).sum();
            assert!((r2 - 1.0).abs() < 1e-12);
        }
    }
}
