//! Deterministic seeded sampling of (x, y) evaluation points: Halton
//! low-discrepancy sequences with a seeded Cranley-Patterson rotation,
//! chart-box placement, cone-aware fiber directions, and indicatrix
//! normalization |L| = 1. Identical seeds give identical samples, which
//! is what makes campaign reports reproducible.

use crate::catalog::Metric;
use crate::domain::FiberCone;
use crate::error::{Error, Result};

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical-inverse of `i` in the given base.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    let mut scale = inv;
    while i > 0 {
        out += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
        inv = 1.0 / base as f64;
    }
    out
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seeded low-discrepancy stream over the unit cube.
pub struct Sampler {
    rotation: Vec<f64>,
    /// Halton index stride; decorrelates successive draws.
    leap: u64,
    burn: u64,
}

impl Sampler {
    pub fn new(seed: u64, dims: usize) -> Sampler {
        assert!(dims <= PRIMES.len(), "sampler supports up to 16 cube dims");
        let mut state = seed ^ 0xd1f3_5a6e_9c2b_4e01;
        let rotation = (0..dims)
            .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64)
            .collect();
        Sampler {
            rotation,
            leap: 7,
            burn: 23,
        }
    }

    /// The i-th cube point (components in [0,1)).
    pub fn cube(&self, i: usize) -> Vec<f64> {
        let idx = self.burn + (i as u64) * self.leap;
        self.rotation
            .iter()
            .enumerate()
            .map(|(d, rot)| {
                let v = radical_inverse(idx, PRIMES[d]) + rot;
                v - v.floor()
            })
            .collect()
    }
}

/// A sampled evaluation point with its metric value.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub l: f64,
}

/// Draw `count` interior points of the metric's domain, fiber directions
/// normalized to the indicatrix |L| = 1.
pub fn sample_points(m: &Metric, seed: u64, count: usize) -> Result<Vec<SamplePoint>> {
    let n = m.n;
    let sampler = Sampler::new(seed, 2 * n);
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 50 * count + 1000 {
            return Err(Error::Eval(format!(
                "sampling of {} stalled after {attempts} attempts",
                m.name
            )));
        }
        let u = sampler.cube(i);
        i += 1;
        let x = m.domain.chart.lerp(&u[..n]);
        let y = match fiber_direction(m, &x, &u[n..]) {
            Some(y) => y,
            None => continue,
        };
        let l = m.l_value(&x, &y)?;
        if l.abs() < 1e-12 || !l.is_finite() {
            continue;
        }
        // Normalize onto the indicatrix: L is 2-homogeneous.
        let s = l.abs().sqrt();
        let y: Vec<f64> = y.iter().map(|&c| c / s).collect();
        let l = m.l_value(&x, &y)?;
        if !m.domain.admits(&x, &y, l) {
            continue;
        }
        out.push(SamplePoint { x, y, l });
    }
    Ok(out)
}

/// A raw fiber direction for the given cone, before normalization.
fn fiber_direction(m: &Metric, x: &[f64], u: &[f64]) -> Option<Vec<f64>> {
    let n = m.n;
    match m.domain.cone {
        FiberCone::AllNonzero => {
            let mut v: Vec<f64> = u.iter().map(|&t| 2.0 * t - 1.0).collect();
            let norm: f64 = v.iter().map(|&c| c * c).sum::<f64>().sqrt();
            if norm < 0.1 {
                v[0] += 1.0;
            }
            Some(v)
        }
        FiberCone::PositiveOrthant => {
            Some(u.iter().map(|&t| 0.15 + 0.85 * t).collect())
        }
        FiberCone::FutureTimelike => {
            // y = (1, s vhat) with s a fraction of the critical scale at
            // which the ray hits the light cone.
            let mut vhat: Vec<f64> = u[1..n].iter().map(|&t| 2.0 * t - 1.0).collect();
            let norm: f64 = vhat.iter().map(|&c| c * c).sum::<f64>().sqrt();
            if norm < 0.1 {
                vhat[0] += 1.0;
            }
            let s_crit = critical_scale(m, x, &vhat)?;
            let frac = 0.1 + 0.8 * u[0];
            let mut y = vec![1.0; n];
            for (k, &c) in vhat.iter().enumerate() {
                y[k + 1] = frac * s_crit * c;
            }
            Some(y)
        }
    }
}

/// Scale s* with L(x, (1, s* vhat)) = 0: where the spatial ray crosses
/// the light cone. The metrics with a timelike cone are monotone in s
/// along such rays.
pub fn critical_scale(m: &Metric, x: &[f64], vhat: &[f64]) -> Option<f64> {
    let eval = |s: f64| -> Option<f64> {
        let mut y = vec![1.0; m.n];
        for (k, &c) in vhat.iter().enumerate() {
            y[k + 1] = s * c;
        }
        let l = m.l_value(x, &y).ok()?;
        l.is_finite().then_some(l)
    };
    if eval(0.0)? <= 0.0 {
        return None;
    }
    let mut hi = 1.0;
    let mut guard = 0;
    while eval(hi)? > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Interior points approaching the light cone along a fixed spatial ray:
/// L decreases geometrically by `factor` per step from the ray's value at
/// half the critical scale.
pub fn boundary_ray(
    m: &Metric,
    x: &[f64],
    vhat: &[f64],
    steps: usize,
    factor: f64,
) -> Result<Vec<SamplePoint>> {
    assert!(factor > 0.0 && factor < 1.0);
    let s_crit = critical_scale(m, x, vhat)
        .ok_or_else(|| Error::Eval("ray does not cross the light cone".into()))?;
    let build = |s: f64| -> Vec<f64> {
        let mut y = vec![1.0; m.n];
        for (k, &c) in vhat.iter().enumerate() {
            y[k + 1] = s * c;
        }
        y
    };
    let l0 = m.l_value(x, &build(0.5 * s_crit))?;
    let mut out = Vec::with_capacity(steps);
    let mut target = l0;
    for _ in 0..steps {
        // Bisect on s for L(s) = target; L decreases in s on [0, s_crit].
        let (mut lo, mut hi) = (0.0, s_crit);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if m.l_value(x, &build(mid))? > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let y = build(s);
        let l = m.l_value(x, &y)?;
        out.push(SamplePoint {
            x: x.to_vec(),
            y,
            l,
        });
        target *= factor;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_catalog;

    #[test]
    fn samples_sit_on_the_indicatrix_inside_the_domain() {
        for m in standard_catalog() {
            let pts = sample_points(&m, 42, 25).unwrap();
            assert_eq!(pts.len(), 25, "{}", m.name);
            for p in &pts {
                assert!(
                    (p.l.abs() - 1.0).abs() < 1e-9,
                    "{}: |L| = {}",
                    m.name,
                    p.l.abs()
                );
                assert!(m.domain.admits(&p.x, &p.y, p.l), "{}", m.name);
            }
        }
    }

    #[test]
    fn identical_seeds_reproduce_identical_samples() {
        let m = standard_catalog().remove(1);
        let a = sample_points(&m, 7, 10).unwrap();
        let b = sample_points(&m, 7, 10).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.x, q.x);
            assert_eq!(p.y, q.y);
        }
        let c = sample_points(&m, 8, 10).unwrap();
        assert!(a.iter().zip(&c).any(|(p, q)| p.x != q.x || p.y != q.y));
    }

    #[test]
    fn cube_points_are_equidistributed_enough() {
        let s = Sampler::new(3, 2);
        let count = 4000;
        let mean: f64 = (0..count).map(|i| s.cube(i)[0]).sum::<f64>() / count as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        // Both halves of dim 1 hit.
        let lo = (0..count).filter(|&i| s.cube(i)[1] < 0.5).count();
        assert!(lo > count * 2 / 5 && lo < count * 3 / 5);
    }

    #[test]
    fn boundary_ray_halves_l_each_step() {
        let m = standard_catalog().remove(1); // Lorentzian entry
        let x = m.domain.chart.center();
        let vhat = vec![0.6, 0.3, 0.4];
        let ray = boundary_ray(&m, &x, &vhat, 12, 0.5).unwrap();
        assert_eq!(ray.len(), 12);
        for w in ray.windows(2) {
            let ratio = w[1].l / w[0].l;
            assert!((ratio - 0.5).abs() < 1e-6, "ratio {ratio}");
            assert!(w[1].l > 0.0);
        }
    }

    #[test]
    fn critical_scale_is_on_the_cone() {
        let m = standard_catalog().remove(1);
        let x = m.domain.chart.center();
        let vhat = vec![1.0, 0.0, 0.0];
        let s = critical_scale(&m, &x, &vhat).unwrap();
        // Minkowski: (1, s, 0, 0) is null at s = 1.
        assert!((s - 1.0).abs() < 1e-12);
    }
}
