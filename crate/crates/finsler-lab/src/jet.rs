//! Truncated multivariate Taylor arithmetic over the 2n chart variables
//! (x, y) of the tangent bundle, with independent truncation budgets for
//! base (x) and vertical (y) orders.
//!
//! A `Jet` stores the Taylor coefficients of a scalar function around one
//! chart point, together with a validity box `(h_valid, v_valid)`: only
//! coefficients with x-degree <= h_valid and y-degree <= v_valid are
//! guaranteed to be true derivatives of the represented function. Binary
//! operations intersect validity boxes; differentiation shrinks them by
//! one order, which is how truncation budgets surface as explicit
//! `Error::Budget` values instead of silently wrong numbers.
//!
//! One refinement keeps polynomial fiber dependence cheap: a jet flagged
//! `y_exact` represents a function that *is* a polynomial in y of the
//! stored support degree (quadratic metrics and everything linear-algebraic
//! derived from them). Vertical differentiation of such jets loses nothing,
//! so pseudo-Riemannian catalog entries run at low vertical order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::num::Num;

/// Exponent table for one variable group: all multi-indices with total
/// degree <= ord over `dim` variables, graded lexicographic.
struct VarTable {
    dim: usize,
    ord: u8,
    exps: Vec<Vec<u8>>,
    deg: Vec<u8>,
    /// [mono * dim + var] -> index of exps[mono] + e_var, u32::MAX if outside.
    shift_up: Vec<u32>,
    /// Products staying inside the table, bucketed by (deg_i, deg_j).
    pair_buckets: Vec<Vec<(u32, u32, u32)>>,
    /// alpha! per monomial.
    fact: Vec<f64>,
}

const NO_SLOT: u32 = u32::MAX;

impl VarTable {
    fn new(dim: usize, ord: u8) -> Self {
        let mut exps: Vec<Vec<u8>> = Vec::new();
        for total in 0..=ord {
            push_compositions(dim, total, &mut vec![0; dim], 0, &mut exps);
        }
        let index: HashMap<Vec<u8>, u32> = exps
            .iter()
            .enumerate()
            .map(|(k, e)| (e.clone(), k as u32))
            .collect();
        let deg: Vec<u8> = exps.iter().map(|e| e.iter().sum()).collect();
        let mut shift_up = vec![NO_SLOT; exps.len() * dim];
        for (m, e) in exps.iter().enumerate() {
            for v in 0..dim {
                let mut up = e.clone();
                up[v] += 1;
                if let Some(&t) = index.get(&up) {
                    shift_up[m * dim + v] = t;
                }
            }
        }
        let nb = (ord as usize + 1) * (ord as usize + 1);
        let mut pair_buckets: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); nb];
        for i in 0..exps.len() {
            for j in 0..exps.len() {
                if deg[i] + deg[j] > ord {
                    continue;
                }
                let sum: Vec<u8> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                let k = index[&sum];
                pair_buckets[deg[i] as usize * (ord as usize + 1) + deg[j] as usize]
                    .push((i as u32, j as u32, k));
            }
        }
        let fact: Vec<f64> = exps
            .iter()
            .map(|e| e.iter().map(|&k| factorial(k)).product())
            .collect();
        VarTable {
            dim,
            ord,
            exps,
            deg,
            shift_up,
            pair_buckets,
            fact,
        }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn bucket(&self, da: u8, db: u8) -> &[(u32, u32, u32)] {
        &self.pair_buckets[da as usize * (self.ord as usize + 1) + db as usize]
    }
}

fn push_compositions(dim: usize, left: u8, cur: &mut Vec<u8>, pos: usize, out: &mut Vec<Vec<u8>>) {
    if pos == dim - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        push_compositions(dim, left - k, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

fn factorial(k: u8) -> f64 {
    (1..=k as u64).map(|v| v as f64).product()
}

/// Shared coefficient layout for jets over an n-dimensional chart with the
/// given truncation budgets. Obtain through [`JetSpace::get`]; spaces are
/// cached globally because table construction is not free.
pub struct JetSpace {
    n: usize,
    h_ord: u8,
    v_ord: u8,
    xt: VarTable,
    yt: VarTable,
}

impl JetSpace {
    pub fn get(n: usize, h_ord: u8, v_ord: u8) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u8, u8), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((n, h_ord, v_ord))
            .or_insert_with(|| {
                Arc::new(JetSpace {
                    n,
                    h_ord,
                    v_ord,
                    xt: VarTable::new(n, h_ord),
                    yt: VarTable::new(n, v_ord),
                })
            })
            .clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h_ord(&self) -> u8 {
        self.h_ord
    }

    pub fn v_ord(&self) -> u8 {
        self.v_ord
    }

    fn size(&self) -> usize {
        self.xt.len() * self.yt.len()
    }

    fn same_as(&self, other: &JetSpace) -> bool {
        self.n == other.n && self.h_ord == other.h_ord && self.v_ord == other.v_ord
    }
}

/// Which variable group a chart coordinate belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X(usize),
    Y(usize),
}

#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    /// Coefficient at x-monomial ix, y-monomial iy lives at ix * ny + iy.
    c: Vec<f64>,
    h_valid: u8,
    v_valid: u8,
    /// True when the function is exactly a polynomial in y within the table.
    y_exact: bool,
    /// Highest x/y degree with a (possibly) nonzero coefficient.
    max_xdeg: u8,
    max_ydeg: u8,
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, v: f64) -> Jet {
        let mut c = vec![0.0; space.size()];
        c[0] = v;
        Jet {
            space: space.clone(),
            c,
            h_valid: space.h_ord,
            v_valid: space.v_ord,
            y_exact: true,
            max_xdeg: 0,
            max_ydeg: 0,
        }
    }

    /// The chart coordinate as a jet: value plus unit linear coefficient.
    pub fn variable(space: &Arc<JetSpace>, var: Var, value: f64) -> Jet {
        let mut j = Jet::constant(space, value);
        match var {
            Var::X(i) => {
                assert!(i < space.n);
                if space.h_ord >= 1 {
                    let xi = space.xt.shift_up[i] as usize; // shift of monomial 0 by e_i
                    j.c[xi * space.yt.len()] = 1.0;
                    j.max_xdeg = 1;
                }
                // h_ord = 0 truncates the linear term; the constant part is
                // still the correct 0-th order jet.
            }
            Var::Y(i) => {
                assert!(i < space.n);
                if space.v_ord >= 1 {
                    let yi = space.yt.shift_up[i] as usize;
                    j.c[yi] = 1.0;
                    j.max_ydeg = 1;
                }
            }
        }
        j
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn validity(&self) -> (u8, u8) {
        (self.h_valid, self.v_valid)
    }

    pub fn is_y_exact(&self) -> bool {
        self.y_exact
    }

    /// Scalar part.
    pub fn val(&self) -> f64 {
        self.c[0]
    }

    /// Table position for the exponent pair, `None` when the coefficient
    /// is an exact zero beyond a polynomial's support.
    fn locate(&self, ax: &[u8], by: &[u8]) -> Result<Option<(usize, usize)>> {
        let (dx, dy) = (ax.iter().sum::<u8>(), by.iter().sum::<u8>());
        if dx > self.h_valid || (dy > self.v_valid && !self.y_exact) {
            return Err(Error::Budget {
                needed_h: dx,
                needed_v: dy,
                have_h: self.h_valid,
                have_v: self.v_valid,
            });
        }
        if dy > self.space.v_ord {
            return Ok(None);
        }
        let xi = find_mono(&self.space.xt, ax)?;
        let yi = find_mono(&self.space.yt, by)?;
        let v = self.c[xi * self.space.yt.len() + yi];
        if !v.is_finite() {
            return Err(Error::NonFinite {
                index: format!("x^{ax:?} y^{by:?}"),
            });
        }
        Ok(Some((xi, yi)))
    }

    /// Raw Taylor coefficient for exponent vectors `ax` (base) and `by`
    /// (vertical). Errors when outside the validity box.
    pub fn coeff(&self, ax: &[u8], by: &[u8]) -> Result<f64> {
        Ok(match self.locate(ax, by)? {
            Some((xi, yi)) => self.c[xi * self.space.yt.len() + yi],
            None => 0.0,
        })
    }

    /// Partial derivative value d^ax_x d^by_y f = coeff * ax! * by!.
    pub fn partial(&self, ax: &[u8], by: &[u8]) -> Result<f64> {
        Ok(match self.locate(ax, by)? {
            Some((xi, yi)) => {
                self.c[xi * self.space.yt.len() + yi]
                    * self.space.xt.fact[xi]
                    * self.space.yt.fact[yi]
            }
            None => 0.0,
        })
    }

    /// First failing (non-finite) coefficient inside the validity box.
    pub fn check_finite(&self) -> Result<()> {
        let ny = self.space.yt.len();
        for (pos, v) in self.c.iter().enumerate() {
            if !v.is_finite() {
                let (xi, yi) = (pos / ny, pos % ny);
                if self.space.xt.deg[xi] <= self.h_valid && self.space.yt.deg[yi] <= self.v_valid {
                    return Err(Error::NonFinite {
                        index: format!(
                            "x^{:?} y^{:?}",
                            self.space.xt.exps[xi], self.space.yt.exps[yi]
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn assert_same_space(&self, other: &Jet) {
        assert!(
            self.space.same_as(&other.space),
            "jet operands from different spaces"
        );
    }

    /// Zero coefficients outside the validity box and refresh support.
    fn mask_and_rescan(&mut self) {
        let ny = self.space.yt.len();
        let keep_v = if self.y_exact {
            self.space.v_ord
        } else {
            self.v_valid
        };
        let (mut mx, mut my) = (0u8, 0u8);
        for pos in 0..self.c.len() {
            let (xi, yi) = (pos / ny, pos % ny);
            let (dx, dy) = (self.space.xt.deg[xi], self.space.yt.deg[yi]);
            if dx > self.h_valid || dy > keep_v {
                self.c[pos] = 0.0;
            } else if self.c[pos] != 0.0 {
                mx = mx.max(dx);
                my = my.max(dy);
            }
        }
        self.max_xdeg = mx;
        self.max_ydeg = my;
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.assert_same_space(other);
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o += v;
        }
        out.h_valid = self.h_valid.min(other.h_valid);
        out.v_valid = self.v_valid.min(other.v_valid);
        out.y_exact = self.y_exact && other.y_exact;
        out.mask_and_rescan();
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.assert_same_space(other);
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o -= v;
        }
        out.h_valid = self.h_valid.min(other.h_valid);
        out.v_valid = self.v_valid.min(other.v_valid);
        out.y_exact = self.y_exact && other.y_exact;
        out.mask_and_rescan();
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = self.clone();
        for o in out.c.iter_mut() {
            *o *= s;
        }
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        self.assert_same_space(other);
        let sp = &self.space;
        let ny = sp.yt.len();
        let mut c = vec![0.0; sp.size()];
        for dxa in 0..=self.max_xdeg.min(sp.h_ord) {
            for dxb in 0..=other.max_xdeg.min(sp.h_ord - dxa) {
                for &(xi, xj, xk) in sp.xt.bucket(dxa, dxb) {
                    let arow = &self.c[xi as usize * ny..(xi as usize + 1) * ny];
                    let brow = &other.c[xj as usize * ny..(xj as usize + 1) * ny];
                    let base = xk as usize * ny;
                    for dya in 0..=self.max_ydeg.min(sp.v_ord) {
                        for dyb in 0..=other.max_ydeg.min(sp.v_ord - dya) {
                            for &(yi, yj, yk) in sp.yt.bucket(dya, dyb) {
                                c[base + yk as usize] +=
                                    arow[yi as usize] * brow[yj as usize];
                            }
                        }
                    }
                }
            }
        }
        let y_exact = self.y_exact
            && other.y_exact
            && self.max_ydeg + other.max_ydeg <= sp.v_ord;
        let mut out = Jet {
            space: sp.clone(),
            c,
            h_valid: self.h_valid.min(other.h_valid),
            v_valid: if y_exact {
                sp.v_ord
            } else {
                self.v_valid.min(other.v_valid)
            },
            y_exact,
            max_xdeg: 0,
            max_ydeg: 0,
        };
        out.mask_and_rescan();
        out
    }

    /// Multiply by the chart coordinate `var` whose value at the expansion
    /// point is `value`. Cheaper than building the variable jet and using
    /// `mul`, and loses no validity (truncation only at the table edge).
    pub fn mul_var(&self, var: Var, value: f64) -> Jet {
        let sp = &self.space;
        let ny = sp.yt.len();
        let mut out = self.scale(value);
        match var {
            Var::X(v) => {
                for xi in 0..sp.xt.len() {
                    let t = sp.xt.shift_up[xi * sp.xt.dim + v];
                    if t == NO_SLOT {
                        continue;
                    }
                    for yi in 0..ny {
                        out.c[t as usize * ny + yi] += self.c[xi * ny + yi];
                    }
                }
            }
            Var::Y(v) => {
                let shift = &sp.yt.shift_up;
                for xi in 0..sp.xt.len() {
                    let row = xi * ny;
                    for yi in 0..ny {
                        let t = shift[yi * sp.yt.dim + v];
                        if t != NO_SLOT {
                            out.c[row + t as usize] += self.c[row + yi];
                        }
                    }
                }
                out.y_exact = self.y_exact && self.max_ydeg + 1 <= sp.v_ord;
                if !out.y_exact {
                    out.v_valid = self.v_valid;
                }
            }
        }
        out.h_valid = self.h_valid;
        if matches!(var, Var::X(_)) {
            out.y_exact = self.y_exact;
            out.v_valid = self.v_valid;
        }
        out.mask_and_rescan();
        out
    }

    /// Base partial derivative d/dx^v as a jet.
    pub fn dx(&self, v: usize) -> Result<Jet> {
        if self.h_valid == 0 {
            return Err(Error::Budget {
                needed_h: 1,
                needed_v: 0,
                have_h: 0,
                have_v: self.v_valid,
            });
        }
        let sp = &self.space;
        let ny = sp.yt.len();
        let mut c = vec![0.0; sp.size()];
        for xi in 0..sp.xt.len() {
            let t = sp.xt.shift_up[xi * sp.xt.dim + v];
            if t == NO_SLOT {
                continue;
            }
            let mult = (sp.xt.exps[xi][v] + 1) as f64;
            for yi in 0..ny {
                c[xi * ny + yi] = self.c[t as usize * ny + yi] * mult;
            }
        }
        let mut out = Jet {
            space: sp.clone(),
            c,
            h_valid: self.h_valid - 1,
            v_valid: self.v_valid,
            y_exact: self.y_exact,
            max_xdeg: 0,
            max_ydeg: 0,
        };
        out.mask_and_rescan();
        Ok(out)
    }

    /// Vertical partial derivative d/dy^v as a jet.
    pub fn dy(&self, v: usize) -> Result<Jet> {
        if self.v_valid == 0 && !self.y_exact {
            return Err(Error::Budget {
                needed_h: 0,
                needed_v: 1,
                have_h: self.h_valid,
                have_v: 0,
            });
        }
        let sp = &self.space;
        let ny = sp.yt.len();
        let mut c = vec![0.0; sp.size()];
        for yi in 0..ny {
            let t = sp.yt.shift_up[yi * sp.yt.dim + v];
            if t == NO_SLOT {
                continue;
            }
            let mult = (sp.yt.exps[yi][v] + 1) as f64;
            for xi in 0..sp.xt.len() {
                c[xi * ny + yi] = self.c[xi * ny + t as usize] * mult;
            }
        }
        let mut out = Jet {
            space: sp.clone(),
            c,
            h_valid: self.h_valid,
            v_valid: if self.y_exact {
                sp.v_ord
            } else {
                self.v_valid - 1
            },
            y_exact: self.y_exact,
            max_xdeg: 0,
            max_ydeg: 0,
        };
        out.mask_and_rescan();
        Ok(out)
    }

    /// Compose with a univariate analytic function given by its Taylor
    /// coefficients at the jet's value: `taylor[k] = f^(k)(u0) / k!`.
    /// The caller supplies enough coefficients (h_valid + v budget + 1).
    fn compose(&self, taylor: &[f64]) -> Jet {
        let sp = &self.space;
        // Nilpotent part: self minus its value.
        let mut nil = self.clone();
        nil.c[0] = 0.0;
        nil.mask_and_rescan();
        let mut out = Jet::constant(sp, taylor[taylor.len() - 1]);
        for k in (0..taylor.len() - 1).rev() {
            out = out.mul(&nil);
            out.c[0] += taylor[k];
        }
        // Composition is analytic, not polynomial, in y (unless the
        // argument was y-independent).
        let arg_y_independent = self.max_ydeg == 0 && self.y_exact;
        out.h_valid = self.h_valid;
        out.y_exact = arg_y_independent;
        out.v_valid = if arg_y_independent {
            sp.v_ord
        } else {
            self.v_valid
        };
        out.mask_and_rescan();
        out
    }

    /// Number of Taylor coefficients a univariate composition needs so that
    /// every coefficient inside the result's validity box is exact. The
    /// value-free part of the argument is nilpotent of that index.
    fn taylor_len(&self) -> usize {
        let v = match (self.y_exact, self.max_ydeg) {
            (true, 0) => 0, // y-independent argument
            (true, _) => self.space.v_ord,
            (false, _) => self.v_valid,
        };
        (self.h_valid + v) as usize + 1
    }

    pub fn recip_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let mut t = Vec::with_capacity(k);
        let mut cur = 1.0 / u0;
        for _ in 0..k {
            t.push(cur);
            cur = -cur / u0;
        }
        self.compose(&t)
    }

    pub fn sqrt_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let root = u0.sqrt(); // NaN for negative values poisons all coefficients
        let mut t = Vec::with_capacity(k);
        let mut coef = root;
        for j in 0..k {
            t.push(coef);
            let jf = j as f64;
            coef *= (0.5 - jf) / (jf + 1.0) / u0;
        }
        self.compose(&t)
    }

    pub fn powf_jet(&self, r: f64) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let mut t = Vec::with_capacity(k);
        let mut coef = u0.powf(r);
        for j in 0..k {
            t.push(coef);
            let jf = j as f64;
            coef *= (r - jf) / (jf + 1.0) / u0;
        }
        self.compose(&t)
    }

    pub fn exp_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let e = u0.exp();
        let mut t = Vec::with_capacity(k);
        let mut coef = e;
        for j in 0..k {
            t.push(coef);
            coef /= (j + 1) as f64;
        }
        self.compose(&t)
    }

    pub fn ln_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let mut t = Vec::with_capacity(k);
        t.push(u0.ln()); // NaN for u0 <= 0
        let mut pw = 1.0;
        for j in 1..k {
            pw /= u0;
            t.push(-(-1.0f64).powi(j as i32) * pw / j as f64);
        }
        self.compose(&t)
    }

    pub fn sin_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let (s, c) = u0.sin_cos();
        let cycle = [s, c, -s, -c];
        let mut t = Vec::with_capacity(k);
        let mut fact = 1.0;
        for j in 0..k {
            if j > 0 {
                fact *= j as f64;
            }
            t.push(cycle[j % 4] / fact);
        }
        self.compose(&t)
    }

    pub fn cos_jet(&self) -> Jet {
        let u0 = self.val();
        let k = self.taylor_len();
        let (s, c) = u0.sin_cos();
        let cycle = [c, -s, -c, s];
        let mut t = Vec::with_capacity(k);
        let mut fact = 1.0;
        for j in 0..k {
            if j > 0 {
                fact *= j as f64;
            }
            t.push(cycle[j % 4] / fact);
        }
        self.compose(&t)
    }
}

fn find_mono(t: &VarTable, e: &[u8]) -> Result<usize> {
    assert_eq!(e.len(), t.dim);
    // Tables are small; linear scan keeps VarTable free of a second map.
    t.exps
        .iter()
        .position(|m| m == e)
        .ok_or_else(|| Error::Eval(format!("monomial {e:?} outside table of order {}", t.ord)))
}

// Operator and Num plumbing.

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::add(&self, &rhs)
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::sub(&self, &rhs)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet::mul(&self, &rhs)
    }
}

impl std::ops::Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        Jet::mul(&self, &rhs.recip_jet())
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Num for Jet {
    fn lift(&self, c: f64) -> Self {
        Jet::constant(&self.space, c)
    }

    fn value(&self) -> f64 {
        self.val()
    }

    fn sqrt(&self) -> Self {
        self.sqrt_jet()
    }

    fn exp(&self) -> Self {
        self.exp_jet()
    }

    fn ln(&self) -> Self {
        self.ln_jet()
    }

    fn sin(&self) -> Self {
        self.sin_jet()
    }

    fn cos(&self) -> Self {
        self.cos_jet()
    }

    fn abs(&self) -> Self {
        if self.val() < 0.0 {
            self.scale(-1.0)
        } else {
            self.clone()
        }
    }

    fn powf(&self, r: f64) -> Self {
        self.powf_jet(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space2(h: u8, v: u8) -> Arc<JetSpace> {
        JetSpace::get(2, h, v)
    }

    /// Compare coefficients inside the intersection of both validity boxes.
    fn assert_agree(a: &Jet, b: &Jet, tol: f64) {
        let sp = &a.space;
        let ny = sp.yt.len();
        let hv = a.h_valid.min(b.h_valid);
        let vv = a.v_valid.min(b.v_valid);
        for pos in 0..a.c.len() {
            let (xi, yi) = (pos / ny, pos % ny);
            if sp.xt.deg[xi] <= hv && sp.yt.deg[yi] <= vv {
                assert!(
                    (a.c[pos] - b.c[pos]).abs() < tol,
                    "coefficient x^{:?} y^{:?}: {} vs {}",
                    sp.xt.exps[xi],
                    sp.yt.exps[yi],
                    a.c[pos],
                    b.c[pos]
                );
            }
        }
    }

    #[test]
    fn table_sizes_and_degrees() {
        let sp = JetSpace::get(4, 2, 6);
        assert_eq!(sp.xt.len(), 15); // C(6,2) over 4 vars
        assert_eq!(sp.yt.len(), 210); // C(10,4)
        assert_eq!(sp.xt.deg[0], 0);
        assert_eq!(*sp.xt.exps.last().unwrap(), vec![0, 0, 0, 2]);
    }

    #[test]
    fn product_coefficients_by_hand() {
        // (1 + x1 + y1) * (1 - x1 + y1) = 1 + 2 y1 + y1^2 - x1^2.
        let sp = space2(2, 2);
        let one = Jet::constant(&sp, 1.0);
        let x1 = Jet::variable(&sp, Var::X(0), 0.0);
        let y1 = Jet::variable(&sp, Var::Y(0), 0.0);
        let a = one.add(&x1).add(&y1);
        let b = one.sub(&x1).add(&y1);
        let p = a.mul(&b);
        assert_eq!(p.coeff(&[0, 0], &[0, 0]).unwrap(), 1.0);
        assert_eq!(p.coeff(&[0, 0], &[1, 0]).unwrap(), 2.0);
        assert_eq!(p.coeff(&[0, 0], &[2, 0]).unwrap(), 1.0);
        assert_eq!(p.coeff(&[2, 0], &[0, 0]).unwrap(), -1.0);
        assert_eq!(p.coeff(&[1, 0], &[0, 0]).unwrap(), 0.0);
        assert_eq!(p.coeff(&[1, 0], &[1, 0]).unwrap(), 0.0);
        assert!(p.is_y_exact());
    }

    #[test]
    fn derivative_of_sin_sum_is_cos() {
        // f = sin(x1 + y1): df/dy1 = cos(x1 + y1); check jets agree.
        let sp = space2(2, 4);
        let x1 = Jet::variable(&sp, Var::X(0), 0.3);
        let y1 = Jet::variable(&sp, Var::Y(0), 0.8);
        let f = x1.clone().add(&y1).sin_jet();
        let df = f.dy(0).unwrap();
        let g = x1.add(&y1).cos_jet();
        assert_agree(&df, &g, 1e-12);
        assert!((df.val() - (0.3f64 + 0.8).cos()).abs() < 1e-14);
        assert!(
            (df.partial(&[1, 0], &[1, 0]).unwrap() - -(0.3f64 + 0.8).cos()).abs() < 1e-13
        );
    }

    #[test]
    fn exp_ln_round_trip() {
        let sp = space2(2, 3);
        let y1 = Jet::variable(&sp, Var::Y(0), 1.7);
        let y2 = Jet::variable(&sp, Var::Y(1), -0.4);
        let f = y1.mul(&y1).add(&y2.mul(&y2)).add(&Jet::constant(&sp, 0.5));
        let g = f.ln_jet().exp_jet();
        for (a, b) in f.c.iter().zip(&g.c) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let sp = space2(1, 4);
        let y1 = Jet::variable(&sp, Var::Y(0), 2.0);
        let x1 = Jet::variable(&sp, Var::X(0), 1.1);
        let f = y1.mul(&y1).add(&x1.mul(&y1)); // positive at the point
        let r = f.sqrt_jet();
        let back = r.mul(&r);
        for (a, b) in f.c.iter().zip(&back.c) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let sp = space2(1, 2);
        let y1 = Jet::variable(&sp, Var::Y(0), 0.9);
        let f = y1.sqrt_jet(); // analytic, not polynomial: derivatives cost budget
        let d1 = f.dy(0).unwrap();
        let d2 = d1.dy(0).unwrap();
        assert!(matches!(d2.dy(0), Err(Error::Budget { .. })));
        assert!(matches!(
            f.coeff(&[2, 0], &[0, 0]),
            Err(Error::Budget { needed_h: 2, .. })
        ));
    }

    #[test]
    fn polynomials_do_not_burn_vertical_budget() {
        // Quadratic in y: four vertical derivatives still fine, all zero
        // beyond degree 2, no budget error.
        let sp = space2(1, 3);
        let y1 = Jet::variable(&sp, Var::Y(0), 0.3);
        let q = y1.mul(&y1);
        let mut d = q;
        for _ in 0..4 {
            d = d.dy(0).unwrap();
        }
        assert_eq!(d.val(), 0.0);
    }

    #[test]
    fn poison_surfaces_at_extraction() {
        let sp = space2(1, 2);
        let y1 = Jet::variable(&sp, Var::Y(0), -1.5);
        let bad = y1.sqrt_jet();
        assert!(matches!(bad.check_finite(), Err(Error::NonFinite { .. })));
        assert!(matches!(
            bad.coeff(&[0, 0], &[0, 0]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn mul_var_matches_full_multiplication() {
        let sp = space2(2, 3);
        let y1 = Jet::variable(&sp, Var::Y(0), 0.7);
        let y2 = Jet::variable(&sp, Var::Y(1), -0.2);
        let x1 = Jet::variable(&sp, Var::X(0), 1.3);
        let f = y1.mul(&y2).add(&x1.sin_jet());
        let a = f.mul(&y2);
        let b = f.mul_var(Var::Y(1), -0.2);
        for (u, v) in a.c.iter().zip(&b.c) {
            assert!((u - v).abs() < 1e-13);
        }
        let c = f.mul(&x1);
        let d = f.mul_var(Var::X(0), 1.3);
        for (u, v) in c.c.iter().zip(&d.c) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn powf_matches_sqrt_chain() {
        let sp = space2(1, 4);
        let y1 = Jet::variable(&sp, Var::Y(0), 1.9);
        let f = y1.mul(&y1).add(&Jet::constant(&sp, 0.3));
        let a = f.powf_jet(1.5);
        let b = f.sqrt_jet().mul(&f);
        for (u, v) in a.c.iter().zip(&b.c) {
            assert!((u - v).abs() < 1e-11, "{u} vs {v}");
        }
    }

    #[test]
    fn homogeneity_seen_by_scaling_the_fiber_point() {
        // L = (y1^2 + y2^2) evaluated at lambda y has value lambda^2 L and
        // first vertical coefficients scaled by lambda.
        let sp = space2(1, 2);
        let mk = |y: [f64; 2]| {
            let y1 = Jet::variable(&sp, Var::Y(0), y[0]);
            let y2 = Jet::variable(&sp, Var::Y(1), y[1]);
            y1.mul(&y1).add(&y2.mul(&y2))
        };
        let l1 = mk([0.6, -0.8]);
        let l2 = mk([1.2, -1.6]);
        assert!((l2.val() - 4.0 * l1.val()).abs() < 1e-14);
        assert!(
            (l2.partial(&[0, 0], &[1, 0]).unwrap()
                - 2.0 * l1.partial(&[0, 0], &[1, 0]).unwrap())
            .abs()
                < 1e-14
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Leibniz rule: d(f g) = df g + f dg, on random cubic fiber polynomials.
        #[test]
        fn leibniz_rule(coeffs_f in prop::collection::vec(-2.0f64..2.0, 6),
                        coeffs_g in prop::collection::vec(-2.0f64..2.0, 6),
                        y0 in -1.5f64..1.5, y1 in -1.5f64..1.5) {
            let sp = space2(1, 4);
            let build = |c: &[f64]| {
                let a = Jet::variable(&sp, Var::Y(0), y0);
                let b = Jet::variable(&sp, Var::Y(1), y1);
                // c0 + c1 a + c2 b + c3 a b + c4 a^2 + c5 b^3
                Jet::constant(&sp, c[0])
                    .add(&a.scale(c[1]))
                    .add(&b.scale(c[2]))
                    .add(&a.mul(&b).scale(c[3]))
                    .add(&a.mul(&a).scale(c[4]))
                    .add(&b.mul(&b).mul(&b).scale(c[5]))
            };
            let f = build(&coeffs_f);
            let g = build(&coeffs_g);
            let lhs = f.mul(&g).dy(0).unwrap();
            let rhs = f.dy(0).unwrap().mul(&g).add(&f.mul(&g.dy(0).unwrap()));
            let hv = lhs.h_valid.min(rhs.h_valid);
            let vv = lhs.v_valid.min(rhs.v_valid);
            let ny = sp.yt.len();
            for pos in 0..lhs.c.len() {
                let (xi, yi) = (pos / ny, pos % ny);
                if sp.xt.deg[xi] <= hv && sp.yt.deg[yi] <= vv {
                    prop_assert!((lhs.c[pos] - rhs.c[pos]).abs() < 1e-10);
                }
            }
        }
    }
}
