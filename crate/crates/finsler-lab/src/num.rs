//! Scalar abstraction so that every metric and field formula is written
//! once and evaluated both with plain `f64` (for oracles and fast paths)
//! and with truncated Taylor jets (for derivatives).

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Operations a formula is allowed to use. All of them are closed under
/// truncated Taylor arithmetic.
pub trait Num:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Constant in the same algebra as `self` (a jet needs its space).
    fn lift(&self, c: f64) -> Self;

    /// Scalar part.
    fn value(&self) -> f64;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;

    /// |self|, branching on the sign of the scalar part.
    fn abs(&self) -> Self;

    /// Integer power by repeated multiplication (exact for jets).
    fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return self.lift(1.0);
        }
        let mut base = if k > 0 {
            self.clone()
        } else {
            self.lift(1.0) / self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a * base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc.unwrap()
    }

    /// Real power with fractional exponent.
    fn powf(&self, r: f64) -> Self;
}

impl Num for f64 {
    fn lift(&self, c: f64) -> Self {
        c
    }

    fn value(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn powf(&self, r: f64) -> Self {
        f64::powf(*self, r)
    }
}

/// Sum of `it`, with `zero` taken from an exemplar.
pub fn sum<T: Num>(exemplar: &T, it: impl IntoIterator<Item = T>) -> T {
    let mut acc = exemplar.lift(0.0);
    for t in it {
        acc = acc + t;
    }
    acc
}
