//! Adaptive Gauss–Legendre quadrature on 7-point panels.
//!
//! Each panel is integrated once whole and once as two halves; the difference
//! is the error estimate. Panels that miss their share of the tolerance are
//! bisected recursively.

use std::ops::{Add, Mul, Sub};

use crate::geometry::Point2;

/// Values that can be integrated: scalars and planar vectors.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Point2 {
    fn zero() -> Self {
        Point2::ZERO
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

// Nodes and weights on [-1, 1], symmetric pairs plus the centre node.
const GL7_NODES: [f64; 3] = [
    0.949_107_912_342_758_5,
    0.741_531_185_599_394_4,
    0.405_845_151_377_397_2,
];
const GL7_WEIGHTS: [f64; 3] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
];
const GL7_CENTRE_WEIGHT: f64 = 0.417_959_183_673_469_4;

/// Hard cap on bisection depth; reaching it is a convergence failure.
pub const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    /// Same bound used as both absolute and relative tolerance.
    pub const fn uniform(tol: f64) -> Self {
        Tolerance { abs: tol, rel: tol }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::uniform(1e-8)
    }
}

/// The panel where bisection ran out of depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonConvergence {
    pub a: f64,
    pub b: f64,
}

pub fn gauss_legendre_7<T: Integrand>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = f(mid) * GL7_CENTRE_WEIGHT;
    for (x, w) in GL7_NODES.iter().zip(GL7_WEIGHTS) {
        acc = acc + (f(mid - half * x) + f(mid + half * x)) * w;
    }
    acc * half
}

/// Integrates `f` over `[a, b]`.
///
/// The target is `tol.abs + tol.rel * |I|`, with `|I|` taken from a first
/// whole-interval estimate and the absolute budget halved at every bisection.
pub fn integrate<T: Integrand>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<T, NonConvergence> {
    if a == b {
        return Ok(T::zero());
    }
    let whole = gauss_legendre_7(&f, a, b);
    let budget = tol.abs + tol.rel * whole.magnitude();
    refine(&f, a, b, whole, budget, 0)
}

fn refine<T: Integrand>(
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    whole: T,
    budget: f64,
    depth: u32,
) -> Result<T, NonConvergence> {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre_7(f, a, mid);
    let right = gauss_legendre_7(f, mid, b);
    let split = left + right;
    if (split - whole).magnitude() <= budget {
        return Ok(split);
    }
    if depth >= MAX_DEPTH || mid <= a || mid >= b {
        return Err(NonConvergence { a, b });
    }
    let l = refine(f, a, mid, left, 0.5 * budget, depth + 1)?;
    let r = refine(f, mid, b, right, 0.5 * budget, depth + 1)?;
    Ok(l + r)
}

/// Integrates over `[a, b]` split at the given interior points.
///
/// Points outside `(a, b)` are ignored; the pieces are integrated left to right.
pub fn integrate_split<T: Integrand>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    splits: &[f64],
    tol: Tolerance,
) -> Result<T, NonConvergence> {
    let mut knots: Vec<f64> = splits.iter().copied().filter(|&t| t > a && t < b).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut acc = T::zero();
    let mut lo = a;
    for hi in knots.into_iter().chain(std::iter::once(b)) {
        acc = acc + integrate(&f, lo, hi, tol)?;
        lo = hi;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = 2.0 * GL7_WEIGHTS.iter().sum::<f64>() + GL7_CENTRE_WEIGHT;
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_degree_13_polynomials() {
        let v = gauss_legendre_7(&|x: f64| x.powi(13) + x.powi(12), -1.0, 1.0);
        assert!((v - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_integrals() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, Tolerance::uniform(1e-12)).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate(|x: f64| (-x * x).exp(), -5.0, 5.0, Tolerance::uniform(1e-12)).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn kink_is_exact_when_split() {
        let f = |x: f64| (x - 0.3).abs();
        let v = integrate_split(f, 0.0, 1.0, &[0.3], Tolerance::uniform(1e-14)).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-15);
    }

    #[test]
    fn vector_valued() {
        let v = integrate(|t: f64| Point2::new(t, 1.0), 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((v.x - 2.0).abs() < 1e-14 && (v.y - 2.0).abs() < 1e-14);
    }

    #[test]
    fn discontinuity_without_split_fails_at_tight_tolerance() {
        let f = |x: f64| if x < 1.0 / 3.0 { 1.0 } else { 0.0 };
        let r = integrate(f, 0.0, 1.0, Tolerance { abs: 1e-300, rel: 0.0 });
        assert!(r.is_err());
    }
}
