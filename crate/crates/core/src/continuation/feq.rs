//! The functional equation
//!
//! ```text
//! (1 - N b^{-z}) K(z) = Σ_{a∈A₁} a^{-z} + b^{-z} Σ_{m≥1} (-1)^m (z)_m/m! · (γ_m/b^m) · K(z+m)
//! ```
//!
//! and its analogue for `H` (seeds `(a+1)^{-z}`, `γ'_m`, no sign). Values at
//! `z + depth` and beyond come from direct summation; the table is then
//! unwound one unit at a time down to `z`.

use num_complex::Complex64;

use super::geo::seed_sum;
use super::{direct, geometric_tail, EvalResult, Evaluator, Method, StopRule};
use crate::coeffs::MAX_ORDER;
use crate::digitsys::DigitSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Series {
    K,
    H,
}

impl Series {
    fn shift(self) -> u32 {
        match self {
            Series::K => 0,
            Series::H => 1,
        }
    }
}

/// Smallest depth that lands `s + depth` in the half-plane `Re > s₀ + 1`.
pub(super) fn required_depth(ds: &DigitSystem, s: Complex64) -> i64 {
    ((ds.s0() + 1.0 - s.re).ceil() as i64).max(0)
}

pub(super) fn default_depth(ds: &DigitSystem, s: Complex64) -> i64 {
    ((ds.s0() + 1.0 - s.re).ceil() as i64 + 2).max(0)
}

struct Table<'e, 'a> {
    ev: &'e Evaluator<'a>,
    s: Complex64,
    depth: usize,
    tol: f64,
    series: Series,
    // (value, error) at offsets 0, 1, 2, ...
    values: Vec<Option<(Complex64, f64)>>,
    terms: usize,
}

impl Table<'_, '_> {
    fn get(&mut self, j: usize) -> Result<(Complex64, f64)> {
        if j >= self.values.len() {
            self.values.resize(j + 1, None);
        }
        if let Some(v) = self.values[j] {
            return Ok(v);
        }
        debug_assert!(j >= self.depth);
        let z = self.s + j as f64;
        let r = direct::sum_to_tolerance(self.ev, z, self.tol, self.series.shift())?;
        self.terms += r.terms_used;
        let v = (r.value, r.tail_estimate);
        self.values[j] = Some(v);
        Ok(v)
    }
}

/// Ratio base of the inner series: `γ̃_m·K(z+m)` shrinks like `base^m`.
fn inner_ratio_base(ds: &DigitSystem, series: Series) -> f64 {
    let b = f64::from(ds.base());
    let a1 = f64::from(ds.nonzero_digits()[0]);
    match series {
        Series::K => f64::from(ds.f_max()) / b / a1,
        Series::H => {
            let amin = f64::from(ds.digits()[0]);
            (b - 1.0 - amin) / b / (a1 + 1.0)
        }
    }
}

pub(super) fn eval(
    ev: &Evaluator<'_>,
    s: Complex64,
    tol: f64,
    depth: Option<i64>,
    series: Series,
) -> Result<EvalResult> {
    let ds = ev.ds;
    let depth = depth.unwrap_or_else(|| default_depth(ds, s)).max(0) as usize;
    let gamma = match series {
        Series::K => ds.scaled_power_sums(MAX_ORDER),
        Series::H => ds.scaled_power_sums_prime(MAX_ORDER),
    };
    let sign = match series {
        Series::K => -1.0,
        Series::H => 1.0,
    };
    let base = inner_ratio_base(ds, series);
    let mut table = Table {
        ev,
        s,
        depth,
        tol: (tol * 1e-3).max(1e-16),
        series,
        values: vec![None; depth + 1],
        terms: 0,
    };
    if depth == 0 {
        table.get(0)?;
    }
    for j in (0..depth).rev() {
        let z = s + j as f64;
        let bz = (-z * ds.ln_base()).exp();
        let denom = Complex64::new(1.0, 0.0) - f64::from(ds.n_total()) * bz;
        let mut acc = seed_sum(ds, z, series.shift());
        let mut abs_sum = acc.norm();
        let mut propagated = 0.0;
        let mut coef = Complex64::new(1.0, 0.0);
        let mut rule = StopRule::default();
        let mut truncation = 0.0;
        for m in 1..=MAX_ORDER {
            coef *= sign * (z + (m - 1) as f64) / m as f64;
            if gamma[m] == 0.0 {
                // A = {b-1}: every γ'_m vanishes
                break;
            }
            let c = bz * coef * gamma[m];
            let (k, err) = table.get(j + m)?;
            let term = c * k;
            acc += term;
            abs_sum += term.norm();
            propagated += c.norm() * err;
            let q = base * (z + m as f64).norm() / (m as f64 + 1.0);
            let threshold = tol * 1e-2 * acc.norm().max(1.0);
            if rule.push(term.norm(), threshold, q < 0.9) {
                truncation = geometric_tail(rule.recent_max(), q * 1.2);
                break;
            }
            if m == MAX_ORDER {
                truncation = geometric_tail(rule.recent_max(), q * 1.2);
            }
        }
        let value = acc / denom;
        if !value.is_finite() {
            return Err(Error::Overflow(format!("functional equation at s = {z}")));
        }
        let rounding = 8.0 * f64::EPSILON * abs_sum;
        let err = (truncation + propagated + rounding) / denom.norm() + 2.0 * f64::EPSILON * value.norm();
        table.values[j] = Some((value, err));
    }
    let (value, err) = table.values[0].expect("offset 0 computed");
    Ok(EvalResult {
        value,
        tail_estimate: err,
        terms_used: table.terms,
        method: Method::FunctionalEq,
        nearest_pole: None,
    })
}

/// Terms `b^{-s}(s)_m/m!·(γ'_m/b^m)·H(s+m)`, `m = 1..=count`, of the series
/// defining `H(s)` through its functional equation.
pub fn h_series_terms(ds: &DigitSystem, s: Complex64, count: usize, tol: f64) -> Result<Vec<Complex64>> {
    let ev = Evaluator::new(ds);
    let gamma = ds.scaled_power_sums_prime(count);
    let bz = (-s * ds.ln_base()).exp();
    let mut coef = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(count);
    for m in 1..=count {
        coef *= (s + (m - 1) as f64) / m as f64;
        let h = ev.h(s + m as f64, tol, None)?.value;
        out.push(bz * coef * gamma[m] * h);
    }
    Ok(out)
}
