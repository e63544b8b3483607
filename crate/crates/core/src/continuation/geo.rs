//! Level-2 geometric series:
//!
//! ```text
//! α(s)·(K(s) - Σ_{a∈A₁} a^{-s}) = Σ_m (-1)^m (s)_m/m! · v_m(s) · Σ_{a₁∈A₁, a₂∈A} (a₁b + a₂)^{-s-m}
//! ```
//!
//! The right-hand side is entire; its terms decay like `(λ/b)^m`.

use num_complex::Complex64;
use num_traits::Zero;

use super::{geometric_tail, EvalResult, Evaluator, Method, StopRule};
use crate::coeffs::{alpha, v_coeffs_inner, BinomialTable, MAX_ORDER};
use crate::digitsys::DigitSystem;
use crate::error::{Error, Result};
use crate::settings::Settings;
use crate::util::CompensatedSum;

/// The entire numerator together with its error diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct EntireValue {
    pub value: Complex64,
    pub truncation: f64,
    pub rounding: f64,
    pub terms: usize,
}

/// Admissible integers of length two, as `(n^{-s}, 1/n)` pairs.
fn level_two(ds: &DigitSystem, s: Complex64) -> Vec<(Complex64, f64)> {
    let b = f64::from(ds.base());
    let mut out = Vec::new();
    for &a1 in ds.nonzero_digits() {
        for &a2 in ds.digits() {
            let n = f64::from(a1) * b + f64::from(a2);
            out.push(((-s * n.ln()).exp(), 1.0 / n));
        }
    }
    out
}

fn smallest_level_two(ds: &DigitSystem) -> f64 {
    f64::from(ds.nonzero_digits()[0]) * f64::from(ds.base()) + f64::from(ds.digits()[0])
}

fn initial_order(ds: &DigitSystem, s: Complex64, tol: f64) -> usize {
    let q = ds.lambda() / smallest_level_two(ds);
    let m = (tol.max(1e-300) * 1e-2).ln() / q.ln() + 2.0 * s.norm() + 30.0;
    (m.ceil() as usize).clamp(40, MAX_ORDER)
}

/// Sums the series for the entire numerator `F(s)`.
///
/// The loop stops once five consecutive terms fall below
/// `tol · max(1, |partial| / scale) · scale`, where `scale` is the size of
/// the divisor applied afterwards (`|α(s)|` for values, `|α'|` for residues).
pub(crate) fn entire_numerator(
    ds: &DigitSystem,
    s: Complex64,
    tol: f64,
    scale: f64,
    offset: f64,
    delta_pole: f64,
) -> Result<EntireValue> {
    let n_min = smallest_level_two(ds);
    // Near s = -m the Pochhammer factors and the vanishing α make early terms
    // small or exactly zero, so stopping is only allowed past that region.
    let min_terms = (-s.re).max(0.0).ceil() as usize + 2 + StopRule::RUN;
    let mut order = initial_order(ds, s, tol).max(2 * min_terms).min(MAX_ORDER);
    loop {
        let binom = BinomialTable::new(order);
        let gamma = ds.scaled_power_sums(order);
        let v = v_coeffs_inner(ds, s, order, delta_pole, &binom, &gamma);
        let mut pts = level_two(ds, s);
        let mut acc = CompensatedSum::default();
        let mut abs_sum = 0.0;
        let mut coef = Complex64::new(1.0, 0.0);
        let mut rule = StopRule::default();
        for m in 0..=order {
            if m > 0 {
                coef *= -(s + (m - 1) as f64) / m as f64;
            }
            let mut level = Complex64::zero();
            for (z, inv) in pts.iter_mut() {
                level += *z;
                *z *= *inv;
            }
            let term = coef * v.values[m] * level;
            acc.add(term);
            abs_sum += term.norm() * (m as f64 + 1.0);
            let partial = acc.value();
            let threshold = tol * scale * (partial.norm() / scale + offset).max(1.0);
            let q = 1.5 * ds.lambda() / n_min * (s + m as f64).norm() / (m as f64 + 1.0);
            let done = rule.push(term.norm(), threshold, q < 0.9) && m >= min_terms;
            if done || (m == order && order == MAX_ORDER) {
                let value = acc.value();
                if !value.is_finite() {
                    return Err(Error::Overflow(format!("geometric series at s = {s}")));
                }
                let q_next = 1.5 * ds.lambda() / n_min * (s + m as f64 + 1.0).norm() / (m as f64 + 2.0);
                return Ok(EntireValue {
                    value,
                    truncation: geometric_tail(rule.recent_max(), q_next),
                    rounding: 16.0 * f64::EPSILON * abs_sum,
                    terms: m + 1,
                });
            }
        }
        order = (order * 2).min(MAX_ORDER);
    }
}

/// `F(s)`, the entire function continuing `α(s)(K(s) - Σ_{a∈A₁} a^{-s})`,
/// returned as `(value, error estimate, terms)`.
pub fn geo_entire(ds: &DigitSystem, s: Complex64, tol: f64) -> Result<(Complex64, f64, usize)> {
    let e = entire_numerator(ds, s, tol, 1.0, 0.0, Settings::default().delta_pole)?;
    Ok((e.value, e.truncation + e.rounding, e.terms))
}

/// The first `order + 1` terms of the geometric series at `s`.
pub fn geo_terms(ds: &DigitSystem, s: Complex64, order: usize) -> Result<Vec<Complex64>> {
    let order = order.min(MAX_ORDER);
    let binom = BinomialTable::new(order);
    let gamma = ds.scaled_power_sums(order);
    let v = v_coeffs_inner(ds, s, order, Settings::default().delta_pole, &binom, &gamma);
    let mut pts = level_two(ds, s);
    let mut coef = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        if m > 0 {
            coef *= -(s + (m - 1) as f64) / m as f64;
        }
        let mut level = Complex64::zero();
        for (z, inv) in pts.iter_mut() {
            level += *z;
            *z *= *inv;
        }
        out.push(coef * v.values[m] * level);
    }
    Ok(out)
}

pub(crate) fn seed_sum(ds: &DigitSystem, s: Complex64, shift: u32) -> Complex64 {
    ds.nonzero_digits()
        .iter()
        .map(|&a| (-s * f64::from(a + shift).ln()).exp())
        .sum()
}

pub(super) fn eval(ev: &Evaluator<'_>, s: Complex64, tol: f64) -> Result<EvalResult> {
    let ds = ev.ds;
    let a = alpha(ds, s);
    let seeds = seed_sum(ds, s, 0);
    let e = entire_numerator(ds, s, tol, a.norm(), seeds.norm(), ev.settings.delta_pole)?;
    let value = e.value / a + seeds;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("K({s}) via the geometric series")));
    }
    let quotient = (e.value / a).norm();
    let tail = (e.truncation + e.rounding) / a.norm()
        + 64.0 * f64::EPSILON * quotient
        + 4.0 * f64::EPSILON * seeds.norm();
    Ok(EvalResult {
        value,
        tail_estimate: tail,
        terms_used: e.terms,
        method: Method::GeoSeries,
        nearest_pole: None,
    })
}
