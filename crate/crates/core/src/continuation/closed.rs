//! One admissible digit `f`: the integers are `f·(b^l - 1)/(b - 1)`, so
//!
//! ```text
//! K(s) = ((b-1)/f)^s · Σ_{l≥1} (b^l - 1)^{-s} = ((b-1)/f)^s · Σ_{j≥0} (s)_j/j! · 1/(b^{s+j} - 1).
//! ```

use num_complex::Complex64;

use super::{geometric_tail, EvalResult, Evaluator, Method, StopRule};
use crate::coeffs::MAX_ORDER;
use crate::error::{Error, Result};
use crate::util::CompensatedSum;

pub(super) fn eval(ev: &Evaluator<'_>, s: Complex64, tol: f64) -> Result<EvalResult> {
    let ds = ev.ds;
    let b = f64::from(ds.base());
    let f = f64::from(ds.nonzero_digits()[0]);
    let scale = (s * ((b - 1.0) / f).ln()).exp();
    let mut acc = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut coef = Complex64::new(1.0, 0.0);
    let mut rule = StopRule::default();
    let mut truncation = 0.0;
    let mut terms = 0;
    let min_terms = (-s.re).max(0.0).ceil() as usize + 2 + StopRule::RUN;
    for j in 0..=MAX_ORDER {
        if j > 0 {
            coef *= (s + (j - 1) as f64) / j as f64;
        }
        let gap = ds.base_pow(s + j as f64) - 1.0;
        if gap.norm() < ev.settings.delta_pole {
            return Err(Error::NearCandidatePole {
                m: j as u32,
                distance: gap.norm(),
            });
        }
        let term = coef / gap;
        acc.add(term);
        abs_sum += term.norm();
        terms = j + 1;
        let q = (s + j as f64).norm() / (j as f64 + 1.0) / b;
        let threshold = tol * acc.value().norm().max(1.0) / scale.norm().max(1.0);
        if rule.push(term.norm(), threshold, q < 0.9) && j >= min_terms {
            truncation = geometric_tail(rule.recent_max(), 1.2 * q);
            break;
        }
    }
    let value = scale * acc.value();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("closed form at s = {s}")));
    }
    let tail = scale.norm() * (truncation + 8.0 * f64::EPSILON * abs_sum) + 4.0 * f64::EPSILON * value.norm();
    Ok(EvalResult {
        value,
        tail_estimate: tail,
        terms_used: terms,
        method: Method::ClosedFormN1,
        nearest_pole: None,
    })
}
