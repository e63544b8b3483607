use num_complex::Complex64;

use super::{EvalResult, Evaluator, Method};
use crate::error::{Error, Result};
use crate::util::CompensatedSum;

/// Bound on `Σ_{l > blocks} K_l(σ)`:
/// `N₁ N^blocks b^(-blocks·σ) / (1 - N b^(-σ))`.
pub(super) fn tail_bound(ev: &Evaluator<'_>, sigma: f64, blocks: u32) -> f64 {
    let ds = ev.ds;
    let ratio = f64::from(ds.n_total()) * f64::from(ds.base()).powf(-sigma);
    f64::from(ds.n_nonzero()) * ratio.powi(blocks as i32) / (1.0 - ratio)
}

/// Number of blocks needed for `tol`, checked against the enumeration cap.
pub(super) fn plan(ev: &Evaluator<'_>, s: Complex64, tol: f64) -> Result<u32> {
    let ds = ev.ds;
    let ratio = f64::from(ds.n_total()) * f64::from(ds.base()).powf(-s.re);
    if ratio >= 1.0 {
        return Err(Error::OutsideHalfPlane {
            re: s.re,
            bound: ds.s0(),
        });
    }
    let mut blocks = 1u32;
    let mut total = ds.block_count(1);
    while tail_bound(ev, s.re, blocks) >= tol {
        blocks += 1;
        total = total.saturating_add(ds.block_count(blocks));
        if total > u128::from(ev.settings.enum_cap) {
            return Err(Error::EnumerationTooLarge {
                count: total,
                cap: ev.settings.enum_cap,
            });
        }
    }
    Ok(blocks)
}

fn check_half_plane(ev: &Evaluator<'_>, s: Complex64) -> Result<()> {
    let bound = ev.ds.s0() + ev.settings.direct_margin;
    if s.re < bound {
        return Err(Error::OutsideHalfPlane { re: s.re, bound });
    }
    Ok(())
}

pub(super) fn sum_to_tolerance(
    ev: &Evaluator<'_>,
    s: Complex64,
    tol: f64,
    shift: u32,
) -> Result<EvalResult> {
    check_half_plane(ev, s)?;
    let blocks = plan(ev, s, tol)?;
    sum_blocks(ev, s, blocks, shift)
}

pub(super) fn sum_blocks(
    ev: &Evaluator<'_>,
    s: Complex64,
    blocks: u32,
    shift: u32,
) -> Result<EvalResult> {
    check_half_plane(ev, s)?;
    let ds = ev.ds;
    let total: u128 = (1..=blocks).map(|l| ds.block_count(l)).sum();
    if total > u128::from(ev.settings.enum_cap) {
        return Err(Error::EnumerationTooLarge {
            count: total,
            cap: ev.settings.enum_cap,
        });
    }
    let mut acc = CompensatedSum::default();
    // smallest blocks first
    for l in (1..=blocks).rev() {
        acc.add(ds.shifted_block_sum(l, s, shift, ev.settings.enum_cap)?);
    }
    let value = acc.value();
    // Each n^{-s} carries a relative error of about (|s| log n)·ε.
    let ratio = f64::from(ds.n_total()) * f64::from(ds.base()).powf(-s.re);
    let abs_bound: f64 = (0..blocks)
        .map(|l| f64::from(ds.n_nonzero()) * ratio.powi(l as i32))
        .sum();
    let per_term = s.norm() * f64::from(blocks) * ds.ln_base() + 4.0;
    let rounding = per_term * f64::EPSILON * abs_bound.min(1e300);
    Ok(EvalResult {
        value,
        tail_estimate: tail_bound(ev, s.re, blocks) + rounding,
        terms_used: total as usize,
        method: Method::Direct,
        nearest_pole: None,
    })
}
