//! The moment coefficients `u_m(s)` and their pole-free multiples
//! `v_m(s) = α(s)·u_m(s)`.
//!
//! Both sequences satisfy
//!
//! ```text
//! (b^(s+m) - N)·u_m(s) = Σ_{j=1..m} C(m,j)·γ_j·u_{m-j}(s)
//! ```
//!
//! and are evaluated in the scaled form obtained by dividing through by
//! `b^m`, which keeps every intermediate quantity finite for `m` up to 1000.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::digitsys::{DigitSystem, LatticePoint};
use crate::error::{Error, Result};
use crate::settings::Settings;

/// Largest order accepted by the binomial tables.
pub const MAX_ORDER: usize = 1000;

/// Relative size below which dropped product factors are ignored.
const PRODUCT_CUTOFF: f64 = 1e-17;

/// A computed `u` or `v` sequence at one point `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSequence {
    pub s: Complex64,
    pub values: Vec<Complex64>,
    /// Set when the `v` recurrence was regularized at this index.
    pub regularized_index: Option<u32>,
}

/// Pascal rows `C(m, j)`, `0 <= j <= m <= max`, built in exact integers and
/// stored as doubles.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<f64>>,
}

impl BinomialTable {
    pub fn new(max: usize) -> Self {
        let mut rows = Vec::with_capacity(max + 1);
        let mut row: Vec<BigUint> = vec![BigUint::from(1u32)];
        for m in 0..=max {
            rows.push(row.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect());
            if m == max {
                break;
            }
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigUint::from(1u32));
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::from(1u32));
            row = next;
        }
        BinomialTable { rows }
    }

    #[inline]
    pub fn get(&self, m: usize, j: usize) -> f64 {
        self.rows[m][j]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.rows[m]
    }
}

/// Rising factorial `(s)_m = s(s+1)⋯(s+m-1)`, equal to 1 for `m = 0`.
pub fn pochhammer(s: Complex64, m: u32) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s + f64::from(i)))
}

/// `b^s - N·b^(-m)`, i.e. `(b^(s+m) - N) / b^m`.
fn scaled_gap(ds: &DigitSystem, bs: Complex64, m: usize) -> Complex64 {
    bs - f64::from(ds.n_total()) * f64::from(ds.base()).powi(-(m as i32))
}

/// `|b^(s+m) - N|`, or infinity when `b^m` overflows.
fn gap_distance(ds: &DigitSystem, bs: Complex64, m: usize) -> f64 {
    let scale = f64::from(ds.base()).powi(m as i32);
    let d = scaled_gap(ds, bs, m).norm() * scale;
    if d.is_finite() {
        d
    } else {
        f64::INFINITY
    }
}

/// Index `m <= max_m` with `|b^(s+m) - N| < delta`, if any.
pub(crate) fn offending_index(
    ds: &DigitSystem,
    s: Complex64,
    max_m: usize,
    delta: f64,
) -> Option<(u32, f64)> {
    let bs = ds.base_pow(s);
    (0..=max_m)
        .map(|m| (m, gap_distance(ds, bs, m)))
        .find(|&(_, d)| d < delta)
        .map(|(m, d)| (m as u32, d))
}

/// Runs the scaled recurrence from `start` to `values.len() - 1`, leaving
/// `values[..start]` untouched.
fn run_recurrence(
    ds: &DigitSystem,
    s: Complex64,
    values: &mut [Complex64],
    start: usize,
    skip: Option<usize>,
    binom: &BinomialTable,
    gamma: &[f64],
) {
    let bs = ds.base_pow(s);
    let inv_b = 1.0 / f64::from(ds.base());
    for m in start.max(1)..values.len() {
        if Some(m) == skip {
            continue;
        }
        values[m] = recurrence_rhs(values, m, binom, gamma, inv_b) / scaled_gap(ds, bs, m);
    }
}

/// `Σ_{j=1..m} C(m,j)·(γ_j/b^j)·b^(-(m-j))·x_{m-j}`.
fn recurrence_rhs(
    x: &[Complex64],
    m: usize,
    binom: &BinomialTable,
    gamma: &[f64],
    inv_b: f64,
) -> Complex64 {
    let row = binom.row(m);
    let mut acc = Complex64::zero();
    // b^(-(m-j)) built up as j decreases from m
    let mut scale = 1.0;
    for j in (1..=m).rev() {
        acc += x[m - j] * (row[j] * gamma[j] * scale);
        scale *= inv_b;
    }
    acc
}

fn check_order(m: usize) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::PreconditionViolated(format!(
            "order {m} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `u_0(s), …, u_M(s)` by the recurrence; fails near candidate poles.
pub fn u_coeffs(ds: &DigitSystem, s: Complex64, order: usize) -> Result<CoeffSequence> {
    u_coeffs_with(ds, s, order, Settings::default().delta_pole)
}

pub fn u_coeffs_with(
    ds: &DigitSystem,
    s: Complex64,
    order: usize,
    delta_pole: f64,
) -> Result<CoeffSequence> {
    check_order(order)?;
    if let Some((m, distance)) = offending_index(ds, s, order, delta_pole) {
        return Err(Error::NearCandidatePole { m, distance });
    }
    let binom = BinomialTable::new(order);
    let gamma = ds.scaled_power_sums(order);
    Ok(CoeffSequence {
        s,
        values: u_values(ds, s, order, &binom, &gamma),
        regularized_index: None,
    })
}

fn u_values(
    ds: &DigitSystem,
    s: Complex64,
    order: usize,
    binom: &BinomialTable,
    gamma: &[f64],
) -> Vec<Complex64> {
    let bs = ds.base_pow(s);
    let mut values = vec![Complex64::zero(); order + 1];
    values[0] = bs / (bs - f64::from(ds.n_total()));
    run_recurrence(ds, s, &mut values, 1, None, binom, gamma);
    values
}

/// `v_0(s), …, v_M(s)` with `v_m = α(s)·u_m(s)`; defined on the whole plane.
pub fn v_coeffs(ds: &DigitSystem, s: Complex64, order: usize) -> Result<CoeffSequence> {
    v_coeffs_with(ds, s, order, Settings::default().delta_pole)
}

pub fn v_coeffs_with(
    ds: &DigitSystem,
    s: Complex64,
    order: usize,
    delta_pole: f64,
) -> Result<CoeffSequence> {
    check_order(order)?;
    let binom = BinomialTable::new(order);
    let gamma = ds.scaled_power_sums(order);
    Ok(v_coeffs_inner(ds, s, order, delta_pole, &binom, &gamma))
}

pub(crate) fn v_coeffs_inner(
    ds: &DigitSystem,
    s: Complex64,
    order: usize,
    delta_pole: f64,
    binom: &BinomialTable,
    gamma: &[f64],
) -> CoeffSequence {
    let m0 = offending_index(ds, s, order, delta_pole).map(|(m, _)| m as usize);
    let mut values = vec![Complex64::zero(); order + 1];
    values[0] = alpha_product(ds, s, 1, None);
    if let Some(m0) = m0.filter(|&m| m > 0) {
        run_recurrence(ds, s, &mut values[..m0], 1, None, binom, gamma);
        // v_{m0} = Π_{n≠m0}(1 - N b^(-s-n)) · b^(-s-m0) · Σ_j C(m0,j) γ_j u_{m0-j}
        let u = u_values(ds, s, m0 - 1, binom, gamma);
        let mut padded = u;
        padded.push(Complex64::zero());
        let inv_b = 1.0 / f64::from(ds.base());
        let rhs = recurrence_rhs(&padded, m0, binom, gamma, inv_b);
        values[m0] = alpha_product(ds, s, 0, Some(m0 as u32)) * rhs / ds.base_pow(s);
        run_recurrence(ds, s, &mut values, m0 + 1, None, binom, gamma);
    } else {
        run_recurrence(ds, s, &mut values, 1, None, binom, gamma);
    }
    CoeffSequence {
        s,
        values,
        regularized_index: m0.map(|m| m as u32),
    }
}

/// `Π_{n >= start, n != skip} (1 - N·b^(-s-n))`, truncated once the factors
/// differ from 1 by less than `1e-17`.
pub(crate) fn alpha_product(
    ds: &DigitSystem,
    s: Complex64,
    start: u32,
    skip: Option<u32>,
) -> Complex64 {
    let n_total = f64::from(ds.n_total());
    let mut acc = Complex64::new(1.0, 0.0);
    let mut n = start;
    loop {
        let x = n_total * ds.base_pow(-(s + f64::from(n)));
        if x.norm() < PRODUCT_CUTOFF {
            return acc;
        }
        if Some(n) != skip {
            acc *= Complex64::new(1.0, 0.0) - x;
        }
        n += 1;
    }
}

/// The entire function `α(s) = Π_{n>=0} (1 - N·b^(-s-n))`, whose zeros are
/// the candidate poles.
pub fn alpha(ds: &DigitSystem, s: Complex64) -> Complex64 {
    alpha_product(ds, s, 0, None)
}

/// `α'(s_{m,k})`: the derivative at a simple zero, where the vanishing factor
/// contributes `log b`.
pub fn alpha_prime_at(ds: &DigitSystem, p: LatticePoint) -> Complex64 {
    let s = ds.lattice_point(p);
    alpha_product(ds, s, 0, Some(p.m)) * ds.ln_base()
}

/// Closed form of the `N = 1, f = b - 1` coefficients:
/// `w_m(s) = Σ_j (-1)^j C(m,j) b^(s+j)/(b^(s+j) - 1)`.
pub fn w_closed(base: u32, s: Complex64, m: usize) -> Result<Complex64> {
    check_order(m)?;
    let ln_b = f64::from(base).ln();
    let delta = Settings::default().delta_pole;
    let binom = BinomialTable::new(m);
    let mut acc = Complex64::zero();
    for j in 0..=m {
        let p = ((s + j as f64) * ln_b).exp();
        let gap = p - 1.0;
        if gap.norm() < delta {
            return Err(Error::NearCandidatePole {
                m: j as u32,
                distance: gap.norm(),
            });
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += p / gap * (sign * binom.get(m, j));
    }
    Ok(acc)
}

/// Truncated defining series of `u_m(s)` with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMoment {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `0^m + Σ_{l<=L} Σ_{words in A^l} (Σ a_i b^(-i))^m b^(-ls)`, summed over all
/// digit words up to length `L`.
pub fn u_direct(ds: &DigitSystem, s: Complex64, m: u32, max_len: u32) -> Result<TruncatedMoment> {
    let cap = Settings::default().enum_cap;
    if s.re <= ds.s0() + 0.1 {
        return Err(Error::PreconditionViolated(format!(
            "u_direct needs Re s > s0 + 0.1 (Re s = {}, s0 = {})",
            s.re,
            ds.s0()
        )));
    }
    let words = (f64::from(ds.n_total())).powi(max_len as i32);
    if words > cap as f64 {
        return Err(Error::PreconditionViolated(format!(
            "{words} digit words exceed the enumeration cap {cap}"
        )));
    }
    let b = f64::from(ds.base());
    // level_sums[l] = Σ over words of length l of x^m
    let mut level_sums = vec![0.0f64; max_len as usize + 1];
    fn walk(ds: &DigitSystem, level: usize, x: f64, scale: f64, m: i32, sums: &mut [f64]) {
        if level >= sums.len() {
            return;
        }
        for &a in ds.digits() {
            let y = x + f64::from(a) * scale;
            sums[level] += y.powi(m);
            walk(ds, level + 1, y, scale / f64::from(ds.base()), m, sums);
        }
    }
    walk(ds, 1, 0.0, 1.0 / b, m as i32, &mut level_sums);
    let mut value = Complex64::new(if m == 0 { 1.0 } else { 0.0 }, 0.0);
    for (l, &sum) in level_sums.iter().enumerate().skip(1) {
        value += ds.base_pow(-s * l as f64) * sum;
    }
    let ratio = f64::from(ds.n_total()) * b.powf(-s.re);
    let tail_bound = ratio.powi(max_len as i32 + 1) / (1.0 - ratio);
    Ok(TruncatedMoment { value, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ds(b: u32, d: &str) -> DigitSystem {
        DigitSystem::parse(b, d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pochhammer_examples() {
        let s = c(0.3, -1.7);
        assert_eq!(pochhammer(s, 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(1.0, 0.0), 5).re, 120.0);
        assert_eq!(pochhammer(c(-2.0, 0.0), 4), c(0.0, 0.0));
        for m in 0..20 {
            let lhs = pochhammer(s, m + 1);
            let rhs = pochhammer(s, m) * (s + f64::from(m));
            assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12 * lhs.norm());
        }
    }

    #[test]
    fn binomials_are_exact_in_range() {
        let t = BinomialTable::new(60);
        assert_eq!(t.get(10, 3), 120.0);
        assert_eq!(t.get(60, 30), 118264581564861424.0);
        let big = BinomialTable::new(1000);
        assert!(big.get(1000, 500).is_finite());
    }

    #[test]
    fn u0_formula() {
        for (b, d) in [(10, "0-8"), (3, "0,2"), (10, "0-9")] {
            let ds = ds(b, d);
            let u = u_coeffs(&ds, c(2.0, 0.0), 3).unwrap();
            let bb = f64::from(b * b);
            assert_relative_eq!(u.values[0].re, bb / (bb - f64::from(ds.n_total())));
        }
    }

    #[test]
    fn u_matches_truncated_definition() {
        let ds = ds(10, "0-8");
        let s = c(2.0, 0.0);
        let u = u_coeffs(&ds, s, 8).unwrap();
        for m in 0..=8u32 {
            let t = u_direct(&ds, s, m, 8).unwrap();
            let err = (u.values[m as usize] - t.value).norm();
            assert!(err <= t.tail_bound, "m={m} err={err:e} tail={:e}", t.tail_bound);
        }
        // complex s, a different system
        let ds = ds_3();
        let s = c(1.4, 2.0);
        let u = u_coeffs(&ds, s, 6).unwrap();
        for m in 0..=6u32 {
            let t = u_direct(&ds, s, m, 16).unwrap();
            assert!((u.values[m as usize] - t.value).norm() <= t.tail_bound);
        }
    }

    fn ds_3() -> DigitSystem {
        ds(3, "0,2")
    }

    #[test]
    fn u_direct_edge_cases() {
        let ds1 = ds(2, "1");
        // m = 1, s = 2: Σ_l (1 - 2^-l) 4^-l = 1/3 - 1/7 = 4/21
        let t = u_direct(&ds1, c(2.0, 0.0), 1, 40).unwrap();
        assert_relative_eq!(t.value.re, 4.0 / 21.0, max_relative = 1e-12);
        let t0 = u_direct(&ds(10, "0-8"), c(2.0, 0.0), 3, 0).unwrap();
        assert_eq!(t0.value, c(0.0, 0.0));
        assert!(u_direct(&ds1, c(0.05, 0.0), 1, 5).is_err());
    }

    #[test]
    fn u_of_single_digit_matches_closed_form() {
        let ds = ds(10, "9");
        for s in [c(0.7, 0.0), c(1.5, 2.0), c(3.0, -1.0)] {
            let u = u_coeffs(&ds, s, 12).unwrap();
            for m in 0..=12 {
                let w = w_closed(10, s, m).unwrap();
                assert_relative_eq!(
                    (u.values[m] - w).norm(),
                    0.0,
                    epsilon = 1e-9 * w.norm().max(1e-3)
                );
            }
        }
    }

    #[test]
    fn w_closed_recurrence_and_limit() {
        let b = 7u32;
        let s = c(-0.6, 0.9);
        let w: Vec<_> = (0..=10).map(|m| w_closed(b, s, m).unwrap()).collect();
        let bp = |x: Complex64| (x * f64::from(b).ln()).exp();
        assert_relative_eq!((w[0] - bp(s) / (bp(s) - 1.0)).norm(), 0.0, epsilon = 1e-14);
        let t = BinomialTable::new(10);
        for m in 1..=10usize {
            let rhs: Complex64 = (1..=m)
                .map(|j| w[m - j] * (t.get(m, j) * f64::from(b - 1).powi(j as i32)))
                .sum();
            let lhs = (bp(s + m as f64) - 1.0) * w[m];
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "m={m}");
        }
        // far to the right only the empty word survives
        for m in 0..5 {
            let want = if m == 0 { 1.0 } else { 0.0 };
            assert_relative_eq!(w_closed(10, c(40.0, 0.0), m).unwrap().re, want, epsilon = 1e-12);
        }
        assert!(w_closed(10, c(0.0, 0.0), 2).is_err());
    }

    #[test]
    fn u_coeffs_rejects_candidate_poles() {
        let ds = ds(10, "0-8");
        let s = ds.lattice_point(LatticePoint::new(2, 0));
        match u_coeffs(&ds, s, 5) {
            Err(Error::NearCandidatePole { m, .. }) => assert_eq!(m, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn v_is_alpha_times_u_off_lattice() {
        for (b, d) in [(10, "0-8"), (3, "0,2"), (2, "1"), (10, "1-9")] {
            let ds = ds(b, d);
            for s in [c(1.9, 0.4), c(0.2, -3.0), c(-1.7, 1.1)] {
                let u = u_coeffs(&ds, s, 30).unwrap();
                let v = v_coeffs(&ds, s, 30).unwrap();
                assert_eq!(v.regularized_index, None);
                let a = alpha(&ds, s);
                for m in 0..=30 {
                    let want = a * u.values[m];
                    assert!(
                        (v.values[m] - want).norm() <= 1e-12 * want.norm().max(1e-300) + 1e-300,
                        "{ds} s={s} m={m}: {} vs {}",
                        v.values[m],
                        want
                    );
                }
            }
        }
    }

    #[test]
    fn v_regularized_at_lattice_points() {
        let ds = ds(10, "0-8");
        let s0 = c(ds.s0(), 0.0);
        let v = v_coeffs(&ds, s0, 5).unwrap();
        assert_eq!(v.regularized_index, Some(0));
        let mut prod = 1.0;
        for n in 1..60 {
            prod *= 1.0 - 9.0 * 10f64.powf(-ds.s0() - f64::from(n));
        }
        assert_relative_eq!(v.values[0].re, prod, max_relative = 1e-14);

        // Regularized values are the limit of the off-lattice values.
        for p in [LatticePoint::new(2, 0), LatticePoint::new(3, 1)] {
            let sp = ds.lattice_point(p);
            let at = v_coeffs(&ds, sp, 12).unwrap();
            assert_eq!(at.regularized_index, Some(p.m));
            let h = 1e-5;
            let near: Vec<_> = [c(h, 0.0), c(-h, 0.0), c(0.0, h), c(0.0, -h)]
                .iter()
                .map(|&d| v_coeffs(&ds, sp + d, 12).unwrap())
                .collect();
            for m in 0..=12 {
                let avg = near.iter().map(|v| v.values[m]).sum::<Complex64>() / 4.0;
                let scale = near.iter().map(|v| v.values[m].norm()).fold(at.values[m].norm(), f64::max);
                assert!(
                    (avg - at.values[m]).norm() <= 1e-7 * scale,
                    "p={p:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn v_term_decay_rate() {
        // |α(s)(s)_m/m! u_m(s)| = O(λ^m / m)
        for (b, d) in [(10, "0-8"), (3, "0,2"), (10, "1-9")] {
            let ds = ds(b, d);
            for s in [c(-3.0, 0.0), c(-3.3, 0.5), c(0.6, 2.0)] {
                let v = v_coeffs(&ds, s, 200).unwrap();
                let mut coef = Complex64::new(1.0, 0.0);
                let mut running = 0.0f64;
                let mut at_100 = 0.0;
                for (m, vm) in v.values.iter().enumerate().skip(1) {
                    coef *= (s + (m - 1) as f64) / m as f64;
                    let scaled = (coef * vm).norm() * m as f64 / ds.lambda().powi(m as i32);
                    assert!(scaled.is_finite());
                    running = running.max(scaled);
                    if m == 100 {
                        at_100 = running;
                    }
                }
                assert!(running <= at_100 * 1.5 + 1e-300, "{ds} s={s}: {running} vs {at_100}");
            }
        }
    }

    #[test]
    fn alpha_values() {
        let ds9 = ds(10, "0-8");
        assert!((alpha(&ds9, c(50.0, 0.0)) - 1.0).norm() < 1e-10);
        for m in 0..=5 {
            for k in -2..=2 {
                let p = LatticePoint::new(m, k);
                let a = alpha(&ds9, ds9.lattice_point(p));
                let scale = alpha_prime_at(&ds9, p).norm();
                assert!(a.norm() < 1e-12 * scale.max(1.0), "{p:?}: {a}");
            }
        }
        assert!(alpha(&ds(10, "0-9"), c(0.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn alpha_shift_identity() {
        for (b, d) in [(10, "0-8"), (3, "0,2"), (2, "1")] {
            let ds = ds(b, d);
            for s in [c(0.3, 0.2), c(-1.2, 4.0), c(2.5, -0.7)] {
                let lhs = alpha(&ds, s + 1.0) * (1.0 - f64::from(ds.n_total()) * ds.base_pow(-s));
                let rhs = alpha(&ds, s);
                assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn alpha_prime_matches_finite_differences() {
        let ds1 = ds(2, "1");
        let mut prod = 1.0;
        for n in 1..70 {
            prod *= 1.0 - 2f64.powi(-n);
        }
        let ap = alpha_prime_at(&ds1, LatticePoint::new(0, 0));
        assert_relative_eq!(ap.re, 2f64.ln() * prod, max_relative = 1e-14);

        let h = 1e-5;
        for (b, d) in [(10, "0-8"), (3, "0,2"), (2, "1")] {
            let ds = ds(b, d);
            for m in 0..=10 {
                for k in -3..=3 {
                    let p = LatticePoint::new(m, k);
                    let ap = alpha_prime_at(&ds, p);
                    assert!(ap.norm() > 0.0);
                    if m <= 4 {
                        let sp = ds.lattice_point(p);
                        let fd = (alpha(&ds, sp + h) - alpha(&ds, sp - h)) / (2.0 * h);
                        assert!((fd - ap).norm() <= 1e-6 * ap.norm(), "{ds} {p:?}");
                    }
                    // At a zero, N b^(-s-n) = b^(m-n), so α' depends only on b and m.
                    let bf = f64::from(b);
                    let mut simple = bf.ln();
                    for n in 0..80 {
                        if n != m {
                            simple *= 1.0 - bf.powi(m as i32 - n as i32);
                        }
                    }
                    assert!((ap - simple).norm() <= 1e-11 * simple.abs(), "{ds} {p:?}");
                }
            }
        }
    }
}
