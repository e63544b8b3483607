//! Block recursion
//!
//! ```text
//! K_{l+1}(z) = b^{-z} Σ_j (-1)^j (z)_j/j! · (γ_j/b^j) · K_l(z+j)
//! ```
//!
//! on a triangular table of shifted blocks `K_l(s+m)`, seeded by exactly
//! summed blocks of length one and two.

use num_complex::Complex64;

use crate::coeffs::MAX_ORDER;
use crate::digitsys::DigitSystem;
use crate::error::{Error, Result};

/// Blocks `K_1(s), …, K_{l_max}(s)` from the recursion truncated at `m_max`
/// shifts.
pub fn baillie_blocks(
    ds: &DigitSystem,
    s: Complex64,
    l_max: u32,
    m_max: usize,
) -> Result<Vec<Complex64>> {
    if s.re <= ds.s0() {
        return Err(Error::PreconditionViolated(format!(
            "block recursion needs Re s > {}",
            ds.s0()
        )));
    }
    if l_max == 0 || m_max == 0 || m_max > MAX_ORDER || l_max > 100_000 {
        return Err(Error::PreconditionViolated(format!(
            "l_max = {l_max}, m_max = {m_max} out of range"
        )));
    }
    let gamma = ds.scaled_power_sums(m_max);
    let ln_b = ds.ln_base();
    // The first step converges only like (f/(b·a₁))^j and cancels badly at
    // large shifts, so the first two levels are summed exactly.
    let exact = |l: u32| -> Result<Vec<Complex64>> {
        (0..=m_max)
            .map(|m| ds.block_sum(l, s + m as f64, u64::MAX))
            .collect()
    };
    let mut out = vec![exact(1)?[0]];
    if l_max == 1 {
        return Ok(out);
    }
    // row[m] = K_l(s + m)
    let mut row = exact(2)?;
    out.push(row[0]);
    for _ in 3..=l_max {
        let mut next = vec![Complex64::new(0.0, 0.0); m_max + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            let z = s + m as f64;
            let mut coef = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=m_max - m {
                if j > 0 {
                    coef *= -(z + (j - 1) as f64) / j as f64;
                }
                acc += coef * gamma[j] * row[m + j];
            }
            *slot = (-z * ln_b).exp() * acc;
        }
        row = next;
        out.push(row[0]);
    }
    Ok(out)
}

/// `Σ_{l≤l_max} K_l(s)` plus a geometric extrapolation of the remaining
/// blocks from the ratio of the last two. Returns `(value, extrapolated part)`.
pub fn baillie_sum(
    ds: &DigitSystem,
    s: Complex64,
    l_max: u32,
    m_max: usize,
) -> Result<(Complex64, Complex64)> {
    let blocks = baillie_blocks(ds, s, l_max, m_max)?;
    let mut total = Complex64::new(0.0, 0.0);
    for b in blocks.iter().rev() {
        total += b;
    }
    let mut tail = Complex64::new(0.0, 0.0);
    if blocks.len() >= 2 {
        let last = blocks[blocks.len() - 1];
        let q = last / blocks[blocks.len() - 2];
        if q.norm() < 1.0 {
            tail = last * q / (Complex64::new(1.0, 0.0) - q);
        }
    }
    Ok((total + tail, tail))
}
