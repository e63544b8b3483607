//! Residues `λ_{m,k}` of `K` at the candidate poles and the generalized
//! Bernoulli numbers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeffs::alpha_prime_at;
use crate::continuation::entire_numerator;
use crate::digitsys::{DigitSystem, LatticePoint};
use crate::error::{Error, Result};
use crate::settings::Settings;

/// Residues `λ_{0,k}, …, λ_{M,k}` along one horizontal line of the lattice,
/// with the modified residues `μ_{m,k}` when they are defined.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRow {
    pub k: i64,
    pub values: Vec<Complex64>,
    mu_values: Option<Vec<Complex64>>,
}

impl ResidueRow {
    /// `μ_{m,k} = -m!·λ_{m,k} / (-s_{0,k})_{m+1}`.
    pub fn mu(&self) -> Result<&[Complex64]> {
        self.mu_values.as_deref().ok_or(Error::DefmuUndefined)
    }
}

/// Exact rational sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeq {
    pub values: Vec<BigRational>,
}

impl RationalSeq {
    /// Values rendered as `"p/q"` (or `"p"` for integers).
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(|q| q.to_string()).collect()
    }
}

impl Serialize for RationalSeq {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(ser)
    }
}

/// Exact binomial rows `C(m, j)` for `m <= max`.
pub(crate) fn exact_binomials(max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=max {
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

pub(crate) fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Generalized Bernoulli numbers: `c_0 = 1` and
/// `(1 - b^{-m}) c_m = -N^{-1} Σ_{j=1}^m C(m,j) b^{-j} γ_j c_{m-j}`.
pub fn mu_rational(ds: &DigitSystem, order: usize) -> RationalSeq {
    let binom = exact_binomials(order);
    let gamma: Vec<BigInt> = ds.power_sums(order).into_iter().map(BigInt::from).collect();
    let b = BigInt::from(ds.base());
    let n = BigInt::from(ds.n_total());
    let mut c: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=order {
        // multiply through by b^m: (b^m - 1) c_m = -N^{-1} Σ C(m,j) b^{m-j} γ_j c_{m-j}
        let mut acc = BigRational::zero();
        let mut bp = BigInt::one();
        for j in (1..=m).rev() {
            // bp = b^{m-j}
            acc += &c[m - j] * rational(&binom[m][j] * &bp * &gamma[j]);
            bp *= &b;
        }
        let bm = bp; // b^m
        let denom = rational(&n * (bm - BigInt::one()));
        c.push(-acc / denom);
    }
    RationalSeq { values: c }
}

/// `λ_{m,k} = F(s_{m,k}) / α'(s_{m,k})`, with `F` the entire numerator of the
/// geometric-series engine.
pub fn residue_entire(ds: &DigitSystem, p: LatticePoint, tol: f64) -> Result<Complex64> {
    let s = ds.lattice_point(p);
    let ap = alpha_prime_at(ds, p);
    let f = entire_numerator(ds, s, tol, ap.norm(), 0.0, Settings::default().delta_pole)?;
    Ok(f.value / ap)
}

/// Result of [`residue_limit`]: the value at `l_max` and the whole trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueLimit {
    pub value: Complex64,
    /// Approximations for `l = 1..=l_max`.
    pub trace: Vec<Complex64>,
}

/// `λ_{0,k} ≈ (log b)^{-1} Σ_{ℓ(n) = l} n^{-s_{0,k}}` for `l = 1..=l_max`.
pub fn residue_limit(ds: &DigitSystem, k: i64, l_max: u32, cap: u64) -> Result<ResidueLimit> {
    if l_max == 0 {
        return Err(Error::PreconditionViolated("l_max must be at least 1".into()));
    }
    let count = ds.block_count(l_max);
    if count > u128::from(cap) {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let s = ds.lattice_point(LatticePoint::new(0, k));
    let inv_ln = 1.0 / ds.ln_base();
    let trace = (1..=l_max)
        .map(|l| Ok(ds.block_sum(l, s, cap)? * inv_ln))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidueLimit {
        value: *trace.last().expect("l_max >= 1"),
        trace,
    })
}

/// Extends `λ_{0,k}` along the row by
/// `(1 - b^{-m}) λ_m = -N^{-1} Σ_{j=1}^m [(m-s)(m-1-s)⋯(m-j+1-s)/j!] γ_j b^{-j} λ_{m-j}`,
/// `s = s_{0,k}`.
pub fn lambda_row(ds: &DigitSystem, k: i64, order: usize, lambda0: Complex64) -> ResidueRow {
    let s = ds.lattice_point(LatticePoint::new(0, k));
    let gamma = ds.scaled_power_sums(order);
    let b = f64::from(ds.base());
    let n = f64::from(ds.n_total());
    let mut values = vec![lambda0];
    for m in 1..=order {
        let mut acc = Complex64::zero();
        let mut falling = Complex64::new(1.0, 0.0);
        for j in 1..=m {
            falling *= (m as f64 - (j - 1) as f64 - s) / j as f64;
            acc += falling * gamma[j] * values[m - j];
        }
        values.push(-acc / n / (1.0 - b.powi(-(m as i32))));
    }
    let degenerate = k == 0 && (ds.is_single() || ds.is_full());
    let mu_values = (!degenerate).then(|| {
        // m!/(x)_{m+1}, x = -s_{0,k}
        let x = -s;
        let mut ratio = 1.0 / x;
        values
            .iter()
            .enumerate()
            .map(|(m, l)| {
                if m > 0 {
                    ratio *= m as f64 / (x + m as f64);
                }
                -l * ratio
            })
            .collect()
    });
    ResidueRow {
        k,
        values,
        mu_values,
    }
}

/// Reference oracle: the classical Bernoulli numbers from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_classical(order: usize) -> RationalSeq {
    let binom = exact_binomials(order + 1);
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=order {
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * rational(binom[m + 1][j].clone());
        }
        b.push(-acc / rational(binom[m + 1][m].clone()));
    }
    RationalSeq { values: b }
}
