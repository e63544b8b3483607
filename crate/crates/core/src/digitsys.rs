//! Digit systems `(b, A)` and the admissible integers they generate.
//!
//! An integer is admissible when every base-`b` digit belongs to `A`. The
//! admissible integers of a fixed length `l` form a direct product: the
//! leading digit ranges over `A \ {0}` and the remaining `l - 1` digits over
//! `A`, so there are `N₁·N^(l-1)` of them.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::CompensatedSum;

/// Default cap on the number of integers a single enumeration may visit.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// A base together with a set of admissible digits and its derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitSystem {
    base: u32,
    digits: Vec<u32>,
    n_total: u32,
    n_nonzero: u32,
    f_max: u32,
    lambda: f64,
    s0: f64,
    ln_base: f64,
}

impl DigitSystem {
    pub fn new<I: IntoIterator<Item = u32>>(base: u32, digits: I) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        let mut digits: Vec<u32> = digits.into_iter().collect();
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::DigitOutOfRange { digit: d, base });
        }
        digits.sort_unstable();
        digits.dedup();
        if digits.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        if digits == [0] {
            return Err(Error::OnlyZeroDigit);
        }
        let n_total = digits.len() as u32;
        let n_nonzero = digits.iter().filter(|&&d| d != 0).count() as u32;
        let f_max = *digits.last().unwrap();
        let ln_base = f64::from(base).ln();
        // The two integral abscissae are detected exactly.
        let s0 = if n_total == 1 {
            0.0
        } else if n_total == base {
            1.0
        } else {
            f64::from(n_total).ln() / ln_base
        };
        Ok(DigitSystem {
            base,
            digits,
            n_total,
            n_nonzero,
            f_max,
            lambda: f64::from(f_max) / f64::from(base - 1),
            s0,
            ln_base,
        })
    }

    /// Builds a digit system from the textual digit-set syntax, e.g. `"0-8"`,
    /// `"1,3,5,7,9"` or `"0-3,7"`.
    pub fn parse(base: u32, digits: &str) -> Result<Self> {
        DigitSystem::new(base, parse_digit_set(digits)?)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Admissible digits without zero (the possible leading digits).
    pub fn nonzero_digits(&self) -> &[u32] {
        if self.digits[0] == 0 {
            &self.digits[1..]
        } else {
            &self.digits
        }
    }

    /// `N = |A|`.
    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    /// `N₁ = |A \ {0}|`.
    pub fn n_nonzero(&self) -> u32 {
        self.n_nonzero
    }

    pub fn f_max(&self) -> u32 {
        self.f_max
    }

    /// `λ = max A / (b - 1)`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Abscissa of convergence `s₀ = log N / log b`.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn ln_base(&self) -> f64 {
        self.ln_base
    }

    pub fn contains_zero(&self) -> bool {
        self.digits[0] == 0
    }

    /// All digits admissible, i.e. `K` is the Riemann zeta function.
    pub fn is_full(&self) -> bool {
        self.n_total == self.base
    }

    pub fn is_single(&self) -> bool {
        self.n_total == 1
    }

    /// Exact power sums `γ_j = Σ_{a∈A} a^j`, `j = 0..=j_max`, with `0⁰ = 1`.
    pub fn power_sums(&self, j_max: usize) -> Vec<BigUint> {
        power_sums_of(self.digits.iter().copied(), j_max)
    }

    /// Exact reflected power sums `γ'_j = Σ_{a∈A} (b-1-a)^j`.
    pub fn power_sums_prime(&self, j_max: usize) -> Vec<BigUint> {
        power_sums_of(self.digits.iter().map(|&a| self.base - 1 - a), j_max)
    }

    /// `γ_j / b^j` in double precision, `j = 0..=j_max`.
    pub fn scaled_power_sums(&self, j_max: usize) -> Vec<f64> {
        scaled_power_sums_of(self.digits.iter().copied(), self.base, j_max)
    }

    /// `γ'_j / b^j` in double precision, `j = 0..=j_max`.
    pub fn scaled_power_sums_prime(&self, j_max: usize) -> Vec<f64> {
        scaled_power_sums_of(
            self.digits.iter().map(|&a| self.base - 1 - a),
            self.base,
            j_max,
        )
    }

    /// `b^z` for complex `z`.
    pub fn base_pow(&self, z: Complex64) -> Complex64 {
        (z * self.ln_base).exp()
    }

    /// Location of the candidate pole `s_{m,k} = s₀ - m + 2πik / log b`.
    pub fn lattice_point(&self, p: LatticePoint) -> Complex64 {
        Complex64::new(
            self.s0 - f64::from(p.m),
            2.0 * PI * p.k as f64 / self.ln_base,
        )
    }

    /// Nearest candidate pole to `s` and the distance to it.
    pub fn nearest_lattice(&self, s: Complex64) -> (LatticePoint, f64) {
        let k = (s.im * self.ln_base / (2.0 * PI)).round() as i64;
        let m = (self.s0 - s.re).round().max(0.0) as u32;
        let p = LatticePoint { m, k };
        (p, (s - self.lattice_point(p)).norm())
    }

    /// Number of admissible integers of length `l`, `N₁·N^(l-1)`.
    pub fn block_count(&self, l: u32) -> u128 {
        if l == 0 {
            return 0;
        }
        let mut count = u128::from(self.n_nonzero);
        for _ in 1..l {
            count = count.saturating_mul(u128::from(self.n_total));
        }
        count
    }

    /// Ascending iterator over the admissible integers of length `l`.
    pub fn admissible(&self, l: u32, cap: u64) -> Result<Admissible<'_>> {
        if l == 0 {
            return Err(Error::PreconditionViolated("length must be at least 1".into()));
        }
        let count = self.block_count(l);
        if count > u128::from(cap) {
            return Err(Error::EnumerationTooLarge { count, cap });
        }
        if f64::from(l) * f64::from(self.base).log2() >= 127.0 {
            return Err(Error::PreconditionViolated(format!(
                "admissible integers of length {l} overflow 128 bits"
            )));
        }
        Ok(Admissible::new(self, l))
    }

    /// `K_l(s) = Σ n^{-s}` over admissible `n` of length `l`, by direct summation.
    pub fn block_sum(&self, l: u32, s: Complex64, cap: u64) -> Result<Complex64> {
        self.shifted_block_sum(l, s, 0, cap)
    }

    /// `Σ (n + shift)^{-s}` over admissible `n` of length `l`.
    pub(crate) fn shifted_block_sum(
        &self,
        l: u32,
        s: Complex64,
        shift: u32,
        cap: u64,
    ) -> Result<Complex64> {
        let iter = self.admissible(l, cap)?;
        let shift = u128::from(shift);
        if s.im == 0.0 {
            let mut acc = CompensatedSum::default();
            let e = -s.re;
            iter.for_each(|n| acc.add_re(((n + shift) as f64).powf(e)));
            Ok(acc.value())
        } else {
            let mut acc = CompensatedSum::default();
            iter.for_each(|n| acc.add((-s * ((n + shift) as f64).ln()).exp()));
            Ok(acc.value())
        }
    }
}

impl fmt::Display for DigitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} A={{", self.base)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

fn power_sums_of<I: Iterator<Item = u32> + Clone>(digits: I, j_max: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); j_max + 1];
    for a in digits {
        let a = BigUint::from(a);
        let mut p = BigUint::one();
        for slot in out.iter_mut() {
            *slot += &p;
            p *= &a;
        }
    }
    out
}

fn scaled_power_sums_of<I: Iterator<Item = u32>>(digits: I, base: u32, j_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; j_max + 1];
    for a in digits {
        let x = f64::from(a) / f64::from(base);
        let mut p = 1.0;
        for slot in out.iter_mut() {
            *slot += p;
            p *= x;
        }
    }
    out
}

/// Index into the lattice of candidate poles `s_{m,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePoint {
    pub m: u32,
    pub k: i64,
}

impl LatticePoint {
    pub fn new(m: u32, k: i64) -> Self {
        LatticePoint { m, k }
    }
}

/// Streaming odometer over the admissible integers of one length.
///
/// Digits are visited most significant first with sorted digit lists, so the
/// output is strictly increasing.
pub struct Admissible<'a> {
    ds: &'a DigitSystem,
    // digit index per position, most significant first
    idx: Vec<usize>,
    // prefix[i] = value of the first i digits
    prefix: Vec<u128>,
    done: bool,
}

impl<'a> Admissible<'a> {
    fn new(ds: &'a DigitSystem, l: u32) -> Self {
        let l = l as usize;
        let mut it = Admissible {
            ds,
            idx: vec![0; l],
            prefix: vec![0; l + 1],
            done: false,
        };
        it.refresh_from(0);
        it
    }

    fn choices(&self, pos: usize) -> &'a [u32] {
        if pos == 0 {
            self.ds.nonzero_digits()
        } else {
            self.ds.digits()
        }
    }

    fn refresh_from(&mut self, pos: usize) {
        let b = u128::from(self.ds.base);
        for i in pos..self.idx.len() {
            let d = self.choices(i)[self.idx[i]];
            self.prefix[i + 1] = self.prefix[i] * b + u128::from(d);
        }
    }

    /// Calls `f` on every remaining integer; faster than the `Iterator` path
    /// because the last digit is handled in a tight loop.
    pub fn for_each<F: FnMut(u128)>(mut self, mut f: F) {
        if self.done {
            return;
        }
        let l = self.idx.len();
        let b = u128::from(self.ds.base);
        let last = self.choices(l - 1);
        loop {
            let head = self.prefix[l - 1] * b;
            for &a in &last[self.idx[l - 1]..] {
                f(head + u128::from(a));
            }
            self.idx[l - 1] = last.len() - 1;
            if !self.advance() {
                return;
            }
        }
    }

    fn advance(&mut self) -> bool {
        let l = self.idx.len();
        let mut pos = l;
        while pos > 0 {
            pos -= 1;
            if self.idx[pos] + 1 < self.choices(pos).len() {
                self.idx[pos] += 1;
                for i in pos + 1..l {
                    self.idx[i] = 0;
                }
                self.refresh_from(pos);
                return true;
            }
        }
        self.done = true;
        false
    }
}

impl Iterator for Admissible<'_> {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.done {
            return None;
        }
        let v = self.prefix[self.idx.len()];
        self.advance();
        Some(v)
    }
}

/// Parses the digit-set syntax: comma-separated items, each a single digit or
/// an inclusive range `lo-hi`.
pub fn parse_digit_set(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::DigitSyntax(text.to_string());
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(bad());
        }
        match item.split_once('-') {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// Admissible integers of length `l` under the default cap, ascending.
pub fn enumerate_admissible(ds: &DigitSystem, l: u32) -> Result<Vec<u128>> {
    Ok(ds.admissible(l, DEFAULT_ENUM_CAP)?.collect())
}

/// `K_l(s)` under the default cap.
pub fn block_sum(ds: &DigitSystem, l: u32, s: Complex64) -> Result<Complex64> {
    ds.block_sum(l, s, DEFAULT_ENUM_CAP)
}
