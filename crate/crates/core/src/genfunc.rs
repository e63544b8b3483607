//! Generating functions of the self-similar measure on `[0, 1]` carried by
//! the digits: the moment generating function `E(t)`, its reciprocal `B(t)`
//! and `C(t) = Σ K(-m) t^m/m!`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::digitsys::DigitSystem;
use crate::error::{Error, Result};
use crate::residues::{exact_binomials, rational, RationalSeq};

/// Exact Taylor data in the exponential convention
/// `value = Σ coeffs[m] t^m / m!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorCoeffs {
    pub order: usize,
    pub coeffs: Vec<BigRational>,
}

impl TaylorCoeffs {
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|q| q.to_string()).collect()
    }

    /// Exponential convolution `Σ_j C(m,j) a_j b_{m-j}`.
    pub fn egf_product(&self, other: &TaylorCoeffs) -> TaylorCoeffs {
        let order = self.order.min(other.order);
        let binom = exact_binomials(order);
        let coeffs = (0..=order)
            .map(|m| {
                (0..=m).fold(BigRational::zero(), |acc, j| {
                    acc + &self.coeffs[j] * &other.coeffs[m - j] * rational(binom[m][j].clone())
                })
            })
            .collect();
        TaylorCoeffs { order, coeffs }
    }
}

impl Serialize for TaylorCoeffs {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("TaylorCoeffs", 3)?;
        st.serialize_field("convention", "egf")?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &self.to_strings())?;
        st.end()
    }
}

impl From<TaylorCoeffs> for RationalSeq {
    fn from(t: TaylorCoeffs) -> Self {
        RationalSeq { values: t.coeffs }
    }
}

/// `α_A(t) = Σ_{a∈A} e^{at}`.
fn digit_exp_sum(ds: &DigitSystem, t: Complex64) -> Complex64 {
    ds.digits().iter().map(|&a| (t * f64::from(a)).exp()).sum()
}

/// `E(t) = Π_{j≥1} α_A(b^{-j} t) / N`.
///
/// The product stops after `J = ceil(log_b(|t|·f/tol)) + 2` factors; the
/// rest is replaced by `exp(M₁·b^{-J}·t)`, its first-order approximation.
pub fn mgf_e(ds: &DigitSystem, t: Complex64, tol: f64) -> Complex64 {
    let b = f64::from(ds.base());
    let n = f64::from(ds.n_total());
    let size = t.norm() * f64::from(ds.f_max());
    if size == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let j_max = ((size / tol).ln() / b.ln()).ceil().max(0.0) as i32 + 2;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut scale = 1.0;
    for _ in 0..j_max {
        scale /= b;
        acc *= digit_exp_sum(ds, t * scale) / n;
    }
    let mean = ds.digits().iter().map(|&a| f64::from(a)).sum::<f64>() / n / (b - 1.0);
    acc * (t * mean * scale).exp()
}

/// `B(t) = 1/E(t)`.
pub fn bgf_b(ds: &DigitSystem, t: Complex64, tol: f64) -> Result<Complex64> {
    let e = mgf_e(ds, t, tol);
    if e.norm() < 1e-12 {
        return Err(Error::NearZeroOfE(e.norm()));
    }
    Ok(e.inv())
}

/// Exact moments: `M_0 = 1`, `(b^m - 1) M_m = N^{-1} Σ_{j=1}^m C(m,j) γ_j M_{m-j}`.
pub fn e_taylor(ds: &DigitSystem, order: usize) -> TaylorCoeffs {
    let binom = exact_binomials(order);
    let gamma: Vec<BigInt> = ds.power_sums(order).into_iter().map(BigInt::from).collect();
    let b = BigInt::from(ds.base());
    let n = BigInt::from(ds.n_total());
    let mut moments = vec![BigRational::one()];
    let mut bm = BigInt::one();
    for m in 1..=order {
        bm *= &b;
        let acc = (1..=m).fold(BigRational::zero(), |acc, j| {
            acc + &moments[m - j] * rational(&binom[m][j] * &gamma[j])
        });
        moments.push(acc / rational(&n * (&bm - BigInt::one())));
    }
    TaylorCoeffs {
        order,
        coeffs: moments,
    }
}

/// Exponential-convolution inverse of [`e_taylor`].
pub fn b_taylor(ds: &DigitSystem, order: usize) -> TaylorCoeffs {
    let e = e_taylor(ds, order);
    let binom = exact_binomials(order);
    let mut out = vec![BigRational::one()];
    for m in 1..=order {
        let acc = (1..=m).fold(BigRational::zero(), |acc, j| {
            acc + &e.coeffs[j] * &out[m - j] * rational(binom[m][j].clone())
        });
        out.push(-acc);
    }
    TaylorCoeffs { order, coeffs: out }
}

/// Exact `K(0), K(-1), …, K(-M)` for `1 < N < b`.
pub fn neg_values(ds: &DigitSystem, order: usize) -> Result<RationalSeq> {
    let n_total = ds.n_total();
    if n_total == 1 {
        return Err(Error::UnsupportedCase(
            "N = 1: the points s = -m are poles".into(),
        ));
    }
    if ds.is_full() {
        return Err(Error::UnsupportedCase(
            "N = b is the zeta case; evaluate K(-m) numerically".into(),
        ));
    }
    let binom = exact_binomials(order);
    let gamma: Vec<BigInt> = ds.power_sums(order).into_iter().map(BigInt::from).collect();
    let b = BigInt::from(ds.base());
    let n = BigInt::from(n_total);
    let n1 = BigInt::from(ds.n_nonzero());
    // values[i] = K(-i)
    let mut values = vec![BigRational::new(-n1, n.clone() - 1)];
    let mut bm = BigInt::one();
    for m in 1..=order {
        bm *= &b;
        // multiply through by b^m:
        // (1 - N b^m) K(-m) = γ_m + Σ_{j=1}^m C(m,j) γ_j b^{m-j} K(-m+j)
        let mut acc = rational(gamma[m].clone());
        let mut bp = BigInt::one();
        for j in (1..=m).rev() {
            acc += &values[m - j] * rational(&binom[m][j] * &gamma[j] * &bp);
            bp *= &b;
        }
        values.push(acc / rational(BigInt::one() - &n * &bm));
    }
    Ok(RationalSeq { values })
}

/// `C(t) = -1 - Σ_{k≥1} 1 / Π_{j=1}^k α_A(b^{-j} t)` for digit sets without 0.
pub fn c_eval(ds: &DigitSystem, t: Complex64, tol: f64) -> Result<Complex64> {
    if ds.contains_zero() {
        return Err(Error::UnsupportedCase(
            "the product formula for C needs 0 outside the digit set".into(),
        ));
    }
    let b = f64::from(ds.base());
    let mut acc = Complex64::new(-1.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut scale = 1.0;
    let mut small = 0;
    for _ in 0..100_000 {
        scale /= b;
        let factor = digit_exp_sum(ds, t * scale);
        if factor.norm() < 1e-12 {
            return Err(Error::NearPoleOfC);
        }
        prod *= factor;
        let term = prod.inv();
        acc -= term;
        if term.norm() < tol * acc.norm().max(1.0) {
            small += 1;
            if small >= 5 {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NearPoleOfC)
}

/// EGF coefficients `m!·[t^m] C(t)`, `m = 0..=order`, from `2·order + 1`
/// samples on the circle `|t| = radius` by discrete Fourier inversion.
pub fn c_taylor_numeric(
    ds: &DigitSystem,
    order: usize,
    radius: f64,
    tol: f64,
) -> Result<Vec<Complex64>> {
    use std::f64::consts::PI;
    let nodes = 2 * order + 1;
    let samples = (0..nodes)
        .map(|j| {
            let w = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
            c_eval(ds, w, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fact = 1.0;
    Ok((0..=order)
        .map(|m| {
            if m > 0 {
                fact *= m as f64;
            }
            let mut acc = Complex64::zero();
            for (j, v) in samples.iter().enumerate() {
                let theta = -2.0 * PI * (m * j) as f64 / nodes as f64;
                acc += v * Complex64::from_polar(1.0, theta);
            }
            acc / nodes as f64 / radius.powi(m as i32) * fact
        })
        .collect())
}

/// Random points of the digit measure: `x = Σ_{j≤depth} X_j b^{-j}` with
/// `X_j` uniform on the digit set.
///
/// The generator is SplitMix64 seeded with `seed`; digits are drawn with
/// `rand`'s uniform integer sampling, so a seed fixes the whole stream.
#[derive(Debug, Clone)]
pub struct CantorSampler<'a> {
    ds: &'a DigitSystem,
    rng: SplitMix64,
}

impl<'a> CantorSampler<'a> {
    pub fn new(ds: &'a DigitSystem, seed: u64) -> Self {
        CantorSampler {
            ds,
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self, depth: u32) -> f64 {
        let digits = self.ds.digits();
        let inv_b = 1.0 / f64::from(self.ds.base());
        let mut x = 0.0;
        let mut scale = inv_b;
        for _ in 0..depth {
            let a = digits[self.rng.gen_range(0..digits.len())];
            x += f64::from(a) * scale;
            scale *= inv_b;
        }
        x
    }
}

/// One draw from a fresh sampler seeded with `seed`.
pub fn cantor_sample(ds: &DigitSystem, depth: u32, seed: u64) -> Result<f64> {
    if depth == 0 {
        return Err(Error::PreconditionViolated("depth must be at least 1".into()));
    }
    Ok(CantorSampler::new(ds, seed).sample(depth))
}
