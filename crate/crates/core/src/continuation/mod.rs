//! Evaluation of `K(s) = Σ' n^{-s}` and `H(s) = Σ' (n+1)^{-s}` on the whole
//! complex plane.
//!
//! Four routes are available:
//!
//! * [`Method::Direct`]: block-by-block summation of the defining series,
//!   valid only to the right of the abscissa of convergence.
//! * [`Method::GeoSeries`]: the level-2 geometric series in the entire
//!   coefficients `v_m(s)`, divided by `α(s)`.
//! * [`Method::FunctionalEq`]: the infinite functional equation relating
//!   `K(s)` to `K(s+1), K(s+2), …`, unwound from the half-plane.
//! * [`Method::ClosedFormN1`]: the Lambert-type series available when there is
//!   a single admissible digit.
//!
//! Close to a candidate pole (within [`Settings::delta_eval`]) the engines are
//! evaluated on a small circle around the lattice point instead. If the
//! contour integral shows no residue the singularity is removable and the
//! value comes from the Taylor coefficients; otherwise the call fails with
//! [`Error::TooCloseToPole`].

mod baillie;
mod closed;
mod direct;
mod feq;
mod geo;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::digitsys::{DigitSystem, LatticePoint};
use crate::error::{Error, Result};
use crate::settings::Settings;

pub use baillie::{baillie_blocks, baillie_sum};
pub use feq::h_series_terms;
pub use geo::{geo_entire, geo_terms};
pub(crate) use geo::entire_numerator;

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "geo")]
    GeoSeries,
    #[serde(rename = "feq")]
    FunctionalEq,
    #[serde(rename = "closed-n1")]
    ClosedFormN1,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::GeoSeries => "geo",
            Method::FunctionalEq => "feq",
            Method::ClosedFormN1 => "closed-n1",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Requested route; `Auto` sums directly when that is possible and otherwise
/// uses the geometric series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Direct,
    Geo,
    Feq,
    ClosedN1,
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "direct" => MethodChoice::Direct,
            "geo" => MethodChoice::Geo,
            "feq" => MethodChoice::Feq,
            "closed-n1" => MethodChoice::ClosedN1,
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

/// Nearest candidate pole to an evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleInfo {
    pub point: LatticePoint,
    pub distance: f64,
}

/// A computed value with its truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Estimated bound on the truncation and rounding error.
    pub tail_estimate: f64,
    pub terms_used: usize,
    pub method: Method,
    pub nearest_pole: Option<PoleInfo>,
}

/// Evaluation engines bound to one digit system.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'a> {
    ds: &'a DigitSystem,
    settings: Settings,
}

/// Number of contour nodes used around a lattice point.
const CIRCLE_NODES: usize = 32;

impl<'a> Evaluator<'a> {
    pub fn new(ds: &'a DigitSystem) -> Self {
        Evaluator {
            ds,
            settings: Settings::default(),
        }
    }

    pub fn with_settings(ds: &'a DigitSystem, settings: Settings) -> Self {
        Evaluator { ds, settings }
    }

    pub fn digit_system(&self) -> &'a DigitSystem {
        self.ds
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    fn pole_info(&self, s: Complex64) -> PoleInfo {
        let (point, distance) = self.ds.nearest_lattice(s);
        PoleInfo { point, distance }
    }

    /// Direct summation of the defining series.
    pub fn direct(&self, s: Complex64, tol: f64) -> Result<EvalResult> {
        let mut r = direct::sum_to_tolerance(self, s, tol, 0)?;
        r.nearest_pole = Some(self.pole_info(s));
        Ok(r)
    }

    /// Direct summation of the first `blocks` blocks, whatever the tail.
    pub fn direct_blocks(&self, s: Complex64, blocks: u32) -> Result<EvalResult> {
        let mut r = direct::sum_blocks(self, s, blocks, 0)?;
        r.nearest_pole = Some(self.pole_info(s));
        Ok(r)
    }

    /// Direct summation of `H(s) = Σ' (n+1)^{-s}`.
    pub fn direct_h(&self, s: Complex64, tol: f64) -> Result<EvalResult> {
        let mut r = direct::sum_to_tolerance(self, s, tol, 1)?;
        r.nearest_pole = Some(self.pole_info(s));
        Ok(r)
    }

    /// Whether direct summation can reach `tol` within the enumeration cap.
    pub fn direct_feasible(&self, s: Complex64, tol: f64) -> bool {
        s.re >= self.ds.s0() + self.settings.direct_margin
            && direct::plan(self, s, tol).is_ok()
    }

    /// The geometric-series engine.
    pub fn geo(&self, s: Complex64, tol: f64) -> Result<EvalResult> {
        self.guarded(s, |z| geo::eval(self, z, tol))
    }

    /// The functional-equation engine; `depth = None` picks the default.
    pub fn feq(&self, s: Complex64, tol: f64, depth: Option<i64>) -> Result<EvalResult> {
        let required = feq::required_depth(self.ds, s);
        if let Some(d) = depth {
            if d < required {
                return Err(Error::DepthInsufficient { given: d, required });
            }
        }
        self.guarded(s, |z| feq::eval(self, z, tol, depth, feq::Series::K))
    }

    /// `H(s)` through its own functional equation.
    pub fn h(&self, s: Complex64, tol: f64, depth: Option<i64>) -> Result<EvalResult> {
        let required = feq::required_depth(self.ds, s);
        if let Some(d) = depth {
            if d < required {
                return Err(Error::DepthInsufficient { given: d, required });
            }
        }
        self.guarded(s, |z| feq::eval(self, z, tol, depth, feq::Series::H))
    }

    /// Lambert-type closed form for one-digit systems.
    pub fn closed_n1(&self, s: Complex64, tol: f64) -> Result<EvalResult> {
        if !self.ds.is_single() {
            return Err(Error::NotN1System);
        }
        self.guarded(s, |z| closed::eval(self, z, tol))
    }

    /// Dispatches on a [`MethodChoice`].
    pub fn evaluate(&self, s: Complex64, tol: f64, choice: MethodChoice) -> Result<EvalResult> {
        match choice {
            MethodChoice::Auto => {
                if self.direct_feasible(s, tol) {
                    self.direct(s, tol)
                } else {
                    self.geo(s, tol)
                }
            }
            MethodChoice::Direct => self.direct(s, tol),
            MethodChoice::Geo => self.geo(s, tol),
            MethodChoice::Feq => self.feq(s, tol, None),
            MethodChoice::ClosedN1 => self.closed_n1(s, tol),
        }
    }

    /// The value `K(1)`, the Kempner-type sum over admissible integers.
    pub fn kempner(&self, tol: f64) -> Result<EvalResult> {
        if self.ds.is_full() {
            return Err(Error::IsRiemannZeta);
        }
        self.geo(Complex64::new(1.0, 0.0), tol)
    }

    /// Runs `engine` at `s`, or on a contour around the nearest lattice point
    /// when `s` is closer than `delta_eval` to it.
    fn guarded<F>(&self, s: Complex64, engine: F) -> Result<EvalResult>
    where
        F: Fn(Complex64) -> Result<EvalResult>,
    {
        let info = self.pole_info(s);
        if info.distance > self.settings.delta_eval {
            let mut r = engine(s)?;
            r.nearest_pole = Some(info);
            return Ok(r);
        }
        let center = self.ds.lattice_point(info.point);
        // stay well inside the neighbouring lattice points
        let radius = 0.25f64.min(0.4 * 2.0 * PI / self.ds.ln_base());
        let mut samples = Vec::with_capacity(CIRCLE_NODES);
        let mut max_tail = 0.0f64;
        let mut terms = 0;
        let mut method = Method::GeoSeries;
        for j in 0..CIRCLE_NODES {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CIRCLE_NODES as f64);
            let r = engine(center + w * radius)?;
            max_tail = max_tail.max(r.tail_estimate);
            terms += r.terms_used;
            method = r.method;
            samples.push(r.value);
        }
        let coeff = |k: i32| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let theta = 2.0 * PI * j as f64 / CIRCLE_NODES as f64;
                acc += v * Complex64::from_polar(1.0, -f64::from(k) * theta);
            }
            acc / CIRCLE_NODES as f64 / radius.powi(k)
        };
        let residue = coeff(-1);
        let scale = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let noise = 1e3 * max_tail * radius + 1e-11 * scale * radius;
        if residue.norm() > noise {
            return Err(Error::TooCloseToPole {
                point: info.point,
                distance: info.distance,
                residue_re: residue.re,
                residue_im: residue.im,
            });
        }
        let h = s - center;
        let mut value = Complex64::new(0.0, 0.0);
        let mut hp = Complex64::new(1.0, 0.0);
        for k in 0..8 {
            value += coeff(k) * hp;
            hp *= h;
        }
        let aliasing = coeff(CIRCLE_NODES as i32 / 2).norm() * radius.powi(CIRCLE_NODES as i32 / 2);
        Ok(EvalResult {
            value,
            tail_estimate: max_tail + residue.norm() + aliasing,
            terms_used: terms,
            method,
            nearest_pole: Some(info),
        })
    }
}

/// Direct summation under default settings.
pub fn eval_direct(ds: &DigitSystem, s: Complex64, tol: f64) -> Result<EvalResult> {
    Evaluator::new(ds).direct(s, tol)
}

/// Geometric-series engine under default settings.
pub fn eval_geo(ds: &DigitSystem, s: Complex64, tol: f64) -> Result<EvalResult> {
    Evaluator::new(ds).geo(s, tol)
}

/// Functional-equation engine under default settings.
pub fn eval_feq(ds: &DigitSystem, s: Complex64, tol: f64, depth: Option<i64>) -> Result<EvalResult> {
    Evaluator::new(ds).feq(s, tol, depth)
}

/// `H(s)` under default settings.
pub fn eval_h(ds: &DigitSystem, s: Complex64, tol: f64, depth: Option<i64>) -> Result<EvalResult> {
    Evaluator::new(ds).h(s, tol, depth)
}

/// Closed form for `N = 1` under default settings.
pub fn eval_closed_n1(ds: &DigitSystem, s: Complex64, tol: f64) -> Result<EvalResult> {
    Evaluator::new(ds).closed_n1(s, tol)
}

/// `K(1)` under default settings.
pub fn kempner(ds: &DigitSystem, tol: f64) -> Result<EvalResult> {
    Evaluator::new(ds).kempner(tol)
}

/// Tracks the "five consecutive small terms" stopping rule.
#[derive(Debug, Default)]
pub(crate) struct StopRule {
    small_run: usize,
    recent: [f64; 5],
    count: usize,
}

impl StopRule {
    pub const RUN: usize = 5;

    /// Records a term magnitude; returns true once `RUN` consecutive terms
    /// were below `threshold` and `ratio_ok` holds.
    pub fn push(&mut self, term: f64, threshold: f64, ratio_ok: bool) -> bool {
        self.recent[self.count % Self::RUN] = term;
        self.count += 1;
        if term < threshold {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= Self::RUN && ratio_ok
    }

    /// Largest of the last few recorded terms.
    pub fn recent_max(&self) -> f64 {
        self.recent.iter().copied().fold(0.0, f64::max)
    }
}

/// Geometric tail `x·q/(1-q)` with the ratio clamped below one.
pub(crate) fn geometric_tail(last: f64, q: f64) -> f64 {
    let q = q.clamp(0.0, 0.95);
    last * q / (1.0 - q)
}
