//! Self-checks against independent closed forms.

use std::f64::consts::{LN_2, PI};

use ddseries::continuation::{baillie_sum, eval_feq, eval_geo, kempner};
use ddseries::genfunc::{b_taylor, e_taylor, mgf_e, neg_values, CantorSampler};
use ddseries::residues::{bernoulli_classical, lambda_row, mu_rational, residue_entire, residue_limit};
use ddseries::{DigitSystem, Evaluator, LatticePoint, MethodChoice, RationalSeq};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::report::{Format, Report};

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

type Outcome = ddseries::Result<(bool, String)>;

fn ds(b: u32, d: &str) -> DigitSystem {
    DigitSystem::parse(b, d).expect("built-in digit system")
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn zeta_values() -> Outcome {
    let z = ds(10, "0-9");
    let ev = Evaluator::new(&z);
    let at = |s: f64| ev.evaluate(c(s), 1e-12, MethodChoice::Auto).map(|r| r.value);
    let e2 = (at(2.0)? - PI * PI / 6.0).norm();
    let e0 = (at(0.0)? + 0.5).norm();
    let em1 = (at(-1.0)? + 1.0 / 12.0).norm();
    Ok((
        e2 < 1e-10 && e0 < 1e-10 && em1 < 1e-9,
        format!("errors at s = 2, 0, -1: {e2:.1e}, {e0:.1e}, {em1:.1e}"),
    ))
}

fn kempner_constant() -> Outcome {
    let sys = ds(10, "0-8");
    let k = kempner(&sys, 1e-13)?.value;
    let (oracle, _) = baillie_sum(&sys, c(1.0), 120, 40)?;
    let rel = (k - oracle).norm() / oracle.norm();
    Ok((rel < 1e-10, format!("K(1) = {:.15}, relative gap to block recursion {rel:.1e}", k.re)))
}

fn cross_engine() -> Outcome {
    let mut worst: f64 = 0.0;
    for sys in [ds(10, "0-8"), ds(3, "0,2")] {
        for s in [c(-1.487), c(0.213), Complex64::new(0.713, 3.0), Complex64::new(-2.487, -1.0)] {
            let g = eval_geo(&sys, s, 1e-12)?;
            let f = eval_feq(&sys, s, 1e-12, None)?;
            worst = worst.max((g.value - f.value).norm() / (10.0 * (g.tail_estimate + f.tail_estimate)));
        }
    }
    Ok((worst <= 1.0, format!("worst gap relative to the error allowance {worst:.2}")))
}

fn bernoulli() -> Outcome {
    let oracle = bernoulli_classical(30);
    let bad: Vec<u32> = [2, 3, 10]
        .into_iter()
        .filter(|&b| mu_rational(&ds(b, &format!("0-{}", b - 1)), 30) != oracle)
        .collect();
    Ok((bad.is_empty(), format!("full digit sets in bases 2, 3, 10 at order 30; mismatches {bad:?}")))
}

fn reciprocal_mgf() -> Outcome {
    let systems = [ds(2, "0-1"), ds(10, "0-8"), ds(10, "1-9"), ds(3, "0,2"), ds(10, "1")];
    let bad: Vec<String> = systems
        .iter()
        .filter(|s| RationalSeq::from(b_taylor(s, 25)) != mu_rational(s, 25))
        .map(|s| s.to_string())
        .collect();
    Ok((bad.is_empty(), format!("Taylor coefficients of 1/E against the recurrence; mismatches {bad:?}")))
}

fn negative_values() -> Outcome {
    let zeros = [ds(10, "0-8"), ds(3, "0,2")]
        .iter()
        .map(|s| neg_values(s, 8).map(|v| v.values[1..].iter().all(num_traits::Zero::is_zero)))
        .collect::<ddseries::Result<Vec<_>>>()?;
    let v = neg_values(&ds(10, "1-9"), 0)?;
    let k0 = v.values[0].to_f64().unwrap_or(f64::NAN);
    let ok = zeros.iter().all(|&z| z) && k0 == -9.0 / 8.0;
    Ok((ok, format!("K(-m) = 0 for m >= 1 when 0 is a digit: {zeros:?}; K(0) for 1-9 is {}", v.values[0])))
}

fn vertical_residues() -> Outcome {
    let z = ds(10, "0-9");
    let mut worst: f64 = 0.0;
    for k in [-2, -1, 1, 2] {
        worst = worst.max(residue_entire(&z, LatticePoint::new(0, k), 1e-14)?.norm());
    }
    Ok((worst < 1e-8, format!("max residue of zeta at the complex lattice points {worst:.1e}")))
}

fn residue_routes() -> Outcome {
    let sys = ds(10, "0-8");
    let l0 = residue_entire(&sys, LatticePoint::new(0, 0), 1e-14)?;
    let lim = residue_limit(&sys, 0, 9, 1_000_000_000)?;
    let row = lambda_row(&sys, 0, 4, l0);
    let mut row_gap: f64 = 0.0;
    for m in 1..=4u32 {
        let direct = residue_entire(&sys, LatticePoint::new(m, 0), 1e-14)?;
        row_gap = row_gap.max((direct - row.values[m as usize]).norm());
    }
    let limit_gap = (lim.value - l0).norm();
    Ok((
        limit_gap < 1e-4 && row_gap < 1e-7,
        format!("limit gap {limit_gap:.1e}, recurrence gap {row_gap:.1e}"),
    ))
}

fn log2() -> Outcome {
    let z = ds(10, "0-9");
    let ev = Evaluator::new(&z);
    let mut pos = 0.5;
    for m in 1..=45 {
        let zeta = ev.evaluate(c(f64::from(m + 1)), 1e-14, MethodChoice::Auto)?.value.re;
        pos += (zeta - 1.0) / 2f64.powi(m + 1);
    }
    let err = (pos - LN_2).abs();
    Ok((err < 1e-10, format!("error of the zeta series for log 2 {err:.1e}")))
}

fn monte_carlo(seed: u64) -> Outcome {
    let draws = 1_000_000u32;
    let mut ok = true;
    let mut parts = Vec::new();
    for sys in [ds(10, "0-8"), ds(3, "0,2")] {
        let moments = e_taylor(&sys, 2);
        let m1 = moments.coeffs[1].to_f64().unwrap_or(f64::NAN);
        let var_x = moments.coeffs[2].to_f64().unwrap_or(f64::NAN) - m1 * m1;
        let e1 = mgf_e(&sys, c(1.0), 1e-15).re;
        let var_e = mgf_e(&sys, c(2.0), 1e-15).re - e1 * e1;
        let mut sampler = CantorSampler::new(&sys, seed);
        let (mut sx, mut se) = (0.0, 0.0);
        for _ in 0..draws {
            let x = sampler.sample(40);
            sx += x;
            se += x.exp();
        }
        let n = f64::from(draws);
        let zx = (sx / n - m1) / (var_x / n).sqrt();
        let ze = (se / n - e1) / (var_e / n).sqrt();
        ok &= zx.abs() < 4.0 && ze.abs() < 4.0;
        parts.push(format!("{sys}: z-scores {zx:+.2}, {ze:+.2}"));
    }
    Ok((ok, parts.join("; ")))
}

fn check(name: &'static str, outcome: Outcome) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

pub fn run(full: bool, seed: u64, format: Format) -> (Report, bool) {
    let mut checks = vec![
        check("zeta values", zeta_values()),
        check("kempner constant", kempner_constant()),
        check("cross-engine agreement", cross_engine()),
        check("bernoulli numbers", bernoulli()),
        check("reciprocal mgf", reciprocal_mgf()),
        check("negative values", negative_values()),
        check("zeta vertical residues", vertical_residues()),
    ];
    if full {
        checks.push(check("residue routes", residue_routes()));
        checks.push(check("log 2 series", log2()));
        checks.push(check("monte carlo moments", monte_carlo(seed)));
    }
    let passed = checks.iter().all(|c| c.passed);

    let mut input = Map::new();
    input.insert("command".into(), json!("verify"));
    input.insert("mode".into(), json!(if full { "full" } else { "quick" }));
    input.insert("seed".into(), json!(seed));
    let mut report = Report::new(input, format);
    report.set("passed", json!(passed));
    report.set(
        "checks",
        Value::Array(
            checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect(),
        ),
    );
    (report, passed)
}
