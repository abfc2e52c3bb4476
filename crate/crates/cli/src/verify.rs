//! Verification suites. Each produces flat check records and a summary;
//! per-λ work runs on the rayon pool and is merged in input order.

use crate::output::Row;
use clap::ValueEnum;
use legendre_pfaff::abel::sample::{lambda_grid, rng, sample_lambda};
use legendre_pfaff::abel::{
    betti_sweep, chain_derivative_audit, im_log_sweep, north_south_check, numerator_bound_check, Boundary, Region, SweepConfig,
    SweepReport, CHAIN_TOL, FD_TOL,
};
use legendre_pfaff::lattice::{area_lower_bound_check, LegendreParam};
use legendre_pfaff::periods::PeriodData;
use legendre_pfaff::weierstrass::{psi_shift_max, Weierstrass};
use legendre_pfaff::{Complex64 as C, Error};
use rand::Rng;
use rayon::prelude::*;

/// Smallest `|λ|` drawn by the sweeps.
const RHO_MIN: f64 = 1e-6;
/// Grid points per boundary for the numerator suite.
const NUMERATOR_POINTS: usize = 1000;
/// Interior grid points per slit for the north/south suite.
const NORTH_SOUTH_POINTS: usize = 50;
const PSI_N_MAX: i64 = 42;
const PSI_GRID: usize = 50;
const PSI_BOUND: f64 = 515.0;
const CHAIN_AUDIT_LAMBDAS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Suite {
    #[value(name = "betti42")]
    Betti42,
    #[value(name = "imL384")]
    ImL384,
    #[value(name = "numerators")]
    Numerators,
    #[value(name = "lemma_area")]
    LemmaArea,
    #[value(name = "legendre")]
    Legendre,
    #[value(name = "halfperiods")]
    HalfPeriods,
    #[value(name = "psi515")]
    Psi515,
    #[value(name = "chain_audit")]
    ChainAudit,
    #[value(name = "north_south")]
    NorthSouth,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Betti42 => "betti42",
            Suite::ImL384 => "imL384",
            Suite::Numerators => "numerators",
            Suite::LemmaArea => "lemma_area",
            Suite::Legendre => "legendre",
            Suite::HalfPeriods => "halfperiods",
            Suite::Psi515 => "psi515",
            Suite::ChainAudit => "chain_audit",
            Suite::NorthSouth => "north_south",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::Betti42 => 10_000,
            Suite::ImL384 => 2000,
            Suite::Numerators => 20,
            Suite::LemmaArea => 300,
            Suite::Legendre => 200,
            Suite::HalfPeriods => 200,
            Suite::Psi515 => 5,
            Suite::ChainAudit => 20,
            Suite::NorthSouth => 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Rel {
    AtMost,
    AtLeast,
}

/// One check: a computed value against a bound, or an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub row: Row,
    pub value: Option<f64>,
    pub pass: bool,
    /// The engine could not produce a value.
    pub numerical_error: bool,
    pub error: bool,
}

fn base(lam: Option<C>, point: Option<C>, label: &str) -> Row {
    let mut r = Row::new("record");
    match lam {
        Some(l) => r.set_complex("lambda", l),
        None => r = r.null_complex("lambda"),
    }
    match point {
        Some(p) => r.set_complex("point", p),
        None => r = r.null_complex("point"),
    }
    r.with("label", label)
}

fn check(lam: Option<C>, point: Option<C>, label: &str, value: f64, bound: f64, rel: Rel, pass: Option<bool>) -> Check {
    let slack = match rel {
        Rel::AtMost => bound - value,
        Rel::AtLeast => value - bound,
    };
    let pass = pass.unwrap_or(value.is_finite() && slack >= 0.0);
    let row = base(lam, point, label)
        .with("value", value)
        .with("bound", bound)
        .with("relation", if rel == Rel::AtMost { "le" } else { "ge" })
        .with("slack", slack)
        .with("pass", pass)
        .with("error", serde_json::Value::Null);
    Check { row, value: Some(value), pass, numerical_error: false, error: false }
}

fn failed(lam: Option<C>, point: Option<C>, label: &str, code: &str, numerical: bool, msg: &str) -> Check {
    let row = base(lam, point, label)
        .with("value", serde_json::Value::Null)
        .with("bound", serde_json::Value::Null)
        .with("relation", serde_json::Value::Null)
        .with("slack", serde_json::Value::Null)
        .with("pass", false)
        .with("error", code)
        .with("message", msg);
    Check { row, value: None, pass: false, numerical_error: numerical, error: true }
}

fn from_error(lam: Option<C>, point: Option<C>, label: &str, e: &Error) -> Check {
    failed(lam, point, label, e.code(), e.is_numerical(), &e.to_string())
}

fn from_sweep(r: SweepReport) -> Vec<Check> {
    r.records
        .into_iter()
        .map(|x| {
            let label = format!("{:?}/{:?}", x.region, x.side);
            match (x.value, &x.error) {
                (Some(v), None) => check(Some(x.lambda), Some(x.xi), &label, v, r.bound, Rel::AtMost, Some(x.ok)),
                // sweep errors are failures of the continuation engine
                (_, e) => failed(Some(x.lambda), Some(x.xi), &label, "engine_error", true, e.as_deref().unwrap_or("no value")),
            }
        })
        .collect()
}

fn random_lambdas(seed: u64, n: usize) -> Vec<C> {
    let mut g = rng(seed);
    (0..n).map(|_| sample_lambda(&mut g, RHO_MIN)).collect()
}

fn per_lambda<F>(lams: &[C], f: F) -> Vec<Check>
where
    F: Fn(C) -> Vec<Check> + Sync,
{
    lams.par_iter().map(|&l| f(l)).collect::<Vec<_>>().into_iter().flatten().collect()
}

fn periods_and_wp(l: C) -> Result<(PeriodData, Weierstrass), Error> {
    let p = PeriodData::new(l)?;
    let w = Weierstrass::new(&p)?;
    Ok((p, w))
}

pub fn run(suite: Suite, seed: u64, samples: usize) -> Vec<Check> {
    match suite {
        Suite::Betti42 => {
            let per = samples.min(50);
            from_sweep(betti_sweep(&SweepConfig { seed, n_lambda: samples.div_ceil(per), per_lambda: per, rho_min: RHO_MIN }))
        }
        Suite::ImL384 => {
            let per = samples.min(20);
            from_sweep(im_log_sweep(&SweepConfig { seed, n_lambda: samples.div_ceil(per), per_lambda: per, rho_min: RHO_MIN }))
        }
        Suite::Numerators => {
            let mut lams = lambda_grid(5, RHO_MIN);
            let mut g = rng(seed);
            while lams.len() < samples {
                lams.push(sample_lambda(&mut g, RHO_MIN));
            }
            lams.truncate(samples);
            per_lambda(&lams, |l| {
                Boundary::ALL
                    .iter()
                    .map(|&b| {
                        let label = format!("{b:?}");
                        match numerator_bound_check(l, b, NUMERATOR_POINTS) {
                            Ok(r) => check(Some(l), None, &label, r.max_numerator, r.bound, Rel::AtMost, Some(r.all_ok)),
                            Err(e) => from_error(Some(l), None, &label, &e),
                        }
                    })
                    .collect()
            })
        }
        Suite::LemmaArea => {
            let mut g = rng(seed);
            let mut gamma = Vec::with_capacity(samples);
            while gamma.len() < samples {
                let l = C::new(g.gen_range(0.0..1.0), g.gen_range(-1.0..1.0));
                if l.norm() <= 1.0 && (1.0 - l).norm() <= 1.0 && l.norm() > 1e-9 {
                    gamma.push(l);
                }
            }
            let fl: Vec<C> = (0..samples).map(|_| sample_lambda(&mut g, RHO_MIN)).collect();
            let mut out = per_lambda(&gamma, |l| {
                let r = LegendreParam::new(l).and_then(|p| Ok((p, PeriodData::new(l)?)));
                vec![match r {
                    Ok((p, q)) => {
                        let a = area_lower_bound_check(&p, &q);
                        check(Some(l), None, "area", a.lhs, a.rhs, Rel::AtLeast, Some(a.ok))
                    }
                    Err(e) => from_error(Some(l), None, "area", &e),
                }]
            });
            out.extend(per_lambda(&fl, |l| match PeriodData::new(l) {
                Ok(p) => {
                    let tau = p.omega2 / p.omega1;
                    let eps = 1e-9;
                    let m = p.omega1.norm().min(p.omega2.norm());
                    vec![
                        check(Some(l), None, "abs_re_tau", tau.re.abs(), 0.5, Rel::AtMost, Some(tau.re.abs() <= 0.5 + eps)),
                        check(Some(l), None, "abs_tau", tau.norm(), 1.0, Rel::AtLeast, Some(tau.norm() >= 1.0 - eps)),
                        check(Some(l), None, "min_period", m, 1.0, Rel::AtLeast, Some(m >= 1.0 - eps)),
                    ]
                }
                Err(e) => vec![from_error(Some(l), None, "ratio", &e)],
            }));
            out
        }
        Suite::Legendre => per_lambda(&random_lambdas(seed, samples), |l| {
            vec![match PeriodData::new(l) {
                Ok(p) => check(Some(l), None, "legendre", p.legendre_residual().norm(), 1e-9, Rel::AtMost, None),
                Err(e) => from_error(Some(l), None, "legendre", &e),
            }]
        }),
        Suite::HalfPeriods => per_lambda(&random_lambdas(seed, samples), |l| {
            let r = periods_and_wp(l).and_then(|(_, w)| w.half_period_table());
            vec![match r {
                Ok(t) => {
                    let e = [(t[0] - 1.0).norm(), t[1].norm(), (t[2] - l).norm()].into_iter().fold(0.0, f64::max);
                    check(Some(l), None, "halfperiods", e, 1e-8, Rel::AtMost, None)
                }
                Err(e) => from_error(Some(l), None, "halfperiods", &e),
            }]
        }),
        Suite::Psi515 => per_lambda(&random_lambdas(seed, samples), |l| {
            vec![match periods_and_wp(l) {
                Ok((_, w)) => check(Some(l), None, "psi", psi_shift_max(&w, PSI_N_MAX, PSI_GRID), PSI_BOUND, Rel::AtMost, None),
                Err(e) => from_error(Some(l), None, "psi", &e),
            }]
        }),
        Suite::ChainAudit => {
            let lams = random_lambdas(seed, CHAIN_AUDIT_LAMBDAS);
            let jobs: Vec<(usize, C, Region)> =
                lams.iter().enumerate().flat_map(|(i, &l)| Region::ALL.into_iter().map(move |r| (i, l, r))).collect();
            jobs.par_iter()
                .map(|&(i, l, region)| {
                    let sub = seed.wrapping_mul(31).wrapping_add((i * Region::ALL.len()) as u64 + region as u64);
                    match chain_derivative_audit(l, region, samples, sub) {
                        Ok(rep) => rep
                            .samples
                            .iter()
                            .flat_map(|s| {
                                let mut v = Vec::new();
                                if let Some(fd) = s.fd_residual {
                                    v.push(check(Some(l), Some(s.xi), &format!("{region:?}/fd"), fd, FD_TOL, Rel::AtMost, None));
                                }
                                v.push(check(Some(l), Some(s.xi), &format!("{region:?}/chain"), s.chain_residual, CHAIN_TOL, Rel::AtMost, None));
                                v
                            })
                            .collect(),
                        Err(e) => vec![from_error(Some(l), None, &format!("{region:?}"), &e)],
                    }
                })
                .collect::<Vec<Vec<Check>>>()
                .into_iter()
                .flatten()
                .collect()
        }
        Suite::NorthSouth => per_lambda(&random_lambdas(seed, samples), |l| match north_south_check(l, NORTH_SOUTH_POINTS) {
            Ok(recs) => recs
                .iter()
                .map(|r| {
                    let mut c = check(Some(l), Some(r.xi), &format!("{:?}", r.boundary), r.residual, 1e-6, Rel::AtMost, Some(r.ok));
                    c.row.set("sign", r.sign);
                    c.row.set("translation_m", r.translation[0]);
                    c.row.set("translation_n", r.translation[1]);
                    c.row.set("betti_north", r.betti_north);
                    c.row.set("betti_south", r.betti_south);
                    c
                })
                .collect(),
            Err(e) => vec![from_error(Some(l), None, "north_south", &e)],
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub records: usize,
    pub failures: usize,
    pub errors: usize,
    pub numerical_errors: usize,
    pub max_value: Option<f64>,
    pub argmax: Option<usize>,
    pub first_failure: Option<usize>,
}

impl Summary {
    pub fn of(checks: &[Check]) -> Summary {
        let mut s = Summary {
            records: checks.len(),
            failures: 0,
            errors: 0,
            numerical_errors: 0,
            max_value: None,
            argmax: None,
            first_failure: None,
        };
        for (i, c) in checks.iter().enumerate() {
            if let Some(v) = c.value {
                if s.max_value.map_or(true, |m| v > m) {
                    s.max_value = Some(v);
                    s.argmax = Some(i);
                }
            }
            if !c.pass {
                s.first_failure.get_or_insert(i);
                if c.error {
                    s.errors += 1;
                } else {
                    s.failures += 1;
                }
            }
            s.numerical_errors += usize::from(c.numerical_error);
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.errors == 0
    }

    pub fn row(&self, suite: Suite, seed: u64, samples: usize) -> Row {
        Row::new("summary")
            .with("suite", suite.name())
            .with("seed", seed)
            .with("samples", samples)
            .with("records", self.records)
            .with("passed", self.passed())
            .with("failures", self.failures)
            .with("errors", self.errors)
            .with("max_value", self.max_value)
            .with("argmax", self.argmax)
            .with("first_failure", self.first_failure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_max_is_the_record_max() {
        let checks = run(Suite::Legendre, 3, 12);
        let s = Summary::of(&checks);
        let m = checks.iter().filter_map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s.max_value, Some(m));
        assert_eq!(checks[s.argmax.unwrap()].value, Some(m));
        assert!(s.passed());
    }

    #[test]
    fn failures_are_counted_in_order() {
        let l = Some(C::new(0.3, 0.0));
        let checks = vec![
            check(l, None, "a", 1.0, 2.0, Rel::AtMost, None),
            check(l, None, "b", 3.0, 2.0, Rel::AtMost, None),
            failed(l, None, "c", "no_convergence", true, "x"),
            check(l, None, "d", 1.0, 2.0, Rel::AtLeast, None),
        ];
        let s = Summary::of(&checks);
        assert_eq!((s.failures, s.errors, s.numerical_errors, s.first_failure), (2, 1, 1, Some(1)));
        assert_eq!(s.max_value, Some(3.0));
    }
}
