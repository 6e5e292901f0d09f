//! Batch cross-checks between the closed forms, the enumeration oracle and
//! the bijections. Each suite sweeps every modulus up to a bound and stops at
//! the first failing instance.

use std::fmt;
use std::str::FromStr;

use crate::bijections::{verify_crt_with, verify_with_index, BijectionReport, MapSpec};
use crate::census::{enumerate_census, f_divisor_sum_check, CensusConfig, ClassIndex};
use crate::closedform::{divisor_sum_check, g_count, gcd_class_representative, gl2_order};
use crate::error::{Count, Error, Result};
use crate::modarith::{factorize, gcd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    OracleAgreement,
    DivisorSum,
    FDivisorSum,
    Bijections,
    Multiplicativity,
    GcdInvariance,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::OracleAgreement,
        Suite::DivisorSum,
        Suite::FDivisorSum,
        Suite::Bijections,
        Suite::Multiplicativity,
        Suite::GcdInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleAgreement => "oracle-agreement",
            Suite::DivisorSum => "divisor-sum",
            Suite::FDivisorSum => "f-divisor-sum",
            Suite::Bijections => "bijections",
            Suite::Multiplicativity => "multiplicativity",
            Suite::GcdInvariance => "gcd-invariance",
        }
    }

    /// Whether the suite enumerates matrices and is therefore bound by the cap.
    pub fn needs_oracle(self) -> bool {
        matches!(
            self,
            Suite::OracleAgreement | Suite::FDivisorSum | Suite::Bijections
        )
    }

    /// Parses a comma-separated list; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::InvalidArgument("no suites selected".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub max_n: u64,
    /// Individual instances checked before stopping.
    pub checks: u64,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

struct Tally {
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failure: None,
        }
    }

    /// Records one check; returns false once a failure has been seen.
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
        self.failure.is_none()
    }

    fn report(&mut self, report: &BijectionReport, describe: impl FnOnce() -> String) -> bool {
        let ok = report.is_bijection();
        self.check(ok, || {
            let mut s = describe();
            s.push_str(&format!(
                ": domain {} codomain {} injective {} surjective {} contained {}",
                report.domain_size,
                report.codomain_size,
                report.injective,
                report.surjective,
                report.range_contained
            ));
            if let Some(m) = report.first_violation {
                s.push_str(&format!(" first violation {m}"));
            }
            s
        })
    }
}

/// Runs one suite over every modulus in `[1, max_n]`.
pub fn run_suite(suite: Suite, max_n: u64, config: &CensusConfig) -> Result<SuiteOutcome> {
    if max_n == 0 {
        return Err(Error::ZeroModulus);
    }
    if suite.needs_oracle() && max_n > config.cap {
        return Err(Error::CapExceeded {
            n: max_n,
            cap: config.cap,
        });
    }
    let mut t = Tally::new();
    match suite {
        Suite::OracleAgreement => oracle_agreement(max_n, config, &mut t)?,
        Suite::DivisorSum => {
            for n in 1..=max_n {
                let c = divisor_sum_check(n)?;
                if !t.check(c.equal, || format!("n = {n}: lhs {} != rhs {}", c.lhs, c.rhs)) {
                    break;
                }
            }
        }
        Suite::FDivisorSum => {
            for n in 1..=max_n {
                let c = f_divisor_sum_check(n, config)?;
                if !t.check(c.equal, || format!("n = {n}: lhs {} != rhs {}", c.lhs, c.rhs)) {
                    break;
                }
            }
        }
        Suite::Bijections => bijection_sweep(max_n, config, &mut t)?,
        Suite::Multiplicativity => multiplicativity(max_n, &mut t)?,
        Suite::GcdInvariance => {
            'outer: for n in 1..=max_n {
                for x in 0..n as i128 {
                    let rep = gcd_class_representative(n, x)?;
                    let (gx, grep) = (g_count(n, x)?, g_count(n, rep as i128)?);
                    if !t.check(gx == grep, || {
                        format!("n = {n}: g({x}) = {gx} but g({rep}) = {grep}")
                    }) {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(SuiteOutcome {
        suite,
        max_n,
        checks: t.checks,
        first_failure: t.failure,
    })
}

/// Runs several suites in order.
pub fn run_suites(suites: &[Suite], max_n: u64, config: &CensusConfig) -> Result<Vec<SuiteOutcome>> {
    suites.iter().map(|&s| run_suite(s, max_n, config)).collect()
}

fn oracle_agreement(max_n: u64, config: &CensusConfig, t: &mut Tally) -> Result<()> {
    for n in 1..=max_n {
        let table = enumerate_census(n, config)?;
        if !t.check(table.is_consistent(), || format!("n = {n}: census sum rules fail")) {
            return Ok(());
        }
        let order = gl2_order(n)?;
        if !t.check(table.unit_total as Count == order, || {
            format!("n = {n}: enumerated |GL_2| {} != {order}", table.unit_total)
        }) {
            return Ok(());
        }
        for x in 0..n as i128 {
            let (oracle, closed) = (table.g(x) as Count, g_count(n, x)?);
            if !t.check(oracle == closed, || {
                format!("n = {n}, x = {x}: enumerated {oracle} != closed form {closed}")
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn multiplicativity(max_n: u64, t: &mut Tally) -> Result<()> {
    for a in 1..=max_n {
        for b in 1..=max_n / a {
            if gcd(a, b) != 1 {
                continue;
            }
            for x in 0..(a * b) as i128 {
                let lhs = g_count(a * b, x)?;
                let rhs = g_count(a, x)? * g_count(b, x)?;
                if !t.check(lhs == rhs, || {
                    format!("g_{}({x}) = {lhs} != g_{a}({x}) g_{b}({x}) = {rhs}", a * b)
                }) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// Odd and even prime powers `p^k <= max_n` with `k >= 2`.
fn prime_powers_with_lift(max_n: u64) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    for q in 4..=max_n {
        if let [(p, k)] = factorize(q)?.prime_powers() {
            if *k >= 2 {
                out.push((*p, *k));
            }
        }
    }
    Ok(out)
}

fn bijection_sweep(max_n: u64, config: &CensusConfig, t: &mut Tally) -> Result<()> {
    let mut indices: Vec<ClassIndex> = Vec::with_capacity(max_n as usize);
    for n in 1..=max_n {
        indices.push(ClassIndex::build(n, config)?);
    }
    let index = |n: u64| &indices[(n - 1) as usize];

    for n in 1..=max_n {
        let idx = index(n);
        for x in 0..n as i128 {
            let spec = MapSpec::SignFlip { n };
            let r = verify_with_index(&spec, idx, x, x)?;
            if !t.report(&r, || format!("sign_flip n = {n}, x = {x}")) {
                return Ok(());
            }
            for mult in (0..n as i128).filter(|&u| gcd(u as u64, n) == 1) {
                let spec = MapSpec::RowScale { n, mult };
                let r = verify_with_index(&spec, idx, x, spec.natural_target(x))?;
                if !t.report(&r, || format!("row_scale n = {n}, x = {x}, mult = {mult}")) {
                    return Ok(());
                }
            }
        }
    }

    for (p, k) in prime_powers_with_lift(max_n)? {
        let idx = index(p.pow(k));
        for i in 1..k {
            let spec = MapSpec::LambdaShift { p, k, i };
            let r = verify_with_index(&spec, idx, 0, spec.natural_target(0))?;
            if !t.report(&r, || format!("lambda_shift p = {p}, k = {k}, i = {i}")) {
                return Ok(());
            }
        }
    }

    for a in 2..=max_n {
        for b in 2..=max_n / a {
            if gcd(a, b) != 1 {
                continue;
            }
            for x in 0..(a * b) as i128 {
                let r = verify_crt_with(index(a * b), index(a), index(b), x, x)?;
                if !t.report(&r, || format!("crt_split a = {a}, b = {b}, x = {x}")) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_suites() {
        assert_eq!(Suite::parse_list("all").unwrap(), Suite::ALL);
        assert_eq!(
            Suite::parse_list("gcd-invariance, divisor-sum").unwrap(),
            [Suite::DivisorSum, Suite::GcdInvariance]
        );
        assert!(Suite::parse_list("nope").is_err());
        assert!(Suite::parse_list("").is_err());
    }

    #[test]
    fn every_suite_passes_small() {
        let cfg = CensusConfig::default();
        for o in run_suites(&Suite::ALL, 12, &cfg).unwrap() {
            assert!(o.passed(), "{}: {:?}", o.suite, o.first_failure);
            assert!(o.checks > 0);
        }
    }

    #[test]
    fn oracle_suites_respect_cap() {
        let cfg = CensusConfig { cap: 8, jobs: 1 };
        assert_eq!(
            run_suite(Suite::Bijections, 9, &cfg),
            Err(Error::CapExceeded { n: 9, cap: 8 })
        );
        assert!(run_suite(Suite::DivisorSum, 9, &cfg).unwrap().passed());
    }

    #[test]
    fn lifted_prime_powers() {
        assert_eq!(
            prime_powers_with_lift(30).unwrap(),
            [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]
        );
    }
}
