//! Exhaustive enumeration of `M_2(Z/nZ)`.
//!
//! This is the ground-truth oracle: it never consults the closed forms, only
//! the definitions of permanent, determinant and invertibility.

use std::thread;

use crate::closedform::DivisorSumCheck;
use crate::error::{checked_add, checked_mul, Count, Error, Result};
use crate::modarith::{divisors, euler_phi, factorize, gcd, mul_mod, reduce, Residue};

/// Default upper bound on the modulus accepted by enumeration.
pub const DEFAULT_CAP: u64 = 64;

/// A 2x2 matrix `[[a, b], [c, d]]` over Z/nZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix2 {
    entries: [u64; 4],
    modulus: u64,
}

impl Matrix2 {
    /// Reduces each entry mod `n`.
    pub fn new(a: i128, b: i128, c: i128, d: i128, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self::from_reduced([a, b, c, d].map(|e| reduce(e, n)), n))
    }

    /// Entries must already lie in `[0, n)`.
    pub(crate) fn from_reduced(entries: [u64; 4], modulus: u64) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus));
        Self { entries, modulus }
    }

    pub fn identity(n: u64) -> Result<Self> {
        Self::new(1, 0, 0, 1, n)
    }

    /// Entries in row-major order `[a, b, c, d]`.
    pub fn entries(&self) -> [u64; 4] {
        self.entries
    }

    pub fn entry(&self, i: usize) -> Residue {
        Residue::new(self.entries[i] as i128, self.modulus).expect("modulus is nonzero")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position of this matrix in the lexicographic enumeration of `Z_n^4`.
    pub fn index(&self) -> u64 {
        let n = self.modulus;
        let [a, b, c, d] = self.entries;
        ((a * n + b) * n + c) * n + d
    }

    pub fn permanent(&self) -> Residue {
        let [a, b, c, d] = self.entries;
        let n = self.modulus;
        let v = (mul_mod(a, d, n) as u128 + mul_mod(b, c, n) as u128) % n as u128;
        Residue::new(v as i128, n).expect("modulus is nonzero")
    }

    pub fn determinant(&self) -> Residue {
        let [a, b, c, d] = self.entries;
        let n = self.modulus;
        let v = mul_mod(a, d, n) as i128 - mul_mod(b, c, n) as i128;
        Residue::new(v, n).expect("modulus is nonzero")
    }

    /// Whether the determinant is a unit, i.e. the matrix lies in `GL_2(Z/nZ)`.
    pub fn is_unit(&self) -> bool {
        gcd(self.determinant().value(), self.modulus) == 1
    }

    /// Reduces every entry modulo a divisor `m` of the modulus.
    pub fn reduce_to(&self, m: u64) -> Result<Self> {
        if m == 0 || !self.modulus.is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "{m} does not divide modulus {}",
                self.modulus
            )));
        }
        Ok(Self::from_reduced(self.entries.map(|e| e % m), m))
    }
}

impl std::fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.modulus)
    }
}

pub fn permanent(m: &Matrix2) -> Residue {
    m.permanent()
}

pub fn determinant(m: &Matrix2) -> Residue {
    m.determinant()
}

pub fn is_unit(m: &Matrix2) -> bool {
    m.is_unit()
}

/// Resource limits for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusConfig {
    /// Largest modulus that may be enumerated.
    pub cap: u64,
    /// Worker threads. Values below 1 are treated as 1.
    pub jobs: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            jobs: 1,
        }
    }
}

impl CensusConfig {
    pub fn with_jobs(jobs: usize) -> Self {
        Self {
            jobs,
            ..Self::default()
        }
    }

    pub fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        // Per-residue counters are u64, so n^4 must fit.
        if n > u16::MAX as u64 {
            return Err(Error::Overflow);
        }
        Ok(())
    }
}

/// Per-residue counts of permanents and determinants over all of `M_2(Z/nZ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub modulus: u64,
    /// `f_counts[x] = |F_n(x)|`, matrices with permanent `x`.
    pub f_counts: Vec<u64>,
    /// `d_counts[x] = |D_n(x)|`, matrices with determinant `x`.
    pub d_counts: Vec<u64>,
    /// `g_counts[x] = |G_n(x)|`, invertible matrices with permanent `x`.
    pub g_counts: Vec<u64>,
    /// `|GL_2(Z/nZ)|`.
    pub unit_total: u64,
}

impl CensusTable {
    fn zeroed(n: u64) -> Self {
        let len = n as usize;
        Self {
            modulus: n,
            f_counts: vec![0; len],
            d_counts: vec![0; len],
            g_counts: vec![0; len],
            unit_total: 0,
        }
    }

    fn merge(&mut self, other: &CensusTable) {
        for (acc, v) in [
            (&mut self.f_counts, &other.f_counts),
            (&mut self.d_counts, &other.d_counts),
            (&mut self.g_counts, &other.g_counts),
        ] {
            acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        self.unit_total += other.unit_total;
    }

    /// Checks the sum rules every census must satisfy.
    pub fn is_consistent(&self) -> bool {
        let total = self.modulus.pow(4);
        self.f_counts.iter().sum::<u64>() == total
            && self.d_counts.iter().sum::<u64>() == total
            && self.g_counts.iter().sum::<u64>() == self.unit_total
            && self.g_counts.iter().zip(&self.f_counts).all(|(g, f)| g <= f)
    }

    pub fn g(&self, x: i128) -> u64 {
        self.g_counts[reduce(x, self.modulus) as usize]
    }

    pub fn f(&self, x: i128) -> u64 {
        self.f_counts[reduce(x, self.modulus) as usize]
    }

    pub fn d(&self, x: i128) -> u64 {
        self.d_counts[reduce(x, self.modulus) as usize]
    }
}

fn unit_table(n: u64) -> Vec<bool> {
    (0..n).map(|r| gcd(r, n) == 1).collect()
}

/// Counts over the slab of matrices whose first entry lies in `a_range`.
fn census_slab(n: u64, a_range: std::ops::Range<u64>, is_unit: &[bool]) -> CensusTable {
    let mut t = CensusTable::zeroed(n);
    let nu = n as usize;
    for a in a_range {
        for b in 0..n {
            for c in 0..n {
                let bc = (b * c % n) as usize;
                let mut ad = 0usize;
                for _d in 0..n {
                    let mut perm = ad + bc;
                    if perm >= nu {
                        perm -= nu;
                    }
                    let mut det = ad + nu - bc;
                    if det >= nu {
                        det -= nu;
                    }
                    t.f_counts[perm] += 1;
                    t.d_counts[det] += 1;
                    if is_unit[det] {
                        t.g_counts[perm] += 1;
                        t.unit_total += 1;
                    }
                    ad += a as usize;
                    if ad >= nu {
                        ad -= nu;
                    }
                }
            }
        }
    }
    t
}

/// Splits `0..n` into at most `jobs` contiguous, near-equal ranges.
fn partition(n: u64, jobs: usize) -> Vec<std::ops::Range<u64>> {
    let jobs = (jobs.max(1) as u64).min(n);
    (0..jobs)
        .map(|j| (j * n / jobs)..((j + 1) * n / jobs))
        .collect()
}

/// Enumerates all `n^4` matrices and tallies `F_n`, `D_n` and `G_n`.
///
/// The first-entry axis is partitioned across `config.jobs` workers that each
/// fill a private table; tables are summed afterwards, so the result does not
/// depend on the worker count.
pub fn enumerate_census(n: u64, config: &CensusConfig) -> Result<CensusTable> {
    config.check(n)?;
    let is_unit = unit_table(n);
    let ranges = partition(n, config.jobs);
    if ranges.len() == 1 {
        return Ok(census_slab(n, 0..n, &is_unit));
    }
    let parts: Vec<CensusTable> = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let is_unit = &is_unit;
                s.spawn(move || census_slab(n, r, is_unit))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });
    let mut table = CensusTable::zeroed(n);
    for part in &parts {
        table.merge(part);
    }
    Ok(table)
}

/// Calls `visit` on every matrix of `M_2(Z/nZ)` in lexicographic order.
pub fn for_each_matrix(n: u64, config: &CensusConfig, mut visit: impl FnMut(Matrix2)) -> Result<()> {
    config.check(n)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    visit(Matrix2::from_reduced([a, b, c, d], n));
                }
            }
        }
    }
    Ok(())
}

/// All matrices satisfying `keep`, in lexicographic order.
pub fn collect_matrices(
    n: u64,
    config: &CensusConfig,
    mut keep: impl FnMut(&Matrix2) -> bool,
) -> Result<Vec<Matrix2>> {
    let mut out = Vec::new();
    for_each_matrix(n, config, |m| {
        if keep(&m) {
            out.push(m);
        }
    })?;
    Ok(out)
}

/// Enumerated `M_2(Z/nZ)` bucketed by permanent, for repeated set queries.
#[derive(Debug, Clone)]
pub struct ClassIndex {
    modulus: u64,
    by_permanent: Vec<Vec<Matrix2>>,
    d_counts: Vec<u64>,
}

impl ClassIndex {
    pub fn build(n: u64, config: &CensusConfig) -> Result<Self> {
        let mut by_permanent = vec![Vec::new(); n as usize];
        let mut d_counts = vec![0; n as usize];
        for_each_matrix(n, config, |m| {
            by_permanent[m.permanent().value() as usize].push(m);
            d_counts[m.determinant().value() as usize] += 1;
        })?;
        Ok(Self {
            modulus: n,
            by_permanent,
            d_counts,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `F_n(x)`.
    pub fn f_members(&self, x: i128) -> &[Matrix2] {
        &self.by_permanent[reduce(x, self.modulus) as usize]
    }

    /// `G_n(x)`.
    pub fn g_members(&self, x: i128) -> impl Iterator<Item = &Matrix2> + '_ {
        self.f_members(x).iter().filter(|m| m.is_unit())
    }

    pub fn d_count(&self, x: i128) -> u64 {
        self.d_counts[reduce(x, self.modulus) as usize]
    }

    pub fn g_count(&self, x: i128) -> u64 {
        self.g_members(x).count() as u64
    }
}

/// `sum_{d | n} phi(n/d) |F_n(d)|` against `n^4`, from enumeration.
pub fn f_divisor_sum_check(n: u64, config: &CensusConfig) -> Result<DivisorSumCheck> {
    let table = enumerate_census(n, config)?;
    let lhs = weighted_divisor_sum(n, &table.f_counts)?;
    Ok(DivisorSumCheck::new(lhs, (n as Count).pow(4)))
}

/// `sum_{d | n} phi(n/d) |G_n(d)|` against `|GL_2(Z/nZ)|`, both from enumeration.
pub fn g_divisor_sum_check(n: u64, config: &CensusConfig) -> Result<DivisorSumCheck> {
    let table = enumerate_census(n, config)?;
    let lhs = weighted_divisor_sum(n, &table.g_counts)?;
    Ok(DivisorSumCheck::new(lhs, table.unit_total as Count))
}

fn weighted_divisor_sum(n: u64, counts: &[u64]) -> Result<Count> {
    let mut lhs: Count = 0;
    for d in divisors(&factorize(n)?) {
        let phi = euler_phi(&factorize(n / d)?) as Count;
        lhs = checked_add(lhs, checked_mul(phi, counts[(d % n) as usize] as Count)?)?;
    }
    Ok(lhs)
}

/// Outcome of checking that every member of `G_n(0)` has entries coprime to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeEntryReport {
    pub modulus: u64,
    pub members: u64,
    pub first_violation: Option<Matrix2>,
}

impl CoprimeEntryReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Scans `G_n(0)` for a member with an entry sharing a factor with `n`.
pub fn zero_permanent_units_have_unit_entries(
    n: u64,
    config: &CensusConfig,
) -> Result<CoprimeEntryReport> {
    let mut report = CoprimeEntryReport {
        modulus: n,
        members: 0,
        first_violation: None,
    };
    for_each_matrix(n, config, |m| {
        if m.permanent().value() == 0 && m.is_unit() {
            report.members += 1;
            if report.first_violation.is_none() && m.entries().iter().any(|&e| gcd(e, n) != 1) {
                report.first_violation = Some(m);
            }
        }
    })?;
    Ok(report)
}
