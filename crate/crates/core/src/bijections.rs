//! The constructive maps behind the counting arguments, and a verifier that
//! checks each one really is a bijection between two enumerated sets.

use std::collections::HashSet;
use std::hash::Hash;

use crate::census::{collect_matrices, CensusConfig, ClassIndex, Matrix2};
use crate::error::{Error, Result};
use crate::modarith::{gcd, is_prime, mod_inv, mul_mod, reduce};

/// `[[a, b], [c, d]] -> [[a, -b], [c, d]]`. Swaps permanent and determinant.
pub fn sign_flip(m: &Matrix2) -> Matrix2 {
    let n = m.modulus();
    let [a, b, c, d] = m.entries();
    Matrix2::from_reduced([a, (n - b) % n, c, d], n)
}

/// `[[a, b], [c, d]] -> [[a, b], [c, d + a^-1 p^i]]` on `G_{p^k}(0)`, landing in
/// `G_{p^k}(p^i)`.
///
/// The input must be invertible with zero permanent mod `p^k`, and `1 <= i < k`.
pub fn lambda_shift(m: &Matrix2, p: u64, k: u32, i: u32) -> Result<Matrix2> {
    let n = prime_power(p, k)?;
    if i == 0 || i >= k {
        return Err(Error::InvalidArgument(format!(
            "shift exponent must satisfy 1 <= i < k, got i = {i}, k = {k}"
        )));
    }
    if m.modulus() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix modulus {} is not {p}^{k}",
            m.modulus()
        )));
    }
    if m.permanent().value() != 0 || !m.is_unit() {
        return Err(Error::DomainViolation(format!("{m} is not in G_{n}(0)")));
    }
    let [a, b, c, d] = m.entries();
    let a_inv = mod_inv(a as i128, n)?.value();
    let shift = mul_mod(a_inv, p.pow(i), n);
    Ok(Matrix2::from_reduced([a, b, c, (d + shift) % n], n))
}

/// Inverse of [`lambda_shift`]: subtracts `a^-1 p^i` from `d`. Requires `a` to
/// be a unit.
pub fn lambda_unshift(m: &Matrix2, p: u64, k: u32, i: u32) -> Result<Matrix2> {
    let n = prime_power(p, k)?;
    let [a, b, c, d] = m.entries();
    let a_inv = mod_inv(a as i128, n)?.value();
    let shift = mul_mod(a_inv, p.pow(i), n);
    Ok(Matrix2::from_reduced([a, b, c, (d + n - shift) % n], n))
}

fn prime_power(p: u64, k: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    p.checked_pow(k).ok_or(Error::Overflow)
}

/// Multiplies the first row by a unit `mult`, scaling the permanent by `mult`.
pub fn row_scale(m: &Matrix2, mult: i128) -> Result<Matrix2> {
    let n = m.modulus();
    let mult = reduce(mult, n);
    if gcd(mult, n) != 1 {
        return Err(Error::NotInvertible {
            value: mult,
            modulus: n,
        });
    }
    let [a, b, c, d] = m.entries();
    Ok(Matrix2::from_reduced(
        [mul_mod(mult, a, n), mul_mod(mult, b, n), c, d],
        n,
    ))
}

/// Entrywise reduction of a matrix mod `ab` to the pair (mod `a`, mod `b`).
pub fn crt_split(m: &Matrix2, a: u64, b: u64) -> Result<(Matrix2, Matrix2)> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroModulus);
    }
    if gcd(a, b) != 1 {
        return Err(Error::NotCoprime(a, b));
    }
    if a.checked_mul(b) != Some(m.modulus()) {
        return Err(Error::InvalidArgument(format!(
            "matrix modulus {} is not {a} * {b}",
            m.modulus()
        )));
    }
    Ok((m.reduce_to(a)?, m.reduce_to(b)?))
}

/// Outcome of checking a map between two finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub domain_size: u64,
    pub codomain_size: u64,
    pub injective: bool,
    pub surjective: bool,
    pub range_contained: bool,
    /// First domain element whose image left the target or collided.
    pub first_violation: Option<Matrix2>,
}

impl BijectionReport {
    pub fn is_bijection(&self) -> bool {
        self.injective && self.surjective && self.range_contained
    }
}

/// Checks `map` as a function from `domain` into a target set of known size
/// with membership predicate `in_target`.
///
/// Surjectivity is decided by counting: an injective map whose image lies in
/// the target is onto exactly when the image has as many elements as the target.
pub fn verify_map<'a, T, I, F, P>(
    domain: I,
    mut map: F,
    mut in_target: P,
    target_size: u64,
) -> Result<BijectionReport>
where
    I: IntoIterator<Item = &'a Matrix2>,
    T: Eq + Hash,
    F: FnMut(&Matrix2) -> Result<T>,
    P: FnMut(&T) -> bool,
{
    let mut seen = HashSet::new();
    let mut report = BijectionReport {
        domain_size: 0,
        codomain_size: target_size,
        injective: true,
        surjective: false,
        range_contained: true,
        first_violation: None,
    };
    for m in domain {
        report.domain_size += 1;
        let image = map(m)?;
        let contained = in_target(&image);
        let fresh = seen.insert(image);
        if !contained {
            report.range_contained = false;
        }
        if !fresh {
            report.injective = false;
        }
        if (!contained || !fresh) && report.first_violation.is_none() {
            report.first_violation = Some(*m);
        }
    }
    let image_size = seen.len() as u64;
    report.surjective = report.range_contained && image_size == target_size;
    Ok(report)
}

/// Which constructive map to verify, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSpec {
    /// `F_n(x) -> D_n(y)`.
    SignFlip { n: u64 },
    /// `G_{p^k}(x) -> G_{p^k}(y)`, normally `x = 0`, `y = p^i`.
    LambdaShift { p: u64, k: u32, i: u32 },
    /// `G_n(x) -> G_n(y)`, normally `y = mult * x`.
    RowScale { n: u64, mult: i128 },
    /// `G_{ab}(x) -> G_a(y) x G_b(y)`.
    CrtSplit { a: u64, b: u64 },
}

impl MapSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MapSpec::SignFlip { .. } => "sign_flip",
            MapSpec::LambdaShift { .. } => "lambda_shift",
            MapSpec::RowScale { .. } => "row_scale",
            MapSpec::CrtSplit { .. } => "crt_split",
        }
    }

    /// Modulus of the source set.
    pub fn modulus(&self) -> Result<u64> {
        match *self {
            MapSpec::SignFlip { n } | MapSpec::RowScale { n, .. } => Ok(n),
            MapSpec::LambdaShift { p, k, .. } => prime_power(p, k),
            MapSpec::CrtSplit { a, b } => a.checked_mul(b).ok_or(Error::Overflow),
        }
    }

    /// The class the map is expected to send `source_class` to.
    pub fn natural_target(&self, source_class: i128) -> i128 {
        match *self {
            MapSpec::SignFlip { .. } | MapSpec::CrtSplit { .. } => source_class,
            MapSpec::LambdaShift { p, i, .. } => (p as i128).pow(i),
            MapSpec::RowScale { mult, .. } => mult * source_class,
        }
    }
}

/// Enumerates the source set of `spec` at `source_class`, applies the map and
/// checks it against the target set at `target_class`.
pub fn verify_bijection(
    spec: &MapSpec,
    source_class: i128,
    target_class: i128,
    config: &CensusConfig,
) -> Result<BijectionReport> {
    let n = spec.modulus()?;
    config.check(n)?;
    match *spec {
        MapSpec::CrtSplit { a, b } => {
            let source = ClassIndex::build(n, config)?;
            let left = ClassIndex::build(a, config)?;
            let right = ClassIndex::build(b, config)?;
            verify_crt_with(&source, &left, &right, source_class, target_class)
        }
        _ => {
            let index = ClassIndex::build(n, config)?;
            verify_with_index(spec, &index, source_class, target_class)
        }
    }
}

/// Like [`verify_bijection`] for the single-modulus maps, reusing an already
/// enumerated index of `M_2(Z/nZ)`.
pub fn verify_with_index(
    spec: &MapSpec,
    index: &ClassIndex,
    source_class: i128,
    target_class: i128,
) -> Result<BijectionReport> {
    let n = spec.modulus()?;
    if index.modulus() != n {
        return Err(Error::InvalidArgument(format!(
            "index modulus {} does not match map modulus {n}",
            index.modulus()
        )));
    }
    let target = reduce(target_class, n);
    match *spec {
        MapSpec::SignFlip { .. } => verify_map(
            index.f_members(source_class),
            |m| Ok(sign_flip(m)),
            |img| img.determinant().value() == target,
            index.d_count(target_class),
        ),
        MapSpec::LambdaShift { p, k, i } => verify_map(
            index.g_members(source_class),
            |m| lambda_shift(m, p, k, i),
            |img| img.permanent().value() == target && img.is_unit(),
            index.g_count(target_class),
        ),
        MapSpec::RowScale { mult, .. } => verify_map(
            index.g_members(source_class),
            |m| row_scale(m, mult),
            |img| img.permanent().value() == target && img.is_unit(),
            index.g_count(target_class),
        ),
        MapSpec::CrtSplit { .. } => Err(Error::InvalidArgument(
            "crt_split needs three indices; use verify_crt_with".into(),
        )),
    }
}

/// Checks that entrywise reduction maps `G_{ab}(x)` onto `G_a(y) x G_b(y)`.
pub fn verify_crt_with(
    source: &ClassIndex,
    left: &ClassIndex,
    right: &ClassIndex,
    source_class: i128,
    target_class: i128,
) -> Result<BijectionReport> {
    let (a, b) = (left.modulus(), right.modulus());
    let (ta, tb) = (reduce(target_class, a), reduce(target_class, b));
    let target_size = left.g_count(target_class) * right.g_count(target_class);
    verify_map(
        source.g_members(source_class),
        |m| crt_split(m, a, b),
        |(l, r)| {
            l.permanent().value() == ta
                && l.is_unit()
                && r.permanent().value() == tb
                && r.is_unit()
        },
        target_size,
    )
}

/// All members of `G_n(x)`, by direct enumeration.
pub fn g_members(n: u64, x: i128, config: &CensusConfig) -> Result<Vec<Matrix2>> {
    let x = reduce(x, n.max(1));
    collect_matrices(n, config, |m| m.permanent().value() == x && m.is_unit())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i128, b: i128, c: i128, d: i128, n: u64) -> Matrix2 {
        Matrix2::new(a, b, c, d, n).unwrap()
    }

    fn cfg() -> CensusConfig {
        CensusConfig::default()
    }

    #[test]
    fn sign_flip_examples() {
        assert_eq!(sign_flip(&m(1, 2, 3, 4, 5)), m(1, 3, 3, 4, 5));
        let fixed = m(3, 0, 2, 1, 7);
        assert_eq!(sign_flip(&fixed), fixed);
        assert_eq!(sign_flip(&m(1, 1, 1, 1, 2)), m(1, 1, 1, 1, 2));
    }

    #[test]
    fn sign_flip_swaps_perm_and_det() {
        crate::census::for_each_matrix(6, &cfg(), |x| {
            let y = sign_flip(&x);
            assert_eq!(x.permanent(), y.determinant());
            assert_eq!(x.determinant(), y.permanent());
            assert_eq!(sign_flip(&y), x);
        })
        .unwrap();
    }

    #[test]
    fn lambda_shift_example() {
        let x = m(1, 1, 2, 7, 9);
        assert_eq!(x.permanent().value(), 0);
        assert_eq!(x.determinant().value(), 5);
        let y = lambda_shift(&x, 3, 2, 1).unwrap();
        assert_eq!(y, m(1, 1, 2, 1, 9));
        assert_eq!(y.permanent().value(), 3);
        assert!(y.is_unit());
        assert_eq!(lambda_unshift(&y, 3, 2, 1).unwrap(), x);
    }

    #[test]
    fn lambda_shift_rejects_bad_input() {
        // permanent 1, not in the zero class
        assert!(matches!(
            lambda_shift(&m(1, 0, 0, 1, 9), 3, 2, 1),
            Err(Error::DomainViolation(_))
        ));
        // zero permanent but singular
        assert!(matches!(
            lambda_shift(&m(0, 0, 0, 0, 9), 3, 2, 1),
            Err(Error::DomainViolation(_))
        ));
        assert!(lambda_shift(&m(1, 1, 2, 7, 9), 3, 2, 2).is_err());
        assert!(lambda_shift(&m(1, 1, 2, 7, 9), 3, 2, 0).is_err());
        assert_eq!(lambda_shift(&m(1, 1, 2, 7, 9), 9, 1, 1), Err(Error::NotPrime(9)));
        assert!(lambda_shift(&m(1, 1, 2, 7, 27), 3, 2, 1).is_err());
    }

    #[test]
    fn lambda_shift_on_powers_of_two_is_vacuous() {
        for k in 2..=4 {
            let r = verify_bijection(&MapSpec::LambdaShift { p: 2, k, i: 1 }, 0, 2, &cfg()).unwrap();
            assert_eq!(r.domain_size, 0);
            assert_eq!(r.codomain_size, 0);
            assert!(r.is_bijection());
        }
    }

    #[test]
    fn row_scale_examples() {
        for n in 1..=12u64 {
            for mult in (0..n as i128).filter(|&u| gcd(u as u64, n) == 1) {
                let inv = mod_inv(mult, n).unwrap().value() as i128;
                crate::census::for_each_matrix(n, &cfg(), |x| {
                    let y = row_scale(&x, mult).unwrap();
                    assert_eq!(row_scale(&y, inv).unwrap(), x);
                    assert_eq!(
                        y.permanent().value(),
                        mul_mod(x.permanent().value(), reduce(mult, n), n)
                    );
                    assert_eq!(y.is_unit(), x.is_unit());
                })
                .unwrap();
            }
        }
        assert_eq!(
            row_scale(&m(1, 0, 0, 1, 4), 2),
            Err(Error::NotInvertible { value: 2, modulus: 4 })
        );
    }

    #[test]
    fn row_scale_g7_example() {
        // oracle first: |G_7(1)| by enumeration
        let g1 = g_members(7, 1, &cfg()).unwrap().len() as u64;
        let g3 = g_members(7, 3, &cfg()).unwrap().len() as u64;
        assert_eq!(g1, g3);
        let r = verify_bijection(&MapSpec::RowScale { n: 7, mult: 3 }, 1, 3, &cfg()).unwrap();
        assert!(r.is_bijection());
        assert_eq!(r.domain_size, g1);
        assert_eq!(r.codomain_size, g1);
        assert_eq!(g1, 300);
    }

    #[test]
    fn crt_split_examples() {
        let (l, r) = crt_split(&m(7, 1, 2, 5, 15), 3, 5).unwrap();
        assert_eq!(l, m(1, 1, 2, 2, 3));
        assert_eq!(r, m(2, 1, 2, 0, 5));
        let (l, r) = crt_split(&Matrix2::identity(21).unwrap(), 3, 7).unwrap();
        assert_eq!(l, Matrix2::identity(3).unwrap());
        assert_eq!(r, Matrix2::identity(7).unwrap());
        assert_eq!(crt_split(&m(1, 0, 0, 1, 12), 2, 6), Err(Error::NotCoprime(2, 6)));
        assert!(crt_split(&m(1, 0, 0, 1, 12), 3, 5).is_err());
    }

    #[test]
    fn verify_examples() {
        let r = verify_bijection(&MapSpec::SignFlip { n: 6 }, 2, 2, &cfg()).unwrap();
        assert!(r.is_bijection());
        assert_eq!(r.domain_size, r.codomain_size);

        let r = verify_bijection(&MapSpec::RowScale { n: 5, mult: 2 }, 1, 2, &cfg()).unwrap();
        assert!(r.is_bijection());

        let spec = MapSpec::LambdaShift { p: 3, k: 2, i: 1 };
        let r = verify_bijection(&spec, 0, spec.natural_target(0), &cfg()).unwrap();
        assert!(r.is_bijection());
        assert_eq!(r.domain_size, 216);

        let r = verify_bijection(&MapSpec::CrtSplit { a: 3, b: 5 }, 1, 1, &cfg()).unwrap();
        assert!(r.is_bijection());
        let g3 = g_members(3, 1, &cfg()).unwrap().len() as u64;
        let g5 = g_members(5, 1, &cfg()).unwrap().len() as u64;
        assert_eq!(r.domain_size, g3 * g5);
    }

    #[test]
    fn wrong_target_is_detected() {
        let r = verify_bijection(&MapSpec::RowScale { n: 5, mult: 2 }, 1, 3, &cfg()).unwrap();
        assert!(!r.range_contained);
        assert!(!r.is_bijection());
        assert!(r.first_violation.is_some());
    }

    #[test]
    fn non_injective_map_is_detected() {
        let domain = g_members(5, 1, &cfg()).unwrap();
        let r = verify_map(&domain, |_| Ok(0u8), |_| true, 1).unwrap();
        assert!(!r.injective);
        assert!(!r.is_bijection());
    }

    #[test]
    fn verify_respects_cap() {
        let small = CensusConfig { cap: 5, jobs: 1 };
        assert_eq!(
            verify_bijection(&MapSpec::SignFlip { n: 6 }, 0, 0, &small),
            Err(Error::CapExceeded { n: 6, cap: 5 })
        );
    }
}
