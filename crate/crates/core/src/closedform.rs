//! Closed-form evaluation of `g_n(x)`, the number of invertible 2x2 matrices
//! over Z/nZ whose permanent is congruent to `x`.
//!
//! `g_n` is multiplicative in `n`, and on a prime power `p^k` it takes only two
//! values depending on whether `p` divides `x`:
//!
//! | `p`  | `p | x`               | `p ∤ x`                       |
//! |------|-----------------------|-------------------------------|
//! | odd  | `(p^k - p^(k-1))^3`   | `p^(3(k-1)) (p-1) (p^2+1)`    |
//! | 2    | `0`                   | `6 * 8^(k-1)`                 |
//!
//! All arithmetic is checked `u128`; exceeding it yields [`Error::Overflow`].

use crate::error::{checked_add, checked_mul, checked_pow, Count, Error, Result};
use crate::modarith::{divisors, euler_phi, factorize, gcd, is_prime, reduce};

/// Which of the two prime-power classes a residue falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XClass {
    DivisibleByP,
    UnitModP,
}

impl XClass {
    pub fn of(x: i128, p: u64) -> Self {
        if reduce(x, p) == 0 {
            XClass::DivisibleByP
        } else {
            XClass::UnitModP
        }
    }
}

/// A prime power together with the class of the query residue at that prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePowerClass {
    pub p: u64,
    pub k: u32,
    pub x_class: XClass,
}

impl PrimePowerClass {
    pub fn new(p: u64, k: u32, x: i128) -> Self {
        Self {
            p,
            k,
            x_class: XClass::of(x, p),
        }
    }

    pub fn count(&self) -> Result<Count> {
        g_prime_power(self.p, self.k, self.x_class)
    }
}

/// `g_{p^k}(x)` for the class of `x` at `p`.
pub fn g_prime_power(p: u64, k: u32, x_class: XClass) -> Result<Count> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    let p = p as Count;
    match (p, x_class) {
        (2, XClass::DivisibleByP) => Ok(0),
        (2, XClass::UnitModP) => checked_mul(6, checked_pow(8, k - 1)?),
        (_, XClass::DivisibleByP) => {
            let phi = checked_mul(checked_pow(p, k - 1)?, p - 1)?;
            checked_pow(phi, 3)
        }
        (_, XClass::UnitModP) => {
            let head = checked_pow(checked_pow(p, k - 1)?, 3)?;
            let tail = checked_mul(p - 1, checked_add(checked_mul(p, p)?, 1)?)?;
            checked_mul(head, tail)
        }
    }
}

/// `g_n(x)` for any integer `x`, via multiplicativity over the prime powers of `n`.
pub fn g_count(n: u64, x: i128) -> Result<Count> {
    let f = factorize(n)?;
    f.prime_powers()
        .iter()
        .try_fold(1, |acc, &(p, k)| {
            checked_mul(acc, g_prime_power(p, k, XClass::of(x, p))?)
        })
}

/// `|GL_2(Z/nZ)|`, the product of `p^(4(k-1)) (p^2 - p) (p^2 - 1)` over `n`'s prime powers.
pub fn gl2_order(n: u64) -> Result<Count> {
    let f = factorize(n)?;
    f.prime_powers().iter().try_fold(1, |acc, &(p, k)| {
        let p = p as Count;
        let lift = checked_pow(p, 4 * (k - 1))?;
        let sq = checked_mul(p, p)?;
        let base = checked_mul(sq - p, sq - 1)?;
        checked_mul(acc, checked_mul(lift, base)?)
    })
}

/// One gcd-class of residues: all `x` whose set of prime divisors shared with
/// `n` equals the primes of `representative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumClass {
    pub representative: u64,
    pub count: Count,
}

/// The values `g_n` takes across the gcd-classes of Z/nZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub modulus: u64,
    /// Sorted by representative.
    pub classes: Vec<SpectrumClass>,
    pub distinct_class_count: usize,
    pub distinct_value_count: usize,
}

impl Spectrum {
    /// Distinct values in ascending order.
    pub fn distinct_values(&self) -> Vec<Count> {
        let mut values: Vec<Count> = self.classes.iter().map(|c| c.count).collect();
        values.sort_unstable();
        values.dedup();
        values
    }

    pub fn count_for(&self, representative: u64) -> Option<Count> {
        self.classes
            .iter()
            .find(|c| c.representative == representative)
            .map(|c| c.count)
    }
}

/// Evaluates `g_n` at the product of every subset of `n`'s distinct primes.
///
/// Distinct values are counted by exact comparison, so coinciding class values
/// show up as `distinct_value_count < distinct_class_count`.
pub fn spectrum(n: u64) -> Result<Spectrum> {
    let f = factorize(n)?;
    let primes: Vec<u64> = f.primes().collect();
    let r = primes.len();
    let mut classes = Vec::with_capacity(1 << r);
    for mask in 0u32..(1 << r) {
        let representative = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .product::<u64>();
        classes.push(SpectrumClass {
            representative,
            count: g_count(n, representative as i128)?,
        });
    }
    classes.sort_by_key(|c| c.representative);
    let distinct_class_count = classes.len();
    let mut spectrum = Spectrum {
        modulus: n,
        classes,
        distinct_class_count,
        distinct_value_count: 0,
    };
    spectrum.distinct_value_count = spectrum.distinct_values().len();
    Ok(spectrum)
}

/// Both sides of a divisor-sum identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisorSumCheck {
    pub lhs: Count,
    pub rhs: Count,
    pub equal: bool,
}

impl DivisorSumCheck {
    pub fn new(lhs: Count, rhs: Count) -> Self {
        Self {
            lhs,
            rhs,
            equal: lhs == rhs,
        }
    }
}

/// Checks `sum_{d | n} phi(n/d) g_n(d) == |GL_2(Z/nZ)|` in closed form.
pub fn divisor_sum_check(n: u64) -> Result<DivisorSumCheck> {
    let f = factorize(n)?;
    let mut lhs: Count = 0;
    for d in divisors(&f) {
        let phi = euler_phi(&factorize(n / d)?) as Count;
        lhs = checked_add(lhs, checked_mul(phi, g_count(n, d as i128)?)?)?;
    }
    Ok(DivisorSumCheck::new(lhs, gl2_order(n)?))
}

/// `gcd(x mod n, n)`, where the zero residue maps to `n`.
pub fn gcd_class_representative(n: u64, x: i128) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(gcd(reduce(x, n), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_power_values() {
        assert_eq!(g_prime_power(3, 1, XClass::DivisibleByP), Ok(8));
        assert_eq!(g_prime_power(2, 3, XClass::DivisibleByP), Ok(0));
        assert_eq!(g_prime_power(2, 3, XClass::UnitModP), Ok(384));
        assert_eq!(g_prime_power(5, 2, XClass::UnitModP), Ok(13000));
        assert_eq!(g_prime_power(3, 1, XClass::UnitModP), Ok(20));
        assert_eq!(g_prime_power(6, 1, XClass::UnitModP), Err(Error::NotPrime(6)));
        assert_eq!(g_prime_power(1, 1, XClass::UnitModP), Err(Error::NotPrime(1)));
        assert_eq!(g_prime_power(3, 0, XClass::UnitModP), Err(Error::ZeroExponent));
    }

    #[test]
    fn prime_power_class_helper() {
        let c = PrimePowerClass::new(5, 2, 35);
        assert_eq!(c.x_class, XClass::DivisibleByP);
        assert_eq!(c.count(), Ok(8000));
        assert_eq!(PrimePowerClass::new(3, 1, -1).x_class, XClass::UnitModP);
    }

    #[test]
    fn g_count_examples() {
        assert_eq!(g_count(75, 0), Ok(64000));
        assert_eq!(g_count(75, 14), Ok(260000));
        assert_eq!(g_count(24, 3), Ok(3072));
        assert_eq!(g_count(1, 5), Ok(1));
        assert_eq!(g_count(0, 5), Err(Error::ZeroModulus));
        // negatives normalize
        assert_eq!(g_count(75, -61), g_count(75, 14));
    }

    #[test]
    fn gl2_examples() {
        assert_eq!(gl2_order(2), Ok(6));
        assert_eq!(gl2_order(8), Ok(1536));
        assert_eq!(gl2_order(1), Ok(1));
        assert_eq!(gl2_order(24), Ok(73728));
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(gl2_order(1 << 40), Err(Error::Overflow));
        assert_eq!(g_count(1 << 40, 1), Ok(6 * (1u128 << 117)));
        let n = 3u64.pow(40);
        assert_eq!(g_count(n, 1), Err(Error::Overflow));
        assert_eq!(divisor_sum_check(n), Err(Error::Overflow));
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(75).unwrap();
        let got: Vec<_> = s.classes.iter().map(|c| (c.representative, c.count)).collect();
        assert_eq!(got, [(1, 260000), (3, 104000), (5, 160000), (15, 64000)]);
        assert_eq!(s.distinct_class_count, 4);
        assert_eq!(s.distinct_value_count, 4);

        let s = spectrum(24).unwrap();
        let got: Vec<_> = s.classes.iter().map(|c| (c.representative, c.count)).collect();
        assert_eq!(got, [(1, 7680), (2, 0), (3, 3072), (6, 0)]);
        assert_eq!(s.distinct_value_count, 3);
        assert_eq!(s.distinct_values(), [0, 3072, 7680]);

        // g_7(1) = 6 * 50 and g_7(0) = 6^3; 6 * 300 + 216 = |GL_2(Z_7)| = 2016.
        let s = spectrum(7).unwrap();
        assert_eq!(s.count_for(1), Some(300));
        assert_eq!(s.count_for(7), Some(216));
        assert_eq!(s.distinct_value_count, 2);

        let s = spectrum(1).unwrap();
        assert_eq!(s.classes, [SpectrumClass { representative: 1, count: 1 }]);
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum_check(24), Ok(DivisorSumCheck::new(73728, 73728)));
        assert_eq!(divisor_sum_check(1), Ok(DivisorSumCheck::new(1, 1)));
        let c = divisor_sum_check(5).unwrap();
        assert_eq!(c.rhs, 480);
        assert!(c.equal);
    }

    #[test]
    fn divisor_sum_holds_to_500() {
        for n in 1..=500 {
            assert!(divisor_sum_check(n).unwrap().equal, "n = {n}");
        }
    }

    #[test]
    fn representative_examples() {
        assert_eq!(gcd_class_representative(75, 35), Ok(5));
        assert_eq!(gcd_class_representative(24, 35), Ok(1));
        assert_eq!(gcd_class_representative(24, 0), Ok(24));
        assert_eq!(gcd_class_representative(24, -24), Ok(24));
    }

    #[test]
    fn parity_vanishing() {
        for k in 1..=12 {
            let n = 1u64 << k;
            for x in (0..n.min(512)).step_by(2) {
                assert_eq!(g_count(n, x as i128), Ok(0));
            }
        }
    }

    #[test]
    fn bounded_by_group_order() {
        for n in 1..=500u64 {
            let order = gl2_order(n).unwrap();
            assert!(order <= (n as u128).pow(4));
            for c in spectrum(n).unwrap().classes {
                assert!(c.count <= order);
            }
        }
    }

    #[test]
    fn class_count_is_power_of_two() {
        for n in 1..=300u64 {
            let r = factorize(n).unwrap().len();
            assert_eq!(spectrum(n).unwrap().distinct_class_count, 1 << r);
        }
    }

    proptest! {
        #[test]
        fn multiplicative(a in 1u64..=60, b in 1u64..=60, x in any::<i64>()) {
            prop_assume!(gcd(a, b) == 1);
            let x = x as i128;
            prop_assert_eq!(
                g_count(a * b, x).unwrap(),
                g_count(a, x).unwrap() * g_count(b, x).unwrap()
            );
        }

        #[test]
        fn gcd_invariant(n in 1u64..=200, x in 0u64..200) {
            let x = x % n;
            let rep = gcd_class_representative(n, x as i128).unwrap();
            prop_assert_eq!(g_count(n, x as i128), g_count(n, rep as i128));
        }
    }
}
