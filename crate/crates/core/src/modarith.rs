//! Residues, gcd, inverses and trial-division factorization.
//!
//! Every routine here is a pure function on plain integers. Products are
//! formed in `u128` so that residues up to `u64::MAX` never wrap.

use crate::error::{checked_mul, checked_pow, Count, Error, Result};

/// An element of Z/nZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`. Negative inputs wrap to their
    /// non-negative representative.
    pub fn new(value: i128, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `x mod n` normalized into `[0, n)`. `n` must be nonzero.
pub fn reduce(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// `(a * b) mod n` without intermediate overflow.
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Greatest common divisor, with `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `n` via the extended Euclidean algorithm.
///
/// For `n = 1` the only residue is 0, which is returned.
pub fn mod_inv(a: i128, n: u64) -> Result<Residue> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let a = reduce(a, n);
    if n == 1 {
        return Residue::new(0, 1);
    }
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { value: a, modulus: n });
    }
    Residue::new(old_s, n)
}

/// Prime-power decomposition of a positive integer. The empty list is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    prime_powers: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from explicit prime powers, validating that the
    /// primes are strictly increasing, prime, and carry exponents of at least 1.
    pub fn from_prime_powers(prime_powers: Vec<(u64, u32)>) -> Result<Self> {
        let mut last = 1;
        for &(p, k) in &prime_powers {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if k == 0 {
                return Err(Error::ZeroExponent);
            }
            if p <= last {
                return Err(Error::InvalidArgument(format!(
                    "primes must be strictly increasing, got {p} after {last}"
                )));
            }
            last = p;
        }
        Ok(Self { prime_powers })
    }

    pub fn prime_powers(&self) -> &[(u64, u32)] {
        &self.prime_powers
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.prime_powers.iter().map(|&(p, _)| p)
    }

    /// Number of distinct primes.
    pub fn len(&self) -> usize {
        self.prime_powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prime_powers.is_empty()
    }

    /// The factored integer, or `Overflow` if it does not fit in `u64`.
    pub fn value(&self) -> Result<u64> {
        let mut acc: Count = 1;
        for &(p, k) in &self.prime_powers {
            acc = checked_mul(acc, checked_pow(p as Count, k)?)?;
        }
        u64::try_from(acc).map_err(|_| Error::Overflow)
    }
}

/// Deterministic primality check by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Factors `n` by trial division up to `sqrt(n)`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut rest = n;
    let mut prime_powers = Vec::new();
    let mut push = |rest: &mut u64, p: u64| {
        let mut k = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            k += 1;
        }
        if k > 0 {
            prime_powers.push((p, k));
        }
    };
    push(&mut rest, 2);
    let mut p = 3u64;
    while p.checked_mul(p).is_some_and(|sq| sq <= rest) {
        push(&mut rest, p);
        p += 2;
    }
    if rest > 1 {
        prime_powers.push((rest, 1));
    }
    Ok(Factorization { prime_powers })
}

/// Euler's totient from a factorization: the product of `p^(k-1) (p-1)`.
pub fn euler_phi(f: &Factorization) -> u64 {
    f.prime_powers
        .iter()
        .map(|&(p, k)| p.pow(k - 1) * (p - 1))
        .product()
}

/// All divisors in ascending order.
pub fn divisors(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, k) in &f.prime_powers {
        let existing = out.len();
        let mut pk = 1u64;
        for _ in 0..k {
            pk *= p;
            for i in 0..existing {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 8), 4);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(35, 24), 1);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn mod_inv_examples() {
        assert_eq!(mod_inv(3, 8).unwrap().value(), 3);
        for n in 2..50 {
            assert_eq!(mod_inv(1, n).unwrap().value(), 1);
        }
        assert_eq!(
            mod_inv(2, 4),
            Err(Error::NotInvertible { value: 2, modulus: 4 })
        );
        assert_eq!(mod_inv(5, 1).unwrap().value(), 0);
        assert_eq!(mod_inv(-1, 7).unwrap().value(), 6);
        assert_eq!(mod_inv(1, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(75).unwrap().prime_powers(), &[(3, 1), (5, 2)]);
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(24).unwrap().prime_powers(), &[(2, 3), (3, 1)]);
        assert_eq!(factorize(0), Err(Error::ZeroModulus));
        assert_eq!(
            factorize(999_999_937).unwrap().prime_powers(),
            &[(999_999_937, 1)]
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(&factorize(9).unwrap()), 6);
        assert_eq!(euler_phi(&factorize(1).unwrap()), 1);
        assert_eq!(euler_phi(&factorize(24).unwrap()), 8);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(&factorize(12).unwrap()), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(&factorize(1).unwrap()), [1]);
        assert_eq!(divisors(&factorize(49).unwrap()), [1, 7, 49]);
    }

    #[test]
    fn from_prime_powers_validates() {
        assert!(Factorization::from_prime_powers(vec![(2, 1), (3, 2)]).is_ok());
        assert_eq!(
            Factorization::from_prime_powers(vec![(4, 1)]),
            Err(Error::NotPrime(4))
        );
        assert!(Factorization::from_prime_powers(vec![(3, 1), (2, 1)]).is_err());
        assert_eq!(
            Factorization::from_prime_powers(vec![(3, 0)]),
            Err(Error::ZeroExponent)
        );
    }

    #[test]
    fn residue_normalizes_negatives() {
        let r = Residue::new(-2, 5).unwrap();
        assert_eq!(r.value(), 3);
        assert_eq!(Residue::new(3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn totient_sums_to_n() {
        for n in 1..=300u64 {
            let total: u64 = divisors(&factorize(n).unwrap())
                .into_iter()
                .map(|d| euler_phi(&factorize(d).unwrap()))
                .sum();
            assert_eq!(total, n);
        }
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(a in any::<i64>(), n in 2u64..1_000_000) {
            prop_assume!(gcd(reduce(a as i128, n), n) == 1);
            let t = mod_inv(a as i128, n).unwrap().value();
            prop_assert_eq!(mul_mod(reduce(a as i128, n), t, n), 1);
        }

        #[test]
        fn factorization_reconstructs(n in 1u64..10_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value().unwrap(), n);
            prop_assert!(f.primes().all(is_prime));
            prop_assert!(f.prime_powers().windows(2).all(|w| w[0].0 < w[1].0));
            let expected: usize = f.prime_powers().iter().map(|&(_, k)| k as usize + 1).product();
            prop_assert_eq!(divisors(&f).len(), expected);
        }
    }
}
