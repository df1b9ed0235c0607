//! Integer and modular arithmetic on `u64`.
//!
//! Products are formed in `u128`, so every routine is overflow-free for any
//! 64-bit modulus even though the experiments only use small primes.

use crate::{Error, Result};

/// `a * b mod m` without overflow.
#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Square-and-multiply exponentiation. Returns a value in `[0, modulus)`.
///
/// A modulus of 1 yields 0.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let mut base = base % modulus;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, modulus);
        }
        base = mod_mul(base, base, modulus);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
///
/// Fails with [`Error::NotInvertible`] when `gcd(a, modulus) ≠ 1`.
pub fn mod_inverse(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    let (mut old_r, mut r) = ((a % modulus) as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { value: a, modulus });
    }
    Ok(old_s.rem_euclid(modulus as i128) as u64)
}

/// Deterministic primality test for the whole `u64` range.
///
/// Small inputs use trial division; the rest use Miller–Rabin with the first
/// twelve prime bases, which has no counterexample below 3.3·10²⁴.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    if n < 37 * 37 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer together with its prime factorization.
///
/// Factors are stored with strictly increasing primes and positive exponents,
/// and their product is always `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// The empty factorization of 1.
    pub fn one() -> Self {
        Self {
            value: 1,
            factors: Vec::new(),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct prime divisors, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }
}

/// Trial division up to `√n`.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n < 2 {
        return Err(Error::FactorTooSmall(n));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |q: u64, rest: &mut u64| {
        let mut e = 0;
        while rest.is_multiple_of(q) {
            *rest /= q;
            e += 1;
        }
        if e > 0 {
            factors.push((q, e));
        }
    };
    push(2, &mut rest);
    let mut q = 3u64;
    while q.checked_mul(q).is_some_and(|qq| qq <= rest) {
        push(q, &mut rest);
        q += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Euler's totient `φ(n) = n·∏(1 − 1/q)`.
pub fn euler_phi(n: &FactoredInteger) -> u64 {
    n.primes().fold(n.value, |acc, q| acc / q * (q - 1))
}

/// `g` generates `ℤₚ^×` iff `g^((p−1)/q) ≠ 1` for every prime `q | p−1`.
///
/// `order_factors` must be the factorization of `p − 1` (or [`FactoredInteger::one`] for `p = 2`).
pub fn is_primitive_root(g: u64, p: u64, order_factors: &FactoredInteger) -> bool {
    debug_assert_eq!(order_factors.value(), p - 1);
    let g = g % p;
    if g == 0 {
        return false;
    }
    order_factors
        .primes()
        .all(|q| mod_pow(g, (p - 1) / q, p) != 1)
}

fn order_factorization(p: u64) -> Result<FactoredInteger> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    factorize(p - 1)
}

/// An odd prime `p` with a designated primitive root `g ∈ [2, p−1]`.
///
/// The multiplicative group `ℤₚ^× = {1, …, p−1}` has order `d = p − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    p: u64,
    g: u64,
}

impl GroupParams {
    /// Validates that `p` is an odd prime and `g` a primitive root modulo `p`.
    pub fn new(p: u64, g: u64) -> Result<Self> {
        let factors = order_factorization(p)?;
        if !(2..p).contains(&g) || !is_primitive_root(g, p, &factors) {
            return Err(Error::NotGenerator { p, g });
        }
        Ok(Self { p, g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// Group order `d = p − 1`.
    pub fn order(&self) -> u64 {
        self.p - 1
    }
}

/// The least primitive root modulo the odd prime `p`.
pub fn smallest_generator(p: u64) -> Result<GroupParams> {
    let factors = order_factorization(p)?;
    let g = (2..p)
        .find(|&g| is_primitive_root(g, p, &factors))
        .expect("every prime has a primitive root");
    Ok(GroupParams { p, g })
}

/// All `φ(p−1)` primitive roots modulo `p`, ascending.
///
/// Computed as `{g₀ʲ : gcd(j, p−1) = 1}` from the smallest root `g₀`.
pub fn all_generators(p: u64) -> Result<Vec<u64>> {
    let g0 = smallest_generator(p)?.g;
    let d = p - 1;
    let mut out = Vec::new();
    let mut power = 1u64;
    for j in 1..=d {
        power = mod_mul(power, g0, p);
        if gcd(j, d) == 1 {
            out.push(power);
        }
    }
    out.sort_unstable();
    Ok(out)
}
