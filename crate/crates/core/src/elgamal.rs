//! The ElGamal map `x ↦ gˣ mod p` as a permutation of `{1, …, p−1}`, and the
//! textbook signature scheme built on it.
//!
//! Exponents here are taken literally from `{1, …, p−1}`, so `p − 1 ↦ g^{p−1} = 1`.
//! The point-set view in [`crate::sidon`] uses `{0, …, p−2}` instead; convert
//! with [`exponent_to_zero_based`] / [`exponent_from_zero_based`].

use serde::Serialize;

use crate::numth::{gcd, mod_inverse, mod_mul, mod_pow, GroupParams};
use crate::{Error, Result};

/// A bijection of `{1, …, n}` stored as its image table.
///
/// `image()[i]` is the image of `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a bijection onto `{1, …, image.len()}`.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::InvalidArgument("permutation of degree 0".into()));
        }
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &y in &image {
            if y == 0 || y > n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::InvalidArgument(format!(
                    "image table is not a bijection of 1..={n}"
                )));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation of degree 0");
        Self {
            image: (1..=n).collect(),
        }
    }

    /// Caller guarantees the bijection invariant.
    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Self::from_image(image.clone()).is_ok());
        Self { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Image of `x ∈ {1, …, n}`.
    pub fn apply(&self, x: usize) -> usize {
        self.image[x - 1]
    }
}

/// Builds `x ↦ gˣ mod p` on `{1, …, p−1}`, one multiplication per entry.
pub fn elgamal_permutation(params: &GroupParams) -> Permutation {
    let (p, g) = (params.p(), params.g());
    let mut image = Vec::with_capacity(params.order() as usize);
    let mut power = 1u64;
    for _ in 1..p {
        power = mod_mul(power, g, p);
        image.push(power as usize);
    }
    Permutation::from_image_unchecked(image)
}

/// Maps an exponent in `{1, …, d}` to its representative in `{0, …, d−1}`.
pub fn exponent_to_zero_based(x: u64, d: u64) -> u64 {
    x % d
}

/// Maps an exponent in `{0, …, d−1}` to its representative in `{1, …, d}`.
pub fn exponent_from_zero_based(x: u64, d: u64) -> u64 {
    match x % d {
        0 => d,
        r => r,
    }
}

/// ElGamal signature `(K, b)` on a message `m ∈ ℤ_{p−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    /// `K = gᵏ mod p`, the public session key.
    pub session_public: u64,
    /// `b = k⁻¹(m − aK) mod (p−1)`.
    pub b: u64,
}

/// Public key `A = gᵃ mod p`.
pub fn public_key(params: &GroupParams, secret_a: u64) -> u64 {
    mod_pow(params.g(), secret_a, params.p())
}

/// Signs `message_m` with global key `secret_a` and session key `session_k`.
///
/// `K` is reused as an integer exponent in `m − aK`, which is exactly the
/// group-element-as-exponent identification of the ElGamal map. Messages are
/// raw residues; there is no hashing.
pub fn sign(
    params: &GroupParams,
    secret_a: u64,
    session_k: u64,
    message_m: u64,
) -> Result<Signature> {
    let d = params.order();
    let k = session_k % d;
    if gcd(k, d) != 1 {
        return Err(Error::NotInvertible {
            value: session_k,
            modulus: d,
        });
    }
    let k_inv = mod_inverse(k, d)?;
    let big_k = mod_pow(params.g(), k, params.p());
    let a_big_k = mod_mul(secret_a % d, big_k % d, d);
    let diff = (message_m % d + d - a_big_k) % d;
    Ok(Signature {
        session_public: big_k,
        b: mod_mul(k_inv, diff, d),
    })
}

/// Checks `gᵐ ≡ A^K · K^b (mod p)`.
///
/// Only the signing formula comes with the scheme description used here; this
/// is the standard verification equation that completes it.
pub fn verify(params: &GroupParams, public_a: u64, message_m: u64, sig: &Signature) -> bool {
    let p = params.p();
    let big_k = sig.session_public;
    if !(1..p).contains(&big_k) || !(1..p).contains(&public_a) {
        return false;
    }
    let lhs = mod_pow(params.g(), message_m, p);
    let rhs = mod_mul(mod_pow(public_a, big_k, p), mod_pow(big_k, sig.b, p), p);
    lhs == rhs
}
