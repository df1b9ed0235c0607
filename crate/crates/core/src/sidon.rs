//! The graph `S = {(gˣ, x) : x ∈ ℤ_{p−1}}` as a point set in `ℤₚ × ℤ_{p−1}`.
//!
//! Coordinates are always ordered (group element, exponent), and exponents run
//! over `{0, …, p−2}`. Differences are taken componentwise, modulo `p` in the
//! first coordinate and modulo `p − 1` in the second.

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::numth::{mod_mul, GroupParams};
use crate::{Error, Result};

/// The graph of the discrete exponential, `points()[x] = (gˣ mod p, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidonGraph {
    params: GroupParams,
    points: Vec<(u64, u64)>,
}

/// Builds `S` with the second coordinate ascending from `g⁰ = 1`.
pub fn build_graph(params: &GroupParams) -> SidonGraph {
    let (p, g) = (params.p(), params.g());
    let mut points = Vec::with_capacity(params.order() as usize);
    let mut power = 1u64;
    for x in 0..p - 1 {
        points.push((power, x));
        power = mod_mul(power, g, p);
    }
    SidonGraph {
        params: *params,
        points,
    }
}

impl SidonGraph {
    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p()
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// `gˣ mod p` for an exponent `x ∈ {0, …, p−2}`.
    #[inline]
    pub fn first_coordinate(&self, exponent: u64) -> u64 {
        self.points[exponent as usize].0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Two distinct ordered pairs of points sharing the nonzero difference `difference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SidonWitness {
    pub difference: (u64, u64),
    pub first: ((u64, u64), (u64, u64)),
    pub second: ((u64, u64), (u64, u64)),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SidonVerification {
    pub ok: bool,
    pub witness: Option<SidonWitness>,
}

/// Dense or sparse table keyed by an element of `ℤₚ × ℤ_{p−1}`.
enum DifferenceTable {
    Dense(Vec<u64>),
    Sparse(HashMap<u64, u64>),
}

const DENSE_LIMIT: u64 = 1 << 24;

impl DifferenceTable {
    fn new(group_size: u64) -> Self {
        if group_size <= DENSE_LIMIT {
            Self::Dense(vec![0; group_size as usize])
        } else {
            Self::Sparse(HashMap::new())
        }
    }

    /// Stores `value` under `key` if vacant, returning the previous value otherwise.
    fn insert_if_vacant(&mut self, key: u64, value: u64) -> Option<u64> {
        match self {
            Self::Dense(v) => {
                let slot = &mut v[key as usize];
                if *slot == 0 {
                    *slot = value;
                    None
                } else {
                    Some(*slot)
                }
            }
            Self::Sparse(m) => match m.entry(key) {
                std::collections::hash_map::Entry::Occupied(e) => Some(*e.get()),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(value);
                    None
                }
            },
        }
    }
}

fn difference(p: u64, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    ((a.0 + p - b.0) % p, (a.1 + (p - 1) - b.1) % (p - 1))
}

/// Exhaustive Sidon check for an arbitrary set of points in `ℤₚ × ℤ_{p−1}`.
///
/// Every ordered pair of distinct points is visited and the first pair seen for
/// each difference is remembered. On failure the witness is the smallest
/// colliding difference (lexicographic) with its first two pairs. O(#points²).
pub fn check_sidon(p: u64, points: &[(u64, u64)]) -> Result<SidonVerification> {
    if p < 3 {
        return Err(Error::NotOddPrime(p));
    }
    if points.iter().any(|&(u, v)| u >= p || v >= p - 1) {
        return Err(Error::InvalidArgument(format!(
            "point outside Z_{p} x Z_{}",
            p - 1
        )));
    }
    let n = points.len();
    let mut seen = DifferenceTable::new(p * (p - 1));
    let mut witness: Option<SidonWitness> = None;
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = difference(p, a, b);
            if diff == (0, 0) {
                return Err(Error::InvalidArgument(format!(
                    "point ({}, {}) occurs more than once",
                    a.0, a.1
                )));
            }
            let key = diff.0 * (p - 1) + diff.1;
            if let Some(prev) = seen.insert_if_vacant(key, (i * n + j + 1) as u64) {
                if witness.is_none_or(|w| diff < w.difference) {
                    let prev = (prev - 1) as usize;
                    witness = Some(SidonWitness {
                        difference: diff,
                        first: (points[prev / n], points[prev % n]),
                        second: (a, b),
                    });
                }
            }
        }
    }
    Ok(SidonVerification {
        ok: witness.is_none(),
        witness,
    })
}

/// Sidon check of the ElGamal graph. Always succeeds for a genuine graph.
pub fn verify_sidon(graph: &SidonGraph) -> SidonVerification {
    check_sidon(graph.p(), &graph.points).expect("graph points lie in the group")
}

/// `#(S − S)` by enumeration of all ordered pairs, zero difference included.
pub fn difference_set_size(graph: &SidonGraph) -> u64 {
    let p = graph.p();
    let mut seen = DifferenceTable::new(p * (p - 1));
    let mut count = 0;
    for &a in &graph.points {
        for &b in &graph.points {
            let diff = difference(p, a, b);
            if seen
                .insert_if_vacant(diff.0 * (p - 1) + diff.1, 1)
                .is_none()
            {
                count += 1;
            }
        }
    }
    count
}

/// `(#S)² − #S + 1` with `#S = p − 1`, the size of `S − S` for any Sidon set of that size.
pub fn expected_difference_set_size(p: u64) -> u64 {
    let s = p - 1;
    s * s - s + 1
}

/// The character `(x, y) ↦ exp(2πi(sx/p + ty/(p−1)))` of `ℤₚ × ℤ_{p−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharacterIndex {
    s: u64,
    t: u64,
}

impl CharacterIndex {
    pub fn new(p: u64, s: u64, t: u64) -> Result<Self> {
        if p < 3 || s >= p || t >= p - 1 {
            return Err(Error::InvalidArgument(format!(
                "character ({s}, {t}) outside Z_{p} x Z_{}",
                p.saturating_sub(1)
            )));
        }
        Ok(Self { s, t })
    }

    pub fn trivial() -> Self {
        Self { s: 0, t: 0 }
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn is_trivial(&self) -> bool {
        self.s == 0 && self.t == 0
    }
}

/// Unit roots `exp(2πi j/L)` for `L = p(p−1)`; every character value is one of them.
struct RootTable {
    p: u64,
    len: u64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl RootTable {
    fn new(p: u64) -> Self {
        let len = p * (p - 1);
        let (cos, sin) = (0..len)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / len as f64).sin_cos();
                (c, s)
            })
            .unzip();
        Self { p, len, cos, sin }
    }

    /// `|Σ_{(x,y)∈S} exp(2πi(sx/p + ty/(p−1)))|`, with the phase reduced exactly
    /// to `((sx mod p)(p−1) + (ty mod (p−1))p) / (p(p−1))`.
    fn magnitude(&self, points: &[(u64, u64)], chi: CharacterIndex) -> f64 {
        let p = self.p;
        let (mut re, mut im) = (0.0, 0.0);
        for &(x, y) in points {
            let j = ((chi.s * x % p) * (p - 1) + (chi.t * y % (p - 1)) * p) % self.len;
            re += self.cos[j as usize];
            im += self.sin[j as usize];
        }
        re.hypot(im)
    }
}

/// `|Σ_{a∈S} χ(a)|` in double precision.
pub fn character_sum(graph: &SidonGraph, chi: CharacterIndex) -> f64 {
    let p = graph.p();
    assert!(chi.s < p && chi.t < p - 1, "character outside the group");
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let len = (p * (p - 1)) as f64;
    for &(x, y) in &graph.points {
        let j = (chi.s * x % p) * (p - 1) + (chi.t * y % (p - 1)) * p;
        let (s, c) = (TAU * j as f64 / len).sin_cos();
        re += c;
        im += s;
    }
    re.hypot(im)
}

/// Magnitudes of all `p(p−1)` character sums, in lexicographic `(s, t)` order.
pub fn all_character_sums(graph: &SidonGraph) -> Vec<(CharacterIndex, f64)> {
    let p = graph.p();
    let table = RootTable::new(p);
    (0..p)
        .flat_map(|s| (0..p - 1).map(move |t| CharacterIndex { s, t }))
        .map(|chi| (chi, table.magnitude(&graph.points, chi)))
        .collect()
}

/// Largest nontrivial character sum; ties keep the smallest `(s, t)`.
pub fn max_nontrivial_character_sum(graph: &SidonGraph) -> (f64, CharacterIndex) {
    all_character_sums(graph)
        .into_iter()
        .filter(|(chi, _)| !chi.is_trivial())
        .fold(
            (f64::NEG_INFINITY, CharacterIndex::trivial()),
            |best, (chi, v)| {
                if v > best.0 {
                    (v, chi)
                } else {
                    best
                }
            },
        )
}

/// `√(3(p−1))`, the strict upper bound on every nontrivial character sum of `S`.
pub fn character_sum_bound(p: u64) -> f64 {
    (3.0 * (p - 1) as f64).sqrt()
}

/// `Σ_{0≤a<n} |Σ_{h≤x<h+N} exp(2πiax/n)|` in double precision.
///
/// Requires `1 ≤ N < n`. `x` runs over residues modulo `n`, so `h` may be any integer.
pub fn incomplete_exponential_sum_total(n: u64, window: u64, h: i64) -> Result<f64> {
    if window < 1 || window >= n {
        return Err(Error::InvalidArgument(format!(
            "window length must satisfy 1 <= N < n, got N = {window}, n = {n}"
        )));
    }
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|j| {
            let (s, c) = (TAU * j as f64 / n as f64).sin_cos();
            (c, s)
        })
        .unzip();
    let start = h.rem_euclid(n as i64) as u64;
    let mut total = 0.0;
    for a in 0..n {
        let (mut re, mut im) = (0.0, 0.0);
        let mut j = mod_mul(a, start, n);
        for _ in 0..window {
            re += cos[j as usize];
            im += sin[j as usize];
            j += a;
            if j >= n {
                j -= n;
            }
        }
        total += f64::hypot(re, im);
    }
    Ok(total)
}

/// `5 n ln n`.
pub fn exponential_sum_bound(n: u64) -> f64 {
    5.0 * n as f64 * (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::{all_generators, is_prime};

    fn graph(p: u64, g: u64) -> SidonGraph {
        build_graph(&GroupParams::new(p, g).unwrap())
    }

    /// Direct complex evaluation with no phase reduction.
    fn naive_character_sum(p: u64, points: &[(u64, u64)], s: u64, t: u64) -> f64 {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for &(x, y) in points {
            let phase =
                TAU * (s as f64 * x as f64 / p as f64 + t as f64 * y as f64 / (p - 1) as f64);
            re += phase.cos();
            im += phase.sin();
        }
        re.hypot(im)
    }

    #[test]
    fn build_examples() {
        assert_eq!(graph(3, 2).points(), &[(1, 0), (2, 1)]);
        assert_eq!(graph(5, 2).points(), &[(1, 0), (2, 1), (4, 2), (3, 3)]);
        for p in [7, 1009] {
            assert_eq!(
                graph(p, crate::numth::smallest_generator(p).unwrap().g()).len(),
                p as usize - 1
            );
        }
    }

    #[test]
    fn sidon_examples() {
        assert!(verify_sidon(&graph(5, 2)).ok);
        assert!(verify_sidon(&graph(3, 2)).ok);
        let line = [(0, 0), (1, 0), (2, 0), (3, 0)];
        let v = check_sidon(5, &line).unwrap();
        assert!(!v.ok);
        let w = v.witness.unwrap();
        assert_eq!(w.difference, (1, 0));
        assert_ne!(w.first, w.second);
        assert_eq!(difference(5, w.first.0, w.first.1), (1, 0));
        assert_eq!(difference(5, w.second.0, w.second.1), (1, 0));
    }

    #[test]
    fn sidon_rejects_bad_input_and_duplicates() {
        assert!(check_sidon(5, &[(5, 0)]).is_err());
        assert!(check_sidon(5, &[(0, 4)]).is_err());
        assert!(check_sidon(5, &[(1, 1), (2, 3), (1, 1)]).is_err());
    }

    #[test]
    fn sidon_for_all_small_primes() {
        for p in (3..=200).filter(|&p| is_prime(p)) {
            for g in all_generators(p).unwrap() {
                let gr = graph(p, g);
                assert!(verify_sidon(&gr).ok, "p = {p}, g = {g}");
                assert_eq!(difference_set_size(&gr), expected_difference_set_size(p));
            }
        }
    }

    #[test]
    fn difference_set_examples() {
        assert_eq!(difference_set_size(&graph(5, 2)), 13);
        assert_eq!(difference_set_size(&graph(3, 2)), 3);
        assert_eq!(difference_set_size(&graph(1009, 11)), 1_015_057);
    }

    #[test]
    fn character_sum_examples() {
        let g3 = graph(3, 2);
        assert_eq!(character_sum(&g3, CharacterIndex::trivial()), 2.0);
        let chi = CharacterIndex::new(3, 1, 0).unwrap();
        assert!((character_sum(&g3, chi) - 1.0).abs() < 1e-12);

        let g5 = graph(5, 2);
        let sums = all_character_sums(&g5);
        assert_eq!(sums.len(), 20);
        assert_eq!(sums.iter().filter(|(c, _)| !c.is_trivial()).count(), 19);
        assert!(sums
            .iter()
            .filter(|(c, _)| !c.is_trivial())
            .all(|&(_, v)| v < 12f64.sqrt()));
        assert!(CharacterIndex::new(5, 5, 0).is_err());
        assert!(CharacterIndex::new(5, 0, 4).is_err());
    }

    #[test]
    fn table_and_direct_evaluators_agree_with_naive() {
        for (p, g) in [(5, 2), (13, 2), (61, 2)] {
            let gr = graph(p, g);
            for (chi, v) in all_character_sums(&gr) {
                let naive = naive_character_sum(p, gr.points(), chi.s(), chi.t());
                assert!((v - naive).abs() < 1e-9);
                assert!((character_sum(&gr, chi) - naive).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn max_character_sum_examples() {
        let (m3, arg3) = max_nontrivial_character_sum(&graph(3, 2));
        assert!(m3 < 6f64.sqrt());
        assert!(!arg3.is_trivial());
        let brute = [(0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
            .iter()
            .map(|&(s, t)| naive_character_sum(3, graph(3, 2).points(), s, t))
            .fold(0.0, f64::max);
        assert!((m3 - brute).abs() < 1e-12);

        assert!(max_nontrivial_character_sum(&graph(5, 2)).0 < character_sum_bound(5));
        let g61 = crate::numth::smallest_generator(61).unwrap().g();
        assert!(max_nontrivial_character_sum(&graph(61, g61)).0 < 180f64.sqrt());
    }

    #[test]
    fn max_tie_break_prefers_smallest_index() {
        let gr = graph(5, 2);
        let (m, arg) = max_nontrivial_character_sum(&gr);
        let first = all_character_sums(&gr)
            .into_iter()
            .find(|(c, v)| !c.is_trivial() && *v == m)
            .unwrap();
        assert_eq!(arg, first.0);
    }

    #[test]
    fn parseval_identity() {
        for p in [5, 13, 61] {
            let gr = graph(p, crate::numth::smallest_generator(p).unwrap().g());
            let energy: f64 = all_character_sums(&gr).iter().map(|(_, v)| v * v).sum();
            let expected = (p * (p - 1) * (p - 1)) as f64;
            assert!((energy - expected).abs() / expected < 1e-6);
        }
    }

    #[test]
    fn exponential_sum_examples() {
        let t = incomplete_exponential_sum_total(2, 1, 0).unwrap();
        assert!((t - 2.0).abs() < 1e-12);
        let t = incomplete_exponential_sum_total(4, 2, 0).unwrap();
        assert!((t - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let shifted = incomplete_exponential_sum_total(4, 2, 5).unwrap();
        assert!((t - shifted).abs() < 1e-12);
        let negative = incomplete_exponential_sum_total(4, 2, -3).unwrap();
        assert!((t - negative).abs() < 1e-12);
        assert!(incomplete_exponential_sum_total(4, 4, 0).is_err());
        assert!(incomplete_exponential_sum_total(4, 0, 0).is_err());
        assert!((exponential_sum_bound(4) - 27.725887).abs() < 1e-6);
    }

    #[test]
    fn exponential_sum_matches_naive_double_loop() {
        for n in 2..40u64 {
            for window in 1..n {
                for h in [0i64, 3, -11] {
                    let mut naive = 0.0;
                    for a in 0..n {
                        let (mut re, mut im) = (0.0f64, 0.0f64);
                        for x in h..h + window as i64 {
                            let phase = TAU * a as f64 * x as f64 / n as f64;
                            re += phase.cos();
                            im += phase.sin();
                        }
                        naive += re.hypot(im);
                    }
                    let fast = incomplete_exponential_sum_total(n, window, h).unwrap();
                    assert!((fast - naive).abs() < 1e-9, "n={n} N={window} h={h}");
                }
            }
        }
    }
}
