//! Cycle statistics of permutations and the matching random-permutation theory.
//!
//! For a uniform permutation of `n` elements the number of cycles is a sum of
//! independent Bernoulli(1/i) variables, i = 1..n. Its law is `s(n,c)/n!` with
//! `s` the unsigned Stirling numbers of the first kind, and its mean is the
//! harmonic number `H_n`. The expected number of `k`-cycles is `1/k`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::elgamal::{elgamal_permutation, Permutation};
use crate::numth::{all_generators, is_prime, GroupParams};
use crate::rng::seeded;
use crate::{Error, Result};

/// Multiset of cycle lengths of a permutation, kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStructure {
    degree: usize,
    lengths: Vec<usize>,
}

impl CycleStructure {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Cycle lengths, ascending.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Number of cycles, fixed points included.
    pub fn count_cycles(&self) -> usize {
        self.lengths.len()
    }

    /// Multiplicity of `k` among the cycle lengths.
    pub fn count_k_cycles(&self, k: usize) -> usize {
        let lo = self.lengths.partition_point(|&l| l < k);
        let hi = self.lengths.partition_point(|&l| l <= k);
        hi - lo
    }

    pub fn fixed_points(&self) -> usize {
        self.count_k_cycles(1)
    }

    /// `(length, multiplicity)` pairs with ascending length.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &l in &self.lengths {
            match out.last_mut() {
                Some((len, mult)) if *len == l => *mult += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }
}

/// Follows every orbit once. O(n).
pub fn cycle_decompose(perm: &Permutation) -> CycleStructure {
    let n = perm.degree();
    let mut visited = vec![false; n + 1];
    let mut lengths = Vec::new();
    for start in 1..=n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !visited[x] {
            visited[x] = true;
            x = perm.apply(x);
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    CycleStructure { degree: n, lengths }
}

/// Law of the number of cycles of a uniform permutation of degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCountDistribution {
    n: usize,
    // probs[c] for c in 0..=n; probs[0] = 0
    probs: Vec<f64>,
}

impl CycleCountDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `P(#cycles = c)`; zero outside `1..=n`.
    pub fn prob(&self, c: usize) -> f64 {
        self.probs.get(c).copied().unwrap_or(0.0)
    }

    /// Probabilities indexed by cycle count, index 0 included (always 0).
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(c, &q)| c as f64 * q)
            .sum()
    }
}

pub const MAX_STIRLING_DEGREE: usize = 10_000;

/// `s(n,c)/n!` for all `c` via the Bernoulli convolution
/// `P_m(c) = P_{m−1}(c−1)/m + P_{m−1}(c)(1 − 1/m)`.
///
/// Entries that underflow are clamped to 0.
pub fn stirling_cycle_distribution(n: usize) -> Result<CycleCountDistribution> {
    if n == 0 || n > MAX_STIRLING_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree must be in 1..={MAX_STIRLING_DEGREE}, got {n}"
        )));
    }
    let mut probs = vec![0.0f64; n + 1];
    probs[1] = 1.0;
    for m in 2..=n {
        let new_cycle = 1.0 / m as f64;
        let extend = 1.0 - new_cycle;
        for c in (1..=m).rev() {
            let v = probs[c - 1] * new_cycle + probs[c] * extend;
            probs[c] = if v < f64::MIN_POSITIVE { 0.0 } else { v };
        }
    }
    Ok(CycleCountDistribution { n, probs })
}

/// Harmonic number `H_n`, the mean number of cycles.
pub fn expected_cycles(n: usize) -> f64 {
    // smallest terms first
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Mean number of `k`-cycles of a uniform permutation (of degree ≥ k).
pub fn expected_k_cycles(k: usize) -> f64 {
    assert!(k >= 1, "cycle length must be positive");
    1.0 / k as f64
}

/// Uniform permutation of `{1, …, n}` by Fisher–Yates shuffle, driven by
/// [`crate::rng::seeded`]`(seed)`.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    assert!(n >= 1, "permutation of degree 0");
    let mut image: Vec<usize> = (1..=n).collect();
    image.shuffle(&mut seeded(seed));
    Permutation::from_image_unchecked(image)
}

/// Empirical law of cycle counts: cycle count → number of permutations.
pub fn cycle_count_histogram<'a>(
    structures: impl IntoIterator<Item = &'a CycleStructure>,
) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for cs in structures {
        *hist.entry(cs.count_cycles()).or_insert(0) += 1;
    }
    hist
}

/// Cycle statistics of the ElGamal permutations of one prime over a family of generators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyStatistics {
    pub p: u64,
    pub generators: Vec<u64>,
    /// Number of cycles of each generator's permutation, aligned with `generators`.
    pub cycle_counts: Vec<usize>,
    /// Fixed points of each generator's permutation, aligned with `generators`.
    pub fixed_points: Vec<usize>,
    /// Cycle count → number of generators whose permutation has that many cycles.
    pub histogram: BTreeMap<usize, usize>,
    /// `avg_k_cycles[k − 1]` is the mean number of `k`-cycles, `k = 1..=k_max`.
    pub avg_k_cycles: Vec<f64>,
}

impl FamilyStatistics {
    pub fn mean_cycles(&self) -> f64 {
        self.cycle_counts.iter().sum::<usize>() as f64 / self.cycle_counts.len() as f64
    }

    pub fn mean_fixed_points(&self) -> f64 {
        self.fixed_points.iter().sum::<usize>() as f64 / self.fixed_points.len() as f64
    }

    /// Mean number of `k`-cycles, or `None` when `k` is outside `1..=k_max`.
    pub fn avg_k_cycles(&self, k: usize) -> Option<f64> {
        k.checked_sub(1)
            .and_then(|i| self.avg_k_cycles.get(i).copied())
    }
}

/// Decomposes the ElGamal permutation of every generator and aggregates.
///
/// Generators are processed in parallel; aggregation is in input order, so the
/// result does not depend on the thread count.
pub fn family_statistics(p: u64, generators: &[u64], k_max: usize) -> Result<FamilyStatistics> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument("empty generator list".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let params = generators
        .iter()
        .map(|&g| GroupParams::new(p, g))
        .collect::<Result<Vec<_>>>()?;
    let structures: Vec<CycleStructure> = params
        .par_iter()
        .map(|gp| cycle_decompose(&elgamal_permutation(gp)))
        .collect();

    let count = structures.len() as f64;
    let avg_k_cycles = (1..=k_max)
        .map(|k| {
            structures
                .iter()
                .map(|cs| cs.count_k_cycles(k))
                .sum::<usize>() as f64
                / count
        })
        .collect();
    Ok(FamilyStatistics {
        p,
        generators: generators.to_vec(),
        cycle_counts: structures
            .iter()
            .map(CycleStructure::count_cycles)
            .collect(),
        fixed_points: structures
            .iter()
            .map(CycleStructure::fixed_points)
            .collect(),
        histogram: cycle_count_histogram(&structures),
        avg_k_cycles,
    })
}

/// One row of the fixed-point sweep over primes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointRow {
    pub p: u64,
    pub generators: usize,
    pub total_fixed_points: usize,
}

impl FixedPointRow {
    pub fn avg_fixed_points(&self) -> f64 {
        self.total_fixed_points as f64 / self.generators as f64
    }
}

/// Average fixed points over all generators of every prime `p ≤ max_prime`.
///
/// `p = 2` is included: `ℤ₂^× = {1}` is generated by 1 and its map is the
/// identity on one point, so the row is one generator with one fixed point.
pub fn fixed_point_sweep(max_prime: u64) -> Result<Vec<FixedPointRow>> {
    let primes: Vec<u64> = (2..=max_prime).filter(|&p| is_prime(p)).collect();
    primes
        .par_iter()
        .map(|&p| {
            if p == 2 {
                return Ok(FixedPointRow {
                    p,
                    generators: 1,
                    total_fixed_points: 1,
                });
            }
            let gens = all_generators(p)?;
            let stats = family_statistics(p, &gens, 1)?;
            Ok(FixedPointRow {
                p,
                generators: gens.len(),
                total_fixed_points: stats.fixed_points.iter().sum(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn structure_of(image: Vec<usize>) -> CycleStructure {
        cycle_decompose(&Permutation::from_image(image).unwrap())
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            cycle_decompose(&Permutation::identity(4)).lengths(),
            &[1, 1, 1, 1]
        );
        let p5 = structure_of(vec![2, 4, 3, 1]);
        assert_eq!(p5.lengths(), &[1, 3]);
        assert_eq!(structure_of(vec![2, 1]).lengths(), &[2]);
    }

    #[test]
    fn counting_examples() {
        let p5 = structure_of(vec![2, 4, 3, 1]);
        assert_eq!(p5.count_cycles(), 2);
        assert_eq!(p5.count_k_cycles(1), 1);
        assert_eq!(p5.count_k_cycles(2), 0);
        assert_eq!(p5.count_k_cycles(3), 1);
        assert_eq!(p5.multiplicities(), vec![(1, 1), (3, 1)]);
        assert_eq!(structure_of(vec![2, 1]).count_cycles(), 1);
        assert_eq!(cycle_decompose(&Permutation::identity(9)).count_cycles(), 9);
    }

    #[test]
    fn stirling_small_cases() {
        let d1 = stirling_cycle_distribution(1).unwrap();
        assert_eq!(d1.prob(1), 1.0);
        let d3 = stirling_cycle_distribution(3).unwrap();
        assert!((d3.prob(1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((d3.prob(2) - 0.5).abs() < 1e-15);
        assert!((d3.prob(3) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(d3.prob(4), 0.0);
        assert!(stirling_cycle_distribution(0).is_err());
        assert!(stirling_cycle_distribution(MAX_STIRLING_DEGREE + 1).is_err());
    }

    #[test]
    fn stirling_1009_mode_and_mean() {
        let d = stirling_cycle_distribution(1009).unwrap();
        let mode = (1..=1009)
            .max_by(|&a, &b| d.prob(a).total_cmp(&d.prob(b)))
            .unwrap();
        assert_eq!(mode, 7);
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let h = expected_cycles(1009);
        assert!((d.mean() - h).abs() / h < 1e-6);
    }

    #[test]
    fn stirling_matches_enumeration_up_to_8() {
        for n in 1..=8usize {
            let mut counts = vec![0u64; n + 1];
            for perm in (1..=n).permutations(n) {
                counts[structure_of(perm).count_cycles()] += 1;
            }
            let total: u64 = counts.iter().sum();
            let d = stirling_cycle_distribution(n).unwrap();
            for (c, &count) in counts.iter().enumerate() {
                assert!((d.prob(c) - count as f64 / total as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(expected_cycles(1), 1.0);
        assert!((expected_cycles(3) - 11.0 / 6.0).abs() < 1e-15);
        // direct summation oracle: H_1009 = 7.494426143540558
        assert!((expected_cycles(1009) - 7.494_426_143_540_558).abs() < 1e-12);
        assert_eq!(expected_k_cycles(1), 1.0);
        assert_eq!(expected_k_cycles(2), 0.5);
        assert_eq!(expected_k_cycles(5), 0.2);
    }

    #[test]
    fn random_permutation_contract() {
        assert_eq!(random_permutation(1, 99).image(), &[1]);
        assert_eq!(random_permutation(1009, 5), random_permutation(1009, 5));
        let perms: Vec<Permutation> = (0..288).map(|s| random_permutation(1009, s)).collect();
        assert_eq!(perms.iter().unique().count(), 288);
        let mean = perms
            .iter()
            .map(|p| cycle_decompose(p).count_cycles() as f64)
            .sum::<f64>()
            / 288.0;
        assert!((mean - expected_cycles(1009)).abs() < 0.5, "mean = {mean}");
    }

    #[test]
    fn monte_carlo_k_cycle_law() {
        let trials = 10_000;
        let mut totals = [0usize; 6];
        for seed in 0..trials {
            let cs = cycle_decompose(&random_permutation(200, seed));
            for (k, t) in totals.iter_mut().enumerate().skip(1) {
                *t += cs.count_k_cycles(k);
            }
        }
        for (k, &t) in totals.iter().enumerate().skip(1) {
            let avg = t as f64 / trials as f64;
            assert!(
                (avg - expected_k_cycles(k)).abs() < 0.05,
                "k = {k}, avg = {avg}"
            );
        }
    }

    #[test]
    fn family_statistics_examples() {
        let s5 = family_statistics(5, &[2, 3], 4).unwrap();
        assert_eq!(s5.avg_k_cycles(1), Some(0.5));
        assert_eq!(s5.cycle_counts, vec![2, 1]);
        assert_eq!(s5.avg_k_cycles(3), Some(0.5));
        assert_eq!(s5.avg_k_cycles(4), Some(0.5));
        assert_eq!(s5.avg_k_cycles(5), None);

        let s3 = family_statistics(3, &[2], 2).unwrap();
        assert_eq!(s3.histogram, BTreeMap::from([(1, 1)]));

        assert!(family_statistics(5, &[4], 1).is_err());
        assert!(family_statistics(5, &[], 1).is_err());
        assert!(family_statistics(5, &[2], 0).is_err());
    }

    #[test]
    fn family_statistics_is_deterministic() {
        let gens = all_generators(1009).unwrap();
        let a = family_statistics(1009, &gens, 20).unwrap();
        let b = family_statistics(1009, &gens, 20).unwrap();
        assert_eq!(a, b);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| family_statistics(1009, &gens, 20).unwrap());
        assert_eq!(a, single);
    }

    #[test]
    fn fixed_point_sweep_edges() {
        let rows = fixed_point_sweep(7).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.p).collect::<Vec<_>>(),
            vec![2, 3, 5, 7]
        );
        assert_eq!(rows[0].avg_fixed_points(), 1.0);
        assert_eq!(rows[1].avg_fixed_points(), 0.0);
        assert_eq!(rows[2].avg_fixed_points(), 0.5);
    }

    proptest! {
        #[test]
        fn decomposition_accounts_for_every_element(n in 1usize..300, seed in any::<u64>()) {
            let cs = cycle_decompose(&random_permutation(n, seed));
            prop_assert_eq!(cs.lengths().iter().sum::<usize>(), n);
            let weighted: usize = (1..=n).map(|k| k * cs.count_k_cycles(k)).sum();
            prop_assert_eq!(weighted, n);
        }

        #[test]
        fn stirling_is_normalized_with_harmonic_mean(n in 1usize..2000) {
            let d = stirling_cycle_distribution(n).unwrap();
            prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(d.probs().iter().all(|&q| q >= 0.0));
            let h = expected_cycles(n);
            prop_assert!((d.mean() - h).abs() / h < 1e-6);
        }
    }
}
