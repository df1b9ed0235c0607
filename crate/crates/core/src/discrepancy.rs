//! Box counts of the ElGamal graph and their deviation from the uniform expectation.
//!
//! A box is `[h+1 .. h+N] × [k+1 .. k+M]` inside `ℤₚ × ℤ_{p−1}`. Both intervals
//! are cyclic: they are reduced modulo `p` and `p − 1` and may wrap around.
//! For every box `|#(S∩B) − #B/p| ≤ 50 √p ln²p`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::rng::seeded;
use crate::sidon::SidonGraph;
use crate::{Error, Result};

/// A product of two cyclic windows, `[h+1 .. h+N] × [k+1 .. k+M]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxRegion {
    h: i64,
    #[serde(rename = "N")]
    width: u64,
    k: i64,
    #[serde(rename = "M")]
    height: u64,
}

impl BoxRegion {
    /// Requires `1 ≤ N ≤ p` and `1 ≤ M ≤ p − 1`.
    pub fn new(p: u64, h: i64, width: u64, k: i64, height: u64) -> Result<Self> {
        if !(1..=p).contains(&width) || !(1..p).contains(&height) {
            return Err(Error::InvalidArgument(format!(
                "box side lengths out of range: N = {width} (1..={p}), M = {height} (1..={})",
                p - 1
            )));
        }
        Ok(Self {
            h,
            width,
            k,
            height,
        })
    }

    /// The whole group `ℤₚ × ℤ_{p−1}`.
    pub fn full(p: u64) -> Self {
        Self {
            h: 0,
            width: p,
            k: 0,
            height: p - 1,
        }
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    /// `N`, the length of the first-coordinate window.
    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// `M`, the length of the exponent window.
    pub fn height(&self) -> u64 {
        self.height
    }

    /// `#B = N·M`.
    pub fn cardinality(&self) -> u64 {
        self.width * self.height
    }

    /// Is the residue `r ∈ ℤₚ` in `[h+1 .. h+N]`?
    pub fn contains_first(&self, p: u64, r: u64) -> bool {
        ((r as i64 - self.h - 1).rem_euclid(p as i64) as u64) < self.width
    }

    /// Is the exponent `y ∈ ℤ_{p−1}` in `[k+1 .. k+M]`?
    pub fn contains_second(&self, p: u64, y: u64) -> bool {
        ((y as i64 - self.k - 1).rem_euclid(p as i64 - 1) as u64) < self.height
    }
}

/// `#(S ∩ B)`, walking the exponent window once. O(M).
pub fn count_in_box(graph: &SidonGraph, b: &BoxRegion) -> u64 {
    let p = graph.p();
    let d = p - 1;
    let mut y = (b.k + 1).rem_euclid(d as i64) as u64;
    let mut hits = 0;
    for _ in 0..b.height {
        if b.contains_first(p, graph.first_coordinate(y)) {
            hits += 1;
        }
        y += 1;
        if y == d {
            y = 0;
        }
    }
    hits
}

/// `50 √p (ln p)²`.
pub fn theorem_bound(p: u64) -> f64 {
    50.0 * normalizer(p)
}

fn normalizer(p: u64) -> f64 {
    let ln = (p as f64).ln();
    (p as f64).sqrt() * ln * ln
}

/// `p^{3/2} (ln p)²`, the box size above which counts are asymptotically `#B/p`.
pub fn large_box_threshold(p: u64) -> f64 {
    p as f64 * normalizer(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyRecord {
    #[serde(flatten)]
    pub bx: BoxRegion,
    pub hits: u64,
    /// `#B / p`.
    pub expected: f64,
    /// `|hits − expected|`.
    pub deviation: f64,
    /// `deviation / (√p ln²p)`; the bound says this is at most 50.
    pub ratio: f64,
    /// `#B > p^{3/2} ln²p`.
    pub large_box: bool,
}

impl DiscrepancyRecord {
    pub fn measure(graph: &SidonGraph, bx: BoxRegion) -> Self {
        let p = graph.p();
        let hits = count_in_box(graph, &bx);
        let expected = bx.cardinality() as f64 / p as f64;
        let deviation = (hits as f64 - expected).abs();
        Self {
            bx,
            hits,
            expected,
            deviation,
            ratio: deviation / normalizer(p),
            large_box: bx.cardinality() as f64 > large_box_threshold(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub p: u64,
    pub g: u64,
    pub records: Vec<DiscrepancyRecord>,
    pub max_ratio: f64,
    pub max_deviation: f64,
}

impl DiscrepancyReport {
    fn from_records(graph: &SidonGraph, records: Vec<DiscrepancyRecord>) -> Self {
        let max_ratio = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let max_deviation = records.iter().map(|r| r.deviation).fold(0.0, f64::max);
        Self {
            p: graph.p(),
            g: graph.params().g(),
            records,
            max_ratio,
            max_deviation,
        }
    }

    pub fn bound(&self) -> f64 {
        theorem_bound(self.p)
    }

    /// Every record within the bound.
    pub fn pass(&self) -> bool {
        self.max_deviation <= self.bound()
    }
}

/// Structured boxes with one full side: every single exponent (`N = p, M = 1`)
/// and every single first coordinate (`N = 1, M = p − 1`).
pub fn line_boxes(p: u64) -> Vec<BoxRegion> {
    let rows = (0..p - 1).map(|y| BoxRegion {
        h: 0,
        width: p,
        k: y as i64 - 1,
        height: 1,
    });
    let columns = (0..p).map(|x| BoxRegion {
        h: x as i64 - 1,
        width: 1,
        k: 0,
        height: p - 1,
    });
    rows.chain(columns).collect()
}

/// Largest prime for which [`sweep`] measures every line box.
pub const EXHAUSTIVE_LINE_LIMIT: u64 = 101;

/// Boxes measured by [`sweep`], in generation order.
///
/// 1. the full box;
/// 2. all line boxes when `p ≤ 101`, otherwise `2(p−1)` of them chosen with the seeded generator;
/// 3. `num_random_boxes` boxes with `h`, `N`, `k`, `M` uniform over their ranges.
pub fn sweep_boxes(p: u64, num_random_boxes: usize, seed: u64) -> Vec<BoxRegion> {
    let mut rng = seeded(seed);
    let mut boxes = vec![BoxRegion::full(p)];
    let lines = line_boxes(p);
    if p <= EXHAUSTIVE_LINE_LIMIT {
        boxes.extend(lines);
    } else {
        let amount = (2 * (p - 1) as usize).min(lines.len());
        let mut picked = sample(&mut rng, lines.len(), amount).into_vec();
        picked.sort_unstable();
        boxes.extend(picked.into_iter().map(|i| lines[i]));
    }
    boxes.extend((0..num_random_boxes).map(|_| BoxRegion {
        h: rng.gen_range(0..p) as i64,
        width: rng.gen_range(1..=p),
        k: rng.gen_range(0..p - 1) as i64,
        height: rng.gen_range(1..p),
    }));
    boxes
}

/// Measures every box of [`sweep_boxes`]. Reporting only; nothing is asserted.
pub fn sweep(graph: &SidonGraph, num_random_boxes: usize, seed: u64) -> DiscrepancyReport {
    let boxes = sweep_boxes(graph.p(), num_random_boxes, seed);
    let records = boxes
        .into_par_iter()
        .map(|b| DiscrepancyRecord::measure(graph, b))
        .collect();
    DiscrepancyReport::from_records(graph, records)
}
