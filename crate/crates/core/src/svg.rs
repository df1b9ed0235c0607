//! Circle diagram of a cycle structure: one circle per cycle, circumference
//! proportional to the cycle length.
//!
//! Layout is greedy row packing of the circles sorted by decreasing size, so
//! the output is a pure function of the cycle structure.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::permstat::CycleStructure;

/// Circumference, in user units, of a circle for a 1-cycle.
pub const UNIT_CIRCUMFERENCE: f64 = 4.0;
const MARGIN: f64 = 4.0;
const GAP: f64 = 2.0;
const MIN_WIDTH: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedCircle {
    pub cycle_length: usize,
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

pub fn radius(cycle_length: usize) -> f64 {
    cycle_length as f64 * UNIT_CIRCUMFERENCE / (2.0 * PI)
}

/// Positions every cycle; returns the circles and the canvas size.
pub fn layout(cs: &CycleStructure) -> (Vec<PlacedCircle>, f64, f64) {
    let mut lengths = cs.lengths().to_vec();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    let largest = lengths.first().map_or(0.0, |&l| 2.0 * radius(l));
    let width = MIN_WIDTH.max(largest + 2.0 * MARGIN);

    let mut circles = Vec::with_capacity(lengths.len());
    let (mut x, mut row_top, mut row_height) = (MARGIN, MARGIN, 0.0f64);
    for l in lengths {
        let r = radius(l);
        let diameter = 2.0 * r;
        if x > MARGIN && x + diameter > width - MARGIN {
            row_top += row_height + GAP;
            x = MARGIN;
            row_height = 0.0;
        }
        // first circle of a row is the tallest because sizes are decreasing
        row_height = row_height.max(diameter);
        circles.push(PlacedCircle {
            cycle_length: l,
            cx: x + r,
            cy: row_top + r,
            r,
        });
        x += diameter + GAP;
    }
    let height = row_top + row_height + MARGIN;
    (circles, width, height)
}

/// Standalone SVG 1.1 document with one `<circle>` per cycle.
pub fn render_cycles(cs: &CycleStructure, title: &str) -> String {
    let (circles, width, height) = layout(cs);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    for c in &circles {
        writeln!(
            out,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" data-length=\"{}\"/>",
            c.cx, c.cy, c.r, c.cycle_length
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elgamal::elgamal_permutation;
    use crate::numth::GroupParams;
    use crate::permstat::cycle_decompose;

    fn structure(p: u64, g: u64) -> CycleStructure {
        cycle_decompose(&elgamal_permutation(&GroupParams::new(p, g).unwrap()))
    }

    fn overlap(a: &PlacedCircle, b: &PlacedCircle) -> bool {
        let d = ((a.cx - b.cx).powi(2) + (a.cy - b.cy).powi(2)).sqrt();
        d < a.r + b.r - 1e-9
    }

    #[test]
    fn circle_counts() {
        assert_eq!(
            render_cycles(&structure(3, 2), "")
                .matches("<circle")
                .count(),
            1
        );
        let cs = structure(1009, 11);
        assert_eq!(
            render_cycles(&cs, "p=1009").matches("<circle").count(),
            cs.count_cycles()
        );
    }

    #[test]
    fn radii_are_proportional_to_lengths() {
        let (circles, _, _) = layout(&structure(5, 2));
        assert_eq!(circles.len(), 2);
        assert!((circles[0].r / circles[1].r - 3.0).abs() < 1e-12);
        assert!((2.0 * PI * circles[0].r - 3.0 * UNIT_CIRCUMFERENCE).abs() < 1e-12);
    }

    #[test]
    fn circles_do_not_overlap_and_stay_on_canvas() {
        for g in [11, 17, 22] {
            let (circles, w, h) = layout(&structure(1009, g));
            for (i, a) in circles.iter().enumerate() {
                assert!(a.cx - a.r >= 0.0 && a.cx + a.r <= w);
                assert!(a.cy - a.r >= 0.0 && a.cy + a.r <= h);
                for b in &circles[i + 1..] {
                    assert!(!overlap(a, b));
                }
            }
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let cs = structure(1009, 11);
        assert_eq!(render_cycles(&cs, "x"), render_cycles(&cs, "x"));
        assert!(render_cycles(&cs, "a<b").contains("<title>a&lt;b</title>"));
    }
}
