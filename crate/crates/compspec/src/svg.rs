//! Deterministic SVG 1.1 rendering of spectral regions.
//!
//! Coordinates are printed with three decimals, so identical regions give
//! identical bytes.

use std::fmt::Write;

use compspec_core::{Primitive, SpectralRegion, C64};

const SIZE: f64 = 480.0;
const SPIRAL_CUTOFF: f64 = 1e-4;
const SPIRAL_SAMPLES: usize = 512;
const TAIL_CUTOFF: f64 = 1e-3;

struct Frame {
    half_width: f64,
}

impl Frame {
    fn x(&self, z: C64) -> f64 {
        (z.re / self.half_width + 1.0) * SIZE / 2.0
    }

    fn y(&self, z: C64) -> f64 {
        (1.0 - z.im / self.half_width) * SIZE / 2.0
    }

    fn len(&self, r: f64) -> f64 {
        r / self.half_width * SIZE / 2.0
    }
}

fn layer(
    out: &mut String,
    frame: &Frame,
    region: &SpectralRegion,
    class: &str,
    fill: &str,
    stroke: &str,
) {
    let _ = writeln!(out, r#"  <g class="{class}">"#);
    for p in region.primitives() {
        match p {
            Primitive::Disk { radius } => {
                let _ = writeln!(
                    out,
                    r#"    <circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{fill}" fill-opacity="0.5" stroke="{stroke}" stroke-width="1"/>"#,
                    frame.x(C64::new(0.0, 0.0)),
                    frame.y(C64::new(0.0, 0.0)),
                    frame.len(*radius).max(0.5)
                );
            }
            Primitive::Spiral { a } => {
                let t_max = -SPIRAL_CUTOFF.ln() / a.re;
                let mut pts = String::new();
                for k in 0..=SPIRAL_SAMPLES {
                    let z = (-a * (t_max * k as f64 / SPIRAL_SAMPLES as f64)).exp();
                    let _ = write!(
                        pts,
                        "{}{:.3},{:.3}",
                        if k == 0 { "" } else { " " },
                        frame.x(z),
                        frame.y(z)
                    );
                }
                let _ = writeln!(
                    out,
                    r#"    <polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="2"/>"#
                );
            }
            Primitive::Points(ps) => {
                for z in ps {
                    let _ = writeln!(
                        out,
                        r#"    <circle cx="{:.3}" cy="{:.3}" r="4" fill="{stroke}"/>"#,
                        frame.x(*z),
                        frame.y(*z)
                    );
                }
            }
            Primitive::Tail { base } => {
                let mut z = C64::new(1.0, 0.0);
                loop {
                    let _ = writeln!(
                        out,
                        r#"    <rect x="{:.3}" y="{:.3}" width="4" height="4" fill="{stroke}"/>"#,
                        frame.x(z) - 2.0,
                        frame.y(z) - 2.0
                    );
                    z *= base;
                    if z.norm() < TAIL_CUTOFF || base.norm() == 0.0 {
                        break;
                    }
                }
                let _ = writeln!(
                    out,
                    r#"    <rect x="{:.3}" y="{:.3}" width="4" height="4" fill="{stroke}"/>"#,
                    frame.x(C64::new(0.0, 0.0)) - 2.0,
                    frame.y(C64::new(0.0, 0.0)) - 2.0
                );
            }
        }
    }
    out.push_str("  </g>\n");
}

/// Full spectrum filled in light blue, essential spectrum drawn over it in
/// dark red, with the unit circle and axes for reference.
pub fn render(full: &SpectralRegion, essential: &SpectralRegion) -> String {
    let extent = full.max_modulus().max(essential.max_modulus()).max(1.0);
    let frame = Frame {
        half_width: 1.15 * extent,
    };
    let mut out = String::new();
    out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out.push('\n');
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    let (cx, cy) = (frame.x(C64::new(0.0, 0.0)), frame.y(C64::new(0.0, 0.0)));
    let _ = writeln!(
        out,
        r##"  <line x1="0" y1="{cy:.3}" x2="{SIZE}" y2="{cy:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{cx:.3}" y1="0" x2="{cx:.3}" y2="{SIZE}" stroke="#bbbbbb" stroke-width="0.5"/>"##
    );
    let _ = writeln!(
        out,
        r##"  <circle class="unit-circle" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="#777777" stroke-width="1" stroke-dasharray="4 3"/>"##,
        frame.len(1.0)
    );
    layer(&mut out, &frame, full, "full", "#9ecae1", "#3182bd");
    layer(
        &mut out,
        &frame,
        essential,
        "essential",
        "#fcbba1",
        "#a50f15",
    );
    out.push_str("</svg>\n");
    out
}
