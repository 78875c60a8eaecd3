//! Static SVG plots. Output depends only on the inputs: elements are emitted
//! in a fixed order and all numbers are printed with fixed precision.

use std::fmt::Write as _;

use poncelet_core::loci::LocusResult;
use poncelet_core::poncelet::{ConicPair, PolygonSample};
use poncelet_core::{AxisEllipse, GeneralEllipse, Point2};

const PAD: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

/// Outer-conic bounding box padded by 10% on every side, in SVG (y-down)
/// coordinates.
pub fn view_box(outer: &AxisEllipse) -> ViewBox {
    let (w, h) = (2.0 * outer.a, 2.0 * outer.b);
    ViewBox {
        x: outer.center.x - outer.a - PAD * w,
        y: -(outer.center.y + outer.b) - PAD * h,
        width: w * (1.0 + 2.0 * PAD),
        height: h * (1.0 + 2.0 * PAD),
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot<'a> {
    pub samples: &'a [PolygonSample],
    /// Draw every `stride`-th sample.
    pub stride: usize,
    pub locus: Option<&'a LocusResult>,
    pub markers: &'a [Point2],
}

fn ellipse(out: &mut String, e: &GeneralEllipse, class: &str, stroke: &str, width: f64) {
    writeln!(
        out,
        r#"    <ellipse class="{class}" cx="{:.6}" cy="{:.6}" rx="{:.6}" ry="{:.6}" transform="rotate({:.6} {:.6} {:.6})" fill="none" stroke="{stroke}" stroke-width="{:.6}"/>"#,
        e.center.x,
        e.center.y,
        e.semi_major,
        e.semi_minor,
        e.rotation.to_degrees(),
        e.center.x,
        e.center.y,
        width,
    )
    .expect("writing to a String");
}

fn points_attr(pts: &[Point2]) -> String {
    pts.iter()
        .map(|p| format!("{:.6},{:.6}", p.x, p.y))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render(pair: &ConicPair, plot: &Plot<'_>) -> String {
    let vb = view_box(&pair.outer);
    let w = vb.width.min(vb.height) * 0.004;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        vb.x, vb.y, vb.width, vb.height
    )
    .expect("writing to a String");
    out.push_str("  <g transform=\"scale(1,-1)\">\n");
    ellipse(&mut out, &pair.outer.to_general(), "outer", "black", w);
    ellipse(&mut out, &pair.caustic_shape, "caustic", "#1f77b4", w);

    let stride = plot.stride.max(1);
    for s in plot.samples.iter().step_by(stride) {
        writeln!(
            out,
            r##"    <polygon class="sample" points="{}" fill="none" stroke="#888888" stroke-width="{:.6}"/>"##,
            points_attr(&s.vertices),
            0.5 * w
        )
        .expect("writing to a String");
    }

    if let Some(l) = plot.locus {
        for p in &l.points {
            writeln!(
                out,
                r##"    <circle class="locus-point" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#d62728"/>"##,
                p.x,
                p.y,
                1.5 * w
            )
            .expect("writing to a String");
        }
        if let Some(e) = &l.fitted {
            ellipse(&mut out, e, "locus-fit", "#d62728", w);
        }
    }

    for m in plot.markers {
        writeln!(
            out,
            r##"    <circle class="marker" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="none" stroke="#2ca02c" stroke-width="{:.6}"/>"##,
            m.x,
            m.y,
            4.0 * w,
            w
        )
        .expect("writing to a String");
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
