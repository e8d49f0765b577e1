//! Top-down SVG 1.1 floor plans.
//!
//! World +y points up the page. Every number is printed with three
//! decimals so output bytes depend only on the layout.

use std::fmt::Write;

use psdl::geometry::{Axis, Facing};
use psdl::interp::Layout;
use psdl::loss::LossReport;

const PX_PER_M: f64 = 100.0;
const MARGIN: f64 = 20.0;

const STYLE: &str = "\
.scene{fill:#fafafa;stroke:#333;stroke-width:2}\
.object{fill:#9ecae1;fill-opacity:0.6;stroke:#3182bd;stroke-width:1}\
.object.violation{fill:#fc9272;stroke:#de2d26;stroke-width:2.5}\
.arrow{fill:none;stroke:#08306b;stroke-width:1.5}\
.label{font-family:sans-serif;font-size:10px;text-anchor:middle}";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders `layout`; objects that `report` lists in an error get the
/// `violation` class.
pub fn render_svg(layout: &Layout, report: Option<&LossReport>) -> String {
    let scene = layout.bounds();
    let width = scene.extent(Axis::X) * PX_PER_M + 2.0 * MARGIN;
    let height = scene.extent(Axis::Y) * PX_PER_M + 2.0 * MARGIN;
    let px = |x: f64| (x - scene.min.x) * PX_PER_M + MARGIN;
    let py = |y: f64| (scene.max.y - y) * PX_PER_M + MARGIN;
    let violating = report.map(|r| r.violating_objects()).unwrap_or_default();

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(&layout.name));
    let _ = writeln!(svg, "<style>{STYLE}</style>");
    let _ = writeln!(
        svg,
        "<rect class=\"scene\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
        px(scene.min.x),
        py(scene.max.y),
        scene.extent(Axis::X) * PX_PER_M,
        scene.extent(Axis::Y) * PX_PER_M
    );
    for o in &layout.objects {
        let b = o.aabb();
        let class = if violating.contains(&o.id.as_str()) {
            "object violation"
        } else {
            "object"
        };
        let _ = writeln!(svg, "<g id=\"{}\">", escape(&o.id));
        let _ = writeln!(
            svg,
            "<rect class=\"{class}\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
            px(b.min.x),
            py(b.max.y),
            b.extent(Axis::X) * PX_PER_M,
            b.extent(Axis::Y) * PX_PER_M
        );
        // Shaft from the center to the front face, with a two-stroke head.
        let (cx, cy) = (px(o.center.x), py(o.center.y));
        let half = match o.facing {
            Facing::XPos | Facing::XNeg => b.extent(Axis::X),
            Facing::YPos | Facing::YNeg => b.extent(Axis::Y),
        } * PX_PER_M
            / 2.0;
        let u = o.facing.unit();
        let (dx, dy) = (u.0, -u.1);
        let (tx, ty) = (cx + dx * half, cy + dy * half);
        let head = half.min(8.0) * 0.5;
        let (lx, ly) = (tx - dx * head - dy * head, ty - dy * head + dx * head);
        let (rx, ry) = (tx - dx * head + dy * head, ty - dy * head - dx * head);
        let _ = writeln!(
            svg,
            "<path class=\"arrow\" d=\"M {cx:.3} {cy:.3} L {tx:.3} {ty:.3} M {lx:.3} {ly:.3} L {tx:.3} {ty:.3} L {rx:.3} {ry:.3}\"/>"
        );
        let _ = writeln!(
            svg,
            "<text class=\"label\" x=\"{cx:.3}\" y=\"{:.3}\">{}</text>",
            cy - 3.0,
            escape(&o.name)
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use psdl::geometry::{Dims, Vec3};
    use psdl::interp::{ObjectState, Support};
    use psdl::loss::total_loss;

    fn layout(objects: Vec<ObjectState>) -> Layout {
        Layout {
            name: "room".into(),
            dims: Dims::new(4.0, 3.0, 2.5),
            objects,
        }
    }

    fn chair(x: f64) -> ObjectState {
        ObjectState {
            id: "c1".into(),
            name: "Chair <A>".into(),
            width: 0.5,
            depth: 0.5,
            height: 0.9,
            support: Support::Standing,
            center: Vec3::new(x, 0.0, 0.45),
            facing: Facing::XPos,
            placed: true,
        }
    }

    #[test]
    fn empty_scene_has_only_the_boundary() {
        let svg = render_svg(&layout(vec![]), None);
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains("class=\"scene\""));
        assert!(svg.contains("width=\"440.000\""));
    }

    #[test]
    fn one_object() {
        let svg = render_svg(&layout(vec![chair(0.0)]), None);
        assert_eq!(svg.matches("<rect class=\"object\"").count(), 1);
        assert_eq!(svg.matches("class=\"arrow\"").count(), 1);
        assert!(svg.contains("Chair &lt;A&gt;"));
        assert!(!svg.contains("violation\""));
        assert_eq!(svg, render_svg(&layout(vec![chair(0.0)]), None));
    }

    #[test]
    fn violations_are_marked() {
        let l = layout(vec![chair(1.9)]);
        let report = total_loss(&l);
        assert_eq!(report.error_count, 1);
        let svg = render_svg(&l, Some(&report));
        assert_eq!(svg.matches("class=\"object violation\"").count(), 1);
    }
}
