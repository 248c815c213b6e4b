use std::fmt::Write;

use super::{Path, Scenario};

/// `j,x,y,z` rows with 1-based `j`.
pub fn path_csv(path: &Path) -> String {
    let mut out = String::from("j,x,y,z\n");
    for (j, p) in path.points.iter().enumerate() {
        writeln!(out, "{},{},{},{}", j + 1, p[0], p[1], p[2]).unwrap();
    }
    out
}

/// Top view: safety annuli, obstacle discs, the path polyline and its
/// endpoints. The y axis points up.
pub fn path_svg(scenario: &Scenario, path: &Path) -> String {
    let [xmin, ymin, xmax, ymax] = scenario.terrain().extent();
    let (w, h) = (xmax - xmin, ymax - ymin);
    let s = scenario.config().safety_width;
    let fy = |y: f64| ymax - y + ymin;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{xmin} {ymin} {w} {h}" width="800" height="{}">"#,
        (800.0 * h / w).round()
    )
    .unwrap();
    writeln!(out, r##"<rect x="{xmin}" y="{ymin}" width="{w}" height="{h}" fill="#f4f1e8"/>"##).unwrap();
    for o in scenario.obstacles() {
        writeln!(
            out,
            r##"<circle class="safety" cx="{}" cy="{}" r="{}" fill="none" stroke="#d08770" stroke-dasharray="6 4"/>"##,
            o.center[0],
            fy(o.center[1]),
            o.radius + s
        )
        .unwrap();
    }
    for o in scenario.obstacles() {
        writeln!(
            out,
            r##"<circle class="obstacle" cx="{}" cy="{}" r="{}" fill="#bf616a" fill-opacity="0.6"/>"##,
            o.center[0],
            fy(o.center[1]),
            o.radius
        )
        .unwrap();
    }
    let points: Vec<String> = path
        .points
        .iter()
        .map(|p| format!("{},{}", p[0], fy(p[1])))
        .collect();
    writeln!(
        out,
        r##"<polyline class="path" points="{}" fill="none" stroke="#2e3440" stroke-width="3"/>"##,
        points.join(" ")
    )
    .unwrap();
    for (label, p) in [("start", path.points.first()), ("goal", path.points.last())] {
        if let Some(p) = p {
            writeln!(
                out,
                r##"<rect class="{label}" x="{}" y="{}" width="16" height="16" fill="#5e81ac"/>"##,
                p[0] - 8.0,
                fy(p[1]) - 8.0
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
