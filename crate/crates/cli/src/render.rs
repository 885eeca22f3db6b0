//! SVG plots of point clouds: ticks on a segment for `d = 1`, dots in a
//! square for `d = 2`.

use std::fmt::Write as _;

use ifsx_core::CompactSet;

pub const DEFAULT_SIZE: u32 = 800;
const MARGIN: f64 = 20.0;

fn px(v: f64) -> String {
    format!("{v:.3}")
}

pub fn render_svg(set: &CompactSet, size: u32) -> Result<String, String> {
    let side = size as f64;
    let span = side - 2.0 * MARGIN;
    let mut out = String::new();
    match set.dim() {
        1 => {
            let height = 80.0;
            let mid = height / 2.0;
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {size} {}">"#,
                height, height
            );
            let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
            let _ = writeln!(
                out,
                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-width="1"/>"##,
                px(MARGIN),
                px(mid),
                px(MARGIN + span),
                px(mid)
            );
            let _ = writeln!(out, r##"<g stroke="#1f3b73" stroke-width="1">"##);
            for p in set.iter() {
                let x = MARGIN + p[0] * span;
                let _ = writeln!(
                    out,
                    r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
                    px(x),
                    px(mid - 12.0),
                    px(mid + 12.0)
                );
            }
        }
        2 => {
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
            );
            let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
            let _ = writeln!(
                out,
                r##"<rect x="{0}" y="{0}" width="{1}" height="{1}" fill="none" stroke="#999999" stroke-width="1"/>"##,
                px(MARGIN),
                px(span)
            );
            let _ = writeln!(out, r##"<g fill="#1f3b73">"##);
            for p in set.iter() {
                let x = MARGIN + p[0] * span;
                let y = MARGIN + (1.0 - p[1]) * span;
                let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="1.5"/>"#, px(x), px(y));
            }
        }
        d => return Err(format!("render supports dimension 1 or 2, got {d}")),
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
