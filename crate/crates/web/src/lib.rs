//! Browser bindings: invariants, Gluck twist and trivialization on `.kd` text,
//! plus an SVG sketch of the diagram.

use std::f64::consts::PI;
use std::fmt::Write as _;

use kirby_core::{
    gluck_twist, parse_diagram, serialize_diagram, trivialize_gluck, HandleDiagram, HandleId, InvariantSummary,
    SearchBudget, Sign,
};
use wasm_bindgen::prelude::*;

/// Largest node budget the page may request.
pub const MAX_BUDGET: usize = 50_000;

fn parse(src: &str) -> Result<HandleDiagram, String> {
    parse_diagram(src).map_err(|e| e.render(src))
}

pub fn invariants_text(src: &str) -> Result<String, String> {
    Ok(InvariantSummary::of(&parse(src)?).to_string())
}

/// Invariants before and after, then the twisted diagram.
pub fn gluck_text(src: &str, sphere: &str, plus: bool) -> Result<String, String> {
    let d = parse(src)?;
    let sign = if plus { Sign::Plus } else { Sign::Minus };
    let out = gluck_twist(&d, &HandleId::new(sphere), sign).map_err(|e| e.to_string())?;
    Ok(format!(
        "# before\n{}\n# after\n{}\n{}",
        InvariantSummary::of(&d),
        InvariantSummary::of(&out),
        serialize_diagram(&out)
    ))
}

pub fn trivialize_text(src: &str, sphere: &str, handle: &str, budget: usize) -> Result<String, String> {
    let d = parse(src)?;
    let b = SearchBudget::nodes(budget.min(MAX_BUDGET));
    let (v, stats) = trivialize_gluck(&d, &HandleId::new(sphere), &HandleId::new(handle), &b).map_err(|e| e.to_string())?;
    Ok(format!("{v}visited: {}\n", stats.visited))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Handles on a ring, dotted circles in the middle, linking numbers on chords.
pub fn render_svg(d: &HandleDiagram) -> String {
    let (w, h) = (480.0, 480.0);
    let (cx, cy, ring) = (w / 2.0, h / 2.0, 170.0);
    let ids = d.handle_ids();
    let pos = |i: usize| {
        let t = 2.0 * PI * i as f64 / ids.len().max(1) as f64 - PI / 2.0;
        (cx + ring * t.cos(), cy + ring * t.sin())
    };
    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="13">"#
    );
    for (a, b, v) in d.linking.pairs() {
        let (i, j) = (ids.iter().position(|x| x == a).unwrap(), ids.iter().position(|x| x == b).unwrap());
        let ((x1, y1), (x2, y2)) = (pos(i), pos(j));
        let _ = write!(
            svg,
            r##"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="#888"/><text x="{:.1}" y="{:.1}" fill="#555">{v}</text>"##,
            (x1 + x2) / 2.0 + 4.0,
            (y1 + y2) / 2.0 - 4.0
        );
    }
    let n_dots = d.dots.len();
    for (k, g) in d.dots.iter().enumerate() {
        let x = cx + (k as f64 - (n_dots as f64 - 1.0) / 2.0) * 44.0;
        let _ = write!(
            svg,
            r##"<circle cx="{x:.1}" cy="{cy:.1}" r="16" fill="none" stroke="#246" stroke-width="2"/><circle cx="{x:.1}" cy="{:.1}" r="3" fill="#246"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            cy - 16.0,
            cy + 32.0,
            escape(g.as_str())
        );
    }
    for (i, id) in ids.iter().enumerate() {
        let (x, y) = pos(i);
        let t = &d.handles[id];
        let _ = write!(
            svg,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="24" fill="#fff" stroke="#a33" stroke-width="2"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-weight="bold">{}</text><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text><text x="{x:.1}" y="{:.1}" text-anchor="middle" fill="#246">{}</text>"##,
            y + 5.0,
            escape(id.as_str()),
            y - 30.0,
            t.framing,
            y + 42.0,
            escape(&t.word.to_string())
        );
    }
    let _ = write!(
        svg,
        r##"<text x="8" y="{:.1}" fill="#555">3-handles: {}  4-handles: {}</text></svg>"##,
        h - 8.0,
        d.three_handles,
        d.four_handles
    );
    svg
}

pub fn svg_text(src: &str) -> Result<String, String> {
    Ok(render_svg(&parse(src)?))
}

#[wasm_bindgen]
pub fn invariants(src: &str) -> Result<String, JsError> {
    invariants_text(src).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gluck(src: &str, sphere: &str, plus: bool) -> Result<String, JsError> {
    gluck_text(src, sphere, plus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trivialize(src: &str, sphere: &str, handle: &str, budget: usize) -> Result<String, JsError> {
    trivialize_text(src, sphere, handle, budget).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn diagram_svg(src: &str) -> Result<String, JsError> {
    svg_text(src).map_err(|e| JsError::new(&e))
}
