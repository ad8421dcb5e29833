//! Hand-written SVG on a fixed canvas. Coordinates are printed with two
//! decimals so output bytes do not depend on float formatting quirks.

use std::fmt::Write;

use crate::alignment::FrequencyTable;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 420.0;
const FONT: &str = "font-family=\"sans-serif\"";

const LIGHT: (f64, f64, f64) = (247.0, 251.0, 255.0);
const DARK: (f64, f64, f64) = (8.0, 48.0, 107.0);

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open(title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <title>{t}</title>\n\
         <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n\
         <text x=\"{x:.2}\" y=\"24.00\" text-anchor=\"middle\" font-size=\"16\" {FONT}>{t}</text>\n",
        t = esc(title),
        x = WIDTH / 2.0,
    )
}

/// Linear blend from the lightest to the darkest shade.
fn shade(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(LIGHT.0, DARK.0),
        mix(LIGHT.1, DARK.1),
        mix(LIGHT.2, DARK.2)
    )
}

/// Grid heatmap of cell counts; shade is proportional to the count over
/// the largest count.
pub fn render_heatmap(table: &FrequencyTable) -> String {
    let mut out = open("Indicators per axis intersection");
    let (left, top, right, bottom) = (90.0, 70.0, 20.0, 20.0);
    let cols = table.columns.len().max(1) as f64;
    let rows = table.rows.len().max(1) as f64;
    let cw = (WIDTH - left - right) / cols;
    let ch = (HEIGHT - top - bottom) / rows;
    let max = table.max_cell();
    for (c, column) in table.columns.iter().enumerate() {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\" {FONT}>{}</text>",
            left + cw * (c as f64 + 0.5),
            top - 10.0,
            esc(column)
        );
    }
    for (r, row) in table.rows.iter().enumerate() {
        let y = top + ch * r as f64;
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\" {FONT}>{}</text>",
            left - 8.0,
            y + ch / 2.0 + 4.0,
            esc(row)
        );
        for (c, column) in table.columns.iter().enumerate() {
            let count = table.cell_counts[r][c];
            let t = if max == 0 { 0.0 } else { count as f64 / max as f64 };
            let x = left + cw * c as f64;
            let _ = writeln!(
                out,
                "<rect class=\"cell\" data-row=\"{}\" data-column=\"{}\" data-count=\"{count}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cw:.2}\" height=\"{ch:.2}\" fill=\"{}\" stroke=\"#cccccc\"/>",
                esc(row),
                esc(column),
                shade(t)
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" fill=\"{}\" {FONT}>{count}</text>",
                x + cw / 2.0,
                y + ch / 2.0 + 5.0,
                if t > 0.5 { "#ffffff" } else { "#000000" }
            );
        }
    }
    out += "</svg>\n";
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub key: String,
    pub value: f64,
}

impl Bar {
    pub fn new(key: &str, value: f64) -> Self {
        Self {
            key: key.to_string(),
            value,
        }
    }
}

/// Vertical bar chart, bars drawn in the given order. With no bars only the
/// axes and a placeholder label are drawn.
pub fn render_bar_chart(title: &str, bars: &[Bar]) -> String {
    let mut out = open(title);
    let (left, top, right, bottom) = (50.0, 50.0, 20.0, 60.0);
    let plot_w = WIDTH - left - right;
    let plot_h = HEIGHT - top - bottom;
    let base = top + plot_h;
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{left:.2}\" y1=\"{top:.2}\" x2=\"{left:.2}\" y2=\"{base:.2}\" stroke=\"#000000\"/>"
    );
    let _ = writeln!(
        out,
        "<line class=\"axis\" x1=\"{left:.2}\" y1=\"{base:.2}\" x2=\"{:.2}\" y2=\"{base:.2}\" stroke=\"#000000\"/>",
        left + plot_w
    );
    if bars.is_empty() {
        let _ = writeln!(
            out,
            "<text class=\"placeholder\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"14\" fill=\"#666666\" {FONT}>No data</text>",
            left + plot_w / 2.0,
            top + plot_h / 2.0
        );
        out += "</svg>\n";
        return out;
    }
    let max = bars.iter().map(|b| b.value).fold(0.0, f64::max).ceil().max(1.0);
    let step = (max / 10.0).ceil().max(1.0);
    let mut tick = 0.0;
    while tick <= max {
        let y = base - plot_h * tick / max;
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\" {FONT}>{tick}</text>",
            left - 6.0,
            y + 4.0
        );
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{left:.2}\" y2=\"{y:.2}\" stroke=\"#000000\"/>",
            left - 3.0
        );
        tick += step;
    }
    let slot = plot_w / bars.len() as f64;
    let bw = slot * 0.7;
    for (i, bar) in bars.iter().enumerate() {
        let h = plot_h * bar.value / max;
        let x = left + slot * i as f64 + (slot - bw) / 2.0;
        let _ = writeln!(
            out,
            "<rect class=\"bar\" data-key=\"{}\" data-value=\"{}\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{bw:.2}\" height=\"{h:.2}\" fill=\"#2171b5\"/>",
            esc(&bar.key),
            bar.value,
            base - h
        );
        let lx = x + bw / 2.0;
        let ly = base + 12.0;
        let _ = writeln!(
            out,
            "<text x=\"{lx:.2}\" y=\"{ly:.2}\" text-anchor=\"end\" font-size=\"10\" transform=\"rotate(-60 {lx:.2} {ly:.2})\" {FONT}>{}</text>",
            esc(&bar.key)
        );
    }
    out += "</svg>\n";
    out
}
