use std::fmt::Write;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line chart of progress curves (`w` against iteration) as SVG.
pub fn progress_svg(title: &str, series: &[(String, Vec<f64>)]) -> String {
    let (width, height, margin) = (640.0, 420.0, 50.0);
    let max_len = series.iter().map(|(_, v)| v.len()).max().unwrap_or(1).max(2);
    let (lo, hi) = series
        .iter()
        .flat_map(|(_, v)| v.iter())
        .fold((0.0f64, 1.0f64), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    let sx = |i: usize| margin + (width - 2.0 * margin) * i as f64 / (max_len - 1) as f64;
    let sy = |y: f64| height - margin - (height - 2.0 * margin) * (y - lo) / (hi - lo);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, width / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = margin,
        b = height - margin,
        r = width - margin
    );
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{tick}</text>"#, margin - 5.0, sy(tick) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">iteration (1..{max_len})</text>"#, width / 2.0, height - 15.0);
    for (k, (name, values)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, y)| format!("{:.2},{:.2}", sx(i), sy(*y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = margin + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{ly}" x2="{x2}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}">{}</text>"#,
            escape(name),
            x = width - margin - 110.0,
            x2 = width - margin - 90.0,
            tx = width - margin - 85.0,
            ty = ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
