//! Minimal self-contained SVG line chart for probability traces. No
//! external assets; one polyline, two axes, four tick labels.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `values` against their indices. The y axis spans `[0, y_max]`
/// where `y_max` is the largest value (at least a small positive floor), so
/// a probability trace never clips.
pub fn line_chart(values: &[f64], title: &str) -> String {
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let y_max = values.iter().cloned().fold(0.0f64, f64::max).max(1e-12);
    let last_index = values.len().saturating_sub(1).max(1);

    let mut points = String::new();
    for (i, &v) in values.iter().enumerate() {
        let x = MARGIN + plot_w * i as f64 / last_index as f64;
        let y = HEIGHT - MARGIN - plot_h * (v / y_max).clamp(0.0, 1.0);
        points.push_str(&format!("{x:.1},{y:.1} "));
    }

    let x0 = MARGIN;
    let x1 = WIDTH - MARGIN;
    let y0 = HEIGHT - MARGIN;
    let y1 = MARGIN;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"28\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" fill=\"black\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{x0}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" fill=\"black\">0</text>\n",
        y0 + 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"{x1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" fill=\"black\">{}</text>\n",
        y0 + 18.0,
        last_index
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{y0}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\" fill=\"black\">0</text>\n",
        x0 - 6.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\" fill=\"black\">{y_max:.3}</text>\n",
        x0 - 6.0,
        y1 + 4.0
    ));
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
        points.trim_end()
    ));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_holds_every_point() {
        let values = [0.25, 0.5, 1.0, 0.5];
        let chart = line_chart(&values, "demo");
        assert!(chart.starts_with("<svg"));
        assert!(chart.ends_with("</svg>\n"));
        assert!(chart.contains("polyline"));
        assert!(chart.contains(">demo<"));
        let polyline = chart
            .lines()
            .find(|l| l.contains("polyline"))
            .unwrap()
            .to_string();
        assert_eq!(polyline.matches(',').count(), values.len());
    }

    #[test]
    fn titles_are_xml_escaped() {
        let chart = line_chart(&[0.1], "a < b & c");
        assert!(chart.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn empty_and_flat_inputs_do_not_panic() {
        let empty = line_chart(&[], "empty");
        assert!(empty.contains("polyline"));
        let flat = line_chart(&[0.0, 0.0, 0.0], "flat");
        assert!(flat.contains("polyline"));
    }
}
