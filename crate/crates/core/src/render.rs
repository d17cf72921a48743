//! Self-contained SVG plots: polar sky plots and per-PRN trend lines.

use std::fmt::Write as _;

use crate::aggregate::{avg_cno, mean_positions, summarize, SampleFilter, SummaryOptions};
use crate::error::{Error, Result};
use crate::ingest::{Condition, PerOrientation, ScenarioBundle, SvId};

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 330.0;
const SKY_RADIUS: f64 = 130.0;
const SKY_CENTER: (f64, f64) = (160.0, 185.0);
const COLUMNS: usize = 3;

/// C/N0 range mapped onto the color ramp and marker size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorScale {
    pub min_dbhz: f64,
    pub max_dbhz: f64,
}

impl Default for ColorScale {
    fn default() -> Self {
        Self {
            min_dbhz: 20.0,
            max_dbhz: 50.0,
        }
    }
}

impl ColorScale {
    fn fraction(&self, cno: f64) -> f64 {
        let span = self.max_dbhz - self.min_dbhz;
        if span <= 0.0 {
            return 1.0;
        }
        ((cno - self.min_dbhz) / span).clamp(0.0, 1.0)
    }

    /// Blue (weak) through green to red (strong).
    fn color(&self, cno: f64) -> String {
        let hue = 240.0 * (1.0 - self.fraction(cno));
        format!("hsl({hue:.0},80%,45%)")
    }

    fn marker_radius(&self, cno: f64) -> f64 {
        3.0 + 7.0 * self.fraction(cno)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    PolarSky,
    TrendLines,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub kind: PlotKind,
    pub scale: ColorScale,
    pub filter: SampleFilter,
}

impl RenderSpec {
    pub fn new(kind: PlotKind) -> Self {
        Self {
            kind,
            scale: ColorScale::default(),
            filter: SampleFilter::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkyPoint {
    pub sv_id: SvId,
    pub azim_deg: f64,
    pub elev_deg: f64,
    pub cno_dbhz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkyPanel {
    pub title: String,
    pub points: Vec<SkyPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendPanel {
    pub title: String,
    pub lines: Vec<(SvId, PerOrientation<f64>)>,
}

/// Plot coordinates of a sky direction: north up, azimuth clockwise,
/// zenith at `center`, horizon on the circle of `radius`.
pub fn polar_position(azim_deg: f64, elev_deg: f64, center: (f64, f64), radius: f64) -> (f64, f64) {
    let r = radius * (90.0 - elev_deg.clamp(0.0, 90.0)) / 90.0;
    let az = azim_deg.to_radians();
    (center.0 + r * az.sin(), center.1 - r * az.cos())
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn document(panel_count: usize, body: &str) -> String {
    let cols = panel_count.clamp(1, COLUMNS);
    let rows = panel_count.div_ceil(COLUMNS).max(1);
    let w = PANEL_W * cols as f64;
    let h = PANEL_H * rows as f64;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn panel_origin(index: usize) -> (f64, f64) {
    ((index % COLUMNS) as f64 * PANEL_W, (index / COLUMNS) as f64 * PANEL_H)
}

pub fn polar_sky_svg(panels: &[SkyPanel], scale: ColorScale) -> Result<String> {
    if panels.is_empty() || panels.iter().all(|p| p.points.is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let (cx, cy) = SKY_CENTER;
    let mut body = String::new();
    for (i, panel) in panels.iter().enumerate() {
        let (ox, oy) = panel_origin(i);
        let _ = writeln!(body, "<g transform=\"translate({ox:.0},{oy:.0})\">");
        let _ = writeln!(
            body,
            "<text x=\"{cx:.0}\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
            escape(&panel.title)
        );
        for elev in [0.0, 30.0, 60.0] {
            let r = SKY_RADIUS * (90.0 - elev) / 90.0;
            let _ = writeln!(
                body,
                "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"#bbb\"/>"
            );
        }
        for (label, az) in [("N", 0.0), ("E", 90.0), ("S", 180.0), ("W", 270.0)] {
            let (x, y) = polar_position(az, 0.0, SKY_CENTER, SKY_RADIUS);
            let (tx, ty) = polar_position(az, -8.0, SKY_CENTER, SKY_RADIUS + 12.0);
            let _ = writeln!(
                body,
                "<line x1=\"{cx:.2}\" y1=\"{cy:.2}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>"
            );
            let _ = writeln!(
                body,
                "<text x=\"{tx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{label}</text>",
                ty + 4.0
            );
        }
        for p in &panel.points {
            let (x, y) = polar_position(p.azim_deg, p.elev_deg, SKY_CENTER, SKY_RADIUS);
            let _ = writeln!(
                body,
                "<circle class=\"sat\" data-prn=\"{}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" fill=\"{}\">\
                 <title>PRN {} {:.1} dB-Hz</title></circle>",
                p.sv_id,
                scale.marker_radius(p.cno_dbhz),
                scale.color(p.cno_dbhz),
                p.sv_id,
                p.cno_dbhz
            );
            let _ = writeln!(
                body,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"9\">{}</text>",
                x + 8.0,
                y - 6.0,
                p.sv_id
            );
        }
        body.push_str("</g>\n");
    }
    Ok(document(panels.len(), &body))
}

pub fn trend_lines_svg(panels: &[TrendPanel], scale: ColorScale) -> Result<String> {
    if panels.is_empty() || panels.iter().all(|p| p.lines.is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let (left, right, top, bottom) = (50.0, 260.0, 45.0, 300.0);
    let x_at = |i: usize| left + (right - left) * i as f64 / 2.0;
    let y_at = |cno: f64| bottom - (bottom - top) * scale.fraction(cno);

    let mut body = String::new();
    for (i, panel) in panels.iter().enumerate() {
        let (ox, oy) = panel_origin(i);
        let _ = writeln!(body, "<g transform=\"translate({ox:.0},{oy:.0})\">");
        let _ = writeln!(
            body,
            "<text x=\"{:.0}\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
            PANEL_W / 2.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            body,
            "<rect x=\"{left}\" y=\"{top}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#bbb\"/>",
            right - left,
            bottom - top
        );
        for (j, name) in ["left", "flat", "right"].iter().enumerate() {
            let _ = writeln!(
                body,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{name}</text>",
                x_at(j),
                bottom + 16.0
            );
        }
        for db in [scale.min_dbhz, (scale.min_dbhz + scale.max_dbhz) / 2.0, scale.max_dbhz] {
            let _ = writeln!(
                body,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{db:.0}</text>",
                left - 4.0,
                y_at(db) + 4.0
            );
        }
        for (sv, triple) in &panel.lines {
            let vals = [triple.left, triple.flat, triple.right];
            let points: Vec<String> = vals
                .iter()
                .enumerate()
                .map(|(j, v)| format!("{:.2},{:.2}", x_at(j), y_at(*v)))
                .collect();
            let mean = vals.iter().sum::<f64>() / 3.0;
            let _ = writeln!(
                body,
                "<polyline class=\"prn\" data-prn=\"{sv}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
                points.join(" "),
                scale.color(mean)
            );
            let _ = writeln!(
                body,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"9\">{sv}</text>",
                right + 4.0,
                y_at(triple.right) + 3.0
            );
        }
        body.push_str("</g>\n");
    }
    Ok(document(panels.len(), &body))
}

/// One sky panel per dataset: mean position and mean C/N0 per PRN.
pub fn sky_panels(bundle: &ScenarioBundle, filter: SampleFilter) -> Vec<SkyPanel> {
    bundle
        .iter()
        .map(|(key, dataset)| {
            let means = avg_cno(dataset.observations(), filter).unwrap_or_default();
            let positions = mean_positions(dataset.observations());
            let points = means
                .iter()
                .filter_map(|(sv, &cno)| {
                    let &(azim_deg, elev_deg) = positions.get(sv)?;
                    Some(SkyPoint {
                        sv_id: *sv,
                        azim_deg,
                        elev_deg,
                        cno_dbhz: cno,
                    })
                })
                .collect();
            SkyPanel {
                title: format!("{} / {}", key.condition, key.orientation),
                points,
            }
        })
        .collect()
}

/// One trend panel per condition that has all three orientations.
pub fn trend_panels(bundle: &ScenarioBundle, filter: SampleFilter) -> Result<Vec<TrendPanel>> {
    let mut panels = Vec::new();
    for condition in Condition::ALL {
        if bundle.triple(condition).is_err() {
            continue;
        }
        let summaries = summarize(
            bundle,
            condition,
            SummaryOptions {
                filter,
                tie_epsilon: 0.0,
            },
        )?;
        panels.push(TrendPanel {
            title: condition.to_string(),
            lines: summaries.iter().filter_map(|s| Some((s.sv_id, s.triple()?))).collect(),
        });
    }
    Ok(panels)
}

pub fn render_bundle(bundle: &ScenarioBundle, spec: &RenderSpec) -> Result<String> {
    match spec.kind {
        PlotKind::PolarSky => polar_sky_svg(&sky_panels(bundle, spec.filter), spec.scale),
        PlotKind::TrendLines => trend_lines_svg(&trend_panels(bundle, spec.filter)?, spec.scale),
    }
}
