//! Deterministic SVG snapshots of a deployment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::network::Network;
use crate::objective::Density;
use crate::voronoi::NetworkCells;

const GRID_X: usize = 200;
const GRID_Y: usize = 100;
const LEVELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Current sensing radius; circles are drawn at 0.875 of it.
    pub radius: f64,
    pub contours: bool,
    pub color_cells: bool,
    pub margin: f64,
    pub width_px: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            radius: 1.0,
            contours: false,
            color_cells: false,
            margin: 1.0,
            width_px: 1000.0,
        }
    }
}

fn hue(i: usize) -> f64 {
    (i as f64 * 137.508) % 360.0
}

pub fn render_svg(
    network: &Network,
    density: Option<&dyn Density>,
    sensors: &[Point2],
    cells: Option<&NetworkCells>,
    options: &SvgOptions,
) -> String {
    let (lo, hi) = network.bounding_box();
    let x0 = lo.x - options.margin;
    let y0 = lo.y - options.margin;
    let w = hi.x - lo.x + 2.0 * options.margin;
    let h = hi.y - lo.y + 2.0 * options.margin;
    let height_px = options.width_px * h / w;
    let stroke = 0.004 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{x0:.6} {y0:.6} {w:.6} {h:.6}">"#,
        options.width_px, height_px
    );
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {:.6})">"#, 2.0 * y0 + h);

    if let (true, Some(d)) = (options.contours, density) {
        s.push_str(&contours(d, Point2::new(x0, y0), w, h, stroke));
    }

    let _ = writeln!(s, r##"<g id="network" stroke="#555" stroke-width="{stroke:.6}" stroke-linecap="round">"##);
    for seg in network.segments() {
        let (a, b) = (seg.a(), seg.b());
        let _ = writeln!(s, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, a.x, a.y, b.x, b.y);
    }
    s.push_str("</g>\n");

    if let (true, Some(cells)) = (options.color_cells, cells) {
        let _ = writeln!(s, r#"<g id="cells" stroke-width="{:.6}" stroke-linecap="butt">"#, 2.0 * stroke);
        for (k, seg) in network.segments().iter().enumerate() {
            for iv in cells.segment(k) {
                let (a, b) = (seg.at(iv.t0), seg.at(iv.t1));
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="hsl({:.1},70%,45%)"/>"#,
                    a.x, a.y, b.x, b.y, hue(iv.owner)
                );
            }
        }
        s.push_str("</g>\n");
    }

    let _ = writeln!(s, r##"<g id="sensors" fill="#1f6fb4" fill-opacity="0.25" stroke="#1f6fb4" stroke-width="{:.6}">"##, 0.5 * stroke);
    let r = 0.875 * options.radius;
    for p in sensors {
        let _ = writeln!(s, r#"<circle cx="{:.6}" cy="{:.6}" r="{r:.6}"/>"#, p.x, p.y);
    }
    s.push_str("</g>\n</g>\n</svg>\n");
    s
}

/// Marching-squares isolines of the density at `LEVELS` evenly spaced values.
fn contours(d: &dyn Density, origin: Point2, w: f64, h: f64, stroke: f64) -> String {
    let hx = w / GRID_X as f64;
    let hy = h / GRID_Y as f64;
    let at = |i: usize, j: usize| Point2::new(origin.x + hx * i as f64, origin.y + hy * j as f64);
    let mut grid = vec![0.0; (GRID_X + 1) * (GRID_Y + 1)];
    for j in 0..=GRID_Y {
        for i in 0..=GRID_X {
            grid[j * (GRID_X + 1) + i] = d.density(at(i, j));
        }
    }
    let v = |i: usize, j: usize| grid[j * (GRID_X + 1) + i];
    let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = String::from("<g id=\"contours\" fill=\"none\">\n");
    if !(hi > lo) {
        s.push_str("</g>\n");
        return s;
    }
    for l in 1..=LEVELS {
        let level = lo + (hi - lo) * l as f64 / (LEVELS + 1) as f64;
        let mut d_attr = String::new();
        for j in 0..GRID_Y {
            for i in 0..GRID_X {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let vals = corners.map(|(a, b)| v(a, b));
                let mut pts = Vec::with_capacity(4);
                for e in 0..4 {
                    let (va, vb) = (vals[e], vals[(e + 1) % 4]);
                    if (va < level) != (vb < level) {
                        let t = (level - va) / (vb - va);
                        let (pa, pb) = (at(corners[e].0, corners[e].1), at(corners[(e + 1) % 4].0, corners[(e + 1) % 4].1));
                        pts.push(pa + (pb - pa) * t);
                    }
                }
                for pair in pts.chunks_exact(2) {
                    let _ = write!(d_attr, "M{:.4} {:.4}L{:.4} {:.4}", pair[0].x, pair[0].y, pair[1].x, pair[1].y);
                }
            }
        }
        let _ = writeln!(
            s,
            r#"<path d="{d_attr}" stroke="hsl(30,80%,{:.0}%)" stroke-width="{:.6}"/>"#,
            75.0 - 40.0 * l as f64 / LEVELS as f64,
            0.5 * stroke
        );
    }
    s.push_str("</g>\n");
    s
}

pub fn emit_svg(
    network: &Network,
    density: Option<&dyn Density>,
    sensors: &[Point2],
    cells: Option<&NetworkCells>,
    path: impl AsRef<Path>,
    options: &SvgOptions,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_svg(network, density, sensors, cells, options)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::DensityField;
    use crate::voronoi::{clip_network_cells, SensorSet};

    fn net() -> Network {
        let p = Point2::new;
        Network::new(vec![p(0.0, 0.0), p(4.0, 0.0), p(4.0, 3.0)], vec![[0, 1], [1, 2]]).unwrap()
    }

    #[test]
    fn one_circle_per_sensor() {
        let sensors = [Point2::new(1.0, 0.0), Point2::new(4.0, 2.0)];
        let opts = SvgOptions { radius: 2.0, ..Default::default() };
        let s = render_svg(&net(), None, &sensors, None, &opts);
        assert_eq!(s.matches("<circle").count(), 2);
        assert_eq!(s.matches("r=\"1.750000\"").count(), 2);
        assert!(s.contains("viewBox=\"-1.000000 -1.000000 6.000000 5.000000\""));
    }

    #[test]
    fn deterministic_with_extras() {
        let n = net();
        let sensors = [Point2::new(1.0, 0.0), Point2::new(4.0, 2.0)];
        let cells = clip_network_cells(&n, &SensorSet::new(sensors.to_vec()).unwrap()).unwrap();
        let d = DensityField::case_study();
        let opts = SvgOptions { contours: true, color_cells: true, ..Default::default() };
        let a = render_svg(&n, Some(&d), &sensors, Some(&cells), &opts);
        let b = render_svg(&n, Some(&d), &sensors, Some(&cells), &opts);
        assert_eq!(a, b);
        assert!(a.contains("id=\"cells\"") && a.contains("id=\"contours\""));
        assert_eq!(a.matches("<circle").count(), 2);
    }
}
