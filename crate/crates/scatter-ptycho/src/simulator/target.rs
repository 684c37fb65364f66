//! Synthetic binary amplitude targets: bar charts in the 1951 resolution
//! chart family, blocky text masks and grayscale image files.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::field::ComplexField;

/// What to render and how large it is on the target plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub kind: TargetKind,
    /// Physical extent `(width, height)` in meters.
    pub extent: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    /// Bar-triplet chart: element `(g, e)` carries spatial frequency
    /// `2^(g + (e-1)/6)` line pairs per millimeter, rendered as three
    /// vertical bars plus the orthogonal triplet.
    UsafBars {
        groups: Vec<i32>,
        /// Elements (1..=6) rendered within each group.
        elements: Vec<u32>,
    },
    /// A string rendered with a 5x7 block font at the given glyph height.
    TextMask { text: String, height: f64 },
    /// An 8/16-bit grayscale raster mapped to amplitudes in [0, 1].
    ImageFile { path: PathBuf },
}

impl TargetSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.extent.0 > 0.0 && self.extent.1 > 0.0) {
            return Err(Error::invalid("target extent must be positive"));
        }
        match &self.kind {
            TargetKind::UsafBars { groups, elements } => {
                if groups.is_empty() {
                    return Err(Error::invalid("bar chart needs at least one group"));
                }
                if elements.is_empty() || elements.iter().any(|&e| !(1..=6).contains(&e)) {
                    return Err(Error::invalid("bar elements must be within 1..=6"));
                }
            }
            TargetKind::TextMask { height, .. } => {
                if !(*height > 0.0) {
                    return Err(Error::invalid("text height must be positive"));
                }
            }
            TargetKind::ImageFile { .. } => {}
        }
        Ok(())
    }
}

/// Spatial frequency of chart element `(group, element)` in lp/mm.
pub fn bar_frequency_lp_mm(group: i32, element: u32) -> f64 {
    2f64.powf(group as f64 + (element as f64 - 1.0) / 6.0)
}

/// Bar width in meters for chart element `(group, element)`.
pub fn bar_width_m(group: i32, element: u32) -> f64 {
    0.5e-3 / bar_frequency_lp_mm(group, element)
}

/// One placed chart element: both triplet centers in meters relative to
/// the chart (and grid) center, x to the right and y downward.
#[derive(Debug, Clone, PartialEq)]
pub struct UsafElement {
    pub group: i32,
    pub element: u32,
    pub frequency_lp_mm: f64,
    pub bar_width: f64,
    /// Center of the triplet whose bars are vertical (modulation along x).
    pub vertical_center: (f64, f64),
    /// Center of the triplet whose bars are horizontal (modulation along y).
    pub horizontal_center: (f64, f64),
}

/// Deterministic chart layout: one column per group (ascending, left to
/// right), elements stacked top to bottom, each element showing the
/// vertical triplet next to the horizontal one. Shared by the generator
/// and the contrast analyzer so both agree on where every triplet sits.
#[derive(Debug, Clone, PartialEq)]
pub struct UsafLayout {
    elements: Vec<UsafElement>,
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl UsafLayout {
    pub fn from_spec(spec: &TargetSpec) -> Result<Self> {
        spec.validate()?;
        let TargetKind::UsafBars { groups, elements } = &spec.kind else {
            return Err(Error::invalid("layout requires a bar-chart target"));
        };
        let mut groups = groups.clone();
        groups.sort_unstable();
        groups.dedup();
        let mut elems = elements.clone();
        elems.sort_unstable();
        elems.dedup();

        // Column geometry per group, sized by its widest (lowest) element.
        let mut placed = Vec::new();
        let mut col_widths = Vec::new();
        let mut col_heights = Vec::new();
        for &g in &groups {
            let w_max = bar_width_m(g, elems[0]);
            let mut height = 0.0;
            for &e in &elems {
                let w = bar_width_m(g, e);
                height += 5.0 * w + 2.0 * w;
            }
            col_widths.push(11.0 * w_max);
            col_heights.push(height);
        }
        let gap: Vec<f64> = groups.iter().map(|&g| 3.0 * bar_width_m(g, elems[0])).collect();
        let total_w: f64 = col_widths.iter().sum::<f64>()
            + gap.iter().take(groups.len().saturating_sub(1)).sum::<f64>();
        let total_h = col_heights.iter().cloned().fold(0.0, f64::max);
        if total_w > spec.extent.0 || total_h > spec.extent.1 {
            return Err(Error::invalid(format!(
                "chart {:.2} x {:.2} mm does not fit the {:.2} x {:.2} mm extent",
                total_w * 1e3,
                total_h * 1e3,
                spec.extent.0 * 1e3,
                spec.extent.1 * 1e3
            )));
        }

        let mut x = -total_w / 2.0;
        for (gi, &g) in groups.iter().enumerate() {
            let mut y = -col_heights[gi] / 2.0;
            for &e in &elems {
                let w = bar_width_m(g, e);
                let block_h = 5.0 * w;
                let vy = y + block_h / 2.0;
                let vx = x + 2.5 * w;
                let hx = vx + 2.5 * w + w + 2.5 * w;
                placed.push(UsafElement {
                    group: g,
                    element: e,
                    frequency_lp_mm: bar_frequency_lp_mm(g, e),
                    bar_width: w,
                    vertical_center: (vx, vy),
                    horizontal_center: (hx, vy),
                });
                y += block_h + 2.0 * w;
            }
            x += col_widths[gi] + gap[gi];
        }
        Ok(Self { elements: placed })
    }

    pub fn elements(&self) -> &[UsafElement] {
        &self.elements
    }

    pub fn element(&self, group: i32, element: u32) -> Option<&UsafElement> {
        self.elements.iter().find(|e| e.group == group && e.element == element)
    }

    /// Elements sorted by increasing spatial frequency.
    pub fn by_frequency(&self) -> Vec<&UsafElement> {
        let mut v: Vec<&UsafElement> = self.elements.iter().collect();
        v.sort_by(|a, b| a.frequency_lp_mm.total_cmp(&b.frequency_lp_mm));
        v
    }

    fn bar_rects(e: &UsafElement) -> Vec<Rect> {
        let w = e.bar_width;
        let mut rects = Vec::with_capacity(6);
        let (vx, vy) = e.vertical_center;
        let (hx, hy) = e.horizontal_center;
        for i in [-1.0, 0.0, 1.0] {
            rects.push(Rect {
                x0: vx + 2.0 * i * w - w / 2.0,
                x1: vx + 2.0 * i * w + w / 2.0,
                y0: vy - 2.5 * w,
                y1: vy + 2.5 * w,
            });
            rects.push(Rect {
                x0: hx - 2.5 * w,
                x1: hx + 2.5 * w,
                y0: hy + 2.0 * i * w - w / 2.0,
                y1: hy + 2.0 * i * w + w / 2.0,
            });
        }
        rects
    }
}

fn grid_dims(extent: (f64, f64), pitch: f64) -> Result<(usize, usize)> {
    if !(pitch.is_finite() && pitch > 0.0) {
        return Err(Error::invalid(format!("pitch must be > 0, got {pitch}")));
    }
    let w = (extent.0 / pitch).round() as usize;
    let h = (extent.1 / pitch).round() as usize;
    if w < 4 || h < 4 {
        return Err(Error::invalid("target grid smaller than 4x4"));
    }
    Ok((h, w))
}

fn rasterize(rects: &[Rect], height: usize, width: usize, pitch: f64) -> Array2<Complex64> {
    let (cy, cx) = (height / 2, width / 2);
    let mut data = Array2::zeros((height, width));
    for r in rects {
        let c0 = ((r.x0 / pitch) + cx as f64).ceil().max(0.0) as usize;
        let c1 = (((r.x1 / pitch) + cx as f64).floor() as isize).min(width as isize - 1);
        let r0 = ((r.y0 / pitch) + cy as f64).ceil().max(0.0) as usize;
        let r1 = (((r.y1 / pitch) + cy as f64).floor() as isize).min(height as isize - 1);
        if c1 < 0 || r1 < 0 {
            continue;
        }
        for row in r0..=r1 as usize {
            for col in c0..=c1 as usize {
                // Sample center inside the rectangle: binary fill.
                let x = (col as f64 - cx as f64) * pitch;
                let y = (row as f64 - cy as f64) * pitch;
                if x >= r.x0 && x <= r.x1 && y >= r.y0 && y <= r.y1 {
                    data[(row, col)] = Complex64::ONE;
                }
            }
        }
    }
    data
}

// 5x7 block font, one byte per row, 5 low bits used (MSB of the 5 on the
// left). Covers A-Z, 0-9 and space.
const FONT_5X7: &[(char, [u8; 7])] = &[
    ('A', [0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11]),
    ('B', [0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E]),
    ('C', [0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E]),
    ('D', [0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E]),
    ('E', [0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F]),
    ('F', [0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10]),
    ('G', [0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F]),
    ('H', [0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11]),
    ('I', [0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E]),
    ('J', [0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C]),
    ('K', [0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11]),
    ('L', [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F]),
    ('M', [0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11]),
    ('N', [0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11]),
    ('O', [0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E]),
    ('P', [0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10]),
    ('Q', [0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D]),
    ('R', [0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11]),
    ('S', [0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E]),
    ('T', [0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04]),
    ('U', [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E]),
    ('V', [0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04]),
    ('W', [0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A]),
    ('X', [0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11]),
    ('Y', [0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04]),
    ('Z', [0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F]),
    ('0', [0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E]),
    ('1', [0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E]),
    ('2', [0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F]),
    ('3', [0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E]),
    ('4', [0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02]),
    ('5', [0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E]),
    ('6', [0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E]),
    ('7', [0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08]),
    ('8', [0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E]),
    ('9', [0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C]),
    (' ', [0, 0, 0, 0, 0, 0, 0]),
];

fn glyph(ch: char) -> Result<[u8; 7]> {
    let up = ch.to_ascii_uppercase();
    FONT_5X7
        .iter()
        .find(|(c, _)| *c == up)
        .map(|(_, rows)| *rows)
        .ok_or_else(|| Error::invalid(format!("no glyph for character {ch:?}")))
}

fn text_rects(text: &str, height: f64) -> Result<Vec<Rect>> {
    let cell = height / 7.0;
    let advance = 6.0 * cell;
    let total_w = text.chars().count() as f64 * advance - cell;
    let mut rects = Vec::new();
    let mut x = -total_w / 2.0;
    for ch in text.chars() {
        let rows = glyph(ch)?;
        for (ri, bits) in rows.iter().enumerate() {
            for col in 0..5 {
                if bits & (0x10 >> col) != 0 {
                    rects.push(Rect {
                        x0: x + col as f64 * cell,
                        x1: x + (col + 1) as f64 * cell,
                        y0: -height / 2.0 + ri as f64 * cell,
                        y1: -height / 2.0 + (ri + 1) as f64 * cell,
                    });
                }
            }
        }
        x += advance;
    }
    Ok(rects)
}

/// Renders a [`TargetSpec`] as a real, binary {0, 1} amplitude field at
/// `pitch` meters per sample (image files may carry intermediate gray
/// levels). The finest requested bar must span at least 2 samples.
pub fn make_target(spec: &TargetSpec, pitch: f64) -> Result<ComplexField> {
    spec.validate()?;
    let (h, w) = grid_dims(spec.extent, pitch)?;
    match &spec.kind {
        TargetKind::UsafBars { .. } => {
            let layout = UsafLayout::from_spec(spec)?;
            let finest =
                layout.elements().iter().map(|e| e.bar_width).fold(f64::INFINITY, f64::min);
            if finest < 2.0 * pitch {
                return Err(Error::invalid(format!(
                    "finest bar ({:.1} um) needs at least 2 samples at pitch {:.1} um",
                    finest * 1e6,
                    pitch * 1e6
                )));
            }
            let mut rects = Vec::new();
            for e in layout.elements() {
                rects.extend(UsafLayout::bar_rects(e));
            }
            ComplexField::new(rasterize(&rects, h, w, pitch), pitch)
        }
        TargetKind::TextMask { text, height } => {
            if *height > spec.extent.1 {
                return Err(Error::invalid("text height exceeds target extent"));
            }
            let rects = text_rects(text, *height)?;
            ComplexField::new(rasterize(&rects, h, w, pitch), pitch)
        }
        TargetKind::ImageFile { path } => {
            let img = image::open(path)?.into_luma16();
            let (iw, ih) = img.dimensions();
            let raw = Array2::from_shape_fn((ih as usize, iw as usize), |(r, c)| {
                Complex64::new(img.get_pixel(c as u32, r as u32).0[0] as f64 / 65535.0, 0.0)
            });
            let native = ComplexField::new(raw, spec.extent.0 / iw as f64)?;
            let resampled = crate::field::resample_bicubic_to(&native, h, w)?;
            let data = resampled.data().mapv(|v| Complex64::new(v.re.clamp(0.0, 1.0), 0.0));
            ComplexField::new(data, pitch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_formula_matches_known_element() {
        // Group 3 element 4: 11.31 lp/mm, 44.2 um bars.
        let f = bar_frequency_lp_mm(3, 4);
        assert!((f - 11.3137).abs() < 1e-3, "{f}");
        assert!((bar_width_m(3, 4) - 44.2e-6).abs() < 0.1e-6);
    }

    #[test]
    fn generated_bar_period_matches_formula() {
        // Oracle: element (g, e) has bar period 1 / 2^(g+(e-1)/6) mm,
        // measured off the rasterized grid via rising-edge spacing.
        let pitch = 5e-6;
        for (g, e) in [(2, 1), (2, 4), (3, 2)] {
            let spec = TargetSpec {
                kind: TargetKind::UsafBars { groups: vec![g], elements: vec![e] },
                extent: (4e-3, 3e-3),
            };
            let field = make_target(&spec, pitch).unwrap();
            let layout = UsafLayout::from_spec(&spec).unwrap();
            let el = layout.element(g, e).unwrap();
            let (cy, cx) = field.center();
            let row = (cy as f64 + el.vertical_center.1 / pitch).round() as usize;
            // Scan only the vertical triplet's span; the horizontal triplet
            // sits further right on the same rows.
            let c0 = (cx as f64 + (el.vertical_center.0 - 3.0 * el.bar_width) / pitch) as usize;
            let c1 = (cx as f64 + (el.vertical_center.0 + 3.0 * el.bar_width) / pitch) as usize;
            let profile: Vec<f64> =
                (c0..=c1).map(|c| field.data()[(row, c)].re).collect();
            let mut edges = Vec::new();
            for c in 1..profile.len() {
                if profile[c] > 0.5 && profile[c - 1] <= 0.5 {
                    edges.push(c as f64 * pitch);
                }
            }
            assert_eq!(edges.len(), 3, "expected 3 rising edges for ({g},{e})");
            let period = (edges[2] - edges[0]) / 2.0;
            let expected = 1e-3 / bar_frequency_lp_mm(g, e);
            assert!(
                (period - expected).abs() <= pitch,
                "period {period} vs {expected} for ({g},{e})"
            );
            let _ = cx;
        }
    }

    #[test]
    fn chart_is_binary() {
        let spec = TargetSpec {
            kind: TargetKind::UsafBars { groups: vec![2, 3], elements: vec![1, 4, 6] },
            extent: (5e-3, 4e-3),
        };
        let field = make_target(&spec, 10e-6).unwrap();
        for v in field.data().iter() {
            assert!(v.im == 0.0 && (v.re == 0.0 || v.re == 1.0));
        }
        assert!(field.data().iter().any(|v| v.re == 1.0));
    }

    #[test]
    fn unresolvable_bar_is_rejected() {
        let spec = TargetSpec {
            kind: TargetKind::UsafBars { groups: vec![6], elements: vec![6] },
            extent: (2e-3, 2e-3),
        };
        // Group 6 element 6 bars are ~4.4 um wide; 10 um pitch cannot hold them.
        assert!(make_target(&spec, 10e-6).is_err());
    }

    #[test]
    fn empty_text_is_all_zeros() {
        let spec = TargetSpec {
            kind: TargetKind::TextMask { text: String::new(), height: 1e-3 },
            extent: (3e-3, 2e-3),
        };
        let field = make_target(&spec, 10e-6).unwrap();
        assert!(field.data().iter().all(|v| *v == Complex64::ZERO));
    }

    #[test]
    fn text_mask_renders_requested_height() {
        let spec = TargetSpec {
            kind: TargetKind::TextMask { text: "OSC".into(), height: 2.1e-3 },
            extent: (6e-3, 4e-3),
        };
        let field = make_target(&spec, 10e-6).unwrap();
        let on_rows: Vec<usize> = (0..field.height())
            .filter(|&r| (0..field.width()).any(|c| field.data()[(r, c)].re > 0.5))
            .collect();
        let span = (on_rows.last().unwrap() - on_rows.first().unwrap() + 1) as f64 * 10e-6;
        assert!((span - 2.1e-3).abs() < 0.1e-3, "glyph span {span}");
    }

    #[test]
    fn layout_rejects_oversize_chart() {
        let spec = TargetSpec {
            kind: TargetKind::UsafBars { groups: vec![0], elements: vec![1] },
            extent: (1e-3, 1e-3),
        };
        // Group 0 element 1 bars are 500 um wide; the block alone is 5.5 mm.
        assert!(UsafLayout::from_spec(&spec).is_err());
    }

    #[test]
    fn layout_orders_elements_by_frequency() {
        let spec = TargetSpec {
            kind: TargetKind::UsafBars { groups: vec![3, 2], elements: vec![4, 1] },
            extent: (6e-3, 5e-3),
        };
        let layout = UsafLayout::from_spec(&spec).unwrap();
        let freqs: Vec<f64> =
            layout.by_frequency().iter().map(|e| e.frequency_lp_mm).collect();
        assert!(freqs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(layout.elements().len(), 4);
    }
}
