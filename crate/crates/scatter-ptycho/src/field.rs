//! Complex field and intensity-image containers with sampling-grid
//! bookkeeping, bicubic resampling and elementwise utilities.
//!
//! Grid convention: sample `[row, col]` sits at physical coordinate
//! `((col - w/2) * pitch, (row - h/2) * pitch)`, i.e. the optical axis is
//! the sample at index `(h/2, w/2)` (integer division). For even sizes this
//! is the DFT zero-frequency bin convention, which keeps propagation and
//! windowing registered with each other.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A 2-D complex-valued sample grid with physical pitch (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    data: Array2<Complex64>,
    pitch: f64,
}

/// A 2-D non-negative real grid (photons or normalized irradiance) with
/// physical pitch (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage {
    data: Array2<f64>,
    pitch: f64,
}

fn check_pitch(pitch: f64) -> Result<()> {
    if !(pitch.is_finite() && pitch > 0.0) {
        return Err(Error::invalid(format!("pitch must be finite and > 0, got {pitch}")));
    }
    Ok(())
}

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::invalid(format!("grid must be at least 1x1, got {height}x{width}")));
    }
    Ok(())
}

impl ComplexField {
    /// Wraps an array of complex amplitudes sampled at `pitch` meters.
    pub fn new(data: Array2<Complex64>, pitch: f64) -> Result<Self> {
        check_dims(data.nrows(), data.ncols())?;
        check_pitch(pitch)?;
        Ok(Self { data, pitch })
    }

    /// All-zeros field.
    pub fn zeros(height: usize, width: usize, pitch: f64) -> Result<Self> {
        check_dims(height, width)?;
        check_pitch(pitch)?;
        Ok(Self { data: Array2::zeros((height, width)), pitch })
    }

    /// Builds a field by evaluating `f(x, y)` (meters, centered on the
    /// optical axis) at every sample.
    pub fn from_physical_fn(
        height: usize,
        width: usize,
        pitch: f64,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        check_dims(height, width)?;
        check_pitch(pitch)?;
        let (cy, cx) = (height / 2, width / 2);
        let data = Array2::from_shape_fn((height, width), |(r, c)| {
            let x = (c as f64 - cx as f64) * pitch;
            let y = (r as f64 - cy as f64) * pitch;
            f(x, y)
        });
        Ok(Self { data, pitch })
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn height(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }

    /// Sample index of the optical axis, `(row, col)`.
    pub fn center(&self) -> (usize, usize) {
        (self.height() / 2, self.width() / 2)
    }

    /// Discrete Parseval-compatible energy `sum |f|^2 * pitch^2`.
    ///
    /// The reduction runs in row-major order on a single thread, so the
    /// result is deterministic for fixed input.
    pub fn energy(&self) -> f64 {
        let mut acc = 0.0;
        for v in self.data.iter() {
            acc += v.norm_sqr();
        }
        acc * self.pitch * self.pitch
    }

    /// Elementwise modulus as a non-negative real image.
    pub fn modulus(&self) -> RealImage {
        RealImage { data: self.data.mapv(|v| v.norm()), pitch: self.pitch }
    }

    /// Elementwise squared modulus (irradiance).
    pub fn intensity(&self) -> RealImage {
        RealImage { data: self.data.mapv(|v| v.norm_sqr()), pitch: self.pitch }
    }

    /// Returns a copy zero-padded (or center-cropped) to `height x width`,
    /// keeping the optical-axis sample on the optical axis.
    pub fn resized(&self, height: usize, width: usize) -> Result<Self> {
        check_dims(height, width)?;
        let mut out = Array2::zeros((height, width));
        let (h, w) = (self.height(), self.width());
        // Offsets aligning input center (h/2, w/2) with output center.
        let oy = height as isize / 2 - h as isize / 2;
        let ox = width as isize / 2 - w as isize / 2;
        for r in 0..h {
            let tr = r as isize + oy;
            if tr < 0 || tr >= height as isize {
                continue;
            }
            for c in 0..w {
                let tc = c as isize + ox;
                if tc < 0 || tc >= width as isize {
                    continue;
                }
                out[(tr as usize, tc as usize)] = self.data[(r, c)];
            }
        }
        Ok(Self { data: out, pitch: self.pitch })
    }

    /// True if any sample is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite())
    }
}

impl RealImage {
    /// Wraps non-negative data sampled at `pitch` meters.
    pub fn new(data: Array2<f64>, pitch: f64) -> Result<Self> {
        check_dims(data.nrows(), data.ncols())?;
        check_pitch(pitch)?;
        if data.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("real image entries must be finite and >= 0"));
        }
        Ok(Self { data, pitch })
    }

    pub fn zeros(height: usize, width: usize, pitch: f64) -> Result<Self> {
        check_dims(height, width)?;
        check_pitch(pitch)?;
        Ok(Self { data: Array2::zeros((height, width)), pitch })
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn height(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }

    pub fn center(&self) -> (usize, usize) {
        (self.height() / 2, self.width() / 2)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Interprets the values as complex amplitudes with zero phase.
    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            data: self.data.mapv(|v| Complex64::new(v, 0.0)),
            pitch: self.pitch,
        }
    }

    /// Elementwise square root (amplitude from intensity).
    pub fn sqrt(&self) -> RealImage {
        RealImage { data: self.data.mapv(f64::sqrt), pitch: self.pitch }
    }

    /// Center-crop to `size x size`.
    pub fn center_crop(&self, size: usize) -> Result<RealImage> {
        if size == 0 || size > self.height() || size > self.width() {
            return Err(Error::invalid(format!(
                "crop {size} exceeds image {}x{}",
                self.height(),
                self.width()
            )));
        }
        let (cy, cx) = self.center();
        let y0 = cy - size / 2;
        let x0 = cx - size / 2;
        let data = self.data.slice(ndarray::s![y0..y0 + size, x0..x0 + size]).to_owned();
        Ok(RealImage { data, pitch: self.pitch })
    }

    /// Returns a copy with a different recorded pitch (no resampling).
    pub fn with_pitch(&self, pitch: f64) -> Result<RealImage> {
        check_pitch(pitch)?;
        Ok(RealImage { data: self.data.clone(), pitch })
    }

    /// Zero-pad or center-crop to `height x width`, preserving the center.
    pub fn resized(&self, height: usize, width: usize) -> Result<RealImage> {
        let c = self.to_complex().resized(height, width)?;
        Ok(RealImage { data: c.data.mapv(|v| v.re), pitch: self.pitch })
    }
}

/// The paper's three-case rectangle function: 1 inside, 1/2 exactly on the
/// boundary `|x| = 1/2`, 0 outside.
pub fn rect(x: f64) -> f64 {
    let a = x.abs();
    if a < 0.5 {
        1.0
    } else if a == 0.5 {
        0.5
    } else {
        0.0
    }
}

/// Multiplies sample `[m, n]` by `rect(m/a) * rect(n/b)` with `m, n`
/// measured from the grid center; `a` spans the width (x) axis and `b` the
/// height (y) axis. Everything outside the centered `a x b` rectangle
/// becomes exactly zero; boundary samples (hit only when `a` or `b` is
/// even) are halved.
pub fn rect_window(field: &ComplexField, a: usize, b: usize) -> Result<ComplexField> {
    if a == 0 || b == 0 {
        return Err(Error::invalid("support dimensions must be positive"));
    }
    if a > field.width() || b > field.height() {
        return Err(Error::invalid(format!(
            "support {a}x{b} exceeds grid {}x{}",
            field.width(),
            field.height()
        )));
    }
    let (cy, cx) = field.center();
    let mut out = field.clone();
    for ((r, c), v) in out.data.indexed_iter_mut() {
        let wx = rect((c as f64 - cx as f64) / a as f64);
        let wy = rect((r as f64 - cy as f64) / b as f64);
        let w = wx * wy;
        *v = if w == 0.0 { Complex64::ZERO } else { *v * w };
    }
    Ok(out)
}

// Catmull-Rom weights (cubic convolution, a = -0.5) for fractional offset t
// from the second of four taps.
fn catmull_rom_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    ]
}

// Separable Catmull-Rom resampling of one complex plane onto an output grid
// whose sample k maps to input coordinate (k - out_center) / ratio +
// in_center on each axis. Borders are handled by clamping tap indices.
fn bicubic_plane(
    input: &Array2<Complex64>,
    out_h: usize,
    out_w: usize,
    ratio_y: f64,
    ratio_x: f64,
) -> Array2<Complex64> {
    let (in_h, in_w) = input.dim();
    let (icy, icx) = (in_h / 2, in_w / 2);
    let (ocy, ocx) = (out_h / 2, out_w / 2);

    let clamp = |i: isize, n: usize| -> usize { i.clamp(0, n as isize - 1) as usize };

    // Precompute per-column tap indices and weights.
    let mut col_taps = Vec::with_capacity(out_w);
    for k in 0..out_w {
        let x = (k as f64 - ocx as f64) / ratio_x + icx as f64;
        let base = x.floor();
        let t = x - base;
        let b = base as isize;
        col_taps.push((
            [clamp(b - 1, in_w), clamp(b, in_w), clamp(b + 1, in_w), clamp(b + 2, in_w)],
            catmull_rom_weights(t),
        ));
    }

    let flat = input.as_slice().expect("row-major layout");
    let mut out = Array2::zeros((out_h, out_w));
    for r in 0..out_h {
        let y = (r as f64 - ocy as f64) / ratio_y + icy as f64;
        let base = y.floor();
        let t = y - base;
        let b = base as isize;
        let lines = [
            &flat[clamp(b - 1, in_h) * in_w..][..in_w],
            &flat[clamp(b, in_h) * in_w..][..in_w],
            &flat[clamp(b + 1, in_h) * in_w..][..in_w],
            &flat[clamp(b + 2, in_h) * in_w..][..in_w],
        ];
        let wy = catmull_rom_weights(t);
        let out_row = &mut out.as_slice_mut().expect("row-major layout")[r * out_w..][..out_w];
        for (k, (taps, wx)) in col_taps.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (ri, line) in lines.iter().enumerate() {
                let horiz = wx[0] * line[taps[0]]
                    + wx[1] * line[taps[1]]
                    + wx[2] * line[taps[2]]
                    + wx[3] * line[taps[3]];
                acc += wy[ri] * horiz;
            }
            out_row[k] = acc;
        }
    }
    out
}

/// Bicubic (Catmull-Rom) resampling by `ratio` on both axes: output
/// dimensions are `round(ratio * n)`, output pitch is `pitch / ratio`, so
/// the physical extent is preserved to within one output pitch. Real and
/// imaginary parts are interpolated independently.
pub fn resample_bicubic(field: &ComplexField, ratio: f64) -> Result<ComplexField> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::invalid(format!("resample ratio must be > 0, got {ratio}")));
    }
    let out_h = (ratio * field.height() as f64).round() as usize;
    let out_w = (ratio * field.width() as f64).round() as usize;
    resample_bicubic_to(field, out_h, out_w)
}

/// Bicubic resampling onto an explicit output grid. The per-axis ratios are
/// `out / in`; the output pitch is scaled accordingly (isotropy is required
/// to one part in 1e-9 so a single pitch remains meaningful).
pub fn resample_bicubic_to(field: &ComplexField, out_h: usize, out_w: usize) -> Result<ComplexField> {
    if out_h < 4 || out_w < 4 {
        return Err(Error::invalid(format!(
            "resampled grid {out_h}x{out_w} is degenerate (must be at least 4x4)"
        )));
    }
    // Per-axis ratios may differ by the rounding of round(ratio * n) on
    // non-square grids; the recorded pitch follows the x axis.
    let ry = out_h as f64 / field.height() as f64;
    let rx = out_w as f64 / field.width() as f64;
    if ry == 1.0 && rx == 1.0 {
        return Ok(field.clone());
    }
    let data = bicubic_plane(field.data(), out_h, out_w, ry, rx);
    ComplexField::new(data, field.pitch / rx)
}

/// Bicubic resampling of a non-negative image; interpolation overshoot is
/// clamped at zero to keep the non-negativity invariant.
pub fn resample_bicubic_real(image: &RealImage, out_h: usize, out_w: usize) -> Result<RealImage> {
    let field = image.to_complex();
    let resampled = resample_bicubic_to(&field, out_h, out_w)?;
    let data = resampled.data().mapv(|v| v.re.max(0.0));
    RealImage::new(data, resampled.pitch())
}
