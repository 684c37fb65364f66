//! Internal 2-D FFT plumbing on `Array2<Complex64>`.
//!
//! Forward transforms are unnormalized; inverse transforms carry the full
//! `1/(rows*cols)` factor, matching the usual DFT / DFT^-1 pair. Plans are
//! cached per length behind a process-wide planner.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan_forward(len: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft_forward(len)
}

fn plan_inverse(len: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft_inverse(len)
}

fn transform_rows(data: &mut Array2<Complex64>, fft: &Arc<dyn Fft<f64>>) {
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    for mut row in data.rows_mut() {
        let slice = row.as_slice_mut().expect("row-major layout");
        // FFT of an all-zero row is zero; skipping keeps exactness and saves
        // most of the first pass when the input is support-windowed.
        if slice.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            continue;
        }
        fft.process_with_scratch(slice, &mut scratch);
    }
}

// Cache-blocked out-of-place transpose; a naive strided transpose thrashes
// the TLB on multi-hundred-megabyte grids.
fn transpose_into(src: &Array2<Complex64>, dst: &mut Array2<Complex64>) {
    const TILE: usize = 64;
    let (h, w) = src.dim();
    debug_assert_eq!(dst.dim(), (w, h));
    let s = src.as_slice().expect("row-major layout");
    let d = dst.as_slice_mut().expect("row-major layout");
    let mut r0 = 0;
    while r0 < h {
        let r1 = (r0 + TILE).min(h);
        let mut c0 = 0;
        while c0 < w {
            let c1 = (c0 + TILE).min(w);
            for r in r0..r1 {
                for c in c0..c1 {
                    d[c * h + r] = s[r * w + c];
                }
            }
            c0 = c1;
        }
        r0 = r1;
    }
}

fn fft2_pass(data: &mut Array2<Complex64>, forward: bool) {
    let (h, w) = data.dim();
    let row_fft = if forward { plan_forward(w) } else { plan_inverse(w) };
    transform_rows(data, &row_fft);
    let mut t = Array2::zeros((w, h));
    transpose_into(data, &mut t);
    let col_fft = if forward { plan_forward(h) } else { plan_inverse(h) };
    transform_rows(&mut t, &col_fft);
    transpose_into(&t, data);
}

/// In-place unnormalized 2-D DFT.
pub fn fft2(data: &mut Array2<Complex64>) {
    fft2_pass(data, true);
}

/// In-place 2-D inverse DFT with `1/(rows*cols)` normalization.
pub fn ifft2(data: &mut Array2<Complex64>) {
    fft2_pass(data, false);
    let scale = 1.0 / (data.nrows() as f64 * data.ncols() as f64);
    data.mapv_inplace(|v| v * scale);
}

/// The wrapped signed frequency index for bin `i` of an `n`-point DFT
/// (`0..n/2` positive, then negative; `n/2` maps to the Nyquist bin `n/2`).
pub fn signed_index(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}
