use ndarray::Array2;
use num_complex::Complex64;
use scatter_ptycho::fft;
use scatter_ptycho::field::{resample_bicubic_to, ComplexField};
use scatter_ptycho::propagation::transfer_function;
use std::time::Instant;

fn main() {
    let n = 4096;
    // Sparse (padded) vs dense arrays.
    let mut sparse: Array2<Complex64> = Array2::zeros((n, n));
    for r in 1800..2200 {
        for c in 1800..2300 {
            sparse[(r, c)] = Complex64::new(0.5, 0.1);
        }
    }
    let dense = Array2::from_elem((n, n), Complex64::new(0.3, -0.2));

    let t = Instant::now();
    let mut a = sparse.clone();
    println!("clone 4096^2: {:.2?}", t.elapsed());
    let t = Instant::now();
    fft::fft2(&mut a);
    println!("fft2 sparse first call (incl planning): {:.2?}", t.elapsed());
    let t = Instant::now();
    let mut b = dense.clone();
    fft::fft2(&mut b);
    println!("fft2 dense: {:.2?}", t.elapsed());
    let t = Instant::now();
    fft::ifft2(&mut b);
    println!("ifft2 dense: {:.2?}", t.elapsed());
    let t = Instant::now();
    let h = transfer_function(n, 10e-6, 532e-9, 0.6635);
    println!("kernel build 4096: {:.2?}", t.elapsed());
    let t = Instant::now();
    ndarray::Zip::from(&mut b).and(&h).for_each(|d, k| *d *= k);
    println!("kernel multiply: {:.2?}", t.elapsed());

    let big = ComplexField::new(b, 10e-6).unwrap();
    let t = Instant::now();
    let small = resample_bicubic_to(&big, 1024, 1024).unwrap();
    println!("bicubic down 4096->1024: {:.2?}", t.elapsed());
    let t = Instant::now();
    let _up = resample_bicubic_to(&small, 4096, 4096).unwrap();
    println!("bicubic up 1024->4096: {:.2?}", t.elapsed());
}
