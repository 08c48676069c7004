//! Steerable first-order Gaussian derivative texture statistics.
//!
//! The image is filtered with the two separable basis kernels `Gx` and `Gy`;
//! the response at orientation `theta` is `cos(theta) * Gx + sin(theta) * Gy`.
//! For each orientation we emit the mean and sample standard deviation of the
//! absolute response.

use super::ImageBuffer;

/// Orientations in degrees, in output order.
pub const ORIENTATIONS_DEG: [f64; 4] = [0.0, 45.0, -45.0, 90.0];

#[derive(Clone, Debug)]
pub struct SteerableFilter {
    smooth: Vec<f64>,
    deriv: Vec<f64>,
}

impl SteerableFilter {
    /// `size` is the (odd) kernel width in pixels.
    pub fn new(sigma: f64, size: usize) -> Self {
        assert!(sigma > 0.0, "sigma must be positive");
        assert!(size % 2 == 1, "kernel size must be odd");
        let radius = (size / 2) as isize;
        let taps: Vec<f64> = (-radius..=radius).map(|t| t as f64).collect();
        let gauss: Vec<f64> = taps
            .iter()
            .map(|t| (-t * t / (2.0 * sigma * sigma)).exp())
            .collect();
        let norm: f64 = gauss.iter().sum();
        let smooth: Vec<f64> = gauss.iter().map(|g| g / norm).collect();
        let deriv = taps
            .iter()
            .zip(&smooth)
            .map(|(t, g)| -t / (sigma * sigma) * g)
            .collect();
        Self { smooth, deriv }
    }

    pub fn smooth_kernel(&self) -> &[f64] {
        &self.smooth
    }

    pub fn derivative_kernel(&self) -> &[f64] {
        &self.deriv
    }

    /// Basis responses `(Gx * I, Gy * I)`, row-major.
    pub fn basis_responses(&self, gray: &ImageBuffer) -> (Vec<f64>, Vec<f64>) {
        let (w, h) = (gray.width(), gray.height());
        let src: Vec<f64> = gray.pixels().iter().map(|&p| f64::from(p)).collect();
        let gx = filter_cols(&filter_rows(&src, w, h, &self.deriv), w, h, &self.smooth);
        let gy = filter_cols(&filter_rows(&src, w, h, &self.smooth), w, h, &self.deriv);
        (gx, gy)
    }

    pub fn features(&self, gray: &ImageBuffer) -> Vec<f64> {
        let (gx, gy) = self.basis_responses(gray);
        let mut out = Vec::with_capacity(2 * ORIENTATIONS_DEG.len());
        for deg in ORIENTATIONS_DEG {
            let (s, c) = steer_coefficients(deg);
            let mags: Vec<f64> = gx
                .iter()
                .zip(&gy)
                .map(|(a, b)| (c * a + s * b).abs())
                .collect();
            let (mean, std) = mean_std(&mags);
            out.push(mean);
            out.push(std);
        }
        out
    }
}

/// `(sin, cos)` with exact values at multiples of 45 degrees.
fn steer_coefficients(deg: f64) -> (f64, f64) {
    use std::f64::consts::FRAC_1_SQRT_2;
    if deg == 0.0 {
        (0.0, 1.0)
    } else if deg == 90.0 {
        (1.0, 0.0)
    } else if deg == 45.0 {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else if deg == -45.0 {
        (-FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else {
        deg.to_radians().sin_cos()
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Symmetric border reflection (edge sample repeated).
#[inline]
pub(crate) fn reflect(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

/// Correlate each row with `kernel`.
fn filter_rows(src: &[f64], w: usize, h: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * row[reflect(x as isize + k as isize - r, w)];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// Correlate each column with `kernel`.
fn filter_cols(src: &[f64], w: usize, h: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (k, &kv) in kernel.iter().enumerate() {
            let sy = reflect(y as isize + k as isize - r, h);
            let src_row = &src[sy * w..(sy + 1) * w];
            let dst = &mut out[y * w..(y + 1) * w];
            for (d, s) in dst.iter_mut().zip(src_row) {
                *d += kv * s;
            }
        }
    }
    out
}
