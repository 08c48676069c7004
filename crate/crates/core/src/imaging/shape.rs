//! Zernike moment magnitudes over the disk inscribed in the image.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::ImageBuffer;
use crate::error::{Error, Result};

/// Order `n` and repetition `m` of a Zernike moment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ZernikeOrder {
    pub n: u32,
    pub m: u32,
}

impl ZernikeOrder {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m > n || !(n - m).is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "invalid Zernike order (n={n}, m={m}): need m <= n and n - m even"
            )));
        }
        Ok(Self { n, m })
    }

    fn radial_coefficients(&self) -> Vec<(f64, i32)> {
        let (n, m) = (self.n as u64, self.m as u64);
        (0..=(n - m) / 2)
            .map(|s| {
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                let c = sign * factorial(n - s)
                    / (factorial(s) * factorial((n + m) / 2 - s) * factorial((n - m) / 2 - s));
                (c, (n - 2 * s) as i32)
            })
            .collect()
    }
}

fn factorial(k: u64) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Complex moment `Z(n, m)` of a grayscale image, intensities scaled to [0, 1].
///
/// Pixel centres are mapped into `[-1, 1]^2`; only centres with radius <= 1
/// contribute. Each term is weighted by the pixel area so the sum approximates
/// `(n + 1) / pi * integral f(r, theta) conj(V_nm) dA`.
pub fn zernike_moment(gray: &ImageBuffer, order: ZernikeOrder) -> Complex64 {
    let (w, h) = (gray.width(), gray.height());
    if w == 0 || h == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let coeffs = order.radial_coefficients();
    let area = 4.0 / (w as f64 * h as f64);
    let m = order.m as i32;
    let mut acc = Complex64::new(0.0, 0.0);
    for py in 0..h {
        let y = (2.0 * py as f64 + 1.0 - h as f64) / h as f64;
        for px in 0..w {
            let x = (2.0 * px as f64 + 1.0 - w as f64) / w as f64;
            let r2 = x * x + y * y;
            if r2 > 1.0 {
                continue;
            }
            let f = f64::from(gray.get(px, py, 0)) / 255.0;
            if f == 0.0 {
                continue;
            }
            let r = r2.sqrt();
            let radial: f64 = coeffs.iter().map(|&(c, p)| c * r.powi(p)).sum();
            // conj(e^{i m theta}) = ((x - iy) / r)^m
            let angular = if m == 0 {
                Complex64::new(1.0, 0.0)
            } else if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                (Complex64::new(x, -y) / r).powi(m)
            };
            acc += angular * (f * radial);
        }
    }
    acc * ((order.n as f64 + 1.0) / PI * area)
}

/// `|Z|` for every order on the image as-is, then on the image turned 90 degrees.
pub fn shape_features(gray: &ImageBuffer, orders: &[ZernikeOrder]) -> Vec<f64> {
    let rotated = gray.rotate90();
    [gray, &rotated]
        .into_iter()
        .flat_map(|img| orders.iter().map(move |&o| zernike_moment(img, o).norm()))
        .collect()
}
