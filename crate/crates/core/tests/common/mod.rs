//! Independent reference computations shared by the integration tests.
//! None of these call into the code paths they are used to check.
#![allow(dead_code)]

use std::f64::consts::PI;

use symlogo::ImageBuffer;

/// Direct 7x7 (or any odd size) 2-D correlation of a gray image with the
/// outer-product Gaussian-derivative kernels, symmetric border reflection.
/// Returns (gx, gy) row-major.
pub fn direct_gradient(img: &ImageBuffer, sigma: f64, size: usize) -> (Vec<f64>, Vec<f64>) {
    let r = (size / 2) as i64;
    let g: Vec<f64> = (-r..=r)
        .map(|t| (-(t * t) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = g.iter().sum();
    let g: Vec<f64> = g.iter().map(|v| v / s).collect();
    let dg: Vec<f64> = (-r..=r)
        .zip(&g)
        .map(|(t, v)| -(t as f64) / (sigma * sigma) * v)
        .collect();
    let (w, h) = (img.width() as i64, img.height() as i64);
    let refl = |mut i: i64, n: i64| {
        while i < 0 || i >= n {
            i = if i < 0 { -i - 1 } else { 2 * n - i - 1 };
        }
        i as usize
    };
    let mut gx = vec![0.0; (w * h) as usize];
    let mut gy = vec![0.0; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let (mut ax, mut ay) = (0.0, 0.0);
            for ky in -r..=r {
                for kx in -r..=r {
                    let p = f64::from(img.get(refl(x + kx, w), refl(y + ky, h), 0));
                    ax += dg[(kx + r) as usize] * g[(ky + r) as usize] * p;
                    ay += g[(kx + r) as usize] * dg[(ky + r) as usize] * p;
                }
            }
            gx[(y * w + x) as usize] = ax;
            gy[(y * w + x) as usize] = ay;
        }
    }
    (gx, gy)
}

/// Mean and sample std of |cos t * gx + sin t * gy| for t in 0, 45, -45, 90.
pub fn texture_oracle(img: &ImageBuffer) -> Vec<f64> {
    let (gx, gy) = direct_gradient(img, 1.0, 7);
    let mut out = Vec::new();
    for deg in [0.0f64, 45.0, -45.0, 90.0] {
        let (s, c) = deg.to_radians().sin_cos();
        let v: Vec<f64> = gx
            .iter()
            .zip(&gy)
            .map(|(a, b)| (c * a + s * b).abs())
            .collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        out.push(mean);
        out.push(var.sqrt());
    }
    out
}

/// Closed-form radial polynomial for the orders the tests use.
fn radial(n: u32, m: u32, r: f64) -> f64 {
    match (n, m) {
        (0, 0) => 1.0,
        (1, 1) => r,
        (2, 0) => 2.0 * r * r - 1.0,
        (2, 2) => r * r,
        (3, 1) => 3.0 * r.powi(3) - 2.0 * r,
        (4, 0) => 6.0 * r.powi(4) - 6.0 * r * r + 1.0,
        _ => panic!("oracle has no closed form for ({n}, {m})"),
    }
}

/// Brute-force Zernike moment in polar form, returned as (re, im).
pub fn zernike_oracle(img: &ImageBuffer, n: u32, m: u32) -> (f64, f64) {
    let (w, h) = (img.width() as f64, img.height() as f64);
    let (mut re, mut im) = (0.0, 0.0);
    for py in 0..img.height() {
        for px in 0..img.width() {
            let x = (2.0 * px as f64 + 1.0 - w) / w;
            let y = (2.0 * py as f64 + 1.0 - h) / h;
            let rho = x.hypot(y);
            if rho > 1.0 {
                continue;
            }
            let theta = y.atan2(x);
            let f = f64::from(img.get(px, py, 0)) / 255.0;
            let rad = radial(n, m, rho);
            re += f * rad * (m as f64 * theta).cos();
            im -= f * rad * (m as f64 * theta).sin();
        }
    }
    let scale = (n as f64 + 1.0) / PI * 4.0 / (w * h);
    (re * scale, im * scale)
}

/// Upper bound on |Z(n, m)| of a uniform image on a `w` x `w` grid: pixels
/// straddling the unit circle contribute at most their area times max|V|,
/// plus the midpoint-rule interior error for a quadratic integrand.
pub fn uniform_nullity_bound(w: usize, n: u32, m: u32) -> f64 {
    let h = 2.0 / w as f64;
    let half_diag = h * std::f64::consts::SQRT_2 / 2.0;
    let mut band = 0usize;
    for py in 0..w {
        for px in 0..w {
            let x = (2.0 * px as f64 + 1.0 - w as f64) / w as f64;
            let y = (2.0 * py as f64 + 1.0 - w as f64) / w as f64;
            if (x.hypot(y) - 1.0).abs() <= half_diag {
                band += 1;
            }
        }
    }
    let max_v = (0..=100)
        .map(|i| radial(n, m, i as f64 / 100.0).abs())
        .fold(0.0, f64::max);
    // |laplacian| of the real and imaginary parts of V is at most 8 for n = 2
    let interior = PI * 8.0 * h * h / 24.0;
    (n as f64 + 1.0) / PI * (band as f64 * h * h * max_v + interior)
}

/// Minimal SSE over every partition of `points` into exactly `k` non-empty groups.
pub fn exhaustive_min_sse(points: &[Vec<f64>], k: usize) -> f64 {
    fn rec(
        i: usize,
        labels: &mut Vec<usize>,
        used: usize,
        k: usize,
        pts: &[Vec<f64>],
        best: &mut f64,
    ) {
        let n = pts.len();
        if n - i < k - used {
            return;
        }
        if i == n {
            *best = best.min(partition_sse(pts, labels, k));
            return;
        }
        for l in 0..=used.min(k - 1) {
            labels.push(l);
            rec(i + 1, labels, used.max(l + 1), k, pts, best);
            labels.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(0, &mut Vec::new(), 0, k, points, &mut best);
    best
}

pub fn partition_sse(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let d = points[0].len();
    let mut total = 0.0;
    for c in 0..k {
        let members: Vec<&Vec<f64>> = points
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == c)
            .map(|(p, _)| p)
            .collect();
        if members.is_empty() {
            continue;
        }
        for j in 0..d {
            let mean = members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64;
            total += members.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>();
        }
    }
    total
}

/// Per-feature (mean, sample std) by the textbook two-pass formula.
pub fn brute_mean_std(samples: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let n = samples.len();
    (0..samples[0].len())
        .map(|j| {
            let mut sum = 0.0;
            for s in samples {
                sum += s[j];
            }
            let mean = sum / n as f64;
            let mut ss = 0.0;
            for s in samples {
                ss += (s[j] - mean) * (s[j] - mean);
            }
            let std = if n > 1 {
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            (mean, std)
        })
        .collect()
}

/// Containment count by an explicit loop over features.
pub fn naive_count(sample: &[f64], lo: &[f64], hi: &[f64]) -> usize {
    let mut count = 0;
    for l in 0..sample.len() {
        if sample[l] >= lo[l] && sample[l] <= hi[l] {
            count += 1;
        }
    }
    count
}

/// Gray image with a pseudo-random pattern, deterministic in `seed`.
pub fn noise_gray(w: usize, h: usize, seed: u64) -> ImageBuffer {
    ImageBuffer::from_fn_gray(w, h, |x, y| {
        let mut v = seed ^ ((x as u64) << 32) ^ (y as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        v ^= v >> 33;
        v = v.wrapping_mul(0xff51_afd7_ed55_8ccd);
        v ^= v >> 33;
        (v & 0xff) as u8
    })
}

/// `n` points in `d` dimensions, coordinates uniform in [0, 10) on a 0.1 grid.
pub fn random_points(rng: &mut impl rand::Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| f64::from(rng.random_range(0u32..100)) / 10.0)
                .collect()
        })
        .collect()
}

/// Random reference matrix with `k` representatives per class over `d`
/// features; bounds on a coarse grid so that samples often hit them exactly.
pub fn random_reference(
    rng: &mut impl rand::Rng,
    d: usize,
    k: usize,
    m: usize,
) -> symlogo::ReferenceMatrix {
    use symlogo::{ClusterRepresentative, Interval};
    let mut reps = Vec::new();
    for class in 0..m {
        for cluster in 0..k {
            let intervals = (0..d)
                .map(|_| {
                    let a = f64::from(rng.random_range(0u32..10)) / 10.0;
                    let b = f64::from(rng.random_range(0u32..10)) / 10.0;
                    Interval::new(a.min(b), a.max(b)).unwrap()
                })
                .collect();
            reps.push(ClusterRepresentative {
                class_label: class,
                cluster_index: cluster,
                support: 1,
                intervals,
            });
        }
    }
    let names = (0..m).map(|c| format!("c{c}")).collect();
    symlogo::ReferenceMatrix::new(reps, names, k).unwrap()
}

/// Builds a one-feature reference where representative `i` accepts the
/// sample 0.0 exactly when `accepts[i]` holds.
pub fn fixture_reference(accepts: &[bool], k: usize) -> symlogo::ReferenceMatrix {
    use symlogo::{ClusterRepresentative, Interval};
    let reps = accepts
        .iter()
        .enumerate()
        .map(|(i, &a)| ClusterRepresentative {
            class_label: i / k,
            cluster_index: i % k,
            support: 1,
            intervals: vec![if a {
                Interval::new(-1.0, 1.0).unwrap()
            } else {
                Interval::new(2.0, 3.0).unwrap()
            }],
        })
        .collect();
    let names = (0..accepts.len() / k).map(|c| format!("c{c}")).collect();
    symlogo::ReferenceMatrix::new(reps, names, k).unwrap()
}
