//! Procedural stand-in corpus: text-like strokes, hatched geometric symbols
//! and compositions of both.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::{CorpusEntry, ImageSource, LabeledCorpus};
use crate::imaging::ImageBuffer;

pub const CLASS_NAMES: [&str; 3] = ["both", "symbol", "text"];
const BOTH: usize = 0;
const SYMBOL: usize = 1;
const TEXT: usize = 2;

struct Canvas {
    w: usize,
    h: usize,
    px: Vec<[u8; 3]>,
}

impl Canvas {
    fn new(w: usize, h: usize, bg: [u8; 3]) -> Self {
        Self {
            w,
            h,
            px: vec![bg; w * h],
        }
    }

    fn shade(&mut self, f: impl Fn(f64, f64) -> Option<[u8; 3]>, bbox: (f64, f64, f64, f64)) {
        let (x0, y0, x1, y1) = bbox;
        let xs = x0.floor().max(0.0) as usize..(x1.ceil().max(0.0) as usize).min(self.w);
        let ys = y0.floor().max(0.0) as usize..(y1.ceil().max(0.0) as usize).min(self.h);
        for y in ys {
            for x in xs.clone() {
                if let Some(c) = f(x as f64 + 0.5, y as f64 + 0.5) {
                    self.px[y * self.w + x] = c;
                }
            }
        }
    }

    fn stroke(&mut self, a: (f64, f64), b: (f64, f64), width: f64, color: [u8; 3]) {
        let r = width / 2.0;
        let bbox = (
            a.0.min(b.0) - r,
            a.1.min(b.1) - r,
            a.0.max(b.0) + r,
            a.1.max(b.1) + r,
        );
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len2 = dx * dx + dy * dy;
        self.shade(
            |x, y| {
                let t = if len2 > 0.0 {
                    (((x - a.0) * dx + (y - a.1) * dy) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (px, py) = (a.0 + t * dx - x, a.1 + t * dy - y);
                (px * px + py * py <= r * r).then_some(color)
            },
            bbox,
        );
    }

    fn into_image(self) -> ImageBuffer {
        let (w, px) = (self.w, self.px);
        ImageBuffer::from_fn_rgb(w, self.h, |x, y| px[y * w + x])
    }
}

fn random_color(rng: &mut impl Rng) -> [u8; 3] {
    [rng.random(), rng.random(), rng.random()]
}

/// Mostly near-white, like printed logos; otherwise any color.
fn background(rng: &mut impl Rng) -> [u8; 3] {
    if rng.random_bool(0.7) {
        [
            rng.random_range(225..=255),
            rng.random_range(225..=255),
            rng.random_range(225..=255),
        ]
    } else {
        random_color(rng)
    }
}

fn luminance(c: [u8; 3]) -> f64 {
    0.299 * f64::from(c[0]) + 0.587 * f64::from(c[1]) + 0.114 * f64::from(c[2])
}

/// A random color at least `gap` gray levels away from `bg`.
fn contrasting(rng: &mut impl Rng, bg: [u8; 3], gap: f64) -> [u8; 3] {
    for _ in 0..64 {
        let c = random_color(rng);
        if (luminance(c) - luminance(bg)).abs() >= gap {
            return c;
        }
    }
    if luminance(bg) > 127.0 {
        [0, 0, 0]
    } else {
        [255, 255, 255]
    }
}

fn darken(c: [u8; 3], f: f64) -> [u8; 3] {
    c.map(|v| (f64::from(v) * f).round() as u8)
}

/// Lines of glyph-like stroke clusters inside the box `(x0, y0, x1, y1)`.
fn draw_text(c: &mut Canvas, rng: &mut impl Rng, area: (f64, f64, f64, f64), color: [u8; 3]) {
    let (x0, y0, x1, y1) = area;
    let lines = rng.random_range(1..=2usize);
    let line_h = (y1 - y0) / lines as f64;
    for line in 0..lines {
        let top = y0 + line as f64 * line_h;
        let glyph_h = line_h * rng.random_range(0.55..0.85);
        let glyph_w = glyph_h * rng.random_range(0.45..0.75);
        let gap = glyph_w * rng.random_range(0.15..0.4);
        let pen = (glyph_h * rng.random_range(0.08..0.16)).max(1.5);
        let mut x = x0 + rng.random_range(0.0..gap.max(1.0));
        let baseline = top + (line_h + glyph_h) / 2.0;
        while x + glyph_w <= x1 {
            // anchor points of a small glyph lattice
            let pts: Vec<(f64, f64)> = (0..6)
                .map(|i| {
                    let col = (i % 2) as f64;
                    let row = (i / 2) as f64 / 2.0;
                    (x + col * glyph_w, baseline - row * glyph_h)
                })
                .collect();
            for _ in 0..rng.random_range(2..=4) {
                let a = pts[rng.random_range(0..pts.len())];
                let b = pts[rng.random_range(0..pts.len())];
                c.stroke(a, b, pen, color);
            }
            x += glyph_w + gap;
        }
    }
}

/// A filled circle or regular polygon with a hatch texture.
fn draw_symbol(c: &mut Canvas, rng: &mut impl Rng, center: (f64, f64), radius: f64, fill: [u8; 3]) {
    let sides = if rng.random_bool(0.35) {
        0
    } else {
        rng.random_range(3..=8usize)
    };
    let rot = rng.random_range(0.0..std::f64::consts::TAU);
    let hatch_angle = rng.random_range(0.0..std::f64::consts::PI);
    let period = rng.random_range(4.0..14.0f64);
    let (ha, hb) = hatch_angle.sin_cos();
    let alt = darken(fill, rng.random_range(0.35..0.8));
    let verts: Vec<(f64, f64)> = (0..sides)
        .map(|i| {
            let t = rot + i as f64 * std::f64::consts::TAU / sides as f64;
            (center.0 + radius * t.cos(), center.1 + radius * t.sin())
        })
        .collect();
    let bbox = (
        center.0 - radius,
        center.1 - radius,
        center.0 + radius,
        center.1 + radius,
    );
    c.shade(
        |x, y| {
            let inside = if sides == 0 {
                (x - center.0).powi(2) + (y - center.1).powi(2) <= radius * radius
            } else {
                point_in_polygon(x, y, &verts)
            };
            inside.then(|| {
                let phase = ((x * hb + y * ha) / period).rem_euclid(1.0);
                if phase < 0.5 {
                    fill
                } else {
                    alt
                }
            })
        },
        bbox,
    );
}

fn point_in_polygon(x: f64, y: f64, verts: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let mut j = verts.len() - 1;
    for i in 0..verts.len() {
        let (xi, yi) = verts[i];
        let (xj, yj) = verts[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Draw one logo of `class` (index into [`CLASS_NAMES`]).
pub fn render_logo(class: usize, width: usize, height: usize, rng: &mut impl Rng) -> ImageBuffer {
    let bg = background(rng);
    let mut c = Canvas::new(width, height, bg);
    let (w, h) = (width as f64, height as f64);
    let jitter = |rng: &mut ChaCha8Rng, s: f64| rng.random_range(-s..s);
    let mut local = ChaCha8Rng::seed_from_u64(rng.random());
    match class {
        TEXT => {
            let color = contrasting(&mut local, bg, 60.0);
            let band_h = h * local.random_range(0.25..0.45);
            let top = (h - band_h) / 2.0 + jitter(&mut local, h * 0.12);
            draw_text(
                &mut c,
                &mut local,
                (w * 0.06, top, w * 0.94, top + band_h),
                color,
            );
        }
        SYMBOL => {
            let fill = contrasting(&mut local, bg, 50.0);
            let r = w.min(h) * local.random_range(0.25..0.42);
            let centre = (
                w / 2.0 + jitter(&mut local, w * 0.08),
                h / 2.0 + jitter(&mut local, h * 0.08),
            );
            draw_symbol(&mut c, &mut local, centre, r, fill);
            if local.random_bool(0.3) {
                let fill2 = contrasting(&mut local, bg, 50.0);
                let inner = r * local.random_range(0.3..0.6);
                draw_symbol(&mut c, &mut local, centre, inner, fill2);
            }
        }
        BOTH => {
            let fill = contrasting(&mut local, bg, 50.0);
            let color = contrasting(&mut local, bg, 60.0);
            let r = w.min(h) * local.random_range(0.16..0.26);
            if local.random_bool(0.5) {
                // symbol above text
                let centre = (
                    w / 2.0 + jitter(&mut local, w * 0.1),
                    h * 0.32 + jitter(&mut local, h * 0.05),
                );
                draw_symbol(&mut c, &mut local, centre, r, fill);
                let top = centre.1 + r + h * 0.04;
                draw_text(
                    &mut c,
                    &mut local,
                    (w * 0.08, top, w * 0.92, (top + h * 0.25).min(h * 0.97)),
                    color,
                );
            } else {
                // symbol left of text
                let centre = (
                    w * 0.24 + jitter(&mut local, w * 0.04),
                    h / 2.0 + jitter(&mut local, h * 0.1),
                );
                draw_symbol(&mut c, &mut local, centre, r, fill);
                let left = centre.0 + r + w * 0.04;
                let band_h = h * local.random_range(0.18..0.3);
                draw_text(
                    &mut c,
                    &mut local,
                    (
                        left,
                        centre.1 - band_h / 2.0,
                        w * 0.96,
                        centre.1 + band_h / 2.0,
                    ),
                    color,
                );
            }
        }
        _ => unreachable!("class index out of range"),
    }
    c.into_image()
}

/// `n_per_class` logos per class, fully determined by `seed`.
pub fn generate_synthetic(
    n_per_class: usize,
    seed: u64,
    width: usize,
    height: usize,
) -> LabeledCorpus {
    let mut entries = Vec::with_capacity(3 * n_per_class);
    for (class, name) in CLASS_NAMES.iter().enumerate() {
        for i in 0..n_per_class {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((class * n_per_class + i) as u64);
            entries.push(CorpusEntry {
                source: ImageSource::Memory(render_logo(class, width, height, &mut rng)),
                label: class,
                name: format!("{name}/{name}_{i:04}.png"),
            });
        }
    }
    LabeledCorpus {
        entries,
        class_names: CLASS_NAMES.iter().map(|s| s.to_string()).collect(),
        skipped: 0,
    }
}
