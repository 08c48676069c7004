use super::ImageBuffer;

/// Per-block channel means and block-over-image channel percentages.
///
/// Blocks follow a `cols` x `rows` grid in row-major order. For each block the
/// output holds, per channel, `(mean, percentage)` where the percentage is the
/// block's share of that channel's total intensity. A channel whose total is
/// zero yields percentages of 0.
pub fn color_features(rgb: &ImageBuffer, cols: usize, rows: usize) -> Vec<f64> {
    debug_assert_eq!(rgb.channels(), 3);
    let (w, h) = (rgb.width(), rgb.height());
    let mut sums = vec![[0u64; 3]; cols * rows];
    let mut areas = vec![0u64; cols * rows];
    let mut totals = [0u64; 3];

    for by in 0..rows {
        let (y0, y1) = (by * h / rows, (by + 1) * h / rows);
        for bx in 0..cols {
            let (x0, x1) = (bx * w / cols, (bx + 1) * w / cols);
            let block = by * cols + bx;
            areas[block] = ((x1 - x0) * (y1 - y0)) as u64;
            for y in y0..y1 {
                for x in x0..x1 {
                    for (c, sum) in sums[block].iter_mut().enumerate() {
                        *sum += u64::from(rgb.get(x, y, c));
                    }
                }
            }
        }
    }
    for s in &sums {
        for c in 0..3 {
            totals[c] += s[c];
        }
    }

    let mut out = Vec::with_capacity(cols * rows * 6);
    for (s, &area) in sums.iter().zip(&areas) {
        for c in 0..3 {
            let mean = if area == 0 {
                0.0
            } else {
                s[c] as f64 / area as f64
            };
            let pct = if totals[c] == 0 {
                0.0
            } else {
                100.0 * s[c] as f64 / totals[c] as f64
            };
            out.push(mean);
            out.push(pct);
        }
    }
    out
}
