//! Fourth-order central differences on uniform grids.

/// Points needed on each side of a node.
pub(crate) const X_MARGIN: usize = 3;

pub(crate) fn d1(f: &[f64], i: usize, h: f64) -> f64 {
    (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
}

pub(crate) fn d2(f: &[f64], i: usize, h: f64) -> f64 {
    (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
}

pub(crate) fn d3(f: &[f64], i: usize, h: f64) -> f64 {
    (f[i - 3] - 8.0 * f[i - 2] + 13.0 * f[i - 1] - 13.0 * f[i + 1] + 8.0 * f[i + 2] - f[i + 3])
        / (8.0 * h * h * h)
}

pub(crate) fn d4(f: &[f64], i: usize, h: f64) -> f64 {
    (-f[i - 3] + 12.0 * f[i - 2] - 39.0 * f[i - 1] + 56.0 * f[i] - 39.0 * f[i + 1]
        + 12.0 * f[i + 2]
        - f[i + 3])
        / (6.0 * h.powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_fourth_order() {
        let errs = |h: f64| {
            let f: Vec<f64> = (0..7).map(|m| (0.3 + (m as f64 - 3.0) * h).sin()).collect();
            let (s, c) = 0.3f64.sin_cos();
            [
                (d1(&f, 3, h) - c).abs(),
                (d2(&f, 3, h) + s).abs(),
                (d3(&f, 3, h) + c).abs(),
                (d4(&f, 3, h) - s).abs(),
            ]
        };
        let (a, b) = (errs(0.1), errs(0.05));
        for m in 0..4 {
            let rate = (a[m] / b[m]).log2();
            assert!(rate > 3.7, "stencil {m}: rate {rate}");
        }
    }
}
