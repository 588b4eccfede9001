use super::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|S(h) − S(2h)|/15`, zero when the grid cannot be halved.
    pub error_estimate: f64,
}

/// Composite Simpson integral of `f` over the grid.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, grid: &RadialGrid) -> QuadratureResult {
    let values: Vec<f64> = grid.points().map(f).collect();
    quadrature_samples(&values, grid)
}

/// Composite Simpson integral of samples taken on the grid nodes. An odd
/// number of intervals closes with a Simpson 3/8 panel.
pub fn quadrature_samples(values: &[f64], grid: &RadialGrid) -> QuadratureResult {
    debug_assert_eq!(values.len(), grid.num_points);
    let h = grid.spacing();
    let value = simpson(values, h);
    let intervals = values.len() - 1;
    let error_estimate = if intervals.is_multiple_of(4) {
        let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
        (value - simpson(&coarse, 2.0 * h)).abs() / 15.0
    } else {
        0.0
    };
    QuadratureResult { value, error_estimate }
}

fn simpson(v: &[f64], h: f64) -> f64 {
    let intervals = v.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * h * (v[0] + v[1]),
        _ => {
            let (even_end, tail) = if intervals.is_multiple_of(2) {
                (intervals, 0.0)
            } else {
                let k = intervals - 3;
                (k, 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]))
            };
            let mut sum = 0.0;
            for i in (0..even_end).step_by(2) {
                sum += v[i] + 4.0 * v[i + 1] + v[i + 2];
            }
            sum * h / 3.0 + tail
        }
    }
}
