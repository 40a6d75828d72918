//! Quadrature rules used by the metrics and the catalog checks.

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Five-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 9.
pub(crate) const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
pub(crate) const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Intervals are bisected until the Kronrod/Gauss difference on each piece is
/// below its share of the tolerance (or the recursion depth is exhausted).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (value, err) = kronrod15(&f, a, b);
    refine(&f, a, b, value, err, tol, 60)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    if err <= tol || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    let (left, left_err) = kronrod15(f, a, mid);
    let (right, right_err) = kronrod15(f, mid, b);
    refine(f, a, mid, left, left_err, 0.5 * tol, depth - 1)
        + refine(f, mid, b, right, right_err, 0.5 * tol, depth - 1)
}

/// Integral of `f` over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> f64 {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    let share = tol / (points.len() - 1) as f64;
    points
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], share))
        .sum()
}

/// Integral of uniformly spaced samples: composite Simpson, with a 3/8 panel
/// at the end when the number of intervals is odd.
pub fn simpson_uniform(values: &[f64], dt: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * dt * (values[0] + values[1]),
        3 => dt / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals.is_multiple_of(2) {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                let tail = 3.0 * dt / 8.0
                    * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
                (k, tail)
            };
            let mut sum = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            sum * dt / 3.0 + tail
        }
    }
}

/// Integral of arbitrarily spaced samples by the trapezoid rule.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}
