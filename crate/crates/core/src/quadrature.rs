//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

/// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the number of subintervals per call.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Interval {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let sum = f(center - dx) + f(center + dx);
        kronrod += w * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Interval {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadResult {
    integrate_split(&mut f, &[a, b], opts)
}

/// Integrates `f` over `[points[0], points[last]]`, never placing a node on
/// an interior point, so integrands with jumps there converge quickly.
pub fn integrate_split<F: FnMut(f64) -> f64>(f: &mut F, points: &[f64], opts: &QuadOptions) -> QuadResult {
    let mut intervals: Vec<Interval> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15(f, w[0], w[1]))
        .collect();
    if intervals.is_empty() {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        };
    }
    loop {
        let value: f64 = intervals.iter().map(|i| i.value).sum();
        let error: f64 = intervals.iter().map(|i| i.error).sum();
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) || intervals.len() >= opts.max_intervals {
            return QuadResult {
                value,
                error,
                intervals: intervals.len(),
            };
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let iv = intervals.swap_remove(worst);
        let mid = 0.5 * (iv.a + iv.b);
        if !(mid > iv.a && mid < iv.b) {
            // interval at floating-point resolution; accept it as is
            intervals.push(Interval { error: 0.0, ..iv });
            continue;
        }
        intervals.push(gk15(f, iv.a, mid));
        intervals.push(gk15(f, mid, iv.b));
    }
}

/// Sorted split points over `[a, b]`: the endpoints plus every breakpoint
/// strictly inside.
pub fn split_points(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut pts = Vec::with_capacity(breakpoints.len() + 2);
    pts.push(a);
    pts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts
}
