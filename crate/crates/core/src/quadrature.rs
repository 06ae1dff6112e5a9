//! Gauss-Legendre rules on `[-1, 1]`.

const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Four-point Gauss-Legendre nodes and weights mapped to `[a, b]`.
/// Exact for polynomials of degree seven.
pub fn gauss4(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL4_NODES.iter().zip(GL4_WEIGHTS.iter()).map(move |(&x, &w)| (mid + half * x, half * w))
}

/// Sorts, clips to `[lo, hi]` and deduplicates breakpoints, always keeping the ends.
pub fn breakpoints(lo: f64, hi: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = interior.into_iter().filter(|x| *x > lo && *x < hi).collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(|a, b| a.total_cmp(b));
    let tol = 1e-14 * (hi - lo).abs().max(f64::MIN_POSITIVE);
    pts.dedup_by(|b, a| (*b - *a).abs() <= tol);
    if let Some(last) = pts.last_mut() {
        *last = hi;
    }
    pts
}
