use statrs::distribution::{ContinuousCDF, StudentsT};

/// Least-squares line through `(log₂ Δx, log₂ value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit, in log₂ units.
    pub rms_residual: f64,
    /// Half-width of the 95% confidence interval for the slope; infinite
    /// with fewer than three points.
    pub ci_half_width: f64,
    pub points: usize,
}

/// Fits `log₂|value| = slope·log₂ Δx + c` over the `finest` smallest `Δx`.
/// Returns `None` if fewer than two usable points remain (zero or
/// non-finite values are skipped).
pub fn fit_log2(dx: &[f64], values: &[f64], finest: usize) -> Option<SlopeFit> {
    let mut pairs: Vec<(f64, f64)> = dx
        .iter()
        .zip(values)
        .filter(|(h, v)| **h > 0.0 && v.abs() > 0.0 && v.is_finite())
        .map(|(h, v)| (h.log2(), v.abs().log2()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(finest);
    let n = pairs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pairs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let ci_half_width = if n > 2 {
        let dof = nf - 2.0;
        let t = StudentsT::new(0.0, 1.0, dof).map(|d| d.inverse_cdf(0.975)).unwrap_or(f64::INFINITY);
        t * (sse / dof / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Some(SlopeFit { slope, intercept, rms_residual: (sse / nf).sqrt(), ci_half_width, points: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let dx = [0.1, 0.05, 0.025, 0.0125];
        let v: Vec<f64> = dx.iter().map(|h| 3.0 * h * h).collect();
        let f = fit_log2(&dx, &v, 4).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!(f.rms_residual < 1e-12);
        assert!(f.ci_half_width < 1e-9);
    }

    #[test]
    fn uses_the_finest_levels() {
        let dx = [0.2, 0.1, 0.05, 0.025, 0.0125];
        let v = [1.0, 0.1, 0.05, 0.025, 0.0125];
        let f = fit_log2(&dx, &v, 4).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn student_quantile_for_two_dof() {
        let t = StudentsT::new(0.0, 1.0, 2.0).unwrap().inverse_cdf(0.975);
        assert!((t - 4.302_652_729_911_275).abs() < 1e-6);
    }
}
