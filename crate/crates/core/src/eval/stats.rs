use statrs::distribution::{ContinuousCDF, StudentsT};

use super::EvalError;

pub const MIN_NORMALITY_SAMPLES: usize = 20;

/// D'Agostino–Pearson omnibus test result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityTest {
    pub z_skewness: f64,
    pub z_kurtosis: f64,
    /// K², chi-squared with 2 degrees of freedom under normality.
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn central_moment(x: &[f64], m: f64, order: i32) -> f64 {
    x.iter().map(|v| (v - m).powi(order)).sum::<f64>() / x.len() as f64
}

fn skew_z(b1: f64, n: f64) -> f64 {
    let y = b1 * ((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0))).sqrt();
    let beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0)
        / ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    let w2 = -1.0 + (2.0 * (beta2 - 1.0)).sqrt();
    let delta = 1.0 / (0.5 * w2.ln()).sqrt();
    let alpha = (2.0 / (w2 - 1.0)).sqrt();
    let ya = y / alpha;
    delta * (ya + (ya * ya + 1.0).sqrt()).ln()
}

fn kurtosis_z(b2: f64, n: f64) -> f64 {
    let e = 3.0 * (n - 1.0) / (n + 1.0);
    let var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
    let x = (b2 - e) / var.sqrt();
    let sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0))
        * (6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0))).sqrt();
    let a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + (1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)).sqrt());
    let term1 = 1.0 - 2.0 / (9.0 * a);
    let denom = 1.0 + x * (2.0 / (a - 4.0)).sqrt();
    let term2 = denom.signum() * ((1.0 - 2.0 / a) / denom.abs()).cbrt();
    (term1 - term2) / (2.0 / (9.0 * a)).sqrt()
}

/// Tests the null hypothesis that `samples` come from a normal
/// distribution, combining the skewness and kurtosis z-scores.
pub fn dagostino_pearson(samples: &[f64]) -> Result<NormalityTest, EvalError> {
    if samples.len() < MIN_NORMALITY_SAMPLES {
        return Err(EvalError::TooFewSamples(samples.len()));
    }
    let n = samples.len() as f64;
    let m = mean(samples);
    let m2 = central_moment(samples, m, 2);
    if m2 == 0.0 {
        return Err(EvalError::DegenerateVariance);
    }
    let b1 = central_moment(samples, m, 3) / m2.powf(1.5);
    let b2 = central_moment(samples, m, 4) / (m2 * m2);
    let z_skewness = skew_z(b1, n);
    let z_kurtosis = kurtosis_z(b2, n);
    let statistic = z_skewness * z_skewness + z_kurtosis * z_kurtosis;
    Ok(NormalityTest {
        z_skewness,
        z_kurtosis,
        statistic,
        p_value: (-statistic / 2.0).exp(),
    })
}

/// Two-sided two-sample t-test with pooled variance.
pub fn students_ttest(a: &[f64], b: &[f64]) -> Result<TTest, EvalError> {
    if a.is_empty() || b.is_empty() || a.len() + b.len() < 3 {
        return Err(EvalError::Config(format!(
            "t-test needs non-empty samples with at least 3 values in total, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ma, mb) = (mean(a), mean(b));
    let ss = |x: &[f64], m: f64| x.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    let df = (a.len() + b.len() - 2) as f64;
    let pooled = (ss(a, ma) + ss(b, mb)) / df;
    let diff = ma - mb;
    if pooled == 0.0 {
        if diff == 0.0 {
            return Err(EvalError::DegenerateVariance);
        }
        return Ok(TTest {
            t: diff.signum() * f64::INFINITY,
            df,
            p_value: 0.0,
        });
    }
    let t = diff / (pooled * (1.0 / a.len() as f64 + 1.0 / b.len() as f64)).sqrt();
    if t == 0.0 {
        return Ok(TTest { t, df, p_value: 1.0 });
    }
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| EvalError::Config(e.to_string()))?;
    Ok(TTest {
        t,
        df,
        p_value: (2.0 * dist.sf(t.abs())).min(1.0),
    })
}
