use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{ExperimentConfig, TrialRecord};
use crate::error::{Error, Result};

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// n^d·np(1−p).
pub fn scale_factor(d: usize, n: usize, p: f64) -> f64 {
    (n as f64).powi(d as i32) * n as f64 * p * (1.0 - p)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<NeumaierSum>().value() / xs.len() as f64
}

/// Unbiased sample covariance and its jackknife standard error (NaN below three samples).
pub(crate) fn jackknife_variance(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len();
    let (mx, my) = (mean(xs), mean(ys));
    let s = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .collect::<NeumaierSum>()
        .value();
    let cov = s / (m as f64 - 1.0);
    if m < 3 {
        return (cov, f64::NAN);
    }
    // Leaving out sample i removes m/(m−1)·(x_i − x̄)(y_i − ȳ) from the centered sum.
    let mf = m as f64;
    let loo: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (s - mf / (mf - 1.0) * (x - mx) * (y - my)) / (mf - 2.0))
        .collect();
    let lm = mean(&loo);
    let ss = loo.iter().map(|c| (c - lm) * (c - lm)).collect::<NeumaierSum>().value();
    (cov, ((mf - 1.0) / mf * ss).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normality {
    pub ks: f64,
    pub skew: f64,
    pub excess_kurtosis: f64,
}

/// Standardizes by the sample mean and standard deviation and compares with N(0, 1).
pub fn normality_diagnostics(values: &[f64]) -> Result<Normality> {
    if values.len() < 100 {
        return Err(Error::invalid(format!(
            "normality diagnostics need at least 100 records, got {}",
            values.len()
        )));
    }
    let z = standardize(values).ok_or_else(|| Error::ZeroVariance("sample".into()))?;
    let m = z.len() as f64;
    let normal = Normal::standard();
    let mut sorted = z.clone();
    sorted.sort_by(f64::total_cmp);
    let ks = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = normal.cdf(*x);
            (f - i as f64 / m).abs().max((i as f64 + 1.0) / m - f)
        })
        .fold(0.0, f64::max);
    let skew = z.iter().map(|x| x.powi(3)).collect::<NeumaierSum>().value() / m;
    let kurt = z.iter().map(|x| x.powi(4)).collect::<NeumaierSum>().value() / m - 3.0;
    Ok(Normality {
        ks,
        skew,
        excess_kurtosis: kurt,
    })
}

fn standardize(values: &[f64]) -> Option<Vec<f64>> {
    let mu = mean(values);
    let var = values
        .iter()
        .map(|x| (x - mu) * (x - mu))
        .collect::<NeumaierSum>()
        .value()
        / (values.len() as f64 - 1.0);
    // Exact-arithmetic zero can surface as rounding noise around the mean.
    let tol = 1e-24 * values.iter().map(|x| x * x).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if var.is_nan() || var <= tol {
        return None;
    }
    let sd = var.sqrt();
    Some(values.iter().map(|x| (x - mu) / sd).collect())
}

/// Sorted standardized values against normal quantiles at (i + 1/2)/m.
pub fn qq_points(values: &[f64]) -> Option<Vec<(f64, f64)>> {
    let mut z = standardize(values)?;
    z.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let m = z.len() as f64;
    Some(
        z.into_iter()
            .enumerate()
            .map(|(i, x)| (x, normal.inverse_cdf((i as f64 + 0.5) / m)))
            .collect(),
    )
}

/// Aggregates for one n.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub d: usize,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub statistics: Vec<String>,
    pub scale_factor: f64,
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub scaled_covariance: Vec<Vec<f64>>,
    pub scaled_covariance_se: Vec<Vec<f64>>,
    /// Present when there are at least 100 trials and the statistic is not constant.
    pub normality: Vec<Option<Normality>>,
}

/// `values[t][j]` is statistic j in trial t, already sorted by trial index.
pub fn estimate_group(d: usize, n: usize, p: f64, names: &[String], values: &[Vec<f64>]) -> Result<EstimateReport> {
    if values.len() < 2 {
        return Err(Error::invalid("estimation needs at least 2 records"));
    }
    let m = values.len();
    let columns: Vec<Vec<f64>> = (0..names.len()).map(|j| values.iter().map(|r| r[j]).collect()).collect();
    let scale = scale_factor(d, n, p);
    let k = names.len();
    let mut covariance = vec![vec![0.0; k]; k];
    let mut scaled = vec![vec![0.0; k]; k];
    let mut scaled_se = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let (c, se) = jackknife_variance(&columns[a], &columns[b]);
            for (i, j) in [(a, b), (b, a)] {
                covariance[i][j] = c;
                scaled[i][j] = scale * c;
                scaled_se[i][j] = scale * se;
            }
        }
    }
    let mean_se = (0..k).map(|j| (covariance[j][j] / m as f64).sqrt()).collect();
    let normality = columns
        .iter()
        .map(|c| if m >= 100 { normality_diagnostics(c).ok() } else { None })
        .collect();
    Ok(EstimateReport {
        d,
        n,
        p,
        trials: m,
        statistics: names.to_vec(),
        scale_factor: scale,
        mean: columns.iter().map(|c| mean(c)).collect(),
        mean_se,
        covariance,
        scaled_covariance: scaled,
        scaled_covariance_se: scaled_se,
        normality,
    })
}

/// One report per n of the config grid.
pub fn estimate(records: &[TrialRecord], config: &ExperimentConfig) -> Result<Vec<EstimateReport>> {
    let names = config.statistic_names();
    config
        .n
        .values()
        .into_iter()
        .map(|n| {
            let mut group: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            group.sort_by_key(|r| r.trial_index);
            let values: Vec<Vec<f64>> = group.iter().map(|r| r.values.clone()).collect();
            estimate_group(config.d, n, config.p.at(n)?, &names, &values)
        })
        .collect()
}
