use rayon::prelude::*;
use serde::Serialize;

use super::stats::{jackknife_variance, scale_factor, NeumaierSum};
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::lm::{centered_scaled, mix64, sample_lm, LMParams};
use crate::spectral::{eigenvalues_sym, linear_statistic, TestFunction};

/// One trial: the statistics ⟨L_{H_n}, f⟩ for a single sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub n: usize,
    pub values: Vec<f64>,
}

pub fn trial_seed(master_seed: u64, trial_index: usize) -> u64 {
    mix64(master_seed, trial_index as u64)
}

/// Samples Y, builds H_n, eigensolves once and evaluates every statistic.
pub fn evaluate_trial(
    d: usize,
    n: usize,
    p: f64,
    master_seed: u64,
    trial_index: usize,
    stats: &[TestFunction],
) -> Result<TrialRecord> {
    let seed = trial_seed(master_seed, trial_index);
    let sample = sample_lm(LMParams::new(n, d, p, seed)?)?;
    let h = centered_scaled(&sample)?;
    let esd = eigenvalues_sym(&h.h)?;
    let values = stats.iter().map(|f| linear_statistic(&esd, f)).collect::<Result<_>>()?;
    Ok(TrialRecord {
        trial_index,
        seed,
        n,
        values,
    })
}

fn run_trials(config: &ExperimentConfig, n: usize, stats: &[TestFunction]) -> Result<Vec<TrialRecord>> {
    let p = config.p.at(n)?;
    let job = || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| evaluate_trial(config.d, n, p, config.master_seed, t, stats))
            .collect::<Result<Vec<_>>>()
    };
    match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// All trials for every n in the grid, ordered by (n position, trial_index).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut out = Vec::with_capacity(config.trials * config.n.values().len());
    for n in config.n.values() {
        out.extend(run_trials(config, n, &config.statistics)?);
    }
    Ok(out)
}

/// A scaled estimate at one n.
#[derive(Clone, Debug, Serialize)]
pub struct ScaledPoint {
    pub n: usize,
    pub p: f64,
    pub value: f64,
    pub se: f64,
}

/// n^d·np(1−p)·E[⟨L,g⟩²] along the n grid, for g vanishing on a neighborhood of [−2√d, 2√d].
pub fn tail_mass_experiment(config: &ExperimentConfig, g: &TestFunction) -> Result<Vec<ScaledPoint>> {
    config.validate()?;
    let edge = 2.0 * (config.d as f64).sqrt();
    match g.zero_on_centered_interval() {
        Some(a) if a > edge => {}
        _ => {
            return Err(Error::invalid(format!(
                "{g} must vanish on [-a, a] for some a > {edge}"
            )))
        }
    }
    let mut out = Vec::new();
    for n in config.n.values() {
        let p = config.p.at(n)?;
        let scale = scale_factor(config.d, n, p);
        let sq: Vec<f64> = run_trials(config, n, std::slice::from_ref(g))?
            .iter()
            .map(|r| r.values[0] * r.values[0])
            .collect();
        let m = sq.len() as f64;
        let mean = sq.iter().copied().collect::<NeumaierSum>().value() / m;
        let var = sq.iter().map(|x| (x - mean) * (x - mean)).collect::<NeumaierSum>().value() / (m - 1.0);
        out.push(ScaledPoint {
            n,
            p,
            value: scale * mean,
            se: scale * (var / m).sqrt(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    pub lipschitz: f64,
    pub points: Vec<ScaledPoint>,
    pub max: f64,
}

/// n^d·np(1−p)·Var⟨L,g⟩ along the n grid for a convex Lipschitz g, with jackknife errors.
pub fn convex_concentration_experiment(config: &ExperimentConfig, g: &TestFunction) -> Result<ConcentrationReport> {
    config.validate()?;
    let lipschitz = g
        .convex_lipschitz()
        .ok_or_else(|| Error::invalid(format!("{g} is not a known convex Lipschitz function")))?;
    let mut points = Vec::new();
    for n in config.n.values() {
        let p = config.p.at(n)?;
        let scale = scale_factor(config.d, n, p);
        let xs: Vec<f64> = run_trials(config, n, std::slice::from_ref(g))?
            .iter()
            .map(|r| r.values[0])
            .collect();
        let (var, se) = jackknife_variance(&xs, &xs);
        points.push(ScaledPoint {
            n,
            p,
            value: scale * var,
            se: scale * se,
        });
    }
    let max = points.iter().map(|q| q.value).fold(f64::NEG_INFINITY, f64::max);
    Ok(ConcentrationReport { lipschitz, points, max })
}
