//! Linial–Meshulam complexes Y^d_{n,p} and the centered, scaled adjacency matrix H_n.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::complex::{binomial, colex_rank, colex_subsets, parse_complex, write_complex, PureComplex, Simplex};
use crate::error::{Error, Result};

/// 64-bit mixing of two words (SplitMix64 finalizer applied twice).
///
/// Used for per-facet coins and per-trial seeds, so every derived stream is a pure function
/// of its inputs.
pub fn mix64(a: u64, b: u64) -> u64 {
    fn fmix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    fmix(fmix(a.wrapping_add(0x9E37_79B9_7F4A_7C15)).wrapping_add(b.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Uniform draw in [0, 1) from a 64-bit hash, using its top 53 bits.
pub fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LMParams {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
}

impl LMParams {
    pub fn new(n: usize, d: usize, p: f64, seed: u64) -> Result<Self> {
        let params = LMParams { n, d, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 || self.n <= self.d {
            return Err(Error::invalid(format!("need n > d >= 1, got n = {}, d = {}", self.n, self.d)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::invalid(format!("p = {} is outside [0, 1]", self.p)));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::invalid("n too large"));
        }
        Ok(())
    }

    /// Whether the d-simplex with colex rank `rank` is present.
    pub fn coin(&self, rank: usize) -> bool {
        unit_interval(mix64(self.seed, rank as u64)) < self.p
    }
}

/// One draw of Y^d_{n,p}: the present d-simplices, in colex order.
#[derive(Clone, Debug, PartialEq)]
pub struct LMSample {
    pub params: LMParams,
    pub present: Vec<Simplex>,
}

/// Includes each d-simplex of K_n independently with probability p, decided by a hash of
/// (seed, colex rank).
pub fn sample_lm(params: LMParams) -> Result<LMSample> {
    params.validate()?;
    let present = colex_subsets(params.n, params.d + 1)
        .into_iter()
        .enumerate()
        .filter(|(r, _)| params.coin(*r))
        .map(|(_, s)| s)
        .collect();
    Ok(LMSample { params, present })
}

impl LMSample {
    /// Presence bitmap indexed by colex rank.
    pub fn presence(&self) -> Vec<bool> {
        let mut bits = vec![false; binomial(self.params.n, self.params.d + 1)];
        for s in &self.present {
            bits[s.colex_rank()] = true;
        }
        bits
    }

    /// The complex: full (d−1)-skeleton on [n] plus the present d-simplices.
    pub fn complex(&self) -> PureComplex {
        PureComplex::new(self.params.d, self.present.iter().cloned())
            .and_then(|x| x.with_skeleton(self.params.n))
            .expect("sampled facets are valid")
    }

    /// JSON header line `{n, d, p, seed}` followed by the complex text format.
    pub fn to_text(&self) -> String {
        let header = serde_json::to_string(&self.params).expect("params serialize");
        format!("{header}\n{}", write_complex(&self.complex(), self.params.n))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        if !first.trim_start().starts_with('{') {
            return Err(Error::Parse {
                line: 1,
                msg: "expected a JSON header line".into(),
            });
        }
        let params: LMParams = serde_json::from_str(first)?;
        params.validate()?;
        let (x, n) = parse_complex(rest).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse { line: line + 1, msg },
            e => e,
        })?;
        if n != params.n || x.dim() != params.d {
            return Err(Error::Parse {
                line: 2,
                msg: "complex header disagrees with the JSON header".into(),
            });
        }
        Ok(LMSample {
            params,
            present: x.facets().iter().cloned().collect(),
        })
    }
}

/// H_n together with its scale factor 1/√(np(1−p)).
#[derive(Clone, Debug)]
pub struct CenteredMatrix {
    pub h: DMatrix<f64>,
    pub scale: f64,
}

/// H_n = (A_{d−1}(Y) − p·A_{d−1}(K_n)) / √(np(1−p)), indexed by (d−1)-simplices in colex order.
pub fn centered_scaled(sample: &LMSample) -> Result<CenteredMatrix> {
    let LMParams { n, d, p, .. } = sample.params;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::invalid(format!("p = {p} makes the scaling degenerate")));
    }
    let scale = 1.0 / (n as f64 * p * (1.0 - p)).sqrt();
    let present = sample.presence();
    let rows = binomial(n, d);
    let mut h = DMatrix::<f64>::zeros(rows, rows);
    let on = (1.0 - p) * scale;
    let off = -p * scale;
    let mut face_rank = vec![0usize; d + 1];
    let mut face = Vec::with_capacity(d);
    for (r, tau) in colex_subsets(n, d + 1).iter().enumerate() {
        let v = if present[r] { on } else { off };
        for (i, slot) in face_rank.iter_mut().enumerate() {
            face.clear();
            face.extend(tau.vertices().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
            *slot = colex_rank(&face);
        }
        // Faces missing positions i < j: sgn = −(−1)^i (−1)^j.
        for i in 0..=d {
            for j in i + 1..=d {
                let s = if (i + j) % 2 == 1 { v } else { -v };
                h[(face_rank[i], face_rank[j])] = s;
                h[(face_rank[j], face_rank[i])] = s;
            }
        }
    }
    Ok(CenteredMatrix { h, scale })
}

/// Spectrum of A_{d−1}(K_n): n−d with multiplicity C(n−1,d−1) and −d with multiplicity C(n−1,d).
pub fn complete_spectrum_reference(n: usize, d: usize) -> Result<Vec<(f64, usize)>> {
    if d < 1 || n <= d {
        return Err(Error::invalid(format!("need n > d >= 1, got n = {n}, d = {d}")));
    }
    Ok(vec![
        ((n - d) as f64, binomial(n - 1, d - 1)),
        (-(d as f64), binomial(n - 1, d)),
    ])
}
