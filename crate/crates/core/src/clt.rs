//! Limiting covariances σ(k,l) of spectral moments and related closed forms.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{parse_rational, Enumerator};

/// C_m = binom(2m, m)/(m+1).
pub fn catalan(m: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..m {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaParams {
    pub d: usize,
    pub p_inf: BigRational,
}

impl SigmaParams {
    pub fn new(d: usize, p_inf: BigRational) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d must be at least 1"));
        }
        if p_inf < BigRational::zero() || p_inf > BigRational::one() {
            return Err(Error::invalid(format!("p_inf = {p_inf} is outside [0, 1]")));
        }
        Ok(SigmaParams { d, p_inf })
    }

    /// Accepts decimals ("0.8") and fractions ("4/5").
    pub fn parse(d: usize, p_inf: &str) -> Result<Self> {
        let p = parse_rational(p_inf).ok_or_else(|| Error::invalid(format!("cannot parse p_inf = {p_inf:?}")))?;
        Self::new(d, p)
    }

    pub fn p_f64(&self) -> f64 {
        self.p_inf.to_f64().unwrap_or(f64::NAN)
    }

    /// (2p − 1)².
    pub fn minus_weight(&self) -> BigRational {
        let t = &self.p_inf * BigRational::from_integer(2.into()) - BigRational::one();
        &t * &t
    }

    /// p(1 − p).
    pub fn plus_weight(&self) -> BigRational {
        &self.p_inf * (BigRational::one() - &self.p_inf)
    }
}

fn even_part_series(d: usize, len: usize) -> Vec<BigUint> {
    // Coefficient j is d^j·C_j, the weight of one even part of size 2j.
    (0..len as u64)
        .map(|j| num_traits::pow(BigUint::from(d), j as usize) * catalan(j))
        .collect()
}

/// Coefficients of (Σ_j d^j C_j x^j)^r up to x^{len−1}, memoized per (d, r).
fn convolution_power(d: usize, r: usize, len: usize) -> Vec<BigUint> {
    type Cache = Mutex<HashMap<(usize, usize), Vec<BigUint>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&(d, r)) {
        if v.len() >= len {
            return v[..len].to_vec();
        }
    }
    let base = even_part_series(d, len);
    let mut acc = vec![BigUint::zero(); len];
    acc[0] = BigUint::one();
    for _ in 0..r {
        let mut next = vec![BigUint::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(len - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    cache.lock().expect("cache lock").insert((d, r), acc.clone());
    acc
}

/// A_r(m) = d!·m·Σ over compositions of m − r into r even parts of Π d^{m_q/2} C_{m_q/2}.
fn a_r(d: usize, r: usize, m: usize) -> BigUint {
    if m < r || (m - r) % 2 == 1 {
        return BigUint::zero();
    }
    let half = (m - r) / 2;
    let e = &convolution_power(d, r, half + 1)[half];
    factorial(d) * BigUint::from(m) * e
}

/// (k/2)·d^{k/2}·C_{k/2}, the number of (word, marked top simplex) choices for even k.
fn rooted_top_count(d: usize, k: usize) -> BigUint {
    let h = k / 2;
    BigUint::from(h) * num_traits::pow(BigUint::from(d), h) * catalan(h as u64)
}

/// The closed-form |W⁻| and |W⁺| at the top vertex count.
pub fn pair_class_formula(d: usize, k: usize, l: usize) -> (BigUint, BigRational) {
    if (k + l) % 2 == 1 {
        return (BigUint::zero(), BigRational::zero());
    }
    let minus = if k.is_multiple_of(2) && l.is_multiple_of(2) {
        factorial(d + 1) * rooted_top_count(d, k) * rooted_top_count(d, l)
    } else {
        BigUint::zero()
    };
    let mut plus = BigRational::zero();
    // Only r ≡ k ≡ l (mod 2) contribute: the remaining m − r must split into even parts.
    let start = if k % 2 == 1 { 3 } else { 4 };
    // Each word fixes an ordering of ρ ∪ {u}, but permuting the d − 1 vertices of the shared
    // (d−2)-face ρ maps a class to itself, so the product of orderings overcounts by (d−1)!.
    let rho_symmetry = BigInt::from(factorial(d - 1));
    for r in (start..=k.min(l)).step_by(2) {
        let term = a_r(d, r, k) * a_r(d, r, l) * BigUint::from(2u32);
        plus += BigRational::new(BigInt::from(term), BigInt::from(r) * &rho_symmetry);
    }
    (minus, plus)
}

/// σ(k,l) as an exact rational.
pub fn sigma_exact(k: usize, l: usize, params: &SigmaParams) -> BigRational {
    let (minus, plus) = pair_class_formula(params.d, k, l);
    BigRational::from_integer(BigInt::from(minus)) * params.minus_weight() + plus * params.plus_weight()
}

pub fn sigma(k: usize, l: usize, params: &SigmaParams) -> f64 {
    sigma_exact(k, l, params).to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaTable {
    pub d: usize,
    pub p_inf: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub matrix: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
    #[serde(skip)]
    pub exact: Vec<Vec<BigRational>>,
}

/// Σ_K = {σ(k,l)}_{0≤k,l≤K}, checked to be positive semidefinite.
pub fn sigma_table(k_max: usize, params: &SigmaParams) -> Result<SigmaTable> {
    let exact: Vec<Vec<BigRational>> = (0..=k_max)
        .map(|k| (0..=k_max).map(|l| sigma_exact(k, l, params)).collect())
        .collect();
    let matrix: Vec<Vec<f64>> = exact
        .iter()
        .map(|row| row.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    let n = k_max + 1;
    let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j]);
    let min = m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    if min < -1e-9 * m.norm() {
        return Err(Error::NotPsd(min));
    }
    Ok(SigmaTable {
        d: params.d,
        p_inf: params.p_f64(),
        k: k_max,
        matrix,
        min_eigenvalue: min,
        exact,
    })
}

/// Σ_{k,l} a_k σ(k,l) a_l: the limiting variance of ⟨L, Σ a_k x^k⟩.
pub fn poly_variance(coeffs: &[f64], params: &SigmaParams) -> f64 {
    let mut acc = 0.0;
    for (k, a) in coeffs.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for (l, b) in coeffs.iter().enumerate() {
            if *b != 0.0 {
                acc += a * b * sigma(k, l, params);
            }
        }
    }
    acc
}

/// Gaussian mixed moment: Σ over perfect matchings of [h] of Π σ(k_i, k_j).
pub fn wick_moment(ks: &[usize], params: &SigmaParams) -> f64 {
    fn rec(rest: &[usize], params: &SigmaParams) -> f64 {
        match rest {
            [] => 1.0,
            [first, tail @ ..] => {
                let mut acc = 0.0;
                for i in 0..tail.len() {
                    let mut others = tail.to_vec();
                    let partner = others.remove(i);
                    let s = sigma(*first, partner, params);
                    if s != 0.0 {
                        acc += s * rec(&others, params);
                    }
                }
                acc
            }
        }
    }
    if ks.len() % 2 == 1 {
        return 0.0;
    }
    rec(ks, params)
}

/// |W⁻|·(2p−1)² + |W⁺|·p(1−p) with the class counts taken from exhaustive enumeration.
pub fn sigma_oracle(k: usize, l: usize, params: &SigmaParams) -> Result<BigRational> {
    sigma_oracle_with(&Enumerator::default(), k, l, params)
}

pub fn sigma_oracle_with(e: &Enumerator, k: usize, l: usize, params: &SigmaParams) -> Result<BigRational> {
    if k.min(l) < 2 || (k + l) % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let c = e.pair_counts(params.d, k, l)?;
    Ok(BigRational::from_integer(c.minus.into()) * params.minus_weight()
        + BigRational::from_integer(c.plus.into()) * params.plus_weight())
}
