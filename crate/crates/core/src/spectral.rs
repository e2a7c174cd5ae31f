//! Eigenvalues, empirical spectral distributions and the semicircle law ν_d.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric matrix, sorted descending.
///
/// The spectrum doubles as its empirical spectral distribution: the uniform probability
/// measure on `eigs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigs: Vec<f64>,
}

pub type Esd = Spectrum;

impl Spectrum {
    pub fn from_values(mut eigs: Vec<f64>) -> Result<Self> {
        if let Some(x) = eigs.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("eigenvalue {x}")));
        }
        eigs.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { eigs })
    }

    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }

    /// An `eigenvalue` header, then one eigenvalue per line, descending.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(10 + self.eigs.len() * 24);
        out.push_str("eigenvalue\n");
        for x in &self.eigs {
            out.push_str(&format!("{x:.17e}\n"));
        }
        out
    }
}

/// Full spectrum of a dense symmetric matrix.
pub fn eigenvalues_sym(m: &DMatrix<f64>) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::invalid(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    if let Some(x) = m.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("matrix entry {x}")));
    }
    let norm = m.norm();
    let n = m.nrows();
    let mut asym = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > 1e-12 * norm {
        return Err(Error::NotSymmetric(asym));
    }
    if n == 0 {
        return Ok(Spectrum { eigs: Vec::new() });
    }
    Spectrum::from_values(m.clone().symmetric_eigenvalues().iter().copied().collect())
}

/// ⟨L, x^k⟩ = (1/m) Σ λ_i^k.
pub fn moment(esd: &Esd, k: u32) -> f64 {
    if esd.is_empty() {
        return 0.0;
    }
    esd.eigs.iter().map(|x| x.powi(k as i32)).sum::<f64>() / esd.len() as f64
}

/// (1/rows)·Tr(H^k) by repeated multiplication.
pub fn moment_trace(h: &DMatrix<f64>, k: u32) -> Result<f64> {
    if k > 12 {
        return Err(Error::invalid(format!("moment_trace is limited to k <= 12, got {k}")));
    }
    let n = h.nrows();
    if n == 0 || !h.is_square() {
        return Err(Error::invalid("moment_trace needs a nonempty square matrix"));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let mut p = h.clone();
    for _ in 1..k {
        p = &p * h;
    }
    Ok(p.trace() / n as f64)
}

/// ⟨L, f⟩: the mean of f over the eigenvalues.
pub fn linear_statistic(esd: &Esd, f: &TestFunction) -> Result<f64> {
    let mut acc = 0.0;
    for &x in &esd.eigs {
        let y = f.eval(x);
        if !y.is_finite() {
            return Err(Error::NonFinite(format!("{f} at {x}")));
        }
        acc += y;
    }
    Ok(if esd.is_empty() { 0.0 } else { acc / esd.len() as f64 })
}

/// k-th moment of ν_d: d^{k/2}·Catalan(k/2) for even k, else 0.
pub fn semicircle_moment(d: usize, k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let m = k / 2;
    let c = crate::clt::catalan(m as u64).to_f64().unwrap_or(f64::INFINITY);
    (d as f64).powi(m as i32) * c
}

pub fn semicircle_density(d: usize, x: f64) -> f64 {
    let r2 = 4.0 * d as f64;
    if x * x >= r2 {
        0.0
    } else {
        (r2 - x * x).sqrt() / (2.0 * PI * d as f64)
    }
}

/// CDF of ν_d: 1/2 + x√(4d−x²)/(4πd) + arcsin(x/(2√d))/π on the support, clamped outside.
pub fn semicircle_cdf(d: usize, x: f64) -> f64 {
    let d = d as f64;
    let r = 2.0 * d.sqrt();
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    let v = 0.5 + x * (4.0 * d - x * x).sqrt() / (4.0 * PI * d) + (x / r).asin() / PI;
    v.clamp(0.0, 1.0)
}

/// Inverse of [`semicircle_cdf`] by bisection.
pub fn semicircle_quantile(d: usize, q: f64) -> f64 {
    let r = 2.0 * (d as f64).sqrt();
    let (mut lo, mut hi) = (-r, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(d, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// sup_x |F_ESD(x) − F_{ν_d}(x)|, evaluated at both one-sided limits of every jump.
pub fn kolmogorov_distance(esd: &Esd, d: usize) -> f64 {
    let m = esd.len();
    if m == 0 {
        return 1.0;
    }
    let asc: Vec<f64> = esd.eigs.iter().rev().copied().collect();
    let mut best = 0.0f64;
    let mut i = 0;
    while i < m {
        let v = asc[i];
        let mut j = i;
        while j < m && asc[j] == v {
            j += 1;
        }
        let f = semicircle_cdf(d, v);
        let below = i as f64 / m as f64;
        let upto = j as f64 / m as f64;
        best = best.max((f - below).abs()).max((f - upto).abs());
        i = j;
    }
    best
}

/// Summary of one spectrum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EsdSummary {
    pub n: usize,
    pub d: usize,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub moments: Vec<f64>,
    pub kolmogorov_distance: f64,
}

/// Named test functions f for linear statistics ⟨L, f⟩.
///
/// String forms: a number (constant), `x`, `x^k`, `poly:a0,a1,...`, `abs`, `pos`,
/// `abs_shift:a` (|x−a|), `hinge:a` ((|x|−a)₊²), `bump:c,w` ((1−((x−c)/w)²)³ on |x−c| < w),
/// and `c*f` for a scalar multiple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TestFunction {
    Const(f64),
    Monomial(u32),
    Poly(Vec<f64>),
    Abs,
    Pos,
    AbsShift(f64),
    Hinge(f64),
    Bump { c: f64, w: f64 },
    Scaled(f64, Box<TestFunction>),
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Const(c) => *c,
            TestFunction::Monomial(k) => x.powi(*k as i32),
            TestFunction::Poly(a) => a.iter().rev().fold(0.0, |acc, c| acc * x + c),
            TestFunction::Abs => x.abs(),
            TestFunction::Pos => x.max(0.0),
            TestFunction::AbsShift(a) => (x - a).abs(),
            TestFunction::Hinge(a) => {
                let t = (x.abs() - a).max(0.0);
                t * t
            }
            TestFunction::Bump { c, w } => {
                let u = (x - c) / w;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - u * u).powi(3)
                }
            }
            TestFunction::Scaled(c, f) => c * f.eval(x),
        }
    }

    /// Largest known a with f ≡ 0 on [−a, a]; infinite for the zero function, `None` if unknown.
    pub fn zero_on_centered_interval(&self) -> Option<f64> {
        match self {
            TestFunction::Const(c) if *c == 0.0 => Some(f64::INFINITY),
            TestFunction::Hinge(a) => Some(*a),
            TestFunction::Scaled(c, _) if *c == 0.0 => Some(f64::INFINITY),
            TestFunction::Scaled(_, f) => f.zero_on_centered_interval(),
            TestFunction::Poly(a) if a.iter().all(|c| *c == 0.0) => Some(f64::INFINITY),
            _ => None,
        }
    }

    /// Lipschitz constant when f is convex and globally Lipschitz.
    pub fn convex_lipschitz(&self) -> Option<f64> {
        match self {
            TestFunction::Const(_) => Some(0.0),
            TestFunction::Monomial(1) => Some(1.0),
            TestFunction::Abs | TestFunction::Pos | TestFunction::AbsShift(_) => Some(1.0),
            TestFunction::Scaled(c, f) if *c >= 0.0 => f.convex_lipschitz().map(|l| c * l),
            _ => None,
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Const(c) => write!(f, "{c}"),
            TestFunction::Monomial(1) => write!(f, "x"),
            TestFunction::Monomial(k) => write!(f, "x^{k}"),
            TestFunction::Poly(a) => {
                let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            TestFunction::Abs => write!(f, "abs"),
            TestFunction::Pos => write!(f, "pos"),
            TestFunction::AbsShift(a) => write!(f, "abs_shift:{a}"),
            TestFunction::Hinge(a) => write!(f, "hinge:{a}"),
            TestFunction::Bump { c, w } => write!(f, "bump:{c},{w}"),
            TestFunction::Scaled(c, g) => write!(f, "{c}*{g}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("unknown test function {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        if let Ok(c) = s.parse::<f64>() {
            return Ok(TestFunction::Const(c));
        }
        if let Some((c, rest)) = s.split_once('*') {
            return Ok(TestFunction::Scaled(num(c)?, Box::new(rest.parse()?)));
        }
        if s == "x" {
            return Ok(TestFunction::Monomial(1));
        }
        if let Some(k) = s.strip_prefix("x^") {
            return Ok(TestFunction::Monomial(k.parse().map_err(|_| bad())?));
        }
        if s == "abs" {
            return Ok(TestFunction::Abs);
        }
        if s == "pos" {
            return Ok(TestFunction::Pos);
        }
        let (head, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<f64> = args.split(',').map(num).collect::<Result<_>>()?;
        match (head, &args[..]) {
            ("poly", a) if !a.is_empty() => Ok(TestFunction::Poly(a.to_vec())),
            ("abs_shift", [a]) => Ok(TestFunction::AbsShift(*a)),
            ("hinge", [a]) => Ok(TestFunction::Hinge(*a)),
            ("bump", [c, w]) if *w > 0.0 => Ok(TestFunction::Bump { c: *c, w: *w }),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for TestFunction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TestFunction> for String {
    fn from(f: TestFunction) -> Self {
        f.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{adjacency_matrix, PureComplex};
    use crate::lm::{centered_scaled, sample_lm, LMParams};
    use proptest::prelude::*;

    fn spectrum_of(m: DMatrix<f64>) -> Spectrum {
        eigenvalues_sym(&m).unwrap()
    }

    fn a_kn(n: usize, d: usize) -> DMatrix<f64> {
        adjacency_matrix(&PureComplex::complete(n, d), d - 1).unwrap().to_dmatrix()
    }

    /// ∫ f dν_d via x = 2√d sin θ, which turns the measure into (2/π)cos²θ dθ on [−π/2, π/2].
    fn semicircle_integral(d: usize, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let r = 2.0 * (d as f64).sqrt();
        let t0 = (lo / r).clamp(-1.0, 1.0).asin();
        let t1 = (hi / r).clamp(-1.0, 1.0).asin();
        // Composite Gauss–Legendre, 5 nodes per panel.
        let nodes = [
            (0.0, 0.568_888_888_888_888_9),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let panels = 400;
        let h = (t1 - t0) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let mid = t0 + (p as f64 + 0.5) * h;
            for (x, w) in nodes {
                let t = mid + 0.5 * h * x;
                acc += w * 0.5 * h * f(r * t.sin()) * (2.0 / PI) * t.cos().powi(2);
            }
        }
        acc
    }

    #[test]
    fn eigen_examples() {
        let d = spectrum_of(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0])));
        assert_eq!(d.eigs, vec![3.0, 2.0, 1.0]);
        let t = spectrum_of(a_kn(3, 1));
        for (x, y) in t.eigs.iter().zip([2.0, -1.0, -1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let k5 = spectrum_of(a_kn(5, 2));
        for (i, x) in k5.eigs.iter().enumerate() {
            let want = if i < 4 { 3.0 } else { -2.0 };
            assert!((x - want).abs() < 1e-10);
        }
    }

    #[test]
    fn eigen_rejects_bad_input() {
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(matches!(eigenvalues_sym(&asym), Err(Error::NotSymmetric(_))));
        let nan = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 0.0]);
        assert!(matches!(eigenvalues_sym(&nan), Err(Error::NonFinite(_))));
    }

    #[test]
    fn complete_complex_spectra() {
        for d in 1..=3 {
            for n in d + 1..=10 {
                let s = spectrum_of(a_kn(n, d));
                let reference = crate::lm::complete_spectrum_reference(n, d).unwrap();
                let mut want = Vec::new();
                for (v, mult) in reference {
                    want.extend(std::iter::repeat_n(v, mult));
                }
                assert_eq!(s.len(), want.len());
                for (x, y) in s.eigs.iter().zip(&want) {
                    assert!((x - y).abs() < 1e-8, "d={d} n={n}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn residuals_and_trace() {
        let s = sample_lm(LMParams::new(9, 2, 0.4, 1).unwrap()).unwrap();
        let h = centered_scaled(&s).unwrap().h;
        let eig = h.clone().symmetric_eigen();
        let norm = h.norm();
        for i in [0, 5, 20, 35] {
            let v = eig.eigenvectors.column(i);
            let r = &h * v - v * eig.eigenvalues[i];
            assert!(r.norm() <= 1e-8 * norm);
        }
        let spectrum = spectrum_of(h.clone());
        assert!((spectrum.eigs.iter().sum::<f64>() - h.trace()).abs() < 1e-8 * norm);
    }

    #[test]
    fn moment_examples() {
        let k5 = spectrum_of(a_kn(5, 2));
        assert!((moment(&k5, 0) - 1.0).abs() < 1e-15);
        assert!((moment(&k5, 2) - 6.0).abs() < 1e-10);
        let s = sample_lm(LMParams::new(8, 1, 0.5, 4).unwrap()).unwrap();
        let h = spectrum_of(centered_scaled(&s).unwrap().h);
        assert!(moment(&h, 1).abs() < 1e-12);
    }

    #[test]
    fn moment_trace_examples() {
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(moment_trace(&z, 3).unwrap(), 0.0);
        assert_eq!(moment_trace(&DMatrix::<f64>::identity(2, 2), 5).unwrap(), 1.0);
        assert!((moment_trace(&a_kn(3, 1), 3).unwrap() - 2.0).abs() < 1e-12);
        assert!(moment_trace(&z, 13).is_err());
    }

    #[test]
    fn eigen_and_trace_moments_agree() {
        for seed in 0..50u64 {
            let n = 5 + (seed as usize % 36);
            let d = if n <= 14 { 1 + seed as usize % 2 } else { 1 };
            let p = 0.2 + 0.6 * (seed as f64 / 50.0);
            let h = centered_scaled(&sample_lm(LMParams::new(n, d, p, seed).unwrap()).unwrap()).unwrap().h;
            let s = spectrum_of(h.clone());
            for k in 0..=8 {
                let a = moment(&s, k);
                let b = moment_trace(&h, k).unwrap();
                assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "seed {seed} k {k}: {a} {b}");
            }
        }
    }

    #[test]
    fn linear_statistic_examples() {
        let t = Spectrum::from_values(vec![2.0, -1.0, -1.0]).unwrap();
        assert_eq!(linear_statistic(&t, &TestFunction::Const(1.0)).unwrap(), 1.0);
        assert!((linear_statistic(&t, &TestFunction::Monomial(2)).unwrap() - 2.0).abs() < 1e-15);
        assert!((linear_statistic(&t, &TestFunction::Abs).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let huge = Spectrum::from_values(vec![1e300]).unwrap();
        assert!(linear_statistic(&huge, &TestFunction::Monomial(4)).is_err());
    }

    #[test]
    fn semicircle_moments_match_quadrature() {
        assert_eq!(semicircle_moment(1, 2), 1.0);
        assert_eq!(semicircle_moment(2, 4), 8.0);
        assert_eq!(semicircle_moment(3, 5), 0.0);
        for d in 1..=3 {
            let r = 2.0 * (d as f64).sqrt();
            for k in 0..=10u32 {
                let q = semicircle_integral(d, |x| x.powi(k as i32), -r, r);
                assert!((q - semicircle_moment(d, k)).abs() < 1e-8, "d={d} k={k}: {q}");
            }
        }
    }

    #[test]
    fn semicircle_cdf_matches_quadrature() {
        for d in 1..=3 {
            let r = 2.0 * (d as f64).sqrt();
            assert_eq!(semicircle_cdf(d, -r), 0.0);
            assert!((semicircle_cdf(d, 0.0) - 0.5).abs() < 1e-15);
            assert_eq!(semicircle_cdf(d, r), 1.0);
            for i in 0..=40 {
                let x = -r + 2.0 * r * i as f64 / 40.0;
                let q = semicircle_integral(d, |_| 1.0, -r, x);
                assert!((q - semicircle_cdf(d, x)).abs() < 1e-10, "d={d} x={x}");
            }
        }
    }

    #[test]
    fn kolmogorov_examples() {
        let zero = Spectrum::from_values(vec![0.0]).unwrap();
        assert!((kolmogorov_distance(&zero, 1) - 0.5).abs() < 1e-15);
        for d in 1..=3 {
            let m = 200;
            let q: Vec<f64> = (0..m).map(|i| semicircle_quantile(d, (i as f64 + 0.5) / m as f64)).collect();
            let esd = Spectrum::from_values(q).unwrap();
            assert!(kolmogorov_distance(&esd, d) <= 1.0 / m as f64 + 1e-10);
        }
    }

    #[test]
    fn kolmogorov_of_sampled_matrix() {
        let s = sample_lm(LMParams::new(60, 2, 0.5, 17).unwrap()).unwrap();
        let esd = spectrum_of(centered_scaled(&s).unwrap().h);
        assert!(kolmogorov_distance(&esd, 2) < 0.05);
    }

    #[test]
    fn eigenvalues_invariant_under_relabeling() {
        let s = sample_lm(LMParams::new(8, 2, 0.5, 21).unwrap()).unwrap();
        let x = s.complex();
        let perm = [0u32, 5, 3, 8, 1, 7, 2, 6, 4];
        let y = x.relabel(|v| perm[v as usize]).unwrap().with_skeleton(8).unwrap();
        let a = spectrum_of(adjacency_matrix(&x, 1).unwrap().to_dmatrix());
        let b = spectrum_of(adjacency_matrix(&y, 1).unwrap().to_dmatrix());
        for (u, v) in a.eigs.iter().zip(&b.eigs) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn test_function_strings() {
        for s in ["1", "x", "x^3", "poly:1,0,2", "abs", "pos", "abs_shift:0.5", "hinge:2.5", "bump:0,1", "2*abs"] {
            let f: TestFunction = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<TestFunction>().unwrap(), f);
        }
        assert!("sin".parse::<TestFunction>().is_err());
        assert!("bump:0,-1".parse::<TestFunction>().is_err());
        let p: TestFunction = "poly:1,0,2".parse().unwrap();
        assert_eq!(p.eval(3.0), 19.0);
        let h: TestFunction = "hinge:1".parse().unwrap();
        assert_eq!(h.eval(-3.0), 4.0);
        assert_eq!(h.eval(0.5), 0.0);
        let json = serde_json::to_string(&vec![TestFunction::Monomial(2)]).unwrap();
        assert_eq!(json, r#"["x^2"]"#);
    }

    proptest! {
        #[test]
        fn cdf_nondecreasing(d in 1usize..=4, a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(semicircle_cdf(d, lo) <= semicircle_cdf(d, hi));
        }
    }
}
