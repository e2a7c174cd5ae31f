use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact polynomial in p with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyP {
    coeffs: Vec<BigRational>,
}

impl PolyP {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyP { coeffs }
    }

    pub fn zero() -> Self {
        PolyP { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        PolyP::new(vec![BigRational::from_integer(c.into())])
    }

    /// The monomial p.
    pub fn p() -> Self {
        PolyP::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// Linear polynomial a + b·p.
    pub fn linear(a: i64, b: i64) -> Self {
        PolyP::new(vec![BigRational::from_integer(a.into()), BigRational::from_integer(b.into())])
    }

    /// E[(χ_p − p)^j] = p(1−p)^j + (1−p)(−p)^j for a Bernoulli(p) indicator χ_p.
    pub fn centered_moment(j: u32) -> Self {
        let p = PolyP::p();
        let q = PolyP::linear(1, -1);
        &(&p * &q.pow(j)) + &(&q * &(-&p).pow(j))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = PolyP::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        PolyP::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, p: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * p + c)
    }

    pub fn eval_f64(&self, p: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * p + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &PolyP {
    type Output = PolyP;
    fn add(self, rhs: &PolyP) -> PolyP {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        PolyP::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &PolyP {
    type Output = PolyP;
    fn sub(self, rhs: &PolyP) -> PolyP {
        self + &(-rhs)
    }
}

impl Neg for &PolyP {
    type Output = PolyP;
    fn neg(self) -> PolyP {
        PolyP::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PolyP {
    type Output = PolyP;
    fn mul(self, rhs: &PolyP) -> PolyP {
        if self.is_zero() || rhs.is_zero() {
            return PolyP::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyP::new(out)
    }
}

impl std::iter::Sum for PolyP {
    fn sum<I: Iterator<Item = PolyP>>(iter: I) -> Self {
        iter.fold(PolyP::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for PolyP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "p")?,
                _ => write!(f, "p^{i}")?,
            }
        }
        Ok(())
    }
}

/// Parses a decimal or fraction string ("0.8", "4/5", "1") into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, denom);
    Some(if neg { -r } else { r })
}
