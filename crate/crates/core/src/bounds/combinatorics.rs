//! Partition numbers, hook-length degrees and the binomial tail estimate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::repr::young::partitions;

/// Euler's pentagonal recurrence `p(n) = Σ_k (-1)^{k+1} [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)]`.
pub fn partition_number(n: usize) -> BigUint {
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p[n].to_biguint().expect("partition numbers are positive")
}

/// Degree of the S_n irrep for `shape`, `n! / Π hooks`.
pub fn hook_degree(shape: &[usize]) -> BigUint {
    let n: usize = shape.iter().sum();
    let mut num = BigUint::one();
    for i in 2..=n {
        num *= i;
    }
    let mut den = BigUint::one();
    for (row, &len) in shape.iter().enumerate() {
        for col in 0..len {
            let below = shape[row + 1..].iter().filter(|&&l| l > col).count();
            den *= len - col + below;
        }
    }
    num / den
}

/// Every partition of `n` (descending lexicographic) with its degree.
pub fn symmetric_degrees(n: usize) -> Vec<(Vec<usize>, BigUint)> {
    partitions(n)
        .into_iter()
        .map(|shape| {
            let d = hook_degree(&shape);
            (shape, d)
        })
        .collect()
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Natural log of a positive big integer, robust beyond the f64 range.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "log of a non-positive rational");
    ln_big(&x.numer().to_biguint().unwrap()) - ln_big(&x.denom().to_biguint().unwrap())
}

#[derive(Clone, Debug)]
pub struct BinomialTail {
    pub t: u64,
    pub exact: BigRational,
    /// natural log of the closed-form bound
    pub ln_bound: f64,
}

impl BinomialTail {
    pub fn bound(&self) -> f64 {
        self.ln_bound.exp()
    }

    pub fn ln_exact(&self) -> f64 {
        ln_rational(&self.exact)
    }

    pub fn exact_le_bound(&self) -> bool {
        self.ln_exact() <= self.ln_bound + 1e-12 * self.ln_bound.abs().max(1.0)
    }
}

/// `Σ_{ℓ=n-t}^n C(n,ℓ) α^ℓ β^{n-ℓ}` with `t = ⌊n/c⌋`, against the closed form
/// `(α (c e (α+β)/α)^{1/c})^n`.
pub fn binomial_tail(alpha: &BigRational, beta: &BigRational, n: u64, c: f64) -> Result<BinomialTail> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::Hypothesis("binomial tail needs alpha, beta > 0".into()));
    }
    let c_exact = BigRational::from_float(c)
        .ok_or_else(|| Error::Hypothesis(format!("c = {c} is not finite")))?;
    let ratio = (alpha + beta) / beta;
    // The union-bound step never uses the hypothesis, so the boundary value is
    // accepted.
    if c_exact < ratio {
        return Err(Error::Hypothesis(format!(
            "c = {c} must be at least (alpha+beta)/beta = {}",
            ratio.to_f64().unwrap_or(f64::INFINITY)
        )));
    }
    let t = (n as f64 / c).floor() as u64;
    let mut exact = BigRational::zero();
    let mut binom = BigUint::one(); // C(n, n-t) built incrementally below
    for j in 0..t {
        binom = binom * (n - j) / (j + 1);
    }
    // ℓ runs from n-t up to n; C(n, ℓ+1) = C(n, ℓ) (n-ℓ)/(ℓ+1)
    for l in (n - t)..=n {
        let term = BigRational::from_integer(BigInt::from(binom.clone()))
            * pow_rational(alpha, l)
            * pow_rational(beta, n - l);
        exact += term;
        if l < n {
            binom = binom * (n - l) / (l + 1);
        }
    }
    let a = alpha.to_f64().unwrap();
    let b = beta.to_f64().unwrap();
    let ln_bound = n as f64 * (a.ln() + (c * std::f64::consts::E * (a + b) / a).ln() / c);
    Ok(BinomialTail { t, exact, ln_bound })
}

pub fn pow_rational(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}
