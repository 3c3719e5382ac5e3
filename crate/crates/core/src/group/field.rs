//! Small finite fields with table-driven arithmetic.
//!
//! Elements are encoded as integers `0..q`: the coefficient vector of the
//! polynomial-basis representative read in base `p` (constant term least
//! significant). Extension fields use fixed irreducible polynomials:
//! F4 = F2[x]/(x²+x+1), F8 = F2[x]/(x³+x+1), F9 = F3[x]/(x²+1).

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Returns `(p, m)` with `q = p^m` if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

impl FiniteField {
    /// Prime fields up to 251 and the extension fields F4, F8, F9.
    pub fn new(q: u32) -> Result<Self> {
        let (p, m) = prime_power(q as u64)
            .ok_or_else(|| Error::OutOfRange(format!("q = {q} is not a prime power")))?;
        let p = p as u32;
        // modulus coefficients (monic, low degree first, leading coefficient omitted)
        let modulus: Vec<u32> = match (p, m) {
            (_, 1) if q <= 251 => vec![],
            (2, 2) => vec![1, 1],
            (2, 3) => vec![1, 1, 0],
            (3, 2) => vec![1, 0],
            _ => {
                return Err(Error::OutOfRange(format!(
                    "field of order {q} not supported (prime q <= 251, or q in {{4, 8, 9}})"
                )))
            }
        };
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(m as usize);
            let mut x = x;
            for _ in 0..m {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum) as u8;
                let prod = if m == 1 {
                    (a * b) % p
                } else {
                    let mut full = vec![0u32; 2 * m as usize - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            full[i + j] = (full[i + j] + x * y) % p;
                        }
                    }
                    // reduce using x^m = -(modulus)
                    for deg in (m as usize..full.len()).rev() {
                        let c = full[deg];
                        if c == 0 {
                            continue;
                        }
                        full[deg] = 0;
                        for (i, &mc) in modulus.iter().enumerate() {
                            let idx = deg - m as usize + i;
                            full[idx] = (full[idx] + (p - (c * mc) % p)) % p;
                        }
                    }
                    encode(&full[..m as usize])
                };
                mul[(a * q + b) as usize] = prod as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or_else(|| Error::OutOfRange(format!("modulus for q = {q} is reducible")))?
                    as u8;
            }
        }
        Ok(FiniteField { p, m, q, add, mul, neg, inv })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` returns 0.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}
