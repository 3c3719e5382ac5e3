//! Exact decimal or `a/b` fractions, so `0.2` reads as `2/10` rather than a float.

use hspsim_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::str::FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad fraction {s:?}"));
        let (num, den) = if let Some((a, b)) = s.split_once('/') {
            (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 15 {
                return Err(bad());
            }
            let den = 10i64.pow(frac.len() as u32);
            let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let part: i64 = frac.parse().map_err(|_| bad())?;
            let signed = if int.starts_with('-') { -part } else { part };
            (whole.checked_mul(den).and_then(|w| w.checked_add(signed)).ok_or_else(bad)?, den)
        } else {
            (s.parse::<i64>().map_err(|_| bad())?, 1)
        };
        if den <= 0 {
            return Err(bad());
        }
        Ok(Fraction { num, den })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        let f: Fraction = "0.2".parse().unwrap();
        assert_eq!(f, Fraction { num: 2, den: 10 });
        let f: Fraction = "1/5".parse().unwrap();
        assert_eq!((f.num, f.den), (1, 5));
        let f: Fraction = "3".parse().unwrap();
        assert_eq!((f.num, f.den), (3, 1));
        let f: Fraction = "-1.25".parse().unwrap();
        assert_eq!((f.num, f.den), (-125, 100));
        for bad in ["1/0", "x", "0.", "1/-2", "0.1e3"] {
            assert!(bad.parse::<Fraction>().is_err(), "{bad}");
        }
    }
}
