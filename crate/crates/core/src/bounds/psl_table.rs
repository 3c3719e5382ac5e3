//! Closed-form degrees and involution values for PSL(2,q).
//!
//! Rows follow the classical parametrization: trivial, Steinberg `ψ`, the
//! discrete series `θ_k` (degree q-1), the principal series `χ_j` (degree
//! q+1) and the two half-degree irreps. Rows whose value at `h` alternates in
//! sign with the parameter are split by value.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use super::{CharEntry, CharacterData};
use crate::error::{Error, Result};
use crate::group::field::prime_power;

#[derive(Clone, Debug, Serialize)]
pub struct PslRow {
    pub name: String,
    pub params: String,
    pub degree: u64,
    /// `(value at h, number of irreps with that value)`
    pub values: Vec<(i64, u64)>,
}

impl PslRow {
    pub fn count(&self) -> u64 {
        self.values.iter().map(|(_, n)| n).sum()
    }

    fn single(name: &str, params: &str, count: u64, degree: u64, chi: i64) -> Self {
        PslRow { name: name.into(), params: params.into(), degree, values: vec![(chi, count)] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PslTable {
    pub q: u64,
    pub order: u64,
    /// `|C(h)|`: dihedral of order q-1 (q ≡ 1 mod 4), q+1 (q ≡ 3 mod 4), or
    /// the unipotent radical of order q (q even)
    pub centralizer_order: u64,
    /// the involution class size as quoted alongside the classical table
    pub quoted_class_size: u64,
    pub rows: Vec<PslRow>,
}

fn sign(e: u64) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Splits `n` consecutive parameters `i = 1..=n` by the parity of `i`.
fn by_parity(n: u64, odd_value: i64, even_value: i64) -> Vec<(i64, u64)> {
    let odd = n.div_ceil(2);
    let even = n / 2;
    let mut v = Vec::new();
    if odd > 0 {
        v.push((odd_value, odd));
    }
    if even > 0 {
        v.push((even_value, even));
    }
    v
}

pub fn character_table_psl2(q: u64) -> Result<PslTable> {
    let (p, _) = prime_power(q)
        .ok_or_else(|| Error::OutOfRange(format!("q = {q} is not a prime power")))?;
    if q < 4 {
        return Err(Error::OutOfRange(format!("PSL(2,q) tables need q >= 4, got {q}")));
    }
    if q > 1 << 20 {
        return Err(Error::OutOfRange(format!("q = {q} too large for exact tables")));
    }
    let table = if p == 2 {
        PslTable {
            q,
            order: q * (q * q - 1),
            centralizer_order: q,
            quoted_class_size: q * q - 1,
            rows: vec![
                PslRow::single("1", "", 1, 1, 1),
                PslRow::single("psi", "", 1, q, 0),
                PslRow::single("theta_k", &format!("k=1..{}", q / 2), q / 2, q - 1, -1),
                PslRow::single("chi_j", &format!("j=1..{}", (q - 2) / 2), (q - 2) / 2, q + 1, 1),
            ],
        }
    } else if q % 4 == 1 {
        // χ_j at h is 2(-1)^{j/2} for j = 2i
        PslTable {
            q,
            order: q * (q * q - 1) / 2,
            centralizer_order: q - 1,
            quoted_class_size: q * (q - 1) / 2,
            rows: vec![
                PslRow::single("1", "", 1, 1, 1),
                PslRow::single("psi", "", 1, q, 1),
                PslRow::single("theta_k", &format!("k=2,4,..,{}", (q - 1) / 2), (q - 1) / 4, q - 1, 0),
                PslRow {
                    name: "chi_j".into(),
                    params: format!("j=2,4,..,{}", (q - 5) / 2),
                    degree: q + 1,
                    values: by_parity((q - 5) / 4, -2, 2),
                },
                PslRow::single("zeta_l", "l=1,2", 2, (q + 1) / 2, sign((q - 1) / 4)),
            ],
        }
    } else {
        // θ_k at h is 2(-1)^{k/2+1} for k = 2i
        PslTable {
            q,
            order: q * (q * q - 1) / 2,
            centralizer_order: q + 1,
            quoted_class_size: q * (q + 1) / 2,
            rows: vec![
                PslRow::single("1", "", 1, 1, 1),
                PslRow::single("psi", "", 1, q, -1),
                PslRow {
                    name: "theta_k".into(),
                    params: format!("k=2,4,..,{}", (q - 3) / 2),
                    degree: q - 1,
                    values: by_parity((q - 3) / 4, 2, -2),
                },
                PslRow::single("chi_j", &format!("j=2,4,..,{}", (q - 3) / 2), (q - 3) / 4, q + 1, 0),
                PslRow::single("eta_l", "l=1,2", 2, (q - 1) / 2, sign((q + 1) / 4 + 1)),
            ],
        }
    };
    Ok(table)
}

impl PslTable {
    pub fn class_size(&self) -> u64 {
        self.order / self.centralizer_order
    }

    pub fn irrep_count(&self) -> u64 {
        self.rows.iter().map(PslRow::count).sum()
    }

    pub fn sum_degree_squares(&self) -> u64 {
        self.rows.iter().map(|r| r.count() * r.degree * r.degree).sum()
    }

    /// `Σ |χ(h)|²`, which must equal `|C(h)|`.
    pub fn h_column_norm(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter().map(|&(v, n)| (v * v) as u64 * n))
            .sum()
    }

    /// `Σ d χ(h)`, which must vanish (orthogonality with the identity column).
    pub fn identity_h_product(&self) -> i64 {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter().map(move |&(v, n)| v * (n * r.degree) as i64))
            .sum()
    }

    /// Sorted `(degree, χ(h))` pairs with multiplicity.
    pub fn pairs(&self) -> Vec<(u64, i64)> {
        let mut out: Vec<(u64, i64)> = self
            .rows
            .iter()
            .flat_map(|r| {
                r.values
                    .iter()
                    .flat_map(move |&(v, n)| std::iter::repeat_n((r.degree, v), n as usize))
            })
            .collect();
        out.sort();
        out
    }

    pub fn character_data(&self) -> CharacterData {
        let mut entries = Vec::new();
        for r in &self.rows {
            for &(v, n) in &r.values {
                if n == 0 {
                    continue;
                }
                let label = if r.values.len() > 1 {
                    format!("{}[chi(h)={v}]", r.name)
                } else {
                    r.name.clone()
                };
                entries.push(CharEntry {
                    label,
                    degree: BigUint::from(r.degree),
                    chi_h: BigInt::from(v),
                    count: BigUint::from(n),
                });
            }
        }
        entries.retain(|e| e.count >= BigUint::one());
        CharacterData { group_order: BigUint::from(self.order), entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_patterns() {
        for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 49] {
            let t = character_table_psl2(q).unwrap();
            assert_eq!(t.sum_degree_squares(), t.order, "q = {q}");
            assert_eq!(t.h_column_norm(), t.centralizer_order, "q = {q}");
            assert_eq!(t.identity_h_product(), 0, "q = {q}");
            let expected_count = if q % 2 == 0 { q + 1 } else { (q + 5) / 2 };
            assert_eq!(t.irrep_count(), expected_count, "q = {q}");
        }
    }

    #[test]
    fn q5_and_q13() {
        let t = character_table_psl2(5).unwrap();
        assert_eq!(t.pairs(), vec![(1, 1), (3, -1), (3, -1), (4, 0), (5, 1)]);
        assert_eq!(t.class_size(), 15);
        assert_eq!(t.quoted_class_size, 10);
        let t13 = character_table_psl2(13).unwrap();
        assert_eq!(t13.order, 1092);
        assert_eq!(t13.sum_degree_squares(), 1092);
        let sum_d: u64 = t13.rows.iter().map(|r| r.count() * r.degree).sum();
        assert_eq!(sum_d, 92);
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(character_table_psl2(6).is_err());
        assert!(character_table_psl2(3).is_err());
    }
}
