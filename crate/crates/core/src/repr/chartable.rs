//! Character tables, from constructed irreps or from the class algebra.

use nalgebra::{DMatrix, Dyn, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::generic::compare_characters;
use super::Irrep;
use crate::error::{Error, Result};
use crate::format::fmt_complex;
use crate::group::{Element, FiniteGroup};
use crate::linalg::{c, CMat, ZERO};

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub representative: String,
    #[serde(skip)]
    pub rep_element: Element,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group_order: usize,
    pub classes: Vec<ClassInfo>,
    pub labels: Vec<String>,
    pub degrees: Vec<usize>,
    /// `values[irrep][class]`
    pub values: Vec<Vec<Complex64>>,
    class_of: Vec<usize>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

impl CharacterTable {
    pub fn from_irreps(group: &FiniteGroup, irreps: &[Irrep]) -> Self {
        let classes = group.conjugacy_classes();
        let class_of = group.class_index_map(&classes);
        let values = irreps
            .iter()
            .map(|r| classes.iter().map(|cl| r.character(cl.representative)).collect())
            .collect();
        CharacterTable {
            group_order: group.order(),
            classes: classes
                .iter()
                .map(|cl| ClassInfo {
                    representative: group.format_element(cl.representative),
                    rep_element: cl.representative,
                    size: cl.size(),
                })
                .collect(),
            labels: irreps.iter().map(|r| r.label().to_string()).collect(),
            degrees: irreps.iter().map(|r| r.degree()).collect(),
            values,
            class_of,
        }
    }

    /// Burnside's method: the central characters `ω_k = |C_k| χ(z_k)/d` are the
    /// common eigenvectors of the class multiplication matrices
    /// `(M_i)_{jk} = #{x ∈ C_i : x⁻¹ z_k ∈ C_j}`.
    pub fn from_class_algebra(group: &FiniteGroup, seed: u64) -> Result<Self> {
        let classes = group.conjugacy_classes();
        let class_of = group.class_index_map(&classes);
        let r = classes.len();
        let n = group.order();
        let mut coeff = vec![0u64; r * r * r];
        for (k, cl) in classes.iter().enumerate() {
            let z = cl.representative;
            for x in group.elements() {
                let i = class_of[x.index()];
                let j = class_of[group.compose(group.inverse(x), z).index()];
                coeff[(i * r + j) * r + k] += 1;
            }
        }
        let mut last = None;
        for attempt in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            let weights: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
            let m = DMatrix::<Complex64>::from_fn(r, r, |j, k| {
                c((0..r).map(|i| weights[i] * coeff[(i * r + j) * r + k] as f64).sum())
            });
            match central_characters(&m, r) {
                Ok(omegas) => {
                    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(r);
                    for omega in omegas {
                        let s: f64 = omega
                            .iter()
                            .zip(&classes)
                            .map(|(w, cl)| w.norm_sqr() / cl.size() as f64)
                            .sum();
                        let d = (n as f64 / s).sqrt();
                        let degree = d.round();
                        if (d - degree).abs() > 1e-6 {
                            return Err(Error::NonIntegral { value: d, context: "irrep degree".into() });
                        }
                        let chi = omega
                            .iter()
                            .zip(&classes)
                            .map(|(w, cl)| w * degree / cl.size() as f64)
                            .collect();
                        rows.push((degree as usize, chi));
                    }
                    rows.sort_by(|(da, xa), (db, xb)| da.cmp(db).then_with(|| compare_characters(xa, xb)));
                    let table = CharacterTable {
                        group_order: n,
                        classes: classes
                            .iter()
                            .map(|cl| ClassInfo {
                                representative: group.format_element(cl.representative),
                                rep_element: cl.representative,
                                size: cl.size(),
                            })
                            .collect(),
                        labels: (0..r).map(|i| format!("chi{i}")).collect(),
                        degrees: rows.iter().map(|(d, _)| *d).collect(),
                        values: rows.into_iter().map(|(_, v)| v).collect(),
                        class_of,
                    };
                    let sum: usize = table.degrees.iter().map(|d| d * d).sum();
                    if sum != n {
                        return Err(Error::IncompleteIrreps { sum, order: n });
                    }
                    return Ok(table);
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap())
    }

    pub fn class_index(&self, x: Element) -> usize {
        self.class_of[x.index()]
    }

    pub fn value(&self, irrep: usize, x: Element) -> Complex64 {
        self.values[irrep][self.class_index(x)]
    }

    pub fn centralizer_order(&self, class: usize) -> usize {
        self.group_order / self.classes[class].size
    }

    /// Largest defect of `(1/|G|) Σ_g χ_a(g) χ_b(g)* = δ_ab`.
    pub fn row_orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ra) in self.values.iter().enumerate() {
            for (b, rb) in self.values.iter().enumerate() {
                let s: Complex64 = ra
                    .iter()
                    .zip(rb)
                    .zip(&self.classes)
                    .map(|((x, y), cl)| x * y.conj() * cl.size as f64)
                    .sum::<Complex64>()
                    / self.group_order as f64;
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - c(target)).norm());
            }
        }
        worst
    }

    /// Largest defect of `Σ_ρ χ_ρ(x) χ_ρ(y)* = δ_xy |C(x)|`.
    pub fn column_orthogonality_defect(&self) -> f64 {
        let r = self.classes.len();
        let mut worst: f64 = 0.0;
        for x in 0..r {
            for y in 0..r {
                let s: Complex64 = self.values.iter().map(|row| row[x] * row[y].conj()).sum();
                let target = if x == y { self.centralizer_order(x) as f64 } else { 0.0 };
                worst = worst.max((s - c(target)).norm());
            }
        }
        worst
    }

    /// True when the two tables agree up to a permutation of rows.
    pub fn matches_up_to_row_permutation(&self, other: &CharacterTable, tol: f64) -> bool {
        if self.values.len() != other.values.len() || self.classes.len() != other.classes.len() {
            return false;
        }
        let mut used = vec![false; other.values.len()];
        self.values.iter().all(|row| {
            let hit = other.values.iter().enumerate().position(|(i, o)| {
                !used[i] && row.iter().zip(o).all(|(a, b)| (a - b).norm() < tol)
            });
            match hit {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }

    fn header(&self) -> Vec<String> {
        let mut h = vec!["class_rep".to_string(), "class_size".to_string()];
        h.extend(self.labels.iter().cloned());
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .enumerate()
            .map(|(ci, cl)| {
                let mut row = vec![cl.representative.clone(), cl.size.to_string()];
                row.extend(self.values.iter().map(|v| fmt_complex(v[ci])));
                row
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header())?;
        for row in self.rows() {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(JsonTable {
            columns: self.header(),
            rows: self.rows(),
            _marker: std::marker::PhantomData,
        })?)
    }
}

/// Normalized common eigenvectors (first entry 1) of the combined class matrix.
fn central_characters(m: &CMat, r: usize) -> Result<Vec<Vec<Complex64>>> {
    let schur = Schur::<Complex64, Dyn>::new(m.clone());
    let eigenvalues = schur
        .eigenvalues()
        .ok_or_else(|| Error::DegenerateSplit("Schur form did not converge".into()))?;
    let ev: Vec<Complex64> = eigenvalues.iter().copied().collect();
    for a in 0..r {
        for b in a + 1..r {
            if (ev[a] - ev[b]).norm() < 1e-6 {
                return Err(Error::DegenerateSplit("coincident class-algebra eigenvalues".into()));
            }
        }
    }
    ev.iter()
        .map(|&lambda| {
            let shifted = m - CMat::identity(r, r) * lambda;
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.expect("requested right singular vectors");
            let (idx, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            let v: Vec<Complex64> = v_t.row(idx).iter().map(|z| z.conj()).collect();
            if v[0].norm() < 1e-9 {
                return Err(Error::DegenerateSplit("central character vanishes at identity".into()));
            }
            let v0 = v[0];
            Ok(v.into_iter().map(|z| if z == ZERO { z } else { z / v0 }).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::repr::{irreps_for, irreps_generic, irreps_symmetric};

    #[test]
    fn class_algebra_matches_constructed_irreps() {
        let groups = [
            make_symmetric(4).unwrap(),
            make_dihedral(5).unwrap(),
            make_psl2(5).unwrap(),
            make_cyclic(7).unwrap(),
        ];
        for g in &groups {
            let burnside = CharacterTable::from_class_algebra(g, 1).unwrap();
            let direct = CharacterTable::from_irreps(g, &irreps_for(g).unwrap());
            assert!(burnside.row_orthogonality_defect() < 1e-9);
            assert!(burnside.column_orthogonality_defect() < 1e-9);
            assert!(burnside.matches_up_to_row_permutation(&direct, 1e-8), "{}", g.kind());
        }
    }

    #[test]
    fn generic_table_is_canonically_ordered() {
        let g = make_psl2(5).unwrap();
        let burnside = CharacterTable::from_class_algebra(&g, 3).unwrap();
        let generic = CharacterTable::from_irreps(&g, &irreps_generic(&g, 1e-6).unwrap());
        assert_eq!(burnside.degrees, vec![1, 3, 3, 4, 5]);
        assert_eq!(burnside.degrees, generic.degrees);
        for (a, b) in burnside.values.iter().zip(&generic.values) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn csv_export() {
        let g = make_symmetric(3).unwrap();
        let t = CharacterTable::from_irreps(&g, &irreps_symmetric(3).unwrap());
        let csv = t.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "class_rep,class_size,[3],\"[2,1]\",\"[1,1,1]\"");
        assert_eq!(lines.next().unwrap(), "(),1,1+0i,2+0i,1+0i");
        assert_eq!(lines.next().unwrap(), "(1 2 3),2,1+0i,-1+0i,1+0i");
        assert_eq!(lines.next().unwrap(), "(2 3),3,1+0i,0+0i,-1+0i");
        let json = t.to_json().unwrap();
        assert_eq!(json["columns"][3], "[2,1]");
        assert_eq!(json["rows"][2][4], "-1+0i");
    }
}
