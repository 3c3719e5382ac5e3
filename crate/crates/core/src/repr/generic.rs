//! Numerical decomposition of the regular representation.
//!
//! A random Hermitian element of the commutant of the left regular action has
//! the form `A[x][y] = a(x⁻¹y)` with `a(z⁻¹) = conj(a(z))`. Its eigenspaces are
//! invariant under left translation and, for generic `a`, each one carries a
//! single irreducible copy. One eigenspace per character gives the full list.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Irrep;
use crate::error::{Error, Result};
use crate::group::{ConjugacyClass, Element, FiniteGroup};
use crate::linalg::{complex_gaussian, CMat, ZERO};

pub const DEFAULT_SEED: u64 = 0x5eed;
const MAX_ATTEMPTS: u64 = 5;

pub fn irreps_generic(group: &FiniteGroup, tol: f64, seed: u64) -> Result<Vec<Irrep>> {
    if group.order() > super::IRREP_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "regular-representation decomposition limited to order {}",
            super::IRREP_ORDER_CAP
        )));
    }
    let classes = group.conjugacy_classes();
    let mut last_err = None;
    for attempt in 0..MAX_ATTEMPTS {
        match attempt_decomposition(group, &classes, tol, seed.wrapping_add(attempt)) {
            Ok(irreps) => return Ok(irreps),
            Err(e @ Error::DegenerateSplit(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

fn attempt_decomposition(
    group: &FiniteGroup,
    classes: &[ConjugacyClass],
    tol: f64,
    seed: u64,
) -> Result<Vec<Irrep>> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![ZERO; n];
    for z in group.elements() {
        let zi = group.inverse(z);
        if zi < z {
            continue;
        }
        if zi == z {
            a[z.index()] = Complex64::new(complex_gaussian(&mut rng).re, 0.0);
        } else {
            let v = complex_gaussian(&mut rng);
            a[z.index()] = v;
            a[zi.index()] = v.conj();
        }
    }
    let inv: Vec<Element> = group.elements().map(|x| group.inverse(x)).collect();
    let m = CMat::from_fn(n, n, |x, y| {
        a[group.compose(inv[x], Element::new(y)).index()]
    });
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    // cluster sorted eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &i in &order {
        let v = eig.eigenvalues[i];
        if v - prev > tol || clusters.is_empty() {
            clusters.push(vec![i]);
        } else {
            clusters.last_mut().unwrap().push(i);
        }
        prev = v;
    }

    let reps: Vec<Element> = classes.iter().map(|c| c.representative).collect();
    let mut found: Vec<(Vec<Complex64>, CMat)> = Vec::new();
    for cluster in &clusters {
        let d = cluster.len();
        let v = CMat::from_fn(n, d, |r, col| eig.eigenvectors[(r, cluster[col])]);
        // χ(g) = Σ_i <v_i, L_g v_i>, with (L_g v)[y] = v[g⁻¹ y]
        let chi: Vec<Complex64> = reps
            .iter()
            .map(|&g| {
                let gi = group.inverse(g);
                let mut acc = ZERO;
                for y in 0..n {
                    let src = group.compose(gi, Element::new(y)).index();
                    for col in 0..d {
                        acc += v[(y, col)].conj() * v[(src, col)];
                    }
                }
                acc
            })
            .collect();
        let norm: f64 = classes
            .iter()
            .zip(&chi)
            .map(|(c, x)| c.size() as f64 * x.norm_sqr())
            .sum::<f64>()
            / n as f64;
        if (norm - 1.0).abs() > 1e-6 || (chi[0].re - d as f64).abs() > 1e-6 {
            return Err(Error::DegenerateSplit(format!(
                "eigenspace of dimension {d} has character norm {norm:.6}"
            )));
        }
        let duplicate = found
            .iter()
            .any(|(other, _)| other.iter().zip(&chi).all(|(p, q)| (p - q).norm() < 1e-6));
        if !duplicate {
            found.push((chi, v));
        }
    }

    let total: usize = found.iter().map(|(_, v)| v.ncols().pow(2)).sum();
    if total != n {
        return Err(Error::DegenerateSplit(format!("degrees squared sum to {total}, expected {n}")));
    }

    found.sort_by(|(xa, va), (xb, vb)| {
        va.ncols().cmp(&vb.ncols()).then_with(|| compare_characters(xa, xb))
    });

    Ok(found
        .into_par_iter()
        .enumerate()
        .map(|(idx, (_, v))| {
            let vh = v.adjoint();
            let matrices = group
                .elements()
                .map(|g| {
                    let gi = group.inverse(g);
                    let shifted = CMat::from_fn(n, v.ncols(), |y, col| {
                        v[(group.compose(gi, Element::new(y)).index(), col)]
                    });
                    &vh * shifted
                })
                .collect();
            Irrep::new(format!("rho{idx}"), matrices)
        })
        .collect())
}

/// Lexicographic on (real, imaginary) of each class value, ignoring noise below 1e-8.
pub(crate) fn compare_characters(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    let key = |x: f64| (x * 1e8).round() as i64;
    for (x, y) in a.iter().zip(b) {
        let ord = key(x.re).cmp(&key(y.re)).then(key(x.im).cmp(&key(y.im)));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}
