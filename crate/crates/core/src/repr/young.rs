//! Young's orthogonal form for the symmetric groups.

use std::collections::{HashMap, VecDeque};

use super::Irrep;
use crate::error::{Error, Result};
use crate::group::perm::Perm;
use crate::linalg::{c, CMat};

/// Partitions of `n` in descending lexicographic order: (n), (n-1,1), ...
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn partition_label(shape: &[usize]) -> String {
    let parts: Vec<String> = shape.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// A standard tableau stored as `(row, col)` of each entry `0..n`.
type Tableau = Vec<(usize, usize)>;

pub fn standard_tableaux(shape: &[usize]) -> Vec<Tableau> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut cur = Vec::with_capacity(n);
    fn rec(
        shape: &[usize],
        filled: &mut Vec<usize>,
        cur: &mut Tableau,
        n: usize,
        out: &mut Vec<Tableau>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for r in 0..shape.len() {
            let col = filled[r];
            let fits = col < shape[r] && (r == 0 || filled[r - 1] > col);
            if fits {
                filled[r] += 1;
                cur.push((r, col));
                rec(shape, filled, cur, n, out);
                cur.pop();
                filled[r] -= 1;
            }
        }
    }
    rec(shape, &mut filled, &mut cur, n, &mut out);
    out
}

/// Matrix of the adjacent transposition `(i+1 i+2)` (0-based `i`).
fn adjacent_matrix(tableaux: &[Tableau], index: &HashMap<Tableau, usize>, i: usize) -> CMat {
    let d = tableaux.len();
    let mut m = CMat::zeros(d, d);
    for (a, t) in tableaux.iter().enumerate() {
        let content = |cell: (usize, usize)| cell.1 as i64 - cell.0 as i64;
        let r = (content(t[i + 1]) - content(t[i])) as f64;
        m[(a, a)] = c(1.0 / r);
        if r.abs() > 1.0 {
            let mut swapped = t.clone();
            swapped.swap(i, i + 1);
            let b = index[&swapped];
            m[(b, a)] = c((1.0 - 1.0 / (r * r)).sqrt());
        }
    }
    m
}

pub fn irrep_for_shape(shape: &[usize]) -> Irrep {
    let n: usize = shape.iter().sum();
    let tableaux = standard_tableaux(shape);
    let index: HashMap<Tableau, usize> =
        tableaux.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let d = tableaux.len();
    let gens: Vec<(Perm, CMat)> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut imgs: Vec<u8> = (0..n as u8).collect();
            imgs.swap(i, i + 1);
            (Perm::from_images(imgs).unwrap(), adjacent_matrix(&tableaux, &index, i))
        })
        .collect();
    let order: usize = (1..=n).product();
    let mut matrices: Vec<Option<CMat>> = vec![None; order];
    matrices[0] = Some(CMat::identity(d, d));
    let mut queue = VecDeque::from([Perm::identity(n)]);
    while let Some(g) = queue.pop_front() {
        let mg = matrices[g.rank()].clone().unwrap();
        for (s, ms) in &gens {
            let sg = s.compose(&g);
            let r = sg.rank();
            if matrices[r].is_none() {
                matrices[r] = Some(ms * &mg);
                queue.push_back(sg);
            }
        }
    }
    Irrep::new(partition_label(shape), matrices.into_iter().map(Option::unwrap).collect())
}

pub fn irreps_symmetric(n: usize) -> Result<Vec<Irrep>> {
    if !(1..=5).contains(&n) {
        return Err(Error::OutOfRange(format!("symmetric irreps need 1 <= n <= 5, got {n}")));
    }
    Ok(partitions(n).iter().map(|p| irrep_for_shape(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_symmetric;

    #[test]
    fn degrees_follow_partition_order() {
        let deg = |n| irreps_symmetric(n).unwrap().iter().map(|r| r.degree()).collect::<Vec<_>>();
        assert_eq!(deg(3), vec![1, 2, 1]);
        assert_eq!(deg(4), vec![1, 3, 2, 3, 1]);
        assert_eq!(deg(5), vec![1, 4, 5, 6, 5, 4, 1]);
        assert_eq!(partitions(4).len(), 5);
    }

    #[test]
    fn orthogonal_form_is_a_real_representation() {
        for n in 1..=5 {
            let g = make_symmetric(n).unwrap();
            for r in irreps_symmetric(n).unwrap() {
                assert!(r.is_real());
                assert!(r.unitarity_defect() < 1e-12);
                if n <= 4 {
                    assert!(r.homomorphism_defect(&g) < 1e-12, "{}", r.label());
                }
            }
        }
    }

    #[test]
    fn standard_irrep_of_s3_has_zero_trace_on_transpositions() {
        let g = make_symmetric(3).unwrap();
        let std = &irreps_symmetric(3).unwrap()[1];
        let t = g.parse_element("(1 2)").unwrap();
        assert!(std.character(t).norm() < 1e-12);
        let sign = &irreps_symmetric(3).unwrap()[2];
        assert!((sign.character(t).re + 1.0).abs() < 1e-12);
    }
}
