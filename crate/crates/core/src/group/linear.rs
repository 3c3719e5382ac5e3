//! 2×2 special linear groups over small finite fields, optionally taken
//! modulo the center `{±1}`.

use std::collections::HashMap;

use super::field::FiniteField;
use super::perm::Perm;

/// Matrix `[[a, b], [c, d]]` stored row-major as field-element codes.
pub type Mat2 = [u8; 4];

#[derive(Clone, Debug)]
pub struct LinearModel {
    pub(crate) field: FiniteField,
    pub(crate) projective: bool,
    pub(crate) matrices: Vec<Mat2>,
    lookup: HashMap<Mat2, u32>,
}

impl LinearModel {
    pub fn new(field: FiniteField, projective: bool) -> Self {
        let q = field.order() as u8;
        let one = 1u8;
        let identity: Mat2 = [one, 0, 0, one];
        let mut matrices = vec![identity];
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = [a, b, c, d];
                        if m == identity || det(&field, &m) != one {
                            continue;
                        }
                        if projective && canonical(&field, &m) != m {
                            continue;
                        }
                        if projective && canonical(&field, &m) == identity {
                            continue;
                        }
                        matrices.push(m);
                    }
                }
            }
        }
        let lookup = matrices.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        LinearModel { field, projective, matrices, lookup }
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, idx: u32) -> Mat2 {
        self.matrices[idx as usize]
    }

    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        let key = if self.projective { canonical(&self.field, m) } else { *m };
        self.lookup.get(&key).copied()
    }

    pub fn compose(&self, x: u32, y: u32) -> u32 {
        let p = mat_mul(&self.field, &self.matrices[x as usize], &self.matrices[y as usize]);
        self.index_of(&p).expect("product of group elements stays in the group")
    }

    /// Action on the projective line: point `x < q` is `[x : 1]`, point `q` is `[1 : 0]`.
    pub fn projective_action(&self, idx: u32) -> Perm {
        let f = &self.field;
        let q = f.order() as usize;
        let [a, b, c, d] = self.matrices[idx as usize];
        let images = (0..=q)
            .map(|pt| {
                let (x, y) = if pt < q { (pt as u8, 1u8) } else { (1u8, 0u8) };
                let nx = f.add(f.mul(a, x), f.mul(b, y));
                let ny = f.add(f.mul(c, x), f.mul(d, y));
                if ny == 0 {
                    q as u8
                } else {
                    f.mul(nx, f.inv(ny))
                }
            })
            .collect();
        Perm::from_images(images).expect("invertible matrices act bijectively")
    }
}

pub(crate) fn det(f: &FiniteField, m: &Mat2) -> u8 {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

pub(crate) fn mat_mul(f: &FiniteField, x: &Mat2, y: &Mat2) -> Mat2 {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

/// Lexicographically smaller of `m` and `-m`.
pub(crate) fn canonical(f: &FiniteField, m: &Mat2) -> Mat2 {
    let neg = [f.neg(m[0]), f.neg(m[1]), f.neg(m[2]), f.neg(m[3])];
    if neg < *m {
        neg
    } else {
        *m
    }
}

pub(crate) fn format_mat(m: &Mat2) -> String {
    format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
}
