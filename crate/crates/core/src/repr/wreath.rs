//! Irreps of `S_n wr S_2` built from pairs of S_n irreps.
//!
//! Write `t = (e,e,1)`. Then `(π,μ,1) = (π,μ,0)·t` and `t(π,μ,0)t = (μ,π,0)`.
//! For each S_n irrep `σ_i` there are two extensions of `σ_i ⊗ σ_i`, with `t`
//! acting as `±SWAP`; each unordered pair `i < j` gives one induced irrep whose
//! normal-subgroup part is `σ_i(π)⊗σ_j(μ) ⊕ σ_i(μ)⊗σ_j(π)` and where `t` swaps
//! the two blocks.

use super::young::{partition_label, partitions};
use super::{irreps_symmetric, Irrep};
use crate::error::{Error, Result};
use crate::group::make_wreath_s2;
use crate::linalg::{c, CMat};

fn swap_matrix(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            s[(a * d + b, b * d + a)] = c(1.0);
        }
    }
    s
}

pub fn irreps_wreath(n: usize) -> Result<Vec<Irrep>> {
    if !(2..=4).contains(&n) {
        return Err(Error::OutOfRange(format!("wreath irreps need 2 <= n <= 4, got {n}")));
    }
    let group = make_wreath_s2(n)?;
    let base = irreps_symmetric(n)?;
    let labels: Vec<String> = partitions(n).iter().map(|p| partition_label(p)).collect();
    let triples: Vec<_> = group.elements().map(|x| group.wreath_triple(x).unwrap()).collect();

    let mut out = Vec::new();
    for (i, si) in base.iter().enumerate() {
        let d = si.degree();
        let swap = swap_matrix(d);
        for sign in [1.0, -1.0] {
            let t = &swap * c(sign);
            let matrices = triples
                .iter()
                .map(|&(pi, mu, b)| {
                    let m = si.matrix(pi).kronecker(si.matrix(mu));
                    if b == 0 {
                        m
                    } else {
                        m * &t
                    }
                })
                .collect();
            let name = if sign > 0.0 { "theta" } else { "theta'" };
            out.push(Irrep::new(format!("{name}{}", labels[i]), matrices));
        }
    }
    for (i, si) in base.iter().enumerate() {
        for (j, sj) in base.iter().enumerate().skip(i + 1) {
            let block = si.degree() * sj.degree();
            let mut t = CMat::zeros(2 * block, 2 * block);
            for a in 0..block {
                t[(a, block + a)] = c(1.0);
                t[(block + a, a)] = c(1.0);
            }
            let matrices = triples
                .iter()
                .map(|&(pi, mu, b)| {
                    let mut m = CMat::zeros(2 * block, 2 * block);
                    m.view_mut((0, 0), (block, block))
                        .copy_from(&si.matrix(pi).kronecker(sj.matrix(mu)));
                    m.view_mut((block, block), (block, block))
                        .copy_from(&si.matrix(mu).kronecker(sj.matrix(pi)));
                    if b == 0 {
                        m
                    } else {
                        m * &t
                    }
                })
                .collect();
            out.push(Irrep::new(format!("kappa{}|{}", labels[i], labels[j]), matrices));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::combinatorics::partition_number;
    use num_traits::ToPrimitive;

    #[test]
    fn wreath_irreps_are_homomorphisms() {
        for n in 2..=3 {
            let g = make_wreath_s2(n).unwrap();
            let irreps = irreps_wreath(n).unwrap();
            let p = partition_number(n).to_usize().unwrap();
            assert_eq!(irreps.len(), p * (p - 1) / 2 + 2 * p);
            let sum: usize = irreps.iter().map(|r| r.degree().pow(2)).sum();
            assert_eq!(sum, g.order());
            for r in &irreps {
                assert!(r.homomorphism_defect(&g) < 1e-12, "{}", r.label());
                assert!(r.unitarity_defect() < 1e-12);
                assert!((r.character_norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn swap_characters() {
        let g = make_wreath_s2(3).unwrap();
        let t = g.distinguished_involution().unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let degrees = [1.0, 2.0, 1.0];
        for (i, d) in degrees.iter().enumerate() {
            assert!((irreps[2 * i].character(t).re - d).abs() < 1e-12);
            assert!((irreps[2 * i + 1].character(t).re + d).abs() < 1e-12);
        }
        for k in &irreps[6..] {
            assert!(k.character(t).norm() < 1e-12);
        }
    }

    #[test]
    fn induced_characters_on_the_base() {
        let g = make_wreath_s2(3).unwrap();
        let base = irreps_symmetric(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        // kappa[3]|[2,1], kappa[3]|[1,1,1], kappa[2,1]|[1,1,1]
        let pairs = [(0, 1), (0, 2), (1, 2)];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            for x in g.elements() {
                let (pi, mu, b) = g.wreath_triple(x).unwrap();
                if b == 1 {
                    continue;
                }
                let expected = base[i].character(pi) * base[j].character(mu)
                    + base[j].character(pi) * base[i].character(mu);
                assert!((irreps[6 + k].character(x) - expected).norm() < 1e-12);
            }
        }
    }
}
