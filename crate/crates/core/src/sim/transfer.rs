//! Spectral checks that coset states move unchanged between a group and an
//! overgroup, or a group and its quotient.

use nalgebra::DMatrix;
use serde_json::json;

use super::coset_state_real;
use crate::error::{Error, Result};
use crate::format::json_f64;
use crate::group::{Element, FiniteGroup, Subgroup};

pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferMode {
    Subgroup,
    Quotient,
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub mode: TransferMode,
    pub big_order: usize,
    pub small_order: usize,
    /// `[G̃ : G]` or `|N|`
    pub ratio: usize,
    /// largest deviation between the predicted and the computed spectrum
    pub spectrum_deviation: f64,
    /// largest deviation from the predicted block form (subgroup mode)
    pub block_deviation: f64,
    pub pass: bool,
}

impl TransferReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mode": match self.mode { TransferMode::Subgroup => "subgroup", TransferMode::Quotient => "quotient" },
            "big_order": self.big_order,
            "small_order": self.small_order,
            "ratio": self.ratio,
            "spectrum_deviation": json_f64(self.spectrum_deviation),
            "block_deviation": json_f64(self.block_deviation),
            "pass": self.pass,
        })
    }
}

fn spectrum(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Checks that `map` is a homomorphism `from -> to`.
fn check_homomorphism(from: &FiniteGroup, to: &FiniteGroup, map: &[Element]) -> Result<()> {
    if map.len() != from.order() {
        return Err(Error::Embedding(format!("map has {} images for {} elements", map.len(), from.order())));
    }
    for x in from.elements() {
        for y in from.elements() {
            let lhs = map[from.compose(x, y).index()];
            let rhs = to.compose(map[x.index()], map[y.index()]);
            if lhs != rhs {
                return Err(Error::Embedding(format!(
                    "map is not a homomorphism at ({}, {})",
                    from.format_element(x),
                    from.format_element(y)
                )));
            }
        }
    }
    Ok(())
}

/// Subgroup mode: `embed[g]` is the image in `big` of `g ∈ small`, and the
/// hidden subgroup is `h ≤ small`. The spectrum of `σ^{G̃}_H` must be `[G̃:G]`
/// copies of that of `σ^G_H`, scaled by `1/[G̃:G]`.
pub fn verify_subgroup(big: &FiniteGroup, small: &FiniteGroup, embed: &[Element], h: &Subgroup) -> Result<TransferReport> {
    check_homomorphism(small, big, embed)?;
    let mut seen = vec![usize::MAX; big.order()];
    for x in small.elements() {
        let y = embed[x.index()].index();
        if seen[y] != usize::MAX {
            return Err(Error::Embedding("map is not injective".into()));
        }
        seen[y] = x.index();
    }
    let index = big.order() / small.order();
    let h_big = Subgroup::new(big, h.elements().iter().map(|x| embed[x.index()]).collect())?;
    let sigma_big = coset_state_real(big, &h_big)?;
    let sigma_small = coset_state_real(small, h)?;

    // left-coset decomposition x = r · embed(a)
    let mut coset_of = vec![usize::MAX; big.order()];
    let mut inner = vec![Element::new(0); big.order()];
    let mut n_cosets = 0;
    for r in big.elements() {
        if coset_of[r.index()] != usize::MAX {
            continue;
        }
        for a in small.elements() {
            let x = big.compose(r, embed[a.index()]);
            coset_of[x.index()] = n_cosets;
            inner[x.index()] = a;
        }
        n_cosets += 1;
    }
    let scale = 1.0 / index as f64;
    let mut block_deviation: f64 = 0.0;
    for x in 0..big.order() {
        for y in 0..big.order() {
            let expected = if coset_of[x] == coset_of[y] {
                sigma_small[(inner[x].index(), inner[y].index())] * scale
            } else {
                0.0
            };
            block_deviation = block_deviation.max((sigma_big[(x, y)] - expected).abs());
        }
    }

    let small_spec = spectrum(sigma_small);
    let mut predicted: Vec<f64> = small_spec.iter().flat_map(|&l| std::iter::repeat_n(l * scale, index)).collect();
    predicted.sort_by(|a, b| b.total_cmp(a));
    let big_spec = spectrum(sigma_big);
    let spectrum_deviation = max_deviation(&big_spec, &predicted);
    Ok(TransferReport {
        mode: TransferMode::Subgroup,
        big_order: big.order(),
        small_order: small.order(),
        ratio: index,
        spectrum_deviation,
        block_deviation,
        pass: spectrum_deviation <= SPECTRUM_TOL && block_deviation <= SPECTRUM_TOL && n_cosets == index,
    })
}

/// Quotient mode: `proj[x]` is the image in `small ≅ big/N` of `x ∈ big`.
/// With `H̃` the preimage of `h ≤ small`, the nonzero spectrum of `σ^{G̃}_{H̃}`
/// must equal that of `σ^G_H`.
pub fn verify_quotient(big: &FiniteGroup, small: &FiniteGroup, proj: &[Element], n: &Subgroup, h: &Subgroup) -> Result<TransferReport> {
    if !n.is_normal(big) {
        return Err(Error::Embedding("N is not normal".into()));
    }
    check_homomorphism(big, small, proj)?;
    let kernel: Vec<Element> = big.elements().filter(|x| proj[x.index()] == small.identity()).collect();
    if kernel != n.elements() {
        return Err(Error::Embedding("kernel of the projection differs from N".into()));
    }
    if big.order() != small.order() * n.order() {
        return Err(Error::Embedding("projection is not onto".into()));
    }
    let h_big = Subgroup::new(big, big.elements().filter(|x| h.contains(proj[x.index()])).collect())?;
    let big_spec = spectrum(coset_state_real(big, &h_big)?);
    let small_spec = spectrum(coset_state_real(small, h)?);
    let mut predicted = small_spec.clone();
    predicted.resize(big_spec.len(), 0.0);
    let spectrum_deviation = max_deviation(&big_spec, &predicted);
    Ok(TransferReport {
        mode: TransferMode::Quotient,
        big_order: big.order(),
        small_order: small.order(),
        ratio: n.order(),
        spectrum_deviation,
        block_deviation: 0.0,
        pass: spectrum_deviation <= SPECTRUM_TOL,
    })
}

/// `SL(2,q) -> PSL(2,q)` through matrices up to sign, with `N = {±I}`.
pub fn sl2_to_psl2(sl: &FiniteGroup, psl: &FiniteGroup) -> Result<(Vec<Element>, Subgroup)> {
    let proj = sl
        .elements()
        .map(|x| {
            let m = sl.matrix_of(x).ok_or_else(|| Error::Embedding("source is not a matrix group".into()))?;
            psl.element_of_matrix(&m)
                .ok_or_else(|| Error::Embedding("target is not a projective matrix group".into()))
        })
        .collect::<Result<Vec<Element>>>()?;
    let center = sl.center();
    Ok((proj, center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::repr::default_h;

    #[test]
    fn identical_groups() {
        let g = make_symmetric(3).unwrap();
        let embed: Vec<Element> = g.elements().collect();
        let h = Subgroup::new(&g, vec![g.identity(), default_h(&g).unwrap()]).unwrap();
        let r = verify_subgroup(&g, &g, &embed, &h).unwrap();
        assert!(r.pass);
        assert_eq!(r.ratio, 1);
    }

    #[test]
    fn s3_in_s4() {
        let s3 = make_symmetric(3).unwrap();
        let s4 = make_symmetric(4).unwrap();
        let embed: Vec<Element> = s3
            .elements()
            .map(|x| {
                let p = s3.as_permutation(x).unwrap();
                let mut imgs = p.images().to_vec();
                imgs.push(3);
                Element::new(perm::Perm::from_images(imgs).unwrap().rank())
            })
            .collect();
        let h = Subgroup::new(&s3, vec![s3.identity(), default_h(&s3).unwrap()]).unwrap();
        let r = verify_subgroup(&s4, &s3, &embed, &h).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.ratio, 4);
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let s3 = make_symmetric(3).unwrap();
        let h = Subgroup::trivial(&s3);
        let constant = vec![s3.identity(); 6];
        assert!(matches!(verify_subgroup(&s3, &s3, &constant, &h), Err(Error::Embedding(_))));
    }

    #[test]
    fn non_normal_kernel_rejected() {
        let s3 = make_symmetric(3).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let n = Subgroup::new(&s3, vec![s3.identity(), default_h(&s3).unwrap()]).unwrap();
        let proj = vec![c2.identity(); 6];
        let h = Subgroup::trivial(&c2);
        assert!(matches!(verify_quotient(&s3, &c2, &proj, &n, &h), Err(Error::Embedding(_))));
    }

    #[test]
    fn sign_quotient_of_s3() {
        let s3 = make_symmetric(3).unwrap();
        let c2 = make_cyclic(2).unwrap();
        let proj: Vec<Element> = s3
            .elements()
            .map(|x| {
                let odd = s3.as_permutation(x).unwrap().cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2;
                Element::new(odd)
            })
            .collect();
        let a3 = Subgroup::new(&s3, s3.elements().filter(|x| proj[x.index()] == c2.identity()).collect()).unwrap();
        let r = verify_quotient(&s3, &c2, &proj, &a3, &Subgroup::whole(&c2)).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
