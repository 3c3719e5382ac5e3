//! Unitary irreducible representations stored as one matrix per group element.

pub mod chartable;
pub mod fourier;
pub mod frame;
pub mod generic;
pub mod wreath;
pub mod young;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupKind};
use crate::linalg::{max_abs_diff, unitarity_defect, CMat};

pub use chartable::CharacterTable;
pub use fourier::{
    clebsch_gordan_multiplicity, homogeneous_projector, qft, rank_r, subgroup_projector, Factor,
    FactorRep,
};
pub use frame::{random_frame, Frame, FrameKind};

#[derive(Clone, Debug)]
pub struct Irrep {
    label: String,
    degree: usize,
    matrices: Vec<CMat>,
    characters: Vec<Complex64>,
}

impl Irrep {
    /// `matrices[g]` is the image of element id `g`.
    pub fn new(label: impl Into<String>, matrices: Vec<CMat>) -> Self {
        let degree = matrices.first().map_or(0, |m| m.nrows());
        let characters = matrices.iter().map(|m| m.trace()).collect();
        Irrep { label: label.into(), degree, matrices, characters }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self, g: Element) -> &CMat {
        &self.matrices[g.index()]
    }

    pub fn character(&self, g: Element) -> Complex64 {
        self.characters[g.index()]
    }

    pub fn characters(&self) -> &[Complex64] {
        &self.characters
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Entrywise complex conjugate in the constructed basis.
    pub fn conjugate(&self) -> Irrep {
        let matrices: Vec<CMat> = self.matrices.iter().map(|m| m.map(|z| z.conj())).collect();
        Irrep::new(format!("{}*", self.label), matrices)
    }

    pub fn is_real(&self) -> bool {
        self.matrices.iter().all(|m| m.iter().all(|z| z.im.abs() < 1e-12))
    }

    /// Largest entrywise defect of `ρ(x)ρ(y) = ρ(xy)` over all pairs.
    pub fn homomorphism_defect(&self, group: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for x in group.elements() {
            for y in group.elements() {
                let lhs = self.matrix(x) * self.matrix(y);
                worst = worst.max(max_abs_diff(&lhs, self.matrix(group.compose(x, y))));
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrices.iter().map(unitarity_defect).fold(0.0, f64::max)
    }

    /// `(1/|G|) Σ_g |χ(g)|²`
    pub fn character_norm(&self) -> f64 {
        self.characters.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.characters.len() as f64
    }
}

pub fn irreps_symmetric(n: usize) -> Result<Vec<Irrep>> {
    young::irreps_symmetric(n)
}

pub fn irreps_wreath(n: usize) -> Result<Vec<Irrep>> {
    wreath::irreps_wreath(n)
}

pub fn irreps_generic(group: &FiniteGroup, tol: f64) -> Result<Vec<Irrep>> {
    generic::irreps_generic(group, tol, generic::DEFAULT_SEED)
}

pub fn irreps_cyclic(n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|j| {
            let matrices = (0..n)
                .map(|k| {
                    let angle = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    CMat::from_element(1, 1, Complex64::from_polar(1.0, angle))
                })
                .collect();
            Irrep::new(format!("chi{j}"), matrices)
        })
        .collect()
}

/// Irreps of `G^k` as tensor products of base irreps, in lexicographic order of
/// the base labels.
pub fn irreps_power(group: &FiniteGroup, base_irreps: &[Irrep], k: usize) -> Vec<Irrep> {
    let r = base_irreps.len();
    let count = r.pow(k as u32);
    let comps: Vec<Vec<Element>> =
        group.elements().map(|x| group.power_components(x).unwrap()).collect();
    (0..count)
        .map(|mut idx| {
            let mut choice = vec![0usize; k];
            for c in choice.iter_mut().rev() {
                *c = idx % r;
                idx /= r;
            }
            let label = choice
                .iter()
                .map(|&i| base_irreps[i].label())
                .collect::<Vec<_>>()
                .join("x");
            let matrices = comps
                .iter()
                .map(|parts| {
                    let mut m = base_irreps[choice[0]].matrix(parts[0]).clone();
                    for (slot, &i) in choice.iter().enumerate().skip(1) {
                        m = m.kronecker(base_irreps[i].matrix(parts[slot]));
                    }
                    m
                })
                .collect();
            Irrep::new(label, matrices)
        })
        .collect()
}

/// Largest group order for which irreps are materialized as matrices.
pub const IRREP_ORDER_CAP: usize = 2000;

/// Complete irrep list for any supported group: Young's orthogonal form for
/// S_n, the induced construction for wreath products, exact characters for
/// cyclic groups, tensor products for direct powers, and the numerical
/// decomposition of the regular representation otherwise.
pub fn irreps_for(group: &FiniteGroup) -> Result<Vec<Irrep>> {
    let irreps = match group.kind() {
        GroupKind::Symmetric(n) if *n <= 5 => irreps_symmetric(*n)?,
        GroupKind::Wreath(n) if *n <= 4 => irreps_wreath(*n)?,
        GroupKind::Cyclic(n) if *n <= IRREP_ORDER_CAP => irreps_cyclic(*n),
        GroupKind::Power(_, k) if group.order() <= IRREP_ORDER_CAP => {
            let base = group.base_group().unwrap();
            let base_irreps = irreps_for(base)?;
            irreps_power(group, &base_irreps, *k)
        }
        _ if group.order() <= IRREP_ORDER_CAP => irreps_generic(group, 1e-6)?,
        _ => {
            return Err(Error::ResourceCap(format!(
                "irrep matrices for {} (order {}) exceed the order cap {IRREP_ORDER_CAP}",
                group.kind(),
                group.order()
            )))
        }
    };
    check_complete(group, &irreps)?;
    Ok(irreps)
}

pub fn check_complete(group: &FiniteGroup, irreps: &[Irrep]) -> Result<()> {
    let sum: usize = irreps.iter().map(|r| r.degree() * r.degree()).sum();
    if sum != group.order() {
        return Err(Error::IncompleteIrreps { sum, order: group.order() });
    }
    Ok(())
}

/// Hidden-subgroup generator: the distinguished involution for `G`.
pub fn default_h(group: &FiniteGroup) -> Result<Element> {
    group.distinguished_involution().ok_or_else(|| {
        Error::InvalidElement(format!("{} has no distinguished involution", group.kind()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use std::sync::Arc;

    #[test]
    fn cyclic_characters_are_roots_of_unity() {
        let irreps = irreps_cyclic(4);
        let i = Complex64::new(0.0, 1.0);
        for (j, r) in irreps.iter().enumerate() {
            for k in 0..4 {
                let expected = i.powu((j * k) as u32);
                assert!((r.character(Element::new(k)) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z3_conjugation_swaps_characters() {
        let irreps = irreps_cyclic(3);
        let conj = irreps[1].conjugate();
        for k in 0..3 {
            let g = Element::new(k);
            assert!((conj.character(g) - irreps[2].character(g)).norm() < 1e-12);
            assert!((conj.character(g) - irreps[1].character(g).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn power_irreps_are_complete() {
        let s3 = Arc::new(make_symmetric(3).unwrap());
        let g = make_direct_power(s3, 2).unwrap();
        let irreps = irreps_for(&g).unwrap();
        assert_eq!(irreps.len(), 9);
        for r in &irreps {
            assert!(r.homomorphism_defect(&g) < 1e-9);
        }
    }

    #[test]
    fn dispatch_covers_all_small_families() {
        let groups = [
            make_symmetric(4).unwrap(),
            make_dihedral(4).unwrap(),
            make_cyclic(6).unwrap(),
            make_wreath_s2(2).unwrap(),
            make_psl2(4).unwrap(),
        ];
        for g in &groups {
            let irreps = irreps_for(g).unwrap();
            for r in &irreps {
                assert!(r.unitarity_defect() < 1e-9, "{} {}", g.kind(), r.label());
                assert!((r.character_norm() - 1.0).abs() < 1e-9);
            }
        }
    }
}
