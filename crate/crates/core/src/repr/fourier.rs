//! Fourier transform over `G`, subgroup projectors and isotypic projectors.

use num_complex::Complex64;

use super::{check_complete, Irrep};
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, Subgroup};
use crate::linalg::{c, kron_apply, pairwise_sum_complex, psd_rank, CMat, CVec};

/// Rows indexed by `(ρ, i, j)` in irrep order, columns by element id; entry
/// `sqrt(d_ρ/|G|) ρ_ij(g)`.
pub fn qft(group: &FiniteGroup, irreps: &[Irrep]) -> Result<CMat> {
    check_complete(group, irreps)?;
    let n = group.order();
    let mut f = CMat::zeros(n, n);
    let mut row = 0;
    for rho in irreps {
        let d = rho.degree();
        let scale = (d as f64 / n as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                for g in group.elements() {
                    f[(row, g.index())] = rho.matrix(g)[(i, j)] * scale;
                }
                row += 1;
            }
        }
    }
    Ok(f)
}

/// `(1/|H|) Σ_{h∈H} ρ(h)`
pub fn subgroup_projector(rho: &Irrep, h: &Subgroup) -> CMat {
    let d = rho.degree();
    let mut p = CMat::zeros(d, d);
    for &x in h.elements() {
        p += rho.matrix(x);
    }
    p / c(h.order() as f64)
}

/// Rank of the subgroup projector, from the averaged character.
pub fn rank_r(rho: &Irrep, h: &Subgroup) -> Result<usize> {
    let chars: Vec<Complex64> = h.elements().iter().map(|&x| rho.character(x)).collect();
    let avg = pairwise_sum_complex(&chars) / h.order() as f64;
    let rounded = avg.re.round();
    if (avg.re - rounded).abs() > 1e-6 || avg.im.abs() > 1e-6 {
        return Err(Error::NonIntegral {
            value: avg.re,
            context: format!("rank of {}(H)", rho.label()),
        });
    }
    let numeric = psd_rank(&subgroup_projector(rho, h), 0.5);
    if numeric as f64 != rounded {
        return Err(Error::NonIntegral {
            value: avg.re,
            context: format!("projector rank {numeric} disagrees for {}", rho.label()),
        });
    }
    Ok(rounded as usize)
}

pub fn conjugate_irrep(rho: &Irrep) -> Irrep {
    rho.conjugate()
}

#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    Irrep(&'a Irrep),
    Identity(usize),
}

impl Factor<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Irrep(r) => r.degree(),
            Factor::Identity(d) => *d,
        }
    }
}

/// Tensor product of irreps and identity blocks, viewed as a representation of
/// the diagonal copy of `G`.
#[derive(Clone, Debug)]
pub struct FactorRep<'a> {
    pub factors: Vec<Factor<'a>>,
}

impl<'a> FactorRep<'a> {
    pub fn new(factors: Vec<Factor<'a>>) -> Self {
        FactorRep { factors }
    }

    pub fn of_irreps(irreps: &[&'a Irrep]) -> Self {
        FactorRep { factors: irreps.iter().map(|r| Factor::Irrep(r)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    pub fn character(&self, g: Element) -> Complex64 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Irrep(r) => r.character(g),
                Factor::Identity(d) => c(*d as f64),
            })
            .product()
    }

    pub fn matrix(&self, g: Element) -> CMat {
        let mut m = CMat::identity(1, 1);
        for f in &self.factors {
            let part = match f {
                Factor::Irrep(r) => r.matrix(g).clone(),
                Factor::Identity(d) => CMat::identity(*d, *d),
            };
            m = m.kronecker(&part);
        }
        m
    }

    /// `θ(g) v` without forming `θ(g)`.
    pub fn apply(&self, g: Element, v: &CVec) -> CVec {
        let ids: Vec<CMat> = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Identity(d) => CMat::identity(*d, *d),
                Factor::Irrep(_) => CMat::zeros(0, 0),
            })
            .collect();
        let mats: Vec<&CMat> = self
            .factors
            .iter()
            .zip(&ids)
            .map(|(f, id)| match f {
                Factor::Irrep(r) => r.matrix(g),
                Factor::Identity(_) => id,
            })
            .collect();
        kron_apply(&mats, v)
    }
}

/// `(1/|G|) Σ_g χ_θ(g) χ_τ(g)*`, checked to be an integer.
pub fn clebsch_gordan_multiplicity(
    group: &FiniteGroup,
    theta: &FactorRep,
    tau: &Irrep,
) -> Result<usize> {
    let terms: Vec<Complex64> =
        group.elements().map(|g| theta.character(g) * tau.character(g).conj()).collect();
    let m = pairwise_sum_complex(&terms) / group.order() as f64;
    let rounded = m.re.round();
    if (m.re - rounded).abs() > 1e-6 || m.im.abs() > 1e-6 {
        return Err(Error::NonIntegral {
            value: m.re,
            context: format!("multiplicity of {}", tau.label()),
        });
    }
    Ok(rounded as usize)
}

/// Isotypic projector `d_τ E_g[χ_τ(g)* θ(g)]`, materialized.
pub fn homogeneous_projector(group: &FiniteGroup, theta: &FactorRep, tau: &Irrep) -> CMat {
    let d = theta.dim();
    let mut p = CMat::zeros(d, d);
    for g in group.elements() {
        p += theta.matrix(g) * tau.character(g).conj();
    }
    p * c(tau.degree() as f64 / group.order() as f64)
}

/// `Π^θ_τ v` summed over the group without materializing the projector.
pub fn project_isotypic(group: &FiniteGroup, theta: &FactorRep, tau: &Irrep, v: &CVec) -> CVec {
    let mut acc = CVec::zeros(v.len());
    for g in group.elements() {
        acc += theta.apply(g, v) * tau.character(g).conj();
    }
    acc * c(tau.degree() as f64 / group.order() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::linalg::{max_abs_diff, random_unit_vector, unitarity_defect};
    use crate::repr::{irreps_cyclic, irreps_for, irreps_symmetric, irreps_wreath};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn qft_small_cases() {
        let z2 = make_cyclic(2).unwrap();
        let f = qft(&z2, &irreps_cyclic(2)).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let hadamard = CMat::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        assert!(max_abs_diff(&f, &hadamard) < 1e-15);
        let s3 = make_symmetric(3).unwrap();
        assert!(unitarity_defect(&qft(&s3, &irreps_symmetric(3).unwrap()).unwrap()) < 1e-12);
        let partial = &irreps_symmetric(3).unwrap()[..2];
        assert!(matches!(qft(&s3, partial), Err(Error::IncompleteIrreps { .. })));
    }

    #[test]
    fn qft_of_zn_is_dft() {
        let n = 5;
        let g = make_cyclic(n).unwrap();
        let f = qft(&g, &irreps_cyclic(n)).unwrap();
        for j in 0..n {
            for k in 0..n {
                let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                let expected = Complex64::from_polar(1.0 / (n as f64).sqrt(), angle);
                assert!((f[(j, k)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn subgroup_projectors() {
        let g = make_wreath_s2(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let h = Subgroup::generated(&g, &[g.distinguished_involution().unwrap()]);
        let trivial = Subgroup::trivial(&g);
        let whole = Subgroup::whole(&g);
        for rho in &irreps {
            let d = rho.degree();
            let p = subgroup_projector(rho, &h);
            assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
            assert!(max_abs_diff(&p.adjoint(), &p) < 1e-12);
            let chi_h = rho.character(h.elements()[1]).re;
            assert_eq!(rank_r(rho, &h).unwrap() as f64, (d as f64 + chi_h) / 2.0);
            assert_eq!(rank_r(rho, &trivial).unwrap(), d);
            assert!(max_abs_diff(&subgroup_projector(rho, &trivial), &CMat::identity(d, d)) < 1e-15);
            let pw = subgroup_projector(rho, &whole);
            let expect_rank = usize::from(rho.label() == "theta[3]");
            assert_eq!(psd_rank(&pw, 0.5), expect_rank);
        }
        for (i, d) in [1usize, 2, 1].iter().enumerate() {
            assert_eq!(rank_r(&irreps[2 * i], &h).unwrap(), (d * d + d) / 2);
        }
    }

    #[test]
    fn conjugate_rank_matches() {
        let g = make_cyclic(6).unwrap();
        let h = Subgroup::generated(&g, &[Element::new(3)]);
        for rho in irreps_cyclic(6) {
            let star = conjugate_irrep(&rho);
            assert_eq!(rank_r(&rho, &h).unwrap(), rank_r(&star, &h).unwrap());
        }
    }

    #[test]
    fn clebsch_gordan_on_s3() {
        let g = make_symmetric(3).unwrap();
        let irreps = irreps_symmetric(3).unwrap();
        let std = &irreps[1];
        let single = FactorRep::of_irreps(&[std]);
        assert_eq!(clebsch_gordan_multiplicity(&g, &single, std).unwrap(), 1);
        let theta = FactorRep::of_irreps(&[std, std]);
        let mult: Vec<usize> = irreps
            .iter()
            .map(|t| clebsch_gordan_multiplicity(&g, &theta, t).unwrap())
            .collect();
        assert_eq!(mult, vec![1, 1, 1]);
        let dim: usize = irreps.iter().zip(&mult).map(|(t, m)| t.degree() * m).sum();
        assert_eq!(dim, theta.dim());
        let p_triv = homogeneous_projector(&g, &theta, &irreps[0]);
        assert_eq!(psd_rank(&p_triv, 0.5), 1);
    }

    #[test]
    fn isotypic_projectors_resolve_identity() {
        let g = make_dihedral(4).unwrap();
        let irreps = irreps_for(&g).unwrap();
        let two = irreps.iter().find(|r| r.degree() == 2).unwrap();
        let theta = FactorRep::new(vec![Factor::Irrep(two), Factor::Identity(2), Factor::Irrep(two)]);
        let d = theta.dim();
        let mut total = CMat::zeros(d, d);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = random_unit_vector(d, &mut rng);
        for tau in &irreps {
            let p = homogeneous_projector(&g, &theta, tau);
            assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
            assert!(max_abs_diff(&p.adjoint(), &p) < 1e-12);
            let a = clebsch_gordan_multiplicity(&g, &theta, tau).unwrap();
            assert!((p.trace().re - (tau.degree() * a) as f64).abs() < 1e-12);
            assert!((project_isotypic(&g, &theta, tau, &v) - &p * &v).norm() < 1e-12);
            total += p;
        }
        assert!(max_abs_diff(&total, &CMat::identity(d, d)) < 1e-12);
        let single = FactorRep::of_irreps(&[two]);
        assert!(max_abs_diff(&homogeneous_projector(&g, &single, two), &CMat::identity(2, 2)) < 1e-12);
    }
}
