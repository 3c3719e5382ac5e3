//! Exact simulation of the standard method on `k` coset-state registers.
//!
//! Everything is an exact expectation: coset states, their Fourier blocks,
//! the measured distributions for a hidden conjugate `{1, x}` against the
//! trivial subgroup, and the total variation between them.

pub mod lemmas;
pub mod transfer;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::group::{Element, FiniteGroup, Subgroup};
use crate::linalg::{c, kron_apply, pairwise_sum, trace_norm_hermitian, CMat, CVec};
use crate::repr::{check_complete, random_frame, rank_r, subgroup_projector, Frame, FrameKind, Irrep};

/// Largest order for dense element-basis matrices.
pub const DENSE_ORDER_CAP: usize = 2000;

/// Work budget for one simulation, in units of `Σ_τ d_τ^{2k}`.
pub const WORK_CAP: f64 = 1e8;

/// `[x⁻¹y ∈ H] / |G|` in the element basis, real-valued.
pub fn coset_state_real(group: &FiniteGroup, h: &Subgroup) -> Result<DMatrix<f64>> {
    let n = group.order();
    if n > DENSE_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "dense coset state needs |G| <= {DENSE_ORDER_CAP}, got {n}"
        )));
    }
    let inv: Vec<Element> = group.elements().map(|x| group.inverse(x)).collect();
    let scale = 1.0 / n as f64;
    Ok(DMatrix::from_fn(n, n, |x, y| {
        let q = group.compose(inv[x], Element::new(y));
        if h.contains(q) {
            scale
        } else {
            0.0
        }
    }))
}

/// `σ_H = (1/|G|) Σ_g |gH⟩⟨gH|` as a complex density matrix.
pub fn coset_state(group: &FiniteGroup, h: &Subgroup) -> Result<CMat> {
    Ok(coset_state_real(group, h)?.map(c))
}

/// Mixed-radix enumeration of irrep tuples, first register most significant.
pub fn tuple_at(r: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = idx % r;
        idx /= r;
    }
    t
}

pub fn tuple_count(r: usize, k: usize) -> Result<usize> {
    r.checked_pow(k as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::ResourceCap(format!("{r}^{k} irrep tuples")))
}

pub fn tuple_label(irreps: &[Irrep], t: &[usize]) -> String {
    t.iter().map(|&i| irreps[i].label()).collect::<Vec<_>>().join("⊗")
}

pub fn tuple_dim(irreps: &[Irrep], t: &[usize]) -> usize {
    t.iter().map(|&i| irreps[i].degree()).product()
}

/// `Π_i d_i |H| r_i(H) / |G|` for an arbitrary subgroup.
pub fn irrep_probability(group: &FiniteGroup, irreps: &[Irrep], h: &Subgroup, t: &[usize]) -> Result<f64> {
    let mut p = 1.0;
    for &i in t {
        let r = rank_r(&irreps[i], h)?;
        p *= (irreps[i].degree() * h.order() * r) as f64 / group.order() as f64;
    }
    Ok(p)
}

#[derive(Clone, Debug)]
pub struct BlockEntry {
    pub tuple: Vec<usize>,
    pub label: String,
    /// number of row copies, `d_ρ`
    pub multiplicity: usize,
    /// `⊗_i (|H|/|G|) ρ_i*(H)` on the column space
    pub block: CMat,
}

/// Fourier form of `σ_H^{⊗k}`: each irrep tuple contributes `d_ρ` identical
/// copies of its block.
#[derive(Clone, Debug)]
pub struct BlockDensity {
    pub group_order: usize,
    pub k: usize,
    pub blocks: Vec<BlockEntry>,
}

pub fn fourier_blocks(group: &FiniteGroup, irreps: &[Irrep], h: &Subgroup, k: usize) -> Result<BlockDensity> {
    check_complete(group, irreps)?;
    let r = irreps.len();
    let count = tuple_count(r, k)?;
    let weight = h.order() as f64 / group.order() as f64;
    let singles: Vec<CMat> = irreps
        .iter()
        .map(|rho| subgroup_projector(rho, h).map(|z| z.conj()) * c(weight))
        .collect();
    let blocks = (0..count)
        .into_par_iter()
        .map(|idx| {
            let t = tuple_at(r, k, idx);
            let mut block = CMat::identity(1, 1);
            for &i in &t {
                block = block.kronecker(&singles[i]);
            }
            BlockEntry {
                label: tuple_label(irreps, &t),
                multiplicity: tuple_dim(irreps, &t),
                tuple: t,
                block,
            }
        })
        .collect();
    Ok(BlockDensity { group_order: group.order(), k, blocks })
}

impl BlockDensity {
    pub fn irrep_probability(&self, idx: usize) -> f64 {
        let b = &self.blocks[idx];
        b.multiplicity as f64 * b.block.trace().re
    }

    pub fn total_trace(&self) -> f64 {
        let parts: Vec<f64> = (0..self.blocks.len()).map(|i| self.irrep_probability(i)).collect();
        pairwise_sum(&parts)
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| crate::linalg::max_abs_diff(&b.block, &b.block.adjoint()))
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| crate::linalg::hermitian_eigenvalues(&b.block))
            .fold(f64::INFINITY, f64::min)
    }

    /// The single-register density in the `(ρ, i, j)` basis used by `qft`.
    pub fn to_dense(&self) -> Result<CMat> {
        if self.k != 1 {
            return Err(Error::OutOfRange("dense Fourier form only for k = 1".into()));
        }
        let n = self.group_order;
        let mut m = CMat::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.multiplicity;
            for i in 0..d {
                let base = offset + i * d;
                for j in 0..d {
                    for jj in 0..d {
                        m[(base + j, base + jj)] = b.block[(j, jj)];
                    }
                }
            }
            offset += d * d;
        }
        Ok(m)
    }
}

/// Hidden subgroup `{1, h}` together with its conjugacy class and the
/// per-irrep projectors `(I + ρ(x))/2` for every conjugate `x`.
pub struct Instance<'a> {
    pub group: &'a FiniteGroup,
    pub irreps: &'a [Irrep],
    pub h: Element,
    /// sorted conjugates of `h`
    pub conjugates: Vec<Element>,
    /// `χ_ρ(h)`, real for an involution
    pub chi_h: Vec<f64>,
    /// `r_ρ = (d_ρ + χ_ρ(h))/2`
    pub ranks: Vec<usize>,
    projectors: Vec<Vec<CMat>>,
}

impl<'a> Instance<'a> {
    pub fn new(group: &'a FiniteGroup, irreps: &'a [Irrep], h: Element) -> Result<Self> {
        check_complete(group, irreps)?;
        if group.element_order(h) != 2 {
            return Err(Error::InvalidElement(format!(
                "{} is not an involution",
                group.format_element(h)
            )));
        }
        let mut conjugates = group.conjugacy_class(h);
        conjugates.sort();
        let mut chi_h = Vec::with_capacity(irreps.len());
        let mut ranks = Vec::with_capacity(irreps.len());
        for rho in irreps {
            let chi = rho.character(h);
            if chi.im.abs() > 1e-8 {
                return Err(Error::NotReal(chi.im));
            }
            let r = (rho.degree() as f64 + chi.re) / 2.0;
            if (r - r.round()).abs() > 1e-6 {
                return Err(Error::NonIntegral { value: r, context: format!("rank for {}", rho.label()) });
            }
            chi_h.push(chi.re);
            ranks.push(r.round() as usize);
        }
        let projectors = irreps
            .iter()
            .map(|rho| {
                let d = rho.degree();
                conjugates
                    .iter()
                    .map(|&x| (CMat::identity(d, d) + rho.matrix(x)) * c(0.5))
                    .collect()
            })
            .collect();
        Ok(Instance { group, irreps, h, conjugates, chi_h, ranks, projectors })
    }

    pub fn order(&self) -> f64 {
        self.group.order() as f64
    }

    pub fn class_size(&self) -> usize {
        self.conjugates.len()
    }

    pub fn conjugate_index(&self, x: Element) -> Option<usize> {
        self.conjugates.binary_search(&x).ok()
    }

    pub fn tuple_count(&self, k: usize) -> Result<usize> {
        tuple_count(self.irreps.len(), k)
    }

    pub fn tuple(&self, k: usize, idx: usize) -> Vec<usize> {
        tuple_at(self.irreps.len(), k, idx)
    }

    pub fn label(&self, t: &[usize]) -> String {
        tuple_label(self.irreps, t)
    }

    pub fn dim(&self, t: &[usize]) -> usize {
        tuple_dim(self.irreps, t)
    }

    pub fn rank(&self, t: &[usize]) -> usize {
        t.iter().map(|&i| self.ranks[i]).product()
    }

    /// `M_H(ρ) = 2^k d_ρ r_ρ / |G|^k`, the same for every conjugate.
    pub fn irrep_probability(&self, t: &[usize]) -> f64 {
        t.iter()
            .map(|&i| 2.0 * (self.irreps[i].degree() * self.ranks[i]) as f64 / self.order())
            .product()
    }

    /// `M_{1}(ρ) = d_ρ² / |G|^k`
    pub fn plancherel(&self, t: &[usize]) -> f64 {
        t.iter()
            .map(|&i| (self.irreps[i].degree() * self.irreps[i].degree()) as f64 / self.order())
            .product()
    }

    /// Checks the resource budget `Σ_τ d_τ^{2k}` for `k` registers.
    pub fn check_work(&self, k: usize) -> Result<()> {
        let work: f64 = self.irreps.iter().map(|r| (r.degree() as f64).powi(2 * k as i32)).sum();
        if work > WORK_CAP {
            let dmax = self.irreps.iter().map(Irrep::degree).max().unwrap_or(1);
            return Err(Error::ResourceCap(format!(
                "k = {k} needs {work:.3e} work units (cap {WORK_CAP:.0e}); largest tuple dimension {}",
                (dmax as f64).powi(k as i32)
            )));
        }
        Ok(())
    }

    pub fn factor_projectors(&self, t: &[usize], conj: usize) -> Vec<&CMat> {
        t.iter().map(|&i| &self.projectors[i][conj]).collect()
    }

    /// `⟨b| ⊗_i (I + ρ_i(x))/2 |b⟩` for the conjugate with index `conj`.
    pub fn quadratic_form(&self, t: &[usize], conj: usize, b: &CVec) -> Complex64 {
        let pb = kron_apply(&self.factor_projectors(t, conj), b);
        b.dotc(&pb)
    }

    /// `X(ρ, b, x) = ⟨b|ρ((H^g)^k)|b⟩ − 1/2^k` for a conjugate index.
    pub fn x_value(&self, t: &[usize], b: &CVec, conj: usize) -> Result<f64> {
        let q = self.quadratic_form(t, conj, b);
        if q.im.abs() > 1e-8 {
            return Err(Error::NotReal(q.im));
        }
        Ok(q.re - 0.5f64.powi(t.len() as i32))
    }

    /// `X(ρ, b, g)` with `H^g = {1, g h g⁻¹}`.
    pub fn x_function(&self, t: &[usize], b: &CVec, g: Element) -> Result<f64> {
        let x = self.group.conjugate(g, self.h);
        let conj = self
            .conjugate_index(x)
            .ok_or_else(|| Error::InvalidElement("conjugate outside the class of h".into()))?;
        self.x_value(t, b, conj)
    }

    /// `M(b | ρ*)`: `a_b/d_ρ` for the trivial subgroup, otherwise
    /// `a_b ⟨b|P_x|b⟩ / r_ρ` (zero when `r_ρ = 0`).
    pub fn conditional_prob(&self, t: &[usize], hidden: Hidden, a_b: f64, b: &CVec) -> f64 {
        match hidden {
            Hidden::Trivial => a_b / self.dim(t) as f64,
            Hidden::Conjugate(conj) => {
                let r = self.rank(t);
                if r == 0 {
                    0.0
                } else {
                    a_b * self.quadratic_form(t, conj, b).re / r as f64
                }
            }
        }
    }

    pub fn hidden_probability(&self, t: &[usize], hidden: Hidden) -> f64 {
        match hidden {
            Hidden::Trivial => self.plancherel(t),
            Hidden::Conjugate(_) => self.irrep_probability(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hidden {
    Trivial,
    /// index into `Instance::conjugates`
    Conjugate(usize),
}

/// Seed for the frame of tuple `idx`, independent of scheduling.
pub fn frame_seed(seed: u64, idx: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(idx as u64);
    rng.next_u64()
}

/// One frame per irrep tuple, indexed like `Instance::tuple`.
#[derive(Clone, Debug)]
pub struct KMeasurement {
    pub k: usize,
    pub frames: Vec<Option<Frame>>,
}

impl KMeasurement {
    pub fn random(inst: &Instance, k: usize, seed: u64, kind: FrameKind) -> Result<Self> {
        let count = inst.tuple_count(k)?;
        let frames = (0..count)
            .into_par_iter()
            .map(|idx| {
                let d = inst.dim(&inst.tuple(k, idx));
                Some(random_frame(d, frame_seed(seed, idx), kind))
            })
            .collect();
        Ok(KMeasurement { k, frames })
    }

    pub fn standard(inst: &Instance, k: usize) -> Result<Self> {
        let count = inst.tuple_count(k)?;
        let frames = (0..count).map(|idx| Some(Frame::standard_basis(inst.dim(&inst.tuple(k, idx))))).collect();
        Ok(KMeasurement { k, frames })
    }

    pub fn frame(&self, idx: usize) -> Option<&Frame> {
        self.frames.get(idx).and_then(Option::as_ref)
    }

    pub fn max_completeness_defect(&self) -> f64 {
        self.frames.iter().flatten().map(Frame::completeness_defect).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub tuple_index: usize,
    pub label: String,
    pub b_index: usize,
    pub probability: f64,
}

/// Distribution over `(ρ, b)`; the row index is uniform given `ρ` and is kept
/// as a single bucket.
#[derive(Clone, Debug)]
pub struct MeasurementDistribution {
    pub outcomes: Vec<Outcome>,
}

impl MeasurementDistribution {
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.outcomes.iter().map(|o| o.probability).collect::<Vec<_>>())
    }

    pub fn min(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).fold(f64::INFINITY, f64::min)
    }

    /// `Σ |p − q|` over the union of outcome keys.
    pub fn l1_distance(&self, other: &MeasurementDistribution) -> f64 {
        let key = |o: &Outcome| (o.tuple_index, o.b_index);
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.outcomes, &other.outcomes);
        let mut diffs = Vec::with_capacity(a.len().max(b.len()));
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if key(x) == key(y) => {
                    diffs.push((x.probability - y.probability).abs());
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if key(x) < key(y) => {
                    diffs.push(x.probability.abs());
                    i += 1;
                }
                (Some(_), Some(y)) | (None, Some(y)) => {
                    diffs.push(y.probability.abs());
                    j += 1;
                }
                (Some(x), None) => {
                    diffs.push(x.probability.abs());
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        pairwise_sum(&diffs)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["rho_label", "b_index", "probability"])?;
        for o in &self.outcomes {
            w.write_record([o.label.clone(), o.b_index.to_string(), fmt_f64(o.probability)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Exact outcome distribution for the hidden subgroup (or the trivial one)
/// under the given measurement.
pub fn full_distribution(inst: &Instance, k: usize, meas: &KMeasurement, hidden: Hidden) -> Result<MeasurementDistribution> {
    let count = inst.tuple_count(k)?;
    let parts: Vec<Result<Vec<Outcome>>> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let t = inst.tuple(k, idx);
            let p = inst.hidden_probability(&t, hidden);
            let frame = match meas.frame(idx) {
                Some(f) => f,
                None if p == 0.0 => return Ok(Vec::new()),
                None => return Err(Error::MissingFrame(inst.label(&t))),
            };
            let label = inst.label(&t);
            Ok(frame
                .weights
                .iter()
                .zip(&frame.vectors)
                .enumerate()
                .map(|(b_index, (&a, b))| Outcome {
                    tuple_index: idx,
                    label: label.clone(),
                    b_index,
                    probability: if p == 0.0 { 0.0 } else { p * inst.conditional_prob(&t, hidden, a, b) },
                })
                .collect())
        })
        .collect();
    let mut outcomes = Vec::new();
    for p in parts {
        outcomes.extend(p?);
    }
    Ok(MeasurementDistribution { outcomes })
}

/// Per-conjugate total variation (ℓ1) between hidden and trivial outcomes.
#[derive(Clone, Debug)]
pub struct TvReport {
    pub k: usize,
    pub per_conjugate: Vec<f64>,
    /// `μ_x = E_{ρ,b}|X|` under Plancherel and natural distributions
    pub mu: Vec<f64>,
    pub average: f64,
    pub max: f64,
}

/// Exact `E_g ‖M_{H^g} − M_{1}‖`, iterating over distinct conjugates (each
/// equally likely under uniform `g`).
pub fn avg_tv_over_conjugates(inst: &Instance, k: usize, meas: &KMeasurement) -> Result<TvReport> {
    inst.check_work(k)?;
    let count = inst.tuple_count(k)?;
    let m = inst.class_size();
    // per tuple: Σ_b a_b |⟨b|P_x|b⟩ − 2^-k| for each conjugate, times d/|G|^k
    let rows: Vec<Result<Vec<f64>>> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let t = inst.tuple(k, idx);
            let frame = meas.frame(idx).ok_or_else(|| Error::MissingFrame(inst.label(&t)))?;
            let scale = inst.dim(&t) as f64 / inst.order().powi(k as i32);
            (0..m)
                .map(|conj| {
                    let terms = frame
                        .weights
                        .iter()
                        .zip(&frame.vectors)
                        .map(|(&a, b)| Ok(a * inst.x_value(&t, b, conj)?.abs()))
                        .collect::<Result<Vec<f64>>>()?;
                    Ok(scale * pairwise_sum(&terms))
                })
                .collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    let mu: Vec<f64> = (0..m)
        .map(|conj| pairwise_sum(&rows.iter().map(|r| r[conj]).collect::<Vec<_>>()))
        .collect();
    let scale = 2f64.powi(k as i32);
    let per_conjugate: Vec<f64> = mu.iter().map(|x| x * scale).collect();
    let average = pairwise_sum(&per_conjugate) / m as f64;
    let max = per_conjugate.iter().copied().fold(0.0, f64::max);
    Ok(TvReport { k, per_conjugate, mu, average, max })
}

/// Largest `|G|^t` for the element-basis cross-check.
pub const DENSE_TRACE_CAP: usize = 1024;

fn check_trace_caps(order: usize, t: usize) -> Result<()> {
    let ok = t >= 1 && ((order <= 100 && t <= 3) || (order <= 600 && t <= 2) || t == 1 && order <= DENSE_ORDER_CAP);
    if ok {
        Ok(())
    } else {
        Err(Error::ResourceCap(format!(
            "trace distance with t = {t} registers over a group of order {order}"
        )))
    }
}

/// `‖E_g σ_{H^g}^{⊗t} − σ_{1}^{⊗t}‖_tr`, block by block:
/// `Σ_ρ (d_ρ/|G|^t) ‖E_x[⊗_i (I + ρ_i(x))] − I‖_tr`.
pub fn mixed_conjugate_trace_distance(inst: &Instance, t: usize) -> Result<f64> {
    check_trace_caps(inst.group.order(), t)?;
    let count = inst.tuple_count(t)?;
    let m = inst.class_size() as f64;
    let terms: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let tup = inst.tuple(t, idx);
            let d = inst.dim(&tup);
            let mut acc = CMat::zeros(d, d);
            for conj in 0..inst.class_size() {
                let mut p = CMat::identity(1, 1);
                for f in inst.factor_projectors(&tup, conj) {
                    p = p.kronecker(&(f * c(2.0)));
                }
                acc += p;
            }
            let diff = acc / c(m) - CMat::identity(d, d);
            d as f64 * trace_norm_hermitian(&diff) / inst.order().powi(t as i32)
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// The same trace distance computed on the `|G|^t`-dimensional element basis.
pub fn mixed_conjugate_trace_distance_dense(group: &FiniteGroup, h: Element, t: usize) -> Result<f64> {
    let n = group.order();
    let dim = n.checked_pow(t as u32).filter(|&d| d <= DENSE_TRACE_CAP).ok_or_else(|| {
        Error::ResourceCap(format!("dense trace distance needs |G|^t <= {DENSE_TRACE_CAP}"))
    })?;
    let class = group.conjugacy_class(h);
    let power = |m: &CMat| {
        let mut p = CMat::identity(1, 1);
        for _ in 0..t {
            p = p.kronecker(m);
        }
        p
    };
    let mut mixed = CMat::zeros(dim, dim);
    for &x in &class {
        let hx = Subgroup::new(group, vec![group.identity(), x])?;
        mixed += power(&coset_state(group, &hx)?);
    }
    mixed /= c(class.len() as f64);
    let trivial = power(&coset_state(group, &Subgroup::trivial(group))?);
    Ok(trace_norm_hermitian(&(mixed - trivial)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::linalg::{max_abs_diff, psd_rank};
    use crate::repr::{default_h, irreps_cyclic, irreps_for, irreps_symmetric, irreps_wreath, qft};

    fn order_two(group: &FiniteGroup, h: Element) -> Subgroup {
        Subgroup::new(group, vec![group.identity(), h]).unwrap()
    }

    #[test]
    fn coset_state_edge_cases() {
        let g = make_symmetric(3).unwrap();
        let whole = coset_state(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(psd_rank(&whole, 1e-9), 1);
        assert!(max_abs_diff(&whole, &CMat::from_element(6, 6, c(1.0 / 6.0))) < 1e-15);
        let triv = coset_state(&g, &Subgroup::trivial(&g)).unwrap();
        assert!(max_abs_diff(&triv, &(CMat::identity(6, 6) / c(6.0))) < 1e-15);
    }

    #[test]
    fn wreath_coset_state_rank() {
        let g = make_wreath_s2(3).unwrap();
        let h = order_two(&g, default_h(&g).unwrap());
        let s = coset_state(&g, &h).unwrap();
        assert!((s.trace().re - 1.0).abs() < 1e-12);
        assert_eq!(psd_rank(&s, 1e-9), 36);
        assert!(crate::linalg::hermitian_eigenvalues(&s)[0] > -1e-12);
    }

    #[test]
    fn blocks_match_conjugated_coset_state() {
        for (g, irreps) in [
            (make_symmetric(3).unwrap(), irreps_symmetric(3).unwrap()),
            (make_dihedral(4).unwrap(), irreps_for(&make_dihedral(4).unwrap()).unwrap()),
            (make_wreath_s2(3).unwrap(), irreps_wreath(3).unwrap()),
        ] {
            let f = qft(&g, &irreps).unwrap();
            for h in [Subgroup::trivial(&g), order_two(&g, default_h(&g).unwrap()), Subgroup::whole(&g)] {
                let direct = &f * coset_state(&g, &h).unwrap() * f.adjoint();
                let blocks = fourier_blocks(&g, &irreps, &h, 1).unwrap();
                assert!(max_abs_diff(&direct, &blocks.to_dense().unwrap()) < 1e-9);
                assert!((blocks.total_trace() - 1.0).abs() < 1e-10);
                assert!(blocks.hermitian_defect() < 1e-12);
                assert!(blocks.min_eigenvalue() > -1e-9);
            }
        }
    }

    #[test]
    fn block_probabilities() {
        let g = make_wreath_s2(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let h = default_h(&g).unwrap();
        let inst = Instance::new(&g, &irreps, h).unwrap();
        for k in 1..=2 {
            let hk = order_two(&g, h);
            let blocks = fourier_blocks(&g, &irreps, &hk, k).unwrap();
            assert!((blocks.total_trace() - 1.0).abs() < 1e-10);
            for (idx, b) in blocks.blocks.iter().enumerate() {
                let p = inst.irrep_probability(&b.tuple);
                assert!((blocks.irrep_probability(idx) - p).abs() < 1e-12);
                assert!((irrep_probability(&g, &irreps, &hk, &b.tuple).unwrap() - p).abs() < 1e-12);
            }
            let triv = fourier_blocks(&g, &irreps, &Subgroup::trivial(&g), k).unwrap();
            for (idx, b) in triv.blocks.iter().enumerate() {
                assert!((triv.irrep_probability(idx) - inst.plancherel(&b.tuple)).abs() < 1e-12);
                let d = b.multiplicity;
                let scaled = &b.block * c(g.order().pow(k as u32) as f64);
                assert!(max_abs_diff(&scaled, &CMat::identity(d, d)) < 1e-9);
            }
        }
        // θ_(3): d = 1, χ(h) = 1
        let first = vec![0usize];
        assert_eq!(irreps[0].degree(), 1);
        assert!((inst.irrep_probability(&first) - 1.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn z2_whole_group() {
        let g = make_cyclic(2).unwrap();
        let irreps = irreps_cyclic(2);
        let blocks = fourier_blocks(&g, &irreps, &Subgroup::whole(&g), 1).unwrap();
        assert!((blocks.irrep_probability(0) - 1.0).abs() < 1e-15);
        assert!(blocks.irrep_probability(1).abs() < 1e-15);
    }

    #[test]
    fn marginals_do_not_depend_on_the_conjugate() {
        let g = make_symmetric(4).unwrap();
        let irreps = irreps_symmetric(4).unwrap();
        let h = default_h(&g).unwrap();
        let inst = Instance::new(&g, &irreps, h).unwrap();
        for &x in &inst.conjugates {
            let hx = order_two(&g, x);
            for k in 1..=2 {
                for idx in 0..inst.tuple_count(k).unwrap() {
                    let t = inst.tuple(k, idx);
                    let p = irrep_probability(&g, &irreps, &hx, &t).unwrap();
                    assert!((p - inst.irrep_probability(&t)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn x_function_edge_cases() {
        let g = make_symmetric(3).unwrap();
        let irreps = irreps_symmetric(3).unwrap();
        let h = default_h(&g).unwrap();
        let inst = Instance::new(&g, &irreps, h).unwrap();
        let triv = irreps.iter().position(|r| r.character(h).re > 0.5 && r.degree() == 1).unwrap();
        let one = CVec::from_element(1, c(1.0));
        for k in 1..=3 {
            let t = vec![triv; k];
            let x = inst.x_function(&t, &one, g.identity()).unwrap();
            assert!((x - (1.0 - 0.5f64.powi(k as i32))).abs() < 1e-15);
        }
        // the sign irrep kills b: ρ(H) = 0
        let sign = irreps.iter().position(|r| r.degree() == 1 && r.character(h).re < -0.5).unwrap();
        assert!((inst.x_value(&[sign], &one, 0).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(inst.conditional_prob(&[sign], Hidden::Conjugate(0), 1.0, &one), 0.0);
        assert!(Instance::new(&g, &irreps, g.identity()).is_err());
    }

    #[test]
    fn conditionals_sum_to_one() {
        let g = make_wreath_s2(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let inst = Instance::new(&g, &irreps, default_h(&g).unwrap()).unwrap();
        let meas = KMeasurement::random(&inst, 2, 5, FrameKind::Fused).unwrap();
        for idx in (0..81).step_by(7) {
            let t = inst.tuple(2, idx);
            let f = meas.frame(idx).unwrap();
            for conj in 0..inst.class_size() {
                let s: f64 = f
                    .weights
                    .iter()
                    .zip(&f.vectors)
                    .map(|(&a, b)| inst.conditional_prob(&t, Hidden::Conjugate(conj), a, b))
                    .sum();
                let expected = if inst.rank(&t) > 0 { 1.0 } else { 0.0 };
                assert!((s - expected).abs() < 1e-10);
            }
            let s: f64 = f.weights.iter().zip(&f.vectors).map(|(&a, b)| inst.conditional_prob(&t, Hidden::Trivial, a, b)).sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn distributions_and_tv() {
        let g = make_wreath_s2(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let inst = Instance::new(&g, &irreps, default_h(&g).unwrap()).unwrap();
        let meas = KMeasurement::random(&inst, 1, 11, FrameKind::Basis).unwrap();
        let trivial = full_distribution(&inst, 1, &meas, Hidden::Trivial).unwrap();
        assert!((trivial.total() - 1.0).abs() < 1e-10);
        let report = avg_tv_over_conjugates(&inst, 1, &meas).unwrap();
        assert_eq!(report.per_conjugate.len(), 6);
        for conj in 0..6 {
            let d = full_distribution(&inst, 1, &meas, Hidden::Conjugate(conj)).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-10);
            assert!(d.min() > -1e-12);
            let tv = d.l1_distance(&trivial);
            assert!((tv - report.per_conjugate[conj]).abs() < 1e-12);
        }
        let again = full_distribution(&inst, 1, &meas, Hidden::Conjugate(2)).unwrap();
        let first = full_distribution(&inst, 1, &meas, Hidden::Conjugate(2)).unwrap();
        assert_eq!(again.outcomes, first.outcomes);
        let csv = trivial.to_csv().unwrap();
        assert!(csv.starts_with("rho_label,b_index,probability\n"));
    }

    #[test]
    fn missing_frame_is_an_error() {
        let g = make_symmetric(3).unwrap();
        let irreps = irreps_symmetric(3).unwrap();
        let inst = Instance::new(&g, &irreps, default_h(&g).unwrap()).unwrap();
        let mut meas = KMeasurement::standard(&inst, 1).unwrap();
        meas.frames[2] = None;
        assert!(matches!(full_distribution(&inst, 1, &meas, Hidden::Trivial), Err(Error::MissingFrame(_))));
        // the sign irrep has zero mass under the hidden subgroup, so its frame is optional there
        let sign = irreps.iter().position(|r| r.degree() == 1 && r.character(inst.h).re < -0.5).unwrap();
        let mut meas = KMeasurement::standard(&inst, 1).unwrap();
        meas.frames[sign] = None;
        let d = full_distribution(&inst, 1, &meas, Hidden::Conjugate(0)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_blocks_in_the_standard_frame() {
        // a one-outcome frame on a 1-dim block with χ(h) = 1 puts the same
        // mass 2/|G| vs 1/|G| there; the trivial irrep contributes |2·1 − 1|/|G|
        let g = make_symmetric(3).unwrap();
        let irreps = irreps_symmetric(3).unwrap();
        let inst = Instance::new(&g, &irreps, default_h(&g).unwrap()).unwrap();
        let meas = KMeasurement::standard(&inst, 1).unwrap();
        let r = avg_tv_over_conjugates(&inst, 1, &meas).unwrap();
        // trivial: 1/6, sign: 1/6, standard 2-dim: Σ_b |2 P_bb − 1|·2/6
        assert!(r.average >= 2.0 / 6.0 - 1e-12);
    }

    #[test]
    fn trace_distance_block_vs_dense() {
        let cases: Vec<(FiniteGroup, usize)> =
            vec![(make_dihedral(4).unwrap(), 3), (make_symmetric(3).unwrap(), 2), (make_cyclic(4).unwrap(), 3)];
        for (g, tmax) in cases {
            let irreps = irreps_for(&g).unwrap();
            let h = default_h(&g).unwrap();
            let inst = Instance::new(&g, &irreps, h).unwrap();
            for t in 1..=tmax {
                let blocks = mixed_conjugate_trace_distance(&inst, t).unwrap();
                let dense = mixed_conjugate_trace_distance_dense(&g, h, t).unwrap();
                assert!((blocks - dense).abs() < 1e-9, "{} t={t}: {blocks} vs {dense}", g.kind());
            }
        }
    }

    #[test]
    fn trace_distance_caps() {
        let g = make_wreath_s2(3).unwrap();
        let irreps = irreps_wreath(3).unwrap();
        let inst = Instance::new(&g, &irreps, default_h(&g).unwrap()).unwrap();
        assert!(mixed_conjugate_trace_distance(&inst, 3).is_ok());
        assert!(matches!(mixed_conjugate_trace_distance(&inst, 0), Err(Error::ResourceCap(_))));
        assert!(matches!(mixed_conjugate_trace_distance(&inst, 4), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn frame_seeds_are_stable() {
        assert_eq!(frame_seed(7, 3), frame_seed(7, 3));
        assert_ne!(frame_seed(7, 3), frame_seed(7, 4));
        assert_ne!(frame_seed(7, 3), frame_seed(8, 3));
    }
}
