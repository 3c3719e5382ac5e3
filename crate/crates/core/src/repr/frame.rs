use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{c, haar_unitary, max_abs_diff, CMat, CVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    /// one Haar-random orthonormal basis, weights 1
    Basis,
    /// two independent Haar bases, weights 1/2
    Fused,
}

impl std::str::FromStr for FrameKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "basis" => Ok(FrameKind::Basis),
            "fused" => Ok(FrameKind::Fused),
            other => Err(crate::Error::Parse(format!("unknown frame kind {other:?}"))),
        }
    }
}

/// Rank-one POVM `{a_b |b⟩⟨b|}` resolving the identity.
#[derive(Clone, Debug)]
pub struct Frame {
    pub weights: Vec<f64>,
    pub vectors: Vec<CVec>,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn from_unitary(u: &CMat, weight: f64) -> Self {
        let vectors = (0..u.ncols()).map(|j| u.column(j).into_owned()).collect();
        Frame { weights: vec![weight; u.ncols()], vectors }
    }

    pub fn standard_basis(d: usize) -> Self {
        Frame::from_unitary(&CMat::identity(d, d), 1.0)
    }

    pub fn completeness_defect(&self) -> f64 {
        let d = self.dim();
        let mut sum = CMat::zeros(d, d);
        for (a, b) in self.weights.iter().zip(&self.vectors) {
            sum += b * b.adjoint() * c(*a);
        }
        max_abs_diff(&sum, &CMat::identity(d, d))
    }
}

pub fn random_frame(d: usize, seed: u64, kind: FrameKind) -> Frame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        FrameKind::Basis => Frame::from_unitary(&haar_unitary(d, &mut rng), 1.0),
        FrameKind::Fused => {
            let mut f = Frame::from_unitary(&haar_unitary(d, &mut rng), 0.5);
            let g = Frame::from_unitary(&haar_unitary(d, &mut rng), 0.5);
            f.weights.extend(g.weights);
            f.vectors.extend(g.vectors);
            f
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_are_complete() {
        let f = random_frame(1, 3, FrameKind::Basis);
        assert_eq!(f.len(), 1);
        assert!((f.vectors[0][0].norm() - 1.0).abs() < 1e-12);
        for d in 1..10 {
            assert!(random_frame(d, d as u64, FrameKind::Basis).completeness_defect() < 1e-12);
        }
        let fused = random_frame(4, 11, FrameKind::Fused);
        assert_eq!(fused.len(), 8);
        assert!(fused.weights.iter().all(|&w| w == 0.5));
        assert!(fused.completeness_defect() < 1e-12);
        for b in &fused.vectors {
            assert!((b.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_frame(3, 42, FrameKind::Fused);
        let b = random_frame(3, 42, FrameKind::Fused);
        for (x, y) in a.vectors.iter().zip(&b.vectors) {
            assert_eq!(x, y);
        }
    }
}
