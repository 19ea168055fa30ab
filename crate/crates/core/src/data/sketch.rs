use rand_distr::{Distribution, StandardNormal};

use super::{rng_for, Stream};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// `r x m` Gaussian test matrix with entries `N(0, 1/r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchOperator {
    matrix: DenseMatrix,
}

impl SketchOperator {
    /// Entries are drawn row by row from `stream`, so two operators on the
    /// same stream share their leading rows up to the `r^{-1/2}` scale.
    pub fn gaussian(rank: usize, source_dim: usize, seed: u64, stream: Stream) -> Result<Self> {
        if rank == 0 {
            return Err(Error::param("rank", "sketch rank must be at least 1"));
        }
        let mut rng = rng_for(seed, stream);
        let sd = 1.0 / libm::sqrt(rank as f64);
        let mut matrix = DenseMatrix::zeros(rank, source_dim);
        for i in 0..rank {
            for j in 0..source_dim {
                let z: f64 = StandardNormal.sample(&mut rng);
                matrix[(i, j)] = sd * z;
            }
        }
        Ok(SketchOperator { matrix })
    }

    /// Identity stand-in, used to check the sketched path reduces to the plain one.
    pub fn identity(dim: usize) -> Self {
        SketchOperator {
            matrix: DenseMatrix::identity(dim),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// `Γ A`.
    pub fn apply(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        self.matrix.matmul(a)
    }
}

/// `Γ A` with Γ drawn from the per-rank substream `Stream::Sketch(r)`.
pub fn sketch(a: &DenseMatrix, rank: usize, seed: u64) -> Result<DenseMatrix> {
    SketchOperator::gaussian(rank, a.rows(), seed, Stream::Sketch(rank as u64))?.apply(a)
}
