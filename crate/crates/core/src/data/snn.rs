use alloc::format;
use alloc::vec::Vec;

use rand::distr::{Distribution, Open01};
use rand::seq::index;

use super::{rng_for, Stream};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Sparse nonnegative test matrix
/// `A = Σ_{i≤l} (2/i) x_i y_iᵀ + Σ_{l<i≤n} (1/i) x_i y_iᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnnConfig {
    pub m: usize,
    pub n: usize,
    /// Number of leading terms with the doubled coefficient.
    pub l: usize,
    /// Fraction of nonzeros in every factor vector.
    pub density: f64,
    pub seed: u64,
}

impl SnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::param("m/n", "dimensions must be positive"));
        }
        if self.l < 1 || self.l >= self.n {
            return Err(Error::param("l", format!("must satisfy 1 <= l < n = {}", self.n)));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::param("density", "must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn coefficient(&self, term: usize) -> f64 {
        let i = term as f64;
        if term <= self.l {
            2.0 / i
        } else {
            1.0 / i
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    pub dim: usize,
    /// Ascending positions of the nonzeros.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnnTerm {
    pub coefficient: f64,
    pub left: SparseVector,
    pub right: SparseVector,
}

/// Exactly `round(density * dim)` (at least one) positions, drawn without
/// replacement, with values uniform on the open interval (0, 1).
fn sparse_uniform(dim: usize, density: f64, seed: u64, stream: Stream) -> SparseVector {
    let mut rng = rng_for(seed, stream);
    let nnz = (libm::round(density * dim as f64) as usize).clamp(1, dim);
    let mut indices = index::sample(&mut rng, dim, nnz).into_vec();
    indices.sort_unstable();
    let values = indices.iter().map(|_| Open01.sample(&mut rng)).collect();
    SparseVector {
        dim,
        indices,
        values,
    }
}

/// The `n` rank-one terms of the SNN matrix, term `i` (1-based) drawing its
/// factors from the `SnnLeft(i)` / `SnnRight(i)` substreams.
pub fn snn_terms(cfg: &SnnConfig) -> Result<Vec<SnnTerm>> {
    cfg.validate()?;
    Ok((1..=cfg.n)
        .map(|i| SnnTerm {
            coefficient: cfg.coefficient(i),
            left: sparse_uniform(cfg.m, cfg.density, cfg.seed, Stream::SnnLeft(i as u64)),
            right: sparse_uniform(cfg.n, cfg.density, cfg.seed, Stream::SnnRight(i as u64)),
        })
        .collect())
}

/// Materializes the SNN matrix densely. Entries are nonnegative.
pub fn gen_snn(cfg: &SnnConfig) -> Result<DenseMatrix> {
    let mut a = DenseMatrix::zeros(cfg.m, cfg.n);
    for term in snn_terms(cfg)? {
        for (&j, &yj) in term.right.indices.iter().zip(&term.right.values) {
            let scale = term.coefficient * yj;
            let col = a.col_mut(j);
            for (&i, &xi) in term.left.indices.iter().zip(&term.left.values) {
                col[i] += scale * xi;
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, n: usize, l: usize, density: f64, seed: u64) -> SnnConfig {
        SnnConfig {
            m,
            n,
            l,
            density,
            seed,
        }
    }

    #[test]
    fn full_density_is_dense_and_nonnegative() {
        let a = gen_snn(&cfg(2, 2, 1, 1.0, 0)).unwrap();
        assert!(a.as_slice().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn coefficients_switch_at_l() {
        let c = cfg(5, 5, 2, 0.5, 0);
        assert_eq!(c.coefficient(1), 2.0);
        assert_eq!(c.coefficient(2), 1.0);
        assert_eq!(c.coefficient(3), 1.0 / 3.0);
    }

    #[test]
    fn factor_nonzero_fraction_matches_density() {
        // Binomial(200, 0.05) oracle: mean 10, sd sqrt(9.5); the exact-count
        // sampler must land inside 3 sd on every factor.
        let c = cfg(200, 200, 20, 0.05, 1);
        let sd = libm::sqrt(200.0 * 0.05 * 0.95);
        for t in snn_terms(&c).unwrap() {
            for v in [&t.left, &t.right] {
                assert!((v.nnz() as f64 - 10.0).abs() <= 3.0 * sd);
                assert!(v.values.iter().all(|&x| x > 0.0 && x < 1.0));
                assert!(v.indices.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_snn(&cfg(4, 4, 1, 0.0, 0)).is_err());
        assert!(gen_snn(&cfg(4, 4, 1, 1.5, 0)).is_err());
        assert!(gen_snn(&cfg(4, 4, 4, 0.5, 0)).is_err());
        assert!(gen_snn(&cfg(4, 4, 0, 0.5, 0)).is_err());
    }

    #[test]
    fn seeds_change_the_matrix() {
        let mats: Vec<_> = (0..10)
            .map(|s| gen_snn(&cfg(30, 30, 3, 0.1, s)).unwrap())
            .collect();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                assert_ne!(mats[i], mats[j]);
            }
        }
        assert_eq!(mats[3], gen_snn(&cfg(30, 30, 3, 0.1, 3)).unwrap());
    }
}
