use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, Open01, StandardNormal};
use sahn::{CondensedMatrix, VectorDataset};

use crate::{BenchError, Result};

/// `n` points drawn from a mixture of `modes` unit-covariance Gaussians in
/// `dim` dimensions. Mode centers are themselves Gaussian with standard
/// deviation `spread` per coordinate (`√modes` if `None`); each point picks
/// its mode uniformly at random.
pub fn gen_gaussian_mixture(
    n: usize,
    dim: usize,
    modes: usize,
    spread: Option<f64>,
    seed: u64,
) -> Result<VectorDataset> {
    if n == 0 || dim == 0 || modes == 0 {
        return Err(invalid("n, dim and modes must all be positive"));
    }
    let spread = spread.unwrap_or((modes as f64).sqrt());
    let centers = Normal::new(0.0, spread).map_err(|_| invalid("spread must be finite and nonnegative"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means: Vec<f64> = (0..modes * dim).map(|_| rng.sample(centers)).collect();
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        let k = rng.random_range(0..modes);
        for c in &means[k * dim..(k + 1) * dim] {
            let noise: f64 = rng.sample(StandardNormal);
            coords.push(c + noise);
        }
    }
    Ok(VectorDataset::new(dim, coords)?)
}

/// A condensed matrix over `n` points with i.i.d. entries uniform on the
/// open interval (0, 1).
pub fn gen_uniform_dissimilarities(n: usize, seed: u64) -> Result<CondensedMatrix> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..sahn::condensed_len(n)).map(|_| rng.sample(Open01)).collect();
    Ok(CondensedMatrix::new(n, values)?)
}

fn invalid(message: &str) -> BenchError {
    BenchError::Clustering(sahn::Error::InvalidArgument(message.into()))
}
