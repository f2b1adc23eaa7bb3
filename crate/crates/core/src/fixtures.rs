//! Small hand-made inputs with known behavior, plus seeded random matrices
//! for test batteries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::condensed::{condensed_len, CondensedMatrix};
use crate::method::{FlexibleCoefficients, Method};

/// Three points, `x0` equidistant (2.0) from `x1` and `x2`, which are 3.0
/// apart.
pub fn dataset_a() -> CondensedMatrix {
    CondensedMatrix::new(3, vec![2.0, 2.0, 3.0]).unwrap()
}

/// Three points, `x1` equidistant (2.0) from `x0` and `x2`.
pub fn dataset_b() -> CondensedMatrix {
    CondensedMatrix::new(3, vec![2.0, 3.0, 2.0]).unwrap()
}

/// Three points, `x2` equidistant (2.0) from `x0` and `x1`.
pub fn dataset_c() -> CondensedMatrix {
    CondensedMatrix::new(3, vec![3.0, 2.0, 2.0]).unwrap()
}

/// Five points `A..E` on which the update `d(I∪J,K) = d(I,K) + d(J,K) +
/// d(I,J)` is reducible but still defeats the nearest-neighbor chain.
pub fn additive_counterexample() -> CondensedMatrix {
    CondensedMatrix::new(5, vec![3.0, 4.0, 6.0, 15.0, 5.0, 7.0, 12.0, 1.0, 13.0, 14.0]).unwrap()
}

/// The additive recurrence that goes with [`additive_counterexample`].
pub fn additive_method() -> Method {
    Method::Flexible(FlexibleCoefficients::new(1.0, 1.0, 1.0, 0.0))
}

/// Unit equilateral triangle.
pub fn equilateral() -> CondensedMatrix {
    CondensedMatrix::new(3, vec![1.0; 3]).unwrap()
}

/// Random matrix with entries drawn from `0..levels`, so that ties and zero
/// distances are common.
pub fn random_integer(n: usize, levels: u32, rng: &mut impl Rng) -> CondensedMatrix {
    let values = (0..condensed_len(n))
        .map(|_| rng.random_range(0..levels) as f64)
        .collect();
    CondensedMatrix::new(n, values).unwrap()
}

/// Random matrix with entries uniform in `[0, 1)`.
pub fn random_real(n: usize, rng: &mut impl Rng) -> CondensedMatrix {
    let values = (0..condensed_len(n)).map(|_| rng.random::<f64>()).collect();
    CondensedMatrix::new(n, values).unwrap()
}

/// Seeded generator for fixture batteries.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
