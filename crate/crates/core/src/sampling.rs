//! Seeded generation of random rationals and points.
//!
//! Every sampler takes an explicit RNG; [`indexed_rng`] derives an
//! independent stream per sample index so results do not depend on the
//! order in which samples are drawn.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Q;

/// A generator seeded by `seed` on stream `index`.
pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A rational in `[−radius, radius]` with denominator at most `max_den`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, radius: i64, max_den: i64) -> Q {
    let d = rng.gen_range(1..=max_den.max(1));
    let n = rng.gen_range(-radius * d..=radius * d);
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A point of the box `[−radius, radius]^n`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: i64, max_den: i64) -> Vec<Q> {
    (0..n).map(|_| random_q(rng, radius, max_den)).collect()
}

/// An integer vector with entries in `[−bound, bound]`, not all zero.
pub fn random_nonzero_int_vec<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}
