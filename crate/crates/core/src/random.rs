//! Seeded generators for randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::flips::flip;
use crate::qtorus::{CommutationMatrix, Exponent, Torus, TorusElement};
use crate::scalars::{Ring, Scalar};
use crate::surface::Quasitriangulation;

/// Default seed of every randomized check.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for item `index` of a batch, so batches can run in any order.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Antisymmetric matrix with entries in `[-bound, bound]` on generators `x1..xn`.
pub fn random_torus<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Torus {
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    let upper: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    Arc::new(CommutationMatrix::from_upper(labels, |i, j| upper[i][j]))
}

pub fn random_exponent<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Exponent {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Sum of up to three signed `v`-monomials.
pub fn random_scalar<R: Rng>(rng: &mut R, ring: &Ring) -> Scalar {
    let mut s = ring.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c: i64 = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
        s += &ring.monomial(c.into(), rng.gen_range(-4..=4));
    }
    if s.is_zero() {
        ring.one()
    } else {
        s
    }
}

pub fn random_element<R: Rng>(rng: &mut R, torus: &Torus, ring: &Ring, terms: usize, bound: i64) -> TorusElement {
    let mut x = TorusElement::zero(torus, ring);
    for _ in 0..terms {
        let k = random_exponent(rng, torus.len(), bound);
        x.add_term(k, &random_scalar(rng, ring));
    }
    x
}

/// Flip at `steps` randomly chosen flippable inner edges.
pub fn random_flips<R: Rng>(rng: &mut R, q: &Quasitriangulation, steps: usize) -> Quasitriangulation {
    let mut cur = q.clone();
    for _ in 0..steps {
        let mut inner = cur.classify_edges().inner;
        inner.shuffle(rng);
        if let Some(next) = inner.iter().find_map(|e| flip(&cur, e).ok()) {
            cur = next.new_q;
        }
    }
    cur
}
