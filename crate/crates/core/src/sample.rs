//! Random and exhaustive inputs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csa::{Algebra, CsaElement, Quaternion, QuaternionAlgebra};
use crate::field::{Field, FieldElement};
use crate::matrix::Mat;

/// `num / den` with `|num| <= bound` and `1 <= den <= bound`; uniform residue
/// over a prime field.
pub fn random_element<R: Rng>(rng: &mut R, field: &Field, bound: i64) -> FieldElement {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..*p as i64)),
        _ => {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound.max(1));
            field.from_fraction(num, den).expect("nonzero denominator")
        }
    }
}

pub fn random_nonzero_element<R: Rng>(rng: &mut R, field: &Field, bound: i64) -> FieldElement {
    loop {
        let x = random_element(rng, field, bound);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A dense, sparse, rank-deficient or small diagonal `n x n` matrix, so that
/// both cyclic and non-cyclic inputs show up regularly.
pub fn random_matrix<R: Rng>(rng: &mut R, field: &Field, n: usize, bound: i64) -> Mat {
    let mut m = Mat::zeros(field, n, n);
    match rng.gen_range(0..4) {
        0 => {
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, random_element(rng, field, bound));
                }
            }
        }
        1 => {
            for i in 0..n {
                for j in 0..n {
                    if rng.gen_bool(0.4) {
                        m.set(i, j, random_element(rng, field, bound));
                    }
                }
            }
        }
        2 => {
            let skip = [rng.gen_range(0..n), rng.gen_range(0..n)];
            for i in 0..n {
                if skip.contains(&i) {
                    continue;
                }
                for j in 0..n {
                    m.set(i, j, random_element(rng, field, bound));
                }
            }
        }
        _ => {
            for i in 0..n {
                m.set(i, i, field.from_i64(rng.gen_range(-1..=1)));
            }
        }
    }
    m
}

/// `count` rational matrices of size `1..=max_n` with entries bounded by 5.
pub fn rational_corpus(seed: u64, count: usize, max_n: usize) -> Vec<Mat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            random_matrix(&mut rng, &Field::Rationals, n, 5)
        })
        .collect()
}

/// Every `n x n` matrix over `GF(p)`, in base-`p` counting order.
pub fn all_matrices(p: u64, n: usize) -> Vec<Mat> {
    let field = Field::Prime(p);
    let total = p.pow((n * n) as u32);
    (0..total)
        .map(|mut idx| {
            let data = (0..n * n)
                .map(|_| {
                    let c = idx % p;
                    idx /= p;
                    field.from_i64(c as i64)
                })
                .collect();
            Mat::new(&field, n, n, data).expect("shape")
        })
        .collect()
}

pub fn random_quaternion<R: Rng>(rng: &mut R, d: &std::sync::Arc<QuaternionAlgebra>, bound: i64) -> Quaternion {
    let coords = std::array::from_fn(|_| random_element(rng, d.base(), bound));
    d.from_coords(coords).expect("coordinates in base field")
}

pub fn random_csa_element<R: Rng>(rng: &mut R, alg: &Algebra, bound: i64) -> CsaElement {
    let coords: Vec<FieldElement> = (0..alg.dim()).map(|_| random_element(rng, alg.field(), bound)).collect();
    alg.from_coords(&coords).expect("dimension matches")
}
