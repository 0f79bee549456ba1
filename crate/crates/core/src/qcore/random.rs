//! Random test instances. Used by the lemma suites and the test oracles.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::{self, CMatrix};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    linalg::hermitize(&ginibre(rng, n, n))
}

/// Random density matrix `G G† / Tr[G G†]` with a random rank in `1..=n`.
pub fn density(rng: &mut impl Rng, n: usize) -> CMatrix {
    let rank = rng.random_range(1..=n);
    density_with_rank(rng, n, rank)
}

pub fn density_with_rank(rng: &mut impl Rng, n: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, n, rank);
    let m = &g * g.adjoint();
    let tr = linalg::trace_re(&m);
    linalg::hermitize(&(m / linalg::c(tr)))
}

/// Random full-rank density matrix.
pub fn full_rank_density(rng: &mut impl Rng, n: usize) -> CMatrix {
    density_with_rank(rng, n, n)
}

/// Random POVM element: either a random projector or `U diag(s) U†` with
/// `s` uniform in `[0, 1]`.
pub fn povm_element(rng: &mut impl Rng, n: usize) -> CMatrix {
    let e = linalg::eig_unchecked(&hermitian(rng, n));
    if rng.random_bool(0.5) {
        let rank = rng.random_range(0..=n);
        e.map_indexed(|i, _| if i < rank { 1.0 } else { 0.0 })
    } else {
        let s: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        e.map_indexed(|i, _| s[i])
    }
}

/// Random probability vector; with `sparse` some entries are zeroed.
pub fn distribution(rng: &mut impl Rng, n: usize, sparse: bool) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..n)
            .map(|_| {
                if sparse && rng.random_bool(0.25) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let s: f64 = p.iter().sum();
        if s > 1e-3 {
            p.iter_mut().for_each(|x| *x /= s);
            return p;
        }
    }
}
