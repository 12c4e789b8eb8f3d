//! Seeded generators for random elements, effects, projections, unitaries and
//! completely positive maps.
//!
//! Every generator takes an explicit RNG; [`rng`] builds the deterministic
//! ChaCha stream used throughout the crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Element, FdAlgebra};
use crate::linalg::{c, Matrix, Vector};
use crate::maps::LinMap;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    num_complex::Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with i.i.d. standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| gaussian(rng))
}

/// Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix.
pub fn unitary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

fn blockwise<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra, mut f: impl FnMut(&mut R, usize) -> Matrix) -> Element {
    let blocks = alg.dims().iter().map(|&n| f(rng, n)).collect();
    Element::new(alg.clone(), blocks).expect("generator produced correct shapes")
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    blockwise(rng, alg, |r, n| ginibre(r, n, n))
}

pub fn self_adjoint<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    element(rng, alg).real_part()
}

/// Self-adjoint element of operator norm one (zero on the trivial algebra).
pub fn unit_self_adjoint<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    let a = self_adjoint(rng, alg);
    let n = a.norm();
    if n == 0.0 {
        a
    } else {
        a.scale_real(1.0 / n)
    }
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    blockwise(rng, alg, unitary_matrix)
}

/// `u diag(values) u*` with a Haar unitary `u`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> Matrix {
    let n = values.len();
    let u = unitary_matrix(rng, n);
    let d = Matrix::from_diagonal(&Vector::from_iterator(n, values.iter().map(|&x| c(x))));
    let m = &u * d * u.adjoint();
    (&m + m.adjoint()) * c(0.5)
}

/// Positive element `a*a` with a Ginibre `a`; generically full rank.
pub fn positive<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    let a = element(rng, alg);
    &a.adjoint() * &a
}

/// Positive element whose blocks have rank at most `rank` (capped by block size).
pub fn low_rank_positive<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra, rank: usize) -> Element {
    blockwise(rng, alg, |r, n| {
        let g = ginibre(r, n, rank.min(n));
        &g * g.adjoint()
    })
}

/// Effect with eigenvalues drawn uniformly from `[0, 1]`.
pub fn effect<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    blockwise(rng, alg, |r, n| {
        let vals: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        with_spectrum(r, &vals)
    })
}

/// Effect whose eigenvalues are exactly 1 with probability 1/4, exactly 0 with
/// probability 1/4, and uniform on `(0, 1)` otherwise. Exercises floors,
/// ceilings and rank-deficient cases.
pub fn effect_with_atoms<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    blockwise(rng, alg, |r, n| {
        let vals: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = r.random();
                if u < 0.25 {
                    1.0
                } else if u < 0.5 {
                    0.0
                } else {
                    r.random_range(0.02..0.98)
                }
            })
            .collect();
        with_spectrum(r, &vals)
    })
}

/// Effect with spectrum in `[lo, hi]`.
pub fn effect_in_range<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra, lo: f64, hi: f64) -> Element {
    blockwise(rng, alg, |r, n| {
        let vals: Vec<f64> = (0..n).map(|_| r.random_range(lo..=hi)).collect();
        with_spectrum(r, &vals)
    })
}

/// Projection with independently uniform rank in each block.
pub fn projection<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    blockwise(rng, alg, |r, n| {
        let rank = r.random_range(0..=n);
        let vals: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        with_spectrum(r, &vals)
    })
}

/// Projection with the given rank in every block (capped by block size).
pub fn projection_of_rank<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra, rank: usize) -> Element {
    blockwise(rng, alg, |r, n| {
        let vals: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        with_spectrum(r, &vals)
    })
}

/// Density matrix (positive, trace one) on `alg`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> Element {
    let p = positive(rng, alg);
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}

/// State `a ↦ Σ tr(ρ_i a_i)` for a random density `ρ`.
pub fn state<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra) -> LinMap {
    LinMap::from_density(&density(rng, alg))
}

/// CP map `a ↦ Σ_k K_k* a K_k` (block-to-block Kraus operators), `kraus_per_pair`
/// operators for every (domain block, codomain block) pair.
pub fn cp_map<R: Rng + ?Sized>(rng: &mut R, dom: &FdAlgebra, cod: &FdAlgebra, kraus_per_pair: usize) -> LinMap {
    let mut kraus = Vec::new();
    for (i, &n) in dom.dims().iter().enumerate() {
        for (j, &m) in cod.dims().iter().enumerate() {
            for _ in 0..kraus_per_pair {
                kraus.push((i, j, ginibre(rng, n, m)));
            }
        }
    }
    LinMap::from_kraus(dom, cod, &kraus)
}

/// CP subunital map, rescaled so that `‖f(1)‖ = scale ≤ 1`.
pub fn cpsu_map<R: Rng + ?Sized>(
    rng: &mut R,
    dom: &FdAlgebra,
    cod: &FdAlgebra,
    kraus_per_pair: usize,
    scale: f64,
) -> LinMap {
    let f = cp_map(rng, dom, cod, kraus_per_pair);
    let n = f.apply(&dom.unit()).norm();
    if n == 0.0 {
        f
    } else {
        f.scale_real(scale / n)
    }
}

/// CP unital map `a ↦ Σ K_k* a K_k` with `Σ K_k* K_k = 1`, obtained by
/// normalising random Kraus operators.
pub fn cpu_map<R: Rng + ?Sized>(rng: &mut R, dom: &FdAlgebra, cod: &FdAlgebra, kraus_per_pair: usize) -> LinMap {
    let f = cp_map(rng, dom, cod, kraus_per_pair);
    let one = f.apply(&dom.unit());
    // g(a) = f(1)^{-1/2} f(a) f(1)^{-1/2} is unital and CP
    let inv_sqrt = one.map_blocks(|_, m| {
        let (vals, vecs) = crate::linalg::hermitian_eigen(m);
        let d = Matrix::from_diagonal(&Vector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| c(1.0 / v.max(1e-300).sqrt())),
        ));
        &vecs * d * vecs.adjoint()
    });
    LinMap::conjugation_by(&inv_sqrt).compose(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::ToleranceConfig;

    #[test]
    fn generators_respect_their_contracts() {
        let tol = ToleranceConfig::default();
        let alg = FdAlgebra::new(vec![3, 1]).unwrap();
        let mut r = rng(3);
        for _ in 0..10 {
            let u = unitary(&mut r, &alg);
            assert!((&u.adjoint() * &u).approx_eq(&alg.unit(), &tol));
            assert!(effect(&mut r, &alg).is_effect(&tol));
            assert!(effect_with_atoms(&mut r, &alg).is_effect(&tol));
            assert!(projection(&mut r, &alg).is_projection(&tol));
            assert!(positive(&mut r, &alg).is_positive(&tol));
            let rho = density(&mut r, &alg);
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            let f = cpu_map(&mut r, &alg, &FdAlgebra::matrix(2), 2);
            assert!(f.is_unital(&tol));
            assert!(f.is_completely_positive(&tol));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let alg = FdAlgebra::matrix(2);
        assert_eq!(element(&mut rng(9), &alg), element(&mut rng(9), &alg));
    }
}
