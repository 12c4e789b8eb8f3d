//! Pseudoinverses, approximate pseudoinverses, division, polar decomposition
//! and the sequential quotient.

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix};
use crate::projections;
use crate::spectral;
use crate::tolerance::ToleranceConfig;

/// Polar decomposition `a = isometry · modulus` with `modulus = √(a*a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts {
    pub isometry: Element,
    pub modulus: Element,
}

/// Finitely many terms `t_n`, one per nonempty spectral band of `a*a`, with
/// `Σ t_n a = ⌈a⌋` and `Σ a t_n = ⌈a⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxPseudoinverse {
    pub terms: Vec<Element>,
    /// Band index `n` and interval `(lo, hi]` of each term; band 0 is `(1, ∞)`.
    pub thresholds: Vec<(usize, f64, f64)>,
}

impl ApproxPseudoinverse {
    pub fn sum(&self, a: &Element) -> Element {
        self.terms.iter().fold(a.algebra().zero(), |acc, t| &acc + t)
    }
}

fn cutoff(a: &Element, tol: &ToleranceConfig) -> f64 {
    tol.snap_eps * a.norm()
}

/// Moore–Penrose pseudoinverse, blockwise, dropping singular values at most
/// `snap_eps·‖a‖`.
pub fn pseudoinverse(a: &Element, tol: &ToleranceConfig) -> Element {
    let cut = cutoff(a, tol);
    a.map_blocks(|_, m| linalg::pinv(m, cut))
}

/// Band index of a positive eigenvalue: `n` with `λ ∈ (1/(n+1), 1/n]`, and 0 for `λ > 1`.
fn band_of(lambda: f64) -> usize {
    if lambda > 1.0 {
        0
    } else {
        (1.0 / lambda).floor() as usize
    }
}

fn band_interval(n: usize) -> (f64, f64) {
    if n == 0 {
        (1.0, f64::INFINITY)
    } else {
        (1.0 / (n as f64 + 1.0), 1.0 / n as f64)
    }
}

/// Positive case: `q_n = ⌈(a − 1/n)₊⌉`, `e_n = q_{n+1} − q_n`, `t_n = (a e_n)^~1`.
fn approx_pinv_positive(a: &Element, tol: &ToleranceConfig) -> (Vec<Element>, Vec<(usize, f64, f64)>) {
    let cut = cutoff(a, tol);
    let eig: Vec<(Vec<f64>, Matrix)> = a.blocks().iter().map(linalg::hermitian_eigen).collect();
    let mut bands: Vec<usize> = eig
        .iter()
        .flat_map(|(vals, _)| vals.iter().filter(|&&v| v > cut).map(|&v| band_of(v)))
        .collect();
    bands.sort_unstable();
    bands.dedup();
    let mut terms = Vec::with_capacity(bands.len());
    let mut thresholds = Vec::with_capacity(bands.len());
    for n in bands {
        // (a e_n)^~1 is Σ λ⁻¹ v v* over the eigenpairs in the band
        let t_n = a.map_blocks(|b, _| {
            let (vals, vecs) = &eig[b];
            let mut out = Matrix::zeros(vals.len(), vals.len());
            for i in (0..vals.len()).filter(|&i| vals[i] > cut && band_of(vals[i]) == n) {
                let v = vecs.column(i);
                out += v * v.adjoint() * c(1.0 / vals[i]);
            }
            out
        });
        terms.push(t_n);
        let (lo, hi) = band_interval(n);
        thresholds.push((n, lo, hi));
    }
    (terms, thresholds)
}

/// Approximate pseudoinverse by spectral bands.
///
/// Positive input uses the bands of `a` directly; otherwise the terms `t_n` of
/// `b*b` are turned into `t_n b*`.
pub fn approximate_pseudoinverse(a: &Element, tol: &ToleranceConfig) -> ApproxPseudoinverse {
    if a.is_positive(tol) {
        let (terms, thresholds) = approx_pinv_positive(&a.real_part(), tol);
        return ApproxPseudoinverse { terms, thresholds };
    }
    let aa = (&a.adjoint() * a).real_part();
    let (terms, thresholds) = approx_pinv_positive(&aa, tol);
    let adj = a.adjoint();
    ApproxPseudoinverse {
        terms: terms.iter().map(|t| t * &adj).collect(),
        thresholds,
    }
}

fn check_residual(residual: f64, scale: f64, tol: &ToleranceConfig) -> bool {
    residual <= tol.at_scale(scale)
}

/// `a/b`: the unique `c` with `a = cb` and support contained in `⌈b⟩`.
pub fn divide(a: &Element, b: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.algebra().check_same(b.algebra())?;
    let q = a * &pseudoinverse(b, tol);
    let residual = (&(&q * b) - a).norm();
    if !check_residual(residual, a.norm() + q.norm() * b.norm(), tol) {
        return Err(Error::DivisionUndefined { residual });
    }
    Ok(q)
}

/// `b\a`: the unique `c` with `a = bc` and range contained in `⌈b⌋`.
pub fn left_divide(b: &Element, a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.algebra().check_same(b.algebra())?;
    let q = &pseudoinverse(b, tol) * a;
    let residual = (&(b * &q) - a).norm();
    if !check_residual(residual, a.norm() + q.norm() * b.norm(), tol) {
        return Err(Error::DivisionUndefined { residual });
    }
    Ok(q)
}

/// `c\a/b`: the unique `d` with `a = c d b`, `⌈d⟩ ≤ ⌈c⌋` and `⌈d⌋ ≤ ⌈b⟩`.
pub fn sandwich(cl: &Element, a: &Element, b: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.algebra().check_same(b.algebra())?;
    a.algebra().check_same(cl.algebra())?;
    let d = &(&pseudoinverse(cl, tol) * a) * &pseudoinverse(b, tol);
    let residual = (&(&(cl * &d) * b) - a).norm();
    if !check_residual(residual, a.norm() + cl.norm() * d.norm() * b.norm(), tol) {
        return Err(Error::DivisionUndefined { residual });
    }
    Ok(d)
}

/// `a/b` computed as the series `Σ a t_n` over an approximate pseudoinverse of `b`.
pub fn divide_by_series(a: &Element, b: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.algebra().check_same(b.algebra())?;
    let ap = approximate_pseudoinverse(b, tol);
    Ok(ap.terms.iter().fold(a.algebra().zero(), |acc, t| &acc + &(a * t)))
}

/// Smallest `λ ≥ 0` with `a*a ≤ λ² b*b`, or `None` when no such `λ` exists
/// (`a` does not vanish off the support of `b`).
pub fn douglas_lambda(a: &Element, b: &Element, tol: &ToleranceConfig) -> Result<Option<f64>> {
    a.algebra().check_same(b.algebra())?;
    let scale = a.norm().max(1.0);
    let off = a * &projections::support(b, tol).perp();
    if off.norm() > tol.snap_eps * scale {
        return Ok(None);
    }
    let bb = (&b.adjoint() * b).real_part();
    let inv_root = pseudoinverse(&spectral::sqrt(&bb, tol)?, tol);
    let aa = &a.adjoint() * a;
    let m = (&(&inv_root * &aa) * &inv_root).real_part();
    let top = m
        .blocks()
        .iter()
        .filter_map(|blk| linalg::hermitian_eigen(blk).0.last().cloned())
        .fold(0.0, f64::max);
    Ok(Some(top.max(0.0).sqrt()))
}

/// Polar decomposition from the singular value decomposition of each block.
pub fn polar(a: &Element, tol: &ToleranceConfig) -> PolarParts {
    let cut = cutoff(a, tol);
    let mut iso = Vec::with_capacity(a.blocks().len());
    let mut modulus = Vec::with_capacity(a.blocks().len());
    for m in a.blocks() {
        let n = m.nrows();
        let (u, s, v) = linalg::svd(m);
        let mut w = Matrix::zeros(n, n);
        let mut r = Matrix::zeros(n, n);
        for (i, &sv) in s.iter().enumerate() {
            let vi = v.column(i);
            r += vi * vi.adjoint() * c(sv);
            if sv > cut {
                w += u.column(i) * vi.adjoint();
            }
        }
        iso.push(w);
        modulus.push(linalg::hermitian_part(&r));
    }
    PolarParts {
        isometry: Element::new(a.algebra().clone(), iso).expect("shapes"),
        modulus: Element::new(a.algebra().clone(), modulus).expect("shapes"),
    }
}

/// For positive `a ≤ λb`: the unique positive `c` with `a = √b c √b` and `⌈c⌉ ≤ ⌈b⌉`.
pub fn seq_quotient(a: &Element, b: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.algebra().check_same(b.algebra())?;
    a.require_positive(tol)?;
    b.require_positive(tol)?;
    let rb = spectral::sqrt(b, tol)?;
    let inv = pseudoinverse(&rb, tol);
    let q = (&(&inv * a) * &inv).real_part();
    let residual = (&(&(&rb * &q) * &rb) - a).norm();
    if !check_residual(residual, a.norm() + q.norm() * b.norm(), tol) {
        return Err(Error::QuotientUndefined { residual });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FdAlgebra;
    use crate::random;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn pseudoinverse_examples() {
        let t = tol();
        assert!(pseudoinverse(&Element::diag(&[2.0, 0.0]), &t).approx_eq(&Element::diag(&[0.5, 0.0]), &t));
        let a = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
        let expected = Element::real_matrix(2, &[0.0, 0.0, 0.5, 0.0]);
        assert!(pseudoinverse(&a, &t).approx_eq(&expected, &t));
        let mut rng = random::rng(1);
        let u = random::unitary(&mut rng, &FdAlgebra::new(vec![3, 1]).unwrap());
        assert!(pseudoinverse(&u, &t).approx_eq(&u.adjoint(), &t));
    }

    #[test]
    fn pseudoinverse_identities() {
        let t = tol();
        let mut rng = random::rng(2);
        let alg = FdAlgebra::new(vec![3, 2]).unwrap();
        for _ in 0..20 {
            let a = &random::low_rank_positive(&mut rng, &alg, 2) * &random::element(&mut rng, &alg);
            let p = pseudoinverse(&a, &t);
            let sup = projections::support(&a, &t);
            let ran = projections::range(&a, &t);
            assert!((&p * &a).approx_eq(&sup, &t));
            assert!((&a * &p).approx_eq(&ran, &t));
            assert!(projections::range(&p, &t).approx_eq(&sup, &t));
            assert!(projections::support(&p, &t).approx_eq(&ran, &t));
        }
    }

    #[test]
    fn approximate_pseudoinverse_examples() {
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        assert!(approximate_pseudoinverse(&m2.zero(), &t).terms.is_empty());
        let one = approximate_pseudoinverse(&m2.unit(), &t);
        assert_eq!(one.terms.len(), 1);
        assert!(one.terms[0].approx_eq(&m2.unit(), &t));

        let a = Element::diag(&[1.0, 0.5, 1.0 / 3.0]);
        let ap = approximate_pseudoinverse(&a, &t);
        assert_eq!(ap.terms.len(), 3);
        let total = ap.terms.iter().fold(a.algebra().zero(), |acc, x| &acc + &(x * &a));
        assert!(total.approx_eq(&a.algebra().unit(), &t));
    }

    #[test]
    fn approximate_pseudoinverse_invariants() {
        let t = tol();
        let mut rng = random::rng(3);
        let alg = FdAlgebra::new(vec![3, 2]).unwrap();
        // band terms of small eigenvalues amplify roundoff by the condition number
        let t = t.with_eps_rel(1e-8);
        for _ in 0..20 {
            let a = &random::low_rank_positive(&mut rng, &alg, 2) * &random::element(&mut rng, &alg);
            let ap = approximate_pseudoinverse(&a, &t);
            let mut left = alg.zero();
            let mut right = alg.zero();
            for term in &ap.terms {
                assert!((term * &a).is_projection(&t));
                assert!((&a * term).is_projection(&t));
                left = &left + &(term * &a);
                right = &right + &(&a * term);
            }
            assert!(left.approx_eq(&projections::support(&a, &t), &t));
            assert!(right.approx_eq(&projections::range(&a, &t), &t));
            let total = ap.terms.iter().fold(alg.zero(), |acc, x| &acc + x);
            assert!(total.approx_eq(&pseudoinverse(&a, &t), &ToleranceConfig::default().with_eps_rel(1e-7)));
        }
    }

    #[test]
    fn division_examples() {
        let t = tol();
        let q = divide(&Element::diag(&[3.0, 0.0]), &Element::diag(&[1.0, 0.0]), &t).unwrap();
        assert!(q.approx_eq(&Element::diag(&[3.0, 0.0]), &t));
        let a = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
        let q = divide(&a, &Element::diag(&[0.0, 2.0]), &t).unwrap();
        assert!(q.approx_eq(&Element::real_matrix(2, &[0.0, 1.0, 0.0, 0.0]), &t));
        assert!(matches!(
            divide(&Element::diag(&[1.0, 0.0]), &Element::diag(&[0.0, 1.0]), &t),
            Err(Error::DivisionUndefined { .. })
        ));
    }

    #[test]
    fn division_identities() {
        let t = tol();
        let mut rng = random::rng(4);
        let alg = FdAlgebra::new(vec![3, 2]).unwrap();
        for _ in 0..20 {
            let a = random::element(&mut rng, &alg);
            let b = &random::low_rank_positive(&mut rng, &alg, 2) * &random::element(&mut rng, &alg);
            let ab = &a * &b;
            let lhs = divide(&ab, &b, &t).unwrap();
            assert!(lhs.approx_eq(&(&a * &projections::range(&b, &t)), &t));
            let ba = &b * &a;
            let lhs = left_divide(&b, &ba, &t).unwrap();
            assert!(lhs.approx_eq(&(&projections::support(&b, &t) * &a), &t));
            let series = divide_by_series(&ab, &b, &t).unwrap();
            assert!(series.approx_eq(&divide(&ab, &b, &t).unwrap(), &t.with_eps_rel(1e-7)));
            let lambda = douglas_lambda(&ab, &b, &t).unwrap().unwrap();
            assert!(lhs.norm() >= 0.0);
            assert!(divide(&ab, &b, &t).unwrap().norm() <= lambda + 1e-8);
        }
    }

    #[test]
    fn sandwich_of_positive_is_positive() {
        let t = tol();
        let mut rng = random::rng(5);
        let alg = FdAlgebra::matrix(3);
        for _ in 0..10 {
            let cc = random::element(&mut rng, &alg);
            let x = random::positive(&mut rng, &alg);
            let a = &(&cc.adjoint() * &x) * &cc;
            let d = sandwich(&cc.adjoint(), &a, &cc, &t).unwrap();
            assert!(d.is_positive(&t.with_eps_rel(1e-7)));
        }
    }

    #[test]
    fn douglas_lambda_none_off_support() {
        let t = tol();
        assert_eq!(
            douglas_lambda(&Element::diag(&[1.0, 0.0]), &Element::diag(&[0.0, 1.0]), &t).unwrap(),
            None
        );
        assert_eq!(
            douglas_lambda(&Element::diag(&[0.0, 0.0]), &Element::diag(&[0.0, 1.0]), &t).unwrap(),
            Some(0.0)
        );
        let l = douglas_lambda(&Element::diag(&[3.0, 0.0]), &Element::diag(&[2.0, 1.0]), &t)
            .unwrap()
            .unwrap();
        assert!((l - 1.5).abs() < 1e-9);
    }

    #[test]
    fn polar_examples() {
        let t = tol();
        let mut rng = random::rng(6);
        let m3 = FdAlgebra::matrix(3);
        let p = random::low_rank_positive(&mut rng, &m3, 2);
        let pp = polar(&p, &t);
        assert!(pp.isometry.approx_eq(&projections::ceiling(&p, &t).unwrap(), &t));
        assert!(pp.modulus.approx_eq(&p, &t));
        let a = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
        let pa = polar(&a, &t);
        assert!(pa
            .isometry
            .approx_eq(&Element::real_matrix(2, &[0.0, 1.0, 0.0, 0.0]), &t));
        assert!(pa.modulus.approx_eq(&Element::diag(&[0.0, 2.0]), &t));
        let u = random::unitary(&mut rng, &m3);
        let pu = polar(&u, &t);
        assert!(pu.isometry.approx_eq(&u, &t));
        assert!(pu.modulus.approx_eq(&m3.unit(), &t));
    }

    #[test]
    fn polar_invariants_and_cross_check() {
        let t = tol();
        let mut rng = random::rng(7);
        let alg = FdAlgebra::new(vec![3, 2]).unwrap();
        for _ in 0..20 {
            let a = &random::low_rank_positive(&mut rng, &alg, 2) * &random::element(&mut rng, &alg);
            let pp = polar(&a, &t);
            let w = &pp.isometry;
            assert!((&w.adjoint() * w).approx_eq(&projections::support(&a, &t), &t));
            assert!((w * &w.adjoint()).approx_eq(&projections::range(&a, &t), &t));
            assert!((w * &pp.modulus).approx_eq(&a, &t));
            let left_mod = spectral::sqrt(&(&a * &a.adjoint()), &t).unwrap();
            assert!((&left_mod * w).approx_eq(&a, &t.with_eps_rel(1e-8)));
            assert!(polar(&a.adjoint(), &t).isometry.approx_eq(&w.adjoint(), &t));
            let via_division = divide(&a, &pp.modulus, &t).unwrap();
            assert!(via_division.approx_eq(w, &t.with_eps_rel(1e-7)));
        }
    }

    #[test]
    fn polar_gives_mvn_witness() {
        // u = [ea] satisfies u*u = ⌈ea⌋ and uu* = ⌈ea⟩ ≤ e
        let t = tol();
        let mut rng = random::rng(8);
        let m3 = FdAlgebra::matrix(3);
        let e = random::projection_of_rank(&mut rng, &m3, 2);
        let a = random::element(&mut rng, &m3);
        let ea = &e * &a;
        let u = polar(&ea, &t).isometry;
        assert!((&u * &u.adjoint()).leq(&e, &t));
        assert!((&u.adjoint() * &u).approx_eq(&projections::support(&ea, &t), &t));
    }

    #[test]
    fn seq_quotient_examples() {
        let t = tol();
        let mut rng = random::rng(9);
        let m3 = FdAlgebra::matrix(3);
        let a = random::positive(&mut rng, &m3);
        assert!(seq_quotient(&a, &m3.unit(), &t).unwrap().approx_eq(&a, &t));
        let b = random::low_rank_positive(&mut rng, &m3, 2);
        let q = seq_quotient(&b, &b, &t).unwrap();
        assert!(q.approx_eq(&projections::ceiling(&b, &t).unwrap(), &t.with_eps_rel(1e-8)));

        let c0 = random::positive(&mut rng, &m3);
        let rb = spectral::sqrt(&b, &t).unwrap();
        let a = &(&rb * &c0) * &rb;
        let q = seq_quotient(&a, &b, &t).unwrap();
        let cb = projections::ceiling(&b, &t).unwrap();
        let c0_on_support = &(&cb * &c0) * &cb;
        assert!(q.approx_eq(&c0_on_support, &t.with_eps_rel(1e-7)));
        assert!(matches!(
            seq_quotient(&Element::diag(&[1.0, 0.0]), &Element::diag(&[0.0, 1.0]), &t),
            Err(Error::QuotientUndefined { .. })
        ));
    }
}
