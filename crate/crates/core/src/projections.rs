//! The projection lattice: ceilings, floors, supports and ranges, joins and
//! meets, commutants and centres, central supports and Murray–von Neumann
//! comparison.
//!
//! Every projection produced here is assembled from orthonormal eigenvectors as
//! `Σ v v*`, so it is idempotent to rounding precision ("snapped"): the
//! eigenvalue rounding to {0, 1} happens by construction rather than after the
//! fact.

use crate::algebra::{Element, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::tolerance::ToleranceConfig;

/// A projection together with whether its eigenvalues had to be rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCertificate {
    pub element: Element,
    pub snapped: bool,
}

/// Rounds the eigenvalues of a near-projection to {0, 1}.
///
/// Fails unless `‖p² − p‖` and `‖p* − p‖` are within `snap_eps`.
pub fn snap_projection(p: &Element, tol: &ToleranceConfig) -> Result<ProjectionCertificate> {
    let scale = p.norm().max(1.0);
    let sa = (p - &p.adjoint()).norm();
    let idem = (&(p * p) - p).norm();
    if sa > tol.snap_eps * scale || idem > tol.snap_eps * scale {
        return Err(Error::NotProjection);
    }
    let mut snapped = false;
    let blocks = p
        .blocks()
        .iter()
        .map(|m| {
            let (vals, vecs) = linalg::hermitian_eigen(m);
            let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
            snapped |= vals
                .iter()
                .any(|&v| v.abs() > tol.eps_abs && (v - 1.0).abs() > tol.eps_abs);
            linalg::column_projector(&vecs, &keep)
        })
        .collect();
    Ok(ProjectionCertificate {
        element: Element::new(p.algebra().clone(), blocks)?,
        snapped,
    })
}

/// Spectral projection of the Hermitian part of `a` onto eigenvalues satisfying `keep`.
pub(crate) fn spectral_projection(a: &Element, keep: impl Fn(f64) -> bool) -> Element {
    a.map_blocks(|_, m| {
        let (vals, vecs) = linalg::hermitian_eigen(m);
        let cols: Vec<usize> = (0..vals.len()).filter(|&i| keep(vals[i])).collect();
        linalg::column_projector(&vecs, &cols)
    })
}

/// Per-block orthonormal eigenvectors of a projection spanning its range.
pub(crate) fn range_isometries(p: &Element) -> Vec<Matrix> {
    p.blocks()
        .iter()
        .map(|m| {
            let (vals, vecs) = linalg::hermitian_eigen(m);
            let cols: Vec<usize> = (0..vals.len()).rev().filter(|&i| vals[i] > 0.5).collect();
            let mut out = Matrix::zeros(m.nrows(), cols.len());
            for (j, &i) in cols.iter().enumerate() {
                out.set_column(j, &vecs.column(i));
            }
            out
        })
        .collect()
}

/// Per-block ranks of a projection.
pub fn ranks(p: &Element) -> Vec<usize> {
    p.blocks()
        .iter()
        .map(|m| linalg::hermitian_eigen(m).0.iter().filter(|&&v| v > 0.5).count())
        .collect()
}

/// The least projection `p` with `pa = a`, for positive `a`: the spectral
/// projection onto eigenvalues above `snap_eps·‖a‖`.
pub fn ceiling(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_positive(tol)?;
    let cut = tol.snap_eps * a.norm();
    Ok(spectral_projection(a, |v| v > cut))
}

/// The greatest projection below the effect `a`: eigenvalues at least `1 − snap_eps`.
pub fn floor(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_effect(tol)?;
    Ok(spectral_projection(a, |v| v >= 1.0 - tol.snap_eps))
}

fn svd_projection(a: &Element, tol: &ToleranceConfig, right: bool) -> Element {
    let cut = tol.snap_eps * a.norm();
    a.map_blocks(|_, m| {
        let (u, s, v) = linalg::svd(m);
        let basis = if right { v } else { u };
        let cols: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cut).collect();
        linalg::column_projector(&basis, &cols)
    })
}

/// Support `⌈a*a⌉`: the least projection `p` with `ap = a`.
pub fn support(a: &Element, tol: &ToleranceConfig) -> Element {
    svd_projection(a, tol, true)
}

/// Range `⌈aa*⌉`: the least projection `p` with `pa = a`.
pub fn range(a: &Element, tol: &ToleranceConfig) -> Element {
    svd_projection(a, tol, false)
}

fn require_all_projections(ps: &[Element], tol: &ToleranceConfig) -> Result<()> {
    for p in ps {
        p.require_projection(tol)?;
    }
    for w in ps.windows(2) {
        w[0].algebra().check_same(w[1].algebra())?;
    }
    Ok(())
}

/// Supremum of projections, folding `p ∪ q = ⌈½p + ½q⌉` in input order.
/// The empty join in `alg` is `0`.
pub fn join(alg: &FdAlgebra, ps: &[Element], tol: &ToleranceConfig) -> Result<Element> {
    require_all_projections(ps, tol)?;
    let mut acc = alg.zero();
    for p in ps {
        alg.check_same(p.algebra())?;
        // Inputs have spectrum in {0, 1}, so the cut is absolute: a projection
        // that is zero up to roundoff contributes nothing.
        let cut = tol.snap_eps * (&acc + p).norm().max(1.0);
        acc = spectral_projection(&(&acc + p).scale_real(0.5), |v| v > cut);
    }
    Ok(acc)
}

/// Infimum of projections via `⋀ pᵢ = (⋁ pᵢ⊥)⊥`. The empty meet is `1`.
pub fn meet(alg: &FdAlgebra, ps: &[Element], tol: &ToleranceConfig) -> Result<Element> {
    require_all_projections(ps, tol)?;
    let perps: Vec<Element> = ps.iter().map(Element::perp).collect();
    Ok(join(alg, &perps, tol)?.perp())
}

/// A linear subspace of an algebra with a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub ambient: FdAlgebra,
    pub basis: Vec<Element>,
}

impl Subspace {
    /// Orthonormalises a spanning family.
    pub fn span(ambient: &FdAlgebra, elements: &[Element], tol: &ToleranceConfig) -> Self {
        let vecs: Vec<Vector> = elements.iter().map(Element::coords).collect();
        let basis = linalg::orthonormalize(&vecs, tol.snap_eps)
            .iter()
            .map(|v| Element::from_coords(ambient, v).expect("ambient dimension"))
            .collect();
        Subspace {
            ambient: ambient.clone(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &Element) -> Element {
        let v = x.coords();
        let mut acc = self.ambient.zero();
        for b in &self.basis {
            let coeff = b.coords().dotc(&v);
            acc = &acc + &b.scale(coeff);
        }
        acc
    }

    pub fn contains(&self, x: &Element, tol: &ToleranceConfig) -> bool {
        let scale = x.frobenius_norm().max(1.0);
        (x - &self.project(x)).frobenius_norm() <= tol.snap_eps * scale
    }

    pub fn is_star_closed(&self, tol: &ToleranceConfig) -> bool {
        self.basis.iter().all(|b| self.contains(&b.adjoint(), tol))
    }

    pub fn is_product_closed(&self, tol: &ToleranceConfig) -> bool {
        self.basis
            .iter()
            .all(|a| self.basis.iter().all(|b| self.contains(&(a * b), tol)))
    }
}

/// `{a : as = sa for all s ∈ S}` as the null space of the stacked commutator maps.
pub fn commutant(s: &[Element], within: &FdAlgebra, tol: &ToleranceConfig) -> Result<Subspace> {
    let d = within.dim();
    for x in s {
        within.check_same(x.algebra())?;
    }
    let mut stacked = Matrix::zeros(s.len() * d, d);
    for (k, x) in s.iter().enumerate() {
        for j in 0..d {
            let e = within.basis_element(j);
            let comm = &(&e * x) - &(x * &e);
            stacked.view_mut((k * d, j), (d, 1)).copy_from(&comm.coords());
        }
    }
    let scale = s.iter().map(Element::norm).fold(1.0, f64::max);
    let ns = linalg::null_space(&stacked, tol.snap_eps * scale);
    let basis = (0..ns.ncols())
        .map(|j| Element::from_coords(within, &ns.column(j).into_owned()).expect("dimension"))
        .collect();
    Ok(Subspace {
        ambient: within.clone(),
        basis,
    })
}

/// The centre `Z(A)`: the commutant of the whole algebra.
pub fn centre(alg: &FdAlgebra, tol: &ToleranceConfig) -> Subspace {
    commutant(&alg.basis(), alg, tol).expect("basis lies in the algebra")
}

/// Least central projection `z` with `za = a`: the indicator of the blocks
/// where `a` is nonzero.
pub fn central_support(a: &Element, tol: &ToleranceConfig) -> Element {
    let cut = tol.at_scale(a.norm());
    a.map_blocks(|_, m| {
        let n = m.nrows();
        if linalg::spectral_norm(m) > cut {
            Matrix::identity(n, n)
        } else {
            Matrix::zeros(n, n)
        }
    })
}

pub fn is_central(a: &Element, tol: &ToleranceConfig) -> bool {
    a.is_central(tol)
}

/// Partial isometry `u` with `u*u = e1` and `uu* ≤ e2`, if `e1 ≾ e2`.
///
/// In a direct sum of matrix algebras this holds exactly when each block rank
/// of `e1` is at most that of `e2`.
pub fn mvn_below(e1: &Element, e2: &Element, tol: &ToleranceConfig) -> Result<Option<Element>> {
    e1.require_projection(tol)?;
    e2.require_projection(tol)?;
    e1.algebra().check_same(e2.algebra())?;
    let (v1, v2) = (range_isometries(e1), range_isometries(e2));
    if v1.iter().zip(&v2).any(|(a, b)| a.ncols() > b.ncols()) {
        return Ok(None);
    }
    let blocks = v1
        .iter()
        .zip(&v2)
        .map(|(x, y)| {
            let r = x.ncols();
            y.columns(0, r) * x.adjoint()
        })
        .collect();
    Ok(Some(Element::new(e1.algebra().clone(), blocks)?))
}

/// Pairwise orthogonal nonzero projections, each `≾ e`, summing to `⌈⌈e⌉⌉`.
///
/// Blockwise: the identity of every block where `e` has rank `r > 0` is cut
/// into consecutive rank-`r` pieces of an eigenbasis that starts with `e`'s
/// range (the last piece may be smaller).
pub fn cceil_sum(e: &Element, tol: &ToleranceConfig) -> Result<Vec<Element>> {
    e.require_projection(tol)?;
    let rk = ranks(e);
    if rk.iter().all(|&r| r == 0) {
        return Err(Error::NotProjection);
    }
    let alg = e.algebra();
    let bases: Vec<Matrix> = e
        .blocks()
        .iter()
        .map(|m| {
            let (_, vecs) = linalg::hermitian_eigen(m);
            // descending eigenvalues: range of e first
            let n = vecs.ncols();
            Matrix::from_fn(n, n, |r, col| vecs[(r, n - 1 - col)])
        })
        .collect();
    let pieces = alg
        .dims()
        .iter()
        .zip(&rk)
        .filter(|(_, &r)| r > 0)
        .map(|(&n, &r)| n.div_ceil(r))
        .max()
        .unwrap_or(0);
    let mut out = Vec::with_capacity(pieces);
    for k in 0..pieces {
        let blocks = alg
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let r = rk[b];
                if r == 0 || k * r >= n {
                    return Matrix::zeros(n, n);
                }
                let cols: Vec<usize> = (k * r..((k + 1) * r).min(n)).collect();
                linalg::column_projector(&bases[b], &cols)
            })
            .collect();
        out.push(Element::new(alg.clone(), blocks)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn ceiling_examples() {
        let t = tol();
        assert!(ceiling(&Element::diag(&[0.5, 0.0]), &t)
            .unwrap()
            .approx_eq(&Element::diag(&[1.0, 0.0]), &t));
        let a = Element::real_matrix(2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(ceiling(&a, &t)
            .unwrap()
            .approx_eq(&Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]), &t));
        let m2 = FdAlgebra::matrix(2);
        assert!(ceiling(&m2.zero(), &t).unwrap().approx_eq(&m2.zero(), &t));
        assert!(ceiling(&m2.unit(), &t).unwrap().approx_eq(&m2.unit(), &t));
        assert_eq!(ceiling(&Element::diag(&[1.0, -1.0]), &t), Err(Error::NotPositive));
    }

    #[test]
    fn floor_examples() {
        let t = tol();
        assert!(floor(&Element::diag(&[1.0, 0.5]), &t)
            .unwrap()
            .approx_eq(&Element::diag(&[1.0, 0.0]), &t));
        let mut rng = random::rng(1);
        let p = random::projection(&mut rng, &FdAlgebra::matrix(3));
        assert!(floor(&p, &t).unwrap().approx_eq(&p, &t));
        assert_eq!(floor(&Element::diag(&[2.0]), &t), Err(Error::NotEffect));
    }

    #[test]
    fn support_and_range_of_nilpotent() {
        let t = tol();
        let a = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
        assert!(support(&a, &t).approx_eq(&Element::diag(&[0.0, 1.0]), &t));
        assert!(range(&a, &t).approx_eq(&Element::diag(&[1.0, 0.0]), &t));
        assert!(support(&a.adjoint(), &t).approx_eq(&range(&a, &t), &t));
    }

    #[test]
    fn support_of_rank_one() {
        let t = tol();
        let mut rng = random::rng(2);
        let x = random::gaussian_vector(&mut rng, 3).normalize();
        let y = random::gaussian_vector(&mut rng, 3).normalize();
        let xy = Element::from_blocks(vec![&x * y.adjoint()]).unwrap();
        let yy = Element::from_blocks(vec![&y * y.adjoint()]).unwrap();
        assert!(support(&xy, &t).approx_eq(&yy, &t));
    }

    #[test]
    fn join_meet_examples() {
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        let p = Element::diag(&[1.0, 0.0]);
        let q = Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(join(&m2, &[p.clone(), m2.zero()], &t).unwrap().approx_eq(&p, &t));
        assert!(meet(&m2, &[p.clone(), m2.unit()], &t).unwrap().approx_eq(&p, &t));
        assert!(join(&m2, &[p.clone(), q.clone()], &t)
            .unwrap()
            .approx_eq(&m2.unit(), &t));
        assert!(meet(&m2, &[p.clone(), q], &t).unwrap().approx_eq(&m2.zero(), &t));
        assert!(join(&m2, &[], &t).unwrap().approx_eq(&m2.zero(), &t));
        assert!(meet(&m2, &[], &t).unwrap().approx_eq(&m2.unit(), &t));
        assert_eq!(join(&m2, &[Element::diag(&[0.5, 0.0])], &t), Err(Error::NotProjection));
    }

    #[test]
    fn roundoff_zero_projection_is_neutral_for_join() {
        let t = tol();
        let mut rng = random::rng(8);
        let m3 = FdAlgebra::matrix(3);
        let u = random::unitary(&mut rng, &m3);
        // 1 - u u* is zero up to roundoff
        let noise = (&u * &u.adjoint()).perp();
        let q = random::projection_of_rank(&mut rng, &m3, 1);
        let j = join(&m3, &[noise, q.clone()], &t).unwrap();
        assert_eq!(ranks(&j), vec![1]);
        assert!(j.approx_eq(&q, &t));
    }

    #[test]
    fn commutant_examples() {
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        assert_eq!(commutant(&[], &m2, &t).unwrap().dim(), 4);
        let n = Element::real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        let comm = commutant(&[n], &m2, &t).unwrap();
        // span{1, n}: two-dimensional, and n* = (0 0;1 0) is not inside
        assert_eq!(comm.dim(), 2);
        assert!(!comm.is_star_closed(&t));
        let alg = FdAlgebra::new(vec![2, 3]).unwrap();
        let z = centre(&alg, &t);
        assert_eq!(z.dim(), 2);
        assert!(z.basis.iter().all(|b| b.is_central(&t)));
    }

    #[test]
    fn central_support_examples() {
        let t = tol();
        let mut rng = random::rng(5);
        let b = random::element(&mut rng, &FdAlgebra::matrix(3));
        let a = Element::direct_sum(&[FdAlgebra::matrix(2).zero(), b]);
        let expected = Element::direct_sum(&[FdAlgebra::matrix(2).zero(), FdAlgebra::matrix(3).unit()]);
        assert!(central_support(&a, &t).approx_eq(&expected, &t));
        let e = Element::diag(&[1.0, 0.0]);
        assert!(central_support(&e, &t).approx_eq(&FdAlgebra::matrix(2).unit(), &t));
        let central = Element::direct_sum(&[Element::diag(&[0.3, 0.3]), Element::diag(&[0.0])]);
        let cs = central_support(&central, &t);
        assert!(cs.approx_eq(&ceiling(&central, &t).unwrap(), &t));
    }

    #[test]
    fn central_support_is_union_of_conjugates() {
        // ⌈⌈e⌉⌉ = ⋃_a ⌈a* e a⌉ over the matrix-unit basis
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        let e = Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
        let parts: Vec<Element> = m2
            .basis()
            .iter()
            .map(|a| ceiling(&(&(&a.adjoint() * &e) * a), &t).unwrap())
            .collect();
        let brute = join(&m2, &parts, &t).unwrap();
        assert!(brute.approx_eq(&central_support(&e, &t), &t));
    }

    #[test]
    fn mvn_examples() {
        let t = tol();
        let e = Element::diag(&[1.0, 0.0, 0.0]);
        let u = mvn_below(&e, &e, &t).unwrap().unwrap();
        assert!((&u.adjoint() * &u).approx_eq(&e, &t));
        let f = Element::diag(&[0.0, 1.0, 1.0]);
        let w = mvn_below(&e, &f, &t).unwrap().unwrap();
        assert!((&w.adjoint() * &w).approx_eq(&e, &t));
        assert!((&w * &w.adjoint()).leq(&f, &t));
        assert!(mvn_below(&Element::diag(&[1.0, 1.0]), &Element::diag(&[1.0, 0.0]), &t)
            .unwrap()
            .is_none());
        assert_eq!(
            mvn_below(&Element::diag(&[0.5]), &Element::diag(&[1.0]), &t),
            Err(Error::NotProjection)
        );
    }

    #[test]
    fn cceil_sum_examples() {
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        let one = cceil_sum(&m2.unit(), &t).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].approx_eq(&m2.unit(), &t));

        let e = Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
        let pieces = cceil_sum(&e, &t).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!((&pieces[0] * &pieces[1]).is_zero(&t));
        assert!((&pieces[0] + &pieces[1]).approx_eq(&m2.unit(), &t));
        for p in &pieces {
            assert!(mvn_below(p, &e, &t).unwrap().is_some());
        }

        let e = Element::direct_sum(&[Element::diag(&[1.0, 0.0]), FdAlgebra::matrix(3).zero()]);
        let pieces = cceil_sum(&e, &t).unwrap();
        let total = pieces.iter().fold(e.algebra().zero(), |acc, p| &acc + p);
        let expected = Element::direct_sum(&[FdAlgebra::matrix(2).unit(), FdAlgebra::matrix(3).zero()]);
        assert!(total.approx_eq(&expected, &t));
        assert!(cceil_sum(&m2.zero(), &t).is_err());
    }

    #[test]
    fn snapping_rounds_near_projections() {
        let t = tol();
        let p = Element::diag(&[1.0 + 1e-9, 1e-9]);
        let cert = snap_projection(&p, &t).unwrap();
        assert!(cert.snapped);
        assert_eq!(cert.element, Element::diag(&[1.0, 0.0]));
        assert!(snap_projection(&Element::diag(&[0.5]), &t).is_err());
    }
}
