//! Linear maps between finite-dimensional algebras: structural predicates,
//! Choi matrices and complete positivity, positive functionals, carriers, and
//! the ◇-calculus of projections.
//!
//! A [`LinMap`] stores the matrix of its action on canonical-basis coordinates.
//! Normality is vacuous in finite dimension, so every positive map counts as
//! normal.

use num_complex::Complex64;

use crate::algebra::{Element, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix, Vector, ONE};
use crate::projections;
use crate::random;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct LinMap {
    dom: FdAlgebra,
    cod: FdAlgebra,
    matrix: Matrix,
}

/// The Choi element `(f(E_jk))_jk ∈ M_n(cod)` for one domain block of size `n`.
///
/// Its algebra has one block of size `n·m_c` per codomain block `c`, laid out as
/// `[(j·m_c + r), (k·m_c + s)] = f(E_jk)_c[r, s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiBlock {
    pub domain_block_index: usize,
    pub element: Element,
}

/// A positive input whose image is not positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityWitness {
    pub input: Element,
    pub image: Element,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PositivityVerdict {
    /// The Choi test passed, so the map is completely positive.
    ProvenCP,
    /// Not CP, and no sampled positive input produced a non-positive image.
    LikelyPositive,
    NotPositive(Box<PositivityWitness>),
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        !matches!(self, PositivityVerdict::NotPositive(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            PositivityVerdict::ProvenCP => "ProvenCP",
            PositivityVerdict::LikelyPositive => "LikelyPositive",
            PositivityVerdict::NotPositive(_) => "NotPositive",
        }
    }
}

impl LinMap {
    /// Map with the given coordinate matrix of shape `dim(cod) × dim(dom)`.
    pub fn new(dom: FdAlgebra, cod: FdAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != cod.dim() || matrix.ncols() != dom.dim() {
            return Err(Error::ShapeMismatch(format!(
                "map {dom} -> {cod} needs a {}x{} matrix, got {}x{}",
                cod.dim(),
                dom.dim(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(LinMap { dom, cod, matrix })
    }

    /// Linear extension of the images of the canonical basis.
    pub fn from_images(dom: &FdAlgebra, cod: &FdAlgebra, images: &[Element]) -> Result<Self> {
        if images.len() != dom.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} basis images for a domain of dimension {}",
                images.len(),
                dom.dim()
            )));
        }
        let mut matrix = Matrix::zeros(cod.dim(), dom.dim());
        for (j, img) in images.iter().enumerate() {
            cod.check_same(img.algebra())?;
            matrix.set_column(j, &img.coords());
        }
        Ok(LinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix,
        })
    }

    /// Tabulates a linear function on the canonical basis.
    pub fn from_fn(dom: &FdAlgebra, cod: &FdAlgebra, f: impl Fn(&Element) -> Element) -> Self {
        let mut matrix = Matrix::zeros(cod.dim(), dom.dim());
        for j in 0..dom.dim() {
            let img = f(&dom.basis_element(j));
            assert_eq!(img.algebra(), cod, "function produced an element of the wrong algebra");
            matrix.set_column(j, &img.coords());
        }
        LinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix,
        }
    }

    pub fn identity(alg: &FdAlgebra) -> Self {
        let d = alg.dim();
        LinMap {
            dom: alg.clone(),
            cod: alg.clone(),
            matrix: Matrix::identity(d, d),
        }
    }

    pub fn zero(dom: &FdAlgebra, cod: &FdAlgebra) -> Self {
        LinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix: Matrix::zeros(cod.dim(), dom.dim()),
        }
    }

    /// `a ↦ x* a x` on the algebra of `x`.
    pub fn conjugation_by(x: &Element) -> Self {
        let xa = x.adjoint();
        LinMap::from_fn(x.algebra(), x.algebra(), |a| &(&xa * a) * x)
    }

    /// `a ↦ Σ K* a_i K`, where each `(i, j, K)` sends domain block `i` into
    /// codomain block `j` through an `n_i × m_j` matrix `K`.
    pub fn from_kraus(dom: &FdAlgebra, cod: &FdAlgebra, kraus: &[(usize, usize, Matrix)]) -> Self {
        LinMap::from_fn(dom, cod, |a| {
            let mut blocks: Vec<Matrix> = cod.dims().iter().map(|&m| Matrix::zeros(m, m)).collect();
            for (i, j, k) in kraus {
                blocks[*j] += k.adjoint() * a.block(*i) * k;
            }
            Element::new(cod.clone(), blocks).expect("kraus shapes")
        })
    }

    /// The functional `a ↦ Σ tr(ρ_i a_i)` into `ℂ`.
    pub fn from_density(rho: &Element) -> Self {
        let alg = rho.algebra();
        let mut row = Matrix::zeros(1, alg.dim());
        for j in 0..alg.dim() {
            let (b, r, s) = alg.basis_location(j);
            // tr(ρ E_rs) = ρ[s, r]
            row[(0, j)] = rho.block(b)[(s, r)];
        }
        LinMap {
            dom: alg.clone(),
            cod: FdAlgebra::complex(),
            matrix: row,
        }
    }

    /// The product projection `⊕ M_{n_i} → M_{n_j}`.
    pub fn block_projection(alg: &FdAlgebra, j: usize) -> Self {
        let target = FdAlgebra::matrix(alg.dims()[j]);
        LinMap::from_fn(alg, &target, |a| {
            Element::new(target.clone(), vec![a.block(j).clone()]).expect("block shape")
        })
    }

    pub fn dom(&self) -> &FdAlgebra {
        &self.dom
    }

    pub fn cod(&self) -> &FdAlgebra {
        &self.cod
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Image of an element of the domain. Panics on an algebra mismatch; see
    /// [`try_apply`](Self::try_apply).
    pub fn apply(&self, a: &Element) -> Element {
        self.try_apply(a).expect("argument lies in the domain")
    }

    pub fn try_apply(&self, a: &Element) -> Result<Element> {
        self.dom.check_same(a.algebra())?;
        Element::from_coords(&self.cod, &(&self.matrix * a.coords()))
    }

    /// Image of the `j`-th canonical basis element.
    pub fn image(&self, j: usize) -> Element {
        Element::from_coords(&self.cod, &self.matrix.column(j).into_owned()).expect("shape")
    }

    pub fn images(&self) -> Vec<Element> {
        (0..self.dom.dim()).map(|j| self.image(j)).collect()
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &LinMap) -> LinMap {
        self.try_compose(f).expect("composable maps")
    }

    pub fn try_compose(&self, f: &LinMap) -> Result<LinMap> {
        self.dom.check_same(&f.cod)?;
        Ok(LinMap {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix * &f.matrix,
        })
    }

    pub fn add(&self, g: &LinMap) -> Result<LinMap> {
        self.dom.check_same(&g.dom)?;
        self.cod.check_same(&g.cod)?;
        Ok(LinMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix + &g.matrix,
        })
    }

    pub fn sub(&self, g: &LinMap) -> Result<LinMap> {
        self.add(&g.scale_real(-1.0))
    }

    pub fn scale(&self, z: Complex64) -> LinMap {
        LinMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            matrix: &self.matrix * z,
        }
    }

    pub fn scale_real(&self, x: f64) -> LinMap {
        self.scale(c(x))
    }

    /// Operator norm of the coordinate matrix.
    pub fn coordinate_norm(&self) -> f64 {
        linalg::spectral_norm(&self.matrix)
    }

    /// Equality as operator-norm distance of coordinate matrices.
    pub fn approx_eq(&self, g: &LinMap, tol: &ToleranceConfig) -> bool {
        if self.dom != g.dom || self.cod != g.cod {
            return false;
        }
        let scale = self.coordinate_norm().max(g.coordinate_norm());
        linalg::spectral_norm(&(&self.matrix - &g.matrix)) <= tol.at_scale(scale)
    }

    /// Smallest singular value of the coordinate matrix (`0` unless square and invertible).
    pub fn min_singular_value(&self) -> f64 {
        if self.dom.dim() != self.cod.dim() {
            return 0.0;
        }
        linalg::svd(&self.matrix)
            .1
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Linear inverse, when the coordinate matrix is square with smallest
    /// singular value at least `snap_eps`.
    pub fn inverse(&self, tol: &ToleranceConfig) -> Option<LinMap> {
        if self.dom.dim() != self.cod.dim() {
            return None;
        }
        let scale = self.coordinate_norm().max(1.0);
        if self.dom.dim() > 0 && self.min_singular_value() < tol.snap_eps * scale {
            return None;
        }
        Some(LinMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            matrix: linalg::pinv(&self.matrix, 0.0),
        })
    }

    fn image_scale(&self) -> f64 {
        self.images().iter().map(Element::norm).fold(1.0, f64::max)
    }

    pub fn is_unital(&self, tol: &ToleranceConfig) -> bool {
        self.apply(&self.dom.unit()).approx_eq(&self.cod.unit(), tol)
    }

    /// `f(1) ≤ 1`.
    pub fn is_subunital(&self, tol: &ToleranceConfig) -> bool {
        self.apply(&self.dom.unit()).leq(&self.cod.unit(), tol)
    }

    /// `f(a*) = f(a)*` on every basis element.
    pub fn is_involutive(&self, tol: &ToleranceConfig) -> bool {
        let scale = self.image_scale();
        (0..self.dom.dim()).all(|j| {
            let (b, r, s) = self.dom.basis_location(j);
            let jt = self.dom.basis_index(b, s, r);
            (&self.image(jt) - &self.image(j).adjoint()).norm() <= tol.at_scale(scale)
        })
    }

    /// `f(ab) = f(a)f(b)` on every pair of basis elements.
    pub fn is_multiplicative(&self, tol: &ToleranceConfig) -> bool {
        self.multiplicativity_defect().1 <= tol.at_scale(self.image_scale().powi(2))
    }

    /// Largest `‖f(E_x E_y) − f(E_x) f(E_y)‖` over basis pairs, with the pair.
    pub fn multiplicativity_defect(&self) -> (Option<(usize, usize)>, f64) {
        let images = self.images();
        let mut worst = (None, 0.0);
        for x in 0..self.dom.dim() {
            let (bx, rx, sx) = self.dom.basis_location(x);
            for y in 0..self.dom.dim() {
                let (by, ry, sy) = self.dom.basis_location(y);
                let prod = if bx == by && sx == ry {
                    images[self.dom.basis_index(bx, rx, sy)].clone()
                } else {
                    self.cod.zero()
                };
                let d = (&prod - &(&images[x] * &images[y])).norm();
                if d > worst.1 {
                    worst = (Some((x, y)), d);
                }
            }
        }
        worst
    }

    /// Multiplicative, involutive and unital.
    pub fn is_miu(&self, tol: &ToleranceConfig) -> bool {
        self.is_unital(tol) && self.is_involutive(tol) && self.is_multiplicative(tol)
    }

    /// One Choi element per domain block.
    pub fn choi(&self) -> Vec<ChoiBlock> {
        self.dom
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let alg = FdAlgebra::new(self.cod.dims().iter().map(|&m| n * m).collect()).expect("positive sizes");
                let mut blocks: Vec<Matrix> = alg.dims().iter().map(|&d| Matrix::zeros(d, d)).collect();
                for j in 0..n {
                    for k in 0..n {
                        let img = self.image(self.dom.basis_index(i, j, k));
                        for (cb, &m) in self.cod.dims().iter().enumerate() {
                            blocks[cb].view_mut((j * m, k * m), (m, m)).copy_from(img.block(cb));
                        }
                    }
                }
                ChoiBlock {
                    domain_block_index: i,
                    element: Element::new(alg, blocks).expect("choi shapes"),
                }
            })
            .collect()
    }

    /// Smallest eigenvalue over all Choi elements (`+∞` for a trivial domain).
    pub fn choi_min_eigenvalue(&self) -> f64 {
        self.choi()
            .iter()
            .map(|cb| cb.element.min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_completely_positive(&self, tol: &ToleranceConfig) -> bool {
        self.choi().iter().all(|cb| cb.element.is_positive(tol))
    }

    fn require_functional(&self) -> Result<()> {
        if self.cod != FdAlgebra::complex() {
            return Err(Error::NotAFunctional);
        }
        Ok(())
    }

    /// The blockwise `ρ` with `ω(a) = Σ tr(ρ_i a_i)`.
    pub fn density(&self) -> Result<Element> {
        self.require_functional()?;
        let blocks = self
            .dom
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| Matrix::from_fn(n, n, |s, r| self.matrix[(0, self.dom.basis_index(b, r, s))]))
            .collect();
        Element::new(self.dom.clone(), blocks)
    }

    /// Exact test: the density is Hermitian and positive semidefinite.
    pub fn is_positive_functional(&self, tol: &ToleranceConfig) -> Result<bool> {
        Ok(self.density()?.is_positive(tol))
    }

    /// Scalar value of a functional.
    pub fn eval_scalar(&self, a: &Element) -> Result<Complex64> {
        self.require_functional()?;
        Ok(self.try_apply(a)?.block(0)[(0, 0)])
    }

    /// Three-way positivity verdict.
    ///
    /// CP maps are [`ProvenCP`](PositivityVerdict::ProvenCP). When domain or
    /// codomain is commutative, positivity coincides with complete positivity
    /// and a failing Choi test is turned into an explicit witness. Otherwise the
    /// unit and `samples` random rank-one positives per domain block are tried.
    pub fn is_positive_map(&self, samples: usize, seed: u64, tol: &ToleranceConfig) -> PositivityVerdict {
        if self.is_completely_positive(tol) {
            return PositivityVerdict::ProvenCP;
        }
        let check = |a: Element| -> Option<PositivityVerdict> {
            let img = self.apply(&a);
            (!img.is_positive(tol))
                .then(|| PositivityVerdict::NotPositive(Box::new(PositivityWitness { input: a, image: img })))
        };
        if let Some(v) = check(self.dom.unit()) {
            return v;
        }
        for a in self.exact_witness_candidates(tol) {
            if let Some(v) = check(a) {
                return v;
            }
        }
        if self.dom.is_commutative() || self.cod.is_commutative() {
            // unreachable in exact arithmetic; tolerate borderline Choi failures
            return PositivityVerdict::LikelyPositive;
        }
        let mut rng = random::rng(seed);
        for _ in 0..samples {
            for (b, &n) in self.dom.dims().iter().enumerate() {
                let v = random::gaussian_vector(&mut rng, n);
                let a = self.dom.embed_block(b, &v * v.adjoint()).expect("shape");
                if let Some(v) = check(a) {
                    return v;
                }
            }
        }
        PositivityVerdict::LikelyPositive
    }

    /// Positive inputs that decide positivity when the domain or codomain is
    /// commutative: minimal projections of a commutative domain, and rank-one
    /// extremal vectors of each scalar component's density otherwise.
    fn exact_witness_candidates(&self, tol: &ToleranceConfig) -> Vec<Element> {
        let mut out = Vec::new();
        if self.dom.is_commutative() {
            out.extend((0..self.dom.num_blocks()).map(|b| self.dom.block_unit(b)));
        }
        if self.cod.is_commutative() {
            for cb in 0..self.cod.num_blocks() {
                let component = LinMap::block_projection(&self.cod, cb).compose(self);
                let rho = component.density().expect("scalar codomain");
                for (b, m) in rho.blocks().iter().enumerate() {
                    let herm = linalg::hermitian_part(m);
                    let skew = (m - m.adjoint()) * Complex64::new(0.0, -0.5);
                    let scale = linalg::spectral_norm(m).max(1.0);
                    let target = if linalg::spectral_norm(&skew) > tol.at_scale(scale) {
                        // v*ρv has a nonzero imaginary part at an extremal eigenvector of Im ρ
                        let (vals, vecs) = linalg::hermitian_eigen(&skew);
                        let idx = if vals[0].abs() > vals[vals.len() - 1].abs() {
                            0
                        } else {
                            vals.len() - 1
                        };
                        vecs.column(idx).into_owned()
                    } else {
                        linalg::hermitian_eigen(&herm).1.column(0).into_owned()
                    };
                    out.push(self.dom.embed_block(b, &target * target.adjoint()).expect("shape"));
                }
            }
        }
        out
    }

    /// Cheap necessary conditions for positivity: `f(1) ≥ 0` and `τ∘f` positive.
    fn require_positive_shape(&self, tol: &ToleranceConfig) -> Result<Element> {
        if !self.apply(&self.dom.unit()).is_positive(tol) {
            return Err(Error::MapNotPositive);
        }
        let rho = self.trace_density();
        if !rho.is_positive(tol) {
            return Err(Error::MapNotPositive);
        }
        Ok(rho)
    }

    /// Density of the functional `τ∘f`, with `τ` the unnormalised trace of the codomain.
    fn trace_density(&self) -> Element {
        let trace = LinMap::from_density(&self.cod.unit());
        trace.compose(self).density().expect("scalar codomain")
    }

    /// The least projection `p` with `f(p⊥) = 0`: the support of the density of `τ∘f`.
    pub fn carrier(&self, tol: &ToleranceConfig) -> Result<Element> {
        let rho = self.require_positive_shape(tol)?;
        projections::ceiling(&rho.real_part(), tol).map_err(|_| Error::MapNotPositive)
    }

    /// Least central projection `z` with `f(z⊥) = 0`.
    pub fn central_carrier(&self, tol: &ToleranceConfig) -> Result<Element> {
        Ok(projections::central_support(&self.carrier(tol)?, tol))
    }

    /// `f^◇(e) = ⌈f(e)⌉`.
    pub fn diamond_fwd(&self, e: &Element, tol: &ToleranceConfig) -> Result<Element> {
        self.dom.check_same(e.algebra())?;
        e.require_projection(tol)?;
        let img = self.apply(e);
        projections::ceiling(&img.real_part(), tol).map_err(|_| Error::MapNotPositive)
    }

    /// `f_◇(e)`: the carrier of `a ↦ e f(a) e`, for a projection `e` of the codomain.
    pub fn diamond_bwd(&self, e: &Element, tol: &ToleranceConfig) -> Result<Element> {
        self.cod.check_same(e.algebra())?;
        e.require_projection(tol)?;
        let sandwiched = LinMap::conjugation_by(e).compose(self);
        sandwiched.carrier(tol)
    }

    /// `f^□(e) = f^◇(e⊥)⊥`.
    pub fn diamond_box(&self, e: &Element, tol: &ToleranceConfig) -> Result<Element> {
        Ok(self.diamond_fwd(&e.perp(), tol)?.perp())
    }

    /// `f^◇ = g_◇` on the deterministic projection family of `f`'s domain.
    pub fn are_contraposed(&self, g: &LinMap, tol: &ToleranceConfig) -> Result<bool> {
        self.dom.check_same(&g.cod)?;
        self.cod.check_same(&g.dom)?;
        for e in projection_family(&self.dom, tol) {
            if !self.diamond_fwd(&e, tol)?.approx_eq(&g.diamond_bwd(&e, tol)?, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f^◇ = g^◇` on the deterministic projection family.
    pub fn are_equivalent(&self, g: &LinMap, tol: &ToleranceConfig) -> Result<bool> {
        self.dom.check_same(&g.dom)?;
        self.cod.check_same(&g.cod)?;
        for e in projection_family(&self.dom, tol) {
            if !self.diamond_fwd(&e, tol)?.approx_eq(&g.diamond_fwd(&e, tol)?, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

const FAMILY_SEED: u64 = 0x5eed_d1a3;
const FAMILY_RANDOM: usize = 8;

/// Deterministic probe projections: `0`, `1`, block units, rank-one projections
/// onto basis vectors and onto `(e_j + e_k)/√2`, `(e_j + i e_k)/√2` in every
/// block, and a fixed-seed random batch.
pub fn projection_family(alg: &FdAlgebra, _tol: &ToleranceConfig) -> Vec<Element> {
    let mut out = vec![alg.zero(), alg.unit()];
    for (b, &n) in alg.dims().iter().enumerate() {
        out.push(alg.block_unit(b));
        let rank_one = |v: Vector| alg.embed_block(b, &v * v.adjoint()).expect("shape");
        for j in 0..n {
            let mut v = Vector::zeros(n);
            v[j] = ONE;
            out.push(rank_one(v));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..n {
            for k in (j + 1)..n {
                let mut v = Vector::zeros(n);
                v[j] = c(h);
                v[k] = c(h);
                out.push(rank_one(v.clone()));
                v[k] = Complex64::new(0.0, h);
                out.push(rank_one(v));
            }
        }
    }
    let mut rng = random::rng(FAMILY_SEED);
    for _ in 0..FAMILY_RANDOM {
        out.push(random::projection(&mut rng, alg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn transpose(n: usize) -> LinMap {
        let alg = FdAlgebra::matrix(n);
        LinMap::from_fn(&alg, &alg, |a| a.map_blocks(|_, m| m.transpose()))
    }

    #[test]
    fn construction_and_composition() {
        let t = tol();
        let mut rng = random::rng(1);
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        let a = random::element(&mut rng, &alg);
        let id = LinMap::identity(&alg);
        assert!(id.apply(&a).approx_eq(&a, &t));
        let f = random::cp_map(&mut rng, &alg, &FdAlgebra::matrix(3), 2);
        assert!(f.compose(&id).approx_eq(&f, &t));
        let v = random::element(&mut rng, &alg);
        let conj = LinMap::conjugation_by(&v);
        assert!(conj.apply(&a).approx_eq(&(&(&v.adjoint() * &a) * &v), &t));
        assert!(LinMap::from_images(&alg, &alg, &[alg.zero()]).is_err());
        assert!(LinMap::from_images(&alg, &alg, &f.images()).is_err());
    }

    #[test]
    fn structural_predicates() {
        let t = tol();
        let alg = FdAlgebra::new(vec![2, 3]).unwrap();
        for j in 0..2 {
            assert!(LinMap::block_projection(&alg, j).is_miu(&t));
        }
        let tr = transpose(2);
        assert!(tr.is_unital(&t) && tr.is_involutive(&t));
        assert!(!tr.is_multiplicative(&t));
        let z = LinMap::zero(&alg, &alg);
        assert!(z.is_subunital(&t) && !z.is_unital(&t));
    }

    #[test]
    fn transpose_choi_has_eigenvalue_minus_one() {
        let t = tol();
        let tr = transpose(2);
        assert!(!tr.is_completely_positive(&t));
        assert!((tr.choi_min_eigenvalue() + 1.0).abs() < 1e-9);
        assert_eq!(tr.is_positive_map(50, 1, &t), PositivityVerdict::LikelyPositive);
    }

    #[test]
    fn cp_examples() {
        let t = tol();
        let mut rng = random::rng(2);
        let alg = FdAlgebra::new(vec![2, 2]).unwrap();
        let v = random::element(&mut rng, &alg);
        assert!(LinMap::conjugation_by(&v).is_completely_positive(&t));
        assert!(LinMap::block_projection(&alg, 1).is_completely_positive(&t));
        assert_eq!(
            LinMap::identity(&alg).is_positive_map(10, 0, &t),
            PositivityVerdict::ProvenCP
        );
        let neg = LinMap::identity(&alg).scale_real(-1.0);
        match neg.is_positive_map(10, 0, &t) {
            PositivityVerdict::NotPositive(w) => assert_eq!(w.input, alg.unit()),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn commutative_codomain_gives_exact_witness() {
        // ω(a) = a₀₁ is not positive; the witness must be a positive input
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        let mut images = vec![FdAlgebra::complex().zero(); 4];
        images[1] = Element::diag(&[1.0]);
        let w = LinMap::from_images(&m2, &FdAlgebra::complex(), &images).unwrap();
        assert!(!w.is_positive_functional(&t).unwrap());
        match w.is_positive_map(0, 0, &t) {
            PositivityVerdict::NotPositive(wit) => {
                assert!(wit.input.is_positive(&t));
                assert!(!wit.image.is_positive(&t));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn densities() {
        let t = tol();
        let m3 = FdAlgebra::matrix(3);
        let trace = LinMap::from_density(&m3.unit());
        assert!(trace.density().unwrap().approx_eq(&m3.unit(), &t));
        assert!(trace.is_positive_functional(&t).unwrap());
        let mut rng = random::rng(3);
        let x = random::gaussian_vector(&mut rng, 3).normalize();
        let xx = Element::from_blocks(vec![&x * x.adjoint()]).unwrap();
        let vec_state = LinMap::from_fn(&m3, &FdAlgebra::complex(), |a| {
            Element::from_blocks(vec![Matrix::from_element(1, 1, x.dotc(&(a.block(0) * &x)))]).unwrap()
        });
        assert!(vec_state.density().unwrap().approx_eq(&xx, &t));
        assert!(LinMap::identity(&m3).density().is_err());
    }

    #[test]
    fn carrier_examples() {
        let t = tol();
        let mut rng = random::rng(4);
        let m3 = FdAlgebra::matrix(3);
        let a = random::low_rank_positive(&mut rng, &m3, 1);
        let b = &a * &random::element(&mut rng, &m3);
        let conj = LinMap::conjugation_by(&b);
        let range = projections::range(&b, &t);
        assert!(conj.carrier(&t).unwrap().approx_eq(&range, &t));
        let x = random::gaussian_vector(&mut rng, 3).normalize();
        let xx = Element::from_blocks(vec![&x * x.adjoint()]).unwrap();
        let state = LinMap::from_density(&xx);
        assert!(state.carrier(&t).unwrap().approx_eq(&xx, &t));
        assert!(state.central_carrier(&t).unwrap().approx_eq(&m3.unit(), &t));
        let faithful = random::cpu_map(&mut rng, &m3, &m3, 2);
        assert!(faithful.carrier(&t).unwrap().approx_eq(&m3.unit(), &t));
        let alg = FdAlgebra::new(vec![2, 3]).unwrap();
        let pi = LinMap::block_projection(&alg, 0);
        assert!(pi.central_carrier(&t).unwrap().approx_eq(&alg.block_unit(0), &t));
        assert_eq!(
            LinMap::identity(&m3).scale_real(-1.0).carrier(&t),
            Err(Error::MapNotPositive)
        );
    }

    #[test]
    fn diamond_examples() {
        let t = tol();
        let mut rng = random::rng(5);
        let m3 = FdAlgebra::matrix(3);
        let id = LinMap::identity(&m3);
        for e in projection_family(&m3, &t) {
            assert!(id.diamond_fwd(&e, &t).unwrap().approx_eq(&e, &t));
        }
        let a = random::element(&mut rng, &m3);
        let f = LinMap::conjugation_by(&a);
        let g = LinMap::conjugation_by(&a.adjoint());
        assert!(f.are_contraposed(&g, &t).unwrap());
        assert!(f.are_equivalent(&f, &t).unwrap());

        let h = random::cp_map(&mut rng, &m3, &m3, 1);
        let k = random::cp_map(&mut rng, &m3, &m3, 1);
        let sum = h.add(&k).unwrap();
        let p = random::projection_of_rank(&mut rng, &m3, 1);
        let lhs = sum.diamond_fwd(&p, &t).unwrap();
        let rhs = projections::join(
            &m3,
            &[h.diamond_fwd(&p, &t).unwrap(), k.diamond_fwd(&p, &t).unwrap()],
            &t,
        )
        .unwrap();
        assert!(lhs.approx_eq(&rhs, &t));
        let bx = h.diamond_box(&p, &t).unwrap();
        assert!(bx.is_projection(&t));
        assert_eq!(
            h.diamond_fwd(&Element::diag(&[0.5, 0.0, 0.0]), &t),
            Err(Error::NotProjection)
        );
    }

    #[test]
    fn galois_adjunction_on_random_projections() {
        let t = tol();
        let mut rng = random::rng(6);
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        let cod = FdAlgebra::matrix(3);
        for _ in 0..20 {
            let f = random::cp_map(&mut rng, &alg, &cod, 1);
            let s = random::projection(&mut rng, &alg);
            let u = random::projection(&mut rng, &cod);
            let left = f.diamond_fwd(&s, &t).unwrap().leq(&u.perp(), &t);
            let right = f.diamond_bwd(&u, &t).unwrap().leq(&s.perp(), &t);
            assert_eq!(left, right);
        }
    }

    #[test]
    fn inverse_of_conjugation_by_unitary() {
        let t = tol();
        let mut rng = random::rng(7);
        let u = random::unitary(&mut rng, &FdAlgebra::matrix(3));
        let f = LinMap::conjugation_by(&u);
        let inv = f.inverse(&t).unwrap();
        assert!(inv.approx_eq(&LinMap::conjugation_by(&u.adjoint()), &t));
        assert!(transpose(2).inverse(&t).is_some());
        assert!(LinMap::zero(&u.algebra().clone(), u.algebra()).inverse(&t).is_none());
    }
}
