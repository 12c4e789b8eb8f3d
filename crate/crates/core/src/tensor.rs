//! Tensor products of algebras, elements and maps, realised blockwise by
//! Kronecker products, with the monoidal isomorphisms, duplicators and the
//! classical reflection `𝒜 ↦ ℓ∞(nsp 𝒜)`.
//!
//! Blocks of `𝒜 ⊗ ℬ` are ordered lexicographically, left factor major, and
//! `(a⊗b)[(r·m+s), (r′·m+s′)] = a[r,r′]·b[s,s′]`.

use rand::Rng;

use crate::algebra::{Element, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::maps::{LinMap, PositivityWitness};
use crate::random;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct TensorStructure {
    pub left: FdAlgebra,
    pub right: FdAlgebra,
    pub product: FdAlgebra,
    /// `block_index[i][j]` is the product block of left block `i` and right block `j`.
    pub block_index: Vec<Vec<usize>>,
}

impl TensorStructure {
    pub fn new(left: &FdAlgebra, right: &FdAlgebra) -> Self {
        let k = right.num_blocks();
        let block_index = (0..left.num_blocks())
            .map(|i| (0..k).map(|j| i * k + j).collect())
            .collect();
        let dims: Vec<usize> = left
            .dims()
            .iter()
            .flat_map(|&n| right.dims().iter().map(move |&m| n * m))
            .collect();
        TensorStructure {
            left: left.clone(),
            right: right.clone(),
            product: FdAlgebra::new(dims).expect("positive dims"),
            block_index,
        }
    }

    /// Left and right block of a product block.
    pub fn factor_blocks(&self, b: usize) -> (usize, usize) {
        let k = self.right.num_blocks();
        (b / k, b % k)
    }

    /// `a ⊗ b`.
    pub fn tensor(&self, a: &Element, b: &Element) -> Result<Element> {
        self.left.check_same(a.algebra())?;
        self.right.check_same(b.algebra())?;
        let blocks = a
            .blocks()
            .iter()
            .flat_map(|x| b.blocks().iter().map(move |y| linalg::kron(x, y)))
            .collect();
        Element::new(self.product.clone(), blocks)
    }

    /// For each canonical basis element of the product, the pair of factor
    /// basis indices whose tensor it is.
    pub fn basis_factors(&self) -> Vec<(usize, usize)> {
        (0..self.product.dim())
            .map(|idx| {
                let (b, row, col) = self.product.basis_location(idx);
                let (i, j) = self.factor_blocks(b);
                let m = self.right.dims()[j];
                (
                    self.left.basis_index(i, row / m, col / m),
                    self.right.basis_index(j, row % m, col % m),
                )
            })
            .collect()
    }

    /// The linear map out of the product determined by its values on simple
    /// tensors of basis elements.
    pub fn map_from_simple(&self, cod: &FdAlgebra, f: impl Fn(&Element, &Element) -> Element) -> LinMap {
        let lb = self.left.basis();
        let rb = self.right.basis();
        self.map_indexed(cod, |i, j| f(&lb[i], &rb[j]))
    }

    /// As [`Self::map_from_simple`], with the factor basis indices.
    pub fn map_indexed(&self, cod: &FdAlgebra, f: impl Fn(usize, usize) -> Element) -> LinMap {
        let images: Vec<Element> = self.basis_factors().into_iter().map(|(i, j)| f(i, j)).collect();
        LinMap::from_images(&self.product, cod, &images).expect("images in codomain")
    }
}

pub fn tensor_algebra(a: &FdAlgebra, b: &FdAlgebra) -> TensorStructure {
    TensorStructure::new(a, b)
}

/// `a ⊗ b` in `alg(a) ⊗ alg(b)`.
pub fn tensor_elements(a: &Element, b: &Element) -> Element {
    TensorStructure::new(a.algebra(), b.algebra())
        .tensor(a, b)
        .expect("factors match by construction")
}

/// `f ⊗ g : 𝒜 ⊗ ℬ → 𝒞 ⊗ 𝒟` with `(f⊗g)(a⊗b) = f(a) ⊗ g(b)`.
pub fn tensor_maps(f: &LinMap, g: &LinMap) -> LinMap {
    let dom = TensorStructure::new(f.dom(), g.dom());
    let cod = TensorStructure::new(f.cod(), g.cod());
    dom.map_from_simple(&cod.product, |a, b| {
        cod.tensor(&f.apply(a), &g.apply(b)).expect("images in codomains")
    })
}

/// `α : 𝒜 ⊗ (ℬ ⊗ 𝒞) → (𝒜 ⊗ ℬ) ⊗ 𝒞`.
pub fn associator(a: &FdAlgebra, b: &FdAlgebra, c: &FdAlgebra) -> LinMap {
    let bc = TensorStructure::new(b, c);
    let dom = TensorStructure::new(a, &bc.product);
    let ab = TensorStructure::new(a, b);
    let cod = TensorStructure::new(&ab.product, c);
    // basis elements of ℬ⊗𝒞 are themselves simple tensors
    let bc_factors = bc.basis_factors();
    let (ab_, bb, cb) = (a.basis(), b.basis(), c.basis());
    dom.map_indexed(&cod.product, |i, jk| {
        let (j, k) = bc_factors[jk];
        cod.tensor(&ab.tensor(&ab_[i], &bb[j]).unwrap(), &cb[k]).unwrap()
    })
}

/// `γ : 𝒜 ⊗ ℬ → ℬ ⊗ 𝒜`, `a⊗b ↦ b⊗a`.
pub fn braiding(a: &FdAlgebra, b: &FdAlgebra) -> LinMap {
    let dom = TensorStructure::new(a, b);
    let cod = TensorStructure::new(b, a);
    dom.map_from_simple(&cod.product, |x, y| cod.tensor(y, x).unwrap())
}

/// The unitors `(λ : ℂ ⊗ 𝒜 → 𝒜, ϱ : 𝒜 ⊗ ℂ → 𝒜)`.
pub fn unitors(a: &FdAlgebra) -> (LinMap, LinMap) {
    let one = FdAlgebra::complex();
    let left = TensorStructure::new(&one, a).map_from_simple(a, |z, x| x.scale(z.block(0)[(0, 0)]));
    let right = TensorStructure::new(a, &one).map_from_simple(a, |x, z| x.scale(z.block(0)[(0, 0)]));
    (left, right)
}

/// `𝒜 ⊗ (⊕ ℬ_l) → ⊕ (𝒜 ⊗ ℬ_l)`, `a ⊗ (b_l)_l ↦ (a ⊗ b_l)_l`.
pub fn distributor(a: &FdAlgebra, summands: &[FdAlgebra]) -> LinMap {
    let sum = FdAlgebra::direct_sum(summands);
    let dom = TensorStructure::new(a, &sum);
    let parts: Vec<TensorStructure> = summands.iter().map(|b| TensorStructure::new(a, b)).collect();
    let cod = FdAlgebra::direct_sum(&parts.iter().map(|t| t.product.clone()).collect::<Vec<_>>());
    dom.map_from_simple(&cod, |x, y| {
        let mut offset = 0;
        let pieces: Vec<Element> = parts
            .iter()
            .map(|t| {
                let k = t.right.num_blocks();
                let local = Element::new(t.right.clone(), y.blocks()[offset..offset + k].to_vec()).unwrap();
                offset += k;
                t.tensor(x, &local).unwrap()
            })
            .collect();
        Element::direct_sum(&pieces)
    })
}

/// Both sides of the pentagon, as maps `𝒜⊗(ℬ⊗(𝒞⊗𝒟)) → ((𝒜⊗ℬ)⊗𝒞)⊗𝒟`.
pub fn pentagon_sides(a: &FdAlgebra, b: &FdAlgebra, c: &FdAlgebra, d: &FdAlgebra) -> (LinMap, LinMap) {
    let ab = TensorStructure::new(a, b).product;
    let bc = TensorStructure::new(b, c).product;
    let cd = TensorStructure::new(c, d).product;
    let lhs = associator(&ab, c, d).compose(&associator(a, b, &cd));
    let rhs = tensor_maps(&associator(a, b, c), &LinMap::identity(d))
        .compose(&associator(a, &bc, d))
        .compose(&tensor_maps(&LinMap::identity(a), &associator(b, c, d)));
    (lhs, rhs)
}

/// Both sides of the triangle, as maps `𝒜⊗(ℂ⊗ℬ) → 𝒜⊗ℬ`.
pub fn triangle_sides(a: &FdAlgebra, b: &FdAlgebra) -> (LinMap, LinMap) {
    let one = FdAlgebra::complex();
    let (lambda_b, _) = unitors(b);
    let (_, rho_a) = unitors(a);
    let lhs = tensor_maps(&LinMap::identity(a), &lambda_b);
    let rhs = tensor_maps(&rho_a, &LinMap::identity(b)).compose(&associator(a, &one, b));
    (lhs, rhs)
}

/// The two hexagons: maps `(𝒜⊗ℬ)⊗𝒞 → ℬ⊗(𝒞⊗𝒜)` through `γ_{𝒜,ℬ⊗𝒞}` versus
/// braiding one factor at a time, and maps `𝒜⊗(ℬ⊗𝒞) → (𝒞⊗𝒜)⊗ℬ` through
/// `γ_{𝒜⊗ℬ,𝒞}` versus the same.
pub fn hexagon_sides(a: &FdAlgebra, b: &FdAlgebra, c: &FdAlgebra) -> [(LinMap, LinMap); 2] {
    let id = LinMap::identity;
    let inv_assoc = |x: &FdAlgebra, y: &FdAlgebra, z: &FdAlgebra| {
        associator(x, y, z)
            .inverse(&ToleranceConfig::default())
            .expect("associator is invertible")
    };
    let bc = TensorStructure::new(b, c).product;
    let ab = TensorStructure::new(a, b).product;
    let first_lhs = inv_assoc(b, c, a)
        .compose(&braiding(a, &bc))
        .compose(&inv_assoc(a, b, c));
    let first_rhs = tensor_maps(&id(b), &braiding(a, c))
        .compose(&inv_assoc(b, a, c))
        .compose(&tensor_maps(&braiding(a, b), &id(c)));
    let second_lhs = associator(c, a, b)
        .compose(&braiding(&ab, c))
        .compose(&associator(a, b, c));
    let second_rhs = tensor_maps(&braiding(a, c), &id(b))
        .compose(&associator(a, c, b))
        .compose(&tensor_maps(&id(a), &braiding(b, c)));
    [(first_lhs, first_rhs), (second_lhs, second_rhs)]
}

/// All blocks of size one.
pub fn is_duplicable(a: &FdAlgebra) -> bool {
    a.dims().iter().all(|&n| n == 1)
}

/// `a ⊗ b ↦ ab`. Linear on any algebra, positive only on classical ones.
pub fn multiplication_map(a: &FdAlgebra) -> LinMap {
    TensorStructure::new(a, a).map_from_simple(a, |x, y| x * y)
}

/// The duplicator `δ(a⊗b) = ab`, if `a` is classical.
pub fn duplicator(a: &FdAlgebra) -> Option<LinMap> {
    is_duplicable(a).then(|| multiplication_map(a))
}

/// Searches random rank-one positives `vv*` of `𝒜 ⊗ 𝒜` for one whose product
/// image is not positive.
pub fn multiplication_witness(
    a: &FdAlgebra,
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Option<PositivityWitness> {
    let ts = TensorStructure::new(a, a);
    let m = multiplication_map(a);
    let mut rng = random::rng(seed);
    let nblocks = ts.product.num_blocks();
    if nblocks == 0 {
        return None;
    }
    for _ in 0..samples {
        let b = rng.random_range(0..nblocks);
        let v = random::gaussian_vector(&mut rng, ts.product.dims()[b]);
        let v = &v / linalg::c(v.norm());
        let input = ts.product.embed_block(b, &v * v.adjoint()).expect("shape");
        let image = m.apply(&input);
        if !image.is_positive(tol) {
            return Some(PositivityWitness { input, image });
        }
    }
    None
}

/// Indices of the blocks carrying a multiplicative unital functional, i.e.
/// the blocks of size one.
pub fn nsp(a: &FdAlgebra) -> Vec<usize> {
    (0..a.num_blocks()).filter(|&i| a.dims()[i] == 1).collect()
}

/// `ℓ∞(nsp 𝒜)`.
pub fn bang(a: &FdAlgebra) -> FdAlgebra {
    FdAlgebra::classical(nsp(a).len())
}

/// `η : 𝒜 → ℓ∞(nsp 𝒜)`, `η(x)(i) = x_i`.
pub fn bang_unit(a: &FdAlgebra) -> LinMap {
    let points = nsp(a);
    let cod = bang(a);
    LinMap::from_fn(a, &cod, |x| {
        let values: Vec<Matrix> = points.iter().map(|&i| x.block(i).clone()).collect();
        Element::new(cod.clone(), values).expect("1×1 blocks")
    })
}

/// The unique `g : ℓ∞(nsp 𝒜) → ℬ` with `f = g ∘ η`, for `f` vanishing off the
/// one-dimensional blocks (as every miu map into a classical `ℬ` does).
pub fn factor_through_bang_unit(f: &LinMap, tol: &ToleranceConfig) -> Result<LinMap> {
    let a = f.dom().clone();
    let points = nsp(&a);
    let eta = bang_unit(&a);
    let g = LinMap::from_fn(eta.cod(), f.cod(), |x| {
        let mut blocks: Vec<Matrix> = a.dims().iter().map(|&n| Matrix::zeros(n, n)).collect();
        for (k, &i) in points.iter().enumerate() {
            blocks[i] = x.block(k).clone();
        }
        f.apply(&Element::new(a.clone(), blocks).expect("shapes"))
    });
    if !g.compose(&eta).approx_eq(f, tol) {
        return Err(Error::ShapeMismatch(
            "map does not factor through the classical reflection".into(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::projections;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn alg(d: &[usize]) -> FdAlgebra {
        FdAlgebra::new(d.to_vec()).unwrap()
    }

    #[test]
    fn product_dims_and_unit() {
        let ts = tensor_algebra(&alg(&[2]), &alg(&[2, 3]));
        assert_eq!(ts.product.dims(), &[4, 6]);
        assert_eq!(ts.block_index, vec![vec![0, 1]]);
        let one = ts.tensor(&ts.left.unit(), &ts.right.unit()).unwrap();
        assert_eq!(one, ts.product.unit());
        assert_eq!(ts.product.dim(), ts.left.dim() * ts.right.dim());
    }

    #[test]
    fn kronecker_convention() {
        let a = Element::real_matrix(2, &[1.0, 2.0, 3.0, 4.0]);
        let b = Element::real_matrix(2, &[0.0, 5.0, 6.0, 7.0]);
        let t = tensor_elements(&a, &b);
        for (r, rp, s, sp) in [(0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1)] {
            let want = a.block(0)[(r, rp)] * b.block(0)[(s, sp)];
            assert_eq!(t.block(0)[(r * 2 + s, rp * 2 + sp)], want);
        }
    }

    #[test]
    fn simple_tensors_are_miu_bilinear_and_span() {
        let t = tol();
        let mut rng = random::rng(1);
        let (a, b) = (alg(&[2, 1]), alg(&[2]));
        let ts = tensor_algebra(&a, &b);
        let (x, y) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
        let (u, v) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
        let lhs = &ts.tensor(&x, &y).unwrap() * &ts.tensor(&u, &v).unwrap();
        assert!(lhs.approx_eq(&ts.tensor(&(&x * &u), &(&y * &v)).unwrap(), &t));
        assert!(ts
            .tensor(&x, &y)
            .unwrap()
            .adjoint()
            .approx_eq(&ts.tensor(&x.adjoint(), &y.adjoint()).unwrap(), &t));
        assert!(ts
            .tensor(&(&x + &u), &y)
            .unwrap()
            .approx_eq(&(&ts.tensor(&x, &y).unwrap() + &ts.tensor(&u, &y).unwrap()), &t));
        let simple: Vec<Element> = ts
            .basis_factors()
            .iter()
            .map(|&(i, j)| ts.tensor(&a.basis_element(i), &b.basis_element(j)).unwrap())
            .collect();
        assert_eq!(simple, ts.product.basis());
        assert!(ts.tensor(&x, &b.unit()).is_ok());
        assert!(ts.tensor(&y, &b.unit()).is_err());
    }

    #[test]
    fn norm_and_ceiling_of_tensor() {
        let t = tol();
        let mut rng = random::rng(2);
        let (a, b) = (alg(&[2, 1]), alg(&[3]));
        for _ in 0..20 {
            let (x, y) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
            let xy = tensor_elements(&x, &y);
            assert!((xy.norm() - x.norm() * y.norm()).abs() <= 1e-9 * xy.norm().max(1.0));
            let (p, q) = (
                random::low_rank_positive(&mut rng, &a, 1),
                random::low_rank_positive(&mut rng, &b, 2),
            );
            let lhs = projections::ceiling(&tensor_elements(&p, &q), &t).unwrap();
            let rhs = tensor_elements(
                &projections::ceiling(&p, &t).unwrap(),
                &projections::ceiling(&q, &t).unwrap(),
            );
            assert!(lhs.approx_eq(&rhs, &t));
        }
    }

    #[test]
    fn tensor_of_maps() {
        let t = tol();
        let mut rng = random::rng(3);
        let (a, b) = (alg(&[2]), alg(&[2, 1]));
        let id = tensor_maps(&LinMap::identity(&a), &LinMap::identity(&b));
        assert!(id.approx_eq(&LinMap::identity(&tensor_algebra(&a, &b).product), &t));
        let f = random::cp_map(&mut rng, &a, &alg(&[1, 2]), 2);
        let g = random::cp_map(&mut rng, &b, &alg(&[3]), 1);
        let fg = tensor_maps(&f, &g);
        assert!(fg.is_completely_positive(&t));
        for _ in 0..5 {
            let (x, y) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
            let want = tensor_elements(&f.apply(&x), &g.apply(&y));
            assert!(fg.apply(&tensor_elements(&x, &y)).approx_eq(&want, &t));
        }
        let u = random::unitary(&mut rng, &a);
        let miu = LinMap::conjugation_by(&u);
        assert!(tensor_maps(&miu, &bang_unit(&b)).is_miu(&t));
    }

    #[test]
    fn product_functionals() {
        let t = tol();
        let mut rng = random::rng(4);
        let (a, b) = (alg(&[2]), alg(&[1, 2]));
        let (s, r) = (random::state(&mut rng, &a), random::state(&mut rng, &b));
        let sr = tensor_maps(&s, &r);
        for _ in 0..10 {
            let (x, y) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
            let got = sr.eval_scalar(&tensor_elements(&x, &y)).unwrap();
            let want = s.eval_scalar(&x).unwrap() * r.eval_scalar(&y).unwrap();
            assert!((got - want).norm() < 1e-12);
            let pos = random::positive(&mut rng, sr.dom());
            assert!(sr.eval_scalar(&pos).unwrap().re >= -1e-12);
        }
        assert!(sr.is_positive_functional(&t).unwrap());
    }

    #[test]
    fn schur_product_of_psd_is_psd() {
        let mut rng = random::rng(5);
        let m3 = alg(&[3]);
        for _ in 0..20 {
            let (p, q) = (random::positive(&mut rng, &m3), random::positive(&mut rng, &m3));
            let h = p.block(0).component_mul(q.block(0));
            let min = crate::linalg::hermitian_eigen(&h).0[0];
            assert!(min >= -1e-12);
        }
    }

    #[test]
    fn classical_algebras_tensor_to_classical() {
        let ts = tensor_algebra(&FdAlgebra::classical(2), &FdAlgebra::classical(3));
        assert_eq!(ts.product, FdAlgebra::classical(6));
    }

    #[test]
    fn monoidal_isomorphisms() {
        let t = tol();
        let (m2, c2, mc) = (alg(&[2]), alg(&[1, 1]), alg(&[2, 1]));
        let maps = [
            associator(&m2, &c2, &mc),
            braiding(&m2, &mc),
            unitors(&mc).0,
            unitors(&mc).1,
            distributor(&m2, &[alg(&[2]), alg(&[3])]),
        ];
        for f in &maps {
            assert!(f.is_miu(&t));
            assert!(f.inverse(&t).is_some());
        }
        let d = distributor(&m2, &[alg(&[2]), alg(&[3])]);
        assert_eq!(d.dom().dims(), &[4, 6]);
        assert_eq!(d.cod().dims(), &[4, 6]);
        let g = braiding(&m2, &mc);
        assert!(braiding(&mc, &m2).compose(&g).approx_eq(&LinMap::identity(g.dom()), &t));
        let one = FdAlgebra::complex();
        let (l, r) = unitors(&one);
        assert!(l.approx_eq(&r, &t));
    }

    #[test]
    fn isomorphisms_act_on_simple_tensors() {
        let t = tol();
        let mut rng = random::rng(6);
        let (a, b, c_) = (alg(&[2]), alg(&[1, 1]), alg(&[2, 1]));
        let (x, y, z) = (
            random::element(&mut rng, &a),
            random::element(&mut rng, &b),
            random::element(&mut rng, &c_),
        );
        let left = tensor_elements(&x, &tensor_elements(&y, &z));
        let right = tensor_elements(&tensor_elements(&x, &y), &z);
        assert!(associator(&a, &b, &c_).apply(&left).approx_eq(&right, &t));
        assert!(braiding(&a, &c_)
            .apply(&tensor_elements(&x, &z))
            .approx_eq(&tensor_elements(&z, &x), &t));
        let w = FdAlgebra::complex().scalar(c(2.5));
        assert!(unitors(&a)
            .0
            .apply(&tensor_elements(&w, &x))
            .approx_eq(&x.scale_real(2.5), &t));
        let parts = [alg(&[1, 1]), alg(&[2, 1])];
        let yz = Element::direct_sum(&[y.clone(), z.clone()]);
        let want = Element::direct_sum(&[tensor_elements(&x, &y), tensor_elements(&x, &z)]);
        assert!(distributor(&a, &parts)
            .apply(&tensor_elements(&x, &yz))
            .approx_eq(&want, &t));
    }

    #[test]
    fn coherence_diagrams() {
        let t = tol();
        let (m2, c2, mc) = (alg(&[2]), alg(&[1, 1]), alg(&[2, 1]));
        let (l, r) = pentagon_sides(&m2, &c2, &mc, &c2);
        assert!(l.approx_eq(&r, &t));
        let (l, r) = triangle_sides(&mc, &m2);
        assert!(l.approx_eq(&r, &t));
        for (l, r) in hexagon_sides(&m2, &c2, &mc) {
            assert_eq!((l.dom(), l.cod()), (r.dom(), r.cod()));
            assert!(l.approx_eq(&r, &t));
        }
    }

    #[test]
    fn duplicators() {
        let t = tol();
        for (d, dup) in [
            (vec![1], true),
            (vec![1, 1, 1], true),
            (vec![2], false),
            (vec![2, 1], false),
            (vec![3], false),
        ] {
            let a = alg(&d);
            assert_eq!(is_duplicable(&a), dup);
            assert_eq!(duplicator(&a).is_some(), dup);
            if !dup {
                let w = multiplication_witness(&a, 1000, 0, &t).expect("witness");
                assert!(w.input.is_positive(&t) && !w.image.is_positive(&t));
            }
        }
        let c3 = FdAlgebra::classical(3);
        let delta = duplicator(&c3).unwrap();
        assert!(delta.is_completely_positive(&t) && delta.is_subunital(&t));
        let ts = tensor_algebra(&c3, &c3);
        let mut rng = random::rng(7);
        for _ in 0..10 {
            let (x, y) = (random::element(&mut rng, &c3), random::element(&mut rng, &c3));
            assert!(delta.apply(&ts.tensor(&x, &c3.unit()).unwrap()).approx_eq(&x, &t));
            assert!(delta.apply(&ts.tensor(&c3.unit(), &x).unwrap()).approx_eq(&x, &t));
            assert!(delta.apply(&ts.tensor(&x, &y).unwrap()).approx_eq(&(&x * &y), &t));
        }
        let pointwise = |v: &[f64]| {
            Element::new(
                FdAlgebra::classical(v.len()),
                v.iter().map(|&x| Matrix::from_element(1, 1, c(x))).collect(),
            )
            .unwrap()
        };
        let d2 = duplicator(&FdAlgebra::classical(2)).unwrap();
        let got = d2.apply(&tensor_elements(&pointwise(&[2.0, 3.0]), &pointwise(&[5.0, 7.0])));
        assert!(got.approx_eq(&pointwise(&[10.0, 21.0]), &t));
    }

    #[test]
    fn duplicator_is_an_associative_monoid() {
        let t = tol();
        let c3 = FdAlgebra::classical(3);
        let d = duplicator(&c3).unwrap();
        let id = LinMap::identity(&c3);
        let lhs = d.compose(&tensor_maps(&d, &id)).compose(&associator(&c3, &c3, &c3));
        let rhs = d.compose(&tensor_maps(&id, &d));
        assert!(lhs.approx_eq(&rhs, &t));
    }

    #[test]
    fn nsp_examples() {
        assert_eq!(nsp(&FdAlgebra::classical(3)), vec![0, 1, 2]);
        assert_eq!(bang(&FdAlgebra::classical(3)), FdAlgebra::classical(3));
        assert!(nsp(&alg(&[2])).is_empty());
        assert!(bang(&alg(&[2])).is_trivial());
        assert_eq!(nsp(&alg(&[2, 1])), vec![1]);
        assert_eq!(bang(&alg(&[2, 1])), FdAlgebra::complex());
    }

    /// Counts multiplicative unital functionals on `M_n` with values
    /// `x_ij = φ(E_ij)`. Diagonal values are idempotent, so enumerate them over
    /// `{0, 1}ⁿ`; `x_ij = x_ii x_ij = x_ij x_jj` forces `x_ij = 0` unless both
    /// diagonal values are 1. Every candidate is then checked against
    /// `x_ij x_kl = δ_jk x_il` and `Σ x_ii = 1`.
    fn count_miu_functionals(n: usize) -> usize {
        (0u32..(1 << n))
            .filter(|mask| {
                let d = |i: usize| ((mask >> i) & 1) as f64;
                let x = |i: usize, j: usize| if i == j { d(i) } else { 0.0 };
                let unital = (0..n).map(d).sum::<f64>() == 1.0;
                let mult = (0..n).all(|i| {
                    (0..n).all(|j| {
                        (0..n).all(|k| (0..n).all(|l| x(i, j) * x(k, l) == if j == k { x(i, l) } else { 0.0 }))
                    })
                });
                unital && mult
            })
            .count()
    }

    #[test]
    fn nsp_matches_brute_force() {
        for n in 1..4 {
            assert_eq!(count_miu_functionals(n), nsp(&alg(&[n])).len());
        }
    }

    #[test]
    fn bang_unit_is_universal() {
        let t = tol();
        let mut rng = random::rng(8);
        for d in [vec![2, 1, 1], vec![1, 3, 1], vec![1]] {
            let a = alg(&d);
            let eta = bang_unit(&a);
            assert!(eta.is_miu(&t));
            let points = nsp(&a);
            // a miu map into ℓ∞(Y) picks a one-dimensional block per point of Y
            let choice: Vec<usize> = (0..4).map(|_| points[rng.random_range(0..points.len())]).collect();
            let target = FdAlgebra::classical(choice.len());
            let f = LinMap::from_fn(&a, &target, |x| {
                Element::new(target.clone(), choice.iter().map(|&i| x.block(i).clone()).collect()).unwrap()
            });
            assert!(f.is_miu(&t));
            let g = factor_through_bang_unit(&f, &t).unwrap();
            assert!(g.is_miu(&t));
            assert!(g.compose(&eta).approx_eq(&f, &t));
        }
        let m2 = alg(&[2, 1]);
        let bad = LinMap::from_fn(&m2, &FdAlgebra::complex(), |x| {
            FdAlgebra::complex().scalar(x.block(0)[(0, 0)])
        });
        assert!(factor_through_bang_unit(&bad, &t).is_err());
    }
}
