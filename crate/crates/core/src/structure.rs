//! Unital *-subalgebras: generation, Wedderburn decomposition into full
//! matrix algebras, the finite Gelfand representation, and GNS.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{Element, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix, Vector};
use crate::maps::LinMap;
use crate::projections::Subspace;
use crate::random;
use crate::tolerance::ToleranceConfig;

/// A unital *-subalgebra, given by a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSubalgebra {
    pub ambient: FdAlgebra,
    pub basis: Vec<Element>,
}

impl StarSubalgebra {
    /// The span of `elements`, which must already contain 1 and be closed
    /// under adjoints and products.
    pub fn new(ambient: &FdAlgebra, elements: &[Element], tol: &ToleranceConfig) -> Result<Self> {
        for x in elements {
            ambient.check_same(x.algebra())?;
        }
        let space = Subspace::span(ambient, elements, tol);
        let s = StarSubalgebra {
            ambient: ambient.clone(),
            basis: space.basis,
        };
        s.validate(tol)?;
        Ok(s)
    }

    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        let space = self.space();
        if !space.contains(&self.ambient.unit(), tol) {
            return Err(Error::ClosureViolated("does not contain the unit".into()));
        }
        if !space.is_star_closed(tol) {
            return Err(Error::ClosureViolated("not closed under adjoints".into()));
        }
        if !space.is_product_closed(tol) {
            return Err(Error::ClosureViolated("not closed under products".into()));
        }
        Ok(())
    }

    pub fn space(&self) -> Subspace {
        Subspace {
            ambient: self.ambient.clone(),
            basis: self.basis.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &Element, tol: &ToleranceConfig) -> bool {
        self.space().contains(x, tol)
    }

    pub fn is_commutative(&self, tol: &ToleranceConfig) -> bool {
        self.basis
            .iter()
            .enumerate()
            .all(|(i, a)| self.basis[i + 1..].iter().all(|b| a.commutes_with(b, tol)))
    }

    /// `Z(S) = S ∩ S′`, as the null space of `c ↦ [Σ c_k b_k, b_l]`.
    pub fn centre(&self, tol: &ToleranceConfig) -> Subspace {
        let d = self.dim();
        let n = self.ambient.dim();
        let mut stacked = Matrix::zeros(d * n, d);
        for (l, bl) in self.basis.iter().enumerate() {
            for (k, bk) in self.basis.iter().enumerate() {
                let comm = &(bk * bl) - &(bl * bk);
                stacked.view_mut((l * n, k), (n, 1)).copy_from(&comm.coords());
            }
        }
        let ns = linalg::null_space(&stacked, tol.snap_eps);
        let elements: Vec<Element> = (0..ns.ncols())
            .map(|j| combine(&self.ambient, &self.basis, &ns.column(j).into_owned()))
            .collect();
        Subspace::span(&self.ambient, &elements, tol)
    }
}

fn combine(alg: &FdAlgebra, basis: &[Element], coeffs: &Vector) -> Element {
    basis
        .iter()
        .zip(coeffs.iter())
        .fold(alg.zero(), |acc, (b, &z)| &acc + &b.scale(z))
}

/// Random self-adjoint element of a *-closed subspace.
fn random_self_adjoint_in<R: Rng + ?Sized>(rng: &mut R, alg: &FdAlgebra, space: &Subspace) -> Element {
    let coeffs = random::gaussian_vector(rng, space.dim());
    combine(alg, &space.basis, &coeffs).real_part()
}

/// Spectral projections of a self-adjoint `h`, eigenvalues pooled across all
/// blocks and merged when closer than `gap`; ascending.
fn pooled_spectral_projections(h: &Element, gap: f64) -> Vec<(f64, Element)> {
    let alg = h.algebra();
    let eig: Vec<(Vec<f64>, Matrix)> = h.blocks().iter().map(linalg::hermitian_eigen).collect();
    let mut all: Vec<(f64, usize, usize)> = eig
        .iter()
        .enumerate()
        .flat_map(|(b, (vals, _))| vals.iter().enumerate().map(move |(i, &v)| (v, b, i)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut groups: Vec<Vec<(f64, usize, usize)>> = Vec::new();
    for item in all {
        match groups.last_mut() {
            Some(g) if item.0 - g.last().unwrap().0 <= gap => g.push(item),
            _ => groups.push(vec![item]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|x| x.0).sum::<f64>() / g.len() as f64;
            let blocks = alg
                .dims()
                .iter()
                .enumerate()
                .map(|(b, &n)| {
                    let cols: Vec<usize> = g.iter().filter(|x| x.1 == b).map(|x| x.2).collect();
                    if cols.is_empty() {
                        Matrix::zeros(n, n)
                    } else {
                        linalg::column_projector(&eig[b].1, &cols)
                    }
                })
                .collect();
            (mean, Element::new(alg.clone(), blocks).expect("shapes"))
        })
        .collect()
}

/// Least unital *-subalgebra containing `generators`, by closing the span
/// under adjoints and pairwise products until the dimension stabilises.
pub fn generate_subalgebra(
    ambient: &FdAlgebra,
    generators: &[Element],
    tol: &ToleranceConfig,
) -> Result<StarSubalgebra> {
    for g in generators {
        ambient.check_same(g.algebra())?;
    }
    let mut family: Vec<Element> = vec![ambient.unit()];
    family.extend(generators.iter().cloned());
    family.extend(generators.iter().map(Element::adjoint));
    let mut space = Subspace::span(ambient, &family, tol);
    loop {
        let mut next = space.basis.clone();
        for a in &space.basis {
            next.push(a.adjoint());
            for b in &space.basis {
                next.push(a * b);
            }
        }
        let grown = Subspace::span(ambient, &next, tol);
        if grown.dim() == space.dim() {
            break;
        }
        space = grown;
    }
    Ok(StarSubalgebra {
        ambient: ambient.clone(),
        basis: space.basis,
    })
}

/// `S ≅ ⊕ M_{N_m}`, realised by the injective miu map `embedding` from the
/// block algebra onto `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wedderburn {
    pub dims: Vec<usize>,
    pub blocks: FdAlgebra,
    pub embedding: LinMap,
    /// Minimal central projections of `S`, one per block.
    pub min_central_projs: Vec<Element>,
    /// Matrix units `E^{(m)}_{jk}`, listed per block in row-major order.
    pub matrix_units: Vec<Vec<Element>>,
}

impl Wedderburn {
    /// Coordinates of `x ∈ S` in the block algebra.
    pub fn decompose(&self, x: &Element, tol: &ToleranceConfig) -> Result<Element> {
        let pinv = linalg::pinv(self.embedding.matrix(), tol.snap_eps);
        let y = Element::from_coords(&self.blocks, &(&pinv * x.coords()))?;
        let back = self.embedding.apply(&y);
        if !back.approx_eq(x, &tol.with_eps_rel(tol.snap_eps)) {
            return Err(Error::ClosureViolated("element is not in the subalgebra".into()));
        }
        Ok(y)
    }
}

const WEDDERBURN_RETRIES: usize = 32;

/// Splits `S` into factors by the spectral projections of a random central
/// self-adjoint element, then builds matrix units in each factor from a
/// family of minimal projections and the partial isometries between them.
pub fn wedderburn(s: &StarSubalgebra, seed: u64, tol: &ToleranceConfig) -> Result<Wedderburn> {
    s.validate(tol)?;
    let alg = &s.ambient;
    let mut rng = random::rng(seed);
    let centre = s.centre(tol);
    let mut central = None;
    for attempt in 0..=WEDDERBURN_RETRIES {
        let z = if attempt < WEDDERBURN_RETRIES {
            random_self_adjoint_in(&mut rng, alg, &centre)
        } else {
            // deterministic fallback: distinct weights on the basis
            let w = Vector::from_iterator(centre.dim(), (0..centre.dim()).map(|k| c((k as f64 + 1.0).sqrt())));
            combine(alg, &centre.basis, &w).real_part()
        };
        let scale = z.norm().max(1.0);
        let projs = pooled_spectral_projections(&z, 1e-6 * scale);
        let separated = projs.windows(2).all(|w| w[1].0 - w[0].0 > 1e-4 * scale);
        if projs.len() == centre.dim() && separated {
            central = Some(projs.into_iter().map(|x| x.1).collect::<Vec<_>>());
            break;
        }
    }
    let central = central.ok_or_else(|| Error::DecompositionFailed("centre did not split".into()))?;

    let mut factors: Vec<(usize, Element, Vec<Element>)> = Vec::new();
    for z in central {
        let factor = Subspace::span(alg, &s.basis.iter().map(|b| &z * b).collect::<Vec<_>>(), tol);
        let n = (factor.dim() as f64).sqrt().round() as usize;
        if n * n != factor.dim() {
            return Err(Error::DecompositionFailed(format!(
                "factor of dimension {} is not square",
                factor.dim()
            )));
        }
        let minimal = minimal_projections(&mut rng, s, &factor, &z, n, tol)?;
        let units = matrix_units(s, &minimal, tol)?;
        factors.push((n, z, units));
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.0));

    let dims: Vec<usize> = factors.iter().map(|f| f.0).collect();
    let blocks = FdAlgebra::new(dims.clone())?;
    let images: Vec<Element> = (0..blocks.dim())
        .map(|idx| {
            let (m, j, k) = blocks.basis_location(idx);
            factors[m].2[j * dims[m] + k].clone()
        })
        .collect();
    let embedding = LinMap::from_images(&blocks, alg, &images)?;
    Ok(Wedderburn {
        dims,
        blocks,
        embedding,
        min_central_projs: factors.iter().map(|f| f.1.clone()).collect(),
        matrix_units: factors.into_iter().map(|f| f.2).collect(),
    })
}

/// `pSp` for a projection `p ∈ S`.
fn compression(alg: &FdAlgebra, factor: &Subspace, p: &Element, tol: &ToleranceConfig) -> Subspace {
    Subspace::span(alg, &factor.basis.iter().map(|b| &(p * b) * p).collect::<Vec<_>>(), tol)
}

/// `n` orthogonal minimal projections of the factor summing to `z`: split
/// any projection `p` with `dim pSp > 1` by the spectrum of a random
/// self-adjoint element of `pSp`.
fn minimal_projections<R: Rng + ?Sized>(
    rng: &mut R,
    s: &StarSubalgebra,
    factor: &Subspace,
    z: &Element,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<Element>> {
    let alg = &s.ambient;
    let mut done: Vec<Element> = Vec::new();
    let mut pending = vec![z.clone()];
    let mut budget = WEDDERBURN_RETRIES * n.max(1);
    while let Some(p) = pending.pop() {
        let corner = compression(alg, factor, &p, tol);
        if corner.dim() == 1 {
            done.push(p);
            continue;
        }
        if budget == 0 {
            return Err(Error::DecompositionFailed(
                "minimal projection search did not converge".into(),
            ));
        }
        budget -= 1;
        let h = random_self_adjoint_in(rng, alg, &corner);
        let shift = h.norm() + 1.0;
        let shifted = &h + &p.scale_real(shift);
        let scale = shifted.norm().max(1.0);
        let parts: Vec<Element> = pooled_spectral_projections(&shifted, 1e-6 * scale)
            .into_iter()
            .filter(|(v, _)| *v > 0.5)
            .map(|x| x.1)
            .collect();
        if parts.len() < 2 {
            pending.push(p);
        } else {
            pending.extend(parts);
        }
    }
    if done.len() != n {
        return Err(Error::DecompositionFailed(format!(
            "found {} minimal projections, expected {n}",
            done.len()
        )));
    }
    Ok(done)
}

/// `E_jk = u_j* u_k` with `u_k` the normalised partial isometry spanning
/// `e_1 S e_k`.
fn matrix_units(s: &StarSubalgebra, minimal: &[Element], tol: &ToleranceConfig) -> Result<Vec<Element>> {
    let e = &minimal[0];
    let u: Vec<Element> = minimal
        .iter()
        .map(|ek| {
            let v = s
                .basis
                .iter()
                .map(|b| &(e * b) * ek)
                .max_by(|x, y| x.frobenius_norm().total_cmp(&y.frobenius_norm()))
                .expect("nonempty basis");
            let norm = v.norm();
            if norm <= tol.snap_eps {
                return Err(Error::DecompositionFailed(
                    "minimal projections are not equivalent".into(),
                ));
            }
            Ok(v.scale_real(1.0 / norm))
        })
        .collect::<Result<_>>()?;
    let n = minimal.len();
    Ok((0..n * n).map(|jk| &u[jk / n].adjoint() * &u[jk % n]).collect())
}

/// A commutative `S ≅ ℓ∞(points)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gelfand {
    pub points: usize,
    pub decomposition: Wedderburn,
}

impl Gelfand {
    /// Values of `x ∈ S` at the points: its coefficients on the minimal projections.
    pub fn evaluate(&self, x: &Element, tol: &ToleranceConfig) -> Result<Vec<Complex64>> {
        let y = self.decomposition.decompose(x, tol)?;
        Ok(y.blocks().iter().map(|m| m[(0, 0)]).collect())
    }
}

pub fn gelfand_finite(s: &StarSubalgebra, seed: u64, tol: &ToleranceConfig) -> Result<Gelfand> {
    if !s.is_commutative(tol) {
        return Err(Error::NotCommutative);
    }
    let decomposition = wedderburn(s, seed, tol)?;
    Ok(Gelfand {
        points: decomposition.dims.len(),
        decomposition,
    })
}

/// The GNS triple of a positive functional.
#[derive(Debug, Clone, PartialEq)]
pub struct GnsResult {
    pub state: LinMap,
    pub hilbert_dim: usize,
    /// `d × dim 𝒜` matrix sending coordinates of `a` to `η(a) ∈ ℂ^d`.
    pub eta: Matrix,
    /// `ρ : 𝒜 → M_d`.
    pub rep: LinMap,
}

impl GnsResult {
    pub fn eta_of(&self, a: &Element) -> Vector {
        &self.eta * a.coords()
    }

    /// `⌈ρ⌉` and `⌈⌈ω⌉⌉`, both central projections of the domain.
    pub fn carriers(&self, tol: &ToleranceConfig) -> Result<(Element, Element)> {
        Ok((self.rep.central_carrier(tol)?, self.state.central_carrier(tol)?))
    }
}

/// GNS by the Gram matrix `G[a,b] = ω(a*b)` on the canonical basis: the
/// Hilbert space is the span of its eigenvectors with eigenvalue above
/// `snap_eps·max(1, ‖G‖)` and `ρ(a)` is left multiplication transported there.
pub fn gns(state: &LinMap, tol: &ToleranceConfig) -> Result<GnsResult> {
    if !state.is_positive_functional(tol)? {
        return Err(Error::NotPositive);
    }
    let alg = state.dom().clone();
    let basis = alg.basis();
    let n = basis.len();
    let gram = Matrix::from_fn(n, n, |i, j| {
        state.eval_scalar(&(&basis[i].adjoint() * &basis[j])).unwrap()
    });
    let gram = linalg::hermitian_part(&gram);
    let (vals, vecs) = linalg::hermitian_eigen(&gram);
    let top = vals.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..n).filter(|&k| vals[k] > tol.snap_eps * top.max(1.0)).collect();
    let d = keep.len();
    // η = diag(√g) W*, with right inverse W diag(1/√g)
    let eta = Matrix::from_fn(d, n, |r, col| vecs[(col, keep[r])].conj() * vals[keep[r]].sqrt());
    let eta_inv = Matrix::from_fn(n, d, |row, r| vecs[(row, keep[r])] / vals[keep[r]].sqrt());
    let hilbert = FdAlgebra::new(if d > 0 { vec![d] } else { vec![] })?;
    let rep = LinMap::from_fn(&alg, &hilbert, |a| {
        if d == 0 {
            return hilbert.zero();
        }
        let left = Matrix::from_fn(n, n, |row, col| (a * &basis[col]).coords()[row]);
        Element::from_blocks(vec![&eta * left * &eta_inv]).expect("square")
    });
    Ok(GnsResult {
        state: state.clone(),
        hilbert_dim: d,
        eta,
        rep,
    })
}

/// `u (⊕ M_{n_i} ⊗ 1_{k_i}) u*` inside `M_N` for a random unitary `u`, where
/// `N = Σ n_i k_i`; returns the subalgebra and the embedding of `⊕ M_{n_i}`.
pub fn random_embedded_subalgebra<R: Rng + ?Sized>(
    rng: &mut R,
    blocks: &[(usize, usize)],
    tol: &ToleranceConfig,
) -> Result<(StarSubalgebra, LinMap)> {
    let big: usize = blocks.iter().map(|(n, k)| n * k).sum();
    let ambient = FdAlgebra::matrix(big);
    let source = FdAlgebra::new(blocks.iter().map(|b| b.0).collect())?;
    let u = random::unitary_matrix(rng, big);
    let embed = LinMap::from_fn(&source, &ambient, |x| {
        let mut m = Matrix::zeros(big, big);
        let mut off = 0;
        for (b, &(n, k)) in blocks.iter().enumerate() {
            let piece = linalg::kron(x.block(b), &Matrix::identity(k, k));
            m.view_mut((off, off), (n * k, n * k)).copy_from(&piece);
            off += n * k;
        }
        Element::from_blocks(vec![&u * m * u.adjoint()]).expect("square")
    });
    let s = StarSubalgebra::new(&ambient, &embed.images(), tol)?;
    Ok((s, embed))
}
