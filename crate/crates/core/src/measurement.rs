//! Corners and filters, purity, the ◇-predicates, the sequential product and
//! an executable check of its axioms A–E, with the four counterexample
//! operations that each break exactly one axiom.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::{Element, FdAlgebra};
use crate::division;
use crate::error::{Error, Result};
use crate::linalg::{c, Matrix, Vector};
use crate::maps::LinMap;
use crate::projections;
use crate::random;
use crate::spectral::{self, NamedFunction};
use crate::tolerance::ToleranceConfig;

/// `eAe` realised as an algebra of its own, with the embedding into and the
/// compression from the parent.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerContext {
    pub parent: FdAlgebra,
    pub proj: Element,
    /// One block per parent block where `e` has nonzero rank.
    pub corner: FdAlgebra,
    /// Per parent block, an `n_i × rank_i` isometry onto the range of `e`.
    pub isometries: Vec<Matrix>,
    /// Parent block index of each corner block.
    pub block_map: Vec<usize>,
    pub embed: LinMap,
    pub compress: LinMap,
}

/// Orthonormal basis of the range of a projection block, by pivoted
/// Gram–Schmidt on its columns. A block equal to the identity gives the
/// identity, so `corner_algebra(1)` has the identity embedding.
fn range_basis(m: &Matrix, rank: usize) -> Matrix {
    let n = m.nrows();
    let mut residual: Vec<Vector> = (0..n).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<Vector> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let (best, _) = residual
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc });
        let q = &residual[best] / c(residual[best].norm());
        for v in residual.iter_mut() {
            let proj = q.dotc(v);
            *v -= &q * proj;
        }
        basis.push(q);
    }
    Matrix::from_fn(n, rank, |i, j| basis[j][i])
}

impl CornerContext {
    pub fn new(e: &Element, tol: &ToleranceConfig) -> Result<Self> {
        e.require_projection(tol)?;
        let parent = e.algebra().clone();
        let ranks = projections::ranks(e);
        let isometries: Vec<Matrix> = e.blocks().iter().zip(&ranks).map(|(m, &r)| range_basis(m, r)).collect();
        let block_map: Vec<usize> = (0..ranks.len()).filter(|&i| ranks[i] > 0).collect();
        let corner = FdAlgebra::new(block_map.iter().map(|&i| ranks[i]).collect())?;
        let embed = LinMap::from_fn(&corner, &parent, |x| {
            let blocks = parent
                .dims()
                .iter()
                .enumerate()
                .map(|(i, &n)| match block_map.iter().position(|&b| b == i) {
                    Some(k) => &isometries[i] * x.block(k) * isometries[i].adjoint(),
                    None => Matrix::zeros(n, n),
                })
                .collect();
            Element::new(parent.clone(), blocks).expect("shapes")
        });
        let compress = LinMap::from_fn(&parent, &corner, |a| {
            let blocks = block_map
                .iter()
                .map(|&i| isometries[i].adjoint() * a.block(i) * &isometries[i])
                .collect();
            Element::new(corner.clone(), blocks).expect("shapes")
        });
        Ok(CornerContext {
            parent,
            proj: e.clone(),
            corner,
            isometries,
            block_map,
            embed,
            compress,
        })
    }
}

/// The corner `e𝒜e` of a projection.
pub fn corner_algebra(e: &Element, tol: &ToleranceConfig) -> Result<CornerContext> {
    CornerContext::new(e, tol)
}

/// `π_p : 𝒜 → ⌊p⌋𝒜⌊p⌋`, `a ↦ ⌊p⌋a⌊p⌋`, for an effect `p`.
pub fn standard_corner(p: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
    let fl = projections::floor(p, tol)?;
    Ok(CornerContext::new(&fl, tol)?.compress)
}

/// `c_p : ⌈p⌉𝒜⌈p⌉ → 𝒜`, `a ↦ √p a √p`, for a positive `p`.
pub fn standard_filter(p: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
    let ctx = CornerContext::new(&projections::ceiling(p, tol)?, tol)?;
    let root = spectral::sqrt(p, tol)?;
    Ok(LinMap::conjugation_by(&root).compose(&ctx.embed))
}

/// The unique `g` with `f = c_{d*d} ∘ g`, for CP `f : ℬ → 𝒜` with `f(1) ≤ d*d`.
pub fn factor_through_filter(f: &LinMap, d: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
    f.cod().check_same(d.algebra())?;
    if !f.is_completely_positive(tol) {
        return Err(Error::MapNotPositive);
    }
    let p = (&d.adjoint() * d).real_part();
    if !f.apply(&f.dom().unit()).leq(&p, tol) {
        return Err(Error::FilterBoundViolated);
    }
    let ctx = CornerContext::new(&projections::ceiling(&p, tol)?, tol)?;
    let inv_root = division::pseudoinverse(&spectral::sqrt(&p, tol)?, tol);
    let g = LinMap::conjugation_by(&inv_root).compose(f);
    let g = ctx.compress.compose(&g);
    let filter = standard_filter(&p, tol)?;
    if !filter.compose(&g).approx_eq(f, &tol.with_eps_rel(tol.snap_eps)) {
        return Err(Error::FilterBoundViolated);
    }
    Ok(g)
}

/// `g = f ∘ embed`, the unique map with `f = g ∘ π_e`, for `f` vanishing on `e⊥`.
pub fn factor_through_corner(f: &LinMap, e: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
    f.dom().check_same(e.algebra())?;
    let ctx = CornerContext::new(e, tol)?;
    let leak = f.apply(&e.perp()).norm();
    let scale = f.apply(&f.dom().unit()).norm().max(1.0);
    if leak > tol.snap_eps * scale {
        return Err(Error::CarrierViolated(leak));
    }
    let g = f.compose(&ctx.embed);
    if !g.compose(&ctx.compress).approx_eq(f, &tol.with_eps_rel(tol.snap_eps)) {
        return Err(Error::CarrierViolated(leak));
    }
    Ok(g)
}

/// `[f] : ⌈f⌉𝒜⌈f⌉ → ⌈f(1)⌉ℬ⌈f(1)⌉` with `f = c_{f(1)} ∘ [f] ∘ π_{⌈f⌉}`,
/// given by `x ↦ √f(1)\ f(x) /√f(1)` on the corners.
pub fn bracket(f: &LinMap, tol: &ToleranceConfig) -> Result<LinMap> {
    let e = f.carrier(tol)?;
    let one = f.apply(&f.dom().unit()).real_part();
    let q = projections::ceiling(&one, tol)?;
    let dom_ctx = CornerContext::new(&e, tol)?;
    let cod_ctx = CornerContext::new(&q, tol)?;
    let inv_root = division::pseudoinverse(&spectral::sqrt(&one, tol)?, tol);
    let middle = LinMap::conjugation_by(&inv_root).compose(f).compose(&dom_ctx.embed);
    Ok(cod_ctx.compress.compose(&middle))
}

/// Diagnostics behind [`is_pure`].
#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    pub bracket: LinMap,
    pub unital: bool,
    pub bijective: bool,
    pub min_singular_value: f64,
    pub inverse_cp: bool,
}

impl PurityReport {
    pub fn is_pure(&self) -> bool {
        self.unital && self.bijective && self.inverse_cp
    }
}

pub fn purity_report(f: &LinMap, tol: &ToleranceConfig) -> Result<PurityReport> {
    let b = bracket(f, tol)?;
    let unital = b.is_unital(tol);
    let square = b.dom().dim() == b.cod().dim();
    let min_sv = if b.dom().dim() == 0 && square {
        f64::INFINITY
    } else {
        b.min_singular_value()
    };
    let bijective = square && min_sv >= tol.snap_eps;
    let inverse_cp = bijective
        && b.inverse(tol)
            .map(|inv| inv.is_completely_positive(&tol.with_eps_rel(tol.snap_eps)))
            .unwrap_or(false);
    Ok(PurityReport {
        bracket: b,
        unital,
        bijective,
        min_singular_value: min_sv,
        inverse_cp,
    })
}

/// `[f]` is a unital bijection with completely positive inverse.
pub fn is_pure(f: &LinMap, tol: &ToleranceConfig) -> Result<bool> {
    Ok(purity_report(f, tol)?.is_pure())
}

fn require_endomorphism(f: &LinMap) -> Result<()> {
    if f.dom() != f.cod() {
        return Err(Error::NotAnEndomorphism);
    }
    Ok(())
}

/// `⟨f⟩ = π_{⌈f(1)⌉} ∘ f ∘ c_{⌈f⌉}` for an endomorphism `f`.
pub fn chevron(f: &LinMap, tol: &ToleranceConfig) -> Result<LinMap> {
    require_endomorphism(f)?;
    let e = f.carrier(tol)?;
    let q = projections::ceiling(&f.apply(&f.dom().unit()).real_part(), tol)?;
    let dom_ctx = CornerContext::new(&e, tol)?;
    let cod_ctx = CornerContext::new(&q, tol)?;
    Ok(cod_ctx.compress.compose(f).compose(&dom_ctx.embed))
}

/// Pure and contraposed to itself (checked on the projection family).
pub fn is_diamond_self_adjoint(f: &LinMap, tol: &ToleranceConfig) -> Result<bool> {
    require_endomorphism(f)?;
    Ok(is_pure(f, tol)? && f.are_contraposed(f, tol)?)
}

/// `f(1) ≥ 0` and `f = √f(1) (·) √f(1)`: the only ◇-positive map with that
/// value at 1.
pub fn is_diamond_positive(f: &LinMap, tol: &ToleranceConfig) -> Result<bool> {
    require_endomorphism(f)?;
    let one = f.apply(&f.dom().unit());
    if !one.is_positive(tol) {
        return Ok(false);
    }
    let root = spectral::sqrt(&one.real_part(), tol)?;
    Ok(LinMap::conjugation_by(&root).approx_eq(f, tol))
}

/// `p ∗ q = √p q √p` on effects.
pub fn seq_product(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<Element> {
    p.algebra().check_same(q.algebra())?;
    p.require_effect(tol)?;
    q.require_effect(tol)?;
    let root = spectral::sqrt(&p.real_part(), tol)?;
    Ok((&(&root * q) * &root).real_part())
}

/// The five axioms characterising the sequential product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `p ∗ 1 = p`.
    A,
    /// `q ↦ p ∗ q` is a pure map.
    B,
    /// `p ∗ (p ∗ q) = (p ∗ p) ∗ q`.
    C,
    /// `p = q ∗ q` for some effect `q`.
    D,
    /// `p ∗ e₁ ≤ e₂⊥ ⟺ p ∗ e₂ ≤ e₁⊥` for projections.
    E,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::A, Axiom::B, Axiom::C, Axiom::D, Axiom::E];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

type EvalFn = dyn Fn(&Element, &Element, &ToleranceConfig) -> Result<Element> + Send + Sync;
type WitnessFn = dyn Fn(&Element, &ToleranceConfig) -> Result<Element> + Send + Sync;

/// The built-in candidate operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    /// `√p q √p`.
    Std,
    /// `⌈p⌉ q ⌈p⌉`, breaks A.
    Ceil,
    /// `⌊p⌋q⌊p⌋ + √(p−⌊p⌋) q √(p−⌊p⌋)`, breaks B.
    FloorSplit,
    /// `√p g(p) q g(p) √p` with a `±1`-valued step `g`, breaks C.
    Sign,
    /// `√p g(p)* q g(p) √p` with `g(λ) = λ^i`, breaks E.
    Phase,
}

impl OpKind {
    pub const ALL: [OpKind; 5] = [
        OpKind::Std,
        OpKind::Ceil,
        OpKind::FloorSplit,
        OpKind::Sign,
        OpKind::Phase,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OpKind::Std => "std",
            OpKind::Ceil => "ceil",
            OpKind::FloorSplit => "floorsplit",
            OpKind::Sign => "sign",
            OpKind::Phase => "phase",
        }
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown operation {s:?}")))
    }
}

/// The `±1` step used by the sign counterexample: `−1` on `[1/4, 1/2]`, `+1`
/// elsewhere. It takes `g(2/3) = 1`, `g(4/9) = −1`, and separates the two
/// eigenvalues `4/9`, `16/81` of `p²` for `p = diag(2/3, 4/9)`.
pub fn sign_step(lambda: f64) -> f64 {
    if (0.25..=0.5).contains(&lambda) {
        -1.0
    } else {
        1.0
    }
}

/// A candidate binary operation on effects.
#[derive(Clone)]
pub struct BinOpSpec {
    pub name: String,
    pub kind: Option<OpKind>,
    /// The axiom this operation is designed to violate, if any.
    pub target: Option<Axiom>,
    eval: Arc<EvalFn>,
    /// `p ↦ q` with `q ∗ q = p`, used for axiom D.
    d_witness: Option<Arc<WitnessFn>>,
}

impl fmt::Debug for BinOpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinOpSpec")
            .field("name", &self.name)
            .field("target", &self.target)
            .finish()
    }
}

fn sandwich_by(x: &Element, q: &Element) -> Element {
    &(&x.adjoint() * q) * x
}

/// `g(p)·√p` for the phase-type counterexamples.
fn twisted_root(p: &Element, g: impl Fn(f64) -> Complex64, tol: &ToleranceConfig) -> Result<Element> {
    let ps = p.real_part();
    let zero_tol = tol.snap_eps * ps.norm().max(1.0);
    let u = spectral::functional_calculus(&ps, |z| Some(g(if z.re.abs() <= zero_tol { 0.0 } else { z.re })), tol)?;
    Ok(&u * &spectral::sqrt(&ps, tol)?)
}

impl BinOpSpec {
    pub fn custom(
        name: &str,
        eval: impl Fn(&Element, &Element, &ToleranceConfig) -> Result<Element> + Send + Sync + 'static,
        d_witness: Option<Arc<WitnessFn>>,
    ) -> Self {
        BinOpSpec {
            name: name.to_string(),
            kind: None,
            target: None,
            eval: Arc::new(eval),
            d_witness,
        }
    }

    pub fn builtin(kind: OpKind) -> Self {
        let sqrt_witness: Arc<WitnessFn> = Arc::new(|p, tol| spectral::sqrt(&p.real_part(), tol));
        let (eval, target, d_witness): (Arc<EvalFn>, Option<Axiom>, Arc<WitnessFn>) = match kind {
            OpKind::Std => (Arc::new(seq_product), None, sqrt_witness),
            OpKind::Ceil => (
                Arc::new(|p, q, tol| {
                    let e = projections::ceiling(&p.real_part(), tol)?;
                    Ok(sandwich_by(&e, q))
                }),
                Some(Axiom::A),
                Arc::new(|p, _| Ok(p.clone())),
            ),
            OpKind::FloorSplit => (
                Arc::new(|p, q, tol| {
                    let fl = projections::floor(&p.real_part(), tol)?;
                    let rest = (p - &fl).real_part();
                    let r = NamedFunction::Sqrt.apply(&rest, tol)?.real_part();
                    Ok(&sandwich_by(&fl, q) + &sandwich_by(&r, q))
                }),
                Some(Axiom::B),
                sqrt_witness,
            ),
            OpKind::Sign => (
                Arc::new(|p, q, tol| {
                    let w = twisted_root(p, |x| c(sign_step(x)), tol)?;
                    Ok(sandwich_by(&w, q))
                }),
                Some(Axiom::C),
                sqrt_witness,
            ),
            OpKind::Phase => (
                Arc::new(|p, q, tol| {
                    let w = twisted_root(p, |x| NamedFunction::ExpPhase.eval(c(x), 0.0).unwrap_or(c(1.0)), tol)?;
                    Ok(sandwich_by(&w, q))
                }),
                Some(Axiom::E),
                sqrt_witness,
            ),
        };
        BinOpSpec {
            name: kind.name().to_string(),
            kind: Some(kind),
            target,
            eval,
            d_witness: Some(d_witness),
        }
    }

    pub fn standard() -> Self {
        BinOpSpec::builtin(OpKind::Std)
    }

    pub fn eval(&self, p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<Element> {
        (self.eval)(p, q, tol)
    }

    pub fn d_witness(&self, p: &Element, tol: &ToleranceConfig) -> Option<Result<Element>> {
        self.d_witness.as_ref().map(|w| w(p, tol))
    }

    /// The map `q ↦ p ∗ q` extended linearly from projections spanning the
    /// algebra. Valid only if the operation is linear in `q`; see
    /// [`check_axioms`].
    pub fn linearize(&self, p: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
        let alg = p.algebra();
        let mut images: Vec<Element> = vec![alg.zero(); alg.dim()];
        for (b, &n) in alg.dims().iter().enumerate() {
            let unit_vec = |j: usize| {
                let mut v = Vector::zeros(n);
                v[j] = c(1.0);
                v
            };
            let proj = |v: Vector| alg.embed_block(b, &v * v.adjoint()).expect("shape");
            let diag: Vec<Element> = (0..n)
                .map(|j| self.eval(p, &proj(unit_vec(j)), tol))
                .collect::<Result<_>>()?;
            for j in 0..n {
                images[alg.basis_index(b, j, j)] = diag[j].clone();
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            for j in 0..n {
                for k in (j + 1)..n {
                    let plus = (unit_vec(j) + unit_vec(k)) * c(h);
                    let imag = (unit_vec(j) + unit_vec(k) * Complex64::new(0.0, 1.0)) * c(h);
                    let fp = self.eval(p, &proj(plus), tol)?;
                    let fi = self.eval(p, &proj(imag), tol)?;
                    // S = E_jk + E_kj, T = i(E_kj − E_jk)
                    let base = &diag[j] + &diag[k];
                    let s = &fp.scale_real(2.0) - &base;
                    let t = &fi.scale_real(2.0) - &base;
                    let it = t.scale(Complex64::new(0.0, 1.0));
                    images[alg.basis_index(b, j, k)] = (&s + &it).scale_real(0.5);
                    images[alg.basis_index(b, k, j)] = (&s - &it).scale_real(0.5);
                }
            }
        }
        LinMap::from_images(alg, alg, &images)
    }
}

/// The four operations each failing exactly one of A, B, C, E.
pub fn counterexample_ops() -> Vec<BinOpSpec> {
    [OpKind::Ceil, OpKind::FloorSplit, OpKind::Sign, OpKind::Phase]
        .into_iter()
        .map(BinOpSpec::builtin)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl AxiomStatus {
    pub fn label(&self) -> &'static str {
        match self {
            AxiomStatus::Pass => "pass",
            AxiomStatus::Fail => "fail",
            AxiomStatus::NotApplicable => "n/a",
        }
    }
}

/// Concrete inputs and outputs demonstrating a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomWitness {
    pub message: String,
    pub elements: Vec<(String, Element)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomOutcome {
    pub status: AxiomStatus,
    pub checked: usize,
    pub witness: Option<AxiomWitness>,
    pub note: Option<String>,
}

impl AxiomOutcome {
    fn pass(checked: usize) -> Self {
        AxiomOutcome {
            status: AxiomStatus::Pass,
            checked,
            witness: None,
            note: None,
        }
    }

    fn fail(checked: usize, witness: AxiomWitness) -> Self {
        AxiomOutcome {
            status: AxiomStatus::Fail,
            checked,
            witness: Some(witness),
            note: None,
        }
    }

    fn not_applicable(note: &str) -> Self {
        AxiomOutcome {
            status: AxiomStatus::NotApplicable,
            checked: 0,
            witness: None,
            note: Some(note.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub op: String,
    pub algebra: FdAlgebra,
    pub results: BTreeMap<Axiom, AxiomOutcome>,
    /// Inputs on which the operation returned a non-effect.
    pub effect_violations: usize,
}

impl AxiomReport {
    pub fn status(&self, axiom: Axiom) -> AxiomStatus {
        self.results[&axiom].status
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.results
            .iter()
            .filter(|(_, o)| o.status == AxiomStatus::Fail)
            .map(|(a, _)| *a)
            .collect()
    }

    /// `{"op", "algebra", "axioms": {A: {"status", "checked", "witness"?, "note"?}, ...}}`.
    pub fn to_json(&self) -> Value {
        let mut results = serde_json::Map::new();
        for (axiom, outcome) in &self.results {
            let mut o = json!({ "status": outcome.status.label(), "checked": outcome.checked });
            if let Some(w) = &outcome.witness {
                let mut wj = serde_json::Map::new();
                wj.insert("message".into(), Value::String(w.message.clone()));
                for (k, x) in &w.elements {
                    wj.insert(k.clone(), crate::json::element_to_json(x));
                }
                o["witness"] = Value::Object(wj);
            }
            if let Some(n) = &outcome.note {
                o["note"] = Value::String(n.clone());
            }
            results.insert(axiom.to_string(), o);
        }
        json!({
            "op": self.op,
            "algebra": crate::json::algebra_to_json(&self.algebra),
            "axioms": Value::Object(results),
            "effect_violations": self.effect_violations,
        })
    }
}

/// Effects on the flat diagonal (all blocks concatenated) from a pattern,
/// padded with zeros.
fn diagonal_probe(alg: &FdAlgebra, pattern: &[f64]) -> Element {
    let mut k = 0;
    let blocks = alg
        .dims()
        .iter()
        .map(|&n| {
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = c(pattern.get(k).cloned().unwrap_or(0.0));
                k += 1;
            }
            m
        })
        .collect();
    Element::new(alg.clone(), blocks).expect("shapes")
}

/// Inputs shared by every axiom check: deterministic probes first, then seeded
/// random effects (with eigenvalue atoms at 0 and 1), effects `q`, and
/// projections.
#[derive(Debug, Clone)]
pub struct AxiomCorpus {
    pub effects: Vec<Element>,
    pub qs: Vec<Element>,
    pub projections: Vec<(Element, Element)>,
}

impl AxiomCorpus {
    pub fn new(alg: &FdAlgebra, trials: usize, seed: u64) -> Self {
        let mut rng = random::rng(seed);
        let patterns: [&[f64]; 4] = [&[0.5], &[2.0 / 3.0, 1.0], &[1.0, 0.5], &[2.0 / 3.0, 4.0 / 9.0]];
        let mut effects: Vec<Element> = patterns.iter().map(|p| diagonal_probe(alg, p)).collect();
        while effects.len() < trials.max(patterns.len()) {
            effects.push(random::effect_with_atoms(&mut rng, alg));
        }
        let qs = (0..effects.len()).map(|_| random::effect(&mut rng, alg)).collect();
        let family = crate::maps::projection_family(alg, &ToleranceConfig::default());
        let projections = (0..effects.len())
            .map(|i| {
                let e1 = if i % 2 == 0 {
                    family[i / 2 % family.len()].clone()
                } else {
                    random::projection(&mut rng, alg)
                };
                (e1, random::projection(&mut rng, alg))
            })
            .collect();
        AxiomCorpus {
            effects,
            qs,
            projections,
        }
    }
}

/// `x ≤ e⊥` for an effect `x`, i.e. `e x e = 0`, with room for the eigenvalues
/// a ceiling discards.
fn below_perp(x: &Element, e: &Element, tol: &ToleranceConfig) -> bool {
    (&(e * x) * e).norm() <= 10.0 * tol.snap_eps * x.norm().max(1.0)
}

const B_TRIALS: usize = 50;

/// Runs axioms A–E for `op` on the corpus built from `trials` and `seed`.
///
/// B is checked on the first `min(trials, 50)` effects by linearising
/// `q ↦ p ∗ q` and testing purity; if the operation is not linear in `q` the
/// result is "n/a". D uses the operation's witness map `p ↦ q`.
pub fn check_axioms(op: &BinOpSpec, alg: &FdAlgebra, trials: usize, seed: u64, tol: &ToleranceConfig) -> AxiomReport {
    let corpus = AxiomCorpus::new(alg, trials, seed);
    check_axioms_on(op, alg, &corpus, tol)
}

pub fn check_axioms_on(op: &BinOpSpec, alg: &FdAlgebra, corpus: &AxiomCorpus, tol: &ToleranceConfig) -> AxiomReport {
    let mut effect_violations = 0;
    let mut ev = |p: &Element, q: &Element| -> Result<Element> {
        let r = op.eval(p, q, tol)?;
        if !r.is_effect(&tol.with_eps_rel(tol.snap_eps)) {
            effect_violations += 1;
        }
        Ok(r)
    };
    let mut results = BTreeMap::new();
    let err_outcome = |n: usize, msg: String, p: &Element| {
        AxiomOutcome::fail(
            n,
            AxiomWitness {
                message: msg,
                elements: vec![("p".into(), p.clone())],
            },
        )
    };

    // A
    let mut outcome = AxiomOutcome::pass(corpus.effects.len());
    for (i, p) in corpus.effects.iter().enumerate() {
        match ev(p, &alg.unit()) {
            Ok(r) if r.approx_eq(p, tol) => {}
            Ok(r) => {
                outcome = AxiomOutcome::fail(
                    i + 1,
                    AxiomWitness {
                        message: "p * 1 != p".into(),
                        elements: vec![("p".into(), p.clone()), ("p*1".into(), r)],
                    },
                );
                break;
            }
            Err(e) => {
                outcome = err_outcome(i + 1, format!("evaluation failed: {e}"), p);
                break;
            }
        }
    }
    results.insert(Axiom::A, outcome);

    // C
    let mut outcome = AxiomOutcome::pass(corpus.effects.len());
    for (i, (p, q)) in corpus.effects.iter().zip(&corpus.qs).enumerate() {
        let sides = (|| -> Result<(Element, Element)> {
            let inner = ev(p, q)?;
            let lhs = ev(p, &inner)?;
            let pp = ev(p, p)?;
            let rhs = ev(&pp, q)?;
            Ok((lhs, rhs))
        })();
        match sides {
            Ok((lhs, rhs)) if lhs.approx_eq(&rhs, tol) => {}
            Ok((lhs, rhs)) => {
                outcome = AxiomOutcome::fail(
                    i + 1,
                    AxiomWitness {
                        message: "p*(p*q) != (p*p)*q".into(),
                        elements: vec![
                            ("p".into(), p.clone()),
                            ("q".into(), q.clone()),
                            ("p*(p*q)".into(), lhs),
                            ("(p*p)*q".into(), rhs),
                        ],
                    },
                );
                break;
            }
            Err(e) => {
                outcome = err_outcome(i + 1, format!("evaluation failed: {e}"), p);
                break;
            }
        }
    }
    results.insert(Axiom::C, outcome);

    // D
    let outcome = if op.d_witness.is_none() {
        AxiomOutcome::not_applicable("no square-root witness supplied")
    } else {
        let mut outcome = AxiomOutcome::pass(corpus.effects.len());
        for (i, p) in corpus.effects.iter().enumerate() {
            let res = op.d_witness(p, tol).expect("witness present").and_then(|q| {
                q.require_effect(tol)?;
                let qq = ev(&q, &q)?;
                Ok((q, qq))
            });
            match res {
                Ok((_, qq)) if qq.approx_eq(p, tol) => {}
                Ok((q, qq)) => {
                    outcome = AxiomOutcome::fail(
                        i + 1,
                        AxiomWitness {
                            message: "q*q != p for the supplied witness q".into(),
                            elements: vec![("p".into(), p.clone()), ("q".into(), q), ("q*q".into(), qq)],
                        },
                    );
                    break;
                }
                Err(e) => {
                    outcome = err_outcome(i + 1, format!("witness failed: {e}"), p);
                    break;
                }
            }
        }
        outcome
    };
    results.insert(Axiom::D, outcome);

    // E: for each p, the pair (e1, ⌈p∗e1⌉⊥) makes the left side true; the
    // random pair (e1, e2) tests the equivalence directly
    let mut outcome = AxiomOutcome::pass(corpus.effects.len());
    'outer: for (i, (p, (e1, e2r))) in corpus.effects.iter().zip(&corpus.projections).enumerate() {
        let pairs = (|| -> Result<Vec<(Element, Element)>> {
            let x = ev(p, e1)?;
            let e2 = projections::ceiling(&x.real_part(), tol)?.perp();
            Ok(vec![(e1.clone(), e2), (e1.clone(), e2r.clone())])
        })();
        let pairs = match pairs {
            Ok(v) => v,
            Err(e) => {
                outcome = err_outcome(i + 1, format!("evaluation failed: {e}"), p);
                break;
            }
        };
        for (a, b) in pairs {
            let sides = (|| -> Result<(bool, bool)> {
                let left = below_perp(&ev(p, &a)?, &b, tol);
                let right = below_perp(&ev(p, &b)?, &a, tol);
                Ok((left, right))
            })();
            match sides {
                Ok((l, r)) if l == r => {}
                Ok((l, r)) => {
                    outcome = AxiomOutcome::fail(
                        i + 1,
                        AxiomWitness {
                            message: format!("p*e1 <= e2^perp is {l} but p*e2 <= e1^perp is {r}"),
                            elements: vec![("p".into(), p.clone()), ("e1".into(), a), ("e2".into(), b)],
                        },
                    );
                    break 'outer;
                }
                Err(e) => {
                    outcome = err_outcome(i + 1, format!("evaluation failed: {e}"), p);
                    break 'outer;
                }
            }
        }
    }
    results.insert(Axiom::E, outcome);

    // B
    let outcome = check_axiom_b(op, alg, corpus, tol);
    results.insert(Axiom::B, outcome);

    AxiomReport {
        op: op.name.clone(),
        algebra: alg.clone(),
        results,
        effect_violations,
    }
}

fn check_axiom_b(op: &BinOpSpec, alg: &FdAlgebra, corpus: &AxiomCorpus, tol: &ToleranceConfig) -> AxiomOutcome {
    let n = corpus.effects.len().min(B_TRIALS);
    let mut first_failure: Option<AxiomOutcome> = None;
    let loose = tol.with_eps_rel(tol.snap_eps);
    for (i, p) in corpus.effects.iter().take(n).enumerate() {
        let f = match op.linearize(p, tol) {
            Ok(f) => f,
            Err(e) => {
                return AxiomOutcome::fail(
                    i + 1,
                    AxiomWitness {
                        message: format!("evaluation failed: {e}"),
                        elements: vec![("p".into(), p.clone())],
                    },
                )
            }
        };
        // linearity in q on the zero effect and a few corpus effects
        let probes = std::iter::once(alg.zero()).chain(corpus.qs.iter().take(3).cloned());
        for q in probes {
            match op.eval(p, &q, tol) {
                Ok(r) if r.approx_eq(&f.apply(&q), &loose) => {}
                _ => return AxiomOutcome::not_applicable("operation is not linear in its second argument"),
            }
        }
        if first_failure.is_some() {
            continue;
        }
        match purity_report(&f, tol) {
            Ok(rep) if rep.is_pure() => {}
            Ok(rep) => {
                first_failure = Some(AxiomOutcome::fail(
                    i + 1,
                    AxiomWitness {
                        message: format!(
                            "q -> p*q is not pure: bracket unital={}, bijective={} (smallest singular value {:.3e}), inverse CP={}",
                            rep.unital, rep.bijective, rep.min_singular_value, rep.inverse_cp
                        ),
                        elements: vec![("p".into(), p.clone())],
                    },
                ))
            }
            Err(e) => {
                first_failure = Some(AxiomOutcome::fail(
                    i + 1,
                    AxiomWitness {
                        message: format!("purity check failed: {e}"),
                        elements: vec![("p".into(), p.clone())],
                    },
                ))
            }
        }
    }
    first_failure.unwrap_or_else(|| AxiomOutcome::pass(n))
}

/// Outcome of the split test for a unital map `F : 𝒜 ⊕ 𝒜 → 𝒜` with `F(a, a) = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct TomiyamaSplit {
    /// `p = F(1, 0)`.
    pub p: Element,
    pub central: bool,
    /// `F(a, b) = ap + bp⊥` on every basis pair.
    pub split_holds: bool,
}

/// For a positive unital `F : 𝒜 ⊕ 𝒜 → 𝒜` restricting to the identity on the
/// diagonal, computes `p = F(1, 0)` and checks that it is central and that
/// `F(a, b) = ap + bp⊥`.
pub fn tomiyama_split(f: &LinMap, tol: &ToleranceConfig) -> Result<TomiyamaSplit> {
    let alg = f.cod().clone();
    let doubled = FdAlgebra::direct_sum(&[alg.clone(), alg.clone()]);
    f.dom().check_same(&doubled)?;
    if !f.is_unital(tol) || !f.is_positive_map(200, 0, tol).is_positive() {
        return Err(Error::MapNotPositive);
    }
    let pair = |a: &Element, b: &Element| Element::direct_sum(&[a.clone(), b.clone()]);
    for a in alg.basis() {
        if !f.apply(&pair(&a, &a)).approx_eq(&a, tol) {
            return Err(Error::ShapeMismatch("F(a, a) != a on the diagonal".into()));
        }
    }
    let p = f.apply(&pair(&alg.unit(), &alg.zero()));
    let central = p.is_central(tol);
    let pp = p.perp();
    let split_holds = alg.basis().iter().all(|a| {
        let zero = alg.zero();
        f.apply(&pair(a, &zero)).approx_eq(&(a * &p), tol) && f.apply(&pair(&zero, a)).approx_eq(&(a * &pp), tol)
    });
    Ok(TomiyamaSplit {
        p,
        central,
        split_holds,
    })
}

/// Conjugation by `u√p`: the pure map `q ↦ √p u* q u √p`.
pub fn twisted_filter(p: &Element, u: &Element, tol: &ToleranceConfig) -> Result<LinMap> {
    let root = spectral::sqrt(p, tol)?;
    Ok(LinMap::conjugation_by(&(u * &root)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn corner_examples() {
        let t = tol();
        let m3 = FdAlgebra::matrix(3);
        let ctx = corner_algebra(&m3.unit(), &t).unwrap();
        assert_eq!(ctx.corner, m3);
        assert!(ctx.embed.approx_eq(&LinMap::identity(&m3), &t));
        let ctx = corner_algebra(&Element::diag(&[1.0, 1.0, 0.0]), &t).unwrap();
        assert_eq!(ctx.corner, FdAlgebra::matrix(2));
        let e = Element::direct_sum(&[Element::diag(&[1.0, 0.0]), FdAlgebra::matrix(3).unit()]);
        let ctx = corner_algebra(&e, &t).unwrap();
        assert_eq!(ctx.corner.dims(), &[1, 3]);
        assert!(corner_algebra(&Element::diag(&[0.5]), &t).is_err());
    }

    #[test]
    fn corner_invariants() {
        let t = tol();
        let mut rng = random::rng(1);
        let alg = FdAlgebra::new(vec![3, 2]).unwrap();
        for _ in 0..10 {
            let e = random::projection(&mut rng, &alg);
            let ctx = corner_algebra(&e, &t).unwrap();
            assert!(ctx
                .compress
                .compose(&ctx.embed)
                .approx_eq(&LinMap::identity(&ctx.corner), &t));
            assert!(ctx
                .embed
                .compose(&ctx.compress)
                .approx_eq(&LinMap::conjugation_by(&e), &t));
            assert!(ctx.embed.is_multiplicative(&t) && ctx.embed.is_involutive(&t));
            assert!(ctx.compress.is_completely_positive(&t) && ctx.compress.is_unital(&t));
        }
    }

    #[test]
    fn filter_and_corner_examples() {
        let t = tol();
        let m2 = FdAlgebra::matrix(2);
        assert!(standard_filter(&m2.unit(), &t)
            .unwrap()
            .approx_eq(&LinMap::identity(&m2), &t));
        assert!(standard_corner(&m2.unit(), &t)
            .unwrap()
            .approx_eq(&LinMap::identity(&m2), &t));
        let c = standard_filter(&Element::diag(&[0.5, 0.0]), &t).unwrap();
        assert_eq!(c.dom(), &FdAlgebra::complex());
        assert!(c
            .apply(&Element::diag(&[2.0]))
            .approx_eq(&Element::diag(&[1.0, 0.0]), &t));
        let mut rng = random::rng(2);
        let p = random::projection_of_rank(&mut rng, &FdAlgebra::matrix(3), 2);
        let cp = standard_filter(&p, &t).unwrap();
        assert!(cp.is_multiplicative(&t));
        let q = random::effect(&mut rng, &FdAlgebra::matrix(3));
        let f = standard_filter(&q, &t).unwrap();
        assert!(f.is_completely_positive(&t));
        assert!(f.apply(&f.dom().unit()).approx_eq(&q, &t));
    }

    #[test]
    fn filter_factorisation() {
        let t = tol();
        let mut rng = random::rng(3);
        let m3 = FdAlgebra::matrix(3);
        let p = random::low_rank_positive(&mut rng, &m3, 2);
        let d = spectral::sqrt(&p, &t).unwrap();
        let cp = standard_filter(&p, &t).unwrap();
        let g = factor_through_filter(&cp, &d, &t).unwrap();
        assert!(g.approx_eq(&LinMap::identity(g.dom()), &t.with_eps_rel(1e-7)));
        let half = factor_through_filter(&cp.scale_real(0.5), &d, &t).unwrap();
        assert!(half.approx_eq(&LinMap::identity(g.dom()).scale_real(0.5), &t.with_eps_rel(1e-7)));
        let src = FdAlgebra::new(vec![2, 1]).unwrap();
        let g0 = random::cpsu_map(&mut rng, &src, cp.dom(), 2, 0.9);
        let f = cp.compose(&g0);
        let g = factor_through_filter(&f, &d, &t).unwrap();
        assert!(g.approx_eq(&g0, &t.with_eps_rel(1e-7)));
        assert!(g.is_completely_positive(&t));
        assert_eq!(
            factor_through_filter(&cp.scale_real(2.0), &d, &t),
            Err(Error::FilterBoundViolated)
        );
    }

    #[test]
    fn filter_composition_is_a_filter() {
        let t = tol();
        let mut rng = random::rng(4);
        let m2 = FdAlgebra::matrix(2);
        let p = random::effect_in_range(&mut rng, &m2, 0.2, 0.9);
        let q = random::effect_in_range(&mut rng, &m2, 0.2, 0.9);
        let comp = standard_filter(&p, &t)
            .unwrap()
            .compose(&standard_filter(&q, &t).unwrap());
        let one = comp.apply(&m2.unit());
        let d = spectral::sqrt(&one, &t).unwrap();
        let g = factor_through_filter(&comp, &d, &t).unwrap();
        assert!(g.inverse(&t).is_some());
    }

    #[test]
    fn corner_factorisation() {
        let t = tol();
        let mut rng = random::rng(5);
        let m3 = FdAlgebra::matrix(3);
        let e = random::projection_of_rank(&mut rng, &m3, 2);
        let ctx = corner_algebra(&e, &t).unwrap();
        let g = factor_through_corner(&ctx.compress, &e, &t).unwrap();
        assert!(g.approx_eq(&LinMap::identity(&ctx.corner), &t));
        let g0 = random::cp_map(&mut rng, &ctx.corner, &FdAlgebra::new(vec![2, 1]).unwrap(), 1);
        let f = g0.compose(&ctx.compress);
        assert!(factor_through_corner(&f, &e, &t).unwrap().approx_eq(&g0, &t));
        let full = random::cpu_map(&mut rng, &m3, &m3, 1);
        assert!(matches!(
            factor_through_corner(&full, &e, &t),
            Err(Error::CarrierViolated(_))
        ));
    }

    #[test]
    fn bracket_and_purity_examples() {
        let t = tol();
        let mut rng = random::rng(6);
        let m3 = FdAlgebra::matrix(3);
        let a = &random::low_rank_positive(&mut rng, &m3, 2) * &random::element(&mut rng, &m3);
        let f = LinMap::conjugation_by(&a);
        assert!(is_pure(&f, &t).unwrap());
        let avg = LinMap::from_fn(&FdAlgebra::classical(2), &FdAlgebra::complex(), |x| {
            FdAlgebra::complex().scalar((x.block(0)[(0, 0)] + x.block(1)[(0, 0)]) * 0.5)
        });
        let rep = purity_report(&avg, &t).unwrap();
        assert!(rep.unital && !rep.bijective && !rep.is_pure());
        assert!(is_pure(&LinMap::identity(&m3), &t).unwrap());
    }

    #[test]
    fn bracket_triangle_commutes() {
        let t = tol();
        let mut rng = random::rng(7);
        let m3 = FdAlgebra::matrix(3);
        let f = random::cp_map(&mut rng, &m3, &m3, 1);
        let f = f.compose(&LinMap::conjugation_by(&random::projection_of_rank(&mut rng, &m3, 2)));
        let b = bracket(&f, &t).unwrap();
        let one = f.apply(&m3.unit());
        let rebuilt = standard_filter(&one, &t)
            .unwrap()
            .compose(&b)
            .compose(&standard_corner(&f.carrier(&t).unwrap(), &t).unwrap());
        assert!(rebuilt.approx_eq(&f, &t.with_eps_rel(1e-7)));
        assert!(b.is_unital(&t));
    }

    #[test]
    fn chevron_is_faithful_with_same_unit_value() {
        let t = tol();
        let mut rng = random::rng(8);
        let m3 = FdAlgebra::matrix(3);
        let e = random::projection_of_rank(&mut rng, &m3, 2);
        let f = LinMap::conjugation_by(&e).compose(&random::cp_map(&mut rng, &m3, &m3, 1));
        let ch = chevron(&f, &t).unwrap();
        assert!(ch.carrier(&t).unwrap().approx_eq(&ch.dom().unit(), &t));
        let one = f.apply(&m3.unit());
        let q = projections::ceiling(&one, &t).unwrap();
        let ctx = corner_algebra(&q, &t).unwrap();
        assert!(ch.apply(&ch.dom().unit()).approx_eq(&ctx.compress.apply(&one), &t));
        assert_eq!(
            chevron(&LinMap::block_projection(&FdAlgebra::new(vec![1, 1]).unwrap(), 0), &t),
            Err(Error::NotAnEndomorphism)
        );
    }

    #[test]
    fn diamond_predicates() {
        let t = tol();
        let mut rng = random::rng(9);
        let m2 = FdAlgebra::matrix(2);
        let a = random::self_adjoint(&mut rng, &m2);
        let f = LinMap::conjugation_by(&a);
        assert!(is_diamond_self_adjoint(&f, &t).unwrap());
        let p = random::positive(&mut rng, &m2);
        let g = LinMap::conjugation_by(&spectral::sqrt(&p, &t).unwrap());
        assert!(is_diamond_positive(&g, &t).unwrap());
        assert!(is_diamond_self_adjoint(&g, &t).unwrap());
        // √p u*(·)u √p with p = diag(1, 1/4) and a Hadamard u
        let p = Element::diag(&[1.0, 0.25]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = Element::real_matrix(2, &[h, h, h, -h]);
        let tw = twisted_filter(&p, &u, &t).unwrap();
        assert!(is_pure(&tw, &t).unwrap());
        assert!(tw.apply(&m2.unit()).approx_eq(&p, &t));
        assert!(!is_diamond_positive(&tw, &t).unwrap());
    }

    #[test]
    fn diamond_self_adjoint_carrier_is_ceiling_of_unit() {
        let t = tol();
        let mut rng = random::rng(10);
        let m3 = FdAlgebra::matrix(3);
        let a = random::low_rank_positive(&mut rng, &m3, 2).real_part();
        let f = LinMap::conjugation_by(&a);
        assert!(is_diamond_self_adjoint(&f, &t).unwrap());
        let cu = projections::ceiling(&f.apply(&m3.unit()), &t).unwrap();
        assert!(f.carrier(&t).unwrap().approx_eq(&cu, &t));
    }

    #[test]
    fn seq_product_examples() {
        let t = tol();
        let p = Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
        let m2 = FdAlgebra::matrix(2);
        assert!(seq_product(&p, &m2.unit(), &t).unwrap().approx_eq(&p, &t));
        let r = seq_product(&Element::diag(&[0.5, 1.0]), &Element::diag(&[1.0, 0.5]), &t).unwrap();
        assert!(r.approx_eq(&Element::diag(&[0.5, 0.5]), &t));
        // p is a projection, so √p = p and p q p = ¼(1 1;1 1)
        let r = seq_product(&p, &Element::diag(&[1.0, 0.0]), &t).unwrap();
        assert!(r.approx_eq(&Element::real_matrix(2, &[0.25, 0.25, 0.25, 0.25]), &t));
        assert_eq!(seq_product(&Element::diag(&[2.0, 0.0]), &p, &t), Err(Error::NotEffect));
    }

    #[test]
    fn linearisation_matches_standard_product() {
        let t = tol();
        let mut rng = random::rng(11);
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        let p = random::effect(&mut rng, &alg);
        let f = BinOpSpec::standard().linearize(&p, &t).unwrap();
        let root = spectral::sqrt(&p, &t).unwrap();
        assert!(f.approx_eq(&LinMap::conjugation_by(&root), &t));
    }

    #[test]
    fn standard_product_passes_all_axioms() {
        let t = tol().with_eps_rel(1e-8);
        for dims in [vec![2], vec![2, 1]] {
            let alg = FdAlgebra::new(dims).unwrap();
            let rep = check_axioms(&BinOpSpec::standard(), &alg, 20, 1, &t);
            assert!(rep.failed().is_empty(), "{rep:?}");
            assert_eq!(rep.effect_violations, 0);
        }
    }

    #[test]
    fn counterexamples_fail_their_axiom() {
        let t = tol().with_eps_rel(1e-8);
        let alg = FdAlgebra::new(vec![2, 1]).unwrap();
        for op in counterexample_ops() {
            let rep = check_axioms(&op, &alg, 20, 2, &t);
            assert_eq!(rep.failed(), vec![op.target.unwrap()], "{}: {rep:?}", op.name);
        }
    }

    #[test]
    fn ceil_fails_a_at_half_zero() {
        let t = tol();
        let rep = check_axioms(&BinOpSpec::builtin(OpKind::Ceil), &FdAlgebra::matrix(2), 10, 7, &t);
        let w = rep.results[&Axiom::A].witness.clone().unwrap();
        assert!(w.elements[0].1.approx_eq(&Element::diag(&[0.5, 0.0]), &t));
    }

    #[test]
    fn nonlinear_operation_is_not_applicable_for_b() {
        let t = tol();
        let op = BinOpSpec::custom("square", |p, q, _| Ok(&(q * q) * p), None);
        let rep = check_axioms(&op, &FdAlgebra::matrix(2), 5, 0, &t);
        assert_eq!(rep.status(Axiom::B), AxiomStatus::NotApplicable);
        assert_eq!(rep.status(Axiom::D), AxiomStatus::NotApplicable);
    }

    #[test]
    fn tomiyama_split_on_generated_maps() {
        let t = tol();
        let mut rng = random::rng(12);
        for alg in [
            FdAlgebra::classical(3),
            FdAlgebra::matrix(2),
            FdAlgebra::new(vec![2, 1]).unwrap(),
        ] {
            // p central: block-scalar effect
            let weights: Vec<f64> = (0..alg.num_blocks())
                .map(|_| rand::Rng::random::<f64>(&mut rng))
                .collect();
            let p = alg.unit().map_blocks(|b, m| m * c(weights[b]));
            let doubled = FdAlgebra::direct_sum(&[alg.clone(), alg.clone()]);
            let k = alg.num_blocks();
            let f = LinMap::from_fn(&doubled, &alg, |x| {
                let a = Element::new(alg.clone(), x.blocks()[..k].to_vec()).unwrap();
                let b = Element::new(alg.clone(), x.blocks()[k..].to_vec()).unwrap();
                &(&a * &p) + &(&b * &p.perp())
            });
            let split = tomiyama_split(&f, &t).unwrap();
            assert!(split.central && split.split_holds);
            assert!(split.p.approx_eq(&p, &t));
        }
        // a non-central p breaks F(a, a) = a
        let m2 = FdAlgebra::matrix(2);
        let p = Element::diag(&[1.0, 0.0]);
        let doubled = FdAlgebra::direct_sum(&[m2.clone(), m2.clone()]);
        let f = LinMap::from_fn(&doubled, &m2, |x| {
            let a = Element::new(m2.clone(), vec![x.block(0).clone()]).unwrap();
            let b = Element::new(m2.clone(), vec![x.block(1).clone()]).unwrap();
            &(&(&p * &a) * &p) + &(&(&p.perp() * &b) * &p.perp())
        });
        assert!(tomiyama_split(&f, &t).is_err());
    }
}
