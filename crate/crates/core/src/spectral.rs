//! Spectra, continuous functional calculus, and the square root, absolute value
//! and positive/negative parts built on it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix};
use crate::tolerance::ToleranceConfig;

/// Block eigenvalues with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub per_block: Vec<Vec<Complex64>>,
}

impl Spectrum {
    /// Distinct values after merging those within `gap` of each other.
    pub fn distinct(&self, gap: f64) -> Vec<Complex64> {
        linalg::cluster_complex(&self.values, gap)
            .into_iter()
            .map(|g| g.iter().map(|&i| self.values[i]).sum::<Complex64>() / c(g.len() as f64))
            .collect()
    }
}

/// Spectrum of `a`; invertibility in a direct sum is blockwise, so this is the
/// union of the block eigenvalue multisets. Self-adjoint blocks go through the
/// Hermitian solver and yield exactly real values.
pub fn spectrum(a: &Element) -> Spectrum {
    let tol = ToleranceConfig::default();
    let per_block: Vec<Vec<Complex64>> = a
        .blocks()
        .iter()
        .map(|m| {
            let scale = linalg::spectral_norm(m).max(1.0);
            if linalg::spectral_norm(&(m - m.adjoint())) <= tol.at_scale(scale) {
                linalg::hermitian_eigen(m).0.into_iter().map(c).collect()
            } else {
                linalg::general_eigenvalues(m)
            }
        })
        .collect();
    Spectrum {
        values: per_block.iter().flatten().cloned().collect(),
        per_block,
    }
}

pub fn spectral_radius(a: &Element) -> f64 {
    spectrum(a).values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unitary diagonalisation of a normal block: `(eigenvalues, eigenvectors)`.
fn normal_eigen(m: &Matrix, hermitian: bool) -> (Vec<Complex64>, Matrix) {
    if hermitian {
        let (vals, vecs) = linalg::hermitian_eigen(m);
        (vals.into_iter().map(c).collect(), vecs)
    } else {
        // the Schur form of a normal matrix is diagonal
        let (q, t) = linalg::schur(m);
        ((0..m.nrows()).map(|i| t[(i, i)]).collect(), q)
    }
}

/// `f(a)` for normal `a`: per block, diagonalise unitarily, merge eigenvalues
/// closer than `snap_eps·max(1, ‖a‖)`, and apply `f` to each cluster.
///
/// `f` returns `None` where it is undefined.
pub fn functional_calculus(
    a: &Element,
    f: impl Fn(Complex64) -> Option<Complex64>,
    tol: &ToleranceConfig,
) -> Result<Element> {
    if !a.is_normal(tol) {
        return Err(Error::NotNormal);
    }
    let hermitian = a.is_self_adjoint(tol);
    let gap = tol.snap_eps * a.norm().max(1.0);
    let mut blocks = Vec::with_capacity(a.blocks().len());
    for m in a.blocks() {
        let n = m.nrows();
        let (vals, vecs) = normal_eigen(m, hermitian);
        let mut out = Matrix::zeros(n, n);
        for group in linalg::cluster_complex(&vals, gap) {
            let mean = group.iter().map(|&i| vals[i]).sum::<Complex64>() / c(group.len() as f64);
            let fz = f(mean).ok_or(Error::FunctionUndefined {
                re: mean.re,
                im: mean.im,
            })?;
            out += linalg::column_projector(&vecs, &group) * fz;
        }
        blocks.push(out);
    }
    Element::new(a.algebra().clone(), blocks)
}

/// Named scalar functions accepted by the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedFunction {
    Sqrt,
    Abs,
    PosPart,
    NegPart,
    /// `λ ↦ λ^α` on `λ ≥ 0`.
    Pow(f64),
    /// `λ ↦ λ^i = exp(i ln λ)` for `λ > 0`, and `0 ↦ 1`.
    ExpPhase,
}

impl NamedFunction {
    /// Evaluates at `z`. Real inputs within `zero_tol` of 0 count as 0, so the
    /// root, powers and phase vanish or reset on numerically null eigenvalues.
    pub fn eval(&self, z: Complex64, zero_tol: f64) -> Option<Complex64> {
        let real = |z: Complex64| (z.im.abs() <= zero_tol).then_some(z.re);
        let nonneg = |z: Complex64| real(z).and_then(|x| if x >= -zero_tol { Some(x.max(0.0)) } else { None });
        match self {
            NamedFunction::Sqrt => nonneg(z).map(|x| if x <= zero_tol { c(0.0) } else { c(x.sqrt()) }),
            NamedFunction::Abs => Some(c(z.norm())),
            NamedFunction::PosPart => real(z).map(|x| c(x.max(0.0))),
            NamedFunction::NegPart => real(z).map(|x| c((-x).max(0.0))),
            NamedFunction::Pow(alpha) => nonneg(z).map(|x| {
                if x <= zero_tol && *alpha > 0.0 {
                    c(0.0)
                } else {
                    c(x.powf(*alpha))
                }
            }),
            NamedFunction::ExpPhase => nonneg(z).map(|x| {
                if x <= zero_tol {
                    c(1.0)
                } else {
                    Complex64::from_polar(1.0, x.ln())
                }
            }),
        }
    }

    pub fn apply(&self, a: &Element, tol: &ToleranceConfig) -> Result<Element> {
        let zero_tol = tol.snap_eps * a.norm().max(1.0);
        functional_calculus(a, |z| self.eval(z, zero_tol), tol)
    }
}

impl FromStr for NamedFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(NamedFunction::Sqrt),
            "abs" => Ok(NamedFunction::Abs),
            "pospart" => Ok(NamedFunction::PosPart),
            "negpart" => Ok(NamedFunction::NegPart),
            "exp-phase" => Ok(NamedFunction::ExpPhase),
            _ => match s.strip_prefix("pow:") {
                Some(alpha) => alpha
                    .parse::<f64>()
                    .map(NamedFunction::Pow)
                    .map_err(|e| Error::Parse(format!("bad exponent in {s:?}: {e}"))),
                None => Err(Error::Parse(format!("unknown function {s:?}"))),
            },
        }
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFunction::Sqrt => write!(f, "sqrt"),
            NamedFunction::Abs => write!(f, "abs"),
            NamedFunction::PosPart => write!(f, "pospart"),
            NamedFunction::NegPart => write!(f, "negpart"),
            NamedFunction::Pow(a) => write!(f, "pow:{a}"),
            NamedFunction::ExpPhase => write!(f, "exp-phase"),
        }
    }
}

/// The unique positive square root of a positive element.
pub fn sqrt(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_positive(tol)?;
    Ok(NamedFunction::Sqrt.apply(&a.real_part(), tol)?.real_part())
}

/// `a^α` for positive `a` and `α > 0`.
pub fn power(a: &Element, alpha: f64, tol: &ToleranceConfig) -> Result<Element> {
    a.require_positive(tol)?;
    Ok(NamedFunction::Pow(alpha).apply(&a.real_part(), tol)?.real_part())
}

/// `|a| = √(a²)` for self-adjoint `a`.
pub fn abs(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_self_adjoint(tol)?;
    Ok(NamedFunction::Abs.apply(&a.real_part(), tol)?.real_part())
}

/// `a₊ = ½(|a| + a)`.
pub fn pos_part(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_self_adjoint(tol)?;
    Ok(NamedFunction::PosPart.apply(&a.real_part(), tol)?.real_part())
}

/// `a₋ = ½(|a| − a)`.
pub fn neg_part(a: &Element, tol: &ToleranceConfig) -> Result<Element> {
    a.require_self_adjoint(tol)?;
    Ok(NamedFunction::NegPart.apply(&a.real_part(), tol)?.real_part())
}
