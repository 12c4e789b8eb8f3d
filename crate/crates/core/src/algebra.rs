//! Finite direct sums of full complex matrix algebras and their elements.
//!
//! An [`FdAlgebra`] is `M_{n_1} ⊕ … ⊕ M_{n_K}`, identified by its ordered block
//! sizes. The empty list is the trivial algebra `{0}`. Elements carry one dense
//! matrix per block; all arithmetic is blockwise.
//!
//! The canonical matrix-unit basis is enumerated block-major, then row-major
//! within a block; [`Element::coords`] uses the same order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, Matrix, Vector, ONE};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FdAlgebra {
    dims: Vec<usize>,
}

impl FdAlgebra {
    /// Builds `⊕ M_{n_i}`; every block size must be at least 1.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidDims(dims.iter().map(|&n| n as i64).collect()));
        }
        Ok(FdAlgebra { dims })
    }

    /// Accepts signed sizes, e.g. from user input, rejecting non-positive entries.
    pub fn from_signed(dims: &[i64]) -> Result<Self> {
        if dims.iter().any(|&n| n <= 0) {
            return Err(Error::InvalidDims(dims.to_vec()));
        }
        Ok(FdAlgebra {
            dims: dims.iter().map(|&n| n as usize).collect(),
        })
    }

    pub fn matrix(n: usize) -> Self {
        FdAlgebra::new(vec![n]).expect("matrix algebra size must be positive")
    }

    /// The scalars `ℂ`.
    pub fn complex() -> Self {
        FdAlgebra { dims: vec![1] }
    }

    /// `ℓ∞(k) = ℂ^k`.
    pub fn classical(k: usize) -> Self {
        FdAlgebra { dims: vec![1; k] }
    }

    /// The zero algebra `{0}`.
    pub fn trivial() -> Self {
        FdAlgebra { dims: Vec::new() }
    }

    pub fn direct_sum(parts: &[FdAlgebra]) -> Self {
        FdAlgebra {
            dims: parts.iter().flat_map(|p| p.dims.iter().cloned()).collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    /// Linear dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_commutative(&self) -> bool {
        self.dims.iter().all(|&n| n == 1)
    }

    /// Coordinate offset of block `b` in the canonical basis.
    pub fn block_offset(&self, b: usize) -> usize {
        self.dims[..b].iter().map(|n| n * n).sum()
    }

    /// Canonical index of the matrix unit `E_{row,col}` in block `b`.
    pub fn basis_index(&self, b: usize, row: usize, col: usize) -> usize {
        self.block_offset(b) + row * self.dims[b] + col
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn basis_location(&self, mut idx: usize) -> (usize, usize, usize) {
        for (b, &n) in self.dims.iter().enumerate() {
            if idx < n * n {
                return (b, idx / n, idx % n);
            }
            idx -= n * n;
        }
        panic!("basis index out of range");
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.dims.iter().map(|&n| Matrix::zeros(n, n)).collect(),
        }
    }

    pub fn unit(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.dims.iter().map(|&n| Matrix::identity(n, n)).collect(),
        }
    }

    pub fn scalar(&self, z: Complex64) -> Element {
        self.unit().scale(z)
    }

    pub fn basis_element(&self, idx: usize) -> Element {
        let (b, r, col) = self.basis_location(idx);
        let mut e = self.zero();
        e.blocks[b][(r, col)] = ONE;
        e
    }

    pub fn basis(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// Element which is `m` in block `b` and zero elsewhere.
    pub fn embed_block(&self, b: usize, m: Matrix) -> Result<Element> {
        let n = self.dims[b];
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "block {b} expects {n}x{n}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut e = self.zero();
        e.blocks[b] = m;
        Ok(e)
    }

    /// Minimal central projection of block `b`.
    pub fn block_unit(&self, b: usize) -> Element {
        self.embed_block(b, Matrix::identity(self.dims[b], self.dims[b]))
            .expect("identity has the right shape")
    }

    pub(crate) fn check_same(&self, other: &FdAlgebra) -> Result<()> {
        if self != other {
            return Err(Error::AlgebraMismatch {
                expected: self.dims.clone(),
                found: other.dims.clone(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims.is_empty() {
            return write!(f, "{{0}}");
        }
        let parts: Vec<String> = self.dims.iter().map(|n| format!("M{n}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// Builds an algebra from block sizes, rejecting zero sizes.
pub fn make_algebra(dims: &[usize]) -> Result<FdAlgebra> {
    FdAlgebra::new(dims.to_vec())
}

/// A member of an [`FdAlgebra`]: one dense square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: FdAlgebra,
    blocks: Vec<Matrix>,
}

impl Element {
    pub fn new(algebra: FdAlgebra, blocks: Vec<Matrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for an algebra with {} blocks",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (b, (m, &n)) in blocks.iter().zip(algebra.dims()).enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {b} expects {n}x{n}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Element { algebra, blocks })
    }

    /// Element of `⊕ M_{n_i}` with the algebra inferred from square blocks.
    pub fn from_blocks(blocks: Vec<Matrix>) -> Result<Self> {
        let dims = blocks.iter().map(|m| m.nrows()).collect();
        Element::new(FdAlgebra::new(dims)?, blocks)
    }

    /// Single-block element from a row-major list of real entries.
    pub fn real_matrix(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "expected n*n entries");
        let m = Matrix::from_row_slice(n, n, &rows.iter().map(|&x| c(x)).collect::<Vec<_>>());
        Element::from_blocks(vec![m]).expect("square block")
    }

    /// Diagonal element of a single `M_n` block.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        Element::from_blocks(vec![m]).expect("square block")
    }

    /// Concatenates elements into an element of the direct sum of their algebras.
    pub fn direct_sum(parts: &[Element]) -> Self {
        let blocks = parts.iter().flat_map(|p| p.blocks.iter().cloned()).collect();
        let alg = FdAlgebra::direct_sum(&parts.iter().map(|p| p.algebra.clone()).collect::<Vec<_>>());
        Element { algebra: alg, blocks }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &Matrix {
        &self.blocks[b]
    }

    pub fn into_blocks(self) -> Vec<Matrix> {
        self.blocks
    }

    /// Coordinates in the canonical matrix-unit basis.
    pub fn coords(&self) -> Vector {
        let mut v = Vector::zeros(self.algebra.dim());
        let mut k = 0;
        for m in &self.blocks {
            let n = m.nrows();
            for r in 0..n {
                for col in 0..n {
                    v[k] = m[(r, col)];
                    k += 1;
                }
            }
        }
        v
    }

    pub fn from_coords(algebra: &FdAlgebra, v: &Vector) -> Result<Self> {
        if v.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                v.len(),
                algebra.dim()
            )));
        }
        let mut k = 0;
        let blocks = algebra
            .dims()
            .iter()
            .map(|&n| {
                let m = Matrix::from_fn(n, n, |r, col| v[k + r * n + col]);
                k += n * n;
                m
            })
            .collect();
        Ok(Element {
            algebra: algebra.clone(),
            blocks,
        })
    }

    pub fn map_blocks(&self, f: impl Fn(usize, &Matrix) -> Matrix) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().enumerate().map(|(b, m)| f(b, m)).collect(),
        }
    }

    fn zip_blocks(&self, other: &Element, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Element {
        assert_eq!(
            self.algebra, other.algebra,
            "algebra mismatch: {} vs {}",
            self.algebra, other.algebra
        );
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.algebra.check_same(&other.algebra)?;
        Ok(self * other)
    }

    pub fn scale(&self, z: Complex64) -> Element {
        self.map_blocks(|_, m| m * z)
    }

    pub fn scale_real(&self, x: f64) -> Element {
        self.scale(c(x))
    }

    pub fn adjoint(&self) -> Element {
        self.map_blocks(|_, m| m.adjoint())
    }

    /// `½(a + a*)`.
    pub fn real_part(&self) -> Element {
        self.map_blocks(|_, m| linalg::hermitian_part(m))
    }

    /// `(a − a*)/2i`.
    pub fn imag_part(&self) -> Element {
        let k = Complex64::new(0.0, -0.5);
        self.map_blocks(|_, m| (m - m.adjoint()) * k)
    }

    /// Orthosupplement `1 − a`.
    pub fn perp(&self) -> Element {
        &self.algebra.unit() - self
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt norm of the coordinate vector.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    /// Unnormalised trace `Σ tr(a_i)`.
    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|m| m.trace()).sum()
    }

    /// `‖a − b‖ ≤ eps_abs + eps_rel·max(‖a‖, ‖b‖)`.
    pub fn approx_eq(&self, other: &Element, tol: &ToleranceConfig) -> bool {
        if self.algebra != other.algebra {
            return false;
        }
        let scale = self.norm().max(other.norm());
        (self - other).norm() <= tol.at_scale(scale)
    }

    pub fn is_zero(&self, tol: &ToleranceConfig) -> bool {
        self.norm() <= tol.eps_abs
    }

    pub fn is_self_adjoint(&self, tol: &ToleranceConfig) -> bool {
        let scale = self.norm().max(1.0);
        self.blocks
            .iter()
            .map(|m| linalg::spectral_norm(&(m - m.adjoint())))
            .fold(0.0, f64::max)
            <= tol.at_scale(scale)
    }

    pub fn is_normal(&self, tol: &ToleranceConfig) -> bool {
        let scale = self.norm().powi(2).max(1.0);
        let comm = &(&self.adjoint() * self) - &(self * &self.adjoint());
        comm.norm() <= tol.at_scale(scale)
    }

    /// Smallest eigenvalue of the Hermitian part over all blocks (`+∞` on `{0}`).
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|m| linalg::hermitian_eigen(m).0.first().cloned())
            .fold(f64::INFINITY, f64::min)
    }

    /// Self-adjoint within tolerance and every block eigenvalue at least
    /// `−eps_rel·max(1, ‖a‖)`.
    pub fn is_positive(&self, tol: &ToleranceConfig) -> bool {
        if !self.is_self_adjoint(tol) {
            return false;
        }
        let scale = self.norm().max(1.0);
        self.min_eigenvalue() >= -tol.eps_rel * scale
    }

    /// `a ≤ b`, i.e. `b − a` is positive.
    pub fn leq(&self, other: &Element, tol: &ToleranceConfig) -> bool {
        (other - self).is_positive(tol)
    }

    /// `0 ≤ a ≤ 1`.
    pub fn is_effect(&self, tol: &ToleranceConfig) -> bool {
        self.is_positive(tol) && self.perp().is_positive(tol)
    }

    /// `p = p* = p²` within tolerance.
    pub fn is_projection(&self, tol: &ToleranceConfig) -> bool {
        if !self.is_self_adjoint(tol) {
            return false;
        }
        let scale = self.norm().max(1.0);
        (&(self * self) - self).norm() <= tol.at_scale(scale)
    }

    pub fn commutes_with(&self, other: &Element, tol: &ToleranceConfig) -> bool {
        let scale = (self.norm() * other.norm()).max(1.0);
        (&(self * other) - &(other * self)).norm() <= tol.at_scale(scale)
    }

    /// Each block is a scalar multiple of the identity.
    pub fn is_central(&self, tol: &ToleranceConfig) -> bool {
        let scale = self.norm().max(1.0);
        self.blocks.iter().all(|m| {
            let n = m.nrows();
            let avg = m.trace() / c(n as f64);
            linalg::spectral_norm(&(m - Matrix::identity(n, n) * avg)) <= tol.at_scale(scale)
        })
    }

    pub(crate) fn require_self_adjoint(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_self_adjoint(tol) {
            Ok(())
        } else {
            Err(Error::NotSelfAdjoint)
        }
    }

    pub(crate) fn require_positive(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_positive(tol) {
            Ok(())
        } else {
            Err(Error::NotPositive)
        }
    }

    pub(crate) fn require_effect(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_effect(tol) {
            Ok(())
        } else {
            Err(Error::NotEffect)
        }
    }

    pub(crate) fn require_projection(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_projection(tol) {
            Ok(())
        } else {
            Err(Error::NotProjection)
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.zip_blocks(rhs, |a, b| a * b)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_blocks(|_, m| -m)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}
