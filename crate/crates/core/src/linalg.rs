//! Dense complex matrix kernels shared by the algebra modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    hermitian_eigen(&gram).0.last().cloned().unwrap_or(0.0).max(0.0).sqrt()
}

pub fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a general square matrix from the complex Schur form.
pub fn general_eigenvalues(m: &Matrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = m.clone().schur().unpack();
    (0..m.nrows()).map(|i| t[(i, i)]).collect()
}

/// Unitary `q` and upper-triangular `t` with `m = q t q*`.
pub fn schur(m: &Matrix) -> (Matrix, Matrix) {
    if m.nrows() == 0 {
        return (Matrix::zeros(0, 0), Matrix::zeros(0, 0));
    }
    m.clone().schur().unpack()
}

/// Thin SVD `m = u diag(s) v*`, with all min(rows, cols) triples and `s`
/// descending.
///
/// Computed from the Hermitian eigendecomposition of the dilation
/// `[[0, m], [m*, 0]]`, whose positive eigenpairs are `(σ, (u; v)/√2)`.
/// (The complex bidiagonal SVD in nalgebra 0.35 loses accuracy on
/// rank-deficient inputs.) Singular values below roundoff are reported as 0,
/// with the corresponding vectors completing orthonormal bases.
pub fn svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let (r, cdim) = (m.nrows(), m.ncols());
    let k = r.min(cdim);
    if k == 0 {
        return (Matrix::zeros(r, 0), Vec::new(), Matrix::zeros(cdim, 0));
    }
    let mut dil = Matrix::zeros(r + cdim, r + cdim);
    dil.view_mut((0, r), (r, cdim)).copy_from(m);
    dil.view_mut((r, 0), (cdim, r)).copy_from(&m.adjoint());
    let (vals, vecs) = hermitian_eigen(&dil);
    let top = vals.last().cloned().unwrap_or(0.0).max(0.0);
    let floor = 64.0 * f64::EPSILON * top * (r + cdim) as f64;
    let root2 = std::f64::consts::SQRT_2;
    let mut us: Vec<Vector> = Vec::with_capacity(k);
    let mut vs: Vec<Vector> = Vec::with_capacity(k);
    let mut s: Vec<f64> = Vec::with_capacity(k);
    for i in (0..vals.len()).rev() {
        if s.len() == k || vals[i] <= floor {
            break;
        }
        let x = vecs.column(i);
        let y: Vector = x.rows(0, r).into_owned();
        let z: Vector = x.rows(r, cdim).into_owned();
        let (ny, nz) = (y.norm(), z.norm());
        if ny * root2 < 0.5 || nz * root2 < 0.5 {
            break;
        }
        us.push(y / c(ny));
        vs.push(z / c(nz));
        s.push(vals[i]);
    }
    let complete = |found: &[Vector], n: usize| -> Vec<Vector> {
        let mut all: Vec<Vector> = found.to_vec();
        for j in 0..n {
            let mut e = Vector::zeros(n);
            e[j] = ONE;
            all.push(e);
        }
        orthonormalize(&all, 1e-8)
    };
    let us = complete(&us, r);
    let vs = complete(&vs, cdim);
    s.resize(k, 0.0);
    let u = Matrix::from_fn(r, k, |i, j| us[j][i]);
    let v = Matrix::from_fn(cdim, k, |i, j| vs[j][i]);
    (u, s, v)
}

/// Orthonormal basis (columns) of the null space of `m`, using singular values
/// below `thresh`.
pub fn null_space(m: &Matrix, thresh: f64) -> Matrix {
    let n = m.ncols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    // pad to a square-or-tall shape so that the SVD yields a full right basis
    let rows = m.nrows().max(n);
    let mut padded = Matrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let (_, s, v) = svd(&padded);
    let keep: Vec<usize> = (0..n).filter(|&i| s[i] <= thresh).collect();
    let mut out = Matrix::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &v.column(i));
    }
    out
}

/// Modified Gram–Schmidt with one reorthogonalisation pass; vectors whose
/// residual norm falls below `thresh` (relative to their original norm and 1)
/// are discarded.
pub fn orthonormalize(vectors: &[Vector], thresh: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let scale = v.norm().max(1.0);
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let nrm = w.norm();
        if nrm > thresh * scale {
            basis.push(w / c(nrm));
        }
    }
    basis
}

/// Moore–Penrose pseudoinverse, discarding singular values `<= cutoff`.
pub fn pinv(m: &Matrix, cutoff: f64) -> Matrix {
    let (u, s, v) = svd(m);
    let mut out = Matrix::zeros(m.ncols(), m.nrows());
    for (i, &sv) in s.iter().enumerate() {
        if sv > cutoff {
            out += v.column(i) * u.column(i).adjoint() * c(1.0 / sv);
        }
    }
    out
}

/// Group sorted-or-unsorted values into clusters whose members chain within `gap`.
pub fn cluster_complex(values: &[Complex64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= gap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Projection `v v*` onto the span of the selected orthonormal columns.
pub fn column_projector(v: &Matrix, cols: &[usize]) -> Matrix {
    let n = v.nrows();
    let mut p = Matrix::zeros(n, n);
    for &j in cols {
        let col = v.column(j);
        p += col * col.adjoint();
    }
    hermitian_part(&p)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}
