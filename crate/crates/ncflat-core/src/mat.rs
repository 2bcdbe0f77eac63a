//! Dense exact matrices with sparse-aware elimination, plus the two derived
//! structures everything else is built from: row-reduced subspaces and
//! quotients by a span of relations.
//!
//! Conventions, fixed once here and relied on everywhere:
//! - matrices act on coordinate column vectors from the left, so composing
//!   "first `f`, then `g`" is `g.matmul(&f)`;
//! - tensor-product coordinates are row-major: the basis vector `e_i ⊗ e_j`
//!   of `F^a ⊗ F^b` sits at index `i*b + j`, matching [`Mat::kron`] and
//!   [`outer_vec`];
//! - row reduction always picks the first nonzero entry as pivot, so the
//!   reduced form (and with it every subspace basis, coordinate chart, and
//!   quotient chart) is canonical and deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{render_vector, FieldSpec, Scalar};

/// A dense `rows × cols` matrix over one fixed field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from explicit rows; `cols` is passed separately so an empty
    /// list of rows still knows its width.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "row width mismatch");
            data.extend(r);
        }
        Mat { rows: nrows, cols, field, data }
    }

    /// The matrix of a linear map given by the images of the domain basis
    /// vectors: `images[j]` becomes column `j`.
    pub fn from_images(field: FieldSpec, out_dim: usize, images: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zero(field, out_dim, images.len());
        for (j, img) in images.iter().enumerate() {
            assert_eq!(img.len(), out_dim, "image dimension mismatch");
            for (i, v) in img.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    /// Small-integer literal constructor, mostly for tests.
    pub fn from_i64(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> Mat {
        assert_eq!(vals.len(), rows * cols);
        Mat { rows, cols, field, data: vals.iter().map(|v| field.integer(*v)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.at(i, j);
                if !v.is_zero() {
                    t.set(j, i, v.clone());
                }
            }
        }
        t
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Matrix product, skipping zero entries on both sides so that the large
    /// but very sparse structure matrices stay cheap.
    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Mat::zero(self.field, self.rows, rhs.cols);
        let rhs_nz: Vec<Vec<usize>> = (0..rhs.rows)
            .map(|j| (0..rhs.cols).filter(|&k| !rhs.at(j, k).is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for &k in &rhs_nz[j] {
                    let idx = i * rhs.cols + k;
                    let prod = a * rhs.at(j, k);
                    out.data[idx] = &out.data[idx] + &prod;
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "apply shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = &out[i] + &(a * &v[j]);
            }
        }
        out
    }

    /// Kronecker product with row-major index convention:
    /// `(A ⊗ B)[(i1*r2+i2)][(j1*c2+j2)] = A[i1][j1] · B[i2][j2]`.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let (r1, c1, r2, c2) = (self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Mat::zero(self.field, r1 * r2, c1 * c2);
        for i1 in 0..r1 {
            for j1 in 0..c1 {
                let a = self.at(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..r2 {
                    for j2 in 0..c2 {
                        let b = rhs.at(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i1 * r2 + i2, j1 * c2 + j2, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Mat::zero(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.at(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Mat { rows: self.rows + rhs.rows, cols: self.cols, field: self.field, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form. Pivoting is deterministic (first row with a
    /// nonzero entry in the current column), and elimination walks only the
    /// nonzero entries of the pivot row.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.at(r, c).inverse().expect("pivot entry is nonzero");
            for j in c..m.cols {
                let v = m.at(r, j);
                if !v.is_zero() {
                    let scaled = v * &inv;
                    m.set(r, j, scaled);
                }
            }
            let pivot_nz: Vec<usize> = (c..m.cols).filter(|&j| !m.at(r, j).is_zero()).collect();
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let factor = m.at(i, c).clone();
                for &j in &pivot_nz {
                    let v = &*m.at(i, j) - &(&factor * m.at(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical basis of the null space `{x : self · x = 0}`, one basis
    /// vector per row: the free coordinate is 1, pivot coordinates are read
    /// off the reduced form, everything else is 0.
    pub fn kernel(&self) -> Mat {
        let Rref { mat: r, pivots } = self.rref();
        kernel_from_rref(&r, &pivots, self.cols)
    }

    /// Solves `self · x = b`. Inconsistency is an ordinary outcome, not an
    /// error: the caller decides what it means.
    pub fn solve_affine(&self, b: &[Scalar]) -> AffineSolution {
        assert_eq!(b.len(), self.rows);
        let bcol = Mat::from_images(self.field, self.rows, &[b.to_vec()]);
        let Rref { mat: r, pivots } = self.hstack(&bcol).rref();
        if pivots.last() == Some(&self.cols) {
            return AffineSolution::Inconsistent;
        }
        let mut particular = vec![self.field.zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            particular[p] = r.at(k, self.cols).clone();
        }
        let kernel = kernel_from_rref(&r, &pivots, self.cols);
        AffineSolution::Solution { particular, kernel }
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let Rref { mat: r, pivots } = self.hstack(&Mat::identity(self.field, n)).rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &p)| k != p) {
            return None;
        }
        let mut inv = Mat::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.at(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", render_vector(self.row(i)))?;
        }
        Ok(())
    }
}

/// A matrix in reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

/// Outcome of an exact affine solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    Inconsistent,
    Solution {
        /// The canonical particular solution (free coordinates set to 0).
        particular: Vec<Scalar>,
        /// Rows span the homogeneous solution space.
        kernel: Mat,
    },
}

/// Null-space basis read off a reduced form restricted to its first
/// `ncols` columns (which lets `solve_affine` reuse its augmented RREF).
fn kernel_from_rref(r: &Mat, pivots: &[usize], ncols: usize) -> Mat {
    let field = r.field();
    let free: Vec<usize> = (0..ncols).filter(|j| !pivots.contains(j)).collect();
    let mut out = Mat::zero(field, free.len(), ncols);
    for (row, &f) in free.iter().enumerate() {
        out.set(row, f, field.one());
        for (k, &p) in pivots.iter().enumerate() {
            let v = r.at(k, f);
            if !v.is_zero() {
                out.set(row, p, -v);
            }
        }
    }
    out
}

/// The coordinate matrix of the flip `F^{d1} ⊗ F^{d2} → F^{d2} ⊗ F^{d1}`,
/// `e_i ⊗ e_j ↦ e_j ⊗ e_i`, in the row-major index convention.
pub fn swap_matrix(field: FieldSpec, d1: usize, d2: usize) -> Mat {
    let mut s = Mat::zero(field, d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            s.set(j * d1 + i, i * d2 + j, field.one());
        }
    }
    s
}

/// Coordinates of `u ⊗ v` in the row-major convention.
pub fn outer_vec(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// A linear subspace of `F^ambient`, held as a canonical (RREF) basis so two
/// subspaces are equal exactly when their `basis` fields are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of the rows of `spanning`.
    pub fn from_spanning(spanning: &Mat) -> Subspace {
        let Rref { mat, pivots } = spanning.rref();
        let rank = pivots.len();
        let mut basis = Mat::zero(mat.field(), rank, mat.cols());
        for i in 0..rank {
            for j in 0..mat.cols() {
                basis.set(i, j, mat.at(i, j).clone());
            }
        }
        Subspace { basis, pivots }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace::from_spanning(&Mat::identity(field, ambient))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    /// The canonical basis, one vector per row.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vector(&self, k: usize) -> &[Scalar] {
        self.basis.row(k)
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` lies
    /// outside the subspace. Because the basis is reduced, the candidate
    /// coordinates are just the pivot entries of `v`; membership is the check
    /// that they reproduce `v` exactly.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim());
        let cand: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (k, c) in cand.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ambient_dim() {
                let b = self.basis.at(k, j);
                if !b.is_zero() {
                    residual[j] = &residual[j] - &(c * b);
                }
            }
        }
        if vec_is_zero(&residual) {
            Some(cand)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    pub fn embed(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![self.field().zero(); self.ambient_dim()];
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ambient_dim() {
                let b = self.basis.at(k, j);
                if !b.is_zero() {
                    out[j] = &out[j] + &(c * b);
                }
            }
        }
        out
    }

    /// `ambient × dim` matrix whose columns are the basis vectors.
    pub fn embedding_matrix(&self) -> Mat {
        self.basis.transpose()
    }

    /// `dim × ambient` matrix reading off pivot coordinates; on the subspace
    /// it inverts `embedding_matrix`.
    pub fn extraction_matrix(&self) -> Mat {
        let mut p = Mat::zero(self.field(), self.dim(), self.ambient_dim());
        for (k, &piv) in self.pivots.iter().enumerate() {
            p.set(k, piv, self.field().one());
        }
        p
    }

    /// Restricts an ambient map `f` to a map `self → target` in subspace
    /// coordinates; `None` if `f` does not carry `self` into `target`.
    ///
    /// Computed as extraction ∘ f ∘ embedding, then certified in one matrix
    /// identity: re-embedding the result must reproduce f on the subspace.
    pub fn restrict_map(&self, f: &Mat, target: &Subspace) -> Option<Mat> {
        assert_eq!(f.cols(), self.ambient_dim());
        assert_eq!(f.rows(), target.ambient_dim());
        let f_on_basis = f.matmul(&self.embedding_matrix());
        let restricted = target.extraction_matrix().matmul(&f_on_basis);
        if target.embedding_matrix().matmul(&restricted) == f_on_basis {
            Some(restricted)
        } else {
            None
        }
    }
}

/// A quotient `F^ambient / span(relations)` with a fixed coordinate chart:
/// quotient coordinates are the non-pivot ambient coordinates after reduction
/// by the relation span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    relations: Subspace,
    nonpivots: Vec<usize>,
    projection: Mat,
    section: Mat,
}

impl QuotientData {
    pub fn new(field: FieldSpec, ambient: usize, relation_rows: &Mat) -> QuotientData {
        assert_eq!(relation_rows.cols(), ambient);
        let relations = Subspace::from_spanning(relation_rows);
        let pivots = relations.pivots.clone();
        let nonpivots: Vec<usize> = (0..ambient).filter(|j| !pivots.contains(j)).collect();
        let q = nonpivots.len();

        // Column j of the projection is the reduction of e_j: a non-pivot e_j
        // is untouched; a pivot e_{p_k} reduces to e_{p_k} - (relation row k),
        // whose surviving entries are minus the row's non-pivot tail.
        let mut projection = Mat::zero(field, q, ambient);
        for (qi, &np) in nonpivots.iter().enumerate() {
            projection.set(qi, np, field.one());
        }
        for (k, &p) in pivots.iter().enumerate() {
            for (qi, &np) in nonpivots.iter().enumerate() {
                let v = relations.basis.at(k, np);
                if !v.is_zero() {
                    projection.set(qi, p, -v);
                }
            }
        }

        let mut section = Mat::zero(field, ambient, q);
        for (qi, &np) in nonpivots.iter().enumerate() {
            section.set(np, qi, field.one());
        }

        QuotientData { relations, nonpivots, projection, section }
    }

    pub fn field(&self) -> FieldSpec {
        self.relations.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.nonpivots.len()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// `dim × ambient`: class coordinates of an ambient vector.
    pub fn projection(&self) -> &Mat {
        &self.projection
    }

    /// `ambient × dim`: the canonical representative of each class.
    pub fn section(&self) -> &Mat {
        &self.section
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.projection.apply(v)
    }

    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        self.section.apply(coords)
    }

    /// Pushes an ambient map `f : F^ambient → F^{ambient'}` down to a map of
    /// quotients, verifying well-definedness (`f` must send every relation
    /// into the target relations). `None` when it does not descend.
    pub fn induced_map(&self, f: &Mat, target: &QuotientData) -> Option<Mat> {
        assert_eq!(f.cols(), self.ambient_dim());
        assert_eq!(f.rows(), target.ambient_dim());
        let image_of_relations = f.matmul(&self.relations.basis().transpose());
        if !target.projection.matmul(&image_of_relations).is_zero() {
            return None;
        }
        Some(target.projection.matmul(&f.matmul(&self.section)))
    }
}
