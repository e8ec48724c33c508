//! Exact linear algebra over a [`FieldSpec`]: row-major matrices and
//! subspaces kept in reduced row echelon form.
//!
//! A [`Subspace`] always stores the RREF basis of its row space with zero
//! rows dropped, so subspace equality is plain equality of the basis
//! matrices.  All operations check that operands share one field.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gf::{make_field, BaseTransfer, Field, FieldSpec, GfError, Scalar};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Dense row-major matrix over a shared field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: Field,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, field: Field) -> Mat {
        Mat {
            rows,
            cols,
            entries: vec![Scalar::ZERO; rows * cols],
            field,
        }
    }

    pub fn identity(n: usize, field: Field) -> Mat {
        let mut m = Mat::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: Field) -> Result<Mat, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Mat {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
            field,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: Field,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Mat {
        let mut m = Mat::zero(rows, cols, field);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn same_field(&self, other: &Mat) -> bool {
        self.field == other.field
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if !self.same_field(other) {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field.clone();
        let mut out = Mat::zero(self.rows, other.cols, f.clone());
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = f.mul(a, other.get(l, j));
                    out.set(i, j, f.add(out.get(i, j), add));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if !self.same_field(other) {
            return Err(LinalgError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("add".into()));
        }
        let f = self.field.clone();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Mat { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if !self.same_field(other) {
            return Err(LinalgError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("sub".into()));
        }
        let f = self.field.clone();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Mat { entries, ..self.clone() })
    }

    pub fn pow(&self, e: u32) -> Result<Mat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::ShapeMismatch("pow of non-square".into()));
        }
        let mut out = Mat::identity(self.rows, self.field.clone());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Matrix applied to a column vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch("mul_vec".into()));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::ZERO;
                for (j, &vj) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.get(i, j), vj));
                }
                acc
            })
            .collect())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, self.field.clone(), |i, j| self.get(j, i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    self.get(i, j) == if i == j { Scalar::ONE } else { Scalar::ZERO }
                })
            })
    }

    /// Reduced row echelon form and rank.  Idempotent.
    pub fn rref_rank(&self) -> (Mat, usize) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let hit = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let r = match hit {
                Some(r) => r,
                None => continue,
            };
            for j in 0..m.cols {
                let (a, b) = (m.get(pivot_row, j), m.get(r, j));
                m.set(pivot_row, j, b);
                m.set(r, j, a);
            }
            let inv = f.inv(m.get(pivot_row, col)).expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(pivot_row, j, f.mul(m.get(pivot_row, j), inv));
            }
            for r2 in 0..m.rows {
                if r2 == pivot_row {
                    continue;
                }
                let factor = m.get(r2, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let sub = f.mul(factor, m.get(pivot_row, j));
                    m.set(r2, j, f.sub(m.get(r2, j), sub));
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref_rank().1
    }

    /// Right kernel {v : M·v = 0} as a canonical subspace of F^cols.
    pub fn kernel(&self) -> Subspace {
        let f = self.field.clone();
        let (r, rank) = self.rref_rank();
        let mut pivot_cols = Vec::with_capacity(rank);
        for i in 0..rank {
            let col = (0..r.cols).find(|&j| !r.get(i, j).is_zero()).expect("row nonzero");
            pivot_cols.push(col);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::ZERO; self.cols];
            v[free] = Scalar::ONE;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        let m = Mat::from_rows(basis, self.cols, f).expect("rectangular");
        Subspace::from_span(&m)
    }

    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::ShapeMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut aug = Mat::zero(n, 2 * n, f.clone());
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Scalar::ONE);
        }
        let (r, _) = aug.rref_rank();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { Scalar::ONE } else { Scalar::ZERO };
                if r.get(i, j) != want {
                    return Err(LinalgError::Singular);
                }
            }
        }
        Ok(Mat::from_fn(n, n, f, |i, j| r.get(i, n + j)))
    }

    /// g^{-1} · self · g.
    pub fn conjugate_by(&self, g: &Mat) -> Result<Mat, LinalgError> {
        g.inverse()?.mul(self)?.mul(g)
    }

    /// Entry-wise relative Frobenius.
    pub fn frobenius(&self) -> Mat {
        let f = self.field.clone();
        let entries = self.entries.iter().map(|&a| f.frobenius_q(a)).collect();
        Mat { entries, ..self.clone() }
    }

    /// True iff every entry lies in GF(q).
    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(|&a| self.field.in_base_field(a))
    }

    /// Re-expresses a rational matrix over another tower with the same (p, m).
    pub fn transfer_to(&self, target: &Field) -> Result<Mat, LinalgError> {
        if self.field == *target {
            return Ok(self.clone());
        }
        let t = BaseTransfer::new(&self.field, target)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &a in &self.entries {
            entries.push(t.apply(a)?);
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: target.clone(),
        })
    }
}

/// Subspace of F^n held as an RREF basis with no zero rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    pub fn zero(ambient: usize, field: Field) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::zero(0, ambient, field),
        }
    }

    pub fn full(ambient: usize, field: Field) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::identity(ambient, field),
        }
    }

    /// Canonicalizes the row space of m.
    pub fn from_span(m: &Mat) -> Subspace {
        let (r, rank) = m.rref_rank();
        let rows: Vec<Vec<Scalar>> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        let basis = Mat::from_rows(rows, m.cols(), m.field().clone()).expect("rectangular");
        Subspace {
            ambient: m.cols(),
            basis,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, ambient: usize, field: Field) -> Result<Subspace, LinalgError> {
        let m = Mat::from_rows(rows, ambient, field)?;
        Ok(Subspace::from_span(&m))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    /// Pivot column of each basis row; strictly increasing.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                (0..self.ambient)
                    .find(|&j| !self.basis.get(i, j).is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    /// Reduces v against the basis; returns the residue.
    pub fn reduce_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field().clone();
        let mut v = v.to_vec();
        for (i, &pc) in self.pivots().iter().enumerate() {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (j, vj) in v.iter_mut().enumerate() {
                let sub = f.mul(c, self.basis.get(i, j));
                *vj = f.sub(*vj, sub);
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        self.reduce_vec(v).iter().all(|c| c.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        Ok((0..other.dim()).all(|i| self.contains_vec(other.basis.row(i))))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.dim() + other.dim());
        for i in 0..self.dim() {
            rows.push(self.basis.row(i).to_vec());
        }
        for i in 0..other.dim() {
            rows.push(other.basis.row(i).to_vec());
        }
        Subspace::from_rows(rows, self.ambient, self.field().clone())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.ambient, self.field().clone()));
        }
        // left kernel of the stacked bases: x·A + y·B = 0 gives x·A in both
        let stacked = self.sum_rows_mat(other);
        let left_kernel = stacked.transpose().kernel();
        let f = self.field().clone();
        let mut rows = Vec::with_capacity(left_kernel.dim());
        for i in 0..left_kernel.dim() {
            let z = left_kernel.basis().row(i);
            let mut v = vec![Scalar::ZERO; self.ambient];
            for (r, &coef) in z.iter().take(a).enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for (j, vj) in v.iter_mut().enumerate() {
                    let add = f.mul(coef, self.basis.get(r, j));
                    *vj = f.add(*vj, add);
                }
            }
            rows.push(v);
        }
        Subspace::from_rows(rows, self.ambient, f)
    }

    fn sum_rows_mat(&self, other: &Subspace) -> Mat {
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.dim() + other.dim());
        for i in 0..self.dim() {
            rows.push(self.basis.row(i).to_vec());
        }
        for i in 0..other.dim() {
            rows.push(other.basis.row(i).to_vec());
        }
        Mat::from_rows(rows, self.ambient, self.field().clone()).expect("rectangular")
    }

    /// Entry-wise relative Frobenius; RREF shape is preserved because the
    /// Frobenius fixes 0 and 1.
    pub fn frobenius(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.frobenius(),
        }
    }

    pub fn is_frobenius_stable(&self) -> bool {
        self.frobenius() == *self
    }

    /// Image {m·v : v in self} under a linear map.
    pub fn apply(&self, m: &Mat) -> Result<Subspace, LinalgError> {
        if m.field() != self.field() {
            return Err(LinalgError::FieldMismatch);
        }
        if m.cols() != self.ambient {
            return Err(LinalgError::ShapeMismatch("apply".into()));
        }
        let mut rows = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            rows.push(m.mul_vec(self.basis.row(i))?);
        }
        Subspace::from_rows(rows, m.rows(), self.field().clone())
    }
}

/// Image of a subspace under a matrix; the operation the membership tests
/// are phrased in.
pub fn image(m: &Mat, s: &Subspace) -> Result<Subspace, LinalgError> {
    s.apply(m)
}

/// All subspaces of dimension d in F^n, one RREF basis each, entries drawn
/// from the whole field.  Deterministic order: pivot sets lexicographic,
/// then free entries in text order.
pub fn enumerate_subspaces(n: usize, d: usize, field: &Field) -> Vec<Subspace> {
    let pool: Vec<Scalar> = field.scalars_lex().collect();
    enumerate_subspaces_pool(n, d, field, &pool)
}

/// Like [`enumerate_subspaces`] but with entries restricted to GF(q); these
/// are exactly the Frobenius-stable subspaces.
pub fn enumerate_rational_subspaces(n: usize, d: usize, field: &Field) -> Vec<Subspace> {
    let pool = field.base_embedding();
    enumerate_subspaces_pool(n, d, field, &pool)
}

fn enumerate_subspaces_pool(n: usize, d: usize, field: &Field, pool: &[Scalar]) -> Vec<Subspace> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free slots: entries right of a pivot, not in a pivot column
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut counters = vec![0usize; free.len()];
        loop {
            let f = field.clone();
            let mut m = Mat::zero(d, n, f);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, Scalar::ONE);
            }
            for (slot, &(r, c)) in free.iter().enumerate() {
                m.set(r, c, pool[counters[slot]]);
            }
            out.push(Subspace {
                ambient: n,
                basis: m,
            });
            // odometer, last slot fastest
            let mut slot = free.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                counters[slot] += 1;
                if counters[slot] < pool.len() {
                    break;
                }
                counters[slot] = 0;
                if slot == 0 {
                    slot = usize::MAX;
                    break;
                }
            }
            if slot == usize::MAX || free.is_empty() {
                break;
            }
        }
        // next pivot combination in lex order
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] + (d - i) < n {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Matrix text format: header `rows cols p m k`, then one line per row with
/// scalar entries separated by spaces.
pub fn parse_matrix(text: &str) -> Result<Mat, LinalgError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| LinalgError::Parse("empty input".into()))?;
    let nums: Result<Vec<u64>, _> = header.split_whitespace().map(|t| t.parse::<u64>()).collect();
    let nums = nums.map_err(|_| LinalgError::Parse(format!("bad header {header:?}")))?;
    if nums.len() != 5 {
        return Err(LinalgError::Parse("header must be `rows cols p m k`".into()));
    }
    let (rows, cols) = (nums[0] as usize, nums[1] as usize);
    let field = make_field(nums[2], nums[3] as u32, nums[4] as u32)?;
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("missing matrix row".into()))?;
        let row: Result<Vec<Scalar>, GfError> =
            line.split_whitespace().map(|t| field.parse_scalar(t)).collect();
        let row = row?;
        if row.len() != cols {
            return Err(LinalgError::Parse(format!(
                "row has {} entries, expected {cols}",
                row.len()
            )));
        }
        data.push(row);
    }
    if lines.next().is_some() {
        return Err(LinalgError::Parse("trailing content after matrix rows".into()));
    }
    Mat::from_rows(data, cols, field)
}

pub fn format_matrix(m: &Mat) -> String {
    let f: &FieldSpec = m.field();
    let mut out = format!("{} {} {} {} {}\n", m.rows(), m.cols(), f.p(), f.m(), f.k());
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&a| f.scalar_text(a)).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
