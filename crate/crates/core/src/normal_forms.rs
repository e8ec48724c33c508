//! Normal forms of unipotent matrices: Jordan type, a block staircase
//! normal form grouped by kernel filtration, conjugators into that form,
//! and centralizer dimensions.
//!
//! The staircase form for a shape with conjugate parts c_1 >= c_2 >= ...
//! is the identity plus blocks sending the (i+1)-th group of c_{i+1} basis
//! vectors onto the first c_{i+1} vectors of the i-th group.  Its leading
//! kernels are spanned by coordinate vectors, which is what the flag
//! membership tests downstream want.

use rand::Rng;

use thiserror::Error;

use crate::combinatorics::{beta_word, Partition, Perm};
use crate::gf::{Field, Scalar};
use crate::linalg::{LinalgError, Mat, Subspace};

#[derive(Debug, Error)]
pub enum NormalFormError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix has entries outside the rational subfield")]
    NotRational,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A validated unipotent matrix with entries in GF(q), carrying its
/// Jordan type.
#[derive(Clone, Debug)]
pub struct Unipotent {
    mat: Mat,
    nilpotent: Mat,
    jordan_type: Partition,
}

impl Unipotent {
    pub fn new(mat: Mat) -> Result<Unipotent, NormalFormError> {
        if mat.rows() != mat.cols() {
            return Err(NormalFormError::NotSquare);
        }
        if !mat.is_rational() {
            return Err(NormalFormError::NotRational);
        }
        let n = mat.rows();
        let nilpotent = mat.sub(&Mat::identity(n, mat.field().clone()))?;
        if !nilpotent.pow(n as u32)?.is_zero() {
            return Err(NormalFormError::NotUnipotent);
        }
        let jordan_type = jordan_type_of_nilpotent(&nilpotent)?;
        Ok(Unipotent {
            mat,
            nilpotent,
            jordan_type,
        })
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    /// u - 1.
    pub fn nilpotent(&self) -> &Mat {
        &self.nilpotent
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }

    pub fn jordan_type(&self) -> &Partition {
        &self.jordan_type
    }
}

/// Jordan type of u from the kernel filtration of u - 1: the t-th
/// difference dim Ker N^t - dim Ker N^{t-1} counts blocks of size >= t,
/// so the differences form the conjugate of the type.
pub fn jordan_type(u: &Unipotent) -> Partition {
    u.jordan_type.clone()
}

/// Jordan type of a nilpotent matrix from its kernel filtration; errors
/// when the matrix is not nilpotent.
pub fn jordan_type_of_nilpotent(n_mat: &Mat) -> Result<Partition, NormalFormError> {
    let n = n_mat.rows();
    let mut diffs = Vec::new();
    let mut prev = 0usize;
    let mut power = Mat::identity(n, n_mat.field().clone());
    while prev < n {
        power = power.mul(n_mat)?;
        let dim = power.kernel().dim();
        if dim == prev {
            // kernel filtration stalled below full: not nilpotent
            return Err(NormalFormError::NotUnipotent);
        }
        diffs.push(dim - prev);
        prev = dim;
    }
    let conj = Partition::new(diffs).map_err(|_| NormalFormError::NotUnipotent)?;
    Ok(conj.conjugate())
}

/// The staircase normal form for a shape: identity plus, for each adjacent
/// pair of conjugate parts c_i, c_{i+1}, a block of ones at rows s_i + j,
/// columns s_{i+1} + j for j < c_{i+1} (s_i is the offset before group i).
pub fn weyr_matrix(shape: &Partition, field: &Field) -> Mat {
    let c = shape.conjugate();
    let n = shape.size();
    let mut offsets = vec![0usize];
    for &ci in c.parts() {
        offsets.push(offsets.last().unwrap() + ci);
    }
    let mut m = Mat::identity(n, field.clone());
    for i in 0..c.len().saturating_sub(1) {
        for j in 0..c.parts()[i + 1] {
            m.set(offsets[i] + j, offsets[i + 1] + j, Scalar::ONE);
        }
    }
    m
}

/// Unipotent with Jordan blocks of the given sizes along the diagonal.
pub fn jordan_matrix(shape: &Partition, field: &Field) -> Mat {
    let n = shape.size();
    let mut m = Mat::identity(n, field.clone());
    let mut offset = 0;
    for &b in shape.parts() {
        for t in 0..b.saturating_sub(1) {
            m.set(offset + t, offset + t + 1, Scalar::ONE);
        }
        offset += b;
    }
    m
}

/// Invertible g with g^{-1} u g equal to `weyr_matrix(jordan_type(u))`.
///
/// Chains are built longest first: at stage t the span of Ker N^{t-1} and
/// the stage-(t+1) images is completed inside Ker N^t, and every completing
/// vector starts a new chain of length t.  Columns of g list the height-1
/// vectors of every chain, then the height-2 vectors, and so on, which is
/// exactly the grouping the staircase form uses.  All pivoting happens in
/// the rational subfield, so g is rational whenever u is.
pub fn weyr_conjugator(u: &Unipotent) -> Result<Mat, NormalFormError> {
    let n = u.n();
    let f = u.field().clone();
    let n_mat = u.nilpotent();
    let mut kernels = vec![Subspace::zero(n, f.clone())];
    let mut power = Mat::identity(n, f.clone());
    while kernels.last().unwrap().dim() < n {
        power = power.mul(n_mat)?;
        kernels.push(power.kernel());
    }
    let s = kernels.len() - 1;
    // chains[j][i] is the height-(i+1) vector of chain j
    let mut chains: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for t in (1..=s).rev() {
        let mut span_rows: Vec<Vec<Scalar>> = (0..kernels[t - 1].dim())
            .map(|i| kernels[t - 1].basis().row(i).to_vec())
            .collect();
        for chain in &chains {
            span_rows.push(chain[t - 1].clone());
        }
        let mut span = Subspace::from_rows(span_rows, n, f.clone())?;
        let kt = &kernels[t];
        for i in 0..kt.dim() {
            let cand = kt.basis().row(i).to_vec();
            if span.contains_vec(&cand) {
                continue;
            }
            let mut chain = vec![cand.clone()];
            for _ in 1..t {
                let prev = chain.last().unwrap();
                chain.push(n_mat.mul_vec(prev)?);
            }
            chain.reverse();
            span = span.sum(&Subspace::from_rows(vec![cand], n, f.clone())?)?;
            chains.push(chain);
        }
    }
    let heights: Vec<usize> = chains.iter().map(|c| c.len()).collect();
    debug_assert!(heights.windows(2).all(|w| w[0] >= w[1]));
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for height in 1..=s {
        for chain in &chains {
            if chain.len() >= height {
                cols.push(chain[height - 1].clone());
            }
        }
    }
    let g = Mat::from_fn(n, n, f, |i, j| cols[j][i]);
    g.inverse()?; // the chain basis always spans; surface a bug loudly
    Ok(g)
}

/// Dimension of {x : ux = xu} inside all n x n matrices, computed as the
/// kernel of the n^2 x n^2 commutation operator.  For a unipotent of type
/// lambda this equals the sum of the squared conjugate parts.
pub fn centralizer_dim(u: &Unipotent) -> usize {
    let n = u.n();
    let f = u.field().clone();
    let m = &u.mat;
    // row (i, j): entry (i, j) of ux - xu as a linear form in x
    let op = Mat::from_fn(n * n, n * n, f, |row, col| {
        let (i, j) = (row / n, row % n);
        let (a, b) = (col / n, col % n);
        let lhs = if b == j { m.get(i, a) } else { Scalar::ZERO };
        let rhs = if a == i { m.get(b, j) } else { Scalar::ZERO };
        u.field().sub(lhs, rhs)
    });
    op.kernel().dim()
}

/// Block-reversal word attached to a unipotent through its Jordan type.
pub fn beta_of_unipotent(u: &Unipotent) -> Perm {
    beta_word(u.jordan_type())
}

/// Random invertible matrix with entries in the rational subfield,
/// resampled until nonsingular.
pub fn random_invertible_rational<R: Rng>(n: usize, field: &Field, rng: &mut R) -> Mat {
    let pool = field.base_embedding();
    loop {
        let m = Mat::from_fn(n, n, field.clone(), |_, _| {
            pool[rng.random_range(0..pool.len())]
        });
        if m.inverse().is_ok() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;
    use crate::gf::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        make_field(p, 1, 1).unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rows_of(m: &Mat) -> Vec<Vec<u64>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|&a| a.index() as u64).collect())
            .collect()
    }

    #[test]
    fn staircase_matrices_verbatim() {
        let f = gf(2);
        assert_eq!(
            rows_of(&weyr_matrix(&part("2,2"), &f)),
            vec![
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ]
        );
        assert_eq!(
            rows_of(&weyr_matrix(&part("2,1"), &f)),
            vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(
            rows_of(&weyr_matrix(&part("3,1"), &f)),
            vec![
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ]
        );
        assert_eq!(rows_of(&weyr_matrix(&part("1,1,1"), &f)), rows_of(&Mat::identity(3, f)));
    }

    #[test]
    fn jordan_type_recovers_the_shape() {
        for p in [2u64, 3] {
            let f = gf(p);
            for n in 1..=5 {
                for shape in partitions_of(n) {
                    let j = Unipotent::new(jordan_matrix(&shape, &f)).unwrap();
                    assert_eq!(jordan_type(&j), shape, "jordan p={p}");
                    let w = Unipotent::new(weyr_matrix(&shape, &f)).unwrap();
                    assert_eq!(jordan_type(&w), shape, "staircase p={p}");
                }
            }
        }
    }

    #[test]
    fn conjugator_for_two_equal_blocks_is_the_expected_permutation() {
        let f = gf(2);
        let u = Unipotent::new(jordan_matrix(&part("2,2"), &f)).unwrap();
        let g = weyr_conjugator(&u).unwrap();
        // columns e1, e3, e2, e4
        assert_eq!(
            rows_of(&g),
            vec![
                vec![1, 0, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 0, 1],
            ]
        );
        assert_eq!(
            u.mat().conjugate_by(&g).unwrap(),
            weyr_matrix(&part("2,2"), &f)
        );
    }

    #[test]
    fn conjugator_normalizes_seeded_conjugates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2026);
        for p in [2u64, 3] {
            let f = gf(p);
            for n in 1..=4 {
                for shape in partitions_of(n) {
                    let j = jordan_matrix(&shape, &f);
                    for _ in 0..5 {
                        let h = random_invertible_rational(n, &f, &mut rng);
                        let u = Unipotent::new(j.conjugate_by(&h).unwrap()).unwrap();
                        assert_eq!(*u.jordan_type(), shape);
                        let g = weyr_conjugator(&u).unwrap();
                        assert!(g.is_rational());
                        assert_eq!(
                            u.mat().conjugate_by(&g).unwrap(),
                            weyr_matrix(&shape, &f),
                            "shape {shape} p {p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn conjugator_stays_rational_over_extension_fields() {
        // GF(16) over GF(4): the unipotent has entries in GF(4), the
        // conjugator must too
        let f = make_field(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let j = jordan_matrix(&part("2,1"), &f);
        let h = random_invertible_rational(3, &f, &mut rng);
        let u = Unipotent::new(j.conjugate_by(&h).unwrap()).unwrap();
        let g = weyr_conjugator(&u).unwrap();
        assert!(g.is_rational());
        assert_eq!(u.mat().conjugate_by(&g).unwrap(), weyr_matrix(&part("2,1"), &f));
    }

    #[test]
    fn centralizer_dim_matches_squared_conjugate_parts() {
        for p in [2u64, 3] {
            let f = gf(p);
            for n in 1..=4 {
                for shape in partitions_of(n) {
                    let u = Unipotent::new(jordan_matrix(&shape, &f)).unwrap();
                    let expect: usize = shape.conjugate().parts().iter().map(|&c| c * c).sum();
                    assert_eq!(centralizer_dim(&u), expect, "shape {shape} p {p}");
                }
            }
        }
    }

    #[test]
    fn centralizer_dim_is_conjugation_invariant() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = Unipotent::new(jordan_matrix(&part("2,2"), &f)).unwrap();
        let d = centralizer_dim(&u);
        for _ in 0..3 {
            let h = random_invertible_rational(4, &f, &mut rng);
            let v = Unipotent::new(u.mat().conjugate_by(&h).unwrap()).unwrap();
            assert_eq!(centralizer_dim(&v), d);
        }
    }

    #[test]
    fn dimension_identity_between_centralizer_and_block_word_length() {
        // n(n-1)/2 - (n^2 - dim centralizer)/2 equals the inversion count
        // of the block-reversal word, for every shape
        let f = gf(2);
        for n in 1..=4 {
            for shape in partitions_of(n) {
                let u = Unipotent::new(jordan_matrix(&shape, &f)).unwrap();
                let z = centralizer_dim(&u);
                let lhs = n * (n - 1) / 2 - (n * n - z) / 2;
                assert_eq!(lhs, beta_of_unipotent(&u).length(), "shape {shape}");
            }
        }
    }

    #[test]
    fn validation_rejects_bad_input() {
        let f = gf(2);
        let wide = Mat::zero(2, 3, f.clone());
        assert!(matches!(Unipotent::new(wide), Err(NormalFormError::NotSquare)));
        // in characteristic 2 the swap matrix IS unipotent; use GF(3)
        let swap = Mat::from_fn(2, 2, gf(3), |i, j| {
            if i + j == 1 { Scalar::ONE } else { Scalar::ZERO }
        });
        assert!(matches!(Unipotent::new(swap), Err(NormalFormError::NotUnipotent)));
        let f4 = make_field(2, 1, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let mut m = Mat::identity(2, f4);
        m.set(0, 1, x);
        assert!(matches!(Unipotent::new(m), Err(NormalFormError::NotRational)));
    }
}
