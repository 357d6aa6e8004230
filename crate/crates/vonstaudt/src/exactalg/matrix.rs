//! Dense matrices over an exact field, block-column structure, exact rank,
//! linear solving, and the closed-form block-rank identities used by the
//! pair/triple sweeps.

use super::{ExactAlgError, Field};

/// A dense `rows x cols` matrix over the field `F`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(
        field: F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self, ExactAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(ExactAlgError::DimensionMismatch(
                "ragged row lengths".to_string(),
            ));
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose integer entries are mapped into the field.
    pub fn from_ints(field: F, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_fn(field.clone(), rows, cols, |r, c| {
            field.from_int(data[r * cols + c])
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field.clone(), self.rows)
    }

    fn check_same_field(&self, other: &Self) -> Result<(), ExactAlgError> {
        if self.field != other.field {
            return Err(ExactAlgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| self.field.neg(e)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let t = f.mul(a, other.get(k, c));
                    let cur = f.add(out.get(r, c), &t);
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Result<F::Elem, ExactAlgError> {
        if !self.is_square() {
            return Err(ExactAlgError::NotSquare);
        }
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            acc = self.field.add(&acc, self.get(i, i));
        }
        Ok(acc)
    }

    /// Submatrix of all rows and the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), self.rows, cols.len(), |r, c| {
            self.get(r, cols[c]).clone()
        })
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self, ExactAlgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "hstack {}x{} | {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(
            self.field.clone(),
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self.get(r, c).clone()
                } else {
                    other.get(r, c - self.cols).clone()
                }
            },
        ))
    }

    /// Vertical concatenation of blocks into one matrix; every row of blocks
    /// is an hstack, the rows are then stacked.
    pub fn from_blocks(blocks: &[&[&Matrix<F>]]) -> Result<Self, ExactAlgError> {
        assert!(!blocks.is_empty() && !blocks[0].is_empty());
        let mut rows: Option<Matrix<F>> = None;
        for block_row in blocks {
            let mut acc: Option<Matrix<F>> = None;
            for b in *block_row {
                acc = Some(match acc {
                    None => (*b).clone(),
                    Some(a) => a.hstack(b)?,
                });
            }
            let row = acc.unwrap();
            rows = Some(match rows {
                None => row,
                Some(r) => {
                    if r.cols != row.cols {
                        return Err(ExactAlgError::DimensionMismatch(
                            "block rows have different widths".to_string(),
                        ));
                    }
                    let mut entries = r.entries;
                    entries.extend(row.entries);
                    Matrix {
                        field: r.field,
                        rows: r.rows + row.rows,
                        cols: r.cols,
                        entries,
                    }
                }
            });
        }
        Ok(rows.unwrap())
    }

    /// Exact column rank. Degenerate (0-row or 0-column) matrices have rank 0.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut data = self.entries.clone();
        self.field.matrix_rank(self.rows, self.cols, &mut data)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Solves `self * X = rhs` by Gauss-Jordan elimination.
    pub fn solve(&self, rhs: &Self) -> Result<SolveOutcome<F>, ExactAlgError> {
        self.check_same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "solve {}x{} with rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let n = self.cols;
        let k = rhs.cols;
        let mut aug = self.hstack(rhs)?;
        let total = n + k;
        let mut pivot_cols = Vec::new();
        let mut row = 0usize;
        for col in 0..n {
            let Some(p) = (row..aug.rows).find(|&r| !f.is_zero(aug.get(r, col))) else {
                continue;
            };
            for j in 0..total {
                let a = aug.get(p, j).clone();
                let b = aug.get(row, j).clone();
                aug.set(p, j, b);
                aug.set(row, j, a);
            }
            let inv = f.inv(aug.get(row, col)).expect("pivot nonzero");
            for j in col..total {
                let v = f.mul(aug.get(row, j), &inv);
                aug.set(row, j, v);
            }
            for r in 0..aug.rows {
                if r == row || f.is_zero(aug.get(r, col)) {
                    continue;
                }
                let factor = aug.get(r, col).clone();
                for j in col..total {
                    let t = f.mul(&factor, aug.get(row, j));
                    let v = f.sub(aug.get(r, j), &t);
                    aug.set(r, j, v);
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == aug.rows {
                break;
            }
        }
        // consistency: zero rows of the coefficient part must have zero rhs
        for r in row..aug.rows {
            for j in n..total {
                if !f.is_zero(aug.get(r, j)) {
                    return Ok(SolveOutcome::Inconsistent);
                }
            }
        }
        if pivot_cols.len() < n {
            return Ok(SolveOutcome::Underdetermined);
        }
        let mut x = Matrix::zero(f.clone(), n, k);
        for (r, &col) in pivot_cols.iter().enumerate() {
            for j in 0..k {
                x.set(col, j, aug.get(r, n + j).clone());
            }
        }
        Ok(SolveOutcome::Unique(x))
    }

    /// Inverse of a square matrix, or `Err(Singular)`.
    pub fn inverse(&self) -> Result<Self, ExactAlgError> {
        if !self.is_square() {
            return Err(ExactAlgError::NotSquare);
        }
        let id = Matrix::identity(self.field.clone(), self.rows);
        match self.solve(&id)? {
            SolveOutcome::Unique(x) => Ok(x),
            _ => Err(ExactAlgError::Singular),
        }
    }

    /// Maps entries into another field through integer-free structure; used
    /// for substitution-style cross-checks in tests.
    pub fn map_into<G: Field>(&self, field: G, f: impl Fn(&F::Elem) -> G::Elem) -> Matrix<G> {
        Matrix::from_fn(field, self.rows, self.cols, |r, c| f(self.get(r, c)))
    }
}

/// Result of solving a linear system exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome<F: Field> {
    Unique(Matrix<F>),
    Inconsistent,
    Underdetermined,
}

/// A matrix with square block structure of a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix<F: Field> {
    base: Matrix<F>,
    block: usize,
}

impl<F: Field> BlockMatrix<F> {
    pub fn new(base: Matrix<F>, block: usize) -> Result<Self, ExactAlgError> {
        if block == 0 || base.rows() % block != 0 || base.cols() % block != 0 {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "{}x{} is not a multiple of block size {}",
                base.rows(),
                base.cols(),
                block
            )));
        }
        Ok(BlockMatrix { base, block })
    }

    pub fn base(&self) -> &Matrix<F> {
        &self.base
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn block_rows(&self) -> usize {
        self.base.rows() / self.block
    }

    pub fn block_cols(&self) -> usize {
        self.base.cols() / self.block
    }

    /// The `(i, j)` block as a `c x c` matrix.
    pub fn block(&self, i: usize, j: usize) -> Matrix<F> {
        let c = self.block;
        Matrix::from_fn(self.base.field().clone(), c, c, |r, s| {
            self.base.get(i * c + r, j * c + s).clone()
        })
    }

    /// The minor of all rows and the chosen block columns, in the given
    /// order. The empty selection is legal and yields a 0-column matrix.
    pub fn block_column_minor(&self, columns: &[usize]) -> Result<Matrix<F>, ExactAlgError> {
        let c = self.block;
        let nb = self.block_cols();
        let mut scalar_cols = Vec::with_capacity(columns.len() * c);
        for &b in columns {
            if b >= nb {
                return Err(ExactAlgError::BlockColumnOutOfRange(b, nb));
            }
            scalar_cols.extend(b * c..(b + 1) * c);
        }
        Ok(self.base.select_columns(&scalar_cols))
    }

    /// Replaces one block column by its product with a `c x c` matrix from
    /// the right.
    pub fn scale_block_column(&mut self, j: usize, s: &Matrix<F>) -> Result<(), ExactAlgError> {
        let c = self.block;
        if s.rows() != c || s.cols() != c {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "block scalar {}x{} for block size {}",
                s.rows(),
                s.cols(),
                c
            )));
        }
        let col = self.block_column_minor(&[j])?;
        let scaled = col.mul(s)?;
        for r in 0..self.base.rows() {
            for k in 0..c {
                self.base.set(r, j * c + k, scaled.get(r, k).clone());
            }
        }
        Ok(())
    }
}

/// The three closed-form block-rank cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCase {
    /// `[[I, I], [M1, M2]]` has rank `k + rank(M1 - M2)`.
    I,
    /// `[[I, I, 0], [M1, 0, M3], [0, M2, -I]]` has rank `2k + rank(M3*M2 - M1)`.
    II,
    /// `[[I, I, I], [M1, 0, M3], [0, M2, I]]` has rank `2k + rank(M1 + M3*M2 - M1*M2)`.
    III,
}

fn check_lemma_inputs<F: Field>(
    case: BlockCase,
    m1: &Matrix<F>,
    m2: &Matrix<F>,
    m3: Option<&Matrix<F>>,
) -> Result<usize, ExactAlgError> {
    let k = m1.rows();
    let mut all: Vec<&Matrix<F>> = vec![m1, m2];
    if case != BlockCase::I {
        let m3 = m3.ok_or_else(|| {
            ExactAlgError::DimensionMismatch("cases II and III require M3".to_string())
        })?;
        all.push(m3);
    }
    for m in &all {
        if !m.is_square() || m.rows() != k {
            return Err(ExactAlgError::DimensionMismatch(format!(
                "expected square {k}x{k} blocks"
            )));
        }
        if m.field() != m1.field() {
            return Err(ExactAlgError::FieldMismatch);
        }
        if !m.is_invertible() {
            return Err(ExactAlgError::Singular);
        }
    }
    Ok(k)
}

/// Closed-form rank of the assembled block matrix for the given case.
pub fn lemma_block_rank<F: Field>(
    case: BlockCase,
    m1: &Matrix<F>,
    m2: &Matrix<F>,
    m3: Option<&Matrix<F>>,
) -> Result<usize, ExactAlgError> {
    let k = check_lemma_inputs(case, m1, m2, m3)?;
    match case {
        BlockCase::I => Ok(k + m1.sub(m2)?.rank()),
        BlockCase::II => {
            let m3 = m3.unwrap();
            Ok(2 * k + m3.mul(m2)?.sub(m1)?.rank())
        }
        BlockCase::III => {
            let m3 = m3.unwrap();
            let t = m1.add(&m3.mul(m2)?)?.sub(&m1.mul(m2)?)?;
            Ok(2 * k + t.rank())
        }
    }
}

/// Assembles the literal block matrix of the given case, for cross-checking
/// the closed form against a direct rank computation.
pub fn lemma_block_matrix<F: Field>(
    case: BlockCase,
    m1: &Matrix<F>,
    m2: &Matrix<F>,
    m3: Option<&Matrix<F>>,
) -> Result<Matrix<F>, ExactAlgError> {
    let k = check_lemma_inputs(case, m1, m2, m3)?;
    let f = m1.field().clone();
    let id = Matrix::identity(f.clone(), k);
    let zero = Matrix::zero(f, k, k);
    match case {
        BlockCase::I => Matrix::from_blocks(&[&[&id, &id], &[m1, m2]]),
        BlockCase::II => {
            let m3 = m3.unwrap();
            let neg_id = id.neg();
            Matrix::from_blocks(&[
                &[&id, &id, &zero],
                &[m1, &zero, m3],
                &[&zero, m2, &neg_id],
            ])
        }
        BlockCase::III => {
            let m3 = m3.unwrap();
            Matrix::from_blocks(&[&[&id, &id, &id], &[m1, &zero, m3], &[&zero, m2, &id]])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{PrimeField, RatFuncField, Rationals};
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rank_identity() {
        let m = Matrix::identity(Rationals, 3);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn rank_matches_block_case_i() {
        // [[1,1],[2,3]] = case I with k=1, M1=(2), M2=(3): 1 + rank(-1) = 2
        let m = Matrix::from_ints(Rationals, 2, 2, &[1, 1, 2, 3]);
        assert_eq!(m.rank(), 2);
        let m1 = Matrix::from_ints(Rationals, 1, 1, &[2]);
        let m2 = Matrix::from_ints(Rationals, 1, 1, &[3]);
        assert_eq!(lemma_block_rank(BlockCase::I, &m1, &m2, None), Ok(2));
        assert_eq!(lemma_block_matrix(BlockCase::I, &m1, &m2, None).unwrap(), m);
    }

    #[test]
    fn rank_of_low_rank_product() {
        let f5 = PrimeField::new(5);
        let mut rng = StdRng::seed_from_u64(42);
        // random 5x2 and 2x7 full-rank factors; the product has rank 2
        loop {
            let a = Matrix::from_fn(f5, 5, 2, |_, _| rng.gen_range(0..5));
            let b = Matrix::from_fn(f5, 2, 7, |_, _| rng.gen_range(0..5));
            if a.rank() == 2 && b.rank() == 2 {
                assert_eq!(a.mul(&b).unwrap().rank(), 2);
                break;
            }
        }
    }

    #[test]
    fn degenerate_matrices_have_rank_zero() {
        let m = Matrix::zero(Rationals, 0, 4);
        assert_eq!(m.rank(), 0);
        let m = Matrix::zero(Rationals, 3, 0);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn rank_invariances() {
        let mut rng = StdRng::seed_from_u64(7);
        let f5 = PrimeField::new(5);
        for _ in 0..25 {
            let m = Matrix::from_fn(f5, 4, 6, |_, _| rng.gen_range(0..5));
            let r = m.rank();
            assert_eq!(m.transpose().rank(), r);
            // swap two rows
            let swapped = Matrix::from_fn(f5, 4, 6, |i, j| {
                let i = match i {
                    0 => 2,
                    2 => 0,
                    other => other,
                };
                m.get(i, j).clone()
            });
            assert_eq!(swapped.rank(), r);
            // scale one row by a nonzero element
            let scaled = Matrix::from_fn(f5, 4, 6, |i, j| {
                if i == 1 {
                    f5.mul(m.get(i, j), &3)
                } else {
                    m.get(i, j).clone()
                }
            });
            assert_eq!(scaled.rank(), r);
        }
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let q = Rationals;
        let a = Matrix::from_ints(q, 3, 2, &[1, 0, 0, 1, 1, 1]);
        let b = Matrix::from_ints(q, 3, 1, &[2, 3, 5]);
        match a.solve(&b).unwrap() {
            SolveOutcome::Unique(x) => {
                assert_eq!(a.mul(&x).unwrap(), b);
            }
            other => panic!("expected unique solution, got {other:?}"),
        }
        let b_bad = Matrix::from_ints(q, 3, 1, &[2, 3, 6]);
        assert_eq!(a.solve(&b_bad).unwrap(), SolveOutcome::Inconsistent);
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = PrimeField::new(5);
        let m = Matrix::from_ints(f5, 2, 2, &[1, 2, 3, 4]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let singular = Matrix::from_ints(f5, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(singular.inverse(), Err(ExactAlgError::Singular));
    }

    #[test]
    fn block_column_minor_trivia() {
        let q = Rationals;
        let base = Matrix::from_ints(q, 2, 6, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        let bm = BlockMatrix::new(base.clone(), 2).unwrap();
        assert_eq!(bm.block_column_minor(&[0, 1, 2]).unwrap(), base);
        let empty = bm.block_column_minor(&[]).unwrap();
        assert_eq!(empty.cols(), 0);
        assert_eq!(empty.rank(), 0);
        assert_eq!(
            bm.block_column_minor(&[3]),
            Err(ExactAlgError::BlockColumnOutOfRange(3, 3))
        );
    }

    #[test]
    fn lemma_trivial_cases() {
        let f5 = PrimeField::new(5);
        let id = Matrix::identity(f5, 3);
        // case I with M1 = M2: rank k
        assert_eq!(lemma_block_rank(BlockCase::I, &id, &id, None), Ok(3));
        // case II with M1 = M3*M2: rank 2k
        let m2 = Matrix::from_ints(f5, 3, 3, &[1, 1, 0, 0, 1, 0, 2, 0, 1]);
        let m3 = Matrix::from_ints(f5, 3, 3, &[2, 0, 1, 0, 1, 0, 0, 0, 3]);
        let m1 = m3.mul(&m2).unwrap();
        assert_eq!(lemma_block_rank(BlockCase::II, &m1, &m2, Some(&m3)), Ok(6));
        // singular input rejected
        let sing = Matrix::zero(f5, 3, 3);
        assert_eq!(
            lemma_block_rank(BlockCase::I, &sing, &id, None),
            Err(ExactAlgError::Singular)
        );
    }

    fn random_invertible(fp: PrimeField, k: usize, rng: &mut StdRng) -> Matrix<PrimeField> {
        loop {
            let m = Matrix::from_fn(fp, k, k, |_, _| rng.gen_range(0..fp.modulus()));
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn lemma_matches_assembled_rank() {
        let f5 = PrimeField::new(5);
        let mut rng = StdRng::seed_from_u64(2024);
        for k in 1..=3 {
            for _ in 0..20 {
                let m1 = random_invertible(f5, k, &mut rng);
                let m2 = random_invertible(f5, k, &mut rng);
                let m3 = random_invertible(f5, k, &mut rng);
                for case in [BlockCase::I, BlockCase::II, BlockCase::III] {
                    let closed = lemma_block_rank(case, &m1, &m2, Some(&m3)).unwrap();
                    let direct = lemma_block_matrix(case, &m1, &m2, Some(&m3))
                        .unwrap()
                        .rank();
                    assert_eq!(closed, direct, "case {case:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn bareiss_rank_agrees_with_generic_elimination() {
        // dual route: the fraction-free path must agree with plain Gaussian
        // elimination over the fraction field
        let f = RatFuncField::new(3, ["l", "m"]);
        let mut rng = StdRng::seed_from_u64(11);
        let mono = |f: &RatFuncField, rng: &mut StdRng| {
            let c = rng.gen_range(0..3i64);
            let e1 = rng.gen_range(0..2u32);
            let e2 = rng.gen_range(0..2u32);
            let p = super::super::BiPoly::monomial(f.base(), (e1, e2), c as u64);
            f.from_poly(p)
        };
        for _ in 0..10 {
            let m = Matrix::from_fn(f.clone(), 4, 5, |_, _| {
                let a = mono(&f, &mut rng);
                let b = mono(&f, &mut rng);
                f.add(&a, &b)
            });
            let mut data = m.entries.clone();
            let generic = super::super::gauss_rank(&f, 4, 5, &mut data);
            assert_eq!(m.rank(), generic);
        }
    }
}
