//! Exact elimination over the rationals and prime fields.
//!
//! Pivoting is deterministic: columns are scanned left to right and the
//! first row with a nonzero entry in the current column becomes the pivot.

use crate::error::{Error, Result};
use crate::field::{with_field, Field, FieldSpec, Scalar};

/// Coordinate-list sparse matrix with scalar entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    /// Builds a matrix, summing duplicate coordinates and dropping zeros.
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize, Scalar)>) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<(usize, usize), Scalar> = Default::default();
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            *merged.entry((r, c)).or_default() += v;
        }
        let entries = merged
            .into_iter()
            .filter(|(_, v)| !num_traits::Zero::is_zero(v))
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(Self { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            entries: (0..n)
                .map(|k| (k, k, crate::field::scalar_from_i64(1)))
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone())))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Scalar)] {
        &self.entries
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*c, *r, v.clone()))
                .collect(),
        }
    }

    /// `M v` over the given field.
    pub fn apply(&self, v: &[Scalar], field: FieldSpec) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        with_field!(field, f => {
            let v = v.iter().map(|x| f.from_scalar(x)).collect::<Result<Vec<_>>>()?;
            let mut out = vec![f.zero(); self.rows];
            for (r, c, e) in &self.entries {
                let e = f.from_scalar(e)?;
                out[*r] = f.add(&out[*r], &f.mul(&e, &v[*c]));
            }
            Ok(out.iter().map(|x| f.to_scalar(x)).collect())
        })
    }

    pub(crate) fn to_dense<F: Field>(&self, f: F) -> Result<Vec<Vec<F::E>>> {
        let mut m = vec![vec![f.zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            m[*r][*c] = f.from_scalar(v)?;
        }
        Ok(m)
    }
}

/// Reduced row echelon form in place; returns pivot columns in row order.
pub(crate) fn rref<F: Field>(f: F, m: &mut [Vec<F::E>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(found) = (row..m.len()).find(|&r| !f.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, found);
        let inv = f.inv(&m[row][col]);
        for x in m[row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || f.is_zero(&other[col]) {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub(crate) fn dense_rank<F: Field>(f: F, mut m: Vec<Vec<F::E>>, cols: usize) -> usize {
    rref(f, &mut m, cols).len()
}

/// Basis of the right null space of a dense matrix.
pub(crate) fn dense_kernel<F: Field>(f: F, mut m: Vec<Vec<F::E>>, cols: usize) -> Vec<Vec<F::E>> {
    let pivots = rref(f, &mut m, cols);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][free]);
            }
            v
        })
        .collect()
}

pub fn rank(m: &SparseMatrix, field: FieldSpec) -> Result<usize> {
    with_field!(field, f => Ok(dense_rank(f, m.to_dense(f)?, m.cols)))
}

pub fn kernel_basis(m: &SparseMatrix, field: FieldSpec) -> Result<Vec<Vec<Scalar>>> {
    with_field!(field, f => {
        let k = dense_kernel(f, m.to_dense(f)?, m.cols);
        Ok(k.iter().map(|v| v.iter().map(|x| f.to_scalar(x)).collect()).collect())
    })
}

/// Vectors of `z` whose classes form a basis of `span(z) / span(b)`.
pub fn quotient_representatives(
    z: &[Vec<Scalar>],
    b: &[Vec<Scalar>],
    field: FieldSpec,
) -> Result<Vec<Vec<Scalar>>> {
    let dim = z.first().or(b.first()).map_or(0, Vec::len);
    if z.iter().chain(b).any(|v| v.len() != dim) {
        return Err(Error::Shape("vectors of different lengths".into()));
    }
    with_field!(field, f => {
        let conv = |v: &Vec<Scalar>| v.iter().map(|x| f.from_scalar(x)).collect::<Result<Vec<_>>>();
        let mut z_span = IncrementalBasis::new(f, dim);
        for v in z {
            z_span.insert(conv(v)?);
        }
        let mut acc = IncrementalBasis::new(f, dim);
        for v in b {
            let v = conv(v)?;
            if !z_span.contains(&v) {
                return Err(Error::NotASubspace);
            }
            acc.insert(v);
        }
        let mut reps = Vec::new();
        for v in z {
            if acc.insert(conv(v)?) {
                reps.push(v.clone());
            }
        }
        Ok(reps)
    })
}

/// Echelon basis grown one vector at a time.
///
/// Each stored row has a leading 1 at its pivot and zeros at the pivots of
/// earlier rows. Rows remember their expansion in terms of the inserted
/// vectors so membership can be certified.
#[derive(Clone, Debug)]
pub(crate) struct IncrementalBasis<F: Field> {
    f: F,
    dim: usize,
    rows: Vec<(usize, Vec<F::E>, Vec<F::E>)>,
    inserted: usize,
}

impl<F: Field> IncrementalBasis<F> {
    pub fn new(f: F, dim: usize) -> Self {
        Self {
            f,
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after elimination, and the combination of inserted
    /// vectors that was subtracted.
    fn reduce_tracked(&self, mut v: Vec<F::E>) -> (Vec<F::E>, Vec<F::E>) {
        let f = self.f;
        let mut combo = vec![f.zero(); self.inserted];
        for (pivot, row, row_combo) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
            for (x, r) in combo.iter_mut().zip(row_combo) {
                if !f.is_zero(r) {
                    *x = f.add(x, &f.mul(&c, r));
                }
            }
        }
        (v, combo)
    }

    pub fn contains(&self, v: &[F::E]) -> bool {
        let (rem, _) = self.reduce_tracked(v.to_vec());
        rem.iter().all(|x| self.f.is_zero(x))
    }

    /// Coefficients over the inserted vectors expressing `v`, if it lies in the span.
    pub fn express(&self, v: &[F::E]) -> Option<Vec<F::E>> {
        let (rem, combo) = self.reduce_tracked(v.to_vec());
        rem.iter().all(|x| self.f.is_zero(x)).then_some(combo)
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vec<F::E>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.f;
        let (mut rem, mut combo) = self.reduce_tracked(v);
        for (_, _, c) in self.rows.iter_mut() {
            c.push(f.zero());
        }
        self.inserted += 1;
        // rem = v - sum(combo_k * inserted_k)
        for x in combo.iter_mut() {
            *x = f.neg(x);
        }
        combo.push(f.one());
        let Some(pivot) = rem.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&rem[pivot]);
        for x in rem.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for x in combo.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push((pivot, rem, combo));
        true
    }
}
