//! Dense exact matrices and elementary-word certificates.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

impl Matrix {
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|x| !ring.contains(x)) {
            return Err(Error::Parse(format!("entry {bad:?} is not in {ring}")));
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(ring, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer literal rows, reduced into the ring.
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Result<Matrix> {
        Matrix::from_rows(
            ring,
            rows.iter()
                .map(|row| row.iter().map(|&x| ring.int(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, k: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, k, k);
        for i in 0..k {
            m.entries[i * k + i] = ring.one();
        }
        m
    }

    /// A 1×n matrix.
    pub fn row_vector(ring: &Ring, v: &[Scalar]) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows: 1,
            cols: v.len(),
            entries: v.to_vec(),
        }
    }

    /// An n×1 matrix.
    pub fn column_vector(ring: &Ring, v: &[Scalar]) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        same_ring(&self.ring, &other.ring)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if r.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = r.add(&out.entries[idx], &r.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        same_ring(&self.ring, &other.ring)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|a| self.ring.neg(a))
    }

    /// `s · A`.
    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|a| self.ring.mul(s, a))
    }

    /// Entrywise pseudoinvolution.
    pub fn bar(&self) -> Matrix {
        self.map(|a| self.ring.bar(a))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `result[j][i] = bar(A[i][j])`.
    pub fn bar_transpose(&self) -> Matrix {
        self.transpose().bar()
    }

    /// `M·x` for a coordinate vector `x`.
    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let r = &self.ring;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)))
            })
            .collect())
    }

    /// Drops the first `drop` rows and columns of a square matrix.
    pub fn trailing_submatrix(&self, drop: usize) -> Result<Matrix> {
        if !self.is_square() || drop >= self.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot drop {drop} from a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.block(drop, drop, self.rows - drop, self.cols - drop))
    }

    /// The `rows×cols` block starting at `(r0, c0)`.
    pub(crate) fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from compatible blocks.
    pub(crate) fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        for m in [b, c, d] {
            same_ring(&a.ring, &m.ring)?;
        }
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible blocks".into()));
        }
        let mut out = Matrix::zeros(&a.ring, a.rows + c.rows, a.cols + b.cols);
        out.paste(0, 0, a);
        out.paste(0, a.cols, b);
        out.paste(a.rows, 0, c);
        out.paste(a.rows, a.cols, d);
        Ok(out)
    }

    pub(crate) fn paste(&mut self, r0: usize, c0: usize, src: &Matrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j).clone());
            }
        }
    }

    /// Block-diagonal `A ⊥ B`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        same_ring(&self.ring, &other.ring)?;
        let mut out = Matrix::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.ring, self.rows)
    }

    /// Rows in the ring's text form, e.g. `[[1,0],[0,1]]`.
    pub fn format_rows(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|x| self.ring.format(x)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(|x| self.ring.scalar_to_json(x)).collect()))
            .collect();
        json!({
            "ring": serde_json::to_value(&self.ring).expect("ring serializes"),
            "rows": self.rows,
            "cols": self.cols,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Matrix> {
        let ring: Ring = serde_json::from_value(v.get("ring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("matrix ring: {e}")))?;
        let entries = rows_from_json(&ring, v.get("entries").unwrap_or(&Value::Null))?;
        let m = Matrix::from_rows(&ring, entries)?;
        let dim = |key: &str| v.get(key).and_then(Value::as_u64).map(|x| x as usize);
        if dim("rows") != Some(m.rows) || (m.rows > 0 && dim("cols") != Some(m.cols)) {
            return Err(Error::Parse("matrix rows/cols disagree with entries".into()));
        }
        Ok(m)
    }

    /// Just the nested entry arrays.
    pub fn entries_json(&self) -> Value {
        self.to_json()["entries"].clone()
    }
}

/// Parses `[[…],…]` into scalar rows.
pub fn rows_from_json(ring: &Ring, v: &Value) -> Result<Vec<Vec<Scalar>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("entries must be an array of rows".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(|x| ring.scalar_from_json(x))
                .collect()
        })
        .collect()
}

/// Parses a flat array of scalars.
pub fn vector_from_json(ring: &Ring, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("vector must be an array".into()))?
        .iter()
        .map(|x| ring.scalar_from_json(x))
        .collect()
}

pub fn vector_to_json(ring: &Ring, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| ring.scalar_to_json(x)).collect())
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_rows())
    }
}

/// `I_k` with `r` added at 1-based position `(i, j)`, `i ≠ j`.
pub fn elem_matrix(ring: &Ring, k: usize, i: usize, j: usize, r: &Scalar) -> Result<Matrix> {
    check_elem_index(k, i, j)?;
    let mut m = Matrix::identity(ring, k);
    m.set(i - 1, j - 1, r.clone());
    Ok(m)
}

fn check_elem_index(k: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > k || j > k {
        return Err(Error::BadIndex(format!("elementary index ({i},{j}) for size {k}")));
    }
    Ok(())
}

/// One off-diagonal transvection `I + r·e_ij`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemFactor {
    pub i: usize,
    pub j: usize,
    pub r: Scalar,
}

/// An ordered product of elementary transvections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryWord {
    ring: Ring,
    size: usize,
    factors: Vec<ElemFactor>,
}

impl ElementaryWord {
    pub fn new(ring: &Ring, size: usize) -> ElementaryWord {
        ElementaryWord {
            ring: ring.clone(),
            size,
            factors: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn factors(&self) -> &[ElemFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn push(&mut self, i: usize, j: usize, r: Scalar) -> Result<()> {
        check_elem_index(self.size, i, j)?;
        self.factors.push(ElemFactor { i, j, r });
        Ok(())
    }

    /// Appends unless `r = 0`.
    pub fn push_nonzero(&mut self, i: usize, j: usize, r: Scalar) -> Result<()> {
        if self.ring.is_zero(&r) {
            check_elem_index(self.size, i, j)
        } else {
            self.push(i, j, r)
        }
    }

    pub fn concat(&self, other: &ElementaryWord) -> Result<ElementaryWord> {
        same_ring(&self.ring, &other.ring)?;
        if self.size != other.size {
            return Err(Error::DimensionMismatch("word sizes differ".into()));
        }
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        Ok(out)
    }

    /// Product of the factors in order; the empty word gives `I`.
    pub fn product(&self) -> Matrix {
        let r = &self.ring;
        let mut m = Matrix::identity(r, self.size);
        // right-multiplying by I + s·e_ij adds s·(column i) to column j
        for f in &self.factors {
            let (ci, cj) = (f.i - 1, f.j - 1);
            for row in 0..self.size {
                let x = m.get(row, ci);
                if r.is_zero(x) {
                    continue;
                }
                let y = r.add(m.get(row, cj), &r.mul(x, &f.r));
                m.set(row, cj, y);
            }
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| json!([f.i, f.j, self.ring.scalar_to_json(&f.r)]))
            .collect();
        json!({ "size": self.size, "factors": factors })
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<ElementaryWord> {
        let size = v
            .get("size")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("word needs \"size\"".into()))? as usize;
        let mut w = ElementaryWord::new(ring, size);
        let factors = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("word needs \"factors\"".into()))?;
        for f in factors {
            let parts = f
                .as_array()
                .filter(|p| p.len() == 3)
                .ok_or_else(|| Error::Parse(format!("bad factor {f}")))?;
            let idx = |p: &Value| {
                p.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Parse(format!("bad factor index {p}")))
            };
            w.push(idx(&parts[0])?, idx(&parts[1])?, ring.scalar_from_json(&parts[2])?)?;
        }
        Ok(w)
    }
}

/// Free-function form of [`ElementaryWord::product`].
pub fn word_product(w: &ElementaryWord) -> Matrix {
    w.product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Involution;

    fn z() -> Ring {
        Ring::integers(Involution::Identity).unwrap()
    }

    #[test]
    fn small_products() {
        let r = Ring::modular(5, Involution::Identity).unwrap();
        let a = Matrix::from_ints(&r, &[&[2]]).unwrap();
        let b = Matrix::from_ints(&r, &[&[3]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), Matrix::identity(&r, 1));
        let m = Matrix::from_ints(&z(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        assert_eq!(Matrix::identity(&z(), 3).mul(&m).unwrap(), m);
    }

    #[test]
    fn mismatches() {
        let a = Matrix::zeros(&z(), 2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
        let other = Matrix::zeros(&Ring::modular(5, Involution::Identity).unwrap(), 3, 2);
        assert!(matches!(a.mul(&other), Err(Error::RingMismatch)));
    }

    #[test]
    fn bar_transpose_variants() {
        let zi = z();
        let m = Matrix::from_ints(&zi, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(m.bar_transpose(), m.transpose());
        let zn = Ring::integers(Involution::Negation).unwrap();
        let m = Matrix::from_ints(&zn, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(m.bar_transpose(), m.transpose().neg());
        let g = Ring::gaussian_mod(3, Involution::TwistI).unwrap();
        let i = g.i_unit().unwrap();
        let m = Matrix::from_rows(&g, vec![vec![g.one(), i.clone()], vec![g.zero(), g.one()]]).unwrap();
        let want = Matrix::from_rows(&g, vec![vec![i.clone(), g.zero()], vec![g.one(), i]]).unwrap();
        assert_eq!(m.bar_transpose(), want);
    }

    #[test]
    fn elementary_generators() {
        let r = z();
        assert_eq!(elem_matrix(&r, 2, 1, 2, &r.zero()).unwrap(), Matrix::identity(&r, 2));
        assert_eq!(
            elem_matrix(&r, 2, 2, 1, &r.int(3)).unwrap(),
            Matrix::from_ints(&r, &[&[1, 0], &[3, 1]]).unwrap()
        );
        assert!(matches!(elem_matrix(&r, 2, 1, 1, &r.one()), Err(Error::BadIndex(_))));
        assert!(matches!(elem_matrix(&r, 2, 3, 1, &r.one()), Err(Error::BadIndex(_))));
        let a = elem_matrix(&r, 3, 1, 2, &r.int(4)).unwrap();
        let b = elem_matrix(&r, 3, 1, 2, &r.int(-7)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), elem_matrix(&r, 3, 1, 2, &r.int(-3)).unwrap());
    }

    #[test]
    fn word_products() {
        let r = z();
        assert_eq!(ElementaryWord::new(&r, 4).product(), Matrix::identity(&r, 4));
        let mut w = ElementaryWord::new(&r, 2);
        w.push(1, 2, r.one()).unwrap();
        w.push(2, 1, r.int(-1)).unwrap();
        w.push(1, 2, r.one()).unwrap();
        assert_eq!(w.product(), Matrix::from_ints(&r, &[&[0, 1], &[-1, 0]]).unwrap());
    }

    #[test]
    fn trailing_submatrix_drops_leading_rows_and_columns() {
        let r = z();
        let m = Matrix::from_ints(&r, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        assert_eq!(m.trailing_submatrix(0).unwrap(), m);
        assert_eq!(m.trailing_submatrix(1).unwrap(), Matrix::from_ints(&r, &[&[5, 6], &[8, 9]]).unwrap());
        assert!(m.trailing_submatrix(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Ring::gaussian(Involution::TwistI).unwrap();
        let m = Matrix::from_rows(&g, vec![vec![g.element(1, -2).unwrap(), g.zero()]]).unwrap();
        assert_eq!(Matrix::from_json(&m.to_json()).unwrap(), m);
        let mut w = ElementaryWord::new(&g, 3);
        w.push(3, 1, g.element(0, 5).unwrap()).unwrap();
        assert_eq!(ElementaryWord::from_json(&g, &w.to_json()).unwrap(), w);
        assert_eq!(w.to_json()["factors"], json!([[3, 1, [0, 5]]]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn ring() -> Ring {
            Ring::gaussian_mod(7, Involution::TwistI).unwrap()
        }

        fn mat(k: usize) -> impl Strategy<Value = Matrix> {
            proptest::collection::vec((0i64..7, 0i64..7), k * k).prop_map(move |xs| {
                let r = ring();
                let entries = xs.into_iter().map(|(a, b)| r.element(a, b).unwrap()).collect();
                Matrix::new(&r, k, k, entries).unwrap()
            })
        }

        fn word(k: usize) -> impl Strategy<Value = ElementaryWord> {
            proptest::collection::vec((1..=k, 1..=k, 0i64..7, 0i64..7), 0..8).prop_map(move |fs| {
                let r = ring();
                let mut w = ElementaryWord::new(&r, k);
                for (i, j, a, b) in fs {
                    if i != j {
                        w.push(i, j, r.element(a, b).unwrap()).unwrap();
                    }
                }
                w
            })
        }

        proptest! {
            #[test]
            fn associative_with_identity(a in mat(3), b in mat(3), c in mat(3)) {
                let i = Matrix::identity(&ring(), 3);
                prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
                prop_assert_eq!(i.mul(&a).unwrap(), a.clone());
                prop_assert_eq!(a.mul(&i).unwrap(), a);
            }

            #[test]
            fn bar_transpose_is_involutive(a in mat(3)) {
                prop_assert_eq!(a.bar_transpose().bar_transpose(), a);
            }

            #[test]
            fn word_product_is_a_homomorphism(w1 in word(4), w2 in word(4)) {
                let joined = w1.concat(&w2).unwrap();
                prop_assert_eq!(joined.product(), w1.product().mul(&w2.product()).unwrap());
            }

            #[test]
            fn elementary_inverse(i in 1usize..=4, j in 1usize..=4, a in 0i64..7, b in 0i64..7) {
                prop_assume!(i != j);
                let r = ring();
                let x = r.element(a, b).unwrap();
                let e = elem_matrix(&r, 4, i, j, &x).unwrap();
                let f = elem_matrix(&r, 4, i, j, &r.neg(&x)).unwrap();
                prop_assert!(e.mul(&f).unwrap().is_identity());
            }
        }
    }
}
