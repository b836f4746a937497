//! Dense integer matrices and exact rational linear algebra.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Row-major integer matrix. Zero rows or columns are allowed so that edge
/// cases such as `d = 0` stay representable; public constructors that need
/// positive dimensions check them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMat { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Like [`from_rows`](Self::from_rows) with an explicit column count, so
    /// a matrix with no rows still knows its width.
    pub fn from_rows_n(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMat { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_cols(cols: &[Vec<i64>], nrows: usize) -> Result<Self> {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::Dimension("ragged columns".into()));
            }
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Shorthand for literal matrices in tests and fixtures.
    pub fn lit(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&v).expect("literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = acc
                        .checked_add(self.get(i, k).checked_mul(other.get(k, j)).expect("overflow"))
                        .expect("overflow");
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul_qvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Q::zero(), |acc, j| acc + q(self.get(i, j)) * &v[j])
            })
            .collect()
    }

    /// Row vector times matrix: `v · M`.
    pub fn vec_mul_q(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.rows, "vector length");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(Q::zero(), |acc, i| acc + &v[i] * q(self.get(i, j)))
            })
            .collect()
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j));
            }
        }
        m
    }

    pub fn vstack(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn to_q(&self) -> Vec<Vec<Q>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| q(self.get(i, j))).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        qla::rank(&self.to_q())
    }

    /// Determinant of a square matrix, computed over Q.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let d = qla::det(&self.to_q());
        crate::rational::to_i64(&d).expect("integral determinant")
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        let inv = qla::inverse(&self.to_q())
            .ok_or_else(|| Error::Degenerate("singular matrix".into()))?;
        let mut m = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = crate::rational::to_i64(&inv[i][j])
                    .ok_or_else(|| Error::Degenerate("matrix is not unimodular".into()))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn neg(&self) -> IntMat {
        IntMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `col[dst] += f * col[src]`
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, f: i64) {
        if f == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src).checked_mul(f).and_then(|x| x.checked_add(self.get(i, dst)));
            self.set(i, dst, v.expect("integer overflow in column operation"));
        }
    }

    /// `row[dst] += f * row[src]`
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, f: i64) {
        if f == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j).checked_mul(f).and_then(|x| x.checked_add(self.get(dst, j)));
            self.set(dst, j, v.expect("integer overflow in row operation"));
        }
    }

    pub(crate) fn neg_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub(crate) fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vecs())
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", r.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Accepts entries as decimal strings or as plain JSON integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntEntry {
    S(String),
    I(i64),
}

impl<'de> Deserialize<'de> for IntMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<IntEntry>>::deserialize(d)?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                row.push(match e {
                    IntEntry::I(v) => v,
                    IntEntry::S(s) => s.trim().parse::<i64>().map_err(de::Error::custom)?,
                });
            }
            out.push(row);
        }
        IntMat::from_rows(&out).map_err(de::Error::custom)
    }
}

/// Exact linear algebra over Q on `Vec<Vec<Q>>` matrices.
pub mod qla {
    use super::*;

    /// Reduced row echelon form and pivot columns.
    pub fn rref(m: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut a: Vec<Vec<Q>> = m.to_vec();
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let t = &a[r][j] * &f;
                        a[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(m: &[Vec<Q>]) -> usize {
        rref(m).1.len()
    }

    pub fn det(m: &[Vec<Q>]) -> Q {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            let inv = a[c][c].recip();
            for i in c + 1..n {
                if !a[i][c].is_zero() {
                    let f = &a[i][c] * &inv;
                    for j in c..n {
                        let t = &a[c][j] * &f;
                        a[i][j] -= t;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
        let n = m.len();
        let aug: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut r = m[i].clone();
                r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        let (r, piv) = rref(&aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Some solution of `m x = b`, free variables set to zero.
    pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
        let cols = m.first().map_or(0, |r| r.len());
        if m.is_empty() {
            return Some(vec![Q::zero(); cols]);
        }
        let aug: Vec<Vec<Q>> = m
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut r = r.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let (r, piv) = rref(&aug);
        if piv.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![Q::zero(); cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r[i][cols].clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
        if m.is_empty() {
            return (0..cols)
                .map(|j| (0..cols).map(|i| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect();
        }
        let (r, piv) = rref(m);
        let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); cols];
                v[f] = Q::one();
                for (i, &p) in piv.iter().enumerate() {
                    v[p] = -r[i][f].clone();
                }
                v
            })
            .collect()
    }

    pub fn transpose(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
        (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
    }

    /// Is `v` in the rational span of `gens`?
    pub fn in_span(gens: &[Vec<Q>], v: &[Q]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        if gens.is_empty() {
            return false;
        }
        let m = transpose(gens, v.len());
        solve(&m, v).is_some()
    }

    pub fn max_abs(v: &[Q]) -> Q {
        v.iter().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_products() {
        let a = IntMat::lit(&[&[1, 2], &[3, 4]]);
        let b = a.mul(&IntMat::identity(2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.det(), -2);
        assert_eq!(a.transpose().get(0, 1), 3);
        assert_eq!(a.mul_vec(&[1, 1]), vec![3, 7]);
    }

    #[test]
    fn nullspace_and_solve() {
        let a = IntMat::lit(&[&[1, 1, 1, 1], &[0, 1, 2, 3]]).to_q();
        let ns = qla::nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &a {
                assert!(crate::rational::dot(r, v).is_zero());
            }
        }
        let x = qla::solve(&a, &[q(1), q(1)]).unwrap();
        assert_eq!(crate::rational::dot(&a[1], &x), q(1));
    }

    #[test]
    fn json_entries_as_strings() {
        let m = IntMat::lit(&[&[-1, 2], &[0, -3]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["-1","2"],["0","-3"]]"#);
        let back: IntMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let plain: IntMat = serde_json::from_str("[[1,2],[3,4]]").unwrap();
        assert_eq!(plain.get(1, 0), 3);
    }
}
