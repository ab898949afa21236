//! Dense matrices over a finite field.

use std::fmt;

use super::field::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

/// Largest supported row or column count.
pub const MAX_SIDE: usize = 4096;

/// A dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Mat,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {:?} {}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|x| x.value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

fn check_side(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_SIDE {
        return Err(Error::MatrixTooLarge(rows));
    }
    if cols > MAX_SIDE {
        return Err(Error::MatrixTooLarge(cols));
    }
    Ok(())
}

impl Mat {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Result<Self> {
        check_side(rows, cols)?;
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        })
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Result<Self> {
        let mut m = Self::zeros(field, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = FieldElem::ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from integer encodings, validating each entry.
    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        check_side(rows.len(), cols)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for &v in r {
                data.push(field.elem(v as u64)?);
            }
        }
        Ok(Mat {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from already-validated elements.
    pub fn from_elems(field: &FieldSpec, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self> {
        check_side(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.value() >= field.q()) {
            return Err(Error::ElementOutOfRange {
                value: bad.value() as u64,
                q: field.q(),
            });
        }
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub(crate) fn from_elems_unchecked(field: &FieldSpec, rows: usize, cols: usize, data: Vec<FieldElem>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn elems(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    /// Entries as integer encodings, row by row.
    pub fn to_u32_rows(&self) -> Vec<Vec<u32>> {
        self.iter_rows()
            .map(|r| r.iter().map(|x| x.value()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut data = vec![FieldElem::ZERO; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        Mat::from_elems_unchecked(&self.field, self.cols, self.rows, data)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols)?;
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if !a.is_zero() {
                    // dst += a * other[k]  ==  dst -= (-a) * other[k]
                    f.sub_scaled(dst, f.neg(a), other.row(k));
                }
            }
        }
        Ok(out)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        check_side(self.rows + other.rows, self.cols)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat::from_elems_unchecked(
            &self.field,
            self.rows + other.rows,
            self.cols,
            data,
        ))
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Mat::from_elems_unchecked(&self.field, self.rows, cols.len(), data)
    }

    /// The first `rows` rows.
    pub(crate) fn truncate_rows(mut self, rows: usize) -> Mat {
        self.data.truncate(rows * self.cols);
        self.rows = rows;
        self
    }

    /// Reduced row echelon form. Pivots are chosen as the first nonzero entry
    /// scanning top to bottom, so the output is canonical.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, &mut m.data, m.rows, m.cols);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut scratch = self.data.clone();
        rank_in_place(&self.field, &mut scratch, self.rows, self.cols)
    }

    /// A basis (as rows) of `{x : self * x^T = 0}`.
    pub fn right_kernel_basis(&self) -> Mat {
        let Rref { matrix: r, pivots } = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![None; n];
        for (i, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(i);
        }
        let free: Vec<usize> = (0..n).filter(|&c| is_pivot[c].is_none()).collect();
        let f = &self.field;
        let mut data = vec![FieldElem::ZERO; free.len() * n];
        for (b, &fc) in free.iter().enumerate() {
            let row = &mut data[b * n..(b + 1) * n];
            row[fc] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                row[pc] = f.neg(r.get(i, fc));
            }
        }
        Mat::from_elems_unchecked(f, free.len(), n, data)
    }

    /// Parses the matrix text format: a header line `q rows cols`, then `rows`
    /// lines of `cols` integers. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Mat> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        let nums = parse_ints(hline, header)?;
        let [q, rows, cols] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header needs `q rows cols`, got {} fields", nums.len()),
            });
        };
        let field = FieldSpec::from_order(q)?;
        check_side(rows as usize, cols as usize)?;
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for r in 0..rows {
            let (ln, l) = lines.next().ok_or(Error::Parse {
                line: 0,
                msg: format!("expected {rows} rows, found {r}"),
            })?;
            let vals = parse_ints(ln, l)?;
            if vals.len() != cols as usize {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {cols} entries, found {}", vals.len()),
                });
            }
            for v in vals {
                data.push(field.elem(v).map_err(|e| Error::Parse {
                    line: ln,
                    msg: e.to_string(),
                })?);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                msg: "trailing data after the last row".into(),
            });
        }
        Ok(Mat::from_elems_unchecked(&field, rows as usize, cols as usize, data))
    }

    /// Renders the matrix text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q(), self.rows, self.cols);
        for r in self.iter_rows() {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a non-negative integer: {t:?}"),
            })
        })
        .collect()
}

#[inline]
fn two_rows(data: &mut [FieldElem], cols: usize, a: usize, b: usize) -> (&mut [FieldElem], &mut [FieldElem]) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = data.split_at_mut(b * cols);
        (&mut lo[a * cols..(a + 1) * cols], &mut hi[..cols])
    } else {
        let (lo, hi) = data.split_at_mut(a * cols);
        (&mut hi[..cols], &mut lo[b * cols..(b + 1) * cols])
    }
}

/// Gauss-Jordan elimination on a row-major buffer; returns the pivot columns.
pub(crate) fn rref_in_place(f: &FieldSpec, data: &mut [FieldElem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            let (a, b) = two_rows(data, cols, pr, r);
            a.swap_with_slice(b);
        }
        let inv = f.inv_nonzero(data[r * cols + c]);
        f.scale(&mut data[r * cols + c..(r + 1) * cols], inv);
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if !factor.is_zero() {
                let (dst, src) = two_rows(data, cols, i, r);
                f.sub_scaled(&mut dst[c..], factor, &src[c..]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Forward elimination only; destroys `data` and returns the rank.
pub(crate) fn rank_in_place(f: &FieldSpec, data: &mut [FieldElem], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            let (a, b) = two_rows(data, cols, pr, r);
            a.swap_with_slice(b);
        }
        let inv = f.inv_nonzero(data[r * cols + c]);
        for i in r + 1..rows {
            let lead = data[i * cols + c];
            if !lead.is_zero() {
                let factor = f.mul(lead, inv);
                let (dst, src) = two_rows(data, cols, i, r);
                f.sub_scaled(&mut dst[c..], factor, &src[c..]);
            }
        }
        r += 1;
    }
    r
}
