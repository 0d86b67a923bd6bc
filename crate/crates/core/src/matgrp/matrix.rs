use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::ff::{Fe, Field, Poly};
use crate::numth::BigNat;

/// Square matrix over a finite field, entries row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    data: Vec<Fe>,
}

/// Serialized as a list of rows of canonical integer encodings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for row in self.data.chunks(self.n.max(1)) {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// Rows in bracket notation, e.g. [[1,2],[0,1]].
impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n.max(1)).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(n: usize, data: Vec<Fe>) -> Matrix {
        assert_eq!(data.len(), n * n, "matrix data must be n*n");
        Matrix { n, data }
    }

    pub fn from_rows(rows: &[&[Fe]]) -> Matrix {
        let n = rows.len();
        let data: Vec<Fe> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Matrix::new(n, data)
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: Fe) -> Matrix {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = c;
        }
        Matrix { n, data }
    }

    pub fn diagonal(entries: &[Fe]) -> Matrix {
        let n = entries.len();
        let mut data = vec![0; n * n];
        for (i, &c) in entries.iter().enumerate() {
            data[i * n + i] = c;
        }
        Matrix { n, data }
    }

    pub fn companion(f: &Poly, field: &Field) -> Matrix {
        let n = f.degree().expect("companion of zero polynomial");
        Matrix {
            n,
            data: f.companion_entries(field),
        }
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut data = vec![0; n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    data[(off + i) * n + off + j] = b.data[i * b.n + j];
                }
            }
            off += b.n;
        }
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, o: &Matrix, f: &Field) -> Matrix {
        let n = self.n;
        debug_assert_eq!(n, o.n);
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let orow = &o.data[k * n..(k + 1) * n];
                let out = &mut data[i * n..(i + 1) * n];
                for j in 0..n {
                    if orow[j] != 0 {
                        out[j] = f.add(out[j], f.mul(a, orow[j]));
                    }
                }
            }
        }
        Matrix { n, data }
    }

    pub fn add(&self, o: &Matrix, f: &Field) -> Matrix {
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn pow(&self, k: &BigNat, f: &Field) -> Matrix {
        let mut result = Matrix::identity(self.n);
        for i in (0..k.bits()).rev() {
            result = result.mul(&result, f);
            if k.bit(i) {
                result = result.mul(self, f);
            }
        }
        result
    }

    pub fn pow_u64(&self, k: u64, f: &Field) -> Matrix {
        self.pow(&BigNat::from(k), f)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() == Some(1)
    }

    /// The scalar c when the matrix equals c * I.
    pub fn is_scalar(&self) -> Option<Fe> {
        let n = self.n;
        if n == 0 {
            return Some(1);
        }
        let c = self.data[0];
        for i in 0..n {
            for j in 0..n {
                let v = self.data[i * n + j];
                if (i == j && v != c) || (i != j && v != 0) {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Row echelon form in place; returns (rank, determinant of the original
    /// when square and full rank, else 0).
    fn eliminate(&self, f: &Field) -> (usize, Fe) {
        let n = self.n;
        let mut m = self.data.clone();
        let mut rank = 0;
        let mut det = 1;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    m.swap(piv * n + j, rank * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[rank * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in rank + 1..n {
                let factor = m[r * n + col];
                if factor == 0 {
                    continue;
                }
                let c = f.mul(factor, inv);
                for j in col..n {
                    let sub = f.mul(c, m[rank * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], sub);
                }
            }
            rank += 1;
        }
        (rank, if rank == n { det } else { 0 })
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.eliminate(f).0
    }

    pub fn det(&self, f: &Field) -> Fe {
        self.eliminate(f).1
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.det(f) != 0
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let n = self.n;
        let w = 2 * n;
        let mut m = vec![0; n * w];
        for i in 0..n {
            m[i * w..i * w + n].copy_from_slice(self.row(i));
            m[i * w + n + i] = 1;
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| m[r * w + col] != 0)?;
            if piv != col {
                for j in 0..w {
                    m.swap(piv * w + j, col * w + j);
                }
            }
            let inv = f.inv(m[col * w + col]);
            for j in 0..w {
                m[col * w + j] = f.mul(m[col * w + j], inv);
            }
            for r in 0..n {
                if r == col || m[r * w + col] == 0 {
                    continue;
                }
                let c = m[r * w + col];
                for j in 0..w {
                    let sub = f.mul(c, m[col * w + j]);
                    m[r * w + j] = f.sub(m[r * w + j], sub);
                }
            }
        }
        let data = (0..n)
            .flat_map(|i| m[i * w + n..i * w + w].to_vec())
            .collect();
        Some(Matrix { n, data })
    }

    /// Image of the column vector `v`.
    pub fn apply(&self, v: &[Fe], f: &Field) -> Vec<Fe> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n).fold(0, |acc, j| f.add(acc, f.mul(self.data[i * n + j], v[j])))
            })
            .collect()
    }

    /// p(self) by Horner's rule.
    pub fn eval_poly(&self, p: &Poly, f: &Field) -> Matrix {
        let mut acc = Matrix::scalar(self.n, 0);
        for &c in p.coeffs.iter().rev() {
            acc = acc.mul(self, f).add(&Matrix::scalar(self.n, c), f);
        }
        acc
    }

    /// Monic characteristic polynomial det(X I - A), via reduction to upper
    /// Hessenberg form followed by the standard determinant recurrence.
    pub fn char_poly(&self, f: &Field) -> Poly {
        let n = self.n;
        let mut h = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h[idx(i, j)] != 0) else {
                continue;
            };
            if piv != j + 1 {
                for c in 0..n {
                    h.swap(idx(piv, c), idx(j + 1, c));
                }
                for r in 0..n {
                    h.swap(idx(r, piv), idx(r, j + 1));
                }
            }
            let inv = f.inv(h[idx(j + 1, j)]);
            for k in j + 2..n {
                let u = f.mul(h[idx(k, j)], inv);
                if u == 0 {
                    continue;
                }
                // row_k -= u row_{j+1}; col_{j+1} += u col_k
                for c in 0..n {
                    let sub = f.mul(u, h[idx(j + 1, c)]);
                    h[idx(k, c)] = f.sub(h[idx(k, c)], sub);
                }
                for r in 0..n {
                    let add = f.mul(u, h[idx(r, k)]);
                    h[idx(r, j + 1)] = f.add(h[idx(r, j + 1)], add);
                }
            }
        }
        // polys[m] = char poly of the leading m x m block.
        let mut polys: Vec<Poly> = vec![Poly::one()];
        for m in 0..n {
            let lin = Poly::from_coeffs(vec![f.neg(h[idx(m, m)]), 1]);
            let mut pm = lin.mul(&polys[m], f);
            let mut t = 1;
            for i in 1..=m {
                t = f.mul(t, h[idx(m - i + 1, m - i)]);
                let c = f.mul(t, h[idx(m - i, m)]);
                if c != 0 {
                    pm = pm.sub(&polys[m - i].scale(c, f), f);
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }

    pub fn conjugate_by(&self, h: &Matrix, h_inv: &Matrix, f: &Field) -> Matrix {
        h.mul(self, f).mul(h_inv, f)
    }
}
