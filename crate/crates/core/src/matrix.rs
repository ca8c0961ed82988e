//! Small square matrices over `F_p` and over `F_p[t]`.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::ffpoly::{DensePoly, Fp, Modulus};

/// Square matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    modulus: Modulus,
    dim: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn new(modulus: Modulus, rows: Vec<Vec<u64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch);
        }
        let data = rows.into_iter().flatten().map(|v| modulus.reduce(v)).collect();
        Ok(FpMatrix { modulus, dim, data })
    }

    pub fn from_i64(modulus: Modulus, rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            modulus,
            rows.iter()
                .map(|r| r.iter().map(|&v| modulus.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zero(modulus: Modulus, dim: usize) -> Self {
        FpMatrix {
            modulus,
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(modulus: Modulus, dim: usize) -> Self {
        let mut m = Self::zero(modulus, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Fp {
        self.modulus.element(self.data[row * self.dim + col])
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: rhs.modulus.value(),
            });
        }
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch);
        }
        let (n, m) = (self.dim, self.modulus);
        let mut out = Self::zero(m, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = m.add(out.data[idx], m.mul(a, rhs.data[k * n + j]));
                }
            }
        }
        Ok(out)
    }

    /// Entrywise p-th power `A^(p)`.
    pub fn frobenius_twist(&self) -> FpMatrix {
        let m = self.modulus;
        FpMatrix {
            modulus: m,
            dim: self.dim,
            data: self.data.iter().map(|&v| m.pow(v, m.value())).collect(),
        }
    }

    /// Row echelon form in place; returns (rank, determinant).
    fn eliminate(&self) -> (usize, u64) {
        let (n, m) = (self.dim, self.modulus);
        let mut a = self.data.clone();
        let mut det = 1 % m.value();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if pivot != rank {
                for j in 0..n {
                    a.swap(pivot * n + j, rank * n + j);
                }
                det = m.neg(det);
            }
            let pv = a[rank * n + col];
            det = m.mul(det, pv);
            let inv = m.inv(pv).expect("nonzero pivot");
            for r in rank + 1..n {
                let factor = m.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = m.sub(a[r * n + j], m.mul(factor, a[rank * n + j]));
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> Fp {
        self.modulus.element(self.eliminate().1)
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        let (n, m) = (self.dim, self.modulus);
        let mut a = self.data.clone();
        let mut inv = Self::identity(m, n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
                inv.swap(pivot * n + j, col * n + j);
            }
            let s = m.inv(a[col * n + col]).expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = m.mul(a[col * n + j], s);
                inv[col * n + j] = m.mul(inv[col * n + j], s);
            }
            for r in 0..n {
                let factor = a[r * n + col];
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = m.sub(a[r * n + j], m.mul(factor, a[col * n + j]));
                    inv[r * n + j] = m.sub(inv[r * n + j], m.mul(factor, inv[col * n + j]));
                }
            }
        }
        Some(FpMatrix {
            modulus: m,
            dim: n,
            data: inv,
        })
    }
}

impl Serialize for FpMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FpMatrix", 2)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("rows", &self.rows())?;
        st.end()
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
            writeln!(f, "[{} ]", cells.join(""))?;
        }
        Ok(())
    }
}

/// Square matrix with entries in `F_p[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    modulus: Modulus,
    dim: usize,
    data: Vec<DensePoly>,
}

impl PolyMatrix {
    pub fn new(modulus: Modulus, rows: Vec<Vec<DensePoly>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch);
        }
        let data: Vec<DensePoly> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|e| e.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: bad.modulus().value(),
            });
        }
        Ok(PolyMatrix { modulus, dim, data })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &DensePoly {
        &self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<DensePoly>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Specialize `t = t0`.
    pub fn eval_at(&self, t0: Fp) -> Result<FpMatrix> {
        let rows = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.eval(t0).map(Fp::value)).collect())
            .collect::<Result<Vec<Vec<u64>>>>()?;
        FpMatrix::new(self.modulus, rows)
    }

    /// Determinant by cofactor expansion (the matrices here are tiny).
    pub fn det(&self) -> DensePoly {
        let idx: Vec<usize> = (0..self.dim).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> DensePoly {
        if cols.is_empty() {
            return DensePoly::one(self.modulus);
        }
        let mut acc = DensePoly::zero(self.modulus);
        for (k, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry * &self.minor_det(&rest, row + 1);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&[u64]>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).coeffs()).collect())
            .collect();
        let mut st = s.serialize_struct("PolyMatrix", 2)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}
