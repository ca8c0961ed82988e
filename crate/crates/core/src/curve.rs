//! Hyperelliptic curves `y^2 = f(x)` over `F_p`: the coefficient matrix
//! `N = (c_{ip-j})`, reduction to an odd-degree model, and classification of
//! the Jacobian from `N`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffpoly::{DensePoly, Fp};
use crate::matrix::FpMatrix;

/// `y^2 = f(x)` with `f` squarefree of degree `2g + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    f: DensePoly,
    genus: usize,
}

impl CurveModel {
    pub fn new(f: DensePoly) -> Result<Self> {
        let deg = f.degree().ok_or(Error::ZeroPolynomial("curve model"))?;
        if deg % 2 == 0 {
            return Err(Error::EvenDegree(deg));
        }
        if deg < 3 {
            return Err(Error::DegreeTooSmall(deg));
        }
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        Ok(CurveModel {
            f,
            genus: (deg - 1) / 2,
        })
    }

    pub fn polynomial(&self) -> &DensePoly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
}

/// Send a rational root of an even-degree `f` to infinity:
/// `u^(2g+2) f(r + 1/u)`, which has degree `2g + 1` and defines an isomorphic
/// curve. Odd-degree input is passed through unchanged.
pub fn odd_degree_model(f: &DensePoly, root: Fp) -> Result<CurveModel> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial("curve model"))?;
    if deg % 2 == 1 {
        return CurveModel::new(f.clone());
    }
    if !f.eval(root)?.is_zero() {
        return Err(Error::NotARoot { root: root.value() });
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    // f(r + v) = sum_{k>=1} a_k v^k, so u^n f(r + 1/u) = sum_k a_k u^(n-k).
    let shifted = f.taylor_shift(root)?;
    let reversed: Vec<u64> = shifted.coeffs()[1..].iter().rev().copied().collect();
    let model = DensePoly::new(f.modulus(), reversed);
    CurveModel::new(model).map_err(|_| Error::NotSquarefree)
}

/// `N = (c_{ip-j})_{1<=i,j<=g}` where `f^((p-1)/2) = sum c_r x^r`.
pub fn coeff_matrix(curve: &CurveModel) -> FpMatrix {
    let m = curve.f.modulus();
    let p = m.value() as usize;
    let g = curve.genus;
    let power = curve.f.pow_truncated((p as u64 - 1) / 2, Some(g * p - 1));
    let rows = (1..=g)
        .map(|i| (1..=g).map(|j| power.coeff(i * p - j).value()).collect())
        .collect();
    FpMatrix::new(m, rows).expect("square by construction")
}

/// Type of the Jacobian as read off from `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    Ordinary,
    Supersingular,
    ProductOfSupersingularEC,
    NonOrdinaryOther,
}

impl Tag {
    pub const ALL: [Tag; 4] = [
        Tag::Ordinary,
        Tag::Supersingular,
        Tag::ProductOfSupersingularEC,
        Tag::NonOrdinaryOther,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Ordinary => "Ordinary",
            Tag::Supersingular => "Supersingular",
            Tag::ProductOfSupersingularEC => "ProductOfSupersingularEC",
            Tag::NonOrdinaryOther => "NonOrdinaryOther",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Classification {
    pub tag: Tag,
    /// Rank of N, an upper bound for the p-rank.
    pub p_rank_upper_bound: usize,
}

impl Classification {
    /// A product of supersingular elliptic curves is in particular supersingular.
    pub fn is_supersingular(&self) -> bool {
        matches!(self.tag, Tag::Supersingular | Tag::ProductOfSupersingularEC)
    }

    pub fn is_ordinary(&self) -> bool {
        self.tag == Tag::Ordinary
    }
}

/// Rank of N over `F_p`; the p-rank of the Jacobian is at most this.
pub fn p_rank_bound(n: &FpMatrix) -> usize {
    n.rank()
}

/// - `det N != 0`: ordinary
/// - `N = 0`: product of supersingular elliptic curves
/// - genus 2 and `N^(p) N = 0`: supersingular
///
/// Anything else is reported as [`Tag::NonOrdinaryOther`]; for genus above 2
/// the vanishing of `N^(p) N` alone does not decide supersingularity.
pub fn classify(n: &FpMatrix) -> Classification {
    let rank = p_rank_bound(n);
    let g = n.dim();
    let tag = if rank == g {
        Tag::Ordinary
    } else if n.is_zero() {
        Tag::ProductOfSupersingularEC
    } else if g == 2 && n.frobenius_twist().mul(n).expect("same shape").is_zero() {
        Tag::Supersingular
    } else {
        Tag::NonOrdinaryOther
    };
    Classification {
        tag,
        p_rank_upper_bound: rank,
    }
}
