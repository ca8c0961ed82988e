//! The TTV families
//!
//! ```text
//! C-(t): y^2 = x^5 - 5x^3 + 5x + 2 - 4t
//! C+(t): y^2 = (x + 2)(x^5 - 5x^3 + 5x + 2 - 4t)
//! ```
//!
//! over `F_p[t]`, their parametric coefficient matrices, the shape and degree
//! statements about those matrices, the determinant `d(t)` whose zeros are the
//! non-ordinary locus of `C-`, and fiberwise scans over `t0 in F_p`.
//!
//! `C+` has even degree in `x`; it is always handled through the quintic
//! model obtained by sending its root `x = -2` to infinity.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::curve::{classify, coeff_matrix, odd_degree_model, Classification, Tag};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffpoly::{count_roots, DensePoly, Fp, Modulus, RootMode};
use crate::matrix::{FpMatrix, PolyMatrix};
use crate::powercoeff::{extract_coeff_entries, BiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Behaviour of `p` in `Z[(1 + sqrt 5)/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitClass {
    /// `p = 1, 4 (mod 5)`
    Split,
    /// `p = 2, 3 (mod 5)`
    Inert,
}

impl SplitClass {
    /// `None` for the ramified prime 5.
    pub fn of(p: u64) -> Option<SplitClass> {
        match p % 5 {
            1 | 4 => Some(SplitClass::Split),
            2 | 3 => Some(SplitClass::Inert),
            _ => None,
        }
    }
}

/// Validate `p` as a prime `> 5`.
pub fn family_prime(p: u64) -> Result<(Modulus, SplitClass)> {
    if p <= 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let m = Modulus::new(p)?;
    Ok((m, SplitClass::of(p).expect("p > 5 is unramified")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub sign: Sign,
    pub modulus: Modulus,
    pub split_class: SplitClass,
}

impl FamilySpec {
    pub fn new(sign: Sign, p: u64) -> Result<Self> {
        let (modulus, split_class) = family_prime(p)?;
        Ok(FamilySpec {
            sign,
            modulus,
            split_class,
        })
    }
}

/// Defining polynomial of a family over `F_p[t]`; for `C+` also the
/// rational root `-2` used for the odd-degree model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPolynomial {
    pub poly: BiPoly,
    pub rational_root: Option<Fp>,
}

fn quintic(m: Modulus) -> BiPoly {
    BiPoly::from_i64_rows(m, &[&[2, -4], &[5], &[], &[-5], &[], &[1]])
}

pub fn family_polynomial(sign: Sign, p: u64) -> Result<FamilyPolynomial> {
    let (m, _) = family_prime(p)?;
    let q = quintic(m);
    Ok(match sign {
        Sign::Minus => FamilyPolynomial {
            poly: q,
            rational_root: None,
        },
        Sign::Plus => {
            let linear = BiPoly::from_i64_rows(m, &[&[2], &[1]]);
            FamilyPolynomial {
                poly: linear.mul_truncated(&q, None, Exec::Sequential)?,
                rational_root: Some(m.element_i64(-2)),
            }
        }
    })
}

/// Odd-degree defining polynomial in `F_p[t][x]`: `C-` itself, or the
/// quintic model of `C+`.
pub fn odd_model_polynomial(sign: Sign, p: u64) -> Result<BiPoly> {
    let fam = family_polynomial(sign, p)?;
    match fam.rational_root {
        None => Ok(fam.poly),
        Some(r) => fam.poly.root_to_infinity(r),
    }
}

/// The 2x2 matrix with entries `c_{p-1}, c_{p-2}, c_{2p-1}, c_{2p-2}` in `F_p[t]`.
pub fn parametric_coeff_matrix(sign: Sign, p: u64, exec: Exec) -> Result<PolyMatrix> {
    extract_coeff_entries(&odd_model_polynomial(sign, p)?, exec)
}

/// Coefficient matrix of the fiber at `t = t0`, computed from the specialized
/// curve (not from the parametric matrix). Degenerate fibers give
/// [`Error::NotSquarefree`].
pub fn fiber_matrix(sign: Sign, p: u64, t0: u64) -> Result<FpMatrix> {
    let fam = family_polynomial(sign, p)?;
    let m = fam.poly.modulus();
    let f = fam.poly.eval_t(m.element(t0))?;
    let root = fam.rational_root.unwrap_or_else(|| m.element(0));
    let model = odd_degree_model(&f, root)?;
    Ok(coeff_matrix(&model))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `[[*, 0], [0, *]]`
    Diagonal,
    /// `[[0, *], [*, 0]]`
    Antidiagonal,
    /// `[[a, b - a], [0, b]]`
    UpperWithTie,
    /// `[[a, b], [a, -a]]`
    InertPlus,
}

impl Shape {
    pub fn claimed(sign: Sign, class: SplitClass) -> Shape {
        match (sign, class) {
            (Sign::Minus, SplitClass::Split) => Shape::Diagonal,
            (Sign::Minus, SplitClass::Inert) => Shape::Antidiagonal,
            (Sign::Plus, SplitClass::Split) => Shape::UpperWithTie,
            (Sign::Plus, SplitClass::Inert) => Shape::InertPlus,
        }
    }

    /// Polynomials that must vanish identically, tagged by matrix position.
    fn residuals(self, n: &PolyMatrix) -> Vec<((usize, usize), DensePoly)> {
        let e = |i, j| n.get(i, j).clone();
        match self {
            Shape::Diagonal => vec![((0, 1), e(0, 1)), ((1, 0), e(1, 0))],
            Shape::Antidiagonal => vec![((0, 0), e(0, 0)), ((1, 1), e(1, 1))],
            Shape::UpperWithTie => vec![((1, 0), e(1, 0)), ((0, 1), &e(0, 1) - &(&e(1, 1) - &e(0, 0)))],
            Shape::InertPlus => vec![((1, 0), &e(1, 0) - &e(0, 0)), ((1, 1), &e(1, 1) + &e(0, 0))],
        }
    }
}

/// First place a claimed shape fails: matrix entry and t-degree of the
/// lowest nonzero coefficient of the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShapeWitness {
    pub row: usize,
    pub col: usize,
    pub t_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub p: u64,
    pub sign: Sign,
    pub split_class: SplitClass,
    pub claimed_shape: Shape,
    /// The shape holds as an identity in `F_p[t]`.
    pub holds_identically: bool,
    pub witness: Option<ShapeWitness>,
    /// Inert primes only: every smooth fiber is ordinary or supersingular.
    pub corollary_holds: Option<bool>,
}

/// Test the claimed shape of the parametric matrix.
///
/// For `C+` the matrix is computed in the basis coming from the quintic
/// model, which need not be the basis the shape refers to; the result is
/// recorded but carries no pass/fail meaning on its own.
pub fn verify_shape(sign: Sign, p: u64, exec: Exec) -> Result<ShapeReport> {
    let (_, class) = family_prime(p)?;
    let n = parametric_coeff_matrix(sign, p, exec)?;
    let claimed_shape = Shape::claimed(sign, class);
    let witness = claimed_shape.residuals(&n).into_iter().find_map(|((row, col), r)| {
        r.coeffs()
            .iter()
            .position(|&c| c != 0)
            .map(|t_degree| ShapeWitness { row, col, t_degree })
    });
    let corollary_holds = match class {
        SplitClass::Inert => Some(scan_family(sign, p, exec)?.dichotomy_holds()),
        SplitClass::Split => None,
    };
    Ok(ShapeReport {
        p,
        sign,
        split_class: class,
        claimed_shape,
        holds_identically: witness.is_none(),
        witness,
        corollary_holds,
    })
}

/// A pair of coefficients of `f^((p-1)/2)` for the `C-` polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffPair {
    /// `(c_{p-1}, c_{2p-2})`, the diagonal of N.
    Diagonal,
    /// `(c_{p-2}, c_{2p-1})`, the antidiagonal of N.
    Antidiagonal,
}

impl CoeffPair {
    pub fn indices(self, p: u64) -> (u64, u64) {
        match self {
            CoeffPair::Diagonal => (p - 1, 2 * p - 2),
            CoeffPair::Antidiagonal => (p - 2, 2 * p - 1),
        }
    }

    /// The pair the printed congruence statement says vanishes.
    pub fn as_printed(class: SplitClass) -> CoeffPair {
        match class {
            SplitClass::Split => CoeffPair::Diagonal,
            SplitClass::Inert => CoeffPair::Antidiagonal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RemarkReport {
    pub p: u64,
    pub split_class: SplitClass,
    /// Which pair vanishes identically mod p (`None` if neither or both).
    pub vanishing_pair: Option<CoeffPair>,
    pub matches_remark_as_printed: bool,
}

/// Determine which coefficient pair of the `C-` power vanishes mod p and
/// compare with the printed case assignment.
pub fn congruence_remark_check(p: u64, exec: Exec) -> Result<RemarkReport> {
    let (_, class) = family_prime(p)?;
    let n = parametric_coeff_matrix(Sign::Minus, p, exec)?;
    let diag = n.get(0, 0).is_zero() && n.get(1, 1).is_zero();
    let anti = n.get(0, 1).is_zero() && n.get(1, 0).is_zero();
    let vanishing_pair = match (diag, anti) {
        (true, false) => Some(CoeffPair::Diagonal),
        (false, true) => Some(CoeffPair::Antidiagonal),
        _ => None,
    };
    Ok(RemarkReport {
        p,
        split_class: class,
        vanishing_pair,
        matches_remark_as_printed: vanishing_pair == Some(CoeffPair::as_printed(class)),
    })
}

/// `d(t) = det N(t)` for `C-` with its root counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdtReport {
    pub p: u64,
    pub d: DensePoly,
    pub degree: usize,
    pub distinct_roots_closure: usize,
    pub rational_roots: usize,
    pub leading_coeff: u64,
}

pub fn ddt(p: u64, exec: Exec) -> Result<DdtReport> {
    ddt_from_matrix(p, &parametric_coeff_matrix(Sign::Minus, p, exec)?)
}

pub(crate) fn ddt_from_matrix(p: u64, n: &PolyMatrix) -> Result<DdtReport> {
    let d = n.det();
    let degree = d.degree().ok_or(Error::ZeroPolynomial("d(t)"))?;
    Ok(DdtReport {
        p,
        degree,
        distinct_roots_closure: count_roots(&d, RootMode::Closure)?,
        rational_roots: count_roots(&d, RootMode::Rational)?,
        leading_coeff: d.leading_coeff().map_or(0, Fp::value),
        d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub p: u64,
    /// `p = 5k + 1` or `p = 5k - 1`.
    pub k: u64,
    pub plus_one: bool,
    /// Degree of `c_{p-1}`.
    pub deg_a: Option<usize>,
    /// Degree of `c_{2p-2}`.
    pub deg_b: Option<usize>,
    pub expected_a: usize,
    pub expected_b: usize,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.deg_a == Some(self.expected_a) && self.deg_b == Some(self.expected_b)
    }
}

/// Expected degrees of the diagonal entries for a split prime:
/// `3k/2, k/2` when `p = 5k + 1` and `3k/2 - 1, k/2 - 1` when `p = 5k - 1`.
pub fn expected_diagonal_degrees(p: u64) -> Result<(u64, bool, usize, usize)> {
    let (_, class) = family_prime(p)?;
    if class == SplitClass::Inert {
        return Err(Error::InertPrime(p));
    }
    Ok(if p % 5 == 1 {
        let k = (p - 1) / 5;
        (k, true, (3 * k / 2) as usize, (k / 2) as usize)
    } else {
        let k = (p + 1) / 5;
        (k, false, (3 * k / 2 - 1) as usize, (k / 2 - 1) as usize)
    })
}

pub fn degree_lemma_check(p: u64, exec: Exec) -> Result<LemmaReport> {
    let (k, plus_one, expected_a, expected_b) = expected_diagonal_degrees(p)?;
    let n = parametric_coeff_matrix(Sign::Minus, p, exec)?;
    Ok(LemmaReport {
        p,
        k,
        plus_one,
        deg_a: n.get(0, 0).degree(),
        deg_b: n.get(1, 1).degree(),
        expected_a,
        expected_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub t0: u64,
    /// `None` when the fiber is singular.
    pub classification: Option<Classification>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub sign: Sign,
    pub split_class: SplitClass,
    pub fibers: Vec<Fiber>,
    pub counts: BTreeMap<Tag, usize>,
    pub exceptional_t0: Vec<u64>,
}

impl ScanReport {
    /// No smooth fiber falls outside {ordinary, supersingular}.
    pub fn dichotomy_holds(&self) -> bool {
        self.count(Tag::NonOrdinaryOther) == 0
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.counts.get(&tag).copied().unwrap_or(0)
    }

    pub fn non_ordinary(&self) -> usize {
        self.fibers
            .iter()
            .filter(|f| f.classification.is_some_and(|c| !c.is_ordinary()))
            .count()
    }
}

/// Classify every fiber `t0 in F_p`, skipping singular ones.
pub fn scan_family(sign: Sign, p: u64, exec: Exec) -> Result<ScanReport> {
    let (_, class) = family_prime(p)?;
    let results = exec.map_range(p as usize, |t0| match fiber_matrix(sign, p, t0 as u64) {
        Ok(n) => Ok(Some(classify(&n))),
        Err(Error::NotSquarefree) => Ok(None),
        Err(e) => Err(e),
    });
    let mut fibers = Vec::with_capacity(p as usize);
    let mut counts = BTreeMap::new();
    let mut exceptional_t0 = Vec::new();
    for (t0, r) in results.into_iter().enumerate() {
        let classification = r?;
        match classification {
            Some(c) => *counts.entry(c.tag).or_insert(0) += 1,
            None => exceptional_t0.push(t0 as u64),
        }
        fibers.push(Fiber {
            t0: t0 as u64,
            classification,
        });
    }
    Ok(ScanReport {
        p,
        sign,
        split_class: class,
        fibers,
        counts,
        exceptional_t0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEQ: Exec = Exec::Sequential;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    #[test]
    fn minus_polynomial_mod_7() {
        let f = family_polynomial(Sign::Minus, 7).unwrap();
        assert_eq!(
            f.poly,
            BiPoly::from_i64_rows(m(7), &[&[2, 3], &[5], &[], &[2], &[], &[1]])
        );
        assert!(f.rational_root.is_none());
    }

    #[test]
    fn plus_polynomial_vanishes_at_minus_two() {
        let f = family_polynomial(Sign::Plus, 7).unwrap();
        assert_eq!(f.poly.x_degree(), Some(6));
        assert!(f.poly.eval_x(f.rational_root.unwrap()).unwrap().is_zero());
        let model = odd_model_polynomial(Sign::Plus, 7).unwrap();
        assert_eq!(model.x_degree(), Some(5));
        // leading coefficient of the model is h(-2) = -4t
        assert_eq!(model.coeff(5), DensePoly::from_i64(m(7), &[0, -4]));
    }

    #[test]
    fn small_primes_rejected() {
        for p in [2u64, 3, 5] {
            assert_eq!(family_polynomial(Sign::Minus, p), Err(Error::PrimeTooSmall(p)));
        }
        assert_eq!(family_polynomial(Sign::Minus, 9), Err(Error::NotOddPrime(9)));
    }

    #[test]
    fn minus_fiber_at_zero_mod_11_is_squarefree() {
        let f = family_polynomial(Sign::Minus, 11)
            .unwrap()
            .poly
            .eval_t(m(11).element(0))
            .unwrap();
        let g = crate::ffpoly::poly_gcd(&f, &f.derivative()).unwrap();
        // 2 is a critical value of x^5 - 5x^3 + 5x, so t0 = 0 is singular.
        assert_eq!(g.degree(), Some(2));
        assert!(!f.is_squarefree());
        let f2 = family_polynomial(Sign::Minus, 11)
            .unwrap()
            .poly
            .eval_t(m(11).element(2))
            .unwrap();
        assert!(crate::ffpoly::poly_gcd(&f2, &f2.derivative()).unwrap().is_constant());
    }

    #[test]
    fn parametric_shapes() {
        let n11 = parametric_coeff_matrix(Sign::Minus, 11, SEQ).unwrap();
        assert!(n11.get(0, 1).is_zero() && n11.get(1, 0).is_zero());
        assert_eq!(n11.get(0, 0).degree(), Some(3));
        assert_eq!(n11.get(1, 1).degree(), Some(1));
        let n7 = parametric_coeff_matrix(Sign::Minus, 7, SEQ).unwrap();
        assert!(n7.get(0, 0).is_zero() && n7.get(1, 1).is_zero());
    }

    #[test]
    fn shape_reports() {
        let r = verify_shape(Sign::Minus, 11, SEQ).unwrap();
        assert!(r.holds_identically);
        assert_eq!(r.claimed_shape, Shape::Diagonal);
        assert_eq!(r.corollary_holds, None);
        for p in [7u64, 13] {
            let r = verify_shape(Sign::Minus, p, SEQ).unwrap();
            assert!(r.holds_identically);
            assert_eq!(r.claimed_shape, Shape::Antidiagonal);
            assert_eq!(r.corollary_holds, Some(true));
        }
    }

    #[test]
    fn remark_pairs() {
        let r11 = congruence_remark_check(11, SEQ).unwrap();
        assert_eq!(r11.vanishing_pair, Some(CoeffPair::Antidiagonal));
        assert!(!r11.matches_remark_as_printed);
        let r7 = congruence_remark_check(7, SEQ).unwrap();
        assert_eq!(r7.vanishing_pair, Some(CoeffPair::Diagonal));
        let r19 = congruence_remark_check(19, SEQ).unwrap();
        assert_eq!(r19.vanishing_pair, r11.vanishing_pair);
    }

    #[test]
    fn ddt_examples() {
        let d11 = ddt(11, SEQ).unwrap();
        assert_eq!((d11.degree, d11.distinct_roots_closure), (4, 3));
        assert_eq!(ddt(7, SEQ).unwrap().degree, 2);
        let d29 = ddt(29, SEQ).unwrap();
        assert_eq!((d29.degree, d29.distinct_roots_closure), (10, 10));
        for r in [&d11, &d29] {
            assert!(r.rational_roots <= r.distinct_roots_closure);
            assert!(r.distinct_roots_closure <= r.degree);
        }
    }

    #[test]
    fn lemma_examples() {
        let r = degree_lemma_check(11, SEQ).unwrap();
        assert_eq!((r.k, r.deg_a, r.deg_b), (2, Some(3), Some(1)));
        assert!(r.holds());
        let r = degree_lemma_check(19, SEQ).unwrap();
        assert_eq!((r.k, r.deg_a, r.deg_b), (4, Some(5), Some(1)));
        assert!(r.holds());
        let r = degree_lemma_check(31, SEQ).unwrap();
        assert_eq!((r.k, r.deg_a, r.deg_b), (6, Some(9), Some(3)));
        assert_eq!(ddt(31, SEQ).unwrap().degree, 12);
        assert_eq!(degree_lemma_check(7, SEQ), Err(Error::InertPrime(7)));
    }

    #[test]
    fn scans() {
        let s7 = scan_family(Sign::Minus, 7, SEQ).unwrap();
        assert_eq!(s7.fibers.len(), 7);
        assert!(s7.dichotomy_holds());
        assert_eq!(s7.counts.values().sum::<usize>(), 7 - s7.exceptional_t0.len());

        let s11 = scan_family(Sign::Minus, 11, SEQ).unwrap();
        assert_eq!(s11.non_ordinary(), ddt(11, SEQ).unwrap().rational_roots);

        for p in [7u64, 13] {
            assert!(scan_family(Sign::Plus, p, SEQ).unwrap().dichotomy_holds());
        }
    }

    #[test]
    fn singular_fibers() {
        // C-: t0 = 0, 1 (constant term +-2 are the critical values);
        // C+: additionally t0 = 0 merges the root -2.
        assert_eq!(scan_family(Sign::Minus, 13, SEQ).unwrap().exceptional_t0, vec![0, 1]);
        assert_eq!(scan_family(Sign::Plus, 13, SEQ).unwrap().exceptional_t0, vec![0, 1]);
        assert_eq!(fiber_matrix(Sign::Minus, 13, 1), Err(Error::NotSquarefree));
    }

    #[test]
    fn specialization_commutes() {
        for sign in [Sign::Minus, Sign::Plus] {
            for p in crate::ffpoly::primes_between(7, 31) {
                let n = parametric_coeff_matrix(sign, p, SEQ).unwrap();
                for t0 in 0..p {
                    match fiber_matrix(sign, p, t0) {
                        Ok(direct) => assert_eq!(n.eval_at(m(p).element(t0)).unwrap(), direct),
                        Err(e) => assert_eq!(e, Error::NotSquarefree),
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        assert_eq!(
            scan_family(Sign::Plus, 23, Exec::Parallel).unwrap(),
            scan_family(Sign::Plus, 23, SEQ).unwrap()
        );
    }
}
