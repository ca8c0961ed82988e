//! Coefficients of `f(x)^((p-1)/2)` for `f` with coefficients in `F_p[t]`.
//!
//! Two independent routes are provided: truncated square-and-multiply over
//! [`BiPoly`], and a direct multinomial expansion specialised to the TTV
//! polynomial `x^5 - 5x^3 + 5x + (2 - 4t)`. The second exists to cross-check
//! the first.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffpoly::{Accumulator, DensePoly, Fp, Modulus};
use crate::matrix::PolyMatrix;

/// Polynomial in `x` whose coefficients are polynomials in `t`.
///
/// `coeffs[k]` is the coefficient of `x^k`; the last entry is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: Vec<DensePoly>,
    modulus: Modulus,
}

impl BiPoly {
    pub fn new(modulus: Modulus, mut coeffs: Vec<DensePoly>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus.value(),
                right: bad.modulus().value(),
            });
        }
        while coeffs.last().is_some_and(DensePoly::is_zero) {
            coeffs.pop();
        }
        Ok(BiPoly { coeffs, modulus })
    }

    /// `rows[k]` lists the t-coefficients of `x^k`, lowest degree first.
    pub fn from_i64_rows(modulus: Modulus, rows: &[&[i64]]) -> Self {
        let coeffs = rows.iter().map(|r| DensePoly::from_i64(modulus, r)).collect();
        Self::new(modulus, coeffs).expect("single modulus")
    }

    /// Lift a polynomial in `x` over `F_p` (constant in `t`).
    pub fn constant_in_t(f: &DensePoly) -> Self {
        let m = f.modulus();
        let coeffs = f.coeffs().iter().map(|&c| DensePoly::constant(m.element(c))).collect();
        BiPoly { coeffs, modulus: m }
    }

    pub fn one(modulus: Modulus) -> Self {
        BiPoly {
            coeffs: vec![DensePoly::one(modulus)],
            modulus,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[DensePoly] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> DensePoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| DensePoly::zero(self.modulus))
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest t-degree among the coefficients.
    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(DensePoly::degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Specialize `t = t0`, giving a polynomial in `x`.
    pub fn eval_t(&self, t0: Fp) -> Result<DensePoly> {
        let vals = self
            .coeffs
            .iter()
            .map(|c| c.eval(t0).map(Fp::value))
            .collect::<Result<Vec<u64>>>()?;
        Ok(DensePoly::new(self.modulus, vals))
    }

    /// Evaluate at `x = x0`, giving a polynomial in `t`.
    pub fn eval_x(&self, x0: Fp) -> Result<DensePoly> {
        let mut acc = DensePoly::zero(self.modulus);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(x0)?.try_add(c)?;
        }
        Ok(acc)
    }

    /// `f(x + shift, t)`.
    pub fn taylor_shift(&self, shift: Fp) -> Result<BiPoly> {
        let m = self.modulus;
        let r = m.element(shift.value());
        let mut out: Vec<DensePoly> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            out.push(DensePoly::zero(m));
            for i in (1..out.len()).rev() {
                out[i] = out[i - 1].try_add(&out[i].scale(r)?)?;
            }
            out[0] = out[0].scale(r)?.try_add(c)?;
        }
        BiPoly::new(m, out)
    }

    /// Move the root `x = root` of an even-degree `f` to infinity:
    /// `u^n f(root + 1/u, t)` with `n = deg_x f`. The root must hold
    /// identically in `t`.
    pub fn root_to_infinity(&self, root: Fp) -> Result<BiPoly> {
        let shifted = self.taylor_shift(root)?;
        if !shifted.coeff(0).is_zero() {
            return Err(Error::NotARoot { root: root.value() });
        }
        let reversed = shifted.coeffs.into_iter().skip(1).rev().collect();
        BiPoly::new(self.modulus, reversed)
    }

    /// Product truncated to x-degree `<= x_cap`.
    ///
    /// The x^k coefficient of a product only involves factor coefficients of
    /// x-degree `<= k`, so every retained coefficient is exact.
    pub fn mul_truncated(&self, rhs: &BiPoly, x_cap: Option<usize>, exec: Exec) -> Result<BiPoly> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: rhs.modulus.value(),
            });
        }
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::new(self.modulus, Vec::new());
        }
        let (la, lb) = (self.coeffs.len(), rhs.coeffs.len());
        let mut len = la + lb - 1;
        if let Some(cap) = x_cap {
            len = len.min(cap + 1);
        }
        let t_len = self.t_degree().unwrap_or(0) + rhs.t_degree().unwrap_or(0) + 1;
        let square = std::ptr::eq(self, rhs);
        let m = self.modulus;
        let coeffs = exec.map_range(len, |k| {
            let lo = k.saturating_sub(lb - 1);
            let hi = k.min(la - 1);
            if square {
                square_coeff(&self.coeffs, k, lo, hi, t_len, m)
            } else {
                let mut acc = Accumulator::new(m, t_len);
                for i in lo..=hi {
                    acc.add_convolution(self.coeffs[i].coeffs(), rhs.coeffs[k - i].coeffs(), 0);
                }
                DensePoly::from_reduced(m, acc.finish())
            }
        });
        BiPoly::new(m, coeffs)
    }

    pub fn pow_truncated(&self, e: u64, x_cap: Option<usize>, exec: Exec) -> BiPoly {
        bipoly_pow_truncated(self, e, x_cap, exec)
    }

    fn truncate(&self, x_cap: Option<usize>) -> BiPoly {
        match x_cap {
            Some(cap) if self.coeffs.len() > cap + 1 => {
                BiPoly::new(self.modulus, self.coeffs[..=cap].to_vec()).expect("same modulus")
            }
            _ => self.clone(),
        }
    }
}

/// x^k coefficient of `a * a` using the symmetry of the pairs.
fn square_coeff(a: &[DensePoly], k: usize, lo: usize, hi: usize, t_len: usize, m: Modulus) -> DensePoly {
    let mut cross = Accumulator::new(m, t_len);
    let mut i = lo;
    while i < k - i && i <= hi {
        cross.add_convolution(a[i].coeffs(), a[k - i].coeffs(), 0);
        i += 1;
    }
    let mut out: Vec<u64> = cross.finish().into_iter().map(|v| m.add(v, v)).collect();
    if k.is_multiple_of(2) && k / 2 >= lo && k / 2 <= hi {
        let mut mid = Accumulator::new(m, t_len);
        let half = a[k / 2].coeffs();
        mid.add_convolution(half, half, 0);
        for (o, v) in out.iter_mut().zip(mid.finish()) {
            *o = m.add(*o, v);
        }
    }
    DensePoly::from_reduced(m, out)
}

/// `f^e` by square-and-multiply, truncating x-degrees above `x_cap` after
/// every product.
pub fn bipoly_pow_truncated(f: &BiPoly, mut e: u64, x_cap: Option<usize>, exec: Exec) -> BiPoly {
    let mut acc = BiPoly::one(f.modulus).truncate(x_cap);
    let mut base = f.truncate(x_cap);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_truncated(&base, x_cap, exec).expect("same modulus");
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_truncated(&base, x_cap, exec).expect("same modulus");
        }
    }
    acc
}

/// True when some specialization `t = t0` keeps the x-degree and is
/// squarefree, which certifies squarefreeness over `F_p(t)`.
pub fn is_generically_squarefree(f: &BiPoly) -> bool {
    let Some(deg) = f.x_degree() else {
        return false;
    };
    let m = f.modulus;
    let lead = &f.coeffs[deg];
    (0..m.value()).any(|t0| {
        let t = m.element(t0);
        lead.eval_raw(t0) != 0 && f.eval_t(t).is_ok_and(|g| g.is_squarefree())
    })
}

/// The g x g matrix `N = (c_{ip-j})` of entries in `F_p[t]`, where
/// `f^((p-1)/2) = sum c_r x^r` and `deg_x f = 2g + 1`.
pub fn extract_coeff_entries(f: &BiPoly, exec: Exec) -> Result<PolyMatrix> {
    let deg = f.x_degree().ok_or(Error::ZeroPolynomial("coefficient matrix"))?;
    if deg % 2 == 0 {
        return Err(Error::EvenDegree(deg));
    }
    if deg < 3 {
        return Err(Error::DegreeTooSmall(deg));
    }
    if !is_generically_squarefree(f) {
        return Err(Error::NotSquarefree);
    }
    let g = (deg - 1) / 2;
    let p = f.modulus.value() as usize;
    let power = bipoly_pow_truncated(f, (p as u64 - 1) / 2, Some(g * p - 1), exec);
    let rows = (1..=g)
        .map(|i| (1..=g).map(|j| power.coeff(i * p - j)).collect())
        .collect();
    PolyMatrix::new(f.modulus, rows)
}

/// Factorials and inverse factorials modulo `p` up to `n < p`.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    modulus: Modulus,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl FactorialTable {
    pub fn new(modulus: Modulus, n: usize) -> Self {
        assert!((n as u64) < modulus.value(), "factorials vanish from p on");
        let mut fact = vec![1u64; n + 1];
        for i in 1..=n {
            fact[i] = modulus.mul(fact[i - 1], i as u64);
        }
        let mut inv_fact = vec![1u64; n + 1];
        inv_fact[n] = modulus.inv(fact[n]).expect("n < p");
        for i in (1..=n).rev() {
            inv_fact[i - 1] = modulus.mul(inv_fact[i], i as u64);
        }
        FactorialTable {
            modulus,
            fact,
            inv_fact,
        }
    }

    pub fn factorial(&self, n: usize) -> u64 {
        self.fact[n]
    }

    /// `(sum parts)! / prod(part!)`.
    pub fn multinomial(&self, parts: &[usize]) -> u64 {
        let total: usize = parts.iter().sum();
        parts
            .iter()
            .fold(self.fact[total], |acc, &k| self.modulus.mul(acc, self.inv_fact[k]))
    }
}

/// One term `(a,b,c,d)! (x^5)^a (-5x^3)^b (5x)^c (2-4t)^d` of the
/// multinomial expansion of the TTV polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultinomialTerm {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    /// `(a,b,c,d)!` mod p.
    pub coefficient: u64,
}

impl MultinomialTerm {
    pub fn x_degree(&self) -> usize {
        5 * self.a + 3 * self.b + self.c
    }
}

/// All terms with `a+b+c+d = (p-1)/2` contributing to `x^r`.
pub fn multinomial_terms(modulus: Modulus, r: usize, table: &FactorialTable) -> Vec<MultinomialTerm> {
    let e = (modulus.value() as usize - 1) / 2;
    let mut terms = Vec::new();
    for a in 0..=(r / 5).min(e) {
        for b in 0..=((r - 5 * a) / 3).min(e - a) {
            let c = r - 5 * a - 3 * b;
            if a + b + c > e {
                continue;
            }
            let d = e - a - b - c;
            terms.push(MultinomialTerm {
                a,
                b,
                c,
                d,
                coefficient: table.multinomial(&[a, b, c, d]),
            });
        }
    }
    terms
}

/// Coefficient of `x^r` in `(x^5 - 5x^3 + 5x + 2 - 4t)^((p-1)/2)` by the
/// multinomial theorem. Out-of-range `r` gives the zero polynomial.
pub fn multinomial_coeff_oracle(p: u64, r: usize) -> Result<DensePoly> {
    let m = Modulus::new(p)?;
    if p <= 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let e = (p as usize - 1) / 2;
    if r > 5 * e {
        return Ok(DensePoly::zero(m));
    }
    let table = FactorialTable::new(m, e);
    // Scalar weight of (2-4t)^d, summed over terms sharing d.
    let mut by_d = vec![0u64; e + 1];
    for term in multinomial_terms(m, r, &table) {
        let mut w = m.mul(term.coefficient, m.pow(5, (term.b + term.c) as u64));
        if term.b % 2 == 1 {
            w = m.neg(w);
        }
        by_d[term.d] = m.add(by_d[term.d], w);
    }
    let base = DensePoly::from_i64(m, &[2, -4]);
    let mut power = DensePoly::one(m);
    let mut acc = DensePoly::zero(m);
    for (d, &w) in by_d.iter().enumerate() {
        if d > 0 {
            power = &power * &base;
        }
        if w != 0 {
            acc = &acc + &power.scale_raw(w);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn ttv_minus(p: u64) -> BiPoly {
        BiPoly::from_i64_rows(m(p), &[&[2, -4], &[5], &[], &[-5], &[], &[1]])
    }

    #[test]
    fn zeroth_and_first_powers() {
        let f = ttv_minus(11);
        assert_eq!(f.pow_truncated(0, Some(21), Exec::Sequential), BiPoly::one(m(11)));
        assert_eq!(f.pow_truncated(1, Some(21), Exec::Sequential), f);
        assert_eq!(f.pow_truncated(1, Some(2), Exec::Sequential), f.truncate(Some(2)));
    }

    #[test]
    fn x10_coefficient_has_t_degree_three_at_p11() {
        let h = ttv_minus(11).pow_truncated(5, Some(21), Exec::Sequential);
        assert_eq!(h.coeff(10).degree(), Some(3));
        assert_eq!(multinomial_coeff_oracle(11, 10).unwrap().degree(), Some(3));
    }

    #[test]
    fn power_respects_degree_bounds() {
        for p in [7u64, 13, 23] {
            let e = (p - 1) / 2;
            let h = ttv_minus(p).pow_truncated(e, None, Exec::Sequential);
            assert_eq!(h.x_degree(), Some(5 * e as usize));
            assert!(h.t_degree().unwrap() <= e as usize);
        }
    }

    #[test]
    fn elliptic_entries() {
        // (x^3+x)^3 has only odd powers; (x^3+x)^2 = x^6 + 2x^4 + x^2.
        let f7 = BiPoly::constant_in_t(&DensePoly::from_i64(m(7), &[0, 1, 0, 1]));
        let n7 = extract_coeff_entries(&f7, Exec::Sequential).unwrap();
        assert!(n7.get(0, 0).is_zero());
        let f5 = BiPoly::constant_in_t(&DensePoly::from_i64(m(5), &[0, 1, 0, 1]));
        let n5 = extract_coeff_entries(&f5, Exec::Sequential).unwrap();
        assert_eq!(n5.get(0, 0), &DensePoly::from_i64(m(5), &[2]));
    }

    #[test]
    fn ttv_split_matrix_is_diagonal() {
        let n = extract_coeff_entries(&ttv_minus(11), Exec::Sequential).unwrap();
        assert!(n.get(0, 1).is_zero());
        assert!(n.get(1, 0).is_zero());
        assert!(!n.get(0, 0).is_zero());
    }

    #[test]
    fn extraction_errors() {
        let even = BiPoly::from_i64_rows(m(7), &[&[1], &[0], &[0], &[0], &[1]]);
        assert_eq!(
            extract_coeff_entries(&even, Exec::Sequential),
            Err(Error::EvenDegree(4))
        );
        // (x^2 + 1)^2 x = x^5 + 2x^3 + x is not squarefree
        let sq = BiPoly::from_i64_rows(m(7), &[&[], &[1], &[], &[2], &[], &[1]]);
        assert_eq!(extract_coeff_entries(&sq, Exec::Sequential), Err(Error::NotSquarefree));
    }

    #[test]
    fn multinomial_table() {
        let t = FactorialTable::new(m(13), 6);
        assert_eq!(t.factorial(6), 720 % 13);
        assert_eq!(t.multinomial(&[2, 2, 1, 1]), 180 % 13);
    }

    #[test]
    fn multinomial_terms_hit_requested_degree() {
        let md = m(19);
        let table = FactorialTable::new(md, 9);
        for r in [17usize, 18, 36, 37] {
            let terms = multinomial_terms(md, r, &table);
            assert!(!terms.is_empty());
            for t in terms {
                assert_eq!(t.x_degree(), r);
                assert_eq!(t.a + t.b + t.c + t.d, 9);
            }
        }
    }

    #[test]
    fn oracle_top_degree_is_one() {
        assert_eq!(multinomial_coeff_oracle(7, 15).unwrap(), DensePoly::one(m(7)));
        assert!(multinomial_coeff_oracle(7, 16).unwrap().is_zero());
        assert_eq!(multinomial_coeff_oracle(5, 1), Err(Error::PrimeTooSmall(5)));
    }

    #[test]
    fn oracle_matches_power_route() {
        for p in [7u64, 11, 13, 19, 29, 31] {
            let pu = p as usize;
            let h = ttv_minus(p).pow_truncated((p - 1) / 2, Some(2 * pu - 1), Exec::Sequential);
            for r in [pu - 2, pu - 1, 2 * pu - 2, 2 * pu - 1] {
                assert_eq!(multinomial_coeff_oracle(p, r).unwrap(), h.coeff(r), "p={p} r={r}");
            }
        }
    }

    #[test]
    fn sequential_and_parallel_products_agree() {
        let f = ttv_minus(41);
        let a = f.pow_truncated(20, Some(81), Exec::Sequential);
        let b = f.pow_truncated(20, Some(81), Exec::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn taylor_shift_and_evaluation() {
        let f = ttv_minus(13);
        let r = m(13).element(11); // -2
        let shifted = f.taylor_shift(r).unwrap();
        assert_eq!(shifted.coeff(0), f.eval_x(r).unwrap());
        for t0 in 0..13 {
            let t = m(13).element(t0);
            assert_eq!(
                shifted.eval_t(t).unwrap(),
                f.eval_t(t).unwrap().taylor_shift(r).unwrap()
            );
        }
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31]).prop_flat_map(|p| {
            prop::collection::vec(prop::collection::vec(0..p, 0..4), 1..=7).prop_map(move |rows| {
                let md = Modulus::new(p).unwrap();
                BiPoly::new(md, rows.into_iter().map(|r| DensePoly::new(md, r)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn truncated_power_agrees_with_full_power(f in arb_bipoly(), e in 0u64..=8, cap in 0usize..30) {
            let full = f.pow_truncated(e, None, Exec::Sequential);
            let capped = f.pow_truncated(e, Some(cap), Exec::Sequential);
            for k in 0..=cap {
                prop_assert_eq!(capped.coeff(k), full.coeff(k));
            }
            prop_assert!(capped.x_degree().is_none_or(|d| d <= cap));
        }

        #[test]
        fn power_matches_repeated_multiplication(f in arb_bipoly(), e in 0u64..=5) {
            let mut naive = BiPoly::one(f.modulus());
            for _ in 0..e {
                naive = naive.mul_truncated(&f.clone(), None, Exec::Sequential).unwrap();
            }
            prop_assert_eq!(f.pow_truncated(e, None, Exec::Sequential), naive);
        }
    }
}
