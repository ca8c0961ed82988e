//! Prime-field arithmetic and dense univariate polynomials over `F_p`.
//!
//! Residues inside polynomials are stored as raw `u64` values in `[0, p)`;
//! the polynomial carries its [`Modulus`] once and every binary operation
//! checks that both operands live over the same prime. Standalone residues
//! are wrapped in [`Fp`], which carries its modulus with it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

const MAX_MODULUS: u64 = 1 << 62;

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in the closed interval `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// An odd prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Modulus(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    pub fn from_i64(self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.0) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.0 - 2))
    }

    pub fn element(self, value: u64) -> Fp {
        Fp {
            value: self.reduce(value),
            modulus: self,
        }
    }

    pub fn element_i64(self, value: i64) -> Fp {
        Fp {
            value: self.from_i64(value),
            modulus: self,
        }
    }

    /// How many products of two residues fit in a `u128` accumulator.
    fn accumulation_limit(self) -> usize {
        let m = (self.0 - 1) as u128;
        let max_product = (m * m).max(1);
        // one slot of headroom for the reduced value left behind by a flush
        (u128::MAX / max_product - 1).min(usize::MAX as u128) as usize
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_same(a: Modulus, b: Modulus) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModulusMismatch { left: a.0, right: b.0 })
    }
}

/// A residue modulo an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: Modulus,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        Ok(Modulus::new(p)?.element_i64(value))
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn try_add(self, rhs: Fp) -> Result<Fp> {
        check_same(self.modulus, rhs.modulus)?;
        Ok(self.with(self.modulus.add(self.value, rhs.value)))
    }

    pub fn try_sub(self, rhs: Fp) -> Result<Fp> {
        check_same(self.modulus, rhs.modulus)?;
        Ok(self.with(self.modulus.sub(self.value, rhs.value)))
    }

    pub fn try_mul(self, rhs: Fp) -> Result<Fp> {
        check_same(self.modulus, rhs.modulus)?;
        Ok(self.with(self.modulus.mul(self.value, rhs.value)))
    }

    pub fn inv(self) -> Result<Fp> {
        Ok(self.with(self.modulus.inv(self.value)?))
    }

    /// Square-and-multiply.
    pub fn pow(self, e: u64) -> Fp {
        self.with(self.modulus.pow(self.value, e))
    }

    fn with(self, value: u64) -> Fp {
        Fp {
            value,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.try_add(rhs).expect("Fp addition")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.try_sub(rhs).expect("Fp subtraction")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.try_mul(rhs).expect("Fp multiplication")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        self.with(self.modulus.neg(self.value))
    }
}

/// Wide accumulator for sums of residue products with lazy reduction.
pub(crate) struct Accumulator {
    buf: Vec<u128>,
    pending: usize,
    limit: usize,
    modulus: Modulus,
}

impl Accumulator {
    pub(crate) fn new(modulus: Modulus, len: usize) -> Self {
        Accumulator {
            buf: vec![0; len],
            pending: 0,
            limit: modulus.accumulation_limit(),
            modulus,
        }
    }

    fn flush(&mut self) {
        let p = self.modulus.value() as u128;
        for v in &mut self.buf {
            *v %= p;
        }
        self.pending = 0;
    }

    /// buf[offset + i + j] += a[i] * b[j], dropping indices past the buffer.
    pub(crate) fn add_convolution(&mut self, a: &[u64], b: &[u64], offset: usize) {
        if a.is_empty() || b.is_empty() || offset >= self.buf.len() {
            return;
        }
        let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut row = 0;
        while row < a.len() {
            if self.pending >= self.limit {
                self.flush();
            }
            let take = (self.limit - self.pending).min(a.len() - row);
            for (i, &ai) in a[row..row + take].iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let start = offset + row + i;
                if start >= self.buf.len() {
                    break;
                }
                let end = (self.buf.len() - start).min(b.len());
                let ai = ai as u128;
                for (d, &bj) in self.buf[start..start + end].iter_mut().zip(&b[..end]) {
                    *d += ai * bj as u128;
                }
            }
            self.pending += take;
            row += take;
        }
    }

    pub(crate) fn finish(self) -> Vec<u64> {
        let p = self.modulus.value() as u128;
        self.buf.into_iter().map(|v| (v % p) as u64).collect()
    }
}

/// Root-counting mode for [`count_roots`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMode {
    /// Distinct roots in `F_p`.
    Rational,
    /// Distinct roots in an algebraic closure of `F_p`.
    Closure,
}

/// Dense polynomial over `F_p`, lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<u64>,
    modulus: Modulus,
}

impl DensePoly {
    pub fn new(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c = modulus.reduce(*c);
        }
        Self::from_reduced(modulus, coeffs)
    }

    pub(crate) fn from_reduced(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePoly { coeffs, modulus }
    }

    pub fn from_i64(modulus: Modulus, coeffs: &[i64]) -> Self {
        Self::from_reduced(modulus, coeffs.iter().map(|&c| modulus.from_i64(c)).collect())
    }

    pub fn zero(modulus: Modulus) -> Self {
        DensePoly {
            coeffs: Vec::new(),
            modulus,
        }
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::constant(modulus.element(1))
    }

    pub fn constant(c: Fp) -> Self {
        Self::from_reduced(c.modulus(), vec![c.value()])
    }

    /// `c * x^degree`.
    pub fn monomial(c: Fp, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c.value();
        Self::from_reduced(c.modulus(), coeffs)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.modulus.element(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<Fp> {
        self.coeffs.last().map(|&c| self.modulus.element(c))
    }

    pub(crate) fn eval_raw(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    pub fn eval(&self, x: Fp) -> Result<Fp> {
        check_same(self.modulus, x.modulus())?;
        Ok(self.modulus.element(self.eval_raw(x.value())))
    }

    pub fn try_add(&self, rhs: &DensePoly) -> Result<DensePoly> {
        check_same(self.modulus, rhs.modulus)?;
        let m = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                m.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    rhs.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(Self::from_reduced(m, coeffs))
    }

    pub fn try_sub(&self, rhs: &DensePoly) -> Result<DensePoly> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> DensePoly {
        let m = self.modulus;
        DensePoly {
            coeffs: self.coeffs.iter().map(|&c| m.neg(c)).collect(),
            modulus: m,
        }
    }

    pub fn scale(&self, c: Fp) -> Result<DensePoly> {
        check_same(self.modulus, c.modulus())?;
        Ok(self.scale_raw(c.value()))
    }

    pub(crate) fn scale_raw(&self, c: u64) -> DensePoly {
        let m = self.modulus;
        Self::from_reduced(m, self.coeffs.iter().map(|&a| m.mul(a, c)).collect())
    }

    /// Product, optionally truncated to degree `<= degree_cap`.
    pub fn mul_truncated(&self, rhs: &DensePoly, degree_cap: Option<usize>) -> Result<DensePoly> {
        check_same(self.modulus, rhs.modulus)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.modulus));
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(cap) = degree_cap {
            len = len.min(cap + 1);
        }
        let mut acc = Accumulator::new(self.modulus, len);
        acc.add_convolution(&self.coeffs, &rhs.coeffs, 0);
        Ok(Self::from_reduced(self.modulus, acc.finish()))
    }

    /// `self^e` by square-and-multiply, truncated to degree `<= degree_cap`.
    pub fn pow_truncated(&self, mut e: u64, degree_cap: Option<usize>) -> DensePoly {
        let mut acc = Self::one(self.modulus);
        let mut base = self.truncate(degree_cap);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, degree_cap).expect("same modulus");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, degree_cap).expect("same modulus");
            }
        }
        acc.truncate(degree_cap)
    }

    fn truncate(&self, degree_cap: Option<usize>) -> DensePoly {
        match degree_cap {
            Some(cap) if self.coeffs.len() > cap + 1 => Self::from_reduced(self.modulus, self.coeffs[..=cap].to_vec()),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> DensePoly {
        let m = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| m.mul(m.reduce(i as u64), c))
            .collect();
        Self::from_reduced(m, coeffs)
    }

    pub fn div_rem(&self, divisor: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        check_same(self.modulus, divisor.modulus)?;
        let m = self.modulus;
        let dl = divisor.coeffs.len();
        if dl == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() < dl {
            return Ok((Self::zero(m), self.clone()));
        }
        let lead_inv = m.inv(divisor.coeffs[dl - 1])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let c = m.mul(rem[k + dl - 1], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = m.sub(rem[k + j], m.mul(c, d));
            }
        }
        rem.truncate(dl - 1);
        Ok((Self::from_reduced(m, quot), Self::from_reduced(m, rem)))
    }

    pub fn rem(&self, divisor: &DensePoly) -> Result<DensePoly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> DensePoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => self.scale_raw(self.modulus.inv(lead).expect("nonzero lead")),
        }
    }

    /// `f(x + shift)`.
    pub fn taylor_shift(&self, shift: Fp) -> Result<DensePoly> {
        check_same(self.modulus, shift.modulus())?;
        let m = self.modulus;
        let r = shift.value();
        let mut out: Vec<u64> = Vec::with_capacity(self.coeffs.len());
        for &c in self.coeffs.iter().rev() {
            // out = out * (x + r) + c
            out.push(0);
            for i in (1..out.len()).rev() {
                out[i] = m.add(out[i - 1], m.mul(out[i], r));
            }
            out[0] = m.add(m.mul(out[0], r), c);
        }
        Ok(Self::from_reduced(m, out))
    }

    /// `base^e mod self`, by square-and-multiply in `F_p[x]/(self)`.
    pub fn pow_mod(&self, base: &DensePoly, mut e: u64) -> Result<DensePoly> {
        let mut acc = DensePoly::one(self.modulus).rem(self)?;
        let mut b = base.rem(self)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&b, None)?.rem(self)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_truncated(&b, None)?.rem(self)?;
            }
        }
        Ok(acc)
    }

    /// True when the polynomial has no repeated factor over the closure.
    ///
    /// Nonzero constants count as squarefree.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        poly_gcd(self, &d).map(|g| g.is_constant()).unwrap_or(false)
    }

    /// Inverse of the Frobenius `h(x) -> h(x)^p` on a polynomial in `x^p`.
    fn pth_root(&self) -> DensePoly {
        let p = self.modulus.value() as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Self::from_reduced(self.modulus, coeffs)
    }
}

impl Serialize for DensePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DensePoly", 2)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("coefficients", &self.coeffs)?;
        st.end()
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}*t")?,
                _ if c == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        self.try_add(rhs).expect("DensePoly addition")
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        self.try_sub(rhs).expect("DensePoly subtraction")
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        self.mul_truncated(rhs, None).expect("DensePoly multiplication")
    }
}

/// Product of `a` and `b`, truncated to degree `<= degree_cap` when given.
pub fn poly_mul(a: &DensePoly, b: &DensePoly, degree_cap: Option<usize>) -> Result<DensePoly> {
    a.mul_truncated(b, degree_cap)
}

/// Monic gcd by the Euclidean algorithm.
pub fn poly_gcd(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    check_same(a.modulus, b.modulus)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial("gcd"));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// Monic product of the distinct irreducible factors of `d`.
///
/// Factors whose multiplicity is divisible by `p` survive `d / gcd(d, d')`
/// only inside the gcd; they are recovered by taking p-th roots until no
/// such factor is left, so the degree of the result is always the number of
/// distinct roots of `d` over the algebraic closure.
pub fn squarefree_part(d: &DensePoly) -> Result<DensePoly> {
    if d.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree part"));
    }
    let d = d.monic();
    if d.is_constant() {
        return Ok(d);
    }
    let deriv = d.derivative();
    if deriv.is_zero() {
        return squarefree_part(&d.pth_root());
    }
    let g = poly_gcd(&d, &deriv)?;
    let w = d.div_rem(&g)?.0;
    // Strip from g every factor already present in w; what remains is a p-th power.
    let mut rest = g;
    loop {
        let common = poly_gcd(&rest, &w)?;
        if common.is_constant() {
            break;
        }
        rest = rest.div_rem(&common)?.0;
    }
    let tail = if rest.is_constant() {
        DensePoly::one(d.modulus)
    } else {
        squarefree_part(&rest.pth_root())?
    };
    Ok((&w * &tail).monic())
}

/// Number of distinct roots of `d`, over `F_p` or over its closure.
pub fn count_roots(d: &DensePoly, mode: RootMode) -> Result<usize> {
    if d.is_zero() {
        return Err(Error::ZeroPolynomial("root count"));
    }
    if d.is_constant() {
        return Ok(0);
    }
    match mode {
        RootMode::Closure => Ok(squarefree_part(d)?.degree().unwrap_or(0)),
        RootMode::Rational => {
            let m = d.modulus;
            let x = DensePoly::monomial(m.element(1), 1);
            let xp = d.pow_mod(&x, m.value())?;
            let h = xp.try_sub(&x.rem(d)?)?;
            Ok(poly_gcd(d, &h)?.degree().unwrap_or(0))
        }
    }
}
