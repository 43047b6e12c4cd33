//! Exact ground ring.
//!
//! Scalars are Laurent polynomials in `v` with big-integer coefficients, where
//! `q = v^2`. A [`Ring`] is either symbolic (`Z[v, v^-1]`) or cyclotomic of
//! order `m`, in which case `v` is a primitive `m`-th root of unity and every
//! value is kept reduced modulo the cyclotomic polynomial `Phi_m`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The modulus data for cyclotomic mode.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicContext {
    m: u32,
    phi: Vec<BigInt>,
}

impl CyclotomicContext {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive".into()));
        }
        Ok(Self { m, phi: cyclotomic_coefficients(m) })
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// Coefficients of `Phi_m`, constant term first.
    pub fn phi_coefficients(&self) -> &[BigInt] {
        &self.phi
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce<'a, I>(&self, terms: I) -> BTreeMap<i64, BigInt>
    where
        I: IntoIterator<Item = (i64, &'a BigInt)>,
    {
        let m = self.m as i64;
        let mut dense = vec![BigInt::zero(); self.m as usize];
        for (e, c) in terms {
            dense[e.rem_euclid(m) as usize] += c;
        }
        let d = self.degree();
        for i in (d..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut dense[i]);
            for (j, p) in self.phi.iter().enumerate().take(d) {
                if !p.is_zero() {
                    dense[i - d + j] -= &c * p;
                }
            }
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as i64, c))
            .collect()
    }
}

/// Coefficients (constant term first) of the `m`-th cyclotomic polynomial,
/// obtained by dividing `v^m - 1` by `Phi_d` for every proper divisor `d`.
fn cyclotomic_coefficients(m: u32) -> Vec<BigInt> {
    fn go(m: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&m) {
            return p.clone();
        }
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
            let den = go(d, memo);
            let (quot, rem) = divide_monic(&num, &den);
            debug_assert!(rem.iter().all(Zero::is_zero));
            num = quot;
        }
        memo.insert(m, num.clone());
        num
    }
    go(m, &mut HashMap::new())
}

/// Long division by a monic polynomial; both operands constant term first.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = den.len() - 1;
    if num.len() <= d {
        return (vec![BigInt::zero()], num.to_vec());
    }
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - d];
    for i in (d..num.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            rem[i - d + j] -= &c * &den[j];
        }
        quot[i - d] = c;
    }
    rem.truncate(d);
    (quot, rem)
}

/// The `m`-th cyclotomic polynomial as a symbolic scalar in `v`.
pub fn cyclotomic(m: u32) -> Result<Scalar> {
    let ctx = CyclotomicContext::new(m)?;
    Ok(Scalar::from_terms(
        &Ring::symbolic(),
        ctx.phi.iter().enumerate().map(|(e, c)| (e as i64, c.clone())),
    ))
}

/// Ground ring selector: symbolic, or cyclotomic of a fixed order.
#[derive(Clone, Debug, Default)]
pub struct Ring {
    cyclo: Option<Arc<CyclotomicContext>>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn symbolic() -> Self {
        Self { cyclo: None }
    }

    pub fn cyclotomic(m: u32) -> Result<Self> {
        Ok(Self { cyclo: Some(Arc::new(CyclotomicContext::new(m)?)) })
    }

    /// `Some(m)` selects cyclotomic mode of order `m`.
    pub fn from_modulus(m: Option<u32>) -> Result<Self> {
        match m {
            Some(m) => Self::cyclotomic(m),
            None => Ok(Self::symbolic()),
        }
    }

    pub fn modulus(&self) -> Option<u32> {
        self.cyclo.as_ref().map(|c| c.m)
    }

    pub fn context(&self) -> Option<&CyclotomicContext> {
        self.cyclo.as_deref()
    }

    pub fn zero(&self) -> Scalar {
        Scalar { terms: BTreeMap::new(), ring: self.clone() }
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.monomial(BigInt::from(n), 0)
    }

    /// `v^e`.
    pub fn v_pow(&self, e: i64) -> Scalar {
        self.monomial(BigInt::one(), e)
    }

    /// `q^e = v^(2e)`.
    pub fn q_pow(&self, e: i64) -> Scalar {
        self.v_pow(2 * e)
    }

    pub fn monomial(&self, c: BigInt, e: i64) -> Scalar {
        Scalar::from_terms(self, std::iter::once((e, c)))
    }

    /// Root-of-unity bookkeeping for cyclotomic rings.
    pub fn root_data(&self) -> Option<RootData> {
        self.modulus().map(root_data)
    }

    fn canonical(&self, terms: BTreeMap<i64, BigInt>) -> BTreeMap<i64, BigInt> {
        match &self.cyclo {
            Some(ctx) => ctx.reduce(terms.iter().map(|(e, c)| (*e, c))),
            None => terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub(crate) fn join(&self, other: &Ring) -> Ring {
        match (self.modulus(), other.modulus()) {
            (None, None) | (Some(_), None) => self.clone(),
            (None, Some(_)) => other.clone(),
            (Some(a), Some(b)) if a == b => self.clone(),
            (Some(a), Some(b)) => panic!("cannot combine scalars of cyclotomic orders {a} and {b}"),
        }
    }
}

/// An element of the ground ring.
#[derive(Clone, Debug)]
pub struct Scalar {
    terms: BTreeMap<i64, BigInt>,
    ring: Ring,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.ring == other.ring {
            return self.terms == other.terms;
        }
        match (self.ring.modulus(), other.ring.modulus()) {
            (None, Some(_)) => self.to_ring(&other.ring).terms == other.terms,
            (Some(_), None) => self.terms == other.to_ring(&self.ring).terms,
            _ => false,
        }
    }
}
impl Eq for Scalar {}

impl Scalar {
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(ring: &Ring, terms: I) -> Scalar {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        Scalar { terms: ring.canonical(map), ring: ring.clone() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Nonzero coefficients keyed by `v`-exponent, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Some `(c, e)` when the value is the single term `c v^e`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    /// Re-express the value in `ring` (reducing when `ring` is cyclotomic).
    pub fn to_ring(&self, ring: &Ring) -> Scalar {
        Scalar::from_terms(ring, self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// `v -> v^-1`.
    pub fn conjugate(&self) -> Scalar {
        Scalar::from_terms(&self.ring, self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    /// `v -> v^t`.
    pub fn substitute(&self, t: i64) -> Scalar {
        Scalar::from_terms(&self.ring, self.terms.iter().map(|(e, c)| (t * e, c.clone())))
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, e: i64) -> Scalar {
        if e == 0 {
            return self.clone();
        }
        Scalar::from_terms(&self.ring, self.terms.iter().map(|(x, c)| (x + e, c.clone())))
    }

    pub fn scale_int(&self, k: &BigInt) -> Scalar {
        if k.is_zero() {
            return self.ring.zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
            ring: self.ring.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when every coefficient is nonnegative.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact quotient in `Z[v, v^-1]`; fails if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Scalar) -> Result<Scalar> {
        if self.ring.modulus().is_some() || divisor.ring.modulus().is_some() {
            return Err(Error::ExactDivisionFailure(
                "exact division is only defined in the symbolic ring".into(),
            ));
        }
        if divisor.is_zero() {
            return Err(Error::ExactDivisionFailure("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (lo_n, hi_n) = bounds(&self.terms);
        let (lo_d, hi_d) = bounds(&divisor.terms);
        let mut rem: Vec<BigInt> = dense(&self.terms, lo_n, hi_n);
        let den: Vec<BigInt> = dense(&divisor.terms, lo_d, hi_d);
        let dd = den.len() - 1;
        let lead = &den[dd];
        if rem.len() <= dd {
            return Err(Error::ExactDivisionFailure(format!("{self} by {divisor}")));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (c, r) = rem[i].div_rem(lead);
            if !r.is_zero() {
                return Err(Error::ExactDivisionFailure(format!("{self} by {divisor}")));
            }
            for j in 0..=dd {
                rem[i - dd + j] -= &c * &den[j];
            }
            quot[i - dd] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::ExactDivisionFailure(format!("{self} by {divisor}")));
        }
        Ok(Scalar::from_terms(
            &self.ring,
            quot.into_iter().enumerate().map(|(i, c)| (i as i64 + lo_n - lo_d, c)),
        ))
    }

    fn combine(&self, other: &Scalar, negate: bool) -> Scalar {
        let ring = self.ring.join(&other.ring);
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = map.entry(*e).or_default();
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        if ring == self.ring && ring == other.ring {
            map.retain(|_, c| !c.is_zero());
            Scalar { terms: map, ring }
        } else {
            Scalar { terms: ring.canonical(map), ring }
        }
    }

    fn product(&self, other: &Scalar) -> Scalar {
        let ring = self.ring.join(&other.ring);
        if self.is_zero() || other.is_zero() {
            return ring.zero();
        }
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                *map.entry(e1 + e2).or_default() += c1 * c2;
            }
        }
        Scalar { terms: ring.canonical(map), ring }
    }
}

fn bounds(terms: &BTreeMap<i64, BigInt>) -> (i64, i64) {
    (*terms.keys().next().unwrap(), *terms.keys().next_back().unwrap())
}

fn dense(terms: &BTreeMap<i64, BigInt>, lo: i64, hi: i64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (e, c) in terms {
        out[(e - lo) as usize] = c.clone();
    }
    out
}

impl fmt::Display for Scalar {
    /// Descending powers of `v`, e.g. `v^2 + 3 - 2*v^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let power = match *e {
                0 => String::new(),
                1 => "v".to_string(),
                e => format!("v^{e}"),
            };
            if power.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{mag}*{power}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Scalar, b: &Scalar| a.combine(b, false));
binop!(Sub, sub, |a: &Scalar, b: &Scalar| a.combine(b, true));
binop!(Mul, mul, |a: &Scalar, b: &Scalar| a.product(b));

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.combine(rhs, false);
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.combine(rhs, true);
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.product(rhs);
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), ring: self.ring.clone() }
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `[n]_q = (q^n - q^-n) / (q - q^-1)`.
pub fn quantum_integer(ring: &Ring, n: i64) -> Scalar {
    let sign = n.signum();
    let n = n.abs();
    let s = Scalar::from_terms(ring, (0..n).map(|j| (2 * (n - 1 - 2 * j), BigInt::one())));
    if sign < 0 {
        -s
    } else {
        s
    }
}

/// Quantum binomial `prod_{j=1..k} [n-j+1]_q / [j]_q`, by exact division.
pub fn quantum_binomial(ring: &Ring, n: i64, k: u32) -> Result<Scalar> {
    let sym = Ring::symbolic();
    let mut num = sym.one();
    let mut den = sym.one();
    for j in 1..=k as i64 {
        num = &num * &quantum_integer(&sym, n - j + 1);
        den = &den * &quantum_integer(&sym, j);
    }
    Ok(num.exact_div(&den)?.to_ring(ring))
}

/// The coefficient `c(n, r, j)` of the q-commuting Chebyshev expansion.
pub fn chebyshev_coefficient(ring: &Ring, n: u32, r: u32, j: u32) -> Result<Scalar> {
    if n < 2 || r < 1 || r >= n || j > n - r {
        return Err(Error::InvalidArgument(format!(
            "chebyshev coefficient needs 1 <= r <= n-1 and 0 <= j <= n-r, got n={n} r={r} j={j}"
        )));
    }
    let sym = Ring::symbolic();
    let (n, r, j) = (n as i64, r as i64, j as i64);
    let num = &quantum_integer(&sym, n)
        * &quantum_binomial(&sym, n - j - 1, (r - 1) as u32)?
        * quantum_binomial(&sym, r + j - 1, (r - 1) as u32)?;
    Ok(num.exact_div(&quantum_integer(&sym, r))?.to_ring(ring))
}

/// Gauss binomial in base `t = v^base_exponent`, computed with the
/// division-free recursion `G(n,k) = G(n-1,k-1) + t^k G(n-1,k)`.
pub fn gauss_binomial(ring: &Ring, n: u32, k: u32, base_exponent: i64) -> Result<Scalar> {
    if k > n {
        return Err(Error::InvalidArgument(format!("gauss binomial needs k <= N, got N={n} k={k}")));
    }
    Ok(gauss_row(ring, n, base_exponent).swap_remove(k as usize))
}

/// All Gauss binomials `G(n, 0..=n)` in base `v^base_exponent`.
pub fn gauss_row(ring: &Ring, n: u32, base_exponent: i64) -> Vec<Scalar> {
    gauss_rows(ring, base_exponent).nth(n as usize).expect("the row iterator is infinite")
}

/// The rows `G(0, ..), G(1, ..), ...` of the Gauss triangle, each computed from the previous one.
pub fn gauss_rows(ring: &Ring, base_exponent: i64) -> impl Iterator<Item = Vec<Scalar>> {
    let one = ring.one();
    std::iter::successors(Some(vec![one.clone()]), move |row| {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(one.clone());
        for k in 1..row.len() {
            next.push(&row[k - 1] + &row[k].shift(base_exponent * k as i64));
        }
        next.push(one.clone());
        Some(next)
    })
}

/// Order bookkeeping for `v` a primitive `m`-th root of unity, `xi = v^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootData {
    pub m: u32,
    /// Order of `xi^4`.
    pub n: u32,
    /// `epsilon = xi^(N^2) = v^epsilon_v_exponent`, reduced into `[0, m)`.
    pub epsilon_v_exponent: i64,
    /// The value `xi^(2N)`, which is `1` or `-1`.
    pub sign_xi_2n: i8,
}

pub fn root_data(m: u32) -> RootData {
    assert!(m >= 1, "root data needs m >= 1");
    let n = m / m.gcd(&8);
    let eps = (2 * (n as i64) * (n as i64)).rem_euclid(m as i64);
    let sign = if (4 * n).is_multiple_of(m) { 1 } else { -1 };
    RootData { m, n, epsilon_v_exponent: eps, sign_xi_2n: sign }
}

/// Free-function form of [`Scalar::substitute`].
pub fn ground_substitute(s: &Scalar, t: i64) -> Scalar {
    s.substitute(t)
}

/// Free-function form of [`Scalar::conjugate`].
pub fn conjugate(s: &Scalar) -> Scalar {
    s.conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym() -> Ring {
        Ring::symbolic()
    }

    fn poly(ring: &Ring, terms: &[(i64, i64)]) -> Scalar {
        Scalar::from_terms(ring, terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    /// Naive recursive Gauss binomial in `t`, returned as a symbolic polynomial in `t`.
    fn pascal_oracle(n: i64, k: i64) -> Scalar {
        if k < 0 || k > n {
            return sym().zero();
        }
        if k == 0 || k == n {
            return sym().one();
        }
        &pascal_oracle(n - 1, k - 1) + &pascal_oracle(n - 1, k).shift(k)
    }

    #[test]
    fn cyclotomic_small_orders() {
        assert_eq!(cyclotomic(1).unwrap(), poly(&sym(), &[(1, 1), (0, -1)]));
        assert_eq!(cyclotomic(4).unwrap(), poly(&sym(), &[(2, 1), (0, 1)]));
        assert_eq!(cyclotomic(8).unwrap(), poly(&sym(), &[(4, 1), (0, 1)]));
        assert_eq!(cyclotomic(6).unwrap(), poly(&sym(), &[(2, 1), (1, -1), (0, 1)]));
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for m in 1..=64u32 {
            let phi = (1..=m).filter(|k| k.gcd(&m) == 1).count();
            assert_eq!(CyclotomicContext::new(m).unwrap().degree(), phi, "m={m}");
        }
    }

    #[test]
    fn reduction_uses_root_of_unity() {
        let r = Ring::cyclotomic(16).unwrap();
        assert_eq!(r.v_pow(8), r.int(-1));
        assert_eq!(r.v_pow(16), r.one());
        assert_eq!(r.v_pow(-1), r.v_pow(15));
        assert_eq!(r.v_pow(2).substitute(4), r.int(-1));
    }

    #[test]
    fn quantum_integers() {
        let s = sym();
        assert_eq!(quantum_integer(&s, 1), s.one());
        assert_eq!(quantum_integer(&s, 0), s.zero());
        assert_eq!(quantum_integer(&s, 2), poly(&s, &[(2, 1), (-2, 1)]));
        assert_eq!(quantum_integer(&s, -3), -quantum_integer(&s, 3));
        // ([n]_q)(q - q^-1) = q^n - q^-n
        for n in -6..=6 {
            let lhs = &quantum_integer(&s, n) * &poly(&s, &[(2, 1), (-2, -1)]);
            assert_eq!(lhs, &s.q_pow(n) - &s.q_pow(-n));
        }
    }

    #[test]
    fn quantum_binomial_values() {
        let s = sym();
        assert_eq!(quantum_binomial(&s, 7, 0).unwrap(), s.one());
        assert_eq!(quantum_binomial(&s, 2, 1).unwrap(), quantum_integer(&s, 2));
        let expected = (&quantum_integer(&s, 4) * &quantum_integer(&s, 3))
            .exact_div(&quantum_integer(&s, 2))
            .unwrap();
        assert_eq!(quantum_binomial(&s, 4, 2).unwrap(), expected);
        // symmetric normalization: qbinom(n,k) = q^{-k(n-k)} * G_{q^2}(n,k)
        for n in 0..8i64 {
            for k in 0..=n {
                let g = pascal_oracle(n, k).substitute(4).shift(-2 * k * (n - k));
                assert_eq!(quantum_binomial(&s, n, k as u32).unwrap(), g, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn q_pascal_recursion() {
        let s = sym();
        for n in 2..10i64 {
            for k in 1..n {
                let lhs = quantum_binomial(&s, n, k as u32).unwrap();
                let rhs = &(&s.q_pow(k) * &quantum_binomial(&s, n - 1, k as u32).unwrap())
                    + &(&s.q_pow(-(n - k)) * &quantum_binomial(&s, n - 1, (k - 1) as u32).unwrap());
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn chebyshev_coefficient_small() {
        let s = sym();
        assert_eq!(chebyshev_coefficient(&s, 2, 1, 0).unwrap(), quantum_integer(&s, 2));
        assert_eq!(chebyshev_coefficient(&s, 3, 1, 1).unwrap(), quantum_integer(&s, 3));
        assert!(chebyshev_coefficient(&s, 3, 0, 0).is_err());
        assert!(chebyshev_coefficient(&s, 3, 1, 3).is_err());
    }

    #[test]
    fn exact_division_failure_is_reported() {
        let s = sym();
        let err = s.int(3).exact_div(&s.int(2)).unwrap_err();
        assert!(matches!(err, Error::ExactDivisionFailure(_)));
        let err = poly(&s, &[(2, 1), (0, 1)]).exact_div(&poly(&s, &[(1, 1), (0, 1)]));
        assert!(err.is_err());
    }

    #[test]
    fn gauss_binomial_matches_product_formula() {
        let s = sym();
        assert_eq!(gauss_binomial(&s, 5, 0, 8).unwrap(), s.one());
        assert_eq!(gauss_binomial(&s, 2, 1, 8).unwrap(), &s.one() + &s.v_pow(8));
        for n in 1..8u32 {
            for k in 0..=n {
                let mut num = s.one();
                let mut den = s.one();
                for j in 1..=k as i64 {
                    num = &num * &(&s.one() - &s.v_pow(8 * (n as i64 - j + 1)));
                    den = &den * &(&s.one() - &s.v_pow(8 * j));
                }
                let expected = num.exact_div(&den).unwrap();
                assert_eq!(gauss_binomial(&s, n, k, 8).unwrap(), expected);
            }
        }
        let c16 = Ring::cyclotomic(16).unwrap();
        assert!(gauss_binomial(&c16, 2, 1, 8).unwrap().is_zero());
    }

    #[test]
    fn root_data_examples() {
        let r16 = root_data(16);
        assert_eq!((r16.n, r16.sign_xi_2n), (2, -1));
        let c16 = Ring::cyclotomic(16).unwrap();
        assert_eq!(c16.v_pow(r16.epsilon_v_exponent), c16.int(-1));
        let r12 = root_data(12);
        assert_eq!((r12.n, r12.sign_xi_2n), (3, 1));
        let c12 = Ring::cyclotomic(12).unwrap();
        assert_eq!(c12.v_pow(r12.epsilon_v_exponent), c12.int(-1));
        let r4 = root_data(4);
        assert_eq!(r4.n, 1);
        let c4 = Ring::cyclotomic(4).unwrap();
        assert_eq!(c4.v_pow(r4.epsilon_v_exponent), c4.int(-1));
    }

    #[test]
    fn root_data_invariants() {
        for m in 1..=96u32 {
            let rd = root_data(m);
            let ring = Ring::cyclotomic(m).unwrap();
            // N is the order of xi^4 = v^8
            let xi4 = ring.v_pow(8);
            assert_eq!(xi4.pow(rd.n), ring.one(), "m={m}");
            for d in 1..rd.n {
                assert_ne!(xi4.pow(d), ring.one(), "m={m} d={d}");
            }
            let eps = ring.v_pow(rd.epsilon_v_exponent);
            assert_eq!(eps.pow(4), ring.one(), "m={m}");
            assert_eq!(ring.v_pow(4 * rd.n as i64), ring.int(rd.sign_xi_2n as i64), "m={m}");
        }
    }

    #[test]
    fn display_is_descending() {
        let s = sym();
        assert_eq!(poly(&s, &[(2, 1), (0, 3), (-1, -2)]).to_string(), "v^2 + 3 - 2*v^-1");
        assert_eq!(poly(&s, &[(1, -1)]).to_string(), "-v");
        assert_eq!(s.zero().to_string(), "0");
    }

    #[test]
    fn mixed_rings_promote_to_cyclotomic() {
        let c8 = Ring::cyclotomic(8).unwrap();
        let sum = &Ring::symbolic().v_pow(4) + &c8.one();
        assert!(sum.is_zero());
        assert_eq!(Ring::symbolic().v_pow(4), c8.int(-1));
    }
}
