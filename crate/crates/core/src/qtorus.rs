//! Quantum tori `T(A)`.
//!
//! Elements live in the normalized monomial basis `{x^k}` where
//! `x^k x^n = v^<k,n> x^(k+n)` and `<k,n> = sum A_ij k_i n_j`. Exponent
//! vectors are dense `Vec<i64>` indexed by the label order of the
//! [`CommutationMatrix`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar};

/// Dense exponent vector over the labels of a torus.
pub type Exponent = Vec<i64>;

/// An antisymmetric integer matrix over named generators.
#[derive(Debug, Clone)]
pub struct CommutationMatrix {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    entries: Vec<Vec<i64>>,
}

impl PartialEq for CommutationMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.entries == other.entries
    }
}
impl Eq for CommutationMatrix {}

impl CommutationMatrix {
    pub fn new(labels: Vec<String>, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("commutation matrix has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != -entries[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "commutation matrix is not antisymmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate generator label `{l}`")));
            }
        }
        Ok(Self { labels, index, entries })
    }

    /// Build from labels and a function on label indices; only `i < j` is queried.
    pub fn from_upper<F: Fn(usize, usize) -> i64>(labels: Vec<String>, f: F) -> Self {
        let n = labels.len();
        let mut entries = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = f(i, j);
                entries[i][j] = x;
                entries[j][i] = -x;
            }
        }
        Self::new(labels, entries).expect("from_upper builds antisymmetric matrices")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// Entry looked up by label.
    pub fn get(&self, a: &str, b: &str) -> Result<i64> {
        Ok(self.entries[self.require(a)?][self.require(b)?])
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `<k, n> = sum_ij A_ij k_i n_j`.
    pub fn pairing(&self, k: &[i64], n: &[i64]) -> i64 {
        let mut total = 0;
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            let row = &self.entries[i];
            for (j, &nj) in n.iter().enumerate() {
                total += ki * row[j] * nj;
            }
        }
        total
    }

    /// `k^T A`, so that `<k, n> = dot(k^T A, n)`.
    fn left_row(&self, k: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.len()];
        for (i, &ki) in k.iter().enumerate() {
            if ki != 0 {
                for (o, a) in out.iter_mut().zip(&self.entries[i]) {
                    *o += ki * a;
                }
            }
        }
        out
    }

    /// The same labels with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> CommutationMatrix {
        CommutationMatrix {
            labels: self.labels.clone(),
            index: self.index.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(|x| x * factor).collect()).collect(),
        }
    }

    pub fn zero_exponent(&self) -> Exponent {
        vec![0; self.len()]
    }

    pub fn unit(&self, i: usize) -> Exponent {
        let mut e = self.zero_exponent();
        e[i] = 1;
        e
    }

    /// Exponent vector from `(label, power)` pairs; repeated labels add up.
    pub fn exponent(&self, parts: &[(&str, i64)]) -> Result<Exponent> {
        let mut e = self.zero_exponent();
        for (l, p) in parts {
            e[self.require(l)?] += p;
        }
        Ok(e)
    }
}

/// Shared handle to a commutation matrix.
pub type Torus = Arc<CommutationMatrix>;

fn same_torus(a: &Torus, b: &Torus) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element of a quantum torus in the normalized basis.
#[derive(Clone, Debug)]
pub struct TorusElement {
    torus: Torus,
    ring: Ring,
    terms: BTreeMap<Exponent, Scalar>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        same_torus(&self.torus, &other.torus) && self.terms == other.terms
    }
}
impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(torus: &Torus, ring: &Ring) -> Self {
        Self { torus: torus.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(torus: &Torus, ring: &Ring) -> Self {
        Self::monomial(torus, ring, torus.zero_exponent())
    }

    pub fn scalar(torus: &Torus, s: Scalar) -> Self {
        Self::term(torus, torus.zero_exponent(), s)
    }

    /// `x^k`.
    pub fn monomial(torus: &Torus, ring: &Ring, k: Exponent) -> Self {
        Self::term(torus, k, ring.one())
    }

    /// `c x^k`.
    pub fn term(torus: &Torus, k: Exponent, c: Scalar) -> Self {
        assert_eq!(k.len(), torus.len(), "exponent length does not match the torus");
        let ring = c.ring().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { torus: torus.clone(), ring, terms }
    }

    /// A single generator `x_i`.
    pub fn generator(torus: &Torus, ring: &Ring, label: &str) -> Result<Self> {
        Ok(Self::monomial(torus, ring, torus.unit(torus.require(label)?)))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Scalar)>>(torus: &Torus, ring: &Ring, it: I) -> Self {
        let mut out = Self::zero(torus, ring);
        for (k, c) in it {
            out.add_term(k, &c);
        }
        out
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// The grading decomposition: exponent to coefficient.
    pub fn grade(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &[i64]) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Membership in the positive part: every exponent nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|&x| x >= 0))
    }

    pub fn add_term(&mut self, k: Exponent, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if self.ring.modulus().is_none() && c.ring().modulus().is_some() {
            self.ring = c.ring().clone();
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_torus(&self.torus, &other.torus) {
            Ok(())
        } else {
            Err(Error::TorusMismatch(format!(
                "generators {:?} vs {:?}",
                self.torus.labels(),
                other.torus.labels()
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.torus, &self.ring);
        if other.ring.modulus().is_some() {
            out.ring = other.ring.clone();
        }
        for (k1, c1) in &self.terms {
            let row = self.torus.left_row(k1);
            for (k2, c2) in &other.terms {
                let e: i64 = row.iter().zip(k2).map(|(a, b)| a * b).sum();
                let k: Exponent = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, &(c1 * c2).shift(e));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.torus, &self.ring);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * s));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.torus, &self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The reflection anti-involution: conjugate scalars, fix monomials.
    pub fn reflection(&self) -> Self {
        self.map_scalars(|c| c.conjugate())
    }

    pub fn map_scalars<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.torus, &self.ring);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Re-express every coefficient in `ring`.
    pub fn to_ring(&self, ring: &Ring) -> Self {
        let mut out = Self::zero(&self.torus, ring);
        out.ring = ring.clone();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.to_ring(ring));
        }
        out
    }

    /// Same terms regarded as an element of another torus with identical labels.
    pub fn retarget(&self, torus: &Torus) -> Result<Self> {
        if torus.labels() != self.torus.labels() {
            return Err(Error::TorusMismatch("retarget needs identical labels".into()));
        }
        Ok(Self { torus: torus.clone(), ring: self.ring.clone(), terms: self.terms.clone() })
    }
}

impl fmt::Display for TorusElement {
    /// Canonical form accepted by the expression parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono = format_monomial(self.torus.labels(), k);
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{}", format_scalar(c))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", format_scalar(c))?,
            }
        }
        Ok(())
    }
}

/// `a^2 b^-1` style factor list; bracketed when it has several factors.
pub fn format_monomial(labels: &[String], k: &[i64]) -> String {
    let parts: Vec<String> = labels
        .iter()
        .zip(k)
        .filter(|(_, &e)| e != 0)
        .map(|(l, &e)| if e == 1 { l.clone() } else { format!("{l}^{e}") })
        .collect();
    match parts.len() {
        0 => String::new(),
        1 => parts.into_iter().next().unwrap(),
        _ => format!("[{}]", parts.join(" ")),
    }
}

/// A scalar written so that it parses back as a single scalar token.
pub fn format_scalar(c: &Scalar) -> String {
    if let Some((coef, e)) = c.as_monomial() {
        if e == 0 {
            return coef.to_string();
        }
        if *coef == num_bigint::BigInt::from(1) {
            return if e == 1 { "v".into() } else { format!("v^{e}") };
        }
    }
    format!("({c})")
}

macro_rules! torus_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&TorusElement> for &TorusElement {
            type Output = TorusElement;
            fn $m(self, rhs: &TorusElement) -> TorusElement {
                self.$f(rhs).expect("torus operands must share a commutation matrix")
            }
        }
        impl $tr<TorusElement> for TorusElement {
            type Output = TorusElement;
            fn $m(self, rhs: TorusElement) -> TorusElement {
                (&self).$m(&rhs)
            }
        }
    };
}

torus_binop!(Add, add, try_add);
torus_binop!(Mul, mul, try_mul);

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        self.map_scalars(|c| -c)
    }
}

impl Sub<&TorusElement> for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self + &(-rhs)
    }
}
impl Sub<TorusElement> for TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: TorusElement) -> TorusElement {
        &self - &rhs
    }
}

/// `x^k x^n = v^<k,n> x^(k+n)`.
pub fn monomial_product(torus: &Torus, ring: &Ring, k: &[i64], n: &[i64]) -> TorusElement {
    let sum: Exponent = k.iter().zip(n).map(|(a, b)| a + b).collect();
    TorusElement::term(torus, sum, ring.v_pow(torus.pairing(k, n)))
}

/// Weyl normalization of normalized monomials: always `x^(sum of exponents)`.
pub fn weyl_normalize(torus: &Torus, ring: &Ring, factors: &[Exponent]) -> TorusElement {
    let mut sum = torus.zero_exponent();
    for f in factors {
        for (s, x) in sum.iter_mut().zip(f) {
            *s += x;
        }
    }
    TorusElement::monomial(torus, ring, sum)
}

/// Product of normalized monomials in the given order, without normalization.
pub fn ordered_product(torus: &Torus, ring: &Ring, factors: &[Exponent]) -> TorusElement {
    factors
        .iter()
        .fold(TorusElement::one(torus, ring), |acc, k| &acc * &TorusElement::monomial(torus, ring, k.clone()))
}

/// `x^k = v^v_exponent * prod g^p` with generator powers listed in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedFactorization {
    pub v_exponent: i64,
    /// `(generator index, power)` with nonzero powers, in the requested order.
    pub factors: Vec<(usize, i64)>,
}

/// Factor `x^k` as a prefactor times generator powers in `order`.
pub fn factor_ordered(torus: &Torus, k: &[i64], order: &[usize]) -> Result<OrderedFactorization> {
    for (i, &x) in k.iter().enumerate() {
        if x != 0 && !order.contains(&i) {
            return Err(Error::MissingLabel(torus.labels()[i].clone()));
        }
    }
    let factors: Vec<(usize, i64)> = order.iter().filter(|&&i| k[i] != 0).map(|&i| (i, k[i])).collect();
    let mut e = 0;
    for (a, &(i, p)) in factors.iter().enumerate() {
        for &(j, r) in &factors[a + 1..] {
            e -= p * r * torus.entry(i, j);
        }
    }
    Ok(OrderedFactorization { v_exponent: e, factors })
}

/// [`factor_ordered`] with the order given by labels.
pub fn factor_ordered_labels(torus: &Torus, k: &[i64], order: &[&str]) -> Result<OrderedFactorization> {
    let idx: Vec<usize> = order
        .iter()
        .map(|l| torus.index_of(l).ok_or_else(|| Error::MissingLabel(l.to_string())))
        .collect::<Result<_>>()?;
    factor_ordered(torus, k, &idx)
}

/// Image of `x` under the algebra map fixing scalars and sending `g_i^p` to
/// `power_image(i, p)`. Each monomial is factored in `order` first.
pub fn evaluate_homomorphism<F>(x: &TorusElement, target: &Torus, order: &[usize], mut power_image: F) -> Result<TorusElement>
where
    F: FnMut(usize, i64) -> Result<TorusElement>,
{
    let ring = x.ring().clone();
    let mut out = TorusElement::zero(target, &ring);
    for (k, c) in x.terms() {
        let f = factor_ordered(x.torus(), k, order)?;
        let mut acc = TorusElement::scalar(target, c.shift(f.v_exponent));
        for (i, p) in f.factors {
            acc = acc.try_mul(&power_image(i, p)?)?;
        }
        out = out.try_add(&acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ke_torus() -> Torus {
        Arc::new(CommutationMatrix::new(vec!["K".into(), "E".into()], vec![vec![0, 2], vec![-2, 0]]).unwrap())
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert!(CommutationMatrix::new(vec!["x".into(), "y".into()], vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(CommutationMatrix::new(vec!["x".into(), "x".into()], vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn ke_products() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let ke = monomial_product(&t, &r, &[1, 0], &[0, 1]);
        assert_eq!(ke, TorusElement::term(&t, vec![1, 1], r.v_pow(2)));
        let ek = monomial_product(&t, &r, &[0, 1], &[1, 0]);
        assert_eq!(ek, TorusElement::term(&t, vec![1, 1], r.v_pow(-2)));
        // KE = q^2 EK
        assert_eq!(ke, ek.scale(&r.q_pow(2)));
        let sq = monomial_product(&t, &r, &[3, -1], &[3, -1]);
        assert_eq!(sq, TorusElement::monomial(&t, &r, vec![6, -2]));
    }

    #[test]
    fn square_of_k_plus_kinv_plus_e() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let z = TorusElement::from_terms(
            &t,
            &r,
            [(vec![1, 0], r.one()), (vec![-1, 0], r.one()), (vec![0, 1], r.one())],
        );
        let lhs = &(&z * &z) - &TorusElement::scalar(&t, r.int(2));
        let q2 = crate::scalars::quantum_integer(&r, 2);
        let rhs = TorusElement::from_terms(
            &t,
            &r,
            [
                (vec![2, 0], r.one()),
                (vec![-2, 0], r.one()),
                (vec![0, 2], r.one()),
                (vec![1, 1], q2.clone()),
                (vec![-1, 1], q2),
            ],
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverses_and_identity() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let x = TorusElement::monomial(&t, &r, vec![2, -3]);
        let y = TorusElement::monomial(&t, &r, vec![-2, 3]);
        assert_eq!(&x * &y, TorusElement::one(&t, &r));
        let s = &TorusElement::one(&t, &r) + &x;
        assert_eq!(&s * &TorusElement::one(&t, &r), s);
    }

    #[test]
    fn weyl_bracket_of_e_and_k() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let w = weyl_normalize(&t, &r, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(w, TorusElement::monomial(&t, &r, vec![1, 1]));
        let ordered = ordered_product(&t, &r, &[vec![0, 1], vec![1, 0]]);
        let pre = r.v_pow(-t.pairing(&[0, 1], &[1, 0]));
        assert_eq!(ordered.scale(&pre), w);
        assert_eq!(w, ordered.scale(&r.v_pow(2)));
    }

    #[test]
    fn factor_ordered_multiplies_back() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let f = factor_ordered_labels(&t, &[1, 1], &["K", "E"]).unwrap();
        assert_eq!(f.v_exponent, -2);
        let mut prod = TorusElement::scalar(&t, r.v_pow(f.v_exponent));
        for (i, p) in &f.factors {
            let mut k = t.zero_exponent();
            k[*i] = *p;
            prod = &prod * &TorusElement::monomial(&t, &r, k);
        }
        assert_eq!(prod, TorusElement::monomial(&t, &r, vec![1, 1]));
        let single = factor_ordered_labels(&t, &[0, 4], &["K", "E"]).unwrap();
        assert_eq!(single, OrderedFactorization { v_exponent: 0, factors: vec![(1, 4)] });
        let empty = factor_ordered_labels(&t, &[0, 0], &["E"]).unwrap();
        assert!(empty.factors.is_empty());
        assert!(matches!(factor_ordered_labels(&t, &[1, 0], &["E"]), Err(Error::MissingLabel(_))));
    }

    #[test]
    fn reflection_conjugates() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let x = TorusElement::term(&t, vec![1, 0], r.v_pow(1));
        assert_eq!(x.reflection(), TorusElement::term(&t, vec![1, 0], r.v_pow(-1)));
    }

    #[test]
    fn mismatched_tori_are_rejected() {
        let t = ke_torus();
        let u = Arc::new(CommutationMatrix::new(vec!["K".into(), "E".into()], vec![vec![0, 1], vec![-1, 0]]).unwrap());
        let r = Ring::symbolic();
        let a = TorusElement::one(&t, &r);
        let b = TorusElement::one(&u, &r);
        assert!(matches!(a.try_mul(&b), Err(Error::TorusMismatch(_))));
    }

    #[test]
    fn grade_and_display() {
        let t = ke_torus();
        let r = Ring::symbolic();
        assert!(TorusElement::zero(&t, &r).grade().is_empty());
        let x = TorusElement::from_terms(
            &t,
            &r,
            [(vec![0, 0], r.int(-3)), (vec![1, 1], r.v_pow(2) + r.one()), (vec![-1, 0], r.one())],
        );
        assert_eq!(x.grade().len(), 3);
        assert_eq!(x.to_string(), "K^-1 + -3 + (v^2 + 1)*[K E]");
    }
}
