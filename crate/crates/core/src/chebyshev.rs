//! Chebyshev polynomials of type one and their q-commuting expansion.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::qtorus::{weyl_normalize, CommutationMatrix, Torus, TorusElement};
use crate::scalars::{chebyshev_coefficient, Ring, Scalar};

/// `T_n(z) = sum coefficients[i] z^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebyshevPolynomial {
    pub n: u32,
    pub coefficients: Vec<BigInt>,
}

/// `T_0 = 2`, `T_1 = z`, `T_n = z T_{n-1} - T_{n-2}`.
pub fn cheb_poly(n: u32) -> ChebyshevPolynomial {
    let mut prev = vec![BigInt::from(2)];
    let mut cur = vec![BigInt::zero(), BigInt::from(1)];
    if n == 0 {
        return ChebyshevPolynomial { n, coefficients: prev };
    }
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    ChebyshevPolynomial { n, coefficients: cur }
}

/// `T_n(x)` evaluated by multiplying out powers of `x`.
pub fn cheb_eval(x: &TorusElement, n: u32) -> TorusElement {
    let poly = cheb_poly(n);
    let mut acc = TorusElement::zero(x.torus(), x.ring());
    let mut power = TorusElement::one(x.torus(), x.ring());
    for (i, c) in poly.coefficients.iter().enumerate() {
        if i > 0 {
            power = &power * x;
        }
        if !c.is_zero() {
            acc = &acc + &power.scale(&x.ring().monomial(c.clone(), 0));
        }
    }
    acc
}

/// `T_n(s)` for a ground-ring scalar.
pub fn cheb_eval_scalar(s: &Scalar, n: u32) -> Scalar {
    let ring = s.ring().clone();
    let mut acc = ring.zero();
    let mut power = ring.one();
    for (i, c) in cheb_poly(n).coefficients.iter().enumerate() {
        if i > 0 {
            power = &power * s;
        }
        acc += &power.scale_int(c);
    }
    acc
}

/// The torus on labels `(K, E)` with `KE = q^2 EK`.
pub fn ke_torus() -> Torus {
    Arc::new(
        CommutationMatrix::new(vec!["K".into(), "E".into()], vec![vec![0, 2], vec![-2, 0]])
            .expect("fixed antisymmetric matrix"),
    )
}

/// `K + K^-1 + E`.
pub fn k_plus_kinv_plus_e(torus: &Torus, ring: &Ring) -> TorusElement {
    TorusElement::from_terms(
        torus,
        ring,
        [(vec![1, 0], ring.one()), (vec![-1, 0], ring.one()), (vec![0, 1], ring.one())],
    )
}

/// The closed form of `T_n(K + K^-1 + E)`:
/// `K^n + K^-n + E^n + sum_{r,j} c(n,r,j) [E^r K^(n-2j-r)]`.
pub fn cheb_closed_form(ring: &Ring, n: u32) -> Result<TorusElement> {
    let t = ke_torus();
    let ni = n as i64;
    let mut out = TorusElement::from_terms(
        &t,
        ring,
        [(vec![ni, 0], ring.one()), (vec![-ni, 0], ring.one()), (vec![0, ni], ring.one())],
    );
    for r in 1..n {
        for j in 0..=n - r {
            let c = chebyshev_coefficient(ring, n, r, j)?;
            let s = ni - 2 * j as i64 - r as i64;
            let bracket = weyl_normalize(&t, ring, &[vec![0, r as i64], vec![s, 0]]);
            out = &out + &bracket.scale(&c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::quantum_integer;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(cheb_poly(0).coefficients, ints(&[2]));
        assert_eq!(cheb_poly(1).coefficients, ints(&[0, 1]));
        assert_eq!(cheb_poly(2).coefficients, ints(&[-2, 0, 1]));
        assert_eq!(cheb_poly(4).coefficients, ints(&[2, 0, -4, 0, 1]));
    }

    #[test]
    fn commuting_variables_give_power_sums() {
        let t = ke_torus();
        let r = Ring::symbolic();
        for n in 1..=10u32 {
            let x = TorusElement::from_terms(&t, &r, [(vec![1, 0], r.one()), (vec![-1, 0], r.one())]);
            let expect = TorusElement::from_terms(
                &t,
                &r,
                [(vec![n as i64, 0], r.one()), (vec![-(n as i64), 0], r.one())],
            );
            assert_eq!(cheb_eval(&x, n), expect, "n={n}");
        }
        let x = k_plus_kinv_plus_e(&t, &r);
        assert_eq!(cheb_eval(&x, 1), x);
    }

    #[test]
    fn closed_form_small_cases() {
        let t = ke_torus();
        let r = Ring::symbolic();
        assert_eq!(cheb_closed_form(&r, 1).unwrap(), k_plus_kinv_plus_e(&t, &r));
        let q2 = quantum_integer(&r, 2);
        let two = TorusElement::from_terms(
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
        assert_eq!(cheb_closed_form(&r, 2).unwrap(), two);
    }

    #[test]
    fn closed_form_matches_brute_force_up_to_six() {
        let t = ke_torus();
        let r = Ring::symbolic();
        let x = k_plus_kinv_plus_e(&t, &r);
        for n in 1..=6 {
            assert_eq!(cheb_closed_form(&r, n).unwrap(), cheb_eval(&x, n), "n={n}");
        }
    }

    #[test]
    fn collapse_at_order_five() {
        let r = Ring::cyclotomic(20).unwrap();
        let t = ke_torus();
        let expect = TorusElement::from_terms(
            &t,
            &r,
            [(vec![5, 0], r.one()), (vec![-5, 0], r.one()), (vec![0, 5], r.one())],
        );
        assert_eq!(cheb_closed_form(&r, 5).unwrap(), expect);
        assert_eq!(cheb_eval(&k_plus_kinv_plus_e(&t, &r), 5), expect);
    }

    #[test]
    fn scalar_identity_at_sixteen() {
        let r = Ring::cyclotomic(16).unwrap();
        let xi = r.v_pow(2);
        let z = -(&xi.pow(2) + &r.v_pow(-4));
        assert_eq!(cheb_eval_scalar(&z, 2), r.int(-2));
    }
}
