//! The Frobenius homomorphism `F_N: T(N^2 A) -> T(A)`, `x^k -> x^(Nk)`.
//!
//! Both tori are written over the same ground ring in the variable `v`. An
//! element of the `epsilon`-torus `T_eps(A)`, whose scalars are written in
//! `eps^(1/2)`, is first moved into `T(N^2 A)` by [`epsilon_to_source`]
//! (substituting `v -> v^(N^2)`), and then mapped by [`frobenius`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qtorus::{Torus, TorusElement};

/// The source torus `T(N^2 A)` for a target `A`.
pub fn source_torus(target: &Torus, n: u32) -> Torus {
    Arc::new(target.scaled((n as i64) * (n as i64)))
}

fn check_scale(source: &Torus, target: &Torus, n: u32) -> Result<()> {
    let nn = (n as i64) * (n as i64);
    let ok = source.labels() == target.labels()
        && source
            .rows()
            .iter()
            .zip(target.rows())
            .all(|(s, t)| s.iter().zip(t).all(|(a, b)| *a == nn * b));
    if ok {
        Ok(())
    } else {
        Err(Error::MatrixScaleMismatch { n })
    }
}

/// `F_N(x)`: every exponent is multiplied by `N`, scalars are unchanged.
pub fn frobenius(x: &TorusElement, n: u32, target: &Torus) -> Result<TorusElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("Frobenius needs N >= 1".into()));
    }
    check_scale(x.torus(), target, n)?;
    let nn = n as i64;
    Ok(TorusElement::from_terms(
        target,
        x.ring(),
        x.terms().map(|(k, c)| (k.iter().map(|e| e * nn).collect(), c.clone())),
    ))
}

/// Rewrite an element of `T_eps(A)` as an element of `T(N^2 A)` via `eps^(1/2) = v^(N^2)`.
pub fn epsilon_to_source(x: &TorusElement, n: u32) -> TorusElement {
    let source = source_torus(x.torus(), n);
    let nn = (n as i64) * (n as i64);
    TorusElement::from_terms(&source, x.ring(), x.terms().map(|(k, c)| (k.clone(), c.substitute(nn))))
}

/// Whether `y = F_N(x)`.
pub fn frobenius_image_check(x: &TorusElement, y: &TorusElement, n: u32) -> Result<bool> {
    Ok(frobenius(x, n, y.torus())? == *y)
}
