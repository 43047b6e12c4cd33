//! Flips of quasitriangulations and the transfer maps between their tori.
//!
//! Case 1 replaces the diagonal `a` of a quadrilateral formed by two triangles.
//! Walking the first triangle from the corner after `a.0` gives sides `b, c`;
//! walking the second from the corner after `a.1` gives `d, e`. The new
//! diagonal `a*` runs between the far ends of `b` and `d`, and
//!
//! `Theta(a) = [c e a*^-1] + [b d a*^-1]`.
//!
//! Case 2 flips a monogon edge `a` around the hole `beta`. At its base point
//! the list reads `.., b, a, a, c, ..`; the new loop `a*` is based at the
//! opposite corner of the triangle, and
//!
//! `Theta(a) = [b^2 a*^-1] + [c^2 a*^-1] + beta [b c a*^-1]`.
//!
//! `Theta` is only evaluated on terms with nonnegative `a`-exponent.

use crate::error::{Error, Result};
use crate::frobenius::{epsilon_to_source, frobenius};
use crate::qtorus::{evaluate_homomorphism, Torus, TorusElement};
use crate::scalars::Ring;
use crate::surface::{HalfEdge, Quasitriangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipCase {
    /// Quadrilateral sides; `a*` joins the far ends of `b` and `d`.
    One { b: String, c: String, d: String, e: String },
    /// Triangle sides next to the monogon and the hole it encircles.
    Two { b: String, c: String, hole: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipResult {
    pub old_edge: String,
    pub new_edge: String,
    pub new_q: Quasitriangulation,
    pub case: FlipCase,
}

/// `a -> a*` and `a* -> a`.
pub fn flipped_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

fn not_flippable(edge: &str, reason: &str) -> Error {
    Error::NotFlippable { edge: edge.to_string(), reason: reason.to_string() }
}

fn half(q: &Quasitriangulation, h: HalfEdge) -> (String, u8) {
    (q.edges()[h.edge].name.clone(), h.end)
}

/// Insert `new` right after `after` in whichever order contains it.
fn insert_after(orders: &mut [(String, Vec<(String, u8)>)], after: &(String, u8), new: &[(String, u8)]) {
    for (_, list) in orders.iter_mut() {
        if let Some(i) = list.iter().position(|h| h == after) {
            for (k, h) in new.iter().enumerate() {
                list.insert(i + 1 + k, h.clone());
            }
            return;
        }
    }
    unreachable!("half-edge {after:?} is present in a valid quasitriangulation");
}

/// The two half-edges following the corner `(start, first)` around its face,
/// provided the face closes up as a triangle.
fn triangle_sides(q: &Quasitriangulation, start: HalfEdge, first: HalfEdge) -> Result<(HalfEdge, HalfEdge)> {
    let bad = || Error::InvalidQuasitriangulation("face next to the flipped edge is not a triangle".into());
    let second = q.next_cw(first.twin()).ok_or_else(bad)?;
    let third = q.next_cw(second.twin()).ok_or_else(bad)?;
    if third != start.twin() {
        return Err(bad());
    }
    Ok((first, second))
}

/// Flip `q` at the edge named `a`.
pub fn flip(q: &Quasitriangulation, a: &str) -> Result<FlipResult> {
    let ai = q.require_edge(a)?;
    if q.is_boundary(ai) {
        return Err(not_flippable(a, "boundary edges cannot be flipped"));
    }
    let new_name = flipped_name(a);
    if q.edge_index(&new_name).is_some() {
        return Err(not_flippable(a, &format!("the name `{new_name}` is already in use")));
    }
    let h0 = HalfEdge { edge: ai, end: 0 };
    let h1 = h0.twin();
    let mut b = q.to_builder();
    for (_, list) in b.orders.iter_mut() {
        list.retain(|(e, _)| e != a);
    }
    let case = if let Some(hole) = q.hole_of(ai) {
        let (x, y) = if q.next_cw(h0) == Some(h1) {
            (h0, h1)
        } else if q.next_cw(h1) == Some(h0) {
            (h1, h0)
        } else {
            return Err(Error::InvalidQuasitriangulation(format!("monogon edge `{a}` has separated ends")));
        };
        let hb = q.prev_cw(x).ok_or_else(|| not_flippable(a, "monogon opens the order"))?;
        let hc = q.next_cw(y).ok_or_else(|| not_flippable(a, "monogon closes the order"))?;
        if q.next_cw(hc.twin()) != Some(hb.twin()) {
            return Err(Error::InvalidQuasitriangulation(format!("triangle around monogon `{a}` is malformed")));
        }
        insert_after(&mut b.orders, &half(q, hc.twin()), &[(new_name.clone(), 0), (new_name.clone(), 1)]);
        let base = q.point_name(q.edges()[hc.edge].ends[1 - hc.end as usize]).to_string();
        b.edges[ai] = (new_name.clone(), base.clone(), base);
        for (_, e) in b.holes.iter_mut() {
            if e == a {
                *e = new_name.clone();
            }
        }
        FlipCase::Two {
            b: q.edges()[hb.edge].name.clone(),
            c: q.edges()[hc.edge].name.clone(),
            hole: hole.to_string(),
        }
    } else {
        let n0 = q.next_cw(h0).ok_or_else(|| not_flippable(a, "edge closes an order"))?;
        let n1 = q.next_cw(h1).ok_or_else(|| not_flippable(a, "edge closes an order"))?;
        let (s1, s2) = triangle_sides(q, h0, n0)?;
        let (s3, s4) = triangle_sides(q, h1, n1)?;
        if [s1, s2, s3, s4].iter().any(|s| s.edge == ai) {
            return Err(not_flippable(a, "self-folded configuration"));
        }
        insert_after(&mut b.orders, &half(q, s1.twin()), &[(new_name.clone(), 0)]);
        insert_after(&mut b.orders, &half(q, s3.twin()), &[(new_name.clone(), 1)]);
        let far = |h: HalfEdge| q.point_name(q.edges()[h.edge].ends[1 - h.end as usize]).to_string();
        b.edges[ai] = (new_name.clone(), far(s1), far(s3));
        let name = |h: HalfEdge| q.edges()[h.edge].name.clone();
        FlipCase::One { b: name(s1), c: name(s2), d: name(s3), e: name(s4) }
    };
    let new_q = b.build()?;
    Ok(FlipResult { old_edge: a.to_string(), new_edge: new_name, new_q, case })
}

impl FlipResult {
    /// Torus of the flipped quasitriangulation.
    pub fn target_torus(&self) -> Torus {
        self.new_q.x_torus()
    }

    /// The two normalized monomials whose sum is `Theta(a)` in Case 1:
    /// `X = [b d a*^-1]`, `Y = [c e a*^-1]`.
    pub fn case_one_terms(&self, ring: &Ring) -> Result<(TorusElement, TorusElement)> {
        let FlipCase::One { b, c, d, e } = &self.case else {
            return Err(not_flippable(&self.old_edge, "not a Case 1 flip"));
        };
        let t = self.target_torus();
        let s = self.new_edge.as_str();
        let x = t.exponent(&[(b.as_str(), 1), (d.as_str(), 1), (s, -1)])?;
        let y = t.exponent(&[(c.as_str(), 1), (e.as_str(), 1), (s, -1)])?;
        Ok((TorusElement::monomial(&t, ring, x), TorusElement::monomial(&t, ring, y)))
    }

    /// `Theta(a)` in the torus of the flipped quasitriangulation.
    pub fn theta_of_flipped(&self, ring: &Ring) -> Result<TorusElement> {
        match &self.case {
            FlipCase::One { .. } => {
                let (x, y) = self.case_one_terms(ring)?;
                Ok(&x + &y)
            }
            FlipCase::Two { b, c, hole } => {
                let t = self.target_torus();
                let s = self.new_edge.as_str();
                let (b, c, hole) = (b.as_str(), c.as_str(), hole.as_str());
                let terms = [
                    t.exponent(&[(b, 2), (s, -1)])?,
                    t.exponent(&[(c, 2), (s, -1)])?,
                    t.exponent(&[(hole, 1), (b, 1), (c, 1), (s, -1)])?,
                ];
                Ok(TorusElement::from_terms(&t, ring, terms.into_iter().map(|k| (k, ring.one()))))
            }
        }
    }
}

/// `Theta` for an already computed flip. `x` lives in the torus of the
/// original quasitriangulation (edges followed by unmarked components).
pub fn transfer_with(q: &Quasitriangulation, f: &FlipResult, x: &TorusElement) -> Result<TorusElement> {
    let source = q.x_torus();
    if x.torus().labels() != source.labels() || **x.torus() != *source {
        return Err(Error::TorusMismatch("element does not live in the torus of this quasitriangulation".into()));
    }
    let ai = q.require_edge(&f.old_edge)?;
    for (k, _) in x.terms() {
        if k[ai] < 0 {
            return Err(Error::NegativeFlippedExponent { edge: f.old_edge.clone(), exponent: k[ai] });
        }
    }
    let target = f.target_torus();
    let ring = x.ring().clone();
    let theta_a = f.theta_of_flipped(&ring)?;
    let order: Vec<usize> = (0..source.len()).collect();
    evaluate_homomorphism(x, &target, &order, |i, p| {
        if i == ai {
            Ok(theta_a.pow(p as u32))
        } else {
            let mut k = target.zero_exponent();
            k[i] = p;
            Ok(TorusElement::monomial(&target, &ring, k))
        }
    })
}

/// `Theta(x)` for the flip of `q` at `a`.
pub fn transfer(q: &Quasitriangulation, a: &str, x: &TorusElement) -> Result<TorusElement> {
    let f = flip(q, a)?;
    transfer_with(q, &f, x)
}

/// Checks `Theta'(Theta(x)) = x` for the flip at `a` followed by the flip back.
///
/// `Theta(x)` usually has negative powers of `a*`, where `Theta'` is not
/// evaluated. With `n` the largest such power, the check compares
/// `Theta'(Theta(x) a*^n)` with `x Theta'(a*)^n`; in a domain this is
/// equivalent to the round trip identity.
pub fn round_trip_holds(q: &Quasitriangulation, a: &str, x: &TorusElement) -> Result<bool> {
    let f = flip(q, a)?;
    let y = transfer_with(q, &f, x)?;
    let back = flip(&f.new_q, &f.new_edge)?;
    let star = f.new_q.require_edge(&f.new_edge)?;
    let n = y.terms().map(|(k, _)| -k[star]).max().unwrap_or(0).max(0);
    let t = f.target_torus();
    let mut k = t.zero_exponent();
    k[star] = n;
    let cleared = y.try_mul(&TorusElement::monomial(&t, x.ring(), k))?;
    let lhs = transfer_with(&f.new_q, &back, &cleared)?;
    let star_back = back.theta_of_flipped(x.ring())?;
    // Theta' lands in the torus of `back.new_q`, which matches `q` up to end swaps.
    let rhs = x.retarget(&back.target_torus())?.try_mul(&star_back.pow(n as u32))?;
    Ok(lhs == rhs)
}

/// Frobenius compatibility of a Case 1 flip at order `N`:
/// `F_N(Theta_eps(a)) = Theta_xi(F_N(a))`, i.e. `(X + Y)^N = X^N + Y^N`.
pub fn verify_frobenius_flip(q: &Quasitriangulation, a: &str, ring: &Ring, n: u32) -> Result<bool> {
    let f = flip(q, a)?;
    if !matches!(f.case, FlipCase::One { .. }) {
        return Err(not_flippable(a, "Frobenius compatibility is checked on Case 1 flips"));
    }
    let target = f.target_torus();
    let theta_eps = f.theta_of_flipped(ring)?;
    let lhs = frobenius(&epsilon_to_source(&theta_eps, n), n, &target)?;
    let source = q.x_torus();
    let ai = q.require_edge(a)?;
    let mut k = source.zero_exponent();
    k[ai] = n as i64;
    let rhs = transfer_with(q, &f, &TorusElement::monomial(&source, ring, k))?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::root_data;
    use crate::surface::{builtin, Face};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn polynomial_in(q: &Quasitriangulation, a: &str, rng: &mut ChaCha8Rng, ring: &Ring) -> TorusElement {
        let t = q.x_torus();
        let ai = q.require_edge(a).unwrap();
        let mut x = TorusElement::zero(&t, ring);
        for _ in 0..3 {
            let k: Vec<i64> = (0..t.len()).map(|i| if i == ai { rng.gen_range(0..=2) } else { rng.gen_range(-2..=2) }).collect();
            let c = ring.v_pow(rng.gen_range(-3..=3)).scale_int(&rng.gen_range(-3i64..=3).into());
            x = &x + &TorusElement::term(&t, k, c);
        }
        x
    }

    #[test]
    fn quad_case_one_labels_and_commutation() {
        let (_, q) = builtin("quad").unwrap();
        let f = flip(&q, "a").unwrap();
        assert_eq!(f.case, FlipCase::One { b: "b".into(), c: "c".into(), d: "d".into(), e: "e".into() });
        let r = Ring::symbolic();
        let (x, y) = f.case_one_terms(&r).unwrap();
        assert_eq!(&x * &y, (&y * &x).scale(&r.v_pow(8)));
        for face in f.new_q.validate().unwrap() {
            assert!(matches!(face, Face::Triangle { .. }));
        }
    }

    #[test]
    fn eye_case_two_labels() {
        let (_, q) = builtin("eye").unwrap();
        let f = flip(&q, "a").unwrap();
        assert_eq!(f.case, FlipCase::Two { b: "b".into(), c: "c".into(), hole: "beta".into() });
        assert_eq!(f.new_q.hole_of(f.new_q.require_edge("a*").unwrap()), Some("beta"));
        let back = flip(&f.new_q, "a*").unwrap();
        assert_eq!(back.case, FlipCase::Two { b: "c".into(), c: "b".into(), hole: "beta".into() });
        assert!(back.new_q.equivalent(&q));
    }

    #[test]
    fn annulus_flip_at_b() {
        let (_, q) = builtin("annulus2").unwrap();
        let f = flip(&q, "b").unwrap();
        let r = Ring::symbolic();
        let t = f.target_torus();
        let expect = TorusElement::from_terms(
            &t,
            &r,
            [(t.exponent(&[("a", 2), ("b*", -1)]).unwrap(), r.one()), (t.exponent(&[("c", 1), ("d", 1), ("b*", -1)]).unwrap(), r.one())],
        );
        assert_eq!(f.theta_of_flipped(&r).unwrap(), expect);
        let s = q.x_torus();
        let a = TorusElement::generator(&s, &r, "a").unwrap();
        assert_eq!(transfer_with(&q, &f, &a).unwrap(), TorusElement::generator(&t, &r, "a").unwrap());
    }

    #[test]
    fn double_flip_is_identity_up_to_relabeling() {
        for (name, edge) in [("quad", "a"), ("eye", "a"), ("annulus2", "a"), ("annulus2", "b"), ("holed_triangle", "a"), ("holed_triangle", "b")] {
            let (_, q) = builtin(name).unwrap();
            let f = flip(&q, edge).unwrap();
            let g = flip(&f.new_q, &f.new_edge).unwrap();
            assert_eq!(g.new_edge, edge);
            assert!(g.new_q.equivalent(&q), "{name} at {edge}");
        }
    }

    #[test]
    fn boundary_edges_are_rejected() {
        let (_, q) = builtin("quad").unwrap();
        assert!(matches!(flip(&q, "b"), Err(Error::NotFlippable { .. })));
        assert!(matches!(flip(&q, "zz"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn negative_exponent_is_rejected() {
        let (_, q) = builtin("quad").unwrap();
        let r = Ring::symbolic();
        let t = q.x_torus();
        let x = TorusElement::monomial(&t, &r, t.exponent(&[("a", -1)]).unwrap());
        assert_eq!(
            transfer(&q, "a", &x).unwrap_err(),
            Error::NegativeFlippedExponent { edge: "a".into(), exponent: -1 }
        );
    }

    #[test]
    fn transfer_is_multiplicative_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = Ring::symbolic();
        for (name, edge) in [("quad", "a"), ("eye", "a"), ("annulus2", "b"), ("holed_triangle", "a"), ("holed_triangle", "b")] {
            let (_, q) = builtin(name).unwrap();
            let f = flip(&q, edge).unwrap();
            for _ in 0..5 {
                let x = polynomial_in(&q, edge, &mut rng, &r);
                let y = polynomial_in(&q, edge, &mut rng, &r);
                let lhs = transfer_with(&q, &f, &(&x * &y)).unwrap();
                let rhs = &transfer_with(&q, &f, &x).unwrap() * &transfer_with(&q, &f, &y).unwrap();
                assert_eq!(lhs, rhs, "{name} at {edge}");
                assert!(round_trip_holds(&q, edge, &x).unwrap(), "{name} at {edge}");
            }
        }
    }

    #[test]
    fn frobenius_flip_examples() {
        let (_, q) = builtin("quad").unwrap();
        let r16 = Ring::cyclotomic(16).unwrap();
        assert!(verify_frobenius_flip(&q, "a", &r16, 2).unwrap());
        assert!(!verify_frobenius_flip(&q, "a", &r16, 3).unwrap());
        assert!(!verify_frobenius_flip(&q, "a", &Ring::symbolic(), 2).unwrap());
    }

    #[test]
    fn frobenius_flip_at_root_order() {
        let (_, q) = builtin("quad").unwrap();
        for m in [5u32, 8, 12, 20, 24] {
            let r = Ring::cyclotomic(m).unwrap();
            let n = root_data(m).n;
            assert!(verify_frobenius_flip(&q, "a", &r, n).unwrap(), "m={m}");
        }
    }
}
