#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skein_torus::center::{integer_kernel, verify_center, LatticeBasis};
use skein_torus::cli::{parse_expression, parse_surface};
use skein_torus::flips::flip;
use skein_torus::qtorus::{weyl_normalize, CommutationMatrix, Torus, TorusElement};
use skein_torus::random::random_flips;
use skein_torus::scalars::{quantum_binomial, Ring, Scalar};
use skein_torus::surface::{builtin, BUILTINS};

fn torus_of(upper: &[i64], n: usize) -> Torus {
    let labels = (0..n).map(|i| format!("z{i}")).collect();
    let mut it = upper.iter().copied().cycle();
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            a[i][j] = it.next().unwrap_or(0);
            a[j][i] = -a[i][j];
        }
    }
    Arc::new(CommutationMatrix::new(labels, a).unwrap())
}

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(None), (1u32..=30).prop_map(Some)].prop_map(|m| Ring::from_modulus(m).unwrap())
}

fn scalar(ring: &Ring, terms: &[(i64, i64)]) -> Scalar {
    Scalar::from_terms(ring, terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
}

fn element(t: &Torus, ring: &Ring, terms: &[(Vec<i64>, i64, i64)]) -> TorusElement {
    let n = t.len();
    TorusElement::from_terms(
        t,
        ring,
        terms.iter().map(|(k, e, c)| (k.iter().copied().cycle().take(n).collect(), scalar(ring, &[(*e, *c)]))),
    )
}

fn terms_strategy() -> impl Strategy<Value = Vec<(Vec<i64>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 1..=4), -6i64..=6, -3i64..=3), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_laws(ring in ring_strategy(),
                        a in prop::collection::vec((-8i64..=8, -5i64..=5), 0..4),
                        b in prop::collection::vec((-8i64..=8, -5i64..=5), 0..4),
                        c in prop::collection::vec((-8i64..=8, -5i64..=5), 0..4)) {
        let (a, b, c) = (scalar(&ring, &a), scalar(&ring, &b), scalar(&ring, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in prop::collection::vec((-6i64..=6, -4i64..=4), 1..4),
                                             b in prop::collection::vec((-6i64..=6, -4i64..=4), 1..4)) {
        let r = Ring::symbolic();
        let (a, b) = (scalar(&r, &a), scalar(&r, &b));
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn quantum_binomials_are_bar_invariant(n in 0i64..=10, k in 0u32..=10) {
        prop_assume!(k as i64 <= n);
        let c = quantum_binomial(&Ring::symbolic(), n, k).unwrap();
        prop_assert_eq!(c.conjugate(), c);
    }

    #[test]
    fn torus_multiplication_is_associative(ring in ring_strategy(), upper in prop::collection::vec(-3i64..=3, 6),
                                           n in 1usize..=4, x in terms_strategy(), y in terms_strategy(),
                                           z in terms_strategy()) {
        let t = torus_of(&upper, n);
        let (x, y, z) = (element(&t, &ring, &x), element(&t, &ring, &y), element(&t, &ring, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!((&x * &y).reflection(), &y.reflection() * &x.reflection());
    }

    #[test]
    fn monomials_q_commute(upper in prop::collection::vec(-3i64..=3, 6), n in 1usize..=4,
                           k in prop::collection::vec(-3i64..=3, 4), l in prop::collection::vec(-3i64..=3, 4)) {
        let r = Ring::symbolic();
        let t = torus_of(&upper, n);
        let (k, l): (Vec<i64>, Vec<i64>) = (k[..n].to_vec(), l[..n].to_vec());
        let (x, y) = (TorusElement::monomial(&t, &r, k.clone()), TorusElement::monomial(&t, &r, l.clone()));
        // x^k x^l = v^(2<k,l>) x^l x^k
        prop_assert_eq!(&x * &y, (&y * &x).scale(&r.v_pow(2 * t.pairing(&k, &l))));
        prop_assert_eq!(weyl_normalize(&t, &r, &[k.clone(), l.clone()]), weyl_normalize(&t, &r, &[l, k]));
    }

    #[test]
    fn parse_print_round_trip(ring in ring_strategy(), x in terms_strategy()) {
        let (_, q) = builtin("quad").unwrap();
        let f = flip(&q, "a").unwrap();
        for t in [q.x_torus(), f.target_torus()] {
            let x = element(&t, &ring, &x);
            prop_assert_eq!(parse_expression(&x.to_string(), &t, &ring).unwrap(), x);
        }
    }

    #[test]
    fn random_flips_keep_structure(seed in any::<u64>(), which in 0usize..BUILTINS.len(), steps in 0usize..=6) {
        let (_, q) = builtin(BUILTINS[which]).unwrap();
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let q2 = random_flips(&mut g, &q, steps);
        prop_assert!(q2.validate().is_ok());
        let p = q2.vertex_matrix();
        for i in 0..p.len() {
            for j in 0..p.len() {
                prop_assert_eq!(p.entry(i, j), -p.entry(j, i));
            }
        }
        prop_assert!(verify_center(&q2).passed());
        let (_, parsed) = parse_surface(&q2.to_surface_file()).unwrap();
        prop_assert_eq!(parsed, q2);
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..=4)) {
        let k = integer_kernel(&rows);
        let vs = k.to_i64().unwrap();
        for v in &vs {
            for r in &rows {
                prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
        // Re-spanning a basis in Hermite normal form changes nothing.
        prop_assert_eq!(LatticeBasis::span(5, k.vectors.clone()), k.clone());
        // rank + nullity = number of columns over Q.
        prop_assert_eq!(k.rank() + LatticeBasis::span(5, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).rank(), 5);
    }
}
