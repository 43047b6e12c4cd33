//! The identity verification suite behind `verify`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::center::verify_center;
use crate::chebyshev::{cheb_closed_form, cheb_eval, cheb_eval_scalar, k_plus_kinv_plus_e, ke_torus};
use crate::cli::expr::parse_expression;
use crate::cli::surface_file::parse_surface;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::flips::{flip, round_trip_holds, verify_frobenius_flip};
use crate::frobenius::{frobenius, source_torus};
use crate::qtorus::{ordered_product, Torus, TorusElement};
use crate::random::{self, random_element, random_exponent, random_flips, random_torus};
use crate::scalars::{chebyshev_coefficient, gauss_binomial, gauss_rows, root_data, Ring, Scalar};
use crate::surface::{builtin, BUILTINS};
use crate::surgery::{
    add_point_boundary, add_point_unmarked, plug_hole, plug_window_bijective, surgery_multiply, theta_embed,
    theta_injective_on_window, SurgeryContext, SurgeryElement,
};

/// The annulus fixture shipped with the crate.
pub const ANNULUS_FIXTURE: &str = include_str!("../../tests/fixtures/annulus2.srf");

/// Cyclotomic order used by ring-dependent checks when none is given.
pub const DEFAULT_MODULUS: u32 = 16;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub modulus: Option<u32>,
    pub suite: Option<String>,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { modulus: None, suite: None, seed: random::DEFAULT_SEED, strategy: Strategy::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub location: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {} [{}]", self.name, self.location)
        } else {
            format!("{status} {} [{}] {}", self.name, self.location, self.detail)
        }
    }
}

struct Env {
    ring: Ring,
    modulus: u32,
    seed: u64,
    strategy: Strategy,
}

/// Outcome of one check: pass flag and a short detail.
type Outcome = Result<(bool, String)>;

struct Check {
    suite: &'static str,
    name: &'static str,
    location: &'static str,
    run: fn(&Env) -> Outcome,
}

const CHECKS: &[Check] = &[
    Check { suite: "chebyshev", name: "chebyshev-closed-form", location: "chebyshev::cheb_closed_form", run: cheb_closed_form_check },
    Check { suite: "chebyshev", name: "chebyshev-root-collapse", location: "chebyshev::cheb_closed_form", run: cheb_collapse_check },
    Check { suite: "chebyshev", name: "chebyshev-positivity", location: "scalars::chebyshev_coefficient", run: cheb_positivity_check },
    Check { suite: "chebyshev", name: "chebyshev-scalar-identity", location: "chebyshev::cheb_eval_scalar", run: scalar_identity_check },
    Check { suite: "torus", name: "torus-product-law", location: "qtorus::TorusElement::try_mul", run: product_law_check },
    Check { suite: "torus", name: "torus-power-law", location: "qtorus::TorusElement::pow", run: power_law_check },
    Check { suite: "torus", name: "torus-weyl-invariance", location: "qtorus::weyl_normalize", run: weyl_check },
    Check { suite: "torus", name: "torus-reflection", location: "qtorus::TorusElement::reflection", run: reflection_check },
    Check { suite: "frobenius", name: "frobenius-homomorphism", location: "frobenius::frobenius", run: frobenius_hom_check },
    Check { suite: "frobenius", name: "frobenius-precondition", location: "frobenius::frobenius", run: frobenius_precondition_check },
    Check { suite: "frobenius", name: "gauss-binomial-criterion", location: "scalars::gauss_binomial", run: gauss_criterion_check },
    Check { suite: "frobenius", name: "frobenius-flip", location: "flips::verify_frobenius_flip", run: frobenius_flip_check },
    Check { suite: "annulus", name: "annulus-a-alpha", location: "flips::transfer", run: annulus_a_alpha_check },
    Check { suite: "annulus", name: "annulus-chebyshev", location: "chebyshev::cheb_eval", run: annulus_chebyshev_check },
    Check { suite: "surface", name: "vertex-matrix-golden", location: "surface::Quasitriangulation::vertex_matrix", run: golden_check },
    Check { suite: "surface", name: "builtins-validate", location: "surface::builtin", run: builtins_check },
    Check { suite: "flips", name: "flip-round-trip", location: "flips::flip", run: flip_round_trip_check },
    Check { suite: "flips", name: "transfer-round-trip", location: "flips::round_trip_holds", run: transfer_round_trip_check },
    Check { suite: "center", name: "center-lattice", location: "center::verify_center", run: center_check },
    Check { suite: "surgery", name: "surgery-relation", location: "surgery::surgery_multiply", run: surgery_relation_check },
    Check { suite: "surgery", name: "surgery-theta-multiplicative", location: "surgery::theta_embed", run: theta_mult_check },
    Check { suite: "surgery", name: "surgery-theta-injective", location: "surgery::theta_injective_on_window", run: theta_injective_check },
    Check { suite: "surgery", name: "surgery-associative", location: "surgery::surgery_multiply", run: associativity_check },
    Check { suite: "surgery", name: "surgery-add-point", location: "surgery::add_point_boundary", run: add_point_check },
    Check { suite: "surgery", name: "surgery-plug-hole", location: "surgery::plug_hole", run: plug_check },
    Check { suite: "cli", name: "cli-parse-print", location: "cli::expr::parse_expression", run: parse_print_check },
    Check { suite: "cli", name: "cli-annulus-fixture", location: "cli::surface_file::parse_surface", run: fixture_check },
];

/// Suite names accepted by `--suite`.
pub fn suite_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = CHECKS.iter().map(|c| c.suite).collect();
    names.dedup();
    names
}

/// Run the selected checks; the report keeps the fixed check order.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let selected: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| opts.suite.as_deref().is_none_or(|s| s == "all" || s == c.suite))
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "unknown suite `{}`; expected one of all, {}",
            opts.suite.as_deref().unwrap_or(""),
            suite_names().join(", ")
        )));
    }
    let modulus = opts.modulus.unwrap_or(DEFAULT_MODULUS);
    let env = Env { ring: Ring::cyclotomic(modulus)?, modulus, seed: opts.seed, strategy: opts.strategy };
    Ok(exec::map(opts.strategy, &selected, |c| {
        let (passed, detail) = match (c.run)(&env) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CheckResult { name: c.name, location: c.location, passed, detail }
    }))
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    Ok((ok, detail.into()))
}

fn cheb_closed_form_check(_: &Env) -> Outcome {
    let r = Ring::symbolic();
    let t = ke_torus();
    let x = k_plus_kinv_plus_e(&t, &r);
    // T_n by the three-term recurrence, independent of the closed form.
    let mut prev = TorusElement::scalar(&t, r.int(2));
    let mut cur = x.clone();
    for n in 1..=12u32 {
        if cheb_closed_form(&r, n)? != cur {
            return verdict(false, format!("mismatch at n={n}"));
        }
        let next = &(&x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    verdict(true, "n=1..12")
}

fn cheb_collapse_check(_: &Env) -> Outcome {
    for n in 2..=10u32 {
        let r = Ring::cyclotomic(4 * n)?;
        let t = ke_torus();
        let expect = TorusElement::from_terms(
            &t,
            &r,
            [(vec![n as i64, 0], r.one()), (vec![-(n as i64), 0], r.one()), (vec![0, n as i64], r.one())],
        );
        if cheb_eval(&k_plus_kinv_plus_e(&t, &r), n) != expect || cheb_closed_form(&r, n)? != expect {
            return verdict(false, format!("no collapse at n={n}"));
        }
        for rr in 1..n {
            for j in 0..=n - rr {
                if !chebyshev_coefficient(&r, n, rr, j)?.is_zero() {
                    return verdict(false, format!("c({n},{rr},{j}) is nonzero"));
                }
            }
        }
    }
    verdict(true, "n=2..10, m=4n")
}

fn cheb_positivity_check(_: &Env) -> Outcome {
    let r = Ring::symbolic();
    for n in 2..=12u32 {
        for rr in 1..n {
            for j in 0..=n - rr {
                let c = chebyshev_coefficient(&r, n, rr, j)?;
                if !c.has_nonnegative_coefficients() || c.terms().any(|(e, _)| e % 2 != 0) {
                    return verdict(false, format!("c({n},{rr},{j}) = {c}"));
                }
            }
        }
    }
    verdict(true, "n<=12")
}

fn scalar_identity_check(_: &Env) -> Outcome {
    for m in 1..=64u32 {
        let r = Ring::cyclotomic(m)?;
        let n = root_data(m).n;
        let nn = (n as i64) * (n as i64);
        // xi^2 = v^4 and eps^2 = v^(4 N^2).
        let z = -(r.v_pow(4) + r.v_pow(-4));
        let rhs = -(r.v_pow(4 * nn) + r.v_pow(-4 * nn));
        if cheb_eval_scalar(&z, n) != rhs {
            return verdict(false, format!("m={m}"));
        }
    }
    verdict(true, "m<=64")
}

/// `x^k` as an ordered word of generator letters with a `v`-prefactor.
fn word_product(t: &Torus, k: &[i64], n: &[i64]) -> (i64, Vec<i64>) {
    let len = t.len();
    let normal_shift = |x: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..len {
            for j in i + 1..len {
                s += x[i] * x[j] * t.entry(i, j);
            }
        }
        s
    };
    let mut v = -normal_shift(k) - normal_shift(n);
    let mut word: Vec<(usize, i64)> = Vec::new();
    for x in [k, n] {
        for (i, &p) in x.iter().enumerate() {
            for _ in 0..p.abs() {
                word.push((i, p.signum()));
            }
        }
    }
    // Bubble sort by generator, using x_i x_j = v^(2 A_ij) x_j x_i.
    let mut swapped = true;
    while swapped {
        swapped = false;
        for w in 0..word.len().saturating_sub(1) {
            let (i, s) = word[w];
            let (j, u) = word[w + 1];
            if i > j {
                v += 2 * s * u * t.entry(i, j);
                word.swap(w, w + 1);
                swapped = true;
            }
        }
    }
    let mut total = vec![0; len];
    for (i, s) in word {
        total[i] += s;
    }
    v += normal_shift(&total);
    (v, total)
}

fn product_law_check(env: &Env) -> Outcome {
    let ok = exec::all(env.strategy, 1000, |i| {
        let mut g = random::stream(env.seed, i as u64);
        let size = g.gen_range(1..=4);
        let t = random_torus(&mut g, size, 3);
        let k = random_exponent(&mut g, size, 3);
        let n = random_exponent(&mut g, size, 3);
        let lhs = &TorusElement::monomial(&t, &env.ring, k.clone()) * &TorusElement::monomial(&t, &env.ring, n.clone());
        let (v, sum) = word_product(&t, &k, &n);
        lhs == TorusElement::term(&t, sum, env.ring.v_pow(v))
    });
    verdict(ok, "1000 instances")
}

fn power_law_check(env: &Env) -> Outcome {
    let ok = exec::all(env.strategy, 1000, |i| {
        let mut g = random::stream(env.seed ^ 1, i as u64);
        let size = g.gen_range(1..=4);
        let t = random_torus(&mut g, size, 3);
        let k = random_exponent(&mut g, size, 2);
        let p = g.gen_range(0..=5u32);
        let x = TorusElement::monomial(&t, &env.ring, k.clone());
        let nk: Vec<i64> = k.iter().map(|e| e * p as i64).collect();
        let neg: Vec<i64> = k.iter().map(|e| -e).collect();
        x.pow(p) == TorusElement::monomial(&t, &env.ring, nk)
            && &x * &TorusElement::monomial(&t, &env.ring, neg) == TorusElement::one(&t, &env.ring)
    });
    verdict(ok, "1000 instances")
}

fn weyl_check(env: &Env) -> Outcome {
    let ok = exec::all(env.strategy, 1000, |i| {
        let mut g = random::stream(env.seed ^ 2, i as u64);
        let size = g.gen_range(1..=4);
        let t = random_torus(&mut g, size, 3);
        let mut factors: Vec<Vec<i64>> = (0..g.gen_range(1..=4)).map(|_| random_exponent(&mut g, size, 2)).collect();
        let bracket = |fs: &[Vec<i64>]| {
            let mut shift = 0;
            for a in 0..fs.len() {
                for b in a + 1..fs.len() {
                    shift -= t.pairing(&fs[a], &fs[b]);
                }
            }
            ordered_product(&t, &env.ring, fs).scale(&env.ring.v_pow(shift))
        };
        let first = bracket(&factors);
        factors.shuffle(&mut g);
        let mut sum = t.zero_exponent();
        for f in &factors {
            for (s, x) in sum.iter_mut().zip(f) {
                *s += x;
            }
        }
        first == bracket(&factors) && first == TorusElement::monomial(&t, &env.ring, sum)
    });
    verdict(ok, "1000 instances")
}

fn reflection_check(env: &Env) -> Outcome {
    let ok = exec::all(env.strategy, 1000, |i| {
        let mut g = random::stream(env.seed ^ 3, i as u64);
        let size = g.gen_range(1..=3);
        let t = random_torus(&mut g, size, 3);
        let x = random_element(&mut g, &t, &env.ring, 3, 2);
        let y = random_element(&mut g, &t, &env.ring, 3, 2);
        (&x * &y).reflection() == &y.reflection() * &x.reflection() && x.reflection().reflection() == x
    });
    verdict(ok, "1000 instances")
}

fn frobenius_hom_check(env: &Env) -> Outcome {
    let n = root_data(env.modulus).n.max(2);
    let ok = exec::all(env.strategy, 200, |i| {
        let mut g = random::stream(env.seed ^ 4, i as u64);
        let size = g.gen_range(1..=3);
        let target = random_torus(&mut g, size, 2);
        let source = source_torus(&target, n);
        let x = random_element(&mut g, &source, &env.ring, 3, 2);
        let y = random_element(&mut g, &source, &env.ring, 3, 2);
        let f = |z: &TorusElement| frobenius(z, n, &target).expect("scaled torus");
        let fx = f(&x);
        f(&(&x * &y)) == &fx * &f(&y) && fx.num_terms() == x.num_terms()
    });
    verdict(ok, format!("200 instances, N={n}"))
}

fn frobenius_precondition_check(env: &Env) -> Outcome {
    let t = ke_torus();
    let x = TorusElement::one(&t, &env.ring);
    verdict(matches!(frobenius(&x, 2, &t), Err(Error::MatrixScaleMismatch { n: 2 })), "")
}

fn gauss_criterion_check(env: &Env) -> Outcome {
    let ms: Vec<u32> = (1..=64).collect();
    let bad: Vec<u32> = exec::map(env.strategy, &ms, |&m| {
        let r = Ring::cyclotomic(m).expect("m >= 1");
        let root = root_data(m).n;
        let vanishing: Vec<u32> = gauss_rows(&r, 8)
            .enumerate()
            .skip(2)
            .take(63)
            .filter(|(_, row)| row[1..row.len() - 1].iter().all(Scalar::is_zero))
            .map(|(n, _)| n as u32)
            .collect();
        // Spot-check the single-coefficient entry point against the rows.
        let direct = [1, root / 2, root - 1]
            .into_iter()
            .filter(|&k| (1..root).contains(&k))
            .all(|k| gauss_binomial(&r, root, k, 8).map(|c| c.is_zero()).unwrap_or(false));
        let expected: Vec<u32> = (root >= 2).then_some(root).into_iter().collect();
        let ok = vanishing == expected && direct;
        (!ok).then_some(m)
    })
    .into_iter()
    .flatten()
    .collect();
    verdict(bad.is_empty(), if bad.is_empty() { "m<=64".to_string() } else { format!("fails at m={bad:?}") })
}

fn frobenius_flip_check(env: &Env) -> Outcome {
    let (_, q) = builtin("quad")?;
    let ms: Vec<u32> = (1..=64).collect();
    let bad: Vec<u32> = exec::map(env.strategy, &ms, |&m| {
        let r = Ring::cyclotomic(m).expect("m >= 1");
        let root = root_data(m).n;
        let at_root = verify_frobenius_flip(&q, "a", &r, root).unwrap_or(false);
        let others = (2..=6).filter(|&n| n != root).all(|n| !verify_frobenius_flip(&q, "a", &r, n).unwrap_or(true));
        (!(at_root && others)).then_some(m)
    })
    .into_iter()
    .flatten()
    .collect();
    let symbolic = !verify_frobenius_flip(&q, "a", &Ring::symbolic(), 2)?;
    verdict(bad.is_empty() && symbolic, if bad.is_empty() { "m<=64".to_string() } else { format!("fails at m={bad:?}") })
}

fn annulus_alpha(r: &Ring) -> Result<(Torus, TorusElement, TorusElement, TorusElement)> {
    let (_, q) = builtin("annulus2")?;
    let t = q.x_torus();
    let x = parse_expression("[a^-1 b^-1 c d]", &t, r)?;
    let y = parse_expression("[a b^-1]", &t, r)?;
    let yi = parse_expression("[a^-1 b]", &t, r)?;
    Ok((t, x, y, yi))
}

fn annulus_a_alpha_check(_: &Env) -> Outcome {
    let r = Ring::symbolic();
    let (t, x, y, yi) = annulus_alpha(&r)?;
    let alpha = &(&x + &y) + &yi;
    let a = TorusElement::generator(&t, &r, "a")?;
    let b = TorusElement::generator(&t, &r, "b")?;
    let b_star = parse_expression("[b^-1 a^2] + [b^-1 c d]", &t, &r)?;
    let xi = r.v_pow(2);
    let lhs = &a * &alpha;
    let rhs = &b_star.scale(&xi) + &b.scale(&r.v_pow(-2));
    // The flip at b produces the same b*, read in the flipped torus.
    let (_, q) = builtin("annulus2")?;
    let f = flip(&q, "b")?;
    let theta_b = f.theta_of_flipped(&r)?;
    let flipped = parse_expression("[a^2 b*^-1] + [c d b*^-1]", &f.target_torus(), &r)?;
    verdict(lhs == rhs && theta_b == flipped, "")
}

fn annulus_chebyshev_check(env: &Env) -> Outcome {
    let n = root_data(env.modulus).n;
    let (_, x, y, yi) = annulus_alpha(&env.ring)?;
    let alpha = &(&x + &y) + &yi;
    let holds = cheb_eval(&alpha, n) == &(&x.pow(n) + &y.pow(n)) + &yi.pow(n);
    let sr = Ring::symbolic();
    let (_, sx, sy, syi) = annulus_alpha(&sr)?;
    let salpha = &(&sx + &sy) + &syi;
    let fails_symbolically = cheb_eval(&salpha, 2) != &(&sx.pow(2) + &sy.pow(2)) + &syi.pow(2);
    verdict(holds && fails_symbolically, format!("m={}, N={n}", env.modulus))
}

fn golden_check(_: &Env) -> Outcome {
    let (_, q) = builtin("annulus2")?;
    let p = q.vertex_matrix();
    let mut ok = p.get("a", "b")? == -2;
    for (i, row) in p.rows().iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            let ab = (p.labels()[i].as_str(), p.labels()[j].as_str());
            if ab != ("a", "b") && ab != ("b", "a") {
                ok &= e == 0;
            }
        }
    }
    verdict(ok, "P(a,b) = -2")
}

fn builtins_check(_: &Env) -> Outcome {
    for name in BUILTINS {
        let (_, q) = builtin(name)?;
        q.validate()?;
        let p = q.vertex_matrix();
        for i in 0..p.len() {
            for j in 0..p.len() {
                if p.entry(i, j) != -p.entry(j, i) || p.entry(i, j).abs() > 4 {
                    return verdict(false, format!("{name}: matrix entry ({i},{j})"));
                }
            }
        }
    }
    verdict(true, format!("{} surfaces", BUILTINS.len()))
}

fn flip_round_trip_check(_: &Env) -> Outcome {
    for (name, edge) in [("quad", "a"), ("eye", "a"), ("annulus2", "b"), ("holed_triangle", "b")] {
        let (_, q) = builtin(name)?;
        let f = flip(&q, edge)?;
        f.new_q.validate()?;
        let g = flip(&f.new_q, &f.new_edge)?;
        if g.new_edge != edge || !g.new_q.equivalent(&q) {
            return verdict(false, format!("{name} at {edge}"));
        }
    }
    verdict(true, "")
}

fn transfer_round_trip_check(env: &Env) -> Outcome {
    let cases = [("quad", "a"), ("eye", "a")];
    for (ci, (name, edge)) in cases.iter().enumerate() {
        let (_, q) = builtin(name)?;
        let t = q.x_torus();
        let ai = q.require_edge(edge)?;
        let mut g = random::stream(env.seed ^ 5, ci as u64);
        for _ in 0..10 {
            let mut x = TorusElement::zero(&t, &env.ring);
            for _ in 0..3 {
                let mut k = random_exponent(&mut g, t.len(), 2);
                k[ai] = g.gen_range(0..=2);
                x.add_term(k, &random::random_scalar(&mut g, &env.ring));
            }
            if !round_trip_holds(&q, edge, &x)? {
                return verdict(false, format!("{name} at {edge}: {x}"));
            }
        }
    }
    verdict(true, "quad (case 1), eye (case 2)")
}

fn center_check(env: &Env) -> Outcome {
    let mut surfaces = Vec::new();
    for name in BUILTINS {
        surfaces.push((name.to_string(), builtin(name)?.1));
    }
    let mut g = random::rng(env.seed ^ 6);
    for i in 0..20 {
        let base = BUILTINS[i % BUILTINS.len()];
        let steps = g.gen_range(1..=4);
        surfaces.push((format!("{base}+{steps} flips"), random_flips(&mut g, &builtin(base)?.1, steps)));
    }
    let bad: Vec<String> = exec::map(env.strategy, &surfaces, |(name, q)| (!verify_center(q).passed()).then(|| name.clone()))
        .into_iter()
        .flatten()
        .collect();
    verdict(bad.is_empty(), if bad.is_empty() { format!("{} quasitriangulations", surfaces.len()) } else { bad.join(", ") })
}

fn eye_context() -> Result<std::sync::Arc<SurgeryContext>> {
    SurgeryContext::new(&builtin("eye")?.1)
}

fn random_basis<R: Rng>(g: &mut R, ctx: &std::sync::Arc<SurgeryContext>, ring: &Ring) -> Result<SurgeryElement> {
    let mut k: Vec<i64> = (0..ctx.labels().len())
        .map(|i| if ctx.invertible(i) { g.gen_range(-2..=2) } else { g.gen_range(0..=2) })
        .collect();
    for m in ctx.monogons() {
        if k[m.edge] > 0 && k[m.dual] > 0 {
            let drop = if g.gen_bool(0.5) { m.edge } else { m.dual };
            k[drop] = 0;
        }
    }
    SurgeryElement::basis(ctx, ring, k)
}

fn surgery_relation_check(env: &Env) -> Outcome {
    let ctx = eye_context()?;
    let r = &env.ring;
    let a = SurgeryElement::generator(&ctx, r, "a")?;
    let s = SurgeryElement::generator(&ctx, r, "a*")?;
    let lhs = surgery_multiply(&a, &s)?;
    let rhs = crate::cli::expr::parse_surgery("q^2*b^2 + q^-2*c^2 + beta*[b c]", &ctx, r)?;
    let reversed = surgery_multiply(&s, &a)?;
    let oracle = &theta_embed(&s) * &theta_embed(&a);
    verdict(lhs == rhs && theta_embed(&reversed) == oracle, "a a* and a* a on eye")
}

fn theta_mult_check(env: &Env) -> Outcome {
    let ctxs = [eye_context()?, SurgeryContext::new(&builtin("holed_triangle")?.1)?];
    let ok = exec::all(env.strategy, 200, |i| {
        let mut g = random::stream(env.seed ^ 7, i as u64);
        let ctx = &ctxs[i % 2];
        let x = random_basis(&mut g, ctx, &env.ring).expect("normal key");
        let y = random_basis(&mut g, ctx, &env.ring).expect("normal key");
        theta_embed(&surgery_multiply(&x, &y).expect("same context")) == &theta_embed(&x) * &theta_embed(&y)
    });
    verdict(ok, "200 basis pairs")
}

fn theta_injective_check(_: &Env) -> Outcome {
    verdict(theta_injective_on_window(&eye_context()?, 2), "eye, |exponents| <= 2")
}

fn associativity_check(env: &Env) -> Outcome {
    let ctxs = [eye_context()?, SurgeryContext::new(&builtin("holed_triangle")?.1)?];
    let ok = exec::all(env.strategy, 100, |i| {
        let mut g = random::stream(env.seed ^ 8, i as u64);
        let ctx = &ctxs[i % 2];
        let x = random_basis(&mut g, ctx, &env.ring).expect("normal key");
        let y = random_basis(&mut g, ctx, &env.ring).expect("normal key");
        let z = random_basis(&mut g, ctx, &env.ring).expect("normal key");
        let l = surgery_multiply(&surgery_multiply(&x, &y).unwrap(), &z).unwrap();
        let r = surgery_multiply(&x, &surgery_multiply(&y, &z).unwrap()).unwrap();
        l == r
    });
    verdict(ok, "100 triples")
}

fn add_point_check(env: &Env) -> Outcome {
    let ctx = SurgeryContext::new(&builtin("holed_triangle")?.1)?;
    let maps = [add_point_boundary(&ctx, "c", &env.ring)?, add_point_unmarked(&ctx, "beta", &env.ring)?];
    let mut g = random::rng(env.seed ^ 9);
    for map in &maps {
        for _ in 0..20 {
            let x = random_basis(&mut g, &ctx, &env.ring)?;
            let y = random_basis(&mut g, &ctx, &env.ring)?;
            let lhs = map.apply(&surgery_multiply(&x, &y)?)?;
            let rhs = surgery_multiply(&map.apply(&x)?, &map.apply(&y)?)?;
            if lhs != rhs {
                return verdict(false, format!("{x} * {y}"));
            }
        }
    }
    verdict(true, "boundary point and unmarked point")
}

fn plug_check(env: &Env) -> Outcome {
    let ctx = SurgeryContext::new(&builtin("holed_triangle")?.1)?;
    let r = &env.ring;
    let map = plug_hole(&ctx, "beta", r)?;
    let parse = |s: &str| crate::cli::expr::parse_surgery(s, &ctx, r);
    let kernel = ["a", "a*", "b - c", "beta + q^2 + q^-2"];
    for k in kernel {
        if !map.apply(&parse(k)?)?.is_zero() {
            return verdict(false, format!("{k} survives"));
        }
    }
    let mut g = random::rng(env.seed ^ 10);
    for _ in 0..20 {
        let x = random_basis(&mut g, &ctx, r)?;
        let y = random_basis(&mut g, &ctx, r)?;
        if map.apply(&surgery_multiply(&x, &y)?)? != surgery_multiply(&map.apply(&x)?, &map.apply(&y)?)? {
            return verdict(false, format!("{x} * {y}"));
        }
    }
    verdict(plug_window_bijective(&ctx, "beta", 2)?, "kernel generators, window |exponents| <= 2")
}

fn parse_print_check(env: &Env) -> Outcome {
    let (_, q) = builtin("quad")?;
    let f = flip(&q, "a")?;
    let tori = [q.x_torus(), f.target_torus(), ke_torus()];
    let ok = exec::all(env.strategy, 200, |i| {
        let mut g = random::stream(env.seed ^ 11, i as u64);
        let t = &tori[i % tori.len()];
        let terms = g.gen_range(0..=4);
        let x = random_element(&mut g, t, &env.ring, terms, 3);
        parse_expression(&x.to_string(), t, &env.ring).map(|y| y == x).unwrap_or(false)
    });
    verdict(ok, "200 expressions")
}

fn fixture_check(_: &Env) -> Outcome {
    let (s, q) = parse_surface(ANNULUS_FIXTURE)?;
    let (bs, bq) = builtin("annulus2")?;
    let same = s == bs && q == bq && q.to_surface_file() == bq.to_surface_file();
    let rows: Vec<String> = q.vertex_matrix().rows().iter().map(|r| format!("{r:?}")).collect();
    verdict(same, format!("P = {}", rows.join(" ")))
}
