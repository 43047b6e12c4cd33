//! The surgery algebra `Z(Delta)`, its embedding into `X(Delta)`, and the
//! surgery homomorphisms for adding marked points and plugging holes.
//!
//! Letters are the edges, one dual letter `a*` per monogon edge `a`, and one
//! central letter per unmarked component. Every letter pair except `(a, a*)`
//! q-commutes; the `a*` rows of the extended matrix are read off the vertex
//! matrix after flipping at `a`. A basis element is a normalized monomial in
//! which no monogon letter appears together with its dual, monogon letters
//! and central letters carry nonnegative powers, and all other edges may
//! carry any power.
//!
//! Products are computed by rewriting. When `a^i` meets `a*^j` the pair is
//! replaced using
//!
//! `a a* = q^2 b^2 + q^-2 c^2 + beta [b c]`
//!
//! and `a* a` is the same right-hand side conjugated by `a`, which is forced
//! by the first relation and the commutation of `a` with `b`, `c`, `beta`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flips::{flip, flipped_name, FlipCase};
use crate::qtorus::{evaluate_homomorphism, factor_ordered, CommutationMatrix, Torus, TorusElement};
use crate::scalars::{Ring, Scalar};
use crate::surface::Quasitriangulation;

type Key = Vec<i64>;
type Terms = BTreeMap<Key, Scalar>;

/// Relation data of one monogon edge, as letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonogonData {
    pub edge: usize,
    pub dual: usize,
    pub b: usize,
    pub c: usize,
    pub hole: usize,
    /// `a a*` as `(key, v-exponent)` terms, unit coefficients.
    relation: Vec<(Key, i64)>,
    /// `a* a` in the same form.
    reversed: Vec<(Key, i64)>,
}

/// Letters, extended commutation matrix and relations of `Z(Delta)`.
#[derive(Debug)]
pub struct SurgeryContext {
    q: Quasitriangulation,
    labels: Vec<String>,
    matrix: Torus,
    x_torus: Torus,
    num_edges: usize,
    monogons: Vec<MonogonData>,
    /// Letter index of each central letter, in `X(Delta)` order.
    central: Vec<usize>,
}

impl PartialEq for SurgeryContext {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.matrix == other.matrix && self.monogons == other.monogons
    }
}

fn add_into(acc: &mut Terms, k: Key, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(slot) => {
            *slot += &c;
            if slot.is_zero() {
                acc.remove(&k);
            }
        }
        None => {
            acc.insert(k, c);
        }
    }
}

impl SurgeryContext {
    /// Build the context of `q`.
    pub fn new(q: &Quasitriangulation) -> Result<Arc<SurgeryContext>> {
        let edges = q.edge_names();
        let n = edges.len();
        let mon = q.monogon_edges();
        let holes = q.surface().unmarked();
        let mut labels = edges.clone();
        let duals: Vec<String> = mon.iter().map(|&a| flipped_name(&edges[a])).collect();
        labels.extend(duals.iter().cloned());
        labels.extend(holes.iter().cloned());
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(Error::InvalidQuasitriangulation("letter names of the surgery algebra collide".into()));
        }
        let len = labels.len();
        let mut m = vec![vec![0i64; len]; len];
        let p = q.vertex_matrix();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = p.entry(i, j);
            }
        }
        let mut monogons = Vec::new();
        let mut flipped = Vec::new();
        for (di, &a) in mon.iter().enumerate() {
            let f = flip(q, &edges[a])?;
            let FlipCase::Two { b, c, hole } = &f.case else {
                return Err(Error::InvalidQuasitriangulation(format!("monogon edge `{}` did not flip as a monogon", edges[a])));
            };
            let pf = f.new_q.vertex_matrix();
            let s = n + di;
            for u in 0..n {
                if u != a {
                    let x = pf.get(&duals[di], &edges[u])?;
                    m[s][u] = x;
                    m[u][s] = -x;
                }
            }
            let bi = q.require_edge(b)?;
            let ci = q.require_edge(c)?;
            let hi = n + mon.len() + holes.iter().position(|h| h == hole).expect("hole of a monogon is unmarked");
            monogons.push(MonogonData { edge: a, dual: s, b: bi, c: ci, hole: hi, relation: vec![], reversed: vec![] });
            flipped.push(f);
        }
        for (di, f) in flipped.iter().enumerate() {
            for (dj, &b) in mon.iter().enumerate() {
                if dj <= di {
                    continue;
                }
                let g = flip(&f.new_q, &edges[b])?;
                let x = g.new_q.vertex_matrix().get(&duals[di], &duals[dj])?;
                m[n + di][n + dj] = x;
                m[n + dj][n + di] = -x;
            }
        }
        let matrix = Arc::new(CommutationMatrix::new(labels.clone(), m)?);
        for md in monogons.iter_mut() {
            let unit = |i: usize| {
                let mut k = vec![0; len];
                k[i] = 1;
                k
            };
            let mut b2 = vec![0; len];
            b2[md.b] += 2;
            let mut c2 = vec![0; len];
            c2[md.c] += 2;
            let mut bc = unit(md.hole);
            bc[md.b] += 1;
            bc[md.c] += 1;
            md.relation = vec![(b2, 4), (c2, -4), (bc, 0)];
            let ea = unit(md.edge);
            md.reversed = md.relation.iter().map(|(k, e)| (k.clone(), e - 2 * matrix.pairing(&ea, k))).collect();
        }
        let central = (n + mon.len()..len).collect();
        Ok(Arc::new(SurgeryContext { q: q.clone(), labels, matrix, x_torus: q.x_torus(), num_edges: n, monogons, central }))
    }

    pub fn quasitriangulation(&self) -> &Quasitriangulation {
        &self.q
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Extended commutation matrix; the `(a, a*)` entries are unused placeholders.
    pub fn matrix(&self) -> &Torus {
        &self.matrix
    }

    pub fn monogons(&self) -> &[MonogonData] {
        &self.monogons
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn letter(&self, name: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn is_restricted(&self, i: usize) -> bool {
        self.monogons.iter().any(|m| m.edge == i || m.dual == i) || self.central.contains(&i)
    }

    /// Letters that may carry negative powers.
    pub fn invertible(&self, i: usize) -> bool {
        !self.is_restricted(i)
    }

    /// Whether `k` indexes a basis element.
    pub fn is_normal(&self, k: &[i64]) -> bool {
        k.len() == self.labels.len()
            && k.iter().enumerate().all(|(i, &x)| x >= 0 || self.invertible(i))
            && self.monogons.iter().all(|m| k[m.edge] == 0 || k[m.dual] == 0)
    }

    fn unit_key(&self, i: usize, p: i64) -> Key {
        let mut k = vec![0; self.labels.len()];
        k[i] = p;
        k
    }

    fn mul_terms(&self, ring: &Ring, x: &Terms, y: &Terms) -> Terms {
        let mut out = Terms::new();
        for (k, c) in x {
            for (n, d) in y {
                let cd = c * d;
                for (key, e) in self.mul_keys(ring, k, n) {
                    add_into(&mut out, key, &cd * &e);
                }
            }
        }
        out
    }

    fn single(&self, ring: &Ring, k: Key) -> Terms {
        let mut t = Terms::new();
        t.insert(k, ring.one());
        t
    }

    fn mul_keys(&self, ring: &Ring, k: &[i64], n: &[i64]) -> Terms {
        for m in &self.monogons {
            if k[m.edge] > 0 && n[m.dual] > 0 {
                return self.resolve(ring, k, n, m.edge, m.dual, &m.relation);
            }
            if k[m.dual] > 0 && n[m.edge] > 0 {
                return self.resolve(ring, k, n, m.dual, m.edge, &m.reversed);
            }
        }
        let sum: Key = k.iter().zip(n).map(|(a, b)| a + b).collect();
        let mut t = Terms::new();
        t.insert(sum, ring.v_pow(self.matrix.pairing(k, n)));
        t
    }

    /// `x^k x^n` where `k` ends in `left^i`, `n` starts with `right^j`, and
    /// `left right` is rewritten by `relation`.
    fn resolve(&self, ring: &Ring, k: &[i64], n: &[i64], left: usize, right: usize, relation: &[(Key, i64)]) -> Terms {
        let (i, j) = (k[left], n[right]);
        let mut k0 = k.to_vec();
        k0[left] = 0;
        let mut n0 = n.to_vec();
        n0[right] = 0;
        let shift = -self.matrix.pairing(&k0, &self.unit_key(left, i)) - self.matrix.pairing(&self.unit_key(right, j), &n0);
        let mut rel = Terms::new();
        for (key, e) in relation {
            add_into(&mut rel, key.clone(), ring.v_pow(*e));
        }
        let middle = self.mul_terms(ring, &self.single(ring, self.unit_key(left, i - 1)), &rel);
        let middle = self.mul_terms(ring, &middle, &self.single(ring, self.unit_key(right, j - 1)));
        let out = self.mul_terms(ring, &self.single(ring, k0), &middle);
        let out = self.mul_terms(ring, &out, &self.single(ring, n0));
        out.into_iter().map(|(key, c)| (key, c.shift(shift))).collect()
    }

    /// `theta(a*)` in `X(Delta)`: `a^-1 (q^2 b^2 + q^-2 c^2 + beta [b c])`.
    pub fn theta_dual(&self, m: &MonogonData, ring: &Ring) -> TorusElement {
        let t = &self.x_torus;
        let to_x = |key: &Key| -> Key {
            let mut x = vec![0; t.len()];
            for (i, &p) in key.iter().enumerate() {
                if p != 0 {
                    x[self.x_index(i).expect("relation letters live in X(Delta)")] += p;
                }
            }
            x
        };
        let rel = TorusElement::from_terms(t, ring, m.relation.iter().map(|(k, e)| (to_x(k), ring.v_pow(*e))));
        let mut inv = vec![0; t.len()];
        inv[m.edge] = -1;
        &TorusElement::monomial(t, ring, inv) * &rel
    }

    /// Index in `X(Delta)` of an edge or central letter.
    fn x_index(&self, i: usize) -> Option<usize> {
        if i < self.num_edges {
            Some(i)
        } else {
            self.central.iter().position(|&c| c == i).map(|p| self.num_edges + p)
        }
    }

    pub fn x_torus(&self) -> &Torus {
        &self.x_torus
    }
}

/// An element of `Z(Delta)` in the normalized basis.
#[derive(Clone, Debug)]
pub struct SurgeryElement {
    ctx: Arc<SurgeryContext>,
    ring: Ring,
    terms: Terms,
}

impl PartialEq for SurgeryElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx) && self.terms == other.terms
    }
}
impl Eq for SurgeryElement {}

impl SurgeryElement {
    pub fn zero(ctx: &Arc<SurgeryContext>, ring: &Ring) -> Self {
        SurgeryElement { ctx: ctx.clone(), ring: ring.clone(), terms: Terms::new() }
    }

    pub fn scalar(ctx: &Arc<SurgeryContext>, c: Scalar) -> Self {
        let mut e = Self::zero(ctx, c.ring());
        add_into(&mut e.terms, vec![0; ctx.labels.len()], c);
        e
    }

    pub fn one(ctx: &Arc<SurgeryContext>, ring: &Ring) -> Self {
        Self::scalar(ctx, ring.one())
    }

    /// `c` times the basis element `k`.
    pub fn term(ctx: &Arc<SurgeryContext>, k: Key, c: Scalar) -> Result<Self> {
        if !ctx.is_normal(&k) {
            return Err(Error::ContextMismatch(format!("exponent {k:?} is not a normal-form basis index")));
        }
        let mut e = Self::zero(ctx, c.ring());
        add_into(&mut e.terms, k, c);
        Ok(e)
    }

    pub fn basis(ctx: &Arc<SurgeryContext>, ring: &Ring, k: Key) -> Result<Self> {
        Self::term(ctx, k, ring.one())
    }

    pub fn generator(ctx: &Arc<SurgeryContext>, ring: &Ring, name: &str) -> Result<Self> {
        let i = ctx.letter(name)?;
        Self::basis(ctx, ring, ctx.unit_key(i, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, Scalar)>>(ctx: &Arc<SurgeryContext>, ring: &Ring, it: I) -> Result<Self> {
        let mut e = Self::zero(ctx, ring);
        for (k, c) in it {
            e = e.try_add(&Self::term(ctx, k, c)?)?;
        }
        Ok(e)
    }

    pub fn context(&self) -> &Arc<SurgeryContext> {
        &self.ctx
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch("elements belong to different surgery algebras".into()))
        }
    }

    fn joined_ring(&self, other: &Self) -> Ring {
        if self.ring.modulus().is_some() {
            self.ring.clone()
        } else {
            other.ring.clone()
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.ring = self.joined_ring(other);
        for (k, c) in &other.terms {
            add_into(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&other.ring.int(-1)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ring = self.joined_ring(other);
        let terms = self.ctx.mul_terms(&ring, &self.terms, &other.terms);
        Ok(SurgeryElement { ctx: self.ctx.clone(), ring, terms })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.ctx, &self.ring);
        for (k, c) in &self.terms {
            add_into(&mut out.terms, k.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx, &self.ring);
        for _ in 0..n {
            acc = acc.try_mul(self).expect("same context");
        }
        acc
    }

    /// The same terms as an element of the torus on the extended matrix.
    pub fn as_torus_element(&self) -> TorusElement {
        TorusElement::from_terms(&self.ctx.matrix, &self.ring, self.terms.iter().map(|(k, c)| (k.clone(), c.clone())))
    }
}

impl fmt::Display for SurgeryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_torus_element().fmt(f)
    }
}

/// `surgery_context`.
pub fn surgery_context(q: &Quasitriangulation) -> Result<Arc<SurgeryContext>> {
    SurgeryContext::new(q)
}

/// `surgery_multiply`.
pub fn surgery_multiply(u: &SurgeryElement, v: &SurgeryElement) -> Result<SurgeryElement> {
    u.try_mul(v)
}

/// `theta`: fixes edges and central letters, sends `a*` to `theta(a*)`.
pub fn theta_embed(u: &SurgeryElement) -> TorusElement {
    let ctx = &u.ctx;
    let ring = &u.ring;
    let t = ctx.x_torus.clone();
    let duals: HashMap<usize, TorusElement> = ctx.monogons.iter().map(|m| (m.dual, ctx.theta_dual(m, ring))).collect();
    let order: Vec<usize> = (0..ctx.labels.len()).collect();
    evaluate_homomorphism(&u.as_torus_element(), &t, &order, |i, p| {
        if let Some(img) = duals.get(&i) {
            Ok(img.pow(p as u32))
        } else {
            let mut k = t.zero_exponent();
            k[ctx.x_index(i).expect("non-dual letters live in X(Delta)")] = p;
            Ok(TorusElement::monomial(&t, ring, k))
        }
    })
    .expect("theta is total on normal forms")
}

/// An algebra map `Z(Delta) -> Z(Delta')` given by generator images.
#[derive(Clone, Debug)]
pub struct SurgeryMap {
    pub source: Arc<SurgeryContext>,
    pub target: Arc<SurgeryContext>,
    images: Vec<SurgeryElement>,
}

impl SurgeryMap {
    pub fn image_of(&self, letter: &str) -> Result<&SurgeryElement> {
        Ok(&self.images[self.source.letter(letter)?])
    }

    fn power_image(&self, i: usize, p: i64) -> Result<SurgeryElement> {
        let img = &self.images[i];
        if p >= 0 {
            return Ok(img.pow(p as u32));
        }
        let mut terms = img.terms();
        let (Some((k, c)), None) = (terms.next(), terms.next()) else {
            return Err(Error::NonInvertibleImage(self.source.labels[i].clone()));
        };
        let unit = c.as_monomial().filter(|(coef, _)| coef.magnitude() == &1u32.into());
        let Some((coef, e)) = unit else {
            return Err(Error::NonInvertibleImage(self.source.labels[i].clone()));
        };
        let neg: Key = k.iter().map(|x| -x).collect();
        if !self.target.is_normal(&neg) {
            return Err(Error::NonInvertibleImage(self.source.labels[i].clone()));
        }
        let ring = img.ring().clone();
        let inv_c = ring.monomial(coef.clone(), -e);
        SurgeryElement::term(&self.target, neg, inv_c).map(|x| x.pow((-p) as u32))
    }

    pub fn apply(&self, x: &SurgeryElement) -> Result<SurgeryElement> {
        if !(Arc::ptr_eq(&x.ctx, &self.source) || *x.ctx == *self.source) {
            return Err(Error::ContextMismatch("element is not in the source of this map".into()));
        }
        let order: Vec<usize> = (0..self.source.labels.len()).collect();
        let mut out = SurgeryElement::zero(&self.target, &x.ring);
        for (k, c) in &x.terms {
            let f = factor_ordered(&self.source.matrix, k, &order)?;
            let mut acc = SurgeryElement::scalar(&self.target, c.shift(f.v_exponent));
            for (i, p) in f.factors {
                acc = acc.try_mul(&self.power_image(i, p)?)?;
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }
}

fn rename_map(source: &Arc<SurgeryContext>, target: &Arc<SurgeryContext>, ring: &Ring, overrides: Vec<(usize, SurgeryElement)>) -> Result<SurgeryMap> {
    let mut images = Vec::new();
    for (i, name) in source.labels.iter().enumerate() {
        if let Some((_, img)) = overrides.iter().find(|(j, _)| *j == i) {
            images.push(img.clone());
        } else {
            images.push(SurgeryElement::generator(target, ring, name)?);
        }
    }
    Ok(SurgeryMap { source: source.clone(), target: target.clone(), images })
}

fn fresh(q: &Quasitriangulation, name: String) -> Result<String> {
    let b = q.to_builder();
    let taken = b.edges.iter().any(|e| e.0 == name)
        || b.components.iter().any(|c| c.0 == name || c.1.contains(&name))
        || q.edge_names().iter().any(|e| flipped_name(e) == name);
    if taken {
        Err(Error::InvalidArgument(format!("generated name `{name}` is already in use")))
    } else {
        Ok(name)
    }
}

/// Scenario 1: a marked point is added on the boundary edge `a`, which
/// becomes inner, cutting off a triangle with new boundary edges `a_1`, `a_2`.
pub fn add_point_boundary(ctx: &Arc<SurgeryContext>, a: &str, ring: &Ring) -> Result<SurgeryMap> {
    let q = &ctx.q;
    let ai = q.require_edge(a)?;
    if !q.is_boundary(ai) {
        return Err(Error::NotBoundaryEdge(a.to_string()));
    }
    let e1 = fresh(q, format!("{a}_1"))?;
    let e2 = fresh(q, format!("{a}_2"))?;
    let w = fresh(q, format!("{a}_p"))?;
    let mut b = q.to_builder();
    // `last` closes the order at `pl`; `first` opens the order at `pf`.
    let (pl, pf) = {
        let mut pl = None;
        let mut pf = None;
        for (p, list) in &b.orders {
            if list.last().map(|h| &h.0) == Some(&a.to_string()) {
                pl = Some(p.clone());
            }
            if list.first().map(|h| &h.0) == Some(&a.to_string()) {
                pf = Some(p.clone());
            }
        }
        (pl.expect("boundary edge closes an order"), pf.expect("boundary edge opens an order"))
    };
    for (p, list) in b.orders.iter_mut() {
        if *p == pl {
            list.push((e1.clone(), 0));
        }
        if *p == pf {
            list.insert(0, (e2.clone(), 1));
        }
    }
    b.orders.push((w.clone(), vec![(e1.clone(), 1), (e2.clone(), 0)]));
    b.edges.push((e1, pl.clone(), w.clone()));
    b.edges.push((e2, w.clone(), pf));
    for (_, pts) in b.components.iter_mut() {
        if let Some(i) = pts.iter().position(|p| *p == pl) {
            pts.insert(i + 1, w.clone());
            break;
        }
    }
    let target = SurgeryContext::new(&b.build()?)?;
    rename_map(ctx, &target, ring, vec![])
}

/// Scenario 2: the unmarked component `beta` receives a marked point `w`.
/// Its monogon edge `a` becomes essential and the new edges are `d`, `e`
/// from the base of `a` to `w` and the boundary loop `f` at `w`.
pub fn add_point_unmarked(ctx: &Arc<SurgeryContext>, beta: &str, ring: &Ring) -> Result<SurgeryMap> {
    let q = &ctx.q;
    let hole_letter = ctx.letter(beta).ok().filter(|i| ctx.central.contains(i)).ok_or_else(|| Error::NotUnmarked(beta.to_string()))?;
    let m = ctx.monogons.iter().find(|m| m.hole == hole_letter).expect("every hole has a monogon").clone();
    let a = q.edges()[m.edge].name.clone();
    let d = fresh(q, format!("{beta}_d"))?;
    let e = fresh(q, format!("{beta}_e"))?;
    let f = fresh(q, format!("{beta}_f"))?;
    let w = fresh(q, format!("{beta}_p"))?;
    let mut b = q.to_builder();
    let mut base = None;
    for (p, list) in b.orders.iter_mut() {
        if let Some(i) = (0..list.len().saturating_sub(1)).find(|&i| list[i].0 == a && list[i + 1].0 == a) {
            list.insert(i + 1, (d.clone(), 0));
            list.insert(i + 1, (e.clone(), 0));
            base = Some(p.clone());
            break;
        }
    }
    let base = base.ok_or_else(|| Error::InvalidQuasitriangulation(format!("monogon `{a}` has separated ends")))?;
    b.orders.push((w.clone(), vec![(f.clone(), 0), (e.clone(), 1), (d.clone(), 1), (f.clone(), 1)]));
    b.edges.push((d.clone(), base.clone(), w.clone()));
    b.edges.push((e.clone(), base, w.clone()));
    b.edges.push((f.clone(), w.clone(), w.clone()));
    b.holes.retain(|(h, _)| h != beta);
    for (c, pts) in b.components.iter_mut() {
        if c == beta {
            pts.push(w.clone());
        }
    }
    let target = SurgeryContext::new(&b.build()?)?;
    let t = &target;
    let bn = q.edges()[m.b].name.clone();
    let cn = q.edges()[m.c].name.clone();
    let key = |parts: &[(&str, i64)]| -> Result<Key> {
        let mut k = vec![0; t.labels.len()];
        for (l, p) in parts {
            k[t.letter(l)?] += p;
        }
        Ok(k)
    };
    let sum = |keys: Vec<Key>| SurgeryElement::from_terms(t, ring, keys.into_iter().map(|k| (k, ring.one())));
    let (a_, b_, c_, d_, e_, f_) = (a.as_str(), bn.as_str(), cn.as_str(), d.as_str(), e.as_str(), f.as_str());
    let beta_img = sum(vec![
        key(&[(d_, -1), (e_, 1)])?,
        key(&[(a_, 1), (d_, -1), (e_, -1), (f_, 1)])?,
        key(&[(d_, 1), (e_, -1)])?,
    ])?;
    let dual_img = sum(vec![
        key(&[(a_, -1), (b_, 2)])?,
        key(&[(a_, -1), (c_, 2)])?,
        key(&[(a_, -1), (b_, 1), (c_, 1), (d_, -1), (e_, 1)])?,
        key(&[(b_, 1), (c_, 1), (d_, -1), (e_, -1), (f_, 1)])?,
        key(&[(a_, -1), (b_, 1), (c_, 1), (d_, 1), (e_, -1)])?,
    ])?;
    rename_map(ctx, t, ring, vec![(hole_letter, beta_img), (m.dual, dual_img)])
}

/// Plugging the hole `beta`: its monogon edge `a` and the side `b` disappear,
/// `b` is identified with `c`, and `beta` becomes `-q^2 - q^-2`.
pub fn plug_hole(ctx: &Arc<SurgeryContext>, beta: &str, ring: &Ring) -> Result<SurgeryMap> {
    let q = &ctx.q;
    let hole_letter = ctx.letter(beta).ok().filter(|i| ctx.central.contains(i)).ok_or_else(|| Error::NotUnmarked(beta.to_string()))?;
    let m = ctx.monogons.iter().find(|m| m.hole == hole_letter).expect("every hole has a monogon").clone();
    let a = q.edges()[m.edge].name.clone();
    let bn = q.edges()[m.b].name.clone();
    let cn = q.edges()[m.c].name.clone();
    if bn == cn {
        return Err(Error::InvalidQuasitriangulation(format!("the triangle around `{a}` has equal sides")));
    }
    let mut b = q.to_builder();
    b.components.retain(|(c, _)| c != beta);
    b.holes.retain(|(h, _)| h != beta);
    b.edges.retain(|e| e.0 != a && e.0 != bn);
    for (_, list) in b.orders.iter_mut() {
        list.retain(|h| h.0 != a && h.0 != bn);
    }
    let target = SurgeryContext::new(&b.build()?)?;
    let zero = SurgeryElement::zero(&target, ring);
    let c_img = SurgeryElement::generator(&target, ring, &cn)?;
    let beta_img = SurgeryElement::scalar(&target, -(&ring.q_pow(2) + &ring.q_pow(-2)));
    let mut overrides = vec![(m.edge, zero.clone()), (m.dual, zero), (m.b, c_img), (hole_letter, beta_img)];
    let mut images = Vec::new();
    for (i, name) in ctx.labels.iter().enumerate() {
        if let Some(pos) = overrides.iter().position(|(j, _)| *j == i) {
            images.push(overrides.swap_remove(pos).1);
        } else {
            images.push(SurgeryElement::generator(&target, ring, name)?);
        }
    }
    Ok(SurgeryMap { source: ctx.clone(), target, images })
}

pub fn psi_add_point_boundary(ctx: &Arc<SurgeryContext>, a: &str, x: &SurgeryElement) -> Result<SurgeryElement> {
    add_point_boundary(ctx, a, x.ring())?.apply(x)
}

pub fn psi_add_point_unmarked(ctx: &Arc<SurgeryContext>, beta: &str, x: &SurgeryElement) -> Result<SurgeryElement> {
    add_point_unmarked(ctx, beta, x.ring())?.apply(x)
}

pub fn psi_plug_hole(ctx: &Arc<SurgeryContext>, beta: &str, x: &SurgeryElement) -> Result<SurgeryElement> {
    plug_hole(ctx, beta, x.ring())?.apply(x)
}

/// Basis indices with every power in `[-bound, bound]` (restricted letters in
/// `[0, bound]`) and the letters in `fixed` held at zero.
pub fn window(ctx: &SurgeryContext, bound: i64, fixed: &[usize]) -> Vec<Key> {
    let len = ctx.labels.len();
    let mut out = vec![vec![0; len]];
    for i in 0..len {
        if fixed.contains(&i) {
            continue;
        }
        let range: Vec<i64> = if ctx.invertible(i) { (-bound..=bound).collect() } else { (0..=bound).collect() };
        out = out
            .into_iter()
            .flat_map(|k| {
                range.iter().map(move |&p| {
                    let mut k = k.clone();
                    k[i] = p;
                    k
                })
            })
            .filter(|k| ctx.is_normal_prefix(k))
            .collect();
    }
    out
}

impl SurgeryContext {
    fn is_normal_prefix(&self, k: &[i64]) -> bool {
        self.monogons.iter().all(|m| k[m.edge] == 0 || k[m.dual] == 0)
    }
}

const PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= PRIME;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

fn specialize(c: &Scalar, t: u64) -> u64 {
    let t_inv = pow_mod(t, PRIME - 2);
    let mut acc = 0u64;
    for (e, coef) in c.terms() {
        let base = if e >= 0 { pow_mod(t, e as u64) } else { pow_mod(t_inv, (-e) as u64) };
        let m = coef % num_bigint::BigInt::from(PRIME);
        let m = ((m + num_bigint::BigInt::from(PRIME)) % num_bigint::BigInt::from(PRIME)).to_string().parse::<u64>().unwrap();
        acc = (acc + base * m) % PRIME;
    }
    acc
}

/// Rank over `F_p` of sparse rows.
fn rank_mod_p(rows: Vec<HashMap<usize, u64>>) -> usize {
    let mut pivots: HashMap<usize, HashMap<usize, u64>> = HashMap::new();
    let mut rank = 0;
    for mut row in rows {
        loop {
            row.retain(|_, v| *v != 0);
            let Some(&lead) = row.keys().min() else { break };
            match pivots.get(&lead) {
                Some(p) => {
                    let f = row[&lead] * pow_mod(p[&lead], PRIME - 2) % PRIME;
                    for (&col, &val) in p {
                        let entry = row.entry(col).or_insert(0);
                        *entry = (*entry + PRIME - f * val % PRIME) % PRIME;
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Whether elements of `X(Delta)` are linearly independent, tested after
/// specializing `v` to an integer modulo a large prime. A full rank there
/// implies independence over `Z[v, v^-1]`.
pub fn independent(elements: &[TorusElement], t: u64) -> bool {
    let mut columns: HashMap<Key, usize> = HashMap::new();
    let mut rows = Vec::new();
    for x in elements {
        let mut row = HashMap::new();
        for (k, c) in x.terms() {
            let n = columns.len();
            let col = *columns.entry(k.clone()).or_insert(n);
            row.insert(col, specialize(c, t));
        }
        rows.push(row);
    }
    rank_mod_p(rows) == elements.len()
}

/// `theta` maps the basis window of the given bound to independent elements.
pub fn theta_injective_on_window(ctx: &Arc<SurgeryContext>, bound: i64) -> bool {
    let ring = Ring::symbolic();
    let images: Vec<TorusElement> = window(ctx, bound, &[])
        .into_iter()
        .map(|k| theta_embed(&SurgeryElement::basis(ctx, &ring, k).expect("window keys are normal")))
        .collect();
    independent(&images, 3)
}

/// The plug-hole map sends the window of basis elements avoiding `a`, `a*`,
/// `b` and `beta` one-to-one onto the basis window of the target.
pub fn plug_window_bijective(ctx: &Arc<SurgeryContext>, beta: &str, bound: i64) -> Result<bool> {
    let ring = Ring::symbolic();
    let map = plug_hole(ctx, beta, &ring)?;
    let hole = ctx.letter(beta)?;
    let m = ctx.monogons.iter().find(|m| m.hole == hole).expect("hole has a monogon");
    let source = window(ctx, bound, &[m.edge, m.dual, m.b, hole]);
    let mut images = BTreeSet::new();
    for k in &source {
        let y = map.apply(&SurgeryElement::basis(ctx, &ring, k.clone())?)?;
        let mut terms = y.terms();
        match (terms.next(), terms.next()) {
            (Some((key, c)), None) if c.is_one() => {
                images.insert(key.clone());
            }
            _ => return Ok(false),
        }
    }
    let target: BTreeSet<Key> = window(&map.target, bound, &[]).into_iter().collect();
    Ok(images.len() == source.len() && images == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(name: &str) -> Arc<SurgeryContext> {
        SurgeryContext::new(&builtin(name).unwrap().1).unwrap()
    }

    fn random_basis(ctx: &Arc<SurgeryContext>, ring: &Ring, rng: &mut ChaCha8Rng) -> SurgeryElement {
        let mut k = vec![0; ctx.labels().len()];
        for i in 0..k.len() {
            k[i] = if ctx.invertible(i) { rng.gen_range(-2..=2) } else { rng.gen_range(0..=2) };
        }
        for m in ctx.monogons() {
            if k[m.edge] > 0 && k[m.dual] > 0 {
                if rng.gen_bool(0.5) {
                    k[m.edge] = 0
                } else {
                    k[m.dual] = 0
                }
            }
        }
        SurgeryElement::basis(ctx, ring, k).unwrap()
    }

    fn random_element(ctx: &Arc<SurgeryContext>, ring: &Ring, rng: &mut ChaCha8Rng) -> SurgeryElement {
        let mut x = SurgeryElement::zero(ctx, ring);
        for _ in 0..2 {
            let c = ring.v_pow(rng.gen_range(-2..=2)).scale_int(&rng.gen_range(1i64..=2).into());
            x = x.try_add(&random_basis(ctx, ring, rng).scale(&c)).unwrap();
        }
        x
    }

    fn gen(ctx: &Arc<SurgeryContext>, r: &Ring, name: &str) -> SurgeryElement {
        SurgeryElement::generator(ctx, r, name).unwrap()
    }

    #[test]
    fn eye_context() {
        let c = ctx("eye");
        assert_eq!(c.labels(), &["a", "b", "c", "a*", "beta"]);
        let m = &c.monogons()[0];
        assert_eq!((m.b, m.c, m.hole), (1, 2, 4));
        let p = builtin("eye").unwrap().1.vertex_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c.matrix().entry(i, j), p.entry(i, j));
            }
        }
    }

    #[test]
    fn a_times_dual_rewrites() {
        let c = ctx("eye");
        let r = Ring::symbolic();
        let lhs = surgery_multiply(&gen(&c, &r, "a"), &gen(&c, &r, "a*")).unwrap();
        let b2 = SurgeryElement::basis(&c, &r, vec![0, 2, 0, 0, 0]).unwrap();
        let c2 = SurgeryElement::basis(&c, &r, vec![0, 0, 2, 0, 0]).unwrap();
        let bc = SurgeryElement::basis(&c, &r, vec![0, 1, 1, 0, 1]).unwrap();
        let rhs = b2.scale(&r.q_pow(2)).try_add(&c2.scale(&r.q_pow(-2))).unwrap().try_add(&bc).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_times_a_matches_theta() {
        let c = ctx("eye");
        let r = Ring::symbolic();
        let a = gen(&c, &r, "a");
        let s = gen(&c, &r, "a*");
        let prod = surgery_multiply(&s, &a).unwrap();
        assert_eq!(theta_embed(&prod), &theta_embed(&s) * &theta_embed(&a));
        let expect = TorusElement::from_terms(
            c.x_torus(),
            &r,
            [(vec![-1, 2, 0, 0], r.one()), (vec![-1, 0, 2, 0], r.one()), (vec![-1, 1, 1, 1], r.one())],
        );
        assert_eq!(theta_embed(&s), expect);
    }

    #[test]
    fn no_monogons_means_torus_product() {
        let c = ctx("quad");
        let r = Ring::symbolic();
        let x = gen(&c, &r, "a");
        let y = gen(&c, &r, "b");
        let p = surgery_multiply(&x, &y).unwrap();
        let t = builtin("quad").unwrap().1.x_torus();
        let xy = &TorusElement::generator(&t, &r, "a").unwrap() * &TorusElement::generator(&t, &r, "b").unwrap();
        assert_eq!(theta_embed(&p), xy);
    }

    #[test]
    fn theta_multiplicative_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = Ring::symbolic();
        for name in ["eye", "holed_triangle"] {
            let c = ctx(name);
            for _ in 0..20 {
                let x = random_element(&c, &r, &mut rng);
                let y = random_element(&c, &r, &mut rng);
                let z = random_element(&c, &r, &mut rng);
                let xy = surgery_multiply(&x, &y).unwrap();
                assert_eq!(theta_embed(&xy), &theta_embed(&x) * &theta_embed(&y), "{name}");
                let l = surgery_multiply(&xy, &z).unwrap();
                let rr = surgery_multiply(&x, &surgery_multiply(&y, &z).unwrap()).unwrap();
                assert_eq!(l, rr, "{name}");
                for (k, _) in l.terms() {
                    assert!(c.is_normal(k));
                }
            }
        }
    }

    #[test]
    fn theta_injective_small_window() {
        assert!(theta_injective_on_window(&ctx("eye"), 1));
        assert!(theta_injective_on_window(&ctx("holed_triangle"), 1));
    }

    #[test]
    fn boundary_point_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = Ring::symbolic();
        for (name, edge) in [("eye", "b"), ("holed_triangle", "c"), ("quad", "d"), ("annulus2", "c")] {
            let c = ctx(name);
            let map = add_point_boundary(&c, edge, &r).unwrap();
            assert!(map.target.quasitriangulation().classify_edges().inner.contains(&edge.to_string()));
            for _ in 0..10 {
                let x = random_element(&c, &r, &mut rng);
                let y = random_element(&c, &r, &mut rng);
                let lhs = map.apply(&surgery_multiply(&x, &y).unwrap()).unwrap();
                let rhs = surgery_multiply(&map.apply(&x).unwrap(), &map.apply(&y).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{name} {edge}");
            }
        }
        assert_eq!(add_point_boundary(&ctx("quad"), "a", &r).unwrap_err(), Error::NotBoundaryEdge("a".into()));
    }

    #[test]
    fn unmarked_point_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = Ring::symbolic();
        for name in ["eye", "holed_triangle"] {
            let c = ctx(name);
            let map = add_point_unmarked(&c, "beta", &r).unwrap();
            let a = gen(&c, &r, "a");
            let s = gen(&c, &r, "a*");
            let lhs = surgery_multiply(&map.apply(&a).unwrap(), &map.apply(&s).unwrap()).unwrap();
            let rhs = map.apply(&surgery_multiply(&a, &s).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "{name}: relation");
            for _ in 0..10 {
                let x = random_element(&c, &r, &mut rng);
                let y = random_element(&c, &r, &mut rng);
                let lhs = map.apply(&surgery_multiply(&x, &y).unwrap()).unwrap();
                let rhs = surgery_multiply(&map.apply(&x).unwrap(), &map.apply(&y).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{name}");
            }
        }
        assert_eq!(add_point_unmarked(&ctx("eye"), "outer", &r).unwrap_err(), Error::NotUnmarked("outer".into()));
    }

    #[test]
    fn plug_hole_kernel_and_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = Ring::symbolic();
        let c = ctx("holed_triangle");
        let map = plug_hole(&c, "beta", &r).unwrap();
        assert!(map.apply(&gen(&c, &r, "a")).unwrap().is_zero());
        assert!(map.apply(&gen(&c, &r, "a*")).unwrap().is_zero());
        let bc = gen(&c, &r, "b").try_sub(&gen(&c, &r, "c")).unwrap();
        assert!(map.apply(&bc).unwrap().is_zero());
        let shifted = gen(&c, &r, "beta").try_add(&SurgeryElement::scalar(&c, &r.q_pow(2) + &r.q_pow(-2))).unwrap();
        assert!(map.apply(&shifted).unwrap().is_zero());
        for _ in 0..10 {
            let x = random_element(&c, &r, &mut rng);
            let y = random_element(&c, &r, &mut rng);
            let lhs = map.apply(&surgery_multiply(&x, &y).unwrap()).unwrap();
            let rhs = surgery_multiply(&map.apply(&x).unwrap(), &map.apply(&y).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(plug_window_bijective(&c, "beta", 2).unwrap());
        // Plugging the eye leaves a bigon, which has no quasitriangulation.
        assert!(matches!(plug_hole(&ctx("eye"), "beta", &r), Err(Error::InvalidQuasitriangulation(_))));
    }
}
