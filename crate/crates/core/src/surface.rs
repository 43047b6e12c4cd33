//! Marked surfaces and quasitriangulations as rotation systems.
//!
//! Every marked point carries the clockwise list of half-edges incident to
//! it. A half-edge is written `name.0` or `name.1` for the two ends of an
//! edge. Because marked points lie on the boundary, each list starts and ends
//! with a boundary edge, and consecutive entries bound a corner of a face.
//!
//! Faces are traced corner by corner: from the corner `(x, y)` at a point,
//! follow `y` to its far end `y'` and continue with the corner `(y', next(y'))`.
//! Faces traced this way are walked counterclockwise.
//!
//! Vertex matrix convention: at each point, a half-edge of `a` listed strictly
//! later than a half-edge of `b` contributes `+1` to `P(a, b)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qtorus::{CommutationMatrix, Torus};

/// A boundary circle with its marked points in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub name: String,
    pub points: Vec<String>,
}

impl BoundaryComponent {
    pub fn is_unmarked(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSurfaceSpec {
    pub boundary_components: Vec<BoundaryComponent>,
    pub genus: u32,
}

impl MarkedSurfaceSpec {
    /// Names of the unmarked components.
    pub fn unmarked(&self) -> Vec<String> {
        self.boundary_components.iter().filter(|c| c.is_unmarked()).map(|c| c.name.clone()).collect()
    }

    /// Names of the marked components.
    pub fn marked(&self) -> Vec<String> {
        self.boundary_components.iter().filter(|c| !c.is_unmarked()).map(|c| c.name.clone()).collect()
    }

    pub fn num_points(&self) -> usize {
        self.boundary_components.iter().map(|c| c.points.len()).sum()
    }
}

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: u8,
}

impl HalfEdge {
    pub fn twin(self) -> HalfEdge {
        HalfEdge { edge: self.edge, end: 1 - self.end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Point indices of the ends `.0` and `.1`.
    pub ends: [usize; 2],
}

/// Two consecutive half-edges at a point; `right` follows `left` clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub point: usize,
    pub left: HalfEdge,
    pub right: HalfEdge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face {
    /// Edges and corners in counterclockwise order; corner `i` lies between
    /// `edges[i]` and `edges[i + 1]`... as traced from its first corner.
    Triangle { edges: [usize; 3], corners: [Corner; 3] },
    HoledMonogon { edge: usize, hole: String },
}

/// Edge classification by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClasses {
    pub boundary: Vec<String>,
    pub inner: Vec<String>,
    pub monogon: Vec<String>,
    pub essential: Vec<String>,
}

/// Name-level description of a surface and a quasitriangulation; the surface
/// file format maps onto it line by line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceBuilder {
    /// `(component, marked points counterclockwise)`.
    pub components: Vec<(String, Vec<String>)>,
    /// `(edge, end .0 point, end .1 point)`.
    pub edges: Vec<(String, String, String)>,
    /// `(point, clockwise half-edges as (edge, end))`.
    pub orders: Vec<(String, Vec<(String, u8)>)>,
    /// `(unmarked component, monogon edge)`.
    pub holes: Vec<(String, String)>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidQuasitriangulation(msg.into()))
}

/// Names usable for edges, points and components.
pub fn is_valid_name(name: &str) -> bool {
    let core = name.strip_suffix('*').unwrap_or(name);
    let mut chars = core.chars();
    let ok_start = matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_');
    ok_start && chars.all(|c| c.is_alphanumeric() || c == '_') && core != "v" && core != "q"
}

impl SurfaceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn boundary(mut self, name: &str, points: &[&str]) -> Self {
        self.components.push((name.into(), points.iter().map(|p| p.to_string()).collect()));
        self
    }

    pub fn edge(mut self, name: &str, p0: &str, p1: &str) -> Self {
        self.edges.push((name.into(), p0.into(), p1.into()));
        self
    }

    /// Half-edges written `name.0` / `name.1`.
    pub fn order(mut self, point: &str, half_edges: &[&str]) -> Self {
        let parsed = half_edges
            .iter()
            .map(|h| {
                let (e, end) = h.rsplit_once('.').expect("half-edge literal needs a .0/.1 suffix");
                (e.to_string(), end.parse::<u8>().expect("half-edge end must be 0 or 1"))
            })
            .collect();
        self.orders.push((point.into(), parsed));
        self
    }

    pub fn hole(mut self, hole: &str, edge: &str) -> Self {
        self.holes.push((hole.into(), edge.into()));
        self
    }

    /// Resolve names and run full validation.
    pub fn build(&self) -> Result<Quasitriangulation> {
        let mut q = self.build_unchecked()?;
        let faces = q.validate()?;
        let triangles = faces.iter().filter(|f| matches!(f, Face::Triangle { .. })).count() as i64;
        let chi = q.points.len() as i64 - q.edges.len() as i64 + triangles;
        let b = q.surface.boundary_components.len() as i64;
        let two_g = 2 - b - chi;
        if two_g < 0 || two_g % 2 != 0 {
            return invalid(format!("Euler characteristic {chi} is inconsistent with {b} boundary components"));
        }
        q.surface.genus = (two_g / 2) as u32;
        q.check_quasitriangulable()?;
        Ok(q)
    }

    /// Resolve names only; face structure is not checked.
    pub fn build_unchecked(&self) -> Result<Quasitriangulation> {
        if self.components.is_empty() && self.edges.is_empty() && self.orders.is_empty() {
            return Err(Error::EmptySurface);
        }
        let mut points: Vec<(String, usize)> = Vec::new();
        let mut point_index: HashMap<String, usize> = HashMap::new();
        let mut comp_names = BTreeSet::new();
        for (ci, (name, pts)) in self.components.iter().enumerate() {
            if !is_valid_name(name) || !comp_names.insert(name.clone()) {
                return invalid(format!("bad or duplicate boundary component name `{name}`"));
            }
            for p in pts {
                if !is_valid_name(p) || point_index.insert(p.clone(), points.len()).is_some() {
                    return invalid(format!("bad or duplicate marked point `{p}`"));
                }
                points.push((p.clone(), ci));
            }
        }
        let mut edges = Vec::new();
        let mut edge_index: HashMap<String, usize> = HashMap::new();
        for (name, p0, p1) in &self.edges {
            if !is_valid_name(name) || edge_index.insert(name.clone(), edges.len()).is_some() {
                return invalid(format!("bad or duplicate edge name `{name}`"));
            }
            if comp_names.contains(name) || point_index.contains_key(name) {
                return invalid(format!("edge name `{name}` clashes with another name"));
            }
            let lookup = |p: &String| {
                point_index
                    .get(p)
                    .copied()
                    .ok_or_else(|| Error::InvalidQuasitriangulation(format!("edge `{name}` uses unknown point `{p}`")))
            };
            edges.push(Edge { name: name.clone(), ends: [lookup(p0)?, lookup(p1)?] });
        }
        let mut orders: Vec<Option<Vec<HalfEdge>>> = vec![None; points.len()];
        for (p, list) in &self.orders {
            let Some(&pi) = point_index.get(p) else {
                return invalid(format!("order given for unknown point `{p}`"));
            };
            if orders[pi].is_some() {
                return invalid(format!("point `{p}` has two order lines"));
            }
            let mut hs = Vec::new();
            for (e, end) in list {
                let Some(&ei) = edge_index.get(e) else {
                    return invalid(format!("order at `{p}` uses unknown edge `{e}`"));
                };
                if *end > 1 {
                    return invalid(format!("half-edge `{e}.{end}` does not exist"));
                }
                if edges[ei].ends[*end as usize] != pi {
                    return invalid(format!("half-edge `{e}.{end}` is not incident to `{p}`"));
                }
                hs.push(HalfEdge { edge: ei, end: *end });
            }
            orders[pi] = Some(hs);
        }
        let mut resolved = Vec::new();
        for (pi, o) in orders.into_iter().enumerate() {
            match o {
                Some(o) => resolved.push(o),
                None => return invalid(format!("marked point `{}` has no order line", points[pi].0)),
            }
        }
        let mut holes = BTreeMap::new();
        for (h, e) in &self.holes {
            let Some(ci) = self.components.iter().position(|(n, _)| n == h) else {
                return invalid(format!("hole `{h}` is not a boundary component"));
            };
            if !self.components[ci].1.is_empty() {
                return invalid(format!("hole `{h}` has marked points"));
            }
            let Some(&ei) = edge_index.get(e) else {
                return invalid(format!("hole `{h}` placed in unknown edge `{e}`"));
            };
            if holes.insert(ei, ci).is_some() {
                return invalid(format!("edge `{e}` holds two holes"));
            }
        }
        let mut boundary = BTreeSet::new();
        for o in &resolved {
            if let Some(h) = o.first() {
                boundary.insert(h.edge);
            }
            if let Some(h) = o.last() {
                boundary.insert(h.edge);
            }
        }
        let surface = MarkedSurfaceSpec {
            boundary_components: self
                .components
                .iter()
                .map(|(n, p)| BoundaryComponent { name: n.clone(), points: p.clone() })
                .collect(),
            genus: 0,
        };
        Ok(Quasitriangulation { surface, points, edges, orders: resolved, holes, boundary })
    }
}

/// A quasitriangulation together with its marked surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasitriangulation {
    surface: MarkedSurfaceSpec,
    points: Vec<(String, usize)>,
    edges: Vec<Edge>,
    orders: Vec<Vec<HalfEdge>>,
    holes: BTreeMap<usize, usize>,
    boundary: BTreeSet<usize>,
}

impl Quasitriangulation {
    pub fn surface(&self) -> &MarkedSurfaceSpec {
        &self.surface
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_names(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.name.clone()).collect()
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn require_edge(&self, name: &str) -> Result<usize> {
        self.edge_index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn point_name(&self, p: usize) -> &str {
        &self.points[p].0
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Component index of a marked point.
    pub fn point_component(&self, p: usize) -> usize {
        self.points[p].1
    }

    /// Clockwise half-edge list at a point.
    pub fn order(&self, p: usize) -> &[HalfEdge] {
        &self.orders[p]
    }

    pub fn is_boundary(&self, e: usize) -> bool {
        self.boundary.contains(&e)
    }

    /// Hole name held by a monogon edge.
    pub fn hole_of(&self, e: usize) -> Option<&str> {
        self.holes.get(&e).map(|&c| self.surface.boundary_components[c].name.as_str())
    }

    /// Monogon edge of an unmarked component.
    pub fn monogon_of(&self, hole: &str) -> Option<usize> {
        self.holes.iter().find(|(_, &c)| self.surface.boundary_components[c].name == hole).map(|(&e, _)| e)
    }

    /// Monogon edges in edge order.
    pub fn monogon_edges(&self) -> Vec<usize> {
        self.holes.keys().copied().collect()
    }

    pub fn half_edge_name(&self, h: HalfEdge) -> String {
        format!("{}.{}", self.edges[h.edge].name, h.end)
    }

    /// `(point, position)` of a half-edge.
    pub fn locate(&self, h: HalfEdge) -> Option<(usize, usize)> {
        self.orders
            .iter()
            .enumerate()
            .find_map(|(p, o)| o.iter().position(|x| *x == h).map(|i| (p, i)))
    }

    /// The half-edge following `h` clockwise at its point, if any.
    pub fn next_cw(&self, h: HalfEdge) -> Option<HalfEdge> {
        let (p, i) = self.locate(h)?;
        self.orders[p].get(i + 1).copied()
    }

    /// The half-edge preceding `h` clockwise at its point, if any.
    pub fn prev_cw(&self, h: HalfEdge) -> Option<HalfEdge> {
        let (p, i) = self.locate(h)?;
        i.checked_sub(1).map(|j| self.orders[p][j])
    }

    /// Labels of the torus `X(Delta)`: edges followed by unmarked components.
    pub fn torus_labels(&self) -> Vec<String> {
        let mut labels = self.edge_names();
        labels.extend(self.surface.unmarked());
        labels
    }

    /// The vertex matrix over edge labels.
    pub fn vertex_matrix(&self) -> CommutationMatrix {
        let n = self.edges.len();
        let mut m = vec![vec![0i64; n]; n];
        for o in &self.orders {
            for (i, early) in o.iter().enumerate() {
                for late in &o[i + 1..] {
                    if late.edge != early.edge {
                        m[late.edge][early.edge] += 1;
                        m[early.edge][late.edge] -= 1;
                    }
                }
            }
        }
        CommutationMatrix::new(self.edge_names(), m).expect("vertex matrices are antisymmetric")
    }

    /// The commutation matrix of `X(Delta)`: the vertex matrix padded with
    /// central generators for the unmarked components.
    pub fn x_torus(&self) -> Torus {
        let p = self.vertex_matrix();
        let n = self.edges.len();
        let labels = self.torus_labels();
        Arc::new(CommutationMatrix::from_upper(labels, |i, j| if i < n && j < n { p.entry(i, j) } else { 0 }))
    }

    pub fn classify_edges(&self) -> EdgeClasses {
        let mut c = EdgeClasses { boundary: vec![], inner: vec![], monogon: vec![], essential: vec![] };
        for (i, e) in self.edges.iter().enumerate() {
            if self.boundary.contains(&i) {
                c.boundary.push(e.name.clone());
            } else {
                c.inner.push(e.name.clone());
            }
            if self.holes.contains_key(&i) {
                c.monogon.push(e.name.clone());
            } else {
                c.essential.push(e.name.clone());
            }
        }
        c
    }

    /// Boundary component containing a boundary edge.
    pub fn boundary_component_of(&self, e: usize) -> Option<usize> {
        self.boundary.contains(&e).then(|| self.points[self.edges[e].ends[0]].1)
    }

    fn check_incidence(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (p, o) in self.orders.iter().enumerate() {
            for h in o {
                if !seen.insert(*h) {
                    return invalid(format!("half-edge `{}` is listed twice", self.half_edge_name(*h)));
                }
                if self.edges[h.edge].ends[h.end as usize] != p {
                    return invalid(format!("half-edge `{}` listed at the wrong point", self.half_edge_name(*h)));
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            for end in 0..2u8 {
                if !seen.contains(&HalfEdge { edge: i, end }) {
                    return invalid(format!("half-edge `{}.{end}` is missing from the orders", e.name));
                }
            }
        }
        Ok(())
    }

    fn check_boundary(&self) -> Result<()> {
        for (p, o) in self.orders.iter().enumerate() {
            if o.len() < 2 {
                return invalid(format!("point `{}` needs at least two half-edges", self.points[p].0));
            }
            for (i, h) in o.iter().enumerate() {
                let end = i == 0 || i + 1 == o.len();
                if self.boundary.contains(&h.edge) && !end {
                    return invalid(format!(
                        "boundary half-edge `{}` sits inside the order at `{}`",
                        self.half_edge_name(*h),
                        self.points[p].0
                    ));
                }
            }
        }
        for &e in &self.boundary {
            let firsts = (0..2u8).filter(|&end| self.orders.iter().any(|o| o[0] == HalfEdge { edge: e, end })).count();
            let lasts = (0..2u8)
                .filter(|&end| self.orders.iter().any(|o| *o.last().unwrap() == HalfEdge { edge: e, end }))
                .count();
            if firsts != 1 || lasts != 1 {
                return invalid(format!("boundary edge `{}` must open one order and close another", self.edges[e].name));
            }
        }
        for comp in &self.surface.boundary_components {
            let k = comp.points.len();
            for (i, p) in comp.points.iter().enumerate() {
                let pi = self.points.iter().position(|(n, _)| n == p).unwrap();
                let last = *self.orders[pi].last().unwrap();
                let far = self.edges[last.edge].ends[1 - last.end as usize];
                let next = &comp.points[(i + 1) % k];
                if self.points[far].0 != *next || self.orders[far][0] != last.twin() {
                    return invalid(format!(
                        "boundary edge `{}` leaving `{p}` does not reach `{next}` along `{}`",
                        self.edges[last.edge].name, comp.name
                    ));
                }
            }
        }
        Ok(())
    }

    /// All faces, traced from corners in point order.
    pub fn trace_faces(&self) -> Result<Vec<(Vec<Corner>, Vec<usize>)>> {
        let mut pos: HashMap<HalfEdge, (usize, usize)> = HashMap::new();
        for (p, o) in self.orders.iter().enumerate() {
            for (i, h) in o.iter().enumerate() {
                pos.insert(*h, (p, i));
            }
        }
        let mut visited = BTreeSet::new();
        let mut faces = Vec::new();
        for (p, o) in self.orders.iter().enumerate() {
            for i in 0..o.len().saturating_sub(1) {
                if visited.contains(&(p, i)) {
                    continue;
                }
                let mut corners = Vec::new();
                let mut edges = Vec::new();
                let (mut cp, mut ci) = (p, i);
                loop {
                    if !visited.insert((cp, ci)) {
                        return invalid("face tracing revisited a corner");
                    }
                    let left = self.orders[cp][ci];
                    let right = self.orders[cp][ci + 1];
                    corners.push(Corner { point: cp, left, right });
                    edges.push(right.edge);
                    let (np, ni) = pos[&right.twin()];
                    if ni + 1 >= self.orders[np].len() {
                        return invalid(format!("face runs off the boundary at `{}`", self.half_edge_name(right.twin())));
                    }
                    if (np, ni) == (p, i) {
                        break;
                    }
                    (cp, ci) = (np, ni);
                    if corners.len() > 4 * self.edges.len() + 4 {
                        return invalid("face tracing did not close");
                    }
                }
                faces.push((corners, edges));
            }
        }
        Ok(faces)
    }

    /// Trace and classify every face; checks boundary data and hole placement.
    pub fn validate(&self) -> Result<Vec<Face>> {
        if self.points.is_empty() {
            return invalid("surface has no marked points");
        }
        self.check_incidence()?;
        self.check_boundary()?;
        let mut out = Vec::new();
        let mut monogon_faces = BTreeSet::new();
        for (corners, edges) in self.trace_faces()? {
            match corners.len() {
                1 => {
                    let e = edges[0];
                    let Some(&c) = self.holes.get(&e) else {
                        return invalid(format!("monogon bounded by `{}` encloses no hole", self.edges[e].name));
                    };
                    if !monogon_faces.insert(e) {
                        return invalid(format!("edge `{}` bounds two monogons", self.edges[e].name));
                    }
                    out.push(Face::HoledMonogon { edge: e, hole: self.surface.boundary_components[c].name.clone() });
                }
                3 => {
                    out.push(Face::Triangle {
                        edges: [edges[0], edges[1], edges[2]],
                        corners: [corners[0], corners[1], corners[2]],
                    });
                }
                k => {
                    let names: Vec<&str> = edges.iter().map(|&e| self.edges[e].name.as_str()).collect();
                    return invalid(format!("face with {k} corners along {names:?}"));
                }
            }
        }
        for &e in self.holes.keys() {
            if !monogon_faces.contains(&e) {
                return invalid(format!("hole assigned to `{}`, which does not bound a monogon", self.edges[e].name));
            }
        }
        for comp in self.surface.boundary_components.iter().filter(|c| c.is_unmarked()) {
            if self.monogon_of(&comp.name).is_none() {
                return invalid(format!("unmarked component `{}` sits in no monogon", comp.name));
            }
        }
        Ok(out)
    }

    fn check_quasitriangulable(&self) -> Result<()> {
        let comps = self.surface.boundary_components.len();
        let pts = self.points.len();
        if self.surface.genus == 0 && comps == 1 && pts <= 2 {
            return invalid("a disk with at most two marked points is not quasitriangulable");
        }
        if self.surface.genus == 0 && comps == 2 && pts == 1 {
            return invalid("an annulus with one marked point is not quasitriangulable");
        }
        Ok(())
    }

    /// The name-level description, ready for editing and rebuilding.
    pub fn to_builder(&self) -> SurfaceBuilder {
        SurfaceBuilder {
            components: self
                .surface
                .boundary_components
                .iter()
                .map(|c| (c.name.clone(), c.points.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.name.clone(), self.points[e.ends[0]].0.clone(), self.points[e.ends[1]].0.clone()))
                .collect(),
            orders: self
                .orders
                .iter()
                .enumerate()
                .map(|(p, o)| (self.points[p].0.clone(), o.iter().map(|h| (self.edges[h.edge].name.clone(), h.end)).collect()))
                .collect(),
            holes: self
                .holes
                .iter()
                .map(|(&e, &c)| (self.surface.boundary_components[c].name.clone(), self.edges[e].name.clone()))
                .collect(),
        }
    }

    /// Structural equality up to swapping the two ends of edges.
    pub fn equivalent(&self, other: &Quasitriangulation) -> bool {
        if self.surface != other.surface
            || self.points != other.points
            || self.edges.len() != other.edges.len()
            || self.holes != other.holes
            || self.boundary != other.boundary
        {
            return false;
        }
        let mut choices: Vec<Vec<bool>> = Vec::new();
        for (a, b) in self.edges.iter().zip(&other.edges) {
            if a.name != b.name {
                return false;
            }
            let mut c = Vec::new();
            if a.ends == b.ends {
                c.push(false);
            }
            if a.ends == [b.ends[1], b.ends[0]] {
                c.push(true);
            }
            if c.is_empty() {
                return false;
            }
            choices.push(c);
        }
        let ambiguous: Vec<usize> = (0..choices.len()).filter(|&i| choices[i].len() > 1).collect();
        if ambiguous.len() > 16 {
            return false;
        }
        for mask in 0u32..(1 << ambiguous.len()) {
            let mut swap: Vec<bool> = choices.iter().map(|c| c[0]).collect();
            for (bit, &i) in ambiguous.iter().enumerate() {
                swap[i] = mask & (1 << bit) != 0;
            }
            let mapped: Vec<Vec<HalfEdge>> = other
                .orders
                .iter()
                .map(|o| o.iter().map(|h| if swap[h.edge] { h.twin() } else { *h }).collect())
                .collect();
            if mapped == self.orders {
                return true;
            }
        }
        false
    }

    /// Text in the surface file format.
    pub fn to_surface_file(&self) -> String {
        let b = self.to_builder();
        let mut out = String::new();
        for (n, pts) in &b.components {
            if pts.is_empty() {
                out.push_str(&format!("boundary {n}\n"));
            } else {
                out.push_str(&format!("boundary {n} {}\n", pts.join(" ")));
            }
        }
        for (n, p0, p1) in &b.edges {
            out.push_str(&format!("edge {n} {p0} {p1}\n"));
        }
        for (p, hs) in &b.orders {
            let hs: Vec<String> = hs.iter().map(|(e, end)| format!("{e}.{end}")).collect();
            out.push_str(&format!("order {p} {}\n", hs.join(" ")));
        }
        for (h, e) in &b.holes {
            out.push_str(&format!("hole {h} in {e}\n"));
        }
        out
    }
}

impl fmt::Display for Quasitriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_surface_file())
    }
}

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["annulus2", "eye", "quad", "triangle", "holed_triangle"];

/// The builtin example surfaces.
///
/// * `annulus2`: annulus with one marked point per boundary circle; inner
///   edges `a`, `b` and boundary loops `c`, `d`.
/// * `eye`: bigon with sides `b`, `c` around the hole `beta`, monogon edge `a`
///   based at `p1`.
/// * `quad`: square `p1 p2 p3 p4` with sides `b`, `c`, `d`, `e` and diagonal
///   `a` from `p1` to `p3`.
/// * `triangle`: disk with three marked points and boundary edges `a`, `b`, `c`.
/// * `holed_triangle`: disk with three marked points and the hole `beta`;
///   monogon edge `a` at `p1`, inner edge `b` and boundary edge `c` both run
///   from `p1` to `p2` on either side of the hole.
pub fn builtin(name: &str) -> Result<(MarkedSurfaceSpec, Quasitriangulation)> {
    let b = builtin_builder(name)?;
    let q = b.build()?;
    Ok((q.surface().clone(), q))
}

pub fn builtin_builder(name: &str) -> Result<SurfaceBuilder> {
    let b = SurfaceBuilder::new();
    Ok(match name {
        "annulus2" => b
            .boundary("beta1", &["p1"])
            .boundary("beta2", &["p2"])
            .edge("a", "p1", "p2")
            .edge("b", "p1", "p2")
            .edge("c", "p1", "p1")
            .edge("d", "p2", "p2")
            .order("p1", &["c.0", "a.0", "b.0", "c.1"])
            .order("p2", &["d.0", "a.1", "b.1", "d.1"]),
        "eye" => b
            .boundary("outer", &["p1", "p2"])
            .boundary("beta", &[])
            .edge("a", "p1", "p1")
            .edge("b", "p1", "p2")
            .edge("c", "p1", "p2")
            .order("p1", &["b.0", "a.0", "a.1", "c.0"])
            .order("p2", &["c.1", "b.1"])
            .hole("beta", "a"),
        "quad" => b
            .boundary("outer", &["p1", "p2", "p3", "p4"])
            .edge("a", "p1", "p3")
            .edge("b", "p1", "p2")
            .edge("c", "p2", "p3")
            .edge("d", "p3", "p4")
            .edge("e", "p4", "p1")
            .order("p1", &["e.1", "a.0", "b.0"])
            .order("p2", &["b.1", "c.0"])
            .order("p3", &["c.1", "a.1", "d.0"])
            .order("p4", &["d.1", "e.0"]),
        "triangle" => b
            .boundary("outer", &["p1", "p2", "p3"])
            .edge("a", "p1", "p2")
            .edge("b", "p2", "p3")
            .edge("c", "p3", "p1")
            .order("p1", &["c.1", "a.0"])
            .order("p2", &["a.1", "b.0"])
            .order("p3", &["b.1", "c.0"]),
        "holed_triangle" => b
            .boundary("outer", &["p1", "p2", "p3"])
            .boundary("beta", &[])
            .edge("a", "p1", "p1")
            .edge("b", "p1", "p2")
            .edge("c", "p1", "p2")
            .edge("d", "p2", "p3")
            .edge("e", "p3", "p1")
            .order("p1", &["e.1", "b.0", "a.0", "a.1", "c.0"])
            .order("p2", &["c.1", "b.1", "d.0"])
            .order("p3", &["d.1", "e.0"])
            .hole("beta", "a"),
        other => return Err(Error::InvalidArgument(format!("unknown builtin surface `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(q: &Quasitriangulation, es: &[usize]) -> Vec<String> {
        es.iter().map(|&e| q.edges()[e].name.clone()).collect()
    }

    #[test]
    fn annulus_vertex_matrix() {
        let (_, q) = builtin("annulus2").unwrap();
        let p = q.vertex_matrix();
        assert_eq!(p.get("a", "b").unwrap(), -2);
        for x in ["a", "b", "c", "d"] {
            for y in ["a", "b", "c", "d"] {
                if (x, y) != ("a", "b") && (x, y) != ("b", "a") {
                    assert_eq!(p.get(x, y).unwrap(), 0, "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn annulus_faces() {
        let (s, q) = builtin("annulus2").unwrap();
        assert_eq!(s.genus, 0);
        let faces = q.validate().unwrap();
        let mut sets: Vec<Vec<String>> = faces
            .iter()
            .map(|f| match f {
                Face::Triangle { edges, .. } => {
                    let mut n = names(&q, edges);
                    n.sort();
                    n
                }
                _ => panic!("unexpected monogon"),
            })
            .collect();
        sets.sort();
        assert_eq!(sets, vec![vec!["a", "b", "c"], vec!["a", "b", "d"]]);
    }

    #[test]
    fn single_edge_matrix_is_zero() {
        let q = SurfaceBuilder::new()
            .boundary("o", &["p"])
            .edge("x", "p", "p")
            .order("p", &["x.0", "x.1"])
            .build_unchecked()
            .unwrap();
        let p = q.vertex_matrix();
        assert_eq!(p.rows(), &[vec![0]]);
    }

    #[test]
    fn eye_matrix_and_classes() {
        let (s, q) = builtin("eye").unwrap();
        let p = q.vertex_matrix();
        assert_eq!(p.rows(), &[vec![0, 2, -2], vec![-2, 0, 0], vec![2, 0, 0]]);
        let c = q.classify_edges();
        assert_eq!(c.monogon, vec!["a"]);
        assert_eq!(c.boundary, vec!["b", "c"]);
        assert_eq!(s.unmarked(), vec!["beta"]);
    }

    #[test]
    fn classes_of_builtins() {
        let (_, q) = builtin("annulus2").unwrap();
        let c = q.classify_edges();
        assert_eq!((c.boundary, c.inner, c.monogon), (vec!["c".into(), "d".into()], vec!["a".into(), "b".into()], vec![]));
        let (_, t) = builtin("triangle").unwrap();
        assert_eq!(t.classify_edges().boundary, vec!["a", "b", "c"]);
        assert_eq!(t.validate().unwrap().len(), 1);
    }

    #[test]
    fn eye_without_hole_is_invalid() {
        let mut b = builtin_builder("eye").unwrap();
        b.holes.clear();
        assert!(matches!(b.build(), Err(Error::InvalidQuasitriangulation(_))));
    }

    #[test]
    fn missing_order_is_invalid() {
        let mut b = builtin_builder("quad").unwrap();
        b.orders.pop();
        assert!(matches!(b.build(), Err(Error::InvalidQuasitriangulation(_))));
        assert_eq!(SurfaceBuilder::new().build().unwrap_err(), Error::EmptySurface);
    }

    #[test]
    fn small_disks_are_rejected() {
        let b = SurfaceBuilder::new()
            .boundary("o", &["p1", "p2"])
            .edge("x", "p1", "p2")
            .edge("y", "p2", "p1")
            .order("p1", &["y.1", "x.0"])
            .order("p2", &["x.1", "y.0"]);
        assert!(b.build().is_err());
    }

    #[test]
    fn all_builtins_validate() {
        for name in BUILTINS {
            let (_, q) = builtin(name).unwrap();
            let p = q.vertex_matrix();
            for i in 0..p.len() {
                assert_eq!(p.entry(i, i), 0);
                for j in 0..p.len() {
                    assert_eq!(p.entry(i, j), -p.entry(j, i));
                    assert!(p.entry(i, j).abs() <= 4);
                }
            }
            let again = q.to_builder().build().unwrap();
            assert_eq!(again, q, "{name}");
        }
    }

    #[test]
    fn equivalence_allows_end_swaps() {
        let (_, q) = builtin("quad").unwrap();
        let mut b = q.to_builder();
        b.edges[0] = ("a".into(), "p3".into(), "p1".into());
        for (_, hs) in b.orders.iter_mut() {
            for h in hs.iter_mut() {
                if h.0 == "a" {
                    h.1 = 1 - h.1;
                }
            }
        }
        let swapped = b.build().unwrap();
        assert_ne!(swapped, q);
        assert!(swapped.equivalent(&q));
    }
}
