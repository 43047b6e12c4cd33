//! Integer kernels of vertex matrices and the central monomials they give.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::surface::Quasitriangulation;

/// A basis of a sublattice of `Z^n`, kept in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub dimension: usize,
    pub vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    /// The lattice spanned by `generators`, reduced to Hermite normal form.
    pub fn span(dimension: usize, generators: Vec<Vec<BigInt>>) -> Self {
        LatticeBasis { dimension, vectors: hermite_normal_form(generators) }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Vectors as machine integers; `None` on overflow.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.vectors.iter().map(|v| v.iter().map(|x| x.to_i64()).collect()).collect()
    }
}

/// Row Hermite normal form: pivots positive, entries above pivots reduced
/// into `[0, pivot)`, zero rows dropped.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if !rows[r][col].is_zero() && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].div_floor(&rows[pivot_row][col]);
                let pivot = rows[pivot_row].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for x in rows[pivot_row].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot = rows[pivot_row].clone();
            for r in 0..pivot_row {
                let f = rows[r][col].div_floor(&pivot[col]);
                if !f.is_zero() {
                    for (x, p) in rows[r].iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// A basis of `{k in Z^n : M k = 0}`.
///
/// Unimodular column operations bring `M` to column echelon form while the
/// same operations act on an identity block; the identity columns under the
/// vanishing part of `M` form a saturated basis of the kernel.
pub fn integer_kernel(m: &[Vec<i64>]) -> LatticeBasis {
    let n = m.first().map_or(0, |r| r.len());
    let rows = m.len();
    // cols[j] = (column j of M) followed by (column j of the identity).
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c: Vec<BigInt> = m.iter().map(|r| BigInt::from(r[j])).collect();
            c.extend((0..n).map(|i| BigInt::from((i == j) as i64)));
            c
        })
        .collect();
    let mut pc = 0;
    for r in 0..rows {
        if pc == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in pc..n {
                if !cols[j][r].is_zero() && best.is_none_or(|b| cols[j][r].abs() < cols[b][r].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            cols.swap(pc, b);
            let mut done = true;
            for j in pc + 1..n {
                if cols[j][r].is_zero() {
                    continue;
                }
                let f = cols[j][r].div_floor(&cols[pc][r]);
                let pivot = cols[pc].clone();
                for (x, p) in cols[j].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                if !cols[j][r].is_zero() {
                    done = false;
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
    }
    let kernel = cols[pc..].iter().map(|c| c[rows..].to_vec()).collect();
    LatticeBasis::span(n, kernel)
}

/// `k_beta` for every marked component: the indicator of its boundary edges.
pub fn boundary_vectors(q: &Quasitriangulation) -> BTreeMap<String, Vec<i64>> {
    let comps = &q.surface().boundary_components;
    let mut out = BTreeMap::new();
    for (ci, c) in comps.iter().enumerate() {
        if c.is_unmarked() {
            continue;
        }
        let k = (0..q.edges().len()).map(|e| (q.boundary_component_of(e) == Some(ci)) as i64).collect();
        out.insert(c.name.clone(), k);
    }
    out
}

/// Outcome of the torus-level center check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub nullity: usize,
    pub marked_components: usize,
    pub kernel: LatticeBasis,
    pub boundary_vectors: BTreeMap<String, Vec<i64>>,
    /// The span of the `k_beta` equals the kernel as lattices.
    pub lattice_equal: bool,
    /// Every `k_beta` pairs to zero with every edge.
    pub central: bool,
}

impl CenterReport {
    pub fn passed(&self) -> bool {
        self.lattice_equal && self.central && self.nullity == self.marked_components
    }
}

pub fn verify_center(q: &Quasitriangulation) -> CenterReport {
    let p = q.vertex_matrix();
    let kernel = integer_kernel(p.rows());
    let kb = boundary_vectors(q);
    let span = LatticeBasis::span(
        p.len(),
        kb.values().map(|k| k.iter().map(|&x| BigInt::from(x)).collect()).collect(),
    );
    let central = kb.values().all(|k| (0..p.len()).all(|u| p.pairing(k, &p.unit(u)) == 0));
    CenterReport {
        nullity: kernel.rank(),
        marked_components: kb.len(),
        lattice_equal: span == kernel,
        kernel,
        boundary_vectors: kb,
        central,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flips::flip;
    use crate::surface::{builtin, BUILTINS};

    fn big(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_kernels() {
        assert_eq!(integer_kernel(&[vec![0, -2], vec![2, 0]]).rank(), 0);
        assert_eq!(integer_kernel(&[vec![0, 0], vec![0, 0]]).vectors, big(&[&[1, 0], &[0, 1]]));
        // 2x + 4y = 0 has primitive solution (2, -1).
        assert_eq!(integer_kernel(&[vec![2, 4]]).vectors, big(&[&[2, -1]]));
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y + z = 0 and 2x = 2y: kernel spanned by (1, 1, -2).
        let k = integer_kernel(&[vec![1, 1, 1], vec![2, -2, 0]]);
        assert_eq!(k.vectors, big(&[&[1, 1, -2]]));
    }

    #[test]
    fn hnf_identifies_equal_lattices() {
        let a = LatticeBasis::span(2, big(&[&[1, 2], &[0, 3]]));
        let b = LatticeBasis::span(2, big(&[&[1, 5], &[1, 2]]));
        assert_eq!(a, b);
        let c = LatticeBasis::span(2, big(&[&[1, 2], &[0, 6]]));
        assert_ne!(a, c);
    }

    #[test]
    fn annulus_kernel_and_vectors() {
        let (_, q) = builtin("annulus2").unwrap();
        let k = integer_kernel(q.vertex_matrix().rows());
        assert_eq!(k.vectors, big(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]));
        let bv = boundary_vectors(&q);
        assert_eq!(bv["beta1"], vec![0, 0, 1, 0]);
        assert_eq!(bv["beta2"], vec![0, 0, 0, 1]);
        assert!(verify_center(&q).passed());
    }

    #[test]
    fn quad_eye_triangle() {
        let (_, q) = builtin("quad").unwrap();
        let r = verify_center(&q);
        assert_eq!(r.nullity, 1);
        assert_eq!(r.boundary_vectors["outer"], vec![0, 1, 1, 1, 1]);
        assert!(r.passed());
        let (_, e) = builtin("eye").unwrap();
        let r = verify_center(&e);
        assert_eq!(r.kernel.vectors, big(&[&[0, 1, 1]]));
        assert!(r.passed());
        let (_, t) = builtin("triangle").unwrap();
        assert_eq!(boundary_vectors(&t)["outer"], vec![1, 1, 1]);
    }

    #[test]
    fn flipped_surfaces_pass() {
        for name in BUILTINS {
            let (_, q) = builtin(name).unwrap();
            assert!(verify_center(&q).passed(), "{name}");
            for e in q.classify_edges().inner {
                let f = flip(&q, &e).unwrap();
                assert!(verify_center(&f.new_q).passed(), "{name} flipped at {e}");
            }
        }
    }
}
