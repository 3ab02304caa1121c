//! Turán graphs and the blow-up constructions `H₀`, `H₁`, `H₂`.
//!
//! All blow-ups here start from the same base graph on `2p − 1` vertices: a
//! complete `(p−1)`-partite graph `K_{2,…,2}` with parts `{v_i, u_i}` plus an
//! apex `v₀` joined to every `v_i`. Vertices of a blow-up are laid out part by
//! part in base order, so `V₀` comes first, then `V₁..V_{p−1}`, then
//! `U₁..U_{p−1}`.

use crate::formulas::{construction_modulus, int, ratio, Rational};
use crate::graph::{Graph, GraphBuilder, GraphError, DEFAULT_VERTEX_CAP};
use crate::saturation::{count_saturating, SaturationError};
use serde::{Deserialize, Serialize};
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parameter p = {0} must be at least 3")]
    SmallP(u64),
    #[error("scale x must be at least 1")]
    ZeroScale,
    #[error("feasibility guard p(p-1)(3p-4)x > {removed} fails for p={p}, x={x}")]
    Guard { p: u64, x: u64, removed: u64 },
    #[error("blow-up needs one size per base vertex ({expected}), got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("part map does not describe a {expected}-part blow-up")]
    BadPartMap { expected: usize },
    #[error("target {target} exceeds the current edge count {size}")]
    TargetAboveSize { target: usize, size: usize },
    #[error("trimming stopped at {reached} edges, target {target}: no further removable edge keeps the saturating count")]
    TrimStuck { reached: usize, target: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

fn check_p(p: u64) -> Result<(), ConstructionError> {
    if p < 3 {
        Err(ConstructionError::SmallP(p))
    } else {
        Ok(())
    }
}

/// Part sizes of `T_r(n)`, larger parts first.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    assert!(r >= 1, "Turán graph needs at least one part");
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// The complete balanced `r`-partite graph on `n` vertices.
pub fn turan_graph(n: usize, r: usize) -> Result<Graph, ConstructionError> {
    let sizes = turan_part_sizes(n, r);
    let spec = BlowupSpec::new(Graph::complete(r)?, sizes)?;
    Ok(blow_up(&spec)?.graph)
}

/// `ex(n, K_p) = e(T_{p−1}(n))`. Panics if `p < 2`.
pub fn turan_number(n: u64, p: u64) -> u64 {
    assert!(p >= 2, "ex(n, K_p) needs p >= 2");
    let r = p - 1;
    let (q, t) = (n / r, n % r);
    let sq = t * (q + 1) * (q + 1) + (r - t) * q * q;
    (n * n - sq) / 2
}

/// `δ = t(p−1−t) / (2(p−1))` with `t = n mod (p−1)`.
pub fn delta(n: u64, p: u64) -> Rational {
    assert!(p >= 2, "delta needs p >= 2");
    let t = n % (p - 1);
    ratio(t * (p - 1 - t), 2 * (p - 1))
}

/// `(p−2)n² / (2(p−1)) − δ`, which equals `turan_number(n, p)` exactly.
pub fn turan_number_rational(n: u64, p: u64) -> Rational {
    ratio(p - 2, 2 * (p - 1)) * int(n) * int(n) - delta(n, p)
}

/// `n = modulus·x + y` with `0 <= y < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TuranDecomposition {
    pub p: u64,
    pub n: u64,
    pub x: u64,
    pub y: u64,
}

pub fn decompose_n(n: u64, p: u64) -> Result<TuranDecomposition, ConstructionError> {
    check_p(p)?;
    let m = construction_modulus(p);
    Ok(TuranDecomposition { p, n, x: n / m, y: n % m })
}

/// The apex-extended `K_{2,…,2}` on vertices `v₀, v₁..v_{p−1}, u₁..u_{p−1}`.
pub fn base_graph(p: u64) -> Result<Graph, ConstructionError> {
    check_p(p)?;
    let k = (p - 1) as usize;
    let v = |i: usize| i; // v_i, 0 <= i <= k
    let u = |i: usize| k + i; // u_i, 1 <= i <= k
    let mut b = GraphBuilder::new(2 * k + 1)?;
    for i in 1..=k {
        b.add_edge(v(0), v(i))?;
        for j in i + 1..=k {
            b.add_edge(v(i), v(j))?;
            b.add_edge(v(i), u(j))?;
            b.add_edge(u(i), v(j))?;
            b.add_edge(u(i), u(j))?;
        }
    }
    Ok(b.build())
}

/// A base graph and a size for each of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    pub base: Graph,
    pub sizes: Vec<usize>,
}

impl BlowupSpec {
    pub fn new(base: Graph, sizes: Vec<usize>) -> Result<Self, ConstructionError> {
        if sizes.len() != base.order() {
            return Err(ConstructionError::SizeMismatch {
                expected: base.order(),
                got: sizes.len(),
            });
        }
        Ok(Self { base, sizes })
    }

    pub fn order(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `Σ_{ab ∈ E(base)} sizes[a]·sizes[b]`.
    pub fn size(&self) -> usize {
        self.base
            .edges()
            .iter()
            .map(|&(a, b)| self.sizes[a] * self.sizes[b])
            .sum()
    }

    pub fn part_map(&self) -> PartMap {
        let mut start = 0;
        let ranges = self
            .sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect();
        PartMap { ranges }
    }
}

/// Vertex ranges of the parts of a blow-up, in base-vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<[usize; 2]>", from = "Vec<[usize; 2]>")]
pub struct PartMap {
    pub ranges: Vec<Range<usize>>,
}

impl From<PartMap> for Vec<[usize; 2]> {
    fn from(m: PartMap) -> Self {
        m.ranges.iter().map(|r| [r.start, r.end]).collect()
    }
}

impl From<Vec<[usize; 2]>> for PartMap {
    fn from(v: Vec<[usize; 2]>) -> Self {
        PartMap {
            ranges: v.into_iter().map(|[a, b]| a..b).collect(),
        }
    }
}

impl PartMap {
    /// Index of the part containing `v`.
    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.ranges.iter().position(|r| r.contains(&v))
    }
}

/// A materialized blow-up with its spec and part map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blowup {
    pub spec: BlowupSpec,
    pub parts: PartMap,
    pub graph: Graph,
}

pub fn blow_up(spec: &BlowupSpec) -> Result<Blowup, ConstructionError> {
    blow_up_capped(spec, DEFAULT_VERTEX_CAP)
}

pub fn blow_up_capped(spec: &BlowupSpec, cap: usize) -> Result<Blowup, ConstructionError> {
    let parts = spec.part_map();
    let mut b = GraphBuilder::with_cap(spec.order(), cap)?;
    for (x, y) in spec.base.edges() {
        b.join_ranges(parts.ranges[x].clone(), parts.ranges[y].clone());
    }
    Ok(Blowup {
        spec: spec.clone(),
        parts,
        graph: b.build(),
    })
}

fn h_sizes(p: u64, x: u64, extra_v0: u64, removed: u64) -> Result<Vec<usize>, ConstructionError> {
    check_p(p)?;
    if x == 0 {
        return Err(ConstructionError::ZeroScale);
    }
    let u_size = p * (3 * p - 4) * x;
    if !(p * (p - 1) * (3 * p - 4) * x > removed) {
        return Err(ConstructionError::Guard { p, x, removed });
    }
    let k = p - 1;
    let mut sizes = vec![(2 * k * (p - 2) * (p - 2) * x + extra_v0) as usize];
    sizes.extend((0..k).map(|_| (4 * k * k * (p - 2) * x) as usize));
    // balanced removal, larger shares to lower-indexed U-parts
    sizes.extend((0..k).map(|i| (u_size - removed / k - u64::from(i < removed % k)) as usize));
    Ok(sizes)
}

/// Whether `p(p−1)(3p−4)x > y`.
pub fn h1_guard_ok(p: u64, x: u64, y: u64) -> bool {
    p >= 3 && p * (p - 1) * (3 * p - 4) * x > y
}

pub fn h0_spec(p: u64, x: u64) -> Result<BlowupSpec, ConstructionError> {
    h1_spec(p, x, 0)
}

/// `H₀` with `V₀` grown by `2y` and a balanced `T_{p−1}(y)` removed from the
/// `U`-parts (the highest-indexed vertices of each part).
pub fn h1_spec(p: u64, x: u64, y: u64) -> Result<BlowupSpec, ConstructionError> {
    let sizes = h_sizes(p, x, 2 * y, y)?;
    BlowupSpec::new(base_graph(p)?, sizes)
}

/// As [`h1_spec`] with `2y + 1` new `V₀` vertices and `y + 1` removed.
pub fn h2_spec(p: u64, x: u64, y: u64) -> Result<BlowupSpec, ConstructionError> {
    let sizes = h_sizes(p, x, 2 * y + 1, y + 1)?;
    BlowupSpec::new(base_graph(p)?, sizes)
}

pub fn h0(p: u64, x: u64) -> Result<Blowup, ConstructionError> {
    blow_up(&h0_spec(p, x)?)
}

pub fn h1(p: u64, x: u64, y: u64) -> Result<Blowup, ConstructionError> {
    blow_up(&h1_spec(p, x, y)?)
}

pub fn h2(p: u64, x: u64, y: u64) -> Result<Blowup, ConstructionError> {
    blow_up(&h2_spec(p, x, y)?)
}

/// Removes edges touching a `U`-part, in lexicographic order of
/// `(U-part, vertex, neighbour)`, until `target` edges remain. An edge is
/// only removed if `f_{p+1}` is unchanged afterwards; edges whose removal
/// would change it are skipped.
pub fn trim_to_target(
    g: &Graph,
    parts: &PartMap,
    target: usize,
    p: u64,
) -> Result<Graph, ConstructionError> {
    check_p(p)?;
    let k = (p - 1) as usize;
    if parts.ranges.len() != 2 * k + 1 || parts.ranges.last().map(|r| r.end) != Some(g.order()) {
        return Err(ConstructionError::BadPartMap { expected: 2 * k + 1 });
    }
    let size = g.size();
    if target > size {
        return Err(ConstructionError::TargetAboveSize { target, size });
    }
    let clique = (p + 1) as usize;
    let want = count_saturating(g, clique)?.total;
    let mut cur = g.clone();
    let mut edges = size;
    'outer: for part in &parts.ranges[k + 1..] {
        for u in part.clone() {
            for w in 0..g.order() {
                if edges == target {
                    break 'outer;
                }
                if !cur.has_edge(u, w) {
                    continue;
                }
                let next = cur.without_edge(u, w);
                if count_saturating(&next, clique)?.total == want {
                    cur = next;
                    edges -= 1;
                }
            }
        }
    }
    if edges != target {
        return Err(ConstructionError::TrimStuck { reached: edges, target });
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::contains_clique;

    #[test]
    fn turan_examples() {
        let k33 = turan_graph(6, 2).unwrap();
        assert_eq!(k33.size(), 9);
        assert!(contains_clique(&k33, 3).is_none());
        assert_eq!(turan_part_sizes(7, 3), vec![3, 2, 2]);
        assert_eq!(turan_graph(7, 3).unwrap().size(), 16);
        assert_eq!(turan_graph(4, 4).unwrap(), Graph::complete(4).unwrap());
        assert_eq!(turan_number(66, 3), 1089);
        assert_eq!(turan_number(7, 3), 12);
        assert_eq!(turan_number(5, 6), 10);
    }

    #[test]
    fn turan_number_matches_graph_and_rational_form() {
        for p in 2..=10u64 {
            for n in 0..=500u64 {
                assert_eq!(int(turan_number(n, p)), turan_number_rational(n, p), "n={n} p={p}");
                let d = delta(n, p);
                assert!(d >= int(0) && d <= ratio(p - 1, 8));
            }
        }
        for p in 2..=6u64 {
            for n in 0..=30usize {
                let t = turan_graph(n, (p - 1) as usize).unwrap();
                assert_eq!(t.size() as u64, turan_number(n as u64, p));
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(66, 3), int(0));
        assert_eq!(delta(7, 3), ratio(1, 4));
        assert_eq!(delta(8, 4), ratio(1, 3));
    }

    #[test]
    fn base_graph_examples() {
        let b3 = base_graph(3).unwrap();
        assert_eq!((b3.order(), b3.size(), b3.degree(0)), (5, 6, 2));
        let b4 = base_graph(4).unwrap();
        assert_eq!((b4.order(), b4.degree(0)), (7, 3));
        assert_eq!(b4.size(), 12 + 3);
        assert!(base_graph(2).is_err());
    }

    #[test]
    fn blow_up_examples() {
        let k2 = Graph::complete(2).unwrap();
        let b = blow_up(&BlowupSpec::new(k2, vec![3, 3]).unwrap()).unwrap();
        assert_eq!(b.graph, turan_graph(6, 2).unwrap());
        let c5 = crate::graph::fixtures::cycle(5);
        let id = blow_up(&BlowupSpec::new(c5.clone(), vec![1; 5]).unwrap()).unwrap();
        assert_eq!(id.graph, c5);
        assert!(BlowupSpec::new(c5, vec![1; 4]).is_err());
    }

    #[test]
    fn h0_examples() {
        let h = h0(3, 1).unwrap();
        assert_eq!(h.spec.sizes, vec![4, 16, 16, 15, 15]);
        assert_eq!((h.graph.order(), h.graph.size()), (66, 1089));
        assert!(contains_clique(&h.graph, 4).is_none());
        assert_eq!(h0(4, 1).unwrap().graph.order(), 336);
        let h = h0(3, 2).unwrap();
        assert_eq!((h.graph.order(), h.graph.size()), (132, 4356));
        assert_eq!(h0(3, 1).unwrap(), h1(3, 1, 0).unwrap());
    }

    #[test]
    fn h1_examples() {
        let h = h1(3, 1, 2).unwrap();
        assert_eq!((h.graph.order(), h.graph.size()), (68, 1156));
        assert_eq!(h.spec.sizes, vec![8, 16, 16, 14, 14]);
        let h = h1(3, 1, 3).unwrap();
        assert_eq!(h.spec.sizes[3..], [13, 14]);
        assert!(matches!(h1(3, 1, 31), Err(ConstructionError::Guard { .. })));
        assert!(matches!(h1(3, 1, 30), Err(ConstructionError::Guard { .. })));
        assert!(h1(3, 1, 29).is_ok());
    }

    #[test]
    fn h1_edge_count_is_turan_number() {
        for p in 3..=6u64 {
            for x in 1..=2u64 {
                let m = construction_modulus(p);
                let guard = p * (p - 1) * (3 * p - 4) * x;
                for y in [0, 1, 2, p - 1, guard - 1] {
                    let spec = h1_spec(p, x, y).unwrap();
                    assert_eq!(spec.order() as u64, m * x + y);
                    assert_eq!(spec.size() as u64, turan_number(m * x + y, p), "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn h2_examples() {
        let h = h2(3, 1, 0).unwrap();
        assert_eq!(h.spec.sizes, vec![5, 16, 16, 14, 15]);
        assert_eq!(h.graph.order(), 66);
        assert_eq!(h.graph.size(), 1090);
        assert!(h.graph.size() as u64 > turan_number(66, 3));
        assert!(contains_clique(&h.graph, 4).is_none());
        assert!(h2(3, 1, 29).is_err());
        let h = h2(3, 1, 1).unwrap();
        assert_eq!((h.graph.order(), h.graph.size()), (67, 1124));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_n(66, 3).unwrap();
        assert_eq!((d.x, d.y), (1, 0));
        let d = decompose_n(68, 3).unwrap();
        assert_eq!((d.x, d.y), (1, 2));
        let d = decompose_n(65, 3).unwrap();
        assert_eq!((d.x, d.y), (0, 65));
    }

    #[test]
    fn trim_examples() {
        let h = h2(3, 1, 1).unwrap();
        let before = count_saturating(&h.graph, 4).unwrap().total;
        let g = trim_to_target(&h.graph, &h.parts, 1123, 3).unwrap();
        assert_eq!(g.size(), 1123);
        assert_eq!(count_saturating(&g, 4).unwrap().total, before);
        let same = trim_to_target(&h.graph, &h.parts, h.graph.size(), 3).unwrap();
        assert_eq!(same, h.graph);
        assert!(matches!(
            trim_to_target(&h.graph, &h.parts, 2000, 3),
            Err(ConstructionError::TargetAboveSize { .. })
        ));
    }

    #[test]
    fn part_map_json() {
        let m = h0_spec(3, 1).unwrap().part_map();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[0,4],[4,20],[20,36],[36,51],[51,66]]");
        let back: PartMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.part_of(36), Some(3));
    }
}
