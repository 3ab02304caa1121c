//! Maximum families of vertex-disjoint `K_p`'s and the data derived from them.
//!
//! A packing `ℛ` leaves a remainder `H_ℛ = G − V(ℛ)`. The exact search finds a
//! packing of maximum size (lexicographically least among those), switch
//! refinement then makes `e(H_ℛ)` stable under single-clique switches, and the
//! exhaustive certifier maximises `e(H_ℛ)` over every maximum packing.

use crate::constructions::{delta, turan_number};
use crate::formulas::{int, ratio, rstar_edge_bound, top_class_density_bound, Rational};
use crate::graph::{contains_clique, first_bit, popcount, Cliques, Graph, GraphError, VertexSet};
use crate::saturation::{count_saturating, count_saturating_with, is_saturating, CountOptions, SaturationError};
use serde::Serialize;
use thiserror::Error;

/// Default node budget for the exact packing search.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error("clique size p = {0} must be at least 2")]
    SmallP(usize),
    #[error("packing search exceeded its budget of {budget} nodes (best size so far {best})")]
    BudgetExceeded { budget: u64, best: usize },
    #[error("clique index {index} out of range for a packing of {len} cliques")]
    CliqueIndex { index: usize, len: usize },
    #[error("host contains a K_{p}: {witness:?}")]
    ContainsClique { p: usize, witness: Vec<usize> },
    #[error("switched set {0:?} is not a clique")]
    NotAClique(Vec<usize>),
    #[error("replacement vertices {0:?} are not all in the remainder")]
    OverlapsPacking(Vec<usize>),
    #[error("{0:?} is not a subset of the chosen clique")]
    NotASubclique(Vec<usize>),
    #[error("switch sides have sizes {left} and {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

/// How strongly the remainder's edge count has been maximised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemainderOptimality {
    None,
    SwitchStable,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePacking {
    pub p: usize,
    pub cliques: Vec<Vec<usize>>,
    pub remainder: VertexSet,
    /// Set only by exact search: no larger packing exists.
    pub certified: bool,
    pub remainder_optimality: RemainderOptimality,
}

#[derive(Serialize)]
struct PackingJson<'a> {
    p: usize,
    cliques: &'a [Vec<usize>],
    remainder: Vec<usize>,
    certified: bool,
    remainder_optimality: RemainderOptimality,
}

impl Serialize for CliquePacking {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PackingJson {
            p: self.p,
            cliques: &self.cliques,
            remainder: self.remainder.to_vec(),
            certified: self.certified,
            remainder_optimality: self.remainder_optimality,
        }
        .serialize(s)
    }
}

impl CliquePacking {
    /// Packing from explicit cliques; checks disjointness and cliqueness but
    /// does not certify maximality.
    pub fn from_cliques(g: &Graph, p: usize, mut cliques: Vec<Vec<usize>>) -> Result<Self, PackingError> {
        let mut used = VertexSet::new(g.order());
        for c in &mut cliques {
            c.sort_unstable();
            if c.len() != p || !g.is_clique(c) {
                return Err(PackingError::NotAClique(c.clone()));
            }
            for &v in c.iter() {
                if used.contains(v) {
                    return Err(PackingError::OverlapsPacking(c.clone()));
                }
                used.insert(v);
            }
        }
        Ok(Self {
            p,
            cliques,
            remainder: VertexSet::full(g.order()).difference(&used),
            certified: false,
            remainder_optimality: RemainderOptimality::None,
        })
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// `r = |ℛ| / n`.
    pub fn density(&self) -> Rational {
        let n = self.remainder.universe();
        if n == 0 {
            int(0)
        } else {
            ratio(self.cliques.len() as u64, n as u64)
        }
    }

    pub fn covered(&self) -> VertexSet {
        VertexSet::full(self.remainder.universe()).difference(&self.remainder)
    }

    fn clique_set(&self, i: usize) -> VertexSet {
        VertexSet::from_vertices(self.remainder.universe(), self.cliques[i].iter().copied())
    }

    fn check_index(&self, i: usize) -> Result<(), PackingError> {
        if i < self.cliques.len() {
            Ok(())
        } else {
            Err(PackingError::CliqueIndex { index: i, len: self.cliques.len() })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PackingOptions {
    pub node_budget: u64,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET }
    }
}

enum Goal {
    Maximum,
    AllOfSize(usize),
}

struct Search<'a, 'g> {
    g: &'g Graph,
    p: usize,
    budget: u64,
    nodes: u64,
    goal: Goal,
    cur: Vec<Vec<usize>>,
    best: Option<Vec<Vec<usize>>>,
    visit: &'a mut dyn FnMut(&[Vec<usize>]),
}

impl Search<'_, '_> {
    fn worth(&self, reachable: usize) -> bool {
        match self.goal {
            Goal::Maximum => self.best.as_ref().map_or(true, |b| reachable > b.len()),
            Goal::AllOfSize(t) => reachable >= t,
        }
    }

    /// Upper bound on how many more cliques fit in `free`: the cheaper of
    /// `|free| / p` and a greedy hitting set of the cliques inside `free`.
    fn room(&self, free: &[u64]) -> usize {
        let cheap = popcount(free) / self.p;
        if !self.worth(self.cur.len() + cheap) {
            return cheap;
        }
        let n = self.g.order();
        let mut cliques: Vec<Vec<usize>> =
            Cliques::new(self.g, VertexSet::from_words(n, free.to_vec()), self.p).collect();
        let mut hits = 0;
        let mut count = vec![0usize; n];
        while !cliques.is_empty() && hits < cheap {
            count.iter_mut().for_each(|c| *c = 0);
            for c in &cliques {
                for &v in c {
                    count[v] += 1;
                }
            }
            let pick = (0..n).max_by_key(|&v| (count[v], std::cmp::Reverse(v))).expect("n > 0");
            cliques.retain(|c| !c.contains(&pick));
            hits += 1;
        }
        cheap.min(hits)
    }

    fn dfs(&mut self, free: Vec<u64>) -> Result<(), PackingError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(PackingError::BudgetExceeded {
                budget: self.budget,
                best: self.best.as_ref().map_or(0, Vec::len),
            });
        }
        match self.goal {
            Goal::Maximum => {
                if self.worth(self.cur.len()) {
                    self.best = Some(self.cur.clone());
                }
            }
            Goal::AllOfSize(t) => {
                if self.cur.len() == t {
                    (self.visit)(&self.cur);
                    return Ok(());
                }
            }
        }
        let Some(v) = first_bit(&free) else {
            return Ok(());
        };
        if !self.worth(self.cur.len() + self.room(&free)) {
            return Ok(());
        }
        let n = self.g.order();
        let within: Vec<u64> = free.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
        let options: Vec<Vec<usize>> =
            Cliques::new(self.g, VertexSet::from_words(n, within), self.p - 1).collect();
        for rest in options {
            let mut next = free.clone();
            crate::graph::clear_bit(&mut next, v);
            for &w in &rest {
                crate::graph::clear_bit(&mut next, w);
            }
            let mut clique = Vec::with_capacity(self.p);
            clique.push(v);
            clique.extend(rest);
            self.cur.push(clique);
            self.dfs(next)?;
            self.cur.pop();
        }
        let mut next = free;
        crate::graph::clear_bit(&mut next, v);
        self.dfs(next)
    }
}

/// Exact maximum packing; lexicographically least among the optimal ones.
pub fn max_packing(g: &Graph, p: usize) -> Result<CliquePacking, PackingError> {
    max_packing_with(g, p, PackingOptions::default())
}

pub fn max_packing_with(g: &Graph, p: usize, opts: PackingOptions) -> Result<CliquePacking, PackingError> {
    if p < 2 {
        return Err(PackingError::SmallP(p));
    }
    let mut noop = |_: &[Vec<usize>]| {};
    let mut s = Search {
        g,
        p,
        budget: opts.node_budget,
        nodes: 0,
        goal: Goal::Maximum,
        cur: Vec::new(),
        best: None,
        visit: &mut noop,
    };
    s.dfs(VertexSet::full(g.order()).as_words().to_vec())?;
    let mut packing = CliquePacking::from_cliques(g, p, s.best.unwrap_or_default())?;
    packing.certified = true;
    Ok(packing)
}

/// Calls `visit` on every maximum packing, in lexicographic order.
pub fn for_each_max_packing(
    g: &Graph,
    p: usize,
    opts: PackingOptions,
    visit: &mut dyn FnMut(&[Vec<usize>]),
) -> Result<usize, PackingError> {
    let size = max_packing_with(g, p, opts)?.len();
    let mut s = Search {
        g,
        p,
        budget: opts.node_budget,
        nodes: 0,
        goal: Goal::AllOfSize(size),
        cur: Vec::new(),
        best: None,
        visit,
    };
    s.dfs(VertexSet::full(g.order()).as_words().to_vec())?;
    Ok(size)
}

/// Maximum packing whose remainder has the most edges among all maximum
/// packings (lexicographically least on ties), by full enumeration.
pub fn certify_remainder_exhaustive(
    g: &Graph,
    p: usize,
    opts: PackingOptions,
) -> Result<CliquePacking, PackingError> {
    let n = g.order();
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut visit = |cl: &[Vec<usize>]| {
        let mut rem = VertexSet::full(n);
        for c in cl {
            for &v in c {
                rem.remove(v);
            }
        }
        let e = g.edges_within(&rem);
        if best.as_ref().map_or(true, |(b, _)| e > *b) {
            best = Some((e, cl.to_vec()));
        }
    };
    for_each_max_packing(g, p, opts, &mut visit)?;
    let (_, cliques) = best.expect("the empty packing is always maximum if nothing else is");
    let mut packing = CliquePacking::from_cliques(g, p, cliques)?;
    packing.certified = true;
    packing.remainder_optimality = RemainderOptimality::Exhaustive;
    Ok(packing)
}

/// A single-clique switch: replace `old` (a subclique of clique `index`) by
/// `new` (a clique of the remainder).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Switch {
    pub index: usize,
    pub old: Vec<usize>,
    pub new: Vec<usize>,
}

/// Every admissible switch on clique `index` with `1 <= |C| < p`, ordered by
/// `|C|`, then `C`, then `C′` lexicographically.
pub fn admissible_switches(g: &Graph, packing: &CliquePacking, index: usize) -> Result<Vec<Switch>, PackingError> {
    packing.check_index(index)?;
    let r = &packing.cliques[index];
    let p = r.len();
    let mut out = Vec::new();
    for size in 1..p {
        for mask in subsets_of_size(p, size) {
            let old: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).map(|i| r[i]).collect();
            let mut cand = packing.remainder.clone();
            for (i, &v) in r.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    cand.intersect_with(g.neighbors(v).as_words());
                }
            }
            for new in Cliques::new(g, cand, size) {
                out.push(Switch { index, old: old.clone(), new });
            }
        }
    }
    Ok(out)
}

/// Bitmasks over `0..p` with exactly `k` bits, in lexicographic order of the
/// selected index lists.
fn subsets_of_size(p: usize, k: usize) -> Vec<u32> {
    let mut all: Vec<Vec<usize>> = (0u32..1 << p)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..p).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    all.sort();
    all.into_iter().map(|v| v.iter().map(|i| 1u32 << i).sum()).collect()
}

/// Applies a switch, keeping the clique at its index.
pub fn switch(g: &Graph, packing: &CliquePacking, sw: &Switch) -> Result<CliquePacking, PackingError> {
    packing.check_index(sw.index)?;
    if sw.old.len() != sw.new.len() {
        return Err(PackingError::SizeMismatch { left: sw.old.len(), right: sw.new.len() });
    }
    let r = &packing.cliques[sw.index];
    if !sw.old.iter().all(|v| r.contains(v)) {
        return Err(PackingError::NotASubclique(sw.old.clone()));
    }
    if !sw.new.iter().all(|&v| packing.remainder.contains(v)) {
        return Err(PackingError::OverlapsPacking(sw.new.clone()));
    }
    let mut next: Vec<usize> = r.iter().copied().filter(|v| !sw.old.contains(v)).collect();
    next.extend(&sw.new);
    next.sort_unstable();
    next.dedup();
    if next.len() != r.len() || !g.is_clique(&next) {
        return Err(PackingError::NotAClique(next));
    }
    let mut out = packing.clone();
    for &v in &sw.old {
        out.remainder.insert(v);
    }
    for &v in &sw.new {
        out.remainder.remove(v);
    }
    out.cliques[sw.index] = next;
    out.remainder_optimality = RemainderOptimality::None;
    Ok(out)
}

/// Change of `e(H_ℛ)` caused by `sw`: `e(C, H∖C′) − e(C′, H∖C′)`.
fn remainder_gain(g: &Graph, packing: &CliquePacking, sw: &Switch) -> i64 {
    let n = g.order();
    let new = VertexSet::from_vertices(n, sw.new.iter().copied());
    let rest = packing.remainder.difference(&new);
    let old = VertexSet::from_vertices(n, sw.old.iter().copied());
    let a = g.edges_between(&old, &rest).expect("disjoint by construction");
    let b = g.edges_between(&new, &rest).expect("disjoint by construction");
    a as i64 - b as i64
}

/// Applies improving switches (first improvement in scan order) until none
/// increases `e(H_ℛ)`. The result lists its cliques in lexicographic order.
pub fn refine_packing(g: &Graph, packing: &CliquePacking) -> Result<CliquePacking, PackingError> {
    let mut cur = packing.clone();
    'improve: loop {
        for index in 0..cur.cliques.len() {
            for sw in admissible_switches(g, &cur, index)? {
                if remainder_gain(g, &cur, &sw) > 0 {
                    cur = switch(g, &cur, &sw)?;
                    continue 'improve;
                }
            }
        }
        break;
    }
    cur.cliques.sort();
    cur.remainder_optimality = match packing.remainder_optimality {
        RemainderOptimality::Exhaustive => RemainderOptimality::Exhaustive,
        _ => RemainderOptimality::SwitchStable,
    };
    Ok(cur)
}

/// Both sides of the switching inequality `e(R′, H_ℛ′) >= e(R, H_ℛ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchCheck {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

pub fn check_switch_inequality(g: &Graph, packing: &CliquePacking, sw: &Switch) -> Result<SwitchCheck, PackingError> {
    let after = switch(g, packing, sw)?;
    let rhs = g.edges_between(&packing.clique_set(sw.index), &packing.remainder)?;
    let lhs = g.edges_between(&after.clique_set(sw.index), &after.remainder)?;
    Ok(SwitchCheck { lhs, rhs, holds: lhs >= rhs })
}

fn ensure_free(g: &Graph, p: usize) -> Result<(), PackingError> {
    match contains_clique(g, p) {
        Some(witness) => Err(PackingError::ContainsClique { p, witness }),
        None => Ok(()),
    }
}

/// Saturating edges (for `K_{p+1}`) touching `V(ℛ)` and inside `H_ℛ`.
pub fn ell_split(g: &Graph, packing: &CliquePacking) -> Result<(u64, u64), PackingError> {
    let report = count_saturating_with(g, packing.p + 1, CountOptions { list_limit: Some(u64::MAX) })?;
    let edges = report.edges.expect("unbounded listing");
    let inside = edges
        .iter()
        .filter(|[u, v]| packing.remainder.contains(*u) && packing.remainder.contains(*v))
        .count() as u64;
    Ok((report.total - inside, inside))
}

/// Per-clique partition data for one `R ∈ ℛ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingAnalysis {
    pub index: usize,
    #[serde(serialize_with = "crate::formulas::ser_rational")]
    pub r: Rational,
    /// `Z_0..Z_p`: remainder vertices by number of neighbours in `R`.
    pub z_sets: Vec<Vec<usize>>,
    #[serde(serialize_with = "ser_rationals")]
    pub z: Vec<Rational>,
    /// `A_1..A_p`: common neighbourhood in `H_ℛ` of `R` minus its `i`-th vertex.
    pub a_sets: Vec<Vec<usize>>,
    pub ell1: u64,
    pub ell2: u64,
    pub total: u64,
    pub z_sum_holds: bool,
    pub a_sum_holds: bool,
    pub a_independent: bool,
    pub a_disjoint: bool,
    pub a_in_top_class: bool,
    pub a_pairs_saturating: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&crate::formulas::fmt_rational(q))?;
    }
    seq.end()
}

impl PackingAnalysis {
    pub fn all_hold(&self) -> bool {
        self.z_sum_holds
            && self.a_sum_holds
            && self.a_independent
            && self.a_disjoint
            && self.a_in_top_class
            && self.a_pairs_saturating
            && self.ell1 + self.ell2 == self.total
    }
}

pub fn analyze(g: &Graph, packing: &CliquePacking, index: usize) -> Result<PackingAnalysis, PackingError> {
    packing.check_index(index)?;
    let p = packing.p;
    ensure_free(g, p + 1)?;
    let n = g.order();
    let r_clique = &packing.cliques[index];
    let r_set = packing.clique_set(index);
    let mut z_sets = vec![Vec::new(); p + 1];
    for v in packing.remainder.iter() {
        z_sets[r_set.intersection_len(g.neighbors(v).as_words())].push(v);
    }
    let nq = int(n as u64);
    let z: Vec<Rational> = z_sets.iter().map(|s| int(s.len() as u64) / &nq).collect();
    let a_sets: Vec<Vec<usize>> = (0..p)
        .map(|i| {
            let mut s = packing.remainder.clone();
            for (j, &v) in r_clique.iter().enumerate() {
                if j != i {
                    s.intersect_with(g.neighbors(v).as_words());
                }
            }
            s.to_vec()
        })
        .collect();

    let r = packing.density();
    let z_sum: Rational = z[..p].iter().sum();
    let z_sum_holds = z_sum == int(1) - int(p as u64) * &r;
    let a_total: usize = a_sets.iter().map(Vec::len).sum();
    let a_sum_holds = int(a_total as u64) / &nq == z[p - 1];
    let a_independent = a_sets
        .iter()
        .all(|a| a.iter().enumerate().all(|(i, &u)| a[i + 1..].iter().all(|&w| !g.has_edge(u, w))));
    let mut seen = VertexSet::new(n);
    let mut a_disjoint = true;
    for &v in a_sets.iter().flatten() {
        a_disjoint &= !seen.contains(v);
        seen.insert(v);
    }
    let top = VertexSet::from_vertices(n, z_sets[p - 1].iter().copied());
    let a_in_top_class = seen.is_subset(&top);
    let mut a_pairs_saturating = true;
    for a in &a_sets {
        for (i, &u) in a.iter().enumerate() {
            for &w in &a[i + 1..] {
                a_pairs_saturating &= !g.has_edge(u, w) && is_saturating(g, p + 1, u, w)?;
            }
        }
    }
    let (ell1, ell2) = ell_split(g, packing)?;
    let total = count_saturating(g, p + 1)?.total;
    Ok(PackingAnalysis {
        index,
        r,
        z_sets,
        z,
        a_sets,
        ell1,
        ell2,
        total,
        z_sum_holds,
        a_sum_holds,
        a_independent,
        a_disjoint,
        a_in_top_class,
        a_pairs_saturating,
    })
}

/// The packed clique with the most edges to the remainder, and the two
/// bounds it must meet when `e(G) = ex(n, K_p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RStar {
    pub index: usize,
    pub edges: usize,
    #[serde(serialize_with = "crate::formulas::ser_rational")]
    pub edge_bound: Rational,
    pub edge_bound_holds: bool,
    #[serde(serialize_with = "crate::formulas::ser_rational")]
    pub top_density: Rational,
    #[serde(serialize_with = "crate::formulas::ser_rational")]
    pub top_density_bound: Rational,
    pub top_density_bound_holds: bool,
}

pub fn best_r_star(g: &Graph, packing: &CliquePacking) -> Result<RStar, PackingError> {
    let p = packing.p;
    if p < 3 {
        return Err(PackingError::Hypothesis(format!("clique size {p} below 3")));
    }
    let (n, e) = (g.order() as u64, g.size() as u64);
    let ex = turan_number(n, p as u64);
    if e != ex {
        return Err(PackingError::Hypothesis(format!("e(G) = {e} but ex(n, K_p) = {ex}")));
    }
    if packing.is_empty() {
        return Err(PackingError::Hypothesis("packing is empty".into()));
    }
    ensure_free(g, p + 1)?;
    let mut best = (0, 0);
    for i in 0..packing.len() {
        let e = g.edges_between(&packing.clique_set(i), &packing.remainder)?;
        if i == 0 || e > best.1 {
            best = (i, e);
        }
    }
    let (index, edges) = best;
    let r = packing.density();
    let d = delta(n, p as u64);
    let edge_bound = rstar_edge_bound(n, p as u64, &r, &d).map_err(|e| PackingError::Hypothesis(e.to_string()))?;
    let r_set = packing.clique_set(index);
    let top = packing
        .remainder
        .iter()
        .filter(|&v| r_set.intersection_len(g.neighbors(v).as_words()) == p - 1)
        .count();
    let top_density = ratio(top as u64, n);
    let top_density_bound =
        top_class_density_bound(n, p as u64, &r, &d).map_err(|e| PackingError::Hypothesis(e.to_string()))?;
    Ok(RStar {
        index,
        edges,
        edge_bound_holds: int(edges as u64) >= edge_bound,
        edge_bound,
        top_density_bound_holds: top_density >= top_density_bound,
        top_density,
        top_density_bound,
    })
}
