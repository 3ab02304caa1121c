//! Graphs on at most 16 vertices and their canonical labelling.
//!
//! Canonical form: equitable refinement of an ordered partition, then
//! individualisation of each vertex of the first non-singleton cell, keeping
//! the leaf whose upper-triangle bit string (graph6 order) is smallest.
//! Vertices of a cell that are twins are interchangeable, so only one of each
//! twin class is individualised.

use crate::graph::{Graph, GraphBuilder};

pub const MAX_ORDER: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallGraph {
    n: u8,
    rows: [u16; MAX_ORDER],
}

impl std::fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmallGraph")
            .field("n", &self.n)
            .field("rows", &&self.rows[..self.n as usize])
            .finish()
    }
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER);
        Self { n: n as u8, rows: [0; MAX_ORDER] }
    }

    pub fn from_graph(g: &Graph) -> Option<Self> {
        if g.order() > MAX_ORDER {
            return None;
        }
        let mut s = Self::empty(g.order());
        for (u, v) in g.edges() {
            s.rows[u] |= 1 << v;
            s.rows[v] |= 1 << u;
        }
        Some(s)
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut b = GraphBuilder::new(n).expect("small order");
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(u, v) {
                    b.add_edge(u, v).expect("in range");
                }
            }
        }
        b.build()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn row(&self, v: usize) -> u16 {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn size(&self) -> usize {
        self.rows[..self.order()].iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Adds a vertex `n` adjacent to the vertices in `nbrs`.
    pub fn with_vertex(&self, nbrs: u16) -> Self {
        let n = self.order();
        assert!(n < MAX_ORDER);
        let mut s = *self;
        s.n += 1;
        s.rows[n] = nbrs;
        for v in 0..n {
            if nbrs >> v & 1 == 1 {
                s.rows[v] |= 1 << n;
            }
        }
        s
    }

    /// Whether `cand` contains a `k`-clique.
    pub fn has_clique_in(&self, cand: u16, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < k {
            return false;
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.has_clique_in(rest & self.rows[v], k - 1) {
                return true;
            }
        }
        false
    }

    pub fn is_clique_free(&self, p: usize) -> bool {
        !self.has_clique_in(full_mask(self.order()), p)
    }

    /// Number of non-edges whose addition creates a `K_p`.
    pub fn saturating_count(&self, p: usize) -> u64 {
        let n = self.order();
        let mut total = 0;
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) && self.has_clique_in(self.rows[u] & self.rows[v], p.saturating_sub(2)) {
                    total += 1;
                }
            }
        }
        total
    }

    fn relabel(&self, lab: &[u8]) -> Self {
        let mut s = Self::empty(self.order());
        for u in 0..self.order() {
            let mut r = self.rows[u];
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                s.rows[lab[u] as usize] |= 1 << lab[v];
            }
        }
        s
    }

    /// Upper-triangle bits in graph6 order, first pair most significant.
    pub fn key(&self) -> u128 {
        let n = self.order();
        let mut key = 0u128;
        for j in 1..n {
            for i in 0..j {
                key = key << 1 | u128::from(self.has_edge(i, j));
            }
        }
        key
    }

    /// The canonical relabelling and its key.
    pub fn canonical(&self) -> (u128, SmallGraph) {
        let n = self.order();
        let mut best: Option<(u128, Vec<u8>)> = None;
        let cells = if n == 0 { vec![] } else { vec![(0..n as u8).collect()] };
        self.search(cells, &mut best);
        let (key, lab) = best.unwrap_or((0, Vec::new()));
        (key, self.relabel(&lab))
    }

    fn twins(&self, u: usize, w: usize) -> bool {
        let mask = !((1u16 << u) | (1u16 << w));
        self.rows[u] & mask == self.rows[w] & mask
    }

    fn refine(&self, cells: &mut Vec<Vec<u8>>) {
        loop {
            let masks: Vec<u16> = cells
                .iter()
                .map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v))
                .collect();
            let mut next: Vec<Vec<u8>> = Vec::with_capacity(self.order());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sig: Vec<(Vec<u8>, u8)> = cell
                    .iter()
                    .map(|&v| {
                        let r = self.rows[v as usize];
                        (masks.iter().map(|m| (r & m).count_ones() as u8).collect(), v)
                    })
                    .collect();
                sig.sort_unstable();
                let mut start = 0;
                for i in 1..=sig.len() {
                    if i == sig.len() || sig[i].0 != sig[start].0 {
                        next.push(sig[start..i].iter().map(|s| s.1).collect());
                        start = i;
                    }
                }
            }
            let stable = next.len() == cells.len();
            *cells = next;
            if stable {
                return;
            }
        }
    }

    fn search(&self, mut cells: Vec<Vec<u8>>, best: &mut Option<(u128, Vec<u8>)>) {
        self.refine(&mut cells);
        match cells.iter().position(|c| c.len() > 1) {
            Some(i) => {
                let cell = cells[i].clone();
                let mut tried: Vec<u8> = Vec::new();
                for &v in &cell {
                    if tried.iter().any(|&u| self.twins(u as usize, v as usize)) {
                        continue;
                    }
                    tried.push(v);
                    let mut next = cells.clone();
                    next[i] = vec![v];
                    next.insert(i + 1, cell.iter().copied().filter(|&w| w != v).collect());
                    self.search(next, best);
                }
            }
            None => {
                let mut lab = vec![0u8; self.order()];
                for (pos, c) in cells.iter().enumerate() {
                    lab[c[0] as usize] = pos as u8;
                }
                let key = self.relabel(&lab).key();
                if best.as_ref().map_or(true, |(k, _)| key < *k) {
                    *best = Some((key, lab));
                }
            }
        }
    }
}

#[inline]
pub fn full_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// Canonical graph6 string of a graph on at most 16 vertices.
pub fn canonical_graph6(g: &Graph) -> Option<String> {
    let s = SmallGraph::from_graph(g)?;
    Some(crate::graph::io::graph6_encode(&s.canonical().1.to_graph()))
}
