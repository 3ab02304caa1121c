//! Fixed-size clique search.
//!
//! Existence queries use greedy colouring as an upper bound on the clique
//! number of the candidate set (colour classes are independent sets), so
//! complete multipartite neighbourhoods are refuted without branching.

use super::bitset::{clear_bit, clear_through, first_bit, next_bit, popcount};
use super::{Graph, VertexSet};

/// Returns some `p`-clique of `g`, or `None` if `g` is `K_p`-free.
pub fn contains_clique(g: &Graph, p: usize) -> Option<Vec<usize>> {
    let all = VertexSet::full(g.order());
    find_clique_in(g, &all, p)
}

/// Returns a `k`-clique inside `candidates`, or `None`.
pub fn find_clique_in(g: &Graph, candidates: &VertexSet, k: usize) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(k);
    if has_clique_words(g, candidates.as_words(), k, &mut out) {
        out.sort_unstable();
        Some(out)
    } else {
        None
    }
}

/// Core existence test on a raw candidate bitset. On success `out` holds the
/// clique (unsorted).
pub(crate) fn has_clique_words(g: &Graph, cand: &[u64], k: usize, out: &mut Vec<usize>) -> bool {
    match k {
        0 => return true,
        1 => {
            return match first_bit(cand) {
                Some(v) => {
                    out.push(v);
                    true
                }
                None => false,
            }
        }
        2 => {
            let mut v = next_bit(cand, 0);
            while let Some(u) = v {
                if let Some(w) = g
                    .row(u)
                    .iter()
                    .zip(cand)
                    .enumerate()
                    .find(|(_, (a, b))| *a & *b != 0)
                    .map(|(i, (a, b))| i * 64 + (a & b).trailing_zeros() as usize)
                {
                    out.push(u);
                    out.push(w);
                    return true;
                }
                v = next_bit(cand, u + 1);
            }
            return false;
        }
        _ => {}
    }
    if popcount(cand) < k {
        return false;
    }

    // Greedy sequential colouring. Only vertices whose colour is >= k can
    // start a k-clique among the vertices coloured no later than themselves.
    let mut uncolored = cand.to_vec();
    let mut class = vec![0u64; cand.len()];
    let mut order: Vec<usize> = Vec::new();
    let mut color = 0usize;
    while uncolored.iter().any(|&w| w != 0) {
        color += 1;
        class.copy_from_slice(&uncolored);
        while let Some(v) = first_bit(&class) {
            clear_bit(&mut class, v);
            clear_bit(&mut uncolored, v);
            for (c, r) in class.iter_mut().zip(g.row(v)) {
                *c &= !r;
            }
            if color >= k {
                order.push(v);
            }
        }
    }
    if order.is_empty() {
        return false;
    }

    // Branch from the highest colour down; `remaining` drops each vertex once
    // its subtree is exhausted, so every remaining vertex has colour <= the
    // current one.
    let mut remaining = cand.to_vec();
    let mut next = vec![0u64; cand.len()];
    for &v in order.iter().rev() {
        for ((n, r), a) in next.iter_mut().zip(&remaining).zip(g.row(v)) {
            *n = r & a;
        }
        if popcount(&next) >= k - 1 {
            out.push(v);
            if has_clique_words(g, &next, k - 1, out) {
                return true;
            }
            out.pop();
        }
        clear_bit(&mut remaining, v);
    }
    false
}

/// Every `p`-clique of `g` exactly once, as sorted vertex lists in
/// lexicographic order.
pub fn enumerate_cliques(g: &Graph, p: usize) -> Cliques<'_> {
    Cliques::new(g, VertexSet::full(g.order()), p)
}

/// Streaming `p`-clique enumerator restricted to a candidate vertex set.
pub struct Cliques<'g> {
    g: &'g Graph,
    p: usize,
    // frame d: candidates for the (d+1)-th vertex and the next scan position
    cands: Vec<Vec<u64>>,
    cursor: Vec<usize>,
    chosen: Vec<usize>,
    done: bool,
}

impl<'g> Cliques<'g> {
    pub fn new(g: &'g Graph, within: VertexSet, p: usize) -> Self {
        let done = p == 0 || within.len() < p;
        Self {
            g,
            p,
            cands: vec![within.as_words().to_vec()],
            cursor: vec![0],
            chosen: Vec::with_capacity(p),
            done,
        }
    }
}

impl Iterator for Cliques<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        loop {
            let d = match self.cands.len() {
                0 => {
                    self.done = true;
                    return None;
                }
                l => l - 1,
            };
            let Some(v) = next_bit(&self.cands[d], self.cursor[d]) else {
                self.cands.pop();
                self.cursor.pop();
                self.chosen.pop();
                continue;
            };
            self.cursor[d] = v + 1;
            if d + 1 == self.p {
                let mut c = self.chosen.clone();
                c.push(v);
                return Some(c);
            }
            let mut next: Vec<u64> = self.cands[d]
                .iter()
                .zip(self.g.row(v))
                .map(|(a, b)| a & b)
                .collect();
            clear_through(&mut next, v);
            if popcount(&next) >= self.p - d - 1 {
                self.cands.push(next);
                self.cursor.push(0);
                self.chosen.push(v);
            }
        }
    }
}
