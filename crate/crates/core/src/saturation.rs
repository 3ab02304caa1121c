//! Counting `K_p`-saturating non-edges.
//!
//! A non-edge `uv` of a `K_p`-free graph is saturating iff the common
//! neighbourhood of `u` and `v` contains a `K_{p−2}`.

use crate::constructions::{base_graph, BlowupSpec};
use crate::graph::has_clique_words;
use crate::graph::{choose2, contains_clique, Graph, GraphError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SaturationError {
    #[error("clique size p = {0} must be at least 2")]
    SmallP(usize),
    #[error("{u}{v} is already an edge")]
    IsEdge { u: usize, v: usize },
    #[error("graph contains a K_{p}: {witness:?}")]
    ContainsClique { p: usize, witness: Vec<usize> },
    #[error("blow-up is not over the apex base graph for p = {0}")]
    UnsupportedShape(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub p: usize,
    pub n: usize,
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

/// Whether adding the non-edge `uv` creates a `K_p`. Assumes `g` is `K_p`-free.
pub fn is_saturating(g: &Graph, p: usize, u: usize, v: usize) -> Result<bool, SaturationError> {
    if p < 2 {
        return Err(SaturationError::SmallP(p));
    }
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(GraphError::Loop(u).into());
    }
    if g.has_edge(u, v) {
        return Err(SaturationError::IsEdge { u, v });
    }
    let common: Vec<u64> = g.row(u).iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
    Ok(has_clique_words(g, &common, p - 2, &mut Vec::new()))
}

/// Options for [`count_saturating_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    /// List the saturating pairs when there are at most this many.
    pub list_limit: Option<u64>,
}

/// `f_p(g)`. Fails if `g` contains a `K_p`.
pub fn count_saturating(g: &Graph, p: usize) -> Result<SaturationReport, SaturationError> {
    count_saturating_with(g, p, CountOptions::default())
}

const CACHE_LIMIT: usize = 1 << 14;

pub fn count_saturating_with(
    g: &Graph,
    p: usize,
    opts: CountOptions,
) -> Result<SaturationReport, SaturationError> {
    if p < 2 {
        return Err(SaturationError::SmallP(p));
    }
    if let Some(witness) = contains_clique(g, p) {
        return Err(SaturationError::ContainsClique { p, witness });
    }
    let n = g.order();
    let list = opts.list_limit.is_some();
    // Blow-ups have few distinct common neighbourhoods, so memoise by bitset.
    let per_vertex: Vec<(u64, Vec<usize>)> = (0..n)
        .into_par_iter()
        .map_init(
            || (HashMap::<Vec<u64>, bool>::new(), vec![0u64; g.word_len()]),
            |(cache, common), u| {
                let mut count = 0;
                let mut found = Vec::new();
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    for ((c, a), b) in common.iter_mut().zip(g.row(u)).zip(g.row(v)) {
                        *c = a & b;
                    }
                    let hit = match cache.get(common.as_slice()) {
                        Some(&h) => h,
                        None => {
                            let h = has_clique_words(g, common, p - 2, &mut Vec::new());
                            if cache.len() >= CACHE_LIMIT {
                                cache.clear();
                            }
                            cache.insert(common.clone(), h);
                            h
                        }
                    };
                    if hit {
                        count += 1;
                        if list {
                            found.push(v);
                        }
                    }
                }
                (count, found)
            },
        )
        .collect();
    let total: u64 = per_vertex.iter().map(|(c, _)| c).sum();
    let edges = match opts.list_limit {
        Some(limit) if total <= limit => Some(
            per_vertex
                .into_iter()
                .enumerate()
                .flat_map(|(u, (_, vs))| vs.into_iter().map(move |v| [u, v]))
                .collect(),
        ),
        _ => None,
    };
    Ok(SaturationReport { p, n, total, edges })
}

/// `f_{p+1}` of a blow-up of the apex base graph, from part sizes alone.
///
/// Only pairs inside `V₀` or inside some `V_i` can be saturating. Pairs in
/// `V₀` are when every `V_i` is nonempty; pairs in `V_i` are when `V₀` and
/// every other `V_j` are nonempty.
pub fn count_saturating_blowup(spec: &BlowupSpec, p: u64) -> Result<u64, SaturationError> {
    let base = base_graph(p).map_err(|_| SaturationError::UnsupportedShape(p))?;
    if spec.base != base || spec.sizes.len() != base.order() {
        return Err(SaturationError::UnsupportedShape(p));
    }
    let k = (p - 1) as usize;
    let v = &spec.sizes[..=k];
    let nonempty_except = |skip: usize| (0..=k).filter(|&j| j != skip).all(|j| v[j] > 0);
    Ok((0..=k)
        .filter(|&i| nonempty_except(i))
        .map(|i| choose2(v[i] as u64))
        .sum())
}
