//! A pinned quartic on binary `K_{3,3}` whose two terms are separated by the
//! quadrics after multiplying by a square-free monomial `w` but joined after
//! multiplying by `w^2`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{
    are_connected, component_with_index, connected_component, Connectivity, MoveIndex,
};
use crate::graph::{glg_moves, margin_map, margins, LabeledGraph, MarginVector};
use crate::tensor::{StateSpace, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K33Witness {
    pub u_plus: Table,
    pub u_minus: Table,
    pub w: Table,
}

pub fn k33_graph() -> LabeledGraph {
    LabeledGraph::complete_bipartite(3, vec![2; 6]).expect("K_3,3")
}

/// `K_{3,3}` without the edge between vertices 2 and 5.
pub fn g154_graph() -> LabeledGraph {
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 0),
        (0, 3),
        (2, 5),
    ];
    LabeledGraph::new(vec![2; 6], &edges).expect("G154")
}

/// Parses `"121|222"` style words.
fn parse(space: &StateSpace, words: &[&str]) -> Table {
    Table::from_indices(words.iter().map(|w| {
        let coords: Vec<u32> = w.chars().filter_map(|c| c.to_digit(10)).collect();
        space.index_of(&coords).expect("binary word of length six")
    }))
}

pub fn k33_witness() -> K33Witness {
    let s = StateSpace::binary(6);
    K33Witness {
        u_plus: parse(&s, &["121|222", "212|212", "122|112", "222|122"]),
        u_minus: parse(&s, &["221|222", "112|212", "222|112", "122|122"]),
        w: parse(&s, &["111|111", "221|111"]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K33Report {
    pub c18a: usize,
    pub c18b: usize,
    pub c90: usize,
    pub disjoint: bool,
    /// `u⁻ + 2w` lies in the component of `u⁺ + 2w`.
    pub joined: bool,
    pub path_length: Option<usize>,
    pub inconclusive: bool,
}

pub fn k33_run(cap: usize) -> Result<K33Report> {
    if cap < 128 {
        return Err(Error::Unsupported("cap must be at least 128".into()));
    }
    let g = k33_graph();
    let moves = glg_moves(&g)?;
    let k = k33_witness();
    let a = connected_component(&k.u_plus.add(&k.w), &moves, cap);
    let b = connected_component(&k.u_minus.add(&k.w), &moves, cap);
    let w2 = k.w.scale(2);
    let (p2, m2) = (k.u_plus.add(&w2), k.u_minus.add(&w2));
    let c = connected_component(&p2, &moves, cap);
    let disjoint = match (&a.members, &b.members) {
        (Some(x), Some(y)) => x.iter().all(|t| y.binary_search(t).is_err()),
        _ => false,
    };
    let path = are_connected(&p2, &m2, &moves, cap)?;
    let inconclusive =
        a.truncated || b.truncated || c.truncated || path == Connectivity::Inconclusive;
    Ok(K33Report {
        c18a: a.size,
        c18b: b.size,
        c90: c.size,
        disjoint,
        joined: c.contains(&m2) == Some(true),
        path_length: match path {
            Connectivity::Connected(p) => Some(p.len()),
            _ => None,
        },
        inconclusive,
    })
}

/// A pair `(u, v)` of degree-four tables with equal margins and a square-free
/// `w` with `u + w`, `v + w` separated and `u + 2w`, `v + 2w` joined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub u: Table,
    pub v: Table,
    pub w: Table,
}

/// Slow search over every degree-four fiber of `g` that the quadrics split,
/// and every square-free degree-two cofactor. Gives up after `pair_budget`
/// split pairs.
pub fn non_radical_search(
    g: &LabeledGraph,
    pair_budget: usize,
    cap: usize,
) -> Result<Option<SearchHit>> {
    let am = margin_map(g);
    let moves = glg_moves(g)?;
    let index = MoveIndex::new(&moves);
    let n = am.n_cols();
    // Representatives of distinct quadric components within each fiber.
    let mut fibers: BTreeMap<MarginVector, Vec<Table>> = BTreeMap::new();
    let mut seen: HashSet<Table> = HashSet::new();
    let mut idx = [0usize; 4];
    'outer: loop {
        let t = Table::from_indices(idx);
        if !seen.contains(&t) {
            let comp = component_with_index(&t, &index, cap);
            if let Some(members) = &comp.members {
                for m in members {
                    seen.insert(m.clone());
                }
            }
            fibers.entry(margins(&am, &t)?).or_default().push(t);
        }
        let mut p = 4;
        while p > 0 && idx[p - 1] == n - 1 {
            p -= 1;
        }
        if p == 0 {
            break 'outer;
        }
        idx[p - 1] += 1;
        let v = idx[p - 1];
        idx[p..].fill(v);
    }
    let mut pairs = 0;
    for reps in fibers.values().filter(|r| r.len() > 1) {
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                pairs += 1;
                if pairs > pair_budget {
                    return Ok(None);
                }
                let (u, v) = (&reps[i], &reps[j]);
                for a in 0..n {
                    for b in a + 1..n {
                        let w = Table::from_indices([a, b]);
                        let once = connected_component(&u.add(&w), &moves, cap);
                        if once.truncated || once.contains(&v.add(&w)) != Some(false) {
                            continue;
                        }
                        let w2 = w.scale(2);
                        if are_connected(&u.add(&w2), &v.add(&w2), &moves, cap)?.is_connected() {
                            return Ok(Some(SearchHit {
                                u: u.clone(),
                                v: v.clone(),
                                w,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
