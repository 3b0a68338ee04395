//! Undirected graphs over a state space: separation, global Markov
//! statements, their quadratic moves, and the clique marginal map.
//!
//! Vertices are 0-based in the API and 1-based in JSON and in `Display`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{dedup_moves, Move, StateSpace, Table};

/// Upper bound on `N` for the `3^N` statement enumeration.
pub const STATEMENT_VERTEX_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    space: StateSpace,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<u64>,
}

impl LabeledGraph {
    /// Builds a simple undirected graph; `levels` gives one `d_v` per vertex.
    pub fn new(levels: Vec<u32>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = levels.len();
        if n < 2 {
            return Err(Error::InvalidGraph("need at least two vertices".into()));
        }
        if n > 64 {
            return Err(Error::TooLarge(format!("{n} vertices")));
        }
        let space = StateSpace::new(levels)?;
        let mut set = BTreeSet::new();
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", u + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({},{})",
                    e.0 + 1,
                    e.1 + 1
                )));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(LabeledGraph {
            space,
            edges: set,
            adj,
        })
    }

    pub fn cycle(levels: Vec<u32>) -> Result<Self> {
        let n = levels.len();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        LabeledGraph::new(levels, &edges)
    }

    pub fn binary_cycle(n: usize) -> Self {
        LabeledGraph::cycle(vec![2; n]).expect("cycle")
    }

    pub fn path(levels: Vec<u32>) -> Result<Self> {
        let edges: Vec<_> = (1..levels.len()).map(|i| (i - 1, i)).collect();
        LabeledGraph::new(levels, &edges)
    }

    pub fn complete(levels: Vec<u32>) -> Result<Self> {
        let n = levels.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        LabeledGraph::new(levels, &edges)
    }

    /// `K_{p,q}` with parts `{0..p}` and `{p..p+q}`.
    pub fn complete_bipartite(p: usize, levels: Vec<u32>) -> Result<Self> {
        let n = levels.len();
        let mut edges = Vec::new();
        for i in 0..p {
            for j in p..n {
                edges.push((i, j));
            }
        }
        LabeledGraph::new(levels, &edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn levels(&self) -> &[u32] {
        self.space.levels()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    fn all_mask(&self) -> u64 {
        mask_of_len(self.n_vertices())
    }

    /// Vertices reachable from `from` without entering `blocked`.
    fn reach(&self, from: u64, blocked: u64) -> u64 {
        let mut seen = from & !blocked;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= !seen & !blocked;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Connected components of the graph with `removed` deleted.
    fn components(&self, removed: u64) -> Vec<u64> {
        let mut rest = self.all_mask() & !removed;
        let mut out = Vec::new();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let c = self.reach(1 << v, removed);
            out.push(c);
            rest &= !c;
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(0).len() == 1
    }

    /// Connected, at least three vertices, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.n_vertices() >= 3
            && self.is_connected()
            && (0..self.n_vertices()).all(|v| self.components(1 << v).len() == 1)
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| self.adj[u] & self.adj[v] == 0)
    }

    /// Every clique (complete vertex subset), including the empty set,
    /// ordered by size and then by sorted vertex list.
    pub fn all_cliques(&self) -> Vec<Vec<usize>> {
        let mut set = BTreeSet::new();
        for c in maximal_cliques(self) {
            let m = c.iter().fold(0u64, |acc, &v| acc | 1 << v);
            let mut sub = m;
            loop {
                set.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
        let mut out: Vec<Vec<usize>> = set.into_iter().map(|m| bits(m).collect()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

fn mask_of_len(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn mask(set: &BTreeSet<usize>) -> u64 {
    set.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// Whether deleting `c` leaves no path from `a` to `b`.
pub fn separates(
    g: &LabeledGraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    c: &BTreeSet<usize>,
) -> Result<bool> {
    let n = g.n_vertices();
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidPartition("a and b must be nonempty".into()));
    }
    if a.iter().chain(b).chain(c).any(|&v| v >= n) {
        return Err(Error::InvalidPartition("vertex out of range".into()));
    }
    let (ma, mb, mc) = (mask(a), mask(b), mask(c));
    if ma & mb != 0 || ma & mc != 0 || mb & mc != 0 {
        return Err(Error::InvalidPartition("sets overlap".into()));
    }
    Ok(g.reach(ma, mc) & mb == 0)
}

/// A conditional independence statement `A _||_ B | C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CiStatement {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl CiStatement {
    pub fn new(a: Vec<usize>, b: Vec<usize>, c: Vec<usize>) -> Self {
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        CiStatement {
            a: sorted(a),
            b: sorted(b),
            c: sorted(c),
        }
    }
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[usize]| {
            v.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{{{}}} _||_ {{{}}} | {{{}}}",
            s(&self.a),
            s(&self.b),
            s(&self.c)
        )
    }
}

/// All statements with `A u B u C = V`, `A, B` nonempty and `C` separating,
/// normalized so `min A < min B`, sorted.
pub fn global_markov_statements(g: &LabeledGraph) -> Result<Vec<CiStatement>> {
    let n = g.n_vertices();
    if n > STATEMENT_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "{n} vertices exceeds statement enumeration cap {STATEMENT_VERTEX_CAP}"
        )));
    }
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let (mut ma, mut mb, mut mc) = (0u64, 0u64, 0u64);
        let mut r = code;
        for v in 0..n {
            match r % 3 {
                0 => ma |= 1 << v,
                1 => mb |= 1 << v,
                _ => mc |= 1 << v,
            }
            r /= 3;
        }
        if ma == 0 || mb == 0 || ma.trailing_zeros() > mb.trailing_zeros() {
            continue;
        }
        if g.reach(ma, mc) & mb == 0 {
            out.push(CiStatement::new(
                bits(ma).collect(),
                bits(mb).collect(),
                bits(mc).collect(),
            ));
        }
    }
    out.sort();
    Ok(out)
}

/// Joint states of the given vertices, mixed radix with the last vertex fastest.
pub(crate) fn sub_states(space: &StateSpace, vertices: &[usize]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &v in vertices {
        let d = space.levels()[v];
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for s in &out {
            for x in 1..=d {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The 2x2 minors of every matrix `P^{A,B,x_C}` as moves.
pub fn ci_quadratic_moves(st: &CiStatement, space: &StateSpace) -> Vec<Move> {
    let n = space.n_vertices();
    let xa = sub_states(space, &st.a);
    let xb = sub_states(space, &st.b);
    let xc = sub_states(space, &st.c);
    let cell = |a: &[u32], b: &[u32], c: &[u32]| {
        let mut coords = vec![0u32; n];
        for (&v, &x) in st.a.iter().zip(a) {
            coords[v] = x;
        }
        for (&v, &x) in st.b.iter().zip(b) {
            coords[v] = x;
        }
        for (&v, &x) in st.c.iter().zip(c) {
            coords[v] = x;
        }
        space
            .index_of(&coords)
            .expect("statement covers all vertices")
    };
    let mut out = Vec::new();
    for c in &xc {
        for i in 0..xa.len() {
            for j in i + 1..xa.len() {
                for k in 0..xb.len() {
                    for l in k + 1..xb.len() {
                        let plus =
                            Table::from_indices([cell(&xa[i], &xb[k], c), cell(&xa[j], &xb[l], c)]);
                        let minus =
                            Table::from_indices([cell(&xa[i], &xb[l], c), cell(&xa[j], &xb[k], c)]);
                        out.push(Move { plus, minus }.canonical());
                    }
                }
            }
        }
    }
    out
}

/// Deduplicated quadratic moves of all global Markov statements.
pub fn glg_moves(g: &LabeledGraph) -> Result<Vec<Move>> {
    let stmts = global_markov_statements(g)?;
    Ok(dedup_moves(
        stmts.iter().flat_map(|s| ci_quadratic_moves(s, g.space())),
    ))
}

/// Maximal cliques by pivoting Bron-Kerbosch, each sorted, list sorted.
pub fn maximal_cliques(g: &LabeledGraph) -> Vec<Vec<usize>> {
    fn bk(g: &LabeledGraph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = bits(p | x)
            .max_by_key(|&u| (p & g.adj[u]).count_ones())
            .unwrap();
        for v in bits(p & !g.adj[pivot]) {
            bk(g, r | 1 << v, p & g.adj[v], x & g.adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut found = Vec::new();
    bk(g, 0, g.all_mask(), 0, &mut found);
    let mut out: Vec<Vec<usize>> = found.into_iter().map(|m| bits(m).collect()).collect();
    out.sort();
    out
}

/// The clique marginal map `A_G`, indexed by maximal cliques.
#[derive(Clone, Debug)]
pub struct MarginMap {
    space: StateSpace,
    cliques: Vec<Vec<usize>>,
    block_offsets: Vec<usize>,
    n_rows: usize,
    // For each cell, the row hit in each clique block.
    cell_rows: Vec<Vec<u32>>,
}

impl MarginMap {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.space.total_cells()
    }

    /// Row range of the block belonging to clique `k`.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        let end = self
            .block_offsets
            .get(k + 1)
            .copied()
            .unwrap_or(self.n_rows);
        self.block_offsets[k]..end
    }

    /// Rows of `A_G` with a 1 in column `cell`.
    pub fn rows_of(&self, cell: usize) -> &[u32] {
        &self.cell_rows[cell]
    }

    /// Dense 0/1 column of `A_G`.
    pub fn column(&self, cell: usize) -> Vec<i64> {
        let mut c = vec![0; self.n_rows];
        for &r in &self.cell_rows[cell] {
            c[r as usize] = 1;
        }
        c
    }

    /// Row of `A_G` for clique `k` and clique state `y` (1-based values).
    pub fn row_index(&self, k: usize, y: &[u32]) -> usize {
        let mut idx = 0;
        for (&v, &x) in self.cliques[k].iter().zip(y) {
            idx = idx * self.space.levels()[v] as usize + (x as usize - 1);
        }
        self.block_offsets[k] + idx
    }

    /// Row for the marginal over vertex set `vertices` (must be a listed
    /// clique, any order) at the given states.
    pub fn row_for(&self, vertices: &[usize], y: &[u32]) -> Option<usize> {
        let mut pairs: Vec<(usize, u32)> =
            vertices.iter().copied().zip(y.iter().copied()).collect();
        pairs.sort_unstable();
        let vs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let k = self.cliques.iter().position(|c| *c == vs)?;
        let ys: Vec<u32> = pairs.iter().map(|p| p.1).collect();
        Some(self.row_index(k, &ys))
    }

    pub fn row_label(&self, row: usize) -> String {
        let k = self.block_offsets.partition_point(|&o| o <= row) - 1;
        let mut rem = row - self.block_offsets[k];
        let clique = &self.cliques[k];
        let mut ys = vec![0u32; clique.len()];
        for i in (0..clique.len()).rev() {
            let d = self.space.levels()[clique[i]] as usize;
            ys[i] = (rem % d) as u32 + 1;
            rem /= d;
        }
        let vs: Vec<String> = clique.iter().map(|v| (v + 1).to_string()).collect();
        let ys: Vec<String> = ys.iter().map(|y| y.to_string()).collect();
        format!("({}; {})", vs.join(","), ys.join(","))
    }
}

/// Builds `A_G` for the maximal cliques of `g`.
pub fn margin_map(g: &LabeledGraph) -> MarginMap {
    let space = g.space().clone();
    let cliques = maximal_cliques(g);
    let mut block_offsets = Vec::with_capacity(cliques.len());
    let mut n_rows = 0;
    for c in &cliques {
        block_offsets.push(n_rows);
        n_rows += c
            .iter()
            .map(|&v| space.levels()[v] as usize)
            .product::<usize>();
    }
    let mut am = MarginMap {
        space,
        cliques,
        block_offsets,
        n_rows,
        cell_rows: Vec::new(),
    };
    am.cell_rows = (0..am.n_cols())
        .map(|cell| {
            let x = am.space.state(cell);
            (0..am.cliques.len())
                .map(|k| am.row_index(k, &x.restrict(&am.cliques[k])) as u32)
                .collect()
        })
        .collect();
    am
}

/// Dense vector of margin counts indexed by `MarginMap` rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarginVector(pub Vec<u64>);

impl MarginVector {
    pub fn values(&self) -> &[u64] {
        &self.0
    }
}

/// Exact product `A_G t`.
pub fn margins(am: &MarginMap, t: &Table) -> Result<MarginVector> {
    let mut y = vec![0u64; am.n_rows()];
    for (cell, c) in t.iter() {
        if cell >= am.n_cols() {
            return Err(Error::Incompatible(format!(
                "cell {cell} outside a space of {} cells",
                am.n_cols()
            )));
        }
        for &r in am.rows_of(cell) {
            y[r as usize] += c as u64;
        }
    }
    Ok(MarginVector(y))
}

/// True when `plus` and `minus` have identical margins.
pub fn is_margin_neutral(am: &MarginMap, m: &Move) -> bool {
    match (margins(am, &m.plus), margins(am, &m.minus)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Chordality via maximum cardinality search and a perfect elimination check.
pub fn is_chordal(g: &LabeledGraph) -> bool {
    let n = g.n_vertices();
    let mut weight = vec![0usize; n];
    let mut numbered = 0u64;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| numbered >> v & 1 == 0)
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .unwrap();
        order.push(v);
        numbered |= 1 << v;
        for u in g.neighbors(v) {
            if numbered >> u & 1 == 0 {
                weight[u] += 1;
            }
        }
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // Each vertex's earlier neighbors must form a clique; it suffices to check
    // them against the latest earlier neighbor.
    for (i, &v) in order.iter().enumerate() {
        let earlier: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] < i).collect();
        if let Some(&parent) = earlier.iter().max_by_key(|&&u| pos[u]) {
            for &u in &earlier {
                if u != parent && !g.has_edge(u, parent) {
                    return false;
                }
            }
        }
    }
    true
}

/// A split `(V1, V2)` with `V1 n V2` a clique separating the rest, or `None`
/// when `g` is irreducible.
pub fn reducible_split(g: &LabeledGraph) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    for sep in g.all_cliques() {
        let sm = sep.iter().fold(0u64, |acc, &v| acc | 1 << v);
        let comps = g.components(sm);
        if comps.len() >= 2 {
            let v1 = comps[0] | sm;
            let v2 = (g.all_mask() & !comps[0]) | sm;
            return Some((bits(v1).collect(), bits(v2).collect()));
        }
    }
    None
}

/// Adds an apex vertex (index `n`) joined to every old vertex.
pub fn cone_graph(g: &LabeledGraph, d0: u32) -> Result<LabeledGraph> {
    if d0 < 2 {
        return Err(Error::InvalidSpace(format!("apex level {d0} < 2")));
    }
    let n = g.n_vertices();
    let mut levels = g.levels().to_vec();
    levels.push(d0);
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend((0..n).map(|v| (v, n)));
    LabeledGraph::new(levels, &edges)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: usize,
    pub d: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphJson {
    pub fn from_graph(g: &LabeledGraph) -> Self {
        GraphJson {
            vertices: g.n_vertices(),
            d: g.levels().to_vec(),
            edges: g.edges().map(|(u, v)| (u + 1, v + 1)).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<LabeledGraph> {
        if self.d.len() != self.vertices {
            return Err(Error::InvalidGraph(format!(
                "{} levels for {} vertices",
                self.d.len(),
                self.vertices
            )));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u == 0 || v == 0 {
                return Err(Error::InvalidGraph("vertices are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        LabeledGraph::new(self.d.clone(), &edges)
    }
}
