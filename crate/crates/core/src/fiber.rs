//! Breadth-first exploration of the implicit graph whose nodes are tables and
//! whose edges are applications of moves (in either direction), plus fiber
//! enumeration and extensional Markov-basis checks.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{margins, MarginMap, MarginVector};
use crate::tensor::{apply_move, Move, Table};

/// Components larger than this are reported without their member list.
pub const MEMBER_CAP: usize = 10_000;

/// Moves in both orientations, indexed by the smallest cell of the side that
/// must divide the table.
pub struct MoveIndex {
    oriented: Vec<(Table, Table)>,
    by_first: HashMap<u32, Vec<usize>>,
}

impl MoveIndex {
    pub fn new(moves: &[Move]) -> Self {
        let mut oriented = Vec::with_capacity(2 * moves.len());
        for m in moves {
            oriented.push((m.minus.clone(), m.plus.clone()));
            oriented.push((m.plus.clone(), m.minus.clone()));
        }
        let mut by_first: HashMap<u32, Vec<usize>> = HashMap::new();
        for (k, (from, _)) in oriented.iter().enumerate() {
            let key = from.entries().first().map(|e| e.0).unwrap_or(u32::MAX);
            by_first.entry(key).or_default().push(k);
        }
        MoveIndex { oriented, by_first }
    }

    /// The oriented move number `k` as a `Move` (applying it removes `minus`).
    pub fn oriented_move(&self, k: usize) -> Move {
        let (from, to) = &self.oriented[k];
        Move {
            plus: to.clone(),
            minus: from.clone(),
        }
    }

    /// Every `(oriented move, neighbor)` reachable from `t` in one step.
    pub fn neighbors(&self, t: &Table) -> Vec<(usize, Table)> {
        let mut out = Vec::new();
        let mut visit = |ks: &Vec<usize>| {
            for &k in ks {
                let (from, to) = &self.oriented[k];
                if let Some(rest) = t.checked_sub(from) {
                    out.push((k, rest.add(to)));
                }
            }
        };
        for &(cell, _) in t.entries() {
            if let Some(ks) = self.by_first.get(&cell) {
                visit(ks);
            }
        }
        if let Some(ks) = self.by_first.get(&u32::MAX) {
            visit(ks);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub start: Table,
    pub size: usize,
    /// Sorted members, present when the component is exact and not above
    /// [`MEMBER_CAP`].
    pub members: Option<Vec<Table>>,
    pub truncated: bool,
}

impl ComponentReport {
    pub fn contains(&self, t: &Table) -> Option<bool> {
        self.members.as_ref().map(|m| m.binary_search(t).is_ok())
    }
}

fn explore(start: &Table, index: &MoveIndex, node_cap: usize) -> (HashSet<Table>, bool) {
    let mut visited: HashSet<Table> = HashSet::new();
    visited.insert(start.clone());
    let mut frontier = vec![start.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in &frontier {
            for (_, n) in index.neighbors(t) {
                if visited.contains(&n) {
                    continue;
                }
                if visited.len() >= node_cap {
                    return (visited, true);
                }
                visited.insert(n.clone());
                next.push(n);
            }
        }
        next.sort();
        frontier = next;
    }
    (visited, false)
}

/// The connected component of `start` under `moves`, exact up to `node_cap`
/// tables.
pub fn connected_component(start: &Table, moves: &[Move], node_cap: usize) -> ComponentReport {
    assert!(node_cap >= 1, "node_cap must be positive");
    component_with_index(start, &MoveIndex::new(moves), node_cap)
}

pub fn component_with_index(start: &Table, index: &MoveIndex, node_cap: usize) -> ComponentReport {
    component_with_member_cap(start, index, node_cap, MEMBER_CAP)
}

/// As [`component_with_index`] with an explicit limit on retained members.
pub fn component_with_member_cap(
    start: &Table,
    index: &MoveIndex,
    node_cap: usize,
    member_cap: usize,
) -> ComponentReport {
    let (visited, truncated) = explore(start, index, node_cap);
    let size = visited.len();
    let members = if !truncated && size <= member_cap {
        let mut m: Vec<Table> = visited.into_iter().collect();
        m.sort();
        Some(m)
    } else {
        None
    };
    ComponentReport {
        start: start.clone(),
        size,
        members,
        truncated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// Oriented moves; folding `apply_move` along them turns `u` into `v`.
    Connected(Vec<Move>),
    NotConnected,
    /// Both searches hit the node cap before meeting.
    Inconclusive,
}

impl Connectivity {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectivity::Connected(_))
    }
}

struct Side {
    parent: HashMap<Table, Option<(Table, usize)>>,
    frontier: Vec<Table>,
    capped: bool,
    exhausted: bool,
}

impl Side {
    fn new(root: &Table) -> Self {
        let mut parent = HashMap::new();
        parent.insert(root.clone(), None);
        Side {
            parent,
            frontier: vec![root.clone()],
            capped: false,
            exhausted: false,
        }
    }

    fn active(&self) -> bool {
        !self.capped && !self.exhausted
    }

    /// Expands one level; returns a node also seen by `other`, if any.
    fn step(&mut self, index: &MoveIndex, other: &Side, node_cap: usize) -> Option<Table> {
        let mut next = Vec::new();
        for t in std::mem::take(&mut self.frontier) {
            for (k, n) in index.neighbors(&t) {
                if self.parent.contains_key(&n) {
                    continue;
                }
                if self.parent.len() >= node_cap {
                    self.capped = true;
                    return None;
                }
                self.parent.insert(n.clone(), Some((t.clone(), k)));
                if other.parent.contains_key(&n) {
                    return Some(n);
                }
                next.push(n);
            }
        }
        next.sort();
        self.exhausted = next.is_empty();
        self.frontier = next;
        None
    }

    /// Oriented move indices from the root to `t`.
    fn chain(&self, t: &Table) -> Vec<(Table, usize)> {
        let mut out = Vec::new();
        let mut cur = t.clone();
        while let Some(Some((p, k))) = self.parent.get(&cur) {
            out.push((p.clone(), *k));
            cur = p.clone();
        }
        out.reverse();
        out
    }
}

/// Bidirectional search for a path from `u` to `v`.
pub fn are_connected(
    u: &Table,
    v: &Table,
    moves: &[Move],
    node_cap: usize,
) -> Result<Connectivity> {
    if u == v {
        return Ok(Connectivity::Connected(Vec::new()));
    }
    let index = MoveIndex::new(moves);
    let mut a = Side::new(u);
    let mut b = Side::new(v);
    let meet = loop {
        if a.exhausted || b.exhausted {
            return Ok(Connectivity::NotConnected);
        }
        if !a.active() && !b.active() {
            return Ok(Connectivity::Inconclusive);
        }
        let expand_a = match (a.active(), b.active()) {
            (true, true) => a.parent.len() <= b.parent.len(),
            (x, _) => x,
        };
        let hit = if expand_a {
            a.step(&index, &b, node_cap)
        } else {
            b.step(&index, &a, node_cap)
        };
        if let Some(m) = hit {
            break m;
        }
    };
    let mut path: Vec<Move> = a
        .chain(&meet)
        .into_iter()
        .map(|(_, k)| index.oriented_move(k))
        .collect();
    path.extend(
        b.chain(&meet)
            .into_iter()
            .rev()
            .map(|(_, k)| index.oriented_move(k).reverse()),
    );
    let end = replay(u, &path)?;
    debug_assert_eq!(&end, v);
    if &end != v {
        return Err(Error::InvalidMove(
            "reconstructed path does not replay".into(),
        ));
    }
    Ok(Connectivity::Connected(path))
}

/// Applies the moves of `path` in order.
pub fn replay(start: &Table, path: &[Move]) -> Result<Table> {
    path.iter()
        .try_fold(start.clone(), |t, m| apply_move(&t, m))
}

fn check_key(am: &MarginMap, key: &MarginVector) -> Result<u64> {
    if key.0.len() != am.n_rows() {
        return Err(Error::Incompatible(format!(
            "margin vector of length {} for {} rows",
            key.0.len(),
            am.n_rows()
        )));
    }
    let mut degree = None;
    for k in 0..am.cliques().len() {
        let s: u64 = key.0[am.block(k)].iter().sum();
        match degree {
            None => degree = Some(s),
            Some(d) if d != s => {
                return Err(Error::Incompatible("block sums disagree".into()));
            }
            _ => {}
        }
    }
    Ok(degree.unwrap_or(0))
}

/// Every table with margins equal to `key`, by backtracking over cells in
/// index order.
pub fn enumerate_fiber(
    am: &MarginMap,
    key: &MarginVector,
    size_cap: usize,
) -> Result<BTreeSet<Table>> {
    check_key(am, key)?;
    let n = am.n_cols();
    let mut last_use = vec![0usize; am.n_rows()];
    for cell in 0..n {
        for &r in am.rows_of(cell) {
            last_use[r as usize] = cell;
        }
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, &c) in last_use.iter().enumerate() {
        closing[c].push(r);
    }
    let mut residual: Vec<i64> = key.0.iter().map(|&x| x as i64).collect();
    let mut out = BTreeSet::new();
    let mut current: Vec<(usize, u32)> = Vec::new();

    struct Ctx<'a> {
        am: &'a MarginMap,
        closing: &'a [Vec<usize>],
        size_cap: usize,
    }

    fn rec(
        ctx: &Ctx,
        cell: usize,
        residual: &mut [i64],
        current: &mut Vec<(usize, u32)>,
        out: &mut BTreeSet<Table>,
    ) -> Result<()> {
        if cell == ctx.am.n_cols() {
            if residual.iter().all(|&r| r == 0) {
                out.insert(Table::from_counts(current.iter().copied()));
                if out.len() > ctx.size_cap {
                    return Err(Error::FiberTooLarge(ctx.size_cap));
                }
            }
            return Ok(());
        }
        let rows = ctx.am.rows_of(cell);
        let max = rows
            .iter()
            .map(|&r| residual[r as usize])
            .min()
            .unwrap_or(0)
            .max(0);
        for c in (0..=max).rev() {
            for &r in rows {
                residual[r as usize] -= c;
            }
            if ctx.closing[cell].iter().all(|&r| residual[r] == 0) {
                if c > 0 {
                    current.push((cell, c as u32));
                }
                let res = rec(ctx, cell + 1, residual, current, out);
                if c > 0 {
                    current.pop();
                }
                if res.is_err() {
                    for &r in rows {
                        residual[r as usize] += c;
                    }
                    return res;
                }
            }
            for &r in rows {
                residual[r as usize] += c;
            }
        }
        Ok(())
    }

    let ctx = Ctx {
        am,
        closing: &closing,
        size_cap,
    };
    rec(&ctx, 0, &mut residual, &mut current, &mut out)?;
    Ok(out)
}

/// Upper bound on the number of tables enumerated per degree.
pub const VERIFY_TABLE_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovVerdict {
    pub passed: bool,
    pub degree_bound: u32,
    pub tables_checked: usize,
    pub fibers_checked: usize,
    /// Same margins, different components.
    pub witness: Option<(Table, Table)>,
    pub failing_degree: Option<u32>,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All multisets of `k` cells out of `n`, as tables.
fn multisets(n: usize, k: usize) -> Vec<Table> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    if k == 0 {
        return vec![Table::zero()];
    }
    loop {
        out.push(Table::from_indices(idx.iter().copied()));
        let mut p = k;
        while p > 0 && idx[p - 1] == n - 1 {
            p -= 1;
        }
        if p == 0 {
            return out;
        }
        idx[p - 1] += 1;
        let v = idx[p - 1];
        idx[p..k].fill(v);
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks that `moves` connect every fiber of degree `1..=degree_bound`.
pub fn verify_markov_basis(
    moves: &[Move],
    am: &MarginMap,
    degree_bound: u32,
) -> Result<MarkovVerdict> {
    let n = am.n_cols();
    let index = MoveIndex::new(moves);
    let mut tables_checked = 0;
    let mut fibers_checked = 0;
    for k in 1..=degree_bound as usize {
        let count = binomial(n + k - 1, k).unwrap_or(usize::MAX);
        if count > VERIFY_TABLE_BUDGET {
            return Err(Error::TooLarge(format!("{count} tables at degree {k}")));
        }
        let tables = multisets(n, k);
        let position: HashMap<&Table, usize> =
            tables.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let edges: Vec<(usize, usize)> = tables
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, t)| {
                index
                    .neighbors(t)
                    .into_iter()
                    .filter_map(|(_, nb)| position.get(&nb).copied())
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect();
        let mut parent: Vec<usize> = (0..tables.len()).collect();
        for (i, j) in edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<MarginVector, Vec<usize>> = BTreeMap::new();
        for (i, t) in tables.iter().enumerate() {
            groups.entry(margins(am, t)?).or_default().push(i);
        }
        tables_checked += tables.len();
        fibers_checked += groups.len();
        let mut failure: Option<(Table, Table)> = None;
        for members in groups.values() {
            let root = find(&mut parent, members[0]);
            if let Some(&other) = members.iter().find(|&&j| find(&mut parent, j) != root) {
                let pair = (tables[members[0]].clone(), tables[other].clone());
                if failure.as_ref().is_none_or(|f| pair < *f) {
                    failure = Some(pair);
                }
            }
        }
        if let Some(w) = failure {
            return Ok(MarkovVerdict {
                passed: false,
                degree_bound,
                tables_checked,
                fibers_checked,
                witness: Some(w),
                failing_degree: Some(k as u32),
            });
        }
    }
    Ok(MarkovVerdict {
        passed: true,
        degree_bound,
        tables_checked,
        fibers_checked,
        witness: None,
        failing_degree: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{glg_moves, margin_map, LabeledGraph};
    use crate::tensor::StateSpace;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(multisets(16, 4).len(), binomial(19, 4).unwrap());
        assert_eq!(multisets(3, 0), vec![Table::zero()]);
    }

    #[test]
    fn swap_pair_component() {
        let g = LabeledGraph::binary_cycle(4);
        let s = g.space();
        let moves = glg_moves(&g).unwrap();
        let start = s.table_of(&[&[1, 1, 1, 1], &[1, 2, 1, 2]]).unwrap();
        let rep = connected_component(&start, &moves, 100);
        assert_eq!(rep.size, 2);
        let partner = s.table_of(&[&[1, 2, 1, 1], &[1, 1, 1, 2]]).unwrap();
        assert_eq!(rep.contains(&partner), Some(true));
        assert!(!rep.truncated);
    }

    #[test]
    fn empty_moves_isolate() {
        let rep = connected_component(&Table::from_indices([0, 3, 3]), &[], 10);
        assert_eq!(rep.size, 1);
        assert_eq!(rep.members, Some(vec![Table::from_indices([0, 3, 3])]));
    }

    #[test]
    fn cap_truncates() {
        let g = LabeledGraph::binary_cycle(4);
        let moves = glg_moves(&g).unwrap();
        let start = g.space().all_ones().scale(2);
        let rep = connected_component(&start, &moves, 5);
        assert!(rep.truncated);
        assert_eq!(rep.size, 5);
        assert_eq!(rep.members, None);
    }

    fn nn_space() -> (StateSpace, Vec<Move>) {
        let s = StateSpace::new(vec![2]).unwrap();
        let moves = vec![
            Move::new(Table::from_counts([(0, 2)]), Table::from_counts([(1, 2)])).unwrap(),
            Move::new(Table::from_counts([(0, 3)]), Table::from_counts([(1, 3)])).unwrap(),
        ];
        (s, moves)
    }

    #[test]
    fn lattice_walk_in_the_plane() {
        let (_, moves) = nn_space();
        let pt = |a: u32, b: u32| Table::from_counts([(0, a), (1, b)]);
        let r = are_connected(&pt(3, 1), &pt(1, 3), &moves, 1000).unwrap();
        let Connectivity::Connected(path) = r else {
            panic!("expected a path")
        };
        assert_eq!(replay(&pt(3, 1), &path).unwrap(), pt(1, 3));
        assert_eq!(
            are_connected(&pt(1, 0), &pt(0, 1), &moves, 1000).unwrap(),
            Connectivity::NotConnected
        );
        assert_eq!(
            are_connected(&pt(2, 2), &pt(2, 2), &moves, 1).unwrap(),
            Connectivity::Connected(vec![])
        );
    }

    #[test]
    fn inconclusive_when_both_capped() {
        let g = LabeledGraph::binary_cycle(4);
        let moves = glg_moves(&g).unwrap();
        let u = g.space().all_ones();
        let far = {
            let comp = connected_component(&u, &moves, 1_000_000);
            comp.members.unwrap().last().unwrap().clone()
        };
        assert_eq!(
            are_connected(&u, &far, &moves, 2).unwrap(),
            Connectivity::Inconclusive
        );
        assert!(are_connected(&u, &far, &moves, 1_000_000)
            .unwrap()
            .is_connected());
    }

    #[test]
    fn fiber_enumeration() {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let s = g.space();
        let zero = margins(&am, &Table::zero()).unwrap();
        assert_eq!(enumerate_fiber(&am, &zero, 10).unwrap().len(), 1);

        let t = s.table_of(&[&[1, 1, 1, 1], &[1, 2, 1, 2]]).unwrap();
        let fiber = enumerate_fiber(&am, &margins(&am, &t).unwrap(), 10).unwrap();
        let partner = s.table_of(&[&[1, 2, 1, 1], &[1, 1, 1, 2]]).unwrap();
        assert_eq!(fiber, [t, partner].into_iter().collect());

        let big = margins(&am, &s.all_ones()).unwrap();
        assert_eq!(enumerate_fiber(&am, &big, 3), Err(Error::FiberTooLarge(3)));
        let mut bad = big.clone();
        bad.0[0] += 1;
        assert!(matches!(
            enumerate_fiber(&am, &bad, 3),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn fiber_is_closed_under_moves() {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let moves = glg_moves(&g).unwrap();
        let t = g
            .space()
            .table_of(&[&[1, 1, 1, 1], &[2, 2, 2, 2], &[1, 2, 2, 1]])
            .unwrap();
        let key = margins(&am, &t).unwrap();
        let fiber = enumerate_fiber(&am, &key, 10_000).unwrap();
        assert!(fiber.contains(&t));
        for u in &fiber {
            assert_eq!(margins(&am, u).unwrap(), key);
            for m in &moves {
                for mm in [m.clone(), m.reverse()] {
                    if let Ok(w) = apply_move(u, &mm) {
                        assert!(fiber.contains(&w));
                    }
                }
            }
        }
    }

    #[test]
    fn chordal_quadrics_connect_small_fibers() {
        let path = LabeledGraph::path(vec![2, 3, 2]).unwrap();
        let am = margin_map(&path);
        let v = verify_markov_basis(&glg_moves(&path).unwrap(), &am, 3).unwrap();
        assert!(v.passed, "{v:?}");
    }

    #[test]
    fn quadrics_alone_fail_on_c4() {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let v = verify_markov_basis(&glg_moves(&g).unwrap(), &am, 4).unwrap();
        assert!(!v.passed);
        assert_eq!(v.failing_degree, Some(4));
        let (a, b) = v.witness.unwrap();
        assert_eq!(margins(&am, &a).unwrap(), margins(&am, &b).unwrap());
    }
}
