//! State spaces, tables and moves.
//!
//! A [`Table`] is a nonnegative integer vector over the cells of a
//! [`StateSpace`], stored sparsely as `(cell index, count)` pairs sorted by
//! cell index. The same value doubles as the exponent vector of a monomial.
//! A [`Move`] is a pair of disjointly supported tables; applying it removes
//! the `minus` part and adds the `plus` part.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Product state space `[d_1] x ... x [d_N]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSpace {
    levels: Vec<u32>,
    strides: Vec<usize>,
    total_cells: usize,
}

impl StateSpace {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSpace("no vertices".into()));
        }
        if let Some(l) = levels.iter().find(|&&l| l < 2) {
            return Err(Error::InvalidSpace(format!("level {l} < 2")));
        }
        let mut strides = vec![0usize; levels.len()];
        let mut acc: usize = 1;
        for v in (0..levels.len()).rev() {
            strides[v] = acc;
            acc = acc
                .checked_mul(levels[v] as usize)
                .ok_or_else(|| Error::TooLarge("state space overflows usize".into()))?;
        }
        if acc > u32::MAX as usize {
            return Err(Error::TooLarge(format!("{acc} cells")));
        }
        Ok(StateSpace {
            levels,
            strides,
            total_cells: acc,
        })
    }

    pub fn binary(n: usize) -> Self {
        StateSpace::new(vec![2; n]).expect("binary space")
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn n_vertices(&self) -> usize {
        self.levels.len()
    }

    pub fn total_cells(&self) -> usize {
        self.total_cells
    }

    pub fn is_binary(&self) -> bool {
        self.levels.iter().all(|&l| l == 2)
    }

    /// Canonical mixed-radix index, last coordinate fastest.
    pub fn state_index(&self, x: &State) -> Result<usize> {
        if x.0.len() != self.levels.len() {
            return Err(Error::InvalidState(format!(
                "state has {} coordinates, space has {}",
                x.0.len(),
                self.levels.len()
            )));
        }
        let mut idx = 0usize;
        for (v, (&c, &d)) in x.0.iter().zip(&self.levels).enumerate() {
            if c < 1 || c > d {
                return Err(Error::InvalidState(format!(
                    "coordinate {} = {c} outside 1..={d}",
                    v + 1
                )));
            }
            idx += (c as usize - 1) * self.strides[v];
        }
        Ok(idx)
    }

    pub fn state(&self, index: usize) -> State {
        assert!(index < self.total_cells, "cell index out of range");
        State(
            self.levels
                .iter()
                .zip(&self.strides)
                .map(|(&d, &s)| ((index / s) % d as usize) as u32 + 1)
                .collect(),
        )
    }

    /// Coordinate `v` (1-based value) of the cell with the given index.
    pub fn coord(&self, index: usize, v: usize) -> u32 {
        ((index / self.strides[v]) % self.levels[v] as usize) as u32 + 1
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.total_cells).map(move |i| self.state(i))
    }

    pub fn index_of(&self, coords: &[u32]) -> Result<usize> {
        self.state_index(&State(coords.to_vec()))
    }

    pub fn unit(&self, coords: &[u32]) -> Result<Table> {
        Ok(Table::unit(self.index_of(coords)?))
    }

    /// Table with the given states, each counted once per occurrence.
    pub fn table_of(&self, states: &[&[u32]]) -> Result<Table> {
        let mut idx = Vec::with_capacity(states.len());
        for s in states {
            idx.push(self.index_of(s)?);
        }
        Ok(Table::from_indices(idx))
    }

    /// The table with every cell counted once.
    pub fn all_ones(&self) -> Table {
        Table::from_indices(0..self.total_cells)
    }
}

/// A cell of the state space; coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State(pub Vec<u32>);

impl State {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Restriction `x_W` to the given vertices.
    pub fn restrict(&self, vertices: &[usize]) -> Vec<u32> {
        vertices.iter().map(|&v| self.0[v]).collect()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().any(|&c| c > 9);
        for (i, c) in self.0.iter().enumerate() {
            if wide && i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Switch 1 and 2 in every coordinate of a binary state.
pub fn opposite_state(x: &State, space: &StateSpace) -> Result<State> {
    if !space.is_binary() {
        return Err(Error::UnsupportedLevels(format!(
            "opposite state needs binary levels, got {:?}",
            space.levels()
        )));
    }
    space.state_index(x)?;
    Ok(State(x.0.iter().map(|&c| 3 - c).collect()))
}

/// Sparse nonnegative integer table; entries sorted by cell index, no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    entries: Vec<(u32, u32)>,
}

impl Table {
    pub fn zero() -> Self {
        Table::default()
    }

    pub fn unit(index: usize) -> Self {
        Table {
            entries: vec![(index as u32, 1)],
        }
    }

    /// Builds a table from `(index, count)` pairs in any order; repeated
    /// indices are summed and zero counts dropped.
    pub fn from_counts<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (i as u32, c))
            .collect();
        v.sort_unstable();
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            match entries.last_mut() {
                Some(last) if last.0 == i => {
                    last.1 = last.1.checked_add(c).expect("count overflow")
                }
                _ => entries.push((i, c)),
            }
        }
        Table { entries }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Table::from_counts(indices.into_iter().map(|i| (i, 1)))
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|&(i, c)| (i as usize, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i as usize)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn get(&self, index: usize) -> u32 {
        match self
            .entries
            .binary_search_by_key(&(index as u32), |&(i, _)| i)
        {
            Ok(p) => self.entries[p].1,
            Err(_) => 0,
        }
    }

    /// Entrywise `self <= other`, i.e. the monomial of `self` divides that of `other`.
    pub fn divides(&self, other: &Table) -> bool {
        let mut j = 0;
        for &(i, c) in &self.entries {
            while j < other.entries.len() && other.entries[j].0 < i {
                j += 1;
            }
            if j == other.entries.len() || other.entries[j].0 != i || other.entries[j].1 < c {
                return false;
            }
        }
        true
    }

    pub fn shares_support(&self, other: &Table) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            match self.entries[i].0.cmp(&other.entries[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn add(&self, other: &Table) -> Table {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            match (a, b) {
                (Some(&x), Some(&y)) if x.0 == y.0 => {
                    out.push((x.0, x.1.checked_add(y.1).expect("count overflow")));
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x.0 < y.0 => {
                    out.push(x);
                    i += 1;
                }
                (Some(_), Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Table { entries: out }
    }

    /// `self - other`, or `None` if some count would go negative.
    pub fn checked_sub(&self, other: &Table) -> Option<Table> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut j = 0;
        for &(i, c) in &self.entries {
            if j < other.entries.len() && other.entries[j].0 < i {
                return None;
            }
            if j < other.entries.len() && other.entries[j].0 == i {
                let d = other.entries[j].1;
                j += 1;
                match c.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((i, c - d)),
                }
            } else {
                out.push((i, c));
            }
        }
        if j < other.entries.len() {
            return None;
        }
        Some(Table { entries: out })
    }

    pub fn scale(&self, k: u32) -> Table {
        if k == 0 {
            return Table::zero();
        }
        Table {
            entries: self
                .entries
                .iter()
                .map(|&(i, c)| (i, c.checked_mul(k).expect("count overflow")))
                .collect(),
        }
    }

    /// Dense count vector of length `n`.
    pub fn to_dense(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, c) in &self.entries {
            v[i as usize] = c;
        }
        v
    }

    /// Relabels cells through `f`; used for symmetry actions.
    pub fn map_cells<F: Fn(usize) -> usize>(&self, f: F) -> Table {
        Table::from_counts(self.iter().map(|(i, c)| (f(i), c)))
    }

    pub fn display<'a>(&'a self, space: &'a StateSpace) -> TableDisplay<'a> {
        TableDisplay { table: self, space }
    }
}

pub struct TableDisplay<'a> {
    table: &'a Table,
    space: &'a StateSpace,
}

impl fmt::Display for TableDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.table.is_zero() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.table.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "e{}", self.space.state(i))?;
        }
        Ok(())
    }
}

/// A pure-difference move `plus - minus` with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub plus: Table,
    pub minus: Table,
}

impl Move {
    pub fn new(plus: Table, minus: Table) -> Result<Self> {
        if plus.shares_support(&minus) {
            return Err(Error::InvalidMove("plus and minus share support".into()));
        }
        Ok(Move { plus, minus })
    }

    /// Builds the move `a - b` after cancelling common cells; `None` if `a == b`.
    pub fn from_difference(a: &Table, b: &Table) -> Option<Move> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (ea, eb) = (a.entries(), b.entries());
        while i < ea.len() || j < eb.len() {
            match (ea.get(i), eb.get(j)) {
                (Some(&x), Some(&y)) if x.0 == y.0 => {
                    match x.1.cmp(&y.1) {
                        Ordering::Greater => plus.push((x.0 as usize, x.1 - y.1)),
                        Ordering::Less => minus.push((x.0 as usize, y.1 - x.1)),
                        Ordering::Equal => {}
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) if x.0 < y.0 => {
                    plus.push((x.0 as usize, x.1));
                    i += 1;
                }
                (Some(_), Some(&y)) => {
                    minus.push((y.0 as usize, y.1));
                    j += 1;
                }
                (Some(&x), None) => {
                    plus.push((x.0 as usize, x.1));
                    i += 1;
                }
                (None, Some(&y)) => {
                    minus.push((y.0 as usize, y.1));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        if plus.is_empty() && minus.is_empty() {
            return None;
        }
        Some(Move {
            plus: Table::from_counts(plus),
            minus: Table::from_counts(minus),
        })
    }

    pub fn reverse(&self) -> Move {
        Move {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn degree(&self) -> u64 {
        self.plus.degree().max(self.minus.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.plus.degree() == self.minus.degree()
    }

    /// Orientation with the smallest cell in `plus`.
    pub fn canonical(&self) -> Move {
        let p = self.plus.entries().first().map(|e| e.0);
        let m = self.minus.entries().first().map(|e| e.0);
        match (p, m) {
            (Some(a), Some(b)) if b < a => self.reverse(),
            (None, Some(_)) => self.reverse(),
            _ => self.clone(),
        }
    }

    /// The cells touched by either side.
    pub fn touches(&self, cell: usize) -> bool {
        self.plus.get(cell) > 0 || self.minus.get(cell) > 0
    }

    pub fn display<'a>(&'a self, space: &'a StateSpace) -> MoveDisplay<'a> {
        MoveDisplay { mv: self, space }
    }
}

pub struct MoveDisplay<'a> {
    mv: &'a Move,
    space: &'a StateSpace,
}

impl fmt::Display for MoveDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) - ({})",
            self.mv.plus.display(self.space),
            self.mv.minus.display(self.space)
        )
    }
}

/// `t - m.minus + m.plus`, failing when `m.minus` does not divide `t`.
pub fn apply_move(t: &Table, m: &Move) -> Result<Table> {
    let rest = t.checked_sub(&m.minus).ok_or(Error::MoveNotApplicable)?;
    Ok(rest.add(&m.plus))
}

/// Sorts moves canonically and removes duplicates up to sign.
pub fn dedup_moves<I: IntoIterator<Item = Move>>(moves: I) -> Vec<Move> {
    let mut v: Vec<Move> = moves.into_iter().map(|m| m.canonical()).collect();
    v.sort();
    v.dedup();
    v
}

// ---------------------------------------------------------------------------
// JSON

pub type CellsJson = Vec<(Vec<u32>, u32)>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableJson {
    pub d: Vec<u32>,
    pub cells: CellsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MoveJson {
    pub plus: CellsJson,
    pub minus: CellsJson,
}

pub fn cells_to_json(t: &Table, space: &StateSpace) -> CellsJson {
    t.iter().map(|(i, c)| (space.state(i).0, c)).collect()
}

pub fn cells_from_json(cells: &CellsJson, space: &StateSpace) -> Result<Table> {
    let mut pairs = Vec::with_capacity(cells.len());
    for (coords, c) in cells {
        pairs.push((space.index_of(coords)?, *c));
    }
    Ok(Table::from_counts(pairs))
}

impl TableJson {
    pub fn from_table(t: &Table, space: &StateSpace) -> Self {
        TableJson {
            d: space.levels().to_vec(),
            cells: cells_to_json(t, space),
        }
    }

    pub fn to_table(&self) -> Result<(StateSpace, Table)> {
        let space = StateSpace::new(self.d.clone())?;
        let t = cells_from_json(&self.cells, &space)?;
        Ok((space, t))
    }
}

impl MoveJson {
    pub fn from_move(m: &Move, space: &StateSpace) -> Self {
        MoveJson {
            plus: cells_to_json(&m.plus, space),
            minus: cells_to_json(&m.minus, space),
        }
    }

    pub fn to_move(&self, space: &StateSpace) -> Result<Move> {
        Move::new(
            cells_from_json(&self.plus, space)?,
            cells_from_json(&self.minus, space)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap_move(s: &StateSpace) -> Move {
        Move::new(
            s.table_of(&[&[1, 2], &[2, 1]]).unwrap(),
            s.table_of(&[&[1, 1], &[2, 2]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn state_index_examples() {
        let s = StateSpace::new(vec![2, 2, 2, 2]).unwrap();
        assert_eq!(s.state_index(&State(vec![1, 1, 1, 1])).unwrap(), 0);
        assert_eq!(s.state_index(&State(vec![2, 2, 2, 2])).unwrap(), 15);
        let s = StateSpace::new(vec![2, 3, 2]).unwrap();
        assert_eq!(s.state_index(&State(vec![1, 2, 1])).unwrap(), 2);
        assert!(matches!(
            s.state_index(&State(vec![1, 4, 1])),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            s.state_index(&State(vec![1, 1])),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn state_index_is_monotone_bijection() {
        for levels in [vec![2, 3, 2], vec![4, 4, 4, 4, 4, 4], vec![3, 2, 5, 2]] {
            let s = StateSpace::new(levels).unwrap();
            assert!(s.total_cells() <= 4096);
            let mut prev: Option<State> = None;
            for i in 0..s.total_cells() {
                let x = s.state(i);
                assert_eq!(s.state_index(&x).unwrap(), i);
                if let Some(p) = prev {
                    assert!(p < x);
                }
                prev = Some(x);
            }
        }
    }

    #[test]
    fn level_one_is_rejected() {
        assert!(StateSpace::new(vec![2, 1]).is_err());
    }

    #[test]
    fn apply_swap() {
        let s = StateSpace::new(vec![2, 2]).unwrap();
        let m = swap_move(&s);
        let t = s.table_of(&[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(
            apply_move(&t, &m).unwrap(),
            s.table_of(&[&[1, 2], &[2, 1]]).unwrap()
        );

        let t = s.unit(&[1, 1]).unwrap();
        assert_eq!(apply_move(&t, &m), Err(Error::MoveNotApplicable));

        let t = s.table_of(&[&[1, 1], &[1, 1], &[2, 2]]).unwrap();
        assert_eq!(
            apply_move(&t, &m).unwrap(),
            s.table_of(&[&[1, 1], &[1, 2], &[2, 1]]).unwrap()
        );
    }

    #[test]
    fn opposite() {
        let s = StateSpace::binary(4);
        assert_eq!(
            opposite_state(&State(vec![1, 1, 1, 1]), &s).unwrap(),
            State(vec![2, 2, 2, 2])
        );
        let s3 = StateSpace::binary(3);
        let x = State(vec![1, 2, 1]);
        let y = opposite_state(&x, &s3).unwrap();
        assert_eq!(y, State(vec![2, 1, 2]));
        assert_eq!(opposite_state(&y, &s3).unwrap(), x);
        let t = StateSpace::new(vec![2, 3, 2]).unwrap();
        assert!(matches!(
            opposite_state(&x, &t),
            Err(Error::UnsupportedLevels(_))
        ));
    }

    #[test]
    fn overlapping_move_is_rejected() {
        assert!(Move::new(Table::unit(0), Table::from_indices([0, 1])).is_err());
    }

    #[test]
    fn canonical_orientation_and_dedup() {
        let s = StateSpace::new(vec![2, 2]).unwrap();
        let m = swap_move(&s);
        let c = m.canonical();
        assert_eq!(c.plus.entries()[0].0, 0);
        let v = dedup_moves(vec![m.clone(), m.reverse(), m]);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let s = StateSpace::new(vec![2, 3]).unwrap();
        let t = Table::from_counts([(0, 2), (5, 1)]);
        let j = TableJson::from_table(&t, &s);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"d":[2,3],"cells":[[[1,1],2],[[2,3],1]]}"#);
        let back: TableJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_table().unwrap(), (s, t));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn table(n: usize) -> impl Strategy<Value = Table> {
            proptest::collection::vec((0..n, 0u32..4), 0..8).prop_map(Table::from_counts)
        }

        proptest! {
            #[test]
            fn apply_then_reverse_is_identity(t in table(16), a in table(16), b in table(16)) {
                if let Some(m) = Move::from_difference(&a, &b) {
                    let base = t.add(&m.minus);
                    let moved = apply_move(&base, &m).unwrap();
                    prop_assert_eq!(moved.degree() as i64 - base.degree() as i64,
                        m.plus.degree() as i64 - m.minus.degree() as i64);
                    prop_assert_eq!(apply_move(&moved, &m.reverse()).unwrap(), base);
                }
            }

            #[test]
            fn sub_inverts_add(a in table(12), b in table(12)) {
                prop_assert_eq!(a.add(&b).checked_sub(&b), Some(a.clone()));
                prop_assert!(b.divides(&a.add(&b)));
                prop_assert_eq!(a.add(&b).degree(), a.degree() + b.degree());
            }
        }
    }
}
