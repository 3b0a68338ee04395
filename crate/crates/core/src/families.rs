//! Closed-form move sets and minimal-prime witnesses for binary cycles and
//! the bipartite graphs `K_{2,N-2}`, plus composition over a cone vertex.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cone::Functional;
use crate::error::{Error, Result};
use crate::graph::{ci_quadratic_moves, margin_map, sub_states, CiStatement, LabeledGraph};
use crate::tensor::{dedup_moves, Move, State, StateSpace, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeOrigin {
    Cycle,
    K2n,
    /// Marker for the toric component; never enters margin checks.
    Toric,
    /// Sum of one component per slice of a cone vertex.
    Cone,
}

/// A minimal prime given by the variables it contains besides the binomial
/// part, together with the exponent vector `u_P` of the product of the
/// remaining variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeWitness {
    pub id: String,
    /// Cell indices of the generating variables.
    pub variables: BTreeSet<usize>,
    pub witness_table: Table,
    pub origin: PrimeOrigin,
}

impl PrimeWitness {
    fn from_variables(
        id: String,
        variables: BTreeSet<usize>,
        n_cells: usize,
        origin: PrimeOrigin,
    ) -> Self {
        let witness_table = Table::from_indices((0..n_cells).filter(|c| !variables.contains(c)));
        PrimeWitness {
            id,
            variables,
            witness_table,
            origin,
        }
    }

    pub fn toric(space: &StateSpace) -> Self {
        PrimeWitness {
            id: "toric".into(),
            variables: BTreeSet::new(),
            witness_table: space.all_ones(),
            origin: PrimeOrigin::Toric,
        }
    }

    pub fn variable_states(&self, space: &StateSpace) -> Vec<State> {
        self.variables.iter().map(|&c| space.state(c)).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimeWitnessJson {
    pub id: String,
    pub origin: PrimeOrigin,
    pub variables: Vec<Vec<u32>>,
    pub witness: Vec<Vec<u32>>,
}

impl PrimeWitnessJson {
    pub fn from_witness(w: &PrimeWitness, space: &StateSpace) -> Self {
        let states =
            |cells: &mut dyn Iterator<Item = usize>| cells.map(|c| space.state(c).0).collect();
        PrimeWitnessJson {
            id: w.id.clone(),
            origin: w.origin,
            variables: states(&mut w.variables.iter().copied()),
            witness: states(&mut w.witness_table.support()),
        }
    }
}

/// Keeps the first witness for each variable set, then sorts the monomial
/// primes by variable set with the toric marker last.
pub fn dedup_witnesses<I: IntoIterator<Item = PrimeWitness>>(ws: I) -> Vec<PrimeWitness> {
    let mut seen: BTreeMap<(bool, Vec<usize>), PrimeWitness> = BTreeMap::new();
    for w in ws {
        let key = (
            w.origin == PrimeOrigin::Toric,
            w.variables.iter().copied().collect(),
        );
        seen.entry(key).or_insert(w);
    }
    seen.into_values().collect()
}

fn bits_string(xs: &[u32]) -> String {
    xs.iter().map(|x| x.to_string()).collect()
}

fn flip(xs: &[u32]) -> Vec<u32> {
    xs.iter().map(|&x| 3 - x).collect()
}

fn check_cycle(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Unsupported(format!(
            "cycle of length {n}; the triangle is only available through cycle_markov_basis_with"
        )));
    }
    if n > 20 {
        return Err(Error::TooLarge(format!("cycle of length {n}")));
    }
    Ok(())
}

/// Quadrics `arc ⊥ arc | {i, j}` for non-adjacent `i, j` on the binary cycle.
pub fn cycle_quadrics(n: usize) -> Result<Vec<Move>> {
    let space = StateSpace::binary(n);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let st = CiStatement::new(
                (i + 1..j).collect(),
                (j + 1..n).chain(0..i).collect(),
                vec![i, j],
            );
            out.extend(ci_quadratic_moves(&st, &space));
        }
    }
    Ok(dedup_moves(out))
}

/// One generic quartic with its parameterization.
struct Quartic {
    label: String,
    mv: Move,
}

fn cycle_quartic_family(n: usize) -> Vec<Quartic> {
    let space = StateSpace::binary(n);
    let mut out = Vec::new();
    for rot in 0..n {
        for k in 1..n - 1 {
            for l in k + 1..n {
                for a in sub_states(&space, &(0..k).collect::<Vec<_>>()) {
                    for b in sub_states(&space, &(k..l).collect::<Vec<_>>()) {
                        for c in sub_states(&space, &(l..n).collect::<Vec<_>>()) {
                            let (na, nb, nc) = (flip(&a), flip(&b), flip(&c));
                            let cell = |x: &[u32], y: &[u32], z: &[u32]| {
                                let word: Vec<u32> = x.iter().chain(y).chain(z).copied().collect();
                                let mut coords = vec![0; n];
                                for (p, &v) in word.iter().enumerate() {
                                    coords[(p + rot) % n] = v;
                                }
                                space.index_of(&coords).expect("binary word")
                            };
                            let plus = Table::from_indices([
                                cell(&a, &b, &c),
                                cell(&a, &nb, &nc),
                                cell(&na, &b, &nc),
                                cell(&na, &nb, &c),
                            ]);
                            let minus = Table::from_indices([
                                cell(&a, &b, &nc),
                                cell(&a, &nb, &c),
                                cell(&na, &b, &c),
                                cell(&na, &nb, &nc),
                            ]);
                            let label = format!(
                                "r={rot},k={k},l={l},A={},B={},C={}",
                                bits_string(&a),
                                bits_string(&b),
                                bits_string(&c)
                            );
                            out.push(Quartic {
                                label,
                                mv: Move { plus, minus },
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// The generic quartics, deduplicated as moves.
pub fn cycle_quartics(n: usize) -> Vec<Move> {
    dedup_moves(cycle_quartic_family(n).into_iter().map(|q| q.mv))
}

/// Quadrics and quartics connecting every fiber of the binary `n`-cycle.
pub fn cycle_markov_basis(n: usize) -> Result<Vec<Move>> {
    cycle_markov_basis_with(n, false)
}

/// As [`cycle_markov_basis`]; with `allow_triangle` the length 3 is accepted,
/// where no quadrics exist and the single quartic is the no-three-way
/// interaction move.
pub fn cycle_markov_basis_with(n: usize, allow_triangle: bool) -> Result<Vec<Move>> {
    if !(allow_triangle && n == 3) {
        check_cycle(n)?;
    }
    let quads = if n == 3 {
        Vec::new()
    } else {
        cycle_quadrics(n)?
    };
    Ok(dedup_moves(quads.into_iter().chain(cycle_quartics(n))))
}

/// One monomial prime per distinct set of variables avoided by a generic
/// quartic, plus the toric marker.
pub fn cycle_prime_witnesses(n: usize) -> Result<Vec<PrimeWitness>> {
    check_cycle(n)?;
    let space = StateSpace::binary(n);
    let cells = space.total_cells();
    let monomial = cycle_quartic_family(n).into_iter().map(|q| {
        let used: BTreeSet<usize> = q.mv.plus.support().chain(q.mv.minus.support()).collect();
        let vars = (0..cells).filter(|c| !used.contains(c)).collect();
        PrimeWitness::from_variables(format!("P_f[{}]", q.label), vars, cells, PrimeOrigin::Cycle)
    });
    Ok(dedup_witnesses(
        monomial.chain([PrimeWitness::toric(&space)]),
    ))
}

/// `K_{2,N-2}` with binary vertices 1, 2 and levels `d_3, ..., d_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2NShape {
    levels: Vec<u32>,
}

impl K2NShape {
    /// `rest` lists `d_3, ..., d_N`.
    pub fn new(rest: Vec<u32>) -> Result<Self> {
        if rest.len() < 2 {
            return Err(Error::InvalidGraph(format!(
                "K_2,N-2 needs N >= 4, got N = {}",
                rest.len() + 2
            )));
        }
        let mut levels = vec![2, 2];
        levels.extend(rest);
        StateSpace::new(levels.clone())?;
        Ok(K2NShape { levels })
    }

    pub fn binary(n_total: usize) -> Result<Self> {
        K2NShape::new(vec![2; n_total.saturating_sub(2)])
    }

    pub fn n_total(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn graph(&self) -> LabeledGraph {
        LabeledGraph::complete_bipartite(2, self.levels.clone()).expect("validated shape")
    }

    pub fn space(&self) -> StateSpace {
        StateSpace::new(self.levels.clone()).expect("validated shape")
    }
}

/// Nonempty proper subsets of `[d]`, as sorted 1-based lists in order of
/// their bitmask.
fn proper_subsets(d: u32) -> Vec<Vec<u32>> {
    (1..(1u32 << d) - 1)
        .map(|m| (0..d).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

fn set_string(s: &[u32]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Quadrics of the statement `1 ⊥ 2 | rest` and all flattening minors within
/// each `(i, j)` slice.
pub fn k2n_quadrics(shape: &K2NShape) -> Vec<Move> {
    let space = shape.space();
    let n = shape.n_total();
    let rest: Vec<usize> = (2..n).collect();
    let mut out = ci_quadratic_moves(&CiStatement::new(vec![0], vec![1], rest.clone()), &space);
    let m = rest.len();
    for mask in 1..(1u32 << m) - 1 {
        let s: Vec<usize> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| rest[i])
            .collect();
        let t: Vec<usize> = (0..m)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| rest[i])
            .collect();
        // Keep one orientation of each flattening.
        if s[0] > t[0] {
            continue;
        }
        for i in 1..=2 {
            for j in 1..=2 {
                let ks = sub_states(&space, &s);
                let ls = sub_states(&space, &t);
                let cell = |k: &[u32], l: &[u32]| {
                    let mut coords = vec![i, j];
                    coords.resize(n, 0);
                    for (&v, &x) in s.iter().zip(k) {
                        coords[v] = x;
                    }
                    for (&v, &x) in t.iter().zip(l) {
                        coords[v] = x;
                    }
                    space.index_of(&coords).expect("full state")
                };
                for a in 0..ks.len() {
                    for b in a + 1..ks.len() {
                        for c in 0..ls.len() {
                            for d in c + 1..ls.len() {
                                let plus = Table::from_indices([
                                    cell(&ks[a], &ls[c]),
                                    cell(&ks[b], &ls[d]),
                                ]);
                                let minus = Table::from_indices([
                                    cell(&ks[b], &ls[c]),
                                    cell(&ks[a], &ls[d]),
                                ]);
                                out.push(Move { plus, minus });
                            }
                        }
                    }
                }
            }
        }
    }
    dedup_moves(out)
}

/// The quartics `B_{a;k1,k2}` over every `a`, ordered `k1 != k2` and
/// completions `L`.
pub fn k2n_quartics(shape: &K2NShape) -> Vec<Move> {
    let space = shape.space();
    let n = shape.n_total();
    let mut out = Vec::new();
    for a in 2..n {
        let others: Vec<usize> = (2..n).filter(|&v| v != a).collect();
        let ls = sub_states(&space, &others);
        let cell = |i: u32, j: u32, k: u32, l: &[u32]| {
            let mut coords = vec![i, j];
            coords.resize(n, 0);
            coords[a] = k;
            for (&v, &x) in others.iter().zip(l) {
                coords[v] = x;
            }
            space.index_of(&coords).expect("full state")
        };
        let da = shape.levels[a];
        for k1 in 1..=da {
            for k2 in 1..=da {
                if k1 == k2 {
                    continue;
                }
                for l11 in &ls {
                    for l12 in &ls {
                        for l21 in &ls {
                            for l22 in &ls {
                                let plus = Table::from_indices([
                                    cell(1, 1, k1, l11),
                                    cell(1, 2, k2, l12),
                                    cell(2, 1, k2, l21),
                                    cell(2, 2, k1, l22),
                                ]);
                                let minus = Table::from_indices([
                                    cell(1, 1, k2, l11),
                                    cell(1, 2, k1, l12),
                                    cell(2, 1, k1, l21),
                                    cell(2, 2, k2, l22),
                                ]);
                                out.push(Move { plus, minus });
                            }
                        }
                    }
                }
            }
        }
    }
    dedup_moves(out)
}

pub fn k2n_markov_basis(shape: &K2NShape) -> Vec<Move> {
    dedup_moves(k2n_quadrics(shape).into_iter().chain(k2n_quartics(shape)))
}

/// Variables of `P_{a,C,b,D}`; `a`, `b` are 0-based vertex indices.
pub fn k2n_prime_variables(
    shape: &K2NShape,
    a: usize,
    c: &[u32],
    b: usize,
    d: &[u32],
) -> BTreeSet<usize> {
    let space = shape.space();
    (0..space.total_cells())
        .filter(|&cell| {
            let x = |v| space.coord(cell, v);
            match (x(0), x(1)) {
                (1, 1) => c.contains(&x(a)),
                (1, 2) => d.contains(&x(b)),
                (2, 1) => !d.contains(&x(b)),
                _ => !c.contains(&x(a)),
            }
        })
        .collect()
}

/// The primes `P_{a,C,b,D}` (with `a = b` when `N = 4`) plus the toric marker.
pub fn k2n_prime_witnesses(shape: &K2NShape) -> Vec<PrimeWitness> {
    let space = shape.space();
    let n = shape.n_total();
    let cells = space.total_cells();
    let mut out = Vec::new();
    for a in 2..n {
        for b in 2..n {
            if n == 4 && a != b {
                continue;
            }
            for c in proper_subsets(shape.levels[a]) {
                for d in proper_subsets(shape.levels[b]) {
                    let vars = k2n_prime_variables(shape, a, &c, b, &d);
                    let id = format!(
                        "P[{},{},{},{}]",
                        a + 1,
                        set_string(&c),
                        b + 1,
                        set_string(&d)
                    );
                    out.push(PrimeWitness::from_variables(
                        id,
                        vars,
                        cells,
                        PrimeOrigin::K2n,
                    ));
                }
            }
        }
    }
    out.push(PrimeWitness::toric(&space));
    dedup_witnesses(out)
}

/// The inequality on `K_{2,N-2}` margins attached to `(a, C, b, D)`, with 0-based
/// vertices `a != b`.
pub fn k2n_functional(shape: &K2NShape, a: usize, c: &[u32], b: usize, d: &[u32]) -> Functional {
    let am = margin_map(&shape.graph());
    let mut coeffs = vec![0i64; am.n_rows()];
    let row = |vs: [usize; 2], ys: [u32; 2]| am.row_for(&vs, &ys).expect("edge of K_2,N-2");
    for k in 1..=shape.levels[a] {
        if c.contains(&k) {
            coeffs[row([0, a], [1, k])] += 1;
        } else {
            coeffs[row([1, a], [2, k])] += 1;
        }
    }
    for &l in d {
        coeffs[row([1, b], [1, l])] += 1;
        coeffs[row([0, b], [1, l])] -= 1;
    }
    Functional::primitive(coeffs).expect("nonzero functional")
}

fn k2n_functionals(shape: &K2NShape, ordered: bool) -> Vec<Functional> {
    let n = shape.n_total();
    let mut out = Vec::new();
    for a in 2..n {
        for b in 2..n {
            if a == b || (!ordered && a > b) {
                continue;
            }
            for c in proper_subsets(shape.levels[a]) {
                for d in proper_subsets(shape.levels[b]) {
                    out.push(k2n_functional(shape, a, &c, b, &d));
                }
            }
        }
    }
    out
}

/// The inequalities for pairs `a < b`.
pub fn k2n_facet_inequalities(shape: &K2NShape) -> Vec<Functional> {
    k2n_functionals(shape, false)
}

/// The same inequalities over all ordered pairs `a != b`. The argument for
/// validity does not use the order, and the pairs `a > b` are needed to
/// cut out the witnesses `P_{a,C,b,D}` with `a > b`.
pub fn k2n_facet_inequalities_ordered(shape: &K2NShape) -> Vec<Functional> {
    k2n_functionals(shape, true)
}

/// Components of a sum of `d0` ideals in disjoint variables.
pub fn pyramid_prime_count(base_count: u64, d0: u32) -> Result<u64> {
    if base_count == 0 || d0 < 2 {
        return Err(Error::Unsupported(
            "pyramid count needs base >= 1 and d0 >= 2".into(),
        ));
    }
    base_count.checked_pow(d0).ok_or(Error::Overflow)
}

/// Witnesses for the cone over a graph with `base` witnesses (toric marker
/// included): one choice per value of the apex, which is the last vertex.
pub fn cone_prime_witnesses(
    base: &[PrimeWitness],
    base_space: &StateSpace,
    d0: u32,
) -> Result<Vec<PrimeWitness>> {
    let count = pyramid_prime_count(base.len() as u64, d0)?;
    if count > 1_000_000 {
        return Err(Error::TooLarge(format!("{count} cone witnesses")));
    }
    let n = base_space.total_cells();
    let lift = |cell: usize, s: usize| cell * d0 as usize + s;
    let mut out = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; d0 as usize];
    loop {
        let mut vars = BTreeSet::new();
        let mut parts = Vec::new();
        let mut all_toric = true;
        for (s, &i) in choice.iter().enumerate() {
            let w = &base[i];
            vars.extend(w.variables.iter().map(|&c| lift(c, s)));
            parts.push(w.id.clone());
            all_toric &= w.origin == PrimeOrigin::Toric;
        }
        let origin = if all_toric {
            PrimeOrigin::Toric
        } else {
            PrimeOrigin::Cone
        };
        let id = if all_toric {
            "toric".to_string()
        } else {
            format!("cone[{}]", parts.join("|"))
        };
        out.push(PrimeWitness::from_variables(
            id,
            vars,
            n * d0 as usize,
            origin,
        ));
        let mut p = 0;
        loop {
            if p == choice.len() {
                return Ok(dedup_witnesses(out));
            }
            choice[p] += 1;
            if choice[p] < base.len() {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::verify_markov_basis;
    use crate::graph::{glg_moves, is_margin_neutral, margins};

    #[test]
    fn c4_quadrics_match_global_markov() {
        let g = LabeledGraph::binary_cycle(4);
        let mut a = cycle_quadrics(4).unwrap();
        let mut b = glg_moves(&g).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn cycle_quadrics_match_global_markov_up_to_six() {
        for n in 5..=6 {
            let g = LabeledGraph::binary_cycle(n);
            let a: BTreeSet<Move> = cycle_quadrics(n).unwrap().into_iter().collect();
            let b: BTreeSet<Move> = glg_moves(&g).unwrap().into_iter().collect();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn pinned_c4_quartic() {
        let s = StateSpace::binary(4);
        let plus = s
            .table_of(&[&[1, 1, 1, 1], &[1, 2, 2, 2], &[2, 1, 2, 2], &[2, 2, 1, 1]])
            .unwrap();
        let minus = s
            .table_of(&[&[1, 1, 2, 2], &[1, 2, 1, 1], &[2, 1, 1, 1], &[2, 2, 2, 2]])
            .unwrap();
        let want = Move { plus, minus }.canonical();
        assert!(cycle_quartics(4).contains(&want));
    }

    #[test]
    fn cycle_moves_are_margin_neutral() {
        for n in 4..=6 {
            let am = margin_map(&LabeledGraph::binary_cycle(n));
            assert!(cycle_markov_basis(n)
                .unwrap()
                .iter()
                .all(|m| is_margin_neutral(&am, m)));
        }
    }

    #[test]
    fn triangle_needs_the_flag() {
        assert!(matches!(cycle_markov_basis(3), Err(Error::Unsupported(_))));
        let b = cycle_markov_basis_with(3, true).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].degree(), 4);
    }

    #[test]
    fn cycle_prime_counts() {
        assert_eq!(cycle_prime_witnesses(4).unwrap().len(), 9);
        assert_eq!(cycle_prime_witnesses(5).unwrap().len(), 41);
    }

    #[test]
    fn cycle_witnesses_are_quartic_supports() {
        for w in cycle_prime_witnesses(4).unwrap() {
            if w.origin == PrimeOrigin::Toric {
                continue;
            }
            assert_eq!(w.witness_table.support_len(), 8);
            assert_eq!(w.witness_table.degree(), 8);
            assert_eq!(w.variables.len(), 8);
        }
    }

    #[test]
    fn cycle_symmetric_touch() {
        for n in 4..=5 {
            let quads = cycle_quadrics(n).unwrap();
            for w in cycle_prime_witnesses(n).unwrap() {
                for q in &quads {
                    let p = q.plus.support().any(|c| w.variables.contains(&c));
                    let m = q.minus.support().any(|c| w.variables.contains(&c));
                    assert_eq!(p, m, "{} {:?}", w.id, q);
                }
            }
        }
    }

    #[test]
    fn cycle_primes_are_irredundant() {
        let quartics = cycle_quartics(5);
        for w in cycle_prime_witnesses(5).unwrap() {
            if w.origin == PrimeOrigin::Toric {
                continue;
            }
            assert!(quartics.iter().any(|q| !q
                .plus
                .support()
                .chain(q.minus.support())
                .any(|c| w.variables.contains(&c))));
        }
    }

    #[test]
    fn c4_basis_passes_to_degree_four() {
        let am = margin_map(&LabeledGraph::binary_cycle(4));
        let v = verify_markov_basis(&cycle_markov_basis(4).unwrap(), &am, 4).unwrap();
        assert!(v.passed);
    }

    #[test]
    fn k2n_shapes() {
        assert!(K2NShape::new(vec![2]).is_err());
        assert!(K2NShape::new(vec![2, 1]).is_err());
        assert_eq!(K2NShape::binary(5).unwrap().levels(), &[2, 2, 2, 2, 2]);
    }

    #[test]
    fn k23_quadrics_match_global_markov() {
        let shape = K2NShape::binary(5).unwrap();
        let a: BTreeSet<Move> = k2n_quadrics(&shape).into_iter().collect();
        let b: BTreeSet<Move> = glg_moves(&shape.graph()).unwrap().into_iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn k2n_moves_are_margin_neutral() {
        for rest in [vec![2, 2], vec![2, 2, 2], vec![2, 4], vec![3, 2]] {
            let shape = K2NShape::new(rest).unwrap();
            let am = margin_map(&shape.graph());
            assert!(k2n_markov_basis(&shape)
                .iter()
                .all(|m| is_margin_neutral(&am, m)));
        }
    }

    #[test]
    fn k22_basis_passes() {
        let shape = K2NShape::binary(4).unwrap();
        let am = margin_map(&shape.graph());
        assert!(
            verify_markov_basis(&k2n_markov_basis(&shape), &am, 4)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn k2n_prime_counts() {
        assert_eq!(k2n_prime_witnesses(&K2NShape::binary(4).unwrap()).len(), 9);
        assert_eq!(k2n_prime_witnesses(&K2NShape::binary(5).unwrap()).len(), 37);
        let g48 = K2NShape::new(vec![2, 4]).unwrap();
        let ws = k2n_prime_witnesses(&g48);
        assert_eq!(ws.len(), 201);
        let small = ws.iter().filter(|w| w.id.starts_with("P[3,")).count();
        assert_eq!(small, 4);
    }

    #[test]
    fn k2n_symmetric_touch() {
        let shape = K2NShape::binary(5).unwrap();
        let quads = k2n_quadrics(&shape);
        for w in k2n_prime_witnesses(&shape) {
            for q in &quads {
                let p = q.plus.support().any(|c| w.variables.contains(&c));
                let m = q.minus.support().any(|c| w.variables.contains(&c));
                assert_eq!(p, m);
            }
        }
    }

    #[test]
    fn k2n_functionals_are_valid_on_units() {
        for n in 4..=6 {
            let shape = K2NShape::binary(n).unwrap();
            let am = margin_map(&shape.graph());
            for h in k2n_facet_inequalities_ordered(&shape) {
                assert!((0..am.n_cols()).all(|c| h.eval_column(&am, c) >= 0));
            }
        }
        assert_eq!(
            k2n_facet_inequalities(&K2NShape::binary(5).unwrap()).len(),
            12
        );
        assert_eq!(
            k2n_facet_inequalities_ordered(&K2NShape::binary(5).unwrap()).len(),
            24
        );
    }

    #[test]
    fn k2n_functional_vanishes_on_matching_witness() {
        let shape = K2NShape::binary(5).unwrap();
        let am = margin_map(&shape.graph());
        for (a, b) in [(2, 3), (3, 2), (2, 4), (4, 3)] {
            for c in proper_subsets(2) {
                for d in proper_subsets(2) {
                    let vars = k2n_prime_variables(&shape, a, &c, b, &d);
                    let w = PrimeWitness::from_variables(
                        String::new(),
                        vars,
                        am.n_cols(),
                        PrimeOrigin::K2n,
                    );
                    let y = margins(&am, &w.witness_table).unwrap();
                    let dc: Vec<u32> = (1..=2).filter(|x| !d.contains(x)).collect();
                    assert_eq!(k2n_functional(&shape, a, &c, b, &dc).eval(&y), 0);
                }
            }
        }
    }

    #[test]
    fn quartic_times_corner_pair_is_connected_by_quadrics() {
        use crate::fiber::are_connected;
        let shape = K2NShape::binary(4).unwrap();
        let space = shape.space();
        let quads = k2n_quadrics(&shape);
        for q in k2n_quartics(&shape).iter().take(24) {
            for k in sub_states(&space, &[2, 3]) {
                let e11 = space.unit(&[1, 1, k[0], k[1]]).unwrap();
                let e22 = space.unit(&[2, 2, k[0], k[1]]).unwrap();
                let m = e11.add(&e22);
                let r = are_connected(&q.plus.add(&m), &q.minus.add(&m), &quads, 100_000).unwrap();
                assert!(r.is_connected());
            }
        }
    }

    #[test]
    fn pyramid_counts() {
        assert_eq!(pyramid_prime_count(9, 2).unwrap(), 81);
        assert_eq!(pyramid_prime_count(1, 5).unwrap(), 1);
        assert_eq!(pyramid_prime_count(41, 2).unwrap(), 1681);
        let base = cycle_prime_witnesses(4).unwrap();
        let ws = cone_prime_witnesses(&base, &StateSpace::binary(4), 2).unwrap();
        assert_eq!(ws.len(), 81);
        assert_eq!(
            ws.iter().filter(|w| w.origin == PrimeOrigin::Toric).count(),
            1
        );
    }

    #[test]
    fn dedup_is_idempotent_and_order_free() {
        let ws = cycle_prime_witnesses(4).unwrap();
        let mut rev = ws.clone();
        rev.reverse();
        let key = |v: &[PrimeWitness]| v.iter().map(|w| w.variables.clone()).collect::<Vec<_>>();
        assert_eq!(key(&dedup_witnesses(rev)), key(&ws));
        assert_eq!(dedup_witnesses(ws.clone()), ws);
    }
}
