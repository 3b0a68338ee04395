//! Mutually orthogonal Latin squares from finite fields, and the isolated
//! tables they produce on two-connected triangle-free graphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cone::{
    cone_facets, is_relative_interior, is_strictly_positive, positive_combination_certificate,
    rank_of,
};
use crate::error::{Error, Result};
use crate::fiber::connected_component;
use crate::graph::{glg_moves, margin_map, margins, LabeledGraph};
use crate::tensor::Table;

/// Arithmetic in GF(q) for the prime powers up to 9. Elements are encoded as
/// base-`p` digit strings of polynomial coefficients.
#[derive(Clone, Debug)]
pub struct Field {
    q: u32,
    add: Vec<Vec<u32>>,
    mul: Vec<Vec<u32>>,
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        // (p, k, low coefficients of the monic irreducible modulus)
        let (p, k, modulus): (u32, u32, &[u32]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[]),
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[1, 0]),
            _ => {
                return Err(Error::Unsupported(format!(
                    "no field of order {q} (supported: 2,3,4,5,7,8,9)"
                )))
            }
        };
        let digits = |x: u32| (0..k).map(|i| x / p.pow(i) % p).collect::<Vec<_>>();
        let encode = |ds: &[u32]| {
            ds.iter()
                .enumerate()
                .map(|(i, &d)| d * p.pow(i as u32))
                .sum::<u32>()
        };
        let add = (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| {
                        let s: Vec<u32> = digits(a)
                            .iter()
                            .zip(digits(b))
                            .map(|(x, y)| (x + y) % p)
                            .collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        let mul = (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        let mut prod = vec![0u32; (2 * k - 1) as usize];
                        for i in 0..k as usize {
                            for j in 0..k as usize {
                                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                            }
                        }
                        // x^k = -(modulus), reduce from the top.
                        for deg in (k as usize..prod.len()).rev() {
                            let c = prod[deg];
                            if c != 0 {
                                prod[deg] = 0;
                                for (i, &m) in modulus.iter().enumerate() {
                                    let t = deg - k as usize + i;
                                    prod[t] = (prod[t] + (p - c) * m) % p;
                                }
                            }
                        }
                        encode(&prod[..k as usize])
                    })
                    .collect()
            })
            .collect();
        Ok(Field { q, add, mul })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize][b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize][b as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinSquare {
    order: u32,
    cells: Vec<Vec<u32>>,
}

impl LatinSquare {
    /// Entries are 1-based.
    pub fn new(cells: Vec<Vec<u32>>) -> Result<Self> {
        let d = cells.len();
        let full: BTreeSet<u32> = (1..=d as u32).collect();
        if d == 0 || cells.iter().any(|r| r.len() != d) {
            return Err(Error::Latin("not a square array".into()));
        }
        for i in 0..d {
            let row: BTreeSet<u32> = cells[i].iter().copied().collect();
            let col: BTreeSet<u32> = cells.iter().map(|r| r[i]).collect();
            if row != full || col != full {
                return Err(Error::Latin(format!(
                    "row or column {} is not a permutation",
                    i + 1
                )));
            }
        }
        Ok(LatinSquare {
            order: d as u32,
            cells,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: u32, j: u32) -> u32 {
        self.cells[i as usize - 1][j as usize - 1]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.cells
    }

    /// Renames symbols by `perm` (a permutation of `1..=d`, 1-based images).
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        LatinSquare::new(
            self.cells
                .iter()
                .map(|r| r.iter().map(|&x| perm[x as usize - 1]).collect())
                .collect(),
        )
    }
}

/// The `q - 1` squares `L^m(i, j) = m i + j` over GF(q), `m` running over
/// the nonzero elements in encoding order.
pub fn mols(q: u32) -> Result<Vec<LatinSquare>> {
    let f = Field::new(q)?;
    (1..q)
        .map(|m| {
            LatinSquare::new(
                (0..q)
                    .map(|i| (0..q).map(|j| f.add(f.mul(m, i), j) + 1).collect())
                    .collect(),
            )
        })
        .collect()
}

pub fn are_orthogonal(l1: &LatinSquare, l2: &LatinSquare) -> Result<bool> {
    if l1.order != l2.order {
        return Err(Error::Latin(format!(
            "orders {} and {} differ",
            l1.order, l2.order
        )));
    }
    let d = l1.order;
    let pairs: BTreeSet<(u32, u32)> = (1..=d)
        .flat_map(|i| (1..=d).map(move |j| (i, j)))
        .map(|(i, j)| (l1.get(i, j), l2.get(i, j)))
        .collect();
    Ok(pairs.len() == (d * d) as usize)
}

/// Indicator of the states `(i, j, L1(i,j), ..., L_{N-2}(i,j))`.
pub fn latin_table(g: &LabeledGraph, squares: &[LatinSquare]) -> Result<Table> {
    let n = g.n_vertices();
    let d = squares
        .first()
        .map(|s| s.order)
        .ok_or_else(|| Error::Latin("no squares given".into()))?;
    if squares.len() != n - 2 {
        return Err(Error::Latin(format!(
            "{n} vertices need {} squares, got {}",
            n - 2,
            squares.len()
        )));
    }
    if g.levels().iter().any(|&l| l != d) {
        return Err(Error::Latin(format!("all levels must equal the order {d}")));
    }
    for (a, l1) in squares.iter().enumerate() {
        for l2 in &squares[a + 1..] {
            if !are_orthogonal(l1, l2)? {
                return Err(Error::Latin("squares are not mutually orthogonal".into()));
            }
        }
    }
    let mut cells = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            let mut coords = vec![i, j];
            coords.extend(squares.iter().map(|s| s.get(i, j)));
            cells.push(g.space().index_of(&coords)?);
        }
    }
    Ok(Table::from_indices(cells))
}

/// Interior checks use exact facets up to this cone rank and the uniform
/// positive-combination certificate beyond it.
pub const INTERIOR_FACET_RANK: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorEvidence {
    pub holds: bool,
    /// `"facets"` or `"positive-combination"`.
    pub method: String,
    pub rank: usize,
    pub facets: Option<usize>,
    /// `k` with `k * y` equal to the margins of the all-ones table.
    pub scale: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisconnectionReport {
    /// Failed preconditions; when nonempty nothing else is computed.
    pub problems: Vec<String>,
    pub component_size: Option<usize>,
    pub strictly_positive: Option<bool>,
    pub interior: Option<InteriorEvidence>,
    /// A different table with the same margins, from permuting the symbols of
    /// one vertex.
    pub second_table: Option<Table>,
}

impl DisconnectionReport {
    /// Isolated, interior and with a second fiber element.
    pub fn disconnected(&self) -> bool {
        self.problems.is_empty()
            && self.component_size == Some(1)
            && self.interior.as_ref().is_some_and(|i| i.holds)
            && self.second_table.is_some()
    }
}

fn interior_evidence(g: &LabeledGraph, t: &Table) -> Result<InteriorEvidence> {
    let am = margin_map(g);
    let y = margins(&am, t)?;
    let cols: Vec<Vec<i64>> = (0..am.n_cols()).map(|c| am.column(c)).collect();
    let rank = rank_of(&cols)?;
    if rank <= INTERIOR_FACET_RANK {
        let f = cone_facets(&am)?;
        return Ok(InteriorEvidence {
            holds: is_relative_interior(&am, &y, &f.functionals),
            method: "facets".into(),
            rank,
            facets: Some(f.functionals.len()),
            scale: None,
        });
    }
    let cert = positive_combination_certificate(&am, &y);
    Ok(InteriorEvidence {
        holds: cert.is_some(),
        method: "positive-combination".into(),
        rank,
        facets: None,
        scale: cert.map(|c| c.scale),
    })
}

pub fn verify_disconnection(g: &LabeledGraph, t: &Table) -> Result<DisconnectionReport> {
    let mut problems = Vec::new();
    if !g.is_two_connected() {
        problems.push("graph is not two-connected".to_string());
    }
    if !g.is_triangle_free() {
        problems.push("graph contains a triangle".to_string());
    }
    if !problems.is_empty() {
        return Ok(DisconnectionReport {
            problems,
            component_size: None,
            strictly_positive: None,
            interior: None,
            second_table: None,
        });
    }
    let space = g.space();
    let am = margin_map(g);
    let moves = glg_moves(g)?;
    let comp = connected_component(t, &moves, 1_000);
    let y = margins(&am, t)?;
    let mut second = None;
    'search: for v in 0..g.n_vertices() {
        let d = space.levels()[v];
        for a in 1..=d {
            for b in a + 1..=d {
                let image = t.map_cells(|c| {
                    let mut coords = space.state(c).0;
                    if coords[v] == a {
                        coords[v] = b;
                    } else if coords[v] == b {
                        coords[v] = a;
                    }
                    space.index_of(&coords).expect("same space")
                });
                if image != *t && margins(&am, &image)? == y {
                    second = Some(image);
                    break 'search;
                }
            }
        }
    }
    Ok(DisconnectionReport {
        problems,
        component_size: Some(comp.size),
        strictly_positive: Some(is_strictly_positive(&y)),
        interior: Some(interior_evidence(g, t)?),
        second_table: second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f4 = Field::new(4).unwrap();
        for a in 1..4 {
            assert!((1..4).any(|b| f4.mul(a, b) == 1), "{a} has no inverse");
        }
        let f9 = Field::new(9).unwrap();
        // x * x = -1 = 2 in GF(9) built from x^2 + 1.
        assert_eq!(f9.mul(3, 3), 2);
        assert!(Field::new(6).is_err());
        assert!(Field::new(11).is_err());
    }

    #[test]
    fn mols_are_latin_and_orthogonal() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let sq = mols(q).unwrap();
            assert_eq!(sq.len(), q as usize - 1);
            for a in 0..sq.len() {
                for b in a + 1..sq.len() {
                    assert!(are_orthogonal(&sq[a], &sq[b]).unwrap(), "q = {q}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_edge_cases() {
        let sq = mols(3).unwrap();
        assert!(!are_orthogonal(&sq[0], &sq[0]).unwrap());
        let two = mols(2).unwrap();
        assert_eq!(two.len(), 1);
        let swapped = two[0].relabel(&[2, 1]).unwrap();
        assert!(!are_orthogonal(&two[0], &swapped).unwrap());
        assert!(are_orthogonal(&sq[0], &two[0]).is_err());
    }

    #[test]
    fn seth_table_from_gf3() {
        let g = LabeledGraph::cycle(vec![3; 4]).unwrap();
        let t = latin_table(&g, &mols(3).unwrap()).unwrap();
        let s = g.space();
        let want = s
            .table_of(&[
                &[1, 1, 1, 1],
                &[1, 2, 2, 2],
                &[1, 3, 3, 3],
                &[2, 1, 2, 3],
                &[2, 2, 3, 1],
                &[2, 3, 1, 2],
                &[3, 1, 3, 2],
                &[3, 2, 1, 3],
                &[3, 3, 2, 1],
            ])
            .unwrap();
        assert_eq!(t, want);
    }

    #[test]
    fn guards() {
        let c4 = LabeledGraph::cycle(vec![2; 4]).unwrap();
        assert!(latin_table(&c4, &mols(2).unwrap()).is_err());
        let tri = LabeledGraph::complete(vec![3; 3]).unwrap();
        let rep = verify_disconnection(&tri, &Table::unit(0)).unwrap();
        assert!(!rep.problems.is_empty());
        assert!(!rep.disconnected());
    }

    #[test]
    fn c5_order_four_margins() {
        let g = LabeledGraph::cycle(vec![4; 5]).unwrap();
        let t = latin_table(&g, &mols(4).unwrap()[..3]).unwrap();
        assert_eq!(t.degree(), 16);
        let s = g.space();
        for a in 0..5 {
            for b in a + 1..5 {
                let pairs: BTreeSet<(u32, u32)> = t
                    .support()
                    .map(|c| (s.coord(c, a), s.coord(c, b)))
                    .collect();
                assert_eq!(pairs.len(), 16);
            }
        }
    }

    #[test]
    fn seth_is_isolated() {
        let g = LabeledGraph::cycle(vec![3; 4]).unwrap();
        let t = latin_table(&g, &mols(3).unwrap()).unwrap();
        let rep = verify_disconnection(&g, &t).unwrap();
        assert_eq!(rep.component_size, Some(1));
        assert_eq!(rep.strictly_positive, Some(true));
        let int = rep.interior.as_ref().unwrap();
        assert_eq!(int.method, "facets");
        assert!(int.holds);
        assert!(rep.disconnected());
    }
}
