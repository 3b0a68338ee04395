//! Exact geometry of the marginal cone spanned by the columns of `A_G`.
//!
//! Facets are the extreme rays of the dual cone, computed by the double
//! description method over `i128` with checked arithmetic. The cone is first
//! projected onto a row basis so the dual is pointed.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{PrimeOrigin, PrimeWitness};
use crate::graph::{margins, MarginMap, MarginVector};
use crate::tensor::{Move, Table};

/// An integer linear form on margin vectors, primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Functional {
    pub coeffs: Vec<i64>,
}

impl Functional {
    /// Divides out the content; `None` for the zero vector.
    pub fn primitive(coeffs: Vec<i64>) -> Option<Self> {
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return None;
        }
        Some(Functional {
            coeffs: coeffs.into_iter().map(|c| c / g).collect(),
        })
    }

    pub fn eval(&self, y: &MarginVector) -> i128 {
        self.coeffs
            .iter()
            .zip(&y.0)
            .map(|(&c, &v)| c as i128 * v as i128)
            .sum()
    }

    pub fn eval_column(&self, am: &MarginMap, cell: usize) -> i64 {
        am.rows_of(cell)
            .iter()
            .map(|&r| self.coeffs[r as usize])
            .sum()
    }

    /// Values on every column, divided by their content. Two functionals that
    /// agree on the column span up to a positive factor have equal profiles.
    pub fn column_profile(&self, am: &MarginMap) -> Vec<i64> {
        let vals: Vec<i64> = (0..am.n_cols()).map(|c| self.eval_column(am, c)).collect();
        let g = vals.iter().fold(0i64, |g, &v| g.gcd(&v));
        if g == 0 {
            vals
        } else {
            vals.into_iter().map(|v| v / g).collect()
        }
    }

    /// Human-readable `+2 (1,3; 1,1) -1 (2,4; 2,1)` form.
    pub fn display(&self, am: &MarginMap) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| format!("{c:+} {}", am.row_label(r)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacets {
    pub rank: usize,
    pub functionals: Vec<Functional>,
    /// The cone is a single ray (or the origin); no facets are listed.
    pub is_ray: bool,
}

/// Upper bound on intermediate rays in the double description loop.
pub const RAY_BUDGET: usize = 200_000;

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow)
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    let mut s: i128 = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = checked(s.checked_add(checked(x.checked_mul(y))?))?;
        }
    }
    Ok(s)
}

/// Incremental echelon form used to pick independent vectors.
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of what is stored; reports whether it was.
    fn insert(&mut self, v: &[i128]) -> Result<bool> {
        let mut v = v.to_vec();
        for (p, b) in &self.rows {
            let c = v[*p];
            if c != 0 {
                let bp = b[*p];
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = checked(
                        checked(x.checked_mul(bp))?.checked_sub(checked(c.checked_mul(y))?),
                    )?;
                }
                normalize(&mut v);
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, v));
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

fn independent(vectors: &[Vec<i128>]) -> Result<Vec<usize>> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if e.insert(v)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Integer rank of a set of vectors.
pub fn rank_of(vectors: &[Vec<i64>]) -> Result<usize> {
    let vs: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    Ok(independent(&vs)?.len())
}

/// Rays `g` with `m_i . g = [i == j]` up to positive scaling, for square
/// nonsingular `m`.
fn inverse_columns(m: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let r = m.len();
    let mut aug: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut a = row.clone();
            a.extend((0..r).map(|j| (i == j) as i128));
            a
        })
        .collect();
    for col in 0..r {
        let piv = (col..r)
            .find(|&i| aug[i][col] != 0)
            .ok_or_else(|| Error::Unsupported("singular start basis".into()))?;
        aug.swap(col, piv);
        for i in 0..r {
            if i != col && aug[i][col] != 0 {
                let (c, p) = (aug[i][col], aug[col][col]);
                let pivot_row = aug[col].clone();
                for (x, &y) in aug[i].iter_mut().zip(&pivot_row) {
                    *x = checked(
                        checked(x.checked_mul(p))?.checked_sub(checked(c.checked_mul(y))?),
                    )?;
                }
                normalize(&mut aug[i]);
            }
        }
    }
    // Row i now reads d_i * g_i = aug[i][r + j].
    let diag: Vec<i128> = (0..r).map(|i| aug[i][i]).collect();
    let l = diag.iter().fold(1i128, |l, d| l.lcm(&d.abs()));
    let mut rays = Vec::with_capacity(r);
    for j in 0..r {
        let mut g = Vec::with_capacity(r);
        for i in 0..r {
            g.push(checked(aug[i][r + j].checked_mul(l / diag[i]))?);
        }
        normalize(&mut g);
        rays.push(g);
    }
    Ok(rays)
}

const MAX_COLUMNS: usize = 256;

/// Bitset over at most [`MAX_COLUMNS`] columns.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Mask([u64; 4]);

impl Mask {
    fn with(mut self, i: usize) -> Self {
        self.0[i / 64] |= 1 << (i % 64);
        self
    }

    fn without(mut self, i: usize) -> Self {
        self.0[i / 64] &= !(1 << (i % 64));
        self
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, o: &Mask) -> Mask {
        Mask(std::array::from_fn(|k| self.0[k] & o.0[k]))
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains(&self, o: &Mask) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    g: Vec<i128>,
    zeros: Mask,
}

/// Facets of the cone generated by `columns` (all of equal length).
pub fn facets_of_columns(columns: &[Vec<i64>]) -> Result<ConeFacets> {
    if columns.len() > MAX_COLUMNS {
        return Err(Error::TooLarge(format!(
            "{} columns (limit {MAX_COLUMNS})",
            columns.len()
        )));
    }
    let n_rows = columns.first().map_or(0, |c| c.len());
    let rows: Vec<Vec<i128>> = (0..n_rows)
        .map(|i| columns.iter().map(|c| c[i] as i128).collect())
        .collect();
    let basis_rows = independent(&rows)?;
    let r = basis_rows.len();
    if r <= 1 {
        return Ok(ConeFacets {
            rank: r,
            functionals: Vec::new(),
            is_ray: true,
        });
    }
    let w: Vec<Vec<i128>> = columns
        .iter()
        .map(|c| basis_rows.iter().map(|&i| c[i] as i128).collect())
        .collect();
    let start = independent(&w)?;
    debug_assert_eq!(start.len(), r);
    let m: Vec<Vec<i128>> = start.iter().map(|&i| w[i].clone()).collect();
    let mut processed = Mask::default();
    for &i in &start {
        processed = processed.with(i);
    }
    let mut rays: Vec<Ray> = inverse_columns(&m)?
        .into_iter()
        .enumerate()
        .map(|(j, g)| Ray {
            g,
            zeros: processed.without(start[j]),
        })
        .collect();

    #[allow(clippy::needless_range_loop)]
    for k in 0..w.len() {
        if processed.has(k) {
            continue;
        }
        let vals: Vec<i128> = rays
            .iter()
            .map(|ray| dot(&ray.g, &w[k]))
            .collect::<Result<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (ray, &v) in rays.iter_mut().zip(&vals) {
                if v == 0 {
                    ray.zeros = ray.zeros.with(k);
                }
            }
            processed = processed.with(k);
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() + 2 < r {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, ray)| t == p || t == n || !ray.zeros.contains(&common));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (vals[p], -vals[n]);
                let mut g = Vec::with_capacity(r);
                for (&a, &b) in rays[p].g.iter().zip(&rays[n].g) {
                    g.push(checked(
                        checked(a.checked_mul(vn))?.checked_add(checked(b.checked_mul(vp))?),
                    )?);
                }
                normalize(&mut g);
                fresh.push(Ray {
                    g,
                    zeros: common.with(k),
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (ray, &v) in rays.into_iter().zip(&vals) {
            if v > 0 {
                next.push(ray);
            } else if v == 0 {
                next.push(Ray {
                    zeros: ray.zeros.with(k),
                    ..ray
                });
            }
        }
        next.extend(fresh);
        if next.len() > RAY_BUDGET {
            return Err(Error::TooLarge(format!(
                "more than {RAY_BUDGET} intermediate rays"
            )));
        }
        rays = next;
        processed = processed.with(k);
    }

    let mut out = BTreeSet::new();
    for ray in rays {
        let mut coeffs = vec![0i64; n_rows];
        for (&row, &x) in basis_rows.iter().zip(&ray.g) {
            coeffs[row] = i64::try_from(x).map_err(|_| Error::Overflow)?;
        }
        out.insert(Functional::primitive(coeffs).ok_or(Error::Overflow)?);
    }
    Ok(ConeFacets {
        rank: r,
        functionals: out.into_iter().collect(),
        is_ray: false,
    })
}

/// Facet normals of the marginal cone of `am`.
pub fn cone_facets(am: &MarginMap) -> Result<ConeFacets> {
    let cols: Vec<Vec<i64>> = (0..am.n_cols()).map(|c| am.column(c)).collect();
    facets_of_columns(&cols)
}

/// Checks that `h` is nonnegative on every column and tight on a set of
/// columns of rank `rank - 1`.
pub fn is_valid_facet(columns: &[Vec<i64>], rank: usize, h: &Functional) -> Result<bool> {
    let mut tight = Vec::new();
    for c in columns {
        let v: i128 = h
            .coeffs
            .iter()
            .zip(c)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        if v < 0 {
            return Ok(false);
        }
        if v == 0 {
            tight.push(c.clone());
        }
    }
    Ok(rank >= 1 && rank_of(&tight)? == rank - 1)
}

pub fn is_strictly_positive(y: &MarginVector) -> bool {
    y.0.iter().all(|&v| v > 0)
}

/// True iff every facet functional is strictly positive on `y`.
pub fn is_relative_interior(_am: &MarginMap, y: &MarginVector, facets: &[Functional]) -> bool {
    facets.iter().all(|h| h.eval(y) > 0)
}

/// `scale * y` equals the margins of a table with full support, so `y` is a
/// strictly positive combination of every column and lies in the relative
/// interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorCertificate {
    pub scale: u64,
    pub table: Table,
}

/// Looks for `k` with `k * y = margins(all-ones table)`.
pub fn positive_combination_certificate(
    am: &MarginMap,
    y: &MarginVector,
) -> Option<InteriorCertificate> {
    let ones = am.space().all_ones();
    let target = margins(am, &ones).ok()?;
    let (i, &y0) = y.0.iter().enumerate().find(|(_, &v)| v != 0)?;
    if target.0[i] % y0 != 0 {
        return None;
    }
    let k = target.0[i] / y0;
    let cert = InteriorCertificate {
        scale: k,
        table: ones,
    };
    check_certificate(am, y, &cert).then_some(cert)
}

pub fn check_certificate(am: &MarginMap, y: &MarginVector, cert: &InteriorCertificate) -> bool {
    if cert.table.support_len() != am.n_cols() || cert.scale == 0 {
        return false;
    }
    match margins(am, &cert.table) {
        Ok(m) => {
            m.0.iter()
                .zip(&y.0)
                .all(|(&a, &b)| b.checked_mul(cert.scale) == Some(a))
        }
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginMode {
    PositiveMargins,
    InteriorPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEvaluation {
    pub id: String,
    pub zero_margins: usize,
    /// Facets vanishing on the witness margins (interior mode only).
    pub tight_facets: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub failing_witness: Option<PrimeWitness>,
    /// Sorted by witness id.
    pub margin_profile: Vec<WitnessEvaluation>,
}

/// The margin-property test over prime witnesses. A witness is bad when its
/// margins are strictly positive (positive mode) or avoid every facet
/// (interior mode). Toric markers are skipped.
pub fn check_margin_property(
    witnesses: &[PrimeWitness],
    am: &MarginMap,
    mode: MarginMode,
    facets: Option<&[Functional]>,
) -> Result<PropertyVerdict> {
    let facets = match mode {
        MarginMode::InteriorPoint => Some(facets.ok_or(Error::MissingFacets)?),
        MarginMode::PositiveMargins => None,
    };
    let mut profile = Vec::new();
    let mut failing: Option<&PrimeWitness> = None;
    for w in witnesses.iter().filter(|w| w.origin != PrimeOrigin::Toric) {
        let y = margins(am, &w.witness_table)?;
        let zero_margins = y.0.iter().filter(|&&v| v == 0).count();
        let tight = facets.map(|fs| fs.iter().filter(|h| h.eval(&y) == 0).count());
        let bad = match tight {
            Some(t) => t == 0,
            None => zero_margins == 0,
        };
        if bad && failing.is_none_or(|f| w.witness_table < f.witness_table) {
            failing = Some(w);
        }
        profile.push(WitnessEvaluation {
            id: w.id.clone(),
            zero_margins,
            tight_facets: tight,
        });
    }
    profile.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(PropertyVerdict {
        holds: failing.is_none(),
        failing_witness: failing.cloned(),
        margin_profile: profile,
    })
}

/// `(f⁺ + c·u_P, f⁻ + c·u_P)`. The two tables have equal margins whenever `f`
/// is margin-neutral.
pub fn build_disconnection_witness(w: &PrimeWitness, f: &Move, c: u32) -> Result<(Table, Table)> {
    if w.origin == PrimeOrigin::Toric {
        return Err(Error::InvalidWitnessMove(
            "the toric component has no witness monomial".into(),
        ));
    }
    let touched = f
        .plus
        .support()
        .chain(f.minus.support())
        .find(|x| w.variables.contains(x));
    if let Some(cell) = touched {
        return Err(Error::InvalidWitnessMove(format!(
            "move uses variable {cell} of {}",
            w.id
        )));
    }
    let shift = w.witness_table.scale(c);
    Ok((f.plus.add(&shift), f.minus.add(&shift)))
}

/// First move of degree above two, in canonical order, that avoids every
/// variable of the prime. Quadrics are skipped because they would connect the
/// pair directly.
pub fn find_witness_move(w: &PrimeWitness, basis: &[Move]) -> Option<Move> {
    let mut candidates: Vec<Move> = basis
        .iter()
        .filter(|m| m.degree() > 2)
        .map(Move::canonical)
        .filter(|m| {
            !m.plus
                .support()
                .chain(m.minus.support())
                .any(|x| w.variables.contains(&x))
        })
        .collect();
    candidates.sort();
    candidates.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{margin_map, LabeledGraph};

    fn identity(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect()
    }

    #[test]
    fn orthant() {
        let f = facets_of_columns(&identity(3)).unwrap();
        assert_eq!(f.rank, 3);
        let mut got: Vec<Vec<i64>> = f.functionals.iter().map(|h| h.coeffs.clone()).collect();
        got.sort();
        let mut want = identity(3);
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn single_column_is_a_ray() {
        let f = facets_of_columns(&[vec![1, 2, 0]]).unwrap();
        assert!(f.is_ray);
        assert!(f.functionals.is_empty());
        assert_eq!(f.rank, 1);
    }

    #[test]
    fn square_cone_in_the_plane_z_eq_1() {
        // Cone over a unit square lifted to height one: four facets.
        let cols = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]];
        let f = facets_of_columns(&cols).unwrap();
        assert_eq!(f.rank, 3);
        assert_eq!(f.functionals.len(), 4);
        for h in &f.functionals {
            assert!(is_valid_facet(&cols, 3, h).unwrap());
        }
    }

    #[test]
    fn lower_dimensional_cone() {
        // Three columns spanning a plane inside R^4; the middle one is redundant.
        let cols = vec![vec![1, 0, 1, 0], vec![1, 1, 1, 1], vec![0, 1, 0, 1]];
        let f = facets_of_columns(&cols).unwrap();
        assert_eq!(f.rank, 2);
        assert_eq!(f.functionals.len(), 2);
        for h in &f.functionals {
            assert!(is_valid_facet(&cols, 2, h).unwrap());
        }
    }

    #[test]
    fn binary_c4_facets_are_valid() {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let f = cone_facets(&am).unwrap();
        let cols: Vec<Vec<i64>> = (0..am.n_cols()).map(|c| am.column(c)).collect();
        assert_eq!(f.rank, rank_of(&cols).unwrap());
        assert!(!f.functionals.is_empty());
        for h in &f.functionals {
            assert!(is_valid_facet(&cols, f.rank, h).unwrap());
        }
        let ones = margins(&am, &g.space().all_ones()).unwrap();
        assert!(is_relative_interior(&am, &ones, &f.functionals));
        let unit = margins(&am, &Table::unit(0)).unwrap();
        assert!(!is_relative_interior(&am, &unit, &f.functionals));
    }

    #[test]
    fn positivity() {
        assert!(is_strictly_positive(&MarginVector(vec![1, 1, 3])));
        assert!(!is_strictly_positive(&MarginVector(vec![1, 0, 3])));
    }

    #[test]
    fn uniform_certificate() {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let ones = margins(&am, &g.space().all_ones()).unwrap();
        let y = MarginVector(ones.0.iter().map(|v| v / 4).collect());
        let cert = positive_combination_certificate(&am, &y).unwrap();
        assert_eq!(cert.scale, 4);
        let unit = margins(&am, &Table::unit(3)).unwrap();
        assert_eq!(positive_combination_certificate(&am, &unit), None);
    }
}
