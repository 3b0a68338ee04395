//! Named models and the witness families attached to them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{
    cone_prime_witnesses, cycle_markov_basis, cycle_prime_witnesses, k2n_markov_basis,
    k2n_prime_witnesses, K2NShape, PrimeWitness,
};
use crate::graph::{cone_graph, LabeledGraph};
use crate::k33::{g154_graph, k33_graph, k33_witness};
use crate::latin::{latin_table, mols};
use crate::tensor::{Move, StateSpace, Table};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    C4,
    C5,
    C6,
    K22,
    K23,
    /// `K_{2,N-2}` with the given `d_3, ..., d_N`.
    K2n(Vec<u32>),
    SquarePyramid,
    G48,
    K33,
    G154,
    SethC43,
    ESimple,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "c4" => Preset::C4,
            "c5" => Preset::C5,
            "c6" => Preset::C6,
            "k22" => Preset::K22,
            "k23" => Preset::K23,
            "square-pyramid" => Preset::SquarePyramid,
            "g48" => Preset::G48,
            "k33" => Preset::K33,
            "g154" => Preset::G154,
            "seth-c4-3" => Preset::SethC43,
            "e-simple" => Preset::ESimple,
            _ => {
                // k2n(N) or k2n(N,d3,...,dN)
                let inner = s
                    .strip_prefix("k2n(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Usage(format!("unknown preset {s:?}")))?;
                let nums: Vec<u32> = inner
                    .split(',')
                    .map(|x| x.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Usage(format!("bad k2n parameters in {s:?}")))?;
                let n = nums[0] as usize;
                if n < 4 {
                    return Err(Error::Usage(format!("k2n needs N >= 4 in {s:?}")));
                }
                let rest = if nums.len() == 1 {
                    vec![2; n.saturating_sub(2)]
                } else if nums.len() == n - 1 {
                    nums[1..].to_vec()
                } else {
                    return Err(Error::Usage(format!(
                        "k2n({n}, ...) needs {} levels",
                        n.saturating_sub(2)
                    )));
                };
                K2NShape::new(rest.clone())?;
                Preset::K2n(rest)
            }
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::C4 => "c4",
            Preset::C5 => "c5",
            Preset::C6 => "c6",
            Preset::K22 => "k22",
            Preset::K23 => "k23",
            Preset::K2n(rest) => {
                let ds: Vec<String> = rest.iter().map(|d| d.to_string()).collect();
                return write!(f, "k2n({},{})", rest.len() + 2, ds.join(","));
            }
            Preset::SquarePyramid => "square-pyramid",
            Preset::G48 => "g48",
            Preset::K33 => "k33",
            Preset::G154 => "g154",
            Preset::SethC43 => "seth-c4-3",
            Preset::ESimple => "e-simple",
        };
        f.write_str(s)
    }
}

pub const PRESET_NAMES: &[&str] = &[
    "c4",
    "c5",
    "c6",
    "k22",
    "k23",
    "k2n(N,d3,...)",
    "square-pyramid",
    "g48",
    "k33",
    "g154",
    "seth-c4-3",
    "e-simple",
];

impl Preset {
    /// The graph behind the preset. `e-simple` is a walk on `N^2` with no
    /// graph and is reported as unsupported here.
    pub fn graph(&self) -> Result<LabeledGraph> {
        Ok(match self {
            Preset::C4 => LabeledGraph::binary_cycle(4),
            Preset::C5 => LabeledGraph::binary_cycle(5),
            Preset::C6 => LabeledGraph::binary_cycle(6),
            Preset::SquarePyramid => cone_graph(&LabeledGraph::binary_cycle(4), 2)?,
            Preset::K33 => k33_graph(),
            Preset::G154 => g154_graph(),
            Preset::SethC43 => LabeledGraph::cycle(vec![3; 4])?,
            Preset::ESimple => {
                return Err(Error::Unsupported(
                    "e-simple is a lattice walk without a graph".into(),
                ))
            }
            _ => self.k2n_shape().expect("bipartite preset").graph(),
        })
    }

    pub fn k2n_shape(&self) -> Option<K2NShape> {
        match self {
            Preset::K22 => K2NShape::binary(4).ok(),
            Preset::K23 => K2NShape::binary(5).ok(),
            Preset::G48 => K2NShape::new(vec![2, 4]).ok(),
            Preset::K2n(rest) => K2NShape::new(rest.clone()).ok(),
            _ => None,
        }
    }

    /// A pinned starting table, where the preset has one.
    pub fn default_table(&self) -> Result<Option<Table>> {
        Ok(match self {
            Preset::SethC43 => Some(latin_table(&self.graph()?, &mols(3)?)?),
            Preset::K33 => {
                let k = k33_witness();
                Some(k.u_plus.add(&k.w))
            }
            Preset::ESimple => Some(e_simple_point(3, 1)),
            _ => None,
        })
    }
}

/// Which closed-form family a graph belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle(usize),
    K2n(K2NShape),
    /// Cone with apex levels `d0` over the binary cycle of the given length.
    CycleCone(usize, u32),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cycle(_) => "cycle",
            Family::K2n(_) => "k2n",
            Family::CycleCone(..) => "cone",
        }
    }

    /// Recognizes binary cycles, `K_{2,N-2}` with binary first part, and
    /// cones over binary cycles (apex last), all with the standard labeling.
    pub fn detect(g: &LabeledGraph) -> Option<Family> {
        let n = g.n_vertices();
        if g.space().is_binary() && n >= 4 && *g == LabeledGraph::binary_cycle(n) {
            return Some(Family::Cycle(n));
        }
        if n >= 4 && g.levels()[..2] == [2, 2] {
            if let Ok(shape) = K2NShape::new(g.levels()[2..].to_vec()) {
                if shape.graph() == *g {
                    return Some(Family::K2n(shape));
                }
            }
        }
        if n >= 5 && g.levels()[..n - 1].iter().all(|&d| d == 2) {
            let d0 = g.levels()[n - 1];
            if let Ok(c) = cone_graph(&LabeledGraph::binary_cycle(n - 1), d0) {
                if c == *g {
                    return Some(Family::CycleCone(n - 1, d0));
                }
            }
        }
        None
    }

    pub fn witnesses(&self) -> Result<Vec<PrimeWitness>> {
        match self {
            Family::Cycle(n) => cycle_prime_witnesses(*n),
            Family::K2n(shape) => Ok(k2n_prime_witnesses(shape)),
            Family::CycleCone(n, d0) => {
                cone_prime_witnesses(&cycle_prime_witnesses(*n)?, &StateSpace::binary(*n), *d0)
            }
        }
    }

    /// The family's Markov basis, where one is implemented.
    pub fn markov_basis(&self) -> Result<Vec<Move>> {
        match self {
            Family::Cycle(n) => cycle_markov_basis(*n),
            Family::K2n(shape) => Ok(k2n_markov_basis(shape)),
            Family::CycleCone(..) => {
                Err(Error::Unsupported("no closed-form basis for cones".into()))
            }
        }
    }
}

/// `e-simple` lives on two cells; a point `(a, b)` of `N^2` is a table.
pub fn e_simple_space() -> StateSpace {
    StateSpace::new(vec![2]).expect("two cells")
}

pub fn e_simple_point(a: u32, b: u32) -> Table {
    Table::from_counts([(0, a), (1, b)])
}

/// The moves `(2, -2)` and `(3, -3)`.
pub fn e_simple_moves() -> Vec<Move> {
    [2, 3]
        .into_iter()
        .map(|k| {
            Move::new(Table::from_counts([(0, k)]), Table::from_counts([(1, k)])).expect("disjoint")
        })
        .collect()
}

/// Closed form for connectivity under [`e_simple_moves`].
pub fn e_simple_rule(a: (u32, u32), b: (u32, u32)) -> bool {
    a == b || (a.0 + a.1 == b.0 + b.1 && a.0.max(a.1).min(b.0.max(b.1)) >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for name in [
            "c4",
            "c5",
            "c6",
            "k22",
            "k23",
            "square-pyramid",
            "g48",
            "k33",
            "g154",
            "seth-c4-3",
            "e-simple",
        ] {
            let p: Preset = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        assert_eq!(
            "k2n(5)".parse::<Preset>().unwrap(),
            Preset::K2n(vec![2, 2, 2])
        );
        assert_eq!(
            "k2n(4,2,4)".parse::<Preset>().unwrap(),
            Preset::K2n(vec![2, 4])
        );
        assert!(matches!("k2n(4,2)".parse::<Preset>(), Err(Error::Usage(_))));
        assert!(matches!("c7".parse::<Preset>(), Err(Error::Usage(_))));
    }

    #[test]
    fn presets_resolve() {
        for name in [
            "c4",
            "c5",
            "c6",
            "k22",
            "k23",
            "square-pyramid",
            "g48",
            "k33",
            "g154",
            "seth-c4-3",
        ] {
            let p: Preset = name.parse().unwrap();
            assert!(p.graph().is_ok(), "{name}");
        }
        assert_eq!(Preset::G48.graph().unwrap().levels(), &[2, 2, 2, 4]);
        assert_eq!(Preset::SquarePyramid.graph().unwrap().n_edges(), 8);
    }

    #[test]
    fn family_detection() {
        assert_eq!(
            Family::detect(&Preset::C5.graph().unwrap()),
            Some(Family::Cycle(5))
        );
        assert_eq!(
            Family::detect(&Preset::SquarePyramid.graph().unwrap()),
            Some(Family::CycleCone(4, 2))
        );
        assert!(matches!(
            Family::detect(&Preset::G48.graph().unwrap()),
            Some(Family::K2n(_))
        ));
        assert_eq!(
            Family::detect(&Preset::C4.graph().unwrap()),
            Some(Family::Cycle(4))
        );
        assert_eq!(Family::detect(&Preset::K33.graph().unwrap()), None);
    }

    #[test]
    fn e_simple_examples() {
        assert!(e_simple_rule((3, 1), (1, 3)));
        assert!(!e_simple_rule((1, 0), (0, 1)));
        assert!(e_simple_rule((1, 0), (1, 0)));
    }
}
