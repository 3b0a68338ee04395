use fiberwalk::cone::cone_facets;
use fiberwalk::fiber::{are_connected, connected_component, replay, Connectivity};
use fiberwalk::graph::{glg_moves, margin_map, margins, LabeledGraph};
use fiberwalk::tensor::{StateSpace, Table};
use proptest::prelude::*;

fn c4_table() -> impl Strategy<Value = Table> {
    proptest::collection::vec(0usize..16, 1..=4).prop_map(Table::from_indices)
}

/// Cell of the state obtained by rotating the vertex labels one step.
fn rotate(space: &StateSpace, cell: usize) -> usize {
    let s = space.state(cell);
    let c = s.coords();
    let r: Vec<u32> = (0..c.len()).map(|i| c[(i + 1) % c.len()]).collect();
    space.index_of(&r).unwrap()
}

/// Swaps the two levels of vertex `v`.
fn flip(space: &StateSpace, cell: usize, v: usize) -> usize {
    let mut c = space.state(cell).coords().to_vec();
    c[v] = 3 - c[v];
    space.index_of(&c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn component_is_an_equivalence_class(t in c4_table(), pick in 0usize..1000) {
        let g = LabeledGraph::binary_cycle(4);
        let moves = glg_moves(&g).unwrap();
        let a = connected_component(&t, &moves, 100_000);
        let members = a.members.clone().unwrap();
        let m = &members[pick % members.len()];
        let b = connected_component(m, &moves, 100_000);
        prop_assert_eq!(a.members, b.members);
    }

    #[test]
    fn members_share_margins(t in c4_table()) {
        let g = LabeledGraph::binary_cycle(4);
        let am = margin_map(&g);
        let y = margins(&am, &t).unwrap();
        let c = connected_component(&t, &glg_moves(&g).unwrap(), 100_000);
        for m in c.members.unwrap() {
            prop_assert_eq!(&margins(&am, &m).unwrap(), &y);
        }
    }

    #[test]
    fn component_size_is_invariant_under_symmetry(t in c4_table(), v in 0usize..4) {
        let g = LabeledGraph::binary_cycle(4);
        let space = g.space().clone();
        let moves = glg_moves(&g).unwrap();
        let size = connected_component(&t, &moves, 100_000).size;
        let r = t.map_cells(|c| rotate(&space, c));
        let f = t.map_cells(|c| flip(&space, c, v));
        prop_assert_eq!(connected_component(&r, &moves, 100_000).size, size);
        prop_assert_eq!(connected_component(&f, &moves, 100_000).size, size);
    }

    #[test]
    fn paths_replay_to_the_target(t in c4_table(), pick in 0usize..1000) {
        let g = LabeledGraph::binary_cycle(4);
        let moves = glg_moves(&g).unwrap();
        let members = connected_component(&t, &moves, 100_000).members.unwrap();
        let target = &members[pick % members.len()];
        match are_connected(&t, target, &moves, 100_000).unwrap() {
            Connectivity::Connected(path) => prop_assert_eq!(&replay(&t, &path).unwrap(), target),
            other => prop_assert!(false, "expected a path, got {:?}", other),
        }
    }

    #[test]
    fn facets_are_nonnegative_on_tables(t in proptest::collection::vec(0usize..32, 0..10)) {
        let g = LabeledGraph::complete_bipartite(2, vec![2; 5]).unwrap();
        let am = margin_map(&g);
        let f = cone_facets(&am).unwrap();
        let y = margins(&am, &Table::from_indices(t)).unwrap();
        for h in &f.functionals {
            prop_assert!(h.eval(&y) >= 0);
        }
    }
}
