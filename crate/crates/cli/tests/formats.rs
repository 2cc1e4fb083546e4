//! Every format reads back what it writes.

use clawfree_cli::format::{parse, serialize, Format};
use clawfree_core::Graph;
use proptest::prelude::*;

fn graphs() -> impl Strategy<Value = Graph> {
    (0usize..14).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut it = bits.into_iter();
            Graph::from_fn(n, |_, _| it.next().unwrap_or(false))
        })
    })
}

fn named(g: Graph) -> Graph {
    let names = (0..g.n()).map(|v| format!("v_{v}")).collect();
    g.with_names(names).unwrap()
}

proptest! {
    #[test]
    fn unnamed_graphs_round_trip(g in graphs()) {
        for f in [Format::EdgeList, Format::Dimacs, Format::Json] {
            let text = serialize(&g, f).unwrap();
            prop_assert_eq!(&parse(&text, f).unwrap(), &g, "{:?}:\n{}", f, text);
        }
    }

    #[test]
    fn named_graphs_round_trip(g in graphs().prop_filter("names need a vertex", |g| g.n() > 0).prop_map(named)) {
        for f in [Format::EdgeList, Format::Json] {
            let text = serialize(&g, f).unwrap();
            prop_assert_eq!(&parse(&text, f).unwrap(), &g, "{:?}:\n{}", f, text);
        }
    }
}

#[test]
fn dimacs_accepts_col_problem_type_and_duplicate_edges() {
    let g = parse("p col 3 4\ne 1 2\ne 2 1\ne 2 3\ne 3 2\n", Format::Dimacs).unwrap();
    assert_eq!(g.edge_count(), 2);
}

#[test]
fn empty_inputs() {
    assert_eq!(parse("", Format::EdgeList).unwrap().n(), 0);
    assert_eq!(parse("# only a comment\n", Format::EdgeList).unwrap().n(), 0);
    assert_eq!(parse("p edge 0 0\n", Format::Dimacs).unwrap().n(), 0);
}
