//! Acceptance suite, library half. One test per criterion; each
//! prints a PASS line on success (visible with --nocapture).
//!
//! Criterion 2 (CLI completeness) and criterion 7 (byte-identical
//! census output) exercise the binary and live in the CLI crate's
//! acceptance suite.

use disticolor::colouring::Colour;
use disticolor::engine::{rooted_claim_colouring, EngineConfig, ProcedureState};
use disticolor::families::{
    circulant, complete, complete_bipartite, cycle, hypercube, petersen, random_regular,
};
use disticolor::graph::{Edge, Graph};
use disticolor::oracle::{
    self, connected_classes_with_max_edges, distinguishing_index, find_distinguishing_colouring,
    reference_search, regular_corpus, OracleError,
};
use disticolor::symmetry::{automorphisms, colour_preserving};

const BUDGET: u64 = 100_000_000;
const CAP: usize = 1_000_000;

fn exception_profile(g: &Graph) -> Option<&'static str> {
    disticolor::engine::exception_name(g)
}

/// Criterion 1: on all connected regular graphs with 3 <= n <= 8 the
/// set with no distinguishing 2-colouring, decided by exhaustive
/// search, is exactly {K3, K4, K5, C4, C5, K3,3}.
#[test]
fn criterion_1_exception_census() {
    let corpus: Vec<Graph> = regular_corpus(8).into_iter().filter(|g| g.n() >= 3).collect();
    assert_eq!(corpus.len(), 31, "connected regular graphs with 3 <= n <= 8");

    let mut failures: Vec<String> = Vec::new();
    for g in &corpus {
        let has_two_colouring = find_distinguishing_colouring(g, 2, BUDGET)
            .expect("within budget")
            .is_some();
        let expected_exception = exception_profile(g).is_some();
        if has_two_colouring == expected_exception {
            failures.push(format!("{g:?}"));
        }
    }
    assert!(failures.is_empty(), "mismatched graphs: {failures:?}");

    let exceptions: Vec<&'static str> = corpus
        .iter()
        .filter_map(exception_profile)
        .collect();
    let mut sorted = exceptions.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec!["C4", "C5", "K3", "K3,3", "K4", "K5"]);
    println!("criterion 1 PASS: 31-graph census, exceptions exactly {{K3, K4, K5, C4, C5, K3,3}}");
}

/// Criterion 3: exact distinguishing-index values.
#[test]
fn criterion_3_exact_values() {
    let threes: Vec<(&str, Graph)> = vec![
        ("K3", complete(3)),
        ("K4", complete(4)),
        ("K5", complete(5)),
        ("C4", cycle(4)),
        ("C5", cycle(5)),
        ("K3,3", complete_bipartite(3)),
    ];
    for (name, g) in &threes {
        assert_eq!(
            distinguishing_index(g, 6, BUDGET).unwrap(),
            3,
            "D'({name}) must be 3"
        );
    }
    let twos: Vec<(&str, Graph)> = vec![
        ("K6", complete(6)),
        ("C6", cycle(6)),
        ("C7", cycle(7)),
        ("Petersen", petersen()),
        ("K4,4", complete_bipartite(4)),
        ("Q3", hypercube(3)),
        ("circulant(9,{1,2})", circulant(9, &[1, 2])),
    ];
    for (name, g) in &twos {
        assert_eq!(
            distinguishing_index(g, 6, BUDGET).unwrap(),
            2,
            "D'({name}) must be 2"
        );
    }
    assert_eq!(
        distinguishing_index(&complete(2), 6, BUDGET),
        Err(OracleError::UndefinedForK2)
    );
    println!("criterion 3 PASS: D' = 3 on the six exceptions, 2 on the seven witnesses, K2 errors");
}

fn k55_minus_perfect_matching() -> Graph {
    let mut edges = Vec::new();
    for u in 0..5 {
        for v in 5..10 {
            if v != u + 5 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(10, &edges).unwrap()
}

/// Criterion 4: on >= 20 graphs with Δ >= 4, the rooted claim
/// colouring satisfies (i)-(iii), with the procedure assumptions
/// holding at every step.
#[test]
fn criterion_4_claim_assertions() {
    let mut graphs: Vec<(String, Graph)> = vec![
        ("Q4".into(), hypercube(4)),
        ("K5,5 - PM".into(), k55_minus_perfect_matching()),
    ];
    for (n, offsets) in [
        (9, vec![1, 2]),
        (10, vec![1, 2]),
        (11, vec![1, 2]),
        (12, vec![1, 2]),
        (13, vec![1, 2]),
        (11, vec![1, 3]),
        (12, vec![1, 5]),
        (13, vec![1, 5]),
        (10, vec![1, 4]),
        (12, vec![2, 3]),
        (11, vec![2, 5]),
        (13, vec![2, 6]),
        (9, vec![1, 4]),
    ] {
        graphs.push((format!("circulant({n},{offsets:?})"), circulant(n, &offsets)));
    }
    for (n, offsets) in [(12, vec![1, 2, 6]), (10, vec![1, 2, 5]), (14, vec![1, 2, 7])] {
        graphs.push((format!("circulant({n},{offsets:?})"), circulant(n, &offsets)));
    }
    for (n, d, seed) in [(10, 4, 7), (12, 4, 3), (14, 4, 1), (10, 5, 11), (12, 5, 5)] {
        graphs.push((
            format!("random_regular({n},{d},seed={seed})"),
            random_regular(n, d, seed).unwrap(),
        ));
    }
    assert!(graphs.len() >= 20, "need at least 20 graphs, have {}", graphs.len());

    let config = EngineConfig::default();
    for (name, g) in &graphs {
        let delta = g.regular_degree().expect("regular");
        assert!(delta >= 4, "{name}");

        // Stepwise run: the assumptions must hold before and after
        // every orbit step (process_orbit re-checks internally too).
        let mut state = ProcedureState::new(g, 0, &config).unwrap_or_else(|e| {
            panic!("{name}: cannot start the procedure: {e}");
        });
        state
            .check_assumptions()
            .unwrap_or_else(|e| panic!("{name}: initial assumptions: {e}"));
        while !state.is_complete() {
            disticolor::engine::process_orbit(&mut state)
                .unwrap_or_else(|e| panic!("{name}: step failed: {e}"));
            state
                .check_assumptions()
                .unwrap_or_else(|e| panic!("{name}: assumptions after step: {e}"));
        }

        // Full run for the claim postconditions.
        let (c, meta) =
            rooted_claim_colouring(g, 0, &config).unwrap_or_else(|e| panic!("{name}: {e}"));

        // (i) via the symmetry module.
        let rooted = automorphisms(g, CAP).unwrap().stabilizer(0);
        assert!(
            colour_preserving(&rooted, &c).is_trivial(),
            "{name}: (i) fails"
        );

        // (ii) recomputed from the colouring, not trusted from meta.
        let all_red: Vec<usize> = g
            .vertices()
            .filter(|&v| {
                g.neighbours(v)
                    .all(|w| c.colour_of(Edge::new(v, w)) == Colour::Red)
            })
            .collect();
        assert_eq!(all_red, meta.all_red, "{name}");
        assert!(all_red.contains(&0), "{name}: root not all red");
        assert!(all_red.len() <= 2, "{name}: too many all-red vertices");
        if all_red.len() == 2 {
            let x = all_red.iter().copied().find(|&v| v != 0).unwrap();
            assert!(g.has_edge(0, x), "{name}: (ii) second vertex not a neighbour");

            // (iii) every k in 1..=Δ is a red degree of some neighbour.
            let red_degrees: Vec<usize> = g
                .neighbours(0)
                .map(|w| {
                    g.neighbours(w)
                        .filter(|&u| c.colour_of(Edge::new(w, u)) == Colour::Red)
                        .count()
                })
                .collect();
            for k in 1..=delta {
                assert!(
                    red_degrees.contains(&k),
                    "{name}: (iii) missing red degree {k} in {red_degrees:?}"
                );
            }
        }
    }
    println!(
        "criterion 4 PASS: claim (i)-(iii) and stepwise assumptions on {} graphs with Δ >= 4",
        graphs.len()
    );
}

/// Criterion 5: the pruned search equals the naive unpruned search on
/// every connected graph with at most 8 edges (all orders that can
/// carry one, 2 <= n <= 9).
#[test]
fn criterion_5_pruning_soundness() {
    let mut checked = 0usize;
    for n in 2..=9 {
        for g in connected_classes_with_max_edges(n, 8) {
            let pruned = find_distinguishing_colouring(&g, 2, BUDGET).expect("within budget");
            let naive = reference_search(&g, 2, BUDGET).expect("within budget");
            assert_eq!(pruned, naive, "disagreement on {g:?}");
            checked += 1;
        }
    }
    assert!(checked > 300, "expected a substantial corpus, got {checked}");
    println!("criterion 5 PASS: pruned == naive on {checked} connected graphs with <= 8 edges");
}

/// Criterion 6: group orders and the orbit-stabilizer identity.
#[test]
fn criterion_6_group_sanity() {
    for n in 3..=9 {
        let grp = automorphisms(&cycle(n), CAP).unwrap();
        assert_eq!(grp.order(), 2 * n, "Aut(C{n})");
    }
    let mut factorial = 1usize;
    for n in 1..=6 {
        factorial *= n;
        let grp = automorphisms(&complete(n), CAP).unwrap();
        assert_eq!(grp.order(), factorial, "Aut(K{n})");
    }
    assert_eq!(automorphisms(&petersen(), CAP).unwrap().order(), 120);
    for n in 1..=4usize {
        let fact: usize = (1..=n).product();
        let grp = automorphisms(&complete_bipartite(n), CAP).unwrap();
        assert_eq!(grp.order(), 2 * fact * fact, "Aut(K{n},{n})");
    }
    // Orbit-stabilizer on every corpus group.
    for g in regular_corpus(8) {
        let grp = automorphisms(&g, CAP).unwrap();
        for v in g.vertices() {
            assert_eq!(
                grp.order(),
                grp.orbit_of(v).len() * grp.stabilizer(v).order(),
                "orbit-stabilizer on {g:?}"
            );
        }
    }
    println!("criterion 6 PASS: group orders and orbit-stabilizer identity");
}

/// Oracle/engine agreement across the census corpus: the engine
/// succeeds exactly where the exhaustive search finds a colouring.
#[test]
fn oracle_engine_agreement() {
    for g in regular_corpus(8) {
        if g.n() < 3 {
            continue;
        }
        let oracle_some = find_distinguishing_colouring(&g, 2, BUDGET)
            .expect("within budget")
            .is_some();
        match disticolor::engine::distinguishing_two_colouring(&g) {
            Ok(_) => assert!(oracle_some, "engine succeeded where oracle fails: {g:?}"),
            Err(disticolor::engine::EngineError::Exception(_)) => {
                assert!(!oracle_some, "exception claimed but a colouring exists: {g:?}")
            }
            Err(e) => panic!("engine error on {g:?}: {e}"),
        }
    }
    println!("agreement PASS: engine success == oracle 2-colourability on the corpus");
}

/// The asymmetric spanning search agrees with the distinguishing
/// machinery on the documented thresholds.
#[test]
fn asymmetric_search_thresholds() {
    assert_eq!(oracle::asymmetric_spanning_search(1), Some(vec![]));
    for n in 2..=5 {
        assert_eq!(oracle::asymmetric_spanning_search(n), None, "n={n}");
    }
    let edges = oracle::asymmetric_spanning_search(6).unwrap();
    assert_eq!(edges.len(), 6);
    println!("asymmetric-search PASS: none below 6 vertices, 6 edges at 6");
}
