use proptest::prelude::*;
use solitaire_core::triangle::*;
use solitaire_core::*;

fn line(n: i64) -> Pattern {
    Pattern::from_xy((0..n).map(|x| (x, 0)))
}

fn comps(p: &Pattern) -> Vec<(i64, i64, i64, i64)> {
    identify_orbit(p).unwrap().components.iter().map(|c| (c.v[0], c.v[1], c.n, c.k)).collect()
}

#[test]
fn fill_decompositions() {
    let d = fill_decomposition(&line(4)).unwrap();
    assert_eq!(d.components, vec![FillComponent { v: [0, 0], k: 4 }]);
    let d = fill_decomposition(&Pattern::from_xy([(0, 0), (10, 10)])).unwrap();
    assert_eq!(d.components.iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 1]);
    let d = fill_decomposition(&Pattern::from_xy([(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
    assert_eq!(d.components.len(), 1);
    assert!(d.components[0].k <= 4);
}

#[test]
fn identify_examples() {
    for n in 1..8 {
        assert_eq!(comps(&line(n)), vec![(0, 0, n, 0)]);
    }
    assert_eq!(comps(&Pattern::from_xy([(0, 0), (1, 0), (0, 1)])), vec![(0, 0, 2, 1)]);
    assert_eq!(comps(&Pattern::from_xy([(3, 3), (9, 0)])), vec![(3, 3, 1, 0), (9, 0, 1, 0)]);
    assert_eq!(p_nk(3, 2), vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]);
    assert_eq!(triangle_excess(&Pattern::from_xy([(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap(), 1);
}

#[test]
fn line_orbit_examples() {
    for n in 1..8i64 {
        let diag = Pattern::from_xy((0..n).map(|i| (i, n - 1 - i)));
        assert!(line_orbit_member(&diag).unwrap());
        let vert = Pattern::from_xy((0..n).map(|i| (0, i)));
        assert!(line_orbit_member(&vert).unwrap());
    }
    assert!(!line_orbit_member(&Pattern::from_xy([(0, 0), (1, 0), (0, 1)])).unwrap());
    for n in 1..6 {
        for s in stacks(n, StackKind::Vertical) {
            assert!(line_orbit_member(&s).unwrap(), "{s:?}");
        }
    }
}

#[test]
fn stacks_and_column_condition() {
    let mut all = std::collections::HashSet::new();
    for kind in [StackKind::Horizontal, StackKind::Vertical, StackKind::Diagonal] {
        let s = stacks(3, kind);
        assert_eq!(s.len(), 6);
        all.extend(s);
    }
    assert_eq!(all.len(), 15);
    assert!(a_n_condition(&line(4), 4).unwrap());
    // Three points in the two right-most columns of T_3.
    let bad = Pattern::from_xy([(1, 0), (2, 0), (1, 1)]);
    assert!(!a_n_condition(&bad, 3).unwrap());
    assert!(!line_orbit_member(&bad).unwrap());
    assert!(a_n_condition(&Pattern::from_xy([(5, 5)]), 3).is_err());
}

#[test]
fn canonical_input_needs_no_moves() {
    for n in 1..6 {
        for k in 0..=n * (n - 1) / 2 {
            let p = Pattern::from_xy(p_nk(n, k));
            assert!(canonical_path(&p).unwrap().is_empty(), "n={n} k={k}");
        }
    }
}

#[test]
fn vertical_edge_to_the_line() {
    let sh = Shape::triangle();
    for n in 2..=8i64 {
        let p = Pattern::from_xy((0..n).map(|y| (0, y)));
        let t = canonical_path(&p).unwrap();
        assert_eq!(replay(&sh, &p, &t).unwrap(), line(n));
        assert!(t.len() as i64 <= 40 * n * n, "n={n}: {}", t.len());
    }
}

fn small() -> impl Strategy<Value = Pattern> {
    prop::collection::vec((0i64..7, 0i64..7), 1..10).prop_map(Pattern::from_xy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normal_form_is_orbit_invariant(p in small()) {
        let sh = Shape::triangle();
        let nf = identify_orbit(&p).unwrap();
        for m in legal_moves(&GroupCtx::z2(), &sh, &p).unwrap() {
            prop_assert_eq!(identify_orbit(&apply_move(&sh, &p, &m).unwrap()).unwrap(), nf.clone());
        }
        prop_assert_eq!(identify_orbit(&nf.pattern()).unwrap(), nf.clone());
        prop_assert_eq!(nf.pattern().len(), p.len());
    }

    #[test]
    fn decomposition_matches_the_generic_closure(p in small()) {
        let (phi, _) = filling_closure(&GroupCtx::z2(), &Shape::triangle(), &p).unwrap();
        let d = fill_decomposition(&p).unwrap();
        let union = Pattern::from_xy(d.components.iter().flat_map(|c| t_n(c.k).into_iter().map(move |(x, y)| (x + c.v[0], y + c.v[1]))));
        prop_assert_eq!(union, phi.clone());
        if phi.len() <= 15 {
            let e = triangle_excess(&p).unwrap();
            prop_assert_eq!(e as usize, excess(&GroupCtx::z2(), &Shape::triangle(), &p).unwrap());
        }
    }
}
