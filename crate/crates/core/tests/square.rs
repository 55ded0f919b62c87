use std::collections::HashSet;

use proptest::prelude::*;
use solitaire_core::orbit::{orbit_bfs, OrbitLimits};
use solitaire_core::square::*;
use solitaire_core::*;

fn cross(a: i64, b: i64, at: (i64, i64)) -> Pattern {
    Pattern::from_xy((0..a).map(|x| (x, at.1)).chain((0..b).map(|y| (at.0, y))))
}

fn rects(p: &Pattern) -> Vec<(i64, i64, i64, i64)> {
    rect_decomposition(p).unwrap().components.iter().map(|r| (r.v[0], r.v[1], r.w, r.h)).collect()
}

#[test]
fn rectangle_decompositions() {
    assert_eq!(rects(&cross(3, 2, (0, 0))), vec![(0, 0, 3, 2)]);
    assert_eq!(rects(&Pattern::from_xy([(4, 4)])), vec![(4, 4, 1, 1)]);
    // Diagonal neighbours do not fill anything under the square.
    let diag = Pattern::from_xy([(0, 0), (1, 1)]);
    let (phi, _) = filling_closure(&GroupCtx::z2(), &Shape::square(), &diag).unwrap();
    assert_eq!(phi, diag);
    let cover: usize = rects(&diag).iter().map(|r| (r.2 * r.3) as usize).sum();
    assert!(cover >= phi.len());
}

#[test]
fn identify_examples() {
    let l = Pattern::from_xy(l_abk(5, 4, 0));
    let nf = square_identify_orbit(&l).unwrap();
    assert_eq!(nf.components, vec![LComponent { v: [0, 0], a: 5, b: 4, k: 0 }]);
    assert_eq!(nf.pattern(), l);
    let block = Pattern::from_xy([(0, 0), (1, 0), (0, 1), (1, 1)]);
    assert_eq!(square_identify_orbit(&block).unwrap().components, vec![LComponent { v: [0, 0], a: 2, b: 2, k: 1 }]);
    assert!(cross_orbit_member(&cross(4, 3, (2, 1))).unwrap());
    assert!(!cross_orbit_member(&block).unwrap());
    assert!(square_canonical_path(&l).unwrap().is_empty());
}

#[test]
fn crosses_of_one_rectangle_share_an_orbit() {
    for w in 1..=4i64 {
        for h in 1..=4i64 {
            let g = orbit_bfs(&GroupCtx::z2(), &Shape::square(), &cross(w, h, (0, 0)), OrbitLimits::default()).unwrap();
            let orbit: HashSet<Pattern> = g.vertices.into_iter().collect();
            for x in 0..w {
                for y in 0..h {
                    let c = Pattern::from_xy((0..w).map(|i| (i, y)).chain((0..h).map(|j| (x, j))));
                    assert!(orbit.contains(&c), "{w}x{h} cross at {x},{y}");
                }
            }
        }
    }
}

#[test]
fn bottom_left_cross_to_bottom_right() {
    let sh = Shape::square();
    let p = cross(5, 4, (4, 0));
    let t = square_canonical_path(&p).unwrap();
    assert_eq!(replay(&sh, &p, &t).unwrap(), cross(5, 4, (0, 0)));
    let back = reverse_trace(&t);
    assert_eq!(replay(&sh, &cross(5, 4, (0, 0)), &back).unwrap(), p);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normal_form_is_orbit_invariant(v in prop::collection::vec((0i64..6, 0i64..6), 1..10)) {
        let p = Pattern::from_xy(v);
        let sh = Shape::square();
        let nf = square_identify_orbit(&p).unwrap();
        for m in legal_moves(&GroupCtx::z2(), &sh, &p).unwrap() {
            prop_assert_eq!(square_identify_orbit(&apply_move(&sh, &p, &m).unwrap()).unwrap(), nf.clone());
        }
        prop_assert_eq!(nf.pattern().len(), p.len());
        // Each rectangle needs at least w + h - 1 marbles.
        prop_assert!(nf.components.iter().all(|c| c.k >= 0));
        let used: i64 = nf.components.iter().map(|c| c.a + c.b - 1).sum();
        prop_assert!(used <= p.len() as i64);
        let (phi, _) = filling_closure(&GroupCtx::z2(), &sh, &p).unwrap();
        let area: i64 = rect_decomposition(&p).unwrap().components.iter().map(|r| r.w * r.h).sum();
        prop_assert_eq!(area as usize, phi.len());
    }
}
