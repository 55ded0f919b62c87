use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitaire_core::orbit::*;
use solitaire_core::triangle::{a_n_condition, stacks, StackKind};
use solitaire_core::*;

fn line(n: i64) -> Pattern {
    Pattern::from_xy((0..n).map(|x| (x, 0)))
}

fn tri(n: i64) -> Pattern {
    Pattern::from_xy((0..n).flat_map(|y| (0..n - y).map(move |x| (x, y))))
}

fn line_orbit(n: i64) -> OrbitGraph {
    orbit_bfs(&GroupCtx::z2(), &Shape::triangle(), &line(n), OrbitLimits::default()).unwrap()
}

// Exhaustive BFS values, frozen.
const LINE_ORBIT_SIZES: [usize; 5] = [1, 3, 16, 122, 1188];
const LINE_ORBIT_DIAMETERS: [usize; 4] = [0, 1, 4, 11];

#[test]
fn small_line_orbits() {
    let g1 = line_orbit(1);
    assert_eq!((g1.stats.size, diameter(&g1).unwrap()), (1, 0));
    let g2 = line_orbit(2);
    let two_subsets: HashSet<Pattern> = g2.vertices.iter().cloned().collect();
    assert_eq!(two_subsets.len(), 3);
    assert!(two_subsets.iter().all(|p| p.len() == 2 && p.is_subset(&tri(2))));
    assert_eq!(diameter(&g2).unwrap(), 1);
}

#[test]
fn line_orbit_goldens() {
    for n in 1..=5 {
        let g = line_orbit(n);
        assert!(!g.truncated);
        assert_eq!(g.stats.size, LINE_ORBIT_SIZES[n as usize - 1]);
        if n <= 4 {
            assert_eq!(diameter(&g).unwrap(), LINE_ORBIT_DIAMETERS[n as usize - 1]);
        }
    }
}

#[test]
fn orbit_graph_edges_are_moves_both_ways() {
    let g = line_orbit(4);
    let sh = Shape::triangle();
    for &(a, b) in &g.edges {
        let (p, q) = (&g.vertices[a], &g.vertices[b]);
        let fwd = legal_moves(&GroupCtx::z2(), &sh, p).unwrap();
        assert!(fwd.iter().any(|m| apply_move(&sh, p, m).unwrap() == *q));
        let back = legal_moves(&GroupCtx::z2(), &sh, q).unwrap();
        assert!(back.iter().any(|m| apply_move(&sh, q, m).unwrap() == *p));
    }
}

#[test]
fn truncation_is_reported() {
    let g = orbit_bfs(&GroupCtx::z2(), &Shape::triangle(), &line(5), OrbitLimits { max_vertices: 50, max_radius: None }).unwrap();
    assert!(g.truncated);
    assert!(diameter(&g).is_err());
    let lin = Shape::full(vec![Elem::xy(0, 0), Elem::xy(1, 0)]).unwrap();
    let g = orbit_bfs(&GroupCtx::z2(), &lin, &Pattern::from_xy([(0, 0)]), OrbitLimits { max_vertices: 1000, max_radius: Some(10) }).unwrap();
    assert!(g.truncated);
}

#[test]
fn orbit_counts_between_stacks_and_column_condition() {
    for n in 2..=5i64 {
        let g = line_orbit(n);
        let orbit: HashSet<Pattern> = g.vertices.iter().cloned().collect();
        let mut stack_set = HashSet::new();
        for kind in [StackKind::Horizontal, StackKind::Vertical, StackKind::Diagonal] {
            stack_set.extend(stacks(n, kind));
        }
        let fact: usize = (1..=n as usize).product();
        assert_eq!(stack_set.len(), 3 * fact - 3);
        assert!(stack_set.iter().all(|p| orbit.contains(p)));
        // A_n by enumeration of the n-subsets of T_n.
        let cells = tri(n);
        let space = MaskSpace::new(&Shape::triangle(), &cells).unwrap();
        let a_n: Vec<Pattern> = subsets(cells.len() as u32, n as u32)
            .map(|m| space.to_pattern(m))
            .filter(|p| a_n_condition(p, n).unwrap())
            .collect();
        assert!(orbit.iter().all(|p| a_n_condition(p, n).unwrap()));
        assert!(3 * fact - 3 <= g.stats.size && g.stats.size <= a_n.len(), "n={n}");
    }
}

#[test]
fn mask_orbits_match_pattern_bfs() {
    let sh = Shape::triangle();
    let space = MaskSpace::new(&sh, &tri(5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let m: u64 = (0..15).filter(|_| rng.gen_bool(0.35)).fold(0, |a, i| a | 1 << i);
        let p = space.to_pattern(m);
        let g = orbit_bfs(&GroupCtx::z2(), &sh, &p, OrbitLimits::default()).unwrap();
        let a: HashSet<Pattern> = g.vertices.into_iter().collect();
        let b: HashSet<Pattern> = space.orbit(m, usize::MAX).unwrap().into_iter().map(|v| space.to_pattern(v)).collect();
        assert_eq!(a, b);
    }
    assert!(MaskSpace::new(&sh, &line(3)).is_err());
}

#[test]
fn subsets_enumerates_binomials() {
    for n in [0u32, 1, 5, 9] {
        for k in 0..=n + 1 {
            let v: Vec<u64> = subsets(n, k).collect();
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            assert!(v.iter().all(|m| m.count_ones() == k && (n == 64 || m >> n == 0)));
            let binom = (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
            assert_eq!(v.len() as u64, if k > n { 0 } else { binom }, "n={n} k={k}");
        }
    }
}

/// (3 + sqrt 5)^n = p + q sqrt 5 exactly; the radical expression is then
/// 2q sqrt 5 / (2^n sqrt 5) = q / 2^(n-1).
fn radical_formula(n: u32) -> u128 {
    let (mut p, mut q) = (1i128, 0i128);
    for _ in 0..n {
        (p, q) = (3 * p + 5 * q, p + 3 * q);
    }
    let den = 1i128 << (n - 1);
    assert_eq!(q % den, 0);
    (q / den) as u128
}

#[test]
fn free_line_recurrence_matches_the_closed_form() {
    for n in 1..=20 {
        assert_eq!(free_line_orbit_count(n as usize), radical_formula(n), "n={n}");
        let s5 = 5f64.sqrt();
        let f = ((3.0 + s5).powi(n as i32) - (3.0 - s5).powi(n as i32)) / (2f64.powi(n as i32) * s5);
        assert_eq!(f.round() as u128, radical_formula(n));
    }
    assert_eq!(free_line_orbit_count(1), 1);
    assert_eq!(free_line_orbit_count(2), 3);
}

#[test]
fn free_line_counts_and_membership_agree_with_bfs() {
    let ctx = GroupCtx::Free { k: 2 };
    let sh = Shape::free_triangle();
    for n in 1..=7usize {
        let l = free_line(n);
        let g = orbit_bfs(&ctx, &sh, &l, OrbitLimits::default()).unwrap();
        assert!(!g.truncated);
        assert_eq!(g.stats.size as u128, free_line_orbit_count(n));
        let orbit: HashSet<Pattern> = g.vertices.iter().cloned().collect();
        let (phi, _) = filling_closure(&ctx, &sh, &l).unwrap();
        assert_eq!(phi.len(), 2 * n - 1);
        let space = MaskSpace::new(&sh, &phi).unwrap();
        for m in subsets(phi.len() as u32, n as u32) {
            let p = space.to_pattern(m);
            assert_eq!(free_line_orbit_membership(&p, n), orbit.contains(&p), "{p:?}");
        }
    }
    let words: HashSet<String> = orbit_bfs(&ctx, &sh, &free_line(2), OrbitLimits::default())
        .unwrap()
        .vertices
        .iter()
        .map(|p| orbit::free_line_encoding(p, 2).unwrap())
        .collect();
    assert_eq!(words, ["EE", "EA", "BE"].iter().map(|s| s.to_string()).collect());
}

fn brute_delta(a: &Pattern, b: &Pattern) -> f64 {
    let pa: Vec<(f64, f64)> = a.xy().iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let pb: Vec<(f64, f64)> = b.xy().iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    fn go(i: usize, pa: &[(f64, f64)], pb: &[(f64, f64)], used: &mut Vec<bool>) -> f64 {
        if i == pa.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for j in 0..pb.len() {
            if !used[j] {
                used[j] = true;
                let d = ((pa[i].0 - pb[j].0).powi(2) + (pa[i].1 - pb[j].1).powi(2)).sqrt();
                best = best.min(d + go(i + 1, pa, pb, used));
                used[j] = false;
            }
        }
        best
    }
    go(0, &pa, &pb, &mut vec![false; pb.len()])
}

#[test]
fn delta_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let k = rng.gen_range(1..=6);
        let mut draw = |k: usize| {
            let mut p = Pattern::new();
            while p.len() < k {
                p.insert(Elem::xy(rng.gen_range(-5..6), rng.gen_range(-5..6)));
            }
            p
        };
        let (a, b) = (draw(k), draw(k));
        assert!((delta_metric(&a, &b).unwrap() - brute_delta(&a, &b)).abs() < 1e-9);
    }
    assert_eq!(delta_metric(&line(4), &line(4)).unwrap(), 0.0);
    assert!(delta_metric(&line(4), &line(3)).is_err());
}

#[test]
fn edges_of_the_triangle_are_far_apart() {
    for n in 1..=10i64 {
        let h = line(n);
        let v = Pattern::from_xy((0..n).map(|y| (0, y)));
        assert!(delta_metric(&h, &v).unwrap() >= (n * (n - 1) / 2) as f64 - 1e-9);
    }
    let h3 = line(3);
    let v3 = Pattern::from_xy((0..3).map(|y| (0, y)));
    assert!(delta_metric(&h3, &v3).unwrap() >= 3.0 - 1e-9);
}

#[test]
fn canonical_paths_respect_the_matching_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let k = rng.gen_range(1..=10);
        let mut p = Pattern::new();
        while p.len() < k {
            p.insert(Elem::xy(rng.gen_range(0..8), rng.gen_range(0..8)));
        }
        let t = triangle::canonical_path(&p).unwrap();
        let end = replay(&Shape::triangle(), &p, &t).unwrap();
        assert!(t.len() as f64 + 1e-9 >= move_lower_bound(&Shape::triangle(), &p, &end).unwrap());
    }
}

#[test]
fn partition_is_deterministic() {
    let space = MaskSpace::new(&Shape::square(), &Pattern::from_xy((0..3).flat_map(|x| (0..3).map(move |y| (x, y))))).unwrap();
    assert_eq!(space.partition(5), space.partition(5));
}
