use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitaire_core::group::{cyclic_coset_membership, parse_word, reduce, Linearity, FREE_LINEARITY_BUDGET};
use solitaire_core::{Elem, GroupCtx};

fn f2() -> GroupCtx {
    GroupCtx::Free { k: 2 }
}

#[test]
fn products_and_inverses() {
    let z = GroupCtx::z2();
    assert_eq!(z.multiply(&Elem::xy(1, 2), &Elem::xy(3, -1)).unwrap(), Elem::xy(4, 1));
    assert_eq!(z.inverse(&Elem::xy(2, -3)).unwrap(), Elem::xy(-2, 3));
    assert_eq!(z.inverse(&z.identity()).unwrap(), z.identity());
    let f = f2();
    assert!(f.multiply(&Elem::word(&[1]), &Elem::word(&[-1])).unwrap().is_identity());
    // a b^-1 . b a = a a
    assert_eq!(f.multiply(&Elem::word(&[1, -2]), &Elem::word(&[2, 1])).unwrap(), Elem::word(&[1, 1]));
    assert_eq!(f.inverse(&Elem::word(&[1, 2])).unwrap(), Elem::word(&[-2, -1]));
    assert!(z.multiply(&Elem::xy(0, 0), &Elem::word(&[1])).is_err());
    assert!(f.check(&Elem::word(&[3])).is_err());
}

#[test]
fn word_syntax() {
    assert_eq!(parse_word("a b' a").unwrap(), Elem::word(&[1, -2, 1]));
    assert_eq!(parse_word("a a'").unwrap(), Elem::word(&[]));
    assert_eq!(parse_word("").unwrap(), Elem::word(&[]));
    assert_eq!(parse_word(&Elem::word(&[2, -1, -1]).to_string()).unwrap(), Elem::word(&[2, -1, -1]));
    assert!(parse_word("a ?").is_err());
}

fn pts(v: &[(i64, i64)]) -> Vec<Elem> {
    v.iter().map(|&(x, y)| Elem::xy(x, y)).collect()
}

#[test]
fn linearity_examples() {
    let z = GroupCtx::z2();
    match cyclic_coset_membership(&z, &pts(&[(0, 0), (1, 2), (2, 4)]), FREE_LINEARITY_BUDGET).unwrap() {
        Linearity::Linear(w) => assert!(w.b == Elem::xy(1, 2) || w.b == Elem::xy(-1, -2)),
        other => panic!("{other:?}"),
    }
    assert_eq!(cyclic_coset_membership(&z, &pts(&[(0, 0), (1, 0), (0, 1)]), FREE_LINEARITY_BUDGET).unwrap(), Linearity::NotLinear);
    let ab = Elem::word(&[1, -2]);
    let s = vec![Elem::word(&[]), ab.clone(), Elem::word(&[1, -2, 1, -2])];
    match cyclic_coset_membership(&f2(), &s, FREE_LINEARITY_BUDGET).unwrap() {
        Linearity::Linear(w) => assert!(w.b == ab || w.b == Elem::word(&[2, -1])),
        other => panic!("{other:?}"),
    }
    let tri = vec![Elem::word(&[]), Elem::word(&[1]), Elem::word(&[2])];
    assert_eq!(cyclic_coset_membership(&f2(), &tri, FREE_LINEARITY_BUDGET).unwrap(), Linearity::NotLinear);
}

/// Brute force: every pair spans the same direction from p[0].
fn collinear(p: &[(i64, i64)]) -> bool {
    let o = p[0];
    p.iter().all(|&a| p.iter().all(|&b| (a.0 - o.0) * (b.1 - o.1) == (a.1 - o.1) * (b.0 - o.0)))
}

#[test]
fn lattice_linearity_matches_collinearity() {
    let grid: Vec<(i64, i64)> = (-3..=3).flat_map(|x| (-3..=3).map(move |y| (x, y))).collect();
    let z = GroupCtx::z2();
    let check = |set: &[(i64, i64)]| {
        let lin = cyclic_coset_membership(&z, &pts(set), FREE_LINEARITY_BUDGET).unwrap();
        assert_eq!(matches!(lin, Linearity::Linear(_)), collinear(set), "{set:?}");
    };
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            for k in j + 1..grid.len() {
                check(&[grid[i], grid[j], grid[k]]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20000 {
        let n = rng.gen_range(4..=6);
        // Half the samples are drawn from a random line so both answers occur.
        let pool: Vec<(i64, i64)> = if rng.gen_bool(0.5) {
            let (o, d) = (grid[rng.gen_range(0..grid.len())], (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64)));
            grid.iter().copied().filter(|q| (q.0 - o.0) * d.1 == (q.1 - o.1) * d.0).collect()
        } else {
            grid.clone()
        };
        if pool.len() >= n {
            let set: Vec<(i64, i64)> = pool.choose_multiple(&mut rng, n).copied().collect();
            check(&set);
        }
    }
}

fn lat() -> impl Strategy<Value = Elem> {
    (-50i64..50, -50i64..50).prop_map(|(x, y)| Elem::xy(x, y))
}

fn word() -> impl Strategy<Value = Elem> {
    prop::collection::vec(prop_oneof![Just(1i32), Just(-1), Just(2), Just(-2)], 0..12).prop_map(|w| Elem::word(&w))
}

proptest! {
    #[test]
    fn lattice_group_laws(a in lat(), b in lat(), c in lat()) {
        let z = GroupCtx::z2();
        let m = |x: &Elem, y: &Elem| z.multiply(x, y).unwrap();
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(m(&a, &z.identity()), a.clone());
        prop_assert!(m(&a, &z.inverse(&a).unwrap()).is_identity());
    }

    #[test]
    fn free_group_laws(a in word(), b in word(), c in word()) {
        let f = f2();
        let m = |x: &Elem, y: &Elem| f.multiply(x, y).unwrap();
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(m(&f.identity(), &a), a.clone());
        prop_assert!(m(&f.inverse(&a).unwrap(), &a).is_identity());
        prop_assert_eq!(parse_word(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn reduction_is_idempotent(w in prop::collection::vec(prop_oneof![Just(1i32), Just(-1), Just(2), Just(-2)], 0..20)) {
        let r = reduce(&w);
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
    }
}
