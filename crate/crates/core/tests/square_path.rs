use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solitaire_core::square::{square_canonical_path, square_identify_orbit};
use solitaire_core::{replay, Pattern, Shape};

fn box_cells(w: i64, h: i64) -> Vec<(i64, i64)> {
    (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect()
}

#[test]
fn every_pattern_in_a_4x4_box_reaches_its_normal_form() {
    let shape = Shape::square();
    let cells = box_cells(4, 4);
    let mut worst = 0f64;
    for mask in 1u32..(1 << cells.len()) {
        let p = Pattern::from_xy((0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]));
        let trace = square_canonical_path(&p).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        let end = replay(&shape, &p, &trace).unwrap_or_else(|(i, e)| panic!("{p:?} step {i}: {e}"));
        assert_eq!(end, square_identify_orbit(&p).unwrap().pattern(), "{p:?}");
        worst = worst.max(trace.len() as f64 / (p.len() as f64).powi(3));
    }
    println!("worst ratio {worst}");
}

#[test]
fn random_patterns_in_larger_boxes() {
    let shape = Shape::square();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let (w, h) = (rng.gen_range(1..=9), rng.gen_range(1..=9));
        let mut cells = box_cells(w, h);
        cells.shuffle(&mut rng);
        let size = rng.gen_range(1..=cells.len());
        let p = Pattern::from_xy(cells.into_iter().take(size));
        let trace = square_canonical_path(&p).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        let end = replay(&shape, &p, &trace).unwrap_or_else(|(i, e)| panic!("{p:?} step {i}: {e}"));
        assert_eq!(end, square_identify_orbit(&p).unwrap().pattern(), "{p:?}");
        worst = worst.max(trace.len() as f64 / (p.len() as f64).powi(3));
    }
    println!("worst ratio {worst}");
}
