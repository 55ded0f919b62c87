//! Rank, excess and excess sets by exhaustive search, and replay of a trace
//! on a larger pattern.

use std::collections::{BTreeMap, HashSet};

use crate::error::CoreError;
use crate::fill::filling_closure;
use crate::group::{Elem, GroupCtx};
use crate::moves::{check_move, MoveRecord};
use crate::pattern::{Pattern, Shape};

pub const RANK_LIMIT: usize = 22;
pub const EXCESS_SET_LIMIT: usize = 20;

fn closure(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<Pattern, CoreError> {
    Ok(filling_closure(ctx, shape, p)?.0)
}

/// Least |R| with φ(R) = φ(P), by subsets of φ(P) of increasing size.
pub fn rank_exact(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<usize, CoreError> {
    rank_exact_limited(ctx, shape, p, RANK_LIMIT)
}

pub fn rank_exact_limited(ctx: &GroupCtx, shape: &Shape, p: &Pattern, limit: usize) -> Result<usize, CoreError> {
    let f = closure(ctx, shape, p)?;
    if f.len() > limit {
        return Err(CoreError::SizeLimit { what: "filling closure", size: f.len(), limit });
    }
    let cells = f.cells();
    let n = cells.len();
    for r in 0..=n {
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let sub = Pattern::from_cells(idx.iter().map(|&i| cells[i].clone()));
            if closure(ctx, shape, &sub)? == f {
                return Ok(r);
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(n)
}

/// Advances `idx` to the next r-combination of 0..n in lexicographic order.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn excess(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<usize, CoreError> {
    Ok(p.len() - rank_exact(ctx, shape, p)?)
}

/// The excess-set family, stored as its maximal members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessSets {
    pub maximal: Vec<Pattern>,
    /// Total number of excess sets, the empty set included.
    pub count: usize,
}

impl ExcessSets {
    pub fn visible(&self) -> usize {
        self.maximal.iter().map(Pattern::len).max().unwrap_or(0)
    }
}

/// All Q ⊆ P with φ(P \ Q) = φ(P). The family is closed under subsets, so
/// sets are grown one larger-indexed element at a time.
pub fn excess_sets(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<ExcessSets, CoreError> {
    if p.len() > EXCESS_SET_LIMIT {
        return Err(CoreError::SizeLimit { what: "pattern", size: p.len(), limit: EXCESS_SET_LIMIT });
    }
    let f = closure(ctx, shape, p)?;
    let cells = p.cells();
    let n = cells.len();
    let is_excess = |mask: u32| -> Result<bool, CoreError> {
        let rest = Pattern::from_cells((0..n).filter(|i| mask >> i & 1 == 0).map(|i| cells[i].clone()));
        Ok(closure(ctx, shape, &rest)? == f)
    };
    let mut family: HashSet<u32> = HashSet::new();
    family.insert(0);
    let mut layer = vec![0u32];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &m in &layer {
            let top = if m == 0 { 0 } else { 32 - m.leading_zeros() as usize };
            for i in top..n {
                let q = m | 1 << i;
                // every subset one smaller must already be an excess set
                if (0..n).any(|j| q >> j & 1 == 1 && !family.contains(&(q & !(1 << j)))) {
                    continue;
                }
                if is_excess(q)? {
                    family.insert(q);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    let mut maximal: Vec<Pattern> = family
        .iter()
        .filter(|&&m| (0..n).all(|i| m >> i & 1 == 1 || !family.contains(&(m | 1 << i))))
        .map(|&m| Pattern::from_cells((0..n).filter(|i| m >> i & 1 == 1).map(|i| cells[i].clone())))
        .collect();
    maximal.sort();
    Ok(ExcessSets { maximal, count: family.len() })
}

pub fn visible_excess(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<usize, CoreError> {
    Ok(excess_sets(ctx, shape, p)?.visible())
}

/// Replays `trace` (legal on `p`) on `p ∪ extra`. When the hole a move wants
/// to fill already holds an extra marble, all of gS is present and the move
/// acts as the transposition of `vacated` and `filled`: the extra jumps to
/// `vacated`. Returns the final set and where each extra cell ended up.
pub fn monotone_replay(
    shape: &Shape,
    p: &Pattern,
    trace: &[MoveRecord],
    extra: &Pattern,
) -> Result<(Pattern, Vec<(Elem, Elem)>), CoreError> {
    if !p.intersection(extra).is_empty() {
        return Err(CoreError::Contract("extra must be disjoint from the pattern".into()));
    }
    let mut plain = p.clone();
    let mut at: BTreeMap<Elem, Elem> = extra.iter().map(|x| (x.clone(), x.clone())).collect();
    for (i, m) in trace.iter().enumerate() {
        check_move(shape, &plain, m).map_err(|e| CoreError::IllegalMove(format!("step {i}: {e}")))?;
        plain.remove(&m.vacated);
        plain.insert(m.filled.clone());
        if let Some(orig) = at.remove(&m.filled) {
            at.insert(m.vacated.clone(), orig);
        }
    }
    let full = plain.union(&Pattern::from_cells(at.keys().cloned()));
    let mut bij: Vec<(Elem, Elem)> = at.into_iter().map(|(now, orig)| (orig, now)).collect();
    bij.sort();
    Ok((full, bij))
}
