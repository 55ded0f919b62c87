//! Solitaire moves.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::{div, mul, Elem, GroupCtx};
use crate::pattern::{Pattern, Shape};

/// One move: the hole of gS jumps from `filled` to `vacated`, i.e. the marble
/// at `vacated` moves to `filled`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveRecord {
    pub g: Elem,
    #[serde(rename = "from")]
    pub vacated: Elem,
    #[serde(rename = "to")]
    pub filled: Elem,
}

pub type MoveTrace = Vec<MoveRecord>;

impl MoveRecord {
    pub fn xy(g: (i64, i64), from: (i64, i64), to: (i64, i64)) -> MoveRecord {
        MoveRecord { g: Elem::xy(g.0, g.1), vacated: Elem::xy(from.0, from.1), filled: Elem::xy(to.0, to.1) }
    }

    pub fn reversed(&self) -> MoveRecord {
        MoveRecord { g: self.g.clone(), vacated: self.filled.clone(), filled: self.vacated.clone() }
    }
}

pub fn reverse_trace(t: &[MoveRecord]) -> MoveTrace {
    t.iter().rev().map(MoveRecord::reversed).collect()
}

/// Translates that can possibly see a one-hole copy of S: {p s^-1}.
pub(crate) fn candidate_translates(shape: &Shape, p: &Pattern) -> BTreeSet<Elem> {
    let mut out = BTreeSet::new();
    for x in p {
        for s in shape.s() {
            out.insert(div(x, s));
        }
    }
    out
}

/// The hole of gS in `p` if gS has exactly one cell missing.
pub(crate) fn single_hole(shape: &Shape, p: &Pattern, g: &Elem) -> Option<(Elem, Elem)> {
    let mut hole = None;
    for s in shape.s() {
        let x = mul(g, s);
        if !p.contains(&x) {
            if hole.is_some() {
                return None;
            }
            hole = Some((s.clone(), x));
        }
    }
    hole
}

pub fn legal_moves(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<Vec<MoveRecord>, CoreError> {
    shape.check(ctx)?;
    if shape.s().len() < 2 {
        return Err(CoreError::Contract("moves need |S| >= 2".into()));
    }
    let mut out = Vec::new();
    for g in candidate_translates(shape, p) {
        let Some((hs, hole)) = single_hole(shape, p, &g) else { continue };
        if !shape.in_c(&hs) {
            continue;
        }
        for c in shape.c() {
            if *c == hs {
                continue;
            }
            out.push(MoveRecord { g: g.clone(), vacated: mul(&g, c), filled: hole.clone() });
        }
    }
    out.sort();
    Ok(out)
}

/// Checks every clause of the move definition, naming the first that fails.
pub fn check_move(shape: &Shape, p: &Pattern, m: &MoveRecord) -> Result<(), CoreError> {
    if m.vacated == m.filled {
        return Err(CoreError::IllegalMove("vacated and filled coincide".into()));
    }
    let gc: Vec<Elem> = shape.c().iter().map(|c| mul(&m.g, c)).collect();
    if !gc.contains(&m.vacated) {
        return Err(CoreError::IllegalMove(format!("{} is not in gC for g = {}", m.vacated, m.g)));
    }
    if !gc.contains(&m.filled) {
        return Err(CoreError::IllegalMove(format!("{} is not in gC for g = {}", m.filled, m.g)));
    }
    if !p.contains(&m.vacated) {
        return Err(CoreError::IllegalMove(format!("no marble at {}", m.vacated)));
    }
    if p.contains(&m.filled) {
        return Err(CoreError::IllegalMove(format!("{} is occupied", m.filled)));
    }
    let missing = shape.s().iter().filter(|s| !p.contains(&mul(&m.g, s))).count();
    if missing != 1 {
        return Err(CoreError::IllegalMove(format!("gS has {missing} holes for g = {}, need exactly 1", m.g)));
    }
    Ok(())
}

pub fn apply_move(shape: &Shape, p: &Pattern, m: &MoveRecord) -> Result<Pattern, CoreError> {
    check_move(shape, p, m)?;
    let mut q = p.clone();
    q.remove(&m.vacated);
    q.insert(m.filled.clone());
    Ok(q)
}

/// Applies a trace, failing at the first illegal step (reported 0-based).
pub fn replay(shape: &Shape, p: &Pattern, trace: &[MoveRecord]) -> Result<Pattern, (usize, CoreError)> {
    let mut q = p.clone();
    for (i, m) in trace.iter().enumerate() {
        q = apply_move(shape, &q, m).map_err(|e| (i, e))?;
    }
    Ok(q)
}
