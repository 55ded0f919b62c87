//! The filling process and its closure.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::{cyclic_coset_membership, div, Elem, GroupCtx, Linearity, FREE_LINEARITY_BUDGET};
use crate::hull::HalfPlanes;
use crate::moves::{candidate_translates, single_hole};
use crate::pattern::{Pattern, Shape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillStep {
    pub g: Elem,
    pub added: Vec<Elem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FillTrace {
    pub steps: Vec<FillStep>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FillOptions {
    /// Overrides the default cap. `None` picks 10(|P|+|S|)^2 when no
    /// termination argument is available, and no cap otherwise.
    pub step_cap: Option<usize>,
}

/// What guards a filling run from looping forever.
enum Guard {
    Cap(usize, Option<String>),
    Hull(HalfPlanes),
    None,
}

fn guard_for(ctx: &GroupCtx, shape: &Shape, p: &Pattern, opts: FillOptions) -> Result<Guard, CoreError> {
    let default_cap = 10 * (p.len() + shape.s().len()).pow(2);
    let lin = cyclic_coset_membership(ctx, shape.s(), FREE_LINEARITY_BUDGET)?;
    let witness = match &lin {
        Linearity::Linear(w) => Some(w.b.to_string()),
        _ => None,
    };
    if let Some(cap) = opts.step_cap {
        return Ok(Guard::Cap(cap, witness));
    }
    match (ctx, &lin) {
        (GroupCtx::FreeAbelian { d: 2 }, Linearity::NotLinear) => {
            let pts: Vec<(i64, i64)> = shape.s().iter().map(|e| e.as_xy().unwrap()).collect();
            Ok(Guard::Hull(HalfPlanes::slid_to(&pts, &p.xy())))
        }
        (GroupCtx::FreeAbelian { .. }, Linearity::NotLinear) => Ok(Guard::None),
        _ => Ok(Guard::Cap(default_cap, witness)),
    }
}

/// φ(P), filling in order of the least applicable translate.
pub fn filling_closure(ctx: &GroupCtx, shape: &Shape, p: &Pattern) -> Result<(Pattern, FillTrace), CoreError> {
    filling_closure_with(ctx, shape, p, FillOptions::default())
}

pub fn filling_closure_with(
    ctx: &GroupCtx,
    shape: &Shape,
    p: &Pattern,
    opts: FillOptions,
) -> Result<(Pattern, FillTrace), CoreError> {
    shape.check(ctx)?;
    for x in p {
        ctx.check(x)?;
    }
    let guard = guard_for(ctx, shape, p, opts)?;
    let mut cur = p.clone();
    let mut trace = FillTrace::default();
    let mut work = candidate_translates(shape, p);
    while let Some(g) = work.pop_first() {
        let Some((hs, hole)) = single_hole(shape, &cur, &g) else { continue };
        if !shape.in_c(&hs) {
            continue;
        }
        match &guard {
            Guard::Cap(cap, witness) if trace.steps.len() >= *cap => {
                return Err(CoreError::PossiblyInfinite { cap: *cap, witness: witness.clone() })
            }
            Guard::Hull(h) if !h.contains(hole.as_xy().unwrap()) => {
                return Err(CoreError::Internal(format!("filling left the S-hull at {hole}")))
            }
            _ => {}
        }
        for s in shape.s() {
            work.insert(div(&hole, s));
        }
        cur.insert(hole.clone());
        trace.steps.push(FillStep { g, added: vec![hole] });
    }
    Ok((cur, trace))
}

/// Runs the filling with an arbitrary schedule: `choose(n)` picks which of
/// the `n` currently applicable translates (in sorted order) fires next.
pub fn filling_closure_by(
    shape: &Shape,
    p: &Pattern,
    cap: usize,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<(Pattern, FillTrace), CoreError> {
    let mut cur = p.clone();
    let mut trace = FillTrace::default();
    loop {
        let mut ready: Vec<(Elem, Elem)> = Vec::new();
        for g in candidate_translates(shape, &cur) {
            if let Some((hs, hole)) = single_hole(shape, &cur, &g) {
                if shape.in_c(&hs) {
                    ready.push((g, hole));
                }
            }
        }
        if ready.is_empty() {
            return Ok((cur, trace));
        }
        if trace.steps.len() >= cap {
            return Err(CoreError::PossiblyInfinite { cap, witness: None });
        }
        let (g, hole) = ready.swap_remove(choose(ready.len()) % ready.len());
        cur.insert(hole.clone());
        trace.steps.push(FillStep { g, added: vec![hole] });
    }
}

/// Replays a fill trace, checking each step is a filling move.
pub fn replay_fill(shape: &Shape, p: &Pattern, t: &FillTrace) -> Result<Pattern, CoreError> {
    let mut cur = p.clone();
    for st in &t.steps {
        match single_hole(shape, &cur, &st.g) {
            Some((hs, hole)) if shape.in_c(&hs) && st.added == [hole.clone()] => {
                cur.insert(hole);
            }
            _ => return Err(CoreError::IllegalMove(format!("no filling move at {}", st.g))),
        }
    }
    Ok(cur)
}

pub fn is_filling_closed(shape: &Shape, p: &Pattern) -> bool {
    candidate_translates(shape, p)
        .iter()
        .all(|g| !matches!(single_hole(shape, p, g), Some((hs, _)) if shape.in_c(&hs)))
}

