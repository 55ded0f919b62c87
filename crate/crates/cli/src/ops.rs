//! Subcommand bodies, shared with `serve`. Each returns the JSON result.

use serde_json::{json, Value};
use solitaire_core::contour::{contour as contour_at, parallel_edge_exchange, sweep_swap};
use solitaire_core::io::Document;
use solitaire_core::orbit::{diameter as graph_diameter, orbit_bfs, OrbitGraph, OrbitLimits};
use solitaire_core::square::{square_canonical_path, square_identify_orbit};
use solitaire_core::tep::{self, TepRule};
use solitaire_core::triangle::{canonical_path, identify_orbit, line_orbit_member};
use solitaire_core::*;

use crate::Fail;

fn val<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

pub fn fill(doc: &Document, cap: Option<usize>) -> Result<Value, Fail> {
    let (closure, trace) = filling_closure_with(&doc.group()?, &doc.shape()?, &doc.pattern()?, FillOptions { step_cap: cap })?;
    Ok(json!({"closure": val(&closure), "trace": val(&trace.steps)}))
}

pub fn moves(doc: &Document) -> Result<Value, Fail> {
    Ok(json!({"moves": val(&legal_moves(&doc.group()?, &doc.shape()?, &doc.pattern()?)?)}))
}

pub fn apply(doc: &Document, m: &MoveRecord) -> Result<Value, Fail> {
    let shape = doc.shape()?;
    doc.group()?.check(&m.g)?;
    Ok(json!({"pattern": val(&apply_move(&shape, &doc.pattern()?, m)?)}))
}

pub fn replay(doc: &Document, t: &[MoveRecord]) -> Result<Value, Fail> {
    Ok(match solitaire_core::replay(&doc.shape()?, &doc.pattern()?, t) {
        Ok(end) => json!({"legal": true, "end": val(&end), "moves": t.len()}),
        Err((i, e)) => json!({"legal": false, "failed_at": i, "error": e.to_string()}),
    })
}

pub fn excess(doc: &Document) -> Result<Value, Fail> {
    let (ctx, shape, p) = (doc.group()?, doc.shape()?, doc.pattern()?);
    let rank = rank_exact(&ctx, &shape, &p)?;
    let sets = excess_sets(&ctx, &shape, &p)?;
    Ok(json!({
        "size": p.len(),
        "rank": rank,
        "excess": p.len() - rank,
        "visible_excess": sets.visible(),
        "maximal_excess_sets": val(&sets.maximal),
    }))
}

fn labels(doc: &Document, kind: &str) -> Result<Vec<String>, Fail> {
    let p = doc.pattern()?;
    Ok(match kind {
        "triangle" => identify_orbit(&p)?.components.iter().map(|c| format!("P({},{})", c.n, c.k)).collect(),
        _ => square_identify_orbit(&p)?.components.iter().map(|c| format!("L({},{},{})", c.a, c.b, c.k)).collect(),
    })
}

pub fn identify(doc: &Document, kind: &str) -> Result<Value, Fail> {
    let p = doc.pattern()?;
    Ok(match kind {
        "triangle" => val(&identify_orbit(&p)?),
        _ => val(&square_identify_orbit(&p)?),
    })
}

pub fn identify_labelled(doc: &Document, kind: &str) -> Result<Value, Fail> {
    let mut v = identify(doc, kind)?;
    v["labels"] = json!(labels(doc, kind)?);
    Ok(v)
}

pub fn path(doc: &Document, kind: &str) -> Result<Value, Fail> {
    let p = doc.pattern()?;
    let (t, shape) = match kind {
        "triangle" => (canonical_path(&p)?, Shape::triangle()),
        _ => (square_canonical_path(&p)?, Shape::square()),
    };
    let end = solitaire_core::replay(&shape, &p, &t).map_err(|(_, e)| Fail::Domain(format!("internal: emitted trace does not replay: {e}")))?;
    Ok(json!({"trace": val(&t), "end": val(&end)}))
}

/// The preset name matching the document's shape, if it is one of the two
/// with a complete orbit theory.
pub fn kind_of(doc: &Document) -> Result<&'static str, Fail> {
    let shape = doc.shape()?;
    if shape == Shape::triangle() {
        Ok("triangle")
    } else if shape == Shape::square() {
        Ok("square")
    } else {
        Err(Fail::Domain("orbit normal forms exist only for the triangle and the square".into()))
    }
}

pub fn member_line(doc: &Document) -> Result<Value, Fail> {
    Ok(json!({"member": line_orbit_member(&doc.pattern()?)?}))
}

pub fn contour(doc: &Document, corner: &Elem) -> Result<Value, Fail> {
    let c = contour_at(&doc.shape()?, &doc.pattern()?, corner)?;
    Ok(json!({"corner": val(corner), "cells": val(&c.cells)}))
}

pub fn swap(doc: &Document, from: &Elem, to: &Elem, exchange: bool) -> Result<Value, Fail> {
    let (shape, p) = (doc.shape()?, doc.pattern()?);
    let t = if exchange {
        parallel_edge_exchange(&shape, &p, from, to)?
    } else {
        sweep_swap(&shape, &p, from, to, &doc.order.clone().unwrap_or_default())?
    };
    let start = contour_at(&shape, &p, from)?.cells;
    let end = contour_at(&shape, &p, to)?.cells;
    Ok(json!({"start": val(&start), "trace": val(&t), "end": val(&end)}))
}

pub fn bfs(doc: &Document, max_vertices: usize, radius: Option<i64>) -> Result<OrbitGraph, Fail> {
    if max_vertices == 0 {
        return Err(Fail::Usage("--max must be positive".into()));
    }
    Ok(orbit_bfs(&doc.group()?, &doc.shape()?, &doc.pattern()?, OrbitLimits { max_vertices, max_radius: radius })?)
}

pub fn graph_json(g: &OrbitGraph, adjacency: bool) -> Value {
    let mut v = json!({
        "size": g.stats.size,
        "root_eccentricity": g.stats.root_eccentricity,
        "edges": g.edges.len(),
        "truncated": g.truncated,
    });
    if adjacency {
        v["vertices"] = val(&g.vertices);
        v["adjacency"] = val(&g.edges);
    }
    v
}

pub fn diameter(doc: &Document, max_vertices: usize) -> Result<Value, Fail> {
    let g = bfs(doc, max_vertices, None)?;
    if g.truncated {
        return Err(Fail::Domain(format!("orbit exceeds {max_vertices} vertices")));
    }
    Ok(json!({"size": g.stats.size, "diameter": graph_diameter(&g)?}))
}

fn rule(doc: &Document) -> Result<TepRule, Fail> {
    let spec = doc.rule.as_ref().ok_or_else(|| Fail::Usage("missing field \"rule\"".into()))?;
    Ok(TepRule::new(doc.shape()?, spec)?)
}

fn domain(doc: &Document) -> Result<Pattern, Fail> {
    doc.domain.clone().ok_or_else(|| Fail::Usage("missing field \"domain\"".into()))
}

pub fn tep_indep(doc: &Document) -> Result<Value, Fail> {
    let r = rule(doc)?;
    Ok(json!({"independent": tep::is_independent(&r, &doc.pattern()?, &domain(doc)?)?}))
}

pub fn tep_span(doc: &Document) -> Result<Value, Fail> {
    let r = rule(doc)?;
    let p = doc.pattern()?;
    let span = tep::spanned_set(&r, &p, &domain(doc)?)?;
    let (phi, _) = filling_closure(&doc.group()?, r.shape(), &p)?;
    Ok(json!({"spanned": val(&span), "filling_closure": val(&phi)}))
}

pub fn tep_basis(doc: &Document) -> Result<Value, Fail> {
    let r = rule(doc)?;
    let (p, d) = (doc.pattern()?, domain(doc)?);
    Ok(json!({
        "independent": tep::is_independent(&r, &p, &d)?,
        "filling_basis": tep::is_filling_basis(&r, &p, &d)?,
    }))
}

pub fn tep_compile(doc: &Document) -> Result<Value, Fail> {
    let r = rule(doc)?;
    let t = doc.trace.clone().ok_or_else(|| Fail::Usage("missing field \"trace\"".into()))?;
    let steps = tep::compile_simple_perms(&r, &doc.pattern()?, &t)?;
    let widest = steps.iter().map(|s| s.cells.len()).max().unwrap_or(0);
    Ok(json!({"steps": val(&steps), "widest": widest}))
}
