//! Subshifts given by a TEP rule on a shape: every S-pattern is allowed or
//! not, and each corner symbol is forced by the others. Independence and
//! spanning are decided inside a finite envelope D by enumerating every
//! locally valid pattern on D.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::contour::BiInvariantOrder;
use crate::error::CoreError;
use crate::fill::filling_closure;
use crate::group::{mul, Elem, GroupCtx};
use crate::moves::{apply_move, candidate_translates, MoveRecord};
use crate::pattern::{Pattern, Shape};

/// Enumeration budget for |A|^(free cells of D).
pub const ENUMERATION_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleSpec {
    /// Symbols are Z/alphabet; allowed iff the S-entries sum to `target`.
    AbelianSum { alphabet: u8, target: u8 },
    /// Allowed S-patterns listed in the sorted order of S.
    Explicit { alphabet: u8, allowed: Vec<Vec<u8>> },
    /// Allowed iff f(p on S\C) + sum of p on C = 0 in Z/alphabet. `f` lists
    /// (pattern on S\C, value) pairs.
    SumWithF { alphabet: u8, f: Vec<(Vec<u8>, u8)> },
}

#[derive(Clone, Debug)]
enum Kind {
    Sum(u8),
    Table(HashSet<Vec<u8>>, HashMap<(usize, Vec<u8>), u8>),
    WithF(HashMap<Vec<u8>, u8>),
}

#[derive(Clone, Debug)]
pub struct TepRule {
    shape: Shape,
    q: u8,
    kind: Kind,
    corner_idx: Vec<usize>,
    other_idx: Vec<usize>,
}

fn tuples(q: u8, len: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (q as u64).pow(len as u32);
    (0..total).map(move |mut i| {
        (0..len)
            .map(|_| {
                let d = (i % q as u64) as u8;
                i /= q as u64;
                d
            })
            .collect()
    })
}

impl TepRule {
    pub fn new(shape: Shape, spec: &RuleSpec) -> Result<TepRule, CoreError> {
        let k = shape.s().len();
        let corner_idx: Vec<usize> = (0..k).filter(|&i| shape.in_c(&shape.s()[i])).collect();
        let other_idx: Vec<usize> = (0..k).filter(|&i| !shape.in_c(&shape.s()[i])).collect();
        let (q, kind) = match spec {
            RuleSpec::AbelianSum { alphabet, target } => {
                if *target >= *alphabet {
                    return Err(CoreError::Contract("target outside the alphabet".into()));
                }
                (*alphabet, Kind::Sum(*target))
            }
            RuleSpec::SumWithF { alphabet, f } => {
                let table: HashMap<Vec<u8>, u8> = f.iter().cloned().collect();
                let total = tuples(*alphabet, other_idx.len()).all(|t| table.get(&t).is_some_and(|&v| v < *alphabet));
                if !total || table.len() != (*alphabet as usize).pow(other_idx.len() as u32) {
                    return Err(CoreError::Contract("f must be a total table on S\\C".into()));
                }
                (*alphabet, Kind::WithF(table))
            }
            RuleSpec::Explicit { alphabet, allowed } => {
                let q = *alphabet;
                let set: HashSet<Vec<u8>> = allowed.iter().cloned().collect();
                if set.iter().any(|p| p.len() != k || p.iter().any(|&v| v >= q)) {
                    return Err(CoreError::Contract("allowed patterns must be S-patterns over the alphabet".into()));
                }
                if set.len() != (q as usize).pow(k as u32 - 1) {
                    return Err(CoreError::Contract(format!("need |A|^(|S|-1) allowed patterns, got {}", set.len())));
                }
                let mut fill = HashMap::new();
                for &c in &corner_idx {
                    for mut t in tuples(q, k) {
                        t[c] = 0;
                        if fill.contains_key(&(c, t.clone())) {
                            continue;
                        }
                        let fits: Vec<u8> = (0..q)
                            .filter(|&v| {
                                let mut u = t.clone();
                                u[c] = v;
                                set.contains(&u)
                            })
                            .collect();
                        if fits.len() != 1 {
                            return Err(CoreError::Contract(format!("not TEP: {} completions at corner {}", fits.len(), shape.s()[c])));
                        }
                        fill.insert((c, t), fits[0]);
                    }
                }
                (q, Kind::Table(set, fill))
            }
        };
        if q < 2 {
            return Err(CoreError::Contract("alphabet needs two symbols".into()));
        }
        Ok(TepRule { shape, q, kind, corner_idx, other_idx })
    }

    /// Sum to zero over Z/2 on the triangle.
    pub fn ledrappier() -> TepRule {
        TepRule::new(Shape::triangle(), &RuleSpec::AbelianSum { alphabet: 2, target: 0 }).unwrap()
    }

    pub fn sum_zero(shape: Shape, alphabet: u8) -> Result<TepRule, CoreError> {
        TepRule::new(shape, &RuleSpec::AbelianSum { alphabet, target: 0 })
    }

    /// Triangle rule over S_3: the symbol at (0,1) is the product of the
    /// symbols at (1,0) and (0,0), in that order.
    pub fn s3_triangle() -> TepRule {
        let s = Shape::triangle();
        let pos = |x, y| s.s().iter().position(|e| *e == Elem::xy(x, y)).unwrap();
        let (left, right, top) = (pos(0, 0), pos(1, 0), pos(0, 1));
        let mut allowed = Vec::new();
        for a in 0..6u8 {
            for b in 0..6u8 {
                let mut p = vec![0; 3];
                p[right] = a;
                p[left] = b;
                p[top] = s3_mul(a, b);
                allowed.push(p);
            }
        }
        TepRule::new(s, &RuleSpec::Explicit { alphabet: 6, allowed }).unwrap()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn alphabet(&self) -> u8 {
        self.q
    }

    pub fn allowed(&self, p: &[u8]) -> bool {
        let q = self.q as u32;
        match &self.kind {
            Kind::Sum(t) => p.iter().map(|&v| v as u32).sum::<u32>() % q == *t as u32,
            Kind::Table(set, _) => set.contains(p),
            Kind::WithF(f) => {
                let key: Vec<u8> = self.other_idx.iter().map(|&i| p[i]).collect();
                (f[&key] as u32 + self.corner_idx.iter().map(|&i| p[i] as u32).sum::<u32>()) % q == 0
            }
        }
    }

    /// The unique symbol at S-index `missing` (a corner) completing `p`.
    pub fn complete(&self, p: &[u8], missing: usize) -> u8 {
        let q = self.q as u32;
        let others = |idx: &[usize]| idx.iter().filter(|&&i| i != missing).map(|&i| p[i] as u32).sum::<u32>();
        match &self.kind {
            Kind::Sum(t) => ((*t as u32 + q - others(&(0..p.len()).collect::<Vec<_>>()) % q) % q) as u8,
            Kind::Table(_, fill) => {
                let mut key = p.to_vec();
                key[missing] = 0;
                fill[&(missing, key)]
            }
            Kind::WithF(f) => {
                let key: Vec<u8> = self.other_idx.iter().map(|&i| p[i]).collect();
                let s = (f[&key] as u32 + others(&self.corner_idx)) % q;
                ((q - s) % q) as u8
            }
        }
    }
}

// S_3 as permutations of {0,1,2}, indexed in lexicographic order.
const S3: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// (a ∘ b)(i) = a(b(i)).
pub fn s3_mul(a: u8, b: u8) -> u8 {
    let (pa, pb) = (S3[a as usize], S3[b as usize]);
    let c = [pa[pb[0] as usize], pa[pb[1] as usize], pa[pb[2] as usize]];
    S3.iter().position(|p| *p == c).unwrap() as u8
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalPattern {
    pub values: BTreeMap<Elem, u8>,
}

impl LocalPattern {
    pub fn domain(&self) -> Pattern {
        self.values.keys().cloned().collect()
    }
}

fn s_values(rule: &TepRule, p: &LocalPattern, g: &Elem) -> Option<Vec<u8>> {
    rule.shape.s().iter().map(|s| p.values.get(&mul(g, s)).copied()).collect()
}

pub fn locally_valid(rule: &TepRule, p: &LocalPattern) -> bool {
    candidate_translates(&rule.shape, &p.domain())
        .iter()
        .all(|g| s_values(rule, p, g).is_none_or(|v| rule.allowed(&v)))
}

/// Extends `p` over φ(domain), one filling step at a time.
pub fn deduce_closure(rule: &TepRule, p: &LocalPattern) -> Result<LocalPattern, CoreError> {
    let (_, trace) = filling_closure(&GroupCtx::z2(), &rule.shape, &p.domain())?;
    let mut out = p.clone();
    for step in &trace.steps {
        let hole = &step.added[0];
        let missing = rule.shape.s().iter().position(|s| mul(&step.g, s) == *hole).unwrap();
        let vals: Vec<u8> = rule.shape.s().iter().map(|s| out.values.get(&mul(&step.g, s)).copied().unwrap_or(0)).collect();
        out.values.insert(hole.clone(), rule.complete(&vals, missing));
    }
    if !locally_valid(rule, &out) {
        return Err(CoreError::Internal("deduced pattern is not locally valid".into()));
    }
    Ok(out)
}

/// An order on Z^2 whose maximum on S is a corner in C.
fn order_with_max_in_c(shape: &Shape) -> Result<(BiInvariantOrder, usize), CoreError> {
    let s: Vec<(i64, i64)> = shape
        .s()
        .iter()
        .map(|e| e.as_xy().ok_or_else(|| CoreError::Contract("TEP envelopes live in Z^2".into())))
        .collect::<Result<_, _>>()?;
    for a in 0..=3i64 {
        for b in -3..=3i64 {
            for (u, v) in [(a, b), (-a, -b)] {
                if (u, v) == (0, 0) {
                    continue;
                }
                let o = BiInvariantOrder::new(vec![(u, v), (-v, u)]);
                let top = o.max_of(&s).unwrap();
                let i = s.iter().position(|&p| p == top).unwrap();
                if shape.in_c(&shape.s()[i]) {
                    return Ok((o, i));
                }
            }
        }
    }
    Err(CoreError::Contract("no corner of S lies in C".into()))
}

/// Locally valid patterns on a finite domain, enumerated through its free
/// cells. Cells are visited in increasing order; a cell is forced exactly
/// when it is the greatest cell of a translate inside D, and that translate
/// is unique.
pub struct Envelope {
    cells: Vec<Elem>,
    index: HashMap<Elem, usize>,
    free: Vec<usize>,
    // (cell, S-translate cells as indices, position of the cell in S)
    forced: Vec<(usize, Vec<usize>, usize)>,
}

impl Envelope {
    pub fn new(rule: &TepRule, d: &Pattern) -> Result<Envelope, CoreError> {
        let (order, top) = order_with_max_in_c(&rule.shape)?;
        let mut pts: Vec<(i64, i64)> = d.xy();
        pts.sort_by(|a, b| order.cmp(*a, *b));
        let cells: Vec<Elem> = pts.iter().map(|&(x, y)| Elem::xy(x, y)).collect();
        let index: HashMap<Elem, usize> = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let (tx, ty) = rule.shape.s()[top].as_xy().unwrap();
        let (mut free, mut forced) = (Vec::new(), Vec::new());
        for (i, &(x, y)) in pts.iter().enumerate() {
            let g = Elem::xy(x - tx, y - ty);
            let block: Option<Vec<usize>> = rule.shape.s().iter().map(|s| index.get(&mul(&g, s)).copied()).collect();
            match block {
                Some(b) => forced.push((i, b, top)),
                None => free.push(i),
            }
        }
        Ok(Envelope { cells, index, free, forced })
    }

    pub fn cells(&self) -> &[Elem] {
        &self.cells
    }

    pub fn free_cells(&self) -> Vec<Elem> {
        self.free.iter().map(|&i| self.cells[i].clone()).collect()
    }

    pub fn count(&self, rule: &TepRule) -> Result<u64, CoreError> {
        (rule.q as u64)
            .checked_pow(self.free.len() as u32)
            .filter(|&n| n <= ENUMERATION_BUDGET)
            .ok_or_else(|| CoreError::Budget(format!("{}^{} patterns exceed {}", rule.q, self.free.len(), ENUMERATION_BUDGET)))
    }

    /// Every locally valid pattern, as symbol vectors indexed like `cells`.
    pub fn patterns(&self, rule: &TepRule) -> Result<Vec<Vec<u8>>, CoreError> {
        let n = self.count(rule)?;
        let mut out = Vec::with_capacity(n as usize);
        let mut buf = vec![0u8; rule.shape.s().len()];
        for free_vals in tuples(rule.q, self.free.len()) {
            let mut v = vec![0u8; self.cells.len()];
            for (&i, &a) in self.free.iter().zip(&free_vals) {
                v[i] = a;
            }
            for (i, block, top) in &self.forced {
                for (slot, &j) in buf.iter_mut().zip(block) {
                    *slot = v[j];
                }
                v[*i] = rule.complete(&buf, *top);
            }
            out.push(v);
        }
        Ok(out)
    }

    fn positions(&self, p: &Pattern) -> Result<Vec<usize>, CoreError> {
        p.iter()
            .map(|x| self.index.get(x).copied().ok_or_else(|| CoreError::Contract(format!("{x} lies outside D"))))
            .collect()
    }
}

pub fn is_independent(rule: &TepRule, t: &Pattern, d: &Pattern) -> Result<bool, CoreError> {
    let env = Envelope::new(rule, d)?;
    let pos = env.positions(t)?;
    let seen: HashSet<Vec<u8>> = env.patterns(rule)?.iter().map(|v| pos.iter().map(|&i| v[i]).collect()).collect();
    Ok(seen.len() as u64 == (rule.q as u64).pow(t.len() as u32))
}

/// Cells of D whose symbol is a function of the symbols on P.
pub fn spanned_set(rule: &TepRule, p: &Pattern, d: &Pattern) -> Result<Pattern, CoreError> {
    let env = Envelope::new(rule, d)?;
    let pos = env.positions(p)?;
    let mut first: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    let mut determined = vec![true; env.cells.len()];
    for v in env.patterns(rule)? {
        let key: Vec<u8> = pos.iter().map(|&i| v[i]).collect();
        match first.get(&key) {
            Some(w) => {
                for (flag, (a, b)) in determined.iter_mut().zip(v.iter().zip(w)) {
                    *flag &= a == b;
                }
            }
            None => {
                first.insert(key, v);
            }
        }
    }
    Ok((0..env.cells.len()).filter(|&i| determined[i]).map(|i| env.cells[i].clone()).collect())
}

pub fn is_filling_basis(rule: &TepRule, t: &Pattern, d: &Pattern) -> Result<bool, CoreError> {
    let (phi, _) = filling_closure(&GroupCtx::z2(), &rule.shape, t)?;
    Ok(phi == *d && is_independent(rule, t, d)?)
}

/// Largest independent subset of P, by brute force.
pub fn rank_indep(rule: &TepRule, p: &Pattern, d: &Pattern) -> Result<usize, CoreError> {
    subsets_by_size(p, true, |q| is_independent(rule, q, d))
}

/// Smallest subset of P spanning all of P, by brute force.
pub fn rank_span(rule: &TepRule, p: &Pattern, d: &Pattern) -> Result<usize, CoreError> {
    subsets_by_size(p, false, |q| Ok(p.is_subset(&spanned_set(rule, q, d)?)))
}

fn subsets_by_size(p: &Pattern, largest: bool, mut ok: impl FnMut(&Pattern) -> Result<bool, CoreError>) -> Result<usize, CoreError> {
    let cells: Vec<&Elem> = p.iter().collect();
    if cells.len() > 16 {
        return Err(CoreError::SizeLimit { what: "pattern", size: cells.len(), limit: 16 });
    }
    let mut sizes: Vec<usize> = (0..=cells.len()).collect();
    if largest {
        sizes.reverse();
    }
    for k in sizes {
        for m in crate::orbit::subsets(cells.len() as u32, k as u32) {
            let q: Pattern = (0..cells.len()).filter(|i| m >> i & 1 == 1).map(|i| cells[i].clone()).collect();
            if ok(&q)? {
                return Ok(k);
            }
        }
    }
    Err(CoreError::Internal("no subset qualifies".into()))
}

/// The natural bijection X|_P -> X|_Q for two bases of D, as pairs of
/// symbol vectors in the sorted cell orders of P and Q, sorted by the first.
pub fn base_change_bijection(rule: &TepRule, p: &Pattern, q: &Pattern, d: &Pattern) -> Result<Vec<(Vec<u8>, Vec<u8>)>, CoreError> {
    for b in [p, q] {
        if !is_independent(rule, b, d)? || spanned_set(rule, b, d)? != *d {
            return Err(CoreError::Contract(format!("{b:?} is not a basis of D")));
        }
    }
    let env = Envelope::new(rule, d)?;
    let (pp, pq) = (env.positions(p)?, env.positions(q)?);
    let mut out: Vec<(Vec<u8>, Vec<u8>)> = env
        .patterns(rule)?
        .iter()
        .map(|v| (pp.iter().map(|&i| v[i]).collect(), pq.iter().map(|&i| v[i]).collect()))
        .collect();
    out.sort();
    Ok(out)
}

/// A permutation of register contents reading and writing only `cells`.
/// `table[i]` is the image of the tuple with index i (first cell least
/// significant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplePermStep {
    pub cells: Vec<usize>,
    pub table: Vec<Vec<u8>>,
}

impl SimplePermStep {
    fn from_fn(cells: Vec<usize>, q: u8, f: impl Fn(&[u8]) -> Vec<u8>) -> SimplePermStep {
        let table = tuples(q, cells.len()).map(|t| f(&t)).collect();
        SimplePermStep { cells, table }
    }

    pub fn apply(&self, regs: &mut [u8], q: u8) {
        let idx = self.cells.iter().rev().fold(0usize, |acc, &c| acc * q as usize + regs[c] as usize);
        for (&c, &v) in self.cells.iter().zip(&self.table[idx]) {
            regs[c] = v;
        }
    }

    pub fn is_bijective(&self) -> bool {
        self.table.iter().collect::<HashSet<_>>().len() == self.table.len()
    }
}

/// Simple permutations carrying the symbols on the start basis to those on
/// the end of `trace`, one register per cell. Registers start in the sorted
/// order of `start` and end in the sorted order of the final pattern. Each
/// step touches at most 2 registers, or 3 when |A| = 2.
pub fn compile_simple_perms(rule: &TepRule, start: &Pattern, trace: &[MoveRecord]) -> Result<Vec<SimplePermStep>, CoreError> {
    let q = rule.q;
    let width = if q == 2 { 3 } else { 2 };
    let mut reg: HashMap<Elem, usize> = start.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut cur = start.clone();
    let mut steps = Vec::new();
    let s = rule.shape.s();
    for m in trace {
        cur = apply_move(&rule.shape, &cur, m)?;
        let v = reg.remove(&m.vacated).unwrap();
        let cells: Vec<Elem> = s.iter().map(|x| mul(&m.g, x)).collect();
        let missing = cells.iter().position(|c| *c == m.filled).unwrap();
        // S-index -> register, with the vacated cell's register standing in.
        let regs: Vec<Option<usize>> = cells.iter().map(|c| if *c == m.filled { None } else if *c == m.vacated { Some(v) } else { Some(reg[c]) }).collect();
        let touched: Vec<usize> = std::iter::once(v).chain(regs.iter().flatten().copied().filter(|&r| r != v)).collect();
        if touched.len() <= width {
            let rule_ = rule.clone();
            let regs_ = regs.clone();
            steps.push(SimplePermStep::from_fn(touched.clone(), q, move |t| {
                let val = |r: usize| t[touched.iter().position(|&x| x == r).unwrap()];
                let p: Vec<u8> = regs_.iter().map(|o| o.map(val).unwrap_or(0)).collect();
                let mut out = t.to_vec();
                out[0] = rule_.complete(&p, missing);
                out
            }));
        } else {
            steps.extend(additive_steps(rule, &regs, v, width)?);
        }
        reg.insert(m.filled.clone(), v);
    }
    // Sort registers into the order of the final pattern.
    let mut holder: Vec<usize> = cur.iter().map(|c| reg[c]).collect();
    for i in 0..holder.len() {
        if holder[i] != i {
            let j = holder.iter().position(|&r| r == i).unwrap();
            let (a, b) = (holder[i], i);
            steps.push(SimplePermStep::from_fn(vec![a, b], q, |t| vec![t[1], t[0]]));
            holder[j] = a;
            holder[i] = b;
        }
    }
    Ok(steps)
}

/// new = const - (v + other corners + f(non-corners)) as a chain of
/// additions into v.
fn additive_steps(rule: &TepRule, regs: &[Option<usize>], v: usize, width: usize) -> Result<Vec<SimplePermStep>, CoreError> {
    let q = rule.q;
    let (konst, with_f) = match &rule.kind {
        Kind::Sum(t) => (*t, None),
        Kind::WithF(f) => (0, Some(f.clone())),
        Kind::Table(..) => return Err(CoreError::Contract("no simple-permutation factorisation for table rules on this shape".into())),
    };
    let mut steps = Vec::new();
    let add = |a: u8, b: u8| (a + b) % q;
    let mut summed: Vec<usize> = Vec::new();
    for (i, r) in regs.iter().enumerate() {
        let Some(r) = *r else { continue };
        if r == v || (with_f.is_some() && !rule.corner_idx.contains(&i)) {
            continue;
        }
        summed.push(r);
        steps.push(SimplePermStep::from_fn(vec![v, r], q, move |t| vec![add(t[0], t[1]), t[1]]));
    }
    if let Some(f) = with_f {
        let others: Vec<usize> = rule.other_idx.iter().map(|&i| regs[i].unwrap()).collect();
        if others.len() + 1 > width {
            return Err(CoreError::Contract("f reads too many cells for a simple permutation".into()));
        }
        let cells: Vec<usize> = std::iter::once(v).chain(others.iter().copied()).collect();
        steps.push(SimplePermStep::from_fn(cells, q, move |t| {
            let mut out = t.to_vec();
            out[0] = add(t[0], f[&t[1..].to_vec()]);
            out
        }));
    }
    steps.push(SimplePermStep::from_fn(vec![v], q, move |t| vec![(konst + q - t[0]) % q]));
    Ok(steps)
}

/// Runs compiled steps on symbols given in the sorted order of the start.
pub fn run_simple_perms(steps: &[SimplePermStep], values: &[u8], q: u8) -> Vec<u8> {
    let mut regs = values.to_vec();
    for s in steps {
        s.apply(&mut regs, q);
    }
    regs
}
