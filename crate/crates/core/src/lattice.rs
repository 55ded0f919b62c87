//! Small helpers for planar work: points, affine frames and a board that
//! tracks which marbles belong to which component while emitting moves.

use std::collections::HashMap;

use crate::error::CoreError;
use crate::moves::MoveRecord;

pub type Pt = (i64, i64);

pub fn add(a: Pt, b: Pt) -> Pt {
    (a.0 + b.0, a.1 + b.1)
}

pub fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

/// Integer affine map p -> A p + t with det A = ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: [[i64; 2]; 2],
    pub t: Pt,
}

impl Affine {
    pub const ID: Affine = Affine { a: [[1, 0], [0, 1]], t: (0, 0) };

    pub fn apply(&self, p: Pt) -> Pt {
        (self.a[0][0] * p.0 + self.a[0][1] * p.1 + self.t.0, self.a[1][0] * p.0 + self.a[1][1] * p.1 + self.t.1)
    }

    /// self ∘ other
    pub fn then_after(&self, other: &Affine) -> Affine {
        let a = &self.a;
        let b = &other.a;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Affine { a: m, t: self.apply(other.t) }
    }

    pub fn inverse(&self) -> Affine {
        let [[p, q], [r, s]] = self.a;
        let det = p * s - q * r;
        debug_assert!(det == 1 || det == -1);
        let m = [[s * det, -q * det], [-r * det, p * det]];
        let lin = Affine { a: m, t: (0, 0) };
        let t = lin.apply(self.t);
        Affine { a: m, t: (-t.0, -t.1) }
    }

    pub fn translate(t: Pt) -> Affine {
        Affine { a: [[1, 0], [0, 1]], t }
    }
}

/// Who owns a marble during a constructive path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    Comp(usize),
    Pending,
}

/// The full marble set with ownership. Moves computed for one component's
/// marbles are replayed here; if the target already holds a pending marble,
/// that marble takes the vacated cell and nothing is emitted.
pub struct Board<'a> {
    pub owner: HashMap<Pt, Owner>,
    /// Emitted moves as (translate, from, to).
    pub out: Vec<(Pt, Pt, Pt)>,
    legal: &'a dyn Fn(Pt, Pt, &HashMap<Pt, Owner>) -> Option<Pt>,
}

impl<'a> Board<'a> {
    /// `legal(from, to, cells)` checks the move against the whole board and
    /// returns its translate.
    pub fn new(cells: impl IntoIterator<Item = Pt>, legal: &'a dyn Fn(Pt, Pt, &HashMap<Pt, Owner>) -> Option<Pt>) -> Self {
        Board { owner: cells.into_iter().map(|p| (p, Owner::Pending)).collect(), out: Vec::new(), legal }
    }

    pub fn owned_by(&self, c: usize) -> Vec<Pt> {
        let mut v: Vec<Pt> = self.owner.iter().filter(|(_, o)| **o == Owner::Comp(c)).map(|(p, _)| *p).collect();
        v.sort();
        v
    }

    pub fn pending(&self) -> Vec<Pt> {
        let mut v: Vec<Pt> = self.owner.iter().filter(|(_, o)| **o == Owner::Pending).map(|(p, _)| *p).collect();
        v.sort();
        v
    }

    pub fn set_owner(&mut self, p: Pt, o: Owner) {
        *self.owner.get_mut(&p).expect("marble present") = o;
    }

    /// Replays a move already performed on component `c`'s own marbles.
    pub fn play(&mut self, c: usize, from: Pt, to: Pt) -> Result<(), CoreError> {
        if self.owner.get(&from) != Some(&Owner::Comp(c)) {
            return Err(CoreError::Internal(format!("component {c} has no marble at {from:?}")));
        }
        match self.owner.get(&to).copied() {
            None => {
                let Some(g) = (self.legal)(from, to, &self.owner) else {
                    return Err(CoreError::Internal(format!("move {from:?} -> {to:?} is not legal on the board")));
                };
                self.owner.remove(&from);
                self.owner.insert(to, Owner::Comp(c));
                self.out.push((g, from, to));
            }
            Some(Owner::Pending) => {
                self.owner.insert(from, Owner::Pending);
                self.owner.insert(to, Owner::Comp(c));
            }
            Some(Owner::Comp(d)) => {
                return Err(CoreError::Internal(format!("move of component {c} hits component {d} at {to:?}")));
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> Vec<MoveRecord> {
        self.out.iter().map(|&(g, f, t)| MoveRecord::xy(g, f, t)).collect()
    }
}
