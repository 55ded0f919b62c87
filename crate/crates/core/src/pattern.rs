//! Patterns (finite sets of group elements) and shapes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::{Elem, GroupCtx};

/// A finite set of cells, kept sorted so equal sets compare and hash equal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Elem>")]
pub struct Pattern(Vec<Elem>);

impl From<Vec<Elem>> for Pattern {
    fn from(v: Vec<Elem>) -> Pattern {
        Pattern::from_cells(v)
    }
}

impl Pattern {
    pub fn new() -> Pattern {
        Pattern(Vec::new())
    }

    pub fn from_cells<I: IntoIterator<Item = Elem>>(it: I) -> Pattern {
        let mut v: Vec<Elem> = it.into_iter().collect();
        v.sort();
        v.dedup();
        Pattern(v)
    }

    pub fn from_xy<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Pattern {
        Pattern::from_cells(it.into_iter().map(|(x, y)| Elem::xy(x, y)))
    }

    pub fn cells(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.0.iter()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn insert(&mut self, x: Elem) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: &Elem) -> bool {
        match self.0.binary_search(x) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn union(&self, other: &Pattern) -> Pattern {
        Pattern::from_cells(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn difference(&self, other: &Pattern) -> Pattern {
        Pattern(self.0.iter().filter(|x| !other.contains(x)).cloned().collect())
    }

    pub fn intersection(&self, other: &Pattern) -> Pattern {
        Pattern(self.0.iter().filter(|x| other.contains(x)).cloned().collect())
    }

    pub fn is_subset(&self, other: &Pattern) -> bool {
        self.0.iter().all(|x| other.contains(x))
    }

    /// Planar points of a Z^2 pattern.
    pub fn xy(&self) -> Vec<(i64, i64)> {
        self.0.iter().map(|e| e.as_xy().expect("pattern in Z^2")).collect()
    }

    pub fn to_set(&self) -> BTreeSet<Elem> {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Elem> for Pattern {
    fn from_iter<I: IntoIterator<Item = Elem>>(it: I) -> Pattern {
        Pattern::from_cells(it)
    }
}

impl<'a> IntoIterator for &'a Pattern {
    type Item = &'a Elem;
    type IntoIter = std::slice::Iter<'a, Elem>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// The rule pair C ⊆ S. Moves relocate the hole of a one-hole translate gS
/// within gC; cells of S outside C only pivot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    s: Vec<Elem>,
    c: Vec<Elem>,
}

impl Shape {
    pub fn new(s: Vec<Elem>, c: Vec<Elem>) -> Result<Shape, CoreError> {
        let s = Pattern::from_cells(s).0;
        let c = Pattern::from_cells(c).0;
        if s.is_empty() || c.is_empty() {
            return Err(CoreError::Contract("shape sets must be nonempty".into()));
        }
        if c.iter().any(|x| s.binary_search(x).is_err()) {
            return Err(CoreError::Contract("C must be a subset of S".into()));
        }
        Ok(Shape { s, c })
    }

    /// C = S.
    pub fn full(s: Vec<Elem>) -> Result<Shape, CoreError> {
        Shape::new(s.clone(), s)
    }

    pub fn triangle() -> Shape {
        Shape::full(vec![Elem::xy(0, 0), Elem::xy(1, 0), Elem::xy(0, 1)]).unwrap()
    }

    pub fn square() -> Shape {
        Shape::full(vec![Elem::xy(0, 0), Elem::xy(1, 0), Elem::xy(0, 1), Elem::xy(1, 1)]).unwrap()
    }

    /// Plus shape whose centre only pivots.
    pub fn plus() -> Shape {
        let s = vec![Elem::xy(0, 0), Elem::xy(1, 0), Elem::xy(-1, 0), Elem::xy(0, 1), Elem::xy(0, -1)];
        let c = s[1..].to_vec();
        Shape::new(s, c).unwrap()
    }

    /// {e, a, b} in F_2.
    pub fn free_triangle() -> Shape {
        Shape::full(vec![Elem::word(&[]), Elem::word(&[1]), Elem::word(&[2])]).unwrap()
    }

    pub fn s(&self) -> &[Elem] {
        &self.s
    }

    pub fn c(&self) -> &[Elem] {
        &self.c
    }

    pub fn in_c(&self, x: &Elem) -> bool {
        self.c.binary_search(x).is_ok()
    }

    pub fn check(&self, ctx: &GroupCtx) -> Result<(), CoreError> {
        for x in &self.s {
            ctx.check(x)?;
        }
        Ok(())
    }
}
