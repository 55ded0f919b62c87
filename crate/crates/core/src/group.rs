//! Group elements for the free abelian groups Z^d and the free groups F_k.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::CoreError;

pub type Coords = SmallVec<[i64; 3]>;
pub type Letters = SmallVec<[i32; 8]>;

/// An element of Z^d (coordinates) or of a free group (a freely reduced
/// word over signed generator indices, `1` is `a`, `-1` is `a'`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Lat(Coords),
    Word(Letters),
}

/// The ambient group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupCtx {
    #[serde(rename = "Zd")]
    FreeAbelian { d: usize },
    #[serde(rename = "Fk")]
    Free { k: usize },
}

impl Elem {
    pub fn xy(x: i64, y: i64) -> Elem {
        Elem::Lat(smallvec::smallvec![x, y])
    }

    pub fn lat(c: &[i64]) -> Elem {
        Elem::Lat(c.iter().copied().collect())
    }

    /// Builds a word, reducing it freely.
    pub fn word(w: &[i32]) -> Elem {
        Elem::Word(reduce(w))
    }

    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            Elem::Lat(c) => Some(c),
            Elem::Word(_) => None,
        }
    }

    pub fn letters(&self) -> Option<&[i32]> {
        match self {
            Elem::Word(w) => Some(w),
            Elem::Lat(_) => None,
        }
    }

    /// The planar coordinates, for elements of Z^2.
    pub fn as_xy(&self) -> Option<(i64, i64)> {
        match self {
            Elem::Lat(c) if c.len() == 2 => Some((c[0], c[1])),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Elem::Lat(c) => c.iter().all(|&v| v == 0),
            Elem::Word(w) => w.is_empty(),
        }
    }
}

/// Free reduction of a letter sequence.
pub fn reduce(w: &[i32]) -> Letters {
    let mut out = Letters::new();
    for &l in w {
        debug_assert!(l != 0);
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl GroupCtx {
    pub fn z2() -> GroupCtx {
        GroupCtx::FreeAbelian { d: 2 }
    }

    pub fn identity(&self) -> Elem {
        match *self {
            GroupCtx::FreeAbelian { d } => Elem::Lat(smallvec::smallvec![0; d]),
            GroupCtx::Free { .. } => Elem::Word(Letters::new()),
        }
    }

    pub fn check(&self, x: &Elem) -> Result<(), CoreError> {
        match (self, x) {
            (GroupCtx::FreeAbelian { d }, Elem::Lat(c)) if c.len() == *d => Ok(()),
            (GroupCtx::Free { k }, Elem::Word(w)) => {
                let k = *k as i32;
                if w.iter().any(|&l| l == 0 || l.abs() > k) {
                    return Err(CoreError::Contract(format!("letter out of range in {x}")));
                }
                if w.windows(2).any(|p| p[0] == -p[1]) {
                    return Err(CoreError::Contract(format!("word {x} is not reduced")));
                }
                Ok(())
            }
            _ => Err(CoreError::Contract(format!("{x} does not belong to {self:?}"))),
        }
    }

    /// Group law. Mixed kinds are a contract violation.
    pub fn multiply(&self, x: &Elem, y: &Elem) -> Result<Elem, CoreError> {
        self.check(x)?;
        self.check(y)?;
        Ok(mul(x, y))
    }

    pub fn inverse(&self, x: &Elem) -> Result<Elem, CoreError> {
        self.check(x)?;
        Ok(inv(x))
    }

    pub fn generators(&self) -> Vec<Elem> {
        match *self {
            GroupCtx::FreeAbelian { d } => (0..d)
                .map(|i| {
                    let mut c: Coords = smallvec::smallvec![0; d];
                    c[i] = 1;
                    Elem::Lat(c)
                })
                .collect(),
            GroupCtx::Free { k } => (1..=k as i32).map(|l| Elem::word(&[l])).collect(),
        }
    }
}

/// Unchecked product; callers guarantee matching kinds.
pub fn mul(x: &Elem, y: &Elem) -> Elem {
    match (x, y) {
        (Elem::Lat(a), Elem::Lat(b)) => Elem::Lat(a.iter().zip(b).map(|(p, q)| p + q).collect()),
        (Elem::Word(a), Elem::Word(b)) => {
            let mut out: Letters = a.clone();
            for &l in b {
                if out.last() == Some(&-l) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            Elem::Word(out)
        }
        _ => panic!("mixed group kinds: {x} and {y}"),
    }
}

pub fn inv(x: &Elem) -> Elem {
    match x {
        Elem::Lat(a) => Elem::Lat(a.iter().map(|v| -v).collect()),
        Elem::Word(w) => Elem::Word(w.iter().rev().map(|l| -l).collect()),
    }
}

/// `x * y^-1`
pub fn div(x: &Elem, y: &Elem) -> Elem {
    mul(x, &inv(y))
}

/// Witness that S lies in a coset a<b>c of an infinite cyclic subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearWitness {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Linearity {
    Linear(LinearWitness),
    NotLinear,
    /// No witness with |b| within the word-length budget.
    NotFoundWithinBudget,
}

/// Default budget on the length of `b` for free groups.
pub const FREE_LINEARITY_BUDGET: usize = 8;

/// Decides whether S sits in a coset of an infinite cyclic subgroup.
///
/// In Z^d this is collinearity. In F_k, S ⊆ a<b>c iff every s0^-1 s lies in
/// one maximal cyclic subgroup, whose generator is the root of any
/// nontrivial member. The root is found exactly; `budget` only caps the
/// length of the reported `b`.
pub fn cyclic_coset_membership(ctx: &GroupCtx, s: &[Elem], budget: usize) -> Result<Linearity, CoreError> {
    if s.is_empty() {
        return Err(CoreError::Contract("empty set".into()));
    }
    for x in s {
        ctx.check(x)?;
    }
    let s0 = &s[0];
    match *ctx {
        GroupCtx::FreeAbelian { d } => {
            let diffs: Vec<Vec<i64>> = s
                .iter()
                .map(|x| {
                    let (a, b) = (x.coords().unwrap(), s0.coords().unwrap());
                    a.iter().zip(b).map(|(p, q)| p - q).collect()
                })
                .collect();
            let dir = match diffs.iter().find(|v| v.iter().any(|&c| c != 0)) {
                None => {
                    let b = ctx.generators().into_iter().next().unwrap_or_else(|| ctx.identity());
                    if d == 0 {
                        return Ok(Linearity::NotLinear);
                    }
                    return Ok(Linearity::Linear(LinearWitness { a: s0.clone(), b, c: ctx.identity() }));
                }
                Some(v) => {
                    let g = v.iter().fold(0i64, |g, &c| gcd(g, c.abs()));
                    v.iter().map(|c| c / g).collect::<Vec<i64>>()
                }
            };
            let lead = dir.iter().position(|&c| c != 0).unwrap();
            for v in &diffs {
                if v[lead] % dir[lead] != 0 {
                    return Ok(Linearity::NotLinear);
                }
                let t = v[lead] / dir[lead];
                if v.iter().zip(&dir).any(|(c, u)| *c != t * u) {
                    return Ok(Linearity::NotLinear);
                }
            }
            Ok(Linearity::Linear(LinearWitness { a: s0.clone(), b: Elem::lat(&dir), c: ctx.identity() }))
        }
        GroupCtx::Free { .. } => {
            let rel: Vec<Elem> = s.iter().map(|x| mul(&inv(s0), x)).collect();
            let Some(first) = rel.iter().find(|x| !x.is_identity()) else {
                let b = Elem::word(&[1]);
                return Ok(Linearity::Linear(LinearWitness { a: s0.clone(), b, c: ctx.identity() }));
            };
            let root = free_root(first);
            let root_inv = inv(&root);
            for t in &rel {
                if t.is_identity() {
                    continue;
                }
                let r = free_root(t);
                if r != root && r != root_inv {
                    return Ok(Linearity::NotLinear);
                }
            }
            if root.letters().unwrap().len() > budget {
                return Ok(Linearity::NotFoundWithinBudget);
            }
            Ok(Linearity::Linear(LinearWitness { a: s0.clone(), b: root, c: ctx.identity() }))
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The generator of the maximal cyclic subgroup containing a nontrivial
/// reduced word: w = u r^m u^-1 with r cyclically reduced and primitive.
pub fn free_root(w: &Elem) -> Elem {
    let l = w.letters().expect("word");
    let mut i = 0;
    let mut j = l.len();
    while j - i >= 2 && l[i] == -l[j - 1] {
        i += 1;
        j -= 1;
    }
    let core = &l[i..j];
    let n = core.len();
    let period = (1..=n).find(|&p| n % p == 0 && (0..n).all(|t| core[t] == core[t % p])).unwrap_or(n);
    let mut out: Vec<i32> = l[..i].to_vec();
    out.extend_from_slice(&core[..period]);
    out.extend(l[..i].iter().rev().map(|x| -x));
    Elem::word(&out)
}

// Generators print as a b c d f g ...; 'e' is kept for the identity.
fn letter_char(l: i32) -> char {
    let mut i = l.unsigned_abs() as u8 - 1;
    if i >= 4 {
        i += 1;
    }
    (b'a' + i) as char
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Lat(c) => {
                write!(f, "[")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Elem::Word(w) if w.is_empty() => write!(f, "e"),
            Elem::Word(w) => {
                for (i, &l) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", letter_char(l))?;
                    if l < 0 {
                        write!(f, "'")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses "a b' a", "ab'a", "e" or "" into a reduced word.
pub fn parse_word(s: &str) -> Result<Elem, CoreError> {
    let mut out = Vec::new();
    let t = s.trim();
    if t == "e" || t.is_empty() {
        return Ok(Elem::word(&[]));
    }
    let mut chars = t.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_whitespace() {
            continue;
        }
        if !ch.is_ascii_lowercase() || ch == 'e' {
            return Err(CoreError::Parse(format!("bad letter {ch:?} in word {s:?}")));
        }
        let mut idx = (ch as u8 - b'a') as i32 + 1;
        if ch > 'e' {
            idx -= 1;
        }
        let mut sign = 1;
        while matches!(chars.peek(), Some('\'') | Some('⁻')) {
            let c = chars.next().unwrap();
            if c == '⁻' {
                // accept "⁻¹"
                if chars.next() != Some('¹') {
                    return Err(CoreError::Parse(format!("bad inverse marker in {s:?}")));
                }
            }
            sign = -sign;
        }
        out.push(sign * idx);
    }
    Ok(Elem::word(&out))
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Elem::Lat(c) => {
                let mut seq = ser.serialize_seq(Some(c.len()))?;
                for v in c {
                    seq.serialize_element(v)?;
                }
                seq.end()
            }
            Elem::Word(_) => ser.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Elem, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Lat(Vec<i64>),
            Word(String),
        }
        match Raw::deserialize(de)? {
            Raw::Lat(c) => Ok(Elem::lat(&c)),
            Raw::Word(s) => parse_word(&s).map_err(de::Error::custom),
        }
    }
}
