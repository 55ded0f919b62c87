//! JSON documents shared by the command line and the `serve` loop.
//!
//! A document is one object with optional fields; anything absent falls back
//! to the triangle shape on Z^2.
//!
//! ```json
//! {"group":{"kind":"Zd","d":2},
//!  "shape":{"S":[[0,0],[1,0],[0,1]],"C":"same"},
//!  "pattern":[[0,0],[1,0]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::contour::BiInvariantOrder;
use crate::error::CoreError;
use crate::group::{Elem, GroupCtx};
use crate::moves::MoveTrace;
use crate::pattern::{Pattern, Shape};
use crate::tep::RuleSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CSpec {
    Same(SameTag),
    Cells(Vec<Elem>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SameTag {
    #[serde(rename = "same")]
    Same,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeSpec {
    /// "triangle", "square", "plus" or "free_triangle".
    Preset(String),
    Explicit {
        #[serde(rename = "S")]
        s: Vec<Elem>,
        #[serde(rename = "C", default = "same")]
        c: CSpec,
    },
}

fn same() -> CSpec {
    CSpec::Same(SameTag::Same)
}

impl ShapeSpec {
    pub fn build(&self) -> Result<Shape, CoreError> {
        match self {
            ShapeSpec::Preset(name) => match name.as_str() {
                "triangle" => Ok(Shape::triangle()),
                "square" => Ok(Shape::square()),
                "plus" => Ok(Shape::plus()),
                "free_triangle" => Ok(Shape::free_triangle()),
                other => Err(CoreError::Parse(format!("unknown shape preset {other:?}"))),
            },
            ShapeSpec::Explicit { s, c: CSpec::Same(_) } => Shape::full(s.clone()),
            ShapeSpec::Explicit { s, c: CSpec::Cells(c) } => Shape::new(s.clone(), c.clone()),
        }
    }

    pub fn of(shape: &Shape) -> ShapeSpec {
        let c = if shape.c() == shape.s() { same() } else { CSpec::Cells(shape.c().to_vec()) };
        ShapeSpec::Explicit { s: shape.s().to_vec(), c }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupCtx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Pattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<MoveTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<BiInvariantOrder>,
    /// Envelope for TEP questions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Pattern>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, CoreError> {
        serde_json::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))
    }

    pub fn shape(&self) -> Result<Shape, CoreError> {
        match &self.shape {
            Some(s) => s.build(),
            None => Ok(Shape::triangle()),
        }
    }

    /// The group named in the document, else the one its shape lives in.
    pub fn group(&self) -> Result<GroupCtx, CoreError> {
        if let Some(g) = self.group {
            return Ok(g);
        }
        let shape = self.shape()?;
        Ok(match &shape.s()[0] {
            Elem::Lat(c) => GroupCtx::FreeAbelian { d: c.len() },
            Elem::Word(_) => {
                let k = shape.s().iter().flat_map(|e| e.letters().unwrap_or(&[]).iter()).map(|l| l.unsigned_abs() as usize).max();
                GroupCtx::Free { k: k.unwrap_or(1).max(1) }
            }
        })
    }

    pub fn pattern(&self) -> Result<Pattern, CoreError> {
        self.pattern.clone().ok_or_else(|| CoreError::Parse("missing field \"pattern\"".into()))
    }
}

/// Trace files are either a bare list of moves or `{"trace": [...]}`.
pub fn parse_trace(text: &str) -> Result<MoveTrace, CoreError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Bare(MoveTrace),
        Wrapped { trace: MoveTrace },
    }
    match serde_json::from_str(text) {
        Ok(Raw::Bare(t)) | Ok(Raw::Wrapped { trace: t }) => Ok(t),
        Err(e) => Err(CoreError::Parse(e.to_string())),
    }
}
