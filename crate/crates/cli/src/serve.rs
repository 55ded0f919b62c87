//! One request per line in, one response per line out.
//!
//! Requests are documents with an `op` and an optional `id` that is echoed:
//! `{"id":1,"op":"apply","pattern":[[0,0],[1,0]],"move":{"g":[0,0],"from":[1,0],"to":[0,1]}}`.
//! Responses carry `"ok":true` and the result fields, or `"ok":false` and an
//! `error` message. A bad request never ends the session.

use serde_json::{json, Value};
use solitaire_core::io::Document;
use solitaire_core::MoveRecord;

use crate::{ops, Fail};

fn answer(req: &Value) -> Result<Value, Fail> {
    let op = req.get("op").and_then(Value::as_str).ok_or_else(|| Fail::Usage("missing \"op\"".into()))?;
    let doc: Document = serde_json::from_value(req.clone()).map_err(|e| Fail::Usage(e.to_string()))?;
    match op {
        "legal_moves" => ops::moves(&doc),
        "apply" => {
            let m: MoveRecord = serde_json::from_value(req.get("move").cloned().ok_or_else(|| Fail::Usage("missing \"move\"".into()))?)
                .map_err(|e| Fail::Usage(e.to_string()))?;
            ops::apply(&doc, &m)
        }
        "fill" => ops::fill(&doc, None),
        "identify" => ops::identify_labelled(&doc, ops::kind_of(&doc)?),
        "path" => ops::path(&doc, ops::kind_of(&doc)?),
        other => Err(Fail::Usage(format!("unknown op {other:?}"))),
    }
}

pub fn handle(line: &str) -> String {
    let req: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return json!({"ok": false, "error": format!("malformed JSON at column {}: {e}", e.column())}).to_string(),
    };
    let mut out = match answer(&req) {
        Ok(Value::Object(mut m)) => {
            m.insert("ok".into(), json!(true));
            Value::Object(m)
        }
        Ok(v) => json!({"ok": true, "result": v}),
        Err(Fail::Usage(e)) | Err(Fail::Domain(e)) => json!({"ok": false, "error": e}),
    };
    if let Some(id) = req.get("id") {
        out["id"] = id.clone();
    }
    out.to_string()
}
