//! Report documents: deterministic, self-contained (inputs embedded), and
//! re-parseable so `verify` can re-run a job from its report alone.

use sha2::{Digest, Sha256};

use super::doc::{obj, parse_document, render_document, Value};
use super::{Caps, CliError, NamedInput, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub seed: u64,
    pub caps: Caps,
    pub inputs: Vec<NamedInput>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub check_failed: bool,
}

/// `sha256:` digest over every input's name and exact bytes.
pub fn inputs_digest(inputs: &[NamedInput]) -> String {
    let mut hasher = Sha256::new();
    for input in inputs {
        hasher.update(input.name.as_bytes());
        hasher.update([0]);
        hasher.update(input.text.as_bytes());
        hasher.update([0]);
    }
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn render_report(r: &Report) -> String {
    let inputs = Value::List(
        r.inputs
            .iter()
            .map(|i| {
                obj(vec![
                    ("name", Value::Str(i.name.clone())),
                    ("source", Value::Str(i.source.clone())),
                    ("text", Value::Str(i.text.clone())),
                ])
            })
            .collect(),
    );
    let caps = obj(vec![
        ("node_cap", Value::Int(r.caps.node_cap as i64)),
        ("search_cap", Value::Int(r.caps.search_cap as i64)),
        ("window_cap", Value::Int(r.caps.window_cap as i64)),
    ]);
    let v = obj(vec![
        ("format_version", Value::Int(FORMAT_VERSION)),
        (
            "tool",
            Value::Str(format!("powderset {}", env!("CARGO_PKG_VERSION"))),
        ),
        ("command", Value::Str(r.command.clone())),
        ("args", r.args.clone()),
        ("seed", Value::Int(r.seed as i64)),
        ("caps", caps),
        ("inputs", inputs),
        ("inputs_digest", Value::Str(inputs_digest(&r.inputs))),
        ("result", r.result.clone()),
        ("witnesses", Value::List(r.witnesses.clone())),
        ("check_failed", Value::Bool(r.check_failed)),
    ]);
    render_document("report", &v)
}

fn want<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.field(key).ok_or_else(|| CliError::Schema {
        name: "report".into(),
        message: format!("missing field `{key}`"),
    })
}

pub fn parse_report(text: &str) -> Result<Report, CliError> {
    let (tag, v) = parse_document(text)?;
    if tag != "report" {
        return Err(CliError::Schema {
            name: "report".into(),
            message: format!("expected a `report` document, found `{tag}`"),
        });
    }
    let version = want(&v, "format_version")?.as_int();
    if version != Some(FORMAT_VERSION) {
        return Err(CliError::Schema {
            name: "report".into(),
            message: format!("unsupported format_version {version:?}"),
        });
    }
    let bad = |msg: &str| CliError::Schema {
        name: "report".into(),
        message: msg.into(),
    };
    let command = want(&v, "command")?
        .as_str()
        .ok_or_else(|| bad("`command` must be a string"))?
        .to_string();
    let args = want(&v, "args")?.clone();
    let seed = want(&v, "seed")?
        .as_int()
        .and_then(|i| u64::try_from(i).ok())
        .ok_or_else(|| bad("`seed` must be a non-negative integer"))?;
    let caps_v = want(&v, "caps")?;
    let cap_field = |key: &str| -> Result<u64, CliError> {
        caps_v
            .field(key)
            .and_then(Value::as_int)
            .and_then(|i| u64::try_from(i).ok())
            .ok_or_else(|| bad("caps fields must be non-negative integers"))
    };
    let caps = Caps {
        node_cap: cap_field("node_cap")?,
        search_cap: cap_field("search_cap")?,
        window_cap: cap_field("window_cap")? as usize,
    };
    let inputs = want(&v, "inputs")?
        .as_list()
        .ok_or_else(|| bad("`inputs` must be a list"))?
        .iter()
        .map(|i| {
            let get = |key: &str| -> Result<String, CliError> {
                i.field(key)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| bad("input entries need string name/source/text"))
            };
            Ok(NamedInput {
                name: get("name")?,
                source: get("source")?,
                text: get("text")?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let digest = want(&v, "inputs_digest")?
        .as_str()
        .ok_or_else(|| bad("`inputs_digest` must be a string"))?;
    if digest != inputs_digest(&inputs) {
        return Err(bad("inputs_digest does not match the embedded inputs"));
    }
    let result = want(&v, "result")?.clone();
    let witnesses = want(&v, "witnesses")?
        .as_list()
        .ok_or_else(|| bad("`witnesses` must be a list"))?
        .to_vec();
    let check_failed = want(&v, "check_failed")?
        .as_bool()
        .ok_or_else(|| bad("`check_failed` must be a boolean"))?;
    Ok(Report {
        command,
        args,
        seed,
        caps,
        inputs,
        result,
        witnesses,
        check_failed,
    })
}

/// Write via a sibling temp file and rename, so readers never observe a
/// partial report.
pub fn write_atomic(path: &std::path::Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp-report");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trip() {
        let report = Report {
            command: "powder-check".into(),
            args: obj(vec![("dummy", Value::Bool(false))]),
            seed: 7,
            caps: Caps::default(),
            inputs: vec![NamedInput {
                name: "monoid".into(),
                source: "builtin:m2".into(),
                text: "monoid {identity: 0, table: [[0, 1], [1, 1]]}".into(),
            }],
            result: obj(vec![("left_powder", Value::Bool(true))]),
            witnesses: vec![],
            check_failed: false,
        };
        let text = render_report(&report);
        let parsed = parse_report(&text).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn digest_detects_tampering() {
        let report = Report {
            command: "eval".into(),
            args: Value::Object(vec![]),
            seed: 0,
            caps: Caps::default(),
            inputs: vec![NamedInput {
                name: "universe".into(),
                source: "inline".into(),
                text: "universe {atoms: 0, rank: 2}".into(),
            }],
            result: Value::Bool(true),
            witnesses: vec![],
            check_failed: false,
        };
        let text = render_report(&report);
        let tampered = text.replace("atoms: 0", "atoms: 1");
        assert!(parse_report(&tampered).is_err());
    }
}
