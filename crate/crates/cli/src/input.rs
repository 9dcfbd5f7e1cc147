use std::fmt;
use std::path::Path;

use clasper_core::braid::BraidWord;
use clasper_core::clasper::{ClasperGraph, Port};
use clasper_core::free_group::FreeWord;
use clasper_core::knot::{LinkDiagram, MoveSite};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Input that could not be read or does not match its schema. Exits with 2.
#[derive(Debug)]
pub struct Malformed(pub String);

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Malformed {}

pub fn malformed(msg: impl Into<String>) -> anyhow::Error {
    Malformed(msg.into()).into()
}

/// Inline JSON if the argument looks like JSON, otherwise a file path.
pub fn read_json(arg: &str, what: &str) -> anyhow::Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| malformed(format!("{what}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| malformed(format!("{what}: invalid JSON: {e}")))
}

/// Strips an optional `schema` tag after checking it.
fn untag(mut v: Value, schema: &str, what: &str) -> anyhow::Result<Value> {
    if let Some(obj) = v.as_object_mut() {
        if let Some(s) = obj.remove("schema") {
            if s.as_str() != Some(schema) {
                return Err(malformed(format!("{what}: schema {s}, expected {schema:?}")));
            }
        }
    }
    Ok(v)
}

fn decode<T: DeserializeOwned>(v: Value, schema: &str, what: &str) -> anyhow::Result<T> {
    let v = untag(v, schema, what)?;
    serde_json::from_value(v).map_err(|e| malformed(format!("{what}: does not match {schema}: {e}")))
}

pub fn clasper(arg: &str) -> anyhow::Result<ClasperGraph> {
    decode(read_json(arg, "clasper")?, "clasper.v1", "clasper")
}

pub fn marking(arg: &str) -> anyhow::Result<Vec<Port>> {
    decode(read_json(arg, "marking")?, "clasper.v1", "marking")
}

pub fn braid(arg: &str) -> anyhow::Result<BraidWord> {
    let b: BraidWord = decode(read_json(arg, "braid")?, "braid.v1", "braid")?;
    b.validated().map_err(|e| malformed(format!("braid: {e}")))
}

pub fn word(arg: &str) -> anyhow::Result<FreeWord> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct W {
        rank: usize,
        word: Vec<i32>,
    }
    let w: W = decode(read_json(arg, "word")?, "word.v1", "word")?;
    if let Some(l) = w.word.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > w.rank) {
        return Err(malformed(format!("word: letter {l} out of range for rank {}", w.rank)));
    }
    Ok(FreeWord::from_letters(w.rank, w.word))
}

pub fn site(arg: &str) -> anyhow::Result<MoveSite> {
    decode(read_json(arg, "site")?, "site.v1", "site")
}

pub fn sites(arg: &str) -> anyhow::Result<Vec<MoveSite>> {
    decode(read_json(arg, "sites")?, "site.v1", "sites")
}

/// A PD diagram from inline JSON, a file, or a builtin name.
pub fn pd(arg: &str, check: bool) -> anyhow::Result<LinkDiagram> {
    let t = arg.trim_start();
    if !t.starts_with('{') && !Path::new(arg).exists() {
        if let Some(d) = LinkDiagram::builtin(arg) {
            return Ok(d);
        }
    }
    let d = LinkDiagram::from_json(&read_json(arg, "pd")?).map_err(|e| malformed(format!("pd: {e}")))?;
    if check {
        d.ensure_valid().map_err(|e| malformed(format!("pd: {e}")))?;
    }
    Ok(d)
}

pub fn builtin(name: &str) -> anyhow::Result<LinkDiagram> {
    LinkDiagram::builtin(name).ok_or_else(|| {
        malformed(format!("unknown builtin {name:?}; known: {}", LinkDiagram::BUILTINS.join(", ")))
    })
}

pub fn index_list(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| malformed(format!("bad index {p:?} in {s:?}"))))
        .collect()
}
