use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fraisse_core::doc::{self, SequenceDoc};
use fraisse_core::{CycleDivision, Error, Graph, InverseSequence, Morphism, OrientedCycle, Vertex, VertexSet};
use serde_json::Value;

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn base(path: &Path) -> PathBuf {
    doc::base_dir(path)
}

pub fn graph(path: &Path) -> Result<Arc<Graph>, CliError> {
    Ok(Arc::new(doc::graph_from_json(&read(path)?)?))
}

pub fn morphism(path: &Path) -> Result<Morphism, CliError> {
    Ok(doc::morphism_from_json(&read(path)?, &base(path))?)
}

pub fn sequence(path: &Path, confluent: bool) -> Result<InverseSequence, CliError> {
    let d: SequenceDoc = serde_json::from_str(&read(path)?).map_err(|e| Error::Document(e.to_string()))?;
    Ok(if confluent {
        d.to_sequence()?
    } else {
        d.to_homomorphism_sequence()?
    })
}

pub fn pair(paths: &[PathBuf]) -> Result<(&Path, &Path), CliError> {
    match paths {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!(
            "expected exactly two inputs, got {}",
            paths.len()
        ))),
    }
}

pub fn tokens(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

pub fn vertices(g: &Graph, list: &str) -> Result<Vec<Vertex>, CliError> {
    let ts = tokens(list);
    if ts.is_empty() {
        return Err(CliError::Usage("empty vertex list".into()));
    }
    Ok(ts.iter().map(|t| g.vertex(t)).collect::<Result<_, _>>()?)
}

pub fn set(g: &Graph, list: &str) -> Result<VertexSet, CliError> {
    Ok(vertices(g, list)?.into_iter().collect())
}

pub fn edge(g: &Graph, list: &str) -> Result<(Vertex, Vertex), CliError> {
    match vertices(g, list)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("`{list}` is not an edge `a,b`"))),
    }
}

pub fn cycle_in(g: &Graph, list: &str) -> Result<OrientedCycle, CliError> {
    Ok(OrientedCycle::from_ambient(g, &vertices(g, list)?)?)
}

/// The whole graph `g` as an oriented cycle.
pub fn orient(g: &Arc<Graph>, list: Option<&str>) -> Result<OrientedCycle, CliError> {
    Ok(match list {
        Some(l) => OrientedCycle::from_tokens(g.clone(), &tokens(l))?,
        None => OrientedCycle::canonical(g.clone())?,
    })
}

pub fn division(g: &Graph, path: &Path) -> Result<CycleDivision, CliError> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::Document(e.to_string()))?;
    let part = |key: &str| -> Result<VertexSet, CliError> {
        let items = v
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Document(format!("division needs an array `{key}`")))?;
        items
            .iter()
            .map(|t| {
                let s = match t {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(Error::Document(format!("bad token in `{key}`")).into()),
                };
                Ok(g.vertex(&s)?)
            })
            .collect()
    };
    let div = CycleDivision {
        h: part("h")?,
        k: part("k")?,
        c: part("c")?,
        d: part("d")?,
    };
    div.validate(g)?;
    Ok(div)
}
