//! JSON forms for simplicial sets and simplicial maps.
//!
//! Full form: `{"dim_cap": D, "simplices": {"0": [...]}, "faces": {"1": {"x": [...]}},
//! "degeneracies": {"0": {"v": [...]}}}`.
//! Generator form: `{"generators": {"0": [...], "1": [...]}, "faces": {"e": ["v", "w"]}}`.
//! A bare list of strings is a discrete set.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{GeneratorSet, SimplicialMap, SimplicialSet};
use crate::error::{Error, Result};

pub fn to_json(s: &SimplicialSet) -> Value {
    let cap = s.dim_cap();
    let mut simplices = Map::new();
    let mut faces = Map::new();
    let mut degeneracies = Map::new();
    for k in 0..=cap {
        simplices.insert(k.to_string(), json!(s.labels(k)));
        if k > 0 {
            let lv: Map<String, Value> = (0..s.count(k))
                .map(|x| {
                    let fs: Vec<&str> = (0..=k).map(|i| s.label(k - 1, s.face(k, x, i))).collect();
                    (s.label(k, x).to_string(), json!(fs))
                })
                .collect();
            faces.insert(k.to_string(), Value::Object(lv));
        }
        if k < cap {
            let lv: Map<String, Value> = (0..s.count(k))
                .map(|x| {
                    let ds: Vec<&str> = (0..=k)
                        .map(|i| s.label(k + 1, s.degeneracy(k, x, i)))
                        .collect();
                    (s.label(k, x).to_string(), json!(ds))
                })
                .collect();
            degeneracies.insert(k.to_string(), Value::Object(lv));
        }
    }
    json!({
        "dim_cap": cap,
        "simplices": simplices,
        "faces": faces,
        "degeneracies": degeneracies,
    })
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::input(format!("{what} must be a list")))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::input(format!("{what} entries must be strings")))
        })
        .collect()
}

fn level_key(k: usize) -> String {
    k.to_string()
}

/// Parses any accepted form. Generator and discrete forms expand to `cap`
/// (falling back to the file's `dim_cap`); full forms are truncated to `cap`.
pub fn from_json(v: &Value, cap: Option<usize>) -> Result<SimplicialSet> {
    if v.is_array() {
        let labels = string_list(v, "discrete set")?;
        let cap = cap.ok_or_else(|| Error::input("discrete set needs a dimension cap"))?;
        return Ok(SimplicialSet::discrete(&labels, cap));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input("simplicial set must be an object or a list"))?;
    let file_cap = match obj.get("dim_cap") {
        Some(c) => Some(
            c.as_u64()
                .ok_or_else(|| Error::input("dim_cap must be a non-negative integer"))?
                as usize,
        ),
        None => None,
    };
    if let Some(gens) = obj.get("generators") {
        let gens = gens
            .as_object()
            .ok_or_else(|| Error::input("generators must be an object keyed by dimension"))?;
        let top = gens
            .keys()
            .map(|k| {
                k.parse::<usize>()
                    .map_err(|_| Error::input(format!("bad dimension key `{k}`")))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut names = vec![Vec::new(); top + 1];
        for (k, lv) in gens {
            names[k.parse::<usize>().unwrap()] = string_list(lv, "generator list")?;
        }
        let mut faces = Vec::new();
        if let Some(f) = obj.get("faces") {
            for (g, fs) in f
                .as_object()
                .ok_or_else(|| Error::input("faces must be an object"))?
            {
                faces.push((g.clone(), string_list(fs, "face list")?));
            }
        }
        let cap = cap
            .or(file_cap)
            .ok_or_else(|| Error::input("generator form needs a dimension cap"))?;
        return GeneratorSet::new(names, &faces)?.expand(cap);
    }
    let file_cap = file_cap.ok_or_else(|| Error::input("full form needs dim_cap"))?;
    let simplices = obj
        .get("simplices")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::input("missing simplices"))?;
    let mut labels = Vec::with_capacity(file_cap + 1);
    for k in 0..=file_cap {
        let lv = match simplices.get(&level_key(k)) {
            Some(l) => string_list(l, "simplex list")?,
            None => Vec::new(),
        };
        labels.push(lv);
    }
    let index: Vec<HashMap<&str, usize>> = labels
        .iter()
        .map(|lv| {
            lv.iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), i))
                .collect()
        })
        .collect();
    for (k, lv) in index.iter().enumerate() {
        if lv.len() != labels[k].len() {
            return Err(Error::input(format!("repeated simplex label at level {k}")));
        }
    }
    let table = |section: &str, k: usize, target: usize| -> Result<Vec<usize>> {
        let lv = obj
            .get(section)
            .and_then(|s| s.get(level_key(k)))
            .and_then(Value::as_object)
            .ok_or_else(|| Error::input(format!("missing {section} at level {k}")))?;
        let mut out = Vec::with_capacity(labels[k].len() * (k + 1));
        for name in &labels[k] {
            let entries = string_list(
                lv.get(name)
                    .ok_or_else(|| Error::input(format!("missing {section} of `{name}`")))?,
                section,
            )?;
            if entries.len() != k + 1 {
                return Err(Error::input(format!("`{name}` needs {} {section}", k + 1)));
            }
            for e in entries {
                out.push(*index[target].get(e.as_str()).ok_or_else(|| {
                    Error::input(format!("unknown simplex `{e}` at level {target}"))
                })?);
            }
        }
        Ok(out)
    };
    let mut faces = Vec::with_capacity(file_cap + 1);
    let mut degeneracies = Vec::with_capacity(file_cap + 1);
    for k in 0..=file_cap {
        faces.push(if k == 0 {
            Vec::new()
        } else {
            table("faces", k, k - 1)?
        });
        degeneracies.push(if k == file_cap {
            Vec::new()
        } else {
            table("degeneracies", k, k + 1)?
        });
    }
    drop(index);
    let set = SimplicialSet::from_tables(file_cap, labels, faces, degeneracies)?;
    match cap {
        Some(c) if c != file_cap => set.truncate(c),
        _ => Ok(set),
    }
}

pub fn map_to_json(m: &SimplicialMap) -> Value {
    let (a, b) = (m.source(), m.target());
    let levels: Map<String, Value> = (0..=a.dim_cap())
        .map(|k| {
            let lv: Map<String, Value> = (0..a.count(k))
                .map(|x| {
                    (
                        a.label(k, x).to_string(),
                        Value::String(b.label(k, m.apply(k, x)).to_string()),
                    )
                })
                .collect();
            (level_key(k), Value::Object(lv))
        })
        .collect();
    Value::Object(levels)
}

/// Parses a level-keyed table (`{"0": {..}, "1": {..}}`) or a flat table of
/// images of nondegenerate simplices, which is extended along degeneracies.
pub fn map_from_json(
    v: &Value,
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
) -> Result<SimplicialMap> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input("simplicial map must be an object"))?;
    let level_keyed = !obj.is_empty()
        && obj
            .iter()
            .all(|(k, val)| k.parse::<usize>().is_ok() && val.is_object());
    let cap = source.dim_cap();
    let tgt_index: Vec<HashMap<&str, usize>> = (0..=cap).map(|k| target.index(k)).collect();
    let mut given: Vec<HashMap<usize, usize>> = vec![HashMap::new(); cap + 1];
    let mut resolve = |k: usize, from: &str, to: &Value| -> Result<()> {
        let to = to
            .as_str()
            .ok_or_else(|| Error::input("map images must be strings"))?;
        let x =
            source.index(k).get(from).copied().ok_or_else(|| {
                Error::input(format!("unknown source simplex `{from}` at level {k}"))
            })?;
        let y = *tgt_index[k]
            .get(to)
            .ok_or_else(|| Error::input(format!("unknown target simplex `{to}` at level {k}")))?;
        given[k].insert(x, y);
        Ok(())
    };
    if level_keyed {
        for (k, lv) in obj {
            let k: usize = k.parse().unwrap();
            if k > cap {
                continue;
            }
            for (from, to) in lv.as_object().unwrap() {
                resolve(k, from, to)?;
            }
        }
    } else {
        let src_index: Vec<HashMap<&str, usize>> = (0..=cap).map(|k| source.index(k)).collect();
        for (from, to) in obj {
            let levels: Vec<usize> = (0..=cap)
                .filter(|k| {
                    src_index[*k]
                        .get(from.as_str())
                        .is_some_and(|x| !source.is_degenerate(*k, *x))
                })
                .collect();
            match levels.as_slice() {
                [k] => resolve(*k, from, to)?,
                [] => {
                    return Err(Error::input(format!(
                        "`{from}` is not a nondegenerate source simplex"
                    )))
                }
                _ => {
                    return Err(Error::input(format!(
                        "`{from}` names simplices at several levels"
                    )))
                }
            }
        }
    }
    SimplicialMap::from_nondegenerate(source, target, |k, x| given[k].get(&x).copied())
}
