use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use toporeal_core::catsite::Sieve;
use toporeal_core::gallery::Instance;
use toporeal_core::homology::{
    induced_homology_maps, invariant_factors, simplicial_homology, HomologyGroup, InducedMap,
    IntMatrix,
};
use toporeal_core::presheaf::{illusie_pi0_certificate, is_sheaf_set, sheafify_set, SetPresheaf};
use toporeal_core::realization::{self as re, covariant_descent_check, induced_map, DescentReport};
use toporeal_core::{Error, Int, Result};

use crate::load::Inputs;
use crate::{Format, Opts};

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json") + "\n",
        Format::Text => {
            let mut out = String::new();
            text_lines(v, "", &mut out);
            out
        }
    }
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                text_lines(x, &p, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => {
            let _ = writeln!(out, "{prefix}: {v}");
        }
    }
}

fn group_json(h: &HomologyGroup) -> Value {
    json!({"degree": h.degree, "group": h.to_string(), "betti": h.betti, "torsion": h.torsion})
}

fn summary(title: &str, lines: &[String]) -> String {
    let mut s = format!("{title}\n");
    for l in lines {
        let _ = writeln!(s, "  {l}");
    }
    s
}

fn pick(format: Format, v: &Value, text: String) -> String {
    match format {
        Format::Json => render(v, Format::Json),
        Format::Text => text,
    }
}

pub fn realize(o: &Opts) -> Result<String> {
    let inp = Inputs::load(o)?;
    let f = inp.functor()?;
    let g = inp.presheaf(0);
    let r = re::realize(inp.cat(), &f, &g, inp.dim_cap)?;
    let hom = simplicial_homology(r.set(), inp.max_deg)?;
    let v = json!({
        "command": "realize",
        "functor": inp.functor_name(),
        "dim_cap": inp.dim_cap,
        "max_deg": inp.max_deg,
        "trusted_up_to": inp.dim_cap - 1,
        "counts": r.set().counts(),
        "nondegenerate_counts": r.set().nondegenerate_counts(),
        "pi0": r.set().pi0().count,
        "homology": hom.iter().map(group_json).collect::<Vec<_>>(),
        "realization": r.to_json(),
    });
    let mut lines: Vec<String> = hom.iter().map(|h| format!("H{} = {h}", h.degree)).collect();
    lines.push(format!("pi0 = {}", r.set().pi0().count));
    lines.push(format!("trusted in degrees <= {}", inp.dim_cap - 1));
    Ok(pick(o.format, &v, summary("realization", &lines)))
}

fn set_presheaf_input(inp: &Inputs) -> Result<SetPresheaf> {
    let g = inp
        .presheaves
        .first()
        .ok_or_else(|| Error::input("--presheaf is required"))?;
    SetPresheaf::from_presheaf(g)
}

fn sizes_json(g: &SetPresheaf) -> Value {
    let m: Map<String, Value> = g
        .base()
        .objects()
        .iter()
        .zip(g.sizes())
        .map(|(o, n)| (o.clone(), json!(n)))
        .collect();
    Value::Object(m)
}

pub fn sheafify(o: &Opts) -> Result<String> {
    let inp = Inputs::load(o)?;
    let g = set_presheaf_input(&inp)?;
    let before = is_sheaf_set(&inp.site, &g)?;
    let (sh, unit) = sheafify_set(&inp.site, &g)?;
    let after = is_sheaf_set(&inp.site, &sh)?;
    let cat = inp.cat();
    let unit_json: Map<String, Value> = (0..cat.object_count())
        .map(|x| {
            let m: Map<String, Value> = g
                .value(x)
                .iter()
                .zip(unit.component(x))
                .map(|(a, b)| (a.clone(), json!(sh.value(x)[*b])))
                .collect();
            (cat.object(x).to_string(), Value::Object(m))
        })
        .collect();
    let v = json!({
        "command": "sheafify",
        "input_sizes": sizes_json(&g),
        "input_is_sheaf": before,
        "sizes": sizes_json(&sh),
        "sheaf": sh.to_json(),
        "unit": unit_json,
        "unit_bijective": unit.is_bijective(),
        "output_is_sheaf": after,
    });
    let mut lines: Vec<String> = cat
        .objects()
        .iter()
        .zip(g.sizes().iter().zip(sh.sizes()))
        .map(|(o, (a, b))| format!("{o}: {a} -> {b}"))
        .collect();
    lines.push(format!("input is a sheaf: {}", before.is_sheaf));
    lines.push(format!("unit bijective: {}", unit.is_bijective()));
    Ok(pick(o.format, &v, summary("sheafification", &lines)))
}

fn descent_line(r: &DescentReport) -> String {
    let verdict = if r.passes {
        "pass".to_string()
    } else {
        match r.first_mismatch {
            Some(d) => {
                let c = &r.degrees[d];
                format!("fail at H{d}: {} vs {}", c.realization, c.value)
            }
            None => format!("fail at pi0: {} vs {}", r.pi0_realization, r.pi0_value),
        }
    };
    format!("{} {}: {verdict}", r.object, r.sieve)
}

pub fn descent_check(o: &Opts) -> Result<String> {
    let inp = Inputs::load(o)?;
    let f = inp.functor()?;
    let cat = inp.cat();
    let targets: Vec<(usize, Sieve)> = match (&inp.sieve, inp.object) {
        (Some(s), _) => vec![(s.base, s.clone())],
        (None, Some(x)) => inp
            .site
            .coverings(x)
            .iter()
            .map(|s| (x, s.clone()))
            .collect(),
        (None, None) => (0..cat.object_count())
            .flat_map(|x| inp.site.coverings(x).iter().map(move |s| (x, s.clone())))
            .collect(),
    };
    let reports = targets
        .iter()
        .map(|(x, s)| covariant_descent_check(&inp.site, &f, *x, s, inp.max_deg))
        .collect::<Result<Vec<_>>>()?;
    let passes = reports.iter().all(|r| r.passes);
    let v = json!({
        "command": "descent-check",
        "functor": inp.functor_name(),
        "max_deg": inp.max_deg,
        "trusted_up_to": inp.max_deg,
        "verdict": if passes { "pass" } else { "fail" },
        "checks": reports,
        "note": toporeal_core::realization::DESCENT_NOTE,
    });
    let mut lines: Vec<String> = reports.iter().map(descent_line).collect();
    lines.push(format!(
        "verdict: {} (per-instance certificate)",
        if passes { "pass" } else { "fail" }
    ));
    Ok(pick(o.format, &v, summary("covariant descent", &lines)))
}

/// Groups agree and the induced matrix is invertible.
fn is_isomorphism(m: &InducedMap, a: &HomologyGroup, b: &HomologyGroup) -> bool {
    if a != b {
        return false;
    }
    if m.is_permutation() {
        return true;
    }
    if m.source_orders
        .iter()
        .chain(&m.target_orders)
        .any(|o| !o.is_zero())
    {
        return false;
    }
    let n = m.source_orders.len();
    let columns: Vec<Vec<(usize, Int)>> = (0..n)
        .map(|c| {
            (0..n)
                .filter(|r| !m.matrix[*r][c].is_zero())
                .map(|r| (r, m.matrix[r][c].clone()))
                .collect()
        })
        .collect();
    let factors = invariant_factors(&IntMatrix::from_columns(n, n, columns));
    factors.len() == n && factors.iter().all(|d| d.is_one())
}

pub fn compare(o: &Opts) -> Result<String> {
    let inp = Inputs::load(o)?;
    let f = inp.functor()?;
    let cat = inp.cat().clone();
    let (source, target, m, how) = match (inp.presheaves.len(), inp.has_map()) {
        (2, true) => {
            let (a, b) = (Arc::new(inp.presheaf(0)), Arc::new(inp.presheaf(1)));
            let m = inp.map(a.clone(), b.clone())?.expect("map present");
            (a, b, m, "given map")
        }
        (1, false) => {
            let g = set_presheaf_input(&inp)?;
            let (sh, unit) = sheafify_set(&inp.site, &g)?;
            let (a, b) = (
                Arc::new(g.to_presheaf(inp.dim_cap)),
                Arc::new(sh.to_presheaf(inp.dim_cap)),
            );
            let m = unit.to_presheaf_map(a.clone(), b.clone())?;
            (a, b, m, "unit of sheafification")
        }
        (1, true) => {
            let a = Arc::new(inp.presheaf(0));
            let m = inp.map(a.clone(), a.clone())?.expect("map present");
            (a.clone(), a, m, "given map")
        }
        _ => return Err(Error::input(
            "compare takes one presheaf (against its sheafification) or two presheaves and --map",
        )),
    };
    let cert = illusie_pi0_certificate(&inp.site, &m)?;
    let ra = re::realize(&cat, &f, &source, inp.dim_cap)?;
    let rb = re::realize(&cat, &f, &target, inp.dim_cap)?;
    let im = induced_map(&ra, &rb, &m)?;
    let ha = simplicial_homology(ra.set(), inp.max_deg)?;
    let hb = simplicial_homology(rb.set(), inp.max_deg)?;
    let maps = induced_homology_maps(&im, inp.max_deg)?;
    let mut all_iso = true;
    let mut lines = Vec::new();
    let degrees: Vec<Value> = maps
        .iter()
        .zip(ha.iter().zip(&hb))
        .map(|(mp, (a, b))| {
            let iso = is_isomorphism(mp, a, b);
            all_iso &= iso;
            lines.push(format!(
                "H{}: {a} -> {b}  {}{}",
                mp.degree,
                if iso { "isomorphic" } else { "not isomorphic" },
                if mp.is_permutation() {
                    ", identity up to permutation"
                } else {
                    ""
                }
            ));
            json!({
                "degree": mp.degree,
                "source": group_json(a),
                "target": group_json(b),
                "matrix": mp.matrix,
                "identity_up_to_permutation": mp.is_permutation(),
                "isomorphism": iso,
            })
        })
        .collect();
    let verdict = if all_iso {
        "isomorphic"
    } else {
        "not isomorphic"
    };
    lines.push(format!(
        "pi0 certificate: {} ({})",
        cert.certified, cert.scope
    ));
    lines.push(format!("verdict: {verdict} in degrees <= {}", inp.max_deg));
    let v = json!({
        "command": "compare",
        "functor": inp.functor_name(),
        "map": how,
        "dim_cap": inp.dim_cap,
        "max_deg": inp.max_deg,
        "trusted_up_to": inp.dim_cap - 1,
        "pi0_certificate": cert,
        "degrees": degrees,
        "verdict": verdict,
    });
    Ok(pick(o.format, &v, summary("comparison", &lines)))
}

pub fn validate(o: &Opts) -> Result<String> {
    let inp = Inputs::load(o)?;
    let f = inp.functor()?;
    let mut checked = vec![
        "site".to_string(),
        format!("functor ({})", inp.functor_name()),
    ];
    for i in 0..inp.presheaves.len() {
        checked.push(format!("presheaf {i}"));
    }
    if inp.has_map() {
        let (a, b) = (
            Arc::new(inp.presheaf(0)),
            Arc::new(inp.presheaf(inp.presheaves.len().saturating_sub(1))),
        );
        inp.map(a, b)?;
        checked.push("map".into());
    }
    if let Some(s) = &inp.sieve {
        if !inp.site.is_covering(s) {
            return Err(Error::validation(format!(
                "{} is not a covering sieve",
                s.label(inp.cat())
            )));
        }
        checked.push("sieve".into());
    }
    let v = json!({
        "command": "validate",
        "valid": true,
        "checked": checked,
        "objects": inp.cat().object_count(),
        "morphisms": inp.cat().morphism_count(),
        "functor_dim_cap": f.dim_cap(),
    });
    Ok(pick(o.format, &v, summary("valid", &checked)))
}

pub fn examples_bundle(inst: &Instance) -> Value {
    let files: Map<String, Value> = inst.files().into_iter().collect();
    json!({"name": inst.name, "description": inst.description, "files": files})
}
