//! Compact generator form: nondegenerate simplices plus their faces, expanded
//! through the Eilenberg–Zilber normal form `σ*(x)` with `x` nondegenerate and
//! `σ` a monotone surjection.

use std::collections::HashMap;

use super::model::{build_from_model, SimplexModel};
use super::SimplicialSet;
use crate::error::{Error, Result};

/// `σ*(x)` for generator `gen` of dimension `dim`; `sigma[j]` is the image of vertex `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    dim: usize,
    gen: usize,
    sigma: Vec<usize>,
}

impl NormalForm {
    /// Dimension and index of the underlying generator.
    pub fn generator(&self) -> (usize, usize) {
        (self.dim, self.gen)
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    fn level(&self) -> usize {
        self.sigma.len() - 1
    }

    fn degenerate(&self, j: usize) -> NormalForm {
        let mut sigma = self.sigma.clone();
        sigma.insert(j, sigma[j]);
        NormalForm {
            dim: self.dim,
            gen: self.gen,
            sigma,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    names: Vec<Vec<String>>,
    lookup: HashMap<String, (usize, usize)>,
    // faces[m][g] = [d_0 g, .., d_m g]
    faces: Vec<Vec<Vec<NormalForm>>>,
}

/// Canonical label `s_{j1}..s_{jt}(name)` with `j1 > .. > jt`, or `name` itself.
pub fn degeneracy_label(name: &str, sigma: &[usize]) -> String {
    let repeats: Vec<usize> = (0..sigma.len().saturating_sub(1))
        .filter(|j| sigma[*j] == sigma[j + 1])
        .collect();
    if repeats.is_empty() {
        return name.to_string();
    }
    let prefix: String = repeats.iter().rev().map(|j| format!("s{j}")).collect();
    format!("{prefix}({name})")
}

/// Splits `s1s0(x)` / `s1(s0(x))` into the operator list (outermost first) and `x`.
pub(crate) fn parse_degeneracy_expr(expr: &str) -> Option<(Vec<usize>, &str)> {
    let mut ops = Vec::new();
    let mut rest = expr;
    loop {
        let after = rest.strip_prefix('s')?;
        let digits = after.chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return None;
        }
        ops.push(after[..digits].parse().ok()?);
        rest = &after[digits..];
        if rest.starts_with('s') {
            continue;
        }
        let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
        if inner.starts_with('s') && inner.ends_with(')') {
            if let Some((more, base)) = parse_degeneracy_expr(inner) {
                ops.extend(more);
                return Some((ops, base));
            }
        }
        return Some((ops, inner));
    }
}

impl GeneratorSet {
    /// Generators by dimension, with faces given as label expressions.
    pub fn from_faces(names: Vec<Vec<String>>, faces: &[(&str, &[&str])]) -> Result<Self> {
        let owned: Vec<(String, Vec<String>)> = faces
            .iter()
            .map(|(g, fs)| (g.to_string(), fs.iter().map(|s| s.to_string()).collect()))
            .collect();
        GeneratorSet::new(names, &owned)
    }

    pub fn new(names: Vec<Vec<String>>, faces: &[(String, Vec<String>)]) -> Result<Self> {
        let mut lookup = HashMap::new();
        for (m, lv) in names.iter().enumerate() {
            for (g, name) in lv.iter().enumerate() {
                if lookup.insert(name.clone(), (m, g)).is_some() {
                    return Err(Error::input(format!("generator `{name}` listed twice")));
                }
            }
        }
        let mut set = GeneratorSet {
            names,
            lookup,
            faces: Vec::new(),
        };
        let face_map: HashMap<&str, &Vec<String>> =
            faces.iter().map(|(g, f)| (g.as_str(), f)).collect();
        if face_map.len() != faces.len() {
            return Err(Error::input("faces listed twice for a generator"));
        }
        for name in face_map.keys() {
            match set.lookup.get(*name) {
                Some((0, _)) => {
                    return Err(Error::input(format!("vertex `{name}` cannot have faces")))
                }
                None => {
                    return Err(Error::input(format!(
                        "faces given for unknown generator `{name}`"
                    )))
                }
                _ => {}
            }
        }
        let mut all_faces = vec![Vec::new()];
        for m in 1..set.names.len() {
            let mut lv = Vec::new();
            for name in &set.names[m] {
                let exprs = face_map
                    .get(name.as_str())
                    .ok_or_else(|| Error::input(format!("generator `{name}` has no faces")))?;
                if exprs.len() != m + 1 {
                    return Err(Error::input(format!(
                        "generator `{name}` needs {} faces",
                        m + 1
                    )));
                }
                let mut fs = Vec::with_capacity(m + 1);
                for e in exprs.iter() {
                    let nf = set.parse(e)?;
                    if nf.level() != m - 1 {
                        return Err(Error::input(format!(
                            "face `{e}` of `{name}` has the wrong dimension"
                        )));
                    }
                    fs.push(nf);
                }
                lv.push(fs);
            }
            all_faces.push(lv);
        }
        set.faces = all_faces;
        Ok(set)
    }

    pub fn discrete(labels: &[String]) -> Self {
        let lookup = labels
            .iter()
            .enumerate()
            .map(|(g, l)| (l.clone(), (0, g)))
            .collect();
        GeneratorSet {
            names: vec![labels.to_vec()],
            lookup,
            faces: vec![Vec::new()],
        }
    }

    pub fn names(&self) -> &[Vec<String>] {
        &self.names
    }

    fn parse(&self, expr: &str) -> Result<NormalForm> {
        if let Some(&(dim, gen)) = self.lookup.get(expr) {
            return Ok(NormalForm {
                dim,
                gen,
                sigma: (0..=dim).collect(),
            });
        }
        let (ops, base) = parse_degeneracy_expr(expr)
            .ok_or_else(|| Error::input(format!("unknown simplex `{expr}`")))?;
        let mut nf = self.parse(base)?;
        for j in ops.into_iter().rev() {
            if j > nf.level() {
                return Err(Error::input(format!(
                    "degeneracy s{j} out of range in `{expr}`"
                )));
            }
            nf = nf.degenerate(j);
        }
        Ok(nf)
    }

    fn face_of(&self, s: &NormalForm, i: usize) -> NormalForm {
        let mut sigma = s.sigma.clone();
        let v = sigma.remove(i);
        if sigma.contains(&v) {
            return NormalForm {
                dim: s.dim,
                gen: s.gen,
                sigma,
            };
        }
        let tau: Vec<usize> = sigma
            .iter()
            .map(|&w| if w > v { w - 1 } else { w })
            .collect();
        let inner = &self.faces[s.dim][s.gen][v];
        NormalForm {
            dim: inner.dim,
            gen: inner.gen,
            sigma: tau.iter().map(|&t| inner.sigma[t]).collect(),
        }
    }

    pub fn expand(&self, dim_cap: usize) -> Result<SimplicialSet> {
        build_from_model(self, dim_cap)
    }
}

fn surjections(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if cur.len() == k + 1 {
            if last == m {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = k + 1 - cur.len();
        for step in 0..=1 {
            let next = last + step;
            if next <= m && m - next < remaining {
                cur.push(next);
                rec(k, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if m <= k {
        rec(k, m, &mut vec![0], &mut out);
    }
    out
}

impl SimplexModel for GeneratorSet {
    type Simplex = NormalForm;

    fn simplices(&self, k: usize) -> Vec<NormalForm> {
        let mut out = Vec::new();
        for (m, lv) in self.names.iter().enumerate().take(k + 1) {
            let sig = surjections(k, m);
            for gen in 0..lv.len() {
                out.extend(sig.iter().map(|sigma| NormalForm {
                    dim: m,
                    gen,
                    sigma: sigma.clone(),
                }));
            }
        }
        out
    }

    fn face(&self, _k: usize, s: &NormalForm, i: usize) -> NormalForm {
        self.face_of(s, i)
    }

    fn degeneracy(&self, _k: usize, s: &NormalForm, i: usize) -> NormalForm {
        s.degenerate(i)
    }

    fn label(&self, _k: usize, s: &NormalForm) -> String {
        degeneracy_label(&self.names[s.dim][s.gen], &s.sigma)
    }
}
