//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use toporeal_core::catsite::{
    has_final_object, nerve, site_from_finite_space, FinCat, FiniteSpace, Sieve, Site,
};
use toporeal_core::gallery::{
    self, collapse_presheaf, interval_cover_space, pseudo_circle_space, sierpinski_space, z2,
};
use toporeal_core::homology::{
    induced_homology_maps, invariant_factors, normalized_chain_complex, simplicial_homology,
    smith_normal_form, HomologyGroup, IntMatrix,
};
use toporeal_core::presheaf::{
    gamma_prime_set, is_sheaf_set, sheafify_set, CovariantDiagram, Presheaf, SetPresheaf,
};
use toporeal_core::realization::{
    covariant_descent_check, induced_map, order_complex_functor, projector_maps, realize,
    triples_category,
};
use toporeal_core::sset::SimplicialSet;
use toporeal_core::Int;

type Outcome = Result<String, String>;
type Criterion = Box<dyn Fn() -> (bool, String)>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn homology(s: &SimplicialSet, cap: usize) -> Vec<HomologyGroup> {
    simplicial_homology(s, cap - 1).expect("homology")
}

fn show(hs: &[HomologyGroup]) -> String {
    hs.iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn direct_sum(a: &[HomologyGroup], b: &[HomologyGroup]) -> Vec<HomologyGroup> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut torsion: Vec<Int> = x.torsion.iter().chain(&y.torsion).cloned().collect();
            torsion.sort();
            HomologyGroup {
                degree: x.degree,
                betti: x.betti + y.betti,
                torsion,
            }
        })
        .collect()
}

fn space_site(space: &FiniteSpace) -> (Site, Arc<FinCat>) {
    let site = site_from_finite_space(space).expect("site");
    let cat = site.category().clone();
    (site, cat)
}

fn criterion_1() -> Outcome {
    const CAP: usize = 4;
    let mut rng = support::rng(1);
    let mut sizes = Vec::new();
    for trial in 0..10 {
        let n = 3 + trial % 4;
        let leq = support::random_poset_with_max(&mut rng, n);
        let cat = support::poset_category("x", &leq);
        let top = has_final_object(&cat).ok_or("no final object")?;
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, CAP);
        let r = realize(&cat, &f, &Presheaf::terminal(cat.clone(), CAP), CAP)
            .map_err(|e| e.to_string())?;
        let (lhs, rhs) = (homology(r.set(), CAP), homology(f.value(top), CAP));
        ensure(lhs == rhs, || {
            format!(
                "poset {trial}: Re has {} but F(max) has {}",
                show(&lhs),
                show(&rhs)
            )
        })?;
        let (a, b) = (r.set().pi0().count, f.value(top).pi0().count);
        ensure(a == b, || format!("poset {trial}: pi0 {a} vs {b}"))?;
        sizes.push(n);
    }
    Ok(format!(
        "10 posets of sizes {sizes:?}, pi0 and H0..H{} equal",
        CAP - 1
    ))
}

fn criterion_2() -> Outcome {
    const CAP: usize = 3;
    let mut rng = support::rng(2);
    let mut sites: Vec<(String, Arc<FinCat>, CovariantDiagram)> = Vec::new();
    for (name, space) in [
        ("sierpinski", sierpinski_space()),
        ("pseudo-circle", pseudo_circle_space()),
        ("interval", interval_cover_space()),
    ] {
        let f = order_complex_functor(&space, CAP).map_err(|e| e.to_string())?;
        sites.push((name.into(), f.base().clone(), f));
    }
    for i in 0..2 {
        let leq = support::random_order(&mut rng, 5, 0.45);
        let cat = support::poset_category("x", &leq);
        let f = support::random_subposet_diagram(&mut rng, &cat, &leq, CAP);
        sites.push((format!("random poset {i}"), cat, f));
    }
    let mut checked = 0;
    for (name, cat, f) in &sites {
        let n = cat.object_count();
        let reps: Vec<SetPresheaf> = (0..n)
            .map(|z| SetPresheaf::representable(cat.clone(), z))
            .collect();
        let value_h: Vec<Vec<HomologyGroup>> = (0..n).map(|z| homology(f.value(z), CAP)).collect();
        for z in 0..n {
            let r = realize(cat, f, &reps[z].to_presheaf(CAP), CAP).map_err(|e| e.to_string())?;
            let h = homology(r.set(), CAP);
            ensure(h == value_h[z], || {
                format!(
                    "{name}, Hom(-,{}): {} vs {}",
                    cat.object(z),
                    show(&h),
                    show(&value_h[z])
                )
            })?;
            checked += 1;
        }
        for z1 in 0..n {
            let z2 = (z1 * 2 + 1) % n;
            let sum = SetPresheaf::coproduct(&[&reps[z1], &reps[z2]]).map_err(|e| e.to_string())?;
            let r = realize(cat, f, &sum.to_presheaf(CAP), CAP).map_err(|e| e.to_string())?;
            let (h, expected) = (
                homology(r.set(), CAP),
                direct_sum(&value_h[z1], &value_h[z2]),
            );
            ensure(h == expected, || {
                format!(
                    "{name}, sum at {z1},{z2}: {} vs {}",
                    show(&h),
                    show(&expected)
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} representables and 2-fold sums over 5 poset sites"
    ))
}

fn criterion_3() -> Outcome {
    const CAP: usize = 3;
    let space = pseudo_circle_space();
    let (site, cat) = space_site(&space);
    let f = order_complex_functor(&space, CAP).map_err(|e| e.to_string())?;
    let f = CovariantDiagram::new(
        cat.clone(),
        f.values().to_vec(),
        (0..cat.morphism_count())
            .map(|m| f.action(m).clone())
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let mut sieves = 0;
    for x in 0..cat.object_count() {
        for s in site.coverings(x) {
            let rep =
                covariant_descent_check(&site, &f, x, s, CAP - 1).map_err(|e| e.to_string())?;
            ensure(rep.passes, || {
                format!(
                    "precondition: descent fails on {} of {}",
                    rep.sieve, rep.object
                )
            })?;
            sieves += 1;
        }
    }
    let top = cat.object_id("{a,b,c,d}").map_err(|e| e.to_string())?;
    let cases = [
        ("collapse", collapse_presheaf(&cat, top), ["Z", "Z"]),
        (
            "constant {0,1}",
            SetPresheaf::constant(cat.clone(), &["0".into(), "1".into()]),
            ["Z^2", "Z^2"],
        ),
    ];
    let mut found = Vec::new();
    for (name, g, expected) in cases {
        let (sh, unit) = sheafify_set(&site, &g).map_err(|e| e.to_string())?;
        let (a, b) = (Arc::new(g.to_presheaf(CAP)), Arc::new(sh.to_presheaf(CAP)));
        let m = unit
            .to_presheaf_map(a.clone(), b.clone())
            .map_err(|e| e.to_string())?;
        let ra = realize(&cat, &f, &a, CAP).map_err(|e| e.to_string())?;
        let rb = realize(&cat, &f, &b, CAP).map_err(|e| e.to_string())?;
        let im = induced_map(&ra, &rb, &m).map_err(|e| e.to_string())?;
        let maps = induced_homology_maps(&im, 1).map_err(|e| e.to_string())?;
        let (ha, hb) = (homology(ra.set(), 2), homology(rb.set(), 2));
        for k in 0..2 {
            ensure(ha[k].to_string() == expected[k] && hb[k] == ha[k], || {
                format!(
                    "{name}: H{k} {} -> {}, expected {}",
                    ha[k], hb[k], expected[k]
                )
            })?;
            ensure(maps[k].is_permutation(), || {
                format!(
                    "{name}: H{k} matrix {:?} is not a permutation",
                    maps[k].matrix
                )
            })?;
        }
        found.push(format!("{name} ({}, {})", ha[0], ha[1]));
    }
    Ok(format!(
        "descent on {sieves} covering sieves; {}; matrices are permutations",
        found.join(", ")
    ))
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    let mut non_sheaves = 0;
    for (space, seeds) in [
        (pseudo_circle_space(), 0..10u64),
        (sierpinski_space(), 10..20u64),
    ] {
        let (site, cat) = space_site(&space);
        for seed in seeds {
            let g = support::random_set_presheaf(&mut support::rng(4000 + seed), &cat);
            if !is_sheaf_set(&site, &g).map_err(|e| e.to_string())?.is_sheaf {
                non_sheaves += 1;
            }
            let (sh, unit) = sheafify_set(&site, &g).map_err(|e| e.to_string())?;
            let report = is_sheaf_set(&site, &sh).map_err(|e| e.to_string())?;
            ensure(report.is_sheaf, || {
                format!("seed {seed}: output is not a sheaf: {:?}", report.failure)
            })?;
            let (_, third) = gamma_prime_set(&site, &sh).map_err(|e| e.to_string())?;
            ensure(third.is_bijective(), || {
                format!("seed {seed}: third application is not bijective")
            })?;
            support::agrees_with_oracle(&space, &cat, &g, &sh, &unit)
                .map_err(|e| format!("seed {seed}: {e}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} random presheaves ({non_sheaves} not sheaves) match the gluing oracle"
    ))
}

fn criterion_5() -> (bool, String) {
    const CAP: usize = 3;
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, space) in [
        ("pseudo-circle", pseudo_circle_space()),
        ("interval cover", interval_cover_space()),
    ] {
        let (site, cat) = space_site(&space);
        let f = order_complex_functor(&space, CAP).expect("functor");
        let mut n = 0;
        for x in 0..cat.object_count() {
            for s in site.coverings(x) {
                let rep = covariant_descent_check(&site, &f, x, s, CAP - 1).expect("descent check");
                if !rep.passes {
                    ok = false;
                    notes.push(format!(
                        "order complex fails on {} of {}",
                        rep.sieve, rep.object
                    ));
                }
                n += 1;
            }
        }
        notes.push(format!(
            "order complex passes on {n} covering sieves of the {name}"
        ));
    }

    let space = pseudo_circle_space();
    let (site, cat) = space_site(&space);
    let point = CovariantDiagram::terminal(cat.clone(), CAP);
    let top = cat.object_id("{a,b,c,d}").expect("X");
    let gens =
        ["{a,b,c}<{a,b,c,d}", "{a,b,d}<{a,b,c,d}"].map(|m| cat.morphism_id(m).expect("generator"));
    let cover = toporeal_core::catsite::generate_sieve(&cat, top, &gens).expect("sieve");
    let rep = covariant_descent_check(&site, &point, top, &cover, CAP - 1).expect("descent check");
    let h1 = &rep.degrees[1];
    let claimed = !rep.passes && h1.realization.to_string() == "Z" && h1.value.to_string() == "0";
    if !claimed {
        ok = false;
        notes.push(format!(
            "constant point on {}: expected failure with H1 Z vs 0, observed {} with H1 {} vs {}",
            rep.sieve,
            if rep.passes { "pass" } else { "fail" },
            h1.realization,
            h1.value
        ));
    }
    // Where the constant point does fail on this site.
    let failures: Vec<String> = (0..cat.object_count())
        .flat_map(|x| site.coverings(x).iter().map(move |s| (x, s.clone())))
        .filter_map(|(x, s): (usize, Sieve)| {
            let r = covariant_descent_check(&site, &point, x, &s, CAP - 1).expect("descent check");
            (!r.passes).then(|| {
                let d = r.first_mismatch.unwrap_or(0);
                format!(
                    "{} of {} (H{d} {} vs {})",
                    r.sieve, r.object, r.degrees[d].realization, r.degrees[d].value
                )
            })
        })
        .collect();
    notes.push(format!("constant point fails on: {}", failures.join("; ")));
    (ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    const CAP: usize = 3;
    let space = sierpinski_space();
    let (_, base) = space_site(&space);
    let f = order_complex_functor(&space, CAP).map_err(|e| e.to_string())?;
    let f = CovariantDiagram::new(
        base.clone(),
        f.values().to_vec(),
        (0..base.morphism_count())
            .map(|m| f.action(m).clone())
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let t = triples_category(&base).map_err(|e| e.to_string())?;
    let fd = f
        .pullback(&t.image_to_base().map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut inputs: Vec<(String, SetPresheaf)> = vec![
        ("terminal".into(), SetPresheaf::terminal(base.clone())),
        (
            "constant {0,1}".into(),
            SetPresheaf::constant(base.clone(), &["0".into(), "1".into()]),
        ),
    ];
    for z in 0..base.object_count() {
        inputs.push((
            format!("Hom(-,{})", base.object(z)),
            SetPresheaf::representable(base.clone(), z),
        ));
    }
    for seed in 0..4 {
        inputs.push((
            format!("random {seed}"),
            support::random_set_presheaf(&mut support::rng(6000 + seed), &base),
        ));
    }
    for (name, g) in &inputs {
        let gc = t
            .section_presheaf(g)
            .map_err(|e| e.to_string())?
            .to_presheaf(CAP);
        let (a, b) = projector_maps(&t.projector, &fd, &gc, CAP).map_err(|e| e.to_string())?;
        let ab = b.then(&a).map_err(|e| e.to_string())?;
        ensure(ab.is_identity(), || {
            format!("{name}: a∘b is not the identity table")
        })?;
        let ba = a.then(&b).map_err(|e| e.to_string())?;
        for m in induced_homology_maps(&ba, CAP - 1).map_err(|e| e.to_string())? {
            ensure(m.is_identity(), || {
                format!("{name}: b∘a on H{} is {:?}", m.degree, m.matrix)
            })?;
        }
        let comps = ba.source().pi0();
        let same = (0..ba.source().count(0))
            .all(|v| comps.vertex_component[ba.apply(0, v)] == comps.vertex_component[v]);
        ensure(same, || format!("{name}: b∘a moves a component"))?;
    }
    Ok(format!(
        "{} triples; {} presheaves; a∘b = id, b∘a = id on H0..H{} and pi0",
        t.cat.object_count(),
        inputs.len(),
        CAP - 1
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = support::rng(7);
    for i in 0..100 {
        let (r, c, e) = support::random_matrix(&mut rng, 8);
        let m = IntMatrix::from_dense(r, c, &e);
        let snf = smith_normal_form(&m);
        ensure(snf.u.mul(&m).mul(&snf.v).is_diagonal(&snf.factors), || {
            format!("matrix {i}: U m V is not diag")
        })?;
        let unimodular = support::bareiss_det(snf.u.to_dense()).is_unit()
            && support::bareiss_det(snf.v.to_dense()).is_unit();
        ensure(unimodular, || {
            format!("matrix {i}: transform not unimodular")
        })?;
        ensure(snf.factors.windows(2).all(|w| w[0].divides(&w[1])), || {
            format!("matrix {i}: divisibility chain broken")
        })?;
        let oracle = support::determinantal_factors(r, c, &e);
        ensure(invariant_factors(&m) == oracle, || {
            format!("matrix {i}: factors differ from determinantal divisors")
        })?;
    }
    let mut complexes: Vec<(String, SimplicialSet)> = Vec::new();
    for name in gallery::NAMES {
        let inst = gallery::instance(name, 3).map_err(|e| e.to_string())?;
        let f = inst.covariant(3).map_err(|e| e.to_string())?;
        let r = realize(inst.site.category(), &f, &inst.presheaf, 3).map_err(|e| e.to_string())?;
        complexes.push((name.to_string(), (**r.set()).clone()));
    }
    let bz2 = nerve(&z2(), 4);
    complexes.push(("nerve of Z/2".into(), bz2.clone()));
    for (name, s) in &complexes {
        let c = normalized_chain_complex(s, s.dim_cap()).map_err(|e| format!("{name}: {e}"))?;
        for k in 2..=s.dim_cap() {
            ensure(c.boundary(k - 1).mul(c.boundary(k)).is_zero(), || {
                format!("{name}: boundary squared nonzero at {k}")
            })?;
        }
    }
    let h = homology(&bz2, 4);
    ensure(show(&h) == "Z, Z/2, 0, Z/2", || {
        format!("nerve of Z/2: {}", show(&h))
    })?;
    Ok(format!(
        "100 SNF checks; boundary squared zero on {} complexes; nerve of Z/2: {}",
        complexes.len(),
        show(&h)
    ))
}

fn run_cli(
    args: &[String],
    threads: &str,
    dir: &std::path::Path,
) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_toporeal"))
        .args(args)
        .current_dir(dir)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("run toporeal");
    (out.status.code(), out.stdout, out.stderr)
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs: Vec<Vec<String>> = Vec::new();
    for name in gallery::NAMES {
        let inst = gallery::instance(name, 3).map_err(|e| e.to_string())?;
        let ex = |cmd: &str| -> Vec<String> {
            [cmd, "--example", name, "--dim-cap", "3"]
                .map(String::from)
                .to_vec()
        };
        runs.push(ex(inst.command));
        runs.push(ex("validate"));
        let mut text = ex(inst.command);
        text.extend(["--format".into(), "text".into()]);
        runs.push(text);
        runs.push(vec!["examples".into(), name.to_string()]);
        let sub = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_toporeal"))
            .args(["examples", name, "--out"])
            .arg(&sub)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("examples {name} --out failed"))?;
        let manifest: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(sub.join("manifest.json")).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let mut args: Vec<String> = manifest["args"]
            .as_array()
            .ok_or("manifest args")?
            .iter()
            .map(|a| a.as_str().unwrap_or_default().to_string())
            .collect();
        for a in args.iter_mut() {
            if a.ends_with(".json") {
                *a = sub.join(&*a).display().to_string();
            }
        }
        runs.push(args);
    }
    for name in ["collapse", "pseudo_circle_constant2"] {
        runs.push(
            ["compare", "--example", name, "--dim-cap", "3"]
                .map(String::from)
                .to_vec(),
        );
    }
    runs.push(
        ["realize", "--example", "bz2", "--dim-cap", "4"]
            .map(String::from)
            .to_vec(),
    );
    runs.push(["realize", "--example", "nope"].map(String::from).to_vec());
    for args in &runs {
        let first = run_cli(args, "1", dir.path());
        ensure(first.0.is_some(), || {
            format!("{args:?} terminated by a signal")
        })?;
        for threads in ["1", "4"] {
            let again = run_cli(args, threads, dir.path());
            ensure(again == first, || {
                format!("{} differs with {threads} threads", args.join(" "))
            })?;
        }
    }
    Ok(format!(
        "{} invocations byte-identical across repeats and 1 vs 4 threads",
        runs.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("final object", Box::new(|| split(criterion_1()))),
        ("disjoint unions", Box::new(|| split(criterion_2()))),
        (
            "sheafification unit on realizations",
            Box::new(|| split(criterion_3())),
        ),
        ("sheafification", Box::new(|| split(criterion_4()))),
        ("covariant descent", Box::new(criterion_5)),
        ("projector", Box::new(|| split(criterion_6()))),
        ("homology engine", Box::new(|| split(criterion_7()))),
        ("determinism", Box::new(|| split(criterion_8()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {} {name}: {} [{secs:.2}s] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn split(o: Outcome) -> (bool, String) {
    match o {
        Ok(s) => (true, s),
        Err(s) => (false, s),
    }
}
