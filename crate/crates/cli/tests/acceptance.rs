//! Acceptance run: one PASS or FAIL line per criterion, nonzero exit if any
//! fails. Runs without the libtest harness so the lines print in order.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fatdelta_core::fat::{elementary_arrows, enumerate_hom_fat, enumerate_objects, FatClass, FatMorphism, FatObject};
use fatdelta_core::hypermoment::{extensionality_check, hypermoment_check, unitality_report, Suite};
use fatdelta_core::nerve_corpus::{corpus_check, CorpusOptions};
use fatdelta_core::verify::{
    check_cartesian_universe, check_contraction, check_descent, check_directness, check_factorization_system,
    check_genericity, Verdict,
};

type Outcome = Result<String, String>;

fn obj(s: &str) -> FatObject {
    s.parse().unwrap()
}

fn fatdelta(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fatdelta"))
        .args(args)
        .env_remove("FATDELTA_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn golden(name: &str, args: &[&str]) -> Result<(), String> {
    let first = fatdelta(args)?;
    if first != fatdelta(args)? {
        return Err(format!("{args:?} is not byte-stable"));
    }
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{name}: {e}"))?;
    if first != expected {
        return Err(format!("{args:?} differs from {name}"));
    }
    Ok(())
}

fn verdict(v: Verdict) -> Outcome {
    let summary = format!("{} checked, {} failures", v.checked, v.failure_count);
    if v.passed() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", v.failures.first().cloned().unwrap_or_default()))
    }
}

/// The objects and the arrows drawn between them, read off the picture.
fn objects_picture() -> Outcome {
    let objects = enumerate_objects(2);
    let expected: Vec<FatObject> = ["", "u", "m", "uu", "um", "mu", "mm"].into_iter().map(obj).collect();
    let (mut got, mut want) = (objects.clone(), expected);
    got.sort();
    want.sort();
    if got != want {
        return Err(format!("objects {objects:?}"));
    }
    for (x, y, n) in [("u", "m", 1), ("m", "u", 0), ("", "u", 2), ("", "m", 2)] {
        let size = enumerate_hom_fat(&obj(x), &obj(y), FatClass::All).len();
        if size != n {
            return Err(format!("|hom(\"{x}\", \"{y}\")| = {size}, expected {n}"));
        }
    }
    let drawn: BTreeMap<(FatObject, FatObject), usize> = [
        ("", "u", 2),
        ("", "m", 2),
        ("u", "uu", 3),
        ("u", "m", 1),
        ("u", "mu", 2),
        ("u", "um", 2),
        ("uu", "mu", 1),
        ("uu", "um", 1),
        ("m", "mm", 3),
        ("m", "mu", 1),
        ("m", "um", 1),
        ("mu", "mm", 1),
        ("um", "mm", 1),
    ]
    .into_iter()
    .map(|(x, y, n)| ((obj(x), obj(y)), n))
    .collect();
    let mut arrows: BTreeMap<(FatObject, FatObject), usize> = BTreeMap::new();
    for f in elementary_arrows(2) {
        *arrows.entry((f.dom().clone(), f.cod().clone())).or_default() += 1;
    }
    if arrows != drawn {
        return Err(format!("elementary arrows {arrows:?}"));
    }
    golden("objects.txt", &["objects"])?;
    golden("objects_poset.dot", &["export", "objects-poset", "--format", "dot"])?;
    Ok(format!(
        "7 objects, {} drawn arrows match, golden output stable",
        drawn.values().sum::<usize>()
    ))
}

fn worked_example() -> Outcome {
    let f = FatMorphism::new(obj("mu"), obj("mmu"), vec![0, 1, 3]).map_err(|e| e.to_string())?;
    let (active, inert) = f.active_inert_factor();
    let checks = [
        (active.cod() == &obj("muu"), "middle is \"muu\""),
        (active.top() == [0, 1, 3], "active top is [0, 1, 3]"),
        (active.pi_codomain().images() == [0, 2], "active bottom is [0, 2]"),
        (active.is_active(), "first part is active"),
        (inert.top() == [0, 1, 2, 3], "inert top is the identity"),
        (inert.pi_codomain().images() == [0, 0, 1], "inert bottom is [0, 0, 1]"),
        (inert.is_inert(), "second part is inert"),
        (inert.compose(&active).ok() == Some(f.clone()), "parts compose back"),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(format!("expected: {what}; got {active} then {inert}"));
    }
    let text = fatdelta(&["factorize", r#"{"dom":"mu","cod":"mmu","top":[0,1,3]}"#])?;
    if !text.starts_with("middle \"muu\"\n") {
        return Err(format!("cli printed {text:?}"));
    }
    Ok(format!("{active} then {inert}"))
}

fn corpus() -> Outcome {
    let options = CorpusOptions::default();
    let r = corpus_check(&options).map_err(|e| e.to_string())?;
    let direct: Vec<String> = r
        .direct
        .iter()
        .map(|d| format!("bound {} direct on {} pairs with {} mismatches", d.bound, d.pairs, d.mismatches.len()))
        .collect();
    let summary = format!(
        "{} classes, {} pairs, {} functors = {} transformations at bound 2; bounds 3 and 4 via 2-coskeletality \
         ({} non-coskeletal nerves), {}; segal failures {}; {} mutants ({} phantoms, {} deletions, {} redirects), \
         {} survivors",
        r.classes,
        r.pairs,
        r.functors,
        r.natural_transformations,
        r.non_coskeletal.len(),
        direct.join(", "),
        r.segal_failures.len(),
        r.mutations.tried(),
        r.mutations.phantoms,
        r.mutations.deletions,
        r.mutations.redirects,
        r.mutations.survivors.len(),
    );
    if r.passed() {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; mismatches {:?}; restrictions {:?}; survivors {:?}",
            r.mismatches.iter().take(3).collect::<Vec<_>>(),
            r.non_functor_restrictions.iter().take(3).collect::<Vec<_>>(),
            r.mutations.survivors.iter().take(3).collect::<Vec<_>>(),
        ))
    }
}

fn hypermoment() -> Outcome {
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    let mut reports: Vec<_> = [Suite::Gamma, Suite::Lifts, Suite::Units, Suite::Density]
        .into_iter()
        .flat_map(|s| hypermoment_check(4, s).suites)
        .collect();
    reports.push(extensionality_check(3));
    for r in &reports {
        lines.push(format!("{} at {}: {}", r.suite, r.bound, r.checked));
        if !r.passed() {
            bad.push(format!("{}: {:?}", r.suite, r.counterexamples.first()));
        }
    }
    let unitality = unitality_report(4);
    lines.push(format!(
        "unitality report at 4: {} objects, {} mixed without an active unit",
        unitality.rows.len(),
        unitality.mixed_without_active_unit
    ));
    if bad.is_empty() {
        Ok(lines.join(", "))
    } else {
        Err(bad.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("objects and arrows up to two edges", Box::new(objects_picture)),
        ("worked factorization", Box::new(worked_example)),
        ("factorization system up to 4 edges", Box::new(|| verdict(check_factorization_system(4)))),
        (
            "descent: phi/psi up to 6 edges, inerts and hom counts up to 4",
            Box::new(|| verdict(check_descent(6, 4, 4).map_err(|e| e.to_string())?)),
        ),
        (
            "cartesian free monad (3 vertices, 4 edges, n <= 4)",
            Box::new(|| verdict(check_cartesian_universe(3, 4, 4).map_err(|e| e.to_string())?)),
        ),
        (
            "generic maps (3 vertices, 3 edges, free bound 4)",
            Box::new(|| verdict(check_genericity(3, 3, 4).map_err(|e| e.to_string())?)),
        ),
        ("nerve theorem on the corpus", Box::new(corpus)),
        ("hypermoment axioms", Box::new(hypermoment)),
        ("directness up to 5 edges", Box::new(|| verdict(check_directness(5)))),
        ("contraction lemma up to [5]", Box::new(|| verdict(check_contraction(5)))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
