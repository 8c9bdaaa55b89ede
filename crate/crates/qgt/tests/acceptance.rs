//! Acceptance gate. Each test covers one numbered criterion and prints a
//! single pass/fail line (visible with `--nocapture`).

use std::time::Instant;

use num::BigInt;

use qgt::gtmodule::{gamma_of, ModuleSpec};
use qgt::qcoeff::{Mode, NumericConfig};
use qgt::relations::{
    maximal_set, standard_set, Pos, ReasonCode, Relation, RelationSet,
};
use qgt::tableaux::{Entry, Tableau};
use qgt::verify::{
    check_defining_relations, check_gamma_separation, generic_seed_for, irreducible,
    standard_module_spec, verify_module, weyl_dimension, Fault, Operator,
};
use qgt::QgtError;

fn report(criterion: usize, failures: &[String], extra: &str) {
    if failures.is_empty() {
        println!("criterion-{criterion}: PASS {extra}");
    } else {
        println!("criterion-{criterion}: FAIL {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {criterion}: {failures:?}");
}

/// Dominant integral weights with last entry 0 and spread at most `max`.
fn dominant_weights(n: usize, max: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n - 1 {
            let mut w = prefix.clone();
            w.push(0);
            out.push(w);
            return;
        }
        let hi = prefix.last().copied().unwrap_or(max);
        // entries are non-increasing and end at 0
        for v in (0..=hi).rev() {
            prefix.push(v);
            rec(n, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max, &mut Vec::new(), &mut out);
    out
}

fn all_test_weights() -> Vec<Vec<i64>> {
    let mut all = Vec::new();
    for n in 2..=4 {
        all.extend(dominant_weights(n, 5));
    }
    all
}

fn radius_for(lambda: &[i64]) -> i64 {
    lambda[0] - lambda[lambda.len() - 1] + lambda.len() as i64 + 1
}

/// gl_2 module with non-integral highest weight (1/3, 0): seed entries
/// l_21 = l_11 = -2/3, l_22 = -2, one weak relation.
fn non_integral_gl2() -> ModuleSpec {
    let third = num::rational::Ratio::new(-2i64, 3);
    let rows = vec![
        vec![Entry::rat(third), Entry::int(-2)],
        vec![Entry::rat(third)],
    ];
    let seed = Tableau::new(2, 3, rows).unwrap();
    let relations = RelationSet::new(2, vec![Relation::weak((2, 1), (1, 1))]).unwrap();
    ModuleSpec::new(relations, seed, Mode::Exact, None, false).unwrap()
}

/// Integer base satisfying the full standard set with slack 10 in every
/// relation: entry (k,i) = -20(i-1) - 10(n-k). Reduced relation sets then
/// never gate a term within a small window, so their modules exercise the
/// generic (interior) regime of the formulas.
fn wide_base(n: usize) -> Tableau {
    let rows: Vec<Vec<Entry>> = (1..=n)
        .rev()
        .map(|k| {
            (1..=k)
                .map(|i| Entry::int(-20 * (i as i64 - 1) - 10 * (n as i64 - k as i64)))
                .collect()
        })
        .collect();
    Tableau::new(n, 1, rows).unwrap()
}

fn generic_module(relations: RelationSet, unchecked: bool) -> ModuleSpec {
    let seed = generic_seed_for(&relations, &wide_base(relations.n)).unwrap();
    ModuleSpec::new(
        relations,
        seed,
        Mode::Numeric,
        Some(NumericConfig::default()),
        unchecked,
    )
    .unwrap()
}

#[test]
fn criterion_1_admissibility_calibration() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=6 {
        if !RelationSet::empty(n).is_admissible().unwrap().admissible {
            failures.push(format!("empty set rejected for n={n}"));
        }
        if !standard_set(n).is_admissible().unwrap().admissible {
            failures.push(format!("standard set rejected for n={n}"));
        }
    }
    let crossed = RelationSet::new(
        3,
        vec![Relation::weak((3, 1), (2, 2)), Relation::strict((2, 1), (3, 2))],
    )
    .unwrap();
    let r = crossed.is_admissible().unwrap();
    if r.admissible || !r.failures.iter().any(|f| matches!(f.code, ReasonCode::Cross)) {
        failures.push("planted cross not rejected with cross code".into());
    }
    let disordered = RelationSet::new(
        2,
        vec![Relation::weak((2, 2), (1, 1)), Relation::strict((1, 1), (2, 1))],
    )
    .unwrap();
    let r = disordered.is_admissible().unwrap();
    let order_coded = r.failures.iter().any(|f| {
        matches!(
            f.code,
            ReasonCode::StrictOrderViolation | ReasonCode::TopRowOrderViolation
        )
    });
    if r.admissible || !order_coded {
        failures.push("planted order violation not rejected with order code".into());
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("took {elapsed:?} (budget 1 s)"));
    }
    report(1, &failures, &format!("({elapsed:?})"));
}

#[test]
fn criterion_2_basis_counts_match_weyl_dimension() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let weights = all_test_weights();
    for lambda in &weights {
        let spec = standard_module_spec(lambda).unwrap();
        let basis = spec.enumerate_basis(radius_for(lambda)).unwrap();
        let expect = weyl_dimension(lambda).unwrap();
        if !basis.complete {
            failures.push(format!("{lambda:?}: window incomplete"));
        }
        if BigInt::from(basis.tableaux.len()) != expect {
            failures.push(format!(
                "{lambda:?}: {} tableaux, Weyl dimension {expect}",
                basis.tableaux.len()
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 30.0 {
        failures.push(format!("took {elapsed:?} (budget 30 s)"));
    }
    report(
        2,
        &failures,
        &format!("({} modules, {elapsed:?})", weights.len()),
    );
}

#[test]
fn criterion_3_defining_relations() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for lambda in all_test_weights() {
        let spec = standard_module_spec(&lambda).unwrap();
        let r = verify_module(&spec, radius_for(&lambda), None).unwrap();
        if !r.pass {
            failures.push(format!("standard {lambda:?}: {r}"));
        }
    }
    let r = verify_module(&non_integral_gl2(), 6, None).unwrap();
    if !r.pass {
        failures.push(format!("non-integral gl_2: {r}"));
    }
    for n in 2..=3 {
        let spec = generic_module(RelationSet::empty(n), false);
        let r = verify_module(&spec, 2, None).unwrap();
        if !r.pass {
            failures.push(format!("generic n={n}: {r}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 120.0 {
        failures.push(format!("took {elapsed:?} (budget 2 min)"));
    }
    report(3, &failures, &format!("({elapsed:?})"));
}

#[test]
fn criterion_4_eigenvalue_separation() {
    let mut failures = Vec::new();
    for lambda in all_test_weights() {
        let spec = standard_module_spec(&lambda).unwrap();
        let basis = spec.enumerate_basis(radius_for(&lambda)).unwrap();
        let line = check_gamma_separation(&spec, &basis.tableaux).unwrap();
        if !line.pass {
            failures.push(format!("standard {lambda:?}: {}", line.detail));
        }
    }
    {
        let spec = non_integral_gl2();
        let basis = spec.enumerate_basis(6).unwrap();
        let line = check_gamma_separation(&spec, &basis.tableaux).unwrap();
        if !line.pass {
            failures.push(format!("non-integral gl_2: {}", line.detail));
        }
    }
    for n in 2..=3 {
        let spec = generic_module(RelationSet::empty(n), false);
        let basis = spec.enumerate_basis(2).unwrap();
        let line = check_gamma_separation(&spec, &basis.tableaux).unwrap();
        if !line.pass {
            failures.push(format!("generic n={n}: {}", line.detail));
        }
    }
    // spot values on top row (0, -2)
    let spec = standard_module_spec(&[1, 0]).unwrap();
    let ctx = &spec.ctx;
    let t = Tableau::gl2(0, -2, 0);
    for ((m, k), expect) in [((1, 1), "q"), ((2, 1), "(1+q^4)/q"), ((2, 2), "q+q^3")] {
        let got = ctx.scalar_string(&gamma_of(ctx, &t, m, k).unwrap());
        if got != expect {
            failures.push(format!("gamma[{m},{k}] = {got}, expected {expect}"));
        }
    }
    report(4, &failures, "");
}

#[test]
fn criterion_5_period_invariance() {
    let mut failures = Vec::new();
    let base = standard_module_spec(&[2, 1, 0]).unwrap();
    let basis = base.enumerate_basis(6).unwrap().tableaux;
    // full period h += 2 at each single entry, including the top row
    for k in 1..=3usize {
        for i in 1..=k {
            let mut seed = base.seed.clone();
            seed.entry_mut(k, i).h += 2;
            let shifted = ModuleSpec::new(
                base.relations.clone(),
                seed,
                Mode::Exact,
                None,
                false,
            )
            .unwrap();
            let other = shifted.enumerate_basis(6).unwrap().tableaux;
            if basis.len() != other.len() {
                failures.push(format!("basis size changed at ({k},{i})"));
                continue;
            }
            for (t, s) in basis.iter().zip(&other) {
                for m in 1..=3usize {
                    for kk in 1..=m {
                        let a = base.ctx.scalar_string(&base.gamma(t, m, kk).unwrap());
                        let b = shifted.ctx.scalar_string(&shifted.gamma(s, m, kk).unwrap());
                        if a != b {
                            failures.push(format!(
                                "gamma[{m},{kk}] changed under h+=2 at ({k},{i}): {a} vs {b}"
                            ));
                        }
                    }
                }
                for g in 1..3usize {
                    let a = action_strings(&base, g, t);
                    let b = action_strings(&shifted, g, s);
                    if a != b {
                        failures.push(format!(
                            "action coefficients changed under h+=2 at ({k},{i})"
                        ));
                    }
                }
            }
        }
    }
    // half period h += 1 changes at least one gamma value
    let t = Tableau::gl2(0, -2, 0);
    let ctx = &standard_module_spec(&[1, 0]).unwrap().ctx;
    let mut half = t.clone();
    half.entry_mut(1, 1).h += 1;
    let mut any_changed = false;
    for m in 1..=2usize {
        for k in 1..=m {
            let a = ctx.scalar_string(&gamma_of(ctx, &t, m, k).unwrap());
            let b = ctx.scalar_string(&gamma_of(ctx, &half, m, k).unwrap());
            any_changed |= a != b;
        }
    }
    if !any_changed {
        failures.push("half period left every gamma unchanged".into());
    }
    report(5, &failures, "");
}

fn action_strings(spec: &ModuleSpec, k: usize, t: &Tableau) -> Vec<String> {
    let mut out = Vec::new();
    for lc in [spec.act_e(k, t).unwrap(), spec.act_f(k, t).unwrap()] {
        for c in lc.terms.values() {
            out.push(spec.ctx.scalar_string(c));
        }
    }
    out
}

#[test]
fn criterion_6_irreducibility_criterion() {
    let mut failures = Vec::new();
    // worked gl_2 pair
    let seed = Tableau::gl2(0, -2, 0);
    if !irreducible(&standard_set(2), &seed).unwrap() {
        failures.push("S(2) with T(0,-2;0) not irreducible".into());
    }
    let weaker = RelationSet::new(2, vec![Relation::weak((2, 1), (1, 1))]).unwrap();
    if irreducible(&weaker, &seed).unwrap() {
        failures.push("weak-only set with T(0,-2;0) wrongly irreducible".into());
    }
    let mut pairs = 1usize;
    for lambda in [
        vec![1, 0],
        vec![2, 0],
        vec![3, 1],
        vec![2, 1, 0],
        vec![3, 1, 0],
        vec![5, 3, 1],
        vec![2, 2, 0],
        vec![3, 2, 1, 0],
        vec![4, 2, 1, 0],
        vec![5, 3, 2, 0],
    ] {
        let seed = standard_module_spec(&lambda).unwrap().seed;
        let (maximal, _) = maximal_set(&seed).unwrap();
        if !irreducible(&maximal, &seed).unwrap() {
            failures.push(format!("{lambda:?}: maximal set not irreducible"));
            continue;
        }
        // drop one relation the remainder does not imply
        let dropped = maximal.relations.iter().find(|r| {
            let mut rest = maximal.relations.clone();
            rest.remove(r);
            let rest = RelationSet::new(maximal.n, rest).unwrap();
            let single = RelationSet::new(maximal.n, vec![**r]).unwrap();
            !rest.implies(&single)
        });
        match dropped {
            Some(r) => {
                let mut rest = maximal.relations.clone();
                rest.remove(r);
                let rest = RelationSet::new(maximal.n, rest).unwrap();
                if irreducible(&rest, &seed).unwrap() {
                    failures.push(format!("{lambda:?}: weaker set wrongly irreducible"));
                }
                pairs += 1;
            }
            None => failures.push(format!("{lambda:?}: no droppable relation found")),
        }
    }
    if pairs < 10 {
        failures.push(format!("only {pairs} generated pairs (need >= 10)"));
    }
    report(6, &failures, &format!("({pairs} pairs)"));
}

#[test]
fn criterion_7_rr_method_coherence() {
    let mut failures = Vec::new();
    let s3 = standard_set(3);
    for v in s3.vertex_set() {
        let (reduced, removed) = s3.rr_remove(v);
        assert!(removed);
        let admissible = reduced.is_admissible().unwrap().admissible;
        let spec = generic_module(reduced, !admissible);
        let r = verify_module(&spec, 2, None).unwrap();
        if !r.pass {
            failures.push(format!("removal of {v} fails verification: {r}"));
        }
    }
    // iterated removal reaches the empty set; the generic module passes
    let mut c = standard_set(3);
    while let Some(v) = c.vertex_set().iter().next().copied() {
        c = c.rr_remove(v).0;
    }
    if !c.is_empty() {
        failures.push("iterated removal did not reach the empty set".into());
    }
    let spec = generic_module(c, false);
    let r = verify_module(&spec, 2, None).unwrap();
    if !r.pass {
        failures.push(format!("generic module fails verification: {r}"));
    }
    report(7, &failures, "");
}

#[test]
fn criterion_8_negative_controls() {
    let mut failures = Vec::new();
    // corrupted coefficient is caught by the relation checks
    let spec = standard_module_spec(&[2, 1, 0]).unwrap();
    let r = verify_module(&spec, 6, Some(Fault { e_index: 1 })).unwrap();
    if r.pass {
        failures.push("corrupted e_1 coefficient accepted".into());
    }
    // also catch it directly at the check level
    let basis = spec.enumerate_basis(6).unwrap();
    let op = Operator {
        spec: &spec,
        fault: Some(Fault { e_index: 2 }),
    };
    let checks = check_defining_relations(&op, &basis.tableaux).unwrap();
    if checks.iter().all(|c| c.pass) {
        failures.push("corrupted e_2 coefficient accepted".into());
    }
    // cross-containing relation set is rejected at construction
    let crossed = RelationSet::new(
        3,
        vec![Relation::weak((3, 1), (2, 2)), Relation::strict((2, 1), (3, 2))],
    )
    .unwrap();
    let base = wide_base(3);
    let seed = generic_seed_for(&crossed, &base).unwrap();
    match ModuleSpec::new(
        crossed,
        seed,
        Mode::Numeric,
        Some(NumericConfig::default()),
        false,
    ) {
        Err(QgtError::NotAdmissible(_)) => {}
        other => failures.push(format!(
            "cross set: expected not-admissible error, got {:?}",
            other.map(|_| ())
        )),
    }
    // seed violating its relation set is rejected at construction
    match ModuleSpec::new(
        standard_set(2),
        Tableau::gl2(0, -2, 1),
        Mode::Exact,
        None,
        false,
    ) {
        Err(QgtError::SeedViolatesRelations(_)) => {}
        other => failures.push(format!(
            "violating seed: expected seed-violation error, got {:?}",
            other.map(|_| ())
        )),
    }
    report(8, &failures, "");
}

#[test]
fn maximal_set_matches_worked_example() {
    // supporting oracle for criteria 6: the worked maximal set
    let (m, admissible) = maximal_set(&Tableau::gl2(0, -2, 0)).unwrap();
    let expect: std::collections::BTreeSet<Relation> = [
        Relation::weak((2, 1), (1, 1)),
        Relation::strict((1, 1), (2, 2)),
        Relation::weak((2, 1), (2, 2)),
    ]
    .into_iter()
    .collect();
    assert_eq!(m.relations, expect);
    assert!(admissible);
    assert!(m.vertex_set().contains(&Pos(2, 2)));
}
