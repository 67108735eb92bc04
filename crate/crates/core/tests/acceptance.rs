//! The acceptance gate: every criterion over its full range, exactly.
//!
//! One line per criterion goes straight to stderr so that it shows up even
//! when the harness captures test output.

use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use uarea::verify;

struct Criterion {
    number: u32,
    title: &'static str,
    check: &'static str,
    ns: RangeInclusive<u32>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "polynomial identities and closed forms, k <= 12", check: "poly-identities", ns: 1..=12 },
    Criterion { number: 2, title: "binomial identity, n <= 20", check: "binomial-identity", ns: 0..=20 },
    Criterion { number: 3, title: "Fu quotient and per-degree dimensions, n <= 5", check: "fu-quotient", ns: 1..=5 },
    Criterion { number: 4, title: "ball evaluation and u p_n = 0, n <= 5", check: "ball-evaluation", ns: 1..=5 },
    Criterion { number: 5, title: "module well-definedness, n <= 5", check: "module-well-defined", ns: 1..=5 },
    Criterion { number: 6, title: "kernel lemma, n <= 5", check: "kernel-lemma", ns: 1..=5 },
    Criterion { number: 7, title: "presentation ker h = I_n, n <= 4", check: "presentation", ns: 1..=4 },
    Criterion { number: 8, title: "dimensions, n <= 6", check: "dimensions", ns: 1..=6 },
    Criterion { number: 9, title: "decomposition and image of g, n <= 5", check: "decomposition", ns: 1..=5 },
    Criterion { number: 10, title: "forms oracle and radial Delta forms, n <= 5", check: "oracle", ns: 1..=5 },
    Criterion { number: 11, title: "centroid kernel, n <= 5", check: "centroid-kernel", ns: 1..=5 },
    Criterion { number: 12, title: "angularity theorem, n <= 5", check: "angularity", ns: 1..=5 },
    Criterion { number: 13, title: "magic lemma, n <= 5", check: "magic-lemma", ns: 1..=5 },
    Criterion { number: 14, title: "homomorphism properties, n <= 4", check: "homomorphism", ns: 1..=4 },
];

#[test]
fn acceptance_criteria() {
    let results: Vec<Vec<(u32, verify::Outcome)>> = CRITERIA
        .par_iter()
        .map(|c| {
            let check = verify::find(c.check).expect("known check");
            c.ns.clone().into_par_iter().map(|n| (n, check.run(n))).collect()
        })
        .collect();

    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (c, outcomes) in CRITERIA.iter().zip(&results) {
        let passed = outcomes.iter().all(|(_, o)| o.passed);
        let status = if passed { "PASS" } else { "FAIL" };
        writeln!(err, "acceptance {:>2} {status}: {}", c.number, c.title).unwrap();
        for (n, o) in outcomes {
            if let Some(w) = &o.witness {
                writeln!(err, "    n = {n}: {w}").unwrap();
            }
            if *n == *c.ns.end() {
                for note in &o.notes {
                    writeln!(err, "    n = {n}: note: {note}").unwrap();
                }
            }
        }
        if !passed {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
