//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dspp::dpp_mixed::disjoint_paths_relation;
use dspp::dspp2::{solve, validate_witness, Evaluation, Query, SolveOptions, Verdict};
use dspp::expansion::{build_expansion, ordered_components, ArcClass};
use dspp::fixtures::fig2;
use dspp::generator::{planted_instance, random_instance, random_weakly_acyclic, Instance};
use dspp::graph::UndirectedGraph;
use dspp::oracle::{
    brute_force_dspp2, brute_force_mixed_dpp, brute_force_two_dpp, DEFAULT_ORACLE_BUDGET,
};
use dspp::relation::DisjointMode;

const RANDOM_SUITE: u64 = 1200;
const ZERO_SUITE: u64 = 200;
const MIXED_SUITE: u64 = 600;
const SYMMETRY_SUITE: u64 = 200;

/// Counters shared by criteria 6 and 7, fed by every suite.
#[derive(Default)]
struct Tally {
    structural_checks: usize,
    structural_violations: Vec<String>,
    feasible: usize,
    witness_failures: Vec<String>,
}

impl Tally {
    fn structure(&mut self, graph: &UndirectedGraph, query: &Query) {
        self.structural_checks += 1;
        let result = build_expansion(graph, query.s, query.mode).and_then(|x| {
            x.check_distances()?;
            ordered_components(&x).verify(&x)
        });
        if let Err(e) = result {
            self.structural_violations.push(e.to_string());
        }
    }

    fn witness(&mut self, graph: &UndirectedGraph, query: &Query, verdict: &Verdict) {
        if !verdict.feasible {
            return;
        }
        self.feasible += 1;
        match &verdict.witness {
            None => self.witness_failures.push(format!("{query:?}: no witness")),
            Some(w) => {
                if let Err(e) = validate_witness(graph, query, w) {
                    self.witness_failures.push(format!("{query:?}: {e}"));
                }
            }
        }
    }
}

/// Outcomes keyed by criterion number, printed in order at the end.
#[derive(Default)]
struct Report {
    outcomes: Vec<(u32, bool, String)>,
}

impl Report {
    fn line(&mut self, criterion: u32, passed: bool, detail: String) {
        self.outcomes.push((criterion, passed, detail));
    }

    fn print(mut self) -> bool {
        self.outcomes.sort_by_key(|o| o.0);
        for (criterion, passed, detail) in &self.outcomes {
            println!(
                "criterion {criterion}: {} - {detail}",
                if *passed { "PASS" } else { "FAIL" }
            );
        }
        self.outcomes.iter().all(|o| o.1)
    }
}

fn random_suite_instance(i: u64, salt: u64) -> Instance {
    let fractions = [0.0, 0.3, 1.0];
    let n = 2 + (i % 7) as usize;
    let max_m = (n * (n - 1) / 2).min(16);
    let seed = i.wrapping_mul(0x9e37_79b9).wrapping_add(salt);
    let m = (seed % (max_m as u64 + 1)) as usize;
    random_instance(n, m, fractions[(i % 3) as usize], 4, seed).expect("valid parameters")
}

fn solve_default(graph: &UndirectedGraph, query: &Query) -> Verdict {
    solve(graph, query, &SolveOptions::default()).expect("solver error")
}

fn criterion_1(report: &mut Report) {
    let started = Instant::now();
    let (g, q) = fig2();
    let x = build_expansion(&g, q.s, q.mode).expect("expansion");
    let oc = ordered_components(&x);
    let shape = (
        x.gadgets().len(),
        x.vertex_count(),
        x.count_class(ArcClass::Both),
        x.count_class(ArcClass::FirstOnly),
        x.count_class(ArcClass::SecondOnly),
        x.graph().edge_count(),
    );
    let verdict = solve_default(&g, &q);
    let lengths = verdict.witness.as_ref().map(|w| {
        let len = |p: &dspp::relation::Path| {
            p.links()
                .map(|l| match l {
                    dspp::graph::Link::Edge(e) => g.edge(e).length,
                    dspp::graph::Link::Arc(_) => u64::MAX,
                })
                .sum::<u64>()
        };
        (len(&w.first), len(&w.second))
    });
    let valid = verdict
        .witness
        .as_ref()
        .is_some_and(|w| validate_witness(&g, &q, w).is_ok());
    let elapsed = started.elapsed();
    let passed = shape == (3, 14, 11, 6, 6, 2)
        && oc.values() == [-1, 0, 0, 0, 1]
        && oc.verify(&x).is_ok()
        && verdict.feasible
        && valid
        && lengths == Some((3, 3))
        && elapsed < Duration::from_secs(1);
    report.line(
        1,
        passed,
        format!(
            "gadgets/|W|/both/first/second/E0 = {shape:?}, component values {:?}, feasible {}, witness lengths {lengths:?}, {elapsed:.2?}",
            oc.values(),
            verdict.feasible
        ),
    );
}

fn oracle_suite(report: &mut Report, tally: &mut Tally, criterion: u32, mode: DisjointMode) {
    let started = Instant::now();
    let mut agree = 0;
    let mut disagreements = Vec::new();
    for i in 0..RANDOM_SUITE {
        let inst = random_suite_instance(i, criterion as u64);
        let query = Query { mode, ..inst.query };
        let ours = solve_default(&inst.graph, &query);
        let truth = brute_force_dspp2(&inst.graph, &query, DEFAULT_ORACLE_BUDGET).expect("oracle");
        tally.structure(&inst.graph, &query);
        tally.witness(&inst.graph, &query, &ours);
        tally.witness(&inst.graph, &query, &truth);
        if ours.feasible == truth.feasible && ours.distances == truth.distances {
            agree += 1;
        } else {
            disagreements.push(i);
        }
    }
    let elapsed = started.elapsed();
    report.line(
        criterion,
        agree == RANDOM_SUITE as usize && elapsed < Duration::from_secs(60),
        format!(
            "{mode} mode: {agree}/{RANDOM_SUITE} agree with the oracle (n <= 8, zero fraction 0/0.3/1), {elapsed:.2?}{}",
            if disagreements.is_empty() {
                String::new()
            } else {
                format!(", disagreeing instances {disagreements:?}")
            }
        ),
    );
}

fn criterion_4(report: &mut Report, tally: &mut Tally) {
    let mut agree = 0;
    for i in 0..ZERO_SUITE {
        let n = 2 + (i % 7) as usize;
        let m = (i as usize * 5) % ((n * (n - 1) / 2).min(14) + 1);
        let inst = random_instance(n, m, 1.0, 1, 4000 + i).expect("valid parameters");
        let ours = solve_default(&inst.graph, &inst.query);
        let truth =
            brute_force_two_dpp(&inst.graph, &inst.query, DEFAULT_ORACLE_BUDGET).expect("oracle");
        tally.structure(&inst.graph, &inst.query);
        tally.witness(&inst.graph, &inst.query, &ours);
        if ours.feasible == truth.is_some() {
            agree += 1;
        }
    }
    report.line(
        4,
        agree == ZERO_SUITE as usize,
        format!("{agree}/{ZERO_SUITE} all-zero instances agree with undirected two disjoint paths"),
    );
}

fn criterion_5(report: &mut Report) {
    let mut agree = 0;
    let mut total = 0;
    for i in 0..MIXED_SUITE {
        let n = 1 + (i % 6) as usize;
        let links = (i as usize * 3) % 9;
        let g = random_weakly_acyclic(n, links, 7000 + i);
        for mode in [DisjointMode::Edge, DisjointMode::Vertex] {
            total += 1;
            let ours = disjoint_paths_relation(&g, mode).expect("weakly acyclic");
            let truth = brute_force_mixed_dpp(&g, mode, DEFAULT_ORACLE_BUDGET).expect("oracle");
            if ours.keys() == truth.keys() && ours.validate_witnesses(&g).is_ok() {
                agree += 1;
            }
        }
    }
    report.line(
        5,
        agree == total,
        format!("{agree}/{total} relations equal brute force ({MIXED_SUITE} graphs, both modes, <= 6 vertices, <= 8 links)"),
    );
}

fn criterion_8(report: &mut Report, tally: &mut Tally) {
    let mut failures = Vec::new();
    let mut checks = 0;
    for i in 0..SYMMETRY_SUITE {
        let inst = random_suite_instance(i, 8);
        let mode = if i % 2 == 0 {
            DisjointMode::Edge
        } else {
            DisjointMode::Vertex
        };
        let q = Query { mode, ..inst.query };
        let base = solve_default(&inst.graph, &q);
        tally.witness(&inst.graph, &q, &base);
        let mut check = |name: &str, g: &UndirectedGraph, q2: Query| {
            checks += 1;
            let v = solve_default(g, &q2);
            tally.witness(g, &q2, &v);
            if v.feasible != base.feasible {
                failures.push(format!("{name} on instance {i}"));
            }
        };
        check("pair swap", &inst.graph, q.swapped());
        check("reverse pair 1", &inst.graph, q.reversed(0));
        check("reverse pair 2", &inst.graph, q.reversed(1));
        let k = 2 + i % 5;
        let scaled = inst.graph.scaled(k).expect("small lengths");
        check("length scaling", &scaled, q);
    }
    report.line(
        8,
        failures.is_empty(),
        format!(
            "{checks} symmetric variants of {SYMMETRY_SUITE} instances (swap, per-pair reversal, scaling), {} changed verdicts{}",
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(": {failures:?}")
            }
        ),
    );
}

fn criterion_9(report: &mut Report, tally: &mut Tally) {
    let options = SolveOptions {
        evaluation: Evaluation::Anchored,
        ..SolveOptions::default()
    };
    let mut passed = true;
    let mut details = Vec::new();
    for n in [50, 100, 200] {
        let inst = planted_instance(n, 9).expect("planted");
        let started = Instant::now();
        let verdict = solve(&inst.graph, &inst.query, &options).expect("solver error");
        let elapsed = started.elapsed();
        tally.witness(&inst.graph, &inst.query, &verdict);
        let valid = verdict
            .witness
            .as_ref()
            .is_some_and(|w| validate_witness(&inst.graph, &inst.query, w).is_ok());
        passed &= verdict.feasible && valid && elapsed < Duration::from_secs(30);
        details.push(format!(
            "n={n} m={} {} in {elapsed:.2?}",
            inst.graph.edge_count(),
            if verdict.feasible && valid {
                "feasible+valid"
            } else {
                "NOT feasible/valid"
            }
        ));
    }
    report.line(
        9,
        passed,
        format!("planted (anchored): {}", details.join(", ")),
    );
}

fn main() -> ExitCode {
    let mut report = Report::default();
    let mut tally = Tally::default();
    criterion_1(&mut report);
    oracle_suite(&mut report, &mut tally, 2, DisjointMode::Edge);
    oracle_suite(&mut report, &mut tally, 3, DisjointMode::Vertex);
    criterion_4(&mut report, &mut tally);
    criterion_5(&mut report);
    criterion_8(&mut report, &mut tally);
    criterion_9(&mut report, &mut tally);
    report.line(
        6,
        tally.structural_violations.is_empty(),
        format!(
            "{} expansions checked (component acyclicity, order, class purity, distances), {} violations{}",
            tally.structural_checks,
            tally.structural_violations.len(),
            tally
                .structural_violations
                .first()
                .map(|e| format!(", first: {e}"))
                .unwrap_or_default()
        ),
    );
    report.line(
        7,
        tally.witness_failures.is_empty(),
        format!(
            "{} feasible verdicts, {} invalid witnesses{}",
            tally.feasible,
            tally.witness_failures.len(),
            tally
                .witness_failures
                .first()
                .map(|e| format!(", first: {e}"))
                .unwrap_or_default()
        ),
    );
    if report.print() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
