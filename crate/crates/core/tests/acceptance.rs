//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use twoclub_core::analysis::{
    branching_number, check_branch_completeness, empirical_branching, liu_case_224, liu_gap_check, BranchingVector,
    DEFAULT_TOLERANCE,
};
use twoclub_core::fixtures;
use twoclub_core::generate::{case_gadget, generate, GeneratorSpec, Model};
use twoclub_core::reduction::{
    reduce_exhaustively, rule3_strip_two_club_components, rule4_heavy_common_neighbors,
    rule5_resolve_degree_two_component, rule6_three_tail, Instance, ReductionStatus, RuleFiring, RuleId,
};
use twoclub_core::solver::{detect_case, solve_decision, solve_minimize, CaseId, SearchStats};
use twoclub_core::{oracle, Graph};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Solver result for one instance, kept for the fallback report.
struct Solved {
    agrees: bool,
    stats: SearchStats,
}

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut g = Graph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

fn random(n: usize, p: f64, seed: u64) -> Graph {
    generate(&GeneratorSpec {
        model: Model::Random { n, p },
        seed,
    })
    .unwrap()
    .graph
}

fn exhaustive_five() -> Outcome {
    let bad: Vec<u32> = (0u32..1024)
        .into_par_iter()
        .filter(|&mask| {
            let g = graph_from_mask(5, mask);
            let brute = oracle::opt_bruteforce(&g, g.edge_count()).unwrap().opt;
            Some(solve_minimize(&g).unwrap().opt) != brute
        })
        .collect();
    Outcome::new(
        bad.is_empty(),
        format!("1024 graphs, {} mismatches {:?}", bad.len(), bad),
    )
}

fn randomized(solved: &mut Vec<Solved>) -> Outcome {
    const PS: [f64; 3] = [0.2, 0.35, 0.5];
    let results: Vec<(usize, Solved)> = (0..500usize)
        .into_par_iter()
        .map(|i| {
            let (n, p) = (6 + i % 7, PS[i / 7 % 3]);
            let g = random(n, p, i as u64);
            let m = solve_minimize(&g).unwrap();
            let want = oracle::opt_3k(&g, g.edge_count()).unwrap();
            // the subset oracle is cheap enough on sparse instances
            let brute_ok = g.edge_count() > 18 || oracle::opt_bruteforce(&g, g.edge_count()).unwrap().opt == want;
            let agrees = Some(m.opt) == want && brute_ok;
            (i, Solved { agrees, stats: m.stats })
        })
        .collect();
    let bad: Vec<usize> = results.iter().filter(|(_, s)| !s.agrees).map(|&(i, _)| i).collect();
    solved.extend(results.into_iter().map(|(_, s)| s));
    Outcome::new(
        bad.is_empty(),
        format!("500 graphs, n 6-12, {} mismatches {:?}", bad.len(), bad),
    )
}

/// Rules 3-6 in order, first that fires.
fn next_firing(inst: &Instance) -> Option<RuleFiring> {
    rule3_strip_two_club_components(inst)
        .or_else(|| rule4_heavy_common_neighbors(inst))
        .or_else(|| rule5_resolve_degree_two_component(inst))
        .or_else(|| rule6_three_tail(inst))
}

/// Two non-adjacent hubs sharing `m` neighbours, plus randomly attached
/// extra vertices.
fn shared_hubs(m: usize, extra: usize, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = 2 + m + extra;
    let mut g = Graph::new(n);
    for c in 2..2 + m {
        g.add_edge(0, c).unwrap();
        g.add_edge(1, c).unwrap();
    }
    for v in 2 + m..n {
        g.add_edge(v, rng.gen_range(0..v)).unwrap();
        for u in 0..v {
            if rng.gen_bool(0.15) && (u, v) != (0, 1) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Every firing along the reduction of `(g, OPT(g))` preserves OPT. Returns
/// the rules that fired, or `None` on a violation.
fn reduction_is_sound(g: &Graph) -> Option<BTreeSet<RuleId>> {
    let opt = oracle::opt(g);
    let mut inst = Instance::new(g.clone(), opt as i64);
    let mut fired = BTreeSet::new();
    while inst.budget >= 0 && !inst.graph.is_empty() {
        let Some(f) = next_firing(&inst) else { break };
        let before = oracle::opt(&inst.graph);
        let after = oracle::opt(&f.instance.graph);
        if before != f.application.budget_decrease + after {
            return None;
        }
        fired.insert(f.application.rule);
        inst = f.instance;
    }
    let out = reduce_exhaustively(Instance::new(g.clone(), opt as i64));
    let residual = match out.status {
        ReductionStatus::AnsweredNo => return None,
        ReductionStatus::AnsweredYes => 0,
        ReductionStatus::Reduced => oracle::opt(&out.instance.graph),
    };
    (opt == out.deleted.len() + residual).then_some(fired)
}

fn reduction_soundness() -> Outcome {
    const TARGET: usize = 200;
    let rules = [
        RuleId::TwoClubComponent,
        RuleId::HeavyCommonNeighbors,
        RuleId::DegreeTwoComponent,
        RuleId::ThreeTail,
    ];
    let mut counts: BTreeMap<RuleId, usize> = rules.iter().map(|&r| (r, 0)).collect();
    let mut violations = 0;
    let mut tried = 0;
    for round in 0..40u64 {
        let batch: Vec<Option<BTreeSet<RuleId>>> = (0..200u64)
            .into_par_iter()
            .map(|j| {
                let seed = round * 200 + j;
                let g = match seed % 4 {
                    0 => random(6 + (seed as usize / 4) % 5, 0.15 + 0.05 * (seed % 5) as f64, seed),
                    1 => shared_hubs(2 + (seed as usize / 4) % 3, 2 + (seed as usize / 12) % 4, seed),
                    2 => random(7 + (seed as usize / 4) % 4, 0.2, seed),
                    _ => {
                        generate(&GeneratorSpec {
                            model: Model::Planted {
                                club_sizes: vec![2 + seed as usize % 3, 3, 1 + (seed as usize / 4) % 3],
                                noise_edges: 1 + (seed as usize / 8) % 3,
                            },
                            seed,
                        })
                        .unwrap()
                        .graph
                    }
                };
                reduction_is_sound(&g)
            })
            .collect();
        for fired in batch {
            tried += 1;
            match fired {
                None => violations += 1,
                Some(fired) => {
                    for r in fired {
                        if let Some(c) = counts.get_mut(&r) {
                            *c += 1;
                        }
                    }
                }
            }
        }
        if counts.values().all(|&c| c >= TARGET) {
            break;
        }
    }
    let enough = counts.values().all(|&c| c >= TARGET);
    let per_rule: Vec<String> = counts.iter().map(|(r, c)| format!("{r}={c}")).collect();
    Outcome::new(
        enough && violations == 0,
        format!(
            "{tried} instances, {violations} violations, firing instances {}",
            per_rule.join(" ")
        ),
    )
}

fn branch_completeness() -> Outcome {
    const TARGET: usize = 100;
    let mut lines = Vec::new();
    let mut pass = true;
    for case in &CaseId::ALL[..6] {
        let mut seen = BTreeSet::new();
        let mut graphs = vec![case_gadget(*case).unwrap()];
        seen.insert(graphs[0].edges().collect::<Vec<_>>());
        let mut seed = 0u64;
        while graphs.len() < TARGET && seed < 3000 {
            let spec = GeneratorSpec {
                model: Model::CaseFixture {
                    case: *case,
                    decorations: 1 + seed as usize % 4,
                },
                seed,
            };
            seed += 1;
            let Ok(out) = generate(&spec) else { continue };
            if seen.insert(out.graph.edges().collect::<Vec<_>>()) {
                graphs.push(out.graph);
            }
        }
        let failures = graphs
            .par_iter()
            .filter(|g| {
                let Ok(d) = detect_case(g) else { return true };
                let c = check_branch_completeness(g, &d.branch_sets, g.edge_count()).unwrap();
                d.case != *case || !c.is_complete()
            })
            .count();
        pass &= graphs.len() >= TARGET && failures == 0;
        lines.push(format!("{case}: {}/{} complete", graphs.len() - failures, graphs.len()));
    }
    Outcome::new(pass, lines.join(", "))
}

fn branching_constants() -> Outcome {
    let structural = |g: Graph| {
        let d = detect_case(&g).unwrap();
        BranchingVector::new(d.branching_vector().into_iter().map(|x| x as u32).collect()).unwrap()
    };
    let rows = [
        ("simple", BranchingVector::new(vec![1, 1, 1]).unwrap(), 3.0),
        ("case1", structural(fixtures::p5_with_pendant()), 2.415),
        ("case3", structural(fixtures::common_neighbor_gadget()), 2.562),
        ("case4.1", structural(fixtures::distance_three_gadget()), 2.562),
        ("case4.2.1", structural(fixtures::separate_w_gadget()), 2.695),
        ("case4.2.2", structural(fixtures::shared_w_gadget()), 2.67),
        ("liu original", liu_case_224().branching_vector(), 2.62),
        (
            "liu fixed",
            liu_case_224().with_branch(&[1, 4]).branching_vector(),
            2.761,
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, v, claimed) in rows {
        let x = branching_number(&v, DEFAULT_TOLERANCE);
        let ok = (x - claimed).abs() <= 0.005;
        pass &= ok;
        parts.push(format!("{name} {x:.4} vs {claimed}{}", if ok { "" } else { " (off)" }));
    }
    Outcome::new(pass, parts.join(", "))
}

fn planted_growth(solved: &mut Vec<Solved>) -> Outcome {
    const LIMIT: f64 = 2.75;
    let candidates: Vec<(u64, Graph)> = (0..600u64)
        .map(|seed| {
            let clubs = 3 + seed as usize % 4;
            let sizes = (0..clubs).map(|i| 3 + (seed as usize + i) % 4).collect();
            let spec = GeneratorSpec {
                model: Model::Planted {
                    club_sizes: sizes,
                    noise_edges: 4 + seed as usize % 9,
                },
                seed,
            };
            (seed, generate(&spec).unwrap().graph)
        })
        .collect();
    let mut per_k: BTreeMap<usize, usize> = BTreeMap::new();
    let mut picked = Vec::new();
    for chunk in candidates.chunks(32) {
        let done: Vec<(u64, Graph, usize)> = chunk
            .par_iter()
            .map(|(s, g)| (*s, g.clone(), solve_minimize(g).unwrap().opt))
            .collect();
        for (seed, g, opt) in done {
            // spread the 30 instances over k = 4..=10
            if (4..=10).contains(&opt) && picked.len() < 30 && per_k.get(&opt).copied().unwrap_or(0) < 5 {
                *per_k.entry(opt).or_default() += 1;
                picked.push((seed, g, opt));
            }
        }
        if picked.len() == 30 {
            break;
        }
    }
    let runs: Vec<(u64, usize, f64, Solved)> = picked
        .par_iter()
        .map(|(seed, g, k)| {
            let d = solve_decision(&Instance::new(g.clone(), *k as i64)).unwrap();
            let below = solve_decision(&Instance::new(g.clone(), *k as i64 - 1)).unwrap();
            let agrees = d.answer && !below.answer && oracle::opt_3k(g, *k).unwrap() == Some(*k);
            (
                *seed,
                *k,
                empirical_branching(&d.stats, *k),
                Solved { agrees, stats: d.stats },
            )
        })
        .collect();
    let worst = runs.iter().map(|r| r.2).fold(1.0, f64::max);
    let over: Vec<String> = runs
        .iter()
        .filter(|r| r.2 > LIMIT)
        .map(|r| format!("seed {} k {} growth {:.3}", r.0, r.1, r.2))
        .collect();
    let disagreements = runs.iter().filter(|r| !r.3.agrees).count();
    let count = runs.len();
    solved.extend(runs.into_iter().map(|r| r.3));
    Outcome::new(
        count == 30 && over.is_empty() && disagreements == 0,
        format!(
            "{count} instances, k spread {per_k:?}, max growth {worst:.3}, {disagreements} oracle disagreements{}",
            if over.is_empty() {
                String::new()
            } else {
                format!(", over {LIMIT}: {over:?}")
            }
        ),
    )
}

fn liu_gap() -> Outcome {
    let start = Instant::now();
    let gap = liu_gap_check();
    let fixed = liu_case_224().with_branch(&[1, 4]);
    let closed = !twoclub_core::analysis::has_one_four_gap(&fixed);
    let x = branching_number(&fixed.branching_vector(), DEFAULT_TOLERANCE);
    let fast = start.elapsed().as_secs_f64() < 1.0;
    Outcome::new(
        gap && closed && (x - 2.761).abs() <= 0.005 && fast,
        format!("gap {gap}, closed by {{1,4}} {closed}, fixed number {x:.4}"),
    )
}

fn closed_forms() -> Outcome {
    let mut bad = Vec::new();
    for s in 2..=15usize {
        let want = s.div_ceil(3) - 1;
        let g = fixtures::path(s);
        let brute = oracle::opt_bruteforce(&g, g.edge_count()).unwrap().opt;
        let by_rule = rule5_resolve_degree_two_component(&Instance::new(g.clone(), s as i64))
            .map_or(0, |f| f.application.budget_decrease);
        let reduced = reduce_exhaustively(Instance::new(g, s as i64)).deleted.len();
        if brute != Some(want) || by_rule != want || reduced != want {
            bad.push(format!("P{s}"));
        }
    }
    for n in 6..=12usize {
        let want = n.div_ceil(3);
        let g = fixtures::cycle(n);
        let brute = oracle::opt_bruteforce(&g, g.edge_count()).unwrap().opt;
        let by_rule = rule5_resolve_degree_two_component(&Instance::new(g.clone(), n as i64))
            .map_or(0, |f| f.application.budget_decrease);
        let reduced = reduce_exhaustively(Instance::new(g, n as i64)).deleted.len();
        if brute != Some(want) || by_rule != want || reduced != want {
            bad.push(format!("C{n}"));
        }
    }
    Outcome::new(bad.is_empty(), format!("paths 2-15, cycles 6-12, failures {bad:?}"))
}

fn fallback_visibility(solved: &[Solved]) -> Outcome {
    let mut total = SearchStats::default();
    let mut fallback_instances = 0;
    let mut fallback_wrong = 0;
    for s in solved {
        total.merge(&s.stats);
        if s.stats.fallback_count > 0 {
            fallback_instances += 1;
            if !s.agrees {
                fallback_wrong += 1;
            }
        }
    }
    let branching = total.branching_nodes().max(1);
    Outcome::new(
        fallback_wrong == 0,
        format!(
            "{} instances, {} fallback of {} branching nodes ({:.2}%), {} of {} nodes expanded; {fallback_instances} instances used it, {fallback_wrong} disagreed",
            solved.len(),
            total.fallback_count,
            branching,
            100.0 * total.fallback_count as f64 / branching as f64,
            total.fallback_count,
            total.nodes_expanded,
        ),
    )
}

type Criterion = Box<dyn FnOnce(&mut Vec<Solved>) -> Outcome>;

fn main() -> ExitCode {
    let mut solved = Vec::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "exhaustive oracle equivalence on 5 vertices",
            Box::new(|_| exhaustive_five()),
        ),
        ("randomized oracle equivalence", Box::new(randomized)),
        ("reduction soundness for rules 3-6", Box::new(|_| reduction_soundness())),
        ("branch completeness per case", Box::new(|_| branch_completeness())),
        ("branching numbers within 0.005", Box::new(|_| branching_constants())),
        ("empirical growth on planted instances", Box::new(planted_growth)),
        ("Liu Case 2.2.4 gap", Box::new(|_| liu_gap())),
        ("path and cycle closed forms", Box::new(|_| closed_forms())),
        (
            "fallback visibility",
            Box::new(|s: &mut Vec<Solved>| fallback_visibility(s)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run(&mut solved);
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!(
            "criterion {} {verdict} {name} [{:.1}s]: {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
