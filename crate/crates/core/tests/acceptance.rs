//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p arbcolor --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arbcolor::arbdefective::{arbdefective_coloring, simple_arbdefective};
use arbcolor::decomposition::{be08_legal_coloring, h_partition};
use arbcolor::graph::{chromatic_number, degeneracy, exact_arboricity, generate_graph};
use arbcolor::legal::{
    coloring_driver, legal_coloring, mis_from_coloring, DriverConfig, DriverMode, GrowthFn, LegalRun,
};
use arbcolor::orientation::{color_from_orientation, complete_orientation, partial_orientation};
use arbcolor::recolor::{arb_kuhn, defective_coloring};
use arbcolor::verify::{check_coloring, defect_of, validate_orientation, Claim, OrientationClaims};
use arbcolor::{degree_bound, Coloring, Graph, GraphKind, GraphSpec, VertexId};

use common::{corpus, Case, EPSILON};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: arbcolor::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn legal(g: &Graph, c: &Coloring, what: &str) -> Result<(), String> {
    let report = ok(check_coloring(g, c, &[Claim::Legal]), what)?;
    ensure!(report.passed(), "{what}: {:?}", report.failures);
    Ok(())
}

fn drivers(a: usize) -> Vec<(String, DriverConfig)> {
    let modes = vec![
        DriverMode::LegalOA { mu: 0.5 },
        DriverMode::Superlog { mu_prime: 0.5 },
        DriverMode::TradeoffF {
            f: GrowthFn::LogLogSquared,
        },
        DriverMode::TradeoffF {
            f: GrowthFn::LogCubed,
        },
        DriverMode::TradeoffF {
            f: GrowthFn::Identity,
        },
        DriverMode::Eta { eta: 0.34 },
        DriverMode::Eta { eta: 1.0 },
        DriverMode::FastG {
            eta: 0.5,
            g: GrowthFn::LogLogSquared,
        },
        DriverMode::Scaled { t: a.min(2), mu: 0.5 },
    ];
    modes
        .into_iter()
        .map(|m| (format!("{m:?}"), DriverConfig::new(m)))
        .collect()
}

fn c1_legality(cases: &[Case]) -> Outcome {
    let mut runs = 0;
    for c in cases {
        let g = c.graph();
        let label = c.label();
        for (name, config) in drivers(c.a) {
            let run = ok(coloring_driver(g, c.a, &config), &format!("{label} {name}"))?;
            legal(g, &run.coloring, &format!("{label} {name}"))?;
            runs += 1;
        }
        let (be08, _) = ok(be08_legal_coloring(g, c.a, EPSILON), &label)?;
        legal(g, &be08, &format!("{label} be08"))?;
        ensure!(
            be08.palette_size() as usize <= degree_bound(c.a, EPSILON) + 1,
            "{label} be08 palette {}",
            be08.palette_size()
        );
        let sigma = ok(complete_orientation(g, c.a, EPSILON), &label)?.orientation;
        let (from_sigma, _) = ok(color_from_orientation(&sigma), &label)?;
        legal(g, &from_sigma, &format!("{label} color_from_orientation"))?;
        runs += 2;
    }
    Ok(format!("{runs} colorings on {} graphs are legal", cases.len()))
}

/// Connected-ish 12-vertex samples from a color class, grown by random walk.
fn class_samples(g: &Graph, class: &[VertexId], rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<VertexId>> {
    let in_class: std::collections::HashSet<_> = class.iter().copied().collect();
    let mut out = Vec::new();
    for _ in 0..count {
        let mut picked = vec![*class.choose(rng).unwrap()];
        for _ in 0..200 {
            if picked.len() == 12.min(class.len()) {
                break;
            }
            let from = *picked.choose(rng).unwrap();
            let next: Vec<_> = g
                .neighbors(from)
                .iter()
                .filter(|w| in_class.contains(w) && !picked.contains(w))
                .copied()
                .collect();
            match next.choose(rng) {
                Some(&w) => picked.push(w),
                None => {
                    let w = *class.choose(rng).unwrap();
                    if !picked.contains(&w) {
                        picked.push(w);
                    }
                }
            }
        }
        out.push(picked);
    }
    out
}

fn c2_arbdefect(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    let mut samples = 0;
    for c in cases {
        let g = c.graph();
        for t in 1..=3 {
            let label = format!("{} k=t={t}", c.label());
            let bound = c.a / t + degree_bound(c.a, EPSILON) / t;
            let (res, _) = ok(arbdefective_coloring(g, c.a, t, t, EPSILON), &label)?;
            ensure!(
                res.bound == bound,
                "{label}: reported bound {} != {bound}",
                res.bound
            );
            for v in g.vertices() {
                ensure!(
                    res.same_colored_parents(v) <= bound,
                    "{label}: vertex {v} has {} same-colored parents",
                    res.same_colored_parents(v)
                );
            }
            let claim = Claim::Arbdefect {
                bound,
                witness: Some(&res.witness),
            };
            let report = ok(check_coloring(g, &res.coloring, &[claim]), &label)?;
            ensure!(report.passed(), "{label}: {:?}", report.failures);
            for class in &report.classes {
                ensure!(
                    class.witness_valid && class.degeneracy <= bound,
                    "{label}: class {class:?}"
                );
            }
            for members in res.coloring.classes().values() {
                let subsets = if g.n() <= 12 {
                    vec![members.clone()]
                } else {
                    class_samples(g, members, &mut rng, 3)
                };
                for s in subsets {
                    let (sub, _) = g.induced(&s);
                    let arb = ok(exact_arboricity(&sub), &label)?;
                    ensure!(
                        arb <= bound,
                        "{label}: class sample {s:?} has arboricity {arb} > {bound}"
                    );
                    samples += 1;
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} colorings certified, {samples} exact-arboricity samples"
    ))
}

fn c3_partial_orientation(cases: &[Case]) -> Outcome {
    let mut checked = 0;
    for c in cases {
        let g = c.graph();
        for t in 1..=3 {
            let label = format!("{} t={t}", c.label());
            let run = ok(partial_orientation(g, c.a, t, EPSILON), &label)?;
            let claims = OrientationClaims {
                acyclic: true,
                complete: false,
                out_degree: Some(degree_bound(c.a, EPSILON)),
                deficit: Some(c.a / t),
                length: None,
            };
            let report = validate_orientation(g, &run.orientation, &claims);
            ensure!(report.passed(), "{label}: {:?}", report.failures);
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} partial orientations within deficit and out-degree"
    ))
}

/// Least-squares `c` for `r ≈ c·x` and the worst relative deviation.
fn fit_through_origin(xs: &[f64], rs: &[usize]) -> (f64, f64) {
    let c =
        xs.iter().zip(rs).map(|(x, &r)| x * r as f64).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
    let dev = xs
        .iter()
        .zip(rs)
        .map(|(x, &r)| ((r as f64 - c * x) / (c * x)).abs())
        .fold(0.0, f64::max);
    (c, dev)
}

const SWEEP_A: usize = 3;
const SWEEP_BRANCHING: usize = 5;
const SWEEP_T: usize = 2;
const SCALING_TOLERANCE: f64 = 0.25;

fn c4_scaling(cases: &[Case]) -> Outcome {
    let mut xs = Vec::new();
    let mut h_rounds = Vec::new();
    let mut po_rounds = Vec::new();
    for k in 8..=13 {
        let spec = GraphSpec::new(
            GraphKind::LayeredForests {
                a: SWEEP_A,
                branching: SWEEP_BRANCHING,
            },
            1 << k,
            1,
        );
        let g = ok(generate_graph(&spec), "sweep")?.graph;
        let (_, trace) = ok(h_partition(&g, SWEEP_A, EPSILON), "sweep")?;
        let run = ok(partial_orientation(&g, SWEEP_A, SWEEP_T, EPSILON), "sweep")?;
        xs.push(k as f64);
        h_rounds.push(trace.rounds);
        po_rounds.push(run.trace.rounds);
        simple_rounds(&g, &run.orientation, &spec.label())?;
    }
    for c in cases {
        let run = ok(partial_orientation(c.graph(), c.a, 2, EPSILON), &c.label())?;
        simple_rounds(c.graph(), &run.orientation, &c.label())?;
    }
    let (ch, dh) = fit_through_origin(&xs, &h_rounds);
    let (cp, dp) = fit_through_origin(&xs, &po_rounds);
    let detail = format!(
        "h_partition {h_rounds:?} ≈ {ch:.3}·log n (max dev {:.0}%), partial_orientation {po_rounds:?} ≈ {cp:.3}·log n (max dev {:.0}%)",
        dh * 100.0,
        dp * 100.0
    );
    ensure!(dh <= SCALING_TOLERANCE && dp <= SCALING_TOLERANCE, "{detail}");
    Ok(detail)
}

fn simple_rounds(g: &Graph, sigma: &arbcolor::PartialOrientation, label: &str) -> Result<(), String> {
    let len = ok(sigma.metrics(), label)?.length;
    for k in 1..=3 {
        let (_, trace) = ok(simple_arbdefective(sigma, k), label)?;
        ensure!(
            trace.rounds <= len + 1,
            "{label}: simple_arbdefective took {} rounds, length {len}",
            trace.rounds
        );
    }
    debug_assert_eq!(sigma.graph(), g);
    Ok(())
}

fn check_product_invariant(run: &LegalRun, a: usize, label: &str) -> Result<(), String> {
    for it in &run.iterations {
        let budget = (3.0 + EPSILON).powi(it.iteration as i32) * a as f64;
        ensure!(
            (it.alpha * it.members) as f64 <= budget,
            "{label}: iteration {} has α·|G| = {}·{} > {budget}",
            it.iteration,
            it.alpha,
            it.members
        );
    }
    Ok(())
}

fn c5_legal_budget(cases: &[Case]) -> Outcome {
    let mu = 0.5;
    let c_exp = 4.0 / mu + 1.0;
    let mut iterations = 0;
    for c in cases {
        let label = c.label();
        let p = ((c.a as f64).powf(mu / 2.0).ceil() as usize).max(2);
        let run = ok(legal_coloring(c.graph(), c.a, p, EPSILON), &label)?;
        legal(c.graph(), &run.coloring, &label)?;
        let budget = (3.0 + EPSILON).powf(c_exp) * c.a as f64;
        ensure!(
            run.coloring.palette_size() as f64 <= budget,
            "{label}: {} colors > {budget}",
            run.coloring.palette_size()
        );
        check_product_invariant(&run, c.a, &label)?;
        iterations += run.iterations.len();
    }
    // p large enough that the loop actually iterates.
    let mut extra = Vec::new();
    for (kind, n, seed, p) in [
        (GraphKind::ForestUnion { a: 16 }, 4096, 16, 8),
        (GraphKind::ForestUnion { a: 16 }, 2000, 15, 5),
        (GraphKind::ForestUnion { a: 8 }, 4096, 14, 5),
        (GraphKind::Clique, 20, 0, 5),
    ] {
        let c = common::case(kind, n, seed);
        let label = format!("{} p={p}", c.label());
        let run = ok(legal_coloring(c.graph(), c.a, p, EPSILON), &label)?;
        legal(c.graph(), &run.coloring, &label)?;
        ensure!(!run.iterations.is_empty(), "{label}: loop did not iterate");
        check_product_invariant(&run, c.a, &label)?;
        extra.push(format!(
            "{label}: {} iterations, {} colors",
            run.iterations.len(),
            run.coloring.palette_size()
        ));
    }
    Ok(format!(
        "corpus within (3+ε)^{c_exp}·a ({iterations} iterations); {}",
        extra.join("; ")
    ))
}

/// Largest colors/p² over the corpus, recorded from the first green run.
const DEFECTIVE_COLOR_CONSTANT: f64 = 22.0;

fn c6_defective(cases: &[Case]) -> Outcome {
    let mut worst = (0.0, String::new());
    let mut runs = 0;
    for c in cases {
        let g = c.graph();
        let delta = g.max_degree();
        for p in [1, 2, 3, 4, 8, delta + 1] {
            let label = format!("{} p={p}", c.label());
            let run = ok(defective_coloring(g, delta, p), &label)?;
            let (defect, at) = defect_of(g, &run.coloring);
            ensure!(
                defect <= delta / p,
                "{label}: vertex {at:?} has defect {defect} > {}",
                delta / p
            );
            let ratio = run.coloring.palette_size() as f64 / (p * p) as f64;
            if ratio > worst.0 {
                worst = (ratio, label.clone());
            }
            runs += 1;
        }
    }
    ensure!(
        worst.0 <= DEFECTIVE_COLOR_CONSTANT,
        "colors/p² reached {:.2} on {} (baseline {DEFECTIVE_COLOR_CONSTANT})",
        worst.0,
        worst.1
    );
    Ok(format!(
        "{runs} runs, worst colors/p² = {:.2} ({}) ≤ {DEFECTIVE_COLOR_CONSTANT}",
        worst.0, worst.1
    ))
}

fn c7_arb_recolor(cases: &[Case]) -> Outcome {
    let mut steps = 0;
    for c in cases {
        let g = c.graph();
        let sigma = ok(complete_orientation(g, c.a, EPSILON), &c.label())?.orientation;
        let out = degree_bound(c.a, EPSILON);
        let mut targets = vec![1, 2, c.a, out / 3];
        targets.retain(|&d| d > 0);
        targets.dedup();
        for d in targets {
            let label = format!("{} d={d}", c.label());
            let run = ok(arb_kuhn(g, &sigma, out, d), &label)?;
            for (step, coloring) in run.steps.iter().zip(&run.history) {
                for v in g.vertices() {
                    let same = sigma
                        .parents(v)
                        .iter()
                        .filter(|&&w| coloring.color(w) == coloring.color(v))
                        .count();
                    ensure!(
                        same <= step.params.d,
                        "{label}: vertex {v} has {same} same-colored parents after a step with d={}",
                        step.params.d
                    );
                }
                steps += 1;
            }
            for v in g.vertices() {
                let same = sigma
                    .parents(v)
                    .iter()
                    .filter(|&&w| run.coloring.color(w) == run.coloring.color(v))
                    .count();
                ensure!(same <= d, "{label}: final coloring gives {v} {same} parents");
            }
        }
    }
    Ok(format!("{steps} recolor steps respect their parent bound"))
}

fn c8_length_coloring(cases: &[Case]) -> Outcome {
    let mut small = 0;
    for c in cases {
        let g = c.graph();
        let label = c.label();
        let sigma = ok(complete_orientation(g, c.a, EPSILON), &label)?.orientation;
        let length = ok(sigma.metrics(), &label)?.length;
        let (coloring, _) = ok(color_from_orientation(&sigma), &label)?;
        legal(g, &coloring, &label)?;
        ensure!(
            coloring.palette_size() as usize == length + 1,
            "{label}: palette {} for length {length}",
            coloring.palette_size()
        );
        if g.n() <= 12 {
            let chi = ok(chromatic_number(g), &label)?;
            ensure!(length + 1 >= chi, "{label}: length {length} but χ = {chi}");
            small += 1;
        }
    }
    Ok(format!(
        "palette = length+1 everywhere; length ≥ χ-1 on {small} small graphs"
    ))
}

fn c9_mis(cases: &[Case]) -> Outcome {
    let mut runs = 0;
    for c in cases {
        let g = c.graph();
        let label = c.label();
        let (be08, _) = ok(be08_legal_coloring(g, c.a, EPSILON), &label)?;
        let eta = ok(
            coloring_driver(g, c.a, &DriverConfig::new(DriverMode::Eta { eta: 0.34 })),
            &label,
        )?
        .coloring;
        for coloring in [be08, eta] {
            let (mis, trace) = ok(mis_from_coloring(g, &coloring), &label)?;
            let mut inside = vec![false; g.n() + 1];
            for &v in &mis {
                inside[v] = true;
            }
            for &(u, v) in g.edges() {
                ensure!(!(inside[u] && inside[v]), "{label}: {u} and {v} both in the MIS");
            }
            for v in g.vertices() {
                ensure!(
                    inside[v] || g.neighbors(v).iter().any(|&w| inside[w]),
                    "{label}: {v} could join the MIS"
                );
            }
            let colors = coloring.distinct_colors();
            ensure!(
                trace.rounds <= 2 * colors,
                "{label}: {} rounds for {colors} colors",
                trace.rounds
            );
            runs += 1;
        }
    }
    Ok(format!("{runs} independent, maximal sets within 2·colors rounds"))
}

fn c10_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut with_edges = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=10);
        let density: f64 = rng.gen();
        let edges: Vec<_> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let g = ok(Graph::from_edges(n, edges), "random graph")?;
        let arb = ok(exact_arboricity(&g), "arboricity")?;
        let degen = degeneracy(&g);
        if g.m() > 0 {
            ensure!(
                arb <= degen && degen < 2 * arb,
                "graph {i}: arboricity {arb}, degeneracy {degen}, edges {:?}",
                g.edges()
            );
            with_edges += 1;
        } else {
            ensure!(
                arb == 0 && degen == 0,
                "graph {i}: edgeless but arb {arb}, degen {degen}"
            );
        }
    }
    let mut unions = 0;
    for a in 1..=4 {
        for seed in 0..10 {
            let n = 2 + (seed as usize % 9);
            let spec = GraphSpec::new(GraphKind::ForestUnion { a }, n, seed);
            let generated = ok(generate_graph(&spec), "forest union")?;
            let cert = generated
                .forest_certificate
                .as_ref()
                .ok_or("forest union without certificate")?;
            ensure!(
                cert.iter().all(|&f| (1..=a).contains(&f)),
                "{}: certificate index out of range",
                spec.label()
            );
            for f in 1..=a {
                let g = &generated.graph;
                let forest: Vec<_> = g
                    .edges()
                    .iter()
                    .zip(cert)
                    .filter(|(_, &i)| i == f)
                    .map(|(&e, _)| e)
                    .collect();
                let sub = ok(Graph::from_edges(g.n(), forest), "forest")?;
                ensure!(degeneracy(&sub) <= 1, "{}: forest {f} has a cycle", spec.label());
            }
            let arb = ok(exact_arboricity(&generated.graph), "arboricity")?;
            ensure!(arb <= a, "{}: arboricity {arb} > {a}", spec.label());
            unions += 1;
        }
    }
    Ok(format!(
        "{with_edges} graphs with edges satisfy arb ≤ degen ≤ 2arb-1; {unions} forest unions certified"
    ))
}

fn main() -> ExitCode {
    let cases = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("legality", Box::new(|| c1_legality(&cases))),
        ("arbdefect certification", Box::new(|| c2_arbdefect(&cases))),
        (
            "partial orientation contract",
            Box::new(|| c3_partial_orientation(&cases)),
        ),
        ("round-count scaling", Box::new(|| c4_scaling(&cases))),
        ("legal coloring budget", Box::new(|| c5_legal_budget(&cases))),
        ("defective coloring", Box::new(|| c6_defective(&cases))),
        ("arb recolor invariant", Box::new(|| c7_arb_recolor(&cases))),
        (
            "coloring from orientation",
            Box::new(|| c8_length_coloring(&cases)),
        ),
        ("mis", Box::new(|| c9_mis(&cases))),
        ("oracle self-consistency", Box::new(c10_oracles)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
