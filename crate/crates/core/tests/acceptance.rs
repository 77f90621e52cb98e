//! Acceptance criteria 1 to 8. Runs sequentially so the timings are not
//! skewed by other tests, prints one line per criterion, and exits nonzero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hassett_chow::chow::{heavy_light_presentation, keel_iso_check, pullback, ChowRing};
use hassett_chow::fan::{build_fan, compare_supports, projection_check, unimodularity_check};
use hassett_chow::graph_matroid::{
    closure, matroid_rank, one_connected_flats, reduced_weight_graph, EdgeSet,
};
use hassett_chow::linalg::ExactMatrix;
use hassett_chow::verify::{verify_sweep, Level};
use hassett_chow::weights::{classify, parse_weights, HeavyLightProfile};
use hassett_chow::VertexSet;

type Outcome = Result<String, String>;

fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

fn profiles_up_to(n: usize) -> Vec<HeavyLightProfile> {
    (4..=n).flat_map(HeavyLightProfile::all_with_points).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn losev_manin() -> Outcome {
    let p = classify(&parse_weights("1,1,1/10,1/10,1/10").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let pres = heavy_light_presentation(&p).map_err(|e| e.to_string())?;
    let gens: Vec<VertexSet> = pres.generators().iter().map(|g| g.set()).collect();
    let expected = vec![set(&[2, 3]), set(&[2, 4]), set(&[2, 5]), set(&[2, 3, 4]), set(&[2, 3, 5]), set(&[2, 4, 5])];
    ensure(gens == expected, || format!("generators {gens:?}"))?;

    let pairs: BTreeSet<BTreeSet<VertexSet>> =
        pres.sr_pairs().iter().map(|&(a, b)| [gens[a], gens[b]].into_iter().collect()).collect();
    ensure(pres.sr_pairs().len() == 9 && pairs.len() == 9, || format!("{} sr pairs", pres.sr_pairs().len()))?;
    // As printed: three rows of three products; {2,5}{2,3} repeats {2,3}{2,5}.
    let printed: [(&[usize], &[usize]); 9] = [
        (&[2, 3], &[2, 4]),
        (&[2, 3], &[2, 4, 5]),
        (&[2, 3], &[2, 5]),
        (&[2, 3, 5], &[2, 4, 5]),
        (&[2, 3, 5], &[2, 4]),
        (&[2, 3, 5], &[2, 3, 4]),
        (&[2, 5], &[2, 4]),
        (&[2, 5], &[2, 3, 4]),
        (&[2, 5], &[2, 3]),
    ];
    let printed: BTreeSet<BTreeSet<VertexSet>> =
        printed.iter().map(|(a, b)| [set(a), set(b)].into_iter().collect()).collect();
    ensure(printed.is_subset(&pairs), || "a printed product is missing".into())?;
    let extra: Vec<_> = pairs.difference(&printed).collect();
    let ninth: BTreeSet<VertexSet> = [set(&[2, 3, 4]), set(&[2, 4, 5])].into_iter().collect();
    ensure(extra == vec![&ninth], || format!("unexpected extra pairs {extra:?}"))?;

    let rows = pres.linear_relations().to_vec();
    let rank = ExactMatrix::from_i64_rows(&rows).rank();
    // generator order: 23 24 25 234 235 245
    let displayed: [[i64; 6]; 3] = [[1, -1, 0, 0, 1, -1], [1, 0, -1, 1, 0, -1], [0, 1, -1, 1, -1, 0]];
    for d in displayed {
        let mut with = rows.clone();
        with.push(d.to_vec());
        ensure(ExactMatrix::from_i64_rows(&with).rank() == rank, || format!("{d:?} not in the span"))?;
    }
    let f = build_fan(&p).map_err(|e| e.to_string())?;
    ensure(f.f_vector() == vec![6, 6], || format!("f-vector {:?}", f.f_vector()))?;
    Ok("6 generators, 9 sr pairs, 3 relations in span, f-vector (6,6)".into())
}

fn hilbert(m: usize, n: usize, expected: &[usize], limit: Duration) -> Outcome {
    let start = Instant::now();
    let p = HeavyLightProfile::canonical(m, n).map_err(|e| e.to_string())?;
    let h = ChowRing::new(heavy_light_presentation(&p).map_err(|e| e.to_string())?).hilbert_function();
    let t = start.elapsed();
    ensure(h == expected, || format!("{}: got {h:?}", p.describe()))?;
    ensure(t < limit, || format!("{} took {t:.2?}", p.describe()))?;
    Ok(format!("{} {h:?} in {t:.2?}", p.describe()))
}

fn hilbert_functions() -> Outcome {
    let cases: [(usize, usize, &[usize]); 4] =
        [(2, 5, &[1, 4, 1]), (5, 5, &[1, 5, 1]), (6, 6, &[1, 16, 16, 1]), (2, 6, &[1, 11, 11, 1])];
    let mut out = Vec::new();
    for (m, n, h) in cases {
        out.push(hilbert(m, n, h, Duration::from_secs(10))?);
    }
    Ok(out.join("; "))
}

fn keel() -> Outcome {
    for n in 4..=6 {
        let rep = keel_iso_check(n).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("n = {n}: {rep:?}"))?;
    }
    Ok("n = 4, 5, 6".into())
}

fn pullbacks() -> Outcome {
    let mut count = 0;
    for p in profiles_up_to(6) {
        let r = pullback(&p).map_err(|e| format!("{}: {e}", p.describe()))?;
        ensure(r.is_injective(), || format!("{}: {:?} vs {:?}", p.describe(), r.image_ranks, r.source_hilbert))?;
        count += 1;
    }
    Ok(format!("{count} weight profiles"))
}

fn smoothness() -> Outcome {
    let mut cones = 0;
    for p in profiles_up_to(6) {
        let f = build_fan(&p).map_err(|e| e.to_string())?;
        ensure(unimodularity_check(&f), || p.describe())?;
        cones += f.f_vector().iter().sum::<usize>();
    }
    Ok(format!("{cones} cones"))
}

fn projections() -> Outcome {
    let mut cones = 0;
    for p in profiles_up_to(6) {
        let rep = projection_check(&p).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("{}: {rep:?}", p.describe()))?;
        cones += rep.cones_checked;
    }
    Ok(format!("{cones} source cones"))
}

fn supports() -> Outcome {
    let mut points = 0;
    for p in profiles_up_to(5) {
        let cmp = compare_supports(&p, 200, 0x5eed).map_err(|e| e.to_string())?;
        ensure(cmp.disagreements.is_empty(), || format!("{}: {:?}", p.describe(), cmp.disagreements))?;
        points += cmp.points;
    }
    Ok(format!("{points} points"))
}

fn structure() -> Outcome {
    // Matroid axioms on fixed pseudo-random subsets, n <= 6.
    let mut state: u64 = 0x5eed_0008;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for p in profiles_up_to(6) {
        let g = reduced_weight_graph(&p).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let (x, y) = (next(), next());
            let pick = |mask: u64| -> EdgeSet {
                g.edges().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect()
            };
            let (a, b) = (pick(x), pick(y));
            let r = |e: &EdgeSet| matroid_rank(&g, e).unwrap();
            let union: EdgeSet = a.union(&b).copied().collect();
            let meet: EdgeSet = a.intersection(&b).copied().collect();
            ensure(r(&union) + r(&meet) <= r(&a) + r(&b), || format!("submodularity {}", p.describe()))?;
            let ca = closure(&g, &a).unwrap();
            let cu = closure(&g, &union).unwrap();
            ensure(a.is_subset(&ca) && ca.is_subset(&cu) && closure(&g, &ca).unwrap() == ca && r(&ca) == r(&a), || {
                format!("closure axioms {}", p.describe())
            })?;
        }
        ensure(!one_connected_flats(&g).is_empty(), || p.describe())?;
    }
    let start = Instant::now();
    let report = verify_sweep(Level::Full).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let failures: Vec<String> = report.failures().map(|c| format!("{} {}", c.instance, c.name)).collect();
    ensure(failures.is_empty(), || failures.join(", "))?;
    let covered: BTreeSet<&str> = report.checks.iter().map(|c| c.name).collect();
    for name in [
        "ring.hilbert_symmetry",
        "ring.pairing_full_rank",
        "ring.torsion_free",
        "ring.associative",
        "ring.commutative_unital",
        "ring.distributive",
        "matroid.axioms",
    ] {
        ensure(covered.contains(name), || format!("sweep lacks {name}"))?;
    }
    ensure(t < Duration::from_secs(300), || format!("full sweep took {t:.2?}"))?;
    Ok(format!("{} checks in the full sweep ({t:.2?})", report.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 8] = [
        (1, "Losev-Manin golden presentation", losev_manin, 1),
        (2, "Hilbert functions", hilbert_functions, 40),
        (3, "Keel consistency", keel, 60),
        (4, "pullback injectivity", pullbacks, 120),
        (5, "fan smoothness", smoothness, 30),
        (6, "projection", projections, 60),
        (7, "support equality", supports, 30),
        (8, "structural properties", structure, 300),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if t < Duration::from_secs(limit) {
                Ok(d)
            } else {
                Err(format!("{d}; over the {limit} s limit"))
            }
        });
        match outcome {
            Ok(d) => println!("criterion {id}: PASS {name} ({t:.2?}) {d}"),
            Err(e) => {
                failed += 1;
                println!("criterion {id}: FAIL {name} ({t:.2?}) {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
