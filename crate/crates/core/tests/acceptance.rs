//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). It exits 0 after reporting
//! unless `LATINLAB_ACCEPTANCE_STRICT=1` is set, in which case any FAIL
//! gives exit code 1. `LATINLAB_ACCEPTANCE=3,12` restricts the run to the
//! listed criteria.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use latinlab::absorb::{
    absorb_cycles, gadget_search, is_triangle_divisible, random_divisible_graph, smallest_mu, standalone_sphere,
};
use latinlab::count::{
    count_cuboctahedra_nondegenerate, count_cuboctahedra_nondegenerate_partial, count_cuboctahedra_total,
    count_intercalates, count_intercalates_partial, cuboctahedra_report, girth, CuboctClass,
};
use latinlab::extremal::{phi_lower_bound, phi_upper_bound, triangle_count, PhiOracle};
use latinlab::fracdec::{
    apex_set, boost, chi_uv, cycles_through, psi_cycle, psi_edge, BoostOutcome, RegParams, SixCycle, TriangleSet,
};
use latinlab::process::{
    a_of_t, analytic_log_count, analytic_partial, g_star_filter, log_count_estimate, run_process, sample_bnp,
    unconstrained_profile, ProcessConfig,
};
use latinlab::rng::{rng, sub_rng};
use latinlab::sample::{enumerate_squares, sample_rectangle_counted, JmChain, SamplerConfig};
use latinlab::{GroupSpec, LatinSquare, TripartiteGraph, Vertex};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn info(line: impl AsRef<str>) {
    println!("      info: {}", line.as_ref());
}

fn chain_squares(n: usize, count: usize, seed: u64) -> Vec<LatinSquare> {
    JmChain::new(n, &SamplerConfig::with_seed(seed)).take(count).collect()
}

// ---------------------------------------------------------------- 1, 2

fn quadrangle() -> Outcome {
    let mut tables: Vec<(String, LatinSquare)> =
        (1..=5).map(|n| (format!("Z{n}"), LatinSquare::group_table(GroupSpec::Cyclic(n)).unwrap())).collect();
    tables.push(("Z2^2".into(), LatinSquare::group_table(GroupSpec::ElementaryAbelian2(2)).unwrap()));
    let mut bad = Vec::new();
    for (name, sq) in &tables {
        let n = sq.order() as u64;
        let got = count_cuboctahedra_total(sq);
        if got != n.pow(5) {
            bad.push(format!("{name}: {got} != {}", n.pow(5)));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} group tables hit n^5", tables.len()) } else { bad.join("; ") })
}

fn two_group_intercalates() -> Outcome {
    let mut got = Vec::new();
    let mut ok = true;
    for k in 1..=3u32 {
        let c = count_intercalates(&LatinSquare::elementary_abelian(k).unwrap());
        let m = 1u64 << k;
        ok &= c == m * m * (m - 1) / 4;
        got.push(c);
    }
    ok &= got == [1, 12, 112];
    outcome(ok, format!("k=1..3 -> {got:?}, expected [1, 12, 112]"))
}

// ---------------------------------------------------------------- 3

fn shared(a: [usize; 2], b: [usize; 2]) -> u8 {
    let a: HashSet<usize> = a.into_iter().collect();
    b.iter().collect::<HashSet<_>>().into_iter().filter(|x| a.contains(x)).count() as u8
}

fn brute_cuboctahedra(sq: &LatinSquare) -> (u64, u64, HashMap<CuboctClass, u64>) {
    let n = sq.order();
    let l = |r: usize, c: usize| sq.get(r, c);
    let (mut total, mut nondeg) = (0, 0);
    let mut classes = HashMap::new();
    for r1 in 0..n {
        for r2 in 0..n {
            for c1 in 0..n {
                for c2 in 0..n {
                    for s1 in 0..n {
                        for s2 in 0..n {
                            for t1 in 0..n {
                                if l(r1, c1) != l(s1, t1) || l(r2, c1) != l(s2, t1) {
                                    continue;
                                }
                                for t2 in 0..n {
                                    if l(r1, c2) != l(s1, t2) || l(r2, c2) != l(s2, t2) {
                                        continue;
                                    }
                                    total += 1;
                                    let rows: HashSet<_> = [r1, r2, s1, s2].into();
                                    let cols: HashSet<_> = [c1, c2, t1, t2].into();
                                    let syms: HashSet<_> = [l(r1, c1), l(r1, c2), l(r2, c1), l(r2, c2)].into();
                                    nondeg += (rows.len() == 4 && cols.len() == 4 && syms.len() == 4) as u64;
                                    let same = (r1, r2, c1, c2) == (s1, s2, t1, t2);
                                    let class = match (r1 == r2, c1 == c2) {
                                        (true, true) if same => CuboctClass::SameCell,
                                        (true, true) => CuboctClass::CellPair,
                                        (true, false) if same => CuboctClass::SameRowPair,
                                        (true, false) => CuboctClass::RowPairs,
                                        (false, true) if same => CuboctClass::SameColumnPair,
                                        (false, true) => CuboctClass::ColumnPairs,
                                        (false, false) => CuboctClass::Full {
                                            shared_rows: shared([r1, r2], [s1, s2]),
                                            shared_cols: shared([c1, c2], [t1, t2]),
                                            repeated: l(r1, c1) == l(r2, c2) || l(r1, c2) == l(r2, c1),
                                        },
                                    };
                                    *classes.entry(class).or_insert(0) += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (total, nondeg, classes)
}

fn brute_intercalates(sq: &LatinSquare) -> u64 {
    let n = sq.order();
    let mut k = 0;
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    k += (sq.get(r1, c1) == sq.get(r2, c2) && sq.get(r1, c2) == sq.get(r2, c1)) as u64;
                }
            }
        }
    }
    k
}

fn oracle_equivalence() -> Outcome {
    let mut mismatches = Vec::new();
    for i in 0..50u64 {
        let n = 2 + (i as usize % 7);
        let sq = chain_squares(n, 1, 300 + i).remove(0);
        let (total, nondeg, classes) = brute_cuboctahedra(&sq);
        let rep = cuboctahedra_report(&sq);
        let fast: HashMap<_, _> = rep.breakdown.iter().filter(|&(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect();
        if count_cuboctahedra_total(&sq) != total
            || rep.total != total
            || count_cuboctahedra_nondegenerate(&sq) != nondeg
            || fast != classes
        {
            mismatches.push(format!("square {i} (n={n})"));
        }
    }
    let mut inter = 0;
    for n in 1..=10 {
        for (j, sq) in chain_squares(n, 5, 700 + n as u64).iter().enumerate() {
            if count_intercalates(sq) != brute_intercalates(sq) {
                mismatches.push(format!("intercalates n={n} #{j}"));
            }
            inter += 1;
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("50 squares n=2..8 vs 8-tuple oracle, {inter} squares n=1..10 vs quadruple oracle; mismatches {mismatches:?}"),
    )
}

// ---------------------------------------------------------------- 4

fn girth_equivalence() -> Outcome {
    let mut squares = enumerate_squares(4).unwrap();
    let enumerated = squares.len();
    squares.extend(chain_squares(12, 100, 44));
    let mut bad = 0;
    let mut free = 0;
    for sq in &squares {
        let g = girth(&sq.to_triples(), 6).unwrap();
        let none = count_intercalates(sq) == 0;
        free += none as usize;
        bad += (g.exceeds(6) != none) as usize;
    }
    outcome(
        bad == 0 && enumerated == 576,
        format!("{enumerated} order-4 + 100 order-12 squares, {bad} disagreements, {free} intercalate-free"),
    )
}

// ---------------------------------------------------------------- 5, 6

fn intercalate_mean() -> Outcome {
    let samples = 2000;
    let counts: Vec<f64> = chain_squares(20, samples, 7).iter().map(|s| count_intercalates(s) as f64).collect();
    let mean = counts.iter().sum::<f64>() / samples as f64;
    let sd = (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (samples - 1) as f64).sqrt();
    outcome(
        (85.0..=115.0).contains(&mean),
        format!("n=20, {samples} samples: mean {mean:.2} (s.e. {:.2}), band [85, 115]", sd / (samples as f64).sqrt()),
    )
}

fn poisson_pmf(lambda: f64, k: usize) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

fn rectangle_poisson() -> Outcome {
    let samples = 5000;
    let mut r = rng(6);
    let mut hist = [0usize; 9];
    let mut total = 0u64;
    let mut attempts = 0u64;
    for _ in 0..samples {
        let (rect, a) = sample_rectangle_counted(3, 100, 10_000_000, &mut r).unwrap();
        attempts += a;
        let k = latinlab::count::count_intercalates_rect(&rect);
        total += k;
        if (k as usize) < hist.len() {
            hist[k as usize] += 1;
        }
    }
    let mean = total as f64 / samples as f64;
    let tv = 0.5 * (0..9).map(|k| (hist[k] as f64 / samples as f64 - poisson_pmf(1.5, k)).abs()).sum::<f64>();
    outcome(
        (1.35..=1.65).contains(&mean) && tv <= 0.05,
        format!(
            "3x100, {samples} samples: mean {mean:.3} in [1.35, 1.65], TV to Poi(1.5) on 0..8 = {tv:.4} <= 0.05, acceptance {:.4}",
            samples as f64 / attempts as f64
        ),
    )
}

// ---------------------------------------------------------------- 7, 8

fn trp_trajectory() -> Outcome {
    let n = 100;
    let cps: Vec<u64> = (1..=10).map(|i| i * 800).collect();
    let mut cfg = ProcessConfig::new(n, 0, 1);
    cfg.checkpoints = cps.clone();
    cfg.m_target = Some(8000);
    cfg.verify_checkpoints = true;
    let run = run_process(&cfg).unwrap();
    let mut worst: f64 = 0.0;
    let mut line = Vec::new();
    let mut profile_worst: f64 = 0.0;
    for &t in &cps {
        let a = run.trajectory.available_at(t).unwrap() as f64;
        let ratio = a / a_of_t(n, t as f64);
        worst = worst.max((ratio - 1.0).abs());
        profile_worst = profile_worst.max((a / unconstrained_profile(n, t as f64) - 1.0).abs());
        line.push(format!("{t}:{ratio:.3}"));
    }
    info(format!("g=0 available / N^3(1-t/N^2)^3: worst deviation {:.2}%", 100.0 * profile_worst));
    let mut cfg6 = cfg.clone();
    cfg6.g = 6;
    let run6 = run_process(&cfg6).unwrap();
    let worst6 = cps
        .iter()
        .map(|&t| (run6.trajectory.available_at(t).unwrap() as f64 / a_of_t(n, t as f64) - 1.0).abs())
        .fold(0.0, f64::max);
    info(format!("g=6 available / A(t): worst deviation {:.2}%", 100.0 * worst6));
    outcome(worst <= 0.05, format!("n=100, g=0, available/A(t) at {}; worst deviation {:.1}% (band 5%)", line.join(" "), 100.0 * worst))
}

fn high_girth() -> Outcome {
    let n = 100;
    let run = run_process(&ProcessConfig::new(n, 6, 1)).unwrap();
    let m = run.trajectory.completed;
    let coverage = m as f64 / (n * n) as f64;
    let inter = count_intercalates_partial(&run.system);
    let est = log_count_estimate(&run.trajectory).unwrap();
    let restricted = analytic_partial(n, m);
    let rel = (est - restricted).abs() / restricted;
    info(format!(
        "full-range constant 3 log N - 13/4 = {:.4}; relative gap {:.2}%",
        analytic_log_count(n),
        100.0 * (est - analytic_log_count(n)).abs() / analytic_log_count(n)
    ));
    outcome(
        inter == 0 && coverage >= 0.9 && rel <= 0.02,
        format!(
            "n=100, g=6: {inter} intercalates, coverage {coverage:.4}, log-count {est:.4} vs analytic {restricted:.4} over t < {m} ({:.2}%)",
            100.0 * rel
        ),
    )
}

// ---------------------------------------------------------------- 9, 10

fn gstar_cuboctahedra() -> Outcome {
    let (n, alpha, trials) = (150usize, 0.2f64, 500u64);
    let target = (-24.0 * alpha).exp() * alpha.powi(8) * (n as f64).powi(4);
    let lib = latinlab::process::expected_nondegenerate_cuboctahedra(n, alpha);
    let total: u64 = (0..trials)
        .map(|i| {
            let b = sample_bnp(n, alpha / n as f64, 9000 + i).unwrap();
            count_cuboctahedra_nondegenerate_partial(&g_star_filter(&b))
        })
        .sum();
    let mean = total as f64 / trials as f64;
    outcome(
        (mean / target - 1.0).abs() <= 0.2 && (lib - target).abs() < 1e-9 * target,
        format!("n=150, alpha=0.2, {trials} trials: mean {mean:.3} vs {target:.3} ({:+.1}%, band 20%)", 100.0 * (mean / target - 1.0)),
    )
}

fn phi_machinery() -> Outcome {
    let oracle = PhiOracle::build(8).unwrap();
    let basics = oracle.profile[3] == 0 && oracle.profile[4] == 1 && oracle.phi(1) == Some(4);
    let top = oracle.profile[8];
    let mut order_bad = Vec::new();
    for target in 1..=top {
        let exact = oracle.phi(target).unwrap() as u64;
        let lo = phi_lower_bound(target);
        let (hi, _) = phi_upper_bound(target).unwrap();
        if !(lo <= exact && exact <= hi) {
            order_bad.push(target);
        }
    }
    let mut tri_bad = 0;
    for &(cells, inter, tris) in &oracle.states {
        tri_bad += (tris < cells as u64 + 4 * inter) as usize;
    }
    for m in 4..=8 {
        let (inter, w) = oracle.max_intercalates(m).unwrap();
        tri_bad += (triangle_count(w.triples()) < w.len() as u64 + 4 * inter) as usize;
    }
    outcome(
        basics && order_bad.is_empty() && tri_bad == 0,
        format!(
            "I*(3)={}, I*(4)={}, Phi(1)={:?}; bounds ordered for N=1..{top} (violations {order_bad:?}); {} witnesses, {tri_bad} below |Q|+4N(Q)",
            oracle.profile[3],
            oracle.profile[4],
            oracle.phi(1),
            oracle.states.len()
        ),
    )
}

// ---------------------------------------------------------------- 11

fn exactness(ts: &TriangleSet) -> Result<String, String> {
    let rel = |x: f64, want: f64, scale: f64| (x - want).abs() <= 1e-9 * scale.max(1.0);
    let n = ts.order() as u32;
    let mut checked = 0;
    for (u, v) in [(Vertex::new(0, 0), Vertex::new(0, 1)), (Vertex::new(1, 3), Vertex::new(1, n - 1)), (Vertex::new(2, 2), Vertex::new(2, 5))] {
        let chi = chi_uv(ts, u, v).map_err(|e| e.to_string())?;
        let scale = chi.sup_norm();
        for w in ts.graph().vertices() {
            let want = if w == u { 1.0 } else if w == v { -1.0 } else { 0.0 };
            if !rel(chi.vertex_weight(w), want, scale) {
                return Err(format!("chi_{u},{v} at {w} = {}", chi.vertex_weight(w)));
            }
        }
        checked += 1;
    }
    for &e in ts.edges().iter().step_by(ts.edge_count() / 3) {
        let (psi, _) = psi_edge(ts, e).map_err(|e| e.to_string())?;
        let scale = psi.sup_norm();
        if let Some(w) = ts.graph().vertices().find(|&w| !rel(psi.vertex_weight(w), 0.0, scale)) {
            return Err(format!("psi_e at {w} = {}", psi.vertex_weight(w)));
        }
        let cycles = cycles_through(ts, e);
        for c in cycles.iter().filter(|c| !apex_set(ts, c).is_empty()).take(5) {
            let j = psi_cycle(ts, c, 0).map_err(|e| e.to_string())?;
            let ids = c.edge_ids(ts.order());
            for &f in ts.edges() {
                let want = match ids.iter().position(|&x| x == f) {
                    Some(k) if SixCycle::distance(k, 0).is_multiple_of(2) => 1.0,
                    Some(_) => -1.0,
                    None => 0.0,
                };
                if !rel(j.edge_weight(f), want, 1.0) {
                    return Err(format!("psi_J,e edge weight {} where {want} expected", j.edge_weight(f)));
                }
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} chi/psi gadgets exact to 1e-9"))
}

fn band_report(ts: &TriangleSet, out: &BoostOutcome, target: f64) -> (bool, String) {
    let counts = out.edge_counts(ts);
    let (lo, hi) = (0.9 * target, 1.1 * target);
    let inside = counts.iter().filter(|&&c| (lo..=hi).contains(&(c as f64))).count();
    let (mn, mx) = (counts.iter().min().copied().unwrap_or(0), counts.iter().max().copied().unwrap_or(0));
    let (pmin, pmax) = out.phi.values().iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    let ok = inside == counts.len() && out.trace_monotone();
    (
        ok,
        format!(
            "{inside}/{} edges in [{lo:.3}, {hi:.3}] (counts {mn}..{mx}), trace of {} monotone={}, final disc {:.2e}, phi_k in [{pmin:.3}, {pmax:.3}], beta {:.4}, clamped {}, conditions: {}",
            counts.len(),
            out.trace.len(),
            out.trace_monotone(),
            out.trace.last().map_or(0.0, |r| r.max_disc),
            out.beta,
            out.clamped,
            out.conditions.summary()
        ),
    )
}

fn fracdec() -> Outcome {
    let n = 30;
    let small = TriangleSet::thinned(TripartiteGraph::complete(12), 0.9, &mut rng(30)).unwrap();
    let exact = exactness(&small);
    // a perfectly regular q = 0.9 instance meeting every hypothesis
    let regular = TriangleSet::residue_thinned(TripartiteGraph::complete(n), 10).unwrap();
    let params = RegParams { seed: 11, ..RegParams::new(1.0, 0.9) };
    let target = params.target(n);
    let (ok_reg, reg) = match boost(&regular, &params) {
        Ok(out) => band_report(&regular, &out, target),
        Err(e) => (false, format!("boost failed: {e}")),
    };
    info(format!("regular residue thinning: {reg}"));
    let random = TriangleSet::thinned(TripartiteGraph::complete(n), 0.9, &mut rng(1)).unwrap();
    let forced = RegParams { force: true, seed: 12, ..params.clone() };
    let (ok_rand, rnd) = match boost(&random, &forced) {
        Ok(out) => band_report(&random, &out, target),
        Err(e) => (false, format!("boost failed: {e}")),
    };
    info(format!("random q=0.9 thinning (forced): {rnd}"));
    let exact_ok = exact.is_ok();
    outcome(
        exact_ok && ok_reg && ok_rand,
        format!(
            "exactness: {}; n=30 band (1+-0.1)*{target}: regular {}, random {}",
            exact.unwrap_or_else(|e| format!("FAILED {e}")),
            if ok_reg { "ok" } else { "out of band" },
            if ok_rand { "ok" } else { "out of band" }
        ),
    )
}

// ---------------------------------------------------------------- 12, 13

fn absorbers() -> Outcome {
    let spheres_ok = (2..=10).all(|g| {
        let (_, s) = standalone_sphere(g).unwrap();
        s.verify() && s.out_decomposition.len() == 2 * g - 1 && s.in_decomposition.len() == 2 * g
    });
    let mut r = rng(12);
    let mut pipeline_ok = 0;
    let mut mus = Vec::new();
    let mut longest = 0;
    for _ in 0..20 {
        let l = random_divisible_graph([4, 4, 4], 6, 4, &mut r);
        let Some(mu) = smallest_mu(&l, 64) else { continue };
        mus.push(mu);
        let a = absorb_cycles(&l, mu).unwrap();
        let all: Vec<_> = a.all_cycles().cloned().collect();
        longest = longest.max(latinlab::absorb::decompose_into_tripartite_cycles(&l).unwrap().iter().map(Vec::len).max().unwrap_or(0));
        if is_triangle_divisible(&a.union)
            && all.iter().all(|c| c.len() <= 9)
            && latinlab::absorb::verify_cycle_partition(&a.union, &all)
        {
            pipeline_ok += 1;
        }
    }
    let t = Instant::now();
    let gadget = gadget_search(3, 3, 10_000_000);
    let took = t.elapsed();
    let gadget_ok = took < Duration::from_secs(60) && gadget.as_ref().is_ok_and(|g| g.verify() && g.aux.len() <= 3);
    outcome(
        spheres_ok && pipeline_ok == 20 && gadget_ok,
        format!(
            "spheres g=2..10 verified={spheres_ok}; pipeline exact on {pipeline_ok}/20 L (|X^j|=4, smallest mu {:?}, longest input cycle {longest}); A(C3) {} in {:.3?}",
            mus,
            match &gadget {
                Ok(g) => format!("with {} aux, verified={}", g.aux.len(), g.verify()),
                Err(e) => format!("failed: {e}"),
            },
            took
        ),
    )
}

fn cuboctahedra_trend() -> Outcome {
    let mut ratios = Vec::new();
    for (i, n) in [8usize, 16, 24, 32].into_iter().enumerate() {
        let squares = chain_squares(n, 200, 1300 + i as u64);
        let mean = squares.iter().map(|s| count_cuboctahedra_total(s) as f64).sum::<f64>() / squares.len() as f64;
        ratios.push((n, mean / (n as f64).powi(4)));
    }
    let in_band = ratios.iter().all(|&(_, r)| (3.0..=6.0).contains(&r));
    let closer = (ratios[3].1 - 4.0).abs() < (ratios[0].1 - 4.0).abs();
    let shown: Vec<String> = ratios.iter().map(|(n, r)| format!("n={n}: {r:.4}")).collect();
    outcome(in_band && closer, format!("total/n^4 over 200 squares each: {}; closer to 4 at 32 than 8: {closer}", shown.join(", ")))
}

fn main() {
    let only: Option<HashSet<usize>> =
        std::env::var("LATINLAB_ACCEPTANCE").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let strict = std::env::var("LATINLAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    type Check = fn() -> Outcome;
    let criteria: [(usize, &str, u64, Check); 13] = [
        (1, "quadrangle condition", 1, quadrangle),
        (2, "2-group intercalates", 1, two_group_intercalates),
        (3, "oracle equivalence", 300, oracle_equivalence),
        (4, "girth equivalence", 120, girth_equivalence),
        (5, "intercalate mean", 600, intercalate_mean),
        (6, "rectangle Poisson", 600, rectangle_poisson),
        (7, "TRP trajectory", 300, trp_trajectory),
        (8, "high-girth process", 900, high_girth),
        (9, "G* cuboctahedra", 600, gstar_cuboctahedra),
        (10, "Phi machinery", 1800, phi_machinery),
        (11, "fracdec exactness and boost", 300, fracdec),
        (12, "absorber constructions", 600, absorbers),
        (13, "cuboctahedra trend", 1800, cuboctahedra_trend),
    ];
    let mut passed = 0;
    let mut run = 0;
    for (id, name, budget, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let o = check();
        let took = t.elapsed();
        let pass = o.pass && took.as_secs_f64() < budget as f64;
        run += 1;
        passed += pass as usize;
        println!(
            "{} {id:>2} {name}: {} [{:.1} s, budget {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {passed}/{run} criteria pass");
    if strict && passed < run {
        std::process::exit(1);
    }
    let _ = sub_rng;
}
