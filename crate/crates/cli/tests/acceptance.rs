//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each criterion recomputes its expected values independently of
//! the code path under test where that is possible.

use satedge_core::constructions::{h1, turan_number};
use satedge_core::formulas::{
    construction_modulus, f_h1_closed, int, margin_f, margin_g, quadratic_minimum_identity, ratio, Rational,
};
use satedge_core::graph::{choose2, contains_clique, enumerate_cliques};
use satedge_core::packing::{
    admissible_switches, analyze, certify_remainder_exhaustive, check_switch_inequality, ell_split, max_packing,
    refine_packing, switch, PackingOptions,
};
use satedge_core::saturation::count_saturating;
use satedge_core::search::{min_saturating, SearchOptions};
use satedge_core::verify::{random_suite, EXHAUSTIVE_LIMIT};
use satedge_core::{Graph, VertexSet};
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Saturating pairs by adding each non-edge and looking for a K_{p} through it.
fn brute_saturating(g: &Graph, p: usize) -> u64 {
    g.non_edges()
        .into_iter()
        .filter(|&(u, v)| {
            let h = g.with_edge(u, v).expect("non-edge");
            enumerate_cliques(&h, p).any(|c| c.contains(&u) && c.contains(&v))
        })
        .count() as u64
}

fn construction_fidelity() -> Outcome {
    let mut instances = 0;
    for p in 3..=5u64 {
        for x in 1..=2u64 {
            for y in 0..=2u64 {
                let Ok(b) = h1(p, x, y) else { continue };
                let g = &b.graph;
                let n = construction_modulus(p) * x + y;
                ensure(g.order() as u64 == n, || format!("h1({p},{x},{y}) has {} vertices, want {n}", g.order()))?;
                // Turán number from part sizes: all pairs minus pairs inside parts
                let (q, t) = (n / (p - 1), n % (p - 1));
                let inside = t * choose2(q + 1) + (p - 1 - t) * choose2(q);
                let ex = choose2(n) - inside;
                ensure(g.size() as u64 == ex, || format!("h1({p},{x},{y}) has {} edges, want {ex}", g.size()))?;
                ensure(contains_clique(g, p as usize + 1).is_none(), || format!("h1({p},{x},{y}) has a K_{}", p + 1))?;
                let count = count_saturating(g, p as usize + 1).map_err(|e| e.to_string())?.total;
                let closed = f_h1_closed(p, x, y).map_err(|e| e.to_string())?;
                ensure(int(count) == closed, || format!("h1({p},{x},{y}): count {count} vs closed form {closed}"))?;
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances"))
}

fn divisible_case() -> Outcome {
    let g = h1(3, 1, 0).map_err(|e| e.to_string())?.graph;
    let count = count_saturating(&g, 4).map_err(|e| e.to_string())?.total;
    let n = int(66);
    let formula = ratio(2, 33) * &n * &n - ratio(3, 11) * &n;
    ensure(count == 246 && int(count) == formula, || format!("count {count}, formula {formula}"))?;
    Ok("f_4(h1(3,1,0)) = 246".into())
}

fn margin_sweep() -> Outcome {
    ensure(margin_f(3) == ratio(7, 10), || format!("f(3) = {}", margin_f(3)))?;
    ensure(margin_g(3) == int(4), || format!("g(3) = {}", margin_g(3)))?;
    let zero = Rational::from_integer(0.into());
    for p in 3..=10_000i64 {
        ensure(margin_f(p) >= zero, || format!("f({p}) < 0"))?;
        ensure(margin_g(p) >= zero, || format!("g({p}) < 0"))?;
    }
    Ok("f, g >= 0 on 3..=10000; f(3) = 7/10, g(3) = 4".into())
}

fn quadratic_identity() -> Outcome {
    let mut checked = 0;
    for p in 3..=50u64 {
        for n in [1u64, 2, 66, 1_000_000] {
            let c = quadratic_minimum_identity(p, n).map_err(|e| e.to_string())?;
            ensure(c.holds, || format!("p={p} n={n}: {c:?}"))?;
            // oracle: the vertex of A r² − B r + C is at B/(2A) in the unscaled quadratic too
            let (a, b, _) = satedge_core::formulas::scaled_quadratic_coefficients(n, p);
            ensure(c.minimizer == b / (int(2) * a), || format!("p={p} n={n}: minimiser"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, n) pairs"))
}

fn packing_identities() -> Outcome {
    let mut hosts = random_suite(200, 4, 20, 3, 20_240);
    hosts.push(h1(3, 1, 0).map_err(|e| e.to_string())?.graph);
    for (i, g) in hosts.iter().enumerate() {
        let n = g.order();
        let pk = refine_packing(g, &max_packing(g, 3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(pk.certified, || format!("host {i}: packing not certified"))?;
        for (k, r) in pk.cliques.iter().enumerate() {
            let a = analyze(g, &pk, k).map_err(|e| e.to_string())?;
            // direct recount of the class sizes and A-sets
            let by_class = |j: usize| pk.remainder.iter().filter(|&v| r.iter().filter(|&&w| g.has_edge(v, w)).count() == j).count();
            let below: usize = (0..3).map(by_class).sum();
            ensure(below == n - 3 * pk.len() && by_class(3) == 0, || format!("host {i} clique {k}: class sum"))?;
            ensure(a.z_sum_holds && a.a_sum_holds, || format!("host {i} clique {k}: identities {a:?}"))?;
            let mut seen = VertexSet::new(n);
            for (skip, set) in a.a_sets.iter().enumerate() {
                let want: Vec<usize> = pk
                    .remainder
                    .iter()
                    .filter(|&v| r.iter().enumerate().all(|(j, &w)| j == skip || g.has_edge(v, w)))
                    .collect();
                ensure(*set == want, || format!("host {i} clique {k}: A_{skip}"))?;
                for (x, &u) in set.iter().enumerate() {
                    ensure(!seen.contains(u), || format!("host {i} clique {k}: A-sets overlap at {u}"))?;
                    seen.insert(u);
                    ensure(set[x + 1..].iter().all(|&w| !g.has_edge(u, w)), || format!("host {i}: A_{skip} not independent"))?;
                }
            }
            ensure(seen.len() == by_class(2), || format!("host {i} clique {k}: A-sets miss Z_2"))?;
        }
        let (l1, l2) = ell_split(g, &pk).map_err(|e| e.to_string())?;
        let total = brute_saturating(g, 4);
        ensure(l1 + l2 == total, || format!("host {i}: l1 + l2 = {} but f_4 = {total}", l1 + l2))?;
    }
    Ok(format!("{} hosts", hosts.len()))
}

fn switch_inequality() -> Outcome {
    let hosts = random_suite(60, 6, EXHAUSTIVE_LIMIT, 3, 7_777);
    let mut switches = 0;
    for (i, g) in hosts.iter().enumerate() {
        let pk = certify_remainder_exhaustive(g, 3, PackingOptions::default()).map_err(|e| e.to_string())?;
        let n = g.order();
        for k in 0..pk.len() {
            for sw in admissible_switches(g, &pk, k).map_err(|e| e.to_string())? {
                let c = check_switch_inequality(g, &pk, &sw).map_err(|e| e.to_string())?;
                let after = switch(g, &pk, &sw).map_err(|e| e.to_string())?;
                let lhs = g
                    .edges_between(&VertexSet::from_vertices(n, after.cliques[k].iter().copied()), &after.remainder)
                    .map_err(|e| e.to_string())?;
                let rhs = g
                    .edges_between(&VertexSet::from_vertices(n, pk.cliques[k].iter().copied()), &pk.remainder)
                    .map_err(|e| e.to_string())?;
                ensure(c.holds && lhs >= rhs && (c.lhs, c.rhs) == (lhs, rhs), || {
                    format!("host {i}: switch {sw:?} gives {lhs} < {rhs}")
                })?;
                switches += 1;
            }
        }
    }
    Ok(format!("{} certified hosts, {switches} switches", hosts.len()))
}

fn jump() -> Outcome {
    // first computed by the search engine, cross-checked by brute force for n <= 6
    let frozen = [(5usize, 1u64), (6, 1), (7, 2), (8, 3)];
    let opts = SearchOptions::default();
    for (n, want) in frozen {
        let ex = n * n / 4;
        ensure(ex as u64 == turan_number(n as u64, 3), || format!("n={n}: floor(n^2/4)"))?;
        for e in 0..=ex {
            let r = min_saturating(n, e, 4, opts).map_err(|e| e.to_string())?;
            ensure(r.exact && r.minimum == Some(0), || format!("n={n} e={e}: minimum {:?}", r.minimum))?;
        }
        let r = min_saturating(n, ex + 1, 4, opts).map_err(|e| e.to_string())?;
        ensure(r.exact && r.minimum == Some(want), || format!("n={n}: jump value {:?}, frozen {want}", r.minimum))?;
    }
    Ok("zero up to floor(n^2/4), jump values 1,1,2,3 for n = 5..8".into())
}

fn ell_split_example() -> Outcome {
    let g = h1(3, 1, 0).map_err(|e| e.to_string())?.graph;
    let pk = refine_packing(&g, &max_packing(&g, 3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let split = ell_split(&g, &pk).map_err(|e| e.to_string())?;
    ensure(split == (114, 132), || format!("ell_split = {split:?}"))?;
    Ok("(114, 132)".into())
}

fn satedge(args: &[&str], stdin: &[u8]) -> Result<Vec<u8>, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_satedge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().expect("piped").write_all(stdin).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("satedge {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn cli_round_trip() -> Outcome {
    let graph = satedge(&["construct", "h1", "--p", "3", "--x", "1", "--y", "0"], b"")?;
    let counted = String::from_utf8(satedge(&["count", "--p", "4"], &graph)?).map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_str(&counted).map_err(|e| e.to_string())?;
    ensure(json["total"] == 246, || format!("count printed {counted}"))?;
    let runs: [&[&str]; 5] = [
        &["construct", "h2", "--p", "3", "--x", "1", "--y", "1"],
        &["count", "--p", "4"],
        &["pack", "--p", "3"],
        &["search", "--n", "8", "--mode", "jump", "--p", "3", "--emit-witnesses"],
        &["verify", "all", "--small"],
    ];
    for args in runs {
        let one = satedge(&[&["--threads", "1"], args].concat(), &graph)?;
        let eight = satedge(&[&["--threads", "8"], args].concat(), &graph)?;
        ensure(one == eight, || format!("{args:?} differs between 1 and 8 threads"))?;
    }
    Ok("construct | count = 246; identical output at 1 and 8 threads".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("construction fidelity", Duration::from_secs(60), construction_fidelity),
        ("divisible case count", Duration::from_secs(5), divisible_case),
        ("margin polynomial sweep", Duration::from_secs(5), margin_sweep),
        ("quadratic minimum identity", Duration::from_secs(5), quadratic_identity),
        ("packing identities", Duration::from_secs(120), packing_identities),
        ("switch inequality", Duration::from_secs(300), switch_inequality),
        ("jump phenomenon", Duration::from_secs(1800), jump),
        ("l1/l2 split example", Duration::from_secs(10), ell_split_example),
        ("CLI round trip", Duration::from_secs(600), cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let took = t.elapsed();
        let outcome = match outcome {
            Ok(_) if took > *limit => Err(format!("took {took:.1?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
