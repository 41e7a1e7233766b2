//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Independent oracles are defined here or in `rotfactor::oracle`.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::process::{Command as Process, ExitCode};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rotfactor::config::Overrides;
use rotfactor::oracle::{bfs_distance, oracle_check_data, OracleOptions};
use rotfactor::pipeline::{analyze_theta, build_hierarchy, realize_config, scan, HierarchyRun};
use rotfactor::{load_config, RunConfig};
use rotfactor_core::generators::{realize, GeneratorSpec, RealizeOptions, ReturnSet};
use rotfactor_core::geometry::{f_distance, first_return_vectors, FirstReturnSet, PointSet};
use rotfactor_core::hierarchy::{build_data, check_well_distributed, CombinatorialData, HierarchyOptions, TieBreak};
use rotfactor_core::rotation::{continuity_modulus, sufficient_condition_check, theta_length};
use rotfactor_core::scalar::rat;
use rotfactor_core::{torus_distance, Point, Rational, Scalar, ThetaVector, TorusKind, TorusPoint, Window};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> Result<RunConfig, String> {
    load_config(&configs().join(name), &Overrides::default()).map_err(err)
}

fn hierarchy(cfg: &RunConfig) -> Result<(HierarchyRun, rotfactor_core::generators::Realization), String> {
    let r = realize_config(cfg).map_err(err)?;
    let run = build_hierarchy(cfg, &r, TieBreak::LexSmallest).map_err(err)?;
    Ok((run, r))
}

fn lattice_data(d: usize, max_level: usize) -> Result<CombinatorialData, String> {
    let spec = GeneratorSpec::lattice(vec![2; d]).map_err(err)?;
    let r = realize(&spec, &RealizeOptions::new(max_level + 3)).map_err(err)?;
    build_data(&r.sets, HierarchyOptions::default()).map_err(err)
}

fn theta(parts: &[(i128, i128)]) -> ThetaVector {
    ThetaVector::from_rationals(&parts.iter().map(|&(p, q)| rat(p, q)).collect::<Vec<_>>()).unwrap()
}

/// `|||x|||` for a rational, by integer arithmetic on numerator and denominator.
fn nint_dist(p: i128, q: i128) -> (i128, i128) {
    let r = p.rem_euclid(q);
    let num = r.min(q - r);
    let g = gcd(num, q);
    (num / g, q / g)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn frac_text((p, q): (i128, i128)) -> String {
    format!("{p}/{q}")
}

fn exact(s: &Scalar) -> Result<Rational, String> {
    s.exact().ok_or_else(|| format!("{s} is not exact"))
}

fn vectors(f: &FirstReturnSet) -> BTreeSet<Point> {
    f.vectors().copied().collect()
}

// 1. Lattice geometry

fn lattice_geometry() -> Outcome {
    for d in 1..=3 {
        let set = PointSet::lattice(Window::cube(d, 5).map_err(err)?).map_err(err)?;
        let (f, _) = first_return_vectors(&set).map_err(err)?;
        let mut want = BTreeSet::new();
        for code in 0..3usize.pow(d as u32) {
            let c: Vec<i64> = (0..d).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
            if c.iter().any(|&x| x != 0) {
                want.insert(Point::new(&c).unwrap());
            }
        }
        ensure(vectors(&f) == want, || format!("d = {d}: got {} vectors, want {}", f.len(), want.len()))?;
    }
    Ok(String::from("F = {-1,0,1}^d \\ {0} for d = 1, 2, 3 on side 11"))
}

// 2. Lattice hierarchy

fn lattice_hierarchy() -> Outcome {
    let mut details = Vec::new();
    for (d, max_level) in [(1usize, 8usize), (2, 5)] {
        let data = lattice_data(d, max_level)?;
        ensure(data.len() == max_level + 1, || format!("d = {d}: {} levels", data.len()))?;
        let k = data.k_sequence();
        if d == 1 {
            ensure(k.iter().all(|&v| v == Some(1)), || format!("d = 1: k(n) = {k:?}"))?;
        } else {
            ensure(k[0].is_some() && k.iter().all(|&v| v == k[0]), || format!("d = 2: k(n) = {k:?}"))?;
        }
        let wd = check_well_distributed(&data).map_err(err)?;
        ensure(wd.all_pass(), || format!("d = {d}: well-distributed checks fail"))?;
        let opts = OracleOptions::for_dim(d);
        let table = oracle_check_data(&data, &opts).map_err(err)?;
        let address: Vec<_> = table.rows.iter().filter(|r| r.check == "address").collect();
        let checked: usize = address.iter().map(|r| r.items).sum();
        for row in &address {
            let step = 1i64 << row.level.unwrap_or(0);
            let expected = (2 * (opts.address_radius / step) as usize + 1).pow(d as u32);
            ensure(row.items == expected, || format!("d = {d}: address row {:?} has {} items, want {expected}", row.level, row.items))?;
        }
        if let Some(row) = table.first_failure() {
            return Err(format!("d = {d}: {} mismatches in {}: {:?}", row.mismatches, row.check, row.first_mismatch));
        }
        details.push(format!("d={d}: k={:?}, {checked} addresses, 0 mismatches", k[0].unwrap()));
    }
    Ok(details.join("; "))
}

// 3. Lattice fixtures

fn lattice_fixtures() -> Outcome {
    let data = lattice_data(1, 8)?;
    let levels = data.len();
    let one = TorusKind::One;

    let quarter = sufficient_condition_check(&data, &theta(&[(1, 4)]), one).map_err(err)?;
    let want: Vec<String> = (0..levels).map(|n| frac_text(nint_dist(1i128 << n, 4))).collect();
    let got: Vec<String> = quarter.series.values().iter().map(Scalar::to_string).collect();
    ensure(got == want, || format!("1/4 lengths {got:?}, oracle {want:?}"))?;
    ensure(quarter.verdict.class.label() == "ConvergentEvidence", || format!("1/4: {:?}", quarter.verdict.class))?;
    ensure(quarter.verdict.tail_bound == Some(Scalar::Exact(rat(0, 1))), || format!("1/4 tail {:?}", quarter.verdict.tail_bound))?;
    ensure(exact(&quarter.series.total())? == rat(3, 4), || format!("1/4 partial sum {}", quarter.series.total()))?;

    for m in 1..=6u32 {
        let r = sufficient_condition_check(&data, &theta(&[(1, 1i128 << m)]), one).map_err(err)?;
        ensure(r.verdict.tail_bound == Some(Scalar::Exact(rat(0, 1))), || format!("1/2^{m}: tail {:?}", r.verdict.tail_bound))?;
    }

    let third = sufficient_condition_check(&data, &theta(&[(1, 3)]), one).map_err(err)?;
    ensure(third.verdict.class.label() == "DivergentEvidence", || format!("1/3: {:?}", third.verdict.class))?;
    for (n, v) in third.series.values().iter().enumerate() {
        ensure(exact(v)? == rat(1, 3), || format!("1/3: length {v} at level {n}"))?;
        ensure(nint_dist(1i128 << n, 3) == (1, 3), || format!("oracle disagrees at level {n}"))?;
    }
    Ok(format!("{levels} levels; 1/4 sum 3/4 tail 0; 1/2^m tail 0 (m<=6); 1/3 lengths all 1/3"))
}

// 4. Period doubling

/// Letters of `sigma^k(seed)`, by plain string rewriting.
fn iterate_word(rules: &[(char, &str)], seed: char, k: usize) -> String {
    let mut w = seed.to_string();
    for _ in 0..k {
        w = w.chars().map(|c| rules.iter().find(|(a, _)| *a == c).unwrap().1).collect();
    }
    w
}

/// Positions `t` in `window` where the letters on `t + cylinder` repeat the
/// ones on `cylinder`, by direct comparison.
fn naive_occurrences(letter: &dyn Fn(i64) -> Option<u32>, window: (i64, i64), cylinder: (i64, i64)) -> Vec<i64> {
    let pattern: Vec<u32> = (cylinder.0..=cylinder.1).map(|i| letter(i).unwrap()).collect();
    let mut out = Vec::new();
    for t in window.0..=window.1 {
        if (cylinder.0..=cylinder.1).zip(&pattern).all(|(i, s)| letter(t + i) == Some(*s)) {
            out.push(t);
        }
    }
    out
}

/// First-return vectors of a 1-d set: gaps between consecutive points that
/// both lie at least `margin` inside the window.
fn gaps(points: &[i64], window: (i64, i64), margin: i64) -> BTreeSet<i64> {
    let inside = |x: i64| x - window.0 >= margin && window.1 - x >= margin;
    points.windows(2).filter(|w| inside(w[0]) && inside(w[1])).flat_map(|w| [w[1] - w[0], w[0] - w[1]]).collect()
}

fn one_d(w: &Window) -> (i64, i64) {
    (w.lo().coord(0), w.hi().coord(0))
}

fn period_doubling() -> Outcome {
    let cfg = load("period_doubling.toml")?;
    ensure(cfg.levels >= 7, || format!("only {} levels", cfg.levels))?;
    let (run, realization) = hierarchy(&cfg)?;
    ensure(run.linear_recurrence.flagged, || String::from("linear recurrence not flagged"))?;

    let summary = scan(&run, TorusKind::One, &cfg.scan).map_err(err)?;
    let denom = |s: &Option<String>| s.as_deref().and_then(|v| v.parse::<i128>().ok());
    let mut dyadic = Vec::new();
    let mut odd = Vec::new();
    for c in &summary.candidates {
        let q = denom(&c.denominator).ok_or_else(|| format!("candidate {:?} has no denominator", c.theta))?;
        if q & (q - 1) == 0 {
            dyadic.push((c.rank, c.score_approx));
        } else if q % 2 == 1 {
            odd.push((c.rank, c.score_approx));
        }
    }
    ensure(!dyadic.is_empty() && !odd.is_empty(), || String::from("scan is missing a candidate class"))?;
    let worst_dyadic = dyadic.iter().map(|c| c.0).max().unwrap();
    let best_odd = odd.iter().map(|c| c.0).min().unwrap();
    ensure(worst_dyadic < best_odd, || format!("dyadic rank {worst_dyadic} not above odd rank {best_odd}"))?;
    let max_dyadic = dyadic.iter().map(|c| c.1).fold(f64::MIN, f64::max);
    let min_odd = odd.iter().map(|c| c.1).fold(f64::MAX, f64::min);
    ensure(max_dyadic < min_odd, || format!("dyadic score {max_dyadic} not below odd score {min_odd}"))?;

    // independent recomputation of F_n and of the lengths
    let config = realization.config.as_ref().ok_or("no configuration")?;
    let letter = |i: i64| config.get(&Point::from1(i));
    let names = match &cfg.generator {
        GeneratorSpec::Product1d(f) => f[0].alphabet().to_vec(),
        _ => return Err(String::from("unexpected generator")),
    };
    let cwin = one_d(&config.window());
    let text: String = (cwin.0..=cwin.1).map(|i| names[letter(i).unwrap() as usize].as_str()).collect();
    let reference = iterate_word(&[('a', "ab"), ('b', "aa")], 'a', 16);
    let known: HashSet<&str> = (0..=reference.len() - 16).map(|i| &reference[i..i + 16]).collect();
    ensure((0..=text.len() - 16).all(|i| known.contains(&text[i..i + 16])), || {
        String::from("configuration has a word that is not in sigma^16(a)")
    })?;

    let mut oracle_f: Vec<BTreeSet<i64>> = Vec::new();
    for level in run.data.levels() {
        let set: &ReturnSet = &level.returns;
        let window = one_d(set.window());
        let occ = naive_occurrences(&letter, window, one_d(set.cylinder_window()));
        let mine: Vec<i64> = set.points().iter().map(|p| p.coord(0)).collect();
        ensure(occ == mine, || format!("level {}: occurrence scan disagrees", level.n))?;
        let max_gap = occ.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        let f = gaps(&occ, window, 2 * max_gap + 1);
        let core: BTreeSet<i64> = level.first_returns.vectors().map(|p| p.coord(0)).collect();
        ensure(f == core, || format!("level {}: F oracle {f:?}, pipeline {core:?}", level.n))?;
        oracle_f.push(f);
    }

    for ((p, q), class) in [((1, 4), "ConvergentEvidence"), ((1, 3), "DivergentEvidence")] {
        let a = analyze_theta(&run, &theta(&[(p, q)]), TorusKind::One).map_err(err)?;
        ensure(a.verdict.class == class, || format!("{p}/{q}: {}", a.verdict.class))?;
        let want: Vec<String> = oracle_f
            .iter()
            .map(|f| frac_text(f.iter().map(|&v| nint_dist(v as i128 * p, q)).max_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1))).unwrap()))
            .collect();
        ensure(a.series.lengths == want, || format!("{p}/{q}: lengths {:?}, oracle {want:?}", a.series.lengths))?;
        let oracle_class = if want.last().map(String::as_str) == Some("0/1") {
            "ConvergentEvidence"
        } else if want.iter().skip(want.len() / 2).all(|l| l != "0/1") {
            "DivergentEvidence"
        } else {
            "Inconclusive"
        };
        ensure(oracle_class == class, || format!("{p}/{q}: oracle classifies as {oracle_class}"))?;
    }
    Ok(format!(
        "{} levels, LR flagged, dyadic ranks <= {worst_dyadic} < odd ranks >= {best_odd}, F_n and lengths match occurrence scan",
        run.data.len()
    ))
}

// 5. Fibonacci

fn fibonacci() -> Outcome {
    let cfg = load("fibonacci.toml")?;
    ensure(cfg.levels >= 8, || format!("only {} levels", cfg.levels))?;
    let (run, _) = hierarchy(&cfg)?;
    let mut fib = vec![1i64, 2];
    while *fib.last().unwrap() < 1 << 40 {
        let n = fib.len();
        fib.push(fib[n - 1] + fib[n - 2]);
    }
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let a = analyze_theta(&run, &ThetaVector::new(vec![Scalar::Float(golden)]).unwrap(), TorusKind::One).map_err(err)?;
    ensure(a.verdict.class == "ConvergentEvidence", || format!("golden: {}", a.verdict.class))?;
    let rate = a.verdict.rate.ok_or("golden: no fitted rate")?;
    ensure((rate - 0.618).abs() <= 0.10, || format!("golden: rate {rate}"))?;
    let dist = |x: f64| (x - x.round()).abs();
    for level in run.data.levels() {
        let f: Vec<i64> = level.first_returns.vectors().map(|p| p.coord(0)).filter(|&v| v > 0).collect();
        ensure(f.iter().all(|v| fib.contains(v)), || format!("level {}: F = {f:?} has a non-Fibonacci gap", level.n))?;
        let want = f.iter().map(|&v| dist(v as f64 * golden)).fold(0.0, f64::max);
        let got = a.series.lengths_approx[level.n];
        ensure((got - want).abs() <= 1e-12, || format!("level {}: length {got}, oracle {want}", level.n))?;
    }
    let half = analyze_theta(&run, &theta(&[(1, 2)]), TorusKind::One).map_err(err)?;
    ensure(half.verdict.class == "DivergentEvidence", || format!("1/2: {}", half.verdict.class))?;
    Ok(format!("{} levels, golden rate {rate:.4} (0.618 +- 0.10), F_n Fibonacci, lengths within 1e-12, 1/2 divergent", run.data.len()))
}

// 6. Product system

fn product_system() -> Outcome {
    let cfg = load("period_doubling_squared.toml")?;
    ensure(cfg.levels >= 5, || format!("only {} levels", cfg.levels))?;
    let (run, realization) = hierarchy(&cfg)?;
    let factor = match &cfg.generator {
        GeneratorSpec::Product1d(f) => GeneratorSpec::Product1d(vec![f[0].clone()]),
        _ => return Err(String::from("unexpected generator")),
    };
    let opts = RealizeOptions { sets: realization.sets.len(), schedule: cfg.schedule.clone(), window_factor: cfg.window_margin };
    let line = realize(&factor, &opts).map_err(err)?;
    for (prod, fac) in realization.sets.iter().zip(&line.sets) {
        let w = prod.window();
        let (lo, hi) = one_d(fac.window());
        let axis = |i: usize| (w.lo().coord(i).max(lo), w.hi().coord(i).min(hi));
        let (ax, ay) = (axis(0), axis(1));
        let in_box = |p: &Point| (ax.0..=ax.1).contains(&p.coord(0)) && (ay.0..=ay.1).contains(&p.coord(1));
        let got: BTreeSet<Point> = prod.points().iter().filter(|p| in_box(p)).copied().collect();
        let xs: Vec<i64> = fac.points().iter().map(|p| p.coord(0)).filter(|x| (ax.0..=ax.1).contains(x)).collect();
        let ys: Vec<i64> = fac.points().iter().map(|p| p.coord(0)).filter(|y| (ay.0..=ay.1).contains(y)).collect();
        let want: BTreeSet<Point> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| Point::from2(x, y))).collect();
        ensure(!want.is_empty() && got == want, || format!("set {}: product mismatch", prod.level()))?;
    }
    let t = theta(&[(1, 4), (1, 4)]);
    let a = analyze_theta(&run, &t, TorusKind::Full).map_err(err)?;
    ensure(a.verdict.class == "ConvergentEvidence", || format!("(1/4, 1/4): {}", a.verdict.class))?;
    for level in run.data.levels() {
        let l1 = exact(&theta_length(&level.first_returns, &t, TorusKind::One).map_err(err)?.0.squared())?;
        let ld = exact(&theta_length(&level.first_returns, &t, TorusKind::Full).map_err(err)?.0.squared())?;
        ensure(l1 <= ld * rat(2, 1), || format!("level {}: (l1)^2 = {l1} > 2 (ld)^2 = {}", level.n, ld * rat(2, 1)))?;
    }
    Ok(format!("{} sets equal factor products, (1/4,1/4) convergent, (l1)^2 <= 2 (ld)^2 exactly at {} levels", realization.sets.len(), run.data.len()))
}

// 7. Invariant suites

fn check_partitions(data: &CombinatorialData, name: &str) -> Result<(), String> {
    for level in data.levels() {
        let n = level.n;
        let f = &level.first_returns;
        ensure(f.vectors().all(|v| f.contains(&(Point::zero(v.dim()) - *v))), || format!("{name}: F != -F at {n}"))?;
        let next = data.returns(n + 1).map_err(err)?;
        let part = &level.partition;
        let mut covered: Vec<Point> = part.patches().flat_map(|(_, p)| p.iter().copied()).collect();
        let count = covered.len();
        covered.sort_unstable();
        covered.dedup();
        ensure(covered.len() == count, || format!("{name}: patches overlap at {n}"))?;
        ensure(covered == part.points().copied().collect::<Vec<_>>(), || format!("{name}: patches miss points at {n}"))?;
        for m in part.complete_owners() {
            let owners: Vec<&Point> = part.patch(m).unwrap().iter().filter(|p| next.contains(p)).collect();
            ensure(owners == vec![m], || format!("{name}: patch of {m} at {n} has owners {owners:?}"))?;
        }
    }
    Ok(())
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-300i128..300, 1i128..80).prop_map(|(p, q)| rat(p, q))
}

fn torus_dist_sq(x: &[Rational], y: &[Rational]) -> Result<Rational, TestCaseError> {
    let diff = TorusPoint::new(x.iter().zip(y).map(|(a, b)| Scalar::Exact(*a - *b)).collect());
    torus_distance(&diff).squared().exact().ok_or_else(|| TestCaseError::fail("inexact torus distance"))
}

fn invariants() -> Outcome {
    let mut systems = vec![("lattice d=1", lattice_data(1, 6)?), ("lattice d=2", lattice_data(2, 3)?)];
    for (name, file, levels) in [("period doubling", "period_doubling.toml", 6), ("fibonacci", "fibonacci.toml", 6)] {
        let mut cfg = load(file)?;
        cfg.levels = levels;
        systems.push((name, hierarchy(&cfg)?.0.data));
    }
    for (name, data) in &systems {
        check_partitions(data, name)?;
    }

    let mut r = runner(200);
    let gens = (1usize..=2).prop_flat_map(|d| {
        (
            prop::collection::vec(prop::collection::vec(-4i64..=4, d), 0..4),
            prop::collection::vec(-12i64..=12, d),
        )
    });
    r.run(&gens, |(extra, u)| {
        let d = u.len();
        let mut vs: Vec<Point> = (0..d).map(|i| Point::zero(d).with(i, 1).unwrap()).collect();
        vs.extend(extra.iter().map(|v| Point::new(v).unwrap()).filter(|p| !p.is_zero()));
        let f = FirstReturnSet::from_vectors(vs).unwrap();
        let u = Point::new(&u).unwrap();
        let got = f_distance(&u, &f, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(bfs_distance(&u, &f.to_vec(), 64), Some(got));
        Ok(())
    })
    .map_err(|e| format!("f_distance: {e}"))?;

    let mut r = runner(1000);
    let triples = (1usize..=3).prop_flat_map(|k| {
        (
            prop::collection::vec(rational(), k),
            prop::collection::vec(rational(), k),
            prop::collection::vec(rational(), k),
        )
    });
    r.run(&triples, |(x, y, z)| {
        // sqrt(c) <= sqrt(a) + sqrt(b), squared out
        let (a, b, c) = (torus_dist_sq(&x, &y)?, torus_dist_sq(&y, &z)?, torus_dist_sq(&x, &z)?);
        let s = c - a - b;
        prop_assert!(s <= rat(0, 1) || s * s <= a * b * rat(4, 1), "a={} b={} c={}", a, b, c);
        Ok(())
    })
    .map_err(|e| format!("triangle inequality: {e}"))?;

    let mut r = runner(1000);
    let tuples = (1usize..=3).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0i64..1000, k), 1..8));
    r.run(&tuples, |xs| {
        let k = xs[0].len();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let lhs: f64 = xs.iter().map(|x| norm(&x.iter().map(|&v| v as f64 / 7.0).collect::<Vec<_>>())).sum();
        let total: Vec<f64> = (0..k).map(|i| xs.iter().map(|x| x[i] as f64 / 7.0).sum()).collect();
        let rhs = (k as f64).sqrt() * norm(&total);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12, "{} > {}", lhs, rhs);
        Ok(())
    })
    .map_err(|e| format!("orthant inequality: {e}"))?;

    let data = &systems[0].1;
    let t = theta(&[(1, 4)]);
    for n in 2..data.len() {
        let m = continuity_modulus(data, &t, TorusKind::One, n).map_err(err)?;
        ensure(m.value.squared() == Scalar::Exact(rat(0, 1)), || format!("continuity modulus {} at level {n}", m.value.squared()))?;
    }
    Ok(String::from(
        "F = -F and partitions on 4 systems; f_distance = BFS on 200 inputs; triangle (1000, exact); orthant (1000, rel 1e-12); modulus 0 from level 2",
    ))
}

// 8. Determinism

fn determinism() -> Outcome {
    let config = configs().join("period_doubling.toml");
    let mut sizes = Vec::new();
    for cmd in ["analyze", "scan"] {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Process::new(env!("CARGO_BIN_EXE_rotfactor"))
                .args([cmd, "--config"])
                .arg(&config)
                .args(["--no-timestamp", "--format", "json"])
                .output()
                .map_err(err)?;
            ensure(out.status.success(), || format!("{cmd} exited with {}", out.status))?;
            outputs.push(out.stdout);
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{cmd}: outputs differ"))?;
        serde_json::from_slice::<serde_json::Value>(&outputs[0]).map_err(|e| format!("{cmd}: not JSON: {e}"))?;
        sizes.push(format!("{cmd} {} bytes", outputs[0].len()));
    }
    Ok(format!("byte-identical JSON ({})", sizes.join(", ")))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, f64, Check); 8] = [
        ("lattice geometry", 30.0, lattice_geometry),
        ("lattice hierarchy", 60.0, lattice_hierarchy),
        ("lattice fixtures", f64::INFINITY, lattice_fixtures),
        ("period doubling", 120.0, period_doubling),
        ("fibonacci", f64::INFINITY, fibonacci),
        ("product system", f64::INFINITY, product_system),
        ("invariant suites", 60.0, invariants),
        ("determinism", f64::INFINITY, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let budget = if limit.is_finite() { format!(" (limit {limit:.0} s)") } else { String::new() };
        let outcome = match outcome {
            Ok(detail) if secs <= *limit => Ok(detail),
            Ok(detail) => Err(format!("{detail}; too slow")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS [{secs:.2} s{budget}] {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.2} s{budget}] {e}", i + 1);
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
