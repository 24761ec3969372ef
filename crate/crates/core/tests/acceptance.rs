//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use num_rational::BigRational;
use qbil::identities::{
    evaluate, find, map_point, sample_point, specialize, Point, SampleOptions, Shape,
};
use qbil::numerics::{scalar_residual, Mode, Scalar};
use qbil::qfactorial::{qpoch_fin, qpoch_negate, qpoch_split, Ext};
use qbil::series::EvalOptions;
use qbil::verify::{
    certify, check_exact_terminating, check_identity, check_kernel, interchange, policy, CheckOptions, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

type Outcome = std::result::Result<String, String>;

fn shape(pairs: &[(&str, i64)]) -> Shape {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn sample(id: &str, seed: u64, i: u64, mode: Mode, shape: Option<Shape>) -> Result<Point, String> {
    let d = find(id).map_err(|e| e.to_string())?;
    sample_point(d, seed, i, &SampleOptions { mode, shape, ..Default::default() }).map_err(|e| format!("{id} #{i}: {e}"))
}

/// Check `n` sampled points; every one must pass at `tol`. Returns the
/// largest relative residual.
fn suite(id: &str, shapes: impl Fn(u64) -> Option<Shape> + Sync, n: u64, mode: Mode, tol: f64) -> Result<f64, String> {
    let d = find(id).map_err(|e| e.to_string())?;
    let opts = CheckOptions { mode: Some(mode), tol: Some(tol), eval: None };
    let worst = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = sample(id, 42, i, mode, shapes(i))?;
            let rep = check_identity(d, &p, &opts);
            if rep.status != Status::Pass {
                return Err(format!("{id} #{i}: {} (rel {:?}) {}", rep.status, rep.rel_residual, rep.diagnostics));
            }
            Ok(rep.rel_residual.unwrap_or(0.0))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

fn any_shape(_: u64) -> Option<Shape> {
    None
}

/// Compare both sides of two identities at corresponding points.
fn agree(id_a: &str, pa: &Point, id_b: &str, pb: &Point, mode: Mode, tol: f64) -> Result<f64, String> {
    let o = EvalOptions::for_mode(mode);
    let a = evaluate(find(id_a).unwrap(), pa, mode, &o).map_err(|e| format!("{id_a}: {e}"))?;
    let b = evaluate(find(id_b).unwrap(), pb, mode, &o).map_err(|e| format!("{id_b}: {e}"))?;
    let l = scalar_residual(&a.lhs, &b.lhs, 1e-300).1;
    let r = scalar_residual(&a.rhs, &b.rhs, 1e-300).1;
    let worst = l.max(r);
    if worst < tol {
        Ok(worst)
    } else {
        Err(format!("{id_a} vs {id_b}: lhs {l:.2e}, rhs {r:.2e}"))
    }
}

fn within(label: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("{label} took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn random_rational(rng: &mut ChaCha8Rng, small: bool) -> BigRational {
    loop {
        let num: i64 = rng.gen_range(-40..=40);
        let den: i64 = rng.gen_range(1..=40);
        if num == 0 || (small && num.abs() >= den) {
            continue;
        }
        return BigRational::new(num.into(), den.into());
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut poles) = (0, 0);
    for i in 0..200 {
        let q = random_rational(&mut rng, true);
        // Every tenth pair puts a on q^-j so the pole branches are reached.
        let a = if i % 10 == 0 { qbil::Field::powi(&q, -(i / 10 % 6 + 1)) } else { random_rational(&mut rng, false) };
        for n in -6..=6i64 {
            for m in -6..=6i64 {
                match qpoch_split(&a, &q, n, m) {
                    Ok((l, r)) if l == r => checked += 1,
                    Ok((l, r)) => return Err(format!("split a={a} q={q} n={n} m={m}: {l:?} != {r:?}")),
                    // A pole times a zero on the right: no value to compare.
                    Err(e) if e.kind() == "IndeterminateProduct" => poles += 1,
                    Err(e) => return Err(e.to_string()),
                }
            }
            if n >= 1 {
                let direct = qpoch_fin(&a, &q, -n);
                match (direct, qpoch_negate(&a, &q, n as u64)) {
                    (Ext::Finite(x), Ok(y)) if x == y => checked += 1,
                    (Ext::Pole, Err(e)) if e.kind() == "PoleEncountered" => poles += 1,
                    (x, y) => return Err(format!("negative index a={a} q={q} n={n}: {x:?} vs {y:?}")),
                }
            }
        }
    }
    within("laws", start, Duration::from_secs(5))?;
    Ok(format!("{checked} exact equalities, {poles} matching poles"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for id in ["q_binomial_terminating", "pfaff_saalschutz", "jackson_8phi7"] {
        let d = find(id).unwrap();
        let ok = (0..50u64)
            .into_par_iter()
            .map(|i| {
                let p = sample(id, 42, i, Mode::ExactRational, None)?;
                match check_exact_terminating(d, &p) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("{id} #{i}: sides differ")),
                    Err(e) => Err(format!("{id} #{i}: {e}")),
                }
            })
            .collect::<Result<Vec<()>, String>>()?;
        total += ok.len();
    }
    within("exact oracles", start, Duration::from_secs(30))?;
    Ok(format!("{total} exact points"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let d = suite("ramanujan_1psi1", any_shape, 100, Mode::ComplexDouble, 1e-12)?;
    let b = suite("ramanujan_1psi1", any_shape, 10, Mode::big(), 1e-40)?;
    within("1psi1", start, Duration::from_secs(10))?;
    Ok(format!("double max {d:.2e}, big max {b:.2e}"))
}

fn criterion_4() -> Outcome {
    let r = suite("rogers_6phi5", any_shape, 100, Mode::ComplexDouble, 1e-10)?;
    let s = suite("bailey_6psi6", any_shape, 100, Mode::ComplexDouble, 1e-10)?;
    let (_, map) = specialize("bailey_6psi6", "e=a").map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..30 {
        let p = sample("rogers_6phi5", 7, i, Mode::ComplexDouble, None)?;
        let q = map_point(map, &p).map_err(|e| e.to_string())?;
        worst = worst.max(agree("rogers_6phi5", &p, "bailey_6psi6", &q, Mode::ComplexDouble, 1e-12)?);
    }
    Ok(format!("6phi5 {r:.2e}, 6psi6 {s:.2e}, e=a agreement {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let a = suite("bailey_8phi7_nt", any_shape, 50, Mode::big(), 1e-10)?;
    let b = suite("bailey_8phi7_tf", any_shape, 50, Mode::big(), 1e-10)?;
    Ok(format!("summation {a:.2e}, transformation {b:.2e}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let a = suite("mjackson_8psi8", any_shape, 50, Mode::big(), 1e-9)?;
    let b = suite("tenpsi10", any_shape, 30, Mode::big(), 1e-9)?;
    within("8psi8 and 10psi10", start, Duration::from_secs(180))?;
    Ok(format!("8psi8 {a:.2e}, 10psi10 {b:.2e}"))
}

/// Rename the parameters of a point; unlisted names are kept.
fn renamed(p: &Point, pairs: &[(&str, &str)], shape: Shape) -> Point {
    let mut out = Point { shape, values: Default::default() };
    for (k, v) in &p.values {
        let name = pairs.iter().find(|(from, _)| from == k).map_or(k.as_str(), |(_, to)| to);
        out.values.insert(name.to_string(), v.clone());
    }
    out
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for r in 3..=6 {
        let m = suite("slater_vwp_2r", |_| Some(shape(&[("r", r)])), 20, Mode::big(), 1e-8)?;
        parts.push(format!("r={r} {m:.2e}"));
    }
    let eight = [("b3", "b"), ("b4", "c"), ("b5", "d"), ("b6", "e"), ("b7", "f"), ("b8", "g")];
    let ten = [("b3", "b"), ("b4", "c"), ("b5", "d"), ("b6", "e"), ("b7", "f"), ("b8", "g"), ("b9", "h"), ("b10", "y")];
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let p = sample("slater_vwp_2r", 9, i, Mode::big(), Some(shape(&[("r", 4)])))?;
        worst = worst.max(agree("slater_vwp_2r", &p, "mjackson_8psi8", &renamed(&p, &eight, Shape::new()), Mode::big(), 1e-10)?);
        let p = sample("slater_vwp_2r", 9, i, Mode::big(), Some(shape(&[("r", 5)])))?;
        worst = worst.max(agree("slater_vwp_2r", &p, "tenpsi10", &renamed(&p, &ten, Shape::new()), Mode::big(), 1e-10)?);
    }
    Ok(format!("{}; 8psi8/10psi10 agreement {worst:.2e}", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mode = policy("slater_rpsir").0;
    for r in 1..=4 {
        let m = suite("slater_rpsir", |_| Some(shape(&[("r", r)])), 30, mode, 1e-9)?;
        parts.push(format!("r={r} {m:.2e}"));
    }
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let p = sample("slater_rpsir", 5, i, mode, Some(shape(&[("r", 1)])))?;
        let q = renamed(&p, &[("a1", "a"), ("b1", "b")], Shape::new());
        worst = worst.max(agree("slater_rpsir", &p, "ramanujan_1psi1", &q, mode, 1e-12)?);
    }
    Ok(format!("{}; r=1 vs 1psi1 {worst:.2e}", parts.join(", ")))
}

/// `prod a_i / prod c_i` of a general rpsir point.
fn anchor(p: &Point, r: i64) -> Result<Scalar, String> {
    let mut acc = Scalar::rational(1, 1);
    for i in 1..=r {
        let a = p.get(&format!("a{i}")).map_err(|e| e.to_string())?;
        let c = p.get(&format!("c{i}")).map_err(|e| e.to_string())?;
        acc = mul(&mul(&acc, a), &inv(c));
    }
    Ok(acc)
}

fn mul(x: &Scalar, y: &Scalar) -> Scalar {
    use qbil::numerics::{promote, BigCtx, Field};
    let m = x.mode().join(y.mode());
    match m {
        Mode::ComplexBig(d) => {
            let ctx = BigCtx::new(d);
            let a = qbil::numerics::BigComplex::from_scalar(&promote(x, m).unwrap(), ctx).unwrap();
            let b = qbil::numerics::BigComplex::from_scalar(&promote(y, m).unwrap(), ctx).unwrap();
            (a * b).to_scalar()
        }
        _ => Scalar::Double(x.to_c64() * y.to_c64()),
    }
}

fn inv(x: &Scalar) -> Scalar {
    use qbil::numerics::{BigCtx, Field};
    match x.mode() {
        Mode::ComplexBig(d) => {
            let a = qbil::numerics::BigComplex::from_scalar(x, BigCtx::new(d)).unwrap();
            (a.one_like() / a).to_scalar()
        }
        _ => Scalar::Double(1.0 / x.to_c64()),
    }
}

fn criterion_9() -> Outcome {
    let big = Mode::big();
    let mut parts = Vec::new();
    for r in [3, 4] {
        let m = suite("slater_wp_2r_general", |_| Some(shape(&[("r", r)])), 20, big, 1e-8)?;
        parts.push(format!("wp r={r} {m:.2e}"));
    }
    for r in [2, 3] {
        for form in [0, 1] {
            let m = suite("slater_rpsir_general", |_| Some(shape(&[("r", r), ("form", form)])), 20, big, 1e-8)?;
            parts.push(format!("rpsir r={r} form {form} {m:.2e}"));
        }
    }
    let mut spec: f64 = 0.0;
    for (source, name, target, r) in
        [("slater_wp_2r_general", "a=b", "slater_wp_2r", 3), ("slater_wp_2r_general", "a=b", "slater_wp_2r", 4),
         ("slater_rpsir_general", "c=a", "slater_rpsir", 2), ("slater_rpsir_general", "c=a", "slater_rpsir", 3)]
    {
        let (_, map) = specialize(source, name).map_err(|e| e.to_string())?;
        for i in 0..5 {
            let tp = sample(target, 13, i, big, Some(shape(&[("r", r)])))?;
            let sp = map_point(map, &tp).map_err(|e| e.to_string())?;
            spec = spec.max(agree(target, &tp, source, &sp, big, 1e-11)?);
        }
    }
    // Form 1 at z A is form 0 at z.
    let mut equiv: f64 = 0.0;
    let d = find("slater_rpsir_general").unwrap();
    for r in [2, 3] {
        for i in 0..10 {
            let p0 = sample("slater_rpsir_general", 17, i, big, Some(shape(&[("r", r), ("form", 0)])))?;
            let mut p1 = p0.clone();
            p1.shape.insert("form".into(), 1);
            let z = mul(p0.get("z").unwrap(), &anchor(&p0, r)?);
            p1.values.insert("z".into(), z);
            let o = EvalOptions::for_mode(big);
            let a = evaluate(d, &p0, big, &o).map_err(|e| e.to_string())?;
            let b = evaluate(d, &p1, big, &o).map_err(|e| e.to_string())?;
            let rel = scalar_residual(&a.rhs, &b.rhs, 1e-300).1;
            if rel >= 1e-10 {
                return Err(format!("form equivalence r={r} #{i}: {rel:.2e}"));
            }
            equiv = equiv.max(rel);
        }
    }
    Ok(format!("{}; specializations {spec:.2e}; form equivalence {equiv:.2e}", parts.join(", ")))
}

fn criterion_10() -> Outcome {
    let big = Mode::big();
    // Explicit shapes for the fixed-r members: s = i mod 3, m_j cycling 0..=3.
    let with_r = |r: i64| {
        move |i: u64| {
            let s = (i % 3) as i64;
            let mut sh = shape(&[("r", r), ("s", s)]);
            for j in 1..=s {
                sh.insert(format!("m{j}"), (i as i64 + j) % 4);
            }
            Some(sh)
        }
    };
    let mut parts = Vec::new();
    for id in ["chu_2s_tf", "chu_vwp_sum", "ckm_general", "ckm_km1", "ckm_km2", "ckm_km3", "ckm_2psi2_ul1", "ckm_2psi2_ul2"] {
        let m = suite(id, any_shape, 20, big, 1e-9)?;
        parts.push(format!("{id} {m:.1e}"));
    }
    let m = suite("ckm_wp_general", with_r(2), 20, big, 1e-9)?;
    parts.push(format!("ckm_wp_general r=2 {m:.1e}"));
    let m = suite("ckm_vwp_general", with_r(3), 20, big, 1e-9)?;
    parts.push(format!("ckm_vwp_general r=3 {m:.1e}"));
    let mut chain: f64 = 0.0;
    for (source, name, target, sh) in [
        ("ckm_km1", "e=bq", "chu_2s_tf", None),
        ("ckm_km3", "f=d,e=a/d", "chu_vwp_sum", None),
        ("ckm_general", "s=0", "slater_rpsir_general", Some(shape(&[("r", 2), ("form", 0)]))),
        ("ckm_general", "s=0", "slater_rpsir_general", Some(shape(&[("r", 3), ("form", 0)]))),
    ] {
        let (_, map) = specialize(source, name).map_err(|e| e.to_string())?;
        for i in 0..5 {
            let tp = sample(target, 23, i, big, sh.clone())?;
            let sp = map_point(map, &tp).map_err(|e| e.to_string())?;
            chain = chain.max(agree(target, &tp, source, &sp, big, 1e-11)?);
        }
    }
    Ok(format!("{}; chains {chain:.2e}", parts.join(", ")))
}

fn criterion_11() -> Outcome {
    let mut parts = Vec::new();
    for id in ["kernel_key1", "kernel_87ntgl2", "kernel_key32"] {
        let d = find(id).unwrap();
        let mode = policy(id).0;
        let opts = CheckOptions { mode: Some(mode), tol: Some(1e-11), eval: None };
        let worst = (0..10u64)
            .into_par_iter()
            .map(|i| {
                let p = sample(id, 42, i, mode, None)?;
                let reps = check_kernel(d, -5, 5, &p, &opts).map_err(|e| e.to_string())?;
                let mut w: f64 = 0.0;
                for rep in reps {
                    if rep.status != Status::Pass {
                        return Err(format!("{id} #{i} n={:?}: {} {:?}", rep.point.map(|p| p.shape), rep.status, rep.rel_residual));
                    }
                    w = w.max(rep.rel_residual.unwrap_or(0.0));
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>, String>>()?
            .into_iter()
            .fold(0.0, f64::max);
        parts.push(format!("{id} {worst:.2e}"));
    }
    let mut worst: f64 = 0.0;
    for seed in 1..=5 {
        let rep = interchange(seed, 0, 20, Mode::ComplexDouble).map_err(|e| e.to_string())?;
        // k runs over 0..=40.
        if rep.rel_residual >= 1e-9 || rep.inner_terms > 41 {
            return Err(format!("interchange seed {seed}: rel {:.2e}, {} inner terms", rep.rel_residual, rep.inner_terms));
        }
        worst = worst.max(rep.rel_residual);
    }
    Ok(format!("{}; interchange {worst:.2e}", parts.join(", ")))
}

fn criterion_12() -> Outcome {
    let start = Instant::now();
    let r = |n: i64, d: i64| Scalar::rational(n, d);
    let point = |vals: &[(&str, Scalar)]| Point {
        shape: Shape::new(),
        values: vals.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
    };
    let one = point(&[("q", r(1, 5)), ("a", r(2, 1)), ("b", r(1, 25)), ("z", r(1, 2))]);
    let six = point(&[("q", r(1, 5)), ("a", r(1, 3)), ("b", r(2, 1)), ("c", r(3, 1)), ("d", r(-2, 1)), ("e", r(5, 2))]);
    let mut parts = Vec::new();
    for (id, p) in [("ramanujan_1psi1", one), ("bailey_6psi6", six)] {
        let rep = certify(find(id).unwrap(), &p, 1e-30).map_err(|e| format!("{id}: {e}"))?;
        let gap = rep.certificate.as_ref().map_or(f64::INFINITY, |c| c.gap_bound);
        if rep.status != Status::Pass || gap > 1e-30 {
            return Err(format!("{id}: {} with bound {gap:.2e}", rep.status));
        }
        parts.push(format!("{id} |LHS-RHS| <= {gap:.2e}"));
    }
    within("certification", start, Duration::from_secs(60))?;
    Ok(parts.join(", "))
}

fn criterion_13() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("sweep{run}.json"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_qbil"))
            .args(["sweep", "--all", "-n", "30", "--seed", "42", "--out"])
            .arg(&out)
            .env_remove("QBIL_CONFIG")
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        let bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
        outputs.push((status.code(), bytes));
    }
    within("two sweeps", start, Duration::from_secs(1200))?;
    if outputs[0].1 != outputs[1].1 {
        return Err("the two sweeps differ".into());
    }
    let v: serde_json::Value = serde_json::from_slice(&outputs[0].1).map_err(|e| e.to_string())?;
    let rows = v.as_array().ok_or("sweep output is not an array")?;
    let fails: Vec<String> = rows
        .iter()
        .filter(|r| r.get("summary").is_none() && r["status"] != "PASS" && r["status"] != "DEGENERATE")
        .map(|r| format!("{} #{} {}", r["identity"], r["index"], r["status"]))
        .collect();
    if !fails.is_empty() {
        return Err(format!("{} non-passing reports: {}", fails.len(), fails.join("; ")));
    }
    if outputs[0].0 != Some(0) {
        return Err(format!("exit code {:?}", outputs[0].0));
    }
    let n = rows.iter().filter(|r| r.get("summary").is_none()).count();
    Ok(format!("{n} reports, byte-identical, {:.0}s per sweep", start.elapsed().as_secs_f64() / 2.0))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("q-Pochhammer laws", criterion_1),
        ("exact terminating oracles", criterion_2),
        ("Ramanujan 1psi1", criterion_3),
        ("6phi5 and 6psi6", criterion_4),
        ("nonterminating 8phi7", criterion_5),
        ("8psi8 and 10psi10", criterion_6),
        ("very-well-poised 2r psi 2r", criterion_7),
        ("general r psi r", criterion_8),
        ("general forms and specializations", criterion_9),
        ("Chu-type suite", criterion_10),
        ("kernels and interchange", criterion_11),
        ("certified checks", criterion_12),
        ("reproducible sweep", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
