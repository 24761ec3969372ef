use super::*;
use crate::numerics::scalar_residual;

fn pt(shape: &[(&str, i64)], vals: &[(&str, Scalar)]) -> Point {
    Point {
        shape: shape.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        values: vals.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
    }
}

fn r(n: i64, d: i64) -> Scalar {
    Scalar::rational(n, d)
}

fn c(re: f64, im: f64) -> Scalar {
    Scalar::double(re, im)
}

fn rel(desc: &Descriptor, p: &Point, mode: Mode) -> f64 {
    let s = evaluate(desc, p, mode, &EvalOptions::for_mode(mode)).unwrap();
    scalar_residual(&s.lhs, &s.rhs, 1e-300).1
}

/// Every shape combination at its bounds (m_i at the bound shared by all).
fn corner_shapes(d: &Descriptor) -> Vec<Shape> {
    let mut out = vec![Shape::new()];
    for p in d.shape.iter().filter(|p| p.per.is_none()) {
        out = out
            .into_iter()
            .flat_map(|s| {
                [p.min, p.max].into_iter().map(move |v| {
                    let mut s = s.clone();
                    s.insert(p.name.to_string(), v);
                    s
                })
            })
            .collect();
    }
    for p in d.shape.iter().filter(|p| p.per.is_some()) {
        out = out
            .into_iter()
            .flat_map(|s| {
                let count = s[p.per.unwrap()];
                [p.min, p.max].into_iter().map(move |v| {
                    let mut s = s.clone();
                    for i in 1..=count {
                        s.insert(format!("{}{i}", p.name), v);
                    }
                    s
                })
            })
            .collect();
    }
    out
}

#[test]
fn catalog_is_sorted_and_unique() {
    let ids: Vec<&str> = catalog().iter().map(|d| d.id).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    assert_eq!(ids.len(), 31);
}

#[test]
fn every_symbol_is_a_parameter_or_derived() {
    for d in catalog() {
        for shape in corner_shapes(d) {
            let inst = d.instance(&shape).unwrap();
            let known: BTreeSet<String> =
                inst.params.iter().cloned().chain(inst.derived.iter().map(|(n, _)| n.clone())).collect();
            let free = inst.free_symbols();
            assert!(free.is_subset(&known), "{} {:?}: {:?} vs {:?}", d.id, shape, free, known);
        }
    }
}

#[test]
fn every_parameter_has_a_sampling_rule() {
    for d in catalog() {
        for shape in corner_shapes(d) {
            let inst = d.instance(&shape).unwrap();
            let mut covered: BTreeSet<String> = inst.draws.iter().map(|x| x.name.clone()).collect();
            if let Some((n, _)) = inst.dependent() {
                covered.insert(n);
            }
            for p in &inst.params {
                assert!(covered.contains(p), "{} {:?}: no rule for {p}", d.id, shape);
            }
        }
    }
}

#[test]
fn list_line_shows_constraints() {
    let line = find("bailey_6psi6").unwrap().list_line();
    assert!(line.contains("bailey_6psi6"));
    assert!(line.contains("|a^2 q/(bcde)|<1"), "{line}");
}

#[test]
fn unknown_identity_and_bad_shape() {
    assert_eq!(find("nope").unwrap_err().kind(), "UnknownIdentity");
    let d = find("slater_vwp_2r").unwrap();
    let mut s = Shape::new();
    s.insert("r".into(), 99);
    assert_eq!(d.instance(&s).unwrap_err().kind(), "BadShape");
    assert_eq!(d.instance(&Shape::new()).unwrap_err().kind(), "BadShape");
}

#[test]
fn ramanujan_at_az_one() {
    // a z = 1 makes the right-hand side vanish; compare absolutely.
    let d = find("ramanujan_1psi1").unwrap();
    let p = pt(&[], &[("q", c(0.1, 0.0)), ("a", c(2.0, 0.0)), ("b", c(0.05, 0.0)), ("z", c(0.5, 0.0))]);
    let s = evaluate(d, &p, Mode::ComplexDouble, &EvalOptions::for_mode(Mode::ComplexDouble)).unwrap();
    assert!(s.rhs.abs_f64() < 1e-300);
    assert!(s.lhs.abs_f64() < 1e-14, "{}", s.lhs);
}

#[test]
fn ramanujan_generic_point() {
    let d = find("ramanujan_1psi1").unwrap();
    let p = pt(&[], &[("q", c(0.3, 0.1)), ("a", c(1.5, -0.4)), ("b", c(0.2, 0.1)), ("z", c(0.6, 0.2))]);
    assert!(rel(d, &p, Mode::ComplexDouble) < 1e-13);
}

#[test]
fn six_psi_six_at_e_equal_a_is_rogers() {
    let six = find("bailey_6psi6").unwrap();
    let rog = find("rogers_6phi5").unwrap();
    let vals = [("q", c(0.3, 0.0)), ("a", c(0.4, 0.1)), ("b", c(1.7, 0.3)), ("c", c(-1.9, 0.2)), ("d", c(1.6, -1.0))];
    let mut with_e = vals.to_vec();
    with_e.push(("e", c(0.4, 0.1)));
    let p6 = pt(&[], &with_e);
    let pr = pt(&[], &vals);
    let o = EvalOptions::for_mode(Mode::ComplexDouble);
    let a = evaluate(six, &p6, Mode::ComplexDouble, &o).unwrap();
    let b = evaluate(rog, &pr, Mode::ComplexDouble, &o).unwrap();
    assert!(scalar_residual(&a.lhs, &b.lhs, 1e-300).1 < 1e-12);
    assert!(scalar_residual(&a.rhs, &b.rhs, 1e-300).1 < 1e-12);
}

#[test]
fn unit_second_form_is_closed() {
    let inst = find("ckm_2psi2_ul2").unwrap().instance(&Shape::new()).unwrap();
    assert!(inst.rhs.iter().all(|g| g.term.series.is_none()));
}

#[test]
fn idem_sum_is_invariant_under_permuting_its_members() {
    let d = find("slater_rpsir").unwrap();
    let p = sample_point(d, 5, 0, &SampleOptions { shape: Some([("r".to_string(), 3)].into()), ..Default::default() })
        .unwrap();
    let mut swapped = p.clone();
    let (a1, a2) = (p.get("a1").unwrap().clone(), p.get("a2").unwrap().clone());
    let (b1, b2) = (p.get("b1").unwrap().clone(), p.get("b2").unwrap().clone());
    swapped.values.insert("a1".into(), a2);
    swapped.values.insert("a2".into(), a1);
    swapped.values.insert("b1".into(), b2);
    swapped.values.insert("b2".into(), b1);
    let o = EvalOptions::for_mode(Mode::ComplexDouble);
    let x = rhs(d, &p, Mode::ComplexDouble, &o).unwrap();
    let y = rhs(d, &swapped, Mode::ComplexDouble, &o).unwrap();
    assert!(scalar_residual(&x, &y, 1e-300).1 < 1e-12);
}

#[test]
fn poisedness_classes() {
    let q = r(1, 3);
    let spec = |kind, up: Vec<Scalar>, lo: Vec<Scalar>, z: Scalar| SeriesSpec { kind, upper: up, lower: lo, q: q.clone(), z };
    // Lower product = q * upper product, z = q.
    let bal = spec(Kind::Unilateral, vec![r(2, 1), r(3, 1), r(9, 1)], vec![r(5, 1), r(18, 5)], q.clone());
    assert!(poisedness(&bal).balanced);
    assert!(!poisedness(&bal).well_poised);
    // Very-well-poised 6phi5 with a = 4, so q sqrt(a) = 2q is rational.
    let a = r(4, 1);
    let two_q = r(2, 3);
    let (b, c_, d) = (r(5, 1), r(7, 2), r(-3, 1));
    let aq = r(4, 3);
    let div = |x: &Scalar, y: &Scalar| match (x, y) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x / y),
        _ => unreachable!(),
    };
    let neg = |x: &Scalar| match x {
        Scalar::Exact(x) => Scalar::Exact(-x),
        _ => unreachable!(),
    };
    let vwp = spec(
        Kind::Unilateral,
        vec![a.clone(), two_q.clone(), neg(&two_q), b.clone(), c_.clone(), d.clone()],
        vec![r(2, 1), r(-2, 1), div(&aq, &b), div(&aq, &c_), div(&aq, &d)],
        r(1, 10),
    );
    let p = poisedness(&vwp);
    assert!(p.well_poised && p.very_well_poised, "{p:?}");
    // Bilateral 2psi2 with a_i b_i constant.
    let wp = spec(Kind::Bilateral, vec![r(2, 1), r(3, 1)], vec![r(3, 1), r(2, 1)], r(1, 2));
    assert!(poisedness(&wp).well_poised);
    assert!(!poisedness(&wp).very_well_poised);
}

#[test]
fn sampling_is_deterministic() {
    let d = find("mjackson_8psi8").unwrap();
    let o = SampleOptions::default();
    assert_eq!(sample_point(d, 42, 3, &o).unwrap(), sample_point(d, 42, 3, &o).unwrap());
    assert_ne!(sample_point(d, 42, 3, &o).unwrap(), sample_point(d, 42, 4, &o).unwrap());
    let e = SampleOptions { mode: Mode::ExactRational, ..Default::default() };
    let j = find("jackson_8phi7").unwrap();
    let p = sample_point(j, 1, 0, &e).unwrap();
    assert_eq!(p.mode(), Mode::ExactRational);
    assert_eq!(p, sample_point(j, 1, 0, &e).unwrap());
}

#[test]
fn sampled_points_satisfy_constraints() {
    for d in catalog() {
        let p = sample_point(d, 11, 0, &SampleOptions::default()).unwrap();
        assert!(constraints_check(d, &p).unwrap().ok, "{}", d.id);
    }
}

#[test]
fn nonterminating_summation_needs_balance() {
    let d = find("bailey_8phi7_nt").unwrap();
    let mut p = sample_point(d, 2, 0, &SampleOptions::default()).unwrap();
    let f = p.get("f").unwrap().to_c64() * 1.01;
    p.values.insert("f".into(), Scalar::Double(f));
    let rep = constraints_check(d, &p).unwrap();
    assert!(!rep.ok);
    assert!(rep.failures().iter().any(|i| i.name.contains('=')));
}

#[test]
fn six_psi_six_outside_domain_is_flagged() {
    let d = find("bailey_6psi6").unwrap();
    // a^2 q/(bcde) = 1.2
    let p = pt(&[], &[("q", c(0.5, 0.0)), ("a", c(1.2, 0.0)), ("b", c(0.6, 0.0)), ("c", c(1.0, 0.0)), ("d", c(1.0, 0.0)), ("e", c(1.0, 0.0))]);
    assert!(!constraints_check(d, &p).unwrap().ok);
}

#[test]
fn two_sided_terminating_six_psi_six_waives_the_domain() {
    // e = q^-3 stops the series above, b = a stops it below (aq/b = q);
    // |a^2 q/(bcde)| > 1 is then harmless.
    let d = find("bailey_6psi6").unwrap();
    let q = 0.5;
    let p = pt(
        &[],
        &[("q", c(q, 0.0)), ("a", c(0.3, 0.0)), ("b", c(0.3, 0.0)), ("c", c(0.7, 0.1)), ("d", c(-0.9, 0.0)), ("e", c(q.powi(-3), 0.0))],
    );
    let rep = constraints_check(d, &p).unwrap();
    assert!(rep.ok, "{:?}", rep.failures());
    assert!(rel(d, &p, Mode::ComplexDouble) < 1e-12);
}

#[test]
fn chu_chain_with_empty_family() {
    let d = find("chu_2s_tf").unwrap();
    let shape = [("N".to_string(), 0), ("s".to_string(), 0)].into();
    let p = sample_point(d, 9, 0, &SampleOptions { shape: Some(shape), ..Default::default() }).unwrap();
    assert!(constraints_check(d, &p).unwrap().ok);
    assert!(rel(d, &p, Mode::ComplexDouble) < 1e-10);
}

#[test]
fn exact_terminating_identities() {
    let e = SampleOptions { mode: Mode::ExactRational, ..Default::default() };
    for id in ["q_binomial_terminating", "pfaff_saalschutz", "jackson_8phi7"] {
        let d = find(id).unwrap();
        let p = sample_point(d, 4, 0, &e).unwrap();
        let s = evaluate(d, &p, Mode::ExactRational, &EvalOptions::for_mode(Mode::ExactRational)).unwrap();
        assert_eq!(s.lhs, s.rhs, "{id}");
    }
}

#[test]
fn exact_mode_refuses_infinite_products() {
    let d = find("ramanujan_1psi1").unwrap();
    let p = pt(&[], &[("q", r(1, 5)), ("a", r(2, 1)), ("b", r(1, 25)), ("z", r(1, 3))]);
    let e = evaluate(d, &p, Mode::ExactRational, &EvalOptions::for_mode(Mode::ExactRational)).unwrap_err();
    assert!(matches!(e.kind(), "ExactInfiniteProduct" | "ExactNonterminating"), "{e}");
}

#[test]
fn point_json_round_trip() {
    let p = pt(&[("n", 3)], &[("q", r(1, 5)), ("a", r(-2, 7))]);
    let back = Point::from_json(&p.to_json(), Mode::ExactRational).unwrap();
    assert_eq!(back, p);
}

#[test]
fn maps_reproduce_targets() {
    for m in maps() {
        let (target, _) = specialize(m.source, m.name).unwrap();
        let source = find(m.source).unwrap();
        let mut so = SampleOptions::default();
        if m.name == "s=0" {
            so.shape = Some([("r".to_string(), 2), ("form".to_string(), 0)].into());
        }
        if m.name == "b=sqrt(a)" {
            so.shape = Some([("r".to_string(), 3)].into());
        }
        let tp = sample_point(target, 21, 0, &so).unwrap();
        let sp = map_point(m, &tp).unwrap();
        let o = EvalOptions::for_mode(Mode::ComplexDouble);
        let a = evaluate(target, &tp, Mode::ComplexDouble, &o).unwrap();
        let b = evaluate(source, &sp, Mode::ComplexDouble, &o).unwrap();
        assert!(scalar_residual(&a.lhs, &b.lhs, 1e-300).1 < 1e-9, "{} {}", m.source, m.name);
        assert!(scalar_residual(&a.rhs, &b.rhs, 1e-300).1 < 1e-9, "{} {}", m.source, m.name);
    }
    assert_eq!(specialize("bailey_6psi6", "zzz").err().map(|e| e.kind()), Some("UnknownMap"));
}

#[test]
fn form_zero_shape_is_required_for_s_zero() {
    let (_, m) = specialize("ckm_general", "s=0").unwrap();
    let d = find("slater_rpsir_general").unwrap();
    let so = SampleOptions { shape: Some([("r".to_string(), 2), ("form".to_string(), 1)].into()), ..Default::default() };
    let p = sample_point(d, 1, 0, &so).unwrap();
    assert_eq!(map_point(m, &p).unwrap_err().kind(), "BadShape");
}

#[test]
fn parenthesised_exponents() {
    let m = |s: &str| Mono::parse(s).unwrap();
    assert_eq!(m("q^(N-(m1+m2)-1)"), m("q^(N-m1-m2-1)"));
}
