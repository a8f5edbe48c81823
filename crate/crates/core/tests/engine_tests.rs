//! Engine operation tests. Expected values are frozen from hand
//! derivations or the independent oracles in this file.

use num_rational::Ratio;

use crk_core::catalog::{self, Family, SpaceRecord};
use crk_core::dsl::{parse, realize, realize_document, realize_profile};
use crk_core::engine::{
    self, analyze, charrank, charrank_parity, cup_bound_from_profile, cup_bound_null_cobordant,
    cup_length, cup_witness, enumerate_profiles, max_sw_monomial_length, poincare_pairing_check,
    pullback, resolve_constraints, sq1_validate, sw_inverse, sw_spans, sw_spans_restricted,
    ucharrank_formal, whitney_sum, Constraint, EngineError, SWProfile,
    DEFAULT_ENUMERATION_LIMIT,
};
use crk_core::{Algebra, BitVector, Element};

fn record(family: Family) -> SpaceRecord {
    catalog::build(family).unwrap()
}

fn bundle_profile(record: &SpaceRecord, name: &str) -> SWProfile {
    record.bundle(name).unwrap().profile.clone()
}

/// Brute-force cup length: search products of basis classes directly with
/// element arithmetic, independently of the span-based dynamic programming.
fn oracle_cup_length(alg: &Algebra) -> usize {
    fn extend(alg: &Algebra, current: &Element, from: usize, classes: &[(usize, usize)]) -> usize {
        let mut best = 0;
        for (pos, &(deg, idx)) in classes.iter().enumerate().skip(from) {
            let e = Element::basis_class(alg, deg, idx).unwrap();
            let prod = current.mul(&e).unwrap();
            if prod.is_zero() {
                continue;
            }
            best = best.max(1 + extend(alg, &prod, pos, classes));
        }
        best
    }
    let classes: Vec<(usize, usize)> = (1..=alg.dim())
        .flat_map(|deg| (0..alg.betti(deg)).map(move |idx| (deg, idx)))
        .collect();
    extend(alg, &Element::unit(alg), 0, &classes)
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[test]
fn analyze_first_nonzero_degrees() {
    assert_eq!(analyze(&record(Family::Rp { n: 4 }).algebra).r_x, 1);
    assert_eq!(analyze(&record(Family::Cp { n: 3 }).algebra).r_x, 2);
    let sphere = record(Family::Sphere { d: 6 }).algebra;
    let a = analyze(&sphere);
    assert_eq!(a.r_x, 6);
    assert_eq!(a.k_x, 6);
    assert!(a.poincare);
}

#[test]
fn analyze_sets_r_to_dim_plus_one_without_reduced_cohomology() {
    let alg = realize(&parse(r#"space "disk" { dim 3 gen a:4 }"#).unwrap().spaces[0]).unwrap();
    let a = analyze(&alg);
    assert_eq!(a.betti, vec![1, 0, 0, 0]);
    assert_eq!(a.r_x, 4);
    // Every profile over an acyclic space covers everything vacuously.
    assert_eq!(charrank(&SWProfile::trivial(&alg)), 3);
}

// ---------------------------------------------------------------------------
// sw_spans / charrank
// ---------------------------------------------------------------------------

#[test]
fn spans_of_the_trivial_profile_vanish() {
    let alg = record(Family::Dold { m: 2, n: 3 }).algebra;
    let spans = sw_spans(&SWProfile::trivial(&alg));
    assert!(spans.covered(0));
    for j in 1..=8 {
        assert_eq!(spans.rank(j), 0, "degree {j}");
    }
}

#[test]
fn spans_on_the_dold_manifold() {
    let rec = record(Family::Dold { m: 2, n: 3 });
    // w = 1 + c + d covers H^2 = span{c^2, d}.
    let eta = bundle_profile(&rec, "eta");
    let spans = sw_spans(&eta);
    assert_eq!(spans.rank(2), 2);
    assert!(spans.covered(2));
    // w = 1 + c reaches only c^2 in degree 2.
    let xi = bundle_profile(&rec, "xi");
    let spans = sw_spans(&xi);
    assert_eq!(spans.rank(2), 1);
    assert!(!spans.covered(2));
}

#[test]
fn charrank_examples() {
    for n in 2..=6 {
        let rec = record(Family::Rp { n });
        assert_eq!(charrank(&bundle_profile(&rec, "gamma")), n, "RP{n}");
    }
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
        let rec = record(Family::Dold { m, n });
        assert_eq!(charrank(&bundle_profile(&rec, "eta")), 2 * n + m);
        assert_eq!(charrank(&bundle_profile(&rec, "xi")), 1);
    }
    // A trivial total class stops right below the first nonzero degree.
    for family in [
        Family::Rp { n: 5 },
        Family::Dold { m: 2, n: 3 },
        Family::ProductSpheres { d: 2, m: 6 },
    ] {
        let alg = record(family).algebra;
        let r = analyze(&alg).r_x;
        assert_eq!(charrank(&SWProfile::trivial(&alg)), r - 1);
    }
    // The pulled-back Hopf bundle over S^2 x S^6.
    let rec = record(Family::ProductSpheres { d: 2, m: 6 });
    assert_eq!(charrank(&bundle_profile(&rec, "xi")), 5);
}

// ---------------------------------------------------------------------------
// cup length
// ---------------------------------------------------------------------------

#[test]
fn cup_length_examples() {
    assert_eq!(cup_length(&record(Family::Rp { n: 5 }).algebra), 5);
    assert_eq!(
        cup_length(&record(Family::ProductSpheres { d: 2, m: 6 }).algebra),
        2
    );
    assert_eq!(cup_length(&record(Family::Dold { m: 1, n: 1 }).algebra), 2);
}

#[test]
fn cup_length_matches_brute_force_oracle() {
    let families = [
        Family::Sphere { d: 3 },
        Family::Rp { n: 4 },
        Family::Rp { n: 6 },
        Family::Cp { n: 3 },
        Family::S1xCp { n: 2 },
        Family::Dold { m: 1, n: 1 },
        Family::Dold { m: 2, n: 3 },
        Family::ProductSpheres { d: 2, m: 6 },
        Family::ProductSpheres { d: 3, m: 3 },
        Family::Moore { n: 3 },
        Family::Stunted { n: 9, m: 3 },
        Family::Lens { m: 3, n: 2 },
    ];
    for family in families {
        let alg = record(family).algebra;
        assert_eq!(
            cup_length(&alg),
            oracle_cup_length(&alg),
            "{}",
            alg.name()
        );
    }
}

#[test]
fn cup_witness_multiplies_to_something_nonzero() {
    for family in [
        Family::Rp { n: 5 },
        Family::Dold { m: 2, n: 3 },
        Family::S1xCp { n: 2 },
        Family::Stunted { n: 9, m: 3 },
    ] {
        let alg = record(family).algebra;
        let witness = cup_witness(&alg);
        assert_eq!(witness.len(), cup_length(&alg));
        let mut prod = Element::unit(&alg);
        for (deg, name) in &witness {
            let idx = alg.basis_index(*deg, name).unwrap();
            prod = prod
                .mul(&Element::basis_class(&alg, *deg, idx).unwrap())
                .unwrap();
        }
        assert!(!prod.is_zero(), "{}", alg.name());
    }
    // RP^5: five degree-one factors.
    let witness = cup_witness(&record(Family::Rp { n: 5 }).algebra);
    assert_eq!(witness.iter().map(|(d, _)| d).sum::<usize>(), 5);
    assert!(witness.iter().all(|(d, _)| *d == 1));
}

// ---------------------------------------------------------------------------
// max SW monomial length
// ---------------------------------------------------------------------------

#[test]
fn monomial_length_examples() {
    // S^4 x S^8 with w_4 = x, w_8 = y, w_12 = xy: w_4 w_8 = xy is nonzero,
    // every length-3 product vanishes.
    let rec = record(Family::ProductSpheres { d: 4, m: 8 });
    assert_eq!(max_sw_monomial_length(&bundle_profile(&rec, "xi")), 2);

    let alg = record(Family::Rp { n: 5 }).algebra;
    assert_eq!(max_sw_monomial_length(&SWProfile::trivial(&alg)), 0);

    // gamma over RP^5: direct powers of a as the oracle.
    let rec = record(Family::Rp { n: 5 });
    let a = Element::basis_class(&rec.algebra, 1, 0).unwrap();
    assert!(!a.pow(5).is_zero());
    assert!(a.pow(6).is_zero());
    assert_eq!(max_sw_monomial_length(&bundle_profile(&rec, "gamma")), 5);
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

#[test]
fn bundle_bound_on_s2_x_s6() {
    let rec = record(Family::ProductSpheres { d: 2, m: 6 });
    let xi = bundle_profile(&rec, "xi");
    let bound = cup_bound_from_profile(&xi, 5).unwrap();
    assert_eq!(bound.floor, 2);
    assert_eq!(bound.exact, Ratio::new(2, 1));
}

#[test]
fn bundle_bound_on_s4_x_s8() {
    let rec = record(Family::ProductSpheres { d: 4, m: 8 });
    let xi = bundle_profile(&rec, "xi");
    let bound = cup_bound_from_profile(&xi, 7).unwrap();
    assert_eq!(bound.floor, 2);
    // k = 12 admits the nonzero degree-12 monomial w_4 w_8.
    match cup_bound_from_profile(&xi, 12) {
        Err(EngineError::NonzeroRestrictedMonomial { indices, degree }) => {
            assert_eq!(degree, 12);
            assert_eq!(indices, vec![4, 8]);
        }
        other => panic!("expected a nonzero restricted monomial, got {other:?}"),
    }
}

#[test]
fn bundle_bound_rejects_k_above_charrank() {
    let rec = record(Family::ProductSpheres { d: 2, m: 6 });
    let xi = bundle_profile(&rec, "xi");
    assert!(matches!(
        cup_bound_from_profile(&xi, 6),
        Err(EngineError::KExceedsCharrank { k: 6, charrank: 5 })
    ));
}

#[test]
fn null_cobordant_bound_examples() {
    let s2s6 = record(Family::ProductSpheres { d: 2, m: 6 }).algebra;
    assert_eq!(cup_bound_null_cobordant(&s2s6, 1).unwrap().floor, 4);
    let z5 = cup_bound_null_cobordant(&s2s6, 5).unwrap();
    assert_eq!(z5.floor, 2);
    assert_eq!(z5.exact, Ratio::new(2, 1));
    let s4s8 = record(Family::ProductSpheres { d: 4, m: 8 }).algebra;
    assert_eq!(cup_bound_null_cobordant(&s4s8, 3).unwrap().floor, 3);
}

#[test]
fn null_cobordant_bound_preconditions() {
    let dold = record(Family::Dold { m: 2, n: 3 }).algebra;
    assert!(matches!(
        cup_bound_null_cobordant(&dold, 9),
        Err(EngineError::ZOutOfRange { z: 9, dim: 8 })
    ));
    // In range, but the Dold record does not certify null-cobordance.
    assert!(matches!(
        cup_bound_null_cobordant(&dold, 1),
        Err(EngineError::NotNullCobordant { .. })
    ));
    let moore = record(Family::Moore { n: 3 }).algebra;
    assert!(matches!(
        cup_bound_null_cobordant(&moore, 1),
        Err(EngineError::NotPoincare { .. })
    ));
}

// ---------------------------------------------------------------------------
// Whitney sums, inverses, pullbacks
// ---------------------------------------------------------------------------

#[test]
fn whitney_sum_examples() {
    let rec = record(Family::Rp { n: 3 });
    let gamma = bundle_profile(&rec, "gamma");
    let trivial = SWProfile::trivial(&rec.algebra);
    assert_eq!(whitney_sum(&gamma, &trivial).unwrap(), gamma);
    // (1+a)^2 = 1 + a^2 over F2.
    let double = whitney_sum(&gamma, &gamma).unwrap();
    assert!(double.class(1).is_zero());
    assert_eq!(double.element(2).render(), "a2");

    // (1+a)(1+b) over S^1 x CP^n.
    let rec = record(Family::S1xCp { n: 2 });
    let g = bundle_profile(&rec, "gamma");
    let e = bundle_profile(&rec, "eta");
    let sum = whitney_sum(&g, &e).unwrap();
    assert_eq!(sum.element(1).render(), "a");
    assert_eq!(sum.element(2).render(), "b");
    assert_eq!(sum.element(3).render(), "ab");
    assert_eq!(sum, bundle_profile(&rec, "gamma_plus_eta"));
}

#[test]
fn sw_inverse_examples() {
    let rec = record(Family::Rp { n: 3 });
    let gamma = bundle_profile(&rec, "gamma");
    let inv = sw_inverse(&gamma);
    for i in 1..=3 {
        assert_eq!(inv.element(i).render(), format!("a{}", if i == 1 { String::new() } else { i.to_string() }).replace("a1", "a"));
    }
    // Defining property: the product of total classes is 1.
    let product = gamma.total_class().mul(&inv.total_class()).unwrap();
    assert_eq!(product, Element::unit(&rec.algebra));

    let trivial = SWProfile::trivial(&rec.algebra);
    assert_eq!(sw_inverse(&trivial), trivial);

    // Every profile on P(2,3) sums with its inverse to the trivial one.
    let dold = record(Family::Dold { m: 2, n: 3 }).algebra;
    for p in enumerate_profiles(&dold, &[], DEFAULT_ENUMERATION_LIMIT).unwrap() {
        let sum = whitney_sum(&p, &sw_inverse(&p)).unwrap();
        assert!(sum.is_trivial(), "{}", p.render());
    }
}

#[test]
fn pullback_examples() {
    let doc = parse(
        r#"
        space "S2" { dim 2 basis x2:2 }
        space "S2xS6" { dim 8 gen x:2 gen y:6 rel x^2 rel y^2 }
        map "proj" from "S2" to "S2xS6" { x2 -> x }
        bundle "nu2" on "S2" { w2 = x2 }
        "#,
    )
    .unwrap();
    let realized = realize_document(&doc).unwrap();
    let proj = &realized.maps["proj"];
    let nu2 = &realized.profiles[&("S2".to_string(), "nu2".to_string())];
    let pulled = pullback(proj, nu2).unwrap();
    assert_eq!(pulled.element(2).render(), "x");
    assert_eq!(charrank(&pulled), 5);

    let trivial = SWProfile::trivial(&realized.algebras["S2"]);
    assert!(pullback(proj, &trivial).unwrap().is_trivial());
}

#[test]
fn pullback_of_the_complex_line_bundle() {
    // H*(CP^n) -> H*(S^1 x CP^n), b -> b: the image profile has w_1 = 0,
    // so its characteristic rank is 0.
    let doc = parse(
        r#"
        space "CP2" { dim 4 gen b:2 rel b^3 }
        space "S1xCP2" { dim 5 gen a:1 gen b:2 rel a^2 rel b^3 }
        map "incl" from "CP2" to "S1xCP2" { b -> b }
        bundle "gamma" on "CP2" { w2 = b }
        "#,
    )
    .unwrap();
    let realized = realize_document(&doc).unwrap();
    let gamma = &realized.profiles[&("CP2".to_string(), "gamma".to_string())];
    let pulled = pullback(&realized.maps["incl"], gamma).unwrap();
    assert_eq!(pulled.element(2).render(), "b");
    assert!(pulled.class(1).is_zero());
    assert_eq!(charrank(&pulled), 0);
}

// ---------------------------------------------------------------------------
// Poincare pairing
// ---------------------------------------------------------------------------

#[test]
fn pairing_check_examples() {
    for family in [Family::Dold { m: 1, n: 1 }, Family::Dold { m: 2, n: 3 }] {
        assert!(poincare_pairing_check(&record(family).algebra));
    }
    assert!(poincare_pairing_check(&record(Family::Rp { n: 6 }).algebra));
    assert!(!poincare_pairing_check(
        &record(Family::Moore { n: 3 }).algebra
    ));
    assert!(!poincare_pairing_check(
        &record(Family::Stunted { n: 5, m: 1 }).algebra
    ));
}

// ---------------------------------------------------------------------------
// Parity
// ---------------------------------------------------------------------------

#[test]
fn parity_examples() {
    let rec = record(Family::Rp { n: 5 });
    assert_eq!(charrank_parity(&bundle_profile(&rec, "gamma")).unwrap(), 1);
    // An orientable profile (w_1 = 0) has charrank 0, parity 0.
    let orientable = SWProfile::from_classes(
        &rec.algebra,
        [(2, Element::basis_class(&rec.algebra, 2, 0).unwrap())],
    )
    .unwrap();
    assert_eq!(charrank_parity(&orientable).unwrap(), 0);

    // RP^4 fails the hypothesis: charrank 4 is even and positive.
    let rp4 = record(Family::Rp { n: 4 });
    assert!(matches!(
        charrank_parity(&bundle_profile(&rp4, "gamma")),
        Err(EngineError::ParityHypothesis { .. })
    ));
    // CP^n fails already on r_X.
    let cp = record(Family::Cp { n: 2 });
    assert!(matches!(
        charrank_parity(&bundle_profile(&cp, "gamma")),
        Err(EngineError::ParityHypothesis { .. })
    ));
}

#[test]
fn parity_is_additive_on_rp3() {
    let alg = record(Family::Rp { n: 3 }).algebra;
    let profiles: Vec<SWProfile> =
        enumerate_profiles(&alg, &[], DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .collect();
    assert_eq!(profiles.len(), 8);
    for p in &profiles {
        for q in &profiles {
            let sum = whitney_sum(p, q).unwrap();
            let lhs = charrank_parity(&sum).unwrap();
            let rhs = (charrank_parity(p).unwrap() + charrank_parity(q).unwrap()) % 2;
            assert_eq!(lhs, rhs, "{} + {}", p.render(), q.render());
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

#[test]
fn enumeration_counts_the_universe() {
    let alg = record(Family::Rp { n: 2 }).algebra;
    let profiles: Vec<SWProfile> =
        enumerate_profiles(&alg, &[], DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .collect();
    assert_eq!(profiles.len(), 4);
}

#[test]
fn spherical_constraint_on_s6() {
    let rec = record(Family::Sphere { d: 6 });
    let survivors: Vec<SWProfile> =
        enumerate_profiles(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .collect();
    assert_eq!(survivors.len(), 1);
    assert!(survivors[0].is_trivial());
}

#[test]
fn wu_constraint_on_the_moore_space() {
    let rec = record(Family::Moore { n: 2 });
    let survivors: Vec<SWProfile> =
        enumerate_profiles(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .collect();
    // w_2 = x2 requires w_3 = Sq1(x2) = x3; w_2 = 0 requires w_3 = 0.
    assert_eq!(survivors.len(), 2);
    assert!(survivors.iter().any(SWProfile::is_trivial));
    let xi = bundle_profile(&rec, "xi");
    assert!(survivors.contains(&xi));
    // The dropped profile: w_2 = x2 with w_3 = 0.
    let dropped = SWProfile::from_classes(
        &rec.algebra,
        [(2, Element::basis_class(&rec.algebra, 2, 0).unwrap())],
    )
    .unwrap();
    assert!(!survivors.contains(&dropped));
}

#[test]
fn power2_constraint_drops_odd_first_indices() {
    let alg = record(Family::Sphere { d: 3 }).algebra;
    let survivors: Vec<SWProfile> = enumerate_profiles(
        &alg,
        &[Constraint::Power2FirstNonzero],
        DEFAULT_ENUMERATION_LIMIT,
    )
    .unwrap()
    .collect();
    assert_eq!(survivors.len(), 1);
    assert!(survivors[0].is_trivial());
}

#[test]
fn forced_zero_constraint() {
    let alg = record(Family::Rp { n: 2 }).algebra;
    let survivors: Vec<SWProfile> = enumerate_profiles(
        &alg,
        &[Constraint::ForcedZero {
            coords: vec![(1, 0)],
        }],
        DEFAULT_ENUMERATION_LIMIT,
    )
    .unwrap()
    .collect();
    assert_eq!(survivors.len(), 2);
    assert!(survivors.iter().all(|p| p.class(1).is_zero()));
}

#[test]
fn trivial_only_yields_one_profile() {
    let rec = record(Family::Lens { m: 3, n: 2 });
    let survivors: Vec<SWProfile> =
        enumerate_profiles(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT)
            .unwrap()
            .collect();
    assert_eq!(survivors.len(), 1);
    assert!(survivors[0].is_trivial());
}

#[test]
fn enumeration_respects_the_limit() {
    let alg = record(Family::Rp { n: 5 }).algebra;
    assert!(matches!(
        enumerate_profiles(&alg, &[], 16),
        Err(EngineError::CapacityExceeded { bits: 5, limit: 16 })
    ));
    assert!(enumerate_profiles(&alg, &[], 32).is_ok());
}

#[test]
fn wu_constraint_needs_sq1_metadata() {
    let alg = record(Family::Rp { n: 3 }).algebra;
    assert!(matches!(
        enumerate_profiles(&alg, &[Constraint::WuSq1], DEFAULT_ENUMERATION_LIMIT),
        Err(EngineError::MissingSq1 { .. })
    ));
}

// ---------------------------------------------------------------------------
// ucharrank
// ---------------------------------------------------------------------------

#[test]
fn ucharrank_on_projective_spaces() {
    for n in 2..=6 {
        let rec = record(Family::Rp { n });
        let result =
            ucharrank_formal(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(result.value, n);
        // First maximizer in lexicographic order: w = 1 + a.
        assert_eq!(result.witness.render(), "w1 = a");
        assert_eq!(result.universe, 1 << n);
    }
}

#[test]
fn ucharrank_with_spherical_constraint_on_s6() {
    let rec = record(Family::Sphere { d: 6 });
    let result =
        ucharrank_formal(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(result.value, 5);
    assert!(result.witness.is_trivial());
}

#[test]
fn ucharrank_with_trivial_only_on_moore_4() {
    let rec = record(Family::Moore { n: 4 });
    let result =
        ucharrank_formal(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(result.value, 3);
    assert_eq!(result.surviving, 1);
}

#[test]
fn ucharrank_is_deterministic() {
    let rec = record(Family::Dold { m: 2, n: 3 });
    let a = ucharrank_formal(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT).unwrap();
    let b = ucharrank_formal(&rec.algebra, &rec.constraints, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.witness, b.witness);
    // Lexicographically first maximizer: w_1 = c and w_2 = d, nothing else.
    assert_eq!(a.witness.render(), "w1 = c; w2 = d");
}

// ---------------------------------------------------------------------------
// Sq^1 validation and lints
// ---------------------------------------------------------------------------

#[test]
fn sq1_validates_on_the_moore_space() {
    let alg = record(Family::Moore { n: 2 }).algebra;
    assert!(sq1_validate(&alg).unwrap().is_empty());
}

#[test]
fn sq1_validates_on_rp3() {
    let alg = realize(
        &parse(r#"space "RP3" { dim 3 gen a:1 rel a^4 meta sq1 a = a^2 }"#)
            .unwrap()
            .spaces[0],
    )
    .unwrap();
    assert!(sq1_validate(&alg).unwrap().is_empty());
}

#[test]
fn sq1_squaring_violation_is_reported() {
    // Sq1(x2) = x3 and Sq1(x3) = x4 breaks Sq1 o Sq1 = 0.
    let alg = realize(
        &parse(
            r#"space "bad" { dim 4
                basis x2:2 basis x3:3 basis x4:4
                meta sq1 x2 = x3
                meta sq1 x3 = x4
            }"#,
        )
        .unwrap()
        .spaces[0],
    )
    .unwrap();
    let violations = sq1_validate(&alg).unwrap();
    assert!(violations.iter().any(|v| v.contains("Sq1(Sq1(")), "{violations:?}");
}

#[test]
fn sq1_missing_metadata_is_an_error() {
    let alg = record(Family::Rp { n: 3 }).algebra;
    assert!(matches!(
        sq1_validate(&alg),
        Err(EngineError::MissingSq1 { .. })
    ));
}

#[test]
fn sq1_degree_one_square_rule_is_checked() {
    let alg = realize(
        &parse(r#"space "RP3" { dim 3 gen a:1 rel a^4 meta sq1 a = 0 }"#)
            .unwrap()
            .spaces[0],
    )
    .unwrap();
    let violations = sq1_validate(&alg).unwrap();
    assert!(violations.iter().any(|v| v.contains("degree 1")), "{violations:?}");
}

#[test]
fn spherical_lint_fires_on_covered_spherical_degrees() {
    // A profile covering H^2 through w_1^2 while w_2 itself vanishes on the
    // declared spherical class cannot come from a bundle.
    let alg = realize(
        &parse(r#"space "demo" { dim 2 gen a:1 rel a^3 meta spherical 2:a2 }"#)
            .unwrap()
            .spaces[0],
    )
    .unwrap();
    let p = SWProfile::from_classes(&alg, [(1, Element::basis_class(&alg, 1, 0).unwrap())])
        .unwrap();
    assert_eq!(charrank(&p), 2);
    let lints = engine::spherical_lints(&p);
    assert_eq!(lints.len(), 1);
    let full = SWProfile::from_classes(
        &alg,
        [
            (1, Element::basis_class(&alg, 1, 0).unwrap()),
            (2, Element::basis_class(&alg, 2, 0).unwrap()),
        ],
    )
    .unwrap();
    assert!(engine::spherical_lints(&full).is_empty());
}

// ---------------------------------------------------------------------------
// Restricted spans and constraint resolution
// ---------------------------------------------------------------------------

#[test]
fn restricted_spans_ignore_higher_classes() {
    let rec = record(Family::ProductSpheres { d: 4, m: 8 });
    let xi = bundle_profile(&rec, "xi");
    // Restricted to w_1..w_7 only w_4 = x contributes; degree 12 dies.
    let restricted = sw_spans_restricted(&xi, 7);
    assert_eq!(restricted.rank(4), 1);
    assert_eq!(restricted.rank(8), 0);
    assert_eq!(restricted.rank(12), 0);
    let full = sw_spans(&xi);
    assert_eq!(full.rank(12), 1);
}

#[test]
fn constraint_resolution_uses_space_metadata() {
    let rec = record(Family::Sphere { d: 6 });
    let constraints =
        resolve_constraints(&rec.algebra, &rec.algebra.meta().constraint_flags).unwrap();
    assert_eq!(constraints.len(), 1);
    match &constraints[0] {
        Constraint::Spherical { degree, functional } => {
            assert_eq!(*degree, 6);
            assert_eq!(functional, &BitVector::unit(1, 0).unwrap());
        }
        other => panic!("unexpected constraint {other:?}"),
    }
}

#[test]
fn profiles_are_their_total_classes() {
    // Rebuilding a profile from its total class is the identity, so equal
    // total classes mean equal characteristic ranks by construction.
    let alg = record(Family::Dold { m: 2, n: 3 }).algebra;
    for p in enumerate_profiles(&alg, &[], DEFAULT_ENUMERATION_LIMIT)
        .unwrap()
        .take(64)
    {
        let rebuilt = SWProfile::from_total_class(&p.total_class()).unwrap();
        assert_eq!(rebuilt, p);
        assert_eq!(charrank(&rebuilt), charrank(&p));
    }
}

#[test]
fn realize_profile_rejects_wrong_degree_values() {
    let rec = record(Family::Dold { m: 2, n: 3 });
    let doc = parse(
        r#"
        space "Dold P(2,3)" { dim 8 gen c:1 gen d:2 rel c^3 rel d^4 }
        bundle "late" on "Dold P(2,3)" { w4 = (c + 0)^4 }
        "#,
    )
    .unwrap();
    // c^4 = 0 in P(2,3), so the assignment is fine and evaluates to zero.
    let alg = realize(&doc.spaces[0]).unwrap();
    let p = realize_profile(doc.bundle("Dold P(2,3)", "late").unwrap(), &alg).unwrap();
    assert!(p.class(4).is_zero());
    drop(rec);
}
