//! Acceptance suite: one test per gate criterion, each printing a pass line.
//! Everything here is an exact assertion; the stated time budgets are
//! enforced with `Instant`.

mod common;

use dehnkit::blocktype::{classify_type, positivity_check, BlockMat, TypeTag};
use dehnkit::catalog::{self, sample};
use dehnkit::corpus;
use dehnkit::exactnum::{rat, rat_int, roots_of_unity_in_field, QuadNum, Rat};
use dehnkit::fillings::{
    act_slope, dependent_orbit, symmetry_set, DependentMode, Slope, SymmetryOpts,
};
use dehnkit::funceq;
use dehnkit::groups::{
    closure, maximal_group, type_census, verify_presentation, PresentationKind, Scenario,
};
use dehnkit::linalg::{block_inverse, Mat2Q, Mat4, Poly};
use dehnkit::spectral::{
    aut_necessary_check, cusp_shape_for_block, primary_matrix, quad_roots_of_unity, AutVerdict,
};
use num::{One, Zero};
use std::time::Instant;

fn pair_5_7_3_11() -> (Slope, Slope) {
    (Slope::from_i64(5, 7), Slope::from_i64(3, 11))
}

#[test]
fn criterion_1_v2788_corpus() {
    let t0 = Instant::now();
    let a = corpus::v2788_a();
    let b = corpus::v2788_b();

    let block_a = BlockMat::from_mat4(&a);
    assert_eq!(classify_type(&block_a), TypeTag::TypeIII);
    assert_eq!(a.min_poly(), Poly::from_i64(&[1, 0, 1]));
    let hit_a = catalog::match_catalog(&block_a).expect("matches");
    assert_eq!(hit_a.template, "x2+1.III.2");
    assert_eq!(hit_a.field_d, Some(-2));

    let block_b = BlockMat::from_mat4(&b);
    assert_eq!(classify_type(&block_b), TypeTag::TypeIII);
    assert_eq!(b.min_poly(), Poly::from_i64(&[1, -1, 1]));
    let hit_b = catalog::match_catalog(&block_b).expect("matches");
    assert_eq!(hit_b.template, "x2-x+1.III.3");
    assert_eq!(hit_b.field_d, Some(-2));

    // (M iota)^2 equals the order-4 matrix exactly
    assert_eq!(b.mul_mat(&Mat4::iota()).pow(2), a);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS (v2788 corpus classifications and the coupling identity; {elapsed:?})");
}

#[test]
fn criterion_2_group_orders() {
    let cases = [
        (-3i64, Scenario::TypeIOnly, 36usize),
        (-1, Scenario::TypeIOnly, 16),
        (-3, Scenario::TypeIAndII, 72),
        (-1, Scenario::TypeIAndII, 32),
        (-7, Scenario::Generic, 8),
    ];
    for (d, scenario, expect) in cases {
        let t0 = Instant::now();
        let g = closure(&maximal_group(d, scenario).unwrap(), 4096).unwrap();
        assert_eq!(g.order(), expect, "{scenario:?} over D={d}");
        if scenario == Scenario::TypeIAndII && d == -3 {
            let census = type_census(&g);
            assert_eq!(census.type_i, 36);
            assert_eq!(census.type_ii, 36);
            assert_eq!(census.type_iii, 0);
            assert_eq!(census.untyped, 0);
        }
        let elapsed = t0.elapsed();
        assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    }
    println!("criterion 2: PASS (closure orders 36/16/72/32/8 and the 36+36 census)");
}

#[test]
fn criterion_3_presentations() {
    // canonical instances
    let sqrt3 = closure(&maximal_group(-3, Scenario::Sqrt3TypeIII).unwrap(), 4096).unwrap();
    let rep3 = verify_presentation(&sqrt3, PresentationKind::Sqrt3);
    assert!(rep3.all_pass(), "{rep3:?}");
    for name in ["eta*iota = -iota*eta", "eta^6 = I", "M*iota*M = -iota*eta^2", "eta^3 = -M^3"] {
        assert!(
            rep3.identities.iter().any(|(n, ok)| n == name && *ok),
            "{name} must pass"
        );
    }

    let sqrt2 = closure(&maximal_group(-2, Scenario::Sqrt2TypeIII).unwrap(), 4096).unwrap();
    let rep2 = verify_presentation(&sqrt2, PresentationKind::Sqrt2);
    assert!(rep2.all_pass(), "{rep2:?}");

    // the v2788 instance satisfies the same presentation
    let v = closure(
        &[corpus::v2788_b(), Mat4::iota(), Mat4::identity().neg()],
        4096,
    )
    .unwrap();
    let repv = verify_presentation(&v, PresentationKind::Sqrt2);
    assert!(repv.all_pass(), "{repv:?}");
    for name in ["iota*M*iota*M = M^3*iota", "iota*M*iota*M^2 = iota*eta*M*iota"] {
        assert!(
            repv.identities.iter().any(|(n, ok)| n == name && *ok),
            "{name} must pass"
        );
    }

    // the distinguished abelian subgroup of order 16
    let pair = closure(&maximal_group(-1, Scenario::Sqrt1TypeIIIPair).unwrap(), 4096).unwrap();
    let repp = verify_presentation(&pair, PresentationKind::Sqrt1Pair);
    assert!(repp.all_pass(), "{repp:?}");
    assert_eq!(repp.h_order, Some(16));
    assert_eq!(repp.h_abelian, Some(true));

    println!("criterion 3: PASS (presentation identities on canonical and v2788 instances; |H| = 16 abelian)");
}

#[test]
fn criterion_4_symmetry_counts() {
    let pair = pair_5_7_3_11();
    let t0 = Instant::now();

    let g72 = closure(&maximal_group(-3, Scenario::TypeIAndII).unwrap(), 4096).unwrap();
    let rep = symmetry_set(&g72, &pair, SymmetryOpts::default()).unwrap();
    assert_eq!(rep.distinct_total, 18);
    assert_eq!(rep.distinct_compatible, 18);

    let g_pair = closure(&maximal_group(-1, Scenario::Sqrt1TypeIIIPair).unwrap(), 4096).unwrap();
    let rep = symmetry_set(
        &g_pair,
        &pair,
        SymmetryOpts { apply_filters: true, c22_nonzero: false },
    )
    .unwrap();
    assert!(rep.distinct_total <= 8, "got {}", rep.distinct_total);
    assert_eq!(rep.distinct_total, 8);

    let g_sqrt2 = closure(&maximal_group(-2, Scenario::Sqrt2TypeIII).unwrap(), 4096).unwrap();
    let rep = symmetry_set(&g_sqrt2, &pair, SymmetryOpts::default()).unwrap();
    assert!(rep.distinct_compatible <= 3, "got {}", rep.distinct_compatible);
    assert_eq!(rep.distinct_compatible, 2); // frozen realized value

    let g_gen = closure(&maximal_group(-7, Scenario::Generic).unwrap(), 4096).unwrap();
    let rep = symmetry_set(&g_gen, &pair, SymmetryOpts::default()).unwrap();
    assert_eq!(rep.distinct_total, 2);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 4: PASS (symmetry counts 18 / 8-with-filters / <=3 / 2; {elapsed:?})");
}

#[test]
fn criterion_5_dependent_orbits() {
    let pair = pair_5_7_3_11();
    let sigma3 = Mat2Q::from_i64(0, -1, 1, -1); // order 3
    let sigma2 = Mat2Q::from_i64(0, 1, 1, 0); // order 2
    let orbit = dependent_orbit(DependentMode::Sgi, -3, &pair, &sigma3, &sigma3).unwrap();
    assert_eq!(orbit.len(), 9);
    let orbit = dependent_orbit(DependentMode::Sgi, -1, &pair, &sigma2, &sigma2).unwrap();
    assert_eq!(orbit.len(), 4);
    let orbit = dependent_orbit(DependentMode::Sgi, -7, &pair, &sigma2, &sigma2).unwrap();
    assert_eq!(orbit.len(), 1);
    println!("criterion 5: PASS (dependent orbits 9 / 4 / 1)");
}

/// Quadratic factors x^2 + s x + p of a rational quartic over Q(sqrt(D)),
/// found by an exhaustive bounded grid over s and exact reconstruction:
/// the independent oracle for the root-of-unity tables.
fn conjugate_quadratic_factors(f: &Poly, d: i64) -> Vec<(QuadNum, QuadNum)> {
    assert_eq!(f.degree(), 4);
    assert!(f.is_monic());
    let c3 = f.coeffs()[3].clone();
    let c2 = f.coeffs()[2].clone();
    let c1 = f.coeffs()[1].clone();
    let c0 = f.coeffs()[0].clone();
    let s0 = &c3 / rat_int(2);
    let dr = rat_int(d);
    let mut out = Vec::new();
    let mut grid = Vec::new();
    for n in -8i64..=8 {
        for den in 1i64..=4 {
            grid.push(rat(n, den));
        }
    }
    for s1 in &grid {
        // p0 is forced by the x^2 coefficient
        let p0 = (&c2 - &(&s0 * &s0) + &(s1 * s1) * &dr) / rat_int(2);
        let candidates: Vec<Rat> = if s1.is_zero() {
            grid.clone()
        } else {
            vec![(&(&s0 * &p0) - &(&c1 / rat_int(2))) / &(s1 * &dr)]
        };
        for p1 in candidates {
            if &(&p0 * &p0) - &(&p1 * &p1) * &dr != c0 {
                continue;
            }
            if &rat_int(2) * &(&s0 * &p0 - &(s1 * &p1) * &dr) != c1 {
                continue;
            }
            let s = QuadNum::new(s0.clone(), s1.clone(), if s1.is_zero() { 0 } else { d });
            let p = QuadNum::new(p0.clone(), p1.clone(), if p1.is_zero() { 0 } else { d });
            // verify (x^2+sx+p)(x^2+conj(s)x+conj(p)) = f exactly
            let sc = s.conj();
            let pc = p.conj();
            let e3 = &s + &sc;
            let e2 = &(&p + &pc) + &(&s * &sc);
            let e1 = &(&s * &pc) + &(&sc * &p);
            let e0 = &p * &pc;
            let is = |q: &QuadNum, r: &Rat| q.is_rational() && q.a == *r;
            if is(&e3, &c3) && is(&e2, &c2) && is(&e1, &c1) && is(&e0, &c0) {
                if !out.contains(&(s.clone(), p.clone())) {
                    out.push((s, p));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_root_of_unity_tables() {
    let quartic_cyclos: Vec<(u32, Poly)> = dehnkit::linalg::cyclotomics()
        .into_iter()
        .filter(|(_, p)| p.degree() == 4)
        .collect();
    // For x^2 - a x - 1 over imaginary quadratic fields, the admissible a
    // with degree-4 roots of unity are exactly +-sqrt(-1) and +-sqrt(-2).
    let mut admissible: Vec<(i64, QuadNum)> = Vec::new();
    for d in [-1i64, -2, -3, -5, -6, -7, -10, -11] {
        for (_, phi) in &quartic_cyclos {
            for (s, p) in conjugate_quadratic_factors(phi, d) {
                // x^2 + s x + p has trace -s and det p; we want det -1
                if p == QuadNum::from_int(-1) {
                    let a = -&s;
                    if !a.is_rational() {
                        admissible.push((d, a));
                    }
                }
            }
        }
    }
    admissible.sort_by_key(|(d, a)| (*d, format!("{a}")));
    let i = QuadNum::new(Rat::zero(), Rat::one(), -1);
    let r2 = QuadNum::new(Rat::zero(), Rat::one(), -2);
    let mut expect = vec![
        (-1i64, i.clone()),
        (-1, -&i),
        (-2, r2.clone()),
        (-2, -&r2),
    ];
    expect.sort_by_key(|(d, a)| (*d, format!("{a}")));
    assert_eq!(admissible, expect);

    // cross-check against the implementation over a grid of candidate traces
    for d in [-1i64, -2, -3, -7] {
        for an in -4i64..=4 {
            for bn in -4i64..=4 {
                let a = QuadNum::new(rat(an, 2), rat(bn, 2), d);
                let got = quad_roots_of_unity(&a, &QuadNum::from_int(-1), d);
                let deg4 = got.map(|(o1, _)| [5, 8, 10, 12].contains(&o1)).unwrap_or(false);
                let is_admissible = (d == -1 && a.a.is_zero() && (a.b == Rat::one() || a.b == -Rat::one()))
                    || (d == -2 && a.a.is_zero() && (a.b == Rat::one() || a.b == -Rat::one()));
                assert_eq!(deg4, is_admissible, "D={d}, a={a}");
            }
        }
    }

    // For determinant +-sqrt(-1) or (-1 -+ sqrt(-3))/2 (a sixth root), a
    // degree-4 pair of roots of unity forces trace 0: exhaustively over the
    // factor tables and over a trace grid.
    for (d, dets) in [
        (-1i64, vec![i.clone(), -&i]),
        (
            -3,
            vec![
                QuadNum::new(rat(-1, 2), rat(1, 2), -3),
                QuadNum::new(rat(-1, 2), rat(-1, 2), -3),
                QuadNum::new(rat(1, 2), rat(1, 2), -3),
                QuadNum::new(rat(1, 2), rat(-1, 2), -3),
            ],
        ),
    ] {
        for (_, phi) in &quartic_cyclos {
            for (s, p) in conjugate_quadratic_factors(phi, d) {
                if dets.contains(&p) {
                    assert!(s.is_zero(), "factor of {phi} over D={d} with det {p} has trace {s}");
                }
            }
        }
        for det in dets {
            for an in -4i64..=4 {
                for bn in -4i64..=4 {
                    let tr = QuadNum::new(rat(an, 2), rat(bn, 2), d);
                    if let Some((o1, o2)) = quad_roots_of_unity(&tr, &det, d) {
                        if [5, 8, 10, 12].contains(&o1) || [5, 8, 10, 12].contains(&o2) {
                            assert!(tr.is_zero(), "trace {tr} with det {det} over D={d}");
                        }
                    }
                }
            }
        }
    }
    println!("criterion 6: PASS (degree-4 root-of-unity tables reproduced exhaustively)");
}

#[test]
fn criterion_7_property_suites() {
    let t0 = Instant::now();
    let mut rng = common::rng(0xDE11);

    // field axioms and conjugation on 10^4 random samples
    for _ in 0..10_000 {
        let x = common::rand_quad(&mut rng, -2);
        let y = common::rand_quad(&mut rng, -2);
        let z = common::rand_quad(&mut rng, -2);
        assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.is_zero() {
            assert_eq!(&x * &x.inv(), QuadNum::from_int(1));
        }
    }

    // block inverse agrees with Gaussian elimination on 200 random matrices
    let mut done = 0;
    while done < 200 {
        let m = common::rand_invertible_mat4(&mut rng);
        if m.blocks()[0].det().is_zero() {
            continue;
        }
        assert_eq!(block_inverse(&m).unwrap(), m.inverse().unwrap());
        done += 1;
    }

    // catalog round trip on 200 instances per template
    for e in catalog::entries() {
        for seed in 0..200u64 {
            let (p1, p2) = sample::params_for(e, seed);
            let m = catalog::synthesize(e.id, &p1, &p2).unwrap();
            let hit = catalog::match_catalog(&m).expect(e.id);
            assert_eq!(hit.template, e.id);
            assert_eq!(hit.a1, p1, "{}", e.id);
            assert_eq!(hit.a2, p2, "{}", e.id);
        }
    }

    // every cataloged matrix passes positivity, finite order, and (on
    // cusp-compatible instances) the membership necessary condition
    for e in catalog::entries() {
        for seed in 0..20u64 {
            let (p1, p2) = sample::params_for(e, seed);
            let m = catalog::synthesize(e.id, &p1, &p2).unwrap();
            assert_eq!(classify_type(&m), e.tag, "{}", e.id);
            assert_eq!(m.whole.min_poly(), e.min_poly, "{}", e.id);
            assert!(m.whole.finite_order().is_some(), "{}", e.id);
            assert!(positivity_check(&m), "{}", e.id);
        }
        if let Some((p1, p2)) = sample::compatible_params(e, 1) {
            let m = catalog::synthesize(e.id, &p1, &p2).unwrap();
            let t1 = cusp_shape_for_block(&m.a1)
                .or_else(|| cusp_shape_for_block(&m.a2));
            let t2 = cusp_shape_for_block(&m.a4)
                .or_else(|| cusp_shape_for_block(&m.a3));
            let (t1, t2) = match (t1, t2) {
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) => (a.clone(), a),
                (None, Some(b)) => (b.clone(), b),
                (None, None) => continue, // scalar blocks: nothing to check
            };
            let p = primary_matrix(&m, &t1, &t2).expect(e.id);
            assert_ne!(aut_necessary_check(&p), AutVerdict::Violation, "{}", e.id);
        }
    }

    // kernel elements re-verify by independent symbolic expansion
    let tau = corpus::v2788_tau();
    let b = BlockMat::from_mat4(&corpus::v2788_b());
    let p = primary_matrix(&b, &tau, &tau).unwrap();
    let kernel = funceq::constraint_kernel(&p, 3);
    assert!(!kernel.is_empty());
    for pair in &kernel {
        assert!(funceq::verify_constraint(&p, pair));
    }

    // act_slope functoriality and scaling invariance on 10^3 random (A, s)
    for _ in 0..1000 {
        let a = common::rand_invertible_mat2(&mut rng);
        let b2 = common::rand_invertible_mat2(&mut rng);
        let s = loop {
            let p = common::rand_rat(&mut rng);
            let q = common::rand_rat(&mut rng);
            let pi = p.numer() * q.denom();
            let qi = q.numer() * p.denom();
            if let Ok(s) = Slope::new(pi, qi) {
                break s;
            }
        };
        let c = loop {
            let c = common::rand_rat(&mut rng);
            if !c.is_zero() {
                break c;
            }
        };
        assert_eq!(
            act_slope(&a.scale(&c), &s).unwrap(),
            act_slope(&a, &s).unwrap()
        );
        assert_eq!(
            act_slope(&a.mul_mat(&b2), &s).unwrap(),
            act_slope(&a, &act_slope(&b2, &s).unwrap()).unwrap()
        );
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 7: PASS (exact property suites; {elapsed:?})");
}

#[test]
fn criterion_8_exclusions() {
    // The pseudo-complex-volume equalities need hyperbolic-geometry
    // numerics and are out of scope; the matrix-level identities of
    // criteria 1-3 stand in for them. Re-assert the central identity here.
    let a = corpus::v2788_a();
    let b = corpus::v2788_b();
    assert_eq!(b.mul_mat(&Mat4::iota()).pow(2), a);
    let roots = roots_of_unity_in_field(-2);
    assert_eq!(roots.len(), 2);
    println!(
        "criterion 8: EXCLUDED BY DESIGN (volume numerics out of scope; matrix identities of criteria 1-3 substituted)"
    );
}
