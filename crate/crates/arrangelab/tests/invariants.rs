//! Cross-module structural invariants on seeded corpora: the splitting of
//! D(A) off the Euler part, independence of the minimal degree from the
//! chosen line, monotonicity of multiarrangement modules, injectivity of the
//! restriction map degree-wise, and the restriction-size dichotomy on free
//! arrangements.

use arrangelab::combin::{
    char_poly0, is_supersolvable, mu_histogram, n2, n2_on_line, restriction, restriction_size,
    MultiArrangement, P1Point,
};
use arrangelab::derivation::{
    default_mdr_cap, dim_d_graded, dim_dh_graded, is_free, mdr_for_line, multi_dim,
    multi_exponents, ziegler_exponents,
};
use arrangelab::families;
use arrangelab::field::Field;
use arrangelab::geom::{Arrangement, Line};
use arrangelab::poly::s_dim;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q() -> Field {
    Field::rational()
}

fn small_corpus() -> Vec<Arrangement> {
    vec![
        families::triangle(),
        families::braid(),
        families::near_pencil(5).unwrap(),
        families::grid(2, 2).unwrap(),
        families::generic(5, 11).unwrap(),
        families::random_supersolvable(3, 2, 4).unwrap(),
        families::random(6, 9).unwrap(),
        families::finite_plane(2).unwrap(),
        families::monomial(3, false).unwrap(),
    ]
}

#[test]
fn splitting_identity_holds_degreewise() {
    for a in small_corpus() {
        for h in a.lines() {
            for d in 0..=4usize {
                let total = dim_d_graded(&a, d);
                let dh = dim_dh_graded(&a, h, d).unwrap();
                assert_eq!(
                    total,
                    dh + s_dim(d as i64 - 1),
                    "splitting failed for {h} at degree {d}"
                );
            }
        }
    }
}

#[test]
fn mdr_does_not_depend_on_the_line() {
    for a in [
        families::braid(),
        families::grid(3, 2).unwrap(),
        families::generic(5, 3).unwrap(),
        families::random_supersolvable(4, 3, 8).unwrap(),
    ] {
        let cap = default_mdr_cap(&a);
        let values: Vec<usize> = a
            .lines()
            .iter()
            .map(|h| mdr_for_line(&a, h, cap).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{values:?}");
    }
}

#[test]
fn ziegler_restriction_map_is_degreewise_injective() {
    for a in small_corpus() {
        if a.len() < 3 {
            continue;
        }
        for h in a.lines() {
            let ma = restriction(&a, h).unwrap();
            let mut prev = dim_dh_graded(&a, h, 0).unwrap();
            for d in 1..=4usize {
                let cur = dim_dh_graded(&a, h, d).unwrap();
                assert!(
                    cur - prev <= multi_dim(&ma, d),
                    "image of the restriction map exceeds the target at degree {d}"
                );
                prev = cur;
            }
        }
    }
}

fn random_multi_pair(seed: u64) -> (MultiArrangement, MultiArrangement) {
    let f = q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<P1Point> = vec![P1Point::from_ints(f, 0, 1).unwrap()];
    let n = rng.random_range(2..5usize);
    while points.len() < n {
        let t = rng.random_range(-6i64..=6);
        let p = P1Point::from_ints(f, 1, t).unwrap();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let small_count = rng.random_range(1..=n);
    let small: Vec<(P1Point, usize)> = points[..small_count]
        .iter()
        .map(|p| (p.clone(), rng.random_range(1..=3usize)))
        .collect();
    let big: Vec<(P1Point, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let base = if i < small_count { small[i].1 } else { 1 };
            (p.clone(), base + rng.random_range(0..=2usize))
        })
        .collect();
    (
        MultiArrangement::new(f, small).unwrap(),
        MultiArrangement::new(f, big).unwrap(),
    )
}

/// A larger multiarrangement has a smaller derivation module: dimensions drop
/// degree-wise and the exponents dominate pairwise.
#[test]
fn multiarrangement_monotonicity() {
    for seed in 0..24u64 {
        let (small, big) = random_multi_pair(seed);
        let top = big.total_multiplicity();
        for d in 0..=top {
            assert!(
                multi_dim(&big, d) <= multi_dim(&small, d),
                "dimension grew at degree {d} (seed {seed})"
            );
        }
        let (d1, d2) = multi_exponents(&small).unwrap();
        let (e1, e2) = multi_exponents(&big).unwrap();
        assert!(d1 <= e1 && d2 <= e2, "exponents did not dominate (seed {seed})");
    }
}

/// Constant multiplicity 2 over characteristic zero balances the exponents.
#[test]
fn constant_two_exponents_are_balanced() {
    let f = q();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..8 {
        let n = rng.random_range(2..6usize);
        let mut points = vec![P1Point::from_ints(f, 0, 1).unwrap()];
        while points.len() < n {
            let p = P1Point::from_ints(f, 1, rng.random_range(-9i64..=9)).unwrap();
            if !points.contains(&p) {
                points.push(p);
            }
        }
        let ma =
            MultiArrangement::new(f, points.into_iter().map(|p| (p, 2)).collect()).unwrap();
        assert_eq!(multi_exponents(&ma).unwrap(), (n, n));
    }
}

/// Free verdicts are internally consistent: the characteristic polynomial
/// factors over the exponents and every line has the same restriction
/// exponents.
#[test]
fn free_verdicts_share_restriction_exponents() {
    for a in [
        families::braid(),
        families::grid(3, 3).unwrap(),
        families::near_pencil(6).unwrap(),
        families::monomial(3, false).unwrap(),
        families::monomial(2, true).unwrap(),
    ] {
        let v = is_free(&a).unwrap();
        let Some((_, d2, d3)) = v.exponents() else {
            panic!("expected a free arrangement");
        };
        let chi = char_poly0(&a).unwrap();
        assert_eq!(chi.integer_roots(), Some(((d2 as i64).min(d3 as i64), (d3 as i64).max(d2 as i64))));
        for h in a.lines() {
            assert_eq!(ziegler_exponents(&a, h).unwrap(), (d2, d3));
        }
    }
}

/// On a free arrangement with exponents (1, d2, d3): every member restriction
/// has size <= d2 + 1 or exactly d3 + 1; an added line meets the arrangement
/// in exactly 1 + d2 points or at least d3 + 1 (sizes strictly between are
/// impossible; braid plus the line x+y attains d3 + 1 = 4).
#[test]
fn restriction_size_dichotomy_on_free_arrangements() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for a in [
        families::braid(),
        families::grid(3, 2).unwrap(),
        families::near_pencil(6).unwrap(),
        families::monomial(3, false).unwrap(),
    ] {
        let v = is_free(&a).unwrap();
        let (_, d2, d3) = v.exponents().expect("free test family");
        for h in a.lines() {
            let size = restriction_size(&a, h).unwrap();
            assert!(size <= d2 + 1 || size == d3 + 1, "member dichotomy: {size}");
        }
        for _ in 0..6 {
            let l = loop {
                let c = [
                    rng.random_range(-9i64..=9),
                    rng.random_range(-9i64..=9),
                    rng.random_range(-9i64..=9),
                ];
                if let Ok(line) = Line::from_ints(a.field(), c[0], c[1], c[2]) {
                    if a.line_index(&line).is_none() {
                        break line;
                    }
                }
            };
            let b = a.with_line(l.clone()).unwrap();
            let size = restriction_size(&b, &l).unwrap();
            assert!(
                size == 1 + d2 || size >= d3 + 1,
                "added-line dichotomy: {size} vs exponents ({d2}, {d3})"
            );
        }
    }
}

/// On a free arrangement with exponents (1, d2, d3) the whole graded module
/// is pinned: dim D(A)_d = dim S_{d-1} + dim S_{d-d2} + dim S_{d-d3}. This
/// ties the 3-variable dimension computations to the 2-variable restriction
/// exponents through an entirely different route.
#[test]
fn free_hilbert_function_matches_exponents() {
    for a in [
        families::braid(),
        families::grid(3, 3).unwrap(),
        families::near_pencil(6).unwrap(),
        families::monomial(3, false).unwrap(),
    ] {
        let v = is_free(&a).unwrap();
        let (_, d2, d3) = v.exponents().expect("free test family");
        for d in 0..=6usize {
            let want = s_dim(d as i64 - 1)
                + s_dim(d as i64 - d2 as i64)
                + s_dim(d as i64 - d3 as i64);
            assert_eq!(dim_d_graded(&a, d), want, "degree {d}");
        }
    }
}

/// Free verdicts are constructively certifiable: a Saito basis can be read
/// off the derivation nullspaces at the exponent degrees.
#[test]
fn free_verdicts_certify_constructively() {
    for a in [
        families::braid(),
        families::grid(2, 2).unwrap(),
        families::near_pencil(5).unwrap(),
        families::monomial(3, false).unwrap(),
    ] {
        let v = is_free(&a).unwrap();
        let (_, d2, d3) = v.exponents().expect("free test family");
        let pair = arrangelab::derivation::certify_free_basis(&a, d2, d3).unwrap();
        assert!(pair.is_some(), "no certified basis found");
    }
}

/// The two sides of the double-count: every double point is counted by
/// exactly its two lines.
#[test]
fn line_double_counts_sum_to_twice_n2() {
    for a in small_corpus() {
        let total: usize = a
            .lines()
            .iter()
            .map(|h| n2_on_line(&a, h).unwrap())
            .sum();
        assert_eq!(total, 2 * n2(&a).unwrap());
    }
}

/// Characteristic polynomial coefficients against an independent recount of
/// the lattice.
#[test]
fn char_poly_coefficients_match_lattice_recount() {
    for a in small_corpus() {
        if !a.is_essential() {
            continue;
        }
        let chi = char_poly0(&a).unwrap();
        let hist = mu_histogram(&a).unwrap();
        let sum_mu: usize = hist.iter().map(|(mu, count)| mu * count).sum();
        let n = a.len() as i64;
        assert_eq!(chi.c1, -(n - 1));
        assert_eq!(chi.c0, sum_mu as i64 - n + 1);
    }
}

/// For a supersolvable arrangement with maximal modular point p: every line
/// outside the pencil meets exactly m = |A_p| lattice points, and the double
/// points on distinct outside lines are distinct, giving
/// n2(A) >= sum of the per-line counts.
#[test]
fn supersolvable_restriction_size_and_distinctness() {
    for (m, k, seed) in [(3, 2, 1u64), (4, 3, 2), (5, 2, 3), (2, 4, 4), (6, 5, 5)] {
        let a = families::random_supersolvable(m, k, seed).unwrap();
        let w = is_supersolvable(&a).unwrap().expect("built supersolvable");
        let lat = a.lattice().unwrap();
        let through = lat.get(&w.point).unwrap().to_vec();
        let mut outside_sum = 0;
        for (idx, h) in a.lines().iter().enumerate() {
            if through.contains(&idx) {
                continue;
            }
            assert_eq!(
                restriction_size(&a, h).unwrap(),
                w.m,
                "outside lines meet every pencil line in distinct points"
            );
            outside_sum += n2_on_line(&a, h).unwrap();
        }
        assert!(n2(&a).unwrap() >= outside_sum);
    }
}

/// Restriction exponents do not depend on the coordinates chosen on the
/// line: an invertible change of the P^1 coordinates fixes them.
#[test]
fn multi_exponents_invariant_under_basis_change() {
    let f = q();
    let b = families::braid();
    for h in b.lines() {
        let ma = restriction(&b, h).unwrap();
        let transformed: Vec<(P1Point, usize)> = ma
            .points()
            .iter()
            .zip(ma.multiplicities())
            .map(|(p, &m)| {
                let [s, t] = p.coords();
                // (s, t) -> (s + 2t, s + 3t), determinant 1
                let s2 = f.add(s, &f.mul(&f.from_int(2), t));
                let t2 = f.add(s, &f.mul(&f.from_int(3), t));
                (P1Point::new(f, [s2, t2]).unwrap(), m)
            })
            .collect();
        let ma2 = MultiArrangement::new(f, transformed).unwrap();
        assert_eq!(
            multi_exponents(&ma).unwrap(),
            multi_exponents(&ma2).unwrap()
        );
    }
}
