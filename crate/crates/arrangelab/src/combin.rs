//! Lattice-level combinatorics of a line arrangement: the Moebius counts
//! mu(p), double-point counts n2, the degree-2 characteristic polynomial,
//! modular points and supersolvability, restriction multiarrangements, the
//! one-step divisional freeness test, and integer roots of the
//! characteristic polynomial.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::geom::{Arrangement, Line, ProjPoint};
use crate::linalg::Matrix;

/// A point of the projective line over the base field, normalized like
/// [`ProjPoint`]: first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P1Point {
    field: Field,
    coords: [Scalar; 2],
}

impl P1Point {
    pub fn new(field: Field, coords: [Scalar; 2]) -> Result<Self> {
        for s in &coords {
            if !field.contains(s) {
                return Err(Error::FieldMismatch);
            }
        }
        let Some(lead) = coords.iter().position(|s| !s.is_zero()) else {
            return Err(Error::ZeroTriple);
        };
        let inv = field.inv(&coords[lead]).expect("nonzero");
        let [a, b] = coords;
        Ok(P1Point {
            field,
            coords: [field.mul(&inv, &a), field.mul(&inv, &b)],
        })
    }

    pub fn from_ints(field: Field, s: i64, t: i64) -> Result<Self> {
        P1Point::new(field, [field.from_int(s), field.from_int(t)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> &[Scalar; 2] {
        &self.coords
    }
}

impl std::fmt::Display for P1Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.coords[0], self.coords[1])
    }
}

/// Lines through the origin of K^2 with positive integer multiplicities.
/// Each line is recorded by the P^1 point it spans; its defining linear form
/// for derivation computations is `t*x - s*y` for the point `[s:t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiArrangement {
    field: Field,
    points: Vec<P1Point>,
    multiplicities: Vec<usize>,
    /// Index of the restricted-to line when this came from a restriction.
    from_line: Option<usize>,
}

impl MultiArrangement {
    pub fn new(field: Field, entries: Vec<(P1Point, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyMultiArrangement);
        }
        let mut sorted = entries;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateMultiPoint);
            }
        }
        if sorted.iter().any(|(_, m)| *m == 0) {
            return Err(Error::ZeroMultiplicity);
        }
        if sorted.iter().any(|(p, _)| p.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let (points, multiplicities) = sorted.into_iter().unzip();
        Ok(MultiArrangement {
            field,
            points,
            multiplicities,
            from_line: None,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn points(&self) -> &[P1Point] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total multiplicity |m|.
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn from_line(&self) -> Option<usize> {
        self.from_line
    }

    /// Multiplicities as a descending multiset.
    pub fn multiplicity_multiset(&self) -> Vec<usize> {
        let mut m = self.multiplicities.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }
}

/// The characteristic polynomial `t^2 + c1*t + c0` of an essential line
/// arrangement, with `c1 = -(n-1)` and `c0 = sum(mu) - n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    pub c1: i64,
    pub c0: i64,
}

impl CharPoly {
    pub fn eval(&self, t: i64) -> i64 {
        t * t + self.c1 * t + self.c0
    }

    /// Integer roots `(d2, d3)` with `d2 <= d3`, when the polynomial factors
    /// over the integers.
    pub fn integer_roots(&self) -> Option<(i64, i64)> {
        let disc = self.c1 * self.c1 - 4 * self.c0;
        if disc < 0 {
            return None;
        }
        let sqrt = disc.isqrt();
        if sqrt * sqrt != disc {
            return None;
        }
        // c1 and disc have the same parity, so both roots are integers.
        let r1 = (-self.c1 - sqrt) / 2;
        let r2 = (-self.c1 + sqrt) / 2;
        Some((r1.min(r2), r1.max(r2)))
    }
}

impl std::fmt::Display for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t^2 {:+}t {:+}", self.c1, self.c0)
    }
}

/// `mu(p)` = (number of lines through p) - 1 for a lattice point.
pub fn mu(a: &Arrangement, p: &ProjPoint) -> Result<usize> {
    let lat = a.lattice()?;
    let lines = lat.get(p).ok_or(Error::PointNotInLattice)?;
    Ok(lines.len() - 1)
}

/// Number of double points of the whole arrangement.
pub fn n2(a: &Arrangement) -> Result<usize> {
    Ok(a.lattice()?
        .points()
        .iter()
        .filter(|(_, lines)| lines.len() == 2)
        .count())
}

/// Number of double points lying on a member line.
pub fn n2_on_line(a: &Arrangement, h: &Line) -> Result<usize> {
    let idx = a.line_index(h).ok_or(Error::LineNotInArrangement)?;
    Ok(a.lattice()?
        .points()
        .iter()
        .filter(|(_, lines)| lines.len() == 2 && lines.contains(&idx))
        .count())
}

/// Number of lattice points on a member line (the size of the restriction).
pub fn restriction_size(a: &Arrangement, h: &Line) -> Result<usize> {
    let idx = a.line_index(h).ok_or(Error::LineNotInArrangement)?;
    Ok(a.lattice()?
        .points()
        .iter()
        .filter(|(_, lines)| lines.contains(&idx))
        .count())
}

/// Histogram mu -> number of lattice points with that Moebius value.
pub fn mu_histogram(a: &Arrangement) -> Result<BTreeMap<usize, usize>> {
    let mut hist = BTreeMap::new();
    for (_, lines) in a.lattice()?.points() {
        *hist.entry(lines.len() - 1).or_insert(0) += 1;
    }
    Ok(hist)
}

/// The characteristic polynomial; requires an essential arrangement.
pub fn char_poly0(a: &Arrangement) -> Result<CharPoly> {
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    let sum_mu: usize = a
        .lattice()?
        .points()
        .iter()
        .map(|(_, lines)| lines.len() - 1)
        .sum();
    let n = a.len() as i64;
    Ok(CharPoly {
        c1: -(n - 1),
        c0: sum_mu as i64 - n + 1,
    })
}

/// All modular points with their pencil sizes `m = mu(p) + 1`.
///
/// A lattice point p is modular iff the line joining p to any other lattice
/// point belongs to the arrangement. Each hit is re-verified against the
/// literal definition (every pair of member lines avoiding p meets on a line
/// through p); the two criteria are equivalent for line arrangements and any
/// disagreement aborts.
pub fn modular_points(a: &Arrangement) -> Result<Vec<(ProjPoint, usize)>> {
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    if a.len() < 3 {
        return Err(Error::TooFewLines {
            needed: 3,
            got: a.len(),
        });
    }
    let lat = a.lattice()?;
    let mut found = Vec::new();
    for (p, lines_through) in lat.points() {
        let join_criterion = lat.points().iter().all(|(q, _)| {
            if q == p {
                return true;
            }
            let join = p.join(q).expect("distinct points");
            a.line_index(&join).is_some()
        });
        let literal = literal_modular(a, lines_through)?;
        if join_criterion != literal {
            return Err(Error::Internal(format!(
                "modular criteria disagree at {p}: join={join_criterion} literal={literal}"
            )));
        }
        if join_criterion {
            found.push((p.clone(), lines_through.len()));
        }
    }
    Ok(found)
}

fn literal_modular(a: &Arrangement, lines_through: &[usize]) -> Result<bool> {
    let outside: Vec<usize> = (0..a.len())
        .filter(|i| !lines_through.contains(i))
        .collect();
    for (k, &i) in outside.iter().enumerate() {
        for &j in &outside[k + 1..] {
            let q = a.lines()[i].meet(&a.lines()[j]).expect("distinct");
            let covered = lines_through
                .iter()
                .any(|&t| q.incident(&a.lines()[t]).expect("same field"));
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The canonical supersolvability witness: the modular point maximizing the
/// pencil size m, ties broken by canonical point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularWitness {
    pub point: ProjPoint,
    /// Number of member lines through the point.
    pub m: usize,
    /// `|A| - m`.
    pub k: usize,
}

pub fn is_supersolvable(a: &Arrangement) -> Result<Option<ModularWitness>> {
    let mut best: Option<(ProjPoint, usize)> = None;
    for (p, m) in modular_points(a)? {
        best = match best {
            None => Some((p, m)),
            Some((bp, bm)) => {
                if m > bm || (m == bm && p < bp) {
                    Some((p, m))
                } else {
                    Some((bp, bm))
                }
            }
        };
    }
    Ok(best.map(|(point, m)| ModularWitness {
        point,
        m,
        k: a.len() - m,
    }))
}

/// The Ziegler restriction of the arrangement onto a member line: the lattice
/// points on `h`, each weighted by the number of other member lines cutting
/// it out, expressed in the canonical kernel basis of `h`'s form.
pub fn restriction(a: &Arrangement, h: &Line) -> Result<MultiArrangement> {
    let h_idx = a.line_index(h).ok_or(Error::LineNotInArrangement)?;
    if a.len() < 2 {
        return Err(Error::TooFewLines {
            needed: 2,
            got: a.len(),
        });
    }
    let field = a.field();
    let (u, v) = h.kernel_basis();
    let mut counts: BTreeMap<P1Point, usize> = BTreeMap::new();
    for (i, line) in a.lines().iter().enumerate() {
        if i == h_idx {
            continue;
        }
        let x = h.meet(line).expect("distinct member lines");
        // Solve s*u + t*v = lambda * x: the kernel of the 3x3 matrix with
        // columns (u, v, x) is spanned by (s, t, -lambda).
        let cols = [&u, &v, x.coords()];
        let mut entries = Vec::with_capacity(9);
        for r in 0..3 {
            for col in cols {
                entries.push(col[r].clone());
            }
        }
        let m = Matrix::new(field, 3, 3, entries)?;
        let basis = m.nullspace();
        debug_assert_eq!(basis.len(), 1, "u, v independent and x in their span");
        let w = &basis[0];
        debug_assert!(!w[2].is_zero());
        let p = P1Point::new(field, [w[0].clone(), w[1].clone()])?;
        *counts.entry(p).or_insert(0) += 1;
    }
    let mut ma = MultiArrangement::new(field, counts.into_iter().collect())?;
    ma.from_line = Some(h_idx);
    debug_assert_eq!(ma.total_multiplicity(), a.len() - 1);
    Ok(ma)
}

/// The one-step division test: is there a member line H with
/// `chi_0(|A^H| - 1) = 0`? Returns the first witness in input order.
///
/// This is the single-restriction vanishing criterion specialized to rank 3;
/// the recursive closure over repeated restrictions is intentionally not
/// implemented.
pub fn is_divisionally_free(a: &Arrangement) -> Result<(bool, Option<usize>)> {
    let chi = char_poly0(a)?;
    for (i, h) in a.lines().iter().enumerate() {
        let size = restriction_size(a, h)? as i64;
        if chi.eval(size - 1) == 0 {
            return Ok((true, Some(i)));
        }
    }
    Ok((false, None))
}

/// Integer roots of the characteristic polynomial, `d2 <= d3`. A necessary
/// condition for freeness only.
pub fn terao_exponents(a: &Arrangement) -> Result<Option<(i64, i64)>> {
    Ok(char_poly0(a)?.integer_roots())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rational()
    }

    fn triangle() -> Arrangement {
        Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    fn braid() -> Arrangement {
        Arrangement::from_int_rows(
            q(),
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, -1, 0],
                [1, 0, -1],
                [0, 1, -1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mu_examples() {
        let t = triangle();
        for (p, _) in t.lattice().unwrap().points() {
            assert_eq!(mu(&t, p).unwrap(), 1);
        }
        // pencil of 5 lines through (0:0:1)
        let pencil = Arrangement::from_int_rows(
            q(),
            &[[1, 0, 0], [0, 1, 0], [1, -1, 0], [1, 1, 0], [1, -2, 0]],
        )
        .unwrap();
        let center = ProjPoint::from_ints(q(), 0, 0, 1).unwrap();
        assert_eq!(mu(&pencil, &center).unwrap(), 4);
        let b = braid();
        let p = ProjPoint::from_ints(q(), 1, 1, 1).unwrap();
        assert_eq!(mu(&b, &p).unwrap(), 2);
        let off = ProjPoint::from_ints(q(), 5, 7, 1).unwrap();
        assert!(matches!(mu(&b, &off), Err(Error::PointNotInLattice)));
    }

    #[test]
    fn n2_examples() {
        assert_eq!(n2(&triangle()).unwrap(), 3);
        assert_eq!(n2(&braid()).unwrap(), 3);
        let x = Line::from_ints(q(), 1, 0, 0).unwrap();
        assert_eq!(n2_on_line(&braid(), &x).unwrap(), 1);
        let absent = Line::from_ints(q(), 1, 1, 1).unwrap();
        assert!(matches!(
            n2_on_line(&braid(), &absent),
            Err(Error::LineNotInArrangement)
        ));
    }

    #[test]
    fn char_poly_examples() {
        let chi = char_poly0(&triangle()).unwrap();
        assert_eq!((chi.c1, chi.c0), (-2, 1));
        // braid: sum(mu) = 4*2 + 3*1 = 11
        let chi = char_poly0(&braid()).unwrap();
        assert_eq!((chi.c1, chi.c0), (-5, 6));
        assert_eq!(chi.integer_roots(), Some((2, 3)));
        let pencil =
            Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0], [1, -1, 0]]).unwrap();
        assert!(matches!(char_poly0(&pencil), Err(Error::NotEssential)));
    }

    #[test]
    fn terao_examples() {
        assert_eq!(terao_exponents(&braid()).unwrap(), Some((2, 3)));
        // generic 4 lines: chi = t^2 - 3t + 3, discriminant < 0
        let generic4 = Arrangement::from_int_rows(
            q(),
            &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, 3]],
        )
        .unwrap();
        assert_eq!(terao_exponents(&generic4).unwrap(), None);
    }

    #[test]
    fn modular_points_examples() {
        // near-pencil on 4 lines: center is modular with m = 3
        let np = families::near_pencil(4).unwrap();
        let pts = modular_points(&np).unwrap();
        let best = pts.iter().map(|(_, m)| *m).max().unwrap();
        assert_eq!(best, 3);
        // braid: all four triple points are modular
        let pts = modular_points(&braid()).unwrap();
        let triples: Vec<_> = pts.iter().filter(|(_, m)| *m == 3).collect();
        assert_eq!(triples.len(), 4);
    }

    #[test]
    fn supersolvable_examples() {
        // the 5-line grid-shaped arrangement {z, x, x-z, y, y-z}
        let g = Arrangement::from_int_rows(
            q(),
            &[[0, 0, 1], [1, 0, 0], [1, 0, -1], [0, 1, 0], [0, 1, -1]],
        )
        .unwrap();
        let w = is_supersolvable(&g).unwrap().unwrap();
        assert_eq!(w.point, ProjPoint::from_ints(q(), 0, 1, 0).unwrap());
        assert_eq!((w.m, w.k), (3, 2));
        let t = is_supersolvable(&triangle()).unwrap().unwrap();
        assert_eq!((t.m, t.k), (2, 1));
    }

    #[test]
    fn restriction_examples() {
        let t = triangle();
        let x = Line::from_ints(q(), 1, 0, 0).unwrap();
        let r = restriction(&t, &x).unwrap();
        assert_eq!(r.multiplicity_multiset(), vec![1, 1]);
        assert_eq!(r.total_multiplicity(), 2);
        assert_eq!(r.from_line(), Some(0));

        let b = braid();
        let r = restriction(&b, &x).unwrap();
        assert_eq!(r.multiplicity_multiset(), vec![2, 2, 1]);
        assert_eq!(r.total_multiplicity(), 5);

        let absent = Line::from_ints(q(), 1, 1, 1).unwrap();
        assert!(matches!(
            restriction(&b, &absent),
            Err(Error::LineNotInArrangement)
        ));
    }

    #[test]
    fn divisional_freeness_examples() {
        // triangle: every restriction has 2 points; chi(1) = 1 - 2 + 1 = 0
        let (free, witness) = is_divisionally_free(&triangle()).unwrap();
        assert!(free);
        assert_eq!(witness, Some(0));
        let (free, _) = is_divisionally_free(&braid()).unwrap();
        assert!(free);
    }

    #[test]
    fn double_counting_identity() {
        for a in [triangle(), braid(), families::near_pencil(6).unwrap()] {
            let total: usize = a
                .lines()
                .iter()
                .map(|h| n2_on_line(&a, h).unwrap())
                .sum();
            assert_eq!(total, 2 * n2(&a).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// The modular point set does not depend on the input line order.
        #[test]
        fn modular_points_permutation_invariant(seed in 0u64..200, rot in 1usize..5) {
            let a = families::random_supersolvable(3, 2, seed).unwrap();
            let mut lines = a.lines().to_vec();
            let shift = rot % lines.len();
            lines.rotate_left(shift);
            let b = Arrangement::new(a.field(), lines).unwrap();
            let mut pa = modular_points(&a).unwrap();
            let mut pb = modular_points(&b).unwrap();
            pa.sort();
            pb.sort();
            prop_assert_eq!(pa, pb);
        }
    }
}
