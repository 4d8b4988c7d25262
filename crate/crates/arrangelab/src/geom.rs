//! Lines and points of the projective plane over an exact field, and the
//! rank-2 intersection lattice of a line arrangement.
//!
//! Lines and points are stored as projective triples normalized so the first
//! nonzero coordinate is 1; equality of normalized representatives is
//! projective equality, which keeps lattice deduplication a plain map lookup.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;

/// A projective line `a*x + b*y + c*z = 0`, canonically normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    field: Field,
    coeffs: [Scalar; 3],
}

/// A point of the projective plane, canonically normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    field: Field,
    coords: [Scalar; 3],
}

fn normalize_triple(field: Field, mut t: [Scalar; 3]) -> Result<[Scalar; 3]> {
    for s in &t {
        if !field.contains(s) {
            return Err(Error::FieldMismatch);
        }
    }
    let Some(lead) = t.iter().position(|s| !s.is_zero()) else {
        return Err(Error::ZeroTriple);
    };
    let inv = field.inv(&t[lead]).expect("leading entry is nonzero");
    for s in &mut t {
        *s = field.mul(&inv, s);
    }
    Ok(t)
}

fn cross(field: Field, a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    let det2 = |i: usize, j: usize| {
        field.sub(
            &field.mul(&a[i], &b[j]),
            &field.mul(&a[j], &b[i]),
        )
    };
    [det2(1, 2), field.neg(&det2(0, 2)), det2(0, 1)]
}

impl Line {
    pub fn new(field: Field, coeffs: [Scalar; 3]) -> Result<Self> {
        Ok(Line {
            field,
            coeffs: normalize_triple(field, coeffs)?,
        })
    }

    pub fn from_ints(field: Field, a: i64, b: i64, c: i64) -> Result<Self> {
        Line::new(field, [field.from_int(a), field.from_int(b), field.from_int(c)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.coeffs
    }

    /// The intersection point of two distinct lines.
    pub fn meet(&self, other: &Line) -> Result<ProjPoint> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self == other {
            return Err(Error::IdenticalLines);
        }
        let c = cross(self.field, &self.coeffs, &other.coeffs);
        ProjPoint::new(self.field, c)
    }

    /// Canonical basis of the plane in K^3 cut out by the line's form; the
    /// parametrization `s*u + t*v` identifies the line with P^1.
    pub fn kernel_basis(&self) -> ([Scalar; 3], [Scalar; 3]) {
        let m = Matrix::new(self.field, 1, 3, self.coeffs.to_vec()).expect("well formed");
        let basis = m.nullspace();
        debug_assert_eq!(basis.len(), 2);
        let take = |v: &[Scalar]| [v[0].clone(), v[1].clone(), v[2].clone()];
        (take(&basis[0]), take(&basis[1]))
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}]",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

impl ProjPoint {
    pub fn new(field: Field, coords: [Scalar; 3]) -> Result<Self> {
        Ok(ProjPoint {
            field,
            coords: normalize_triple(field, coords)?,
        })
    }

    pub fn from_ints(field: Field, x: i64, y: i64, z: i64) -> Result<Self> {
        ProjPoint::new(field, [field.from_int(x), field.from_int(y), field.from_int(z)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    /// True iff the point lies on the line (exact dot product test).
    pub fn incident(&self, line: &Line) -> Result<bool> {
        if self.field != line.field {
            return Err(Error::FieldMismatch);
        }
        let f = self.field;
        let mut acc = f.zero();
        for (c, x) in line.coeffs.iter().zip(&self.coords) {
            acc = f.add(&acc, &f.mul(c, x));
        }
        Ok(acc.is_zero())
    }

    /// The line through two distinct points.
    pub fn join(&self, other: &ProjPoint) -> Result<Line> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self == other {
            return Err(Error::IdenticalLines);
        }
        Line::new(self.field, cross(self.field, &self.coords, &other.coords))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

/// The set of intersection points of at least two lines, as a sorted list of
/// `(point, incident line indices)` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    points: Vec<(ProjPoint, Vec<usize>)>,
}

impl IntersectionLattice {
    pub fn points(&self) -> &[(ProjPoint, Vec<usize>)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, p: &ProjPoint) -> Option<&[usize]> {
        self.points
            .binary_search_by(|(q, _)| q.cmp(p))
            .ok()
            .map(|i| self.points[i].1.as_slice())
    }
}

/// An ordered set of pairwise-distinct lines over one field.
#[derive(Debug)]
pub struct Arrangement {
    field: Field,
    lines: Vec<Line>,
    lattice: OnceLock<IntersectionLattice>,
}

impl Clone for Arrangement {
    fn clone(&self) -> Self {
        Arrangement {
            field: self.field,
            lines: self.lines.clone(),
            lattice: OnceLock::new(),
        }
    }
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.lines == other.lines
    }
}

impl Eq for Arrangement {}

impl Arrangement {
    pub fn new(field: Field, lines: Vec<Line>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, line) in lines.iter().enumerate() {
            if line.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !seen.insert(line.clone()) {
                return Err(Error::DuplicateLine(i));
            }
        }
        Ok(Arrangement {
            field,
            lines,
            lattice: OnceLock::new(),
        })
    }

    pub fn from_int_rows(field: Field, rows: &[[i64; 3]]) -> Result<Self> {
        let lines = rows
            .iter()
            .map(|&[a, b, c]| Line::from_ints(field, a, b, c))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(field, lines)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line_index(&self, line: &Line) -> Option<usize> {
        self.lines.iter().position(|l| l == line)
    }

    /// The rank-2 intersection lattice, computed once and cached.
    pub fn lattice(&self) -> Result<&IntersectionLattice> {
        if self.lines.len() < 2 {
            return Err(Error::TooFewLines {
                needed: 2,
                got: self.lines.len(),
            });
        }
        Ok(self.lattice.get_or_init(|| {
            let mut map: BTreeMap<ProjPoint, Vec<usize>> = BTreeMap::new();
            for i in 0..self.lines.len() {
                for j in i + 1..self.lines.len() {
                    let p = self.lines[i]
                        .meet(&self.lines[j])
                        .expect("arrangement lines are distinct");
                    let entry = map.entry(p).or_default();
                    for idx in [i, j] {
                        if !entry.contains(&idx) {
                            entry.push(idx);
                        }
                    }
                }
            }
            let mut points: Vec<(ProjPoint, Vec<usize>)> = map.into_iter().collect();
            for (_, lines) in &mut points {
                lines.sort_unstable();
            }
            IntersectionLattice { points }
        }))
    }

    /// True iff the defining forms span rank 3.
    pub fn is_essential(&self) -> bool {
        if self.lines.len() < 3 {
            return false;
        }
        let rows: Vec<Vec<Scalar>> = self.lines.iter().map(|l| l.coeffs().to_vec()).collect();
        Matrix::from_rows(self.field, rows)
            .expect("rows are uniform")
            .rank()
            == 3
    }

    /// True iff all lines pass through a single common point.
    pub fn is_pencil(&self) -> Result<bool> {
        Ok(self.lattice()?.len() == 1)
    }

    /// A copy without the given member line (input order preserved).
    pub fn without_line(&self, line: &Line) -> Result<Arrangement> {
        let Some(idx) = self.line_index(line) else {
            return Err(Error::LineNotInArrangement);
        };
        let mut lines = self.lines.clone();
        lines.remove(idx);
        Arrangement::new(self.field, lines)
    }

    /// A copy with the given new line appended.
    pub fn with_line(&self, line: Line) -> Result<Arrangement> {
        if line.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if self.line_index(&line).is_some() {
            return Err(Error::LineAlreadyPresent);
        }
        let mut lines = self.lines.clone();
        lines.push(line);
        Arrangement::new(self.field, lines)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rational()
    }

    pub(crate) fn triangle() -> Arrangement {
        Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    pub(crate) fn braid() -> Arrangement {
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
    fn line_normalization() {
        let l = Line::from_ints(q(), 0, 2, 4).unwrap();
        assert_eq!(l.coeffs()[0], q().from_int(0));
        assert_eq!(l.coeffs()[1], q().from_int(1));
        assert_eq!(l.coeffs()[2], q().from_int(2));
        let l2 = Line::from_ints(q(), -3, 6, 0).unwrap();
        assert_eq!(l2, Line::from_ints(q(), 1, -2, 0).unwrap());
        assert!(matches!(
            Line::from_ints(q(), 0, 0, 0),
            Err(Error::ZeroTriple)
        ));
    }

    #[test]
    fn normalization_is_idempotent() {
        let l = Line::from_ints(q(), 0, 2, 4).unwrap();
        let l2 = Line::new(q(), l.coeffs().clone()).unwrap();
        assert_eq!(l, l2);
        let p = ProjPoint::from_ints(q(), 3, 6, 9).unwrap();
        let p2 = ProjPoint::new(q(), p.coords().clone()).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn meet_examples() {
        let x = Line::from_ints(q(), 1, 0, 0).unwrap();
        let y = Line::from_ints(q(), 0, 1, 0).unwrap();
        assert_eq!(x.meet(&y).unwrap(), ProjPoint::from_ints(q(), 0, 0, 1).unwrap());
        let xz = Line::from_ints(q(), 1, 0, -1).unwrap();
        let yz = Line::from_ints(q(), 0, 1, -1).unwrap();
        assert_eq!(
            xz.meet(&yz).unwrap(),
            ProjPoint::from_ints(q(), 1, 1, 1).unwrap()
        );
        assert!(matches!(x.meet(&x), Err(Error::IdenticalLines)));
        assert_eq!(x.meet(&y).unwrap(), y.meet(&x).unwrap());
    }

    #[test]
    fn incidence_examples() {
        let x = Line::from_ints(q(), 1, 0, 0).unwrap();
        let xy = Line::from_ints(q(), 1, -1, 0).unwrap();
        assert!(ProjPoint::from_ints(q(), 0, 0, 1)
            .unwrap()
            .incident(&x)
            .unwrap());
        assert!(ProjPoint::from_ints(q(), 1, 1, 1)
            .unwrap()
            .incident(&xy)
            .unwrap());
        assert!(!ProjPoint::from_ints(q(), 1, 0, 0)
            .unwrap()
            .incident(&xy)
            .unwrap());
        let f2 = Field::prime(2).unwrap();
        let p2 = ProjPoint::from_ints(f2, 1, 1, 0).unwrap();
        assert!(matches!(p2.incident(&x), Err(Error::FieldMismatch)));
    }

    #[test]
    fn duplicate_lines_rejected() {
        let err = Arrangement::from_int_rows(q(), &[[1, 0, 0], [2, 0, 0]]);
        assert!(matches!(err, Err(Error::DuplicateLine(1))));
    }

    #[test]
    fn lattice_triangle() {
        let a = triangle();
        let lat = a.lattice().unwrap();
        assert_eq!(lat.len(), 3);
        for (_, lines) in lat.points() {
            assert_eq!(lines.len(), 2);
        }
    }

    #[test]
    fn lattice_braid_against_brute_force() {
        let a = braid();
        let lat = a.lattice().unwrap();
        // Independent oracle: count incidences directly with dot products,
        // deduplicating points pairwise by proportionality of raw cross
        // products rather than by canonical normalization.
        let mut raw_points: Vec<ProjPoint> = Vec::new();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let p = a.lines()[i].meet(&a.lines()[j]).unwrap();
                if !raw_points.contains(&p) {
                    raw_points.push(p);
                }
            }
        }
        assert_eq!(lat.len(), raw_points.len());
        let mut triple = 0;
        let mut double = 0;
        for p in &raw_points {
            let on: Vec<usize> = (0..a.len())
                .filter(|&i| p.incident(&a.lines()[i]).unwrap())
                .collect();
            assert_eq!(lat.get(p).unwrap(), on.as_slice());
            match on.len() {
                2 => double += 1,
                3 => triple += 1,
                n => panic!("unexpected multiplicity {n}"),
            }
        }
        assert_eq!((triple, double), (4, 3));
    }

    #[test]
    fn pencil_detection() {
        let pencil =
            Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0], [1, -1, 0]]).unwrap();
        assert!(pencil.is_pencil().unwrap());
        assert!(!pencil.is_essential());
        assert!(!triangle().is_pencil().unwrap());
        assert!(!braid().is_pencil().unwrap());
        let two = Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0]]).unwrap();
        assert!(two.is_pencil().unwrap());
        let one = Arrangement::from_int_rows(q(), &[[1, 0, 0]]).unwrap();
        assert!(matches!(one.is_pencil(), Err(Error::TooFewLines { .. })));
    }

    #[test]
    fn essential_examples() {
        assert!(triangle().is_essential());
        assert!(!Arrangement::from_int_rows(q(), &[[1, 0, 0], [0, 1, 0]])
            .unwrap()
            .is_essential());
    }

    #[test]
    fn add_and_remove_lines() {
        let a = triangle();
        let l = Line::from_ints(q(), 1, 1, 1).unwrap();
        let b = a.with_line(l.clone()).unwrap();
        assert_eq!(b.len(), 4);
        assert!(matches!(
            b.with_line(Line::from_ints(q(), 2, 2, 2).unwrap()),
            Err(Error::LineAlreadyPresent)
        ));
        let c = b.without_line(&l).unwrap();
        assert_eq!(c, a);
        assert!(matches!(
            a.without_line(&l),
            Err(Error::LineNotInArrangement)
        ));
    }

    fn arb_arrangement() -> impl Strategy<Value = Arrangement> {
        (2usize..6, prop::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3), 24)).prop_filter_map(
            "needs >=2 distinct lines",
            |(n, coeffs)| {
                let f = q();
                let mut lines: Vec<Line> = Vec::new();
                for &(a, b, c) in &coeffs {
                    if lines.len() == n {
                        break;
                    }
                    if let Ok(l) = Line::from_ints(f, a, b, c) {
                        if !lines.contains(&l) {
                            lines.push(l);
                        }
                    }
                }
                if lines.len() < 2 {
                    return None;
                }
                Some(Arrangement::new(f, lines).unwrap())
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Every pair of lines is counted by exactly one lattice point:
        /// sum over points of C(mu+1, 2) = C(n, 2).
        #[test]
        fn pair_count_identity(a in arb_arrangement()) {
            let lat = a.lattice().unwrap();
            let pairs: usize = lat
                .points()
                .iter()
                .map(|(_, lines)| lines.len() * (lines.len() - 1) / 2)
                .sum();
            prop_assert_eq!(pairs, a.len() * (a.len() - 1) / 2);
        }

        /// meet(l_i, l_j) appears in the lattice with both indices listed.
        #[test]
        fn lattice_is_complete(a in arb_arrangement()) {
            let lat = a.lattice().unwrap();
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    let p = a.lines()[i].meet(&a.lines()[j]).unwrap();
                    let lines = lat.get(&p).expect("meet point present");
                    prop_assert!(lines.contains(&i) && lines.contains(&j));
                }
            }
        }
    }
}
