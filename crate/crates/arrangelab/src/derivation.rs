//! Graded pieces of logarithmic derivation modules by exact linear algebra.
//!
//! A derivation of degree d is a triple of homogeneous degree-d polynomials
//! (theta(x), theta(y), theta(z)). Membership in D(A) is the divisibility
//! theta(alpha_H) in S*alpha_H for every member line; it is imposed as linear
//! constraints by substituting the canonical parametrization of each line and
//! requiring the restricted binary form to vanish, so no polynomial division
//! is ever performed.

use serde::Serialize;

use crate::combin::{char_poly0, restriction, CharPoly, MultiArrangement};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::geom::{Arrangement, Line};
use crate::linalg::Matrix;
use crate::poly::{monomials, s_dim, BinForm, HomogPoly, SegmentSubstitution};

/// A homogeneous polynomial vector field, stored as the coefficient vectors
/// of theta(x), theta(y), theta(z) over the canonical degree-d monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    field: Field,
    degree: usize,
    comps: [Vec<Scalar>; 3],
}

impl Derivation {
    pub fn new(field: Field, degree: usize, comps: [Vec<Scalar>; 3]) -> Result<Self> {
        let want = s_dim(degree as i64);
        for comp in &comps {
            if comp.len() != want {
                return Err(Error::DerivationMismatch(format!(
                    "component has {} coefficients, degree {} needs {}",
                    comp.len(),
                    degree,
                    want
                )));
            }
            if comp.iter().any(|s| !field.contains(s)) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Derivation {
            field,
            degree,
            comps,
        })
    }

    /// The Euler derivation x d/dx + y d/dy + z d/dz.
    pub fn euler(field: Field) -> Self {
        let mut comps = [
            vec![field.zero(); 3],
            vec![field.zero(); 3],
            vec![field.zero(); 3],
        ];
        for i in 0..3 {
            comps[i][i] = field.one();
        }
        Derivation {
            field,
            degree: 1,
            comps,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Vec<Scalar>; 3] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(Scalar::is_zero))
    }

    fn component_poly(&self, i: usize) -> HomogPoly {
        HomogPoly::from_coeffs(self.field, self.degree, self.comps[i].clone())
    }

    /// theta(alpha) for a linear form alpha, as a homogeneous polynomial.
    fn applied_to(&self, coeffs: &[Scalar; 3]) -> HomogPoly {
        let f = self.field;
        let mut acc = HomogPoly::zero(f, self.degree);
        for i in 0..3 {
            if coeffs[i].is_zero() {
                continue;
            }
            acc = acc.add(&self.component_poly(i).scale(&coeffs[i]));
        }
        acc
    }
}

/// The constraint matrix of the degree-d part of D(A): one block of d+1 rows
/// per line, requiring theta(alpha_H) to vanish on H's parametrization.
fn d_system(a: &Arrangement, d: usize) -> Matrix {
    let f = a.field();
    let n_mono = s_dim(d as i64);
    let cols = 3 * n_mono;
    let basis = monomials(d);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(a.len() * (d + 1));
    for line in a.lines() {
        let (u, v) = line.kernel_basis();
        let subst = SegmentSubstitution::new(f, &u, &v, d);
        let restricted: Vec<BinForm> = basis.iter().map(|&e| subst.monomial(e)).collect();
        let gamma = line.coeffs();
        for k in 0..=d {
            let mut row = vec![f.zero(); cols];
            for comp in 0..3 {
                if gamma[comp].is_zero() {
                    continue;
                }
                for (j, bf) in restricted.iter().enumerate() {
                    let c = &bf.coeffs()[k];
                    if !c.is_zero() {
                        row[comp * n_mono + j] = f.mul(&gamma[comp], c);
                    }
                }
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(f, rows).expect("uniform rows")
}

/// Exact dimension of the degree-d part of D(A).
pub fn dim_d_graded(a: &Arrangement, d: usize) -> usize {
    let cols = 3 * s_dim(d as i64);
    cols - d_system(a, d).rank()
}

/// A basis of the degree-d part of D(A), from the canonical nullspace of the
/// constraint system.
pub fn derivation_basis(a: &Arrangement, d: usize) -> Vec<Derivation> {
    let f = a.field();
    let n_mono = s_dim(d as i64);
    d_system(a, d)
        .nullspace()
        .into_iter()
        .map(|v| {
            let comps = [
                v[..n_mono].to_vec(),
                v[n_mono..2 * n_mono].to_vec(),
                v[2 * n_mono..].to_vec(),
            ];
            Derivation::new(f, d, comps).expect("well formed by construction")
        })
        .collect()
}

/// Exact dimension of the degree-d part of D_H(A) = {theta in D(A) :
/// theta(alpha_H) = 0}.
///
/// The equation theta(alpha_H) = 0 is solved for the component at alpha_H's
/// leading coefficient, which removes one block of unknowns; the remaining
/// lines contribute their substitution constraints with adjusted multipliers.
pub fn dim_dh_graded(a: &Arrangement, h: &Line, d: usize) -> Result<usize> {
    let h_idx = a.line_index(h).ok_or(Error::LineNotInArrangement)?;
    let f = a.field();
    let n_mono = s_dim(d as i64);
    let basis = monomials(d);
    let gamma_h = h.coeffs();
    let pivot = gamma_h
        .iter()
        .position(|c| !c.is_zero())
        .expect("lines are nonzero");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let cols = 2 * n_mono;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (idx, line) in a.lines().iter().enumerate() {
        if idx == h_idx {
            continue;
        }
        let gamma = line.coeffs();
        // theta_pivot = -(1/gamma_h[pivot]) * sum of gamma_h[i] * theta_i
        let ratio = f.div(&gamma[pivot], &gamma_h[pivot]).expect("nonzero pivot");
        let delta: Vec<Scalar> = others
            .iter()
            .map(|&i| f.sub(&gamma[i], &f.mul(&ratio, &gamma_h[i])))
            .collect();
        let (u, v) = line.kernel_basis();
        let subst = SegmentSubstitution::new(f, &u, &v, d);
        let restricted: Vec<BinForm> = basis.iter().map(|&e| subst.monomial(e)).collect();
        for k in 0..=d {
            let mut row = vec![f.zero(); cols];
            for (block, mult) in delta.iter().enumerate() {
                if mult.is_zero() {
                    continue;
                }
                for (j, bf) in restricted.iter().enumerate() {
                    let c = &bf.coeffs()[k];
                    if !c.is_zero() {
                        row[block * n_mono + j] = f.mul(mult, c);
                    }
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(cols);
    }
    let m = Matrix::from_rows(f, rows).expect("uniform rows");
    Ok(cols - m.rank())
}

pub const MDR_ATTEMPT_LIMIT_ENV: &str = "ARRANGELAB_MAX_DEGREE";

/// Default cap for the minimal-degree scan: no rank-3 line arrangement has
/// mdr above |A| - 2 (generic arrangements attain it).
pub fn default_mdr_cap(a: &Arrangement) -> usize {
    a.len().saturating_sub(2).max(1)
}

/// The minimal degree of a nonzero element of D_H(A), which is independent
/// of the choice of H. Scans degrees 1..=cap and aborts loudly beyond.
pub fn mdr_with_cap(a: &Arrangement, cap: usize) -> Result<usize> {
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    if a.len() < 3 {
        return Err(Error::TooFewLines {
            needed: 3,
            got: a.len(),
        });
    }
    mdr_for_line(a, &a.lines()[0].clone(), cap)
}

pub fn mdr(a: &Arrangement) -> Result<usize> {
    mdr_with_cap(a, default_mdr_cap(a))
}

/// The minimal-degree scan pinned to one member line (used to verify that the
/// answer does not depend on the line).
pub fn mdr_for_line(a: &Arrangement, h: &Line, cap: usize) -> Result<usize> {
    for d in 1..=cap {
        if dim_dh_graded(a, h, d)? > 0 {
            return Ok(d);
        }
    }
    Err(Error::MdrScanExceeded { cap })
}

/// Exact dimension of the degree-d part of D(A, m) for a multiarrangement of
/// lines in K^2.
pub fn multi_dim(ma: &MultiArrangement, d: usize) -> usize {
    let f = ma.field();
    let cols = 2 * (d + 1);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (point, &mult) in ma.points().iter().zip(ma.multiplicities()) {
        let [s, t] = point.coords();
        // Express (x, y) in the basis (alpha, beta) with alpha = t*x - s*y
        // the point's defining form and beta a complementary coordinate.
        let (x_form, y_form) = if s.is_zero() {
            // point [0:1], alpha = x, beta = y
            (
                BinForm::linear(f, f.one(), f.zero()),
                BinForm::linear(f, f.zero(), f.one()),
            )
        } else {
            // point [1:t] (s normalized to 1), alpha = t*x - y, beta = x
            (
                BinForm::linear(f, f.zero(), f.one()),
                BinForm::linear(f, f.from_int(-1), t.clone()),
            )
        };
        let mut x_pows = vec![BinForm::constant(f, f.one())];
        let mut y_pows = vec![BinForm::constant(f, f.one())];
        for k in 1..=d {
            x_pows.push(x_pows[k - 1].mul(&x_form));
            y_pows.push(y_pows[k - 1].mul(&y_form));
        }
        // theta(alpha) = t*P - s*Q must be divisible by alpha^mult: the
        // coefficients of alpha-degree < mult vanish. Index i in the composed
        // form corresponds to alpha-degree d - i.
        let lo = (d + 1).saturating_sub(mult);
        for i in lo..=d {
            let mut row = vec![f.zero(); cols];
            for j in 0..=d {
                let composed = x_pows[d - j].mul(&y_pows[j]);
                let c = &composed.coeffs()[i];
                if c.is_zero() {
                    continue;
                }
                if !t.is_zero() {
                    row[j] = f.mul(t, c);
                }
                if !s.is_zero() {
                    row[d + 1 + j] = f.neg(&f.mul(s, c));
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return cols;
    }
    let m = Matrix::from_rows(f, rows).expect("uniform rows");
    cols - m.rank()
}

/// The exponents (d1, d2) of a 2-variable multiarrangement, with
/// d1 <= d2 and d1 + d2 = |m|. The module D(A, m) is free of rank 2, so the
/// first nonzero degree determines both exponents; the full Hilbert function
/// up to d2 is verified and any mismatch reports an internal error.
pub fn multi_exponents(ma: &MultiArrangement) -> Result<(usize, usize)> {
    let total = ma.total_multiplicity();
    let mut d1 = None;
    for d in 0..=total / 2 {
        if multi_dim(ma, d) > 0 {
            d1 = Some(d);
            break;
        }
    }
    let Some(d1) = d1 else {
        return Err(Error::Internal(
            "no nonzero multiderivation at or below half the total multiplicity".into(),
        ));
    };
    let d2 = total - d1;
    for d in 0..=d2 {
        let got = multi_dim(ma, d);
        let want = (d as i64 - d1 as i64 + 1).max(0) as usize
            + (d as i64 - d2 as i64 + 1).max(0) as usize;
        if got != want {
            return Err(Error::Internal(format!(
                "Hilbert function mismatch at degree {d}: got {got}, expected {want} \
                 for exponents ({d1}, {d2})"
            )));
        }
    }
    Ok((d1, d2))
}

/// Exponents of the Ziegler restriction onto a member line.
pub fn ziegler_exponents(a: &Arrangement, h: &Line) -> Result<(usize, usize)> {
    if a.len() < 3 {
        return Err(Error::TooFewLines {
            needed: 3,
            got: a.len(),
        });
    }
    multi_exponents(&restriction(a, h)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FreenessStatus {
    Free { exponents: (usize, usize, usize) },
    NonFree,
}

/// The freeness decision together with the evidence it was made on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessVerdict {
    pub status: FreenessStatus,
    /// Exponents of the Ziegler restriction onto the witness line.
    pub ziegler_exponents: (usize, usize),
    pub char_poly: CharPoly,
    pub char_roots: Option<(i64, i64)>,
    pub witness_line: usize,
    pub cross_check_line: usize,
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self.status, FreenessStatus::Free { .. })
    }

    pub fn exponents(&self) -> Option<(usize, usize, usize)> {
        match self.status {
            FreenessStatus::Free { exponents } => Some(exponents),
            FreenessStatus::NonFree => None,
        }
    }
}

/// Decides freeness of an essential arrangement over a field of
/// characteristic zero: A is free exactly when the characteristic polynomial
/// factors as (t - e1)(t - e2) with (e1, e2) the Ziegler restriction
/// exponents of any one member line. Necessity holds in general; sufficiency
/// in rank 3 and characteristic zero is the criterion of Yoshinaga, used
/// here as an external fact. The verdict is cross-checked on a second line.
///
/// Positive characteristic is refused, since the constant-multiplicity-2
/// exponent formula behind the criterion fails there; use [`saito_check`]
/// with an explicit basis instead.
pub fn is_free(a: &Arrangement) -> Result<FreenessVerdict> {
    if a.field().characteristic() != 0 {
        return Err(Error::PositiveCharacteristic);
    }
    if !a.is_essential() {
        return Err(Error::NotEssential);
    }
    let chi = char_poly0(a)?;
    let witness_line = 0usize;
    let cross_check_line = 1usize;
    let e = ziegler_exponents(a, &a.lines()[witness_line].clone())?;
    let matches_chi = |exp: (usize, usize)| {
        chi.c1 == -((exp.0 + exp.1) as i64) && chi.c0 == (exp.0 * exp.1) as i64
    };
    let free = matches_chi(e);
    let e2 = ziegler_exponents(a, &a.lines()[cross_check_line].clone())?;
    let free2 = matches_chi(e2);
    if free != free2 {
        return Err(Error::Internal(format!(
            "freeness criterion disagrees between lines {witness_line} and {cross_check_line}: \
             ziegler {e:?} vs {e2:?}, chi {chi}"
        )));
    }
    if free && e != e2 {
        return Err(Error::Internal(format!(
            "free verdict with unequal restriction exponents {e:?} vs {e2:?}"
        )));
    }
    let status = if free {
        FreenessStatus::Free {
            exponents: (1, e.0, e.1),
        }
    } else {
        FreenessStatus::NonFree
    };
    Ok(FreenessVerdict {
        status,
        ziegler_exponents: e,
        char_poly: chi,
        char_roots: chi.integer_roots(),
        witness_line,
        cross_check_line,
    })
}

/// True iff alpha_H divides theta(alpha_H) for every member line, checked by
/// parametrized substitution.
pub fn is_log_deriv(a: &Arrangement, theta: &Derivation) -> Result<bool> {
    if theta.field() != a.field() {
        return Err(Error::DerivationMismatch(
            "derivation is over a different field".into(),
        ));
    }
    for line in a.lines() {
        let applied = theta.applied_to(line.coeffs());
        if applied.is_zero() {
            continue;
        }
        let (u, v) = line.kernel_basis();
        let subst = SegmentSubstitution::new(a.field(), &u, &v, theta.degree());
        if !applied.on_segment(&subst).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SaitoOutcome {
    Certified,
    /// One of the candidate derivations is not logarithmic (2 or 3).
    NotLogarithmic { which: u8 },
    DegreeSumMismatch { expected: usize, got: usize },
    DeterminantZero,
    DeterminantNotProportional,
}

impl SaitoOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, SaitoOutcome::Certified)
    }
}

/// Saito's criterion: (theta_E, theta2, theta3) is a free basis of D(A) iff
/// both candidates are logarithmic, the degrees sum to |A| (counting
/// theta_E's 1), and the 3x3 coefficient determinant is a nonzero scalar
/// multiple of the product of the defining forms. Valid in any
/// characteristic.
pub fn saito_check(
    a: &Arrangement,
    theta2: &Derivation,
    theta3: &Derivation,
) -> Result<SaitoOutcome> {
    let f = a.field();
    if theta2.field() != f || theta3.field() != f {
        return Err(Error::DerivationMismatch(
            "derivations are over a different field".into(),
        ));
    }
    let expected = a.len();
    let got = 1 + theta2.degree() + theta3.degree();
    if got != expected {
        return Ok(SaitoOutcome::DegreeSumMismatch { expected, got });
    }
    if !is_log_deriv(a, theta2)? {
        return Ok(SaitoOutcome::NotLogarithmic { which: 2 });
    }
    if !is_log_deriv(a, theta3)? {
        return Ok(SaitoOutcome::NotLogarithmic { which: 3 });
    }
    let euler = Derivation::euler(f);
    let rows = [euler, theta2.clone(), theta3.clone()];
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        rows[r1]
            .component_poly(c1)
            .mul(&rows[r2].component_poly(c2))
            .sub(&rows[r1].component_poly(c2).mul(&rows[r2].component_poly(c1)))
    };
    let det = rows[0]
        .component_poly(0)
        .mul(&minor(1, 2, 1, 2))
        .sub(&rows[0].component_poly(1).mul(&minor(1, 2, 0, 2)))
        .add(&rows[0].component_poly(2).mul(&minor(1, 2, 0, 1)));
    if det.is_zero() {
        return Ok(SaitoOutcome::DeterminantZero);
    }
    let mut product = HomogPoly::linear(f, a.lines()[0].coeffs());
    for line in &a.lines()[1..] {
        product = product.mul(&HomogPoly::linear(f, line.coeffs()));
    }
    let lead = product
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("product of nonzero forms is nonzero");
    let ratio = f
        .div(&det.coeffs()[lead], &product.coeffs()[lead])
        .expect("leading product coefficient is nonzero");
    if ratio.is_zero() || det != product.scale(&ratio) {
        return Ok(SaitoOutcome::DeterminantNotProportional);
    }
    Ok(SaitoOutcome::Certified)
}

/// Constructive certification of a Free verdict: extracts candidate basis
/// elements from the nullspaces at the exponent degrees and returns the first
/// pair passing Saito's criterion.
pub fn certify_free_basis(
    a: &Arrangement,
    d2: usize,
    d3: usize,
) -> Result<Option<(Derivation, Derivation)>> {
    let basis2 = derivation_basis(a, d2);
    let basis3 = derivation_basis(a, d3);
    for t2 in &basis2 {
        for t3 in &basis3 {
            if t2 == t3 {
                continue;
            }
            if saito_check(a, t2, t3)?.is_certified() {
                return Ok(Some((t2.clone(), t3.clone())));
            }
        }
    }
    Ok(None)
}
