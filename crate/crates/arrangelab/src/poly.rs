//! Dense homogeneous polynomial arithmetic used by the graded derivation
//! computations: binary forms in two parameters and trivariate homogeneous
//! polynomials over the canonical degree-d monomial basis.
//!
//! The monomial basis of degree d in x, y, z is ordered lexicographically
//! with x > y > z, descending: x^d, x^{d-1}y, x^{d-1}z, ...

use crate::field::{Field, Scalar};

/// Dimension of the space of homogeneous 3-variable polynomials of degree d.
pub fn s_dim(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        ((d + 1) * (d + 2) / 2) as usize
    }
}

/// Exponent triples of degree d in descending lex order (x > y > z).
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(s_dim(d as i64));
    for e1 in (0..=d).rev() {
        for e2 in (0..=d - e1).rev() {
            out.push([e1, e2, d - e1 - e2]);
        }
    }
    out
}

/// Position of an exponent triple in the degree-d basis.
pub fn monomial_index(d: usize, e: [usize; 3]) -> usize {
    debug_assert_eq!(e[0] + e[1] + e[2], d);
    let a = d - e[0];
    a * (a + 1) / 2 + (a - e[1])
}

/// A binary form of degree d in parameters (s, t): `coeffs[i]` is the
/// coefficient of `s^(d-i) t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinForm {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl BinForm {
    pub fn constant(field: Field, value: Scalar) -> Self {
        BinForm {
            field,
            coeffs: vec![value],
        }
    }

    pub fn linear(field: Field, s_coeff: Scalar, t_coeff: Scalar) -> Self {
        BinForm {
            field,
            coeffs: vec![s_coeff, t_coeff],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let f = self.field;
        let deg = self.degree() + other.degree();
        let mut coeffs = vec![f.zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = f.mul(a, b);
                coeffs[i + j] = f.add(&coeffs[i + j], &prod);
            }
        }
        BinForm {
            field: f,
            coeffs,
        }
    }
}

/// Substitution of two K^3 vectors (u, v) into trivariate monomials:
/// evaluates `x_i = s*u_i + t*v_i`. Powers of the three linear forms are
/// cached up to the requested degree.
pub struct SegmentSubstitution {
    powers: [Vec<BinForm>; 3],
}

impl SegmentSubstitution {
    pub fn new(field: Field, u: &[Scalar; 3], v: &[Scalar; 3], max_degree: usize) -> Self {
        let powers = [0, 1, 2].map(|i| {
            let lin = BinForm::linear(field, u[i].clone(), v[i].clone());
            let mut pows = Vec::with_capacity(max_degree + 1);
            pows.push(BinForm::constant(field, field.one()));
            for k in 1..=max_degree {
                let next = pows[k - 1].mul(&lin);
                pows.push(next);
            }
            pows
        });
        SegmentSubstitution { powers }
    }

    /// The binary form of `x^e0 y^e1 z^e2` along the segment.
    pub fn monomial(&self, e: [usize; 3]) -> BinForm {
        let p0 = &self.powers[0][e[0]];
        let p1 = &self.powers[1][e[1]];
        let p2 = &self.powers[2][e[2]];
        p0.mul(p1).mul(p2)
    }
}

/// A homogeneous trivariate polynomial over the canonical monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    field: Field,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl HomogPoly {
    pub fn zero(field: Field, degree: usize) -> Self {
        HomogPoly {
            field,
            degree,
            coeffs: vec![field.zero(); s_dim(degree as i64)],
        }
    }

    pub fn from_coeffs(field: Field, degree: usize, coeffs: Vec<Scalar>) -> Self {
        debug_assert_eq!(coeffs.len(), s_dim(degree as i64));
        HomogPoly {
            field,
            degree,
            coeffs,
        }
    }

    /// The linear form a*x + b*y + c*z.
    pub fn linear(field: Field, coeffs: &[Scalar; 3]) -> Self {
        HomogPoly {
            field,
            degree: 1,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        debug_assert_eq!(self.degree, other.degree);
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f.add(a, b))
            .collect();
        HomogPoly {
            field: f,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        debug_assert_eq!(self.degree, other.degree);
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        HomogPoly {
            field: f,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn scale(&self, c: &Scalar) -> HomogPoly {
        let f = self.field;
        HomogPoly {
            field: f,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let f = self.field;
        let deg = self.degree + other.degree;
        let mut coeffs = vec![f.zero(); s_dim(deg as i64)];
        let left = monomials(self.degree);
        let right = monomials(other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = [
                    left[i][0] + right[j][0],
                    left[i][1] + right[j][1],
                    left[i][2] + right[j][2],
                ];
                let idx = monomial_index(deg, e);
                let prod = f.mul(a, b);
                coeffs[idx] = f.add(&coeffs[idx], &prod);
            }
        }
        HomogPoly {
            field: f,
            degree: deg,
            coeffs,
        }
    }

    /// Restriction along a segment substitution (degree must match the
    /// substitution's cached range).
    pub fn on_segment(&self, subst: &SegmentSubstitution) -> BinForm {
        let f = self.field;
        let basis = monomials(self.degree);
        let mut acc = vec![f.zero(); self.degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let bf = subst.monomial(basis[i]);
            for (k, v) in bf.coeffs().iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let term = f.mul(c, v);
                acc[k] = f.add(&acc[k], &term);
            }
        }
        BinForm {
            field: f,
            coeffs: acc,
        }
    }
}
