//! Exact scalar arithmetic over the rationals, quadratic extensions Q(sqrt(d)),
//! and prime fields F_p.
//!
//! Every value is kept in a canonical representation: rationals are reduced
//! fractions with positive denominators, quadratic scalars are pairs of reduced
//! rationals, prime-field scalars are residues in `[0, p)`. Equality of
//! representations is therefore equality of values, which lets geometric types
//! use scalars directly as map keys.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field scalars live in. `quadratic` is Q(sqrt(d)) for a squarefree
/// integer d other than 0 and 1; `prime` is F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDescriptor {
    Rational,
    Quadratic { d: i64 },
    Prime { p: u64 },
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

/// A validated field handle. Copyable; all scalar operations live here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Field {
    desc: FieldDescriptor,
}

/// An exact field element. Scalars remember enough of their field (the `d` or
/// `p` parameter) to make equality and rendering self-contained; mixing
/// scalars from different fields is a caller bug and is checked where the
/// public API allows it to happen.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    /// `re + rt * sqrt(d)`
    Quadratic {
        d: i64,
        re: BigRational,
        rt: BigRational,
    },
    Prime {
        p: u64,
        val: u64,
    },
}

impl Field {
    /// Validates the descriptor and returns a field handle.
    pub fn new(desc: FieldDescriptor) -> Result<Self> {
        match desc {
            FieldDescriptor::Rational => {}
            FieldDescriptor::Quadratic { d } => {
                if d == 0 || d == 1 {
                    return Err(Error::NotSquarefree(d));
                }
                if d.unsigned_abs() > 1_000_000_000 {
                    return Err(Error::QuadraticOutOfRange(d));
                }
                if !is_squarefree(d.unsigned_abs()) {
                    return Err(Error::NotSquarefree(d));
                }
            }
            FieldDescriptor::Prime { p } => {
                if !is_prime_u64(p) {
                    return Err(Error::CompositeModulus(p));
                }
            }
        }
        Ok(Field { desc })
    }

    pub fn rational() -> Self {
        Field {
            desc: FieldDescriptor::Rational,
        }
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        Field::new(FieldDescriptor::Quadratic { d })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Field::new(FieldDescriptor::Prime { p })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn characteristic(&self) -> u64 {
        match self.desc {
            FieldDescriptor::Prime { p } => p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self.desc {
            FieldDescriptor::Rational => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldDescriptor::Quadratic { d } => Scalar::Quadratic {
                d,
                re: BigRational::from_integer(n.into()),
                rt: BigRational::zero(),
            },
            FieldDescriptor::Prime { p } => Scalar::Prime {
                p,
                val: reduce_mod(&BigInt::from(n), p),
            },
        }
    }

    /// The square root generator of a quadratic field; errors elsewhere.
    pub fn generator(&self) -> Result<Scalar> {
        match self.desc {
            FieldDescriptor::Quadratic { d } => Ok(Scalar::Quadratic {
                d,
                re: BigRational::zero(),
                rt: BigRational::one(),
            }),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self.desc, s),
            (FieldDescriptor::Rational, Scalar::Rational(_))
        ) || matches!((self.desc, s),
            (FieldDescriptor::Quadratic { d }, Scalar::Quadratic { d: sd, .. }) if d == *sd)
            || matches!((self.desc, s),
            (FieldDescriptor::Prime { p }, Scalar::Prime { p: sp, .. }) if p == *sp)
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        debug_assert!(self.contains(a) && self.contains(b));
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (
                Scalar::Quadratic { d, re, rt },
                Scalar::Quadratic {
                    re: re2, rt: rt2, ..
                },
            ) => Scalar::Quadratic {
                d: *d,
                re: re + re2,
                rt: rt + rt2,
            },
            (Scalar::Prime { p, val }, Scalar::Prime { val: v2, .. }) => Scalar::Prime {
                p: *p,
                val: add_mod(*val, *v2, *p),
            },
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        debug_assert!(self.contains(a));
        match a {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Quadratic { d, re, rt } => Scalar::Quadratic {
                d: *d,
                re: -re,
                rt: -rt,
            },
            Scalar::Prime { p, val } => Scalar::Prime {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        debug_assert!(self.contains(a) && self.contains(b));
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (
                Scalar::Quadratic { d, re, rt },
                Scalar::Quadratic {
                    re: re2, rt: rt2, ..
                },
            ) => {
                let dq = BigRational::from_integer((*d).into());
                Scalar::Quadratic {
                    d: *d,
                    re: re * re2 + &dq * rt * rt2,
                    rt: re * rt2 + rt * re2,
                }
            }
            (Scalar::Prime { p, val }, Scalar::Prime { val: v2, .. }) => Scalar::Prime {
                p: *p,
                val: mul_mod(*val, *v2, *p),
            },
            _ => panic!("mixed-field scalar arithmetic"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        debug_assert!(self.contains(a));
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rational(x) => Scalar::Rational(x.recip()),
            Scalar::Quadratic { d, re, rt } => {
                // (re + rt*sqrt(d))^-1 = (re - rt*sqrt(d)) / (re^2 - d*rt^2).
                // The norm cannot vanish for nonzero input since d is not a square.
                let dq = BigRational::from_integer((*d).into());
                let norm = re * re - &dq * rt * rt;
                debug_assert!(!norm.is_zero());
                Scalar::Quadratic {
                    d: *d,
                    re: re / &norm,
                    rt: -(rt / &norm),
                }
            }
            Scalar::Prime { p, val } => Scalar::Prime {
                p: *p,
                val: inv_mod(*val, *p),
            },
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses the interchange grammar: rationals `n` or `n/m`; quadratic
    /// `a`, `a+b*w`, `a-b*w` (with `w` the square root generator, and the
    /// shorthands `w`, `-w`, `b*w` accepted); prime fields take a decimal
    /// integer which is reduced mod p.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let err = |reason: &str| Error::ScalarParse {
            text: text.to_string(),
            field: self.desc.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        if t.is_empty() {
            return Err(err("empty input"));
        }
        match self.desc {
            FieldDescriptor::Rational => {
                if t.contains('w') {
                    return Err(err("no square root generator in Q"));
                }
                Ok(Scalar::Rational(parse_rational(t).map_err(err)?))
            }
            FieldDescriptor::Quadratic { d } => {
                let (re, rt) = parse_quadratic(t).map_err(err)?;
                Ok(Scalar::Quadratic { d, re, rt })
            }
            FieldDescriptor::Prime { p } => {
                if t.contains(['/', '*', 'w']) {
                    return Err(err("prime-field scalars are decimal integers"));
                }
                let n = parse_bigint(t).map_err(err)?;
                Ok(Scalar::Prime {
                    p,
                    val: reduce_mod(&n, p),
                })
            }
        }
    }

    /// Canonical text form; `parse(render(s)) == s` for every scalar.
    pub fn render(&self, s: &Scalar) -> String {
        debug_assert!(self.contains(s));
        s.to_string()
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Quadratic { re, rt, .. } => re.is_zero() && rt.is_zero(),
            Scalar::Prime { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_one(),
            Scalar::Quadratic { re, rt, .. } => re.is_one() && rt.is_zero(),
            Scalar::Prime { val, .. } => *val == 1,
        }
    }

    /// The rational components of the scalar (one for Q, two for Q(sqrt d)).
    /// Prime-field scalars have none; integer content tricks do not apply.
    pub(crate) fn rational_parts(&self) -> Vec<&BigRational> {
        match self {
            Scalar::Rational(x) => vec![x],
            Scalar::Quadratic { re, rt, .. } => vec![re, rt],
            Scalar::Prime { .. } => vec![],
        }
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => true,
            (Scalar::Quadratic { d: a, .. }, Scalar::Quadratic { d: b, .. }) => a == b,
            (Scalar::Prime { p: a, .. }, Scalar::Prime { p: b, .. }) => a == b,
            _ => false,
        }
    }
}

// Canonical (not numeric) total order: used for deterministic point ordering
// and tie-breaking. Rationals sort numerically, quadratic scalars
// lexicographically on (re, rt), residues by value.
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (
                Scalar::Quadratic { re: a, rt: b, .. },
                Scalar::Quadratic { re: c, rt: d, .. },
            ) => a.cmp(c).then_with(|| b.cmp(d)),
            (Scalar::Prime { val: a, .. }, Scalar::Prime { val: b, .. }) => a.cmp(b),
            (Scalar::Rational(_), _) => Ordering::Less,
            (_, Scalar::Rational(_)) => Ordering::Greater,
            (Scalar::Quadratic { .. }, _) => Ordering::Less,
            (_, Scalar::Quadratic { .. }) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => write!(f, "{}", render_rational(x)),
            Scalar::Quadratic { re, rt, .. } => {
                if rt.is_zero() {
                    write!(f, "{}", render_rational(re))
                } else if rt.is_negative() {
                    write!(f, "{}-{}*w", render_rational(re), render_rational(&-rt))
                } else {
                    write!(f, "{}+{}*w", render_rational(re), render_rational(rt))
                }
            }
            Scalar::Prime { val, .. } => write!(f, "{val}"),
        }
    }
}

fn render_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ---------------------------------------------------------------------------
// text parsing

/// Accepts ASCII '-' and U+2212 minus.
fn normalize_signs(t: &str) -> String {
    t.replace('\u{2212}', "-")
}

fn parse_bigint(t: &str) -> std::result::Result<BigInt, &'static str> {
    let t = normalize_signs(t);
    t.parse::<BigInt>().map_err(|_| "malformed integer")
}

fn parse_rational(t: &str) -> std::result::Result<BigRational, &'static str> {
    let t = normalize_signs(t);
    let (num_txt, den_txt) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t.as_str(), "1"),
    };
    let num: BigInt = num_txt.parse().map_err(|_| "malformed numerator")?;
    let den: BigInt = den_txt.parse().map_err(|_| "malformed denominator")?;
    if den.is_zero() {
        return Err("zero denominator");
    }
    Ok(BigRational::new(num, den))
}

/// `a`, `a+b*w`, `a-b*w`, plus the shorthands `w`, `-w`, `b*w`, `a+w`, `a-w`.
fn parse_quadratic(t: &str) -> std::result::Result<(BigRational, BigRational), &'static str> {
    let t = normalize_signs(t);
    if t.matches('w').count() > 1 {
        return Err("more than one square root term");
    }
    if !t.contains('w') {
        return Ok((parse_rational(&t)?, BigRational::zero()));
    }
    // Split at the first '+'/'-' that separates the two terms: it must follow
    // a digit or 'w' (a sign at position 0 or right after '/' or '*' belongs
    // to the term itself).
    let bytes = t.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && (bytes[i - 1].is_ascii_digit() || bytes[i - 1] == b'w')
        {
            split = Some(i);
            break;
        }
    }
    let (a_txt, b_txt) = match split {
        Some(i) => (&t[..i], &t[i..]),
        None => ("0", t.as_str()),
    };
    if a_txt.contains('w') {
        return Err("square root term must come last");
    }
    let a = parse_rational(a_txt)?;
    let b = parse_w_term(b_txt)?;
    Ok((a, b))
}

fn parse_w_term(t: &str) -> std::result::Result<BigRational, &'static str> {
    let (sign, rest) = match t.strip_prefix('+') {
        Some(r) => (BigRational::one(), r),
        None => match t.strip_prefix('-') {
            Some(r) => (-BigRational::one(), r),
            None => (BigRational::one(), t),
        },
    };
    let coeff = if rest == "w" {
        BigRational::one()
    } else if let Some(prefix) = rest.strip_suffix("*w") {
        parse_rational(prefix)?
    } else {
        return Err("malformed square root term");
    };
    Ok(sign * coeff)
}

// ---------------------------------------------------------------------------
// modular arithmetic and number-theoretic checks

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    let pm: BigInt = p.into();
    let r = n.mod_floor(&pm);
    // mod_floor of a positive modulus is in [0, p)
    u64::try_from(r).expect("residue fits u64")
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}
