//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending degree with no trailing zeros;
//! the empty vector is the zero polynomial. Laurent behaviour (negative
//! exponents) is handled by the callers via an explicit shift, so this
//! type only ever sees ordinary polynomials.

use num::bigint::Sign;
use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `c * x^e`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Index of the lowest nonzero coefficient. Zero polynomial reports 0.
    pub fn low_order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Divide by `x^k`, assuming the low `k` coefficients are zero.
    pub fn shr(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        debug_assert!(self.coeffs[..k].iter().all(|c| c.is_zero()));
        Poly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            coeffs.push(a + b);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Gcd of the absolute values of all coefficients; zero for the zero poly.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num::integer::gcd(g, c.abs());
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_content(&self, c: &BigInt) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    /// Exact division, panics if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = rational_divrem(&to_rational(self), &to_rational(d));
        assert!(
            r.iter().all(|c| c.is_zero()),
            "div_exact: nonzero remainder"
        );
        from_rational_integral(&q)
    }

    /// Polynomial gcd over the rationals, returned as a primitive integer
    /// polynomial with positive leading coefficient.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return normalize_primitive(b);
        }
        if b.is_zero() {
            return normalize_primitive(a);
        }
        let mut x = to_rational(a);
        let mut y = to_rational(b);
        while !y.iter().all(|c| c.is_zero()) {
            let (_, r) = rational_divrem(&x, &y);
            x = y;
            y = r;
        }
        normalize_primitive(&from_rational_clear_denoms(&x))
    }

    pub fn eval_rational(&self, u: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + BigRational::from(c.clone());
        }
        acc
    }

    pub fn eval_complex(&self, u: Complex<f64>) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + Complex::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    pub fn sign_of_lowest(&self) -> Sign {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => c.sign(),
            None => Sign::NoSign,
        }
    }
}

fn to_rational(p: &Poly) -> Vec<BigRational> {
    p.coeffs
        .iter()
        .map(|c| BigRational::from(c.clone()))
        .collect()
}

fn trim_rational(v: &mut Vec<BigRational>) {
    while matches!(v.last(), Some(c) if c.is_zero()) {
        v.pop();
    }
}

fn rational_divrem(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r: Vec<BigRational> = a.to_vec();
    trim_rational(&mut r);
    let mut b = b.to_vec();
    trim_rational(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        q[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            r[dr - db + i] -= t;
        }
        trim_rational(&mut r);
        if r.is_empty() {
            break;
        }
    }
    (q, r)
}

fn from_rational_clear_denoms(v: &[BigRational]) -> Poly {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    Poly::from_coeffs(
        v.iter()
            .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
            .collect(),
    )
}

fn from_rational_integral(v: &[BigRational]) -> Poly {
    Poly::from_coeffs(v.iter().map(|c| c.to_integer()).collect())
}

fn normalize_primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = p.content();
    let mut out = p.div_content(&c);
    if out.sign_of_lowest() == Sign::Minus {
        out = out.neg();
    }
    out
}
