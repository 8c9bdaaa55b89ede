//! Exact arithmetic in the coefficient field of the Gelfand-Tsetlin
//! formulas, together with a numeric sampling backend for entries that
//! carry generic block symbols.
//!
//! The exact field is the rational functions in a formal variable `u`
//! with `u^(2D) = q`, where `D` (the root degree) is the lcm of the
//! denominators of all rational entry parts in play. Exponents of `q`
//! live in `r + h*(w/2)` with `w` a generator of `1(q) = {x : q^x = 1}`;
//! `q` is anchored real and greater than one, so `q^(w/2) = -1` and the
//! decomposition is unique.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::Sign;
use num::rational::Ratio;
use num::{BigInt, Complex, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QgtError, Result};
use crate::poly::Poly;

pub type Rat = Ratio<i64>;
pub type C64 = Complex<f64>;

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| QgtError::InvalidInput(format!("bad rational `{s}`")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q == 0 {
                return Err(QgtError::InvalidInput(format!("bad rational `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, q))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exponent of `q` of the form `r + h*(w/2)` plus integer multiples of
/// generic block symbols, so that `q^x = (-1)^h * q^r * prod_b q^(c_b * k_b)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtendedExponent {
    pub r: Rat,
    pub h: i64,
    pub blocks: BTreeMap<String, i64>,
}

impl ExtendedExponent {
    pub fn new(r: Rat, h: i64) -> Self {
        ExtendedExponent {
            r,
            h,
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExtendedExponent::new(Rat::from_integer(n), 0)
    }

    pub fn block(mut self, name: &str, coeff: i64) -> Self {
        if coeff != 0 {
            *self.blocks.entry(name.to_string()).or_insert(0) += coeff;
            if self.blocks[name] == 0 {
                self.blocks.remove(name);
            }
        }
        self
    }

    pub fn neg(&self) -> Self {
        ExtendedExponent {
            r: -self.r,
            h: -self.h,
            blocks: self.blocks.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        for (k, v) in &other.blocks {
            *blocks.entry(k.clone()).or_insert(0) += v;
        }
        blocks.retain(|_, v| *v != 0);
        ExtendedExponent {
            r: self.r + other.r,
            h: self.h + other.h,
            blocks,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.h == 0 && self.blocks.is_empty()
    }

    pub fn has_blocks(&self) -> bool {
        !self.blocks.is_empty()
    }
}

impl std::fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (b, c) in &self.blocks {
            match c {
                1 => parts.push(b.clone()),
                -1 => parts.push(format!("-{b}")),
                c => parts.push(format!("{c}{b}")),
            }
        }
        if !self.r.is_zero() || parts.is_empty() {
            parts.push(format_rat(&self.r));
        }
        if self.h != 0 {
            parts.push(format!("{}w/2", self.h));
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 && !p.starts_with('-') {
                s.push('+');
            }
            s.push_str(p);
        }
        f.write_str(&s)
    }
}

/// An exact element of Q(u), kept as `u^shift * num/den`. The fraction is
/// not reduced eagerly; `canonicalized` produces the unique form with the
/// u-power fully factored, num and den coprime with coprime integer
/// contents, and the lowest coefficient of den positive.
#[derive(Debug, Clone)]
pub struct ExactScalar {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ExactScalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            shift: 0,
            num: Poly::constant(BigInt::from(n)),
            den: Poly::one(),
        }
    }

    /// `c * u^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        ExactScalar {
            shift: e,
            num: Poly::constant(BigInt::from(c)),
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(other.shift);
        let a = self
            .num
            .mul(&other.den)
            .shl((self.shift - s) as usize);
        let b = other
            .num
            .mul(&self.den)
            .shl((other.shift - s) as usize);
        let num = a.add(&b);
        if num.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar {
            shift: s,
            num,
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar {
            shift: self.shift + other.shift,
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(QgtError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(ExactScalar::zero());
        }
        Ok(ExactScalar {
            shift: self.shift - other.shift,
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    pub fn canonicalized(&self) -> Self {
        if self.num.is_zero() {
            return ExactScalar::zero();
        }
        let ln = self.num.low_order();
        let ld = self.den.low_order();
        let mut num = self.num.shr(ln);
        let mut den = self.den.shr(ld);
        let shift = self.shift + ln as i64 - ld as i64;
        let g = Poly::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        let c = num::integer::gcd(num.content(), den.content());
        if !c.is_one() {
            num = num.div_content(&c);
            den = den.div_content(&c);
        }
        if den.sign_of_lowest() == Sign::Minus {
            num = num.neg();
            den = den.neg();
        }
        ExactScalar { shift, num, den }
    }

    /// Field equality, decided by cross multiplication (no gcd needed).
    pub fn equals(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        let s = self.shift - other.shift;
        let a = self.num.mul(&other.den).shl(s.max(0) as usize);
        let b = other.num.mul(&self.den).shl((-s).max(0) as usize);
        a == b
    }

    /// Evaluate at `u = u0`; returns an error when the denominator is
    /// negligibly small relative to its coefficient mass at `u0`.
    pub fn eval_at_u(&self, u0: C64) -> Result<C64> {
        if self.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let den_val = self.den.eval_complex(u0);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN).abs() * u0.norm().powi(i as i32))
            .sum();
        if den_val.norm() < 1e-12 * scale.max(1.0) {
            return Err(QgtError::Pole {
                sample: 0,
                value: den_val.norm(),
            });
        }
        let num_val = self.num.eval_complex(u0);
        Ok(num_val / den_val * u0.powi(self.shift as i32))
    }

    /// Canonical printed form. `2D` powers of `u` collapse to `q` when the
    /// whole expression is a rational function of `q`.
    pub fn canonical_string(&self, root_degree: u32) -> String {
        let c = self.canonicalized();
        if c.num.is_zero() {
            return "0".to_string();
        }
        let (num_off, den_off) = if c.shift >= 0 {
            (c.shift as usize, 0usize)
        } else {
            (0usize, (-c.shift) as usize)
        };
        let step = 2 * root_degree as usize;
        let q_form = step > 0
            && exponents_divisible(&c.num, num_off, step)
            && exponents_divisible(&c.den, den_off, step);
        let (var, div) = if q_form { ("q", step) } else { ("u", 1) };
        let num_s = poly_string(&c.num, num_off, var, div);
        if c.den.is_one() && den_off == 0 {
            return num_s;
        }
        let den_s = poly_string(&c.den, den_off, var, div);
        format!("{}/{}", paren(&num_s), paren(&den_s))
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}
impl Eq for ExactScalar {}

fn exponents_divisible(p: &Poly, off: usize, step: usize) -> bool {
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| c.is_zero() || (i + off) % step == 0)
}

fn poly_string(p: &Poly, off: usize, var: &str, div: usize) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = (i + off) / div.max(1);
        let neg = c.sign() == Sign::Minus;
        let mag = c.abs();
        if first {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        first = false;
        let show_coeff = !mag.is_one() || e == 0;
        if show_coeff {
            let _ = write!(out, "{mag}");
        }
        if e > 0 {
            out.push_str(var);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
    }
    out
}

fn paren(s: &str) -> String {
    let simple = !s[1..].contains(['+', '-']);
    if simple {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// A numeric evaluation of an exact scalar at one sampled point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericScalar {
    pub value: C64,
    pub sample_id: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct NumericConfig {
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            samples: 5,
            tolerance: 1e-9,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub q: f64,
    pub blocks: BTreeMap<String, C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

/// Scalar value in the active mode: an exact rational function of `u`, or
/// its values at each sampled `q` point.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(ExactScalar),
    Numeric(Vec<C64>),
}

impl Scalar {
    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Scalar::Exact(e) => Some(e),
            Scalar::Numeric(_) => None,
        }
    }
}

/// Arithmetic context: fixed root degree, mode, and (in numeric mode) the
/// sampled evaluation points. All scalar operations go through here so the
/// two backends stay interchangeable.
#[derive(Debug, Clone)]
pub struct Context {
    root_degree: u32,
    mode: Mode,
    numeric_cfg: NumericConfig,
    samples: Vec<Sample>,
}

impl Context {
    pub fn exact(root_degree: u32) -> Self {
        assert!(root_degree >= 1);
        Context {
            root_degree,
            mode: Mode::Exact,
            numeric_cfg: NumericConfig::default(),
            samples: Vec::new(),
        }
    }

    /// Numeric context sampling `q` in [1.1, 3.0] and one complex offset
    /// per block symbol, all driven by the configured RNG seed.
    pub fn numeric(root_degree: u32, cfg: NumericConfig, block_names: &[String]) -> Self {
        assert!(root_degree >= 1 && cfg.samples >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut samples = Vec::with_capacity(cfg.samples);
        for _ in 0..cfg.samples {
            let q = rng.gen_range(1.1..3.0);
            let mut blocks = BTreeMap::new();
            for name in block_names {
                let re = rng.gen_range(0.2..0.8);
                let im = rng.gen_range(0.1..0.6);
                blocks.insert(name.clone(), C64::new(re, im));
            }
            samples.push(Sample { q, blocks });
        }
        Context {
            root_degree,
            mode: Mode::Numeric,
            numeric_cfg: cfg,
            samples,
        }
    }

    pub fn root_degree(&self) -> u32 {
        self.root_degree
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn numeric_config(&self) -> &NumericConfig {
        &self.numeric_cfg
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn tolerance(&self) -> f64 {
        self.numeric_cfg.tolerance
    }

    pub fn zero(&self) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::Exact(ExactScalar::zero()),
            Mode::Numeric => Scalar::Numeric(vec![C64::new(0.0, 0.0); self.samples.len()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::Exact(ExactScalar::from_int(n)),
            Mode::Numeric => Scalar::Numeric(vec![C64::new(n as f64, 0.0); self.samples.len()]),
        }
    }

    /// Integer `e` with `u^e = q^x`; errors when the rational part needs a
    /// finer root degree than the context provides.
    fn u_exponent(&self, r: &Rat) -> Result<i64> {
        let e = r * Rat::from_integer(2 * self.root_degree as i64);
        if e.denom().is_one() {
            Ok(*e.numer())
        } else {
            Err(QgtError::RootDegree {
                given: self.root_degree,
                required: num::integer::lcm(*r.denom(), self.root_degree as i64) as u32,
                exponent: format_rat(r),
            })
        }
    }

    /// `q^x`.
    pub fn q_pow(&self, x: &ExtendedExponent) -> Result<Scalar> {
        match self.mode {
            Mode::Exact => {
                if x.has_blocks() {
                    return Err(QgtError::GenericEntryInExactMode(format!("{x}")));
                }
                let e = self.u_exponent(&x.r)?;
                let sign = if x.h.rem_euclid(2) == 0 { 1 } else { -1 };
                Ok(Scalar::Exact(ExactScalar::monomial(sign, e)))
            }
            Mode::Numeric => {
                let vals = self
                    .samples
                    .iter()
                    .map(|s| {
                        let ln_q = s.q.ln();
                        let r = *x.r.numer() as f64 / *x.r.denom() as f64;
                        let mut v = C64::new((r * ln_q).exp(), 0.0);
                        if x.h.rem_euclid(2) == 1 {
                            v = -v;
                        }
                        for (b, k) in &x.blocks {
                            let c = s.blocks.get(b).copied().unwrap_or_else(|| {
                                panic!("unsampled block symbol `{b}`")
                            });
                            v *= (c * (*k as f64) * ln_q).exp();
                        }
                        v
                    })
                    .collect();
                Ok(Scalar::Numeric(vals))
            }
        }
    }

    /// The symmetric q-number `[x]_q = (q^x - q^(-x))/(q - q^(-1))`.
    pub fn q_number(&self, x: &ExtendedExponent) -> Result<Scalar> {
        if let (Mode::Exact, false) = (self.mode, x.has_blocks()) {
            let e = self.u_exponent(&x.r)?;
            if e == 0 {
                return Ok(Scalar::Exact(ExactScalar::zero()));
            }
            let step = 2 * self.root_degree as i64;
            let sign = if x.h.rem_euclid(2) == 0 { 1 } else { -1 } * e.signum();
            let a = e.abs();
            if a % step == 0 {
                // geometric form: [a]_q = u^(e-2D) + u^(e-6D) + ... (den = 1)
                let terms = (a / step) as usize;
                let mut coeffs = vec![BigInt::zero(); (a - step) as usize * 2 + 1];
                for i in 0..terms {
                    coeffs[2 * step as usize * i] = BigInt::from(sign);
                }
                return Ok(Scalar::Exact(ExactScalar {
                    shift: -(a - step),
                    num: Poly::from_coeffs(coeffs),
                    den: Poly::one(),
                }));
            }
        }
        let n = self.sub(&self.q_pow(x)?, &self.q_pow(&x.neg())?);
        let d = self.sub(
            &self.q_pow(&ExtendedExponent::from_int(1))?,
            &self.q_pow(&ExtendedExponent::from_int(-1))?,
        );
        self.div(&n, &d)
    }

    /// `(k)_{q^(-2)}! = prod_{j=1..k} (q^(-2j) - 1)/(q^(-2) - 1)`, with the
    /// empty product equal to one. Each factor is the geometric sum
    /// `1 + q^(-2) + ... + q^(-2(j-1))`.
    pub fn q_paren_factorial(&self, k: usize) -> Scalar {
        let mut acc = self.one();
        for j in 1..=k {
            let mut factor = self.zero();
            for i in 0..j {
                let term = self
                    .q_pow(&ExtendedExponent::new(Rat::from_integer(-2 * i as i64), 0))
                    .expect("integer exponent");
                factor = self.add(&factor, &term);
            }
            acc = self.mul(&acc, &factor);
        }
        acc
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => {
                Scalar::Numeric(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Numeric(a) => Scalar::Numeric(a.iter().map(|x| -x).collect()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => {
                Scalar::Numeric(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        match (a, b) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.div(b)?)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => {
                let mut out = Vec::with_capacity(a.len());
                for (i, (x, y)) in a.iter().zip(b).enumerate() {
                    if y.norm() < self.numeric_cfg.tolerance {
                        return Err(QgtError::Pole {
                            sample: i,
                            value: y.norm(),
                        });
                    }
                    out.push(x / y);
                }
                Ok(Scalar::Numeric(out))
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Exact(a) => a.is_zero(),
            Scalar::Numeric(v) => v
                .iter()
                .all(|x| x.norm() <= self.numeric_cfg.tolerance),
        }
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        match (a, b) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.equals(b),
            _ => self.is_zero(&self.sub(a, b)),
        }
    }

    /// Scale-free equality: at every sample `|a-b| <= tol * max(|a|, |b|)`.
    /// Unlike `eq`, this never treats two small-but-distinct values as
    /// equal, so it suits eigenvalue separation where magnitudes vary
    /// wildly. Exact scalars compare exactly.
    pub fn eq_relative(&self, a: &Scalar, b: &Scalar) -> bool {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x.equals(y),
            (Scalar::Numeric(x), Scalar::Numeric(y)) => x.iter().zip(y).all(|(a, b)| {
                (a - b).norm() <= self.numeric_cfg.tolerance * a.norm().max(b.norm())
            }),
            _ => panic!("mixed scalar modes"),
        }
    }

    /// Relative residual `|a-b| / max(1, |a|)`, maximized over samples.
    /// Exact scalars report 0.0 on equality and infinity otherwise.
    pub fn residual(&self, a: &Scalar, b: &Scalar) -> f64 {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => {
                if x.equals(y) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            (Scalar::Numeric(x), Scalar::Numeric(y)) => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
                .fold(0.0, f64::max),
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn scalar_string(&self, a: &Scalar) -> String {
        match a {
            Scalar::Exact(a) => a.canonical_string(self.root_degree),
            Scalar::Numeric(v) => {
                let parts: Vec<String> = v
                    .iter()
                    .map(|c| format!("{:+.9e}{:+.9e}i", c.re, c.im))
                    .collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

/// Evaluate an exact scalar at a concrete `q0`, using the principal branch
/// of `q0^(1/(2D))`.
pub fn evaluate(
    a: &ExactScalar,
    q0: C64,
    root_degree: u32,
    sample_id: usize,
) -> Result<NumericScalar> {
    if q0.norm() == 0.0 {
        return Err(QgtError::BadEvaluationPoint);
    }
    let u0 = q0.powf(1.0 / (2.0 * root_degree as f64));
    let value = a.eval_at_u(u0).map_err(|e| match e {
        QgtError::Pole { value, .. } => QgtError::Pole {
            sample: sample_id,
            value,
        },
        e => e,
    })?;
    Ok(NumericScalar { value, sample_id })
}
