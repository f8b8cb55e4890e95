//! Exact truncated arithmetic in ramified discrete valuation rings.
//!
//! Two coefficient regimes are supported, unified as digit series with a
//! carry rule:
//!
//! * `MixedChar`: a sub-ring of `Z_p[p^{1/N}]` with uniformizer `pi`
//!   satisfying `pi^N = p`. A digit overflow at position `q` carries to
//!   position `q + N`.
//! * `EqualChar`: `F_p[[t^{1/N}]]` with `pi = t^{1/N}`. Digits reduce mod
//!   `p` independently; there are no carries.
//!
//! Elements are known modulo `pi^M`. Digit order is little-endian: digit
//! `q` is the coefficient of `pi^q`. All equality is "equal at precision
//! M"; an element whose digits are all zero is *zero at precision*, never
//! asserted to be exactly zero. The valuation is normalized by
//! `nu(p) = 1`, so `nu(pi) = 1/N` and digit index `q` carries valuation
//! `q/N`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("operands have different ring specs")]
    SpecMismatch,
    #[error("element is not a unit (valuation {0:?})")]
    NotAUnit(Option<Rational>),
    #[error("exponent denominator {den} does not divide the ramification index {ram}")]
    IncompatibleRamification { den: i64, ram: u32 },
    #[error("negative exponent {0} for p_power")]
    NegativeExponent(Rational),
    #[error("invalid ring spec: {0}")]
    BadSpec(String),
    #[error("unit inversion did not converge (is the spec well-formed?)")]
    NoConvergence,
}

/// A rational number extended with `+infinity` (the earnestness degree
/// `r = infinity`). Finite values are kept in reduced form with a
/// positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rational {
    Finite { num: i64, den: i64 },
    Infinity,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b)).abs() * b.abs()
    }
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rational::Finite {
            num: sign * num / g,
            den: (den / g).abs(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Rational::Finite { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Rational::integer(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rational::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Finite { num: 0, .. })
    }

    /// Numerator and denominator of a finite value.
    pub fn parts(&self) -> Option<(i64, i64)> {
        match self {
            Rational::Finite { num, den } => Some((*num, *den)),
            Rational::Infinity => None,
        }
    }

    pub fn add(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Finite { num: a, den: b }, Rational::Finite { num: c, den: d }) => {
                Rational::new(a * d + c * b, b * d)
            }
            _ => Rational::Infinity,
        }
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Finite { num: a, den: b }, Rational::Finite { num: c, den: d }) => {
                Rational::new(a * d - c * b, b * d)
            }
            _ => Rational::Infinity,
        }
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        match (self, other) {
            (Rational::Finite { num: a, den: b }, Rational::Finite { num: c, den: d }) => {
                Rational::new(a * c, b * d)
            }
            _ => Rational::Infinity,
        }
    }

    pub fn div_int(&self, n: i64) -> Rational {
        assert!(n != 0);
        match self {
            Rational::Finite { num, den } => Rational::new(*num, den * n),
            Rational::Infinity => Rational::Infinity,
        }
    }

    pub fn mul_int(&self, n: i64) -> Rational {
        match self {
            Rational::Finite { num, den } => Rational::new(num * n, *den),
            Rational::Infinity => Rational::Infinity,
        }
    }

    /// True when `self / other` is a non-negative integer. `other` must be
    /// finite and positive; every finite value divides zero.
    pub fn is_integer_multiple_of(&self, other: &Rational) -> bool {
        match (self, other) {
            (Rational::Finite { num: 0, .. }, _) => true,
            (Rational::Finite { num: a, den: b }, Rational::Finite { num: c, den: d }) => {
                if *c == 0 {
                    return false;
                }
                // (a/b) / (c/d) = a*d / (b*c)
                let num = a * d;
                let den = b * c;
                den != 0 && num % den == 0 && num / den >= 0
            }
            _ => false,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Infinity, Rational::Infinity) => Ordering::Equal,
            (Rational::Infinity, _) => Ordering::Greater,
            (_, Rational::Infinity) => Ordering::Less,
            (Rational::Finite { num: a, den: b }, Rational::Finite { num: c, den: d }) => {
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Infinity => write!(f, "inf"),
            Rational::Finite { num, den: 1 } => write!(f, "{num}"),
            Rational::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "infinity" || s == "oo" {
            return Ok(Rational::Infinity);
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|_| format!("bad numerator {n:?}"))?;
            let den: i64 = d.trim().parse().map_err(|_| format!("bad denominator {d:?}"))?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(num, den))
        } else {
            let num: i64 = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
            Ok(Rational::integer(num))
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(Rational::integer(n)),
            Repr::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(rename = "mixed")]
    MixedChar,
    #[serde(rename = "equal")]
    EqualChar,
}

/// Parameters of the coefficient ring: prime `p`, characteristic regime,
/// ramification index `N` and working precision `M` (elements are known
/// modulo `pi^M`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub mode: Mode,
    #[serde(rename = "N")]
    pub ram: u32,
    #[serde(rename = "M")]
    pub prec: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn new(p: u64, mode: Mode, ram: u32, prec: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::BadSpec(format!("p = {p} is not prime")));
        }
        if ram == 0 {
            return Err(RingError::BadSpec("N must be >= 1".into()));
        }
        if prec == 0 {
            return Err(RingError::BadSpec("M must be >= 1".into()));
        }
        Ok(RingSpec { p, mode, ram, prec })
    }

    pub fn mixed(p: u64, ram: u32, prec: u32) -> Self {
        Self::new(p, Mode::MixedChar, ram, prec).unwrap()
    }

    pub fn equal(p: u64, ram: u32, prec: u32) -> Self {
        Self::new(p, Mode::EqualChar, ram, prec).unwrap()
    }

    pub fn validate(&self) -> Result<(), RingError> {
        Self::new(self.p, self.mode, self.ram, self.prec).map(|_| ())
    }
}

/// A truncated element of the ring described by a [`RingSpec`], stored as
/// exactly `M` digits in `[0, p)`, little-endian in powers of `pi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    spec: RingSpec,
    digits: Vec<u64>,
}

impl RingElement {
    /// Build an element from arbitrary signed digits, normalizing with the
    /// carry rule. Digits beyond `M` are dropped (they sit above the
    /// working precision); missing digits are zero.
    pub fn make(spec: RingSpec, digits: &[i64]) -> Self {
        let m = spec.prec as usize;
        let mut acc: Vec<i128> = vec![0; m];
        for (q, &d) in digits.iter().enumerate() {
            if q < m {
                acc[q] = d as i128;
            }
        }
        Self::normalize(spec, acc)
    }

    fn normalize(spec: RingSpec, mut acc: Vec<i128>) -> Self {
        let m = spec.prec as usize;
        let p = spec.p as i128;
        let n = spec.ram as usize;
        let mut digits = vec![0u64; m];
        for q in 0..m {
            let v = acc[q];
            let r = v.rem_euclid(p);
            let carry = (v - r) / p;
            digits[q] = r as u64;
            if carry != 0 && matches!(spec.mode, Mode::MixedChar) {
                // pi^N = p: overflow at q moves N positions up. Carries
                // landing at or above M are beyond the precision.
                if q + n < m {
                    acc[q + n] += carry;
                }
            }
        }
        RingElement { spec, digits }
    }

    pub fn zero(spec: RingSpec) -> Self {
        RingElement {
            digits: vec![0; spec.prec as usize],
            spec,
        }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::make(spec, &[1])
    }

    pub fn from_integer(spec: RingSpec, n: i64) -> Self {
        Self::make(spec, &[n])
    }

    /// `pi^k` for `0 <= k`; zero when `k >= M`.
    pub fn pi_power(spec: RingSpec, k: u32) -> Self {
        let mut z = Self::zero(spec);
        if (k as usize) < z.digits.len() {
            z.digits[k as usize] = 1;
        }
        z
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    fn check_spec(&self, other: &RingElement) -> Result<(), RingError> {
        if self.spec != other.spec {
            return Err(RingError::SpecMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_spec(other)?;
        let acc: Vec<i128> = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| a as i128 + b as i128)
            .collect();
        Ok(Self::normalize(self.spec, acc))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_spec(other)?;
        let acc: Vec<i128> = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| a as i128 - b as i128)
            .collect();
        Ok(Self::normalize(self.spec, acc))
    }

    pub fn neg(&self) -> RingElement {
        let acc: Vec<i128> = self.digits.iter().map(|&a| -(a as i128)).collect();
        Self::normalize(self.spec, acc)
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.check_spec(other)?;
        let m = self.spec.prec as usize;
        let mut acc: Vec<i128> = vec![0; m];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.digits.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                acc[i + j] += a as i128 * b as i128;
            }
        }
        Ok(Self::normalize(self.spec, acc))
    }

    pub fn scale(&self, n: i64) -> RingElement {
        let acc: Vec<i128> = self.digits.iter().map(|&a| a as i128 * n as i128).collect();
        Self::normalize(self.spec, acc)
    }

    /// Digit index of the first nonzero digit, i.e. `nu(x) * N`.
    pub fn pi_valuation(&self) -> Option<u32> {
        self.digits.iter().position(|&d| d != 0).map(|q| q as u32)
    }

    /// Valuation normalized by `nu(p) = 1`; `None` when the element is
    /// indistinguishable from zero at this precision.
    pub fn valuation(&self) -> Option<Rational> {
        self.pi_valuation()
            .map(|q| Rational::new(q as i64, self.spec.ram as i64))
    }

    pub fn is_unit(&self) -> bool {
        self.pi_valuation() == Some(0)
    }

    /// Inverse of a unit, exact modulo `pi^M`.
    pub fn invert_unit(&self) -> Result<RingElement, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotAUnit(self.valuation()));
        }
        let p = self.spec.p;
        let inv0 = mod_pow(self.digits[0] % p, p - 2, p);
        let mut y = Self::from_integer(self.spec, inv0 as i64);
        let one = Self::one(self.spec);
        let two = Self::from_integer(self.spec, 2);
        // Newton iteration doubles the number of correct digits.
        let mut steps = 1u32;
        let mut reach = 1usize;
        while reach < self.spec.prec as usize {
            reach *= 2;
            steps += 1;
        }
        for _ in 0..steps + 1 {
            let t = two.sub(&self.mul(&y)?)?;
            y = y.mul(&t)?;
        }
        if self.mul(&y)? != one {
            return Err(RingError::NoConvergence);
        }
        Ok(y)
    }

    /// Exact division, when it exists at precision. The divisor is written
    /// `pi^k * unit`; the dividend's low `k` digits must vanish. Division
    /// by an element that is zero at precision succeeds only on a zero
    /// dividend (with quotient zero). The top `k` digits of the quotient
    /// are unknowable at precision `M` and are reported as zero.
    pub fn divide_exact(&self, divisor: &RingElement) -> Option<RingElement> {
        if self.spec != divisor.spec {
            return None;
        }
        let Some(k) = divisor.pi_valuation() else {
            return if self.is_zero() {
                Some(Self::zero(self.spec))
            } else {
                None
            };
        };
        let unit = divisor.shift_down(k)?;
        let q0 = self.mul(&unit.invert_unit().ok()?).ok()?;
        q0.shift_down(k)
    }

    /// Divide by `pi^k`: shift digits down, failing if a nonzero digit
    /// would be dropped.
    pub fn shift_down(&self, k: u32) -> Option<RingElement> {
        let k = k as usize;
        if self.digits[..k.min(self.digits.len())]
            .iter()
            .any(|&d| d != 0)
        {
            return None;
        }
        let mut digits = vec![0u64; self.spec.prec as usize];
        for q in k..self.digits.len() {
            digits[q - k] = self.digits[q];
        }
        Some(RingElement {
            spec: self.spec,
            digits,
        })
    }

    /// Multiply by `pi^k` (digits shift up, overflow beyond `M` dropped).
    pub fn shift_up(&self, k: u32) -> RingElement {
        let k = k as usize;
        let m = self.spec.prec as usize;
        let mut digits = vec![0u64; m];
        for q in 0..m.saturating_sub(k) {
            digits[q + k] = self.digits[q];
        }
        RingElement {
            spec: self.spec,
            digits,
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<RingElement, RingError> {
        let mut base = self.clone();
        let mut out = Self::one(self.spec);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(out)
    }
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut out = 1u128;
    let m = modulus as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            out = out * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = out as u64;
    base
}

/// `p^r` as a ring element: `pi^{rN}`, with the convention `p^inf = 0`.
pub fn p_power(spec: RingSpec, r: &Rational) -> Result<RingElement, RingError> {
    match r {
        Rational::Infinity => Ok(RingElement::zero(spec)),
        Rational::Finite { num, den } => {
            if *num < 0 {
                return Err(RingError::NegativeExponent(*r));
            }
            if spec.ram as i64 % den != 0 {
                return Err(RingError::IncompatibleRamification {
                    den: *den,
                    ram: spec.ram,
                });
            }
            let k = num * (spec.ram as i64 / den);
            Ok(RingElement::pi_power(
                spec,
                u32::try_from(k).unwrap_or(spec.prec),
            ))
        }
    }
}

/// `nu_p` of a nonzero integer.
pub fn int_p_valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

// ---------------------------------------------------------------------
// Serialization: {"p":3,"mode":"mixed","N":2,"M":8,"digits":[...]},
// digits little-endian, length exactly M.
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    p: u64,
    mode: Mode,
    #[serde(rename = "N")]
    ram: u32,
    #[serde(rename = "M")]
    prec: u32,
    digits: Vec<i64>,
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ElementRepr {
            p: self.spec.p,
            mode: self.spec.mode,
            ram: self.spec.ram,
            prec: self.spec.prec,
            digits: self.digits.iter().map(|&d| d as i64).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        let spec = RingSpec::new(repr.p, repr.mode, repr.ram, repr.prec)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(RingElement::make(spec, &repr.digits))
    }
}
