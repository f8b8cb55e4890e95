//! Truncated formal power series over a [`RingSpec`] and the earnestness
//! calculus: the `p^r`-earnest predicate, the explicit lifting
//! constructor, the formal-disk exactness criterion and the Frobenius
//! conjugator.
//!
//! Indexing convention, used everywhere below: a differential form is
//! written `delta(dx) = (sum_j b_{j+1} u^j) du`, so the coefficient
//! stored at series index `j` is `b_{j+1}`. That way `b_i` pairs with the
//! series coefficient `a_i`, and the two branch equations
//!
//! * `i != 0 mod p`:  `a_i = p^r * b_i / i`
//! * `i  = 0 mod p`:  `b_i = (i / p^r) * a_i`
//!
//! read off directly. An off-by-one here silently breaks both branches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::valuation_ring::{
    int_p_valuation, p_power, Mode, Rational, RingElement, RingError, RingSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient ring error: {0}")]
    Ring(#[from] RingError),
    #[error("earnestness degree {0} outside [0, 1]")]
    DegreeOutOfRange(Rational),
    #[error("operation requires an equal-characteristic spec")]
    WrongCharacteristic,
    #[error("form is not exact: coefficient at index {index} is nonzero (index = -1 mod p)")]
    NotExact { index: usize },
    #[error("series are not conjugate: {0}")]
    NotConjugate(String),
    #[error("dv is not a basis (derivative constant coefficient is not a unit)")]
    NotABasis,
    #[error("series have mismatched specs or truncations")]
    Mismatch,
}

/// Truncated power series: coefficient of `u^i` at index `i`, truncation
/// `T = coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct Series {
    spec: RingSpec,
    coeffs: Vec<RingElement>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    spec: RingSpec,
    #[serde(rename = "T")]
    truncation: usize,
    coeffs: Vec<RingElement>,
}

impl TryFrom<SeriesRepr> for Series {
    type Error = String;

    fn try_from(repr: SeriesRepr) -> Result<Self, String> {
        if repr.coeffs.len() != repr.truncation {
            return Err(format!(
                "series declares T={} but has {} coefficients",
                repr.truncation,
                repr.coeffs.len()
            ));
        }
        repr.spec.validate().map_err(|e| e.to_string())?;
        if repr.coeffs.iter().any(|c| c.spec() != &repr.spec) {
            return Err("series coefficients do not share the declared spec".into());
        }
        Ok(Series {
            spec: repr.spec,
            coeffs: repr.coeffs,
        })
    }
}

impl From<Series> for SeriesRepr {
    fn from(s: Series) -> SeriesRepr {
        SeriesRepr {
            spec: s.spec,
            truncation: s.coeffs.len(),
            coeffs: s.coeffs,
        }
    }
}

impl Series {
    pub fn new(spec: RingSpec, coeffs: Vec<RingElement>) -> Self {
        assert!(coeffs.iter().all(|c| c.spec() == &spec));
        Series { spec, coeffs }
    }

    pub fn zero(spec: RingSpec, truncation: usize) -> Self {
        Series {
            spec,
            coeffs: vec![RingElement::zero(spec); truncation],
        }
    }

    /// Build from sparse `(index, digits)` pairs.
    pub fn from_terms(spec: RingSpec, truncation: usize, terms: &[(usize, &[i64])]) -> Self {
        let mut s = Self::zero(spec, truncation);
        for (i, digits) in terms {
            if *i < truncation {
                s.coeffs[*i] = RingElement::make(spec, digits);
            }
        }
        s
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &RingElement {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, v: RingElement) {
        assert!(v.spec() == &self.spec);
        self.coeffs[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        if self.spec != other.spec || self.truncation() != other.truncation() {
            return Err(SeriesError::Mismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_, _>>()?;
        Ok(Series {
            spec: self.spec,
            coeffs,
        })
    }
}

/// A differential form `h du`, carried by the coefficient series of `h`.
/// With the module's indexing convention the coefficient at index `j` is
/// `b_{j+1}` of `delta(dx) = (sum_j b_{j+1} u^j) du`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialForm {
    pub coefficient_series: Series,
}

impl DifferentialForm {
    pub fn new(coefficient_series: Series) -> Self {
        DifferentialForm {
            coefficient_series,
        }
    }

    /// `b_i` for `i >= 1`; zero above the truncation.
    pub fn b(&self, i: usize) -> RingElement {
        assert!(i >= 1);
        if i - 1 < self.coefficient_series.truncation() {
            self.coefficient_series.coeff(i - 1).clone()
        } else {
            RingElement::zero(*self.coefficient_series.spec())
        }
    }

    pub fn spec(&self) -> &RingSpec {
        self.coefficient_series.spec()
    }

    pub fn truncation(&self) -> usize {
        self.coefficient_series.truncation()
    }
}

/// Outcome of an earnestness check. `ok` holds exactly when no branch
/// equation failed; otherwise `first_failure` locates the first bad index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarnestnessVerdict {
    pub ok: bool,
    pub first_failure: Option<EarnestnessFailure>,
    /// Precision at which the branch equalities were accepted.
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarnestnessFailure {
    pub index: usize,
    pub branch: u8,
    pub lhs_digits: Vec<u64>,
    pub rhs_digits: Vec<u64>,
}

impl EarnestnessVerdict {
    fn pass(precision: u32) -> Self {
        EarnestnessVerdict {
            ok: true,
            first_failure: None,
            precision,
        }
    }

    fn fail(precision: u32, index: usize, branch: u8, lhs: &RingElement, rhs: &RingElement) -> Self {
        EarnestnessVerdict {
            ok: false,
            first_failure: Some(EarnestnessFailure {
                index,
                branch,
                lhs_digits: lhs.digits().to_vec(),
                rhs_digits: rhs.digits().to_vec(),
            }),
            precision,
        }
    }
}

/// Formal derivative: `d(sum a_i u^i) = (sum i a_i u^{i-1}) du`. The
/// coefficient attached to index `i` of the input lands at form index
/// `i - 1`, i.e. `b_i = i * a_i`; information above the truncation is
/// dropped (the top slot of the output is zero).
pub fn derivative(f: &Series) -> DifferentialForm {
    let spec = *f.spec();
    let t = f.truncation();
    let mut out = Series::zero(spec, t);
    for i in 1..t {
        out.set_coeff(i - 1, f.coeff(i).scale(i as i64));
    }
    DifferentialForm::new(out)
}

fn check_degree(r: &Rational, spec: &RingSpec) -> Result<(), SeriesError> {
    match r {
        Rational::Infinity => Err(SeriesError::DegreeOutOfRange(*r)),
        Rational::Finite { num, den } => {
            if *num < 0 || Rational::new(*num, *den) > Rational::integer(1) {
                return Err(SeriesError::DegreeOutOfRange(*r));
            }
            if spec.ram as i64 % den != 0 {
                return Err(SeriesError::Ring(RingError::IncompatibleRamification {
                    den: *den,
                    ram: spec.ram,
                }));
            }
            Ok(())
        }
    }
}

/// `(i / p^r) * x` computed as `p^{nu_p(i) - r} * (i / p^{nu_p(i)}) * x`.
/// Well-formed for `p | i` because `r <= 1 <= nu_p(i)`.
fn div_i_by_p_r(
    i: usize,
    r: &Rational,
    x: &RingElement,
    spec: RingSpec,
) -> Result<RingElement, SeriesError> {
    let v = int_p_valuation(i as u64, spec.p);
    let tame = (i as u64) / spec.p.pow(v);
    let exp = Rational::integer(v as i64).sub(r);
    let factor = p_power(spec, &exp)?;
    Ok(factor.mul(&x.scale(tame as i64))?)
}

/// The `p^r`-earnestness check: for every `1 <= i < T`,
/// `a_i = p^r b_i / i` off the `p`-multiples and `b_i = (i/p^r) a_i` on
/// them, all equalities at precision `M`.
pub fn is_pr_earnest(
    f: &Series,
    delta: &DifferentialForm,
    r: &Rational,
) -> Result<EarnestnessVerdict, SeriesError> {
    let spec = *f.spec();
    if delta.spec() != &spec {
        return Err(SeriesError::Mismatch);
    }
    check_degree(r, &spec)?;
    let pr = p_power(spec, r)?;
    let t = f.truncation();
    for i in 1..t {
        let a_i = f.coeff(i);
        let b_i = delta.b(i);
        if i as u64 % spec.p != 0 {
            let inv_i = RingElement::from_integer(spec, i as i64).invert_unit()?;
            let rhs = pr.mul(&b_i)?.mul(&inv_i)?;
            if a_i != &rhs {
                return Ok(EarnestnessVerdict::fail(spec.prec, i, 1, a_i, &rhs));
            }
        } else {
            let rhs = div_i_by_p_r(i, r, a_i, spec)?;
            if b_i != rhs {
                return Ok(EarnestnessVerdict::fail(spec.prec, i, 2, &b_i, &rhs));
            }
        }
    }
    Ok(EarnestnessVerdict::pass(spec.prec))
}

/// The `p^infinity`-earnestness check (equal characteristic only):
/// `a_i = g b_i / i` off the `p`-multiples and `b_i = 0` on them.
pub fn is_pinf_earnest(
    f: &Series,
    delta: &DifferentialForm,
    g: &RingElement,
) -> Result<EarnestnessVerdict, SeriesError> {
    let spec = *f.spec();
    if !matches!(spec.mode, Mode::EqualChar) {
        return Err(SeriesError::WrongCharacteristic);
    }
    if delta.spec() != &spec || g.spec() != &spec {
        return Err(SeriesError::Mismatch);
    }
    let t = f.truncation();
    for i in 1..t {
        let a_i = f.coeff(i);
        let b_i = delta.b(i);
        if i as u64 % spec.p != 0 {
            let inv_i = RingElement::from_integer(spec, i as i64).invert_unit()?;
            let rhs = g.mul(&b_i)?.mul(&inv_i)?;
            if a_i != &rhs {
                return Ok(EarnestnessVerdict::fail(spec.prec, i, 1, a_i, &rhs));
            }
        } else if !b_i.is_zero() {
            let zero = RingElement::zero(spec);
            return Ok(EarnestnessVerdict::fail(spec.prec, i, 2, &b_i, &zero));
        }
    }
    Ok(EarnestnessVerdict::pass(spec.prec))
}

/// The explicit lifting constructor: from a form and a free choice of
/// coefficients on the `p`-multiples, build the unique series that is
/// `p^r`-earnest for the correspondingly augmented form.
pub fn lift_earnest(
    delta: &DifferentialForm,
    p_part: &BTreeMap<usize, RingElement>,
    r: &Rational,
) -> Result<Series, SeriesError> {
    let spec = *delta.spec();
    check_degree(r, &spec)?;
    let pr = p_power(spec, r)?;
    let t = delta.truncation();
    let mut f = Series::zero(spec, t);
    for i in 1..t {
        if i as u64 % spec.p != 0 {
            let inv_i = RingElement::from_integer(spec, i as i64).invert_unit()?;
            f.set_coeff(i, pr.mul(&delta.b(i))?.mul(&inv_i)?);
        } else if let Some(a) = p_part.get(&i) {
            if a.spec() != &spec {
                return Err(SeriesError::Mismatch);
            }
            f.set_coeff(i, a.clone());
        }
    }
    if let Some(a0) = p_part.get(&0) {
        f.set_coeff(0, a0.clone());
    }
    Ok(f)
}

/// Replace the form's coefficients on `p`-multiples by the values forced
/// by `f`, i.e. `b_i = (i/p^r) a_i`. Together with [`lift_earnest`] this
/// realizes the lifting roundtrip.
pub fn augment_delta(
    delta: &DifferentialForm,
    f: &Series,
    r: &Rational,
) -> Result<DifferentialForm, SeriesError> {
    let spec = *f.spec();
    check_degree(r, &spec)?;
    let mut out = delta.coefficient_series.clone();
    for i in 1..f.truncation().min(out.truncation() + 1) {
        if i as u64 % spec.p == 0 {
            out.set_coeff(i - 1, div_i_by_p_r(i, r, f.coeff(i), spec)?);
        }
    }
    Ok(DifferentialForm::new(out))
}

/// Formal-disk exactness criterion in characteristic `p`: `omega` is
/// exact iff its coefficient at every index `= -1 mod p` vanishes.
pub fn is_exact(omega: &DifferentialForm) -> Result<bool, SeriesError> {
    let spec = *omega.spec();
    if !matches!(spec.mode, Mode::EqualChar) {
        return Err(SeriesError::WrongCharacteristic);
    }
    let p = spec.p as usize;
    for j in 0..omega.truncation() {
        if (j + 1) % p == 0 && !omega.coefficient_series.coeff(j).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Term-wise antiderivative of an exact form; `F` with `dF = omega` and
/// `F(0) = 0`. The output truncation is `T + 1` so no coefficient is
/// lost.
pub fn antiderivative(omega: &DifferentialForm) -> Result<Series, SeriesError> {
    let spec = *omega.spec();
    if !matches!(spec.mode, Mode::EqualChar) {
        return Err(SeriesError::WrongCharacteristic);
    }
    let p = spec.p as usize;
    let t = omega.truncation();
    let mut f = Series::zero(spec, t + 1);
    for j in 0..t {
        let c = omega.coefficient_series.coeff(j);
        if (j + 1) % p == 0 {
            if !c.is_zero() {
                return Err(SeriesError::NotExact { index: j });
            }
            continue;
        }
        let inv = RingElement::from_integer(spec, (j + 1) as i64).invert_unit()?;
        f.set_coeff(j + 1, c.mul(&inv)?);
    }
    Ok(f)
}

/// Conjugating vector-field coefficient between two lifts of a Frobenius
/// along a small extension: given `f1 = f2 mod pi^eps_index` with equal
/// derivatives, returns `mu` with `f1 - f2 = pi^eps_index * mu` and `mu`
/// supported on `p`-th-power indices only.
pub fn frobenius_conjugator(
    f1: &Series,
    f2: &Series,
    eps_index: u32,
) -> Result<Series, SeriesError> {
    let spec = *f1.spec();
    if !matches!(spec.mode, Mode::EqualChar) {
        return Err(SeriesError::WrongCharacteristic);
    }
    let diff = f1.sub(f2)?;
    let mut mu = Series::zero(spec, diff.truncation());
    for i in 0..diff.truncation() {
        let c = diff.coeff(i);
        let Some(q) = c.shift_down(eps_index) else {
            return Err(SeriesError::NotConjugate(format!(
                "f1 - f2 is not divisible by pi^{eps_index} at index {i}"
            )));
        };
        if i as u64 % spec.p != 0 && !q.is_zero() {
            return Err(SeriesError::NotConjugate(format!(
                "quotient has a nonzero coefficient at index {i} (not a multiple of p), d(mu) != 0"
            )));
        }
        mu.set_coeff(i, q);
    }
    Ok(mu)
}

/// Presentation data of the relative-Frobenius chart around a basis
/// section `v`: `X = B[u]/(u^{p^{l+1}} - v)`, `Y = B[x]/(x^{p^l} - v)`.
/// With these charts the global earnestness criterion reduces to the
/// local coefficient test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusChart {
    pub level: u32,
    /// `p^{l+1}`, the exponent presenting the source.
    pub source_exponent: u64,
    /// `p^l`, the exponent presenting the target.
    pub target_exponent: u64,
    /// True for the `v = u` chart, where the criterion is literally the
    /// local definition.
    pub identity_chart: bool,
}

pub fn global_frobenius_form(v: &Series, level: u32) -> Result<FrobeniusChart, SeriesError> {
    let dv = derivative(v);
    if !dv.b(1).is_unit() {
        return Err(SeriesError::NotABasis);
    }
    let p = v.spec().p;
    let identity_chart = {
        let mut u = Series::zero(*v.spec(), v.truncation());
        if v.truncation() > 1 {
            u.set_coeff(1, RingElement::one(*v.spec()));
        }
        *v == u
    };
    Ok(FrobeniusChart {
        level,
        source_exponent: p.pow(level + 1),
        target_exponent: p.pow(level),
        identity_chart,
    })
}
