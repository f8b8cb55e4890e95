//! Exact arithmetic in the formal annulus `C = R[[u,v]]/(uv - c)` and the
//! node analysis for degree-`n` covers of annuli: logarithmic
//! differentials, extraction of the conductor `m` and the different `d`,
//! and the alternative-(A) checks.
//!
//! Canonical basis: `{u^i, i >= 0} ∪ {v^j, j >= 1}`, the constant stored
//! once at `u^0`. Products reduce by `u^i v^j = c^{min(i,j)} u^{i-j}`
//! (resp. `v^{j-i}`). Everything is truncated at total monomial degree
//! `T` on each side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::power_series::Series;
use crate::valuation_ring::{int_p_valuation, Mode, Rational, RingElement, RingError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnulusError {
    #[error("coefficient ring error: {0}")]
    Ring(#[from] RingError),
    #[error("annulus elements have mismatched specs, thicknesses or truncations")]
    Mismatch,
    #[error("no monomial normal form within truncation (element vanishes on the generic fiber at this precision)")]
    NoNormalForm,
    #[error("alternative (A) violated: {0}")]
    AlternativeViolated(String),
    #[error("constant term is not divisible by the thickness")]
    NotDecomposable,
    #[error("input vanishes at precision")]
    ZeroInput,
    #[error("degree must be at least 1")]
    BadDegree,
    #[error("cover images do not multiply to c^n at precision")]
    CoverInconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    U,
    V,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::U => write!(f, "u"),
            Side::V => write!(f, "v"),
        }
    }
}

/// Element of `R[[u,v]]/(uv - c)` in the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AnnulusRepr", into = "AnnulusRepr")]
pub struct AnnulusElement {
    spec: RingSpec,
    c: RingElement,
    /// `a[i]` is the coefficient of `u^i`; `a[0]` is the constant.
    a: Vec<RingElement>,
    /// `b[j - 1]` is the coefficient of `v^j`, `1 <= j <= T - 1`.
    b: Vec<RingElement>,
}

#[derive(Serialize, Deserialize)]
struct AnnulusRepr {
    spec: RingSpec,
    #[serde(rename = "T")]
    truncation: usize,
    c: Vec<i64>,
    u_coeffs: Vec<Vec<i64>>,
    v_coeffs: Vec<Vec<i64>>,
}

impl TryFrom<AnnulusRepr> for AnnulusElement {
    type Error = String;

    fn try_from(r: AnnulusRepr) -> Result<Self, String> {
        r.spec.validate().map_err(|e| e.to_string())?;
        let t = r.truncation;
        if t < 2 {
            return Err("annulus truncation must be at least 2".into());
        }
        if r.u_coeffs.len() > t || r.v_coeffs.len() > t - 1 {
            return Err(format!(
                "too many coefficients for truncation T={t}: {} u-side, {} v-side",
                r.u_coeffs.len(),
                r.v_coeffs.len()
            ));
        }
        let elem = |digits: &[i64]| RingElement::make(r.spec, digits);
        let mut a: Vec<RingElement> = r.u_coeffs.iter().map(|d| elem(d)).collect();
        a.resize(t, RingElement::zero(r.spec));
        let mut b: Vec<RingElement> = r.v_coeffs.iter().map(|d| elem(d)).collect();
        b.resize(t - 1, RingElement::zero(r.spec));
        Ok(AnnulusElement {
            spec: r.spec,
            c: elem(&r.c),
            a,
            b,
        })
    }
}

impl From<AnnulusElement> for AnnulusRepr {
    fn from(x: AnnulusElement) -> AnnulusRepr {
        AnnulusRepr {
            spec: x.spec,
            truncation: x.a.len(),
            c: x.c.digits().iter().map(|&d| d as i64).collect(),
            u_coeffs: x
                .a
                .iter()
                .map(|e| e.digits().iter().map(|&d| d as i64).collect())
                .collect(),
            v_coeffs: x
                .b
                .iter()
                .map(|e| e.digits().iter().map(|&d| d as i64).collect())
                .collect(),
        }
    }
}

impl AnnulusElement {
    pub fn zero(spec: RingSpec, c: RingElement, truncation: usize) -> Self {
        assert!(truncation >= 2, "annulus truncation must be at least 2");
        assert!(c.spec() == &spec);
        AnnulusElement {
            spec,
            c,
            a: vec![RingElement::zero(spec); truncation],
            b: vec![RingElement::zero(spec); truncation - 1],
        }
    }

    pub fn constant(spec: RingSpec, c: RingElement, truncation: usize, value: RingElement) -> Self {
        let mut x = Self::zero(spec, c, truncation);
        x.a[0] = value;
        x
    }

    pub fn one(spec: RingSpec, c: RingElement, truncation: usize) -> Self {
        Self::constant(spec, c, truncation, RingElement::one(spec))
    }

    /// The coordinate `u` (resp. `v` for `side = V`).
    pub fn coordinate(spec: RingSpec, c: RingElement, truncation: usize, side: Side) -> Self {
        let mut x = Self::zero(spec, c, truncation);
        match side {
            Side::U => x.a[1] = RingElement::one(spec),
            Side::V => x.b[0] = RingElement::one(spec),
        }
        x
    }

    /// Build from sparse terms; positive `k` is `u^k`, negative is
    /// `v^{-k}`, zero the constant.
    pub fn from_terms(
        spec: RingSpec,
        c: RingElement,
        truncation: usize,
        terms: &[(i64, &[i64])],
    ) -> Self {
        let mut x = Self::zero(spec, c, truncation);
        for (k, digits) in terms {
            let e = RingElement::make(spec, digits);
            if *k >= 0 && (*k as usize) < truncation {
                x.a[*k as usize] = e;
            } else if *k < 0 && ((-*k) as usize) < truncation {
                x.b[(-*k) as usize - 1] = e;
            }
        }
        x
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn thickness(&self) -> &RingElement {
        &self.c
    }

    pub fn truncation(&self) -> usize {
        self.a.len()
    }

    /// Coefficient of `u^i`.
    pub fn u_coeff(&self, i: usize) -> &RingElement {
        &self.a[i]
    }

    /// Coefficient of `v^j`, `j >= 1`.
    pub fn v_coeff(&self, j: usize) -> &RingElement {
        &self.b[j - 1]
    }

    /// Set the coefficient of `u^i`.
    pub fn set_u_coeff(&mut self, i: usize, e: RingElement) {
        self.a[i] = e;
    }

    /// Set the coefficient of `v^j`, `j >= 1`.
    pub fn set_v_coeff(&mut self, j: usize, e: RingElement) {
        self.b[j - 1] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|e| e.is_zero()) && self.b.iter().all(|e| e.is_zero())
    }

    fn compatible(&self, other: &Self) -> bool {
        self.spec == other.spec && self.c == other.c && self.a.len() == other.a.len()
    }

    fn coeff_mut(&mut self, k: i64) -> &mut RingElement {
        if k >= 0 {
            &mut self.a[k as usize]
        } else {
            &mut self.b[(-k) as usize - 1]
        }
    }

    /// Same element viewed at a different truncation; extending pads
    /// with zeros, restricting drops the tail.
    fn with_truncation(&self, t: usize) -> AnnulusElement {
        let mut out = AnnulusElement::zero(self.spec, self.c.clone(), t);
        for i in 0..t.min(self.a.len()) {
            out.a[i] = self.a[i].clone();
        }
        for j in 0..(t - 1).min(self.b.len()) {
            out.b[j] = self.b[j].clone();
        }
        out
    }

    /// Iterate `(signed exponent, coefficient)` over nonzero terms.
    fn terms(&self) -> impl Iterator<Item = (i64, &RingElement)> {
        self.a
            .iter()
            .enumerate()
            .map(|(i, e)| (i as i64, e))
            .chain(self.b.iter().enumerate().map(|(j, e)| (-(j as i64) - 1, e)))
            .filter(|(_, e)| !e.is_zero())
    }
}

pub fn ann_add(x: &AnnulusElement, y: &AnnulusElement) -> Result<AnnulusElement, AnnulusError> {
    if !x.compatible(y) {
        return Err(AnnulusError::Mismatch);
    }
    let mut out = x.clone();
    for (k, e) in y.terms() {
        let tgt = out.coeff_mut(k);
        *tgt = tgt.add(e)?;
    }
    Ok(out)
}

pub fn ann_sub(x: &AnnulusElement, y: &AnnulusElement) -> Result<AnnulusElement, AnnulusError> {
    ann_add(x, &ann_neg(y))
}

pub fn ann_neg(x: &AnnulusElement) -> AnnulusElement {
    let mut out = x.clone();
    for e in out.a.iter_mut().chain(out.b.iter_mut()) {
        *e = e.neg();
    }
    out
}

/// Exact product in the canonical basis: `u^i v^j = c^{min(i,j)}` times
/// the surviving coordinate power; terms past the truncation are dropped.
pub fn ann_mul(x: &AnnulusElement, y: &AnnulusElement) -> Result<AnnulusElement, AnnulusError> {
    if !x.compatible(y) {
        return Err(AnnulusError::Mismatch);
    }
    let t = x.truncation() as i64;
    // c^t for t up to 2(T-1).
    let mut c_pows = vec![RingElement::one(x.spec)];
    for _ in 1..(2 * t - 1) {
        c_pows.push(c_pows.last().unwrap().mul(&x.c)?);
    }
    let mut out = AnnulusElement::zero(x.spec, x.c.clone(), x.truncation());
    for (k1, e1) in x.terms() {
        for (k2, e2) in y.terms() {
            let i = k1.max(0) + k2.max(0);
            let j = (-k1).max(0) + (-k2).max(0);
            let drop = i.min(j);
            let k = i - j;
            if k >= t || k <= -t {
                continue;
            }
            let term = e1.mul(e2)?.mul(&c_pows[drop as usize])?;
            let tgt = out.coeff_mut(k);
            *tgt = tgt.add(&term)?;
        }
    }
    Ok(out)
}

pub fn ann_scale(x: &AnnulusElement, e: &RingElement) -> Result<AnnulusElement, AnnulusError> {
    let mut out = x.clone();
    for coef in out.a.iter_mut().chain(out.b.iter_mut()) {
        *coef = coef.mul(e)?;
    }
    Ok(out)
}

/// Number of top degrees of a truncation-`t` computation whose
/// coefficients are no longer exact at precision: dropping a degree-`t`
/// term loses, after reduction by `uv = c`, contributions of size
/// `c^{t - k}` at degree `k`. Everything at degree `<= t - 1 - fuzz` is
/// exact at precision `M`.
fn truncation_fuzz(c: &RingElement) -> usize {
    match c.pi_valuation() {
        // c = 0: the two branches decouple, nothing folds back.
        None => 0,
        // unit thickness: u and v are units and no degree bound helps;
        // computations are exact only for polynomial data.
        Some(0) => 0,
        Some(k) => c.spec().prec.div_ceil(k) as usize,
    }
}

/// Inverse of a unit (constant term a unit of `R`), by Newton iteration
/// `y <- y (2 - x y)`. The product is verified afterwards: exactly 1 on
/// the window unaffected by truncation folding, and small (of the size
/// folding can produce) on the fuzzy top degrees.
pub fn ann_invert_unit(x: &AnnulusElement) -> Result<AnnulusElement, AnnulusError> {
    if !x.a[0].is_unit() {
        return Err(AnnulusError::Ring(RingError::NotAUnit(x.a[0].valuation())));
    }
    let t = x.truncation();
    let prec = x.spec.prec as usize;
    let k_c = x.c.pi_valuation();
    let mut y = AnnulusElement::constant(
        x.spec,
        x.c.clone(),
        t,
        x.a[0].invert_unit()?,
    );
    let two = AnnulusElement::constant(x.spec, x.c.clone(), t, RingElement::from_integer(x.spec, 2));
    // Newton error terms have (degree + pi-adic) weight squaring each
    // step; iterate past every monomial surviving truncation/precision.
    let bound = 2 * prec + t * k_c.unwrap_or(0).min(x.spec.prec) as usize + t + 2;
    let steps = (usize::BITS - bound.leading_zeros()) + 2;
    for _ in 0..steps {
        let xy = ann_mul(x, &y)?;
        y = ann_mul(&y, &ann_sub(&two, &xy)?)?;
    }
    let check = ann_mul(x, &y)?;
    let fuzz = truncation_fuzz(&x.c);
    let exact_to = (t - 1).saturating_sub(fuzz);
    for (k, e) in ann_sub(&check, &AnnulusElement::one(x.spec, x.c.clone(), t))?.terms() {
        let deg = k.unsigned_abs() as usize;
        if deg <= exact_to {
            return Err(AnnulusError::Ring(RingError::NoConvergence));
        }
        let needed = k_c.unwrap_or(u32::MAX) as usize * (t - deg);
        if (e.pi_valuation().unwrap_or(x.spec.prec) as usize) < needed.min(prec) {
            return Err(AnnulusError::Ring(RingError::NoConvergence));
        }
    }
    Ok(y)
}

/// A degree-`n` cover of annuli in normal form: `x -> u^n alpha`,
/// `y -> v^n alpha^{-1}`, base thickness `b = c^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusCover {
    pub n: u64,
    pub alpha: AnnulusElement,
    pub x_image: AnnulusElement,
    pub y_image: AnnulusElement,
    pub base_thickness: RingElement,
}

pub fn make_cover(n: u64, alpha: &AnnulusElement) -> Result<AnnulusCover, AnnulusError> {
    if n == 0 {
        return Err(AnnulusError::BadDegree);
    }
    let spec = alpha.spec;
    let t = alpha.truncation();
    let c = alpha.c.clone();
    // Work above the truncation: inverting a truncated alpha loses the
    // tail, and reduction by uv = c folds that loss back down with a
    // factor c^{distance}. Multiplying by v^n shifts the safe window by
    // another n, so headroom n + fuzz keeps the window below T exact at
    // precision.
    let tw = t + n as usize + truncation_fuzz(&c);
    let alpha_w = alpha.with_truncation(tw);
    let alpha_inv_w = ann_invert_unit(&alpha_w)?;
    let u = AnnulusElement::coordinate(spec, c.clone(), tw, Side::U);
    let v = AnnulusElement::coordinate(spec, c.clone(), tw, Side::V);
    let mut un = AnnulusElement::one(spec, c.clone(), tw);
    let mut vn = un.clone();
    for _ in 0..n {
        un = ann_mul(&un, &u)?;
        vn = ann_mul(&vn, &v)?;
    }
    let x_w = ann_mul(&un, &alpha_w)?;
    let y_w = ann_mul(&vn, &alpha_inv_w)?;
    let base_thickness = c.pow(n)?;
    let prod = ann_mul(&x_w, &y_w)?.with_truncation(t);
    let expected = AnnulusElement::constant(spec, c, t, base_thickness.clone());
    if prod != expected {
        return Err(AnnulusError::CoverInconsistent);
    }
    Ok(AnnulusCover {
        n,
        alpha: alpha.clone(),
        x_image: x_w.with_truncation(t),
        y_image: y_w.with_truncation(t),
        base_thickness,
    })
}

/// Recheck `x_image * y_image = c^n` at precision by rebuilding the
/// cover with headroom above the truncation.
pub fn verify_cover_product(cover: &AnnulusCover) -> Result<bool, AnnulusError> {
    match make_cover(cover.n, &cover.alpha) {
        Ok(rebuilt) => Ok(rebuilt.x_image == cover.x_image
            && rebuilt.y_image == cover.y_image
            && rebuilt.base_thickness == cover.base_thickness),
        Err(AnnulusError::CoverInconsistent) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The coefficient `h` of `dy/y = h (dv/v)`, computed as
/// `n + alpha^{-1} (sum_j j b_j v^j - sum_i i a_i u^i)` where `a, b` are
/// the coefficients of `alpha`.
pub fn log_differential(cover: &AnnulusCover) -> Result<AnnulusElement, AnnulusError> {
    let alpha = &cover.alpha;
    let spec = alpha.spec;
    let t = alpha.truncation();
    let mut dlog = AnnulusElement::zero(spec, alpha.c.clone(), t);
    for i in 1..t {
        dlog.a[i] = alpha.a[i].scale(-(i as i64));
    }
    for j in 1..t {
        dlog.b[j - 1] = alpha.b[j - 1].scale(j as i64);
    }
    let alpha_inv = ann_invert_unit(alpha)?;
    let n_const = AnnulusElement::constant(
        spec,
        alpha.c.clone(),
        t,
        RingElement::from_integer(spec, cover.n as i64),
    );
    ann_add(&n_const, &ann_mul(&alpha_inv, &dlog)?)
}

/// Conductor and different of a node, as extracted from the logarithmic
/// differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInvariants {
    pub m: u64,
    pub side: Side,
    /// The different, canonical representative: the constant coefficient
    /// of the quotient. Only `val_d` is contractual; the unit is
    /// absorbed into `beta_unit`.
    pub d: RingElement,
    pub val_d: Rational,
    pub beta_unit: AnnulusElement,
}

/// Divide by the coordinate on `side` once. On side `U`: `a_i u^i` drops
/// to `a_i u^{i-1}` for `i >= 1`, while the constant and the `v`-side
/// need an exact division by `c` (`a_0 -> (a_0/c) v`, `b_j -> (b_j/c)
/// v^{j+1}`). Returns `None` when a division by `c` fails. The top
/// coefficient on the receiving side falls out of the truncation window
/// and is dropped.
fn divide_by_coordinate(x: &AnnulusElement, side: Side) -> Option<AnnulusElement> {
    let t = x.truncation();
    let mut out = AnnulusElement::zero(x.spec, x.c.clone(), t);
    match side {
        Side::U => {
            for i in 1..t {
                out.a[i - 1] = x.a[i].clone();
            }
            out.b[0] = x.a[0].divide_exact(&x.c)?;
            for j in 1..t - 1 {
                out.b[j] = x.b[j - 1].divide_exact(&x.c)?;
            }
            if !x.b[t - 2].is_zero() {
                x.b[t - 2].divide_exact(&x.c)?;
            }
        }
        Side::V => {
            for j in 2..t {
                out.b[j - 2] = x.b[j - 1].clone();
            }
            out.a[0] = x.b[0].clone();
            out.a[1] = x.a[0].divide_exact(&x.c)?;
            for i in 1..t - 1 {
                out.a[i + 1] = x.a[i].divide_exact(&x.c)?;
            }
            if !x.a[t - 1].is_zero() {
                x.a[t - 1].divide_exact(&x.c)?;
            }
        }
    }
    Some(out)
}

/// Find the unique `(side, m, d)` with `h = d * (coordinate)^m * beta`,
/// `beta` a unit with constant term 1. Candidates are scanned with
/// smallest `m` first and side `U` before `V` at equal `m`.
pub fn extract_m_d(h: &AnnulusElement) -> Result<NodeInvariants, AnnulusError> {
    if h.is_zero() {
        return Err(AnnulusError::ZeroInput);
    }
    let t = h.truncation();
    for m in 0..t as u64 {
        'side: for side in [Side::U, Side::V] {
            let mut q = h.clone();
            for _ in 0..m {
                match divide_by_coordinate(&q, side) {
                    Some(next) => q = next,
                    None => continue 'side,
                }
            }
            let d = q.a[0].clone();
            if d.is_zero() {
                continue;
            }
            let mut beta = AnnulusElement::zero(q.spec, q.c.clone(), t);
            let mut ok = true;
            for (k, e) in q.terms() {
                match e.divide_exact(&d) {
                    Some(quot) => *beta.coeff_mut(k) = quot,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let val_d = d.valuation().expect("d nonzero");
            return Ok(NodeInvariants {
                m,
                side,
                d,
                val_d,
                beta_unit: beta,
            });
        }
    }
    Err(AnnulusError::NoNormalForm)
}

/// Alternative (A) for a degree-`n` cover with `p | n`. Equal
/// characteristic: `m = 0` or `m` prime to `p`. Mixed characteristic:
/// `m = 0` exactly when `nu(d) = nu(n)`, and for `m > 0` additionally
/// `nu_p(m) < nu_p(n)`.
pub fn check_alternative_a(
    inv: &NodeInvariants,
    n: u64,
    spec: &RingSpec,
) -> Result<(), AnnulusError> {
    assert!(n % spec.p == 0, "alternative (A) assumes p | n");
    match spec.mode {
        Mode::EqualChar => {
            if inv.m != 0 && inv.m % spec.p == 0 {
                return Err(AnnulusError::AlternativeViolated(format!(
                    "equal characteristic requires m = 0 or m prime to p, got m = {} with p = {}",
                    inv.m, spec.p
                )));
            }
        }
        Mode::MixedChar => {
            let val_n = Rational::integer(int_p_valuation(n, spec.p) as i64);
            if inv.m == 0 {
                if inv.val_d != val_n {
                    return Err(AnnulusError::AlternativeViolated(format!(
                        "m = 0 requires (d) = (n): nu(d) = {} but nu(n) = {}",
                        inv.val_d, val_n
                    )));
                }
            } else {
                if inv.val_d == val_n {
                    return Err(AnnulusError::AlternativeViolated(format!(
                        "nu(d) = nu(n) = {} forces m = 0, got m = {}",
                        val_n, inv.m
                    )));
                }
                let vm = int_p_valuation(inv.m, spec.p);
                let vn = int_p_valuation(n, spec.p);
                if vm >= vn {
                    return Err(AnnulusError::AlternativeViolated(format!(
                        "requires nu_p(m) < nu_p(n): nu_p({}) = {} >= {} = nu_p({})",
                        inv.m, vm, vn, n
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Write `x = u P_u(u) + c P_v(v)`, with the constant absorbed as
/// `P_v(0) = a_0 / c`.
pub fn decompose_up_cp(x: &AnnulusElement) -> Result<(Series, Series), AnnulusError> {
    let t = x.truncation();
    let mut p_u = Series::zero(x.spec, t);
    for i in 1..t {
        p_u.set_coeff(i - 1, x.a[i].clone());
    }
    let mut p_v = Series::zero(x.spec, t);
    for j in 0..t {
        let num = if j == 0 { &x.a[0] } else { &x.b[j - 1] };
        match num.divide_exact(&x.c) {
            Some(q) => p_v.set_coeff(j, q),
            None => return Err(AnnulusError::NotDecomposable),
        }
    }
    Ok((p_u, p_v))
}

/// Coefficient-wise verification of the node identity
/// `sum_i zeta_i (p+i) u^i + sum_j eta_j (p-j) v^j = d * (coordinate)^m * gamma`
/// with `gamma = alpha * beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub pass: bool,
    /// Signed exponent of the first failing monomial (`u^k` for `k >= 0`,
    /// `v^{-k}` for `k < 0`).
    pub first_failure: Option<i64>,
}

pub fn node_compatibility_check(
    alpha: &AnnulusElement,
    beta: &AnnulusElement,
    d: &RingElement,
    m: u64,
    side: Side,
) -> Result<NodeReport, AnnulusError> {
    let spec = alpha.spec;
    let t = alpha.truncation();
    let p = spec.p as i64;
    let mut lhs = AnnulusElement::zero(spec, alpha.c.clone(), t);
    for i in 0..t {
        lhs.a[i] = alpha.a[i].scale(p + i as i64);
    }
    for j in 1..t {
        lhs.b[j - 1] = alpha.b[j - 1].scale(p - j as i64);
    }
    let gamma = ann_mul(alpha, beta)?;
    let coord = AnnulusElement::coordinate(spec, alpha.c.clone(), t, side);
    let mut rhs = ann_scale(&gamma, d)?;
    for _ in 0..m {
        rhs = ann_mul(&rhs, &coord)?;
    }
    // Multiplying by coordinate^m shifts information past the truncation;
    // only the window still determined on both sides is compared.
    let mi = m as i64;
    let (lo, hi) = match side {
        Side::U => (-(t as i64 - 1) + mi, t as i64 - 1),
        Side::V => (-(t as i64 - 1), t as i64 - 1 - mi),
    };
    // Scan in ascending monomial degree, u before v, so the reported
    // failure is the lowest-degree discrepancy.
    let mut order: Vec<i64> = vec![];
    for deg in 0..t as i64 {
        for k in [deg, -deg] {
            if k >= lo && k <= hi && (k >= 0 || deg > 0) {
                order.push(k);
            }
        }
    }
    for k in order {
        let l = if k >= 0 {
            &lhs.a[k as usize]
        } else {
            &lhs.b[(-k) as usize - 1]
        };
        let r = if k >= 0 {
            &rhs.a[k as usize]
        } else {
            &rhs.b[(-k) as usize - 1]
        };
        if l != r {
            return Ok(NodeReport {
                pass: false,
                first_failure: Some(k),
            });
        }
    }
    Ok(NodeReport {
        pass: true,
        first_failure: None,
    })
}
