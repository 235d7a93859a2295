//! Exact scalar arithmetic and truncated multivariate power series.
//!
//! Coefficients live in Q with q and ħ specialized to fixed rationals, so
//! every identity checked downstream is an exact identity of rational
//! numbers. Variables are the Kähler parameters z_i, indexed by the content
//! range of a diagram; series are truncated in total degree.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses "p/q" or "p" into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidArgument(format_args_to_string(s)))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidArgument(format_args_to_string(s)))?;
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero denominator".to_string()));
    }
    Ok(Rational::new(n, d))
}

fn format_args_to_string(s: &str) -> String {
    let mut out = String::from("cannot parse rational \"");
    out.push_str(s);
    out.push('"');
    out
}

/// Renders a rational as "p" or "p/q" with positive denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

pub fn rational_pow(base: &Rational, exp: i64) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    let mut acc = Rational::one();
    let b = if exp > 0 {
        base.clone()
    } else {
        base.recip()
    };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// The exact rational point (q, ħ) all series coefficients are evaluated at.
///
/// Construction rejects 0, ±1 and any multiplicative dependence
/// ħ^a q^b = 1 with |a|, |b| ≤ 64, (a, b) ≠ (0, 0), so a factor
/// (1 − ħ^a q^b) met in a vertex-function weight vanishes exactly
/// when a = b = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationContext {
    q: Rational,
    hbar: Rational,
}

const INDEPENDENCE_BOUND: i64 = 64;

impl SpecializationContext {
    pub fn new(q: Rational, hbar: Rational) -> Result<Self> {
        for (name, v) in [("q", &q), ("hbar", &hbar)] {
            if v.is_zero() || v.abs().is_one() {
                return Err(Error::DegenerateContext(format_deg(name, v)));
            }
        }
        // Cheap log prefilter; exact confirmation only for near-hits.
        let lq = to_f64_abs_log(&q);
        let lh = to_f64_abs_log(&hbar);
        for a in -INDEPENDENCE_BOUND..=INDEPENDENCE_BOUND {
            for b in -INDEPENDENCE_BOUND..=INDEPENDENCE_BOUND {
                if a == 0 && b == 0 {
                    continue;
                }
                let v = (a as f64) * lh + (b as f64) * lq;
                if libm::fabs(v) < 1e-9 {
                    let exact = rational_pow(&hbar, a) * rational_pow(&q, b);
                    if exact.is_one() {
                        return Err(Error::DegenerateContext(
                            "hbar and q are multiplicatively dependent".to_string(),
                        ));
                    }
                }
            }
        }
        Ok(SpecializationContext { q, hbar })
    }

    /// The default context q = 3/7, ħ = 5/11.
    pub fn default_context() -> Self {
        SpecializationContext::new(rat(3, 7), rat(5, 11)).expect("default context is generic")
    }

    /// Additional generic contexts for re-running exact suites.
    pub fn alternate_contexts() -> Vec<Self> {
        vec![
            SpecializationContext::new(rat(2, 9), rat(7, 5)).expect("generic"),
            SpecializationContext::new(rat(5, 3), rat(4, 9)).expect("generic"),
        ]
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    pub fn q_pow(&self, e: i64) -> Rational {
        rational_pow(&self.q, e)
    }

    pub fn hbar_pow(&self, e: i64) -> Rational {
        rational_pow(&self.hbar, e)
    }

    /// (ħ/q)^e
    pub fn hq_pow(&self, e: i64) -> Rational {
        rational_pow(&(self.hbar.clone() / self.q.clone()), e)
    }

    /// ħ^a q^b
    pub fn hq_monomial(&self, a: i64, b: i64) -> Rational {
        self.hbar_pow(a) * self.q_pow(b)
    }
}

fn format_deg(name: &str, v: &Rational) -> String {
    let mut s = String::from(name);
    s.push_str(" = ");
    s.push_str(&format_rational(v));
    s
}

fn to_f64_abs_log(r: &Rational) -> f64 {
    let n = r.numer().abs().to_f64().unwrap_or(f64::MAX);
    let d = r.denom().abs().to_f64().unwrap_or(f64::MAX);
    libm::log(n) - libm::log(d)
}

// ---------------------------------------------------------------------------
// q-Pochhammer symbols
// ---------------------------------------------------------------------------

/// (x)_d with vanishing factors tracked separately: the symbol equals
/// `value · 0^{vanishing}`, where a negative count means vanishing factors
/// in denominator position (a pole).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PochFactor {
    pub vanishing: i32,
    pub value: Rational,
}

impl PochFactor {
    pub fn one() -> Self {
        PochFactor {
            vanishing: 0,
            value: Rational::one(),
        }
    }

    pub fn mul_assign(&mut self, other: &PochFactor) {
        self.vanishing += other.vanishing;
        self.value *= &other.value;
    }

    pub fn div_assign(&mut self, other: &PochFactor) {
        self.vanishing -= other.vanishing;
        self.value /= &other.value;
    }

    /// Collapses the tracked form to a plain rational.
    pub fn finish(self) -> Result<Rational> {
        match self.vanishing.cmp(&0) {
            Ordering::Greater => Ok(Rational::zero()),
            Ordering::Equal => Ok(self.value),
            Ordering::Less => Err(Error::Pole("vanishing factor in denominator".to_string())),
        }
    }
}

/// (x)_d = φ(x)/φ(x q^d) at the specialized point, for any integer d.
///
/// d ≥ 0 gives ∏_{i=0}^{d−1} (1 − x q^i); d < 0 gives
/// 1/∏_{k=1}^{−d} (1 − x q^{−k}). Exactly vanishing factors are counted
/// in `vanishing` rather than multiplied in.
pub fn pochhammer_ext(x: &Rational, d: i64, ctx: &SpecializationContext) -> PochFactor {
    let mut out = PochFactor::one();
    if d >= 0 {
        let mut xq = x.clone();
        for _ in 0..d {
            let factor = Rational::one() - &xq;
            if factor.is_zero() {
                out.vanishing += 1;
            } else {
                out.value *= factor;
            }
            xq *= ctx.q();
        }
    } else {
        let qinv = ctx.q().recip();
        let mut xq = x.clone();
        for _ in 0..(-d) {
            xq *= &qinv;
            let factor = Rational::one() - &xq;
            if factor.is_zero() {
                out.vanishing -= 1;
            } else {
                out.value /= factor;
            }
        }
    }
    out
}

/// (x)_d for x = ħ^{x_h} q^{x_q}; zero is returned as the zero rational,
/// a vanishing denominator factor is an error.
pub fn pochhammer_hq(x_h: i64, x_q: i64, d: i64, ctx: &SpecializationContext) -> Result<Rational> {
    pochhammer_ext(&ctx.hq_monomial(x_h, x_q), d, ctx).finish()
}

/// (ħ; q)_k / (q; q)_k, the coefficient of x^k in ∏_{i≥0} (1−ħxq^i)/(1−xq^i).
pub fn box_chain_coefficient(k: u32, ctx: &SpecializationContext) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        let num = Rational::one() - ctx.hq_monomial(1, j);
        let den = Rational::one() - ctx.q_pow(j + 1);
        acc *= num / den;
    }
    acc
}

// ---------------------------------------------------------------------------
// Monomials and truncated series
// ---------------------------------------------------------------------------

/// Inclusive content range lo..=hi indexing the variables z_lo, ..., z_hi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarRange {
    pub lo: i32,
    pub hi: i32,
}

impl VarRange {
    pub fn new(lo: i32, hi: i32) -> Self {
        assert!(lo <= hi, "empty variable range");
        VarRange { lo, hi }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, content: i32) -> Option<usize> {
        if content < self.lo || content > self.hi {
            None
        } else {
            Some((content - self.lo) as usize)
        }
    }

    pub fn content(&self, index: usize) -> i32 {
        self.lo + index as i32
    }

    pub fn contents(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn zero(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate power series truncated at a total-degree cap, with exact
/// rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    range: VarRange,
    cap: u32,
    terms: BTreeMap<Mono, Rational>,
}

impl TruncatedSeries {
    pub fn zero(range: VarRange, cap: u32) -> Self {
        TruncatedSeries {
            range,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(range: VarRange, cap: u32) -> Self {
        Self::constant(range, cap, Rational::one())
    }

    pub fn constant(range: VarRange, cap: u32, c: Rational) -> Self {
        let mut s = Self::zero(range, cap);
        if !c.is_zero() {
            s.terms.insert(Mono::zero(range.len()), c);
        }
        s
    }

    pub fn range(&self) -> VarRange {
        self.range
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, expo: &Mono) -> Rational {
        self.terms.get(expo).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Mono::zero(self.range.len()))
    }

    pub fn insert_term(&mut self, expo: Mono, coeff: Rational) {
        assert_eq!(expo.0.len(), self.range.len());
        if expo.degree() > self.cap || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(expo);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        if self.range != other.range || self.cap != other.cap {
            return Err(Error::MismatchedSeries);
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        if c.is_zero() {
            return Self::zero(self.range, self.cap);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn negate(&self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.range, self.cap);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > self.cap {
                    continue;
                }
                let expo: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.insert_term(Mono(expo), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the cap; the constant term must be nonzero.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        // Newton iteration g ← g(2 − f g) doubles the valid order each step.
        let mut g = Self::constant(self.range, self.cap, c0.recip());
        let two = Self::constant(self.range, self.cap, rat_int(2));
        let mut order = 1u32;
        while order <= self.cap {
            let fg = self.mul(&g)?;
            g = g.mul(&two.sub(&fg)?)?;
            order *= 2;
        }
        Ok(g)
    }

    /// Applies z_i → q^{e_i} z_i: the coefficient of z^d picks up q^{⟨e, d⟩}.
    pub fn q_shift(&self, e: &[i64], ctx: &SpecializationContext) -> TruncatedSeries {
        assert_eq!(e.len(), self.range.len());
        let mut out = Self::zero(self.range, self.cap);
        for (m, c) in &self.terms {
            let pairing: i64 = m.0.iter().zip(e).map(|(d, ei)| (*d as i64) * ei).sum();
            out.insert_term(m.clone(), c * ctx.q_pow(pairing));
        }
        out
    }

    /// Exact evaluation at the rational point `point` (indexed by the range).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.range.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (d, p) in m.0.iter().zip(point) {
                for _ in 0..*d {
                    term *= p;
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluates in f64, for numeric cross-checks.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (d, p) in m.0.iter().zip(point) {
                term *= libm::pow(*p, *d as f64);
            }
            acc += term;
        }
        acc
    }

    /// One monomial term c·z^expo (signed exponents must be nonnegative here).
    pub fn monomial(range: VarRange, cap: u32, expo: &[u32], c: Rational) -> TruncatedSeries {
        let mut s = Self::zero(range, cap);
        s.insert_term(Mono(expo.to_vec()), c);
        s
    }

    /// Truncated expansion of (1 − c·z^expo)^{−1} = Σ_k c^k z^{k·expo}.
    pub fn geometric_inverse(
        range: VarRange,
        cap: u32,
        expo: &[u32],
        c: &Rational,
    ) -> Result<TruncatedSeries> {
        let deg: u32 = expo.iter().sum();
        if deg == 0 {
            return Err(Error::InvalidArgument(
                "geometric expansion needs positive degree".to_string(),
            ));
        }
        let mut s = Self::zero(range, cap);
        let mut coeff = Rational::one();
        let mut k = 0u32;
        while k * deg <= cap {
            let e: Vec<u32> = expo.iter().map(|x| x * k).collect();
            s.insert_term(Mono(e), coeff.clone());
            coeff *= c;
            k += 1;
        }
        Ok(s)
    }

    /// Truncated (1 − c·z^expo), a two-term polynomial.
    pub fn binomial_factor(
        range: VarRange,
        cap: u32,
        expo: &[u32],
        c: &Rational,
    ) -> TruncatedSeries {
        let mut s = Self::one(range, cap);
        s.insert_term(Mono(expo.to_vec()), -c.clone());
        s
    }

    /// Truncated ∏_{i=0}^{∞} (1 − ħ·c·z^expo·q^i)/(1 − c·z^expo·q^i)
    /// via the q-binomial theorem: Σ_k (ħ;q)_k/(q;q)_k (c z^expo)^k.
    pub fn pochhammer_chain(
        range: VarRange,
        cap: u32,
        expo: &[u32],
        c: &Rational,
        ctx: &SpecializationContext,
    ) -> Result<TruncatedSeries> {
        let deg: u32 = expo.iter().sum();
        if deg == 0 {
            return Err(Error::InvalidArgument(
                "chain expansion needs positive degree".to_string(),
            ));
        }
        let mut s = Self::zero(range, cap);
        let mut cpow = Rational::one();
        let mut k = 0u32;
        while k * deg <= cap {
            let e: Vec<u32> = expo.iter().map(|x| x * k).collect();
            s.insert_term(Mono(e), box_chain_coefficient(k, ctx) * &cpow);
            cpow *= c;
            k += 1;
        }
        Ok(s)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            for (i, d) in m.0.iter().enumerate() {
                if *d > 0 {
                    write!(f, "*z[{}]^{}", self.range.content(i), d)?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials in ħ
// ---------------------------------------------------------------------------

/// Integer-power Laurent polynomial in ħ with rational coefficients,
/// independent of any specialization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(power: i64, coeff: Rational) -> Self {
        let mut t = BTreeMap::new();
        if !coeff.is_zero() {
            t.insert(power, coeff);
        }
        LaurentPoly { terms: t }
    }

    pub fn add_term(&mut self, power: i64, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(power).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                out.add_term(pa + pb, &(ca * cb));
            }
        }
        out
    }

    /// Multiplies by ħ^k.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (p, c) in &self.terms {
            out.add_term(p + k, c);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, hbar: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (p, c) in &self.terms {
            acc += c * rational_pow(hbar, *p);
        }
        acc
    }

    /// Elementary symmetric polynomial e_r of the monomials ħ^{m_1}, ..., ħ^{m_k}.
    pub fn elementary_symmetric(powers: &[i64], r: usize) -> LaurentPoly {
        // dp[j] = e_j of the prefix
        let mut dp: Vec<LaurentPoly> = Vec::with_capacity(r + 1);
        dp.push(LaurentPoly::one());
        for _ in 0..r {
            dp.push(LaurentPoly::zero());
        }
        for m in powers {
            for j in (1..=r).rev() {
                let bumped = dp[j - 1].shift(*m);
                dp[j] = dp[j].add(&bumped);
            }
        }
        dp.swap_remove(r)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*h", format_rational(c))?,
                _ => write!(f, "{}*h^{}", format_rational(c), p)?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------

/// Elementary symmetric polynomial of rational values.
pub fn elementary_symmetric_rational(values: &[Rational], r: usize) -> Rational {
    if r > values.len() {
        return Rational::zero();
    }
    let mut dp: Vec<Rational> = vec![Rational::zero(); r + 1];
    dp[0] = Rational::one();
    for v in values {
        for j in (1..=r.min(values.len())).rev() {
            let add = dp[j - 1].clone() * v;
            dp[j] += add;
        }
    }
    dp.swap_remove(r)
}
