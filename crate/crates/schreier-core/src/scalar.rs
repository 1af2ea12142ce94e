//! Exact scalar arithmetic: signs, p-th-power rationals, and radicals.
//!
//! All coordinate values in this crate are real numbers of the form
//! `sign · r^(1/p)` with `r` a nonnegative rational — that class is closed
//! under everything the decomposition pipeline does to a *single* branch
//! (rational scaling, truncation, adjoining fresh coordinates, solving for a
//! coordinate that makes a set sum to one). [`PScalar`] is that
//! representation and is the coordinate type of the public vector type.
//!
//! The one place the pipeline leaves the single-radical class is the
//! *reflected* branch of saturation: reflecting `m^(1/p)` through `t^(1/p)`
//! yields `2·m^(1/p) − t^(1/p)`, a two-term sum of p-th roots. [`Radical`]
//! closes the gap: a finite sum `Σ cᵢ·rᵢ^(1/p)` with rational coefficients
//! and pairwise inequivalent integer radicands. The class is closed under
//! addition, multiplication, and rational scaling, and — crucially — has a
//! *decidable sign*, so comparisons of norms built from such coordinates are
//! exact, never approximate.

use alloc::vec::Vec;

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// The sign of an exact real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    /// Strictly negative.
    Neg,
    /// Exactly zero.
    Zero,
    /// Strictly positive.
    Pos,
}

impl Sign {
    /// Sign of a rational number.
    pub fn of(q: &BigRational) -> Sign {
        match q.numer().sign() {
            num_bigint::Sign::Minus => Sign::Neg,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Pos,
        }
    }

    /// `-1`, `0`, or `+1`.
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    /// Parses `-1`, `0`, `+1`.
    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Neg),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Pos),
            _ => None,
        }
    }

    /// The opposite sign.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    /// Sign of a product.
    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (Sign::Pos, s) => s,
            (Sign::Neg, s) => s.flip(),
        }
    }

    /// The sign as a rational factor.
    pub fn as_rational(self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.as_i8()))
    }
}

/// `q^p` for a nonnegative integer exponent.
pub fn rational_pow(q: &BigRational, p: u32) -> BigRational {
    BigRational::new_raw(Pow::pow(q.numer(), p), Pow::pow(q.denom(), p))
}

/// True iff `n ≥ 0` is a perfect p-th power; returns the root if so.
fn perfect_nth_root(n: &BigInt, p: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(p);
    if Pow::pow(&r, p) == *n {
        Some(r)
    } else {
        None
    }
}

/// A signed real of the form `sign · mag_p^(1/p)`, with `mag_p` rational.
///
/// The p-th power of the magnitude — not the magnitude itself — is the
/// stored datum, which is why sums of p-th powers over sets (the building
/// block of the norm) stay rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PScalar {
    p: u32,
    sign: Sign,
    mag_p: BigRational,
}

impl PScalar {
    /// A new scalar; `sign` must be `Zero` exactly when `mag_p` is zero,
    /// and `mag_p` must be nonnegative.
    pub fn new(p: u32, sign: Sign, mag_p: BigRational) -> Result<PScalar> {
        if p == 0 {
            return Err(Error::PreconditionViolated("exponent p must be positive"));
        }
        if mag_p.is_negative() {
            return Err(Error::PreconditionViolated("mag_p must be nonnegative"));
        }
        if (sign == Sign::Zero) != mag_p.is_zero() {
            return Err(Error::PreconditionViolated(
                "sign is zero exactly when mag_p is zero",
            ));
        }
        Ok(PScalar { p, sign, mag_p })
    }

    /// The zero scalar in exponent context `p`.
    pub fn zero(p: u32) -> PScalar {
        PScalar {
            p,
            sign: Sign::Zero,
            mag_p: BigRational::zero(),
        }
    }

    /// The scalar whose *value* is the rational `v` (so `mag_p = |v|^p`).
    pub fn from_value(p: u32, v: &BigRational) -> PScalar {
        PScalar {
            p,
            sign: Sign::of(v),
            mag_p: rational_pow(&v.abs(), p),
        }
    }

    /// Exponent context.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Sign of the value.
    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The p-th power of the magnitude (always exact, always rational).
    pub fn mag_p(&self) -> &BigRational {
        &self.mag_p
    }

    /// True iff the value is zero.
    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// The value as a rational, when it is one (always for `p = 1`;
    /// otherwise only when `mag_p` is a perfect p-th power).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.p == 1 {
            return Some(self.sign.as_rational() * &self.mag_p);
        }
        let num = perfect_nth_root(self.mag_p.numer(), self.p)?;
        let den = perfect_nth_root(self.mag_p.denom(), self.p)?;
        Some(self.sign.as_rational() * BigRational::new(num, den))
    }

    /// The negated scalar.
    pub fn neg(&self) -> PScalar {
        PScalar {
            p: self.p,
            sign: self.sign.flip(),
            mag_p: self.mag_p.clone(),
        }
    }

    /// The scalar scaled by a rational factor (`|c|^p` multiplies `mag_p`).
    pub fn scale(&self, c: &BigRational) -> PScalar {
        let sign = self.sign.mul(Sign::of(c));
        let mag_p = if sign == Sign::Zero {
            BigRational::zero()
        } else {
            &self.mag_p * rational_pow(&c.abs(), self.p)
        };
        PScalar {
            p: self.p,
            sign,
            mag_p,
        }
    }

    /// Exact sum, when the result stays a single radical (always for zeros,
    /// equal-radical cancellation and reinforcement, and all of `p = 1`).
    /// Incommensurable radicals produce [`Error::MixedRadicals`].
    pub fn add(&self, other: &PScalar) -> Result<PScalar> {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        let sum = self.to_radical().add(&other.to_radical());
        sum.to_pscalar().ok_or(Error::MixedRadicals)
    }

    /// The value as a (single-term) radical.
    pub fn to_radical(&self) -> Radical {
        if self.is_zero() {
            return Radical::zero(self.p);
        }
        let coef = self.sign.as_rational();
        Radical::root_of(self.p, &coef, &self.mag_p)
    }

    /// Compares values exactly. Both scalars must share the exponent
    /// context (the value order of `m^(1/p)` is the order of the `m`).
    pub fn cmp_value(&self, other: &PScalar) -> Ordering {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Ordering::Equal,
                Sign::Pos => self.mag_p.cmp(&other.mag_p),
                Sign::Neg => other.mag_p.cmp(&self.mag_p),
            },
            ord => ord,
        }
    }
}

impl fmt::Display for PScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Pos => write!(f, "({})^(1/{})", self.mag_p, self.p),
            Sign::Neg => write!(f, "-({})^(1/{})", self.mag_p, self.p),
        }
    }
}

/// A finite sum `Σ cᵢ·rᵢ^(1/p)` of p-th roots with rational coefficients.
///
/// Canonical form: every radicand is a positive integer; a radicand that is
/// a perfect p-th power is folded into its coefficient (so the rational part
/// of the sum is the unique term with radicand 1); no two radicands are
/// equivalent (their ratio is never a nonzero p-th power of a rational); no
/// coefficient is zero; terms are sorted by radicand. The empty sum is zero.
///
/// Distinct radical classes are linearly independent over the rationals, so
/// *the canonical form is empty exactly when the value is zero* — that is
/// what makes equality and sign decidable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    p: u32,
    terms: Vec<(BigRational, BigInt)>,
}

impl Radical {
    /// The zero sum in exponent context `p ≥ 1`.
    pub fn zero(p: u32) -> Radical {
        assert!(p >= 1, "exponent p must be positive");
        Radical {
            p,
            terms: Vec::new(),
        }
    }

    /// The rational `q` as a radical.
    pub fn from_rational(p: u32, q: &BigRational) -> Radical {
        let mut r = Radical::zero(p);
        if !q.is_zero() {
            r.terms.push((q.clone(), BigInt::one()));
        }
        r
    }

    /// The value `coef · radicand^(1/p)` for a nonnegative rational
    /// radicand. Rational radicands are normalized to integer ones via
    /// `(a/b)^(1/p) = (a·b^(p−1))^(1/p) / b`.
    pub fn root_of(p: u32, coef: &BigRational, radicand: &BigRational) -> Radical {
        assert!(p >= 1, "exponent p must be positive");
        assert!(
            !radicand.is_negative(),
            "radicand must be nonnegative under an even or general root"
        );
        if coef.is_zero() || radicand.is_zero() {
            return Radical::zero(p);
        }
        let int_radicand = radicand.numer() * Pow::pow(radicand.denom(), p - 1);
        let coef = coef / BigRational::from_integer(radicand.denom().clone());
        let mut r = Radical::zero(p);
        r.push_term(coef, int_radicand);
        r
    }

    /// Exponent context.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The canonical terms, sorted by radicand.
    pub fn terms(&self) -> &[(BigRational, BigInt)] {
        &self.terms
    }

    /// True iff the value is zero (empty canonical form).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the value is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].1.is_one())
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 && self.terms[0].1.is_one() {
            return Some(self.terms[0].0.clone());
        }
        None
    }

    /// The value as a single signed radical, when it is one. This is total
    /// on everything the public pipeline stores in plain vectors; only the
    /// reflected saturation branch can fail here.
    pub fn to_pscalar(&self) -> Option<PScalar> {
        if self.terms.is_empty() {
            return Some(PScalar::zero(self.p));
        }
        if self.terms.len() > 1 {
            return None;
        }
        let (coef, radicand) = &self.terms[0];
        let mag_p = rational_pow(&coef.abs(), self.p) * BigRational::from_integer(radicand.clone());
        Some(PScalar {
            p: self.p,
            sign: Sign::of(coef),
            mag_p,
        })
    }

    /// Merges one `coef · radicand^(1/p)` term into the canonical form.
    fn push_term(&mut self, coef: BigRational, radicand: BigInt) {
        debug_assert!(radicand.is_positive(), "radicands are positive integers");
        if coef.is_zero() {
            return;
        }
        // A perfect-power radicand folds into the coefficient: the term
        // joins the rational class (radicand 1).
        let (coef, radicand) = match perfect_nth_root(&radicand, self.p) {
            Some(root) => (coef * BigRational::from_integer(root), BigInt::one()),
            None => (coef, radicand),
        };
        for i in 0..self.terms.len() {
            let (ref tc, ref tr) = self.terms[i];
            if let Some(ratio_root) = rational_perfect_root(tr, &radicand, self.p) {
                // Equivalent class: tr^(1/p) = ratio_root · radicand^(1/p).
                // Keep the smaller radicand as the class representative so
                // that merge order cannot change the canonical form.
                let (keep_r, new_c) = if radicand <= *tr {
                    (radicand, coef + tc * &ratio_root)
                } else {
                    // radicand^(1/p) = tr^(1/p) / ratio_root
                    (tr.clone(), tc + coef / &ratio_root)
                };
                self.terms.remove(i);
                if !new_c.is_zero() {
                    let pos = self
                        .terms
                        .binary_search_by(|(_, r)| r.cmp(&keep_r))
                        .unwrap_err();
                    self.terms.insert(pos, (new_c, keep_r));
                }
                return;
            }
        }
        let pos = self
            .terms
            .binary_search_by(|(_, r)| r.cmp(&radicand))
            .unwrap_err();
        self.terms.insert(pos, (coef, radicand));
    }

    /// Exact sum.
    pub fn add(&self, other: &Radical) -> Radical {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        let mut out = self.clone();
        for (c, r) in &other.terms {
            out.push_term(c.clone(), r.clone());
        }
        out
    }

    /// Exact difference.
    pub fn sub(&self, other: &Radical) -> Radical {
        self.add(&other.neg())
    }

    /// Exact negation.
    pub fn neg(&self) -> Radical {
        Radical {
            p: self.p,
            terms: self.terms.iter().map(|(c, r)| (-c, r.clone())).collect(),
        }
    }

    /// Scaling by a rational factor.
    pub fn scale(&self, c: &BigRational) -> Radical {
        if c.is_zero() {
            return Radical::zero(self.p);
        }
        Radical {
            p: self.p,
            terms: self.terms.iter().map(|(tc, r)| (tc * c, r.clone())).collect(),
        }
    }

    /// Exact product (radicands multiply, classes re-merge).
    pub fn mul(&self, other: &Radical) -> Radical {
        assert_eq!(self.p, other.p, "exponent contexts must match");
        let mut out = Radical::zero(self.p);
        for (ac, ar) in &self.terms {
            for (bc, br) in &other.terms {
                out.push_term(ac * bc, ar * br);
            }
        }
        out
    }

    /// `self^k` for a nonnegative integer exponent.
    pub fn pow(&self, k: u32) -> Radical {
        let mut out = Radical::from_rational(self.p, &BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `|self|^p` — the p-th power of the absolute value, still a radical
    /// (and a plain rational whenever `self` is a single term).
    pub fn abs_pow_p(&self) -> Radical {
        let powered = self.pow(self.p);
        // v^p already has the right magnitude; for odd p it carries the sign
        // of v, which |v|^p must not.
        if self.p % 2 == 1 && self.sign() == Sign::Neg {
            powered.neg()
        } else {
            powered
        }
    }

    /// The exact sign of the value.
    ///
    /// Fast paths cover the empty sum, single terms, and two terms (where
    /// comparing `|c₁|^p·r₁` against `|c₂|^p·r₂` decides). Beyond that the
    /// sign is pinned by interval refinement: rational enclosures of each
    /// root at increasing precision. Refinement terminates because a
    /// nonempty canonical form never has value zero (linear independence of
    /// inequivalent radical classes over the rationals).
    pub fn sign(&self) -> Sign {
        match self.terms.len() {
            0 => return Sign::Zero,
            1 => return Sign::of(&self.terms[0].0),
            _ => {}
        }
        let mut signs = self.terms.iter().map(|(c, _)| Sign::of(c));
        let first = signs.next().expect("nonempty");
        if signs.all(|s| s == first) {
            // Positive radicands: every term carries its coefficient's sign.
            return first;
        }
        if self.terms.len() == 2 {
            let (c1, r1) = &self.terms[0];
            let (c2, r2) = &self.terms[1];
            // Opposite signs here, so the larger magnitude wins; magnitudes
            // compare as their p-th powers, which are rational.
            let m1 = rational_pow(&c1.abs(), self.p) * BigRational::from_integer(r1.clone());
            let m2 = rational_pow(&c2.abs(), self.p) * BigRational::from_integer(r2.clone());
            return match m1.cmp(&m2) {
                Ordering::Greater => Sign::of(c1),
                Ordering::Less => Sign::of(c2),
                // Equal magnitudes with opposite signs would mean the
                // radicands are equivalent, contradicting canonical form.
                Ordering::Equal => unreachable!("canonical form excludes cancelling terms"),
            };
        }
        let mut bits: u32 = 8;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return Sign::Pos;
            }
            if hi.is_negative() {
                return Sign::Neg;
            }
            bits = bits.checked_mul(2).expect("precision overflow");
        }
    }

    /// A rational enclosure `lo ≤ value ≤ hi` with width shrinking in
    /// `bits`.
    fn enclose(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let scale = BigInt::one() << bits;
        let scale_p = Pow::pow(&scale, self.p);
        for (c, r) in &self.terms {
            // floor((r · 2^(p·bits))^(1/p)) / 2^bits ≤ r^(1/p), and the
            // root of the next integer over the same denominator is ≥ it.
            let root_lo = (r * &scale_p).nth_root(self.p);
            let root_hi = &root_lo + 1u32;
            let root_lo = BigRational::new(root_lo, scale.clone());
            let root_hi = BigRational::new(root_hi, scale.clone());
            if c.is_positive() {
                lo += c * &root_lo;
                hi += c * &root_hi;
            } else {
                lo += c * &root_hi;
                hi += c * &root_lo;
            }
        }
        (lo, hi)
    }

    /// Exact three-way comparison of values.
    pub fn cmp_value(&self, other: &Radical) -> Ordering {
        match self.sub(other).sign() {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{r}^(1/{})", self.p)?;
            }
        }
        Ok(())
    }
}

/// If `a/b` is the p-th power of a positive rational, returns that root
/// (so `a^(1/p) = root · b^(1/p)`); `a`, `b` positive integers.
fn rational_perfect_root(a: &BigInt, b: &BigInt, p: u32) -> Option<BigRational> {
    let g = a.gcd(b);
    let (ar, br) = (a / &g, b / &g);
    let num = perfect_nth_root(&ar, p)?;
    let den = perfect_nth_root(&br, p)?;
    Some(BigRational::new(num, den))
}
