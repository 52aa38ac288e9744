//! Elements of `PL₂(J)`: order-preserving piecewise-linear self-maps of a
//! closed dyadic interval `J` whose breakpoints are dyadic and whose slopes
//! are integer powers of two.
//!
//! Maps act on the right: `f.compose(&g)` is `α ↦ (αf)g`, so a word is read
//! left to right in application order.
//!
//! A [`PLMap`] stores its breakpoint list in canonical form (consecutive
//! segments always have different slopes), so two maps are equal exactly when
//! their stored lists are equal. Every constructor canonicalizes.
//!
//! # Membership in `PL₂^>(J)`
//!
//! [`PLMap::is_gt_identity_interior`] only inspects breakpoints and the two
//! end slopes. On each segment `f - id` is affine, so its sign on the open
//! segment is determined by its values at the segment ends. The values at
//! `lo` and `hi` are zero; if every interior breakpoint has `y > x` then
//! `f - id` is positive on the whole open interval. With no interior
//! breakpoint the map is the identity. The end-slope test (initial exponent
//! positive, final exponent negative) is then implied, and is kept as the
//! check that distinguishes the identity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{fmt_rational, Dyadic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("interval [{0}, {1}] is empty")]
    EmptyInterval(Dyadic, Dyadic),
    #[error("a map needs at least two breakpoints")]
    TooFewPoints,
    #[error("first and last breakpoints must be the fixed endpoints of the domain")]
    BadEndpoints,
    #[error("breakpoints are not strictly increasing at x = {0}")]
    NotMonotone(Dyadic),
    #[error("slope on segment starting at x = {0} is not a power of two")]
    SlopeNotPowerOfTwo(Dyadic),
    #[error("{0} lies outside the domain")]
    OutOfDomain(Dyadic),
    #[error("maps have different domains: {0} vs {1}")]
    DomainMismatch(Box<Interval>, Box<Interval>),
    #[error("{0} is not mapped onto itself")]
    NotInvariant(Interval),
    #[error("cannot parse map: {0}")]
    Parse(String),
}

/// Closed interval `[lo, hi]` with dyadic endpoints and `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self, PlError> {
        if lo >= hi {
            return Err(PlError::EmptyInterval(lo, hi));
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Dyadic::zero(),
            hi: Dyadic::one(),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn contains(&self, a: &Dyadic) -> bool {
        &self.lo <= a && a <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_fraction_string(),
            self.hi.to_fraction_string()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Breakpoint {
    pub x: Dyadic,
    pub y: Dyadic,
}

impl Breakpoint {
    pub fn new(x: Dyadic, y: Dyadic) -> Self {
        Breakpoint { x, y }
    }
}

/// Open interval with exact rational endpoints.
///
/// Fixed points of an element of `PL₂(J)` need not be dyadic: a segment of
/// slope `4` crossing the diagonal meets it at a point with denominator
/// divisible by `3`. Support endpoints are therefore general rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl OpenInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        OpenInterval { lo, hi }
    }

    pub fn from_dyadic(iv: &Interval) -> Self {
        OpenInterval {
            lo: iv.lo.to_rational(),
            hi: iv.hi.to_rational(),
        }
    }

    /// The same interval as a dyadic [`Interval`], when both ends are dyadic.
    pub fn to_dyadic(&self) -> Option<Interval> {
        let lo = Dyadic::from_rational(&self.lo)?;
        let hi = Dyadic::from_rational(&self.hi)?;
        Interval::new(lo, hi).ok()
    }

    pub fn is_disjoint(&self, other: &OpenInterval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            fmt_rational(&self.lo),
            fmt_rational(&self.hi)
        )
    }
}

/// Sorted, pairwise disjoint open intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupportSet(Vec<OpenInterval>);

impl SupportSet {
    pub fn empty() -> Self {
        SupportSet(Vec::new())
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        // both sorted: two-pointer sweep
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            if !a.is_disjoint(b) {
                return false;
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        true
    }

    /// Whether every point of the set lies inside `iv` (closed).
    pub fn is_within(&self, iv: &Interval) -> bool {
        let (lo, hi) = (iv.lo.to_rational(), iv.hi.to_rational());
        self.0.iter().all(|s| lo <= s.lo && s.hi <= hi)
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    domain: Interval,
    points: Vec<Breakpoint>,
    // slopes[i] is the exponent on [points[i].x, points[i+1].x]
    slopes: Vec<i64>,
}

impl PLMap {
    /// Validates and canonicalizes a breakpoint list.
    pub fn make(domain: Interval, points: Vec<Breakpoint>) -> Result<Self, PlError> {
        if points.len() < 2 {
            return Err(PlError::TooFewPoints);
        }
        let first = &points[0];
        let last = &points[points.len() - 1];
        if first.x != domain.lo
            || first.y != domain.lo
            || last.x != domain.hi
            || last.y != domain.hi
        {
            return Err(PlError::BadEndpoints);
        }
        let mut slopes = Vec::with_capacity(points.len() - 1);
        for w in points.windows(2) {
            let dx = &w[1].x - &w[0].x;
            let dy = &w[1].y - &w[0].y;
            if !dx.is_positive() || !dy.is_positive() {
                return Err(PlError::NotMonotone(w[1].x.clone()));
            }
            let s = dy
                .ratio_log2(&dx)
                .ok_or_else(|| PlError::SlopeNotPowerOfTwo(w[0].x.clone()))?;
            slopes.push(s);
        }
        Ok(Self::canonical(domain, points, slopes))
    }

    /// Convenience wrapper over [`PLMap::make`] on `[0, 1]`.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, PlError>
    where
        I: IntoIterator<Item = (Dyadic, Dyadic)>,
    {
        let points = pairs
            .into_iter()
            .map(|(x, y)| Breakpoint::new(x, y))
            .collect();
        Self::make(Interval::unit(), points)
    }

    pub fn identity(domain: Interval) -> Self {
        let points = vec![
            Breakpoint::new(domain.lo.clone(), domain.lo.clone()),
            Breakpoint::new(domain.hi.clone(), domain.hi.clone()),
        ];
        PLMap {
            domain,
            points,
            slopes: vec![0],
        }
    }

    pub fn unit_identity() -> Self {
        Self::identity(Interval::unit())
    }

    // Drops interior breakpoints whose neighbouring slopes agree.
    fn canonical(domain: Interval, points: Vec<Breakpoint>, slopes: Vec<i64>) -> Self {
        let n = points.len();
        let mut out_pts = Vec::with_capacity(n);
        let mut out_slopes = Vec::with_capacity(n - 1);
        for (i, p) in points.into_iter().enumerate() {
            if i == 0 || i == n - 1 || slopes[i - 1] != slopes[i] {
                if i > 0 {
                    out_slopes.push(slopes[i - 1]);
                }
                out_pts.push(p);
            }
        }
        PLMap {
            domain,
            points: out_pts,
            slopes: out_slopes,
        }
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn points(&self) -> &[Breakpoint] {
        &self.points
    }

    /// Slope exponents, one per segment.
    pub fn slope_exponents(&self) -> &[i64] {
        &self.slopes
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }

    pub fn initial_slope(&self) -> i64 {
        self.slopes[0]
    }

    pub fn final_slope(&self) -> i64 {
        self.slopes[self.slopes.len() - 1]
    }

    // Index of the segment containing `a`, preferring the right-hand one at breakpoints.
    fn segment_at(&self, a: &Dyadic) -> usize {
        let idx = self.points.partition_point(|p| &p.x <= a);
        idx.saturating_sub(1).min(self.slopes.len() - 1)
    }

    pub fn evaluate(&self, a: &Dyadic) -> Result<Dyadic, PlError> {
        if !self.domain.contains(a) {
            return Err(PlError::OutOfDomain(a.clone()));
        }
        let i = self.segment_at(a);
        let p = &self.points[i];
        Ok(&p.y + &(a - &p.x).mul_pow2(self.slopes[i]))
    }

    /// Exact image of a rational point.
    pub fn evaluate_rational(&self, a: &BigRational) -> Result<BigRational, PlError> {
        let lo = self.domain.lo.to_rational();
        let hi = self.domain.hi.to_rational();
        if a < &lo || a > &hi {
            return Err(PlError::Parse(format!(
                "{} lies outside the domain",
                fmt_rational(a)
            )));
        }
        let idx = self.points.partition_point(|p| &p.x.to_rational() <= a);
        let i = idx.saturating_sub(1).min(self.slopes.len() - 1);
        let p = &self.points[i];
        let s = self.slopes[i];
        let scale = if s >= 0 {
            BigRational::from_integer(BigInt::one() << s as u64)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << s.unsigned_abs())
        };
        Ok(p.y.to_rational() + (a - p.x.to_rational()) * scale)
    }

    /// Exact preimage `α f⁻¹`.
    pub fn preimage(&self, b: &Dyadic) -> Result<Dyadic, PlError> {
        if !self.domain.contains(b) {
            return Err(PlError::OutOfDomain(b.clone()));
        }
        let idx = self.points.partition_point(|p| &p.y <= b);
        let i = idx.saturating_sub(1).min(self.slopes.len() - 1);
        let p = &self.points[i];
        Ok(&p.x + &(b - &p.y).mul_pow2(-self.slopes[i]))
    }

    /// `α ↦ (αf)g`.
    pub fn compose(&self, g: &PLMap) -> Result<PLMap, PlError> {
        if self.domain != g.domain {
            return Err(PlError::DomainMismatch(
                Box::new(self.domain.clone()),
                Box::new(g.domain.clone()),
            ));
        }
        let f = self;
        // Sweep the middle coordinate: f's y-values merged with g's x-values.
        let (mut i, mut j) = (0usize, 0usize);
        let mut points = Vec::with_capacity(f.points.len() + g.points.len());
        let mut slopes = Vec::with_capacity(f.points.len() + g.points.len());
        loop {
            let fy = &f.points[i].y;
            let gx = &g.points[j].x;
            let (src, dst) = match fy.cmp(gx) {
                Ordering::Equal => (f.points[i].x.clone(), g.points[j].y.clone()),
                Ordering::Less => {
                    let d = &g.points[j - 1];
                    let dst = &d.y + &(fy - &d.x).mul_pow2(g.slopes[j - 1]);
                    (f.points[i].x.clone(), dst)
                }
                Ordering::Greater => {
                    let c = &f.points[i - 1];
                    let src = &c.x + &(gx - &c.y).mul_pow2(-f.slopes[i - 1]);
                    (src, g.points[j].y.clone())
                }
            };
            points.push(Breakpoint::new(src, dst));
            let last_f = i + 1 == f.points.len();
            let last_g = j + 1 == g.points.len();
            if last_f && last_g {
                break;
            }
            match fy.cmp(gx) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
            }
            // the next open piece lies in f-segment i-1 and g-segment j-1
            slopes.push(f.slopes[i - 1] + g.slopes[j - 1]);
        }
        Ok(Self::canonical(self.domain.clone(), points, slopes))
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            domain: self.domain.clone(),
            points: self
                .points
                .iter()
                .map(|p| Breakpoint::new(p.y.clone(), p.x.clone()))
                .collect(),
            slopes: self.slopes.iter().map(|s| -s).collect(),
        }
    }

    /// `n`-th power by repeated squaring; negative `n` uses the inverse.
    pub fn pow(&self, n: i64) -> PLMap {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PLMap::identity(self.domain.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `g⁻¹ f g`, whose support is `supp(f)` transported by `g`.
    pub fn conjugate(&self, g: &PLMap) -> Result<PLMap, PlError> {
        g.inverse().compose(self)?.compose(g)
    }

    pub fn commutes(&self, g: &PLMap) -> bool {
        match (self.compose(g), g.compose(self)) {
            (Ok(fg), Ok(gf)) => fg == gf,
            _ => false,
        }
    }

    /// Maximal open intervals on which `αf ≠ α`.
    pub fn support(&self) -> SupportSet {
        // Closed components of the fixed-point set, in order.
        let mut fixed: Vec<(BigRational, BigRational)> = Vec::new();
        let mut push_fixed = |a: BigRational, b: BigRational| {
            if let Some(last) = fixed.last_mut() {
                if a <= last.1 {
                    if b > last.1 {
                        last.1 = b;
                    }
                    return;
                }
            }
            fixed.push((a, b));
        };
        let disp: Vec<Dyadic> = self.points.iter().map(|p| &p.y - &p.x).collect();
        for (k, w) in self.points.windows(2).enumerate() {
            let (d0, d1) = (&disp[k], &disp[k + 1]);
            let (x0, x1) = (w[0].x.to_rational(), w[1].x.to_rational());
            if d0.is_zero() && d1.is_zero() {
                push_fixed(x0, x1);
                continue;
            }
            if d0.is_zero() {
                push_fixed(x0.clone(), x0.clone());
            }
            if d0.signum() * d1.signum() < 0 {
                // f - id is affine here; its zero is x0 - d0 / (2^s - 1)
                let s = self.slopes[k];
                let two_s = if s >= 0 {
                    BigRational::from_integer(BigInt::one() << s as u64)
                } else {
                    BigRational::new(BigInt::one(), BigInt::one() << s.unsigned_abs())
                };
                let c = &x0 - d0.to_rational() / (two_s - BigRational::one());
                push_fixed(c.clone(), c);
            }
            if d1.is_zero() {
                push_fixed(x1.clone(), x1);
            }
        }
        let gaps = fixed
            .windows(2)
            .filter(|w| w[0].1 < w[1].0)
            .map(|w| OpenInterval::new(w[0].1.clone(), w[1].0.clone()))
            .collect();
        SupportSet(gaps)
    }

    fn check_inner(&self, a: &Dyadic) -> Result<(), PlError> {
        if self.domain.contains(a) {
            Ok(())
        } else {
            Err(PlError::OutOfDomain(a.clone()))
        }
    }

    /// Exponent of the slope on the segment immediately right of `a`.
    pub fn slope_right(&self, a: &Dyadic) -> Result<i64, PlError> {
        self.check_inner(a)?;
        if a == &self.domain.hi {
            return Err(PlError::OutOfDomain(a.clone()));
        }
        Ok(self.slopes[self.segment_at(a)])
    }

    /// Exponent of the slope on the segment immediately left of `a`.
    pub fn slope_left(&self, a: &Dyadic) -> Result<i64, PlError> {
        self.check_inner(a)?;
        if a == &self.domain.lo {
            return Err(PlError::OutOfDomain(a.clone()));
        }
        let idx = self.points.partition_point(|p| &p.x < a);
        Ok(self.slopes[idx - 1])
    }

    /// The restriction to `j`, which must be mapped onto itself.
    pub fn restrict(&self, j: &Interval) -> Result<PLMap, PlError> {
        if !self.domain.contains_interval(j) {
            return Err(PlError::OutOfDomain(if self.domain.contains(&j.lo) {
                j.hi.clone()
            } else {
                j.lo.clone()
            }));
        }
        if self.evaluate(&j.lo)? != j.lo || self.evaluate(&j.hi)? != j.hi {
            return Err(PlError::NotInvariant(j.clone()));
        }
        let lo_seg = self.segment_at(&j.lo);
        let hi_seg = {
            let idx = self.points.partition_point(|p| p.x < j.hi);
            idx - 1
        };
        let mut points = vec![Breakpoint::new(j.lo.clone(), j.lo.clone())];
        points.extend(
            self.points
                .iter()
                .filter(|p| j.lo < p.x && p.x < j.hi)
                .cloned(),
        );
        points.push(Breakpoint::new(j.hi.clone(), j.hi.clone()));
        let slopes = self.slopes[lo_seg..=hi_seg].to_vec();
        debug_assert_eq!(slopes.len() + 1, points.len());
        Ok(Self::canonical(j.clone(), points, slopes))
    }

    /// Extends a map on a subinterval by the identity to all of `domain`.
    pub fn extend(&self, domain: &Interval) -> Result<PLMap, PlError> {
        if !domain.contains_interval(&self.domain) {
            return Err(PlError::DomainMismatch(
                Box::new(domain.clone()),
                Box::new(self.domain.clone()),
            ));
        }
        let mut points = Vec::with_capacity(self.points.len() + 2);
        let mut slopes = Vec::with_capacity(self.points.len() + 1);
        if domain.lo < self.domain.lo {
            points.push(Breakpoint::new(domain.lo.clone(), domain.lo.clone()));
            slopes.push(0);
        }
        points.extend(self.points.iter().cloned());
        slopes.extend(self.slopes.iter().copied());
        if self.domain.hi < domain.hi {
            points.push(Breakpoint::new(domain.hi.clone(), domain.hi.clone()));
            slopes.push(0);
        }
        Ok(Self::canonical(domain.clone(), points, slopes))
    }

    /// Membership in `PL₂^≥(J)`: `αf ≥ α` everywhere.
    pub fn is_ge_identity(&self) -> bool {
        self.points.iter().all(|p| p.y >= p.x)
    }

    /// Membership in `PL₂^>(J)`: `αf > α` on the open interval.
    pub fn is_gt_identity_interior(&self) -> bool {
        let n = self.points.len();
        self.points[1..n - 1].iter().all(|p| p.y > p.x)
            && self.initial_slope() > 0
            && self.final_slope() < 0
    }

    /// Image in `F/F′ ≅ Z²`: the exponents of the two end slopes.
    pub fn abelianize(&self) -> (i64, i64) {
        (self.initial_slope(), self.final_slope())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MapWire::from(self)).expect("map serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PlError> {
        let wire: MapWire =
            serde_json::from_value(value.clone()).map_err(|e| PlError::Parse(e.to_string()))?;
        wire.try_into()
    }

    /// CSV with columns `x,y`, values as exact decimal expansions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            out.push_str(&decimal(&p.x));
            out.push(',');
            out.push_str(&decimal(&p.y));
            out.push('\n');
        }
        out
    }
}

/// Exact decimal expansion of a dyadic (`n/2^e = n·5^e/10^e`).
pub fn decimal(d: &Dyadic) -> String {
    let e = d.exponent() as usize;
    if e == 0 {
        return d.numerator().to_string();
    }
    let scaled = d.numerator() * num_traits::pow(BigInt::from(5), e);
    let neg = scaled < BigInt::zero();
    let mut digits = if neg { -scaled } else { scaled }.to_string();
    if digits.len() <= e {
        digits = "0".repeat(e + 1 - digits.len()) + &digits;
    }
    let (int, frac) = digits.split_at(digits.len() - e);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// Panics if the domains differ; use [`PLMap::compose`] when that can happen.
impl Mul for &PLMap {
    type Output = PLMap;
    fn mul(self, rhs: &PLMap) -> PLMap {
        self.compose(rhs)
            .expect("composing maps on different domains")
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", p.x, p.y)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[{self}]")
    }
}

/// Parses whitespace- or comma-separated `x:y` pairs; the domain is read off
/// the first and last pair.
impl FromStr for PLMap {
    type Err = PlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut points = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let (x, y) = tok
                .split_once(':')
                .ok_or_else(|| PlError::Parse(format!("expected x:y, got {tok:?}")))?;
            let x: Dyadic = x.parse().map_err(|e| PlError::Parse(format!("{e}")))?;
            let y: Dyadic = y.parse().map_err(|e| PlError::Parse(format!("{e}")))?;
            points.push(Breakpoint::new(x, y));
        }
        if points.len() < 2 {
            return Err(PlError::TooFewPoints);
        }
        let domain = Interval::new(points[0].x.clone(), points[points.len() - 1].x.clone())?;
        PLMap::make(domain, points)
    }
}

#[derive(Serialize, Deserialize)]
struct MapWire {
    domain: [Dyadic; 2],
    points: Vec<[Dyadic; 2]>,
}

impl From<&PLMap> for MapWire {
    fn from(m: &PLMap) -> Self {
        MapWire {
            domain: [m.domain.lo.clone(), m.domain.hi.clone()],
            points: m
                .points
                .iter()
                .map(|p| [p.x.clone(), p.y.clone()])
                .collect(),
        }
    }
}

impl TryFrom<MapWire> for PLMap {
    type Error = PlError;
    fn try_from(w: MapWire) -> Result<Self, PlError> {
        let [lo, hi] = w.domain;
        let domain = Interval::new(lo, hi)?;
        let points = w
            .points
            .into_iter()
            .map(|[x, y]| Breakpoint::new(x, y))
            .collect();
        PLMap::make(domain, points)
    }
}

impl Serialize for PLMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        MapWire::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dy;

    fn q(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn map(s: &str) -> PLMap {
        s.parse().unwrap()
    }

    fn x0() -> PLMap {
        map("0:0 1/4:1/2 1/2:3/4 1:1")
    }

    fn x1() -> PLMap {
        map("0:0 1/2:1/2 5/8:3/4 3/4:7/8 1:1")
    }

    #[test]
    fn make_examples() {
        let id = PLMap::from_pairs([(dy(0, 0), dy(0, 0)), (dy(1, 0), dy(1, 0))]).unwrap();
        assert!(id.is_identity());
        assert_eq!(id, PLMap::unit_identity());

        let f = PLMap::from_pairs([
            (q("0"), q("0")),
            (q("1/4"), q("1/2")),
            (q("1/2"), q("3/4")),
            (q("1"), q("1")),
        ])
        .unwrap();
        assert_eq!(f.slope_exponents(), &[1, 0, -1]);
        assert_eq!(f, x0());

        // 1/3 is not dyadic, so a slope-3/2 first segment is written via 1/2:3/4
        assert!("0:0 1/3:1/2 1:1".parse::<PLMap>().is_err());
        let bad = PLMap::from_pairs([(q("0"), q("0")), (q("1/2"), q("3/4")), (q("1"), q("1"))]);
        assert!(matches!(bad, Err(PlError::SlopeNotPowerOfTwo(_))));
    }

    #[test]
    fn make_rejects_malformed() {
        assert_eq!(
            PLMap::from_pairs([(q("0"), q("0")), (q("1"), q("3/4"))]),
            Err(PlError::BadEndpoints)
        );
        assert!(matches!(
            PLMap::from_pairs([
                (q("0"), q("0")),
                (q("1/2"), q("1/2")),
                (q("1/2"), q("1/2")),
                (q("1"), q("1"))
            ]),
            Err(PlError::NotMonotone(_))
        ));
        assert_eq!(
            PLMap::from_pairs([(q("0"), q("0"))]),
            Err(PlError::TooFewPoints)
        );
        assert!(Interval::new(q("1"), q("1/2")).is_err());
    }

    #[test]
    fn collinear_points_are_dropped() {
        let f = map("0:0 1/8:1/4 1/4:1/2 1/2:3/4 3/4:7/8 1:1");
        assert_eq!(f, x0());
        assert_eq!(f.points().len(), 4);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(x0().evaluate(&q("1/4")).unwrap(), q("1/2"));
        assert_eq!(x1().evaluate(&q("5/8")).unwrap(), q("3/4"));
        assert_eq!(
            PLMap::unit_identity().evaluate(&q("3/8")).unwrap(),
            q("3/8")
        );
        assert_eq!(x0().evaluate(&q("3/4")).unwrap(), q("7/8"));
        assert!(matches!(
            x0().evaluate(&q("5/4")),
            Err(PlError::OutOfDomain(_))
        ));
    }

    // Oracle for composition: evaluate twice on a fine grid, keep the points
    // where the second difference is nonzero.
    fn grid_fit(f: &PLMap, g: &PLMap, bits: u64) -> Vec<(Dyadic, Dyadic)> {
        let n = 1i64 << bits;
        let vals: Vec<(Dyadic, Dyadic)> = (0..=n)
            .map(|k| {
                let a = dy(k, bits);
                let b = g.evaluate(&f.evaluate(&a).unwrap()).unwrap();
                (a, b)
            })
            .collect();
        let mut keep = vec![vals[0].clone()];
        for k in 1..vals.len() - 1 {
            let l = &vals[k].1 - &vals[k - 1].1;
            let rr = &vals[k + 1].1 - &vals[k].1;
            if l != rr {
                keep.push(vals[k].clone());
            }
        }
        keep.push(vals[vals.len() - 1].clone());
        keep
    }

    #[test]
    fn compose_examples() {
        let id = PLMap::unit_identity();
        assert_eq!(&x0() * &x0().inverse(), id);
        let sq = &x0() * &x0();
        let expected = vec![
            (q("0"), q("0")),
            (q("1/8"), q("1/2")),
            (q("1/4"), q("3/4")),
            (q("1/2"), q("7/8")),
            (q("1"), q("1")),
        ];
        assert_eq!(grid_fit(&x0(), &x0(), 6), expected);
        assert_eq!(sq, PLMap::from_pairs(expected).unwrap());
        assert_eq!(sq.evaluate(&q("1/2")).unwrap(), q("7/8"));
    }

    #[test]
    fn compose_domain_mismatch() {
        let half = Interval::new(q("0"), q("1/2")).unwrap();
        let e = PLMap::identity(half).compose(&x0());
        assert!(matches!(e, Err(PlError::DomainMismatch(_, _))));
    }

    #[test]
    fn inverse_examples() {
        let id = PLMap::unit_identity();
        assert_eq!(id.inverse(), id);
        assert_eq!(x0().inverse(), map("0:0 1/2:1/4 3/4:1/2 1:1"));
        assert_eq!(&x0() * &x0().inverse(), id);
        assert_eq!(x0().inverse().evaluate(&q("1/2")).unwrap(), q("1/4"));
        assert_eq!(x0().preimage(&q("1/2")).unwrap(), q("1/4"));
    }

    #[test]
    fn equality_examples() {
        assert_eq!(x0(), x0());
        assert_ne!(x0(), x1());
        assert_eq!(&x1() * &x1().inverse(), PLMap::unit_identity());
    }

    #[test]
    fn support_of_identity_and_x0() {
        assert!(PLMap::unit_identity().support().is_empty());
        let s = x0().support();
        assert_eq!(s.intervals(), &[OpenInterval::new(r(0, 1), r(1, 1))]);
        let s = x1().support();
        assert_eq!(s.intervals(), &[OpenInterval::new(r(1, 2), r(1, 1))]);
        assert_eq!(s.to_string(), "(1/2, 1)");
    }

    #[test]
    fn support_with_non_dyadic_fixed_point() {
        // slope-4 segment crosses the diagonal at 7/24
        let f = map("0:0 1/4:1/8 3/8:5/8 1/2:3/4 1:1");
        let s = f.support();
        assert_eq!(
            s.intervals(),
            &[
                OpenInterval::new(r(0, 1), r(7, 24)),
                OpenInterval::new(r(7, 24), r(1, 1))
            ]
        );
        assert_eq!(f.evaluate_rational(&r(7, 24)).unwrap(), r(7, 24));
    }

    #[test]
    fn support_with_fixed_segment() {
        let x2 = x1().conjugate(&x0()).unwrap();
        // x1 x2^-1 fixes [0,1/2] and [7/8,1]
        let b = &x1() * &x2.inverse();
        assert_eq!(
            b.support().intervals(),
            &[OpenInterval::new(r(1, 2), r(7, 8))]
        );
    }

    #[test]
    fn slope_examples() {
        assert_eq!(x0().slope_right(&q("0")).unwrap(), 1);
        assert_eq!(x0().slope_left(&q("1")).unwrap(), -1);
        assert_eq!(x0().slope_right(&q("1/4")).unwrap(), 0);
        assert_eq!(x0().slope_left(&q("1/4")).unwrap(), 1);
        assert_eq!(PLMap::unit_identity().slope_right(&q("3/8")).unwrap(), 0);
        assert!(x0().slope_right(&q("1")).is_err());
        assert!(x0().slope_left(&q("0")).is_err());
        assert!(x0().slope_right(&q("2")).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let f = x1();
        assert_eq!(f.conjugate(&PLMap::unit_identity()).unwrap(), f);
        let x2 = x1().conjugate(&x0()).unwrap();
        assert_eq!(
            x2.support().intervals(),
            &[OpenInterval::new(r(3, 4), r(1, 1))]
        );
        let b = &x1() * &x2.inverse();
        let a = &x0() * &x0();
        assert_eq!(
            b.conjugate(&a).unwrap().support().intervals(),
            &[OpenInterval::new(r(7, 8), r(31, 32))]
        );
    }

    #[test]
    fn commutes_examples() {
        assert!(x0().commutes(&x0()));
        assert!(!x0().commutes(&x1()));
        // negative control computed pointwise at 1/2
        let h = q("1/2");
        let a = x1().evaluate(&x0().evaluate(&h).unwrap()).unwrap();
        let b = x0().evaluate(&x1().evaluate(&h).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn restrict_examples() {
        let j = Interval::new(q("1/4"), q("3/4")).unwrap();
        assert_eq!(
            PLMap::unit_identity().restrict(&j).unwrap(),
            PLMap::identity(j.clone())
        );
        assert_eq!(x0().restrict(&j), Err(PlError::NotInvariant(j.clone())));
        let x2 = x1().conjugate(&x0()).unwrap();
        let b = &x1() * &x2.inverse();
        let s0 = Interval::new(q("1/2"), q("7/8")).unwrap();
        let g0 = b.restrict(&s0).unwrap();
        assert_eq!(g0.domain(), &s0);
        assert_eq!(g0.initial_slope(), 1);
        assert!(g0.is_gt_identity_interior());
        assert_eq!(g0.extend(&Interval::unit()).unwrap(), b);
    }

    #[test]
    fn order_predicates() {
        let id = PLMap::unit_identity();
        assert!(id.is_ge_identity());
        assert!(!id.is_gt_identity_interior());
        assert!(x0().is_gt_identity_interior());
        assert!(x0().is_ge_identity());
        assert!(!x0().inverse().is_ge_identity());
        // b is >= id but not > id on all of (0,1)
        let x2 = x1().conjugate(&x0()).unwrap();
        let b = &x1() * &x2.inverse();
        assert!(b.is_ge_identity());
        assert!(!b.is_gt_identity_interior());
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(PLMap::unit_identity().abelianize(), (0, 0));
        assert_eq!(x0().abelianize(), (1, -1));
        assert_eq!(x1().abelianize(), (0, -1));
    }

    #[test]
    fn text_and_json_round_trip() {
        let f = &x0() * &x1().inverse();
        assert_eq!(f.to_string().parse::<PLMap>().unwrap(), f);
        let j = f.to_json();
        assert_eq!(j["domain"][0], "0");
        assert_eq!(PLMap::from_json(&j).unwrap(), f);
        assert_eq!(
            x0().to_json().to_string(),
            r#"{"domain":["0","1"],"points":[["0","0"],["1/2^2","1/2^1"],["1/2^1","3/2^2"],["1","1"]]}"#
        );
        assert!(
            PLMap::from_json(&serde_json::json!({"domain": ["0", "1"], "points": []})).is_err()
        );
    }

    #[test]
    fn csv_is_exact_decimal() {
        assert_eq!(x0().to_csv(), "x,y\n0,0\n0.25,0.5\n0.5,0.75\n1,1\n");
        assert_eq!(decimal(&q("-3/1024")), "-0.0029296875");
    }
}
