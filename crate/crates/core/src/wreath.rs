//! `Z wr Z` in normal form and its embedding in `F` via `a = x₀²`,
//! `b = x₁x₂⁻¹`.
//!
//! An element `(m, c)` stands for `aᵐ · ∏ₖ a⁻ᵏ b^{c(k)} aᵏ`. The factor
//! `a⁻ᵏbaᵏ` is supported on `S_k = (½·a^k, ½·a^{k+1})`; these intervals
//! tile `[0, 1]`, so the factors commute and the product order is
//! immaterial.
//!
//! Multiplication follows from the embedding: conjugating `a⁻ᵏbaᵏ` by `aʲ`
//! gives `a^{-(k+j)}ba^{k+j}`, hence
//! `(m, c)·(m', c') = (m + m', c(· - m') + c')`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::plmap::{Interval, OpenInterval, PLMap};
use crate::words::{a_map, b_map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotInSubgroup {
    #[error("map is not defined on [0, 1]")]
    NotUnitDomain,
    #[error("initial slope exponent {0} is odd")]
    OddInitialSlope(i64),
    #[error("support component {0} is not inside a single S_k")]
    NotCovered(Box<OpenInterval>),
    #[error("reconstructed element does not reproduce the map")]
    ReconstructionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("not in the subgroup <a, b>: {0}")]
    NotInWreathSubgroup(NotInSubgroup),
    #[error("cannot parse wreath element: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WreathWire", into = "WreathWire")]
pub struct WreathElement {
    shift: i64,
    coeffs: BTreeMap<i64, i64>,
}

#[derive(Serialize, Deserialize)]
struct WreathWire {
    shift: i64,
    #[serde(default)]
    coeffs: BTreeMap<i64, i64>,
}

impl From<WreathElement> for WreathWire {
    fn from(w: WreathElement) -> Self {
        WreathWire {
            shift: w.shift,
            coeffs: w.coeffs,
        }
    }
}

impl TryFrom<WreathWire> for WreathElement {
    type Error = WreathError;
    fn try_from(w: WreathWire) -> Result<Self, WreathError> {
        Ok(WreathElement::new(w.shift, w.coeffs))
    }
}

impl WreathElement {
    /// Builds an element, discarding zero coefficients.
    pub fn new(shift: i64, coeffs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in coeffs {
            *map.entry(k).or_insert(0) += v;
        }
        map.retain(|_, v| *v != 0);
        WreathElement { shift, coeffs: map }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// `a`.
    pub fn a() -> Self {
        Self::new(1, [])
    }

    /// `b`.
    pub fn b() -> Self {
        Self::new(0, [(0, 1)])
    }

    /// `a⁻ᵏ b aᵏ`.
    pub fn conj_b(k: i64) -> Self {
        Self::new(0, [(k, 1)])
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, i64> {
        &self.coeffs
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        let moved = self.coeffs.iter().map(|(&k, &v)| (k + other.shift, v));
        let theirs = other.coeffs.iter().map(|(&k, &v)| (k, v));
        WreathElement::new(self.shift + other.shift, moved.chain(theirs))
    }

    pub fn inv(&self) -> WreathElement {
        WreathElement::new(
            -self.shift,
            self.coeffs.iter().map(|(&k, &v)| (k - self.shift, -v)),
        )
    }

    pub fn pow(&self, n: i64) -> WreathElement {
        let base = if n < 0 { self.inv() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    /// The map `aᵐ ∏ₖ a⁻ᵏ b^{c(k)} aᵏ` on `[0, 1]`.
    pub fn embed(&self) -> PLMap {
        let a = a_map();
        let b = b_map();
        self.coeffs.iter().fold(a.pow(self.shift), |acc, (&k, &v)| {
            let factor = b.pow(v).conjugate(&a.pow(k)).expect("unit maps");
            &acc * &factor
        })
    }

    /// Recovers the normal form of a map in `⟨a, b⟩`.
    ///
    /// Reads `m` from the initial slope (`a` has initial slope `4`, base
    /// elements `1`), then reads each `c(k)` from the slope of `a⁻ᵐf` just
    /// right of the left end of `S_k`: `a⁻ᵏbaᵏ` has initial slope `2` there,
    /// so its `l`-th power has initial slope `2^l`. The candidate is
    /// re-embedded and compared with `f`.
    pub fn decompose(f: &PLMap) -> Result<WreathElement, WreathError> {
        let reject = |r| Err(WreathError::NotInWreathSubgroup(r));
        if f.domain() != &Interval::unit() {
            return reject(NotInSubgroup::NotUnitDomain);
        }
        let s0 = f.initial_slope();
        if s0 % 2 != 0 {
            return reject(NotInSubgroup::OddInitialSlope(s0));
        }
        let m = s0 / 2;
        let base = &a_map().pow(-m) * f;
        let mut coeffs = BTreeMap::new();
        for comp in base.support().intervals() {
            let Some(k) = locate(comp) else {
                return reject(NotInSubgroup::NotCovered(Box::new(comp.clone())));
            };
            if coeffs.contains_key(&k) {
                continue;
            }
            let lo = grid_point(k);
            let s = base.slope_right(&lo).expect("grid point inside [0,1)");
            coeffs.insert(k, s);
        }
        let u = WreathElement::new(m, coeffs);
        if &u.embed() != f {
            return reject(NotInSubgroup::ReconstructionMismatch);
        }
        Ok(u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("wreath element serializes")
    }
}

/// `½·aᵏ = ½·x₀^{2k}`, the left end of `S_k`.
pub fn grid_point(k: i64) -> Dyadic {
    let step = if k >= 0 {
        a_map().clone()
    } else {
        a_map().inverse()
    };
    (0..k.unsigned_abs()).fold(Dyadic::new(1, 1), |p, _| {
        step.evaluate(&p).expect("grid point inside [0,1]")
    })
}

/// Closure of `S_k = supp(a⁻ᵏbaᵏ) = (½·x₀^{2k}, ½·x₀^{2k+2})`.
pub fn support_interval(k: i64) -> Interval {
    let lo = grid_point(k);
    let hi = a_map().evaluate(&lo).expect("grid point inside [0,1]");
    Interval::new(lo, hi).expect("a moves every interior point up")
}

// Index k with comp ⊆ closure(S_k), if any.
fn locate(comp: &OpenInterval) -> Option<i64> {
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    if comp.lo <= zero || comp.hi >= one {
        return None;
    }
    let a = a_map();
    let a_inv = a.inverse();
    let mut k = 0i64;
    let mut lo = Dyadic::new(1, 1);
    let mut hi = Dyadic::new(7, 3);
    if comp.lo >= lo.to_rational() {
        while comp.lo >= hi.to_rational() {
            lo = hi;
            hi = a.evaluate(&lo).expect("inside [0,1]");
            k += 1;
        }
    } else {
        while comp.lo < lo.to_rational() {
            hi = lo;
            lo = a_inv.evaluate(&hi).expect("inside [0,1]");
            k -= 1;
        }
    }
    (comp.hi <= hi.to_rational()).then_some(k)
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shift={}; coeffs={{", self.shift)?;
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        write!(f, "}}")
    }
}

/// Parses `shift=m; coeffs={k1:m1, k2:m2}`; either part may be omitted.
impl FromStr for WreathElement {
    type Err = WreathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| WreathError::Parse(format!("{m} in {s:?}"));
        let mut shift = 0i64;
        let mut coeffs = Vec::new();
        let mut seen = (false, false);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "shift" if !seen.0 => {
                    seen.0 = true;
                    shift = val.trim().parse().map_err(|_| bad("bad shift"))?;
                }
                "coeffs" if !seen.1 => {
                    seen.1 = true;
                    let body = val
                        .trim()
                        .strip_prefix('{')
                        .and_then(|v| v.strip_suffix('}'))
                        .ok_or_else(|| bad("coeffs must be wrapped in braces"))?;
                    for entry in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                        let (k, v) = entry.split_once(':').ok_or_else(|| bad("expected k:v"))?;
                        let k: i64 = k.trim().parse().map_err(|_| bad("bad index"))?;
                        let v: i64 = v.trim().parse().map_err(|_| bad("bad coefficient"))?;
                        coeffs.push((k, v));
                    }
                }
                other => return Err(bad(&format!("unexpected key {other:?}"))),
            }
        }
        Ok(WreathElement::new(shift, coeffs))
    }
}
