//! Machine checks of the structural facts about `⟨a, b⟩ ≤ F`, plus
//! finite centralizer evidence gathered from balls in the Cayley graph of
//! `F` with respect to `{x₀, x₁}`.
//!
//! Ball enumeration grows words breadth-first, skipping any letter that
//! cancels the previous one, and deduplicates by canonical map. Each level
//! is expanded in parallel and merged in a fixed order, so every element
//! keeps its shortest, lexicographically least witness.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::plmap::{Interval, OpenInterval, PLMap};
use crate::words::{eval_word, generator_map, Generator, Letter, Word};
use crate::wreath::{support_interval, WreathElement};

pub const DEFAULT_RADIUS_CAP: u32 = 10;
pub const DEFAULT_KMAX: u32 = 20;
pub const DEFAULT_NMAX: u32 = 20;
pub const DEFAULT_RADIUS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("radius {radius} exceeds the configured cap {cap}")]
    CapExceeded { radius: u32, cap: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, i64>,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    fn finish(
        check: &str,
        params: &[(&str, i64)],
        started: Instant,
        counterexample: Option<String>,
        notes: Vec<String>,
    ) -> Self {
        Report {
            check: check.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            pass: counterexample.is_none(),
            counterexample,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            notes,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            f,
            "[{}] {} ({}) {:.1} ms",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            params.join(", "),
            self.elapsed_ms
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// `S_k` are pairwise disjoint, consecutive closures meet in one point, the
/// closures tile `[½x₀^{-2K}, ½x₀^{2K+2}]`, and the endpoints approach
/// `0` and `1` at least geometrically.
pub fn verify_lemma1(kmax: u32) -> Report {
    let started = Instant::now();
    let k = kmax as i64;
    let params = [("kmax", k)];
    let fail = |msg: String| Report::finish("lemma1", &params, started, Some(msg), vec![]);

    let mut grid = Vec::new();
    for j in -k..=k {
        let expected = support_interval(j);
        let actual = WreathElement::conj_b(j).embed().support();
        if actual.intervals() != [OpenInterval::from_dyadic(&expected)] {
            return fail(format!("k={j}: supp = {actual}, expected S_k = {expected}"));
        }
        grid.push(expected);
    }
    for (w, j) in grid.windows(2).zip(-k..) {
        if w[0].hi() != w[1].lo() {
            return fail(format!(
                "k={j}: closures of S_k and S_(k+1) do not meet in exactly one point"
            ));
        }
    }
    // window ends computed straight from x0, independently of a
    let x0 = generator_map(0);
    let x0_inv = x0.inverse();
    let half = Dyadic::new(1, 1);
    let left = (0..2 * k).fold(half.clone(), |p, _| x0_inv.evaluate(&p).expect("in [0,1]"));
    let right = (0..2 * k + 2).fold(half, |p, _| x0.evaluate(&p).expect("in [0,1]"));
    if grid[0].lo() != &left || grid[grid.len() - 1].hi() != &right {
        return fail(format!(
            "tiling covers [{}, {}], expected [{}, {}]",
            grid[0].lo(),
            grid[grid.len() - 1].hi(),
            left,
            right
        ));
    }
    let one = Dyadic::one();
    let mid = k as usize;
    for i in 0..mid {
        // moving left from S_0: distance to 0 at least halves
        let (near, far) = (&grid[i], &grid[i + 1]);
        if near.lo().mul_pow2(1) > *far.lo() {
            return fail(format!(
                "left endpoints not converging at k={}",
                i as i64 - k
            ));
        }
    }
    for i in mid..grid.len() - 1 {
        let (cur, next) = (&grid[i], &grid[i + 1]);
        if (&one - next.hi()).mul_pow2(1) > &one - cur.hi() {
            return fail(format!(
                "right endpoints not converging at k={}",
                i as i64 - k + 1
            ));
        }
    }
    Report::finish("lemma1", &params, started, None, vec![])
}

/// Each `g_k = a⁻ᵏbaᵏ|S̄_k` lies in `PL₂^>(S̄_k)` with initial slope `2`.
pub fn verify_claim(kmax: u32) -> Report {
    let started = Instant::now();
    let k = kmax as i64;
    let params = [("kmax", k)];
    let counterexample = (-k..=k).find_map(|j| {
        let s = support_interval(j);
        let g = match WreathElement::conj_b(j).embed().restrict(&s) {
            Ok(g) => g,
            Err(e) => return Some(format!("k={j}: {e}")),
        };
        if !g.is_gt_identity_interior() {
            return Some(format!("k={j}: g_k not in PL2^>({s})"));
        }
        let slope = g.slope_right(s.lo()).expect("left endpoint");
        (slope != 1).then(|| format!("k={j}: initial slope exponent {slope}"))
    });
    Report::finish("claim", &params, started, counterexample, vec![])
}

/// `[b, a⁻ⁿbaⁿ] = 1` for `|n| ≤ nmax`, with `[x₀, x₁] ≠ 1` as a negative control.
pub fn verify_relations(nmax: u32) -> Report {
    let started = Instant::now();
    let n = nmax as i64;
    let params = [("nmax", n)];
    let b = Word::new(vec![Letter::new(Generator::B, 1)]);
    let mut counterexample = (-n..=n).find_map(|j| {
        let conj = if j == 0 {
            b.clone()
        } else {
            Word::new(vec![
                Letter::new(Generator::A, -j),
                Letter::new(Generator::B, 1),
                Letter::new(Generator::A, j),
            ])
        };
        let w = Word::commutator(&b, &conj);
        (!eval_word(&w).is_identity()).then(|| w.to_string())
    });
    let control = Word::commutator(
        &Word::new(vec![Letter::new(Generator::X(0), 1)]),
        &Word::new(vec![Letter::new(Generator::X(1), 1)]),
    );
    if counterexample.is_none() && eval_word(&control).is_identity() {
        counterexample = Some(format!(
            "negative control {control} evaluated to the identity"
        ));
    }
    Report::finish("relations", &params, started, counterexample, vec![])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallEntry {
    pub map: PLMap,
    pub witness: Word,
}

impl BallEntry {
    pub fn length(&self) -> u64 {
        self.witness.len()
    }
}

/// Letters in witness order: `x0 < x0^-1 < x1 < x1^-1`.
pub fn ball_generators() -> [Letter; 4] {
    [
        Letter::new(Generator::X(0), 1),
        Letter::new(Generator::X(0), -1),
        Letter::new(Generator::X(1), 1),
        Letter::new(Generator::X(1), -1),
    ]
}

pub fn enumerate_ball(radius: u32) -> Result<Vec<BallEntry>, VerifyError> {
    enumerate_ball_capped(radius, DEFAULT_RADIUS_CAP)
}

/// All elements of word length `≤ radius` over `{x₀^{±1}, x₁^{±1}}`, in
/// breadth-first order, each with its shortest, lexicographically least witness.
pub fn enumerate_ball_capped(radius: u32, cap: u32) -> Result<Vec<BallEntry>, VerifyError> {
    if radius > cap {
        return Err(VerifyError::CapExceeded { radius, cap });
    }
    let gens = ball_generators();
    let gen_maps: Vec<PLMap> = gens
        .iter()
        .map(|l| eval_word(&Word::new(vec![*l])))
        .collect();
    let mut entries = vec![BallEntry {
        map: PLMap::unit_identity(),
        witness: Word::empty(),
    }];
    let mut seen: HashSet<PLMap> = HashSet::from([PLMap::unit_identity()]);
    let gen_maps = &gen_maps;
    let mut frontier = 0..1;
    for _ in 0..radius {
        let candidates: Vec<(usize, usize, PLMap)> = entries[frontier.clone()]
            .par_iter()
            .enumerate()
            .flat_map_iter(|(off, e)| {
                let last = e.witness.letters().last().copied();
                let idx = frontier.start + off;
                gens.iter()
                    .enumerate()
                    .filter(move |(_, g)| Some(g.inverse()) != last)
                    .map(move |(gi, _)| (idx, gi, &e.map * &gen_maps[gi]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let start = entries.len();
        for (idx, gi, map) in candidates {
            if seen.contains(&map) {
                continue;
            }
            seen.insert(map.clone());
            let mut witness = entries[idx].witness.clone();
            witness.push(gens[gi]);
            entries.push(BallEntry { map, witness });
        }
        frontier = start..entries.len();
    }
    Ok(entries)
}

/// Ball elements commuting with every target.
pub fn centralizer_in_ball(radius: u32, targets: &[PLMap]) -> Result<Vec<BallEntry>, VerifyError> {
    centralizer_in_ball_capped(radius, DEFAULT_RADIUS_CAP, targets)
}

pub fn centralizer_in_ball_capped(
    radius: u32,
    cap: u32,
    targets: &[PLMap],
) -> Result<Vec<BallEntry>, VerifyError> {
    let ball = enumerate_ball_capped(radius, cap)?;
    Ok(ball
        .into_par_iter()
        .filter(|e| targets.iter().all(|t| e.map.commutes(t)))
        .collect())
}

/// Inside the ball, `C(x₀)` is exactly the set of powers of `x₀` present.
pub fn verify_x0_centralizer(radius: u32, cap: u32) -> Result<Report, VerifyError> {
    let started = Instant::now();
    let params = [("radius", radius as i64)];
    let x0 = generator_map(0);
    let found = centralizer_in_ball_capped(radius, cap, std::slice::from_ref(&x0))?;
    let powers: HashSet<PLMap> = (-(radius as i64)..=radius as i64)
        .map(|m| x0.pow(m))
        .collect();
    let stray = found.iter().find(|e| !powers.contains(&e.map));
    let found_maps: HashSet<&PLMap> = found.iter().map(|e| &e.map).collect();
    let missing = powers.iter().find(|p| !found_maps.contains(p));
    let counterexample = match (stray, missing) {
        (Some(e), _) => Some(format!(
            "{} commutes with x0 but is not a power of it",
            e.witness
        )),
        (None, Some(p)) => Some(format!("power of x0 {p} missing from the centralizer")),
        (None, None) => None,
    };
    let notes = vec![format!("{} centralizing elements found", found.len())];
    Ok(Report::finish(
        "centralizer-x0",
        &params,
        started,
        counterexample,
        notes,
    ))
}

/// Every ball element commuting with `{a⁻ᵏbaᵏ : |k| ≤ K}` is either in the base
/// group `⊕ Z`, or agrees with a base-group element on `⋃_{|k|≤K} S̄_k` and
/// moves points only outside it (a truncation artifact, reported as a note).
pub fn check_base_centralizer(radius: u32, kmax: u32) -> Result<Report, VerifyError> {
    check_base_centralizer_capped(radius, kmax, DEFAULT_RADIUS_CAP)
}

pub fn check_base_centralizer_capped(
    radius: u32,
    kmax: u32,
    cap: u32,
) -> Result<Report, VerifyError> {
    let started = Instant::now();
    let k = kmax as i64;
    let params = [("radius", radius as i64), ("kmax", k)];
    let targets: Vec<PLMap> = (-k..=k).map(|j| WreathElement::conj_b(j).embed()).collect();
    let window = Interval::new(
        support_interval(-k).lo().clone(),
        support_interval(k).hi().clone(),
    )
    .expect("nonempty window");
    let found = centralizer_in_ball_capped(radius, cap, &targets)?;

    let mut notes = Vec::new();
    let mut members = 0usize;
    let mut counterexample = None;
    for e in &found {
        match classify(&e.map, &window, k) {
            Explained::Member => members += 1,
            Explained::Truncation(inner) => notes.push(format!(
                "{} agrees with {inner} on the window {window} and moves points outside it",
                e.witness
            )),
            Explained::No(why) => {
                counterexample = Some(format!("{}: {why}", e.witness));
                break;
            }
        }
    }
    notes.insert(
        0,
        format!(
            "{} centralizing elements, {members} in the base group",
            found.len()
        ),
    );
    Ok(Report::finish(
        "centralizer-base",
        &params,
        started,
        counterexample,
        notes,
    ))
}

enum Explained {
    Member,
    Truncation(WreathElement),
    No(String),
}

fn in_base(u: &WreathElement, k: i64) -> bool {
    u.shift() == 0 && u.coeffs().keys().all(|j| j.abs() <= k)
}

fn classify(f: &PLMap, window: &Interval, k: i64) -> Explained {
    if let Ok(u) = WreathElement::decompose(f) {
        if u.shift() == 0 {
            return Explained::Member;
        }
        return Explained::No(format!("decomposes as {u}, which has a nonzero shift"));
    }
    let inner = match f.restrict(window) {
        Ok(g) => g.extend(&Interval::unit()).expect("window inside [0,1]"),
        Err(e) => return Explained::No(format!("does not preserve the window: {e}")),
    };
    match WreathElement::decompose(&inner) {
        Ok(u) if in_base(&u, k) => Explained::Truncation(u),
        Ok(u) => Explained::No(format!("restriction decomposes as {u}")),
        Err(e) => Explained::No(format!("restriction to the window: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::is_trivial;

    #[test]
    fn lemma1_small_windows() {
        let r = verify_lemma1(2);
        assert!(r.pass, "{r}");
        assert_eq!(support_interval(-2).lo(), &Dyadic::new(1, 5));
        // closures tile [1/32, 1/2 x0^6] = [1/32, 127/128]
        assert_eq!(support_interval(2).hi(), &Dyadic::new(127, 7));

        assert!(verify_lemma1(1).pass);
        assert_eq!(
            support_interval(-1),
            Interval::new(Dyadic::new(1, 3), Dyadic::new(1, 1)).unwrap()
        );
        assert_eq!(
            support_interval(0),
            Interval::new(Dyadic::new(1, 1), Dyadic::new(7, 3)).unwrap()
        );
    }

    #[test]
    fn claim_base_cases() {
        let s0 = support_interval(0);
        let g0 = crate::words::b_map().restrict(&s0).unwrap();
        assert_eq!(g0.slope_right(s0.lo()).unwrap(), 1);
        let s = support_interval(-2);
        let g = WreathElement::conj_b(-2).embed().restrict(&s).unwrap();
        assert_eq!(g.slope_right(s.lo()).unwrap(), 1);
        assert!(verify_claim(3).pass);
    }

    #[test]
    fn relations_small() {
        assert!(is_trivial(&"b^-1 b^-1 b b".parse().unwrap()));
        let r = verify_relations(3);
        assert!(r.pass, "{r}");
        assert!(r.counterexample.is_none());
    }

    #[test]
    fn report_renders() {
        let r = verify_relations(1);
        let j = r.to_json();
        assert_eq!(j["check"], "relations");
        assert_eq!(j["params"]["nmax"], 1);
        assert_eq!(j["pass"], true);
        assert!(j["counterexample"].is_null());
        assert!(j["elapsed_ms"].is_number());
        assert!(r.to_string().starts_with("[PASS] relations (nmax=1)"));
    }

    #[test]
    fn small_balls() {
        let b0 = enumerate_ball(0).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0[0].map.is_identity());
        let b1 = enumerate_ball(1).unwrap();
        assert_eq!(b1.len(), 5);
        assert_eq!(b1[1].witness.to_string(), "x0");
        assert_eq!(b1[2].witness.to_string(), "x0^-1");
    }

    #[test]
    fn ball_radius_two_matches_brute_force() {
        let gens = ball_generators();
        let mut maps: HashSet<PLMap> = HashSet::new();
        maps.insert(PLMap::unit_identity());
        for g in gens {
            maps.insert(eval_word(&Word::new(vec![g])));
            for h in gens {
                maps.insert(eval_word(&Word::new(vec![g, h])));
            }
        }
        assert_eq!(enumerate_ball(2).unwrap().len(), maps.len());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_ball(11),
            Err(VerifyError::CapExceeded {
                radius: 11,
                cap: 10
            })
        );
        assert!(enumerate_ball_capped(3, 2).is_err());
    }

    #[test]
    fn centralizer_examples() {
        let x0 = generator_map(0);
        let x1 = generator_map(1);
        let c = centralizer_in_ball(4, std::slice::from_ref(&x0)).unwrap();
        for e in &c {
            assert!((-4..=4).any(|m| x0.pow(m) == e.map), "{}", e.witness);
        }
        assert_eq!(c.len(), 9);
        assert_eq!(centralizer_in_ball(1, &[]).unwrap().len(), 5);
        let center = centralizer_in_ball(4, &[x0, x1]).unwrap();
        assert_eq!(center.len(), 1);
        assert!(center[0].map.is_identity());
    }

    #[test]
    fn base_centralizer_small() {
        let r = check_base_centralizer(4, 3).unwrap();
        assert!(r.pass, "{r}");
        // b = x1 x0^-1 x1^-1 x0 appears at radius 4
        let ball = enumerate_ball(4).unwrap();
        let b = ball
            .iter()
            .find(|e| &e.map == crate::words::b_map())
            .unwrap();
        assert_eq!(b.length(), 4);
        assert_eq!(WreathElement::decompose(&b.map), Ok(WreathElement::b()));
        assert_eq!(
            WreathElement::decompose(&ball[0].map),
            Ok(WreathElement::identity())
        );
    }
}
