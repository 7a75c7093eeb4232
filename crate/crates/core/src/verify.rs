//! Seeded sweeps that re-check every law on sampled `(ξ, p)`.
//!
//! Samples for a prime `p` come from a ChaCha8 stream selected by `p`, so
//! a report depends only on the configuration and is identical across runs
//! and thread counts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, isqrt, odd_primes};
use crate::classes::PrimeClasses;
use crate::cycles::{
    admissible_lengths, closed_form_criterion, cycle_structure, gcd_check, length5_condition,
    permutation_sign, predicted_cycle_length, predicted_fixed_count, resultant_check,
    root_order_oracle, CycleStructure, FixedPrediction,
};
use crate::error::{domain, Error, Result};
use crate::fixed::{first_three_imply_last_three, is_fixed_proportionality, is_fixed_trace_conditions};
use crate::fp::{f_poly, legendre, phi_matrix, FpPoly};
use crate::hurwitz::HurwitzInt;
use crate::metacommute::{permutation_direct, permutation_from_matrix, Permutation};
use crate::search::{construct_p_cycle_xi, distinct_p_cycle_pair};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Engines,
    Sign,
    FixedCount,
    UniformLength,
    CycleLength,
    ClosedForm,
    Length5,
    Length4Structure,
    FixedPoints,
    PCycleConstruction,
    DistinctPair,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Engines,
        Check::Sign,
        Check::FixedCount,
        Check::UniformLength,
        Check::CycleLength,
        Check::ClosedForm,
        Check::Length5,
        Check::Length4Structure,
        Check::FixedPoints,
        Check::PCycleConstruction,
        Check::DistinctPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Engines => "engines",
            Check::Sign => "sign",
            Check::FixedCount => "fixed_count",
            Check::UniformLength => "uniform_length",
            Check::CycleLength => "cycle_length",
            Check::ClosedForm => "closed_form",
            Check::Length5 => "length5",
            Check::Length4Structure => "length4_structure",
            Check::FixedPoints => "fixed_points",
            Check::PCycleConstruction => "p_cycle_construction",
            Check::DistinctPair => "distinct_pair",
        }
    }

    fn per_prime(self) -> bool {
        matches!(self, Check::PCycleConstruction | Check::DistinctPair)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

/// Deliberate corruption of the conjugation matrix, for exercising the
/// cross-engine check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fault {
    NegateMatrixEntry { row: usize, col: usize },
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub p_min: u64,
    pub p_max: u64,
    /// Largest accepted `N(ξ)`.
    pub q_bound: u64,
    pub samples_per_p: usize,
    pub seed: u64,
    pub checks: BTreeSet<Check>,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            p_min: 3,
            p_max: 100,
            q_bound: 1 << 40,
            samples_per_p: 20,
            seed: 1,
            checks: Check::ALL.into_iter().collect(),
            fault: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: Check,
    pub p: u64,
    pub xi: Option<HurwitzInt>,
    pub q: Option<u64>,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// `(check, pass, fail, skip)` counts in check order.
    pub fn summary(&self) -> Vec<(Check, usize, usize, usize)> {
        let mut out: Vec<(Check, usize, usize, usize)> = Vec::new();
        for check in Check::ALL {
            let rs: Vec<_> = self.records.iter().filter(|r| r.check == check).collect();
            if rs.is_empty() {
                continue;
            }
            let count = |s| rs.iter().filter(|r| r.status == s).count();
            out.push((check, count(Status::Pass), count(Status::Fail), count(Status::Skip)));
        }
        out
    }
}

/// Half-width (in integer units) of the coordinate box sampled for `p`.
pub fn sample_width(p: u64) -> i64 {
    2 + isqrt(p) as i64
}

/// Uniform element of the Hurwitz order in the box `|a_i| ≤ w`, rejected
/// until its norm is a prime other than `p` and at most `q_bound`.
pub fn sample_xi<R: Rng>(rng: &mut R, p: u64, q_bound: u64) -> HurwitzInt {
    let w = sample_width(p);
    loop {
        let odd = rng.gen_bool(0.5);
        let coord = |rng: &mut R| {
            if odd {
                2 * rng.gen_range(-w..w) + 1
            } else {
                2 * rng.gen_range(-w..=w)
            }
        };
        let d = [coord(rng), coord(rng), coord(rng), coord(rng)];
        let Ok(xi) = HurwitzInt::from_doubled(d) else { continue };
        let q = xi.norm();
        if q != p && q <= q_bound && is_prime(q) {
            return xi;
        }
    }
}

fn rng_for(seed: u64, p: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    rng
}

/// The `samples_per_p` samples used for `p`.
pub fn samples_for(p: u64, count: usize, seed: u64, q_bound: u64) -> Vec<HurwitzInt> {
    let mut rng = rng_for(seed, p);
    (0..count).map(|_| sample_xi(&mut rng, p, q_bound)).collect()
}

/// `count` pairs with `p` uniform among the odd primes in `[p_min, p_max]`.
pub fn sample_pairs(p_min: u64, p_max: u64, count: usize, seed: u64, q_bound: u64) -> Vec<(u64, HurwitzInt)> {
    let primes = odd_primes(p_min, p_max);
    assert!(!primes.is_empty(), "no odd primes in [{p_min}, {p_max}]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = primes[rng.gen_range(0..primes.len())];
            (p, sample_xi(&mut rng, p, q_bound))
        })
        .collect()
}

fn conic_permutation(xi: &HurwitzInt, classes: &PrimeClasses, fault: Option<Fault>) -> Result<Permutation> {
    let p = classes.modulus();
    let mut m = phi_matrix(xi, p)?;
    if let Some(Fault::NegateMatrixEntry { row, col }) = fault {
        let mut rows = m.rows();
        rows[row][col] = (p - rows[row][col]) % p;
        m = crate::fp::Matrix3::from_rows(p, rows);
    }
    permutation_from_matrix(&m, classes.conic())
}

/// Everything computed once per sample and shared by the checks.
struct Sample<'a> {
    p: u64,
    xi: HurwitzInt,
    classes: &'a PrimeClasses,
    direct: Result<Permutation>,
    structure: Result<CycleStructure>,
}

fn outcome(ok: bool, detail: String) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

fn run_check(check: Check, s: &Sample, fault: Option<Fault>) -> Result<(Status, String)> {
    let p = s.p;
    let xi = &s.xi;
    let q = xi.norm();
    let perm = s.direct.as_ref().map_err(Clone::clone)?;
    let scalar = xi.is_scalar_mod(p);
    match check {
        Check::Engines => {
            let conic = conic_permutation(xi, s.classes, fault);
            Ok(match conic {
                Ok(c) if c.same_map(perm) => (Status::Pass, String::new()),
                Ok(c) => (Status::Fail, format!("direct {:?} vs conic {:?}", perm.image, c.image)),
                Err(e) => (Status::Fail, format!("conic engine: {e}")),
            })
        }
        Check::Sign => {
            let (got, want) = (permutation_sign(perm), legendre(q as i128, p)?);
            Ok(outcome(got == want, format!("sign {got}, ({q}/{p}) = {want}")))
        }
        Check::FixedCount => {
            let got = perm.fixed_points().len();
            Ok(match predicted_fixed_count(xi, p)? {
                FixedPrediction::Identity => {
                    outcome(perm.is_identity(), format!("scalar mod p, {got} fixed"))
                }
                FixedPrediction::Count(n) => outcome(
                    got == n as usize && !perm.is_identity(),
                    format!("{got} fixed, predicted {n}"),
                ),
            })
        }
        Check::UniformLength => {
            let st = s.structure.as_ref().map_err(Clone::clone)?;
            let Some(l) = st.cycle_length else {
                return Ok(outcome(scalar, "identity".into()));
            };
            let ok = match st.fixed_count {
                0 => (p + 1) % l == 0,
                1 => l == p,
                2 => (p - 1) % l == 0,
                _ => false,
            } && st.fixed_count as u64 + st.cycle_count as u64 * l == p + 1;
            Ok(outcome(ok, format!("{} fixed + {} cycles of length {l}", st.fixed_count, st.cycle_count)))
        }
        _ if scalar => Ok((Status::Skip, "identity".into())),
        Check::CycleLength => {
            let st = s.structure.as_ref().map_err(Clone::clone)?;
            let l = st.cycle_length.unwrap_or(1);
            let predicted = predicted_cycle_length(xi, p)?;
            let f = f_poly(xi, p)?;
            let oracle = if f == FpPoly::new(p, vec![1, p - 2, 1]) { p } else { root_order_oracle(&f)? };
            let mut bad = Vec::new();
            for t in admissible_lengths(p) {
                let r = resultant_check(xi, p, t)?;
                if r != (t == l) || gcd_check(xi, p, t)? != r {
                    bad.push(t);
                }
            }
            Ok(outcome(
                l == predicted && l == oracle && bad.is_empty(),
                format!("empirical {l}, predicted {predicted}, root order {oracle}, disagreeing t {bad:?}"),
            ))
        }
        Check::ClosedForm => {
            let l = s.structure.as_ref().map_err(Clone::clone)?.cycle_length.unwrap_or(1);
            let mut bad = Vec::new();
            for t in [2, 3, 4, 6] {
                if closed_form_criterion(t, xi, p)? != (l == t) {
                    bad.push(t);
                }
            }
            Ok(outcome(bad.is_empty(), format!("length {l}, disagreeing t {bad:?}")))
        }
        Check::Length5 => {
            let l = s.structure.as_ref().map_err(Clone::clone)?.cycle_length.unwrap_or(1);
            let c = length5_condition(xi, p)?;
            Ok(outcome(c == (l == 5), format!("length {l}, condition {c}")))
        }
        Check::Length4Structure => {
            let st = s.structure.as_ref().map_err(Clone::clone)?;
            if st.cycle_length != Some(4) {
                return Ok((Status::Skip, "length is not 4".into()));
            }
            let want = if p % 4 == 1 { (2, (p as usize - 1) / 4) } else { (0, (p as usize + 1) / 4) };
            Ok(outcome(
                (st.fixed_count, st.cycle_count) == want,
                format!("{} fixed + {} four-cycles", st.fixed_count, st.cycle_count),
            ))
        }
        Check::FixedPoints => {
            let mut bad = Vec::new();
            for class in s.classes.classes() {
                let direct = perm.image[class.index] == class.index;
                let cong = is_fixed_proportionality(&class.rep, xi, p)?;
                let trace = is_fixed_trace_conditions(&class.rep, xi, p)?;
                let implied = first_three_imply_last_three(&class.rep, xi, p)?;
                if cong != direct || trace != direct || !implied {
                    bad.push(class.index);
                }
            }
            Ok(outcome(bad.is_empty(), format!("disagreeing classes {bad:?}")))
        }
        Check::PCycleConstruction | Check::DistinctPair => unreachable!(),
    }
}

fn record(check: Check, p: u64, xi: Option<HurwitzInt>, res: Result<(Status, String)>) -> Record {
    let (status, detail) = res.unwrap_or_else(|e| (Status::Fail, e.to_string()));
    Record { check, p, xi, q: xi.map(|x| x.norm()), status, detail }
}

fn per_prime_records(check: Check, p: u64) -> Vec<Record> {
    match check {
        Check::PCycleConstruction => match construct_p_cycle_xi(p) {
            Ok(r) => {
                let ok = r.verified
                    && r.xi.is_some_and(|x| (x.real_doubled() / 2).pow(2).rem_euclid(p as i64) == (x.norm() % p) as i64);
                let detail = format!("{:?}", r.structure);
                vec![record(check, p, r.xi, Ok(outcome(ok, detail)))]
            }
            Err(e) => vec![record(check, p, None, Err(e))],
        },
        Check::DistinctPair => match distinct_p_cycle_pair(p) {
            Ok((a, b)) => {
                let ok = a.verified && b.verified && a.fixed_classes != b.fixed_classes;
                let detail = format!("fixed classes {:?} and {:?}", a.fixed_classes, b.fixed_classes);
                [a.xi, b.xi].into_iter().map(|x| record(check, p, x, Ok(outcome(ok, detail.clone())))).collect()
            }
            Err(e) => vec![record(check, p, None, Err(e))],
        },
        _ => unreachable!(),
    }
}

/// Runs the selected checks for every odd prime in the configured range.
/// Records are ordered by `p`, then sample index, then check.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    if cfg.p_min > cfg.p_max {
        return domain(format!("empty prime range [{}, {}]", cfg.p_min, cfg.p_max));
    }
    if cfg.checks.is_empty() {
        return Ok(Report::default());
    }
    let primes = odd_primes(cfg.p_min, cfg.p_max);
    if primes.is_empty() {
        return domain(format!("no odd primes in [{}, {}]", cfg.p_min, cfg.p_max));
    }
    let sample_checks: Vec<Check> = cfg.checks.iter().copied().filter(|c| !c.per_prime()).collect();
    let prime_checks: Vec<Check> = cfg.checks.iter().copied().filter(|c| c.per_prime()).collect();

    let per_p: Vec<Vec<Record>> = primes
        .par_iter()
        .map(|&p| -> Result<Vec<Record>> {
            let classes = PrimeClasses::enumerate(p)?;
            let xis = if sample_checks.is_empty() {
                Vec::new()
            } else {
                samples_for(p, cfg.samples_per_p, cfg.seed, cfg.q_bound)
            };
            let mut out: Vec<Record> = xis
                .par_iter()
                .flat_map_iter(|xi| {
                    let direct = permutation_direct(xi, &classes);
                    let structure = direct.as_ref().map_err(Clone::clone).and_then(cycle_structure);
                    let s = Sample { p, xi: *xi, classes: &classes, direct, structure };
                    sample_checks
                        .iter()
                        .map(|&c| record(c, p, Some(*xi), run_check(c, &s, cfg.fault)))
                        .collect::<Vec<_>>()
                })
                .collect();
            for &c in &prime_checks {
                out.extend(per_prime_records(c, p));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(Report { records: per_p.into_iter().flatten().collect() })
}
