//! Constructions and searches for `ξ` with a prescribed cycle length.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{check_odd_prime, gcd, is_prime, isqrt};
use crate::classes::PrimeClasses;
use crate::cycles::{cycle_structure, is_admissible_length, resultant_check, CycleStructure};
use crate::error::{invariant, Error, Result};
use crate::hurwitz::HurwitzInt;
use crate::metacommute::permutation_direct;

/// Default cap on the number of `k` tried by [`construct_p_cycle_xi`].
pub const MAX_K: u64 = 1_000_000;

/// Lexicographically first `(b, c, d)` with `b, c ≥ 1`, `d ≥ 0`,
/// `b² + c² + d² = n` and `gcd(b, c, d) = 1`.
pub fn three_squares(n: u64) -> Option<(u64, u64, u64)> {
    let mut b = 1;
    while b * b < n {
        let mut c = 1;
        while b * b + c * c <= n {
            let rest = n - b * b - c * c;
            let d = isqrt(rest);
            if d * d == rest && gcd(gcd(b, c), d) == 1 {
                return Some((b, c, d));
            }
            c += 1;
        }
        b += 1;
    }
    None
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "t", rename_all = "snake_case")]
pub enum Goal {
    PCycle,
    DistinctPair,
    Length(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub q: u64,
    pub k: Option<u64>,
    pub decomposition: Option<[u64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub p: u64,
    pub goal: Goal,
    pub xi: Option<HurwitzInt>,
    pub certificate: Option<Certificate>,
    /// The goal was re-checked on the permutation computed by refactoring.
    pub verified: bool,
    /// The whole search space was scanned without a hit.
    pub exhausted: bool,
    pub structure: Option<CycleStructure>,
    pub fixed_classes: Vec<usize>,
}

impl SearchReport {
    fn miss(p: u64, goal: Goal, exhausted: bool) -> Self {
        Self {
            p,
            goal,
            xi: None,
            certificate: None,
            verified: false,
            exhausted,
            structure: None,
            fixed_classes: Vec::new(),
        }
    }

    fn hit(classes: &PrimeClasses, goal: Goal, xi: HurwitzInt, certificate: Certificate) -> Result<Self> {
        let perm = permutation_direct(&xi, classes)?;
        let structure = cycle_structure(&perm)?;
        let verified = match goal {
            Goal::PCycle | Goal::DistinctPair => {
                structure.fixed_count == 1 && structure.cycle_length == Some(classes.modulus())
            }
            Goal::Length(t) => structure.cycle_length == Some(t),
        };
        Ok(Self {
            p: classes.modulus(),
            goal,
            xi: Some(xi),
            certificate: Some(certificate),
            verified,
            exhausted: false,
            structure: Some(structure),
            fixed_classes: perm.fixed_points(),
        })
    }

    /// Recomputes the permutation for the reported `ξ` and checks that it
    /// still matches the recorded structure and goal.
    pub fn replay(&self) -> Result<bool> {
        let Some(xi) = self.xi else { return Ok(!self.verified) };
        let classes = PrimeClasses::enumerate(self.p)?;
        let again = Self::hit(&classes, self.goal, xi, self.certificate.unwrap_or(Certificate {
            q: xi.norm(),
            k: None,
            decomposition: None,
        }))?;
        Ok(again.verified == self.verified
            && again.structure == self.structure
            && again.fixed_classes == self.fixed_classes)
    }
}

/// `ξ = 2 + bi + cj + dk` with `N(ξ) = 4 + (8k + r)p` prime, where
/// `r = p mod 8` and `(8k + r)p = b² + c² + d²`. Then `Re(ξ)² ≡ N(ξ)`, so
/// `τ_{ξ,p}` has one fixed point and a single `p`-cycle.
pub fn construct_p_cycle_xi(p: u64) -> Result<SearchReport> {
    construct_with_cap(p, MAX_K)
}

pub fn construct_with_cap(p: u64, max_k: u64) -> Result<SearchReport> {
    check_odd_prime(p)?;
    let classes = PrimeClasses::enumerate(p)?;
    construct_in(&classes, max_k)
}

fn construct_in(classes: &PrimeClasses, max_k: u64) -> Result<SearchReport> {
    let p = classes.modulus();
    let r = p % 8;
    for k in 0..max_k {
        let n = (8 * k + r) * p;
        if n % 8 != 1 {
            return invariant(format!("(8·{k} + {r})·{p} ≢ 1 (mod 8)"));
        }
        let q = 4 + n;
        if !is_prime(q) {
            continue;
        }
        let Some((b, c, d)) = three_squares(n) else { continue };
        let xi = HurwitzInt::new(2, b as i64, c as i64, d as i64);
        let cert = Certificate { q, k: Some(k), decomposition: Some([b, c, d]) };
        return SearchReport::hit(classes, Goal::PCycle, xi, cert);
    }
    Err(Error::SearchFailure(format!("no k < {max_k} gives a prime 4 + (8k + {r})·{p}")))
}

/// Two `ξ` with `ℓ_{ξ,p} = p` whose single fixed classes differ.
///
/// Starting from [`construct_p_cycle_xi`], the second candidate flips a
/// sign (`p ≡ 3 mod 4`) or flips and swaps coordinates (`p ≡ 1 mod 4`);
/// further sign/order variants and finally a scan over `Re(ξ) = 2` are
/// used if the first choice happens to fix the same class.
pub fn distinct_p_cycle_pair(p: u64) -> Result<(SearchReport, SearchReport)> {
    check_odd_prime(p)?;
    let classes = PrimeClasses::enumerate(p)?;
    let first = construct_in(&classes, MAX_K)?;
    let (Some(xi), Some(cert)) = (first.xi, first.certificate) else {
        return invariant("construction returned no ξ");
    };
    if !first.verified {
        return Err(Error::Theorem(format!("{xi} does not give a single {p}-cycle")));
    }
    let [b, c, d] = cert.decomposition.unwrap().map(|x| x as i64);
    let q = cert.q;

    let mut candidates = Vec::new();
    if p % 4 == 3 {
        // negate a coordinate that p does not divide
        let (b, c, d) = if b % p as i64 != 0 {
            (b, c, d)
        } else if c % p as i64 != 0 {
            (c, b, d)
        } else {
            (d, b, c)
        };
        candidates.push(HurwitzInt::new(2, -b, c, d));
    } else if c % p as i64 != 0 {
        candidates.push(HurwitzInt::new(2, b, -c, d));
    } else {
        candidates.push(HurwitzInt::new(2, -c, -b, d));
    }
    for perm in [[b, c, d], [b, d, c], [c, b, d], [c, d, b], [d, b, c], [d, c, b]] {
        for signs in 0..8 {
            let s = |i: usize| if signs >> i & 1 == 1 { -1 } else { 1 };
            candidates.push(HurwitzInt::new(2, s(0) * perm[0], s(1) * perm[1], s(2) * perm[2]));
        }
    }

    let target = first.fixed_classes.clone();
    for xi2 in candidates {
        let report = SearchReport::hit(&classes, Goal::DistinctPair, xi2, Certificate { q, ..cert })?;
        if report.verified && report.fixed_classes != target {
            return Ok((first, report));
        }
    }

    // Re(ξ) = 2, N(ξ) ≡ 4 (mod p) prime, in order of growing box
    for bound in 1..=(4 * p as i64) {
        for x in -bound..=bound {
            for y in -bound..=bound {
                for z in -bound..=bound {
                    if x.abs().max(y.abs()).max(z.abs()) != bound {
                        continue;
                    }
                    let xi2 = HurwitzInt::new(2, x, y, z);
                    let n = xi2.norm();
                    if n % p != 4 % p || !is_prime(n) || xi2.is_scalar_mod(p) {
                        continue;
                    }
                    let cert2 = Certificate { q: n, k: None, decomposition: None };
                    let report = SearchReport::hit(&classes, Goal::DistinctPair, xi2, cert2)?;
                    if report.verified && report.fixed_classes != target {
                        return Ok((first, report));
                    }
                }
            }
        }
    }
    Err(Error::SearchFailure(format!("no second ξ with a different fixed class for p = {p}")))
}

/// First `ξ` (doubled coordinates in `[−2B, 2B]`, lexicographic order) with
/// `N(ξ)` prime, `p ∤ N(ξ)` and a vanishing resultant of `f_{ξ,p}` and
/// `Φ_t`. Lengths that cannot occur return an exhausted miss immediately.
pub fn search_xi_with_length(p: u64, t: u64, bound: u64) -> Result<SearchReport> {
    check_odd_prime(p)?;
    let goal = Goal::Length(t);
    if !is_admissible_length(t, p) {
        return Ok(SearchReport::miss(p, goal, true));
    }
    let r = 2 * bound as i64;
    let hit = (-r..=r).into_par_iter().find_map_first(|a| {
        for b in -r..=r {
            if (a - b) % 2 != 0 {
                continue;
            }
            for c in (-r..=r).filter(|c| (a - c) % 2 == 0) {
                for d in (-r..=r).filter(|d| (a - d) % 2 == 0) {
                    let Ok(xi) = HurwitzInt::from_doubled([a, b, c, d]) else { continue };
                    let n = xi.norm();
                    if n == p || n % p == 0 || !is_prime(n) || xi.is_scalar_mod(p) {
                        continue;
                    }
                    match resultant_check(&xi, p, t) {
                        Ok(true) => return Some(Ok(xi)),
                        Ok(false) => {}
                        Err(e) => return Some(Err(e)),
                    }
                }
            }
        }
        None
    });
    match hit.transpose()? {
        None => Ok(SearchReport::miss(p, goal, true)),
        Some(xi) => {
            let classes = PrimeClasses::enumerate(p)?;
            let cert = Certificate { q: xi.norm(), k: None, decomposition: None };
            SearchReport::hit(&classes, goal, xi, cert)
        }
    }
}
