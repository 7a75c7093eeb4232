//! Fixed points of the metacommutation map through common left and right
//! divisors: the coordinate proportionality congruences and the equivalent
//! trace conditions `Re(δ_i π ξ) ≡ 0 (mod p)`.

use serde::Serialize;

use crate::arith::check_odd_prime;
use crate::classes::{norm_elements, PrimeClasses};
use crate::cycles::cycle_structure;
use crate::error::{domain, Error, Result};
use crate::fp::check_prime_pair;
use crate::hurwitz::HurwitzInt;
use crate::metacommute::permutation_direct;

/// Upper bound on `m` for the exhaustive divisor scan.
pub const MAX_DIVISOR_NORM: u64 = 1_000_000;

/// Coordinates `a_i′`: `a_i` for Lipschitz elements, `2a_i` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DoubledCoords(pub [i64; 4]);

impl DoubledCoords {
    pub fn of(x: &HurwitzInt) -> Self {
        Self(x.integer_coords().unwrap_or_else(|| x.doubled()))
    }

    /// `a_i′ b_j′ ≡ a_j′ b_i′ (mod m)` for all `i ≠ j`.
    pub fn proportional_mod(&self, other: &Self, m: u64) -> bool {
        let m = m as i128;
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                let lhs = self.0[i] as i128 * other.0[j] as i128;
                let rhs = self.0[j] as i128 * other.0[i] as i128;
                (lhs - rhs).rem_euclid(m) == 0
            })
        })
    }
}

/// All `β` of norm `m` whose coordinates are proportional to those of `α`
/// modulo `m`; each is checked to divide `α` exactly on both sides.
pub fn common_left_right_divisors(alpha: &HurwitzInt, m: u64) -> Result<Vec<HurwitzInt>> {
    if !alpha.is_primitive()? {
        return domain(format!("{alpha} is not primitive"));
    }
    if m % 2 == 0 {
        return domain(format!("m = {m} must be odd"));
    }
    if alpha.norm() % m != 0 {
        return domain(format!("m = {m} does not divide N({alpha}) = {}", alpha.norm()));
    }
    if m > MAX_DIVISOR_NORM {
        return domain(format!("m = {m} exceeds the scan limit {MAX_DIVISOR_NORM}"));
    }
    let a = DoubledCoords::of(alpha);
    let mut out = Vec::new();
    for beta in norm_elements(m) {
        if !a.proportional_mod(&DoubledCoords::of(&beta), m) {
            continue;
        }
        if alpha.left_quotient(&beta).is_none() || alpha.right_quotient(&beta).is_none() {
            return Err(Error::Theorem(format!(
                "{beta} satisfies the congruences mod {m} but does not divide {alpha} on both sides"
            )));
        }
        out.push(beta);
    }
    Ok(out)
}

fn check_fixed_inputs(pi: &HurwitzInt, xi: &HurwitzInt, p: u64) -> Result<()> {
    check_odd_prime(p)?;
    if pi.norm() != p {
        return domain(format!("N({pi}) = {} is not p = {p}", pi.norm()));
    }
    check_prime_pair(xi, p)
}

/// Fixed-point test through the proportionality of `πξ` and `π` modulo `p`.
pub fn is_fixed_proportionality(pi: &HurwitzInt, xi: &HurwitzInt, p: u64) -> Result<bool> {
    check_fixed_inputs(pi, xi, p)?;
    let alpha = pi.checked_mul(xi)?;
    Ok(DoubledCoords::of(&alpha).proportional_mod(&DoubledCoords::of(pi), p))
}

/// Left associate of `π` with integer coordinates and real part not
/// divisible by `p`, first in doubled-coordinate order.
///
/// Among the eight associates `±π, ±iπ, ±jπ, ±kπ` of a Lipschitz `π` the real
/// parts run over `±b_0, ±b_1, ±b_2, ±b_3`, and they cannot all vanish.
pub fn lipschitz_representative(pi: &HurwitzInt, p: u64) -> Result<HurwitzInt> {
    pi.left_associates()
        .into_iter()
        .filter(|u| u.is_lipschitz() && (u.real_doubled() / 2).rem_euclid(p as i64) != 0)
        .min()
        .ok_or_else(|| Error::Invariant(format!("no Lipschitz associate of {pi} with p ∤ Re")))
}

/// The three conditions `Re(δ_i π ξ) ≡ 0 (mod p)` (doubled when `ξ` is not
/// Lipschitz) for a given Lipschitz representative `π`, with
/// `δ_1 = b_1 + b_0 i`, `δ_2 = b_2 + b_0 j`, `δ_3 = b_3 + b_0 k`.
pub fn trace_conditions_for(rep: &HurwitzInt, xi: &HurwitzInt, p: u64) -> Result<bool> {
    let [b0, b1, b2, b3] = rep
        .integer_coords()
        .ok_or_else(|| Error::Domain(format!("{rep} is not in the Lipschitz order")))?;
    let deltas = [
        HurwitzInt::new(b1, b0, 0, 0),
        HurwitzInt::new(b2, 0, b0, 0),
        HurwitzInt::new(b3, 0, 0, b0),
    ];
    let gamma = rep.checked_mul(xi)?;
    for delta in deltas {
        if delta.checked_mul(&gamma)?.real_doubled().rem_euclid(p as i64) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fixed-point test through the trace conditions, after moving `π` to a
/// Lipschitz representative.
pub fn is_fixed_trace_conditions(pi: &HurwitzInt, xi: &HurwitzInt, p: u64) -> Result<bool> {
    check_fixed_inputs(pi, xi, p)?;
    trace_conditions_for(&lipschitz_representative(pi, p)?, xi, p)
}

/// For the Lipschitz representative `π` and `α = πξ`: whenever
/// `a_0 b_i ≡ a_i b_0` for `i = 1, 2, 3`, also `a_i b_j ≡ a_j b_i` for
/// `1 ≤ i < j ≤ 3`. Returns false only on a counterexample.
pub fn first_three_imply_last_three(pi: &HurwitzInt, xi: &HurwitzInt, p: u64) -> Result<bool> {
    check_fixed_inputs(pi, xi, p)?;
    let rep = lipschitz_representative(pi, p)?;
    let a = DoubledCoords::of(&rep.checked_mul(xi)?).0.map(i128::from);
    let b = DoubledCoords::of(&rep).0.map(i128::from);
    let m = p as i128;
    let cong = |i: usize, j: usize| (a[i] * b[j] - a[j] * b[i]).rem_euclid(m) == 0;
    let first = (1..4).all(|i| cong(0, i));
    let last = cong(1, 2) && cong(1, 3) && cong(2, 3);
    Ok(!first || last)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedMethod {
    Direct,
    Congruence,
    Trace,
}

/// Indices of the classes fixed by `τ_{ξ,p}` according to `method`.
pub fn fixed_classes(xi: &HurwitzInt, classes: &PrimeClasses, method: FixedMethod) -> Result<Vec<usize>> {
    let p = classes.modulus();
    match method {
        FixedMethod::Direct => {
            let perm = permutation_direct(xi, classes)?;
            cycle_structure(&perm)?;
            Ok(perm.fixed_points())
        }
        FixedMethod::Congruence | FixedMethod::Trace => {
            let mut out = Vec::new();
            for class in classes.classes() {
                let fixed = if method == FixedMethod::Congruence {
                    is_fixed_proportionality(&class.rep, xi, p)?
                } else {
                    is_fixed_trace_conditions(&class.rep, xi, p)?
                };
                if fixed {
                    out.push(class.index);
                }
            }
            Ok(out)
        }
    }
}
