use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::FpPoly;
use crate::arith::{divisors, mobius};
use crate::error::{domain, invariant, Error, Result};

type Cache = RwLock<HashMap<u64, Arc<Vec<i128>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn overflow() -> Error {
    Error::Overflow("cyclotomic coefficient exceeds i128".into())
}

/// `poly · (x^d − 1)`
fn mul_binomial(poly: &[i128], d: usize) -> Result<Vec<i128>> {
    let mut out = vec![0i128; poly.len() + d];
    for (k, &c) in poly.iter().enumerate() {
        out[k] = out[k].checked_sub(c).ok_or_else(overflow)?;
        out[k + d] = out[k + d].checked_add(c).ok_or_else(overflow)?;
    }
    Ok(out)
}

/// Exact quotient `poly / (x^d − 1)`.
fn div_binomial(poly: &[i128], d: usize) -> Result<Vec<i128>> {
    if poly.len() <= d {
        return invariant("binomial does not divide the running product");
    }
    let qlen = poly.len() - d;
    let mut q = vec![0i128; qlen];
    // poly_k = q_{k−d} − q_k
    for k in 0..qlen {
        let prev = if k >= d { q[k - d] } else { 0 };
        q[k] = prev.checked_sub(poly[k]).ok_or_else(overflow)?;
    }
    for k in qlen..poly.len() {
        let prev = if k >= d { q[k - d] } else { 0 };
        if poly[k] != prev {
            return invariant("binomial division left a remainder");
        }
    }
    Ok(q)
}

/// Integer coefficients (ascending) of the `t`-th cyclotomic polynomial,
/// from `Φ_t = ∏_{d | t} (x^d − 1)^{μ(t/d)}`. Results are cached by `t`.
pub fn cyclotomic_integer(t: u64) -> Result<Arc<Vec<i128>>> {
    if t == 0 {
        return domain("cyclotomic polynomial index must be positive");
    }
    if let Some(hit) = cache().read().unwrap().get(&t) {
        return Ok(Arc::clone(hit));
    }
    let divs = divisors(t);
    let mut acc = vec![1i128];
    for &d in &divs {
        if mobius(t / d) == 1 {
            acc = mul_binomial(&acc, d as usize)?;
        }
    }
    for &d in &divs {
        if mobius(t / d) == -1 {
            acc = div_binomial(&acc, d as usize)?;
        }
    }
    let value = Arc::new(acc);
    cache().write().unwrap().insert(t, Arc::clone(&value));
    Ok(value)
}

/// The `t`-th cyclotomic polynomial reduced modulo `p` (any `t ≥ 1`,
/// including `p | t`).
pub fn cyclotomic(t: u64, p: u64) -> Result<FpPoly> {
    Ok(FpPoly::from_signed(p, &cyclotomic_integer(t)?))
}
