//! The `p + 1` left-associate classes of Hurwitz primes above an odd prime
//! `p`, the conic `x² + y² + z² = 0` over 𝔽_p, and the bijection between
//! them given by the trace-zero element of the left ideal `ℋ_p π_p`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::arith::{check_odd_prime, inv_mod, isqrt, is_square, mul_mod};
use crate::error::{domain, invariant, Result};
use crate::hurwitz::HurwitzInt;

/// A point `[x:y:z]` of the conic, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct ConicPoint {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    #[serde(skip)]
    p: u64,
}

impl ConicPoint {
    /// Projective normalization of a nonzero vector. Does not check the conic.
    pub fn normalize(p: u64, v: [u64; 3]) -> Option<Self> {
        let v = v.map(|c| c % p);
        let lead = v.iter().copied().find(|&c| c != 0)?;
        let inv = inv_mod(lead, p)?;
        let [x, y, z] = v.map(|c| mul_mod(c, inv, p));
        Some(Self { x, y, z, p })
    }

    /// Normalized point, or a domain error when `v` is zero or off the conic.
    pub fn new(p: u64, v: [u64; 3]) -> Result<Self> {
        if !on_conic(p, v) {
            return domain(format!("{v:?} is not on x²+y²+z² = 0 mod {p}"));
        }
        Self::normalize(p, v).ok_or_else(|| crate::Error::Domain("zero vector".into()))
    }

    pub fn coords(&self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.x, self.y, self.z)
    }
}

pub fn on_conic(p: u64, v: [u64; 3]) -> bool {
    v.iter().fold(0, |acc, &c| (acc + mul_mod(c, c, p)) % p) == 0
}

/// All normalized points of `x² + y² + z² = 0` over 𝔽_p, sorted by `(x, y, z)`.
pub fn enumerate_conic(p: u64) -> Result<Vec<ConicPoint>> {
    check_odd_prime(p)?;
    let mut roots: HashMap<u64, Vec<u64>> = HashMap::new();
    for z in 0..p {
        roots.entry(mul_mod(z, z, p)).or_default().push(z);
    }
    let mut points = Vec::with_capacity(p as usize + 1);
    // x = 0 forces y = 1 (y = 0 would make z = 0 too) and z² = −1
    for &z in roots.get(&(p - 1)).into_iter().flatten() {
        points.push(ConicPoint { x: 0, y: 1, z, p });
    }
    for y in 0..p {
        let target = (2 * p - 1 - mul_mod(y, y, p)) % p;
        for &z in roots.get(&target).into_iter().flatten() {
            points.push(ConicPoint { x: 1, y, z, p });
        }
    }
    points.sort();
    if points.len() as u64 != p + 1 {
        return invariant(format!("conic mod {p} has {} points, expected {}", points.len(), p + 1));
    }
    Ok(points)
}

/// The conic points with a reverse index, shared by both permutation engines.
#[derive(Clone, Debug)]
pub struct Conic {
    p: u64,
    points: Vec<ConicPoint>,
    index: HashMap<ConicPoint, usize>,
}

impl Conic {
    pub fn new(p: u64) -> Result<Self> {
        let points = enumerate_conic(p)?;
        let index = points.iter().enumerate().map(|(k, pt)| (*pt, k)).collect();
        Ok(Self { p, points, index })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn points(&self) -> &[ConicPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: &ConicPoint) -> Option<usize> {
        self.index.get(point).copied()
    }
}

/// Every Hurwitz integer of norm `n` (both types), sorted by doubled coordinates.
pub fn norm_elements(n: u64) -> Vec<HurwitzInt> {
    let target = 4 * n;
    let bound = isqrt(target) as i64;
    let mut out = Vec::new();
    for d0 in -bound..=bound {
        let r0 = target - (d0 * d0) as u64;
        let parity = d0.rem_euclid(2);
        let b1 = isqrt(r0) as i64;
        for d1 in (-b1..=b1).filter(|x| x.rem_euclid(2) == parity) {
            let r1 = r0 - (d1 * d1) as u64;
            let b2 = isqrt(r1) as i64;
            for d2 in (-b2..=b2).filter(|x| x.rem_euclid(2) == parity) {
                let r2 = r1 - (d2 * d2) as u64;
                let Some(s) = is_square(r2) else { continue };
                let s = s as i64;
                if s.rem_euclid(2) != parity {
                    continue;
                }
                for d3 in if s == 0 { vec![0] } else { vec![-s, s] } {
                    out.push(HurwitzInt::from_doubled([d0, d1, d2, d3]).expect("norm-n element"));
                }
            }
        }
    }
    out
}

/// Row space basis of a set of 𝔽_p 4-vectors, by Gaussian elimination.
fn row_basis(mut rows: Vec<[u64; 4]>, p: u64) -> Vec<[u64; 4]> {
    let mut rank = 0;
    for col in 0..4 {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p).unwrap();
        rows[rank] = rows[rank].map(|c| mul_mod(c, inv, p));
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                let pivot = rows[rank];
                for c in 0..4 {
                    rows[r][c] = (rows[r][c] + p - mul_mod(f, pivot[c], p)) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// The conic point `c_π` of a prime `π` above `p`: the trace-zero element of
/// the left ideal `ℋ_p π_p`, read as `[x:y:z]`.
pub fn class_to_conic(pi: &HurwitzInt, p: u64) -> Result<ConicPoint> {
    check_odd_prime(p)?;
    if pi.norm() != p {
        return domain(format!("N({pi}) = {} is not p = {p}", pi.norm()));
    }
    let gens = [HurwitzInt::ONE, HurwitzInt::I, HurwitzInt::J, HurwitzInt::K];
    let basis = row_basis(gens.iter().map(|u| (*u * *pi).reduce_mod(p)).collect(), p);
    if basis.len() != 2 {
        return invariant(format!("left ideal of {pi} mod {p} has dimension {}", basis.len()));
    }
    let (v, w) = (basis[0], basis[1]);
    if v[0] == 0 && w[0] == 0 {
        return invariant(format!("left ideal of {pi} mod {p} is entirely trace-zero"));
    }
    // w[0]·v − v[0]·w kills the real coordinate
    let t: [u64; 4] =
        std::array::from_fn(|k| (mul_mod(w[0], v[k], p) + p - mul_mod(v[0], w[k], p)) % p);
    let point = ConicPoint::normalize(p, [t[1], t[2], t[3]])
        .ok_or_else(|| crate::Error::Invariant("trace-zero element vanished".into()))?;
    if !on_conic(p, point.coords()) {
        return invariant(format!("{point} from {pi} is off the conic mod {p}"));
    }
    Ok(point)
}

/// Canonical prime `π` above `p` whose class maps to `c`: the canonical left
/// associate of `gcrd(xi + yj + zk, p)`.
pub fn conic_to_class(c: &ConicPoint) -> Result<HurwitzInt> {
    let p = c.modulus();
    check_odd_prime(p)?;
    if !on_conic(p, c.coords()) {
        return domain(format!("{c} is not on the conic mod {p}"));
    }
    let t = HurwitzInt::new(0, c.x as i64, c.y as i64, c.z as i64);
    let g = HurwitzInt::gcrd(&t, &HurwitzInt::new(p as i64, 0, 0, 0))?;
    if g.norm() != p {
        return invariant(format!("gcrd({t}, {p}) has norm {} instead of {p}", g.norm()));
    }
    Ok(g.canonical_left_associate())
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeClass {
    pub p: u64,
    pub index: usize,
    /// Canonical left associate, of norm `p`.
    pub rep: HurwitzInt,
    pub point: ConicPoint,
}

/// The classes `Π_p`, indexed by the sort order of their conic points.
#[derive(Clone, Debug)]
pub struct PrimeClasses {
    p: u64,
    classes: Vec<PrimeClass>,
    by_rep: HashMap<HurwitzInt, usize>,
    conic: Conic,
    element_count: usize,
}

impl PrimeClasses {
    /// Exhaustive enumeration of all norm-`p` elements, grouped into
    /// left-associate classes.
    pub fn enumerate(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let elements = norm_elements(p);
        let mut seen = HashSet::with_capacity(elements.len());
        let mut reps = Vec::new();
        for e in &elements {
            if seen.contains(e) {
                continue;
            }
            let orbit = e.left_associates();
            seen.extend(orbit);
            reps.push(orbit.into_iter().min().unwrap());
        }
        let conic = Conic::new(p)?;
        let mut classes = Vec::with_capacity(reps.len());
        for rep in reps {
            let point = class_to_conic(&rep, p)?;
            let index = conic
                .index_of(&point)
                .ok_or_else(|| crate::Error::Invariant(format!("{point} not on the conic")))?;
            classes.push(PrimeClass { p, index, rep, point });
        }
        classes.sort_by_key(|c| c.index);
        if classes.len() != conic.len() || classes.iter().enumerate().any(|(k, c)| c.index != k) {
            return invariant(format!(
                "{} classes above {p} do not match the {} conic points one-to-one",
                classes.len(),
                conic.len()
            ));
        }
        let by_rep = classes.iter().map(|c| (c.rep, c.index)).collect();
        Ok(Self {
            p,
            classes,
            by_rep,
            conic,
            element_count: elements.len(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn classes(&self) -> &[PrimeClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    /// Number of norm-`p` elements seen during enumeration.
    pub fn element_count(&self) -> usize {
        self.element_count
    }

    /// Index of the class containing `pi` (any representative).
    pub fn class_of(&self, pi: &HurwitzInt) -> Option<usize> {
        self.by_rep.get(&pi.canonical_left_associate()).copied()
    }
}

/// Convenience wrapper returning the classes as a plain list.
pub fn enumerate_prime_classes(p: u64) -> Result<Vec<PrimeClass>> {
    Ok(PrimeClasses::enumerate(p)?.classes)
}
