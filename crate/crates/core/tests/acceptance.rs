//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Oracles here are deliberately naive (brute-force squares, inversion
//! counts, matrix powers, schoolbook division) so that they share as little
//! code as possible with the library paths they check.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use metacomm::arith::odd_primes;
use metacomm::classes::{enumerate_conic, enumerate_prime_classes, Conic, PrimeClasses};
use metacomm::cycles::{
    admissible_lengths, closed_form_criterion, cycle_structure, length5_condition,
    predicted_cycle_length, resultant_check, root_order_oracle, CycleStructure,
};
use metacomm::fixed::{
    common_left_right_divisors, is_fixed_proportionality, is_fixed_trace_conditions,
};
use metacomm::fp::{f_poly, phi_matrix, FpPoly, Matrix3};
use metacomm::metacommute::{permutation_conic, permutation_direct, Permutation};
use metacomm::search::{construct_p_cycle_xi, distinct_p_cycle_pair, search_xi_with_length};
use metacomm::verify::{sample_pairs, sample_xi};
use metacomm::HurwitzInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;
const Q_BOUND: u64 = 1 << 40;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

// ---- oracles ------------------------------------------------------------

fn is_qr_brute(n: i128, p: u64) -> i8 {
    let n = n.rem_euclid(p as i128) as u64;
    if n == 0 {
        0
    } else if (1..p).any(|x| x * x % p == n) {
        1
    } else {
        -1
    }
}

fn inversion_sign(image: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..image.len() {
        for j in i + 1..image.len() {
            if image[i] > image[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

/// Smallest `t ≥ 1` with `Mᵗ = I`.
fn matrix_order(m: &Matrix3) -> u64 {
    let mut acc = *m;
    let mut t = 1;
    while !acc.is_identity() {
        acc = acc.mul(m);
        t += 1;
    }
    t
}

/// All doubled vectors `D` with `ΣD² = 4n` and uniform parity.
fn brute_norm_elements(n: u64) -> Vec<[i64; 4]> {
    let target = 4 * n as i64;
    let r = (target as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let rest = target - a * a - b * b - c * c;
                if rest < 0 {
                    continue;
                }
                let d = (rest as f64).sqrt().round() as i64;
                for d in if d == 0 { vec![0] } else { vec![d, -d] } {
                    if d * d == rest && [b, c, d].iter().all(|x| (x - a) % 2 == 0) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn hamilton(a: [i64; 4], b: [i64; 4]) -> [i128; 4] {
    let [a0, a1, a2, a3] = a.map(i128::from);
    let [b0, b1, b2, b3] = b.map(i128::from);
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

/// `x/m` is a Hurwitz integer, where `x` is a product of two doubled vectors
/// (so `x/2` is the doubled vector of the product).
fn hurwitz_divisible(x: [i128; 4], m: u64) -> bool {
    let m = 2 * m as i128;
    if x.iter().any(|v| v % m != 0) {
        return false;
    }
    let q = x.map(|v| v / m);
    q.iter().all(|v| (v - q[0]) % 2 == 0)
}

fn conj(d: [i64; 4]) -> [i64; 4] {
    [d[0], -d[1], -d[2], -d[3]]
}

/// `β ∈ L_m(α) ∩ R_m(α)` by schoolbook division through conjugates.
fn brute_common_divisors(alpha: &HurwitzInt, m: u64) -> BTreeSet<[i64; 4]> {
    let a = alpha.doubled();
    brute_norm_elements(m)
        .into_iter()
        .filter(|&b| {
            hurwitz_divisible(hamilton(conj(b), a), m) && hurwitz_divisible(hamilton(a, conj(b)), m)
        })
        .collect()
}

// ---- shared sample ------------------------------------------------------

struct Sampled {
    p: u64,
    xi: HurwitzInt,
    direct: Permutation,
    conic: Permutation,
    structure: CycleStructure,
}

fn sample_set() -> Result<Vec<Sampled>, String> {
    sample_pairs(3, 200, 500, SEED, Q_BOUND)
        .into_iter()
        .map(|(p, xi)| {
            let classes = PrimeClasses::enumerate(p).map_err(|e| e.to_string())?;
            let direct = permutation_direct(&xi, &classes).map_err(|e| format!("{xi} at {p}: {e}"))?;
            let conic = permutation_conic(&xi, classes.conic()).map_err(|e| format!("{xi} at {p}: {e}"))?;
            let structure = cycle_structure(&direct).map_err(|e| format!("{xi} at {p}: {e}"))?;
            Ok(Sampled { p, xi, direct, conic, structure })
        })
        .collect()
}

// ---- criteria -----------------------------------------------------------

fn c1_class_counts() -> Outcome {
    let start = Instant::now();
    let primes = odd_primes(3, 500);
    for &p in &primes {
        let classes = enumerate_prime_classes(p).map_err(|e| e.to_string())?;
        let elements = PrimeClasses::enumerate(p).map_err(|e| e.to_string())?.element_count();
        let points = enumerate_conic(p).map_err(|e| e.to_string())?;
        ensure(classes.len() as u64 == p + 1, || format!("p={p}: {} classes", classes.len()))?;
        ensure(elements as u64 == 24 * (p + 1), || format!("p={p}: {elements} elements"))?;
        ensure(points.len() as u64 == p + 1, || format!("p={p}: {} conic points", points.len()))?;
    }
    within(start, Duration::from_secs(10))?;
    // brute-force cross-checks on a subset, outside the timed section
    for p in odd_primes(3, 60) {
        let n = brute_norm_elements(p).len() as u64;
        ensure(n == 24 * (p + 1), || format!("p={p}: brute force finds {n} elements"))?;
        let mut proj = 0;
        for x in 0..p {
            for y in 0..p {
                for z in 0..p {
                    let first = [x, y, z].into_iter().find(|&c| c != 0);
                    if first == Some(1) && (x * x + y * y + z * z) % p == 0 {
                        proj += 1;
                    }
                }
            }
        }
        ensure(proj == p + 1, || format!("p={p}: brute-force conic has {proj} points"))?;
    }
    Ok(format!("{} primes ≤ 500 in {:.2?}", primes.len(), start.elapsed()))
}

fn c2_engines(s: &[Sampled], took: Duration) -> Outcome {
    ensure(took < Duration::from_secs(60), || format!("took {took:.2?}"))?;
    for x in s {
        ensure(x.direct.same_map(&x.conic), || format!("engines differ for ξ={} p={}", x.xi, x.p))?;
    }
    Ok(format!("{} pairs in {took:.2?}", s.len()))
}

fn c3_sign(s: &[Sampled]) -> Outcome {
    for x in s {
        let q = x.xi.norm();
        let (got, want) = (inversion_sign(&x.direct.image), is_qr_brute(q as i128, x.p));
        ensure(got == want, || format!("ξ={} p={}: sign {got}, ({q}/p)={want}", x.xi, x.p))?;
        ensure(x.structure.sign == got, || "structure sign disagrees".into())?;
    }
    Ok(format!("{} pairs", s.len()))
}

fn c4_fixed(s: &[Sampled]) -> Outcome {
    let mut identities = 0;
    for x in s {
        let scalar = x.xi.doubled()[1..].iter().all(|c| c % x.p as i64 == 0);
        ensure(scalar == x.direct.is_identity(), || format!("ξ={} p={}: identity mismatch", x.xi, x.p))?;
        if scalar {
            identities += 1;
            continue;
        }
        let tr = x.xi.trace() as i128;
        let want = 1 + is_qr_brute(tr * tr - 4 * x.xi.norm() as i128, x.p);
        let got = x.direct.fixed_points().len() as i8;
        ensure(got == want, || format!("ξ={} p={}: {got} fixed, expected {want}", x.xi, x.p))?;
    }
    // ξ = a + p·i is scalar mod p; one per prime, with a minimal
    for p in odd_primes(3, 200) {
        let xi = (1..)
            .map(|a| HurwitzInt::new(a, p as i64, 0, 0))
            .find(|x| metacomm::arith::is_prime(x.norm()))
            .unwrap();
        let perm = permutation_direct(&xi, &PrimeClasses::enumerate(p).unwrap()).map_err(|e| e.to_string())?;
        ensure(perm.is_identity(), || format!("ξ={xi} p={p} is not the identity"))?;
        identities += 1;
    }
    Ok(format!("{} pairs, {identities} identity cases", s.len()))
}

fn c5_uniform(s: &[Sampled]) -> Outcome {
    for x in s {
        let p = x.p;
        let st = &x.structure;
        let Some(l) = st.cycle_length else { continue };
        let ok = match st.fixed_count {
            0 => (p + 1) % l == 0,
            1 => l == p,
            2 => (p - 1) % l == 0,
            _ => false,
        };
        ensure(ok, || format!("ξ={} p={p}: {st:?}", x.xi))?;
        let cycles = x.direct.cycles();
        ensure(cycles.iter().all(|c| c.len() == 1 || c.len() as u64 == l), || "unequal cycles".into())?;
    }
    Ok(format!("{} pairs", s.len()))
}

fn c6_theorem2(s: &[Sampled]) -> Outcome {
    let mut checked = 0;
    for x in s {
        let (p, xi) = (x.p, &x.xi);
        let Some(l) = x.structure.cycle_length else { continue };
        let err = |e: metacomm::Error| format!("ξ={xi} p={p}: {e}");
        let predicted = predicted_cycle_length(xi, p).map_err(err)?;
        let f = f_poly(xi, p).map_err(err)?;
        let root = if f == FpPoly::new(p, vec![1, p - 2, 1]) { p } else { root_order_oracle(&f).map_err(err)? };
        let mat = matrix_order(&phi_matrix(xi, p).map_err(err)?);
        ensure(l == predicted && l == root && l == mat, || {
            format!("ξ={xi} p={p}: empirical {l}, predicted {predicted}, root {root}, matrix {mat}")
        })?;
        for t in admissible_lengths(p) {
            let r = resultant_check(xi, p, t).map_err(err)?;
            ensure(r == (t == l), || format!("ξ={xi} p={p}: resultant at t={t} says {r}, ℓ={l}"))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} non-identity pairs"))
}

fn c7_example_a() -> Outcome {
    let start = Instant::now();
    let xi = HurwitzInt::new(3, -2, -2, 0);
    let f = f_poly(&xi, 19).map_err(|e| e.to_string())?;
    ensure(f == FpPoly::new(19, vec![1, 1, 1]), || format!("f = {f}"))?;
    let perm = permutation_direct(&xi, &PrimeClasses::enumerate(19).unwrap()).map_err(|e| e.to_string())?;
    let st = cycle_structure(&perm).map_err(|e| e.to_string())?;
    ensure(perm.len() == 20, || "not 20 classes".into())?;
    ensure((st.fixed_count, st.cycle_length, st.cycle_count) == (2, Some(3), 6), || format!("{st:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("f = {f}, 2 fixed + 6 three-cycles"))
}

fn c8_example_b() -> Outcome {
    let start = Instant::now();
    let xi = HurwitzInt::new(1, 2, 1, 1);
    let perm = permutation_direct(&xi, &PrimeClasses::enumerate(19).unwrap()).map_err(|e| e.to_string())?;
    let st = cycle_structure(&perm).map_err(|e| e.to_string())?;
    ensure(st.cycle_length == Some(5), || format!("{st:?}"))?;
    ensure(predicted_cycle_length(&xi, 19) == Ok(5), || "prediction differs".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("ℓ = 5, {} five-cycles", st.cycle_count))
}

/// Sampled pairs plus a searched `ξ` of length `t` for every prime ≤ 200
/// where one exists, so that rare lengths are represented.
fn with_searched(s: &[Sampled], t: u64) -> Result<Vec<(u64, HurwitzInt, CycleStructure)>, String> {
    let mut out: Vec<_> = s.iter().map(|x| (x.p, x.xi, x.structure)).collect();
    for p in odd_primes(3, 200) {
        let r = search_xi_with_length(p, t, 4).map_err(|e| e.to_string())?;
        if let (Some(xi), Some(st)) = (r.xi, r.structure) {
            out.push((p, xi, st));
        }
    }
    Ok(out)
}

fn c9_length4(s: &[Sampled]) -> Outcome {
    let mut cases = 0;
    for (p, xi, st) in with_searched(s, 4)? {
        if st.cycle_length != Some(4) {
            continue;
        }
        let want = if p % 4 == 1 { (2, (p as usize - 1) / 4) } else { (0, (p as usize + 1) / 4) };
        ensure((st.fixed_count, st.cycle_count) == want, || format!("ξ={xi} p={p}: {st:?}"))?;
        cases += 1;
    }
    ensure(cases > 0, || "no length-4 cases".into())?;
    Ok(format!("{cases} length-4 cases"))
}

fn c10_closed_forms(s: &[Sampled]) -> Outcome {
    let mut pool = with_searched(s, 5)?;
    for t in [2, 3, 4, 6] {
        pool.extend(with_searched(&[], t)?);
    }
    let mut hits = [0usize; 5];
    for (p, xi, st) in &pool {
        let Some(l) = st.cycle_length else { continue };
        for (k, t) in [2u64, 3, 4, 6].into_iter().enumerate() {
            let c = closed_form_criterion(t, xi, *p).map_err(|e| e.to_string())?;
            ensure(c == (l == t), || format!("ξ={xi} p={p} t={t}: criterion {c}, ℓ={l}"))?;
            hits[k] += c as usize;
        }
        let c5 = length5_condition(xi, *p).map_err(|e| e.to_string())?;
        ensure(c5 == (l == 5), || format!("ξ={xi} p={p}: length-5 condition {c5}, ℓ={l}"))?;
        hits[4] += c5 as usize;
    }
    ensure(hits.iter().all(|&h| h > 0), || format!("some criterion never fired: {hits:?}"))?;
    Ok(format!("{} pairs; positives for t=2,3,4,6,5: {hits:?}", pool.len()))
}

fn c11_p_cycle() -> Outcome {
    let start = Instant::now();
    let primes = odd_primes(3, 199);
    for &p in &primes {
        let r = construct_p_cycle_xi(p).map_err(|e| format!("p={p}: {e}"))?;
        let xi = r.xi.ok_or(format!("p={p}: no ξ"))?;
        let st = r.structure.ok_or(format!("p={p}: no structure"))?;
        ensure(r.verified && st.fixed_count == 1 && st.cycle_length == Some(p) && st.cycle_count == 1, || {
            format!("p={p}: ξ={xi} gives {st:?}")
        })?;
        let re = xi.real_doubled() as i128 / 2;
        ensure((re * re - xi.norm() as i128) % p as i128 == 0, || format!("p={p}: Re² ≢ N"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} primes in {:.2?}", primes.len(), start.elapsed()))
}

fn c12_distinct_pair() -> Outcome {
    let start = Instant::now();
    let primes = odd_primes(3, 99);
    for &p in &primes {
        let (a, b) = distinct_p_cycle_pair(p).map_err(|e| format!("p={p}: {e}"))?;
        let conic = Conic::new(p).unwrap();
        for r in [&a, &b] {
            let xi = r.xi.ok_or(format!("p={p}: missing ξ"))?;
            let perm = permutation_conic(&xi, &conic).map_err(|e| e.to_string())?;
            let st = cycle_structure(&perm).map_err(|e| e.to_string())?;
            ensure(st.fixed_count == 1 && st.cycle_length == Some(p), || format!("p={p}: ξ={xi}: {st:?}"))?;
            ensure(perm.fixed_points() == r.fixed_classes, || "fixed class mismatch".into())?;
        }
        ensure(a.fixed_classes != b.fixed_classes, || format!("p={p}: same fixed class"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} primes in {:.2?}", primes.len(), start.elapsed()))
}

fn c13_triple() -> Outcome {
    let mut classes_checked = 0;
    for (p, xi) in sample_pairs(3, 100, 100, SEED + 13, Q_BOUND) {
        let classes = PrimeClasses::enumerate(p).unwrap();
        let perm = permutation_direct(&xi, &classes).map_err(|e| e.to_string())?;
        for c in classes.classes() {
            let direct = perm.image[c.index] == c.index;
            let cong = is_fixed_proportionality(&c.rep, &xi, p).map_err(|e| e.to_string())?;
            let trace = is_fixed_trace_conditions(&c.rep, &xi, p).map_err(|e| e.to_string())?;
            ensure(direct == cong && direct == trace, || {
                format!("ξ={xi} p={p} π={}: direct {direct}, congruence {cong}, trace {trace}", c.rep)
            })?;
            classes_checked += 1;
        }
    }
    Ok(format!("100 pairs, {classes_checked} classes"))
}

fn c14_common_divisors() -> Outcome {
    use rand::Rng;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 14);
    let primes = odd_primes(3, 100);
    let mut nonempty = 0;
    for _ in 0..50 {
        let p = primes[rng.gen_range(0..primes.len())];
        let xi = sample_xi(&mut rng, p, 10_000);
        let classes = PrimeClasses::enumerate(p).unwrap();
        let perm = permutation_direct(&xi, &classes).map_err(|e| e.to_string())?;
        let fixed = perm.fixed_points();
        // half of the time start from a fixed class, when there is one
        let k = if rng.gen_bool(0.5) && !fixed.is_empty() {
            fixed[rng.gen_range(0..fixed.len())]
        } else {
            rng.gen_range(0..classes.len())
        };
        let pi = classes.classes()[k].rep;
        let unit = metacomm::UNITS[rng.gen_range(0..24)];
        let alpha = unit * pi * xi;
        let got: BTreeSet<[i64; 4]> = common_left_right_divisors(&alpha, p)
            .map_err(|e| format!("α={alpha}: {e}"))?
            .into_iter()
            .map(|b| b.doubled())
            .collect();
        let want = brute_common_divisors(&alpha, p);
        ensure(got == want, || format!("α={alpha} m={p}: {} vs brute force {}", got.len(), want.len()))?;
        ensure(!fixed.contains(&k) || !got.is_empty(), || {
            format!("α={alpha}: fixed class gives no common divisor")
        })?;
        nonempty += !got.is_empty() as usize;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("50 α, {nonempty} with common divisors, {:.2?}", start.elapsed()))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((1, "class counts", c1_class_counts()));

    let start = Instant::now();
    let sample = sample_set();
    let took = start.elapsed();
    match sample {
        Ok(s) => {
            results.push((2, "engine equivalence", c2_engines(&s, took)));
            results.push((3, "sign law", c3_sign(&s)));
            results.push((4, "fixed-point count", c4_fixed(&s)));
            results.push((5, "uniform cycle length", c5_uniform(&s)));
            results.push((6, "cycle length predictors", c6_theorem2(&s)));
            results.push((7, "example ξ = 3−2i−2j", c7_example_a()));
            results.push((8, "example ξ = 1+2i+j+k", c8_example_b()));
            results.push((9, "length-4 structure", c9_length4(&s)));
            results.push((10, "closed-form criteria", c10_closed_forms(&s)));
        }
        Err(e) => {
            for (n, name) in [
                (2, "engine equivalence"),
                (3, "sign law"),
                (4, "fixed-point count"),
                (5, "uniform cycle length"),
                (6, "cycle length predictors"),
                (9, "length-4 structure"),
                (10, "closed-form criteria"),
            ] {
                results.push((n, name, Err(format!("sampling failed: {e}"))));
            }
            results.push((7, "example ξ = 3−2i−2j", c7_example_a()));
            results.push((8, "example ξ = 1+2i+j+k", c8_example_b()));
        }
    }
    results.push((11, "p-cycle construction", c11_p_cycle()));
    results.push((12, "distinct fixed points", c12_distinct_pair()));
    results.push((13, "fixed-point triple equivalence", c13_triple()));
    results.push((14, "common left/right divisors", c14_common_divisors()));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
