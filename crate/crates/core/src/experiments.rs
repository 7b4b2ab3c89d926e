//! Empirical checks of the density formulas: exact enumeration over small
//! boxes, seeded Monte Carlo estimates over large ones, and brute-force
//! full-rank counts over prime fields.

use std::num::NonZeroUsize;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::density::{count_full_rank_mod_p, density_exact, local_density, PrimeSet, Rational};
use crate::error::{Error, Result};
use crate::matrix::{full_rank_minor_gcd, Combinations, IntMatrix};
use crate::rng::{derive_seed, SplitMix64};
use crate::serde_util::as_string;

/// Default cap on the number of matrices an exhaustive run may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Tolerance used for the theoretical value attached to estimates.
pub const THEORY_TOL: f64 = 1e-12;

/// `k × n` matrices with entries in the half-open box `[-bound, bound)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    pub k: u32,
    pub n: u32,
    #[serde(serialize_with = "as_string")]
    pub bound: u64,
}

impl BoxSpec {
    pub fn new(k: u32, n: u32, bound: u64) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::domain(format!("dimensions must be positive, got k={k}, n={n}")));
        }
        if k > n {
            return Err(Error::domain(format!("k must not exceed n (got k={k}, n={n})")));
        }
        if bound == 0 || bound > (1 << 62) {
            return Err(Error::domain(format!("bound must lie in [1, 2^62], got {bound}")));
        }
        Ok(BoxSpec { k, n, bound })
    }

    fn entries(&self) -> usize {
        (self.k * self.n) as usize
    }

    /// `(2B)^{kn}`, the number of matrices in the box.
    pub fn total(&self) -> BigInt {
        BigInt::from(2 * self.bound).pow(self.k * self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub spec: BoxSpec,
    #[serde(serialize_with = "as_string")]
    pub total: BigInt,
    #[serde(serialize_with = "as_string")]
    pub hits: u64,
    #[serde(serialize_with = "as_string")]
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub spec: BoxSpec,
    #[serde(serialize_with = "as_string")]
    pub samples: u64,
    #[serde(serialize_with = "as_string")]
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
    #[serde(serialize_with = "as_string")]
    pub seed: u64,
    pub shards: usize,
    pub theory_value: f64,
    /// `(estimate - theory) / std_error`; absent when the standard error is zero.
    pub z_score: Option<f64>,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str = "B,samples,hits,estimate,std_error,theory,z";

    pub fn csv_row(&self) -> String {
        let z = self.z_score.map(|z| z.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.spec.bound, self.samples, self.hits, self.estimate, self.std_error, self.theory_value, z
        )
    }

    /// Whether the estimate lies within `width` standard errors of theory.
    pub fn within(&self, width: f64) -> bool {
        (self.estimate - self.theory_value).abs() <= width * self.std_error
    }
}

/// Where sample `i` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleStream {
    /// Counter-based pseudo-random draw keyed by `(seed, i)`.
    Seeded(u64),
    /// The `i`-th matrix of the box in mixed-radix order.
    Enumerate,
}

impl SampleStream {
    fn fill(&self, spec: &BoxSpec, index: u64, out: &mut [i64]) {
        match *self {
            SampleStream::Seeded(seed) => {
                let mut g = SplitMix64::for_sample(seed, index);
                for x in out.iter_mut() {
                    *x = g.in_box(spec.bound);
                }
            }
            SampleStream::Enumerate => {
                let width = u128::from(2 * spec.bound);
                let mut rest = u128::from(index);
                for x in out.iter_mut().rev() {
                    *x = (rest % width) as i64 - spec.bound as i64;
                    rest /= width;
                }
            }
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant of a small square matrix in `i128`; `None` on overflow.
/// Bareiss intermediates are minors, so only the products can overflow.
fn det_i128(a: &mut [i128], t: usize) -> Option<i128> {
    let mut negate = false;
    let mut prev: i128 = 1;
    for c in 0..t.saturating_sub(1) {
        if a[c * t + c] == 0 {
            let Some(p) = (c + 1..t).find(|&i| a[i * t + c] != 0) else {
                return Some(0);
            };
            for j in 0..t {
                a.swap(c * t + j, p * t + j);
            }
            negate = !negate;
        }
        let pivot = a[c * t + c];
        for i in c + 1..t {
            let lead = a[i * t + c];
            for j in c + 1..t {
                let lhs = pivot.checked_mul(a[i * t + j])?;
                let rhs = lead.checked_mul(a[c * t + j])?;
                a[i * t + j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = pivot;
    }
    let d = a[t * t - 1];
    Some(if negate { -d } else { d })
}

/// Unimodularity of a `k × n` matrix with machine-size entries.
///
/// Uses `u64` gcds for one row and `i128` fraction-free elimination for the
/// minors otherwise, falling back to big integers whenever a product would
/// overflow.
pub fn is_unimodular_small(entries: &[i64], k: usize, n: usize) -> bool {
    debug_assert_eq!(entries.len(), k * n);
    if k == 1 {
        let mut g = 0u64;
        for &x in entries {
            g = g.gcd(&x.unsigned_abs());
            if g == 1 {
                return true;
            }
        }
        return false;
    }
    let mut g = 0u128;
    let mut scratch = Vec::with_capacity(k * k);
    for cols in Combinations::new(n, k) {
        match exact_minor(entries, n, k, &cols, &mut scratch) {
            Some(d) => {
                g = gcd_u128(g, d.unsigned_abs());
                if g == 1 {
                    return true;
                }
            }
            None => {
                let m = IntMatrix::from_i64(k, n, entries).expect("shape checked");
                return full_rank_minor_gcd(&m).map(|g| g == BigInt::from(1)).unwrap_or(false);
            }
        }
    }
    false
}

fn exact_minor(entries: &[i64], n: usize, t: usize, cols: &[usize], scratch: &mut Vec<i128>) -> Option<i128> {
    scratch.clear();
    for i in 0..t {
        for &j in cols {
            scratch.push(i128::from(entries[i * n + j]));
        }
    }
    det_i128(scratch, t).or_else(|| {
        let big: Vec<BigInt> = (0..t)
            .flat_map(|i| cols.iter().map(move |&j| BigInt::from(entries[i * n + j])))
            .collect();
        let det = IntMatrix::new(t, t, big).ok()?.determinant().ok()?;
        i128::try_from(det).ok()
    })
}

fn worker_count() -> usize {
    std::thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

/// Splits `0..total` into `parts` contiguous ranges and sums `count` over them in parallel.
fn parallel_sum<F>(total: u64, parts: usize, count: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync,
{
    let parts = parts.max(1) as u64;
    let bounds: Vec<u64> = (0..=parts)
        .map(|i| (u128::from(total) * u128::from(i) / u128::from(parts)) as u64)
        .collect();
    if parts == 1 {
        return count(0..total);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .windows(2)
            .map(|w| {
                let range = w[0]..w[1];
                let count = &count;
                scope.spawn(move || count(range))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}

fn count_hits(spec: &BoxSpec, stream: SampleStream, range: Range<u64>) -> u64 {
    let (k, n) = (spec.k as usize, spec.n as usize);
    let mut buf = vec![0i64; spec.entries()];
    let mut hits = 0;
    for i in range {
        stream.fill(spec, i, &mut buf);
        if is_unimodular_small(&buf, k, n) {
            hits += 1;
        }
    }
    hits
}

fn check_budget(total: &BigInt, budget: u64) -> Result<u64> {
    match u64::try_from(total) {
        Ok(t) if t <= budget => Ok(t),
        _ => Err(Error::BudgetExceeded {
            required: total.to_string(),
            budget,
        }),
    }
}

/// Exact density of unimodular matrices inside the box, by enumeration.
pub fn exhaustive_density(spec: BoxSpec, budget: u64) -> Result<ExhaustiveReport> {
    let total_big = spec.total();
    let total = check_budget(&total_big, budget)?;
    let parts = if total < 1 << 16 { 1 } else { worker_count() };
    let hits = parallel_sum(total, parts, |r| count_hits(&spec, SampleStream::Enumerate, r));
    Ok(ExhaustiveReport {
        spec,
        density: Rational::new(BigInt::from(hits), total_big.clone()),
        total: total_big,
        hits,
    })
}

/// Estimate from an explicit sample stream. Sample `i` is the same matrix
/// regardless of `shards`, so `hits` depends only on `(spec, samples, stream)`.
pub fn estimate_with_stream(
    spec: BoxSpec,
    samples: u64,
    stream: SampleStream,
    shards: usize,
) -> Result<EstimateReport> {
    if samples == 0 {
        return Err(Error::domain("samples must be positive"));
    }
    if shards == 0 {
        return Err(Error::domain("shards must be at least 1"));
    }
    if stream == SampleStream::Enumerate && BigInt::from(samples) > spec.total() {
        return Err(Error::domain(format!(
            "cannot enumerate {samples} samples from a box of {} matrices",
            spec.total()
        )));
    }
    let theory = density_exact(spec.k, spec.n, THEORY_TOL)?.value_f64();
    let hits = parallel_sum(samples, shards, |r| count_hits(&spec, stream, r));
    let estimate = hits as f64 / samples as f64;
    let std_error = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    let z_score = (std_error > 0.0).then(|| (estimate - theory) / std_error);
    Ok(EstimateReport {
        spec,
        samples,
        hits,
        estimate,
        std_error,
        seed: match stream {
            SampleStream::Seeded(s) => s,
            SampleStream::Enumerate => 0,
        },
        shards,
        theory_value: theory,
        z_score,
    })
}

/// Monte Carlo estimate of the unimodular density with `samples` seeded draws.
pub fn estimate_density(spec: BoxSpec, samples: u64, seed: u64, shards: usize) -> Result<EstimateReport> {
    if samples < 100 {
        return Err(Error::domain(format!("samples must be at least 100, got {samples}")));
    }
    estimate_with_stream(spec, samples, SampleStream::Seeded(seed), shards)
}

/// One estimate per bound, each drawn from a stream derived from `seed` and
/// the bound. Boxes with no more than `samples` matrices are enumerated
/// completely instead, giving an exact value.
pub fn convergence_sweep(
    k: u32,
    n: u32,
    bounds: &[u64],
    samples: u64,
    seed: u64,
    shards: usize,
) -> Result<Vec<EstimateReport>> {
    if bounds.is_empty() {
        return Err(Error::domain("bounds must be nonempty"));
    }
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("bounds must be strictly increasing"));
    }
    bounds
        .iter()
        .map(|&b| {
            let spec = BoxSpec::new(k, n, b)?;
            let total = spec.total();
            if total <= BigInt::from(samples) {
                let all = u64::try_from(&total).expect("bounded by samples");
                estimate_with_stream(spec, all, SampleStream::Enumerate, shards)
            } else {
                estimate_density(spec, samples, derive_seed(seed, b), shards)
            }
        })
        .collect()
}

/// Brute-force full-rank count over `Z/pZ` next to the closed-form local density.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalComparison {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    #[serde(serialize_with = "as_string")]
    pub total: u64,
    #[serde(serialize_with = "as_string")]
    pub full_rank: u64,
    #[serde(serialize_with = "as_string")]
    pub formula_count: BigInt,
    #[serde(serialize_with = "as_string")]
    pub empirical: Rational,
    #[serde(serialize_with = "as_string")]
    pub theory: Rational,
    pub equal: bool,
}

/// Rank of a matrix over `Z/pZ` by Gaussian elimination.
pub fn rank_mod_p(entries: &mut [u64], k: usize, n: usize, p: u64) -> usize {
    let inv = |a: u64| -> u64 {
        // Fermat: a^(p-2)
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = (u128::from(acc) * u128::from(base) % u128::from(p)) as u64;
            }
            base = (u128::from(base) * u128::from(base) % u128::from(p)) as u64;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..n {
        if rank == k {
            break;
        }
        let Some(piv) = (rank..k).find(|&i| !entries[i * n + col].is_multiple_of(p)) else {
            continue;
        };
        for j in 0..n {
            entries.swap(rank * n + j, piv * n + j);
        }
        let scale = inv(entries[rank * n + col]);
        for i in rank + 1..k {
            let f = entries[i * n + col] % p * scale % p;
            if f == 0 {
                continue;
            }
            for j in col..n {
                let sub = f * entries[rank * n + j] % p;
                entries[i * n + j] = (entries[i * n + j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Enumerates all `p^{kn}` matrices over `Z/pZ`, counts the full-rank ones
/// and compares the fraction with `local_density({p}, k, n)`.
pub fn verify_local_density(p: u64, k: u32, n: u32, budget: u64) -> Result<LocalComparison> {
    let primes = PrimeSet::single(p)?;
    let theory = local_density(&primes, k, n)?;
    let formula_count = count_full_rank_mod_p(p, k, n)?;
    if p > u64::from(u32::MAX) {
        return Err(Error::BudgetExceeded {
            required: BigInt::from(p).pow(k * n).to_string(),
            budget,
        });
    }
    let total_big = BigInt::from(p).pow(k * n);
    let total = check_budget(&total_big, budget)?;
    let (ku, nu) = (k as usize, n as usize);
    let parts = if total < 1 << 16 { 1 } else { worker_count() };
    let full_rank = parallel_sum(total, parts, |range| {
        let mut buf = vec![0u64; ku * nu];
        let mut hits = 0;
        for index in range {
            let mut rest = index;
            for x in buf.iter_mut().rev() {
                *x = rest % p;
                rest /= p;
            }
            if rank_mod_p(&mut buf, ku, nu, p) == ku {
                hits += 1;
            }
        }
        hits
    });
    let empirical = Rational::new(BigInt::from(full_rank), total_big);
    Ok(LocalComparison {
        p,
        k,
        n,
        total,
        full_rank,
        equal: empirical == theory && BigInt::from(full_rank) == formula_count,
        formula_count,
        empirical,
        theory,
    })
}
