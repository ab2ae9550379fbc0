//! Generic rank of an affine pencil of skew-symmetric matrices
//! `M(λ) = B + Σ_c λ_c D_c`.
//!
//! Two independent routes are provided:
//!
//! * [`max_rank_randomized`] samples integer `λ` uniformly from
//!   `[-R, R]^k` and takes the largest exact rank seen. The set where the
//!   rank drops below its generic value is the zero set of a nonzero
//!   principal Pfaffian of degree at most `⌊n/2⌋`, so by Schwartz–Zippel one
//!   trial misses with probability at most `⌊n/2⌋ / (2R + 1)` and `t`
//!   independent trials all miss with probability at most that to the `t`.
//!   With the defaults (`R = 10^6`, `t = 8`) and `n ≤ 16` this is below
//!   `10^-40`, far under `2^-40`.
//! * [`max_rank_symbolic`] treats `λ` as indeterminates and looks for the
//!   largest principal sub-Pfaffian that is a nonzero polynomial. It is
//!   exact and deterministic but exponential, so it is limited to `n ≤ 6`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{pfaffian, Poly};
use crate::rational::Rational;

pub const DEFAULT_TRIALS: usize = 8;
pub const DEFAULT_RANGE: i64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const SYMBOLIC_MAX_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub trials: usize,
    pub seed: u64,
    /// Sample entries are drawn from `[-range, range]`.
    pub range: i64,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            range: DEFAULT_RANGE,
        }
    }
}

impl RankOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Upper bound on the probability that every trial lands on the
    /// rank-deficient locus of an `n × n` skew pencil.
    pub fn failure_bound(&self, n: usize) -> f64 {
        let per_trial = (n / 2) as f64 / (2.0 * self.range as f64 + 1.0);
        per_trial.powi(self.trials as i32)
    }
}

fn combine(base: &RatMatrix, dirs: &[RatMatrix], lambda: &[Rational]) -> RatMatrix {
    let mut m = base.clone();
    for (d, l) in dirs.iter().zip(lambda) {
        if num_traits::Zero::is_zero(l) {
            continue;
        }
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = &d[(i, j)] * l;
                m[(i, j)] += v;
            }
        }
    }
    m
}

/// Largest even number not exceeding `n`: the rank ceiling of a skew matrix.
fn skew_ceiling(n: usize) -> usize {
    n - n % 2
}

pub fn max_rank_randomized(base: &RatMatrix, dirs: &[RatMatrix], opts: &RankOptions) -> usize {
    let n = base.nrows();
    let ceiling = skew_ceiling(n);
    let mut best = base.rank();
    if dirs.is_empty() || best == ceiling {
        return best;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.trials {
        let lambda: Vec<Rational> = (0..dirs.len())
            .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-opts.range..=opts.range))))
            .collect();
        best = best.max(combine(base, dirs, &lambda).rank());
        if best == ceiling {
            break;
        }
    }
    best
}

pub fn max_rank_symbolic(base: &RatMatrix, dirs: &[RatMatrix]) -> Result<usize> {
    let n = base.nrows();
    if n > SYMBOLIC_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "symbolic rank limited to n <= {SYMBOLIC_MAX_DIM}, got {n}"
        )));
    }
    let nvars = dirs.len().max(1);
    let mut m = vec![vec![Poly::zero(nvars); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut p = Poly::constant(nvars, base[(i, j)].clone());
            for (c, d) in dirs.iter().enumerate() {
                p = &p + &Poly::var(nvars, c, d[(i, j)].clone());
            }
            *entry = p;
        }
    }
    for half in (1..=n / 2).rev() {
        if subsets(n, 2 * half)
            .iter()
            .any(|s| !pfaffian(&m, s).is_zero())
        {
            return Ok(2 * half);
        }
    }
    Ok(0)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
