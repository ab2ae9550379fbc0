//! Constant 2-cochains, the cocycle condition, `H²(g; R)` and the
//! cohomology index that decides integrability.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Covector, LieAlgebra};
use crate::linalg::{RatMatrix, Subspace, SubspaceReport};
use crate::rank::{self, RankOptions};
use crate::rational::{self, Rational};

/// Skew form `F_ab = F(e_a, e_b)` on an `n`-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochain {
    m: RatMatrix,
}

impl TwoCochain {
    pub fn zero(n: usize) -> Self {
        Self {
            m: RatMatrix::zeros(n, n),
        }
    }

    /// Builds `Σ v e^a∧e^b` from one-based labels, so `(1, 2, v)` is `v e¹∧e²`.
    pub fn from_labeled(n: usize, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut f = Self::zero(n);
        for (a, b, v) in entries {
            if *a == 0 || *b == 0 || *a > n || *b > n || a == b {
                return Err(Error::InvalidArgument(format!(
                    "cochain entry ({a}, {b}) out of range for dim {n}"
                )));
            }
            let cur = f.get(a - 1, b - 1) + v;
            f.set(a - 1, b - 1, cur);
        }
        Ok(f)
    }

    /// Like [`from_labeled`](Self::from_labeled) with integer values.
    pub fn from_labeled_ints(n: usize, entries: &[(usize, usize, i64)]) -> Result<Self> {
        let e: Vec<_> = entries
            .iter()
            .map(|&(a, b, v)| (a, b, rational::int(v)))
            .collect();
        Self::from_labeled(n, &e)
    }

    /// Panics unless `m` is square and skew.
    pub fn from_matrix(m: RatMatrix) -> Self {
        assert!(m.is_skew(), "cochain matrix must be skew-symmetric");
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.m[(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, v: Rational) {
        self.m[(b, a)] = -v.clone();
        self.m[(a, b)] = v;
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Unknown ordering: pairs `(a, b)`, `a < b`, lexicographic.
    pub fn pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect()
    }

    pub fn to_vector(&self) -> Vec<Rational> {
        Self::pairs(self.dim())
            .into_iter()
            .map(|(a, b)| self.get(a, b).clone())
            .collect()
    }

    pub fn from_vector(n: usize, v: &[Rational]) -> Self {
        let mut f = Self::zero(n);
        for ((a, b), x) in Self::pairs(n).into_iter().zip(v) {
            f.set(a, b, x.clone());
        }
        f
    }

    pub fn add(&self, other: &TwoCochain) -> TwoCochain {
        let n = self.dim();
        let mut out = self.clone();
        for (a, b) in Self::pairs(n) {
            out.set(a, b, self.get(a, b) + other.get(a, b));
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> TwoCochain {
        let n = self.dim();
        let mut out = self.clone();
        for (a, b) in Self::pairs(n) {
            out.set(a, b, self.get(a, b) * s);
        }
        out
    }

    /// `F(x, y)`.
    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let fy = self.m.mul_vec(y);
        x.iter()
            .zip(&fy)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn to_json(&self) -> CocycleJson {
        CocycleJson {
            dim: self.dim(),
            entries: Self::pairs(self.dim())
                .into_iter()
                .filter(|&(a, b)| !self.get(a, b).is_zero())
                .map(|(a, b)| EntryJson {
                    a: a + 1,
                    b: b + 1,
                    v: rational::format(self.get(a, b)),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &CocycleJson) -> Result<Self> {
        let mut entries = Vec::with_capacity(json.entries.len());
        for e in &json.entries {
            if e.a >= e.b {
                return Err(Error::Parse(format!(
                    "cochain entry ({}, {}) must satisfy a < b",
                    e.a, e.b
                )));
            }
            entries.push((e.a, e.b, rational::parse(&e.v)?));
        }
        Self::from_labeled(json.dim, &entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CocycleJson {
    pub dim: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EntryJson {
    pub a: usize,
    pub b: usize,
    pub v: String,
}

/// Nonzero cyclic sum at a labelled triple.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CocycleViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CocycleCheck {
    pub is_cocycle: bool,
    pub violations: Vec<CocycleViolation>,
}

fn check_dims(alg: &LieAlgebra, f: &TwoCochain) -> Result<()> {
    if f.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: f.dim(),
        });
    }
    Ok(())
}

/// `Σ_d (C^d_ab F_cd + C^d_bc F_ad + C^d_ca F_bd)`.
pub fn cyclic_residual(alg: &LieAlgebra, f: &TwoCochain, a: usize, b: usize, c: usize) -> Rational {
    (0..alg.dim()).fold(Rational::zero(), |acc, d| {
        acc + alg.c(a, b, d) * f.get(c, d)
            + alg.c(b, c, d) * f.get(a, d)
            + alg.c(c, a, d) * f.get(b, d)
    })
}

pub fn is_cocycle(alg: &LieAlgebra, f: &TwoCochain) -> Result<CocycleCheck> {
    check_dims(alg, f)?;
    let n = alg.dim();
    let mut violations = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let r = cyclic_residual(alg, f, a, b, c);
                if !r.is_zero() {
                    violations.push(CocycleViolation {
                        a: a + 1,
                        b: b + 1,
                        c: c + 1,
                        residual: rational::format(&r),
                    });
                }
            }
        }
    }
    Ok(CocycleCheck {
        is_cocycle: violations.is_empty(),
        violations,
    })
}

/// Like [`is_cocycle`] but turns the first violation into an error.
pub fn require_cocycle(alg: &LieAlgebra, f: &TwoCochain) -> Result<()> {
    let check = is_cocycle(alg, f)?;
    match check.violations.into_iter().next() {
        None => Ok(()),
        Some(v) => Err(Error::NotACocycle {
            a: v.a,
            b: v.b,
            c: v.c,
            residual: v.residual,
        }),
    }
}

/// Rows: triples `a < b < c`; columns: the unknowns `F_ab`.
fn cocycle_equations(alg: &LieAlgebra) -> RatMatrix {
    let n = alg.dim();
    let pairs = TwoCochain::pairs(n);
    let col = |x: usize, y: usize| -> Option<(usize, bool)> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => pairs.iter().position(|&p| p == (x, y)).map(|i| (i, true)),
            std::cmp::Ordering::Greater => {
                pairs.iter().position(|&p| p == (y, x)).map(|i| (i, false))
            }
            std::cmp::Ordering::Equal => None,
        }
    };
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut row = vec![Rational::zero(); pairs.len()];
                for d in 0..n {
                    for (k, x, y) in [
                        (alg.c(a, b, d), c, d),
                        (alg.c(b, c, d), a, d),
                        (alg.c(c, a, d), b, d),
                    ] {
                        if k.is_zero() {
                            continue;
                        }
                        if let Some((i, pos)) = col(x, y) {
                            if pos {
                                row[i] += k;
                            } else {
                                row[i] -= k;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return RatMatrix::zeros(0, pairs.len());
    }
    RatMatrix::from_rows(&rows)
}

/// Basis of `Z²(g; R)` in canonical reduced echelon form.
pub fn cocycle_basis(alg: &LieAlgebra) -> Vec<TwoCochain> {
    let n = alg.dim();
    let eq = cocycle_equations(alg);
    let null = if eq.nrows() == 0 {
        RatMatrix::identity(eq.ncols()).rows()
    } else {
        eq.null_space()
    };
    Subspace::from_vectors(eq.ncols(), &null)
        .basis()
        .iter()
        .map(|v| TwoCochain::from_vector(n, v))
        .collect()
}

/// `F_λ(X, Y) = ⟨λ, [X, Y]⟩`, i.e. `F_ab = Σ_c C^c_ab λ_c`.
pub fn trivial_cocycle(alg: &LieAlgebra, lam: &Covector) -> Result<TwoCochain> {
    Ok(TwoCochain::from_matrix(alg.annihilator_matrix(lam)?))
}

/// Basis of `B²(g; R)` in canonical reduced echelon form.
pub fn coboundary_space(alg: &LieAlgebra) -> Vec<TwoCochain> {
    let n = alg.dim();
    let images: Vec<Vec<Rational>> = (0..n)
        .map(|c| {
            trivial_cocycle(alg, &Covector::basis(n, c))
                .unwrap()
                .to_vector()
        })
        .collect();
    let npairs = n * (n - 1) / 2;
    Subspace::from_vectors(npairs, &images)
        .basis()
        .iter()
        .map(|v| TwoCochain::from_vector(n, v))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dim_z2: usize,
    pub dim_b2: usize,
    pub dim_h2: usize,
    pub basis_z2: Vec<CocycleJson>,
    pub basis_b2: Vec<CocycleJson>,
}

pub fn cohomology_report(alg: &LieAlgebra) -> CohomologyReport {
    let z = cocycle_basis(alg);
    let b = coboundary_space(alg);
    CohomologyReport {
        dim_z2: z.len(),
        dim_b2: b.len(),
        dim_h2: z.len() - b.len(),
        basis_z2: z.iter().map(TwoCochain::to_json).collect(),
        basis_b2: b.iter().map(TwoCochain::to_json).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub subspace: Subspace,
    /// Whether `g_F` is closed under the bracket.
    pub is_subalgebra: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KernelReport {
    #[serde(flatten)]
    pub subspace: SubspaceReport,
    pub is_subalgebra: bool,
}

impl From<&Kernel> for KernelReport {
    fn from(k: &Kernel) -> Self {
        Self {
            subspace: SubspaceReport::from(&k.subspace),
            is_subalgebra: k.is_subalgebra,
        }
    }
}

/// `g_F = { X : F(X, ·) = 0 }`.
pub fn kernel(alg: &LieAlgebra, f: &TwoCochain) -> Result<Kernel> {
    check_dims(alg, f)?;
    let n = alg.dim();
    let subspace = Subspace::from_vectors(n, &f.matrix().null_space());
    let basis = subspace.basis();
    let is_subalgebra = basis.iter().enumerate().all(|(i, x)| {
        basis[i + 1..]
            .iter()
            .all(|y| subspace.contains(&alg.bracket(x, y)))
    });
    Ok(Kernel {
        subspace,
        is_subalgebra,
    })
}

/// `ind_[F] g = n − max_λ rank(F + F_λ)` by randomized exact sampling.
pub fn cohomology_index(alg: &LieAlgebra, f: &TwoCochain, opts: &RankOptions) -> Result<usize> {
    require_cocycle(alg, f)?;
    Ok(alg.dim() - rank::max_rank_randomized(f.matrix(), &alg.bracket_matrices(), opts))
}

/// Deterministic variant via symbolic principal Pfaffians (`n ≤ 6`).
pub fn cohomology_index_symbolic(alg: &LieAlgebra, f: &TwoCochain) -> Result<usize> {
    require_cocycle(alg, f)?;
    Ok(alg.dim() - rank::max_rank_symbolic(f.matrix(), &alg.bracket_matrices())?)
}

/// Outcome of the integrability criterion `(dim g − ind_[F] g) / 2 < 2`.
/// The left side is always an integer because skew ranks are even.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Verdict {
    pub integrable: bool,
    pub lhs: usize,
    pub dim: usize,
    pub index: usize,
}

pub fn verdict_from_index(dim: usize, index: usize) -> Verdict {
    let lhs = (dim - index) / 2;
    Verdict {
        integrable: lhs < 2,
        lhs,
        dim,
        index,
    }
}

pub fn is_integrable(alg: &LieAlgebra, f: &TwoCochain, opts: &RankOptions) -> Result<Verdict> {
    Ok(verdict_from_index(
        alg.dim(),
        cohomology_index(alg, f, opts)?,
    ))
}
