//! Finite-dimensional real Lie algebras given by exact structure constants.
//!
//! Internally every basis element is addressed by its zero-based position.
//! The printed label of position `i` is `base_label + i`: ordinary algebras
//! count from `e1`, central extensions count from the center `e0`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Subspace};
use crate::rank::{self, RankOptions};
use crate::rational::{self, Rational};

/// A covector in the dual basis `e^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector(pub Vec<Rational>);

impl Covector {
    pub fn zero(n: usize) -> Self {
        Covector(vec![Rational::zero(); n])
    }

    /// The dual basis covector at position `i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = rational::int(1);
        Covector(v)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Covector(v.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Unvalidated structure-constant table. Each bracket `[e_a, e_b]` is a
/// list of `(c, C^c_ab)` terms; `a > b` is stored with its sign flipped.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub name: String,
    pub dim: usize,
    pub base_label: usize,
    brackets: Vec<(usize, usize, Vec<(usize, Rational)>)>,
}

impl StructureTable {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            base_label: 1,
            brackets: Vec::new(),
        }
    }

    pub fn with_base_label(mut self, base_label: usize) -> Self {
        self.base_label = base_label;
        self
    }

    /// Adds `[e_a, e_b] += Σ v e_c` by zero-based positions.
    pub fn bracket(mut self, a: usize, b: usize, terms: &[(usize, Rational)]) -> Self {
        self.push(a, b, terms.to_vec());
        self
    }

    pub fn push(&mut self, a: usize, b: usize, terms: Vec<(usize, Rational)>) {
        self.brackets.push((a, b, terms));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    base_label: usize,
    /// `C^c_ab` at `(a * dim + b) * dim + c`.
    consts: Vec<Rational>,
}

/// Checks ranges and the Jacobi identity and returns the validated algebra.
pub fn validate_algebra(table: &StructureTable) -> Result<LieAlgebra> {
    let n = table.dim;
    if n == 0 {
        return Err(Error::InvalidStructure("dimension must be positive".into()));
    }
    let mut consts = vec![Rational::zero(); n * n * n];
    let label = |i: usize| i + table.base_label;
    for (a, b, terms) in &table.brackets {
        let (a, b) = (*a, *b);
        if a >= n || b >= n {
            return Err(Error::InvalidStructure(format!(
                "bracket [e{}, e{}] out of range",
                label(a),
                label(b)
            )));
        }
        if a == b {
            return Err(Error::InvalidStructure(format!(
                "bracket [e{}, e{}] of an element with itself",
                label(a),
                label(b)
            )));
        }
        for (c, v) in terms {
            if *c >= n {
                return Err(Error::InvalidStructure(format!(
                    "term e{} out of range",
                    label(*c)
                )));
            }
            consts[(a * n + b) * n + c] += v;
            consts[(b * n + a) * n + c] -= v;
        }
    }
    let alg = LieAlgebra {
        name: table.name.clone(),
        dim: n,
        base_label: table.base_label,
        consts,
    };
    if let Some((a, b, c, e, residual)) = alg.first_jacobi_violation() {
        return Err(Error::JacobiViolation {
            a: label(a),
            b: label(b),
            c: label(c),
            e: label(e),
            residual: rational::format(&residual),
        });
    }
    Ok(alg)
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        validate_algebra(&StructureTable::new(format!("abelian{dim}"), dim))
            .expect("abelian algebra is always valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_label(&self) -> usize {
        self.base_label
    }

    pub fn label(&self, pos: usize) -> usize {
        pos + self.base_label
    }

    /// `C^c_ab`.
    pub fn c(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.consts[(a * self.dim + b) * self.dim + c]
    }

    pub fn is_abelian(&self) -> bool {
        self.consts.iter().all(Zero::is_zero)
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (c, slot) in out.iter_mut().enumerate() {
                    let k = self.c(a, b, c);
                    if !k.is_zero() {
                        *slot += &xy * k;
                    }
                }
            }
        }
        out
    }

    /// Σ_d (C^d_ab C^e_dc + C^d_bc C^e_da + C^d_ca C^e_db).
    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize, e: usize) -> Rational {
        (0..self.dim).fold(Rational::zero(), |acc, d| {
            acc + self.c(a, b, d) * self.c(d, c, e)
                + self.c(b, c, d) * self.c(d, a, e)
                + self.c(c, a, d) * self.c(d, b, e)
        })
    }

    fn first_jacobi_violation(&self) -> Option<(usize, usize, usize, usize, Rational)> {
        let n = self.dim;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for e in 0..n {
                        let r = self.jacobi_residual(a, b, c, e);
                        if !r.is_zero() {
                            return Some((a, b, c, e, r));
                        }
                    }
                }
            }
        }
        None
    }

    /// `A(λ)_ab = Σ_c C^c_ab λ_c`.
    pub fn annihilator_matrix(&self, lam: &Covector) -> Result<RatMatrix> {
        self.check_len(lam.len())?;
        let n = self.dim;
        let mut m = RatMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                m[(a, b)] =
                    (0..n).fold(Rational::zero(), |acc, c| acc + self.c(a, b, c) * &lam.0[c]);
            }
        }
        Ok(m)
    }

    /// The matrices `(C^c_ab)_{ab}` for each `c`; `A(λ) = Σ λ_c` of these.
    pub fn bracket_matrices(&self) -> Vec<RatMatrix> {
        (0..self.dim)
            .map(|c| {
                self.annihilator_matrix(&Covector::basis(self.dim, c))
                    .unwrap()
            })
            .collect()
    }

    /// Restriction to the span of the given positions, if that span is
    /// closed under the bracket.
    pub fn subalgebra(&self, positions: &[usize], name: &str) -> Option<LieAlgebra> {
        let mut table = StructureTable::new(name, positions.len());
        for (i, &a) in positions.iter().enumerate() {
            for (j, &b) in positions.iter().enumerate().skip(i + 1) {
                let mut terms = Vec::new();
                for c in 0..self.dim {
                    let v = self.c(a, b, c);
                    if v.is_zero() {
                        continue;
                    }
                    let k = positions.iter().position(|&p| p == c)?;
                    terms.push((k, v.clone()));
                }
                table.push(i, j, terms);
            }
        }
        validate_algebra(&table).ok()
    }

    pub(crate) fn check_len(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim;
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let terms: Vec<TermJson> = (0..n)
                    .filter(|&c| !self.c(a, b, c).is_zero())
                    .map(|c| TermJson {
                        c: self.label(c),
                        v: rational::format(self.c(a, b, c)),
                    })
                    .collect();
                if !terms.is_empty() {
                    brackets.push(BracketJson {
                        a: self.label(a),
                        b: self.label(b),
                        terms,
                    });
                }
            }
        }
        AlgebraJson {
            name: self.name.clone(),
            dim: n,
            center_index: (self.base_label == 0).then_some(0),
            brackets,
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Self> {
        let base = match json.center_index {
            None => 1,
            Some(0) => 0,
            Some(other) => {
                return Err(Error::Parse(format!("center_index must be 0, got {other}")))
            }
        };
        let to_pos = |l: usize| -> Result<usize> {
            l.checked_sub(base)
                .filter(|&p| p < json.dim)
                .ok_or_else(|| Error::InvalidStructure(format!("index {l} out of range")))
        };
        let mut table = StructureTable::new(json.name.clone(), json.dim).with_base_label(base);
        for br in &json.brackets {
            if br.a >= br.b {
                return Err(Error::InvalidStructure(format!(
                    "bracket ({}, {}) must satisfy a < b",
                    br.a, br.b
                )));
            }
            let terms = br
                .terms
                .iter()
                .map(|t| Ok((to_pos(t.c)?, rational::parse(&t.v)?)))
                .collect::<Result<Vec<_>>>()?;
            table.push(to_pos(br.a)?, to_pos(br.b)?, terms);
        }
        validate_algebra(&table)
    }
}

/// Exact null space of `A(λ)`: `g^λ = { X : ⟨λ, [X, g]⟩ = 0 }`.
pub fn annihilator(alg: &LieAlgebra, lam: &Covector) -> Result<Subspace> {
    let a = alg.annihilator_matrix(lam)?;
    Ok(Subspace::from_vectors(alg.dim(), &a.null_space()))
}

/// `ind g = n − max_λ rank A(λ)`, by randomized exact sampling.
pub fn algebra_index(alg: &LieAlgebra, opts: &RankOptions) -> usize {
    let base = RatMatrix::zeros(alg.dim(), alg.dim());
    alg.dim() - rank::max_rank_randomized(&base, &alg.bracket_matrices(), opts)
}

/// Deterministic index via symbolic principal Pfaffians (`n ≤ 6`).
pub fn algebra_index_symbolic(alg: &LieAlgebra) -> Result<usize> {
    let base = RatMatrix::zeros(alg.dim(), alg.dim());
    Ok(alg.dim() - rank::max_rank_symbolic(&base, &alg.bracket_matrices())?)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_index: Option<usize>,
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketJson {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub c: usize,
    pub v: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn g7() -> LieAlgebra {
        validate_algebra(
            &StructureTable::new("g7", 4)
                .bracket(0, 3, &[(3, int(1))])
                .bracket(1, 3, &[(3, int(1))]),
        )
        .unwrap()
    }

    fn g15() -> LieAlgebra {
        validate_algebra(
            &StructureTable::new("g15", 4)
                .bracket(0, 1, &[(2, int(1))])
                .bracket(0, 2, &[(1, int(-1))])
                .bracket(1, 2, &[(0, int(1))]),
        )
        .unwrap()
    }

    #[test]
    fn abelian_and_g7_validate() {
        assert!(LieAlgebra::abelian(4).is_abelian());
        let g = g7();
        assert_eq!(g.c(0, 3, 3), &int(1));
        assert_eq!(g.c(3, 0, 3), &int(-1));
    }

    #[test]
    fn corrupted_g7_fails_jacobi() {
        let table = StructureTable::new("g7-corrupt", 4)
            .bracket(0, 3, &[(2, int(1))])
            .bracket(1, 3, &[(3, int(1))])
            .bracket(0, 1, &[(3, int(1))]);
        match validate_algebra(&table) {
            Err(Error::JacobiViolation { residual, .. }) => assert_ne!(residual, "0/1"),
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_and_self_brackets_rejected() {
        let t = StructureTable::new("x", 2).bracket(0, 2, &[]);
        assert!(matches!(
            validate_algebra(&t),
            Err(Error::InvalidStructure(_))
        ));
        let t = StructureTable::new("x", 2).bracket(1, 1, &[]);
        assert!(matches!(
            validate_algebra(&t),
            Err(Error::InvalidStructure(_))
        ));
    }

    #[test]
    fn annihilators() {
        let ab = LieAlgebra::abelian(4);
        assert_eq!(
            annihilator(&ab, &Covector::from_ints(&[3, 1, 4, 1]))
                .unwrap()
                .dim(),
            4
        );
        assert_eq!(
            annihilator(&g7(), &Covector::from_ints(&[1, 0, 0, 1]))
                .unwrap()
                .dim(),
            2
        );
        let s = annihilator(&g15(), &Covector::from_ints(&[1, 0, 0, 0])).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&Covector::basis(4, 0).0));
        assert!(s.contains(&Covector::basis(4, 3).0));
    }

    #[test]
    fn indices() {
        let opts = RankOptions::default();
        assert_eq!(algebra_index(&LieAlgebra::abelian(4), &opts), 4);
        assert_eq!(algebra_index(&g7(), &opts), 2);
        assert_eq!(algebra_index(&g15(), &opts), 2);
        assert_eq!(algebra_index_symbolic(&g7()).unwrap(), 2);
        assert_eq!(algebra_index_symbolic(&g15()).unwrap(), 2);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let j = g7().to_json();
        assert_eq!(LieAlgebra::from_json(&j).unwrap(), g7());
        let mut bad = j.clone();
        bad.brackets[0].a = 4;
        bad.brackets[0].b = 1;
        assert!(LieAlgebra::from_json(&bad).is_err());
        let mut bad = j;
        bad.brackets[0].terms[0].c = 9;
        assert!(LieAlgebra::from_json(&bad).is_err());
    }

    #[test]
    fn subalgebra_restriction() {
        let so3 = g15().subalgebra(&[0, 1, 2], "so3").unwrap();
        assert_eq!(so3.dim(), 3);
        assert!(g7()
            .subalgebra(&[0, 1], "not closed? no: abelian")
            .is_some());
        assert!(g7().subalgebra(&[0, 1, 2], "x").unwrap().is_abelian());
        assert!(g15().subalgebra(&[0, 1], "x").is_none());
    }
}
