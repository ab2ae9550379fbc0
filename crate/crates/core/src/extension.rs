//! One-dimensional central extensions `g̃ = g ⊕ R e₀` defined by a cocycle,
//! and verification of Casimir candidates on `g̃*`.
//!
//! In the extended algebra position 0 is the center `e₀` and position
//! `a + 1` is the base element at position `a`.

use num_traits::Zero;
use rayon::prelude::*;

use crate::cohomology::{require_cocycle, TwoCochain};
use crate::error::{Error, Result};
use crate::lie::{annihilator, Covector, LieAlgebra, StructureTable};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtension {
    pub base: LieAlgebra,
    pub cocycle: TwoCochain,
    pub extended: LieAlgebra,
}

/// Raw table of `[e_a, e_b] = C^c_ab e_c + F_ab e₀`, without any check.
pub fn extension_table(alg: &LieAlgebra, f: &TwoCochain) -> StructureTable {
    let n = alg.dim();
    let mut table = StructureTable::new(format!("{}~", alg.name()), n + 1).with_base_label(0);
    for a in 0..n {
        for b in a + 1..n {
            let mut terms: Vec<(usize, Rational)> = (0..n)
                .filter(|&c| !alg.c(a, b, c).is_zero())
                .map(|c| (c + 1, alg.c(a, b, c).clone()))
                .collect();
            if !f.get(a, b).is_zero() {
                terms.push((0, f.get(a, b).clone()));
            }
            if !terms.is_empty() {
                table.push(a + 1, b + 1, terms);
            }
        }
    }
    table
}

pub fn central_extension(alg: &LieAlgebra, f: &TwoCochain) -> Result<CentralExtension> {
    require_cocycle(alg, f)?;
    let extended = crate::lie::validate_algebra(&extension_table(alg, f))?;
    Ok(CentralExtension {
        base: alg.clone(),
        cocycle: f.clone(),
        extended,
    })
}

impl CentralExtension {
    pub fn dim(&self) -> usize {
        self.extended.dim()
    }

    /// Reads `(C, F)` back out of the extended structure constants.
    pub fn recover(&self) -> (Vec<Rational>, TwoCochain) {
        let n = self.base.dim();
        let mut c = Vec::with_capacity(n * n * n);
        let mut f = TwoCochain::zero(n);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    c.push(self.extended.c(a + 1, b + 1, k + 1).clone());
                }
                if a < b {
                    f.set(a, b, self.extended.c(a + 1, b + 1, 0).clone());
                }
            }
        }
        (c, f)
    }

    /// True iff `e₀` brackets to zero with every element.
    pub fn center_is_central(&self) -> bool {
        (0..self.dim()).all(|b| (0..self.dim()).all(|c| self.extended.c(0, b, c).is_zero()))
    }
}

/// `dim g̃^(λ⊕ε)` for `λ ∈ g*` and a nonzero central value `ε`.
pub fn extended_annihilator_dim(
    ext: &CentralExtension,
    lam: &Covector,
    eps: &Rational,
) -> Result<usize> {
    if eps.is_zero() {
        return Err(Error::InvalidArgument(
            "central value eps must be nonzero".into(),
        ));
    }
    ext.base.check_len(lam.len())?;
    let mut full = Vec::with_capacity(lam.len() + 1);
    full.push(eps.clone());
    full.extend(lam.0.iter().cloned());
    Ok(annihilator(&ext.extended, &Covector(full))?.dim())
}

/// Exact test that `K = Σ k_A f_A` Poisson-commutes with every `f_A`.
pub fn is_linear_casimir(ext: &CentralExtension, k: &[Rational]) -> Result<bool> {
    ext.extended.check_len(k.len())?;
    let m = ext.dim();
    Ok((0..m).all(|a| {
        (0..m).all(|c| {
            (0..m)
                .fold(Rational::zero(), |acc, b| {
                    acc + ext.extended.c(a, b, c) * &k[b]
                })
                .is_zero()
        })
    }))
}

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type DomainFn = Box<dyn Fn(&[f64]) -> Option<String> + Send + Sync>;

/// A function on `g̃*` with analytic gradient, tested as a Casimir.
pub struct CasimirCandidate {
    pub name: String,
    pub domain_note: String,
    value: ValueFn,
    gradient: GradFn,
    domain: DomainFn,
}

impl std::fmt::Debug for CasimirCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CasimirCandidate")
            .field("name", &self.name)
            .field("domain_note", &self.domain_note)
            .finish_non_exhaustive()
    }
}

impl CasimirCandidate {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain_note: "defined everywhere".into(),
            value: Box::new(value),
            gradient: Box::new(gradient),
            domain: Box::new(|_| None),
        }
    }

    /// `check` returns a reason when a point lies outside the domain.
    pub fn with_domain(
        mut self,
        note: impl Into<String>,
        check: impl Fn(&[f64]) -> Option<String> + Send + Sync + 'static,
    ) -> Self {
        self.domain_note = note.into();
        self.domain = Box::new(check);
        self
    }

    /// Linear function `Σ k_A f_A`.
    pub fn linear(name: impl Into<String>, k: &[Rational]) -> Self {
        let k: Vec<f64> = k.iter().map(rational::to_f64).collect();
        let kg = k.clone();
        Self::new(
            name,
            move |f| f.iter().zip(&k).map(|(x, c)| x * c).sum(),
            move |_| kg.clone(),
        )
    }

    fn check(&self, f: &[f64]) -> Result<()> {
        match (self.domain)(f) {
            None => Ok(()),
            Some(reason) => Err(Error::DomainViolation {
                name: self.name.clone(),
                reason,
            }),
        }
    }

    pub fn value(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        Ok((self.value)(f))
    }

    pub fn gradient(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check(f)?;
        Ok((self.gradient)(f))
    }

    /// Largest relative gap between the analytic gradient and a central
    /// difference with one Richardson level.
    pub fn gradient_consistency(&self, f: &[f64]) -> Result<f64> {
        let g = self.gradient(f)?;
        let mut worst = 0.0f64;
        for (i, gi) in g.iter().enumerate() {
            let h = 1e-3 * f[i].abs().max(1.0);
            let d = |h: f64| {
                let mut p = f.to_vec();
                let mut m = f.to_vec();
                p[i] += h;
                m[i] -= h;
                ((self.value)(&p) - (self.value)(&m)) / (2.0 * h)
            };
            let est = (4.0 * d(h / 2.0) - d(h)) / 3.0;
            worst = worst.max((est - gi).abs() / gi.abs().max(1.0));
        }
        Ok(worst)
    }
}

/// `max_{A, point} |Σ_{B,c} C̃^c_AB f_c ∂K/∂f_B|`.
pub fn verify_casimir(
    ext: &CentralExtension,
    k: &CasimirCandidate,
    points: &[Vec<f64>],
) -> Result<f64> {
    let m = ext.dim();
    let c: Vec<f64> = (0..m * m * m)
        .map(|i| rational::to_f64(ext.extended.c(i / (m * m), (i / m) % m, i % m)))
        .collect();
    let residuals = points
        .par_iter()
        .map(|f| {
            if f.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: f.len(),
                });
            }
            let g = k.gradient(f)?;
            let mut worst = 0.0f64;
            for a in 0..m {
                let mut s = 0.0;
                for b in 0..m {
                    for cc in 0..m {
                        s += c[(a * m + b) * m + cc] * f[cc] * g[b];
                    }
                }
                worst = worst.max(s.abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_index;
    use crate::lie::{algebra_index, validate_algebra};
    use crate::rank::RankOptions;
    use crate::rational::int;

    fn g7() -> LieAlgebra {
        validate_algebra(
            &StructureTable::new("g7", 4)
                .bracket(0, 3, &[(3, int(1))])
                .bracket(1, 3, &[(3, int(1))]),
        )
        .unwrap()
    }

    fn g7_f(al: i64, be: i64, ga: i64) -> TwoCochain {
        TwoCochain::from_labeled_ints(4, &[(1, 2, al), (1, 3, be), (2, 3, ga)]).unwrap()
    }

    #[test]
    fn g7_extension_brackets() {
        let ext = central_extension(&g7(), &g7_f(2, 3, 5)).unwrap();
        let e = &ext.extended;
        assert_eq!(e.c(1, 2, 0), &int(2));
        assert_eq!(e.c(1, 3, 0), &int(3));
        assert_eq!(e.c(2, 3, 0), &int(5));
        assert_eq!(e.c(1, 4, 4), &int(1));
        assert_eq!(e.c(2, 4, 4), &int(1));
        assert!(ext.center_is_central());
        let (c, f) = ext.recover();
        assert_eq!(f, g7_f(2, 3, 5));
        assert_eq!(c[(0 * 4 + 3) * 4 + 3], int(1));
    }

    #[test]
    fn heisenberg_and_split() {
        let e12 = TwoCochain::from_labeled_ints(2, &[(1, 2, 1)]).unwrap();
        let h = central_extension(&LieAlgebra::abelian(2), &e12).unwrap();
        assert_eq!(h.extended.c(1, 2, 0), &int(1));
        assert_eq!(
            extended_annihilator_dim(&h, &Covector::from_ints(&[3, -1]), &int(1)).unwrap(),
            1
        );
        let split = central_extension(&g7(), &TwoCochain::zero(4)).unwrap();
        assert_eq!(
            split
                .extended
                .subalgebra(&[1, 2, 3, 4], "g7")
                .unwrap()
                .dim(),
            4
        );
        let ab = central_extension(&LieAlgebra::abelian(3), &TwoCochain::zero(3)).unwrap();
        assert_eq!(
            extended_annihilator_dim(&ab, &Covector::from_ints(&[1, 2, 3]), &int(1)).unwrap(),
            4
        );
    }

    #[test]
    fn non_cocycle_rejected() {
        let bad = TwoCochain::from_labeled_ints(4, &[(3, 4, 1)]).unwrap();
        assert!(matches!(
            central_extension(&g7(), &bad),
            Err(Error::NotACocycle { .. })
        ));
        assert!(validate_algebra(&extension_table(&g7(), &bad)).is_err());
    }

    #[test]
    fn annihilator_and_index_relations() {
        let opts = RankOptions::default();
        let f = g7_f(1, 1, 1);
        let ext = central_extension(&g7(), &f).unwrap();
        let d =
            extended_annihilator_dim(&ext, &Covector::from_ints(&[7, -3, 11, 5]), &int(1)).unwrap();
        assert_eq!(d, 3);
        assert!(
            extended_annihilator_dim(&ext, &Covector::from_ints(&[1, 1, 1, 1]), &int(0)).is_err()
        );
        let ind_f = cohomology_index(&g7(), &f, &opts).unwrap();
        assert_eq!(algebra_index(&ext.extended, &opts), ind_f + 1);
        let ext2 = central_extension(&g7(), &g7_f(1, 1, 2)).unwrap();
        assert_eq!(algebra_index(&ext2.extended, &opts), 1);
    }

    #[test]
    fn linear_casimirs() {
        let ext = central_extension(&g7(), &g7_f(2, 3, 3)).unwrap();
        assert!(is_linear_casimir(&ext, &[int(1), int(0), int(0), int(0), int(0)]).unwrap());
        // β(f1 − f2) + α f3 with α = 2, β = 3
        assert!(is_linear_casimir(&ext, &[int(0), int(3), int(-3), int(2), int(0)]).unwrap());
        assert!(!is_linear_casimir(&ext, &[int(0), int(1), int(0), int(0), int(0)]).unwrap());
    }

    #[test]
    fn domain_violation_reported() {
        let ext = central_extension(&g7(), &g7_f(1, 1, 1)).unwrap();
        let k = CasimirCandidate::new(
            "log f4",
            |f| f[4].ln(),
            |f| vec![0.0, 0.0, 0.0, 0.0, 1.0 / f[4]],
        )
        .with_domain("requires f4 > 0", |f| {
            (f[4] <= 0.0).then(|| format!("f4 = {}", f[4]))
        });
        let err = verify_casimir(&ext, &k, &[vec![-1.0, 0.0, 0.0, 0.0, -2.0]]).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { .. }));
        assert!(k.gradient_consistency(&[-1.0, 0.0, 0.0, 0.0, 2.0]).unwrap() < 1e-6);
    }
}
