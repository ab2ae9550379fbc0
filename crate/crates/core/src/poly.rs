//! Sparse multivariate polynomials with rational coefficients.
//!
//! Only what the symbolic rank test needs: ring operations and a zero test.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::Rational;

/// Exponent vector, one slot per variable.
type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The polynomial `c * x_i`.
    pub fn var(nvars: usize, i: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            let mut m = vec![0; nvars];
            m[i] = 1;
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc + t
        })
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert(m, ca * cb);
            }
        }
        out
    }
}

/// Pfaffian of the skew-symmetric polynomial matrix restricted to `idx`
/// (which must have even length), by expansion along the first index.
pub fn pfaffian(m: &[Vec<Poly>], idx: &[usize]) -> Poly {
    let nvars = m[0][0].nvars;
    if idx.is_empty() {
        return Poly::constant(nvars, Rational::from_integer(1.into()));
    }
    debug_assert!(idx.len() % 2 == 0);
    let first = idx[0];
    let mut acc = Poly::zero(nvars);
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let entry = &m[first][j];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != 0 && p != k)
            .map(|(_, &v)| v)
            .collect();
        let term = entry * &pfaffian(m, &rest);
        // sign (-1)^(k+1) for 0-based position k of the partner
        acc = if k % 2 == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}
