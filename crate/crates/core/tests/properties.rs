use magflow::catalog::expr::Bindings;
use magflow::catalog::Catalog;
use magflow::cohomology::{
    cocycle_basis, cohomology_index, cohomology_index_symbolic, cohomology_report, is_cocycle,
    trivial_cocycle,
};
use magflow::extension::{central_extension, extension_table};
use magflow::lie::{algebra_index, validate_algebra};
use magflow::linalg::RatMatrix;
use magflow::rational::{frac, int};
use magflow::{Covector, LieAlgebra, RankOptions, Rational, TwoCochain};
use proptest::prelude::*;

fn instantiate(id: &str, value: Rational) -> LieAlgebra {
    let e = Catalog::embedded().entry(id).unwrap();
    let env: Bindings = e
        .params
        .iter()
        .map(|p| {
            (
                p.name.clone(),
                if p.name == "eps" {
                    int(1)
                } else {
                    value.clone()
                },
            )
        })
        .collect();
    e.algebra(&env).unwrap()
}

fn algebras() -> Vec<LieAlgebra> {
    Catalog::embedded()
        .entries
        .iter()
        .map(|e| instantiate(&e.id, frac(-3, 2)))
        .collect()
}

fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

/// Max rank of `F + Σ λ_c C^c` over λ ∈ {−2..2}^n. Minors of a 4×4 skew
/// matrix have degree ≤ 2 in λ, so a grid of width 5 cannot miss them.
fn grid_max_rank(alg: &LieAlgebra, f: &TwoCochain) -> usize {
    let n = alg.dim();
    let mats = alg.bracket_matrices();
    let mut best = 0;
    let total = 5usize.pow(n as u32);
    for code in 0..total {
        let lam: Vec<i64> = (0..n)
            .map(|c| (code / 5usize.pow(c as u32) % 5) as i64 - 2)
            .collect();
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut v = f.get(a, b).clone();
                        for (c, m) in mats.iter().enumerate() {
                            v += &m[(a, b)] * int(lam[c]);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        best = best.max(RatMatrix::from_rows(&rows).rank());
    }
    best
}

fn combo(basis: &[TwoCochain], n: usize, coeffs: &[Rational]) -> TwoCochain {
    basis
        .iter()
        .zip(coeffs)
        .fold(TwoCochain::zero(n), |acc, (b, c)| acc.add(&b.scale(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_jacobi_iff_cocycle(idx in 0usize..16, v in prop::collection::vec(rat(), 6)) {
        let alg = &algebras()[idx];
        let f = TwoCochain::from_vector(4, &v);
        let jac = validate_algebra(&extension_table(alg, &f)).is_ok();
        prop_assert_eq!(jac, is_cocycle(alg, &f).unwrap().is_cocycle);
    }

    #[test]
    fn cocycles_extend(idx in 0usize..16, c in prop::collection::vec(rat(), 6)) {
        let alg = &algebras()[idx];
        let basis = cocycle_basis(alg);
        let f = combo(&basis, 4, &c);
        let ext = central_extension(alg, &f).unwrap();
        prop_assert!(ext.center_is_central());
        prop_assert_eq!(ext.recover().1, f);
    }

    #[test]
    fn index_matches_grid_and_symbolic(
        idx in 0usize..16,
        c in prop::collection::vec(rat(), 6),
        lam in prop::collection::vec(rat(), 4),
        seed in any::<u64>(),
    ) {
        let alg = &algebras()[idx];
        let f = combo(&cocycle_basis(alg), 4, &c);
        let ind = cohomology_index(alg, &f, &RankOptions::with_seed(seed)).unwrap();
        prop_assert_eq!(ind, 4 - grid_max_rank(alg, &f));
        prop_assert_eq!(ind, cohomology_index_symbolic(alg, &f).unwrap());
        prop_assert_eq!(ind % 2, 0);
        let shifted = f.add(&trivial_cocycle(alg, &Covector(lam)).unwrap());
        prop_assert_eq!(cohomology_index(alg, &shifted, &RankOptions::with_seed(seed)).unwrap(), ind);
    }

    #[test]
    fn coboundaries_give_algebra_index(idx in 0usize..16, lam in prop::collection::vec(rat(), 4)) {
        let alg = &algebras()[idx];
        let b = trivial_cocycle(alg, &Covector(lam)).unwrap();
        prop_assert!(is_cocycle(alg, &b).unwrap().is_cocycle);
        prop_assert_eq!(
            cohomology_index(alg, &b, &RankOptions::default()).unwrap(),
            algebra_index(alg, &RankOptions::default())
        );
    }
}

#[test]
fn semisimple_parts_have_no_second_cohomology() {
    for id in ["g14", "g15"] {
        let alg = instantiate(id, int(1));
        let sub = alg
            .subalgebra(&[0, 1, 2], id)
            .expect("span of e1, e2, e3 is a subalgebra");
        let r = cohomology_report(&sub);
        assert_eq!((r.dim_z2, r.dim_b2, r.dim_h2), (3, 3, 0), "{id}");
    }
}

#[test]
fn split_extension_shift() {
    // a coboundary δλ extends to an algebra isomorphic to g ⊕ R via e_a ↦ e_a + λ_a e_0
    let alg = instantiate("g7", int(1));
    let lam = Covector::from_ints(&[3, -1, 2, 5]);
    let b = trivial_cocycle(&alg, &lam).unwrap();
    let ext = central_extension(&alg, &b).unwrap();
    let n = alg.dim();
    for a in 0..n {
        for c in 0..n {
            let mut x = vec![int(0); n + 1];
            x[a + 1] = int(1);
            x[0] = lam.0[a].clone();
            let mut y = vec![int(0); n + 1];
            y[c + 1] = int(1);
            y[0] = lam.0[c].clone();
            let br = ext.extended.bracket(&x, &y);
            // [e_a + λ_a e_0, e_c + λ_c e_0] = C^d_ac (e_d + λ_d e_0)
            let mut want = vec![int(0); n + 1];
            for d in 0..n {
                let k = alg.c(a, c, d);
                want[d + 1] += k;
                want[0] += k * &lam.0[d];
            }
            assert_eq!(br, want);
        }
    }
}

#[test]
fn grid_oracle_sanity() {
    let g7 = instantiate("g7", int(1));
    let f = TwoCochain::from_labeled_ints(4, &[(1, 2, 1), (1, 3, 1), (2, 3, 2)]).unwrap();
    assert_eq!(grid_max_rank(&g7, &f), 4);
    let f = TwoCochain::from_labeled_ints(4, &[(1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
    assert_eq!(grid_max_rank(&g7, &f), 2);
}
