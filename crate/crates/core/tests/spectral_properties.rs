mod common;

use common::{arb_graph, random_graph};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seidel_lab::graphs::seidel_matrix;
use seidel_lab::spectral::{
    bareiss_determinant, cauchy_binet_check, char_poly_exact, eigenvalues, elementary_symmetric_a2,
    submatrix_det_parity, IntMatrix,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn backends_agree(g in arb_graph(1, 8)) {
        let s = seidel_matrix(&g);
        let jacobi = eigenvalues(&s).unwrap();
        let exact = char_poly_exact(&s).real_roots();
        prop_assert_eq!(exact.len(), g.order());
        for (x, y) in jacobi.values().iter().zip(&exact) {
            prop_assert!((x - y).abs() <= 1e-7, "{:?} vs {:?}", jacobi.values(), exact);
        }
    }

    #[test]
    fn spectrum_sanity(g in arb_graph(1, 30)) {
        let n = g.order();
        let s = seidel_matrix(&g);
        let spec = eigenvalues(&s).unwrap();
        let scale = n as f64;
        prop_assert!(spec.trace().abs() < 1e-9 * scale);
        prop_assert!((spec.sum_of_squares() - (n * (n - 1)) as f64).abs() < 1e-9 * scale * scale);
        prop_assert!(spec.residual() <= 1e-10 * scale);
        let poly = char_poly_exact(&s);
        // x^n + 0 x^{n-1} - (n(n-1)/2) x^{n-2} + ...
        prop_assert_eq!(poly.coeff(n), &BigInt::from(1));
        if n >= 2 {
            prop_assert_eq!(poly.coeff(n - 1), &BigInt::from(0));
            prop_assert_eq!(poly.coeff(n - 2), &-BigInt::from(n * (n - 1) / 2));
        }
        let sk = elementary_symmetric_a2(&s);
        prop_assert_eq!(&sk[0], &BigInt::from(1));
        prop_assert_eq!(&sk[1], &BigInt::from(n * (n - 1)));
        prop_assert!(sk.iter().all(|x| x.sign() != num_bigint::Sign::Minus));
    }

    #[test]
    fn sk_are_symmetric_functions_of_squares(g in arb_graph(1, 9)) {
        let s = seidel_matrix(&g);
        let sq: Vec<f64> = eigenvalues(&s).unwrap().values().iter().map(|x| x * x).collect();
        // e_k of the squared eigenvalues by the usual recurrence
        let mut e = vec![0.0; sq.len() + 1];
        e[0] = 1.0;
        for (i, x) in sq.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                e[k] += x * e[k - 1];
            }
        }
        let sk = elementary_symmetric_a2(&s);
        for (k, ek) in e.iter().enumerate() {
            let exact: f64 = sk[k].to_string().parse().unwrap();
            prop_assert!((exact - ek).abs() <= 1e-8 * exact.max(1.0), "k={} {} vs {}", k, exact, ek);
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=6);
    let cols = rng.gen_range(1..=6);
    IntMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-3..=3))
}

#[test]
fn cauchy_binet_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCB);
    for _ in 0..1000 {
        let r = random_matrix(&mut rng);
        for k in 0..=r.rows().min(r.cols()) + 1 {
            let (lhs, rhs) = cauchy_binet_check(&r, k);
            assert_eq!(lhs, rhs, "k = {k}, {r:?}");
        }
    }
}

#[test]
fn bareiss_matches_permutation_expansion() {
    fn leibniz(m: &IntMatrix) -> i64 {
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        permute(&mut perm, 0, m, &mut total);
        total
    }
    fn permute(p: &mut Vec<usize>, i: usize, m: &IntMatrix, total: &mut i64) {
        if i == p.len() {
            let inversions = (0..p.len())
                .flat_map(|a| (a + 1..p.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            let prod: i64 = (0..p.len()).map(|r| m.get(r, p[r])).product();
            *total += if inversions % 2 == 0 { prod } else { -prod };
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            permute(p, i + 1, m, total);
            p.swap(i, j);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let m = IntMatrix::from_fn(n, n, |_, _| rng.gen_range(-4..=4));
        assert_eq!(bareiss_determinant(&m), BigInt::from(leibniz(&m)), "{m:?}");
    }
}

#[test]
fn near_diagonal_minors_are_odd() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DD);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(1..=6.min(n - 1));
        let g = random_graph(&mut rng, n, 0.5);
        let s = seidel_matrix(&g);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut rng);
        // k - 1 shared indices plus one private index on each side
        let shared = &verts[..k - 1];
        let mut rows = shared.to_vec();
        rows.push(verts[k - 1]);
        let mut cols = shared.to_vec();
        cols.push(verts[k]);
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let det = submatrix_det_parity(&s, &rows, &cols).unwrap();
        assert!(det.is_odd(), "{g:?} rows {rows:?} cols {cols:?} det {det}");
    }
}

#[test]
fn minor_index_errors() {
    let s = seidel_matrix(&random_graph(&mut ChaCha8Rng::seed_from_u64(1), 5, 0.5));
    assert!(submatrix_det_parity(&s, &[0, 1], &[2]).is_err());
    assert!(submatrix_det_parity(&s, &[0, 0], &[1, 2]).is_err());
    assert!(submatrix_det_parity(&s, &[0, 5], &[1, 2]).is_err());
    assert!(submatrix_det_parity(&s, &[], &[]).is_err());
}
