use invroot::{
    eigenvalues, generate_spd, inverse_pth_root, jacobi_eigh, mat_mul, norm_two_sym, spectral_function,
    tridiagonal_eigh, Error, Mat, Matrix, MatrixSpec, MultLedger, Real, SymMat, SymMatrix, TwoFloat,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn products_and_ledger() {
    let mut l = MultLedger::new();
    let i = Mat::identity(3);
    assert_eq!(mat_mul(&i, &i, &mut l).unwrap(), i);
    assert_eq!(l.count, 1);

    let d = mat_mul(&Mat::diag(&[2.0, 3.0]), &Mat::diag(&[4.0, 5.0]), &mut l).unwrap();
    assert_eq!(d, Mat::diag(&[8.0, 15.0]));

    let a = Mat::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
    assert_eq!(mat_mul(&a, &a, &mut l).unwrap(), Mat::from_rows(&[[5.0, 4.0], [4.0, 5.0]]).unwrap());
    assert_eq!(l.count, 3);

    assert!(matches!(mat_mul(&a, &i, &mut l), Err(Error::DimensionMismatch { left: 2, right: 3 })));
    assert_eq!(l.count, 3);
}

#[test]
fn eigen_examples_both_solvers() {
    for solve in [jacobi_eigh::<f64>, tridiagonal_eigh::<f64>] {
        let i = SymMat::identity(4);
        let dec = solve(&i).unwrap();
        assert!(dec.eigenvalues.iter().all(|&v| close(v, 1.0, 1e-15)));
        assert!(dec.reconstruct().sub(&i).max_abs() < 1e-14);

        let dec = solve(&SymMat::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        assert!(close(dec.eigenvalues[0], 1.0, 1e-14) && close(dec.eigenvalues[1], 3.0, 1e-14));

        let dec = solve(&SymMat::diag(&[5.0, 1.0, 3.0])).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0, 3.0, 5.0]);
        assert!(dec.orthogonality_defect() < 1e-15);
    }
}

#[test]
fn solvers_agree_on_random_spd() {
    for seed in 0..20 {
        let a = generate_spd(&MatrixSpec::new(5 + seed as usize, 0.6, 1e3, 2.0, seed)).unwrap();
        let j = jacobi_eigh(&a).unwrap();
        let t = tridiagonal_eigh(&a).unwrap();
        let scale = a.frobenius();
        for (x, y) in j.eigenvalues.iter().zip(&t.eigenvalues) {
            assert!(close(*x, *y, 1e-13 * scale), "seed {seed}: {x} vs {y}");
        }
        for dec in [&j, &t] {
            assert!(dec.reconstruct().sub(&a).frobenius() <= 1e-13 * scale);
            assert!(dec.orthogonality_defect() < 1e-13);
        }
    }
}

#[test]
fn norm_examples() {
    let i = SymMat::identity(3);
    assert_eq!((i.norm_one(), i.norm_inf(), norm_two_sym(&i).unwrap()), (1.0, 1.0, 1.0));
    let m = SymMat::from_rows(&[[1.0, -2.0], [-2.0, 1.0]]).unwrap();
    assert_eq!(m.norm_one(), 3.0);
    assert_eq!(m.norm_inf(), 3.0);
    assert!(close(norm_two_sym(&m).unwrap(), 3.0, 1e-14));
    assert!(close(m.norm_two().unwrap(), 3.0, 1e-14));
}

#[test]
fn nonsymmetric_norm_uses_singular_values() {
    // singular values of [[0,2],[0,0]] are 2 and 0
    let m = Mat::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
    assert!(close(m.norm_two().unwrap(), 2.0, 1e-15));
}

#[test]
fn spectral_examples() {
    let b = spectral_function(&SymMat::scaled_identity(3, 4.0), |x: f64| x.powf(-0.5)).unwrap();
    assert!(b.sub(&SymMat::scaled_identity(3, 0.5)).max_abs() < 1e-15);

    let b = inverse_pth_root(&SymMat::diag(&[1.0, 16.0]), 4).unwrap();
    assert!(b.sub(&SymMat::diag(&[1.0, 0.5])).max_abs() < 1e-15);

    let a = SymMat::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
    let b = spectral_function(&a, |x: f64| x.powf(-0.5)).unwrap();
    let s = 3f64.powf(-0.5);
    let (diag, off) = ((1.0 + s) / 2.0, -(1.0 - s) / 2.0);
    assert!(close(b.get(0, 0), diag, 1e-15) && close(b.get(1, 1), diag, 1e-15));
    assert!(close(b.get(0, 1), off, 1e-15) && close(b.get(1, 0), off, 1e-15));
    assert!(close(diag, 0.788675134594813, 1e-15) && close(off, -0.211324865405187, 1e-15));
    let mut l = MultLedger::new();
    let b2a = mat_mul(&mat_mul(&b, &b, &mut l).unwrap(), &a, &mut l).unwrap();
    assert!(b2a.sub(&Mat::identity(2)).max_abs() < 1e-14);
}

#[test]
fn spectral_identity_reproduces_input() {
    for seed in 0..10 {
        let a = generate_spd(&MatrixSpec::new(20, 0.3, 1e4, 3.0, seed)).unwrap();
        let back = spectral_function(&a, |x| x).unwrap();
        assert!(back.sub(&a).frobenius() <= 1e-10 * a.frobenius());
    }
}

#[test]
fn inverse_roots_invert_up_to_cond_1e6() {
    for (seed, cond) in [(1, 1e2), (2, 1e4), (3, 1e6)] {
        let a = generate_spd(&MatrixSpec::new(15, 0.5, cond, 1.0, seed)).unwrap();
        for p in 1..=6 {
            let b = inverse_pth_root(&a, p).unwrap();
            let mut l = MultLedger::new();
            let mut m = a.as_matrix().clone();
            for _ in 0..p {
                m = mat_mul(&b, &m, &mut l).unwrap();
            }
            let defect = m.sub(&Mat::identity(15)).frobenius();
            assert!(defect <= 1e-8, "cond {cond}, p {p}: {defect:e}");
        }
    }
}

#[test]
fn contraction_lemma() {
    // SPD C with |C|_2 <= 1 gives |I - C|_2 = 1 - lambda_min(C) < 1
    for seed in 0..10 {
        let c = generate_spd(&MatrixSpec::new(8, 0.7, 50.0, 0.9, seed)).unwrap();
        let values = jacobi_eigh(&c).unwrap().eigenvalues;
        let lo = values[0];
        let rest = SymMat::new(Mat::identity(8).sub(&c)).unwrap();
        let top = jacobi_eigh(&rest).unwrap().eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(norm_two_sym(&c).unwrap() <= 1.0);
        assert!(close(top, 1.0 - lo, 1e-14), "{top} vs {}", 1.0 - lo);
        assert!(top < 1.0);
    }
}

#[test]
fn symmetry_is_enforced() {
    let m = Mat::from_rows(&[[1.0, 2.0], [2.0 + 1e-3, 1.0]]).unwrap();
    assert!(matches!(SymMat::new(m.clone()), Err(Error::NotSymmetric { .. })));
    let s = SymMat::from_symmetrized(&m);
    assert_eq!(s.get(0, 1), s.get(1, 0));
    assert!(matches!(Mat::from_vec(2, vec![1.0; 3]), Err(Error::BadShape { len: 3, expected: 4 })));
    assert!(matches!(inverse_pth_root(&SymMat::diag(&[1.0, 0.0]), 2), Err(Error::NotPositiveDefinite(_))));
}

#[test]
fn density_counts_nonzeros() {
    assert_eq!(Mat::identity(10).density(), 0.1);
    assert_eq!(Mat::from_rows(&[[1.0, 0.0], [3.0, 0.0]]).unwrap().density(), 0.5);
}

#[test]
fn extended_precision_eigenvalues() {
    let lit = <TwoFloat as Real>::lit;
    let a = SymMatrix::from_rows(&[[lit(2.0), lit(1.0)], [lit(1.0), lit(2.0)]]).unwrap();
    for values in [eigenvalues(&a).unwrap(), jacobi_eigh(&a).unwrap().eigenvalues] {
        assert!((values[0] - lit(1.0)).abs() < lit(1e-28), "{}", values[0]);
        assert!((values[1] - lit(3.0)).abs() < lit(1e-28), "{}", values[1]);
    }
    let b = inverse_pth_root(&a, 2).unwrap();
    let s = lit(3.0).sqrt();
    let want = (lit(1.0) + lit(1.0).quot(s)) * lit(0.5);
    assert!((b.get(0, 0) - want).abs() < lit(1e-26), "{}", b.get(0, 0) - want);
}

#[test]
fn single_precision_round_trip() {
    let a: SymMatrix<f32> = SymMat::from_rows(&[[4.0, 1.0], [1.0, 3.0]]).unwrap().cast();
    let b = inverse_pth_root(&a, 2).unwrap();
    let mut l = MultLedger::new();
    let m: Matrix<f32> = mat_mul(&mat_mul(&b, &b, &mut l).unwrap(), &a, &mut l).unwrap();
    assert!(m.sub(&Matrix::identity(2)).max_abs() < 1e-5);
}
