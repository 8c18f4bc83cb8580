//! Sparse assembly and the eigensolvers against an independent dense build of
//! the Hamiltonian from Kronecker products of boson and spin matrices.

use dicke_stark::model::{build_hamiltonian, BasisSpec, ModelParams, Sector};
use dicke_stark::spectra::{lowest_eigenpairs_with, Method, SolverOptions};
use nalgebra::DMatrix;

fn boson(n_max: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// `J_z`, `J₊` for spin `j = N/2`, indexed by `m` from `−j` upward.
fn spin(n_atoms: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let j = n_atoms as f64 / 2.0;
    let d = n_atoms + 1;
    let mut jz = DMatrix::zeros(d, d);
    let mut jp = DMatrix::zeros(d, d);
    for i in 0..d {
        let m = -j + i as f64;
        jz[(i, i)] = m;
        if i + 1 < d {
            jp[(i + 1, i)] = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    (jz, jp)
}

/// `H` in the order photon-major, `m` ascending; the `(a + a†)²` term is the
/// square of the truncated `x` with the top level's missing `a a†` weight
/// restored, so it equals the projection of the untruncated operator.
fn dense_oracle(p: &ModelParams, n_max: usize) -> DMatrix<f64> {
    let a = boson(n_max);
    let ad = a.transpose();
    let (jz, jp) = spin(p.n_atoms);
    let jm = jp.transpose();
    let ib = DMatrix::<f64>::identity(n_max + 1, n_max + 1);
    let is = DMatrix::<f64>::identity(p.n_atoms + 1, p.n_atoms + 1);
    let n = p.n_atoms as f64;
    let num = &ad * &a;
    let mut x2 = (&a + &ad) * (&a + &ad);
    x2[(n_max, n_max)] += (n_max + 1) as f64;
    num.kronecker(&is) * p.omega
        + ib.kronecker(&jz) * p.delta
        + (ad.kronecker(&jm) + a.kronecker(&jp)) * (p.g / n.sqrt())
        + (ad.kronecker(&jp) + a.kronecker(&jm)) * (p.g * p.tau / n.sqrt())
        + num.kronecker(&jz) * (p.u / n)
        + x2.kronecker(&is) * p.a_square()
}

fn cases() -> Vec<(ModelParams, usize)> {
    vec![
        (ModelParams::new(1.0, 0.5, 0.3, 1.0, 0.0, 0.0, 4), 12),
        (ModelParams::new(1.0, 0.5, 0.3, 2.5, 0.5, 1.2, 5), 10),
        (ModelParams::new(1.3, 2.0, 0.7, 0.0, -0.6, 0.4, 7), 15),
        (ModelParams::new(0.8, 0.2, 0.1, 3.0, 1.7, 2.0, 1), 20),
        (ModelParams::new(1.0, 1.0, 0.45, 1.0, 0.0, 1.0, 10), 8),
    ]
}

#[test]
fn sparse_assembly_matches_kronecker_oracle() {
    for (p, n_max) in cases() {
        let h = build_hamiltonian(&p, &BasisSpec::new(p.n_atoms, n_max, Sector::Full)).unwrap();
        let dim = h.dim;
        let ours = DMatrix::from_row_slice(dim, dim, &h.to_dense());
        let oracle = dense_oracle(&p, n_max);
        let diff = (&ours - &oracle).abs().max();
        assert!(diff < 1e-12, "{p:?}: max entry difference {diff}");
    }
}

#[test]
fn standard_dicke_matches_oracle_spectrum() {
    let p = ModelParams::new(1.0, 1.0, 0.7, 1.0, 0.0, 0.0, 6);
    let n_max = 30;
    let mut exact: Vec<f64> = dense_oracle(&p, n_max)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    exact.sort_by(f64::total_cmp);
    let h = build_hamiltonian(&p, &BasisSpec::new(6, n_max, Sector::Full)).unwrap();
    for method in [Method::Dense, Method::Krylov, Method::ShiftInvert] {
        let opts = SolverOptions {
            tol: 1e-10,
            method,
            ..SolverOptions::default()
        };
        let s = lowest_eigenpairs_with(&h, 3, &opts).unwrap();
        for (e, x) in s.eigenvalues().iter().zip(&exact) {
            assert!((e - x).abs() < 1e-9, "{method:?}: {e} vs {x}");
        }
    }
}

#[test]
fn sectors_reassemble_the_full_spectrum() {
    for (p, n_max) in cases() {
        let full = BasisSpec::new(p.n_atoms, n_max, Sector::Full);
        let mut exact: Vec<f64> = dense_oracle(&p, n_max)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        exact.sort_by(f64::total_cmp);
        let mut merged = Vec::new();
        for sector in [Sector::Even, Sector::Odd] {
            let h = build_hamiltonian(&p, &full.with_sector(sector)).unwrap();
            let d = DMatrix::from_row_slice(h.dim, h.dim, &h.to_dense());
            merged.extend(d.symmetric_eigen().eigenvalues.iter().copied());
        }
        merged.sort_by(f64::total_cmp);
        assert_eq!(merged.len(), exact.len());
        for (a, b) in merged.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
