//! Minimal binding to LAPACK's `dgeev` returning both left and right
//! eigenvectors.
//!
//! `ndarray-linalg` exposes only right eigenvectors through its `Eig` trait;
//! the perturbation criterion needs the left/right pair from the same call so
//! that the two stay index-aligned. The symbol is resolved through the
//! OpenBLAS library that `ndarray-linalg` already links.

use ndarray::Array2;

use crate::error::{Error, Result};

extern "C" {
    fn dgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        wr: *mut f64,
        wi: *mut f64,
        vl: *mut f64,
        ldvl: *const i32,
        vr: *mut f64,
        ldvr: *const i32,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );
}

/// Raw output of `dgeev`: eigenvalues as `(wr, wi)` and the packed real
/// left/right eigenvector matrices in LAPACK's column-pair encoding.
pub(crate) struct RawEig {
    pub wr: Vec<f64>,
    pub wi: Vec<f64>,
    /// Left eigenvectors, column-major n*n.
    pub vl: Vec<f64>,
    /// Right eigenvectors, column-major n*n.
    pub vr: Vec<f64>,
}

/// Computes eigenvalues plus left and right eigenvectors of a real square
/// matrix. Fails with the matrix fingerprint if the QR iteration does not
/// converge.
pub(crate) fn dgeev_full(a: &Array2<f64>) -> Result<RawEig> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "dgeev_full requires a square matrix");
    let ni = n as i32;

    // column-major copy
    let mut buf = vec![0.0f64; n * n];
    for j in 0..n {
        for i in 0..n {
            buf[j * n + i] = a[[i, j]];
        }
    }

    let mut wr = vec![0.0f64; n];
    let mut wi = vec![0.0f64; n];
    let mut vl = vec![0.0f64; n * n];
    let mut vr = vec![0.0f64; n * n];
    let mut info: i32 = 0;

    // workspace query
    let mut work_query = [0.0f64];
    let lwork_query: i32 = -1;
    unsafe {
        dgeev_(
            b"V".as_ptr(),
            b"V".as_ptr(),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            vl.as_mut_ptr(),
            &ni,
            vr.as_mut_ptr(),
            &ni,
            work_query.as_mut_ptr(),
            &lwork_query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(fingerprint_error(a, info));
    }
    let lwork = work_query[0] as i32;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    unsafe {
        dgeev_(
            b"V".as_ptr(),
            b"V".as_ptr(),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            vl.as_mut_ptr(),
            &ni,
            vr.as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(fingerprint_error(a, info));
    }
    Ok(RawEig { wr, wi, vl, vr })
}

fn fingerprint_error(a: &Array2<f64>, info: i32) -> Error {
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nnz = a.iter().filter(|x| **x != 0.0).count();
    Error::EigFailed {
        n: a.nrows(),
        fro,
        nnz,
        info,
    }
}
