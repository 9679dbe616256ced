//! Central finite differences of an immersion.

use super::Immersion;
use crate::Result;
use nalgebra::{DMatrix, DVector};

fn shifted(x: &DVector<f64>, i: usize, d: f64) -> DVector<f64> {
    let mut y = x.clone();
    y[i] += d;
    y
}

fn shifted2(x: &DVector<f64>, i: usize, di: f64, j: usize, dj: f64) -> DVector<f64> {
    let mut y = x.clone();
    y[i] += di;
    y[j] += dj;
    y
}

/// Second-order Jacobian `(F(x+he_i) − F(x−he_i)) / 2h`.
pub(crate) fn jacobian(im: &dyn Immersion, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    let n = im.domain_dim();
    let mut j = DMatrix::zeros(im.ambient_dim(), n);
    for i in 0..n {
        let d = (im.eval(&shifted(x, i, h))? - im.eval(&shifted(x, i, -h))?) / (2.0 * h);
        j.set_column(i, &d);
    }
    Ok(j)
}

/// Coordinate second derivatives `F_ij`, row-major `i * n + j`, symmetric.
pub(crate) fn hessian(
    im: &dyn Immersion,
    x: &DVector<f64>,
    h: f64,
    center: &DVector<f64>,
) -> Result<Vec<DVector<f64>>> {
    let n = im.domain_dim();
    let mut out = vec![DVector::zeros(im.ambient_dim()); n * n];
    for i in 0..n {
        let d = (im.eval(&shifted(x, i, h))? + im.eval(&shifted(x, i, -h))? - center * 2.0) / (h * h);
        out[i * n + i] = d;
        for j in (i + 1)..n {
            let pp = im.eval(&shifted2(x, i, h, j, h))?;
            let pm = im.eval(&shifted2(x, i, h, j, -h))?;
            let mp = im.eval(&shifted2(x, i, -h, j, h))?;
            let mm = im.eval(&shifted2(x, i, -h, j, -h))?;
            let d = (pp - pm - mp + mm) / (4.0 * h * h);
            out[i * n + j] = d.clone();
            out[j * n + i] = d;
        }
    }
    Ok(out)
}

/// Eighth-order Jacobian on the nine-point stencil.
pub(crate) fn jacobian8(im: &dyn Immersion, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let n = im.domain_dim();
    let mut j = DMatrix::zeros(im.ambient_dim(), n);
    for i in 0..n {
        let mut d = DVector::zeros(im.ambient_dim());
        for (k, c) in C.iter().enumerate() {
            let s = (k + 1) as f64 * h;
            d += (im.eval(&shifted(x, i, s))? - im.eval(&shifted(x, i, -s))?) * *c;
        }
        j.set_column(i, &(d / h));
    }
    Ok(j)
}
