use crate::error::{Error, Result};
use crate::real::Real;

/// Points used in the fit.
pub const ORDER_FIT_POINTS: usize = 4;

/// Empirical order of convergence from an error history.
///
/// Uses the strictly decreasing tail of `|e_k|` inside `(1e4 eps, 1]`,
/// cut at the first value at or below the rounding floor, and returns the
/// least-squares slope of `ln e_{k+1}` against `ln e_k` over its last
/// [`ORDER_FIT_POINTS`] points.
pub fn estimate_order<T: Real>(errors: &[T]) -> Result<T> {
    let floor = T::unit_roundoff() * T::lit(1e4);
    let abs: Vec<T> = errors.iter().map(|e| e.abs()).take_while(|&e| e > floor).collect();

    let mut start = abs.len();
    while start > 0 {
        let e = abs[start - 1];
        let fits = e <= T::one() && (start == abs.len() || e > abs[start]);
        if !fits {
            break;
        }
        start -= 1;
    }
    let tail = &abs[start..];
    if tail.len() < ORDER_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} usable errors, need {ORDER_FIT_POINTS}",
            tail.len()
        )));
    }
    let window = &tail[tail.len() - ORDER_FIT_POINTS..];
    let logs: Vec<T> = window.iter().map(|&e| e.ln()).collect();
    let xs = &logs[..logs.len() - 1];
    let ys = &logs[1..];
    let m = T::from_count(xs.len() as u32);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x).quot(m);
    let my = ys.iter().fold(T::zero(), |a, &y| a + y).quot(m);
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == T::zero() {
        return Err(Error::InsufficientData("errors do not vary".into()));
    }
    Ok(sxy.quot(sxx))
}
