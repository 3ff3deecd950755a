//! Bessel function of the first kind, order zero.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{NffError, Result};

const SERIES_LIMIT: f64 = 8.0;
const RECURRENCE_LIMIT: f64 = 25.0;

/// First positive zero of `J0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// `J0(x)` with absolute error below `1e-10` on `|x| ≤ 100`.
///
/// Small arguments use the power series, moderate ones Miller's backward
/// recurrence normalised by `J0 + 2·Σ J_2k = 1`, and large ones the Hankel
/// asymptotic expansion.
pub fn j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(NffError::NonFinite(x));
    }
    let x = x.abs();
    Ok(if x <= SERIES_LIMIT {
        series(x)
    } else if x <= RECURRENCE_LIMIT {
        miller(x)
    } else {
        hankel(x)
    })
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..100 {
        let k = k as f64;
        term *= q / (k * k);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn miller(x: f64) -> f64 {
    let mut m = (2.0 * x) as usize + 40;
    if m % 2 == 1 {
        m += 1;
    }
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=m).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if k - 1 == 0 {
            j0 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j0 *= 1e-250;
        }
    }
    norm += j0;
    j0 / norm
}

fn hankel(x: f64) -> f64 {
    // a_k = Π_{i=1..k} (2i-1)^2 / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            let kk = k as f64;
            term *= (2.0 * kk - 1.0).powi(2) / (8.0 * kk * x);
        }
        if term > last || term < 1e-18 {
            break;
        }
        last = term;
        // a_k(0) carries (-1)^k; P alternates over even k, Q over odd k
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q -= sign * term;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
