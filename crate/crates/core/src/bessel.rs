//! Bessel functions of the first kind, `J_n(x)`, by backward (Miller)
//! recurrence with normalization. Stable for all orders needed by the
//! spectrum coefficient computation, with no external dependencies.

/// Compute `J_0(x) .. J_nmax(x)` for `x >= 0`.
///
/// Runs the three-term recurrence `J_{k-1} = (2k/x) J_k - J_{k+1}` downward
/// from a start order well past the turning point, then normalizes with
/// `J_0 + 2 sum J_{2k} = 1`. Negative orders follow from
/// `J_{-n} = (-1)^n J_n`.
pub fn bessel_j_sequence(x: f64, nmax: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and non-negative");
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }

    // Start far enough above max(nmax, x) that the downward recurrence has
    // converged to the true ratio by the time it reaches nmax.
    let top = (nmax as f64).max(x);
    let mut start = (top + 20.0 + 12.0 * top.sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let mut out = vec![0.0; nmax + 1];
    let mut jp = 0.0f64; // J_{k+1}
    let mut j = 1e-300f64; // J_k (arbitrary tiny seed)
    let mut norm = 0.0f64; // accumulates J_0 + 2 sum J_{2m}
    for k in (0..=start).rev() {
        let jm = (2.0 * (k + 1) as f64 / x) * j - jp; // J_k from J_{k+1}, J_{k+2}
        jp = j;
        j = jm;
        if k <= nmax {
            out[k] = j;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        // rescale before overflow; backward recurrence grows rapidly
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_n(x)` for a single signed order.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let nu = n.unsigned_abs() as usize;
    let v = bessel_j_sequence(x, nu)[nu];
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Smallest order past which `|J_n(x)| < 1e-16` for the given argument;
/// used to truncate per-harmonic coefficient sequences.
pub fn negligible_order(x: f64) -> usize {
    if x < 1e-12 {
        return 1;
    }
    (x + 14.0 + 10.0 * x.cbrt()).ceil() as usize
}
