//! Integer-order Bessel functions of the first kind.
//!
//! All orders `0..=n_max` are produced at once by Miller's backward
//! recurrence, normalised with `J₀ + 2 Σ J₂ₖ = 1`.  This is stable for every
//! order, including those deep in the evanescent region `n ≫ x`.

/// `J_0(x) ..= J_{n_max}(x)`.
pub fn bessel_j_table(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // Start well above both the requested order and the turning point.
    let start = {
        let base = n_max.max(ax.ceil() as usize);
        let extra = (40.0 + 2.0 * ax.sqrt() * 10.0) as usize;
        let s = base + extra;
        s + (s & 1)
    };

    let mut jp1 = 0.0f64;
    let mut j = 1e-300f64;
    let mut norm = 0.0f64;
    for k in (0..start).rev() {
        // J_{k} = (2(k+1)/x) J_{k+1} − J_{k+2}
        let jm1 = 2.0 * (k as f64 + 1.0) / ax * j - jp1;
        jp1 = j;
        j = jm1;
        if k <= n_max {
            out[k] = j;
        }
        if k % 2 == 0 && k > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            // rescale to avoid overflow
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += j;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for any integer `n`, using `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_table(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}
