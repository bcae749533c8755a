//! Bessel functions J_k(x) of integer order via Miller's downward recurrence.
//!
//! Needed for Chebyshev propagator coefficients exp(−ix cosθ) expansions;
//! the downward recurrence is stable for all orders and normalized with
//! J_0 + 2·Σ J_{2k} = 1.

/// All J_0(x), …, J_n(x) for x ≥ 0.
pub fn bessel_j_upto(n: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0);
    if x == 0.0 {
        let mut out = vec![0.0; n + 1];
        out[0] = 1.0;
        return out;
    }
    // start the backward recurrence well above max(n, x)
    let start = (n.max(x as usize) + 1) * 2 + 20;
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut out = vec![0.0; n + 1];
    let mut norm = 0.0_f64; // J0 + 2 Σ J_{2k}
    for k in (0..start).rev() {
        let jm1 = (2.0 * (k as f64 + 1.0) / x) * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_k (un-normalized)
        if k <= n {
            out[k] = j;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        // rescale to avoid overflow
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // Abramowitz & Stegun reference values
        let j = bessel_j_upto(5, 1.0);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-13);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-13);
        assert!((j[2] - 0.114_903_484_931_900_5).abs() < 1e-13);
        let j = bessel_j_upto(3, 5.0);
        assert!((j[0] - (-0.177_596_771_314_338_3)).abs() < 1e-12);
        assert!((j[1] - (-0.327_579_137_591_465_2)).abs() < 1e-12);
    }

    #[test]
    fn tail_decay_superexponential() {
        let x = 10.0;
        let j = bessel_j_upto(60, x);
        assert!(j[40].abs() < 1e-15);
        assert!(j[60].abs() < 1e-30);
    }

    #[test]
    fn zero_argument() {
        let j = bessel_j_upto(4, 0.0);
        assert_eq!(j, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }
}
