/// `e^{−|x|} I_n(x)` for `n = 0..=n_max`, by Miller's backward recurrence
/// normalised with `Î₀ + 2 Σ Î_n = 1` (the scaled form of `e^{|x|} = I₀ + 2ΣI_n`).
pub fn scaled_bessel_i_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // start far enough above both the order and the argument for the minimal
    // solution to dominate
    let mut start = n_max.max(ax.ceil() as usize) + 40 + (2.0 * ax).sqrt().ceil() as usize * 4;
    start += start % 2;
    let mut next = 0.0; // I_{k+1}
    let mut cur = 1e-300; // I_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / ax) * cur + next; // I_{k-1}
        next = cur;
        cur = prev;
        if k - 1 <= n_max {
            out[k - 1] = cur;
        }
        if k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += cur; // k = 0 term
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// `e^{−|x|} I_n(x)`.
pub fn scaled_bessel_i(n: usize, x: f64) -> f64 {
    scaled_bessel_i_all(n, x)[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize, x: f64) -> f64 {
        // Σ (x/2)^{n+2m} / (m! (n+m)!)
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for m in 1..60 {
            term *= (x / 2.0).powi(2) / (m as f64 * (n + m) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        for &(n, x) in &[(3usize, 2.0f64), (0, 0.5), (5, 7.5), (1, -3.0)] {
            let want = (-x.abs()).exp() * series(n, x);
            let got = scaled_bessel_i(n, x);
            assert!((got - want).abs() <= 1e-12 * want.abs(), "n={n} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(scaled_bessel_i(0, 0.0), 1.0);
        assert_eq!(scaled_bessel_i(4, 0.0), 0.0);
    }

    #[test]
    fn recurrence_identity() {
        let x = -1.0 / (4.0 * std::f64::consts::PI * 0.01);
        let v = scaled_bessel_i_all(60, x);
        for n in 1..=50 {
            let r = v[n - 1] - v[n + 1] - 2.0 * n as f64 / x * v[n];
            assert!(r.abs() < 1e-10, "n={n}: {r}");
        }
    }
}
