/// Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

pub fn factorial(n: u32) -> f64 {
    pochhammer(1.0, n)
}

/// Binomial coefficient as a float; exact while it fits in 53 bits.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Pizetti constant (d/2)_l / (1/2)_l relating spherical means of
/// directional derivatives to powers of the Laplacian.
pub fn pizetti_p(ell: u32, d: u32) -> f64 {
    pochhammer(d as f64 / 2.0, ell) / pochhammer(0.5, ell)
}

/// Monomial coefficients of the Chebyshev polynomial T_n, exact while they
/// fit in an i128.
fn chebyshev_coeffs(n: usize) -> Option<Vec<i128>> {
    let mut prev = vec![1i128];
    if n == 0 {
        return Some(prev);
    }
    let mut cur = vec![0i128, 1];
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1].checked_add(c.checked_mul(2)?)?;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] = next[i].checked_sub(*c)?;
        }
        prev = cur;
        cur = next;
    }
    Some(cur)
}

/// T_n(x) by the three-term recurrence.
pub fn chebyshev_t(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The (2k)-th derivative of T_{2m} at zero. Vanishes for k > m.
pub fn chebyshev_even_deriv_at_zero(m: u32, k: u32) -> f64 {
    if k > m {
        return 0.0;
    }
    let order = 2 * k as usize;
    if let Some(coeffs) = chebyshev_coeffs(2 * m as usize) {
        let fact = (1..=order as i128).try_fold(1i128, |acc, j| acc.checked_mul(j));
        if let Some(value) = fact.and_then(|f| f.checked_mul(coeffs[order])) {
            return value as f64;
        }
    }
    // explicit formula: coefficient of x^{2k} in T_{2m} is
    // (-1)^{m-k} m 4^k (m+k-1)! / ((m-k)! (2k)!)  for m >= 1
    let (mf, kf) = (m as f64, k as f64);
    let sign = if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    if k == 0 {
        return sign;
    }
    let log_mag = mf.ln() + kf * 4f64.ln() + ln_factorial(m + k - 1) - ln_factorial(m - k);
    sign * log_mag.exp()
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}
