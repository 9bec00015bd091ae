/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by upward recurrence.
pub fn laguerre(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `⟨m|D(β)|n⟩` for real β from the closed Laguerre form.
pub fn displaced_fock_element(m: usize, n: usize, beta: f64) -> f64 {
    let (lo, hi) = if m >= n { (n, m) } else { (m, n) };
    let k = hi - lo;
    let mut ratio = 1.0;
    for j in lo + 1..=hi {
        ratio /= j as f64;
    }
    let sign_beta = if m >= n { beta } else { -beta };
    ratio.sqrt() * sign_beta.powi(k as i32) * (-beta * beta / 2.0).exp() * laguerre(lo, k as f64, beta * beta)
}
