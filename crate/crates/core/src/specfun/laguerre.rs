/// Generalized Laguerre polynomial L_q^β(x) by upward three-term recurrence in degree.
pub fn laguerre(q: u32, beta: f64, x: f64) -> f64 {
    debug_assert!(beta > -1.0);
    let mut prev = 1.0;
    if q == 0 {
        return prev;
    }
    let mut cur = 1.0 + beta - x;
    for k in 1..q {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + beta - x) * cur - (kf + beta) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of L_0^β(x) ..= L_{q_max}^β(x), written into `out` (cleared first).
pub fn laguerre_sequence(q_max: u32, beta: f64, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if q_max == 0 {
        return;
    }
    out.push(1.0 + beta - x);
    for k in 1..q_max {
        let kf = f64::from(k);
        let k = k as usize;
        let next = ((2.0 * kf + 1.0 + beta - x) * out[k] - (kf + beta) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_identities() {
        assert_eq!(laguerre(0, 2.0, 5.0), 1.0);
        assert_eq!(laguerre(1, 2.0, 3.0), 0.0);
        assert!((laguerre(2, 1.0, 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sequence_matches_single_evaluations() {
        let mut seq = Vec::new();
        laguerre_sequence(9, 3.0, 7.25, &mut seq);
        assert_eq!(seq.len(), 10);
        for (q, v) in seq.iter().enumerate() {
            assert_eq!(*v, laguerre(q as u32, 3.0, 7.25));
        }
    }
}
