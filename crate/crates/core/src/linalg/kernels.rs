//! Row-update kernels shared by the product, factorization and solves.
//!
//! Every kernel applies its terms to each target entry one at a time in the
//! order given, so unrolling over source rows changes memory traffic only,
//! never the rounded result.

const LANES: usize = 4;

/// `t -= l[0]*s[0]; t -= l[1]*s[1]; ...` entrywise, in that order.
#[inline]
pub(crate) fn sub_rows(t: &mut [f64], l: &[f64], s: &[&[f64]]) {
    debug_assert_eq!(l.len(), s.len());
    let n = t.len();
    let mut k = 0;
    while k + 4 <= l.len() {
        let (s0, s1, s2, s3) = (&s[k][..n], &s[k + 1][..n], &s[k + 2][..n], &s[k + 3][..n]);
        let (l0, l1, l2, l3) = (l[k], l[k + 1], l[k + 2], l[k + 3]);
        for j in 0..n {
            let mut v = t[j];
            v -= l0 * s0[j];
            v -= l1 * s1[j];
            v -= l2 * s2[j];
            v -= l3 * s3[j];
            t[j] = v;
        }
        k += 4;
    }
    for (&lk, sk) in l[k..].iter().zip(&s[k..]) {
        for (tv, sv) in t.iter_mut().zip(&sk[..n]) {
            *tv -= lk * sv;
        }
    }
}

/// `t += a[0]*s[0]; t += a[1]*s[1]; ...` entrywise, in that order.
#[inline]
pub(crate) fn add_rows(t: &mut [f64], a: &[f64], s: &[&[f64]]) {
    let n = t.len();
    let mut k = 0;
    while k + 4 <= a.len() {
        let (s0, s1, s2, s3) = (&s[k][..n], &s[k + 1][..n], &s[k + 2][..n], &s[k + 3][..n]);
        let (a0, a1, a2, a3) = (a[k], a[k + 1], a[k + 2], a[k + 3]);
        for j in 0..n {
            let mut v = t[j];
            v += a0 * s0[j];
            v += a1 * s1[j];
            v += a2 * s2[j];
            v += a3 * s3[j];
            t[j] = v;
        }
        k += 4;
    }
    for (&ak, sk) in a[k..].iter().zip(&s[k..]) {
        for (tv, sv) in t.iter_mut().zip(&sk[..n]) {
            *tv += ak * sv;
        }
    }
}

/// [`sub_rows`] that also raises `peak` to the largest magnitude any entry
/// takes after any single update.
#[inline]
pub(crate) fn sub_rows_tracked(t: &mut [f64], l: &[f64], s: &[&[f64]], peak: &mut f64) {
    let n = t.len();
    let mut lanes = [0.0f64; LANES];
    let mut k = 0;
    while k + 4 <= l.len() {
        let (s0, s1, s2, s3) = (&s[k][..n], &s[k + 1][..n], &s[k + 2][..n], &s[k + 3][..n]);
        let (l0, l1, l2, l3) = (l[k], l[k + 1], l[k + 2], l[k + 3]);
        let body = n - n % LANES;
        for j0 in (0..body).step_by(LANES) {
            for lane in 0..LANES {
                let j = j0 + lane;
                let mut v = t[j];
                let mut m = lanes[lane];
                v -= l0 * s0[j];
                m = m.max(v.abs());
                v -= l1 * s1[j];
                m = m.max(v.abs());
                v -= l2 * s2[j];
                m = m.max(v.abs());
                v -= l3 * s3[j];
                lanes[lane] = m.max(v.abs());
                t[j] = v;
            }
        }
        for j in body..n {
            let mut v = t[j];
            for (lk, sk) in [(l0, s0), (l1, s1), (l2, s2), (l3, s3)] {
                v -= lk * sk[j];
                lanes[0] = lanes[0].max(v.abs());
            }
            t[j] = v;
        }
        k += 4;
    }
    for (&lk, sk) in l[k..].iter().zip(&s[k..]) {
        let sk = &sk[..n];
        let body = n - n % LANES;
        for j0 in (0..body).step_by(LANES) {
            for lane in 0..LANES {
                let v = t[j0 + lane] - lk * sk[j0 + lane];
                t[j0 + lane] = v;
                lanes[lane] = lanes[lane].max(v.abs());
            }
        }
        for j in body..n {
            let v = t[j] - lk * sk[j];
            t[j] = v;
            lanes[0] = lanes[0].max(v.abs());
        }
    }
    *peak = lanes.iter().fold(*peak, |p, &v| p.max(v));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(count: usize, len: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|k| (0..len).map(|j| ((k * 31 + j * 17) % 23) as f64 / 7.0 - 1.3).collect())
            .collect()
    }

    #[test]
    fn unrolled_kernels_match_sequential_updates() {
        for (count, len) in [(0, 5), (3, 9), (4, 8), (7, 13), (9, 3)] {
            let src = rows(count, len);
            let refs: Vec<&[f64]> = src.iter().map(Vec::as_slice).collect();
            let coef: Vec<f64> = (0..count).map(|k| 0.37 * k as f64 - 0.9).collect();
            let start: Vec<f64> = (0..len).map(|j| j as f64 * 0.11 + 0.5).collect();

            let mut expect_sub = start.clone();
            let mut expect_add = start.clone();
            let mut expect_peak = 0.0f64;
            for k in 0..count {
                for j in 0..len {
                    expect_sub[j] -= coef[k] * src[k][j];
                    expect_peak = expect_peak.max(expect_sub[j].abs());
                    expect_add[j] += coef[k] * src[k][j];
                }
            }

            let mut t = start.clone();
            sub_rows(&mut t, &coef, &refs);
            assert_eq!(t, expect_sub);
            let mut t = start.clone();
            add_rows(&mut t, &coef, &refs);
            assert_eq!(t, expect_add);
            let mut t = start.clone();
            let mut peak = 0.0;
            sub_rows_tracked(&mut t, &coef, &refs, &mut peak);
            assert_eq!(t, expect_sub);
            assert_eq!(peak, expect_peak);
        }
    }
}
